//! The momentum polytope conv{F_i}, its affine symmetries and the
//! subgroup preserving the dual metric.

use toricweyl::io::read_family;
use toricweyl::polytope::{
    affine_symmetries, interior_samples, metric_symmetries, momentum_polytope,
    DEFAULT_METRIC_SAMPLES, DEFAULT_METRIC_TOL,
};
use toricweyl::FiniteExpFam;

fn main() -> toricweyl::Result<()> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data");
    let families = [
        ("binomial(4)", FiniteExpFam::binomial(4)?),
        ("categorical(3)", FiniteExpFam::categorical(3)?),
        (
            "square",
            read_family(format!("{dir}/square.json").as_ref(), None)?,
        ),
    ];
    for (name, fam) in families {
        let poly = momentum_polytope(&fam);
        let affine = affine_symmetries(&poly)?;
        let samples = interior_samples(&fam, DEFAULT_METRIC_SAMPLES, 11)?;
        let metric = metric_symmetries(&fam, &samples, DEFAULT_METRIC_TOL)?;
        println!(
            "{name}: vertices {:?}, |Aff(Δ)| = {}, dual-metric isometries = {}",
            poly.vertices.iter().map(|i| i + 1).collect::<Vec<_>>(),
            affine.len(),
            metric.len()
        );
    }
    Ok(())
}
