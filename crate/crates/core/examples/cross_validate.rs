//! The Weyl group computed twice: from outcome permutations with affine
//! witnesses, and from dual-metric isometries of the momentum polytope.

use toricweyl::polytope::{cross_validate, DEFAULT_METRIC_SAMPLES, DEFAULT_METRIC_TOL};
use toricweyl::FiniteExpFam;

fn main() -> toricweyl::Result<()> {
    let mut families: Vec<(String, FiniteExpFam)> = Vec::new();
    for m in 3..=5 {
        families.push((format!("categorical({m})"), FiniteExpFam::categorical(m)?));
    }
    for n in 2..=5 {
        families.push((format!("binomial({n})"), FiniteExpFam::binomial(n)?));
    }
    for (name, fam) in &families {
        let cv = cross_validate(fam, DEFAULT_METRIC_SAMPLES, DEFAULT_METRIC_TOL, 42)?;
        println!(
            "{name:<16} witnesses {:>3}  polytope {:>3}  isometries {:>3}  residual {:.1e}  {}",
            cv.witness_order,
            cv.polytope_order,
            cv.metric_order,
            cv.map_residual,
            if cv.pass { "agree" } else { "DISAGREE" }
        );
    }
    Ok(())
}
