//! θ → η → θ through the Legendre transform.

use nalgebra::DVector;
use toricweyl::geometry::{legendre_dual_point, DEFAULT_MAX_ITER, DEFAULT_NEWTON_TOL};
use toricweyl::{Error, FiniteExpFam};

fn main() -> toricweyl::Result<()> {
    let fam = FiniteExpFam::binomial(4)?;
    for t in [-3.0, -0.5, 0.0, 1.0, 2.5] {
        let theta = DVector::from_vec(vec![t]);
        let eta = fam.mean_params(&theta)?;
        let dual = legendre_dual_point(&fam, &eta, DEFAULT_NEWTON_TOL, DEFAULT_MAX_ITER)?;
        println!(
            "θ = {t:>5}  η = {:.6}  recovered θ = {:.12}  ({} steps)  φ(η) = {:.6}",
            eta[0], dual.theta[0], dual.iterations, dual.phi
        );
    }

    let outside = DVector::from_vec(vec![4.0]);
    match legendre_dual_point(&fam, &outside, DEFAULT_NEWTON_TOL, DEFAULT_MAX_ITER) {
        Err(e @ Error::OutsidePolytope { .. }) => println!("η = 4: {e}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
