//! Fisher metric, α-connections and the duality identity
//! `∂_i h_jk = Γ^(α)_{ij,k} + Γ^(−α)_{ik,j}`.

use nalgebra::DVector;
use toricweyl::geometry::{check_duality_identity, theta_grid};
use toricweyl::FiniteExpFam;

fn main() -> toricweyl::Result<()> {
    let fam = FiniteExpFam::categorical(3)?;
    let theta = DVector::from_vec(vec![0.4, -0.3]);

    let h = fam.fisher(&theta)?.entries;
    let h_def = fam.fisher_def(&theta)?.entries;
    println!("h(θ) = {h}");
    println!("Hessian vs score-sum route: {:.2e}", (&h - &h_def).amax());

    for alpha in [-1.0, 0.0, 1.0] {
        let gamma = fam.christoffel_alpha(&theta, alpha)?;
        println!("α = {alpha:>4}: max |Γ| = {:.6}", gamma.max_abs());
    }

    let grid = theta_grid(fam.n(), 3, 1.0);
    let report = check_duality_identity(&fam, &grid, &[-1.0, 0.0, 1.0])?;
    println!(
        "duality identity on {} points: residual {:.2e}, pass {}",
        report.points, report.max_residual, report.pass
    );
    Ok(())
}
