//! Kähler structure on the tangent bundle: g, J, ω and the closedness of ω.

use nalgebra::DVector;
use toricweyl::dombrowski::{
    check_kahler, connector_at, kahler_at, CoordinateChange, DEFAULT_FD_STEP,
};
use toricweyl::geometry::theta_grid;
use toricweyl::FiniteExpFam;

fn main() -> toricweyl::Result<()> {
    let fam = FiniteExpFam::binomial(2)?;
    let data = kahler_at(&fam, &DVector::zeros(1), &DVector::from_vec(vec![0.7]))?;
    println!("g = {}", data.g);
    println!("J = {}", data.j);
    let x = DVector::from_vec(vec![1.0, 0.0]);
    let y = DVector::from_vec(vec![0.0, 1.0]);
    println!("ω((1,0),(0,1)) = {}", data.omega_of(&x, &y));

    let cat = FiniteExpFam::categorical(3)?;
    let report = check_kahler(&cat, &theta_grid(2, 3, 1.0), DEFAULT_FD_STEP)?;
    println!("{report:#?}");

    let k = connector_at(
        &cat,
        &CoordinateChange::Identity,
        &DVector::from_vec(vec![0.1, 0.2]),
        &DVector::from_vec(vec![1.0, -1.0]),
        &DVector::from_vec(vec![1.0, 1.0, 0.0, 2.0]),
    )?;
    println!("connector of (∂q1 + ∂q2 + 2∂r2) = {}", k.transpose());
    Ok(())
}
