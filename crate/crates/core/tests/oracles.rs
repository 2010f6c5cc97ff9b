//! Hand-derived values checked against the library.

use nalgebra::{DMatrix, DVector};
use toricweyl::polytope::{affine_symmetries, momentum_polytope};
use toricweyl::scalar::{int, rat, LogWeight};
use toricweyl::weyl::{action_on_statistics, affine_witness};
use toricweyl::{Backend, FiniteExpFam};

fn v(x: &[f64]) -> DVector<f64> {
    DVector::from_row_slice(x)
}

#[test]
fn categorical_metric_at_origin_by_finite_differences() {
    // ψ(θ) = ln(1 + e^θ1 + e^θ2); its Hessian at 0 is [[2/9, −1/9], [−1/9, 2/9]]
    let fam = FiniteExpFam::categorical(3).unwrap();
    let psi = |t: &DVector<f64>| (1.0 + t[0].exp() + t[1].exp()).ln();
    let step = 1e-4;
    let mut fd = DMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            let at = |si: f64, sj: f64| {
                let mut t = v(&[0.0, 0.0]);
                t[i] += si * step;
                t[j] += sj * step;
                psi(&t)
            };
            fd[(i, j)] = (at(1.0, 1.0) - at(1.0, -1.0) - at(-1.0, 1.0) + at(-1.0, -1.0))
                / (4.0 * step * step);
        }
    }
    let want = DMatrix::from_row_slice(2, 2, &[2.0 / 9.0, -1.0 / 9.0, -1.0 / 9.0, 2.0 / 9.0]);
    let h = fam.fisher(&v(&[0.0, 0.0])).unwrap().entries;
    assert!((&fd - &want).amax() < 1e-7);
    assert!((&h - &want).amax() < 1e-15);
}

#[test]
fn mixture_christoffel_entry() {
    // α = −1: Γ_{11,1} = E[s_1^3] with s = F − η, p = (1/3, 1/3, 1/3):
    // (1/3)(2/3)^3 + (2/3)(−1/3)^3 = 8/81 − 2/81 = 2/27
    let fam = FiniteExpFam::categorical(3).unwrap();
    let g = fam.christoffel_alpha(&v(&[0.0, 0.0]), -1.0).unwrap();
    assert!((g.get(0, 0, 0) - 2.0 / 27.0).abs() < 1e-15);
}

#[test]
fn binomial_metric_closed_form() {
    // Var of Binomial(n, 1/2) is n/4
    for n in 2..=5 {
        let fam = FiniteExpFam::binomial(n).unwrap();
        let h = fam.fisher(&v(&[0.0])).unwrap().entries;
        assert!((h[(0, 0)] - n as f64 / 4.0).abs() < 1e-14);
    }
}

#[test]
fn reversal_acts_on_statistics() {
    let fam = FiniteExpFam::binomial(2).unwrap();
    let rev = affine_witness(&fam, &[2, 1, 0]).unwrap();
    assert_eq!(
        action_on_statistics(&fam, &rev, &[0.0, 1.0, 2.0]).unwrap(),
        vec![2.0, 1.0, 0.0]
    );
}

#[test]
fn square_polytope_is_dihedral() {
    let fam = FiniteExpFam::new(
        (0..5).map(|i| format!("p{i}")).collect(),
        vec![LogWeight::zero(); 5],
        vec![
            vec![int(0), int(0)],
            vec![int(1), int(0)],
            vec![int(0), int(1)],
            vec![int(1), int(1)],
            vec![rat(1, 2), rat(1, 2)],
        ],
        Backend::Rational,
    )
    .unwrap();
    let poly = momentum_polytope(&fam);
    assert_eq!(poly.vertices, vec![0, 1, 2, 3]);
    assert_eq!(poly.combinations.len(), 1);
    assert_eq!(poly.combinations[0].0, 4);
    let syms = affine_symmetries(&poly).unwrap();
    assert_eq!(syms.len(), 8);
    // every map sends the center to itself
    for s in &syms {
        assert!((s.apply(&v(&[0.5, 0.5])) - v(&[0.5, 0.5])).amax() < 1e-15);
    }
}
