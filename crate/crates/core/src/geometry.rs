//! Legendre duality between natural and expectation parameters, and
//! numerical checks of the dually flat structure.

use nalgebra::{DMatrix, DVector};
use num_rational::BigRational;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expfam::FiniteExpFam;
use crate::lp;
use crate::weyl::PermSymmetry;

pub const DEFAULT_NEWTON_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 100;
/// Central-difference step for first derivatives of the metric.
pub const FD_STEP: f64 = 1e-4;
pub const DUALITY_TOL: f64 = 1e-6;
pub const AFFINITY_TOL: f64 = 1e-6;
/// Minimal convex-weight margin for a floating point to count as interior.
pub const FLOAT_INTERIOR_SLACK: f64 = 1e-9;

/// A point of the expectation-parameter domain together with its dual data.
#[derive(Debug, Clone)]
pub struct DualPoint {
    pub eta: DVector<f64>,
    pub theta: DVector<f64>,
    /// Dual potential `<θ, η> − ψ(θ)`.
    pub phi: f64,
    /// Dual metric, the inverse Fisher metric at `theta`.
    pub k: DMatrix<f64>,
    pub iterations: usize,
    pub residual: f64,
}

/// Largest uniform convex weight with which `eta` is a combination of the
/// `F_i`; positive iff `eta` is strictly inside the momentum polytope.
/// Exact for rational families.
pub fn interior_margin(fam: &FiniteExpFam, eta: &DVector<f64>) -> Option<f64> {
    match fam.exact() {
        Some(exact) => {
            let points: Vec<Vec<BigRational>> = exact
                .f
                .row_iter()
                .map(|r| r.iter().cloned().collect())
                .collect();
            let target: Option<Vec<BigRational>> =
                eta.iter().map(|&v| BigRational::from_float(v)).collect();
            let margin =
                lp::interior_margin(&points, &target?, &BigRational::from_integer(0.into()))?;
            let value = crate::scalar::Field::to_f64(&margin);
            (margin > BigRational::from_integer(0.into())).then_some(value)
        }
        None => {
            let points: Vec<Vec<f64>> = fam
                .f()
                .row_iter()
                .map(|r| r.iter().copied().collect())
                .collect();
            let target: Vec<f64> = eta.iter().copied().collect();
            let margin = lp::interior_margin(&points, &target, &1e-12)?;
            (margin >= FLOAT_INTERIOR_SLACK).then_some(margin)
        }
    }
}

/// Solves `∇ψ(θ) = η` by damped Newton iteration from `θ = 0`.
pub fn legendre_dual_point(
    fam: &FiniteExpFam,
    eta: &DVector<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<DualPoint> {
    if eta.len() != fam.n() {
        return Err(Error::DimensionMismatch {
            expected: fam.n(),
            got: eta.len(),
        });
    }
    if interior_margin(fam, eta).is_none() {
        return Err(Error::OutsidePolytope {
            eta: eta.iter().copied().collect(),
        });
    }
    newton(fam, eta, tol, max_iter)
}

/// Newton solve without the interior test; callers guarantee `eta` is
/// interior.
pub(crate) fn newton(
    fam: &FiniteExpFam,
    eta: &DVector<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<DualPoint> {
    let mut theta = DVector::zeros(fam.n());
    let mut residual_vec = fam.mean_params(&theta)? - eta;
    let mut residual = residual_vec.norm();
    let mut iterations = 0;
    while residual > tol {
        if iterations == max_iter {
            return Err(Error::NoConvergence {
                iterations,
                residual,
            });
        }
        iterations += 1;
        let h = fam.fisher(&theta)?.entries;
        let step = h
            .cholesky()
            .ok_or_else(|| Error::PositivityLost {
                theta: theta.iter().copied().collect(),
            })?
            .solve(&residual_vec);
        let mut t = 1.0;
        loop {
            let candidate = &theta - &step * t;
            let r = fam.mean_params(&candidate)? - eta;
            if r.norm() < residual || t < 1e-12 {
                theta = candidate;
                residual_vec = r;
                break;
            }
            t *= 0.5;
        }
        let next = residual_vec.norm();
        if next >= residual && next > tol {
            return Err(Error::NoConvergence {
                iterations,
                residual: next,
            });
        }
        residual = next;
    }
    let h = fam.fisher(&theta)?.entries;
    let k = h.try_inverse().ok_or_else(|| Error::PositivityLost {
        theta: theta.iter().copied().collect(),
    })?;
    let phi = theta.dot(eta) - fam.log_partition(&theta)?;
    Ok(DualPoint {
        eta: eta.clone(),
        theta,
        phi,
        k: (&k + k.transpose()) * 0.5,
        iterations,
        residual,
    })
}

/// Dual metric `k(η)`, the inverse of the Fisher metric at `θ(η)`.
pub fn dual_metric(fam: &FiniteExpFam, eta: &DVector<f64>) -> Result<DMatrix<f64>> {
    Ok(legendre_dual_point(fam, eta, DEFAULT_NEWTON_TOL, DEFAULT_MAX_ITER)?.k)
}

#[derive(Debug, Clone, Serialize)]
pub struct DualityReport {
    pub points: usize,
    pub alphas: Vec<f64>,
    pub max_residual: f64,
    pub pass: bool,
}

/// Checks `∂_i h_jk = Γ^{(α)}_{ij,k} + Γ^{(−α)}_{ik,j}` with the metric
/// derivative taken by central differences.
pub fn check_duality_identity(
    fam: &FiniteExpFam,
    theta_grid: &[DVector<f64>],
    alphas: &[f64],
) -> Result<DualityReport> {
    let n = fam.n();
    let mut max_residual: f64 = 0.0;
    for theta in theta_grid {
        let dh = metric_derivative(fam, theta, FD_STEP)?;
        for &alpha in alphas {
            let plus = fam.christoffel_alpha(theta, alpha)?;
            let minus = fam.christoffel_alpha(theta, -alpha)?;
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let lhs = dh[i][(j, k)];
                        let rhs = plus.get(i, j, k) + minus.get(i, k, j);
                        max_residual = max_residual.max((lhs - rhs).abs());
                    }
                }
            }
        }
    }
    Ok(DualityReport {
        points: theta_grid.len(),
        alphas: alphas.to_vec(),
        max_residual,
        pass: max_residual <= DUALITY_TOL,
    })
}

/// `[∂_i h]` for each coordinate direction `i`, by central differences.
pub fn metric_derivative(
    fam: &FiniteExpFam,
    theta: &DVector<f64>,
    step: f64,
) -> Result<Vec<DMatrix<f64>>> {
    (0..fam.n())
        .map(|i| {
            let mut fwd = theta.clone();
            let mut bwd = theta.clone();
            fwd[i] += step;
            bwd[i] -= step;
            let hp = fam.fisher(&fwd)?.entries;
            let hm = fam.fisher(&bwd)?.entries;
            Ok((hp - hm) / (2.0 * step))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct AffinityReport {
    /// Fitted η-map `η ↦ linear·η + offset`.
    pub linear: DMatrix<f64>,
    pub offset: DVector<f64>,
    pub residual: f64,
    pub pass: bool,
}

/// Conjugates the natural-parameter map `θ ↦ Aθ + B` of a witness through
/// the mean map and checks that the induced expectation-parameter map is
/// affine: an exact affine fit on the first `n + 1` samples, residual on
/// the rest.
pub fn check_dual_affinity(
    fam: &FiniteExpFam,
    witness: &PermSymmetry,
    samples: &[DVector<f64>],
) -> Result<AffinityReport> {
    let n = fam.n();
    if samples.len() < n + 2 {
        return Err(Error::InvalidSize(format!(
            "dual affinity check needs at least {} samples, got {}",
            n + 2,
            samples.len()
        )));
    }
    let (a, b) = (witness.a(), witness.b());
    let pairs: Vec<(DVector<f64>, DVector<f64>)> = samples
        .iter()
        .map(|theta| {
            let image = a * theta + b;
            Ok((fam.mean_params(theta)?, fam.mean_params(&image)?))
        })
        .collect::<Result<_>>()?;

    let base = DMatrix::from_fn(n + 1, n + 1, |s, j| if j < n { pairs[s].0[j] } else { 1.0 });
    let targets = DMatrix::from_fn(n + 1, n, |s, j| pairs[s].1[j]);
    let solution = base
        .lu()
        .solve(&targets)
        .ok_or_else(|| Error::InvalidSize("affinely dependent base samples".into()))?;
    let linear = solution.rows(0, n).transpose();
    let offset = solution.row(n).transpose();

    let residual = pairs
        .iter()
        .map(|(eta, image)| (&linear * eta + &offset - image).amax())
        .fold(0.0, f64::max);
    Ok(AffinityReport {
        linear,
        offset,
        residual,
        pass: residual <= AFFINITY_TOL,
    })
}

/// `points_per_axis^n` grid on `[-radius, radius]^n`.
pub fn theta_grid(n: usize, points_per_axis: usize, radius: f64) -> Vec<DVector<f64>> {
    let axis: Vec<f64> = match points_per_axis {
        0 => return Vec::new(),
        1 => vec![0.0],
        k => (0..k)
            .map(|i| -radius + 2.0 * radius * i as f64 / (k - 1) as f64)
            .collect(),
    };
    let mut out = vec![DVector::zeros(n)];
    for d in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&v| {
                    let mut q = p.clone();
                    q[d] = v;
                    q
                })
            })
            .collect();
    }
    out
}

/// Uniform samples from the closed ball of the given radius.
pub fn random_points<R: Rng + ?Sized>(
    n: usize,
    count: usize,
    radius: f64,
    rng: &mut R,
) -> Vec<DVector<f64>> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v = DVector::from_fn(n, |_, _| rng.random_range(-1.0..=1.0));
        if v.norm() <= 1.0 {
            out.push(v * radius);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(x)
    }

    #[test]
    fn binomial_dual_points() {
        let bin = FiniteExpFam::binomial(2).unwrap();
        let d =
            legendre_dual_point(&bin, &v(&[1.0]), DEFAULT_NEWTON_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!(d.theta[0].abs() < 1e-12);

        let e = std::f64::consts::E;
        let eta = 2.0 * e / (1.0 + e);
        let d =
            legendre_dual_point(&bin, &v(&[eta]), DEFAULT_NEWTON_TOL, DEFAULT_MAX_ITER).unwrap();
        // closed form θ = ln(η / (2 − η))
        assert!((d.theta[0] - (eta / (2.0 - eta)).ln()).abs() < 1e-9);
        assert!((d.theta[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn categorical_dual_point_and_metric() {
        let cat = FiniteExpFam::categorical(3).unwrap();
        let third = 1.0 / 3.0;
        let d = legendre_dual_point(
            &cat,
            &v(&[third, third]),
            DEFAULT_NEWTON_TOL,
            DEFAULT_MAX_ITER,
        )
        .unwrap();
        assert!(d.theta.amax() < 1e-12);
        let k = dual_metric(&cat, &v(&[third, third])).unwrap();
        let want = DMatrix::from_row_slice(2, 2, &[6.0, 3.0, 3.0, 6.0]);
        assert!((k - want).amax() < 1e-9);

        let bin = FiniteExpFam::binomial(2).unwrap();
        let k = dual_metric(&bin, &v(&[1.0])).unwrap();
        assert!((k[(0, 0)] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn outside_points_rejected() {
        let bin = FiniteExpFam::binomial(2).unwrap();
        for eta in [0.0, 2.0, 2.5, -1.0] {
            let err = legendre_dual_point(&bin, &v(&[eta]), DEFAULT_NEWTON_TOL, DEFAULT_MAX_ITER)
                .unwrap_err();
            assert!(matches!(err, Error::OutsidePolytope { .. }), "eta={eta}");
        }
        let cat = FiniteExpFam::categorical(3).unwrap();
        let err = dual_metric(&cat, &v(&[0.5, 0.5])).unwrap_err();
        assert!(matches!(err, Error::OutsidePolytope { .. }));
    }

    #[test]
    fn grid_shape() {
        let g = theta_grid(2, 3, 1.0);
        assert_eq!(g.len(), 9);
        assert_eq!(g[0], v(&[-1.0, -1.0]));
        assert_eq!(g[4], v(&[0.0, 0.0]));
        assert_eq!(theta_grid(3, 1, 1.0), vec![v(&[0.0, 0.0, 0.0])]);
    }
}
