//! Kähler structure on the tangent bundle of a dually flat family, in the
//! coordinates `(q, r)` where `q` is the base point θ and `r` the fiber
//! component of a tangent vector.
//!
//! ```text
//! g = [[h, 0], [0, h]]     J(v, w) = (−w, v)     ω(X, Y) = g(JX, Y)
//! ```

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expfam::FiniteExpFam;
use crate::geometry;

/// Step for the finite-difference checks of `dω`.
pub const DEFAULT_FD_STEP: f64 = 1e-3;
pub const CLOSEDNESS_TOL: f64 = 1e-6;
pub const COMPATIBILITY_TOL: f64 = 1e-12;
/// Second-difference threshold above which a coordinate change counts as
/// non-affine.
const AFFINE_PROBE_TOL: f64 = 1e-7;

#[derive(Debug, Clone)]
pub struct KahlerPointData {
    pub theta: DVector<f64>,
    pub fiber: DVector<f64>,
    pub g: DMatrix<f64>,
    pub omega: DMatrix<f64>,
    pub j: DMatrix<f64>,
}

/// `[[0, −I], [I, 0]]`.
pub fn complex_structure(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(2 * n, 2 * n, |r, c| {
        if r >= n && c + n == r {
            1.0
        } else if r < n && c == r + n {
            -1.0
        } else {
            0.0
        }
    })
}

pub fn kahler_at(
    fam: &FiniteExpFam,
    theta: &DVector<f64>,
    fiber: &DVector<f64>,
) -> Result<KahlerPointData> {
    let n = fam.n();
    if fiber.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: fiber.len(),
        });
    }
    let h = fam.fisher(theta)?.entries;
    let mut g = DMatrix::zeros(2 * n, 2 * n);
    g.view_mut((0, 0), (n, n)).copy_from(&h);
    g.view_mut((n, n), (n, n)).copy_from(&h);
    let j = complex_structure(n);
    let omega = j.transpose() * &g;
    Ok(KahlerPointData {
        theta: theta.clone(),
        fiber: fiber.clone(),
        g,
        omega,
        j,
    })
}

impl KahlerPointData {
    /// `ω(X, Y)`.
    pub fn omega_of(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        x.dot(&(&self.omega * y))
    }

    pub fn apply_j(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.j * x
    }
}

/// A reparametrization `x = T(θ)` of the natural-parameter space.
pub enum CoordinateChange {
    Identity,
    /// `x = matrix·θ + offset`.
    Affine {
        matrix: DMatrix<f64>,
        offset: DVector<f64>,
    },
    /// An arbitrary map; accepted only if it is affine near the point.
    General(Box<dyn Fn(&DVector<f64>) -> DVector<f64> + Sync>),
}

impl CoordinateChange {
    /// The affine data `(M, t)` of the change, probed by second differences
    /// at `theta` for general maps.
    fn affine_part(&self, n: usize, theta: &DVector<f64>) -> Result<(DMatrix<f64>, DVector<f64>)> {
        match self {
            CoordinateChange::Identity => Ok((DMatrix::identity(n, n), DVector::zeros(n))),
            CoordinateChange::Affine { matrix, offset } => Ok((matrix.clone(), offset.clone())),
            CoordinateChange::General(f) => {
                let step = 1e-2;
                let base = f(theta);
                let mut worst: f64 = 0.0;
                let mut jac = DMatrix::zeros(n, n);
                let e = |i: usize| DVector::from_fn(n, |k, _| if k == i { step } else { 0.0 });
                for a in 0..n {
                    let fwd = f(&(theta + e(a)));
                    let bwd = f(&(theta - e(a)));
                    jac.set_column(a, &((&fwd - &bwd) / (2.0 * step)));
                    for b in 0..n {
                        let pp = f(&(theta + e(a) + e(b)));
                        let pm = f(&(theta + e(a) - e(b)));
                        let mp = f(&(theta - e(a) + e(b)));
                        let mm = f(&(theta - e(a) - e(b)));
                        let second = (pp - pm - mp + mm) / (4.0 * step * step);
                        worst = worst.max(second.amax());
                    }
                }
                let scale = 1.0 + jac.amax();
                if worst > AFFINE_PROBE_TOL * scale {
                    return Err(Error::NonAffineChange(worst));
                }
                let offset = base - &jac * theta;
                Ok((jac, offset))
            }
        }
    }
}

/// Christoffel symbols `Γ^k_{ij}` of the exponential connection at θ,
/// `out[k][(i, j)]`.
pub fn exponential_christoffel(
    fam: &FiniteExpFam,
    theta: &DVector<f64>,
) -> Result<Vec<DMatrix<f64>>> {
    let n = fam.n();
    let lowered = fam.christoffel_alpha(theta, 1.0)?;
    let hinv = fam
        .fisher(theta)?
        .entries
        .try_inverse()
        .ok_or_else(|| Error::PositivityLost {
            theta: theta.iter().copied().collect(),
        })?;
    Ok((0..n)
        .map(|k| {
            DMatrix::from_fn(n, n, |i, j| {
                (0..n).map(|l| hinv[(k, l)] * lowered.get(i, j, l)).sum()
            })
        })
        .collect())
}

/// The connector `K` applied to `tangent = (∂q, ∂r)` at `(point, fiber)`,
/// everything expressed in the coordinates of `change`:
/// `K(∂/∂q_a) = Σ Γ^k_{aj} u_j ∂/∂x_k`, `K(∂/∂r_a) = ∂/∂x_a`.
pub fn connector_at(
    fam: &FiniteExpFam,
    change: &CoordinateChange,
    point: &DVector<f64>,
    fiber: &DVector<f64>,
    tangent: &DVector<f64>,
) -> Result<DVector<f64>> {
    let n = fam.n();
    if point.len() != n || fiber.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: if point.len() != n {
                point.len()
            } else {
                fiber.len()
            },
        });
    }
    if tangent.len() != 2 * n {
        return Err(Error::DimensionMismatch {
            expected: 2 * n,
            got: tangent.len(),
        });
    }
    // general maps are probed at the natural-coordinate origin of the chart
    let (m, t) = change.affine_part(n, &DVector::zeros(n))?;
    let minv = m
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::InvalidSize("coordinate change is not invertible".into()))?;
    let theta = &minv * (point - &t);
    let gamma = exponential_christoffel(fam, &theta)?;
    // Γ'^k_{ij} = M_{kc} Γ^c_{ab} (M⁻¹)_{ai} (M⁻¹)_{bj}
    let transformed: Vec<DMatrix<f64>> = (0..n)
        .map(|k| {
            let mixed = (0..n).fold(DMatrix::zeros(n, n), |acc, c| acc + &gamma[c] * m[(k, c)]);
            minv.transpose() * mixed * &minv
        })
        .collect();
    let dq = tangent.rows(0, n);
    let dr = tangent.rows(n, n);
    Ok(DVector::from_fn(n, |k, _| {
        let horizontal: f64 = (0..n)
            .map(|a| {
                dq[a]
                    * (0..n)
                        .map(|j| transformed[k][(a, j)] * fiber[j])
                        .sum::<f64>()
            })
            .sum();
        horizontal + dr[k]
    }))
}

#[derive(Debug, Clone, Serialize)]
pub struct KahlerReport {
    pub points: usize,
    pub j_squared_exact: bool,
    pub compatibility_residual: f64,
    pub omega_antisymmetric: bool,
    pub min_abs_det_omega: f64,
    pub d_omega_residual: f64,
    pub metric_derivative_asymmetry: f64,
    pub pass: bool,
}

/// Pointwise checks of the Kähler structure over a θ-grid.
pub fn check_kahler(
    fam: &FiniteExpFam,
    grid: &[DVector<f64>],
    fd_step: f64,
) -> Result<KahlerReport> {
    let n = fam.n();
    let j = complex_structure(n);
    let j_squared_exact = &j * &j == -DMatrix::<f64>::identity(2 * n, 2 * n);
    let fiber = DVector::from_fn(n, |i, _| 0.5 - i as f64);

    let mut compatibility_residual: f64 = 0.0;
    let mut omega_antisymmetric = true;
    let mut min_abs_det_omega = f64::INFINITY;
    let mut d_omega_residual: f64 = 0.0;
    let mut metric_derivative_asymmetry: f64 = 0.0;
    for theta in grid {
        let data = kahler_at(fam, theta, &fiber)?;
        compatibility_residual = compatibility_residual
            .max((j.transpose() * &data.g * &j - &data.g).amax())
            .max((&data.g * &j + j.transpose() * &data.g).amax());
        omega_antisymmetric &= data.omega.transpose() == -&data.omega;
        min_abs_det_omega = min_abs_det_omega.min(data.omega.determinant().abs());

        // ∂ω/∂q_a by central differences; ω does not depend on r.
        let d_omega: Vec<DMatrix<f64>> = (0..n)
            .map(|a| {
                let mut fwd = theta.clone();
                let mut bwd = theta.clone();
                fwd[a] += fd_step;
                bwd[a] -= fd_step;
                Ok(
                    (kahler_at(fam, &fwd, &fiber)?.omega - kahler_at(fam, &bwd, &fiber)?.omega)
                        / (2.0 * fd_step),
                )
            })
            .collect::<Result<_>>()?;
        let partial = |i: usize, jj: usize, k: usize| if i < n { d_omega[i][(jj, k)] } else { 0.0 };
        for i in 0..2 * n {
            for jj in i + 1..2 * n {
                for k in jj + 1..2 * n {
                    let d = partial(i, jj, k) + partial(jj, k, i) + partial(k, i, jj);
                    d_omega_residual = d_omega_residual.max(d.abs());
                }
            }
        }

        let dh = geometry::metric_derivative(fam, theta, fd_step)?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    metric_derivative_asymmetry =
                        metric_derivative_asymmetry.max((dh[a][(b, c)] - dh[b][(a, c)]).abs());
                }
            }
        }
    }
    let pass = j_squared_exact
        && omega_antisymmetric
        && compatibility_residual <= COMPATIBILITY_TOL
        && min_abs_det_omega > 0.0
        && d_omega_residual <= CLOSEDNESS_TOL
        && metric_derivative_asymmetry <= CLOSEDNESS_TOL;
    Ok(KahlerReport {
        points: grid.len(),
        j_squared_exact,
        compatibility_residual,
        omega_antisymmetric,
        min_abs_det_omega,
        d_omega_residual,
        metric_derivative_asymmetry,
        pass,
    })
}
