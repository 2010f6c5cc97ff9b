//! The momentum polytope `Δ = conv{F_i}` and its symmetry groups: every
//! affine symmetry of `Δ`, and the subgroup that preserves the dual metric.
//! The latter is a second, independent realization of the Weyl group.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use num_rational::BigRational;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::expfam::{float_scale, FiniteExpFam};
use crate::geometry::{self, DEFAULT_MAX_ITER, DEFAULT_NEWTON_TOL};
use crate::linalg;
use crate::lp;
use crate::scalar::format_rational;
use crate::weyl::{self, rows, WeylGroupReport};

pub const MAX_VERTICES: usize = 10;
pub const DEFAULT_METRIC_SAMPLES: usize = 7;
pub const DEFAULT_METRIC_TOL: f64 = 1e-7;
/// Radius of the θ-ball from which interior η samples are drawn.
const SAMPLE_RADIUS: f64 = 1.5;

#[derive(Debug, Clone)]
pub struct Polytope {
    points: DMatrix<f64>,
    exact: Option<Vec<Vec<BigRational>>>,
    tol: f64,
    /// Indices of the extreme points, increasing.
    pub vertices: Vec<usize>,
    /// Each non-vertex point with convex weights over `vertices`.
    pub combinations: Vec<(usize, Vec<f64>)>,
    pub dim: usize,
}

impl Polytope {
    pub fn points(&self) -> &DMatrix<f64> {
        &self.points
    }

    pub fn vertex(&self, v: usize) -> DVector<f64> {
        self.points.row(self.vertices[v]).transpose()
    }

    pub fn to_json(&self) -> Value {
        let points: Value = match &self.exact {
            Some(p) => json!(p
                .iter()
                .map(|r| r.iter().map(format_rational).collect::<Vec<_>>())
                .collect::<Vec<_>>()),
            None => json!(rows(&self.points, |v| *v)),
        };
        json!({
            "points": points,
            "vertices": self.vertices.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "dim": self.dim,
            "combinations": self.combinations.iter().map(|(i, w)| json!({"point": i + 1, "weights": w})).collect::<Vec<_>>(),
        })
    }
}

/// An affine map `η ↦ Aη + b` permuting the vertices of a polytope.
#[derive(Debug, Clone)]
pub struct AffineSymmetry {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    /// `vertex_perm[v]` is the position in the vertex list of the image of
    /// vertex `v`.
    pub vertex_perm: Vec<usize>,
    pub exact: Option<(DMatrix<BigRational>, DVector<BigRational>)>,
}

impl AffineSymmetry {
    pub fn apply(&self, eta: &DVector<f64>) -> DVector<f64> {
        &self.a * eta + &self.b
    }

    pub fn to_json(&self, poly: &Polytope) -> Value {
        let (a, b) = match &self.exact {
            Some((a, b)) => (
                json!(rows(a, format_rational)),
                json!(b.iter().map(format_rational).collect::<Vec<_>>()),
            ),
            None => (
                json!(rows(&self.a, |v| *v)),
                json!(self.b.iter().copied().collect::<Vec<_>>()),
            ),
        };
        let images: Vec<usize> = self
            .vertex_perm
            .iter()
            .map(|&v| poly.vertices[v] + 1)
            .collect();
        json!({"A": a, "b": b, "vertex_images": images})
    }
}

/// Vertices of `conv{F_i}` by LP feasibility, exact for rational families.
/// Of several equal points only the lowest index is a vertex.
pub fn momentum_polytope(fam: &FiniteExpFam) -> Polytope {
    let m = fam.m();
    let n = fam.n();
    let tol = fam.backend().tol();
    let exact: Option<Vec<Vec<BigRational>>> = fam.exact().map(|e| {
        e.f.row_iter()
            .map(|r| r.iter().cloned().collect())
            .collect()
    });

    let (vertices, combinations) = match &exact {
        Some(points) => {
            let zero = BigRational::zero();
            let vertices = extreme_points(points, &zero, |a, b| a == b);
            let vpts: Vec<Vec<BigRational>> = vertices.iter().map(|&v| points[v].clone()).collect();
            let combinations = (0..m)
                .filter(|i| !vertices.contains(i))
                .map(|i| {
                    let w = lp::convex_weights(&vpts, &points[i], &zero)
                        .expect("points lie in the hull of the vertices");
                    (i, w.iter().map(crate::scalar::Field::to_f64).collect())
                })
                .collect();
            (vertices, combinations)
        }
        None => {
            let eps = tol * float_scale(fam.f());
            let points: Vec<Vec<f64>> = fam
                .f()
                .row_iter()
                .map(|r| r.iter().copied().collect())
                .collect();
            let same =
                |a: &Vec<f64>, b: &Vec<f64>| a.iter().zip(b).all(|(x, y)| (x - y).abs() <= eps);
            let vertices = extreme_points(&points, &eps, same);
            let vpts: Vec<Vec<f64>> = vertices.iter().map(|&v| points[v].clone()).collect();
            let combinations = (0..m)
                .filter(|i| !vertices.contains(i))
                .map(|i| {
                    (
                        i,
                        lp::convex_weights(&vpts, &points[i], &eps)
                            .expect("points lie in the hull of the vertices"),
                    )
                })
                .collect();
            (vertices, combinations)
        }
    };
    Polytope {
        points: fam.f().clone(),
        exact,
        tol,
        vertices,
        combinations,
        dim: n,
    }
}

fn extreme_points<T: crate::scalar::Field + Send + Sync>(
    points: &[Vec<T>],
    eps: &T,
    same: impl Fn(&Vec<T>, &Vec<T>) -> bool + Sync,
) -> Vec<usize> {
    (0..points.len())
        .into_par_iter()
        .filter(|&i| {
            if (0..i).any(|j| same(&points[j], &points[i])) {
                return false;
            }
            let others: Vec<Vec<T>> = (0..points.len())
                .filter(|&j| !same(&points[j], &points[i]))
                .map(|j| points[j].clone())
                .collect();
            others.is_empty() || lp::convex_weights(&others, &points[i], eps).is_none()
        })
        .collect()
}

/// All affine maps of `R^n` that permute the vertices of `poly`.
///
/// A map is fixed by the images of `n + 1` affinely independent vertices,
/// so every injective assignment of those is solved and then checked on
/// the remaining vertices.
pub fn affine_symmetries(poly: &Polytope) -> Result<Vec<AffineSymmetry>> {
    let k = poly.vertices.len();
    if k > MAX_VERTICES {
        return Err(Error::TooManyVertices(k));
    }
    let n = poly.dim;
    let mut out = match &poly.exact {
        Some(points) => {
            let verts: Vec<Vec<BigRational>> =
                poly.vertices.iter().map(|&v| points[v].clone()).collect();
            exact_symmetries(&verts, n)
        }
        None => {
            let verts: Vec<DVector<f64>> = (0..k).map(|v| poly.vertex(v)).collect();
            let eps = poly.tol * float_scale(&poly.points);
            float_symmetries(&verts, n, eps)
        }
    };
    out.sort_by(|x, y| x.vertex_perm.cmp(&y.vertex_perm));
    out.dedup_by(|x, y| x.vertex_perm == y.vertex_perm);
    Ok(out)
}

fn homogeneous<T: crate::scalar::Field>(verts: &[Vec<T>], n: usize) -> DMatrix<T> {
    DMatrix::from_fn(verts.len(), n + 1, |r, j| {
        if j < n {
            verts[r][j].clone()
        } else {
            T::one()
        }
    })
}

fn exact_symmetries(verts: &[Vec<BigRational>], n: usize) -> Vec<AffineSymmetry> {
    let zero = BigRational::zero();
    let h = homogeneous(verts, n);
    let basis = linalg::independent_rows(&h, &zero);
    let sub = DMatrix::from_fn(n + 1, n + 1, |r, j| h[(basis[r], j)].clone());
    let inv = linalg::inverse(&sub, &zero).expect("vertices span the ambient space");
    let lookup: HashMap<&Vec<BigRational>, usize> =
        verts.iter().enumerate().map(|(i, v)| (v, i)).collect();

    let assignments: Vec<Vec<usize>> = (0..verts.len()).permutations(n + 1).collect();
    assignments
        .par_iter()
        .filter_map(|targets| {
            let rhs = DMatrix::from_fn(n + 1, n, |r, j| verts[targets[r]][j].clone());
            let sol = linalg::matmul(&inv, &rhs);
            let a = sol.rows(0, n).transpose();
            let b = sol.row(n).transpose();
            if linalg::determinant(&a).is_zero() {
                return None;
            }
            let mut perm = Vec::with_capacity(verts.len());
            for v in verts {
                let x = DVector::from_vec(v.clone());
                let image: Vec<BigRational> =
                    (linalg::matvec(&a, &x) + &b).iter().cloned().collect();
                perm.push(*lookup.get(&image)?);
            }
            Some(AffineSymmetry {
                a: linalg::to_f64_matrix(&a),
                b: linalg::to_f64_vector(&b),
                vertex_perm: perm,
                exact: Some((a, b)),
            })
        })
        .collect()
}

fn float_symmetries(verts: &[DVector<f64>], n: usize, eps: f64) -> Vec<AffineSymmetry> {
    let rows_vec: Vec<Vec<f64>> = verts.iter().map(|v| v.iter().copied().collect()).collect();
    let h = homogeneous(&rows_vec, n);
    let basis = linalg::independent_rows(&h, &eps);
    let sub = DMatrix::from_fn(n + 1, n + 1, |r, j| h[(basis[r], j)]);
    let inv = sub.try_inverse().expect("vertices span the ambient space");

    let assignments: Vec<Vec<usize>> = (0..verts.len()).permutations(n + 1).collect();
    assignments
        .par_iter()
        .filter_map(|targets| {
            let rhs = DMatrix::from_fn(n + 1, n, |r, j| verts[targets[r]][j]);
            let sol = &inv * rhs;
            let a = sol.rows(0, n).transpose();
            let b = sol.row(n).transpose();
            if a.determinant().abs() <= eps {
                return None;
            }
            let mut perm = Vec::with_capacity(verts.len());
            for v in verts {
                let image = &a * v + &b;
                perm.push(
                    verts
                        .iter()
                        .position(|w| (w - &image).amax() <= 10.0 * eps)?,
                );
            }
            let distinct: BTreeSet<usize> = perm.iter().copied().collect();
            (distinct.len() == verts.len()).then_some(AffineSymmetry {
                a,
                b,
                vertex_perm: perm,
                exact: None,
            })
        })
        .collect()
}

/// Interior expectation points `η(θ)` for `θ` drawn uniformly from a ball.
pub fn interior_samples(fam: &FiniteExpFam, count: usize, seed: u64) -> Result<Vec<DVector<f64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    geometry::random_points(fam.n(), count, SAMPLE_RADIUS, &mut rng)
        .iter()
        .map(|theta| fam.mean_params(theta))
        .collect()
}

/// Affine symmetries of the momentum polytope that are isometries of the
/// dual metric: `Aᵀ k(Aη + b) A = k(η)` at every sample.
pub fn metric_symmetries(
    fam: &FiniteExpFam,
    samples: &[DVector<f64>],
    tol: f64,
) -> Result<Vec<AffineSymmetry>> {
    let poly = momentum_polytope(fam);
    let candidates = affine_symmetries(&poly)?;
    let at_samples: Vec<DMatrix<f64>> = samples
        .iter()
        .map(|eta| geometry::dual_metric(fam, eta))
        .collect::<Result<_>>()?;
    let verdicts: Vec<Result<bool>> = candidates
        .par_iter()
        .map(|sym| {
            for (eta, k) in samples.iter().zip(&at_samples) {
                // the image of an interior point under a vertex permutation is interior
                let moved =
                    geometry::newton(fam, &sym.apply(eta), DEFAULT_NEWTON_TOL, DEFAULT_MAX_ITER)?.k;
                let pulled = sym.a.transpose() * moved * &sym.a;
                let scale = k.amax().max(1.0);
                if (pulled - k).amax() > tol * scale {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect();
    let mut out = Vec::new();
    for (sym, verdict) in candidates.into_iter().zip(verdicts) {
        if verdict? {
            out.push(sym);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossValidation {
    pub witness_order: usize,
    pub polytope_order: usize,
    pub metric_order: usize,
    /// Vertex actions, as point-index images of the sorted vertex list,
    /// common to both realizations.
    pub vertex_actions: Vec<Vec<usize>>,
    /// Largest difference between a witness-induced η-map and the metric
    /// symmetry with the same vertex action.
    pub map_residual: f64,
    pub pass: bool,
}

/// Runs the witness enumeration and the polytope pipeline independently
/// and compares the resulting groups through their action on vertices.
///
/// The witness `(A, u)` of `σ` induces `η ↦ Aᵀη + u`, which carries `F_i`
/// to `F_{σ(i)}`; its vertex action is `σ` restricted to extreme points.
pub fn cross_validate(
    fam: &FiniteExpFam,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<CrossValidation> {
    let report = weyl::enumerate_weyl(fam, weyl::DEFAULT_LIMIT_M)?;
    let poly = momentum_polytope(fam);
    let polytope_order = affine_symmetries(&poly)?.len();
    let eta = interior_samples(fam, samples, seed)?;
    let metric = metric_symmetries(fam, &eta, tol)?;
    compare(fam, &report, &poly, polytope_order, &metric)
}

pub fn compare(
    fam: &FiniteExpFam,
    report: &WeylGroupReport,
    poly: &Polytope,
    polytope_order: usize,
    metric: &[AffineSymmetry],
) -> Result<CrossValidation> {
    let position: HashMap<usize, usize> = poly
        .vertices
        .iter()
        .enumerate()
        .map(|(p, &v)| (v, p))
        .collect();
    let mismatch = |offending: Option<Vec<usize>>| Error::Mismatch {
        witness_order: report.order,
        polytope_order: metric.len(),
        offending,
    };
    let to_points =
        |perm: &[usize]| -> Vec<usize> { perm.iter().map(|&p| poly.vertices[p] + 1).collect() };

    let mut from_witness: HashMap<Vec<usize>, (DMatrix<f64>, DVector<f64>)> = HashMap::new();
    for el in &report.elements {
        let mut perm = Vec::with_capacity(poly.vertices.len());
        for &v in &poly.vertices {
            let image = el.sigma()[v];
            match position.get(&image) {
                Some(&p) => perm.push(p),
                None => return Err(mismatch(Some(el.sigma().iter().map(|i| i + 1).collect()))),
            }
        }
        from_witness.insert(perm, (el.a().transpose(), el.u().clone()));
    }
    if fam.is_injective() && from_witness.len() != report.order {
        return Err(mismatch(None));
    }

    let mut map_residual: f64 = 0.0;
    let mut actions = Vec::with_capacity(metric.len());
    for sym in metric {
        match from_witness.get(&sym.vertex_perm) {
            Some((a, u)) => {
                map_residual = map_residual
                    .max((a - &sym.a).amax())
                    .max((u - &sym.b).amax());
                actions.push(to_points(&sym.vertex_perm));
            }
            None => return Err(mismatch(Some(to_points(&sym.vertex_perm)))),
        }
    }
    if metric.len() != from_witness.len() {
        let missing = from_witness
            .keys()
            .find(|perm| !metric.iter().any(|s| &s.vertex_perm == *perm))
            .map(|perm| to_points(perm));
        return Err(mismatch(missing));
    }
    actions.sort();
    let scale = 1.0 + float_scale(fam.f());
    Ok(CrossValidation {
        witness_order: report.order,
        polytope_order,
        metric_order: metric.len(),
        vertex_actions: actions,
        map_residual,
        pass: map_residual <= 1e-6 * scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expfam::Backend;
    use crate::scalar::{int, rat, LogWeight};

    fn family(rows_in: Vec<Vec<BigRational>>) -> FiniteExpFam {
        let m = rows_in.len();
        FiniteExpFam::new(
            (0..m).map(|i| format!("x{i}")).collect(),
            vec![LogWeight::zero(); m],
            rows_in,
            Backend::Rational,
        )
        .unwrap()
    }

    #[test]
    fn vertices_of_basic_families() {
        let cat = momentum_polytope(&FiniteExpFam::categorical(3).unwrap());
        assert_eq!(cat.vertices, vec![0, 1, 2]);
        let bin = momentum_polytope(&FiniteExpFam::binomial(2).unwrap());
        assert_eq!(bin.vertices, vec![0, 2]);
        assert_eq!(bin.combinations, vec![(1, vec![0.5, 0.5])]);
    }

    #[test]
    fn square_with_center() {
        let fam = family(vec![
            vec![int(0), int(0)],
            vec![int(1), int(0)],
            vec![int(0), int(1)],
            vec![int(1), int(1)],
            vec![rat(1, 2), rat(1, 2)],
        ]);
        let poly = momentum_polytope(&fam);
        assert_eq!(poly.vertices, vec![0, 1, 2, 3]);
        assert_eq!(affine_symmetries(&poly).unwrap().len(), 8);
    }

    #[test]
    fn simplex_and_segment_groups() {
        let cat = momentum_polytope(&FiniteExpFam::categorical(3).unwrap());
        assert_eq!(affine_symmetries(&cat).unwrap().len(), 6);
        let bin = momentum_polytope(&FiniteExpFam::binomial(2).unwrap());
        let syms = affine_symmetries(&bin).unwrap();
        assert_eq!(syms.len(), 2);
        assert_eq!(syms[1].exact.as_ref().unwrap().0[(0, 0)], int(-1));
    }

    #[test]
    fn metric_filter_keeps_binomial_reversal() {
        let fam = FiniteExpFam::binomial(3).unwrap();
        let eta = interior_samples(&fam, DEFAULT_METRIC_SAMPLES, 1).unwrap();
        assert_eq!(
            metric_symmetries(&fam, &eta, DEFAULT_METRIC_TOL)
                .unwrap()
                .len(),
            2
        );
    }

    #[test]
    fn metric_filter_removes_broken_reversal() {
        let mut c: Vec<LogWeight> = (0..4).map(|k| LogWeight::ln_binomial(3, k)).collect();
        c[3] = &c[3] + &LogWeight::from_rational(rat(1, 7));
        let fam = FiniteExpFam::new(
            (0..4).map(|k| k.to_string()).collect(),
            c,
            (0..4).map(|k| vec![int(k)]).collect(),
            Backend::Rational,
        )
        .unwrap();
        let eta = interior_samples(&fam, DEFAULT_METRIC_SAMPLES, 1).unwrap();
        assert_eq!(
            affine_symmetries(&momentum_polytope(&fam)).unwrap().len(),
            2
        );
        assert_eq!(
            metric_symmetries(&fam, &eta, DEFAULT_METRIC_TOL)
                .unwrap()
                .len(),
            1
        );
        let cv = cross_validate(&fam, DEFAULT_METRIC_SAMPLES, DEFAULT_METRIC_TOL, 3).unwrap();
        assert_eq!((cv.witness_order, cv.metric_order), (1, 1));
    }

    #[test]
    fn cross_validation_on_categorical() {
        let cv = cross_validate(
            &FiniteExpFam::categorical(4).unwrap(),
            DEFAULT_METRIC_SAMPLES,
            DEFAULT_METRIC_TOL,
            7,
        )
        .unwrap();
        assert!(cv.pass);
        assert_eq!(cv.metric_order, 24);
    }

    #[test]
    fn too_many_vertices() {
        let fam = FiniteExpFam::categorical(11).unwrap();
        let poly = momentum_polytope(&fam);
        assert_eq!(
            affine_symmetries(&poly).unwrap_err(),
            Error::TooManyVertices(11)
        );
    }
}
