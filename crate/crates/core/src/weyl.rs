//! Permutation symmetries of a finite exponential family and the Weyl
//! group they form.
//!
//! A permutation `σ` of the outcomes is a symmetry exactly when the two
//! linear systems
//!
//! ```text
//! F_{σ(i)} = Aᵀ F_i + u
//! C_{σ(i)} = C_i + <B, F_i> + c
//! ```
//!
//! are consistent. Since `[F | 1]` has full column rank the witness
//! `(A, u, B, c)` is then unique, and `θ ↦ Aθ + B` satisfies
//! `p_{Aθ+B}(x_i) = p_θ(x_{σ(i)})`.
//!
//! Permutations are 0-based in the API. They compose as
//! `(s·t)(i) = t(s(i))`, under which `A_{s·t} = A_s A_t` and
//! `θ ↦ A_{s·t}θ + B_{s·t}` is the composite map `φ_s ∘ φ_t`.

use std::collections::HashMap;

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::expfam::{design, float_scale, FiniteExpFam};
use crate::groups::{self, GroupDescription, PermGroup, CAYLEY_LIMIT};
use crate::linalg::{self, matmul, matvec};
use crate::scalar::{format_rational, LogWeight};

/// Default guard on the number of outcomes for exhaustive enumeration.
pub const DEFAULT_LIMIT_M: usize = 9;

/// Exact witness data for rational families.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactWitness {
    pub a: DMatrix<BigRational>,
    pub u: DVector<BigRational>,
    pub b: Vec<LogWeight>,
    pub c: LogWeight,
}

/// A permutation symmetry with its affine witness.
#[derive(Debug, Clone)]
pub struct PermSymmetry {
    sigma: Vec<usize>,
    a: DMatrix<f64>,
    u: DVector<f64>,
    b: DVector<f64>,
    c: f64,
    exact: Option<ExactWitness>,
}

impl PermSymmetry {
    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    /// Linear part `A` of the parameter map `θ ↦ Aθ + B`.
    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn u(&self) -> &DVector<f64> {
        &self.u
    }

    pub fn b(&self) -> &DVector<f64> {
        &self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn exact(&self) -> Option<&ExactWitness> {
        self.exact.as_ref()
    }

    pub fn is_identity(&self) -> bool {
        groups::is_identity(&self.sigma)
    }

    /// Image of a parameter point, `Aθ + B`.
    pub fn apply(&self, theta: &DVector<f64>) -> DVector<f64> {
        &self.a * theta + &self.b
    }

    fn from_exact(sigma: Vec<usize>, w: ExactWitness) -> Self {
        Self {
            sigma,
            a: linalg::to_f64_matrix(&w.a),
            u: linalg::to_f64_vector(&w.u),
            b: DVector::from_iterator(w.b.len(), w.b.iter().map(LogWeight::to_f64)),
            c: w.c.to_f64(),
            exact: Some(w),
        }
    }

    /// JSON record `{"sigma", "A", "u", "B", "c"}`; `sigma` is 1-based and
    /// exact values are strings.
    pub fn to_json(&self) -> Value {
        let sigma: Vec<usize> = self.sigma.iter().map(|i| i + 1).collect();
        match &self.exact {
            Some(w) => json!({
                "sigma": sigma,
                "A": rows(&w.a, format_rational),
                "u": w.u.iter().map(format_rational).collect::<Vec<_>>(),
                "B": w.b.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "c": w.c.to_string(),
            }),
            None => json!({
                "sigma": sigma,
                "A": rows(&self.a, |v| *v),
                "u": self.u.iter().copied().collect::<Vec<_>>(),
                "B": self.b.iter().copied().collect::<Vec<_>>(),
                "c": self.c,
            }),
        }
    }
}

pub(crate) fn rows<T: nalgebra::Scalar, S>(m: &DMatrix<T>, f: impl Fn(&T) -> S) -> Vec<Vec<S>> {
    m.row_iter().map(|r| r.iter().map(&f).collect()).collect()
}

/// Solves witness systems against a fixed family.
pub struct WitnessSolver<'a> {
    fam: &'a FiniteExpFam,
    rows: Vec<usize>,
    kind: SolverKind,
}

enum SolverKind {
    Exact { inv: DMatrix<BigRational> },
    Float { inv: DMatrix<f64>, tol: f64 },
}

impl<'a> WitnessSolver<'a> {
    pub fn new(fam: &'a FiniteExpFam) -> Self {
        let rows = fam.basis_rows().to_vec();
        let kind = match fam.exact() {
            Some(exact) => {
                let g = design(&exact.f);
                let sub = DMatrix::from_fn(rows.len(), rows.len(), |i, j| g[(rows[i], j)].clone());
                let inv = linalg::inverse(&sub, &BigRational::zero())
                    .expect("basis rows of a validated family are independent");
                SolverKind::Exact { inv }
            }
            None => {
                let g = design(fam.f());
                let sub = DMatrix::from_fn(rows.len(), rows.len(), |i, j| g[(rows[i], j)]);
                let inv = sub
                    .try_inverse()
                    .expect("basis rows of a validated family are independent");
                SolverKind::Float {
                    inv,
                    tol: fam.backend().tol(),
                }
            }
        };
        Self { fam, rows, kind }
    }

    /// The unique witness of `sigma`, if both systems are consistent.
    pub fn solve(&self, sigma: &[usize]) -> Option<PermSymmetry> {
        let m = self.fam.m();
        if sigma.len() != m {
            return None;
        }
        match &self.kind {
            SolverKind::Exact { inv } => self.solve_exact(inv, sigma),
            SolverKind::Float { inv, tol } => self.solve_float(inv, *tol, sigma),
        }
    }

    fn solve_exact(&self, inv: &DMatrix<BigRational>, sigma: &[usize]) -> Option<PermSymmetry> {
        let exact = self.fam.exact()?;
        let (m, n) = (self.fam.m(), self.fam.n());
        let f = &exact.f;
        // [A; uᵀ] = G_R⁻¹ F_σ[R]
        let target = DMatrix::from_fn(n + 1, n, |r, j| f[(sigma[self.rows[r]], j)].clone());
        let solution = matmul(inv, &target);
        let a = solution.rows(0, n).into_owned();
        let u = solution.row(n).transpose();
        for i in 0..m {
            for k in 0..n {
                let image = (0..n).fold(u[k].clone(), |acc, j| acc + &f[(i, j)] * &a[(j, k)]);
                if image != f[(sigma[i], k)] {
                    return None;
                }
            }
        }
        if linalg::determinant(&a).is_zero() {
            return None;
        }

        let delta: Vec<LogWeight> = (0..m).map(|i| &exact.c[sigma[i]] - &exact.c[i]).collect();
        let bc: Vec<LogWeight> = (0..=n)
            .map(|r| {
                (0..=n).fold(LogWeight::zero(), |acc, s| {
                    &acc + &delta[self.rows[s]].scale(&inv[(r, s)])
                })
            })
            .collect();
        for i in 0..m {
            let lhs = (0..n).fold(bc[n].clone(), |acc, j| &acc + &bc[j].scale(&f[(i, j)]));
            if lhs != delta[i] {
                return None;
            }
        }
        let c = bc[n].clone();
        let b = bc[..n].to_vec();
        Some(PermSymmetry::from_exact(
            sigma.to_vec(),
            ExactWitness { a, u, b, c },
        ))
    }

    fn solve_float(&self, inv: &DMatrix<f64>, tol: f64, sigma: &[usize]) -> Option<PermSymmetry> {
        let (m, n) = (self.fam.m(), self.fam.n());
        let f = self.fam.f();
        let target = DMatrix::from_fn(n + 1, n, |r, j| f[(sigma[self.rows[r]], j)]);
        let solution = inv * target;
        let a = solution.rows(0, n).into_owned();
        let u = solution.row(n).transpose();
        let f_eps = tol * float_scale(f);
        for i in 0..m {
            let image = a.transpose() * self.fam.row(i) + &u;
            if (image - self.fam.row(sigma[i])).amax() > f_eps {
                return None;
            }
        }
        if a.determinant().abs() <= f_eps {
            return None;
        }
        let c_all = self.fam.c();
        let delta = DVector::from_fn(m, |i, _| c_all[sigma[i]] - c_all[i]);
        let rhs = DVector::from_fn(n + 1, |r, _| delta[self.rows[r]]);
        let bc = inv * rhs;
        let c_eps = tol * c_all.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
        for i in 0..m {
            let lhs = self.fam.row(i).dot(&bc.rows(0, n)) + bc[n];
            if (lhs - delta[i]).abs() > c_eps {
                return None;
            }
        }
        Some(PermSymmetry {
            sigma: sigma.to_vec(),
            a,
            u,
            b: bc.rows(0, n).into_owned(),
            c: bc[n],
            exact: None,
        })
    }
}

/// The affine witness of `sigma`, or `None` when `sigma` is not a symmetry.
pub fn affine_witness(fam: &FiniteExpFam, sigma: &[usize]) -> Option<PermSymmetry> {
    WitnessSolver::new(fam).solve(sigma)
}

/// Group-law checks run over the Cayley table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GroupChecks {
    pub closed: bool,
    pub inverses: bool,
    /// Witness of every product equals the composite of the factors'
    /// witnesses.
    pub functorial: bool,
}

#[derive(Debug, Clone)]
pub struct WeylGroupReport {
    pub elements: Vec<PermSymmetry>,
    pub order: usize,
    /// `cayley[a][b]` indexes `elements[a]·elements[b]`; omitted above
    /// [`CAYLEY_LIMIT`].
    pub cayley: Option<Vec<Vec<usize>>>,
    pub checks: Option<GroupChecks>,
    pub descriptors: GroupDescription,
    /// False when `F` is not injective; the group is then `Perm(E)`, which
    /// is only known to be contained in the Weyl group.
    pub injective: bool,
}

impl WeylGroupReport {
    pub fn sigmas(&self) -> Vec<Vec<usize>> {
        self.elements.iter().map(|e| e.sigma.clone()).collect()
    }

    pub fn identity_index(&self) -> usize {
        self.elements
            .iter()
            .position(PermSymmetry::is_identity)
            .expect("identity is always a symmetry")
    }

    pub fn index_of(&self, sigma: &[usize]) -> Option<usize> {
        self.elements.iter().position(|e| e.sigma == sigma)
    }

    /// Index of the product, from the table when present.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.cayley {
            Some(t) => t[a][b],
            None => self
                .index_of(&groups::compose(
                    &self.elements[a].sigma,
                    &self.elements[b].sigma,
                ))
                .expect("symmetries are closed under composition"),
        }
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.index_of(&groups::inverse(&self.elements[a].sigma))
            .expect("symmetries are closed under inversion")
    }

    /// `{"order", "elements", "cayley", "name", ...}`.
    pub fn to_json(&self) -> Value {
        let d = describe_group(self);
        json!({
            "order": self.order,
            "elements": self.elements.iter().map(PermSymmetry::to_json).collect::<Vec<_>>(),
            "cayley": self.cayley,
            "name": d.name,
            "abelian": d.abelian,
            "element_orders": d.element_orders,
            "generators": d.generators,
            "injective": self.injective,
            "group": if self.injective { "Diff(E,h_F,nabla_e)" } else { "Perm(E)" },
            "checks": self.checks,
        })
    }
}

/// Tests every permutation of the outcomes and assembles the group.
pub fn enumerate_weyl(fam: &FiniteExpFam, limit_m: usize) -> Result<WeylGroupReport> {
    let m = fam.m();
    if m > limit_m {
        return Err(Error::TooLarge(format!(
            "{m} outcomes exceed the enumeration limit of {limit_m}"
        )));
    }
    let solver = WitnessSolver::new(fam);
    let candidates: Vec<Vec<usize>> = (0..m).permutations(m).collect();
    let elements: Vec<PermSymmetry> = candidates
        .par_iter()
        .filter_map(|sigma| solver.solve(sigma))
        .collect();
    let order = elements.len();
    let sigmas: Vec<Vec<usize>> = elements.iter().map(|e| e.sigma.clone()).collect();

    let (cayley, checks) = if order <= CAYLEY_LIMIT {
        match groups::cayley_table(&sigmas) {
            Some(table) => {
                let checks = group_checks(&elements, &table);
                (Some(table), Some(checks))
            }
            None => (
                None,
                Some(GroupChecks {
                    closed: false,
                    inverses: false,
                    functorial: false,
                }),
            ),
        }
    } else {
        (None, None)
    };
    let descriptors = PermGroup::new(&sigmas, cayley.as_deref()).describe();
    Ok(WeylGroupReport {
        elements,
        order,
        cayley,
        checks,
        descriptors,
        injective: fam.is_injective(),
    })
}

fn group_checks(elements: &[PermSymmetry], table: &[Vec<usize>]) -> GroupChecks {
    let order = elements.len();
    let identity = elements.iter().position(PermSymmetry::is_identity);
    let inverses = identity.is_some_and(|e| (0..order).all(|a| table[a].contains(&e)));
    let functorial = (0..order).into_par_iter().all(|s| {
        (0..order).all(|t| composite_matches(&elements[s], &elements[t], &elements[table[s][t]]))
    });
    GroupChecks {
        closed: true,
        inverses,
        functorial,
    }
}

/// `A_{st} = A_s A_t`, `u_{st} = A_tᵀ u_s + u_t`, `B_{st} = B_s + A_s B_t`,
/// `c_{st} = c_s + c_t + <B_t, u_s>`.
fn composite_matches(s: &PermSymmetry, t: &PermSymmetry, st: &PermSymmetry) -> bool {
    match (&s.exact, &t.exact, &st.exact) {
        (Some(ws), Some(wt), Some(wst)) => {
            let n = ws.u.len();
            if matmul(&ws.a, &wt.a) != wst.a {
                return false;
            }
            if matvec(&wt.a.transpose(), &ws.u) + &wt.u != wst.u {
                return false;
            }
            for j in 0..n {
                let b = (0..n).fold(ws.b[j].clone(), |acc, k| {
                    &acc + &wt.b[k].scale(&ws.a[(j, k)])
                });
                if b != wst.b[j] {
                    return false;
                }
            }
            let c = (0..n).fold(&ws.c + &wt.c, |acc, k| &acc + &wt.b[k].scale(&ws.u[k]));
            c == wst.c
        }
        _ => {
            let tol = 1e-8;
            let a_ok = (&s.a * &t.a - &st.a).amax() <= tol;
            let u_ok = (t.a.transpose() * &s.u + &t.u - &st.u).amax() <= tol;
            let b_ok = (&s.b + &s.a * &t.b - &st.b).amax() <= tol;
            let c_ok = (s.c + t.c + t.b.dot(&s.u) - st.c).abs() <= tol;
            a_ok && u_ok && b_ok && c_ok
        }
    }
}

/// Order, abelianness, element orders and catalogue name of the group.
pub fn describe_group(report: &WeylGroupReport) -> GroupDescription {
    report.descriptors.clone()
}

/// `[φ_σ·X](x_i) = X(x_{σ(i)})` for `X` in the span of `1, F^1, …, F^n`.
pub fn action_on_statistics(
    fam: &FiniteExpFam,
    element: &PermSymmetry,
    x: &[f64],
) -> Result<Vec<f64>> {
    span_residual(fam, x)?;
    let out: Vec<f64> = element.sigma.iter().map(|&j| x[j]).collect();
    span_residual(fam, &out)?;
    Ok(out)
}

/// Exact variant of [`action_on_statistics`] for rational families.
pub fn action_on_statistics_exact(
    fam: &FiniteExpFam,
    element: &PermSymmetry,
    x: &[BigRational],
) -> Result<Vec<BigRational>> {
    exact_span_check(fam, x)?;
    let out: Vec<BigRational> = element.sigma.iter().map(|&j| x[j].clone()).collect();
    exact_span_check(fam, &out)?;
    Ok(out)
}

fn span_residual(fam: &FiniteExpFam, x: &[f64]) -> Result<f64> {
    if x.len() != fam.m() {
        return Err(Error::DimensionMismatch {
            expected: fam.m(),
            got: x.len(),
        });
    }
    let g = design(fam.f());
    let rhs = DVector::from_row_slice(x);
    let coef = g
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::InvalidSize(e.into()))?;
    let residual = (g * coef - &rhs).amax();
    let scale = x.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    if residual > 1e-9 * scale {
        return Err(Error::NotInSpan { residual });
    }
    Ok(residual)
}

fn exact_span_check(fam: &FiniteExpFam, x: &[BigRational]) -> Result<()> {
    let exact = fam.exact().ok_or_else(|| {
        Error::InvalidSize("exact statistics action needs a rational family".into())
    })?;
    if x.len() != fam.m() {
        return Err(Error::DimensionMismatch {
            expected: fam.m(),
            got: x.len(),
        });
    }
    let g = design(&exact.f);
    let rows = fam.basis_rows();
    let sub = DMatrix::from_fn(rows.len(), rows.len(), |i, j| g[(rows[i], j)].clone());
    let inv = linalg::inverse(&sub, &BigRational::zero()).expect("independent basis rows");
    let coef = matvec(
        &inv,
        &DVector::from_fn(rows.len(), |r, _| x[rows[r]].clone()),
    );
    let fitted = matvec(&g, &coef);
    if fitted.iter().zip(x).any(|(a, b)| a != b) {
        let residual = fitted
            .iter()
            .zip(x)
            .map(|(a, b)| crate::scalar::Field::to_f64(&(a - b)).abs())
            .fold(0.0, f64::max);
        return Err(Error::NotInSpan { residual });
    }
    Ok(())
}

/// `max_i |p_{Aθ+B}(x_i) − p_θ(x_{σ(i)})|` over the given points.
pub fn probability_residual(
    fam: &FiniteExpFam,
    element: &PermSymmetry,
    thetas: &[DVector<f64>],
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for theta in thetas {
        let moved = fam.prob_vector(&element.apply(theta))?;
        let p = fam.prob_vector(theta)?;
        for (i, &s) in element.sigma.iter().enumerate() {
            worst = worst.max((moved[i] - p[s]).abs());
        }
    }
    Ok(worst)
}

/// `max |Aᵀ h(Aθ + B) A − h(θ)|` over the given points.
pub fn isometry_residual(
    fam: &FiniteExpFam,
    element: &PermSymmetry,
    thetas: &[DVector<f64>],
) -> Result<f64> {
    let a = element.a();
    let mut worst: f64 = 0.0;
    for theta in thetas {
        let moved = fam.fisher(&element.apply(theta))?.entries;
        let here = fam.fisher(theta)?.entries;
        worst = worst.max((a.transpose() * moved * a - here).amax());
    }
    Ok(worst)
}

/// Lookup of elements by permutation, for callers that index a report often.
pub fn sigma_index(report: &WeylGroupReport) -> HashMap<Vec<usize>, usize> {
    report
        .elements
        .iter()
        .enumerate()
        .map(|(i, e)| (e.sigma.clone(), i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expfam::Backend;
    use crate::scalar::{int, rat};

    #[test]
    fn identity_witness_is_trivial() {
        let fam = FiniteExpFam::categorical(3).unwrap();
        let w = affine_witness(&fam, &[0, 1, 2]).unwrap();
        let exact = w.exact().unwrap();
        assert_eq!(exact.a, linalg::identity(2));
        assert!(exact.u.iter().all(Zero::is_zero));
        assert!(exact.b.iter().all(LogWeight::is_zero));
        assert!(exact.c.is_zero());
    }

    #[test]
    fn binomial_reversal_witness() {
        let fam = FiniteExpFam::binomial(2).unwrap();
        let w = affine_witness(&fam, &[2, 1, 0]).unwrap();
        let exact = w.exact().unwrap();
        assert_eq!(exact.a[(0, 0)], int(-1));
        assert_eq!(exact.u[0], int(2));
        assert!(exact.b[0].is_zero() && exact.c.is_zero());
        assert!(affine_witness(&fam, &[1, 0, 2]).is_none());
    }

    #[test]
    fn categorical_swap_first_and_last() {
        let fam = FiniteExpFam::categorical(3).unwrap();
        let w = affine_witness(&fam, &[2, 1, 0]).unwrap();
        let exact = w.exact().unwrap();
        let at = exact.a.transpose();
        let want = DMatrix::from_row_slice(2, 2, &[int(-1), int(-1), int(0), int(1)]);
        assert_eq!(at, want);
        assert_eq!(exact.u, DVector::from_vec(vec![int(1), int(0)]));
        assert!(exact.b.iter().all(LogWeight::is_zero) && exact.c.is_zero());
    }

    #[test]
    fn shifting_c_keeps_full_simplex_symmetric() {
        // with m = n + 1 every C difference lies in the span of [F | 1]
        let fam = FiniteExpFam::new(
            vec!["x1".into(), "x2".into(), "x3".into()],
            vec![
                LogWeight::zero(),
                LogWeight::zero(),
                LogWeight::from_rational(rat(1, 7)),
            ],
            vec![
                vec![int(1), int(0)],
                vec![int(0), int(1)],
                vec![int(0), int(0)],
            ],
            Backend::Rational,
        )
        .unwrap();
        let report = enumerate_weyl(&fam, DEFAULT_LIMIT_M).unwrap();
        assert_eq!(report.order, 6);
    }

    #[test]
    fn perturbed_binomial_loses_reversal() {
        let mut c: Vec<LogWeight> = (0..4).map(|k| LogWeight::ln_binomial(3, k)).collect();
        c[3] = &c[3] + &LogWeight::from_rational(rat(1, 7));
        let fam = FiniteExpFam::new(
            (0..4).map(|k| k.to_string()).collect(),
            c,
            (0..4).map(|k| vec![int(k)]).collect(),
            Backend::Rational,
        )
        .unwrap();
        let report = enumerate_weyl(&fam, DEFAULT_LIMIT_M).unwrap();
        assert_eq!(report.order, 1);
    }

    #[test]
    fn witness_with_nonzero_shift() {
        // C = (0, 1/2, 1): reversal needs B = -1/2, c = 1
        let fam = FiniteExpFam::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                LogWeight::zero(),
                LogWeight::from_rational(rat(1, 2)),
                LogWeight::from_rational(int(1)),
            ],
            vec![vec![int(0)], vec![int(1)], vec![int(2)]],
            Backend::Rational,
        )
        .unwrap();
        let w = affine_witness(&fam, &[2, 1, 0]).unwrap();
        let exact = w.exact().unwrap();
        // C_{σ(i)} - C_i = 1 - i = <B, i> + c
        assert_eq!(exact.b[0], LogWeight::from_rational(int(-1)));
        assert_eq!(exact.c, LogWeight::from_rational(int(1)));
    }

    #[test]
    fn float_backend_matches_exact() {
        let exact = FiniteExpFam::categorical(4).unwrap();
        let float = FiniteExpFam::new(
            exact.labels().to_vec(),
            exact.exact().unwrap().c.clone(),
            exact
                .exact()
                .unwrap()
                .f
                .row_iter()
                .map(|r| r.iter().cloned().collect())
                .collect(),
            Backend::float(),
        )
        .unwrap();
        let a = enumerate_weyl(&exact, DEFAULT_LIMIT_M).unwrap();
        let b = enumerate_weyl(&float, DEFAULT_LIMIT_M).unwrap();
        assert_eq!(a.sigmas(), b.sigmas());
        assert_eq!(b.checks.unwrap().functorial, true);
    }

    #[test]
    fn too_large_is_rejected() {
        let fam = FiniteExpFam::categorical(4).unwrap();
        assert!(matches!(enumerate_weyl(&fam, 3), Err(Error::TooLarge(_))));
    }

    #[test]
    fn statistics_action() {
        let bin = FiniteExpFam::binomial(2).unwrap();
        let rev = affine_witness(&bin, &[2, 1, 0]).unwrap();
        assert_eq!(
            action_on_statistics(&bin, &rev, &[0.0, 1.0, 2.0]).unwrap(),
            vec![2.0, 1.0, 0.0]
        );
        assert_eq!(
            action_on_statistics(&bin, &rev, &[1.0; 3]).unwrap(),
            vec![1.0; 3]
        );
        assert!(matches!(
            action_on_statistics(&bin, &rev, &[0.0, 1.0, 0.0]),
            Err(Error::NotInSpan { .. })
        ));

        let cat = FiniteExpFam::categorical(3).unwrap();
        let swap = affine_witness(&cat, &[1, 0, 2]).unwrap();
        let out = action_on_statistics_exact(&cat, &swap, &[int(1), int(0), int(0)]).unwrap();
        assert_eq!(out, vec![int(0), int(1), int(0)]);
    }

    #[test]
    fn json_record_shape() {
        let bin = FiniteExpFam::binomial(2).unwrap();
        let report = enumerate_weyl(&bin, DEFAULT_LIMIT_M).unwrap();
        let v = report.to_json();
        assert_eq!(v["order"], 2);
        assert_eq!(v["name"], "Z_2");
        assert_eq!(v["elements"][1]["sigma"], json!([3, 2, 1]));
        assert_eq!(v["elements"][1]["A"], json!([["-1"]]));
        assert_eq!(v["elements"][1]["u"], json!(["2"]));
        assert_eq!(v["cayley"], json!([[0, 1], [1, 0]]));
    }
}
