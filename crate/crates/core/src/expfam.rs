//! Finite exponential families `p(x_i; θ) = exp(C_i + <θ, F_i> - ψ(θ))`.
//!
//! A family is stored twice when it is exact: the rational data (`F` over
//! Q, `C` as symbolic [`LogWeight`]s) drives every combinatorial decision,
//! while `f64` copies feed the transcendental quantities (ψ, p, Fisher
//! metric, α-connections).

use std::collections::HashSet;

use nalgebra::{DMatrix, DVector};
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{int, LogWeight};

/// Default relative tolerance of the floating backend.
pub const DEFAULT_FLOAT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Backend {
    Rational,
    Float { tol: f64 },
}

impl Backend {
    pub fn float() -> Self {
        Backend::Float {
            tol: DEFAULT_FLOAT_TOL,
        }
    }

    /// Tolerance used for floating decisions (also for the float side of an
    /// exact family).
    pub fn tol(&self) -> f64 {
        match self {
            Backend::Rational => DEFAULT_FLOAT_TOL,
            Backend::Float { tol } => *tol,
        }
    }
}

/// Exact data of a rational-backend family.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactData {
    pub c: Vec<LogWeight>,
    pub f: DMatrix<BigRational>,
}

#[derive(Debug, Clone)]
pub struct FiniteExpFam {
    labels: Vec<String>,
    c: DVector<f64>,
    f: DMatrix<f64>,
    exact: Option<ExactData>,
    backend: Backend,
    injective: bool,
    basis_rows: Vec<usize>,
}

/// Fisher metric at a parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricTensor {
    pub theta: DVector<f64>,
    pub entries: DMatrix<f64>,
}

/// `Γ^{(α)}_{ij,k}` at a parameter point, dense row-major in `(i, j, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChristoffelArray {
    pub theta: DVector<f64>,
    pub alpha: f64,
    n: usize,
    entries: Vec<f64>,
}

impl ChristoffelArray {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.entries[(i * self.n + j) * self.n + k]
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

impl FiniteExpFam {
    /// Builds a family from exact data. With [`Backend::Float`] the data is
    /// rounded and the exact copy discarded.
    pub fn new(
        labels: Vec<String>,
        c: Vec<LogWeight>,
        f: Vec<Vec<BigRational>>,
        backend: Backend,
    ) -> Result<Self> {
        let (m, n) = shape(&labels, c.len(), &f)?;
        let f_exact = DMatrix::from_fn(m, n, |i, j| f[i][j].clone());
        let f_float = linalg::to_f64_matrix(&f_exact);
        let c_float = DVector::from_iterator(m, c.iter().map(LogWeight::to_f64));
        let basis_rows = match backend {
            Backend::Rational => linalg::independent_rows(&design(&f_exact), &BigRational::zero()),
            Backend::Float { tol } => float_basis(&f_float, tol),
        };
        let injective = match backend {
            Backend::Rational => distinct_rows(&f_exact),
            Backend::Float { tol } => float_distinct_rows(&f_float, tol),
        };
        let exact = matches!(backend, Backend::Rational).then_some(ExactData { c, f: f_exact });
        Self::finish(
            labels, c_float, f_float, exact, backend, injective, basis_rows,
        )
    }

    /// Builds a floating-backend family directly from `f64` data.
    pub fn from_floats(
        labels: Vec<String>,
        c: Vec<f64>,
        f: Vec<Vec<f64>>,
        tol: f64,
    ) -> Result<Self> {
        let (m, n) = shape(&labels, c.len(), &f)?;
        let f_float = DMatrix::from_fn(m, n, |i, j| f[i][j]);
        let basis_rows = float_basis(&f_float, tol);
        let injective = float_distinct_rows(&f_float, tol);
        Self::finish(
            labels,
            DVector::from_vec(c),
            f_float,
            None,
            Backend::Float { tol },
            injective,
            basis_rows,
        )
    }

    fn finish(
        labels: Vec<String>,
        c: DVector<f64>,
        f: DMatrix<f64>,
        exact: Option<ExactData>,
        backend: Backend,
        injective: bool,
        basis_rows: Vec<usize>,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        let expected = f.ncols() + 1;
        if basis_rows.len() < expected {
            return Err(Error::RankDeficient {
                rank: basis_rows.len(),
                expected,
            });
        }
        if c.iter().chain(f.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidSize("non-finite entry in C or F".into()));
        }
        Ok(Self {
            labels,
            c,
            f,
            exact,
            backend,
            injective,
            basis_rows,
        })
    }

    /// The categorical family on `m` outcomes: `F_i = e_i` for `i < m`,
    /// `F_m = 0`, `C = 0`.
    pub fn categorical(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidSize(format!(
                "categorical family needs at least 2 outcomes, got {m}"
            )));
        }
        let n = m - 1;
        let labels = (1..=m).map(|i| format!("x{i}")).collect();
        let f = (0..m)
            .map(|i| (0..n).map(|j| int((i == j) as i64)).collect())
            .collect();
        Self::new(labels, vec![LogWeight::zero(); m], f, Backend::Rational)
    }

    /// The binomial family with `n` trials: outcomes `k = 0..=n`,
    /// `C_k = ln(n choose k)`, `F_k = k`.
    pub fn binomial(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidSize(
                "binomial family needs at least 1 trial".into(),
            ));
        }
        let labels = (0..=n).map(|k| k.to_string()).collect();
        let c = (0..=n)
            .map(|k| LogWeight::ln_binomial(n as u64, k as u64))
            .collect();
        let f = (0..=n).map(|k| vec![int(k as i64)]).collect();
        Self::new(labels, c, f, Backend::Rational)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Number of outcomes.
    pub fn m(&self) -> usize {
        self.f.nrows()
    }

    /// Dimension of the parameter space.
    pub fn n(&self) -> usize {
        self.f.ncols()
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn is_injective(&self) -> bool {
        self.injective
    }

    pub fn c(&self) -> &DVector<f64> {
        &self.c
    }

    /// Sufficient statistics, row `i` is `F_i`.
    pub fn f(&self) -> &DMatrix<f64> {
        &self.f
    }

    pub fn exact(&self) -> Option<&ExactData> {
        self.exact.as_ref()
    }

    /// `n + 1` row indices whose rows of `[F | 1]` are linearly independent.
    pub fn basis_rows(&self) -> &[usize] {
        &self.basis_rows[..self.n() + 1]
    }

    pub fn row(&self, i: usize) -> DVector<f64> {
        self.f.row(i).transpose()
    }

    fn check_theta(&self, theta: &DVector<f64>) -> Result<()> {
        if theta.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: theta.len(),
            });
        }
        Ok(())
    }

    /// Exponents `C_i + <θ, F_i>`.
    fn exponents(&self, theta: &DVector<f64>) -> DVector<f64> {
        &self.c + &self.f * theta
    }

    /// `ψ(θ) = ln Σ exp(C_i + <θ, F_i>)`, evaluated with a max shift.
    pub fn log_partition(&self, theta: &DVector<f64>) -> Result<f64> {
        self.check_theta(theta)?;
        Ok(log_sum_exp(&self.exponents(theta)))
    }

    pub fn prob_vector(&self, theta: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_theta(theta)?;
        let s = self.exponents(theta);
        let max = s.max();
        let w = s.map(|v| (v - max).exp());
        let z = w.sum();
        Ok(w / z)
    }

    /// `η = E_θ[F] = ∇ψ(θ)`.
    pub fn mean_params(&self, theta: &DVector<f64>) -> Result<DVector<f64>> {
        let p = self.prob_vector(theta)?;
        Ok(self.f.transpose() * p)
    }

    /// Fisher metric as the analytic Hessian of ψ: `Σ p_i F_i F_iᵀ − ηηᵀ`.
    pub fn fisher(&self, theta: &DVector<f64>) -> Result<MetricTensor> {
        let p = self.prob_vector(theta)?;
        let eta = self.f.transpose() * &p;
        let weighted = DMatrix::from_fn(self.m(), self.n(), |i, j| p[i] * self.f[(i, j)]);
        let mut h = self.f.transpose() * weighted - &eta * eta.transpose();
        h = (&h + h.transpose()) * 0.5;
        if h.clone().cholesky().is_none() {
            return Err(Error::PositivityLost {
                theta: theta.iter().copied().collect(),
            });
        }
        Ok(MetricTensor {
            theta: theta.clone(),
            entries: h,
        })
    }

    /// Fisher metric by literal summation of score products over Ω.
    pub fn fisher_def(&self, theta: &DVector<f64>) -> Result<MetricTensor> {
        let p = self.prob_vector(theta)?;
        let eta = self.f.transpose() * &p;
        let n = self.n();
        let mut h = DMatrix::zeros(n, n);
        for i in 0..self.m() {
            let score = self.row(i) - &eta;
            for a in 0..n {
                for b in 0..n {
                    h[(a, b)] += p[i] * score[a] * score[b];
                }
            }
        }
        Ok(MetricTensor {
            theta: theta.clone(),
            entries: h,
        })
    }

    /// `Γ^{(α)}_{ij,k} = E[(∂i∂j ln p + (1−α)/2 ∂i ln p ∂j ln p) ∂k ln p]`,
    /// summed literally over Ω with `∂i ln p = F^i − η_i` and
    /// `∂i∂j ln p = −∂i∂j ψ`.
    pub fn christoffel_alpha(&self, theta: &DVector<f64>, alpha: f64) -> Result<ChristoffelArray> {
        let p = self.prob_vector(theta)?;
        let eta = self.f.transpose() * &p;
        let hessian = self.fisher(theta)?.entries;
        let n = self.n();
        let half = (1.0 - alpha) / 2.0;
        let mut entries = vec![0.0; n * n * n];
        for x in 0..self.m() {
            let s = self.row(x) - &eta;
            for i in 0..n {
                for j in 0..n {
                    let inner = -hessian[(i, j)] + half * s[i] * s[j];
                    for k in 0..n {
                        entries[(i * n + j) * n + k] += p[x] * inner * s[k];
                    }
                }
            }
        }
        Ok(ChristoffelArray {
            theta: theta.clone(),
            alpha,
            n,
            entries,
        })
    }

    /// `E_θ[X]` for a random variable given by its values on Ω.
    pub fn expectation(&self, theta: &DVector<f64>, x: &[f64]) -> Result<f64> {
        if x.len() != self.m() {
            return Err(Error::DimensionMismatch {
                expected: self.m(),
                got: x.len(),
            });
        }
        let p = self.prob_vector(theta)?;
        Ok(p.iter().zip(x).map(|(pi, xi)| pi * xi).sum())
    }

    /// Hadamard ratio of `[exp(<ξ_s, F_i>)]` at `m` sample points, see
    /// [`exponential_gram_ratio`].
    pub fn exponential_independence(&self, samples: &[DVector<f64>]) -> f64 {
        let vectors: Vec<DVector<f64>> = (0..self.m()).map(|i| self.row(i)).collect();
        exponential_gram_ratio(&vectors, samples)
    }
}

/// `|det M| / Π ‖row_s(M)‖` for `M[s][i] = exp(<ξ_s, v_i>)`.
///
/// The ratio lies in `[0, 1]` and is scale-free; it is nonzero for generic
/// sample points exactly when the exponentials `exp(<·, v_i>)` are linearly
/// independent, which holds whenever the `v_i` are pairwise distinct.
pub fn exponential_gram_ratio(vectors: &[DVector<f64>], samples: &[DVector<f64>]) -> f64 {
    assert_eq!(
        vectors.len(),
        samples.len(),
        "need one sample point per vector"
    );
    let m = vectors.len();
    let gram = DMatrix::from_fn(m, m, |s, i| samples[s].dot(&vectors[i]).exp());
    let norms: f64 = gram.row_iter().map(|r| r.norm()).product();
    gram.determinant().abs() / norms
}

pub(crate) fn log_sum_exp(s: &DVector<f64>) -> f64 {
    let max = s.max();
    max + s.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// `[F | 1]`, the design matrix of the witness systems.
pub(crate) fn design<T: crate::scalar::Field>(f: &DMatrix<T>) -> DMatrix<T> {
    let (m, n) = f.shape();
    DMatrix::from_fn(
        m,
        n + 1,
        |i, j| if j < n { f[(i, j)].clone() } else { T::one() },
    )
}

pub(crate) fn float_scale(f: &DMatrix<f64>) -> f64 {
    f.iter().fold(1.0f64, |acc, v| acc.max(v.abs()))
}

fn float_basis(f: &DMatrix<f64>, tol: f64) -> Vec<usize> {
    linalg::independent_rows(&design(f), &(tol * float_scale(f)))
}

fn shape<T>(labels: &[String], c_len: usize, f: &[Vec<T>]) -> Result<(usize, usize)> {
    let m = labels.len();
    if c_len != m || f.len() != m {
        return Err(Error::InvalidSize(format!(
            "{m} labels but {c_len} entries in C and {} rows in F",
            f.len()
        )));
    }
    let n = f.first().map_or(0, Vec::len);
    if n == 0 {
        return Err(Error::InvalidSize("F must have at least one column".into()));
    }
    if let Some((i, row)) = f.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::InvalidSize(format!(
            "row {i} of F has {} entries, expected {n}",
            row.len()
        )));
    }
    if m < n + 1 {
        return Err(Error::RankDeficient {
            rank: m,
            expected: n + 1,
        });
    }
    Ok((m, n))
}

fn distinct_rows(f: &DMatrix<BigRational>) -> bool {
    let rows: HashSet<Vec<BigRational>> =
        f.row_iter().map(|r| r.iter().cloned().collect()).collect();
    rows.len() == f.nrows()
}

fn float_distinct_rows(f: &DMatrix<f64>, tol: f64) -> bool {
    let eps = tol * float_scale(f);
    (0..f.nrows()).all(|i| (i + 1..f.nrows()).all(|j| (f.row(i) - f.row(j)).amax() > eps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn theta(v: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(v)
    }

    #[test]
    fn categorical_three_shape() {
        let fam = FiniteExpFam::categorical(3).unwrap();
        assert_eq!((fam.m(), fam.n()), (3, 2));
        let exact = fam.exact().unwrap();
        assert_eq!(exact.f[(0, 0)], int(1));
        assert_eq!(exact.f[(1, 1)], int(1));
        assert_eq!(exact.f[(2, 0)], int(0));
        assert!(exact.c.iter().all(LogWeight::is_zero));
        assert!(fam.is_injective());
    }

    #[test]
    fn categorical_two_and_one() {
        let fam = FiniteExpFam::categorical(2).unwrap();
        assert_eq!(fam.f().as_slice(), &[1.0, 0.0]);
        assert!(matches!(
            FiniteExpFam::categorical(1),
            Err(Error::InvalidSize(_))
        ));
    }

    #[test]
    fn binomial_data() {
        let fam = FiniteExpFam::binomial(2).unwrap();
        let exact = fam.exact().unwrap();
        assert!(exact.c[0].is_zero());
        assert_eq!(exact.c[1], LogWeight::ln_int(2).unwrap());
        assert!(exact.c[2].is_zero());
        assert_eq!(fam.f().as_slice(), &[0.0, 1.0, 2.0]);

        let one = FiniteExpFam::binomial(1).unwrap();
        assert!(one.exact().unwrap().c.iter().all(LogWeight::is_zero));
        assert_eq!(one.f().as_slice(), &[0.0, 1.0]);
        assert!(FiniteExpFam::binomial(0).is_err());
    }

    #[test]
    fn rank_deficiency_and_duplicates_rejected() {
        // second column equals 1 - first column: 1, F^1, F^2 dependent
        let f = vec![
            vec![int(1), int(0)],
            vec![int(0), int(1)],
            vec![int(1), int(0)],
        ];
        let err = FiniteExpFam::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![LogWeight::zero(); 3],
            f,
            Backend::Rational,
        )
        .unwrap_err();
        assert_eq!(
            err,
            Error::RankDeficient {
                rank: 2,
                expected: 3
            }
        );

        let err = FiniteExpFam::new(
            vec!["a".into(), "a".into()],
            vec![LogWeight::zero(); 2],
            vec![vec![int(0)], vec![int(1)]],
            Backend::Rational,
        )
        .unwrap_err();
        assert_eq!(err, Error::DuplicateLabel("a".into()));
    }

    #[test]
    fn two_identical_columns_are_rank_deficient() {
        let f = vec![
            vec![int(0), int(0)],
            vec![int(1), int(1)],
            vec![int(2), int(2)],
        ];
        let err = FiniteExpFam::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![LogWeight::zero(); 3],
            f,
            Backend::Rational,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::RankDeficient {
                rank: 2,
                expected: 3
            }
        ));
    }

    #[test]
    fn log_partition_values() {
        let cat = FiniteExpFam::categorical(3).unwrap();
        assert!((cat.log_partition(&theta(&[0.0, 0.0])).unwrap() - 3f64.ln()).abs() < 1e-15);
        let bin = FiniteExpFam::binomial(2).unwrap();
        assert!((bin.log_partition(&theta(&[0.0])).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-15);
        assert!(cat.log_partition(&theta(&[0.0])).is_err());
    }

    #[test]
    fn log_partition_survives_large_theta() {
        let bin = FiniteExpFam::binomial(2).unwrap();
        let psi = bin.log_partition(&theta(&[700.0])).unwrap();
        // 2 ln(1 + e^700) = 1400 + 2 ln(1 + e^-700)
        assert!((psi - 1400.0).abs() < 1e-9);
        let p = bin.prob_vector(&theta(&[700.0])).unwrap();
        assert!(p.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn probabilities_and_means() {
        let bin = FiniteExpFam::binomial(2).unwrap();
        let p = bin.prob_vector(&theta(&[0.0])).unwrap();
        for (got, want) in p.iter().zip([0.25, 0.5, 0.25]) {
            assert!((got - want).abs() < 1e-15);
        }
        let e = std::f64::consts::E;
        let eta = bin.mean_params(&theta(&[1.0])).unwrap();
        assert!((eta[0] - 2.0 * e / (1.0 + e)).abs() < 1e-14);

        let cat = FiniteExpFam::categorical(3).unwrap();
        let eta = cat.mean_params(&theta(&[0.0, 0.0])).unwrap();
        assert!((eta[0] - 1.0 / 3.0).abs() < 1e-15 && (eta[1] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn expectation_examples() {
        let cat = FiniteExpFam::categorical(3).unwrap();
        let t = theta(&[0.0, 0.0]);
        assert!((cat.expectation(&t, &[1.0, 1.0, 1.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((cat.expectation(&t, &[3.0, 0.0, 0.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!(cat.expectation(&t, &[1.0]).is_err());
        let bin = FiniteExpFam::binomial(2).unwrap();
        assert!((bin.expectation(&theta(&[0.0]), &[0.0, 1.0, 2.0]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn float_family_from_exact_data_drops_exact_copy() {
        let fam = FiniteExpFam::new(
            vec!["a".into(), "b".into()],
            vec![LogWeight::from_rational(rat(1, 2)), LogWeight::zero()],
            vec![vec![int(0)], vec![int(1)]],
            Backend::float(),
        )
        .unwrap();
        assert!(fam.exact().is_none());
        assert_eq!(fam.c()[0], 0.5);
    }

    #[test]
    fn non_injective_flag() {
        let fam = FiniteExpFam::from_floats(
            vec!["a".into(), "b".into(), "c".into()],
            vec![0.0, 0.0, 1.0],
            vec![vec![0.0], vec![1.0], vec![1.0]],
            1e-9,
        )
        .unwrap();
        assert!(!fam.is_injective());
    }
}
