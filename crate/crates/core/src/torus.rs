//! The normalizer `N(S) ≅ T^n ⋊ W` as a concrete group.
//!
//! Torus points are kept as exact rationals reduced mod 1. A Weyl element
//! acts on `T^n` through `ρ(w) = P⁻¹ A_w P`, where the columns of `P` are
//! the lattice generators in θ-coordinates; with the composition
//! convention of [`crate::weyl`] this makes `ρ` a homomorphism and
//!
//! ```text
//! (a, w)·(a', w') = (ρ(w) a' + a mod 1, w·w')
//! ```
//!
//! an associative product.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{format_rational, parse_rational, Field};
use crate::weyl::WeylGroupReport;

pub const DEFAULT_TRIALS: usize = 1000;
/// Distance to the nearest integer accepted for floating witnesses.
pub const INTEGRALITY_TOL: f64 = 1e-9;

/// A point of `T^n = R^n / Z^n` with coordinates in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorusElement {
    coords: Vec<BigRational>,
}

fn frac(q: &BigRational) -> BigRational {
    q - q.floor()
}

impl TorusElement {
    pub fn new(coords: Vec<BigRational>) -> Self {
        Self {
            coords: coords.iter().map(frac).collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            coords: vec![BigRational::zero(); n],
        }
    }

    /// Parses each coordinate as a rational or exact decimal.
    pub fn parse(parts: &[&str]) -> Result<Self> {
        Ok(Self::new(
            parts
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<_>>()?,
        ))
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coords.iter().map(|a| -a).collect())
    }

    /// `ρ a mod 1`.
    pub fn transform(&self, rho: &DMatrix<BigRational>) -> Self {
        let v = DVector::from_vec(self.coords.clone());
        Self::new(linalg::matvec(rho, &v).iter().cloned().collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(Field::to_f64).collect()
    }

    pub fn random<R: Rng + ?Sized>(n: usize, max_denominator: i64, rng: &mut R) -> Self {
        Self::new(
            (0..n)
                .map(|_| {
                    let d = rng.random_range(1..=max_denominator);
                    BigRational::new(rng.random_range(0..d).into(), d.into())
                })
                .collect(),
        )
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(format_rational).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// `(a, w)` with `w` an index into a Weyl group report.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SemidirectElement {
    pub a: TorusElement,
    pub w: usize,
}

/// `ρ = P⁻¹ A P` for the witness of element `index`, if it is an integer
/// matrix of determinant ±1.
pub fn rho_matrix(
    report: &WeylGroupReport,
    index: usize,
    basis: &DMatrix<BigRational>,
) -> Result<DMatrix<BigRational>> {
    let zero = BigRational::zero();
    let inv = linalg::inverse(basis, &zero).ok_or(Error::SingularBasis)?;
    let element = &report.elements[index];
    let conj = |a: &DMatrix<BigRational>| linalg::matmul(&linalg::matmul(&inv, a), basis);
    let rho = match element.exact() {
        Some(w) => {
            let rho = conj(&w.a);
            let bad: Vec<(usize, usize, f64)> = offending(&rho, |q| !q.is_integer());
            if !bad.is_empty() {
                return Err(Error::NonIntegral {
                    element: index,
                    entries: bad,
                });
            }
            rho
        }
        None => {
            let basis_f = linalg::to_f64_matrix(basis);
            let inv_f = linalg::to_f64_matrix(&inv);
            let rho_f = inv_f * element.a() * basis_f;
            let bad: Vec<(usize, usize, f64)> = rho_f
                .iter()
                .enumerate()
                .filter(|(_, v)| (*v - v.round()).abs() > INTEGRALITY_TOL)
                .map(|(k, v)| (k % rho_f.nrows(), k / rho_f.nrows(), *v))
                .collect();
            if !bad.is_empty() {
                return Err(Error::NonIntegral {
                    element: index,
                    entries: bad,
                });
            }
            rho_f.map(|v| BigRational::from_integer((v.round() as i64).into()))
        }
    };
    if linalg::determinant(&rho).abs() != BigRational::one() {
        return Err(Error::NonIntegral {
            element: index,
            entries: Vec::new(),
        });
    }
    Ok(rho)
}

fn offending(
    m: &DMatrix<BigRational>,
    pred: impl Fn(&BigRational) -> bool,
) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if pred(&m[(i, j)]) {
                out.push((i, j, m[(i, j)].to_f64()));
            }
        }
    }
    out
}

/// `T^n ⋊ W` for a fixed report and lattice basis.
pub struct NormalizerModel<'a> {
    report: &'a WeylGroupReport,
    rho: Vec<DMatrix<BigRational>>,
    identity: usize,
    n: usize,
}

impl<'a> NormalizerModel<'a> {
    pub fn new(report: &'a WeylGroupReport, basis: &DMatrix<BigRational>) -> Result<Self> {
        let rho = (0..report.order)
            .map(|i| rho_matrix(report, i, basis))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            report,
            rho,
            identity: report.identity_index(),
            n: basis.nrows(),
        })
    }

    /// Model with the identity lattice basis.
    pub fn standard(report: &'a WeylGroupReport) -> Result<Self> {
        let n = report.elements[0].a().nrows();
        Self::new(report, &linalg::identity(n))
    }

    pub fn rho(&self, w: usize) -> &DMatrix<BigRational> {
        &self.rho[w]
    }

    pub fn identity(&self) -> SemidirectElement {
        SemidirectElement {
            a: TorusElement::zero(self.n),
            w: self.identity,
        }
    }

    pub fn mul(&self, x: &SemidirectElement, y: &SemidirectElement) -> SemidirectElement {
        SemidirectElement {
            a: y.a.transform(&self.rho[x.w]).add(&x.a),
            w: self.report.mul(x.w, y.w),
        }
    }

    pub fn inverse(&self, x: &SemidirectElement) -> SemidirectElement {
        let w = self.report.inverse(x.w);
        SemidirectElement {
            a: x.a.neg().transform(&self.rho[w]),
            w,
        }
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> SemidirectElement {
        SemidirectElement {
            a: TorusElement::random(self.n, 60, rng),
            w: rng.random_range(0..self.report.order),
        }
    }
}

pub fn sd_mul(
    model: &NormalizerModel<'_>,
    x: &SemidirectElement,
    y: &SemidirectElement,
) -> SemidirectElement {
    model.mul(x, y)
}

pub fn sd_inverse(model: &NormalizerModel<'_>, x: &SemidirectElement) -> SemidirectElement {
    model.inverse(x)
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalizerReport {
    pub trials: usize,
    pub associative: bool,
    pub inverses: bool,
    pub normal: bool,
    pub quotient_matches: bool,
    pub index: usize,
    pub weyl_order: usize,
    pub homomorphism: bool,
    pub pass: bool,
}

/// Randomized and exhaustive checks that the model is a group with `S`
/// normal and `N(S)/S` equal to the Weyl group.
pub fn verify_normalizer_model(
    report: &WeylGroupReport,
    basis: &DMatrix<BigRational>,
    trials: usize,
    seed: u64,
) -> Result<NormalizerReport> {
    let model = NormalizerModel::new(report, basis)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = report.order;

    let mut associative = true;
    let mut inverses = true;
    for _ in 0..trials {
        let x = model.random_element(&mut rng);
        let y = model.random_element(&mut rng);
        let z = model.random_element(&mut rng);
        associative &= model.mul(&model.mul(&x, &y), &z) == model.mul(&x, &model.mul(&y, &z));
        inverses &= model.mul(&x, &model.inverse(&x)) == model.identity();
        inverses &= model.mul(&model.inverse(&x), &x) == model.identity();
    }

    let mut normal = true;
    for w in 0..order {
        for _ in 0..trials.div_ceil(order).clamp(1, 20) {
            let b = TorusElement::random(model.n, 60, &mut rng);
            let a = TorusElement::random(model.n, 60, &mut rng);
            let g = SemidirectElement { a: b, w };
            let s = SemidirectElement {
                a: a.clone(),
                w: model.identity,
            };
            let conj = model.mul(&model.mul(&g, &s), &model.inverse(&g));
            normal &= conj.w == model.identity && conj.a == a.transform(model.rho(w));
        }
    }

    let mut quotient_matches = true;
    let mut homomorphism = true;
    for i in 0..order {
        for j in 0..order {
            let x = SemidirectElement {
                a: TorusElement::random(model.n, 60, &mut rng),
                w: i,
            };
            let y = SemidirectElement {
                a: TorusElement::random(model.n, 60, &mut rng),
                w: j,
            };
            let expected = match &report.cayley {
                Some(t) => t[i][j],
                None => report.mul(i, j),
            };
            quotient_matches &= model.mul(&x, &y).w == expected;
            homomorphism &= *model.rho(expected) == linalg::matmul(model.rho(i), model.rho(j));
        }
    }

    let cosets: std::collections::BTreeSet<usize> = (0..order)
        .map(|w| {
            model
                .mul(
                    &model.identity(),
                    &SemidirectElement {
                        a: TorusElement::zero(model.n),
                        w,
                    },
                )
                .w
        })
        .collect();
    let index = cosets.len();
    let pass =
        associative && inverses && normal && quotient_matches && homomorphism && index == order;
    Ok(NormalizerReport {
        trials,
        associative,
        inverses,
        normal,
        quotient_matches,
        index,
        weyl_order: order,
        homomorphism,
        pass,
    })
}

/// Least common multiple of the denominators of a torus point, i.e. its
/// order in `T^n`.
pub fn torus_order(a: &TorusElement) -> num_bigint::BigInt {
    a.coords
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, q| acc.lcm(q.denom()))
}
