//! Two-phase dense simplex over a [`Field`], Bland's rule throughout.
//!
//! Problems are in standard form: maximize `c·x` subject to `A x = b`,
//! `x >= 0`. Over rationals (`eps = 0`) the outcome is exact.

use nalgebra::{DMatrix, DVector};

use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<T> {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<T>, value: T },
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
}

impl<T: Field> Tableau<T> {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v = v.clone() / p.clone();
        }
        self.rhs[row] = self.rhs[row].clone() / p;
        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for r in 0..self.rows.len() {
            if r == row || self.rows[r][col].is_zero() {
                continue;
            }
            let factor = self.rows[r][col].clone();
            for (v, pv) in self.rows[r].iter_mut().zip(&pivot_row) {
                *v = v.clone() - factor.clone() * pv.clone();
            }
            self.rhs[r] = self.rhs[r].clone() - factor * pivot_rhs.clone();
        }
        self.basis[row] = col;
    }

    fn reduced_cost(&self, cost: &[T], col: usize) -> T {
        self.basis
            .iter()
            .enumerate()
            .fold(cost[col].clone(), |acc, (r, &b)| {
                acc - cost[b].clone() * self.rows[r][col].clone()
            })
    }

    /// Runs simplex iterations allowing only columns `< allowed` to enter.
    /// Returns `false` when the objective is unbounded.
    fn optimize(&mut self, cost: &[T], allowed: usize, eps: &T) -> bool {
        loop {
            let entering = (0..allowed)
                .filter(|c| !self.basis.contains(c))
                .find(|&c| self.reduced_cost(cost, c) > *eps);
            let Some(col) = entering else {
                return true;
            };
            let mut leave: Option<(usize, T)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][col];
                if *a > *eps {
                    let ratio = self.rhs[r].clone() / a.clone();
                    let better = match &leave {
                        None => true,
                        Some((lr, best)) => {
                            ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            match leave {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }
}

/// Maximizes `c·x` over `{x >= 0 : A x = b}`.
pub fn maximize<T: Field>(a: &DMatrix<T>, b: &DVector<T>, c: &DVector<T>, eps: &T) -> LpOutcome<T> {
    let (m, n) = a.shape();
    assert_eq!(b.len(), m, "rhs length");
    assert_eq!(c.len(), n, "cost length");

    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row: Vec<T> = (0..n)
            .map(|j| {
                if flip {
                    -a[(i, j)].clone()
                } else {
                    a[(i, j)].clone()
                }
            })
            .collect();
        row.extend((0..m).map(|k| if k == i { T::one() } else { T::zero() }));
        rows.push(row);
        rhs.push(if flip { -b[i].clone() } else { b[i].clone() });
    }
    let mut tab = Tableau {
        rows,
        rhs,
        basis: (n..n + m).collect(),
    };

    let mut phase1: Vec<T> = vec![T::zero(); n];
    phase1.extend(std::iter::repeat_n(-T::one(), m));
    tab.optimize(&phase1, n, eps);
    let infeasibility = tab
        .basis
        .iter()
        .zip(&tab.rhs)
        .filter(|(&bcol, _)| bcol >= n)
        .fold(T::zero(), |acc, (_, v)| acc + v.clone());
    if infeasibility > *eps {
        return LpOutcome::Infeasible;
    }
    for r in 0..m {
        if tab.basis[r] >= n {
            if let Some(col) = (0..n).find(|&j| tab.rows[r][j].abs() > *eps) {
                tab.pivot(r, col);
            }
        }
    }

    let mut phase2: Vec<T> = c.iter().cloned().collect();
    phase2.extend(std::iter::repeat_n(T::zero(), m));
    if !tab.optimize(&phase2, n, eps) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![T::zero(); n];
    for (r, &bcol) in tab.basis.iter().enumerate() {
        if bcol < n {
            x[bcol] = tab.rhs[r].clone();
        }
    }
    let value = x
        .iter()
        .zip(c.iter())
        .fold(T::zero(), |acc, (xi, ci)| acc + xi.clone() * ci.clone());
    LpOutcome::Optimal { x, value }
}

/// A nonnegative solution of `A x = b`, if one exists.
pub fn feasible_point<T: Field>(a: &DMatrix<T>, b: &DVector<T>, eps: &T) -> Option<Vec<T>> {
    let zero = DVector::from_element(a.ncols(), T::zero());
    match maximize(a, b, &zero, eps) {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    }
}

/// Convex weights `λ >= 0`, `Σλ = 1`, with `Σ λ_j points[j] = target`.
pub fn convex_weights<T: Field>(points: &[Vec<T>], target: &[T], eps: &T) -> Option<Vec<T>> {
    let (a, b) = convex_system(points, target);
    feasible_point(&a, &b, eps)
}

/// Largest `t` such that `target = Σ λ_j points[j]` with every `λ_j >= t`,
/// `Σλ = 1`. Positive exactly when `target` is in the relative interior.
pub fn interior_margin<T: Field>(points: &[Vec<T>], target: &[T], eps: &T) -> Option<T> {
    // λ_j = μ_j + t with μ, t >= 0.
    let k = points.len();
    let (base, b) = convex_system(points, target);
    let mut a = base.clone().insert_column(k, T::zero());
    for r in 0..a.nrows() {
        let s = (0..k).fold(T::zero(), |acc, j| acc + base[(r, j)].clone());
        a[(r, k)] = s;
    }
    let mut c = DVector::from_element(k + 1, T::zero());
    c[k] = T::one();
    match maximize(&a, &b, &c, eps) {
        LpOutcome::Optimal { value, .. } => Some(value),
        LpOutcome::Unbounded => None,
        LpOutcome::Infeasible => None,
    }
}

fn convex_system<T: Field>(points: &[Vec<T>], target: &[T]) -> (DMatrix<T>, DVector<T>) {
    let dim = target.len();
    let k = points.len();
    let a = DMatrix::from_fn(dim + 1, k, |i, j| {
        if i < dim {
            points[j][i].clone()
        } else {
            T::one()
        }
    });
    let b = DVector::from_fn(
        dim + 1,
        |i, _| if i < dim { target[i].clone() } else { T::one() },
    );
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use num_rational::BigRational;

    fn pts(raw: &[&[i64]]) -> Vec<Vec<BigRational>> {
        raw.iter()
            .map(|p| p.iter().map(|&v| int(v)).collect())
            .collect()
    }

    #[test]
    fn solves_small_maximization() {
        // max x + y  s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
        let a = DMatrix::from_fn(2, 4, |i, j| int([[1, 2, 1, 0], [3, 1, 0, 1]][i][j]));
        let b = DVector::from_vec(vec![int(4), int(6)]);
        let c = DVector::from_vec(vec![int(1), int(1), int(0), int(0)]);
        match maximize(&a, &b, &c, &int(0)) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, rat(14, 5));
                assert_eq!(x[0], rat(8, 5));
                assert_eq!(x[1], rat(6, 5));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let a = DMatrix::from_fn(1, 2, |_, _| int(1));
        let b = DVector::from_vec(vec![int(-1)]);
        assert_eq!(feasible_point(&a, &b, &int(0)), None);

        let a = DMatrix::from_fn(1, 2, |_, j| int([1, -1][j]));
        let b = DVector::from_vec(vec![int(0)]);
        let c = DVector::from_vec(vec![int(1), int(0)]);
        assert_eq!(maximize(&a, &b, &c, &int(0)), LpOutcome::Unbounded);
    }

    #[test]
    fn convex_membership_of_midpoint() {
        let p = pts(&[&[0], &[2]]);
        let w = convex_weights(&p, &[int(1)], &int(0)).unwrap();
        assert_eq!(w, vec![rat(1, 2), rat(1, 2)]);
        assert!(convex_weights(&p, &[int(3)], &int(0)).is_none());
    }

    #[test]
    fn interior_margin_distinguishes_boundary() {
        let square = pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let center = [rat(1, 2), rat(1, 2)];
        assert_eq!(interior_margin(&square, &center, &int(0)), Some(rat(1, 4)));
        let edge = [rat(1, 2), int(0)];
        assert_eq!(interior_margin(&square, &edge, &int(0)), Some(int(0)));
        let outside = [int(2), int(0)];
        assert_eq!(interior_margin(&square, &outside, &int(0)), None);
    }

    #[test]
    fn float_simplex_agrees_with_exact() {
        let p = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let t = interior_margin(&p, &[1.0 / 3.0, 1.0 / 3.0], &1e-12).unwrap();
        assert!((t - 1.0 / 3.0).abs() < 1e-12);
    }
}
