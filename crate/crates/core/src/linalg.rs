//! Dense elimination routines generic over [`Field`].
//!
//! With `eps = 0` over rationals every decision is exact; with `f64` the
//! caller supplies the pivot tolerance.

use nalgebra::{DMatrix, DVector};

use crate::scalar::Field;

pub fn matmul<T: Field>(a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
    assert_eq!(a.ncols(), b.nrows(), "matmul shape mismatch");
    DMatrix::from_fn(a.nrows(), b.ncols(), |i, j| {
        (0..a.ncols()).fold(T::zero(), |acc, k| {
            acc + a[(i, k)].clone() * b[(k, j)].clone()
        })
    })
}

pub fn matvec<T: Field>(a: &DMatrix<T>, x: &DVector<T>) -> DVector<T> {
    assert_eq!(a.ncols(), x.len(), "matvec shape mismatch");
    DVector::from_fn(a.nrows(), |i, _| {
        (0..a.ncols()).fold(T::zero(), |acc, k| acc + a[(i, k)].clone() * x[k].clone())
    })
}

pub fn identity<T: Field>(n: usize) -> DMatrix<T> {
    DMatrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
}

fn pick_pivot<T: Field>(candidates: impl Iterator<Item = (usize, T)>, eps: &T) -> Option<usize> {
    let mut best: Option<(usize, T)> = None;
    for (idx, v) in candidates {
        let a = v.abs();
        if a > *eps && best.as_ref().is_none_or(|(_, b)| a > *b) {
            best = Some((idx, a));
        }
    }
    best.map(|(idx, _)| idx)
}

/// Greedily selects rows that are linearly independent, in index order.
pub fn independent_rows<T: Field>(m: &DMatrix<T>, eps: &T) -> Vec<usize> {
    let mut reduced: Vec<(usize, Vec<T>)> = Vec::new();
    let mut chosen = Vec::new();
    for r in 0..m.nrows() {
        let mut row: Vec<T> = m.row(r).iter().cloned().collect();
        for (col, basis) in &reduced {
            if row[*col].is_zero() {
                continue;
            }
            let factor = row[*col].clone() / basis[*col].clone();
            for (x, b) in row.iter_mut().zip(basis) {
                *x = x.clone() - factor.clone() * b.clone();
            }
        }
        if let Some(col) = pick_pivot(row.iter().cloned().enumerate(), eps) {
            reduced.push((col, row));
            chosen.push(r);
        }
    }
    chosen
}

pub fn rank<T: Field>(m: &DMatrix<T>, eps: &T) -> usize {
    independent_rows(m, eps).len()
}

/// Gauss-Jordan inverse with partial pivoting; `None` when singular.
pub fn inverse<T: Field>(m: &DMatrix<T>, eps: &T) -> Option<DMatrix<T>> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "inverse of non-square matrix");
    let mut a = m.clone();
    let mut inv = identity::<T>(n);
    for col in 0..n {
        let p = pick_pivot((col..n).map(|r| (r, a[(r, col)].clone())), eps)?;
        a.swap_rows(col, p);
        inv.swap_rows(col, p);
        let pivot = a[(col, col)].clone();
        for j in 0..n {
            a[(col, j)] = a[(col, j)].clone() / pivot.clone();
            inv[(col, j)] = inv[(col, j)].clone() / pivot.clone();
        }
        for r in 0..n {
            if r == col || a[(r, col)].is_zero() {
                continue;
            }
            let factor = a[(r, col)].clone();
            for j in 0..n {
                a[(r, j)] = a[(r, j)].clone() - factor.clone() * a[(col, j)].clone();
                inv[(r, j)] = inv[(r, j)].clone() - factor.clone() * inv[(col, j)].clone();
            }
        }
    }
    Some(inv)
}

pub fn determinant<T: Field>(m: &DMatrix<T>) -> T {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "determinant of non-square matrix");
    let mut a = m.clone();
    let mut det = T::one();
    for col in 0..n {
        let Some(p) = pick_pivot((col..n).map(|r| (r, a[(r, col)].clone())), &T::zero()) else {
            return T::zero();
        };
        if p != col {
            a.swap_rows(col, p);
            det = -det;
        }
        let pivot = a[(col, col)].clone();
        det = det * pivot.clone();
        for r in col + 1..n {
            if a[(r, col)].is_zero() {
                continue;
            }
            let factor = a[(r, col)].clone() / pivot.clone();
            for j in col..n {
                a[(r, j)] = a[(r, j)].clone() - factor.clone() * a[(col, j)].clone();
            }
        }
    }
    det
}

pub fn to_f64_matrix<T: Field>(m: &DMatrix<T>) -> DMatrix<f64> {
    m.map(|x| x.to_f64())
}

pub fn to_f64_vector<T: Field>(v: &DVector<T>) -> DVector<f64> {
    v.map(|x| x.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use num_rational::BigRational;

    fn q(rows: &[&[i64]]) -> DMatrix<BigRational> {
        DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| int(rows[i][j]))
    }

    #[test]
    fn exact_inverse_and_determinant() {
        let m = q(&[&[2, 1], &[1, 2]]);
        let inv = inverse(&m, &BigRational::from_integer(0.into())).unwrap();
        assert_eq!(inv[(0, 0)], rat(2, 3));
        assert_eq!(inv[(0, 1)], rat(-1, 3));
        assert_eq!(matmul(&m, &inv), identity(2));
        assert_eq!(determinant(&m), int(3));
    }

    #[test]
    fn singular_matrix_detected() {
        let m = q(&[&[1, 2], &[2, 4]]);
        let zero = int(0);
        assert!(inverse(&m, &zero).is_none());
        assert_eq!(determinant(&m), zero);
        assert_eq!(rank(&m, &zero), 1);
    }

    #[test]
    fn independent_rows_skips_dependent_ones() {
        let m = q(&[&[1, 0, 1], &[2, 0, 2], &[0, 1, 1], &[1, 1, 2], &[0, 0, 1]]);
        assert_eq!(independent_rows(&m, &int(0)), vec![0, 2, 4]);
    }

    #[test]
    fn float_rank_uses_tolerance() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0 + 1e-14]);
        assert_eq!(rank(&m, &1e-9), 1);
        assert_eq!(rank(&m, &0.0), 2);
    }
}
