//! Small dense linear algebra over a [`Scalar`] field: an incremental
//! row-echelon basis for independence tests and triangular solves.

use crate::{Error, Result, Scalar};

/// Row-echelon basis of a growing set of vectors.
///
/// Each stored row has a unit pivot and zeros in the pivot columns of the
/// other rows, so reducing a vector is a single pass.
#[derive(Clone, Debug)]
pub struct Echelon<T> {
    width: usize,
    rows: Vec<(usize, Vec<T>)>,
}

impl<T: Scalar> Echelon<T> {
    pub fn new(width: usize) -> Self {
        Echelon {
            width,
            rows: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residual of `v` after eliminating the stored pivots.
    pub fn reduce(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.width, "vector width mismatch");
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            let f = v[*pivot].clone();
            if f.is_zero() {
                continue;
            }
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.clone() - f.clone() * r.clone();
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[T]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Adds `v` if it is independent of the stored rows; returns whether it was.
    pub fn insert(&mut self, v: &[T]) -> bool {
        let mut r = self.reduce(v);
        let Some(pivot) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = T::one() / r[pivot].clone();
        for x in r.iter_mut() {
            if !x.is_zero() {
                *x = x.clone() * inv.clone();
            }
        }
        for (_, row) in self.rows.iter_mut() {
            let f = row[pivot].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        self.rows.push((pivot, r));
        true
    }
}

pub fn rank<T: Scalar>(rows: &[Vec<T>]) -> usize {
    let Some(first) = rows.first() else {
        return 0;
    };
    let mut e = Echelon::new(first.len());
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Forward substitution for a lower-triangular system `L x = y`.
pub fn solve_lower_triangular<T: Scalar>(l: &[Vec<T>], y: &[T]) -> Result<Vec<T>> {
    let n = y.len();
    let mut x: Vec<T> = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = y[i].clone();
        for (j, xj) in x.iter().enumerate() {
            acc = acc - l[i][j].clone() * xj.clone();
        }
        if l[i][i].is_zero() {
            return Err(Error::Singular);
        }
        x.push(acc / l[i][i].clone());
    }
    Ok(x)
}

/// Inverse by Gauss-Jordan elimination.
pub fn invert<T: Scalar>(m: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let n = m.len();
    let mut a: Vec<Vec<T>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::Singular)?;
        a.swap(col, piv);
        let inv = T::one() / a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(pivot_row) {
                    *x = x.clone() - f.clone() * p;
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec<T: Scalar>(m: &[Vec<T>], v: &[T]) -> Vec<T> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
        })
        .collect()
}
