//! Dense dissimilarity matrices.
//!
//! A [`DissimilarityMatrix`] is an `n × n` row-major array that is symmetric,
//! non-negative and zero on the diagonal. All invariants are checked exactly
//! at construction; no tolerance is applied anywhere.
//!
//! The seriation machinery reads entries through the [`Dissimilarity`] trait
//! so that a [`CountingView`] can be slotted in to measure access counts.

use std::cell::Cell;

use crate::error::{Error, Result};
use crate::permutation::Permutation;

/// Read access to a square table of pairwise dissimilarities.
pub trait Dissimilarity {
    /// Number of objects.
    fn size(&self) -> usize;
    /// Dissimilarity between objects `i` and `j`.
    fn get(&self, i: usize, j: usize) -> f64;
}

#[derive(Debug, Clone, PartialEq)]
pub struct DissimilarityMatrix {
    n: usize,
    values: Vec<f64>,
}

impl DissimilarityMatrix {
    /// Builds a matrix from row-major values, validating every invariant.
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if values.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                got: values.len(),
            });
        }
        let m = DissimilarityMatrix { n, values };
        m.validate()?;
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut values = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
            values.extend_from_slice(r);
        }
        Self::new(n, values)
    }

    /// Evaluates `f` on the strict upper triangle and mirrors it.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = f(i, j);
                values[i * n + j] = v;
                values[j * n + i] = v;
            }
        }
        Self::new(n, values)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let v = self.values[i * n + j];
                if !v.is_finite() {
                    return Err(Error::NonFinite { i, j });
                }
                if v < 0.0 {
                    return Err(Error::Negative { i, j });
                }
            }
            if self.values[i * n + i] != 0.0 {
                return Err(Error::NonZeroDiagonal { i });
            }
            for j in (i + 1)..n {
                if self.values[i * n + j] != self.values[j * n + i] {
                    return Err(Error::Asymmetric { i, j });
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// Returns the matrix `(i, j) ↦ D(perm(i), perm(j))`.
    pub fn conjugate(&self, perm: &Permutation) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: perm.len(),
            });
        }
        let p = perm.as_slice();
        let n = self.n;
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                values.push(self.get(p[i], p[j]));
            }
        }
        Ok(DissimilarityMatrix { n, values })
    }
}

impl Dissimilarity for DissimilarityMatrix {
    fn size(&self) -> usize {
        self.n
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        DissimilarityMatrix::get(self, i, j)
    }
}

/// Wraps a matrix and counts every entry read.
#[derive(Debug)]
pub struct CountingView<'a> {
    inner: &'a DissimilarityMatrix,
    accesses: Cell<u64>,
}

impl<'a> CountingView<'a> {
    pub fn new(inner: &'a DissimilarityMatrix) -> Self {
        CountingView {
            inner,
            accesses: Cell::new(0),
        }
    }

    pub fn accesses(&self) -> u64 {
        self.accesses.get()
    }

    pub fn matrix(&self) -> &'a DissimilarityMatrix {
        self.inner
    }
}

impl Dissimilarity for CountingView<'_> {
    fn size(&self) -> usize {
        self.inner.n()
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        self.accesses.set(self.accesses.get() + 1);
        self.inner.get(i, j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_asymmetric() {
        let err = DissimilarityMatrix::from_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap_err();
        assert_eq!(err, Error::Asymmetric { i: 0, j: 1 });
    }

    #[test]
    fn rejects_nonzero_diagonal_and_negative() {
        let err = DissimilarityMatrix::from_rows(&[vec![0.5, 1.0], vec![1.0, 0.0]]).unwrap_err();
        assert_eq!(err, Error::NonZeroDiagonal { i: 0 });
        let err = DissimilarityMatrix::from_rows(&[vec![0.0, -1.0], vec![-1.0, 0.0]]).unwrap_err();
        assert_eq!(err, Error::Negative { i: 0, j: 1 });
    }

    #[test]
    fn rejects_ragged_rows() {
        let err = DissimilarityMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0]]).unwrap_err();
        assert!(matches!(err, Error::NotSquare { row: 1, .. }));
    }

    #[test]
    fn conjugation_relabels_objects() {
        let d = DissimilarityMatrix::from_fn(3, |i, j| (i + j) as f64).unwrap();
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        let c = d.conjugate(&p).unwrap();
        assert_eq!(c.get(0, 1), d.get(2, 0));
        assert_eq!(c.get(1, 2), d.get(0, 1));
    }

    #[test]
    fn counting_view_counts() {
        let d = DissimilarityMatrix::from_fn(4, |i, j| (j - i) as f64).unwrap();
        let v = CountingView::new(&d);
        let _ = v.get(0, 1) + v.get(1, 2) + v.get(3, 0);
        assert_eq!(v.accesses(), 3);
    }
}
