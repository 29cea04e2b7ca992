//! Unimodality and (strict) circular / linear Robinson recognition.
//!
//! A matrix is circular Robinson when every wrapped row
//! `j ↦ D(i, i + j mod n)` is unimodal, and strict circular Robinson when
//! every wrapped row is strictly unimodal. All comparisons are exact.

use crate::error::{Error, Result};
use crate::matrix::{Dissimilarity, DissimilarityMatrix};
use crate::permutation::Permutation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnimodalReport {
    pub unimodal: bool,
    pub strict: bool,
    /// Every mode, ascending.
    pub modes: Vec<usize>,
}

/// Classifies `f`. A mode is an index `m` such that `f` is nondecreasing up
/// to `m` and nonincreasing from `m` on.
pub fn is_unimodal(f: &[f64]) -> Result<UnimodalReport> {
    let n = f.len();
    if n == 0 {
        return Err(Error::Empty("sequence"));
    }
    let mut rising = vec![true; n];
    for m in 1..n {
        rising[m] = rising[m - 1] && f[m - 1] <= f[m];
    }
    let mut falling = vec![true; n];
    for m in (0..n - 1).rev() {
        falling[m] = falling[m + 1] && f[m] >= f[m + 1];
    }
    let modes: Vec<usize> = (0..n).filter(|&m| rising[m] && falling[m]).collect();
    let strict = match modes.as_slice() {
        [m] => strictly_monotone_around(f, *m, *m),
        [m1, m2] if m2 - m1 == 1 => strictly_monotone_around(f, *m1, *m2),
        _ => false,
    };
    Ok(UnimodalReport {
        unimodal: !modes.is_empty(),
        strict,
        modes,
    })
}

fn strictly_monotone_around(f: &[f64], m1: usize, m2: usize) -> bool {
    f[..=m1].windows(2).all(|w| w[0] < w[1]) && f[m2..].windows(2).all(|w| w[0] > w[1])
}

/// First index at which a left-to-right scan detects that `f` is not
/// (strictly) unimodal, if any.
pub fn first_unimodality_violation(
    f: impl IntoIterator<Item = f64>,
    strict: bool,
) -> Option<usize> {
    let mut it = f.into_iter();
    let mut prev = it.next()?;
    let mut climbing = true;
    for (k, v) in it.enumerate() {
        let j = k + 1;
        if climbing {
            if strict {
                if v <= prev {
                    climbing = false;
                }
            } else if v < prev {
                climbing = false;
            }
        } else if (strict && v >= prev) || (!strict && v > prev) {
            return Some(j);
        }
        prev = v;
    }
    None
}

/// First wrapped offset `j` at which row `i` fails, if any.
pub fn circular_row_violation<D: Dissimilarity + ?Sized>(
    d: &D,
    i: usize,
    strict: bool,
) -> Option<usize> {
    let n = d.size();
    first_unimodality_violation((0..n).map(|j| d.get(i, (i + j) % n)), strict)
}

pub fn is_circular_robinson(d: &DissimilarityMatrix, strict: bool) -> bool {
    is_circular_robinson_with(d, strict)
}

pub fn is_circular_robinson_with<D: Dissimilarity + ?Sized>(d: &D, strict: bool) -> bool {
    (0..d.size()).all(|i| circular_row_violation(d, i, strict).is_none())
}

/// First column of row `i` that breaks monotonicity away from the diagonal.
pub fn linear_row_violation<D: Dissimilarity + ?Sized>(
    d: &D,
    i: usize,
    strict: bool,
) -> Option<usize> {
    let n = d.size();
    let bad = |outer: f64, inner: f64| {
        if strict {
            outer <= inner
        } else {
            outer < inner
        }
    };
    // left of the diagonal, moving toward it
    for j in 0..i.saturating_sub(1) {
        if bad(d.get(i, j), d.get(i, j + 1)) {
            return Some(j + 1);
        }
    }
    for j in (i + 1)..n.saturating_sub(1) {
        if bad(d.get(i, j + 1), d.get(i, j)) {
            return Some(j + 1);
        }
    }
    None
}

pub fn is_linear_robinson(d: &DissimilarityMatrix, strict: bool) -> bool {
    (0..d.n()).all(|i| linear_row_violation(d, i, strict).is_none())
}

/// Whether `(i, j) ↦ D(perm(i), perm(j))` is (strict) circular Robinson.
pub fn verify_ordering(d: &DissimilarityMatrix, perm: &Permutation, strict: bool) -> Result<bool> {
    if perm.len() != d.n() {
        return Err(Error::LengthMismatch {
            expected: d.n(),
            got: perm.len(),
        });
    }
    Ok(verify_ordering_with(d, perm.as_slice(), strict))
}

pub(crate) fn verify_ordering_with<D: Dissimilarity + ?Sized>(
    d: &D,
    perm: &[usize],
    strict: bool,
) -> bool {
    let n = perm.len();
    (0..n).all(|i| {
        let row = perm[i];
        first_unimodality_violation((0..n).map(|j| d.get(row, perm[(i + j) % n])), strict).is_none()
    })
}
