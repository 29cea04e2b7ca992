//! Permutations of `[n]`, the standard cyclic order, arcs and the dihedral
//! group.
//!
//! An *ordering* is a [`Permutation`] read as "position → object": entry `k`
//! is the object placed at position `k`. The dihedral group acts on
//! orderings by rotating and reflecting positions.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

/// A set of orderings, kept sorted for deterministic iteration.
pub type SolutionSet = BTreeSet<Permutation>;

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &v in &mapping {
            if v >= n {
                return Err(Error::NotAPermutation {
                    n,
                    reason: format!("entry {v} out of range"),
                });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::NotAPermutation {
                    n,
                    reason: format!("entry {v} repeated"),
                });
            }
        }
        Ok(Permutation(mapping))
    }

    pub(crate) fn from_vec_unchecked(mapping: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(mapping.clone()).is_ok());
        Permutation(mapping)
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// `i ↦ n - 1 - i`
    pub fn reversal(n: usize) -> Self {
        Permutation((0..n).rev().collect())
    }

    /// `i ↦ i + k mod n`
    pub fn shift(n: usize, k: usize) -> Self {
        Permutation((0..n).map(|i| (i + k) % n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        Permutation(inv)
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(Permutation(other.0.iter().map(|&i| self.0[i]).collect()))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

/// Membership of `(i, j, k)` in the standard cyclic order on `[n]`.
pub fn cyclically_ordered(i: usize, j: usize, k: usize, n: usize) -> Result<bool> {
    for index in [i, j, k] {
        if index >= n {
            return Err(Error::IndexOutOfRange { index, n });
        }
    }
    Ok((i < j && j < k) || (j < k && k < i) || (k < i && i < j))
}

/// The `2n` elements of `Dih_n` as maps on positions: rotations
/// `k ↦ k + s` followed by reflections `k ↦ s - k` (all mod `n`).
pub fn dihedral_elements(n: usize) -> Vec<Permutation> {
    let mut out = Vec::with_capacity(2 * n);
    for s in 0..n {
        out.push(Permutation((0..n).map(|k| (k + s) % n).collect()));
    }
    for s in 0..n {
        out.push(Permutation((0..n).map(|k| (s + n - k) % n).collect()));
    }
    out
}

/// Every rotation and reflection of every ordering in `s`.
pub fn compose_dihedral(s: &SolutionSet, n: usize) -> Result<SolutionSet> {
    let mut out = SolutionSet::new();
    if s.is_empty() {
        return Ok(out);
    }
    let group = dihedral_elements(n);
    for p in s {
        if p.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: p.len(),
            });
        }
        for g in &group {
            out.insert(p.compose(g)?);
        }
    }
    Ok(out)
}

/// A nonempty run of consecutive elements `start, start + 1, …` modulo `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CyclicArc {
    n: usize,
    start: usize,
    len: usize,
}

impl CyclicArc {
    pub fn new(n: usize, start: usize, len: usize) -> Result<Self> {
        if start >= n {
            return Err(Error::IndexOutOfRange { index: start, n });
        }
        if len == 0 {
            return Err(Error::InvalidArc("empty arc".into()));
        }
        if len > n {
            return Err(Error::InvalidArc(format!("length {len} exceeds n = {n}")));
        }
        Ok(CyclicArc { n, start, len })
    }

    /// The arc running from `first` to `last` inclusive, going forward.
    pub fn from_ends(n: usize, first: usize, last: usize) -> Result<Self> {
        if last >= n {
            return Err(Error::IndexOutOfRange { index: last, n });
        }
        Self::new(n, first, (last + n - first % n.max(1)) % n + 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_full(&self) -> bool {
        self.len == self.n
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.n && (x + self.n - self.start) % self.n < self.len
    }

    /// Elements in cyclic order starting at `start`.
    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).map(move |j| (self.start + j) % self.n)
    }

    /// `None` when the arc is the whole set.
    pub fn complement(&self) -> Option<CyclicArc> {
        if self.is_full() {
            None
        } else {
            Some(CyclicArc {
                n: self.n,
                start: (self.start + self.len) % self.n,
                len: self.n - self.len,
            })
        }
    }
}

/// The permutation that reverses the elements of `arc` and fixes the rest.
pub fn reverse_arc(n: usize, arc: &CyclicArc) -> Result<Permutation> {
    if arc.n() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: arc.n(),
        });
    }
    let mut p: Vec<usize> = (0..n).collect();
    let elems: Vec<usize> = arc.elements().collect();
    let k = elems.len();
    for (j, &a) in elems.iter().enumerate() {
        p[a] = elems[k - 1 - j];
    }
    Ok(Permutation(p))
}

/// Whether `set ⊆ [n]` is empty, full, or a single run of cyclically
/// consecutive elements.
pub fn is_arc(set: &[bool]) -> bool {
    let n = set.len();
    let count = set.iter().filter(|&&b| b).count();
    if count == 0 || count == n {
        return true;
    }
    let starts = (0..n).filter(|&x| set[x] && !set[(x + n - 1) % n]).count();
    starts == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cyclic_order_examples() {
        assert!(cyclically_ordered(0, 1, 2, 5).unwrap());
        assert!(cyclically_ordered(2, 0, 1, 5).unwrap());
        assert!(!cyclically_ordered(1, 0, 2, 5).unwrap());
        assert!(!cyclically_ordered(1, 1, 2, 5).unwrap());
        assert!(cyclically_ordered(0, 1, 5, 5).is_err());
    }

    #[test]
    fn reverse_arc_examples() {
        let a = CyclicArc::new(5, 1, 3).unwrap();
        assert_eq!(reverse_arc(5, &a).unwrap().as_slice(), &[0, 3, 2, 1, 4]);
        let full = CyclicArc::new(5, 0, 5).unwrap();
        assert_eq!(reverse_arc(5, &full).unwrap(), Permutation::reversal(5));
        // a_2..a_6 on 15 points
        let a = CyclicArc::new(15, 2, 5).unwrap();
        let expected: Vec<usize> = vec![0, 1, 6, 5, 4, 3, 2, 7, 8, 9, 10, 11, 12, 13, 14];
        assert_eq!(reverse_arc(15, &a).unwrap().as_slice(), &expected[..]);
        assert!(CyclicArc::new(5, 0, 0).is_err());
    }

    #[test]
    fn wrapping_arc() {
        let a = CyclicArc::new(6, 4, 4).unwrap();
        assert_eq!(a.elements().collect::<Vec<_>>(), vec![4, 5, 0, 1]);
        assert!(a.contains(0) && !a.contains(2));
        assert_eq!(
            a.complement().unwrap().elements().collect::<Vec<_>>(),
            vec![2, 3]
        );
        assert_eq!(CyclicArc::from_ends(6, 4, 1).unwrap(), a);
        assert_eq!(reverse_arc(6, &a).unwrap().as_slice(), &[5, 4, 2, 3, 1, 0]);
    }

    #[test]
    fn dihedral_composition_examples() {
        let mut s = SolutionSet::new();
        s.insert(Permutation::identity(3));
        assert_eq!(compose_dihedral(&s, 3).unwrap().len(), 6);

        let mut s = SolutionSet::new();
        s.insert(Permutation::identity(4));
        let all = compose_dihedral(&s, 4).unwrap();
        // 4 rotations × 2 directions, enumerated by hand
        let expected: Vec<Vec<usize>> = vec![
            vec![0, 1, 2, 3],
            vec![1, 2, 3, 0],
            vec![2, 3, 0, 1],
            vec![3, 0, 1, 2],
            vec![3, 2, 1, 0],
            vec![0, 3, 2, 1],
            vec![1, 0, 3, 2],
            vec![2, 1, 0, 3],
        ];
        let expected: SolutionSet = expected
            .into_iter()
            .map(|v| Permutation::new(v).unwrap())
            .collect();
        assert_eq!(all, expected);

        assert!(compose_dihedral(&SolutionSet::new(), 7).unwrap().is_empty());
    }

    #[test]
    fn is_arc_detects_runs() {
        assert!(is_arc(&[true, false, false, true]));
        assert!(!is_arc(&[true, false, true, false]));
        assert!(is_arc(&[false; 3]));
    }

    proptest! {
        #[test]
        fn cyclic_order_shift_invariant_and_antisymmetric(
            n in 3usize..20, i in 0usize..20, j in 0usize..20, k in 0usize..20, s in 0usize..20
        ) {
            let (i, j, k) = (i % n, j % n, k % n);
            let base = cyclically_ordered(i, j, k, n).unwrap();
            let shifted = cyclically_ordered((i + s) % n, (j + s) % n, (k + s) % n, n).unwrap();
            prop_assert_eq!(base, shifted);
            if base {
                prop_assert!(!cyclically_ordered(j, i, k, n).unwrap());
            }
        }

        #[test]
        fn reverse_arc_is_involution(n in 1usize..30, start in 0usize..30, len in 1usize..30) {
            let start = start % n;
            let len = 1 + (len - 1) % n;
            let a = CyclicArc::new(n, start, len).unwrap();
            let r = reverse_arc(n, &a).unwrap();
            prop_assert_eq!(r.compose(&r).unwrap(), Permutation::identity(n));
        }

        #[test]
        fn compose_dihedral_idempotent(v in Just((0usize..7).collect::<Vec<_>>()).prop_shuffle()) {
            let mut s = SolutionSet::new();
            s.insert(Permutation::new(v).unwrap());
            let once = compose_dihedral(&s, 7).unwrap();
            prop_assert_eq!(once.len(), 14);
            prop_assert_eq!(compose_dihedral(&once, 7).unwrap(), once);
        }
    }
}
