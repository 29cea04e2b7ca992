//! The recursive seriation driver and an exhaustive oracle.
//!
//! Starting from singleton trees, each recursion joins nearest neighbours
//! into chains, orients what the dissimilarity pins down and recurses on
//! the shorter family of trees. With a strict circular Robinsonian input
//! the surviving tree represents every solution up to rotation and
//! reflection. Every matrix read goes through a [`CountingView`], so the
//! statistics report exact access counts.

use crate::error::{Error, Result};
use crate::matrix::{CountingView, Dissimilarity, DissimilarityMatrix};
use crate::nn_partition::{
    border_dissimilarity, check_argmin, nn_graph_from_borders, partition_graph,
};
use crate::orientation::{
    complete_internal_orientation_chain, external_orientation_chain, final_orientation_chain,
    unit_borders,
};
use crate::permutation::{compose_dihedral, CyclicArc, Permutation, SolutionSet};
use crate::qtree::{Chain, Enumeration, Item, NodeStatus, QTree};
use crate::robinson::verify_ordering_with;

/// Largest size accepted by [`brute_force_solutions`].
pub const BRUTE_FORCE_MAX: usize = 10;

/// What happened at one recursion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelStats {
    /// Trees entering this recursion.
    pub trees: usize,
    /// Connected components of the nearest-neighbour graph.
    pub components: usize,
    /// Matrix reads made during this recursion.
    pub accesses: u64,
    /// Largest border-candidate set once external orientation is done.
    pub max_border: usize,
    /// Leaves of each entering tree, in tree order.
    pub leaf_sets: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriationStats {
    pub n: usize,
    /// Every matrix read, verification included.
    pub accesses: u64,
    /// Reads spent by the closing verification pass.
    pub verification_accesses: u64,
    pub levels: Vec<LevelStats>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriationResult {
    /// Root is `Fixed` (or `NonOrientable` for `n ≤ 3`); no node is `Free`.
    pub tree: QTree,
    pub stats: SeriationStats,
}

impl SeriationResult {
    pub fn enumerate(&self, cap: usize) -> Result<Enumeration> {
        self.tree.enumerate_orderings(cap)
    }

    /// The ordering with no node reversed.
    pub fn representative(&self) -> Permutation {
        Permutation::from_vec_unchecked(self.tree.leaves())
    }

    /// All solutions: the dihedral closure of the tree's orderings.
    pub fn solutions(&self, cap: usize) -> Result<(SolutionSet, bool)> {
        let e = self.enumerate(cap)?;
        Ok((compose_dihedral(&e.orderings, self.stats.n)?, e.overflow))
    }
}

fn borders_of(item: &Item) -> Vec<usize> {
    let mut v = Vec::new();
    unit_borders(item, &mut v);
    v
}

fn leaves_of(item: &Item) -> Vec<usize> {
    match item {
        Item::Leaf(x) => vec![*x],
        Item::Node(c) => c.leaves(),
        _ => unreachable!("family members are units"),
    }
}

/// Solves strict circular seriation for `d`.
///
/// Fails with [`Error::NotStrictPreCircularRobinson`] when `d` is not a
/// conjugate of a strict circular Robinson matrix. That is detected either
/// on the way (nearest-neighbour structure inconsistent with a cycle) or by
/// the closing check of the representative ordering.
pub fn recursive_seriation(d: &DissimilarityMatrix) -> Result<SeriationResult> {
    let n = d.n();
    if n < 2 {
        return Err(Error::TooSmall(n));
    }
    let view = CountingView::new(d);
    let mut levels = Vec::new();

    let tree = if n <= 3 {
        QTree::Node {
            children: (0..n).map(QTree::Leaf).collect(),
            status: NodeStatus::NonOrientable,
        }
    } else {
        seriate_family(&view, &mut levels)?
    };

    let before = view.accesses();
    if !verify_ordering_with(&view, &tree.leaves(), true) {
        return Err(Error::not_strict(
            "recovered ordering is not strict circular Robinson",
        ));
    }
    let verification_accesses = view.accesses() - before;
    Ok(SeriationResult {
        tree,
        stats: SeriationStats {
            n,
            accesses: view.accesses(),
            verification_accesses,
            levels,
        },
    })
}

fn seriate_family(d: &CountingView<'_>, levels: &mut Vec<LevelStats>) -> Result<QTree> {
    let n = d.size();
    let mut family: Vec<Item> = (0..n).map(Item::Leaf).collect();
    loop {
        let start = d.accesses();
        let leaf_sets: Vec<Vec<usize>> = family.iter().map(leaves_of).collect();
        let borders: Vec<Vec<usize>> = family.iter().map(borders_of).collect();
        let graph = nn_graph_from_borders(&borders, d)?;

        for (u, v) in graph.edges() {
            let r = border_dissimilarity(&borders_of(&family[u]), &borders_of(&family[v]), d);
            check_argmin(&r)?;
            for (x, y) in r.argmin {
                if let Item::Node(c) = &mut family[u] {
                    external_orientation_chain(c, x)?;
                }
                if let Item::Node(c) = &mut family[v] {
                    external_orientation_chain(c, y)?;
                }
            }
        }
        let max_border = family
            .iter()
            .map(|t| borders_of(t).len())
            .max()
            .unwrap_or(0);

        let tuples = partition_graph(&graph)?;
        let mut slots: Vec<Option<Item>> = family.into_iter().map(Some).collect();
        let mut next: Vec<Chain> = tuples
            .iter()
            .map(|tuple| Chain {
                items: tuple
                    .iter()
                    .map(|&t| slots[t].take().expect("tuples partition"))
                    .collect(),
            })
            .collect();

        let done = next.len() == 1;
        if done {
            final_orientation_chain(&mut next[0], d);
        } else {
            for c in &mut next {
                complete_internal_orientation_chain(c, d);
            }
        }
        levels.push(LevelStats {
            trees: leaf_sets.len(),
            components: tuples.len(),
            accesses: d.accesses() - start,
            max_border,
            leaf_sets,
        });
        if done {
            let root = next.pop().expect("one tree left");
            return Ok(root.to_tree(NodeStatus::Fixed));
        }
        family = next.into_iter().map(Item::Node).collect();
    }
}

/// Every ordering `π` for which `D` conjugated by `π` is strict circular
/// Robinson, by exhaustive search. Orderings starting with object 0 are
/// checked and the accepted ones are closed under rotation, which leaves
/// the verdict unchanged.
pub fn brute_force_solutions(d: &DissimilarityMatrix) -> Result<SolutionSet> {
    let n = d.n();
    if n > BRUTE_FORCE_MAX {
        return Err(Error::TooLarge {
            n,
            max: BRUTE_FORCE_MAX,
        });
    }
    let mut out = SolutionSet::new();
    let mut rest: Vec<usize> = (1..n).collect();
    let mut perm = Vec::with_capacity(n);
    loop {
        perm.clear();
        perm.push(0);
        perm.extend_from_slice(&rest);
        if verify_ordering_with(d, &perm, true) {
            for s in 0..n {
                let rotated: Vec<usize> = (0..n).map(|k| perm[(k + s) % n]).collect();
                out.insert(Permutation::from_vec_unchecked(rotated));
            }
        }
        if !next_permutation(&mut rest) {
            return Ok(out);
        }
    }
}

/// Advances to the next lexicographic permutation; false after the last.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len())
        .rev()
        .find(|&j| v[j] > v[i])
        .expect("successor exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// Whether neither arc contains the other and neither lies in the other's
/// complement.
pub fn strictly_overlaps(arc_i: &CyclicArc, arc_j: &CyclicArc, n: usize) -> Result<bool> {
    for a in [arc_i, arc_j] {
        if a.n() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: a.n(),
            });
        }
        if a.is_full() {
            return Err(Error::InvalidArc("arc covers every element".into()));
        }
    }
    let (mut i_only, mut j_only, mut neither, mut both) = (false, false, false, false);
    for x in 0..n {
        match (arc_i.contains(x), arc_j.contains(x)) {
            (true, false) => i_only = true,
            (false, true) => j_only = true,
            (false, false) => neither = true,
            (true, true) => both = true,
        }
    }
    Ok(i_only && j_only && neither && both)
}
