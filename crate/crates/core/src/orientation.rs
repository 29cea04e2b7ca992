//! Border candidates and Q-node orientation.
//!
//! The border candidates of a tree are the leaves that can end up at its
//! extreme left or right under some configuration. Orientation decides,
//! from a handful of border candidates on each side of an arc, whether the
//! arc keeps its orientation, must be reversed, or may go either way.
//!
//! The public functions take [`QTree`]s. The seriation driver calls the
//! `*_chain` variants, which work on the flattened [`Chain`] form.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::matrix::Dissimilarity;
use crate::qtree::{Chain, Item, NodeStatus, QTree};

/// Four pairwise disjoint candidate sets around an arc: `a_prime` precedes
/// the arc, `a` and `b` hold its two ends and `b_prime` follows it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BorderSets {
    pub a_prime: Vec<usize>,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub b_prime: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrientationVerdict {
    Correct,
    Reverse,
    NotOrientable,
}

// ---------------------------------------------------------------------------
// Border candidates on chains

/// Border candidates of a unit (leaf or undecided node).
pub(crate) fn unit_borders(item: &Item, out: &mut Vec<usize>) {
    match item {
        Item::Leaf(x) => out.push(*x),
        Item::Node(c) => chain_borders(c, out),
        Item::Open | Item::Close => unreachable!("markers are not units"),
    }
}

/// Border candidates of the block spanning `items[start..=end]`.
fn block_borders(c: &Chain, start: usize, end: usize, out: &mut Vec<usize>) {
    if start == end {
        unit_borders(&c.items[start], out);
        return;
    }
    debug_assert!(matches!(c.items[start], Item::Open));
    let (first_start, last_end) = (start + 1, end - 1);
    let first_end = match c.items[first_start] {
        Item::Open => c.matching_close(first_start),
        _ => first_start,
    };
    let last_start = match c.items[last_end] {
        Item::Close => c.matching_open(last_end),
        _ => last_end,
    };
    block_borders(c, first_start, first_end, out);
    if last_start != first_start {
        block_borders(c, last_start, last_end, out);
    }
}

fn first_block(c: &Chain) -> (usize, usize) {
    match c.items[0] {
        Item::Open => (0, c.matching_close(0)),
        _ => (0, 0),
    }
}

fn last_block(c: &Chain) -> (usize, usize) {
    let end = c.items.len() - 1;
    match c.items[end] {
        Item::Close => (c.matching_open(end), end),
        _ => (end, end),
    }
}

/// Leaves that may appear leftmost in the node owning `c`.
pub(crate) fn chain_left_borders(c: &Chain, out: &mut Vec<usize>) {
    let (s, e) = first_block(c);
    block_borders(c, s, e, out);
}

pub(crate) fn chain_right_borders(c: &Chain, out: &mut Vec<usize>) {
    let (s, e) = last_block(c);
    block_borders(c, s, e, out);
}

pub(crate) fn chain_borders(c: &Chain, out: &mut Vec<usize>) {
    let before = out.len();
    chain_left_borders(c, out);
    let (fs, _) = first_block(c);
    let (ls, _) = last_block(c);
    if fs != ls {
        chain_right_borders(c, out);
    }
    debug_assert!({
        let mut v = out[before..].to_vec();
        v.sort_unstable();
        v.windows(2).all(|w| w[0] != w[1])
    });
}

fn collect(f: impl FnOnce(&mut Vec<usize>)) -> Vec<usize> {
    let mut v = Vec::new();
    f(&mut v);
    v
}

// ---------------------------------------------------------------------------
// Border candidates on trees

fn tree_item(t: &QTree) -> Item {
    match t {
        QTree::Leaf(x) => Item::Leaf(*x),
        QTree::Node { children, .. } => Item::Node(Chain::from_children(children)),
    }
}

/// All border candidates of `t`, sorted.
pub fn border_candidates(t: &QTree) -> BTreeSet<usize> {
    collect(|v| unit_borders(&tree_item(t), v))
        .into_iter()
        .collect()
}

/// Leaves of `t` that can appear leftmost; `{x}` for a leaf `x`.
pub fn left_border_candidates(t: &QTree) -> BTreeSet<usize> {
    match tree_item(t) {
        Item::Node(c) => collect(|v| chain_left_borders(&c, v)).into_iter().collect(),
        leaf => collect(|v| unit_borders(&leaf, v)).into_iter().collect(),
    }
}

/// Leaves of `t` that can appear rightmost; `{x}` for a leaf `x`.
pub fn right_border_candidates(t: &QTree) -> BTreeSet<usize> {
    match tree_item(t) {
        Item::Node(c) => collect(|v| chain_right_borders(&c, v))
            .into_iter()
            .collect(),
        leaf => collect(|v| unit_borders(&leaf, v)).into_iter().collect(),
    }
}

// ---------------------------------------------------------------------------
// The four-set test

fn extremes<D: Dissimilarity + ?Sized>(d: &D, z: usize, set: &[usize]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in set {
        let v = d.get(z, x);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi)
}

pub(crate) fn verdict<D: Dissimilarity + ?Sized>(
    d: &D,
    a_prime: &[usize],
    a: &[usize],
    b: &[usize],
    b_prime: &[usize],
) -> OrientationVerdict {
    for z in 0..d.size() {
        let (ap_lo, ap_hi) = extremes(d, z, a_prime);
        let (a_lo, a_hi) = extremes(d, z, a);
        let (b_lo, b_hi) = extremes(d, z, b);
        let (bp_lo, bp_hi) = extremes(d, z, b_prime);
        let o1 = a_lo.max(ap_lo) < b_hi.min(bp_hi);
        let o2 = b_lo.max(bp_lo) < a_hi.min(ap_hi);
        if o1 || o2 {
            return OrientationVerdict::Correct;
        }
        let o3 = a_lo.max(bp_lo) < ap_hi.min(b_hi);
        let o4 = b_lo.max(ap_lo) < bp_hi.min(a_hi);
        if o3 || o4 {
            return OrientationVerdict::Reverse;
        }
    }
    OrientationVerdict::NotOrientable
}

/// Scans every object `z` and reports the first orientation it certifies.
pub fn border_candidates_orientation<D: Dissimilarity + ?Sized>(
    sets: &BorderSets,
    d: &D,
) -> Result<OrientationVerdict> {
    let named = [
        ("a_prime", &sets.a_prime),
        ("a", &sets.a),
        ("b", &sets.b),
        ("b_prime", &sets.b_prime),
    ];
    let mut seen = BTreeSet::new();
    for (name, set) in named {
        if set.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "border set {name} is empty"
            )));
        }
        for &x in set.iter() {
            if x >= d.size() {
                return Err(Error::IndexOutOfRange {
                    index: x,
                    n: d.size(),
                });
            }
            if !seen.insert(x) {
                return Err(Error::InvalidParameter(format!(
                    "border sets share element {x}"
                )));
            }
        }
    }
    Ok(verdict(d, &sets.a_prime, &sets.a, &sets.b, &sets.b_prime))
}

// ---------------------------------------------------------------------------
// Orientation on chains

fn prev_unit(c: &Chain, i: usize) -> Option<usize> {
    (0..i).rev().find(|&k| c.items[k].is_unit())
}

fn next_unit(c: &Chain, i: usize) -> Option<usize> {
    (i + 1..c.items.len()).find(|&k| c.items[k].is_unit())
}

/// Orients the undecided node at `items[i]` between the given neighbour
/// candidates and splices it. Returns the verdict and how many items now
/// occupy its place.
pub(crate) fn orient_unit<D: Dissimilarity + ?Sized>(
    c: &mut Chain,
    i: usize,
    left: &[usize],
    right: &[usize],
    d: &D,
) -> (OrientationVerdict, usize) {
    let Item::Node(inner) = &c.items[i] else {
        unreachable!("only undecided nodes are oriented")
    };
    let a = collect(|v| chain_left_borders(inner, v));
    let b = collect(|v| chain_right_borders(inner, v));
    let v = verdict(d, left, &a, &b, right);
    (v, apply_verdict(c, i, v))
}

/// Splices the node at `items[i]` according to `v`.
pub(crate) fn apply_verdict(c: &mut Chain, i: usize, v: OrientationVerdict) -> usize {
    let Item::Node(mut inner) = std::mem::replace(&mut c.items[i], Item::Open) else {
        unreachable!("only undecided nodes are spliced")
    };
    let mut replacement = match v {
        OrientationVerdict::Correct => inner.items,
        OrientationVerdict::Reverse => {
            inner.reverse();
            inner.items
        }
        OrientationVerdict::NotOrientable => {
            let mut r = Vec::with_capacity(inner.items.len() + 2);
            r.push(Item::Open);
            r.append(&mut inner.items);
            r.push(Item::Close);
            r
        }
    };
    let len = replacement.len();
    c.items.splice(i..=i, replacement.drain(..));
    len
}

/// Orients every undecided unit strictly between the first and last units,
/// sweeping left to right until none remain. Returns the number of nodes
/// oriented.
pub(crate) fn complete_internal_orientation_chain<D: Dissimilarity + ?Sized>(
    c: &mut Chain,
    d: &D,
) -> usize {
    let mut done = 0;
    let Some(first) = c.first_unit() else {
        return 0;
    };
    loop {
        let mut progressed = false;
        let mut i = first + 1;
        while let Some(last) = c.last_unit() {
            if i >= last {
                break;
            }
            if matches!(c.items[i], Item::Node(_)) {
                let l = prev_unit(c, i).expect("first unit precedes");
                let r = next_unit(c, i).expect("last unit follows");
                let left = collect(|v| unit_borders(&c.items[l], v));
                let right = collect(|v| unit_borders(&c.items[r], v));
                let (_, len) = orient_unit(c, i, &left, &right, d);
                i += len;
                done += 1;
                progressed = true;
            } else {
                i += 1;
            }
        }
        if !progressed {
            return done;
        }
    }
}

/// Orients every undecided unit, treating the chain as a ring.
pub(crate) fn final_orientation_chain<D: Dissimilarity + ?Sized>(c: &mut Chain, d: &D) -> usize {
    let mut done = 0;
    loop {
        if !c.items.iter().any(|it| matches!(it, Item::Node(_))) {
            return done;
        }
        if c.unit_count() == 2 {
            let p = c.first_unit().unwrap();
            let q = c.last_unit().unwrap();
            match (&c.items[p], &c.items[q]) {
                (Item::Node(_), Item::Node(t1)) => {
                    // the ring closes on t1 from both sides
                    let left = collect(|v| chain_right_borders(t1, v));
                    let right = collect(|v| chain_left_borders(t1, v));
                    orient_unit(c, p, &left, &right, d);
                    let q = c.last_unit().unwrap();
                    apply_verdict(c, q, OrientationVerdict::Correct);
                    done += 2;
                }
                (Item::Node(_), _) => {
                    apply_verdict(c, p, OrientationVerdict::Correct);
                    done += 1;
                }
                _ => {
                    apply_verdict(c, q, OrientationVerdict::Correct);
                    done += 1;
                }
            }
            continue;
        }
        let mut i = 0;
        while i < c.items.len() {
            if matches!(c.items[i], Item::Node(_)) {
                let l = prev_unit(c, i)
                    .or_else(|| c.last_unit())
                    .expect("ring has other units");
                let r = next_unit(c, i)
                    .or_else(|| c.first_unit())
                    .expect("ring has other units");
                let left = collect(|v| unit_borders(&c.items[l], v));
                let right = collect(|v| unit_borders(&c.items[r], v));
                let (_, len) = orient_unit(c, i, &left, &right, d);
                i += len;
                done += 1;
            } else {
                i += 1;
            }
        }
    }
}

/// Fixes the spine of `c` on the side where `x` is a border candidate so
/// that `x` becomes the outermost leaf on that side.
pub(crate) fn external_orientation_chain(c: &mut Chain, x: usize) -> Result<()> {
    let on_left = collect(|v| chain_left_borders(c, v)).contains(&x);
    if !on_left {
        if !collect(|v| chain_right_borders(c, v)).contains(&x) {
            return Err(Error::not_strict(format!(
                "nearest-neighbour leaf {x} is not a border candidate"
            )));
        }
        c.reverse();
    }
    let result = walk_left_spine(c, x);
    if !on_left {
        c.reverse();
    }
    result
}

fn walk_left_spine(c: &mut Chain, x: usize) -> Result<()> {
    loop {
        match &c.items[0] {
            Item::Leaf(y) if *y == x => return Ok(()),
            Item::Leaf(y) => {
                return Err(Error::not_strict(format!(
                    "leaf {y} blocks nearest-neighbour leaf {x}"
                )))
            }
            // a non-orientable block: both of its ends are admissible
            Item::Open | Item::Close => return Ok(()),
            Item::Node(inner) => {
                let v = if collect(|v| chain_left_borders(inner, v)).contains(&x) {
                    OrientationVerdict::Correct
                } else if collect(|v| chain_right_borders(inner, v)).contains(&x) {
                    OrientationVerdict::Reverse
                } else {
                    return Err(Error::not_strict(format!(
                        "nearest-neighbour leaf {x} lost along the spine"
                    )));
                };
                apply_verdict(c, 0, v);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Orientation on trees

fn node_parts(t: &QTree) -> Result<(&[QTree], NodeStatus)> {
    match t {
        QTree::Leaf(_) => Err(Error::InvalidTree("expected an internal node".into())),
        QTree::Node { children, status } => Ok((children, *status)),
    }
}

/// Decides the orientation of `parent`'s child at `index` from its two
/// neighbouring children and applies it: the child is spliced into
/// `parent` (reversed first if needed) or marked non-orientable.
pub fn consecutive_orientation<D: Dissimilarity + ?Sized>(
    parent: &mut QTree,
    index: usize,
    d: &D,
) -> Result<OrientationVerdict> {
    let (children, _) = node_parts(parent)?;
    if index == 0 || index + 1 >= children.len() {
        return Err(Error::InvalidParameter(format!(
            "child {index} has no neighbour on both sides"
        )));
    }
    let target = &children[index];
    if target.status() != Some(NodeStatus::Free) {
        return Err(Error::InvalidTree(format!(
            "child {index} is not an undecided node"
        )));
    }
    let sets = BorderSets {
        a_prime: border_candidates(&children[index - 1])
            .into_iter()
            .collect(),
        a: left_border_candidates(target).into_iter().collect(),
        b: right_border_candidates(target).into_iter().collect(),
        b_prime: border_candidates(&children[index + 1])
            .into_iter()
            .collect(),
    };
    let v = border_candidates_orientation(&sets, d)?;
    apply_to_child(parent, index, v);
    Ok(v)
}

/// Applies a verdict to the child at `index`: splice, reverse and splice,
/// or mark non-orientable.
pub fn apply_to_child(parent: &mut QTree, index: usize, v: OrientationVerdict) {
    let QTree::Node { children, .. } = parent else {
        return;
    };
    match v {
        OrientationVerdict::NotOrientable => children[index].set_status(NodeStatus::NonOrientable),
        _ => {
            let mut child = std::mem::replace(&mut children[index], QTree::Leaf(usize::MAX));
            if v == OrientationVerdict::Reverse {
                child.reverse();
            }
            let QTree::Node {
                children: grand, ..
            } = child
            else {
                children[index] = child;
                return;
            };
            children.splice(index..=index, grand);
        }
    }
}

fn with_chain<T>(t: &mut QTree, f: impl FnOnce(&mut Chain) -> T) -> Result<(T, NodeStatus)> {
    let (children, status) = node_parts(t)?;
    let mut c = Chain::from_children(children);
    let out = f(&mut c);
    *t = c.to_tree(status);
    Ok((out, status))
}

/// Orients every node between the first and last children of the root.
pub fn complete_internal_orientation<D: Dissimilarity + ?Sized>(
    t: &mut QTree,
    d: &D,
) -> Result<()> {
    with_chain(t, |c| complete_internal_orientation_chain(c, d))?;
    Ok(())
}

/// Orients every remaining node of a tree spanning all objects, reading
/// the root's children as a ring. The root ends up `Fixed`.
pub fn final_orientation<D: Dissimilarity + ?Sized>(t: &mut QTree, d: &D) -> Result<()> {
    with_chain(t, |c| final_orientation_chain(c, d))?;
    t.set_status(NodeStatus::Fixed);
    Ok(())
}

/// For each nearest pair `(x, y)`, brings `x` to the outer border of `t`
/// and `y` to the outer border of `t_other` by fixing the spine above them.
pub fn external_orientation(
    t: &mut QTree,
    t_other: &mut QTree,
    argmin: &[(usize, usize)],
) -> Result<()> {
    for &(x, y) in argmin {
        if !t.is_leaf() {
            with_chain(t, |c| external_orientation_chain(c, x))?.0?;
        }
        if !t_other.is_leaf() {
            with_chain(t_other, |c| external_orientation_chain(c, y))?.0?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::DissimilarityMatrix;
    use crate::qtree::tests::{fixed, free, l, non};

    fn arc_matrix(n: usize) -> DissimilarityMatrix {
        DissimilarityMatrix::from_fn(n, |i, j| {
            let k = j.abs_diff(i);
            k.min(n - k) as f64 / n as f64
        })
        .unwrap()
    }

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    /// Nested spine with named borders a3 = 0, b3 = 2, b2 = 5, b1 = 8, b0 = 11.
    fn spoon() -> QTree {
        let q3 = free(vec![l(0), l(1), l(2)]);
        let q2 = free(vec![q3, l(3), l(4), l(5)]);
        let q1 = free(vec![q2, l(6), l(7), l(8)]);
        free(vec![q1, l(9), l(10), l(11)])
    }

    #[test]
    fn border_candidate_examples() {
        assert_eq!(border_candidates(&l(5)), set(&[5]));
        assert_eq!(
            border_candidates(&free(vec![l(0), l(1), l(2), l(3)])),
            set(&[0, 3])
        );
        let t = spoon();
        assert_eq!(left_border_candidates(&t), set(&[0, 2, 5, 8]));
        assert_eq!(right_border_candidates(&t), set(&[11]));
        // a reversible block at the end exposes both of its ends
        let t = fixed(vec![l(0), non(vec![l(1), l(2), l(3)])]);
        assert_eq!(right_border_candidates(&t), set(&[1, 3]));
    }

    #[test]
    fn verdict_examples() {
        let d = arc_matrix(6);
        let sets = BorderSets {
            a_prime: vec![0],
            a: vec![1],
            b: vec![2],
            b_prime: vec![3],
        };
        assert_eq!(
            border_candidates_orientation(&sets, &d).unwrap(),
            OrientationVerdict::Correct
        );
        let swapped = BorderSets {
            a: vec![2],
            b: vec![1],
            ..sets.clone()
        };
        assert_eq!(
            border_candidates_orientation(&swapped, &d).unwrap(),
            OrientationVerdict::Reverse
        );
        let empty = BorderSets { a: vec![], ..sets };
        assert!(border_candidates_orientation(&empty, &d).is_err());
    }

    #[test]
    fn symmetric_instance_is_not_orientable() {
        // all off-diagonal entries equal: no ball separates anything
        let d = DissimilarityMatrix::from_fn(4, |_, _| 1.0).unwrap();
        let sets = BorderSets {
            a_prime: vec![0],
            a: vec![1],
            b: vec![2],
            b_prime: vec![3],
        };
        assert_eq!(
            border_candidates_orientation(&sets, &d).unwrap(),
            OrientationVerdict::NotOrientable
        );
    }

    #[test]
    fn reverse_splices_the_middle_child() {
        let mut alpha = fixed(vec![
            free(vec![l(0), l(1), l(2)]),
            free(vec![l(6), l(5), free(vec![l(3), l(4)])]),
            free(vec![l(7), free(vec![l(8), l(9), l(10)])]),
        ]);
        apply_to_child(&mut alpha, 1, OrientationVerdict::Reverse);
        let expected = fixed(vec![
            free(vec![l(0), l(1), l(2)]),
            free(vec![l(3), l(4)]),
            l(5),
            l(6),
            free(vec![l(7), free(vec![l(8), l(9), l(10)])]),
        ]);
        assert_eq!(alpha, expected);

        let mut t = fixed(vec![l(0), free(vec![l(1), l(2)]), l(3)]);
        apply_to_child(&mut t, 1, OrientationVerdict::Correct);
        assert_eq!(t, fixed(vec![l(0), l(1), l(2), l(3)]));

        let mut t = fixed(vec![l(0), free(vec![l(1), l(2)]), l(3)]);
        apply_to_child(&mut t, 1, OrientationVerdict::NotOrientable);
        assert_eq!(t, fixed(vec![l(0), non(vec![l(1), l(2)]), l(3)]));
    }

    #[test]
    fn consecutive_orientation_on_arc_instance() {
        let d = arc_matrix(8);
        let mut t = fixed(vec![
            l(0),
            free(vec![l(3), l(2), l(1)]),
            l(4),
            l(5),
            l(6),
            l(7),
        ]);
        let v = consecutive_orientation(&mut t, 1, &d).unwrap();
        assert_eq!(v, OrientationVerdict::Reverse);
        assert_eq!(t.leaves(), (0..8).collect::<Vec<_>>());
        assert_eq!(t.children().len(), 8);
    }

    #[test]
    fn external_orientation_walks_the_spine() {
        let mut t = spoon();
        let mut other = l(12);
        external_orientation(&mut t, &mut other, &[(5, 12)]).unwrap();
        let expected = free(vec![
            l(5),
            l(4),
            l(3),
            free(vec![l(0), l(1), l(2)]),
            l(6),
            l(7),
            l(8),
            l(9),
            l(10),
            l(11),
        ]);
        assert_eq!(t, expected);
        assert_eq!(other, l(12));

        // already leftmost everywhere: nothing is reversed
        let mut t = spoon();
        external_orientation(&mut t, &mut l(12), &[(0, 12)]).unwrap();
        assert_eq!(t.leaves(), (0..12).collect::<Vec<_>>());
        assert_eq!(t.children().len(), 12);

        let mut t = spoon();
        assert!(external_orientation(&mut t, &mut l(12), &[(4, 12)]).is_err());
    }

    #[test]
    fn complete_internal_orientation_flattens_middle() {
        let d = arc_matrix(12);
        let mut t = free(vec![
            free(vec![l(0), l(1)]),
            free(vec![l(4), l(3), l(2)]),
            free(vec![l(5), free(vec![l(7), l(6)]), l(8)]),
            free(vec![l(9), l(10), l(11)]),
        ]);
        complete_internal_orientation(&mut t, &d).unwrap();
        let expected = free(vec![
            free(vec![l(0), l(1)]),
            l(2),
            l(3),
            l(4),
            l(5),
            l(6),
            l(7),
            l(8),
            free(vec![l(9), l(10), l(11)]),
        ]);
        assert_eq!(t, expected);

        let mut flat = free(vec![l(0), l(1), l(2)]);
        complete_internal_orientation(&mut flat, &d).unwrap();
        assert_eq!(flat, free(vec![l(0), l(1), l(2)]));
    }

    #[test]
    fn final_orientation_two_children() {
        let d = arc_matrix(8);
        let mut t = fixed(vec![
            free(vec![l(3), l(2), l(1), l(0)]),
            free(vec![l(4), l(5), l(6), l(7)]),
        ]);
        final_orientation(&mut t, &d).unwrap();
        assert_eq!(t.status(), Some(NodeStatus::Fixed));
        assert_eq!(t.reversible_count(), 0);
        assert_eq!(t.leaves(), (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn final_orientation_ring() {
        let d = arc_matrix(9);
        let mut t = fixed(vec![
            free(vec![l(1), l(0)]),
            free(vec![l(2), l(3), l(4)]),
            free(vec![l(5), free(vec![l(7), l(6)]), l(8)]),
        ]);
        final_orientation(&mut t, &d).unwrap();
        assert_eq!(t.reversible_count(), 0);
        let leaves = t.leaves();
        let p = crate::permutation::Permutation::new(leaves).unwrap();
        assert!(crate::robinson::verify_ordering(&d, &p, true).unwrap());
    }
}
