//! Q-trees: ordered trees whose internal nodes may only be reversed.
//!
//! A [`QTree`] node carries a [`NodeStatus`]. In normal form a `Fixed` node
//! appears only at the root, since fixing a child means splicing its
//! children into the parent. `Free` and `NonOrientable` nodes are both
//! reversible when orderings are enumerated; `Free` marks a node whose
//! orientation has not been decided yet.
//!
//! The seriation driver works on [`Chain`], a flattened form where a
//! non-orientable node is a bracketed run of items inside its parent. This
//! lets the children of such a node be oriented against neighbours on the
//! other side of the bracket.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::permutation::{Permutation, SolutionSet};

/// Default bound on the number of orderings produced by enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeStatus {
    /// Orientation not decided yet.
    Free,
    /// Exactly one orientation is admissible.
    Fixed,
    /// Both orientations are admissible.
    NonOrientable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QTree {
    Leaf(usize),
    Node {
        children: Vec<QTree>,
        status: NodeStatus,
    },
}

/// Orderings represented by a tree, possibly truncated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub orderings: SolutionSet,
    /// Set when the tree represents more orderings than the cap allowed.
    pub overflow: bool,
}

impl QTree {
    pub fn leaf(x: usize) -> Self {
        QTree::Leaf(x)
    }

    /// A node with validated children: at least two, no repeated leaf.
    pub fn node(children: Vec<QTree>, status: NodeStatus) -> Result<Self> {
        let t = QTree::Node { children, status };
        t.validate()?;
        Ok(t)
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, QTree::Leaf(_))
    }

    pub fn status(&self) -> Option<NodeStatus> {
        match self {
            QTree::Leaf(_) => None,
            QTree::Node { status, .. } => Some(*status),
        }
    }

    pub fn children(&self) -> &[QTree] {
        match self {
            QTree::Leaf(_) => &[],
            QTree::Node { children, .. } => children,
        }
    }

    pub fn set_status(&mut self, new: NodeStatus) {
        if let QTree::Node { status, .. } = self {
            *status = new;
        }
    }

    /// Reverses the child order of the root.
    pub fn reverse(&mut self) {
        if let QTree::Node { children, .. } = self {
            children.reverse();
        }
    }

    /// Leaves in left-to-right order with no node reversed.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            QTree::Leaf(x) => out.push(*x),
            QTree::Node { children, .. } => {
                for c in children {
                    c.collect_leaves(out);
                }
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            QTree::Leaf(_) => 1,
            QTree::Node { children, .. } => children.iter().map(QTree::leaf_count).sum(),
        }
    }

    /// Number of edges on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        match self {
            QTree::Leaf(_) => 0,
            QTree::Node { children, .. } => {
                1 + children.iter().map(QTree::depth).max().unwrap_or(0)
            }
        }
    }

    /// Count of nodes with the given status.
    pub fn count_status(&self, wanted: NodeStatus) -> usize {
        match self {
            QTree::Leaf(_) => 0,
            QTree::Node { children, status } => {
                usize::from(*status == wanted)
                    + children
                        .iter()
                        .map(|c| c.count_status(wanted))
                        .sum::<usize>()
            }
        }
    }

    /// Nodes that enumeration may reverse (`Free` or `NonOrientable`).
    pub fn reversible_count(&self) -> usize {
        self.count_status(NodeStatus::Free) + self.count_status(NodeStatus::NonOrientable)
    }

    /// Checks that every node has two or more children and no leaf repeats.
    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        self.validate_into(&mut seen)
    }

    fn validate_into(&self, seen: &mut BTreeSet<usize>) -> Result<()> {
        match self {
            QTree::Leaf(x) => {
                if !seen.insert(*x) {
                    return Err(Error::InvalidTree(format!("leaf {x} appears twice")));
                }
            }
            QTree::Node { children, .. } => {
                if children.len() < 2 {
                    return Err(Error::InvalidTree(format!(
                        "node with {} children",
                        children.len()
                    )));
                }
                for c in children {
                    c.validate_into(seen)?;
                }
            }
        }
        Ok(())
    }

    fn check_leaves_are_permutation(&self) -> Result<usize> {
        self.validate()?;
        let leaves = self.leaves();
        let n = leaves.len();
        if let Some(&bad) = leaves.iter().find(|&&x| x >= n) {
            return Err(Error::InvalidTree(format!(
                "leaf {bad} out of range for {n} leaves"
            )));
        }
        Ok(n)
    }

    /// The ordering obtained when no node is reversed.
    pub fn leftmost_ordering(&self) -> Result<Permutation> {
        self.check_leaves_are_permutation()?;
        Ok(Permutation::from_vec_unchecked(self.leaves()))
    }

    /// All leaf orders reachable by reversing reversible nodes. Reversing a
    /// node mirrors its whole subtree. At most `cap` orderings are returned.
    pub fn enumerate_orderings(&self, cap: usize) -> Result<Enumeration> {
        let n = self.check_leaves_are_permutation()?;
        let mut reversible = Vec::new();
        self.reversible_preorder(&mut reversible);
        let r = reversible.len();
        // Distinct reversal patterns give distinct orders once every node
        // has two children, so the total is exactly 2^r.
        let total = if r >= usize::BITS as usize {
            None
        } else {
            Some(1usize << r)
        };
        let emit = total.map_or(cap, |t| t.min(cap));
        let mut orderings = SolutionSet::new();
        let mut buf = Vec::with_capacity(n);
        for mask in 0..emit {
            buf.clear();
            let mut next_bit = 0;
            self.emit(false, mask, &mut next_bit, &mut buf);
            orderings.insert(Permutation::from_vec_unchecked(buf.clone()));
        }
        Ok(Enumeration {
            orderings,
            overflow: total.is_none_or(|t| t > cap),
        })
    }

    fn reversible_preorder<'a>(&'a self, out: &mut Vec<&'a QTree>) {
        if let QTree::Node { children, status } = self {
            if *status != NodeStatus::Fixed {
                out.push(self);
            }
            for c in children {
                c.reversible_preorder(out);
            }
        }
    }

    fn emit(&self, flipped: bool, mask: usize, next_bit: &mut u32, out: &mut Vec<usize>) {
        match self {
            QTree::Leaf(x) => out.push(*x),
            QTree::Node { children, status } => {
                let mut flip = flipped;
                if *status != NodeStatus::Fixed {
                    if *next_bit < usize::BITS && mask >> *next_bit & 1 == 1 {
                        flip = !flip;
                    }
                    *next_bit += 1;
                }
                if flip {
                    for c in children.iter().rev() {
                        c.emit(flip, mask, next_bit, out);
                    }
                } else {
                    for c in children {
                        c.emit(flip, mask, next_bit, out);
                    }
                }
            }
        }
    }
}

/// One entry of a [`Chain`].
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Item {
    Leaf(usize),
    /// A child node whose orientation is still undecided.
    Node(Chain),
    /// Opens a run belonging to a non-orientable node.
    Open,
    Close,
}

impl Item {
    pub(crate) fn is_unit(&self) -> bool {
        matches!(self, Item::Leaf(_) | Item::Node(_))
    }
}

/// Flattened children of a node; see the module docs.
#[derive(Debug, Clone, PartialEq, Default)]
pub(crate) struct Chain {
    pub(crate) items: Vec<Item>,
}

impl Chain {
    /// Reverses the item order; brackets swap roles to stay balanced.
    pub(crate) fn reverse(&mut self) {
        self.items.reverse();
        for it in &mut self.items {
            match it {
                Item::Open => *it = Item::Close,
                Item::Close => *it = Item::Open,
                _ => {}
            }
        }
    }

    pub(crate) fn first_unit(&self) -> Option<usize> {
        self.items.iter().position(Item::is_unit)
    }

    pub(crate) fn last_unit(&self) -> Option<usize> {
        self.items.iter().rposition(Item::is_unit)
    }

    pub(crate) fn unit_count(&self) -> usize {
        self.items.iter().filter(|i| i.is_unit()).count()
    }

    /// Index of the `Close` matching the `Open` at `open`.
    pub(crate) fn matching_close(&self, open: usize) -> usize {
        let mut depth = 0usize;
        for (k, it) in self.items.iter().enumerate().skip(open) {
            match it {
                Item::Open => depth += 1,
                Item::Close => {
                    depth -= 1;
                    if depth == 0 {
                        return k;
                    }
                }
                _ => {}
            }
        }
        unreachable!("unbalanced chain")
    }

    /// Index of the `Open` matching the `Close` at `close`.
    pub(crate) fn matching_open(&self, close: usize) -> usize {
        let mut depth = 0usize;
        for k in (0..=close).rev() {
            match self.items[k] {
                Item::Close => depth += 1,
                Item::Open => {
                    depth -= 1;
                    if depth == 0 {
                        return k;
                    }
                }
                _ => {}
            }
        }
        unreachable!("unbalanced chain")
    }

    pub(crate) fn push_leaves(&self, out: &mut Vec<usize>) {
        for it in &self.items {
            match it {
                Item::Leaf(x) => out.push(*x),
                Item::Node(c) => c.push_leaves(out),
                _ => {}
            }
        }
    }

    pub(crate) fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.push_leaves(&mut out);
        out
    }

    /// Converts the children of a node. `Fixed` children are spliced.
    pub(crate) fn from_children(children: &[QTree]) -> Self {
        let mut items = Vec::new();
        for c in children {
            push_tree(c, &mut items);
        }
        Chain { items }
    }

    /// Rebuilds the children of the node this chain belongs to.
    pub(crate) fn to_children(&self) -> Vec<QTree> {
        let mut stack: Vec<Vec<QTree>> = vec![Vec::new()];
        for it in &self.items {
            match it {
                Item::Leaf(x) => stack.last_mut().unwrap().push(QTree::Leaf(*x)),
                Item::Node(c) => stack.last_mut().unwrap().push(QTree::Node {
                    children: c.to_children(),
                    status: NodeStatus::Free,
                }),
                Item::Open => stack.push(Vec::new()),
                Item::Close => {
                    let children = stack.pop().unwrap();
                    stack.last_mut().unwrap().push(QTree::Node {
                        children,
                        status: NodeStatus::NonOrientable,
                    });
                }
            }
        }
        debug_assert_eq!(stack.len(), 1);
        stack.pop().unwrap()
    }

    pub(crate) fn to_tree(&self, status: NodeStatus) -> QTree {
        QTree::Node {
            children: self.to_children(),
            status,
        }
    }
}

fn push_tree(t: &QTree, items: &mut Vec<Item>) {
    match t {
        QTree::Leaf(x) => items.push(Item::Leaf(*x)),
        QTree::Node { children, status } => match status {
            NodeStatus::Free => items.push(Item::Node(Chain::from_children(children))),
            NodeStatus::Fixed => {
                for c in children {
                    push_tree(c, items);
                }
            }
            NodeStatus::NonOrientable => {
                items.push(Item::Open);
                for c in children {
                    push_tree(c, items);
                }
                items.push(Item::Close);
            }
        },
    }
}
