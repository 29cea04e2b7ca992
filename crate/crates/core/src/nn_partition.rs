//! Tree dissimilarity, the nearest-neighbour graph and the arc partition.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::matrix::Dissimilarity;
use crate::orientation::border_candidates;
use crate::qtree::QTree;

/// Smallest leaf-to-leaf dissimilarity between two trees and every leaf
/// pair attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeDissimilarity {
    pub dmin: f64,
    pub argmin: Vec<(usize, usize)>,
}

/// Minimum of `d` over `b1 × b2` with all minimizing pairs, in scan order.
pub(crate) fn border_dissimilarity<D: Dissimilarity + ?Sized>(
    b1: &[usize],
    b2: &[usize],
    d: &D,
) -> TreeDissimilarity {
    let mut dmin = f64::INFINITY;
    let mut argmin = Vec::new();
    for &x in b1 {
        for &y in b2 {
            let v = d.get(x, y);
            if v < dmin {
                dmin = v;
                argmin.clear();
                argmin.push((x, y));
            } else if v == dmin {
                argmin.push((x, y));
            }
        }
    }
    TreeDissimilarity { dmin, argmin }
}

/// Compares border candidates only, which suffices when both leaf sets
/// are arcs of a strict circular Robinson ordering.
pub fn tree_dissimilarity<D: Dissimilarity + ?Sized>(
    t1: &QTree,
    t2: &QTree,
    d: &D,
) -> Result<TreeDissimilarity> {
    let l1: BTreeSet<usize> = t1.leaves().into_iter().collect();
    if let Some(&x) = t2.leaves().iter().find(|x| l1.contains(x)) {
        return Err(Error::OverlappingLeaves(x));
    }
    let b1: Vec<usize> = border_candidates(t1).into_iter().collect();
    let b2: Vec<usize> = border_candidates(t2).into_iter().collect();
    let r = border_dissimilarity(&b1, &b2, d);
    check_argmin(&r)?;
    Ok(r)
}

pub(crate) fn check_argmin(r: &TreeDissimilarity) -> Result<()> {
    if r.argmin.len() > 4 {
        return Err(Error::not_strict(format!(
            "{} leaf pairs attain the tree dissimilarity",
            r.argmin.len()
        )));
    }
    Ok(())
}

/// Undirected graph on tree identifiers `0..k` with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NnGraph {
    adjacency: Vec<Vec<usize>>,
}

impl NnGraph {
    pub fn from_edges(k: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); k];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= k {
                    return Err(Error::IndexOutOfRange { index: w, n: k });
                }
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for a in &mut adjacency {
            a.sort_unstable();
            a.dedup();
        }
        Ok(NnGraph { adjacency })
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Each edge once, as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, adj) in self.adjacency.iter().enumerate() {
            out.extend(adj.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }
}

/// Builds the nearest-neighbour graph from per-tree border candidates,
/// keeping only running minima per tree.
pub(crate) fn nn_graph_from_borders<D: Dissimilarity + ?Sized>(
    borders: &[Vec<usize>],
    d: &D,
) -> Result<NnGraph> {
    let k = borders.len();
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "nearest-neighbour graph needs at least 2 trees, got {k}"
        )));
    }
    let mut best = vec![f64::INFINITY; k];
    let mut nearest: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut offer = |t: usize, other: usize, v: f64, best: &mut [f64]| {
        if v < best[t] {
            best[t] = v;
            nearest[t].clear();
            nearest[t].push(other);
        } else if v == best[t] {
            nearest[t].push(other);
        }
    };
    for i in 0..k {
        for j in (i + 1)..k {
            let v = border_dissimilarity(&borders[i], &borders[j], d).dmin;
            offer(i, j, v, &mut best);
            offer(j, i, v, &mut best);
        }
    }
    let edges: Vec<(usize, usize)> = nearest
        .iter()
        .enumerate()
        .flat_map(|(t, ns)| ns.iter().map(move |&s| (t, s)))
        .collect();
    let g = NnGraph::from_edges(k, &edges)?;
    if let Some(v) = (0..k).find(|&v| g.degree(v) > 2) {
        return Err(Error::not_strict(format!(
            "tree {v} has {} nearest neighbours",
            g.degree(v)
        )));
    }
    Ok(g)
}

/// Edge `{t, t'}` whenever one tree attains the other's minimum tree
/// dissimilarity; ties keep every minimizer.
pub fn nn_graph<D: Dissimilarity + ?Sized>(trees: &[QTree], d: &D) -> Result<NnGraph> {
    let mut seen = BTreeSet::new();
    for t in trees {
        for x in t.leaves() {
            if !seen.insert(x) {
                return Err(Error::OverlappingLeaves(x));
            }
        }
    }
    let borders: Vec<Vec<usize>> = trees
        .iter()
        .map(|t| border_candidates(t).into_iter().collect())
        .collect();
    nn_graph_from_borders(&borders, d)
}

/// Depth-first traversal from `start`, appended to the already visited
/// tuple. Neighbours are visited in ascending order.
pub fn dfs(graph: &NnGraph, visited: Vec<usize>, start: usize) -> Vec<usize> {
    let mut mask = vec![false; graph.len()];
    for &v in &visited {
        mask[v] = true;
    }
    let mut out = visited;
    dfs_into(graph, &mut mask, start, &mut out);
    out
}

fn dfs_into(graph: &NnGraph, mask: &mut [bool], start: usize, out: &mut Vec<usize>) {
    // explicit stack of (vertex, next neighbour slot) mirrors the recursion
    mask[start] = true;
    out.push(start);
    let mut stack = vec![(start, 0usize)];
    while let Some((v, slot)) = stack.last_mut() {
        let adj = graph.neighbours(*v);
        if *slot >= adj.len() {
            stack.pop();
            continue;
        }
        let w = adj[*slot];
        *slot += 1;
        if !mask[w] {
            mask[w] = true;
            out.push(w);
            stack.push((w, 0));
        }
    }
}

/// One tuple per connected component, each a traversal from a degree-one
/// vertex, or from the smallest vertex when the graph is a single cycle.
pub fn partition_graph(graph: &NnGraph) -> Result<Vec<Vec<usize>>> {
    let k = graph.len();
    let mut mask = vec![false; k];
    let mut tuples = Vec::new();
    for v in 0..k {
        if graph.degree(v) == 1 && !mask[v] {
            let mut t = Vec::new();
            dfs_into(graph, &mut mask, v, &mut t);
            tuples.push(t);
        }
    }
    if let Some(v) = (0..k).find(|&v| !mask[v]) {
        if !tuples.is_empty() {
            return Err(Error::not_strict(
                "nearest-neighbour graph has a cycle that is not the whole family",
            ));
        }
        if graph.degree(v) == 0 {
            return Err(Error::InvalidParameter(format!("vertex {v} is isolated")));
        }
        let mut t = Vec::new();
        dfs_into(graph, &mut mask, v, &mut t);
        if t.len() != k {
            return Err(Error::not_strict(
                "nearest-neighbour graph has a cycle that is not the whole family",
            ));
        }
        tuples.push(t);
    }
    Ok(tuples)
}

/// Arc partition of a tree family: components of its nearest-neighbour
/// graph, each listed in traversal order.
pub fn arc_partition<D: Dissimilarity + ?Sized>(trees: &[QTree], d: &D) -> Result<Vec<Vec<usize>>> {
    partition_graph(&nn_graph(trees, d)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::DissimilarityMatrix;
    use crate::qtree::tests::{free, l};

    fn arc_matrix(n: usize) -> DissimilarityMatrix {
        DissimilarityMatrix::from_fn(n, |i, j| {
            let k = j.abs_diff(i);
            k.min(n - k) as f64 / n as f64
        })
        .unwrap()
    }

    fn points_matrix(x: &[f64]) -> DissimilarityMatrix {
        DissimilarityMatrix::from_fn(x.len(), |i, j| {
            let t = (x[i] - x[j]).abs();
            t.min(1.0 - t)
        })
        .unwrap()
    }

    #[test]
    fn tree_dissimilarity_examples() {
        let d = arc_matrix(5);
        let r = tree_dissimilarity(&l(0), &l(1), &d).unwrap();
        assert_eq!(r.dmin, d.get(0, 1));
        assert_eq!(r.argmin, vec![(0, 1)]);

        let r = tree_dissimilarity(&free(vec![l(0), l(1)]), &free(vec![l(2), l(3)]), &d).unwrap();
        assert_eq!(r.dmin, 0.2);
        assert_eq!(r.argmin, vec![(1, 2)]);

        let d = arc_matrix(6);
        let r = tree_dissimilarity(&free(vec![l(0), l(1)]), &l(3), &d).unwrap();
        assert_eq!(r.dmin, 2.0 / 6.0);
        assert_eq!(r.argmin, vec![(1, 3)]);

        assert_eq!(
            tree_dissimilarity(&free(vec![l(0), l(1)]), &l(1), &d),
            Err(Error::OverlappingLeaves(1))
        );
    }

    #[test]
    fn nn_graph_examples() {
        let d = arc_matrix(4);
        let trees: Vec<QTree> = (0..4).map(l).collect();
        let g = nn_graph(&trees, &d).unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (0, 3), (1, 2), (2, 3)]);

        let d = points_matrix(&[0.0, 0.1, 0.5]);
        let g = nn_graph(&[l(0), l(1), l(2)], &d).unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);

        let d = arc_matrix(2);
        assert_eq!(nn_graph(&[l(0), l(1)], &d).unwrap().edges(), vec![(0, 1)]);
    }

    #[test]
    fn dfs_examples() {
        let path = NnGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(dfs(&path, vec![], 0), vec![0, 1, 2]);
        let cycle = NnGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(dfs(&cycle, vec![], 0), vec![0, 1, 2, 3]);
        let lonely = NnGraph::from_edges(2, &[]).unwrap();
        assert_eq!(dfs(&lonely, vec![], 1), vec![1]);
        assert_eq!(dfs(&path, vec![0], 1), vec![0, 1, 2]);
    }

    #[test]
    fn partition_examples() {
        let cycle = NnGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(partition_graph(&cycle).unwrap(), vec![vec![0, 1, 2, 3, 4]]);
        let two = NnGraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(partition_graph(&two).unwrap(), vec![vec![0, 1], vec![2, 3]]);
        let path = NnGraph::from_edges(3, &[(2, 1), (1, 0)]).unwrap();
        assert_eq!(partition_graph(&path).unwrap(), vec![vec![0, 1, 2]]);
        let mixed = NnGraph::from_edges(6, &[(0, 1), (2, 3), (3, 4), (4, 2)]).unwrap();
        assert!(partition_graph(&mixed).is_err());
    }

    #[test]
    fn nearest_neighbours_are_cyclically_adjacent() {
        // exhaustive over a strict instance with unequal gaps
        let n = 60;
        let x: Vec<f64> = (0..n)
            .map(|i| (i as f64 + 0.3 * ((i * 7) % 5) as f64) / n as f64)
            .collect();
        let d = points_matrix(&x);
        assert!(crate::robinson::is_circular_robinson(&d, true));
        let trees: Vec<QTree> = (0..n).map(l).collect();
        let g = nn_graph(&trees, &d).unwrap();
        for (u, v) in g.edges() {
            assert!(v - u == 1 || (u == 0 && v == n - 1));
        }
        for tuple in partition_graph(&g).unwrap() {
            let mut s = tuple.clone();
            s.sort_unstable();
            let contiguous = s.windows(2).all(|w| w[1] == w[0] + 1);
            let wraps = s[0] == 0 && *s.last().unwrap() == n - 1;
            assert!(contiguous || wraps);
        }
    }
}
