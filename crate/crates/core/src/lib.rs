//! Strict circular seriation in `O(n²)`.
//!
//! Given a dissimilarity matrix that is a relabelling of a strict circular
//! Robinson matrix, [`recursive_seriation`] recovers a Q-tree whose
//! orderings, closed under rotations and reflections, are exactly the
//! relabellings that restore the Robinson structure.
//!
//! Alongside the solver the crate provides recognition of (strict)
//! circular and linear Robinson matrices, an exhaustive oracle for small
//! instances, and a sampling model on the circle with Kendall-tau based
//! diagnostics.

pub mod cli;
pub mod error;
pub mod matrix;
pub mod model;
pub mod nn_partition;
pub mod orientation;
pub mod permutation;
pub mod qtree;
pub mod robinson;
pub mod seriation;

pub use error::{Error, Result};
pub use matrix::{CountingView, Dissimilarity, DissimilarityMatrix};
pub use model::{
    arc_distance, build_matrix, kendall_tau, kendall_tau_dihedral, max_gap, rate_experiment,
    sample_uniform, solution_diameter, trial_seed, CircleSample, DissimilarityFamily, FamilyKind,
    RateRow, RateTable, RATE_ENUMERATION_CAP,
};
pub use nn_partition::{
    arc_partition, dfs, nn_graph, partition_graph, tree_dissimilarity, NnGraph, TreeDissimilarity,
};
pub use orientation::{
    apply_to_child, border_candidates, border_candidates_orientation,
    complete_internal_orientation, consecutive_orientation, external_orientation,
    final_orientation, left_border_candidates, right_border_candidates, BorderSets,
    OrientationVerdict,
};
pub use permutation::{
    compose_dihedral, cyclically_ordered, dihedral_elements, is_arc, reverse_arc, CyclicArc,
    Permutation, SolutionSet,
};
pub use qtree::{Enumeration, NodeStatus, QTree, DEFAULT_ENUMERATION_CAP};
pub use robinson::{
    circular_row_violation, first_unimodality_violation, is_circular_robinson, is_linear_robinson,
    is_unimodal, linear_row_violation, verify_ordering, UnimodalReport,
};
pub use seriation::{
    brute_force_solutions, recursive_seriation, strictly_overlaps, LevelStats, SeriationResult,
    SeriationStats, BRUTE_FORCE_MAX,
};
