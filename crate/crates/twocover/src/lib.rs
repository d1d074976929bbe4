//! Exact combinatorial invariants of degree-two Galois covers of smooth
//! curves over local fields with good-reduction base.
//!
//! From the depth data of the branch locus and the Galois data of the
//! cover, this crate computes, with no floating point anywhere:
//!
//! * the cluster picture (nested threshold balls with depths and the
//!   invariants v_s),
//! * a semi-stability verdict and the reduction type,
//! * the admissible disc model and the classification of special-fiber
//!   components,
//! * the metric dual graph of the minimal regular model with its
//!   Frobenius action,
//! * the component group of the graph Jacobian, its Frobenius-fixed
//!   points (the Tamagawa number), and
//! * normalized volume reports for rank-2 spectral data.
//!
//! The `examples/` directory has one runnable program per capability;
//! start with `cluster_picture` and work down the pipeline. A small CLI
//! (`twocover check|picture|graph|tamagawa|volume`) wraps the same calls
//! for use from the shell.

pub mod branch;
pub mod cluster;
pub mod depth;
pub mod disc;
pub mod document;
pub mod error;
pub mod graph;
pub mod jacobian;
pub mod matrix;
pub mod semistable;
pub mod volume;

pub use branch::{
    branch_from_rational_points, depths_from_rational_points, BranchDatum, BranchViolation,
    CoverSpec, GaloisDatum, Permutation, RationalPoint,
};
pub use cluster::{
    build_cluster_picture, parse_ascii, AsciiNode, ClassificationFlags, Cluster, ClusterId,
    ClusterPicture,
};
pub use depth::RationalDepth;
pub use disc::{
    build_disc_collection, classify_fiber, Disc, DiscCollection, DiscId, DiscTree,
    FiberDescriptor, FiberKind,
};
pub use document::{parse_cover_spec, render_cover_spec};
pub use error::{Error, Result};
pub use graph::{
    build_dual_graph, frobenius_automorphism, lift_automorphism, resolve_eps, subdivide, Chain,
    GraphAutomorphism, MetricGraph, Provenance, UnitAutomorphism, UnitGraph, Vertex,
};
pub use jacobian::{
    component_group, cycle_basis, fixed_point_count, fixed_point_count_algebraic, induced_action,
    spanning_tree_count, AbelianGroup, CycleLattice, InducedAction,
};
pub use matrix::{smith_normal_form, IntMatrix, Snf};
pub use semistable::{
    check_semistable, reduction_type, twin_depth_warnings, ReductionKind, ReductionType, Verdict,
    ViolationCode,
};
pub use volume::{
    hitchin_discriminant_points, normalized_volume, tamagawa_detailed, tamagawa_number,
    NormalizationInputs, PipelineOptions, TamagawaDetail, VolumeReport,
};
