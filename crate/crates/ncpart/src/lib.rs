//! Exact computational engine for categories of bi-coloured noncrossing
//! partitions: a finite group Λ colors blocks, a point group Γ colors
//! points, and each valid colored partition induces an exact 0/1 matrix
//! between tensor powers of the Λ-indexed basis. The crate implements the
//! boundary calculus, the partition operators, vertical composition with
//! its |Λ|^(c-1) scalar law, hom-space dimensions, and verification
//! suites that cross-check every symbolic rule against brute-force
//! matrix arithmetic.

pub mod colored;
pub mod compose;
pub mod group;
pub mod homspace;
pub mod json;
pub mod matrix;
pub mod operator;
pub mod partition;
pub mod suites;

pub use colored::{
    check_gamma_condition, enumerate_colored, enumerate_colored_identity, enumerate_colorings,
    relative_outer_boundary, ColoredError, ColoredPartition,
};
pub use compose::{
    admissible_middle, brute_force_compose, brute_force_middle_solutions, build_gain_graph,
    component_constants, component_entrances, component_label, compose, connected_components,
    count_middle_solutions, delta_of_composite, entrance_constant, middle_system,
    ComponentConstants, ComponentInfo, ComponentKind, ComposeError, CompositionResult, Entrance,
    EntranceSide, GainGraph, MiddleConstraint,
};
pub use group::{FiniteGroup, GammaElem, GroupError, LambdaElem, PointGroup};
pub use matrix::{decode_basis, encode_basis, MatrixError, MorphismMatrix};
pub use operator::{
    adjoint_partition, cap, cap_k, cup, cup_k, delta_eval, identity_partition, identity_strand,
    left_rotate, tensor_partitions, to_matrix, to_matrix_with_guard, OperatorError,
    DEFAULT_DIM_GUARD,
};
pub use partition::{
    catalan, is_noncrossing, Block, PartitionError, PointRef, Row, Span, TwoRowPartition,
};

pub use homspace::{exact_rank, hom_space, HomSpace};
pub use json::JsonError;
pub use num_rational::Rational64;
pub use suites::{
    axioms_suite, check_master_law, composition_suite, counting_suite, random_coloring,
    reconstruction_fixtures, run_suites, zigzag_holds, CaseReport, SuiteError, SuiteReport,
};
