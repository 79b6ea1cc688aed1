//! Exact-arithmetic polytope constructions and graph walks.
//!
//! Everything is computed over arbitrary-precision rationals: vertex
//! enumeration from inequality descriptions, simplicity checks, BFS
//! distances and diameters, shortest monotone paths, knapsack-style gadget
//! polytopes built from partition instances, vertex truncation with
//! generating-function bookkeeping, silo towers and their cyclic repetition
//! with an exact distance-to-diameter reduction, and simple lifted
//! extensions with greedy short paths to an apex.
//!
//! All operations are pure; values are immutable after construction and safe
//! to share across threads. Enumeration over basis subsets parallelizes with
//! deterministic, sorted output.

pub mod cyclic;
pub mod error;
pub mod gf;
pub mod graph;
pub mod knapsack;
pub mod linalg;
pub mod polytope;
pub mod rational;
pub mod report;
pub mod rock;
pub mod silo;
pub mod truncate;

pub use error::{Error, Result};
pub use graph::{
    build_graph, diameter, distance, pivot_distance, shortest_monotone_path, DiameterResult,
    GraphNode, MonotoneResult, PathResult, PolytopeGraph,
};
pub use linalg::{
    affine_rank, hyperplane_through_points, primitive_integer_row, rank, solve_square, RatMatrix,
    RatVector,
};
pub use polytope::{
    enumerate_feasible_bases, enumerate_with_jobs, facet_status, is_simple, Budget, FeasibleBasis,
    HPolytope, Label, RowStatus, SimplicityReport,
};
pub use rational::{rat, ratio, EncodingLength, Rational};
