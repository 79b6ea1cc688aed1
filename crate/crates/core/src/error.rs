//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by construction and search operations.
///
/// Singular matrices and absent monotone paths are *not* errors; they are
/// reported through `Option` return values.
#[derive(Debug, Error)]
pub enum Error {
    /// The input points do not span a unique hyperplane.
    #[error("points are affinely dependent; no unique hyperplane")]
    AffinelyDependent,

    /// Fewer rows than needed for the requested operation.
    #[error("dimension too small: need at least {needed}, got {got}")]
    DimensionTooSmall { needed: usize, got: usize },

    /// The basis-subset scan would exceed the configured cap.
    #[error("enumeration budget exceeded: C({m},{d}) = {count} subsets > cap {cap}")]
    TimeBudgetExceeded {
        m: usize,
        d: usize,
        count: u128,
        cap: u64,
    },

    /// A search loop exceeded its configured cap.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// The polytope has a vertex lying on more than `dim` facets.
    #[error("polytope is not simple; degenerate vertex at {witness}")]
    NotSimple { witness: String },

    /// BFS failed to connect two nodes of a polytope graph.
    #[error("nodes {from} and {to} are not connected; construction bug")]
    Unreachable { from: usize, to: usize },

    /// Partition weights must have an even sum.
    #[error("weights sum to an odd number")]
    OddSum,

    /// Partition weights must be strictly positive.
    #[error("weight at position {0} is not positive")]
    NonPositiveWeight(usize),

    /// The requested point or basis is not a vertex of the polytope.
    #[error("not a vertex of the polytope: {0}")]
    NotAVertex(String),

    /// The generating function does not contain the requested monomial.
    #[error("basis {0:?} not present in generating function")]
    BasisNotPresent(Vec<String>),

    /// Forced tower repetition count below the safe threshold.
    #[error("r = {r} is below the required minimum {min}; pass force to override")]
    RTooSmall { r: usize, min: usize },

    /// A bookkeeping invariant of the cyclic-silo record failed.
    #[error("cyclic silo record inconsistent: {0}")]
    RecordInconsistent(String),

    /// The supplied ball is not strictly inside the polytope.
    #[error("ball is not strictly interior: {0}")]
    BallNotInterior(String),

    /// No admissible lift coefficient was found for a row.
    #[error("no valid lift coefficient found for row {row} within the search budget")]
    LayeringFailed { row: usize },

    /// The greedy walk has no strictly closer neighbor.
    #[error("greedy walk stuck at node {node}; extension is invalid")]
    GreedyStuck { node: usize },

    /// The height coordinate has more than one maximizer.
    #[error("height maximizer is not unique; extension is invalid")]
    NonUniqueMax,

    /// Structural validation of an input polytope failed.
    #[error("invalid polytope: {0}")]
    InvalidPolytope(String),

    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),

    /// An internal consistency check failed; indicates a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
