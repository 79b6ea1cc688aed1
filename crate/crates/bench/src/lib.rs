//! Shared fixture builders for the benchmark suite.

use polywalk_core::{Budget, HPolytope, PolytopeGraph};

/// Unit cube in `d` dimensions.
pub fn cube(d: usize) -> HPolytope {
    HPolytope::unit_cube(d)
}

/// Graph of the unit cube in `d` dimensions.
pub fn cube_graph(d: usize) -> PolytopeGraph {
    polywalk_core::build_graph(&cube(d), &Budget::default()).expect("cube graph")
}
