//! Vertex cutting with an incrementally maintained graph.
//!
//! Cutting a vertex of a simple polytope adds one row through the midpoints
//! of its incident edges. The vertex set changes in a completely predictable
//! way (the cut vertex leaves, the d midpoints arrive), so the graph can be
//! carried through long cutting sequences without re-enumerating C(m,d)
//! subsets at every step. Every new vertex is still verified against the
//! inequality system, and in full-validation mode every surviving vertex is
//! checked to clear the new row strictly.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gf::{graph_generating_function, GeneratingFunction};
use crate::graph::{build_graph, GraphNode, PolytopeGraph};
use crate::linalg::{hyperplane_through_points, primitive_integer_row, RatVector};
use crate::polytope::{Budget, FeasibleBasis, HPolytope, Label};
use crate::rational::{EncodingLength, Rational};

/// How much checking each cut performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Validation {
    /// Verify the new vertices only: feasibility and exact tight sets.
    Light,
    /// Additionally verify that every surviving vertex strictly clears the
    /// new row, i.e. the cut removed exactly one vertex.
    Full,
}

/// A polytope together with its graph, kept in sync through cuts.
#[derive(Clone, Debug)]
pub struct TrackedPolytope {
    polytope: HPolytope,
    graph: PolytopeGraph,
}

/// Sizes logged after each cut, for encoding-growth monitoring.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct StepEncoding {
    /// Maximum encoding length over all entries of `A` and `b`.
    pub max_row_entry_bits: usize,
    /// Maximum encoding length over all vertex coordinates.
    pub max_coord_bits: usize,
}

/// Result of one cut.
#[derive(Clone, Debug)]
pub struct CutOutcome {
    pub tracked: TrackedPolytope,
    /// Basis of the vertex that was cut off.
    pub cut_basis: FeasibleBasis,
    /// Label of the added row.
    pub new_label: Label,
    /// For each leaving label of the cut basis, the basis of the midpoint
    /// vertex created on the edge that dropped it.
    pub midpoints: BTreeMap<Label, FeasibleBasis>,
    pub encoding: StepEncoding,
}

impl TrackedPolytope {
    /// Enumerates and verifies the graph of a simple polytope.
    pub fn from_polytope(p: &HPolytope, budget: &Budget) -> Result<Self> {
        let graph = build_graph(p, budget)?;
        Ok(TrackedPolytope {
            polytope: p.clone(),
            graph,
        })
    }

    pub fn polytope(&self) -> &HPolytope {
        &self.polytope
    }

    pub fn graph(&self) -> &PolytopeGraph {
        &self.graph
    }

    pub fn generating_function(&self) -> GeneratingFunction {
        graph_generating_function(&self.graph)
    }

    pub fn find_by_basis(&self, basis: &FeasibleBasis) -> Option<usize> {
        self.graph.find_by_basis(basis)
    }

    pub fn find_by_point(&self, point: &RatVector) -> Option<usize> {
        self.graph.find_by_point(point)
    }

    fn step_encoding(&self) -> StepEncoding {
        let p = &self.polytope;
        let mut row_bits = 0;
        for r in p.matrix().rows() {
            for x in r.iter() {
                row_bits = row_bits.max(x.encoding_length());
            }
        }
        for x in p.rhs().iter() {
            row_bits = row_bits.max(x.encoding_length());
        }
        let mut coord_bits = 0;
        for n in self.graph.nodes() {
            for x in n.point.iter() {
                coord_bits = coord_bits.max(x.encoding_length());
            }
        }
        StepEncoding {
            max_row_entry_bits: row_bits,
            max_coord_bits: coord_bits,
        }
    }

    /// Smallest unused label of the form `prefix:k`.
    pub fn fresh_label(&self, prefix: &str) -> Label {
        let mut k = 1;
        loop {
            let candidate = format!("{prefix}:{k}");
            if self.polytope.label_index(&candidate).is_none() {
                return candidate;
            }
            k += 1;
        }
    }

    /// Cuts the vertex at `node` off with the hyperplane through its edge
    /// midpoints and returns the updated polytope plus bookkeeping.
    pub fn cut_vertex(
        &self,
        node: usize,
        new_label: Label,
        validation: Validation,
    ) -> Result<CutOutcome> {
        let g = &self.graph;
        let p = &self.polytope;
        let d = p.dim();
        if d < 3 {
            return Err(Error::DimensionTooSmall { needed: 3, got: d });
        }
        if node >= g.node_count() {
            return Err(Error::NotAVertex(format!("node index {node}")));
        }
        if p.label_index(&new_label).is_some() {
            return Err(Error::InvalidPolytope(format!(
                "label {new_label:?} already in use"
            )));
        }
        let cut_basis = g.node(node).basis.clone();
        let cut_point = g.node(node).point.clone();
        let neighbors = g.neighbors(node);
        if neighbors.len() != d {
            return Err(Error::Internal(format!(
                "vertex {cut_basis} has {} neighbors, expected {d}",
                neighbors.len()
            )));
        }

        // Midpoint per incident edge; the leaving label names the edge.
        let mut midpoints: BTreeMap<Label, (FeasibleBasis, RatVector)> = BTreeMap::new();
        for &u in neighbors {
            let nb = &g.node(u).basis;
            let mut leaving: Vec<&Label> = cut_basis
                .labels()
                .iter()
                .filter(|l| !nb.contains(l))
                .collect();
            if leaving.len() != 1 {
                return Err(Error::Internal(format!(
                    "edge {cut_basis} -- {nb} leaves {} labels",
                    leaving.len()
                )));
            }
            let leaving = leaving.pop().unwrap().clone();
            let mid = cut_point.midpoint(&g.node(u).point);
            let basis = cut_basis.swap(&leaving, new_label.clone());
            if midpoints.insert(leaving.clone(), (basis, mid)).is_some() {
                return Err(Error::Internal(format!(
                    "duplicate leaving label {leaving} at {cut_basis}"
                )));
            }
        }

        let points: Vec<RatVector> = midpoints.values().map(|(_, m)| m.clone()).collect();
        let (w, alpha) = hyperplane_through_points(&points)?;
        let value_at_cut = w.dot(&cut_point);
        let (w, alpha) = match value_at_cut.cmp(&alpha) {
            std::cmp::Ordering::Greater => (w, alpha),
            std::cmp::Ordering::Less => (w.scale(&Rational::from_int(-1)), -alpha),
            std::cmp::Ordering::Equal => {
                return Err(Error::Internal(
                    "cut vertex lies on its own midpoint hyperplane".into(),
                ))
            }
        };
        let (row, rhs) = primitive_integer_row(&w, &alpha);
        let new_p = p.with_row(row, rhs, new_label.clone())?;
        let new_row_idx = new_p.rows() - 1;

        // New vertices must satisfy the whole system and be tight exactly at
        // their basis rows; this is what makes long cut sequences trustworthy.
        for (basis, point) in midpoints.values() {
            if !new_p.contains(point) {
                return Err(Error::Internal(format!(
                    "midpoint {point:?} escapes the polytope"
                )));
            }
            let tight = new_p.tight_labels(point);
            if tight != basis.labels() {
                return Err(Error::Internal(format!(
                    "midpoint tight rows {tight:?} disagree with basis {basis}"
                )));
            }
        }
        if validation == Validation::Full {
            for (i, n) in g.nodes().iter().enumerate() {
                if i == node {
                    continue;
                }
                if !new_p.slack(new_row_idx, &n.point).is_positive() {
                    return Err(Error::Internal(format!(
                        "cut at {cut_basis} also removes or touches {}",
                        n.basis
                    )));
                }
            }
        }

        let mut nodes: Vec<GraphNode> = g
            .nodes()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != node)
            .map(|(_, n)| n.clone())
            .collect();
        for (basis, point) in midpoints.values() {
            nodes.push(GraphNode {
                basis: basis.clone(),
                point: point.clone(),
            });
        }
        let graph = PolytopeGraph::from_nodes(d, nodes)?;
        let tracked = TrackedPolytope {
            polytope: new_p,
            graph,
        };
        let encoding = tracked.step_encoding();
        Ok(CutOutcome {
            tracked,
            cut_basis,
            new_label,
            midpoints: midpoints.into_iter().map(|(l, (b, _))| (l, b)).collect(),
            encoding,
        })
    }
}

/// Cuts `vertex` off `p` and returns the new polytope. The vertex may be
/// given by its exact coordinates; the new row gets a fresh `cut:k` label.
pub fn truncate(p: &HPolytope, vertex: &RatVector, budget: &Budget) -> Result<HPolytope> {
    let tracked = TrackedPolytope::from_polytope(p, budget)?;
    let node = tracked
        .find_by_point(vertex)
        .ok_or_else(|| Error::NotAVertex(format!("{vertex:?}")))?;
    let label = tracked.fresh_label("cut");
    let outcome = tracked.cut_vertex(node, label, Validation::Full)?;
    Ok(outcome.tracked.polytope)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{generating_function, predict_truncation_gf};
    use crate::polytope::{enumerate_feasible_bases, facet_status, is_simple, RowStatus};
    use crate::rational::{rat, ratio};

    fn cube() -> HPolytope {
        HPolytope::unit_cube(3)
    }

    #[test]
    fn truncated_cube_shape() {
        let q = truncate(
            &cube(),
            &RatVector::from_ints(&[0, 0, 0]),
            &Budget::default(),
        )
        .unwrap();
        assert_eq!(q.rows(), 7);
        let bases = enumerate_feasible_bases(&q, &Budget::default()).unwrap();
        assert_eq!(bases.len(), 10);
        assert!(is_simple(&q, &Budget::default()).unwrap().simple);
        // New row is a scaled x1+x2+x3 >= 1/2.
        let row = q.matrix().row(6);
        assert_eq!(row, &RatVector::from_ints(&[-2, -2, -2]));
        assert_eq!(q.rhs()[6], rat(-1));
        // Old corner gone, three midpoints present.
        let pts: Vec<_> = bases.iter().map(|(_, x)| x.clone()).collect();
        assert!(!pts.contains(&RatVector::from_ints(&[0, 0, 0])));
        assert!(pts.contains(&RatVector::new(vec![ratio(1, 2), rat(0), rat(0)])));
    }

    #[test]
    fn truncation_matches_gf_prediction() {
        let p = cube();
        let f = generating_function(&p, &Budget::default()).unwrap();
        let corner = FeasibleBasis::new(vec!["lo:1".into(), "lo:2".into(), "lo:3".into()]);
        let tracked = TrackedPolytope::from_polytope(&p, &Budget::default()).unwrap();
        let node = tracked.find_by_basis(&corner).unwrap();
        let outcome = tracked
            .cut_vertex(node, "cut:1".into(), Validation::Full)
            .unwrap();
        let predicted = predict_truncation_gf(&f, &corner, "cut:1").unwrap();
        let re_enumerated =
            generating_function(&outcome.tracked.polytope, &Budget::default()).unwrap();
        assert_eq!(predicted, re_enumerated);
        assert_eq!(outcome.tracked.generating_function(), re_enumerated);
    }

    #[test]
    fn new_facet_nodes_form_a_triangle() {
        let tracked = TrackedPolytope::from_polytope(&cube(), &Budget::default()).unwrap();
        let node = tracked
            .find_by_point(&RatVector::from_ints(&[0, 0, 0]))
            .unwrap();
        let outcome = tracked
            .cut_vertex(node, "cut:1".into(), Validation::Full)
            .unwrap();
        let g = outcome.tracked.graph();
        assert_eq!(g.node_count(), 10);
        let new_nodes: Vec<usize> = outcome
            .midpoints
            .values()
            .map(|b| g.find_by_basis(b).unwrap())
            .collect();
        for &a in &new_nodes {
            for &b in &new_nodes {
                if a != b {
                    assert!(g.neighbors(a).contains(&b));
                }
            }
        }
    }

    #[test]
    fn double_truncation_at_opposite_corners() {
        let p = cube();
        let q = truncate(&p, &RatVector::from_ints(&[0, 0, 0]), &Budget::default()).unwrap();
        let r = truncate(&q, &RatVector::from_ints(&[1, 1, 1]), &Budget::default()).unwrap();
        assert_eq!(r.rows(), 8);
        let bases = enumerate_feasible_bases(&r, &Budget::default()).unwrap();
        assert_eq!(bases.len(), 12);
        let status = facet_status(&r, &Budget::default()).unwrap();
        assert!(status.iter().all(|s| *s == RowStatus::FacetDefining));
    }

    #[test]
    fn vertex_count_follows_the_cut_rule() {
        // |V| goes to |V| - 1 + d at each cut.
        let mut tracked = TrackedPolytope::from_polytope(&cube(), &Budget::default()).unwrap();
        let mut expect = 8;
        for k in 0..4 {
            let node = k % tracked.graph().node_count();
            let label = tracked.fresh_label("cut");
            let out = tracked.cut_vertex(node, label, Validation::Full).unwrap();
            expect = expect - 1 + 3;
            assert_eq!(out.tracked.graph().node_count(), expect);
            tracked = out.tracked;
        }
    }

    #[test]
    fn tracked_graph_agrees_with_re_enumeration() {
        let mut tracked = TrackedPolytope::from_polytope(&cube(), &Budget::default()).unwrap();
        for k in 0..3 {
            let label = tracked.fresh_label("cut");
            let out = tracked.cut_vertex(2 * k, label, Validation::Full).unwrap();
            tracked = out.tracked;
            let oracle = build_graph(tracked.polytope(), &Budget::default()).unwrap();
            assert_eq!(oracle.node_count(), tracked.graph().node_count());
            for (a, b) in oracle.nodes().iter().zip(tracked.graph().nodes()) {
                assert_eq!(a.basis, b.basis);
                assert_eq!(a.point, b.point);
            }
            assert_eq!(oracle.edges(), tracked.graph().edges());
        }
    }

    #[test]
    fn cutting_a_missing_vertex_fails() {
        let p = cube();
        let err = truncate(&p, &RatVector::from_ints(&[5, 5, 5]), &Budget::default());
        assert!(matches!(err, Err(Error::NotAVertex(_))));
    }
}
