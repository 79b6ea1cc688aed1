//! Polytope graphs and breadth-first walks.
//!
//! On simple polytopes the feasible-basis graph and the vertex-edge graph
//! coincide: nodes are the bases, and two nodes are adjacent exactly when
//! their bases differ in one row. Graph construction refuses degenerate
//! inputs rather than silently building the basis graph.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::RatVector;
use crate::polytope::{enumerate_feasible_bases, is_simple, Budget, FeasibleBasis, HPolytope};
use crate::rational::Rational;

/// One node of a polytope graph: a feasible basis and its vertex point.
#[derive(Clone, Debug, Serialize)]
pub struct GraphNode {
    pub basis: FeasibleBasis,
    pub point: RatVector,
}

/// Graph of a simple polytope. Nodes are sorted lexicographically by basis
/// labels and adjacency lists are sorted, so identical inputs always produce
/// identical structures.
#[derive(Clone, Debug)]
pub struct PolytopeGraph {
    dim: usize,
    nodes: Vec<GraphNode>,
    adj: Vec<Vec<usize>>,
}

impl PolytopeGraph {
    /// Assembles a graph from prepared nodes; edges join bases whose
    /// symmetric difference has size two. Nodes are re-sorted into the
    /// canonical basis order.
    pub(crate) fn from_nodes(dim: usize, mut nodes: Vec<GraphNode>) -> Result<Self> {
        nodes.sort_by(|a, b| a.basis.cmp(&b.basis));
        let n = nodes.len();
        let mut adj = vec![Vec::new(); n];
        for i in 0..n {
            for j in (i + 1)..n {
                if nodes[i].basis.sym_diff_size(&nodes[j].basis) == 2 {
                    if nodes[i].point == nodes[j].point {
                        return Err(Error::Internal(format!(
                            "bases {} and {} share a vertex point",
                            nodes[i].basis, nodes[j].basis
                        )));
                    }
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let g = PolytopeGraph { dim, nodes, adj };
        g.check_connected()?;
        Ok(g)
    }

    fn check_connected(&self) -> Result<()> {
        if self.nodes.is_empty() {
            return Ok(());
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        if count != self.nodes.len() {
            return Err(Error::Internal(format!(
                "polytope graph is disconnected: reached {count} of {}",
                self.nodes.len()
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn node(&self, i: usize) -> &GraphNode {
        &self.nodes[i]
    }

    pub fn nodes(&self) -> &[GraphNode] {
        &self.nodes
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn find_by_point(&self, point: &RatVector) -> Option<usize> {
        self.nodes.iter().position(|n| &n.point == point)
    }

    pub fn find_by_basis(&self, basis: &FeasibleBasis) -> Option<usize> {
        self.nodes.binary_search_by(|n| n.basis.cmp(basis)).ok()
    }
}

/// Builds the graph of a simple polytope.
///
/// Each node's geometrically tight rows are compared against its basis; on a
/// simple polytope the two must agree, and a mismatch reports a construction
/// bug rather than producing a wrong graph.
pub fn build_graph(p: &HPolytope, budget: &Budget) -> Result<PolytopeGraph> {
    let report = is_simple(p, budget)?;
    if !report.simple {
        return Err(Error::NotSimple {
            witness: format!("{:?}", report.witness.unwrap()),
        });
    }
    let bases = enumerate_feasible_bases(p, budget)?;
    let nodes: Vec<GraphNode> = bases
        .into_iter()
        .map(|(basis, point)| GraphNode { basis, point })
        .collect();
    for node in &nodes {
        let tight = p.tight_labels(&node.point);
        if tight != node.basis.labels() {
            return Err(Error::Internal(format!(
                "tight rows {:?} disagree with basis {}",
                tight, node.basis
            )));
        }
    }
    PolytopeGraph::from_nodes(p.dim(), nodes)
}

/// A walk through the graph; consecutive nodes are adjacent.
#[derive(Clone, Debug, Serialize)]
pub struct PathResult {
    pub nodes: Vec<usize>,
}

impl PathResult {
    pub fn length(&self) -> usize {
        self.nodes.len().saturating_sub(1)
    }
}

fn bfs_parents(g: &PolytopeGraph, start: usize) -> (Vec<usize>, Vec<Option<usize>>) {
    const UNSEEN: usize = usize::MAX;
    let mut dist = vec![UNSEEN; g.node_count()];
    let mut parent = vec![None; g.node_count()];
    let mut queue = VecDeque::from([start]);
    dist[start] = 0;
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if dist[v] == UNSEEN {
                dist[v] = dist[u] + 1;
                parent[v] = Some(u);
                queue.push_back(v);
            }
        }
    }
    (dist, parent)
}

fn unwind(parent: &[Option<usize>], mut v: usize) -> PathResult {
    let mut nodes = vec![v];
    while let Some(p) = parent[v] {
        nodes.push(p);
        v = p;
    }
    nodes.reverse();
    PathResult { nodes }
}

/// Exact BFS distance between two nodes, with one witness shortest path.
pub fn distance(g: &PolytopeGraph, u: usize, v: usize) -> Result<(usize, PathResult)> {
    let (dist, parent) = bfs_parents(g, u);
    if dist[v] == usize::MAX {
        return Err(Error::Unreachable { from: u, to: v });
    }
    Ok((dist[v], unwind(&parent, v)))
}

/// Diameter of a graph together with a pair attaining it.
#[derive(Clone, Debug)]
pub struct DiameterResult {
    pub value: usize,
    pub witness: (usize, usize),
}

/// Maximum BFS distance over all node pairs.
pub fn diameter(g: &PolytopeGraph, budget: &Budget) -> Result<DiameterResult> {
    let n = g.node_count();
    if n == 0 {
        return Ok(DiameterResult {
            value: 0,
            witness: (0, 0),
        });
    }
    let mut relaxations: u64 = 0;
    let mut best = DiameterResult {
        value: 0,
        witness: (0, 0),
    };
    for u in 0..n {
        relaxations += 2 * g.edge_count() as u64;
        if relaxations > budget.max_relaxations {
            return Err(Error::BudgetExceeded(format!(
                "all-pairs BFS exceeded {} relaxations",
                budget.max_relaxations
            )));
        }
        let (dist, _) = bfs_parents(g, u);
        for (v, &dv) in dist.iter().enumerate() {
            if dv == usize::MAX {
                return Err(Error::Unreachable { from: u, to: v });
            }
            if dv > best.value {
                best = DiameterResult {
                    value: dv,
                    witness: (u, v),
                };
            }
        }
    }
    Ok(best)
}

/// Result of a shortest-monotone-path search.
#[derive(Clone, Debug)]
pub struct MonotoneResult {
    /// Shortest strictly improving path to an objective maximizer, when one
    /// exists from the start node.
    pub path: Option<PathResult>,
    /// Edges excluded because both endpoints share the objective value.
    /// A nonzero count is surfaced as a warning: the objective is not
    /// generic on the skeleton.
    pub tied_edges: usize,
    /// All nodes attaining the maximum objective value.
    pub maximizers: Vec<usize>,
}

/// BFS over the directed graph that keeps only strictly improving edges.
pub fn shortest_monotone_path(
    g: &PolytopeGraph,
    objective: &RatVector,
    start: usize,
) -> MonotoneResult {
    let values: Vec<Rational> = g.nodes().iter().map(|n| objective.dot(&n.point)).collect();
    let best = values.iter().max().cloned().expect("nonempty graph");
    let maximizers: Vec<usize> = (0..g.node_count()).filter(|&i| values[i] == best).collect();

    let mut tied_edges = 0;
    for (u, v) in g.edges() {
        if values[u] == values[v] {
            tied_edges += 1;
        }
    }

    const UNSEEN: usize = usize::MAX;
    let mut dist = vec![UNSEEN; g.node_count()];
    let mut parent = vec![None; g.node_count()];
    let mut queue = VecDeque::from([start]);
    dist[start] = 0;
    let mut hit = maximizers.contains(&start).then_some(start);
    'outer: while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if dist[v] == UNSEEN && values[v] > values[u] {
                dist[v] = dist[u] + 1;
                parent[v] = Some(u);
                if values[v] == best {
                    hit = Some(v);
                    break 'outer;
                }
                queue.push_back(v);
            }
        }
    }

    MonotoneResult {
        path: hit.map(|t| unwind(&parent, t)),
        tied_edges,
        maximizers,
    }
}

/// Length of the shortest monotone pivot sequence from a feasible basis to
/// an optimal one. Restricted to simple polytopes, where pivots and graph
/// edges coincide.
pub fn pivot_distance(
    g: &PolytopeGraph,
    objective: &RatVector,
    basis: &FeasibleBasis,
) -> Result<usize> {
    let start = g
        .find_by_basis(basis)
        .ok_or_else(|| Error::NotAVertex(basis.to_string()))?;
    let result = shortest_monotone_path(g, objective, start);
    match result.path {
        Some(p) => Ok(p.length()),
        None => Err(Error::Internal(
            "no monotone path to an optimum; tied edges may sever the graph".into(),
        )),
    }
}

/// Wire format for graph export: adjacency lists plus exact coordinates.
#[derive(Serialize)]
pub struct GraphWire<'a> {
    pub dim: usize,
    pub nodes: &'a [GraphNode],
    pub edges: Vec<(usize, usize)>,
}

impl PolytopeGraph {
    pub fn wire(&self) -> GraphWire<'_> {
        GraphWire {
            dim: self.dim,
            nodes: &self.nodes,
            edges: self.edges(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RatMatrix;
    use crate::rational::rat;

    fn cube_graph() -> PolytopeGraph {
        build_graph(&HPolytope::unit_cube(3), &Budget::default()).unwrap()
    }

    #[test]
    fn cube_graph_is_three_regular() {
        let g = cube_graph();
        assert_eq!(g.node_count(), 8);
        assert_eq!(g.edge_count(), 12);
        for i in 0..8 {
            assert_eq!(g.neighbors(i).len(), 3);
        }
    }

    #[test]
    fn square_graph_is_a_four_cycle() {
        let g = build_graph(&HPolytope::unit_cube(2), &Budget::default()).unwrap();
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.edge_count(), 4);
        for i in 0..4 {
            assert_eq!(g.neighbors(i).len(), 2);
        }
    }

    #[test]
    fn antipodal_cube_distance_is_three() {
        let g = cube_graph();
        let o = g.find_by_point(&RatVector::from_ints(&[0, 0, 0])).unwrap();
        let t = g.find_by_point(&RatVector::from_ints(&[1, 1, 1])).unwrap();
        let (d, path) = distance(&g, o, t).unwrap();
        assert_eq!(d, 3);
        assert_eq!(path.length(), 3);
        assert_eq!(path.nodes.first(), Some(&o));
        assert_eq!(path.nodes.last(), Some(&t));
        let (zero, _) = distance(&g, o, o).unwrap();
        assert_eq!(zero, 0);
    }

    #[test]
    fn cube_diameter_is_three() {
        let g = cube_graph();
        let d = diameter(&g, &Budget::default()).unwrap();
        assert_eq!(d.value, 3);
        let (u, v) = d.witness;
        assert_eq!(distance(&g, u, v).unwrap().0, 3);
    }

    #[test]
    fn distance_is_a_metric_on_the_cube() {
        let g = cube_graph();
        let n = g.node_count();
        let mut dmat = vec![vec![0usize; n]; n];
        for (u, row) in dmat.iter_mut().enumerate() {
            for (v, cell) in row.iter_mut().enumerate() {
                *cell = distance(&g, u, v).unwrap().0;
            }
        }
        for u in 0..n {
            assert_eq!(dmat[u][u], 0);
            for v in 0..n {
                assert_eq!(dmat[u][v], dmat[v][u]);
                for w in 0..n {
                    assert!(dmat[u][w] <= dmat[u][v] + dmat[v][w]);
                }
            }
        }
    }

    #[test]
    fn sampled_pairs_never_exceed_diameter() {
        use rand::Rng;
        use rand::SeedableRng;
        let g = cube_graph();
        let diam = diameter(&g, &Budget::default()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut sampled_max = 0;
        for _ in 0..100 {
            let u = rng.gen_range(0..g.node_count());
            let v = rng.gen_range(0..g.node_count());
            let (d, _) = distance(&g, u, v).unwrap();
            assert!(d <= diam.value);
            sampled_max = sampled_max.max(d);
        }
        assert_eq!(sampled_max, diam.value);
        let (d, _) = distance(&g, diam.witness.0, diam.witness.1).unwrap();
        assert_eq!(d, diam.value);
    }

    #[test]
    fn monotone_path_on_cube() {
        let g = cube_graph();
        let c = RatVector::from_ints(&[1, 1, 1]);
        let o = g.find_by_point(&RatVector::from_ints(&[0, 0, 0])).unwrap();
        let t = g.find_by_point(&RatVector::from_ints(&[1, 1, 1])).unwrap();
        let res = shortest_monotone_path(&g, &c, o);
        assert_eq!(res.tied_edges, 0);
        assert_eq!(res.maximizers, vec![t]);
        let path = res.path.unwrap();
        assert_eq!(path.length(), 3);
        // Strictly increasing objective along the path.
        let mut last = None;
        for &i in &path.nodes {
            let val = c.dot(&g.node(i).point);
            if let Some(prev) = last {
                assert!(val > prev);
            }
            last = Some(val);
        }
        // Already optimal start.
        let res = shortest_monotone_path(&g, &c, t);
        assert_eq!(res.path.unwrap().length(), 0);
    }

    #[test]
    fn tied_edges_are_counted_and_excluded() {
        let g = cube_graph();
        let c = RatVector::from_ints(&[1, 1, 0]);
        let o = g.find_by_point(&RatVector::from_ints(&[0, 0, 0])).unwrap();
        let res = shortest_monotone_path(&g, &c, o);
        // Four vertical edges are flat for this objective.
        assert_eq!(res.tied_edges, 4);
        assert_eq!(res.maximizers.len(), 2);
        assert_eq!(res.path.unwrap().length(), 2);
    }

    #[test]
    fn pivot_distance_matches_monotone_length() {
        let g = cube_graph();
        let c = RatVector::from_ints(&[1, 1, 1]);
        let origin_basis = g
            .find_by_point(&RatVector::from_ints(&[0, 0, 0]))
            .map(|i| g.node(i).basis.clone())
            .unwrap();
        assert_eq!(pivot_distance(&g, &c, &origin_basis).unwrap(), 3);
        let top_basis = g
            .find_by_point(&RatVector::from_ints(&[1, 1, 1]))
            .map(|i| g.node(i).basis.clone())
            .unwrap();
        assert_eq!(pivot_distance(&g, &c, &top_basis).unwrap(), 0);
    }

    #[test]
    fn degenerate_input_is_refused() {
        let p = HPolytope::new(
            RatMatrix::from_ints(&[
                &[0, 0, -1],
                &[1, 0, 1],
                &[-1, 0, 1],
                &[0, 1, 1],
                &[0, -1, 1],
            ]),
            RatVector::new(vec![rat(0), rat(1), rat(1), rat(1), rat(1)]),
            (0..5).map(|i| format!("f{i}")).collect(),
        )
        .unwrap();
        assert!(matches!(
            build_graph(&p, &Budget::default()),
            Err(Error::NotSimple { .. })
        ));
    }
}
