//! Silo towers: d ordered cuts that replace one vertex with a tower.
//!
//! Cutting a vertex with ordered basis b_1 < ... < b_d, then cutting the
//! vertex whose basis swaps b_1 for the first new row, and so on d times,
//! produces a polytope with m + d facets whose new vertices form a fixed
//! pattern. The non-peak new vertices are isomorphic to the tower graph
//! `G_d` on pairs (a, b) with a != b, and the final vertex cut in — the
//! peak — sits on exactly the d new rows, so its basis is disjoint from
//! every original one and it lies at distance at least d from every
//! original vertex.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::GeneratingFunction;
use crate::graph::PolytopeGraph;
use crate::polytope::{Budget, FeasibleBasis, HPolytope, Label};
use crate::truncate::{StepEncoding, TrackedPolytope, Validation};

/// The tower graph `G_d`: nodes are ordered pairs `(a, b)` from `[d]` with
/// `a != b`; for `b <= b'` the pairs are adjacent when `b = b'`, or when
/// `b' = b + 1`, `a = a'`, `b != a - 1`, or when `b' = b + 2`, `a = a'`,
/// `b = a - 1`.
#[derive(Clone, Debug)]
pub struct SiloGraph {
    d: usize,
    nodes: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl SiloGraph {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn nodes(&self) -> &[(usize, usize)] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn index_of(&self, node: (usize, usize)) -> Option<usize> {
        self.nodes.iter().position(|&n| n == node)
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn adjacent(&self, x: (usize, usize), y: (usize, usize)) -> bool {
        let (lo, hi) = if x.1 <= y.1 { (x, y) } else { (y, x) };
        let (a, b) = lo;
        let (a2, b2) = hi;
        if x == y {
            return false;
        }
        b == b2 || (b2 == b + 1 && a == a2 && b != a - 1) || (b2 == b + 2 && a == a2 && b == a - 1)
    }

    /// BFS distances from one node.
    pub fn bfs(&self, start: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.node_count()];
        let mut queue = std::collections::VecDeque::from([start]);
        dist[start] = 0;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }
}

/// Builds `G_d`. Dimensions below three are rejected: the tower analysis
/// needs at least three rows per vertex.
pub fn silo_graph(d: usize) -> Result<SiloGraph> {
    if d < 3 {
        return Err(Error::DimensionTooSmall { needed: 3, got: d });
    }
    let mut nodes = Vec::with_capacity(d * (d - 1));
    for a in 1..=d {
        for b in 1..=d {
            if a != b {
                nodes.push((a, b));
            }
        }
    }
    let mut g = SiloGraph {
        d,
        adj: vec![Vec::new(); nodes.len()],
        nodes,
    };
    for i in 0..g.nodes.len() {
        for j in (i + 1)..g.nodes.len() {
            if g.adjacent(g.nodes[i], g.nodes[j]) {
                g.adj[i].push(j);
                g.adj[j].push(i);
            }
        }
    }
    for list in &mut g.adj {
        list.sort_unstable();
    }
    Ok(g)
}

/// BFS verification of the four path-length facts used by the tower
/// analysis, reported per claim.
#[derive(Clone, Debug, Serialize)]
pub struct SiloGraphBounds {
    pub d: usize,
    /// (1,2) reaches (i,d) for i in [d-1] minus {2}, and (d,d-1), within d-2.
    pub entry_to_top: bool,
    /// (i,1) reaches (i,d) for 2 <= i <= d-1, and (d,1) reaches (d,d-1),
    /// within d-2.
    pub ground_to_top: bool,
    /// Every node reaches the entry set {(1,2)} + {(i,1)} within d-2.
    pub all_to_entry: bool,
    /// The entry set has pairwise distance at most 3.
    pub entry_pairwise: bool,
    pub max_entry_pair_distance: usize,
}

impl SiloGraphBounds {
    pub fn all_hold(&self) -> bool {
        self.entry_to_top && self.ground_to_top && self.all_to_entry && self.entry_pairwise
    }
}

pub fn silo_graph_path_bounds(d: usize) -> Result<SiloGraphBounds> {
    let g = silo_graph(d)?;
    let limit = d - 2;
    let idx = |n| g.index_of(n).expect("tower graph node");

    let from_12 = g.bfs(idx((1, 2)));
    let mut entry_to_top = from_12[idx((d, d - 1))] <= limit;
    for i in (1..d).filter(|&i| i != 2) {
        entry_to_top &= from_12[idx((i, d))] <= limit;
    }

    let mut ground_to_top = true;
    for i in 2..d {
        ground_to_top &= g.bfs(idx((i, 1)))[idx((i, d))] <= limit;
    }
    ground_to_top &= g.bfs(idx((d, 1)))[idx((d, d - 1))] <= limit;

    let entry_set: Vec<usize> = std::iter::once(idx((1, 2)))
        .chain((2..=d).map(|i| idx((i, 1))))
        .collect();
    let mut to_entry = vec![usize::MAX; g.node_count()];
    for &e in &entry_set {
        for (v, dist) in g.bfs(e).into_iter().enumerate() {
            to_entry[v] = to_entry[v].min(dist);
        }
    }
    let all_to_entry = to_entry.iter().all(|&x| x <= limit);

    let mut max_pair = 0;
    for &e in &entry_set {
        let dist = g.bfs(e);
        for &f in &entry_set {
            max_pair = max_pair.max(dist[f]);
        }
    }

    Ok(SiloGraphBounds {
        d,
        entry_to_top,
        ground_to_top,
        all_to_entry,
        entry_pairwise: max_pair <= 3,
        max_entry_pair_distance: max_pair,
    })
}

/// Bookkeeping of one silo: the ordered basis that was cut, the d new row
/// labels in cutting order, and the peak.
#[derive(Clone, Debug)]
pub struct SiloRecord {
    /// Basis labels of the cut vertex in cutting order: position `t` holds
    /// `b_t`.
    pub ordered_basis: Vec<Label>,
    /// New row labels in cutting order: position `t` holds `y_{t+1}`.
    pub y_labels: Vec<Label>,
    pub peak: FeasibleBasis,
    /// Encoding sizes after each of the d cuts.
    pub encodings: Vec<StepEncoding>,
}

impl SiloRecord {
    fn d(&self) -> usize {
        self.ordered_basis.len()
    }

    /// Basis of the tower vertex at `G_d` coordinates `(a, b)`.
    pub fn tower_basis(&self, a: usize, b: usize) -> FeasibleBasis {
        let d = self.d();
        assert!(a != b && 1 <= a && a <= d && 1 <= b && b <= d);
        let mut labels = Vec::with_capacity(d);
        if a > b {
            // x-part {b..d} minus a, y-part {1..b}.
            for t in b..=d {
                if t != a {
                    labels.push(self.ordered_basis[t - 1].clone());
                }
            }
            for t in 1..=b {
                labels.push(self.y_labels[t - 1].clone());
            }
        } else {
            // x-part {b..d}, y-part {1..b} minus a.
            for t in b..=d {
                labels.push(self.ordered_basis[t - 1].clone());
            }
            for t in 1..=b {
                if t != a {
                    labels.push(self.y_labels[t - 1].clone());
                }
            }
        }
        FeasibleBasis::new(labels)
    }

    /// Bases of the peak's d neighbors: `(i, d)` for `i < d` plus `(d, d-1)`.
    pub fn peak_neighbor_bases(&self) -> Vec<FeasibleBasis> {
        let d = self.d();
        let mut out: Vec<FeasibleBasis> = (1..d).map(|i| self.tower_basis(i, d)).collect();
        out.push(self.tower_basis(d, d - 1));
        out
    }

    /// Closed-form generating function of the silo output, given the input
    /// polytope's generating function.
    pub fn closed_form_gf(&self, f_input: &GeneratingFunction) -> Result<GeneratingFunction> {
        let d = self.d();
        let cut = FeasibleBasis::new(self.ordered_basis.clone());
        if !f_input.contains(&cut) {
            return Err(Error::BasisNotPresent(cut.labels().to_vec()));
        }
        let mut bases: Vec<FeasibleBasis> = f_input
            .monomials()
            .flat_map(|(b, c)| std::iter::repeat_n(b.clone(), c))
            .filter(|b| *b != cut)
            .collect();
        bases.push(FeasibleBasis::new(self.y_labels.clone()));
        for k in 0..d {
            // x^{[d]\[k]} y^{[k+1]\{i}} for i in 1..=k
            for i in 1..=k {
                let mut labels: Vec<Label> = (k + 1..=d)
                    .map(|t| self.ordered_basis[t - 1].clone())
                    .collect();
                labels.extend(
                    (1..=k + 1)
                        .filter(|&t| t != i)
                        .map(|t| self.y_labels[t - 1].clone()),
                );
                bases.push(FeasibleBasis::new(labels));
            }
            // x^{[d]\([k] cup {j})} y^{[k+1]} for j in k+2..=d
            for j in (k + 2)..=d {
                let mut labels: Vec<Label> = (k + 1..=d)
                    .filter(|&t| t != j)
                    .map(|t| self.ordered_basis[t - 1].clone())
                    .collect();
                labels.extend((1..=k + 1).map(|t| self.y_labels[t - 1].clone()));
                bases.push(FeasibleBasis::new(labels));
            }
        }
        Ok(GeneratingFunction::from_bases(bases))
    }
}

/// Output of a silo construction.
#[derive(Clone, Debug)]
pub struct SiloOutcome {
    pub tracked: TrackedPolytope,
    pub record: SiloRecord,
}

/// Builds the silo of `tracked` at `node` with the basis elements cut in
/// the order given by `order`. New rows are labeled `y_prefix:1..d`.
pub fn silo_tracked(
    tracked: &TrackedPolytope,
    node: usize,
    order: &[Label],
    y_prefix: &str,
    validation: Validation,
) -> Result<SiloOutcome> {
    let d = tracked.polytope().dim();
    let basis = tracked.graph().node(node).basis.clone();
    let mut sorted = order.to_vec();
    sorted.sort();
    if sorted != basis.labels() {
        return Err(Error::InvalidPolytope(format!(
            "order {order:?} is not a permutation of basis {basis}"
        )));
    }

    let y_labels: Vec<Label> = (1..=d).map(|k| format!("{y_prefix}:{k}")).collect();
    for y in &y_labels {
        if tracked.polytope().label_index(y).is_some() {
            return Err(Error::InvalidPolytope(format!("label {y:?} already used")));
        }
    }

    let mut current = tracked.clone();
    let mut encodings = Vec::with_capacity(d);
    for k in 0..d {
        // Cut the vertex whose basis is {b_{k+1}..b_d, y_1..y_k}.
        let mut labels: Vec<Label> = order[k..].to_vec();
        labels.extend(y_labels[..k].iter().cloned());
        let target = FeasibleBasis::new(labels);
        let idx = current
            .find_by_basis(&target)
            .ok_or_else(|| Error::Internal(format!("tower vertex {target} missing at cut {k}")))?;
        let out = current.cut_vertex(idx, y_labels[k].clone(), validation)?;
        encodings.push(out.encoding);
        current = out.tracked;
    }

    let record = SiloRecord {
        ordered_basis: order.to_vec(),
        y_labels: y_labels.clone(),
        peak: FeasibleBasis::new(y_labels),
        encodings,
    };
    // The peak and the whole tower must exist with the predicted bases.
    if current.find_by_basis(&record.peak).is_none() {
        return Err(Error::Internal("silo peak basis missing".into()));
    }
    for a in 1..=d {
        for b in 1..=d {
            if a != b && current.find_by_basis(&record.tower_basis(a, b)).is_none() {
                return Err(Error::Internal(format!(
                    "tower vertex ({a},{b}) missing after silo"
                )));
            }
        }
    }
    Ok(SiloOutcome {
        tracked: current,
        record,
    })
}

/// Polytope-level wrapper: silo `p` at the vertex `point` cutting basis
/// elements in the order given.
pub fn silo(
    p: &HPolytope,
    point: &crate::linalg::RatVector,
    order: &[Label],
    budget: &Budget,
) -> Result<(HPolytope, SiloRecord)> {
    let tracked = TrackedPolytope::from_polytope(p, budget)?;
    let node = tracked
        .find_by_point(point)
        .ok_or_else(|| Error::NotAVertex(format!("{point:?}")))?;
    let tracked_ref = &tracked;
    let prefix = next_free_prefix(tracked_ref);
    let out = silo_tracked(&tracked, node, order, &prefix, Validation::Full)?;
    Ok((out.tracked.polytope().clone(), out.record))
}

/// Convenience form of the isomorphism check: builds the silo of `p` at
/// `point` with the given order and verifies the explicit coordinate map.
pub fn silo_isomorphism_at(
    p: &HPolytope,
    point: &crate::linalg::RatVector,
    order: &[Label],
    budget: &Budget,
) -> Result<IsomorphismReport> {
    let tracked = TrackedPolytope::from_polytope(p, budget)?;
    let node = tracked
        .find_by_point(point)
        .ok_or_else(|| Error::NotAVertex(format!("{point:?}")))?;
    let prefix = next_free_prefix(&tracked);
    let out = silo_tracked(&tracked, node, order, &prefix, Validation::Full)?;
    let gd = silo_graph(p.dim())?;
    verify_silo_isomorphism(&gd, &out.record, out.tracked.graph())
}

fn next_free_prefix(tracked: &TrackedPolytope) -> String {
    let mut j = 1;
    loop {
        let prefix = format!("y:{j}");
        let clash = tracked
            .polytope()
            .labels()
            .iter()
            .any(|l| l.starts_with(&prefix));
        if !clash {
            return prefix;
        }
        j += 1;
    }
}

/// Checks that the explicit coordinate map is a graph isomorphism from
/// `G_d` onto the tower vertices (new non-peak vertices) of the silo.
#[derive(Clone, Debug)]
pub struct IsomorphismReport {
    pub holds: bool,
    /// Mismatching pair of `G_d` coordinates, when the check fails.
    pub counterexample: Option<((usize, usize), (usize, usize))>,
    pub tower_edge_count: usize,
    pub expected_edge_count: usize,
}

pub fn verify_silo_isomorphism(
    silo_graph_ref: &SiloGraph,
    record: &SiloRecord,
    graph: &PolytopeGraph,
) -> Result<IsomorphismReport> {
    let mut node_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &(a, b) in silo_graph_ref.nodes() {
        let basis = record.tower_basis(a, b);
        let idx = graph
            .find_by_basis(&basis)
            .ok_or_else(|| Error::Internal(format!("tower vertex ({a},{b}) missing")))?;
        node_of.insert((a, b), idx);
    }

    // Fast necessary condition first: same induced edge count.
    let tower_nodes: Vec<usize> = node_of.values().copied().collect();
    let mut tower_edges = 0;
    for (i, &u) in tower_nodes.iter().enumerate() {
        for &v in &tower_nodes[i + 1..] {
            if graph.neighbors(u).contains(&v) {
                tower_edges += 1;
            }
        }
    }
    let expected = silo_graph_ref.edge_count();
    if tower_edges != expected {
        return Ok(IsomorphismReport {
            holds: false,
            counterexample: None,
            tower_edge_count: tower_edges,
            expected_edge_count: expected,
        });
    }

    let nodes = silo_graph_ref.nodes();
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            let expected_adj = silo_graph_ref.adjacent(nodes[i], nodes[j]);
            let (u, v) = (node_of[&nodes[i]], node_of[&nodes[j]]);
            let actual_adj = graph.neighbors(u).contains(&v);
            if expected_adj != actual_adj {
                return Ok(IsomorphismReport {
                    holds: false,
                    counterexample: Some((nodes[i], nodes[j])),
                    tower_edge_count: tower_edges,
                    expected_edge_count: expected,
                });
            }
        }
    }
    let peak_idx = graph
        .find_by_basis(&record.peak)
        .ok_or_else(|| Error::Internal("peak missing".into()))?;
    let mut peak_neighbors: Vec<usize> = graph.neighbors(peak_idx).to_vec();
    let mut expected_peak: Vec<usize> = record
        .peak_neighbor_bases()
        .iter()
        .map(|b| graph.find_by_basis(b).unwrap())
        .collect();
    peak_neighbors.sort_unstable();
    expected_peak.sort_unstable();
    if peak_neighbors != expected_peak {
        return Err(Error::Internal(
            "peak neighbors are not the predicted tower tops".into(),
        ));
    }
    Ok(IsomorphismReport {
        holds: true,
        counterexample: None,
        tower_edge_count: tower_edges,
        expected_edge_count: expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::generating_function;
    use crate::graph::distance;
    use crate::linalg::RatVector;
    use crate::polytope::is_simple;

    #[test]
    fn tower_graph_small_counts() {
        let g = silo_graph(3).unwrap();
        assert_eq!(g.node_count(), 6);
        assert_eq!(g.edge_count(), 6);
        for d in 3..=8 {
            let g = silo_graph(d).unwrap();
            assert_eq!(g.node_count(), d * (d - 1));
        }
        assert!(matches!(
            silo_graph(2),
            Err(Error::DimensionTooSmall { .. })
        ));
    }

    #[test]
    fn tower_graph_d5_structure() {
        // Same-height nodes are pairwise adjacent; vertical steps skip one
        // level exactly at b = a - 1.
        let g = silo_graph(5).unwrap();
        assert_eq!(g.node_count(), 20);
        assert!(g.adjacent((1, 3), (2, 3)));
        assert!(g.adjacent((4, 3), (2, 3)));
        assert!(g.adjacent((1, 2), (1, 3)));
        assert!(!g.adjacent((3, 2), (3, 3)));
        assert!(g.adjacent((3, 2), (3, 4)));
        assert!(!g.adjacent((1, 2), (2, 3)));
    }

    #[test]
    fn path_bounds_hold_for_small_d() {
        for d in 3..=8 {
            let b = silo_graph_path_bounds(d).unwrap();
            assert!(b.all_hold(), "bounds fail at d={d}: {b:?}");
        }
        // d=3: distance from (1,2) to (1,3) is exactly d-2 = 1.
        let g = silo_graph(3).unwrap();
        let dist = g.bfs(g.index_of((1, 2)).unwrap());
        assert_eq!(dist[g.index_of((1, 3)).unwrap()], 1);
    }

    #[test]
    fn cube_silo_shape_and_gf() {
        let p = HPolytope::unit_cube(3);
        let order: Vec<Label> = vec!["lo:1".into(), "lo:2".into(), "lo:3".into()];
        let (s, record) = silo(
            &p,
            &RatVector::from_ints(&[0, 0, 0]),
            &order,
            &Budget::default(),
        )
        .unwrap();
        assert_eq!(s.rows(), 9);
        let f = generating_function(&s, &Budget::default()).unwrap();
        assert_eq!(f.term_count(), 14);
        assert!(is_simple(&s, &Budget::default()).unwrap().simple);
        // Closed form matches the re-enumerated generating function.
        let f_in = generating_function(&p, &Budget::default()).unwrap();
        assert_eq!(record.closed_form_gf(&f_in).unwrap(), f);
    }

    #[test]
    fn cube_silo_isomorphism_and_peak_distance() {
        let p = HPolytope::unit_cube(3);
        let tracked = TrackedPolytope::from_polytope(&p, &Budget::default()).unwrap();
        let node = tracked
            .find_by_point(&RatVector::from_ints(&[0, 0, 0]))
            .unwrap();
        let order: Vec<Label> = vec!["lo:1".into(), "lo:2".into(), "lo:3".into()];
        let out = silo_tracked(&tracked, node, &order, "y", Validation::Full).unwrap();
        let g3 = silo_graph(3).unwrap();
        let report = verify_silo_isomorphism(&g3, &out.record, out.tracked.graph()).unwrap();
        assert!(report.holds, "{report:?}");

        // Peak basis is disjoint from all original bases, so its distance to
        // every original vertex is at least d.
        let g = out.tracked.graph();
        let peak = g.find_by_basis(&out.record.peak).unwrap();
        for n in tracked.graph().nodes() {
            assert_eq!(n.basis.sym_diff_size(&out.record.peak), 6);
            if let Some(i) = g.find_by_basis(&n.basis) {
                let (dist, _) = distance(g, peak, i).unwrap();
                assert!(dist >= 3, "peak too close to {}", n.basis);
            }
        }
    }
}
