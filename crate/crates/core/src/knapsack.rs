//! Partition gadget: a hypercube sliced by one knapsack row.
//!
//! A positive integer vector with even sum turns into the polytope
//! `[0,1]^{d+2}` intersected with `w . x <= beta + 1/4`, where `w` extends
//! the weights by `-beta` and `beta + 1/2`. Whether the two distinguished
//! sliced vertices are within distance `d+1` decides the partition
//! instance, and the same reduction carries over to monotone paths under a
//! tailored objective. The closed-form vertex and edge model here is
//! cross-checked against geometric enumeration.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{build_graph, distance, shortest_monotone_path, PathResult, PolytopeGraph};
use crate::linalg::RatVector;
use crate::polytope::{Budget, HPolytope};
use crate::rational::Rational;

/// Positive integer weights whose sum is even.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionInstance {
    weights: Vec<u64>,
    beta: u64,
}

impl PartitionInstance {
    pub fn new(weights: Vec<u64>) -> Result<Self> {
        if let Some(pos) = weights.iter().position(|&w| w == 0) {
            return Err(Error::NonPositiveWeight(pos));
        }
        let total: u64 = weights.iter().sum();
        if !total.is_multiple_of(2) {
            return Err(Error::OddSum);
        }
        Ok(PartitionInstance {
            beta: total / 2,
            weights,
        })
    }

    /// Seeded random instance with entries in `1..=max_entry`; the last
    /// entry is nudged by one when needed to make the sum even.
    pub fn random(d: usize, max_entry: u64, rng: &mut impl rand::Rng) -> Self {
        assert!(d >= 2 && max_entry >= 2);
        let mut weights: Vec<u64> = (0..d).map(|_| rng.gen_range(1..=max_entry)).collect();
        if !weights.iter().sum::<u64>().is_multiple_of(2) {
            let last = weights.last_mut().unwrap();
            *last = if *last == max_entry {
                *last - 1
            } else {
                *last + 1
            };
        }
        PartitionInstance::new(weights).expect("even sum by construction")
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn d(&self) -> usize {
        self.weights.len()
    }

    pub fn beta(&self) -> u64 {
        self.beta
    }

    /// Ambient dimension of the gadget polytope: `d + 2`.
    pub fn ambient_dim(&self) -> usize {
        self.d() + 2
    }

    /// Decision threshold for the distance question: `d + 1`.
    pub fn threshold(&self) -> usize {
        self.d() + 1
    }
}

/// Extended weight vector `(b_1, ..., b_d, -beta, beta + 1/2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnapsackWeights {
    w: RatVector,
}

impl KnapsackWeights {
    pub fn of(inst: &PartitionInstance) -> Self {
        let mut entries: Vec<Rational> = inst
            .weights
            .iter()
            .map(|&b| Rational::from_int(b as i64))
            .collect();
        entries.push(-Rational::from_int(inst.beta as i64));
        entries.push(Rational::from_int(inst.beta as i64) + Rational::new(1, 2));
        KnapsackWeights {
            w: RatVector::new(entries),
        }
    }

    pub fn vector(&self) -> &RatVector {
        &self.w
    }

    /// Sum of entries over a 1-based index set.
    pub fn subset_sum(&self, s: &BTreeSet<usize>) -> Rational {
        s.iter().map(|&i| self.w[i - 1].clone()).sum()
    }

    /// Right-hand side `beta + 1/4` of the slicing row.
    pub fn rhs(inst: &PartitionInstance) -> Rational {
        Rational::from_int(inst.beta as i64) + Rational::new(1, 4)
    }
}

/// Combinatorial encoding of a gadget vertex: either a hypercube vertex
/// surviving the slice, or the point where the slicing hyperplane meets the
/// cube edge from `e_S` toward `e_S + e_k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum KnapsackVertex {
    Cube(BTreeSet<usize>),
    Sliced(BTreeSet<usize>, usize),
}

impl KnapsackVertex {
    /// Geometric point of this vertex in `d + 2` space.
    pub fn point(&self, inst: &PartitionInstance) -> RatVector {
        let dim = inst.ambient_dim();
        let w = KnapsackWeights::of(inst);
        match self {
            KnapsackVertex::Cube(s) => indicator(dim, s),
            KnapsackVertex::Sliced(s, k) => {
                let alpha = (KnapsackWeights::rhs(inst) - w.subset_sum(s)) / w.w[k - 1].clone();
                let mut p = indicator(dim, s);
                p = p.add(&RatVector::unit(dim, k - 1).scale(&alpha));
                p
            }
        }
    }

    /// Support set, including the sliced coordinate when present.
    pub fn support(&self) -> BTreeSet<usize> {
        match self {
            KnapsackVertex::Cube(s) => s.clone(),
            KnapsackVertex::Sliced(s, k) => {
                let mut t = s.clone();
                t.insert(*k);
                t
            }
        }
    }
}

impl std::fmt::Display for KnapsackVertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KnapsackVertex::Cube(s) => write!(f, "C{:?}", s.iter().collect::<Vec<_>>()),
            KnapsackVertex::Sliced(s, k) => {
                write!(f, "S({:?},{k})", s.iter().collect::<Vec<_>>())
            }
        }
    }
}

fn indicator(dim: usize, s: &BTreeSet<usize>) -> RatVector {
    let mut v = vec![Rational::zero(); dim];
    for &i in s {
        v[i - 1] = Rational::one();
    }
    RatVector::new(v)
}

/// Objective that makes the far endpoint the unique maximizer: all-ones on
/// the first `d + 1` coordinates plus `1/(5 beta)` on the last.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotoneObjective {
    pub c: RatVector,
    pub epsilon: Rational,
}

pub fn monotone_objective(inst: &PartitionInstance) -> MonotoneObjective {
    let dim = inst.ambient_dim();
    let epsilon = Rational::new(1, 5 * inst.beta as i64);
    let mut c = vec![Rational::one(); dim];
    c[dim - 1] = epsilon.clone();
    MonotoneObjective {
        c: RatVector::new(c),
        epsilon,
    }
}

/// Builds the gadget polytope: `2(d+2)` cube rows labeled `lo:i`/`hi:i`
/// plus the slicing row labeled `ks`.
pub fn build_gadget(inst: &PartitionInstance) -> HPolytope {
    let dim = inst.ambient_dim();
    let cube = HPolytope::unit_cube(dim);
    let w = KnapsackWeights::of(inst);
    cube.with_row(w.vector().clone(), KnapsackWeights::rhs(inst), "ks".into())
        .expect("gadget rows are valid")
}

/// All gadget vertices from the closed-form model, in sorted order.
pub fn combinatorial_vertices(inst: &PartitionInstance) -> Vec<KnapsackVertex> {
    let dim = inst.ambient_dim();
    let w = KnapsackWeights::of(inst);
    let rhs = KnapsackWeights::rhs(inst);
    let beta = Rational::from_int(inst.beta as i64);
    let mut out = Vec::new();
    for mask in 0u64..(1 << dim) {
        let s: BTreeSet<usize> = (0..dim)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| i + 1)
            .collect();
        let sum = w.subset_sum(&s);
        if sum <= beta {
            out.push(KnapsackVertex::Cube(s.clone()));
        }
        for k in 1..=dim {
            if s.contains(&k) {
                continue;
            }
            let with_k = &sum + &w.w[k - 1];
            let sandwich = (sum < rhs && rhs < with_k) || (sum > rhs && rhs > with_k);
            if sandwich {
                out.push(KnapsackVertex::Sliced(s.clone(), k));
            }
        }
    }
    out.sort();
    out
}

/// Edge test on the closed-form model. Both arguments must be vertices of
/// the instance; the relation is symmetric.
pub fn combinatorial_adjacent(
    u: &KnapsackVertex,
    v: &KnapsackVertex,
    _inst: &PartitionInstance,
) -> bool {
    use KnapsackVertex::{Cube, Sliced};
    match (u, v) {
        // (a): cube vertices differing in one coordinate.
        (Cube(s), Cube(t)) => sym_diff_size(s, t) == 1,
        // (b): a cube vertex and the slice of an incident cube edge.
        (Cube(s), Sliced(t, k)) | (Sliced(t, k), Cube(s)) => {
            (s == t && !s.contains(k))
                || (t.len() + 1 == s.len() && is_subset(t, s) && {
                    let extra = s.difference(t).next().unwrap();
                    extra == k
                })
        }
        (Sliced(s, i), Sliced(t, j)) => {
            if s == t {
                // (c): two slices out of the same corner.
                i != j
            } else if i == j {
                // (e): parallel slices, support grows by one.
                (s.len() + 1 == t.len() && is_subset(s, t) && !t.contains(i))
                    || (t.len() + 1 == s.len() && is_subset(t, s) && !s.contains(i))
            } else {
                // (d): slice continues across the corner it hits, or
                // (f): two slices into a common corner.
                let d_case = |s: &BTreeSet<usize>, i: &usize, t: &BTreeSet<usize>| {
                    let mut grown = s.clone();
                    grown.insert(*i);
                    &grown == t
                };
                if d_case(s, i, t) || d_case(t, j, s) {
                    true
                } else {
                    // (f): u = (S+i, j), v = (S+j, i) for disjoint i, j.
                    s.contains(j) && t.contains(i) && {
                        let mut su = s.clone();
                        su.remove(j);
                        let mut tv = t.clone();
                        tv.remove(i);
                        su == tv && !su.contains(i) && !su.contains(j)
                    }
                }
            }
        }
    }
}

fn sym_diff_size(a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> usize {
    a.symmetric_difference(b).count()
}

fn is_subset(a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> bool {
    a.is_subset(b)
}

/// The two distinguished vertices whose distance decides the instance:
/// the slice out of the origin along the last coordinate, and the slice out
/// of `e_{[d+1]}` along the last coordinate.
pub fn partition_endpoints(inst: &PartitionInstance) -> (KnapsackVertex, KnapsackVertex) {
    let dim = inst.ambient_dim();
    let start = KnapsackVertex::Sliced(BTreeSet::new(), dim);
    let goal = KnapsackVertex::Sliced((1..dim).collect(), dim);
    debug_assert!(combinatorial_vertices(inst).contains(&start));
    debug_assert!(combinatorial_vertices(inst).contains(&goal));
    (start, goal)
}

/// Everything the distance decision produces, kept for reporting.
#[derive(Clone, Debug)]
pub struct DistanceDecision {
    pub yes: bool,
    pub distance: usize,
    pub threshold: usize,
    pub witness: PathResult,
}

/// Builds the gadget and decides the instance by exact BFS between the
/// distinguished endpoints.
pub fn decide_partition_via_distance(
    inst: &PartitionInstance,
    budget: &Budget,
) -> Result<DistanceDecision> {
    let graph = gadget_graph(inst, budget)?;
    decide_on_graph(inst, &graph)
}

/// Same decision given a prebuilt gadget graph.
pub fn decide_on_graph(
    inst: &PartitionInstance,
    graph: &PolytopeGraph,
) -> Result<DistanceDecision> {
    let (start, goal) = partition_endpoints(inst);
    let s = find_vertex(graph, inst, &start)?;
    let t = find_vertex(graph, inst, &goal)?;
    let (dist, witness) = distance(graph, s, t)?;
    Ok(DistanceDecision {
        yes: dist <= inst.threshold(),
        distance: dist,
        threshold: inst.threshold(),
        witness,
    })
}

/// Monotone variant: decides via the shortest strictly improving path from
/// the start endpoint to the objective maximizer.
#[derive(Clone, Debug)]
pub struct MonotoneDecision {
    pub yes: bool,
    pub length: Option<usize>,
    pub threshold: usize,
    pub tied_edges: usize,
    /// True when the far endpoint is the unique objective maximizer.
    pub unique_max_is_goal: bool,
    pub witness: Option<PathResult>,
}

pub fn decide_partition_via_monotone_distance(
    inst: &PartitionInstance,
    budget: &Budget,
) -> Result<MonotoneDecision> {
    let graph = gadget_graph(inst, budget)?;
    decide_monotone_on_graph(inst, &graph)
}

pub fn decide_monotone_on_graph(
    inst: &PartitionInstance,
    graph: &PolytopeGraph,
) -> Result<MonotoneDecision> {
    let (start, goal) = partition_endpoints(inst);
    let s = find_vertex(graph, inst, &start)?;
    let t = find_vertex(graph, inst, &goal)?;
    let objective = monotone_objective(inst);
    let res = shortest_monotone_path(graph, &objective.c, s);
    let unique_max_is_goal = res.maximizers == vec![t];
    let length = res.path.as_ref().map(PathResult::length);
    Ok(MonotoneDecision {
        yes: length.is_some_and(|l| l <= inst.threshold()),
        length,
        threshold: inst.threshold(),
        tied_edges: res.tied_edges,
        unique_max_is_goal,
        witness: res.path,
    })
}

/// Graph of the gadget polytope.
pub fn gadget_graph(inst: &PartitionInstance, budget: &Budget) -> Result<PolytopeGraph> {
    build_graph(&build_gadget(inst), budget)
}

fn find_vertex(
    graph: &PolytopeGraph,
    inst: &PartitionInstance,
    v: &KnapsackVertex,
) -> Result<usize> {
    let point = v.point(inst);
    graph
        .find_by_point(&point)
        .ok_or_else(|| Error::NotAVertex(v.to_string()))
}

/// Exhaustive subset-sum scan; `Some(S)` with the 1-based indices of a
/// balancing subset, or `None`. Budgeted at `d <= 30`.
pub fn brute_force_partition(inst: &PartitionInstance) -> Result<Option<BTreeSet<usize>>> {
    let d = inst.d();
    if d > 30 {
        return Err(Error::BudgetExceeded(format!(
            "2^{d} subset scan exceeds the d <= 30 budget"
        )));
    }
    for mask in 0u64..(1 << d) {
        let sum: u64 = (0..d)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| inst.weights[i])
            .sum();
        if sum == inst.beta {
            return Ok(Some(
                (0..d)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| i + 1)
                    .collect(),
            ));
        }
    }
    Ok(None)
}

/// Builds the combinatorial graph (adjacency over the closed-form model)
/// for oracle comparisons.
pub fn combinatorial_edges(inst: &PartitionInstance) -> (Vec<KnapsackVertex>, Vec<(usize, usize)>) {
    let verts = combinatorial_vertices(inst);
    let mut edges = Vec::new();
    for i in 0..verts.len() {
        for j in (i + 1)..verts.len() {
            if combinatorial_adjacent(&verts[i], &verts[j], inst) {
                edges.push((i, j));
            }
        }
    }
    (verts, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};
    use proptest::prelude::*;

    fn inst(ws: &[u64]) -> PartitionInstance {
        PartitionInstance::new(ws.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_instances() {
        assert!(matches!(
            PartitionInstance::new(vec![1, 2]),
            Err(Error::OddSum)
        ));
        assert!(matches!(
            PartitionInstance::new(vec![1, 0, 1]),
            Err(Error::NonPositiveWeight(1))
        ));
    }

    #[test]
    fn gadget_shape_for_one_one() {
        let i = inst(&[1, 1]);
        let p = build_gadget(&i);
        assert_eq!(p.dim(), 4);
        assert_eq!(p.rows(), 9);
        let w = KnapsackWeights::of(&i);
        assert_eq!(
            w.vector(),
            &RatVector::new(vec![rat(1), rat(1), rat(-1), ratio(3, 2)])
        );
        assert_eq!(KnapsackWeights::rhs(&i), ratio(5, 4));
    }

    #[test]
    fn gadget_shape_for_two_one_one() {
        let i = inst(&[2, 1, 1]);
        let w = KnapsackWeights::of(&i);
        assert_eq!(
            w.vector(),
            &RatVector::new(vec![rat(2), rat(1), rat(1), rat(-2), ratio(5, 2)])
        );
        assert_eq!(KnapsackWeights::rhs(&i), ratio(9, 4));
    }

    #[test]
    fn empty_set_is_a_cube_vertex() {
        let i = inst(&[1, 1]);
        let verts = combinatorial_vertices(&i);
        assert!(verts.contains(&KnapsackVertex::Cube(BTreeSet::new())));
        // The origin-to-top slice exists: 0 < 5/4 < 3/2.
        assert!(verts.contains(&KnapsackVertex::Sliced(BTreeSet::new(), 4)));
    }

    #[test]
    fn endpoints_and_their_points() {
        let i = inst(&[1, 1]);
        let (s, t) = partition_endpoints(&i);
        assert_eq!(s, KnapsackVertex::Sliced(BTreeSet::new(), 4));
        assert_eq!(t, KnapsackVertex::Sliced([1, 2, 3].into(), 4));
        // alpha = (5/4) / (3/2) = 5/6.
        assert_eq!(
            s.point(&i),
            RatVector::new(vec![rat(0), rat(0), rat(0), ratio(5, 6)])
        );
        let i2 = inst(&[2, 1, 1]);
        let (s2, t2) = partition_endpoints(&i2);
        assert_eq!(s2, KnapsackVertex::Sliced(BTreeSet::new(), 5));
        assert_eq!(t2, KnapsackVertex::Sliced([1, 2, 3, 4].into(), 5));
    }

    #[test]
    fn objective_formula() {
        let i = inst(&[1, 1]);
        let obj = monotone_objective(&i);
        assert_eq!(obj.epsilon, ratio(1, 5));
        assert_eq!(
            obj.c,
            RatVector::new(vec![rat(1), rat(1), rat(1), ratio(1, 5)])
        );
        let i2 = inst(&[2, 1, 1]);
        assert_eq!(monotone_objective(&i2).epsilon, ratio(1, 10));
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(
            brute_force_partition(&inst(&[1, 1])).unwrap(),
            Some([1].into())
        );
        assert_eq!(brute_force_partition(&inst(&[1, 1, 4])).unwrap(), None);
        assert_eq!(
            brute_force_partition(&inst(&[3, 1, 1, 1])).unwrap(),
            Some([1].into())
        );
    }

    #[test]
    fn adjacency_cases() {
        let i = inst(&[1, 1]);
        use KnapsackVertex::{Cube, Sliced};
        // (a)
        assert!(combinatorial_adjacent(
            &Cube(BTreeSet::new()),
            &Cube([1].into()),
            &i
        ));
        assert!(!combinatorial_adjacent(
            &Cube(BTreeSet::new()),
            &Cube([1, 2].into()),
            &i
        ));
        // (b)
        assert!(combinatorial_adjacent(
            &Cube(BTreeSet::new()),
            &Sliced(BTreeSet::new(), 4),
            &i
        ));
        // (e)
        assert!(combinatorial_adjacent(
            &Sliced(BTreeSet::new(), 4),
            &Sliced([1].into(), 4),
            &i
        ));
        // Not adjacent: support jumps by two.
        assert!(!combinatorial_adjacent(
            &Sliced(BTreeSet::new(), 4),
            &Sliced([1, 2].into(), 4),
            &i
        ));
    }

    #[test]
    fn distance_decision_small_yes() {
        let i = inst(&[1, 1]);
        let d = decide_partition_via_distance(&i, &Budget::default()).unwrap();
        assert!(d.yes);
        assert_eq!(d.distance, 3);
        assert_eq!(d.threshold, 3);
    }

    #[test]
    fn distance_decision_small_no() {
        let i = inst(&[1, 1, 4]);
        let d = decide_partition_via_distance(&i, &Budget::default()).unwrap();
        assert!(!d.yes);
        assert!(d.distance >= 5, "got {}", d.distance);
    }

    #[test]
    fn monotone_matches_distance_on_examples() {
        for ws in [&[1u64, 1][..], &[1, 1, 4], &[3, 1, 1, 1]] {
            let i = inst(ws);
            let d = decide_partition_via_distance(&i, &Budget::default()).unwrap();
            let m = decide_partition_via_monotone_distance(&i, &Budget::default()).unwrap();
            assert_eq!(d.yes, m.yes, "weights {ws:?}");
            assert!(m.unique_max_is_goal);
            let brute = brute_force_partition(&i).unwrap();
            assert_eq!(d.yes, brute.is_some());
        }
    }

    #[test]
    fn gadget_two_one_one_is_simple() {
        let p = build_gadget(&inst(&[2, 1, 1]));
        assert!(
            crate::polytope::is_simple(&p, &Budget::default())
                .unwrap()
                .simple
        );
    }

    #[test]
    fn tight_witness_paths_climb_through_sliced_vertices() {
        // Whenever the distance lands exactly on the threshold, the witness
        // path runs through slices along the last coordinate with strictly
        // growing support.
        for ws in [&[1u64, 1][..], &[3, 1, 1, 1], &[2, 1, 1]] {
            let i = inst(ws);
            let d = decide_partition_via_distance(&i, &Budget::default()).unwrap();
            assert!(d.yes && d.distance == i.threshold());
            let graph = gadget_graph(&i, &Budget::default()).unwrap();
            let dim = i.ambient_dim();
            let mut prev_support: Option<usize> = None;
            for &node in &d.witness.nodes {
                let point = &graph.node(node).point;
                // The last coordinate is fractional: a sliced vertex.
                let last = &point[dim - 1];
                assert!(!last.is_integer(), "witness leaves the sliced chain");
                let support = (0..dim - 1).filter(|&j| !point[j].is_zero()).count();
                if let Some(p) = prev_support {
                    assert_eq!(support, p + 1, "support must grow by one");
                }
                prev_support = Some(support);
            }
        }
    }

    #[test]
    fn chain_of_growing_supports_is_objective_monotone() {
        // For nested S inside T, the slice at S scores strictly below the
        // slice at T, whenever both are vertices. Checked exhaustively.
        for ws in [&[1u64, 1][..], &[2, 1, 1], &[1, 1, 1, 1]] {
            let i = inst(ws);
            let c = monotone_objective(&i).c;
            let dim = i.ambient_dim();
            let verts = combinatorial_vertices(&i);
            let sliced: Vec<&KnapsackVertex> = verts
                .iter()
                .filter(|v| matches!(v, KnapsackVertex::Sliced(_, k) if *k == dim))
                .collect();
            for a in &sliced {
                for b in &sliced {
                    let (KnapsackVertex::Sliced(s, _), KnapsackVertex::Sliced(t, _)) = (a, b)
                    else {
                        unreachable!()
                    };
                    if s.is_subset(t) && s != t {
                        assert!(c.dot(&a.point(&i)) < c.dot(&b.point(&i)));
                    }
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        // Every closed-form vertex is a point of the gadget lying on
        // exactly dim rows, so the model certifies simplicity on its own.
        #[test]
        fn model_vertices_are_simple_gadget_points(
            ws in proptest::collection::vec(1u64..=6, 2..=4),
        ) {
            let mut ws = ws;
            if ws.iter().sum::<u64>() % 2 == 1 {
                ws[0] += 1;
            }
            let i = PartitionInstance::new(ws).unwrap();
            let p = build_gadget(&i);
            for v in combinatorial_vertices(&i) {
                let x = v.point(&i);
                prop_assert!(p.contains(&x));
                prop_assert_eq!(p.tight_labels(&x).len(), p.dim());
            }
        }

        // Adjacent model vertices change support size by at most one.
        #[test]
        fn model_edges_grow_support_slowly(
            ws in proptest::collection::vec(1u64..=5, 2..=3),
        ) {
            let mut ws = ws;
            if ws.iter().sum::<u64>() % 2 == 1 {
                ws[0] += 1;
            }
            let i = PartitionInstance::new(ws).unwrap();
            let (verts, edges) = combinatorial_edges(&i);
            for (a, b) in edges {
                let sa = verts[a].support().len() as i64;
                let sb = verts[b].support().len() as i64;
                prop_assert!((sa - sb).abs() <= 1);
            }
        }
    }

    #[test]
    fn no_partition_forces_long_pivots() {
        // With no balanced subset, even the monotone route needs strictly
        // more than threshold steps from the start slice.
        let i = inst(&[1, 1, 4]);
        let m = decide_partition_via_monotone_distance(&i, &Budget::default()).unwrap();
        assert!(!m.yes);
        assert!(m.length.unwrap() >= 5, "got {:?}", m.length);

        let graph = gadget_graph(&i, &Budget::default()).unwrap();
        let (start, _) = partition_endpoints(&i);
        let basis = graph
            .node(graph.find_by_point(&start.point(&i)).unwrap())
            .basis
            .clone();
        let pivots =
            crate::graph::pivot_distance(&graph, &monotone_objective(&i).c, &basis).unwrap();
        assert!(pivots >= 5);
        assert_eq!(Some(pivots), m.length);
    }
}
