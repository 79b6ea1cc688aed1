//! Simple lifted extensions with an apex over an interior point, and greedy
//! short paths.
//!
//! From a simple polytope `A x <= b` with a ball around `o` strictly inside,
//! the lift `{(x, z) : A x + y z <= b, z >= 0}` is built one row at a time.
//! The first d+1 rows pass through the apex `(o, 1)` exactly; every later
//! row gets a positive coefficient `y_k`, found by halving search, such that
//! the new positive-height vertices land strictly farther from the apex than
//! everything created before. That layering makes "step to the neighbor
//! closest to the apex" reach the apex from anywhere in at most
//! `rows - dim` steps, so any two vertices connect through the apex in at
//! most twice that.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{build_graph, PathResult, PolytopeGraph};
use crate::linalg::{RatMatrix, RatVector};
use crate::polytope::{enumerate_feasible_bases, Budget, HPolytope};
use crate::rational::Rational;

/// Ball `B(center, sqrt(radius2))` kept as exact squared radius.
#[derive(Clone, Debug)]
pub struct InteriorBall {
    pub center: RatVector,
    pub radius2: Rational,
}

impl InteriorBall {
    pub fn new(center: RatVector, radius2: Rational) -> Result<Self> {
        if !radius2.is_positive() {
            return Err(Error::BallNotInterior("radius must be positive".into()));
        }
        Ok(InteriorBall { center, radius2 })
    }

    /// Exact containment check: for every row, positive slack and
    /// `slack^2 >= radius2 * |A_k|^2`.
    pub fn check_inside(&self, p: &HPolytope) -> Result<()> {
        if self.center.dim() != p.dim() {
            return Err(Error::BallNotInterior("center dimension mismatch".into()));
        }
        for i in 0..p.rows() {
            let slack = p.slack(i, &self.center);
            if !slack.is_positive() {
                return Err(Error::BallNotInterior(format!(
                    "center violates or touches row {:?}",
                    p.labels()[i]
                )));
            }
            let norm2 = p.matrix().row(i).norm2();
            if slack.square() < &self.radius2 * &norm2 {
                return Err(Error::BallNotInterior(format!(
                    "ball pokes through row {:?}",
                    p.labels()[i]
                )));
            }
        }
        Ok(())
    }
}

/// The lifted polytope with its graph, apex, lift coefficients, and layer
/// assignment.
#[derive(Clone, Debug)]
pub struct RockExtension {
    q: HPolytope,
    graph: PolytopeGraph,
    apex: usize,
    apex_point: RatVector,
    /// Lift coefficient per original row, in the original row order.
    y: RatVector,
    /// Per node: the number of original rows present when the vertex first
    /// appeared (d+1 for the apex) or rows+1 for height-zero vertices.
    layer: Vec<usize>,
    radius2: Rational,
}

impl RockExtension {
    pub fn polytope(&self) -> &HPolytope {
        &self.q
    }

    pub fn graph(&self) -> &PolytopeGraph {
        &self.graph
    }

    pub fn apex(&self) -> usize {
        self.apex
    }

    pub fn apex_point(&self) -> &RatVector {
        &self.apex_point
    }

    pub fn lift_coefficients(&self) -> &RatVector {
        &self.y
    }

    pub fn ball_radius2(&self) -> &Rational {
        &self.radius2
    }

    pub fn layer_of(&self, node: usize) -> usize {
        self.layer[node]
    }

    pub fn layers(&self) -> &[usize] {
        &self.layer
    }

    /// Hirsch-style step bound for greedy walks: `rows - dim` of the lift.
    pub fn step_bound(&self) -> usize {
        self.q.rows() - self.q.dim()
    }

    /// Serializable layer map keyed by node index.
    pub fn layer_map(&self) -> BTreeMap<usize, usize> {
        self.layer.iter().copied().enumerate().collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GreedyWalk {
    pub path: PathResult,
    /// Ties broken toward the smallest basis; should never fire on a valid
    /// extension.
    pub tie_breaks: usize,
}

fn lifted_row(row: &RatVector, y_k: &Rational) -> RatVector {
    let mut v = row.entries().to_vec();
    v.push(y_k.clone());
    RatVector::new(v)
}

/// Positive-height vertex points of the polyhedron given by the selected
/// lifted rows plus the floor row. Boundedness is not assumed; feasible
/// bases exist regardless.
fn positive_height_vertices(
    rows: &[(RatVector, Rational, String)],
    dim: usize,
) -> Result<Vec<RatVector>> {
    let mut mat_rows: Vec<RatVector> = rows.iter().map(|(r, _, _)| r.clone()).collect();
    let mut rhs: Vec<Rational> = rows.iter().map(|(_, b, _)| b.clone()).collect();
    let mut labels: Vec<String> = rows.iter().map(|(_, _, l)| l.clone()).collect();
    mat_rows.push(RatVector::unit(dim, dim - 1).scale(&Rational::from_int(-1)));
    rhs.push(Rational::zero());
    labels.push("z".into());
    let p = HPolytope::new(RatMatrix::new(mat_rows), RatVector::new(rhs), labels)?;
    let budget = Budget::default();
    let bases = enumerate_feasible_bases(&p, &budget)?;
    let mut out: Vec<RatVector> = Vec::new();
    for (_, x) in bases {
        if x[dim - 1].is_positive() && !out.contains(&x) {
            out.push(x);
        }
    }
    Ok(out)
}

/// Builds the lift. Fails with `LayeringFailed` when no rational lift
/// coefficient passes validation within the halving budget; the failure is
/// surfaced, never silently accepted.
pub fn build_rock_extension(
    p: &HPolytope,
    ball: &InteriorBall,
    budget: &Budget,
) -> Result<RockExtension> {
    ball.check_inside(p)?;
    let base_graph = build_graph(p, budget)?;
    let d = p.dim();
    let m = p.rows();
    let o = &ball.center;

    // Apex slack per row; the first d+1 chosen rows pass through (o, 1).
    let slacks: Vec<Rational> = (0..m).map(|i| p.slack(i, o)).collect();

    let mut apex_point = o.entries().to_vec();
    apex_point.push(Rational::one());
    let apex_point = RatVector::new(apex_point);

    // Initial row set: first (d+1)-subset whose lifted rows are invertible,
    // then the remaining rows in their given order. A subset failing later
    // layering is abandoned and the next one is tried.
    let subsets = initial_subsets(p, &slacks, d);
    if subsets.is_empty() {
        return Err(Error::LayeringFailed { row: 0 });
    }
    let mut last_failure = Error::LayeringFailed { row: 0 };
    for subset in subsets.into_iter().take(100) {
        match try_build(p, ball, &subset, &slacks, &apex_point) {
            Ok((y, layer_points)) => {
                return finish_build(p, ball, budget, &base_graph, y, layer_points, &apex_point)
            }
            Err(e) => last_failure = e,
        }
    }
    Err(last_failure)
}

fn initial_subsets(p: &HPolytope, slacks: &[Rational], d: usize) -> Vec<Vec<usize>> {
    let m = p.rows();
    let mut out = Vec::new();
    let mut combo: Vec<usize> = (0..=d).collect();
    loop {
        let rows: Vec<RatVector> = combo
            .iter()
            .map(|&i| lifted_row(p.matrix().row(i), &slacks[i]))
            .collect();
        let mat = RatMatrix::new(rows);
        if crate::linalg::rank(&mat) == d + 1 {
            out.push(combo.clone());
        }
        // Lexicographic successor over (d+1)-subsets of [m].
        let mut i = combo.len();
        let mut advanced = false;
        while i > 0 {
            i -= 1;
            if combo[i] < m - combo.len() + i {
                combo[i] += 1;
                for j in (i + 1)..combo.len() {
                    combo[j] = combo[j - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    out
}

type LayerPoints = Vec<(RatVector, usize)>;

/// Runs the inductive row-adding process for one initial subset. Returns
/// the lift coefficients (original row order) and every positive-height
/// vertex with the layer at which it appeared.
fn try_build(
    p: &HPolytope,
    _ball: &InteriorBall,
    initial: &[usize],
    slacks: &[Rational],
    apex_point: &RatVector,
) -> Result<(RatVector, LayerPoints)> {
    let d = p.dim();
    let m = p.rows();
    let mut y: Vec<Option<Rational>> = vec![None; m];
    for &i in initial {
        y[i] = Some(slacks[i].clone());
    }

    let mut chosen: Vec<(RatVector, Rational, String)> = initial
        .iter()
        .map(|&i| {
            (
                lifted_row(p.matrix().row(i), &slacks[i]),
                p.rhs()[i].clone(),
                p.labels()[i].clone(),
            )
        })
        .collect();

    let dist2 = |x: &RatVector| x.sub(apex_point).norm2();

    // The initial lift must see exactly the apex above the floor.
    let start = positive_height_vertices(&chosen, d + 1)?;
    if start.len() != 1 || &start[0] != apex_point {
        return Err(Error::LayeringFailed { row: initial[0] });
    }
    let mut known: LayerPoints = vec![(apex_point.clone(), d + 1)];
    let mut watermark = Rational::zero();

    let remaining: Vec<usize> = (0..m).filter(|i| !initial.contains(i)).collect();
    let mut layer = d + 1;
    for &k in &remaining {
        layer += 1;
        // Strict ceiling keeping every known vertex strictly feasible.
        let mut ceiling = slacks[k].clone();
        for (x, _) in &known {
            let z = &x[d];
            let s = &p.rhs()[k]
                - &p.matrix()
                    .row(k)
                    .dot(&RatVector::new(x.entries()[..d].to_vec()));
            if !s.is_positive() {
                return Err(Error::LayeringFailed { row: k });
            }
            let limit = &s / z;
            if limit < ceiling {
                ceiling = limit;
            }
        }
        if !ceiling.is_positive() {
            return Err(Error::LayeringFailed { row: k });
        }

        let mut candidate = ceiling.half();
        let mut accepted = false;
        for _ in 0..64 {
            let mut trial = chosen.clone();
            trial.push((
                lifted_row(p.matrix().row(k), &candidate),
                p.rhs()[k].clone(),
                p.labels()[k].clone(),
            ));
            if let Some(new_points) = validate_layer(&trial, d, &known, &watermark, &dist2)? {
                let mut new_watermark = watermark.clone();
                for x in &new_points {
                    let dx = dist2(x);
                    if dx > new_watermark {
                        new_watermark = dx;
                    }
                    known.push((x.clone(), layer));
                }
                watermark = new_watermark;
                chosen = trial;
                y[k] = Some(candidate.clone());
                accepted = true;
                break;
            }
            candidate = candidate.half();
        }
        if !accepted {
            return Err(Error::LayeringFailed { row: k });
        }
    }

    let y = RatVector::new(y.into_iter().map(Option::unwrap).collect());
    Ok((y, known))
}

/// Checks one candidate coefficient: no earlier positive-height vertex may
/// be lost, and every new one must sit strictly beyond the watermark.
/// Returns the new vertex points on success.
fn validate_layer(
    trial: &[(RatVector, Rational, String)],
    d: usize,
    known: &LayerPoints,
    watermark: &Rational,
    dist2: &impl Fn(&RatVector) -> Rational,
) -> Result<Option<Vec<RatVector>>> {
    let points = positive_height_vertices(trial, d + 1)?;
    for (x, _) in known {
        if !points.contains(x) {
            return Ok(None);
        }
    }
    let mut fresh = Vec::new();
    for x in points {
        if known.iter().any(|(k, _)| k == &x) {
            continue;
        }
        if !(dist2(&x) > *watermark) {
            return Ok(None);
        }
        fresh.push(x);
    }
    Ok(Some(fresh))
}

fn finish_build(
    p: &HPolytope,
    ball: &InteriorBall,
    budget: &Budget,
    base_graph: &PolytopeGraph,
    y: RatVector,
    layer_points: LayerPoints,
    apex_point: &RatVector,
) -> Result<RockExtension> {
    let d = p.dim();
    let m = p.rows();

    let mut rows: Vec<RatVector> = (0..m)
        .map(|i| lifted_row(p.matrix().row(i), &y[i]))
        .collect();
    rows.push(RatVector::unit(d + 1, d).scale(&Rational::from_int(-1)));
    let mut rhs: Vec<Rational> = p.rhs().entries().to_vec();
    rhs.push(Rational::zero());
    let mut labels: Vec<String> = p.labels().to_vec();
    labels.push("z".into());
    let q = HPolytope::new(RatMatrix::new(rows), RatVector::new(rhs), labels)?;

    // Simplicity stands in for the nondegeneracy assumptions of the input.
    let graph = build_graph(&q, budget)?;

    // Layer assignment and structural checks by full enumeration.
    let mut layer = vec![0usize; graph.node_count()];
    let mut apex = None;
    for (i, node) in graph.nodes().iter().enumerate() {
        let z = &node.point[d];
        if z.is_zero() {
            layer[i] = m + 1;
            continue;
        }
        let found = layer_points
            .iter()
            .find(|(x, _)| x == &node.point)
            .ok_or_else(|| {
                Error::Internal(format!(
                    "positive-height vertex {:?} missing from construction record",
                    node.point
                ))
            })?;
        layer[i] = found.1;
        if &node.point == apex_point {
            apex = Some(i);
        }
    }
    let apex = apex.ok_or(Error::Internal("apex is not a vertex".into()))?;
    if layer[apex] != d + 1 {
        return Err(Error::Internal("apex is not the first layer".into()));
    }
    // No recorded vertex may have been lost either.
    let vertex_count_positive = layer.iter().filter(|&&k| k <= m).count();
    if vertex_count_positive != layer_points.len() {
        return Err(Error::Internal(
            "recorded layer points disagree with enumeration".into(),
        ));
    }

    // Nothing may sit strictly above the apex. Exact height ties do occur:
    // whenever the apex's tangent rows contain an antipodal facet pair (as
    // on boxes), the pair's lifted hyperplanes meet in a level edge at the
    // apex height, ending in a second vertex at that height.
    let apex_z = &graph.node(apex).point[d];
    for (i, node) in graph.nodes().iter().enumerate() {
        if i != apex && &node.point[d] > apex_z {
            return Err(Error::Internal(format!(
                "vertex {:?} rises above the apex",
                node.point
            )));
        }
    }

    // Every base vertex is an original vertex with height zero, and vice
    // versa; each has a positive-height neighbor.
    let base_nodes: Vec<usize> = (0..graph.node_count())
        .filter(|&i| layer[i] == m + 1)
        .collect();
    if base_nodes.len() != base_graph.node_count() {
        return Err(Error::Internal(
            "base layer does not match the original vertex set".into(),
        ));
    }
    for &i in &base_nodes {
        let pt = &graph.node(i).point;
        let projected = RatVector::new(pt.entries()[..d].to_vec());
        if base_graph.find_by_point(&projected).is_none() {
            return Err(Error::Internal(format!(
                "base vertex {projected:?} is not a vertex of the input"
            )));
        }
        if !graph
            .neighbors(i)
            .iter()
            .any(|&u| graph.node(u).point[d].is_positive())
        {
            return Err(Error::Internal(format!(
                "base vertex {projected:?} has no climbing neighbor"
            )));
        }
    }

    // Layer separation, re-verified on the final vertex set.
    let dist2 = |x: &RatVector| x.sub(apex_point).norm2();
    let mut per_layer: BTreeMap<usize, (Option<Rational>, Option<Rational>)> = BTreeMap::new();
    for (i, node) in graph.nodes().iter().enumerate() {
        if layer[i] > m {
            continue;
        }
        let d2 = dist2(&node.point);
        let entry = per_layer.entry(layer[i]).or_insert((None, None));
        if entry.0.as_ref().is_none_or(|lo| d2 < *lo) {
            entry.0 = Some(d2.clone());
        }
        if entry.1.as_ref().is_none_or(|hi| d2 > *hi) {
            entry.1 = Some(d2);
        }
    }
    let mut prev_max: Option<Rational> = None;
    for (_, (lo, hi)) in per_layer {
        if let (Some(prev), Some(lo)) = (&prev_max, &lo) {
            if lo <= prev {
                return Err(Error::Internal("layer separation violated".into()));
            }
        }
        prev_max = hi;
    }

    Ok(RockExtension {
        q,
        graph,
        apex,
        apex_point: apex_point.clone(),
        y,
        layer,
        radius2: ball.radius2.clone(),
    })
}

/// Walks from `start` to the apex, always stepping to the strictly closest
/// neighbor in exact squared distance.
pub fn greedy_path_to_apex(rock: &RockExtension, start: usize) -> Result<GreedyWalk> {
    let g = rock.graph();
    let apex = rock.apex();
    let dist2 = |i: usize| g.node(i).point.sub(rock.apex_point()).norm2();

    let mut nodes = vec![start];
    let mut tie_breaks = 0;
    let mut current = start;
    let limit = g.node_count() + 1;
    while current != apex {
        if nodes.len() > limit {
            return Err(Error::GreedyStuck { node: current });
        }
        let here = dist2(current);
        let mut best: Option<(Rational, usize)> = None;
        let mut tied = false;
        for &u in g.neighbors(current) {
            let du = dist2(u);
            match &best {
                None => best = Some((du, u)),
                Some((bd, bu)) => {
                    if du < *bd {
                        best = Some((du, u));
                        tied = false;
                    } else if du == *bd {
                        tied = true;
                        if g.node(u).basis < g.node(*bu).basis {
                            best = Some((du, u));
                        }
                    }
                }
            }
        }
        let (bd, bu) = best.ok_or(Error::GreedyStuck { node: current })?;
        if bd >= here {
            return Err(Error::GreedyStuck { node: current });
        }
        if tied {
            tie_breaks += 1;
        }
        nodes.push(bu);
        current = bu;
    }
    Ok(GreedyWalk {
        path: PathResult { nodes },
        tie_breaks,
    })
}

/// Connects two vertices through the apex: the greedy walk from `u`
/// followed by the reverse of the greedy walk from `v`.
pub fn path_between(rock: &RockExtension, u: usize, v: usize) -> Result<GreedyWalk> {
    if u == v {
        return Ok(GreedyWalk {
            path: PathResult { nodes: vec![u] },
            tie_breaks: 0,
        });
    }
    let up = greedy_path_to_apex(rock, u)?;
    let down = greedy_path_to_apex(rock, v)?;
    let mut nodes = up.path.nodes;
    nodes.extend(down.path.nodes.into_iter().rev().skip(1));
    Ok(GreedyWalk {
        path: PathResult { nodes },
        tie_breaks: up.tie_breaks + down.tie_breaks,
    })
}

/// The unique height-maximal vertex of a lifted polytope, by enumeration.
pub fn find_apex_by_enumeration(q: &HPolytope, budget: &Budget) -> Result<RatVector> {
    let bases = enumerate_feasible_bases(q, budget)?;
    if bases.is_empty() {
        return Err(Error::NonUniqueMax);
    }
    let d = q.dim();
    let mut best: Option<RatVector> = None;
    let mut unique = true;
    for (_, x) in bases {
        match &best {
            None => best = Some(x),
            Some(b) => {
                if x[d - 1] > b[d - 1] {
                    best = Some(x);
                    unique = true;
                } else if x[d - 1] == b[d - 1] && x != *b {
                    unique = false;
                }
            }
        }
    }
    if !unique {
        return Err(Error::NonUniqueMax);
    }
    Ok(best.unwrap())
}
