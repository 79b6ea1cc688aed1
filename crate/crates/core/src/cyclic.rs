//! Repeated siloing with cyclically rotated orders, and the reduction that
//! turns a two-vertex distance question into a diameter question.
//!
//! Building a silo on a peak, then on the new peak, r*d times — rotating
//! the cutting order by one position each round — pushes the final peak to
//! distance exactly r*d*(d-1) beyond the start vertex while keeping every
//! pair of tower vertices close. Doing this at two vertices u and v yields
//! a polytope whose diameter equals the original distance between u and v
//! plus 2*r*d*(d-1), attained by the two final peaks, provided r is at
//! least max(diam, 6).

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{diameter, distance, PolytopeGraph};
use crate::linalg::RatVector;
use crate::polytope::{Budget, FeasibleBasis, HPolytope, Label};
use crate::rational::EncodingLength;
use crate::silo::{silo_tracked, SiloRecord};
use crate::truncate::{StepEncoding, TrackedPolytope, Validation};

/// Reduces `z` into `1..=d`.
fn wrap(z: i64, d: usize) -> usize {
    let d = d as i64;
    (((z - 1) % d + d) % d + 1) as usize
}

/// Full bookkeeping of one cyclic siloing.
#[derive(Clone, Debug)]
pub struct CyclicSiloRecord {
    pub r: usize,
    pub d: usize,
    /// Label prefix of every row added by this operation.
    pub tag: String,
    /// Basis of the vertex the operation started at.
    pub initial_vertex: FeasibleBasis,
    /// Peak basis after silo step j, for j = 1..=r*d.
    pub peaks: Vec<FeasibleBasis>,
    /// Neighbor enumerations: entry j (0-based) holds the ordered neighbors
    /// of peak j, for j = 0..=r*d.
    pub neighbor_seqs: Vec<Vec<FeasibleBasis>>,
    /// Ground markers: entry j-1 holds `u_{1,j}..u_{d,j}` for j = 1..=r*d.
    pub layer_markers: Vec<Vec<FeasibleBasis>>,
    /// Cutting orders used, one per silo step.
    pub orders: Vec<Vec<Label>>,
    /// Per-silo construction records.
    pub silo_records: Vec<SiloRecord>,
    /// Encoding sizes after each of the r*d*d cuts.
    pub encodings: Vec<StepEncoding>,
    /// Encoding length of the polytope the operation started from.
    pub base_encoding: usize,
    /// Intermediate polytopes after each silo step, kept only when the
    /// operation runs in retaining mode.
    pub intermediates: Vec<HPolytope>,
}

impl CyclicSiloRecord {
    pub fn final_peak(&self) -> &FeasibleBasis {
        self.peaks.last().expect("at least one silo step")
    }

    /// Ground layer `u_{1,1}..u_{d,1}`.
    pub fn ground_layer(&self) -> &[FeasibleBasis] {
        &self.layer_markers[0]
    }

    /// True when `label` names a row added by this operation.
    pub fn owns_label(&self, label: &str) -> bool {
        label.starts_with(&format!("{}:", self.tag))
    }

    /// Indices of the graph nodes inside this cyclic silo (all vertices not
    /// present before the operation).
    pub fn silo_node_indices(&self, graph: &PolytopeGraph) -> Vec<usize> {
        (0..graph.node_count())
            .filter(|&i| {
                graph
                    .node(i)
                    .basis
                    .labels()
                    .iter()
                    .any(|l| self.owns_label(l))
            })
            .collect()
    }
}

/// BFS distances from `start` restricted to `allowed` nodes; `usize::MAX`
/// marks unreachable-within-the-set.
pub fn bfs_restricted(graph: &PolytopeGraph, allowed: &[usize], start: usize) -> Vec<usize> {
    let mut inside = vec![false; graph.node_count()];
    for &i in allowed {
        inside[i] = true;
    }
    assert!(inside[start], "start node must be in the allowed set");
    let mut dist = vec![usize::MAX; graph.node_count()];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &v in graph.neighbors(u) {
            if inside[v] && dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Builds the r-fold cyclic siloing of `tracked` at `node`. New rows are
/// labeled `tag:j:k` for silo step j and cut k. Only the final polytope is
/// kept.
pub fn cyclic_silo_tracked(
    tracked: &TrackedPolytope,
    node: usize,
    r: usize,
    tag: &str,
) -> Result<(TrackedPolytope, CyclicSiloRecord)> {
    cyclic_silo_impl(tracked, node, r, tag, false)
}

/// Same, retaining every intermediate polytope in the record.
pub fn cyclic_silo_retaining(
    tracked: &TrackedPolytope,
    node: usize,
    r: usize,
    tag: &str,
) -> Result<(TrackedPolytope, CyclicSiloRecord)> {
    cyclic_silo_impl(tracked, node, r, tag, true)
}

fn cyclic_silo_impl(
    tracked: &TrackedPolytope,
    node: usize,
    r: usize,
    tag: &str,
    retain: bool,
) -> Result<(TrackedPolytope, CyclicSiloRecord)> {
    let d = tracked.polytope().dim();
    if d < 3 {
        return Err(Error::DimensionTooSmall { needed: 3, got: d });
    }
    if r == 0 {
        return Err(Error::InvalidPolytope("r must be positive".into()));
    }
    let base_encoding = tracked.polytope().encoding_length();
    let initial_vertex = tracked.graph().node(node).basis.clone();

    // Initial neighbor enumeration: ordered by the leaving label.
    let first_neighbors = ordered_neighbors_by_leaving_label(tracked.graph(), node)?;

    let mut record = CyclicSiloRecord {
        r,
        d,
        tag: tag.to_string(),
        initial_vertex: initial_vertex.clone(),
        peaks: Vec::new(),
        neighbor_seqs: vec![first_neighbors],
        layer_markers: Vec::new(),
        orders: Vec::new(),
        silo_records: Vec::new(),
        encodings: Vec::new(),
        base_encoding,
        intermediates: Vec::new(),
    };

    let mut current = tracked.clone();
    let mut peak_basis = initial_vertex;
    for j in 1..=(r * d) {
        let peak_node = current
            .find_by_basis(&peak_basis)
            .ok_or_else(|| Error::RecordInconsistent(format!("peak {peak_basis} missing")))?;

        // Leaving label of each enumerated neighbor, i.e. the basis element
        // of the peak not shared with it.
        let neighbors = record.neighbor_seqs[j - 1].clone();
        let mut leaving: Vec<Label> = Vec::with_capacity(d);
        for nb in &neighbors {
            let ls: Vec<&Label> = peak_basis
                .labels()
                .iter()
                .filter(|l| !nb.contains(l))
                .collect();
            if ls.len() != 1 {
                return Err(Error::RecordInconsistent(format!(
                    "neighbor {nb} does not drop exactly one element of {peak_basis}"
                )));
            }
            leaving.push(ls[0].clone());
        }

        // Rotated order: position t cuts b_{wrap(j + t)}.
        let order: Vec<Label> = (0..d)
            .map(|t| leaving[wrap(j as i64 + t as i64, d) - 1].clone())
            .collect();

        let prefix = format!("{tag}:{j}");
        let out = silo_tracked(&current, peak_node, &order, &prefix, Validation::Full)?;
        current = out.tracked;
        let silo_rec = out.record;
        record.encodings.extend(silo_rec.encodings.iter().copied());
        record.orders.push(order);

        // Markers from the tower coordinates, re-indexed by the rotation.
        let mut markers = Vec::with_capacity(d);
        let mut next_neighbors = Vec::with_capacity(d);
        for i in 1..=d {
            let marker = if i == wrap(j as i64, d) {
                silo_rec.tower_basis(1, 2)
            } else {
                silo_rec.tower_basis(wrap(i as i64 - j as i64 + 1, d), 1)
            };
            markers.push(marker);
            let top = if i == wrap(j as i64 - 1, d) {
                silo_rec.tower_basis(d, d - 1)
            } else {
                silo_rec.tower_basis(wrap(i as i64 - j as i64 + 1, d), d)
            };
            next_neighbors.push(top);
        }

        // Every enumerated neighbor of the old peak must touch its marker.
        let g = current.graph();
        for i in 0..d {
            let a = g.find_by_basis(&neighbors[i]).ok_or_else(|| {
                Error::RecordInconsistent(format!("neighbor {} vanished", neighbors[i]))
            })?;
            let b = g.find_by_basis(&markers[i]).ok_or_else(|| {
                Error::RecordInconsistent(format!("marker {} missing", markers[i]))
            })?;
            if !g.neighbors(a).contains(&b) {
                return Err(Error::RecordInconsistent(format!(
                    "neighbor {} and marker {} are not adjacent at step {j}",
                    neighbors[i], markers[i]
                )));
            }
        }

        // The enumerated tower tops must be exactly the new peak's neighbors.
        let new_peak = silo_rec.peak.clone();
        let peak_idx = g
            .find_by_basis(&new_peak)
            .ok_or_else(|| Error::RecordInconsistent("new peak missing".into()))?;
        let mut actual: Vec<usize> = g.neighbors(peak_idx).to_vec();
        let mut expected: Vec<usize> = next_neighbors
            .iter()
            .map(|b| g.find_by_basis(b).expect("tower top exists"))
            .collect();
        actual.sort_unstable();
        expected.sort_unstable();
        if actual != expected {
            return Err(Error::RecordInconsistent(format!(
                "peak neighbors disagree with tower tops at step {j}"
            )));
        }

        record.layer_markers.push(markers);
        record.neighbor_seqs.push(next_neighbors);
        record.peaks.push(new_peak.clone());
        record.silo_records.push(silo_rec);
        if retain {
            record.intermediates.push(current.polytope().clone());
        }
        peak_basis = new_peak;
    }

    Ok((current, record))
}

/// Polytope-level wrapper for a single cyclic siloing.
pub fn cyclic_silo(
    p: &HPolytope,
    point: &RatVector,
    r: usize,
    budget: &Budget,
) -> Result<(HPolytope, TrackedPolytope, CyclicSiloRecord)> {
    let tracked = TrackedPolytope::from_polytope(p, budget)?;
    let node = tracked
        .find_by_point(point)
        .ok_or_else(|| Error::NotAVertex(format!("{point:?}")))?;
    let (out, record) = cyclic_silo_tracked(&tracked, node, r, "y")?;
    Ok((out.polytope().clone(), out, record))
}

/// Distance facts about a finished cyclic silo, all verified by restricted
/// BFS inside the silo subgraph.
#[derive(Clone, Debug, Serialize)]
pub struct SiloDistanceReport {
    /// Marker-to-top distance at or below d-2, for every step and index.
    pub markers_reach_tops: bool,
    /// Largest pairwise distance within the ground layer (at most 3).
    pub ground_layer_max_distance: usize,
    pub ground_layer_ok: bool,
}

pub fn verify_silo_distances(
    record: &CyclicSiloRecord,
    graph: &PolytopeGraph,
) -> Result<SiloDistanceReport> {
    let allowed = record.silo_node_indices(graph);
    let d = record.d;
    let idx = |b: &FeasibleBasis| -> Result<usize> {
        graph
            .find_by_basis(b)
            .ok_or_else(|| Error::RecordInconsistent(format!("{b} missing")))
    };

    let mut markers_reach_tops = true;
    for j in 1..=(record.r * d) {
        let markers = &record.layer_markers[j - 1];
        let tops = &record.neighbor_seqs[j];
        for i in 1..=d {
            let dist = bfs_restricted(graph, &allowed, idx(&markers[i - 1])?);
            // u_{i,j} reaches v_{i,j} within d-2.
            if dist[idx(&tops[i - 1])?] > d - 2 {
                markers_reach_tops = false;
            }
            // The rotation marker reaches every top except one within d-2.
            if i == wrap(j as i64, d) {
                for t in 1..=d {
                    if t != wrap(j as i64 + 1, d) && dist[idx(&tops[t - 1])?] > d - 2 {
                        markers_reach_tops = false;
                    }
                }
            }
        }
    }

    let ground: Vec<usize> = record
        .ground_layer()
        .iter()
        .map(idx)
        .collect::<Result<_>>()?;
    let mut ground_max = 0;
    for &g0 in &ground {
        let dist = bfs_restricted(graph, &allowed, g0);
        for &g1 in &ground {
            if dist[g1] == usize::MAX {
                return Err(Error::RecordInconsistent(
                    "ground layer disconnected inside the silo".into(),
                ));
            }
            ground_max = ground_max.max(dist[g1]);
        }
    }

    Ok(SiloDistanceReport {
        markers_reach_tops,
        ground_layer_max_distance: ground_max,
        ground_layer_ok: ground_max <= 3,
    })
}

fn ordered_neighbors_by_leaving_label(
    graph: &PolytopeGraph,
    node: usize,
) -> Result<Vec<FeasibleBasis>> {
    let basis = &graph.node(node).basis;
    let mut pairs: Vec<(Label, FeasibleBasis)> = Vec::new();
    for &u in graph.neighbors(node) {
        let nb = &graph.node(u).basis;
        let leaving: Vec<&Label> = basis.labels().iter().filter(|l| !nb.contains(l)).collect();
        if leaving.len() != 1 {
            return Err(Error::Internal(format!(
                "edge {basis} -- {nb} drops {} labels",
                leaving.len()
            )));
        }
        pairs.push((leaving[0].clone(), nb.clone()));
    }
    pairs.sort_by(|(a, _), (b, _)| a.cmp(b));
    Ok(pairs.into_iter().map(|(_, b)| b).collect())
}

/// Output of the distance-to-diameter reduction.
#[derive(Clone, Debug)]
pub struct ReductionOutput {
    /// The doubly-siloed polytope with its graph.
    pub tracked: TrackedPolytope,
    /// Additive offset: diameter(Q) is expected to be the input distance
    /// plus this value.
    pub k_offset: usize,
    pub r: usize,
    pub peak_u: FeasibleBasis,
    pub peak_v: FeasibleBasis,
    pub record_u: CyclicSiloRecord,
    pub record_v: CyclicSiloRecord,
    /// Distance between the two chosen vertices on the input polytope.
    pub base_distance: usize,
    /// Diameter of the input polytope.
    pub base_diameter: usize,
}

/// Options for the reduction; `r` below the safe minimum is rejected unless
/// `force` is set.
#[derive(Clone, Copy, Debug, Default)]
pub struct ReductionOptions {
    pub r: Option<usize>,
    pub force: bool,
}

/// Applies a cyclic siloing at `u` and then at `v`, producing a polytope
/// whose diameter encodes the distance between them.
pub fn diameter_reduction(
    p: &HPolytope,
    u: &RatVector,
    v: &RatVector,
    opts: ReductionOptions,
    budget: &Budget,
) -> Result<ReductionOutput> {
    let tracked = TrackedPolytope::from_polytope(p, budget)?;
    let nu = tracked
        .find_by_point(u)
        .ok_or_else(|| Error::NotAVertex(format!("{u:?}")))?;
    let nv = tracked
        .find_by_point(v)
        .ok_or_else(|| Error::NotAVertex(format!("{v:?}")))?;
    if nu == nv {
        return Err(Error::InvalidPolytope(
            "the two vertices must be distinct".into(),
        ));
    }
    let d = p.dim();
    let base_diameter = diameter(tracked.graph(), budget)?.value;
    let (base_distance, _) = distance(tracked.graph(), nu, nv)?;
    let r_min = base_diameter.max(6);
    let r = opts.r.unwrap_or(r_min);
    if r < r_min && !opts.force {
        return Err(Error::RTooSmall { r, min: r_min });
    }

    let (after_u, record_u) = cyclic_silo_tracked(&tracked, nu, r, "su")?;
    let nv2 = after_u
        .find_by_point(v)
        .ok_or_else(|| Error::Internal("second vertex vanished after first siloing".into()))?;
    let (after_uv, record_v) = cyclic_silo_tracked(&after_u, nv2, r, "sv")?;

    let peak_u = record_u.final_peak().clone();
    let peak_v = record_v.final_peak().clone();
    if after_uv.find_by_basis(&peak_u).is_none() {
        return Err(Error::Internal("first peak lost in second siloing".into()));
    }

    Ok(ReductionOutput {
        tracked: after_uv,
        k_offset: 2 * r * d * (d - 1),
        r,
        peak_u,
        peak_v,
        record_u,
        record_v,
        base_distance,
        base_diameter,
    })
}

/// Per-step encoding growth against the generous soft bound `64 * L^3 * r`.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub base_encoding: usize,
    pub r: usize,
    pub bound: u128,
    pub per_step_row_bits: Vec<usize>,
    pub per_step_coord_bits: Vec<usize>,
    /// Row-entry sizes never shrink: rows are only ever added.
    pub row_bits_monotone: bool,
    pub within_bound: bool,
}

pub fn encoding_growth_report(record: &CyclicSiloRecord) -> GrowthReport {
    let l = record.base_encoding as u128;
    let bound = 64u128 * l * l * l * record.r as u128;
    let rows: Vec<usize> = record
        .encodings
        .iter()
        .map(|e| e.max_row_entry_bits)
        .collect();
    let coords: Vec<usize> = record.encodings.iter().map(|e| e.max_coord_bits).collect();
    let row_bits_monotone = rows.windows(2).all(|w| w[0] <= w[1]);
    let within_bound = rows
        .iter()
        .chain(coords.iter())
        .all(|&bits| (bits as u128) < bound);
    GrowthReport {
        base_encoding: record.base_encoding,
        r: record.r,
        bound,
        per_step_row_bits: rows,
        per_step_coord_bits: coords,
        row_bits_monotone,
        within_bound,
    }
}
