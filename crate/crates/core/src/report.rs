//! Claim-by-claim verification suites.
//!
//! Each suite runs a family of exact checks and reports one row per claim:
//! what was checked, on which instance, expected versus got, and a verdict.
//! The suites back the `verify-paper` command; the heavyweight exhaustive
//! variants live in the acceptance tests.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cyclic::{cyclic_silo_tracked, encoding_growth_report, verify_silo_distances};
use crate::gf::{generating_function, predict_truncation_gf};
use crate::graph::{diameter, distance};
use crate::knapsack::{
    brute_force_partition, build_gadget, combinatorial_edges, decide_monotone_on_graph,
    decide_on_graph, gadget_graph, PartitionInstance,
};
use crate::linalg::RatVector;
use crate::polytope::{is_simple, Budget, HPolytope};
use crate::rational::ratio;
use crate::rock::{build_rock_extension, greedy_path_to_apex, path_between, InteriorBall};
use crate::silo::{silo_graph, silo_graph_path_bounds, silo_tracked, verify_silo_isomorphism};
use crate::truncate::{TrackedPolytope, Validation};

/// One verified claim.
#[derive(Clone, Debug, Serialize)]
pub struct ClaimResult {
    pub suite: String,
    pub claim: String,
    pub instance: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

impl ClaimResult {
    fn new(
        suite: &str,
        claim: &str,
        instance: impl Into<String>,
        expected: impl Into<String>,
        got: impl Into<String>,
        pass: bool,
    ) -> Self {
        ClaimResult {
            suite: suite.into(),
            claim: claim.into(),
            instance: instance.into(),
            expected: expected.into(),
            got: got.into(),
            pass,
        }
    }
}

/// Suite configuration.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub max_d: usize,
    pub seed: u64,
    pub random_instances: usize,
    pub budget: Budget,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_d: 4,
            seed: 7,
            random_instances: 5,
            budget: Budget::default(),
        }
    }
}

fn push_err(out: &mut Vec<ClaimResult>, suite: &str, claim: &str, instance: String, err: String) {
    out.push(ClaimResult::new(suite, claim, instance, "ok", err, false));
}

/// Partition-gadget suite: reduction equivalence, monotone agreement,
/// structure of the gadget, and the threshold identity.
pub fn verify_knapsack(opts: &VerifyOptions) -> Vec<ClaimResult> {
    let mut out = Vec::new();
    let suite = "knapsack";
    let mut instances: Vec<PartitionInstance> = Vec::new();
    for d in 2..=3usize.min(opts.max_d) {
        for_each_even_vector(d, 3, &mut |ws| {
            instances.push(PartitionInstance::new(ws.to_vec()).unwrap());
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.random_instances {
        instances.push(PartitionInstance::random(4, 5, &mut rng));
    }

    for inst in &instances {
        let tag = format!("weights {:?}", inst.weights());
        let graph = match gadget_graph(inst, &opts.budget) {
            Ok(g) => g,
            Err(e) => {
                push_err(&mut out, suite, "gadget-builds", tag, e.to_string());
                continue;
            }
        };

        let brute = brute_force_partition(inst).unwrap().is_some();
        match decide_on_graph(inst, &graph) {
            Ok(dec) => {
                out.push(ClaimResult::new(
                    suite,
                    "distance-decides-partition",
                    &tag,
                    format!("{brute}"),
                    format!("{} (distance {})", dec.yes, dec.distance),
                    dec.yes == brute,
                ));
            }
            Err(e) => push_err(
                &mut out,
                suite,
                "distance-decides-partition",
                tag.clone(),
                e.to_string(),
            ),
        }
        match decide_monotone_on_graph(inst, &graph) {
            Ok(m) => {
                out.push(ClaimResult::new(
                    suite,
                    "monotone-agrees",
                    &tag,
                    format!("{brute}"),
                    format!("{} (length {:?})", m.yes, m.length),
                    m.yes == brute,
                ));
                out.push(ClaimResult::new(
                    suite,
                    "goal-is-unique-maximizer",
                    &tag,
                    "true",
                    format!("{}", m.unique_max_is_goal),
                    m.unique_max_is_goal,
                ));
            }
            Err(e) => push_err(
                &mut out,
                suite,
                "monotone-agrees",
                tag.clone(),
                e.to_string(),
            ),
        }

        // Structure: simplicity, model equality, diameter cap, threshold.
        let p = build_gadget(inst);
        let simple = is_simple(&p, &opts.budget)
            .map(|r| r.simple)
            .unwrap_or(false);
        out.push(ClaimResult::new(
            suite,
            "gadget-is-simple",
            &tag,
            "true",
            format!("{simple}"),
            simple,
        ));
        let (cverts, cedges) = combinatorial_edges(inst);
        let model_nodes_match = cverts.len() == graph.node_count()
            && cverts
                .iter()
                .all(|v| graph.find_by_point(&v.point(inst)).is_some());
        let mut model_edges_match = cedges.len() == graph.edge_count();
        if model_edges_match {
            for (i, j) in &cedges {
                let a = graph.find_by_point(&cverts[*i].point(inst)).unwrap();
                let b = graph.find_by_point(&cverts[*j].point(inst)).unwrap();
                if !graph.neighbors(a).contains(&b) {
                    model_edges_match = false;
                    break;
                }
            }
        }
        out.push(ClaimResult::new(
            suite,
            "closed-form-model-matches-geometry",
            &tag,
            format!(
                "{} nodes / {} edges",
                graph.node_count(),
                graph.edge_count()
            ),
            format!(
                "{} nodes / {} edges (match: {})",
                cverts.len(),
                cedges.len(),
                model_nodes_match && model_edges_match
            ),
            model_nodes_match && model_edges_match,
        ));
        let cap = 2 * (inst.d() + 2);
        match diameter(&graph, &opts.budget) {
            Ok(diam) => out.push(ClaimResult::new(
                suite,
                "gadget-diameter-cap",
                &tag,
                format!("<= {cap}"),
                format!("{}", diam.value),
                diam.value <= cap,
            )),
            Err(e) => push_err(
                &mut out,
                suite,
                "gadget-diameter-cap",
                tag.clone(),
                e.to_string(),
            ),
        }
        let threshold_id = inst.threshold() == p.rows() - p.dim() - 2;
        out.push(ClaimResult::new(
            suite,
            "threshold-is-rows-minus-dim-minus-2",
            &tag,
            format!("{}", inst.threshold()),
            format!("{}", p.rows() - p.dim() - 2),
            threshold_id,
        ));
    }
    out
}

/// Tower suite: tower-graph bounds, silo closed form, isomorphism, cut
/// prediction, and tower distance facts on the cube.
pub fn verify_silo(opts: &VerifyOptions) -> Vec<ClaimResult> {
    let mut out = Vec::new();
    let suite = "silo";

    for d in 3..=opts.max_d.max(3) {
        match silo_graph_path_bounds(d) {
            Ok(b) => out.push(ClaimResult::new(
                suite,
                "tower-graph-path-bounds",
                format!("d={d}"),
                "all four bounds",
                format!(
                    "entry_to_top={} ground_to_top={} all_to_entry={} pairwise<=3={}",
                    b.entry_to_top, b.ground_to_top, b.all_to_entry, b.entry_pairwise
                ),
                b.all_hold(),
            )),
            Err(e) => push_err(
                &mut out,
                suite,
                "tower-graph-path-bounds",
                format!("d={d}"),
                e.to_string(),
            ),
        }
    }

    // Silo fixtures per dimension.
    let mut fixtures: Vec<(String, HPolytope, RatVector)> = vec![(
        "cube d=3".into(),
        HPolytope::unit_cube(3),
        RatVector::from_ints(&[0, 0, 0]),
    )];
    if opts.max_d >= 4 {
        let inst = PartitionInstance::new(vec![1, 1]).unwrap();
        let p = build_gadget(&inst);
        let start = crate::knapsack::partition_endpoints(&inst).0.point(&inst);
        fixtures.push(("gadget(1,1) d=4".into(), p, start));
    }
    if opts.max_d >= 5 {
        fixtures.push((
            "cube d=5".into(),
            HPolytope::unit_cube(5),
            RatVector::from_ints(&[0, 0, 0, 0, 0]),
        ));
    }

    for (name, p, point) in fixtures {
        let tracked = match TrackedPolytope::from_polytope(&p, &opts.budget) {
            Ok(t) => t,
            Err(e) => {
                push_err(&mut out, suite, "fixture-builds", name, e.to_string());
                continue;
            }
        };
        let node = tracked.find_by_point(&point).expect("fixture vertex");
        let order = tracked.graph().node(node).basis.labels().to_vec();

        // Cut prediction on the fixture vertex.
        let f0 = tracked.generating_function();
        let basis = tracked.graph().node(node).basis.clone();
        let predict = predict_truncation_gf(&f0, &basis, "probe:1").unwrap();
        match tracked.cut_vertex(node, "probe:1".into(), Validation::Full) {
            Ok(cut) => {
                let actual = generating_function(cut.tracked.polytope(), &opts.budget)
                    .expect("re-enumeration");
                out.push(ClaimResult::new(
                    suite,
                    "cut-prediction-matches-enumeration",
                    &name,
                    format!("{} terms", predict.term_count()),
                    format!(
                        "{} terms (equal: {})",
                        actual.term_count(),
                        predict == actual
                    ),
                    predict == actual,
                ));
            }
            Err(e) => push_err(
                &mut out,
                suite,
                "cut-prediction-matches-enumeration",
                name.clone(),
                e.to_string(),
            ),
        }

        match silo_tracked(&tracked, node, &order, "y", Validation::Full) {
            Ok(s) => {
                let d = p.dim();
                let f_in = tracked.generating_function();
                let closed = s.record.closed_form_gf(&f_in).unwrap();
                let enumerated = s.tracked.generating_function();
                out.push(ClaimResult::new(
                    suite,
                    "silo-closed-form-gf",
                    &name,
                    format!("{} terms", closed.term_count()),
                    format!(
                        "{} terms (equal: {})",
                        enumerated.term_count(),
                        closed == enumerated
                    ),
                    closed == enumerated,
                ));
                let gd = silo_graph(d).unwrap();
                match verify_silo_isomorphism(&gd, &s.record, s.tracked.graph()) {
                    Ok(iso) => out.push(ClaimResult::new(
                        suite,
                        "tower-isomorphism",
                        &name,
                        "isomorphic",
                        format!(
                            "{} edges vs {} expected, holds: {}",
                            iso.tower_edge_count, iso.expected_edge_count, iso.holds
                        ),
                        iso.holds,
                    )),
                    Err(e) => push_err(
                        &mut out,
                        suite,
                        "tower-isomorphism",
                        name.clone(),
                        e.to_string(),
                    ),
                }
            }
            Err(e) => push_err(
                &mut out,
                suite,
                "silo-closed-form-gf",
                name.clone(),
                e.to_string(),
            ),
        }
    }

    // Cyclic tower distance facts on the cube, r = 1.
    let tracked = TrackedPolytope::from_polytope(&HPolytope::unit_cube(3), &opts.budget).unwrap();
    let node = tracked
        .find_by_point(&RatVector::from_ints(&[0, 0, 0]))
        .unwrap();
    match cyclic_silo_tracked(&tracked, node, 1, "y") {
        Ok((built, record)) => {
            let report = verify_silo_distances(&record, built.graph()).unwrap();
            out.push(ClaimResult::new(
                suite,
                "cyclic-tower-distance-facts",
                "cube r=1",
                "markers reach tops; ground pairwise <= 3",
                format!(
                    "markers_reach_tops={} ground_max={}",
                    report.markers_reach_tops, report.ground_layer_max_distance
                ),
                report.markers_reach_tops && report.ground_layer_ok,
            ));
            let g = built.graph();
            let peak = g.find_by_basis(record.final_peak()).unwrap();
            let need = 3 * 2 + 1;
            let mut far_enough = true;
            for n in tracked.graph().nodes() {
                if n.basis == record.initial_vertex {
                    continue;
                }
                let i = g.find_by_basis(&n.basis).unwrap();
                if distance(g, peak, i).unwrap().0 < need {
                    far_enough = false;
                }
            }
            out.push(ClaimResult::new(
                suite,
                "peak-isolation",
                "cube r=1",
                format!(">= {need}"),
                format!("all originals >= {need}: {far_enough}"),
                far_enough,
            ));
        }
        Err(e) => push_err(
            &mut out,
            suite,
            "cyclic-tower-distance-facts",
            "cube r=1".into(),
            e.to_string(),
        ),
    }

    out
}

/// Lift suite: layered construction and greedy walk bounds on the square
/// and cube fixtures.
pub fn verify_rock(opts: &VerifyOptions) -> Vec<ClaimResult> {
    let mut out = Vec::new();
    let suite = "rock";
    let fixtures: Vec<(String, HPolytope, RatVector)> = vec![
        (
            "square".into(),
            HPolytope::unit_cube(2),
            RatVector::new(vec![ratio(1, 2), ratio(1, 2)]),
        ),
        (
            "cube".into(),
            HPolytope::unit_cube(3),
            RatVector::new(vec![ratio(1, 2), ratio(1, 2), ratio(1, 2)]),
        ),
    ];
    for (name, p, center) in fixtures {
        let ball = InteriorBall::new(center, ratio(1, 4)).unwrap();
        let rock = match build_rock_extension(&p, &ball, &opts.budget) {
            Ok(r) => r,
            Err(e) => {
                push_err(
                    &mut out,
                    suite,
                    "lift-builds-and-layers",
                    name,
                    e.to_string(),
                );
                continue;
            }
        };
        out.push(ClaimResult::new(
            suite,
            "lift-builds-and-layers",
            &name,
            "layer separation validated",
            "built",
            true,
        ));
        let bound = rock.step_bound();
        let n = rock.graph().node_count();
        let mut greedy_ok = true;
        let mut monotone_ok = true;
        for start in 0..n {
            match greedy_path_to_apex(&rock, start) {
                Ok(walk) => {
                    greedy_ok &= walk.path.length() <= bound;
                    let d2 = |i: usize| rock.graph().node(i).point.sub(rock.apex_point()).norm2();
                    for w in walk.path.nodes.windows(2) {
                        monotone_ok &= d2(w[1]) < d2(w[0]);
                    }
                }
                Err(_) => greedy_ok = false,
            }
        }
        out.push(ClaimResult::new(
            suite,
            "greedy-reaches-apex-within-bound",
            &name,
            format!("<= {bound} steps, strictly closing"),
            format!("all {n} starts ok: {}", greedy_ok && monotone_ok),
            greedy_ok && monotone_ok,
        ));
        let mut pairs_ok = true;
        for u in 0..n {
            for v in 0..n {
                match path_between(&rock, u, v) {
                    Ok(w) => pairs_ok &= w.path.length() <= 2 * bound,
                    Err(_) => pairs_ok = false,
                }
            }
        }
        out.push(ClaimResult::new(
            suite,
            "pairs-connect-within-twice-bound",
            &name,
            format!("<= {}", 2 * bound),
            format!("all pairs ok: {pairs_ok}"),
            pairs_ok,
        ));
    }
    out
}

/// Encoding-growth suite on cyclic towers of the cube.
pub fn verify_growth(opts: &VerifyOptions) -> Vec<ClaimResult> {
    let mut out = Vec::new();
    let suite = "growth";
    for r in [1usize, 2] {
        let tracked =
            TrackedPolytope::from_polytope(&HPolytope::unit_cube(3), &opts.budget).unwrap();
        let node = tracked
            .find_by_point(&RatVector::from_ints(&[0, 0, 0]))
            .unwrap();
        match cyclic_silo_tracked(&tracked, node, r, "y") {
            Ok((_, record)) => {
                let rep = encoding_growth_report(&record);
                out.push(ClaimResult::new(
                    suite,
                    "entry-sizes-below-soft-bound",
                    format!("cube r={r}"),
                    format!("< {} bits", rep.bound),
                    format!(
                        "max row {} / max coord {} bits, monotone rows: {}",
                        rep.per_step_row_bits.iter().max().unwrap(),
                        rep.per_step_coord_bits.iter().max().unwrap(),
                        rep.row_bits_monotone
                    ),
                    rep.within_bound && rep.row_bits_monotone,
                ));
            }
            Err(e) => push_err(
                &mut out,
                suite,
                "entry-sizes-below-soft-bound",
                format!("cube r={r}"),
                e.to_string(),
            ),
        }
    }
    out
}

/// Enumerates all weight vectors in `[1, max_entry]^d` with even sum.
pub fn for_each_even_vector(d: usize, max_entry: u64, f: &mut impl FnMut(&[u64])) {
    let mut ws = vec![1u64; d];
    loop {
        if ws.iter().sum::<u64>() % 2 == 0 {
            f(&ws);
        }
        let mut i = 0;
        loop {
            if i == d {
                return;
            }
            if ws[i] < max_entry {
                ws[i] += 1;
                break;
            }
            ws[i] = 1;
            i += 1;
        }
    }
}

/// Runs the requested scopes in order; `None` runs everything.
pub fn run_scopes(scopes: &[String], opts: &VerifyOptions) -> Vec<ClaimResult> {
    let all = scopes.is_empty();
    let has = |s: &str| scopes.iter().any(|x| x == s);
    let mut out = Vec::new();
    if all || has("knapsack") {
        out.extend(verify_knapsack(opts));
    }
    if all || has("silo") {
        out.extend(verify_silo(opts));
    }
    if all || has("rock") {
        out.extend(verify_rock(opts));
    }
    if all || has("growth") {
        out.extend(verify_growth(opts));
    }
    out
}
