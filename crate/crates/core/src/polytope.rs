//! H-representation polytopes and feasible-basis enumeration.
//!
//! A polytope is `A x <= b` with one stable label per row. Vertex
//! enumeration is an exhaustive scan over all d-subsets of rows with exact
//! solves; a configurable cap guards against blowup. Correctness beats
//! output-sensitivity at the scales this crate targets.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{affine_rank, solve_square, RatMatrix, RatVector};
use crate::rational::{EncodingLength, Rational};

pub type Label = String;

/// Caps for enumeration and graph search.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    /// Maximum number of d-subsets the basis scan may visit.
    pub max_bases: u64,
    /// Maximum number of BFS edge relaxations.
    pub max_relaxations: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_bases: 5_000_000,
            max_relaxations: 10_000_000,
        }
    }
}

/// Polytope `{x : A x <= b}` with labeled rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolytope {
    a: RatMatrix,
    b: RatVector,
    labels: Vec<Label>,
}

impl HPolytope {
    pub fn new(a: RatMatrix, b: RatVector, labels: Vec<Label>) -> Result<Self> {
        if a.row_count() != b.dim() || a.row_count() != labels.len() {
            return Err(Error::InvalidPolytope(format!(
                "row count mismatch: A has {}, b has {}, labels has {}",
                a.row_count(),
                b.dim(),
                labels.len()
            )));
        }
        for (i, row) in a.rows().iter().enumerate() {
            if row.is_zero() {
                return Err(Error::InvalidPolytope(format!("row {i} of A is zero")));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(Error::InvalidPolytope(format!("duplicate label {l:?}")));
            }
        }
        Ok(HPolytope { a, b, labels })
    }

    pub fn dim(&self) -> usize {
        self.a.col_count()
    }

    pub fn rows(&self) -> usize {
        self.a.row_count()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.a
    }

    pub fn rhs(&self) -> &RatVector {
        &self.b
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Slack `b_i - A_i . x` of row `i` at `x`.
    pub fn slack(&self, i: usize, x: &RatVector) -> Rational {
        &self.b[i] - &self.a.row(i).dot(x)
    }

    /// True when `x` satisfies every inequality.
    pub fn contains(&self, x: &RatVector) -> bool {
        (0..self.rows()).all(|i| !self.slack(i, x).is_negative())
    }

    /// Labels of the rows tight at `x`.
    pub fn tight_labels(&self, x: &RatVector) -> Vec<Label> {
        let mut t: Vec<Label> = (0..self.rows())
            .filter(|&i| self.slack(i, x).is_zero())
            .map(|i| self.labels[i].clone())
            .collect();
        t.sort();
        t
    }

    /// Appends a row, returning a new polytope.
    pub fn with_row(&self, normal: RatVector, offset: Rational, label: Label) -> Result<Self> {
        let mut rows = self.a.rows().to_vec();
        rows.push(normal);
        let mut b = self.b.clone();
        b.push(offset);
        let mut labels = self.labels.clone();
        labels.push(label);
        HPolytope::new(RatMatrix::new(rows), b, labels)
    }

    /// Axis-aligned unit hypercube `[0,1]^d` with rows `lo:i`, `hi:i`.
    pub fn unit_cube(d: usize) -> Self {
        let mut rows = Vec::with_capacity(2 * d);
        let mut b = Vec::with_capacity(2 * d);
        let mut labels = Vec::with_capacity(2 * d);
        for i in 0..d {
            rows.push(RatVector::unit(d, i).scale(&Rational::from_int(-1)));
            b.push(Rational::zero());
            labels.push(format!("lo:{}", i + 1));
        }
        for i in 0..d {
            rows.push(RatVector::unit(d, i));
            b.push(Rational::one());
            labels.push(format!("hi:{}", i + 1));
        }
        HPolytope::new(RatMatrix::new(rows), RatVector::new(b), labels)
            .expect("cube construction is valid")
    }
}

impl EncodingLength for HPolytope {
    fn encoding_length(&self) -> usize {
        self.a.encoding_length() + self.b.encoding_length()
    }
}

#[derive(Serialize, Deserialize)]
struct HPolytopeWire {
    dim: usize,
    labels: Vec<Label>,
    #[serde(rename = "A")]
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
}

impl Serialize for HPolytope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = HPolytopeWire {
            dim: self.dim(),
            labels: self.labels.clone(),
            a: self.a.rows().iter().map(|r| r.entries().to_vec()).collect(),
            b: self.b.entries().to_vec(),
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HPolytope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let wire = HPolytopeWire::deserialize(d)?;
        let rows: Vec<RatVector> = wire.a.into_iter().map(RatVector::new).collect();
        for r in &rows {
            if r.dim() != wire.dim {
                return Err(D::Error::custom("row width disagrees with dim"));
            }
        }
        HPolytope::new(RatMatrix::new(rows), RatVector::new(wire.b), wire.labels)
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// Sorted d-subset of facet labels identifying a vertex of a simple polytope.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FeasibleBasis {
    labels: Vec<Label>,
}

impl FeasibleBasis {
    pub fn new(mut labels: Vec<Label>) -> Self {
        labels.sort();
        labels.dedup();
        FeasibleBasis { labels }
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.labels
            .binary_search_by(|l| l.as_str().cmp(label))
            .is_ok()
    }

    /// Size of the symmetric difference with another sorted basis.
    pub fn sym_diff_size(&self, other: &FeasibleBasis) -> usize {
        let (a, b) = (&self.labels, &other.labels);
        let (mut i, mut j, mut diff) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    diff += 1;
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    diff += 1;
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        diff + (a.len() - i) + (b.len() - j)
    }

    /// Basis with `leaving` removed and `entering` added.
    pub fn swap(&self, leaving: &str, entering: Label) -> FeasibleBasis {
        let mut labels: Vec<Label> = self
            .labels
            .iter()
            .filter(|l| l.as_str() != leaving)
            .cloned()
            .collect();
        labels.push(entering);
        FeasibleBasis::new(labels)
    }
}

impl std::fmt::Display for FeasibleBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{}}}", self.labels.join(","))
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    acc
}

fn next_combination(c: &mut [usize], m: usize) -> bool {
    let d = c.len();
    let mut i = d;
    while i > 0 {
        i -= 1;
        if c[i] < m - d + i {
            c[i] += 1;
            for j in (i + 1)..d {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Enumerates all feasible bases of `p` together with their vertex points.
///
/// Results are sorted lexicographically by the sorted basis labels, so the
/// order is deterministic regardless of row order or parallelism.
pub fn enumerate_feasible_bases(
    p: &HPolytope,
    budget: &Budget,
) -> Result<Vec<(FeasibleBasis, RatVector)>> {
    enumerate_with_jobs(p, budget, None)
}

/// Same as [`enumerate_feasible_bases`] with an explicit worker count.
/// `None` uses the global rayon pool.
pub fn enumerate_with_jobs(
    p: &HPolytope,
    budget: &Budget,
    jobs: Option<usize>,
) -> Result<Vec<(FeasibleBasis, RatVector)>> {
    let m = p.rows();
    let d = p.dim();
    if m < d {
        return Err(Error::DimensionTooSmall { needed: d, got: m });
    }
    let count = binomial(m, d);
    if count > budget.max_bases as u128 {
        return Err(Error::TimeBudgetExceeded {
            m,
            d,
            count,
            cap: budget.max_bases,
        });
    }

    let solve_block = |block: &[Vec<usize>]| -> Vec<(FeasibleBasis, RatVector)> {
        block
            .iter()
            .filter_map(|subset| {
                let sub = p.matrix().select_rows(subset);
                let rhs = RatVector::new(subset.iter().map(|&i| p.rhs()[i].clone()).collect());
                let x = solve_square(&sub, &rhs)?;
                if !p.contains(&x) {
                    return None;
                }
                let basis =
                    FeasibleBasis::new(subset.iter().map(|&i| p.labels()[i].clone()).collect());
                Some((basis, x))
            })
            .collect()
    };

    const BLOCK: usize = 8192;
    let mut found = Vec::new();
    let mut combo: Vec<usize> = (0..d).collect();
    let mut more = true;
    let run =
        |found: &mut Vec<(FeasibleBasis, RatVector)>, combo: &mut Vec<usize>, more: &mut bool| {
            while *more {
                let mut block = Vec::with_capacity(BLOCK);
                while block.len() < BLOCK && *more {
                    block.push(combo.clone());
                    *more = next_combination(combo, m);
                }
                let chunk: Vec<_> = block.par_chunks(BLOCK / 16 + 1).map(solve_block).collect();
                for part in chunk {
                    found.extend(part);
                }
            }
        };

    match jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
            pool.install(|| run(&mut found, &mut combo, &mut more));
        }
        None => run(&mut found, &mut combo, &mut more),
    }

    found.sort_by(|(a, _), (b, _)| a.cmp(b));
    Ok(found)
}

/// Outcome of the simplicity check.
#[derive(Clone, Debug)]
pub struct SimplicityReport {
    pub simple: bool,
    /// A vertex lying on more than `dim` facets, when one exists.
    pub witness: Option<RatVector>,
}

/// Checks that every enumerated vertex lies on exactly `dim` facets.
pub fn is_simple(p: &HPolytope, budget: &Budget) -> Result<SimplicityReport> {
    let bases = enumerate_feasible_bases(p, budget)?;
    let mut seen: HashMap<RatVector, ()> = HashMap::new();
    for (_, x) in &bases {
        if seen.insert(x.clone(), ()).is_some() {
            continue;
        }
        let tight = (0..p.rows()).filter(|&i| p.slack(i, x).is_zero()).count();
        if tight != p.dim() {
            return Ok(SimplicityReport {
                simple: false,
                witness: Some(x.clone()),
            });
        }
    }
    Ok(SimplicityReport {
        simple: true,
        witness: None,
    })
}

/// Classification of one inequality row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RowStatus {
    FacetDefining,
    Redundant,
}

/// Classifies each row as facet-defining or redundant.
///
/// For a bounded polytope a row defines a facet exactly when its tight
/// vertex set has affine rank `dim - 1`.
pub fn facet_status(p: &HPolytope, budget: &Budget) -> Result<Vec<RowStatus>> {
    let bases = enumerate_feasible_bases(p, budget)?;
    let mut distinct: Vec<RatVector> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (_, x) in bases {
        if seen.insert(x.clone()) {
            distinct.push(x);
        }
    }
    let d = p.dim();
    let mut out = Vec::with_capacity(p.rows());
    for i in 0..p.rows() {
        let tight: Vec<RatVector> = distinct
            .iter()
            .filter(|x| p.slack(i, x).is_zero())
            .cloned()
            .collect();
        let status = if !tight.is_empty() && affine_rank(&tight) + 1 >= d {
            RowStatus::FacetDefining
        } else {
            RowStatus::Redundant
        };
        out.push(status);
    }
    Ok(out)
}
