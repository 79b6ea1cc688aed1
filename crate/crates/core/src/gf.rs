//! Generating function of feasible bases.
//!
//! The combinatorics of repeated vertex cutting is tracked by a formal sum
//! with one monomial per feasible basis, each monomial being the set of row
//! labels in the basis. Cutting a vertex with basis `B*` removes the
//! monomial of `B*` and adds, for every `i` in `B*`, the monomial
//! `(B* minus i) + newLabel`. For simple polytopes all multiplicities stay
//! at one; the multiset discipline is kept so that violations surface.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::PolytopeGraph;
use crate::polytope::{enumerate_feasible_bases, Budget, FeasibleBasis, HPolytope};

/// Multiset of label-sets, one per feasible basis.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GeneratingFunction {
    monomials: BTreeMap<FeasibleBasis, usize>,
}

impl GeneratingFunction {
    pub fn from_bases<I: IntoIterator<Item = FeasibleBasis>>(bases: I) -> Self {
        let mut monomials = BTreeMap::new();
        for b in bases {
            *monomials.entry(b).or_insert(0) += 1;
        }
        GeneratingFunction { monomials }
    }

    /// Number of monomials counted with multiplicity.
    pub fn term_count(&self) -> usize {
        self.monomials.values().sum()
    }

    /// True when every multiplicity is one.
    pub fn is_squarefree(&self) -> bool {
        self.monomials.values().all(|&c| c == 1)
    }

    pub fn contains(&self, basis: &FeasibleBasis) -> bool {
        self.monomials.contains_key(basis)
    }

    pub fn monomials(&self) -> impl Iterator<Item = (&FeasibleBasis, usize)> {
        self.monomials.iter().map(|(b, &c)| (b, c))
    }

    fn add(&mut self, basis: FeasibleBasis) {
        *self.monomials.entry(basis).or_insert(0) += 1;
    }

    fn remove(&mut self, basis: &FeasibleBasis) -> Result<()> {
        match self.monomials.get_mut(basis) {
            Some(c) if *c > 1 => {
                *c -= 1;
                Ok(())
            }
            Some(_) => {
                self.monomials.remove(basis);
                Ok(())
            }
            None => Err(Error::BasisNotPresent(basis.labels().to_vec())),
        }
    }
}

/// Generating function read off an enumerated polytope.
pub fn generating_function(p: &HPolytope, budget: &Budget) -> Result<GeneratingFunction> {
    let bases = enumerate_feasible_bases(p, budget)?;
    Ok(GeneratingFunction::from_bases(
        bases.into_iter().map(|(b, _)| b),
    ))
}

/// Generating function read off an already-built graph.
pub fn graph_generating_function(g: &PolytopeGraph) -> GeneratingFunction {
    GeneratingFunction::from_bases(g.nodes().iter().map(|n| n.basis.clone()))
}

/// Symbolic effect of cutting the vertex with basis `bstar`:
/// `f - x^{B*} + sum_{i in B*} x^{B* \ i} * newLabel`.
pub fn predict_truncation_gf(
    f: &GeneratingFunction,
    bstar: &FeasibleBasis,
    new_label: &str,
) -> Result<GeneratingFunction> {
    if !f.contains(bstar) {
        return Err(Error::BasisNotPresent(bstar.labels().to_vec()));
    }
    let mut out = f.clone();
    out.remove(bstar)?;
    for leaving in bstar.labels() {
        out.add(bstar.swap(leaving, new_label.to_string()));
    }
    Ok(out)
}
