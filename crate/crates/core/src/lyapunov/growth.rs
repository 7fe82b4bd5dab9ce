use std::collections::BTreeSet;

use itertools::Itertools;

use crate::ca::{determined_coordinates, LocalRule, Pattern};
use crate::error::{Error, Result};
use crate::geometry::{morphological_boundary_counts, with_origin, LatticeVector, Polytope};
use crate::Rational;

/// Largest `#(D ∩ J)` the exhaustive oracle accepts.
pub const ORACLE_CAP: usize = 18;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthMethod {
    Geometric,
    HullShrink,
    ExhaustiveOracle,
}

/// A convex `K ⊆ J` whose lattice points are determined after one step, and
/// the loss `gr = #(J∖K)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    /// Coordinates determined by `x` (all of them, not only those in `J`).
    pub determined: Vec<LatticeVector>,
    /// Lattice points of the chosen `K`.
    pub chosen: Vec<LatticeVector>,
    pub gr: u64,
    pub method: GrowthMethod,
}

/// `#J − #(J ⊖ 𝕀)`: the pattern-independent upper bound on `gr_J f`.
pub fn growth_geometric_bound(rule: &LocalRule, j: &Polytope<Rational>) -> Result<u64> {
    Ok(morphological_boundary_counts(j, &rule.hull(), false)?.inner)
}

struct Setup {
    window: Vec<LatticeVector>,
    determined: Vec<LatticeVector>,
    /// `D ∩ J`, sorted.
    candidates: Vec<LatticeVector>,
}

fn setup(rule: &LocalRule, j: &Polytope<Rational>, x: &Pattern) -> Result<Setup> {
    let window = j.lattice_points()?;
    if window.iter().any(|&v| x.get(v).is_none()) {
        return Err(Error::invalid("pattern does not cover the window"));
    }
    let determined = determined_coordinates(rule, x);
    let in_window: BTreeSet<_> = window.iter().copied().collect();
    let candidates = determined.iter().copied().filter(|v| in_window.contains(v)).collect();
    Ok(Setup {
        window,
        determined,
        candidates,
    })
}

/// Lattice points of `cv(s)` when they are exactly `s`.
fn is_lattice_convex(dim: usize, s: &[LatticeVector]) -> Result<bool> {
    if s.is_empty() {
        return Ok(true);
    }
    Ok(Polytope::<Rational>::from_lattice(dim, s)?.lattice_count()? == s.len() as u64)
}

/// Starts from `cv(D ∩ J)` and, while its hull picks up an undetermined lattice
/// point, drops the vertex nearest to that point. Never worse than `J ⊖ 𝕀`.
pub fn growth_hull_shrink(rule: &LocalRule, j: &Polytope<Rational>, x: &Pattern) -> Result<GrowthReport> {
    let d = rule.dim();
    let Setup {
        window,
        determined,
        candidates,
    } = setup(rule, j, x)?;
    let allowed: BTreeSet<_> = candidates.iter().copied().collect();
    let mut s = candidates;
    let chosen = loop {
        if s.is_empty() {
            break Vec::new();
        }
        let k = Polytope::<Rational>::from_lattice(d, &s)?;
        let pts = k.lattice_points()?;
        let Some(bad) = pts.iter().find(|v| !allowed.contains(v)) else {
            break pts;
        };
        let verts = k.integral_vertices().expect("hull of lattice points is integral");
        let drop = verts
            .into_iter()
            .min_by_key(|v| ((*v - *bad).norm_sq(), *v))
            .expect("nonempty hull");
        s.retain(|&v| v != drop);
    };
    let eroded = j.erode(&with_origin(&rule.hull())?)?.lattice_points()?;
    let chosen = if eroded.len() > chosen.len() { eroded } else { chosen };
    Ok(GrowthReport {
        gr: (window.len() - chosen.len()) as u64,
        determined,
        chosen,
        method: GrowthMethod::HullShrink,
    })
}

/// Exact `gr_J f(x)`: the largest lattice-convex subset of `D ∩ J`, found by
/// scanning subsets in decreasing size.
pub fn growth_exact_oracle(rule: &LocalRule, j: &Polytope<Rational>, x: &Pattern) -> Result<GrowthReport> {
    let Setup {
        window,
        determined,
        candidates,
    } = setup(rule, j, x)?;
    if candidates.len() > ORACLE_CAP {
        return Err(Error::limit("determined cells in the window", ORACLE_CAP as u128));
    }
    for size in (0..=candidates.len()).rev() {
        for subset in candidates.iter().copied().combinations(size) {
            if is_lattice_convex(rule.dim(), &subset)? {
                return Ok(GrowthReport {
                    gr: (window.len() - size) as u64,
                    determined,
                    chosen: subset,
                    method: GrowthMethod::ExhaustiveOracle,
                });
            }
        }
    }
    unreachable!("the empty set is lattice-convex")
}
