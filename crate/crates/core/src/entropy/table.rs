use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::itinerary::{itinerary_count_exact, itinerary_count_linear, itinerary_count_sampled};
use super::perp::perp_boundary;
use crate::ca::{is_permutative, LocalRule};
use crate::error::{Error, Result};
use crate::geometry::{morphological_boundary_counts, quermass, Polytope};
use crate::Rational;

/// Natural logarithm of a big integer, exact to f64 precision at any size.
pub fn ln_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().expect("fits f64").ln();
    }
    let shift = bits - 64;
    (n >> shift).to_f64().expect("64 bits fit f64").ln() + shift as f64 * std::f64::consts::LN_2
}

/// `N_k` as produced by one of the counting modes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ItineraryCount {
    Exact(BigUint),
    /// Distinct itineraries among samples: a lower bound on `N_k`.
    Sampled(u64),
    Skipped,
}

impl ItineraryCount {
    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            ItineraryCount::Exact(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ItineraryCount::Exact(_))
    }
}

/// `log N_K − log N_{K−1}` at the largest `K` where both counts are exact;
/// `counts[i]` holds `N_{i+1}`. Sampled counts never enter.
pub fn entropy_slope(counts: &[ItineraryCount]) -> Result<f64> {
    (1..counts.len())
        .rev()
        .find_map(|t| match (counts[t - 1].exact(), counts[t].exact()) {
            (Some(a), Some(b)) => Some(ln_big(b) - ln_big(a)),
            _ => None,
        })
        .ok_or_else(|| Error::invalid("slope needs two consecutive exact counts"))
}

/// `q^{k·#∂⊥J}`, the growth of `N` over `k` further steps certified for
/// permutative rules: `N_{l+1} ≥ N_l · q^{#∂⊥J}`.
pub fn refinement_lower_bound(rule: &LocalRule, j: &Polytope<Rational>, k: usize) -> Result<BigUint> {
    if !is_permutative(rule).permutative {
        return Err(Error::NotApplicable("refinement bound needs a permutative rule".into()));
    }
    if k == 0 {
        return Ok(BigUint::from(1u32));
    }
    let perp = perp_boundary(j, rule.domain())?;
    Ok(BigUint::from(rule.alphabet()).pow((k * perp.len()) as u32))
}

/// Asymptotic rate bound `V_𝕀(O)/p(O) · log q`.
pub fn upper_bound_rate(rule: &LocalRule, o: &Polytope<Rational>) -> Result<f64> {
    let v = quermass(&rule.hull(), o)?;
    Ok(v / o.boundary_measure() * (rule.alphabet() as f64).ln())
}

/// Per-window bound `#∂⁺_𝕀J · log q` on the entropy of the partition by `J`.
pub fn window_upper_bound(rule: &LocalRule, j: &Polytope<Rational>) -> Result<f64> {
    let b = morphological_boundary_counts(j, &rule.hull(), false)?;
    Ok(b.outer as f64 * (rule.alphabet() as f64).ln())
}

/// `(lower_rate, upper_rate)` for the window `J`: `#∂⊥J · log q / p(J)` when
/// the rule is permutative and `J` integral, and `V_𝕀(J)/p(J) · log q`.
pub fn rate_bounds(rule: &LocalRule, j: &Polytope<Rational>) -> Result<(Option<f64>, f64)> {
    let upper = upper_bound_rate(rule, j)?;
    if !j.is_integral() || !is_permutative(rule).permutative {
        return Ok((None, upper));
    }
    let perp = perp_boundary(j, rule.domain())?;
    Ok((Some(perp.len() as f64 * (rule.alphabet() as f64).ln() / j.boundary_measure()), upper))
}

/// How `N_k` is obtained for each row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMode {
    Exact,
    Sampled { samples: u64, seed: u64 },
    /// Exact within the enumeration cap, sampled beyond it.
    Auto { samples: u64, seed: u64 },
    /// Exact counts from the rank of the itinerary map (algebraic rules).
    Linear,
    /// Geometry-derived rates only.
    Skip,
}

/// Scaled copies `nO` of an integral shape.
#[derive(Clone, Debug)]
pub struct ExhaustionSpec {
    pub label: String,
    pub shape: Polytope<Rational>,
    pub scales: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyRow {
    pub n: i64,
    pub j_id: String,
    pub p_j: f64,
    pub k: usize,
    pub count: ItineraryCount,
    pub slope: Option<f64>,
    /// `#∂⊥J · log q / p(J)`; only for permutative rules.
    pub lower_rate: Option<f64>,
    pub upper_rate: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EntropyTable {
    pub rows: Vec<EntropyRow>,
}

fn count(rule: &LocalRule, j: &Polytope<Rational>, k: usize, mode: CountMode) -> Result<ItineraryCount> {
    Ok(match mode {
        CountMode::Exact => ItineraryCount::Exact(itinerary_count_exact(rule, j, k)?),
        CountMode::Linear => ItineraryCount::Exact(itinerary_count_linear(rule, j, k)?),
        CountMode::Sampled { samples, seed } => {
            ItineraryCount::Sampled(itinerary_count_sampled(rule, j, k, samples, seed)?)
        }
        CountMode::Auto { samples, seed } => match itinerary_count_exact(rule, j, k) {
            Ok(n) => ItineraryCount::Exact(n),
            Err(e) if e.is_resource_limit() => {
                ItineraryCount::Sampled(itinerary_count_sampled(rule, j, k, samples, seed)?)
            }
            Err(e) => return Err(e),
        },
        CountMode::Skip => ItineraryCount::Skipped,
    })
}

/// One row per `(n, k)` with `J = nO`. Rates are normalized by `p(J)` and are
/// computed from exact geometry whatever the counting mode.
pub fn rescaled_entropy_table(
    rule: &LocalRule,
    spec: &ExhaustionSpec,
    k_max: usize,
    mode: CountMode,
) -> Result<EntropyTable> {
    let mut rows = Vec::new();
    for &n in &spec.scales {
        let j = spec.shape.scale(&Rational::from_integer(n as i128));
        let p_j = j.boundary_measure();
        let (lower_rate, upper_rate) = rate_bounds(rule, &j)?;
        let mut prev: Option<ItineraryCount> = None;
        for k in 1..=k_max {
            let c = count(rule, &j, k, mode)?;
            let slope = match (prev.as_ref().and_then(|p| p.exact()), c.exact()) {
                (Some(a), Some(b)) => Some(ln_big(b) - ln_big(a)),
                _ => None,
            };
            rows.push(EntropyRow {
                n,
                j_id: format!("{}:{n}", spec.label),
                p_j,
                k,
                count: c.clone(),
                slope,
                lower_rate,
                upper_rate,
            });
            prev = Some(c);
        }
    }
    Ok(EntropyTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::LatticeVector;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::new(c)
    }

    fn unit_square() -> Polytope<Rational> {
        Polytope::cube(2, Rational::from_integer(-1), Rational::from_integer(1)).unwrap()
    }

    fn xor2d() -> LocalRule {
        LocalRule::algebraic(2, 2, &[(lv(&[1, 0]), 1), (lv(&[0, 1]), 1)]).unwrap()
    }

    fn cross() -> LocalRule {
        let cells: Vec<_> = [[1, 0], [-1, 0], [0, 1], [0, -1]].iter().map(|c| (lv(c), 1)).collect();
        LocalRule::algebraic(2, 2, &cells).unwrap()
    }

    #[test]
    fn big_logarithm() {
        let n = BigUint::from(2u32).pow(5000);
        assert!((ln_big(&n) - 5000.0 * std::f64::consts::LN_2).abs() < 1e-6);
        assert!((ln_big(&BigUint::from(10u32)) - 10f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn slopes() {
        let c = |e: u32| ItineraryCount::Exact(BigUint::from(2u32).pow(e));
        let s = entropy_slope(&[c(5), c(6), c(7)]).unwrap();
        assert!((s - std::f64::consts::LN_2).abs() < 1e-12);
        assert_eq!(entropy_slope(&[c(3), c(3)]).unwrap(), 0.0);
        assert!(entropy_slope(&[c(3), ItineraryCount::Sampled(9)]).is_err());
    }

    #[test]
    fn upper_rates() {
        let ln2 = std::f64::consts::LN_2;
        assert!((upper_bound_rate(&xor2d(), &unit_square()).unwrap() - 0.5 * ln2).abs() < 1e-12);
        assert!((upper_bound_rate(&cross(), &unit_square()).unwrap() - ln2).abs() < 1e-12);
        let id = LocalRule::identity(2, 2);
        assert_eq!(upper_bound_rate(&id, &unit_square()).unwrap(), 0.0);
    }

    #[test]
    fn refinement_factors() {
        let j = unit_square().scale(&Rational::from_integer(2));
        assert_eq!(refinement_lower_bound(&xor2d(), &j, 1).unwrap(), BigUint::from(1u32 << 9));
        assert_eq!(refinement_lower_bound(&cross(), &j, 1).unwrap(), BigUint::from(1u32 << 16));
        assert_eq!(refinement_lower_bound(&cross(), &j, 0).unwrap(), BigUint::from(1u32));
        let and = LocalRule::from_fn(2, 2, vec![lv(&[0, 0]), lv(&[1, 0])], |w| w[0] & w[1]).unwrap();
        assert!(matches!(refinement_lower_bound(&and, &j, 1), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn table_rows() {
        let spec = ExhaustionSpec {
            label: "square".into(),
            shape: unit_square(),
            scales: vec![1, 2],
        };
        let t = rescaled_entropy_table(&xor2d(), &spec, 2, CountMode::Linear).unwrap();
        assert_eq!(t.rows.len(), 4);
        let ln2 = std::f64::consts::LN_2;
        for r in &t.rows {
            let n = r.n as f64;
            assert!((r.lower_rate.unwrap() - (4.0 * n + 1.0) / (8.0 * n) * ln2).abs() < 1e-12);
            assert!((r.upper_rate - 0.5 * ln2).abs() < 1e-12);
        }
        assert!((t.rows[1].slope.unwrap() - 5.0 * ln2).abs() < 1e-9);
    }
}
