use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::growth::growth_hull_shrink;
use crate::ca::{power, LocalRule, Pattern};
use crate::entropy::{itinerary_count_sampled, itinerary_rank_linear, ItineraryCount};
use crate::error::{Error, Result};
use crate::geometry::Polytope;
use crate::Rational;

const SUBADDITIVITY_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct ExponentRow {
    pub k: usize,
    pub mean_gr: f64,
    /// `mean_gr / (k · p(nO))`.
    pub normalized: f64,
    /// `max gr − min gr` over the samples; zero for permutative rules.
    pub spread: u64,
}

/// Averages of `gr_{nO} f^k` over uniform patterns on `nO`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentEstimate {
    pub n: i64,
    pub p_j: f64,
    pub rows: Vec<ExponentRow>,
    /// Normalized value at the largest `k`.
    pub chi_hat: f64,
    /// Pairs `(k, l)` with `k + l ≤ k_max` where the averaged growth is not
    /// subadditive.
    pub subadditivity_violations: usize,
}

/// `χ̂_O` at scale `n`. Sample `s` draws its pattern from ChaCha8 stream `s` of
/// `seed`, and every `k` sees the same patterns.
pub fn chi_estimate(
    rule: &LocalRule,
    o: &Polytope<Rational>,
    n: i64,
    k_max: usize,
    samples: u64,
    seed: u64,
) -> Result<ExponentEstimate> {
    if k_max == 0 || samples == 0 {
        return Err(Error::invalid("need k_max ≥ 1 and at least one sample"));
    }
    let powers = (1..=k_max)
        .map(|k| {
            power(rule, k)
                .rule
                .ok_or_else(|| Error::limit(format!("table of f^{k}"), crate::ca::TABLE_CAP as u128))
        })
        .collect::<Result<Vec<_>>>()?;
    let j = o.scale(&Rational::from_integer(n as i128));
    let p_j = j.boundary_measure();
    let cells = j.lattice_points()?;
    let q = rule.alphabet();
    let growth: Vec<Vec<u64>> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s);
            let x = Pattern::from_fn(rule.dim(), &cells, |_| rng.gen_range(0..q) as u8);
            powers
                .iter()
                .map(|r| growth_hull_shrink(r, &j, &x).map(|g| g.gr))
                .collect::<Result<Vec<u64>>>()
        })
        .collect::<Result<_>>()?;
    let rows: Vec<ExponentRow> = (0..k_max)
        .map(|t| {
            let col = growth.iter().map(|g| g[t]);
            let mean_gr = col.clone().sum::<u64>() as f64 / samples as f64;
            ExponentRow {
                k: t + 1,
                mean_gr,
                normalized: mean_gr / ((t + 1) as f64 * p_j),
                spread: col.clone().max().unwrap() - col.min().unwrap(),
            }
        })
        .collect();
    let mut violations = 0;
    for a in 1..=k_max {
        for b in a..=k_max - a {
            if rows[a + b - 1].mean_gr > rows[a - 1].mean_gr + rows[b - 1].mean_gr + SUBADDITIVITY_SLACK {
                violations += 1;
            }
        }
    }
    Ok(ExponentEstimate {
        n,
        p_j,
        chi_hat: rows.last().expect("k_max ≥ 1").normalized,
        rows,
        subadditivity_violations: violations,
    })
}

/// Both sides of `h_μ(f, O) ≤ log q · χ_O` under the uniform measure.
#[derive(Clone, Debug, PartialEq)]
pub struct RuelleReport {
    /// Itinerary slope at `k_max`, per unit perimeter.
    pub h_rate: f64,
    /// Whether `h_rate` comes from exact counts (linear rank) or samples.
    pub count: ItineraryCount,
    pub bound: f64,
    pub estimate: ExponentEstimate,
    pub satisfied: bool,
}

/// Relative slack allowed on the Ruelle bound.
pub const RUELLE_SLACK: f64 = 0.05;

/// For algebraic rules the uniform measure is carried to the uniform measure on
/// the image of the itinerary map, so the entropy is `rank · log p` exactly;
/// other rules use sampled itinerary counts.
pub fn ruelle_report(
    rule: &LocalRule,
    o: &Polytope<Rational>,
    n: i64,
    k_max: usize,
    samples: u64,
    seed: u64,
) -> Result<RuelleReport> {
    if k_max < 2 {
        return Err(Error::invalid("the itinerary slope needs k_max ≥ 2"));
    }
    let estimate = chi_estimate(rule, o, n, k_max, samples, seed)?;
    let j = o.scale(&Rational::from_integer(n as i128));
    let ln_q = (rule.alphabet() as f64).ln();
    let (slope, count) = if rule.is_algebraic() {
        let hi = itinerary_rank_linear(rule, &j, k_max)?;
        let lo = itinerary_rank_linear(rule, &j, k_max - 1)?;
        let n_k = num_bigint::BigUint::from(rule.alphabet()).pow(hi as u32);
        ((hi - lo) as f64 * ln_q, ItineraryCount::Exact(n_k))
    } else {
        let hi = itinerary_count_sampled(rule, &j, k_max, samples, seed)?;
        let lo = itinerary_count_sampled(rule, &j, k_max - 1, samples, seed)?;
        ((hi as f64).ln() - (lo as f64).ln(), ItineraryCount::Sampled(hi))
    };
    let h_rate = slope / estimate.p_j;
    let bound = ln_q * estimate.chi_hat;
    Ok(RuelleReport {
        h_rate,
        count,
        bound,
        satisfied: h_rate <= bound * (1.0 + RUELLE_SLACK) + 1e-12,
        estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::LatticeVector;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::new(c)
    }

    fn cube(d: usize, lo: i64, hi: i64) -> Polytope<Rational> {
        Polytope::cube(d, Rational::from_integer(lo as i128), Rational::from_integer(hi as i128)).unwrap()
    }

    fn xor2d() -> LocalRule {
        LocalRule::algebraic(2, 2, &[(lv(&[1, 0]), 1), (lv(&[0, 1]), 1)]).unwrap()
    }

    #[test]
    fn shift_loses_one_cell_per_step() {
        let shift = LocalRule::shift(lv(&[1]), 2);
        let e = chi_estimate(&shift, &cube(1, 0, 1), 6, 3, 4, 1).unwrap();
        for r in &e.rows {
            assert_eq!(r.mean_gr, r.k as f64);
            assert!((r.normalized - 0.5).abs() < 1e-12);
        }
        assert_eq!(e.subadditivity_violations, 0);
    }

    #[test]
    fn xor_growth_is_pattern_independent() {
        let n = 5;
        let e = chi_estimate(&xor2d(), &cube(2, -1, 1), n, 2, 6, 3).unwrap();
        let m = (2 * n + 1) as f64;
        for r in &e.rows {
            let k = r.k as f64;
            assert_eq!(r.spread, 0);
            assert_eq!(r.mean_gr, 2.0 * k * m - k * k);
        }
    }

    #[test]
    fn identity_has_zero_exponent() {
        let id = LocalRule::identity(2, 2);
        let r = ruelle_report(&id, &cube(2, -1, 1), 3, 2, 4, 0).unwrap();
        assert_eq!(r.estimate.chi_hat, 0.0);
        assert_eq!(r.h_rate, 0.0);
        assert!(r.satisfied);
    }

    #[test]
    fn xor_ruelle_holds() {
        let r = ruelle_report(&xor2d(), &cube(2, -1, 1), 10, 2, 2, 0).unwrap();
        assert!(r.satisfied, "{r:?}");
        assert!((r.h_rate - 41.0 / 80.0 * std::f64::consts::LN_2).abs() < 1e-12);
    }
}
