use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::ca::{local_apply, power, LocalRule, Pattern, RuleBody};
use crate::error::{Error, Result};
use crate::geometry::{lattice_sum, LatticeVector, Polytope};
use crate::Rational;

/// Largest number of assignments `q^#W_k` enumerated in exact mode.
pub const ENUMERATION_CAP: u128 = 1 << 28;

const SAMPLE_CHUNK: usize = 4096;

enum Stepper {
    /// Per step `l ≥ 1`: the rule of `f^l` and, per window cell, the indices of
    /// `j + I_l` inside the support.
    Powers(Vec<(LocalRule, Vec<Vec<usize>>)>),
    /// Powers past the table cap: iterate `f` on the whole support.
    Iterated(LocalRule),
}

/// Enumeration layout: the support `W_k` lists the window `J` first.
struct Itineraries {
    q: u32,
    window: usize,
    cells: Vec<LatticeVector>,
    k: usize,
    stepper: Stepper,
}

impl Itineraries {
    fn new(rule: &LocalRule, j: &Polytope<Rational>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("itineraries need at least one step"));
        }
        if j.dim() != rule.dim() {
            return Err(Error::invalid("window and rule dimensions differ"));
        }
        let window = j.lattice_points()?;
        let mut powers = Vec::with_capacity(k.saturating_sub(1));
        for l in 1..k {
            match power(rule, l).rule {
                Some(r) => powers.push(r),
                None => break,
            }
        }
        let mut extra: Vec<LatticeVector> = if powers.len() + 1 == k {
            powers
                .iter()
                .flat_map(|r| lattice_sum(&window, r.domain()))
                .collect()
        } else {
            let mut step = rule.domain().to_vec();
            step.push(LatticeVector::zero(rule.dim()));
            let mut grown = window.clone();
            for _ in 1..k {
                grown = lattice_sum(&grown, &step);
            }
            grown
        };
        extra.sort_unstable();
        extra.dedup();
        let in_window: std::collections::BTreeSet<_> = window.iter().copied().collect();
        extra.retain(|v| !in_window.contains(v));
        let mut cells = window.clone();
        cells.extend(extra);

        let stepper = if powers.len() + 1 == k {
            let index: HashMap<LatticeVector, usize> =
                cells.iter().enumerate().map(|(t, &v)| (v, t)).collect();
            Stepper::Powers(
                powers
                    .into_iter()
                    .map(|r| {
                        let idx = window
                            .iter()
                            .map(|&x| r.domain().iter().map(|&i| index[&(x + i)]).collect())
                            .collect();
                        (r, idx)
                    })
                    .collect(),
            )
        } else {
            Stepper::Iterated(rule.clone())
        };
        Ok(Itineraries {
            q: rule.alphabet(),
            window: window.len(),
            cells,
            k,
            stepper,
        })
    }

    /// Appends the symbols of `f^l x|_J` for `l = 1..k−1`.
    fn tail(&self, x: &[u8], buf: &mut Vec<u8>, out: &mut Vec<u8>) {
        match &self.stepper {
            Stepper::Powers(steps) => {
                for (r, idx) in steps {
                    for cell in idx {
                        buf.clear();
                        buf.extend(cell.iter().map(|&t| x[t]));
                        out.push(r.eval(buf));
                    }
                }
            }
            Stepper::Iterated(rule) => {
                let cells: Vec<_> = self.cells.iter().copied().zip(x.iter().copied()).collect();
                let mut p = Pattern::from_cells(rule.dim(), &cells);
                for _ in 1..self.k {
                    p = local_apply(rule, &p);
                    out.extend(
                        self.cells[..self.window]
                            .iter()
                            .map(|&v| p.get(v).expect("support covers every dependence")),
                    );
                }
            }
        }
    }

    fn assignments(&self) -> Option<u128> {
        (self.q as u128).checked_pow(self.cells.len() as u32)
    }

    fn symbol_bits(&self) -> u32 {
        32 - (self.q - 1).leading_zeros()
    }
}

/// Cells whose initial symbol can influence the itinerary of `J` over `k`
/// steps: `J ∪ ⋃_{1≤l<k} (J + I_l)` from the minimized powers, or the coarser
/// `J ⊕ (I ∪ {0})^{⊕(k−1)}` when a power exceeds the table cap.
pub fn dependence_support(rule: &LocalRule, j: &Polytope<Rational>, k: usize) -> Result<Vec<LatticeVector>> {
    let mut cells = Itineraries::new(rule, j, k)?.cells;
    cells.sort_unstable();
    Ok(cells)
}

fn pack(symbols: &[u8], bits: u32) -> u128 {
    symbols.iter().fold(0u128, |acc, &s| (acc << bits) | s as u128)
}

fn decode_into(mut idx: u128, q: u32, out: &mut [u8]) {
    for s in out.iter_mut().rev() {
        *s = (idx % q as u128) as u8;
        idx /= q as u128;
    }
}

fn distinct<K: Ord>(mut keys: Vec<K>) -> u64 {
    keys.sort_unstable();
    keys.dedup();
    keys.len() as u64
}

/// `N_k(J)`, the number of distinct `(x|_J, fx|_J, …, f^{k−1}x|_J)`, by
/// enumerating every assignment of the dependence support.
pub fn itinerary_count_exact(rule: &LocalRule, j: &Polytope<Rational>, k: usize) -> Result<BigUint> {
    itinerary_count_exact_capped(rule, j, k, ENUMERATION_CAP)
}

pub fn itinerary_count_exact_capped(
    rule: &LocalRule,
    j: &Polytope<Rational>,
    k: usize,
    cap: u128,
) -> Result<BigUint> {
    let it = Itineraries::new(rule, j, k)?;
    let q = it.q;
    if k == 1 {
        return Ok(BigUint::from(q).pow(it.window as u32));
    }
    if it.assignments().is_none_or(|n| n > cap) {
        return Err(Error::limit(
            format!("{q}^{} assignments for exact itineraries; use sampled mode", it.cells.len()),
            cap,
        ));
    }
    // Distinct itineraries split by their first component x|_J, so count the
    // distinct tails per window assignment and add up.
    let outer = (q as u128).pow(it.window as u32) as u64;
    let rest = it.cells.len() - it.window;
    let inner = (q as u128).pow(rest as u32) as u64;
    let tail_len = (k - 1) * it.window;
    let bits = it.symbol_bits();
    let packed = tail_len as u32 * bits <= 128;
    let total: u64 = (0..outer)
        .into_par_iter()
        .map_init(
            || (vec![0u8; it.cells.len()], Vec::new(), Vec::with_capacity(tail_len)),
            |(x, buf, tail), a| {
                decode_into(a as u128, q, &mut x[..it.window]);
                let mut packed_keys = Vec::new();
                let mut wide_keys = Vec::new();
                for c in 0..inner {
                    decode_into(c as u128, q, &mut x[it.window..]);
                    tail.clear();
                    it.tail(x, buf, tail);
                    if packed {
                        packed_keys.push(pack(tail, bits));
                    } else {
                        wide_keys.push(tail.clone());
                    }
                }
                if packed {
                    distinct(packed_keys)
                } else {
                    distinct(wide_keys)
                }
            },
        )
        .sum();
    Ok(BigUint::from(total))
}

fn hashed(symbols: &[u8]) -> u128 {
    let mut a = DefaultHasher::new();
    symbols.hash(&mut a);
    let mut b = DefaultHasher::new();
    0xa5u8.hash(&mut b);
    symbols.hash(&mut b);
    ((a.finish() as u128) << 64) | b.finish() as u128
}

/// Distinct itineraries among `samples` uniform assignments of the dependence
/// support. Always a lower bound on `N_k`; deterministic for a given seed.
/// Sample chunk `c` draws from stream `c` of a ChaCha8 generator seeded with
/// `seed`, so the result does not depend on the thread count.
pub fn itinerary_count_sampled(
    rule: &LocalRule,
    j: &Polytope<Rational>,
    k: usize,
    samples: u64,
    seed: u64,
) -> Result<u64> {
    if samples == 0 {
        return Err(Error::invalid("at least one sample is required"));
    }
    let it = Itineraries::new(rule, j, k)?;
    let q = it.q;
    let bits = it.symbol_bits();
    // wide itineraries are keyed by a 128-bit hash; a collision can only merge
    // two itineraries, which keeps the count a lower bound
    let packed = (k * it.window) as u32 * bits <= 128;
    let chunks = samples.div_ceil(SAMPLE_CHUNK as u64);
    let keys: Vec<u128> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let n = (samples - c * SAMPLE_CHUNK as u64).min(SAMPLE_CHUNK as u64);
            let mut x = vec![0u8; it.cells.len()];
            let mut buf = Vec::new();
            let mut path = Vec::new();
            let mut keys = Vec::with_capacity(n as usize);
            for _ in 0..n {
                x.iter_mut().for_each(|s| *s = rng.gen_range(0..q) as u8);
                path.clear();
                path.extend_from_slice(&x[..it.window]);
                it.tail(&x, &mut buf, &mut path);
                keys.push(if packed { pack(&path, bits) } else { hashed(&path) });
            }
            keys
        })
        .collect();
    Ok(distinct(keys))
}

/// Rank of the itinerary map of an algebraic rule over 𝔽_p. The map
/// `x|_W ↦ (x|_J, …, f^{k−1}x|_J)` is linear, so `N_k = p^rank` and the uniform
/// measure pushes forward to the uniform measure on the image.
pub fn itinerary_rank_linear(rule: &LocalRule, j: &Polytope<Rational>, k: usize) -> Result<usize> {
    let RuleBody::Algebraic { prime, .. } = rule.body() else {
        return Err(Error::NotApplicable("linear itinerary counts need an algebraic rule".into()));
    };
    let it = Itineraries::new(rule, j, k)?;
    let Stepper::Powers(steps) = &it.stepper else {
        return Err(Error::NotApplicable("power of the rule is not available".into()));
    };
    // the first component is the identity on J; eliminate it and keep only
    // columns outside the window
    let cols = it.cells.len() - it.window;
    let mut reducer = Reducer::new(*prime, cols);
    for (r, idx) in steps {
        let coeffs: Vec<u32> = match r.body() {
            RuleBody::Algebraic { coefficients, .. } => coefficients.clone(),
            // composition collapsed to a constant
            RuleBody::Table(_) if r.domain().is_empty() => Vec::new(),
            RuleBody::Table(_) => return Err(Error::NotApplicable("power is not algebraic".into())),
        };
        for cell in idx {
            let mut row = vec![0u32; cols];
            for (&t, &a) in cell.iter().zip(&coeffs) {
                if t >= it.window {
                    row[t - it.window] = (row[t - it.window] + a) % prime;
                }
            }
            reducer.insert(row);
        }
    }
    Ok(it.window + reducer.rank)
}

pub fn itinerary_count_linear(rule: &LocalRule, j: &Polytope<Rational>, k: usize) -> Result<BigUint> {
    let rank = itinerary_rank_linear(rule, j, k)?;
    Ok(BigUint::from(rule.alphabet()).pow(rank as u32))
}

/// Incremental row echelon basis over 𝔽_p; `p = 2` uses packed words.
struct Reducer {
    p: u32,
    cols: usize,
    rank: usize,
    dense: Vec<Option<Vec<u32>>>,
    bits: Vec<Option<Vec<u64>>>,
}

impl Reducer {
    fn new(p: u32, cols: usize) -> Self {
        Reducer {
            p,
            cols,
            rank: 0,
            dense: if p == 2 { Vec::new() } else { vec![None; cols] },
            bits: if p == 2 { vec![None; cols] } else { Vec::new() },
        }
    }

    fn insert(&mut self, row: Vec<u32>) {
        if self.p == 2 {
            let mut w = vec![0u64; self.cols.div_ceil(64)];
            for (c, &v) in row.iter().enumerate() {
                if v & 1 == 1 {
                    w[c / 64] |= 1 << (c % 64);
                }
            }
            for c in 0..self.cols {
                if w[c / 64] >> (c % 64) & 1 == 0 {
                    continue;
                }
                match &self.bits[c] {
                    Some(b) => w.iter_mut().zip(b).for_each(|(x, y)| *x ^= y),
                    None => {
                        self.bits[c] = Some(w);
                        self.rank += 1;
                        return;
                    }
                }
            }
            return;
        }
        let p = self.p as u64;
        let mut row = row;
        for c in 0..self.cols {
            if row[c] == 0 {
                continue;
            }
            match &self.dense[c] {
                Some(b) => {
                    let f = row[c] as u64;
                    for (x, &y) in row.iter_mut().zip(b) {
                        *x = ((*x as u64 + (p - f) * y as u64) % p) as u32;
                    }
                }
                None => {
                    let inv = mod_pow(row[c] as u64, p - 2, p);
                    for x in row.iter_mut() {
                        *x = (*x as u64 * inv % p) as u32;
                    }
                    self.dense[c] = Some(row);
                    self.rank += 1;
                    return;
                }
            }
        }
    }
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::new(c)
    }

    fn segment(lo: i64, hi: i64) -> Polytope<Rational> {
        Polytope::cube(1, Rational::from_integer(lo as i128), Rational::from_integer(hi as i128)).unwrap()
    }

    fn square(lo: i64, hi: i64) -> Polytope<Rational> {
        Polytope::cube(2, Rational::from_integer(lo as i128), Rational::from_integer(hi as i128)).unwrap()
    }

    fn ledrappier() -> LocalRule {
        LocalRule::algebraic(1, 2, &[(lv(&[0]), 1), (lv(&[1]), 1)]).unwrap()
    }

    fn xor2d() -> LocalRule {
        LocalRule::algebraic(2, 2, &[(lv(&[1, 0]), 1), (lv(&[0, 1]), 1)]).unwrap()
    }

    #[test]
    fn shift_support_grows_one_cell_per_step() {
        let shift = LocalRule::shift(lv(&[1]), 2);
        let w = dependence_support(&shift, &segment(0, 3), 4).unwrap();
        assert_eq!(w, (0..=6).map(|i| lv(&[i])).collect::<Vec<_>>());
        assert_eq!(dependence_support(&shift, &segment(0, 3), 1).unwrap().len(), 4);
    }

    #[test]
    fn xor_support_is_one_dilation() {
        let w = dependence_support(&xor2d(), &square(0, 2), 2).unwrap();
        assert_eq!(w.len(), 15);
        assert_eq!(dependence_support(&xor2d(), &square(0, 2), 3).unwrap().len(), 21);
    }

    #[test]
    fn ledrappier_counts() {
        for m in 0..4 {
            for k in 1..5 {
                let n = itinerary_count_exact(&ledrappier(), &segment(0, m), k).unwrap();
                assert_eq!(n, BigUint::from(2u32).pow((m + k as i64) as u32), "m={m} k={k}");
            }
        }
    }

    #[test]
    fn table_and_algebraic_agree() {
        let table = xor2d().algebraic_to_table().unwrap();
        let j = square(0, 1);
        for k in 1..=3 {
            let a = itinerary_count_exact(&xor2d(), &j, k).unwrap();
            let b = itinerary_count_exact(&table, &j, k).unwrap();
            let c = itinerary_count_linear(&xor2d(), &j, k).unwrap();
            assert_eq!(a, b);
            assert_eq!(a, c);
        }
    }

    #[test]
    fn cap_is_reported() {
        let err = itinerary_count_exact_capped(&xor2d(), &square(0, 2), 3, 1 << 10).unwrap_err();
        assert!(err.is_resource_limit());
    }

    #[test]
    fn sampled_is_bounded_and_deterministic() {
        let j = segment(0, 4);
        let a = itinerary_count_sampled(&ledrappier(), &j, 4, 20_000, 7).unwrap();
        let b = itinerary_count_sampled(&ledrappier(), &j, 4, 20_000, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, 256);
        assert_eq!(itinerary_count_sampled(&ledrappier(), &j, 4, 1, 3).unwrap(), 1);
    }

    #[test]
    fn linear_rank_over_f3() {
        let r = LocalRule::algebraic(1, 3, &[(lv(&[-1]), 1), (lv(&[1]), 2)]).unwrap();
        let j = segment(0, 2);
        for k in 1..=3 {
            let exact = itinerary_count_exact(&r, &j, k).unwrap();
            assert_eq!(exact, itinerary_count_linear(&r, &j, k).unwrap());
        }
    }
}
