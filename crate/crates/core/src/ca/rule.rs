use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::geometry::{LatticeVector, Polytope};
use crate::Rational;

/// Largest table a rule may carry (`q^|I|` entries).
pub const TABLE_CAP: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleBody {
    /// Dense table indexed in mixed radix `q`, first domain cell most significant.
    Table(Vec<u8>),
    /// `F(u) = Σ a_i u_i mod p`, coefficients aligned with the domain.
    Algebraic { prime: u32, coefficients: Vec<u32> },
}

/// Local rule `F : 𝒜^I → 𝒜` of a cellular automaton `(fx)_j = F((x_{j+i})_{i∈I})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalRule {
    dim: usize,
    alphabet: u32,
    domain: Vec<LatticeVector>,
    body: RuleBody,
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn checked_table_size(q: u32, m: usize) -> Result<usize> {
    let size = (q as u64).checked_pow(m as u32).filter(|&s| s <= TABLE_CAP);
    size.map(|s| s as usize)
        .ok_or_else(|| Error::limit(format!("rule table {q}^{m}"), TABLE_CAP as u128))
}

fn check_domain(dim: usize, domain: &[LatticeVector]) -> Result<()> {
    crate::geometry::polytope::check_dim(dim)?;
    if domain.iter().any(|v| v.dim() != dim) {
        return Err(Error::invalid("domain vector of wrong dimension"));
    }
    let mut sorted = domain.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid("domain entries must be distinct"));
    }
    Ok(())
}

impl LocalRule {
    /// Algebraic rule over 𝔽_p. Coefficients are reduced mod p and must be
    /// nonzero; the domain is stored in lexicographic order.
    pub fn algebraic(dim: usize, prime: u32, cells: &[(LatticeVector, i64)]) -> Result<Self> {
        if !is_prime(prime as u64) || prime > 256 {
            return Err(Error::invalid(format!("{prime} is not a prime alphabet size")));
        }
        let domain: Vec<LatticeVector> = cells.iter().map(|c| c.0).collect();
        check_domain(dim, &domain)?;
        let mut cells: Vec<(LatticeVector, u32)> = cells
            .iter()
            .map(|&(v, a)| (v, a.rem_euclid(prime as i64) as u32))
            .collect();
        if let Some((v, _)) = cells.iter().find(|c| c.1 == 0) {
            return Err(Error::invalid(format!("coefficient at {v} is zero mod {prime}")));
        }
        cells.sort_unstable();
        Ok(LocalRule {
            dim,
            alphabet: prime,
            domain: cells.iter().map(|c| c.0).collect(),
            body: RuleBody::Algebraic {
                prime,
                coefficients: cells.iter().map(|c| c.1).collect(),
            },
        })
    }

    /// Table rule; coordinates the table does not depend on are dropped.
    pub fn table(dim: usize, alphabet: u32, domain: Vec<LatticeVector>, table: Vec<u8>) -> Result<Self> {
        if !(2..=256).contains(&alphabet) {
            return Err(Error::invalid(format!("alphabet size {alphabet} out of range")));
        }
        check_domain(dim, &domain)?;
        let size = checked_table_size(alphabet, domain.len())?;
        if table.len() != size {
            return Err(Error::invalid(format!(
                "table has {} entries, expected {size}",
                table.len()
            )));
        }
        if table.iter().any(|&s| s as u32 >= alphabet) {
            return Err(Error::invalid("table symbol outside the alphabet"));
        }
        Ok(LocalRule {
            dim,
            alphabet,
            domain,
            body: RuleBody::Table(table),
        }
        .minimized())
    }

    /// Table rule from a function of the window (values in domain order).
    pub fn from_fn(
        dim: usize,
        alphabet: u32,
        domain: Vec<LatticeVector>,
        f: impl Fn(&[u8]) -> u8,
    ) -> Result<Self> {
        let size = checked_table_size(alphabet, domain.len())?;
        let mut window = vec![0u8; domain.len()];
        let table = (0..size)
            .map(|idx| {
                decode(idx, alphabet, &mut window);
                f(&window)
            })
            .collect();
        Self::table(dim, alphabet, domain, table)
    }

    pub fn identity(dim: usize, alphabet: u32) -> Self {
        Self::shift(LatticeVector::zero(dim), alphabet)
    }

    /// `(fx)_j = x_{j+v}`.
    pub fn shift(v: LatticeVector, alphabet: u32) -> Self {
        LocalRule {
            dim: v.dim(),
            alphabet,
            domain: vec![v],
            body: RuleBody::Table((0..alphabet).map(|s| s as u8).collect()),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn domain(&self) -> &[LatticeVector] {
        &self.domain
    }

    pub fn body(&self) -> &RuleBody {
        &self.body
    }

    pub fn is_algebraic(&self) -> bool {
        matches!(self.body, RuleBody::Algebraic { .. })
    }

    /// Coefficients over 𝔽_p, when the rule is algebraic.
    pub fn coefficients(&self) -> Option<&[u32]> {
        match &self.body {
            RuleBody::Algebraic { coefficients, .. } => Some(coefficients),
            RuleBody::Table(_) => None,
        }
    }

    pub fn eval(&self, window: &[u8]) -> u8 {
        match &self.body {
            RuleBody::Table(t) => t[encode(window, self.alphabet)],
            RuleBody::Algebraic { prime, coefficients } => {
                let s: u64 = coefficients
                    .iter()
                    .zip(window)
                    .map(|(&a, &u)| a as u64 * u as u64)
                    .sum();
                (s % *prime as u64) as u8
            }
        }
    }

    /// Dense table form (`q^|I|` entries); fails past [`TABLE_CAP`].
    pub fn to_table(&self) -> Result<Vec<u8>> {
        match &self.body {
            RuleBody::Table(t) => Ok(t.clone()),
            RuleBody::Algebraic { .. } => {
                let size = checked_table_size(self.alphabet, self.domain.len())?;
                let mut w = vec![0u8; self.domain.len()];
                Ok((0..size)
                    .map(|idx| {
                        decode(idx, self.alphabet, &mut w);
                        self.eval(&w)
                    })
                    .collect())
            }
        }
    }

    /// The same map carried as a table rule.
    pub fn algebraic_to_table(&self) -> Result<LocalRule> {
        let table = self.to_table()?;
        Ok(LocalRule {
            dim: self.dim,
            alphabet: self.alphabet,
            domain: self.domain.clone(),
            body: RuleBody::Table(table),
        })
    }

    /// `𝕀 = cv(I ∪ {0})`.
    pub fn hull(&self) -> Polytope<Rational> {
        let mut pts = self.domain.clone();
        pts.push(LatticeVector::zero(self.dim));
        Polytope::from_lattice(self.dim, &pts).expect("rule dimension is valid")
    }

    /// Drop coordinates the table does not depend on.
    fn minimized(self) -> Self {
        let RuleBody::Table(table) = &self.body else {
            return self;
        };
        let q = self.alphabet as usize;
        let m = self.domain.len();
        let keep: Vec<usize> = (0..m)
            .filter(|&t| {
                let stride = q.pow((m - 1 - t) as u32);
                (0..table.len())
                    .filter(|idx| (idx / stride).is_multiple_of(q))
                    .any(|idx| (1..q).any(|b| table[idx + b * stride] != table[idx]))
            })
            .collect();
        if keep.len() == m {
            return self;
        }
        let mut full = vec![0u8; m];
        let mut reduced = vec![0u8; keep.len()];
        let new_size = q.pow(keep.len() as u32);
        let new_table = (0..new_size)
            .map(|idx| {
                decode(idx, self.alphabet, &mut reduced);
                full.iter_mut().for_each(|x| *x = 0);
                for (k, &t) in keep.iter().enumerate() {
                    full[t] = reduced[k];
                }
                table[encode(&full, self.alphabet)]
            })
            .collect();
        LocalRule {
            dim: self.dim,
            alphabet: self.alphabet,
            domain: keep.iter().map(|&t| self.domain[t]).collect(),
            body: RuleBody::Table(new_table),
        }
    }
}

pub(crate) fn encode(window: &[u8], q: u32) -> usize {
    window
        .iter()
        .fold(0usize, |acc, &u| acc * q as usize + u as usize)
}

pub(crate) fn decode(mut idx: usize, q: u32, out: &mut [u8]) {
    for slot in out.iter_mut().rev() {
        *slot = (idx % q as usize) as u8;
        idx /= q as usize;
    }
}

fn check_compatible(a: &LocalRule, b: &LocalRule) -> Result<()> {
    if a.dim != b.dim || a.alphabet != b.alphabet {
        return Err(Error::invalid("rules differ in dimension or alphabet"));
    }
    Ok(())
}

/// `outer ∘ inner`, i.e. `(f_outer (f_inner x))`. Algebraic pairs compose by
/// convolution; anything else goes through a table on `I_outer ⊕ I_inner`.
pub fn compose(outer: &LocalRule, inner: &LocalRule) -> Result<LocalRule> {
    check_compatible(outer, inner)?;
    if let (
        RuleBody::Algebraic { prime, coefficients: a },
        RuleBody::Algebraic { coefficients: b, .. },
    ) = (&outer.body, &inner.body)
    {
        let p = *prime as u64;
        let mut acc: BTreeMap<LatticeVector, u64> = BTreeMap::new();
        for (u, &x) in outer.domain.iter().zip(a) {
            for (v, &y) in inner.domain.iter().zip(b) {
                *acc.entry(*u + *v).or_default() += x as u64 * y as u64;
            }
        }
        let cells: Vec<(LatticeVector, i64)> = acc
            .into_iter()
            .filter(|&(_, c)| c % p != 0)
            .map(|(v, c)| (v, (c % p) as i64))
            .collect();
        if cells.is_empty() {
            // the zero map; carried as a constant table
            return LocalRule::table(outer.dim, outer.alphabet, Vec::new(), vec![0]);
        }
        return LocalRule::algebraic(outer.dim, *prime, &cells);
    }
    compose_tables(outer, inner)
}

/// Composition through an explicit table on the Minkowski-sum domain, then
/// minimized.
pub fn compose_tables(outer: &LocalRule, inner: &LocalRule) -> Result<LocalRule> {
    check_compatible(outer, inner)?;
    let sum = crate::geometry::lattice_sum(&outer.domain, &inner.domain);
    let domain = if outer.domain.is_empty() || inner.domain.is_empty() {
        Vec::new()
    } else {
        sum
    };
    let size = checked_table_size(outer.alphabet, domain.len())?;
    let pos: Vec<Vec<usize>> = outer
        .domain
        .iter()
        .map(|u| {
            inner
                .domain
                .iter()
                .map(|v| domain.binary_search(&(*u + *v)).expect("sum lies in domain"))
                .collect()
        })
        .collect();
    let mut w = vec![0u8; domain.len()];
    let mut mid = vec![0u8; outer.domain.len()];
    let mut inw = vec![0u8; inner.domain.len()];
    let table = (0..size)
        .map(|idx| {
            decode(idx, outer.alphabet, &mut w);
            for (k, row) in pos.iter().enumerate() {
                for (t, &p) in row.iter().enumerate() {
                    inw[t] = w[p];
                }
                mid[k] = inner.eval(&inw);
            }
            outer.eval(&mid)
        })
        .collect();
    LocalRule::table(outer.dim, outer.alphabet, domain, table)
}

/// Domain data of `f^k`: the exact minimized domain when the power could be
/// built, and the hull `𝕀_k` (equal to `k𝕀` when only the bound is known).
#[derive(Clone, Debug)]
pub struct DerivedDomain {
    pub k: usize,
    pub domain: Option<Vec<LatticeVector>>,
    pub hull: Polytope<Rational>,
}

#[derive(Clone, Debug)]
pub struct PowerResult {
    pub rule: Option<LocalRule>,
    pub derived: DerivedDomain,
}

/// `f^k` by repeated composition; past the table cap only the bound `k𝕀` is kept.
pub fn power(rule: &LocalRule, k: usize) -> PowerResult {
    let mut current = if k == 0 {
        LocalRule::identity(rule.dim, rule.alphabet)
    } else {
        rule.clone()
    };
    for _ in 1..k.max(1) {
        match compose(rule, &current) {
            Ok(next) => current = next,
            Err(_) => {
                let hull = rule.hull().scale(&Rational::from_integer(k as i128));
                return PowerResult {
                    rule: None,
                    derived: DerivedDomain {
                        k,
                        domain: None,
                        hull,
                    },
                };
            }
        }
    }
    let hull = current.hull();
    PowerResult {
        derived: DerivedDomain {
            k,
            domain: Some(current.domain.clone()),
            hull,
        },
        rule: Some(current),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::new(c)
    }

    #[test]
    fn algebraic_tables() {
        let xor = LocalRule::algebraic(1, 2, &[(lv(&[0]), 1), (lv(&[1]), 1)]).unwrap();
        assert_eq!(xor.to_table().unwrap(), vec![0, 1, 1, 0]);
        let r3 = LocalRule::algebraic(1, 3, &[(lv(&[0]), 1), (lv(&[1]), 2)]).unwrap();
        let t = r3.to_table().unwrap();
        assert_eq!(t.len(), 9);
        for u0 in 0..3u8 {
            for u1 in 0..3u8 {
                assert_eq!(t[(u0 * 3 + u1) as usize], (u0 + 2 * u1) % 3);
            }
        }
        assert!(LocalRule::algebraic(1, 4, &[(lv(&[0]), 1)]).is_err());
        assert!(LocalRule::algebraic(1, 2, &[(lv(&[0]), 2)]).is_err());
    }

    #[test]
    fn minimization_drops_dummy_cells() {
        let r = LocalRule::from_fn(1, 2, vec![lv(&[0]), lv(&[1]), lv(&[2])], |w| w[0] ^ w[2]).unwrap();
        assert_eq!(r.domain(), &[lv(&[0]), lv(&[2])]);
        assert_eq!(r.to_table().unwrap(), vec![0, 1, 1, 0]);
    }

    #[test]
    fn powers() {
        let xor = LocalRule::algebraic(1, 2, &[(lv(&[0]), 1), (lv(&[1]), 1)]).unwrap();
        let sq = power(&xor, 2).rule.unwrap();
        assert_eq!(sq.domain(), &[lv(&[0]), lv(&[2])]);
        let sq_table = compose_tables(&xor.algebraic_to_table().unwrap(), &xor.algebraic_to_table().unwrap()).unwrap();
        assert_eq!(sq_table.domain(), &[lv(&[0]), lv(&[2])]);
        let shift = LocalRule::shift(lv(&[1]), 2);
        assert_eq!(power(&shift, 3).rule.unwrap().domain(), &[lv(&[3])]);
        let xor2 = LocalRule::algebraic(2, 2, &[(lv(&[1, 0]), 1), (lv(&[0, 1]), 1)]).unwrap();
        let sq2 = power(&xor2, 2).rule.unwrap();
        // the (1,1) coefficient is 2 = 0 mod 2
        assert_eq!(sq2.domain(), &[lv(&[0, 2]), lv(&[2, 0])]);
    }
}
