use crate::error::{Error, Result};
use crate::geometry::LatticeVector;

use super::pattern::{box_points, candidate_box, Pattern};
use super::rule::{decode, LocalRule, RuleBody};

/// `b ↦ F(P^i_b)` is a bijection of 𝒜 for every assignment `P` of `I∖{i}`.
pub fn is_permutative_at(rule: &LocalRule, i: LatticeVector) -> Result<bool> {
    let t = rule
        .domain()
        .iter()
        .position(|&v| v == i)
        .ok_or_else(|| Error::invalid(format!("{i} is not in the rule domain")))?;
    match rule.body() {
        RuleBody::Algebraic { .. } => Ok(true),
        RuleBody::Table(table) => {
            let q = rule.alphabet() as usize;
            let m = rule.domain().len();
            let stride = q.pow((m - 1 - t) as u32);
            let mut seen = vec![false; q];
            for idx in (0..table.len()).filter(|idx| (idx / stride).is_multiple_of(q)) {
                seen.iter_mut().for_each(|s| *s = false);
                for b in 0..q {
                    let s = table[idx + b * stride] as usize;
                    if seen[s] {
                        return Ok(false);
                    }
                    seen[s] = true;
                }
            }
            Ok(true)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutativityReport {
    pub permutative: bool,
    /// Nonzero extreme points of `𝕀` with the verdict at each.
    pub checked: Vec<(LatticeVector, bool)>,
}

/// Permutativity at every nonzero extreme point of `𝕀 = cv(I ∪ {0})`.
pub fn is_permutative(rule: &LocalRule) -> PermutativityReport {
    let hull = rule.hull();
    let checked: Vec<(LatticeVector, bool)> = hull
        .integral_vertices()
        .expect("hull of lattice points is integral")
        .into_iter()
        .filter(|v| !v.is_zero())
        .map(|v| (v, is_permutative_at(rule, v).expect("extreme points lie in the domain")))
        .collect();
    PermutativityReport {
        permutative: checked.iter().all(|c| c.1),
        checked,
    }
}

/// Coordinates `j` where `(fy)_j` is the same for every `y` extending `x`: the
/// local rule is constant over all completions of the unknown cells of `j + I`.
/// Only positions whose window meets the support are reported; a rule with
/// empty domain reports the support itself.
pub fn determined_coordinates(rule: &LocalRule, x: &Pattern) -> Vec<LatticeVector> {
    let dom = rule.domain();
    if dom.is_empty() {
        return x.support();
    }
    let Some((lo, hi)) = candidate_box(rule, x) else {
        return Vec::new();
    };
    let q = rule.alphabet();
    let mut window = vec![0u8; dom.len()];
    let mut unknown = Vec::with_capacity(dom.len());
    let mut fill = vec![0u8; dom.len()];
    let mut out = Vec::new();
    for j in box_points(&lo, &hi) {
        unknown.clear();
        let mut any_known = false;
        for (t, &i) in dom.iter().enumerate() {
            match x.get(j + i) {
                Some(s) => {
                    window[t] = s;
                    any_known = true;
                }
                None => {
                    window[t] = 0;
                    unknown.push(t);
                }
            }
        }
        if !any_known {
            continue;
        }
        let determined = if unknown.is_empty() {
            true
        } else if rule.is_algebraic() {
            false
        } else {
            let first = rule.eval(&window);
            let total = (q as usize).pow(unknown.len() as u32);
            (1..total).all(|c| {
                decode(c, q, &mut fill[..unknown.len()]);
                for (k, &t) in unknown.iter().enumerate() {
                    window[t] = fill[k];
                }
                rule.eval(&window) == first
            })
        };
        if determined {
            out.push(j);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::new(c)
    }

    fn and_rule() -> LocalRule {
        LocalRule::from_fn(1, 2, vec![lv(&[0]), lv(&[1])], |w| w[0] & w[1]).unwrap()
    }

    #[test]
    fn permutativity() {
        let xor2 = LocalRule::algebraic(2, 2, &[(lv(&[1, 0]), 1), (lv(&[0, 1]), 1)]).unwrap();
        let rep = is_permutative(&xor2);
        assert!(rep.permutative);
        assert_eq!(rep.checked.len(), 2);
        let table = xor2.algebraic_to_table().unwrap();
        assert!(is_permutative_at(&table, lv(&[1, 0])).unwrap());
        assert!(!is_permutative_at(&and_rule(), lv(&[1])).unwrap());
        assert!(!is_permutative(&and_rule()).permutative);
        assert!(is_permutative_at(&and_rule(), lv(&[5])).is_err());
    }

    #[test]
    fn determined() {
        let zeros: Vec<_> = (0..4).map(|i| (lv(&[i]), 0u8)).collect();
        let x = Pattern::from_cells(1, &zeros);
        let d = determined_coordinates(&and_rule(), &x);
        assert_eq!(d, (-1..=3).map(|i| lv(&[i])).collect::<Vec<_>>());
        let shift = LocalRule::shift(lv(&[1]), 2);
        let d = determined_coordinates(&shift, &x);
        assert_eq!(d, (-1..=2).map(|i| lv(&[i])).collect::<Vec<_>>());
    }
}
