//! Cellular-automaton and itinerary invariants on random small rules.

use std::collections::BTreeSet;

use lattice_ca::ca::{compose, determined_coordinates, local_apply, LocalRule, Pattern};
use lattice_ca::entropy::{
    dependence_support, itinerary_count_exact, itinerary_count_linear, perp_boundary, refinement_lower_bound,
};
use lattice_ca::{LatticeVector, RatPolytope, Rational};
use num_bigint::BigUint;
use proptest::prelude::*;

fn lv(c: &[i64]) -> LatticeVector {
    LatticeVector::new(c)
}

fn rect(x0: i64, y0: i64, w: i64, h: i64) -> RatPolytope {
    let r = |v: i64| Rational::from_integer(v as i128);
    let pts = vec![vec![r(x0), r(y0)], vec![r(x0 + w), r(y0)], vec![r(x0), r(y0 + h)], vec![r(x0 + w), r(y0 + h)]];
    RatPolytope::hull(2, &pts).unwrap()
}

fn segment(a: i64, b: i64) -> RatPolytope {
    let r = |v: i64| Rational::from_integer(v as i128);
    RatPolytope::hull(1, &[vec![r(a)], vec![r(b)]]).unwrap()
}

/// Table rule on a nonempty subset of {−1, 0, 1}.
fn table_rule_1d() -> impl Strategy<Value = LocalRule> {
    (1u8..8, any::<u8>()).prop_map(|(mask, bits)| {
        let domain: Vec<LatticeVector> = (-1..=1).filter(|i| mask >> (i + 1) & 1 == 1).map(|i| lv(&[i])).collect();
        let table = (0..1usize << domain.len()).map(|idx| bits >> idx & 1).collect();
        LocalRule::table(1, 2, domain, table).unwrap()
    })
}

/// Algebraic rule over 𝔽₃ on 2D offsets in [−1,1]² with nonzero coefficients.
fn algebraic_rule_2d() -> impl Strategy<Value = LocalRule> {
    prop::collection::btree_map((-1i64..=1, -1i64..=1), 1i64..3, 1..4).prop_map(|cells| {
        let cells: Vec<(LatticeVector, i64)> = cells.into_iter().map(|((x, y), a)| (lv(&[x, y]), a)).collect();
        LocalRule::algebraic(2, 3, &cells).unwrap()
    })
}

fn pattern_1d(bits: &[u8], lo: i64) -> Pattern {
    let cells: Vec<(LatticeVector, u8)> = bits.iter().enumerate().map(|(k, &b)| (lv(&[lo + k as i64]), b)).collect();
    Pattern::from_cells(1, &cells)
}

/// `g` and `h` agree wherever both are defined.
fn agree(g: &Pattern, h: &Pattern) -> bool {
    g.cells().all(|(v, s)| h.get(v).is_none_or(|t| t == s))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composition_is_iteration(f in table_rule_1d(), g in table_rule_1d(), bits in prop::collection::vec(0u8..2, 12)) {
        let x = pattern_1d(&bits, -6);
        let fg = compose(&f, &g).unwrap();
        let direct = local_apply(&f, &local_apply(&g, &x));
        prop_assert!(agree(&local_apply(&fg, &x), &direct));
        prop_assert!(direct.len() <= local_apply(&fg, &x).len());
    }

    #[test]
    fn composition_is_associative(f in table_rule_1d(), g in table_rule_1d(), h in table_rule_1d(), bits in prop::collection::vec(0u8..2, 12)) {
        let x = pattern_1d(&bits, 0);
        let a = compose(&f, &compose(&g, &h).unwrap()).unwrap();
        let b = compose(&compose(&f, &g).unwrap(), &h).unwrap();
        prop_assert!(agree(&local_apply(&a, &x), &local_apply(&b, &x)));
        prop_assert_eq!(a.domain(), b.domain());
    }

    #[test]
    fn itinerary_count_is_translation_invariant(f in table_rule_1d(), a in -4i64..4, len in 0i64..4, shift in -5i64..5, k in 1usize..4) {
        let n1 = itinerary_count_exact(&f, &segment(a, a + len), k).unwrap();
        let n2 = itinerary_count_exact(&f, &segment(a + shift, a + len + shift), k).unwrap();
        prop_assert_eq!(n1, n2);
    }

    #[test]
    fn itinerary_count_between_bounds(f in table_rule_1d(), len in 0i64..4, k in 1usize..4) {
        let j = segment(0, len);
        let n = itinerary_count_exact(&f, &j, k).unwrap();
        let window = dependence_support(&f, &j, k).unwrap().len();
        prop_assert!(n >= BigUint::from(2u32).pow(len as u32 + 1));
        prop_assert!(n <= BigUint::from(2u32).pow(window as u32));
        if k > 1 {
            prop_assert!(n >= itinerary_count_exact(&f, &j, k - 1).unwrap());
        }
        if let Ok(lower) = refinement_lower_bound(&f, &j, k) {
            prop_assert!(n >= lower);
        }
    }

    #[test]
    fn linear_rank_matches_enumeration(f in algebraic_rule_2d(), w in 0i64..2, h in 0i64..2, k in 1usize..3) {
        let j = rect(0, 0, w, h);
        prop_assert_eq!(itinerary_count_linear(&f, &j, k).unwrap(), itinerary_count_exact(&f, &j, k).unwrap());
    }

    #[test]
    fn permutative_rules_determine_exactly_the_erosion(f in algebraic_rule_2d(), w in 0i64..4, h in 0i64..4, seed in any::<u64>()) {
        let j = rect(0, 0, w, h);
        let cells = j.lattice_points().unwrap();
        let mut s = seed;
        let x = Pattern::from_fn(2, &cells, |_| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 33) as u8 % 3
        });
        let support: BTreeSet<_> = cells.iter().copied().collect();
        let expected: BTreeSet<LatticeVector> = cells
            .iter()
            .flat_map(|&c| f.domain().iter().map(move |&i| c - i))
            .filter(|&y| f.domain().iter().all(|&i| support.contains(&(y + i))))
            .collect();
        let got: BTreeSet<_> = determined_coordinates(&f, &x).into_iter().collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn perp_boundary_fits_in_the_window(f in algebraic_rule_2d(), w in 1i64..4, h in 1i64..4) {
        let j = rect(0, 0, w, h);
        let perp = perp_boundary(&j, f.domain()).unwrap();
        let cells: BTreeSet<_> = j.lattice_points().unwrap().into_iter().collect();
        prop_assert!(perp.points.iter().all(|p| cells.contains(p)));
        let unique: BTreeSet<_> = perp.points.iter().collect();
        prop_assert_eq!(unique.len(), perp.len());
    }
}
