//! Geometry invariants against brute-force oracles on small random polygons.

use std::collections::BTreeSet;

use lattice_ca::geometry::{morphological_boundary_counts, quermass, smallest_bounding_sphere};
use lattice_ca::{LatticeVector, RatPolytope, Rational};
use proptest::prelude::*;

fn r(x: i64) -> Rational {
    Rational::from_integer(x as i128)
}

fn pts(raw: &[(i64, i64)]) -> Vec<Vec<Rational>> {
    raw.iter().map(|&(x, y)| vec![r(x), r(y)]).collect()
}

fn polygon(raw: &[(i64, i64)]) -> RatPolytope {
    RatPolytope::hull(2, &pts(raw)).unwrap()
}

fn full_polygon(range: i64, count: usize) -> impl Strategy<Value = RatPolytope> {
    prop::collection::vec((-range..=range, -range..=range), 3..=count)
        .prop_map(|raw| polygon(&raw))
        .prop_filter("full-dimensional", |p| p.is_full_dimensional())
}

/// Lattice points of an integral polygon, by exact sign tests against its
/// vertex ring (independent of the halfspace representation).
fn brute_points(p: &RatPolytope, lo: i64, hi: i64) -> BTreeSet<LatticeVector> {
    let v: Vec<(i64, i64)> = p.integral_vertices().unwrap().iter().map(|u| (u[0], u[1])).collect();
    let cx: f64 = v.iter().map(|a| a.0 as f64).sum::<f64>() / v.len() as f64;
    let cy: f64 = v.iter().map(|a| a.1 as f64).sum::<f64>() / v.len() as f64;
    let mut ring = v.clone();
    ring.sort_by(|a, b| {
        let ta = (a.1 as f64 - cy).atan2(a.0 as f64 - cx);
        let tb = (b.1 as f64 - cy).atan2(b.0 as f64 - cx);
        ta.total_cmp(&tb)
    });
    let mut out = BTreeSet::new();
    for x in lo..=hi {
        for y in lo..=hi {
            let inside = (0..ring.len()).all(|k| {
                let (a, b) = (ring[k], ring[(k + 1) % ring.len()]);
                (b.0 - a.0) * (y - a.1) - (b.1 - a.1) * (x - a.0) >= 0
            });
            if inside {
                out.insert(LatticeVector::new(&[x, y]));
            }
        }
    }
    out
}

fn shoelace_twice(p: &RatPolytope) -> i64 {
    let v: Vec<(i64, i64)> = p.integral_vertices().unwrap().iter().map(|u| (u[0], u[1])).collect();
    let cx: f64 = v.iter().map(|a| a.0 as f64).sum::<f64>() / v.len() as f64;
    let cy: f64 = v.iter().map(|a| a.1 as f64).sum::<f64>() / v.len() as f64;
    let mut ring = v;
    ring.sort_by(|a, b| {
        (a.1 as f64 - cy).atan2(a.0 as f64 - cx).total_cmp(&(b.1 as f64 - cy).atan2(b.0 as f64 - cx))
    });
    (0..ring.len())
        .map(|k| {
            let (a, b) = (ring[k], ring[(k + 1) % ring.len()]);
            a.0 * b.1 - a.1 * b.0
        })
        .sum::<i64>()
        .abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lattice_points_match_sign_tests(p in full_polygon(6, 7)) {
        let fast: BTreeSet<_> = p.lattice_points().unwrap().into_iter().collect();
        prop_assert_eq!(fast, brute_points(&p, -7, 7));
    }

    #[test]
    fn erosion_and_dilation_match_set_definitions(j in full_polygon(5, 6), raw in prop::collection::vec((-2i64..=2, -2i64..=2), 1..4)) {
        let i = polygon(&raw);
        let mut with0 = raw.clone();
        with0.push((0, 0));
        let ip = polygon(&with0).lattice_points().unwrap();
        let jset = brute_points(&j, -8, 8);
        let eroded: BTreeSet<_> = jset.iter().copied().filter(|&x| ip.iter().all(|&d| jset.contains(&(x + d)))).collect();
        let dilated: BTreeSet<_> = jset.iter().flat_map(|&x| ip.iter().map(move |&d| x + d)).collect();
        // ∂⁺ uses the polytope J ⊕ I′, which can hold lattice points that are
        // not sums of lattice points: J = cv{(−2,0),(1,0),(2,−1)} with
        // I′ = [(0,0),(1,1)] contains (2,0) = (1.5,−0.5) + ½(1,1).
        let c = morphological_boundary_counts(&j, &i, true).unwrap();
        let inner: BTreeSet<_> = c.inner_set.unwrap().into_iter().collect();
        let outer: BTreeSet<_> = c.outer_set.unwrap().into_iter().collect();
        prop_assert_eq!(inner, jset.difference(&eroded).copied().collect::<BTreeSet<_>>());
        prop_assert!(dilated.difference(&jset).all(|x| outer.contains(x)));
        let sum = brute_points(&j.minkowski_sum(&polygon(&with0)).unwrap(), -10, 10);
        prop_assert_eq!(outer, sum.difference(&jset).copied().collect::<BTreeSet<_>>());
    }

    #[test]
    fn pick_formula(p in full_polygon(6, 7)) {
        let pts = brute_points(&p, -7, 7);
        let on_boundary = pts
            .iter()
            .filter(|q| p.facets().iter().any(|f| f.normal[0] * r(q[0]) + f.normal[1] * r(q[1]) == f.offset))
            .count() as i64;
        let interior = pts.len() as i64 - on_boundary;
        prop_assert_eq!(shoelace_twice(&p), 2 * interior + on_boundary - 2);
        prop_assert_eq!(p.volume() * r(2), r(shoelace_twice(&p)));
    }

    #[test]
    fn quermass_laws(o in full_polygon(5, 6), a in full_polygon(2, 4), b in full_polygon(2, 4), t in 1i64..5) {
        let v = |i: &RatPolytope, o: &RatPolytope| quermass(i, o).unwrap();
        let tol = |x: f64| 1e-9 * (1.0 + x.abs());
        // V_O(O) = d · vol(O)
        let self_mixed = v(&o, &o);
        let vol = o.volume();
        let vol = *vol.numer() as f64 / *vol.denom() as f64;
        prop_assert!((self_mixed - 2.0 * vol).abs() <= tol(self_mixed));
        // Minkowski additivity and positive homogeneity in I.
        let sum = a.minkowski_sum(&b).unwrap();
        let add = v(&a, &o) + v(&b, &o);
        prop_assert!((v(&sum, &o) - add).abs() <= tol(add));
        let scaled = v(&a.scale(&r(t)), &o);
        prop_assert!((scaled - t as f64 * v(&a, &o)).abs() <= tol(scaled));
        // Homogeneity of degree d − 1 in O, and translation invariance in O.
        let big = v(&a, &o.scale(&r(t)));
        prop_assert!((big - t as f64 * v(&a, &o)).abs() <= tol(big));
        let moved = v(&a, &o.translate(&[r(3), r(-2)]));
        prop_assert!((moved - v(&a, &o)).abs() <= tol(moved));
    }

    #[test]
    fn bounding_sphere_is_minimal(raw in prop::collection::vec((-6i64..=6, -6i64..=6), 1..8)) {
        let points = pts(&raw);
        let s = smallest_bounding_sphere(&points).unwrap();
        prop_assert!(points.iter().all(|p| s.contains(p)));
        // Oracle: the smallest enclosing circle is determined by two or three
        // of the points; scan every such circle that covers the set.
        let f: Vec<(f64, f64)> = raw.iter().map(|&(x, y)| (x as f64, y as f64)).collect();
        let covers = |c: (f64, f64), r2: f64| f.iter().all(|p| (p.0 - c.0).powi(2) + (p.1 - c.1).powi(2) <= r2 + 1e-9);
        let mut best = if f.iter().all(|p| *p == f[0]) { 0.0 } else { f64::INFINITY };
        for a in 0..f.len() {
            for b in a + 1..f.len() {
                let c = ((f[a].0 + f[b].0) / 2.0, (f[a].1 + f[b].1) / 2.0);
                let r2 = (f[a].0 - c.0).powi(2) + (f[a].1 - c.1).powi(2);
                if covers(c, r2) { best = f64::min(best, r2); }
                for k in b + 1..f.len() {
                    let (ax, ay, bx, by, cx, cy) = (f[a].0, f[a].1, f[b].0, f[b].1, f[k].0, f[k].1);
                    let d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
                    if d.abs() < 1e-12 { continue; }
                    let ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) + (cx * cx + cy * cy) * (ay - by)) / d;
                    let uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) + (cx * cx + cy * cy) * (bx - ax)) / d;
                    let r2 = (ax - ux).powi(2) + (ay - uy).powi(2);
                    if covers((ux, uy), r2) { best = f64::min(best, r2); }
                }
            }
        }
        let r2 = *s.radius_sq.numer() as f64 / *s.radius_sq.denom() as f64;
        prop_assert!((r2 - best).abs() <= 1e-9 * (1.0 + best), "sphere {} vs oracle {}", r2, best);
    }
}
