//! Seeded property suites over random lattice polygons. Each suite counts the
//! cases where an exact lattice statement fails.

use std::collections::BTreeSet;

use lattice_ca::geometry::random::{random_integral_polygon, random_rational_polygon};
use lattice_ca::geometry::{
    boundary_injection, morphological_boundary_counts, semiopen_rectangle_count, with_origin, Orientation,
};
use lattice_ca::{LatticeVector, RatPolytope, Rational, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub violations: usize,
    /// Description of the first failing case.
    pub first_failure: Option<String>,
}

impl SuiteOutcome {
    fn new(name: &'static str) -> Self {
        SuiteOutcome {
            name,
            cases: 0,
            violations: 0,
            first_failure: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.violations += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `∂⁻` agrees on `J` and its integer hull `cv(J ∩ ℤ²)`; `∂⁺` of the hull is
/// contained in `∂⁺J`.
pub fn integer_hull_boundaries(seed: u64, cases: usize) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("integer-hull boundaries");
    let mut rng = rng_for(seed, 1);
    for _ in 0..cases {
        let j = random_rational_polygon(&mut rng, 6, 4, 5);
        let i = random_integral_polygon(&mut rng, 2, 3);
        let pts = j.lattice_points()?;
        let hull = if pts.is_empty() { RatPolytope::empty(2) } else { RatPolytope::from_lattice(2, &pts)? };
        let a = morphological_boundary_counts(&j, &i, true)?;
        let b = morphological_boundary_counts(&hull, &i, true)?;
        let (ai, bi) = (a.inner_set.unwrap(), b.inner_set.unwrap());
        let ao: BTreeSet<_> = a.outer_set.unwrap().into_iter().collect();
        let bo = b.outer_set.unwrap();
        out.check(ai == bi && bo.iter().all(|v| ao.contains(v)), || format!("J = {j}, I = {i}"));
    }
    Ok(out)
}

/// `#∂⁻J ≤ #∂⁺J`, witnessed by the facet-wise shift map being injective into
/// `∂⁺J`.
pub fn boundary_injection_suite(seed: u64, cases: usize) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("inner-to-outer injection");
    let mut rng = rng_for(seed, 2);
    for _ in 0..cases {
        let j = random_integral_polygon(&mut rng, 6, 5);
        let i = random_integral_polygon(&mut rng, 2, 3);
        let counts = morphological_boundary_counts(&j, &i, true)?;
        let outer: BTreeSet<_> = counts.outer_set.unwrap().into_iter().collect();
        let pairs = boundary_injection(&j, &i)?;
        let images: BTreeSet<_> = pairs.iter().map(|p| p.1).collect();
        let ok = counts.inner <= counts.outer
            && pairs.len() as u64 == counts.inner
            && images.len() == pairs.len()
            && images.iter().all(|y| outer.contains(y));
        out.check(ok, || format!("J = {j}, I = {i}"));
    }
    Ok(out)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Vertices in counter-clockwise order around their centroid.
fn cyclic(p: &RatPolytope) -> Vec<LatticeVector> {
    let mut v = p.integral_vertices().expect("integral polygon");
    let n = v.len() as f64;
    let cx = v.iter().map(|u| u[0] as f64).sum::<f64>() / n;
    let cy = v.iter().map(|u| u[1] as f64).sum::<f64>() / n;
    v.sort_by(|a, b| {
        let ta = (a[1] as f64 - cy).atan2(a[0] as f64 - cx);
        let tb = (b[1] as f64 - cy).atan2(b[0] as f64 - cx);
        ta.total_cmp(&tb)
    });
    v
}

/// `V = interior + boundary/2 − 1` for integral polygons.
pub fn pick_suite(seed: u64, cases: usize) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("pick formula");
    let mut rng = rng_for(seed, 3);
    for _ in 0..cases {
        let p = random_integral_polygon(&mut rng, 8, 6);
        let v = cyclic(&p);
        let boundary: i64 = (0..v.len())
            .map(|t| {
                let d = v[(t + 1) % v.len()] - v[t];
                gcd(d[0], d[1])
            })
            .sum();
        let total = p.lattice_count()? as i64;
        let interior = total - boundary;
        let pick = Rational::from_integer((interior - 1) as i128) + Rational::new(boundary as i128, 2);
        out.check(p.volume() == pick, || format!("P = {p}"));
    }
    Ok(out)
}

/// `#K ≤ V(K ⊕ [0,1]²)` and `V(O) − p(O)/2 ≤ #O`.
pub fn volume_count_suite(seed: u64, cases: usize) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("volume-count inequalities");
    let mut rng = rng_for(seed, 4);
    let cube = RatPolytope::cube(2, Rational::from_integer(0), Rational::from_integer(1))?;
    for _ in 0..cases {
        let k = random_integral_polygon(&mut rng, 8, 5);
        let n = k.lattice_count()?;
        let fac = Rational::from_integer(n as i128) <= k.minkowski_sum(&cube)?.volume();
        let v = k.to_f64().volume();
        let bol = v - k.boundary_measure() / 2.0 <= n as f64 + 1e-9;
        out.check(fac && bol, || format!("K = {k}"));
    }
    Ok(out)
}

/// Integral semi-open rectangles hold exactly as many lattice points as their
/// area.
pub fn rectangle_suite(seed: u64, cases: usize) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("integral rectangle counts");
    let mut rng = rng_for(seed, 5);
    for _ in 0..cases {
        let a = LatticeVector::new(&[rng.gen_range(-5..=5), rng.gen_range(-5..=5)]);
        let v = loop {
            let v = LatticeVector::new(&[rng.gen_range(-4..=4), rng.gen_range(-4..=4)]);
            if !v.is_zero() {
                break v;
            }
        };
        let m = gcd(v[0], v[1]) * rng.gen_range(1..=3);
        let h_sq = Rational::new((m * m) as i128, v.norm_sq() as i128);
        for o in [Orientation::Left, Orientation::Right] {
            let count = semiopen_rectangle_count(a, a + v, h_sq, o)?;
            out.check(count == m as u64, || format!("A = {a}, v = {v}, area {m}, got {count}"));
        }
    }
    Ok(out)
}

/// `V(J) − V(J ⊖ B(r)) ≤ r·p(J)`.
pub fn ball_erosion_suite(seed: u64, cases: usize) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("ball erosion volume loss");
    let mut rng = rng_for(seed, 6);
    for _ in 0..cases {
        let j = random_integral_polygon(&mut rng, 8, 6).to_f64();
        for r in [0.1, 0.5, 2.0] {
            let e = j.erode_ball(r)?;
            let lost = j.volume() - if e.is_empty() { 0.0 } else { e.volume() };
            out.check(lost <= r * j.boundary_measure() + 1e-6, || format!("J = {j}, r = {r}"));
        }
    }
    Ok(out)
}

/// `#∂⁻_I(nO)/p(nO) ≤ diam(I′) + √d + 0.05`.
pub fn boundary_envelope_suite(seed: u64, cases: usize) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("inner boundary envelope");
    let mut rng = rng_for(seed, 7);
    for _ in 0..cases {
        let o = random_integral_polygon(&mut rng, 4, 5);
        let i = random_integral_polygon(&mut rng, 2, 3);
        let bound = with_origin(&i)?.to_f64().diameter() + 2f64.sqrt() + 0.05;
        for n in [1, 2, 4] {
            let j = o.scale(&Rational::from_integer(n));
            let inner = morphological_boundary_counts(&j, &i, false)?.inner as f64;
            let rate = inner / j.boundary_measure();
            out.check(rate <= bound, || format!("O = {o}, I = {i}, n = {n}: {rate} > {bound}"));
        }
    }
    Ok(out)
}

/// Every suite at `cases` random instances.
pub fn run_property_suites(seed: u64, cases: usize) -> Result<Vec<SuiteOutcome>> {
    Ok(vec![
        integer_hull_boundaries(seed, cases)?,
        boundary_injection_suite(seed, cases)?,
        pick_suite(seed, cases)?,
        volume_count_suite(seed, cases)?,
        rectangle_suite(seed, cases)?,
        ball_erosion_suite(seed, cases)?,
        boundary_envelope_suite(seed, cases)?,
    ])
}
