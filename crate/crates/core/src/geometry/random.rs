//! Seeded random convex bodies for property tests and experiments.

use rand::Rng;

use super::polytope::Polytope;
use crate::Rational;

/// Hull of `count` uniform integer points in `[-bound, bound]^2`, retried until
/// the hull is full-dimensional.
pub fn random_integral_polygon<R: Rng>(rng: &mut R, bound: i64, count: usize) -> Polytope<Rational> {
    loop {
        let pts: Vec<Vec<Rational>> = (0..count.max(3))
            .map(|_| {
                (0..2)
                    .map(|_| Rational::from_integer(rng.gen_range(-bound..=bound) as i128))
                    .collect()
            })
            .collect();
        let p = Polytope::hull(2, &pts).expect("valid dimension");
        if p.is_full_dimensional() {
            return p;
        }
    }
}

/// Like [`random_integral_polygon`] but with rational vertices of denominator
/// up to `denom`.
pub fn random_rational_polygon<R: Rng>(rng: &mut R, bound: i64, denom: i64, count: usize) -> Polytope<Rational> {
    loop {
        let pts: Vec<Vec<Rational>> = (0..count.max(3))
            .map(|_| {
                (0..2)
                    .map(|_| {
                        let q = rng.gen_range(1..=denom);
                        Rational::new(rng.gen_range(-bound * q..=bound * q) as i128, q as i128)
                    })
                    .collect()
            })
            .collect();
        let p = Polytope::hull(2, &pts).expect("valid dimension");
        if p.is_full_dimensional() {
            return p;
        }
    }
}

/// Random polygon rescaled to unit perimeter.
pub fn random_unit_perimeter_polygon<R: Rng>(rng: &mut R) -> Polytope<f64> {
    let p = random_integral_polygon(rng, 8, 8).to_f64();
    let s = 1.0 / p.boundary_measure();
    p.scale(&s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn deterministic_and_full_dimensional() {
        let a = random_integral_polygon(&mut ChaCha8Rng::seed_from_u64(3), 8, 6);
        let b = random_integral_polygon(&mut ChaCha8Rng::seed_from_u64(3), 8, 6);
        assert_eq!(a, b);
        assert!(a.is_full_dimensional() && a.is_integral());
        let u = random_unit_perimeter_polygon(&mut ChaCha8Rng::seed_from_u64(4));
        assert!((u.boundary_measure() - 1.0).abs() < 1e-9);
    }
}
