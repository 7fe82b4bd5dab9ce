//! Scalar abstraction shared by the exact and floating-point geometry paths.
//!
//! Combinatorial decisions (hull membership, lattice counts, supports) are made
//! with whatever [`Scalar`] the polytope carries. Rationals give exact answers;
//! floats compare against [`Scalar::tolerance`].

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// Ordered field used by every geometric routine.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + FromStr
    + PartialOrd
    + Num
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// `true` when arithmetic is exact (rationals).
    const EXACT: bool;

    /// Absolute slack used by sign tests. Zero for exact types.
    fn tolerance() -> Self;

    fn floor_i64(&self) -> i64;

    fn ceil_i64(&self) -> i64;

    /// Canonical representative of the ray spanned by `v`: a primitive integer
    /// vector for exact types, a unit vector for floats.
    fn canonical_direction(v: &[Self]) -> Vec<Self>;

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer fits every scalar type")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Three-way sign of `x` under the scalar's tolerance.
pub fn sign<S: Scalar>(x: &S) -> Ordering {
    let tol = S::tolerance();
    if *x > tol {
        Ordering::Greater
    } else if *x < -tol {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

pub fn is_zero<S: Scalar>(x: &S) -> bool {
    sign(x) == Ordering::Equal
}

/// Compare `a` and `b` under tolerance.
pub fn cmp<S: Scalar>(a: &S, b: &S) -> Ordering {
    sign(&(a.clone() - b.clone()))
}

pub fn approx_eq<S: Scalar>(a: &S, b: &S) -> bool {
    cmp(a, b) == Ordering::Equal
}

macro_rules! impl_float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn tolerance() -> Self {
                $tol
            }

            fn floor_i64(&self) -> i64 {
                (*self + $tol).floor() as i64
            }

            fn ceil_i64(&self) -> i64 {
                (*self - $tol).ceil() as i64
            }

            fn canonical_direction(v: &[Self]) -> Vec<Self> {
                let norm = v.iter().map(|x| x * x).sum::<$t>().sqrt();
                if norm <= $tol {
                    return v.to_vec();
                }
                v.iter().map(|x| x / norm).collect()
            }
        }
    };
}

impl_float_scalar!(f64, 1e-9);
impl_float_scalar!(f32, 1e-4);

fn canonical_ratio_direction<T>(v: &[Ratio<T>]) -> Vec<Ratio<T>>
where
    T: Clone + Integer + Signed,
{
    if v.iter().all(|x| x.is_zero()) {
        return v.to_vec();
    }
    let lcm = v
        .iter()
        .fold(T::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<T> = v
        .iter()
        .map(|x| x.numer().clone() * (lcm.clone() / x.denom().clone()))
        .collect();
    let gcd = ints
        .iter()
        .filter(|x| !x.is_zero())
        .fold(T::zero(), |acc, x| acc.gcd(x));
    ints.into_iter()
        .map(|x| Ratio::from_integer(x / gcd.clone()))
        .collect()
}

macro_rules! impl_ratio_scalar {
    ($t:ty) => {
        impl Scalar for Ratio<$t> {
            const EXACT: bool = true;

            fn tolerance() -> Self {
                Self::zero()
            }

            fn floor_i64(&self) -> i64 {
                self.floor().to_integer().to_i64().expect("floor fits i64")
            }

            fn ceil_i64(&self) -> i64 {
                self.ceil().to_integer().to_i64().expect("ceil fits i64")
            }

            fn canonical_direction(v: &[Self]) -> Vec<Self> {
                canonical_ratio_direction(v)
            }
        }
    };
}

impl_ratio_scalar!(i64);
impl_ratio_scalar!(i128);
impl_ratio_scalar!(BigInt);

/// Exact integer-valued test; floats use the tolerance.
pub fn is_integral<S: Scalar>(x: &S) -> bool {
    let f = S::from_int(x.floor_i64());
    approx_eq(&f, x) || approx_eq(&(f + S::one()), x)
}

/// Compare `a/sqrt(s)` with `b/sqrt(t)` for `s, t > 0` without square roots.
pub fn cmp_scaled<S: Scalar>(a: &S, s: &S, b: &S, t: &S) -> Ordering {
    let sa = sign(a);
    let sb = sign(b);
    if sa != sb {
        return sa.cmp(&sb);
    }
    let lhs = a.clone() * a.clone() * t.clone();
    let rhs = b.clone() * b.clone() * s.clone();
    let mag = cmp(&lhs, &rhs);
    match sa {
        Ordering::Less => mag.reverse(),
        Ordering::Equal => Ordering::Equal,
        Ordering::Greater => mag,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Ratio<i128>;

    #[test]
    fn rational_direction_is_primitive() {
        let v = [Q::new(2, 3), Q::new(-4, 3), Q::from_integer(0)];
        let c = Q::canonical_direction(&v);
        assert_eq!(c, vec![Q::from_integer(1), Q::from_integer(-2), Q::from_integer(0)]);
    }

    #[test]
    fn float_direction_is_unit() {
        let c = f64::canonical_direction(&[3.0, 4.0]);
        assert!((c[0] - 0.6).abs() < 1e-12 && (c[1] - 0.8).abs() < 1e-12);
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(Q::new(-7, 2).floor_i64(), -4);
        assert_eq!(Q::new(-7, 2).ceil_i64(), -3);
        assert_eq!((2.0f64 - 1e-12).floor_i64(), 2);
        assert!(is_integral(&Q::from_integer(5)));
        assert!(!is_integral(&Q::new(5, 2)));
    }

    #[test]
    fn scaled_comparison() {
        // 1/sqrt(2) < 1/sqrt(1)
        let one = Q::from_integer(1);
        let two = Q::from_integer(2);
        assert_eq!(cmp_scaled(&one, &two, &one, &one), Ordering::Less);
        assert_eq!(cmp_scaled(&-one, &two, &-one, &one), Ordering::Greater);
        assert_eq!(cmp_scaled(&two, &Q::from_integer(4), &one, &one), Ordering::Equal);
    }
}
