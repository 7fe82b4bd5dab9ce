use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Point of ℤᵈ for `d ∈ {1, 2, 3}`. Unused trailing coordinates are zero so
/// the derived ordering is lexicographic.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector {
    dim: u8,
    coords: [i64; 3],
}

impl LatticeVector {
    pub fn new(coords: &[i64]) -> Self {
        Self::try_new(coords).expect("lattice vector dimension must be 1, 2 or 3")
    }

    pub fn try_new(coords: &[i64]) -> Result<Self> {
        if coords.is_empty() || coords.len() > 3 {
            return Err(Error::UnsupportedDimension(coords.len()));
        }
        let mut c = [0i64; 3];
        c[..coords.len()].copy_from_slice(coords);
        Ok(LatticeVector {
            dim: coords.len() as u8,
            coords: c,
        })
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(&[0, 0, 0][..dim])
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut c = [0i64; 3];
        c[axis] = 1;
        Self::new(&c[..dim])
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords[..self.dim as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.coords == [0, 0, 0]
    }

    pub fn dot(&self, other: &LatticeVector) -> i64 {
        self.coords
            .iter()
            .zip(other.coords.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm_sq(&self) -> i64 {
        self.dot(self)
    }

    pub fn to_point<S: Scalar>(&self) -> Vec<S> {
        self.coords().iter().map(|&c| S::from_int(c)).collect()
    }
}

impl Add for LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut c = self.coords;
        for (a, b) in c.iter_mut().zip(rhs.coords) {
            *a += b;
        }
        LatticeVector { dim: self.dim, coords: c }
    }
}

impl Sub for LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> Self {
        let c = self.coords.map(|x| -x);
        LatticeVector { dim: self.dim, coords: c }
    }
}

impl Mul<LatticeVector> for i64 {
    type Output = LatticeVector;
    fn mul(self, rhs: LatticeVector) -> LatticeVector {
        LatticeVector {
            dim: rhs.dim,
            coords: rhs.coords.map(|x| self * x),
        }
    }
}

impl Index<usize> for LatticeVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.coords()[i]
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Set-level Minkowski sum of two finite lattice sets, sorted and deduplicated.
pub fn lattice_sum(a: &[LatticeVector], b: &[LatticeVector]) -> Vec<LatticeVector> {
    let mut out: Vec<LatticeVector> = a
        .iter()
        .flat_map(|x| b.iter().map(move |y| *x + *y))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_order() {
        let a = LatticeVector::new(&[1, 2]);
        let b = LatticeVector::new(&[3, -1]);
        assert_eq!(a + b, LatticeVector::new(&[4, 1]));
        assert_eq!(a - b, LatticeVector::new(&[-2, 3]));
        assert_eq!(a.dot(&b), 1);
        assert!(a < b);
        assert_eq!(format!("{}", 2 * a), "(2,4)");
        assert!(LatticeVector::try_new(&[1, 2, 3, 4]).is_err());
    }

    #[test]
    fn set_sum() {
        let e = [LatticeVector::new(&[1, 0]), LatticeVector::new(&[0, 1])];
        let s = lattice_sum(&e, &e);
        assert_eq!(s.len(), 3);
    }
}
