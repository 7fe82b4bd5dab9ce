//! Lattice points of polytopes, morphological boundaries and integral rectangles.

use std::collections::BTreeSet;

use num_integer::Integer;

use super::lattice::LatticeVector;
use super::polytope::Polytope;
use crate::error::{Error, Result};
use crate::scalar::{is_integral, is_zero, sign, Scalar};
use crate::Rational;

/// Default cap on the side of the bounding box scanned for lattice points.
pub const DEFAULT_BOX_CAP: i64 = 10_000;

impl<S: Scalar> Polytope<S> {
    /// Integer bounding box `[lo, hi]` of the polytope, or `None` when it has
    /// no lattice point in some coordinate range.
    fn lattice_box(&self, cap: i64) -> Result<Option<(Vec<i64>, Vec<i64>)>> {
        if self.is_empty() {
            return Ok(None);
        }
        let d = self.dim();
        let mut lo = vec![0i64; d];
        let mut hi = vec![0i64; d];
        for i in 0..d {
            let mut min_v = self.vertices()[0][i].clone();
            let mut max_v = min_v.clone();
            for v in &self.vertices()[1..] {
                if v[i] < min_v {
                    min_v = v[i].clone();
                }
                if v[i] > max_v {
                    max_v = v[i].clone();
                }
            }
            lo[i] = min_v.ceil_i64();
            hi[i] = max_v.floor_i64();
            if lo[i] > hi[i] {
                return Ok(None);
            }
            if hi[i] - lo[i] + 1 > cap {
                return Err(Error::limit(
                    format!("lattice box side {} in coordinate {i}", hi[i] - lo[i] + 1),
                    cap as u128,
                ));
            }
        }
        Ok(Some((lo, hi)))
    }

    /// Calls `row(prefix, lo, hi)` for every prefix of the first `d − 1`
    /// coordinates whose fibre contains lattice points `lo..=hi`.
    fn scan_rows(&self, cap: i64, mut row: impl FnMut(&[i64], i64, i64)) -> Result<()> {
        let Some((blo, bhi)) = self.lattice_box(cap)? else {
            return Ok(());
        };
        let d = self.dim();
        let t = d - 1;
        let mut prefix = vec![0i64; t];
        let prefixes: Box<dyn Iterator<Item = Vec<i64>>> = match t {
            0 => Box::new(std::iter::once(Vec::new())),
            1 => Box::new((blo[0]..=bhi[0]).map(|x| vec![x])),
            _ => {
                let (l1, h1) = (blo[1], bhi[1]);
                Box::new((blo[0]..=bhi[0]).flat_map(move |x| (l1..=h1).map(move |y| vec![x, y])))
            }
        };
        for p in prefixes {
            prefix.copy_from_slice(&p);
            let mut lo = blo[t];
            let mut hi = bhi[t];
            let mut ok = true;
            for h in self.facets() {
                let mut rest = h.offset.clone();
                for i in 0..t {
                    rest = rest - h.normal[i].clone() * S::from_int(prefix[i]);
                }
                let a = &h.normal[t];
                match sign(a) {
                    std::cmp::Ordering::Greater => hi = hi.min((rest / a.clone()).floor_i64()),
                    std::cmp::Ordering::Less => lo = lo.max((rest / a.clone()).ceil_i64()),
                    std::cmp::Ordering::Equal => {
                        if sign(&rest) == std::cmp::Ordering::Less {
                            ok = false;
                        }
                    }
                }
                if !ok || lo > hi {
                    ok = false;
                    break;
                }
            }
            if ok {
                for e in self.equalities() {
                    let mut rest = e.offset.clone();
                    for i in 0..t {
                        rest = rest - e.normal[i].clone() * S::from_int(prefix[i]);
                    }
                    let a = &e.normal[t];
                    if is_zero(a) {
                        if !is_zero(&rest) {
                            ok = false;
                        }
                    } else {
                        let v = rest / a.clone();
                        if !is_integral(&v) {
                            ok = false;
                        } else {
                            let half = S::one() / S::from_int(2);
                            let z = (v + half).floor_i64();
                            lo = lo.max(z);
                            hi = hi.min(z);
                        }
                    }
                    if !ok || lo > hi {
                        ok = false;
                        break;
                    }
                }
            }
            if ok && lo <= hi {
                row(&prefix, lo, hi);
            }
        }
        Ok(())
    }

    /// Lattice points in lexicographic order, with the default box cap.
    pub fn lattice_points(&self) -> Result<Vec<LatticeVector>> {
        self.lattice_points_capped(DEFAULT_BOX_CAP)
    }

    pub fn lattice_points_capped(&self, cap: i64) -> Result<Vec<LatticeVector>> {
        let mut out = Vec::new();
        let mut buf = [0i64; 3];
        let d = self.dim();
        self.scan_rows(cap, |prefix, lo, hi| {
            buf[..d - 1].copy_from_slice(prefix);
            for z in lo..=hi {
                buf[d - 1] = z;
                out.push(LatticeVector::new(&buf[..d]));
            }
        })?;
        Ok(out)
    }

    /// `#(P ∩ ℤᵈ)` without materializing the points.
    pub fn lattice_count(&self) -> Result<u64> {
        self.lattice_count_capped(DEFAULT_BOX_CAP)
    }

    pub fn lattice_count_capped(&self, cap: i64) -> Result<u64> {
        let mut n = 0u64;
        self.scan_rows(cap, |_, lo, hi| n += (hi - lo + 1) as u64)?;
        Ok(n)
    }
}

/// Lattice counts of the morphological boundaries of `J` with respect to `I`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryCounts {
    /// `#(J ⊕ I′) − #J`
    pub outer: u64,
    /// `#J − #(J ⊖ I′)`
    pub inner: u64,
    pub outer_set: Option<Vec<LatticeVector>>,
    pub inner_set: Option<Vec<LatticeVector>>,
}

/// `I′ = cv(I ∪ {0})`.
pub fn with_origin<S: Scalar>(i: &Polytope<S>) -> Result<Polytope<S>> {
    let mut pts = i.vertices().to_vec();
    pts.push(vec![S::zero(); i.dim()]);
    Polytope::hull(i.dim(), &pts)
}

/// Inner and outer boundaries `J∖(J⊖I′)` and `(J⊕I′)∖J`, where the
/// structuring element is first replaced by `I′ = cv(I ∪ {0})`.
pub fn morphological_boundary_counts<S: Scalar>(
    j: &Polytope<S>,
    i: &Polytope<S>,
    with_sets: bool,
) -> Result<BoundaryCounts> {
    let ip = with_origin(i)?;
    let eroded = j.erode(&ip)?;
    let dilated = j.minkowski_sum(&ip)?;
    if !with_sets {
        let nj = j.lattice_count()?;
        return Ok(BoundaryCounts {
            outer: dilated.lattice_count()? - nj,
            inner: nj - eroded.lattice_count()?,
            outer_set: None,
            inner_set: None,
        });
    }
    let pj: BTreeSet<LatticeVector> = j.lattice_points()?.into_iter().collect();
    let pe: BTreeSet<LatticeVector> = eroded.lattice_points()?.into_iter().collect();
    let pd: BTreeSet<LatticeVector> = dilated.lattice_points()?.into_iter().collect();
    let inner: Vec<LatticeVector> = pj.difference(&pe).copied().collect();
    let outer: Vec<LatticeVector> = pd.difference(&pj).copied().collect();
    Ok(BoundaryCounts {
        outer: outer.len() as u64,
        inner: inner.len() as u64,
        outer_set: Some(outer),
        inner_set: Some(inner),
    })
}

/// Side of `AB` on which the rectangle is erected.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// Positive height: `ABCD` counter-clockwise.
    Left,
    /// Negative height: `ADCB` counter-clockwise.
    Right,
}

/// Lattice points of the semi-open rectangle `[A,B[ × [A,D[` of base `AB` and
/// height `h` (given as `h²`). The far side must meet ℤ², i.e. `h·|AB|` is an
/// integer multiple of `gcd(B − A)`.
pub fn semiopen_rectangle_count(
    a: LatticeVector,
    b: LatticeVector,
    height_sq: Rational,
    orientation: Orientation,
) -> Result<u64> {
    if a.dim() != 2 || b.dim() != 2 || a == b {
        return Err(Error::invalid("rectangle base must be two distinct points of Z^2"));
    }
    let v = b - a;
    let len_sq = v.norm_sq() as i128;
    // level m = h·|v| along the (unnormalized) perpendicular w, |w| = |v|
    let m_sq = height_sq * Rational::from_integer(len_sq);
    if !m_sq.is_integer() || *m_sq.numer() <= 0 {
        return Err(Error::invalid("rectangle height does not give an integral far side"));
    }
    let m_sq = m_sq.to_integer();
    let m = num_integer::Roots::sqrt(&m_sq);
    if m * m != m_sq || m % (v[0].gcd(&v[1]) as i128) != 0 {
        return Err(Error::invalid("far side of the rectangle misses the lattice"));
    }
    let w = match orientation {
        Orientation::Left => LatticeVector::new(&[-v[1], v[0]]),
        Orientation::Right => LatticeVector::new(&[v[1], -v[0]]),
    };
    let m = m as i64;
    let len_sq = len_sq as i64;
    // corners A, B, A + (m/|v|²) w, B + (m/|v|²) w bound the scan box
    let corners = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)].map(|(s, t)| {
        let x = a[0] as f64 + s * v[0] as f64 + t * (m as f64 / len_sq as f64) * w[0] as f64;
        let y = a[1] as f64 + s * v[1] as f64 + t * (m as f64 / len_sq as f64) * w[1] as f64;
        (x, y)
    });
    let xmin = corners.iter().map(|c| c.0).fold(f64::INFINITY, f64::min).floor() as i64 - 1;
    let xmax = corners.iter().map(|c| c.0).fold(f64::NEG_INFINITY, f64::max).ceil() as i64 + 1;
    let ymin = corners.iter().map(|c| c.1).fold(f64::INFINITY, f64::min).floor() as i64 - 1;
    let ymax = corners.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max).ceil() as i64 + 1;
    let mut count = 0u64;
    for x in xmin..=xmax {
        for y in ymin..=ymax {
            let p = LatticeVector::new(&[x, y]) - a;
            let s = p.dot(&v);
            let t = p.dot(&w);
            if (0..len_sq).contains(&s) && (0..m).contains(&t) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// The map `∂⁻_I J → ∂⁺_I J`, `x ↦ x + u^F` with `F` the first facet of `J`
/// whose band `x·N > h_J(N) − h_I(N)` contains `x` and `u^F` the first extreme
/// point of `I` attaining `h_I(N^F)`. Returned as `(x, φ(x))` pairs over the
/// lattice points of `∂⁻`.
pub fn boundary_injection(
    j: &Polytope<Rational>,
    i: &Polytope<Rational>,
) -> Result<Vec<(LatticeVector, LatticeVector)>> {
    let ip = with_origin(i)?;
    let ex = ip
        .integral_vertices()
        .ok_or_else(|| Error::invalid("structuring element must have integral vertices"))?;
    let shifts: Vec<(Rational, LatticeVector)> = j
        .facets()
        .iter()
        .map(|f| {
            let t = ip.maximizers(&f.normal)[0];
            (f.offset - ip.support(&f.normal).expect("nonempty"), ex[t])
        })
        .collect();
    let inner = morphological_boundary_counts(j, i, true)?.inner_set.expect("sets requested");
    inner
        .into_iter()
        .map(|x| {
            let p = x.to_point::<Rational>();
            j.facets()
                .iter()
                .zip(&shifts)
                .find(|(f, (level, _))| super::linalg::dot(&p, &f.normal) > *level)
                .map(|(_, (_, u))| (x, x + *u))
                .ok_or_else(|| Error::invalid(format!("{x} lies in no boundary band")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: i64) -> Rational {
        Rational::from_integer(x as i128)
    }

    fn square(n: i64) -> Polytope<Rational> {
        Polytope::cube(2, r(-n), r(n)).unwrap()
    }

    fn tri(k: i64) -> Polytope<Rational> {
        Polytope::hull(2, &[vec![r(0), r(0)], vec![r(k), r(0)], vec![r(0), r(k)]]).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(Polytope::cube(2, r(0), r(2)).unwrap().lattice_count().unwrap(), 9);
        assert_eq!(tri(2).lattice_count().unwrap(), 6);
        assert_eq!(Polytope::<Rational>::empty(2).lattice_count().unwrap(), 0);
        let seg = Polytope::hull(2, &[vec![r(0), r(0)], vec![r(4), r(2)]]).unwrap();
        assert_eq!(seg.lattice_count().unwrap(), 3);
        let c3 = Polytope::cube(3, r(0), r(2)).unwrap();
        assert_eq!(c3.lattice_count().unwrap(), 27);
    }

    #[test]
    fn box_cap() {
        let big = Polytope::cube(2, r(0), r(20_000)).unwrap();
        assert!(big.lattice_count().unwrap_err().is_resource_limit());
    }

    #[test]
    fn boundaries() {
        let b = morphological_boundary_counts(&square(3), &tri(1), true).unwrap();
        assert_eq!(b.inner, 13);
        let unit = Polytope::cube(2, r(0), r(1)).unwrap();
        for n in 1..6 {
            let b = morphological_boundary_counts(&square(n), &unit, false).unwrap();
            assert_eq!(b.outer as i64, 4 * n + 3);
        }
        let origin = Polytope::hull(2, &[vec![r(0), r(0)]]).unwrap();
        assert_eq!(morphological_boundary_counts(&square(3), &origin, false).unwrap().inner, 0);
    }

    #[test]
    fn rectangles() {
        let p = |x, y| LatticeVector::new(&[x, y]);
        assert_eq!(semiopen_rectangle_count(p(0, 0), p(2, 0), r(1), Orientation::Left).unwrap(), 2);
        assert_eq!(semiopen_rectangle_count(p(0, 0), p(1, 1), r(2), Orientation::Left).unwrap(), 2);
        assert_eq!(semiopen_rectangle_count(p(0, 0), p(3, 0), r(4), Orientation::Left).unwrap(), 6);
        assert!(semiopen_rectangle_count(p(0, 0), p(2, 0), Rational::new(1, 4), Orientation::Left).is_err());
    }

    #[test]
    fn injection_on_square() {
        let j = Polytope::<Rational>::cube(2, Rational::from_integer(-3), Rational::from_integer(3)).unwrap();
        let i = Polytope::<Rational>::cube(2, Rational::from_integer(0), Rational::from_integer(1)).unwrap();
        let pairs = boundary_injection(&j, &i).unwrap();
        assert_eq!(pairs.len(), 13);
        let images: BTreeSet<_> = pairs.iter().map(|p| p.1).collect();
        assert_eq!(images.len(), 13);
        assert!(images.iter().all(|y| !j.contains(&y.to_point::<Rational>())));
    }
}
