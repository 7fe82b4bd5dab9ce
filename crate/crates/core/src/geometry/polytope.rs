use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use super::lattice::LatticeVector;
use super::linalg::{add, approx_eq_vec, cross3, dot, lex_cmp, null_space, rank, rref, solve, sub};
use crate::error::{Error, Result};
use crate::scalar::{is_integral, is_zero, sign, Scalar};

/// `{x : normal·x ≤ offset}`, or `normal·x = offset` when used as an equality.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace<S> {
    pub normal: Vec<S>,
    pub offset: S,
}

impl<S: Scalar> Halfspace<S> {
    /// Canonicalize the normal (primitive integer or unit) and rescale the offset.
    pub fn canonical(normal: Vec<S>, offset: S) -> Self {
        let canon = S::canonical_direction(&normal);
        let (i, pivot) = normal
            .iter()
            .enumerate()
            .find(|(_, x)| !is_zero(*x))
            .expect("halfspace normal must be nonzero");
        let factor = canon[i].clone() / pivot.clone();
        Halfspace {
            normal: canon,
            offset: offset * factor,
        }
    }

    pub fn eval(&self, x: &[S]) -> S {
        dot(&self.normal, x) - self.offset.clone()
    }
}

/// Convex polytope in ℝᵈ (`d ≤ 3`) carrying both representations.
///
/// Vertices are lexicographically sorted; facets are sorted by normal. A polytope
/// of lower affine dimension stores its affine hull in `equalities` and its
/// relative facets in `facets`.
#[derive(Clone, Debug)]
pub struct Polytope<S> {
    dim: usize,
    vertices: Vec<Vec<S>>,
    facets: Vec<Halfspace<S>>,
    equalities: Vec<Halfspace<S>>,
    affine_dim: Option<usize>,
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if (1..=3).contains(&dim) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

fn orient2<S: Scalar>(o: &[S], a: &[S], b: &[S]) -> S {
    let (ax, ay) = (a[0].clone() - o[0].clone(), a[1].clone() - o[1].clone());
    let (bx, by) = (b[0].clone() - o[0].clone(), b[1].clone() - o[1].clone());
    ax * by - ay * bx
}

/// Indices of the counter-clockwise hull of lexicographically sorted 2D points,
/// collinear points dropped.
pub(crate) fn monotone_chain<S: Scalar>(pts: &[Vec<S>]) -> Vec<usize> {
    if pts.len() < 3 {
        return (0..pts.len()).collect();
    }
    let mut lower: Vec<usize> = Vec::new();
    for i in 0..pts.len() {
        while lower.len() >= 2 {
            let n = lower.len();
            if sign(&orient2(&pts[lower[n - 2]], &pts[lower[n - 1]], &pts[i])) == Ordering::Greater {
                break;
            }
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for i in (0..pts.len()).rev() {
        while upper.len() >= 2 {
            let n = upper.len();
            if sign(&orient2(&pts[upper[n - 2]], &pts[upper[n - 1]], &pts[i])) == Ordering::Greater {
                break;
            }
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Hull of a full-dimensional, sorted, deduplicated point set.
fn full_hull<S: Scalar>(dim: usize, pts: &[Vec<S>]) -> (Vec<usize>, Vec<Halfspace<S>>) {
    match dim {
        1 => {
            let last = pts.len() - 1;
            let facets = vec![
                Halfspace::canonical(vec![-S::one()], -pts[0][0].clone()),
                Halfspace::canonical(vec![S::one()], pts[last][0].clone()),
            ];
            (vec![0, last], facets)
        }
        2 => {
            let ring = monotone_chain(pts);
            let facets = (0..ring.len())
                .map(|k| {
                    let a = &pts[ring[k]];
                    let b = &pts[ring[(k + 1) % ring.len()]];
                    let d = sub(b, a);
                    let normal = vec![d[1].clone(), -d[0].clone()];
                    let offset = dot(&normal, a);
                    Halfspace::canonical(normal, offset)
                })
                .collect();
            (ring, facets)
        }
        _ => {
            let n = pts.len();
            let mut facets: Vec<Halfspace<S>> = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    let e1 = sub(&pts[j], &pts[i]);
                    for k in j + 1..n {
                        let normal = cross3(&e1, &sub(&pts[k], &pts[i]));
                        if normal.iter().all(is_zero) {
                            continue;
                        }
                        let mut pos = false;
                        let mut neg = false;
                        for p in pts {
                            match sign(&dot(&normal, &sub(p, &pts[i]))) {
                                Ordering::Greater => pos = true,
                                Ordering::Less => neg = true,
                                Ordering::Equal => {}
                            }
                            if pos && neg {
                                break;
                            }
                        }
                        if pos && neg {
                            continue;
                        }
                        let normal = if pos { normal.iter().map(|x| -x.clone()).collect() } else { normal };
                        let offset = dot(&normal, &pts[i]);
                        let h = Halfspace::canonical(normal, offset);
                        if !facets.iter().any(|f| approx_eq_vec(&f.normal, &h.normal)) {
                            facets.push(h);
                        }
                    }
                }
            }
            let verts = (0..n)
                .filter(|&i| {
                    let active: Vec<Vec<S>> = facets
                        .iter()
                        .filter(|f| is_zero(&f.eval(&pts[i])))
                        .map(|f| f.normal.clone())
                        .collect();
                    rank(&active, 3) == 3
                })
                .collect();
            (verts, facets)
        }
    }
}

impl<S: Scalar> Polytope<S> {
    pub fn empty(dim: usize) -> Self {
        Polytope {
            dim,
            vertices: Vec::new(),
            facets: Vec::new(),
            equalities: Vec::new(),
            affine_dim: None,
        }
    }

    /// Convex hull of a finite point set.
    pub fn hull(dim: usize, points: &[Vec<S>]) -> Result<Self> {
        check_dim(dim)?;
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::invalid(format!(
                "point of length {} in dimension {dim}",
                p.len()
            )));
        }
        let mut pts = points.to_vec();
        pts.sort_by(|a, b| lex_cmp(a, b));
        pts.dedup_by(|a, b| approx_eq_vec(a, b));
        if pts.is_empty() {
            return Ok(Self::empty(dim));
        }
        let base = pts[0].clone();
        let diffs: Vec<Vec<S>> = pts[1..].iter().map(|p| sub(p, &base)).collect();
        let (basis, pivots) = rref(diffs, dim);
        let r = pivots.len();
        let mut equalities: Vec<Halfspace<S>> = null_space(&basis, dim)
            .into_iter()
            .map(|n| {
                let off = dot(&n, &base);
                Halfspace::canonical(n, off)
            })
            .collect();
        equalities.sort_by(|a, b| lex_cmp(&a.normal, &b.normal));

        let (idx, mut facets) = if r == 0 {
            (vec![0], Vec::new())
        } else if r == dim {
            full_hull(dim, &pts)
        } else {
            let proj: Vec<Vec<S>> = pts
                .iter()
                .map(|p| pivots.iter().map(|&c| p[c].clone()).collect())
                .collect();
            let (idx, rel) = full_hull(r, &proj);
            let lifted = rel
                .into_iter()
                .map(|h| {
                    let mut n = vec![S::zero(); dim];
                    for (k, &c) in pivots.iter().enumerate() {
                        n[c] = h.normal[k].clone();
                    }
                    Halfspace::canonical(n, h.offset)
                })
                .collect();
            (idx, lifted)
        };
        facets.sort_by(|a, b| lex_cmp(&a.normal, &b.normal));
        let mut vertices: Vec<Vec<S>> = idx.into_iter().map(|i| pts[i].clone()).collect();
        vertices.sort_by(|a, b| lex_cmp(a, b));
        Ok(Polytope {
            dim,
            vertices,
            facets,
            equalities,
            affine_dim: Some(r),
        })
    }

    pub fn from_lattice(dim: usize, points: &[LatticeVector]) -> Result<Self> {
        let pts: Vec<Vec<S>> = points.iter().map(|p| p.to_point()).collect();
        Self::hull(dim, &pts)
    }

    /// Axis-parallel box `[lo, hi]^d`.
    pub fn cube(dim: usize, lo: S, hi: S) -> Result<Self> {
        check_dim(dim)?;
        let corners: Vec<Vec<S>> = (0..dim)
            .map(|_| [lo.clone(), hi.clone()])
            .multi_cartesian_product()
            .collect();
        Self::hull(dim, &corners)
    }

    /// Bounded polytope `{x : h.normal·x ≤ h.offset, e.normal·x = e.offset}`
    /// by vertex enumeration.
    pub fn from_constraints(
        dim: usize,
        halfspaces: &[Halfspace<S>],
        equalities: &[Halfspace<S>],
    ) -> Result<Self> {
        check_dim(dim)?;
        let aug: Vec<Vec<S>> = equalities
            .iter()
            .map(|e| {
                let mut r = e.normal.clone();
                r.push(e.offset.clone());
                r
            })
            .collect();
        let (red, piv) = rref(aug, dim + 1);
        if piv.contains(&dim) {
            return Ok(Self::empty(dim));
        }
        let eq_rows: Vec<Vec<S>> = red.iter().map(|r| r[..dim].to_vec()).collect();
        let eq_rhs: Vec<S> = red.iter().map(|r| r[dim].clone()).collect();
        let k = dim - eq_rows.len();
        let feasible = |x: &[S]| {
            halfspaces.iter().all(|h| sign(&h.eval(x)) != Ordering::Greater)
                && equalities.iter().all(|e| is_zero(&e.eval(x)))
        };
        let mut found: Vec<Vec<S>> = Vec::new();
        for combo in (0..halfspaces.len()).combinations(k) {
            let mut a = eq_rows.clone();
            let mut b = eq_rhs.clone();
            for &c in &combo {
                a.push(halfspaces[c].normal.clone());
                b.push(halfspaces[c].offset.clone());
            }
            if let Some(x) = solve(&a, &b) {
                if feasible(&x) {
                    found.push(x);
                }
            }
        }
        Self::hull(dim, &found)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<S>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Halfspace<S>] {
        &self.facets
    }

    pub fn equalities(&self) -> &[Halfspace<S>] {
        &self.equalities
    }

    /// `None` for the empty polytope.
    pub fn affine_dim(&self) -> Option<usize> {
        self.affine_dim
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == Some(self.dim)
    }

    pub fn is_integral(&self) -> bool {
        self.vertices.iter().flatten().all(is_integral)
    }

    /// `h_P(u) = max_v v·u`; `None` on the empty polytope.
    pub fn support(&self, u: &[S]) -> Option<S> {
        self.vertices
            .iter()
            .map(|v| dot(v, u))
            .max_by(|a, b| a.partial_cmp(b).expect("comparable scalars"))
    }

    /// Indices of vertices attaining the support value in direction `u`.
    pub fn maximizers(&self, u: &[S]) -> Vec<usize> {
        let Some(h) = self.support(u) else {
            return Vec::new();
        };
        (0..self.vertices.len())
            .filter(|&i| is_zero(&(dot(&self.vertices[i], u) - h.clone())))
            .collect()
    }

    pub fn contains(&self, x: &[S]) -> bool {
        !self.is_empty()
            && self.facets.iter().all(|h| sign(&h.eval(x)) != Ordering::Greater)
            && self.equalities.iter().all(|e| is_zero(&e.eval(x)))
    }

    /// Strict interior membership (full-dimensional polytopes only).
    pub fn contains_in_interior(&self, x: &[S]) -> bool {
        self.is_full_dimensional() && self.facets.iter().all(|h| sign(&h.eval(x)) == Ordering::Less)
    }

    /// Interior relative to the affine hull.
    pub fn contains_in_relative_interior(&self, x: &[S]) -> bool {
        match self.affine_dim {
            None => false,
            Some(0) => approx_eq_vec(&self.vertices[0], x),
            Some(_) => {
                self.equalities.iter().all(|e| is_zero(&e.eval(x)))
                    && self.facets.iter().all(|h| sign(&h.eval(x)) == Ordering::Less)
            }
        }
    }

    /// Dilation `P ⊕ Q`.
    pub fn minkowski_sum(&self, other: &Polytope<S>) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::invalid("Minkowski sum of polytopes of different dimension"));
        }
        let sums: Vec<Vec<S>> = self
            .vertices
            .iter()
            .flat_map(|a| other.vertices.iter().map(move |b| add(a, b)))
            .collect();
        Self::hull(self.dim, &sums)
    }

    /// Erosion `P ⊖ S = {x : x + S ⊆ P}` from facet offsets `b − h_S(N)`.
    /// Eroding by the empty set returns `P` unchanged.
    pub fn erode(&self, s: &Polytope<S>) -> Result<Self> {
        if self.dim != s.dim {
            return Err(Error::invalid("erosion of polytopes of different dimension"));
        }
        if self.is_empty() || s.is_empty() {
            return Ok(self.clone());
        }
        let mut eqs = Vec::with_capacity(self.equalities.len());
        for e in &self.equalities {
            let neg: Vec<S> = e.normal.iter().map(|x| -x.clone()).collect();
            let hi = s.support(&e.normal).expect("nonempty");
            let lo = -s.support(&neg).expect("nonempty");
            if !is_zero(&(hi.clone() - lo)) {
                return Ok(Self::empty(self.dim));
            }
            eqs.push(Halfspace {
                normal: e.normal.clone(),
                offset: e.offset.clone() - hi,
            });
        }
        let hs: Vec<Halfspace<S>> = self
            .facets
            .iter()
            .map(|f| Halfspace {
                normal: f.normal.clone(),
                offset: f.offset.clone() - s.support(&f.normal).expect("nonempty"),
            })
            .collect();
        Self::from_constraints(self.dim, &hs, &eqs)
    }

    pub fn translate(&self, v: &[S]) -> Self {
        let shift = |h: &Halfspace<S>| Halfspace {
            normal: h.normal.clone(),
            offset: h.offset.clone() + dot(&h.normal, v),
        };
        Polytope {
            dim: self.dim,
            vertices: self.vertices.iter().map(|p| add(p, v)).collect(),
            facets: self.facets.iter().map(shift).collect(),
            equalities: self.equalities.iter().map(shift).collect(),
            affine_dim: self.affine_dim,
        }
    }

    /// Homothety `kP` about the origin.
    pub fn scale(&self, k: &S) -> Self {
        let pts: Vec<Vec<S>> = self
            .vertices
            .iter()
            .map(|p| p.iter().map(|x| x.clone() * k.clone()).collect())
            .collect();
        Self::hull(self.dim, &pts).expect("scaling preserves dimension")
    }

    pub fn to_f64(&self) -> Polytope<f64> {
        let conv = |h: &Halfspace<S>| {
            let n: Vec<f64> = h.normal.iter().map(|x| x.to_f64_lossy()).collect();
            let norm = n.iter().map(|x| x * x).sum::<f64>().sqrt();
            Halfspace {
                normal: n.iter().map(|x| x / norm).collect(),
                offset: h.offset.to_f64_lossy() / norm,
            }
        };
        Polytope {
            dim: self.dim,
            vertices: self
                .vertices
                .iter()
                .map(|p| p.iter().map(|x| x.to_f64_lossy()).collect())
                .collect(),
            facets: self.facets.iter().map(conv).collect(),
            equalities: self.equalities.iter().map(conv).collect(),
            affine_dim: self.affine_dim,
        }
    }

    /// Vertices lying on the given facet.
    pub fn facet_vertices(&self, facet: &Halfspace<S>) -> Vec<&Vec<S>> {
        self.vertices
            .iter()
            .filter(|v| is_zero(&facet.eval(v)))
            .collect()
    }

    /// Lattice points among the vertices, when all vertices are integral.
    pub fn integral_vertices(&self) -> Option<Vec<LatticeVector>> {
        self.vertices
            .iter()
            .map(|v| {
                let c: Option<Vec<i64>> = v
                    .iter()
                    .map(|x| is_integral(x).then(|| x.floor_i64()))
                    .collect();
                c.map(|c| LatticeVector::new(&c))
            })
            .collect()
    }
}

impl Polytope<f64> {
    /// `P ⊖ B(r)`: every facet moves inward by `r`.
    pub fn erode_ball(&self, r: f64) -> Result<Self> {
        if !self.is_full_dimensional() {
            return Err(Error::invalid("ball erosion needs a full-dimensional polytope"));
        }
        let hs: Vec<Halfspace<f64>> = self
            .facets
            .iter()
            .map(|f| Halfspace {
                normal: f.normal.clone(),
                offset: f.offset - r * dot(&f.normal, &f.normal).sqrt(),
            })
            .collect();
        Self::from_constraints(self.dim, &hs, &[])
    }
}

impl<S: Scalar> PartialEq for Polytope<S> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.vertices.len() == other.vertices.len()
            && self
                .vertices
                .iter()
                .zip(&other.vertices)
                .all(|(a, b)| approx_eq_vec(a, b))
    }
}

impl<S: Scalar> fmt::Display for Polytope<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dim={}; vertices=", self.dim)?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({})", v.iter().join(","))?;
        }
        Ok(())
    }
}

/// Parse a parenthesized point list `(a,b),(c,d)`.
pub fn parse_point_list<S: Scalar>(text: &str) -> Result<Vec<Vec<S>>> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::invalid(format!("expected '(' at {rest:?}")))?;
        let close = open
            .find(')')
            .ok_or_else(|| Error::invalid("unterminated point"))?;
        let coords = open[..close]
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<S>()
                    .map_err(|_| Error::invalid(format!("bad coordinate {:?}", t.trim())))
            })
            .collect::<Result<Vec<S>>>()?;
        out.push(coords);
        rest = open[close + 1..].trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
        }
    }
    Ok(out)
}

impl<S: Scalar> FromStr for Polytope<S> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut dim = None;
        let mut verts = None;
        for part in s.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("expected key=value, got {part:?}")))?;
            match key.trim() {
                "dim" => {
                    dim = Some(
                        val.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::invalid(format!("bad dim {val:?}")))?,
                    )
                }
                "vertices" => verts = Some(parse_point_list::<S>(val)?),
                other => return Err(Error::invalid(format!("unknown key {other:?}"))),
            }
        }
        let dim = dim.ok_or_else(|| Error::invalid("missing dim"))?;
        Self::hull(dim, &verts.unwrap_or_default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_integer(x as i128)).collect()
    }

    fn poly(dim: usize, pts: &[&[i64]]) -> Polytope<Rational> {
        Polytope::hull(dim, &pts.iter().map(|p| q(p)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn hull_of_square_and_interior_point() {
        let p = poly(2, &[&[0, 0], &[2, 0], &[0, 2], &[1, 1]]);
        assert_eq!(p.vertices().len(), 3);
        assert_eq!(p.facets().len(), 3);
        assert!(p.contains(&q(&[1, 1])));
        let sq = poly(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(sq.facets().len(), 4);
        let pt = poly(2, &[&[0, 0]]);
        assert_eq!(pt.facets().len(), 0);
        assert_eq!(pt.affine_dim(), Some(0));
    }

    #[test]
    fn lower_dimensional_hull() {
        let seg = poly(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(seg.affine_dim(), Some(1));
        assert_eq!(seg.equalities().len(), 1);
        assert!(seg.contains(&[Rational::new(1, 2), Rational::new(1, 2)]));
        assert!(!seg.contains(&q(&[0, 0])));
        let tri3 = poly(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(tri3.affine_dim(), Some(2));
        assert_eq!(tri3.facets().len(), 3);
    }

    #[test]
    fn cube_3d() {
        let c = Polytope::cube(3, Rational::from_integer(0), Rational::from_integer(1)).unwrap();
        assert_eq!(c.vertices().len(), 8);
        assert_eq!(c.facets().len(), 6);
        for f in c.facets() {
            assert_eq!(f.normal.iter().filter(|x| **x != Rational::from_integer(0)).count(), 1);
        }
    }

    #[test]
    fn morphology() {
        let sq = |a: i64, b: i64| Polytope::cube(2, Rational::from_integer(a as i128), Rational::from_integer(b as i128)).unwrap();
        let tri = poly(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(sq(-3, 3).erode(&tri).unwrap(), poly(2, &[&[-3, -3], &[2, -3], &[-3, 2], &[2, 2]]));
        assert_eq!(sq(0, 1).minkowski_sum(&sq(0, 1)).unwrap(), sq(0, 2));
        let hex = sq(-1, 1).minkowski_sum(&tri).unwrap();
        // (−1,−1),(2,−1),(2,1),(1,2),(−1,2)
        assert_eq!(hex.vertices().len(), 5);
        assert_eq!(hex.support(&q(&[1, 0])), Some(Rational::from_integer(2)));
        assert_eq!(hex.support(&q(&[-1, 0])), Some(Rational::from_integer(1)));
        let origin = poly(2, &[&[0, 0]]);
        assert_eq!(hex.erode(&origin).unwrap(), hex);
        assert!(sq(0, 1).erode(&sq(0, 3)).unwrap().is_empty());
    }

    #[test]
    fn text_round_trip() {
        let p: Polytope<Rational> = "dim=2; vertices=(0,0),(1/2,0),(0,1)".parse().unwrap();
        assert_eq!(p.to_string(), "dim=2; vertices=(0,0),(0,1),(1/2,0)");
        let back: Polytope<Rational> = p.to_string().parse().unwrap();
        assert_eq!(back, p);
        assert!("dim=2; verts=(0,0)".parse::<Polytope<Rational>>().is_err());
    }
}
