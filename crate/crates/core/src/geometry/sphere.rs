//! Smallest bounding sphere, its degeneracy flag, and the dual polytopes built
//! from tangent halfspaces.

use std::cmp::Ordering;

use super::linalg::{add, dot, norm_sq, rank, scale, solve, sub};
use super::polytope::{Halfspace, Polytope};
use crate::error::{Error, Result};
use crate::scalar::{approx_eq, cmp, is_zero, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct BoundingSphere<S> {
    pub center: Vec<S>,
    pub radius_sq: S,
    /// Input points lying on the sphere, lexicographically sorted.
    pub support: Vec<Vec<S>>,
}

impl<S: Scalar> BoundingSphere<S> {
    pub fn radius(&self) -> f64 {
        self.radius_sq.to_f64_lossy().sqrt()
    }

    pub fn contains(&self, p: &[S]) -> bool {
        cmp(&norm_sq(&sub(p, &self.center)), &self.radius_sq) != Ordering::Greater
    }
}

/// Circumcenter of affinely independent points, taken inside their affine hull.
fn circumcenter<S: Scalar>(pts: &[Vec<S>]) -> (Vec<S>, S) {
    let p0 = &pts[0];
    let diffs: Vec<Vec<S>> = pts[1..].iter().map(|p| sub(p, p0)).collect();
    if diffs.is_empty() {
        return (p0.clone(), S::zero());
    }
    let gram: Vec<Vec<S>> = diffs
        .iter()
        .map(|a| diffs.iter().map(|b| dot(a, b)).collect())
        .collect();
    let half = S::one() / S::from_int(2);
    let rhs: Vec<S> = diffs.iter().map(|a| norm_sq(a) * half.clone()).collect();
    let lambda = solve(&gram, &rhs).expect("affinely independent points");
    let mut c = p0.clone();
    for (l, d) in lambda.iter().zip(&diffs) {
        c = add(&c, &scale(d, l));
    }
    let r2 = norm_sq(&sub(&c, p0));
    (c, r2)
}

/// Sphere through the boundary set, using a maximal affinely independent subset.
fn trivial<S: Scalar>(boundary: &[Vec<S>], dim: usize) -> Option<(Vec<S>, S)> {
    let first = boundary.first()?;
    let mut chosen = vec![first.clone()];
    let mut dirs: Vec<Vec<S>> = Vec::new();
    for p in &boundary[1..] {
        let mut trial = dirs.clone();
        trial.push(sub(p, first));
        if rank(&trial, dim) > dirs.len() {
            dirs = trial;
            chosen.push(p.clone());
        }
    }
    Some(circumcenter(&chosen))
}

fn inside<S: Scalar>(ball: &Option<(Vec<S>, S)>, p: &[S]) -> bool {
    match ball {
        None => false,
        Some((c, r2)) => cmp(&norm_sq(&sub(p, c)), r2) != Ordering::Greater,
    }
}

fn welzl<S: Scalar>(
    pts: &[Vec<S>],
    n: usize,
    boundary: &mut Vec<Vec<S>>,
    dim: usize,
) -> Option<(Vec<S>, S)> {
    if n == 0 || boundary.len() == dim + 1 {
        return trivial(boundary, dim);
    }
    let p = &pts[n - 1];
    let ball = welzl(pts, n - 1, boundary, dim);
    if inside(&ball, p) {
        return ball;
    }
    boundary.push(p.clone());
    let ball = welzl(pts, n - 1, boundary, dim);
    boundary.pop();
    ball
}

/// Exact smallest enclosing sphere (Welzl recursion, circumcenters solved in
/// the scalar field).
pub fn smallest_bounding_sphere<S: Scalar>(points: &[Vec<S>]) -> Result<BoundingSphere<S>> {
    let dim = points
        .first()
        .ok_or_else(|| Error::invalid("bounding sphere of an empty set"))?
        .len();
    super::polytope::check_dim(dim)?;
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| super::linalg::lex_cmp(a, b));
    pts.dedup_by(|a, b| super::linalg::approx_eq_vec(a, b));
    let (center, radius_sq) =
        welzl(&pts, pts.len(), &mut Vec::new(), dim).expect("nonempty point set");
    let support = pts
        .iter()
        .filter(|p| approx_eq(&norm_sq(&sub(p, &center)), &radius_sq))
        .cloned()
        .collect();
    Ok(BoundingSphere {
        center,
        radius_sq,
        support,
    })
}

#[derive(Clone, Debug)]
pub enum SphereClass<S> {
    /// All points coincide.
    Point,
    /// The center is interior to the generating polytope `cv(support)`.
    Nondegenerate { generating: Polytope<S> },
    /// The center sits on the boundary of `cv(support)`. `flag[i]` holds the
    /// normal of `H_{i+1}` inside `H_i`; every `H_i` passes through the center.
    Degenerate {
        flag: Vec<Vec<S>>,
        terminal: Polytope<S>,
        terminal_dual: Polytope<S>,
    },
}

impl<S> SphereClass<S> {
    /// Length `l` of the degeneracy flag.
    pub fn depth(&self) -> usize {
        match self {
            SphereClass::Degenerate { flag, .. } => flag.len(),
            _ => 0,
        }
    }
}

/// Classify the smallest bounding sphere of `points`, descending through
/// hyperplanes through the center until the center is relatively interior.
pub fn classify_bounding_sphere<S: Scalar>(sphere: &BoundingSphere<S>) -> Result<SphereClass<S>> {
    let dim = sphere.center.len();
    if is_zero(&sphere.radius_sq) {
        return Ok(SphereClass::Point);
    }
    let c = &sphere.center;
    let mut flag: Vec<Vec<S>> = Vec::new();
    let mut current = sphere.support.clone();
    loop {
        let t = Polytope::hull(dim, &current)?;
        let sub_dim = dim - flag.len();
        let t_dim = t.affine_dim().expect("support is nonempty");
        if t_dim == sub_dim && t.contains_in_relative_interior(c) {
            if flag.is_empty() {
                return Ok(SphereClass::Nondegenerate { generating: t });
            }
            let dual = dual_polytope(&t, sphere)?;
            return Ok(SphereClass::Degenerate {
                flag,
                terminal: t,
                terminal_dual: dual,
            });
        }
        let normal = if t_dim < sub_dim {
            let base = flag.clone();
            t.equalities()
                .iter()
                .map(|e| e.normal.clone())
                .find(|n| {
                    let mut rows = base.clone();
                    rows.push(n.clone());
                    rank(&rows, dim) > base.len()
                })
                .expect("lower-dimensional hull has a new equality")
        } else {
            t.facets()
                .iter()
                .find(|f| is_zero(&f.eval(c)))
                .ok_or_else(|| Error::invalid("center outside the hull of the support"))?
                .normal
                .clone()
        };
        let level = dot(&normal, c);
        current.retain(|p| approx_eq(&dot(&normal, p), &level));
        flag.push(normal);
        if dim == 3 && flag.len() >= 2 {
            return Err(Error::UnsupportedConfiguration(
                "degeneracy flag of depth >= 2 in dimension 3".into(),
            ));
        }
    }
}

/// `T′ = {x ∈ aff(T) : (x − c)·(v − c) ≤ R²}` over the vertices `v` of `T`.
pub fn dual_polytope<S: Scalar>(t: &Polytope<S>, sphere: &BoundingSphere<S>) -> Result<Polytope<S>> {
    let c = &sphere.center;
    for v in t.vertices() {
        if !approx_eq(&norm_sq(&sub(v, c)), &sphere.radius_sq) {
            return Err(Error::invalid("generating polytope has a vertex off the sphere"));
        }
    }
    if !t.contains_in_relative_interior(c) {
        return Err(Error::invalid("sphere center is not interior to the generating polytope"));
    }
    let hs: Vec<Halfspace<S>> = t
        .vertices()
        .iter()
        .map(|v| {
            let n = sub(v, c);
            let off = sphere.radius_sq.clone() + dot(&n, c);
            Halfspace { normal: n, offset: off }
        })
        .collect();
    Polytope::from_constraints(t.dim(), &hs, t.equalities())
}

/// Which isometry realizes the flag frame; results must not depend on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsometryChoice {
    Standard,
    Reflected,
}

/// Facet categories of a slab dual: faces tangent to the sphere (coming from
/// the terminal dual) and the slab faces orthogonal to the flag normals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FacetCategory {
    Tangent,
    Slab,
}

#[derive(Clone, Debug)]
pub struct SlabDual {
    /// `T′_R` in ambient coordinates, centred at the sphere center.
    pub polytope: Polytope<f64>,
    /// Category of each facet of `polytope`, in facet order.
    pub categories: Vec<FacetCategory>,
    pub center: Vec<f64>,
}

impl SlabDual {
    /// The slab dual translated so that the sphere center is the origin.
    pub fn centered(&self) -> Polytope<f64> {
        let shift: Vec<f64> = self.center.iter().map(|x| -x).collect();
        self.polytope.translate(&shift)
    }
}

fn unit(v: Vec<f64>) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

/// Orthonormal frame whose first rows span the flag normals.
fn flag_frame(normals: &[Vec<f64>], dim: usize, choice: IsometryChoice) -> Vec<Vec<f64>> {
    let mut frame: Vec<Vec<f64>> = Vec::new();
    let candidates = normals
        .iter()
        .cloned()
        .chain((0..dim).map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect()));
    for v in candidates {
        let mut w = v.clone();
        for f in &frame {
            let p: f64 = w.iter().zip(f).map(|(a, b)| a * b).sum();
            w = w.iter().zip(f).map(|(a, b)| a - p * b).collect();
        }
        if w.iter().map(|x| x * x).sum::<f64>().sqrt() > 1e-9 {
            frame.push(unit(w));
        }
        if frame.len() == dim {
            break;
        }
    }
    if choice == IsometryChoice::Reflected {
        frame[0] = frame[0].iter().map(|x| -x).collect();
        let last = frame.len() - 1;
        if last > 0 {
            frame[last] = frame[last].iter().map(|x| -x).collect();
        }
    }
    frame
}

/// `T′_R = U⁻¹([−R,R]^l × U(L′))` for a degenerate sphere, built in the frame
/// `U` and mapped back to ambient coordinates.
pub fn slab_dual<S: Scalar>(
    sphere: &BoundingSphere<S>,
    class: &SphereClass<S>,
    r: f64,
    choice: IsometryChoice,
) -> Result<SlabDual> {
    let SphereClass::Degenerate { flag, terminal, .. } = class else {
        return Err(Error::NotApplicable("slab dual needs a degenerate sphere".into()));
    };
    if r.is_nan() || r <= 0.0 {
        return Err(Error::invalid("slab half-width must be positive"));
    }
    let dim = sphere.center.len();
    let c: Vec<f64> = sphere.center.iter().map(|x| x.to_f64_lossy()).collect();
    let normals: Vec<Vec<f64>> = flag
        .iter()
        .map(|n| n.iter().map(|x| x.to_f64_lossy()).collect())
        .collect();
    let frame = flag_frame(&normals, dim, choice);
    let to_frame = |x: &[f64]| -> Vec<f64> {
        frame
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    };
    let l = flag.len();
    let mut hs: Vec<Halfspace<f64>> = Vec::new();
    for i in 0..l {
        for s in [1.0, -1.0] {
            let mut n = vec![0.0; dim];
            n[i] = s;
            hs.push(Halfspace { normal: n, offset: r });
        }
    }
    let r2 = sphere.radius_sq.to_f64_lossy();
    for v in terminal.vertices() {
        let vf: Vec<f64> = v.iter().map(|x| x.to_f64_lossy()).collect();
        let w = to_frame(&sub(&vf, &c));
        hs.push(Halfspace { normal: w, offset: r2 });
    }
    let local = Polytope::<f64>::from_constraints(dim, &hs, &[])?;
    let ambient: Vec<Vec<f64>> = local
        .vertices()
        .iter()
        .map(|y| {
            let mut x = c.clone();
            for (row, yi) in frame.iter().zip(y) {
                for (xj, rj) in x.iter_mut().zip(row) {
                    *xj += rj * yi;
                }
            }
            x
        })
        .collect();
    let polytope = Polytope::<f64>::hull(dim, &ambient)?;
    let categories = polytope
        .facets()
        .iter()
        .map(|f| {
            let parallel = normals.iter().any(|n| {
                let n = unit(n.clone());
                let d: f64 = n.iter().zip(&f.normal).map(|(a, b)| a * b).sum();
                (d.abs() - 1.0).abs() < 1e-9
            });
            if parallel {
                FacetCategory::Slab
            } else {
                FacetCategory::Tangent
            }
        })
        .collect();
    Ok(SlabDual {
        polytope,
        categories,
        center: c,
    })
}
