use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::geometry::{linalg::dot, LatticeVector, Polytope};
use crate::scalar::cmp_scaled;
use crate::Rational;

/// Facet of `J` whose normal has a unique maximizer over `ex(𝕀)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PerpFace {
    /// Primitive outward normal `N^F`.
    pub normal: Vec<Rational>,
    /// `h_J(N^F)`.
    pub offset: Rational,
    /// `u^F`, the unique extreme point of `𝕀` maximizing `N^F`.
    pub maximizer: LatticeVector,
    /// `h_𝕀(N^F) = u^F·N^F`.
    pub depth: Rational,
}

/// The set `∂⊥_𝕀 J` in `≺` order, with the face `F_j` attached to each point.
#[derive(Clone, Debug, PartialEq)]
pub struct PerpBoundary {
    pub faces: Vec<PerpFace>,
    pub points: Vec<LatticeVector>,
    /// `assignment[t]` indexes the face chosen for `points[t]`.
    pub assignment: Vec<usize>,
}

impl PerpBoundary {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `((j + u^F)·N − b, |N|²)`: the signed distance of `j + u^F` past the
    /// facet, as a numerator over `sqrt` of the second entry.
    pub fn excess(&self, t: usize) -> (Rational, Rational) {
        excess(&self.faces[self.assignment[t]], self.points[t])
    }
}

fn excess(face: &PerpFace, j: LatticeVector) -> (Rational, Rational) {
    let p = (j + face.maximizer).to_point::<Rational>();
    (dot(&p, &face.normal) - face.offset, dot(&face.normal, &face.normal))
}

fn cmp_excess(a: &(Rational, Rational), b: &(Rational, Rational)) -> Ordering {
    cmp_scaled(&a.0, &a.1, &b.0, &b.1)
}

/// Builds `∂⊥_𝕀 J` for `𝕀 = cv(I′ ∪ {0})`.
///
/// A facet is kept when `ex(𝕀)` has a single maximizer of its normal. Its band
/// holds the lattice points of `J` with `x·N > h_J(N) − h_𝕀(N)`; `∂⊥` is the
/// union of the bands. Each point `j` is attached to the kept face whose band
/// contains it and which maximizes the distance of `j + u^F` past `F`, and
/// points are ordered by that distance, ties broken lexicographically.
pub fn perp_boundary(j: &Polytope<Rational>, i_set: &[LatticeVector]) -> Result<PerpBoundary> {
    let d = j.dim();
    if !j.is_full_dimensional() || !j.is_integral() {
        return Err(Error::invalid("perp boundary needs a full-dimensional integral polytope"));
    }
    if i_set.iter().any(|v| v.dim() != d) {
        return Err(Error::invalid("structuring set of wrong dimension"));
    }
    let mut pts = i_set.to_vec();
    pts.push(LatticeVector::zero(d));
    let hull = Polytope::<Rational>::from_lattice(d, &pts)?;
    let ex = hull.integral_vertices().expect("hull of lattice points is integral");

    let faces: Vec<PerpFace> = j
        .facets()
        .iter()
        .filter_map(|f| {
            let values: Vec<Rational> = ex.iter().map(|u| dot(&u.to_point(), &f.normal)).collect();
            let best = *values.iter().max().expect("nonempty hull");
            let mut at = values.iter().enumerate().filter(|(_, v)| **v == best);
            let (t, _) = at.next().expect("maximum is attained");
            at.next().is_none().then(|| PerpFace {
                normal: f.normal.clone(),
                offset: f.offset,
                maximizer: ex[t],
                depth: best,
            })
        })
        .collect();

    let mut chosen: Vec<(LatticeVector, usize, (Rational, Rational))> = Vec::new();
    for x in j.lattice_points()? {
        let p = x.to_point::<Rational>();
        let mut best: Option<(usize, (Rational, Rational))> = None;
        for (t, face) in faces.iter().enumerate() {
            if dot(&p, &face.normal) <= face.offset - face.depth {
                continue;
            }
            let e = excess(face, x);
            if best.as_ref().is_none_or(|b| cmp_excess(&e, &b.1) == Ordering::Greater) {
                best = Some((t, e));
            }
        }
        if let Some((t, e)) = best {
            chosen.push((x, t, e));
        }
    }
    chosen.sort_by(|a, b| cmp_excess(&a.2, &b.2).then(a.0.cmp(&b.0)));
    Ok(PerpBoundary {
        faces,
        points: chosen.iter().map(|c| c.0).collect(),
        assignment: chosen.iter().map(|c| c.1).collect(),
    })
}
