//! Volumes, facet measures, area measures and the first relative quermass integral.
//!
//! Volumes stay in the scalar field. Everything involving a square root is
//! returned as `f64`.

use super::linalg::{cross3, dot, norm_sq, sub};
use super::polytope::{monotone_chain, Halfspace, Polytope};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Discrete area measure: one atom per facet.
#[derive(Clone, Debug, PartialEq)]
pub struct AreaMeasureAtoms {
    pub atoms: Vec<(Vec<f64>, f64)>,
}

impl AreaMeasureAtoms {
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|(_, m)| m).sum()
    }
}

fn sqrt_of<S: Scalar>(x: &S) -> f64 {
    x.to_f64_lossy().sqrt()
}

/// Vertices of a 2D face of a 3D polytope in cyclic order.
fn cyclic_face<S: Scalar>(normal: &[S], pts: &[&Vec<S>]) -> Vec<Vec<S>> {
    let drop = (0..3)
        .max_by(|&a, &b| {
            normal[a]
                .abs()
                .partial_cmp(&normal[b].abs())
                .expect("comparable scalars")
        })
        .expect("three axes");
    let keep: Vec<usize> = (0..3).filter(|&i| i != drop).collect();
    let mut proj: Vec<(Vec<S>, usize)> = pts
        .iter()
        .enumerate()
        .map(|(k, p)| (keep.iter().map(|&i| p[i].clone()).collect(), k))
        .collect();
    proj.sort_by(|a, b| super::linalg::lex_cmp(&a.0, &b.0));
    let flat: Vec<Vec<S>> = proj.iter().map(|(p, _)| p.clone()).collect();
    monotone_chain(&flat)
        .into_iter()
        .map(|i| pts[proj[i].1].clone())
        .collect()
}

impl<S: Scalar> Polytope<S> {
    /// d-dimensional volume; zero for lower-dimensional polytopes.
    pub fn volume(&self) -> S {
        if !self.is_full_dimensional() {
            return S::zero();
        }
        let v = self.vertices();
        match self.dim() {
            1 => v[v.len() - 1][0].clone() - v[0][0].clone(),
            2 => {
                let ring = monotone_chain(v);
                let mut twice = S::zero();
                for k in 0..ring.len() {
                    let a = &v[ring[k]];
                    let b = &v[ring[(k + 1) % ring.len()]];
                    twice = twice + a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone();
                }
                twice / S::from_int(2)
            }
            _ => {
                let apex = &v[0];
                let mut six = S::zero();
                for f in self.facets() {
                    let face = cyclic_face(&f.normal, &self.facet_vertices(f));
                    for k in 1..face.len().saturating_sub(1) {
                        let a = sub(&face[0], apex);
                        let b = sub(&face[k], apex);
                        let c = sub(&face[k + 1], apex);
                        six = six + dot(&a, &cross3(&b, &c)).abs();
                    }
                }
                six / S::from_int(6)
            }
        }
    }

    /// Measure of a facet in its own dimension (`affine_dim − 1`).
    pub fn facet_measure(&self, facet: &Halfspace<S>) -> f64 {
        let pts = self.facet_vertices(facet);
        match self.affine_dim() {
            Some(1) => 1.0,
            Some(2) => match pts.len() {
                2 => sqrt_of(&norm_sq(&sub(pts[1], pts[0]))),
                _ => 0.0,
            },
            Some(3) => {
                let face = cyclic_face(&facet.normal, &pts);
                let mut area = 0.0;
                for k in 1..face.len().saturating_sub(1) {
                    let c = cross3(&sub(&face[k], &face[0]), &sub(&face[k + 1], &face[0]));
                    area += sqrt_of(&norm_sq(&c)) / 2.0;
                }
                area
            }
            _ => 0.0,
        }
    }

    pub fn facet_measures(&self) -> Vec<f64> {
        self.facets().iter().map(|f| self.facet_measure(f)).collect()
    }

    /// `p(P)`: total facet measure. For `d = 1` this is 2. Lower-dimensional
    /// polytopes report the measure of their relative boundary.
    pub fn boundary_measure(&self) -> f64 {
        if self.dim() == 1 && !self.is_empty() {
            return 2.0;
        }
        self.facet_measures().iter().fold(0.0, |a, b| a + b)
    }

    pub fn area_measure_atoms(&self) -> AreaMeasureAtoms {
        let atoms = self
            .facets()
            .iter()
            .map(|f| {
                let n: Vec<f64> = f.normal.iter().map(|x| x.to_f64_lossy()).collect();
                let len = n.iter().map(|x| x * x).sum::<f64>().sqrt();
                (n.iter().map(|x| x / len).collect(), self.facet_measure(f))
            })
            .collect();
        AreaMeasureAtoms { atoms }
    }

    /// Smallest interior angle of a polygon, in radians.
    pub fn min_vertex_angle(&self) -> Result<f64> {
        if self.dim() != 2 || !self.is_full_dimensional() {
            return Err(Error::invalid("angle requires a two-dimensional polygon"));
        }
        let v = self.vertices();
        let ring = monotone_chain(v);
        let n = ring.len();
        let f = |p: &Vec<S>| -> (f64, f64) { (p[0].to_f64_lossy(), p[1].to_f64_lossy()) };
        let mut best = f64::INFINITY;
        for k in 0..n {
            let (px, py) = f(&v[ring[(k + n - 1) % n]]);
            let (cx, cy) = f(&v[ring[k]]);
            let (nx, ny) = f(&v[ring[(k + 1) % n]]);
            let (ax, ay) = (px - cx, py - cy);
            let (bx, by) = (nx - cx, ny - cy);
            let cos = (ax * bx + ay * by) / ((ax * ax + ay * ay).sqrt() * (bx * bx + by * by).sqrt());
            best = best.min(cos.clamp(-1.0, 1.0).acos());
        }
        Ok(best)
    }

    /// Euclidean diameter of the vertex set.
    pub fn diameter(&self) -> f64 {
        let v = self.vertices();
        let mut best = S::zero();
        for a in v {
            for b in v {
                let d = norm_sq(&sub(a, b));
                if d > best {
                    best = d;
                }
            }
        }
        sqrt_of(&best)
    }
}

/// `V_I(O) = Σ_F h_I(N^F)/|N^F| · meas(F)` over the facets of `O`.
pub fn quermass<S: Scalar>(i: &Polytope<S>, o: &Polytope<S>) -> Result<f64> {
    if !o.is_full_dimensional() {
        return Err(Error::invalid("quermass integral needs a full-dimensional body"));
    }
    if i.is_empty() || i.dim() != o.dim() {
        return Err(Error::invalid("structuring element must be nonempty and of equal dimension"));
    }
    Ok(o.facets()
        .iter()
        .map(|f| {
            let h = i.support(&f.normal).expect("nonempty").to_f64_lossy();
            h / sqrt_of(&norm_sq(&f.normal)) * o.facet_measure(f)
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn r(x: i64) -> Rational {
        Rational::from_integer(x as i128)
    }

    fn poly(pts: &[(i64, i64)]) -> Polytope<Rational> {
        Polytope::hull(2, &pts.iter().map(|&(x, y)| vec![r(x), r(y)]).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn square_metrics() {
        let sq = Polytope::cube(2, r(-1), r(1)).unwrap();
        assert_eq!(sq.volume(), r(4));
        assert!((sq.boundary_measure() - 8.0).abs() < 1e-12);
        let atoms = sq.area_measure_atoms();
        assert_eq!(atoms.atoms.len(), 4);
        assert!(atoms.atoms.iter().all(|(_, m)| (*m - 2.0).abs() < 1e-12));
    }

    #[test]
    fn triangle_metrics() {
        let t = poly(&[(0, 0), (2, 0), (0, 2)]);
        assert_eq!(t.volume(), r(2));
        assert!((t.boundary_measure() - (4.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12);
        assert!((t.min_vertex_angle().unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn segment_perimeter_is_two() {
        let s = Polytope::hull(1, &[vec![r(0)], vec![r(5)]]).unwrap();
        assert_eq!(s.volume(), r(5));
        assert_eq!(s.boundary_measure(), 2.0);
        let point = Polytope::hull(1, &[vec![r(3)]]).unwrap();
        assert_eq!(point.boundary_measure(), 2.0);
    }

    #[test]
    fn cube_metrics() {
        let c = Polytope::cube(3, r(0), r(2)).unwrap();
        assert_eq!(c.volume(), r(8));
        assert!((c.boundary_measure() - 24.0).abs() < 1e-12);
        let simplex = Polytope::hull(3, &[vec![r(0), r(0), r(0)], vec![r(1), r(0), r(0)], vec![r(0), r(1), r(0)], vec![r(0), r(0), r(1)]]).unwrap();
        assert_eq!(simplex.volume(), Rational::new(1, 6));
    }

    #[test]
    fn quermass_examples() {
        let o = Polytope::cube(2, r(-1), r(1)).unwrap();
        let unit = Polytope::cube(2, r(0), r(1)).unwrap();
        assert!((quermass(&unit, &o).unwrap() - 4.0).abs() < 1e-12);
        let tri = poly(&[(0, 0), (1, 0), (0, 1)]);
        assert!((quermass(&tri, &o).unwrap() - 4.0).abs() < 1e-12);
        let origin = poly(&[(0, 0)]);
        assert_eq!(quermass(&origin, &o).unwrap(), 0.0);
    }
}
