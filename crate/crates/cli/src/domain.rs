//! `--domain` specifications: `square:n`, `cross:n`, `poly:(x,y),...`,
//! `slabdual:R`. Scales may be comma lists (`square:1,2,4`).

use lattice_ca::entropy::ExhaustionSpec;
use lattice_ca::geometry::polytope::parse_point_list;
use lattice_ca::{Error, RatPolytope, Rational, Result};

#[derive(Clone, Debug)]
pub enum DomainSpec {
    /// `n·[−1,1]^d`
    Square(Vec<i64>),
    /// `n·cv{±e_i}`
    Cross(Vec<i64>),
    /// An explicit polytope, used at scale 1.
    Poly(RatPolytope),
    /// Slab duals of the rule's bounding sphere at half-widths `R`.
    SlabDual(Vec<f64>),
}

fn list<T: std::str::FromStr>(text: &str) -> Result<Vec<T>> {
    let v = text
        .split(',')
        .map(|s| s.trim().parse::<T>().map_err(|_| Error::invalid(format!("bad scale {s:?}"))))
        .collect::<Result<Vec<T>>>()?;
    if v.is_empty() {
        return Err(Error::invalid("empty scale list"));
    }
    Ok(v)
}

pub fn parse_domain(spec: &str) -> Result<DomainSpec> {
    let (kind, arg) = spec
        .split_once(':')
        .ok_or_else(|| Error::invalid(format!("domain {spec:?} is not of the form kind:arg")))?;
    match kind {
        "square" => Ok(DomainSpec::Square(positive(list(arg)?)?)),
        "cross" => Ok(DomainSpec::Cross(positive(list(arg)?)?)),
        "slabdual" => {
            let r: Vec<f64> = list(arg)?;
            if r.iter().any(|&x| x.is_nan() || x <= 0.0) {
                return Err(Error::invalid("slab half-widths must be positive"));
            }
            Ok(DomainSpec::SlabDual(r))
        }
        "poly" => {
            let pts = parse_point_list::<Rational>(arg)?;
            let dim = pts.first().map(|p| p.len()).ok_or_else(|| Error::invalid("empty point list"))?;
            let p = RatPolytope::hull(dim, &pts)?;
            if !p.is_full_dimensional() {
                return Err(Error::invalid("domain polytope must be full-dimensional"));
            }
            Ok(DomainSpec::Poly(p))
        }
        _ => Err(Error::invalid(format!("unknown domain kind {kind:?}"))),
    }
}

fn positive(v: Vec<i64>) -> Result<Vec<i64>> {
    if v.iter().any(|&n| n < 1) {
        return Err(Error::invalid("scales must be at least 1"));
    }
    Ok(v)
}

pub fn unit_square(dim: usize) -> RatPolytope {
    RatPolytope::cube(dim, Rational::from_integer(-1), Rational::from_integer(1)).expect("dimension checked by caller")
}

pub fn unit_cross(dim: usize) -> RatPolytope {
    let pts: Vec<Vec<Rational>> = (0..dim)
        .flat_map(|i| {
            [1, -1].map(|s| (0..dim).map(|j| Rational::from_integer(if i == j { s } else { 0 })).collect())
        })
        .collect();
    RatPolytope::hull(dim, &pts).expect("dimension checked by caller")
}

/// `cv{0, e₁, e₂}`.
pub fn unit_triangle() -> RatPolytope {
    let pts: Vec<Vec<Rational>> = [[0, 0], [1, 0], [0, 1]]
        .iter()
        .map(|c| c.iter().map(|&x| Rational::from_integer(x)).collect())
        .collect();
    RatPolytope::hull(2, &pts).expect("planar triangle")
}

impl DomainSpec {
    /// Exhaustion `nO` for the polytope kinds.
    pub fn exhaustion(&self, dim: usize) -> Result<ExhaustionSpec> {
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        Ok(match self {
            DomainSpec::Square(n) => ExhaustionSpec {
                label: "square".into(),
                shape: unit_square(dim),
                scales: n.clone(),
            },
            DomainSpec::Cross(n) => ExhaustionSpec {
                label: "cross".into(),
                shape: unit_cross(dim),
                scales: n.clone(),
            },
            DomainSpec::Poly(p) => {
                if p.dim() != dim {
                    return Err(Error::invalid("domain and rule dimensions differ"));
                }
                ExhaustionSpec {
                    label: "poly".into(),
                    shape: p.clone(),
                    scales: vec![1],
                }
            }
            DomainSpec::SlabDual(_) => {
                return Err(Error::invalid("slab duals are float polytopes; use them with 'geom' or 'verify sandwich'"))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_kinds() {
        assert!(matches!(parse_domain("square:4").unwrap(), DomainSpec::Square(v) if v == vec![4]));
        assert!(matches!(parse_domain("cross:1,2").unwrap(), DomainSpec::Cross(v) if v == vec![1, 2]));
        assert!(matches!(parse_domain("slabdual:50").unwrap(), DomainSpec::SlabDual(_)));
        let DomainSpec::Poly(p) = parse_domain("poly:(0,0),(2,0),(0,2)").unwrap() else {
            panic!("expected a polygon");
        };
        assert_eq!(p.vertices().len(), 3);
        assert!(parse_domain("square:0").is_err());
        assert!(parse_domain("disc:3").is_err());
        assert!(parse_domain("poly:(0,0),(1,1)").is_err());
    }

    #[test]
    fn cross_shape() {
        let c = unit_cross(2);
        assert_eq!(c.vertices().len(), 4);
        assert_eq!(c.lattice_count().unwrap(), 5);
    }
}
