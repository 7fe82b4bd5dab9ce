//! Experiment drivers. Each returns tables plus verdict lines; nothing here
//! touches the filesystem.

use lattice_ca::ca::{is_permutative, LocalRule};
use lattice_ca::entropy::{ln_big, rate_bounds, ItineraryCount};
use lattice_ca::geometry::random::random_unit_perimeter_polygon;
use lattice_ca::geometry::{
    classify_bounding_sphere, dual_polytope, morphological_boundary_counts, quermass, slab_dual,
    smallest_bounding_sphere, BoundingSphere, IsometryChoice, SphereClass,
};
use lattice_ca::lyapunov::ruelle_report;
use lattice_ca::{Error, LatticeVector, Rational, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::domain::{unit_square, unit_triangle};
use crate::emit::{fmt_float, Table, Value};
use crate::suites::run_property_suites;

/// Tolerance for geometric identities.
pub const GEOMETRY_TOL: f64 = 1e-9;
/// Relative tolerance for asymptotic rates at the largest configured scale.
pub const RATE_TOL: f64 = 0.02;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ExperimentKind {
    Sandwich,
    Counting,
    Supremum,
    Ruelle,
    Properties,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub n_list: Vec<i64>,
    pub radii: Vec<f64>,
    pub k_max: usize,
    pub samples: u64,
    pub seed: u64,
    pub cases: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n_list: vec![1, 2, 5, 10, 20, 50, 100],
            radii: vec![1.0, 2.0, 5.0, 10.0, 20.0, 50.0],
            k_max: 2,
            samples: 8,
            seed: 0,
            cases: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "verdict {tag} {}: {}", self.name, self.detail)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub tables: Vec<(String, Table)>,
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    fn verdict(&mut self, name: &str, passed: bool, detail: String) {
        self.verdicts.push(Verdict {
            name: name.to_string(),
            passed,
            detail,
        });
    }
}

pub fn run_experiment(rule: &LocalRule, cfg: &ExperimentConfig, kind: ExperimentKind) -> Result<Report> {
    match kind {
        ExperimentKind::Sandwich => sandwich(rule, cfg),
        ExperimentKind::Counting => counting(rule, cfg),
        ExperimentKind::Supremum => supremum(rule, cfg),
        ExperimentKind::Ruelle => ruelle(rule, cfg),
        ExperimentKind::Properties => properties(cfg),
    }
}

/// Smallest bounding sphere of `I′ = I ∪ {0}`.
pub fn rule_sphere(rule: &LocalRule) -> Result<BoundingSphere<Rational>> {
    let mut pts: Vec<Vec<Rational>> = rule.domain().iter().map(|v| v.to_point()).collect();
    pts.push(LatticeVector::zero(rule.dim()).to_point());
    smallest_bounding_sphere(&pts)
}

fn rel_err(x: f64, target: f64) -> f64 {
    if target == 0.0 {
        x.abs()
    } else {
        (x - target).abs() / target.abs()
    }
}

pub fn class_label<S>(c: &SphereClass<S>) -> &'static str {
    match c {
        SphereClass::Point => "point",
        SphereClass::Nondegenerate { .. } => "nondegenerate",
        SphereClass::Degenerate { .. } => "degenerate",
    }
}

/// Rescaled-entropy sandwich against `R_{I′}·log q` on squares, on scaled dual
/// polytopes (nondegenerate sphere) or on slab duals (degenerate sphere).
fn sandwich(rule: &LocalRule, cfg: &ExperimentConfig) -> Result<Report> {
    let ln_q = (rule.alphabet() as f64).ln();
    let sphere = rule_sphere(rule)?;
    let class = classify_bounding_sphere(&sphere)?;
    let target = sphere.radius() * ln_q;
    let mut report = Report::default();

    let mut info = Table::new(&["radius", "radius_sq", "class", "depth", "permutative", "target"]);
    info.push(vec![
        sphere.radius().into(),
        Value::Text(sphere.radius_sq.to_string()),
        class_label(&class).into(),
        class.depth().into(),
        is_permutative(rule).permutative.into(),
        target.into(),
    ]);
    report.tables.push(("sphere".into(), info));

    let mut t = Table::new(&["family", "param", "p_J", "lower_rate", "upper_rate", "target"]);
    let mut rows: Vec<(&str, f64, Option<f64>, f64)> = Vec::new();
    let d = rule.dim();
    for &n in &cfg.n_list {
        let j = unit_square(d).scale(&Rational::from_integer(n as i128));
        let (lo, up) = rate_bounds(rule, &j)?;
        rows.push(("square", n as f64, lo, up));
        t.push(vec!["square".into(), n.into(), j.boundary_measure().into(), lo.into(), up.into(), target.into()]);
    }
    match &class {
        SphereClass::Nondegenerate { generating } => {
            let dual = dual_polytope(generating, &sphere)?;
            let shift: Vec<Rational> = sphere.center.iter().map(|c| -*c).collect();
            let dual = dual.translate(&shift);
            let mut dual_rows = Vec::new();
            for &n in &cfg.n_list {
                let j = dual.scale(&Rational::from_integer(n as i128));
                let (lo, up) = rate_bounds(rule, &j)?;
                dual_rows.push((n, lo, up));
                t.push(vec!["dual".into(), n.into(), j.boundary_measure().into(), lo.into(), up.into(), target.into()]);
            }
            let upper_ok = dual_rows.iter().all(|r| rel_err(r.2, target) <= GEOMETRY_TOL);
            report.verdict(
                "dual upper rate equals R·log q",
                upper_ok,
                format!("max relative error {}", fmt_float(dual_rows.iter().map(|r| rel_err(r.2, target)).fold(0.0, f64::max))),
            );
            let last = dual_rows.last().ok_or_else(|| Error::invalid("empty scale list"))?;
            match last.1 {
                Some(lo) => {
                    let exact = dual_rows.iter().all(|r| r.1.is_some_and(|lo| rel_err(lo, target) <= GEOMETRY_TOL));
                    report.verdict(
                        "dual lower rate reaches R·log q",
                        rel_err(lo, target) <= RATE_TOL,
                        format!(
                            "lower {} vs target {} at n = {}; exact at every n: {exact}",
                            fmt_float(lo),
                            fmt_float(target),
                            last.0
                        ),
                    );
                }
                None => report.verdict(
                    "dual lower rate reaches R·log q",
                    true,
                    "not applicable (rule not permutative or dual not integral)".into(),
                ),
            }
        }
        SphereClass::Degenerate { .. } => {
            let hull = rule.hull().to_f64();
            let mut slab = Vec::new();
            for &r in &cfg.radii {
                let s = slab_dual(&sphere, &class, r, IsometryChoice::Standard)?;
                let p = s.polytope.boundary_measure();
                let up = quermass(&hull, &s.polytope)? / p * ln_q;
                slab.push(up);
                t.push(vec!["slabdual".into(), r.into(), p.into(), Value::Null, up.into(), target.into()]);
            }
            let increasing = slab.windows(2).all(|w| w[1] >= w[0] - GEOMETRY_TOL);
            let last = *slab.last().ok_or_else(|| Error::invalid("empty radius list"))?;
            report.verdict(
                "slab-dual rates increase toward R·log q",
                increasing && rel_err(last, target) <= RATE_TOL,
                format!(
                    "rate {} vs target {} at R = {}; increasing: {increasing}",
                    fmt_float(last),
                    fmt_float(target),
                    cfg.radii.last().copied().unwrap_or_default()
                ),
            );
        }
        SphereClass::Point => {}
    }
    let below = rows.iter().all(|r| r.3 <= target + GEOMETRY_TOL);
    report.verdict("square upper rates stay below R·log q", below, format!("target {}", fmt_float(target)));
    report.tables.push(("sandwich".into(), t));
    Ok(report)
}

/// `#∂±_𝕀(nO)/p(nO)` against `V_𝕀(O)/p(O)` on squares and the unit triangle.
fn counting(rule: &LocalRule, cfg: &ExperimentConfig) -> Result<Report> {
    if rule.dim() != 2 {
        return Err(Error::UnsupportedDimension(rule.dim()));
    }
    let hull = rule.hull();
    let mut report = Report::default();
    let mut t = Table::new(&["shape", "n", "inner", "outer", "p_J", "inner_rate", "outer_rate", "limit", "inner_error"]);
    for (label, shape) in [("square", unit_square(2)), ("triangle", unit_triangle())] {
        let limit = quermass(&hull, &shape)? / shape.boundary_measure();
        let mut errors = Vec::new();
        for &n in &cfg.n_list {
            let j = shape.scale(&Rational::from_integer(n as i128));
            let c = morphological_boundary_counts(&j, &hull, false)?;
            let p = j.boundary_measure();
            let inner_rate = c.inner as f64 / p;
            let err = rel_err(inner_rate, limit);
            errors.push(err);
            t.push(vec![
                label.into(),
                n.into(),
                c.inner.into(),
                c.outer.into(),
                p.into(),
                inner_rate.into(),
                (c.outer as f64 / p).into(),
                limit.into(),
                err.into(),
            ]);
        }
        let last = *errors.last().ok_or_else(|| Error::invalid("empty scale list"))?;
        let monotone = errors.windows(2).all(|w| w[1] <= w[0] + GEOMETRY_TOL);
        report.verdict(
            &format!("{label} boundary rate converges"),
            last <= RATE_TOL && monotone,
            format!("relative error {} at largest n; nonincreasing: {monotone}", fmt_float(last)),
        );
    }
    report.tables.push(("counting".into(), t));
    Ok(report)
}

/// `V_I(O) ≤ R_I` over random unit-perimeter polygons, and the extremal value
/// on dual polytopes.
fn supremum(rule: &LocalRule, cfg: &ExperimentConfig) -> Result<Report> {
    if rule.dim() != 2 {
        return Err(Error::UnsupportedDimension(rule.dim()));
    }
    let sphere = rule_sphere(rule)?;
    let class = classify_bounding_sphere(&sphere)?;
    let r = sphere.radius();
    let hull = rule.hull().to_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best = f64::NEG_INFINITY;
    for _ in 0..cfg.cases {
        let o = random_unit_perimeter_polygon(&mut rng);
        best = best.max(quermass(&hull, &o)? / o.boundary_measure());
    }
    let mut report = Report::default();
    report.verdict(
        "random polygons stay below R",
        best <= r + GEOMETRY_TOL,
        format!("max {} over {} polygons, R = {}", fmt_float(best), cfg.cases, fmt_float(r)),
    );
    let extremal = match &class {
        SphereClass::Nondegenerate { generating } => {
            let dual = dual_polytope(generating, &sphere)?.to_f64();
            let v = quermass(&hull, &dual)? / dual.boundary_measure();
            report.verdict(
                "dual polytope attains R",
                v >= r - 1e-6,
                format!("normalized value {}", fmt_float(v)),
            );
            v
        }
        SphereClass::Degenerate { .. } => {
            let values: Vec<f64> = cfg
                .radii
                .iter()
                .map(|&w| {
                    let s = slab_dual(&sphere, &class, w, IsometryChoice::Standard)?;
                    Ok(quermass(&hull, &s.polytope)? / s.polytope.boundary_measure())
                })
                .collect::<Result<_>>()?;
            let increasing = values.windows(2).all(|w| w[1] >= w[0] - GEOMETRY_TOL);
            let last = values.last().copied().unwrap_or(f64::NAN);
            report.verdict(
                "slab duals increase toward R",
                increasing && last <= r + GEOMETRY_TOL,
                format!("value {} at the widest slab", fmt_float(last)),
            );
            last
        }
        SphereClass::Point => 0.0,
    };
    let mut t = Table::new(&["cases", "max_random", "extremal", "radius"]);
    t.push(vec![cfg.cases.into(), best.into(), extremal.into(), r.into()]);
    report.tables.push(("supremum".into(), t));
    Ok(report)
}

/// Lyapunov table and the Ruelle check on squares.
fn ruelle(rule: &LocalRule, cfg: &ExperimentConfig) -> Result<Report> {
    let shape = unit_square(rule.dim());
    let mut ly = Table::new(&["k", "n", "p_J", "mean_gr", "normalized", "chi_hat", "bound", "satisfied"]);
    let mut ru = Table::new(&["n", "p_J", "ln_N_k", "exact", "h_rate", "bound", "satisfied"]);
    let mut report = Report::default();
    for &n in &cfg.n_list {
        let r = ruelle_report(rule, &shape, n, cfg.k_max, cfg.samples, cfg.seed)?;
        let e = &r.estimate;
        for row in &e.rows {
            ly.push(vec![
                row.k.into(),
                n.into(),
                e.p_j.into(),
                row.mean_gr.into(),
                row.normalized.into(),
                e.chi_hat.into(),
                r.bound.into(),
                r.satisfied.into(),
            ]);
        }
        let (count, exact) = match &r.count {
            ItineraryCount::Exact(c) => (Value::from(ln_big(c)), true),
            ItineraryCount::Sampled(c) => (Value::from((*c as f64).ln()), false),
            ItineraryCount::Skipped => (Value::Null, false),
        };
        ru.push(vec![n.into(), e.p_j.into(), count, exact.into(), r.h_rate.into(), r.bound.into(), r.satisfied.into()]);
        report.verdict(
            &format!("ruelle inequality at n = {n}"),
            r.satisfied && e.subadditivity_violations == 0,
            format!(
                "h_rate {} ≤ bound {} (+5%); subadditivity violations {}",
                fmt_float(r.h_rate),
                fmt_float(r.bound),
                e.subadditivity_violations
            ),
        );
    }
    report.tables.push(("lyapunov".into(), ly));
    report.tables.push(("ruelle".into(), ru));
    Ok(report)
}

fn properties(cfg: &ExperimentConfig) -> Result<Report> {
    let mut t = Table::new(&["suite", "cases", "violations", "first_failure"]);
    let mut report = Report::default();
    let outcomes = run_property_suites(cfg.seed, cfg.cases)?;
    let total: usize = outcomes.iter().map(|o| o.violations).sum();
    for o in &outcomes {
        t.push(vec![o.name.into(), o.cases.into(), o.violations.into(), o.first_failure.clone().into()]);
    }
    report.verdict(
        "property suites",
        total == 0,
        format!("{total} violations over {} suites", outcomes.len()),
    );
    report.tables.push(("properties".into(), t));
    Ok(report)
}
