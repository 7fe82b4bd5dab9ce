//! Command-line front end: rule files, domain specs, table output and the
//! experiment drivers behind `lattice-ca verify`.

pub mod domain;
pub mod emit;
pub mod experiments;
pub mod rulefile;
pub mod suites;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use lattice_ca::ca::{is_permutative, LocalRule};
use lattice_ca::entropy::{perp_boundary, rescaled_entropy_table, CountMode, ItineraryCount};
use lattice_ca::geometry::{
    classify_bounding_sphere, morphological_boundary_counts, quermass, slab_dual, IsometryChoice,
};
use lattice_ca::lyapunov::chi_estimate;
use lattice_ca::{Error, Rational};
use serde_json::json;

use domain::{parse_domain, DomainSpec};
use emit::{Format, Table, Value};
use experiments::{rule_sphere, run_experiment, ExperimentConfig, ExperimentKind, Report};

const LONG_ABOUT: &str = "\
Convex lattice geometry and entropy experiments for multidimensional cellular automata.

Tolerances: geometric identities are checked to 1e-9; asymptotic rates must be
within 2% of their limit at the largest configured scale; the Ruelle check allows
5% relative slack.

Exit codes: 0 success, 1 invalid input or a failed verdict, 2 resource limit exceeded.";

#[derive(Parser, Debug)]
#[command(name = "lattice-ca", version, about = "Lattice geometry and cellular automaton entropy", long_about = LONG_ABOUT)]
pub struct Cli {
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Output file. With several tables, `stem.<table>.ext` is written per table.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Morphological boundary counts and quermass data for a domain family.
    Geom {
        /// square:n, cross:n, poly:(x,y),... or slabdual:R (comma lists allowed).
        #[arg(long)]
        domain: String,
        /// Rule whose domain is the structuring element.
        #[arg(long, default_value = "builtin:xor2d")]
        rule: String,
    },
    /// Inspect a rule file.
    Rule {
        #[command(subcommand)]
        action: RuleAction,
    },
    /// Itinerary counts and rescaled entropy bounds.
    Entropy {
        #[arg(long)]
        rule: String,
        #[arg(long)]
        domain: String,
        #[arg(long, default_value_t = 2)]
        kmax: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        #[arg(long, default_value_t = 20_000)]
        samples: u64,
    },
    /// Averaged growth of the determined region.
    Lyapunov {
        #[arg(long)]
        rule: String,
        #[arg(long)]
        domain: String,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
        #[arg(long, default_value_t = 16)]
        samples: u64,
    },
    /// Run an experiment and print pass/fail verdicts.
    Verify(VerifyArgs),
}

#[derive(Subcommand, Debug)]
pub enum RuleAction {
    /// Validate and summarize.
    Check { rule: String },
    /// Print the normalized rule file.
    Show { rule: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ModeArg {
    Exact,
    Sampled,
    Auto,
    Linear,
    Skip,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub kind: ExperimentKind,
    #[arg(long, default_value = "builtin:xor2d")]
    pub rule: String,
    /// Scales `n` (comma list).
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<i64>>,
    /// Slab half-widths for degenerate spheres (comma list).
    #[arg(long, value_delimiter = ',')]
    pub radii: Option<Vec<f64>>,
    #[arg(long, default_value_t = 2)]
    pub kmax: usize,
    #[arg(long, default_value_t = 8)]
    pub samples: u64,
    /// Random cases for property suites and polygon sampling.
    #[arg(long)]
    pub cases: Option<usize>,
}

fn domain_scales(spec: &DomainSpec) -> lattice_ca::Result<Vec<i64>> {
    match spec {
        DomainSpec::Square(n) | DomainSpec::Cross(n) => Ok(n.clone()),
        DomainSpec::Poly(_) => Ok(vec![1]),
        DomainSpec::SlabDual(_) => Err(Error::invalid("expected a lattice domain")),
    }
}

fn geom_tables(rule: &LocalRule, spec: &DomainSpec) -> lattice_ca::Result<Vec<(String, Table)>> {
    let hull = rule.hull();
    let ln_q = (rule.alphabet() as f64).ln();
    if let DomainSpec::SlabDual(radii) = spec {
        let sphere = rule_sphere(rule)?;
        let class = classify_bounding_sphere(&sphere)?;
        let mut t = Table::new(&["R", "p_J", "quermass", "rate", "target"]);
        for &r in radii {
            let s = slab_dual(&sphere, &class, r, IsometryChoice::Standard)?;
            let p = s.polytope.boundary_measure();
            let v = quermass(&hull.to_f64(), &s.polytope)?;
            t.push(vec![r.into(), p.into(), v.into(), (v / p * ln_q).into(), (sphere.radius() * ln_q).into()]);
        }
        return Ok(vec![("geom".into(), t)]);
    }
    let ex = spec.exhaustion(rule.dim())?;
    let permutative = is_permutative(rule).permutative;
    let mut t = Table::new(&["n", "vertices", "lattice_points", "p_J", "inner", "outer", "perp", "quermass"]);
    for n in domain_scales(spec)? {
        let j = ex.shape.scale(&Rational::from_integer(n as i128));
        let c = morphological_boundary_counts(&j, &hull, false)?;
        let perp = if permutative && j.is_integral() {
            Value::from(perp_boundary(&j, rule.domain())?.len())
        } else {
            Value::Null
        };
        t.push(vec![
            n.into(),
            j.vertices().len().into(),
            j.lattice_count()?.into(),
            j.boundary_measure().into(),
            c.inner.into(),
            c.outer.into(),
            perp,
            quermass(&hull, &j)?.into(),
        ]);
    }
    Ok(vec![("geom".into(), t)])
}

fn entropy_table(
    rule: &LocalRule,
    spec: &DomainSpec,
    kmax: usize,
    mode: CountMode,
) -> lattice_ca::Result<Table> {
    let ex = spec.exhaustion(rule.dim())?;
    let table = rescaled_entropy_table(rule, &ex, kmax, mode)?;
    let mut t = Table::new(&["n", "p_J", "k", "N_k", "exact", "slope", "lower_rate", "upper_rate"]);
    for r in table.rows {
        let count = match &r.count {
            ItineraryCount::Exact(c) => Value::Big(c.to_string()),
            ItineraryCount::Sampled(c) => Value::from(*c),
            ItineraryCount::Skipped => Value::Null,
        };
        t.push(vec![
            r.n.into(),
            r.p_j.into(),
            r.k.into(),
            count,
            r.count.is_exact().into(),
            r.slope.into(),
            r.lower_rate.into(),
            r.upper_rate.into(),
        ]);
    }
    Ok(t)
}

fn lyapunov_table(rule: &LocalRule, spec: &DomainSpec, kmax: usize, samples: u64, seed: u64) -> lattice_ca::Result<Table> {
    let ex = spec.exhaustion(rule.dim())?;
    let mut t = Table::new(&["k", "n", "p_J", "mean_gr", "normalized", "spread", "chi_hat", "subadditivity_violations"]);
    for n in domain_scales(spec)? {
        let e = chi_estimate(rule, &ex.shape, n, kmax, samples, seed)?;
        for row in &e.rows {
            t.push(vec![
                row.k.into(),
                n.into(),
                e.p_j.into(),
                row.mean_gr.into(),
                row.normalized.into(),
                row.spread.into(),
                e.chi_hat.into(),
                e.subadditivity_violations.into(),
            ]);
        }
    }
    Ok(t)
}

fn rule_summary(rule: &LocalRule) -> lattice_ca::Result<Table> {
    let report = is_permutative(rule);
    let sphere = rule_sphere(rule)?;
    let class = classify_bounding_sphere(&sphere)?;
    let mut t = Table::new(&["dim", "alphabet", "kind", "domain_size", "hull_vertices", "permutative", "radius", "sphere"]);
    t.push(vec![
        rule.dim().into(),
        (rule.alphabet() as u64).into(),
        (if rule.is_algebraic() { "algebraic" } else { "table" }).into(),
        rule.domain().len().into(),
        rule.hull().vertices().len().into(),
        report.permutative.into(),
        sphere.radius().into(),
        experiments::class_label(&class).into(),
    ]);
    Ok(t)
}

fn table_path(out: &Path, name: &str, many: bool) -> PathBuf {
    if !many {
        return out.to_path_buf();
    }
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let file = match out.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}.{name}.{ext}"),
        None => format!("{stem}.{name}"),
    };
    out.with_file_name(file)
}

fn write_tables(cli: &Cli, tables: &[(String, Table)], config: serde_json::Value, started: Instant) -> std::io::Result<()> {
    let many = tables.len() > 1;
    match &cli.out {
        None => {
            let mut stdout = std::io::stdout().lock();
            for (i, (name, t)) in tables.iter().enumerate() {
                if many {
                    if i > 0 {
                        writeln!(stdout)?;
                    }
                    writeln!(stdout, "# {name}")?;
                }
                t.write(&mut stdout, cli.format)?;
            }
            Ok(())
        }
        Some(out) => {
            let manifest_path = PathBuf::from(format!("{}.manifest.jsonl", out.display()));
            let mut manifest = std::fs::File::create(manifest_path)?;
            for (name, t) in tables {
                let path = table_path(out, name, many);
                emit::emit_table(t, cli.format, Some(&path))?;
                let line = json!({
                    "table": name,
                    "path": path.display().to_string(),
                    "rows": t.rows.len(),
                    "version": env!("CARGO_PKG_VERSION"),
                    "seed": cli.seed,
                    "threads": cli.threads,
                    "config": config,
                    "wall_clock_s": started.elapsed().as_secs_f64(),
                });
                writeln!(manifest, "{line}")?;
            }
            Ok(())
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_resource_limit() {
        2
    } else {
        1
    }
}

fn count_mode(mode: ModeArg, samples: u64, seed: u64) -> CountMode {
    match mode {
        ModeArg::Exact => CountMode::Exact,
        ModeArg::Sampled => CountMode::Sampled { samples, seed },
        ModeArg::Auto => CountMode::Auto { samples, seed },
        ModeArg::Linear => CountMode::Linear,
        ModeArg::Skip => CountMode::Skip,
    }
}

fn verify_config(args: &VerifyArgs, seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig {
        seed,
        k_max: args.kmax,
        samples: args.samples,
        ..ExperimentConfig::default()
    };
    match args.kind {
        ExperimentKind::Counting => cfg.n_list = vec![50, 100, 200, 300],
        ExperimentKind::Ruelle => cfg.n_list = vec![40],
        ExperimentKind::Supremum => cfg.cases = 500,
        _ => {}
    }
    if let Some(n) = &args.n {
        cfg.n_list = n.clone();
    }
    if let Some(r) = &args.radii {
        cfg.radii = r.clone();
    }
    if let Some(c) = args.cases {
        cfg.cases = c;
    }
    cfg
}

/// Named tables, the config echoed into the manifest, and verdicts if any.
type RunOutput = (Vec<(String, Table)>, serde_json::Value, Option<Report>);

fn run(cli: &Cli) -> lattice_ca::Result<RunOutput> {
    Ok(match &cli.command {
        Command::Geom { domain, rule } => {
            let r = rulefile::load_rule(rule)?;
            let spec = parse_domain(domain)?;
            (geom_tables(&r, &spec)?, json!({"command": "geom", "domain": domain, "rule": rule}), None)
        }
        Command::Rule { action } => match action {
            RuleAction::Check { rule } => {
                let r = rulefile::load_rule(rule)?;
                (vec![("rule".into(), rule_summary(&r)?)], json!({"command": "rule check", "rule": rule}), None)
            }
            RuleAction::Show { rule } => {
                let r = rulefile::load_rule(rule)?;
                print!("{}", rulefile::format_rule(&r));
                (Vec::new(), json!({}), None)
            }
        },
        Command::Entropy { rule, domain, kmax, mode, samples } => {
            let r = rulefile::load_rule(rule)?;
            let spec = parse_domain(domain)?;
            let t = entropy_table(&r, &spec, *kmax, count_mode(*mode, *samples, cli.seed))?;
            let cfg = json!({"command": "entropy", "rule": rule, "domain": domain, "kmax": kmax,
                "mode": format!("{mode:?}").to_lowercase(), "samples": samples});
            (vec![("entropy".into(), t)], cfg, None)
        }
        Command::Lyapunov { rule, domain, kmax, samples } => {
            let r = rulefile::load_rule(rule)?;
            let spec = parse_domain(domain)?;
            let t = lyapunov_table(&r, &spec, *kmax, *samples, cli.seed)?;
            let cfg = json!({"command": "lyapunov", "rule": rule, "domain": domain, "kmax": kmax, "samples": samples});
            (vec![("lyapunov".into(), t)], cfg, None)
        }
        Command::Verify(args) => {
            let r = rulefile::load_rule(&args.rule)?;
            let cfg = verify_config(args, cli.seed);
            let report = run_experiment(&r, &cfg, args.kind)?;
            let meta = json!({"command": "verify", "kind": format!("{:?}", args.kind).to_lowercase(),
                "rule": args.rule, "n": cfg.n_list, "radii": cfg.radii, "kmax": cfg.k_max,
                "samples": cfg.samples, "cases": cfg.cases});
            (report.tables.clone(), meta, Some(report))
        }
    })
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if cli.threads > 0 {
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    let started = Instant::now();
    let (tables, config, report) = match run(&cli) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    if let Err(e) = write_tables(&cli, &tables, config, started) {
        eprintln!("error: {e}");
        return 1;
    }
    match report {
        Some(r) => {
            for v in &r.verdicts {
                eprintln!("{v}");
            }
            if r.passed() {
                0
            } else {
                1
            }
        }
        None => 0,
    }
}
