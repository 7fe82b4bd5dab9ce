//! Line-oriented rule files.
//!
//! ```text
//! dim = 2
//! alphabet = 2
//! type = algebraic        # or: table
//! prime = 2
//! cell (1,0) = 1
//! ```
//!
//! Table rules list `domain = (0,0),(1,0)` and one `map 01 -> 1` row per
//! window, symbols in domain order.

use std::collections::BTreeMap;
use std::fmt::Write;

use lattice_ca::ca::{is_prime, LocalRule, RuleBody};
use lattice_ca::geometry::polytope::parse_point_list;
use lattice_ca::{Error, LatticeVector, Rational, Result};

const BUILTIN: &[(&str, &str)] = &[
    ("xor2d", include_str!("../rules/xor2d.rule")),
    ("cross", include_str!("../rules/cross.rule")),
    ("ledrappier", include_str!("../rules/ledrappier.rule")),
    ("and2d", include_str!("../rules/and2d.rule")),
    ("shift1d", include_str!("../rules/shift1d.rule")),
];

pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    BUILTIN.iter().map(|b| b.0)
}

/// `builtin:<name>` or a path to a rule file.
pub fn load_rule(spec: &str) -> Result<LocalRule> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        let text = BUILTIN
            .iter()
            .find(|b| b.0 == name)
            .ok_or_else(|| Error::invalid(format!("no builtin rule named {name}")))?
            .1;
        return parse_rule_file(text);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Error::invalid(format!("{spec}: {e}")))?;
    parse_rule_file(&text)
}

fn at(line: usize, col: usize, msg: impl std::fmt::Display) -> Error {
    Error::invalid(format!("line {line}, column {col}: {msg}"))
}

/// Parses `(1,0),(0,-1)`.
pub fn parse_lattice_list(text: &str) -> std::result::Result<Vec<LatticeVector>, String> {
    let pts = parse_point_list::<Rational>(text).map_err(|e| e.to_string())?;
    pts.iter()
        .map(|p| {
            let coords: Option<Vec<i64>> = p.iter().map(|x| x.is_integer().then(|| x.to_integer() as i64)).collect();
            let coords = coords.ok_or_else(|| format!("non-integer coordinate in {text:?}"))?;
            LatticeVector::try_new(&coords).map_err(|e| e.to_string())
        })
        .collect()
}

fn parse_symbols(text: &str, q: u32) -> std::result::Result<Vec<u8>, String> {
    let parse = |s: &str| match s.parse::<u32>() {
        Ok(v) if v < q => Ok(v as u8),
        _ => Err(format!("symbol {s:?} outside 0..{q}")),
    };
    if text.contains(char::is_whitespace) {
        text.split_whitespace().map(parse).collect()
    } else {
        text.chars().map(|c| parse(&c.to_string())).collect()
    }
}

#[derive(Default)]
struct Raw {
    dim: Option<usize>,
    alphabet: Option<u32>,
    kind: Option<(String, usize)>,
    prime: Option<u32>,
    cells: Vec<(LatticeVector, i64, usize)>,
    domain: Option<Vec<LatticeVector>>,
    rows: Vec<(String, String, usize, usize)>,
}

/// Parses and validates a rule file. Errors carry line and column.
pub fn parse_rule_file(text: &str) -> Result<LocalRule> {
    let mut raw = Raw::default();
    for (n, full) in text.lines().enumerate() {
        let line_no = n + 1;
        let body = full.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col = body.find(trimmed).unwrap_or(0) + 1;
        if let Some(row) = trimmed.strip_prefix("map ") {
            let (lhs, rhs) = row.split_once("->").ok_or_else(|| at(line_no, col, "expected 'map <symbols> -> <symbol>'"))?;
            raw.rows.push((lhs.trim().to_string(), rhs.trim().to_string(), line_no, col));
            continue;
        }
        let (key, value) = trimmed
            .split_once('=')
            .ok_or_else(|| at(line_no, col, "expected 'key = value'"))?;
        let (key, value) = (key.trim(), value.trim());
        let vcol = body.find('=').unwrap_or(0) + 2;
        let number = |v: &str| v.parse::<u32>().map_err(|_| at(line_no, vcol, format!("expected an integer, got {v:?}")));
        match key {
            "dim" => raw.dim = Some(number(value)? as usize),
            "alphabet" => raw.alphabet = Some(number(value)?),
            "prime" => {
                let p = number(value)?;
                if !is_prime(p as u64) {
                    return Err(at(line_no, vcol, format!("{p} is not prime")));
                }
                raw.prime = Some(p);
            }
            "type" => match value {
                "algebraic" | "table" => raw.kind = Some((value.to_string(), line_no)),
                _ => return Err(at(line_no, vcol, format!("unknown rule type {value:?}"))),
            },
            "domain" => raw.domain = Some(parse_lattice_list(value).map_err(|e| at(line_no, vcol, e))?),
            k if k.starts_with("cell") => {
                let pts = parse_lattice_list(&k[4..]).map_err(|e| at(line_no, col + 4, e))?;
                let [v] = pts[..] else {
                    return Err(at(line_no, col, "a cell line names exactly one position"));
                };
                let a = value
                    .parse::<i64>()
                    .map_err(|_| at(line_no, vcol, format!("bad coefficient {value:?}")))?;
                raw.cells.push((v, a, line_no));
            }
            _ => return Err(at(line_no, col, format!("unknown key {key:?}"))),
        }
    }
    build(raw)
}

fn build(raw: Raw) -> Result<LocalRule> {
    let dim = raw.dim.ok_or_else(|| Error::invalid("missing 'dim'"))?;
    let (kind, kind_line) = raw.kind.ok_or_else(|| Error::invalid("missing 'type'"))?;
    if kind == "algebraic" {
        let p = raw.prime.ok_or_else(|| Error::invalid("algebraic rule needs 'prime'"))?;
        if raw.alphabet.is_some_and(|q| q != p) {
            return Err(at(kind_line, 1, "alphabet of an algebraic rule must equal its prime"));
        }
        if !raw.rows.is_empty() || raw.domain.is_some() {
            return Err(at(kind_line, 1, "algebraic rules take 'cell' lines, not a table"));
        }
        let mut cells = Vec::new();
        for (v, a, line) in raw.cells {
            if v.dim() != dim {
                return Err(at(line, 1, format!("cell {v} is not in dimension {dim}")));
            }
            if a.rem_euclid(p as i64) == 0 {
                return Err(at(line, 1, format!("coefficient of {v} vanishes mod {p}")));
            }
            cells.push((v, a));
        }
        return LocalRule::algebraic(dim, p, &cells);
    }
    let q = raw.alphabet.ok_or_else(|| Error::invalid("table rule needs 'alphabet'"))?;
    if !raw.cells.is_empty() {
        return Err(at(kind_line, 1, "table rules take 'map' rows, not 'cell' lines"));
    }
    let domain = raw.domain.ok_or_else(|| Error::invalid("table rule needs 'domain'"))?;
    let size = (q as usize)
        .checked_pow(domain.len() as u32)
        .filter(|&s| s as u64 <= lattice_ca::ca::TABLE_CAP)
        .ok_or_else(|| Error::limit("rule table", lattice_ca::ca::TABLE_CAP as u128))?;
    let mut table: BTreeMap<usize, u8> = BTreeMap::new();
    for (lhs, rhs, line, col) in raw.rows {
        let window = parse_symbols(&lhs, q).map_err(|e| at(line, col + 4, e))?;
        if window.len() != domain.len() {
            return Err(at(line, col + 4, format!("expected {} symbols", domain.len())));
        }
        let out = parse_symbols(&rhs, q).map_err(|e| at(line, col, e))?;
        let [out] = out[..] else {
            return Err(at(line, col, "a row maps to exactly one symbol"));
        };
        let idx = window.iter().fold(0usize, |acc, &s| acc * q as usize + s as usize);
        if table.insert(idx, out).is_some() {
            return Err(at(line, col, "duplicate row"));
        }
    }
    if table.len() != size {
        return Err(Error::invalid(format!("table has {} of {size} rows", table.len())));
    }
    LocalRule::table(dim, q, domain, table.into_values().collect())
}

/// Renders a rule in the file format; `parse_rule_file` reads it back.
pub fn format_rule(rule: &LocalRule) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "dim = {}", rule.dim());
    let _ = writeln!(s, "alphabet = {}", rule.alphabet());
    match rule.body() {
        RuleBody::Algebraic { prime, coefficients } => {
            let _ = writeln!(s, "type = algebraic\nprime = {prime}");
            for (v, a) in rule.domain().iter().zip(coefficients) {
                let _ = writeln!(s, "cell {v} = {a}");
            }
        }
        RuleBody::Table(table) => {
            let dom: Vec<String> = rule.domain().iter().map(|v| v.to_string()).collect();
            let _ = writeln!(s, "type = table\ndomain = {}", dom.join(","));
            let q = rule.alphabet() as usize;
            let m = rule.domain().len();
            for (idx, out) in table.iter().enumerate() {
                let mut syms = vec![0usize; m];
                let mut r = idx;
                for t in (0..m).rev() {
                    syms[t] = r % q;
                    r /= q;
                }
                let sep = if q > 10 { " " } else { "" };
                let row: Vec<String> = syms.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(s, "map {} -> {out}", row.join(sep));
            }
        }
    }
    s
}
