//! Regression fixtures: a system in the input format followed by an
//! `expect ... end` block.
//!
//! ```text
//! params a001, b200, c030
//! dx = -2*y + a001*z
//! ...
//! expect
//!   origin published family 37, leading coefficients
//!   max-index 1
//!   a 1 = -3/8*a001^2
//! end
//! ```
//!
//! Directives inside the block:
//!
//! * `origin WORD text` starts a group; `WORD` is `published`, `immediate`
//!   or `computed` and every following expectation carries it.
//! * `max-index N`, `param NAME = VALUE`, `substitute NAME = EXPR` configure
//!   the run; substitutions are symbolic and apply in order.
//! * `modulo EXPR eliminate NAME` compares later expectations modulo the
//!   constraint (pseudo-remainder); `exact` switches back.
//! * `a K = P`, `b K = P`: normal form coefficients.
//! * `obstruction METHOD K = P` and `zero METHOD FROM TO`.
//! * `verdict TAG`: classification at `max-index`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::analyzers::{classify, obstructions, recombination_defect, Method, ObstructionSequence};
use crate::coeffring::rational::parse_rational;
use crate::coeffring::{ParamPolynomial, ParamTable, Rational};
use crate::error::{Error, Result};
use crate::frontend::{normalize_principal_part, parse_param_expression, parse_system, ParseError};
use crate::normalform::{orbital_normal_form, NormalFormResult};
use crate::vectorfield::VectorField3;

pub const ORIGINS: [&str; 3] = ["published", "immediate", "computed"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expectation {
    A(u32, ParamPolynomial),
    B(u32, ParamPolynomial),
    Entry(Method, u32, ParamPolynomial),
    Zero(Method, u32, u32),
    Verdict(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub expectation: Expectation,
    pub origin: String,
    pub note: String,
    /// `(constraint, eliminated variable)` for comparisons modulo an ideal.
    pub modulo: Option<(ParamPolynomial, usize)>,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenCase {
    pub name: String,
    pub params: ParamTable,
    pub field: VectorField3,
    pub max_index: u32,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub description: String,
    pub origin: String,
    pub passed: bool,
    /// Canonical strings of expected and actual values on failure.
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseOutcome {
    pub name: String,
    pub checks: Vec<CheckOutcome>,
    /// Sequences computed for the case, for further property checks.
    pub sequences: Vec<ObstructionSequence>,
    pub error: Option<String>,
}

impl CaseOutcome {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GoldenReport {
    pub cases: Vec<CaseOutcome>,
}

impl GoldenReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(CaseOutcome::passed)
    }
}

impl fmt::Display for GoldenReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for case in &self.cases {
            if let Some(e) = &case.error {
                writeln!(f, "FAIL {}: {e}", case.name)?;
                continue;
            }
            for c in &case.checks {
                let status = if c.passed { "ok  " } else { "FAIL" };
                writeln!(f, "{status} {} [{}] {}", case.name, c.origin, c.description)?;
                if !c.passed {
                    writeln!(f, "     {}", c.detail)?;
                }
            }
        }
        Ok(())
    }
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse(ParseError {
        message: message.into(),
        line,
        column: 1,
    })
}

fn method_arg(s: &str, line: usize) -> Result<Method> {
    Method::from_tag(&s.replace('-', "_")).ok_or_else(|| perr(line, format!("unknown method `{s}`")))
}

fn number<T: std::str::FromStr>(s: Option<&str>, line: usize) -> Result<T> {
    s.and_then(|s| s.parse().ok())
        .ok_or_else(|| perr(line, "expected a number"))
}

/// Splits `lhs = rhs`.
fn equation(rest: &str, line: usize) -> Result<(&str, &str)> {
    rest.split_once('=')
        .map(|(a, b)| (a.trim(), b.trim()))
        .ok_or_else(|| perr(line, "expected `=`"))
}

fn expr(text: &str, table: &ParamTable, line: usize) -> Result<ParamPolynomial> {
    parse_param_expression(text, table).map_err(|e| perr(line, e.message))
}

pub fn parse_fixture(name: &str, text: &str) -> Result<GoldenCase> {
    let lines: Vec<&str> = text.lines().collect();
    let start = lines
        .iter()
        .position(|l| l.trim() == "expect")
        .ok_or_else(|| perr(lines.len().max(1), "missing `expect` block"))?;
    let system = lines[..start].join("\n");
    let src = parse_system(&system)?;
    let table = src.params.clone();
    let mut field = src.to_field();

    let mut values: Vec<Option<Rational>> = vec![None; table.len()];
    let mut max_index = 1;
    let mut origin: Option<(String, String)> = None;
    let mut modulo = None;
    let mut checks = Vec::new();
    let mut closed = false;

    for (i, raw) in lines.iter().enumerate().skip(start + 1) {
        let line = i + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        if l == "end" {
            closed = true;
            break;
        }
        let (head, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        let rest = rest.trim();
        let mut words = rest.split_whitespace();
        let expectation = match head {
            "origin" => {
                let word = words.next().unwrap_or("");
                if !ORIGINS.contains(&word) {
                    return Err(perr(line, format!("origin must be one of {ORIGINS:?}")));
                }
                let note = rest[word.len()..].trim().to_string();
                origin = Some((word.to_string(), note));
                continue;
            }
            "max-index" => {
                max_index = number(words.next(), line)?;
                continue;
            }
            "param" => {
                let (n, v) = equation(rest, line)?;
                let idx = table.index_of(n).map_err(|e| perr(line, e.to_string()))?;
                values[idx] = Some(
                    parse_rational(v).ok_or_else(|| perr(line, format!("`{v}` is not rational")))?,
                );
                continue;
            }
            "substitute" => {
                let (n, v) = equation(rest, line)?;
                let idx = table.index_of(n).map_err(|e| perr(line, e.to_string()))?;
                let value = expr(v, &table, line)?;
                field = field.map_coefficients(|c| c.substitute(idx, &value));
                continue;
            }
            "modulo" => {
                let (p, v) = rest
                    .split_once(" eliminate ")
                    .ok_or_else(|| perr(line, "expected `modulo EXPR eliminate NAME`"))?;
                let idx = table.index_of(v.trim()).map_err(|e| perr(line, e.to_string()))?;
                modulo = Some((expr(p, &table, line)?, idx));
                continue;
            }
            "exact" => {
                modulo = None;
                continue;
            }
            "a" | "b" => {
                let (k, v) = equation(rest, line)?;
                let k = number(Some(k), line)?;
                let p = expr(v, &table, line)?;
                if head == "a" {
                    Expectation::A(k, p)
                } else {
                    Expectation::B(k, p)
                }
            }
            "obstruction" => {
                let (lhs, v) = equation(rest, line)?;
                let mut lw = lhs.split_whitespace();
                let m = method_arg(lw.next().unwrap_or(""), line)?;
                let k = number(lw.next(), line)?;
                Expectation::Entry(m, k, expr(v, &table, line)?)
            }
            "zero" => {
                let m = method_arg(words.next().unwrap_or(""), line)?;
                let from = number(words.next(), line)?;
                let to = number(words.next(), line)?;
                Expectation::Zero(m, from, to)
            }
            "verdict" => Expectation::Verdict(rest.to_string()),
            other => return Err(perr(line, format!("unknown directive `{other}`"))),
        };
        let (o, note) = origin
            .clone()
            .ok_or_else(|| perr(line, "expectation before any `origin` line"))?;
        checks.push(Check {
            expectation,
            origin: o,
            note,
            modulo: modulo.clone(),
            line,
        });
    }
    if !closed {
        return Err(perr(lines.len(), "missing `end`"));
    }
    if values.iter().any(Option::is_some) {
        field = field.map_coefficients(|c| c.evaluate(&values));
    }
    let field = normalize_principal_part(&field, &table)?.field;
    Ok(GoldenCase {
        name: name.to_string(),
        params: table,
        field,
        max_index,
        checks,
    })
}

pub fn load_fixture(path: &Path) -> Result<GoldenCase> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_fixture(&name, &text).map_err(|e| match e {
        Error::Parse(p) => Error::Config(format!("{}: {p}", path.display())),
        e => e,
    })
}

/// The shipped fixture directory.
pub fn default_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("goldens")
}

pub fn fixture_paths(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::Config(format!("cannot list {}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "hz"))
        .collect();
    paths.sort();
    Ok(paths)
}

fn matches(
    expected: &ParamPolynomial,
    actual: &ParamPolynomial,
    modulo: &Option<(ParamPolynomial, usize)>,
) -> Result<bool> {
    let diff = actual - expected;
    Ok(match modulo {
        None => diff.is_zero(),
        Some((p, v)) => diff.pseudo_remainder(p, *v)?.is_zero(),
    })
}

struct Runner<'a> {
    case: &'a GoldenCase,
    nf: Option<NormalFormResult>,
    sequences: BTreeMap<Method, ObstructionSequence>,
}

impl Runner<'_> {
    fn normal_form(&mut self, k: u32) -> Result<&NormalFormResult> {
        if self.nf.as_ref().is_none_or(|nf| nf.max_index < k) {
            let n = k.max(self.case.max_index);
            self.nf = Some(orbital_normal_form(&self.case.field, n)?);
        }
        Ok(self.nf.as_ref().expect("computed"))
    }

    fn sequence(&mut self, m: Method, k: u32) -> Result<&ObstructionSequence> {
        if self.sequences.get(&m).is_none_or(|s| s.max_index < k) {
            let n = k.max(self.case.max_index);
            self.sequences.insert(m, obstructions(&self.case.field, n, m)?);
        }
        Ok(&self.sequences[&m])
    }

    fn check(&mut self, c: &Check) -> Result<CheckOutcome> {
        let t = &self.case.params;
        let show = |p: &ParamPolynomial| p.to_canonical_string(t);
        let suffix = if c.modulo.is_some() { " (modulo constraint)" } else { "" };
        let (description, passed, detail) = match &c.expectation {
            Expectation::A(k, p) | Expectation::B(k, p) => {
                let is_a = matches!(c.expectation, Expectation::A(..));
                let nf = self.normal_form(*k)?;
                let actual = if is_a { nf.a(*k) } else { nf.b(*k) };
                let name = if is_a { "a" } else { "b" };
                (
                    format!("{name}_{k} = {}{suffix}", show(p)),
                    matches(p, &actual, &c.modulo)?,
                    format!("expected {}, got {}", show(p), show(&actual)),
                )
            }
            Expectation::Entry(m, k, p) => {
                let actual = self.sequence(*m, *k)?.entry(*k);
                (
                    format!("{m} z^{k} = {}{suffix}", show(p)),
                    matches(p, &actual, &c.modulo)?,
                    format!("expected {}, got {}", show(p), show(&actual)),
                )
            }
            Expectation::Zero(m, from, to) => {
                let s = self.sequence(*m, *to)?;
                let mut bad = None;
                for k in *from..=*to {
                    if !matches(&ParamPolynomial::zero(), &s.entry(k), &c.modulo)? {
                        bad = Some(k);
                        break;
                    }
                }
                (
                    format!("{m} entries z^{from}..z^{to} vanish{suffix}"),
                    bad.is_none(),
                    bad.map_or(String::new(), |k| {
                        format!("z^{k} = {}", show(&s.entry(k)))
                    }),
                )
            }
            Expectation::Verdict(tag) => {
                let cl = classify(&self.case.field, self.case.max_index)?;
                for s in cl.sequences {
                    self.sequences.entry(s.method).or_insert(s);
                }
                (
                    format!("verdict {tag}"),
                    cl.verdict.tag() == *tag,
                    format!("expected {tag}, got {}", cl.verdict.tag()),
                )
            }
        };
        Ok(CheckOutcome {
            description,
            origin: c.origin.clone(),
            passed,
            detail,
        })
    }
}

pub fn run_case(case: &GoldenCase, filter: Option<&str>) -> CaseOutcome {
    let mut runner = Runner {
        case,
        nf: None,
        sequences: BTreeMap::new(),
    };
    let mut checks = Vec::new();
    let mut error = None;
    for c in case
        .checks
        .iter()
        .filter(|c| filter.is_none_or(|f| c.origin == f))
    {
        match runner.check(c) {
            Ok(o) => checks.push(o),
            Err(e) => {
                error = Some(format!("line {}: {e}", c.line));
                break;
            }
        }
    }
    CaseOutcome {
        name: case.name.clone(),
        checks,
        sequences: runner.sequences.into_values().collect(),
        error,
    }
}

/// Runs every fixture in `dir`; `filter` keeps only checks of that origin.
pub fn run_goldens_in(dir: &Path, filter: Option<&str>) -> Result<GoldenReport> {
    let mut report = GoldenReport::default();
    for path in fixture_paths(dir)? {
        let outcome = match load_fixture(&path) {
            Ok(case) => run_case(&case, filter),
            Err(e) => CaseOutcome {
                name: path.display().to_string(),
                checks: Vec::new(),
                sequences: Vec::new(),
                error: Some(e.to_string()),
            },
        };
        report.cases.push(outcome);
    }
    Ok(report)
}

pub fn run_goldens(filter: Option<&str>) -> Result<GoldenReport> {
    run_goldens_in(&default_dir(), filter)
}

/// Recombination defects of all sequences a case produced; empty when the
/// defining identities hold.
pub fn defects(case: &GoldenCase, outcome: &CaseOutcome) -> Vec<Method> {
    outcome
        .sequences
        .iter()
        .filter(|s| !recombination_defect(&case.field, s).is_zero())
        .map(|s| s.method)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const F0: &str = "dx = -2*y\ndy = 2*x\ndz = x^2 + y^2\n";

    #[test]
    fn parses_and_runs_a_small_fixture() {
        let text = format!(
            "{F0}expect\n  origin immediate principal part\n  max-index 3\n  a 1 = 0\n  zero jacobi-h2 3 3\n  verdict NF_LINEARIZABLE\nend\n"
        );
        let case = parse_fixture("f0", &text).unwrap();
        assert_eq!(case.checks.len(), 3);
        let out = run_case(&case, None);
        assert!(out.passed(), "{:?}", out);
        assert!(defects(&case, &out).is_empty());
    }

    #[test]
    fn failing_expectation_is_reported() {
        let text = format!("{F0}expect\n  origin computed\n  b 1 = 1\nend\n");
        let case = parse_fixture("f0", &text).unwrap();
        let out = run_case(&case, None);
        assert!(!out.passed());
        assert_eq!(out.checks[0].detail, "expected 1, got 0");
    }

    #[test]
    fn modulo_comparison() {
        let text = "params a, b\ndx = -2*y\ndy = 2*x\ndz = x^2 + y^2\nexpect\n  origin computed\n  modulo a - b eliminate a\n  a 1 = a - b\nend\n";
        let out = run_case(&parse_fixture("m", text).unwrap(), None);
        assert!(out.passed(), "{:?}", out);
    }

    #[test]
    fn fixture_errors_have_lines() {
        let e = parse_fixture("x", &format!("{F0}expect\n  a 1 = 0\nend\n")).unwrap_err();
        assert!(e.to_string().contains("line 5"), "{e}");
        assert!(parse_fixture("x", &format!("{F0}expect\n  origin rumor\nend\n")).is_err());
        assert!(parse_fixture("x", F0).is_err());
    }
}
