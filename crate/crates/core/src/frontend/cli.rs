use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analyzers::{classify, obstructions, sequence_verdict, Method};
use crate::coeffring::rational::parse_rational;
use crate::coeffring::{ParamTable, Rational};
use crate::error::Error;
use crate::normalform::{first_resonance, orbital_normal_form, planar_reduction};
use crate::vectorfield::{is_parameter_free, VectorField3};

use super::normalize::{normalize_principal_part, Normalized};
use super::parser::{parse_param_expression, parse_system};
use super::report::*;

pub const DEFAULT_MAX_INDEX: u32 = 30;

#[derive(Parser, Debug)]
#[command(name = "hopfzero", version, about = "Normal forms and integrability obstructions for Hopf-zero singularities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify a system (or run one analysis with --mode).
    Analyze {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
    },
    /// Print the orbital normal form coefficients.
    NormalForm {
        #[command(flatten)]
        common: Common,
    },
    /// Compute one obstruction sequence.
    Obstructions {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        mode: ObstructionMode,
        /// Reduce entries modulo this parameter polynomial.
        #[arg(long, requires = "eliminate")]
        constraint: Option<String>,
        /// Parameter eliminated by the constraint.
        #[arg(long, requires = "constraint")]
        eliminate: Option<String>,
    },
    /// Print the planar reduction of the normal form.
    Reduce {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
pub struct Common {
    pub file: PathBuf,
    /// Highest z-index (quasi-homogeneous degree 2N).
    #[arg(long, default_value_t = DEFAULT_MAX_INDEX, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_degree: u32,
    /// Bind a parameter, e.g. a=1/2.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
    #[arg(long)]
    pub json: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Auto,
    FirstIntegral,
    JacobiH,
    JacobiH2,
    NormalForm,
    Reduce,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObstructionMode {
    FirstIntegral,
    JacobiH,
    JacobiH2,
}

impl From<ObstructionMode> for Method {
    fn from(m: ObstructionMode) -> Method {
        match m {
            ObstructionMode::FirstIntegral => Method::FirstIntegral,
            ObstructionMode::JacobiH => Method::JacobiH,
            ObstructionMode::JacobiH2 => Method::JacobiH2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Analysis(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::UnknownParameter(_) => Failure::Usage(e.to_string()),
            e => Failure::Analysis(e.to_string()),
        }
    }
}

/// Runs the command line in process. `args[0]` is the program name.
pub fn run_cli<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            return if code == 0 {
                CliOutput { code, stdout: text, stderr: String::new() }
            } else {
                CliOutput { code: 2, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli.command) {
        Ok(stdout) => CliOutput { code: 0, stdout, stderr: String::new() },
        Err(Failure::Usage(m)) => CliOutput { code: 2, stdout: String::new(), stderr: format!("error: {m}\n") },
        Err(Failure::Analysis(m)) => CliOutput { code: 1, stdout: String::new(), stderr: format!("error: {m}\n") },
    }
}

struct Loaded {
    table: ParamTable,
    normalized: Normalized,
}

impl Loaded {
    fn field(&self) -> &VectorField3 {
        &self.normalized.field
    }
}

fn load(c: &Common) -> Result<Loaded, Failure> {
    let text = std::fs::read_to_string(&c.file)
        .map_err(|e| Failure::Analysis(format!("cannot read {}: {e}", c.file.display())))?;
    let src = parse_system(&text).map_err(|e| Failure::Usage(format!("{}: {e}", c.file.display())))?;
    let table = src.params.clone();
    let mut values: Vec<Option<Rational>> = vec![None; table.len()];
    for b in &c.params {
        let (name, value) = b
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("expected NAME=VALUE, found `{b}`")))?;
        let i = table.index_of(name.trim())?;
        let v = parse_rational(value.trim())
            .ok_or_else(|| Failure::Usage(format!("`{value}` is not a rational number")))?;
        values[i] = Some(v);
    }
    let mut field = src.to_field();
    if values.iter().any(Option::is_some) {
        field = field.map_coefficients(|p| p.evaluate(&values));
    }
    let normalized = normalize_principal_part(&field, &table)?;
    Ok(Loaded { table, normalized })
}

fn execute(cmd: &Command) -> Result<String, Failure> {
    match cmd {
        Command::Analyze { common, mode } => {
            let l = load(common)?;
            let n = common.max_degree;
            match mode {
                Mode::Auto => {
                    let c = classify(l.field(), n)?;
                    Ok(if common.json {
                        pretty(&classification_json(&c, &l.table, &l.normalized))
                    } else {
                        classification_text(&c, &l.table, &l.normalized)
                    })
                }
                Mode::FirstIntegral | Mode::JacobiH | Mode::JacobiH2 => {
                    let m = match mode {
                        Mode::FirstIntegral => Method::FirstIntegral,
                        Mode::JacobiH => Method::JacobiH,
                        _ => Method::JacobiH2,
                    };
                    run_obstructions(&l, n, m, None, common.json)
                }
                Mode::NormalForm => run_normal_form(&l, n, common.json),
                Mode::Reduce => run_reduce(&l, n, common.json),
            }
        }
        Command::NormalForm { common } => run_normal_form(&load(common)?, common.max_degree, common.json),
        Command::Reduce { common } => run_reduce(&load(common)?, common.max_degree, common.json),
        Command::Obstructions { common, mode, constraint, eliminate } => {
            let l = load(common)?;
            let c = match (constraint, eliminate) {
                (Some(expr), Some(var)) => {
                    let p = parse_param_expression(expr, &l.table)
                        .map_err(|e| Failure::Usage(format!("constraint: {e}")))?;
                    let i = l.table.index_of(var)?;
                    Some((p, i))
                }
                _ => None,
            };
            run_obstructions(&l, common.max_degree, (*mode).into(), c, common.json)
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn run_obstructions(
    l: &Loaded,
    n: u32,
    m: Method,
    constraint: Option<(crate::coeffring::ParamPolynomial, usize)>,
    json: bool,
) -> Result<String, Failure> {
    let mut seq = obstructions(l.field(), n, m)?;
    if let Some((p, var)) = &constraint {
        for v in seq.entries.values_mut() {
            *v = v.pseudo_remainder(p, *var)?;
        }
    }
    let symbolic = !is_parameter_free(l.field());
    let verdict = sequence_verdict(&seq, n, symbolic || constraint.is_some());
    if json {
        let mut v = serde_json::json!({
            "schema_version": SCHEMA_VERSION,
            "parameters": l.table.names(),
            "scalings_applied": scalings_json(&l.normalized),
            "obstructions": obstructions_json(&seq, &l.table),
            "classification": verdict_json(&verdict, None),
        });
        if let Some((p, var)) = &constraint {
            v["constraint"] = serde_json::json!({
                "polynomial": p.to_canonical_string(&l.table),
                "eliminate": l.table.name(*var),
            });
        }
        Ok(pretty(&v))
    } else {
        let mut s = scalings_text(&l.normalized);
        s.push_str(&obstructions_text(&seq, &l.table));
        s.push_str(&format!("verdict: {}\n", verdict.tag()));
        Ok(s)
    }
}

fn run_normal_form(l: &Loaded, n: u32, json: bool) -> Result<String, Failure> {
    let nf = orbital_normal_form(l.field(), n)?;
    let r = first_resonance(&nf);
    Ok(if json {
        pretty(&serde_json::json!({
            "schema_version": SCHEMA_VERSION,
            "parameters": l.table.names(),
            "scalings_applied": scalings_json(&l.normalized),
            "resonance": resonance_json(&r, &l.table),
            "normal_form": normal_form_json(&nf, &l.table),
        }))
    } else {
        let mut s = scalings_text(&l.normalized);
        s.push_str(&normal_form_text(&nf, &l.table));
        s.push_str(&resonance_text(&r, &l.table));
        s
    })
}

fn run_reduce(l: &Loaded, n: u32, json: bool) -> Result<String, Failure> {
    let nf = orbital_normal_form(l.field(), n)?;
    let p = planar_reduction(&nf);
    Ok(if json {
        pretty(&serde_json::json!({
            "schema_version": SCHEMA_VERSION,
            "parameters": l.table.names(),
            "scalings_applied": scalings_json(&l.normalized),
            "planar_reduction": planar_json(&p, &l.table),
        }))
    } else {
        format!(
            "{}du = {}\ndv = {}\n",
            scalings_text(&l.normalized),
            p.pu.to_text(("u", "v"), &l.table),
            p.pv.to_text(("u", "v"), &l.table)
        )
    })
}
