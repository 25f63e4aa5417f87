//! The `gspline` command line.
//!
//! Exit codes: 0 success, 1 validation failure, 2 input error, 3 size limit
//! exceeded. Reports go to standard output as JSON (or CSV for `basis`);
//! diagnostics go to standard error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::gkm::{build_gkm, gkm_basis, spline_lattice};
use crate::graph::int_to_json;
use crate::longest_basis::{CrtStep, LongestPaths};
use crate::oracle::{validate_basis, validate_in, EnumerationWindow, DEFAULT_CANDIDATE_CAP};
use crate::path_basis::{path_basis_traced, PathSpec};
use crate::spline::{check, FlowUpBasis};
use crate::{Error, Graph, Int};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SIZE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "gspline", version, about = "Generalized splines on edge-labeled graphs over the integers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check whether a vector is a spline on the graph.
    Verify {
        graph: PathBuf,
        /// Comma-separated entries, one per vertex.
        #[arg(long, allow_hyphen_values = true)]
        spline: String,
    },
    /// Build a flow-up basis.
    Basis {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Longest)]
        method: Method,
        /// Include the per-step construction in the JSON report.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Emit the GKM matrix and the spline lattice it defines.
    Gkm {
        graph: PathBuf,
        /// Emit only one of the two; both by default.
        #[arg(long, value_enum)]
        emit: Option<Emit>,
    },
    /// Delete zero vertices and relabel their neighbors.
    Reduce {
        graph: PathBuf,
        /// Comma-separated 1-based vertices forced to zero.
        #[arg(long, value_delimiter = ',', required = true)]
        zeros: Vec<usize>,
    },
    /// Validate the constructions against brute-force enumeration.
    Oracle {
        graph: PathBuf,
        /// Uniform window bound; defaults to the per-class window, which is
        /// complete for minimal leading entries.
        #[arg(long)]
        bound: Option<Int>,
        #[arg(long, value_enum, default_value_t = Method::Longest)]
        method: Method,
        /// Maximum number of partial assignments each search may visit.
        #[arg(long, default_value_t = DEFAULT_CANDIDATE_CAP)]
        cap: u128,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Path,
    Longest,
    Gkm,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Path => "path",
            Method::Longest => "longest",
            Method::Gkm => "gkm",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Matrix,
    Lattice,
}

/// What a subcommand produced.
enum Outcome {
    Ok(String),
    /// Report printed, but the exit code signals a failed validation.
    Invalid(String, String),
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(Outcome::Ok(report)) => {
            let _ = writeln!(out, "{report}");
            EXIT_OK
        }
        Ok(Outcome::Invalid(report, message)) => {
            let _ = writeln!(out, "{report}");
            let _ = writeln!(err, "{message}");
            EXIT_VALIDATION
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SizeExceeded { .. } => EXIT_SIZE,
        Error::Parse { .. }
        | Error::Validation(_)
        | Error::VertexOutOfRange { .. }
        | Error::InvalidArgument(_)
        | Error::LengthMismatch { .. }
        | Error::DimensionMismatch { .. } => EXIT_INPUT,
        _ => EXIT_VALIDATION,
    }
}

fn load(path: &Path) -> Result<Graph, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Graph::from_json(&text).map_err(|e| match e {
        Error::Parse { path: p, message } => Error::Parse { path: format!("{}: {p}", path.display()), message },
        other => other,
    })
}

fn ints(xs: &[Int]) -> Value {
    Value::Array(xs.iter().map(int_to_json).collect())
}

fn rows(xs: &[Vec<Int>]) -> Value {
    Value::Array(xs.iter().map(|v| ints(v)).collect())
}

fn render(v: &Value) -> String {
    serde_json::to_string(v).expect("JSON values serialize")
}

fn execute(command: &Command) -> Result<Outcome, Error> {
    match command {
        Command::Verify { graph, spline } => verify(&load(graph)?, spline),
        Command::Basis { graph, method, trace, format } => basis(&load(graph)?, *method, *trace, *format),
        Command::Gkm { graph, emit } => gkm(&load(graph)?, *emit),
        Command::Reduce { graph, zeros } => reduce(&load(graph)?, zeros),
        Command::Oracle { graph, bound, method, cap } => oracle(&load(graph)?, bound.as_ref(), *method, *cap),
    }
}

fn parse_vector(text: &str) -> Result<Vec<Int>, Error> {
    text.split(',')
        .enumerate()
        .map(|(k, s)| {
            s.trim().parse::<Int>().map_err(|_| Error::Parse {
                path: format!("--spline[{}]", k + 1),
                message: format!("expected an integer, found {:?}", s.trim()),
            })
        })
        .collect()
}

fn verify(g: &Graph, text: &str) -> Result<Outcome, Error> {
    let f = parse_vector(text)?;
    let verdict = check(g, &f)?;
    let report = json!({
        "spline": ints(&f),
        "is_spline": verdict.is_ok(),
        "violation": verdict.as_ref().err().map(|v| v.to_string()),
    });
    Ok(match verdict {
        Ok(()) => Outcome::Ok(render(&report)),
        Err(v) => Outcome::Invalid(render(&report), format!("not a spline: {v}")),
    })
}

fn build(g: &Graph, method: Method) -> Result<(FlowUpBasis<Int>, Option<Value>), Error> {
    match method {
        Method::Path => {
            let (b, traces) = path_basis_traced(&PathSpec::from_graph(g)?)?;
            let trace = traces
                .iter()
                .map(|t| {
                    json!({
                        "index": t.index + 1,
                        "leading": int_to_json(&t.leading),
                        "steps": t.steps.iter().map(|s| json!({
                            "vertex": s.vertex + 1,
                            "s": int_to_json(&s.s),
                            "l": int_to_json(&s.l),
                            "value": int_to_json(&s.value),
                            "closed_form": s.closed_form.as_ref().map(int_to_json),
                            "consistent": s.consistent,
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok((b, Some(Value::Array(trace))))
        }
        Method::Longest => {
            let (b, traces) = LongestPaths::default().general_basis_traced(g)?;
            let step = |s: &CrtStep<Int>| {
                json!({
                    "vertex": s.vertex + 1,
                    "system": s.system.iter().map(|c| json!([int_to_json(c.residue()), int_to_json(c.modulus())])).collect::<Vec<_>>(),
                    "solution": int_to_json(&s.solution),
                })
            };
            let trace = traces
                .iter()
                .map(|t| json!({"index": t.index + 1, "leading": int_to_json(&t.leading), "steps": t.steps.iter().map(step).collect::<Vec<_>>()}))
                .collect();
            Ok((b, Some(Value::Array(trace))))
        }
        Method::Gkm => {
            let m = build_gkm(g);
            let trace = json!({"matrix": m.to_json_value(), "lattice": spline_lattice(g)?.to_json_value()});
            Ok((gkm_basis(g)?, Some(trace)))
        }
    }
}

fn leading_row(b: &FlowUpBasis<Int>) -> Vec<Int> {
    (0..b.dim()).map(|i| b.class_at(i).map_or_else(Int::default, |c| c.leading_value().clone())).collect()
}

fn basis(g: &Graph, method: Method, trace: bool, format: Format) -> Result<Outcome, Error> {
    let (b, steps) = build(g, method)?;
    let all_splines = b.all_splines(g);
    let leading = leading_row(&b);
    let text = match format {
        Format::Json => {
            let mut report = json!({
                "method": method.name(),
                "basis": rows(&b.vectors()),
                "leading": ints(&leading),
                "checks": {"all_splines": all_splines, "rank": b.rank(), "complete": b.is_complete()},
            });
            if trace {
                report["trace"] = steps.unwrap_or(Value::Null);
            }
            render(&report)
        }
        Format::Csv => {
            let mut s = String::from("index,leading");
            for v in 1..=g.vertex_count() {
                s.push_str(&format!(",v{v}"));
            }
            for c in b.classes() {
                s.push_str(&format!("\n{},{}", c.index() + 1, c.leading_value()));
                for x in c.entries() {
                    s.push_str(&format!(",{x}"));
                }
            }
            s
        }
    };
    Ok(if all_splines {
        Outcome::Ok(text)
    } else {
        Outcome::Invalid(text, "a constructed basis vector is not a spline".into())
    })
}

fn gkm(g: &Graph, emit: Option<Emit>) -> Result<Outcome, Error> {
    let mut report = serde_json::Map::new();
    if emit != Some(Emit::Lattice) {
        report.insert("matrix".into(), build_gkm(g).to_json_value());
    }
    if emit != Some(Emit::Matrix) {
        report.insert("lattice".into(), spline_lattice(g)?.to_json_value());
    }
    Ok(Outcome::Ok(render(&Value::Object(report))))
}

fn reduce(g: &Graph, zeros: &[usize]) -> Result<Outcome, Error> {
    let set = zeros
        .iter()
        .map(|&v| if v == 0 || v > g.vertex_count() { Err(Error::VertexOutOfRange { vertex: v, n: g.vertex_count() }) } else { Ok(v - 1) })
        .collect::<Result<_, _>>()?;
    let red = g.zero_reduce(&set)?;
    let survivors: Vec<usize> = red.index_map.iter().enumerate().filter(|(_, s)| s.is_some()).map(|(v, _)| v + 1).collect();
    let report = json!({"graph": red.graph.to_json_value(), "vertices": survivors});
    Ok(Outcome::Ok(render(&report)))
}

fn oracle(g: &Graph, bound: Option<&Int>, method: Method, cap: u128) -> Result<Outcome, Error> {
    let window = match bound {
        Some(b) if b.sign() != num_bigint::Sign::Plus => return Err(Error::InvalidArgument("--bound must be positive".into())),
        Some(b) => EnumerationWindow::uniform(g.vertex_count(), b.clone()),
        None => EnumerationWindow::tight(g),
    }
    .with_cap(cap);
    let (b, r) = match method {
        Method::Longest => {
            let r = validate_in(g, &window)?;
            (LongestPaths::default().general_basis(g)?, r)
        }
        _ => {
            let (b, _) = build(g, method)?;
            let r = validate_basis(g, &b, &window)?;
            (b, r)
        }
    };
    let report = json!({
        "method": method.name(),
        "basis": rows(&b.vectors()),
        "leading": ints(&leading_row(&b)),
        "checks": r.checks_json(),
        "oracle": r.to_json_value(),
    });
    Ok(if r.passed() {
        Outcome::Ok(render(&report))
    } else {
        let names: Vec<&str> = r.failures().map(|c| c.name).collect();
        Outcome::Invalid(render(&report), format!("oracle checks failed: {}", names.join(", ")))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("gspline").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors() {
        let (code, _, err) = run_args(&["frobnicate"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("Usage"));
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("basis"));
    }

    #[test]
    fn missing_file() {
        let (code, _, err) = run_args(&["basis", "/nonexistent/graph.json"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("nonexistent"));
    }

    #[test]
    fn vector_parsing() {
        assert_eq!(parse_vector("36, -95,0").unwrap(), vec![Int::from(36), Int::from(-95), Int::from(0)]);
        assert!(parse_vector("1,x").is_err());
    }
}
