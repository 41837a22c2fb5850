//! Command-line front end.
//!
//! Graphs are read as graph6 strings: positionally, from `--file`, or one per
//! line on standard input. Batch input yields one output row per line, in
//! input order. Exit codes: 0 success, 1 verification violations, 2 usage or
//! input errors.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::bounds::{BoundInputs, BoundReport, CSV_HEADER};
use crate::families::{
    enumerate_family, is_tree, pineapple, recognize_block_graph, recognize_distance_hereditary, recognize_ktree,
    s_knk, Family,
};
use crate::graph::Graph;
use crate::graph6;
use crate::params::graph_params;
use crate::spectra::{spectral_radius, spectral_radius_jacobi, spectral_radius_power, SpectralData};
use crate::verify::{
    verify_block_extremal, verify_dh_lower_bound, verify_independence_machinery, verify_pineapple_bounds,
    verify_treewidth_extremal, VerificationReport, SCHEMA_VERSION,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "spectral-extremal",
    version,
    about = "Spectral radius bounds and extremal graphs for distance-hereditary graphs, k-trees and block graphs",
    after_help = "CSV columns:\n  rho:    graph6,n,rho,residual\n  params: graph6,n,m,max_degree,min_degree,diameter,edge_connectivity,independence_number,regular\n  bounds: graph6,n,m,max_degree,diameter,edge_connectivity,independence_number,rho,gap,cioba_v1,cioba_v2,dh,dh_unscaled,treewidth_bound,pineapple_rho,pineapple_upper\n  verify: suite,section,counter,value"
)]
pub struct Cli {
    /// Output format (default: text; json for verify).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GraphInput {
    /// Graph in graph6 format; omit to read --file or standard input.
    pub graph: Option<String>,
    /// Read graphs from this file, one graph6 string per line.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Input is a plain edge list ("n" then one "u v" per line) instead of graph6.
    #[arg(long)]
    pub edge_list: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Auto,
    Jacobi,
    Power,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenFamily {
    Pineapple,
    Split,
    Star,
    Path,
    Cycle,
    Complete,
    Tree,
    Block,
    Dh,
    Connected,
    Ktree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Class {
    Ktree,
    Dh,
    Block,
    Tree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    DhLowerBound,
    TreewidthExtremal,
    BlockExtremal,
    IndependenceMachinery,
    PineappleBounds,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectral radius and Perron vector.
    Rho {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_enum, default_value = "auto")]
        method: Method,
    },
    /// Nonspectral parameters: degrees, diameter, edge-connectivity, independence number.
    Params {
        #[command(flatten)]
        input: GraphInput,
    },
    /// Every applicable bound, with slack against the actual spectral radius.
    Bounds {
        #[command(flatten)]
        input: GraphInput,
        /// Evaluate from a JSON parameter object (or array of them) instead of a graph.
        #[arg(long, conflicts_with_all = ["graph", "file", "edge_list"])]
        params: Option<PathBuf>,
    },
    /// Generate graphs: one named construction, or with --all every member of a family.
    Gen {
        #[arg(value_enum)]
        family: GenFamily,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// Enumerate every graph of the family on n vertices, up to isomorphism.
        #[arg(long)]
        all: bool,
    },
    /// Decide membership in a class and print a certificate.
    Recognize {
        #[arg(value_enum)]
        class: Class,
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Run a certification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        alpha: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
    },
}

/// An error that maps to exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CliResult = Result<i32, UsageError>;

/// Parses `args` (including the program name) and runs the command.
pub fn run(args: &[String], stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli, stdin, stdout, stderr) {
        Ok(code) => code,
        Err(UsageError(message)) => {
            let _ = writeln!(stderr, "error: {message}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: Cli, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult {
    let format = cli.format;
    match cli.command {
        Command::Rho { input, method } => {
            let graphs = read_graphs(&input, stdin)?;
            let rows = map_rows(&graphs, |g| match method {
                Method::Auto => spectral_radius(g),
                Method::Jacobi => spectral_radius_jacobi(g),
                Method::Power => spectral_radius_power(g),
            })?;
            emit_rho(format.unwrap_or(Format::Text), &graphs, &rows, stdout)?;
        }
        Command::Params { input } => {
            let graphs = read_graphs(&input, stdin)?;
            let rows = map_rows(&graphs, graph_params)?;
            match format.unwrap_or(Format::Text) {
                Format::Json => emit_json("params", &rows, stdout)?,
                Format::Csv => {
                    writeln!(
                        stdout,
                        "graph6,n,m,max_degree,min_degree,diameter,edge_connectivity,independence_number,regular"
                    )?;
                    for (g, p) in graphs.iter().zip(&rows) {
                        writeln!(
                            stdout,
                            "{g},{},{},{},{},{},{},{},{}",
                            p.n, p.m, p.delta_max, p.delta_min, p.diameter, p.edge_connectivity, p.independence_number, p.is_regular
                        )?;
                    }
                }
                Format::Text => {
                    for (g, p) in graphs.iter().zip(&rows) {
                        writeln!(stdout, "graph6: {g}")?;
                        writeln!(stdout, "n: {}\nm: {}", p.n, p.m)?;
                        writeln!(stdout, "max degree: {}\nmin degree: {}", p.delta_max, p.delta_min)?;
                        writeln!(stdout, "diameter: {}", p.diameter)?;
                        writeln!(stdout, "edge-connectivity: {}", p.edge_connectivity)?;
                        writeln!(stdout, "independence number: {}", p.independence_number)?;
                        writeln!(stdout, "regular: {}", p.is_regular)?;
                    }
                }
            }
        }
        Command::Bounds { input, params } => {
            let reports: Vec<BoundReport> = match params {
                Some(path) => {
                    let text = read_source(Some(&path), stdin)?;
                    let value: serde_json::Value = serde_json::from_str(&text)?;
                    let inputs: Vec<BoundInputs> = match value {
                        serde_json::Value::Array(_) => serde_json::from_value(value)?,
                        other => vec![serde_json::from_value(other)?],
                    };
                    inputs.iter().map(BoundReport::evaluate).collect()
                }
                None => {
                    let graphs = read_graphs(&input, stdin)?;
                    map_rows(&graphs, BoundReport::for_graph)?
                }
            };
            emit_bounds(format.unwrap_or(Format::Text), &reports, stdout)?;
        }
        Command::Gen { family, n, alpha, k, all } => {
            let graphs = generate(family, n, alpha, k, all)?;
            if format == Some(Format::Json) {
                let lines: Vec<String> = graphs.iter().map(graph6::encode).collect();
                emit_json("gen", &lines, stdout)?;
            } else {
                for g in &graphs {
                    writeln!(stdout, "{g}")?;
                }
            }
        }
        Command::Recognize { class, input, k } => {
            let graphs = read_graphs(&input, stdin)?;
            let rows = map_rows(&graphs, |g| recognize(class, g, k))?;
            match format.unwrap_or(Format::Text) {
                Format::Json => emit_json("recognize", &rows, stdout)?,
                Format::Csv => {
                    writeln!(stdout, "graph6,class,member")?;
                    for r in &rows {
                        writeln!(stdout, "{},{},{}", r.graph6, r.class, r.member)?;
                    }
                }
                Format::Text => {
                    for r in &rows {
                        let verdict = if r.member { "accept" } else { "reject" };
                        writeln!(stdout, "{} {}: {verdict}", r.graph6, r.class)?;
                        if !r.certificate.is_null() {
                            writeln!(stdout, "certificate: {}", r.certificate)?;
                        }
                    }
                }
            }
        }
        Command::Verify { suite, n_max, alpha, k } => {
            let report = run_suite(suite, n_max, alpha, k)?;
            writeln!(stderr, "wall time: {:.3} s", report.wall_time.as_secs_f64())?;
            match format.unwrap_or(Format::Json) {
                Format::Json => writeln!(stdout, "{}", serde_json::to_string_pretty(&report)?)?,
                Format::Csv => write!(stdout, "{}", report.summary_csv())?,
                Format::Text => emit_verify_text(&report, stdout)?,
            }
            return Ok(if report.passed() { EXIT_OK } else { EXIT_VIOLATIONS });
        }
    }
    Ok(EXIT_OK)
}

fn read_source(path: Option<&PathBuf>, stdin: &mut dyn Read) -> Result<String, UsageError> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| UsageError(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut text = String::new();
            stdin.read_to_string(&mut text)?;
            Ok(text)
        }
    }
}

fn read_graphs(input: &GraphInput, stdin: &mut dyn Read) -> Result<Vec<Graph>, UsageError> {
    if input.edge_list {
        let text = match &input.graph {
            Some(s) => s.replace(';', "\n"),
            None => read_source(input.file.as_ref(), stdin)?,
        };
        return Ok(vec![Graph::parse_edge_list(&text)?]);
    }
    if let Some(s) = &input.graph {
        return Ok(vec![graph6::decode_str(s).map_err(|e| UsageError(format!("graph {s:?}: {e}")))?]);
    }
    let text = read_source(input.file.as_ref(), stdin)?;
    let mut graphs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        graphs.push(graph6::decode_str(line).map_err(|e| UsageError(format!("line {}: {e}", i + 1)))?);
    }
    if graphs.is_empty() {
        return Err(UsageError("no graph given".into()));
    }
    Ok(graphs)
}

/// Applies `f` to every graph in parallel, keeping input order; the first
/// failure (in input order) is reported with its row number.
fn map_rows<T, E, F>(graphs: &[Graph], f: F) -> Result<Vec<T>, UsageError>
where
    T: Send,
    E: std::fmt::Display + Send,
    F: Fn(&Graph) -> Result<T, E> + Sync,
{
    let results: Vec<Result<T, E>> = graphs.par_iter().map(&f).collect();
    let many = graphs.len() > 1;
    results
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            r.map_err(|e| {
                if many {
                    UsageError(format!("graph {} ({}): {e}", i + 1, graphs[i]))
                } else {
                    UsageError(format!("{}: {e}", graphs[i]))
                }
            })
        })
        .collect()
}

fn emit_json<T: Serialize>(command: &str, rows: &[T], out: &mut dyn Write) -> Result<(), UsageError> {
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "results": rows,
    });
    writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
    Ok(())
}

fn emit_rho(format: Format, graphs: &[Graph], rows: &[SpectralData], out: &mut dyn Write) -> Result<(), UsageError> {
    match format {
        Format::Json => {
            let rows: Vec<_> = graphs
                .iter()
                .zip(rows)
                .map(|(g, d)| json!({"graph6": g.to_string(), "rho": d.rho, "x": d.x, "residual": d.residual}))
                .collect();
            emit_json("rho", &rows, out)
        }
        Format::Csv => {
            writeln!(out, "graph6,n,rho,residual")?;
            for (g, d) in graphs.iter().zip(rows) {
                writeln!(out, "{g},{},{:.15},{:e}", g.n(), d.rho, d.residual)?;
            }
            Ok(())
        }
        Format::Text => {
            for (g, d) in graphs.iter().zip(rows) {
                let x: Vec<String> = d.x.iter().map(|v| format!("{v:.12}")).collect();
                writeln!(out, "{g} rho = {:.15}", d.rho)?;
                writeln!(out, "x = [{}]", x.join(", "))?;
            }
            Ok(())
        }
    }
}

fn emit_bounds(format: Format, reports: &[BoundReport], out: &mut dyn Write) -> Result<(), UsageError> {
    match format {
        Format::Json => emit_json("bounds", reports, out),
        Format::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            for r in reports {
                writeln!(out, "{}", r.csv_row())?;
            }
            Ok(())
        }
        Format::Text => {
            for r in reports {
                let p = &r.params;
                writeln!(
                    out,
                    "{} n={} m={} max_degree={} D={} edge_connectivity={} alpha={}",
                    r.graph6.as_deref().unwrap_or("-"),
                    p.n,
                    p.m,
                    p.delta_max,
                    p.diameter,
                    p.edge_connectivity,
                    p.independence_number
                )?;
                if let (Some(rho), Some(gap)) = (r.rho, r.gap) {
                    writeln!(out, "  rho = {rho:.12}  gap = {gap:.12}")?;
                }
                for b in &r.bounds {
                    let status = match (b.applies, b.satisfied) {
                        (Some(false), _) => "n/a",
                        (_, Some(true)) => "ok",
                        (_, Some(false)) => "FAILS",
                        (_, None) => "-",
                    };
                    let slack = b.slack.map(|s| format!("{s:.12}")).unwrap_or_default();
                    writeln!(out, "  {:<16} {:>18.12} {:>6} {}", b.name, b.value, status, slack)?;
                }
            }
            Ok(())
        }
    }
}

fn emit_verify_text(report: &VerificationReport, out: &mut dyn Write) -> Result<(), UsageError> {
    let verdict = if report.passed() { "PASS" } else { "FAIL" };
    writeln!(
        out,
        "{} {verdict}: {} instances, {} violations",
        report.suite, report.instances, report.violation_count
    )?;
    for v in &report.violations {
        writeln!(out, "  violation {} [{}] {}", v.graph6, v.check, v.detail)?;
    }
    for w in &report.witnesses {
        writeln!(out, "  {} {} rho = {:.12}", w.role, w.graph6, w.rho)?;
    }
    for s in &report.sections {
        let counters: Vec<String> = s.counters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(out, "  {}: {}", s.name, counters.join(" "))?;
    }
    Ok(())
}

fn need(value: Option<usize>, flag: &str, what: &str) -> Result<usize, UsageError> {
    value.ok_or_else(|| UsageError(format!("{what} needs --{flag}")))
}

fn generate(family: GenFamily, n: usize, alpha: Option<usize>, k: Option<usize>, all: bool) -> Result<Vec<Graph>, UsageError> {
    if all {
        let fam = match family {
            GenFamily::Tree => Family::Tree,
            GenFamily::Block => Family::Block,
            GenFamily::Dh => Family::DistanceHereditary,
            GenFamily::Connected => Family::AllConnected,
            GenFamily::Ktree => Family::KTree(need(k, "k", "ktree")?),
            other => return Err(UsageError(format!("--all is not available for {other:?}").to_lowercase())),
        };
        return Ok(enumerate_family(n, fam)?.collect());
    }
    if n == 0 {
        return Err(UsageError("--n must be positive".into()));
    }
    let g = match family {
        GenFamily::Pineapple => pineapple(n, need(alpha, "alpha", "pineapple")?)?,
        GenFamily::Split | GenFamily::Ktree => s_knk(n, need(k, "k", "split")?)?,
        GenFamily::Star => Graph::star(n),
        GenFamily::Path | GenFamily::Tree => Graph::path(n),
        GenFamily::Cycle if n >= 3 => Graph::cycle(n),
        GenFamily::Cycle => return Err(UsageError("cycle needs --n >= 3".into())),
        GenFamily::Complete | GenFamily::Block | GenFamily::Dh | GenFamily::Connected => Graph::complete(n),
    };
    Ok(vec![g])
}

#[derive(Debug, Serialize)]
struct Recognition {
    graph6: String,
    class: String,
    member: bool,
    certificate: serde_json::Value,
}

fn recognize(class: Class, g: &Graph, k: Option<usize>) -> Result<Recognition, String> {
    let e = |e: &dyn std::fmt::Display| e.to_string();
    let (name, member, certificate) = match class {
        Class::Ktree => {
            let k = k.ok_or("ktree needs --k")?;
            let cert = recognize_ktree(g, k);
            (format!("{k}-tree"), cert.is_some(), serde_json::to_value(cert).map_err(|x| e(&x))?)
        }
        Class::Dh => {
            let steps = if g.is_connected() && g.n() > 0 { recognize_distance_hereditary(g).map_err(|x| e(&x))? } else { None };
            ("distance-hereditary".to_string(), steps.is_some(), serde_json::to_value(steps).map_err(|x| e(&x))?)
        }
        Class::Block => {
            let member = g.n() > 0 && g.is_connected() && recognize_block_graph(g).map_err(|x| e(&x))?;
            let cert = if member {
                serde_json::to_value(crate::blocks::decompose_blocks(g).map_err(|x| e(&x))?.blocks).map_err(|x| e(&x))?
            } else {
                serde_json::Value::Null
            };
            ("block".to_string(), member, cert)
        }
        Class::Tree => ("tree".to_string(), is_tree(g), serde_json::Value::Null),
    };
    Ok(Recognition {
        graph6: g.to_string(),
        class: name,
        member,
        certificate,
    })
}

/// Runs a suite over every `n <= n_max` it is defined for and merges the
/// per-`n` reports.
pub fn run_suite(suite: Suite, n_max: usize, alpha: Option<usize>, k: Option<usize>) -> Result<VerificationReport, String> {
    let err = |e: crate::verify::VerifyError| e.to_string();
    let report = match suite {
        Suite::DhLowerBound => verify_dh_lower_bound(n_max).map_err(err)?,
        Suite::IndependenceMachinery => verify_independence_machinery(n_max).map_err(err)?,
        Suite::PineappleBounds => verify_pineapple_bounds(n_max).map_err(err)?,
        Suite::TreewidthExtremal => {
            let k = k.ok_or("treewidth-extremal needs --k")?;
            let parts = (1..=n_max)
                .map(|n| verify_treewidth_extremal(n, k))
                .collect::<Result<Vec<_>, _>>()
                .map_err(err)?;
            VerificationReport::merge(parts).ok_or("--n-max must be positive")?
        }
        Suite::BlockExtremal => {
            let mut parts = Vec::new();
            for n in 1..=n_max {
                let alphas: Vec<usize> = match alpha {
                    Some(a) => vec![a],
                    None => (1..=n).collect(),
                };
                for a in alphas {
                    parts.push(verify_block_extremal(n, a).map_err(err)?);
                }
            }
            VerificationReport::merge(parts).ok_or("--n-max must be positive")?
        }
    };
    Ok(report)
}
