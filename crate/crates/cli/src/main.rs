//! `g2rig`: graph Lie algebra construction and rigidity analysis.
//!
//! Exit codes: 0 success (an undecided verdict is still success), 1 usage,
//! 2 graph parse failure, 3 verification mismatch or internal
//! inconsistency.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::Zero;
use serde_json::json;

use g2rig_core::classify::{
    csv_report, json_report, paper_table_check, run_classification, text_report,
};
use g2rig_core::cohomology::{cohomology_report, CohomologyError, DEFAULT_COHOMOLOGY_CAP};
use g2rig_core::graph::{parse_graph6, Graph};
use g2rig_core::liealg::{
    abelian_factor_dimension, center, derived_subalgebra, graph_algebra, structure_json,
    StructureConstants, Subspace,
};
use g2rig_core::matrix::{rat, Rat};
use g2rig_core::rigidity::{
    classify_graph_with_cap, expected_verdict, three_rigid_flag, verdict_json,
    verify_certificate, Method, RigidityStatus,
};

const CAP_ENV: &str = "G2RIG_COHOMOLOGY_CAP";

#[derive(Parser)]
#[command(
    name = "g2rig",
    version,
    about = "Build the 2-step nilpotent Lie algebra of a graph and decide its 2-rigidity"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the algebra of a graph: dimension, brackets, center, derived
    /// subalgebra, abelian factor
    Algebra {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Decide 2-rigidity and print the verdict with its certificate
    Rigidity {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum, default_value_t = MethodFlag::Auto)]
        method: MethodFlag,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Print the dimension report of the restricted deformation complex
    Cohomology {
        #[command(flatten)]
        graph: GraphArgs,
        /// Largest algebra dimension to accept (default 12, or the
        /// G2RIG_COHOMOLOGY_CAP environment variable)
        #[arg(long)]
        cap: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Classify every isomorphism class in a vertex range
    Classify {
        #[arg(long, default_value_t = 2)]
        min_vertices: u32,
        #[arg(long, default_value_t = 6)]
        max_vertices: u32,
        #[arg(long, value_enum, default_value_t = MethodFlag::Auto)]
        method: MethodFlag,
        /// Largest algebra dimension the cohomology step may attempt
        #[arg(long)]
        cap: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A graph, given as exactly one of: a graph6 string, a vertex count with
/// an optional `i-j,k-l` edge list, or a JSON object
/// `{"vertices": m, "edges": [[i, j], ...]}`.
#[derive(Args)]
struct GraphArgs {
    /// graph6 string, e.g. "Cl"
    #[arg(value_name = "GRAPH6", conflicts_with_all = ["vertices", "edges", "json"])]
    graph6: Option<String>,
    /// Number of vertices (with --edges; no --edges means edgeless)
    #[arg(long)]
    vertices: Option<u32>,
    /// Edge list shorthand "1-2,2-3"; empty for no edges
    #[arg(long, requires = "vertices")]
    edges: Option<String>,
    /// JSON graph object
    #[arg(long, conflicts_with_all = ["vertices", "edges"])]
    json: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodFlag {
    Auto,
    Combinatorial,
    WithCohomology,
}

impl From<MethodFlag> for Method {
    fn from(flag: MethodFlag) -> Method {
        match flag {
            MethodFlag::Auto => Method::Auto,
            MethodFlag::Combinatorial => Method::CombinatorialOnly,
            MethodFlag::WithCohomology => Method::WithCohomology,
        }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Parse(String),
    Verify(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Verify(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Parse(m) | CliError::Verify(m) => m,
        }
    }
}

fn parse_edges(spec: &str) -> Result<Vec<(u32, u32)>, CliError> {
    let mut edges = Vec::new();
    for token in spec.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        let bad = || CliError::Parse(format!("bad edge token '{token}', expected i-j"));
        let (i, j) = token.split_once('-').ok_or_else(bad)?;
        let i: u32 = i.trim().parse().map_err(|_| bad())?;
        let j: u32 = j.trim().parse().map_err(|_| bad())?;
        edges.push((i, j));
    }
    Ok(edges)
}

fn resolve_graph(args: &GraphArgs) -> Result<Graph, CliError> {
    if let Some(s) = &args.graph6 {
        return parse_graph6(s.trim()).map_err(|e| CliError::Parse(e.to_string()));
    }
    if let Some(m) = args.vertices {
        let edges = parse_edges(args.edges.as_deref().unwrap_or(""))?;
        return Graph::new(m, edges).map_err(|e| CliError::Parse(e.to_string()));
    }
    if let Some(s) = &args.json {
        return serde_json::from_str::<Graph>(s).map_err(|e| CliError::Parse(e.to_string()));
    }
    Err(CliError::Usage(
        "provide a graph: a graph6 string, --vertices (with optional --edges), or --json".into(),
    ))
}

fn resolve_cap(flag: Option<u32>) -> Result<u32, CliError> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var(CAP_ENV) {
        Ok(raw) => raw.trim().parse().map_err(|_| {
            CliError::Usage(format!("{CAP_ENV} must be a nonnegative integer, got '{raw}'"))
        }),
        Err(_) => Ok(DEFAULT_COHOMOLOGY_CAP),
    }
}

fn require_non_csv(format: Format) -> Result<(), CliError> {
    if format == Format::Csv {
        Err(CliError::Usage("csv output is only available for classify".into()))
    } else {
        Ok(())
    }
}

/// Render a coordinate vector as a signed combination of basis labels.
fn vector_expr(sc: &StructureConstants, v: &[Rat]) -> String {
    let mut out = String::new();
    for (k, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let label = &sc.labels()[k];
        let negative = *c < Rat::zero();
        let magnitude = if negative { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if magnitude == rat(1) {
            out.push_str(&label.to_string());
        } else {
            out.push_str(&format!("{magnitude}*{label}"));
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn basis_json(space: &Subspace) -> serde_json::Value {
    let rows: Vec<Vec<String>> = space
        .basis()
        .iter()
        .map(|v| {
            v.iter()
                .map(|c| format!("{}/{}", c.numer(), c.denom()))
                .collect()
        })
        .collect();
    json!(rows)
}

fn cmd_algebra(graph: &GraphArgs, format: Format) -> Result<(), CliError> {
    require_non_csv(format)?;
    let g = resolve_graph(graph)?;
    let sc = graph_algebra(&g);
    let z = center(&sc);
    let d = derived_subalgebra(&sc);
    let l = abelian_factor_dimension(&g);
    match format {
        Format::Json => {
            let mut out = structure_json(&sc);
            let obj = out.as_object_mut().expect("structure report is an object");
            obj.insert("center_basis".into(), basis_json(&z));
            obj.insert("derived_basis".into(), basis_json(&d));
            obj.insert("abelian_factor_dim".into(), json!(l));
            print_json(&out)?;
        }
        Format::Text => {
            let n = sc.dim();
            println!("dim: {n}");
            let labels: Vec<String> = sc.labels().iter().map(|l| l.to_string()).collect();
            println!("basis: {}", labels.join(" "));
            println!("brackets:");
            let mut any = false;
            for i in 1..=n {
                for j in (i + 1)..=n {
                    let b = sc.bracket_basis(i, j);
                    if b.iter().any(|c| !c.is_zero()) {
                        any = true;
                        println!(
                            "  [{}, {}] = {}",
                            sc.labels()[i - 1],
                            sc.labels()[j - 1],
                            vector_expr(&sc, b)
                        );
                    }
                }
            }
            if !any {
                println!("  (abelian)");
            }
            println!("center:");
            for v in z.basis() {
                println!("  {}", vector_expr(&sc, v));
            }
            println!("derived:");
            if d.dim() == 0 {
                println!("  (zero)");
            }
            for v in d.basis() {
                println!("  {}", vector_expr(&sc, v));
            }
            println!("abelian_factor_dim: {l}");
        }
        Format::Csv => unreachable!(),
    }
    Ok(())
}

fn cmd_rigidity(graph: &GraphArgs, method: MethodFlag, format: Format) -> Result<(), CliError> {
    require_non_csv(format)?;
    let g = resolve_graph(graph)?;
    let cap = resolve_cap(None)?;
    let verdict = classify_graph_with_cap(&g, method.into(), cap);
    verify_certificate(&g, &verdict)
        .map_err(|e| CliError::Verify(format!("certificate failed re-verification: {e}")))?;
    if verdict.status != RigidityStatus::Undecided && verdict.status != expected_verdict(&g) {
        return Err(CliError::Verify(format!(
            "decided status {} contradicts the classification theorem",
            verdict.status
        )));
    }
    match format {
        Format::Json => print_json(&verdict_json(&g, &verdict))?,
        Format::Text => {
            println!("status: {}", verdict.status);
            match &verdict.certificate {
                Some(cert) => println!(
                    "certificate: {} ({})",
                    cert.kind_name(),
                    cert.witness_summary()
                ),
                None => println!("certificate: none"),
            }
            println!("three_rigid: {}", three_rigid_flag(&g));
        }
        Format::Csv => unreachable!(),
    }
    Ok(())
}

fn cmd_cohomology(graph: &GraphArgs, cap: Option<u32>, format: Format) -> Result<(), CliError> {
    require_non_csv(format)?;
    let g = resolve_graph(graph)?;
    let cap = resolve_cap(cap)?;
    let report = cohomology_report(&graph_algebra(&g), cap).map_err(|e| match e {
        CohomologyError::CapExceeded { .. } => CliError::Usage(e.to_string()),
        other => CliError::Verify(other.to_string()),
    })?;
    match format {
        Format::Json => {
            print_json(&serde_json::to_value(report).expect("report serializes"))?
        }
        Format::Text => {
            println!("c1_dim: {}", report.c1_dim);
            println!("c2_dim: {}", report.c2_dim);
            println!("c3_dim: {}", report.c3_dim);
            println!("delta1_rank: {}", report.delta1_rank);
            println!("ker_delta2_dim: {}", report.ker_delta2_dim);
            println!("ker_tangency_dim: {}", report.ker_tangency_dim);
            println!("z2_nil_dim: {}", report.z2_nil_dim);
            println!("h2_nil_dim: {}", report.h2_nil_dim);
        }
        Format::Csv => unreachable!(),
    }
    Ok(())
}

fn cmd_classify(
    min_vertices: u32,
    max_vertices: u32,
    method: MethodFlag,
    cap: Option<u32>,
    format: Format,
    out: Option<&PathBuf>,
) -> Result<(), CliError> {
    let cap = resolve_cap(cap)?;
    let report = run_classification(min_vertices, max_vertices, method.into(), cap)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let rendered = match format {
        Format::Csv => csv_report(&report),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json_report(&report))
                .expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => text_report(&report),
    };
    match out {
        Some(path) => std::fs::write(path, &rendered)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{rendered}"),
    }
    let mismatches = report.mismatches();
    if mismatches > 0 {
        for row in report.rows.iter().filter(|r| !r.matched) {
            eprintln!(
                "mismatch: m={} {} decided {} but the classification theorem says {}",
                row.m, row.graph6, row.status, row.expected
            );
        }
        return Err(CliError::Verify(format!(
            "{mismatches} verdicts contradict the classification theorem"
        )));
    }
    if min_vertices <= 2 && max_vertices >= 4 {
        let (ok, diffs) = paper_table_check();
        if !ok {
            for d in &diffs {
                eprintln!("table diff: {d}");
            }
            return Err(CliError::Verify(format!(
                "{} rows disagree with the frozen small-graph table",
                diffs.len()
            )));
        }
    }
    Ok(())
}

fn print_json(value: &serde_json::Value) -> Result<(), CliError> {
    let s = serde_json::to_string_pretty(value).expect("values serialize");
    println!("{s}");
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.cmd {
        Cmd::Algebra { graph, format } => cmd_algebra(graph, *format),
        Cmd::Rigidity {
            graph,
            method,
            format,
        } => cmd_rigidity(graph, *method, *format),
        Cmd::Cohomology { graph, cap, format } => cmd_cohomology(graph, *cap, *format),
        Cmd::Classify {
            min_vertices,
            max_vertices,
            method,
            cap,
            format,
            out,
        } => cmd_classify(
            *min_vertices,
            *max_vertices,
            *method,
            *cap,
            *format,
            out.as_ref(),
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_shorthand() {
        assert_eq!(parse_edges("").unwrap(), vec![]);
        assert_eq!(parse_edges("1-2").unwrap(), vec![(1, 2)]);
        assert_eq!(
            parse_edges(" 1-2 , 3-4 ").unwrap(),
            vec![(1, 2), (3, 4)]
        );
        assert!(parse_edges("1_2").is_err());
        assert!(parse_edges("1-x").is_err());
    }

    #[test]
    fn error_exit_codes() {
        assert_eq!(CliError::Usage(String::new()).exit_code(), 1);
        assert_eq!(CliError::Parse(String::new()).exit_code(), 2);
        assert_eq!(CliError::Verify(String::new()).exit_code(), 3);
    }

    #[test]
    fn vector_rendering() {
        let g = Graph::new(3, vec![(1, 2), (1, 3)]).unwrap();
        let sc = graph_algebra(&g);
        let mut v = vec![Rat::zero(); sc.dim()];
        v[3] = rat(1);
        v[4] = rat(-1);
        assert_eq!(vector_expr(&sc, &v), "a{1,2} - a{1,3}");
        assert_eq!(vector_expr(&sc, &vec![Rat::zero(); sc.dim()]), "0");
    }
}
