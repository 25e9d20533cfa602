//! Command dispatch for the `signcover` binary.
//!
//! Subcommands: `cover` (build and verify a cover), `verify` (check a cover
//! file), `oracle` (exact shortest cover), `gen` (random instances), and
//! `stats` (batch CSV over a directory). Exit codes are the scripting API;
//! every failure also emits one `error=<kind> detail=...` line on stderr.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::cover::{cover_3ec_cubic, BuildTrace, CoverBuildError, CoverOptions};
use crate::graph::{validate_cover, SignedMultigraph};
use crate::io::{
    generate_instance, parse_cover, parse_graph, serialize_cover, serialize_graph, GenOptions,
    ParsedGraph,
};
use crate::oracle::{exact_scc, OracleLimits};

#[derive(Parser)]
#[command(
    name = "signcover",
    about = "Sign-circuit covers of cubic signed graphs: builder, verifier, oracle, generator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a verified sign-circuit cover of a graph file.
    Cover {
        /// Input graph file.
        graph: PathBuf,
        /// Require and use the coloring embedded in the graph file.
        #[arg(long)]
        coloring: bool,
        /// Write the build trace to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the cover here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Verify a cover file against its graph.
    Verify { graph: PathBuf, cover: PathBuf },
    /// Compute the exact shortest sign-circuit cover length.
    Oracle {
        graph: PathBuf,
        /// Enumeration limit on the number of edges.
        #[arg(long, default_value_t = 24)]
        max_edges: usize,
        /// Write the optimal cover to this file.
        #[arg(long)]
        cover_out: Option<PathBuf>,
    },
    /// Generate random cubic signed instances (pairing model).
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        seed: u64,
        /// Keep only flow-admissible instances.
        #[arg(long)]
        flow_admissible: bool,
        /// Keep only 3-edge-colorable instances.
        #[arg(long)]
        colorable: bool,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run the cover pipeline over a directory and write one CSV row per
    /// instance.
    Stats {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        csv: PathBuf,
        /// Run the oracle on instances with at most this many edges
        /// (0 disables it).
        #[arg(long, default_value_t = 20)]
        oracle_max: usize,
    },
}

/// Machine-readable failure: a kind keyword plus detail, mapped to an exit
/// code.
#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub detail: String,
}

impl CliError {
    fn new(kind: &'static str, detail: impl Into<String>) -> CliError {
        CliError {
            kind,
            detail: detail.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            "parse-error" => 2,
            "not-flow-admissible" => 3,
            "not-colorable" => 4,
            "bound-violation" => 5,
            "invalid-cover" => 6,
            "io-error" => 7,
            "gen-error" => 8,
            "oracle-limit" => 9,
            _ => 10,
        }
    }
}

fn build_error(e: CoverBuildError) -> CliError {
    let kind = match &e {
        CoverBuildError::NotFlowAdmissible { .. } => "not-flow-admissible",
        CoverBuildError::NotColorable
        | CoverBuildError::InvalidColoring
        | CoverBuildError::ColoringSearch(_) => "not-colorable",
        CoverBuildError::BoundViolation { .. } => "bound-violation",
        _ => "build-error",
    };
    CliError::new(kind, e.to_string())
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::new("io-error", format!("{}: {e}", path.display())))
}

/// Writes atomically: temp file in the same directory, then rename.
fn write_atomic(path: &Path, content: &str) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, content)
        .and_then(|()| fs::rename(&tmp, path))
        .map_err(|e| CliError::new("io-error", format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<ParsedGraph, CliError> {
    let text = read(path)?;
    parse_graph(&text).map_err(|e| CliError::new("parse-error", format!("{}: {e}", path.display())))
}

/// Entry point used by `main`; returns the process exit code.
pub fn run(args: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own help/usage text.
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error={} detail={:?}", e.kind, e.detail);
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Cover {
            graph,
            coloring,
            trace,
            output,
        } => run_cover(&graph, coloring, trace.as_deref(), output.as_deref()),
        Command::Verify { graph, cover } => run_verify(&graph, &cover),
        Command::Oracle {
            graph,
            max_edges,
            cover_out,
        } => run_oracle(&graph, max_edges, cover_out.as_deref()),
        Command::Gen {
            n,
            p,
            seed,
            flow_admissible,
            colorable,
            count,
            out,
        } => run_gen(n, p, seed, flow_admissible, colorable, count, &out),
        Command::Stats {
            dir,
            csv,
            oracle_max,
        } => run_stats(&dir, &csv, oracle_max),
    }
}

fn trace_text(trace: &BuildTrace) -> String {
    let mut out = String::new();
    out.push_str(&format!("case {}\n", trace.case));
    out.push_str(&format!("length {}\n", trace.achieved_length));
    for c in &trace.log.checks {
        out.push_str(&format!("check {c}\n"));
    }
    for n in &trace.log.notes {
        out.push_str(&format!("note {n}\n"));
    }
    out.push_str("coloring");
    for c in trace.coloring.classes() {
        out.push_str(&format!(" {c}"));
    }
    out.push('\n');
    out
}

fn run_cover(
    graph_path: &Path,
    require_coloring: bool,
    trace_path: Option<&Path>,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let parsed = load_graph(graph_path)?;
    if require_coloring && parsed.coloring.is_none() {
        return Err(CliError::new(
            "not-colorable",
            "--coloring given but the graph file carries no colors",
        ));
    }
    let (cover, trace) = cover_3ec_cubic(
        &parsed.graph,
        parsed.coloring.as_ref(),
        &CoverOptions::default(),
    )
    .map_err(build_error)?;
    let text = serialize_cover(&cover);
    // Round-trip through the verifier before reporting success.
    let reparsed = parse_cover(&parsed.graph, &text)
        .map_err(|e| CliError::new("invalid-cover", format!("round-trip failed: {e}")))?;
    if !validate_cover(&parsed.graph, &reparsed).is_valid() {
        return Err(CliError::new("invalid-cover", "round-trip cover invalid"));
    }
    let m = parsed.graph.edge_count();
    eprintln!(
        "graph={} n={} m={} case={} length={} bound=20*{}/9 ok=true",
        graph_path.display(),
        parsed.graph.vertex_count(),
        m,
        trace.case,
        cover.length(),
        m
    );
    match output {
        Some(path) => write_atomic(path, &text)?,
        None => print!("{text}"),
    }
    if let Some(path) = trace_path {
        write_atomic(path, &trace_text(&trace))?;
    }
    Ok(())
}

fn run_verify(graph_path: &Path, cover_path: &Path) -> Result<(), CliError> {
    let parsed = load_graph(graph_path)?;
    let text = read(cover_path)?;
    let cover = parse_cover(&parsed.graph, &text)
        .map_err(|e| CliError::new("parse-error", format!("{}: {e}", cover_path.display())))?;
    let report = validate_cover(&parsed.graph, &cover);
    if report.is_valid() {
        eprintln!(
            "cover={} length={} covered={} ok=true",
            cover_path.display(),
            cover.length(),
            cover.covered_edges().len()
        );
        Ok(())
    } else {
        let mut detail = String::new();
        if !report.uncovered.is_empty() {
            detail.push_str(&format!("uncovered={:?} ", report.uncovered));
        }
        for (i, r) in report.member_reports.iter().enumerate() {
            if !r.is_valid() {
                detail.push_str(&format!("member{}={:?} ", i, r.violations));
            }
        }
        Err(CliError::new("invalid-cover", detail.trim().to_string()))
    }
}

fn run_oracle(
    graph_path: &Path,
    max_edges: usize,
    cover_out: Option<&Path>,
) -> Result<(), CliError> {
    let parsed = load_graph(graph_path)?;
    let limits = OracleLimits {
        max_edges,
        ..OracleLimits::default()
    };
    let result = exact_scc(&parsed.graph, &limits).map_err(|e| match e {
        crate::oracle::OracleError::NotFlowAdmissible { .. } => {
            CliError::new("not-flow-admissible", e.to_string())
        }
        crate::oracle::OracleError::TooManyEdges { .. } => {
            CliError::new("oracle-limit", e.to_string())
        }
    })?;
    if !result.optimal {
        return Err(CliError::new(
            "oracle-limit",
            format!("search budget exhausted; best bound {}", result.length),
        ));
    }
    eprintln!(
        "graph={} scc={} members={} nodes={} optimal=true",
        graph_path.display(),
        result.length,
        result.cover.members().len(),
        result.nodes
    );
    println!("{}", result.length);
    if let Some(path) = cover_out {
        write_atomic(path, &serialize_cover(&result.cover))?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_gen(
    n: usize,
    p: f64,
    seed: u64,
    flow_admissible: bool,
    colorable: bool,
    count: usize,
    out: &Path,
) -> Result<(), CliError> {
    fs::create_dir_all(out)
        .map_err(|e| CliError::new("io-error", format!("{}: {e}", out.display())))?;
    for k in 0..count {
        let mut opts = GenOptions::new(n, p, seed.wrapping_add(k as u64));
        opts.require_flow_admissible = flow_admissible;
        opts.require_colorable = colorable;
        let g = generate_instance(&opts).map_err(|e| CliError::new("gen-error", e.to_string()))?;
        let name = format!("gen_n{}_p{:03}_s{}_{}.sg", n, (p * 100.0).round() as u32, seed, k);
        let path = out.join(name);
        write_atomic(&path, &serialize_graph(&g, None))?;
        println!("{}", path.display());
        eprintln!(
            "instance={} n={} m={} negatives={}",
            path.display(),
            g.vertex_count(),
            g.edge_count(),
            g.negative_edge_ids().len()
        );
    }
    Ok(())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn run_stats(dir: &Path, csv: &Path, oracle_max: usize) -> Result<(), CliError> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::new("io-error", format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "sg"))
        .collect();
    files.sort();
    let mut rows = String::from("file,n,m,case,length,bound,oracle,ratio_frac,ratio_dec\n");
    let mut failures = 0usize;
    for file in &files {
        let row = stats_row(file, oracle_max);
        if row.contains(",error:") {
            failures += 1;
        }
        rows.push_str(&row);
    }
    write_atomic(csv, &rows)?;
    eprintln!(
        "dir={} instances={} failures={} csv={}",
        dir.display(),
        files.len(),
        failures,
        csv.display()
    );
    if failures > 0 {
        return Err(CliError::new(
            "build-error",
            format!("{failures} instances failed; see {}", csv.display()),
        ));
    }
    Ok(())
}

fn stats_row(file: &Path, oracle_max: usize) -> String {
    let name = file.display();
    let parsed = match load_graph(file) {
        Ok(p) => p,
        Err(e) => return format!("{name},,,error:{},,,,,\n", e.kind),
    };
    let g = &parsed.graph;
    let (n, m) = (g.vertex_count(), g.edge_count());
    let bound = 20.0 * m as f64 / 9.0;
    match cover_3ec_cubic(g, parsed.coloring.as_ref(), &CoverOptions::default()) {
        Ok((cover, trace)) => {
            let length = cover.length();
            debug_assert!(9 * length <= 20 * m);
            let oracle = if oracle_max > 0 && m <= oracle_max {
                oracle_length(g, oracle_max)
            } else {
                None
            };
            let d = gcd(length as u64, m as u64);
            format!(
                "{name},{n},{m},{},{length},{bound:.4},{},{}/{},{:.4}\n",
                trace.case,
                oracle.map_or(String::new(), |l| l.to_string()),
                length as u64 / d,
                m as u64 / d,
                length as f64 / m as f64
            )
        }
        Err(e) => {
            let kind = build_error(e).kind;
            format!("{name},{n},{m},error:{kind},,{bound:.4},,,\n")
        }
    }
}

fn oracle_length(g: &SignedMultigraph, max_edges: usize) -> Option<usize> {
    let limits = OracleLimits {
        max_edges,
        ..OracleLimits::default()
    };
    match exact_scc(g, &limits) {
        Ok(r) if r.optimal => Some(r.length),
        _ => None,
    }
}
