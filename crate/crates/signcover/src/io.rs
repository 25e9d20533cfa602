//! Text file formats and the random instance generator.
//!
//! Graph files: a header `n m`, then `m` lines `u v s [c]` with sign `s` in
//! `{+, -}` and optional color `c` in `{R, B, Y}`; `#` starts a comment and
//! vertices are 0-indexed. Edge ids follow file order. Colors must be present
//! on all edges or none.
//!
//! Cover files: one member per line, `circuit e1 e2 ...` or
//! `barbell e.. | e.. | e..` (first circuit, connecting path — possibly
//! empty, second circuit), then a trailing summary `length L of E target T`.

use std::collections::BTreeSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::analysis::is_flow_admissible;
use crate::coloring::{find_coloring, validate_coloring, ColorClass, EdgeColoring3};
use crate::graph::{Circuit, Cover, EdgeId, Path, Sign, SignCircuit, SignedMultigraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// Lines with comments stripped, keeping original line numbers (1-based).
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| {
            let l = match l.find('#') {
                Some(p) => &l[..p],
                None => l,
            };
            (i + 1, l.trim())
        })
        .filter(|(_, l)| !l.is_empty())
        .collect()
}

#[derive(Debug, Clone)]
pub struct ParsedGraph {
    pub graph: SignedMultigraph,
    pub coloring: Option<EdgeColoring3>,
}

/// Parses a graph file; a coloring column, when present, is validated.
pub fn parse_graph(text: &str) -> Result<ParsedGraph, ParseError> {
    let lines = content_lines(text);
    let Some(&(hline, header)) = lines.first() else {
        return Err(err(1, "empty file"));
    };
    let mut it = header.split_whitespace();
    let n: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| err(hline, "header must be `n m`"))?;
    let m: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| err(hline, "header must be `n m`"))?;
    if it.next().is_some() {
        return Err(err(hline, "header must be exactly `n m`"));
    }
    let body = &lines[1..];
    if body.len() != m {
        let where_ = body.last().map_or(hline, |&(l, _)| l);
        return Err(err(
            where_,
            format!("expected {m} edge lines, found {}", body.len()),
        ));
    }
    let mut edges = Vec::with_capacity(m);
    let mut colors: Vec<Option<ColorClass>> = Vec::with_capacity(m);
    for &(lno, line) in body {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 3 && tokens.len() != 4 {
            return Err(err(lno, "edge line must be `u v s [c]`"));
        }
        let u: usize = tokens[0]
            .parse()
            .map_err(|_| err(lno, format!("bad vertex `{}`", tokens[0])))?;
        let v: usize = tokens[1]
            .parse()
            .map_err(|_| err(lno, format!("bad vertex `{}`", tokens[1])))?;
        let sign = Sign::from_symbol(tokens[2])
            .ok_or_else(|| err(lno, format!("bad sign `{}` (want + or -)", tokens[2])))?;
        if u >= n || v >= n {
            return Err(err(lno, format!("endpoint out of range (n = {n})")));
        }
        edges.push((u, v, sign));
        colors.push(match tokens.get(3) {
            Some(t) => Some(
                ColorClass::from_symbol(t)
                    .ok_or_else(|| err(lno, format!("bad color `{t}` (want R, B or Y)")))?,
            ),
            None => None,
        });
    }
    let graph = SignedMultigraph::new(n, &edges)
        .map_err(|e| err(hline, format!("invalid graph: {e}")))?;
    let colored = colors.iter().filter(|c| c.is_some()).count();
    let coloring = if colored == 0 {
        None
    } else if colored == m {
        let f = EdgeColoring3::new(colors.into_iter().map(|c| c.unwrap()).collect());
        let report = validate_coloring(&graph, &f)
            .map_err(|e| err(hline, format!("coloring rejected: {e}")))?;
        if !report.is_valid() {
            let v = &report.violations[0];
            return Err(err(
                hline,
                format!(
                    "coloring not proper at vertex {} (class {} repeated)",
                    v.vertex, v.class
                ),
            ));
        }
        Some(f)
    } else {
        return Err(err(
            hline,
            "colors must be present on all edges or on none",
        ));
    };
    Ok(ParsedGraph { graph, coloring })
}

pub fn serialize_graph(g: &SignedMultigraph, coloring: Option<&EdgeColoring3>) -> String {
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", g.vertex_count(), g.edge_count()));
    for e in g.edges() {
        match coloring {
            Some(f) => out.push_str(&format!(
                "{} {} {} {}\n",
                e.u,
                e.v,
                e.sign.symbol(),
                f.class_of(e.id).symbol()
            )),
            None => out.push_str(&format!("{} {} {}\n", e.u, e.v, e.sign.symbol())),
        }
    }
    out
}

/// Parses a cover file against its host graph. The target is taken to be all
/// edges of the graph; the summary line is cross-checked against the members.
pub fn parse_cover(g: &SignedMultigraph, text: &str) -> Result<Cover, ParseError> {
    let lines = content_lines(text);
    let mut members = Vec::new();
    let mut summary: Option<(usize, usize, usize)> = None;
    for &(lno, line) in &lines {
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("circuit") => {
                let ids = parse_ids(lno, tokens)?;
                let c = Circuit::from_edge_cycle(g, &ids)
                    .map_err(|e| err(lno, format!("bad circuit: {e}")))?;
                members.push(SignCircuit::Balanced(c));
            }
            Some("barbell") => {
                let rest = line.trim_start_matches("barbell");
                let parts: Vec<&str> = rest.split('|').collect();
                if parts.len() != 3 {
                    return Err(err(lno, "barbell needs `c1 | path | c2` sections"));
                }
                let first = parse_ids(lno, parts[0].split_whitespace())?;
                let path_ids = parse_ids(lno, parts[1].split_whitespace())?;
                let second = parse_ids(lno, parts[2].split_whitespace())?;
                let first = Circuit::from_edge_cycle(g, &first)
                    .map_err(|e| err(lno, format!("bad first circuit: {e}")))?;
                let second = Circuit::from_edge_cycle(g, &second)
                    .map_err(|e| err(lno, format!("bad second circuit: {e}")))?;
                members.push(assemble_barbell(g, first, path_ids, second, lno)?);
            }
            Some("length") => {
                let rest: Vec<&str> = line.split_whitespace().collect();
                // length L of E target T
                if rest.len() != 6 || rest[2] != "of" || rest[4] != "target" {
                    return Err(err(lno, "summary must be `length L of E target T`"));
                }
                let l = rest[1].parse().map_err(|_| err(lno, "bad length"))?;
                let e = rest[3].parse().map_err(|_| err(lno, "bad edge count"))?;
                let t = rest[5].parse().map_err(|_| err(lno, "bad target count"))?;
                summary = Some((l, e, t));
            }
            Some(other) => return Err(err(lno, format!("unknown member kind `{other}`"))),
            None => {}
        }
    }
    let target: BTreeSet<EdgeId> = (0..g.edge_count()).collect();
    let cover = Cover::new(members, target);
    if let Some((l, e, _t)) = summary {
        if l != cover.length() {
            return Err(err(
                0,
                format!("summary length {l} does not match members ({})", cover.length()),
            ));
        }
        if e != cover.covered_edges().len() {
            return Err(err(
                0,
                format!(
                    "summary edge count {e} does not match members ({})",
                    cover.covered_edges().len()
                ),
            ));
        }
    }
    Ok(cover)
}

fn parse_ids<'a>(
    lno: usize,
    tokens: impl Iterator<Item = &'a str>,
) -> Result<Vec<EdgeId>, ParseError> {
    tokens
        .map(|t| t.parse().map_err(|_| err(lno, format!("bad edge id `{t}`"))))
        .collect()
}

/// Reconstructs a barbell member from its parsed pieces. An empty path means
/// a short barbell; the shared vertex is recovered from the circuits.
fn assemble_barbell(
    g: &SignedMultigraph,
    first: Circuit,
    path_ids: Vec<EdgeId>,
    second: Circuit,
    lno: usize,
) -> Result<SignCircuit, ParseError> {
    if path_ids.is_empty() {
        let shared: Vec<_> = first
            .vertex_sequence()
            .iter()
            .filter(|v| second.contains_vertex(**v))
            .copied()
            .collect();
        if shared.len() != 1 {
            return Err(err(lno, "short barbell circuits must share one vertex"));
        }
        return Ok(SignCircuit::ShortBarbell {
            first,
            second,
            shared_vertex: shared[0],
        });
    }
    // Orient the path from the first circuit toward the second.
    let path = chain_path(g, &path_ids, &first, lno)?;
    Ok(SignCircuit::LongBarbell {
        first,
        second,
        path,
    })
}

fn chain_path(
    g: &SignedMultigraph,
    ids: &[EdgeId],
    start_circuit: &Circuit,
    lno: usize,
) -> Result<Path, ParseError> {
    for &e in ids {
        if e >= g.edge_count() {
            return Err(err(lno, format!("edge {e} out of range")));
        }
    }
    let first = g.edge(ids[0]);
    let start = if start_circuit.contains_vertex(first.u) {
        first.u
    } else if start_circuit.contains_vertex(first.v) {
        first.v
    } else {
        return Err(err(lno, "path does not start on the first circuit"));
    };
    let mut vertices = vec![start];
    let mut at = start;
    for &e in ids {
        let edge = g.edge(e);
        if edge.u != at && edge.v != at {
            return Err(err(lno, format!("path edge {e} does not continue at {at}")));
        }
        at = edge.other_endpoint(at);
        vertices.push(at);
    }
    Ok(Path::new(ids.to_vec(), vertices))
}

pub fn serialize_cover(cover: &Cover) -> String {
    let mut out = String::new();
    for m in cover.members() {
        match m {
            SignCircuit::Balanced(c) => {
                out.push_str("circuit");
                for e in c.edge_ids() {
                    out.push_str(&format!(" {e}"));
                }
                out.push('\n');
            }
            SignCircuit::ShortBarbell { first, second, .. } => {
                push_barbell(&mut out, first, &[], second);
            }
            SignCircuit::LongBarbell {
                first,
                second,
                path,
            } => {
                push_barbell(&mut out, first, path.edge_ids(), second);
            }
        }
    }
    out.push_str(&format!(
        "length {} of {} target {}\n",
        cover.length(),
        cover.covered_edges().len(),
        cover.target_edges().len()
    ));
    out
}

fn push_barbell(out: &mut String, first: &Circuit, path: &[EdgeId], second: &Circuit) {
    out.push_str("barbell");
    for e in first.edge_ids() {
        out.push_str(&format!(" {e}"));
    }
    out.push_str(" |");
    for e in path {
        out.push_str(&format!(" {e}"));
    }
    out.push_str(" |");
    for e in second.edge_ids() {
        out.push_str(&format!(" {e}"));
    }
    out.push('\n');
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("order must be even and at least 4, got {0}")]
    BadOrder(usize),
    #[error("retry budget exhausted after {attempts} attempts")]
    RetriesExhausted { attempts: u64 },
}

#[derive(Debug, Clone)]
pub struct GenOptions {
    pub n: usize,
    pub negative_probability: f64,
    pub seed: u64,
    pub require_flow_admissible: bool,
    pub require_colorable: bool,
    pub max_attempts: u64,
    pub coloring_budget: u64,
}

impl GenOptions {
    pub fn new(n: usize, negative_probability: f64, seed: u64) -> GenOptions {
        GenOptions {
            n,
            negative_probability,
            seed,
            require_flow_admissible: false,
            require_colorable: false,
            max_attempts: 20_000,
            coloring_budget: 10_000_000,
        }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

/// Random cubic simple graph by the pairing model with rejection of loops and
/// parallel edges, signs independently negative with the given probability.
/// Filters retry with an incremented sub-seed until success or the retry
/// budget runs out. Fully deterministic in `(n, p, seed)`.
pub fn generate_instance(opts: &GenOptions) -> Result<SignedMultigraph, GenError> {
    if opts.n < 4 || opts.n % 2 != 0 {
        return Err(GenError::BadOrder(opts.n));
    }
    for attempt in 0..opts.max_attempts {
        let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(opts.seed) ^ splitmix64(attempt));
        let Some(mut pairs) = cubic_pairing(opts.n, &mut rng) else {
            continue;
        };
        pairs.sort_unstable();
        let edges: Vec<(usize, usize, Sign)> = pairs
            .into_iter()
            .map(|(u, v)| {
                let sign = if rng.gen_bool(opts.negative_probability) {
                    Sign::Negative
                } else {
                    Sign::Positive
                };
                (u, v, sign)
            })
            .collect();
        let g = SignedMultigraph::new(opts.n, &edges).expect("generator endpoints in range");
        if !g.is_connected() {
            continue;
        }
        if opts.require_flow_admissible && !is_flow_admissible(&g).admissible {
            continue;
        }
        if opts.require_colorable {
            match find_coloring(&g, opts.coloring_budget) {
                Ok(Some(_)) => {}
                _ => continue,
            }
        }
        return Ok(g);
    }
    Err(GenError::RetriesExhausted {
        attempts: opts.max_attempts,
    })
}

/// One pairing-model draw: three stubs per vertex, random perfect matching of
/// stubs, rejected unless it forms a simple graph.
fn cubic_pairing(n: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(usize, usize)>> {
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| [v, v, v]).collect();
    for _ in 0..400 {
        stubs.shuffle(rng);
        let mut seen = BTreeSet::new();
        let mut edges = Vec::with_capacity(3 * n / 2);
        let mut ok = true;
        for pair in stubs.chunks(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a == b || !seen.insert((a, b)) {
                ok = false;
                break;
            }
            edges.push((a, b));
        }
        if ok {
            return Some(edges);
        }
    }
    None
}
