//! Ground truth at desk scale: complete sign-circuit enumeration, the
//! definitional flow-admissibility test (every edge lies in some
//! sign-circuit), and exact shortest sign-circuit covers by branch and bound.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{
    circuit_sign, validate_sign_circuit, Circuit, Cover, EdgeId, Path, Sign, SignCircuit,
    SignedMultigraph, VertexId,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {m} edges, above the enumeration limit {limit}")]
    TooManyEdges { m: usize, limit: usize },
    #[error("graph is not flow-admissible: edge {edge} lies in no sign-circuit")]
    NotFlowAdmissible { edge: EdgeId },
}

/// Enumeration and search limits. The default path cap (one per vertex
/// count) never cuts off a simple path, so optimality claims are unaffected;
/// a smaller custom cap records its participation in the catalog.
#[derive(Debug, Clone)]
pub struct OracleLimits {
    pub max_edges: usize,
    pub node_budget: u64,
    pub path_cap: Option<usize>,
}

impl Default for OracleLimits {
    fn default() -> OracleLimits {
        OracleLimits {
            max_edges: 24,
            node_budget: 50_000_000,
            path_cap: None,
        }
    }
}

/// Every circuit of the graph exactly once, in canonical form, ordered by
/// (smallest vertex, traversal). Includes loops and parallel-pair 2-circuits.
pub fn enumerate_circuits(
    g: &SignedMultigraph,
    limits: &OracleLimits,
) -> Result<Vec<Circuit>, OracleError> {
    if g.edge_count() > limits.max_edges {
        return Err(OracleError::TooManyEdges {
            m: g.edge_count(),
            limit: limits.max_edges,
        });
    }
    let mut out = Vec::new();
    let mut used_edge = vec![false; g.edge_count()];
    let mut on_path = vec![false; g.vertex_count()];
    for start in 0..g.vertex_count() {
        // Loops at the start vertex are length-1 circuits.
        for &e in g.incident_edges(start) {
            let edge = g.edge(e);
            if edge.is_loop() && edge.u == start {
                out.push(Circuit::from_walk(g, vec![e], vec![start]));
            }
        }
        // Simple paths from `start` through vertices > start; closing edges
        // back to `start` complete circuits. Each circuit arises twice (once
        // per direction), deduplicated by a canonical-direction test.
        on_path[start] = true;
        let mut path_edges: Vec<EdgeId> = Vec::new();
        let mut path_vertices: Vec<VertexId> = vec![start];
        dfs_circuits(
            g,
            start,
            start,
            &mut used_edge,
            &mut on_path,
            &mut path_edges,
            &mut path_vertices,
            &mut out,
        );
        on_path[start] = false;
    }
    // Loops were emitted per incidence duplication; dedup identical entries.
    out.sort();
    out.dedup();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn dfs_circuits(
    g: &SignedMultigraph,
    start: VertexId,
    at: VertexId,
    used_edge: &mut Vec<bool>,
    on_path: &mut Vec<bool>,
    path_edges: &mut Vec<EdgeId>,
    path_vertices: &mut Vec<VertexId>,
    out: &mut Vec<Circuit>,
) {
    for &e in g.incident_edges(at) {
        if used_edge[e] {
            continue;
        }
        let edge = g.edge(e);
        if edge.is_loop() {
            continue;
        }
        let w = edge.other_endpoint(at);
        if w == start {
            let len = path_edges.len() + 1;
            let keep = match len {
                1 => false, // loop edges handled at the start vertex
                2 => path_edges[0] < e,
                _ => path_vertices[1] < at,
            };
            if keep {
                let mut edges = path_edges.clone();
                edges.push(e);
                out.push(Circuit::from_walk(g, edges, path_vertices.clone()));
            }
            continue;
        }
        if w < start || on_path[w] {
            continue;
        }
        used_edge[e] = true;
        on_path[w] = true;
        path_edges.push(e);
        path_vertices.push(w);
        dfs_circuits(g, start, w, used_edge, on_path, path_edges, path_vertices, out);
        path_edges.pop();
        path_vertices.pop();
        on_path[w] = false;
        used_edge[e] = false;
    }
}

/// One catalog entry: the member, its edge set as a bitmask, and its length.
#[derive(Debug, Clone)]
pub struct CatalogMember {
    pub sign_circuit: SignCircuit,
    pub mask: u64,
    pub length: usize,
}

/// The complete sign-circuit catalog of a graph within enumeration limits:
/// balanced circuits, short barbells, long barbells (one per connecting
/// path), and a per-edge incidence index.
#[derive(Debug, Clone)]
pub struct SignCircuitCatalog {
    pub circuits: Vec<Circuit>,
    pub balanced: Vec<usize>,
    pub unbalanced: Vec<usize>,
    pub members: Vec<CatalogMember>,
    pub per_edge: Vec<Vec<usize>>,
    pub path_cap_hit: bool,
}

impl SignCircuitCatalog {
    pub fn balanced_circuit_count(&self) -> usize {
        self.balanced.len()
    }

    pub fn barbell_count(&self) -> usize {
        self.members.len() - self.balanced.len()
    }
}

fn edge_mask(ids: &[EdgeId]) -> u64 {
    ids.iter().fold(0u64, |m, &e| m | (1u64 << e))
}

/// Enumerates the full catalog. Barbell connecting paths are simple and
/// internally avoid both circuits; with the default cap every such path is
/// enumerated.
pub fn enumerate_sign_circuits(
    g: &SignedMultigraph,
    limits: &OracleLimits,
) -> Result<SignCircuitCatalog, OracleError> {
    let circuits = enumerate_circuits(g, limits)?;
    let mut balanced = Vec::new();
    let mut unbalanced = Vec::new();
    for (i, c) in circuits.iter().enumerate() {
        match circuit_sign(g, c) {
            Sign::Positive => balanced.push(i),
            Sign::Negative => unbalanced.push(i),
        }
    }
    let mut members: Vec<CatalogMember> = balanced
        .iter()
        .map(|&i| CatalogMember {
            sign_circuit: SignCircuit::Balanced(circuits[i].clone()),
            mask: edge_mask(circuits[i].edge_ids()),
            length: circuits[i].len(),
        })
        .collect();

    let mut path_cap_hit = false;
    let cap = limits.path_cap.unwrap_or(g.vertex_count().max(1));
    for (a, &i) in unbalanced.iter().enumerate() {
        for &j in unbalanced.iter().skip(a + 1) {
            let (ci, cj) = (&circuits[i], &circuits[j]);
            let shared_v: Vec<VertexId> = ci
                .vertex_sequence()
                .iter()
                .filter(|v| cj.contains_vertex(**v))
                .copied()
                .collect();
            let shares_edge = ci.edge_ids().iter().any(|e| cj.contains_edge(*e));
            if shares_edge {
                continue;
            }
            if shared_v.len() == 1 {
                let sc = SignCircuit::ShortBarbell {
                    first: ci.clone(),
                    second: cj.clone(),
                    shared_vertex: shared_v[0],
                };
                let mask = edge_mask(&sc.edge_ids());
                members.push(CatalogMember {
                    length: sc.length(),
                    sign_circuit: sc,
                    mask,
                });
            } else if shared_v.is_empty() {
                for path in connecting_paths(g, ci, cj, cap, &mut path_cap_hit) {
                    let sc = SignCircuit::LongBarbell {
                        first: ci.clone(),
                        second: cj.clone(),
                        path,
                    };
                    let mask = edge_mask(&sc.edge_ids());
                    members.push(CatalogMember {
                        length: sc.length(),
                        sign_circuit: sc,
                        mask,
                    });
                }
            }
        }
    }
    debug_assert!(members
        .iter()
        .all(|m| validate_sign_circuit(g, &m.sign_circuit).is_valid()));

    let mut per_edge = vec![Vec::new(); g.edge_count()];
    for (k, m) in members.iter().enumerate() {
        for e in 0..g.edge_count() {
            if m.mask & (1 << e) != 0 {
                per_edge[e].push(k);
            }
        }
    }
    Ok(SignCircuitCatalog {
        circuits,
        balanced,
        unbalanced,
        members,
        per_edge,
        path_cap_hit,
    })
}

/// All simple paths from `ci` to `cj` whose interiors avoid both circuits.
fn connecting_paths(
    g: &SignedMultigraph,
    ci: &Circuit,
    cj: &Circuit,
    cap: usize,
    cap_hit: &mut bool,
) -> Vec<Path> {
    let mut blocked = vec![false; g.vertex_count()];
    for &v in ci.vertex_sequence().iter().chain(cj.vertex_sequence()) {
        blocked[v] = true;
    }
    let mut banned_edge = vec![false; g.edge_count()];
    for &e in ci.edge_ids().iter().chain(cj.edge_ids()) {
        banned_edge[e] = true;
    }
    let mut out = Vec::new();
    for &a in ci.vertex_sequence() {
        let mut edges = Vec::new();
        let mut vertices = vec![a];
        let mut used = vec![false; g.edge_count()];
        dfs_paths(
            g, a, cj, cap, cap_hit, &mut blocked, &banned_edge, &mut used, &mut edges,
            &mut vertices, &mut out,
        );
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn dfs_paths(
    g: &SignedMultigraph,
    at: VertexId,
    target: &Circuit,
    cap: usize,
    cap_hit: &mut bool,
    blocked: &mut Vec<bool>,
    banned_edge: &[bool],
    used: &mut Vec<bool>,
    edges: &mut Vec<EdgeId>,
    vertices: &mut Vec<VertexId>,
    out: &mut Vec<Path>,
) {
    for &e in g.incident_edges(at) {
        if used[e] || banned_edge[e] {
            continue;
        }
        let edge = g.edge(e);
        if edge.is_loop() {
            continue;
        }
        let w = edge.other_endpoint(at);
        if target.contains_vertex(w) {
            let mut pe = edges.clone();
            pe.push(e);
            let mut pv = vertices.clone();
            pv.push(w);
            out.push(Path::new(pe, pv));
            continue;
        }
        if blocked[w] {
            continue;
        }
        if edges.len() + 1 >= cap {
            *cap_hit = true;
            continue;
        }
        used[e] = true;
        blocked[w] = true;
        edges.push(e);
        vertices.push(w);
        dfs_paths(g, w, target, cap, cap_hit, blocked, banned_edge, used, edges, vertices, out);
        vertices.pop();
        edges.pop();
        blocked[w] = false;
        used[e] = false;
    }
}

/// Definitional flow-admissibility: every edge lies in at least one catalog
/// member.
pub fn flow_admissible_by_definition(g: &SignedMultigraph) -> Result<bool, OracleError> {
    flow_admissible_by_definition_with(g, &OracleLimits::default())
}

pub fn flow_admissible_by_definition_with(
    g: &SignedMultigraph,
    limits: &OracleLimits,
) -> Result<bool, OracleError> {
    let catalog = enumerate_sign_circuits(g, limits)?;
    Ok(catalog.per_edge.iter().all(|c| !c.is_empty()))
}

/// Result of the exact search: the optimum (or the best bound found when a
/// budget binds, flagged non-optimal).
#[derive(Debug, Clone)]
pub struct SccResult {
    pub length: usize,
    pub cover: Cover,
    pub optimal: bool,
    pub nodes: u64,
    pub path_cap_hit: bool,
}

/// Exact shortest sign-circuit cover by branch and bound over the catalog.
///
/// Branches on the uncovered edge with the fewest candidate members; the
/// lower bound is the number of uncovered edges. Among optimal covers the
/// lexicographically least member-index list is returned. Optimal covers
/// never repeat a member, so the search is over member sets.
pub fn exact_scc(g: &SignedMultigraph, limits: &OracleLimits) -> Result<SccResult, OracleError> {
    let catalog = enumerate_sign_circuits(g, limits)?;
    for (e, cands) in catalog.per_edge.iter().enumerate() {
        if cands.is_empty() {
            return Err(OracleError::NotFlowAdmissible { edge: e });
        }
    }
    let m = g.edge_count();
    let full: u64 = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };

    // Greedy warm start primes the upper bound.
    let mut greedy: Vec<usize> = Vec::new();
    let mut uncovered = full;
    while uncovered != 0 {
        let best = (0..catalog.members.len())
            .max_by_key(|&k| {
                let gain = (catalog.members[k].mask & uncovered).count_ones() as i64;
                (gain, -(catalog.members[k].length as i64), -(k as i64))
            })
            .unwrap();
        if catalog.members[best].mask & uncovered == 0 {
            break;
        }
        greedy.push(best);
        uncovered &= !catalog.members[best].mask;
    }
    greedy.sort_unstable();
    let mut best_len: usize = greedy.iter().map(|&k| catalog.members[k].length).sum();
    let mut best_members = greedy;

    let mut nodes: u64 = 0;
    let mut chosen: Vec<usize> = Vec::new();
    let mut exhausted = true;
    branch(
        g,
        &catalog,
        full,
        0,
        &mut chosen,
        &mut best_len,
        &mut best_members,
        &mut nodes,
        limits.node_budget,
        &mut exhausted,
    );

    let members: Vec<SignCircuit> = best_members
        .iter()
        .map(|&k| catalog.members[k].sign_circuit.clone())
        .collect();
    let target: BTreeSet<EdgeId> = (0..m).collect();
    let cover = Cover::new(members, target);
    debug_assert!(crate::graph::validate_cover(g, &cover).is_valid());
    Ok(SccResult {
        length: best_len,
        cover,
        optimal: exhausted && !catalog.path_cap_hit,
        nodes,
        path_cap_hit: catalog.path_cap_hit,
    })
}

#[allow(clippy::too_many_arguments)]
fn branch(
    g: &SignedMultigraph,
    catalog: &SignCircuitCatalog,
    uncovered: u64,
    length: usize,
    chosen: &mut Vec<usize>,
    best_len: &mut usize,
    best_members: &mut Vec<usize>,
    nodes: &mut u64,
    budget: u64,
    exhausted: &mut bool,
) {
    if uncovered == 0 {
        let mut sorted = chosen.clone();
        sorted.sort_unstable();
        if length < *best_len || (length == *best_len && sorted < *best_members) {
            *best_len = length;
            *best_members = sorted;
        }
        return;
    }
    *nodes += 1;
    if *nodes > budget {
        *exhausted = false;
        return;
    }
    // Lower bound: each additional member covers at most `length` new edges
    // per unit of length, so at least `uncovered.count_ones()` more length
    // is needed.
    if length + uncovered.count_ones() as usize > *best_len {
        return;
    }
    // Branch on the uncovered edge with the fewest candidates.
    let mut branch_edge = usize::MAX;
    let mut fewest = usize::MAX;
    for e in 0..g.edge_count() {
        if uncovered & (1 << e) != 0 && catalog.per_edge[e].len() < fewest {
            fewest = catalog.per_edge[e].len();
            branch_edge = e;
        }
    }
    for &k in &catalog.per_edge[branch_edge] {
        if chosen.contains(&k) {
            continue;
        }
        chosen.push(k);
        branch(
            g,
            catalog,
            uncovered & !catalog.members[k].mask,
            length + catalog.members[k].length,
            chosen,
            best_len,
            best_members,
            nodes,
            budget,
            exhausted,
        );
        chosen.pop();
    }
}
