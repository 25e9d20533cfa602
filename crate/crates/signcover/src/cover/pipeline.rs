//! The end-to-end cover pipeline for flow-admissible, 3-edge-colorable cubic
//! signed graphs, certified at `9 * length <= 20 * |E|`.
//!
//! After normalizing the coloring so the first two classes have equal
//! negativity parity, the first two-factor either contains an unbalanced
//! circuit (case 1: cover two two-factors, swapping colors on an unbalanced
//! circuit when the third parity disagrees) or is all balanced (case 2). In
//! case 2 the second pair is covered directly when its unbalanced count is
//! even, through a disjoint barbell or the segment construction when the
//! count is one, and through a stripped cycle-tree when both pairs have an
//! odd count of at least three.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::analysis::{find_unbalanced_circuit, is_flow_admissible};
use crate::coloring::{
    class_negativity, find_coloring, relabel_for_parity, swap_on_circuit, two_factor,
    validate_coloring, ColorClass, ColoringError, EdgeColoring3,
};
use crate::graph::{
    circuit_sign, validate_cover, Circuit, Cover, CycleForest, EdgeId, Path, Sign, SignCircuit,
    SignedMultigraph, VertexId,
};

use super::{
    cycle_tree_cover, internal, tech1_cover, two_factor_cover, BuildTrace, CaseLabel,
    CoverBuildError, TraceLog,
};

#[derive(Debug, Clone)]
pub struct CoverOptions {
    /// Backtracking budget for the coloring search when no coloring is
    /// supplied. Exceeding it is an error distinct from "not colorable".
    pub coloring_budget: u64,
}

impl Default for CoverOptions {
    fn default() -> CoverOptions {
        CoverOptions {
            coloring_budget: 10_000_000,
        }
    }
}

/// Searches for a barbell joining `c1` to an unbalanced circuit that avoids
/// its edges. Returns `None` exactly when `g - E(c1)` is balanced. The
/// connecting path is a shortest one and meets both circuits only at its
/// ends (edge-disjoint circuits of a cubic graph are vertex-disjoint).
pub fn find_disjoint_unbalanced_barbell(
    g: &SignedMultigraph,
    c1: &Circuit,
) -> Result<Option<SignCircuit>, CoverBuildError> {
    if !g.is_cubic() {
        return Err(CoverBuildError::NotCubic);
    }
    if !g.is_connected() {
        return Err(CoverBuildError::NotConnected);
    }
    if circuit_sign(g, c1) != Sign::Negative {
        return Err(CoverBuildError::Precondition(
            "barbell search needs an unbalanced circuit".into(),
        ));
    }
    let Some(c2) = find_unbalanced_circuit(g, c1.edge_ids()) else {
        return Ok(None);
    };
    debug_assert!(c1.vertex_sequence().iter().all(|v| !c2.contains_vertex(*v)));

    // Multi-source BFS from the vertices of c1, never expanding c2 vertices
    // and never using c1 edges; the first c2 vertex reached ends the path.
    let mut banned = vec![false; g.edge_count()];
    for &e in c1.edge_ids() {
        banned[e] = true;
    }
    let mut parent: Vec<Option<(EdgeId, VertexId)>> = vec![None; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = VecDeque::new();
    for &v in c1.vertex_sequence() {
        seen[v] = true;
        queue.push_back(v);
    }
    let mut hit: Option<VertexId> = None;
    'bfs: while let Some(v) = queue.pop_front() {
        let mut inc: Vec<(VertexId, EdgeId)> = g
            .incident_edges(v)
            .iter()
            .filter(|&&e| !banned[e])
            .map(|&e| (g.edge(e).other_endpoint(v), e))
            .collect();
        inc.sort_unstable();
        inc.dedup();
        for (w, e) in inc {
            if w == v || seen[w] {
                continue;
            }
            seen[w] = true;
            parent[w] = Some((e, v));
            if c2.contains_vertex(w) {
                hit = Some(w);
                break 'bfs;
            }
            queue.push_back(w);
        }
    }
    let end = hit.ok_or_else(|| internal("connected graph must link the circuits"))?;
    let mut edges = Vec::new();
    let mut vertices = vec![end];
    let mut at = end;
    while let Some((e, p)) = parent[at] {
        edges.push(e);
        vertices.push(p);
        at = p;
    }
    edges.reverse();
    vertices.reverse();
    let barbell = SignCircuit::LongBarbell {
        first: c1.clone(),
        second: c2,
        path: Path::new(edges, vertices),
    };
    debug_assert!(crate::graph::validate_sign_circuit(g, &barbell).is_valid());
    Ok(Some(barbell))
}

/// Joins the circuits of a two-factor into a connected cycle-tree by lifting
/// a spanning tree of the contraction (breadth-first from the first
/// contracted vertex, smallest edge id first).
pub fn build_cycle_tree(
    g: &SignedMultigraph,
    circuits: &[Circuit],
) -> Result<CycleForest, CoverBuildError> {
    let contraction = crate::graph::contract_circuits(g, circuits)?;
    let cg = &contraction.graph;
    if cg.vertex_count() == 0 {
        return Ok(CycleForest::new(g, Vec::new(), Vec::new())?);
    }
    let mut seen = vec![false; cg.vertex_count()];
    let mut tree: Vec<EdgeId> = Vec::new();
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for &e in cg.incident_edges(v) {
            let edge = cg.edge(e);
            if edge.is_loop() {
                continue;
            }
            let w = edge.other_endpoint(v);
            if !seen[w] {
                seen[w] = true;
                tree.push(contraction.edge_to_original[e]);
                queue.push_back(w);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(CoverBuildError::NotConnected);
    }
    Ok(CycleForest::new(g, circuits.to_vec(), tree)?)
}

/// Repeatedly removes every bridge whose removal leaves a balanced side,
/// together with that side, until none remain. Returns the remaining
/// cycle-tree (it keeps every unbalanced circuit and is flow-admissible)
/// plus the balanced circuits that were stripped away.
pub fn strip_balanced_bridge_components(
    g: &SignedMultigraph,
    forest: &CycleForest,
) -> Result<(CycleForest, Vec<Circuit>), CoverBuildError> {
    let blocks = forest.blocks();
    let signs: Vec<Sign> = blocks.iter().map(|b| circuit_sign(g, b)).collect();
    if signs.iter().all(|&s| s == Sign::Positive) {
        return Err(CoverBuildError::AllBlocksBalanced);
    }
    let block_of = forest.block_of_vertex(g);
    let node_of = |v: VertexId| block_of[v].unwrap_or(blocks.len() + v);

    let mut alive_block = vec![true; blocks.len()];
    let mut alive_bridge: BTreeMap<EdgeId, bool> =
        forest.bridges().iter().map(|&e| (e, true)).collect();

    // Connectivity check over the whole forest before stripping.
    {
        let nodes = reachable_nodes(g, forest, &node_of, &alive_bridge, None, 0);
        let reached_blocks = nodes.iter().filter(|&&n| n < blocks.len()).count();
        if reached_blocks != blocks.len() {
            return Err(CoverBuildError::NotConnected);
        }
    }

    'strip: loop {
        let bridges_now: Vec<EdgeId> = alive_bridge
            .iter()
            .filter(|(_, &a)| a)
            .map(|(&e, _)| e)
            .collect();
        for &b in &bridges_now {
            let edge = g.edge(b);
            for root in [edge.u, edge.v] {
                let side = reachable_nodes(
                    g,
                    forest,
                    &node_of,
                    &alive_bridge,
                    Some(b),
                    node_of(root),
                );
                let side_blocks: Vec<usize> = side
                    .iter()
                    .copied()
                    .filter(|&n| n < blocks.len() && alive_block[n])
                    .collect();
                let balanced = side_blocks.iter().all(|&blk| signs[blk] == Sign::Positive);
                if balanced {
                    for blk in side_blocks {
                        alive_block[blk] = false;
                    }
                    for (&e, alive) in alive_bridge.iter_mut() {
                        if *alive && (e == b || side.contains(&node_of(g.edge(e).u))) {
                            *alive = false;
                        }
                    }
                    continue 'strip;
                }
            }
        }
        break;
    }

    let kept: Vec<Circuit> = blocks
        .iter()
        .enumerate()
        .filter(|(i, _)| alive_block[*i])
        .map(|(_, c)| c.clone())
        .collect();
    let stripped: Vec<Circuit> = blocks
        .iter()
        .enumerate()
        .filter(|(i, _)| !alive_block[*i])
        .map(|(_, c)| c.clone())
        .collect();
    let bridges: Vec<EdgeId> = alive_bridge
        .into_iter()
        .filter(|(_, a)| *a)
        .map(|(e, _)| e)
        .collect();
    if kept.is_empty() {
        return Err(CoverBuildError::AllBlocksBalanced);
    }
    Ok((CycleForest::new(g, kept, bridges)?, stripped))
}

/// Nodes reachable from `start` over alive bridges, optionally skipping one.
fn reachable_nodes(
    g: &SignedMultigraph,
    forest: &CycleForest,
    node_of: &dyn Fn(VertexId) -> usize,
    alive_bridge: &BTreeMap<EdgeId, bool>,
    skip: Option<EdgeId>,
    start: usize,
) -> BTreeSet<usize> {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (&e, &alive) in alive_bridge {
        if !alive || Some(e) == skip {
            continue;
        }
        let edge = g.edge(e);
        let (a, b) = (node_of(edge.u), node_of(edge.v));
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let _ = forest;
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(n) = queue.pop_front() {
        if let Some(list) = adj.get(&n) {
            for &next in list {
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
    }
    seen
}

/// Builds a verified sign-circuit cover of a connected, flow-admissible,
/// 3-edge-colorable cubic signed graph, with `9 * length <= 20 * |E|`
/// asserted in integer arithmetic. A coloring may be supplied; otherwise an
/// exhaustive search finds one within the configured budget.
pub fn cover_3ec_cubic(
    g: &SignedMultigraph,
    supplied: Option<&EdgeColoring3>,
    opts: &CoverOptions,
) -> Result<(Cover, BuildTrace), CoverBuildError> {
    use ColorClass::{B, R, Y};

    if !g.is_cubic() {
        return Err(CoverBuildError::NotCubic);
    }
    if !g.is_connected() {
        return Err(CoverBuildError::NotConnected);
    }
    let admissibility = is_flow_admissible(g);
    if !admissibility.admissible {
        return Err(CoverBuildError::NotFlowAdmissible {
            reason: format!("{:?}", admissibility.obstruction),
        });
    }
    let base = match supplied {
        Some(f) => {
            let report = validate_coloring(g, f).map_err(|e| match e {
                ColoringError::NotCubic { .. } => CoverBuildError::NotCubic,
                other => CoverBuildError::ColoringSearch(other),
            })?;
            if !report.is_valid() {
                return Err(CoverBuildError::InvalidColoring);
            }
            f.clone()
        }
        None => match find_coloring(g, opts.coloring_budget) {
            Ok(Some(f)) => f,
            Ok(None) => return Err(CoverBuildError::NotColorable),
            Err(e) => return Err(CoverBuildError::ColoringSearch(e)),
        },
    };
    let f = relabel_for_parity(g, &base);
    let m = g.edge_count();
    let mut log = TraceLog::new();
    log.note(format!(
        "parities after relabel: R={} B={} Y={}",
        u8::from(class_negativity(g, &f, R)),
        u8::from(class_negativity(g, &f, B)),
        u8::from(class_negativity(g, &f, Y)),
    ));

    let rb = two_factor(g, &f, R, B);
    let rb_unbalanced: Vec<usize> = (0..rb.len())
        .filter(|&i| circuit_sign(g, &rb[i]) == Sign::Negative)
        .collect();

    let (members, case, coloring_used) = if !rb_unbalanced.is_empty() {
        // Case 1: cover the RB factor, then a second factor under a
        // parity-matched coloring.
        let f1 = two_factor_cover(g, &f, R, B, &mut log)?;
        let (f2, used) = if class_negativity(g, &f, Y) == class_negativity(g, &f, R) {
            (two_factor_cover(g, &f, R, Y, &mut log)?, f.clone())
        } else {
            let c = &rb[rb_unbalanced[0]];
            let swapped = swap_on_circuit(&f, c, R, B)?;
            log.note(format!(
                "swapped R and B on the unbalanced circuit at vertex {}",
                c.vertex_sequence()[0]
            ));
            (two_factor_cover(g, &swapped, R, Y, &mut log)?, swapped)
        };
        let mut ms = f1.members().to_vec();
        ms.extend_from_slice(f2.members());
        (ms, CaseLabel::Case1, used)
    } else {
        // Case 2: the RB circuits are all balanced and cover RB by
        // themselves.
        let mut ms: Vec<SignCircuit> =
            rb.iter().cloned().map(SignCircuit::Balanced).collect();
        let ry = two_factor(g, &f, R, Y);
        let by = two_factor(g, &f, B, Y);
        let u_ry: Vec<usize> = (0..ry.len())
            .filter(|&i| circuit_sign(g, &ry[i]) == Sign::Negative)
            .collect();
        let u_by: Vec<usize> = (0..by.len())
            .filter(|&i| circuit_sign(g, &by[i]) == Sign::Negative)
            .collect();
        log.note(format!(
            "case 2: unbalanced counts RY={} BY={}",
            u_ry.len(),
            u_by.len()
        ));
        if u_ry.len() % 2 == 0 || u_by.len() % 2 == 0 {
            let (a, b) = if u_ry.len() % 2 == 0 { (R, Y) } else { (B, Y) };
            let f2 = two_factor_cover(g, &f, a, b, &mut log)?;
            ms.extend_from_slice(f2.members());
            (ms, CaseLabel::Case21, f.clone())
        } else if u_ry.len() == 1 || u_by.len() == 1 {
            let (pair, pair_name) = if u_ry.len() == 1 {
                (ry, "RY")
            } else {
                (by, "BY")
            };
            let c1_idx = (0..pair.len())
                .find(|&i| circuit_sign(g, &pair[i]) == Sign::Negative)
                .expect("one unbalanced circuit");
            for (i, c) in pair.iter().enumerate() {
                if i != c1_idx {
                    ms.push(SignCircuit::Balanced(c.clone()));
                }
            }
            let c1 = &pair[c1_idx];
            log.note(format!(
                "case 2.2 on {pair_name}: unbalanced circuit of length {}",
                c1.len()
            ));
            match find_disjoint_unbalanced_barbell(g, c1)? {
                Some(q) => {
                    ms.push(q);
                    let total: usize = ms.iter().map(|m| m.length()).sum();
                    log.check("case-2.2a-under-2E", total, 1, 2 * m as u64 - 1)?;
                    (ms, CaseLabel::Case22Barbell, f.clone())
                }
                None => {
                    let (f3, tcase) = tech1_cover(g, c1, &mut log)?;
                    ms.extend_from_slice(f3.members());
                    (ms, CaseLabel::Case22Tech1(tcase), f.clone())
                }
            }
        } else {
            let h = build_cycle_tree(g, &ry)?;
            let (h2, stripped) = strip_balanced_bridge_components(g, &h)?;
            log.note(format!(
                "case 2.3: cycle-tree of {} circuits, {} stripped",
                h.blocks().len(),
                stripped.len()
            ));
            let f2 = cycle_tree_cover(g, &h2, &mut log)?;
            ms.extend_from_slice(f2.members());
            ms.extend(stripped.into_iter().map(SignCircuit::Balanced));
            (ms, CaseLabel::Case23, f.clone())
        }
    };

    let target: BTreeSet<EdgeId> = (0..m).collect();
    let cover = Cover::new(members, target);
    log.check("theorem-20/9", cover.length(), 9, 20 * m as u64)?;
    let report = validate_cover(g, &cover);
    if !report.is_valid() {
        return Err(internal(format!(
            "pipeline produced an invalid cover: {:?}",
            report.violations()
        )));
    }
    let achieved_length = cover.length();
    Ok((
        cover,
        BuildTrace {
            case,
            coloring: coloring_used,
            log,
            achieved_length,
        },
    ))
}
