//! The shared barbell-pairing kernel and its two bound-asserting fronts:
//! covers of positive block unions (4/3 of the union) and of flow-admissible
//! cycle-trees (3/2 of the tree).
//!
//! Balanced blocks are covered by themselves; unbalanced blocks are joined
//! pairwise into barbells whose connectors run along bridges and through the
//! shorter arc of any intermediate block. Components with an even number of
//! unbalanced blocks use an exact minimum-weight perfect matching; an odd
//! count of at least three (a flow-admissible cycle-tree allows this) uses a
//! minimum-weight edge cover, so one block serves in two barbells.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::graph::{
    circuit_sign, validate_cover, Circuit, Cover, CycleForest, EdgeId, Path, Sign, SignCircuit,
    SignedMultigraph, VertexId,
};
use crate::tjoin::min_weight_perfect_matching;

use super::{internal, CoverBuildError, TraceLog};

/// Covers `must_cover` (a subset of the block edges) with the blocks' own
/// circuits and barbells pairing up the unbalanced blocks. Balanced blocks
/// are emitted only when one of their must-cover edges is not already
/// covered by a barbell connector.
pub fn paired_barbell_cover(
    g: &SignedMultigraph,
    forest: &CycleForest,
    must_cover: &BTreeSet<EdgeId>,
    log: &mut TraceLog,
) -> Result<Cover, CoverBuildError> {
    let blocks = forest.blocks();
    let block_edges = forest.block_edge_set();
    if let Some(&e) = must_cover.iter().find(|e| !block_edges.contains(e)) {
        return Err(CoverBuildError::MustCoverOutsideBlocks { edge: e });
    }

    let ctx = ForestContext::new(g, forest);
    let mut members: Vec<SignCircuit> = Vec::new();

    for (comp_id, comp_blocks) in ctx.components().into_iter().enumerate() {
        let unbalanced: Vec<usize> = comp_blocks
            .iter()
            .copied()
            .filter(|&b| ctx.sign[b] == Sign::Negative)
            .collect();
        match unbalanced.len() {
            0 => continue,
            1 => return Err(CoverBuildError::OddUnbalancedBlocks { component: comp_id }),
            n if n > 20 => return Err(CoverBuildError::TooManyUnbalancedBlocks { count: n }),
            _ => {}
        }
        let k = unbalanced.len();
        let mut connectors: BTreeMap<(usize, usize), Path> = BTreeMap::new();
        let mut weights = vec![vec![0u64; k]; k];
        for i in 0..k {
            for j in (i + 1)..k {
                let path = ctx.connector(unbalanced[i], unbalanced[j])?;
                weights[i][j] = path.len() as u64;
                weights[j][i] = weights[i][j];
                connectors.insert((i, j), path);
            }
        }
        let pairs = if k % 2 == 0 {
            min_weight_perfect_matching(&weights)?
        } else {
            min_weight_edge_cover(&weights)
        };
        log.note(format!(
            "component {comp_id}: {} unbalanced blocks paired as {:?}",
            k,
            pairs
                .iter()
                .map(|&(i, j)| (unbalanced[i], unbalanced[j]))
                .collect::<Vec<_>>()
        ));
        for (i, j) in pairs {
            let (lo, hi) = (i.min(j), i.max(j));
            let path = connectors[&(lo, hi)].clone();
            let (bi, bj) = (unbalanced[lo], unbalanced[hi]);
            members.push(make_barbell(
                blocks[bi].clone(),
                blocks[bj].clone(),
                path,
            )?);
        }
    }

    // Emit each balanced block whose must-cover edges are not all covered by
    // connectors (for instance the far arc of a traversed block).
    let mut covered: BTreeSet<EdgeId> = members.iter().flat_map(|m| m.edge_ids()).collect();
    for (b, block) in blocks.iter().enumerate() {
        if ctx.sign[b] == Sign::Negative {
            continue;
        }
        let needed = block
            .edge_ids()
            .iter()
            .any(|e| must_cover.contains(e) && !covered.contains(e));
        if needed {
            covered.extend(block.edge_ids().iter().copied());
            members.push(SignCircuit::Balanced(block.clone()));
        }
    }

    let cover = Cover::new(members, must_cover.clone());
    let report = validate_cover(g, &cover);
    if !report.is_valid() {
        return Err(internal(format!(
            "barbell pairing produced an invalid cover: {:?}",
            report.violations()
        )));
    }
    Ok(cover)
}

fn make_barbell(
    first: Circuit,
    second: Circuit,
    path: Path,
) -> Result<SignCircuit, CoverBuildError> {
    if path.is_empty() {
        // Blocks of a cycle forest are vertex-disjoint, so this cannot occur
        // there; kept for generality with other callers.
        let shared: Vec<VertexId> = first
            .vertex_sequence()
            .iter()
            .filter(|v| second.contains_vertex(**v))
            .copied()
            .collect();
        if shared.len() == 1 {
            return Ok(SignCircuit::ShortBarbell {
                first,
                second,
                shared_vertex: shared[0],
            });
        }
        return Err(internal("empty connector between vertex-disjoint blocks"));
    }
    Ok(SignCircuit::LongBarbell {
        first,
        second,
        path,
    })
}

/// Routing context over a cycle forest: blocks contracted to nodes, bridges
/// as edges, chain-through vertices as their own nodes.
struct ForestContext<'a> {
    g: &'a SignedMultigraph,
    forest: &'a CycleForest,
    block_of: Vec<Option<usize>>,
    sign: Vec<Sign>,
    /// node id -> (neighbor node, bridge edge), sorted by bridge id.
    adj: BTreeMap<usize, Vec<(usize, EdgeId)>>,
}

impl<'a> ForestContext<'a> {
    fn new(g: &'a SignedMultigraph, forest: &'a CycleForest) -> ForestContext<'a> {
        let block_of = forest.block_of_vertex(g);
        let sign = forest
            .blocks()
            .iter()
            .map(|b| circuit_sign(g, b))
            .collect();
        let mut ctx = ForestContext {
            g,
            forest,
            block_of,
            sign,
            adj: BTreeMap::new(),
        };
        for &e in forest.bridges() {
            let edge = g.edge(e);
            let (a, b) = (ctx.node_of(edge.u), ctx.node_of(edge.v));
            ctx.adj.entry(a).or_default().push((b, e));
            ctx.adj.entry(b).or_default().push((a, e));
        }
        for list in ctx.adj.values_mut() {
            list.sort_by_key(|&(_, e)| e);
        }
        ctx
    }

    fn node_of(&self, v: VertexId) -> usize {
        match self.block_of[v] {
            Some(b) => b,
            None => self.forest.blocks().len() + v,
        }
    }

    /// Groups block indices by forest component, ordered by smallest block.
    fn components(&self) -> Vec<Vec<usize>> {
        let nb = self.forest.blocks().len();
        let mut comp: BTreeMap<usize, usize> = BTreeMap::new();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for start in 0..nb {
            if comp.contains_key(&start) {
                continue;
            }
            let id = groups.len();
            groups.push(Vec::new());
            let mut queue = VecDeque::from([start]);
            comp.insert(start, id);
            while let Some(node) = queue.pop_front() {
                if node < nb {
                    groups[id].push(node);
                }
                if let Some(list) = self.adj.get(&node) {
                    for &(next, _) in list {
                        if let std::collections::btree_map::Entry::Vacant(e) = comp.entry(next) {
                            e.insert(id);
                            queue.push_back(next);
                        }
                    }
                }
            }
            groups[id].sort_unstable();
        }
        groups
    }

    /// The tree path of bridges between two block nodes.
    fn bridge_path(&self, from: usize, to: usize) -> Result<Vec<EdgeId>, CoverBuildError> {
        let mut parent: BTreeMap<usize, (usize, EdgeId)> = BTreeMap::new();
        let mut seen = BTreeSet::from([from]);
        let mut queue = VecDeque::from([from]);
        while let Some(node) = queue.pop_front() {
            if node == to {
                break;
            }
            if let Some(list) = self.adj.get(&node) {
                for &(next, e) in list {
                    if seen.insert(next) {
                        parent.insert(next, (node, e));
                        queue.push_back(next);
                    }
                }
            }
        }
        if !seen.contains(&to) {
            return Err(internal(format!("blocks {from} and {to} share no connector")));
        }
        let mut bridges = Vec::new();
        let mut at = to;
        while at != from {
            let (prev, e) = parent[&at];
            bridges.push(e);
            at = prev;
        }
        bridges.reverse();
        Ok(bridges)
    }

    /// Connector path between two unbalanced blocks: the bridges on the tree
    /// path, chained through the shorter arc of every intermediate block
    /// (ties: fewer edges, then lexicographically smaller edge ids).
    fn connector(&self, from: usize, to: usize) -> Result<Path, CoverBuildError> {
        let bridges = self.bridge_path(from, to)?;
        let first = self.g.edge(bridges[0]);
        let start = if self.block_of[first.u] == Some(from) {
            first.u
        } else if self.block_of[first.v] == Some(from) {
            first.v
        } else {
            return Err(internal("first bridge does not touch the source block"));
        };
        let mut edges: Vec<EdgeId> = Vec::new();
        let mut vertices: Vec<VertexId> = vec![start];
        let mut at = start;
        for &b in &bridges {
            let bridge = self.g.edge(b);
            let (near, far) = if self.node_of(bridge.u) == self.node_of(at) {
                (bridge.u, bridge.v)
            } else {
                (bridge.v, bridge.u)
            };
            if near != at {
                // Same block, different contact vertices: route the arc.
                let block = self.block_of[at]
                    .ok_or_else(|| internal("bridge chain broke off the forest"))?;
                let (arc_edges, arc_vertices) =
                    shorter_arc(&self.forest.blocks()[block], at, near);
                edges.extend(arc_edges);
                vertices.extend(arc_vertices.into_iter().skip(1));
            }
            edges.push(b);
            vertices.push(far);
            at = far;
        }
        Ok(Path::new(edges, vertices))
    }
}

/// The shorter of the two arcs from `x` to `y` on a circuit; equal lengths
/// break toward the lexicographically smaller edge sequence.
fn shorter_arc(c: &Circuit, x: VertexId, y: VertexId) -> (Vec<EdgeId>, Vec<VertexId>) {
    let px = c.position_of_vertex(x).expect("x on circuit");
    let py = c.position_of_vertex(y).expect("y on circuit");
    let (cw_e, cw_v) = c.arc(px, py);
    let (rev_e, rev_v) = c.arc(py, px);
    let ccw_e: Vec<EdgeId> = rev_e.into_iter().rev().collect();
    let ccw_v: Vec<VertexId> = rev_v.into_iter().rev().collect();
    if (cw_e.len(), &cw_e) <= (ccw_e.len(), &ccw_e) {
        (cw_e, cw_v)
    } else {
        (ccw_e, ccw_v)
    }
}

/// Minimum-weight edge cover on a small complete graph by subset DP; every
/// vertex is covered, and a vertex may appear in two pairs. Reconstruction
/// pairs the lowest uncovered index with its smallest optimal partner.
fn min_weight_edge_cover(weights: &[Vec<u64>]) -> Vec<(usize, usize)> {
    let n = weights.len();
    debug_assert!(n >= 2 && n <= 20);
    const INF: u64 = u64::MAX / 4;
    let full = (1usize << n) - 1;
    let mut dp = vec![INF; full + 1];
    dp[0] = 0;
    for mask in 1..=full {
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut best = INF;
        for j in 0..n {
            if j == i {
                continue;
            }
            let prev = dp[rest & !(1 << j)];
            if prev < INF {
                best = best.min(prev + weights[i][j]);
            }
        }
        dp[mask] = best;
    }
    let mut pairs = Vec::new();
    let mut mask = full;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut chosen = None;
        for j in 0..n {
            if j != i && dp[rest & !(1 << j)].saturating_add(weights[i][j]) == dp[mask] {
                chosen = Some(j);
                break;
            }
        }
        let j = chosen.expect("edge cover dp consistent");
        pairs.push((i.min(j), i.max(j)));
        mask = rest & !(1 << j);
    }
    pairs
}

/// Traces a bridgeless-block that should be a circuit into one, rejecting
/// anything that is not 2-regular.
fn block_to_circuit(
    g: &SignedMultigraph,
    vertices: &[VertexId],
    edges: &[EdgeId],
) -> Result<Circuit, CoverBuildError> {
    let in_block: BTreeSet<EdgeId> = edges.iter().copied().collect();
    for &v in vertices {
        let deg = g
            .incident_edges(v)
            .iter()
            .filter(|e| in_block.contains(e))
            .count();
        if deg != 2 {
            return Err(CoverBuildError::BlocksNotCircuits {
                detail: format!("vertex {v} has degree {deg} in its block"),
            });
        }
    }
    if edges.len() == 1 {
        let e = g.edge(edges[0]);
        if e.is_loop() {
            return Ok(Circuit::from_walk(g, vec![e.id], vec![e.u]));
        }
        return Err(CoverBuildError::BlocksNotCircuits {
            detail: format!("single non-loop edge {} cannot be a block", e.id),
        });
    }
    let start = *vertices.iter().min().expect("block has vertices");
    let mut walk_edges = Vec::new();
    let mut walk_vertices = vec![start];
    let mut incident: Vec<EdgeId> = g
        .incident_edges(start)
        .iter()
        .copied()
        .filter(|e| in_block.contains(e))
        .collect();
    incident.sort_by_key(|&e| (g.edge(e).other_endpoint(start), e));
    incident.dedup();
    let mut prev = incident[0];
    walk_edges.push(prev);
    let mut at = g.edge(prev).other_endpoint(start);
    while at != start {
        walk_vertices.push(at);
        let next = g
            .incident_edges(at)
            .iter()
            .copied()
            .find(|&e| in_block.contains(&e) && e != prev)
            .ok_or_else(|| CoverBuildError::BlocksNotCircuits {
                detail: format!("walk stuck at vertex {at}"),
            })?;
        walk_edges.push(next);
        prev = next;
        at = g.edge(next).other_endpoint(at);
    }
    if walk_edges.len() != edges.len() {
        return Err(CoverBuildError::BlocksNotCircuits {
            detail: "block is not a single closed walk".into(),
        });
    }
    Ok(Circuit::from_walk(g, walk_edges, walk_vertices))
}

/// Builds the cycle forest of an edge set whose bridgeless-blocks are
/// circuits: blocks from the bridge decomposition, bridges as the chain
/// edges.
pub(crate) fn forest_of_edge_set(
    g: &SignedMultigraph,
    edge_set: &BTreeSet<EdgeId>,
) -> Result<CycleForest, CoverBuildError> {
    let mut allowed = vec![false; g.edge_count()];
    for &e in edge_set {
        allowed[e] = true;
    }
    let bridges = g.bridges_filtered(&allowed);
    let mut blocks = Vec::new();
    for block in g.bridgeless_blocks_filtered(&allowed) {
        if block.edges.is_empty() {
            continue;
        }
        blocks.push(block_to_circuit(g, &block.vertices, &block.edges)?);
    }
    blocks.sort_by_key(|c| c.vertex_sequence()[0]);
    Ok(CycleForest::new(g, blocks, bridges)?)
}

/// Covers the union of the bridgeless-blocks of `edge_set` (which must be
/// circuits whose union is positive), certifying length at most 4/3 of the
/// whole edge set.
pub fn positive_blocks_cover(
    g: &SignedMultigraph,
    edge_set: &BTreeSet<EdgeId>,
    log: &mut TraceLog,
) -> Result<Cover, CoverBuildError> {
    let forest = forest_of_edge_set(g, edge_set)?;
    let block_edges = forest.block_edge_set();
    let negatives = block_edges
        .iter()
        .filter(|&&e| g.sign(e).is_negative())
        .count();
    if negatives % 2 != 0 {
        return Err(CoverBuildError::NotPositiveUnion);
    }
    let cover = paired_barbell_cover(g, &forest, &block_edges, log)?;
    log.check(
        "positive-blocks-4/3",
        cover.length(),
        3,
        4 * edge_set.len() as u64,
    )?;
    Ok(cover)
}

/// Covers all circuit edges of a connected, flow-admissible cycle-tree,
/// certifying length at most 3/2 of the tree's edges. Bridges with a
/// balanced side must have been stripped by the caller.
pub fn cycle_tree_cover(
    g: &SignedMultigraph,
    forest: &CycleForest,
    log: &mut TraceLog,
) -> Result<Cover, CoverBuildError> {
    let ctx = ForestContext::new(g, forest);
    if ctx.components().len() > 1 {
        return Err(CoverBuildError::NotConnected);
    }
    // No bridge may have a balanced side.
    for &b in forest.bridges() {
        let (side_u, side_v) = bridge_sides(&ctx, b);
        for side in [&side_u, &side_v] {
            if side.iter().all(|&blk| ctx.sign[blk] == Sign::Positive) {
                return Err(CoverBuildError::BadBridge { bridge: b });
            }
        }
    }
    let must_cover = forest.block_edge_set();
    let cover = paired_barbell_cover(g, forest, &must_cover, log)?;
    log.check(
        "cycle-tree-3/2",
        cover.length(),
        2,
        3 * forest.edge_count() as u64,
    )?;
    Ok(cover)
}

/// Block indices on each side of a bridge, within the forest.
fn bridge_sides(ctx: &ForestContext<'_>, bridge: EdgeId) -> (Vec<usize>, Vec<usize>) {
    let edge = ctx.g.edge(bridge);
    let collect = |root: VertexId| -> Vec<usize> {
        let nb = ctx.forest.blocks().len();
        let mut seen = BTreeSet::from([ctx.node_of(root)]);
        let mut queue = VecDeque::from([ctx.node_of(root)]);
        let mut out = Vec::new();
        while let Some(node) = queue.pop_front() {
            if node < nb {
                out.push(node);
            }
            if let Some(list) = ctx.adj.get(&node) {
                for &(next, e) in list {
                    if e != bridge && seen.insert(next) {
                        queue.push_back(next);
                    }
                }
            }
        }
        out
    };
    (collect(edge.u), collect(edge.v))
}
