//! Exact minimum T-joins via shortest-path metric completion and exact
//! minimum-weight perfect matching.
//!
//! A T-join is an edge set whose odd-degree vertices are exactly T. The
//! minimum one is found by matching the terminals under the shortest-path
//! metric, taking the symmetric difference of the matched paths, and deleting
//! any leftover cycles (which preserves the T-join property and never
//! increases size). The matching kernel is a subset DP, exact up to 20
//! terminals; larger sets are an error rather than a silent approximation.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::graph::{EdgeId, Path, SignedMultigraph, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TJoinError {
    #[error("terminal set has odd size {0}")]
    OddTerminalCount(usize),
    #[error("terminals {0} and {1} are in different components")]
    TerminalsDisconnected(VertexId, VertexId),
    #[error("terminal {0} out of range")]
    TerminalOutOfRange(VertexId),
    #[error("{0} terminals exceed the exact matching limit of 20")]
    TooManyTerminals(usize),
    #[error("weight matrix is not square or has odd dimension")]
    BadWeights,
}

/// Unit-weight shortest path lengths between terminals, with one canonical
/// path per pair (breadth-first, ties toward smaller vertex then edge ids).
#[derive(Debug, Clone)]
pub struct DistanceTable {
    pub terminals: Vec<VertexId>,
    pub dist: Vec<Vec<usize>>,
    paths: Vec<Vec<Option<Path>>>,
}

impl DistanceTable {
    pub fn path(&self, i: usize, j: usize) -> &Path {
        self.paths[i][j].as_ref().expect("terminals connected")
    }
}

/// BFS from `source` with adjacency explored in (neighbor, edge id) order,
/// giving deterministic parent pointers.
fn bfs_parents(
    g: &SignedMultigraph,
    source: VertexId,
) -> (Vec<usize>, Vec<Option<(EdgeId, VertexId)>>) {
    let n = g.vertex_count();
    let mut dist = vec![usize::MAX; n];
    let mut parent: Vec<Option<(EdgeId, VertexId)>> = vec![None; n];
    let mut order: Vec<Vec<(VertexId, EdgeId)>> = vec![Vec::new(); n];
    for v in 0..n {
        let mut inc: Vec<(VertexId, EdgeId)> = g
            .incident_edges(v)
            .iter()
            .map(|&e| (g.edge(e).other_endpoint(v), e))
            .collect();
        inc.sort_unstable();
        inc.dedup();
        order[v] = inc;
    }
    dist[source] = 0;
    let mut q = VecDeque::from([source]);
    while let Some(v) = q.pop_front() {
        for &(w, e) in &order[v] {
            if w == v {
                continue; // loops never shorten paths
            }
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                parent[w] = Some((e, v));
                q.push_back(w);
            }
        }
    }
    (dist, parent)
}

fn path_from_parents(
    parent: &[Option<(EdgeId, VertexId)>],
    source: VertexId,
    target: VertexId,
) -> Path {
    let mut edges = Vec::new();
    let mut vertices = vec![target];
    let mut at = target;
    while at != source {
        let (e, p) = parent[at].expect("target reachable");
        edges.push(e);
        vertices.push(p);
        at = p;
    }
    edges.reverse();
    vertices.reverse();
    Path::new(edges, vertices)
}

/// Shortest-path table over the terminal set. Errors if two terminals are in
/// different components.
pub fn pairwise_distances(
    g: &SignedMultigraph,
    terminals: &[VertexId],
) -> Result<DistanceTable, TJoinError> {
    for &t in terminals {
        if t >= g.vertex_count() {
            return Err(TJoinError::TerminalOutOfRange(t));
        }
    }
    let k = terminals.len();
    let mut dist = vec![vec![0; k]; k];
    let mut paths: Vec<Vec<Option<Path>>> = vec![vec![None; k]; k];
    for i in 0..k {
        let (d, parent) = bfs_parents(g, terminals[i]);
        for j in 0..k {
            if d[terminals[j]] == usize::MAX {
                return Err(TJoinError::TerminalsDisconnected(terminals[i], terminals[j]));
            }
            dist[i][j] = d[terminals[j]];
            if i != j {
                paths[i][j] = Some(path_from_parents(&parent, terminals[i], terminals[j]));
            }
        }
    }
    Ok(DistanceTable {
        terminals: terminals.to_vec(),
        dist,
        paths,
    })
}

/// Exact minimum-weight perfect matching on an even set of at most 20
/// elements by subset dynamic programming. Ties break toward the
/// lexicographically least pairing (sorted pair list).
pub fn min_weight_perfect_matching(weights: &[Vec<u64>]) -> Result<Vec<(usize, usize)>, TJoinError> {
    let n = weights.len();
    if n % 2 != 0 {
        return Err(TJoinError::OddTerminalCount(n));
    }
    if n > 20 {
        return Err(TJoinError::TooManyTerminals(n));
    }
    if weights.iter().any(|row| row.len() != n) {
        return Err(TJoinError::BadWeights);
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    const INF: u64 = u64::MAX / 4;
    let full = (1usize << n) - 1;
    let mut dp = vec![INF; full + 1];
    dp[0] = 0;
    for mask in 1..=full {
        if (mask.count_ones() % 2) != 0 {
            continue;
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut best = INF;
        let mut j = rest;
        while j != 0 {
            let b = j.trailing_zeros() as usize;
            j &= j - 1;
            let prev = dp[rest & !(1 << b)];
            if prev < INF {
                best = best.min(prev + weights[i][b]);
            }
        }
        dp[mask] = best;
    }
    // Reconstruct: always pair the lowest unmatched index with the smallest
    // partner that achieves the optimum.
    let mut pairs = Vec::with_capacity(n / 2);
    let mut mask = full;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut chosen = None;
        let mut j = rest;
        while j != 0 {
            let b = j.trailing_zeros() as usize;
            j &= j - 1;
            if dp[rest & !(1 << b)].saturating_add(weights[i][b]) == dp[mask] {
                chosen = Some(b);
                break; // smallest b first: lexicographically least pairing
            }
        }
        let b = chosen.expect("dp is consistent");
        pairs.push((i, b));
        mask = rest & !(1 << b);
    }
    Ok(pairs)
}

/// A minimum T-join: the edge set, its terminal set, and its size. The
/// induced subgraph has odd degree exactly at the terminals and is acyclic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TJoinResult {
    pub edge_ids: BTreeSet<EdgeId>,
    pub terminal_set: BTreeSet<VertexId>,
    pub total_size: usize,
}

/// Exact minimum T-join of `g` with respect to `terminals`.
pub fn minimum_tjoin(
    g: &SignedMultigraph,
    terminals: &[VertexId],
) -> Result<TJoinResult, TJoinError> {
    let terminal_set: BTreeSet<VertexId> = terminals.iter().copied().collect();
    if terminal_set.len() % 2 != 0 {
        return Err(TJoinError::OddTerminalCount(terminal_set.len()));
    }
    let ordered: Vec<VertexId> = terminal_set.iter().copied().collect();
    if ordered.len() > 20 {
        return Err(TJoinError::TooManyTerminals(ordered.len()));
    }
    if ordered.is_empty() {
        return Ok(TJoinResult {
            edge_ids: BTreeSet::new(),
            terminal_set,
            total_size: 0,
        });
    }
    let table = pairwise_distances(g, &ordered)?;
    let weights: Vec<Vec<u64>> = table
        .dist
        .iter()
        .map(|row| row.iter().map(|&d| d as u64).collect())
        .collect();
    let pairing = min_weight_perfect_matching(&weights)?;

    // Symmetric difference of the matched paths.
    let mut in_join = vec![false; g.edge_count()];
    for &(i, j) in &pairing {
        for &e in table.path(i, j).edge_ids() {
            in_join[e] = !in_join[e];
        }
    }
    delete_cycles(g, &mut in_join);

    let edge_ids: BTreeSet<EdgeId> = (0..g.edge_count()).filter(|&e| in_join[e]).collect();
    let result = TJoinResult {
        total_size: edge_ids.len(),
        edge_ids,
        terminal_set,
    };
    debug_assert!(check_tjoin(g, &result));
    Ok(result)
}

/// Removes cycles from the edge set until it is a forest. Cycle removal
/// keeps all degree parities, so the T-join property is preserved.
fn delete_cycles(g: &SignedMultigraph, in_join: &mut [bool]) {
    loop {
        let mut removed = false;
        // Loops are single-edge cycles.
        for e in g.edges() {
            if in_join[e.id] && e.is_loop() {
                in_join[e.id] = false;
                removed = true;
            }
        }
        if let Some(cycle) = find_cycle(g, in_join) {
            for e in cycle {
                in_join[e] = false;
            }
            removed = true;
        }
        if !removed {
            return;
        }
    }
}

fn find_cycle(g: &SignedMultigraph, in_join: &[bool]) -> Option<Vec<EdgeId>> {
    let n = g.vertex_count();
    let mut visited = vec![false; n];
    for root in 0..n {
        if visited[root] {
            continue;
        }
        // DFS with entering-edge tracking; a visited neighbor through a
        // different edge closes a cycle.
        let mut parent: Vec<Option<(EdgeId, VertexId)>> = vec![None; n];
        let mut stack = vec![(root, usize::MAX)];
        visited[root] = true;
        while let Some((v, enter)) = stack.pop() {
            for &e in g.incident_edges(v) {
                if !in_join[e] || e == enter || g.edge(e).is_loop() {
                    continue;
                }
                let w = g.edge(e).other_endpoint(v);
                if !visited[w] {
                    visited[w] = true;
                    parent[w] = Some((e, v));
                    stack.push((w, e));
                } else {
                    // Extract the cycle: e plus the tree paths to the meet.
                    let mut cycle = vec![e];
                    let (mut a, mut b) = (v, w);
                    let mut seen: BTreeMap<VertexId, usize> = BTreeMap::new();
                    let mut chain_a = Vec::new();
                    while let Some((pe, pv)) = parent[a] {
                        seen.insert(a, chain_a.len());
                        chain_a.push(pe);
                        a = pv;
                    }
                    seen.insert(a, chain_a.len());
                    let mut chain_b = Vec::new();
                    while !seen.contains_key(&b) {
                        let (pe, pv) = parent[b].expect("same tree");
                        chain_b.push(pe);
                        b = pv;
                    }
                    cycle.extend_from_slice(&chain_a[..seen[&b]]);
                    cycle.extend_from_slice(&chain_b);
                    return Some(cycle);
                }
            }
        }
    }
    None
}

/// Degree-parity plus acyclicity check for a T-join candidate.
#[doc(hidden)]
pub fn check_tjoin(g: &SignedMultigraph, j: &TJoinResult) -> bool {
    let mut deg = vec![0usize; g.vertex_count()];
    for &e in &j.edge_ids {
        let edge = g.edge(e);
        deg[edge.u] += 1;
        deg[edge.v] += 1;
        if edge.is_loop() {
            return false;
        }
    }
    for v in 0..g.vertex_count() {
        let odd = deg[v] % 2 == 1;
        if odd != j.terminal_set.contains(&v) {
            return false;
        }
    }
    // Acyclic: every component of the induced subgraph is a tree.
    let mut in_join = vec![false; g.edge_count()];
    for &e in &j.edge_ids {
        in_join[e] = true;
    }
    find_cycle(g, &in_join).is_none()
}

/// Independent brute-force oracle: minimum T-join size over all edge
/// subsets. Usable up to ~20 edges.
#[doc(hidden)]
pub fn brute_force_min_tjoin(g: &SignedMultigraph, terminals: &[VertexId]) -> Option<usize> {
    let m = g.edge_count();
    assert!(m <= 20, "brute force oracle is for small graphs");
    let want: BTreeSet<VertexId> = terminals.iter().copied().collect();
    let mut best: Option<usize> = None;
    for mask in 0..(1u32 << m) {
        let mut deg = vec![0usize; g.vertex_count()];
        for e in 0..m {
            if mask & (1 << e) != 0 {
                let edge = g.edge(e);
                deg[edge.u] += 1;
                deg[edge.v] += 1;
            }
        }
        let odd: BTreeSet<VertexId> =
            (0..g.vertex_count()).filter(|&v| deg[v] % 2 == 1).collect();
        if odd == want {
            let size = mask.count_ones() as usize;
            best = Some(best.map_or(size, |b: usize| b.min(size)));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::{contract_circuits, Circuit, SignedMultigraph};

    fn four_cycle() -> SignedMultigraph {
        SignedMultigraph::from_numeric(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]).unwrap()
    }

    #[test]
    fn opposite_vertices_of_four_cycle_at_distance_two() {
        let g = four_cycle();
        let t = pairwise_distances(&g, &[0, 2]).unwrap();
        assert_eq!(t.dist[0][1], 2);
        // Canonical path goes through the smaller neighbor 1, not 3.
        assert_eq!(t.path(0, 1).vertex_sequence(), &[0, 1, 2]);
    }

    #[test]
    fn path_endpoints_distance() {
        let g = SignedMultigraph::from_numeric(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        let t = pairwise_distances(&g, &[0, 2]).unwrap();
        assert_eq!(t.dist[0][1], 2);
    }

    #[test]
    fn contracted_prism_terminals_at_distance_one() {
        let g = fixtures::pri2();
        let t1 = Circuit::from_edge_cycle(&g, &[0, 1, 2]).unwrap();
        let t2 = Circuit::from_edge_cycle(&g, &[3, 4, 5]).unwrap();
        let ctr = contract_circuits(&g, &[t1, t2]).unwrap();
        let t = pairwise_distances(&ctr.graph, &[0, 1]).unwrap();
        assert_eq!(t.dist[0][1], 1);
    }

    #[test]
    fn disconnected_terminals_error() {
        let g = SignedMultigraph::from_numeric(4, &[(0, 1, 1), (2, 3, 1)]).unwrap();
        assert!(matches!(
            pairwise_distances(&g, &[0, 2]),
            Err(TJoinError::TerminalsDisconnected(..))
        ));
    }

    #[test]
    fn matching_single_pair() {
        let w = vec![vec![0, 5], vec![5, 0]];
        assert_eq!(min_weight_perfect_matching(&w).unwrap(), vec![(0, 1)]);
    }

    #[test]
    fn matching_prefers_cheap_pairs() {
        // Vertices 0..3 standing in for the spec's 1..4.
        let w = vec![
            vec![0, 1, 10, 10],
            vec![1, 0, 10, 10],
            vec![10, 10, 0, 1],
            vec![10, 10, 1, 0],
        ];
        assert_eq!(min_weight_perfect_matching(&w).unwrap(), vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn matching_breaks_ties_lexicographically() {
        // All weights equal: every pairing is optimal, the least one wins.
        let w: Vec<Vec<u64>> = (0..4)
            .map(|i| (0..4).map(|j| u64::from(i != j)).collect())
            .collect();
        assert_eq!(min_weight_perfect_matching(&w).unwrap(), vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn matching_rejects_odd_sets() {
        let w = vec![vec![0; 3]; 3];
        assert!(matches!(
            min_weight_perfect_matching(&w),
            Err(TJoinError::OddTerminalCount(3))
        ));
    }

    #[test]
    fn empty_terminal_set_gives_empty_join() {
        let g = four_cycle();
        let j = minimum_tjoin(&g, &[]).unwrap();
        assert_eq!(j.total_size, 0);
        assert!(j.edge_ids.is_empty());
    }

    #[test]
    fn four_cycle_opposite_terminals() {
        let g = four_cycle();
        let j = minimum_tjoin(&g, &[0, 2]).unwrap();
        assert_eq!(j.total_size, 2);
        assert_eq!(brute_force_min_tjoin(&g, &[0, 2]), Some(2));
    }

    #[test]
    fn contracted_prism_tjoin_is_one_spoke() {
        let g = fixtures::pri2();
        let t1 = Circuit::from_edge_cycle(&g, &[0, 1, 2]).unwrap();
        let t2 = Circuit::from_edge_cycle(&g, &[3, 4, 5]).unwrap();
        let ctr = contract_circuits(&g, &[t1, t2]).unwrap();
        let j = minimum_tjoin(&ctr.graph, &[0, 1]).unwrap();
        assert_eq!(j.total_size, 1);
        assert_eq!(brute_force_min_tjoin(&ctr.graph, &[0, 1]), Some(1));
        // Smallest parallel edge wins: contracted id 0 is original spoke 03.
        let e = *j.edge_ids.iter().next().unwrap();
        assert_eq!(ctr.edge_to_original[e], 6);
    }

    #[test]
    fn matches_brute_force_on_small_graphs() {
        // A few multigraphs with loops and parallels, all even T choices.
        let graphs = vec![
            four_cycle(),
            fixtures::k4m(),
            SignedMultigraph::from_numeric(
                3,
                &[(0, 1, 1), (0, 1, -1), (1, 2, 1), (2, 0, 1), (2, 2, 1)],
            )
            .unwrap(),
            fixtures::pri2(),
        ];
        for g in graphs {
            let n = g.vertex_count();
            for mask in 0..(1u32 << n) {
                if mask.count_ones() % 2 != 0 {
                    continue;
                }
                let terminals: Vec<VertexId> =
                    (0..n).filter(|&v| mask & (1 << v) != 0).collect();
                let ours = minimum_tjoin(&g, &terminals).map(|j| j.total_size).ok();
                let brute = brute_force_min_tjoin(&g, &terminals);
                assert_eq!(ours, brute, "graph {g:?} terminals {terminals:?}");
            }
        }
    }

    #[test]
    fn odd_terminals_rejected() {
        let g = four_cycle();
        assert!(matches!(
            minimum_tjoin(&g, &[0]),
            Err(TJoinError::OddTerminalCount(1))
        ));
    }
}
