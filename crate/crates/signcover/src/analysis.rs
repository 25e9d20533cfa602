//! Balance testing with certificates, switching, and the flow-admissibility
//! decision for signed graphs.
//!
//! A signed graph is balanced when it is switching-equivalent to an
//! all-positive graph; the certificate is either a vertex potential proving
//! balance or an unbalanced circuit witnessing imbalance. Flow-admissibility
//! of a connected graph is characterized by two conditions: the graph is not
//! switching-equivalent to a signature with exactly one negative edge, and no
//! bridge separates off a balanced component.

use thiserror::Error;

use crate::graph::{Circuit, EdgeId, GraphError, Sign, SignedMultigraph, VertexId};

/// Proof of balance (a potential) or imbalance (an unbalanced circuit).
///
/// A potential assigns each vertex a sign such that every non-loop edge
/// satisfies `sign(e) = potential(u) * potential(v)` and every loop is
/// positive. A witness is a circuit with negative sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BalanceCertificate {
    Potential(Vec<Sign>),
    Witness(Circuit),
}

impl BalanceCertificate {
    pub fn is_balanced(&self) -> bool {
        matches!(self, BalanceCertificate::Potential(_))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Spanning-forest balance test restricted to `allowed` edges. Tentative
/// potentials propagate along BFS tree edges; every allowed non-tree edge is
/// then checked, and the fundamental circuit of the smallest failing edge is
/// returned as the witness.
fn balance_filtered(g: &SignedMultigraph, allowed: &[bool]) -> BalanceCertificate {
    let n = g.vertex_count();
    let mut potential = vec![Sign::Positive; n];
    let mut visited = vec![false; n];
    let mut parent_edge: Vec<Option<EdgeId>> = vec![None; n];
    let mut parent_vertex: Vec<VertexId> = (0..n).collect();
    let mut depth = vec![0usize; n];
    let mut tree_edge = vec![false; g.edge_count()];

    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &eid in g.incident_edges(v) {
                if !allowed[eid] {
                    continue;
                }
                let e = g.edge(eid);
                if e.is_loop() {
                    continue;
                }
                let w = e.other_endpoint(v);
                if !visited[w] {
                    visited[w] = true;
                    potential[w] = potential[v].product(e.sign);
                    parent_edge[w] = Some(eid);
                    parent_vertex[w] = v;
                    depth[w] = depth[v] + 1;
                    tree_edge[eid] = true;
                    queue.push_back(w);
                }
            }
        }
    }

    // Smallest failing non-tree edge yields a deterministic witness.
    for e in g.edges() {
        if !allowed[e.id] || tree_edge[e.id] {
            continue;
        }
        if e.is_loop() {
            if e.sign.is_negative() {
                let c = Circuit::from_walk(g, vec![e.id], vec![e.u]);
                return BalanceCertificate::Witness(c);
            }
            continue;
        }
        if potential[e.u].product(potential[e.v]) != e.sign {
            return BalanceCertificate::Witness(fundamental_circuit(
                g,
                e.id,
                &parent_edge,
                &parent_vertex,
                &depth,
            ));
        }
    }
    BalanceCertificate::Potential(potential)
}

/// The circuit formed by non-tree edge `eid` plus the tree path between its
/// endpoints.
fn fundamental_circuit(
    g: &SignedMultigraph,
    eid: EdgeId,
    parent_edge: &[Option<EdgeId>],
    parent_vertex: &[VertexId],
    depth: &[usize],
) -> Circuit {
    let e = g.edge(eid);
    let (mut a, mut b) = (e.u, e.v);
    let mut up_a: Vec<(EdgeId, VertexId)> = Vec::new();
    let mut up_b: Vec<(EdgeId, VertexId)> = Vec::new();
    while depth[a] > depth[b] {
        up_a.push((parent_edge[a].unwrap(), a));
        a = parent_vertex[a];
    }
    while depth[b] > depth[a] {
        up_b.push((parent_edge[b].unwrap(), b));
        b = parent_vertex[b];
    }
    while a != b {
        up_a.push((parent_edge[a].unwrap(), a));
        a = parent_vertex[a];
        up_b.push((parent_edge[b].unwrap(), b));
        b = parent_vertex[b];
    }
    // Walk: u -> ... -> lca -> ... -> v, then close with eid.
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for &(pe, at) in &up_a {
        vertices.push(at);
        edges.push(pe);
    }
    vertices.push(a); // the LCA
    for &(pe, at) in up_b.iter().rev() {
        edges.push(pe);
        vertices.push(at);
    }
    edges.push(eid);
    Circuit::from_walk(g, edges, vertices)
}

/// Balance certificate for the whole graph; disconnected graphs are balanced
/// iff every component is, with one potential vector covering all components.
pub fn is_balanced(g: &SignedMultigraph) -> BalanceCertificate {
    balance_filtered(g, &g.all_allowed())
}

/// Balance certificate for `g` minus the forbidden edges.
pub fn balance_certificate_without(
    g: &SignedMultigraph,
    forbidden_edges: &[EdgeId],
) -> BalanceCertificate {
    let mut allowed = g.all_allowed();
    for &e in forbidden_edges {
        allowed[e] = false;
    }
    balance_filtered(g, &allowed)
}

/// Reverses the sign of every non-loop edge with exactly one endpoint in the
/// set; structure and edge ids are unchanged.
pub fn apply_switching(g: &SignedMultigraph, vertex_set: &[VertexId]) -> SignedMultigraph {
    let mut in_set = vec![false; g.vertex_count()];
    for &v in vertex_set {
        in_set[v] = true;
    }
    let signs: Vec<Sign> = g
        .edges()
        .iter()
        .map(|e| {
            if !e.is_loop() && in_set[e.u] != in_set[e.v] {
                e.sign.flip()
            } else {
                e.sign
            }
        })
        .collect();
    g.with_signs(&signs)
}

/// Searches `g` minus the forbidden edges for an unbalanced circuit. The
/// returned circuit is the fundamental circuit of a spanning forest, so it
/// avoids the forbidden edges entirely.
pub fn find_unbalanced_circuit(
    g: &SignedMultigraph,
    forbidden_edges: &[EdgeId],
) -> Option<Circuit> {
    let mut allowed = g.all_allowed();
    for &e in forbidden_edges {
        allowed[e] = false;
    }
    match balance_filtered(g, &allowed) {
        BalanceCertificate::Potential(_) => None,
        BalanceCertificate::Witness(c) => Some(c),
    }
}

/// Finds an edge `e` such that `g` is unbalanced but `g - e` is balanced,
/// which holds exactly when `g` is switching-equivalent to a signature whose
/// only negative edge is `e`. Requires `g` connected.
pub fn equivalent_to_single_negative_edge(
    g: &SignedMultigraph,
) -> Result<Option<EdgeId>, AnalysisError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected.into());
    }
    if is_balanced(g).is_balanced() {
        return Ok(None);
    }
    let mut allowed = g.all_allowed();
    for e in 0..g.edge_count() {
        allowed[e] = false;
        let balanced = balance_filtered(g, &allowed).is_balanced();
        allowed[e] = true;
        if balanced {
            return Ok(Some(e));
        }
    }
    Ok(None)
}

/// Why a signed graph fails the flow-admissibility test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlowObstruction {
    /// The graph (or one component) is switching-equivalent to a signature
    /// with exactly one negative edge; deleting this edge balances it.
    SingleNegativeEdge { equivalent_edge: EdgeId },
    /// Removing this bridge leaves a balanced component.
    BridgeWithBalancedComponent { bridge: EdgeId },
}

/// Decision plus the violating edge or bridge when negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowAdmissibility {
    pub admissible: bool,
    pub obstruction: Option<FlowObstruction>,
}

impl FlowAdmissibility {
    fn yes() -> FlowAdmissibility {
        FlowAdmissibility {
            admissible: true,
            obstruction: None,
        }
    }

    fn no(obstruction: FlowObstruction) -> FlowAdmissibility {
        FlowAdmissibility {
            admissible: false,
            obstruction: Some(obstruction),
        }
    }
}

/// Flow-admissibility test. A connected graph is admissible iff it is not
/// switching-equivalent to a single-negative-edge signature and no bridge
/// has a balanced side. Disconnected graphs are tested componentwise and are
/// admissible iff every component is. A balanced bridgeless graph passes
/// both conditions (balance means zero negative edges up to switching, not
/// one), which agrees with the definitional oracle.
pub fn is_flow_admissible(g: &SignedMultigraph) -> FlowAdmissibility {
    let (comp, count) = g.components();
    for target in 0..count {
        let mut allowed = vec![false; g.edge_count()];
        for e in g.edges() {
            if comp[e.u] == target {
                allowed[e.id] = true;
            }
        }
        if let Some(obs) = component_obstruction(g, &allowed) {
            return FlowAdmissibility::no(obs);
        }
    }
    FlowAdmissibility::yes()
}

fn component_obstruction(g: &SignedMultigraph, allowed: &[bool]) -> Option<FlowObstruction> {
    let balanced = balance_filtered(g, allowed).is_balanced();
    // Condition 1 applies only to unbalanced components: some single edge
    // deletion makes the component balanced.
    if !balanced {
        let mut scratch = allowed.to_vec();
        for e in 0..g.edge_count() {
            if !allowed[e] {
                continue;
            }
            scratch[e] = false;
            let now_balanced = balance_filtered(g, &scratch).is_balanced();
            scratch[e] = true;
            if now_balanced {
                return Some(FlowObstruction::SingleNegativeEdge { equivalent_edge: e });
            }
        }
    }
    // Condition 2: no bridge may leave a balanced component behind. For a
    // balanced component any bridge violates this immediately. A side with
    // no edges at all is balanced.
    let mut scratch = allowed.to_vec();
    for b in g.bridges_filtered(allowed) {
        scratch[b] = false;
        let edge = g.edge(b);
        let (side_comp, _) = g.components_filtered(&scratch);
        for side_root in [edge.u, edge.v] {
            let mut side_allowed = vec![false; g.edge_count()];
            for e in g.edges() {
                if scratch[e.id] && side_comp[e.u] == side_comp[side_root] {
                    side_allowed[e.id] = true;
                }
            }
            if balance_filtered(g, &side_allowed).is_balanced() {
                return Some(FlowObstruction::BridgeWithBalancedComponent { bridge: b });
            }
        }
        scratch[b] = true;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::{circuit_sign, Sign};

    #[test]
    fn tri_plus_is_balanced_with_unit_potential() {
        match is_balanced(&fixtures::tri_plus()) {
            BalanceCertificate::Potential(p) => {
                assert!(p.iter().all(|&s| s == Sign::Positive));
            }
            BalanceCertificate::Witness(_) => panic!("expected balance"),
        }
    }

    #[test]
    fn tri1_witness_is_the_triangle() {
        match is_balanced(&fixtures::tri1()) {
            BalanceCertificate::Witness(c) => {
                assert_eq!(c.len(), 3);
                assert_eq!(circuit_sign(&fixtures::tri1(), &c), Sign::Negative);
            }
            BalanceCertificate::Potential(_) => panic!("expected witness"),
        }
    }

    #[test]
    fn switched_star_of_k4_is_balanced() {
        // K4 with negatives exactly at delta(vertex 0) is a switching image
        // of the all-positive K4.
        let g = SignedMultigraph::from_numeric(
            4,
            &[
                (0, 1, -1),
                (0, 2, -1),
                (0, 3, -1),
                (1, 2, 1),
                (1, 3, 1),
                (2, 3, 1),
            ],
        )
        .unwrap();
        match is_balanced(&g) {
            BalanceCertificate::Potential(p) => {
                assert_eq!(p[0].product(p[1]), Sign::Negative);
                assert_eq!(p[1].product(p[2]), Sign::Positive);
            }
            BalanceCertificate::Witness(_) => panic!("expected balance"),
        }
    }

    #[test]
    fn switching_empty_set_is_identity() {
        let g = fixtures::k4m();
        assert_eq!(apply_switching(&g, &[]), g);
    }

    #[test]
    fn switching_is_an_involution() {
        let g = fixtures::k33a();
        let s = vec![0, 2, 5];
        assert_eq!(apply_switching(&apply_switching(&g, &s), &s), g);
    }

    #[test]
    fn switching_tri_plus_at_v0() {
        let g = apply_switching(&fixtures::tri_plus(), &[0]);
        assert_eq!(g.sign(0), Sign::Negative); // 01
        assert_eq!(g.sign(1), Sign::Positive); // 12
        assert_eq!(g.sign(2), Sign::Negative); // 20
    }

    #[test]
    fn loops_never_flip() {
        let g = SignedMultigraph::new(1, &[(0, 0, Sign::Negative)]).unwrap();
        assert_eq!(apply_switching(&g, &[0]).sign(0), Sign::Negative);
    }

    #[test]
    fn circuit_sign_examples() {
        let g = fixtures::k4m();
        let c = Circuit::from_edge_cycle(&g, &[0, 4, 5, 1]).unwrap(); // 0-1-3-2
        assert_eq!(circuit_sign(&g, &c), Sign::Positive); // negatives 01, 23
        let t = Circuit::from_edge_cycle(&fixtures::tri1(), &[0, 1, 2]).unwrap();
        assert_eq!(circuit_sign(&fixtures::tri1(), &t), Sign::Negative);
    }

    #[test]
    fn find_unbalanced_circuit_in_tri1() {
        let c = find_unbalanced_circuit(&fixtures::tri1(), &[]).unwrap();
        assert_eq!(c.len(), 3);
        assert!(find_unbalanced_circuit(&fixtures::tri_plus(), &[]).is_none());
    }

    #[test]
    fn k33a_minus_outer_cycle_is_balanced() {
        let g = fixtures::k33a();
        assert!(find_unbalanced_circuit(&g, &[0, 1, 2, 3, 4, 5]).is_none());
    }

    #[test]
    fn single_negative_edge_equivalence() {
        assert_eq!(
            equivalent_to_single_negative_edge(&fixtures::tri1()).unwrap(),
            Some(0)
        );
        // K4M: deleting any single edge leaves an unbalanced triangle.
        assert_eq!(equivalent_to_single_negative_edge(&fixtures::k4m()).unwrap(), None);
        assert_eq!(
            equivalent_to_single_negative_edge(&fixtures::tri_plus()).unwrap(),
            None
        );
    }

    #[test]
    fn single_negative_requires_connected() {
        let g = SignedMultigraph::from_numeric(4, &[(0, 1, -1), (2, 3, 1)]).unwrap();
        assert!(equivalent_to_single_negative_edge(&g).is_err());
    }

    #[test]
    fn tri1_is_not_flow_admissible() {
        let r = is_flow_admissible(&fixtures::tri1());
        assert!(!r.admissible);
        assert!(matches!(
            r.obstruction,
            Some(FlowObstruction::SingleNegativeEdge { .. })
        ));
    }

    #[test]
    fn k4m_is_flow_admissible() {
        assert!(is_flow_admissible(&fixtures::k4m()).admissible);
    }

    #[test]
    fn bridge_with_balanced_side_blocks_admissibility() {
        // Two all-positive triangles joined by a bridge.
        let g = SignedMultigraph::from_numeric(
            6,
            &[
                (0, 1, 1),
                (1, 2, 1),
                (2, 0, 1),
                (3, 4, 1),
                (4, 5, 1),
                (5, 3, 1),
                (2, 3, 1),
            ],
        )
        .unwrap();
        let r = is_flow_admissible(&g);
        assert!(!r.admissible);
        assert_eq!(
            r.obstruction,
            Some(FlowObstruction::BridgeWithBalancedComponent { bridge: 6 })
        );
    }

    #[test]
    fn balanced_bridgeless_graph_is_admissible() {
        assert!(is_flow_admissible(&fixtures::tri_plus()).admissible);
    }

    #[test]
    fn two_negative_loops_form_admissible_graph() {
        let g = SignedMultigraph::new(
            1,
            &[(0, 0, Sign::Negative), (0, 0, Sign::Negative)],
        )
        .unwrap();
        assert!(is_flow_admissible(&g).admissible);
        let lone = SignedMultigraph::new(1, &[(0, 0, Sign::Negative)]).unwrap();
        assert!(!is_flow_admissible(&lone).admissible);
    }

    #[test]
    fn unbalanced_dumbbell_with_bridge_is_admissible() {
        let g = SignedMultigraph::from_numeric(
            6,
            &[
                (0, 1, -1),
                (1, 2, 1),
                (2, 0, 1),
                (3, 4, -1),
                (4, 5, 1),
                (5, 3, 1),
                (2, 3, 1),
            ],
        )
        .unwrap();
        assert!(is_flow_admissible(&g).admissible);
    }
}
