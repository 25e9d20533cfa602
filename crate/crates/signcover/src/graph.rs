//! Signed multigraphs and the sign-circuit data model.
//!
//! A signed graph is a multigraph (loops and parallel edges allowed) whose
//! edges carry a sign in `{+1, -1}`. The covering objects are *sign-circuits*:
//! balanced circuits, and barbells made of two unbalanced circuits joined by a
//! path. Everything downstream (balance tests, colorings, cover constructions,
//! the exact oracle) is keyed by edge identity, so edge ids are stable and
//! survive contraction and switching.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;

/// Edge sign. Multiplication of signs follows the usual group law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn product(self, other: Sign) -> Sign {
        if self == other {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }

    /// Accepts the two textual encodings used by graph files.
    pub fn from_symbol(s: &str) -> Option<Sign> {
        match s {
            "+" | "+1" | "1" => Some(Sign::Positive),
            "-" | "-1" => Some(Sign::Negative),
            _ => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub sign: Sign,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    /// The endpoint that is not `w`. For a loop this is `w` itself.
    pub fn other_endpoint(&self, w: VertexId) -> VertexId {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.u, self.v)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {edge} endpoint {vertex} out of range (vertex count {vertex_count})")]
    VertexOutOfRange {
        edge: usize,
        vertex: VertexId,
        vertex_count: usize,
    },
    #[error("edge {edge} has sign {value} (must be +1 or -1)")]
    BadSign { edge: usize, value: i8 },
    #[error("circuits passed to contraction overlap at vertex {vertex}")]
    OverlappingCircuits { vertex: VertexId },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edge list does not form a closed walk: {0}")]
    NotAClosedWalk(String),
    #[error("invalid cycle forest: {0}")]
    InvalidForest(String),
}

/// A multigraph with signed edges. Immutable after construction; all
/// operations that "modify" a graph return a new one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedMultigraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    /// Incident edge ids per vertex, sorted ascending; a loop appears twice,
    /// so `incidence[v].len()` is the degree of `v`.
    incidence: Vec<Vec<EdgeId>>,
}

impl SignedMultigraph {
    /// Builds a graph from `(u, v, sign)` triples; edge ids are dense and
    /// follow input order.
    pub fn new(
        vertex_count: usize,
        edge_list: &[(VertexId, VertexId, Sign)],
    ) -> Result<SignedMultigraph, GraphError> {
        let mut edges = Vec::with_capacity(edge_list.len());
        for (i, &(u, v, sign)) in edge_list.iter().enumerate() {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(GraphError::VertexOutOfRange {
                        edge: i,
                        vertex: w,
                        vertex_count,
                    });
                }
            }
            edges.push(Edge { id: i, u, v, sign });
        }
        let mut incidence = vec![Vec::new(); vertex_count];
        for e in &edges {
            incidence[e.u].push(e.id);
            incidence[e.v].push(e.id);
        }
        for inc in &mut incidence {
            inc.sort_unstable();
        }
        Ok(SignedMultigraph {
            vertex_count,
            edges,
            incidence,
        })
    }

    /// Same as [`new`](Self::new) but with numeric signs, rejecting values
    /// other than `+1`/`-1`.
    pub fn from_numeric(
        vertex_count: usize,
        edge_list: &[(VertexId, VertexId, i8)],
    ) -> Result<SignedMultigraph, GraphError> {
        let mut typed = Vec::with_capacity(edge_list.len());
        for (i, &(u, v, s)) in edge_list.iter().enumerate() {
            let sign = match s {
                1 => Sign::Positive,
                -1 => Sign::Negative,
                other => return Err(GraphError::BadSign { edge: i, value: other }),
            };
            typed.push((u, v, sign));
        }
        SignedMultigraph::new(vertex_count, &typed)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn sign(&self, id: EdgeId) -> Sign {
        self.edges[id].sign
    }

    /// Degree of `v`; a loop counts twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.incidence[v].len()
    }

    /// Incident edge ids sorted ascending; loops listed twice.
    pub fn incident_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.incidence[v]
    }

    /// Incident edge ids without the loop duplication.
    pub fn incident_edges_dedup(&self, v: VertexId) -> Vec<EdgeId> {
        let mut out = self.incidence[v].clone();
        out.dedup();
        out
    }

    pub fn negative_edge_ids(&self) -> Vec<EdgeId> {
        self.edges
            .iter()
            .filter(|e| e.sign.is_negative())
            .map(|e| e.id)
            .collect()
    }

    pub fn is_cubic(&self) -> bool {
        (0..self.vertex_count).all(|v| self.degree(v) == 3)
    }

    /// Returns a copy with the same structure and the given signs by id.
    pub fn with_signs(&self, signs: &[Sign]) -> SignedMultigraph {
        assert_eq!(signs.len(), self.edges.len());
        let mut g = self.clone();
        for (e, &s) in g.edges.iter_mut().zip(signs) {
            e.sign = s;
        }
        g
    }

    /// Component index per vertex plus the component count, considering only
    /// edges for which `allowed` is true.
    pub(crate) fn components_filtered(&self, allowed: &[bool]) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.vertex_count];
        let mut count = 0;
        for start in 0..self.vertex_count {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = count;
            let mut queue = vec![start];
            while let Some(v) = queue.pop() {
                for &eid in &self.incidence[v] {
                    if !allowed[eid] {
                        continue;
                    }
                    let w = self.edges[eid].other_endpoint(v);
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        queue.push(w);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn components(&self) -> (Vec<usize>, usize) {
        self.components_filtered(&vec![true; self.edges.len()])
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count <= 1 || self.components().1 == 1
    }

    /// Bridges of the subgraph of allowed edges, ascending. Parallel edges and
    /// loops are never bridges; the DFS skips the entering edge by id, not by
    /// parent vertex, which keeps parallel pairs non-bridges.
    pub(crate) fn bridges_filtered(&self, allowed: &[bool]) -> Vec<EdgeId> {
        let n = self.vertex_count;
        let mut ord = vec![usize::MAX; n];
        let mut low = vec![usize::MAX; n];
        let mut result = Vec::new();
        let mut counter = 0;

        // Iterative DFS: frame = (vertex, entering edge id, incidence index).
        for root in 0..n {
            if ord[root] != usize::MAX {
                continue;
            }
            let mut stack: Vec<(VertexId, EdgeId, usize)> = vec![(root, usize::MAX, 0)];
            ord[root] = counter;
            low[root] = counter;
            counter += 1;
            while let Some(&mut (v, enter, ref mut idx)) = stack.last_mut() {
                if *idx < self.incidence[v].len() {
                    let eid = self.incidence[v][*idx];
                    *idx += 1;
                    if !allowed[eid] || eid == enter {
                        continue;
                    }
                    let e = &self.edges[eid];
                    if e.is_loop() {
                        continue;
                    }
                    let w = e.other_endpoint(v);
                    if ord[w] == usize::MAX {
                        ord[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push((w, eid, 0));
                    } else {
                        low[v] = low[v].min(ord[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&mut (p, _, _)) = stack.last_mut() {
                        low[p] = low[p].min(low[v]);
                        if low[v] > ord[p] {
                            result.push(enter);
                        }
                    }
                }
            }
        }
        result.sort_unstable();
        result
    }

    /// Bridges of the whole graph, ascending.
    pub fn bridges(&self) -> Vec<EdgeId> {
        self.bridges_filtered(&vec![true; self.edges.len()])
    }

    pub fn is_two_edge_connected(&self) -> bool {
        self.is_connected() && self.bridges().is_empty()
    }

    /// Bridgeless-blocks of the subgraph of allowed edges: the components left
    /// after deleting its bridges. Isolated vertices become singleton blocks.
    pub(crate) fn bridgeless_blocks_filtered(&self, allowed: &[bool]) -> Vec<Block> {
        let bridges: BTreeSet<EdgeId> = self.bridges_filtered(allowed).into_iter().collect();
        let mut without = allowed.to_vec();
        for &b in &bridges {
            without[b] = false;
        }
        let (comp, count) = self.components_filtered(&without);
        let mut blocks = vec![
            Block {
                vertices: Vec::new(),
                edges: Vec::new(),
            };
            count
        ];
        for v in 0..self.vertex_count {
            blocks[comp[v]].vertices.push(v);
        }
        for e in &self.edges {
            if allowed[e.id] && !bridges.contains(&e.id) {
                blocks[comp[e.u]].edges.push(e.id);
            }
        }
        blocks
    }

    pub fn bridgeless_blocks(&self) -> Vec<Block> {
        self.bridgeless_blocks_filtered(&vec![true; self.edges.len()])
    }

    pub(crate) fn all_allowed(&self) -> Vec<bool> {
        vec![true; self.edges.len()]
    }
}

/// A bridgeless-block: its vertex set and the non-bridge edges inside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

/// A circuit: a connected 2-regular subgraph, stored as a closed walk.
/// `vertices[i]` and `vertices[(i+1) % len]` are the endpoints of `edges[i]`.
/// A single loop is a circuit of length 1; a parallel pair is length 2.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Circuit {
    edges: Vec<EdgeId>,
    vertices: Vec<VertexId>,
}

impl Circuit {
    /// Builds a circuit from an already-known closed walk and canonicalizes
    /// it. Panics in debug builds if the walk is inconsistent with `g`.
    pub fn from_walk(g: &SignedMultigraph, edges: Vec<EdgeId>, vertices: Vec<VertexId>) -> Circuit {
        let c = Circuit { edges, vertices };
        debug_assert!(c.check_shape(g).is_ok(), "malformed circuit walk: {c:?}");
        c.canonical()
    }

    /// Like [`from_walk`](Self::from_walk) but returns `None` instead of
    /// asserting when the walk is not a circuit (repeated vertices, broken
    /// chain). Used by constructions whose candidate walks can degenerate.
    pub(crate) fn try_from_walk(
        g: &SignedMultigraph,
        edges: Vec<EdgeId>,
        vertices: Vec<VertexId>,
    ) -> Option<Circuit> {
        let c = Circuit { edges, vertices };
        if c.check_shape(g).is_ok() {
            Some(c.canonical())
        } else {
            None
        }
    }

    /// Reconstructs the closed walk from a cyclic edge id sequence, as read
    /// from cover files. Fails if the edges do not chain into a circuit.
    pub fn from_edge_cycle(g: &SignedMultigraph, edge_ids: &[EdgeId]) -> Result<Circuit, GraphError> {
        let bad = |msg: String| GraphError::NotAClosedWalk(msg);
        if edge_ids.is_empty() {
            return Err(bad("empty edge list".into()));
        }
        for &e in edge_ids {
            if e >= g.edge_count() {
                return Err(bad(format!("edge {e} out of range")));
            }
        }
        if edge_ids.len() == 1 {
            let e = g.edge(edge_ids[0]);
            if !e.is_loop() {
                return Err(bad(format!("single edge {} is not a loop", e.id)));
            }
            return Ok(Circuit {
                edges: vec![e.id],
                vertices: vec![e.u],
            });
        }
        // Pick the orientation of the first edge so that it chains into the
        // second, then follow shared endpoints around.
        let first = g.edge(edge_ids[0]);
        let second = g.edge(edge_ids[1]);
        let start = if first.v == second.u || first.v == second.v {
            first.u
        } else if first.u == second.u || first.u == second.v {
            first.v
        } else {
            return Err(bad(format!(
                "edges {} and {} do not share a vertex",
                first.id, second.id
            )));
        };
        let mut vertices = vec![start];
        let mut at = first.other_endpoint(start);
        for (k, &eid) in edge_ids.iter().enumerate().skip(1) {
            vertices.push(at);
            let e = g.edge(eid);
            if e.u != at && e.v != at {
                return Err(bad(format!("edge {} does not continue the walk at {at}", e.id)));
            }
            if k + 1 == edge_ids.len() {
                // Orientation of the closing edge: it must return to start.
                if e.is_loop() || (e.other_endpoint(at)) != start {
                    return Err(bad("walk does not close".into()));
                }
                at = start;
            } else {
                at = e.other_endpoint(at);
            }
        }
        let c = Circuit {
            edges: edge_ids.to_vec(),
            vertices,
        };
        c.check_shape(g).map_err(bad)?;
        Ok(c.canonical())
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edge_ids(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn vertex_sequence(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    pub fn position_of_vertex(&self, v: VertexId) -> Option<usize> {
        self.vertices.iter().position(|&w| w == v)
    }

    /// The clockwise arc from position `from` to position `to`: edges at
    /// positions `from, from+1, ..., to-1` (mod len). `from == to` yields the
    /// trivial arc at that vertex.
    pub fn arc(&self, from: usize, to: usize) -> (Vec<EdgeId>, Vec<VertexId>) {
        let n = self.len();
        let mut edges = Vec::new();
        let mut vertices = vec![self.vertices[from]];
        let mut i = from;
        while i != to {
            edges.push(self.edges[i]);
            i = (i + 1) % n;
            vertices.push(self.vertices[i]);
        }
        (edges, vertices)
    }

    /// Whole-circuit arc starting and ending at position `at` (used for the
    /// degenerate one-attachment segment).
    pub fn full_arc(&self, at: usize) -> (Vec<EdgeId>, Vec<VertexId>) {
        let n = self.len();
        let mut edges = Vec::new();
        let mut vertices = vec![self.vertices[at]];
        for k in 0..n {
            let i = (at + k) % n;
            edges.push(self.edges[i]);
            vertices.push(self.vertices[(i + 1) % n]);
        }
        (edges, vertices)
    }

    /// Canonical form: smallest vertex first, then the direction whose first
    /// step goes to the smaller neighbor (smaller edge id on ties, which
    /// resolves parallel pairs).
    pub fn canonical(&self) -> Circuit {
        let n = self.len();
        if n == 1 {
            return self.clone();
        }
        let min_pos = self
            .vertices
            .iter()
            .enumerate()
            .min_by_key(|&(_, v)| v)
            .map(|(i, _)| i)
            .unwrap();
        let rot = |k: usize| (min_pos + k) % n;
        // Forward key: next vertex and edge walking clockwise from min_pos.
        let fwd_key = (self.vertices[rot(1)], self.edges[rot(0)]);
        // Backward key: next vertex and edge walking counterclockwise.
        let back = (min_pos + n - 1) % n;
        let bwd_key = (self.vertices[back], self.edges[back]);
        let (edges, vertices) = if fwd_key <= bwd_key {
            let edges = (0..n).map(|k| self.edges[rot(k)]).collect();
            let vertices = (0..n).map(|k| self.vertices[rot(k)]).collect();
            (edges, vertices)
        } else {
            let mut edges = Vec::with_capacity(n);
            let mut vertices = Vec::with_capacity(n);
            for k in 0..n {
                vertices.push(self.vertices[(min_pos + n - k) % n]);
                edges.push(self.edges[(min_pos + n - 1 - k) % n]);
            }
            (edges, vertices)
        };
        Circuit { edges, vertices }
    }

    /// Structural check against the host graph: distinct edges, distinct
    /// vertices, consecutive incidence, closing walk.
    pub(crate) fn check_shape(&self, g: &SignedMultigraph) -> Result<(), String> {
        let n = self.edges.len();
        if n == 0 || self.vertices.len() != n {
            return Err("edge/vertex sequence length mismatch".into());
        }
        let mut seen_e = BTreeSet::new();
        for &e in &self.edges {
            if e >= g.edge_count() {
                return Err(format!("edge {e} out of range"));
            }
            if !seen_e.insert(e) {
                return Err(format!("repeated edge {e}"));
            }
        }
        let mut seen_v = BTreeSet::new();
        for &v in &self.vertices {
            if !seen_v.insert(v) {
                return Err(format!("repeated vertex {v}"));
            }
        }
        for i in 0..n {
            let e = g.edge(self.edges[i]);
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            if n == 1 {
                if !e.is_loop() || e.u != a {
                    return Err("single-edge circuit must be a loop at its vertex".into());
                }
            } else if !((e.u == a && e.v == b) || (e.u == b && e.v == a)) {
                return Err(format!("edge {} does not join {a} and {b}", e.id));
            }
        }
        Ok(())
    }
}

/// A simple path, stored as `vertices[0] -edges[0]- vertices[1] - ...`.
/// Trivial paths (a single vertex, no edges) are allowed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Path {
    edges: Vec<EdgeId>,
    vertices: Vec<VertexId>,
}

impl Path {
    pub fn new(edges: Vec<EdgeId>, vertices: Vec<VertexId>) -> Path {
        assert_eq!(vertices.len(), edges.len() + 1, "path shape mismatch");
        Path { edges, vertices }
    }

    pub fn trivial(v: VertexId) -> Path {
        Path {
            edges: Vec::new(),
            vertices: vec![v],
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edge_ids(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn vertex_sequence(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.vertices[0], *self.vertices.last().unwrap())
    }

    pub fn interior_vertices(&self) -> &[VertexId] {
        if self.vertices.len() <= 2 {
            &[]
        } else {
            &self.vertices[1..self.vertices.len() - 1]
        }
    }

    pub fn reversed(&self) -> Path {
        Path {
            edges: self.edges.iter().rev().copied().collect(),
            vertices: self.vertices.iter().rev().copied().collect(),
        }
    }

    pub(crate) fn check_shape(&self, g: &SignedMultigraph) -> Result<(), String> {
        if self.vertices.len() != self.edges.len() + 1 {
            return Err("vertex/edge count mismatch".into());
        }
        let mut seen_e = BTreeSet::new();
        for &e in &self.edges {
            if e >= g.edge_count() {
                return Err(format!("edge {e} out of range"));
            }
            if !seen_e.insert(e) {
                return Err(format!("repeated edge {e}"));
            }
        }
        let mut seen_v = BTreeSet::new();
        for &v in &self.vertices {
            if !seen_v.insert(v) {
                return Err(format!("repeated vertex {v}"));
            }
        }
        for i in 0..self.edges.len() {
            let e = g.edge(self.edges[i]);
            let (a, b) = (self.vertices[i], self.vertices[i + 1]);
            if !((e.u == a && e.v == b) || (e.u == b && e.v == a)) {
                return Err(format!("edge {} does not join {a} and {b}", e.id));
            }
        }
        Ok(())
    }
}

/// The covering objects: a balanced circuit, or two unbalanced circuits
/// joined at a single shared vertex (short barbell) or by a nontrivial path
/// meeting each circuit exactly at one end (long barbell).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignCircuit {
    Balanced(Circuit),
    ShortBarbell {
        first: Circuit,
        second: Circuit,
        shared_vertex: VertexId,
    },
    LongBarbell {
        first: Circuit,
        second: Circuit,
        path: Path,
    },
}

impl SignCircuit {
    /// Number of edges, counting circuits plus the connecting path.
    pub fn length(&self) -> usize {
        match self {
            SignCircuit::Balanced(c) => c.len(),
            SignCircuit::ShortBarbell { first, second, .. } => first.len() + second.len(),
            SignCircuit::LongBarbell { first, second, path } => {
                first.len() + second.len() + path.len()
            }
        }
    }

    /// All edge ids of the member. Valid members never repeat an edge.
    pub fn edge_ids(&self) -> Vec<EdgeId> {
        match self {
            SignCircuit::Balanced(c) => c.edge_ids().to_vec(),
            SignCircuit::ShortBarbell { first, second, .. } => {
                let mut out = first.edge_ids().to_vec();
                out.extend_from_slice(second.edge_ids());
                out
            }
            SignCircuit::LongBarbell { first, second, path } => {
                let mut out = first.edge_ids().to_vec();
                out.extend_from_slice(second.edge_ids());
                out.extend_from_slice(path.edge_ids());
                out
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SignCircuit::Balanced(_) => "balanced-circuit",
            SignCircuit::ShortBarbell { .. } => "short-barbell",
            SignCircuit::LongBarbell { .. } => "long-barbell",
        }
    }
}

/// Product of edge signs along a circuit; `Negative` means unbalanced.
pub fn circuit_sign(g: &SignedMultigraph, circuit: &Circuit) -> Sign {
    circuit
        .edge_ids()
        .iter()
        .fold(Sign::Positive, |acc, &e| acc.product(g.sign(e)))
}

/// A family of sign-circuits together with the edge set it must cover.
/// Members form a multiset: the same member may appear twice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    members: Vec<SignCircuit>,
    target_edges: BTreeSet<EdgeId>,
}

impl Cover {
    pub fn new(members: Vec<SignCircuit>, target_edges: BTreeSet<EdgeId>) -> Cover {
        Cover {
            members,
            target_edges,
        }
    }

    pub fn members(&self) -> &[SignCircuit] {
        &self.members
    }

    pub fn target_edges(&self) -> &BTreeSet<EdgeId> {
        &self.target_edges
    }

    pub fn covered_edges(&self) -> BTreeSet<EdgeId> {
        self.members
            .iter()
            .flat_map(|m| m.edge_ids())
            .collect()
    }

    /// Total length: member lengths summed with multiplicity.
    pub fn length(&self) -> usize {
        self.members.iter().map(|m| m.length()).sum()
    }

    pub fn merged(mut self, other: Cover) -> Cover {
        self.members.extend(other.members);
        self.target_edges.extend(other.target_edges);
        self
    }

    pub fn push(&mut self, member: SignCircuit) {
        self.members.push(member);
    }
}

/// Total length of a cover (sum of member edge counts with multiplicity).
pub fn cover_length(cover: &Cover) -> usize {
    cover.length()
}

/// One violated clause in a sign-circuit or cover validity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MalformedCircuit { which: &'static str, reason: String },
    MalformedPath { reason: String },
    /// A balanced-circuit member whose circuit is unbalanced, or a barbell
    /// circuit that is balanced.
    WrongParity { which: &'static str, expected: Sign },
    CircuitsShareEdge { edge: EdgeId },
    CircuitsShareVertices { count: usize },
    TrivialBarbellPath,
    PathEndpointNotOnCircuit { which: &'static str, vertex: VertexId },
    PathTouchesCircuitInterior { vertex: VertexId },
    PathReusesCircuitEdge { edge: EdgeId },
    MemberInvalid { index: usize },
    UncoveredEdge { edge: EdgeId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MalformedCircuit { which, reason } => {
                write!(f, "{which} circuit malformed: {reason}")
            }
            Violation::MalformedPath { reason } => write!(f, "path malformed: {reason}"),
            Violation::WrongParity { which, expected } => {
                write!(f, "{which} circuit has wrong sign (expected {expected})")
            }
            Violation::CircuitsShareEdge { edge } => {
                write!(f, "barbell circuits share edge {edge}")
            }
            Violation::CircuitsShareVertices { count } => {
                write!(f, "barbell circuits share {count} vertices")
            }
            Violation::TrivialBarbellPath => write!(f, "long barbell path is trivial"),
            Violation::PathEndpointNotOnCircuit { which, vertex } => {
                write!(f, "path endpoint {vertex} not on the {which} circuit")
            }
            Violation::PathTouchesCircuitInterior { vertex } => {
                write!(f, "path interior vertex {vertex} lies on a barbell circuit")
            }
            Violation::PathReusesCircuitEdge { edge } => {
                write!(f, "path reuses circuit edge {edge}")
            }
            Violation::MemberInvalid { index } => write!(f, "member {index} invalid"),
            Violation::UncoveredEdge { edge } => write!(f, "target edge {edge} uncovered"),
        }
    }
}

/// Outcome of validating a single sign-circuit: empty means valid.
#[derive(Debug, Clone, Default)]
pub struct SignCircuitReport {
    pub violations: Vec<Violation>,
}

impl SignCircuitReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the variant-specific invariants of a sign-circuit against `g`.
pub fn validate_sign_circuit(g: &SignedMultigraph, sc: &SignCircuit) -> SignCircuitReport {
    let mut report = SignCircuitReport::default();
    let check_circuit = |which: &'static str, c: &Circuit, expected: Sign, report: &mut SignCircuitReport| {
        if let Err(reason) = c.check_shape(g) {
            report.violations.push(Violation::MalformedCircuit { which, reason });
            return false;
        }
        if circuit_sign(g, c) != expected {
            report.violations.push(Violation::WrongParity { which, expected });
        }
        true
    };
    match sc {
        SignCircuit::Balanced(c) => {
            check_circuit("balanced", c, Sign::Positive, &mut report);
        }
        SignCircuit::ShortBarbell {
            first,
            second,
            shared_vertex,
        } => {
            let ok1 = check_circuit("first", first, Sign::Negative, &mut report);
            let ok2 = check_circuit("second", second, Sign::Negative, &mut report);
            if ok1 && ok2 {
                let shared_e: Vec<EdgeId> = first
                    .edge_ids()
                    .iter()
                    .filter(|e| second.contains_edge(**e))
                    .copied()
                    .collect();
                for e in shared_e {
                    report.violations.push(Violation::CircuitsShareEdge { edge: e });
                }
                let shared_v: Vec<VertexId> = first
                    .vertex_sequence()
                    .iter()
                    .filter(|v| second.contains_vertex(**v))
                    .copied()
                    .collect();
                if shared_v.len() != 1 || shared_v[0] != *shared_vertex {
                    report.violations.push(Violation::CircuitsShareVertices {
                        count: shared_v.len(),
                    });
                }
            }
        }
        SignCircuit::LongBarbell { first, second, path } => {
            let ok1 = check_circuit("first", first, Sign::Negative, &mut report);
            let ok2 = check_circuit("second", second, Sign::Negative, &mut report);
            let okp = match path.check_shape(g) {
                Ok(()) => true,
                Err(reason) => {
                    report.violations.push(Violation::MalformedPath { reason });
                    false
                }
            };
            if !(ok1 && ok2 && okp) {
                return report;
            }
            if path.is_empty() {
                report.violations.push(Violation::TrivialBarbellPath);
                return report;
            }
            for v in first.vertex_sequence() {
                if second.contains_vertex(*v) {
                    report.violations.push(Violation::CircuitsShareVertices { count: 1 });
                    break;
                }
            }
            for e in first.edge_ids().iter().chain(second.edge_ids()) {
                if path.edge_ids().contains(e) {
                    report.violations.push(Violation::PathReusesCircuitEdge { edge: *e });
                }
            }
            let (a, b) = path.endpoints();
            if !first.contains_vertex(a) {
                report.violations.push(Violation::PathEndpointNotOnCircuit {
                    which: "first",
                    vertex: a,
                });
            }
            if !second.contains_vertex(b) {
                report.violations.push(Violation::PathEndpointNotOnCircuit {
                    which: "second",
                    vertex: b,
                });
            }
            // The path meets each circuit exactly at its endpoint.
            if second.contains_vertex(a) || first.contains_vertex(b) {
                report.violations.push(Violation::PathTouchesCircuitInterior {
                    vertex: if second.contains_vertex(a) { a } else { b },
                });
            }
            for &v in path.interior_vertices() {
                if first.contains_vertex(v) || second.contains_vertex(v) {
                    report
                        .violations
                        .push(Violation::PathTouchesCircuitInterior { vertex: v });
                }
            }
        }
    }
    report
}

/// Outcome of validating a cover: per-member reports, uncovered target edges,
/// and the multiplicity of every covered edge.
#[derive(Debug, Clone)]
pub struct CoverReport {
    pub member_reports: Vec<SignCircuitReport>,
    pub uncovered: Vec<EdgeId>,
    pub multiplicities: BTreeMap<EdgeId, usize>,
}

impl CoverReport {
    pub fn is_valid(&self) -> bool {
        self.uncovered.is_empty() && self.member_reports.iter().all(|r| r.is_valid())
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, r) in self.member_reports.iter().enumerate() {
            if !r.is_valid() {
                out.push(Violation::MemberInvalid { index: i });
                out.extend(r.violations.iter().cloned());
            }
        }
        for &e in &self.uncovered {
            out.push(Violation::UncoveredEdge { edge: e });
        }
        out
    }
}

/// Validates every member and checks that the union of member edges contains
/// the target set.
pub fn validate_cover(g: &SignedMultigraph, cover: &Cover) -> CoverReport {
    let member_reports: Vec<SignCircuitReport> = cover
        .members()
        .iter()
        .map(|m| validate_sign_circuit(g, m))
        .collect();
    let mut multiplicities: BTreeMap<EdgeId, usize> = BTreeMap::new();
    for m in cover.members() {
        for e in m.edge_ids() {
            *multiplicities.entry(e).or_insert(0) += 1;
        }
    }
    let uncovered = cover
        .target_edges()
        .iter()
        .filter(|e| !multiplicities.contains_key(e))
        .copied()
        .collect();
    CoverReport {
        member_reports,
        uncovered,
        multiplicities,
    }
}

/// Circuits (blocks) joined by bridge edges into a forest-of-circuits.
/// Bridges may chain through vertices that lie on no block.
#[derive(Debug, Clone)]
pub struct CycleForest {
    blocks: Vec<Circuit>,
    bridges: Vec<EdgeId>,
}

impl CycleForest {
    /// Validates that the blocks are vertex-disjoint circuits of `g` and that
    /// the bridge edges, with blocks contracted, form a forest — equivalently,
    /// that the blocks are exactly the bridgeless-blocks of the induced
    /// subgraph.
    pub fn new(
        g: &SignedMultigraph,
        blocks: Vec<Circuit>,
        mut bridges: Vec<EdgeId>,
    ) -> Result<CycleForest, GraphError> {
        bridges.sort_unstable();
        let invalid = |msg: String| GraphError::InvalidForest(msg);
        let mut block_of = vec![usize::MAX; g.vertex_count()];
        let mut block_edges = BTreeSet::new();
        for (i, b) in blocks.iter().enumerate() {
            b.check_shape(g).map_err(invalid)?;
            for &v in b.vertex_sequence() {
                if block_of[v] != usize::MAX {
                    return Err(invalid(format!("blocks overlap at vertex {v}")));
                }
                block_of[v] = i;
            }
            for &e in b.edge_ids() {
                block_edges.insert(e);
            }
        }
        for w in bridges.windows(2) {
            if w[0] == w[1] {
                return Err(invalid(format!("duplicate bridge {}", w[0])));
            }
        }
        // Union-find over contracted nodes: one node per block, one per
        // off-block vertex. Adding a bridge inside one node or between two
        // already-connected nodes would create a circuit through bridges.
        let node_of = |v: VertexId| {
            if block_of[v] != usize::MAX {
                block_of[v]
            } else {
                blocks.len() + v
            }
        };
        let mut parent: Vec<usize> = (0..blocks.len() + g.vertex_count()).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        for &e in &bridges {
            if e >= g.edge_count() {
                return Err(invalid(format!("bridge {e} out of range")));
            }
            if block_edges.contains(&e) {
                return Err(invalid(format!("bridge {e} is a block edge")));
            }
            let edge = g.edge(e);
            let (a, b) = (node_of(edge.u), node_of(edge.v));
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return Err(invalid(format!("bridge {e} closes a cycle of bridges")));
            }
            parent[ra] = rb;
        }
        Ok(CycleForest { blocks, bridges })
    }

    pub fn blocks(&self) -> &[Circuit] {
        &self.blocks
    }

    pub fn bridges(&self) -> &[EdgeId] {
        &self.bridges
    }

    pub fn block_edge_set(&self) -> BTreeSet<EdgeId> {
        self.blocks
            .iter()
            .flat_map(|b| b.edge_ids().iter().copied())
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum::<usize>() + self.bridges.len()
    }

    /// Block index containing each vertex, or `None` for chain-through
    /// vertices.
    pub fn block_of_vertex(&self, g: &SignedMultigraph) -> Vec<Option<usize>> {
        let mut out = vec![None; g.vertex_count()];
        for (i, b) in self.blocks.iter().enumerate() {
            for &v in b.vertex_sequence() {
                out[v] = Some(i);
            }
        }
        out
    }
}

/// Result of contracting a family of vertex-disjoint circuits: the contracted
/// graph has fresh dense edge ids; `edge_to_original` maps them back, and
/// `circuit_vertices[i]` is the contracted vertex of circuit `i`.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub graph: SignedMultigraph,
    /// Original vertex -> contracted vertex.
    pub vertex_map: Vec<VertexId>,
    /// Contracted edge id -> original edge id.
    pub edge_to_original: Vec<EdgeId>,
    /// Circuit index -> contracted vertex.
    pub circuit_vertices: Vec<VertexId>,
}

/// Contracts each circuit to a single vertex. Circuit edges are deleted;
/// every other edge survives (chords become loops) and keeps its identity
/// through `edge_to_original`.
pub fn contract_circuits(
    g: &SignedMultigraph,
    circuits: &[Circuit],
) -> Result<Contraction, GraphError> {
    let mut owner = vec![usize::MAX; g.vertex_count()];
    let mut circuit_edges = vec![false; g.edge_count()];
    for (i, c) in circuits.iter().enumerate() {
        for &v in c.vertex_sequence() {
            if owner[v] != usize::MAX {
                return Err(GraphError::OverlappingCircuits { vertex: v });
            }
            owner[v] = i;
        }
        for &e in c.edge_ids() {
            circuit_edges[e] = true;
        }
    }
    let mut vertex_map = vec![usize::MAX; g.vertex_count()];
    let mut next = circuits.len();
    for v in 0..g.vertex_count() {
        vertex_map[v] = if owner[v] != usize::MAX {
            owner[v]
        } else {
            let id = next;
            next += 1;
            id
        };
    }
    let mut edge_list = Vec::new();
    let mut edge_to_original = Vec::new();
    for e in g.edges() {
        if circuit_edges[e.id] {
            continue;
        }
        edge_list.push((vertex_map[e.u], vertex_map[e.v], e.sign));
        edge_to_original.push(e.id);
    }
    let graph = SignedMultigraph::new(next, &edge_list)?;
    Ok(Contraction {
        graph,
        vertex_map,
        edge_to_original,
        circuit_vertices: (0..circuits.len()).collect(),
    })
}
