//! Proper 3-edge colorings of cubic graphs: validation, exhaustive
//! backtracking search, class parities, two-factor extraction, and the
//! color swap on a circuit.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::graph::{Circuit, EdgeId, SignedMultigraph, VertexId};

/// The three color classes, ordered `R < B < Y` for all tie-breaking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ColorClass {
    R,
    B,
    Y,
}

pub const ALL_CLASSES: [ColorClass; 3] = [ColorClass::R, ColorClass::B, ColorClass::Y];

impl ColorClass {
    pub fn index(self) -> usize {
        match self {
            ColorClass::R => 0,
            ColorClass::B => 1,
            ColorClass::Y => 2,
        }
    }

    pub fn from_symbol(s: &str) -> Option<ColorClass> {
        match s {
            "R" => Some(ColorClass::R),
            "B" => Some(ColorClass::B),
            "Y" => Some(ColorClass::Y),
            _ => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            ColorClass::R => 'R',
            ColorClass::B => 'B',
            ColorClass::Y => 'Y',
        }
    }
}

impl fmt::Display for ColorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A proper 3-edge coloring, keyed by edge id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColoring3 {
    class_of: Vec<ColorClass>,
}

impl EdgeColoring3 {
    pub fn new(class_of: Vec<ColorClass>) -> EdgeColoring3 {
        EdgeColoring3 { class_of }
    }

    pub fn class_of(&self, e: EdgeId) -> ColorClass {
        self.class_of[e]
    }

    pub fn classes(&self) -> &[ColorClass] {
        &self.class_of
    }

    pub fn class_edges(&self, class: ColorClass) -> Vec<EdgeId> {
        (0..self.class_of.len())
            .filter(|&e| self.class_of[e] == class)
            .collect()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("graph is not cubic (vertex {vertex} has degree {degree})")]
    NotCubic { vertex: VertexId, degree: usize },
    #[error("graph is not connected")]
    NotConnected,
    #[error("coloring length {got} does not match edge count {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("search exceeded the node budget of {budget}")]
    BudgetExceeded { budget: u64 },
    #[error("circuit does not alternate between the two classes")]
    NotAlternating,
}

/// One vertex where properness fails, with the offending edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringViolation {
    pub vertex: VertexId,
    pub edges: Vec<EdgeId>,
    pub class: ColorClass,
}

#[derive(Debug, Clone, Default)]
pub struct ColoringReport {
    pub violations: Vec<ColoringViolation>,
}

impl ColoringReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn require_cubic(g: &SignedMultigraph) -> Result<(), ColoringError> {
    for v in 0..g.vertex_count() {
        if g.degree(v) != 3 {
            return Err(ColoringError::NotCubic {
                vertex: v,
                degree: g.degree(v),
            });
        }
    }
    Ok(())
}

/// Accepts iff every vertex of the cubic graph sees three distinct classes.
pub fn validate_coloring(
    g: &SignedMultigraph,
    f: &EdgeColoring3,
) -> Result<ColoringReport, ColoringError> {
    require_cubic(g)?;
    if f.classes().len() != g.edge_count() {
        return Err(ColoringError::LengthMismatch {
            got: f.classes().len(),
            expected: g.edge_count(),
        });
    }
    let mut report = ColoringReport::default();
    for v in 0..g.vertex_count() {
        for class in ALL_CLASSES {
            let here: Vec<EdgeId> = g
                .incident_edges(v)
                .iter()
                .copied()
                .filter(|&e| f.class_of(e) == class)
                .collect();
            // A loop appears twice in the incidence list and is therefore
            // reported here as a doubled class, which is correct: a vertex
            // with a loop can never be properly colored.
            if here.len() > 1 {
                let mut edges = here;
                edges.dedup();
                report.violations.push(ColoringViolation {
                    vertex: v,
                    edges,
                    class,
                });
            }
        }
    }
    Ok(report)
}

/// Exhaustive backtracking search for a proper 3-edge coloring.
///
/// Edges are assigned in id order with classes tried `R < B < Y`; symmetry is
/// broken by pinning the three edges at vertex 0 to `R`, `B`, `Y` in id
/// order, which is complete because class names can always be permuted.
/// Graphs with a loop have no proper coloring and return `None` immediately.
/// Exceeding `node_budget` assignments is an error, distinct from a
/// completed search that found nothing.
pub fn find_coloring(
    g: &SignedMultigraph,
    node_budget: u64,
) -> Result<Option<EdgeColoring3>, ColoringError> {
    require_cubic(g)?;
    if !g.is_connected() {
        return Err(ColoringError::NotConnected);
    }
    if g.edges().iter().any(|e| e.is_loop()) {
        return Ok(None);
    }
    if g.vertex_count() == 0 {
        return Ok(Some(EdgeColoring3::new(Vec::new())));
    }

    let m = g.edge_count();
    let mut class_of: Vec<Option<ColorClass>> = vec![None; m];
    // used[v] bit k set when some incident edge of v has class k.
    let mut used: Vec<u8> = vec![0; g.vertex_count()];
    let pinned = g.incident_edges_dedup(0);
    debug_assert_eq!(pinned.len(), 3);
    for (k, &e) in pinned.iter().enumerate() {
        let class = ALL_CLASSES[k];
        class_of[e] = Some(class);
        let edge = g.edge(e);
        used[edge.u] |= 1 << class.index();
        used[edge.v] |= 1 << class.index();
    }
    // A pinned pair could already clash (parallel edges at vertex 0 are fine,
    // they get distinct classes; only the other endpoint could object).
    for &e in &pinned {
        let edge = g.edge(e);
        for v in [edge.u, edge.v] {
            let mut count = 0;
            for &e2 in g.incident_edges(v) {
                if let Some(c) = class_of[e2] {
                    if Some(c) == class_of[e] && e2 != e {
                        count += 1;
                    }
                }
            }
            if count > 0 {
                return Ok(None);
            }
        }
    }

    let free: Vec<EdgeId> = (0..m).filter(|&e| class_of[e].is_none()).collect();
    let mut nodes: u64 = 0;
    let found = search(g, &free, 0, &mut class_of, &mut used, &mut nodes, node_budget)?;
    if !found {
        return Ok(None);
    }
    Ok(Some(EdgeColoring3::new(
        class_of.into_iter().map(|c| c.unwrap()).collect(),
    )))
}

fn search(
    g: &SignedMultigraph,
    free: &[EdgeId],
    at: usize,
    class_of: &mut Vec<Option<ColorClass>>,
    used: &mut Vec<u8>,
    nodes: &mut u64,
    budget: u64,
) -> Result<bool, ColoringError> {
    if at == free.len() {
        return Ok(true);
    }
    let eid = free[at];
    let edge = g.edge(eid);
    for class in ALL_CLASSES {
        let bit = 1u8 << class.index();
        if used[edge.u] & bit != 0 || used[edge.v] & bit != 0 {
            continue;
        }
        *nodes += 1;
        if *nodes > budget {
            return Err(ColoringError::BudgetExceeded { budget });
        }
        class_of[eid] = Some(class);
        used[edge.u] |= bit;
        used[edge.v] |= bit;
        if search(g, free, at + 1, class_of, used, nodes, budget)? {
            return Ok(true);
        }
        class_of[eid] = None;
        used[edge.u] &= !bit;
        used[edge.v] &= !bit;
    }
    Ok(false)
}

/// Parity of `|class ∩ E_N|`: true when the class contains an odd number of
/// negative edges.
pub fn class_negativity(g: &SignedMultigraph, f: &EdgeColoring3, class: ColorClass) -> bool {
    g.edges()
        .iter()
        .filter(|e| f.class_of(e.id) == class && e.sign.is_negative())
        .count()
        % 2
        == 1
}

/// Permutes class names so that `R` and `B` have equal negativity parity
/// (always possible: among three parities two coincide). Candidate
/// permutations are tried in lexicographic order of their image tuple, so the
/// identity wins whenever it qualifies.
pub fn relabel_for_parity(g: &SignedMultigraph, f: &EdgeColoring3) -> EdgeColoring3 {
    use ColorClass::*;
    let parity = [
        class_negativity(g, f, R),
        class_negativity(g, f, B),
        class_negativity(g, f, Y),
    ];
    let permutations: [[ColorClass; 3]; 6] = [
        [R, B, Y],
        [R, Y, B],
        [B, R, Y],
        [B, Y, R],
        [Y, R, B],
        [Y, B, R],
    ];
    for perm in permutations {
        // perm[i] is the new name of old class i; the new R / new B classes
        // are the preimages of R and B.
        let pre_r = perm.iter().position(|&c| c == R).unwrap();
        let pre_b = perm.iter().position(|&c| c == B).unwrap();
        if parity[pre_r] == parity[pre_b] {
            let relabeled = f
                .classes()
                .iter()
                .map(|&c| perm[c.index()])
                .collect();
            return EdgeColoring3::new(relabeled);
        }
    }
    unreachable!("two of three parities always coincide");
}

/// Decomposes the union of two classes into its circuits. In a properly
/// colored cubic graph every vertex has degree exactly 2 in the union, so
/// the components are circuits covering every vertex once. Circuits are
/// reported in order of their smallest vertex, each in canonical form.
pub fn two_factor(
    g: &SignedMultigraph,
    f: &EdgeColoring3,
    class_a: ColorClass,
    class_b: ColorClass,
) -> Vec<Circuit> {
    assert_ne!(class_a, class_b, "two_factor needs distinct classes");
    let in_union = |e: EdgeId| f.class_of(e) == class_a || f.class_of(e) == class_b;
    let mut visited = vec![false; g.vertex_count()];
    let mut circuits = Vec::new();
    for start in 0..g.vertex_count() {
        if visited[start] {
            continue;
        }
        let mut union_edges: Vec<EdgeId> = g
            .incident_edges(start)
            .iter()
            .copied()
            .filter(|&e| in_union(e))
            .collect();
        union_edges.dedup();
        debug_assert_eq!(union_edges.len(), 2, "union must be 2-regular");
        // Canonical first step: toward the smaller neighbor, smaller edge id
        // on ties.
        union_edges.sort_by_key(|&e| (g.edge(e).other_endpoint(start), e));
        let first = union_edges[0];
        let mut vertices = vec![start];
        let mut edges = vec![first];
        visited[start] = true;
        let mut prev_edge = first;
        let mut at = g.edge(first).other_endpoint(start);
        while at != start {
            visited[at] = true;
            vertices.push(at);
            let next = g
                .incident_edges(at)
                .iter()
                .copied()
                .find(|&e| in_union(e) && e != prev_edge)
                .expect("2-regular union always continues");
            edges.push(next);
            prev_edge = next;
            at = g.edge(next).other_endpoint(at);
        }
        circuits.push(Circuit::from_walk(g, edges, vertices));
    }
    circuits
}

/// Exchanges `class_a` and `class_b` on the edges of a circuit that
/// alternates between them (as every circuit of the `(a, b)` two-factor
/// does). Properness is preserved; the negativity parities of both classes
/// flip exactly when the circuit is unbalanced.
pub fn swap_on_circuit(
    f: &EdgeColoring3,
    circuit: &Circuit,
    class_a: ColorClass,
    class_b: ColorClass,
) -> Result<EdgeColoring3, ColoringError> {
    let ids = circuit.edge_ids();
    for (k, &e) in ids.iter().enumerate() {
        let here = f.class_of(e);
        if here != class_a && here != class_b {
            return Err(ColoringError::NotAlternating);
        }
        let next = f.class_of(ids[(k + 1) % ids.len()]);
        if next == here {
            return Err(ColoringError::NotAlternating);
        }
    }
    let mut classes = f.classes().to_vec();
    for &e in ids {
        classes[e] = if classes[e] == class_a { class_b } else { class_a };
    }
    Ok(EdgeColoring3::new(classes))
}

/// Brute-force 3-edge-colorability over all class assignments; test oracle
/// for the backtracking search on small graphs.
#[doc(hidden)]
pub fn colorable_by_enumeration(g: &SignedMultigraph) -> bool {
    let m = g.edge_count();
    assert!(m <= 12, "enumeration oracle is for small graphs");
    let mut assignment = vec![ColorClass::R; m];
    'outer: for code in 0..3usize.pow(m as u32) {
        let mut c = code;
        for e in 0..m {
            assignment[e] = ALL_CLASSES[c % 3];
            c /= 3;
        }
        for v in 0..g.vertex_count() {
            let inc = g.incident_edges(v);
            for i in 0..inc.len() {
                for j in (i + 1)..inc.len() {
                    if inc[i] == inc[j] || assignment[inc[i]] == assignment[inc[j]] {
                        continue 'outer;
                    }
                }
            }
        }
        return true;
    }
    false
}

/// BFS over the union structure; used by tests that need a deterministic
/// queue order. Exposed for reuse in cover construction tests.
#[doc(hidden)]
pub fn bfs_order(g: &SignedMultigraph, start: VertexId) -> Vec<VertexId> {
    let mut seen = vec![false; g.vertex_count()];
    let mut order = Vec::new();
    let mut q = VecDeque::from([start]);
    seen[start] = true;
    while let Some(v) = q.pop_front() {
        order.push(v);
        for &e in g.incident_edges(v) {
            let w = g.edge(e).other_endpoint(v);
            if !seen[w] {
                seen[w] = true;
                q.push_back(w);
            }
        }
    }
    order
}
