//! Covering a single unbalanced circuit when everything off it is balanced.
//!
//! After switching the host so all off-circuit edges are positive, each
//! component of the rest divides the circuit into segments between its
//! attachments. A component seeing at least three negative segments yields
//! three balanced circuits of which any two cover the circuit (case 1);
//! otherwise every component determines exactly one negative segment, and a
//! minimal cover by the complementary cosegments closes each with a path
//! through its component (case 2). Either way the result is certified at
//! `9 * length <= 8 * |E| + 9 * |C|`.

use std::collections::{BTreeSet, VecDeque};

use crate::analysis::{apply_switching, balance_certificate_without, BalanceCertificate};
use crate::graph::{
    circuit_sign, validate_cover, validate_sign_circuit, Circuit, Cover, EdgeId, Path, Sign,
    SignCircuit, SignedMultigraph, VertexId,
};

use super::{internal, CoverBuildError, TraceLog};

/// Which branch of the construction applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tech1Case {
    /// Some component determines three or more negative segments.
    ThreeNegativeSegments,
    /// Each component determines exactly one; a minimal cosegment cover is
    /// closed through the components.
    CosegmentCover,
}

/// One component of the graph minus a circuit's edges. Circuit vertices
/// belong to the component their third edge leads into.
#[derive(Debug, Clone)]
pub struct OffCircuitComponent {
    pub id: usize,
    pub vertices: Vec<VertexId>,
}

/// Components of `g - E(C)`, ordered and indexed by smallest vertex.
pub fn off_circuit_components(g: &SignedMultigraph, circuit: &Circuit) -> Vec<OffCircuitComponent> {
    let mut allowed = g.all_allowed();
    for &e in circuit.edge_ids() {
        allowed[e] = false;
    }
    let (comp_of, count) = g.components_filtered(&allowed);
    let mut components = vec![
        OffCircuitComponent {
            id: 0,
            vertices: Vec::new()
        };
        count
    ];
    for v in 0..g.vertex_count() {
        components[comp_of[v]].vertices.push(v);
    }
    for (id, c) in components.iter_mut().enumerate() {
        c.id = id;
    }
    components
}

/// A maximal sub-path of the circuit between consecutive attachments of one
/// component; negative when it carries an odd number of negative edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub start: VertexId,
    pub end: VertexId,
    pub edge_ids: Vec<EdgeId>,
    pub negative: bool,
}

/// The segment structure one component induces on the circuit: attachments
/// in clockwise order from the circuit's canonical start, and the segments
/// between them.
#[derive(Debug, Clone)]
pub struct SegmentDecomposition {
    pub component: usize,
    pub attachments: Vec<VertexId>,
    pub segments: Vec<Segment>,
}

impl SegmentDecomposition {
    pub fn negative_segments(&self) -> Vec<&Segment> {
        self.segments.iter().filter(|s| s.negative).collect()
    }
}

/// Divides the circuit by the attachments of one component. The caller must
/// have switched `g` so that all off-circuit edges are positive; the number
/// of negative segments is then odd and is asserted.
pub fn segment_decomposition(
    g: &SignedMultigraph,
    circuit: &Circuit,
    component: &OffCircuitComponent,
) -> Result<SegmentDecomposition, CoverBuildError> {
    let members: BTreeSet<VertexId> = component.vertices.iter().copied().collect();
    let attachments: Vec<VertexId> = circuit
        .vertex_sequence()
        .iter()
        .copied()
        .filter(|v| members.contains(v))
        .collect();
    if attachments.is_empty() {
        return Err(CoverBuildError::NoAttachment {
            component: component.id,
        });
    }
    let negativity = |edges: &[EdgeId]| {
        edges.iter().filter(|&&e| g.sign(e).is_negative()).count() % 2 == 1
    };
    let mut segments = Vec::new();
    if attachments.len() == 1 {
        let at = circuit.position_of_vertex(attachments[0]).unwrap();
        let (edges, _) = circuit.full_arc(at);
        segments.push(Segment {
            start: attachments[0],
            end: attachments[0],
            negative: negativity(&edges),
            edge_ids: edges,
        });
    } else {
        for (k, &a) in attachments.iter().enumerate() {
            let b = attachments[(k + 1) % attachments.len()];
            let (edges, _) = circuit.arc(
                circuit.position_of_vertex(a).unwrap(),
                circuit.position_of_vertex(b).unwrap(),
            );
            segments.push(Segment {
                start: a,
                end: b,
                negative: negativity(&edges),
                edge_ids: edges,
            });
        }
    }
    let negative_count = segments.iter().filter(|s| s.negative).count();
    if negative_count % 2 != 1 {
        return Err(CoverBuildError::SegmentParity {
            component: component.id,
            count: negative_count,
        });
    }
    Ok(SegmentDecomposition {
        component: component.id,
        attachments,
        segments,
    })
}

/// The complementary arc of a component's unique negative segment, running
/// clockwise from `x` to `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cosegment {
    pub x: VertexId,
    pub y: VertexId,
    pub edge_ids: Vec<EdgeId>,
    pub component: usize,
}

/// An inclusion-minimal family of cosegments covering the circuit, ordered
/// clockwise by start vertex. When minimal, no edge lies in more than two
/// cosegments and the endpoints interleave.
#[derive(Debug, Clone)]
pub struct CosegmentCover {
    pub cosegments: Vec<Cosegment>,
    pub minimal: bool,
}

/// Builds the minimal cosegment cover for case 2: every component must
/// determine exactly one negative segment. Starts from all cosegments
/// (which cover the circuit when the host is flow-admissible) and removes
/// removable ones greedily, smallest component id first.
pub fn minimal_cosegment_cover(
    g: &SignedMultigraph,
    circuit: &Circuit,
    decompositions: &[SegmentDecomposition],
) -> Result<CosegmentCover, CoverBuildError> {
    if let Err(reason) = circuit.check_shape(g) {
        return Err(CoverBuildError::Precondition(reason));
    }
    let mut cosegments = Vec::new();
    for d in decompositions {
        let negs = d.negative_segments();
        if negs.len() != 1 {
            return Err(CoverBuildError::Precondition(format!(
                "component {} determines {} negative segments; exactly one required",
                d.component,
                negs.len()
            )));
        }
        let seg = negs[0];
        // Cosegment = complement of the negative segment: clockwise from its
        // end back to its start. A whole-circuit segment leaves it empty.
        let (edge_ids, _) = if seg.start == seg.end && seg.edge_ids.len() == circuit.len() {
            (Vec::new(), Vec::new())
        } else {
            circuit.arc(
                circuit.position_of_vertex(seg.end).unwrap(),
                circuit.position_of_vertex(seg.start).unwrap(),
            )
        };
        cosegments.push(Cosegment {
            x: seg.end,
            y: seg.start,
            edge_ids,
            component: d.component,
        });
    }
    let union = |kept: &[bool]| -> BTreeSet<EdgeId> {
        cosegments
            .iter()
            .enumerate()
            .filter(|(i, _)| kept[*i])
            .flat_map(|(_, c)| c.edge_ids.iter().copied())
            .collect()
    };
    let mut kept = vec![true; cosegments.len()];
    let all: BTreeSet<EdgeId> = circuit.edge_ids().iter().copied().collect();
    if let Some(&e) = all.difference(&union(&kept)).next() {
        return Err(CoverBuildError::CosegmentsDontCover { edge: e });
    }
    // Greedy removal keeps the family covering; one pass in component order
    // reaches inclusion-minimality.
    for i in 0..cosegments.len() {
        kept[i] = false;
        if union(&kept) != all {
            kept[i] = true;
        }
    }
    let mut retained: Vec<Cosegment> = cosegments
        .into_iter()
        .enumerate()
        .filter(|(i, _)| kept[*i])
        .map(|(_, c)| c)
        .collect();
    if retained.len() < 2 {
        return Err(CoverBuildError::ClaimViolation(format!(
            "minimal cover has {} cosegments; at least two required",
            retained.len()
        )));
    }
    // Claim: no edge lies in more than two cosegments of the minimal cover.
    for &e in circuit.edge_ids() {
        let count = retained
            .iter()
            .filter(|c| c.edge_ids.contains(&e))
            .count();
        if count > 2 {
            return Err(CoverBuildError::ClaimViolation(format!(
                "edge {e} lies in {count} cosegments of the minimal cover"
            )));
        }
    }
    retained.sort_by_key(|c| circuit.position_of_vertex(c.x).unwrap());
    check_interleaving(circuit, &retained)?;
    Ok(CosegmentCover {
        cosegments: retained,
        minimal: true,
    })
}

/// With the cover ordered clockwise by `x`, the endpoints must appear as
/// `x_1, y_t, x_2, y_1, ..., x_t, y_{t-1}` around the circuit.
fn check_interleaving(circuit: &Circuit, cover: &[Cosegment]) -> Result<(), CoverBuildError> {
    let t = cover.len();
    let n = circuit.len();
    let base = circuit.position_of_vertex(cover[0].x).unwrap();
    let rel = |v: VertexId| (circuit.position_of_vertex(v).unwrap() + n - base) % n;
    let mut expected = Vec::with_capacity(2 * t);
    for i in 0..t {
        expected.push(rel(cover[i].x));
        expected.push(rel(cover[(i + t - 1) % t].y));
    }
    let sorted = expected.windows(2).all(|w| w[0] < w[1]);
    if !sorted {
        return Err(CoverBuildError::ClaimViolation(
            "cosegment endpoints do not interleave clockwise".into(),
        ));
    }
    Ok(())
}

/// Deterministic BFS shortest path between two vertices of one off-circuit
/// component, using only non-circuit edges.
fn component_path(
    g: &SignedMultigraph,
    banned: &[bool],
    members: &BTreeSet<VertexId>,
    from: VertexId,
    to: VertexId,
) -> Option<Path> {
    bfs_to_targets(g, banned, members, from, &BTreeSet::from([to]), None)
}

/// BFS from `from` stopping at the first vertex of `targets`; vertices in
/// `no_expand` are never walked through. Adjacency explored in
/// (neighbor, edge id) order for determinism.
fn bfs_to_targets(
    g: &SignedMultigraph,
    banned: &[bool],
    members: &BTreeSet<VertexId>,
    from: VertexId,
    targets: &BTreeSet<VertexId>,
    no_expand: Option<&BTreeSet<VertexId>>,
) -> Option<Path> {
    let mut parent: Vec<Option<(EdgeId, VertexId)>> = vec![None; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    seen[from] = true;
    if targets.contains(&from) {
        return Some(Path::trivial(from));
    }
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        let mut inc: Vec<(VertexId, EdgeId)> = g
            .incident_edges(v)
            .iter()
            .filter(|&&e| !banned[e])
            .map(|&e| (g.edge(e).other_endpoint(v), e))
            .collect();
        inc.sort_unstable();
        inc.dedup();
        for (w, e) in inc {
            if w == v || seen[w] || !members.contains(&w) {
                continue;
            }
            seen[w] = true;
            parent[w] = Some((e, v));
            if targets.contains(&w) {
                let mut edges = Vec::new();
                let mut vertices = vec![w];
                let mut at = w;
                while at != from {
                    let (pe, pv) = parent[at].unwrap();
                    edges.push(pe);
                    vertices.push(pv);
                    at = pv;
                }
                edges.reverse();
                vertices.reverse();
                return Some(Path::new(edges, vertices));
            }
            if no_expand.map_or(true, |s| !s.contains(&w)) {
                queue.push_back(w);
            }
        }
    }
    None
}

fn reversed(edges: &[EdgeId], vertices: &[VertexId]) -> (Vec<EdgeId>, Vec<VertexId>) {
    (
        edges.iter().rev().copied().collect(),
        vertices.iter().rev().copied().collect(),
    )
}

/// Concatenates open walks whose endpoints chain, into circuit form
/// (`vertices.len() == edges.len()`, closing back to the start). Returns
/// `None` when the pieces do not chain or the walk does not close.
fn close_walk(parts: &[(Vec<EdgeId>, Vec<VertexId>)]) -> Option<(Vec<EdgeId>, Vec<VertexId>)> {
    let mut edges: Vec<EdgeId> = Vec::new();
    let mut vertices: Vec<VertexId> = Vec::new();
    for (pe, pv) in parts {
        if pv.is_empty() {
            return None;
        }
        match vertices.last() {
            None => vertices.extend_from_slice(pv),
            Some(&last) => {
                if last != pv[0] {
                    return None;
                }
                vertices.extend_from_slice(&pv[1..]);
            }
        }
        edges.extend_from_slice(pe);
    }
    if edges.is_empty() || vertices.first() != vertices.last() {
        return None;
    }
    vertices.pop();
    Some((edges, vertices))
}

/// Covers an unbalanced circuit `C` of a cubic flow-admissible graph whose
/// remainder `g - E(C)` is balanced, certifying
/// `9 * length <= 8 * |E| + 9 * |C|`. Works on a switched copy; the returned
/// cover is expressed in original edge ids (sign-circuit status is
/// switching-invariant).
pub fn tech1_cover(
    g: &SignedMultigraph,
    circuit: &Circuit,
    log: &mut TraceLog,
) -> Result<(Cover, Tech1Case), CoverBuildError> {
    if !g.is_cubic() {
        return Err(CoverBuildError::NotCubic);
    }
    if circuit_sign(g, circuit) != Sign::Negative {
        return Err(CoverBuildError::Precondition(
            "tech1 needs an unbalanced circuit".into(),
        ));
    }
    let potential = match balance_certificate_without(g, circuit.edge_ids()) {
        BalanceCertificate::Potential(p) => p,
        BalanceCertificate::Witness(_) => {
            return Err(CoverBuildError::Precondition(
                "graph minus the circuit is not balanced".into(),
            ))
        }
    };
    let switch_set: Vec<VertexId> = (0..g.vertex_count())
        .filter(|&v| potential[v] == Sign::Negative)
        .collect();
    let gs = apply_switching(g, &switch_set);
    debug_assert!(gs
        .edges()
        .iter()
        .all(|e| circuit.contains_edge(e.id) || !e.sign.is_negative()));

    let components = off_circuit_components(&gs, circuit);
    let mut decompositions = Vec::new();
    for comp in &components {
        decompositions.push(segment_decomposition(&gs, circuit, comp)?);
    }
    let mut banned = vec![false; g.edge_count()];
    for &e in circuit.edge_ids() {
        banned[e] = true;
    }

    let rich = decompositions
        .iter()
        .position(|d| d.negative_segments().len() >= 3);
    let (members, case) = match rich {
        Some(idx) => (
            case_one(&gs, circuit, &components[idx], &decompositions[idx], &banned, log)?,
            Tech1Case::ThreeNegativeSegments,
        ),
        None => (
            case_two(&gs, circuit, &components, &decompositions, &banned, log)?,
            Tech1Case::CosegmentCover,
        ),
    };

    let target: BTreeSet<EdgeId> = circuit.edge_ids().iter().copied().collect();
    let cover = Cover::new(members, target);
    let report = validate_cover(g, &cover);
    if !report.is_valid() {
        return Err(internal(format!(
            "tech1 produced an invalid cover: {:?}",
            report.violations()
        )));
    }
    log.check(
        "tech1-8/9+C",
        cover.length(),
        9,
        8 * g.edge_count() as u64 + 9 * circuit.len() as u64,
    )?;
    Ok((cover, case))
}

/// Case 1: three consecutive negative segments of one component. The circuit
/// splits at their start attachments into three odd pieces; two paths inside
/// the component close them into three balanced circuits, any valid two of
/// which cover the circuit. The shortest valid pair is returned.
fn case_one(
    gs: &SignedMultigraph,
    circuit: &Circuit,
    component: &OffCircuitComponent,
    decomposition: &SegmentDecomposition,
    banned: &[bool],
    log: &mut TraceLog,
) -> Result<Vec<SignCircuit>, CoverBuildError> {
    let members: BTreeSet<VertexId> = component.vertices.iter().copied().collect();
    let negs = decomposition.negative_segments();
    let (u1, u2, u3) = (negs[0].start, negs[1].start, negs[2].start);
    let p1 = component_path(gs, banned, &members, u1, u2)
        .ok_or_else(|| internal("component path u1-u2 missing"))?;
    let p1_vertices: BTreeSet<VertexId> = p1.vertex_sequence().iter().copied().collect();
    let p2 = bfs_to_targets(gs, banned, &members, u3, &p1_vertices, Some(&p1_vertices))
        .ok_or_else(|| internal("component path u3-P1 missing"))?;
    let junction = p2.endpoints().1;
    let jpos = p1
        .vertex_sequence()
        .iter()
        .position(|&v| v == junction)
        .expect("junction on P1");
    let p11 = (
        p1.edge_ids()[..jpos].to_vec(),
        p1.vertex_sequence()[..=jpos].to_vec(),
    );
    let p12 = (
        p1.edge_ids()[jpos..].to_vec(),
        p1.vertex_sequence()[jpos..].to_vec(),
    );
    let pos = |v| circuit.position_of_vertex(v).unwrap();
    let arc = |a: VertexId, b: VertexId| circuit.arc(pos(a), pos(b));
    let p2_fwd = (p2.edge_ids().to_vec(), p2.vertex_sequence().to_vec());

    // B1 = P1 + clockwise u2->u1; B2 = u1->u3 + reverse P2 + reverse P11;
    // B3 = reverse P12 + reverse P2' (v->u3) + u3->u2.
    let b1 = close_walk(&[
        (p1.edge_ids().to_vec(), p1.vertex_sequence().to_vec()),
        arc(u2, u1),
    ]);
    let b2 = close_walk(&[
        arc(u1, u3),
        p2_fwd.clone(),
        reversed(&p11.0, &p11.1),
    ]);
    let b3 = close_walk(&[
        reversed(&p12.0, &p12.1),
        {
            let (e, v) = reversed(&p2_fwd.0, &p2_fwd.1);
            (e, v)
        },
        arc(u3, u2),
    ]);
    let candidates: Vec<Option<Circuit>> = [b1, b2, b3]
        .into_iter()
        .map(|w| {
            w.and_then(|(e, v)| Circuit::try_from_walk(gs, e, v)).filter(|c| {
                validate_sign_circuit(gs, &SignCircuit::Balanced(c.clone())).is_valid()
            })
        })
        .collect();
    let circuit_edges: BTreeSet<EdgeId> = circuit.edge_ids().iter().copied().collect();
    let mut best: Option<(usize, Vec<SignCircuit>)> = None;
    for (i, j) in [(0, 1), (1, 2), (2, 0)] {
        let (Some(ci), Some(cj)) = (&candidates[i], &candidates[j]) else {
            continue;
        };
        let union: BTreeSet<EdgeId> = ci
            .edge_ids()
            .iter()
            .chain(cj.edge_ids())
            .copied()
            .collect();
        if !circuit_edges.is_subset(&union) {
            return Err(internal(format!(
                "pair B{}/B{} fails to cover the circuit",
                i + 1,
                j + 1
            )));
        }
        let total = ci.len() + cj.len();
        if best.as_ref().map_or(true, |(l, _)| total < *l) {
            best = Some((
                total,
                vec![
                    SignCircuit::Balanced(ci.clone()),
                    SignCircuit::Balanced(cj.clone()),
                ],
            ));
        }
    }
    log.note(format!(
        "tech1 case 1: component {} at {u1},{u2},{u3}; {} of 3 circuits valid",
        component.id,
        candidates.iter().flatten().count()
    ));
    best.map(|(_, m)| m)
        .ok_or_else(|| internal("no valid circuit pair in case 1"))
}

/// Case 2: close every cosegment of the minimal cover with a shortest path
/// through its owning component; each closure is a balanced circuit.
fn case_two(
    gs: &SignedMultigraph,
    circuit: &Circuit,
    components: &[OffCircuitComponent],
    decompositions: &[SegmentDecomposition],
    banned: &[bool],
    log: &mut TraceLog,
) -> Result<Vec<SignCircuit>, CoverBuildError> {
    let cover = minimal_cosegment_cover(gs, circuit, decompositions)?;
    log.note(format!(
        "tech1 case 2: minimal cosegment cover of size {}",
        cover.cosegments.len()
    ));
    let mut out = Vec::new();
    for seg in &cover.cosegments {
        let members: BTreeSet<VertexId> = components[seg.component]
            .vertices
            .iter()
            .copied()
            .collect();
        let path = component_path(gs, banned, &members, seg.x, seg.y)
            .ok_or_else(|| internal("cosegment closing path missing"))?;
        let pos = |v| circuit.position_of_vertex(v).unwrap();
        let arc = circuit.arc(pos(seg.x), pos(seg.y));
        let walk = close_walk(&[
            arc,
            reversed(path.edge_ids(), path.vertex_sequence()),
        ])
        .ok_or_else(|| internal("cosegment walk does not close"))?;
        let c = Circuit::try_from_walk(gs, walk.0, walk.1)
            .ok_or_else(|| internal("cosegment closure is not a circuit"))?;
        let sc = SignCircuit::Balanced(c);
        if !validate_sign_circuit(gs, &sc).is_valid() {
            return Err(internal("cosegment closure is not balanced"));
        }
        out.push(sc);
    }
    Ok(out)
}
