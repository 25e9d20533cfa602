//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! The shared sweep generates 504 flow-admissible, 3-edge-colorable cubic
//! instances (n in 4..=16, p in {0.1, 0.3, 0.5}), runs the cover pipeline on
//! each, and keeps the traces so the per-stage bound assertions can be
//! audited. Run with `cargo test --test acceptance -- --nocapture` to see
//! the pass lines and timings.

use std::sync::OnceLock;
use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use signcover::analysis::{apply_switching, is_flow_admissible};
use signcover::coloring::{two_factor, ColorClass};
use signcover::cover::{cover_3ec_cubic, tech1_cover, BuildTrace, CoverOptions, TraceLog};
use signcover::fixtures;
use signcover::graph::{
    circuit_sign, contract_circuits, validate_cover, Circuit, Cover, Sign, SignedMultigraph,
};
use signcover::io::{generate_instance, GenOptions};
use signcover::oracle::{
    enumerate_circuits, exact_scc, flow_admissible_by_definition, OracleLimits, SccResult,
};
use signcover::tjoin::{brute_force_min_tjoin, minimum_tjoin};

const NS: [usize; 7] = [4, 6, 8, 10, 12, 14, 16];
const PS: [f64; 3] = [0.1, 0.3, 0.5];
const SEEDS_PER_CELL: u64 = 24;

struct Instance {
    n: usize,
    p: f64,
    seed: u64,
    graph: SignedMultigraph,
    cover: Cover,
    trace: BuildTrace,
    oracle: Option<SccResult>,
}

struct Sweep {
    instances: Vec<Instance>,
    generation_secs: f64,
}

fn sweep() -> &'static Sweep {
    static SWEEP: OnceLock<Sweep> = OnceLock::new();
    SWEEP.get_or_init(|| {
        let start = Instant::now();
        let mut instances = Vec::new();
        for &n in &NS {
            for (pi, &p) in PS.iter().enumerate() {
                for k in 0..SEEDS_PER_CELL {
                    let seed = 10_000 * n as u64 + 1_000 * pi as u64 + k;
                    let mut opts = GenOptions::new(n, p, seed);
                    opts.require_flow_admissible = true;
                    opts.require_colorable = true;
                    let graph = generate_instance(&opts)
                        .unwrap_or_else(|e| panic!("generation failed at n={n} p={p}: {e}"));
                    let (cover, trace) =
                        cover_3ec_cubic(&graph, None, &CoverOptions::default()).unwrap_or_else(
                            |e| panic!("cover failed on n={n} p={p} seed={seed}: {e}"),
                        );
                    let oracle = if graph.edge_count() <= 20 {
                        let limits = OracleLimits {
                            node_budget: 5_000_000,
                            ..OracleLimits::default()
                        };
                        exact_scc(&graph, &limits).ok().filter(|r| r.optimal)
                    } else {
                        None
                    };
                    instances.push(Instance {
                        n,
                        p,
                        seed,
                        graph,
                        cover,
                        trace,
                        oracle,
                    });
                }
            }
        }
        Sweep {
            instances,
            generation_secs: start.elapsed().as_secs_f64(),
        }
    })
}

#[test]
fn criterion_1_signed_petersen_oracle() {
    let start = Instant::now();
    let g = fixtures::pet5();
    let result = exact_scc(&g, &OracleLimits::default()).expect("PET5 is flow-admissible");
    assert!(result.optimal);
    assert_eq!(result.length, 25, "scc of the signed Petersen graph");
    assert_eq!(3 * result.length, 5 * g.edge_count()); // 25 = 5/3 * 15
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 10.0, "oracle took {elapsed:.2}s");
    println!("criterion 1 (signed Petersen scc = 25): PASS ({elapsed:.2}s, {} nodes)", result.nodes);
}

#[test]
fn criterion_2_theorem_bound_sweep() {
    let s = sweep();
    assert!(s.instances.len() >= 500, "sweep has {}", s.instances.len());
    for inst in &s.instances {
        let report = validate_cover(&inst.graph, &inst.cover);
        assert!(
            report.is_valid(),
            "verifier rejected n={} p={} seed={}",
            inst.n,
            inst.p,
            inst.seed
        );
        assert_eq!(
            inst.cover.target_edges().len(),
            inst.graph.edge_count(),
            "cover must target every edge"
        );
        assert!(
            9 * inst.cover.length() <= 20 * inst.graph.edge_count(),
            "bound missed on n={} p={} seed={} (length {})",
            inst.n,
            inst.p,
            inst.seed,
            inst.cover.length()
        );
    }
    println!(
        "criterion 2 (20/9 bound on {} instances): PASS (sweep built in {:.1}s)",
        s.instances.len(),
        s.generation_secs
    );
}

#[test]
fn criterion_3_oracle_dominance() {
    let s = sweep();
    let mut checked = 0;
    for inst in &s.instances {
        let Some(oracle) = &inst.oracle else { continue };
        assert!(
            oracle.length <= inst.cover.length(),
            "oracle {} beats pipeline {} on seed {}",
            oracle.length,
            inst.cover.length(),
            inst.seed
        );
        assert!(
            9 * oracle.length <= 20 * inst.graph.edge_count(),
            "oracle itself exceeds 20/9 on seed {}",
            inst.seed
        );
        checked += 1;
    }
    assert!(checked >= 200, "only {checked} instances had oracle results");
    println!("criterion 3 (oracle dominance on {checked} instances): PASS");
}

#[test]
fn criterion_4_two_factor_bound() {
    let s = sweep();
    let mut count = 0;
    for inst in &s.instances {
        for check in inst.trace.log.checks_labeled("two-factor-10/9") {
            assert!(check.holds(), "10/9 bound failed on seed {}: {check}", inst.seed);
            count += 1;
        }
    }
    assert!(count > 0, "no two-factor cover invocations recorded");
    println!("criterion 4 (10/9 bound on {count} two-factor covers): PASS");
}

/// Chorded-cycle fixtures satisfying the tech1 preconditions: an unbalanced
/// cycle C (odd negatives), all other edges positive chords pairing up the
/// cycle vertices, so the graph minus C is balanced.
fn chorded_cycle_fixture(len: usize, rng: &mut ChaCha8Rng) -> Option<(SignedMultigraph, Circuit)> {
    let mut order: Vec<usize> = (0..len).collect();
    for _ in 0..60 {
        order.shuffle(rng);
        let ok = order.chunks(2).all(|pair| {
            let (a, b) = (pair[0], pair[1]);
            let gap = (a + len - b) % len;
            gap != 1 && gap != len - 1
        });
        if ok {
            let mut edges: Vec<(usize, usize, i8)> = Vec::new();
            let mut neg = 0;
            for i in 0..len {
                let sign = if rng.gen_bool(0.4) { -1 } else { 1 };
                if sign < 0 {
                    neg += 1;
                }
                edges.push((i, (i + 1) % len, sign));
            }
            if neg % 2 == 0 {
                // Force odd negativity on the cycle.
                edges[0].2 = -edges[0].2;
            }
            for pair in order.chunks(2) {
                edges.push((pair[0], pair[1], 1));
            }
            let g = SignedMultigraph::from_numeric(len, &edges).ok()?;
            let c = Circuit::from_edge_cycle(&g, &(0..len).collect::<Vec<_>>()).ok()?;
            return Some((g, c));
        }
    }
    None
}

/// Cycle of length 3k with a claw component attached at thirds (three
/// negative segments, forcing case 1) and chords pairing the rest.
fn claw_cycle_fixture(k: usize, rng: &mut ChaCha8Rng) -> Option<(SignedMultigraph, Circuit)> {
    let len = 3 * k;
    let center = len;
    let anchors = [0, k, 2 * k];
    let rest: Vec<usize> = (0..len).filter(|v| !anchors.contains(v)).collect();
    let mut order = rest;
    for _ in 0..60 {
        order.shuffle(rng);
        let ok = order.chunks(2).all(|pair| {
            let (a, b) = (pair[0], pair[1]);
            let gap = (a + len - b) % len;
            gap != 1 && gap != len - 1
        });
        if !ok {
            continue;
        }
        let mut edges: Vec<(usize, usize, i8)> = Vec::new();
        for i in 0..len {
            // One negative edge inside each third.
            let negative = i % k == rng.gen_range(0..k.min(2));
            edges.push((i, (i + 1) % len, if negative { -1 } else { 1 }));
        }
        // Make each third carry an odd number of negatives.
        for t in 0..3 {
            let third: Vec<usize> = (t * k..(t + 1) * k).collect();
            let negs = third.iter().filter(|&&i| edges[i].2 < 0).count();
            if negs % 2 == 0 {
                edges[third[0]].2 = -edges[third[0]].2;
            }
        }
        for &a in &anchors {
            edges.push((center, a, 1));
        }
        for pair in order.chunks(2) {
            edges.push((pair[0], pair[1], 1));
        }
        let g = SignedMultigraph::from_numeric(len + 1, &edges).ok()?;
        let c = Circuit::from_edge_cycle(&g, &(0..len).collect::<Vec<_>>()).ok()?;
        return Some((g, c));
    }
    None
}

#[test]
fn criterion_5_tech1_bound_and_claims() {
    // K33A: exact expected values.
    let g = fixtures::k33a();
    let outer = Circuit::from_edge_cycle(&g, &[0, 1, 2, 3, 4, 5]).unwrap();
    let mut log = TraceLog::new();
    let (cover, _) = tech1_cover(&g, &outer, &mut log).unwrap();
    assert_eq!(cover.length(), 12);
    // Bound value 8/9 * 9 + 6 = 14 exactly: 9 * 12 <= 9 * 14.
    let check = log.checks_labeled("tech1-8/9+C").next().unwrap();
    assert_eq!(check.bound, 9 * 14);
    assert!(check.holds());
    assert!(validate_cover(&g, &cover).is_valid());

    // Constructed fixtures: claims are asserted inside tech1_cover; any
    // violation surfaces as an error and fails here.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ec7);
    let mut built = 0;
    let mut case1 = 0;
    let mut attempts = 0;
    while built < 56 && attempts < 4000 {
        attempts += 1;
        let fixture = if built % 4 == 3 {
            claw_cycle_fixture(if built % 8 == 3 { 3 } else { 5 }, &mut rng)
        } else {
            chorded_cycle_fixture(6 + 2 * (built % 5), &mut rng)
        };
        let Some((g, c)) = fixture else { continue };
        if !g.is_cubic() || circuit_sign(&g, &c) != Sign::Negative {
            continue;
        }
        if !is_flow_admissible(&g).admissible {
            continue;
        }
        let mut log = TraceLog::new();
        let (cover, case) = tech1_cover(&g, &c, &mut log)
            .unwrap_or_else(|e| panic!("tech1 failed on fixture {built}: {e}"));
        assert!(validate_cover(&g, &cover).is_valid());
        assert!(log.checks_labeled("tech1-8/9+C").all(|c| c.holds()));
        if case == signcover::cover::Tech1Case::ThreeNegativeSegments {
            case1 += 1;
        }
        built += 1;
    }
    assert!(built >= 50, "built only {built} tech1 fixtures");
    assert!(case1 >= 5, "case 1 exercised only {case1} times");
    println!(
        "criterion 5 (tech1 bound + claims on K33A and {built} fixtures, {case1} in case 1): PASS"
    );
}

#[test]
fn criterion_6_tjoin_invariants() {
    let s = sweep();
    // Half-bound on every 2-edge-connected contraction in the sweep.
    let mut half_checks = 0;
    for inst in &s.instances {
        for check in inst.trace.log.checks_labeled("tjoin-1/2") {
            assert!(check.holds(), "t-join half bound failed on seed {}", inst.seed);
            half_checks += 1;
        }
    }
    assert!(half_checks > 0);

    // Exact minimality against brute force on contractions arising in the
    // sweep (all have few edges) and on small multigraphs with loops and
    // parallels.
    let mut brute_checks = 0;
    for inst in s.instances.iter().filter(|i| i.graph.edge_count() <= 21) {
        let circuits = two_factor(&inst.graph, &inst.trace.coloring, ColorClass::R, ColorClass::B);
        let ctr = contract_circuits(&inst.graph, &circuits).unwrap();
        if ctr.graph.edge_count() > 14 {
            continue;
        }
        let terminals: Vec<usize> = circuits
            .iter()
            .enumerate()
            .filter(|(_, c)| circuit_sign(&inst.graph, c) == Sign::Negative)
            .map(|(i, _)| ctr.circuit_vertices[i])
            .collect();
        let ours = minimum_tjoin(&ctr.graph, &terminals).unwrap();
        assert_eq!(
            Some(ours.total_size),
            brute_force_min_tjoin(&ctr.graph, &terminals),
            "t-join not minimum on contraction of seed {}",
            inst.seed
        );
        brute_checks += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x7104);
    for _ in 0..40 {
        let n = rng.gen_range(3..=6);
        let m = rng.gen_range(4..=10);
        let edges: Vec<(usize, usize, i8)> = (0..m)
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), 1))
            .collect();
        let g = SignedMultigraph::from_numeric(n, &edges).unwrap();
        let (comp, _) = g.components();
        for mask in 0..(1u32 << n) {
            if mask.count_ones() % 2 != 0 {
                continue;
            }
            let terminals: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
            let one_component = terminals.windows(2).all(|w| comp[w[0]] == comp[w[1]]);
            let ours = minimum_tjoin(&g, &terminals).map(|j| j.total_size).ok();
            if one_component {
                assert_eq!(ours, brute_force_min_tjoin(&g, &terminals));
            } else {
                assert_eq!(ours, None, "split terminals must be rejected");
            }
            brute_checks += 1;
        }
    }
    println!(
        "criterion 6 (t-join half bound x{half_checks}, brute-force minimality x{brute_checks}): PASS"
    );
}

/// Small multigraph skeletons (connected, <= 8 edges) for the exhaustive
/// sign sweep.
fn skeletons() -> Vec<(&'static str, SignedMultigraph)> {
    let g = |n: usize, edges: &[(usize, usize)]| {
        let list: Vec<(usize, usize, i8)> = edges.iter().map(|&(u, v)| (u, v, 1)).collect();
        SignedMultigraph::from_numeric(n, &list).unwrap()
    };
    vec![
        ("edge", g(2, &[(0, 1)])),
        ("path3", g(3, &[(0, 1), (1, 2)])),
        ("star3", g(4, &[(0, 1), (0, 2), (0, 3)])),
        ("triangle", g(3, &[(0, 1), (1, 2), (2, 0)])),
        ("c4", g(4, &[(0, 1), (1, 2), (2, 3), (3, 0)])),
        ("c5", g(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])),
        ("c6", g(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)])),
        ("parallel2", g(2, &[(0, 1), (0, 1)])),
        ("theta3", g(2, &[(0, 1), (0, 1), (0, 1)])),
        ("parallel2_pendant", g(3, &[(0, 1), (0, 1), (1, 2)])),
        ("loop", g(1, &[(0, 0)])),
        ("two_loops", g(1, &[(0, 0), (0, 0)])),
        ("loops_dumbbell", g(2, &[(0, 0), (0, 1), (1, 1)])),
        ("triangle_pendant", g(4, &[(0, 1), (1, 2), (2, 0), (0, 3)])),
        ("triangle_doubled", g(3, &[(0, 1), (0, 1), (1, 2), (2, 0)])),
        ("triangle_loop", g(3, &[(0, 1), (1, 2), (2, 0), (0, 0)])),
        ("book2", g(4, &[(0, 1), (1, 2), (2, 0), (1, 3), (3, 2)])),
        ("theta122", g(4, &[(0, 1), (0, 2), (2, 1), (0, 3), (3, 1)])),
        ("c4_chord", g(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])),
        ("bowtie", g(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)])),
        ("c5_chord", g(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)])),
        ("k4", g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])),
        (
            "dumbbell",
            g(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]),
        ),
        (
            "k4_pendant",
            g(
                5,
                &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)],
            ),
        ),
        (
            "c8",
            g(
                8,
                &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 0)],
            ),
        ),
    ]
}

#[test]
fn criterion_7_flow_admissibility_equivalence() {
    let mut checks = 0;
    for (name, skeleton) in skeletons() {
        let m = skeleton.edge_count();
        assert!(m <= 8);
        for mask in 0..(1u32 << m) {
            let signs: Vec<Sign> = (0..m)
                .map(|e| {
                    if mask & (1 << e) != 0 {
                        Sign::Negative
                    } else {
                        Sign::Positive
                    }
                })
                .collect();
            let g = skeleton.with_signs(&signs);
            let structural = is_flow_admissible(&g).admissible;
            let definitional = flow_admissible_by_definition(&g).unwrap();
            assert_eq!(
                structural, definitional,
                "disagreement on {name} with mask {mask:#b}"
            );
            checks += 1;
        }
    }
    // Generated fixtures with at most 12 edges.
    let s = sweep();
    for inst in s.instances.iter().filter(|i| i.graph.edge_count() <= 12) {
        let structural = is_flow_admissible(&inst.graph).admissible;
        let definitional = flow_admissible_by_definition(&inst.graph).unwrap();
        assert_eq!(structural, definitional);
        checks += 1;
    }
    println!("criterion 7 (flow-admissibility equivalence on {checks} graphs): PASS");
}

#[test]
fn criterion_8_switching_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x51f7);
    let limits = OracleLimits::default();
    let mut pairs = 0;
    while pairs < 100 {
        let n = [4, 6, 8][pairs % 3];
        let mut opts = GenOptions::new(n, [0.2, 0.4, 0.6][pairs % 3], 900 + pairs as u64);
        opts.require_flow_admissible = true;
        let g = generate_instance(&opts).unwrap();
        let set: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        let switched = apply_switching(&g, &set);

        // Every circuit keeps its sign.
        let circuits = enumerate_circuits(&g, &limits).unwrap();
        assert_eq!(circuits, enumerate_circuits(&switched, &limits).unwrap());
        for c in &circuits {
            assert_eq!(circuit_sign(&g, c), circuit_sign(&switched, c));
        }

        // An optimal cover of g stays valid, member tags unchanged, and the
        // exact cover length is unchanged.
        let base = exact_scc(&g, &limits).unwrap();
        assert!(validate_cover(&switched, &base.cover).is_valid());
        let after = exact_scc(&switched, &limits).unwrap();
        assert_eq!(base.length, after.length);

        pairs += 1;
    }
    println!("criterion 8 (switching invariance on {pairs} graph/set pairs): PASS");
}

#[test]
fn criterion_9_cited_lemma_bound_audit() {
    let s = sweep();
    let mut blocks43 = 0;
    let mut tree32 = 0;
    for inst in &s.instances {
        for check in inst.trace.log.checks_labeled("positive-blocks-4/3") {
            assert!(check.holds(), "4/3 bound failed on seed {}: {check}", inst.seed);
            blocks43 += 1;
        }
        for check in inst.trace.log.checks_labeled("cycle-tree-3/2") {
            assert!(check.holds(), "3/2 bound failed on seed {}: {check}", inst.seed);
            tree32 += 1;
        }
    }
    assert!(blocks43 > 0, "no positive-blocks invocations in the sweep");
    // Cycle-trees only arise in case 2.3; exercise the bound directly when
    // the sweep missed it.
    if tree32 == 0 {
        let g = fixtures::pri2();
        let t1 = Circuit::from_edge_cycle(&g, &[0, 1, 2]).unwrap();
        let t2 = Circuit::from_edge_cycle(&g, &[3, 4, 5]).unwrap();
        let forest = signcover::cover::build_cycle_tree(&g, &[t1, t2]).unwrap();
        let mut log = TraceLog::new();
        signcover::cover::cycle_tree_cover(&g, &forest, &mut log).unwrap();
        assert!(log.checks_labeled("cycle-tree-3/2").all(|c| c.holds()));
        tree32 += 1;
    }
    println!(
        "criterion 9 (cited-lemma bounds: 4/3 x{blocks43}, 3/2 x{tree32}): PASS"
    );
}
