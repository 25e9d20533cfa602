//! Integration tests: the full pipeline on fixtures and constructed
//! instances, file-format round trips, and the binary's exit-code contract.

use std::collections::BTreeSet;
use std::process::Command;

use proptest::prelude::*;

use signcover::coloring::{ColorClass, EdgeColoring3};
use signcover::cover::{cover_3ec_cubic, CaseLabel, CoverOptions, Tech1Case};
use signcover::fixtures;
use signcover::graph::{validate_cover, Sign, SignedMultigraph};
use signcover::io::{
    generate_instance, parse_cover, parse_graph, serialize_cover, serialize_graph, GenOptions,
};
use signcover::oracle::{exact_scc, OracleLimits};

/// Hexagonal prism with alternating negative spokes: under the aligned
/// coloring both RY and BY split into three unbalanced squares while RB is
/// the two positive hexagons, which drives the pipeline into the cycle-tree
/// case.
fn hex_prism_case23() -> (SignedMultigraph, EdgeColoring3) {
    use ColorClass::*;
    let mut edges: Vec<(usize, usize, i8)> = Vec::new();
    for i in 0..6 {
        edges.push((i, (i + 1) % 6, 1)); // outer, ids 0..5
    }
    for i in 0..6 {
        edges.push((6 + i, 6 + (i + 1) % 6, 1)); // inner, ids 6..11
    }
    for i in 0..6 {
        edges.push((i, 6 + i, if i % 2 == 1 { -1 } else { 1 })); // spokes, ids 12..17
    }
    let g = SignedMultigraph::from_numeric(12, &edges).unwrap();
    let mut classes = Vec::new();
    for i in 0..6 {
        classes.push(if i % 2 == 0 { R } else { B });
    }
    for i in 0..6 {
        classes.push(if i % 2 == 0 { R } else { B });
    }
    for _ in 0..6 {
        classes.push(Y);
    }
    (g, EdgeColoring3::new(classes))
}

#[test]
fn hex_prism_takes_cycle_tree_case() {
    let (g, f) = hex_prism_case23();
    let (cover, trace) = cover_3ec_cubic(&g, Some(&f), &CoverOptions::default()).unwrap();
    assert_eq!(trace.case, CaseLabel::Case23);
    assert!(validate_cover(&g, &cover).is_valid());
    assert!(9 * cover.length() <= 20 * g.edge_count());
    // Two hexagons (12) plus two barbells through the squares (18).
    assert_eq!(cover.length(), 30);
    assert!(trace.log.checks_labeled("cycle-tree-3/2").all(|c| c.holds()));
}

#[test]
fn fixtures_cover_and_match_oracle_bounds() {
    for name in ["k4m", "pri2", "k33a"] {
        let g = fixtures::by_name(name).unwrap();
        let (cover, trace) = cover_3ec_cubic(&g, None, &CoverOptions::default()).unwrap();
        assert!(validate_cover(&g, &cover).is_valid(), "{name}");
        let scc = exact_scc(&g, &OracleLimits::default()).unwrap();
        assert!(scc.length <= cover.length(), "{name}");
        assert!(
            trace.log.checks.iter().all(|c| c.holds()),
            "{name}: {:?}",
            trace.log.checks
        );
    }
}

#[test]
fn k33a_case_is_tech1_cosegments() {
    let g = fixtures::k33a();
    let (_, trace) = cover_3ec_cubic(&g, None, &CoverOptions::default()).unwrap();
    assert_eq!(trace.case, CaseLabel::Case22Tech1(Tech1Case::CosegmentCover));
}

#[test]
fn supplied_coloring_is_honored_and_validated() {
    use ColorClass::*;
    let g = fixtures::k4m();
    let good = EdgeColoring3::new(vec![R, B, Y, Y, B, R]);
    assert!(cover_3ec_cubic(&g, Some(&good), &CoverOptions::default()).is_ok());
    let bad = EdgeColoring3::new(vec![R, R, Y, Y, B, R]);
    assert!(cover_3ec_cubic(&g, Some(&bad), &CoverOptions::default()).is_err());
}

// Binary-level smoke tests; the library does the heavy lifting, these pin
// the exit-code and file contracts.

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_signcover"))
}

fn fixture_path(name: &str) -> String {
    format!("{}/fixtures/{name}.sg", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn cli_cover_verify_round_trip() {
    let dir = std::env::temp_dir().join("signcover_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let cover_path = dir.join("k4m.cov");
    let out = bin()
        .args([
            "cover",
            &fixture_path("k4m"),
            "-o",
            cover_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let verify = bin()
        .args(["verify", &fixture_path("k4m"), cover_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(verify.status.success());

    // Damage the cover: drop the second member.
    let text = std::fs::read_to_string(&cover_path).unwrap();
    let damaged: Vec<&str> = text.lines().filter(|l| !l.starts_with("length")).collect();
    let damaged = format!("{}\n", damaged[..1].join("\n"));
    let bad_path = dir.join("k4m_bad.cov");
    std::fs::write(&bad_path, damaged).unwrap();
    let verify_bad = bin()
        .args(["verify", &fixture_path("k4m"), bad_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(verify_bad.status.code(), Some(6));
    let err = String::from_utf8_lossy(&verify_bad.stderr);
    assert!(err.contains("error=invalid-cover"), "{err}");
    assert!(err.contains("uncovered"), "{err}");
}

#[test]
fn cli_oracle_prints_scc() {
    let out = bin()
        .args(["oracle", &fixture_path("pet5")])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "25");
}

#[test]
fn cli_rejects_non_colorable_and_non_admissible() {
    let pet = bin()
        .args(["cover", &fixture_path("pet5")])
        .output()
        .unwrap();
    assert_eq!(pet.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&pet.stderr).contains("error=not-colorable"));

    let tri = bin()
        .args(["oracle", &fixture_path("tri1")])
        .output()
        .unwrap();
    assert_eq!(tri.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&tri.stderr).contains("error=not-flow-admissible"));
}

#[test]
fn cli_parse_error_reports_line() {
    let dir = std::env::temp_dir().join("signcover_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.sg");
    std::fs::write(&bad, "3 3\n0 1 +\n1 2 *\n2 0 +\n").unwrap();
    let out = bin()
        .args(["cover", bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("error=parse-error") && err.contains("line 3"), "{err}");
}

#[test]
fn cli_gen_then_stats() {
    let dir = std::env::temp_dir().join("signcover_stats_test");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    let gen = bin()
        .args([
            "gen",
            "--n",
            "8",
            "--p",
            "0.3",
            "--seed",
            "5",
            "--flow-admissible",
            "--colorable",
            "--count",
            "4",
            "--out",
            dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(gen.status.success());
    let csv = dir.join("out.csv");
    let stats = bin()
        .args([
            "stats",
            "--dir",
            dir.to_str().unwrap(),
            "--csv",
            csv.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(stats.status.success(), "{stats:?}");
    let rows = std::fs::read_to_string(&csv).unwrap();
    let mut lines = rows.lines();
    assert_eq!(
        lines.next().unwrap(),
        "file,n,m,case,length,bound,oracle,ratio_frac,ratio_dec"
    );
    let mut data_rows = 0;
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        let m: usize = cells[2].parse().unwrap();
        let length: usize = cells[4].parse().unwrap();
        assert!(9 * length <= 20 * m, "{line}");
        data_rows += 1;
    }
    assert_eq!(data_rows, 4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Graph files round-trip bit-exactly through parse and serialize.
    #[test]
    fn graph_file_round_trip(n in 2usize..7, raw in prop::collection::vec((0usize..6, 0usize..6, prop::bool::ANY), 1..10)) {
        let edges: Vec<(usize, usize, i8)> = raw
            .into_iter()
            .map(|(u, v, neg)| (u % n, v % n, if neg { -1 } else { 1 }))
            .collect();
        let g = SignedMultigraph::from_numeric(n, &edges).unwrap();
        let text = serialize_graph(&g, None);
        let parsed = parse_graph(&text).unwrap();
        prop_assert_eq!(&parsed.graph, &g);
        prop_assert_eq!(serialize_graph(&parsed.graph, None), text);
    }

    /// Oracle covers of generated instances survive the cover-file format.
    #[test]
    fn cover_file_round_trip(seed in 0u64..40) {
        let mut opts = GenOptions::new(6, 0.4, seed);
        opts.require_flow_admissible = true;
        let g = generate_instance(&opts).unwrap();
        let result = exact_scc(&g, &OracleLimits::default()).unwrap();
        let text = serialize_cover(&result.cover);
        let parsed = parse_cover(&g, &text).unwrap();
        prop_assert!(validate_cover(&g, &parsed).is_valid());
        prop_assert_eq!(parsed.length(), result.cover.length());
        prop_assert_eq!(serialize_cover(&parsed), text);
    }

    /// In a cubic graph, two edge-disjoint circuits are vertex-disjoint;
    /// checked over the full circuit catalog of random cubic instances.
    #[test]
    fn edge_disjoint_circuits_are_vertex_disjoint(seed in 0u64..24) {
        let g = generate_instance(&GenOptions::new(8, 0.3, seed)).unwrap();
        let circuits = signcover::oracle::enumerate_circuits(&g, &OracleLimits::default()).unwrap();
        for (i, a) in circuits.iter().enumerate() {
            for b in circuits.iter().skip(i + 1) {
                let edge_disjoint = a.edge_ids().iter().all(|e| !b.contains_edge(*e));
                if edge_disjoint {
                    let vertex_disjoint =
                        a.vertex_sequence().iter().all(|v| !b.contains_vertex(*v));
                    prop_assert!(vertex_disjoint);
                }
            }
        }
    }

    /// Covers stay valid under switching: sign-circuit status is invariant.
    #[test]
    fn cover_validity_is_switching_invariant(seed in 0u64..24, mask in 0u32..64) {
        let mut opts = GenOptions::new(6, 0.5, seed);
        opts.require_flow_admissible = true;
        let g = generate_instance(&opts).unwrap();
        let result = exact_scc(&g, &OracleLimits::default()).unwrap();
        let set: Vec<usize> = (0..6).filter(|&v| mask & (1 << v) != 0).collect();
        let switched = signcover::analysis::apply_switching(&g, &set);
        prop_assert!(validate_cover(&switched, &result.cover).is_valid());
    }

    /// The pipeline length always lands within the certified bound and at or
    /// above the exact optimum.
    #[test]
    fn pipeline_between_optimum_and_bound(seed in 100u64..130) {
        let mut opts = GenOptions::new(8, 0.4, seed);
        opts.require_flow_admissible = true;
        opts.require_colorable = true;
        let g = generate_instance(&opts).unwrap();
        let (cover, _) = cover_3ec_cubic(&g, None, &CoverOptions::default()).unwrap();
        let scc = exact_scc(&g, &OracleLimits::default()).unwrap();
        prop_assert!(scc.length <= cover.length());
        prop_assert!(9 * cover.length() <= 20 * g.edge_count());
    }
}

#[test]
fn barbell_search_in_larger_cubic_host() {
    // Two unbalanced triangles embedded in a 10-vertex cubic host. The
    // deterministic witness is the fundamental circuit 3-4-5-9-7-6 (the
    // smallest failing non-tree edge closes it), reached from the first
    // triangle by the single edge 0-7.
    let g = SignedMultigraph::from_numeric(
        10,
        &[
            (0, 1, -1),
            (1, 2, 1),
            (2, 0, 1),
            (3, 4, -1),
            (4, 5, 1),
            (5, 3, 1),
            (2, 6, 1),
            (6, 3, 1),
            (6, 7, 1),
            (0, 7, 1),
            (1, 8, 1),
            (4, 8, 1),
            (5, 9, 1),
            (7, 9, 1),
            (8, 9, 1),
        ],
    )
    .unwrap();
    assert!(g.is_cubic());
    let t1 = signcover::graph::Circuit::from_edge_cycle(&g, &[0, 1, 2]).unwrap();
    let q = signcover::cover::find_disjoint_unbalanced_barbell(&g, &t1)
        .unwrap()
        .unwrap();
    assert!(signcover::graph::validate_sign_circuit(&g, &q).is_valid());
    assert_eq!(q.length(), 10); // 3 + 6 + connector of 1
    let signcover::graph::SignCircuit::LongBarbell { second, path, .. } = &q else {
        panic!("expected a long barbell");
    };
    assert_eq!(second.vertex_sequence(), &[3, 4, 5, 9, 7, 6]);
    assert_eq!(path.edge_ids(), &[9]);
}

#[test]
fn target_edges_of_pipeline_cover_is_everything() {
    let g = fixtures::pri2();
    let (cover, _) = cover_3ec_cubic(&g, None, &CoverOptions::default()).unwrap();
    let want: BTreeSet<usize> = (0..g.edge_count()).collect();
    assert_eq!(cover.target_edges(), &want);
}

#[test]
fn negative_loops_are_short_barbell_material() {
    // Generality outside cubic graphs: two negative loops at one vertex form
    // a valid short barbell and the optimal cover.
    let g = SignedMultigraph::new(
        1,
        &[(0, 0, Sign::Negative), (0, 0, Sign::Negative)],
    )
    .unwrap();
    let r = exact_scc(&g, &OracleLimits::default()).unwrap();
    assert_eq!(r.length, 2);
    assert_eq!(r.cover.members().len(), 1);
}
