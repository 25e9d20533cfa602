//! Cross-module invariants checked by exhaustive enumeration at desk scale.

use signcover::analysis::{is_balanced, BalanceCertificate};
use signcover::coloring::{
    class_negativity, colorable_by_enumeration, find_coloring, relabel_for_parity, two_factor,
    ColorClass,
};
use signcover::fixtures;
use signcover::graph::{circuit_sign, validate_cover, Sign, SignedMultigraph};
use signcover::io::{generate_instance, GenOptions};
use signcover::oracle::{enumerate_circuits, exact_scc, OracleLimits};

fn small_zoo() -> Vec<SignedMultigraph> {
    let mut zoo = vec![
        fixtures::tri_plus(),
        fixtures::tri1(),
        fixtures::k4m(),
        fixtures::k33a(),
        fixtures::pri2(),
    ];
    // Multigraphs with loops and parallels.
    zoo.push(
        SignedMultigraph::from_numeric(
            3,
            &[(0, 0, -1), (0, 1, 1), (0, 1, -1), (1, 2, 1), (2, 2, 1)],
        )
        .unwrap(),
    );
    zoo.push(SignedMultigraph::from_numeric(2, &[(0, 1, -1), (0, 1, 1), (0, 1, -1)]).unwrap());
    for seed in 0..8 {
        zoo.push(generate_instance(&GenOptions::new(8, 0.4, 7000 + seed)).unwrap());
    }
    zoo
}

#[test]
fn edge_is_bridge_xor_on_some_circuit() {
    let limits = OracleLimits::default();
    for g in small_zoo() {
        assert!(g.edge_count() <= 12);
        let circuits = enumerate_circuits(&g, &limits).unwrap();
        let bridges = g.bridges();
        for e in 0..g.edge_count() {
            let on_circuit = circuits.iter().any(|c| c.contains_edge(e));
            assert_ne!(on_circuit, bridges.contains(&e), "edge {e} of {g:?}");
        }
    }
}

#[test]
fn balanced_iff_every_circuit_positive() {
    let limits = OracleLimits::default();
    for g in small_zoo() {
        let circuits = enumerate_circuits(&g, &limits).unwrap();
        let all_positive = circuits
            .iter()
            .all(|c| circuit_sign(&g, c) == Sign::Positive);
        match is_balanced(&g) {
            BalanceCertificate::Potential(p) => {
                assert!(all_positive, "potential issued but a circuit is negative");
                for e in g.edges() {
                    if e.is_loop() {
                        assert_eq!(e.sign, Sign::Positive);
                    } else {
                        assert_eq!(p[e.u].product(p[e.v]), e.sign);
                    }
                }
            }
            BalanceCertificate::Witness(c) => {
                assert!(!all_positive);
                assert_eq!(circuit_sign(&g, &c), Sign::Negative);
            }
        }
    }
}

#[test]
fn relabel_makes_first_factor_evenly_unbalanced() {
    use ColorClass::*;
    for seed in 0..30u64 {
        let mut opts = GenOptions::new(10, 0.4, 12_000 + seed);
        opts.require_colorable = true;
        let g = generate_instance(&opts).unwrap();
        let f = find_coloring(&g, 10_000_000).unwrap().unwrap();
        let f = relabel_for_parity(&g, &f);
        assert_eq!(class_negativity(&g, &f, R), class_negativity(&g, &f, B));
        let unbalanced = two_factor(&g, &f, R, B)
            .iter()
            .filter(|c| circuit_sign(&g, c) == Sign::Negative)
            .count();
        assert_eq!(unbalanced % 2, 0, "seed {seed}");
    }
}

#[test]
fn coloring_search_is_complete_on_small_graphs() {
    // Exhaustive enumeration agrees with the backtracking search on every
    // small cubic graph tried, colorable or not.
    let mut graphs = vec![
        fixtures::k4m(),
        fixtures::pri2(),
        fixtures::k33a(),
        SignedMultigraph::from_numeric(2, &[(0, 1, 1), (0, 1, 1), (0, 1, -1)]).unwrap(),
        // K4 with one edge doubled and the opposite edge removed: cubic
        // multigraph on 4 vertices.
        SignedMultigraph::from_numeric(
            4,
            &[(0, 1, 1), (0, 1, -1), (2, 3, 1), (2, 3, 1), (0, 2, 1), (1, 3, 1)],
        )
        .unwrap(),
        // Cubic with a loop: never properly colorable.
        SignedMultigraph::from_numeric(2, &[(0, 0, 1), (0, 1, 1), (1, 1, 1)]).unwrap(),
    ];
    for seed in 0..6 {
        graphs.push(generate_instance(&GenOptions::new(8, 0.5, 2200 + seed)).unwrap());
    }
    for g in graphs {
        assert!(g.is_cubic() && g.edge_count() <= 12);
        let search = find_coloring(&g, 10_000_000).unwrap().is_some();
        assert_eq!(search, colorable_by_enumeration(&g), "{g:?}");
    }
}

#[test]
fn valid_cover_length_at_least_target_size() {
    let limits = OracleLimits::default();
    for g in [fixtures::k4m(), fixtures::pri2(), fixtures::k33a()] {
        let r = exact_scc(&g, &limits).unwrap();
        let report = validate_cover(&g, &r.cover);
        assert!(report.is_valid());
        assert!(r.cover.length() >= r.cover.target_edges().len());
        assert!(report
            .multiplicities
            .values()
            .all(|&count| count >= 1));
    }
}
