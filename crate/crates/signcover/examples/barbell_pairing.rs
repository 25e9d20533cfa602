//! Barbell pairing over cycle forests: balanced blocks cover themselves,
//! unbalanced blocks are matched through connectors, and an intermediate
//! block contributes its shorter arc.
//!
//!     cargo run --example barbell_pairing

use std::collections::BTreeSet;

use signcover::cover::{cycle_tree_cover, positive_blocks_cover, TraceLog};
use signcover::fixtures;
use signcover::graph::SignedMultigraph;

fn main() {
    // The prism's two unbalanced triangles plus one spoke: a single barbell.
    let g = fixtures::pri2();
    let edge_set: BTreeSet<usize> = [0, 1, 2, 3, 4, 5, 6].into_iter().collect();
    let mut log = TraceLog::new();
    let cover = positive_blocks_cover(&g, &edge_set, &mut log).unwrap();
    println!("prism triangles + spoke:");
    for m in cover.members() {
        println!("  {:<15} {:?}", m.kind(), m.edge_ids());
    }
    for c in &log.checks {
        println!("  check {c}");
    }

    // A path-shaped cycle-tree with a balanced square in the middle: the
    // connector routes the shorter arc, and the square is still emitted to
    // cover its far side.
    let g = SignedMultigraph::from_numeric(
        10,
        &[
            (0, 1, -1),
            (1, 2, 1),
            (2, 0, 1),
            (3, 4, 1),
            (4, 5, 1),
            (5, 6, 1),
            (6, 3, 1),
            (7, 8, -1),
            (8, 9, 1),
            (9, 7, 1),
            (2, 3, 1),
            (5, 7, 1),
        ],
    )
    .unwrap();
    let edge_set: BTreeSet<usize> = (0..12).collect();
    let forest = {
        use signcover::graph::{Circuit, CycleForest};
        let a = Circuit::from_edge_cycle(&g, &[0, 1, 2]).unwrap();
        let sq = Circuit::from_edge_cycle(&g, &[3, 4, 5, 6]).unwrap();
        let b = Circuit::from_edge_cycle(&g, &[7, 8, 9]).unwrap();
        CycleForest::new(&g, vec![a, sq, b], vec![10, 11]).unwrap()
    };
    let _ = edge_set;
    let mut log = TraceLog::new();
    let cover = cycle_tree_cover(&g, &forest, &mut log).unwrap();
    println!("\ntriangle - square - triangle cycle-tree:");
    for m in cover.members() {
        println!("  {:<15} length {:>2}  {:?}", m.kind(), m.length(), m.edge_ids());
    }
    for c in &log.checks {
        println!("  check {c}");
    }
}
