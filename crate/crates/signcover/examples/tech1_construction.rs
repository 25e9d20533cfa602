//! The segment machinery for covering one unbalanced circuit when the rest
//! of the graph is balanced, traced step by step on K33A.
//!
//!     cargo run --example tech1_construction

use signcover::cover::{
    minimal_cosegment_cover, off_circuit_components, segment_decomposition, tech1_cover, TraceLog,
};
use signcover::fixtures;
use signcover::graph::Circuit;

fn main() {
    let g = fixtures::k33a();
    let outer = Circuit::from_edge_cycle(&g, &[0, 1, 2, 3, 4, 5]).unwrap();
    println!("K33A outer 6-cycle, negatives on edges 0, 2, 4");

    let components = off_circuit_components(&g, &outer);
    let mut decompositions = Vec::new();
    for comp in &components {
        let d = segment_decomposition(&g, &outer, comp).unwrap();
        println!(
            "component {} attaches at {:?}; segments:",
            comp.id, d.attachments
        );
        for s in &d.segments {
            println!(
                "  {} -> {} edges {:?} {}",
                s.start,
                s.end,
                s.edge_ids,
                if s.negative { "negative" } else { "positive" }
            );
        }
        decompositions.push(d);
    }

    let cover = minimal_cosegment_cover(&g, &outer, &decompositions).unwrap();
    println!("\nminimal cosegment cover (t = {}):", cover.cosegments.len());
    for c in &cover.cosegments {
        println!(
            "  x={} y={} edges {:?} via component {}",
            c.x, c.y, c.edge_ids, c.component
        );
    }

    let mut log = TraceLog::new();
    let (result, case) = tech1_cover(&g, &outer, &mut log).unwrap();
    println!("\ntech1 ({case:?}): length {} covering the 6-cycle", result.length());
    for m in result.members() {
        println!("  {:<15} {:?}", m.kind(), m.edge_ids());
    }
    for check in &log.checks {
        println!("  check {check}");
    }
}
