//! Validate covers with the structured report: a correct cover, then one
//! with a missing member and one with a parity error.
//!
//!     cargo run --example verify_cover

use std::collections::BTreeSet;

use signcover::fixtures;
use signcover::graph::{validate_cover, Circuit, Cover, SignCircuit};
use signcover::io::serialize_cover;

fn main() {
    let g = fixtures::k4m();
    let c1 = Circuit::from_edge_cycle(&g, &[0, 4, 5, 1]).unwrap(); // 0-1-3-2
    let c2 = Circuit::from_edge_cycle(&g, &[0, 3, 5, 2]).unwrap(); // 0-1-2-3
    let target: BTreeSet<usize> = (0..g.edge_count()).collect();

    let good = Cover::new(
        vec![SignCircuit::Balanced(c1.clone()), SignCircuit::Balanced(c2)],
        target.clone(),
    );
    let report = validate_cover(&g, &good);
    println!("good cover: valid={} length={}", report.is_valid(), good.length());
    println!("  multiplicities: {:?}", report.multiplicities);
    print!("{}", serialize_cover(&good));

    let short = Cover::new(vec![SignCircuit::Balanced(c1)], target.clone());
    let report = validate_cover(&g, &short);
    println!("\nmissing member: valid={}", report.is_valid());
    println!("  uncovered edges: {:?}", report.uncovered);

    // An unbalanced triangle cannot be a balanced-circuit member.
    let tri = Circuit::from_edge_cycle(&g, &[0, 3, 1]).unwrap();
    let wrong = Cover::new(vec![SignCircuit::Balanced(tri)], target);
    let report = validate_cover(&g, &wrong);
    println!("\nwrong parity member: valid={}", report.is_valid());
    for v in report.violations() {
        println!("  violation: {v}");
    }
}
