//! Exact shortest sign-circuit covers by catalog enumeration and branch and
//! bound, on the signed Petersen graph and the small fixtures.
//!
//!     cargo run --example exact_oracle

use signcover::fixtures;
use signcover::oracle::{enumerate_sign_circuits, exact_scc, OracleLimits};

fn main() {
    let limits = OracleLimits::default();
    for name in ["k4m", "pri2", "k33a", "pet5"] {
        let g = fixtures::by_name(name).unwrap();
        let catalog = enumerate_sign_circuits(&g, &limits).unwrap();
        let result = exact_scc(&g, &limits).unwrap();
        println!(
            "{name}: m={} catalog: {} circuits ({} balanced), {} barbells",
            g.edge_count(),
            catalog.circuits.len(),
            catalog.balanced_circuit_count(),
            catalog.barbell_count(),
        );
        println!(
            "  scc = {} = {}/{} * m  (nodes explored: {})",
            result.length,
            result.length / gcd(result.length, g.edge_count()),
            g.edge_count() / gcd(result.length, g.edge_count()),
            result.nodes
        );
        for member in result.cover.members() {
            println!("  {:<15} length {}", member.kind(), member.length());
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
