//! Build bound-certified sign-circuit covers of the shipped fixtures and
//! print the audit trace of each run.
//!
//!     cargo run --example build_cover

use signcover::cover::{cover_3ec_cubic, CoverOptions};
use signcover::fixtures;

fn main() {
    for name in ["k4m", "pri2", "k33a"] {
        let g = fixtures::by_name(name).unwrap();
        let (cover, trace) = cover_3ec_cubic(&g, None, &CoverOptions::default())
            .expect("fixture is flow-admissible and colorable");
        println!(
            "{name}: n={} m={} case={} length={} (bound 20/9*m = {:.2})",
            g.vertex_count(),
            g.edge_count(),
            trace.case,
            cover.length(),
            20.0 * g.edge_count() as f64 / 9.0
        );
        for member in cover.members() {
            println!("  {:<15} {:?}", member.kind(), member.edge_ids());
        }
        for check in &trace.log.checks {
            println!("  check {check}");
        }
        println!();
    }
}
