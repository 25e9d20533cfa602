//! Generate random cubic signed instances, cover each, and tabulate the
//! achieved length against the 20/9 bound and the exact optimum.
//!
//!     cargo run --example generate_and_sweep

use signcover::cover::{cover_3ec_cubic, CoverOptions};
use signcover::graph::validate_cover;
use signcover::io::{generate_instance, GenOptions};
use signcover::oracle::{exact_scc, OracleLimits};

fn main() {
    println!("{:>3} {:>4} {:>5} {:>8} {:>7} {:>7} {:>7}", "n", "m", "seed", "case", "length", "scc", "ratio");
    for n in [6usize, 8, 10, 12] {
        for seed in 0..4u64 {
            let mut opts = GenOptions::new(n, 0.35, 4242 + seed);
            opts.require_flow_admissible = true;
            opts.require_colorable = true;
            let g = generate_instance(&opts).expect("generation within budget");
            let (cover, trace) =
                cover_3ec_cubic(&g, None, &CoverOptions::default()).expect("pipeline");
            assert!(validate_cover(&g, &cover).is_valid());
            let m = g.edge_count();
            assert!(9 * cover.length() <= 20 * m);
            let scc = if m <= 20 {
                exact_scc(&g, &OracleLimits::default())
                    .ok()
                    .filter(|r| r.optimal)
                    .map(|r| r.length.to_string())
                    .unwrap_or_default()
            } else {
                String::new()
            };
            println!(
                "{n:>3} {m:>4} {seed:>5} {:>8} {:>7} {scc:>7} {:>7.3}",
                trace.case.to_string(),
                cover.length(),
                cover.length() as f64 / m as f64
            );
        }
    }
    println!("\nevery row satisfies 9*length <= 20*m");
}
