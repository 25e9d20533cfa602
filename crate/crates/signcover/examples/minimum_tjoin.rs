//! Exact minimum T-joins on contracted two-factors: the computational
//! kernel that joins unbalanced circuits before barbell pairing.
//!
//!     cargo run --example minimum_tjoin

use signcover::fixtures;
use signcover::graph::{contract_circuits, Circuit};
use signcover::tjoin::{min_weight_perfect_matching, minimum_tjoin, pairwise_distances};

fn main() {
    // Contract the prism's two unbalanced triangles; three parallel spokes
    // remain and the minimum T-join is a single one.
    let g = fixtures::pri2();
    let t1 = Circuit::from_edge_cycle(&g, &[0, 1, 2]).unwrap();
    let t2 = Circuit::from_edge_cycle(&g, &[3, 4, 5]).unwrap();
    let ctr = contract_circuits(&g, &[t1, t2]).unwrap();
    println!(
        "contracted prism: {} vertices, {} parallel edges",
        ctr.graph.vertex_count(),
        ctr.graph.edge_count()
    );
    let table = pairwise_distances(&ctr.graph, &[0, 1]).unwrap();
    println!("distance between the contracted triangles: {}", table.dist[0][1]);
    let join = minimum_tjoin(&ctr.graph, &[0, 1]).unwrap();
    let original: Vec<usize> = join
        .edge_ids
        .iter()
        .map(|&e| ctr.edge_to_original[e])
        .collect();
    println!(
        "minimum T-join: {} edge(s), original id(s) {:?}",
        join.total_size, original
    );
    assert!(2 * join.total_size <= ctr.graph.edge_count());

    // The exact matching kernel on its own.
    let weights = vec![
        vec![0, 1, 10, 10],
        vec![1, 0, 10, 10],
        vec![10, 10, 0, 1],
        vec![10, 10, 1, 0],
    ];
    let pairing = min_weight_perfect_matching(&weights).unwrap();
    println!("matching under {weights:?}: {pairing:?}");
}
