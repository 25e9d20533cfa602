//! Exhaustive 3-edge-coloring search, class parities, two-factors, and the
//! color swap on an unbalanced circuit.
//!
//!     cargo run --example edge_coloring

use signcover::coloring::{
    class_negativity, find_coloring, relabel_for_parity, swap_on_circuit, two_factor, ColorClass,
};
use signcover::fixtures;
use signcover::graph::{circuit_sign, Sign, SignedMultigraph};

fn main() {
    use ColorClass::*;

    let g = fixtures::pri2();
    let f = find_coloring(&g, 1_000_000).unwrap().expect("prism is class 1");
    println!("prism coloring: {:?}", f.classes());
    for (a, b) in [(R, B), (R, Y), (B, Y)] {
        let circuits = two_factor(&g, &f, a, b);
        let lens: Vec<usize> = circuits.iter().map(|c| c.len()).collect();
        println!("  {a}{b} two-factor: circuit lengths {lens:?}");
    }

    println!("\nPetersen: {:?}", find_coloring(&fixtures::pet5(), 10_000_000));

    // Swapping on an unbalanced circuit flips the parities of both classes.
    let g = SignedMultigraph::from_numeric(
        4,
        &[(0, 1, -1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)],
    )
    .unwrap();
    let f = find_coloring(&g, 1_000_000).unwrap().unwrap();
    let parities = |f: &signcover::coloring::EdgeColoring3| {
        [R, B, Y].map(|c| u8::from(class_negativity(&g, f, c)))
    };
    println!("\nK4 (one negative): parities {:?}", parities(&f));
    println!(
        "relabeled for equal R/B parity: {:?}",
        parities(&relabel_for_parity(&g, &f))
    );
    let rb = two_factor(&g, &f, R, B);
    let unbalanced = rb
        .iter()
        .find(|c| circuit_sign(&g, c) == Sign::Negative)
        .expect("RB cycle is unbalanced");
    let swapped = swap_on_circuit(&f, unbalanced, R, B).unwrap();
    println!("after swapping R/B on it: parities {:?}", parities(&swapped));
}
