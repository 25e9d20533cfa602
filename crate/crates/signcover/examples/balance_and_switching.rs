//! Balance certificates, switching, and the two flow-admissibility routes
//! (structural conditions versus the definitional sign-circuit catalog).
//!
//!     cargo run --example balance_and_switching

use signcover::analysis::{
    apply_switching, equivalent_to_single_negative_edge, is_balanced, is_flow_admissible,
    BalanceCertificate,
};
use signcover::fixtures;
use signcover::graph::circuit_sign;
use signcover::oracle::{enumerate_circuits, flow_admissible_by_definition, OracleLimits};

fn main() {
    for name in fixtures::ALL {
        let g = fixtures::by_name(name).unwrap();
        match is_balanced(&g) {
            BalanceCertificate::Potential(p) => {
                println!("{name}: balanced, potential {:?}", p);
            }
            BalanceCertificate::Witness(c) => {
                println!(
                    "{name}: unbalanced, witness circuit through {:?}",
                    c.vertex_sequence()
                );
            }
        }
        let adm = is_flow_admissible(&g);
        let def = flow_admissible_by_definition(&g).unwrap();
        assert_eq!(adm.admissible, def);
        println!(
            "  flow-admissible: {} (obstruction: {:?})",
            adm.admissible, adm.obstruction
        );
        if let Ok(Some(e)) = equivalent_to_single_negative_edge(&g) {
            println!("  switching-equivalent to a single negative edge: {e}");
        }
    }

    // Switching never changes any circuit sign.
    let g = fixtures::k33a();
    let switched = apply_switching(&g, &[0, 2, 4]);
    let limits = OracleLimits::default();
    for c in enumerate_circuits(&g, &limits).unwrap() {
        assert_eq!(circuit_sign(&g, &c), circuit_sign(&switched, &c));
    }
    println!("\nall K33A circuit signs survive switching at {{0, 2, 4}}");
}
