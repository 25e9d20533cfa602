//! Canonical test instances, shipped as graph files under `fixtures/` and
//! parsed on demand.
//!
//! - `TRI+`: all-positive triangle (balanced, flow-admissible).
//! - `TRI1`: triangle with one negative edge (not flow-admissible).
//! - `K4M`: complete graph on 4 vertices, negative matching {01, 23}.
//! - `K33A`: complete bipartite 3+3 drawn as a 6-cycle with negatives
//!   {01, 23, 45} plus positive diagonals.
//! - `PRI2`: triangular prism with one negative edge per triangle.
//! - `PET5`: Petersen graph with a negative outer 5-circuit.

use crate::graph::SignedMultigraph;
use crate::io::parse_graph;

macro_rules! fixture {
    ($fn_name:ident, $file:literal) => {
        pub fn $fn_name() -> SignedMultigraph {
            parse_graph(include_str!(concat!("../fixtures/", $file)))
                .expect("shipped fixture parses")
                .graph
        }
    };
}

fixture!(tri_plus, "tri_plus.sg");
fixture!(tri1, "tri1.sg");
fixture!(k4m, "k4m.sg");
fixture!(k33a, "k33a.sg");
fixture!(pri2, "pri2.sg");
fixture!(pet5, "pet5.sg");

/// Fixture lookup by file stem, as used by examples and docs.
pub fn by_name(name: &str) -> Option<SignedMultigraph> {
    match name {
        "tri_plus" | "TRI+" => Some(tri_plus()),
        "tri1" | "TRI1" => Some(tri1()),
        "k4m" | "K4M" => Some(k4m()),
        "k33a" | "K33A" => Some(k33a()),
        "pri2" | "PRI2" => Some(pri2()),
        "pet5" | "PET5" => Some(pet5()),
        _ => None,
    }
}

pub const ALL: [&str; 6] = ["tri_plus", "tri1", "k4m", "k33a", "pri2", "pet5"];
