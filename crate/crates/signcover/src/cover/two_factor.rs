//! Cover of a two-factor with an even number of negative edges, certified at
//! 10/9 of the whole graph: contract the circuits, join the unbalanced ones
//! by an exact minimum T-join, and cover the resulting positive block union.

use std::collections::BTreeSet;

use crate::coloring::{two_factor, ColorClass, EdgeColoring3};
use crate::graph::{circuit_sign, contract_circuits, Cover, EdgeId, Sign, SignedMultigraph};
use crate::tjoin::minimum_tjoin;

use super::{positive_blocks_cover, CoverBuildError, TraceLog};

/// Covers the `(class_a, class_b)` two-factor of a cubic, 2-edge-connected
/// graph, asserting `9 * length <= 10 * |E|`. The two-factor must carry an
/// even number of negative edges.
pub fn two_factor_cover(
    g: &SignedMultigraph,
    f: &EdgeColoring3,
    class_a: ColorClass,
    class_b: ColorClass,
    log: &mut TraceLog,
) -> Result<Cover, CoverBuildError> {
    if !g.is_cubic() {
        return Err(CoverBuildError::NotCubic);
    }
    if !g.is_connected() {
        return Err(CoverBuildError::NotConnected);
    }
    if let Some(&bridge) = g.bridges().first() {
        return Err(CoverBuildError::NotTwoEdgeConnected { bridge });
    }

    let circuits = two_factor(g, f, class_a, class_b);
    let factor_edges: BTreeSet<EdgeId> = circuits
        .iter()
        .flat_map(|c| c.edge_ids().iter().copied())
        .collect();
    let negatives = factor_edges
        .iter()
        .filter(|&&e| g.sign(e).is_negative())
        .count();
    if negatives % 2 != 0 {
        return Err(CoverBuildError::OddNegativeTwoFactor);
    }

    let contraction = contract_circuits(g, &circuits)?;
    let terminals: Vec<usize> = circuits
        .iter()
        .enumerate()
        .filter(|(_, c)| circuit_sign(g, c) == Sign::Negative)
        .map(|(i, _)| contraction.circuit_vertices[i])
        .collect();
    let join = minimum_tjoin(&contraction.graph, &terminals)?;
    // The cited T-join bound holds on every 2-edge-connected contraction;
    // check it in integer arithmetic.
    log.check(
        "tjoin-1/2",
        join.total_size,
        2,
        contraction.graph.edge_count() as u64,
    )?;
    log.note(format!(
        "two-factor {}{}: {} circuits, {} unbalanced, t-join of {}",
        class_a,
        class_b,
        circuits.len(),
        terminals.len(),
        join.total_size
    ));

    let mut edge_set = factor_edges;
    for &e in &join.edge_ids {
        edge_set.insert(contraction.edge_to_original[e]);
    }
    let cover = positive_blocks_cover(g, &edge_set, log)?;
    log.check(
        "two-factor-10/9",
        cover.length(),
        9,
        10 * g.edge_count() as u64,
    )?;
    Ok(cover)
}
