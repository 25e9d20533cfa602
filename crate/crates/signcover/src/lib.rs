//! Sign-circuit covers of cubic signed graphs.
//!
//! A signed graph carries a `+1`/`-1` label on every edge. Its covering
//! objects are *sign-circuits*: balanced circuits and barbells (two
//! unbalanced circuits joined by a path). This crate builds length-bounded
//! sign-circuit covers of 3-edge-colorable cubic signed graphs, verifies
//! covers against a structured validity report, and cross-checks everything
//! against an exact small-instance oracle.
//!
//! The constructive pipeline certifies, at runtime and in integer
//! arithmetic, that the produced cover has length at most `20/9 · |E|`, with
//! tighter per-stage bounds (`10/9` for two-factor covers, `8/9 · |E| + |C|`
//! for the unbalanced-circuit construction, `4/3` and `3/2` for the barbell
//! pairings) checked on every invocation.
//!
//! Entry points:
//! - [`graph`]: signed multigraphs, circuits, barbells, covers, validation.
//! - [`analysis`]: balance certificates, switching, flow-admissibility.
//! - [`coloring`]: proper 3-edge colorings and two-factors.
//! - [`tjoin`]: exact minimum T-joins.
//! - [`cover`]: the cover constructions and the full pipeline.
//! - [`oracle`]: exhaustive enumeration and exact shortest covers.
//! - [`io`]: file formats and the random instance generator.
//! - [`cli`]: the command-line entry points used by the `signcover` binary.

pub mod analysis;
pub mod coloring;
pub mod cover;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod tjoin;

pub mod cli;

pub use analysis::{
    apply_switching, equivalent_to_single_negative_edge, find_unbalanced_circuit,
    is_balanced, is_flow_admissible, BalanceCertificate, FlowAdmissibility, FlowObstruction,
};
pub use coloring::{
    class_negativity, find_coloring, relabel_for_parity, swap_on_circuit, two_factor,
    validate_coloring, ColorClass, EdgeColoring3,
};
pub use graph::{
    circuit_sign, contract_circuits, cover_length, validate_cover, validate_sign_circuit,
    Circuit, Cover, CycleForest, Edge, EdgeId, Path, Sign, SignCircuit, SignedMultigraph,
    VertexId,
};
pub use oracle::{exact_scc, flow_admissible_by_definition, OracleLimits, SccResult};
pub use tjoin::{min_weight_perfect_matching, minimum_tjoin, pairwise_distances, TJoinResult};
