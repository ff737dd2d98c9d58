//! Tools for deciding whether cubic graphs are 2-factor Hamiltonian,
//! 2-factor isomorphic or pseudo 2-factor isomorphic, plus the graph
//! machinery around that question: graph6 I/O, connectivity and symmetry,
//! star products, voltage lifts and exhaustive generation.

pub mod canon;
pub mod classify;
pub mod constructions;
pub mod flow;
pub mod generator;
pub mod graph;
pub mod graph6;
pub mod matching;
pub mod structure;
pub mod two_factor;
pub mod voltage;

pub use classify::{classify, ClassificationReport, ClassifyOptions, Mode, Status, Witness};
pub use canon::{automorphisms, canonical_form, transitivity, AutomorphismInfo, Transitivity};
pub use graph::{Graph, GraphError};
pub use graph6::{parse_graph6, write_graph6, Graph6Error};
pub use matching::{enumerate_perfect_matchings, heuristic_matching, PerfectMatching};
pub use structure::{
    bipartition, cyclic_edge_connectivity, edge_connectivity, girth, nontrivial_3_edge_cuts,
    Bipartition, CutKind, EdgeCut,
};
pub use two_factor::{two_factor_of, CycleType, TwoFactor};
