//! Exact counting of distinguishing labelings.
//!
//! [`find_dist`] returns `D(G,k)`, the number of distinguishing `k`-labelings of a connected
//! graph up to automorphism, along with `L(G,k) = D(G,k)·|Aut(G)|` and `|Aut(G)|`.

pub mod error;
pub mod graph;

pub use error::{Error, ParseError, Result};
pub use graph::{
    blocks_and_cut_vertices, connected_components, parse_graph, BcNode, BlockDecomposition, Component, EdgeTag, Format,
    Graph, MultiEdge, MultiGraph,
};
pub mod isomorphism;
pub mod perm;
pub(crate) mod util;

pub use isomorphism::{
    are_isomorphic, automorphisms, canonical_code, group_by_isomorphism, CanonicalCode, ColoredGraph, IsoClass,
    PinnedGraph, DEFAULT_AUT_CAP,
};
pub use perm::Permutation;
pub mod triconnect;
pub use triconnect::{
    separation_classes, triconnected_components, triconnected_components_with, ComponentKind, SeparatingPair,
    TriComponent, TriconnectOptions, TriconnectedComponents,
};
pub mod decomposition;
pub use decomposition::{
    build_decomposition_tree, build_decomposition_tree_with, tree_center, DecompNode, DecompTree, NodeKind,
    NodePayload, TreeDump,
};
pub mod group;
pub use group::{classify_group, subgroup_lattice, GroupCase, GroupProfile, PermGroup, SubgroupLattice};
pub mod counting;
pub use counting::{
    count_disconnected, distinguishing_number, distinguishing_polynomial, find_dist, Analysis, AnalysisOptions, Bundle,
    DPolynomial, DistResult, Engine, Star, TreeAnalysis,
};
pub mod families;
pub mod oracle;
pub use oracle::{oracle_automorphisms, oracle_counts, oracle_orbit_count, Context, OracleResult, PairCounts};
