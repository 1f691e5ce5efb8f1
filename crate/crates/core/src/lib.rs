//! Loopy graphs (at most one self-loop per vertex, no multiedges) with a
//! fixed degree sequence: deciding whether double edge swaps connect the
//! space, sampling it uniformly with an added triangle-loop move, and an
//! exhaustive oracle that checks both on small sequences.

pub mod degseq;
pub mod error;
pub mod graph;
pub mod io;
pub mod mcmc;
pub mod oracle;
pub mod swaps;

pub use degseq::{
    check_connectivity, detect_disconnected, max_degree_guarantee, realize_initial_graph,
    ConnectivityReport, DegreeSequence, Method, Status,
};
pub use error::{Error, Infeasibility, Result};
pub use graph::{CanonicalKey, Edge, LayerDecomposition, LoopyGraph};
pub use mcmc::{ChainConfig, ChainStats, Epsilon, Mode};
pub use oracle::{GraphOfGraphs, TheoremReport};
pub use swaps::{Pairing, SwapOutcome, SwapProposal};
