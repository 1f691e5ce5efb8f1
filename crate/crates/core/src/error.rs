use thiserror::Error;

use crate::graph::Edge;

/// Reason a degree sequence admits no loopy realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Infeasibility {
    OddDegreeSum,
    NoLoopPlacement,
}

impl std::fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Infeasibility::OddDegreeSum => write!(f, "odd degree sum"),
            Infeasibility::NoLoopPlacement => {
                write!(
                    f,
                    "no self-loop placement leaves a simple-graphical remainder"
                )
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge ({0}, {1}) would be a multiedge")]
    Multiedge(u32, u32),

    #[error("vertex {vertex} out of range for a graph on {vertex_count} vertices")]
    Index { vertex: u32, vertex_count: usize },

    #[error("not loopy-graphical ({0})")]
    NotLoopyGraphical(Infeasibility),

    #[error("edge {0} is not present in the graph")]
    EdgeNotPresent(Edge),

    #[error("swap proposal is not valid: {0}")]
    InvalidSwap(String),

    #[error("chain needs at least two edges, graph has {0}")]
    DegenerateGraph(usize),

    #[error("invalid chain configuration: {0}")]
    Config(String),

    #[error("sampled graph is not part of the expected state space")]
    UnknownGraph,

    #[error("degree sum {sum} exceeds the enumeration bound {bound}")]
    BoundExceeded { sum: u64, bound: u64 },

    #[error("swap neighbor missing from the enumerated node set")]
    UnknownNeighbor,

    #[error("graph invariant violated: {0}")]
    Inconsistent(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
