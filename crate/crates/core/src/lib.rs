//! Distance graphs `G(n,r,s)` and Kneser graphs at desk scale.
//!
//! Vertices are the r-element subsets of `[n] = {1, ..., n}`; two vertices are
//! adjacent when their intersection has exactly `s` elements (`K(n,r)` is the
//! case `s = 0`). The crate provides:
//!
//! * exact and generalized binomial coefficients plus colexicographic
//!   ranking/unranking of r-subsets ([`combinatorics`]),
//! * implicit graph adjacency and reproducible edge percolation
//!   ([`distance_graph`]),
//! * an exact maximum-independent-set solver with a brute-force oracle and
//!   maximum set packing ([`mis_solver`]),
//! * generators for the named extremal families: stars, trivial t-intersecting
//!   families, unions of stars, pair merges, and the Ahlswede–Khachatrian
//!   families ([`constructions`]),
//! * structural decomposition of independent families and density/bound
//!   reports ([`family_analysis`]),
//! * stability-probability estimation, threshold evaluation, and parameter
//!   sweeps ([`experiments`]).
//!
//! Everything randomized is driven by explicit seeds through a stateless
//! counter-based hash, so identical inputs give identical outputs regardless
//! of thread count.

pub mod combinatorics;
pub mod constructions;
pub mod distance_graph;
pub mod experiments;
pub mod family;
pub mod family_analysis;
pub mod mis_solver;
mod params;
pub mod vertex;

pub use family::Family;
pub use params::GraphParams;
pub use vertex::Vertex;

/// Errors shared by all modules of this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid graph parameters: {0}")]
    InvalidParams(String),
    #[error("invalid vertex: {0}")]
    InvalidVertex(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("rank {rank} out of range: C({n},{r}) = {count}")]
    RankOutOfRange {
        rank: u128,
        n: u32,
        r: u32,
        count: u128,
    },
    #[error("{what} has {size} entries, above the cap of {cap}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("vertices {u} and {v} are not an edge")]
    NotAnEdge { u: Vertex, v: Vertex },
    #[error("family is not independent: {u} and {v} form an edge")]
    NotIndependent { u: Vertex, v: Vertex },
    #[error("search budget exhausted after {nodes} nodes")]
    BudgetExhausted { nodes: u64 },
    #[error("family file, line {line}: {msg}")]
    FamilyFile { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
