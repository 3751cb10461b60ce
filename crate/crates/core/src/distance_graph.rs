//! Implicit representation of `G(n,r,s)` and its percolated subgraphs.
//!
//! The graph is never materialized globally: adjacency is a predicate on
//! vertex pairs, and edge percolation is a stateless counter-based hash of
//! `(seed, edge key)`, where the edge key is the unordered pair of colex
//! ranks. The mixing function is the SplitMix64 finalizer, so identical
//! seeds give identical subgraphs bit-for-bit on any platform or thread
//! count. An explicit bitset adjacency structure is built on demand for
//! vertex counts up to [`EXPLICIT_CAP`]; above that, rows are computed
//! lazily as the solver touches them.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{self, ColexSubsets};
use crate::family::Family;
use crate::params::GraphParams;
use crate::vertex::Vertex;
use crate::{Error, Result};

/// Explicit adjacency matrices are prebuilt only up to this many vertices.
pub const EXPLICIT_CAP: usize = 5000;

/// Edge retention probability plus seed; defines a deterministic random
/// subgraph. The complementary deletion probability is `1 - q` (the
/// `p_paper` column of stability tables).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PercolationSpec {
    pub q: f64,
    pub seed: u64,
}

impl PercolationSpec {
    pub fn new(q: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidInput(format!(
                "retention probability must be in [0,1], got {q}"
            )));
        }
        Ok(PercolationSpec { q, seed })
    }

    /// Deletion probability, the complement of retention; named after the
    /// `p_paper` table column.
    pub fn p_paper(&self) -> f64 {
        1.0 - self.q
    }
}

/// True iff `|u ∩ v| = s` and `u != v`.
pub fn adjacent(u: &Vertex, v: &Vertex, params: &GraphParams) -> Result<bool> {
    u.validate(params)?;
    v.validate(params)?;
    Ok(u != v && u.intersection_size(v) == params.s)
}

/// Degree of every vertex: `C(r,s) * C(n-r, r-s)`. The graph is
/// vertex-transitive, so this is independent of the vertex. Returns 0 when
/// `r - s > n - r`.
pub fn degree(params: &GraphParams) -> BigUint {
    let (n, r, s) = (params.n as u64, params.r as u64, params.s as u64);
    if n - r < r - s {
        return BigUint::from(0u32);
    }
    combinatorics::binom_exact(r, s) * combinatorics::binom_exact(n - r, r - s)
}

/// Streams the neighbors of `u`: every `v` sharing exactly `s` elements,
/// formed by an s-subset of `u` plus an (r-s)-subset of `[n] \ u`.
pub fn neighbors(u: &Vertex, params: &GraphParams) -> Result<impl Iterator<Item = Vertex>> {
    u.validate(params)?;
    let inside = u.elements();
    let outside: Vec<u32> = (1..=params.n).filter(|e| !u.contains(*e)).collect();
    let s = params.s;
    let k = params.r - params.s;
    let outers: Vec<Vertex> = ColexSubsets::over_pool(&outside, k).collect();
    let iter = ColexSubsets::over_pool(&inside, s).flat_map(move |kept| {
        outers
            .clone()
            .into_iter()
            .map(move |outer| kept.union(&outer))
    });
    Ok(iter)
}

/// SplitMix64 finalizer.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Uniform deviate in [0, 1) from the edge key `(seed, lo rank, hi rank)`.
/// Ranks enter as four 64-bit words (each rank is at most 128 bits).
fn edge_uniform(seed: u64, lo: u128, hi: u128) -> f64 {
    let mut h = mix64(seed.wrapping_add(GOLDEN_GAMMA));
    for w in [lo as u64, (lo >> 64) as u64, hi as u64, (hi >> 64) as u64] {
        h = mix64(h.wrapping_add(w).wrapping_add(GOLDEN_GAMMA));
    }
    // 53 high bits -> dyadic rational in [0, 1)
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Bernoulli(q) retention decision for the edge with the given colex ranks.
#[inline]
pub(crate) fn retained_by_rank(spec: &PercolationSpec, rank_a: u128, rank_b: u128) -> bool {
    let (lo, hi) = if rank_a <= rank_b {
        (rank_a, rank_b)
    } else {
        (rank_b, rank_a)
    };
    edge_uniform(spec.seed, lo, hi) < spec.q
}

/// Whether the edge `{u, v}` survives percolation. Deterministic in
/// `(seed, canonical edge key, q)` and symmetric in `(u, v)`; calling it on a
/// non-edge is a contract violation.
pub fn edge_retained(
    u: &Vertex,
    v: &Vertex,
    params: &GraphParams,
    spec: &PercolationSpec,
) -> Result<bool> {
    if !adjacent(u, v, params)? {
        return Err(Error::NotAnEdge { u: *u, v: *v });
    }
    let ra = combinatorics::rank_of_mask(u.mask());
    let rb = combinatorics::rank_of_mask(v.mask());
    Ok(retained_by_rank(spec, ra, rb))
}

/// Derived seed for trial `index` of a Monte Carlo run: the `index`-th output
/// of the SplitMix64 stream started at `base`.
pub fn derive_trial_seed(base: u64, index: u64) -> u64 {
    mix64(base.wrapping_add(GOLDEN_GAMMA.wrapping_mul(index.wrapping_add(1))))
}

/// Adjacency oracle over an indexed vertex list, with optional percolation.
#[derive(Clone)]
pub(crate) struct PairOracle {
    verts: Vec<Vertex>,
    ranks: Vec<u128>,
    s: u32,
    perc: Option<PercolationSpec>,
}

impl PairOracle {
    pub fn new(family: &Family, params: &GraphParams, perc: Option<&PercolationSpec>) -> Self {
        let verts: Vec<Vertex> = family.members().to_vec();
        let ranks = verts
            .iter()
            .map(|v| combinatorics::rank_of_mask(v.mask()))
            .collect();
        PairOracle {
            verts,
            ranks,
            s: params.s,
            perc: perc.copied(),
        }
    }

    /// Oracle for the intersection graph of a family: members are adjacent
    /// when they share at least one element (used for set packing).
    pub fn intersection_graph(family: &Family) -> Self {
        PairOracle {
            verts: family.members().to_vec(),
            ranks: family
                .members()
                .iter()
                .map(|v| combinatorics::rank_of_mask(v.mask()))
                .collect(),
            s: u32::MAX, // sentinel: adjacency = non-disjoint
            perc: None,
        }
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn vertex(&self, i: usize) -> &Vertex {
        &self.verts[i]
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        if i == j {
            return false;
        }
        let inter = self.verts[i].intersection_size(&self.verts[j]);
        if self.s == u32::MAX {
            return inter > 0;
        }
        if inter != self.s {
            return false;
        }
        match &self.perc {
            None => true,
            Some(spec) => retained_by_rank(spec, self.ranks[i], self.ranks[j]),
        }
    }
}

/// Bitset adjacency rows over an indexed vertex list. Rows are prebuilt for
/// vertex counts up to [`EXPLICIT_CAP`] and computed on first touch above it.
pub(crate) struct AdjacencyStore {
    oracle: PairOracle,
    words: usize,
    rows: Vec<Option<Box<[u64]>>>,
    complement: bool,
}

impl AdjacencyStore {
    /// `complement = true` stores non-adjacency rows (used to run the clique
    /// engine for maximum independent sets).
    pub fn new(oracle: PairOracle, complement: bool) -> Self {
        let eager = oracle.len() <= EXPLICIT_CAP;
        Self::with_policy(oracle, complement, eager)
    }

    pub(crate) fn with_policy(oracle: PairOracle, complement: bool, eager: bool) -> Self {
        let n = oracle.len();
        let words = n.div_ceil(64);
        let mut store = AdjacencyStore {
            oracle,
            words,
            rows: vec![None; n],
            complement,
        };
        if eager {
            for i in 0..n {
                store.build_row(i);
            }
        }
        store
    }

    pub fn len(&self) -> usize {
        self.oracle.len()
    }

    pub fn words(&self) -> usize {
        self.words
    }

    fn build_row(&mut self, i: usize) {
        let n = self.oracle.len();
        let mut row = vec![0u64; self.words].into_boxed_slice();
        for j in 0..n {
            if j != i && (self.oracle.adjacent(i, j) ^ self.complement) {
                row[j / 64] |= 1u64 << (j % 64);
            }
        }
        self.rows[i] = Some(row);
    }

    pub fn ensure_row(&mut self, i: usize) {
        if self.rows[i].is_none() {
            self.build_row(i);
        }
    }

    /// Row must have been ensured first.
    pub fn row(&self, i: usize) -> &[u64] {
        self.rows[i].as_deref().expect("row not built")
    }
}

/// An explicit percolated (or plain) graph over a family's members, with the
/// edge list in canonical index order.
pub struct ExplicitGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(usize, usize)>,
}

impl ExplicitGraph {
    /// Materializes all edges among the family members. Errors above
    /// [`EXPLICIT_CAP`] vertices.
    pub fn build(
        family: &Family,
        params: &GraphParams,
        perc: Option<&PercolationSpec>,
    ) -> Result<Self> {
        family.check_params(params)?;
        if family.len() > EXPLICIT_CAP {
            return Err(Error::TooLarge {
                what: "explicit graph vertex set",
                size: family.len(),
                cap: EXPLICIT_CAP,
            });
        }
        let oracle = PairOracle::new(family, params, perc);
        let mut edges = Vec::new();
        for i in 0..oracle.len() {
            for j in i + 1..oracle.len() {
                if oracle.adjacent(i, j) {
                    edges.push((i, j));
                }
            }
        }
        Ok(ExplicitGraph {
            vertices: family.members().to_vec(),
            edges,
        })
    }
}
