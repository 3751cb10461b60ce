//! Exact maximum independent set computation on explicit or percolated
//! distance graphs, with a brute-force oracle and maximum set packing
//! (pairwise-disjoint subfamilies) as a special case.
//!
//! The solver runs branch-and-bound maximum clique on the complement graph
//! with greedy sequential coloring as the upper bound; distance graphs at
//! desk scale are dense, so coloring bounds prune well. Vertex order is
//! fixed to colex rank, which makes witnesses reproducible across runs and
//! platforms.

use std::time::{Duration, Instant};

use crate::distance_graph::{AdjacencyStore, PairOracle, PercolationSpec, EXPLICIT_CAP};
use crate::family::Family;
use crate::params::GraphParams;
use crate::vertex::Vertex;
use crate::{Error, Result};

/// Cap for the exhaustive [`brute_force_alpha`] oracle.
pub const BRUTE_FORCE_CAP: usize = 24;

/// Search limits: node count and wall clock, whichever is hit first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_seconds: f64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: 100_000_000,
            max_seconds: 300.0,
        }
    }
}

impl Budget {
    pub fn new(max_nodes: u64, max_seconds: f64) -> Self {
        Budget {
            max_nodes,
            max_seconds,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    /// `alpha` is the exact independence number.
    Exact,
    /// The budget ran out; `alpha` is only a lower bound.
    LowerBoundOnly,
}

/// Outcome of a solver run. When `status` is [`SolveStatus::Exact`], the
/// witness achieves `alpha` and is independent in the queried graph.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub alpha: u64,
    pub witness: Family,
    pub status: SolveStatus,
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

/// Exact maximum independent set among `vertices` in (possibly percolated)
/// `G(n,r,s)`. Without a percolation spec the vertex count must stay within
/// the explicit-graph cap; with one, adjacency rows are built lazily and any
/// size is accepted subject to the budget.
pub fn max_independent_set(
    vertices: &Family,
    params: &GraphParams,
    perc: Option<&PercolationSpec>,
    budget: &Budget,
) -> Result<SolveResult> {
    vertices.check_params(params)?;
    if perc.is_none() && vertices.len() > EXPLICIT_CAP {
        return Err(Error::TooLarge {
            what: "solver vertex set (no percolation spec)",
            size: vertices.len(),
            cap: EXPLICIT_CAP,
        });
    }
    let start = Instant::now();
    let oracle = PairOracle::new(vertices, params, perc);
    let mut store = AdjacencyStore::new(oracle, true);
    let mut engine = CliqueEngine::new(&mut store, budget);
    engine.run();
    let witness_members: Vec<Vertex> = engine
        .best_clique
        .iter()
        .map(|&i| vertices.members()[i])
        .collect();
    let witness = Family::new(vertices.n(), vertices.r(), witness_members)?;
    Ok(SolveResult {
        alpha: engine.best as u64,
        witness,
        status: if engine.exhausted {
            SolveStatus::LowerBoundOnly
        } else {
            SolveStatus::Exact
        },
        nodes_explored: engine.nodes,
        elapsed: start.elapsed(),
    })
}

/// Convenience: solve on the full vertex set of `params`.
pub fn full_graph_alpha(
    params: &GraphParams,
    perc: Option<&PercolationSpec>,
    budget: &Budget,
) -> Result<SolveResult> {
    let fam = Family::full_vertex_set(params);
    max_independent_set(&fam, params, perc, budget)
}

/// Reference oracle: exact independence number by exhaustive enumeration of
/// all vertex subsets. Capped at [`BRUTE_FORCE_CAP`] vertices.
pub fn brute_force_alpha(
    vertices: &Family,
    params: &GraphParams,
    perc: Option<&PercolationSpec>,
) -> Result<u64> {
    vertices.check_params(params)?;
    let m = vertices.len();
    if m > BRUTE_FORCE_CAP {
        return Err(Error::TooLarge {
            what: "brute-force vertex set",
            size: m,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let oracle = PairOracle::new(vertices, params, perc);
    let mut adj = vec![0u32; m];
    for (i, row) in adj.iter_mut().enumerate() {
        for j in 0..m {
            if i != j && oracle.adjacent(i, j) {
                *row |= 1 << j;
            }
        }
    }
    let mut best = 0u32;
    for sub in 0u32..(1u32 << m) {
        if sub.count_ones() <= best {
            continue;
        }
        let mut rest = sub;
        let mut ok = true;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            if adj[v] & sub != 0 {
                ok = false;
                break;
            }
            rest &= rest - 1;
        }
        if ok {
            best = sub.count_ones();
        }
    }
    Ok(best as u64)
}

/// True iff no pair of family members forms an edge of the (possibly
/// percolated) graph.
pub fn is_independent(
    family: &Family,
    params: &GraphParams,
    perc: Option<&PercolationSpec>,
) -> Result<bool> {
    Ok(find_dependent_pair(family, params, perc)?.is_none())
}

/// First (in colex order) pair of members forming an edge, if any.
pub fn find_dependent_pair(
    family: &Family,
    params: &GraphParams,
    perc: Option<&PercolationSpec>,
) -> Result<Option<(Vertex, Vertex)>> {
    family.check_params(params)?;
    let oracle = PairOracle::new(family, params, perc);
    for i in 0..oracle.len() {
        for j in i + 1..oracle.len() {
            if oracle.adjacent(i, j) {
                return Ok(Some((*oracle.vertex(i), *oracle.vertex(j))));
            }
        }
    }
    Ok(None)
}

/// A maximum pairwise-disjoint subfamily, or a flagged greedy maximal one
/// when the budget runs out.
#[derive(Debug, Clone)]
pub struct PackingResult {
    pub members: Family,
    /// True when the packing is a certified maximum; false for the greedy
    /// fallback (maximal, not maximum).
    pub certified_maximum: bool,
    pub nodes_explored: u64,
}

/// Maximum-cardinality pairwise-disjoint subfamily (set packing), computed
/// exactly as a maximum independent set of the intersection graph, with the
/// colex-least witness among all maximum packings.
pub fn max_disjoint_subfamily(family: &Family, budget: &Budget) -> Result<PackingResult> {
    if family.len() > EXPLICIT_CAP {
        return Err(Error::TooLarge {
            what: "set-packing family",
            size: family.len(),
            cap: EXPLICIT_CAP,
        });
    }
    let m = family.len();
    if m == 0 {
        return Ok(PackingResult {
            members: Family::empty(family.n(), family.r())?,
            certified_maximum: true,
            nodes_explored: 0,
        });
    }
    // Cliques of the disjointness graph are packings.
    let oracle = PairOracle::intersection_graph(family);
    let mut store = AdjacencyStore::new(oracle, true);
    let mut total_nodes = 0u64;

    let mut engine = CliqueEngine::new(&mut store, budget);
    engine.run();
    total_nodes += engine.nodes;
    let target = engine.best;
    if engine.exhausted {
        return Ok(greedy_packing(family, total_nodes));
    }

    // Refine to the colex-least maximum packing: walk members in colex order
    // and keep one exactly when a maximum packing through the kept prefix
    // still exists.
    let words = store.words();
    let mut cand: Vec<u64> = vec![!0u64; words];
    trim_bits(&mut cand, m);
    let mut chosen: Vec<usize> = Vec::with_capacity(target);
    let mut remaining = target;
    let mut i = 0usize;
    while remaining > 0 && i < m {
        if cand[i / 64] & (1u64 << (i % 64)) == 0 {
            i += 1;
            continue;
        }
        // candidates after including i: disjoint from i, index above i
        store.ensure_row(i);
        let mut next_cand: Vec<u64> = cand.clone();
        and_assign(&mut next_cand, store.row(i));
        clear_upto(&mut next_cand, i);
        // decision probe: does a clique of size >= remaining - 1 survive?
        let mut probe = CliqueEngine::new(&mut store, budget);
        probe.best = remaining.saturating_sub(2);
        probe.run_on(&next_cand);
        total_nodes += probe.nodes;
        if probe.exhausted {
            return Ok(greedy_packing(family, total_nodes));
        }
        if probe.best_clique.len() + 1 >= remaining {
            chosen.push(i);
            cand = next_cand;
            remaining -= 1;
        } else {
            cand[i / 64] &= !(1u64 << (i % 64));
        }
        i += 1;
    }
    debug_assert_eq!(remaining, 0);
    let members: Vec<Vertex> = chosen.iter().map(|&i| family.members()[i]).collect();
    Ok(PackingResult {
        members: Family::new(family.n(), family.r(), members)?,
        certified_maximum: true,
        nodes_explored: total_nodes,
    })
}

fn greedy_packing(family: &Family, nodes: u64) -> PackingResult {
    let mut chosen: Vec<Vertex> = Vec::new();
    for v in family.iter() {
        if chosen.iter().all(|u| u.is_disjoint(v)) {
            chosen.push(*v);
        }
    }
    PackingResult {
        members: Family::new(family.n(), family.r(), chosen).expect("members come from family"),
        certified_maximum: false,
        nodes_explored: nodes,
    }
}

// ---- bitset helpers ----------------------------------------------------

fn trim_bits(words: &mut [u64], n: usize) {
    let full = n / 64;
    for (wi, w) in words.iter_mut().enumerate() {
        if wi > full {
            *w = 0;
        } else if wi == full {
            *w &= if n.is_multiple_of(64) {
                0
            } else {
                (1u64 << (n % 64)) - 1
            };
        }
    }
}

fn and_assign(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d &= s;
    }
}

fn clear_upto(words: &mut [u64], i: usize) {
    // clear bits 0..=i
    let wi = i / 64;
    for w in &mut words[..wi] {
        *w = 0;
    }
    let off = i % 64;
    words[wi] &= !(u64::MAX >> (63 - off));
}

fn bits_empty(words: &[u64]) -> bool {
    words.iter().all(|&w| w == 0)
}

fn first_bit(words: &[u64]) -> Option<usize> {
    for (wi, &w) in words.iter().enumerate() {
        if w != 0 {
            return Some(wi * 64 + w.trailing_zeros() as usize);
        }
    }
    None
}

fn bits_indices(words: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (wi, &w) in words.iter().enumerate() {
        let mut m = w;
        while m != 0 {
            out.push(wi * 64 + m.trailing_zeros() as usize);
            m &= m - 1;
        }
    }
    out
}

// ---- branch and bound --------------------------------------------------

const TIME_CHECK_MASK: u64 = 0xFFF;

struct CliqueEngine<'a> {
    adj: &'a mut AdjacencyStore,
    max_nodes: u64,
    deadline: Instant,
    nodes: u64,
    best: usize,
    best_clique: Vec<usize>,
    current: Vec<usize>,
    exhausted: bool,
}

impl<'a> CliqueEngine<'a> {
    fn new(adj: &'a mut AdjacencyStore, budget: &Budget) -> Self {
        let deadline = Instant::now() + Duration::from_secs_f64(budget.max_seconds);
        CliqueEngine {
            adj,
            max_nodes: budget.max_nodes,
            deadline,
            nodes: 0,
            best: 0,
            best_clique: Vec::new(),
            current: Vec::new(),
            exhausted: false,
        }
    }

    /// Full run over all vertices, seeded with a greedy clique as the
    /// initial lower bound (and fallback witness).
    fn run(&mut self) {
        let n = self.adj.len();
        if n == 0 {
            return;
        }
        let greedy = self.greedy_clique();
        self.best = greedy.len();
        self.best_clique = greedy;
        let mut all = vec![!0u64; n.div_ceil(64)];
        trim_bits(&mut all, n);
        self.expand(&all);
    }

    /// Runs on a restricted candidate set, keeping whatever `best` was
    /// preset (used as a decision procedure by the packing refinement).
    fn run_on(&mut self, candidates: &[u64]) {
        if bits_empty(candidates) {
            return;
        }
        self.expand(candidates);
    }

    fn greedy_clique(&mut self) -> Vec<usize> {
        let n = self.adj.len();
        let mut clique: Vec<usize> = Vec::new();
        let mut cand = vec![!0u64; n.div_ceil(64)];
        trim_bits(&mut cand, n);
        while let Some(v) = first_bit(&cand) {
            clique.push(v);
            self.adj.ensure_row(v);
            and_assign(&mut cand, self.adj.row(v));
        }
        clique
    }

    fn out_of_budget(&mut self) -> bool {
        if self.nodes > self.max_nodes {
            return true;
        }
        if self.nodes & TIME_CHECK_MASK == 0 && Instant::now() >= self.deadline {
            return true;
        }
        false
    }

    fn expand(&mut self, p: &[u64]) {
        self.nodes += 1;
        if self.out_of_budget() {
            self.exhausted = true;
            return;
        }
        let colored = self.color(p);
        let mut p = p.to_vec();
        for &(v, bound) in colored.iter().rev() {
            if self.exhausted {
                return;
            }
            if self.current.len() + bound <= self.best {
                return;
            }
            self.current.push(v);
            self.adj.ensure_row(v);
            let mut p2 = p.clone();
            and_assign(&mut p2, self.adj.row(v));
            if bits_empty(&p2) {
                if self.current.len() > self.best {
                    self.best = self.current.len();
                    self.best_clique = self.current.clone();
                }
            } else {
                self.expand(&p2);
            }
            self.current.pop();
            p[v / 64] &= !(1u64 << (v % 64));
        }
    }

    /// Greedy sequential coloring of the candidate subgraph in ascending
    /// index order; returns (vertex, color number) sorted by color then
    /// index, so color numbers bound the clique size of any suffix.
    fn color(&mut self, p: &[u64]) -> Vec<(usize, usize)> {
        let verts = bits_indices(p);
        let words = p.len();
        let mut classes: Vec<Vec<u64>> = Vec::new();
        let mut assignment: Vec<Vec<usize>> = Vec::new();
        for &v in &verts {
            self.adj.ensure_row(v);
            let row = self.adj.row(v);
            let mut placed = false;
            for (ci, class) in classes.iter_mut().enumerate() {
                let conflict = class.iter().zip(row).any(|(&c, &r)| c & r != 0);
                if !conflict {
                    class[v / 64] |= 1u64 << (v % 64);
                    assignment[ci].push(v);
                    placed = true;
                    break;
                }
            }
            if !placed {
                let mut class = vec![0u64; words];
                class[v / 64] |= 1u64 << (v % 64);
                classes.push(class);
                assignment.push(vec![v]);
            }
        }
        let mut out = Vec::with_capacity(verts.len());
        for (ci, members) in assignment.iter().enumerate() {
            for &v in members {
                out.push((v, ci + 1));
            }
        }
        out
    }
}
