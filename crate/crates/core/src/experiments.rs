//! Stability-probability estimation (Monte Carlo and exact), threshold
//! formula evaluation, parameter sweeps, and independence-number formula
//! tables.
//!
//! Stability is the event that the percolated graph keeps the reference
//! independence number (by default the full graph's). Monte Carlo trials and
//! exhaustive edge-subset enumeration are both deterministic in their seeds
//! and reduce over commutative integer counts, so results do not depend on
//! thread count or execution order.

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::binom_exact;
use crate::distance_graph::{derive_trial_seed, ExplicitGraph, PercolationSpec};
use crate::family::Family;
use crate::mis_solver::{max_independent_set, Budget, SolveStatus};
use crate::params::GraphParams;
use crate::{Error, Result};

/// Edge cap for exhaustive stability enumeration (2^|E| subgraph solves).
pub const EXHAUSTIVE_EDGE_CAP: usize = 22;

/// 95% normal quantile for Wilson intervals.
const WILSON_Z: f64 = 1.959963984540054;

/// Logarithm convention for the threshold formula; the source states "log"
/// without a base, so both are exposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LogBase {
    #[serde(rename = "e")]
    Natural,
    #[serde(rename = "2")]
    Two,
}

impl LogBase {
    fn log(&self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
        }
    }
}

/// The stability threshold scale `((r+1) log n - r log r) / C(n-1, r-1)`,
/// reported for both the retention and deletion conventions.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ThresholdReport {
    pub n: u64,
    pub r: u64,
    pub log_base: LogBase,
    pub p_c: f64,
    /// `1 - p_c`, the threshold seen from the deletion side.
    pub deletion_threshold: f64,
}

/// Evaluates the threshold formula. Requires `2 <= r <= n/2`.
pub fn p_threshold(n: u64, r: u64, base: LogBase) -> Result<ThresholdReport> {
    if r < 2 || 2 * r > n {
        return Err(Error::InvalidInput(format!(
            "threshold formula needs 2 <= r <= n/2, got n={n} r={r}"
        )));
    }
    let denom = binom_exact(n - 1, r - 1).to_f64().unwrap_or(f64::INFINITY);
    let p_c = ((r as f64 + 1.0) * base.log(n as f64) - r as f64 * base.log(r as f64)) / denom;
    Ok(ThresholdReport {
        n,
        r,
        log_base: base,
        p_c,
        deletion_threshold: 1.0 - p_c,
    })
}

/// Scale of the half-percolation independence number for fixed `(r, s)`:
/// `(r-s) C(n,r) / (C(r,s) C(n-r,r-s)) * log2 n`, reported as context next
/// to sweep output (an asymptotic order, not an assertion).
pub fn half_percolation_alpha_scale(params: &GraphParams) -> f64 {
    let (n, r, s) = (params.n as u64, params.r as u64, params.s as u64);
    let num = (r - s) as f64 * binom_exact(n, r).to_f64().unwrap_or(f64::INFINITY);
    let den = (binom_exact(r, s) * binom_exact(n - r, r - s))
        .to_f64()
        .unwrap_or(f64::INFINITY);
    num / den * (n as f64).log2()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    #[serde(rename = "monte-carlo")]
    MonteCarlo,
    #[serde(rename = "exhaustive")]
    Exhaustive,
}

impl Method {
    fn as_str(&self) -> &'static str {
        match self {
            Method::MonteCarlo => "monte-carlo",
            Method::Exhaustive => "exhaustive",
        }
    }
}

/// A stability-probability estimate for one `(params, q)` point.
#[derive(Debug, Clone)]
pub struct StabilityEstimate {
    pub params: GraphParams,
    pub q: f64,
    pub alpha_ref: u64,
    /// Completed trials (Monte Carlo) or `2^|E|` (exhaustive).
    pub trials: u64,
    /// Trials with `alpha(G_q) = alpha_ref`; for the exhaustive method, the
    /// unweighted count of stable edge subsets.
    pub successes: u64,
    /// Trials excluded because the per-trial solve ran out of budget.
    pub indeterminate: u64,
    pub point_estimate: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub seed: Option<u64>,
    pub method: Method,
}

fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let margin = WILSON_Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    (
        ((center - margin) / denom).max(0.0),
        ((center + margin) / denom).min(1.0),
    )
}

fn reference_alpha(params: &GraphParams, supplied: Option<u64>, budget: &Budget) -> Result<u64> {
    if let Some(a) = supplied {
        return Ok(a);
    }
    let full = Family::full_vertex_set(params);
    let res = max_independent_set(&full, params, None, budget)?;
    if res.status != SolveStatus::Exact {
        return Err(Error::BudgetExhausted {
            nodes: res.nodes_explored,
        });
    }
    Ok(res.alpha)
}

/// Monte Carlo stability estimate: for each trial a percolation seed is
/// derived from `(seed, trial index)`, the subgraph's independence number is
/// solved exactly, and successes are tallied. Identical `(seed, trials)`
/// give identical results regardless of parallelism; budget-exhausted trials
/// are excluded and counted, never silently classified.
pub fn mc_stability(
    params: &GraphParams,
    q: f64,
    trials: u64,
    seed: u64,
    alpha_ref: Option<u64>,
    budget: &Budget,
) -> Result<StabilityEstimate> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    PercolationSpec::new(q, seed)?;
    let alpha_ref = reference_alpha(params, alpha_ref, budget)?;
    let full = Family::full_vertex_set(params);
    if full.len() > crate::distance_graph::EXPLICIT_CAP {
        return Err(Error::TooLarge {
            what: "stability vertex set",
            size: full.len(),
            cap: crate::distance_graph::EXPLICIT_CAP,
        });
    }

    let (successes, indeterminate) = (0..trials)
        .into_par_iter()
        .map(|i| {
            let spec = PercolationSpec {
                q,
                seed: derive_trial_seed(seed, i),
            };
            match max_independent_set(&full, params, Some(&spec), budget) {
                Ok(res) if res.status == SolveStatus::Exact => {
                    ((res.alpha == alpha_ref) as u64, 0u64)
                }
                _ => (0, 1),
            }
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

    let determinate = trials - indeterminate;
    let point_estimate = if determinate > 0 {
        successes as f64 / determinate as f64
    } else {
        f64::NAN
    };
    let (wilson_lo, wilson_hi) = wilson_interval(successes, determinate);
    Ok(StabilityEstimate {
        params: *params,
        q,
        alpha_ref,
        trials: determinate,
        successes,
        indeterminate,
        point_estimate,
        wilson_lo,
        wilson_hi,
        seed: Some(seed),
        method: Method::MonteCarlo,
    })
}

/// Stable-subset counts by retained-edge count, over all `2^|E|` subsets.
struct EdgeSubsetCounts {
    counts: Vec<u64>,
    edge_count: usize,
    alpha_ref: u64,
}

fn alpha_by_branching(cand: u64, adj: &[u64]) -> u32 {
    if cand == 0 {
        return 0;
    }
    let v = cand.trailing_zeros() as usize;
    let bit = 1u64 << v;
    let nbrs = adj[v] & cand;
    if nbrs == 0 {
        // isolated within the candidates: always take it
        return 1 + alpha_by_branching(cand & !bit, adj);
    }
    let with_v = 1 + alpha_by_branching(cand & !(adj[v] | bit), adj);
    let without_v = alpha_by_branching(cand & !bit, adj);
    with_v.max(without_v)
}

fn enumerate_edge_subsets(params: &GraphParams, budget: &Budget) -> Result<EdgeSubsetCounts> {
    let full = Family::full_vertex_set(params);
    let graph = ExplicitGraph::build(&full, params, None)?;
    let edge_count = graph.edges.len();
    if edge_count > EXHAUSTIVE_EDGE_CAP {
        return Err(Error::TooLarge {
            what: "exhaustive stability edge set",
            size: edge_count,
            cap: EXHAUSTIVE_EDGE_CAP,
        });
    }
    let alpha_ref = reference_alpha(params, None, budget)?;

    // Vertices isolated in the full graph stay isolated in every subgraph
    // and contribute additively to alpha.
    let mut touched: Vec<bool> = vec![false; full.len()];
    for &(i, j) in &graph.edges {
        touched[i] = true;
        touched[j] = true;
    }
    let isolated = touched.iter().filter(|t| !**t).count() as u32;
    let core_index: Vec<usize> = (0..full.len()).filter(|&i| touched[i]).collect();
    let core_count = core_index.len();
    debug_assert!(core_count <= 2 * EXHAUSTIVE_EDGE_CAP);
    let position: std::collections::HashMap<usize, usize> = core_index
        .iter()
        .enumerate()
        .map(|(pos, &i)| (i, pos))
        .collect();
    let core_edges: Vec<(usize, usize)> = graph
        .edges
        .iter()
        .map(|&(i, j)| (position[&i], position[&j]))
        .collect();

    let total: u64 = 1u64 << edge_count;
    let cand: u64 = if core_count == 64 {
        u64::MAX
    } else {
        (1u64 << core_count) - 1
    };
    let counts = (0..total)
        .into_par_iter()
        .fold(
            || vec![0u64; edge_count + 1],
            |mut acc, subset| {
                let mut adj = vec![0u64; core_count];
                for (e, &(a, b)) in core_edges.iter().enumerate() {
                    if subset & (1 << e) != 0 {
                        adj[a] |= 1u64 << b;
                        adj[b] |= 1u64 << a;
                    }
                }
                let alpha = isolated as u64 + alpha_by_branching(cand, &adj) as u64;
                if alpha == alpha_ref {
                    acc[subset.count_ones() as usize] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; edge_count + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(EdgeSubsetCounts {
        counts,
        edge_count,
        alpha_ref,
    })
}

fn estimate_from_counts(
    params: &GraphParams,
    counts: &EdgeSubsetCounts,
    q: f64,
) -> StabilityEstimate {
    // compensated (Kahan) summation of the subset-weight polynomial
    let e = counts.edge_count as i32;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for (k, &c) in counts.counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let term = c as f64 * q.powi(k as i32) * (1.0 - q).powi(e - k as i32);
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    let successes: u64 = counts.counts.iter().sum();
    StabilityEstimate {
        params: *params,
        q,
        alpha_ref: counts.alpha_ref,
        trials: 1u64 << counts.edge_count,
        successes,
        indeterminate: 0,
        point_estimate: sum,
        wilson_lo: sum,
        wilson_hi: sum,
        seed: None,
        method: Method::Exhaustive,
    }
}

/// Exact stability probability by full enumeration of the `2^|E|` edge
/// subsets, weighted `q^|S| (1-q)^(|E|-|S|)`. Capped at
/// [`EXHAUSTIVE_EDGE_CAP`] edges.
pub fn exact_stability(params: &GraphParams, q: f64, budget: &Budget) -> Result<StabilityEstimate> {
    Ok(exact_stability_many(params, &[q], budget)?
        .pop()
        .expect("one row per grid point"))
}

/// [`exact_stability`] over a q grid, sharing one subset enumeration.
pub fn exact_stability_many(
    params: &GraphParams,
    q_grid: &[f64],
    budget: &Budget,
) -> Result<Vec<StabilityEstimate>> {
    for &q in q_grid {
        PercolationSpec::new(q, 0)?;
    }
    let counts = enumerate_edge_subsets(params, budget)?;
    Ok(q_grid
        .iter()
        .map(|&q| estimate_from_counts(params, &counts, q))
        .collect())
}

/// One Monte Carlo stability row per grid point; rows use independent
/// derived seeds and are reproducible for identical inputs.
pub fn stability_sweep(
    params: &GraphParams,
    q_grid: &[f64],
    trials: u64,
    seed: u64,
    budget: &Budget,
) -> Result<Vec<StabilityEstimate>> {
    if q_grid.is_empty() {
        return Err(Error::InvalidInput("empty q grid".into()));
    }
    let alpha_ref = reference_alpha(params, None, budget)?;
    q_grid
        .iter()
        .enumerate()
        .map(|(row, &q)| {
            let row_seed = derive_trial_seed(seed, row as u64);
            mc_stability(params, q, trials, row_seed, Some(alpha_ref), budget)
        })
        .collect()
}

/// Serialization row shared by the CSV and JSON emitters (identical keys).
#[derive(Serialize)]
struct EstimateRow<'a> {
    n: u32,
    r: u32,
    s: u32,
    q: f64,
    p_paper: f64,
    trials: u64,
    successes: u64,
    estimate: f64,
    wilson_lo: f64,
    wilson_hi: f64,
    alpha_ref: u64,
    method: &'a str,
    seed: Option<u64>,
}

impl StabilityEstimate {
    fn row(&self) -> EstimateRow<'_> {
        EstimateRow {
            n: self.params.n,
            r: self.params.r,
            s: self.params.s,
            q: self.q,
            p_paper: 1.0 - self.q,
            trials: self.trials,
            successes: self.successes,
            estimate: self.point_estimate,
            wilson_lo: self.wilson_lo,
            wilson_hi: self.wilson_hi,
            alpha_ref: self.alpha_ref,
            method: self.method.as_str(),
            seed: self.seed,
        }
    }
}

pub const ESTIMATE_CSV_HEADER: &str =
    "n,r,s,q,p_paper,trials,successes,estimate,wilson_lo,wilson_hi,alpha_ref,method,seed";

/// CSV with the documented schema, one row per estimate.
pub fn estimates_to_csv(rows: &[StabilityEstimate]) -> String {
    let mut out = String::from(ESTIMATE_CSV_HEADER);
    out.push('\n');
    for e in rows {
        let r = e.row();
        let seed = r.seed.map(|s| s.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.n,
            r.r,
            r.s,
            r.q,
            r.p_paper,
            r.trials,
            r.successes,
            r.estimate,
            r.wilson_lo,
            r.wilson_hi,
            r.alpha_ref,
            r.method,
            seed
        ));
    }
    out
}

/// JSON mirror of the CSV schema (identical keys).
pub fn estimates_to_json(rows: &[StabilityEstimate]) -> String {
    let rows: Vec<EstimateRow<'_>> = rows.iter().map(|e| e.row()).collect();
    let mut s = serde_json::to_string_pretty(&rows).expect("plain data serializes");
    s.push('\n');
    s
}

/// One row of the independence-number formula table.
#[derive(Debug, Clone, Serialize)]
pub struct AlphaFormulaRow {
    pub n: u32,
    pub r: u32,
    pub s: u32,
    pub alpha: u64,
    /// `C(n-s-1, r-s-1)`, exact only for sufficiently large n; recorded,
    /// never asserted.
    pub formula: u64,
    pub equal: bool,
    pub status: SolveStatus,
}

/// Solves `alpha(G(n,r,s))` for each n in the range and tabulates it against
/// the closed-form value `C(n-s-1, r-s-1)`.
pub fn alpha_formula_check(
    n_range: std::ops::RangeInclusive<u32>,
    r: u32,
    s: u32,
    budget: &Budget,
) -> Result<Vec<AlphaFormulaRow>> {
    let mut rows = Vec::new();
    for n in n_range {
        let params = GraphParams::new(n, r, s)?;
        let full = Family::full_vertex_set(&params);
        let res = max_independent_set(&full, &params, None, budget)?;
        let formula = binom_exact((n - s - 1) as u64, (r - s - 1) as u64)
            .to_u64()
            .ok_or_else(|| Error::InvalidInput("formula value exceeds u64".into()))?;
        rows.push(AlphaFormulaRow {
            n,
            r,
            s,
            alpha: res.alpha,
            formula,
            equal: res.status == SolveStatus::Exact && res.alpha == formula,
            status: res.status,
        });
    }
    Ok(rows)
}

pub const ALPHA_TABLE_CSV_HEADER: &str = "n,r,s,alpha,formula,equal,status";

pub fn alpha_table_to_csv(rows: &[AlphaFormulaRow]) -> String {
    let mut out = String::from(ALPHA_TABLE_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let status = match r.status {
            SolveStatus::Exact => "exact",
            SolveStatus::LowerBoundOnly => "lower-bound-only",
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.n, r.r, r.s, r.alpha, r.formula, r.equal, status
        ));
    }
    out
}

pub fn alpha_table_to_json(rows: &[AlphaFormulaRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("plain data serializes");
    s.push('\n');
    s
}
