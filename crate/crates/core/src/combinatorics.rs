//! Exact and generalized binomial coefficients, and colexicographic
//! ranking/unranking/enumeration of r-subsets of `[n]`.
//!
//! Colex order compares subsets by their largest differing element; on bit
//! masks it coincides with integer order, which keeps ranking, enumeration,
//! and family canonicalization consistent with each other.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::params::{GraphParams, MAX_GROUND_SET};
use crate::vertex::Vertex;
use crate::{Error, Result};

/// Largest lower index accepted by [`binom_general`]; r stays small
/// throughout this crate's operating range.
pub const GENERAL_BINOM_MAX_B: u32 = 40;

const TABLE_N: usize = MAX_GROUND_SET as usize + 1;

fn pascal_table() -> &'static Vec<Vec<u128>> {
    static TABLE: OnceLock<Vec<Vec<u128>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![vec![0u128; TABLE_N]; TABLE_N];
        for a in 0..TABLE_N {
            t[a][0] = 1;
            for b in 1..=a {
                t[a][b] = t[a - 1][b - 1] + t[a - 1][b];
            }
        }
        t
    })
}

/// `C(n, k)` as u128 for `n <= 128`; every value in that range fits.
pub(crate) fn binom_u128(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    pascal_table()[n as usize][k as usize]
}

/// Exact binomial coefficient with arbitrary precision. Out-of-range `b`
/// yields 0 and `binom_exact(a, 0) = 1`.
pub fn binom_exact(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 0..b {
        // C(a, i+1) = C(a, i) * (a - i) / (i + 1); the division is exact.
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// Generalized binomial `a(a-1)...(a-b+1) / b!` for real upper argument,
/// evaluated as a sequential product (no gamma-function approximation).
/// Agrees exactly with [`binom_exact`] for non-negative integer `a` whose
/// value fits the f64 mantissa.
pub fn binom_general(a: f64, b: u32) -> Result<f64> {
    if b > GENERAL_BINOM_MAX_B {
        return Err(Error::InvalidInput(format!(
            "binom_general lower index {b} above operating range {GENERAL_BINOM_MAX_B}"
        )));
    }
    let mut acc = 1.0f64;
    for i in 0..b {
        acc = acc * (a - i as f64) / (i as f64 + 1.0);
    }
    Ok(acc)
}

/// Colex rank of an r-subset among all r-subsets: `sum_i C(c_i, i+1)` over
/// the 0-based elements `c_0 < c_1 < ...`. Bijective with [`unrank_subset`].
pub fn rank_subset(v: &Vertex, params: &GraphParams) -> Result<u128> {
    v.validate(params)?;
    Ok(rank_of_mask(v.mask()))
}

pub(crate) fn rank_of_mask(mask: u128) -> u128 {
    let mut rank = 0u128;
    let mut m = mask;
    let mut i = 0u32;
    while m != 0 {
        let c = m.trailing_zeros();
        rank += binom_u128(c, i + 1);
        i += 1;
        m &= m - 1;
    }
    rank
}

/// Inverse of [`rank_subset`]: the r-subset of `[n]` with the given colex rank.
pub fn unrank_subset(rank: u128, params: &GraphParams) -> Result<Vertex> {
    let count = params.vertex_count();
    if rank >= count {
        return Err(Error::RankOutOfRange {
            rank,
            n: params.n,
            r: params.r,
            count,
        });
    }
    let mut mask = 0u128;
    let mut rest = rank;
    let mut hi = params.n;
    for pos in (1..=params.r).rev() {
        // largest c with C(c, pos) <= rest
        let mut c = pos - 1;
        for cand in (pos - 1..hi).rev() {
            if binom_u128(cand, pos) <= rest {
                c = cand;
                break;
            }
        }
        rest -= binom_u128(c, pos);
        mask |= 1u128 << c;
        hi = c;
    }
    Ok(Vertex::from_mask(mask))
}

/// Iterator over all r-subsets of `[n]` in colex order.
pub fn enumerate_r_subsets(params: &GraphParams) -> ColexSubsets {
    ColexSubsets::new(params.n, params.r)
}

/// Colex enumeration for a bare `(n, k)` pair, covering `k = 0` (one empty
/// subset) and other sizes graph parameters cannot express.
pub fn enumerate_subsets(n: u32, k: u32) -> Result<ColexSubsets> {
    if n == 0 || n > MAX_GROUND_SET {
        return Err(Error::InvalidInput(format!(
            "ground set size must be in 1..={MAX_GROUND_SET}, got {n}"
        )));
    }
    Ok(ColexSubsets::new(n, k))
}

/// Colex-ordered subset stream, also usable over a sub-ground-set (all
/// k-subsets drawn from an arbitrary element pool).
pub struct ColexSubsets {
    next: Option<u128>,
    last: u128,
    pool: Option<Vec<u32>>,
}

impl ColexSubsets {
    pub(crate) fn new(n: u32, r: u32) -> Self {
        debug_assert!(n <= MAX_GROUND_SET);
        if r > n {
            return ColexSubsets {
                next: None,
                last: 0,
                pool: None,
            };
        }
        let first = if r == 0 { 0 } else { (1u128 << r) - 1 };
        let last = if r == 0 {
            0
        } else {
            ((1u128 << r) - 1) << (n - r)
        };
        ColexSubsets {
            next: Some(first),
            last,
            pool: None,
        }
    }

    /// Enumerates k-subsets drawn from `pool` (ascending 1-based elements).
    pub(crate) fn over_pool(pool: &[u32], k: u32) -> Self {
        let mut it = Self::new(pool.len() as u32, k);
        it.pool = Some(pool.to_vec());
        it
    }

    fn expand(&self, mask: u128) -> u128 {
        match &self.pool {
            None => mask,
            Some(pool) => {
                let mut out = 0u128;
                let mut m = mask;
                while m != 0 {
                    let i = m.trailing_zeros();
                    out |= 1u128 << (pool[i as usize] - 1);
                    m &= m - 1;
                }
                out
            }
        }
    }
}

impl Iterator for ColexSubsets {
    type Item = Vertex;

    fn next(&mut self) -> Option<Vertex> {
        let cur = self.next?;
        self.next = if cur == self.last {
            None
        } else {
            // Gosper's hack: smallest larger integer with equal popcount.
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            Some((((r ^ cur) >> 2) / c) | r)
        };
        Some(Vertex::from_mask(self.expand(cur)))
    }
}
