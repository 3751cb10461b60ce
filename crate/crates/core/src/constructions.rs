//! Generators for the named extremal families: stars, trivial t-intersecting
//! families, unions of stars over a partitioned ground set, the pair-merging
//! quadruple family, and the Ahlswede–Khachatrian families V1/V2.

use crate::combinatorics::ColexSubsets;
use crate::family::Family;
use crate::vertex::Vertex;
use crate::{Error, Result};

/// The star `S_xy`: all r-subsets of `[n]` containing both `x` and `y`.
/// Size `C(n-2, r-2)`; independent in `G(n,r,1)` since any two members share
/// at least the two centers.
pub fn star(n: u32, r: u32, x: u32, y: u32) -> Result<Family> {
    if x == y {
        return Err(Error::InvalidInput("star centers must differ".into()));
    }
    if x == 0 || y == 0 || x > n || y > n {
        return Err(Error::InvalidInput(format!(
            "star centers {x},{y} outside [1,{n}]"
        )));
    }
    if r < 2 || r > n {
        return Err(Error::InvalidInput(format!(
            "star needs 2 <= r <= n, got r={r} n={n}"
        )));
    }
    let centers = Vertex::from_elements(&[x.min(y), x.max(y)])?;
    let pool: Vec<u32> = (1..=n).filter(|&e| e != x && e != y).collect();
    let members: Vec<Vertex> = ColexSubsets::over_pool(&pool, r - 2)
        .map(|tail| centers.union(&tail))
        .collect();
    Family::new(n, r, members)
}

/// The trivial t-intersecting family: all r-subsets containing `{1, ..., t}`.
/// Size `C(n-t, r-t)`.
pub fn trivial_t_intersecting(n: u32, r: u32, t: u32) -> Result<Family> {
    if t == 0 || t > r || r > n {
        return Err(Error::InvalidInput(format!(
            "trivial family needs 1 <= t <= r <= n, got n={n} r={r} t={t}"
        )));
    }
    let core = Vertex::from_elements(&(1..=t).collect::<Vec<_>>())?;
    let pool: Vec<u32> = (t + 1..=n).collect();
    let members: Vec<Vertex> = ColexSubsets::over_pool(&pool, r - t)
        .map(|tail| core.union(&tail))
        .collect();
    Family::new(n, r, members)
}

/// Divides `[n]` into `k` consecutive blocks of size `n/k` and takes, over
/// each block, the star centered at its two smallest elements. The result is
/// independent in `G(n,r,1)`: cross-block members are disjoint, within-block
/// members share both centers. Size `k * C(n/k - 2, r-2)`.
pub fn union_of_stars(n: u32, r: u32, k: u32) -> Result<Family> {
    if k == 0 || !n.is_multiple_of(k) {
        return Err(Error::InvalidInput(format!("k = {k} must divide n = {n}")));
    }
    let block = n / k;
    if block < r {
        return Err(Error::InvalidInput(format!(
            "block size n/k = {block} must be at least r = {r}"
        )));
    }
    if r < 2 {
        return Err(Error::InvalidInput("union_of_stars needs r >= 2".into()));
    }
    let mut members = Vec::new();
    for b in 0..k {
        let lo = b * block + 1;
        let centers = Vertex::from_elements(&[lo, lo + 1])?;
        let pool: Vec<u32> = (lo + 2..lo + block).collect();
        for tail in ColexSubsets::over_pool(&pool, r - 2) {
            members.push(centers.union(&tail));
        }
    }
    Family::new(n, r, members)
}

/// Splits `[n]` into the pairs `{1,2}, {3,4}, ...` and forms all quadruples
/// that merge two pairs. Size `C(n/2, 2)`; any two members intersect in 0 or
/// 2 elements, so the family is independent in `G(n,4,1)`, and
/// `d(A) = n/2 - 1`.
pub fn pair_merge(n: u32) -> Result<Family> {
    if !n.is_multiple_of(2) || n < 8 {
        return Err(Error::InvalidInput(format!(
            "pair_merge needs even n >= 8, got {n}"
        )));
    }
    let pairs: Vec<Vertex> = (0..n / 2)
        .map(|i| Vertex::from_elements(&[2 * i + 1, 2 * i + 2]).expect("valid pair"))
        .collect();
    let mut members = Vec::new();
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            members.push(pairs[i].union(&pairs[j]));
        }
    }
    Family::new(n, 4, members)
}

/// The Ahlswede–Khachatrian extremal families for non-trivial t-intersecting
/// k-set systems, enumerated exactly.
#[derive(Debug, Clone)]
pub struct AkFamilies {
    pub v1: Family,
    pub v2: Family,
    /// The size bound applies only when `n > (t+1)(k-t+1)`; the families are
    /// generated regardless and this flag records whether it holds.
    pub precondition_ok: bool,
}

/// `V1`: k-subsets with at least `t+1` elements inside `[1, t+2]`.
/// `V2`: k-subsets containing `[1, t]` and meeting `[t+1, k+1]`, together
/// with the sets `[1, k+1] \ {i}` for `i` in `[1, t]`.
pub fn ak_families(n: u32, k: u32, t: u32) -> Result<AkFamilies> {
    if t == 0 || t > k || k > n {
        return Err(Error::InvalidInput(format!(
            "ak_families needs 1 <= t <= k <= n, got n={n} k={k} t={t}"
        )));
    }

    // V1: choose j in {t+1, t+2} elements from [1, t+2], rest outside.
    let mut v1_members = Vec::new();
    let head: Vec<u32> = (1..=(t + 2).min(n)).collect();
    let rest: Vec<u32> = (t + 3..=n).collect();
    for j in t + 1..=t + 2 {
        if j > k || j as usize > head.len() || (k - j) as usize > rest.len() {
            continue;
        }
        for inside in ColexSubsets::over_pool(&head, j) {
            for outside in ColexSubsets::over_pool(&rest, k - j) {
                v1_members.push(inside.union(&outside));
            }
        }
    }
    let v1 = Family::new(n, k, v1_members)?;

    // V2: [1,t] plus a (k-t)-subset of [t+1, n] meeting [t+1, k+1] ...
    let mut v2_members = Vec::new();
    if t < n {
        let core = Vertex::from_elements(&(1..=t).collect::<Vec<_>>())?;
        let window = Vertex::from_elements(&(t + 1..=(k + 1).min(n)).collect::<Vec<_>>())?;
        let pool: Vec<u32> = (t + 1..=n).collect();
        for tail in ColexSubsets::over_pool(&pool, k - t) {
            if tail.intersection_size(&window) > 0 {
                v2_members.push(core.union(&tail));
            }
        }
    }
    // ... plus [1, k+1] minus one core element.
    if k < n {
        for i in 1..=t {
            let elems: Vec<u32> = (1..=k + 1).filter(|&e| e != i).collect();
            v2_members.push(Vertex::from_elements(&elems)?);
        }
    }
    let v2 = Family::new(n, k, v2_members)?;

    let precondition_ok = n as u64 > (t as u64 + 1) * (k as u64 - t as u64 + 1);
    Ok(AkFamilies {
        v1,
        v2,
        precondition_ok,
    })
}
