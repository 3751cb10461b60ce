//! Structural analysis of independent families in `G(n,r,1)`: the star
//! measure `d(A)`, decomposition into a maximum disjoint subfamily `A_0` and
//! levels `A_i`, joint-element classes, connected elements, significant
//! pairs, gamma-dense constructions, and star-density bound reports.

use num_bigint::BigUint;
use serde::Serialize;
use serde_json::json;

use crate::combinatorics::binom_exact;
use crate::combinatorics::binom_general;
use crate::distance_graph::adjacent;
use crate::family::Family;
use crate::mis_solver::{find_dependent_pair, max_disjoint_subfamily, Budget};
use crate::params::GraphParams;
use crate::vertex::Vertex;
use crate::{Error, Result};

/// Connection threshold `omega(r, n)`: 1 for `r = 4`, `r^5 * C(n, r-5)` for
/// `r >= 5`. Defined only for `r >= 4`.
pub fn omega(r: u32, n: u32) -> Result<BigUint> {
    if r < 4 {
        return Err(Error::InvalidInput(format!(
            "omega is defined only for r >= 4, got {r}"
        )));
    }
    if r == 4 {
        return Ok(BigUint::from(1u32));
    }
    Ok(BigUint::from(r).pow(5) * binom_exact(n as u64, (r - 5) as u64))
}

/// Star measure `d(A)`: the largest number of members containing a common
/// element pair, with the colex-least witnessing pair. Empty families give
/// `(0, None)`.
pub fn d_of_family(family: &Family) -> Result<(u64, Option<(u32, u32)>)> {
    if family.r() < 2 {
        return Err(Error::InvalidInput("d(A) needs r >= 2".into()));
    }
    let n = family.n() as usize;
    let mut counts = vec![0u64; n * n];
    for v in family.iter() {
        let elems = v.elements();
        for (i, &x) in elems.iter().enumerate() {
            for &y in &elems[i + 1..] {
                counts[(x as usize - 1) * n + (y as usize - 1)] += 1;
            }
        }
    }
    let mut best = 0u64;
    let mut witness = None;
    // colex order on pairs: increasing larger element, then smaller
    for y in 2..=n {
        for x in 1..y {
            let c = counts[(x - 1) * n + (y - 1)];
            if c > best {
                best = c;
                witness = Some((x as u32, y as u32));
            }
        }
    }
    Ok((best, witness))
}

/// The full structural decomposition of an independent family in `G(n,r,1)`.
#[derive(Debug, Clone)]
pub struct StructuralReport {
    /// Maximum pairwise-disjoint subfamily (colex-least witness).
    pub a0: Family,
    /// False when the packing budget ran out and a greedy maximal `A_0` was
    /// used instead; maximality-dependent checks are then skipped.
    pub a0_certified: bool,
    /// `levels[i]` is `A_{i+1}`: members intersecting exactly `i+1` members
    /// of `A_0`. The list runs up to the largest non-empty level `q`.
    pub levels: Vec<Family>,
    /// Union of the `A_0` members, as 1-based elements.
    pub i0: Vec<u32>,
    /// Equivalence classes of jointness (size >= 2) among elements of
    /// `[n] \ I_0` covered by `A_1`; their union is the set `P`.
    pub joint_classes: Vec<Vec<u32>>,
    /// Per-`A_0`-member sets `J_i` of connected elements.
    pub connected: Vec<Vec<u32>>,
    /// Elements of `[n] \ (I_0 u P)` connected to no `A_0` member.
    pub unassigned: Vec<u32>,
    /// Elements of `[n] \ I_0` appearing in no `A_1` member: vacuously joint
    /// to everything, kept out of `P` and flagged.
    pub unconstrained: Vec<u32>,
    /// Members of `A_1` containing some element not connected to the `A_0`
    /// member they intersect (empty for `r = 4`).
    pub t_set: Family,
    /// Significant pairs inside each `A_0` member, from the joint-class
    /// (`A_1`) definition and from the `A_2` definition; computed for
    /// `r = 4`.
    pub significant_joint: Vec<Vec<(u32, u32)>>,
    pub significant_a2: Vec<Vec<(u32, u32)>>,
    pub d_value: u64,
    pub d_witness: Option<(u32, u32)>,
    pub flags: Vec<String>,
}

impl StructuralReport {
    pub fn q(&self) -> usize {
        self.levels.len()
    }

    /// Serializes to the documented JSON shape.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.a0.n(),
            "r": self.a0.r(),
            "a0": self.a0.element_lists(),
            "a0_certified": self.a0_certified,
            "levels": self.levels.iter().map(|f| f.element_lists()).collect::<Vec<_>>(),
            "i0": self.i0,
            "joint_classes": self.joint_classes,
            "connected": self.connected,
            "unassigned": self.unassigned,
            "unconstrained": self.unconstrained,
            "t_set": self.t_set.element_lists(),
            "significant_pairs": {
                "joint": self.significant_joint.iter()
                    .map(|ps| ps.iter().map(|&(x, y)| vec![x, y]).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                "a2": self.significant_a2.iter()
                    .map(|ps| ps.iter().map(|&(x, y)| vec![x, y]).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            },
            "d": {
                "value": self.d_value,
                "witness": self.d_witness.map(|(x, y)| vec![x, y]),
            },
            "flags": self.flags,
        })
    }
}

/// Decomposes an independent family in `G(n,r,1)` per the structural
/// machinery: `A_0` via maximum set packing, levels `A_i`, joint classes,
/// connected elements against the `omega(r,n)` threshold, the set `T`, and
/// significant pairs. Rejects non-independent input (with a witnessing edge)
/// and any `s != 1`.
pub fn decompose(
    family: &Family,
    params: &GraphParams,
    budget: &Budget,
) -> Result<StructuralReport> {
    family.check_params(params)?;
    if params.s != 1 {
        return Err(Error::InvalidInput(format!(
            "decompose requires s = 1 (joint/connected machinery), got s = {}",
            params.s
        )));
    }
    if let Some((u, v)) = find_dependent_pair(family, params, None)? {
        return Err(Error::NotIndependent { u, v });
    }

    let mut flags: Vec<String> = Vec::new();
    let n = params.n;
    let r = params.r;

    let packing = max_disjoint_subfamily(family, budget)?;
    let a0 = packing.members;
    let a0_certified = packing.certified_maximum;
    if !a0_certified {
        flags.push("a0-not-certified-maximum".into());
        flags.push("maximality-dependent-checks-skipped".into());
    }
    let k = a0.len();
    let i0_mask = a0.support_mask();
    let i0: Vec<u32> = Vertex::from_mask(i0_mask).elements();

    // levels: A_i = members intersecting exactly i of A_0
    let mut level_members: Vec<Vec<Vertex>> = Vec::new();
    for v in family.iter() {
        if a0.contains(v) {
            continue;
        }
        let i = a0.iter().filter(|u| v.intersection_size(u) > 0).count();
        if i == 0 {
            flags.push(format!("violation: member {v} intersects no a0 member"));
            continue;
        }
        if i > level_members.len() {
            level_members.resize(i, Vec::new());
        }
        level_members[i - 1].push(*v);
    }
    let levels: Vec<Family> = level_members
        .into_iter()
        .map(|ms| Family::new(n, r, ms).expect("members from family"))
        .collect();
    let a1: &[Vertex] = levels.first().map(|f| f.members()).unwrap_or(&[]);

    // joint relation on [n] \ I_0, from A_1 incidence signatures: x and y are
    // joint iff every A_1 member contains both or neither.
    let outside: Vec<u32> = (1..=n)
        .filter(|&e| i0_mask & (1u128 << (e - 1)) == 0)
        .collect();
    let mut sig_groups: std::collections::BTreeMap<Vec<u32>, Vec<u32>> = Default::default();
    let mut unconstrained: Vec<u32> = Vec::new();
    for &x in &outside {
        let sig: Vec<u32> = a1
            .iter()
            .enumerate()
            .filter(|(_, v)| v.contains(x))
            .map(|(i, _)| i as u32)
            .collect();
        if sig.is_empty() {
            unconstrained.push(x);
        } else {
            sig_groups.entry(sig).or_default().push(x);
        }
    }
    if !unconstrained.is_empty() {
        flags.push("unconstrained-elements-present".into());
    }
    let mut joint_classes: Vec<Vec<u32>> = sig_groups
        .into_values()
        .filter(|class| class.len() >= 2)
        .collect();
    joint_classes.sort_by_key(|c| c[0]);
    let mut p_mask = 0u128;
    for class in &joint_classes {
        for &x in class {
            p_mask |= 1u128 << (x - 1);
        }
    }

    // connected elements: x in [n] \ (I_0 u P) is connected to a0[i] when at
    // least omega(r,n) members of A_1 contain x and intersect a0[i]
    let free_elements: Vec<u32> = outside
        .iter()
        .copied()
        .filter(|&x| p_mask & (1u128 << (x - 1)) == 0)
        .collect();
    let mut connected: Vec<Vec<u32>> = vec![Vec::new(); k];
    let mut unassigned: Vec<u32> = Vec::new();
    let connection_count = |x: u32, i: usize| -> u64 {
        a1.iter()
            .filter(|v| v.contains(x) && v.intersection_size(&a0.members()[i]) > 0)
            .count() as u64
    };
    if r >= 4 {
        let omega_rn = omega(r, n)?;
        for &x in &free_elements {
            let mut hits: Vec<usize> = Vec::new();
            for i in 0..k {
                if BigUint::from(connection_count(x, i)) >= omega_rn {
                    hits.push(i);
                }
            }
            match hits.len() {
                0 => unassigned.push(x),
                1 => connected[hits[0]].push(x),
                _ => {
                    if a0_certified {
                        flags.push(format!(
                            "violation: element {x} connected to {} a0 members",
                            hits.len()
                        ));
                    }
                    connected[hits[0]].push(x);
                }
            }
        }
    } else {
        flags.push("connectivity-machinery-skipped-for-r<4".into());
        unassigned.extend(free_elements.iter().copied());
    }

    // T: members of A_1 containing an element (outside I_0 u P) that is not
    // connected to the A_0 member they intersect. Empty for r = 4 since
    // omega = 1.
    let mut t_members: Vec<Vertex> = Vec::new();
    if r >= 4 {
        let omega_rn = omega(r, n)?;
        for v in a1 {
            let i = (0..k)
                .find(|&i| v.intersection_size(&a0.members()[i]) > 0)
                .expect("A_1 member intersects one a0 member");
            let has_unconnected = v
                .elements()
                .into_iter()
                .filter(|&x| i0_mask & (1u128 << (x - 1)) == 0 && p_mask & (1u128 << (x - 1)) == 0)
                .any(|x| BigUint::from(connection_count(x, i)) < omega_rn);
            if has_unconnected {
                t_members.push(*v);
            }
        }
    }
    let t_set = Family::new(n, r, t_members)?;

    // significant pairs (r = 4): inside each a0 member, pairs extendable in
    // two essentially different ways
    let mut significant_joint: Vec<Vec<(u32, u32)>> = vec![Vec::new(); k];
    let mut significant_a2: Vec<Vec<(u32, u32)>> = vec![Vec::new(); k];
    if r == 4 {
        let a1_family = levels.first();
        let a2: &[Vertex] = levels.get(1).map(|f| f.members()).unwrap_or(&[]);
        for (i, vi) in a0.iter().enumerate() {
            let elems = vi.elements();
            for (ei, &x) in elems.iter().enumerate() {
                for &y in &elems[ei + 1..] {
                    let pair_mask = (1u128 << (x - 1)) | (1u128 << (y - 1));
                    // joint-class version: {x,y} u p_j in A_1 for two classes
                    if let Some(a1f) = a1_family {
                        let mut hits = 0;
                        for class in &joint_classes {
                            if class.len() != 2 {
                                continue;
                            }
                            let cm = (1u128 << (class[0] - 1)) | (1u128 << (class[1] - 1));
                            if a1f.contains(&Vertex::from_mask(pair_mask | cm)) {
                                hits += 1;
                            }
                        }
                        if hits >= 2 {
                            significant_joint[i].push((x, y));
                        }
                    }
                    // A_2 version: members through {x,y} reaching two
                    // different other a0 members
                    let mut reached: Vec<usize> = Vec::new();
                    for u in a2 {
                        if u.mask() & pair_mask != pair_mask {
                            continue;
                        }
                        for (j, vj) in a0.iter().enumerate() {
                            if j != i && u.intersection_size(vj) > 0 && !reached.contains(&j) {
                                reached.push(j);
                            }
                        }
                    }
                    if reached.len() >= 2 {
                        significant_a2[i].push((x, y));
                    }
                }
            }
        }
        for (i, pairs) in significant_joint
            .iter()
            .chain(significant_a2.iter())
            .enumerate()
        {
            for (a, &(x1, y1)) in pairs.iter().enumerate() {
                for &(x2, y2) in &pairs[a + 1..] {
                    let shared = [x1, y1].iter().filter(|e| **e == x2 || **e == y2).count();
                    if shared == 1 {
                        flags.push(format!(
                            "violation: significant pairs ({x1},{y1}) and ({x2},{y2}) overlap in member {}",
                            i % k.max(1)
                        ));
                    }
                }
            }
        }
    }

    let (d_value, d_witness) = d_of_family(family)?;

    // sanity: q <= min(k, r/2)
    if levels.len() > k.min((r / 2) as usize) && a0_certified {
        flags.push(format!(
            "violation: q = {} exceeds min(k, r/2) = {}",
            levels.len(),
            k.min((r / 2) as usize)
        ));
    }

    Ok(StructuralReport {
        a0,
        a0_certified,
        levels,
        i0,
        joint_classes,
        connected,
        unassigned,
        unconstrained,
        t_set,
        significant_joint,
        significant_a2,
        d_value,
        d_witness,
        flags,
    })
}

/// A candidate gamma-dense construction: two subfamilies over the same
/// vertex universe (they may intersect or coincide).
#[derive(Debug, Clone, Copy)]
pub struct DenseConstructionQuery<'a> {
    pub a1: &'a Family,
    pub a2: &'a Family,
    pub gamma: f64,
    pub params: GraphParams,
}

/// Verdict and diagnostics for [`is_dense_construction`].
#[derive(Debug, Clone, Serialize)]
pub struct DenseDiagnostics {
    pub dense: bool,
    /// Size threshold `m = floor(6 r log2(n) / gamma)`.
    pub m: u64,
    /// Required adjacency count `gamma * |A_1|`.
    pub required: f64,
    /// Smallest adjacency count from an `A_2` member into `A_1`.
    pub min_adjacency: Option<u64>,
    /// First `A_2` member below the requirement, if any.
    pub failing_member: Option<Vertex>,
    pub reason: Option<String>,
}

/// Size threshold for gamma-dense constructions.
pub fn dense_size_threshold(r: u32, n: u32, gamma: f64) -> u64 {
    (6.0 * r as f64 * (n as f64).log2() / gamma).floor() as u64
}

/// True iff `|A_1| >= m`, `|A_2| >= m`, and every member of `A_2` is adjacent
/// in un-percolated `G(n,r,s)` to at least `gamma * |A_1|` members of `A_1`.
pub fn is_dense_construction(query: &DenseConstructionQuery) -> Result<DenseDiagnostics> {
    if !(query.gamma > 0.0 && query.gamma < 1.0) {
        return Err(Error::InvalidInput(format!(
            "gamma must be in (0,1), got {}",
            query.gamma
        )));
    }
    query.a1.check_params(&query.params)?;
    query.a2.check_params(&query.params)?;
    let m = dense_size_threshold(query.params.r, query.params.n, query.gamma);
    let required = query.gamma * query.a1.len() as f64;
    let mut diag = DenseDiagnostics {
        dense: false,
        m,
        required,
        min_adjacency: None,
        failing_member: None,
        reason: None,
    };
    if (query.a1.len() as u64) < m {
        diag.reason = Some(format!("|A_1| = {} below m = {m}", query.a1.len()));
        return Ok(diag);
    }
    if (query.a2.len() as u64) < m {
        diag.reason = Some(format!("|A_2| = {} below m = {m}", query.a2.len()));
        return Ok(diag);
    }
    let mut min_adj: Option<u64> = None;
    for u in query.a2.iter() {
        let count = query
            .a1
            .iter()
            .filter(|w| adjacent(u, w, &query.params).unwrap_or(false))
            .count() as u64;
        if min_adj.is_none_or(|m| count < m) {
            min_adj = Some(count);
        }
        if (count as f64) < required {
            diag.min_adjacency = min_adj;
            diag.failing_member = Some(*u);
            diag.reason = Some(format!(
                "member {u} has {count} neighbors in A_1, needs {required}"
            ));
            return Ok(diag);
        }
    }
    diag.min_adjacency = min_adj;
    diag.dense = true;
    Ok(diag)
}

/// Heuristic search for a gamma-dense core: iteratively peels members with
/// fewer than `gamma * |current|` neighbors inside the current set. A
/// returned pair always satisfies [`is_dense_construction`]; `None` is not a
/// certificate that no dense construction exists.
pub fn find_dense_core(
    family: &Family,
    gamma: f64,
    params: &GraphParams,
) -> Result<Option<(Family, Family)>> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidInput(format!(
            "gamma must be in (0,1), got {gamma}"
        )));
    }
    family.check_params(params)?;
    let mut current: Vec<Vertex> = family.members().to_vec();
    loop {
        if current.is_empty() {
            return Ok(None);
        }
        let threshold = gamma * current.len() as f64;
        let keep: Vec<Vertex> = current
            .iter()
            .filter(|u| {
                let count = current
                    .iter()
                    .filter(|w| adjacent(u, w, params).unwrap_or(false))
                    .count();
                count as f64 >= threshold
            })
            .copied()
            .collect();
        if keep.len() == current.len() {
            break;
        }
        current = keep;
    }
    let m = dense_size_threshold(params.r, params.n, gamma);
    if (current.len() as u64) < m {
        return Ok(None);
    }
    let core = Family::new(family.n(), family.r(), current)?;
    let query = DenseConstructionQuery {
        a1: &core,
        a2: &core,
        gamma,
        params: *params,
    };
    if is_dense_construction(&query)?.dense {
        Ok(Some((core.clone(), core)))
    } else {
        Ok(None)
    }
}

/// One inversion route of a bound report: the solved star-density parameter
/// `t`, the bound value, and the size ratio `|A| / bound`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RouteBound {
    pub t: f64,
    pub bound: f64,
    pub ratio: f64,
    pub clamped: bool,
}

/// Star-density bound report for an independent family in `G(n,r,1)`,
/// `r >= 4`. The unquantified asymptotic slack of the underlying bounds is
/// reported as a note, never added numerically.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub n: u32,
    pub r: u32,
    pub family_size: u64,
    pub d_value: u64,
    pub d_witness: Option<(u32, u32)>,
    /// Inversion of `d = <tn-2 choose r-2>` with bound `d / t` (the exact
    /// tightness route of the union-of-stars construction).
    pub star_bound: Option<RouteBound>,
    /// `r = 4` refinement: inversion of `d = (tn)^2 / 2` with bound
    /// `max(n^2/8, t n^2/2)`.
    pub quad_bound: Option<RouteBound>,
    /// The route the bound statement prescribes for this `r`: star for
    /// `r >= 5`, quad for `r = 4`.
    pub main_bound: Option<f64>,
    pub main_ratio: Option<f64>,
    pub slack_note: String,
    pub flags: Vec<String>,
}

const BISECTION_TOL: f64 = 1e-12;

fn invert_star_density(d: u64, n: u32, r: u32) -> Result<RouteBound> {
    let b = r - 2;
    let nf = n as f64;
    let f = |t: f64| binom_general(t * nf - 2.0, b);
    let mut lo = (r as f64 - 1.0) / nf;
    let mut hi = 1.0f64;
    let df = d as f64;
    let fmax = f(1.0)?;
    if fmax <= df {
        // d at (or above) the full-star count: t = 1
        return Ok(RouteBound {
            t: 1.0,
            bound: fmax,
            ratio: 0.0,
            clamped: fmax < df,
        });
    }
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid)? < df {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    let bound = df / t;
    Ok(RouteBound {
        t,
        bound,
        ratio: 0.0,
        clamped: !(0.0..=1.0).contains(&t),
    })
}

/// Computes `d(A)`, solves for the density parameter `t`, and reports the
/// bound terms and size ratios. Requires an independent family and `r >= 4`.
pub fn bound_report(family: &Family, params: &GraphParams) -> Result<BoundReport> {
    family.check_params(params)?;
    if params.r < 4 {
        return Err(Error::InvalidInput(format!(
            "bound_report requires r >= 4, got {}",
            params.r
        )));
    }
    if params.s != 1 {
        return Err(Error::InvalidInput(
            "bound_report applies to G(n,r,1)".into(),
        ));
    }
    if let Some((u, v)) = find_dependent_pair(family, params, None)? {
        return Err(Error::NotIndependent { u, v });
    }
    let (d_value, d_witness) = d_of_family(family)?;
    let size = family.len() as u64;
    let n = params.n;
    let r = params.r;
    let mut flags = Vec::new();

    let mut report = BoundReport {
        n,
        r,
        family_size: size,
        d_value,
        d_witness,
        star_bound: None,
        quad_bound: None,
        main_bound: None,
        main_ratio: None,
        slack_note: "asymptotic o(.) slack of the bounds is unquantified and not added".into(),
        flags: Vec::new(),
    };

    if d_value == 0 {
        flags.push("degenerate: d(A) = 0, no density parameter".into());
        report.flags = flags;
        return Ok(report);
    }

    let mut star = invert_star_density(d_value, n, r)?;
    star.ratio = size as f64 / star.bound;
    if star.clamped {
        flags.push("star-route t clamped to (0,1]".into());
    }
    report.star_bound = Some(star);

    if r == 4 {
        let nf = n as f64;
        let t = (2.0 * d_value as f64).sqrt() / nf;
        let clamped = !(0.0..=1.0).contains(&t);
        let t_used = t.clamp(f64::MIN_POSITIVE, 1.0);
        if clamped {
            flags.push("quad-route t clamped to (0,1]".into());
        }
        let bound = (nf * nf / 8.0).max(t_used * nf * nf / 2.0);
        let quad = RouteBound {
            t: t_used,
            bound,
            ratio: size as f64 / bound,
            clamped,
        };
        report.quad_bound = Some(quad);
        report.main_bound = Some(quad.bound);
        report.main_ratio = Some(quad.ratio);
    } else {
        report.main_bound = Some(star.bound);
        report.main_ratio = Some(star.ratio);
    }
    report.flags = flags;
    Ok(report)
}
