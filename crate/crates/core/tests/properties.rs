//! Property-based invariants: ranking bijections, adjacency symmetry,
//! percolation determinism, family-file roundtrips, and packing maximality.

use proptest::prelude::*;

use gnrs::combinatorics::{enumerate_r_subsets, rank_subset, unrank_subset};
use gnrs::distance_graph::{adjacent, edge_retained, PercolationSpec};
use gnrs::family_analysis::d_of_family;
use gnrs::mis_solver::{max_disjoint_subfamily, Budget};
use gnrs::{Family, GraphParams, Vertex};

fn params() -> impl Strategy<Value = GraphParams> {
    (2u32..=12)
        .prop_flat_map(|n| (Just(n), 1u32..=n.min(5)))
        .prop_flat_map(|(n, r)| (Just(n), Just(r), 0u32..r))
        .prop_map(|(n, r, s)| GraphParams::new(n, r, s).unwrap())
}

fn params_with_rank() -> impl Strategy<Value = (GraphParams, u128)> {
    params().prop_flat_map(|p| {
        let count = p.vertex_count() as u64;
        (Just(p), 0..count).prop_map(|(p, rk)| (p, rk as u128))
    })
}

fn params_with_family() -> impl Strategy<Value = (GraphParams, Family)> {
    params().prop_flat_map(|p| {
        let count = p.vertex_count() as u64;
        let ranks = proptest::collection::btree_set(0..count, 1..=(count.min(12) as usize));
        (Just(p), ranks).prop_map(|(p, ranks)| {
            let members: Vec<Vertex> = ranks
                .iter()
                .map(|&rk| unrank_subset(rk as u128, &p).unwrap())
                .collect();
            let fam = Family::new(p.n, p.r, members).unwrap();
            (p, fam)
        })
    })
}

proptest! {
    #[test]
    fn rank_unrank_are_mutually_inverse((p, rk) in params_with_rank()) {
        let v = unrank_subset(rk, &p).unwrap();
        prop_assert_eq!(v.cardinality(), p.r);
        prop_assert_eq!(rank_subset(&v, &p).unwrap(), rk);
    }

    #[test]
    fn adjacency_symmetric_irreflexive((p, ra, rb) in params().prop_flat_map(|p| {
        let count = p.vertex_count() as u64;
        (Just(p), 0..count, 0..count)
    })) {
        let u = unrank_subset(ra as u128, &p).unwrap();
        let v = unrank_subset(rb as u128, &p).unwrap();
        prop_assert!(!adjacent(&u, &u, &p).unwrap());
        prop_assert_eq!(adjacent(&u, &v, &p).unwrap(), adjacent(&v, &u, &p).unwrap());
    }

    #[test]
    fn retention_symmetric_and_monotone_in_q(
        (p, ra, rb) in params().prop_flat_map(|p| {
            let count = p.vertex_count() as u64;
            (Just(p), 0..count, 0..count)
        }),
        seed in any::<u64>(),
        q1 in 0.0f64..=1.0,
        q2 in 0.0f64..=1.0,
    ) {
        let u = unrank_subset(ra as u128, &p).unwrap();
        let v = unrank_subset(rb as u128, &p).unwrap();
        prop_assume!(adjacent(&u, &v, &p).unwrap());
        let (lo, hi) = if q1 <= q2 { (q1, q2) } else { (q2, q1) };
        let slo = PercolationSpec::new(lo, seed).unwrap();
        let shi = PercolationSpec::new(hi, seed).unwrap();
        // symmetry under the canonical edge key
        prop_assert_eq!(
            edge_retained(&u, &v, &p, &slo).unwrap(),
            edge_retained(&v, &u, &p, &slo).unwrap()
        );
        // the same uniform deviate thresholds both probabilities
        if edge_retained(&u, &v, &p, &slo).unwrap() {
            prop_assert!(edge_retained(&u, &v, &p, &shi).unwrap());
        }
    }

    #[test]
    fn family_file_roundtrip((_p, fam) in params_with_family()) {
        let text = fam.to_file_string();
        let back = Family::parse_file_str(&text).unwrap();
        prop_assert_eq!(back, fam);
    }

    #[test]
    fn packing_is_disjoint_and_maximal((_p, fam) in params_with_family()) {
        let res = max_disjoint_subfamily(&fam, &Budget::default()).unwrap();
        prop_assert!(res.certified_maximum);
        let ms = res.members.members();
        for (i, u) in ms.iter().enumerate() {
            for w in &ms[i + 1..] {
                prop_assert!(u.is_disjoint(w));
            }
        }
        for cand in fam.iter() {
            if !res.members.contains(cand) {
                prop_assert!(ms.iter().any(|u| !u.is_disjoint(cand)));
            }
        }
    }

    #[test]
    fn d_value_bounded_by_family_size((_p, fam) in params_with_family()) {
        prop_assume!(fam.r() >= 2);
        let (d, witness) = d_of_family(&fam).unwrap();
        prop_assert!(d <= fam.len() as u64);
        if let Some((x, y)) = witness {
            let count = fam.iter().filter(|m| m.contains(x) && m.contains(y)).count();
            prop_assert_eq!(count as u64, d);
        }
    }
}

#[test]
fn star_d_equals_star_size() {
    for n in 4..=12u32 {
        for r in 2..=n.min(5) {
            let s = gnrs::constructions::star(n, r, 1, 3).unwrap();
            let (d, _) = d_of_family(&s).unwrap();
            assert_eq!(d, s.len() as u64);
        }
    }
}

#[test]
fn enumeration_matches_unranking() {
    for n in 1..=10u32 {
        for r in 1..=n {
            let p = GraphParams::new(n, r, 0).unwrap();
            for (i, v) in enumerate_r_subsets(&p).enumerate() {
                assert_eq!(unrank_subset(i as u128, &p).unwrap(), v);
            }
        }
    }
}

#[test]
fn ak_families_t_intersecting_and_nontrivial_exhaustive() {
    // pairwise intersection >= t for every member pair, and no t-set center
    // common to the whole family, over all small parameter choices
    for n in 3..=10u32 {
        for k in 2..=4u32.min(n) {
            for t in 1..k {
                let ak = gnrs::constructions::ak_families(n, k, t).unwrap();
                for fam in [&ak.v1, &ak.v2] {
                    assert!(fam.is_t_intersecting(t), "n={n} k={k} t={t}");
                    if fam.len() >= 2 {
                        assert!(
                            !fam.is_trivial_t_intersecting(t),
                            "n={n} k={k} t={t} family has a common t-center"
                        );
                    }
                }
            }
        }
    }
}
