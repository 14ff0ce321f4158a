use std::cmp::Ordering;

use priced_core::certificate::{
    brute_force_min_certificate, min_rank_certificate_cost, min_sort_certificate_cost, verify_rank, verify_sort,
    CertTarget,
};
use priced_core::json::{instance_from_json, instance_to_json};
use priced_core::{CostModel, Instance, ProbeState};
use proptest::prelude::*;

/// Reachability over the probed edges by plain depth-first search.
fn reach_from_edges(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut up = vec![Vec::new(); n];
    for &(lo, hi) in edges {
        up[lo].push(hi);
    }
    let mut reach = vec![vec![false; n]; n];
    for s in 0..n {
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &y in &up[x] {
                if !reach[s][y] {
                    reach[s][y] = true;
                    stack.push(y);
                }
            }
        }
    }
    reach
}

fn model_strategy() -> impl Strategy<Value = CostModel> {
    prop_oneof![
        Just(CostModel::Uniform),
        (0.05f64..=1.0).prop_map(|p| CostModel::Boolean { p }),
        (0.05f64..=1.0).prop_map(|p| CostModel::UnitInfinite { p }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closure_matches_edges_after_every_probe(
        n in 2usize..=8,
        seed in any::<u64>(),
        model in model_strategy(),
        picks in prop::collection::vec((0usize..8, 0usize..8), 0..40),
    ) {
        let inst = Instance::generate(n, model, seed).unwrap();
        let mut state = ProbeState::new(&inst);
        let mut known = vec![vec![None; n]; n];
        let mut paid = 0.0;
        for (a, b) in picks {
            let (u, v) = (a % n, b % n);
            if u == v {
                continue;
            }
            let fresh = !state.is_probed(u, v);
            match state.probe(u, v) {
                Ok(o) => {
                    prop_assert_eq!(o == Ordering::Less, inst.less(u, v));
                    if fresh {
                        paid += inst.cost(u, v);
                    }
                }
                Err(_) => prop_assert!(inst.cost(u, v).is_infinite()),
            }
            prop_assert_eq!(state.total_cost(), paid);

            let edges: Vec<_> = state.probed_edges().collect();
            let reach = reach_from_edges(n, &edges);
            for x in 0..n {
                for y in 0..n {
                    if x == y {
                        continue;
                    }
                    let expect = if reach[x][y] {
                        Some(Ordering::Less)
                    } else if reach[y][x] {
                        Some(Ordering::Greater)
                    } else {
                        None
                    };
                    let got = state.comparable(x, y);
                    prop_assert_eq!(got, expect);
                    if let Some(o) = got {
                        prop_assert_eq!(o == Ordering::Less, inst.less(x, y));
                    }
                    if let Some(before) = known[x][y] {
                        prop_assert_eq!(got, Some(before));
                    }
                    known[x][y] = got;
                }
            }
        }
    }

    #[test]
    fn batch_probes_match_single_probes(
        n in 2usize..=40,
        seed in any::<u64>(),
        threshold in 0.0f64..1.0,
    ) {
        let inst = Instance::generate(n, CostModel::Uniform, seed).unwrap();
        let pairs: Vec<_> = inst.pairs().filter(|p| p.2 <= threshold).map(|p| (p.0, p.1)).collect();
        let mut batch = ProbeState::new(&inst);
        batch.probe_many(pairs.iter().copied()).unwrap();
        let mut single = ProbeState::new(&inst);
        for &(u, v) in &pairs {
            single.probe(u, v).unwrap();
        }
        for u in 0..n {
            prop_assert_eq!(batch.below_set(u), single.below_set(u));
        }
        prop_assert!((batch.total_cost() - single.total_cost()).abs() < 1e-9);
    }

    #[test]
    fn closed_forms_match_brute_force(n in 1usize..=6, seed in any::<u64>(), model in model_strategy()) {
        let inst = Instance::generate(n, model, seed).unwrap();
        let brute = brute_force_min_certificate(&inst, CertTarget::Sort).unwrap();
        let closed = min_sort_certificate_cost(&inst);
        prop_assert!(brute == closed || (brute - closed).abs() < 1e-9, "{} vs {}", brute, closed);
        for k in 1..=n {
            let brute = brute_force_min_certificate(&inst, CertTarget::Rank(k)).unwrap();
            let closed = min_rank_certificate_cost(&inst, k).unwrap();
            prop_assert!(brute == closed || (brute - closed).abs() < 1e-9, "k={}: {} vs {}", k, brute, closed);
        }
    }

    #[test]
    fn json_round_trip(n in 1usize..=12, seed in any::<u64>(), model in model_strategy()) {
        let inst = Instance::generate(n, model, seed).unwrap();
        let back = instance_from_json(&instance_to_json(&inst)).unwrap();
        prop_assert_eq!(back, inst);
    }

    #[test]
    fn full_reveal_certifies_everything(n in 1usize..=12, seed in any::<u64>()) {
        let inst = Instance::generate(n, CostModel::Uniform, seed).unwrap();
        let mut state = ProbeState::new(&inst);
        state.probe_many(inst.pairs().map(|p| (p.0, p.1))).unwrap();
        let cert = state.snapshot_certificate(priced_core::CertificateKind::Sort);
        let order = inst.sorted_elements();
        prop_assert!(verify_sort(&cert, &order).unwrap());
        for k in 1..=n {
            prop_assert!(verify_rank(&cert, inst.element_of_rank(k), k, n).unwrap());
        }
        if n >= 2 {
            let mut wrong = order.clone();
            wrong.swap(0, 1);
            prop_assert!(!verify_sort(&cert, &wrong).unwrap());
        }
    }
}

#[test]
fn brute_force_refuses_large_instances() {
    let inst = Instance::generate(8, CostModel::Uniform, 0).unwrap();
    assert!(brute_force_min_certificate(&inst, CertTarget::Sort).is_err());
}
