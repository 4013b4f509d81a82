mod common;

use common::{rng, sample_instance, sample_model, Family, SMOOTH};
use proptest::prelude::*;
use splitmev_core::optimizer::{Branch, SolveError};
use splitmev_core::PoolState;

fn pool() -> impl Strategy<Value = PoolState> {
    (1e2f64..1e7, 1e2f64..1e7, prop::sample::select(common::FEES.to_vec()))
        .prop_map(|(x, y, f)| PoolState::new(x, y, f).unwrap())
}

proptest! {
    #[test]
    fn payout_is_increasing_and_concave(pool in pool(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let x = pool.reserve_x();
        let (lo, hi) = (a.min(b) * x, a.max(b) * x);
        let (ylo, yhi) = (pool.swap_out(lo).unwrap(), pool.swap_out(hi).unwrap());
        prop_assert!(yhi >= ylo);
        prop_assert!(yhi < pool.reserve_y());
        let mid = pool.swap_out(0.5 * (lo + hi)).unwrap();
        prop_assert!(mid >= 0.5 * (ylo + yhi) - 1e-9 * pool.reserve_y());
        prop_assert!(pool.marginal_out(hi).unwrap() <= pool.marginal_out(lo).unwrap() * (1.0 + 1e-12));
        prop_assert!(pool.payout_curvature(lo).unwrap() <= 0.0);
    }

    #[test]
    fn marginal_out_matches_finite_difference(pool in pool(), a in 1e-4f64..1.0) {
        let q = a * pool.reserve_x();
        let h = 1e-6 * q;
        let fd = (pool.swap_out(q + h).unwrap() - pool.swap_out(q - h).unwrap()) / (2.0 * h);
        let exact = pool.marginal_out(q).unwrap();
        prop_assert!((fd - exact).abs() <= 1e-5 * exact.abs().max(1e-12), "{fd} vs {exact}");
    }

    #[test]
    fn swaps_never_shrink_the_invariant(pool in pool(), a in 0.0f64..2.0) {
        let q = a * pool.reserve_x();
        let next = pool.apply_swap(q).unwrap();
        let k0 = pool.reserve_x() * pool.reserve_y();
        let k1 = next.reserve_x() * next.reserve_y();
        prop_assert!(k1 >= k0 * (1.0 - 1e-12));
        prop_assert!((pool.reserve_y() - next.reserve_y() - pool.swap_out(q).unwrap()).abs()
            <= 1e-9 * pool.reserve_y());
    }

    #[test]
    fn failure_models_are_probabilities(seed in any::<u64>(), t in 0.0f64..1.0) {
        let mut r = rng(seed);
        for family in [Family::Linear, Family::Power, Family::Quadratic, Family::Table] {
            let m = sample_model(&mut r, family, 1000.0);
            let (a, b) = (m.prob(t * 1000.0).unwrap(), m.prob((t * 1000.0 + 1.0).min(1000.0)).unwrap());
            prop_assert!((0.0..=1.0).contains(&a));
            prop_assert!(b <= a + 1e-12);
        }
    }

    #[test]
    fn plan_is_no_worse_than_its_neighbours(seed in any::<u64>(), pick in 0usize..3) {
        let prob = sample_instance(&mut rng(seed), SMOOTH[pick]);
        match prob.plan(1e-10) {
            Ok(plan) => {
                let n = plan.num_chunks;
                let best = prob.total_profit(n).unwrap();
                prop_assert!((best - plan.expected_total_profit).abs() <= 1e-9 * best.abs().max(1.0));
                prop_assert!(best >= prob.total_profit(n + 1).unwrap() - 1e-9 * best.abs().max(1.0));
                if n > 1 {
                    prop_assert!(best >= prob.total_profit(n - 1).unwrap() - 1e-9 * best.abs().max(1.0));
                }
                let theta = plan.threshold_value;
                let c_g = prob.params.gas_overhead;
                prop_assert_eq!(plan.branch == Branch::SingleSwap, c_g >= theta);
            }
            Err(SolveError::NoRoot { .. }) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}
