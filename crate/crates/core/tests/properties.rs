//! Randomized property tests tying the optimized paths to the oracles.

use proptest::collection::vec;
use proptest::prelude::*;

use sumset_engine::instance::Multiset;
use sumset_engine::knapsack::{
    knapsack_all_capacities, maxplus_convolve, pmax, KnapsackConfig, KnapsackItem, ParetoProfile,
};
use sumset_engine::oracle::{bellman_dp, dp_knapsack};
use sumset_engine::solver::{all_targets, dnc_sums, SolverConfig};
use sumset_engine::sumset::{bool_convolve, Backend, ConvConfig, SumsetBitmap, ValueWindow};
use sumset_engine::{Instance, WorkCounters};

fn cfg_with(backend: Backend) -> ConvConfig {
    ConvConfig { backend, ..ConvConfig::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(192))]

    #[test]
    fn conv_backends_agree(
        a in vec(0u64..512, 0..40),
        b in vec(0u64..512, 0..40),
        clip_lo in 0u64..256,
        clip_len in 0u64..1024,
    ) {
        let a = SumsetBitmap::from_values(0, 511, &a);
        let b = SumsetBitmap::from_values(0, 511, &b);
        let clip = ValueWindow::new(clip_lo, clip_lo + clip_len);
        let mut ctr = WorkCounters::default();
        let s = bool_convolve(&a, &b, clip, &cfg_with(Backend::ShiftOr), &mut ctr).unwrap();
        let n = bool_convolve(&a, &b, clip, &cfg_with(Backend::Ntt), &mut ctr).unwrap();
        prop_assert_eq!(s.to_bytes(), n.to_bytes());
    }

    #[test]
    fn conv_commutes_and_matches_enumeration(
        a in vec(0u64..128, 0..24),
        b in vec(0u64..128, 0..24),
    ) {
        let clip = ValueWindow::new(0, 256);
        let av = SumsetBitmap::from_values(0, 127, &a);
        let bv = SumsetBitmap::from_values(0, 127, &b);
        let mut ctr = WorkCounters::default();
        let cfg = ConvConfig::default();
        let ab = bool_convolve(&av, &bv, clip, &cfg, &mut ctr).unwrap();
        let ba = bool_convolve(&bv, &av, clip, &cfg, &mut ctr).unwrap();
        prop_assert_eq!(ab.to_bytes(), ba.to_bytes());
        let mut expect: Vec<u64> = a
            .iter()
            .flat_map(|&x| b.iter().map(move |&y| x + y))
            .collect();
        expect.sort_unstable();
        expect.dedup();
        prop_assert_eq!(ab.values(), expect);
    }

    #[test]
    fn all_targets_matches_bellman(
        values in vec(1u64..200, 0..24),
        t in 1u64..400,
    ) {
        let inst = Instance::ingest(&values, t).unwrap();
        let solved = all_targets(&inst, &SolverConfig::default()).unwrap();
        prop_assert_eq!(solved.answer().to_bytes(), bellman_dp(&inst).to_bytes());
    }

    #[test]
    fn dnc_is_sandwiched(
        values in vec(1u64..64, 0..14),
        k in 1usize..6,
    ) {
        let x = Multiset::from_values(&values);
        let mut ctr = WorkCounters::default();
        let ans = dnc_sums(&x, 63, k, &SolverConfig::default(), &mut ctr).unwrap();
        // lower bound: sums of <= k values; upper bound: all subset sums
        let classes = sumset_engine::oracle::exhaustive_sums(&x, u64::MAX).unwrap();
        for &(i, y) in &classes {
            if i <= k {
                prop_assert!(ans.contains(y));
            }
        }
        let all: std::collections::BTreeSet<u64> = classes.iter().map(|&(_, y)| y).collect();
        for y in ans.values() {
            prop_assert!(all.contains(&y));
        }
    }

    #[test]
    fn knapsack_reduction_matches_dp(
        pairs in vec((1u64..40, 1u64..1000), 0..12),
        t in 1u64..120,
    ) {
        let items: Vec<KnapsackItem> =
            pairs.iter().map(|&(w, p)| KnapsackItem::new(w, p)).collect();
        let mut ctr = WorkCounters::default();
        let got = knapsack_all_capacities(&items, t, &KnapsackConfig::default(), &mut ctr).unwrap();
        prop_assert_eq!(got.dense(), dp_knapsack(&items, t).dense());
    }

    #[test]
    fn maxplus_matches_enumeration_and_commutes(
        f in vec(proptest::option::of(0u64..1000), 1..24),
        g in vec(proptest::option::of(0u64..1000), 1..24),
    ) {
        let fp = ParetoProfile::from_entries(0, f.clone());
        let gp = ParetoProfile::from_entries(0, g.clone());
        let clip = ValueWindow::new(0, (f.len() + g.len()) as u64);
        let cfg = KnapsackConfig::default();
        let mut ctr = WorkCounters::default();
        let fg = maxplus_convolve(&fp, &gp, clip, &cfg, &mut ctr).unwrap();
        let gf = maxplus_convolve(&gp, &fp, clip, &cfg, &mut ctr).unwrap();
        prop_assert_eq!(fg.dense(), gf.dense());
        for w in 0..(f.len() + g.len() - 1) as u64 {
            let expect = (0..f.len() as u64)
                .filter(|&i| i <= w && (w - i) < g.len() as u64)
                .filter_map(|i| Some(f[i as usize]? + g[(w - i) as usize]?))
                .max();
            prop_assert_eq!(fg.get(w), expect, "weight {}", w);
        }
    }

    #[test]
    fn pmax_is_idempotent(pairs in vec((0u64..100, 1u64..1000), 0..30)) {
        let once = pmax(&pairs);
        let twice = pmax(&once.iter().collect::<Vec<_>>());
        for w in 0..=100 {
            prop_assert_eq!(once.get(w), twice.get(w));
        }
    }

    #[test]
    fn witnesses_validate(
        values in vec(1u64..100, 1..12),
        t in 1u64..200,
    ) {
        let inst = Instance::ingest(&values, t).unwrap();
        let cfg = SolverConfig { witness_mode: true, ..SolverConfig::default() };
        let solved = all_targets(&inst, &cfg).unwrap();
        let mut ctr = WorkCounters::default();
        for y in solved.answer().values() {
            let w = solved.reconstruct(y, &cfg, &mut ctr).unwrap();
            prop_assert_eq!(w.sum(), y);
            prop_assert!(w.respects(&inst.x));
        }
    }
}
