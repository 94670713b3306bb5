//! Ground-truth baselines, written in the most boring possible style and kept
//! independent of the optimized modules so they can arbitrate.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::instance::{Instance, Multiset};
use crate::knapsack::{KnapsackItem, ParetoProfile};
use crate::sumset::SumsetBitmap;

/// Textbook O(t*n) dynamic programming: exact Σ(X) ∩ [0, t].
pub fn bellman_dp(instance: &Instance) -> SumsetBitmap {
    let t = instance.t as usize;
    let mut reach = vec![false; t + 1];
    reach[0] = true;
    for &(v, c) in instance.x.entries() {
        let v = v as usize;
        for _ in 0..c {
            for w in (v..=t).rev() {
                if reach[w - v] {
                    reach[w] = true;
                }
            }
        }
    }
    let mut out = SumsetBitmap::new_empty(0, instance.t);
    for (w, &r) in reach.iter().enumerate() {
        if r {
            out.insert(w as u64);
        }
    }
    out
}

pub const EXHAUSTIVE_LIMIT: u64 = 24;

/// Exact characteristic map of all (cardinality, sum) classes with sum <= cap,
/// by full enumeration of sub-multisets. Limited to 24 occurrences.
pub fn exhaustive_sums(x: &Multiset, cap: u64) -> Result<BTreeSet<(usize, u64)>> {
    if x.total() > EXHAUSTIVE_LIMIT {
        return Err(Error::SizeLimit { size: x.total(), limit: EXHAUSTIVE_LIMIT });
    }
    let mut out = BTreeSet::new();
    fn recurse(
        entries: &[(u64, u64)],
        idx: usize,
        card: usize,
        sum: u64,
        cap: u64,
        out: &mut BTreeSet<(usize, u64)>,
    ) {
        if idx == entries.len() {
            if sum <= cap {
                out.insert((card, sum));
            }
            return;
        }
        let (v, c) = entries[idx];
        for take in 0..=c {
            let add = v * take;
            if sum + add > cap && take > 0 {
                break;
            }
            recurse(entries, idx + 1, card + take as usize, sum + add, cap, out);
        }
    }
    recurse(x.entries(), 0, 0, 0, cap, &mut out);
    Ok(out)
}

/// Exact-weight all-capacities knapsack: f[i] = max profit over subsets of
/// total weight exactly i, unreachable weights carry the sentinel.
pub fn dp_knapsack(items: &[KnapsackItem], cap: u64) -> ParetoProfile {
    let t = cap as usize;
    let mut f: Vec<Option<u64>> = vec![None; t + 1];
    f[0] = Some(0);
    for item in items {
        let w = item.weight as usize;
        if w > t {
            continue;
        }
        for i in (w..=t).rev() {
            if let Some(p) = f[i - w] {
                let cand = p + item.profit;
                if f[i].is_none_or(|cur| cand > cur) {
                    f[i] = Some(cand);
                }
            }
        }
    }
    ParetoProfile::from_entries(0, f)
}

/// Reconstruct one item subset achieving dp_knapsack's f[w], by a second DP
/// pass with a choice table. Returns item indices, or None if w is unreachable.
pub fn dp_knapsack_reconstruct(items: &[KnapsackItem], cap: u64, w: u64) -> Option<Vec<usize>> {
    let t = cap as usize;
    if w as usize > t {
        return None;
    }
    let mut f: Vec<Option<u64>> = vec![None; t + 1];
    // taken[j][i] = true iff the stage-j optimum at weight i includes item j
    let mut taken = vec![vec![false; t + 1]; items.len()];
    f[0] = Some(0);
    for (j, item) in items.iter().enumerate() {
        let iw = item.weight as usize;
        if iw > t {
            continue;
        }
        for i in (iw..=t).rev() {
            if let Some(p) = f[i - iw] {
                let cand = p + item.profit;
                if f[i].is_none_or(|cur| cand > cur) {
                    f[i] = Some(cand);
                    taken[j][i] = true;
                }
            }
        }
    }
    f[w as usize]?;
    let mut picked = Vec::new();
    let mut i = w as usize;
    for j in (0..items.len()).rev() {
        if taken[j][i] {
            picked.push(j);
            i -= items[j].weight as usize;
        }
    }
    debug_assert_eq!(i, 0);
    picked.reverse();
    Some(picked)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bellman_example() {
        let inst = Instance::ingest(&[3, 5, 6], 10).unwrap();
        assert_eq!(bellman_dp(&inst).values(), vec![0, 3, 5, 6, 8, 9]);
        let empty = Instance::ingest(&[], 4).unwrap();
        assert_eq!(bellman_dp(&empty).values(), vec![0]);
        let one = Instance::ingest(&[1], 5).unwrap();
        assert_eq!(bellman_dp(&one).values(), vec![0, 1]);
    }

    #[test]
    fn exhaustive_examples() {
        let m = Multiset::from_values(&[1, 2]);
        let got = exhaustive_sums(&m, u64::MAX).unwrap();
        let want: BTreeSet<_> = [(0, 0), (1, 1), (1, 2), (2, 3)].into_iter().collect();
        assert_eq!(got, want);

        let empty = exhaustive_sums(&Multiset::new(), 10).unwrap();
        assert_eq!(empty.into_iter().collect::<Vec<_>>(), vec![(0, 0)]);

        let dup = exhaustive_sums(&Multiset::from_values(&[5, 5]), u64::MAX).unwrap();
        let want: BTreeSet<_> = [(0, 0), (1, 5), (2, 10)].into_iter().collect();
        assert_eq!(dup, want);
    }

    #[test]
    fn exhaustive_size_limit() {
        let m = Multiset::from_entries(vec![(1, 25)]);
        assert!(matches!(
            exhaustive_sums(&m, 100),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn bellman_agrees_with_exhaustive_projection() {
        let cases: Vec<(Vec<u64>, u64)> = vec![
            (vec![3, 5, 6], 10),
            (vec![2, 2, 2, 2], 8),
            (vec![1, 7, 9, 11, 13], 30),
            (vec![4, 4, 4, 5, 5], 20),
        ];
        for (values, t) in cases {
            let inst = Instance::ingest(&values, t).unwrap();
            let dp = bellman_dp(&inst);
            let ex = exhaustive_sums(&inst.x, t).unwrap();
            let sums: BTreeSet<u64> = ex.into_iter().map(|(_, y)| y).collect();
            assert_eq!(dp.values(), sums.into_iter().collect::<Vec<_>>());
        }
    }

    #[test]
    fn knapsack_examples() {
        let items = [KnapsackItem::new(2, 3), KnapsackItem::new(3, 4)];
        let f = dp_knapsack(&items, 5);
        assert_eq!(
            f.dense(),
            vec![Some(0), None, Some(3), Some(4), None, Some(7)]
        );
        assert_eq!(dp_knapsack(&[], 1).dense(), vec![Some(0), None]);
        let single = dp_knapsack(&[KnapsackItem::new(1, 10)], 2);
        assert_eq!(single.dense(), vec![Some(0), Some(10), None]);
    }

    #[test]
    fn knapsack_reconstruct_achieves_profile() {
        let items = [
            KnapsackItem::new(2, 3),
            KnapsackItem::new(3, 4),
            KnapsackItem::new(2, 9),
        ];
        let f = dp_knapsack(&items, 7);
        for w in 0..=7u64 {
            match f.get(w) {
                Some(p) => {
                    let picked = dp_knapsack_reconstruct(&items, 7, w).unwrap();
                    let tw: u64 = picked.iter().map(|&j| items[j].weight).sum();
                    let tp: u64 = picked.iter().map(|&j| items[j].profit).sum();
                    assert_eq!((tw, tp), (w, p));
                }
                None => assert!(dp_knapsack_reconstruct(&items, 7, w).is_none()),
            }
        }
    }
}
