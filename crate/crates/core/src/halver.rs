//! Canonical-subset generation from the layered dyadic tree, and halver
//! construction by two-coloring the canonical collection.

use crate::counters::WorkCounters;
use crate::discrepancy::{discrepancy_bound, two_color, SetSystem, Side};
use crate::error::{Error, Result};
use crate::instance::Multiset;
use crate::layered::{layered_sums, report_subset, DyadicNode, TreeMode};
use crate::sumset::ConvConfig;

/// Canonical subsets S_I[i,y], each a list of occurrence ids into the
/// ground multiset, keyed by (dyadic interval, cardinality, sum).
#[derive(Debug)]
pub struct CanonicalCollection {
    pub sets: Vec<Vec<u32>>,
    pub b: usize,
    pub u_pad: u64,
    /// occurrence id -> value (ascending by id)
    pub occ_values: Vec<u64>,
}

const OCC_LIMIT: u64 = 1 << 31;

fn occurrence_values(x: &Multiset) -> Result<Vec<u64>> {
    let total = x.total();
    if total > OCC_LIMIT {
        return Err(Error::SizeLimit { size: total, limit: OCC_LIMIT });
    }
    Ok(x.expand())
}

/// Frozen counting bound: |S| <= b^2 * u_pad * log2(4 * u_pad) with C = 1.
pub fn canonical_count_bound(b: usize, u_pad: u64) -> f64 {
    (b as f64) * (b as f64) * (u_pad as f64) * ((4.0 * u_pad as f64).log2())
}

/// One-sided halver error for a (k, b) split over domain [1, u_pad] with m
/// canonical sets: the dyadic cover of any k-subset has at most
/// (k/b + 1) * log2(4u) parts, each off by at most half the discrepancy bound.
pub fn halver_delta(k: usize, b: usize, u_pad: u64, m: usize) -> f64 {
    let cover = (k as f64 / b as f64 + 1.0) * (4.0 * u_pad as f64).log2();
    cover * discrepancy_bound(b, m) / 2.0
}

/// Generate the canonical collection: one reported subset per (I, i, y) with
/// i in [1, b] present in the layered tree over (0, u_pad].
pub fn generate_canonicals(
    x: &Multiset,
    u: u64,
    b: usize,
    cfg: &ConvConfig,
    ctr: &mut WorkCounters,
) -> Result<CanonicalCollection> {
    let occ_values = occurrence_values(x)?;
    let u_pad = u.max(1).next_power_of_two();
    if x.is_empty() {
        return Ok(CanonicalCollection { sets: Vec::new(), b, u_pad, occ_values });
    }
    // occurrence ids are assigned in value order; occurrences of value v are
    // the contiguous id range starting at base[v's entry]
    let mut base = Vec::with_capacity(x.entries().len());
    let mut acc = 0u32;
    for &(_, c) in x.entries() {
        base.push(acc);
        acc += c as u32;
    }

    let tree = layered_sums(x, u, b, TreeMode::RetainTree, cfg, ctr)?;
    let mut sets = Vec::new();
    collect(&tree, x, &base, cfg, ctr, &mut sets)?;
    Ok(CanonicalCollection { sets, b, u_pad, occ_values })
}

fn collect(
    node: &DyadicNode,
    x: &Multiset,
    base: &[u32],
    cfg: &ConvConfig,
    ctr: &mut WorkCounters,
    sets: &mut Vec<Vec<u32>>,
) -> Result<()> {
    for i in 1..=node.layers.k_eff() {
        let layer = node.layers.layer(i).unwrap();
        for y in layer.iter() {
            let wit = report_subset(node, i, y, cfg, ctr)?;
            let mut ids = Vec::with_capacity(i);
            for (v, c) in wit.occurrences {
                let idx = x
                    .entries()
                    .binary_search_by_key(&v, |&(ev, _)| ev)
                    .map_err(|_| Error::Internal(format!("reported value {v} not in ground multiset")))?;
                // deterministic: always use the lowest-numbered occurrences
                for j in 0..c as u32 {
                    ids.push(base[idx] + j);
                }
            }
            sets.push(ids);
        }
    }
    if let Some((l, r)) = node.children() {
        collect(l, x, base, cfg, ctr, sets)?;
        collect(r, x, base, cfg, ctr, sets)?;
    }
    Ok(())
}

/// A (k, delta)-halver: two-partition of X's occurrences plus the delta it
/// guarantees for k-bounded subsets.
#[derive(Debug)]
pub struct Halver {
    pub left: Multiset,
    pub right: Multiset,
    /// Per-occurrence side, ids as in CanonicalCollection.
    pub side: Vec<Side>,
    pub delta: f64,
    pub num_canonical_sets: usize,
    pub u_pad: u64,
}

/// Build a halver of X by two-coloring the canonical collection with size
/// bound b <= k. The returned delta is computed from the actual collection
/// size, so callers can check the k/log k requirement.
pub fn build_halver(
    x: &Multiset,
    u: u64,
    k: usize,
    b: usize,
    cfg: &ConvConfig,
    ctr: &mut WorkCounters,
) -> Result<Halver> {
    debug_assert!(b >= 1 && b <= k.max(1));
    let canon = generate_canonicals(x, u, b, cfg, ctr)?;
    let n = canon.occ_values.len();
    let system = SetSystem::new(n, canon.sets)?;
    let m = system.sets.len();
    let coloring = two_color(&system)?;
    let delta = halver_delta(k, b, canon.u_pad, m);

    let mut left = Vec::new();
    let mut right = Vec::new();
    for (id, &v) in canon.occ_values.iter().enumerate() {
        match coloring.side[id] {
            Side::Left => left.push(v),
            Side::Right => right.push(v),
        }
    }
    Ok(Halver {
        left: Multiset::from_values(&left),
        right: Multiset::from_values(&right),
        side: coloring.side,
        delta,
        num_canonical_sets: m,
        u_pad: canon.u_pad,
    })
}

/// Exhaustive check of the halver property: for every realized
/// (cardinality, sum) class there exists a subset in the class whose split
/// lands within delta of even. Only feasible for tiny inputs.
pub fn halver_property_exhaustive(x: &Multiset, side: &[Side], delta: f64) -> bool {
    use std::collections::HashMap;

    // left/right availability per distinct value, from the occurrence coloring
    let mut avail: Vec<(u64, u64, u64)> = Vec::new(); // (value, left, right)
    let mut id = 0usize;
    for &(v, c) in x.entries() {
        let mut l = 0;
        for _ in 0..c {
            if side[id] == Side::Left {
                l += 1;
            }
            id += 1;
        }
        avail.push((v, l, c - l));
    }

    // For each count-vector selection the achievable left-side sizes form a
    // contiguous range; a class passes if any selection's range touches
    // [card/2 - delta, card/2 + delta].
    let mut best: HashMap<(u64, u64), bool> = HashMap::new();
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        avail: &[(u64, u64, u64)],
        idx: usize,
        card: u64,
        sum: u64,
        l_min: u64,
        l_max: u64,
        delta: f64,
        best: &mut HashMap<(u64, u64), bool>,
    ) {
        if idx == avail.len() {
            let half = card as f64 / 2.0;
            let ok_lo = (half - delta).ceil().max(0.0) as u64;
            let ok_hi = (half + delta).floor() as u64;
            let ok = l_min <= ok_hi && l_max >= ok_lo;
            let e = best.entry((card, sum)).or_insert(false);
            *e = *e || ok;
            return;
        }
        let (v, l, r) = avail[idx];
        for take in 0..=(l + r) {
            recurse(
                avail,
                idx + 1,
                card + take,
                sum + v * take,
                l_min + take.saturating_sub(r),
                l_max + take.min(l),
                delta,
                best,
            );
        }
    }
    recurse(&avail, 0, 0, 0, 0, 0, delta, &mut best);
    best.values().all(|&ok| ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canon_value_sets(x: &Multiset, u: u64, b: usize) -> Vec<Vec<u64>> {
        let mut ctr = WorkCounters::default();
        let c = generate_canonicals(x, u, b, &ConvConfig::default(), &mut ctr).unwrap();
        let mut out: Vec<Vec<u64>> = c
            .sets
            .iter()
            .map(|s| {
                let mut vs: Vec<u64> = s.iter().map(|&id| c.occ_values[id as usize]).collect();
                vs.sort_unstable();
                vs
            })
            .collect();
        out.sort();
        out
    }

    #[test]
    fn canonicals_cover_small_example() {
        let x = Multiset::from_values(&[1, 2]);
        let sets = canon_value_sets(&x, 2, 2);
        for want in [vec![1], vec![2], vec![1, 2]] {
            assert!(sets.contains(&want), "missing canonical {want:?} in {sets:?}");
        }
    }

    #[test]
    fn canonicals_empty_input() {
        let x = Multiset::new();
        assert!(canon_value_sets(&x, 4, 2).is_empty());
    }

    #[test]
    fn canonical_singleton_per_containing_interval() {
        // {4} appears once per dyadic interval containing 4: (3,4], (2,4], (0,4]
        let x = Multiset::from_values(&[4]);
        let sets = canon_value_sets(&x, 4, 1);
        assert_eq!(sets, vec![vec![4], vec![4], vec![4]]);
    }

    #[test]
    fn canonical_count_within_frozen_bound() {
        let x = Multiset::from_values(&[1, 2, 3, 4, 5, 6, 7, 8, 3, 3]);
        let mut ctr = WorkCounters::default();
        let c = generate_canonicals(&x, 8, 3, &ConvConfig::default(), &mut ctr).unwrap();
        assert!((c.sets.len() as f64) <= canonical_count_bound(3, c.u_pad));
    }

    #[test]
    fn disjoint_intervals_give_disjoint_canonicals() {
        let x = Multiset::from_values(&[1, 2, 3, 4]);
        let mut ctr = WorkCounters::default();
        let c = generate_canonicals(&x, 4, 2, &ConvConfig::default(), &mut ctr).unwrap();
        // within any single canonical set, ids are distinct
        for s in &c.sets {
            let mut ids = s.clone();
            ids.sort_unstable();
            ids.dedup();
            assert_eq!(ids.len(), s.len());
        }
    }

    #[test]
    fn halver_distinct_powers_exhaustive() {
        // every subset has a unique sum, so the canonical replacement is the
        // subset itself; the property must hold at the reported delta
        let x = Multiset::from_values(&[1, 2, 4, 8]);
        let mut ctr = WorkCounters::default();
        let h = build_halver(&x, 8, 4, 4, &ConvConfig::default(), &mut ctr).unwrap();
        assert!(halver_property_exhaustive(&x, &h.side, h.delta));
    }

    #[test]
    fn halver_empty_input() {
        let x = Multiset::new();
        let mut ctr = WorkCounters::default();
        let h = build_halver(&x, 4, 2, 2, &ConvConfig::default(), &mut ctr).unwrap();
        assert!(h.left.is_empty() && h.right.is_empty());
    }

    #[test]
    fn halver_interchangeable_duplicates() {
        let x = Multiset::from_values(&[3, 3]);
        let mut ctr = WorkCounters::default();
        let h = build_halver(&x, 4, 2, 2, &ConvConfig::default(), &mut ctr).unwrap();
        assert!(h.delta >= 1.0);
        assert!(halver_property_exhaustive(&x, &h.side, h.delta));
    }

    #[test]
    fn halver_partition_is_total() {
        let x = Multiset::from_values(&[1, 5, 5, 7, 2, 2, 2]);
        let mut ctr = WorkCounters::default();
        let h = build_halver(&x, 8, 4, 2, &ConvConfig::default(), &mut ctr).unwrap();
        assert_eq!(h.left.total() + h.right.total(), x.total());
        assert!(halver_property_exhaustive(&x, &h.side, h.delta));
    }
}
