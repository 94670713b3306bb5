//! All-capacities 0-1 knapsack by the same bucketed/layered pipeline as the
//! Boolean engine, with bitmaps replaced by per-weight profit profiles and
//! Boolean convolution replaced by (pluggable) max-plus convolution.

use crate::counters::WorkCounters;
use crate::error::{Error, Result};
use crate::sumset::{ConvConfig, ValueWindow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnapsackItem {
    pub weight: u64,
    pub profit: u64,
}

impl KnapsackItem {
    pub fn new(weight: u64, profit: u64) -> Self {
        assert!(weight >= 1, "item weight must be >= 1");
        assert!(profit >= 1, "item profit must be >= 1");
        KnapsackItem { weight, profit }
    }
}

/// Best achievable profit per exact total weight over a window, with `None`
/// marking unachievable weights. Sentinel-absorbing: ⊥ + x = ⊥, max(⊥, x) = x.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParetoProfile {
    offset: u64,
    profits: Vec<Option<u64>>,
}

impl ParetoProfile {
    pub fn from_entries(offset: u64, profits: Vec<Option<u64>>) -> Self {
        ParetoProfile { offset, profits }
    }

    pub fn new_empty(offset: u64, len: usize) -> Self {
        ParetoProfile { offset, profits: vec![None; len] }
    }

    /// The identity for max-plus convolution: profit 0 at weight 0.
    pub fn identity() -> Self {
        ParetoProfile { offset: 0, profits: vec![Some(0)] }
    }

    pub fn offset(&self) -> u64 {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.profits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profits.iter().all(|p| p.is_none())
    }

    pub fn dense(&self) -> Vec<Option<u64>> {
        self.profits.clone()
    }

    /// Profit at absolute weight w; None if unachievable or out of window.
    pub fn get(&self, w: u64) -> Option<u64> {
        if w < self.offset {
            return None;
        }
        self.profits.get((w - self.offset) as usize).copied().flatten()
    }

    /// Raise the entry at absolute weight w to at least p. Out-of-window
    /// weights are ignored (callers clip by construction).
    pub fn set_max(&mut self, w: u64, p: u64) {
        if w < self.offset {
            return;
        }
        let i = (w - self.offset) as usize;
        if let Some(slot) = self.profits.get_mut(i) {
            if slot.is_none_or(|cur| p > cur) {
                *slot = Some(p);
            }
        }
    }

    /// Non-sentinel entries as (absolute weight, profit), ascending weight.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.profits
            .iter()
            .enumerate()
            .filter_map(move |(i, p)| p.map(|p| (self.offset + i as u64, p)))
    }

    /// Max-merge the overlapping part of `other` into self; entries outside
    /// self's window are dropped.
    pub fn merge_max_clipped(&mut self, other: &ParetoProfile) {
        for (w, p) in other.iter() {
            self.set_max(w, p);
        }
    }
}

/// Collapse (weight, profit) pairs to the max profit per weight, windowed to
/// the min and max weight present. Empty input gives an empty profile.
pub fn pmax(pairs: &[(u64, u64)]) -> ParetoProfile {
    if pairs.is_empty() {
        return ParetoProfile::new_empty(0, 0);
    }
    let lo = pairs.iter().map(|&(w, _)| w).min().unwrap();
    let hi = pairs.iter().map(|&(w, _)| w).max().unwrap();
    let mut out = ParetoProfile::new_empty(lo, (hi - lo + 1) as usize);
    for &(w, p) in pairs {
        out.set_max(w, p);
    }
    out
}

/// A max-plus convolution kernel: given two dense profit arrays, return their
/// full linear max-plus convolution (length a+b-1). The default is the naive
/// kernel; subquadratic backends can be plugged in through this seam.
pub type MaxPlusKernel = fn(&[Option<u64>], &[Option<u64>]) -> Vec<Option<u64>>;

/// Naive kernel, iterating only achievable entries of both operands.
pub fn naive_maxplus_kernel(a: &[Option<u64>], b: &[Option<u64>]) -> Vec<Option<u64>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![None; a.len() + b.len() - 1];
    let nz_a: Vec<(usize, u64)> = a.iter().enumerate().filter_map(|(i, p)| p.map(|p| (i, p))).collect();
    let nz_b: Vec<(usize, u64)> = b.iter().enumerate().filter_map(|(i, p)| p.map(|p| (i, p))).collect();
    // outer loop over the sparser operand
    let (outer, inner) = if nz_a.len() <= nz_b.len() { (&nz_a, &nz_b) } else { (&nz_b, &nz_a) };
    for &(i, p) in outer {
        for &(j, q) in inner {
            let slot = &mut out[i + j];
            let cand = p + q;
            if slot.is_none_or(|cur| cand > cur) {
                *slot = Some(cand);
            }
        }
    }
    out
}

#[derive(Clone, Copy)]
pub struct KnapsackConfig {
    pub kernel: MaxPlusKernel,
    /// Window-size cap shared with the Boolean side.
    pub memory_cap: u64,
}

impl Default for KnapsackConfig {
    fn default() -> Self {
        KnapsackConfig {
            kernel: naive_maxplus_kernel,
            memory_cap: ConvConfig::default().memory_cap,
        }
    }
}

/// h[w] = max over w' + w'' = w of f[w'] + g[w''], clipped to `clip`.
pub fn maxplus_convolve(
    f: &ParetoProfile,
    g: &ParetoProfile,
    clip: ValueWindow,
    cfg: &KnapsackConfig,
    ctr: &mut WorkCounters,
) -> Result<ParetoProfile> {
    if f.is_empty() || g.is_empty() || clip.is_empty() {
        return Ok(ParetoProfile::new_empty(clip.lo.min(clip.hi.wrapping_add(1)), 0));
    }
    let lo = clip.lo.max(f.offset + g.offset);
    let hi_raw = (f.offset + f.len() as u64 - 1) + (g.offset + g.len() as u64 - 1);
    let hi = clip.hi.min(hi_raw);
    if lo > hi {
        return Ok(ParetoProfile::new_empty(clip.lo, 0));
    }
    let out_len = hi - lo + 1;
    if out_len > cfg.memory_cap {
        return Err(Error::WindowOverflow { needed: out_len, cap: cfg.memory_cap });
    }
    ctr.record_maxplus(f.len() as u64, g.len() as u64, out_len);
    let full = (cfg.kernel)(&f.profits, &g.profits);
    let base = f.offset + g.offset;
    let mut out = ParetoProfile::new_empty(lo, out_len as usize);
    for (rel, p) in full.iter().enumerate() {
        if let Some(p) = *p {
            let w = base + rel as u64;
            if w >= lo && w <= hi {
                out.set_max(w, p);
            }
        }
    }
    Ok(out)
}

const NO_CRUMB: (u32, u64) = (u32::MAX, u64::MAX);

/// Layered profit tree over items in one dyadic weight interval: the profile
/// analogue of the Boolean layered construction. Layer i of a node holds, per
/// exact weight, the max profit over subsets of exactly i of its items.
pub struct KnapNode {
    pub lo: u64,
    pub interval_len: u64,
    pub layers: Vec<ParetoProfile>,
    /// crumbs[i][rel] = (left cardinality, left weight) of the combination
    /// that set this entry; only populated when the tree is retained.
    crumbs: Vec<Vec<(u32, u64)>>,
    children: Option<Box<(KnapNode, KnapNode)>>,
    /// item indices at a leaf, sorted by profit desc then index asc
    leaf_items: Vec<usize>,
}

impl KnapNode {
    pub fn k_eff(&self) -> usize {
        self.layers.len() - 1
    }
}

/// Build the layered profile tree for items with weights in [1, u], keeping
/// layers up to cardinality k.
pub fn knapsack_layered(
    items: &[KnapsackItem],
    u: u64,
    k: usize,
    retain: bool,
    cfg: &KnapsackConfig,
    ctr: &mut WorkCounters,
) -> Result<KnapNode> {
    let u_pad = u.max(1).next_power_of_two();
    for (i, it) in items.iter().enumerate() {
        if it.weight == 0 || it.weight > u {
            return Err(Error::ElementOutOfRange { value: it.weight, max: u });
        }
        let _ = i;
    }
    let mut ids: Vec<usize> = (0..items.len()).collect();
    ids.sort_by_key(|&i| items[i].weight);
    build(items, &ids, 0, u_pad, k, retain, cfg, ctr)
}

#[allow(clippy::too_many_arguments)]
fn build(
    items: &[KnapsackItem],
    ids: &[usize],
    lo: u64,
    len: u64,
    k: usize,
    retain: bool,
    cfg: &KnapsackConfig,
    ctr: &mut WorkCounters,
) -> Result<KnapNode> {
    let k_eff = k.min(ids.len());
    let mut node = KnapNode {
        lo,
        interval_len: len,
        layers: Vec::with_capacity(k_eff + 1),
        crumbs: Vec::new(),
        children: None,
        leaf_items: Vec::new(),
    };
    node.layers.push(ParetoProfile::from_entries(0, vec![Some(0)]));

    if ids.is_empty() {
        return Ok(node);
    }

    if len == 1 {
        // all items here weigh lo+1; layer i = top-i profits
        let w = lo + 1;
        let mut sorted = ids.to_vec();
        sorted.sort_by(|&a, &b| items[b].profit.cmp(&items[a].profit).then(a.cmp(&b)));
        let mut acc = 0u64;
        for i in 1..=k_eff {
            acc += items[sorted[i - 1]].profit;
            let mut layer = ParetoProfile::new_empty(w * i as u64, 1);
            layer.set_max(w * i as u64, acc);
            node.layers.push(layer);
        }
        node.leaf_items = sorted;
        return Ok(node);
    }

    let half = len / 2;
    let split = ids.partition_point(|&i| items[i].weight <= lo + half);
    let left = build(items, &ids[..split], lo, half, k, retain, cfg, ctr)?;
    let right = build(items, &ids[split..], lo + half, half, k, retain, cfg, ctr)?;
    let kl = left.k_eff();
    let kr = right.k_eff();

    for i in 1..=k_eff {
        // weights of i items from (lo, lo+len] lie in (lo*i, (lo+len)*i]
        let w_lo = lo * i as u64 + 1;
        let w_hi = (lo + len) * i as u64;
        let width = w_hi - w_lo + 1;
        if width > cfg.memory_cap {
            return Err(Error::WindowOverflow { needed: width, cap: cfg.memory_cap });
        }
        let mut layer = ParetoProfile::new_empty(w_lo, width as usize);
        let mut crumbs = if retain { vec![NO_CRUMB; width as usize] } else { Vec::new() };
        let il_min = i.saturating_sub(kr);
        let il_max = i.min(kl);
        for il in il_min..=il_max {
            let part = maxplus_convolve(
                &left.layers[il],
                &right.layers[i - il],
                ValueWindow::new(w_lo, w_hi),
                cfg,
                ctr,
            )?;
            for (w, p) in part.iter() {
                let rel = (w - w_lo) as usize;
                if layer.get(w).is_none_or(|cur| p > cur) {
                    layer.set_max(w, p);
                    if retain {
                        // left weight achieving the improvement: max-plus
                        // witness probe over the smaller left layer
                        let wl = left.layers[il]
                            .iter()
                            .filter(|&(wl, pl)| {
                                right.layers[i - il].get(w - wl).is_some_and(|pr| pl + pr == p)
                            })
                            .map(|(wl, _)| wl)
                            .next()
                            .expect("improving entry must decompose");
                        crumbs[rel] = (il as u32, wl);
                    }
                }
            }
        }
        node.layers.push(layer);
        if retain {
            node.crumbs.push(crumbs);
        }
    }
    node.children = Some(Box::new((left, right)));
    Ok(node)
}

/// Item indices achieving layer i's profit at exact weight w. Requires a
/// retained tree.
pub fn report_items(node: &KnapNode, i: usize, w: u64) -> Result<Vec<usize>> {
    if i == 0 {
        return if w == 0 {
            Ok(Vec::new())
        } else {
            Err(Error::NotAMember { i, y: w })
        };
    }
    if i > node.k_eff() || node.layers[i].get(w).is_none() {
        return Err(Error::NotAMember { i, y: w });
    }
    if node.interval_len == 1 {
        return Ok(node.leaf_items[..i].to_vec());
    }
    let Some(children) = &node.children else {
        return Err(Error::WitnessModeOff);
    };
    if node.crumbs.is_empty() {
        return Err(Error::WitnessModeOff);
    }
    let rel = (w - node.layers[i].offset()) as usize;
    let (il, wl) = node.crumbs[i - 1][rel];
    if (il, wl) == NO_CRUMB {
        return Err(Error::Internal(format!("missing crumb at layer {i}, weight {w}")));
    }
    let (left, right) = children.as_ref();
    let mut out = report_items(left, il as usize, wl)?;
    out.extend(report_items(right, i - il as usize, w - wl)?);
    Ok(out)
}

/// Canonical item-sets for the halver machinery: one achieving subset per
/// (interval, cardinality, weight) entry present in the retained tree.
pub fn knapsack_canonicals(root: &KnapNode) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    fn walk(node: &KnapNode, out: &mut Vec<Vec<usize>>) -> Result<()> {
        for i in 1..=node.k_eff() {
            for (w, _) in node.layers[i].iter() {
                out.push(report_items(node, i, w)?);
            }
        }
        if let Some(children) = &node.children {
            walk(&children.0, out)?;
            walk(&children.1, out)?;
        }
        Ok(())
    }
    walk(root, &mut out)?;
    Ok(out)
}

fn bucket_index(w: u64, t: u64) -> u32 {
    debug_assert!(w >= 1 && w <= t);
    63 - (t / w).leading_zeros() + 1
}

/// Exact all-capacities 0-1 knapsack: f[w] = max profit at exact weight w,
/// for every w in [0, t]. Items heavier than t are discarded.
pub fn knapsack_all_capacities(
    items: &[KnapsackItem],
    t: u64,
    cfg: &KnapsackConfig,
    ctr: &mut WorkCounters,
) -> Result<ParetoProfile> {
    let mut f = ParetoProfile::new_empty(0, t as usize + 1);
    f.set_max(0, 0);
    if t == 0 {
        return Ok(f);
    }

    let max_bucket = bucket_index(1, t) as usize;
    let mut buckets: Vec<Vec<KnapsackItem>> = vec![Vec::new(); max_bucket + 1];
    for &it in items {
        if it.weight <= t {
            buckets[bucket_index(it.weight, t) as usize].push(it);
        }
    }

    for (i, bucket) in buckets.iter().enumerate() {
        if bucket.is_empty() {
            continue;
        }
        let u_i = t.div_ceil(1u64 << (i - 1));
        // any subset of bucket i with weight <= t has at most 2^i items, so
        // the layered profiles up to that cardinality are exhaustive here
        let k_i = (1u64 << i).min(bucket.len() as u64) as usize;
        let node = knapsack_layered(bucket, u_i, k_i, false, cfg, ctr)?;
        let mut bucket_profile = ParetoProfile::new_empty(0, t as usize + 1);
        bucket_profile.set_max(0, 0);
        for layer in &node.layers {
            bucket_profile.merge_max_clipped(layer);
        }
        let conv = maxplus_convolve(&f, &bucket_profile, ValueWindow::new(0, t), cfg, ctr)?;
        let mut next = ParetoProfile::new_empty(0, t as usize + 1);
        next.merge_max_clipped(&conv);
        f = next;
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::dp_knapsack;

    fn profile(entries: &[Option<u64>]) -> ParetoProfile {
        ParetoProfile::from_entries(0, entries.to_vec())
    }

    #[test]
    fn pmax_examples() {
        let p = pmax(&[(2, 3), (2, 5), (4, 1)]);
        assert_eq!(p.get(2), Some(5));
        assert_eq!(p.get(3), None);
        assert_eq!(p.get(4), Some(1));
        assert!(pmax(&[]).is_empty());
        assert_eq!(pmax(&[(1, 7)]).get(1), Some(7));
        // idempotent
        let again = pmax(&p.iter().collect::<Vec<_>>());
        assert_eq!(again, p);
    }

    #[test]
    fn maxplus_examples() {
        let cfg = KnapsackConfig::default();
        let mut ctr = WorkCounters::default();
        let h = maxplus_convolve(
            &profile(&[Some(0), Some(1)]),
            &profile(&[Some(0), Some(2)]),
            ValueWindow::new(0, 2),
            &cfg,
            &mut ctr,
        )
        .unwrap();
        assert_eq!(h.dense(), vec![Some(0), Some(2), Some(3)]);

        let g = profile(&[Some(0), None, Some(5)]);
        let id = maxplus_convolve(&ParetoProfile::identity(), &g, ValueWindow::new(0, 2), &cfg, &mut ctr).unwrap();
        assert_eq!(id.dense(), g.dense());

        let h = maxplus_convolve(
            &profile(&[Some(0), None, Some(5)]),
            &profile(&[Some(0), Some(4)]),
            ValueWindow::new(0, 3),
            &cfg,
            &mut ctr,
        )
        .unwrap();
        assert_eq!(h.dense(), vec![Some(0), Some(4), Some(5), Some(9)]);
        assert_eq!(ctr.maxplus_calls, 3);
    }

    #[test]
    fn maxplus_commutes() {
        let cfg = KnapsackConfig::default();
        let mut ctr = WorkCounters::default();
        let f = profile(&[Some(0), Some(7), None, Some(2)]);
        let g = profile(&[None, Some(3), Some(3)]);
        let clip = ValueWindow::new(0, 6);
        let fg = maxplus_convolve(&f, &g, clip, &cfg, &mut ctr).unwrap();
        let gf = maxplus_convolve(&g, &f, clip, &cfg, &mut ctr).unwrap();
        assert_eq!(fg.dense(), gf.dense());
    }

    #[test]
    fn layered_examples() {
        let cfg = KnapsackConfig::default();
        let mut ctr = WorkCounters::default();

        let items = [KnapsackItem::new(1, 2), KnapsackItem::new(1, 3)];
        let node = knapsack_layered(&items, 1, 2, true, &cfg, &mut ctr).unwrap();
        assert_eq!(node.layers[1].get(1), Some(3));
        assert_eq!(node.layers[2].get(2), Some(5));

        let empty = knapsack_layered(&[], 4, 3, false, &cfg, &mut ctr).unwrap();
        assert_eq!(empty.k_eff(), 0);
        assert_eq!(empty.layers[0].get(0), Some(0));

        let dup = [KnapsackItem::new(2, 1), KnapsackItem::new(2, 1)];
        let node = knapsack_layered(&dup, 2, 2, false, &cfg, &mut ctr).unwrap();
        assert_eq!(node.layers[1].get(2), Some(1));
        assert_eq!(node.layers[2].get(4), Some(2));
    }

    #[test]
    fn report_items_achieves_layer_entries() {
        let cfg = KnapsackConfig::default();
        let mut ctr = WorkCounters::default();
        let items = [
            KnapsackItem::new(1, 4),
            KnapsackItem::new(2, 3),
            KnapsackItem::new(3, 9),
            KnapsackItem::new(4, 2),
            KnapsackItem::new(2, 8),
        ];
        let node = knapsack_layered(&items, 4, 3, true, &cfg, &mut ctr).unwrap();
        for i in 1..=node.k_eff() {
            for (w, p) in node.layers[i].iter() {
                let picked = report_items(&node, i, w).unwrap();
                assert_eq!(picked.len(), i);
                let mut seen = picked.clone();
                seen.dedup();
                assert_eq!(seen.len(), i, "duplicate item index in witness");
                assert_eq!(picked.iter().map(|&j| items[j].weight).sum::<u64>(), w);
                assert_eq!(picked.iter().map(|&j| items[j].profit).sum::<u64>(), p);
            }
        }
    }

    #[test]
    fn canonicals_feed_the_two_coloring() {
        let cfg = KnapsackConfig::default();
        let mut ctr = WorkCounters::default();
        let items = [
            KnapsackItem::new(1, 4),
            KnapsackItem::new(2, 3),
            KnapsackItem::new(3, 9),
            KnapsackItem::new(2, 8),
        ];
        let node = knapsack_layered(&items, 4, 2, true, &cfg, &mut ctr).unwrap();
        let sets = knapsack_canonicals(&node).unwrap();
        assert!(!sets.is_empty());
        let sets: Vec<Vec<u32>> = sets
            .into_iter()
            .map(|s| s.into_iter().map(|i| i as u32).collect())
            .collect();
        let system = crate::discrepancy::SetSystem::new(items.len(), sets).unwrap();
        let coloring = crate::discrepancy::two_color(&system).unwrap();
        assert!((coloring.max_abs_discrepancy as f64) <= coloring.bound);
    }

    #[test]
    fn all_capacities_examples() {
        let cfg = KnapsackConfig::default();
        let mut ctr = WorkCounters::default();

        let items = [KnapsackItem::new(2, 3), KnapsackItem::new(3, 4)];
        let f = knapsack_all_capacities(&items, 5, &cfg, &mut ctr).unwrap();
        assert_eq!(f.dense(), vec![Some(0), None, Some(3), Some(4), None, Some(7)]);

        let f = knapsack_all_capacities(&[], 3, &cfg, &mut ctr).unwrap();
        assert_eq!(f.dense(), vec![Some(0), None, None, None]);

        let f = knapsack_all_capacities(&[KnapsackItem::new(5, 9)], 4, &cfg, &mut ctr).unwrap();
        assert_eq!(f.dense(), vec![Some(0), None, None, None, None]);
    }

    #[test]
    fn all_capacities_matches_dp_on_mixed_instances() {
        let cfg = KnapsackConfig::default();
        let cases: Vec<(Vec<(u64, u64)>, u64)> = vec![
            (vec![(2, 3), (3, 4), (2, 9), (5, 1)], 12),
            (vec![(1, 1), (1, 2), (1, 3), (1, 4)], 4),
            (vec![(7, 7), (7, 8), (7, 9)], 21),
            (vec![(3, 10), (5, 2), (8, 30), (2, 2), (2, 5), (1, 1)], 20),
            (vec![(10, 5)], 9),
        ];
        for (pairs, t) in cases {
            let items: Vec<KnapsackItem> =
                pairs.iter().map(|&(w, p)| KnapsackItem::new(w, p)).collect();
            let mut ctr = WorkCounters::default();
            let got = knapsack_all_capacities(&items, t, &cfg, &mut ctr).unwrap();
            assert_eq!(got.dense(), dp_knapsack(&items, t).dense(), "items {pairs:?} t={t}");
        }
    }
}
