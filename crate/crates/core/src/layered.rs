//! Layered sums over dyadic intervals: compute {Σ_i(X)}_{i∈[k]} bottom-up
//! with per-cardinality windowed bitmaps, and report one subset per present
//! (i, y) by backtracking recorded convolution splits.

use crate::counters::WorkCounters;
use crate::error::{Error, Result};
use crate::instance::{Multiset, Witness};
use crate::sumset::{bool_convolve, union_into, witness_search, ConvConfig, SumsetBitmap};

/// Whether to keep the tree (needed for subset reporting) or only the root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeMode {
    RetainTree,
    RootOnly,
}

const NO_CRUMB: (u32, u32) = (u32::MAX, u32::MAX);

/// Per-cardinality sumset bitmaps attached to a dyadic interval node.
/// Layer i covers the window (a*i, (a+l)*i]; layer 0 is {0}.
#[derive(Debug, Clone)]
pub struct LayeredSums {
    pub layers: Vec<SumsetBitmap>,
}

impl LayeredSums {
    /// Max cardinality with a materialized layer.
    pub fn k_eff(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn layer(&self, i: usize) -> Option<&SumsetBitmap> {
        self.layers.get(i)
    }

    pub fn contains(&self, i: usize, y: u64) -> bool {
        self.layers.get(i).map(|l| l.contains(y)).unwrap_or(false)
    }
}

/// Node over the dyadic interval (lo, lo + len], with len a power of two and
/// lo divisible by len. Breadcrumbs record, for each present (i, y), one
/// split (i', i'') such that y ∈ A_{i'} + B_{i''} over the children.
#[derive(Debug)]
pub struct DyadicNode {
    pub lo: u64,
    pub interval_len: u64,
    pub layers: LayeredSums,
    /// crumbs[i][bit] = (i', i''), parallel to layer i's window; only in
    /// RetainTree mode on internal nodes.
    crumbs: Vec<Vec<(u32, u32)>>,
    children: Option<Box<[DyadicNode; 2]>>,
    /// Multiplicity of the single value lo + 1 at leaves.
    leaf_count: u64,
}

impl DyadicNode {
    pub fn children(&self) -> Option<(&DyadicNode, &DyadicNode)> {
        self.children.as_deref().map(|c| (&c[0], &c[1]))
    }

    fn is_leaf(&self) -> bool {
        self.interval_len == 1
    }
}

fn trivial_node(lo: u64, interval_len: u64) -> DyadicNode {
    DyadicNode {
        lo,
        interval_len,
        layers: LayeredSums { layers: vec![SumsetBitmap::singleton(0)] },
        crumbs: Vec::new(),
        children: None,
        leaf_count: 0,
    }
}

/// Compute {Σ_i(X)}_{i∈[k]} for a multiset X of integers in [1, u].
/// u is padded internally to the next power of two; the returned root covers
/// (0, u_pad]. With `RetainTree`, the tree supports `report_subset`.
pub fn layered_sums(
    x: &Multiset,
    u: u64,
    k: usize,
    mode: TreeMode,
    cfg: &ConvConfig,
    ctr: &mut WorkCounters,
) -> Result<DyadicNode> {
    for &(v, _) in x.entries() {
        if v == 0 || v > u {
            return Err(Error::ElementOutOfRange { value: v, max: u });
        }
    }
    let u_pad = u.max(1).next_power_of_two();
    build(x.entries(), 0, u_pad, k, mode, cfg, ctr)
}

fn build(
    entries: &[(u64, u64)],
    lo: u64,
    len: u64,
    k: usize,
    mode: TreeMode,
    cfg: &ConvConfig,
    ctr: &mut WorkCounters,
) -> Result<DyadicNode> {
    if entries.is_empty() {
        return Ok(trivial_node(lo, len));
    }
    if len == 1 {
        let (value, count) = entries[0];
        debug_assert_eq!(value, lo + 1);
        let k_eff = (count.min(k as u64)) as usize;
        let mut layers = Vec::with_capacity(k_eff + 1);
        for i in 0..=k_eff as u64 {
            // Σ_i = {i * (lo + 1)}, window (lo*i, (lo+1)*i]
            let mut bm = SumsetBitmap::new_empty(lo * i, i);
            bm.insert(i * value);
            layers.push(bm);
        }
        return Ok(DyadicNode {
            lo,
            interval_len: 1,
            layers: LayeredSums { layers },
            crumbs: Vec::new(),
            children: None,
            leaf_count: count,
        });
    }

    let half = len / 2;
    let mid = lo + half;
    let split = entries.partition_point(|&(v, _)| v <= mid);
    let left = build(&entries[..split], lo, half, k, mode, cfg, ctr)?;
    let right = build(&entries[split..], mid, half, k, mode, cfg, ctr)?;

    let count: u64 = entries.iter().map(|&(_, c)| c).sum();
    let k_eff = (count.min(k as u64)) as usize;
    let kl = left.layers.k_eff();
    let kr = right.layers.k_eff();

    let retain = mode == TreeMode::RetainTree;
    let mut layers = Vec::with_capacity(k_eff + 1);
    let mut crumbs: Vec<Vec<(u32, u32)>> = Vec::with_capacity(if retain { k_eff + 1 } else { 0 });
    for i in 0..=k_eff {
        let window_len = len * i as u64;
        if window_len + 1 > cfg.memory_cap {
            return Err(Error::WindowOverflow { needed: window_len + 1, cap: cfg.memory_cap });
        }
        let mut c_i = SumsetBitmap::new_empty(lo * i as u64, window_len);
        let mut crumb = if retain {
            vec![NO_CRUMB; (window_len + 1) as usize]
        } else {
            Vec::new()
        };
        let clip = c_i.window();
        let i_lo = i.saturating_sub(kr);
        let i_hi = i.min(kl);
        for il in i_lo..=i_hi {
            let ir = i - il;
            let a = &left.layers.layers[il];
            let b = &right.layers.layers[ir];
            let conv = bool_convolve(a, b, clip, cfg, ctr)?;
            if retain {
                for y in conv.iter() {
                    let pos = (y - c_i.offset()) as usize;
                    if crumb[pos] == NO_CRUMB {
                        crumb[pos] = (il as u32, ir as u32);
                    }
                }
            }
            union_into(&mut c_i, &conv)?;
        }
        layers.push(c_i);
        if retain {
            crumbs.push(crumb);
        }
    }

    Ok(DyadicNode {
        lo,
        interval_len: len,
        layers: LayeredSums { layers },
        crumbs,
        children: if retain { Some(Box::new([left, right])) } else { None },
        leaf_count: 0,
    })
}

/// Report one sub-multiset S of the node's interval contents with |S| = i and
/// SUM(S) = y, by backtracking breadcrumbs and re-deriving each convolution
/// split with a witness search on the child layers.
pub fn report_subset(
    node: &DyadicNode,
    i: usize,
    y: u64,
    cfg: &ConvConfig,
    ctr: &mut WorkCounters,
) -> Result<Witness> {
    if !node.layers.contains(i, y) {
        return Err(Error::NotAMember { i, y });
    }
    if i == 0 {
        return Ok(Witness::empty());
    }
    if node.is_leaf() {
        if node.leaf_count == 0 {
            return Err(Error::NotAMember { i, y });
        }
        return Ok(Witness::single(node.lo + 1, i as u64));
    }
    if node.crumbs.is_empty() {
        return Err(Error::WitnessModeOff);
    }
    let pos = (y - node.layers.layers[i].offset()) as usize;
    let (il, ir) = node.crumbs[i][pos];
    if (il, ir) == NO_CRUMB {
        return Err(Error::Internal(format!("missing breadcrumb for (i={i}, y={y})")));
    }
    let (il, ir) = (il as usize, ir as usize);
    let (left, right) = node.children().unwrap();
    let a = &left.layers.layers[il];
    let b = &right.layers.layers[ir];
    let (ya, yb) = witness_search(a, b, y, cfg, ctr)?;
    let wl = report_subset(left, il, ya, cfg, ctr)?;
    let wr = report_subset(right, ir, yb, cfg, ctr)?;
    Ok(wl.merge(wr))
}
