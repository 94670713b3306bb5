//! Halver-driven divide-and-conquer over cardinality, and the scale-bucketed
//! top-level all-targets subset-sum algorithm.

use crate::counters::WorkCounters;
use crate::error::{Error, Result};
use crate::halver::{build_halver, canonical_count_bound, halver_delta};
use crate::instance::{Instance, Multiset, Witness};
use crate::layered::{layered_sums, report_subset, DyadicNode, TreeMode};
use crate::sumset::{bool_convolve, union_into, witness_search, ConvConfig, SumsetBitmap, ValueWindow};

/// When to split via a halver instead of finishing with the layered base case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitPolicy {
    /// Split when some b <= k makes the halver's delta formula satisfy
    /// delta <= k / log2(k); otherwise fall through to the base case.
    Auto,
    /// Split unconditionally with the given b for `depth` levels, recursing
    /// with the same cardinality bound (correct for any delta, used to
    /// exercise the split machinery at small scale).
    Force { b: usize, depth: u32 },
}

#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub conv: ConvConfig,
    /// Base-case threshold: k at or below this is solved by layered sums.
    pub base_k: usize,
    pub split: SplitPolicy,
    /// Retain intermediate bitmaps and trees for witness reconstruction.
    pub witness_mode: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            conv: ConvConfig::default(),
            base_k: 8,
            split: SplitPolicy::Auto,
            witness_mode: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    /// Σ(X) ∩ [0, t], window exactly [0, t].
    pub answer: SumsetBitmap,
    pub work: WorkCounters,
    pub algo: &'static str,
    pub discarded_over_target: u64,
}

/// Recursion-tree node retained in witness mode.
pub enum DncNode {
    Base { tree: DyadicNode },
    Split {
        left: Box<DncNode>,
        right: Box<DncNode>,
        ans_left: SumsetBitmap,
        ans_right: SumsetBitmap,
    },
}

/// Balanced combine tree over the bucket answers, retained in witness mode.
enum CombineNode {
    Leaf(DncNode),
    Join {
        left: Box<CombineNode>,
        right: Box<CombineNode>,
        left_result: SumsetBitmap,
        right_result: SumsetBitmap,
    },
}

pub struct Solved {
    pub report: SolveReport,
    witness_mode: bool,
    trace: Option<CombineNode>,
}

fn log2f(k: usize) -> f64 {
    (k as f64).log2()
}

/// Compute ANS with Σ_{<=k}(X) ⊆ ANS ⊆ Σ(X), over the window [0, k_eff * u_pad].
pub fn dnc_sums(
    x: &Multiset,
    u: u64,
    k: usize,
    cfg: &SolverConfig,
    ctr: &mut WorkCounters,
) -> Result<SumsetBitmap> {
    Ok(dnc(x, u, k, cfg, cfg.split, 0, ctr)?.0)
}

fn dnc(
    x: &Multiset,
    u: u64,
    k: usize,
    cfg: &SolverConfig,
    policy: SplitPolicy,
    depth: u32,
    ctr: &mut WorkCounters,
) -> Result<(SumsetBitmap, Option<DncNode>)> {
    ctr.recursion_depth_max = ctr.recursion_depth_max.max(depth);
    let u_pad = u.max(1).next_power_of_two();
    let k_eff = (x.total().min(k as u64)) as usize;

    let split_params = match policy {
        _ if k_eff <= cfg.base_k => None,
        SplitPolicy::Auto => {
            // smallest power-of-two b whose delta bound (with the frozen
            // canonical-count estimate for m) meets delta <= k / log2(k)
            let threshold = k_eff as f64 / log2f(k_eff);
            let mut found = None;
            let mut b = 2usize;
            while b <= k_eff {
                let m_hat = canonical_count_bound(b, u_pad).ceil() as usize;
                if halver_delta(k_eff, b, u_pad, m_hat) <= threshold {
                    found = Some((b, false));
                    break;
                }
                b *= 2;
            }
            found
        }
        SplitPolicy::Force { b, depth: 0 } => {
            let _ = b;
            None
        }
        SplitPolicy::Force { b, .. } if b <= k_eff => Some((b, true)),
        SplitPolicy::Force { .. } => None,
    };

    let Some((b, forced)) = split_params else {
        return base_case(x, u, k_eff, cfg, ctr);
    };

    let halver = build_halver(x, u, k_eff, b, &cfg.conv, ctr)?;
    ctr.splits += 1;
    ctr.b_chosen.push(b);

    let k_next = if forced {
        k_eff
    } else {
        let threshold = k_eff as f64 / log2f(k_eff);
        if halver.delta > threshold {
            // actual m exceeded the frozen estimate; cannot happen, but the
            // completeness contract depends on it, so refuse to proceed
            return Err(Error::Internal(format!(
                "halver delta {} exceeded threshold {threshold}",
                halver.delta
            )));
        }
        let k_next = (k_eff as f64 / 2.0 + k_eff as f64 / log2f(k_eff)).ceil() as usize;
        if k_next >= k_eff {
            return Err(Error::Internal(format!(
                "recursion failed to shrink: k={k_eff} -> k'={k_next}"
            )));
        }
        k_next
    };

    let child_policy = match policy {
        SplitPolicy::Force { b, depth: d } => SplitPolicy::Force { b, depth: d - 1 },
        p => p,
    };
    let (ans_l, node_l) = dnc(&halver.left, u, k_next, cfg, child_policy, depth + 1, ctr)?;
    let (ans_r, node_r) = dnc(&halver.right, u, k_next, cfg, child_policy, depth + 1, ctr)?;

    let window_hi = k_eff as u64 * u_pad;
    let conv = bool_convolve(&ans_l, &ans_r, ValueWindow::new(0, window_hi), &cfg.conv, ctr)?;
    let mut ans = SumsetBitmap::new_empty(0, window_hi);
    union_into(&mut ans, &conv)?;

    let node = if cfg.witness_mode {
        Some(DncNode::Split {
            left: Box::new(node_l.unwrap()),
            right: Box::new(node_r.unwrap()),
            ans_left: ans_l,
            ans_right: ans_r,
        })
    } else {
        None
    };
    Ok((ans, node))
}

fn base_case(
    x: &Multiset,
    u: u64,
    k_eff: usize,
    cfg: &SolverConfig,
    ctr: &mut WorkCounters,
) -> Result<(SumsetBitmap, Option<DncNode>)> {
    ctr.base_cases += 1;
    let u_pad = u.max(1).next_power_of_two();
    let mode = if cfg.witness_mode { TreeMode::RetainTree } else { TreeMode::RootOnly };
    let tree = layered_sums(x, u, k_eff, mode, &cfg.conv, ctr)?;
    let mut ans = SumsetBitmap::new_empty(0, k_eff as u64 * u_pad);
    for i in 0..=tree.layers.k_eff() {
        union_into(&mut ans, tree.layers.layer(i).unwrap())?;
    }
    let node = cfg.witness_mode.then_some(DncNode::Base { tree });
    Ok((ans, node))
}

fn reconstruct_dnc(node: &DncNode, y: u64, cfg: &ConvConfig, ctr: &mut WorkCounters) -> Result<Witness> {
    match node {
        DncNode::Base { tree } => {
            for i in 0..=tree.layers.k_eff() {
                if tree.layers.contains(i, y) {
                    return report_subset(tree, i, y, cfg, ctr);
                }
            }
            Err(Error::NotInAnswer { y })
        }
        DncNode::Split { left, right, ans_left, ans_right } => {
            let (ya, yb) = witness_search(ans_left, ans_right, y, cfg, ctr)?;
            let wl = reconstruct_dnc(left, ya, cfg, ctr)?;
            let wr = reconstruct_dnc(right, yb, cfg, ctr)?;
            Ok(wl.merge(wr))
        }
    }
}

fn bucket_index(v: u64, t: u64) -> u32 {
    // bucket i holds values in (t/2^i, t/2^{i-1}]
    debug_assert!(v >= 1 && v <= t);
    let q = t / v;
    63 - q.leading_zeros() + 1
}

/// Exact all-targets subset sum: answer = Σ(X) ∩ [0, t]. Elements are
/// bucketed by scale, each bucket solved with a cardinality bound matching
/// its scale, and the bucket answers combined by clipped convolutions.
pub fn all_targets(instance: &Instance, cfg: &SolverConfig) -> Result<Solved> {
    let t = instance.t;
    let mut work = WorkCounters::default();

    let mut answer = SumsetBitmap::new_empty(0, t);
    answer.insert(0);
    if t == 0 || instance.x.is_empty() {
        return Ok(Solved {
            report: SolveReport {
                answer,
                work,
                algo: "dnc",
                discarded_over_target: instance.discarded_over_target,
            },
            witness_mode: cfg.witness_mode,
            trace: None,
        });
    }

    // split into per-scale buckets, ascending bucket index
    let max_bucket = bucket_index(1, t);
    let mut buckets: Vec<Vec<(u64, u64)>> = vec![Vec::new(); max_bucket as usize + 1];
    for &(v, c) in instance.x.entries() {
        buckets[bucket_index(v, t) as usize].push((v, c));
    }

    let mut leaves: Vec<(SumsetBitmap, Option<CombineNode>)> = Vec::new();
    for (i, entries) in buckets.iter().enumerate() {
        if entries.is_empty() {
            continue;
        }
        let i = i as u32;
        let bucket_x = Multiset::from_entries(entries.clone());
        let u_i = t.div_ceil(1u64 << (i - 1));
        let k_i = (1u64 << i).min(bucket_x.total()) as usize;
        let (raw, node) = dnc(&bucket_x, u_i, k_i, cfg, cfg.split, 0, &mut work)?;
        // Σ(X_i) ∩ [t] = Σ_{<=2^i}(X_i) ∩ [t]: every element exceeds t/2^i
        let mut clipped = SumsetBitmap::new_empty(0, t);
        union_clipped(&mut clipped, &raw);
        leaves.push((clipped, node.map(CombineNode::Leaf)));
    }

    // balanced pairwise combine: keeps most convolutions between sparse
    // operands, with dense-on-dense only near the root
    let (acc, trace) = combine_tree(leaves, t, cfg, &mut work)?;
    union_into(&mut answer, &acc)?;

    Ok(Solved {
        report: SolveReport {
            answer,
            work,
            algo: "dnc",
            discarded_over_target: instance.discarded_over_target,
        },
        witness_mode: cfg.witness_mode,
        trace,
    })
}

fn combine_tree(
    mut leaves: Vec<(SumsetBitmap, Option<CombineNode>)>,
    t: u64,
    cfg: &SolverConfig,
    work: &mut WorkCounters,
) -> Result<(SumsetBitmap, Option<CombineNode>)> {
    debug_assert!(!leaves.is_empty());
    if leaves.len() == 1 {
        let (bm, node) = leaves.pop().unwrap();
        return Ok((bm, node));
    }
    let right = leaves.split_off(leaves.len() / 2);
    let (lb, ln) = combine_tree(leaves, t, cfg, work)?;
    let (rb, rn) = combine_tree(right, t, cfg, work)?;
    let conv = bool_convolve(&lb, &rb, ValueWindow::new(0, t), &cfg.conv, work)?;
    let node = cfg.witness_mode.then(|| CombineNode::Join {
        left: Box::new(ln.unwrap()),
        right: Box::new(rn.unwrap()),
        left_result: lb,
        right_result: rb,
    });
    Ok((conv, node))
}

fn reconstruct_combine(
    node: &CombineNode,
    y: u64,
    cfg: &ConvConfig,
    ctr: &mut WorkCounters,
) -> Result<Witness> {
    match node {
        CombineNode::Leaf(dnc) => reconstruct_dnc(dnc, y, cfg, ctr),
        CombineNode::Join { left, right, left_result, right_result } => {
            let (ya, yb) = witness_search(left_result, right_result, y, cfg, ctr)?;
            let wl = reconstruct_combine(left, ya, cfg, ctr)?;
            let wr = reconstruct_combine(right, yb, cfg, ctr)?;
            Ok(wl.merge(wr))
        }
    }
}

/// OR the overlapping part of src into dst, dropping values outside dst's
/// window (unlike union_into, which requires containment).
fn union_clipped(dst: &mut SumsetBitmap, src: &SumsetBitmap) {
    for v in src.iter() {
        if v >= dst.offset() && v <= dst.offset() + dst.len() {
            dst.insert(v);
        }
    }
}

/// Membership probe: t ∈ Σ(X)?
pub fn decide(instance: &Instance, cfg: &SolverConfig) -> Result<bool> {
    Ok(all_targets(instance, cfg)?.report.answer.contains(instance.t))
}

impl Solved {
    pub fn answer(&self) -> &SumsetBitmap {
        &self.report.answer
    }

    /// Reconstruct a sub-multiset of X summing to y. Requires witness mode.
    pub fn reconstruct(&self, y: u64, cfg: &SolverConfig, ctr: &mut WorkCounters) -> Result<Witness> {
        if !self.witness_mode {
            return Err(Error::WitnessModeOff);
        }
        if !self.report.answer.contains(y) {
            return Err(Error::NotInAnswer { y });
        }
        let Some(trace) = &self.trace else {
            // trivial answer {0}: no trace retained
            return if y == 0 {
                Ok(Witness::empty())
            } else {
                Err(Error::Internal(format!("no trace for nonzero target {y}")))
            };
        };
        let wit = reconstruct_combine(trace, y, &cfg.conv, ctr)?;
        debug_assert_eq!(wit.sum(), y);
        Ok(wit)
    }
}
