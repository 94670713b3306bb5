//! Windowed bitset representation of integer sets, clipped Boolean
//! convolution with interchangeable exact backends, and deterministic
//! witness extraction for convolution outputs.

mod ntt;

use crate::counters::WorkCounters;
use crate::error::{Error, Result};

/// Inclusive value window [lo, hi]. The empty window is lo == hi + 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValueWindow {
    pub lo: u64,
    pub hi: u64,
}

impl ValueWindow {
    pub fn new(lo: u64, hi: u64) -> ValueWindow {
        debug_assert!(lo <= hi + 1, "degenerate window");
        ValueWindow { lo, hi }
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi + 1
    }

    pub fn contains(&self, v: u64) -> bool {
        !self.is_empty() && self.lo <= v && v <= self.hi
    }
}

/// Which convolution backend to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    /// Shift-OR for result windows up to `ntt_threshold` values, NTT above.
    #[default]
    Auto,
    /// Word-parallel shift-OR, exact, O(len^2 / w).
    ShiftOr,
    /// Number-theoretic transform over a word-sized prime, exact.
    Ntt,
}

#[derive(Debug, Clone, Copy)]
pub struct ConvConfig {
    pub backend: Backend,
    /// Result-window size (in values) at which Auto switches to the NTT path.
    pub ntt_threshold: u64,
    /// Maximum result window, in values. Larger requests error out instead of
    /// silently allocating.
    pub memory_cap: u64,
}

impl Default for ConvConfig {
    fn default() -> Self {
        ConvConfig {
            backend: Backend::Auto,
            ntt_threshold: 4096,
            memory_cap: 1 << 28,
        }
    }
}

/// Dense bit vector over the value window [offset, offset + len]; set bit p
/// encodes membership of the value offset + p. The window is fixed by the
/// caller's contract and never trimmed silently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumsetBitmap {
    offset: u64,
    len: u64,
    words: Vec<u64>,
}

fn words_for(bits: u64) -> usize {
    bits.div_ceil(64) as usize
}

/// Gather 64 bits of `words` starting at signed bit position `start`.
/// Positions outside the vector read as zero.
fn gather(words: &[u64], start: i128) -> u64 {
    let total = words.len() as i128 * 64;
    if start >= total || start <= -64 {
        return 0;
    }
    if start < 0 {
        return words[0] << (-start) as u32;
    }
    let wi = (start / 64) as usize;
    let bs = (start % 64) as u32;
    let lo = words.get(wi).copied().unwrap_or(0) >> bs;
    let hi = if bs == 0 {
        0
    } else {
        words.get(wi + 1).copied().unwrap_or(0) << (64 - bs)
    };
    lo | hi
}

impl SumsetBitmap {
    pub fn new_empty(offset: u64, len: u64) -> SumsetBitmap {
        SumsetBitmap {
            offset,
            len,
            words: vec![0; words_for(len + 1)],
        }
    }

    pub fn singleton(value: u64) -> SumsetBitmap {
        let mut s = SumsetBitmap::new_empty(value, 0);
        s.words[0] = 1;
        s
    }

    pub fn from_values(offset: u64, len: u64, values: &[u64]) -> SumsetBitmap {
        let mut s = SumsetBitmap::new_empty(offset, len);
        for &v in values {
            s.insert(v);
        }
        s
    }

    pub fn offset(&self) -> u64 {
        self.offset
    }

    /// Window span in values (the window is never empty: it always holds
    /// len + 1 candidate positions), hence no `is_empty`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn window(&self) -> ValueWindow {
        ValueWindow::new(self.offset, self.offset + self.len)
    }

    pub fn contains(&self, v: u64) -> bool {
        if v < self.offset || v > self.offset + self.len {
            return false;
        }
        let p = v - self.offset;
        self.words[(p / 64) as usize] >> (p % 64) & 1 == 1
    }

    pub fn insert(&mut self, v: u64) {
        assert!(
            v >= self.offset && v <= self.offset + self.len,
            "value {v} outside window [{}, {}]",
            self.offset,
            self.offset + self.len
        );
        let p = v - self.offset;
        self.words[(p / 64) as usize] |= 1 << (p % 64);
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty_set(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn min_value(&self) -> Option<u64> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(self.offset + wi as u64 * 64 + w.trailing_zeros() as u64);
            }
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(move |(wi, &w)| {
            let base = self.offset + wi as u64 * 64;
            BitIter { word: w }.map(move |b| base + b as u64)
        })
    }

    pub fn values(&self) -> Vec<u64> {
        self.iter().collect()
    }

    /// Keep only values <= hi (window unchanged).
    pub fn clip_above(&mut self, hi: u64) {
        if hi >= self.offset + self.len {
            return;
        }
        let keep_bits = if hi < self.offset { 0 } else { hi - self.offset + 1 };
        let full = (keep_bits / 64) as usize;
        for (wi, w) in self.words.iter_mut().enumerate() {
            if wi > full {
                *w = 0;
            } else if wi == full {
                let rem = (keep_bits % 64) as u32;
                *w &= if rem == 0 { 0 } else { u64::MAX >> (64 - rem) };
            }
        }
    }

    fn mask_tail(&mut self) {
        let bits = self.len + 1;
        let rem = (bits % 64) as u32;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= u64::MAX >> (64 - rem);
            }
        }
    }

    /// OR the bits of `src` into self, with src bit j landing at self bit
    /// j + shift. Bits falling outside the window are dropped.
    fn or_shifted(&mut self, src: &SumsetBitmap, shift: i128) {
        let dst_bits = self.len as i128 + 1;
        let src_bits = src.len as i128 + 1;
        let lo_bit = shift.max(0);
        let hi_bit = (src_bits + shift).min(dst_bits);
        if lo_bit >= hi_bit {
            return;
        }
        let w_lo = (lo_bit / 64) as usize;
        let w_hi = ((hi_bit - 1) / 64) as usize;
        for wi in w_lo..=w_hi {
            let piece = gather(&src.words, wi as i128 * 64 - shift);
            self.words[wi] |= piece;
        }
        self.mask_tail();
    }

    /// Little-endian packed words prefixed by offset and len as 64-bit values.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 + self.words.len() * 8);
        out.extend_from_slice(&self.offset.to_le_bytes());
        out.extend_from_slice(&self.len.to_le_bytes());
        for w in &self.words {
            out.extend_from_slice(&w.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<SumsetBitmap> {
        if bytes.len() < 16 || !(bytes.len() - 16).is_multiple_of(8) {
            return Err(Error::Internal("truncated bitmap serialization".into()));
        }
        let offset = u64::from_le_bytes(bytes[0..8].try_into().unwrap());
        let len = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
        let words: Vec<u64> = bytes[16..]
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        if words.len() != words_for(len + 1) {
            return Err(Error::Internal("bitmap word count mismatch".into()));
        }
        let mut s = SumsetBitmap { offset, len, words };
        s.mask_tail();
        Ok(s)
    }
}

struct BitIter {
    word: u64,
}

impl Iterator for BitIter {
    type Item = u32;
    fn next(&mut self) -> Option<u32> {
        if self.word == 0 {
            return None;
        }
        let b = self.word.trailing_zeros();
        self.word &= self.word - 1;
        Some(b)
    }
}

/// Clipped Boolean convolution: {a + b : a in A, b in B} intersected with
/// `clip`. The result window starts at max(clip.lo, A.offset + B.offset) and
/// is identical across backends.
pub fn bool_convolve(
    a: &SumsetBitmap,
    b: &SumsetBitmap,
    clip: ValueWindow,
    cfg: &ConvConfig,
    ctr: &mut WorkCounters,
) -> Result<SumsetBitmap> {
    let base = a.offset + b.offset;
    let offset = clip.lo.max(base);
    let hi = clip.hi.min(base + a.len + b.len);
    ctr.record_conv(a.len + 1, b.len + 1, hi.saturating_sub(offset) + 1);
    if clip.is_empty() || hi < offset || a.is_empty_set() || b.is_empty_set() {
        // content-empty result, window clamped inside the clip range
        return Ok(SumsetBitmap::new_empty(clip.lo.min(clip.hi), 0));
    }
    let needed = hi - offset + 1;
    if needed > cfg.memory_cap {
        return Err(Error::WindowOverflow { needed, cap: cfg.memory_cap });
    }

    let use_ntt = match cfg.backend {
        Backend::ShiftOr => false,
        Backend::Ntt => true,
        Backend::Auto => {
            if needed <= cfg.ntt_threshold {
                false
            } else {
                // cost models calibrated on dense operands: shift-OR is one
                // window-width pass per set bit of the sparser operand; the
                // NTT's three transforms cost ~6.5 word-op units per
                // (length x log) at the padded length
                let nnz = a.count().min(b.count());
                let shift_or_cost = 2 * nnz as u128 * (needed as u128 / 64 + 1);
                // operands are trimmed to the output window before the
                // transform, so the padded length sees the clipped sizes
                let ntt_len =
                    ((a.len + 1).min(needed) + (b.len + 1).min(needed)).next_power_of_two();
                let ntt_cost = 5 * ntt_len as u128 * ntt_len.ilog2() as u128;
                shift_or_cost > ntt_cost
            }
        }
    };

    let mut out = SumsetBitmap::new_empty(offset, hi - offset);
    let start = std::time::Instant::now();
    if use_ntt {
        convolve_ntt(a, b, &mut out)?;
    } else {
        convolve_shift_or(a, b, &mut out);
    }
    let ns = start.elapsed().as_nanos() as u64;
    ctr.record_conv_time(needed, ns);
    if use_ntt {
        ctr.conv_ns_ntt += ns;
    } else {
        ctr.conv_ns_shift_or += ns;
    }
    Ok(out)
}

fn convolve_shift_or(a: &SumsetBitmap, b: &SumsetBitmap, out: &mut SumsetBitmap) {
    // iterate set values of the sparser operand, shift-OR the denser one
    let (dense, sparse) = if a.count() >= b.count() { (a, b) } else { (b, a) };
    for v in sparse.iter() {
        let shift = (dense.offset + v) as i128 - out.offset as i128;
        out.or_shifted(dense, shift);
    }
}

fn convolve_ntt(a: &SumsetBitmap, b: &SumsetBitmap, out: &mut SumsetBitmap) -> Result<()> {
    let la = (a.len + 1) as usize;
    let lb = (b.len + 1) as usize;
    let base = a.offset + b.offset;
    // trim each operand to the coefficient range that can reach the output
    // window; this halves the transform size for clipped combines
    let olo = (out.offset - base) as usize;
    let ohi = (out.offset + out.len - base) as usize;
    let a_lo = olo.saturating_sub(lb - 1).min(la - 1);
    let a_hi = ohi.min(la - 1);
    let b_lo = olo.saturating_sub(la - 1).min(lb - 1);
    let b_hi = ohi.min(lb - 1);
    let (la, lb) = (a_hi - a_lo + 1, b_hi - b_lo + 1);

    let size = (la + lb - 1).next_power_of_two();
    if size > ntt::MAX_LEN {
        return Err(Error::WindowOverflow {
            needed: size as u64,
            cap: ntt::MAX_LEN as u64,
        });
    }
    let mut ca = vec![0u64; la];
    for v in a.iter() {
        let idx = (v - a.offset) as usize;
        if (a_lo..=a_hi).contains(&idx) {
            ca[idx - a_lo] = 1;
        }
    }
    let mut cb = vec![0u64; lb];
    for v in b.iter() {
        let idx = (v - b.offset) as usize;
        if (b_lo..=b_hi).contains(&idx) {
            cb[idx - b_lo] = 1;
        }
    }
    let prod = ntt::multiply_01(&ca, &cb);
    let base = base + (a_lo + b_lo) as u64;
    for (idx, &c) in prod.iter().enumerate() {
        if c > 0 {
            let v = base + idx as u64;
            if v >= out.offset && v <= out.offset + out.len {
                out.insert(v);
            }
        }
    }
    Ok(())
}

/// Union src into dst. The src window must be contained in dst's window.
pub fn union_into(dst: &mut SumsetBitmap, src: &SumsetBitmap) -> Result<()> {
    if src.offset < dst.offset || src.offset + src.len > dst.offset + dst.len {
        return Err(Error::WindowMismatch {
            src_lo: src.offset,
            src_hi: src.offset + src.len,
            dst_lo: dst.offset,
            dst_hi: dst.offset + dst.len,
        });
    }
    dst.or_shifted(src, (src.offset - dst.offset) as i128);
    Ok(())
}

/// Point membership of z in A[bit range] + B, evaluated word-parallel.
/// This is the [z, z]-clipped convolution specialized to a single output bit.
fn range_hit(a: &SumsetBitmap, b: &SumsetBitmap, z: u64, p_lo: u64, p_hi: u64) -> Option<u64> {
    // r = index arithmetic target: bit j of a-word wi pairs with b bit (r - wi*64 - j)
    let r = z as i128 - a.offset as i128 - b.offset as i128;
    let w_lo = (p_lo / 64) as usize;
    let w_hi = (p_hi / 64) as usize;
    for wi in w_lo..=w_hi {
        let mut aw = a.words[wi];
        if wi == w_lo {
            aw &= u64::MAX << (p_lo % 64);
        }
        if wi == w_hi {
            let rem = (p_hi % 64) as u32;
            aw &= if rem == 63 { u64::MAX } else { u64::MAX >> (63 - rem) };
        }
        if aw == 0 {
            continue;
        }
        let s = r - wi as i128 * 64;
        let mask = gather(&b.words, s - 63).reverse_bits();
        let hits = aw & mask;
        if hits != 0 {
            return Some(a.offset + wi as u64 * 64 + hits.trailing_zeros() as u64);
        }
    }
    None
}

/// Deterministic witness for z in A + B: binary-search halving over A's
/// window, testing z-membership of each half's clipped sumset with B and
/// recursing into the lower half on a hit. The returned a is the minimum
/// element of A participating in any witness pair for z.
pub fn witness_search(
    a: &SumsetBitmap,
    b: &SumsetBitmap,
    z: u64,
    _cfg: &ConvConfig,
    ctr: &mut WorkCounters,
) -> Result<(u64, u64)> {
    ctr.witness_queries += 1;
    // candidate a-values: a in [z - max(B), z - min(B)] intersected with A's window
    if z < b.offset {
        return Err(Error::NoWitness { z });
    }
    let va_hi = (z - b.offset).min(a.offset + a.len);
    let va_lo = z.saturating_sub(b.offset + b.len).max(a.offset);
    if va_lo > va_hi {
        return Err(Error::NoWitness { z });
    }
    let mut p_lo = va_lo - a.offset;
    let mut p_hi = va_hi - a.offset;
    if range_hit(a, b, z, p_lo, p_hi).is_none() {
        return Err(Error::NoWitness { z });
    }
    while p_lo < p_hi {
        let mid = p_lo + (p_hi - p_lo) / 2;
        if range_hit(a, b, z, p_lo, mid).is_some() {
            p_hi = mid;
        } else {
            p_lo = mid + 1;
        }
    }
    let av = a.offset + p_lo;
    let bv = z - av;
    debug_assert!(a.contains(av) && b.contains(bv) && av + bv == z);
    if !(a.contains(av) && b.contains(bv)) {
        return Err(Error::NoWitness { z });
    }
    Ok((av, bv))
}
