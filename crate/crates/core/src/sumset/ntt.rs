//! Number-theoretic transform over a word-sized prime, used as the exact
//! large-window backend for 0-1 polynomial multiplication. Floating-point FFT
//! is deliberately not used anywhere.

/// 15 * 2^27 + 1, prime; supports transforms up to length 2^27.
pub const P: u64 = 2_013_265_921;
/// Primitive root of P.
const ROOT: u64 = 31;
pub const MAX_LEN: usize = 1 << 27;

// operands stay below P < 2^31, so the product fits u64 and the constant
// modulus reduces to a multiply-shift
fn mul_mod(a: u64, b: u64) -> u64 {
    (a * b) % P
}

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1u64;
    base %= P;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

/// Shoup's precomputed-quotient modular multiplication: ws = floor(w << 64 / P);
/// one high multiply replaces the division. Requires a < P, w < P.
#[inline]
fn mul_shoup(a: u64, w: u64, ws: u64) -> u64 {
    let q = ((ws as u128 * a as u128) >> 64) as u64;
    let r = w.wrapping_mul(a).wrapping_sub(q.wrapping_mul(P));
    if r >= P {
        r - P
    } else {
        r
    }
}

fn shoup(w: u64) -> u64 {
    (((w as u128) << 64) / P as u128) as u64
}

/// Twiddle factors for all levels, flattened: entry half + k holds
/// (w_len^k, shoup) with half = len / 2. Built once per thread and grown on
/// demand; the prime and root are fixed, so the table is input-independent.
#[derive(Default)]
struct Twiddles {
    n: usize,
    fwd: Vec<(u64, u64)>,
    inv: Vec<(u64, u64)>,
}

fn build_table(n: usize, invert: bool) -> Vec<(u64, u64)> {
    let mut out = vec![(0, 0); n.max(2)];
    let mut len = 2;
    while len <= n {
        let mut w = pow_mod(ROOT, (P - 1) / len as u64);
        if invert {
            w = pow_mod(w, P - 2);
        }
        let half = len / 2;
        let mut cur = 1u64;
        for k in 0..half {
            out[half + k] = (cur, shoup(cur));
            cur = mul_mod(cur, w);
        }
        len <<= 1;
    }
    out
}

thread_local! {
    static TWIDDLES: std::cell::RefCell<Twiddles> = std::cell::RefCell::new(Twiddles::default());
}

/// In-place iterative radix-2 NTT. `a.len()` must be a power of two <= MAX_LEN.
fn ntt(a: &mut [u64], invert: bool) {
    let n = a.len();
    debug_assert!(n.is_power_of_two() && n <= MAX_LEN);

    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }

    TWIDDLES.with(|cell| {
        let mut tw = cell.borrow_mut();
        if tw.n < n {
            tw.fwd = build_table(n, false);
            tw.inv = build_table(n, true);
            tw.n = n;
        }
        let table = if invert { &tw.inv } else { &tw.fwd };

        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let roots = &table[half..len];
            for block in a.chunks_exact_mut(len) {
                let (lo, hi) = block.split_at_mut(half);
                for k in 0..half {
                    let u = lo[k];
                    let (w, ws) = roots[k];
                    let v = mul_shoup(hi[k], w, ws);
                    lo[k] = if u + v >= P { u + v - P } else { u + v };
                    hi[k] = if u >= v { u - v } else { u + P - v };
                }
            }
            len <<= 1;
        }
    });

    if invert {
        let n_inv = pow_mod(n as u64, P - 2);
        for x in a.iter_mut() {
            *x = mul_mod(*x, n_inv);
        }
    }
}

/// Multiply two 0/1 coefficient vectors exactly. Coefficients of the true
/// product are pair counts bounded by min(|a|, |b|) < P, so a single prime
/// recovers them without loss.
pub fn multiply_01(a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    assert!(size <= MAX_LEN, "ntt size {size} exceeds supported maximum");
    let mut fa = vec![0u64; size];
    let mut fb = vec![0u64; size];
    fa[..a.len()].copy_from_slice(a);
    fb[..b.len()].copy_from_slice(b);
    ntt(&mut fa, false);
    ntt(&mut fb, false);
    for i in 0..size {
        fa[i] = mul_mod(fa[i], fb[i]);
    }
    ntt(&mut fa, true);
    fa.truncate(out_len);
    fa
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    #[test]
    fn matches_naive_on_small_inputs() {
        let a = [1, 0, 1, 1, 0, 1, 1, 1];
        let b = [1, 1, 0, 0, 1];
        assert_eq!(multiply_01(&a, &b), naive(&a, &b));
    }

    #[test]
    fn counts_are_exact() {
        // all-ones squared: coefficient k is min(k+1, n, 2n-1-k)
        let n = 300;
        let a = vec![1u64; n];
        let got = multiply_01(&a, &a);
        for (k, &c) in got.iter().enumerate() {
            let expect = (k + 1).min(n).min(2 * n - 1 - k) as u64;
            assert_eq!(c, expect, "coefficient {k}");
        }
    }
}
