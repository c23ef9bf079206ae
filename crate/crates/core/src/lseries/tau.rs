//! Ramanujan's tau function from the eta product.

use crate::modarith::{inv_mod, mul_mod};
use std::sync::{Arc, Mutex, OnceLock};

const P1: u64 = 4_611_686_018_427_387_847;
const P2: u64 = 4_611_686_018_427_387_817;

/// Coefficients of `prod (1-q^n)^24` modulo `md`, up to `q^len`.
///
/// Uses `prod (1-q^n)^3 = sum (-1)^k (2k+1) q^{k(k+1)/2}` and the power recurrence
/// `n g_n = sum_j (9j - n) a_j g_{n-j}` for `g = a^8`.
fn eta24_mod(len: usize, md: u64) -> Vec<u64> {
    let mut tri = Vec::new();
    let mut k = 0u64;
    while (k * (k + 1) / 2) as usize <= len {
        let c = if k % 2 == 0 { 2 * k + 1 } else { md - (2 * k + 1) };
        tri.push(((k * (k + 1) / 2) as usize, c));
        k += 1;
    }
    let mut g = vec![0u64; len + 1];
    g[0] = 1;
    for n in 1..=len {
        let mut acc: u128 = 0;
        for &(j, aj) in tri.iter().skip(1) {
            if j > n {
                break;
            }
            let coef = (9 * j as i64 - n as i64).rem_euclid(md as i64) as u64;
            acc += mul_mod(mul_mod(coef, aj, md), g[n - j], md) as u128;
            if acc >= (1u128 << 126) {
                acc %= md as u128;
            }
        }
        let s = (acc % md as u128) as u64;
        g[n] = mul_mod(s, inv_mod(n as u64 % md, md).unwrap(), md);
    }
    g
}

fn crt(r1: u64, r2: u64) -> i128 {
    let inv = inv_mod(P1 % P2, P2).unwrap();
    let diff = (r2 as i128 - r1 as i128).rem_euclid(P2 as i128) as u64;
    let t = mul_mod(diff, inv, P2);
    let x = r1 as u128 + P1 as u128 * t as u128;
    let big = P1 as u128 * P2 as u128;
    if x > big / 2 {
        -((big - x) as i128)
    } else {
        x as i128
    }
}

/// `tau(0..=nmax)` with `tau(0) = 0`, exact.
pub fn tau_table(nmax: usize) -> Arc<Vec<i128>> {
    static CACHE: OnceLock<Mutex<Option<Arc<Vec<i128>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(None));
    let mut guard = cache.lock().unwrap();
    if let Some(t) = guard.as_ref() {
        if t.len() > nmax {
            return t.clone();
        }
    }
    let len = nmax.max(16);
    let (a, b) = rayon::join(|| eta24_mod(len, P1), || eta24_mod(len, P2));
    let mut out = vec![0i128; len + 1];
    for n in 1..=len {
        out[n] = crt(a[n - 1], b[n - 1]);
    }
    let t = Arc::new(out);
    *guard = Some(t.clone());
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Naive expansion of `q prod (1-q^n)^24` as an independent check.
    fn naive(len: usize) -> Vec<i128> {
        let mut s = vec![0i128; len];
        s[0] = 1;
        for n in 1..len {
            for _ in 0..24 {
                for i in (n..len).rev() {
                    s[i] -= s[i - n];
                }
            }
        }
        let mut out = vec![0i128; len + 1];
        out[1..].copy_from_slice(&s);
        out
    }

    #[test]
    fn small_values() {
        let t = tau_table(100);
        assert_eq!(t[1], 1);
        assert_eq!(t[2], -24);
        assert_eq!(t[3], 252);
        assert_eq!(t[6], -6048);
        assert_eq!(&t[..60], &naive(59)[..60]);
    }

    #[test]
    fn multiplicative_spot_checks() {
        let t = tau_table(2000);
        assert_eq!(t[35], t[5] * t[7]);
        assert_eq!(t[4], t[2] * t[2] - 2048);
        assert_eq!(t[1001], t[7] * t[11] * t[13]);
    }
}
