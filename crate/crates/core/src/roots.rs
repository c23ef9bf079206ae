//! Roots of unity carried as exact reduced phases.

use crate::modarith::gcd;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

/// `e(num/den)` with `0 <= num < den` and `gcd(num, den) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExactRootOfUnity {
    pub num: u64,
    pub den: u64,
}

impl ExactRootOfUnity {
    pub const ONE: ExactRootOfUnity = ExactRootOfUnity { num: 0, den: 1 };

    pub fn new(num: i128, den: u64) -> Self {
        assert!(den > 0);
        let n = num.rem_euclid(den as i128) as u64;
        let g = gcd(n, den);
        let g = if g == 0 { den } else { g };
        ExactRootOfUnity { num: n / g, den: den / g }
    }

    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    pub fn mul(&self, o: &Self) -> Self {
        let l = self.den / gcd(self.den, o.den) * o.den;
        let a = self.num as i128 * (l / self.den) as i128 + o.num as i128 * (l / o.den) as i128;
        Self::new(a, l)
    }

    pub fn pow(&self, t: i64) -> Self {
        Self::new(self.num as i128 * t as i128, self.den)
    }

    pub fn conj(&self) -> Self {
        self.pow(-1)
    }

    /// Galois action `e(a/m) -> e(t a/m)`; identical to `pow` for `t` coprime to the order.
    pub fn galois(&self, t: i64) -> Self {
        self.pow(t)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(1.0, std::f64::consts::TAU * self.num as f64 / self.den as f64)
    }

    /// Valuation of the order at `p`.
    pub fn p_order_exp(&self, p: u64) -> u32 {
        let mut d = self.den;
        let mut v = 0;
        while d % p == 0 {
            d /= p;
            v += 1;
        }
        v
    }

    /// Split into `(a, m)` with `den = a * p^m` and `p` not dividing `a`.
    pub fn split(&self, p: u64) -> (u64, u32) {
        let m = self.p_order_exp(p);
        (self.den / p.pow(m), m)
    }
}

impl fmt::Display for ExactRootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({}/{})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phases_add() {
        let a = ExactRootOfUnity::new(1, 5);
        let b = ExactRootOfUnity::new(3, 10);
        assert_eq!(a.mul(&b), ExactRootOfUnity::new(1, 2));
        assert_eq!(a.pow(5), ExactRootOfUnity::ONE);
        assert_eq!(a.conj(), ExactRootOfUnity::new(4, 5));
        assert_eq!(ExactRootOfUnity::new(7, 50).split(5), (2, 2));
        assert!((a.to_complex().norm() - 1.0).abs() < 1e-15);
    }
}
