//! Arithmetic in `Z/n` for moduli below 2^62.

use std::collections::HashMap;

pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    (a as u128 * b as u128 % n as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    b %= n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, n);
        }
        b = mul_mod(b, b, n);
        e >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn inv_mod(a: u64, n: u64) -> Option<u64> {
    let (mut r0, mut r1) = (n as i128, (a % n) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let qt = r0 / r1;
        (r0, r1) = (r1, r0 - qt * r1);
        (t0, t1) = (t1, t0 - qt * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(n as i128) as u64)
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == vec![n]
}

/// Smallest generator of the cyclic group `(Z/p^m)^x`, p odd.
pub fn primitive_root(p: u64, m: u32) -> u64 {
    let n = p.pow(m);
    let phi = n / p * (p - 1);
    let fs = prime_factors(phi);
    (2..n)
        .find(|&g| g % p != 0 && fs.iter().all(|&f| pow_mod(g, phi / f, n) != 1))
        .expect("odd prime powers have primitive roots")
}

/// Discrete logarithms to a fixed base in a cyclic group of known order.
#[derive(Clone, Debug)]
pub struct Bsgs {
    pub base: u64,
    pub modulus: u64,
    pub order: u64,
    step: u64,
    giant: u64,
    table: HashMap<u64, u64>,
}

impl Bsgs {
    pub fn new(base: u64, modulus: u64, order: u64) -> Bsgs {
        let step = (order as f64).sqrt().ceil() as u64 + 1;
        let mut table = HashMap::with_capacity(step as usize);
        let mut x = 1 % modulus;
        for j in 0..step {
            table.entry(x).or_insert(j);
            x = mul_mod(x, base, modulus);
        }
        let giant = inv_mod(pow_mod(base, step, modulus), modulus).expect("unit base");
        Bsgs { base, modulus, order, step, giant, table }
    }

    pub fn log(&self, a: u64) -> Option<u64> {
        let mut y = a % self.modulus;
        for i in 0..=self.order / self.step + 1 {
            if let Some(j) = self.table.get(&y) {
                return Some((i * self.step + j) % self.order);
            }
            y = mul_mod(y, self.giant, self.modulus);
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(5, 1), 2);
        assert_eq!(primitive_root(5, 3), 2);
        assert_eq!(primitive_root(7, 2), 3);
    }

    #[test]
    fn bsgs_matches_table() {
        let b = Bsgs::new(2, 125, 100);
        let mut x = 1;
        for e in 0..100 {
            assert_eq!(b.log(x), Some(e));
            x = x * 2 % 125;
        }
        assert_eq!(b.log(5), None);
    }

    #[test]
    fn inverses() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(5, 25), None);
    }
}
