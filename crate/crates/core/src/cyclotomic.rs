//! Exact elements of `Z[zeta_N]`, held in `Z[x]/(x^N - 1)` and compared modulo `Phi_N`.

use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclo {
    pub n: usize,
    pub c: Vec<i64>,
}

impl Cyclo {
    pub fn zero(n: usize) -> Cyclo {
        Cyclo { n, c: vec![0; n] }
    }

    pub fn constant(n: usize, a: i64) -> Cyclo {
        let mut z = Cyclo::zero(n);
        z.c[0] = a;
        z
    }

    pub fn monomial(n: usize, j: i64, coef: i64) -> Cyclo {
        let mut z = Cyclo::zero(n);
        z.c[j.rem_euclid(n as i64) as usize] = coef;
        z
    }

    pub fn add_monomial(&mut self, j: i64, coef: i64) {
        self.c[j.rem_euclid(self.n as i64) as usize] += coef;
    }

    pub fn add(&self, o: &Cyclo) -> Cyclo {
        assert_eq!(self.n, o.n);
        Cyclo { n: self.n, c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Cyclo) -> Cyclo {
        assert_eq!(self.n, o.n);
        Cyclo { n: self.n, c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, k: i64) -> Cyclo {
        Cyclo { n: self.n, c: self.c.iter().map(|a| a * k).collect() }
    }

    /// Multiplication by `zeta^j`.
    pub fn shift(&self, j: i64) -> Cyclo {
        let mut out = Cyclo::zero(self.n);
        for (i, &a) in self.c.iter().enumerate() {
            if a != 0 {
                out.add_monomial(i as i64 + j, a);
            }
        }
        out
    }

    pub fn mul(&self, o: &Cyclo) -> Cyclo {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let a: Vec<(usize, i64)> = self.c.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i, x)).collect();
        let b: Vec<(usize, i64)> = o.c.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i, x)).collect();
        let mut out = vec![0i64; n];
        for &(i, x) in &a {
            for &(j, y) in &b {
                let k = i + j;
                out[if k >= n { k - n } else { k }] += x * y;
            }
        }
        Cyclo { n, c: out }
    }

    /// Complex conjugation `zeta -> zeta^{-1}`.
    pub fn conj(&self) -> Cyclo {
        let mut out = Cyclo::zero(self.n);
        for (i, &a) in self.c.iter().enumerate() {
            out.add_monomial(-(i as i64), a);
        }
        out
    }

    /// Galois action `zeta -> zeta^t`.
    pub fn galois(&self, t: i64) -> Cyclo {
        let mut out = Cyclo::zero(self.n);
        for (i, &a) in self.c.iter().enumerate() {
            if a != 0 {
                out.add_monomial(i as i64 * t, a);
            }
        }
        out
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = self.n as f64;
        self.c
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(i, &a)| Complex64::from_polar(a as f64, std::f64::consts::TAU * i as f64 / n))
            .sum()
    }

    /// Canonical remainder modulo `Phi_N`, of length `phi(N)`.
    pub fn reduce(&self) -> Vec<i64> {
        let phi = cyclotomic_poly(self.n);
        let d = phi.len() - 1;
        let mut r = self.c.clone();
        for k in (d..r.len()).rev() {
            let c = r[k];
            if c == 0 {
                continue;
            }
            for (i, &f) in phi.iter().enumerate() {
                r[k - d + i] -= c * f;
            }
        }
        r.truncate(d);
        r
    }

    pub fn eq_exact(&self, o: &Cyclo) -> bool {
        self.sub(o).reduce().iter().all(|&x| x == 0)
    }

    /// The rational integer this element equals, if any.
    pub fn as_integer(&self) -> Option<i64> {
        let r = self.reduce();
        r.iter().skip(1).all(|&x| x == 0).then(|| r.first().copied().unwrap_or(0))
    }
}

fn poly_div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0i64; a.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db] / b[db];
        q[k] = c;
        for (i, &f) in b.iter().enumerate() {
            r[k + i] -= c * f;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_poly(n: usize) -> Vec<i64> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Vec<i64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&n) {
        return v.clone();
    }
    let mut num = vec![0i64; n + 1];
    num[0] = -1;
    num[n] = 1;
    let mut p = num;
    for d in (1..n).filter(|d| n % d == 0) {
        p = poly_div_exact(&p, &cyclotomic_poly(d));
    }
    cache.lock().unwrap().insert(n, p.clone());
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(5), vec![1, 1, 1, 1, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(20).len() - 1, 8);
    }

    #[test]
    fn sum_of_primitive_roots() {
        let mut z = Cyclo::zero(5);
        for j in 1..5 {
            z.add_monomial(j, 1);
        }
        assert_eq!(z.as_integer(), Some(-1));
        // |zeta_5 - 1|^2 is not an integer
        let w = Cyclo::monomial(5, 1, 1).sub(&Cyclo::constant(5, 1));
        assert_eq!(w.mul(&w.conj()).as_integer(), None);
        assert!((z.to_complex().re + 1.0).abs() < 1e-12);
    }
}
