//! Polynomial helpers for the defining polynomial.

use crate::linalg::{vec_mat, QMatrix};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

type QPoly = Vec<BigRational>;

fn trim(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn rem(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    let lb = b.last().unwrap().clone();
    while r.len() >= b.len() {
        let f = r.last().unwrap() / &lb;
        let off = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[off + i] -= &f * c;
        }
        r.pop();
        r = trim(r);
    }
    r
}

pub fn is_squarefree(f: &[BigInt]) -> bool {
    let a: QPoly = f.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let da: QPoly = trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect(),
    );
    if da.is_empty() {
        return a.len() == 2;
    }
    let (mut x, mut y) = (trim(a), da);
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    x.len() == 1
}

/// Power-basis product reduced modulo the monic polynomial `f`.
fn power_mul(a: &[BigRational], b: &[BigRational], f: &[BigInt]) -> Vec<BigRational> {
    let d = f.len() - 1;
    let mut prod = vec![BigRational::zero(); 2 * d];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    for k in (d..2 * d).rev() {
        let c = std::mem::take(&mut prod[k]);
        if c.is_zero() {
            continue;
        }
        for (i, fi) in f.iter().take(d).enumerate() {
            prod[k - d + i] -= &c * BigRational::from_integer(fi.clone());
        }
    }
    prod.truncate(d);
    prod
}

pub fn mult_table(f: &[BigInt], basis: &QMatrix, basis_inv: &QMatrix) -> Vec<Vec<Vec<BigRational>>> {
    basis
        .iter()
        .map(|bi| basis.iter().map(|bj| vec_mat(&power_mul(bi, bj, f), basis_inv)).collect())
        .collect()
}

/// Complex roots by Durand-Kerner, ordered real (descending), then upper half plane, then conjugates.
pub fn roots(f: &[BigInt]) -> Vec<Complex64> {
    let d = f.len() - 1;
    let c: Vec<f64> = f.iter().map(|x| x.to_f64().unwrap()).collect();
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a);
    let bound = 1.0 + c[..d].iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let mut z: Vec<Complex64> =
        (0..d).map(|k| Complex64::from_polar(bound * 0.9, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / d as f64)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..d {
            let den = (0..d).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * bound {
            break;
        }
    }
    let tol = 1e-9 * bound;
    let mut real: Vec<f64> = z.iter().filter(|w| w.im.abs() < tol).map(|w| w.re).collect();
    real.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut upper: Vec<Complex64> = z.iter().filter(|w| w.im >= tol).copied().collect();
    upper.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
    let mut out: Vec<Complex64> = real.into_iter().map(|r| Complex64::new(r, 0.0)).collect();
    out.extend(upper.iter().copied());
    out.extend(upper.iter().map(|w| w.conj()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn squarefree_detection() {
        assert!(is_squarefree(&zp(&[-2, 0, 1])));
        assert!(!is_squarefree(&zp(&[1, 2, 1])));
        assert!(is_squarefree(&zp(&[0, 1])));
    }

    #[test]
    fn roots_of_quadratic_and_cubic() {
        let r = roots(&zp(&[-2, 0, 1]));
        assert!((r[0].re - 2f64.sqrt()).abs() < 1e-12 && (r[1].re + 2f64.sqrt()).abs() < 1e-12);
        let r = roots(&zp(&[-2, 0, 0, 1]));
        assert_eq!(r.len(), 3);
        assert!(r[0].im == 0.0 && r[1].im > 0.0 && r[2].im < 0.0);
    }
}
