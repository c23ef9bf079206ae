use super::{FieldElement, Ideal, NumberField};
use crate::error::{Error, Result};
use crate::modarith::inv_mod;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Identification of `O/p^m` with `Z/p^m` for a prime of residue degree one.
#[derive(Clone, Debug)]
pub struct LocalIso {
    pub p: u64,
    pub m: u32,
    pub modulus: u64,
    pub prime: Ideal,
    /// Image of the power-basis generator.
    pub root: u64,
    basis_img: Vec<u64>,
}

fn eval_mod(f: &[BigInt], r: u64, md: u64) -> u64 {
    let mdb = BigInt::from(md);
    f.iter().rev().fold(BigInt::zero(), |acc, c| (acc * r + c).mod_floor(&mdb)).to_u64().unwrap()
}

impl LocalIso {
    pub fn new(nf: &NumberField, p: u64, prime: &Ideal, m: u32) -> Result<LocalIso> {
        if p % 2 == 0 || (&nf.discriminant % p).is_zero() {
            return Err(Error::Precondition(format!("p={p} must be odd and unramified")));
        }
        if prime.norm != BigInt::from(p) {
            return Err(Error::NotSplit { p });
        }
        let modulus = p.checked_pow(m).filter(|&x| x < (1u64 << 62)).ok_or_else(|| Error::Unsupported("p^m too large".into()))?;
        let f = &nf.min_poly;
        let df: Vec<BigInt> = f.iter().enumerate().skip(1).map(|(i, c)| c * i).collect();
        let mut found = None;
        for r in 0..p {
            if eval_mod(f, r, p) != 0 {
                continue;
            }
            let probe = LocalIso::with_root(nf, p, 1, prime.clone(), r);
            if probe.as_ref().is_some_and(|li| prime.hnf.iter().all(|row| li.reduce_int(row) == Some(0))) {
                found = Some(r);
                break;
            }
        }
        let r0 = found.ok_or(Error::NotSplit { p })?;
        let dv = eval_mod(&df, r0, p);
        if dv == 0 {
            return Err(Error::LiftFailed(format!("derivative vanishes at root {r0} mod {p}")));
        }
        let mut r = r0;
        let mut pk = p;
        for _ in 1..m {
            pk *= p;
            let fv = eval_mod(f, r, pk);
            let d = inv_mod(eval_mod(&df, r, pk), pk).ok_or_else(|| Error::LiftFailed("non-unit derivative".into()))?;
            r = ((r as u128 + pk as u128 - (fv as u128 * d as u128 % pk as u128)) % pk as u128) as u64;
        }
        if eval_mod(f, r, modulus) != 0 {
            return Err(Error::LiftFailed(format!("root {r} does not satisfy the polynomial mod {modulus}")));
        }
        let li = LocalIso::with_root(nf, p, m, prime.clone(), r).ok_or_else(|| Error::LiftFailed("basis not p-integral".into()))?;
        let pm = prime.pow(nf, m);
        if pm.hnf.iter().any(|row| li.reduce_int(row) != Some(0)) {
            return Err(Error::LiftFailed("kernel check failed".into()));
        }
        Ok(li)
    }

    fn with_root(nf: &NumberField, p: u64, m: u32, prime: Ideal, r: u64) -> Option<LocalIso> {
        let modulus = p.pow(m);
        let basis_img = nf
            .basis
            .iter()
            .map(|row| {
                let mut acc = 0u128;
                for c in row.iter().rev() {
                    acc = (acc * r as u128 + rat_mod(c, modulus)? as u128) % modulus as u128;
                }
                Some(acc as u64)
            })
            .collect::<Option<Vec<u64>>>()?;
        Some(LocalIso { p, m, modulus, prime, root: r, basis_img })
    }

    /// The same identification at a lower level.
    pub fn at_level(&self, m: u32) -> LocalIso {
        assert!(m <= self.m);
        let md = self.p.pow(m);
        LocalIso {
            p: self.p,
            m,
            modulus: md,
            prime: self.prime.clone(),
            root: self.root % md,
            basis_img: self.basis_img.iter().map(|b| b % md).collect(),
        }
    }

    fn reduce_int(&self, v: &[BigInt]) -> Option<u64> {
        let mdb = BigInt::from(self.modulus);
        let mut acc = 0u128;
        for (c, b) in v.iter().zip(&self.basis_img) {
            acc += c.mod_floor(&mdb).to_u64()? as u128 * *b as u128 % self.modulus as u128;
        }
        Some((acc % self.modulus as u128) as u64)
    }

    /// Image in `Z/p^m`; `None` when a coordinate denominator is divisible by p.
    pub fn reduce(&self, x: &FieldElement) -> Option<u64> {
        let mut acc = 0u128;
        for (c, b) in x.c.iter().zip(&self.basis_img) {
            acc += rat_mod(c, self.modulus)? as u128 * *b as u128 % self.modulus as u128;
        }
        Some((acc % self.modulus as u128) as u64)
    }
}

/// `a/b mod n` for `b` coprime to `n`.
pub fn rat_mod(c: &BigRational, n: u64) -> Option<u64> {
    let nb = BigInt::from(n);
    let num = c.numer().mod_floor(&nb).to_u64()?;
    let den = c.denom().mod_floor(&nb).to_u64()?;
    let di = inv_mod(den, n)?;
    Some((num as u128 * di as u128 % n as u128) as u64)
}

/// Fractional part of the trace, in `[0, 1)`.
pub fn frac_trace(nf: &NumberField, x: &FieldElement) -> BigRational {
    let t = nf.trace(x);
    &t - BigRational::from_integer(t.floor().to_integer())
}

/// Finite-part additive character `e(-{Tr x})`.
pub fn efin(nf: &NumberField, x: &FieldElement) -> Complex64 {
    let f = frac_trace(nf, x).to_f64().unwrap();
    Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::builtin_field;

    #[test]
    fn rational_identity_map() {
        let f = builtin_field("Q").unwrap();
        let p = Ideal::principal(&f, &f.from_int(5)).unwrap();
        let li = LocalIso::new(&f, 5, &p, 2).unwrap();
        assert_eq!(li.modulus, 25);
        assert_eq!(li.reduce(&f.from_int(31)), Some(6));
        assert_eq!(li.reduce(&f.from_rational(BigRational::new(1.into(), 2.into()))), Some(13));
        assert_eq!(li.reduce(&f.from_rational(BigRational::new(1.into(), 5.into()))), None);
    }

    #[test]
    fn sqrt2_roots_mod_seven() {
        let f = builtin_field("Q(sqrt2)").unwrap();
        let p_minus = Ideal::principal(&f, &FieldElement::from_ints(&[3, -1])).unwrap();
        assert_eq!(LocalIso::new(&f, 7, &p_minus, 1).unwrap().root, 3);
        let p_plus = Ideal::principal(&f, &FieldElement::from_ints(&[3, 1])).unwrap();
        let li = LocalIso::new(&f, 7, &p_plus, 2).unwrap();
        assert!(li.root == 10 || li.root == 39);
        assert_eq!(li.root * li.root % 49, 2);
        assert_eq!(li.at_level(1).root, 4);
    }

    #[test]
    fn efin_values() {
        let f = builtin_field("Q").unwrap();
        assert!((efin(&f, &f.from_int(3)) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let z = efin(&f, &f.from_rational(BigRational::new(1.into(), 5.into())));
        let want = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI / 5.0);
        assert!((z - want).norm() < 1e-15);
        let g = builtin_field("Q(sqrt2)").unwrap();
        // (3+sqrt2)/49 has trace 6/49
        let x = FieldElement::from_ints(&[3, 1]).scale(&BigRational::new(1.into(), 49.into()));
        assert_eq!(frac_trace(&g, &x), BigRational::new(6.into(), 49.into()));
    }
}
