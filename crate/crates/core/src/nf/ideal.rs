use super::{FieldElement, NumberField};
use crate::error::{Error, Result};
use crate::linalg::{hnf, ZMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Integral ideal stored as a row-style HNF over the integral basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    pub hnf: ZMatrix,
    pub norm: BigInt,
}

impl Ideal {
    pub fn unit(nf: &NumberField) -> Ideal {
        Ideal::from_generators(nf, &[nf.one()]).expect("unit ideal")
    }

    /// Ideal generated by integral elements (their Z-span times the basis).
    pub fn from_generators(nf: &NumberField, gens: &[FieldElement]) -> Result<Ideal> {
        let mut rows = Vec::new();
        for g in gens {
            if !g.is_integral() {
                return Err(Error::Precondition("ideal generator not integral".into()));
            }
            for i in 0..nf.degree {
                rows.push(nf.mul(g, &nf.basis_element(i)).int_coords());
            }
        }
        Ideal::from_rows(rows, nf.degree)
    }

    pub fn principal(nf: &NumberField, g: &FieldElement) -> Result<Ideal> {
        Ideal::from_generators(nf, std::slice::from_ref(g))
    }

    fn from_rows(rows: ZMatrix, d: usize) -> Result<Ideal> {
        let h = hnf(&rows, d).ok_or_else(|| Error::Precondition("zero ideal".into()))?;
        let norm = (0..d).fold(BigInt::one(), |a, i| a * &h[i][i]);
        Ok(Ideal { hnf: h, norm })
    }

    pub fn mul(&self, nf: &NumberField, other: &Ideal) -> Ideal {
        let mut rows = Vec::new();
        for a in &self.hnf {
            let x = FieldElement { c: a.iter().map(|v| BigRational::from_integer(v.clone())).collect() };
            for b in &other.hnf {
                let y = FieldElement { c: b.iter().map(|v| BigRational::from_integer(v.clone())).collect() };
                rows.push(nf.mul(&x, &y).int_coords());
            }
        }
        Ideal::from_rows(rows, nf.degree).expect("product of nonzero ideals")
    }

    pub fn pow(&self, nf: &NumberField, e: u32) -> Ideal {
        (0..e).fold(Ideal::unit(nf), |acc, _| acc.mul(nf, self))
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        if !x.is_integral() {
            return false;
        }
        let mut v = x.int_coords();
        for (col, row) in self.hnf.iter().enumerate() {
            let (qt, r) = v[col].div_rem(&row[col]);
            if !r.is_zero() {
                return false;
            }
            for (a, b) in v.iter_mut().zip(row) {
                *a -= &qt * b;
            }
        }
        v.iter().all(Zero::is_zero)
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other.hnf.iter().all(|r| {
            self.contains(&FieldElement { c: r.iter().map(|v| BigRational::from_integer(v.clone())).collect() })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::builtin_field;

    #[test]
    fn norms_and_membership() {
        let f = builtin_field("Q(sqrt2)").unwrap();
        let o = Ideal::unit(&f);
        assert_eq!(o.norm, BigInt::from(1));
        assert!(o.contains(&f.one()));
        let p = Ideal::principal(&f, &FieldElement::from_ints(&[3, 1])).unwrap();
        assert_eq!(p.norm, BigInt::from(7));
        assert!(p.contains(&FieldElement::from_ints(&[7, 0])));
        assert!(!p.contains(&FieldElement::from_ints(&[3, -1])));
        let five = Ideal::principal(&f, &f.from_int(5)).unwrap();
        assert_eq!(five.mul(&f, &p).norm, BigInt::from(175));
        assert!(!p.contains(&FieldElement { c: vec![BigRational::new(7.into(), 2.into()), BigRational::zero()] }));
    }
}
