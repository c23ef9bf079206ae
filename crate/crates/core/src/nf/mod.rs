//! Number fields given by an integral basis, their elements and ideals.

mod doc;
mod ideal;
mod local;
mod poly;

pub use doc::{builtin_field, nf_load, FieldDoc, IdealDoc};
pub use ideal::Ideal;
pub use local::{efin, frac_trace, LocalIso};

use crate::error::{Error, Result};
use crate::linalg::{det, inverse, q, vec_mat, QMatrix};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::ops::{Add, Neg, Sub};

/// Coordinates of an element with respect to the integral basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub c: Vec<BigRational>,
}

impl FieldElement {
    pub fn from_ints(v: &[i64]) -> Self {
        FieldElement { c: v.iter().map(|&x| q(x)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.c.iter().all(|x| x.is_integer())
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        FieldElement { c: self.c.iter().map(|x| x * r).collect() }
    }

    /// Integer coordinates; panics on non-integral input.
    pub fn int_coords(&self) -> Vec<BigInt> {
        self.c.iter().map(|x| {
            assert!(x.is_integer(), "non-integral coordinate");
            x.to_integer()
        }).collect()
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        FieldElement { c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        FieldElement { c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { c: self.c.iter().map(|a| -a).collect() }
    }
}

/// A number field with a fixed integral basis and its validated arithmetic data.
#[derive(Clone, Debug)]
pub struct NumberField {
    pub label: String,
    pub degree: usize,
    pub r1: usize,
    pub r2: usize,
    /// Monic defining polynomial, constant term first.
    pub min_poly: Vec<BigInt>,
    /// Row `i` is the `i`-th basis element in the power basis.
    pub basis: QMatrix,
    basis_inv: QMatrix,
    /// `mult[i][j]` holds the coordinates of `b_i * b_j`.
    pub mult: Vec<Vec<Vec<BigRational>>>,
    pub discriminant: BigInt,
    pub class_number: u64,
    pub class_reps: Vec<Ideal>,
    /// Torsion generator first, then fundamental units.
    pub units: Vec<FieldElement>,
    pub different_gen: FieldElement,
    /// Embeddings ordered: real (descending root), complex (upper half plane), then conjugates.
    pub roots: Vec<Complex64>,
    pub emb: Vec<Vec<Complex64>>,
    pub precision_bits: u32,
}

impl NumberField {
    pub fn zero(&self) -> FieldElement {
        FieldElement { c: vec![BigRational::zero(); self.degree] }
    }

    pub fn one(&self) -> FieldElement {
        self.from_rational(BigRational::one())
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        self.from_rational(q(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElement {
        self.from_rational(BigRational::from_integer(n.clone()))
    }

    pub fn from_rational(&self, r: BigRational) -> FieldElement {
        let mut p = vec![BigRational::zero(); self.degree];
        p[0] = r;
        self.from_power(&p)
    }

    /// Element from power-basis coordinates.
    pub fn from_power(&self, p: &[BigRational]) -> FieldElement {
        FieldElement { c: vec_mat(p, &self.basis_inv) }
    }

    pub fn to_power(&self, x: &FieldElement) -> Vec<BigRational> {
        vec_mat(&x.c, &self.basis)
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let d = self.degree;
        let mut out = vec![BigRational::zero(); d];
        for i in 0..d {
            if x.c[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if y.c[j].is_zero() {
                    continue;
                }
                let f = &x.c[i] * &y.c[j];
                for (o, m) in out.iter_mut().zip(&self.mult[i][j]) {
                    if !m.is_zero() {
                        *o += &f * m;
                    }
                }
            }
        }
        FieldElement { c: out }
    }

    pub fn pow(&self, x: &FieldElement, mut e: u64) -> FieldElement {
        let mut acc = self.one();
        let mut b = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// Matrix of multiplication by `x`: row `i` holds `x * b_i`.
    pub fn mult_matrix(&self, x: &FieldElement) -> QMatrix {
        (0..self.degree)
            .map(|i| {
                let mut bi = self.zero();
                bi.c[i] = BigRational::one();
                self.mul(x, &bi).c
            })
            .collect()
    }

    pub fn norm(&self, x: &FieldElement) -> BigRational {
        det(&self.mult_matrix(x))
    }

    pub fn trace(&self, x: &FieldElement) -> BigRational {
        let m = self.mult_matrix(x);
        (0..self.degree).fold(BigRational::zero(), |a, i| a + &m[i][i])
    }

    pub fn inv(&self, x: &FieldElement) -> Option<FieldElement> {
        let m = inverse(&self.mult_matrix(x))?;
        // x * y = 1 means one.c * M_x^{-1} in row convention
        Some(FieldElement { c: vec_mat(&self.one().c, &m) })
    }

    pub fn embed(&self, x: &FieldElement) -> Vec<Complex64> {
        let c: Vec<f64> = x.c.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect();
        self.emb
            .iter()
            .map(|row| row.iter().zip(&c).map(|(e, a)| e * a).sum())
            .collect()
    }

    /// Real embeddings only (first `r1` entries).
    pub fn real_embed(&self, x: &FieldElement) -> Vec<f64> {
        self.embed(x).into_iter().take(self.r1).map(|z| z.re).collect()
    }

    pub fn trace_gram(&self) -> QMatrix {
        let d = self.degree;
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let p = FieldElement { c: self.mult[i][j].clone() };
                        self.trace(&p)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn basis_element(&self, i: usize) -> FieldElement {
        let mut b = self.zero();
        b.c[i] = BigRational::one();
        b
    }

    /// Sign vector of `x` at the real places.
    pub fn signs(&self, x: &FieldElement) -> Vec<bool> {
        self.real_embed(x).into_iter().map(|v| v > 0.0).collect()
    }

    /// `[O^x : O^x_+]`, from the rank over F_2 of the unit sign vectors.
    pub fn unit_index_plus(&self) -> u64 {
        let mut rows: Vec<Vec<bool>> = self.units.iter().map(|u| self.signs(u).iter().map(|s| !s).collect()).collect();
        let cols = self.r1;
        let mut rank = 0;
        for c in 0..cols {
            if let Some(p) = (rank..rows.len()).find(|&r| rows[r][c]) {
                rows.swap(rank, p);
                let piv = rows[rank].clone();
                for (r, row) in rows.iter_mut().enumerate() {
                    if r != rank && row[c] {
                        row.iter_mut().zip(&piv).for_each(|(a, b)| *a ^= b);
                    }
                }
                rank += 1;
            }
        }
        1 << rank
    }

    pub fn abs_disc(&self) -> BigInt {
        self.discriminant.abs()
    }
}

/// Builds a field from raw data and runs every consistency check.
pub(crate) fn assemble(
    label: String,
    min_poly: Vec<BigInt>,
    basis: QMatrix,
    mult: Option<Vec<Vec<Vec<BigRational>>>>,
    discriminant: BigInt,
    class_number: u64,
    reps: Vec<Vec<FieldElement>>,
    units: Vec<FieldElement>,
    different_gen: FieldElement,
    precision_bits: u32,
) -> Result<NumberField> {
    let d = min_poly.len().checked_sub(1).filter(|&d| d >= 1).ok_or_else(|| Error::Parse("empty min_poly".into()))?;
    if !min_poly[d].is_one() {
        return Err(Error::Invariant("min_poly must be monic".into()));
    }
    if !poly::is_squarefree(&min_poly) {
        return Err(Error::Invariant("min_poly not squarefree".into()));
    }
    if basis.len() != d || basis.iter().any(|r| r.len() != d) {
        return Err(Error::Parse("integral_basis shape".into()));
    }
    let basis_inv = inverse(&basis).ok_or_else(|| Error::Invariant("integral_basis singular".into()))?;
    let derived = poly::mult_table(&min_poly, &basis, &basis_inv);
    if let Some(m) = &mult {
        if *m != derived {
            return Err(Error::Invariant("mult_table disagrees with basis".into()));
        }
    }
    if derived.iter().flatten().flatten().any(|x| !x.is_integer()) {
        return Err(Error::Invariant("basis products not integral".into()));
    }
    let roots = poly::roots(&min_poly);
    let r1 = roots.iter().filter(|z| z.im == 0.0).count();
    if (d - r1) % 2 != 0 {
        return Err(Error::Invariant("signature".into()));
    }
    let r2 = (d - r1) / 2;
    let emb: Vec<Vec<Complex64>> = roots
        .iter()
        .map(|z| {
            basis
                .iter()
                .map(|row| row.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_f64().unwrap()))
                .collect()
        })
        .collect();
    let mut nf = NumberField {
        label,
        degree: d,
        r1,
        r2,
        min_poly,
        basis,
        basis_inv,
        mult: derived,
        discriminant,
        class_number,
        class_reps: Vec::new(),
        units,
        different_gen,
        roots,
        emb,
        precision_bits,
    };
    let gram = det(&nf.trace_gram());
    if gram != BigRational::from_integer(nf.discriminant.clone()) {
        return Err(Error::Invariant(format!("discriminant: trace form gives {gram}, document says {}", nf.discriminant)));
    }
    for u in &nf.units {
        if u.c.len() != d || !u.is_integral() || !nf.norm(u).abs().is_one() {
            return Err(Error::Invariant("unit generator with |N| != 1".into()));
        }
    }
    check_different(&nf)?;
    if reps.len() as u64 != class_number || class_number == 0 {
        return Err(Error::Invariant("class_reps count differs from class_number".into()));
    }
    let mut cr = Vec::new();
    for gens in reps {
        if gens.iter().any(|g| g.c.len() != d || !g.is_integral()) {
            return Err(Error::Invariant("class rep not integral".into()));
        }
        cr.push(Ideal::from_generators(&nf, &gens)?);
    }
    nf.class_reps = cr;
    Ok(nf)
}

/// The generator `delta` must satisfy: Tr(delta^{-1} b_i b_j) is integral and unimodular.
fn check_different(nf: &NumberField) -> Result<()> {
    let dg = &nf.different_gen;
    if dg.c.len() != nf.degree || !dg.is_integral() {
        return Err(Error::Invariant("different generator not integral".into()));
    }
    let di = nf.inv(dg).ok_or_else(|| Error::Invariant("different generator is zero".into()))?;
    let m: QMatrix = (0..nf.degree)
        .map(|i| {
            (0..nf.degree)
                .map(|j| {
                    let p = FieldElement { c: nf.mult[i][j].clone() };
                    nf.trace(&nf.mul(&di, &p))
                })
                .collect()
        })
        .collect();
    if m.iter().flatten().any(|x| !x.is_integer()) || !det(&m).abs().is_one() {
        return Err(Error::Invariant("different_gen does not generate the different".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_field() {
        let f = builtin_field("Q").unwrap();
        assert_eq!(f.degree, 1);
        assert_eq!(f.discriminant, BigInt::from(1));
        assert_eq!(f.class_number, 1);
        assert_eq!(f.unit_index_plus(), 2);
    }

    #[test]
    fn real_quadratic_norm_trace() {
        let f = builtin_field("Q(sqrt2)").unwrap();
        assert_eq!(f.discriminant, BigInt::from(8));
        let x = FieldElement::from_ints(&[3, 1]);
        assert_eq!(f.norm(&x), q(7));
        assert_eq!(f.trace(&x), q(6));
        let s2 = FieldElement::from_ints(&[0, 1]);
        assert_eq!(f.trace(&s2), q(0));
        assert_eq!(f.norm(&f.one()), q(1));
        assert_eq!(f.trace(&f.one()), q(2));
        assert_eq!(f.norm(&FieldElement::from_ints(&[1, 1])), q(-1));
        assert_eq!(f.unit_index_plus(), 4);
        // product of the two embeddings of 3+sqrt2
        let e = f.embed(&x);
        assert!(((e[0] * e[1]).re - 7.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_element() {
        let f = builtin_field("Q(sqrt2)").unwrap();
        let x = FieldElement::from_ints(&[3, 1]);
        let y = f.inv(&x).unwrap();
        assert_eq!(f.mul(&x, &y), f.one());
    }

    #[test]
    fn wrong_discriminant_rejected() {
        let mut d: FieldDoc = serde_json::from_str(doc::QSQRT2_JSON).unwrap();
        d.discriminant = "12".into();
        match d.build() {
            Err(Error::Invariant(m)) => assert!(m.contains("discriminant")),
            other => panic!("expected invariant error, got {other:?}"),
        }
    }
}
