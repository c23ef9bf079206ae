//! Newform data: weights, level, coefficients and Atkin-Lehner data.

use super::tau::tau_table;
use crate::error::{Error, Result};
use crate::modarith::is_prime;
use crate::nf::{FieldElement, NumberField};
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum NebentypusDoc {
    /// `"trivial"`.
    Named(String),
    /// Ingested unit-modulus factor for the root number.
    Constant { constant: [f64; 2] },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AtkinLehnerDoc {
    pub eta: [f64; 2],
}

/// Newform document. Rows are `(ideal label, a_re, a_im)`; over Q the label is the positive generator.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NewformDoc {
    #[serde(default)]
    pub label: String,
    pub field_label: String,
    pub weight_vector: Vec<i64>,
    pub m_vector: Vec<i64>,
    #[serde(rename = "type_J", default)]
    pub type_j: Vec<usize>,
    pub level_norm: u64,
    pub nebentypus: NebentypusDoc,
    pub n0: u32,
    pub theta: f64,
    #[serde(default)]
    pub atkin_lehner: Option<AtkinLehnerDoc>,
    /// Coefficients are extended to every `m <= coeff_limit`.
    pub coeff_limit: usize,
    pub rows: Vec<(String, f64, f64)>,
}

#[derive(Clone, Debug)]
pub struct Newform {
    pub label: String,
    pub field_label: String,
    pub k_vec: Vec<i64>,
    pub m_vec: Vec<i64>,
    /// Central weight: the common value of `k_s + 2 m_s`.
    pub k: i64,
    pub type_j: Vec<usize>,
    pub level_norm: u64,
    pub neb_trivial: bool,
    pub neb_factor: Complex64,
    pub n0: u32,
    pub theta: f64,
    /// Pseudo-eigenvalue: `a_{W f} = eta * a_f`.
    pub eta: Complex64,
    pub a: Arc<Vec<Complex64>>,
    pub exact: Option<Arc<Vec<i128>>>,
}

/// `C_{F,J,k}` and the parity condition `(-1)^{r1 (k-2)} C^2 = 1`.
pub fn parity_and_constant(r1: usize, complex_n: &[i64], type_j: &[usize], k_vec: &[i64], k: i64) -> (Complex64, bool) {
    let sign_exp = r1 as i64 + complex_n.iter().map(|n| n + 1).sum::<i64>();
    let sign = if sign_exp.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let mut phase = 0.0;
    for (s, &ks) in k_vec.iter().take(r1).enumerate() {
        if type_j.contains(&s) {
            phase -= ks as f64 / 4.0;
        } else {
            phase += ks as f64 / 4.0;
        }
    }
    let c = Complex64::from_polar(sign, std::f64::consts::TAU * phase);
    let par = if (r1 as i64 * (k - 2)).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let ok = (par * c * c - 1.0).norm() < 1e-12;
    (c, ok)
}

fn check_weights(k_vec: &[i64], m_vec: &[i64]) -> Result<i64> {
    if k_vec.is_empty() || k_vec.len() != m_vec.len() {
        return Err(Error::Invariant("weight vectors must have one entry per embedding".into()));
    }
    if k_vec.iter().any(|&k| k < 2) {
        return Err(Error::Invariant("weights must be at least 2".into()));
    }
    let k = k_vec[0] + 2 * m_vec[0];
    if k_vec.iter().zip(m_vec).any(|(a, b)| a + 2 * b != k) {
        return Err(Error::Invariant("k_s + 2 m_s must not depend on s".into()));
    }
    Ok(k)
}

/// Number of divisors.
pub fn divisor_count(mut m: u64) -> u64 {
    let mut d = 1;
    let mut p = 2;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        d *= e + 1;
        p += 1;
    }
    if m > 1 {
        d *= 2;
    }
    d
}

impl Newform {
    /// The discriminant modular form of weight 12 and level one, coefficients to `nmax`.
    pub fn delta(nmax: usize) -> Newform {
        let t = tau_table(nmax);
        let a: Vec<Complex64> = t.iter().take(nmax + 1).map(|&x| Complex64::new(x as f64, 0.0)).collect();
        let (c, _) = parity_and_constant(1, &[], &[], &[12], 12);
        Newform {
            label: "delta".into(),
            field_label: "Q".into(),
            k_vec: vec![12],
            m_vec: vec![0],
            k: 12,
            type_j: vec![],
            level_norm: 1,
            neb_trivial: true,
            neb_factor: Complex64::new(1.0, 0.0),
            n0: 0,
            theta: 0.0,
            eta: level_one_eta(12, c),
            a: Arc::new(a),
            exact: Some(Arc::new(t[..=nmax].to_vec())),
        }
    }

    pub fn len(&self) -> usize {
        self.a.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn coeff(&self, m: u64) -> Result<Complex64> {
        self.a.get(m as usize).copied().ok_or_else(|| Error::Precondition(format!("coefficient {m} beyond table")))
    }

    /// Coefficient of the ideal generated by `x`; zero for non-integral `x`. Rational field only.
    pub fn coeff_ideal(&self, nf: &NumberField, x: &FieldElement) -> Result<Complex64> {
        if nf.degree != 1 {
            return Err(Error::Unsupported("ideal-indexed coefficients are stored for F = Q".into()));
        }
        if !x.is_integral() || x.is_zero() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let m = x.c[0].abs().to_integer().to_u64().ok_or_else(|| Error::Precondition("ideal norm too large".into()))?;
        self.coeff(m)
    }

    pub fn ramanujan_bound(&self, m: u64) -> f64 {
        divisor_count(m) as f64 * (m as f64).powf((self.k as f64 - 1.0) / 2.0 + self.theta)
    }

    /// Checks `|a(p)| <= 2 p^{(k-1)/2 + theta}` for primes `p <= pmax`; returns the worst ratio.
    pub fn check_ramanujan(&self, pmax: u64) -> Result<f64> {
        let mut worst = 0.0f64;
        for p in (2..=pmax.min(self.len() as u64)).filter(|&p| is_prime(p)) {
            let v = self.a[p as usize].norm();
            let b = 2.0 * (p as f64).powf((self.k as f64 - 1.0) / 2.0 + self.theta);
            let r = v / b;
            if r > 1.0 + 1e-12 {
                return Err(Error::BoundViolation { label: p.to_string(), value: v, bound: b });
            }
            worst = worst.max(r);
        }
        Ok(worst)
    }

    /// Exact Ramanujan check `tau(p)^2 <= 4 p^11` on the integer table.
    pub fn check_ramanujan_exact(&self, pmax: u64) -> Result<()> {
        let t = self.exact.as_ref().ok_or_else(|| Error::Unsupported("no exact table".into()))?;
        for p in (2..=pmax.min(self.len() as u64)).filter(|&p| is_prime(p)) {
            let v = num_bigint::BigInt::from(t[p as usize]);
            let lhs = &v * &v;
            let rhs = num_bigint::BigInt::from(4) * num_bigint::BigInt::from(p).pow(11);
            if lhs > rhs {
                return Err(Error::BoundViolation {
                    label: p.to_string(),
                    value: v.to_f64().unwrap_or(f64::INFINITY),
                    bound: 2.0 * (p as f64).powf(5.5),
                });
            }
        }
        Ok(())
    }
}

/// Level-one Atkin-Lehner eigenvalue normalized so that `C * eta = i^k`.
pub fn level_one_eta(k: i64, c: Complex64) -> Complex64 {
    Complex64::new(0.0, 1.0).powi(k as i32) / c
}

/// Loads a newform document, extending prime data by multiplicativity and checking bounds.
pub fn newform_load(doc: &NewformDoc, field: &NumberField) -> Result<Newform> {
    let k = check_weights(&doc.weight_vector, &doc.m_vector)?;
    if doc.weight_vector.len() != field.degree {
        return Err(Error::Invariant("weight vector length differs from field degree".into()));
    }
    if field.degree != 1 {
        return Err(Error::Unsupported("coefficient tables are ingested over Q only".into()));
    }
    if !(0.0..=0.5).contains(&doc.theta) {
        return Err(Error::Invariant("theta outside [0, 1/2]".into()));
    }
    let (neb_trivial, neb_factor) = match &doc.nebentypus {
        NebentypusDoc::Named(s) if s == "trivial" => (true, Complex64::new(1.0, 0.0)),
        NebentypusDoc::Named(s) => return Err(Error::Parse(format!("unknown nebentypus {s:?}"))),
        NebentypusDoc::Constant { constant } => {
            let z = Complex64::new(constant[0], constant[1]);
            if (z.norm() - 1.0).abs() > 1e-9 {
                return Err(Error::Invariant("nebentypus factor must have modulus one".into()));
            }
            (false, z)
        }
    };
    let complex_n: Vec<i64> = Vec::new();
    let (c, ok) = parity_and_constant(field.r1, &complex_n, &doc.type_j, &doc.weight_vector, k);
    if !ok {
        return Err(Error::Invariant("parity condition fails".into()));
    }
    let eta = match &doc.atkin_lehner {
        Some(al) => Complex64::new(al.eta[0], al.eta[1]),
        None if doc.level_norm == 1 => level_one_eta(k, c),
        None => return Err(Error::Precondition("Atkin-Lehner data required for level > 1".into())),
    };
    let mut given: HashMap<u64, Complex64> = HashMap::new();
    for (lab, re, im) in &doc.rows {
        let m: u64 = lab.trim().parse().map_err(|_| Error::Parse(format!("bad ideal label {lab:?}")))?;
        if m == 0 {
            return Err(Error::Parse("ideal label 0".into()));
        }
        given.insert(m, Complex64::new(*re, *im));
    }
    let lim = doc.coeff_limit;
    let mut a = vec![Complex64::new(0.0, 0.0); lim + 1];
    if lim >= 1 {
        a[1] = Complex64::new(1.0, 0.0);
    }
    let kk = (k - 1) as f64;
    let bound_exp = kk / 2.0 + doc.theta;
    for p in (2..=lim as u64).filter(|&p| is_prime(p)) {
        let ap = *given.get(&p).ok_or(Error::MissingPrime(p))?;
        let b = 2.0 * (p as f64).powf(bound_exp);
        if ap.norm() > b * (1.0 + 1e-12) {
            return Err(Error::BoundViolation { label: p.to_string(), value: ap.norm(), bound: b });
        }
        if !neb_trivial {
            continue;
        }
        let chi_p = if doc.level_norm % p == 0 { 0.0 } else { 1.0 };
        let pk = (p as f64).powf(kk);
        let (mut prev, mut cur) = (Complex64::new(1.0, 0.0), ap);
        let mut q = p;
        loop {
            a[q as usize] = cur;
            let Some(nq) = q.checked_mul(p).filter(|&x| x <= lim as u64) else { break };
            let next = ap * cur - chi_p * pk * prev;
            prev = cur;
            cur = next;
            q = nq;
        }
    }
    if neb_trivial {
        // multiplicativity across coprime prime powers
        let mut spf = vec![0u64; lim + 1];
        for i in 2..=lim {
            if spf[i] == 0 {
                let mut j = i;
                while j <= lim {
                    if spf[j] == 0 {
                        spf[j] = i as u64;
                    }
                    j += i;
                }
            }
        }
        for m in 2..=lim {
            let p = spf[m] as usize;
            let mut q = p;
            while m % (q * p) == 0 {
                q *= p;
            }
            if q != m {
                a[m] = a[q] * a[m / q];
            }
        }
    } else {
        for m in 2..=lim as u64 {
            a[m as usize] = *given.get(&m).ok_or(Error::MissingPrime(m))?;
        }
    }
    let f = Newform {
        label: if doc.label.is_empty() { "form".into() } else { doc.label.clone() },
        field_label: doc.field_label.clone(),
        k_vec: doc.weight_vector.clone(),
        m_vec: doc.m_vector.clone(),
        k,
        type_j: doc.type_j.clone(),
        level_norm: doc.level_norm,
        neb_trivial,
        neb_factor,
        n0: doc.n0,
        theta: doc.theta,
        eta,
        a: Arc::new(a),
        exact: None,
    };
    for m in 1..=lim as u64 {
        let v = f.a[m as usize].norm();
        let b = f.ramanujan_bound(m);
        if v > b * (1.0 + 1e-9) {
            return Err(Error::BoundViolation { label: m.to_string(), value: v, bound: b });
        }
    }
    Ok(f)
}

/// A prime-indexed document for the discriminant form, for loader round trips.
pub fn delta_doc(limit: usize) -> NewformDoc {
    let t = tau_table(limit);
    NewformDoc {
        label: "delta".into(),
        field_label: "Q".into(),
        weight_vector: vec![12],
        m_vector: vec![0],
        type_j: vec![],
        level_norm: 1,
        nebentypus: NebentypusDoc::Named("trivial".into()),
        n0: 0,
        theta: 0.0,
        atkin_lehner: None,
        coeff_limit: limit,
        rows: (2..=limit as u64).filter(|&p| is_prime(p)).map(|p| (p.to_string(), t[p as usize] as f64, 0.0)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::builtin_field;

    #[test]
    fn delta_coefficients() {
        let f = Newform::delta(100);
        assert_eq!(f.coeff(1).unwrap().re, 1.0);
        assert_eq!(f.coeff(6).unwrap().re, -6048.0);
        let q = builtin_field("Q").unwrap();
        let half = FieldElement { c: vec![num_rational::BigRational::new(1.into(), 2.into())] };
        assert_eq!(f.coeff_ideal(&q, &half).unwrap().norm(), 0.0);
        assert_eq!(f.coeff_ideal(&q, &q.from_int(-6)).unwrap().re, -6048.0);
    }

    #[test]
    fn loader_matches_eta_product() {
        let q = builtin_field("Q").unwrap();
        let f = newform_load(&delta_doc(500), &q).unwrap();
        let t = tau_table(500);
        for m in 1..=500 {
            assert!((f.a[m].re - t[m] as f64).abs() <= 1e-9 * (t[m] as f64).abs().max(1.0), "m={m}");
        }
    }

    #[test]
    fn loader_rejects_corruption() {
        let q = builtin_field("Q").unwrap();
        let mut d = delta_doc(100);
        d.rows[3].1 = 1e6;
        match newform_load(&d, &q) {
            Err(Error::BoundViolation { label, .. }) => assert_eq!(label, "7"),
            other => panic!("{other:?}"),
        }
        let mut d = delta_doc(100);
        d.rows.remove(2);
        assert!(matches!(newform_load(&d, &q), Err(Error::MissingPrime(5))));
    }

    #[test]
    fn parity_constants() {
        let (c, ok) = parity_and_constant(1, &[], &[], &[12], 12);
        assert!(ok && (c + 1.0).norm() < 1e-12);
        let (c2, ok2) = parity_and_constant(1, &[], &[0], &[12], 12);
        assert!(ok2 && (c2.norm() - 1.0).abs() < 1e-12);
        // imaginary quadratic: no real places
        let (c3, ok3) = parity_and_constant(0, &[0], &[], &[2, 2], 2);
        assert!(ok3 && (c3.norm() - 1.0).abs() < 1e-12);
    }
}
