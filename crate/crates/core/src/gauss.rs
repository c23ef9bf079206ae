//! Gauss sums, root numbers and Galois averages of characters of p-power conductor.

use crate::character::HeckeCharacter;
use crate::cyclotomic::Cyclo;
use crate::error::{Error, Result};
use crate::modarith::{gcd, mul_mod, primitive_root};
use crate::nf::NumberField;
use crate::rayclass::RayClassGroup;
use crate::roots::ExactRootOfUnity;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// `(Z/p^m)^x` with a full discrete-log table.
#[derive(Debug)]
pub struct LocalGroup {
    pub p: u64,
    pub m: u32,
    pub modulus: u64,
    pub phi: u64,
    pub g: u64,
    log: Vec<u32>,
}

impl LocalGroup {
    pub fn new(p: u64, m: u32) -> Arc<LocalGroup> {
        let modulus = p.pow(m);
        let phi = modulus / p * (p - 1);
        let g = if m == 0 { 1 } else { primitive_root(p, m) };
        let mut log = vec![u32::MAX; modulus as usize];
        let mut x = 1 % modulus.max(1);
        for j in 0..phi {
            log[x as usize] = j as u32;
            x = mul_mod(x, g, modulus.max(1));
        }
        Arc::new(LocalGroup { p, m, modulus, phi, g, log })
    }

    pub fn log(&self, a: i64) -> Option<u64> {
        if self.m == 0 {
            return Some(0);
        }
        let r = a.rem_euclid(self.modulus as i64) as usize;
        let l = self.log[r];
        (l != u32::MAX).then_some(l as u64)
    }
}

/// A character of `(Z/p^m)^x`: `g^j -> e(k j / phi)`.
#[derive(Clone, Debug)]
pub struct LocalCharacter {
    pub grp: Arc<LocalGroup>,
    pub k: u64,
}

impl LocalCharacter {
    pub fn new(grp: Arc<LocalGroup>, k: u64) -> LocalCharacter {
        let k = if grp.phi == 0 { 0 } else { k % grp.phi };
        LocalCharacter { grp, k }
    }

    /// Local component at the prime of a ray class character: `u -> conj(chi(class of u))`.
    pub fn from_hecke(rcg: &RayClassGroup, chi: &HeckeCharacter) -> LocalCharacter {
        let grp = LocalGroup::new(rcg.p, rcg.n);
        if rcg.n == 0 {
            return LocalCharacter::new(grp, 0);
        }
        let v = chi.eval(&rcg.class_of_residue(grp.g as i64).unwrap()).conj();
        let k = v.num as u128 * (grp.phi / v.den) as u128;
        LocalCharacter::new(grp, k as u64)
    }

    pub fn value(&self, a: i64) -> Option<ExactRootOfUnity> {
        let l = self.grp.log(a)?;
        Some(if self.grp.phi == 0 { ExactRootOfUnity::ONE } else { ExactRootOfUnity::new(self.k as i128 * l as i128, self.grp.phi) })
    }

    pub fn conj(&self) -> LocalCharacter {
        LocalCharacter::new(self.grp.clone(), self.grp.phi - self.k % self.grp.phi.max(1))
    }

    pub fn order(&self) -> u64 {
        if self.grp.phi == 0 {
            1
        } else {
            self.grp.phi / gcd(self.k, self.grp.phi)
        }
    }

    pub fn conductor(&self) -> u32 {
        if self.k == 0 {
            return 0;
        }
        (1..=self.grp.m)
            .find(|&c| self.value((1 + self.grp.p.pow(c)) as i64).unwrap().is_one())
            .unwrap_or(self.grp.m)
    }

    pub fn parity(&self) -> i64 {
        if self.value(-1).unwrap().is_one() {
            1
        } else {
            -1
        }
    }

    pub fn label(&self) -> String {
        format!("loc[p={},m={},k={}]", self.grp.p, self.grp.m, self.k)
    }
}

/// All characters of `(Z/p^m)^x` of conductor exactly `p^c`.
pub fn primitive_local_characters(p: u64, m: u32, c: u32) -> Vec<LocalCharacter> {
    let grp = LocalGroup::new(p, m);
    (0..grp.phi.max(1)).map(|k| LocalCharacter::new(grp.clone(), k)).filter(|x| x.conductor() == c).collect()
}

/// A Gauss sum in exact and complex form.
#[derive(Clone, Debug)]
pub struct GaussSum {
    pub exact: Cyclo,
    pub value: Complex64,
    pub conductor: u32,
}

fn cyclo_level(p: u64, c: u32) -> usize {
    if c == 0 {
        1
    } else {
        (p.pow(c) * (p - 1)) as usize
    }
}

pub fn phase_exp(r: &ExactRootOfUnity, n: usize) -> i64 {
    assert_eq!(n as u64 % r.den, 0, "root of unity outside Q(zeta_N)");
    (r.num * (n as u64 / r.den)) as i64
}

/// `G(phi, a) = phi(delta) * sum_{w in (Z/p^c)^x} phi(w) e(-a w / p^c)`; `delta` and `a` are residues of
/// the different generator and the shift. The trivial character gets `G = 1`.
pub fn gauss_sum_local(phi: &LocalCharacter, delta: i64, a: i64) -> Result<GaussSum> {
    let c = phi.conductor();
    let p = phi.grp.p;
    if c == 0 {
        return Ok(GaussSum { exact: Cyclo::constant(1, 1), value: Complex64::new(1.0, 0.0), conductor: 0 });
    }
    let n = cyclo_level(p, c);
    let pc = p.pow(c);
    let lead = phi.value(delta).ok_or(Error::NotCoprime)?;
    let mut z = Cyclo::zero(n);
    let step = n as u64 / pc;
    let am = a.rem_euclid(pc as i64) as u64;
    for w in (1..pc).filter(|w| w % p != 0) {
        let v = phi.value(w as i64).unwrap();
        let add = mul_mod(am, w, pc);
        let j = phase_exp(&v, n) - (add * step) as i64;
        z.add_monomial(j, 1);
    }
    let exact = z.shift(phase_exp(&lead, n));
    let value = exact.to_complex();
    Ok(GaussSum { exact, value, conductor: c })
}

/// Residue of the different generator at the prime (1 over Q).
pub fn delta_residue(rcg: &RayClassGroup) -> Result<i64> {
    match &rcg.iso {
        None => Ok(1),
        Some(iso) => iso.reduce(&rcg.nf.different_gen).map(|x| x as i64).ok_or(Error::NotCoprime),
    }
}

pub fn gauss_sum(rcg: &RayClassGroup, chi: &HeckeCharacter, a: i64) -> Result<GaussSum> {
    gauss_sum_local(&LocalCharacter::from_hecke(rcg, chi), delta_residue(rcg)?, a)
}

/// `W(phi) = N(c)^{-1} * neb * phi(-1) * G(conj phi)^2`, with `W(trivial) = 1`; `|W| = 1` is checked.
pub fn root_number_local(phi: &LocalCharacter, delta: i64, neb: Complex64, tol: f64) -> Result<Complex64> {
    let c = phi.conductor();
    if c == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let g = gauss_sum_local(&phi.conj(), delta, 1)?.value;
    let norm = phi.grp.p.pow(c) as f64;
    let w = neb * (phi.parity() as f64) * g * g / norm;
    if (w.norm() - 1.0).abs() > tol {
        return Err(Error::RootNumber(w.norm()));
    }
    Ok(w)
}

pub fn root_number_w(rcg: &RayClassGroup, chi: &HeckeCharacter, neb: Complex64) -> Result<Complex64> {
    root_number_local(&LocalCharacter::from_hecke(rcg, chi), delta_residue(rcg)?, neb, 1e-9)
}

/// `n_0`: the largest `m` with `mu_{p^m}` inside the Hecke field.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct HeckeFieldContext {
    pub p: u64,
    pub n0: u32,
}

/// Exponents `t` of the orbit of a character of order `p^e`.
pub fn orbit_exponents(p: u64, e: u32, n0: u32) -> Vec<u64> {
    if e == 0 {
        return vec![1];
    }
    let pe = p.pow(e);
    let pm = p.pow(e.min(n0));
    (1..pe).filter(|t| t % p != 0 && t % pm == 1 % pm).collect()
}

pub fn galois_orbit(rcg: &RayClassGroup, chi: &HeckeCharacter, ctx: &HeckeFieldContext) -> Result<Vec<HeckeCharacter>> {
    if !chi.is_p_power_order() {
        return Err(Error::Precondition("Galois orbits need p-power order".into()));
    }
    Ok(orbit_exponents(ctx.p, chi.p_order_exp(), ctx.n0).into_iter().map(|t| chi.pow(rcg, t as i64)).collect())
}

/// Exact orbit mean: `numer / orbit_size` with `numer` in `Z[zeta]`.
#[derive(Clone, Debug)]
pub struct AverageResult {
    pub numer: Option<Cyclo>,
    pub orbit_size: usize,
    pub value: Complex64,
    /// Set when the mean is a rational number `(num, den)`.
    pub rational: Option<(i64, i64)>,
}

impl AverageResult {
    pub fn is_zero_exact(&self) -> Option<bool> {
        self.numer.as_ref().map(|z| z.reduce().iter().all(|&x| x == 0))
    }
}

/// Mean of `chi^t(a)` over the orbit, for the principal ideal of an integer `a`.
pub fn average_char(rcg: &RayClassGroup, chi: &HeckeCharacter, ctx: &HeckeFieldContext, a: i64) -> Result<AverageResult> {
    let orbit = galois_orbit(rcg, chi, ctx)?;
    let size = orbit.len();
    let n = chi.order.max(1) as usize;
    let mut z = Cyclo::zero(n);
    match rcg.class_of_residue(a) {
        None => {}
        Some(cl) => {
            for c in &orbit {
                z.add_monomial(phase_exp(&c.eval(&cl), n), 1);
            }
        }
    }
    let value = z.to_complex() / size as f64;
    let rational = z.as_integer().map(|k| {
        let g = gcd(k.unsigned_abs(), size as u64).max(1) as i64;
        (k / g, size as i64 / g)
    });
    Ok(AverageResult { numer: Some(z), orbit_size: size, value, rational })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SupportVariant {
    /// Value order at most `p^{n0}`.
    Strict,
    /// Value order at most `p^{n0+1}`.
    Corrected,
    /// Value order at most `p^{max(n0,1)}`, which is where the exact mean is nonzero.
    Sharp,
}

/// Whether the class of `a` lies in the predicted support of the Galois average.
pub fn average_support(rcg: &RayClassGroup, chi: &HeckeCharacter, ctx: &HeckeFieldContext, a: i64, variant: SupportVariant) -> bool {
    let Some(cl) = rcg.class_of_residue(a) else { return false };
    let v = chi.eval(&cl).p_order_exp(ctx.p);
    match variant {
        SupportVariant::Strict => v <= ctx.n0,
        SupportVariant::Corrected => v <= ctx.n0 + 1,
        SupportVariant::Sharp => v <= ctx.n0.max(1),
    }
}

/// Mean of `W(chi^t) * conj(chi^t(a))` over the orbit.
pub fn average_iota(
    rcg: &RayClassGroup,
    chi: &HeckeCharacter,
    ctx: &HeckeFieldContext,
    a: i64,
    neb: Complex64,
) -> Result<AverageResult> {
    let orbit = galois_orbit(rcg, chi, ctx)?;
    let size = orbit.len();
    let cl = rcg.class_of_residue(a);
    let mut acc = Complex64::new(0.0, 0.0);
    if let Some(cl) = cl {
        for c in &orbit {
            acc += root_number_w(rcg, c, neb)? * c.eval(&cl).conj().to_complex();
        }
    }
    Ok(AverageResult { numer: None, orbit_size: size, value: acc / size as f64, rational: None })
}

/// Root numbers of every orbit member, in orbit order.
pub fn orbit_root_numbers(rcg: &RayClassGroup, orbit: &[HeckeCharacter], neb: Complex64) -> Result<Vec<Complex64>> {
    orbit.iter().map(|c| root_number_w(rcg, c, neb)).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KloostermanReport {
    pub p: u64,
    pub n: u32,
    pub n0: u32,
    pub character: String,
    pub conductor: u32,
    pub orbit_size: usize,
    pub max_abs: f64,
    pub argmax: i64,
    pub envelope: f64,
    pub constant: f64,
    pub note: String,
}

/// Sweep of `|average_iota|` over all residues, measured against `N(p)^{-n/2}`.
pub fn kloosterman_bound_report(
    rcg: &RayClassGroup,
    chi: &HeckeCharacter,
    ctx: &HeckeFieldContext,
    n: u32,
    neb: Complex64,
) -> Result<KloostermanReport> {
    let envelope = (rcg.p as f64).powf(-(n as f64) / 2.0);
    if chi.is_trivial() {
        return Ok(KloostermanReport {
            p: rcg.p,
            n,
            n0: ctx.n0,
            character: chi.label(),
            conductor: 0,
            orbit_size: 1,
            max_abs: 1.0,
            argmax: 1,
            envelope,
            constant: f64::NAN,
            note: "trivial character excluded".into(),
        });
    }
    let orbit = galois_orbit(rcg, chi, ctx)?;
    let ws = orbit_root_numbers(rcg, &orbit, neb)?;
    let mut best = (0.0f64, 1i64);
    for (a, cl) in rcg.residue_classes() {
        let s: Complex64 = orbit.iter().zip(&ws).map(|(c, w)| w * c.eval(&cl).conj().to_complex()).sum();
        let v = s.norm() / orbit.len() as f64;
        if v > best.0 + 1e-15 {
            best = (v, a as i64);
        }
    }
    Ok(KloostermanReport {
        p: rcg.p,
        n,
        n0: ctx.n0,
        character: chi.label(),
        conductor: chi.conductor,
        orbit_size: orbit.len(),
        max_abs: best.0,
        argmax: best.1,
        envelope,
        constant: best.0 / envelope,
        note: String::new(),
    })
}

/// Exact Gauss sum through the global additive character, over Q only: `sum phi(w) efin(a w / p^c)`.
pub fn gauss_sum_via_efin(nf: &NumberField, phi: &LocalCharacter, a: i64) -> Complex64 {
    use num_rational::BigRational;
    let c = phi.conductor();
    if c == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let pc = phi.grp.p.pow(c) as i64;
    (1..pc)
        .filter(|w| w % phi.grp.p as i64 != 0)
        .map(|w| {
            let x = nf.from_rational(BigRational::new((a * w).into(), pc.into()));
            phi.value(w).unwrap().to_complex() * crate::nf::efin(nf, &x)
        })
        .sum()
}

/// `phi(-1)` for a ray class character's local component.
pub fn local_parity(rcg: &RayClassGroup, chi: &HeckeCharacter) -> i64 {
    LocalCharacter::from_hecke(rcg, chi).parity()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::char_enumerate;
    use crate::nf::{builtin_field, Ideal};
    use crate::rayclass::rcg_build;

    fn q_rcg(p: u64, n: u32) -> RayClassGroup {
        let f = Arc::new(builtin_field("Q").unwrap());
        let pr = Ideal::principal(&f, &f.from_int(p as i64)).unwrap();
        rcg_build(f, p, &pr, n).unwrap()
    }

    #[test]
    fn quadratic_mod_five_is_sqrt5() {
        let chars = primitive_local_characters(5, 1, 1);
        let quad: Vec<_> = chars.iter().filter(|c| c.order() == 2).collect();
        assert_eq!(quad.len(), 1);
        let g = gauss_sum_local(quad[0], 1, 1).unwrap();
        assert!((g.value - Complex64::new(5f64.sqrt(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn trivial_conventions() {
        let g = q_rcg(5, 2);
        let t = HeckeCharacter::trivial(&g);
        assert_eq!(gauss_sum(&g, &t, 1).unwrap().value, Complex64::new(1.0, 0.0));
        assert_eq!(root_number_w(&g, &t, Complex64::new(1.0, 0.0)).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn efin_route_agrees() {
        let f = builtin_field("Q").unwrap();
        for phi in primitive_local_characters(5, 2, 2) {
            let a = gauss_sum_local(&phi, 1, 3).unwrap().value;
            let b = gauss_sum_via_efin(&f, &phi, 3);
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn average_at_six_is_minus_quarter() {
        let g = q_rcg(5, 2);
        let ctx = HeckeFieldContext { p: 5, n0: 0 };
        for chi in char_enumerate(&g, 2, true) {
            assert_eq!(galois_orbit(&g, &chi, &ctx).unwrap().len(), 4);
            let r = average_char(&g, &chi, &ctx, 6).unwrap();
            assert_eq!(r.rational, Some((-1, 4)));
            assert_eq!(average_char(&g, &chi, &ctx, 5).unwrap().rational, Some((0, 1)));
            assert_eq!(average_char(&g, &chi, &ctx, 26).unwrap().rational, Some((1, 1)));
            assert!(!average_support(&g, &chi, &ctx, 6, SupportVariant::Strict));
            assert!(average_support(&g, &chi, &ctx, 6, SupportVariant::Corrected));
        }
    }

    #[test]
    fn orbit_sizes() {
        assert_eq!(orbit_exponents(5, 1, 0).len(), 4);
        assert_eq!(orbit_exponents(5, 2, 1), vec![1, 6, 11, 16, 21]);
        assert_eq!(orbit_exponents(5, 0, 1), vec![1]);
    }
}
