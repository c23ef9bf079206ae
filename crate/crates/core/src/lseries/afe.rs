//! The smoothed approximate functional equation and the direct Dirichlet series.

use super::gamma::GammaFactor;
use super::kernel::{Kernel, VFunction};
use super::newform::{parity_and_constant, Newform};
use crate::character::HeckeCharacter;
use crate::error::{Error, Result};
use crate::gauss::root_number_w;
use crate::modarith::gcd;
use crate::nf::NumberField;
use crate::rayclass::RayClassGroup;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AFEConfig {
    /// Balance parameter; `None` means `sqrt(N)` with `N` the twisted level.
    pub y: Option<f64>,
    /// Target absolute accuracy for `L(s)`, split between the two tails.
    pub tol: f64,
    pub kernel_points: usize,
    /// Largest series cutoff accepted before reporting a tolerance failure.
    pub max_terms: usize,
}

impl Default for AFEConfig {
    fn default() -> Self {
        AFEConfig { y: None, tol: 1e-11, kernel_points: 400, max_terms: 1 << 21 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LValueResult {
    pub label: String,
    pub s_re: f64,
    pub s_im: f64,
    pub value_re: f64,
    pub value_im: f64,
    pub error_est: f64,
    pub y: f64,
    pub terms_used: [usize; 2],
    /// `V_{1,s}(1/y) / Gamma_F(s)`, the contribution of the unit ideal.
    pub main_term_re: f64,
}

impl LValueResult {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.value_re, self.value_im)
    }
}

/// A primitive character of conductor `q` as a table on `Z/q`, with its root number.
#[derive(Clone, Debug)]
pub struct TwistData {
    pub label: String,
    pub q: u64,
    pub table: Vec<Complex64>,
    pub w: Complex64,
}

impl TwistData {
    pub fn trivial() -> TwistData {
        TwistData { label: "trivial".into(), q: 1, table: vec![Complex64::new(1.0, 0.0)], w: Complex64::new(1.0, 0.0) }
    }

    /// Table of `chi` at its conductor; `neb` is the nebentypus factor entering `W`.
    pub fn from_hecke(rcg: &RayClassGroup, chi: &HeckeCharacter, neb: Complex64) -> Result<TwistData> {
        if rcg.nf.degree != 1 {
            return Err(Error::Unsupported("twisted L-values are evaluated over Q".into()));
        }
        if chi.conductor == 0 {
            return Ok(TwistData { label: chi.label(), ..TwistData::trivial() });
        }
        let q = rcg.p.pow(chi.conductor);
        let table = (0..q)
            .map(|r| {
                if gcd(r, rcg.p) != 1 {
                    Complex64::new(0.0, 0.0)
                } else {
                    chi.eval_residue(rcg, r as i64).map(|z| z.to_complex()).unwrap_or_default()
                }
            })
            .collect();
        Ok(TwistData { label: chi.label(), q, table, w: root_number_w(rcg, chi, neb)? })
    }

    pub fn value(&self, m: u64) -> Complex64 {
        self.table[(m % self.q) as usize]
    }
}

/// A newform over Q together with its archimedean data.
#[derive(Clone, Debug)]
pub struct LFunction {
    pub form: Arc<Newform>,
    pub gamma: Arc<GammaFactor>,
    pub kernel: Arc<Kernel>,
    /// `C_{F,J,k}`.
    pub c_const: Complex64,
    pub parity_ok: bool,
}

impl LFunction {
    pub fn new(form: Arc<Newform>, field: &NumberField, kernel_points: usize) -> Result<LFunction> {
        if field.degree != 1 || form.field_label != field.label {
            return Err(Error::Unsupported("L-values are evaluated for forms over Q".into()));
        }
        let (c, ok) = parity_and_constant(field.r1, &[], &form.type_j, &form.k_vec, form.k);
        Ok(LFunction {
            gamma: Arc::new(GammaFactor::new(field, &form.k_vec, &form.m_vec)),
            kernel: Arc::new(Kernel::bump(kernel_points)),
            c_const: c,
            parity_ok: ok,
            form,
        })
    }

    pub fn k(&self) -> f64 {
        self.form.k as f64
    }

    /// Level of the twist by a primitive character of conductor `q`.
    pub fn twisted_level(&self, q: u64) -> f64 {
        self.form.level_norm as f64 * (q as f64) * (q as f64)
    }

    fn coeff_exponent(&self) -> f64 {
        (self.k() - 1.0) / 2.0 + self.form.theta
    }
}

/// Probes `2 sqrt(m) m^{e} |V(m x)|` on a geometric grid and returns the first cutoff whose
/// tail integral is below `target`.
fn series_cutoff(v: &VFunction, xscale: f64, e: f64, target: f64, limit: usize) -> Result<(usize, f64)> {
    let mut probes: Vec<(f64, f64)> = Vec::new();
    let mut m = 1.0f64;
    loop {
        let b = 2.0 * m.powf(e + 0.5) * v.eval(m * xscale)?.norm();
        probes.push((m, b));
        if m * xscale > 1.0 && b * m < target * 1e-6 {
            break;
        }
        if m > 1e13 {
            return Err(Error::Tolerance { estimate: b, tol: target });
        }
        m = (m * 1.05).max(m + 1.0);
    }
    let mut suffix = 0.0;
    let mut pick = (probes.last().unwrap().0, 0.0);
    for i in (0..probes.len() - 1).rev() {
        let (mi, bi) = probes[i];
        suffix += bi * (probes[i + 1].0 - mi);
        if suffix >= target {
            break;
        }
        if mi * xscale >= 1.0 {
            pick = (mi, suffix);
        }
    }
    let cut = pick.0.ceil() as usize;
    if cut > limit {
        return Err(Error::Tolerance { estimate: cut as f64, tol: limit as f64 });
    }
    Ok((cut, pick.1))
}

/// Precomputed weights `a(m) m^{-s} V_1(m/y)` and `a(m) m^{-(k-s)} V_2(m y/N)` for one conductor.
#[derive(Clone, Debug)]
pub struct AfePlan {
    pub s: Complex64,
    pub y: f64,
    pub q: u64,
    pub level: f64,
    pub w1: Vec<Complex64>,
    pub w2: Vec<Complex64>,
    /// `C eta N^{(k-2s)/2}`; the root number of the twist multiplies this.
    pub factor: Complex64,
    pub gamma_s: Complex64,
    pub main_term: Complex64,
    tail: f64,
    quad: f64,
}

impl AfePlan {
    pub fn new(lf: &LFunction, q: u64, s: Complex64, cfg: &AFEConfig) -> Result<AfePlan> {
        if !lf.parity_ok {
            return Err(Error::Precondition("parity condition fails".into()));
        }
        if q > 1 && gcd(q, lf.form.level_norm) != 1 {
            return Err(Error::NotCoprime);
        }
        let k = lf.k();
        let level = lf.twisted_level(q);
        let y = cfg.y.unwrap_or(level.sqrt());
        if !(y > 0.0) {
            return Err(Error::Precondition("y must be positive".into()));
        }
        let sd = Complex64::new(k, 0.0) - s;
        let v1 = VFunction::new(lf.gamma.clone(), lf.kernel.clone(), s, 1.0)?;
        let v2 = VFunction::new(lf.gamma.clone(), lf.kernel.clone(), sd, -1.0)?;
        let gamma_s = v1.gamma_at_s();
        let scale = gamma_s.norm();
        let factor = lf.c_const * lf.form.eta * (level.ln() * (Complex64::new(k, 0.0) - 2.0 * s) / 2.0).exp();
        let e = lf.coeff_exponent();
        let limit = cfg.max_terms.min(lf.form.len());
        let (m1, t1) = series_cutoff(&v1, 1.0 / y, e - s.re, cfg.tol * scale / 4.0, limit)?;
        let t2_target = cfg.tol * scale / 4.0 / factor.norm().max(1e-300);
        let (m2, t2) = series_cutoff(&v2, y / level, e - sd.re, t2_target, limit)?;
        let a = &lf.form.a;
        let build = |v: &VFunction, xs: f64, ex: Complex64, len: usize| -> Result<Vec<Complex64>> {
            let pts: Vec<f64> = (1..=len).map(|m| m as f64 * xs).collect();
            let vals = v.eval_many(&pts)?;
            let mut out = vec![Complex64::new(0.0, 0.0); len + 1];
            out[1..].par_iter_mut().zip(vals.par_iter()).enumerate().for_each(|(i, (o, vv))| {
                let m = (i + 1) as f64;
                *o = a[i + 1] * (-ex * m.ln()).exp() * vv;
            });
            Ok(out)
        };
        let w1 = build(&v1, 1.0 / y, s, m1)?;
        let w2 = build(&v2, y / level, sd, m2)?;
        // quadrature error from halving the step at a few representative points
        let probe = |v: &VFunction, xs: f64, len: usize| -> Result<f64> {
            let half = v.with_step_scale(0.5);
            let mut worst = 0.0f64;
            for m in [1usize, (len / 8).max(1), (len / 2).max(1), len.max(1)] {
                let x = m as f64 * xs;
                worst = worst.max((v.eval(x)? - half.eval(x)?).norm());
            }
            Ok(worst / v.gamma_at_s().norm())
        };
        let abs1: f64 = w1.iter().map(|z| z.norm()).sum();
        let abs2: f64 = w2.iter().map(|z| z.norm()).sum();
        let dirichlet = |ex: f64, len: usize| -> f64 { (1..=len).map(|m| a[m].norm() * (m as f64).powf(-ex)).sum() };
        let q1 = probe(&v1, 1.0 / y, m1)?;
        let q2 = probe(&v2, y / level, m2)?;
        let g2 = v2.gamma_at_s().norm();
        let quad = q1 * scale * dirichlet(s.re, m1)
            + q2 * g2 * factor.norm() * dirichlet(sd.re, m2)
            + 1e-15 * (abs1 + factor.norm() * abs2);
        let main_term = v1.eval(1.0 / y)? / gamma_s;
        Ok(AfePlan {
            s,
            y,
            q,
            level,
            w1,
            w2,
            factor,
            gamma_s,
            main_term,
            tail: t1 + factor.norm() * t2,
            quad,
        })
    }

    pub fn terms(&self) -> [usize; 2] {
        [self.w1.len() - 1, self.w2.len() - 1]
    }

    /// `L(s)` from per-residue weights: `first[m mod q]` in the first sum, `second[m mod q]` in the
    /// dual sum (the latter already carrying the root number).
    pub fn combine(&self, first: &[Complex64], second: &[Complex64]) -> Complex64 {
        let q = self.q as usize;
        let s1: Complex64 = self.w1.iter().enumerate().skip(1).map(|(m, w)| w * first[m % q]).sum();
        let s2: Complex64 = self.w2.iter().enumerate().skip(1).map(|(m, w)| w * second[m % q]).sum();
        (s1 + self.factor * s2) / self.gamma_s
    }

    pub fn result(&self, label: &str, value: Complex64) -> LValueResult {
        LValueResult {
            label: label.to_string(),
            s_re: self.s.re,
            s_im: self.s.im,
            value_re: value.re,
            value_im: value.im,
            error_est: (self.tail + self.quad) / self.gamma_s.norm(),
            y: self.y,
            terms_used: self.terms(),
            main_term_re: self.main_term.re,
        }
    }

    pub fn evaluate(&self, twist: &TwistData) -> Result<LValueResult> {
        if twist.q != self.q {
            return Err(Error::Precondition("plan built for a different conductor".into()));
        }
        let second: Vec<Complex64> = twist.table.iter().map(|z| z.conj() * twist.w).collect();
        Ok(self.result(&twist.label, self.combine(&twist.table, &second)))
    }
}

/// `L(s, f (x) chi)` via the approximate functional equation.
pub fn afe_lvalue(lf: &LFunction, twist: &TwistData, s: Complex64, cfg: &AFEConfig) -> Result<LValueResult> {
    AfePlan::new(lf, twist.q, s, cfg)?.evaluate(twist)
}

/// `Lambda(s) = N^{s/2} Gamma_F(s) L(s)` for the twist.
pub fn completed(lf: &LFunction, twist: &TwistData, s: Complex64, cfg: &AFEConfig) -> Result<Complex64> {
    let plan = AfePlan::new(lf, twist.q, s, cfg)?;
    let l = plan.evaluate(twist)?.value();
    Ok((plan.level.ln() * s / 2.0).exp() * plan.gamma_s * l)
}

/// `|Lambda(s) - C Lambda(k - s, W f)| / |Lambda(s)|` with `Lambda(., W f) = eta Lambda(., f)`.
/// The two sides use different balance parameters.
pub fn fe_residual(lf: &LFunction, twist: &TwistData, s: Complex64, cfg: &AFEConfig) -> Result<f64> {
    let level = lf.twisted_level(twist.q);
    let left = completed(lf, twist, s, &AFEConfig { y: Some(level.sqrt() * 0.8), ..cfg.clone() })?;
    let dual = TwistData {
        label: twist.label.clone(),
        q: twist.q,
        table: twist.table.iter().map(|z| z.conj()).collect(),
        w: twist.w.conj(),
    };
    let sd = Complex64::new(lf.k(), 0.0) - s;
    let right = completed(lf, &dual, sd, &AFEConfig { y: Some(level.sqrt() * 1.3), ..cfg.clone() })?;
    let rhs = lf.c_const * lf.form.eta * twist.w * right;
    Ok((left - rhs).norm() / left.norm())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DirectResult {
    pub value_re: f64,
    pub value_im: f64,
    pub terms: usize,
    /// Bound on the omitted tail from `|a(m)| <= 2 sqrt(m) m^{(k-1)/2 + theta}`.
    pub rigorous_tail: f64,
    /// `|S(M) - S(M/2)|`.
    pub doubling_estimate: f64,
}

impl DirectResult {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.value_re, self.value_im)
    }
}

/// `sum_{m <= M} a(m) chi(m) m^{-s}` for `Re s > (k+2)/2 + theta`.
pub fn direct_series(lf: &LFunction, twist: &TwistData, s: Complex64, terms: usize) -> Result<DirectResult> {
    let edge = (lf.k() + 2.0) / 2.0 + lf.form.theta;
    if s.re <= edge {
        return Err(Error::NonConvergent(s.re));
    }
    let m = terms.min(lf.form.len()).max(2);
    let a = &lf.form.a;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut half = acc;
    for i in 1..=m {
        let chi = twist.value(i as u64);
        if chi != Complex64::new(0.0, 0.0) {
            acc += a[i] * chi * (-s * (i as f64).ln()).exp();
        }
        if i == m / 2 {
            half = acc;
        }
    }
    let beta = lf.k() / 2.0 + lf.form.theta - s.re;
    let rigorous_tail = 2.0 * (m as f64).powf(beta + 1.0) / (-beta - 1.0);
    Ok(DirectResult {
        value_re: acc.re,
        value_im: acc.im,
        terms: m,
        rigorous_tail,
        doubling_estimate: (acc - half).norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::builtin_field;

    fn delta() -> LFunction {
        let q = builtin_field("Q").unwrap();
        LFunction::new(Arc::new(Newform::delta(1 << 16)), &q, 400).unwrap()
    }

    #[test]
    fn trivial_twist_matches_direct_series() {
        let lf = delta();
        let t = TwistData::trivial();
        let s = Complex64::new(9.0, 0.0);
        let a = afe_lvalue(&lf, &t, s, &AFEConfig::default()).unwrap();
        let d = direct_series(&lf, &t, s, 60_000).unwrap();
        assert!((a.value() - d.value()).norm() < 1e-10, "{:?} {:?}", a, d);
        assert!(direct_series(&lf, &t, Complex64::new(6.0, 0.0), 100).is_err());
    }

    #[test]
    fn central_value_y_invariant() {
        let lf = delta();
        let t = TwistData::trivial();
        let s = Complex64::new(6.0, 0.0);
        let a = afe_lvalue(&lf, &t, s, &AFEConfig { y: Some(0.5), ..Default::default() }).unwrap();
        let b = afe_lvalue(&lf, &t, s, &AFEConfig { y: Some(2.0), ..Default::default() }).unwrap();
        // L(6, Delta) = 0.792122...
        assert!((a.value() - b.value()).norm() < 1e-10);
        assert!((a.value_re - 0.792_122_4).abs() < 1e-6, "{}", a.value_re);
    }

    #[test]
    fn twisted_value_y_invariant_and_matches_direct() {
        use crate::character::char_enumerate;
        use crate::nf::Ideal;
        use crate::rayclass::rcg_build;
        let f = Arc::new(builtin_field("Q").unwrap());
        let pr = Ideal::principal(&f, &f.from_int(5)).unwrap();
        let rcg = rcg_build(f, 5, &pr, 2).unwrap();
        let chi = char_enumerate(&rcg, 2, true).into_iter().find(|c| c.order == 5).unwrap();
        let t = TwistData::from_hecke(&rcg, &chi, Complex64::new(1.0, 0.0)).unwrap();
        let lf = delta();
        let s = Complex64::new(6.0, 0.0);
        let a = afe_lvalue(&lf, &t, s, &AFEConfig { y: Some(12.0), ..Default::default() }).unwrap();
        let b = afe_lvalue(&lf, &t, s, &AFEConfig { y: Some(50.0), ..Default::default() }).unwrap();
        assert!((a.value() - b.value()).norm() < 1e-9 * a.value().norm(), "{:?} {:?}", a.value(), b.value());
        let s8 = Complex64::new(8.0, 0.0);
        let c = afe_lvalue(&lf, &t, s8, &AFEConfig::default()).unwrap();
        let d = direct_series(&lf, &t, s8, 60_000).unwrap();
        assert!((c.value() - d.value()).norm() < 1e-9 * d.value().norm());
    }
}
