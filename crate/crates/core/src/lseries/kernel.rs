//! The smoothing kernel `kappa` and the cutoff functions `V_1`, `V_2`.

use super::gamma::GammaFactor;
use crate::error::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::HashMap;
use std::f64::consts::{E, TAU};
use std::sync::{Arc, Mutex};

/// `Phi(y) = c exp(-1/(1-(log y)^2))` on `[1/e, e]`, discretized in `v = log y`.
///
/// `kappa(t) = sum_i w_i e^{t v_i}` with symmetric nodes and `sum w_i = 1`, so `kappa(0) = 1`
/// and `kappa(-t) = kappa(t)` hold exactly.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub step: f64,
    pub raw_mass: f64,
}

impl Kernel {
    pub fn bump(points: usize) -> Kernel {
        let half = points.max(8) / 2;
        let step = 1.0 / half as f64;
        let mut nodes = Vec::with_capacity(2 * half - 1);
        let mut raw = Vec::with_capacity(2 * half - 1);
        for i in (1..half).rev() {
            let v = i as f64 * step;
            nodes.push(-v);
            raw.push((-1.0 / (1.0 - v * v)).exp());
        }
        nodes.push(0.0);
        raw.push((-1.0f64).exp());
        for i in 1..half {
            let v = i as f64 * step;
            nodes.push(v);
            raw.push((-1.0 / (1.0 - v * v)).exp());
        }
        let mass: f64 = raw.iter().sum();
        let weights = raw.iter().map(|w| w / mass).collect();
        Kernel { nodes, weights, step, raw_mass: mass * step }
    }

    pub fn kappa(&self, t: Complex64) -> Complex64 {
        self.nodes.iter().zip(&self.weights).map(|(&v, &w)| w * (t * v).exp()).sum()
    }

    /// `Phi(y)` with the normalization used by `kappa`.
    pub fn phi(&self, y: f64) -> f64 {
        let v = y.ln();
        if v.abs() >= 1.0 {
            0.0
        } else {
            (-1.0 / (1.0 - v * v)).exp() / self.raw_mass
        }
    }

    /// Largest `|v|` among the nodes, bounding `|kappa(t)| <= e^{vmax |Re t|}`.
    pub fn vmax(&self) -> f64 {
        self.nodes.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

impl Default for Kernel {
    fn default() -> Self {
        Kernel::bump(400)
    }
}

#[derive(Debug)]
struct Contour {
    c: f64,
    h: f64,
    l0: f64,
    pos: Vec<Complex64>,
    neg: Vec<Complex64>,
}

/// `V_{i,s}(x) = (1/2 pi i) int kappa(+-t) Gamma_F(s+t) x^{-t} dt/t`, by the trapezoid rule on a
/// vertical line. Lines left of zero add the residue `Gamma_F(s)`.
#[derive(Debug)]
pub struct VFunction {
    pub gamma: Arc<GammaFactor>,
    pub kernel: Arc<Kernel>,
    pub s: Complex64,
    /// `+1` for `V_1` (uses `kappa(t)`), `-1` for `V_2` (uses `kappa(-t)`).
    pub sign: f64,
    /// Relative truncation level for the contour tails.
    pub eps: f64,
    /// Multiplier on the step size; `0.5` gives the step-halving check.
    pub step_scale: f64,
    residue: Complex64,
    cache: Mutex<HashMap<(i32, i32), Arc<Contour>>>,
}

const H0: f64 = 0.25;

impl VFunction {
    pub fn new(gamma: Arc<GammaFactor>, kernel: Arc<Kernel>, s: Complex64, sign: f64) -> Result<VFunction> {
        if s.re <= gamma.max_m() as f64 {
            return Err(Error::Precondition("Re s must exceed max m".into()));
        }
        let residue = gamma.eval(s)?;
        Ok(VFunction { gamma, kernel, s, sign, eps: 1e-17, step_scale: 1.0, residue, cache: Mutex::new(HashMap::new()) })
    }

    pub fn with_step_scale(&self, scale: f64) -> VFunction {
        VFunction {
            gamma: self.gamma.clone(),
            kernel: self.kernel.clone(),
            s: self.s,
            sign: self.sign,
            eps: self.eps,
            step_scale: scale,
            residue: self.residue,
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// `Gamma_F(s)`, the limit of `V(x)` as `x -> 0`.
    pub fn gamma_at_s(&self) -> Complex64 {
        self.residue
    }

    fn left_shift(&self) -> f64 {
        (0.5 * (self.s.re - self.gamma.max_m() as f64)).min(1.0)
    }

    fn pick(&self, x: f64) -> (i32, i32) {
        let lx = x.ln();
        let ci = if lx < 0.0 {
            -1
        } else {
            let d = (self.gamma.r1 + 2 * self.gamma.r2) as f64;
            let target = TAU * (x / self.gamma.disc_abs).powf(1.0 / d) / E - self.s.re;
            if target <= 2.0 {
                0
            } else {
                ((target / 2.0).log2() * 2.0).floor().min(30.0) as i32
            }
        };
        let c = self.c_of(ci);
        let d = 0.9 * c.abs().min(3.0);
        let hmax = TAU * d / (40.0 + d * lx.abs());
        let mut hi = 0;
        while H0 / 2f64.powi(hi) > hmax && hi < 12 {
            hi += 1;
        }
        (ci, hi)
    }

    fn c_of(&self, ci: i32) -> f64 {
        if ci < 0 {
            -self.left_shift()
        } else {
            2.0 * 2f64.powf(ci as f64 / 2.0)
        }
    }

    fn contour(&self, key: (i32, i32)) -> Result<Arc<Contour>> {
        if let Some(c) = self.cache.lock().unwrap().get(&key) {
            return Ok(c.clone());
        }
        let c = self.c_of(key.0);
        let h = H0 / 2f64.powi(key.1) * self.step_scale;
        let grow = (self.kernel.vmax() * c.abs()).exp();
        let node = |u: f64| -> Result<(Complex64, f64)> {
            let t = Complex64::new(c, u);
            let lg = self.gamma.ln_eval(self.s + t)?;
            let k = self.kernel.kappa(t * self.sign);
            Ok((lg - t.ln() + k.ln(), lg.re - t.norm().ln()))
        };
        let mut logs_pos = Vec::new();
        let mut logs_neg = Vec::new();
        let mut top = f64::NEG_INFINITY;
        let mut j = 0usize;
        loop {
            let u = j as f64 * h;
            let (lp, bp) = node(u)?;
            let (ln, bn) = if j == 0 { (lp, bp) } else { node(-u)? };
            top = top.max(lp.re).max(ln.re);
            logs_pos.push(lp);
            if j > 0 {
                logs_neg.push(ln);
            }
            let bound = bp.max(bn) + grow.ln();
            if j > 8 && bound < top + self.eps.ln() {
                break;
            }
            j += 1;
            if j > 200_000 {
                return Err(Error::Quadrature("contour did not decay".into()));
            }
        }
        let l0 = top;
        let pos = logs_pos.iter().map(|l| (l - l0).exp()).collect();
        let neg = logs_neg.iter().map(|l| (l - l0).exp()).collect();
        let ct = Arc::new(Contour { c, h, l0, pos, neg });
        self.cache.lock().unwrap().insert(key, ct.clone());
        Ok(ct)
    }

    fn sum(&self, ct: &Contour, x: f64) -> Complex64 {
        let lx = x.ln();
        let rot = Complex64::from_polar(1.0, -ct.h * lx);
        let mut acc = ct.pos[0];
        let mut z = Complex64::new(1.0, 0.0);
        for (j, (gp, gn)) in ct.pos.iter().skip(1).zip(&ct.neg).enumerate() {
            if j % 64 == 63 {
                z = Complex64::from_polar(1.0, -((j + 1) as f64) * ct.h * lx);
            } else {
                z *= rot;
            }
            acc += gp * z + gn * z.conj();
        }
        let scale = (ct.l0 - ct.c * lx).exp() * ct.h / TAU;
        let mut v = acc * scale;
        if ct.c < 0.0 {
            v += self.residue;
        }
        v
    }

    pub fn eval(&self, x: f64) -> Result<Complex64> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::Precondition(format!("V needs x > 0, got {x}")));
        }
        let ct = self.contour(self.pick(x))?;
        Ok(self.sum(&ct, x))
    }

    /// Values at many points in parallel; order preserved.
    pub fn eval_many(&self, xs: &[f64]) -> Result<Vec<Complex64>> {
        let mut keys: Vec<(i32, i32)> = xs.iter().map(|&x| self.pick(x)).collect();
        keys.sort_unstable();
        keys.dedup();
        for k in keys {
            self.contour(k)?;
        }
        xs.par_iter().map(|&x| self.eval(x)).collect()
    }

    /// Value together with the step-halving discrepancy; errors beyond `tol` (relative to `scale`).
    pub fn eval_checked(&self, x: f64, tol: f64, scale: f64) -> Result<(Complex64, f64)> {
        let a = self.eval(x)?;
        let b = self.with_step_scale(0.5 * self.step_scale).eval(x)?;
        let d = (a - b).norm() / scale.max(f64::MIN_POSITIVE);
        if d > tol {
            return Err(Error::Quadrature(format!("step halving disagrees by {d:e} at x={x}")));
        }
        Ok((b, d))
    }
}

/// Explicit Mellin check: `kappa(t)` against direct integration of `Phi(y) y^t dy/y`.
pub fn kappa_by_integration(k: &Kernel, t: Complex64, n: usize) -> Complex64 {
    let h = 2.0 / n as f64;
    (1..n).map(|i| {
        let v = -1.0 + i as f64 * h;
        k.phi(v.exp()) * (t * v).exp() * h
    })
    .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::builtin_field;

    fn v1(s: f64) -> VFunction {
        let q = builtin_field("Q").unwrap();
        let g = Arc::new(GammaFactor::new(&q, &[12], &[0]));
        VFunction::new(g, Arc::new(Kernel::default()), Complex64::new(s, 0.0), 1.0).unwrap()
    }

    #[test]
    fn kappa_normalized_and_symmetric() {
        let k = Kernel::default();
        assert!((k.kappa(Complex64::new(0.0, 0.0)) - 1.0).norm() < 1e-15);
        let t = Complex64::new(2.0, 3.0);
        assert!((k.kappa(t) - k.kappa(-t)).norm() < 1e-13);
        assert!((kappa_by_integration(&k, t, 4000) - k.kappa(t)).norm() < 1e-8);
    }

    #[test]
    fn v_limits() {
        let v = v1(6.0);
        let g = v.gamma_at_s().re;
        let small = v.eval(1e-6).unwrap().re;
        assert!((small / g - 1.0).abs() < 1e-3);
        let a = v.eval(25.0).unwrap().re;
        let b = v.eval(50.0).unwrap().re;
        assert!(a > 0.0 && b > 0.0 && b / a < 0.125, "{a} {b}");
    }

    #[test]
    fn continuity_across_contours() {
        let v = v1(6.0);
        for &x in &[0.999_999, 1.000_001, 3.0, 3.1] {
            let a = v.eval(x).unwrap();
            let b = v.with_step_scale(0.5).eval(x).unwrap();
            assert!((a - b).norm() < 1e-12 * v.gamma_at_s().norm(), "x={x}");
        }
        let l = v.eval(0.999_999).unwrap().re;
        let r = v.eval(1.000_001).unwrap().re;
        assert!((l - r).abs() < 1e-5 * v.gamma_at_s().re);
    }
}
