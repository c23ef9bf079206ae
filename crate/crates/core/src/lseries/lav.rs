//! Galois-averaged central values.

use super::afe::{AFEConfig, AfePlan, LFunction, LValueResult, TwistData};
use crate::character::HeckeCharacter;
use crate::error::{Error, Result};
use crate::gauss::{average_char, galois_orbit, orbit_root_numbers, HeckeFieldContext};
use crate::modarith::gcd;
use crate::rayclass::RayClassGroup;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitValue {
    pub label: String,
    pub value_re: f64,
    pub value_im: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LavResult {
    pub character: String,
    pub orbit_size: usize,
    /// Route (a): mean of the individual values.
    pub average: LValueResult,
    /// Route (b): averaged coefficients inside the two sums.
    pub route_b_re: f64,
    pub route_b_im: f64,
    pub cross_check: f64,
    pub main_term: f64,
    /// `|L_av - main term|`.
    pub residual: f64,
    /// Size of the dual sum in route (b), after dividing by `Gamma_F(s)`.
    pub dual_contribution: f64,
    pub min_abs_value: f64,
    pub values: Vec<OrbitValue>,
}

impl LavResult {
    pub fn value(&self) -> Complex64 {
        self.average.value()
    }
}

/// Mean of `W(chi^t) conj(chi^t)(r)` over the orbit for every residue `r` mod `q`, using the
/// orbit's root numbers computed once.
pub fn iota_table(rcg: &RayClassGroup, orbit: &[HeckeCharacter], ws: &[Complex64], q: u64) -> Vec<Complex64> {
    let size = orbit.len() as f64;
    (0..q)
        .into_par_iter()
        .map(|r| {
            if q > 1 && gcd(r, rcg.p) != 1 {
                return Complex64::new(0.0, 0.0);
            }
            match rcg.class_of_residue(r as i64) {
                None => Complex64::new(0.0, 0.0),
                Some(cl) => orbit.iter().zip(ws).map(|(c, w)| w * c.eval(&cl).conj().to_complex()).sum::<Complex64>() / size,
            }
        })
        .collect()
}

/// `L_av(s)` for the orbit of `psi`, computed by both routes and cross-checked to `cross_tol`.
pub fn lav(
    lf: &LFunction,
    rcg: &RayClassGroup,
    psi: &HeckeCharacter,
    ctx: &HeckeFieldContext,
    s: Complex64,
    cfg: &AFEConfig,
    cross_tol: f64,
) -> Result<LavResult> {
    let neb = lf.form.neb_factor;
    let mut orbit = galois_orbit(rcg, psi, ctx)?;
    orbit.sort_by(|a, b| a.exps.cmp(&b.exps));
    let twists: Vec<TwistData> = orbit.par_iter().map(|c| TwistData::from_hecke(rcg, c, neb)).collect::<Result<_>>()?;
    let q = twists[0].q;
    let plan = AfePlan::new(lf, q, s, cfg)?;
    let results: Vec<LValueResult> = twists.par_iter().map(|t| plan.evaluate(t)).collect::<Result<_>>()?;
    let size = results.len() as f64;
    let mean: Complex64 = results.iter().map(|r| r.value()).sum::<Complex64>() / size;

    let (first, second) = if psi.conductor == 0 {
        (vec![Complex64::new(1.0, 0.0)], vec![Complex64::new(1.0, 0.0)])
    } else {
        let first = (0..q)
            .into_par_iter()
            .map(|r| {
                if gcd(r, rcg.p) != 1 {
                    Ok(Complex64::new(0.0, 0.0))
                } else {
                    average_char(rcg, psi, ctx, r as i64).map(|a| a.value)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let ws = orbit_root_numbers(rcg, &orbit, neb)?;
        (first, iota_table(rcg, &orbit, &ws, q))
    };
    let route_b = plan.combine(&first, &second);
    let zero = vec![Complex64::new(0.0, 0.0); q as usize];
    let dual = plan.combine(&zero, &second);
    let cross = (route_b - mean).norm() / mean.norm().max(1e-300);
    if cross > cross_tol {
        return Err(Error::CrossCheck(format!("routes differ by {cross:e} for {}", psi.label())));
    }
    let error_est = results.iter().map(|r| r.error_est).fold(0.0, f64::max);
    let mut average = plan.result(&psi.label(), mean);
    average.error_est = error_est;
    let main = plan.main_term.re;
    Ok(LavResult {
        character: psi.label(),
        orbit_size: results.len(),
        route_b_re: route_b.re,
        route_b_im: route_b.im,
        cross_check: cross,
        main_term: main,
        residual: (mean - plan.main_term).norm(),
        dual_contribution: dual.norm(),
        min_abs_value: results.iter().map(|r| r.value().norm()).fold(f64::INFINITY, f64::min),
        values: results.iter().map(|r| OrbitValue { label: r.label.clone(), value_re: r.value_re, value_im: r.value_im }).collect(),
        average,
    })
}

/// The admissible range `(a_min, a_max)` for `y = N(p)^{a n}`.
pub fn exponent_window(theta: f64, delta_abs: u64) -> Result<(f64, f64)> {
    if !(0.0..0.5).contains(&theta) {
        return Err(Error::Precondition(format!("theta must lie in [0, 1/2), got {theta}")));
    }
    if delta_abs == 0 {
        return Err(Error::Precondition("|Delta| must be positive".into()));
    }
    let d = theta + 0.5;
    Ok(((2.0 * theta + 0.5) / d, (1.0 + 1.0 / delta_abs as f64) / d))
}

/// `N(p)^{n(2 theta + 2 eps + 3/2 - 1/f)} / y^{theta + eps + 1/2}`, the dual-sum envelope.
pub fn dual_envelope(norm_p: f64, n: u32, theta: f64, eps: f64, f: u32, y: f64) -> f64 {
    norm_p.powf(n as f64 * (2.0 * theta + 2.0 * eps + 1.5 - 1.0 / f as f64)) / y.powf(theta + eps + 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::char_enumerate;
    use crate::gauss::average_iota;
    use crate::lseries::newform::Newform;
    use crate::nf::{builtin_field, Ideal};
    use crate::rayclass::rcg_build;
    use std::sync::Arc;

    #[test]
    fn window_values() {
        let (a, b) = exponent_window(0.0, 2).unwrap();
        assert!((a - 1.0).abs() < 1e-15 && (b - 3.0).abs() < 1e-15);
        let (a, b) = exponent_window(7.0 / 64.0, 2).unwrap();
        assert!((a - 46.0 / 39.0).abs() < 1e-14 && (b - 96.0 / 39.0).abs() < 1e-14);
        assert!(exponent_window(0.5, 2).is_err());
    }

    #[test]
    fn routes_agree_small_orbit() {
        let f = Arc::new(builtin_field("Q").unwrap());
        let pr = Ideal::principal(&f, &f.from_int(5)).unwrap();
        let rcg = rcg_build(f.clone(), 5, &pr, 2).unwrap();
        let lf = LFunction::new(Arc::new(Newform::delta(1 << 15)), &f, 400).unwrap();
        let ctx = HeckeFieldContext { p: 5, n0: 0 };
        let psi = char_enumerate(&rcg, 2, true).into_iter().find(|c| c.order == 5).unwrap();
        let r = lav(&lf, &rcg, &psi, &ctx, Complex64::new(6.0, 0.0), &AFEConfig { y: Some(25.0), ..Default::default() }, 1e-7).unwrap();
        assert_eq!(r.orbit_size, 4);
        assert!(r.cross_check < 1e-10);
        let orbit = galois_orbit(&rcg, &psi, &ctx).unwrap();
        let ws = orbit_root_numbers(&rcg, &orbit, Complex64::new(1.0, 0.0)).unwrap();
        let tab = iota_table(&rcg, &orbit, &ws, 25);
        for a in [1i64, 2, 7, 24] {
            let want = average_iota(&rcg, &psi, &ctx, a, Complex64::new(1.0, 0.0)).unwrap().value;
            assert!((tab[a as usize] - want).norm() < 1e-12);
        }
    }
}
