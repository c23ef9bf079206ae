//! The acceptance suite: one function per criterion, each returning a pass/fail line with the
//! measured constants.

use crate::character::{char_enumerate, dual, HeckeCharacter};
use crate::cones::{
    count_progression, count_progression_brute, min_norm_coset, torsion_norm_bound, verify_count_bound, DomainReducer,
};
use crate::error::Result;
use crate::experiment::{pick_primitive, row_level, run_lav_experiment, ExperimentConfig};
use crate::gauss::{
    average_char, average_support, delta_residue, gauss_sum_local, kloosterman_bound_report, phase_exp,
    primitive_local_characters, root_number_local, root_number_w, HeckeFieldContext, LocalCharacter, SupportVariant,
};
use crate::lseries::newform::delta_doc;
use crate::lseries::{afe_lvalue, direct_series, fe_residual, newform_load, AFEConfig, LFunction, Newform, TwistData, VFunction};
use crate::modarith::gcd;
use crate::nf::{builtin_field, FieldElement, Ideal, NumberField};
use crate::rayclass::{rcg_build, RayClassGroup};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use std::time::Instant;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!("[{}] {:>2} {}: {} ({:.1}s)", if self.passed { "PASS" } else { "FAIL" }, self.id, self.name, self.detail, self.seconds)
    }
}

fn timed(id: u32, name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> CriterionReport {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionReport { id, name: name.into(), passed, detail, seconds: start.elapsed().as_secs_f64() }
}

fn q_field() -> Arc<NumberField> {
    Arc::new(builtin_field("Q").expect("builtin Q"))
}

fn q_rcg(p: u64, n: u32) -> Result<RayClassGroup> {
    let f = q_field();
    let pr = Ideal::principal(&f, &f.from_int(p as i64))?;
    rcg_build(f, p, &pr, n)
}

/// Ray class group of `Q(sqrt2)` at `(3 + sqrt2)^n`.
pub fn qsqrt2_rcg(n: u32) -> Result<RayClassGroup> {
    let f = Arc::new(builtin_field("Q(sqrt2)")?);
    let pr = Ideal::principal(&f, &FieldElement::from_ints(&[3, 1]))?;
    rcg_build(f, 7, &pr, n)
}

/// Every primitive local character of conductor `p^n` for `p in {3,5,7}`, `n <= 3`, paired with
/// the residue of the different (1 over Q), plus ten characters at `(3 + sqrt2)`.
pub fn gauss_test_characters() -> Result<Vec<(String, LocalCharacter, i64)>> {
    let mut out = Vec::new();
    for p in [3u64, 5, 7] {
        for n in 1..=3 {
            for phi in primitive_local_characters(p, n, n) {
                out.push((format!("Q p={p} {}", phi.label()), phi, 1));
            }
        }
    }
    let rcg = qsqrt2_rcg(2)?;
    let delta = delta_residue(&rcg)?;
    for c in 1..=2 {
        let all = primitive_local_characters(7, 2, c);
        let step = (all.len() / 5).max(1);
        for phi in all.into_iter().step_by(step).take(5) {
            out.push((format!("Q(sqrt2) {}", phi.label()), phi, delta));
        }
    }
    Ok(out)
}

pub fn criterion_1() -> CriterionReport {
    timed(1, "Gauss-sum modulus", || {
        let chars = gauss_test_characters()?;
        let mut worst = 0.0f64;
        for (_, phi, delta) in &chars {
            let g = gauss_sum_local(phi, *delta, 1)?;
            let norm = phi.grp.p.pow(phi.conductor()) as f64;
            worst = worst.max((g.value.norm_sqr() - norm).abs());
        }
        Ok((worst < 1e-9, format!("{} characters, max ||G|^2 - N(c)| = {worst:.2e}", chars.len())))
    })
}

pub fn criterion_2() -> CriterionReport {
    timed(2, "Gauss-sum identities", || {
        let chars = gauss_test_characters()?;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut exact_fail = 0usize;
        let mut checks = 0usize;
        let mut worst = 0.0f64;
        for (_, phi, delta) in &chars {
            let p = phi.grp.p;
            let pc = p.pow(phi.conductor());
            let g1 = gauss_sum_local(phi, *delta, 1)?;
            let n = g1.exact.n;
            for _ in 0..50 {
                let a = loop {
                    let a = rng.gen_range(1..pc as i64 * 4);
                    if gcd(a as u64, p) == 1 {
                        break a;
                    }
                };
                let ga = gauss_sum_local(phi, *delta, a)?;
                let rhs = g1.exact.shift(phase_exp(&phi.value(a).unwrap().conj(), n));
                if ga.exact.c != rhs.c && !ga.exact.eq_exact(&rhs) {
                    exact_fail += 1;
                }
                checks += 1;
            }
            let gbar = gauss_sum_local(&phi.conj(), *delta, 1)?;
            let want = phi.parity() as f64 * pc as f64;
            worst = worst.max((g1.value * gbar.value - want).norm());
        }
        Ok((
            exact_fail == 0 && worst < 1e-9,
            format!("{checks} shifted sums exact ({exact_fail} failures); max |G(phi)G(conj phi) - phi(-1)N(c)| = {worst:.2e}"),
        ))
    })
}

/// Exhaustive comparison of exact Galois averages with a support predicate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SupportScan {
    pub n0: u32,
    pub pairs: usize,
    pub corrected_mismatches: usize,
    pub strict_mismatches: usize,
    pub sharp_mismatches: usize,
    /// Pairs with value order exactly `p^{n0+1}`.
    pub layer: usize,
    pub strict_equals_layer: bool,
}

pub fn support_scan(n0: u32) -> Result<SupportScan> {
    let mut s = SupportScan {
        n0,
        pairs: 0,
        corrected_mismatches: 0,
        strict_mismatches: 0,
        sharp_mismatches: 0,
        layer: 0,
        strict_equals_layer: true,
    };
    for p in [3u64, 5, 7] {
        let mut n = 1;
        while p.pow(n) <= 625 {
            let rcg = q_rcg(p, n)?;
            let ctx = HeckeFieldContext { p, n0 };
            let chars: Vec<HeckeCharacter> = dual(&rcg).into_iter().filter(|c| c.is_p_power_order()).collect();
            for chi in &chars {
                for (a, cl) in rcg.residue_classes() {
                    let nonzero = !average_char(&rcg, chi, &ctx, a as i64)?.is_zero_exact().unwrap_or(false);
                    let v = chi.eval(&cl).p_order_exp(p);
                    let strict_miss = nonzero != average_support(&rcg, chi, &ctx, a as i64, SupportVariant::Strict);
                    s.pairs += 1;
                    s.corrected_mismatches +=
                        (nonzero != average_support(&rcg, chi, &ctx, a as i64, SupportVariant::Corrected)) as usize;
                    s.sharp_mismatches += (nonzero != average_support(&rcg, chi, &ctx, a as i64, SupportVariant::Sharp)) as usize;
                    s.strict_mismatches += strict_miss as usize;
                    let in_layer = v == n0 + 1;
                    s.layer += in_layer as usize;
                    if strict_miss != in_layer {
                        s.strict_equals_layer = false;
                    }
                }
            }
            n += 1;
        }
    }
    Ok(s)
}

pub fn criterion_3() -> CriterionReport {
    timed(3, "Galois-average oracle", || {
        let mut ok = true;
        let mut parts = Vec::new();
        for n0 in [0, 1] {
            let s = support_scan(n0)?;
            ok &= s.corrected_mismatches == 0 && s.strict_equals_layer;
            parts.push(format!(
                "n0={}: {} pairs, corrected-predicate mismatches {}, strict-predicate mismatches {} vs order-p^(n0+1) layer {} (equal: {}), sharp-predicate mismatches {}",
                s.n0, s.pairs, s.corrected_mismatches, s.strict_mismatches, s.layer, s.strict_equals_layer, s.sharp_mismatches
            ));
        }
        Ok((ok, parts.join("; ")))
    })
}

pub fn criterion_4() -> CriterionReport {
    timed(4, "Root numbers", || {
        let one = Complex64::new(1.0, 0.0);
        let mut worst = 0.0f64;
        let mut count = 0usize;
        for (_, phi, delta) in gauss_test_characters()? {
            let w = root_number_local(&phi, delta, one, f64::INFINITY)?;
            worst = worst.max((w.norm() - 1.0).abs());
            count += 1;
        }
        let mut groups = vec![qsqrt2_rcg(1)?, qsqrt2_rcg(2)?];
        for n in 1..=3 {
            groups.push(q_rcg(5, n)?);
        }
        for rcg in &groups {
            for chi in dual(rcg) {
                let w = root_number_local(&LocalCharacter::from_hecke(rcg, &chi), delta_residue(rcg)?, one, f64::INFINITY)?;
                worst = worst.max((w.norm() - 1.0).abs());
                count += 1;
            }
        }
        Ok((worst < 1e-9, format!("{count} characters, max ||W| - 1| = {worst:.2e}")))
    })
}

/// Measured constants `C_n = max |psi^iota_av| / N(p)^{-n/2}` for `n = 1..=nmax`.
pub fn kloosterman_constants(p: u64, nmax: u32) -> Result<Vec<f64>> {
    let ctx = HeckeFieldContext { p, n0: 0 };
    (1..=nmax)
        .map(|n| {
            let rcg = q_rcg(p, row_level(n, 0))?;
            let psi = pick_primitive(&rcg)?;
            Ok(kloosterman_bound_report(&rcg, &psi, &ctx, n, Complex64::new(1.0, 0.0))?.constant)
        })
        .collect()
}

pub fn criterion_5() -> CriterionReport {
    timed(5, "Kloosterman envelope", || {
        let c = kloosterman_constants(5, 3)?;
        let hi = c.iter().cloned().fold(0.0, f64::max);
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        Ok((hi / lo <= 4.0, format!("C_n for n=1..3: {:?}, spread {:.3}", c.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>(), hi / lo)))
    })
}

fn delta_lfunction(len: usize) -> Result<LFunction> {
    LFunction::new(Arc::new(Newform::delta(len)), &q_field(), 400)
}

pub fn criterion_6() -> CriterionReport {
    timed(6, "V-function asymptotics", || {
        let lf = delta_lfunction(1 << 12)?;
        let v = VFunction::new(lf.gamma.clone(), lf.kernel.clone(), Complex64::new(6.0, 0.0), 1.0)?;
        let g = v.gamma_at_s();
        let mut small_ok = true;
        let mut devs = Vec::new();
        for x in [1e-2, 1e-4, 1e-6] {
            let d = (v.eval(x)? / g - 1.0).norm();
            small_ok &= d <= 1e-2 * x.sqrt();
            devs.push(d);
        }
        let vals: Vec<f64> = [10.0, 25.0, 50.0].iter().map(|&x| v.eval(x).map(|z| z.re)).collect::<Result<_>>()?;
        let decay_ok = vals[1] / vals[0] < (25.0f64 / 10.0).powi(-3) && vals[2] / vals[1] < 2f64.powi(-3);
        let (_, halving) = v.eval_checked(1.0, 1e-10, g.norm())?;
        Ok((
            small_ok && decay_ok && halving < 1e-10,
            format!(
                "|V/Gamma - 1| at 1e-2,1e-4,1e-6: {:.2e} {:.2e} {:.2e}; V(25)/V(10) = {:.2e}, V(50)/V(25) = {:.2e}; step halving at x=1: {:.2e}",
                devs[0],
                devs[1],
                devs[2],
                vals[1] / vals[0],
                vals[2] / vals[1],
                halving
            ),
        ))
    })
}

/// Trivial character and two order-5 characters of conductor 25 over Q.
pub fn oracle_twists() -> Result<Vec<TwistData>> {
    let rcg = q_rcg(5, 2)?;
    let mut out = vec![TwistData::trivial()];
    let mut order5: Vec<HeckeCharacter> = char_enumerate(&rcg, 2, true).into_iter().filter(|c| c.order == 5).collect();
    order5.sort_by(|a, b| a.exps.cmp(&b.exps));
    for chi in order5.iter().take(2) {
        out.push(TwistData::from_hecke(&rcg, chi, Complex64::new(1.0, 0.0))?);
    }
    Ok(out)
}

pub fn criterion_7() -> CriterionReport {
    timed(7, "AFE oracle equivalence", || {
        let lf = delta_lfunction(200_000)?;
        let mut worst_direct = 0.0f64;
        let mut worst_y = 0.0f64;
        for t in oracle_twists()? {
            let s8 = Complex64::new(8.0, 0.0);
            let a = afe_lvalue(&lf, &t, s8, &AFEConfig::default())?.value();
            let d = direct_series(&lf, &t, s8, 200_000)?.value();
            worst_direct = worst_direct.max((a - d).norm() / d.norm());
            let y0 = lf.twisted_level(t.q).sqrt();
            let s6 = Complex64::new(6.0, 0.0);
            let vals: Vec<Complex64> = [0.5, 1.0, 2.0]
                .iter()
                .map(|f| afe_lvalue(&lf, &t, s6, &AFEConfig { y: Some(f * y0), ..Default::default() }).map(|r| r.value()))
                .collect::<Result<_>>()?;
            for v in &vals[1..] {
                worst_y = worst_y.max((v - vals[0]).norm() / vals[0].norm());
            }
        }
        Ok((
            worst_direct < 1e-8 && worst_y < 1e-8,
            format!("max relative AFE - direct at s=8: {worst_direct:.2e}; max y-variation at s=6: {worst_y:.2e}"),
        ))
    })
}

pub fn criterion_8() -> CriterionReport {
    timed(8, "Functional-equation residual", || {
        let lf = delta_lfunction(1 << 12)?;
        let t = TwistData::trivial();
        let r: Vec<f64> =
            [5.5, 6.5].iter().map(|&s| fe_residual(&lf, &t, Complex64::new(s, 0.0), &AFEConfig::default())).collect::<Result<_>>()?;
        Ok((r.iter().all(|&x| x < 1e-6), format!("residual at s=5.5: {:.2e}, s=6.5: {:.2e}", r[0], r[1])))
    })
}

pub fn criterion_9() -> CriterionReport {
    timed(9, "Ramanujan bound", || {
        let f = Newform::delta(10_000);
        f.check_ramanujan_exact(10_000)?;
        let worst = f.check_ramanujan(10_000)?;
        let q = builtin_field("Q")?;
        let mut doc = delta_doc(2000);
        let label = doc.rows[3].0.clone();
        doc.rows[3].1 *= 1e3;
        let rejected = match newform_load(&doc, &q) {
            Err(crate::Error::BoundViolation { label: l, .. }) => Some(l),
            _ => None,
        };
        Ok((
            rejected.as_deref() == Some(label.as_str()),
            format!("max |tau(p)| / 2p^(11/2) over p <= 1e4: {worst:.4}; corrupted row {label} rejected: {}", rejected.is_some()),
        ))
    })
}

pub fn criterion_10(cfg: &ExperimentConfig) -> CriterionReport {
    timed(10, "Non-vanishing experiment", || {
        let rep = run_lav_experiment(cfg)?;
        let nonvanishing = rep.rows.iter().all(|r| r.nonvanishing.iter().all(|&b| b));
        let lav_nonzero = rep.rows.iter().all(|r| Complex64::new(r.lav_re, r.lav_im).norm() > 0.0);
        let cross = rep.rows.iter().map(|r| r.cross_check).fold(0.0, f64::max);
        let dists: Vec<String> = rep.rows.iter().map(|r| format!("n={}: {:.4e}", r.n, r.dist_to_one)).collect();
        let minabs = rep.rows.iter().map(|r| r.min_abs_value).fold(f64::INFINITY, f64::min);
        Ok((
            nonvanishing && lav_nonzero && cross < 1e-7 && rep.trend_ok,
            format!(
                "|L_av - 1| {}; min |L| over orbits {minabs:.4}; max route difference {cross:.1e}; {}",
                dists.join(", "),
                rep.note
            ),
        ))
    })
}

pub fn criterion_11() -> CriterionReport {
    timed(11, "Lattice counts", || {
        let rq = DomainReducer::new(q_field())?;
        let rs = DomainReducer::new(Arc::new(builtin_field("Q(sqrt2)")?))?;
        let five = rq.nf.from_int(5);
        let pi = FieldElement::from_ints(&[3, 1]);
        let mut mism = 0;
        let mut cases = 0;
        let q_cases: Vec<(FieldElement, u32, f64)> =
            vec![(rq.nf.one(), 1, 100.0), (rq.nf.one(), 2, 1000.0), (rq.nf.from_int(2), 1, 500.0), (rq.nf.from_int(3), 2, 2000.0)];
        for (a, n, x) in &q_cases {
            cases += 1;
            mism += (count_progression(&rq, a, &five, *n, *x, 0)?.count != count_progression_brute(&rq, a, &five, *n, *x)?) as usize;
        }
        let s_cases: Vec<(FieldElement, u32, f64)> = vec![
            (rs.nf.one(), 1, 500.0),
            (rs.nf.one(), 2, 2000.0),
            (FieldElement::from_ints(&[1, 1]), 1, 300.0),
            (FieldElement::from_ints(&[2, 1]), 1, 800.0),
        ];
        for (a, n, x) in &s_cases {
            cases += 1;
            mism += (count_progression(&rs, a, &pi, *n, *x, 0)?.count != count_progression_brute(&rs, a, &pi, *n, *x)?) as usize;
        }
        let xs = [10.0, 100.0, 1000.0, 10_000.0];
        let bq = verify_count_bound(&rq, &five, &[1, 2, 3], &xs)?;
        let bs = verify_count_bound(&rs, &pi, &[1, 2, 3], &xs)?;
        let mq: Vec<f64> = (1..=4).map(|n| min_norm_coset(&rq, &five, n).map(|m| m.ratio)).collect::<Result<_>>()?;
        let ms: Vec<f64> = (1..=2).map(|n| min_norm_coset(&rs, &pi, n).map(|m| m.ratio)).collect::<Result<_>>()?;
        let stable = |v: &[f64]| {
            let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = v.iter().cloned().fold(0.0, f64::max);
            lo > 0.0 && hi / lo <= 2.0
        };
        let mut torsion_ok = true;
        let mut tratios = Vec::new();
        for n in 1..=3 {
            let t = torsion_norm_bound(&rq, &q_rcg(5, n)?, 0.5)?;
            torsion_ok &= t.passes && t.delta_order == 2;
            tratios.push(format!("{:.3}", t.min_ratio));
        }
        let ok = mism == 0 && bq.stable && bs.stable && stable(&mq) && stable(&ms) && torsion_ok;
        Ok((
            ok,
            format!(
                "{cases} counts vs brute force, {mism} mismatches; count-bound sup Q {:.3} (spread {:.2}), Q(sqrt2) {:.3} (spread {:.2}); \
                 min-norm ratios Q {:?}, Q(sqrt2) {:?}; torsion ratios {:?}",
                bq.sup,
                bq.spread,
                bs.sup,
                bs.spread,
                mq.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>(),
                ms.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>(),
                tratios
            ),
        ))
    })
}

/// All criteria in order; `fast` runs the experiment at AFE tolerance `1e-8`.
pub fn verify_all(fast: bool) -> Vec<CriterionReport> {
    let cfg = if fast { ExperimentConfig { tol: 1e-8, ..Default::default() } } else { ExperimentConfig::default() };
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(&cfg),
        criterion_11(),
    ]
}

#[doc(hidden)]
pub fn _root_number_w_for_cli(rcg: &RayClassGroup, chi: &HeckeCharacter) -> Result<Complex64> {
    root_number_w(rcg, chi, Complex64::new(1.0, 0.0))
}
