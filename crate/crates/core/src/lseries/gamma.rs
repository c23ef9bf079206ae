use crate::error::{Error, Result};
use crate::nf::NumberField;
use crate::special::lgamma;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use std::f64::consts::TAU;

/// The archimedean factor `Gamma_{F,k,m}(s)`.
#[derive(Clone, Debug)]
pub struct GammaFactor {
    pub r1: usize,
    pub r2: usize,
    /// `m_s` over all embeddings.
    pub m_vec: Vec<i64>,
    pub disc_abs: f64,
    pub unit_index: f64,
    /// `ln( 2^{r1} / [O^x : O^x_+] * prod_{complex} binom(n*_s, n_sc + 1) / 4 )`.
    pub log_const: f64,
}

fn ln_binom(n: i64, k: i64) -> f64 {
    if k < 0 || k > n {
        return f64::NEG_INFINITY;
    }
    (1..=k).map(|i| ((n - k + i) as f64).ln() - (i as f64).ln()).sum()
}

impl GammaFactor {
    pub fn new(nf: &NumberField, k_vec: &[i64], m_vec: &[i64]) -> GammaFactor {
        let r1 = nf.r1;
        let r2 = nf.r2;
        let unit_index = nf.unit_index_plus() as f64;
        let mut log_const = r1 as f64 * 2f64.ln() - unit_index.ln();
        for j in 0..r2 {
            // complex embeddings come in pairs (s, s conj) at positions r1 + j and r1 + r2 + j
            let n_s = k_vec[r1 + j] - 2;
            let n_c = k_vec[r1 + r2 + j] - 2;
            let n_star = n_s + n_c + 2;
            log_const += ln_binom(n_star, n_c + 1) - 4f64.ln();
        }
        GammaFactor {
            r1,
            r2,
            m_vec: m_vec.to_vec(),
            disc_abs: nf.abs_disc().to_f64().unwrap(),
            unit_index,
            log_const,
        }
    }

    pub fn ln_eval(&self, s: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(self.log_const, 0.0) + s * self.disc_abs.ln();
        for &m in &self.m_vec {
            let z = s - m as f64;
            if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
                return Err(Error::Pole(format!("Gamma pole at s={s}")));
            }
            acc += -z * TAU.ln() + lgamma(z);
        }
        Ok(acc)
    }

    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        Ok(self.ln_eval(s)?.exp())
    }

    /// Largest `m_s`; `Gamma_F` is holomorphic for `Re s > max m_s`.
    pub fn max_m(&self) -> i64 {
        self.m_vec.iter().copied().max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::builtin_field;
    use crate::special::gamma;

    #[test]
    fn rational_specialization() {
        let q = builtin_field("Q").unwrap();
        let g = GammaFactor::new(&q, &[12], &[0]);
        for s in [1.0, 6.0, 11.5, 30.0] {
            let z = Complex64::new(s, 0.0);
            let want = TAU.powf(-s) * gamma(z).re;
            let got = g.eval(z).unwrap().re;
            assert!((got / want - 1.0).abs() < 1e-12, "s={s}");
        }
        let a = g.eval(Complex64::new(7.0, 0.0)).unwrap();
        let b = g.eval(Complex64::new(6.0, 0.0)).unwrap();
        assert!(((a / b).re - 6.0 / TAU).abs() < 1e-12);
        assert!(g.eval(Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn real_quadratic_constants() {
        let f = builtin_field("Q(sqrt2)").unwrap();
        let g = GammaFactor::new(&f, &[2, 2], &[0, 0]);
        let s = Complex64::new(3.0, 0.0);
        let want = 4.0 / 4.0 * 8f64.powf(3.0) * (TAU.powf(-3.0) * 2.0).powi(2);
        assert!((g.eval(s).unwrap().re / want - 1.0).abs() < 1e-12);
    }
}
