//! Complex log-gamma.

use num_complex::Complex64;
use std::f64::consts::PI;

const G: f64 = 7.0;
const COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Stirling series with recurrence shift, used for large `|z|`.
fn lgamma_stirling(z: Complex64) -> Complex64 {
    // shift up until |z| >= 15 so the asymptotic series is accurate to machine precision
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            + inv2 * (-1.0 / 360.0 + inv2 * (1.0 / 1260.0 + inv2 * (-1.0 / 1680.0 + inv2 * (1.0 / 1188.0 + inv2 * (-691.0 / 360360.0))))));
    (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series - shift
}

/// `ln Gamma(z)` on the principal branch of the Stirling form; exponentiate for `Gamma`.
pub fn lgamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        let s = (PI * z).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - lgamma(1.0 - z);
    }
    if z.norm() > 10.0 {
        return lgamma_stirling(z);
    }
    let z1 = z - 1.0;
    let mut x = Complex64::new(COEF[0], 0.0);
    for (i, c) in COEF.iter().enumerate().skip(1) {
        x += c / (z1 + i as f64);
    }
    let t = z1 + G + 0.5;
    0.5 * (2.0 * PI).ln() + (z1 + 0.5) * t.ln() - t + x.ln()
}

pub fn gamma(z: Complex64) -> Complex64 {
    lgamma(z).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    #[test]
    fn factorials() {
        let mut f = 1.0f64;
        for n in 1..30 {
            let g = gamma(c(n as f64, 0.0)).re;
            assert!((g - f).abs() / f < 1e-13, "n={n} {g} vs {f}");
            f *= n as f64;
        }
        assert!((gamma(c(0.5, 0.0)).re - PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn recurrence_off_axis() {
        for &(x, y) in &[(0.3, 2.0), (6.0, 17.0), (-2.5, 1.0), (40.0, -80.0), (3.0, 200.0)] {
            let z = c(x, y);
            let lhs = lgamma(z + 1.0);
            let rhs = lgamma(z) + z.ln();
            let d = (lhs - rhs).exp() - 1.0;
            assert!(d.norm() < 1e-12, "z={z} d={d}");
        }
    }

    #[test]
    fn modulus_on_critical_line() {
        // |Gamma(1/2 + iy)|^2 = pi / cosh(pi y)
        for y in [1.0, 5.0, 20.0] {
            let g = lgamma(c(0.5, y)).re * 2.0;
            let want = (PI / (PI * y).cosh()).ln();
            assert!((g - want).abs() < 1e-12);
        }
    }
}
