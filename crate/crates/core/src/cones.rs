//! Unit-orbit representatives, cone decompositions and lattice counts in `alpha (1 + p^n)`.
//!
//! Degree one and real quadratic fields only. Elements are handled in integral-basis
//! coordinates as `[i64; 2]`; every domain test is an exact integer sign test.

use crate::error::{Error, Result};
use crate::modarith::gcd;
use crate::nf::{FieldElement, Ideal, LocalIso, NumberField};
use crate::rayclass::{RayClassElement, RayClassGroup};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Arc;

/// Candidate cap for one enumeration box.
pub const BOX_CAP: u128 = 10_000_000;

pub type Coords = [i64; 2];

fn big_to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Precondition("coordinate exceeds 64 bits".into()))
}

/// Integer arithmetic in the integral basis, with exact real-place sign tests.
#[derive(Clone, Debug)]
pub struct DomainReducer {
    pub nf: Arc<NumberField>,
    pub d: usize,
    mult: [[[i64; 2]; 2]; 2],
    tr: [i64; 2],
    /// `(sigma_1 - sigma_2)(b_i)` up to a positive factor.
    diff: [i64; 2],
    /// Fundamental unit with `sigma_1(eps) > 1`; `[1, 0]` over Q.
    pub eps: Coords,
    pub eps_inv: Coords,
    /// `log sigma_1(eps)`.
    pub regulator: f64,
    /// `sigma_i(b_j)`.
    emb: [[f64; 2]; 2],
}

impl DomainReducer {
    pub fn new(nf: Arc<NumberField>) -> Result<DomainReducer> {
        let d = nf.degree;
        if d > 2 || nf.r2 > 0 {
            return Err(Error::Unsupported(format!("cones need Q or a real quadratic field, got {}", nf.label)));
        }
        let mut mult = [[[0i64; 2]; 2]; 2];
        let mut tr = [0i64; 2];
        let mut diff = [0i64; 2];
        let mut emb = [[0.0; 2]; 2];
        for i in 0..d {
            let bi = nf.basis_element(i);
            tr[i] = big_to_i64(&nf.trace(&bi).to_integer())?;
            for j in 0..d {
                let prod = nf.mul(&bi, &nf.basis_element(j)).int_coords();
                for k in 0..d {
                    mult[i][j][k] = big_to_i64(&prod[k])?;
                }
            }
            let e = nf.real_embed(&bi);
            for s in 0..d {
                emb[s][i] = e[s];
            }
        }
        if d == 2 {
            let coeffs: Vec<BigRational> = (0..2).map(|i| nf.to_power(&nf.basis_element(i))[1].clone()).collect();
            let den = coeffs.iter().fold(BigInt::one(), |a, c| a.lcm(c.denom()));
            for i in 0..2 {
                diff[i] = big_to_i64(&(&coeffs[i] * BigRational::from_integer(den.clone())).to_integer())?;
            }
        }
        let mut r = DomainReducer {
            nf: nf.clone(),
            d,
            mult,
            tr,
            diff,
            eps: [1, 0],
            eps_inv: [1, 0],
            regulator: 0.0,
            emb,
        };
        if d == 1 {
            r.eps = r.from_element(&nf.one())?;
            r.eps_inv = r.eps;
            return Ok(r);
        }
        let u = nf
            .units
            .iter()
            .find(|u| nf.real_embed(u).iter().any(|v| (v.abs() - 1.0).abs() > 1e-9))
            .ok_or_else(|| Error::Invariant("real quadratic field without a fundamental unit".into()))?;
        let mut e = r.from_element(u)?;
        if r.sigma1_sign(&e) < 0 {
            e = [-e[0], -e[1]];
        }
        let inv = r.unit_inverse(&e);
        let e = if r.embed(&e)[0] < 1.0 { inv } else { e };
        r.eps = e;
        r.eps_inv = r.unit_inverse(&e);
        r.regulator = r.embed(&e)[0].ln();
        Ok(r)
    }

    pub fn from_element(&self, x: &FieldElement) -> Result<Coords> {
        if !x.is_integral() {
            return Err(Error::Precondition("element must be integral".into()));
        }
        let c = x.int_coords();
        let mut out = [0i64; 2];
        for i in 0..self.d {
            out[i] = big_to_i64(&c[i])?;
        }
        Ok(out)
    }

    pub fn to_element(&self, x: &Coords) -> FieldElement {
        FieldElement::from_ints(&x[..self.d])
    }

    pub fn mul(&self, x: &Coords, y: &Coords) -> Coords {
        let mut out = [0i64; 2];
        for i in 0..self.d {
            for j in 0..self.d {
                let p = x[i] * y[j];
                if p != 0 {
                    for k in 0..self.d {
                        out[k] += p * self.mult[i][j][k];
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self, x: &Coords) -> i64 {
        (0..self.d).map(|i| x[i] * self.tr[i]).sum()
    }

    pub fn conj(&self, x: &Coords) -> Coords {
        if self.d == 1 {
            return *x;
        }
        // conj(x) = Tr(x) * 1 - x
        let t = self.trace(x);
        let one = self.one();
        [t * one[0] - x[0], t * one[1] - x[1]]
    }

    fn one(&self) -> Coords {
        self.from_element(&self.nf.one()).expect("1 is integral")
    }

    pub fn norm(&self, x: &Coords) -> i128 {
        if self.d == 1 {
            return x[0] as i128;
        }
        let r0 = self.mul(x, &[1, 0]);
        let r1 = self.mul(x, &[0, 1]);
        r0[0] as i128 * r1[1] as i128 - r0[1] as i128 * r1[0] as i128
    }

    fn unit_inverse(&self, u: &Coords) -> Coords {
        let c = self.conj(u);
        if self.norm(u) < 0 {
            [-c[0], -c[1]]
        } else {
            c
        }
    }

    pub fn embed(&self, x: &Coords) -> [f64; 2] {
        let mut out = [0.0; 2];
        for s in 0..self.d {
            out[s] = (0..self.d).map(|i| self.emb[s][i] * x[i] as f64).sum();
        }
        out
    }

    fn diff_sign(&self, x: &Coords) -> i64 {
        ((0..self.d).map(|i| x[i] as i128 * self.diff[i] as i128).sum::<i128>()).signum() as i64
    }

    /// Exact sign of `sigma_1(x)`.
    pub fn sigma1_sign(&self, x: &Coords) -> i64 {
        if self.d == 1 {
            return x[0].signum();
        }
        let n = self.norm(x);
        if n > 0 {
            self.trace(x).signum()
        } else if n < 0 {
            self.diff_sign(x)
        } else {
            0
        }
    }

    /// Exact sign of `|sigma_1(x)| - |sigma_2(x)|`.
    fn abs_cmp(&self, x: &Coords) -> i64 {
        self.diff_sign(x) * self.trace(x).signum()
    }

    /// Half-open fundamental domain for the full unit group: `sigma_1 > 0` and
    /// `log(sigma_1 / |sigma_2|) in [0, 2 log sigma_1(eps))`.
    pub fn in_domain(&self, x: &Coords) -> bool {
        if self.sigma1_sign(x) <= 0 {
            return false;
        }
        if self.d == 1 {
            return true;
        }
        let shifted = self.mul(x, &self.conj(&self.eps));
        self.abs_cmp(x) >= 0 && self.abs_cmp(&shifted) < 0
    }

    /// The unique unit multiple of `x` in the domain, with the unit used.
    pub fn reduce(&self, x: &Coords) -> Result<(Coords, Coords)> {
        if self.norm(x) == 0 {
            return Err(Error::Precondition("cannot reduce zero".into()));
        }
        let mut y = *x;
        let mut u = self.one();
        if self.d == 2 {
            let e = self.embed(x);
            let t = (e[0].abs().ln() - e[1].abs().ln()) / (2.0 * self.regulator);
            let k = t.floor() as i64;
            let step = if k > 0 { self.eps_inv } else { self.eps };
            for _ in 0..k.unsigned_abs() {
                y = self.mul(&y, &step);
                u = self.mul(&u, &step);
            }
            for _ in 0..4 {
                if self.abs_cmp(&y) < 0 {
                    y = self.mul(&y, &self.eps);
                    u = self.mul(&u, &self.eps);
                } else if self.abs_cmp(&self.mul(&y, &self.conj(&self.eps))) >= 0 {
                    y = self.mul(&y, &self.eps_inv);
                    u = self.mul(&u, &self.eps_inv);
                }
            }
        }
        if self.sigma1_sign(&y) < 0 {
            y = [-y[0], -y[1]];
            u = [-u[0], -u[1]];
        }
        if !self.in_domain(&y) {
            return Err(Error::Invariant("domain reduction did not converge".into()));
        }
        Ok((y, u))
    }

    /// Bounds on integral-basis coordinates of domain elements with `|N| <= x`.
    fn coord_box(&self, x: f64) -> [i64; 2] {
        if self.d == 1 {
            return [x.floor() as i64 + 1, 0];
        }
        let e1 = self.regulator.exp();
        let b = [e1 * x.sqrt(), x.sqrt()];
        let det = self.emb[0][0] * self.emb[1][1] - self.emb[0][1] * self.emb[1][0];
        let inv = [[self.emb[1][1] / det, -self.emb[0][1] / det], [-self.emb[1][0] / det, self.emb[0][0] / det]];
        let mut out = [0i64; 2];
        for i in 0..2 {
            out[i] = (inv[i][0].abs() * b[0] + inv[i][1].abs() * b[1]).ceil() as i64 + 1;
        }
        out
    }
}

/// Row-style HNF of an ideal as `i64` rows.
fn ideal_rows(r: &DomainReducer, id: &Ideal) -> Result<[[i64; 2]; 2]> {
    let mut out = [[0i64; 2]; 2];
    for i in 0..r.d {
        for j in 0..r.d {
            out[i][j] = big_to_i64(&id.hnf[i][j])?;
        }
    }
    Ok(out)
}

fn ideal_contains(r: &DomainReducer, rows: &[[i64; 2]; 2], x: &Coords) -> bool {
    let mut v = *x;
    for i in 0..r.d {
        if v[i].rem_euclid(rows[i][i]) != 0 {
            return false;
        }
        let q = v[i] / rows[i][i];
        for j in 0..r.d {
            v[j] -= q * rows[i][j];
        }
    }
    v.iter().all(|&c| c == 0)
}

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -(-a).div_euclid(b)
}

/// Visits `base + lattice` points inside the coordinate box `|c_i| <= bounds_i`.
fn enumerate_coset<F>(r: &DomainReducer, base: &Coords, rows: &[[i64; 2]; 2], bounds: [i64; 2], visit: F) -> Result<()>
where
    F: Fn(&Coords) + Sync,
{
    let h00 = rows[0][0];
    let k0_lo = ceil_div(-bounds[0] - base[0], h00);
    let k0_hi = floor_div(bounds[0] - base[0], h00);
    if k0_hi < k0_lo {
        return Ok(());
    }
    let n0 = (k0_hi - k0_lo + 1) as u128;
    if r.d == 1 {
        if n0 > BOX_CAP {
            return Err(Error::BoxOverflow(n0));
        }
        (k0_lo..=k0_hi).into_par_iter().for_each(|k| visit(&[base[0] + k * h00, 0]));
        return Ok(());
    }
    let h11 = rows[1][1];
    let n1 = (2 * bounds[1] / h11 + 2) as u128;
    if n0 * n1 > BOX_CAP {
        return Err(Error::BoxOverflow(n0 * n1));
    }
    (k0_lo..=k0_hi).into_par_iter().for_each(|k0| {
        let c0 = base[0] + k0 * h00;
        let off = base[1] + k0 * rows[0][1];
        let lo = ceil_div(-bounds[1] - off, h11);
        let hi = floor_div(bounds[1] - off, h11);
        for k1 in lo..=hi {
            visit(&[c0, off + k1 * h11]);
        }
    });
    Ok(())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProgressionCount {
    pub field: String,
    pub alpha: Vec<i64>,
    pub p: u64,
    pub n: u32,
    pub x: f64,
    pub count: u64,
    pub witnesses: Vec<Vec<i64>>,
}

/// The split prime `p` below `pi` and the ideal `(pi)`.
fn prime_data(r: &DomainReducer, pi: &FieldElement) -> Result<(u64, Ideal)> {
    let nf = &r.nf;
    let norm = nf.norm(pi).abs();
    let p = norm.to_integer().to_u64().filter(|&p| crate::modarith::is_prime(p) && norm.is_integer());
    let p = p.ok_or_else(|| Error::Precondition("prime generator must have prime norm".into()))?;
    Ok((p, Ideal::principal(nf, pi)?))
}

fn coprime_to_prime(r: &DomainReducer, p: u64, prime: &Ideal, alpha: &FieldElement) -> Result<bool> {
    let iso = LocalIso::new(&r.nf, p, prime, 1)?;
    Ok(iso.reduce(alpha).map(|v| v % p != 0).unwrap_or(false))
}

/// `U_{alpha,n}(x)`: elements `beta in alpha (1 + p^n)` in the domain with `|N(beta)| <= x`.
pub fn count_progression(
    r: &DomainReducer,
    alpha: &FieldElement,
    pi: &FieldElement,
    n: u32,
    x: f64,
    keep_witnesses: usize,
) -> Result<ProgressionCount> {
    if x < 1.0 {
        return Err(Error::Precondition("x must be at least 1".into()));
    }
    let (p, prime) = prime_data(r, pi)?;
    if !coprime_to_prime(r, p, &prime, alpha)? {
        return Err(Error::NotCoprime);
    }
    let a = r.from_element(alpha)?;
    let lattice = Ideal::principal(&r.nf, alpha)?.mul(&r.nf, &prime.pow(&r.nf, n));
    let rows = ideal_rows(r, &lattice)?;
    let hits = std::sync::Mutex::new(Vec::new());
    let count = std::sync::atomic::AtomicU64::new(0);
    enumerate_coset(r, &a, &rows, r.coord_box(x), |b| {
        let nb = r.norm(b);
        if nb != 0 && (nb.unsigned_abs() as f64) <= x && r.in_domain(b) {
            count.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            if keep_witnesses > 0 {
                hits.lock().unwrap().push(b[..r.d].to_vec());
            }
        }
    })?;
    let mut witnesses = hits.into_inner().unwrap();
    witnesses.sort();
    witnesses.truncate(keep_witnesses);
    Ok(ProgressionCount {
        field: r.nf.label.clone(),
        alpha: a[..r.d].to_vec(),
        p,
        n,
        x,
        count: count.into_inner(),
        witnesses,
    })
}

/// Brute-force oracle: every point of a box twice as large, tested by ideal membership.
pub fn count_progression_brute(r: &DomainReducer, alpha: &FieldElement, pi: &FieldElement, n: u32, x: f64) -> Result<u64> {
    let (_, prime) = prime_data(r, pi)?;
    let a = r.from_element(alpha)?;
    let lattice = Ideal::principal(&r.nf, alpha)?.mul(&r.nf, &prime.pow(&r.nf, n));
    let rows = ideal_rows(r, &lattice)?;
    let b = r.coord_box(x);
    let b = [2 * b[0], 2 * b[1]];
    let size = (2 * b[0] + 1) as u128 * if r.d == 2 { (2 * b[1] + 1) as u128 } else { 1 };
    if size > 4 * BOX_CAP {
        return Err(Error::BoxOverflow(size));
    }
    let hi1 = if r.d == 2 { b[1] } else { 0 };
    let total = (-b[0]..=b[0])
        .into_par_iter()
        .map(|c0| {
            let mut k = 0u64;
            for c1 in -hi1..=hi1 {
                let z = [c0, c1];
                let diff = [z[0] - a[0], z[1] - a[1]];
                let nz = r.norm(&z);
                if nz != 0 && (nz.unsigned_abs() as f64) <= x && r.in_domain(&z) && ideal_contains(r, &rows, &diff) {
                    k += 1;
                }
            }
            k
        })
        .sum();
    Ok(total)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CountBoundEntry {
    pub n: u32,
    pub x: f64,
    pub count: u64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CountBoundReport {
    pub field: String,
    pub p: u64,
    pub entries: Vec<CountBoundEntry>,
    pub sup: f64,
    /// Largest over smallest per-`n` supremum.
    pub spread: f64,
    pub stable: bool,
}

/// `sup U_{1,n}(x) / max(x / N(p)^n, 1)` over a grid; stable when per-`n` sups agree within 2.
pub fn verify_count_bound(r: &DomainReducer, pi: &FieldElement, ns: &[u32], xs: &[f64]) -> Result<CountBoundReport> {
    let (p, _) = prime_data(r, pi)?;
    let one = r.nf.one();
    let mut entries = Vec::new();
    let mut per_n = Vec::new();
    for &n in ns {
        let q = (p as f64).powi(n as i32);
        let mut best = 0.0f64;
        for &x in xs {
            let c = count_progression(r, &one, pi, n, x, 0)?;
            let ratio = c.count as f64 / (x / q).max(1.0);
            best = best.max(ratio);
            entries.push(CountBoundEntry { n, x, count: c.count, ratio });
        }
        per_n.push(best);
    }
    let sup = per_n.iter().cloned().fold(0.0, f64::max);
    let low = per_n.iter().cloned().fold(f64::INFINITY, f64::min);
    let spread = sup / low;
    Ok(CountBoundReport { field: r.nf.label.clone(), p, entries, sup, spread, stable: spread <= 2.0 })
}

/// Visits domain elements of `O_F` coprime to `p` with `1 < |N| <= x`.
fn small_domain_elements(r: &DomainReducer, p: u64, x: f64) -> Result<Vec<(i128, Coords)>> {
    let rows = ideal_rows(r, &Ideal::unit(&r.nf))?;
    let out = std::sync::Mutex::new(Vec::new());
    enumerate_coset(r, &[0, 0], &rows, r.coord_box(x), |b| {
        let nb = r.norm(b).abs();
        if nb > 1 && nb as f64 <= x && gcd((nb % p as i128) as u64, p) == 1 && r.in_domain(b) {
            out.lock().unwrap().push((nb, *b));
        }
    })?;
    let mut v = out.into_inner().unwrap();
    v.sort();
    Ok(v)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinNormReport {
    pub field: String,
    pub p: u64,
    pub n: u32,
    pub min_norm: u64,
    pub witness: Vec<i64>,
    pub ratio: f64,
}

/// Least `|N(alpha)|` over `alpha != 1` in `1 + p^n` with `+-alpha` in the fundamental domain.
pub fn min_norm_coset(r: &DomainReducer, pi: &FieldElement, n: u32) -> Result<MinNormReport> {
    let (p, prime) = prime_data(r, pi)?;
    let iso = LocalIso::new(&r.nf, p, &prime, n)?;
    let q = (p as f64).powi(n as i32);
    let mut x = 2.0 * q;
    loop {
        for (nb, b) in small_domain_elements(r, p, x)? {
            let res = iso.reduce(&r.to_element(&b)).unwrap();
            let w = if res == 1 {
                b
            } else if res == iso.modulus - 1 {
                [-b[0], -b[1]]
            } else {
                continue;
            };
            return Ok(MinNormReport {
                field: r.nf.label.clone(),
                p,
                n,
                min_norm: nb as u64,
                witness: w[..r.d].to_vec(),
                ratio: nb as f64 / q,
            });
        }
        x *= 2.0;
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TorsionClassEntry {
    pub class: Vec<u64>,
    pub min_norm: u64,
    pub witness: Vec<i64>,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TorsionNormReport {
    pub field: String,
    pub p: u64,
    pub n: u32,
    pub delta_order: usize,
    pub entries: Vec<TorsionClassEntry>,
    pub min_ratio: f64,
    pub floor: f64,
    pub passes: bool,
}

/// Least norm of an integral ideal in each non-trivial class of the torsion part, against
/// `N(p)^{n/|Delta|}`; passes when every ratio is at least `floor`.
pub fn torsion_norm_bound(r: &DomainReducer, rcg: &RayClassGroup, floor: f64) -> Result<TorsionNormReport> {
    let dec = rcg.torsion_and_gamma();
    let order = dec.delta.len();
    let targets: Vec<RayClassElement> = dec.delta.iter().filter(|c| **c != rcg.identity()).cloned().collect();
    let norm_p = rcg.prime.norm.to_f64().unwrap();
    let scale = norm_p.powf(rcg.n as f64 / order as f64);
    let mut found: HashMap<RayClassElement, (i128, Coords)> = HashMap::new();
    let mut x = 2.0 * norm_p.powi(rcg.n as i32).max(4.0);
    while found.len() < targets.len() {
        for (nb, b) in small_domain_elements(r, rcg.p, x)? {
            let c = rcg.ideal_to_element(&r.to_element(&b), 0)?;
            if targets.contains(&c) {
                found.entry(c).or_insert((nb, b));
            }
        }
        x *= 2.0;
    }
    let mut entries: Vec<TorsionClassEntry> = targets
        .iter()
        .map(|c| {
            let (nb, b) = found[c];
            TorsionClassEntry { class: c.e.clone(), min_norm: nb as u64, witness: b[..r.d].to_vec(), ratio: nb as f64 / scale }
        })
        .collect();
    entries.sort_by(|a, b| a.class.cmp(&b.class));
    let min_ratio = entries.iter().map(|e| e.ratio).fold(f64::INFINITY, f64::min);
    Ok(TorsionNormReport {
        field: r.nf.label.clone(),
        p: rcg.p,
        n: rcg.n,
        delta_order: order,
        passes: entries.is_empty() || min_ratio >= floor,
        min_ratio: if entries.is_empty() { f64::NAN } else { min_ratio },
        floor,
        entries,
    })
}

/// A simplicial cone `Z_{>0} <z_1, ..., z_d>`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Cone {
    pub gens: Vec<Vec<i64>>,
    /// Measured `max_j coord_j(z) / min_s |sigma_s(z)|` over sampled `z` in the cone.
    pub coherence: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConeDecomposition {
    pub field: String,
    pub cones: Vec<Cone>,
    /// Totally positive fundamental unit.
    pub eps_plus: Vec<i64>,
}

fn cone_coords(r: &DomainReducer, gens: &[Coords], z: &Coords) -> Option<Vec<BigRational>> {
    if r.d == 1 {
        return Some(vec![BigRational::new(z[0].into(), gens[0][0].into())]);
    }
    let (a, b) = (gens[0], gens[1]);
    let det = a[0] as i128 * b[1] as i128 - a[1] as i128 * b[0] as i128;
    if det == 0 {
        return None;
    }
    let x = z[0] as i128 * b[1] as i128 - z[1] as i128 * b[0] as i128;
    let y = a[0] as i128 * z[1] as i128 - a[1] as i128 * z[0] as i128;
    Some(vec![BigRational::new(x.into(), det.into()), BigRational::new(y.into(), det.into())])
}

/// Cone containing `u z` for some unit `u` among small powers, if any.
pub fn cone_cover(r: &DomainReducer, dec: &ConeDecomposition, z: &Coords) -> Result<Option<(usize, Coords)>> {
    let (y, _) = r.reduce(z)?;
    let mut cands = vec![y, r.mul(&y, &r.eps), r.mul(&y, &r.eps_inv)];
    cands.push([-y[0], -y[1]]);
    for c in cands {
        for (i, cone) in dec.cones.iter().enumerate() {
            let gens: Vec<Coords> = cone.gens.iter().map(|g| [g[0], *g.get(1).unwrap_or(&0)]).collect();
            if let Some(co) = cone_coords(r, &gens, &c) {
                if co.iter().all(|t| !t.is_negative()) && co.iter().any(|t| !t.is_zero()) {
                    return Ok(Some((i, c)));
                }
            }
        }
    }
    Ok(None)
}

/// Cone decomposition of the totally positive part: `<1>` over Q, `<1, eps_+>` in the real
/// quadratic case. Units times these cones cover `F_R` minus the coordinate hyperplanes.
pub fn build_cones(r: &DomainReducer, samples: usize) -> Result<ConeDecomposition> {
    let one = r.one();
    let eps_plus = if r.d == 1 {
        one
    } else if r.norm(&r.eps) == 1 {
        r.eps
    } else {
        r.mul(&r.eps, &r.eps)
    };
    let gens = if r.d == 1 { vec![one] } else { vec![one, eps_plus] };
    let mut coherence = 0.0f64;
    for i in 1..=samples as i64 {
        let a = (i * 7919) % 97 + 1;
        let b = if r.d == 1 { 0 } else { (i * 104_729) % 89 };
        let z = if r.d == 1 { [a, 0] } else { [a * gens[0][0] + b * gens[1][0], a * gens[0][1] + b * gens[1][1]] };
        let e = r.embed(&z);
        let small = e[..r.d].iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
        coherence = coherence.max(a.max(b) as f64 / small);
    }
    Ok(ConeDecomposition {
        field: r.nf.label.clone(),
        cones: vec![Cone { gens: gens.iter().map(|g| g[..r.d].to_vec()).collect(), coherence }],
        eps_plus: eps_plus[..r.d].to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::builtin_field;

    fn red(label: &str) -> DomainReducer {
        DomainReducer::new(Arc::new(builtin_field(label).unwrap())).unwrap()
    }

    #[test]
    fn rational_counts() {
        let r = red("Q");
        let five = r.nf.from_int(5);
        let c = count_progression(&r, &r.nf.one(), &five, 1, 100.0, 100).unwrap();
        assert_eq!(c.count, 20);
        assert_eq!(c.witnesses[1], vec![6i64]);
        assert_eq!(count_progression(&r, &r.nf.one(), &five, 1, 1.0, 0).unwrap().count, 1);
        assert_eq!(count_progression_brute(&r, &r.nf.one(), &five, 1, 100.0).unwrap(), 20);
        assert_eq!(min_norm_coset(&r, &five, 2).unwrap().min_norm, 24);
    }

    #[test]
    fn quadratic_domain() {
        let r = red("Q(sqrt2)");
        assert_eq!(r.eps, [1, 1]);
        let x = [5, 3];
        let (y, _) = r.reduce(&x).unwrap();
        let (z, _) = r.reduce(&r.mul(&x, &r.mul(&r.eps, &r.eps))).unwrap();
        assert_eq!(y, z);
        assert_eq!(r.reduce(&y).unwrap().0, y);
        assert_eq!(r.reduce(&[1, 0]).unwrap().0, [1, 0]);
        let cones = build_cones(&r, 50).unwrap();
        assert_eq!(cones.eps_plus, vec![3, 2]);
        assert!(cone_cover(&r, &cones, &[-7, 3]).unwrap().is_some());
    }

    #[test]
    fn quadratic_count_matches_brute() {
        let r = red("Q(sqrt2)");
        let pi = FieldElement::from_ints(&[3, 1]);
        for (n, x) in [(1, 500.0), (1, 50.0), (2, 500.0)] {
            let a = count_progression(&r, &r.nf.one(), &pi, n, x, 0).unwrap().count;
            let b = count_progression_brute(&r, &r.nf.one(), &pi, n, x).unwrap();
            assert_eq!(a, b, "n={n} x={x}");
            assert!(a >= 1);
        }
    }
}
