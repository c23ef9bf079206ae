//! Ray class groups `Cl(F, p^n)` for a prime of residue degree one.

use crate::abelian::FiniteAbelianGroup;
use crate::error::{Error, Result};
use crate::modarith::{mul_mod, pow_mod, primitive_root, Bsgs};
use crate::nf::{FieldElement, Ideal, LocalIso, NumberField};
use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Canonical SNF coordinates of a ray class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RayClassElement {
    pub e: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct RayClassGroup {
    pub nf: Arc<NumberField>,
    pub p: u64,
    pub n: u32,
    pub modulus: u64,
    pub prime: Ideal,
    /// Identification `O/p^n = Z/p^n`; absent for `n = 0`.
    pub iso: Option<LocalIso>,
    /// Primitive root of `(Z/p^n)^x` used as the single residue generator.
    pub g: u64,
    pub unit_images: Vec<u64>,
    pub group: FiniteAbelianGroup,
    bsgs: Option<Bsgs>,
}

/// Torsion / pro-p decomposition of a built ray class group.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Decomposition {
    pub delta: Vec<RayClassElement>,
    pub w: Vec<RayClassElement>,
    pub gamma_gen: RayClassElement,
    /// Smallest positive residue whose class generates the p-part.
    pub gamma_lift: u64,
    pub gamma_order: u64,
    /// `(j, |ker(Cl(F,p^n) -> Cl(F,p^j))|)` for `j = 0..=n`.
    pub filtration: Vec<(u32, u64)>,
}

/// Builds `Cl(F, prime^n)`; class number one only.
pub fn rcg_build(nf: Arc<NumberField>, p: u64, prime: &Ideal, n: u32) -> Result<RayClassGroup> {
    if p % 2 == 0 {
        return Err(Error::Precondition("p must be odd".into()));
    }
    if nf.class_number % p == 0 || (&nf.discriminant % p) == BigInt::from(0) {
        return Err(Error::Precondition(format!("p={p} divides h_F * D_F")));
    }
    if prime.norm != BigInt::from(p) {
        return Err(Error::NotSplit { p });
    }
    if nf.class_number != 1 {
        return Err(Error::Unsupported("ray class groups need class number one".into()));
    }
    if n == 0 {
        let group = FiniteAbelianGroup::new(vec![], vec![])?;
        return Ok(RayClassGroup { nf, p, n, modulus: 1, prime: prime.clone(), iso: None, g: 0, unit_images: vec![], group, bsgs: None });
    }
    let iso = LocalIso::new(&nf, p, prime, n)?;
    let modulus = iso.modulus;
    let phi = modulus / p * (p - 1);
    let g = primitive_root(p, n);
    let bsgs = Bsgs::new(g, modulus, phi);
    let mut relations = vec![vec![phi as i64]];
    let mut unit_images = Vec::new();
    for u in &nf.units {
        let r = iso.reduce(u).ok_or_else(|| Error::Invariant("unit not p-integral".into()))?;
        unit_images.push(r);
        relations.push(vec![bsgs.log(r).ok_or_else(|| Error::Invariant("unit not invertible mod p^n".into()))? as i64]);
    }
    let group = FiniteAbelianGroup::new(vec![format!("g={g}")], relations)?;
    Ok(RayClassGroup { nf, p, n, modulus, prime: prime.clone(), iso: Some(iso), g, unit_images, group, bsgs: Some(bsgs) })
}

impl RayClassGroup {
    pub fn order(&self) -> u64 {
        self.group.order()
    }

    pub fn identity(&self) -> RayClassElement {
        RayClassElement { e: self.group.identity() }
    }

    pub fn elements(&self) -> Vec<RayClassElement> {
        self.group.elements().into_iter().map(|e| RayClassElement { e }).collect()
    }

    /// Class of the principal ideal generated by an integer residue; `None` if divisible by p.
    pub fn class_of_residue(&self, a: i64) -> Option<RayClassElement> {
        if self.n == 0 {
            return (a.rem_euclid(self.p as i64) != 0).then(|| self.identity());
        }
        let r = a.rem_euclid(self.modulus as i64) as u64;
        let l = self.bsgs.as_ref()?.log(r)?;
        Some(RayClassElement { e: self.group.reduce(&[l as i64]) })
    }

    /// Class of `(gamma) * a_i`; the class representative index must be 0 (class number one).
    pub fn ideal_to_element(&self, gamma: &FieldElement, class_idx: usize) -> Result<RayClassElement> {
        if class_idx >= self.nf.class_reps.len() {
            return Err(Error::Precondition("class representative index".into()));
        }
        if self.n == 0 {
            return Ok(self.identity());
        }
        let iso = self.iso.as_ref().unwrap();
        let r = iso.reduce(gamma).filter(|r| r % self.p != 0).ok_or(Error::NotCoprime)?;
        Ok(self.class_of_residue(r as i64).expect("unit residue"))
    }

    pub fn mul(&self, a: &RayClassElement, b: &RayClassElement) -> RayClassElement {
        RayClassElement { e: self.group.add(&a.e, &b.e) }
    }

    pub fn pow(&self, a: &RayClassElement, k: i64) -> RayClassElement {
        RayClassElement { e: self.group.scale(&a.e, k) }
    }

    pub fn element_order(&self, a: &RayClassElement) -> u64 {
        self.group.element_order(&a.e)
    }

    /// Class of `1 + p^j`, generating the kernel of reduction to level `j >= 1`.
    pub fn kernel_gen(&self, j: u32) -> RayClassElement {
        if j >= self.n {
            return self.identity();
        }
        let a = (1 + self.p.pow(j)) % self.modulus;
        self.class_of_residue(a as i64).unwrap()
    }

    /// Smallest positive integer in the given class.
    pub fn smallest_lift(&self, c: &RayClassElement) -> u64 {
        (1..=self.modulus.max(1))
            .filter(|a| a % self.p != 0 || self.n == 0)
            .find(|&a| self.class_of_residue(a as i64).as_ref() == Some(c))
            .expect("every class has a residue")
    }

    fn p_part_order(&self) -> u64 {
        let mut o = self.order();
        let mut pp = 1;
        while o % self.p == 0 {
            o /= self.p;
            pp *= self.p;
        }
        pp
    }

    /// Explicit torsion part, Teichmuller image, p-part generator and level filtration.
    pub fn torsion_and_gamma(&self) -> Decomposition {
        let pp = self.p_part_order();
        let delta: Vec<RayClassElement> =
            self.elements().into_iter().filter(|x| (self.element_order(x) % self.p) != 0).collect();
        let mut w = Vec::new();
        if self.n > 0 {
            let e = self.p.pow(self.n - 1);
            for a in 1..self.p {
                let t = pow_mod(a, e, self.modulus);
                let c = self.class_of_residue(t as i64).unwrap();
                if !w.contains(&c) {
                    w.push(c);
                }
            }
            w.sort();
        } else {
            w.push(self.identity());
        }
        let (gamma_gen, gamma_lift) = if pp == 1 || self.n == 0 {
            (self.identity(), 1)
        } else {
            (1..self.modulus)
                .filter(|a| a % self.p != 0)
                .map(|a| (self.class_of_residue(a as i64).unwrap(), a))
                .find(|(c, _)| self.element_order(c) == pp)
                .expect("cyclic p-part has a generator")
        };
        let filtration = (0..=self.n)
            .map(|j| {
                let o = if j == 0 { self.order() } else { self.element_order(&self.kernel_gen(j)) };
                (j, o)
            })
            .collect();
        Decomposition { delta, w, gamma_gen, gamma_lift, gamma_order: pp, filtration }
    }

    /// Residues of `(Z/p^n)^x`, each with its class, by direct enumeration.
    pub fn residue_classes(&self) -> Vec<(u64, RayClassElement)> {
        (1..self.modulus.max(2))
            .filter(|a| a.gcd(&self.p) == 1)
            .map(|a| (a, self.class_of_residue(a as i64).unwrap()))
            .collect()
    }

    /// Group order by brute-force coset enumeration of `(Z/p^n)^x` modulo the unit image.
    pub fn brute_force_order(&self) -> u64 {
        if self.n == 0 {
            return 1;
        }
        let md = self.modulus;
        let mut sub = vec![1u64];
        loop {
            let mut grown = sub.clone();
            for &x in &sub {
                for &u in &self.unit_images {
                    let y = mul_mod(x, u, md);
                    if !grown.contains(&y) {
                        grown.push(y);
                    }
                }
            }
            if grown.len() == sub.len() {
                break;
            }
            sub = grown;
        }
        (md / self.p * (self.p - 1)) / sub.len() as u64
    }
}

/// Prime ideal `(gen)`; over Q pass the rational prime.
pub fn prime_ideal(nf: &NumberField, gen: &FieldElement) -> Result<Ideal> {
    Ideal::principal(nf, gen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::builtin_field;

    fn q_rcg(p: u64, n: u32) -> RayClassGroup {
        let f = Arc::new(builtin_field("Q").unwrap());
        let pr = Ideal::principal(&f, &f.from_int(p as i64)).unwrap();
        rcg_build(f, p, &pr, n).unwrap()
    }

    #[test]
    fn orders_over_q() {
        assert_eq!(q_rcg(5, 0).order(), 1);
        assert_eq!(q_rcg(5, 2).order(), 10);
        assert_eq!(q_rcg(5, 2).brute_force_order(), 10);
        assert_eq!(q_rcg(5, 3).order(), 50);
        assert_eq!(q_rcg(3, 2).order(), 3);
    }

    #[test]
    fn sqrt2_level_one_is_trivial() {
        let f = Arc::new(builtin_field("Q(sqrt2)").unwrap());
        let pr = Ideal::principal(&f, &FieldElement::from_ints(&[3, 1])).unwrap();
        let g = rcg_build(f, 7, &pr, 1).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.unit_images[1], 5);
    }

    #[test]
    fn discrete_log_of_seven() {
        let g = q_rcg(5, 2);
        let c7 = g.class_of_residue(7).unwrap();
        // brute force: classes agree iff residues agree up to sign
        for a in 1..25i64 {
            if a % 5 == 0 {
                continue;
            }
            let same = a == 7 || a == 18;
            assert_eq!(g.class_of_residue(a).unwrap() == c7, same, "a={a}");
        }
        let f = &g.nf;
        assert_eq!(g.ideal_to_element(&f.one(), 0).unwrap(), g.identity());
        assert!(matches!(g.ideal_to_element(&f.from_int(10), 0), Err(Error::NotCoprime)));
        assert_eq!(g.ideal_to_element(&f.from_int(1 + 25 * 17), 0).unwrap(), g.identity());
    }

    #[test]
    fn decomposition_examples() {
        let d = q_rcg(5, 3).torsion_and_gamma();
        assert_eq!(d.delta.len(), 2);
        assert_eq!(d.gamma_order, 25);
        assert_eq!(d.w, d.delta);
        let d = q_rcg(3, 2).torsion_and_gamma();
        assert_eq!(d.delta.len(), 1);
        assert_eq!(d.gamma_order, 3);
        let d = q_rcg(5, 1).torsion_and_gamma();
        assert_eq!(d.gamma_order, 1);
        let d = q_rcg(5, 2).torsion_and_gamma();
        assert_eq!(d.gamma_lift, 4);
        assert_eq!(d.filtration, vec![(0, 10), (1, 5), (2, 1)]);
    }
}
