//! Characters of ray class groups, as exponent vectors on the Smith generators.

use crate::rayclass::{RayClassElement, RayClassGroup};
use crate::roots::ExactRootOfUnity;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HeckeCharacter {
    pub exps: Vec<u64>,
    pub invariants: Vec<u64>,
    pub p: u64,
    /// Level of the ray class group the character lives on.
    pub level: u32,
    pub order: u64,
    /// Conductor exponent `c`: the character factors through level `c` and no lower.
    pub conductor: u32,
}

impl HeckeCharacter {
    pub fn new(rcg: &RayClassGroup, exps: Vec<u64>) -> HeckeCharacter {
        assert_eq!(exps.len(), rcg.group.invariants.len());
        let invariants = rcg.group.invariants.clone();
        let exps: Vec<u64> = exps.iter().zip(&invariants).map(|(e, d)| e % d).collect();
        let order = exps
            .iter()
            .zip(&invariants)
            .map(|(&e, &d)| d / crate::modarith::gcd(e, d))
            .fold(1, |l, o| l / crate::modarith::gcd(l, o) * o);
        let mut chi = HeckeCharacter { exps, invariants, p: rcg.p, level: rcg.n, order, conductor: 0 };
        chi.conductor = if order == 1 {
            0
        } else {
            (1..=rcg.n).find(|&m| chi.eval(&rcg.kernel_gen(m)).is_one()).unwrap_or(rcg.n)
        };
        chi
    }

    pub fn trivial(rcg: &RayClassGroup) -> HeckeCharacter {
        HeckeCharacter::new(rcg, rcg.group.identity())
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.exps.iter().map(u64::to_string).collect();
        format!("chi[{}]", parts.join(","))
    }

    pub fn eval(&self, x: &RayClassElement) -> ExactRootOfUnity {
        self.exps
            .iter()
            .zip(&x.e)
            .zip(&self.invariants)
            .fold(ExactRootOfUnity::ONE, |acc, ((&k, &e), &d)| acc.mul(&ExactRootOfUnity::new(k as i128 * e as i128, d)))
    }

    /// Value on the principal ideal of an integer; `None` (the value zero) when not coprime to p.
    pub fn eval_residue(&self, rcg: &RayClassGroup, a: i64) -> Option<ExactRootOfUnity> {
        if a.rem_euclid(self.p as i64) == 0 {
            return None;
        }
        Some(self.eval(&rcg.class_of_residue(a)?))
    }

    pub fn pow(&self, rcg: &RayClassGroup, t: i64) -> HeckeCharacter {
        let e: Vec<u64> =
            self.exps.iter().zip(&self.invariants).map(|(&k, &d)| (k as i128 * t as i128).rem_euclid(d as i128) as u64).collect();
        HeckeCharacter::new(rcg, e)
    }

    pub fn conj(&self, rcg: &RayClassGroup) -> HeckeCharacter {
        self.pow(rcg, -1)
    }

    /// The p-adic valuation of the order.
    pub fn p_order_exp(&self) -> u32 {
        ExactRootOfUnity { num: 1, den: self.order }.p_order_exp(self.p)
    }

    pub fn is_p_power_order(&self) -> bool {
        self.p.pow(self.p_order_exp()) == self.order
    }
}

/// All characters of the dual group, in lexicographic exponent order.
pub fn dual(rcg: &RayClassGroup) -> Vec<HeckeCharacter> {
    rcg.group.elements().into_iter().map(|e| HeckeCharacter::new(rcg, e)).collect()
}

/// Characters of conductor exponent `c`, optionally restricted to p-power order.
pub fn char_enumerate(rcg: &RayClassGroup, c: u32, p_power_only: bool) -> Vec<HeckeCharacter> {
    dual(rcg)
        .into_iter()
        .filter(|chi| chi.conductor == c && (!p_power_only || chi.is_p_power_order()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::{builtin_field, Ideal};
    use crate::rayclass::rcg_build;
    use std::sync::Arc;

    fn q_rcg(p: u64, n: u32) -> RayClassGroup {
        let f = Arc::new(builtin_field("Q").unwrap());
        let pr = Ideal::principal(&f, &f.from_int(p as i64)).unwrap();
        rcg_build(f, p, &pr, n).unwrap()
    }

    #[test]
    fn counts_by_conductor() {
        let g = q_rcg(5, 2);
        assert_eq!(char_enumerate(&g, 0, true).len(), 1);
        assert_eq!(char_enumerate(&g, 2, true).len(), 4);
        let g = q_rcg(5, 3);
        assert_eq!(char_enumerate(&g, 3, true).len(), 20);
    }

    #[test]
    fn values_at_six_and_five() {
        let g = q_rcg(5, 2);
        for chi in char_enumerate(&g, 2, true) {
            let v = chi.eval_residue(&g, 6).unwrap();
            assert_eq!(v.order(), 5);
            assert!(chi.eval_residue(&g, 5).is_none());
            assert!(chi.eval_residue(&g, -1).unwrap().is_one());
        }
    }

    #[test]
    fn conductor_stable_under_powers() {
        let g = q_rcg(5, 3);
        for chi in dual(&g) {
            for t in [3i64, 7, 9] {
                assert_eq!(chi.pow(&g, t).conductor, chi.conductor);
            }
        }
    }
}
