//! Finite abelian groups presented by generators and relations.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

type IMat = Vec<Vec<i128>>;

fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

fn matmul(a: &IMat, b: &IMat) -> IMat {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect())
        .collect()
}

/// Smith normal form `U * R * V = D` of an integer matrix.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IMat,
    pub v: IMat,
    pub v_inv: IMat,
    pub diag: Vec<i128>,
}

pub fn smith(r: &IMat, cols: usize) -> Snf {
    let rows = r.len();
    let mut a = r.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut vi = identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        vi.swap(t, pj);
        let mut done = true;
        for i in t + 1..rows {
            let qt = a[i][t].div_euclid(a[t][t]);
            if qt != 0 {
                for j in 0..cols {
                    a[i][j] -= qt * a[t][j];
                }
                for j in 0..rows {
                    u[i][j] -= qt * u[t][j];
                }
            }
            done &= a[i][t] == 0;
        }
        for j in t + 1..cols {
            let qt = a[t][j].div_euclid(a[t][t]);
            if qt != 0 {
                for i in 0..rows {
                    a[i][j] -= qt * a[i][t];
                }
                for i in 0..cols {
                    v[i][j] -= qt * v[i][t];
                }
                // inverse transform: row t of V^{-1} gains qt times row j
                for k in 0..cols {
                    vi[t][k] += qt * vi[j][k];
                }
            }
            done &= a[t][j] == 0;
        }
        if !done {
            continue;
        }
        // divisibility of the trailing block by the pivot
        let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % a[t][t] != 0));
        if let Some(i) = bad {
            for j in 0..cols {
                a[t][j] += a[i][j];
            }
            for j in 0..rows {
                u[t][j] += u[i][j];
            }
            continue;
        }
        if a[t][t] < 0 {
            for j in 0..cols {
                a[t][j] = -a[t][j];
            }
            for j in 0..rows {
                u[t][j] = -u[t][j];
            }
        }
        t += 1;
    }
    let diag = (0..cols).map(|i| if i < rows { a[i][i] } else { 0 }).collect();
    Snf { u, v, v_inv: vi, diag }
}

/// `Z^c / (row span of the relations)` in Smith form coordinates.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    pub labels: Vec<String>,
    pub relations: Vec<Vec<i64>>,
    /// Nontrivial invariant factors, each dividing the next.
    pub invariants: Vec<u64>,
    v: Vec<Vec<i128>>,
    /// Original-generator exponents of each SNF generator.
    pub snf_gens: Vec<Vec<i64>>,
    keep: Vec<usize>,
}

impl FiniteAbelianGroup {
    pub fn new(labels: Vec<String>, relations: Vec<Vec<i64>>) -> Result<FiniteAbelianGroup> {
        let c = labels.len();
        let r: IMat = relations.iter().map(|row| row.iter().map(|&x| x as i128).collect()).collect();
        let s = smith(&r, c);
        if s.diag.iter().any(|&d| d == 0) {
            return Err(Error::Invariant("relations do not give a finite group".into()));
        }
        let d = matmul(&matmul(&s.u, &r), &s.v);
        for (i, row) in d.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                let want = if i == j { s.diag[i] } else { 0 };
                if x != want {
                    return Err(Error::Invariant("Smith form round trip failed".into()));
                }
            }
        }
        if matmul(&s.v, &s.v_inv) != identity(c) {
            return Err(Error::Invariant("Smith transform not unimodular".into()));
        }
        let keep: Vec<usize> = (0..c).filter(|&i| s.diag[i] > 1).collect();
        let mut invariants: Vec<u64> = keep.iter().map(|&i| s.diag[i] as u64).collect();
        // the pivot loop yields a divisibility chain; keep it sorted for presentation
        invariants.sort_unstable();
        let mut keep = keep;
        keep.sort_by_key(|&i| s.diag[i]);
        let snf_gens = keep.iter().map(|&i| s.v_inv[i].iter().map(|&x| x as i64).collect()).collect();
        Ok(FiniteAbelianGroup { labels, relations, invariants, v: s.v, snf_gens, keep })
    }

    pub fn order(&self) -> u64 {
        self.invariants.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.invariants.last().copied().unwrap_or(1)
    }

    /// Canonical SNF coordinates of an exponent vector on the original generators.
    pub fn reduce(&self, x: &[i64]) -> Vec<u64> {
        self.keep
            .iter()
            .zip(&self.invariants)
            .map(|(&k, &d)| {
                let y: i128 = x.iter().enumerate().map(|(i, &xi)| xi as i128 * self.v[i][k]).sum();
                y.rem_euclid(d as i128) as u64
            })
            .collect()
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).zip(&self.invariants).map(|((x, y), d)| (x + y) % d).collect()
    }

    pub fn scale(&self, a: &[u64], k: i64) -> Vec<u64> {
        a.iter()
            .zip(&self.invariants)
            .map(|(&x, &d)| (x as i128 * k as i128).rem_euclid(d as i128) as u64)
            .collect()
    }

    pub fn identity(&self) -> Vec<u64> {
        vec![0; self.invariants.len()]
    }

    pub fn element_order(&self, a: &[u64]) -> u64 {
        a.iter()
            .zip(&self.invariants)
            .map(|(&x, &d)| d / crate::modarith::gcd(x, d))
            .fold(1, |l, o| l / crate::modarith::gcd(l, o) * o)
    }

    /// All elements in lexicographic order of SNF coordinates.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for &d in &self.invariants {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..d).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_of_two_generators() {
        // Z^2 / <(2,0),(0,3)> = Z/6
        let g = FiniteAbelianGroup::new(vec!["a".into(), "b".into()], vec![vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(g.invariants, vec![6]);
        assert_eq!(g.elements().len(), 6);
        let a = g.reduce(&[1, 0]);
        assert_eq!(g.element_order(&a), 2);
        assert_eq!(g.reduce(&[2, 3]), g.identity());
    }

    #[test]
    fn snf_noncyclic() {
        let g = FiniteAbelianGroup::new(vec!["a".into(), "b".into()], vec![vec![4, 6], vec![6, 4]]).unwrap();
        // determinant 20, gcd of entries 2
        assert_eq!(g.invariants, vec![2, 10]);
        assert_eq!(g.order(), 20);
    }

    #[test]
    fn infinite_rejected() {
        assert!(FiniteAbelianGroup::new(vec!["a".into(), "b".into()], vec![vec![2, 0]]).is_err());
    }
}
