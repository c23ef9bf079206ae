//! Small exact linear algebra over Q and Z.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type QMatrix = Vec<Vec<BigRational>>;
pub type ZMatrix = Vec<Vec<BigInt>>;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Determinant by fraction-exact Gaussian elimination.
pub fn det(m: &QMatrix) -> BigRational {
    let n = m.len();
    let mut a = m.clone();
    let mut d = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            a.swap(piv, col);
            d = -d;
        }
        let p = a[col][col].clone();
        d *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    d
}

/// Inverse of a square rational matrix, `None` when singular.
pub fn inverse(m: &QMatrix) -> Option<QMatrix> {
    let n = m.len();
    let mut a: QMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(piv, col);
        let p = a[col][col].clone();
        for c in 0..2 * n {
            a[col][c] = &a[col][c] / &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..2 * n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Row vector times matrix.
pub fn vec_mat(v: &[BigRational], m: &QMatrix) -> Vec<BigRational> {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols)
        .map(|j| v.iter().zip(m).fold(BigRational::zero(), |acc, (x, row)| acc + x * &row[j]))
        .collect()
}

/// Row-style Hermite normal form of the lattice spanned by `rows` (full rank
/// `n` assumed). The result is upper triangular with positive diagonal and
/// entries above the diagonal reduced into `[0, diag)`.
pub fn hnf(rows: &ZMatrix, n: usize) -> Option<ZMatrix> {
    let mut a: ZMatrix = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut out: ZMatrix = Vec::with_capacity(n);
    for col in 0..n {
        // gcd-combine every remaining row into a single pivot row for this column
        let mut pivot: Option<Vec<BigInt>> = None;
        let mut rest = Vec::new();
        for row in a.drain(..) {
            if row[col].is_zero() {
                rest.push(row);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(row),
                Some(p) => {
                    let e = p[col].extended_gcd(&row[col]);
                    let g = e.gcd.clone();
                    let pa = &p[col] / &g;
                    let rb = &row[col] / &g;
                    let new_p: Vec<BigInt> =
                        p.iter().zip(&row).map(|(x, y)| &e.x * x + &e.y * y).collect();
                    let other: Vec<BigInt> =
                        p.iter().zip(&row).map(|(x, y)| &rb * x - &pa * y).collect();
                    debug_assert!(other[col].is_zero());
                    if other.iter().any(|x| !x.is_zero()) {
                        rest.push(other);
                    }
                    pivot = Some(new_p);
                }
            }
        }
        let mut p = pivot?;
        if p[col].is_negative() {
            p.iter_mut().for_each(|x| *x = -x.clone());
        }
        a = rest;
        out.push(p);
    }
    // reduce above-diagonal entries
    for col in 0..n {
        let d = out[col][col].clone();
        for r in 0..col {
            let qt = out[r][col].div_floor(&d);
            if !qt.is_zero() {
                let pr = out[col].clone();
                for (x, y) in out[r].iter_mut().zip(&pr) {
                    *x -= &qt * y;
                }
            }
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: &[&[i64]]) -> ZMatrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn hnf_of_small_lattice() {
        let h = hnf(&z(&[&[4, 6], &[2, 8], &[6, 2]]), 2).unwrap();
        // determinant of the lattice spanned: gcd of 2x2 minors = 4
        assert_eq!(&h[0][0] * &h[1][1], BigInt::from(4));
        assert!(h[1][0].is_zero());
    }

    #[test]
    fn det_and_inverse() {
        let m = vec![vec![q(2), q(1)], vec![q(7), q(4)]];
        assert_eq!(det(&m), q(1));
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, vec![vec![q(4), q(-1)], vec![q(-7), q(2)]]);
    }
}
