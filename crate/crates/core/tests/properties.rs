use num_complex::Complex64;
use num_traits::Signed;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use twistl::cones::{build_cones, cone_cover, count_progression, min_norm_coset, DomainReducer};
use twistl::cyclotomic::Cyclo;
use twistl::gauss::{gauss_sum_local, phase_exp, primitive_local_characters};
use twistl::nf::{builtin_field, FieldElement, Ideal};

fn q2() -> DomainReducer {
    DomainReducer::new(Arc::new(builtin_field("Q(sqrt2)").unwrap())).unwrap()
}

fn q1() -> DomainReducer {
    DomainReducer::new(Arc::new(builtin_field("Q").unwrap())).unwrap()
}

fn same(a: &Cyclo, b: &Cyclo) -> bool {
    a.eq_exact(b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauss_shift_and_modulus(pi in 0usize..3, n in 1u32..=3, k in 0usize..1000, a in 1i64..10_000) {
        let p = [3u64, 5, 7][pi];
        let chars = primitive_local_characters(p, n, n);
        let phi = &chars[k % chars.len()];
        prop_assume!(a % p as i64 != 0);
        let g1 = gauss_sum_local(phi, 1, 1).unwrap();
        let ga = gauss_sum_local(phi, 1, a).unwrap();
        let want = g1.exact.shift(phase_exp(&phi.value(a).unwrap().conj(), g1.exact.n));
        prop_assert!(same(&ga.exact, &want));
        prop_assert!((ga.value.norm_sqr() - p.pow(n) as f64).abs() < 1e-9);
        let gbar = gauss_sum_local(&phi.conj(), 1, 1).unwrap();
        let prod = g1.value * gbar.value;
        prop_assert!((prod - phi.parity() as f64 * p.pow(n) as f64).norm() < 1e-9);
    }

    #[test]
    fn element_norm_multiplicative(a in -300i64..300, b in -300i64..300, c in -300i64..300, d in -300i64..300) {
        let r = q2();
        let (x, y) = ([a, b], [c, d]);
        prop_assert_eq!(r.norm(&r.mul(&x, &y)), r.norm(&x) * r.norm(&y));
    }

    #[test]
    fn ideal_norm_multiplicative(a in -60i64..60, b in -60i64..60, c in -60i64..60, d in -60i64..60) {
        let nf = builtin_field("Q(sqrt2)").unwrap();
        let x = FieldElement::from_ints(&[a, b]);
        let y = FieldElement::from_ints(&[c, d]);
        prop_assume!(!x.is_zero() && !y.is_zero());
        let ix = Ideal::principal(&nf, &x).unwrap();
        let iy = Ideal::principal(&nf, &y).unwrap();
        let prod = ix.mul(&nf, &iy);
        prop_assert_eq!(&prod.norm, &(&ix.norm * &iy.norm));
        prop_assert_eq!(prod.norm.clone(), nf.norm(&x).abs().to_integer() * nf.norm(&y).abs().to_integer());
        prop_assert!(prod.hnf == Ideal::principal(&nf, &nf.mul(&x, &y)).unwrap().hnf);
    }

    #[test]
    fn reduce_is_unit_invariant_and_idempotent(a in -500i64..500, b in -500i64..500, k in -3i32..=3, neg in any::<bool>()) {
        let r = q2();
        let x = [a, b];
        prop_assume!(r.norm(&x) != 0);
        let (y, u) = r.reduce(&x).unwrap();
        prop_assert!(r.in_domain(&y));
        prop_assert_eq!(r.mul(&x, &u), y);
        prop_assert_eq!(r.reduce(&y).unwrap().0, y);
        let mut z = x;
        for _ in 0..k.unsigned_abs() {
            z = r.mul(&z, if k > 0 { &r.eps } else { &r.eps_inv });
        }
        if neg {
            z = [-z[0], -z[1]];
        }
        prop_assert_eq!(r.reduce(&z).unwrap().0, y);
    }

    #[test]
    fn count_monotone_in_x(x1 in 1.0f64..3000.0, dx in 0.0f64..3000.0, n in 1u32..=2, alpha in 0usize..3) {
        let r = q2();
        let pi = FieldElement::from_ints(&[3, 1]);
        let a = FieldElement::from_ints(&[[1, 0], [1, 1], [2, 1]][alpha]);
        let c1 = count_progression(&r, &a, &pi, n, x1, 0).unwrap().count;
        let c2 = count_progression(&r, &a, &pi, n, x1 + dx, 0).unwrap().count;
        prop_assert!(c1 <= c2);
    }
}

#[test]
fn min_norm_nondecreasing_in_n() {
    let r = q1();
    let five = r.nf.from_int(5);
    let m: Vec<u64> = (1..=4).map(|n| min_norm_coset(&r, &five, n).unwrap().min_norm).collect();
    assert_eq!(m, vec![4, 24, 124, 624]);
    let r = q2();
    let pi = FieldElement::from_ints(&[3, 1]);
    let m: Vec<u64> = (1..=2).map(|n| min_norm_coset(&r, &pi, n).unwrap().min_norm).collect();
    assert!(m.windows(2).all(|w| w[0] <= w[1]), "{m:?}");
}

#[test]
fn cones_cover_random_elements() {
    let r = q2();
    let dec = build_cones(&r, 200).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut tried = 0;
    while tried < 10_000 {
        let z = [rng.gen_range(-1000i64..=1000), rng.gen_range(-1000i64..=1000)];
        if r.norm(&z) == 0 {
            continue;
        }
        tried += 1;
        let (_, w) = cone_cover(&r, &dec, &z).unwrap().unwrap_or_else(|| panic!("{z:?} not covered"));
        assert_eq!(r.norm(&w).abs(), r.norm(&z).abs());
    }
}

#[test]
fn gauss_over_qsqrt2_local() {
    let rcg = twistl::verify::qsqrt2_rcg(2).unwrap();
    let delta = twistl::gauss::delta_residue(&rcg).unwrap();
    for phi in primitive_local_characters(7, 2, 2).iter().take(12) {
        let g = gauss_sum_local(phi, delta, 1).unwrap();
        assert!((g.value.norm_sqr() - 49.0).abs() < 1e-9);
        let w = twistl::gauss::root_number_local(phi, delta, Complex64::new(1.0, 0.0), f64::INFINITY).unwrap();
        assert!((w.norm() - 1.0).abs() < 1e-12);
    }
}
