mod common;

use num_bigint::BigInt;
use num_rational::Ratio;
use proptest::prelude::*;
use returnset::padic::{
    exact_zero_test, integer_zeros, matrix_exp, matrix_log, orbit_series, strassmann_bound, PadicMatrix, PadicScalar,
    PadicSeries, StrassmannBound, TailBound, Valuation,
};
use returnset::recurrence::reduction_order;
use returnset::scalar::{rat, rat_frac};
use returnset::{QMatrix, Rational};

use common::{mat, vec_q};

fn scalar(p: u64, m: u32, v: i64) -> PadicScalar {
    PadicScalar::from_i64(p, m, v)
}

fn exact_mod(v: i128, p: u64, m: u32) -> BigInt {
    let modulus = (p as i128).pow(m);
    BigInt::from(v.rem_euclid(modulus))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn ring_operations_match_integer_arithmetic(a in -100_000i64..100_000, b in -100_000i64..100_000, c in -1000i64..1000, pi in 0usize..3) {
        let p = [3u64, 5, 7][pi];
        let m = 6;
        let (x, y, z) = (scalar(p, m, a), scalar(p, m, b), scalar(p, m, c));
        prop_assert_eq!((&x + &y).residue().clone(), exact_mod(a as i128 + b as i128, p, m));
        prop_assert_eq!((&x - &y).residue().clone(), exact_mod(a as i128 - b as i128, p, m));
        // unit operands keep full precision under multiplication
        if a % p as i64 != 0 && b % p as i64 != 0 {
            prop_assert_eq!((&x * &y).residue().clone(), exact_mod(a as i128 * b as i128, p, m));
        }
        let lhs = &(&x + &y) * &z;
        let rhs = &(&x * &z) + &(&y * &z);
        prop_assert!(lhs.agrees_with(&rhs));
        prop_assert!((&(&x * &y) * &z).agrees_with(&(&x * &(&y * &z))));
        prop_assert!((&x + &(-&x)).is_zero_to_precision());
    }

    #[test]
    fn exp_inverts_log(entries in prop::collection::vec(-20i64..20, 4), pi in 0usize..2) {
        let p = [5u64, 7][pi];
        let m = 10;
        let pe = p as i64;
        let q = mat(&[&[1 + pe * entries[0], pe * entries[1]], &[pe * entries[2], 1 + pe * entries[3]]]);
        let big_m = PadicMatrix::from_rational(&q, p, m).unwrap();
        let log = matrix_log(&big_m).unwrap();
        prop_assert!(log.valuation_lower_bound() >= 1);
        let back = matrix_exp(&log).unwrap();
        prop_assert!(back.agrees_with_rational(&q));
    }

    #[test]
    fn log_inverts_exp(entries in prop::collection::vec(-20i64..20, 4)) {
        let (p, m) = (5u64, 10u32);
        let a = mat(&[&[5 * entries[0], 5 * entries[1]], &[5 * entries[2], 5 * entries[3]]]);
        let big_a = PadicMatrix::from_rational(&a, p, m).unwrap();
        let round = matrix_log(&matrix_exp(&big_a).unwrap()).unwrap();
        prop_assert!(round.agrees_with_rational(&a));
    }
}

#[test]
fn log_of_one_plus_five_matches_exact_series() {
    let (p, m) = (5u64, 4u32);
    // sum_{k>=1} (-1)^(k+1) 5^k / k; terms with k - v_5(k) >= 4 vanish mod 5^4
    let mut exact = rat(0);
    for k in 1..40i64 {
        let term = Rational::new(BigInt::from(5).pow(k as u32), BigInt::from(k));
        exact = if k % 2 == 1 { exact + term } else { exact - term };
    }
    let log = matrix_log(&PadicMatrix::from_rational(&mat(&[&[6]]), p, m).unwrap()).unwrap();
    assert!(log.get(0, 0).agrees_with_rational(&exact));
    let head = rat(5) - rat_frac(25, 2) + rat_frac(125, 3);
    assert!(log.get(0, 0).agrees_with_rational(&head));
    assert!(matrix_log(&PadicMatrix::identity(2, p, m)).unwrap().entries().all(PadicScalar::is_zero_to_precision));
}

#[test]
fn valuation_examples() {
    assert_eq!(scalar(5, 4, 50).valuation(), Valuation::Finite(2));
    assert_eq!(scalar(5, 4, 3).valuation(), Valuation::Finite(0));
    assert_eq!(scalar(5, 4, 0).valuation(), Valuation::AtLeast(4));
}

fn exact_orbit_value(q: &QMatrix, n: u64, x: &[Rational], ell: &[Rational], c: &Rational) -> Rational {
    let y = q.pow(n).mul_vec(x);
    ell.iter().zip(&y).map(|(a, b)| a * b).fold(rat(0), |acc, t| acc + t) - c
}

#[test]
fn orbit_series_interpolates_fibonacci() {
    let fib = mat(&[&[0, 1], &[1, 1]]);
    let (x, ell, c) = (vec_q(&[0, 1]), vec_q(&[1, 0]), rat(0));
    assert_eq!(reduction_order(&fib, 3).unwrap(), 8);
    for s in 0..8u64 {
        let g = orbit_series(&fib, 8, s, &x, &ell, &c, 3, 24).unwrap();
        for r in 0..=8u64 {
            let want = exact_orbit_value(&fib, 8 * r + s, &x, &ell, &c);
            assert!(g.eval(r as i64).agrees_with_rational(&want), "s = {s}, r = {r}");
        }
        let head = exact_orbit_value(&fib, s, &x, &ell, &c);
        assert!(g.coefficients()[0].agrees_with_rational(&head));
    }
}

#[test]
fn orbit_series_interpolates_random_unimodular_systems() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let q = common::unimodular(&mut rng, 3, 2);
        let (x, ell) = (common::random_vec(&mut rng, 3, 3), common::random_vec(&mut rng, 3, 3));
        let c = rat(1);
        let n = reduction_order(&q, 3).unwrap();
        let s = n / 2;
        let g = orbit_series(&q, n, s, &x, &ell, &c, 3, 16).unwrap();
        for r in 0..=8u64 {
            let want = exact_orbit_value(&q, n * r + s, &x, &ell, &c);
            assert!(g.eval(r as i64).agrees_with_rational(&want));
        }
    }
}

#[test]
fn identity_orbit_is_constant() {
    let g = orbit_series(&QMatrix::identity(2), 1, 0, &vec_q(&[2, 3]), &vec_q(&[1, 1]), &rat(1), 5, 8).unwrap();
    assert!(g.coefficients()[0].agrees_with_rational(&rat(4)));
    assert!(g.coefficients()[1..].iter().all(PadicScalar::is_zero_to_precision));
}

fn polynomial_series(p: u64, m: u32, coeffs: &[i64]) -> PadicSeries {
    let cs = coeffs.iter().map(|&c| scalar(p, m, c)).collect();
    PadicSeries::new(p, m, cs, TailBound { slope: Ratio::from_integer(1), intercept: Ratio::from_integer(m as i64) })
}

#[test]
fn strassmann_examples() {
    let g = polynomial_series(5, 8, &[-5, 1]);
    assert_eq!(strassmann_bound(&g).unwrap(), StrassmannBound::Finite(1));
    assert_eq!(integer_zeros(&g, |r| rat(r - 5)).unwrap().zeros, vec![5]);
    let unit = polynomial_series(5, 8, &[3, 5, 25]);
    assert_eq!(strassmann_bound(&unit).unwrap(), StrassmannBound::Finite(0));
    assert!(integer_zeros(&unit, |r| rat(3 + 5 * r + 25 * r * r)).unwrap().zeros.is_empty());
    let px = polynomial_series(5, 8, &[0, 5]);
    assert_eq!(strassmann_bound(&px).unwrap(), StrassmannBound::Finite(1));
    assert_eq!(integer_zeros(&px, |r| rat(5 * r)).unwrap().zeros, vec![0]);
}

#[test]
fn exact_zero_test_examples() {
    assert!(exact_zero_test(|_| rat(0), 2));
    let fib = |r: i64| -> Rational {
        let (mut a, mut b) = (0i64, 1i64);
        for _ in 0..r {
            (a, b) = (b, a + b);
        }
        rat(a)
    };
    assert!(!exact_zero_test(fib, 2));
    let six = [0, 1, 1, 0, -1, -1];
    assert!(exact_zero_test(|r| rat(six[(3 * r as usize) % 6]), 6));
}
