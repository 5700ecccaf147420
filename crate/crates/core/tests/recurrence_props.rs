mod common;

use num_bigint::BigUint;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use returnset::recurrence::{
    brute_window, good_prime, reduction_order, solve_hyperplane, solve_point, solve_point_certified, solve_subspace,
    uniform_period_bound, LinearSystem, ReturnTarget, SolveError, SolverOptions,
};
use returnset::scalar::{rat, rat_frac};
use returnset::{QMatrix, Rational, SemilinearSet};

use common::{mat, random_vec, unimodular, vec_q};

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).fold(rat(0), |s, t| s + t)
}

fn check_hyperplane(sys: &LinearSystem, ell: &[Rational], c: &Rational, h: i64) -> SemilinearSet {
    let set = solve_hyperplane(sys, ell, c).unwrap();
    let w = brute_window(sys, |y| &dot(ell, y) == c, h);
    assert_eq!(w.first_disagreement(&set), None, "solver gave {set}");
    set
}

#[test]
fn random_hyperplanes_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let r = rng.gen_range(2..=3);
        let m = unimodular(&mut rng, r, 3);
        let sys = LinearSystem::new(m, random_vec(&mut rng, r, 3)).unwrap();
        let ell = random_vec(&mut rng, r, 2);
        let c = rat(rng.gen_range(-2..=2));
        check_hyperplane(&sys, &ell, &c, 300);
    }
}

#[test]
fn rational_and_affine_systems_match_brute_force() {
    let half = QMatrix::from_rows(vec![vec![rat(0), rat_frac(-1, 2)], vec![rat(2), rat(0)]]);
    let sys = LinearSystem::new(half, vec![rat(1), rat_frac(1, 3)]).unwrap();
    check_hyperplane(&sys, &vec_q(&[1, 0]), &rat(1), 200);
    let shear = LinearSystem::affine(mat(&[&[1, 1], &[0, 1]]), Some(vec_q(&[0, 1])), vec_q(&[0, 0])).unwrap();
    // x_n = n(n-1)/2: the value 3 is hit at n = 3 and n = -2
    let set = check_hyperplane(&shear, &vec_q(&[1, 0]), &rat(3), 200);
    assert_eq!(set, "{-2, 3}".parse().unwrap());
    let rotation_about = LinearSystem::affine(mat(&[&[0, -1], &[1, 0]]), Some(vec_q(&[1, 1])), vec_q(&[1, 0])).unwrap();
    let target = ReturnTarget::Point(rotation_about.state(2));
    let pt = solve_point(&rotation_about, &rotation_about.state(2)).unwrap();
    assert_eq!(brute_window(&rotation_about, |y| target.contains(y), 100).first_disagreement(&pt), None);
}

#[test]
fn shifting_the_start_translates_the_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..10 {
        let m = unimodular(&mut rng, 2, 2);
        let x = random_vec(&mut rng, 2, 3);
        let ell = random_vec(&mut rng, 2, 2);
        let sys = LinearSystem::new(m.clone(), x.clone()).unwrap();
        let base = solve_hyperplane(&sys, &ell, &rat(0)).unwrap();
        let k = rng.gen_range(1..5u64);
        let moved = LinearSystem::new(m.clone(), m.pow(k).mul_vec(&x)).unwrap();
        assert_eq!(solve_hyperplane(&moved, &ell, &rat(0)).unwrap(), base.translate(-(k as i64)));
    }
}

#[test]
fn inverting_the_map_negates_the_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..10 {
        let m = unimodular(&mut rng, 3, 2);
        let x = random_vec(&mut rng, 3, 2);
        let ell = random_vec(&mut rng, 3, 2);
        let fwd = solve_hyperplane(&LinearSystem::new(m.clone(), x.clone()).unwrap(), &ell, &rat(1)).unwrap();
        let back = solve_hyperplane(&LinearSystem::new(m.inverse().unwrap(), x).unwrap(), &ell, &rat(1)).unwrap();
        assert_eq!(back, fwd.negate());
    }
}

#[test]
fn conjugation_leaves_the_set_unchanged() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..10 {
        let m = unimodular(&mut rng, 2, 2);
        let p = common::invertible(&mut rng, 2, 3);
        let p_inv = p.inverse().unwrap();
        let x = random_vec(&mut rng, 2, 3);
        let ell = random_vec(&mut rng, 2, 2);
        let base = solve_hyperplane(&LinearSystem::new(m.clone(), x.clone()).unwrap(), &ell, &rat(0)).unwrap();
        let conj = p.mul(&m).mul(&p_inv);
        let ell_conj = p_inv.transpose().mul_vec(&ell);
        let sys = LinearSystem::new(conj, p.mul_vec(&x)).unwrap();
        assert_eq!(solve_hyperplane(&sys, &ell_conj, &rat(0)).unwrap(), base);
    }
}

#[test]
fn named_instances() {
    let fib = LinearSystem::new(mat(&[&[0, 1], &[1, 1]]), vec_q(&[0, 1])).unwrap();
    assert_eq!(check_hyperplane(&fib, &vec_q(&[1, 0]), &rat(0), 2000).to_string(), "{0} [two-sided]");
    assert_eq!(solve_point(&fib, &vec_q(&[1, 1])).unwrap().to_string(), "{1} [two-sided]");
    let six = LinearSystem::from_recurrence(&vec_q(&[1, -1]), &vec_q(&[0, 1])).unwrap();
    assert_eq!(check_hyperplane(&six, &vec_q(&[1, 0]), &rat(0), 100), "(0 mod 3)".parse().unwrap());
    let rot = LinearSystem::new(mat(&[&[0, -1], &[1, 0]]), vec_q(&[1, 0])).unwrap();
    assert_eq!(solve_point(&rot, &vec_q(&[0, 1])).unwrap(), "(1 mod 4)".parse().unwrap());
    assert_eq!(solve_subspace(&rot, &mat(&[&[1], &[0]])).unwrap(), "(0 mod 2)".parse().unwrap());
    assert_eq!(solve_subspace(&rot, &QMatrix::identity(2)).unwrap(), "Z".parse().unwrap());
    let id = LinearSystem::new(QMatrix::identity(2), vec_q(&[1, 2])).unwrap();
    assert_eq!(solve_point(&id, &vec_q(&[1, 2])).unwrap(), "Z".parse().unwrap());
    assert_eq!(reduction_order(&mat(&[&[0, 1], &[1, 1]]), 3).unwrap(), 8);
    assert_eq!(good_prime(&fib), 3);
}

#[test]
fn forced_prime_must_be_admissible() {
    let fib = LinearSystem::new(mat(&[&[0, 1], &[1, 1]]), vec_q(&[0, 1])).unwrap();
    let opts = SolverOptions { prime: Some(5), ..SolverOptions::default() };
    let sol = solve_point_certified(&fib, &vec_q(&[1, 1]), &opts).unwrap();
    assert_eq!(sol.certificates[0].prime, 5);
    let fifth = LinearSystem::new(QMatrix::from_rows(vec![vec![rat_frac(1, 5), rat(0)], vec![rat(0), rat(5)]]), vec_q(&[1, 1])).unwrap();
    let bad = solve_point_certified(&fifth, &vec_q(&[1, 1]), &opts);
    assert!(matches!(bad, Err(SolveError::BadPrime(5))));
}

/// Order of every element of `GL_r(F_3)`, from plain modular arithmetic.
fn gl_orders(r: usize) -> Vec<u64> {
    let cells = r * r;
    let mut orders = Vec::new();
    for code in 0..3usize.pow(cells as u32) {
        let a: Vec<i64> = (0..cells).map(|i| (code / 3usize.pow(i as u32) % 3) as i64).collect();
        let mul = |x: &[i64], y: &[i64]| -> Vec<i64> {
            (0..cells)
                .map(|idx| {
                    let (i, j) = (idx / r, idx % r);
                    (0..r).map(|k| x[i * r + k] * y[k * r + j]).sum::<i64>().rem_euclid(3)
                })
                .collect()
        };
        let id: Vec<i64> = (0..cells).map(|idx| i64::from(idx / r == idx % r)).collect();
        let mut p = a.clone();
        let mut n = 1u64;
        // singular matrices never return to the identity; cap above the group exponent
        while p != id && n <= 100 {
            p = mul(&p, &a);
            n += 1;
        }
        if p == id {
            orders.push(n);
        }
    }
    orders
}

#[test]
fn uniform_period_bound_is_the_group_exponent() {
    let o1 = gl_orders(1);
    assert_eq!(o1.len(), 2);
    let o2 = gl_orders(2);
    assert_eq!(o2.len(), 48);
    let e2 = o2.iter().fold(1u64, |a, b| a.lcm(b));
    assert_eq!(e2, 24);
    assert_eq!(uniform_period_bound(1), BigUint::from(2u32));
    assert_eq!(uniform_period_bound(2), BigUint::from(e2));
    let o3 = gl_orders(3);
    assert_eq!(o3.len(), 11232);
    let e3 = o3.iter().fold(1u64, |a, b| a.lcm(b));
    assert_eq!(uniform_period_bound(3), BigUint::from(e3));
}

#[test]
fn point_return_periods_divide_the_uniform_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let opts = SolverOptions { prime: Some(3), ..SolverOptions::default() };
    for _ in 0..30 {
        let m = unimodular(&mut rng, 2, 3);
        let x = random_vec(&mut rng, 2, 3);
        let sys = LinearSystem::new(m.clone(), x.clone()).unwrap();
        let y = m.pow(rng.gen_range(0..6)).mul_vec(&x);
        let set = solve_point_certified(&sys, &y, &opts).unwrap().set;
        assert_eq!(24 % set.period(), 0, "{set}");
        assert!(set.contains(0) || !set.is_empty());
    }
}

#[test]
fn zero_functional_is_all_or_nothing() {
    let fib = LinearSystem::new(mat(&[&[0, 1], &[1, 1]]), vec_q(&[0, 1])).unwrap();
    assert_eq!(solve_hyperplane(&fib, &vec_q(&[0, 0]), &rat(0)).unwrap(), "Z".parse().unwrap());
    assert!(solve_hyperplane(&fib, &vec_q(&[0, 0]), &rat(1)).unwrap().is_empty());
}
