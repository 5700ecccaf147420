mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use returnset::jets::{
    arnold_scan, brute_tangency_window, colength, jet_of, min_finite_order, principal_subspace, pullback,
    stabilized_germ, substitution_matrix, tangency_set, Colength, JetError, MonomialBasis, Poly, DEFAULT_ORDER_CAP,
};
use returnset::recurrence::reduction_order;
use returnset::scalar::{is_p_integral, odd_primes, rat, rational_valuation};
use returnset::{QGerm, QMatrix, QPoly};

use common::{line_y, parabola, poly, rotation};

fn truncate(p: &QPoly, k: usize) -> QPoly {
    Poly::from_terms(2, p.terms().filter(|(e, _)| e.iter().sum::<u32>() as usize <= k).map(|(e, c)| (e.clone(), c.clone())))
}

/// Components of `φ⁻¹` modulo degree `k + 1`, by fixed-point iteration on polynomials.
fn inverse_components(phi: &QGerm, k: usize) -> Vec<QPoly> {
    let l_inv = phi.linear_part().inverse().unwrap();
    let vars = [Poly::var(2, 0), Poly::var(2, 1)];
    let higher: Vec<QPoly> = phi
        .components()
        .iter()
        .map(|c| Poly::from_terms(2, c.terms().filter(|(e, _)| e.iter().sum::<u32>() >= 2).map(|(e, c)| (e.clone(), c.clone()))))
        .collect();
    let mut psi = vars.to_vec();
    for _ in 0..=k {
        let rhs: Vec<QPoly> = (0..2).map(|i| vars[i].sub(&truncate(&higher[i].compose(&psi), k))).collect();
        psi = (0..2)
            .map(|i| rhs[0].scale(&l_inv[(i, 0)]).add(&rhs[1].scale(&l_inv[(i, 1)])))
            .collect();
    }
    psi
}

/// Whether `jet_k(f_Z ∘ φⁿ)` lies in the span of `f_D·m` truncated to degree `k`.
fn contained(f_d: &QPoly, g: &QPoly, k: usize) -> bool {
    let basis = MonomialBasis::get(2, k);
    let mut cols: Vec<Vec<returnset::Rational>> = basis
        .monomials()
        .iter()
        .map(|m| jet_of(&f_d.mul(&Poly::monomial(2, m.clone(), rat(1))), k).into_coefficients())
        .collect();
    let r0 = QMatrix::from_columns(basis.len(), &cols).rank();
    cols.push(jet_of(g, k).into_coefficients());
    QMatrix::from_columns(basis.len(), &cols).rank() == r0
}

fn brute_tangency(phi: &QGerm, f_d: &QPoly, f_z: &QPoly, k: usize, h: i64) -> Vec<i64> {
    let inv = inverse_components(phi, k);
    let mut hits = Vec::new();
    for (sign, subs) in [(1i64, phi.components().to_vec()), (-1, inv)] {
        let mut g = truncate(f_z, k);
        for n in 0..=h {
            if (n > 0 || sign == 1) && contained(f_d, &g, k) {
                hits.push(sign * n);
            }
            g = truncate(&g.compose(&subs), k);
        }
    }
    hits.sort_unstable();
    hits
}

fn random_germ(rng: &mut impl Rng, linear_only: bool) -> QGerm {
    loop {
        let m: Vec<i64> = (0..4).map(|_| rng.gen_range(-2..=2)).collect();
        if m[0] * m[3] - m[1] * m[2] == 0 {
            continue;
        }
        let mut comps = vec![
            poly(&[("x", &m[0].to_string()), ("y", &m[1].to_string())]),
            poly(&[("x", &m[2].to_string()), ("y", &m[3].to_string())]),
        ];
        if !linear_only {
            let a = rng.gen_range(-1..=1).to_string();
            let b = rng.gen_range(-1..=1).to_string();
            comps[0] = comps[0].add(&poly(&[("y^2", &a)]));
            comps[1] = comps[1].add(&poly(&[("x^2", &b)]));
        }
        return QGerm::new(comps).unwrap();
    }
}

fn random_curve(rng: &mut impl Rng) -> QPoly {
    let c = |rng: &mut dyn rand::RngCore| rng.gen_range(-2..=2i64).to_string();
    let p = poly(&[("x", &c(rng)), ("y", &c(rng)), ("x^2", &c(rng)), ("x*y", &c(rng)), ("y^3", &c(rng))]);
    if p.is_zero() {
        line_y()
    } else {
        p
    }
}

#[test]
fn tangency_sets_match_independent_jet_containment() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for trial in 0..12 {
        let phi = random_germ(&mut rng, trial % 2 == 0);
        let (f_d, f_z) = (random_curve(&mut rng), random_curve(&mut rng));
        for k in 0..=3 {
            let set = tangency_set(&phi, &f_d, &f_z, k).unwrap();
            let oracle = brute_tangency(&phi, &f_d, &f_z, k, 50);
            assert_eq!(set.members_in(-50, 50), oracle, "trial {trial}, k = {k}, set {set}");
            let lib = brute_tangency_window(&phi, &f_d, &f_z, k, 50).unwrap();
            assert_eq!(lib.members(), oracle);
        }
    }
}

#[test]
fn tangency_chains_decrease() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..6 {
        let phi = random_germ(&mut rng, false);
        let (f_d, f_z) = (random_curve(&mut rng), random_curve(&mut rng));
        let chain: Vec<_> = (0..=3).map(|k| tangency_set(&phi, &f_d, &f_z, k).unwrap()).collect();
        assert!(chain[0].is_full());
        for w in chain.windows(2) {
            assert!(w[1].is_subset_of(&w[0]), "{} then {}", w[0], w[1]);
        }
    }
}

fn good_prime_for(m: &QMatrix) -> u64 {
    let det = m.determinant();
    odd_primes()
        .find(|&p| m.entries().all(|q| is_p_integral(q, p)) && rational_valuation(&det, p) == Some(0))
        .unwrap()
}

fn identity_mod_p(s: &QMatrix, p: u64) -> bool {
    let d = s.sub(&QMatrix::identity(s.rows()));
    let ok = d.entries().all(|q| q == &rat(0) || rational_valuation(q, p).is_some_and(|v| v >= 1));
    ok
}

#[test]
fn jet_actions_of_linear_germs_share_one_period() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..8 {
        let phi = random_germ(&mut rng, true);
        let m = phi.linear_part();
        let p = good_prime_for(&m);
        let n = reduction_order(&m, p).unwrap();
        for k in [1, 4, 8, 12] {
            assert!(identity_mod_p(&substitution_matrix(&phi, k).pow(n), p), "k = {k}");
        }
    }
}

#[test]
fn nonlinear_germs_break_the_shared_period() {
    // linear part is the identity (N = 1) but y^2 survives in the jet action
    let phi = QGerm::new(vec![poly(&[("x", "1"), ("y^2", "1")]), poly(&[("y", "1")])]).unwrap();
    let n = reduction_order(&phi.linear_part(), 3).unwrap();
    assert_eq!(n, 1);
    assert!(!identity_mod_p(&substitution_matrix(&phi, 2).pow(n), 3));
    // the period of S itself still bounds every A_k
    let s2 = substitution_matrix(&phi, 2);
    assert!(identity_mod_p(&s2.pow(reduction_order(&s2, 3).unwrap()), 3));
}

#[test]
fn rotation_examples() {
    let set = |k| tangency_set(&rotation(), &parabola(), &line_y(), k).unwrap().to_string();
    assert_eq!(set(0), "Z [two-sided]");
    assert_eq!(set(1), "∅ ∪ (0 mod 2) [two-sided]");
    assert_eq!(set(2), "∅ [two-sided]");
    assert_eq!(min_finite_order(&rotation(), &parabola(), &line_y(), DEFAULT_ORDER_CAP).unwrap(), 2);
    let diag = QGerm::new(vec![poly(&[("x", "1")]), poly(&[("y", "2")])]).unwrap();
    assert_eq!(min_finite_order(&diag, &parabola(), &line_y(), DEFAULT_ORDER_CAP).unwrap(), 2);
    let id = QGerm::identity(2);
    assert!(matches!(min_finite_order(&id, &parabola(), &parabola(), 6), Err(JetError::PeriodicDivisor(1))));
}

#[test]
fn stabilized_germ_examples() {
    let diag = QGerm::new(vec![poly(&[("x", "1")]), poly(&[("y", "2")])]).unwrap();
    let st = stabilized_germ(&diag, &parabola(), DEFAULT_ORDER_CAP, -10..=10).unwrap();
    assert_eq!((st.step, st.order), (1, 1));
    assert_eq!(st.verified.len(), 20);
    assert!(matches!(stabilized_germ(&diag, &line_y(), DEFAULT_ORDER_CAP, -10..=10), Err(JetError::PeriodicDivisor(1))));
    // the rotation has order 4, so y - x^2 returns to itself
    assert!(matches!(stabilized_germ(&rotation(), &parabola(), DEFAULT_ORDER_CAP, -10..=10), Err(JetError::PeriodicDivisor(4))));
}

#[test]
fn colength_examples() {
    assert_eq!(colength(&parabola(), &poly(&[("y", "1"), ("x^2", "1")])).unwrap(), Colength::Finite(2));
    assert_eq!(colength(&line_y(), &poly(&[("x", "1")])).unwrap(), Colength::Finite(1));
    assert_eq!(colength(&parabola(), &parabola()).unwrap(), Colength::Infinite);
}

#[test]
fn arnold_examples() {
    let r = arnold_scan(&rotation(), &parabola(), &line_y(), 50, DEFAULT_ORDER_CAP).unwrap();
    assert!(r.degenerate_set.is_empty());
    assert_eq!(r.max_mult, 2);
    assert!(r.max_mult <= r.bound);
    let diag = QGerm::new(vec![poly(&[("x", "1")]), poly(&[("y", "2")])]).unwrap();
    let r = arnold_scan(&diag, &line_y(), &line_y(), 20, DEFAULT_ORDER_CAP).unwrap();
    assert!(r.degenerate_set.is_full());
    let r = arnold_scan(&QGerm::identity(2), &line_y(), &poly(&[("x", "1")]), 20, DEFAULT_ORDER_CAP).unwrap();
    assert!(r.degenerate_set.is_empty());
    assert_eq!(r.max_mult, 1);
}

fn arb_poly() -> impl Strategy<Value = QPoly> {
    prop::collection::vec(-3i64..=3, 6).prop_map(|c| {
        let names = ["x", "y", "x^2", "x*y", "y^2", "x^3"];
        let terms: Vec<(String, String)> = names.iter().zip(&c).map(|(n, c)| (n.to_string(), c.to_string())).collect();
        Poly::parse_terms(2, terms.iter().map(|(a, b)| (a.as_str(), b.as_str()))).unwrap()
    })
}

fn arb_germ() -> impl Strategy<Value = QGerm> {
    (prop::collection::vec(-2i64..=2, 4), -1i64..=1, -1i64..=1)
        .prop_filter("invertible", |(m, _, _)| m[0] * m[3] != m[1] * m[2])
        .prop_map(|(m, a, b)| {
            QGerm::new(vec![
                poly(&[("x", &m[0].to_string()), ("y", &m[1].to_string()), ("x*y", &a.to_string())]),
                poly(&[("x", &m[2].to_string()), ("y", &m[3].to_string()), ("y^2", &b.to_string())]),
            ])
            .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pullback_is_a_ring_morphism(f in arb_poly(), g in arb_poly(), phi in arb_germ(), k in 1usize..5) {
        let (jf, jg) = (jet_of(&f, k), jet_of(&g, k));
        let lhs = pullback(&jf.mul(&jg), &phi);
        let rhs = pullback(&jf, &phi).mul(&pullback(&jg, &phi));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullback_is_functorial(f in arb_poly(), phi in arb_germ(), psi in arb_germ(), k in 1usize..5) {
        let jf = jet_of(&f, k);
        prop_assert_eq!(pullback(&jf, &phi.compose(&psi)), pullback(&pullback(&jf, &phi), &psi));
        let s = substitution_matrix(&psi, k).mul(&substitution_matrix(&phi, k));
        prop_assert_eq!(substitution_matrix(&phi.compose(&psi), k), s);
        prop_assert_eq!(jet_of(&f.compose(phi.components()), k), pullback(&jf, &phi));
    }

    #[test]
    fn substitution_matrices_are_invertible(phi in arb_germ(), k in 0usize..6) {
        prop_assert!(substitution_matrix(&phi, k).determinant() != rat(0));
    }

    #[test]
    fn colength_is_symmetric_and_unit_invariant(f in arb_poly(), g in arb_poly(), u in 1i64..4) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        let c = colength(&f, &g).unwrap();
        prop_assert_eq!(colength(&g, &f).unwrap(), c);
        let unit = poly(&[("1", &u.to_string()), ("x", "1")]);
        prop_assert_eq!(colength(&f.mul(&unit), &g).unwrap(), c);
    }

    #[test]
    fn principal_subspace_contains_multiples(f in arb_poly(), m in arb_poly(), k in 1usize..5) {
        prop_assume!(!jet_of(&f, k).is_zero());
        let w = principal_subspace(&jet_of(&f, k), k).unwrap();
        prop_assert!(w.contains(&jet_of(&f.mul(&m), k)));
    }
}

#[test]
fn arnold_bound_holds_on_random_germs() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let mut checked = 0;
    for _ in 0..10 {
        let linear = rng.gen_bool(0.5);
        let phi = random_germ(&mut rng, linear);
        let (f_y, f_z) = (random_curve(&mut rng), random_curve(&mut rng));
        // Nonlinear iterates grow quickly, so their window is smaller.
        let window = if linear { 10 } else { 4 };
        match arnold_scan(&phi, &f_y, &f_z, window, 5) {
            Ok(r) => {
                assert!(r.max_mult <= r.bound, "{} > {}", r.max_mult, r.bound);
                checked += 1;
            }
            Err(JetError::PeriodicDivisor(_) | JetError::OrderCapExceeded(_) | JetError::VerificationFailed(_)) => {}
            Err(e) => panic!("{e}"),
        }
    }
    assert!(checked > 0);
}
