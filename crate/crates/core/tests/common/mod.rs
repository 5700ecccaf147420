#![allow(dead_code)]

use rand::Rng;
use returnset::jets::Poly;
use returnset::scalar::rat;
use returnset::{QGerm, QMatrix, QPoly, Rational};

pub fn mat(rows: &[&[i64]]) -> QMatrix {
    QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect())
}

pub fn vec_q(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x)).collect()
}

pub fn poly(terms: &[(&str, &str)]) -> QPoly {
    Poly::parse_terms(2, terms.iter().copied()).unwrap()
}

pub fn rotation() -> QGerm {
    QGerm::new(vec![poly(&[("y", "-1")]), poly(&[("x", "1")])]).unwrap()
}

pub fn parabola() -> QPoly {
    poly(&[("y", "1"), ("x^2", "-1")])
}

pub fn line_y() -> QPoly {
    poly(&[("y", "1")])
}

/// Integer matrix with determinant ±1 and entries in `[-bound, bound]`.
pub fn unimodular(rng: &mut impl Rng, r: usize, bound: i64) -> QMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..r).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
        let m = QMatrix::from_rows(rows.iter().map(|row| row.iter().map(|&v| rat(v)).collect()).collect());
        let d = m.determinant();
        if d == rat(1) || d == rat(-1) {
            return m;
        }
    }
}

pub fn random_vec(rng: &mut impl Rng, r: usize, bound: i64) -> Vec<Rational> {
    (0..r).map(|_| rat(rng.gen_range(-bound..=bound))).collect()
}

/// Invertible integer matrix (any nonzero determinant) with small entries.
pub fn invertible(rng: &mut impl Rng, r: usize, bound: i64) -> QMatrix {
    loop {
        let m = QMatrix::from_rows(
            (0..r).map(|_| (0..r).map(|_| rat(rng.gen_range(-bound..=bound))).collect()).collect(),
        );
        if m.determinant() != rat(0) {
            return m;
        }
    }
}
