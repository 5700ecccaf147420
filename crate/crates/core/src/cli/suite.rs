//! Named worked examples, recomputed from scratch on every run.

use serde_json::json;

use super::{Format, Output, EXIT_MISMATCH, EXIT_OK, EXIT_PARSE};
use crate::jets::{arnold_scan, colength, min_finite_order, stabilized_germ, tangency_set, Poly, DEFAULT_ORDER_CAP};
use crate::recurrence::{
    good_prime, reduction_order, solve_hyperplane, solve_point, solve_subspace, uniform_period_bound, LinearSystem,
};
use crate::scalar::rat;
use crate::semilinear::{clearing_modulus, stepsize};
use crate::{QGerm, QMatrix, QPoly, SemilinearSet};

/// One example: the expected rendering and a thunk computing the actual one.
pub struct SuiteEntry {
    pub name: &'static str,
    pub expected: &'static str,
    pub compute: fn() -> String,
}

fn poly(terms: &[(&str, &str)]) -> QPoly {
    Poly::parse_terms(2, terms.iter().copied()).expect("well-formed example polynomial")
}

fn matrix(rows: &[&[i64]]) -> QMatrix {
    QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect())
}

fn vector(v: &[i64]) -> Vec<crate::Rational> {
    v.iter().map(|&x| rat(x)).collect()
}

fn rotation() -> QGerm {
    QGerm::new(vec![poly(&[("y", "-1")]), poly(&[("x", "1")])]).expect("rotation germ")
}

fn diag12() -> QGerm {
    QGerm::new(vec![poly(&[("x", "1")]), poly(&[("y", "2")])]).expect("diagonal germ")
}

fn parabola() -> QPoly {
    poly(&[("y", "1"), ("x^2", "-1")])
}

fn line_y() -> QPoly {
    poly(&[("y", "1")])
}

fn fibonacci() -> LinearSystem {
    LinearSystem::new(matrix(&[&[0, 1], &[1, 1]]), vector(&[0, 1])).expect("invertible")
}

fn rotation_system() -> LinearSystem {
    LinearSystem::new(matrix(&[&[0, -1], &[1, 0]]), vector(&[1, 0])).expect("invertible")
}

fn set(s: &str) -> SemilinearSet {
    s.parse().expect("well-formed example set")
}

fn shown<T: ToString, E: std::fmt::Debug>(r: Result<T, E>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {e:?}"),
    }
}

fn entries() -> Vec<SuiteEntry> {
    vec![
        SuiteEntry {
            name: "fibonacci-zeros",
            expected: "{0} [two-sided]",
            compute: || shown(solve_hyperplane(&fibonacci(), &vector(&[1, 0]), &rat(0))),
        },
        SuiteEntry {
            name: "period-six-zeros",
            expected: "∅ ∪ (0 mod 3) [two-sided]",
            compute: || {
                let sys = LinearSystem::from_recurrence(&vector(&[1, -1]), &vector(&[0, 1])).expect("recurrence");
                shown(solve_hyperplane(&sys, &vector(&[1, 0]), &rat(0)))
            },
        },
        SuiteEntry {
            name: "rotation-hyperplane",
            expected: "∅ ∪ (1 mod 2) [two-sided]",
            compute: || shown(solve_hyperplane(&rotation_system(), &vector(&[1, 0]), &rat(0))),
        },
        SuiteEntry {
            name: "rotation-point",
            expected: "∅ ∪ (1 mod 4) [two-sided]",
            compute: || shown(solve_point(&rotation_system(), &vector(&[0, 1]))),
        },
        SuiteEntry {
            name: "rotation-axis",
            expected: "∅ ∪ (0 mod 2) [two-sided]",
            compute: || shown(solve_subspace(&rotation_system(), &matrix(&[&[1], &[0]]))),
        },
        SuiteEntry {
            name: "fibonacci-point",
            expected: "{1} [two-sided]",
            compute: || shown(solve_point(&fibonacci(), &vector(&[1, 1]))),
        },
        SuiteEntry {
            name: "good-primes",
            expected: "3 3 3",
            compute: || {
                let third = QMatrix::from_rows(vec![
                    vec![crate::scalar::rat_frac(1, 5), rat(0)],
                    vec![rat(0), rat(1)],
                ]);
                let fifth = LinearSystem::new(third, vector(&[1, 1])).expect("invertible");
                format!("{} {} {}", good_prime(&fibonacci()), good_prime(&rotation_system()), good_prime(&fifth))
            },
        },
        SuiteEntry {
            name: "reduction-orders",
            expected: "4 1 8",
            compute: || {
                let o = |m: QMatrix| shown(reduction_order(&m, 3));
                format!(
                    "{} {} {}",
                    o(matrix(&[&[0, -1], &[1, 0]])),
                    o(QMatrix::identity(2)),
                    o(matrix(&[&[0, 1], &[1, 1]]))
                )
            },
        },
        SuiteEntry {
            name: "uniform-period",
            expected: "2 24",
            compute: || format!("{} {}", uniform_period_bound(1), uniform_period_bound(2)),
        },
        SuiteEntry {
            name: "stepsize-chain",
            expected: "(9, 1) clearing 9",
            compute: || {
                let chain = [set("Z"), set("(0 mod 3) ∪ (1 mod 3)"), set("{0, 3, 6, 7}")];
                match stepsize(&chain) {
                    Ok((n, k)) => format!("({n}, {k}) clearing {}", clearing_modulus(&chain)),
                    Err(e) => format!("error: {e:?}"),
                }
            },
        },
        SuiteEntry {
            name: "rotation-tangency-chain",
            expected: "Z [two-sided] | ∅ ∪ (0 mod 2) [two-sided] | ∅ [two-sided]",
            compute: || {
                (0..=2)
                    .map(|k| shown(tangency_set(&rotation(), &parabola(), &line_y(), k)))
                    .collect::<Vec<_>>()
                    .join(" | ")
            },
        },
        SuiteEntry {
            name: "rotation-min-order",
            expected: "2",
            compute: || shown(min_finite_order(&rotation(), &parabola(), &line_y(), DEFAULT_ORDER_CAP)),
        },
        SuiteEntry {
            name: "diagonal-min-order",
            expected: "2",
            compute: || shown(min_finite_order(&diag12(), &parabola(), &line_y(), DEFAULT_ORDER_CAP)),
        },
        SuiteEntry {
            name: "stabilized-diagonal",
            expected: "(1, 1)",
            compute: || match stabilized_germ(&diag12(), &parabola(), DEFAULT_ORDER_CAP, -10..=10) {
                Ok(s) => format!("({}, {})", s.step, s.order),
                Err(e) => format!("error: {e:?}"),
            },
        },
        SuiteEntry {
            name: "stabilized-rotation",
            expected: "(2, 1)",
            compute: || match stabilized_germ(&rotation(), &parabola(), DEFAULT_ORDER_CAP, -10..=10) {
                Ok(s) => format!("({}, {})", s.step, s.order),
                Err(e) => format!("error: {e:?}"),
            },
        },
        SuiteEntry {
            name: "colength-parabolas",
            expected: "2",
            compute: || shown(colength(&parabola(), &poly(&[("y", "1"), ("x^2", "1")]))),
        },
        SuiteEntry {
            name: "arnold-rotation",
            expected: "degenerate ∅ [two-sided], max 2, within bound",
            compute: || match arnold_scan(&rotation(), &parabola(), &line_y(), 50, DEFAULT_ORDER_CAP) {
                Ok(r) => format!(
                    "degenerate {}, max {}, {}",
                    r.degenerate_set,
                    r.max_mult,
                    if r.max_mult <= r.bound { "within bound" } else { "over bound" }
                ),
                Err(e) => format!("error: {e:?}"),
            },
        },
    ]
}

/// Names accepted by `examples`, in run order.
pub fn suite_names() -> Vec<&'static str> {
    entries().iter().map(|e| e.name).collect()
}

/// Runs the named examples (all of them when `names` is empty) and returns
/// `(name, passed, actual)` rows, or the first unknown name.
pub fn run_suite(names: &[String]) -> Result<Vec<(&'static str, bool, String, &'static str)>, String> {
    let all = entries();
    if let Some(bad) = names.iter().find(|n| !all.iter().any(|e| e.name == n.as_str())) {
        return Err(bad.clone());
    }
    Ok(all
        .into_iter()
        .filter(|e| names.is_empty() || names.iter().any(|n| n == e.name))
        .map(|e| {
            let actual = (e.compute)();
            (e.name, actual == e.expected, actual, e.expected)
        })
        .collect())
}

pub(super) fn run_examples(names: &[String], format: Format) -> Output {
    let rows = match run_suite(names) {
        Ok(r) => r,
        Err(bad) => {
            return Output {
                stdout: String::new(),
                stderr: format!("error: UnknownExample: {bad}\nknown: {}\n", suite_names().join(", ")),
                code: EXIT_PARSE,
            }
        }
    };
    let failed = rows.iter().filter(|r| !r.1).count();
    let code = if failed == 0 { EXIT_OK } else { EXIT_MISMATCH };
    let stdout = match format {
        Format::Text => {
            let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
            let mut out = String::new();
            for (name, ok, actual, expected) in &rows {
                if *ok {
                    out.push_str(&format!("{name:width$}  PASS  {actual}\n"));
                } else {
                    out.push_str(&format!("{name:width$}  FAIL  got {actual}, expected {expected}\n"));
                }
            }
            out.push_str(&format!("{} passed, {failed} failed\n", rows.len() - failed));
            out
        }
        Format::Json => {
            let doc: Vec<_> = rows
                .iter()
                .map(|(n, ok, a, e)| json!({"name": n, "pass": ok, "actual": a, "expected": e}))
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&json!({"examples": doc, "failed": failed})).unwrap())
        }
    };
    Output { stdout, stderr: String::new(), code }
}
