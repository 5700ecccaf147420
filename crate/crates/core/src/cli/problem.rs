//! JSON problem files.
//!
//! Every file is an object with a `kind` discriminator. Rationals are strings
//! such as `"-3/4"` (plain JSON integers are accepted too); polynomials are
//! objects mapping monomials like `"x^2*y"` to rationals. See the README for
//! the full schema.

use serde_json::{Map, Value};

use crate::jets::{GermAutomorphism, Poly};
use crate::linalg::Matrix;
use crate::recurrence::LinearSystem;
use crate::scalar::parse_rational;
use crate::semilinear::SemilinearSet;
use crate::{QGerm, QMatrix, QPoly, Rational};

/// Parse failure with a 1-based position in the source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FileOptions {
    pub prime: Option<u64>,
    pub precision: Option<u32>,
    pub window: Option<i64>,
    pub order_cap: Option<usize>,
    /// Set the solver output is expected to equal.
    pub expect: Option<SemilinearSet>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TangencyMode {
    /// `A_k` for one order.
    Order(usize),
    /// `A_0, A_1, ...` up to the first finite set.
    Chain,
    /// Stepsize of the self-tangency chain of the divisor, checked for `0 < |m| <= sample`.
    Stabilize { sample: i64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum SetOp {
    Normalize,
    Union,
    Intersect,
    IntersectFamily(i64),
    ScaleSection(i64),
    ClearingModulus,
    Stepsize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Problem {
    Hyperplane { system: LinearSystem, functional: Vec<Rational>, constant: Rational },
    Point { system: LinearSystem, target: Vec<Rational> },
    Subspace { system: LinearSystem, basis: QMatrix },
    Tangency { germ: QGerm, divisor: QPoly, curve: QPoly, mode: TangencyMode },
    Arnold { germ: QGerm, curve_y: QPoly, curve_z: QPoly },
    SetOperation { op: SetOp, sets: Vec<SemilinearSet> },
}

impl Problem {
    pub fn kind(&self) -> &'static str {
        match self {
            Problem::Hyperplane { .. } => "recurrence",
            Problem::Point { .. } => "point-return",
            Problem::Subspace { .. } => "subspace-return",
            Problem::Tangency { .. } => "tangency",
            Problem::Arnold { .. } => "arnold",
            Problem::SetOperation { .. } => "semilinear-op",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemFile {
    pub problem: Problem,
    pub options: FileOptions,
}

/// 1-based line and column of byte offset `pos`.
fn line_col(raw: &str, pos: usize) -> (usize, usize) {
    let before = &raw[..pos.min(raw.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

struct Ctx<'a> {
    raw: &'a str,
}

impl Ctx<'_> {
    /// Error positioned at the first occurrence of `"key"`.
    fn err(&self, key: &str, message: impl Into<String>) -> ParseError {
        let needle = format!("\"{key}\"");
        let pos = self.raw.find(&needle).unwrap_or(0);
        let (line, column) = line_col(self.raw, pos);
        ParseError { line, column, message: message.into() }
    }

    fn field<'v>(&self, obj: &'v Map<String, Value>, key: &str) -> Result<&'v Value, ParseError> {
        obj.get(key).ok_or_else(|| self.err("kind", format!("missing field `{key}`")))
    }

    fn rational(&self, v: &Value, key: &str) -> Result<Rational, ParseError> {
        let parsed = match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) if n.is_i64() => Some(Rational::from_integer(n.as_i64().unwrap().into())),
            _ => None,
        };
        parsed.ok_or_else(|| self.err(key, format!("`{key}`: expected a rational such as \"3/4\", got {v}")))
    }

    fn vector(&self, v: &Value, key: &str) -> Result<Vec<Rational>, ParseError> {
        let arr = v.as_array().ok_or_else(|| self.err(key, format!("`{key}`: expected an array of rationals")))?;
        arr.iter().map(|x| self.rational(x, key)).collect()
    }

    fn matrix(&self, v: &Value, key: &str) -> Result<QMatrix, ParseError> {
        let rows = v.as_array().ok_or_else(|| self.err(key, format!("`{key}`: expected an array of rows")))?;
        let rows: Vec<Vec<Rational>> = rows.iter().map(|r| self.vector(r, key)).collect::<Result<_, _>>()?;
        if rows.is_empty() {
            return Err(self.err(key, format!("`{key}`: matrix is empty")));
        }
        let width = rows[0].len();
        if rows.iter().any(|r| r.len() != width) {
            return Err(self.err(key, format!("`{key}`: rows have different lengths")));
        }
        Ok(Matrix::from_rows(rows))
    }

    fn square_invertible(&self, v: &Value, key: &str) -> Result<QMatrix, ParseError> {
        let m = self.matrix(v, key)?;
        if !m.is_square() {
            return Err(self.err(key, format!("`{key}`: matrix is {}x{}, not square", m.rows(), m.cols())));
        }
        if m.determinant() == Rational::from_integer(0.into()) {
            return Err(self.err(key, format!("`{key}`: matrix has zero determinant")));
        }
        Ok(m)
    }

    fn usize_field(&self, v: &Value, key: &str) -> Result<usize, ParseError> {
        v.as_u64().map(|x| x as usize).ok_or_else(|| self.err(key, format!("`{key}`: expected a nonnegative integer")))
    }

    fn i64_field(&self, v: &Value, key: &str) -> Result<i64, ParseError> {
        v.as_i64().ok_or_else(|| self.err(key, format!("`{key}`: expected an integer")))
    }

    fn poly(&self, v: &Value, key: &str, nvars: usize) -> Result<QPoly, ParseError> {
        let obj = v.as_object().ok_or_else(|| self.err(key, format!("`{key}`: expected a monomial -> coefficient map")))?;
        let mut terms = Vec::new();
        for (mono, coef) in obj {
            let c = self.rational(coef, key)?;
            terms.push((mono.clone(), crate::scalar::format_rational(&c)));
        }
        Poly::parse_terms(nvars, terms.iter().map(|(m, c)| (m.as_str(), c.as_str())))
            .map_err(|e| self.err(key, format!("`{key}`: {e}")))
    }

    fn set(&self, v: &Value, key: &str) -> Result<SemilinearSet, ParseError> {
        let s = v.as_str().ok_or_else(|| self.err(key, format!("`{key}`: expected a set in text form")))?;
        s.parse().map_err(|e| self.err(key, format!("`{key}`: {e}")))
    }

    fn system(&self, obj: &Map<String, Value>) -> Result<LinearSystem, ParseError> {
        let m = self.square_invertible(self.field(obj, "matrix")?, "matrix")?;
        let start = self.vector(self.field(obj, "start")?, "start")?;
        let translation = obj.get("translation").map(|v| self.vector(v, "translation")).transpose()?;
        LinearSystem::affine(m, translation, start).map_err(|e| self.err("start", e.to_string()))
    }

    fn germ_and_curves(&self, obj: &Map<String, Value>, curves: &[&str]) -> Result<(QGerm, Vec<QPoly>), ParseError> {
        let comps = self.field(obj, "map")?.as_array().ok_or_else(|| self.err("map", "`map`: expected an array of polynomials"))?;
        let d = comps.len();
        let mut components: Vec<QPoly> = comps.iter().map(|c| self.poly(c, "map", d)).collect::<Result<_, _>>()?;
        let mut polys: Vec<QPoly> = curves.iter().map(|k| self.poly(self.field(obj, k)?, k, d)).collect::<Result<_, _>>()?;
        if let Some(fp) = obj.get("fixed_point") {
            let a = self.vector(fp, "fixed_point")?;
            if a.len() != d {
                return Err(self.err("fixed_point", "`fixed_point`: wrong number of coordinates"));
            }
            if components.iter().zip(&a).any(|(c, ai)| &c.eval(&a) != ai) {
                return Err(self.err("fixed_point", "`fixed_point`: the map does not fix this point"));
            }
            // conjugate by the translation v ↦ v + a
            let shifted: Vec<QPoly> =
                (0..d).map(|i| Poly::var(d, i).add(&Poly::constant(d, a[i].clone()))).collect();
            components = components
                .iter()
                .zip(&a)
                .map(|(c, ai)| c.compose(&shifted).sub(&Poly::constant(d, ai.clone())))
                .collect();
            polys = polys.iter().map(|p| p.compose(&shifted)).collect();
        }
        let germ = GermAutomorphism::new(components).map_err(|e| self.err("map", format!("`map`: {e}")))?;
        Ok((germ, polys))
    }

    fn options(&self, obj: &Map<String, Value>) -> Result<FileOptions, ParseError> {
        let mut out = FileOptions::default();
        let Some(v) = obj.get("options") else {
            return Ok(out);
        };
        let o = v.as_object().ok_or_else(|| self.err("options", "`options`: expected an object"))?;
        for (k, v) in o {
            match k.as_str() {
                "prime" => out.prime = Some(self.usize_field(v, "prime")? as u64),
                "precision" => out.precision = Some(self.usize_field(v, "precision")? as u32),
                "window" => out.window = Some(self.i64_field(v, "window")?),
                "order_cap" => out.order_cap = Some(self.usize_field(v, "order_cap")?),
                "expect" => out.expect = Some(self.set(v, "expect")?),
                other => return Err(self.err(other, format!("unknown option `{other}`"))),
            }
        }
        Ok(out)
    }
}

pub fn parse_problem(raw: &str) -> Result<ProblemFile, ParseError> {
    let value: Value = serde_json::from_str(raw).map_err(|e| ParseError {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let cx = Ctx { raw };
    let obj = value.as_object().ok_or_else(|| ParseError { line: 1, column: 1, message: "expected a JSON object".into() })?;
    let kind = cx.field(obj, "kind")?.as_str().ok_or_else(|| cx.err("kind", "`kind` must be a string"))?;
    let problem = match kind {
        "recurrence" => {
            if let Some(coeffs) = obj.get("coefficients") {
                let a = cx.vector(coeffs, "coefficients")?;
                let init = cx.vector(cx.field(obj, "initial")?, "initial")?;
                if a.last().is_none_or(|c| *c == Rational::from_integer(0.into())) {
                    return Err(cx.err("coefficients", "`coefficients`: the last coefficient must be nonzero"));
                }
                if a.len() != init.len() {
                    return Err(cx.err("initial", "`initial`: needs one value per coefficient"));
                }
                let system = LinearSystem::from_recurrence(&a, &init).map_err(|e| cx.err("coefficients", e.to_string()))?;
                let mut functional = vec![Rational::from_integer(0.into()); a.len()];
                functional[0] = Rational::from_integer(1.into());
                let constant = obj.get("value").map(|v| cx.rational(v, "value")).transpose()?.unwrap_or_default();
                Problem::Hyperplane { system, functional, constant }
            } else {
                let system = cx.system(obj)?;
                let functional = cx.vector(cx.field(obj, "functional")?, "functional")?;
                if functional.len() != system.dimension() {
                    return Err(cx.err("functional", "`functional`: length differs from the matrix size"));
                }
                let constant = obj.get("constant").map(|v| cx.rational(v, "constant")).transpose()?.unwrap_or_default();
                Problem::Hyperplane { system, functional, constant }
            }
        }
        "point-return" => {
            let system = cx.system(obj)?;
            let target = cx.vector(cx.field(obj, "target")?, "target")?;
            if target.len() != system.dimension() {
                return Err(cx.err("target", "`target`: length differs from the matrix size"));
            }
            Problem::Point { system, target }
        }
        "subspace-return" => {
            let system = cx.system(obj)?;
            let cols = cx.field(obj, "basis")?.as_array().ok_or_else(|| cx.err("basis", "`basis`: expected an array of vectors"))?;
            let cols: Vec<Vec<Rational>> = cols.iter().map(|c| cx.vector(c, "basis")).collect::<Result<_, _>>()?;
            if cols.iter().any(|c| c.len() != system.dimension()) {
                return Err(cx.err("basis", "`basis`: vector length differs from the matrix size"));
            }
            Problem::Subspace { system: system.clone(), basis: Matrix::from_columns(system.dimension(), &cols) }
        }
        "tangency" => {
            let (germ, mut polys) = cx.germ_and_curves(obj, &["divisor", "curve"])?;
            let mode = if obj.get("stabilize").and_then(Value::as_bool) == Some(true) {
                let sample = obj.get("sample").map(|v| cx.i64_field(v, "sample")).transpose()?.unwrap_or(10);
                TangencyMode::Stabilize { sample }
            } else {
                match obj.get("order") {
                    Some(v) => TangencyMode::Order(cx.usize_field(v, "order")?),
                    None => TangencyMode::Chain,
                }
            };
            let curve = polys.pop().unwrap();
            let divisor = polys.pop().unwrap();
            Problem::Tangency { germ, divisor, curve, mode }
        }
        "arnold" => {
            let (germ, mut polys) = cx.germ_and_curves(obj, &["curve_y", "curve_z"])?;
            let curve_z = polys.pop().unwrap();
            let curve_y = polys.pop().unwrap();
            Problem::Arnold { germ, curve_y, curve_z }
        }
        "semilinear-op" => {
            let op_name = cx.field(obj, "op")?.as_str().ok_or_else(|| cx.err("op", "`op` must be a string"))?;
            let n = || cx.i64_field(cx.field(obj, "n")?, "n");
            let op = match op_name {
                "normalize" => SetOp::Normalize,
                "union" => SetOp::Union,
                "intersect" => SetOp::Intersect,
                "intersect-family" => SetOp::IntersectFamily(n()?),
                "scale-section" => SetOp::ScaleSection(n()?),
                "clearing-modulus" => SetOp::ClearingModulus,
                "stepsize" => SetOp::Stepsize,
                other => return Err(cx.err("op", format!("unknown operation `{other}`"))),
            };
            let sets = cx.field(obj, "sets")?.as_array().ok_or_else(|| cx.err("sets", "`sets`: expected an array"))?;
            let sets: Vec<SemilinearSet> = sets.iter().map(|s| cx.set(s, "sets")).collect::<Result<_, _>>()?;
            if sets.is_empty() {
                return Err(cx.err("sets", "`sets`: at least one set is required"));
            }
            Problem::SetOperation { op, sets }
        }
        other => return Err(cx.err("kind", format!("unknown kind `{other}`"))),
    };
    Ok(ProblemFile { problem, options: cx.options(obj)? })
}
