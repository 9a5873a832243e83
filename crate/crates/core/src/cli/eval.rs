//! Evaluation of parsed expressions into domain values at a fixed shape (n, K).

use crate::coeff::CycRational;
use crate::diffeo::JetDiffeo;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::render::var_name;
use crate::series::TruncSeries;
use crate::vfield::JetVectorField;

use super::parse::{BinOp, Expr, ExprKind, Pos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Scalar(CycRational),
    Series(TruncSeries),
    Tuple(Vec<TruncSeries>),
    /// Components of `sum f_j d/dx_j`; vanishing at 0 is checked on conversion.
    Field(Vec<TruncSeries>),
    Matrix(Matrix),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Series(_) => "series",
            Value::Tuple(_) => "tuple",
            Value::Field(_) => "vector field",
            Value::Matrix(_) => "matrix",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub n: usize,
    pub order: u32,
}

fn at(pos: Pos, message: impl Into<String>) -> Error {
    Error::Parse {
        line: pos.line,
        col: pos.col,
        message: message.into(),
    }
}

fn type_error(op: &str, a: &Value, b: &Value) -> Error {
    Error::InvalidInput(format!("cannot {op} a {} and a {}", a.kind(), b.kind()))
}

impl Shape {
    /// Index of a variable name: `x, y, z, w` for n <= 4 and `x1..xn` always.
    pub fn variable(&self, name: &str) -> Option<usize> {
        if let Some(j) = (0..self.n).find(|&j| var_name(j, self.n) == name) {
            return Some(j);
        }
        let j: usize = name.strip_prefix('x')?.parse().ok()?;
        (1..=self.n).contains(&j).then(|| j - 1)
    }

    fn constant(&self, c: CycRational) -> TruncSeries {
        TruncSeries::constant(c, self.n, self.order)
    }

    fn series(&self, v: Value) -> Option<TruncSeries> {
        match v {
            Value::Scalar(c) => Some(self.constant(c)),
            Value::Series(s) => Some(s),
            _ => None,
        }
    }

    pub fn eval(&self, e: &Expr) -> Result<Value> {
        match &e.kind {
            ExprKind::Int(k) => Ok(Value::Scalar(CycRational::from_bigint(k.clone()))),
            ExprKind::Ident(name) => match name.as_str() {
                "i" => Ok(Value::Scalar(CycRational::i())),
                "sqrt2" => Ok(Value::Scalar(CycRational::sqrt2())),
                "z8" => Ok(Value::Scalar(CycRational::zeta8())),
                _ => match self.variable(name) {
                    Some(j) => Ok(Value::Series(TruncSeries::var(j, self.n, self.order))),
                    None => Err(at(
                        e.pos,
                        format!("unknown identifier '{name}' for {} variables", self.n),
                    )),
                },
            },
            ExprKind::Deriv(name) => {
                let j = self.variable(name).ok_or_else(|| {
                    at(e.pos, format!("unknown variable '{name}' in derivation"))
                })?;
                let mut comps = vec![TruncSeries::zero(self.n, self.order); self.n];
                comps[j] = TruncSeries::one(self.n, self.order);
                Ok(Value::Field(comps))
            }
            ExprKind::Neg(inner) => {
                let minus = CycRational::from_int(-1);
                self.scale(self.eval(inner)?, &minus)
            }
            ExprKind::Binary(op, a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                match op {
                    BinOp::Add => self.add(a, b, false),
                    BinOp::Sub => self.add(a, b, true),
                    BinOp::Mul => self.mul(a, b),
                    BinOp::Div => self.div(a, b),
                }
            }
            ExprKind::Pow(base, k) => self.pow(self.eval(base)?, *k),
            ExprKind::Tuple(items) => {
                if items.len() == 1 {
                    return self.eval(&items[0]);
                }
                let mut comps = Vec::new();
                for item in items {
                    let v = self.eval(item)?;
                    let kind = v.kind();
                    comps.push(self.series(v).ok_or_else(|| {
                        at(item.pos, format!("tuple entries must be series, found a {kind}"))
                    })?);
                }
                Ok(Value::Tuple(comps))
            }
            ExprKind::Matrix(rows) => {
                let width = rows[0].len();
                let mut out = Vec::new();
                for row in rows {
                    if row.len() != width {
                        return Err(at(row[0].pos, "matrix rows differ in length"));
                    }
                    let mut entries = Vec::new();
                    for item in row {
                        match self.eval(item)? {
                            Value::Scalar(c) => entries.push(c),
                            other => {
                                return Err(at(
                                    item.pos,
                                    format!("matrix entries must be scalars, found a {}", other.kind()),
                                ))
                            }
                        }
                    }
                    out.push(entries);
                }
                Ok(Value::Matrix(Matrix::from_rows(out)?))
            }
        }
    }

    fn scale(&self, v: Value, c: &CycRational) -> Result<Value> {
        Ok(match v {
            Value::Scalar(a) => Value::Scalar(&a * c),
            Value::Series(s) => Value::Series(s.scale(c)),
            Value::Tuple(t) => Value::Tuple(t.iter().map(|s| s.scale(c)).collect()),
            Value::Field(f) => Value::Field(f.iter().map(|s| s.scale(c)).collect()),
            Value::Matrix(m) => Value::Matrix(m.scale(c)),
        })
    }

    fn add(&self, a: Value, b: Value, negate: bool) -> Result<Value> {
        let b = if negate {
            self.scale(b, &CycRational::from_int(-1))?
        } else {
            b
        };
        match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(&x + &y)),
            (Value::Field(x), Value::Field(y)) if x.len() == y.len() => Ok(Value::Field(
                x.iter().zip(&y).map(|(p, q)| p.checked_add(q)).collect::<Result<_>>()?,
            )),
            (Value::Field(x), Value::Scalar(c)) | (Value::Scalar(c), Value::Field(x)) if c.is_zero() => {
                Ok(Value::Field(x))
            }
            (Value::Matrix(x), Value::Matrix(y)) => Ok(Value::Matrix(x.checked_add(&y)?)),
            (Value::Tuple(x), Value::Tuple(y)) if x.len() == y.len() => Ok(Value::Tuple(
                x.iter().zip(&y).map(|(p, q)| p.checked_add(q)).collect::<Result<_>>()?,
            )),
            (a, b) => {
                let what = if negate { "subtract" } else { "add" };
                let err = type_error(what, &a, &b);
                match (self.series(a), self.series(b)) {
                    (Some(x), Some(y)) => Ok(Value::Series(x.checked_add(&y)?)),
                    _ => Err(err),
                }
            }
        }
    }

    fn mul(&self, a: Value, b: Value) -> Result<Value> {
        match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(&x * &y)),
            (Value::Scalar(c), v) | (v, Value::Scalar(c)) => self.scale(v, &c),
            (Value::Series(f), Value::Series(g)) => Ok(Value::Series(f.checked_mul(&g)?)),
            (Value::Series(f), Value::Field(x)) | (Value::Field(x), Value::Series(f)) => {
                let comps = x
                    .iter()
                    .map(|c| c.checked_mul(&f))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Value::Field(comps))
            }
            (Value::Matrix(x), Value::Matrix(y)) => Ok(Value::Matrix(x.checked_mul(&y)?)),
            (a, b) => Err(type_error("multiply", &a, &b)),
        }
    }

    fn div(&self, a: Value, b: Value) -> Result<Value> {
        match b {
            Value::Scalar(c) => {
                let inv = c.inv()?;
                self.scale(a, &inv)
            }
            Value::Series(g) => {
                let inv = g.invert()?;
                self.mul(a, Value::Series(inv))
            }
            b => Err(type_error("divide", &a, &b)),
        }
    }

    fn pow(&self, v: Value, k: i64) -> Result<Value> {
        match v {
            Value::Matrix(m) if k < 0 => Ok(Value::Matrix(m.inverse()?)),
            Value::Matrix(m) => Ok(Value::Matrix(m.pow(k as u32))),
            _ if k < 0 => Err(Error::InvalidInput("^-1 applies to matrices only".into())),
            Value::Scalar(c) => Ok(Value::Scalar(c.pow(k)?)),
            Value::Series(s) => Ok(Value::Series(s.pow(k as u32))),
            other => Err(Error::InvalidInput(format!("cannot raise a {} to a power", other.kind()))),
        }
    }

    /// A single series (plain series or a scalar constant).
    pub fn to_series(&self, v: Value) -> Result<TruncSeries> {
        let kind = v.kind();
        self.series(v)
            .ok_or_else(|| Error::InvalidInput(format!("expected a series, found a {kind}")))
    }

    /// A diffeomorphism jet; a lone series is accepted when n = 1.
    pub fn to_diffeo(&self, v: Value) -> Result<JetDiffeo> {
        match v {
            Value::Tuple(comps) => {
                if comps.len() != self.n {
                    return Err(Error::InvalidInput(format!(
                        "a jet in {} variables needs {} components, found {}",
                        self.n,
                        self.n,
                        comps.len()
                    )));
                }
                JetDiffeo::new(comps)
            }
            Value::Series(s) if self.n == 1 => JetDiffeo::new(vec![s]),
            other => Err(Error::InvalidInput(format!(
                "expected a jet ( , ... ), found a {}",
                other.kind()
            ))),
        }
    }

    /// A vector field; the literal 0 is the zero field.
    pub fn to_field(&self, v: Value) -> Result<JetVectorField> {
        match v {
            Value::Field(comps) => {
                if comps.iter().any(|c| !c.constant_term().is_zero()) {
                    return Err(Error::InvalidInput(
                        "vector field coefficients must vanish at the origin".into(),
                    ));
                }
                JetVectorField::new(comps)
            }
            Value::Scalar(c) if c.is_zero() => Ok(JetVectorField::zero(self.n, self.order)),
            Value::Series(s) if s.is_zero() => Ok(JetVectorField::zero(self.n, self.order)),
            other => Err(Error::InvalidInput(format!(
                "expected a vector field (f)*d/dx + ..., found a {}",
                other.kind()
            ))),
        }
    }

    pub fn to_matrix(&self, v: Value) -> Result<Matrix> {
        match v {
            Value::Matrix(m) => Ok(m),
            other => Err(Error::InvalidInput(format!(
                "expected a matrix [[..], ..], found a {}",
                other.kind()
            ))),
        }
    }

    pub fn to_scalar(&self, v: Value) -> Result<CycRational> {
        match v {
            Value::Scalar(c) => Ok(c),
            other => Err(Error::InvalidInput(format!(
                "expected a scalar, found a {}",
                other.kind()
            ))),
        }
    }
}

/// Parses a scalar expression such as `1/2` or `1 + i` (no variables).
pub fn parse_scalar(src: &str) -> Result<CycRational> {
    let shape = Shape { n: 1, order: 1 };
    let e = super::parse::parse(src)?;
    shape.to_scalar(shape.eval(&e)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse::parse;

    fn ev(src: &str, n: usize, order: u32) -> Value {
        let shape = Shape { n, order };
        shape.eval(&parse(src).unwrap()).unwrap()
    }

    #[test]
    fn arithmetic() {
        let Value::Series(s) = ev("1/(1 - x)", 1, 3) else { panic!() };
        assert_eq!(s.to_string(), "1 + x + x^2 + x^3");
        let Value::Scalar(c) = ev("sqrt2^2 + i^2", 1, 1) else { panic!() };
        assert_eq!(c, CycRational::one());
        let Value::Scalar(c) = ev("(1+i)/sqrt2", 1, 1) else { panic!() };
        assert_eq!(c, CycRational::zeta8());
    }

    #[test]
    fn fields_tuples_matrices() {
        let shape = Shape { n: 2, order: 3 };
        let f = shape.to_field(ev("(x^2)*d/dx + y*d/dy", 2, 3)).unwrap();
        assert_eq!(f.to_string(), "(x^2)*d/dx + (y)*d/dy");
        assert!(shape.to_field(ev("d/dx", 2, 3)).is_err());
        let Value::Tuple(t) = ev("(x + y^2, y)", 2, 3) else { panic!() };
        assert_eq!(t.len(), 2);
        let Value::Matrix(m) = ev("[[1, 1], [0, 1]]^-1", 1, 1) else { panic!() };
        assert_eq!(m[(0, 1)], CycRational::from_int(-1));
        let Value::Series(s) = ev("x6 + x1", 6, 2) else { panic!() };
        assert_eq!(s.to_string(), "x1 + x6");
    }

    #[test]
    fn positioned_errors() {
        let shape = Shape { n: 1, order: 3 };
        let err = shape.eval(&parse("x + y").unwrap()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, col: 5, .. }));
        let err = shape.eval(&parse("[[1, x]]").unwrap()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, col: 6, .. }));
    }
}
