//! JSON forms of the domain values. Big integers travel as decimal strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::coeff::CycRational;
use crate::diffeo::JetDiffeo;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::series::{Monomial, TruncSeries};
use crate::vfield::JetVectorField;

fn bad(what: &str) -> Error {
    Error::InvalidInput(format!("malformed JSON {what}"))
}

/// `[[num, den], [num, den], [num, den], [num, den]]`
pub fn scalar_to_json(c: &CycRational) -> Value {
    Value::Array(
        c.coords()
            .iter()
            .map(|r| json!([r.numer().to_string(), r.denom().to_string()]))
            .collect(),
    )
}

pub fn scalar_from_json(v: &Value) -> Result<CycRational> {
    let arr = v.as_array().filter(|a| a.len() == 4).ok_or_else(|| bad("scalar"))?;
    let mut coords: Vec<BigRational> = Vec::with_capacity(4);
    for pair in arr {
        let p = pair.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("scalar"))?;
        let parse = |x: &Value| -> Result<BigInt> {
            x.as_str()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad("scalar"))
        };
        let (num, den) = (parse(&p[0])?, parse(&p[1])?);
        if den == BigInt::from(0) {
            return Err(Error::DivisionByZero);
        }
        coords.push(BigRational::new(num, den));
    }
    let coords: [BigRational; 4] = coords.try_into().map_err(|_| bad("scalar"))?;
    Ok(CycRational::from_coords(coords))
}

/// `{"n", "K", "terms": [{"exp", "coeff"}]}` in graded-lex order.
pub fn series_to_json(s: &TruncSeries) -> Value {
    let terms: Vec<Value> = s
        .terms()
        .map(|(m, c)| json!({"exp": m.exps(s.nvars()), "coeff": scalar_to_json(c)}))
        .collect();
    json!({"n": s.nvars(), "K": s.order(), "terms": terms})
}

pub fn series_from_json(v: &Value) -> Result<TruncSeries> {
    let n = v["n"].as_u64().ok_or_else(|| bad("series"))? as usize;
    let order = v["K"].as_u64().ok_or_else(|| bad("series"))? as u32;
    let terms = v["terms"].as_array().ok_or_else(|| bad("series"))?;
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let exps: Vec<u32> = t["exp"]
            .as_array()
            .ok_or_else(|| bad("series"))?
            .iter()
            .map(|e| e.as_u64().map(|e| e as u32).ok_or_else(|| bad("series")))
            .collect::<Result<_>>()?;
        if exps.len() != n || exps.iter().any(|&e| e > 255) {
            return Err(bad("series"));
        }
        out.push((Monomial::from_exps(&exps), scalar_from_json(&t["coeff"])?));
    }
    TruncSeries::from_terms(n, order, out)
}

fn tuple_header(n: usize, order: u32, comps: &[TruncSeries]) -> Value {
    json!({
        "n": n,
        "K": order,
        "components": comps.iter().map(series_to_json).collect::<Vec<_>>(),
    })
}

fn tuple_from_json(v: &Value) -> Result<Vec<TruncSeries>> {
    v["components"]
        .as_array()
        .ok_or_else(|| bad("component list"))?
        .iter()
        .map(series_from_json)
        .collect()
}

pub fn diffeo_to_json(phi: &JetDiffeo) -> Value {
    tuple_header(phi.nvars(), phi.order(), phi.components())
}

pub fn diffeo_from_json(v: &Value) -> Result<JetDiffeo> {
    JetDiffeo::new(tuple_from_json(v)?)
}

pub fn field_to_json(x: &JetVectorField) -> Value {
    tuple_header(x.nvars(), x.order(), x.components())
}

pub fn field_from_json(v: &Value) -> Result<JetVectorField> {
    JetVectorField::new(tuple_from_json(v)?)
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(scalar_to_json).collect()))
            .collect(),
    )
}

pub fn matrix_from_json(v: &Value) -> Result<Matrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| bad("matrix"))?
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| bad("matrix"))?
                .iter()
                .map(scalar_from_json)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_round_trip() {
        let c = &CycRational::from_frac(-7, 3) + &CycRational::sqrt2();
        let v = scalar_to_json(&c);
        assert_eq!(v[0], json!(["-7", "3"]));
        assert_eq!(scalar_from_json(&v).unwrap(), c);
    }

    #[test]
    fn series_round_trip() {
        let x = TruncSeries::var(0, 2, 3);
        let y = TruncSeries::var(1, 2, 3);
        let s = &(&x * &y) + &x.scale(&CycRational::i());
        let v = series_to_json(&s);
        assert_eq!(v["terms"][0]["exp"], json!([1, 0]));
        assert_eq!(series_from_json(&v).unwrap(), s);
        let phi = JetDiffeo::new(vec![&x + &s, y.clone()]).unwrap();
        assert_eq!(diffeo_from_json(&diffeo_to_json(&phi)).unwrap(), phi);
    }
}
