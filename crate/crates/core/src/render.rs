//! Canonical text forms. Everything rendered here parses back to the same value.

use num_traits::{One, Signed};

use crate::coeff::{fmt_rational, CycRational};
use crate::linalg::Matrix;
use crate::series::{Monomial, TruncSeries};

const ALIASES: [&str; 4] = ["x", "y", "z", "w"];

pub fn var_name(j: usize, n: usize) -> String {
    if n <= ALIASES.len() {
        ALIASES[j].to_string()
    } else {
        format!("x{}", j + 1)
    }
}

fn monomial_to_string(m: &Monomial, n: usize) -> String {
    (0..n)
        .filter(|&j| m.exp(j) > 0)
        .map(|j| match m.exp(j) {
            1 => var_name(j, n),
            e => format!("{}^{e}", var_name(j, n)),
        })
        .collect::<Vec<_>>()
        .join("*")
}

pub fn series_to_string(s: &TruncSeries) -> String {
    let n = s.nvars();
    let mut out = String::new();
    for (m, c) in s.terms() {
        let first = out.is_empty();
        if m.degree() == 0 {
            out.push_str(&c.to_string());
            continue;
        }
        let mono = monomial_to_string(m, n);
        match c.as_rational() {
            Some(r) => {
                let neg = r.is_negative();
                let abs = r.abs();
                match (first, neg) {
                    (true, true) => out.push('-'),
                    (true, false) => {}
                    (false, true) => out.push_str(" - "),
                    (false, false) => out.push_str(" + "),
                }
                if abs.is_one() {
                    out.push_str(&mono);
                } else {
                    out.push_str(&format!("{}*{mono}", fmt_rational(&abs)));
                }
            }
            None => {
                if !first {
                    out.push_str(" + ");
                }
                out.push_str(&format!("({c})*{mono}"));
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn tuple_to_string(components: &[TruncSeries]) -> String {
    let parts: Vec<String> = components.iter().map(series_to_string).collect();
    format!("({})", parts.join(", "))
}

pub fn field_to_string(components: &[TruncSeries]) -> String {
    let n = components.len();
    let parts: Vec<String> = components
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| format!("({})*d/d{}", series_to_string(c), var_name(j, n)))
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

pub fn scalar_to_string(c: &CycRational) -> String {
    c.to_string()
}

pub fn matrix_to_string(m: &Matrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let entries: Vec<String> = (0..m.cols()).map(|j| m[(i, j)].to_string()).collect();
            format!("[{}]", entries.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}
