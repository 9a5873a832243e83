//! Command line front end: `jetgroups <verb> [options] <inputs>`.
//!
//! Inputs are expressions in the small language of [`parse`], or `@path` to
//! read one from a file (JSON documents in the library's schemas are
//! accepted too). Results go to stdout, errors to stderr. Exit codes: 0 ok,
//! 1 domain error, 2 syntax error, 3 failed verification.

pub mod eval;
pub mod parse;

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value as Json};

use crate::coeff::CycRational;
use crate::diffeo::JetDiffeo;
use crate::error::{Error, Result};
use crate::examples::{self, delta_power, delta_power_expand, Report};
use crate::jetrep::JetOperator;
use crate::json;
use crate::linalg::Matrix;
use crate::matgroup::{kolchin_flag, MatGroupDesc};
use crate::series::TruncSeries;
use crate::vfield::JetVectorField;

pub use eval::{parse_scalar, Shape, Value};
pub use parse::parse;

#[derive(Parser, Debug)]
#[command(name = "jetgroups", version, about = "Exact jets of formal diffeomorphisms and vector fields")]
pub struct Cli {
    /// Emit one JSON object instead of text.
    #[arg(long, global = true, conflicts_with = "text")]
    pub json: bool,
    /// Emit text (the default).
    #[arg(long, global = true)]
    pub text: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct ShapeArgs {
    /// Number of variables.
    #[arg(long = "n", default_value_t = 2)]
    pub n: usize,
    /// Truncation order.
    #[arg(long = "K", default_value_t = 4)]
    pub order: u32,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// exp(t X) of a nilpotent field, or phi^t of a unipotent jet.
    Exp {
        #[command(flatten)]
        shape: ShapeArgs,
        /// Time parameter (scalar expression).
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        t: String,
        input: String,
    },
    /// Logarithm of a unipotent jet.
    Log {
        #[command(flatten)]
        shape: ShapeArgs,
        input: String,
    },
    /// Composition phi1 ∘ phi2 ∘ ...
    Compose {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(required = true, num_args = 2..)]
        inputs: Vec<String>,
    },
    /// Inverse of a jet or of a matrix.
    Invert {
        #[command(flatten)]
        shape: ShapeArgs,
        input: String,
    },
    /// Lie bracket of two fields, or group commutator of two jets.
    Bracket {
        #[command(flatten)]
        shape: ShapeArgs,
        a: String,
        b: String,
    },
    /// Z with exp(Z) = exp(X) ∘ exp(Y).
    Bch {
        #[command(flatten)]
        shape: ShapeArgs,
        x: String,
        y: String,
    },
    /// Pullback of a field (or a function) along a jet.
    Pullback {
        #[command(flatten)]
        shape: ShapeArgs,
        phi: String,
        target: String,
    },
    /// Matrix of a jet or a field acting on m/m^(K+1).
    Represent {
        #[command(flatten)]
        shape: ShapeArgs,
        input: String,
    },
    /// Derived series of a finite matrix group (`L` names the built-in 2x2 group).
    DerivedFinite {
        #[arg(required = true)]
        generators: Vec<String>,
    },
    /// Basis change triangularizing a set of unipotent matrices.
    Kolchin {
        #[arg(required = true)]
        matrices: Vec<String>,
    },
    /// Derived length of G^2.
    VerifyG2 {
        #[arg(long = "K", default_value_t = 4)]
        order: u32,
    },
    /// Derived length of the tower group G^n.
    VerifyGn {
        #[arg(long = "n")]
        n: usize,
        /// Starting order; raised automatically while witnesses vanish.
        #[arg(long = "K")]
        order: Option<u32>,
    },
    /// Delta^k f = (f ∘ phi0 - f) iterated, or the Leibniz table of Delta^k.
    Delta {
        #[command(flatten)]
        shape: ShapeArgs,
        /// Power k.
        #[arg(long = "power", default_value_t = 1)]
        power: u32,
        /// Function and jet; without them the coefficient table is printed.
        #[arg(num_args = 0..=2)]
        inputs: Vec<String>,
    },
}

impl Command {
    pub fn verb(&self) -> &'static str {
        match self {
            Command::Exp { .. } => "exp",
            Command::Log { .. } => "log",
            Command::Compose { .. } => "compose",
            Command::Invert { .. } => "invert",
            Command::Bracket { .. } => "bracket",
            Command::Bch { .. } => "bch",
            Command::Pullback { .. } => "pullback",
            Command::Represent { .. } => "represent",
            Command::DerivedFinite { .. } => "derived-finite",
            Command::Kolchin { .. } => "kolchin",
            Command::VerifyG2 { .. } => "verify-g2",
            Command::VerifyGn { .. } => "verify-gn",
            Command::Delta { .. } => "delta",
        }
    }
}

/// Every verb, in help order.
pub const VERBS: [&str; 13] = [
    "exp",
    "log",
    "compose",
    "invert",
    "bracket",
    "bch",
    "pullback",
    "represent",
    "derived-finite",
    "kolchin",
    "verify-g2",
    "verify-gn",
    "delta",
];

/// Command output in both renderings.
pub struct Output {
    pub text: String,
    pub json: Json,
}

impl Output {
    fn new(text: impl Into<String>, json: Json) -> Self {
        Output {
            text: text.into(),
            json,
        }
    }
}

fn read_source(arg: &str) -> Result<String> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

/// Reads an input as a value; `@file` contents may be JSON in the library's schemas.
fn input(shape: &Shape, arg: &str) -> Result<Value> {
    let src = read_source(arg)?;
    if arg.starts_with('@') {
        if let Ok(doc) = serde_json::from_str::<Json>(&src) {
            if let Some(v) = from_json_doc(&doc) {
                return Ok(v);
            }
        }
    }
    shape.eval(&parse(&src)?)
}

fn from_json_doc(doc: &Json) -> Option<Value> {
    if doc.get("components").is_some() {
        let kind = doc.get("kind").and_then(Json::as_str).unwrap_or("jet");
        return if kind == "field" {
            json::field_from_json(doc)
                .ok()
                .map(|x| Value::Field(x.components().to_vec()))
        } else {
            json::diffeo_from_json(doc)
                .ok()
                .map(|d| Value::Tuple(d.into_components()))
        };
    }
    if doc.get("terms").is_some() {
        return json::series_from_json(doc).ok().map(Value::Series);
    }
    if doc.is_array() {
        return json::matrix_from_json(doc).ok().map(Value::Matrix);
    }
    None
}

fn shape_of(s: &ShapeArgs) -> Shape {
    Shape {
        n: s.n,
        order: s.order,
    }
}

fn jet_out(phi: &JetDiffeo) -> Output {
    let mut j = json::diffeo_to_json(phi);
    j["kind"] = json!("jet");
    Output::new(phi.to_string(), j)
}

fn field_out(x: &JetVectorField) -> Output {
    let mut j = json::field_to_json(x);
    j["kind"] = json!("field");
    Output::new(x.to_string(), j)
}

fn matrix_arg(arg: &str) -> Result<Vec<Matrix>> {
    if arg == "L" {
        return Ok(examples::l_generators());
    }
    let shape = Shape { n: 1, order: 1 };
    Ok(vec![shape.to_matrix(input(&shape, arg)?)?])
}

fn report_out(r: Report) -> Output {
    Output::new(r.to_text().trim_end(), r.to_json())
}

/// Runs a parsed command, returning its output or the first error.
pub fn execute(cmd: &Command) -> Result<Output> {
    match cmd {
        Command::Exp { shape, t, input: arg } => {
            let sh = shape_of(shape);
            let t = parse_scalar(t)?;
            match input(&sh, arg)? {
                v @ Value::Field(_) => Ok(jet_out(&sh.to_field(v)?.exp_nilpotent(&t)?)),
                v => {
                    let phi = sh.to_diffeo(v)?;
                    Ok(jet_out(&JetVectorField::one_parameter(&phi, &t)?))
                }
            }
        }
        Command::Log { shape, input: arg } => {
            let sh = shape_of(shape);
            let phi = sh.to_diffeo(input(&sh, arg)?)?;
            Ok(field_out(&JetVectorField::log_unipotent(&phi)?))
        }
        Command::Compose { shape, inputs } => {
            let sh = shape_of(shape);
            let mut acc: Option<JetDiffeo> = None;
            for arg in inputs {
                let phi = sh.to_diffeo(input(&sh, arg)?)?;
                acc = Some(match acc {
                    None => phi,
                    Some(a) => a.compose(&phi)?,
                });
            }
            Ok(jet_out(&acc.expect("at least two inputs")))
        }
        Command::Invert { shape, input: arg } => {
            let sh = shape_of(shape);
            match input(&sh, arg)? {
                Value::Matrix(m) => {
                    let inv = m.inverse()?;
                    Ok(Output::new(inv.to_string(), json::matrix_to_json(&inv)))
                }
                v => Ok(jet_out(&sh.to_diffeo(v)?.invert()?)),
            }
        }
        Command::Bracket { shape, a, b } => {
            let sh = shape_of(shape);
            match (input(&sh, a)?, input(&sh, b)?) {
                (x @ Value::Field(_), y) | (x, y @ Value::Field(_)) => {
                    Ok(field_out(&sh.to_field(x)?.lie_bracket(&sh.to_field(y)?)?))
                }
                (x, y) => {
                    let (p, q) = (sh.to_diffeo(x)?, sh.to_diffeo(y)?);
                    Ok(jet_out(&p.group_commutator(&q)?))
                }
            }
        }
        Command::Bch { shape, x, y } => {
            let sh = shape_of(shape);
            let x = sh.to_field(input(&sh, x)?)?;
            let y = sh.to_field(input(&sh, y)?)?;
            Ok(field_out(&x.bch_dynkin(&y)?))
        }
        Command::Pullback { shape, phi, target } => {
            let sh = shape_of(shape);
            let phi = sh.to_diffeo(input(&sh, phi)?)?;
            match input(&sh, target)? {
                v @ Value::Field(_) => {
                    Ok(field_out(&JetVectorField::pullback_field(&phi, &sh.to_field(v)?)?))
                }
                v => {
                    let f = phi.pullback_function(&sh.to_series(v)?)?;
                    Ok(Output::new(f.to_string(), json::series_to_json(&f)))
                }
            }
        }
        Command::Represent { shape, input: arg } => {
            let sh = shape_of(shape);
            let op = match input(&sh, arg)? {
                v @ Value::Field(_) => JetOperator::represent_field(&sh.to_field(v)?),
                v => JetOperator::represent_diffeo(&sh.to_diffeo(v)?),
            };
            Ok(represent_out(&op))
        }
        Command::DerivedFinite { generators } => {
            let mut gens = Vec::new();
            for g in generators {
                gens.extend(matrix_arg(g)?);
            }
            let m = gens[0].rows();
            let series = MatGroupDesc::new(m, gens)?.derived_series_finite()?;
            let orders: Vec<usize> = series.iter().map(|g| g.order()).collect::<Result<_>>()?;
            let length = series.len() - 1;
            let mut text = String::new();
            for (j, o) in orders.iter().enumerate() {
                text.push_str(&format!("G^({j}): {o} elements\n"));
            }
            text.push_str(&format!("derived length: {length}"));
            let last_nontrivial: Vec<String> = if length > 0 {
                series[length - 1]
                    .enumerate_closure()?
                    .iter()
                    .map(ToString::to_string)
                    .collect()
            } else {
                Vec::new()
            };
            Ok(Output::new(
                text,
                json!({"orders": orders, "length": length, "last_nontrivial": last_nontrivial}),
            ))
        }
        Command::Kolchin { matrices } => {
            let mut mats = Vec::new();
            for g in matrices {
                mats.extend(matrix_arg(g)?);
            }
            let p = kolchin_flag(&mats)?;
            let pinv = p.inverse()?;
            let conj: Vec<Matrix> = mats
                .iter()
                .map(|u| pinv.checked_mul(u)?.checked_mul(&p))
                .collect::<Result<_>>()?;
            let mut text = format!("P = {p}");
            for c in &conj {
                text.push_str(&format!("\nP^-1 U P = {c}"));
            }
            Ok(Output::new(
                text,
                json!({
                    "P": json::matrix_to_json(&p),
                    "conjugates": conj.iter().map(json::matrix_to_json).collect::<Vec<_>>(),
                }),
            ))
        }
        Command::VerifyG2 { order } => Ok(report_out(examples::verify_g2(*order)?)),
        Command::VerifyGn { n, order } => {
            let k = order.unwrap_or_else(|| examples::verify::default_order(*n));
            Ok(report_out(examples::verify_gn_adaptive(*n, k)?))
        }
        Command::Delta { shape, power, inputs } => {
            if inputs.is_empty() {
                let table = delta_power_expand(*power)?;
                let mut lines = Vec::new();
                let mut entries = Vec::new();
                for ((m, l), c) in table.entries() {
                    lines.push(format!("c({power},{m},{l}) = {c}"));
                    entries.push(json!({"m": m, "l": l, "c": c.to_string()}));
                }
                return Ok(Output::new(lines.join("\n"), json!({"k": power, "table": entries})));
            }
            if inputs.len() != 2 {
                return Err(Error::InvalidInput("delta needs a function and a jet".into()));
            }
            let sh = shape_of(shape);
            let f = sh.to_series(input(&sh, &inputs[0])?)?;
            let phi = sh.to_diffeo(input(&sh, &inputs[1])?)?;
            let d = delta_power(&f, &phi, *power)?;
            Ok(Output::new(d.to_string(), json::series_to_json(&d)))
        }
    }
}

fn represent_out(op: &JetOperator) -> Output {
    let n = op.nvars();
    let basis: Vec<String> = op
        .basis()
        .monomials()
        .iter()
        .map(|m| TruncSeries::monomial(*m, CycRational::one(), n, op.order()).to_string())
        .collect();
    let member = op.check_dk_membership();
    let unipotent = op.is_unipotent();
    let mut text = format!("basis: {}\n", basis.join(", "));
    for i in 0..op.dim() {
        let row: Vec<String> = op.matrix().row(i).iter().map(ToString::to_string).collect();
        text.push_str(&format!("[{}]\n", row.join(", ")));
    }
    text.push_str(&format!("multiplicative: {member}\nunipotent: {unipotent}"));
    let mut j = op.to_json();
    j["multiplicative"] = json!(member);
    j["unipotent"] = json!(unipotent);
    Output::new(text, j)
}

/// Parses `args`, runs the command and writes to the given streams. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    let verb = cli.command.verb();
    match execute(&cli.command) {
        Ok(o) => {
            if cli.json {
                let doc = json!({"verb": verb, "ok": true, "result": o.json});
                let _ = writeln!(out, "{doc}");
            } else {
                let _ = writeln!(out, "{}", o.text);
            }
            0
        }
        Err(e) => {
            let code = e.exit_code();
            if cli.json {
                let doc = json!({
                    "verb": verb,
                    "ok": false,
                    "error": {"message": e.to_string(), "exit_code": code},
                });
                let _ = writeln!(out, "{doc}");
            }
            let _ = writeln!(err, "error: {e}");
            code
        }
    }
}
