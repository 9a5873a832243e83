//! Lexer and recursive-descent parser for the expression language.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' ['-'] INT)?
//! atom   := INT | IDENT | 'd/d' IDENT | '(' expr (',' expr)* ')' | matrix
//! matrix := '[' row (',' row)* ']'      row := '[' expr (',' expr)* ']'
//! ```

use num_bigint::BigInt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Int(BigInt),
    Ident(String),
    /// `d/dx`: the coordinate derivation for the named variable.
    Deriv(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    /// Parenthesized list; one entry is plain grouping.
    Tuple(Vec<Expr>),
    Matrix(Vec<Vec<Expr>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Deriv(String),
    Sym(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("number {n}"),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Deriv(s) => format!("'d/d{s}'"),
            Tok::Sym(c) => format!("'{c}'"),
            Tok::End => "end of input".into(),
        }
    }
}

fn syntax(pos: Pos, message: impl Into<String>) -> Error {
    Error::Parse {
        line: pos.line,
        col: pos.col,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut k = 0;
    let advance = |k: &mut usize, line: &mut usize, col: &mut usize| {
        if chars[*k] == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
        *k += 1;
    };
    while k < chars.len() {
        let c = chars[k];
        let pos = Pos { line, col };
        if c.is_whitespace() {
            advance(&mut k, &mut line, &mut col);
        } else if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                advance(&mut k, &mut line, &mut col);
            }
            let text: String = chars[start..k].iter().collect();
            out.push((Tok::Int(text.parse().expect("digits")), pos));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                advance(&mut k, &mut line, &mut col);
            }
            let word: String = chars[start..k].iter().collect();
            // `d/dx` is lexed as one token.
            if word == "d" && k + 1 < chars.len() && chars[k] == '/' && chars[k + 1] == 'd' {
                let (save_k, save_line, save_col) = (k, line, col);
                advance(&mut k, &mut line, &mut col);
                advance(&mut k, &mut line, &mut col);
                let vstart = k;
                while k < chars.len() && chars[k].is_ascii_alphanumeric() {
                    advance(&mut k, &mut line, &mut col);
                }
                if k > vstart {
                    out.push((Tok::Deriv(chars[vstart..k].iter().collect()), pos));
                    continue;
                }
                (k, line, col) = (save_k, save_line, save_col);
            }
            out.push((Tok::Ident(word), pos));
        } else if "+-*/^(),[]".contains(c) {
            out.push((Tok::Sym(c), pos));
            advance(&mut k, &mut line, &mut col);
        } else {
            return Err(syntax(pos, format!("unexpected character '{c}'")));
        }
    }
    out.push((Tok::End, Pos { line, col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

const ATOM_START: &str = "number, identifier, 'd/d<var>', '(', '[' or '-'";

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, expected: &str) -> Error {
        syntax(
            self.pos(),
            format!("expected {expected}, found {}", self.peek().describe()),
        )
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('+') => BinOp::Add,
                Tok::Sym('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            let pos = self.bump().1;
            let rhs = self.term()?;
            lhs = Expr {
                kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)),
                pos,
            };
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('*') => BinOp::Mul,
                Tok::Sym('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            let pos = self.bump().1;
            let rhs = self.unary()?;
            lhs = Expr {
                kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)),
                pos,
            };
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Sym('-') {
            let pos = self.bump().1;
            let inner = self.unary()?;
            return Ok(Expr {
                kind: ExprKind::Neg(Box::new(inner)),
                pos,
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        let pos = self.bump().1;
        let negative = self.eat('-');
        let exp_pos = self.pos();
        let Tok::Int(e) = self.peek().clone() else {
            return Err(self.expect("an integer exponent"));
        };
        self.bump();
        let e: i64 = e
            .try_into()
            .map_err(|_| syntax(exp_pos, "exponent too large"))?;
        if negative && e != 1 {
            return Err(syntax(exp_pos, "the only negative exponent is ^-1"));
        }
        Ok(Expr {
            kind: ExprKind::Pow(Box::new(base), if negative { -1 } else { e }),
            pos,
        })
    }

    fn list(&mut self, close: char) -> Result<Vec<Expr>> {
        let mut items = vec![self.expr()?];
        while self.eat(',') {
            items.push(self.expr()?);
        }
        if !self.eat(close) {
            return Err(self.expect(&format!("',' or '{close}'")));
        }
        Ok(items)
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        let kind = match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                ExprKind::Int(n)
            }
            Tok::Ident(s) => {
                self.bump();
                ExprKind::Ident(s)
            }
            Tok::Deriv(s) => {
                self.bump();
                ExprKind::Deriv(s)
            }
            Tok::Sym('(') => {
                self.bump();
                ExprKind::Tuple(self.list(')')?)
            }
            Tok::Sym('[') => {
                self.bump();
                let mut rows = Vec::new();
                loop {
                    if !self.eat('[') {
                        return Err(self.expect("'[' starting a matrix row"));
                    }
                    rows.push(self.list(']')?);
                    if self.eat(']') {
                        break;
                    }
                    if !self.eat(',') {
                        return Err(self.expect("',' or ']'"));
                    }
                }
                ExprKind::Matrix(rows)
            }
            _ => return Err(self.expect(ATOM_START)),
        };
        Ok(Expr { kind, pos })
    }
}

/// Parses one expression; trailing input is an error.
pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(src)?,
        at: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.expect("an operator or end of input"));
    }
    Ok(e)
}
