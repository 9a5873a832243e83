//! Truncated multivariate power series: the ring O_n / m^(K+1) over Q(z8).

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;

use crate::coeff::CycRational;
use crate::error::{Error, Result};

pub const MAX_VARS: usize = 8;
/// Largest supported truncation order. Witness computations for the tower
/// groups need orders well past the everyday range, so this is generous.
pub const MAX_ORDER: u32 = 32;

/// Exponent vector of a monomial in up to [`MAX_VARS`] variables.
///
/// Ordered graded-lexicographically: lower total degree first, then within a
/// degree by decreasing exponent of `x1`, then of `x2`, and so on
/// (`x, y, x^2, x*y, y^2, ...`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    deg: u8,
    exps: [u8; MAX_VARS],
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(j: usize) -> Self {
        let mut exps = [0; MAX_VARS];
        exps[j] = 1;
        Monomial { deg: 1, exps }
    }

    pub fn from_exps(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut out = [0u8; MAX_VARS];
        for (k, &e) in exps.iter().enumerate() {
            out[k] = u8::try_from(e).expect("exponent too large");
        }
        let deg = exps.iter().sum::<u32>();
        Monomial {
            deg: u8::try_from(deg).expect("degree too large"),
            exps: out,
        }
    }

    pub fn degree(&self) -> u32 {
        u32::from(self.deg)
    }

    pub fn exp(&self, j: usize) -> u32 {
        u32::from(self.exps[j])
    }

    pub fn exps(&self, n: usize) -> Vec<u32> {
        self.exps[..n].iter().map(|&e| u32::from(e)).collect()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps;
        for (a, b) in exps.iter_mut().zip(other.exps.iter()) {
            *a += b;
        }
        Monomial {
            deg: self.deg + other.deg,
            exps,
        }
    }

    /// The monomial divided by `x_j`, if divisible.
    pub fn lower(&self, j: usize) -> Option<Monomial> {
        if self.exps[j] == 0 {
            return None;
        }
        let mut m = *self;
        m.exps[j] -= 1;
        m.deg -= 1;
        Some(m)
    }

    pub fn raise(&self, j: usize) -> Monomial {
        let mut m = *self;
        m.exps[j] += 1;
        m.deg += 1;
        m
    }

    /// Highest variable index with a nonzero exponent, plus one.
    pub fn support_len(&self) -> usize {
        self.exps
            .iter()
            .rposition(|&e| e != 0)
            .map_or(0, |p| p + 1)
    }

    /// All monomials in `n` variables of total degree `lo..=hi`, in graded-lex order.
    pub fn all(n: usize, lo: u32, hi: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for d in lo..=hi {
            let mut cur = vec![0u32; n];
            fill(&mut out, &mut cur, 0, d);
        }
        out
    }
}

fn fill(out: &mut Vec<Monomial>, cur: &mut Vec<u32>, j: usize, rest: u32) {
    let n = cur.len();
    if n == 0 {
        if rest == 0 {
            out.push(Monomial::one());
        }
        return;
    }
    if j == n - 1 {
        cur[j] = rest;
        out.push(Monomial::from_exps(cur));
        return;
    }
    for e in (0..=rest).rev() {
        cur[j] = e;
        fill(out, cur, j + 1, rest - e);
    }
    cur[j] = 0;
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg
            .cmp(&other.deg)
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps(self.support_len()))
    }
}

/// Element of O_n / m^(K+1).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    n: usize,
    order: u32,
    terms: BTreeMap<Monomial, CycRational>,
}

pub(crate) fn check_shape(n: usize, order: u32) -> Result<()> {
    if n == 0 || n > MAX_VARS {
        return Err(Error::InvalidInput(format!(
            "variable count {n} outside 1..={MAX_VARS}"
        )));
    }
    if order == 0 || order > MAX_ORDER {
        return Err(Error::InvalidInput(format!(
            "truncation order {order} outside 1..={MAX_ORDER}"
        )));
    }
    Ok(())
}

impl TruncSeries {
    pub fn zero(n: usize, order: u32) -> Self {
        check_shape(n, order).expect("invalid series shape");
        TruncSeries {
            n,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: CycRational, n: usize, order: u32) -> Self {
        Self::monomial(Monomial::one(), c, n, order)
    }

    pub fn one(n: usize, order: u32) -> Self {
        Self::constant(CycRational::one(), n, order)
    }

    /// The coordinate function `x_j` (zero-based index).
    pub fn var(j: usize, n: usize, order: u32) -> Self {
        assert!(j < n, "variable index out of range");
        Self::monomial(Monomial::var(j), CycRational::one(), n, order)
    }

    pub fn monomial(m: Monomial, c: CycRational, n: usize, order: u32) -> Self {
        let mut s = Self::zero(n, order);
        assert!(m.support_len() <= n, "monomial uses too many variables");
        if m.degree() <= order && !c.is_zero() {
            s.terms.insert(m, c);
        }
        s
    }

    /// Builds a series from terms, merging duplicates and dropping zeros and
    /// terms of degree above `order`.
    pub fn from_terms(
        n: usize,
        order: u32,
        terms: impl IntoIterator<Item = (Monomial, CycRational)>,
    ) -> Result<Self> {
        check_shape(n, order)?;
        let mut acc: BTreeMap<Monomial, CycRational> = BTreeMap::new();
        for (m, c) in terms {
            if m.support_len() > n {
                return Err(Error::InvalidInput(format!(
                    "monomial {m:?} uses more than {n} variables"
                )));
            }
            if m.degree() > order {
                continue;
            }
            *acc.entry(m).or_default() += &c;
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(TruncSeries {
            n,
            order,
            terms: acc,
        })
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CycRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> CycRational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> CycRational {
        self.coeff(&Monomial::one())
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.order != other.order {
            return Err(Error::mismatch(format!(
                "series shapes (n={}, K={}) and (n={}, K={})",
                self.n, self.order, other.n, other.order
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.add_unchecked(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Self, negate: bool) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let e = terms.entry(*m).or_default();
            if negate {
                *e -= c;
            } else {
                *e += c;
            }
            if e.is_zero() {
                terms.remove(m);
            }
        }
        TruncSeries {
            n: self.n,
            order: self.order,
            terms,
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let k = self.order;
        let (Some(lo_a), Some(lo_b)) = (self.vanishing_order(), other.vanishing_order()) else {
            return Self::zero(self.n, k);
        };
        if lo_a + lo_b > k {
            return Self::zero(self.n, k);
        }
        let mut acc: HashMap<Monomial, CycRational> = HashMap::new();
        for (ma, ca) in &self.terms {
            if ma.degree() + lo_b > k {
                break;
            }
            for (mb, cb) in &other.terms {
                if ma.degree() + mb.degree() > k {
                    break;
                }
                let p = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += &p,
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(p);
                    }
                }
            }
        }
        TruncSeries {
            n: self.n,
            order: k,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn scale(&self, c: &CycRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n, self.order);
        }
        TruncSeries {
            n: self.n,
            order: self.order,
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.n, self.order);
        let mut sq = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// Minimal total degree of a stored term; `None` stands for +infinity
    /// (the series vanishes modulo m^(K+1)).
    pub fn vanishing_order(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    /// Homogeneous part of degree `d`.
    pub fn homogeneous(&self, d: u32) -> Self {
        TruncSeries {
            n: self.n,
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Drops every term of degree above `k` and relabels the series as order `k`.
    pub fn truncate(&self, k: u32) -> Self {
        check_shape(self.n, k).expect("invalid order");
        TruncSeries {
            n: self.n,
            order: k,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= k)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Same terms, stored at a different order (terms above the new order are dropped).
    pub fn with_order(&self, k: u32) -> Self {
        self.truncate(k)
    }

    /// Reinterprets the series in `m >= n` variables.
    pub fn extend_vars(&self, m: usize) -> Self {
        assert!(m >= self.n, "cannot shrink the variable count");
        check_shape(m, self.order).expect("invalid variable count");
        TruncSeries {
            n: m,
            order: self.order,
            terms: self.terms.clone(),
        }
    }

    /// Reinterprets the series in fewer variables; fails if a dropped
    /// variable actually occurs.
    pub fn restrict_vars(&self, m: usize) -> Result<Self> {
        check_shape(m, self.order)?;
        if self.terms.keys().any(|mono| mono.support_len() > m) {
            return Err(Error::mismatch(format!(
                "series depends on variables beyond x{m}"
            )));
        }
        Ok(TruncSeries {
            n: m,
            order: self.order,
            terms: self.terms.clone(),
        })
    }

    /// Highest variable index (plus one) that occurs in the series.
    pub fn support_len(&self) -> usize {
        self.terms.keys().map(Monomial::support_len).max().unwrap_or(0)
    }

    /// f(args_1, ..., args_n), exact modulo m^(K+1).
    pub fn substitute(&self, args: &[TruncSeries]) -> Result<TruncSeries> {
        Substitution::new(args)?.apply(self)
    }

    /// Multiplicative inverse of a unit.
    pub fn invert(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NonUnit);
        }
        // 1/f = (1/c0) * sum_j (-u)^j with u = f/c0 - 1 in m.
        let c0_inv = c0.inv()?;
        let u = &self.scale(&c0_inv) - &Self::one(self.n, self.order);
        let mut acc = Self::one(self.n, self.order);
        let mut power = Self::one(self.n, self.order);
        let neg_u = u.scale(&CycRational::from_int(-1));
        for _ in 0..self.order {
            power = &power * &neg_u;
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
        }
        Ok(acc.scale(&c0_inv))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self * &other.invert()?)
    }

    /// Partial derivative with respect to `x_j` (zero-based). Degree-K terms
    /// of the input map to degree K-1; the degree-K part of the output is not
    /// determined by the input and is left as zero.
    pub fn partial_derivative(&self, j: usize) -> Result<Self> {
        if j >= self.n {
            return Err(Error::IndexOutOfRange {
                index: j,
                n: self.n,
            });
        }
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let e = m.exp(j);
                let lower = m.lower(j)?;
                Some((lower, c.scale_int(&BigInt::from(e))))
            })
            .collect();
        Ok(TruncSeries {
            n: self.n,
            order: self.order,
            terms,
        })
    }

    /// exp(f) for f with zero constant term (finite sum, f is nilpotent mod m^(K+1)).
    pub fn exp_series(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm { index: 0 });
        }
        let mut acc = Self::one(self.n, self.order);
        let mut term = Self::one(self.n, self.order);
        for j in 1..=self.order {
            term = (&term * self).scale(&CycRational::from_frac(1, i64::from(j)));
            if term.is_zero() {
                break;
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// ln(a) for a unit with a(0) = 1: the truncated Mercator series of a - 1.
    pub fn log_unit(&self) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(Error::InvalidInput(
                "logarithm needs constant term 1".into(),
            ));
        }
        let u = self - &Self::one(self.n, self.order);
        let mut acc = Self::zero(self.n, self.order);
        let mut power = Self::one(self.n, self.order);
        for j in 1..=self.order {
            power = &power * &u;
            if power.is_zero() {
                break;
            }
            let sign = if j % 2 == 1 { 1 } else { -1 };
            acc = &acc + &power.scale(&CycRational::from_frac(sign, i64::from(j)));
        }
        Ok(acc)
    }
}

/// Memoized evaluation of monomials at a fixed tuple of series.
///
/// `x^m` is evaluated as `x^(m - e_j) * args[j]` with `j` the first variable
/// of `m`, so each needed monomial costs one multiplication.
pub struct Substitution<'a> {
    args: &'a [TruncSeries],
    cache: HashMap<Monomial, TruncSeries>,
    n_args: usize,
    order: u32,
}

impl<'a> Substitution<'a> {
    pub fn new(args: &'a [TruncSeries]) -> Result<Self> {
        let first = args
            .first()
            .ok_or_else(|| Error::InvalidInput("empty substitution".into()))?;
        for (k, a) in args.iter().enumerate() {
            if a.n != first.n || a.order != first.order {
                return Err(Error::mismatch("substitution arguments differ in shape"));
            }
            if !a.constant_term().is_zero() {
                return Err(Error::NonzeroConstantTerm { index: k });
            }
        }
        Ok(Substitution {
            args,
            cache: HashMap::new(),
            n_args: args.len(),
            order: first.order,
        })
    }

    pub fn monomial(&mut self, m: &Monomial) -> TruncSeries {
        let target_n = self.args[0].n;
        if m.degree() == 0 {
            return TruncSeries::one(target_n, self.order);
        }
        if m.degree() > self.order {
            return TruncSeries::zero(target_n, self.order);
        }
        if let Some(s) = self.cache.get(m) {
            return s.clone();
        }
        let j = (0..self.n_args)
            .find(|&j| m.exp(j) > 0)
            .expect("monomial uses a variable");
        let lower = m.lower(j).expect("divisible");
        let prev = self.monomial(&lower);
        let value = &prev * &self.args[j];
        self.cache.insert(*m, value.clone());
        value
    }

    pub fn apply(&mut self, f: &TruncSeries) -> Result<TruncSeries> {
        if f.n != self.n_args {
            return Err(Error::mismatch(format!(
                "substituting {} series into a function of {} variables",
                self.n_args, f.n
            )));
        }
        if f.order != self.order {
            return Err(Error::mismatch(format!(
                "substituting order-{} series into an order-{} function",
                self.order, f.order
            )));
        }
        let target_n = self.args[0].n;
        let order = self.order;
        let mut acc: HashMap<Monomial, CycRational> = HashMap::new();
        for (m, c) in &f.terms {
            if m.degree() > self.order {
                break;
            }
            let v = self.monomial(m);
            for (mm, cc) in &v.terms {
                if mm.degree() > order {
                    break;
                }
                *acc.entry(*mm).or_default() += &(cc * c);
            }
        }
        TruncSeries::from_terms(target_n, self.order, acc)
    }
}

macro_rules! series_op {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> std::ops::$tr<&'a TruncSeries> for &'a TruncSeries {
            type Output = TruncSeries;
            /// Panics on shape mismatch; use the `checked_*` methods for fallible arithmetic.
            fn $m(self, rhs: &TruncSeries) -> TruncSeries {
                self.same_shape(rhs).expect("series shape mismatch");
                $body(self, rhs)
            }
        }
        impl std::ops::$tr<TruncSeries> for TruncSeries {
            type Output = TruncSeries;
            fn $m(self, rhs: TruncSeries) -> TruncSeries {
                std::ops::$tr::$m(&self, &rhs)
            }
        }
    };
}
series_op!(Add, add, |a: &TruncSeries, b: &TruncSeries| a.add_unchecked(b, false));
series_op!(Sub, sub, |a: &TruncSeries, b: &TruncSeries| a.add_unchecked(b, true));
series_op!(Mul, mul, |a: &TruncSeries, b: &TruncSeries| a.mul_unchecked(b));

impl std::ops::Neg for &TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        TruncSeries {
            n: self.n,
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TruncSeries(n={}, K={}, {})",
            self.n,
            self.order,
            crate::render::series_to_string(self)
        )
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::render::series_to_string(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, k: u32) -> TruncSeries {
        TruncSeries::var(0, n, k)
    }

    fn y(n: usize, k: u32) -> TruncSeries {
        TruncSeries::var(1, n, k)
    }

    fn int(v: i64, n: usize, k: u32) -> TruncSeries {
        TruncSeries::constant(CycRational::from_int(v), n, k)
    }

    /// Dense brute-force convolution over all exponent pairs, without any
    /// of the ordering shortcuts used by the implementation.
    fn convolution_oracle(a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
        let mut terms = Vec::new();
        for ma in Monomial::all(a.n, 0, a.order) {
            for mb in Monomial::all(a.n, 0, a.order) {
                let p = &a.coeff(&ma) * &b.coeff(&mb);
                terms.push((ma.mul(&mb), p));
            }
        }
        TruncSeries::from_terms(a.n, a.order, terms).unwrap()
    }

    #[test]
    fn graded_lex_order() {
        let ms = Monomial::all(2, 1, 2);
        let exps: Vec<_> = ms.iter().map(|m| m.exps(2)).collect();
        assert_eq!(exps, vec![vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
        let mut sorted = ms.clone();
        sorted.sort();
        assert_eq!(sorted, ms);
    }

    #[test]
    fn square_of_sum() {
        let s = &x(2, 2) + &y(2, 2);
        let sq = &s * &s;
        let expected = &(&(&x(2, 2) * &x(2, 2)) + &(&x(2, 2) * &y(2, 2)).scale(&2.into()))
            + &(&y(2, 2) * &y(2, 2));
        assert_eq!(sq, expected);
        assert_eq!(sq, convolution_oracle(&s, &s));
    }

    #[test]
    fn truncation_kills_high_powers() {
        for k in 1..6 {
            let xk = x(1, k).pow(k);
            assert!(!xk.is_zero());
            assert!((&xk * &x(1, k)).is_zero());
        }
    }

    #[test]
    fn geometric_identity() {
        let k = 3;
        let a = &int(1, 1, k) + &x(1, k);
        let b = &(&(&int(1, 1, k) - &x(1, k)) + &x(1, k).pow(2)) - &x(1, k).pow(3);
        assert_eq!(convolution_oracle(&a, &b), int(1, 1, k));
        assert_eq!(&a * &b, int(1, 1, k));
    }

    #[test]
    fn mismatch_is_an_error() {
        assert!(matches!(
            x(1, 3).checked_add(&x(2, 3)),
            Err(Error::Mismatch(_))
        ));
        assert!(matches!(
            x(1, 3).checked_mul(&x(1, 4)),
            Err(Error::Mismatch(_))
        ));
    }

    #[test]
    fn substitute_geometric_into_square() {
        let k = 4;
        let geo = x(1, k).checked_div(&(&int(1, 1, k) - &x(1, k))).unwrap();
        let f = x(1, k).pow(2);
        let got = f.substitute(&[geo.clone()]).unwrap();
        assert_eq!(got, convolution_oracle(&geo, &geo));
        let expected = &(&x(1, k).pow(2) + &x(1, k).pow(3).scale(&2.into()))
            + &x(1, k).pow(4).scale(&3.into());
        assert_eq!(got, expected);
    }

    #[test]
    fn substitute_identity_and_swap() {
        let k = 4;
        let f = &(&x(2, k).pow(3) + &(&x(2, k) * &y(2, k)).scale(&CycRational::i()))
            - &y(2, k);
        assert_eq!(f.substitute(&[x(2, k), y(2, k)]).unwrap(), f);
        let s = &x(2, k) + &y(2, k);
        assert_eq!(s.substitute(&[y(2, k), x(2, k)]).unwrap(), s);
    }

    #[test]
    fn substitute_rejects_constant_terms() {
        let k = 3;
        let arg = &x(1, k) + &int(1, 1, k);
        assert_eq!(
            x(1, k).substitute(&[arg]),
            Err(Error::NonzeroConstantTerm { index: 0 })
        );
    }

    #[test]
    fn vanishing_orders() {
        let k = 5;
        assert_eq!((&x(2, k).pow(2) * &y(2, k)).vanishing_order(), Some(3));
        assert_eq!(TruncSeries::zero(2, k).vanishing_order(), None);
        assert_eq!((&x(2, k) + &x(2, k).pow(2)).vanishing_order(), Some(1));
    }

    #[test]
    fn unit_inverses() {
        let k = 3;
        let inv = (&int(1, 1, k) - &x(1, k)).invert().unwrap();
        let expected = &(&(&int(1, 1, k) + &x(1, k)) + &x(1, k).pow(2)) + &x(1, k).pow(3);
        assert_eq!(inv, expected);
        assert_eq!(int(1, 1, k).invert().unwrap(), int(1, 1, k));
        assert_eq!(
            int(2, 1, k).invert().unwrap(),
            TruncSeries::constant(CycRational::from_frac(1, 2), 1, k)
        );
        assert_eq!(x(1, k).invert(), Err(Error::NonUnit));
    }

    #[test]
    fn derivatives() {
        let k = 4;
        let f = &x(2, k).pow(2) * &y(2, k);
        assert_eq!(
            f.partial_derivative(0).unwrap(),
            (&x(2, k) * &y(2, k)).scale(&2.into())
        );
        assert!(int(5, 2, k).partial_derivative(0).unwrap().is_zero());
        assert!(x(2, k).pow(3).partial_derivative(1).unwrap().is_zero());
        assert_eq!(
            f.partial_derivative(2),
            Err(Error::IndexOutOfRange { index: 2, n: 2 })
        );
    }

    #[test]
    fn exp_and_log_of_series_are_inverse() {
        let k = 6;
        let f = &x(2, k) + &(&x(2, k) * &y(2, k)).scale(&CycRational::from_frac(-3, 2));
        let e = f.exp_series().unwrap();
        assert_eq!(e.log_unit().unwrap(), f);
    }
}
