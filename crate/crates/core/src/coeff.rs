//! Exact arithmetic in the cyclotomic field Q(z8) = Q[t]/(t^4 + 1).
//!
//! Elements are stored as four integer numerators over one positive common
//! denominator, always reduced so that the five integers are coprime. The
//! coordinates in the basis (1, z8, z8^2, z8^3) are then exactly the reduced
//! rationals `num[k] / den`, and structural equality is field equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycRational {
    num: [BigInt; 4],
    den: BigInt,
}

/// Named constants that can be embedded into the field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Embed {
    Rational(BigRational),
    I,
    Sqrt2,
    Zeta8,
}

fn zero4() -> [BigInt; 4] {
    [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()]
}

impl CycRational {
    fn from_parts(mut num: [BigInt; 4], mut den: BigInt) -> Self {
        debug_assert!(!den.is_zero());
        if num.iter().all(Zero::is_zero) {
            return Self::zero();
        }
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        if !den.is_one() {
            let mut g = den.clone();
            for c in num.iter() {
                if g.is_one() {
                    break;
                }
                g = g.gcd(c);
            }
            if !g.is_one() {
                for c in num.iter_mut() {
                    *c = &*c / &g;
                }
                den = den / g;
            }
        }
        CycRational { num, den }
    }

    pub fn zero() -> Self {
        CycRational {
            num: zero4(),
            den: BigInt::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        let mut num = zero4();
        num[0] = BigInt::from(v);
        CycRational {
            num,
            den: BigInt::one(),
        }
    }

    pub fn from_bigint(v: BigInt) -> Self {
        let mut num = zero4();
        num[0] = v;
        CycRational {
            num,
            den: BigInt::one(),
        }
    }

    /// `p / q` as a rational element. Panics if `q == 0`.
    pub fn from_frac(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Self::from_rational(BigRational::new(p.into(), q.into()))
    }

    pub fn from_rational(r: BigRational) -> Self {
        let (n, d) = r.into_raw();
        let mut num = zero4();
        num[0] = n;
        Self::from_parts(num, d)
    }

    /// Builds an element from its four coordinates in the basis (1, z8, z8^2, z8^3).
    pub fn from_coords(coords: [BigRational; 4]) -> Self {
        let den = coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coords.map(|c| c.numer() * (&den / c.denom()));
        Self::from_parts(num, den)
    }

    pub fn coords(&self) -> [BigRational; 4] {
        let c = |k: usize| BigRational::new(self.num[k].clone(), self.den.clone());
        [c(0), c(1), c(2), c(3)]
    }

    pub fn coord(&self, k: usize) -> BigRational {
        BigRational::new(self.num[k].clone(), self.den.clone())
    }

    pub fn embed(x: Embed) -> Self {
        match x {
            Embed::Rational(r) => Self::from_rational(r),
            Embed::I => Self::basis(2),
            Embed::Zeta8 => Self::basis(1),
            Embed::Sqrt2 => {
                // z8 + z8^7 = z8 - z8^3
                let mut num = zero4();
                num[1] = BigInt::one();
                num[3] = -BigInt::one();
                CycRational {
                    num,
                    den: BigInt::one(),
                }
            }
        }
    }

    pub fn i() -> Self {
        Self::embed(Embed::I)
    }

    pub fn sqrt2() -> Self {
        Self::embed(Embed::Sqrt2)
    }

    pub fn zeta8() -> Self {
        Self::embed(Embed::Zeta8)
    }

    fn basis(k: usize) -> Self {
        let mut num = zero4();
        num[k] = BigInt::one();
        CycRational {
            num,
            den: BigInt::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one()
            && self.num[0].is_one()
            && self.num[1..].iter().all(Zero::is_zero)
    }

    /// True when the element lies in Q.
    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(Zero::is_zero)
    }

    /// True when the element lies in the subfield Q(i) = Q(z8^2).
    pub fn is_gaussian(&self) -> bool {
        self.num[1].is_zero() && self.num[3].is_zero()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coord(0))
    }

    /// Value as a plain integer, when it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        (self.is_rational() && self.den.is_one()).then(|| self.num[0].clone())
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self::from_parts(self.num.clone().map(|c| c * k), self.den.clone())
    }

    pub fn div_int(&self, k: &BigInt) -> Result<Self> {
        if k.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_parts(self.num.clone(), &self.den * k))
    }

    /// Multiplicative inverse, by the extended Euclidean algorithm in Q[t]
    /// against the irreducible modulus t^4 + 1.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            return Ok(Self::from_parts(
                [self.den.clone(), BigInt::zero(), BigInt::zero(), BigInt::zero()],
                self.num[0].clone(),
            ));
        }
        let modulus: Poly = vec![
            BigRational::one(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::one(),
        ];
        let mut a: Poly = self.coords().to_vec();
        trim(&mut a);
        let (g, s) = ext_euclid(modulus, a);
        // g is a nonzero constant since t^4 + 1 is irreducible over Q.
        debug_assert_eq!(g.len(), 1);
        let g0 = g[0].clone();
        let mut coords: [BigRational; 4] = std::array::from_fn(|_| BigRational::zero());
        for (k, c) in s.into_iter().enumerate() {
            coords[k] = c / &g0;
        }
        Ok(Self::from_coords(coords))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Complex conjugation (z8 -> z8^-1 = -z8^3).
    pub fn conj(&self) -> Self {
        let [a, b, c, d] = self.num.clone();
        Self::from_parts([a, -d, -c, -b], self.den.clone())
    }
}

type Poly = Vec<BigRational>;

fn trim(p: &mut Poly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut rem = a.clone();
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    while rem.len() > db {
        let k = rem.len() - 1 - db;
        let c = rem.last().expect("nonempty") / &lead;
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] = &rem[k + j] - &c * bj;
        }
        quot[k] = c;
        rem.pop();
        trim(&mut rem);
        if rem.len() <= db {
            break;
        }
    }
    trim(&mut quot);
    (quot, rem)
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (k, x) in a.iter().enumerate() {
        out[k] = x.clone();
    }
    for (k, y) in b.iter().enumerate() {
        out[k] = &out[k] - y;
    }
    trim(&mut out);
    out
}

/// Returns (gcd, s) with s * a = gcd (mod m).
fn ext_euclid(m: Poly, a: Poly) -> (Poly, Poly) {
    let (mut r0, mut r1) = (m, a);
    let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![BigRational::one()]);
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    (r0, s0)
}

impl Default for CycRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for CycRational {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl From<BigRational> for CycRational {
    fn from(r: BigRational) -> Self {
        Self::from_rational(r)
    }
}

impl<'a> Add<&'a CycRational> for &'a CycRational {
    type Output = CycRational;
    fn add(self, rhs: &CycRational) -> CycRational {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.den == rhs.den {
            let num = std::array::from_fn(|k| &self.num[k] + &rhs.num[k]);
            CycRational::from_parts(num, self.den.clone())
        } else {
            let num = std::array::from_fn(|k| &self.num[k] * &rhs.den + &rhs.num[k] * &self.den);
            CycRational::from_parts(num, &self.den * &rhs.den)
        }
    }
}

impl<'a> Sub<&'a CycRational> for &'a CycRational {
    type Output = CycRational;
    fn sub(self, rhs: &CycRational) -> CycRational {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a CycRational> for &'a CycRational {
    type Output = CycRational;
    fn mul(self, rhs: &CycRational) -> CycRational {
        if self.is_zero() || rhs.is_zero() {
            return CycRational::zero();
        }
        let den = &self.den * &rhs.den;
        if rhs.is_rational() {
            let k = &rhs.num[0];
            return CycRational::from_parts(self.num.clone().map(|c| c * k), den);
        }
        if self.is_rational() {
            let k = &self.num[0];
            return CycRational::from_parts(rhs.num.clone().map(|c| c * k), den);
        }
        let mut conv: [BigInt; 7] = std::array::from_fn(|_| BigInt::zero());
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                if !b.is_zero() {
                    conv[i + j] += a * b;
                }
            }
        }
        let [c0, c1, c2, c3, c4, c5, c6] = conv;
        // t^4 = -1
        CycRational::from_parts([c0 - c4, c1 - c5, c2 - c6, c3], den)
    }
}

impl Neg for &CycRational {
    type Output = CycRational;
    fn neg(self) -> CycRational {
        CycRational {
            num: self.num.clone().map(|c| -c),
            den: self.den.clone(),
        }
    }
}

impl Neg for CycRational {
    type Output = CycRational;
    fn neg(self) -> CycRational {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycRational> for CycRational {
            type Output = CycRational;
            fn $m(self, rhs: CycRational) -> CycRational {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CycRational> for CycRational {
            type Output = CycRational;
            fn $m(self, rhs: &CycRational) -> CycRational {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&CycRational> for CycRational {
    fn add_assign(&mut self, rhs: &CycRational) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&CycRational> for CycRational {
    fn sub_assign(&mut self, rhs: &CycRational) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&CycRational> for CycRational {
    fn mul_assign(&mut self, rhs: &CycRational) {
        *self = &*self * rhs;
    }
}

impl Ord for CycRational {
    /// Lexicographic on the coordinate rationals (c0, c1, c2, c3).
    fn cmp(&self, other: &Self) -> Ordering {
        if self.den == other.den {
            return self.num.cmp(&other.num);
        }
        for k in 0..4 {
            let ord = (&self.num[k] * &other.den).cmp(&(&other.num[k] * &self.den));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for CycRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CycRational {
    /// Canonical form `a + b*z8 + c*z8^2 + d*z8^3`, zero coordinates omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coords().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = match k {
                0 => None,
                1 => Some("z8".to_string()),
                _ => Some(format!("z8^{k}")),
            };
            match unit {
                None => write!(f, "{}", fmt_rational(&abs))?,
                Some(u) if abs.is_one() => write!(f, "{u}")?,
                Some(u) => write!(f, "{}*{u}", fmt_rational(&abs))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
