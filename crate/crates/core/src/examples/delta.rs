//! The difference operator `Delta(f) = f ∘ phi0 - f` and its iterated Leibniz rule.
//!
//! `Delta(fg) = Delta(f) Delta(g) + Delta(f) g + f Delta(g)`, so
//! `Delta^k(fg) = sum c_(k,m,l) Delta^m(f) Delta^l(g)` over `m, l <= k <= m + l`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::coeff::CycRational;
use crate::diffeo::JetDiffeo;
use crate::error::{Error, Result};
use crate::series::TruncSeries;

pub fn delta_op(f: &TruncSeries, phi0: &JetDiffeo) -> Result<TruncSeries> {
    Ok(&phi0.pullback_function(f)? - f)
}

pub fn delta_power(f: &TruncSeries, phi0: &JetDiffeo, k: u32) -> Result<TruncSeries> {
    let mut g = f.clone();
    for _ in 0..k {
        if g.is_zero() {
            break;
        }
        g = delta_op(&g, phi0)?;
    }
    Ok(g)
}

/// The coefficients `c_(k,m,l)` for one `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaTable {
    k: u32,
    entries: BTreeMap<(u32, u32), BigUint>,
}

impl DeltaTable {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn get(&self, m: u32, l: u32) -> BigUint {
        self.entries.get(&(m, l)).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> &BTreeMap<(u32, u32), BigUint> {
        &self.entries
    }

    pub fn all_positive(&self) -> bool {
        self.entries.values().all(|c| !c.is_zero())
    }

    /// `sum c_(k,m,l) Delta^m(f) Delta^l(g)`.
    pub fn evaluate(&self, f: &TruncSeries, g: &TruncSeries, phi0: &JetDiffeo) -> Result<TruncSeries> {
        let powers = |s: &TruncSeries| -> Result<Vec<TruncSeries>> {
            let mut out = vec![s.clone()];
            for _ in 0..self.k {
                let next = delta_op(out.last().expect("nonempty"), phi0)?;
                out.push(next);
            }
            Ok(out)
        };
        let (df, dg) = (powers(f)?, powers(g)?);
        let mut acc = TruncSeries::zero(f.nvars(), f.order());
        for (&(m, l), c) in &self.entries {
            let c = CycRational::from_bigint(c.clone().into());
            acc = &acc + &(&df[m as usize] * &dg[l as usize]).scale(&c);
        }
        Ok(acc)
    }
}

/// Iterates the one-step rule on formal pairs `(m, l)` standing for
/// `Delta^m(f) Delta^l(g)`.
pub fn delta_power_expand(k: u32) -> Result<DeltaTable> {
    if k == 0 {
        return Err(Error::InvalidInput("the expansion needs k >= 1".into()));
    }
    let mut cur: BTreeMap<(u32, u32), BigUint> = BTreeMap::new();
    cur.insert((0, 0), BigUint::one());
    for _ in 0..k {
        let mut next: BTreeMap<(u32, u32), BigUint> = BTreeMap::new();
        for ((m, l), c) in cur {
            for key in [(m + 1, l + 1), (m + 1, l), (m, l + 1)] {
                *next.entry(key).or_default() += &c;
            }
        }
        cur = next;
    }
    Ok(DeltaTable { k, entries: cur })
}
