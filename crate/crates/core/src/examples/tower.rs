//! Elements `(phi(x_1..x_n0), a_j x_j + b_j, ...)` of the tower groups, where each
//! layer `j > n0` has `a_j, b_j` depending only on `x_1..x_(j-1)`, `a_j(0) != 0`
//! and `b_j(0) = 0`.

use crate::diffeo::JetDiffeo;
use crate::error::{Error, Result};
use crate::series::{Substitution, TruncSeries};

/// Layer series are stored in all `n` variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TowerElement {
    base: JetDiffeo,
    layers: Vec<(TruncSeries, TruncSeries)>,
}

impl TowerElement {
    pub fn new(base: JetDiffeo, layers: Vec<(TruncSeries, TruncSeries)>) -> Result<Self> {
        let n0 = base.nvars();
        let n = n0 + layers.len();
        let order = base.order();
        for (k, (a, b)) in layers.iter().enumerate() {
            let j = n0 + k;
            for s in [a, b] {
                if s.nvars() != n || s.order() != order {
                    return Err(Error::mismatch(format!(
                        "layer {} series must have shape (n={n}, K={order})",
                        j + 1
                    )));
                }
                if s.support_len() > j {
                    return Err(Error::InvalidInput(format!(
                        "layer {} may only depend on the first {j} variables",
                        j + 1
                    )));
                }
            }
            if a.constant_term().is_zero() {
                return Err(Error::NonUnit);
            }
            if !b.constant_term().is_zero() {
                return Err(Error::NonzeroConstantTerm { index: j });
            }
        }
        Ok(TowerElement { base, layers })
    }

    pub fn identity(n0: usize, n: usize, order: u32) -> Self {
        let layers = (n0..n)
            .map(|_| (TruncSeries::one(n, order), TruncSeries::zero(n, order)))
            .collect();
        TowerElement {
            base: JetDiffeo::identity(n0, order),
            layers,
        }
    }

    /// `(base, x_(n0+1), ..., x_n)`.
    pub fn from_base(base: JetDiffeo, n: usize) -> Self {
        let mut t = Self::identity(base.nvars(), n, base.order());
        t.base = base;
        t
    }

    /// `chi_(a,b) = (x_1, ..., x_(n-1), a x_n + b)`; `a`, `b` are given in `n - 1` variables.
    pub fn chi(n0: usize, a: &TruncSeries, b: &TruncSeries) -> Result<Self> {
        let n = a.nvars() + 1;
        if n <= n0 {
            return Err(Error::InvalidInput("chi needs at least one layer".into()));
        }
        let mut t = Self::identity(n0, n, a.order());
        let last = t.layers.len() - 1;
        t.layers[last] = (a.extend_vars(n), b.extend_vars(n));
        Self::new(t.base, t.layers)
    }

    pub fn base_vars(&self) -> usize {
        self.base.nvars()
    }

    pub fn nvars(&self) -> usize {
        self.base.nvars() + self.layers.len()
    }

    pub fn order(&self) -> u32 {
        self.base.order()
    }

    pub fn base(&self) -> &JetDiffeo {
        &self.base
    }

    pub fn layers(&self) -> &[(TruncSeries, TruncSeries)] {
        &self.layers
    }

    /// `(a, b)` of the top layer, restricted to the variables it may use.
    pub fn top_layer(&self) -> Option<(TruncSeries, TruncSeries)> {
        let (a, b) = self.layers.last()?;
        let m = self.nvars() - 1;
        Some((
            a.restrict_vars(m).expect("layer support"),
            b.restrict_vars(m).expect("layer support"),
        ))
    }

    pub fn is_identity(&self) -> bool {
        self.base.is_identity() && self.layers.iter().all(|(a, b)| a.is_one() && b.is_zero())
    }

    /// True when everything below the top layer is the identity.
    pub fn is_chi(&self) -> bool {
        let k = self.layers.len();
        k > 0
            && self.base.is_identity()
            && self.layers[..k - 1].iter().all(|(a, b)| a.is_one() && b.is_zero())
    }

    /// Adds identity layers up to `n` variables.
    pub fn lift(&self, n: usize) -> Self {
        assert!(n >= self.nvars());
        let order = self.order();
        let mut layers: Vec<(TruncSeries, TruncSeries)> = self
            .layers
            .iter()
            .map(|(a, b)| (a.extend_vars(n), b.extend_vars(n)))
            .collect();
        for _ in self.nvars()..n {
            layers.push((TruncSeries::one(n, order), TruncSeries::zero(n, order)));
        }
        TowerElement {
            base: self.base.clone(),
            layers,
        }
    }

    /// The same map as a jet in `n` variables.
    pub fn flatten(&self) -> JetDiffeo {
        let n = self.nvars();
        let n0 = self.base.nvars();
        let mut comps: Vec<TruncSeries> = self
            .base
            .components()
            .iter()
            .map(|c| c.extend_vars(n))
            .collect();
        for (k, (a, b)) in self.layers.iter().enumerate() {
            comps.push(&(a * &TruncSeries::var(n0 + k, n, self.order())) + b);
        }
        JetDiffeo::new(comps).expect("tower elements are invertible")
    }

    /// Splits a jet in `n` variables back into tower form.
    pub fn from_flat(phi: &JetDiffeo, n0: usize) -> Result<Self> {
        let n = phi.nvars();
        if n0 == 0 || n0 > n {
            return Err(Error::InvalidInput("base dimension out of range".into()));
        }
        let base = JetDiffeo::new(
            phi.components()[..n0]
                .iter()
                .map(|c| c.restrict_vars(n0))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .map(|c| c.with_order(phi.order()))
                .collect(),
        )?;
        let mut layers = Vec::new();
        for j in n0..n {
            let mut a = Vec::new();
            let mut b = Vec::new();
            for (m, c) in phi.component(j).terms() {
                match m.exp(j) {
                    0 => b.push((*m, c.clone())),
                    1 => a.push((m.lower(j).expect("exponent 1"), c.clone())),
                    _ => return Err(Error::InvalidInput("component is not affine in its own variable".into())),
                }
            }
            let a = TruncSeries::from_terms(n, phi.order(), a)?;
            let b = TruncSeries::from_terms(n, phi.order(), b)?;
            layers.push((a, b));
        }
        Self::new(base, layers)
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.base.nvars() != other.base.nvars()
            || self.nvars() != other.nvars()
            || self.order() != other.order()
        {
            return Err(Error::mismatch("tower elements of different shapes"));
        }
        Ok(())
    }

    /// `self ∘ other`: layer by layer
    /// `(a, b) ∘ (a', b') = ((a ∘ Phi') a', (a ∘ Phi') b' + b ∘ Phi')`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let base = self.base.compose(&other.base)?;
        let flat = other.flatten();
        let mut sub = Substitution::new(flat.components())?;
        let mut layers = Vec::with_capacity(self.layers.len());
        for ((a, b), (a2, b2)) in self.layers.iter().zip(&other.layers) {
            let a_phi = sub.apply(a)?;
            let b_phi = sub.apply(b)?;
            layers.push((&a_phi * a2, &(&a_phi * b2) + &b_phi));
        }
        Ok(TowerElement { base, layers })
    }

    /// Inverse, solving `y_j = a_j x_j + b_j` for `x_j` one layer at a time.
    pub fn invert(&self) -> Result<Self> {
        let n = self.nvars();
        let n0 = self.base.nvars();
        let order = self.order();
        let base = self.base.invert()?;
        let mut psi: Vec<TruncSeries> = base.components().iter().map(|c| c.extend_vars(n)).collect();
        psi.extend((n0..n).map(|j| TruncSeries::var(j, n, order)));
        let mut layers = Vec::with_capacity(self.layers.len());
        for (k, (a, b)) in self.layers.iter().enumerate() {
            let (a_psi, b_psi) = {
                let mut sub = Substitution::new(&psi)?;
                (sub.apply(a)?, sub.apply(b)?)
            };
            let a_inv = a_psi.invert()?;
            let b_inv = -&(&b_psi * &a_inv);
            let j = n0 + k;
            psi[j] = &(&a_inv * &TruncSeries::var(j, n, order)) + &b_inv;
            layers.push((a_inv, b_inv));
        }
        Ok(TowerElement { base, layers })
    }

    /// `self ∘ other ∘ self^-1 ∘ other^-1`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.compose(other)?
            .compose(&self.invert()?)?
            .compose(&other.invert()?)
    }

    /// Smallest total degree among the nonidentity parts, `None` for the identity.
    pub fn distance_order(&self) -> Option<u32> {
        self.flatten()
            .components()
            .iter()
            .enumerate()
            .filter_map(|(j, c)| {
                (c - &TruncSeries::var(j, self.nvars(), self.order())).vanishing_order()
            })
            .min()
    }
}

impl std::fmt::Display for TowerElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.flatten().fmt(f)
    }
}
