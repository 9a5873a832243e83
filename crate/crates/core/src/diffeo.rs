//! Jets of formal diffeomorphisms of (C^n, 0).

use crate::coeff::CycRational;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::series::{check_shape, Monomial, Substitution, TruncSeries};

/// An n-tuple of series in m with invertible linear part, truncated at order K.
///
/// `compose(phi, psi)` is `phi ∘ psi`: its components are `phi_j(psi_1, ..., psi_n)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct JetDiffeo {
    n: usize,
    order: u32,
    components: Vec<TruncSeries>,
}

impl JetDiffeo {
    pub fn new(components: Vec<TruncSeries>) -> Result<Self> {
        let n = components.len();
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidInput("a diffeomorphism needs components".into()))?;
        let order = first.order();
        check_shape(n, order)?;
        for (k, c) in components.iter().enumerate() {
            if c.nvars() != n || c.order() != order {
                return Err(Error::mismatch(format!(
                    "component {} has shape (n={}, K={}), expected (n={n}, K={order})",
                    k + 1,
                    c.nvars(),
                    c.order()
                )));
            }
            if !c.constant_term().is_zero() {
                return Err(Error::NonzeroConstantTerm { index: k });
            }
        }
        let phi = JetDiffeo {
            n,
            order,
            components,
        };
        if phi.linear_part().det().is_zero() {
            return Err(Error::Singular);
        }
        Ok(phi)
    }

    pub fn identity(n: usize, order: u32) -> Self {
        JetDiffeo {
            n,
            order,
            components: (0..n).map(|j| TruncSeries::var(j, n, order)).collect(),
        }
    }

    /// The linear map x -> A x.
    pub fn linear(a: &Matrix, order: u32) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::mismatch("linear part must be square"));
        }
        let n = a.rows();
        check_shape(n, order)?;
        let components = (0..n)
            .map(|i| {
                TruncSeries::from_terms(
                    n,
                    order,
                    (0..n).map(|j| (Monomial::var(j), a[(i, j)].clone())),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(components)
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn components(&self) -> &[TruncSeries] {
        &self.components
    }

    pub fn component(&self, j: usize) -> &TruncSeries {
        &self.components[j]
    }

    pub fn into_components(self) -> Vec<TruncSeries> {
        self.components
    }

    pub fn is_identity(&self) -> bool {
        self.components
            .iter()
            .enumerate()
            .all(|(j, c)| *c == TruncSeries::var(j, self.n, self.order))
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.order != other.order {
            return Err(Error::mismatch(format!(
                "diffeomorphism shapes (n={}, K={}) and (n={}, K={})",
                self.n, self.order, other.n, other.order
            )));
        }
        Ok(())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut sub = Substitution::new(&other.components)?;
        let components = self
            .components
            .iter()
            .map(|c| sub.apply(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(JetDiffeo {
            n: self.n,
            order: self.order,
            components,
        })
    }

    /// Degree-1 coefficient matrix: entry (i, j) is the coefficient of x_j in g_i.
    pub fn linear_part(&self) -> Matrix {
        Matrix::from_fn(self.n, self.n, |i, j| {
            self.components[i].coeff(&Monomial::var(j))
        })
    }

    /// Compositional inverse, solved degree by degree: starting from the
    /// inverse of the linear part, each pass cancels the lowest remaining
    /// defect of `self ∘ psi - id`.
    pub fn invert(&self) -> Result<Self> {
        let a_inv = self.linear_part().inverse()?;
        let mut psi = Self::linear(&a_inv, self.order)?;
        for d in 2..=self.order {
            // Only the degree-d part of the defect is needed, so compose at order d.
            let defect = self.truncate(d).compose(&psi.truncate(d))?;
            let h: Vec<TruncSeries> = defect
                .components
                .iter()
                .map(|c| c.homogeneous(d).with_order(self.order))
                .collect();
            if h.iter().all(TruncSeries::is_zero) {
                continue;
            }
            for i in 0..self.n {
                let mut corr = TruncSeries::zero(self.n, self.order);
                for (j, hj) in h.iter().enumerate() {
                    let c = &a_inv[(i, j)];
                    if !c.is_zero() {
                        corr = &corr + &hj.scale(c);
                    }
                }
                psi.components[i] = &psi.components[i] - &corr;
            }
        }
        Ok(psi)
    }

    /// The group commutator `self ∘ other ∘ self^-1 ∘ other^-1`.
    pub fn group_commutator(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let a = self.compose(other)?;
        let b = a.compose(&self.invert()?)?;
        b.compose(&other.invert()?)
    }

    /// True when `j^1 phi - Id` is nilpotent.
    pub fn is_unipotent(&self) -> bool {
        self.linear_part().is_unipotent()
    }

    /// `f ∘ self`.
    pub fn pullback_function(&self, f: &TruncSeries) -> Result<TruncSeries> {
        if f.nvars() != self.n || f.order() != self.order {
            return Err(Error::mismatch(format!(
                "function of shape (n={}, K={}) against diffeomorphism (n={}, K={})",
                f.nvars(),
                f.order(),
                self.n,
                self.order
            )));
        }
        f.substitute(&self.components)
    }

    /// The k-jet for k <= K.
    pub fn truncate(&self, k: u32) -> Self {
        assert!(k >= 1 && k <= self.order, "can only lower the order");
        JetDiffeo {
            n: self.n,
            order: k,
            components: self.components.iter().map(|c| c.truncate(k)).collect(),
        }
    }

    /// Scalar multiple of every component (used for linear maps such as -Id).
    pub fn scale(&self, c: &CycRational) -> Result<Self> {
        Self::new(self.components.iter().map(|s| s.scale(c)).collect())
    }
}

impl std::fmt::Debug for JetDiffeo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "JetDiffeo(n={}, K={}, {})",
            self.n,
            self.order,
            crate::render::tuple_to_string(&self.components)
        )
    }
}

impl std::fmt::Display for JetDiffeo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&crate::render::tuple_to_string(&self.components))
    }
}
