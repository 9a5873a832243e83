//! Matrix representation of jets on m/m^(K+1).
//!
//! The basis is the graded-lex list of monomials of degree 1..=K. A
//! diffeomorphism acts by `g -> g ∘ phi`, a vector field by `g -> X(g)`.
//! Because `g ∘ (phi ∘ psi) = (g ∘ phi) ∘ psi`, the diffeomorphism
//! representation reverses products:
//! `represent(phi ∘ psi) = represent(psi) * represent(phi)`.

use std::collections::HashMap;

use serde_json::json;

use crate::coeff::CycRational;
use crate::diffeo::JetDiffeo;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::series::{check_shape, Monomial, Substitution, TruncSeries};
use crate::vfield::JetVectorField;

/// Dimension of m/m^(K+1): C(n+K, n) - 1.
pub fn jet_dimension(n: usize, order: u32) -> usize {
    let mut c: usize = 1;
    for i in 1..=n {
        c = c * (order as usize + i) / i;
    }
    c - 1
}

/// Ordered monomial basis of m/m^(K+1) with a lookup table.
#[derive(Clone, Debug)]
pub struct JetBasis {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl JetBasis {
    pub fn new(n: usize, order: u32) -> Self {
        let monomials = Monomial::all(n, 1, order);
        let index = monomials.iter().enumerate().map(|(k, m)| (*m, k)).collect();
        JetBasis { monomials, index }
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JetOperator {
    n: usize,
    order: u32,
    matrix: Matrix,
}

impl JetOperator {
    pub fn from_matrix(n: usize, order: u32, matrix: Matrix) -> Result<Self> {
        check_shape(n, order)?;
        let d = jet_dimension(n, order);
        if matrix.rows() != d || matrix.cols() != d {
            return Err(Error::mismatch(format!(
                "operator on a {d}-dimensional jet space needs a {d}x{d} matrix"
            )));
        }
        Ok(JetOperator { n, order, matrix })
    }

    pub fn identity(n: usize, order: u32) -> Self {
        JetOperator {
            n,
            order,
            matrix: Matrix::identity(jet_dimension(n, order)),
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn basis(&self) -> JetBasis {
        JetBasis::new(self.n, self.order)
    }

    /// Column for monomial m is the coordinate vector of `m ∘ phi`.
    pub fn represent_diffeo(phi: &JetDiffeo) -> Self {
        let (n, order) = (phi.nvars(), phi.order());
        let basis = JetBasis::new(n, order);
        let mut sub = Substitution::new(phi.components()).expect("diffeo components lie in m");
        let mut matrix = Matrix::zero(basis.len(), basis.len());
        for (col, m) in basis.monomials().iter().enumerate() {
            let image = sub.monomial(m);
            for (mm, c) in image.terms() {
                let row = basis.position(mm).expect("image lies in m");
                matrix[(row, col)] = c.clone();
            }
        }
        JetOperator { n, order, matrix }
    }

    /// The derivation g -> X(g) on the monomial basis.
    pub fn represent_field(field: &JetVectorField) -> Self {
        let (n, order) = (field.nvars(), field.order());
        let basis = JetBasis::new(n, order);
        let mut matrix = Matrix::zero(basis.len(), basis.len());
        for (col, m) in basis.monomials().iter().enumerate() {
            let mono = TruncSeries::monomial(*m, CycRational::one(), n, order);
            let image = field.apply(&mono).expect("shapes agree");
            for (mm, c) in image.terms() {
                let row = basis.position(mm).expect("image lies in m");
                matrix[(row, col)] = c.clone();
            }
        }
        JetOperator { n, order, matrix }
    }

    pub fn coordinates(&self, f: &TruncSeries) -> Result<Vec<CycRational>> {
        coordinates(&self.basis(), f)
    }

    pub fn series(&self, v: &[CycRational]) -> TruncSeries {
        series_from_coordinates(&self.basis(), self.n, self.order, v)
    }

    /// Applies the operator to an element of m/m^(K+1).
    pub fn apply(&self, f: &TruncSeries) -> Result<TruncSeries> {
        if f.nvars() != self.n || f.order() != self.order {
            return Err(Error::mismatch("series and operator shapes differ"));
        }
        let v = self.coordinates(f)?;
        Ok(self.series(&self.matrix.mul_vec(&v)))
    }

    /// Operator product `self * other` (apply `other` first).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n || self.order != other.order {
            return Err(Error::mismatch("operators act on different jet spaces"));
        }
        Ok(JetOperator {
            n: self.n,
            order: self.order,
            matrix: self.matrix.checked_mul(&other.matrix)?,
        })
    }

    pub fn is_unipotent(&self) -> bool {
        self.matrix.is_unipotent()
    }

    pub fn is_nilpotent(&self) -> bool {
        self.matrix.is_nilpotent()
    }

    /// Membership in D_K: invertible and multiplicative, i.e. `A(g h) = A(g) A(h)`
    /// for every pair of basis monomials whose product still lies below degree K+1.
    pub fn check_dk_membership(&self) -> bool {
        if self.matrix.det().is_zero() {
            return false;
        }
        let basis = self.basis();
        let images: Vec<TruncSeries> = (0..basis.len())
            .map(|k| self.series(&self.matrix.column(k)))
            .collect();
        let ms = basis.monomials();
        for (a, ma) in ms.iter().enumerate() {
            for (b, mb) in ms.iter().enumerate().skip(a) {
                if ma.degree() + mb.degree() > self.order {
                    continue;
                }
                let prod = ma.mul(mb);
                let k = basis.position(&prod).expect("product in range");
                if images[k] != &images[a] * &images[b] {
                    return false;
                }
            }
        }
        true
    }

    /// Finite Mercator series of a unipotent operator.
    pub fn log_unipotent(&self) -> Result<Self> {
        let matrix = self.matrix.log_unipotent()?;
        Ok(JetOperator {
            n: self.n,
            order: self.order,
            matrix,
        })
    }

    /// Finite exponential series of a nilpotent operator.
    pub fn exp_nilpotent(&self) -> Result<Self> {
        let matrix = self.matrix.exp_nilpotent()?;
        Ok(JetOperator {
            n: self.n,
            order: self.order,
            matrix,
        })
    }

    /// `log(A) v` without forming log(A): the Mercator series applied to one
    /// vector. Fails if `(A - I)^j v` has not vanished after `dim` steps.
    pub fn log_applied(&self, v: &[CycRational]) -> Result<Vec<CycRational>> {
        let d = self.dim();
        let mut acc = vec![CycRational::zero(); d];
        let mut cur = v.to_vec();
        for j in 1..=d + 1 {
            let image = self.matrix.mul_vec(&cur);
            cur = image.iter().zip(&cur).map(|(a, b)| a - b).collect();
            if cur.iter().all(CycRational::is_zero) {
                return Ok(acc);
            }
            let sign = if j % 2 == 1 { 1 } else { -1 };
            let c = CycRational::from_frac(sign, j as i64);
            for (a, x) in acc.iter_mut().zip(&cur) {
                if !x.is_zero() {
                    *a += &(x * &c);
                }
            }
        }
        Err(Error::NotUnipotent)
    }

    /// JSON dump with the ordered basis legend.
    pub fn to_json(&self) -> serde_json::Value {
        let basis = self.basis();
        let legend: Vec<Vec<u32>> = basis.monomials().iter().map(|m| m.exps(self.n)).collect();
        json!({
            "n": self.n,
            "K": self.order,
            "basis": legend,
            "matrix": crate::json::matrix_to_json(&self.matrix),
        })
    }
}

pub fn coordinates(basis: &JetBasis, f: &TruncSeries) -> Result<Vec<CycRational>> {
    if !f.constant_term().is_zero() {
        return Err(Error::InvalidInput(
            "jet space elements have no constant term".into(),
        ));
    }
    let mut v = vec![CycRational::zero(); basis.len()];
    for (m, c) in f.terms() {
        let k = basis
            .position(m)
            .ok_or_else(|| Error::mismatch("monomial outside the jet basis"))?;
        v[k] = c.clone();
    }
    Ok(v)
}

pub fn series_from_coordinates(
    basis: &JetBasis,
    n: usize,
    order: u32,
    v: &[CycRational],
) -> TruncSeries {
    TruncSeries::from_terms(
        n,
        order,
        basis
            .monomials()
            .iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (*m, c.clone())),
    )
    .expect("basis monomials fit the shape")
}
