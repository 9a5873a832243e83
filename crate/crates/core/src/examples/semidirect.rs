//! The groups `{T ∘ phi_v : T in H, v in V}` inside G^2 and their derived series.
//!
//! From `phi_v ∘ S = S ∘ phi_(S^t v)` the pair `(T, v)` standing for `T ∘ phi_v`
//! multiplies as `(T, v)(S, w) = (TS, S^t v + w)`.

use crate::coeff::CycRational;
use crate::diffeo::JetDiffeo;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::matgroup::MatGroupDesc;

use super::{phi_parameters, phi_vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemidirectElement {
    t: Matrix,
    v: Vec<CycRational>,
}

impl SemidirectElement {
    pub fn new(t: Matrix, v: Vec<CycRational>) -> Result<Self> {
        if !t.is_square() || t.rows() != v.len() {
            return Err(Error::mismatch(format!(
                "{}x{} matrix with a vector of length {}",
                t.rows(),
                t.cols(),
                v.len()
            )));
        }
        if t.det().is_zero() {
            return Err(Error::Singular);
        }
        Ok(SemidirectElement { t, v })
    }

    pub fn identity(m: usize) -> Self {
        SemidirectElement {
            t: Matrix::identity(m),
            v: vec![CycRational::zero(); m],
        }
    }

    pub fn linear(t: Matrix) -> Result<Self> {
        let m = t.rows();
        Self::new(t, vec![CycRational::zero(); m])
    }

    pub fn translation(v: Vec<CycRational>) -> Self {
        SemidirectElement {
            t: Matrix::identity(v.len()),
            v,
        }
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.t
    }

    pub fn vector(&self) -> &[CycRational] {
        &self.v
    }

    pub fn is_identity(&self) -> bool {
        self.t.is_identity() && self.v.iter().all(CycRational::is_zero)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::mismatch("semidirect elements of different sizes"));
        }
        let moved = other.t.transpose().mul_vec(&self.v);
        Ok(SemidirectElement {
            t: &self.t * &other.t,
            v: moved.iter().zip(&other.v).map(|(a, b)| a + b).collect(),
        })
    }

    /// `(T^-1, -(T^t)^-1 v)`.
    pub fn inverse(&self) -> Result<Self> {
        let ti = self.t.inverse()?;
        let v = ti.transpose().mul_vec(&self.v).iter().map(|c| -c).collect();
        Ok(SemidirectElement { t: ti, v })
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?
            .mul(&self.inverse()?)?
            .mul(&other.inverse()?)
    }

    /// The jet of `T ∘ phi_v`.
    pub fn to_jet(&self, order: u32) -> Result<JetDiffeo> {
        JetDiffeo::linear(&self.t, order)?.compose(&phi_vector(&self.v, order)?)
    }

    /// Inverse of [`to_jet`](Self::to_jet); fails on jets not of the form `T ∘ phi_v`.
    pub fn from_jet(phi: &JetDiffeo) -> Result<Self> {
        let t = phi.linear_part();
        let rest = JetDiffeo::linear(&t.inverse()?, phi.order())?.compose(phi)?;
        let v = phi_parameters(&rest);
        if rest != phi_vector(&v, phi.order())? {
            return Err(Error::InvalidInput("jet is not of the form T ∘ phi_v".into()));
        }
        Self::new(t, v)
    }
}

/// Row-reduced basis of the span of `vectors` in `field^m`.
pub fn echelon_basis(m: usize, vectors: &[Vec<CycRational>]) -> Vec<Vec<CycRational>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = Matrix::from_rows(vectors.to_vec()).expect("equal lengths").rref();
    (0..pivots.len()).map(|i| r.row(i)[..m].to_vec()).collect()
}

/// `{T ∘ phi_v : T in H, v in V}` with `T^t V ⊆ V` for all `T` in `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemidirectSubgroup {
    m: usize,
    h: MatGroupDesc,
    basis: Vec<Vec<CycRational>>,
}

impl SemidirectSubgroup {
    pub fn new(h: MatGroupDesc, vectors: &[Vec<CycRational>]) -> Result<Self> {
        let m = h.dim();
        if vectors.iter().any(|v| v.len() != m) {
            return Err(Error::mismatch("vector length differs from the matrix size"));
        }
        let h = h.enumerated()?;
        let basis = echelon_basis(m, vectors);
        let s = SemidirectSubgroup { m, h, basis };
        for t in s.h.generators() {
            for b in &s.basis {
                if !s.contains_vector(&t.transpose().mul_vec(b)) {
                    return Err(Error::InvalidInput(
                        "subspace is not invariant under the transposed matrices".into(),
                    ));
                }
            }
        }
        Ok(s)
    }

    /// `(H, field^m)`.
    pub fn full(h: MatGroupDesc) -> Result<Self> {
        let m = h.dim();
        let id = Matrix::identity(m);
        let rows: Vec<Vec<CycRational>> = (0..m).map(|i| id.row(i).to_vec()).collect();
        Self::new(h, &rows)
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn h(&self) -> &MatGroupDesc {
        &self.h
    }

    pub fn basis(&self) -> &[Vec<CycRational>] {
        &self.basis
    }

    pub fn v_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn h_order(&self) -> usize {
        self.h.elements().map_or(0, <[Matrix]>::len)
    }

    pub fn is_trivial(&self) -> bool {
        self.h_order() == 1 && self.basis.is_empty()
    }

    pub fn contains_vector(&self, v: &[CycRational]) -> bool {
        if v.iter().all(CycRational::is_zero) {
            return true;
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        echelon_basis(self.m, &rows).len() == self.basis.len()
    }

    pub fn contains(&self, g: &SemidirectElement) -> Result<bool> {
        Ok(self.h.contains(g.matrix())? && self.contains_vector(g.vector()))
    }

    /// `([H, H], sum over T in H of (T^t - I) V)`.
    pub fn derived_step(&self) -> Result<Self> {
        let h2 = self.h.derived_subgroup()?;
        let id = Matrix::identity(self.m);
        let mut vectors = Vec::new();
        for t in self.h.elements().expect("enumerated") {
            let d = &t.transpose() - &id;
            for b in &self.basis {
                vectors.push(d.mul_vec(b));
            }
        }
        let basis = echelon_basis(self.m, &vectors);
        Ok(SemidirectSubgroup {
            m: self.m,
            h: h2,
            basis,
        })
    }

    /// The derived series down to the trivial group.
    pub fn derived_series(&self) -> Result<Vec<Self>> {
        let mut series = vec![self.clone()];
        while !series.last().expect("nonempty").is_trivial() {
            let last = series.last().expect("nonempty");
            let next = last.derived_step()?;
            if next.h_order() == last.h_order() && next.v_dim() == last.v_dim() {
                return Err(Error::NotSolvable {
                    depth: series.len() - 1,
                });
            }
            series.push(next);
        }
        Ok(series)
    }

    /// The element `(H[index], sum_k coeffs[k] * basis[k])`.
    pub fn element(&self, index: usize, coeffs: &[CycRational]) -> SemidirectElement {
        let elements = self.h.elements().expect("enumerated");
        let t = elements[index % elements.len()].clone();
        let mut v = vec![CycRational::zero(); self.m];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi += &(c * bi);
            }
        }
        SemidirectElement { t, v }
    }
}

/// Two-sided check of a derived step against sampled commutators: every
/// sampled commutator lies in `next`, and the sampled vector parts span
/// all of `next`'s subspace. Returns `(inside, spanning)`.
pub fn commutator_oracle(
    next: &SemidirectSubgroup,
    pairs: &[(SemidirectElement, SemidirectElement)],
) -> Result<(bool, bool)> {
    let mut inside = true;
    let mut parts = Vec::new();
    for (g, h) in pairs {
        let c = g.commutator(h)?;
        if !next.contains(&c)? {
            inside = false;
        }
        parts.push(c.vector().to_vec());
    }
    let spanning = echelon_basis(next.dim(), &parts).len() == next.v_dim();
    Ok((inside, spanning))
}
