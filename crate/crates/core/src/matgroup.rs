//! Finite matrix groups over Q(z8): closure, derived series, and Kolchin flags
//! for sets of unipotent matrices.

use std::collections::BTreeSet;

use crate::coeff::CycRational;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

/// Enumeration cap, overridable through `JETGROUPS_MAX_CLOSURE`.
pub fn closure_cap() -> usize {
    std::env::var("JETGROUPS_MAX_CLOSURE")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&c| c > 0)
        .unwrap_or(DEFAULT_CLOSURE_CAP)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatGroupDesc {
    m: usize,
    generators: Vec<Matrix>,
    elements: Option<Vec<Matrix>>,
    closure_cap: usize,
}

impl MatGroupDesc {
    pub fn new(m: usize, generators: Vec<Matrix>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("matrix dimension must be positive".into()));
        }
        for g in &generators {
            if g.rows() != m || g.cols() != m {
                return Err(Error::mismatch(format!(
                    "generator of size {}x{} in a group of {m}x{m} matrices",
                    g.rows(),
                    g.cols()
                )));
            }
            if g.det().is_zero() {
                return Err(Error::Singular);
            }
        }
        Ok(MatGroupDesc {
            m,
            generators,
            elements: None,
            closure_cap: closure_cap(),
        })
    }

    pub fn trivial(m: usize) -> Self {
        MatGroupDesc {
            m,
            generators: Vec::new(),
            elements: Some(vec![Matrix::identity(m)]),
            closure_cap: closure_cap(),
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.closure_cap = cap;
        self
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn cap(&self) -> usize {
        self.closure_cap
    }

    /// Cached elements, if already enumerated.
    pub fn elements(&self) -> Option<&[Matrix]> {
        self.elements.as_deref()
    }

    /// Sorted element list of the generated group. Only products of generators
    /// are formed, which suffices because every element of a finite group has
    /// finite order.
    pub fn enumerate_closure(&self) -> Result<Vec<Matrix>> {
        if let Some(e) = &self.elements {
            return Ok(e.clone());
        }
        closure(self.m, &self.generators, self.closure_cap, |m| m)
    }

    /// A copy with the element list cached.
    pub fn enumerated(&self) -> Result<Self> {
        let elements = self.enumerate_closure()?;
        Ok(MatGroupDesc {
            elements: Some(elements),
            ..self.clone()
        })
    }

    pub fn order(&self) -> Result<usize> {
        Ok(self.enumerate_closure()?.len())
    }

    pub fn is_trivial(&self) -> Result<bool> {
        Ok(self.order()? == 1)
    }

    pub fn contains(&self, g: &Matrix) -> Result<bool> {
        let elements = self.enumerate_closure()?;
        Ok(elements.binary_search(g).is_ok())
    }

    /// The subgroup generated by all commutators `a b a^-1 b^-1` of element pairs.
    pub fn derived_subgroup(&self) -> Result<Self> {
        let elements = self.enumerate_closure()?;
        let commutators = all_commutators(&elements)?;
        let gens: Vec<Matrix> = commutators.into_iter().collect();
        let elements = closure(self.m, &gens, self.closure_cap, |m| m)?;
        Ok(MatGroupDesc {
            m: self.m,
            generators: gens,
            elements: Some(elements),
            closure_cap: self.closure_cap,
        })
    }

    /// `G, G', G'', ...` ending with the trivial group. A nontrivial perfect
    /// term means the group is not solvable.
    pub fn derived_series_finite(&self) -> Result<Vec<Self>> {
        let mut series = vec![self.enumerated()?];
        loop {
            let last = series.last().expect("nonempty");
            let size = last.order()?;
            if size == 1 {
                return Ok(series);
            }
            let next = last.derived_subgroup()?;
            if next.order()? == size {
                return Err(Error::NotSolvable {
                    depth: series.len() - 1,
                });
            }
            series.push(next);
        }
    }

    pub fn derived_length(&self) -> Result<usize> {
        Ok(self.derived_series_finite()?.len() - 1)
    }

    /// `g h g^-1` lies in `self` for all `g` in `sup`, `h` in `self`.
    pub fn is_normal_in(&self, sup: &Self) -> Result<bool> {
        let sub = self.enumerate_closure()?;
        for g in sup.enumerate_closure()? {
            let gi = g.inverse()?;
            for h in &sub {
                let c = &(&g * h) * &gi;
                if sub.binary_search(&c).is_err() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn closure(
    m: usize,
    gens: &[Matrix],
    cap: usize,
    normalize: impl Fn(Matrix) -> Matrix,
) -> Result<Vec<Matrix>> {
    let id = normalize(Matrix::identity(m));
    let gens: Vec<Matrix> = gens.iter().cloned().map(&normalize).collect();
    let mut seen: BTreeSet<Matrix> = BTreeSet::new();
    seen.insert(id.clone());
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for g in &gens {
                let p = normalize(a * g);
                if !seen.contains(&p) {
                    if seen.len() >= cap {
                        return Err(Error::CapExceeded { cap });
                    }
                    seen.insert(p.clone());
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    Ok(seen.into_iter().collect())
}

fn all_commutators(elements: &[Matrix]) -> Result<BTreeSet<Matrix>> {
    let inverses = elements
        .iter()
        .map(Matrix::inverse)
        .collect::<Result<Vec<_>>>()?;
    let mut out = BTreeSet::new();
    for (a, ai) in elements.iter().zip(&inverses) {
        for (b, bi) in elements.iter().zip(&inverses) {
            out.insert(&(&(a * b) * ai) * bi);
        }
    }
    Ok(out)
}

/// Scales a matrix so that its first nonzero entry is 1: a canonical
/// representative of its class modulo scalars.
pub fn projective_normalize(a: Matrix) -> Matrix {
    match a.entries().iter().find(|c| !c.is_zero()) {
        Some(c) => a.scale(&c.inv().expect("nonzero")),
        None => a,
    }
}

/// Image of `<gens>` in PGL(m), one normalized representative per class.
pub fn projective_closure(m: usize, gens: &[Matrix], cap: usize) -> Result<Vec<Matrix>> {
    closure(m, gens, cap, projective_normalize)
}

/// Derived series from level 1 onward, computed from generators known only up
/// to scalar factors. Commutators do not see scalars, so the commutators of
/// projective representatives are the genuine elements of `[G, G]`.
pub fn derived_series_from_scaled(m: usize, gens: &[Matrix], cap: usize) -> Result<Vec<MatGroupDesc>> {
    let reps = projective_closure(m, gens, cap)?;
    let commutators: Vec<Matrix> = all_commutators(&reps)?.into_iter().collect();
    let first = MatGroupDesc::new(m, commutators)?.with_cap(cap);
    first.derived_series_finite()
}

/// `[l A, u B] == [A, B]` for nonzero scalars.
pub fn commutator_scaling_check(
    a: &Matrix,
    b: &Matrix,
    l: &CycRational,
    u: &CycRational,
) -> Result<bool> {
    if l.is_zero() || u.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let scaled = a.scale(l).commutator(&b.scale(u))?;
    Ok(scaled == a.commutator(b)?)
}

/// An invertible P with `P^-1 U P` upper unitriangular for every input.
///
/// Finds a common fixed vector (the joint kernel of the `U - I`), completes it
/// to a basis, and recurses on the induced action on the quotient.
pub fn kolchin_flag(mats: &[Matrix]) -> Result<Matrix> {
    let first = mats
        .first()
        .ok_or_else(|| Error::InvalidInput("kolchin_flag needs at least one matrix".into()))?;
    let m = first.rows();
    for u in mats {
        if u.rows() != m || u.cols() != m {
            return Err(Error::mismatch("matrices of different sizes"));
        }
        if !u.is_unipotent() {
            return Err(Error::NoCommonFixedVector);
        }
    }
    let p = flag(m, mats)?;
    let pi = p.inverse()?;
    for u in mats {
        if !(&(&pi * u) * &p).is_upper_unitriangular() {
            return Err(Error::NoCommonFixedVector);
        }
    }
    Ok(p)
}

fn flag(m: usize, mats: &[Matrix]) -> Result<Matrix> {
    if m == 0 {
        return Ok(Matrix::identity(0));
    }
    let id = Matrix::identity(m);
    let mut stacked = Vec::new();
    for u in mats {
        let nmat = u - &id;
        for i in 0..m {
            stacked.push(nmat.row(i).to_vec());
        }
    }
    let fixed = if stacked.is_empty() {
        (0..m).map(|i| id.column(i)).collect()
    } else {
        Matrix::from_rows(stacked)?.kernel()
    };
    let v = fixed.into_iter().next().ok_or(Error::NoCommonFixedVector)?;
    // Complete v with standard basis vectors.
    let mut q = Matrix::zero(m, m);
    q.set_column(0, &v);
    let mut filled = 1;
    for e in 0..m {
        if filled == m {
            break;
        }
        q.set_column(filled, &id.column(e));
        let trial = Matrix::from_fn(m, filled + 1, |i, j| q[(i, j)].clone());
        if trial.rank() == filled + 1 {
            filled += 1;
        }
    }
    let qi = q.inverse()?;
    let blocks: Vec<Matrix> = mats
        .iter()
        .map(|u| {
            let c = &(&qi * u) * &q;
            Matrix::from_fn(m - 1, m - 1, |i, j| c[(i + 1, j + 1)].clone())
        })
        .collect();
    let inner = flag(m - 1, &blocks)?;
    let mut lift = Matrix::identity(m);
    for i in 0..m - 1 {
        for j in 0..m - 1 {
            lift[(i + 1, j + 1)] = inner[(i, j)].clone();
        }
    }
    Ok(&q * &lift)
}

/// Basis (in reduced echelon form) of the linear span of a set of m x m matrices.
pub fn matrix_span(mats: &[Matrix]) -> Vec<Matrix> {
    let Some(first) = mats.first() else {
        return Vec::new();
    };
    let (r, c) = (first.rows(), first.cols());
    let rows: Vec<Vec<CycRational>> = mats.iter().map(|a| a.entries().to_vec()).collect();
    let (red, pivots) = Matrix::from_rows(rows).expect("rectangular").rref();
    (0..pivots.len())
        .map(|k| Matrix::from_fn(r, c, |i, j| red[(k, i * c + j)].clone()))
        .collect()
}

fn lie(a: &Matrix, b: &Matrix) -> Matrix {
    &(a * b) - &(b * a)
}

/// Lie algebra generated by `mats` under the commutator bracket.
pub fn lie_closure(mats: &[Matrix]) -> Vec<Matrix> {
    let mut basis = matrix_span(mats);
    loop {
        let mut all = basis.clone();
        for a in &basis {
            for b in &basis {
                all.push(lie(a, b));
            }
        }
        let next = matrix_span(&all);
        if next.len() == basis.len() {
            return basis;
        }
        basis = next;
    }
}

/// Number of steps for the lower central series `g, [g, g], [g, [g, g]], ...`
/// of the Lie algebra generated by `mats` to reach 0, or `None` if it
/// stalls at a nonzero term.
pub fn lower_central_length(mats: &[Matrix]) -> Option<usize> {
    let g = lie_closure(mats);
    let mut term = g.clone();
    let mut steps = 0;
    while !term.is_empty() {
        let mut brackets = Vec::new();
        for a in &g {
            for b in &term {
                let c = lie(a, b);
                if !c.is_zero() {
                    brackets.push(c);
                }
            }
        }
        let next = matrix_span(&brackets);
        steps += 1;
        if next.len() == term.len() {
            return None;
        }
        term = next;
    }
    Some(steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> CycRational {
        CycRational::from_int(v)
    }

    fn m2(a: [[i64; 2]; 2]) -> Matrix {
        Matrix::from_rows(a.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn small_closures() {
        assert_eq!(MatGroupDesc::new(2, vec![Matrix::identity(2)]).unwrap().order().unwrap(), 1);
        let minus = Matrix::identity(2).scale(&int(-1));
        assert_eq!(MatGroupDesc::new(2, vec![minus]).unwrap().order().unwrap(), 2);
        let rot = m2([[0, -1], [1, 0]]);
        let g = MatGroupDesc::new(2, vec![rot]).unwrap();
        assert_eq!(g.order().unwrap(), 4);
        assert_eq!(g.derived_length().unwrap(), 1);
        assert_eq!(MatGroupDesc::trivial(3).derived_length().unwrap(), 0);
    }

    #[test]
    fn cap_is_enforced() {
        let shear = m2([[1, 1], [0, 1]]);
        let g = MatGroupDesc::new(2, vec![shear]).unwrap().with_cap(50);
        assert_eq!(g.order().unwrap_err(), Error::CapExceeded { cap: 50 });
    }

    #[test]
    fn symmetric_group_series() {
        // S3 as permutation matrices: S3 > A3 > 1.
        let swap = Matrix::from_rows(vec![
            vec![int(0), int(1), int(0)],
            vec![int(1), int(0), int(0)],
            vec![int(0), int(0), int(1)],
        ])
        .unwrap();
        let cycle = Matrix::from_rows(vec![
            vec![int(0), int(0), int(1)],
            vec![int(1), int(0), int(0)],
            vec![int(0), int(1), int(0)],
        ])
        .unwrap();
        let g = MatGroupDesc::new(3, vec![swap, cycle]).unwrap();
        let series = g.derived_series_finite().unwrap();
        let orders: Vec<usize> = series.iter().map(|s| s.order().unwrap()).collect();
        assert_eq!(orders, vec![6, 3, 1]);
        assert!(series[1].is_normal_in(&series[0]).unwrap());
    }

    #[test]
    fn kolchin_examples() {
        let j = m2([[1, 1], [0, 1]]);
        assert_eq!(kolchin_flag(&[j.clone()]).unwrap(), Matrix::identity(2));
        assert_eq!(kolchin_flag(&[Matrix::identity(3)]).unwrap(), Matrix::identity(3));
        let lower = j.transpose();
        let p = kolchin_flag(&[lower.clone()]).unwrap();
        assert!((&(&p.inverse().unwrap() * &lower) * &p).is_upper_unitriangular());
        assert_eq!(
            kolchin_flag(&[j.clone(), lower]).unwrap_err(),
            Error::NoCommonFixedVector
        );
        assert_eq!(
            kolchin_flag(&[m2([[2, 0], [0, 1]])]).unwrap_err(),
            Error::NoCommonFixedVector
        );
    }

    #[test]
    fn scaling_and_projective_route() {
        let a = m2([[2, 1], [1, 1]]);
        let b = m2([[0, 1], [-1, 3]]);
        assert!(commutator_scaling_check(&a, &b, &int(3), &CycRational::i()).unwrap());
        assert!(commutator_scaling_check(&a, &a, &int(5), &int(1)).unwrap());
        // <2 * rotation> is infinite, but its projective image has order 2.
        let r = m2([[0, -2], [2, 0]]);
        assert_eq!(projective_closure(2, &[r], 100).unwrap().len(), 2);
    }

    #[test]
    fn heisenberg_lie_algebra() {
        let e12 = Matrix::from_fn(3, 3, |i, j| if (i, j) == (0, 1) { int(1) } else { int(0) });
        let e23 = Matrix::from_fn(3, 3, |i, j| if (i, j) == (1, 2) { int(1) } else { int(0) });
        assert_eq!(lie_closure(&[e12.clone(), e23.clone()]).len(), 3);
        assert_eq!(lower_central_length(&[e12.clone(), e23]), Some(2));
        assert_eq!(lower_central_length(&[e12.clone(), e12.transpose()]), None);
    }
}
