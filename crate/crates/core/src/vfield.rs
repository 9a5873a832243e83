//! Jets of formal vector fields, viewed as derivations of the jet algebra.

use std::collections::HashMap;

use crate::coeff::CycRational;
use crate::diffeo::JetDiffeo;
use crate::error::{Error, Result};
use crate::jetrep::{jet_dimension, JetOperator};
use crate::linalg::Matrix;
use crate::series::{check_shape, Monomial, TruncSeries};

/// `X = X_1 d/dx_1 + ... + X_n d/dx_n` with every `X_j` in m, truncated at order K.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct JetVectorField {
    n: usize,
    order: u32,
    components: Vec<TruncSeries>,
}

impl JetVectorField {
    pub fn new(components: Vec<TruncSeries>) -> Result<Self> {
        let n = components.len();
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidInput("a vector field needs components".into()))?;
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
        Ok(JetVectorField {
            n,
            order,
            components,
        })
    }

    pub fn zero(n: usize, order: u32) -> Self {
        JetVectorField {
            n,
            order,
            components: vec![TruncSeries::zero(n, order); n],
        }
    }

    /// The linear field `x -> M x`.
    pub fn linear(m: &Matrix, order: u32) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::mismatch("linear part must be square"));
        }
        let n = m.rows();
        check_shape(n, order)?;
        let components = (0..n)
            .map(|i| {
                TruncSeries::from_terms(
                    n,
                    order,
                    (0..n).map(|j| (Monomial::var(j), m[(i, j)].clone())),
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

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(TruncSeries::is_zero)
    }

    fn same_shape(&self, n: usize, order: u32) -> Result<()> {
        if self.n != n || self.order != order {
            return Err(Error::mismatch(format!(
                "vector field of shape (n={}, K={}) against (n={n}, K={order})",
                self.n, self.order
            )));
        }
        Ok(())
    }

    fn map(&self, f: impl Fn(&TruncSeries) -> TruncSeries) -> Self {
        JetVectorField {
            n: self.n,
            order: self.order,
            components: self.components.iter().map(f).collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        other.same_shape(self.n, self.order)?;
        Ok(JetVectorField {
            n: self.n,
            order: self.order,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.scale(&CycRational::from_int(-1)))
    }

    pub fn scale(&self, c: &CycRational) -> Self {
        self.map(|s| s.scale(c))
    }

    /// Entry (i, j) is the coefficient of x_j in X_i.
    pub fn linear_part(&self) -> Matrix {
        Matrix::from_fn(self.n, self.n, |i, j| {
            self.components[i].coeff(&Monomial::var(j))
        })
    }

    /// `X(f) = sum_j X_j * df/dx_j`. Exact through degree K because every
    /// `X_j` vanishes at the origin.
    pub fn apply(&self, f: &TruncSeries) -> Result<TruncSeries> {
        if f.nvars() != self.n || f.order() != self.order {
            return Err(Error::mismatch(format!(
                "function of shape (n={}, K={}) against field (n={}, K={})",
                f.nvars(),
                f.order(),
                self.n,
                self.order
            )));
        }
        let mut out = TruncSeries::zero(self.n, self.order);
        for (j, xj) in self.components.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            let d = f.partial_derivative(j)?;
            if !d.is_zero() {
                out = &out + &(xj * &d);
            }
        }
        Ok(out)
    }

    /// `[X, Y] = XY - YX`, componentwise `X(Y_j) - Y(X_j)`.
    pub fn lie_bracket(&self, other: &Self) -> Result<Self> {
        other.same_shape(self.n, self.order)?;
        let components = (0..self.n)
            .map(|j| Ok(&self.apply(&other.components[j])? - &other.apply(&self.components[j])?))
            .collect::<Result<Vec<_>>>()?;
        Ok(JetVectorField {
            n: self.n,
            order: self.order,
            components,
        })
    }

    pub fn is_nilpotent(&self) -> bool {
        self.linear_part().is_nilpotent()
    }

    /// The time-t flow `(sum_j t^j/j! X^j(x_1), ...)`. The sum is finite because a
    /// nilpotent field acts nilpotently on m/m^(K+1); the loop is capped at the
    /// dimension of that space.
    pub fn exp_nilpotent(&self, t: &CycRational) -> Result<JetDiffeo> {
        if !self.is_nilpotent() {
            return Err(Error::NotNilpotent);
        }
        let cap = jet_dimension(self.n, self.order);
        let mut components = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut term = TruncSeries::var(i, self.n, self.order);
            let mut sum = term.clone();
            let mut j = 1;
            loop {
                if j > cap + 1 {
                    return Err(Error::NotNilpotent);
                }
                term = self.apply(&term)?.scale(&(t * &CycRational::from_frac(1, j as i64)));
                if term.is_zero() {
                    break;
                }
                sum = &sum + &term;
                j += 1;
            }
            components.push(sum);
        }
        JetDiffeo::new(components)
    }

    /// Infinitesimal generator of a unipotent jet, read off from the finite
    /// Mercator series of its action on m/m^(K+1).
    pub fn log_unipotent(phi: &JetDiffeo) -> Result<Self> {
        if !phi.is_unipotent() {
            return Err(Error::NotUnipotent);
        }
        let (n, order) = (phi.nvars(), phi.order());
        let rep = JetOperator::represent_diffeo(phi);
        let components = (0..n)
            .map(|i| {
                let v = rep.coordinates(&TruncSeries::var(i, n, order))?;
                Ok(rep.series(&rep.log_applied(&v)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(components)
    }

    /// `phi^t = exp(t log phi)`.
    pub fn one_parameter(phi: &JetDiffeo, t: &CycRational) -> Result<JetDiffeo> {
        Self::log_unipotent(phi)?.exp_nilpotent(t)
    }

    /// `phi^* X = (D phi)^-1 (X ∘ phi)`, the field Y with `Y(f ∘ phi) = X(f) ∘ phi`.
    pub fn pullback_field(phi: &JetDiffeo, field: &Self) -> Result<Self> {
        field.same_shape(phi.nvars(), phi.order())?;
        let (n, order) = (field.n, field.order);
        let v = field
            .components
            .iter()
            .map(|c| phi.pullback_function(c))
            .collect::<Result<Vec<_>>>()?;
        // D phi = A + N with A constant and N vanishing at 0. Solve
        // (A + N) Y = v by Y <- A^-1 (v - N Y); each pass fixes one more degree.
        let a_inv = phi.linear_part().inverse()?;
        let mut nmat = vec![vec![TruncSeries::zero(n, order); n]; n];
        for (i, row) in nmat.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                let d = phi.component(i).partial_derivative(j)?;
                *e = &d - &TruncSeries::constant(d.constant_term(), n, order);
            }
        }
        let solve = |rhs: &[TruncSeries]| -> Vec<TruncSeries> {
            (0..n)
                .map(|i| {
                    let mut acc = TruncSeries::zero(n, order);
                    for (j, r) in rhs.iter().enumerate() {
                        if !a_inv[(i, j)].is_zero() {
                            acc = &acc + &r.scale(&a_inv[(i, j)]);
                        }
                    }
                    acc
                })
                .collect()
        };
        let mut y = solve(&v);
        for _ in 0..order {
            let rhs: Vec<TruncSeries> = (0..n)
                .map(|i| {
                    let mut acc = v[i].clone();
                    for j in 0..n {
                        if !nmat[i][j].is_zero() {
                            acc = &acc - &(&nmat[i][j] * &y[j]);
                        }
                    }
                    acc
                })
                .collect();
            y = solve(&rhs);
        }
        Self::new(y)
    }

    /// The field Z with `exp(Z) = exp(self) ∘ exp(other)`.
    ///
    /// Under the pullback action `g -> g ∘ phi`, `exp(X) ∘ exp(Y)` acts as
    /// `e^Y e^X`, so this evaluates Dynkin's series for `log(e^A e^B)` at
    /// `A = other`, `B = self`. Words are summed by ascending length; the
    /// sum stops at the first length where every nested bracket vanishes.
    pub fn bch_dynkin(&self, other: &Self) -> Result<Self> {
        other.same_shape(self.n, self.order)?;
        if !self.is_nilpotent() || !other.is_nilpotent() {
            return Err(Error::NotNilpotent);
        }
        dynkin(other, self, jet_dimension(self.n, self.order))
    }
}

/// `sum_w c(w) [w_1, [w_2, ..., w_N]]` over words in {a, b}; `c(w)` collects
/// every way of cutting `w` into blocks `a^r b^s` (r + s >= 1).
fn dynkin(a: &JetVectorField, b: &JetVectorField, cap: usize) -> Result<JetVectorField> {
    let letters = [a, b];
    let mut total = JetVectorField::zero(a.n, a.order);
    // Nonzero nested brackets of the current length, keyed by word (true = b).
    let mut layer: HashMap<Vec<bool>, JetVectorField> = HashMap::new();
    for (k, f) in letters.iter().enumerate() {
        if !f.is_zero() {
            layer.insert(vec![k == 1], (*f).clone());
        }
    }
    let mut len = 1;
    while !layer.is_empty() {
        if len > cap {
            return Err(Error::NonStabilization { cap });
        }
        let mut words: Vec<&Vec<bool>> = layer.keys().collect();
        words.sort();
        for w in words {
            let c = dynkin_coefficient(w);
            if !c.is_zero() {
                total = total.checked_add(&layer[w].scale(&c))?;
            }
        }
        let mut next = HashMap::new();
        for (w, val) in &layer {
            for (k, f) in letters.iter().enumerate() {
                let br = f.lie_bracket(val)?;
                if !br.is_zero() {
                    let mut word = Vec::with_capacity(w.len() + 1);
                    word.push(k == 1);
                    word.extend_from_slice(w);
                    next.insert(word, br);
                }
            }
        }
        layer = next;
        len += 1;
    }
    Ok(total)
}

/// `sum over block cuts of (-1)^(k-1) / (k N prod r_i! s_i!)`.
fn dynkin_coefficient(w: &[bool]) -> CycRational {
    let len = w.len();
    // dp[i][k]: sum over cuts of w[..i] into k blocks of prod 1/(r! s!).
    let mut dp = vec![vec![CycRational::zero(); len + 1]; len + 1];
    dp[0][0] = CycRational::one();
    for i in 0..len {
        for k in 0..=i {
            if dp[i][k].is_zero() {
                continue;
            }
            let (mut r, mut s) = (0i64, 0i64);
            for j in i..len {
                if !w[j] {
                    if s > 0 {
                        break;
                    }
                    r += 1;
                } else {
                    s += 1;
                }
                let weight = CycRational::from_frac(1, factorial(r) * factorial(s));
                let add = &dp[i][k] * &weight;
                dp[j + 1][k + 1] += &add;
            }
        }
    }
    let mut c = CycRational::zero();
    for k in 1..=len {
        if dp[len][k].is_zero() {
            continue;
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        c += &(&dp[len][k] * &CycRational::from_frac(sign, (k * len) as i64));
    }
    c
}

fn factorial(r: i64) -> i64 {
    (1..=r).product()
}

impl std::fmt::Debug for JetVectorField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "JetVectorField(n={}, K={}, {})",
            self.n,
            self.order,
            crate::render::field_to_string(&self.components)
        )
    }
}

impl std::fmt::Display for JetVectorField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&crate::render::field_to_string(&self.components))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, r: i64) -> CycRational {
        CycRational::from_frac(p, r)
    }

    fn var(j: usize, n: usize, k: u32) -> TruncSeries {
        TruncSeries::var(j, n, k)
    }

    fn field(c: Vec<TruncSeries>) -> JetVectorField {
        JetVectorField::new(c).unwrap()
    }

    /// (l x + m y)(x d/dx + y d/dy)
    fn radial_field(l: i64, m: i64, k: u32) -> JetVectorField {
        let f = &var(0, 2, k).scale(&l.into()) + &var(1, 2, k).scale(&m.into());
        field(vec![&f * &var(0, 2, k), &f * &var(1, 2, k)])
    }

    #[test]
    fn apply_examples() {
        let k = 4;
        let x = var(0, 1, k);
        let f = field(vec![x.pow(2)]);
        assert_eq!(f.apply(&x).unwrap(), x.pow(2));
        let euler = field(vec![var(0, 2, k), var(1, 2, k)]);
        let lin = &var(0, 2, k).scale(&3.into()) - &var(1, 2, k).scale(&q(1, 2));
        assert_eq!(euler.apply(&lin).unwrap(), lin);
        let (g, h) = (&var(0, 2, k) + &var(1, 2, k).pow(2), &var(1, 2, k) * &var(0, 2, k));
        let x2 = radial_field(2, -1, k);
        let lhs = x2.apply(&(&g * &h)).unwrap();
        let rhs = &(&x2.apply(&g).unwrap() * &h) + &(&g * &x2.apply(&h).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn bracket_examples() {
        let k = 5;
        let x = var(0, 1, k);
        let a = field(vec![x.clone()]);
        let b = field(vec![x.pow(2)]);
        assert_eq!(a.lie_bracket(&b).unwrap(), b);
        assert!(b.lie_bracket(&b).unwrap().is_zero());
        let r1 = radial_field(1, 2, k);
        let r2 = radial_field(-3, 1, k);
        assert!(r1.lie_bracket(&r2).unwrap().is_zero());
    }

    #[test]
    fn nilpotence() {
        let k = 3;
        let x = var(0, 1, k);
        assert!(field(vec![x.pow(2)]).is_nilpotent());
        assert!(!field(vec![x.clone()]).is_nilpotent());
        assert!(radial_field(1, 1, k).is_nilpotent());
    }

    #[test]
    fn exp_examples() {
        let k = 4;
        let x = var(0, 1, k);
        let phi = field(vec![x.pow(2)]).exp_nilpotent(&CycRational::one()).unwrap();
        let expected = &(&(&x + &x.pow(2)) + &x.pow(3)) + &x.pow(4);
        assert_eq!(phi.components(), &[expected]);
        let r = radial_field(2, 3, k);
        assert!(r.exp_nilpotent(&CycRational::zero()).unwrap().is_identity());
        assert_eq!(
            field(vec![x.clone()]).exp_nilpotent(&CycRational::one()).unwrap_err(),
            Error::NotNilpotent
        );
    }

    #[test]
    fn radial_flow_closed_form() {
        let k = 5;
        let (x, y) = (var(0, 2, k), var(1, 2, k));
        let lin = &x.scale(&2.into()) + &y.scale(&(-1).into());
        let inv = (&TruncSeries::one(2, k) - &lin).invert().unwrap();
        let phi = radial_field(2, -1, k).exp_nilpotent(&CycRational::one()).unwrap();
        assert_eq!(phi.components(), &[&x * &inv, &y * &inv]);
    }

    #[test]
    fn log_examples() {
        let k = 4;
        let x = var(0, 1, k);
        let geo = x.checked_div(&(&TruncSeries::one(1, k) - &x)).unwrap();
        let log = JetVectorField::log_unipotent(&JetDiffeo::new(vec![geo]).unwrap()).unwrap();
        assert_eq!(log, field(vec![x.pow(2)]));
        assert!(JetVectorField::log_unipotent(&JetDiffeo::identity(2, 3)).unwrap().is_zero());
        let dbl = JetDiffeo::new(vec![x.scale(&2.into())]).unwrap();
        assert_eq!(JetVectorField::log_unipotent(&dbl).unwrap_err(), Error::NotUnipotent);
    }

    #[test]
    fn log_of_exp_with_nilpotent_linear_part() {
        let k = 4;
        let (x, y) = (var(0, 2, k), var(1, 2, k));
        let f = field(vec![&y + &x.pow(2), &x * &y]);
        let phi = f.exp_nilpotent(&CycRational::one()).unwrap();
        assert_eq!(JetVectorField::log_unipotent(&phi).unwrap(), f);
    }

    #[test]
    fn one_parameter_law() {
        let k = 4;
        let (x, y) = (var(0, 2, k), var(1, 2, k));
        let phi = field(vec![&y.scale(&3.into()) + &(&x * &y), x.pow(2)])
            .exp_nilpotent(&CycRational::one())
            .unwrap();
        let (s, t) = (q(2, 3), q(-5, 4));
        let ps = JetVectorField::one_parameter(&phi, &s).unwrap();
        let pt = JetVectorField::one_parameter(&phi, &t).unwrap();
        assert_eq!(
            ps.compose(&pt).unwrap(),
            JetVectorField::one_parameter(&phi, &(&s + &t)).unwrap()
        );
        assert_eq!(JetVectorField::one_parameter(&phi, &CycRational::one()).unwrap(), phi);
        assert_eq!(
            JetVectorField::one_parameter(&phi, &(-1).into()).unwrap(),
            phi.invert().unwrap()
        );
    }

    #[test]
    fn pullback_examples() {
        let k = 4;
        let (x, y) = (var(0, 2, k), var(1, 2, k));
        let f = field(vec![&y + &x.pow(2), &x * &y]);
        assert_eq!(
            JetVectorField::pullback_field(&JetDiffeo::identity(2, k), &f).unwrap(),
            f
        );
        let a = Matrix::from_rows(vec![vec![2.into(), 1.into()], vec![1.into(), 1.into()]]).unwrap();
        let m = Matrix::from_rows(vec![vec![0.into(), 3.into()], vec![1.into(), (-2).into()]]).unwrap();
        let got = JetVectorField::pullback_field(
            &JetDiffeo::linear(&a, k).unwrap(),
            &JetVectorField::linear(&m, k).unwrap(),
        )
        .unwrap();
        let conj = &(&a.inverse().unwrap() * &m) * &a;
        assert_eq!(got, JetVectorField::linear(&conj, k).unwrap());

        let phi = radial_field(1, 2, k).exp_nilpotent(&CycRational::one()).unwrap();
        let psi = JetDiffeo::new(vec![&x + &y.pow(2), &y - &(&x * &y)]).unwrap();
        let lhs = JetVectorField::pullback_field(&psi.compose(&phi).unwrap(), &f).unwrap();
        let rhs = JetVectorField::pullback_field(
            &phi,
            &JetVectorField::pullback_field(&psi, &f).unwrap(),
        )
        .unwrap();
        assert_eq!(lhs, rhs);
        // Defining identity Y(g ∘ phi) = X(g) ∘ phi.
        let g = &x.pow(2) + &(&x * &y);
        let pulled = JetVectorField::pullback_field(&psi, &f).unwrap();
        assert_eq!(
            pulled.apply(&psi.pullback_function(&g).unwrap()).unwrap(),
            psi.pullback_function(&f.apply(&g).unwrap()).unwrap()
        );
    }

    #[test]
    fn dynkin_coefficients() {
        // log(e^A e^B) = A + B + 1/2 [A,B] + 1/12 [A,[A,B]] - 1/12 [B,[A,B]] + ...
        assert_eq!(dynkin_coefficient(&[false]), CycRational::one());
        assert_eq!(dynkin_coefficient(&[true]), CycRational::one());
        assert_eq!(dynkin_coefficient(&[false, true]), q(1, 4));
        assert_eq!(dynkin_coefficient(&[true, false]), q(-1, 4));
    }

    #[test]
    fn bch_examples() {
        let k = 6;
        let x = var(0, 1, k);
        let a = field(vec![x.pow(2)]);
        let b = field(vec![x.pow(3)]);
        assert_eq!(a.bch_dynkin(&JetVectorField::zero(1, k)).unwrap(), a);
        assert!(a.bch_dynkin(&a.scale(&(-1).into())).unwrap().is_zero());
        let one = CycRational::one();
        let composed = a
            .exp_nilpotent(&one)
            .unwrap()
            .compose(&b.exp_nilpotent(&one).unwrap())
            .unwrap();
        let z = a.bch_dynkin(&b).unwrap();
        assert_eq!(z, JetVectorField::log_unipotent(&composed).unwrap());
        let ab = a.lie_bracket(&b).unwrap();
        let prefix = a
            .checked_add(&b)
            .unwrap()
            .checked_sub(&ab.scale(&q(1, 2)))
            .unwrap()
            .checked_add(&a.lie_bracket(&ab).unwrap().scale(&q(1, 12)))
            .unwrap()
            .checked_sub(&b.lie_bracket(&ab).unwrap().scale(&q(1, 12)))
            .unwrap();
        // Vector-field brackets carry the opposite sign to the group-side ones,
        // hence -1/2 [a, b]. Beyond the third-order terms only [b,[a,[a,b]]]-type brackets remain, which vanish here.
        assert_eq!(z.components()[0].truncate(5), prefix.components()[0].truncate(5));
    }

    #[test]
    fn bch_rejects_non_nilpotent_algebra() {
        let k = 2;
        let (x, y) = (var(0, 2, k), var(1, 2, k));
        let a = field(vec![y.clone(), TruncSeries::zero(2, k)]);
        let b = field(vec![TruncSeries::zero(2, k), x.clone()]);
        assert!(matches!(a.bch_dynkin(&b), Err(Error::NonStabilization { .. })));
    }
}
