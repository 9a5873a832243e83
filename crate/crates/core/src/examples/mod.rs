//! The explicit solvable groups: the finite group L, the maps phi_v, the
//! semidirect product G^2 = N x| L, the difference operator Delta, and the
//! tower groups G^n.

pub mod delta;
pub mod semidirect;
pub mod tower;
pub mod verify;

use crate::coeff::CycRational;
use crate::diffeo::JetDiffeo;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::matgroup::MatGroupDesc;
use crate::series::TruncSeries;
use crate::vfield::JetVectorField;

pub use delta::{delta_op, delta_power, delta_power_expand, DeltaTable};
pub use semidirect::{SemidirectElement, SemidirectSubgroup};
pub use tower::TowerElement;
pub use verify::{verify_g2, verify_gn, verify_gn_adaptive, Report};

/// Generators of L: `diag(z8, z8^7)` and `1/2 [[1+i, -1+i], [1+i, 1-i]]`.
pub fn l_generators() -> Vec<Matrix> {
    let z = CycRational::zeta8();
    let z7 = z.pow(7).expect("nonzero");
    let i = CycRational::i();
    let one = CycRational::one();
    let half = CycRational::from_frac(1, 2);
    let a = Matrix::diag(&[z, z7]);
    let b = Matrix::from_rows(vec![
        vec![&one + &i, &i - &one],
        vec![&one + &i, &one - &i],
    ])
    .expect("square")
    .scale(&half);
    vec![a, b]
}

/// The same generators rescaled into Q(i): `diag(1+i, 1-i)` is `sqrt2` times the first.
pub fn l_scaled_generators() -> Vec<Matrix> {
    let i = CycRational::i();
    let one = CycRational::one();
    let mut gens = l_generators();
    gens[0] = Matrix::diag(&[&one + &i, &one - &i]);
    gens
}

pub fn l_group() -> MatGroupDesc {
    MatGroupDesc::new(2, l_generators()).expect("invertible generators")
}

/// `(x_1/(1 - v.x), ..., x_m/(1 - v.x))` at order K.
pub fn phi_vector(v: &[CycRational], order: u32) -> Result<JetDiffeo> {
    let m = v.len();
    if m == 0 {
        return Err(Error::InvalidInput("phi needs a nonempty vector".into()));
    }
    crate::series::check_shape(m, order)?;
    let mut lin = TruncSeries::zero(m, order);
    for (j, c) in v.iter().enumerate() {
        lin = &lin + &TruncSeries::var(j, m, order).scale(c);
    }
    let inv = (&TruncSeries::one(m, order) - &lin).invert()?;
    JetDiffeo::new((0..m).map(|j| &TruncSeries::var(j, m, order) * &inv).collect())
}

/// `phi_{l,m} = (x/(1 - (l x + m y)), y/(1 - (l x + m y)))`.
pub fn phi_closed_form(l: &CycRational, m: &CycRational, order: u32) -> Result<JetDiffeo> {
    phi_vector(&[l.clone(), m.clone()], order)
}

/// `(v.x) R` with `R = sum_j x_j d/dx_j`, the generator of `phi_v`.
pub fn radial_field(v: &[CycRational], order: u32) -> Result<JetVectorField> {
    let m = v.len();
    crate::series::check_shape(m, order)?;
    let mut lin = TruncSeries::zero(m, order);
    for (j, c) in v.iter().enumerate() {
        lin = &lin + &TruncSeries::var(j, m, order).scale(c);
    }
    JetVectorField::new((0..m).map(|j| &lin * &TruncSeries::var(j, m, order)).collect())
}

/// Reads `v` back from `phi_v`: the coefficient of `x_1 x_j` in the first component.
pub fn phi_parameters(phi: &JetDiffeo) -> Vec<CycRational> {
    let m = phi.nvars();
    (0..m)
        .map(|j| {
            let mono = crate::series::Monomial::var(0).mul(&crate::series::Monomial::var(j));
            phi.component(0).coeff(&mono)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> CycRational {
        CycRational::from_int(v)
    }

    #[test]
    fn l_has_48_elements() {
        let g = l_group();
        assert_eq!(g.order().unwrap(), 48);
        let z = CycRational::zeta8();
        let lhs = &(&CycRational::one() + &CycRational::i()) * &CycRational::sqrt2().inv().unwrap();
        assert_eq!(lhs, z);
    }

    #[test]
    fn phi_examples() {
        let k = 3;
        assert!(phi_closed_form(&q(0), &q(0), k).unwrap().is_identity());
        let (x, y) = (TruncSeries::var(0, 2, k), TruncSeries::var(1, 2, k));
        let phi = phi_closed_form(&q(1), &q(0), k).unwrap();
        assert_eq!(phi.component(0), &(&(&x + &x.pow(2)) + &x.pow(3)));
        assert_eq!(phi.component(1), &(&(&y + &(&x * &y)) + &(&x.pow(2) * &y)));
        assert_eq!(phi_parameters(&phi), vec![q(1), q(0)]);
    }

    #[test]
    fn phi_is_the_flow_of_the_radial_field() {
        let k = 5;
        let v = [q(2), CycRational::from_frac(-1, 3)];
        let flow = radial_field(&v, k).unwrap().exp_nilpotent(&CycRational::one()).unwrap();
        assert_eq!(flow, phi_vector(&v, k).unwrap());
        let w = [q(-1), q(4)];
        let sum = [&v[0] + &w[0], &v[1] + &w[1]];
        assert_eq!(
            phi_vector(&v, k).unwrap().compose(&phi_vector(&w, k).unwrap()).unwrap(),
            phi_vector(&sum, k).unwrap()
        );
    }
}
