//! Seeded random generators shared by the integration tests.
#![allow(dead_code)]

use jetgroups::{CycRational, JetDiffeo, JetVectorField, Matrix, Monomial, TruncSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(r: &mut TestRng) -> CycRational {
    CycRational::from_frac(r.gen_range(-3..=3), r.gen_range(1..=3))
}

pub fn nonzero_rational(r: &mut TestRng) -> CycRational {
    loop {
        let c = small_rational(r);
        if !c.is_zero() {
            return c;
        }
    }
}

/// Mostly rational, sometimes with an i or z8 part.
pub fn small_scalar(r: &mut TestRng) -> CycRational {
    let mut c = small_rational(r);
    if r.gen_bool(0.2) {
        c += &(&small_rational(r) * &CycRational::i());
    }
    if r.gen_bool(0.1) {
        c += &(&small_rational(r) * &CycRational::zeta8());
    }
    c
}

/// Random terms of degree `lo..=order` in the variables listed in `vars`.
pub fn series_in(
    r: &mut TestRng,
    vars: &[usize],
    n: usize,
    order: u32,
    lo: u32,
    density: f64,
) -> TruncSeries {
    let mut terms = Vec::new();
    for m in Monomial::all(vars.len(), lo, order) {
        if r.gen_bool(density) {
            let mut exps = vec![0u32; n];
            for (k, &v) in vars.iter().enumerate() {
                exps[v] = m.exp(k);
            }
            terms.push((Monomial::from_exps(&exps), small_scalar(r)));
        }
    }
    TruncSeries::from_terms(n, order, terms).unwrap()
}

pub fn random_series(r: &mut TestRng, n: usize, order: u32, lo: u32, density: f64) -> TruncSeries {
    let vars: Vec<usize> = (0..n).collect();
    series_in(r, &vars, n, order, lo, density)
}

pub fn strictly_upper(r: &mut TestRng, n: usize) -> Matrix {
    let vals: Vec<CycRational> = (0..n * n)
        .map(|k| {
            if k % n > k / n && r.gen_bool(0.7) {
                small_rational(r)
            } else {
                CycRational::zero()
            }
        })
        .collect();
    Matrix::from_fn(n, n, |i, j| vals[i * n + j].clone())
}

pub fn unit_upper(r: &mut TestRng, n: usize) -> Matrix {
    strictly_upper(r, n).checked_add(&Matrix::identity(n)).unwrap()
}

pub fn random_invertible(r: &mut TestRng, n: usize) -> Matrix {
    loop {
        let vals: Vec<i64> = (0..n * n).map(|_| r.gen_range(-2..=2)).collect();
        let m = Matrix::from_fn(n, n, |i, j| CycRational::from_int(vals[i * n + j]));
        if !m.det().is_zero() {
            return m;
        }
    }
}

fn add_higher(r: &mut TestRng, linear: Vec<TruncSeries>, density: f64) -> Vec<TruncSeries> {
    linear
        .into_iter()
        .map(|c| {
            let (n, order) = (c.nvars(), c.order());
            &c + &random_series(r, n, order, 2, density)
        })
        .collect()
}

fn density(n: usize) -> f64 {
    match n {
        1 => 0.6,
        2 => 0.3,
        _ => 0.12,
    }
}

/// Strictly upper triangular linear part plus random higher terms.
pub fn nilpotent_field(r: &mut TestRng, n: usize, order: u32) -> JetVectorField {
    let lin = JetVectorField::linear(&strictly_upper(r, n), order).unwrap();
    let comps = add_higher(r, lin.components().to_vec(), density(n));
    JetVectorField::new(comps).unwrap()
}

/// Unit upper triangular linear part plus random higher terms.
pub fn unipotent_jet(r: &mut TestRng, n: usize, order: u32) -> JetDiffeo {
    let lin = JetDiffeo::linear(&unit_upper(r, n), order).unwrap();
    JetDiffeo::new(add_higher(r, lin.components().to_vec(), density(n))).unwrap()
}

/// Random invertible linear part plus random higher terms.
pub fn invertible_jet(r: &mut TestRng, n: usize, order: u32) -> JetDiffeo {
    let lin = JetDiffeo::linear(&random_invertible(r, n), order).unwrap();
    JetDiffeo::new(add_higher(r, lin.components().to_vec(), density(n))).unwrap()
}
