//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//! Runs with `harness = false`; every comparison is exact equality.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use jetgroups::examples::{
    delta_op, delta_power, delta_power_expand, l_group, l_scaled_generators, verify,
    verify_g2, verify_gn_adaptive, SemidirectSubgroup,
};
use jetgroups::jetrep::JetOperator;
use jetgroups::matgroup::{closure_cap, commutator_scaling_check, derived_series_from_scaled, kolchin_flag};
use jetgroups::{CycRational, JetDiffeo, JetVectorField, Matrix, TruncSeries};
use rand::Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn exp_log_bijection() -> Outcome {
    let mut r = rng(1);
    for k in 0..200 {
        let n = 1 + k % 3;
        let order = 3 + ((k / 3) % 4) as u32;
        let x = nilpotent_field(&mut r, n, order);
        let phi = ok(x.exp_nilpotent(&CycRational::one()), "exp")?;
        let back = ok(JetVectorField::log_unipotent(&phi), "log")?;
        ensure!(back == x, "log(exp X) != X for X = {x}");

        let psi = unipotent_jet(&mut r, n, order);
        let y = ok(JetVectorField::log_unipotent(&psi), "log")?;
        let again = ok(y.exp_nilpotent(&CycRational::one()), "exp")?;
        ensure!(again == psi, "exp(log phi) != phi for phi = {psi}");
    }
    Ok("200 fields and 200 jets, n in 1..=3, K in 3..=6".into())
}

fn bch_matches_log_of_product() -> Outcome {
    let mut r = rng(2);
    let one = CycRational::one();
    for k in 0..50 {
        let (n, order) = match k % 5 {
            0 => (1, 4),
            1 => (1, 5),
            2 => (2, 3),
            3 => (2, 4),
            _ => (3, 3),
        };
        let x = nilpotent_field(&mut r, n, order);
        let y = nilpotent_field(&mut r, n, order);
        let z = ok(x.bch_dynkin(&y), "bch")?;
        let prod = ok(
            ok(x.exp_nilpotent(&one), "exp")?.compose(&ok(y.exp_nilpotent(&one), "exp")?),
            "compose",
        )?;
        let w = ok(JetVectorField::log_unipotent(&prod), "log")?;
        ensure!(z == w, "BCH mismatch for X = {x}, Y = {y}");
    }
    Ok("50 pairs".into())
}

fn jet_representation() -> Outcome {
    let mut r = rng(3);
    let (mut seen_uni, mut seen_non) = (0, 0);
    for k in 0..100 {
        let n = 1 + k % 3;
        let order = 2 + ((k / 3) % 3) as u32;
        let unipotent = k % 2 == 0;
        let make = |r: &mut TestRng| {
            if unipotent {
                unipotent_jet(r, n, order)
            } else {
                invertible_jet(r, n, order)
            }
        };
        let phi = make(&mut r);
        let psi = make(&mut r);
        let rp = JetOperator::represent_diffeo(&phi);
        let rq = JetOperator::represent_diffeo(&psi);
        ensure!(rp.check_dk_membership(), "representation of {phi} is not multiplicative");
        let comp = JetOperator::represent_diffeo(&ok(phi.compose(&psi), "compose")?);
        ensure!(comp == ok(rq.mul(&rp), "mul")?, "R(phi ∘ psi) != R(psi) R(phi)");
        ensure!(
            phi.is_unipotent() == rp.is_unipotent(),
            "unipotence differs between {phi} and its operator"
        );
        if phi.is_unipotent() {
            seen_uni += 1;
        } else {
            seen_non += 1;
        }
    }
    ensure!(seen_uni > 0 && seen_non > 0, "sample lacks one of the two unipotence classes");
    Ok(format!("100 jets ({seen_uni} unipotent, {seen_non} not)"))
}

/// `a(y,z) d/dx + c(z) d/dy` in three variables: every function of z is invariant.
fn triangular_field(r: &mut TestRng, order: u32) -> JetVectorField {
    let a = series_in(r, &[1, 2], 3, order, 1, 0.4);
    let c = series_in(r, &[2], 3, order, 1, 0.6);
    JetVectorField::new(vec![a, c, TruncSeries::zero(3, order)]).unwrap()
}

fn invariants_are_killed_by_log() -> Outcome {
    let mut r = rng(4);
    let one = CycRational::one();
    for k in 0..50 {
        let order = 3 + (k % 3) as u32;
        // A field commuting with Y: f(z) Y with f an invariant of Y.
        let y = triangular_field(&mut r, order);
        let f = &TruncSeries::constant(nonzero_rational(&mut r), 3, order)
            + &series_in(&mut r, &[2], 3, order, 1, 0.5);
        let x = JetVectorField::new(
            y.components()
                .iter()
                .map(|c| c * &f)
                .collect(),
        )
        .unwrap();
        let phi = ok(y.exp_nilpotent(&small_rational(&mut r)), "exp")?;
        ensure!(
            ok(JetVectorField::pullback_field(&phi, &x), "pullback")? == x,
            "constructed field is not invariant"
        );
        let l = ok(JetVectorField::log_unipotent(&phi), "log")?;
        ensure!(ok(l.lie_bracket(&x), "bracket")?.is_zero(), "[log phi, X] != 0");
    }
    for k in 0..50 {
        let order = 3 + (k % 3) as u32;
        // Product of two non-commuting flows, both fixing functions of z.
        let y1 = triangular_field(&mut r, order);
        let y2 = triangular_field(&mut r, order);
        let phi = ok(
            ok(y1.exp_nilpotent(&one), "exp")?.compose(&ok(y2.exp_nilpotent(&one), "exp")?),
            "compose",
        )?;
        let f = series_in(&mut r, &[2], 3, order, 1, 0.7);
        ensure!(ok(phi.pullback_function(&f), "pullback")? == f, "f ∘ phi != f");
        let l = ok(JetVectorField::log_unipotent(&phi), "log")?;
        ensure!(ok(l.apply(&f), "apply")?.is_zero(), "(log phi)(f) != 0");
    }
    Ok("50 invariant fields and 50 invariant functions".into())
}

fn finite_group_l() -> Outcome {
    let l = l_group();
    let elements = ok(l.enumerate_closure(), "closure")?;
    ensure!(elements.len() == 48, "|L| = {}", elements.len());
    let series = ok(l.derived_series_finite(), "derived series")?;
    ensure!(series.len() - 1 == 4, "derived length {}", series.len() - 1);
    let mut pm = vec![Matrix::identity(2), Matrix::identity(2).scale(&CycRational::from_int(-1))];
    pm.sort();
    ensure!(ok(series[3].enumerate_closure(), "closure")? == pm, "L^(3) != {{I, -I}}");
    let route = ok(derived_series_from_scaled(2, &l_scaled_generators(), closure_cap()), "scaled route")?;
    ensure!(route.len() == 4, "scaled route has {} derived terms", route.len());
    for (a, b) in route.iter().zip(&series[1..]) {
        ensure!(
            ok(a.enumerate_closure(), "closure")? == ok(b.enumerate_closure(), "closure")?,
            "scaled route disagrees"
        );
    }
    let g = l.generators();
    ensure!(
        ok(commutator_scaling_check(&g[0], &g[1], &CycRational::sqrt2(), &CycRational::i()), "scaling")?,
        "scaling check failed"
    );
    let orders: Vec<usize> = series.iter().map(|s| s.order().unwrap()).collect();
    Ok(format!("orders {orders:?}"))
}

fn g2_length() -> Outcome {
    let report = ok(verify_g2(4), "verify_g2")?;
    ensure!(report.computed == 5, "computed {}", report.computed);
    let series = ok(ok(SemidirectSubgroup::full(l_group()), "G^2")?.derived_series(), "series")?;
    let n = &series[4];
    ensure!(n.h_order() == 1 && n.v_dim() == 2, "(G^2)^(4) is not N");
    ensure!(series[5].is_trivial(), "(G^2)^(5) is not trivial");
    Ok(format!("length 5, {} checks", report.checks.len()))
}

fn tower_lengths() -> Outcome {
    let mut notes = Vec::new();
    for (n, expected, top) in [(3usize, 7usize, 6usize), (4, 9, 8)] {
        let t = Instant::now();
        let report = ok(verify_gn_adaptive(n, verify::default_order(n)), "verify_gn")?;
        ensure!(report.computed == expected, "G^{n}: computed {}", report.computed);
        ensure!(
            report.witnesses.iter().any(|w| w.level == top),
            "G^{n}: no witness at level {top}"
        );
        for needle in ["identity base", "a = 1", "maps commute"] {
            ensure!(
                report.checks.iter().any(|c| c.contains(needle)),
                "G^{n}: missing upper-bound check '{needle}'"
            );
        }
        ensure!(t.elapsed() < Duration::from_secs(300), "G^{n} took {:?}", t.elapsed());
        notes.push(format!("G^{n}: {expected} at K = {}", report.order));
    }
    Ok(notes.join(", "))
}

fn delta_calculus() -> Outcome {
    let mut r = rng(8);
    for k in 0..100 {
        let n = 1 + k % 3;
        let order = 3 + (k % 3) as u32;
        let f = random_series(&mut r, n, order, 0, 0.4);
        let g = random_series(&mut r, n, order, 0, 0.4);
        let phi = invertible_jet(&mut r, n, order);
        let (df, dg) = (ok(delta_op(&f, &phi), "delta")?, ok(delta_op(&g, &phi), "delta")?);
        let lhs = ok(delta_op(&(&f * &g), &phi), "delta")?;
        let rhs = &(&(&df * &dg) + &(&df * &g)) + &(&f * &dg);
        ensure!(lhs == rhs, "Leibniz rule fails");
    }
    for k in 1..=4 {
        let table = ok(delta_power_expand(k), "table")?;
        ensure!(table.all_positive(), "table for k = {k} has a nonpositive entry");
    }
    for k in 1..=3u32 {
        let table = ok(delta_power_expand(k), "table")?;
        let f = random_series(&mut r, 2, 4, 0, 0.5);
        let g = random_series(&mut r, 2, 4, 0, 0.5);
        let phi = invertible_jet(&mut r, 2, 4);
        let expanded = ok(table.evaluate(&f, &g, &phi), "evaluate")?;
        ensure!(
            expanded == ok(delta_power(&(&f * &g), &phi, k), "delta power")?,
            "expansion of Delta^{k}(fg) disagrees"
        );
    }
    // f polynomial of y-degree k over x, phi0 = (x, y + c x): Delta^(k+1) f = 0.
    for k in 1..=3u32 {
        for trial in 0..4 {
            let order = 2 * (k + 2);
            let c = nonzero_rational(&mut r);
            let x = TruncSeries::var(0, 2, order);
            let y = TruncSeries::var(1, 2, order);
            let phi0 = ok(JetDiffeo::new(vec![x.clone(), &y + &x.scale(&c)]), "jet")?;
            let lead = &TruncSeries::constant(nonzero_rational(&mut r), 2, order)
                + &series_in(&mut r, &[0], 2, 2, 1, 0.5).with_order(order);
            let mut f = &lead * &y.pow(k);
            for j in 0..k {
                f = &f + &(&series_in(&mut r, &[0], 2, 2, 0, 0.5).with_order(order) * &y.pow(j));
            }
            let dk = ok(delta_power(&f, &phi0, k), "delta power")?;
            ensure!(!dk.is_zero(), "Delta^{k} f vanished (trial {trial})");
            ensure!(ok(delta_power(&f, &phi0, k + 1), "delta power")?.is_zero(), "Delta^(k+1) f != 0");
            let c2k = ok(delta_power_expand(2 * k), "table")?.get(k, k);
            let lhs = ok(delta_power(&(&f * &f), &phi0, 2 * k), "delta power")?;
            let coeff = CycRational::from_bigint(c2k.into());
            ensure!(lhs == (&dk * &dk).scale(&coeff), "Delta^(2k)(f^2) != c (Delta^k f)^2 for k = {k}");
        }
    }
    Ok("100 Leibniz instances, tables k <= 4, 12 squaring instances".into())
}

fn kolchin_triangularizes() -> Outcome {
    let mut r = rng(9);
    for k in 0..30 {
        let m = 2 + k % 4;
        let q = random_invertible(&mut r, m);
        let qi = ok(q.inverse(), "inverse")?;
        let count = r.gen_range(1..=3);
        let mats: Vec<Matrix> = (0..count)
            .map(|_| q.checked_mul(&unit_upper(&mut r, m)).unwrap().checked_mul(&qi).unwrap())
            .collect();
        let p = ok(kolchin_flag(&mats), "kolchin")?;
        let pi = ok(p.inverse(), "P is singular")?;
        for u in &mats {
            let t = pi.checked_mul(u).unwrap().checked_mul(&p).unwrap();
            ensure!(t.is_upper_unitriangular(), "P^-1 U P = {t} is not unit upper triangular");
        }
    }
    Ok("30 conjugated sets, m in 2..=5".into())
}

fn one_parameter_groups() -> Outcome {
    let mut r = rng(10);
    for k in 0..100 {
        let n = 1 + k % 3;
        let order = 2 + ((k / 3) % 4) as u32;
        let phi = unipotent_jet(&mut r, n, order);
        let (s, t) = (small_rational(&mut r), small_rational(&mut r));
        let flow = |t: &CycRational| JetVectorField::one_parameter(&phi, t);
        let lhs = ok(ok(flow(&s), "flow")?.compose(&ok(flow(&t), "flow")?), "compose")?;
        ensure!(lhs == ok(flow(&(&s + &t)), "flow")?, "phi^s ∘ phi^t != phi^(s+t)");
        ensure!(ok(flow(&CycRational::one()), "flow")? == phi, "phi^1 != phi");
        ensure!(
            ok(flow(&CycRational::from_int(-1)), "flow")? == ok(phi.invert(), "invert")?,
            "phi^-1 != inverse"
        );
    }
    Ok("100 jets".into())
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 10] = [
        ("exp and log are inverse bijections", 60, exp_log_bijection),
        ("Dynkin series equals log(exp X ∘ exp Y)", 60, bch_matches_log_of_product),
        ("jet representation is multiplicative and reverses products", 30, jet_representation),
        ("logs annihilate invariant fields and functions", 30, invariants_are_killed_by_log),
        ("L has 48 elements, derived length 4, L^(3) = {I, -I}", 60, finite_group_l),
        ("G^2 has derived length 5 with (G^2)^(4) = N", 60, g2_length),
        ("G^3 and G^4 have derived lengths 7 and 9", 600, tower_lengths),
        ("Delta calculus identities", 60, delta_calculus),
        ("Kolchin flags triangularize unipotent sets", 60, kolchin_triangularizes),
        ("one-parameter groups of unipotent jets", 30, one_parameter_groups),
    ];
    let mut failures = 0;
    for (k, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > Duration::from_secs(*budget) => {
                Err(format!("took {elapsed:.1?}, budget {budget} s"))
            }
            o => o,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} [{detail}; {elapsed:.1?}]", k + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {}: {name} [{why}]", k + 1);
            }
        }
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
