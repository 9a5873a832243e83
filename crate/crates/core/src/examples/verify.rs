//! Derived-length verification for G^2 and the tower groups G^n.
//!
//! G^2 is handled exactly by the `(H, V)` recursion. For G^(n+1) built over
//! G^n (length l), the lower bound comes from explicit commutator chains: with
//! drivers `d_j` known to lie in `(G^n)^(j)` and `theta_j = (d_j, x_(n+1))`,
//! `[theta_j^-1, chi_(1,b)] = chi_(1, Delta_j b)` and
//! `[theta_j^-1, chi_(a,0)] = chi_((a ∘ d_j)/a, 0)` push `chi` elements one
//! derived level down per step, and `[chi_(a,0), chi_(1,b)] = chi_(1,(a-1)b)`
//! gives a nontrivial element at level l + 1. The upper bound is structural:
//! `(G^n)^(l)` is trivial, so level l consists of `chi` maps, which form a
//! metabelian group.

use std::collections::HashSet;

use serde_json::{json, Value};

use crate::coeff::CycRational;
use crate::diffeo::JetDiffeo;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::matgroup::{closure_cap, commutator_scaling_check, derived_series_from_scaled, MatGroupDesc};
use crate::series::{Monomial, TruncSeries, MAX_ORDER};
use crate::vfield::JetVectorField;

use super::delta::delta_op;
use super::semidirect::{commutator_oracle, SemidirectElement, SemidirectSubgroup};
use super::tower::TowerElement;
use super::{l_group, l_scaled_generators, radial_field};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub level: usize,
    pub label: String,
    pub element: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub claim: String,
    pub expected: usize,
    pub computed: usize,
    pub order: u32,
    pub witnesses: Vec<Witness>,
    pub checks: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.expected == self.computed
    }

    pub fn status(&self) -> &'static str {
        if self.passed() {
            "verified"
        } else {
            "failed"
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "claim": self.claim,
            "expected": self.expected,
            "computed": self.computed,
            "status": self.status(),
            "K": self.order,
            "witnesses": self.witnesses.iter().map(|w| json!({
                "level": w.level,
                "label": w.label,
                "element": w.element,
            })).collect::<Vec<_>>(),
            "checks": self.checks,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}: expected {}, computed {} [{}] (K = {})\n",
            self.claim,
            self.expected,
            self.computed,
            self.status(),
            self.order
        );
        for c in &self.checks {
            out.push_str(&format!("  ok  {c}\n"));
        }
        for w in &self.witnesses {
            out.push_str(&format!("  level {} {}: {}\n", w.level, w.label, w.element));
        }
        out
    }
}

fn check(cond: bool, what: impl Into<String>) -> Result<String> {
    let what = what.into();
    if cond {
        Ok(what)
    } else {
        Err(Error::Verify(what))
    }
}

/// An element known to lie in the given derived subgroup.
#[derive(Clone, Debug)]
struct Known {
    level: usize,
    label: String,
    element: TowerElement,
}

/// Everything learned about one group of the tower.
struct Stage {
    n: usize,
    length: usize,
    knowns: Vec<Known>,
    report: Report,
}

/// Derived length of `{T ∘ phi_v : T in H, v in field^m}`.
pub fn semidirect_length(h: MatGroupDesc) -> Result<usize> {
    Ok(SemidirectSubgroup::full(h)?.derived_series()?.len() - 1)
}

fn vector_text(v: &[CycRational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn g2_stage(order: u32, spot_order: u32) -> Result<Stage> {
    let mut checks = Vec::new();
    let mut witnesses = Vec::new();
    let two = CycRational::from_int(2);

    // The finite linear part.
    let l = l_group();
    let l_series = l.derived_series_finite()?;
    let l_orders: Vec<usize> = l_series.iter().map(|g| g.order()).collect::<Result<_>>()?;
    checks.push(check(l_orders[0] == 48, format!("|L| = {}", l_orders[0]))?);
    checks.push(check(
        l_series.len() - 1 == 4,
        format!("derived length of L = {} (orders {:?})", l_series.len() - 1, l_orders),
    )?);
    let minus = Matrix::identity(2).scale(&CycRational::from_int(-1));
    let l3 = l_series[3].enumerate_closure()?;
    let mut pm = vec![Matrix::identity(2), minus.clone()];
    pm.sort();
    checks.push(check(l3 == pm, "L^(3) = {I, -I}")?);
    for k in 1..l_series.len() {
        checks.push(check(
            l_series[k].is_normal_in(&l_series[k - 1])?,
            format!("L^({k}) is normal in L^({})", k - 1),
        )?);
    }

    let scaled = l_scaled_generators();
    let route = derived_series_from_scaled(2, &scaled, closure_cap())?;
    let mut same = route.len() + 1 == l_series.len();
    for (a, b) in route.iter().zip(&l_series[1..]) {
        same &= a.enumerate_closure()? == b.enumerate_closure()?;
    }
    checks.push(check(same, "Q(i) scaled-generator route gives the same L^(1), L^(2), ...")?);
    let gens = l.generators();
    checks.push(check(
        commutator_scaling_check(&gens[0], &gens[1], &CycRational::sqrt2(), &CycRational::one())?,
        "[sqrt2 A, B] = [A, B]",
    )?);

    // The exact recursion.
    let s0 = SemidirectSubgroup::full(l)?;
    let series = s0.derived_series()?;
    let shape: Vec<(usize, usize)> = series.iter().map(|s| (s.h_order(), s.v_dim())).collect();
    checks.push(check(
        shape.len() == 6 && shape[4] == (1, 2) && shape[5] == (1, 0),
        format!("(|H_j|, dim V_j) along the derived series: {shape:?}; level 4 is N"),
    )?);

    // Sampled commutators against each derived step.
    for j in 0..series.len() - 1 {
        let s = &series[j];
        let size = s.h_order();
        let coeffs = [
            vec![CycRational::one(), CycRational::zero()],
            vec![CycRational::zero(), CycRational::one()],
            vec![CycRational::from_int(2), CycRational::from_int(-3)],
        ];
        let mut pairs = Vec::new();
        for i in 0..size.max(3) {
            let g = s.element(i, &coeffs[i % 3]);
            let h = s.element((i * 7 + 3) % size, &coeffs[(i + 1) % 3]);
            pairs.push((g, h));
        }
        let (inside, spanning) = commutator_oracle(&series[j + 1], &pairs)?;
        checks.push(check(
            inside && spanning,
            format!("sampled commutators of level {j} lie in and span level {}", j + 1),
        )?);
    }

    // Jet-level spot checks of the first two steps.
    for j in 0..2 {
        let s = &series[j];
        let samples = [(1usize, 2i64, 5usize, -1i64), (7, 1, 11, 3), (13, -2, 2, 1)];
        for &(i1, c1, i2, c2) in &samples {
            let g = s.element(i1, &[CycRational::from_int(c1), CycRational::one()]);
            let h = s.element(i2, &[CycRational::one(), CycRational::from_int(c2)]);
            let c = g.commutator(&h)?;
            let cj = g.to_jet(spot_order)?.group_commutator(&h.to_jet(spot_order)?)?;
            let back = SemidirectElement::from_jet(&cj)?;
            let psi = JetDiffeo::linear(&back.matrix().inverse()?, spot_order)?.compose(&cj)?;
            let log = JetVectorField::log_unipotent(&psi)?;
            let ok = back == c
                && series[j + 1].contains(&back)?
                && log == radial_field(back.vector(), spot_order)?;
            checks.push(check(
                ok,
                format!(
                    "jet commutator at level {j} is T ∘ phi_v with T in H_{}, log = (v.x)R, v = {} in V_{}",
                    j + 1,
                    vector_text(back.vector()),
                    j + 1
                ),
            )?);
        }
    }

    // Nontrivial element of level 4 as an explicit jet commutator of level-3 elements.
    let v = vec![CycRational::one(), CycRational::from_int(-1)];
    let neg = SemidirectElement::linear(minus.clone())?;
    let tr = SemidirectElement::translation(v.clone());
    let w = neg.to_jet(order)?.group_commutator(&tr.to_jet(order)?)?;
    let expected = SemidirectElement::translation(v.iter().map(|c| -&(c * &two)).collect());
    checks.push(check(
        w == expected.to_jet(order)? && !w.is_identity(),
        "[-Id, phi_v] = phi_(-2v) is a nontrivial element of level 4",
    )?);
    witnesses.push(Witness {
        level: 4,
        label: "[-Id, phi_(1,-1)]".into(),
        element: w.to_string(),
    });

    // Known members of each level, used as drivers by the next tower group.
    let mut candidates: Vec<(String, SemidirectElement)> = vec![("-Id".into(), neg)];
    for (j, s) in series.iter().enumerate().take(4) {
        let elements = s.h().elements().expect("enumerated");
        if let Some(t) = elements.iter().find(|t| !is_scalar(t)) {
            candidates.push((format!("T in L^({j}): {t}"), SemidirectElement::linear(t.clone())?));
        }
    }
    for e in 0..2 {
        let mut v = vec![CycRational::zero(); 2];
        v[e] = CycRational::one();
        candidates.push((format!("phi_{}", vector_text(&v)), SemidirectElement::translation(v)));
    }
    let mut knowns: Vec<Known> = Vec::new();
    for (label, g) in candidates {
        let level = (0..series.len())
            .rev()
            .find(|&j| series[j].contains(&g).unwrap_or(false))
            .expect("every candidate lies in G^2");
        if knowns.iter().any(|k| k.label == label) {
            continue;
        }
        knowns.push(Known {
            level,
            label,
            element: TowerElement::from_base(g.to_jet(order)?, 2),
        });
    }

    let length = series.len() - 1;
    Ok(Stage {
        n: 2,
        length,
        knowns,
        report: Report {
            claim: "derived length of G^2 = N x| L, with (G^2)^(4) = N".into(),
            expected: 5,
            computed: length,
            order,
            witnesses,
            checks,
        },
    })
}

fn is_scalar(t: &Matrix) -> bool {
    let c = &t[(0, 0)];
    *t == Matrix::identity(t.rows()).scale(c)
}

/// Verifies that G^2 has derived length 5, with jet spot checks at order K.
pub fn verify_g2(order: u32) -> Result<Report> {
    let stage = g2_stage(order, order)?;
    finish(stage.report)
}

fn finish(report: Report) -> Result<Report> {
    if report.passed() {
        Ok(report)
    } else {
        Err(Error::Verify(format!(
            "{}: expected {}, computed {}",
            report.claim, report.expected, report.computed
        )))
    }
}

fn normalize(f: &TruncSeries) -> TruncSeries {
    match f.terms().next() {
        Some((_, c)) => f.scale(&c.inv().expect("stored coefficients are nonzero")),
        None => f.clone(),
    }
}

struct Search<'a> {
    drivers: &'a [(usize, JetDiffeo)],
    length: usize,
    order: u32,
    /// Least total rise in vanishing order over the steps j..length.
    need: Vec<u32>,
    dead: HashSet<(usize, TruncSeries)>,
}

impl Search<'_> {
    /// Driver indices `d_j` (level of `d_j` at least j) such that
    /// `Delta_(d_(l-1)) ... Delta_(d_0) f` survives truncation.
    fn run(&mut self, level: usize, f: &TruncSeries) -> Result<Option<Vec<usize>>> {
        if level == self.length {
            return Ok(Some(Vec::new()));
        }
        if f.vanishing_order().unwrap_or(u32::MAX).saturating_add(self.need[level]) > self.order {
            return Ok(None);
        }
        let key = (level, f.clone());
        if self.dead.contains(&key) {
            return Ok(None);
        }
        let mut children: Vec<(usize, TruncSeries)> = Vec::new();
        for (idx, (lvl, d)) in self.drivers.iter().enumerate() {
            if *lvl < level {
                continue;
            }
            let g = delta_op(f, d)?;
            if g.is_zero() {
                continue;
            }
            let g = normalize(&g);
            if children.iter().any(|(_, h)| *h == g) {
                continue;
            }
            children.push((idx, g));
        }
        children.sort_by_key(|(_, g)| g.vanishing_order());
        for (idx, g) in children {
            if let Some(mut path) = self.run(level + 1, &g)? {
                path.insert(0, idx);
                return Ok(Some(path));
            }
        }
        self.dead.insert(key);
        Ok(None)
    }
}

/// Finds a seed monomial and driver path whose Delta chain is nonzero modulo
/// degree `search_order + 1`.
fn find_chain(
    knowns: &[Known],
    n: usize,
    length: usize,
    search_order: u32,
) -> Result<Option<(Monomial, Vec<usize>)>> {
    let drivers: Vec<(usize, JetDiffeo)> = knowns
        .iter()
        .map(|k| (k.level, k.element.flatten().truncate(search_order)))
        .collect();
    // Delta_d raises the vanishing order by at least ord(d - id) - 1.
    let rise: Vec<u32> = drivers.iter().map(|(_, d)| distance_order(d).saturating_sub(1)).collect();
    let mut need = vec![0u32; length + 1];
    for j in (0..length).rev() {
        let step = drivers
            .iter()
            .zip(&rise)
            .filter(|((lvl, _), _)| *lvl >= j)
            .map(|(_, r)| *r)
            .min()
            .unwrap_or(u32::MAX);
        need[j] = need[j + 1].saturating_add(step);
    }
    let mut search = Search {
        drivers: &drivers,
        length,
        order: search_order,
        need,
        dead: HashSet::new(),
    };
    for seed in Monomial::all(n, 1, search_order.min(3)) {
        let f = TruncSeries::monomial(seed, CycRational::one(), n, search_order);
        if let Some(path) = search.run(0, &f)? {
            return Ok(Some((seed, path)));
        }
    }
    Ok(None)
}

/// Lowest degree in which `d` differs from the identity (`u32::MAX` for the identity).
fn distance_order(d: &JetDiffeo) -> u32 {
    let id = JetDiffeo::identity(d.nvars(), d.order());
    d.components()
        .iter()
        .zip(id.components())
        .filter_map(|(a, b)| (a - b).vanishing_order())
        .min()
        .unwrap_or(u32::MAX)
}

fn extend_stage(prev: &Stage, order: u32) -> Result<Stage> {
    let n = prev.n;
    let m = n + 1;
    let ell = prev.length;
    let mut checks = Vec::new();
    let mut witnesses = Vec::new();

    let Some((seed, path)) = find_chain(&prev.knowns, n, ell, order / 2)? else {
        return Err(Error::WitnessDied {
            level: ell + 1,
            order,
        });
    };

    let one = TruncSeries::one(n, order);
    let zero = TruncSeries::zero(n, order);
    let mut b = TruncSeries::monomial(seed, CycRational::one(), n, order);
    let mut g = b.clone();
    let mut a = g.exp_series()?;
    let mut knowns: Vec<Known> = prev
        .knowns
        .iter()
        .map(|k| Known {
            level: k.level,
            label: k.label.clone(),
            element: k.element.lift(m),
        })
        .collect();
    let chi = |a: &TruncSeries, b: &TruncSeries| TowerElement::chi(2, a, b);

    for (j, &idx) in path.iter().enumerate() {
        let driver = &prev.knowns[idx];
        knowns.push(Known {
            level: j,
            label: format!("chi_(1,b_{j})"),
            element: chi(&one, &b)?,
        });
        knowns.push(Known {
            level: j,
            label: format!("chi_(a_{j},0)"),
            element: chi(&a, &zero)?,
        });
        let d = driver.element.flatten();
        let theta_inv = driver.element.lift(m).invert()?;

        let cb = theta_inv.commutator(&chi(&one, &b)?)?;
        let db = delta_op(&b, &d)?;
        if db.is_zero() {
            return Err(Error::WitnessDied { level: j + 1, order });
        }
        checks.push(check(
            cb == chi(&one, &db)?,
            format!("level {}: [theta^-1, chi_(1,b)] = chi_(1,Delta b) with theta from {}", j + 1, driver.label),
        )?);

        let ca = theta_inv.commutator(&chi(&a, &zero)?)?;
        let a_next = d.pullback_function(&a)?.checked_div(&a)?;
        let g_next = delta_op(&g, &d)?;
        checks.push(check(
            ca == chi(&a_next, &zero)? && a_next == g_next.exp_series()? && a_next.log_unit()? == g_next,
            format!("level {}: [theta^-1, chi_(e^g,0)] = chi_(e^(Delta g),0)", j + 1),
        )?);
        b = db;
        a = a_next;
        g = g_next;
    }

    let top_b = chi(&one, &b)?;
    let top_a = chi(&a, &zero)?;
    knowns.push(Known {
        level: ell,
        label: format!("chi_(1,b_{ell})"),
        element: top_b.clone(),
    });
    knowns.push(Known {
        level: ell,
        label: format!("chi_(a_{ell},0)"),
        element: top_a.clone(),
    });
    let w = top_a.commutator(&top_b)?;
    if w.is_identity() {
        return Err(Error::WitnessDied {
            level: ell + 1,
            order,
        });
    }
    let expected = chi(&one, &(&(&a - &one) * &b))?;
    checks.push(check(
        w == expected,
        format!("level {}: [chi_(a,0), chi_(1,b)] = chi_(1,(a-1)b) != id", ell + 1),
    )?);

    // Upper bound: level l lies in the chi subgroup, which is metabelian.
    let level_top: Vec<&Known> = knowns.iter().filter(|k| k.level >= ell).collect();
    checks.push(check(
        level_top.iter().all(|k| k.element.is_chi()),
        format!("every constructed element of level {ell} has identity base"),
    )?);
    let (wa, _) = w.top_layer().expect("layered");
    checks.push(check(wa.is_one(), "commutators of chi maps have a = 1")?);
    checks.push(check(
        top_b.commutator(&w)?.is_identity(),
        "chi_(1,b) maps commute",
    )?);
    knowns.push(Known {
        level: ell + 1,
        label: format!("chi_(1,(a_{ell}-1) b_{ell})"),
        element: w.clone(),
    });

    witnesses.push(Witness {
        level: ell,
        label: format!("chi_(1,b) from seed {} through {} commutators", TruncSeries::monomial(seed, CycRational::one(), n, order), ell),
        element: top_b.to_string(),
    });
    witnesses.push(Witness {
        level: ell + 1,
        label: "[chi_(a,0), chi_(1,b)]".into(),
        element: w.to_string(),
    });

    let length = ell + 2;
    Ok(Stage {
        n: m,
        length,
        knowns,
        report: Report {
            claim: format!("derived length of G^{m}"),
            expected: 2 * m + 1,
            computed: length,
            order,
            witnesses,
            checks,
        },
    })
}

/// Jet order for the G^2 spot checks inside [`verify_gn`].
const SPOT_ORDER: u32 = 6;

/// Verifies the derived length of G^n at a fixed order K.
pub fn verify_gn(n: usize, order: u32) -> Result<Report> {
    if !(2..=4).contains(&n) {
        return Err(Error::InvalidInput(format!("tower size {n} outside 2..=4")));
    }
    let mut stage = g2_stage(order, order.min(SPOT_ORDER))?;
    let mut checks = std::mem::take(&mut stage.report.checks);
    let mut witnesses = std::mem::take(&mut stage.report.witnesses);
    while stage.n < n {
        let mut next = extend_stage(&stage, order)?;
        checks.append(&mut next.report.checks);
        witnesses.append(&mut next.report.witnesses);
        stage = next;
    }
    stage.report.checks = checks;
    stage.report.witnesses = witnesses;
    finish(stage.report)
}

/// Default starting order for [`verify_gn_adaptive`].
pub fn default_order(n: usize) -> u32 {
    2 * (n.saturating_sub(2) as u32) + 4
}

/// [`verify_gn`] starting at `order`, retrying at `order + 2` while a
/// witness vanishes modulo the truncation.
pub fn verify_gn_adaptive(n: usize, order: u32) -> Result<Report> {
    let mut k = order;
    loop {
        match verify_gn(n, k) {
            Err(Error::WitnessDied { level, order }) if order + 2 <= MAX_ORDER => {
                let _ = level;
                k = order + 2;
            }
            other => return other,
        }
    }
}
