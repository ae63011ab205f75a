//! Verification harness: coefficient-wise comparison of identity sides,
//! exhaustive bijection and parity checks, and structured reports.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{ak_product, Identity, Params, Registry, Side};
use crate::combinatorics::{
    enumerate_multipartitions, enumerate_set, satisfies, Element, FlatteningOrder, FrequencySequence, Members,
    MultiPartition, Parity, SetSpec,
};
use crate::error::{Error, Result};
use crate::motion::{
    lambda_inverse, lambda_traced, lambda_with_order, phi, phi_inverse, plus_map, ppm, ppm_explicit, tilde_lambda,
    tilde_lambda_direct, worked_example, MotionTrace, Stage,
};
use crate::qseries::{inverse_q_factorial, pochhammer_finite, PochSign, TruncatedSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// The smallest failing position of a check, with both observed values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub check: String,
    /// Exponent or weight; absent when the failure is not positional.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at: Option<i64>,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub subject: String,
    pub params: BTreeMap<String, i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_weight: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<Mismatch>,
    /// Number of individual comparisons made.
    pub checked: u64,
    pub failures: u64,
    pub elapsed_ms: u64,
}

impl Report {
    fn new(subject: impl Into<String>, params: BTreeMap<String, i64>) -> Self {
        Report {
            subject: subject.into(),
            params,
            order: None,
            set_order: None,
            max_weight: None,
            seed: None,
            status: Status::Pass,
            first_mismatch: None,
            checked: 0,
            failures: 0,
            elapsed_ms: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Zeroes the elapsed time so that output is reproducible byte for byte.
    pub fn without_timing(mut self) -> Self {
        self.elapsed_ms = 0;
        self
    }

    fn finish(mut self, tally: Tally, started: Instant) -> Self {
        self.checked = tally.checked;
        self.failures = tally.failures;
        self.status = if tally.failures == 0 {
            Status::Pass
        } else {
            Status::Fail
        };
        self.first_mismatch = tally.first;
        self.elapsed_ms = started.elapsed().as_millis() as u64;
        self
    }

    /// One-line human summary.
    pub fn line(&self) -> String {
        let params = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(",");
        let mut s = format!(
            "{} {} [{}] checked={}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.subject,
            params,
            self.checked
        );
        if let Some(m) = &self.first_mismatch {
            let at = m.at.map(|a| format!(" at {a}")).unwrap_or_default();
            s.push_str(&format!(" first mismatch: {}{at}: {} vs {}", m.check, m.left, m.right));
        }
        s
    }
}

fn int_params<'a>(pairs: impl IntoIterator<Item = (&'a str, i64)>) -> BTreeMap<String, i64> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn catalog_params(p: &Params) -> BTreeMap<String, i64> {
    p.names()
        .map(|n| (n.to_string(), p.get(n).unwrap_or(0) as i64))
        .collect()
}

/// Running count of checks and failures, keeping the failure at the
/// smallest position.
#[derive(Debug, Default)]
struct Tally {
    checked: u64,
    failures: u64,
    first: Option<Mismatch>,
}

impl Tally {
    fn check<L: Display, R: Display>(&mut self, ok: bool, check: &str, at: Option<i64>, left: L, right: R) {
        self.checked += 1;
        if !ok {
            self.fail(check, at, left, right);
        }
    }

    fn fail<L: Display, R: Display>(&mut self, check: &str, at: Option<i64>, left: L, right: R) {
        self.failures += 1;
        let better = match &self.first {
            None => true,
            Some(m) => match (at, m.at) {
                (Some(a), Some(b)) => a < b,
                (Some(_), None) => true,
                _ => false,
            },
        };
        if better {
            self.first = Some(Mismatch {
                check: check.to_string(),
                at,
                left: left.to_string(),
                right: right.to_string(),
            });
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        if let Some(m) = other.first {
            let before = self.failures;
            self.fail(&m.check, m.at, &m.left, &m.right);
            self.failures = before;
        }
        self.failures += other.failures;
    }
}

// ---------------------------------------------------------------------------
// Identities

/// Smallest exponent through `order` where the two series differ.
pub fn first_difference(a: &TruncatedSeries, b: &TruncatedSeries, order: usize) -> Option<i64> {
    let lo = a.min_exp().unwrap_or(0).min(b.min_exp().unwrap_or(0)).min(0);
    (lo..=order as i64).find(|&e| a.coefficient(e).ok() != b.coefficient(e).ok())
}

fn side_order(side: Side, order: usize, set_order: usize) -> usize {
    if side.is_enumerated() {
        set_order.min(order)
    } else {
        order
    }
}

/// Compares the requested sides pairwise through their common order. Set
/// sides are evaluated through `set_order` only. An empty `sides` means all.
pub fn verify_identity(
    id: &dyn Identity,
    params: &Params,
    order: usize,
    set_order: usize,
    sides: &[Side],
) -> Result<Report> {
    let started = Instant::now();
    id.validate(params)?;
    let sides: Vec<Side> = if sides.is_empty() {
        id.sides().to_vec()
    } else {
        sides.to_vec()
    };
    if let Some(s) = sides.iter().find(|s| !id.sides().contains(s)) {
        return Err(Error::usage(format!("{} has no {s} side", id.name())));
    }
    if sides.len() < 2 {
        return Err(Error::usage("at least two sides are needed"));
    }
    let values: Vec<(Side, usize, TruncatedSeries)> = sides
        .par_iter()
        .map(|&s| {
            let o = side_order(s, order, set_order);
            id.evaluate(s, params, o).map(|v| (s, o, v))
        })
        .collect::<Result<_>>()?;
    let mut report = Report::new(id.name(), catalog_params(params));
    report.order = Some(order);
    if sides.iter().any(|s| s.is_enumerated()) {
        report.set_order = Some(set_order.min(order));
    }
    let mut tally = Tally::default();
    for (i, (sa, oa, a)) in values.iter().enumerate() {
        for (sb, ob, b) in &values[i + 1..] {
            let through = *oa.min(ob);
            let check = format!("{sa} vs {sb}");
            match first_difference(a, b, through) {
                None => tally.check(true, &check, None, "", ""),
                Some(e) => tally.check(
                    false,
                    &check,
                    Some(e),
                    a.coefficient(e).map(|c| c.to_string()).unwrap_or_default(),
                    b.coefficient(e).map(|c| c.to_string()).unwrap_or_default(),
                ),
            }
        }
    }
    Ok(report.finish(tally, started))
}

/// A failing report for an instance whose evaluation raised an error.
fn error_report(subject: &str, params: BTreeMap<String, i64>, err: &Error) -> Report {
    let mut tally = Tally::default();
    tally.check(false, "evaluation", None, err, "");
    Report::new(subject, params).finish(tally, Instant::now())
}

/// Every valid parameter assignment with values at most `k_max`, for each
/// named identity (all when `names` is empty). Instances run in parallel and
/// come back in registry order, then parameter order.
pub fn sweep(reg: &Registry, names: &[&str], k_max: u32, order: usize, set_order: usize) -> Result<Vec<Report>> {
    let ids: Vec<&dyn Identity> = if names.is_empty() {
        reg.iter().collect()
    } else {
        names.iter().map(|n| reg.get(n)).collect::<Result<_>>()?
    };
    let instances: Vec<(&dyn Identity, Params)> = ids
        .iter()
        .flat_map(|id| id.grid(k_max).into_iter().map(move |p| (*id, p)))
        .collect();
    Ok(instances
        .par_iter()
        .map(|(id, p)| {
            verify_identity(*id, p, order, set_order, &[])
                .unwrap_or_else(|e| error_report(id.name(), catalog_params(p), &e))
        })
        .collect())
}

/// Compares one side of one identity with one side of another.
pub fn compare_sides(
    left: (&dyn Identity, Side),
    right: (&dyn Identity, Side),
    params: &Params,
    order: usize,
) -> Result<Report> {
    let started = Instant::now();
    let a = left.0.evaluate(left.1, params, order)?;
    let b = right.0.evaluate(right.1, params, order)?;
    let subject = format!("{}:{} = {}:{}", left.0.name(), left.1, right.0.name(), right.1);
    let mut report = Report::new(subject, catalog_params(params));
    report.order = Some(order);
    let mut tally = Tally::default();
    match first_difference(&a, &b, order) {
        None => tally.check(true, "series", None, "", ""),
        Some(e) => tally.check(
            false,
            "series",
            Some(e),
            a.coefficient(e).map(|c| c.to_string()).unwrap_or_default(),
            b.coefficient(e).map(|c| c.to_string()).unwrap_or_default(),
        ),
    }
    Ok(report.finish(tally, started))
}

/// `AK_{a,k} - AK_{a+1,k}` against the base-q² Ariki-Koike sum.
pub fn difference_law(reg: &Registry, k: u32, a: u32, order: usize) -> Result<Report> {
    let started = Instant::now();
    let cor2 = reg.get("ak-cor2")?;
    let modified = reg.get("ak-modified")?;
    let p = |a: u32| Params::new().with("k", k).with("a", a);
    let diff = cor2
        .evaluate(Side::Sum, &p(a), order)?
        .sub(&cor2.evaluate(Side::Sum, &p(a + 1), order)?)?;
    let target = modified.evaluate(Side::Sum, &p(a), order)?;
    let mut report = Report::new("difference-law", int_params([("k", k as i64), ("a", a as i64)]));
    report.order = Some(order);
    let mut tally = Tally::default();
    let at = first_difference(&diff, &target, order);
    tally.check(
        at.is_none(),
        "AK(a) - AK(a+1) vs modified",
        at,
        at.map(|e| diff.coefficient(e).unwrap_or_default()).unwrap_or_default(),
        at.map(|e| target.coefficient(e).unwrap_or_default())
            .unwrap_or_default(),
    );
    Ok(report.finish(tally, started))
}

/// Element-wise `W̄_{k,a} = W̄_{k,a-1}` for odd `a`.
pub fn wbar_collapse(k: u32, a: u32, max_weight: i64) -> Result<Report> {
    let started = Instant::now();
    if a.is_multiple_of(2) {
        return Err(Error::params(format!("the collapse needs odd a, got {a}")));
    }
    let upper = enumerate_set(&SetSpec::Wbar { k, a }, max_weight)?;
    let lower = enumerate_set(&SetSpec::Wbar { k, a: a - 1 }, max_weight)?;
    let mut report = Report::new("wbar-collapse", int_params([("k", k as i64), ("a", a as i64)]));
    report.max_weight = Some(max_weight);
    let mut tally = Tally::default();
    if let (Members::Sequences(x), Members::Sequences(y)) = (&upper, &lower) {
        tally.check(x.len() == y.len(), "cardinality", None, x.len(), y.len());
        for (f, g) in x.iter().zip(y) {
            tally.check(f == g, "member", Some(f.weight().min(g.weight())), f, g);
        }
    }
    Ok(report.finish(tally, started))
}

// ---------------------------------------------------------------------------
// Bijections

/// Weight caps for the individual parts of [`bijection_suite_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BijectionConfig {
    /// `Λ` round trips and `|X_n| = |Z_n|`.
    pub lambda_weight: i64,
    /// `φ` round trips between `Y` and `Z` at offset 0.
    pub phi_weight: i64,
    /// Shift invariance, by pair weight.
    pub shift_weight: i64,
    /// `Λ̃` on `O` against `B`.
    pub tilde_weight: i64,
    pub flattening: FlatteningOrder,
}

impl BijectionConfig {
    pub fn uniform(max_weight: i64) -> Self {
        BijectionConfig {
            lambda_weight: max_weight,
            phi_weight: max_weight,
            shift_weight: max_weight,
            tilde_weight: max_weight,
            flattening: FlatteningOrder::Standard,
        }
    }
}

/// [`bijection_suite_with`] with one weight cap for every part.
pub fn bijection_suite(j: u32, r: u32, k: u32, u: i64, max_weight: i64) -> Result<Report> {
    bijection_suite_with(j, r, k, u, BijectionConfig::uniform(max_weight))
}

/// Exhaustive bijection checks for `(j, r, k, u)`:
/// `Λ: X → Z` with its inverse, per-weight cardinalities, shift invariance,
/// and, at `u = 0`, `φ: Y → Z`. Warnaar's `Λ̃: O → B` depends on `(r, k)`
/// only and runs when `u = 0` and `j = 0`.
pub fn bijection_suite_with(j: u32, r: u32, k: u32, u: i64, cfg: BijectionConfig) -> Result<Report> {
    let started = Instant::now();
    SetSpec::Z { j, r, k, u }.validate()?;
    let mut report = Report::new(
        "bijection",
        int_params([("j", j as i64), ("r", r as i64), ("k", k as i64), ("u", u)]),
    );
    report.max_weight = Some(
        cfg.lambda_weight
            .max(cfg.phi_weight)
            .max(cfg.shift_weight)
            .max(cfg.tilde_weight),
    );
    let mut tally = Tally::default();
    check_lambda(j, r, k, u, cfg.lambda_weight, cfg.flattening, &mut tally)?;
    check_shift(j, r, k, u, cfg.shift_weight, &mut tally)?;
    if u == 0 {
        check_phi(j, r, k, cfg.phi_weight, &mut tally)?;
        if j == 0 {
            check_tilde(r, k, cfg.tilde_weight, &mut tally)?;
        }
    }
    Ok(report.finish(tally, started))
}

fn histogram(weights: impl IntoIterator<Item = i64>) -> BTreeMap<i64, u64> {
    let mut h = BTreeMap::new();
    for w in weights {
        *h.entry(w).or_insert(0) += 1;
    }
    h
}

fn compare_histograms(check: &str, x: &BTreeMap<i64, u64>, z: &BTreeMap<i64, u64>, tally: &mut Tally) {
    let keys: std::collections::BTreeSet<i64> = x.keys().chain(z.keys()).copied().collect();
    for w in keys {
        let (a, b) = (x.get(&w).copied().unwrap_or(0), z.get(&w).copied().unwrap_or(0));
        tally.check(a == b, check, Some(w), a, b);
    }
}

fn tuples(spec: &SetSpec, max_weight: i64) -> Result<Vec<crate::combinatorics::FramedTuple>> {
    match enumerate_set(spec, max_weight)? {
        Members::Tuples(v) => Ok(v),
        Members::Sequences(_) => Err(Error::usage(format!("{} is not a tuple family", spec.name()))),
    }
}

fn sequences(spec: &SetSpec, max_weight: i64) -> Result<Vec<FrequencySequence>> {
    match enumerate_set(spec, max_weight)? {
        Members::Sequences(v) => Ok(v),
        Members::Tuples(_) => Err(Error::usage(format!("{} is not a sequence family", spec.name()))),
    }
}

fn check_lambda(
    j: u32,
    r: u32,
    k: u32,
    u: i64,
    max_weight: i64,
    flattening: FlatteningOrder,
    tally: &mut Tally,
) -> Result<()> {
    let z_spec = SetSpec::Z { j, r, k, u };
    let xs = tuples(&SetSpec::X { j, r, k, u }, max_weight)?;
    let zs = sequences(&z_spec, max_weight)?;
    let forward: Vec<Tally> = xs
        .par_iter()
        .map(|x| {
            let mut t = Tally::default();
            let w = x.weight();
            match lambda_with_order(&x.bla, u, flattening) {
                Ok(f) => {
                    t.check(f.weight() == w, "Λ weight", Some(w), f.weight(), w);
                    let inside = satisfies(&z_spec, Element::Seq(&f)).unwrap_or(false);
                    t.check(inside, "Λ(X) ⊆ Z", Some(w), &f, "Z");
                    match lambda_inverse(&f, u, k) {
                        Ok(back) => t.check(back == x.bla, "Λ⁻¹∘Λ", Some(w), &back, &x.bla),
                        Err(e) => t.check(false, "Λ⁻¹∘Λ", Some(w), e, &x.bla),
                    }
                }
                Err(e) => t.check(false, "Λ defined", Some(w), e, &x.bla),
            }
            t
        })
        .collect();
    let backward: Vec<Tally> = zs
        .par_iter()
        .map(|f| {
            let mut t = Tally::default();
            let w = f.weight();
            match lambda_inverse(f, u, k) {
                Ok(bla) => {
                    let x_spec = SetSpec::X { j, r, k, u };
                    let frame = crate::motion::frame_for(&bla, u);
                    let inside = satisfies(&x_spec, Element::Tuple(&bla, &frame)).unwrap_or(false);
                    t.check(inside, "Λ⁻¹(Z) ⊆ X", Some(w), &bla, "X");
                    match lambda_with_order(&bla, u, flattening) {
                        Ok(g) => t.check(g == *f, "Λ∘Λ⁻¹", Some(w), &g, f),
                        Err(e) => t.check(false, "Λ∘Λ⁻¹", Some(w), e, f),
                    }
                }
                Err(e) => t.check(false, "Λ⁻¹ defined", Some(w), e, f),
            }
            t
        })
        .collect();
    forward.into_iter().chain(backward).for_each(|t| tally.merge(t));
    compare_histograms(
        "|X_n| = |Z_n|",
        &histogram(xs.iter().map(|x| x.weight())),
        &histogram(zs.iter().map(FrequencySequence::weight)),
        tally,
    );
    Ok(())
}

/// `Λ(bla⁺, fs_{u-1}) = Λ(bla, fs_u)` over every tuple, and `Λ` maps the
/// shifted family `{bla⁺ : bla ∈ X}` at offset `u - 1` onto `Z`.
fn check_shift(j: u32, r: u32, k: u32, u: i64, max_weight: i64, tally: &mut Tally) -> Result<()> {
    let all = enumerate_multipartitions(k, &vec![0; k as usize], false, max_weight, u);
    let results: Vec<Tally> = all
        .par_iter()
        .map(|(bla, frame)| {
            let mut t = Tally::default();
            let w = bla.weight() as i64 + frame.weight();
            let plus = plus_map(bla);
            let a = crate::motion::lambda(&plus, u - 1);
            let b = crate::motion::lambda(bla, u);
            t.check(a == b, "shift invariance", Some(w), &a, &b);
            t
        })
        .collect();
    results.into_iter().for_each(|t| tally.merge(t));
    let zs = sequences(&SetSpec::Z { j, r, k, u }, max_weight)?;
    let xs = tuples(&SetSpec::X { j, r, k, u }, max_weight)?;
    let mut images: Vec<FrequencySequence> = xs
        .iter()
        .map(|x| crate::motion::lambda(&plus_map(&x.bla), u - 1))
        .collect();
    images.sort();
    tally.check(images == zs, "Λ(shift X) = Z", None, images.len(), zs.len());
    Ok(())
}

fn check_phi(j: u32, r: u32, k: u32, max_weight: i64, tally: &mut Tally) -> Result<()> {
    let z_spec = SetSpec::Z { j, r, k, u: 0 };
    let y_spec = SetSpec::Y { j, r, k, u: 0 };
    let ys = sequences(&y_spec, max_weight)?;
    let zs = sequences(&z_spec, max_weight)?;
    for f in &ys {
        let w = f.weight();
        match phi(f, j, r) {
            Ok(g) => {
                t_in(tally, &z_spec, &g, "φ(Y) ⊆ Z", w);
                tally.check(g.weight() == w, "φ weight", Some(w), g.weight(), w);
                let back = phi_inverse(&g, j, r);
                tally.check(back.as_ref() == Ok(f), "φ⁻¹∘φ", Some(w), fmt_res(&back), f);
            }
            Err(e) => tally.check(false, "φ defined", Some(w), e, f),
        }
    }
    for g in &zs {
        let w = g.weight();
        match phi_inverse(g, j, r) {
            Ok(f) => {
                t_in(tally, &y_spec, &f, "φ⁻¹(Z) ⊆ Y", w);
                let again = phi(&f, j, r);
                tally.check(again.as_ref() == Ok(g), "φ∘φ⁻¹", Some(w), fmt_res(&again), g);
            }
            Err(e) => tally.check(false, "φ⁻¹ defined", Some(w), e, g),
        }
    }
    compare_histograms(
        "|Y_n| = |Z_n|",
        &histogram(ys.iter().map(FrequencySequence::weight)),
        &histogram(zs.iter().map(FrequencySequence::weight)),
        tally,
    );
    Ok(())
}

fn t_in(tally: &mut Tally, spec: &SetSpec, f: &FrequencySequence, check: &str, w: i64) {
    let inside = satisfies(spec, Element::Seq(f)).unwrap_or(false);
    tally.check(inside, check, Some(w), f, spec.name());
}

fn fmt_res(r: &Result<FrequencySequence>) -> String {
    match r {
        Ok(f) => f.to_string(),
        Err(e) => e.to_string(),
    }
}

fn check_tilde(r: u32, k: u32, max_weight: i64, tally: &mut Tally) -> Result<()> {
    let b_spec = SetSpec::B { r, k };
    let os = tuples(&SetSpec::O { r, k }, max_weight)?;
    let bs = sequences(&b_spec, max_weight)?;
    let mut images = Vec::with_capacity(os.len());
    for o in &os {
        let w = o.weight();
        let f = tilde_lambda(&o.bla, r, k)?;
        let direct = tilde_lambda_direct(&o.bla, r, k)?;
        tally.check(f == direct, "Λ̃ reduction = direct", Some(w), &f, &direct);
        tally.check(f.weight() == w, "Λ̃ weight", Some(w), f.weight(), w);
        t_in(tally, &b_spec, &f, "Λ̃(O) ⊆ B", w);
        images.push(f);
    }
    images.sort();
    let distinct = images.windows(2).all(|p| p[0] != p[1]);
    tally.check(distinct, "Λ̃ injective", None, images.len(), "distinct");
    compare_histograms(
        "|O_n| = |B_n|",
        &histogram(os.iter().map(|o| o.weight())),
        &histogram(bs.iter().map(FrequencySequence::weight)),
        tally,
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// Parity

/// Stage-wise parity lemma over every `k`-tuple with pair weight at most
/// `max_weight`: with `P` the parity condition attached to the offset `u`,
/// `P(θ^{(i+1)}) and λ_i even ⇔ P(θ^{(i)})`, in both directions, plus the
/// global consequence `P(Λ(bla)) ⇔ every part even`. The shifted form runs
/// the same check on `bla⁺` at offset `u - 1` with that offset's parity.
pub fn parity_suite(k: u32, u: i64, max_weight: i64) -> Result<Report> {
    parity_suite_with(k, u, max_weight, Some(Parity::for_offset(u)))
}

/// [`parity_suite`] with the checked condition overridden; `None` checks
/// no parity at all and stands for a dropped constraint.
pub fn parity_suite_with(k: u32, u: i64, max_weight: i64, parity: Option<Parity>) -> Result<Report> {
    let started = Instant::now();
    let mut report = Report::new("parity", int_params([("k", k as i64), ("u", u)]));
    report.max_weight = Some(max_weight);
    let holds = |f: &FrequencySequence| parity.is_none_or(|p| f.parity_holds(p));
    let shifted_parity = parity.map(|_| Parity::for_offset(u - 1));
    let all = enumerate_multipartitions(k, &vec![0; k as usize], false, max_weight, u);
    let tallies: Vec<Tally> = all
        .par_iter()
        .map(|(bla, frame)| {
            let mut t = Tally::default();
            let w = bla.weight() as i64 + frame.weight();
            let trace = lambda_traced(bla, u, false);
            stage_lemma(&trace, &holds, |st| st.part % 2 == 0, "", w, bla, &mut t);
            // Shifted form: bla⁺ at offset u - 1 under the parity of that offset.
            let shifted = lambda_traced(&plus_map(bla), u - 1, false);
            let holds_shifted = |f: &FrequencySequence| shifted_parity.is_none_or(|p| f.parity_holds(p));
            stage_lemma(
                &shifted,
                &holds_shifted,
                |st| st.part % 2 == 0,
                " (shifted)",
                w,
                bla,
                &mut t,
            );
            let all_even = bla.components().iter().all(|p| p.parts().iter().all(|x| x % 2 == 0));
            t.check(
                holds(trace.result()) == all_even,
                "parity of Λ",
                Some(w),
                trace.result(),
                bla,
            );
            t
        })
        .collect();
    let mut tally = Tally::default();
    tallies.into_iter().for_each(|t| tally.merge(t));
    Ok(report.finish(tally, started))
}

/// Both directions of `P(θ^{(i+1)}) and λ_i even ⇔ P(θ^{(i)})` at every stage.
fn stage_lemma(
    trace: &MotionTrace,
    holds: &dyn Fn(&FrequencySequence) -> bool,
    even: impl Fn(&Stage) -> bool,
    tag: &str,
    w: i64,
    bla: &MultiPartition,
    t: &mut Tally,
) {
    for stage in &trace.stages {
        let before = holds(trace.theta(stage.i + 1));
        let after = holds(&stage.after);
        let even = even(stage);
        if before && even {
            t.check(after, &format!("parity ⇒{tag}"), Some(w), &stage.after, bla);
        }
        if after {
            t.check(
                before && even,
                &format!("parity ⇐{tag}"),
                Some(w),
                trace.theta(stage.i + 1),
                bla,
            );
        }
    }
}

// ---------------------------------------------------------------------------
// Explicit motion

/// Exhaustive grid for comparing `ppm` with its closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MotionGrid {
    /// Length of the window `u..u+span` holding the support.
    pub span: usize,
    pub max_entry: u32,
    pub max_h: u32,
    pub max_m: u64,
}

impl Default for MotionGrid {
    fn default() -> Self {
        MotionGrid {
            span: 8,
            max_entry: 4,
            max_h: 4,
            max_m: 12,
        }
    }
}

/// `ppm_explicit ≡ ppm` on every admissible sequence of the grid at `u = 0`
/// and every `m ≤ max_m`, plus the pinned worked example.
pub fn explicit_motion_suite(grid: MotionGrid) -> Result<Report> {
    let started = Instant::now();
    let report = Report::new(
        "explicit-motion",
        int_params([
            ("span", grid.span as i64),
            ("maxEntry", grid.max_entry as i64),
            ("maxH", grid.max_h as i64),
            ("maxM", grid.max_m as i64),
        ]),
    );
    let mut seqs = Vec::new();
    let mut buf = vec![0u32; grid.span];
    admissible_windows(&grid, 0, &mut buf, &mut seqs);
    let tallies: Vec<Tally> = seqs
        .par_iter()
        .map(|f| {
            let mut t = Tally::default();
            for m in 0..=grid.max_m {
                compare_motion(f, 0, m, &mut t);
            }
            t
        })
        .collect();
    let mut tally = Tally::default();
    tallies.into_iter().for_each(|t| tally.merge(t));
    let (f, u, m) = worked_example();
    compare_motion(&f, u, m, &mut tally);
    let pinned = ppm(&f, u, m)?;
    let expected = (FrequencySequence::from_dense(1, vec![2, 1, 3, 1, 1, 3]), 5);
    tally.check(
        pinned == expected,
        "worked example",
        None,
        fmt_pair(&pinned),
        fmt_pair(&expected),
    );
    Ok(report.finish(tally, started))
}

fn fmt_pair(p: &(FrequencySequence, i64)) -> String {
    format!("{} focus {}", p.0, p.1)
}

fn compare_motion(f: &FrequencySequence, u: i64, m: u64, t: &mut Tally) {
    let sim = ppm(f, u, m);
    let closed = ppm_explicit(f, u, m);
    let show = |r: &Result<(FrequencySequence, i64)>| match r {
        Ok(p) => fmt_pair(p),
        Err(e) => e.to_string(),
    };
    t.check(
        sim.is_ok() && sim == closed,
        "ppm = closed form",
        Some(m as i64),
        show(&sim),
        show(&closed),
    );
}

/// Sequences on `0..span` of the form `(h, 0, ...)` with `1 ≤ h ≤ max_h` and
/// every later adjacent pair summing to at most `h`.
fn admissible_windows(grid: &MotionGrid, i: usize, buf: &mut Vec<u32>, out: &mut Vec<FrequencySequence>) {
    if i == buf.len() {
        out.push(FrequencySequence::from_dense(0, buf.clone()));
        return;
    }
    let range = match i {
        0 => 1..=grid.max_h,
        1 => 0..=0,
        _ => 0..=grid.max_entry.min(buf[0] - buf[i - 1].min(buf[0])),
    };
    for c in range {
        if i >= 2 && buf[i - 1] + c > buf[0] {
            continue;
        }
        buf[i] = c;
        admissible_windows(grid, i + 1, buf, out);
    }
    buf[i] = 0;
}

// ---------------------------------------------------------------------------
// Ring laws

fn random_series<R: Rng>(rng: &mut R, order: usize, unit: bool) -> TruncatedSeries {
    let coeffs: Vec<i64> = (0..=order)
        .map(|e| {
            if e == 0 && unit {
                if rng.gen_bool(0.5) {
                    1
                } else {
                    -1
                }
            } else {
                rng.gen_range(-50..=50)
            }
        })
        .collect();
    TruncatedSeries::from_coeffs(order, coeffs)
}

/// Commutative-ring laws, unit inverses and Pochhammer reciprocity on
/// seeded random series.
pub fn ring_law_suite(seed: u64, trials: usize, order: usize) -> Result<Report> {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new("ring-laws", int_params([("trials", trials as i64)]));
    report.order = Some(order);
    report.seed = Some(seed);
    let mut t = Tally::default();
    let zero = TruncatedSeries::zero(order);
    let one = TruncatedSeries::one(order);
    for trial in 0..trials {
        let at = Some(trial as i64);
        let a = random_series(&mut rng, order, false);
        let b = random_series(&mut rng, order, false);
        let c = random_series(&mut rng, order, false);
        let u = random_series(&mut rng, order, true);
        t.check(a.add(&b)? == b.add(&a)?, "a+b = b+a", at, &a, &b);
        t.check(a.mul(&b)? == b.mul(&a)?, "ab = ba", at, &a, &b);
        t.check(a.add(&b)?.add(&c)? == a.add(&b.add(&c)?)?, "(a+b)+c", at, &a, &c);
        t.check(a.mul(&b)?.mul(&c)? == a.mul(&b.mul(&c)?)?, "(ab)c", at, &a, &c);
        t.check(
            a.mul(&b.add(&c)?)? == a.mul(&b)?.add(&a.mul(&c)?)?,
            "a(b+c)",
            at,
            &a,
            &b,
        );
        t.check(a.add(&zero)? == a && a.mul(&one)? == a, "identities", at, &a, "");
        t.check(a.sub(&a)?.is_zero(), "a-a = 0", at, &a, "");
        t.check(u.mul(&u.inverse_unit()?)? == one, "u·u⁻¹ = 1", at, &u, "");
        let n = rng.gen_range(0..=order as u32);
        let b_step = rng.gen_range(1..=3);
        let poch = pochhammer_finite(PochSign::Pos, b_step, b_step, n, order);
        t.check(
            poch.mul(&inverse_q_factorial(b_step, n, order))? == one,
            "(q^b;q^b)_n / (q^b;q^b)_n = 1",
            at,
            n,
            b_step,
        );
    }
    Ok(report.finish(t, started))
}

// ---------------------------------------------------------------------------
// Mutations

/// Deliberate defects used to show the suites are not vacuous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// Ariki-Koike product with modulus `k + 3` instead of `k + 2`.
    AkModulus,
    /// The odd-parity set side of `main`, and the parity suite, without
    /// the parity condition.
    DropZoParity,
    /// `Λ` fed with the components in reverse order.
    SwapFlattening,
}

impl Mutation {
    pub const ALL: [Mutation; 3] = [Mutation::AkModulus, Mutation::DropZoParity, Mutation::SwapFlattening];

    pub fn name(self) -> &'static str {
        match self {
            Mutation::AkModulus => "ak-modulus",
            Mutation::DropZoParity => "drop-zo-parity",
            Mutation::SwapFlattening => "swap-flattening",
        }
    }
}

/// Wraps a registered identity and overrides one side.
struct Mutated<'a> {
    inner: &'a dyn Identity,
    side: Side,
    eval: fn(&Params, usize) -> Result<TruncatedSeries>,
}

impl Identity for Mutated<'_> {
    fn name(&self) -> &'static str {
        self.inner.name()
    }

    fn summary(&self) -> &'static str {
        "mutated"
    }

    fn param_names(&self) -> &'static [&'static str] {
        self.inner.param_names()
    }

    fn constraint(&self) -> &'static str {
        self.inner.constraint()
    }

    fn sides(&self) -> &'static [Side] {
        self.inner.sides()
    }

    fn check(&self, p: &Params) -> Result<()> {
        self.inner.check(p)
    }

    fn evaluate(&self, side: Side, p: &Params, order: usize) -> Result<TruncatedSeries> {
        if side == self.side {
            self.validate(p)?;
            (self.eval)(p, order)
        } else {
            self.inner.evaluate(side, p, order)
        }
    }
}

fn mutated_ak_product(p: &Params, order: usize) -> Result<TruncatedSeries> {
    let (k, a) = (p.get("k")? as i64, p.get("a")? as i64);
    ak_product(k, a, k + 3, order)
}

fn unrestricted_zo(p: &Params, order: usize) -> Result<TruncatedSeries> {
    let spec = SetSpec::Z {
        j: p.get("j")?,
        r: p.get("r")?,
        k: p.get("k")?,
        u: 0,
    };
    crate::combinatorics::weight_histogram(&spec, order)
}

/// Runs the suites affected by `m` with the defect in place.
pub fn mutation_suite(m: Mutation, reg: &Registry, k_max: u32, order: usize, max_weight: i64) -> Result<Vec<Report>> {
    let tag = |mut r: Report| {
        r.subject = format!("{} [{}]", r.subject, m.name());
        r
    };
    let reports = match m {
        Mutation::AkModulus => {
            let inner = reg.get("ak-binom")?;
            let id = Mutated {
                inner,
                side: Side::Product,
                eval: mutated_ak_product,
            };
            id.grid(k_max)
                .iter()
                .map(|p| verify_identity(&id, p, order, order, &[Side::Sum, Side::Product]))
                .collect::<Result<Vec<_>>>()?
        }
        Mutation::DropZoParity => {
            let inner = reg.get("main")?;
            let id = Mutated {
                inner,
                side: Side::SetZ,
                eval: unrestricted_zo,
            };
            let mut out = id
                .grid(k_max)
                .iter()
                .map(|p| verify_identity(&id, p, order, max_weight as usize, &[Side::Sum, Side::SetZ]))
                .collect::<Result<Vec<_>>>()?;
            for k in 1..=k_max {
                out.push(parity_suite_with(k, 0, max_weight, None)?);
            }
            out
        }
        Mutation::SwapFlattening => {
            let mut out = Vec::new();
            for k in 1..=k_max {
                for j in 0..=k {
                    for r in 0..=k - j {
                        let cfg = BijectionConfig {
                            phi_weight: 0,
                            shift_weight: 0,
                            tilde_weight: 0,
                            flattening: FlatteningOrder::ComponentsSwapped,
                            ..BijectionConfig::uniform(max_weight)
                        };
                        out.push(bijection_suite_with(j, r, k, 0, cfg)?);
                    }
                }
            }
            out
        }
    };
    Ok(reports.into_iter().map(tag).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Params {
        s.parse().unwrap()
    }

    #[test]
    fn main_instance_passes() {
        let reg = Registry::standard();
        let r = verify_identity(reg.get("main").unwrap(), &p("k=2,j=1,r=1"), 24, 12, &[]).unwrap();
        assert!(r.passed(), "{}", r.line());
        assert_eq!(r.checked, 10);
    }

    #[test]
    fn order_zero_is_trivial() {
        let reg = Registry::standard();
        let r = verify_identity(reg.get("even1").unwrap(), &p("k=2,a=1,b=0"), 0, 0, &[]).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn ak_modulus_mutation_fails_early() {
        let reg = Registry::standard();
        let reports = mutation_suite(Mutation::AkModulus, &reg, 2, 20, 0).unwrap();
        for r in &reports {
            assert!(!r.passed(), "{}", r.line());
            let k = r.params["k"];
            assert!(r.first_mismatch.as_ref().unwrap().at.unwrap() <= 2 * k + 4);
        }
    }

    #[test]
    fn other_mutations_are_detected() {
        let reg = Registry::standard();
        for m in [Mutation::DropZoParity, Mutation::SwapFlattening] {
            let reports = mutation_suite(m, &reg, 2, 12, 10).unwrap();
            assert!(reports.iter().any(|r| !r.passed()), "{}", m.name());
        }
    }

    #[test]
    fn undefined_side_is_usage_error() {
        let reg = Registry::standard();
        let e = verify_identity(reg.get("rr").unwrap(), &p("a=0"), 5, 5, &[Side::Sum, Side::SetZ]);
        assert!(matches!(e, Err(Error::Usage(_))));
    }

    #[test]
    fn small_bijection_suite() {
        let r = bijection_suite(1, 0, 2, 0, 10).unwrap();
        assert!(r.passed(), "{}", r.line());
        assert!(r.checked > 0);
        assert!(bijection_suite(0, 0, 1, 0, 0).unwrap().passed());
    }

    #[test]
    fn small_parity_suite() {
        for u in -1..=1 {
            let r = parity_suite(2, u, 8).unwrap();
            assert!(r.passed(), "{}", r.line());
        }
    }

    #[test]
    fn odd_part_breaks_parity() {
        let bla: MultiPartition = "4,2;3".parse().unwrap();
        let f = crate::motion::lambda(&bla, 0);
        assert!(!f.parity_holds(Parity::for_offset(0)));
        let even: MultiPartition = "4,2;2".parse().unwrap();
        assert!(crate::motion::lambda(&even, 0).parity_holds(Parity::for_offset(0)));
    }

    #[test]
    fn small_motion_grid() {
        let grid = MotionGrid {
            span: 5,
            max_entry: 3,
            max_h: 3,
            max_m: 6,
        };
        let r = explicit_motion_suite(grid).unwrap();
        assert!(r.passed(), "{}", r.line());
    }

    #[test]
    fn ring_laws_are_deterministic() {
        let a = ring_law_suite(7, 5, 12).unwrap().without_timing();
        let b = ring_law_suite(7, 5, 12).unwrap().without_timing();
        assert!(a.passed());
        assert_eq!(a, b);
    }

    #[test]
    fn report_json_shape() {
        let r = ring_law_suite(1, 1, 4).unwrap().without_timing();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["status"], "pass");
        assert_eq!(v["elapsedMs"], 0);
        assert!(v.get("firstMismatch").is_none());
    }
}
