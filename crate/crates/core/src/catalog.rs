//! The identity catalog. Every identity is a value behind the [`Identity`]
//! trait, registered by name in a [`Registry`]; each exposes its sides
//! (multisum, product, alternative forms and enumerated sets) as truncated
//! series.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::combinatorics::{weight_histogram, SetSpec};
use crate::error::{Error, Result};
use crate::qseries::{
    inverse_q_factorial, pochhammer_finite, pochhammer_infinite, qbinomial, PochSign, TruncatedSeries,
};

/// One side of an identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Side {
    #[serde(rename = "sum")]
    Sum,
    #[serde(rename = "product")]
    Product,
    /// A second analytic expression equal to the sum side.
    #[serde(rename = "alt")]
    Alt,
    /// Direct enumeration of the frequency-sequence family.
    #[serde(rename = "set-Z")]
    SetZ,
    /// Enumeration of multipartitions inserted into frames.
    #[serde(rename = "set-X")]
    SetX,
    /// Enumeration of the family with a restricted first entry.
    #[serde(rename = "set-Y")]
    SetY,
    /// Right-hand side of a splitting relation between set families.
    #[serde(rename = "split")]
    Split,
}

impl Side {
    pub const ALL: [Side; 7] = [
        Side::Sum,
        Side::Product,
        Side::Alt,
        Side::SetZ,
        Side::SetX,
        Side::SetY,
        Side::Split,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Side::Sum => "sum",
            Side::Product => "product",
            Side::Alt => "alt",
            Side::SetZ => "set-Z",
            Side::SetX => "set-X",
            Side::SetY => "set-Y",
            Side::Split => "split",
        }
    }

    /// Set sides are enumerated, so they are evaluated to a smaller order.
    pub fn is_enumerated(self) -> bool {
        matches!(self, Side::SetZ | Side::SetX | Side::SetY | Side::Split)
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Side::ALL
            .into_iter()
            .find(|side| side.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::usage(format!("unknown side '{s}'")))
    }
}

/// Named integer parameters, e.g. `k=3,j=1,r=1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Params(BTreeMap<String, u32>);

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: u32) -> Self {
        self.set(name, value);
        self
    }

    pub fn set(&mut self, name: &str, value: u32) {
        self.0.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Result<u32> {
        self.0
            .get(name)
            .copied()
            .ok_or_else(|| Error::usage(format!("missing parameter {name}")))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{name}={v}")?;
        }
        Ok(())
    }
}

impl FromStr for Params {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Params::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| Error::usage(format!("expected name=value, got '{item}'")))?;
            let value = value
                .trim()
                .parse()
                .map_err(|_| Error::usage(format!("parameter {name} must be a non-negative integer")))?;
            p.set(name.trim(), value);
        }
        Ok(p)
    }
}

/// A catalogued identity: a set of sides that should agree coefficient-wise.
pub trait Identity: Send + Sync {
    fn name(&self) -> &'static str;

    /// One-line description.
    fn summary(&self) -> &'static str;

    fn param_names(&self) -> &'static [&'static str];

    /// Human-readable parameter constraint.
    fn constraint(&self) -> &'static str;

    fn sides(&self) -> &'static [Side];

    /// Constraint check, assuming exactly the declared parameters are present.
    fn check(&self, p: &Params) -> Result<()>;

    /// Evaluates one side through `order`.
    fn evaluate(&self, side: Side, p: &Params, order: usize) -> Result<TruncatedSeries>;

    /// Full validation: declared parameter names, then the constraint.
    fn validate(&self, p: &Params) -> Result<()> {
        for name in p.names() {
            if !self.param_names().contains(&name) {
                return Err(Error::usage(format!("{} takes no parameter {name}", self.name())));
            }
        }
        for name in self.param_names() {
            p.get(name)?;
        }
        self.check(p).map_err(|e| match e {
            Error::InvalidParams(msg) => Error::params(format!("{}: {msg}", self.name())),
            other => other,
        })
    }

    /// Every valid assignment with all parameters at most `k_max`.
    fn grid(&self, k_max: u32) -> Vec<Params> {
        let names = self.param_names();
        let mut out = Vec::new();
        let mut values = vec![0u32; names.len()];
        loop {
            let p = names.iter().zip(&values).fold(Params::new(), |p, (n, v)| p.with(n, *v));
            if self.validate(&p).is_ok() {
                out.push(p);
            }
            let mut i = 0;
            loop {
                if i == values.len() {
                    return out;
                }
                if values[i] < k_max {
                    values[i] += 1;
                    break;
                }
                values[i] = 0;
                i += 1;
            }
        }
    }
}

/// Registry entry whose behaviour is given by plain functions.
struct Formula {
    name: &'static str,
    summary: &'static str,
    params: &'static [&'static str],
    constraint: &'static str,
    sides: &'static [Side],
    check: fn(&Params) -> Result<()>,
    eval: fn(Side, &Params, usize) -> Result<TruncatedSeries>,
}

impl Identity for Formula {
    fn name(&self) -> &'static str {
        self.name
    }

    fn summary(&self) -> &'static str {
        self.summary
    }

    fn param_names(&self) -> &'static [&'static str] {
        self.params
    }

    fn constraint(&self) -> &'static str {
        self.constraint
    }

    fn sides(&self) -> &'static [Side] {
        self.sides
    }

    fn check(&self, p: &Params) -> Result<()> {
        (self.check)(p)
    }

    fn evaluate(&self, side: Side, p: &Params, order: usize) -> Result<TruncatedSeries> {
        self.validate(p)?;
        if !self.sides.contains(&side) {
            return Err(Error::usage(format!("{} has no {side} side", self.name)));
        }
        let s = (self.eval)(side, p, order)?;
        if s.min_exp().is_some_and(|e| e < 0) {
            return Err(Error::domain(format!(
                "{} {side} side kept a negative exponent",
                self.name
            )));
        }
        Ok(s)
    }
}

/// Serializable description of a registered identity.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityInfo {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: &'static [&'static str],
    pub constraint: &'static str,
    pub sides: Vec<&'static str>,
}

/// Name-indexed collection of identities.
pub struct Registry {
    entries: Vec<Box<dyn Identity>>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry { entries: Vec::new() }
    }

    /// Replaces any entry with the same name.
    pub fn register(&mut self, id: Box<dyn Identity>) {
        self.entries.retain(|e| e.name() != id.name());
        self.entries.push(id);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Identity> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
            .ok_or_else(|| Error::usage(format!("unknown identity '{name}'")))
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Identity> {
        self.entries.iter().map(|e| e.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn describe(&self) -> Vec<IdentityInfo> {
        self.iter()
            .map(|e| IdentityInfo {
                name: e.name(),
                summary: e.summary(),
                params: e.param_names(),
                constraint: e.constraint(),
                sides: e.sides().iter().map(|s| s.name()).collect(),
            })
            .collect()
    }

    /// All catalogued identities.
    pub fn standard() -> Self {
        let mut reg = Registry::empty();
        for f in standard_formulas() {
            reg.register(Box::new(f));
        }
        reg
    }
}

impl Default for Registry {
    fn default() -> Self {
        Registry::standard()
    }
}

// ---------------------------------------------------------------------------
// Summation machinery

/// Largest `s_1` that can contribute through `order` for a `vars`-fold
/// multisum: the exponent is at least `s_1² - 2 s_1 - (vars - 1)`.
pub fn summation_bound(vars: usize, order: usize) -> u32 {
    let mut s: i64 = 0;
    while (s + 1) * (s + 1) - 2 * (s + 1) - (vars as i64 - 1) <= order as i64 {
        s += 1;
    }
    s as u32
}

/// Largest `n` with `n(n+1)/2 ≤ order`.
pub fn triangular_bound(order: usize) -> u32 {
    let mut n: u64 = 0;
    while (n + 1) * (n + 2) / 2 <= order as u64 {
        n += 1;
    }
    n as u32
}

fn tri(n: i64) -> i64 {
    n * (n + 1) / 2
}

type ExtraFactor<'a> = Box<dyn Fn(&[i64], usize) -> Result<TruncatedSeries> + 'a>;
type ExponentFn<'a> = Box<dyn Fn(&[i64]) -> i64 + 'a>;

/// `Σ_{s_1 ≥ ... ≥ s_k ≥ 0} q^{e(s)} · extra(s) / ∏ (q^b; q^b)_{s_i - s_{i+1}}`,
/// where the last denominator uses `last_base`.
pub struct Multisum<'a> {
    pub vars: usize,
    pub base: u32,
    pub last_base: u32,
    pub exponent: ExponentFn<'a>,
    pub extra: Option<ExtraFactor<'a>>,
}

impl<'a> Multisum<'a> {
    pub fn new(vars: usize, base: u32, exponent: impl Fn(&[i64]) -> i64 + 'a) -> Self {
        Multisum {
            vars,
            base,
            last_base: base,
            exponent: Box::new(exponent),
            extra: None,
        }
    }

    pub fn last_base(mut self, b: u32) -> Self {
        self.last_base = b;
        self
    }

    pub fn extra(mut self, f: impl Fn(&[i64], usize) -> Result<TruncatedSeries> + 'a) -> Self {
        self.extra = Some(Box::new(f));
        self
    }

    pub fn evaluate(&self, order: usize) -> Result<TruncatedSeries> {
        self.evaluate_capped(order, summation_bound(self.vars, order))
    }

    /// Sums only the tuples with `s_1 ≤ cap`.
    pub fn evaluate_capped(&self, order: usize, cap: u32) -> Result<TruncatedSeries> {
        let mut tuples = Vec::new();
        let mut buf = vec![0i64; self.vars];
        collect_descending(&mut buf, 0, cap as i64, &mut |s| {
            let e = (self.exponent)(s);
            if e <= order as i64 {
                tuples.push((s.to_vec(), e));
            }
        });
        // Summands may start below q^0; work with enough headroom that the
        // shifted terms stay exact through `order`.
        let slack = tuples.iter().map(|(_, e)| (-e).max(0)).max().unwrap_or(0) as usize;
        let work = order + slack;
        let mut acc = TruncatedSeries::zero(work);
        for (s, e) in &tuples {
            let mut term = TruncatedSeries::one(work);
            for i in 0..self.vars {
                let next = s.get(i + 1).copied().unwrap_or(0);
                let b = if i + 1 == self.vars { self.last_base } else { self.base } as i64;
                for t in 1..=(s[i] - next) {
                    if t * b <= work as i64 {
                        term.div_one_minus_in_place((t * b) as usize);
                    }
                }
            }
            if let Some(extra) = &self.extra {
                term = term.mul(&extra(s, work)?)?;
            }
            acc = acc.add(&term.monomial_shift(&BigInt::one(), *e))?;
        }
        acc.truncate(order)
    }
}

fn collect_descending(buf: &mut [i64], i: usize, cap: i64, visit: &mut dyn FnMut(&[i64])) {
    if i == buf.len() {
        visit(buf);
        return;
    }
    for v in 0..=cap {
        buf[i] = v;
        collect_descending(buf, i + 1, v, visit);
    }
}

/// `s_i` for `1 ≤ i ≤ k`, zero outside.
fn at(s: &[i64], i: i64) -> i64 {
    if i >= 1 && i as usize <= s.len() {
        s[i as usize - 1]
    } else {
        0
    }
}

fn squares(s: &[i64]) -> i64 {
    s.iter().map(|x| x * x).sum()
}

/// `s_lo + s_{lo+step} + ...` up to `hi`.
fn stepped(s: &[i64], lo: i64, hi: i64, step: usize) -> i64 {
    if lo > hi {
        return 0;
    }
    (lo..=hi).step_by(step).map(|i| at(s, i)).sum()
}

fn span(s: &[i64], lo: i64, hi: i64) -> i64 {
    stepped(s, lo, hi, 1)
}

// ---------------------------------------------------------------------------
// Product machinery

fn poch_inf(sign: PochSign, m: i64, b: i64, order: usize) -> Result<TruncatedSeries> {
    pochhammer_infinite(sign, m, b as u32, order)
}

/// `(q^x, q^y, q^z; q^z)_∞`. A zero exponent gives the factor `1 - 1 = 0`.
pub fn triple(x: i64, y: i64, z: i64, order: usize) -> Result<TruncatedSeries> {
    if x < 0 || y < 0 || z <= 0 {
        return Err(Error::domain(format!(
            "triple product ({x}, {y}, {z}) has a negative exponent"
        )));
    }
    if x == 0 || y == 0 {
        return Ok(TruncatedSeries::zero(order));
    }
    poch_inf(PochSign::Pos, x, z, order)?
        .mul(&poch_inf(PochSign::Pos, y, z, order)?)?
        .mul(&poch_inf(PochSign::Pos, z, z, order)?)
}

fn sum_all(order: usize, terms: impl IntoIterator<Item = Result<TruncatedSeries>>) -> Result<TruncatedSeries> {
    terms
        .into_iter()
        .try_fold(TruncatedSeries::zero(order), |acc, t| acc.add(&t?))
}

fn div(num: &TruncatedSeries, den: &TruncatedSeries) -> Result<TruncatedSeries> {
    num.mul(&den.inverse_unit()?)
}

fn q_shift(s: &TruncatedSeries) -> TruncatedSeries {
    s.monomial_shift(&BigInt::one(), 1)
}

/// `(-q^m; q²)_∞ / (q²; q²)_∞`.
fn neg_over_q2(m: i64, order: usize) -> Result<TruncatedSeries> {
    div(
        &poch_inf(PochSign::Neg, m, 2, order)?,
        &poch_inf(PochSign::Pos, 2, 2, order)?,
    )
}

/// `1 / (q; q)_∞`.
fn over_q(order: usize) -> Result<TruncatedSeries> {
    poch_inf(PochSign::Pos, 1, 1, order)?.inverse_unit()
}

/// `(q^{a+1}, q^{k+1-a}, q^z; q^z)_∞ / ((q)_∞ (q; q²)_∞)`; the identity
/// itself has `z = k + 2`.
pub fn ak_product(k: i64, a: i64, modulus: i64, order: usize) -> Result<TruncatedSeries> {
    let den = poch_inf(PochSign::Pos, 1, 1, order)?.mul(&poch_inf(PochSign::Pos, 1, 2, order)?)?;
    div(&triple(a + 1, k + 1 - a, modulus, order)?, &den)
}

/// `1 / ((q²; q²)_∞ (q²; q⁴)_∞)`.
fn over_q2_q2q4(order: usize) -> Result<TruncatedSeries> {
    poch_inf(PochSign::Pos, 2, 2, order)?
        .mul(&poch_inf(PochSign::Pos, 2, 4, order)?)?
        .inverse_unit()
}

// ---------------------------------------------------------------------------
// Parameter helpers

fn get(p: &Params, name: &str) -> Result<i64> {
    p.get(name).map(i64::from)
}

fn need(ok: bool, msg: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::params(msg))
    }
}

fn k_pos(p: &Params) -> Result<i64> {
    let k = get(p, "k")?;
    need(k >= 1, "need k ≥ 1")?;
    Ok(k)
}

fn no_side(side: Side) -> Result<TruncatedSeries> {
    Err(Error::usage(format!("no {side} side")))
}

fn set_side(spec: SetSpec, order: usize) -> Result<TruncatedSeries> {
    weight_histogram(&spec, order)
}

// ---------------------------------------------------------------------------
// Individual identities

fn check_rr(p: &Params) -> Result<()> {
    need(get(p, "a")? <= 1, "need a ∈ {0, 1}")
}

fn eval_rr(side: Side, p: &Params, order: usize) -> Result<TruncatedSeries> {
    let a = get(p, "a")?;
    match side {
        Side::Sum => Multisum::new(1, 1, |s: &[i64]| s[0] * s[0] + (1 - a) * s[0]).evaluate(order),
        Side::Product => poch_inf(PochSign::Pos, 2 - a, 5, order)?
            .mul(&poch_inf(PochSign::Pos, 3 + a, 5, order)?)?
            .inverse_unit(),
        _ => no_side(side),
    }
}

fn check_kr(p: &Params) -> Result<()> {
    let k = k_pos(p)?;
    need(get(p, "r")? <= k, "need r ≤ k")
}

fn check_kjr(p: &Params) -> Result<()> {
    let k = k_pos(p)?;
    need(get(p, "j")? + get(p, "r")? <= k, "need j + r ≤ k")
}

fn check_kj(p: &Params) -> Result<()> {
    let k = k_pos(p)?;
    need(get(p, "j")? <= k, "need j ≤ k")
}

fn check_ka(p: &Params) -> Result<()> {
    let k = k_pos(p)?;
    need(get(p, "a")? <= k, "need a ≤ k")
}

fn check_k2a(p: &Params) -> Result<()> {
    let k = k_pos(p)?;
    need(2 * get(p, "a")? <= k, "need 2a ≤ k")
}

fn check_ak(p: &Params) -> Result<()> {
    let k = k_pos(p)?;
    need(get(p, "a")? < k, "need a ≤ k - 1")
}

fn check_even1(p: &Params) -> Result<()> {
    let k = k_pos(p)?;
    need(2 * get(p, "a")? + 2 * get(p, "b")? <= k, "need 2a + 2b ≤ k")
}

fn check_even2(p: &Params) -> Result<()> {
    let k = k_pos(p)?;
    need(2 * get(p, "a")? + 2 * get(p, "b")? <= k + 1, "need 2a + 2b - 1 ≤ k")
}

fn check_splitting(p: &Params) -> Result<()> {
    check_even2(p)?;
    need(get(p, "b")? >= 1, "need b ≥ 1")
}

fn eval_ag(side: Side, p: &Params, order: usize) -> Result<TruncatedSeries> {
    let (k, r) = (get(p, "k")?, get(p, "r")?);
    match side {
        Side::Sum => Multisum::new(k as usize, 1, |s: &[i64]| squares(s) + span(s, k - r + 1, k)).evaluate(order),
        Side::Product => triple(k + 1 - r, k + 2 + r, 2 * k + 3, order)?.mul(&over_q(order)?),
        _ => no_side(side),
    }
}

/// `Σ_{s=0}^{j} c_s (q^{k+1-r+j-2s}, q^{k+2+r-j+2s}, q^{2k+3}; q^{2k+3})_∞ / (q)_∞`.
fn stanton_product(k: i64, j: i64, r: i64, binomial: bool, order: usize) -> Result<TruncatedSeries> {
    let terms = (0..=j).map(|s| {
        let t = triple(k + 1 - r + j - 2 * s, k + 2 + r - j + 2 * s, 2 * k + 3, order)?;
        let c = if binomial {
            binom(j as u64, s as u64)
        } else {
            BigInt::one()
        };
        Ok(t.scale(&c))
    });
    sum_all(order, terms)?.mul(&over_q(order)?)
}

fn binom(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn eval_stanton(side: Side, p: &Params, order: usize) -> Result<TruncatedSeries> {
    let (k, j, r) = (get(p, "k")?, get(p, "j")?, get(p, "r")?);
    match side {
        Side::Sum => Multisum::new(k as usize, 1, |s: &[i64]| {
            squares(s) - span(s, 1, j) + span(s, k - r + 1, k)
        })
        .evaluate(order),
        Side::Product => stanton_product(k, j, r, false, order),
        _ => no_side(side),
    }
}

fn eval_stanton_binomial(side: Side, p: &Params, order: usize) -> Result<TruncatedSeries> {
    let (k, j, r) = (get(p, "k")?, get(p, "j")?, get(p, "r")?);
    match side {
        Side::Sum => Multisum::new(k as usize, 1, |s: &[i64]| {
            squares(s) - span(s, 1, j) + span(s, k - r + 1, k)
        })
        .extra(|s: &[i64], work| {
            let mut t = TruncatedSeries::one(work);
            for i in 2..=j {
                let e = (at(s, i - 1) + at(s, i)) as usize;
                if e == 0 {
                    t = t.scale(&BigInt::from(2));
                } else {
                    t.mul_binomial_in_place(1, e);
                }
            }
            Ok(t)
        })
        .evaluate(order),
        Side::Product => stanton_product(k, j, r, true, order),
        _ => no_side(side),
    }
}

fn eval_bressoud_even(side: Side, p: &Params, order: usize) -> Result<TruncatedSeries> {
    let (k, r) = (get(p, "k")?, get(p, "r")?);
    match side {
        Side::Sum => Multisum::new(k as usize, 1, |s: &[i64]| squares(s) + span(s, k - r + 1, k))
            .last_base(2)
            .evaluate(order),
        Side::Product => triple(k + 1 - r, k + 1 + r, 2 * k + 2, order)?.mul(&over_q(order)?),
        _ => no_side(side),
    }
}

fn eval_bressoud_33(side: Side, p: &Params, order: usize) -> Result<TruncatedSeries> {
    let (k, j) = (get(p, "k")?, get(p, "j")?);
    match side {
        Side::Sum => Multisum::new(k as usize, 1, |s: &[i64]| squares(s) - span(s, 1, j)).evaluate(order),
        Side::Product => {
            let terms = (0..=j).map(|s| triple(k + 2 - j + 2 * s, k + 1 + j - 2 * s, 2 * k + 3, order));
            sum_all(order, terms)?.mul(&over_q(order)?)
        }
        _ => no_side(side),
    }
}

fn eval_w(side: Side, p: &Params, order: usize) -> Result<TruncatedSeries> {
    let (k, a) = (get(p, "k")?, get(p, "a")?);
    match side {
        Side::Sum => Multisum::new(k as usize, 2, |s: &[i64]| squares(s) + 2 * stepped(s, a + 1, k, 2)).evaluate(order),
        Side::Product => {
            let f0 = 2 * ((k - a) / 2);
            let f1 = 2 * ((k - a + 1) / 2);
            let t0 = triple(k - f0 + 1, k + f0 + 3, 2 * k + 4, order)?;
            let t1 = triple(k - f1 + 1, k + f1 + 3, 2 * k + 4, order)?;
            neg_over_q2(3, order)?.mul(&t0.add(&q_shift(&t1))?)
        }
        Side::SetZ => set_side(
            SetSpec::W {
                k: k as u32,
                a: a as u32,
            },
            order,
        ),
        _ => no_side(side),
    }
}

/// `Σ s_i² + (s_1 - s_2 + ... ± s_c) + (s_{c+1} + ... + s_k)`.
fn alternating_then_plain(s: &[i64], c: i64, k: i64) -> i64 {
    let alt: i64 = (1..=c).map(|i| if i % 2 == 1 { at(s, i) } else { -at(s, i) }).sum();
    squares(s) + alt + span(s, c + 1, k)
}

fn eval_wbar(side: Side, p: &Params, order: usize) -> Result<TruncatedSeries> {
    let (k, a) = (get(p, "k")?, get(p, "a")?);
    match side {
        Side::Sum => Multisum::new(k as usize, 2, |s: &[i64]| alternating_then_plain(s, a, k)).evaluate(order),
        Side::Product => {
            let c = 2 * ((a + 2) / 2);
            neg_over_q2(2, order)?.mul(&triple(c, 2 * k + 4 - c, 2 * k + 4, order)?)
        }
        Side::SetZ => set_side(
            SetSpec::Wbar {
                k: k as u32,
                a: a as u32,
            },
            order,
        ),
        _ => no_side(side),
    }
}

/// Exponent of the odd-parity multisum with parameters `(j, r, k)`.
fn main_exponent(s: &[i64], j: i64, r: i64, k: i64) -> i64 {
    let alt: i64 = (1..=k - r - j)
        .map(|t| if t % 2 == 1 { at(s, j + t) } else { -at(s, j + t) })
        .sum();
    squares(s) - span(s, 1, j) + alt + span(s, k - r + 1, k)
}

/// `Σ_{s=0}^{j} (-q²;q²)_∞ (q^c, q^{2k+4-c}, q^{2k+4}; q^{2k+4})_∞ / (q²;q²)_∞`
/// with `c = 2⌊(k + 2 - r + j - 2s)/2⌋`.
fn main_product(k: i64, j: i64, r: i64, order: usize) -> Result<TruncatedSeries> {
    let terms = (0..=j).map(|s| {
        let c = 2 * ((k + 2 - r + j - 2 * s).div_euclid(2));
        triple(c, 2 * k + 4 - c, 2 * k + 4, order)
    });
    neg_over_q2(2, order)?.mul(&sum_all(order, terms)?)
}

fn eval_main(side: Side, p: &Params, order: usize) -> Result<TruncatedSeries> {
    let (k, j, r) = (get(p, "k")?, get(p, "j")?, get(p, "r")?);
    let (ju, ru, ku) = (j as u32, r as u32, k as u32);
    match side {
        Side::Sum => Multisum::new(k as usize, 2, |s: &[i64]| main_exponent(s, j, r, k)).evaluate(order),
        Side::Product => main_product(k, j, r, order),
        Side::SetZ => set_side(SetSpec::Zo { j: ju, r: ru, k: ku }, order),
        Side::SetX => set_side(SetSpec::Xo { j: ju, r: ru, k: ku }, order),
        Side::SetY => set_side(SetSpec::Yo { j: ju, r: ru, k: ku }, order),
        _ => no_side(side),
    }
}

fn eval_cor_odd(side: Side, p: &Params, order: usize) -> Result<TruncatedSeries> {
    let (k, a) = (get(p, "k")?, get(p, "a")?);
    match side {
        Side::Sum => Multisum::new(k as usize, 2, |s: &[i64]| main_exponent(s, a, 0, k)).evaluate(order),
        Side::Product => {
            let terms = (0..=a).map(|i| {
                let c = 2 * ((k - i + 2) / 2);
                triple(c, 2 * k + 4 - c, 2 * k + 4, order)
            });
            neg_over_q2(2, order)?.mul(&sum_all(order, terms)?)
        }
        _ => no_side(side),
    }
}

/// `Σ s_i² - 2(s_2 + s_4 + ... + s_{2a}) + 2(s_lo + s_{lo+2} + ... )` up to `k`.
fn even_exponent(s: &[i64], a: i64, lo: i64, hi: i64) -> i64 {
    squares(s) - 2 * stepped(s, 2, 2 * a, 2) + 2 * stepped(s, lo, hi, 2)
}

fn even1_sum(k: i64, a: i64, b: i64, order: usize) -> Result<TruncatedSeries> {
    Multisum::new(k as usize, 2, |s: &[i64]| even_exponent(s, a, k - 2 * b + 1, k - 1)).evaluate(order)
}

fn even1_product(k: i64, a: i64, b: i64, order: usize) -> Result<TruncatedSeries> {
    let terms = (0..=a).map(|s| {
        triple(
            k + 1 + 2 * a - 2 * b - 4 * s,
            k + 3 - 2 * a + 2 * b + 4 * s,
            2 * k + 4,
            order,
        )
    });
    neg_over_q2(1, order)?.mul(&sum_all(order, terms)?)
}

fn eval_even1(side: Side, p: &Params, order: usize) -> Result<TruncatedSeries> {
    let (k, a, b) = (get(p, "k")?, get(p, "a")?, get(p, "b")?);
    let (au, bu, ku) = (a as u32, b as u32, k as u32);
    match side {
        Side::Sum => even1_sum(k, a, b, order),
        Side::Product => even1_product(k, a, b, order),
        Side::SetZ => set_side(SetSpec::Ze { a: au, b: bu, k: ku }, order),
        Side::SetX => set_side(SetSpec::Xe { a: au, b: bu, k: ku }, order),
        Side::SetY => set_side(SetSpec::Ye { a: au, b: bu, k: ku }, order),
        _ => no_side(side),
    }
}

fn even2_sum(k: i64, a: i64, b: i64, order: usize) -> Result<TruncatedSeries> {
    Multisum::new(k as usize, 2, |s: &[i64]| even_exponent(s, a, k - 2 * b + 2, k)).evaluate(order)
}

fn even2_product(k: i64, a: i64, b: i64, order: usize) -> Result<TruncatedSeries> {
    let terms = (0..=a).map(|s| {
        let first = triple(
            k + 3 + 2 * a - 2 * b - 4 * s,
            k + 1 - 2 * a + 2 * b + 4 * s,
            2 * k + 4,
            order,
        )?;
        let second = triple(
            k + 1 + 2 * a - 2 * b - 4 * s,
            k + 3 - 2 * a + 2 * b + 4 * s,
            2 * k + 4,
            order,
        )?;
        first.add(&q_shift(&second))
    });
    neg_over_q2(3, order)?.mul(&sum_all(order, terms)?)
}

fn eval_even2(side: Side, p: &Params, order: usize) -> Result<TruncatedSeries> {
    let (k, a, b) = (get(p, "k")?, get(p, "a")?, get(p, "b")?);
    let (au, bu, ku) = (a as u32, b as u32, k as u32);
    match side {
        Side::Sum => even2_sum(k, a, b, order),
        Side::Product => even2_product(k, a, b, order),
        Side::SetZ => set_side(SetSpec::ZeTilde { a: au, b: bu, k: ku }, order),
        Side::SetX => set_side(SetSpec::XeTilde { a: au, b: bu, k: ku }, order),
        _ => no_side(side),
    }
}

fn eval_cor_even(side: Side, p: &Params, order: usize) -> Result<TruncatedSeries> {
    let (k, a) = (get(p, "k")?, get(p, "a")?);
    match side {
        Side::Sum => Multisum::new(k as usize, 2, |s: &[i64]| even_exponent(s, a, 1, 0)).evaluate(order),
        Side::Product => {
            let terms = (0..=a).map(|i| triple(k + 1 - 2 * i, k + 3 + 2 * i, 2 * k + 4, order));
            neg_over_q2(1, order)?.mul(&sum_all(order, terms)?)
        }
        _ => no_side(side),
    }
}

/// `AK_{a,k}`: exponent `Σ s_i² - (s_1 + ... + s_{k-a}) + (s_{k-a+1} + ... + s_k)`.
fn ak_exponent(s: &[i64], a: i64, k: i64) -> i64 {
    squares(s) - span(s, 1, k - a) + span(s, k - a + 1, k)
}

fn ak_sum(k: i64, a: i64, order: usize) -> Result<TruncatedSeries> {
    Multisum::new(k as usize, 2, |s: &[i64]| ak_exponent(s, a, k)).evaluate(order)
}

fn eval_ak_cor2(side: Side, p: &Params, order: usize) -> Result<TruncatedSeries> {
    let (k, a) = (get(p, "k")?, get(p, "a")?);
    match side {
        Side::Sum => ak_sum(k, a, order),
        Side::Product => {
            let terms = (a..=k).map(|i| triple(2 * i + 2, 2 * k + 2 - 2 * i, 2 * k + 4, order));
            sum_all(order, terms)?.mul(&over_q2_q2q4(order)?)
        }
        _ => no_side(side),
    }
}

/// `Σ q^{AK exponent} (1 - q^{2 s_{k-a}}) / denominators`.
fn ak_modified_sum(k: i64, a: i64, order: usize) -> Result<TruncatedSeries> {
    Multisum::new(k as usize, 2, |s: &[i64]| ak_exponent(s, a, k))
        .extra(|s: &[i64], work| {
            let one = TruncatedSeries::one(work);
            one.sub(&TruncatedSeries::monomial(BigInt::one(), 2 * at(s, k - a), work))
        })
        .evaluate(order)
}

fn eval_ak_modified(side: Side, p: &Params, order: usize) -> Result<TruncatedSeries> {
    let (k, a) = (get(p, "k")?, get(p, "a")?);
    match side {
        Side::Sum => ak_modified_sum(k, a, order),
        Side::Product => triple(2 * a + 2, 2 * k + 2 - 2 * a, 2 * k + 4, order)?.mul(&over_q2_q2q4(order)?),
        Side::Alt => ak_sum(k, a, order)?.sub(&ak_sum(k, a + 1, order)?),
        _ => no_side(side),
    }
}

fn eval_ak_binom(side: Side, p: &Params, order: usize) -> Result<TruncatedSeries> {
    let (k, a) = (get(p, "k")?, get(p, "a")?);
    match side {
        Side::Sum => ak_binomial_sum(k as usize, a as usize, order),
        Side::Product => ak_product(k, a, k + 2, order),
        _ => no_side(side),
    }
}

/// `Σ q^{Σ C(n_i+1, 2)} / (q)_{n_k} · ∏_{i<k} [n_{i+1} + δ_{a,i}, n_i]`.
fn ak_binomial_sum(k: usize, a: usize, order: usize) -> Result<TruncatedSeries> {
    let cap = triangular_bound(order) as i64;
    let mut n = vec![0i64; k];
    let mut acc = TruncatedSeries::zero(order);
    // n[i - 1] holds n_i; choose n_k first, then n_{k-1} ≤ n_k + δ, and so on.
    fn rec(
        n: &mut [i64],
        i: usize,
        a: usize,
        cap: i64,
        weight: i64,
        order: usize,
        acc: &mut TruncatedSeries,
    ) -> Result<()> {
        // `i` is the 1-based index still to be chosen; 0 means done.
        if weight > order as i64 {
            return Ok(());
        }
        if i == 0 {
            let k = n.len();
            let mut t = inverse_q_factorial(1, n[k - 1] as u32, order);
            for idx in 1..k {
                let top = n[idx] + i64::from(a == idx);
                t = t.mul(&qbinomial(top, n[idx - 1], 1, order))?;
            }
            *acc = acc.add(&t.monomial_shift(&BigInt::one(), weight))?;
            return Ok(());
        }
        let hi = if i == n.len() { cap } else { n[i] + i64::from(a == i) };
        for v in 0..=hi.min(cap) {
            n[i - 1] = v;
            rec(n, i - 1, a, cap, weight + tri(v), order, acc)?;
        }
        Ok(())
    }
    rec(&mut n, k, a, cap, 0, order, &mut acc)?;
    Ok(acc)
}

fn eval_ak_nform(side: Side, p: &Params, order: usize) -> Result<TruncatedSeries> {
    let (k, a) = (get(p, "k")?, get(p, "a")?);
    match side {
        Side::Sum => ak_nform_sum(k, a, order),
        Side::Product => ak_product(k, a, k + 2, order),
        _ => no_side(side),
    }
}

/// The N-form: `N_1 = 0`, `N_{k+1} = ∞`, with `N_k ≥ ... ≥ N_{a+1}` and
/// `N_{a+1} + 1 ≥ N_a ≥ ... ≥ N_2 ≥ 0`. The factor
/// `(1 - q^{N_{a+1}+1}) / (1 - q^{N_{a+1} - N_a + 1})` merges with
/// `(q)_{N_{a+1} - N_a}` into `(1 - q^{N_{a+1}+1}) / (q)_{N_{a+1} - N_a + 1}`.
fn ak_nform_sum(k: i64, a: i64, order: usize) -> Result<TruncatedSeries> {
    let cap = triangular_bound(order) as i64;
    let free = (k - 1) as usize;
    let mut acc = TruncatedSeries::zero(order);
    let mut ns = vec![0i64; free];
    loop {
        // value of N_i, 1 ≤ i ≤ k
        let nv = |i: i64| if i == 1 { 0 } else { ns[(i - 2) as usize] };
        let ordered = (a + 1..k).all(|i| i < 2 || nv(i + 1) >= nv(i))
            && (a < 1 || (nv(a + 1) + 1 >= nv(a) && (2..a).all(|i| nv(i + 1) >= nv(i))));
        let e: i64 = (2..=k).map(|i| tri(nv(i))).sum();
        if ordered && e <= order as i64 {
            // (-q; q)_{N_2 + δ_{a+1,2}}, infinite when k = 1
            let mut t = if k == 1 {
                poch_inf(PochSign::Neg, 1, 1, order)?
            } else {
                let n = nv(2) + i64::from(a == 1);
                pochhammer_finite(PochSign::Neg, 1, 1, n as u32, order)
            };
            let top = nv(a + 1) + 1;
            t.mul_binomial_in_place(-1, top as usize);
            for i in 2..=k {
                let d = nv(i) - nv(i - 1) + i64::from(i == a + 1);
                for s in 1..=d {
                    t.div_one_minus_in_place(s as usize);
                }
            }
            if a == 0 {
                t.div_one_minus_in_place(1);
            }
            acc = acc.add(&t.monomial_shift(&BigInt::one(), e))?;
        }
        // odometer over N_2..N_k
        let mut i = 0;
        loop {
            if i == free {
                return Ok(acc);
            }
            if ns[i] < cap {
                ns[i] += 1;
                break;
            }
            ns[i] = 0;
            i += 1;
        }
    }
}

fn eval_open1(side: Side, p: &Params, order: usize) -> Result<TruncatedSeries> {
    let (k, a) = (get(p, "k")?, get(p, "a")?);
    match side {
        Side::Sum => ak_modified_sum(k, a, order),
        Side::Alt => Multisum::new(k as usize, 2, |s: &[i64]| alternating_then_plain(s, 2 * a, k)).evaluate(order),
        Side::Product => neg_over_q2(2, order)?.mul(&triple(2 * a + 2, 2 * k + 2 - 2 * a, 2 * k + 4, order)?),
        _ => no_side(side),
    }
}

fn eval_open2(side: Side, p: &Params, order: usize) -> Result<TruncatedSeries> {
    let (k, j, r) = (get(p, "k")?, get(p, "j")?, get(p, "r")?);
    match side {
        Side::Sum => Multisum::new(k as usize, 2, |s: &[i64]| {
            2 * (squares(s) - span(s, 1, j) + span(s, k - r + 1, k))
        })
        .extra(|s: &[i64], work| poch_inf(PochSign::Neg, 1 + 2 * at(s, k), 2, work))
        .evaluate(order),
        Side::Alt => even2_sum(2 * k, j, r, order),
        Side::Product => even2_product(2 * k, j, r, order),
        _ => no_side(side),
    }
}

fn one_plus_q(s: &TruncatedSeries) -> Result<TruncatedSeries> {
    s.add(&q_shift(s))
}

fn eval_splitting(side: Side, p: &Params, order: usize) -> Result<TruncatedSeries> {
    let (k, a, b) = (get(p, "k")?, get(p, "a")?, get(p, "b")?);
    let (au, bu, ku) = (a as u32, b as u32, k as u32);
    match side {
        Side::SetZ => one_plus_q(&set_side(SetSpec::ZeTilde { a: au, b: bu, k: ku }, order)?),
        Side::Split => {
            let lower = set_side(
                SetSpec::Ze {
                    a: au,
                    b: bu - 1,
                    k: ku,
                },
                order,
            )?;
            let upper = set_side(SetSpec::Ze { a: au, b: bu, k: ku }, order)?;
            lower.add(&q_shift(&upper))
        }
        Side::Sum => one_plus_q(&even2_sum(k, a, b, order)?),
        _ => no_side(side),
    }
}

use Side::{Alt, Product, SetX, SetY, SetZ, Split, Sum};

fn standard_formulas() -> Vec<Formula> {
    vec![
        Formula {
            name: "rr",
            summary: "Rogers-Ramanujan identities",
            params: &["a"],
            constraint: "a ∈ {0, 1}",
            sides: &[Sum, Product],
            check: check_rr,
            eval: eval_rr,
        },
        Formula {
            name: "ag",
            summary: "Andrews-Gordon identities",
            params: &["k", "r"],
            constraint: "k ≥ 1, 0 ≤ r ≤ k",
            sides: &[Sum, Product],
            check: check_kr,
            eval: eval_ag,
        },
        Formula {
            name: "stanton",
            summary: "Stanton's generalisation of Andrews-Gordon",
            params: &["k", "j", "r"],
            constraint: "k ≥ 1, j + r ≤ k",
            sides: &[Sum, Product],
            check: check_kjr,
            eval: eval_stanton,
        },
        Formula {
            name: "stanton-binomial",
            summary: "binomial extension of Andrews-Gordon, default factor choice",
            params: &["k", "j", "r"],
            constraint: "k ≥ 1, j + r ≤ k",
            sides: &[Sum, Product],
            check: check_kjr,
            eval: eval_stanton_binomial,
        },
        Formula {
            name: "bressoud-even",
            summary: "Bressoud's even-modulus identities",
            params: &["k", "r"],
            constraint: "k ≥ 1, 0 ≤ r ≤ k",
            sides: &[Sum, Product],
            check: check_kr,
            eval: eval_bressoud_even,
        },
        Formula {
            name: "bressoud-33",
            summary: "Bressoud's sum-of-products identities",
            params: &["k", "j"],
            constraint: "k ≥ 1, 0 ≤ j ≤ k",
            sides: &[Sum, Product],
            check: check_kj,
            eval: eval_bressoud_33,
        },
        Formula {
            name: "w-unified",
            summary: "W family: even parts appear an even number of times",
            params: &["k", "a"],
            constraint: "k ≥ 1, 0 ≤ a ≤ k",
            sides: &[Sum, Product, SetZ],
            check: check_ka,
            eval: eval_w,
        },
        Formula {
            name: "wbar-unified",
            summary: "W-bar family: odd parts appear an even number of times",
            params: &["k", "a"],
            constraint: "k ≥ 1, 0 ≤ a ≤ k",
            sides: &[Sum, Product, SetZ],
            check: check_ka,
            eval: eval_wbar,
        },
        Formula {
            name: "main",
            summary: "odd-parity Stanton-type identities",
            params: &["k", "j", "r"],
            constraint: "k ≥ 1, j + r ≤ k",
            sides: &[Sum, Product, SetZ, SetX, SetY],
            check: check_kjr,
            eval: eval_main,
        },
        Formula {
            name: "even1",
            summary: "even-parity identities, first family",
            params: &["k", "a", "b"],
            constraint: "k ≥ 1, 2a + 2b ≤ k",
            sides: &[Sum, Product, SetZ, SetX, SetY],
            check: check_even1,
            eval: eval_even1,
        },
        Formula {
            name: "even2",
            summary: "even-parity identities, second family",
            params: &["k", "a", "b"],
            constraint: "k ≥ 1, 2a + 2b - 1 ≤ k",
            sides: &[Sum, Product, SetZ, SetX],
            check: check_even2,
            eval: eval_even2,
        },
        Formula {
            name: "cor-odd",
            summary: "odd-parity corollary with alternating linear terms",
            params: &["k", "a"],
            constraint: "k ≥ 1, 0 ≤ a ≤ k",
            sides: &[Sum, Product],
            check: check_ka,
            eval: eval_cor_odd,
        },
        Formula {
            name: "cor-even",
            summary: "even-parity corollary",
            params: &["k", "a"],
            constraint: "k ≥ 1, 0 ≤ 2a ≤ k",
            sides: &[Sum, Product],
            check: check_k2a,
            eval: eval_cor_even,
        },
        Formula {
            name: "ak-cor2",
            summary: "AK_{a,k} as a sum of products",
            params: &["k", "a"],
            constraint: "k ≥ 1, 0 ≤ a ≤ k",
            sides: &[Sum, Product],
            check: check_ka,
            eval: eval_ak_cor2,
        },
        Formula {
            name: "ak-binom",
            summary: "Ariki-Koike product, q-binomial form",
            params: &["k", "a"],
            constraint: "k ≥ 1, 0 ≤ a ≤ k - 1",
            sides: &[Sum, Product],
            check: check_ak,
            eval: eval_ak_binom,
        },
        Formula {
            name: "ak-nform",
            summary: "Ariki-Koike product, N-variable form",
            params: &["k", "a"],
            constraint: "k ≥ 1, 0 ≤ a ≤ k - 1",
            sides: &[Sum, Product],
            check: check_ak,
            eval: eval_ak_nform,
        },
        Formula {
            name: "ak-modified",
            summary: "Ariki-Koike identity in base q², with AK_{a,k} - AK_{a+1,k} as alt",
            params: &["k", "a"],
            constraint: "k ≥ 1, 0 ≤ a ≤ k - 1",
            sides: &[Sum, Product, Alt],
            check: check_ak,
            eval: eval_ak_modified,
        },
        Formula {
            name: "open1",
            summary: "two multisums with the same product, k variables each",
            params: &["k", "a"],
            constraint: "k ≥ 1, 0 ≤ 2a ≤ k",
            sides: &[Sum, Alt, Product],
            check: check_k2a,
            eval: eval_open1,
        },
        Formula {
            name: "open2",
            summary: "k-fold multisum against a 2k-fold even2 multisum",
            params: &["k", "j", "r"],
            constraint: "k ≥ 1, j + r ≤ k",
            sides: &[Sum, Alt, Product],
            check: check_kjr,
            eval: eval_open2,
        },
        Formula {
            name: "splitting-even2",
            summary: "(1+q)·gf(Z̃e[a,b,k]) = gf(Ze[a,b-1,k]) + q·gf(Ze[a,b,k])",
            params: &["k", "a", "b"],
            constraint: "k ≥ 1, b ≥ 1, 2a + 2b - 1 ≤ k",
            sides: &[SetZ, Split, Sum],
            check: check_splitting,
            eval: eval_splitting,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Params {
        s.parse().unwrap()
    }

    fn coeff(s: &TruncatedSeries, e: i64) -> BigInt {
        s.coefficient(e).unwrap()
    }

    fn agree(name: &str, params: &str, order: usize) {
        let reg = Registry::standard();
        let id = reg.get(name).unwrap();
        let params = p(params);
        let sides: Vec<_> = id
            .sides()
            .iter()
            .map(|&s| {
                let o = if s.is_enumerated() { order.min(16) } else { order };
                id.evaluate(s, &params, o).unwrap().truncate(order.min(16)).unwrap()
            })
            .collect();
        for w in sides.windows(2) {
            assert_eq!(w[0], w[1], "{name} {params}");
        }
    }

    #[test]
    fn registry_has_every_id() {
        let reg = Registry::standard();
        assert_eq!(reg.names().len(), 20);
        assert!(reg.get("nope").is_err());
    }

    #[test]
    fn rr_spot_values() {
        let reg = Registry::standard();
        let rr = reg.get("rr").unwrap();
        let sum = rr.evaluate(Side::Sum, &p("a=0"), 10).unwrap();
        assert_eq!(coeff(&sum, 8), BigInt::from(3));
        let prod = rr.evaluate(Side::Product, &p("a=1"), 10).unwrap();
        assert_eq!(coeff(&prod, 4), BigInt::from(2));
    }

    #[test]
    fn main_distinct_even_parts() {
        let reg = Registry::standard();
        let id = reg.get("main").unwrap();
        let sum = id.evaluate(Side::Sum, &p("k=1,j=0,r=0"), 10).unwrap();
        assert_eq!(coeff(&sum, 6), BigInt::from(2));
        let set = id.evaluate(Side::SetZ, &p("k=1,j=0,r=0"), 6).unwrap();
        assert_eq!(set, TruncatedSeries::from_coeffs(6, [1, 0, 1, 0, 1, 0, 2]));
    }

    #[test]
    fn wbar_product_reduces() {
        let reg = Registry::standard();
        let prod = reg
            .get("wbar-unified")
            .unwrap()
            .evaluate(Side::Product, &p("k=1,a=0"), 12)
            .unwrap();
        assert_eq!(prod, pochhammer_infinite(PochSign::Neg, 2, 2, 12).unwrap());
    }

    #[test]
    fn small_instances_agree() {
        agree("rr", "a=1", 20);
        agree("ag", "k=2,r=1", 20);
        agree("stanton", "k=2,j=1,r=1", 20);
        agree("stanton-binomial", "k=3,j=2,r=0", 20);
        agree("bressoud-even", "k=2,r=2", 20);
        agree("bressoud-33", "k=2,j=2", 20);
        agree("w-unified", "k=3,a=0", 20);
        agree("wbar-unified", "k=2,a=1", 20);
        agree("main", "k=2,j=1,r=1", 20);
        agree("even1", "k=2,a=1,b=0", 20);
        agree("even2", "k=3,a=1,b=1", 20);
        agree("cor-odd", "k=2,a=2", 20);
        agree("cor-even", "k=2,a=1", 20);
        agree("ak-cor2", "k=2,a=2", 20);
        agree("ak-binom", "k=3,a=1", 20);
        agree("ak-nform", "k=3,a=1", 20);
        agree("ak-modified", "k=2,a=1", 20);
        agree("open1", "k=2,a=1", 20);
        agree("open2", "k=2,j=1,r=0", 20);
        agree("splitting-even2", "k=2,a=0,b=1", 20);
    }

    #[test]
    fn bound_values() {
        assert_eq!(summation_bound(3, 40), 7);
        assert_eq!(summation_bound(1, 0), 2);
        assert_eq!(triangular_bound(10), 4);
    }

    #[test]
    fn bound_is_not_slack() {
        // s² - s reaches q^6 at s = 3, the bound itself
        let m = Multisum::new(1, 2, |s: &[i64]| s[0] * s[0] - s[0]);
        assert_eq!(summation_bound(1, 6), 3);
        assert_ne!(m.evaluate(6).unwrap(), m.evaluate_capped(6, 2).unwrap());
    }

    #[test]
    fn zero_tuple_only() {
        let m = Multisum::new(2, 1, |s: &[i64]| 10 * squares(s));
        assert_eq!(m.evaluate(5).unwrap(), TruncatedSeries::one(5));
    }

    #[test]
    fn constant_terms() {
        // a single product starts at 1; a sum of products at its number of
        // non-vanishing terms, matching the zero tuples of the sum side
        let reg = Registry::standard();
        for name in ["rr", "ag", "bressoud-even", "wbar-unified", "ak-binom", "ak-modified"] {
            let id = reg.get(name).unwrap();
            for params in id.grid(3) {
                let s = id.evaluate(Side::Product, &params, 3).unwrap();
                assert_eq!(coeff(&s, 0), BigInt::one(), "{name} {params}");
            }
        }
        for id in reg.iter().filter(|id| id.sides().contains(&Side::Product)) {
            for params in id.grid(2) {
                let prod = id.evaluate(Side::Product, &params, 0).unwrap();
                let sum = id.evaluate(id.sides()[0], &params, 0).unwrap();
                assert_eq!(prod, sum, "{} {params}", id.name());
            }
        }
    }

    #[test]
    fn parameter_errors() {
        let reg = Registry::standard();
        let main = reg.get("main").unwrap();
        assert!(matches!(main.validate(&p("k=3,j=5,r=1")), Err(Error::InvalidParams(_))));
        assert!(matches!(main.validate(&p("k=3,j=1")), Err(Error::Usage(_))));
        assert!(matches!(main.validate(&p("k=3,j=1,r=0,a=1")), Err(Error::Usage(_))));
        assert!(main.evaluate(Side::Alt, &p("k=1,j=0,r=0"), 4).is_err());
        assert!("k=x".parse::<Params>().is_err());
    }

    #[test]
    fn grid_respects_constraints() {
        let reg = Registry::standard();
        assert_eq!(reg.get("rr").unwrap().grid(4).len(), 2);
        // (k, j, r) with j + r ≤ k ≤ 2: 3 + 6
        assert_eq!(reg.get("main").unwrap().grid(2).len(), 9);
    }

    #[test]
    fn params_round_trip() {
        let params = p("k=3, j=1,r=0");
        assert_eq!(params.to_string(), "j=1,k=3,r=0");
        assert_eq!(params.to_string().parse::<Params>().unwrap(), params);
    }
}
