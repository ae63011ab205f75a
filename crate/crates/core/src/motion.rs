//! Particle motion: single steps, the multi-step process `ppm`, its closed
//! form, reverse motion, frame sequences and the bijections built on them.

use std::fmt::Write as _;

use crate::combinatorics::{FlatPart, FlatteningOrder, FrequencySequence, MultiPartition, Partition};
use crate::error::{Error, Result};

/// Mutable dense working copy of a frequency sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Tape {
    base: i64,
    cells: Vec<u32>,
}

impl Tape {
    fn from_seq(f: &FrequencySequence) -> Self {
        match (f.min_index(), f.max_index()) {
            (Some(lo), Some(hi)) => Tape {
                base: lo,
                cells: f.window(lo, hi),
            },
            _ => Tape {
                base: 0,
                cells: Vec::new(),
            },
        }
    }

    fn get(&self, i: i64) -> u32 {
        if i < self.base {
            return 0;
        }
        self.cells.get((i - self.base) as usize).copied().unwrap_or(0)
    }

    fn set(&mut self, i: i64, v: u32) {
        if self.cells.is_empty() {
            if v == 0 {
                return;
            }
            self.base = i;
        }
        if i < self.base {
            let grow = (self.base - i) as usize;
            self.cells.splice(0..0, std::iter::repeat_n(0, grow));
            self.base = i;
        }
        let t = (i - self.base) as usize;
        if t >= self.cells.len() {
            if v == 0 {
                return;
            }
            self.cells.resize(t + 1, 0);
        }
        self.cells[t] = v;
    }

    /// Largest index that may hold a non-zero count.
    fn top(&self) -> i64 {
        self.base + self.cells.len() as i64 - 1
    }

    fn max_nonzero(&self) -> Option<i64> {
        self.cells.iter().rposition(|&c| c > 0).map(|t| self.base + t as i64)
    }

    fn weight(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(t, &c)| (self.base + t as i64) * c as i64)
            .sum()
    }

    fn to_seq(&self) -> FrequencySequence {
        FrequencySequence::from_dense(self.base, self.cells.clone())
    }
}

/// The two elementary moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    /// `(f_u, f_{u+1}) -> (f_u - 1, f_{u+1} + 1)`.
    Motion,
    /// `u -> u + 1`.
    Shift,
}

/// A sequence with a focus index `u` and pair sum `h = f_u + f_{u+1}` such
/// that `f_v + f_{v+1} ≤ h` for every `v ≥ u`.
#[derive(Debug, Clone)]
pub struct FocusState {
    tape: Tape,
    u: i64,
    h: u32,
}

impl FocusState {
    pub fn new(f: &FrequencySequence, u: i64) -> Result<Self> {
        let tape = Tape::from_seq(f);
        let h = check_focus(&tape, u)?;
        Ok(FocusState { tape, u, h })
    }

    pub fn focus(&self) -> i64 {
        self.u
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn sequence(&self) -> FrequencySequence {
        self.tape.to_seq()
    }

    /// Applies whichever of the two rules is due.
    pub fn step(&mut self) -> StepKind {
        step(&mut self.tape, &mut self.u, self.h)
    }
}

/// Checks the focus invariant at `u` and returns `h`.
fn check_focus(tape: &Tape, u: i64) -> Result<u32> {
    let h = tape.get(u) + tape.get(u + 1);
    for v in u + 1..=tape.top() {
        let s = tape.get(v) + tape.get(v + 1);
        if s > h {
            return Err(Error::domain(format!(
                "focus invariant fails at index {v}: f_{v} + f_{} = {s} > h = {h}",
                v + 1
            )));
        }
    }
    Ok(h)
}

fn step(tape: &mut Tape, u: &mut i64, h: u32) -> StepKind {
    let i = *u;
    if tape.get(i + 1) + tape.get(i + 2) < h {
        let (a, b) = (tape.get(i), tape.get(i + 1));
        tape.set(i, a - 1);
        tape.set(i + 1, b + 1);
        StepKind::Motion
    } else {
        *u += 1;
        StepKind::Shift
    }
}

/// One recorded step of a motion process: the move and the configuration
/// right after it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub kind: StepKind,
    pub seq: FrequencySequence,
    pub focus: i64,
}

fn run_ppm(tape: &mut Tape, u: i64, m: u64, mut record: Option<&mut Vec<TraceStep>>) -> Result<i64> {
    if m == 0 {
        return Ok(u);
    }
    let h = check_focus(tape, u)?;
    if h == 0 {
        return Err(Error::domain(format!(
            "no particles at the focus pair ({u}, {})",
            u + 1
        )));
    }
    let span = (tape.top() - u + 2).max(0) as u64;
    let limit = 2 * m + span + 2;
    let mut focus = u;
    let mut done = 0u64;
    let mut steps = 0u64;
    while done < m {
        if steps >= limit {
            return Err(Error::domain(format!(
                "particle motion did not finish within {limit} steps"
            )));
        }
        let kind = step(tape, &mut focus, h);
        steps += 1;
        if kind == StepKind::Motion {
            done += 1;
        }
        if let Some(rec) = record.as_deref_mut() {
            rec.push(TraceStep {
                kind,
                seq: tape.to_seq(),
                focus,
            });
        }
    }
    Ok(focus)
}

/// `ppm_u^{(m)}(f)` by literal simulation of the two rules. Returns the new
/// sequence and the final focus index. Focus shifts are only taken when a
/// further motion is still due.
pub fn ppm(f: &FrequencySequence, u: i64, m: u64) -> Result<(FrequencySequence, i64)> {
    let mut tape = Tape::from_seq(f);
    let v = run_ppm(&mut tape, u, m, None)?;
    Ok((tape.to_seq(), v))
}

/// Like [`ppm`] but also returns every intermediate step.
pub fn ppm_traced(f: &FrequencySequence, u: i64, m: u64) -> Result<(FrequencySequence, i64, Vec<TraceStep>)> {
    let mut tape = Tape::from_seq(f);
    let mut steps = Vec::new();
    let v = run_ppm(&mut tape, u, m, Some(&mut steps))?;
    Ok((tape.to_seq(), v, steps))
}

/// Closed form of `ppm_u^{(m)}` for a start of the form `(f_u, f_{u+1}) = (h, 0)`.
///
/// With `S_t = Σ_{i=u+2}^{t} (h - f_{i-1} - f_i)`, the final focus is the
/// smallest `v ≥ u` with `S_{v+2} ≥ m`; entries in `[u, v)` are those of `f`
/// two places to the right, and the pair at `v` absorbs the remainder.
pub fn ppm_explicit(f: &FrequencySequence, u: i64, m: u64) -> Result<(FrequencySequence, i64)> {
    let h = f.get(u);
    if h == 0 || f.get(u + 1) != 0 {
        return Err(Error::domain(format!(
            "closed form needs (f_u, f_(u+1)) = (h, 0) with h ≥ 1, found ({}, {})",
            f.get(u),
            f.get(u + 1)
        )));
    }
    let top = f.max_index().unwrap_or(u);
    for i in u..=top {
        if f.get(i) + f.get(i + 1) > h {
            return Err(Error::domain(format!("pair sum at index {i} exceeds h = {h}")));
        }
    }
    if m == 0 {
        return Ok((f.clone(), u));
    }
    let slack = |i: i64| (h - f.get(i - 1) - f.get(i)) as u64;
    // s_prev = S_{v+1}, s_next = S_{v+2}
    let mut v = u;
    let mut s_prev = 0u64;
    let mut s_next = slack(u + 2);
    while s_next < m {
        v += 1;
        s_prev = s_next;
        s_next += slack(v + 2);
    }
    let mut tape = Tape::from_seq(f);
    for i in u..v {
        tape.set(i, f.get(i + 2));
    }
    tape.set(v, (f.get(v + 2) as u64 + s_next - m) as u32);
    tape.set(v + 1, (f.get(v + 1) as u64 + m - s_prev) as u32);
    Ok((tape.to_seq(), v))
}

/// One reverse stage on a tape: finds the smallest `v ≥ u` maximising
/// `f_v + f_{v+1}` and pulls that pair back to `(h, 0)` at `u`. Returns `h`.
/// Pairs `(f_v, f_{v+1})` with `v >= u` whose sum is maximal, in increasing
/// order of `v`, together with that maximal sum.
fn reverse_candidates(tape: &Tape, u: i64) -> (u32, Vec<i64>) {
    let mut best = 0u32;
    let mut at = Vec::new();
    for t in u..=tape.top() {
        let s = tape.get(t) + tape.get(t + 1);
        if s > best {
            best = s;
            at.clear();
        }
        if s == best && s > 0 {
            at.push(t);
        }
    }
    (best, at)
}

fn reverse_at(tape: &mut Tape, u: i64, v: i64, h: u32) {
    let moved: Vec<u32> = (u..v).map(|t| tape.get(t)).collect();
    for (off, c) in moved.into_iter().enumerate() {
        tape.set(u + 2 + off as i64, c);
    }
    tape.set(u, h);
    tape.set(u + 1, 0);
}

fn reverse_in_place(tape: &mut Tape, u: i64) -> Result<u32> {
    let (best, at) = reverse_candidates(tape, u);
    let Some(&v) = at.first() else {
        return Err(Error::domain(format!("no particles at or after index {u}")));
    };
    reverse_at(tape, u, v, best);
    Ok(best)
}

fn not_an_image(f: &FrequencySequence, u: i64) -> Error {
    Error::domain(format!("{f} is not a particle-motion image at {u}"))
}

/// Undoes a `ppm` started from an `(h, 0)` pair at `u`. The pair to pull back
/// is the smallest `v >= u` maximising `f_v + f_{v+1}`. Returns the original
/// sequence and the number of motions.
///
/// When several pairs reach the maximum the preimage depends on the choice,
/// so an arbitrary `ppm` output may have been produced from a different pair
/// (see [`reverse_ppm_count`]). Inside `Λ` the smallest pair is always right.
pub fn reverse_ppm(f: &FrequencySequence, u: i64) -> Result<(FrequencySequence, u64)> {
    let mut tape = Tape::from_seq(f);
    reverse_in_place(&mut tape, u)?;
    let m = f.weight() - tape.weight();
    if m < 0 {
        return Err(not_an_image(f, u));
    }
    let orig = tape.to_seq();
    let (again, _) = ppm(&orig, u, m as u64)?;
    if again != *f {
        return Err(not_an_image(f, u));
    }
    Ok((orig, m as u64))
}

/// Undoes exactly `m` motions: among the maximal pairs, the one whose
/// pull-back lowers the weight by `m`.
pub fn reverse_ppm_count(f: &FrequencySequence, u: i64, m: u64) -> Result<FrequencySequence> {
    let tape = Tape::from_seq(f);
    let (best, at) = reverse_candidates(&tape, u);
    for v in at {
        let mut t = tape.clone();
        reverse_at(&mut t, u, v, best);
        if f.weight() - t.weight() != m as i64 {
            continue;
        }
        let orig = t.to_seq();
        if ppm(&orig, u, m)?.0 == *f {
            return Ok(orig);
        }
    }
    Err(not_an_image(f, u))
}

/// Offset `u` plus a weakly decreasing profile `s_1 ≥ ... ≥ s_k ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameSpec {
    pub u: i64,
    profile: Vec<u32>,
}

impl FrameSpec {
    pub fn new(u: i64, profile: Vec<u32>) -> Result<Self> {
        if profile.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::params(format!("profile {profile:?} is not weakly decreasing")));
        }
        Ok(FrameSpec { u, profile })
    }

    pub fn k(&self) -> usize {
        self.profile.len()
    }

    pub fn profile(&self) -> &[u32] {
        &self.profile
    }

    /// `Σ s_i^2 + (u - 1) Σ s_i`.
    pub fn weight(&self) -> i64 {
        frame_weight(&self.profile, self.u)
    }
}

pub fn frame_weight(profile: &[u32], u: i64) -> i64 {
    profile
        .iter()
        .map(|&s| {
            let s = s as i64;
            s * s + (u - 1) * s
        })
        .sum()
}

/// Pair values of a frame left to right: `s_k` pairs of value `k`, then
/// `s_{k-1} - s_k` of value `k - 1`, down to `s_1 - s_2` of value 1.
fn frame_values(profile: &[u32]) -> Vec<u32> {
    let k = profile.len();
    let mut vals = Vec::with_capacity(profile.first().copied().unwrap_or(0) as usize);
    for m in (1..=k).rev() {
        let count = profile[m - 1] - profile.get(m).copied().unwrap_or(0);
        vals.extend(std::iter::repeat_n(m as u32, count as usize));
    }
    vals
}

/// The `u`-frame sequence: value `v_i` at index `u + 2i`, zero at `u + 2i + 1`.
pub fn frame_sequence(spec: &FrameSpec) -> FrequencySequence {
    let vals = frame_values(&spec.profile);
    FrequencySequence::from_entries(vals.iter().enumerate().map(|(i, &v)| (spec.u + 2 * i as i64, v)))
}

/// `fs_u(bla)`.
pub fn frame_for(bla: &MultiPartition, u: i64) -> FrequencySequence {
    frame_sequence(&FrameSpec {
        u,
        profile: bla.profile(),
    })
}

/// The frame of the O-family: pairs `(min(k - r, v), max(0, v - k + r))`
/// from index 1, with `v` running over the same pair values as `fs_1`.
pub fn tilde_frame(bla: &MultiPartition, r: u32) -> FrequencySequence {
    let k = bla.k() as u32;
    let vals = frame_values(&bla.profile());
    FrequencySequence::from_entries(vals.iter().enumerate().flat_map(|(i, &v)| {
        let (x, y) = tilde_pair(v, k, r);
        let at = 1 + 2 * i as i64;
        [(at, x), (at + 1, y)]
    }))
}

fn tilde_pair(v: u32, k: u32, r: u32) -> (u32, u32) {
    let kr = k - r;
    (v.min(kr), v.saturating_sub(kr))
}

pub fn tilde_frame_weight(profile: &[u32], k: u32, r: u32) -> i64 {
    frame_values(profile)
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let (x, y) = tilde_pair(v, k, r);
            let at = 1 + 2 * i as i64;
            at * x as i64 + (at + 1) * y as i64
        })
        .sum()
}

/// One stage of `Λ`: `λ_i` motions applied at `start`, ending at `end`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub i: usize,
    pub part: u32,
    pub component: u32,
    pub start: i64,
    pub end: i64,
    /// `θ^{(i)}`.
    pub after: FrequencySequence,
    pub steps: Vec<TraceStep>,
}

/// The chain `θ^{(ℓ)} = frame, θ^{(ℓ-1)}, ..., θ^{(0)} = Λ(bla)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotionTrace {
    pub frame: FrequencySequence,
    /// Stages in application order, `i = ℓ-1` first.
    pub stages: Vec<Stage>,
}

impl MotionTrace {
    /// `θ^{(i)}` for `i = 0..=ℓ`.
    pub fn theta(&self, i: usize) -> &FrequencySequence {
        let l = self.stages.len();
        if i == l {
            &self.frame
        } else {
            &self.stages[l - 1 - i].after
        }
    }

    pub fn result(&self) -> &FrequencySequence {
        self.theta(0)
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }
}

/// Applies `λ_i` motions at `start + 2i`, right to left, to `initial`.
fn insert_parts(initial: &FrequencySequence, flat: &[FlatPart], start: i64, record: bool) -> Result<MotionTrace> {
    let mut tape = Tape::from_seq(initial);
    let mut stages = Vec::with_capacity(flat.len());
    for (i, fp) in flat.iter().enumerate().rev() {
        let at = start + 2 * i as i64;
        let mut steps = Vec::new();
        let end = run_ppm(&mut tape, at, fp.part as u64, record.then_some(&mut steps))?;
        stages.push(Stage {
            i,
            part: fp.part,
            component: fp.component,
            start: at,
            end,
            after: tape.to_seq(),
            steps,
        });
    }
    Ok(MotionTrace {
        frame: initial.clone(),
        stages,
    })
}

/// `Λ(bla, fs_u(bla))`.
pub fn lambda(bla: &MultiPartition, u: i64) -> FrequencySequence {
    lambda_with_order(bla, u, FlatteningOrder::Standard).expect("motion preconditions hold on frame sequences")
}

/// `Λ` with a chosen flattening order. Orders other than the standard one
/// can break the motion preconditions, hence the `Result`.
pub fn lambda_with_order(bla: &MultiPartition, u: i64, order: FlatteningOrder) -> Result<FrequencySequence> {
    lambda_from(&frame_for(bla, u), &bla.flatten_with(order), u)
}

/// `Λ` with the full chain of intermediate sequences.
pub fn lambda_traced(bla: &MultiPartition, u: i64, with_steps: bool) -> MotionTrace {
    let frame = frame_for(bla, u);
    insert_parts(&frame, &bla.flatten(), u, with_steps).expect("motion preconditions hold on frame sequences")
}

/// `Λ` applied to an arbitrary starting sequence whose pairs sit at
/// `start, start + 2, ...`.
pub fn lambda_from(initial: &FrequencySequence, flat: &[FlatPart], start: i64) -> Result<FrequencySequence> {
    let t = insert_parts(initial, flat, start, false)?;
    Ok(t.stages
        .last()
        .map(|s| s.after.clone())
        .unwrap_or_else(|| initial.clone()))
}

/// Inverse of `Λ` on `A_{k,u}`.
pub fn lambda_inverse(f: &FrequencySequence, u: i64, k: u32) -> Result<MultiPartition> {
    if let Some(lo) = f.min_index() {
        if lo < u {
            return Err(Error::domain(format!("{f} has support below index {u}")));
        }
    }
    if let Some(hi) = f.max_index() {
        for i in u..=hi {
            if f.get(i) + f.get(i + 1) > k {
                return Err(Error::domain(format!("{f} violates f_i + f_(i+1) ≤ {k} at index {i}")));
            }
        }
    }
    let mut tape = Tape::from_seq(f);
    let mut flat = Vec::new();
    let mut i = 0i64;
    loop {
        let at = u + 2 * i;
        if tape.max_nonzero().is_none_or(|hi| hi < at) {
            break;
        }
        let before = tape.weight();
        let h = reverse_in_place(&mut tape, at)?;
        let part = before - tape.weight();
        if part < 0 || h > k {
            return Err(Error::domain(format!("{f} has no preimage under Λ at offset {u}")));
        }
        flat.push(FlatPart {
            part: part as u32,
            component: h,
        });
        i += 1;
    }
    let bla = MultiPartition::unflatten(k as usize, &flat)
        .map_err(|_| Error::domain(format!("{f} has no preimage under Λ at offset {u}")))?;
    if lambda(&bla, u) != *f {
        return Err(Error::domain(format!("{f} has no preimage under Λ at offset {u}")));
    }
    Ok(bla)
}

/// Adds `m` to every part of `λ^{(m)}`.
pub fn plus_map(bla: &MultiPartition) -> MultiPartition {
    shift_components(bla, |m| m)
}

fn shift_components(bla: &MultiPartition, add: impl Fn(u32) -> u32) -> MultiPartition {
    MultiPartition::new(
        bla.components()
            .iter()
            .enumerate()
            .map(|(idx, p)| {
                let d = add(idx as u32 + 1);
                Partition::new(p.parts().iter().map(|&x| x + d).collect()).expect("shift keeps order")
            })
            .collect(),
    )
}

/// Warnaar's map on the O-family, via the reduction to `Λ` at offset 1 after
/// adding `max(0, m - k + r)` to the parts of `λ^{(m)}`.
pub fn tilde_lambda(bla: &MultiPartition, r: u32, k: u32) -> Result<FrequencySequence> {
    if r > k || bla.k() != k as usize {
        return Err(Error::params(format!(
            "need 0 ≤ r ≤ k and a {k}-tuple, got r={r} and a {}-tuple",
            bla.k()
        )));
    }
    let shifted = shift_components(bla, |m| (m + r).saturating_sub(k));
    Ok(lambda(&shifted, 1))
}

/// Warnaar's map by direct simulation on the staircase frame.
pub fn tilde_lambda_direct(bla: &MultiPartition, r: u32, k: u32) -> Result<FrequencySequence> {
    if r > k || bla.k() != k as usize {
        return Err(Error::params(format!("need 0 ≤ r ≤ k and a {k}-tuple")));
    }
    lambda_from(&tilde_frame(bla, r), &bla.flatten(), 1)
}

/// `φ`: rewrites `f_0` only, sending the Y-family to the Z-family.
pub fn phi(f: &FrequencySequence, j: u32, r: u32) -> Result<FrequencySequence> {
    check_nonneg_support(f)?;
    let f0 = f.get(0);
    let (j, r) = (j as i64, r as i64);
    let x = f0 as i64;
    let image = if j >= r {
        if x <= j - r {
            Some(x)
        } else {
            let d = x - (j - r);
            (d % 2 == 0 && (1..=r).contains(&(d / 2))).then(|| j - r + d / 2)
        }
    } else {
        let d = x - (r - j);
        (d >= 0 && d % 2 == 0 && d / 2 <= j).then_some(d / 2)
    };
    match image {
        Some(v) => Ok(with_f0(f, v as u32)),
        None => Err(Error::domain(format!(
            "f_0 = {f0} is not admissible for φ with j={j}, r={r}"
        ))),
    }
}

/// Inverse of [`phi`].
pub fn phi_inverse(f: &FrequencySequence, j: u32, r: u32) -> Result<FrequencySequence> {
    check_nonneg_support(f)?;
    let f0 = f.get(0);
    let (j, r) = (j as i64, r as i64);
    let x = f0 as i64;
    if x > j {
        return Err(Error::domain(format!("f_0 = {f0} exceeds j = {j}")));
    }
    let pre = if j >= r {
        if x <= j - r {
            x
        } else {
            j - r + 2 * (x - (j - r))
        }
    } else {
        r - j + 2 * x
    };
    Ok(with_f0(f, pre as u32))
}

fn check_nonneg_support(f: &FrequencySequence) -> Result<()> {
    match f.min_index() {
        Some(lo) if lo < 0 => Err(Error::domain(format!("{f} has support below index 0"))),
        _ => Ok(()),
    }
}

fn with_f0(f: &FrequencySequence, v: u32) -> FrequencySequence {
    FrequencySequence::from_entries(f.entries().filter(|&(i, _)| i != 0).chain([(0, v)]))
}

/// Text rendering of one configuration over `lo..=hi` with the focus pair in
/// brackets.
pub fn render_config(f: &FrequencySequence, lo: i64, hi: i64, focus: i64) -> String {
    let mut out = String::new();
    let mut i = lo;
    while i <= hi {
        if !out.is_empty() {
            out.push(' ');
        }
        if i == focus {
            let _ = write!(out, "[{} {}]", f.get(i), f.get(i + 1));
            i += 2;
        } else {
            let _ = write!(out, "{}", f.get(i));
            i += 1;
        }
    }
    out
}

/// Renders a motion process step by step: `⇒` marks a particle motion and
/// `→` a focus shift.
pub fn render_steps(initial: &FrequencySequence, start: i64, steps: &[TraceStep]) -> String {
    let lo = [initial.min_index(), Some(start)]
        .into_iter()
        .flatten()
        .min()
        .unwrap_or(start);
    let hi = steps
        .iter()
        .filter_map(|s| s.seq.max_index().map(|m| m.max(s.focus + 1)))
        .chain(initial.max_index())
        .chain([start + 1])
        .max()
        .unwrap_or(start + 1)
        + 1;
    let mut out = format!("indices {lo}..{hi}\n");
    let _ = writeln!(out, "  {}", render_config(initial, lo, hi, start));
    for s in steps {
        let arrow = match s.kind {
            StepKind::Motion => '⇒',
            StepKind::Shift => '→',
        };
        let _ = writeln!(out, "{arrow} {}", render_config(&s.seq, lo, hi, s.focus));
    }
    out
}

/// The worked example: five motions from index 1 on `(4, 0, 2, 1, 3, 1)`.
pub fn worked_example() -> (FrequencySequence, i64, u64) {
    (FrequencySequence::from_dense(1, vec![4, 0, 2, 1, 3, 1]), 1, 5)
}
