//! Partitions, generalised frequency sequences, multipartitions and the
//! constrained families whose weight histograms form the "set side" of the
//! catalog identities.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::motion;
use crate::qseries::TruncatedSeries;

/// A weakly decreasing sequence of non-negative parts. Zero parts count
/// toward the length but not the weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::domain(format!("parts {parts:?} are not weakly decreasing")));
        }
        Ok(Partition { parts })
    }

    /// Sorts the parts into decreasing order first.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition::default()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn weight(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// A generalised frequency sequence `(f_i)_{i ∈ Z}` with finite support.
///
/// Stored densely from the lowest non-zero index to the highest; the empty
/// sequence has no entries at all.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FrequencySequence {
    start: i64,
    counts: Vec<u32>,
}

impl FrequencySequence {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `counts[t]` is the frequency of index `start + t`.
    pub fn from_dense(start: i64, counts: Vec<u32>) -> Self {
        let mut f = FrequencySequence { start, counts };
        f.trim();
        f
    }

    /// Builds a sequence from `(index, count)` pairs; repeated indices add up.
    pub fn from_entries<I: IntoIterator<Item = (i64, u32)>>(entries: I) -> Self {
        let mut map = BTreeMap::new();
        for (i, c) in entries {
            *map.entry(i).or_insert(0u32) += c;
        }
        let Some((&lo, _)) = map.iter().find(|(_, &c)| c > 0) else {
            return Self::empty();
        };
        let hi = *map.keys().next_back().unwrap();
        let mut counts = vec![0; (hi - lo + 1) as usize];
        for (i, c) in map {
            if i >= lo {
                counts[(i - lo) as usize] = c;
            }
        }
        Self::from_dense(lo, counts)
    }

    fn trim(&mut self) {
        while self.counts.last() == Some(&0) {
            self.counts.pop();
        }
        let lead = self.counts.iter().take_while(|&&c| c == 0).count();
        if lead == self.counts.len() {
            self.counts.clear();
            self.start = 0;
        } else {
            self.counts.drain(..lead);
            self.start += lead as i64;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn get(&self, i: i64) -> u32 {
        if i < self.start {
            return 0;
        }
        self.counts.get((i - self.start) as usize).copied().unwrap_or(0)
    }

    /// Smallest index with a non-zero count.
    pub fn min_index(&self) -> Option<i64> {
        (!self.is_empty()).then_some(self.start)
    }

    /// Largest index with a non-zero count.
    pub fn max_index(&self) -> Option<i64> {
        (!self.is_empty()).then(|| self.start + self.counts.len() as i64 - 1)
    }

    /// Non-zero `(i, f_i)` in ascending index order.
    pub fn entries(&self) -> impl Iterator<Item = (i64, u32)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(move |(t, &c)| (self.start + t as i64, c))
    }

    /// Dense counts over `lo..=hi`.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<u32> {
        (lo..=hi).map(|i| self.get(i)).collect()
    }

    /// `|f| = Σ i f_i`.
    pub fn weight(&self) -> i64 {
        self.entries().map(|(i, c)| i * c as i64).sum()
    }

    /// Number of parts `Σ f_i`.
    pub fn total_count(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    /// Whether every part with index of the given parity appears an even
    /// number of times.
    pub fn parity_holds(&self, parity: Parity) -> bool {
        self.entries().all(|(i, c)| !parity.restricts(i) || c % 2 == 0)
    }
}

impl fmt::Display for FrequencySequence {
    /// `[i^f_i, ...]` with indices ascending.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (n, (i, c)) in self.entries().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}^{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for FrequencySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for FrequencySequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<(i64, u32)> = self.entries().collect();
        let mut st = serializer.serialize_struct("FrequencySequence", 2)?;
        st.serialize_field("weight", &self.weight())?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

impl PartialOrd for FrequencySequence {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FrequencySequence {
    /// Weight first, then the entry lists lexicographically.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.entries().cmp(other.entries()))
    }
}

/// Positive-index sequence to partition. Zero parts are kept.
pub fn freq_to_partition(f: &FrequencySequence) -> Result<Partition> {
    if let Some(lo) = f.min_index() {
        if lo < 0 {
            return Err(Error::domain(format!("sequence {f} has parts at negative index {lo}")));
        }
    }
    let mut parts = Vec::with_capacity(f.total_count() as usize);
    for (i, c) in f.entries().collect::<Vec<_>>().into_iter().rev() {
        parts.extend(std::iter::repeat_n(i as u32, c as usize));
    }
    Ok(Partition { parts })
}

pub fn partition_to_freq(p: &Partition) -> FrequencySequence {
    FrequencySequence::from_entries(p.parts.iter().map(|&x| (x as i64, 1)))
}

/// Which index class is required to carry even counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Parity {
    /// Odd parts appear an even number of times.
    OddPartsEven,
    /// Even parts (zero included) appear an even number of times.
    EvenPartsEven,
}

impl Parity {
    pub fn restricts(self, i: i64) -> bool {
        match self {
            Parity::OddPartsEven => i.rem_euclid(2) == 1,
            Parity::EvenPartsEven => i.rem_euclid(2) == 0,
        }
    }

    /// The parity relevant to frames at offset `u` (the class not hit by `u`).
    pub fn for_offset(u: i64) -> Self {
        if u.rem_euclid(2) == 0 {
            Parity::OddPartsEven
        } else {
            Parity::EvenPartsEven
        }
    }
}

/// A k-tuple of partitions. Component `m` (1-based) is `λ^{(m)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct MultiPartition {
    components: Vec<Partition>,
}

/// One entry `λ_i` of the flattened multipartition together with the
/// component it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlatPart {
    pub part: u32,
    pub component: u32,
}

/// How the components are concatenated before renaming into `λ_{ℓ-1},...,λ_0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FlatteningOrder {
    /// `λ^{(1)}` first, each component in its written (decreasing) order.
    #[default]
    Standard,
    /// `λ^{(k)}` first. Only used to check that the suites notice.
    ComponentsSwapped,
}

impl MultiPartition {
    pub fn new(components: Vec<Partition>) -> Self {
        MultiPartition { components }
    }

    pub fn empty(k: usize) -> Self {
        MultiPartition {
            components: vec![Partition::empty(); k],
        }
    }

    pub fn k(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Partition] {
        &self.components
    }

    /// `λ^{(m)}`, 1-based.
    pub fn component(&self, m: usize) -> &Partition {
        &self.components[m - 1]
    }

    pub fn total_len(&self) -> usize {
        self.components.iter().map(Partition::len).sum()
    }

    pub fn weight(&self) -> u64 {
        self.components.iter().map(Partition::weight).sum()
    }

    /// Profile `s_1 ≥ ... ≥ s_k` with `s_m = Σ_{m' ≥ m} len(λ^{(m')})`.
    pub fn profile(&self) -> Vec<u32> {
        let mut s = vec![0u32; self.k()];
        let mut acc = 0u32;
        for m in (0..self.k()).rev() {
            acc += self.components[m].len() as u32;
            s[m] = acc;
        }
        s
    }

    /// `λ_0, λ_1, ..., λ_{ℓ-1}` (index `i` of the result is `λ_i`).
    pub fn flatten(&self) -> Vec<FlatPart> {
        self.flatten_with(FlatteningOrder::Standard)
    }

    pub fn flatten_with(&self, order: FlatteningOrder) -> Vec<FlatPart> {
        let mut concat = Vec::with_capacity(self.total_len());
        let push = |concat: &mut Vec<FlatPart>, m: usize| {
            for &p in self.components[m].parts() {
                concat.push(FlatPart {
                    part: p,
                    component: m as u32 + 1,
                });
            }
        };
        match order {
            FlatteningOrder::Standard => (0..self.k()).for_each(|m| push(&mut concat, m)),
            FlatteningOrder::ComponentsSwapped => (0..self.k()).rev().for_each(|m| push(&mut concat, m)),
        }
        concat.reverse();
        concat
    }

    /// Inverse of [`MultiPartition::flatten`]: rebuilds the tuple from
    /// `λ_0, ..., λ_{ℓ-1}` and their component labels.
    pub fn unflatten(k: usize, flat: &[FlatPart]) -> Result<Self> {
        let mut comps = vec![Vec::new(); k];
        let mut last_component = 0;
        for fp in flat.iter().rev() {
            if fp.component == 0 || fp.component as usize > k {
                return Err(Error::domain(format!(
                    "component label {} outside 1..={k}",
                    fp.component
                )));
            }
            if fp.component < last_component {
                return Err(Error::domain("component labels are not non-increasing in i"));
            }
            last_component = fp.component;
            comps[fp.component as usize - 1].push(fp.part);
        }
        let components = comps.into_iter().map(Partition::new).collect::<Result<Vec<_>>>()?;
        Ok(MultiPartition { components })
    }
}

impl fmt::Display for MultiPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for MultiPartition {
    type Err = Error;

    /// Components separated by `;`, parts by `,`: `"2,1;;3"` is `((2,1),(),(3))`.
    fn from_str(s: &str) -> Result<Self> {
        let components = s
            .split(';')
            .map(|c| {
                let c = c.trim().trim_start_matches('(').trim_end_matches(')');
                if c.is_empty() {
                    return Ok(Partition::empty());
                }
                let parts = c
                    .split(',')
                    .map(|p| {
                        p.trim()
                            .parse::<u32>()
                            .map_err(|e| Error::usage(format!("bad part {p:?}: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Partition::new(parts)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiPartition { components })
    }
}

/// The named families of frequency sequences and multipartition/frame pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "family")]
pub enum SetSpec {
    W { k: u32, a: u32 },
    Wbar { k: u32, a: u32 },
    A { k: u32, u: i64 },
    B { r: u32, k: u32 },
    X { j: u32, r: u32, k: u32, u: i64 },
    Y { j: u32, r: u32, k: u32, u: i64 },
    Z { j: u32, r: u32, k: u32, u: i64 },
    Xo { j: u32, r: u32, k: u32 },
    Yo { j: u32, r: u32, k: u32 },
    Zo { j: u32, r: u32, k: u32 },
    Xe { a: u32, b: u32, k: u32 },
    Ye { a: u32, b: u32, k: u32 },
    Ze { a: u32, b: u32, k: u32 },
    XeTilde { a: u32, b: u32, k: u32 },
    ZeTilde { a: u32, b: u32, k: u32 },
    O { r: u32, k: u32 },
}

/// Boundary condition on the first two admissible entries `f_u, f_{u+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Boundary {
    None,
    /// `f_u ≤ c`.
    FirstAtMost(u32),
    /// `f_u` lies in the given set.
    FirstIn(Vec<u32>),
    /// `f_u ≤ j` and `2 f_u + f_{u+1} ≤ kr + j`, i.e.
    /// `f_u ≤ j - max(f_u + f_{u+1} - kr, 0)`.
    ZLike {
        j: u32,
        kr: i64,
    },
}

/// Descriptor of a family of frequency sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqConstraints {
    /// `f_i = 0` for `i < min_index`.
    pub min_index: i64,
    /// `f_i + f_{i+1} ≤ adjacency` everywhere.
    pub adjacency: u32,
    pub boundary: Boundary,
    pub parity: Option<Parity>,
}

impl SeqConstraints {
    pub fn satisfied_by(&self, f: &FrequencySequence) -> bool {
        if let Some(lo) = f.min_index() {
            if lo < self.min_index {
                return false;
            }
        }
        let u = self.min_index;
        if let Some(hi) = f.max_index() {
            for i in u..=hi {
                if f.get(i) + f.get(i + 1) > self.adjacency {
                    return false;
                }
            }
        }
        let (f0, f1) = (f.get(u), f.get(u + 1));
        let boundary_ok = match &self.boundary {
            Boundary::None => true,
            Boundary::FirstAtMost(c) => f0 <= *c,
            Boundary::FirstIn(set) => set.contains(&f0),
            Boundary::ZLike { j, kr } => f0 <= *j && 2 * f0 as i64 + f1 as i64 <= kr + *j as i64,
        };
        boundary_ok && self.parity.is_none_or(|p| f.parity_holds(p))
    }

    fn first_allowed(&self, f0: u32) -> bool {
        match &self.boundary {
            Boundary::None => true,
            Boundary::FirstAtMost(c) => f0 <= *c,
            Boundary::FirstIn(set) => set.contains(&f0),
            Boundary::ZLike { j, .. } => f0 <= *j,
        }
    }

    fn second_allowed(&self, f0: u32, f1: u32) -> bool {
        match &self.boundary {
            Boundary::ZLike { j, kr } => 2 * f0 as i64 + f1 as i64 <= kr + *j as i64,
            _ => true,
        }
    }

    fn parity_allows(&self, i: i64, c: u32) -> bool {
        match self.parity {
            Some(p) if p.restricts(i) => c.is_multiple_of(2),
            _ => true,
        }
    }

    /// Calls `visit` on every member of weight at most `max_weight`, in
    /// depth-first index order.
    pub fn for_each<F: FnMut(&[u32], i64)>(&self, max_weight: i64, mut visit: F) {
        let mut buf = Vec::new();
        self.dfs(self.min_index, 0, max_weight, &mut buf, &mut visit);
    }

    fn dfs<F: FnMut(&[u32], i64)>(&self, i: i64, weight: i64, max_weight: i64, buf: &mut Vec<u32>, visit: &mut F) {
        let u = self.min_index;
        let prev = buf.last().copied().unwrap_or(0);
        // Every later index i' ≥ max(i, 1) with f_{i'} > 0 adds at least i'.
        // Non-positive indices can only lower the weight by a bounded amount,
        // so the search must reach index 1 before it may stop.
        if i >= 1 && i > max_weight - weight {
            // Only the all-zero tail remains, but the boundary may still
            // constrain f_u and f_{u+1}.
            let ok = weight <= max_weight
                && match buf.len() {
                    0 => self.first_allowed(0) && self.second_allowed(0, 0),
                    1 => self.second_allowed(buf[0], 0),
                    _ => true,
                };
            if ok {
                visit(buf, weight);
            }
            return;
        }
        let room = self.adjacency.saturating_sub(prev);
        let cap = if i >= 1 {
            room.min(((max_weight - weight) / i) as u32)
        } else {
            room
        };
        for c in 0..=cap {
            if !self.parity_allows(i, c) {
                continue;
            }
            if i == u && !self.first_allowed(c) {
                continue;
            }
            if i == u + 1 && !self.second_allowed(buf[0], c) {
                continue;
            }
            buf.push(c);
            self.dfs(i + 1, weight + i * c as i64, max_weight, buf, visit);
            buf.pop();
        }
    }
}

fn zlike(j: u32, r: i64, k: u32) -> Boundary {
    Boundary::ZLike { j, kr: k as i64 - r }
}

/// `{ℓ + max(ℓ - (j - r), 0) : 0 ≤ ℓ ≤ j}`.
fn y_values(j: u32, r: u32) -> Vec<u32> {
    let d = j as i64 - r as i64;
    (0..=j as i64).map(|l| (l + (l - d).max(0)) as u32).collect()
}

/// `{2(ℓ + max(ℓ - (a - b), 0)) : 0 ≤ ℓ ≤ a}`.
fn ye_values(a: u32, b: u32) -> Vec<u32> {
    y_values(a, b).into_iter().map(|v| 2 * v).collect()
}

/// Multipartition families: per-component minimum part, parity of parts,
/// and the frame they are paired with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleConstraints {
    pub k: u32,
    /// Minimum part for component `m`, stored at index `m - 1`.
    pub min_part: Vec<u32>,
    pub even_parts: bool,
    pub frame: FrameKind,
}

/// The frame attached to a multipartition in an X- or O-family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameKind {
    /// `fs_u`.
    Offset(i64),
    /// The staircase frame starting at index 1 whose pairs for value `i` are
    /// `(min(k - r, i), max(0, i - k + r))`.
    Tilde { r: u32 },
}

impl TupleConstraints {
    pub fn frame_of(&self, bla: &MultiPartition) -> FrequencySequence {
        match self.frame {
            FrameKind::Offset(u) => motion::frame_for(bla, u),
            FrameKind::Tilde { r } => motion::tilde_frame(bla, r),
        }
    }

    pub fn frame_weight(&self, profile: &[u32]) -> i64 {
        match self.frame {
            FrameKind::Offset(u) => motion::frame_weight(profile, u),
            FrameKind::Tilde { r } => motion::tilde_frame_weight(profile, self.k, r),
        }
    }

    pub fn admits(&self, bla: &MultiPartition) -> bool {
        bla.k() == self.k as usize
            && bla.components().iter().enumerate().all(|(m, p)| {
                p.parts()
                    .iter()
                    .all(|&x| x >= self.min_part[m] && (!self.even_parts || x % 2 == 0))
            })
    }
}

/// An element of a multipartition family: the tuple and its frame.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FramedTuple {
    pub bla: MultiPartition,
    pub frame: FrequencySequence,
}

impl FramedTuple {
    /// `|bla| + |frame|`.
    pub fn weight(&self) -> i64 {
        self.bla.weight() as i64 + self.frame.weight()
    }
}

/// What a family is made of.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Compiled {
    Sequences(SeqConstraints),
    Tuples(TupleConstraints),
}

/// An element handed to [`satisfies`].
#[derive(Debug, Clone, Copy)]
pub enum Element<'a> {
    Seq(&'a FrequencySequence),
    Tuple(&'a MultiPartition, &'a FrequencySequence),
}

fn clamp_min(v: i64) -> u32 {
    v.max(0) as u32
}

impl SetSpec {
    pub fn name(&self) -> &'static str {
        match self {
            SetSpec::W { .. } => "W",
            SetSpec::Wbar { .. } => "Wbar",
            SetSpec::A { .. } => "A",
            SetSpec::B { .. } => "B",
            SetSpec::X { .. } => "X",
            SetSpec::Y { .. } => "Y",
            SetSpec::Z { .. } => "Z",
            SetSpec::Xo { .. } => "Xo",
            SetSpec::Yo { .. } => "Yo",
            SetSpec::Zo { .. } => "Zo",
            SetSpec::Xe { .. } => "Xe",
            SetSpec::Ye { .. } => "Ye",
            SetSpec::Ze { .. } => "Ze",
            SetSpec::XeTilde { .. } => "XeTilde",
            SetSpec::ZeTilde { .. } => "ZeTilde",
            SetSpec::O { .. } => "O",
        }
    }

    pub const NAMES: [&'static str; 16] = [
        "W", "Wbar", "A", "B", "X", "Y", "Z", "Xo", "Yo", "Zo", "Xe", "Ye", "Ze", "XeTilde", "ZeTilde", "O",
    ];

    /// Builds a family from its name, reading parameters through `arg`.
    pub fn from_name(name: &str, arg: impl Fn(&str) -> Option<i64>) -> Result<SetSpec> {
        let nat = |p: &str| -> Result<u32> {
            let v = arg(p).ok_or_else(|| Error::usage(format!("family {name} needs parameter {p}")))?;
            u32::try_from(v).map_err(|_| Error::params(format!("{p} must be non-negative, got {v}")))
        };
        let int = |p: &str| arg(p).ok_or_else(|| Error::usage(format!("family {name} needs parameter {p}")));
        let spec = match name {
            "W" => SetSpec::W {
                k: nat("k")?,
                a: nat("a")?,
            },
            "Wbar" => SetSpec::Wbar {
                k: nat("k")?,
                a: nat("a")?,
            },
            "A" => SetSpec::A {
                k: nat("k")?,
                u: int("u")?,
            },
            "B" => SetSpec::B {
                r: nat("r")?,
                k: nat("k")?,
            },
            "X" => SetSpec::X {
                j: nat("j")?,
                r: nat("r")?,
                k: nat("k")?,
                u: int("u")?,
            },
            "Y" => SetSpec::Y {
                j: nat("j")?,
                r: nat("r")?,
                k: nat("k")?,
                u: int("u")?,
            },
            "Z" => SetSpec::Z {
                j: nat("j")?,
                r: nat("r")?,
                k: nat("k")?,
                u: int("u")?,
            },
            "Xo" => SetSpec::Xo {
                j: nat("j")?,
                r: nat("r")?,
                k: nat("k")?,
            },
            "Yo" => SetSpec::Yo {
                j: nat("j")?,
                r: nat("r")?,
                k: nat("k")?,
            },
            "Zo" => SetSpec::Zo {
                j: nat("j")?,
                r: nat("r")?,
                k: nat("k")?,
            },
            "Xe" => SetSpec::Xe {
                a: nat("a")?,
                b: nat("b")?,
                k: nat("k")?,
            },
            "Ye" => SetSpec::Ye {
                a: nat("a")?,
                b: nat("b")?,
                k: nat("k")?,
            },
            "Ze" => SetSpec::Ze {
                a: nat("a")?,
                b: nat("b")?,
                k: nat("k")?,
            },
            "XeTilde" => SetSpec::XeTilde {
                a: nat("a")?,
                b: nat("b")?,
                k: nat("k")?,
            },
            "ZeTilde" => SetSpec::ZeTilde {
                a: nat("a")?,
                b: nat("b")?,
                k: nat("k")?,
            },
            "O" => SetSpec::O {
                r: nat("r")?,
                k: nat("k")?,
            },
            other => {
                return Err(Error::usage(format!(
                    "unknown family {other}; expected one of {}",
                    Self::NAMES.join(", ")
                )))
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks the family's parameter constraints.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::params(format!("{}: {msg}", self.name())));
        match *self {
            SetSpec::W { k, a } | SetSpec::Wbar { k, a } if a > k => bad(format!("need a ≤ k, got a={a} k={k}")),
            SetSpec::B { r, k } | SetSpec::O { r, k } if r > k => bad(format!("need r ≤ k, got r={r} k={k}")),
            SetSpec::B { k: 0, .. } | SetSpec::O { k: 0, .. } => bad("need k ≥ 1".into()),
            SetSpec::X { j, r, k, .. }
            | SetSpec::Y { j, r, k, .. }
            | SetSpec::Z { j, r, k, .. }
            | SetSpec::Xo { j, r, k }
            | SetSpec::Yo { j, r, k }
            | SetSpec::Zo { j, r, k }
                if j + r > k =>
            {
                bad(format!("need j + r ≤ k, got j={j} r={r} k={k}"))
            }
            SetSpec::Xe { a, b, k } | SetSpec::Ye { a, b, k } if 2 * a + 2 * b > k => {
                bad(format!("need 2a + 2b ≤ k, got a={a} b={b} k={k}"))
            }
            // one step wider than its X and Y partners so that the splitting
            // relation with the tilde family can reach b = (k + 1 - 2a) / 2
            SetSpec::Ze { a, b, k } if 2 * a + 2 * b > k + 1 => {
                bad(format!("need 2a + 2b ≤ k + 1, got a={a} b={b} k={k}"))
            }
            SetSpec::XeTilde { a, b, k } | SetSpec::ZeTilde { a, b, k } if 2 * (a + b) > k + 1 => {
                bad(format!("need 2a + 2b - 1 ≤ k, got a={a} b={b} k={k}"))
            }
            _ => Ok(()),
        }
    }

    /// Lowers the family to a constraint descriptor.
    pub fn compile(&self) -> Result<Compiled> {
        self.validate()?;
        let seq = |min_index, adjacency, boundary, parity| {
            Ok(Compiled::Sequences(SeqConstraints {
                min_index,
                adjacency,
                boundary,
                parity,
            }))
        };
        match *self {
            SetSpec::W { k, a } => seq(1, k, Boundary::FirstAtMost(a), Some(Parity::EvenPartsEven)),
            SetSpec::Wbar { k, a } => seq(1, k, Boundary::FirstAtMost(a), Some(Parity::OddPartsEven)),
            SetSpec::A { k, u } => seq(u, k, Boundary::None, None),
            SetSpec::B { r, k } => seq(1, k, Boundary::FirstAtMost(k - r), None),
            SetSpec::Y { j, r, k, u } => seq(u, k, Boundary::FirstIn(y_values(j, r)), None),
            SetSpec::Z { j, r, k, u } => seq(u, k, zlike(j, r as i64, k), None),
            SetSpec::Yo { j, r, k } => seq(0, k, Boundary::FirstIn(y_values(j, r)), Some(Parity::OddPartsEven)),
            SetSpec::Zo { j, r, k } => seq(0, k, zlike(j, r as i64, k), Some(Parity::OddPartsEven)),
            SetSpec::Ye { a, b, k } => seq(0, k, Boundary::FirstIn(ye_values(a, b)), Some(Parity::EvenPartsEven)),
            SetSpec::Ze { a, b, k } => seq(0, k, zlike(2 * a, 2 * b as i64, k), Some(Parity::EvenPartsEven)),
            SetSpec::ZeTilde { a, b, k } => seq(0, k, zlike(2 * a, 2 * b as i64 - 1, k), Some(Parity::EvenPartsEven)),
            SetSpec::X { j, r, k, u } => Ok(Compiled::Tuples(TupleConstraints {
                k,
                min_part: x_min_parts(j, r, k),
                even_parts: false,
                frame: FrameKind::Offset(u),
            })),
            SetSpec::Xo { j, r, k } => Ok(Compiled::Tuples(TupleConstraints {
                k,
                min_part: x_min_parts(j, r, k),
                even_parts: true,
                frame: FrameKind::Offset(0),
            })),
            SetSpec::Xe { a, b, k } => Ok(Compiled::Tuples(TupleConstraints {
                k,
                min_part: xe_min_parts(a, b as i64, k, 0),
                even_parts: true,
                frame: FrameKind::Offset(-1),
            })),
            SetSpec::XeTilde { a, b, k } => Ok(Compiled::Tuples(TupleConstraints {
                k,
                min_part: xe_min_parts(a, b as i64, k, 1),
                even_parts: true,
                frame: FrameKind::Offset(-1),
            })),
            SetSpec::O { r, k } => Ok(Compiled::Tuples(TupleConstraints {
                k,
                min_part: vec![0; k as usize],
                even_parts: false,
                frame: FrameKind::Tilde { r },
            })),
        }
    }
}

/// `m - j + max(m - (k - r), 0)`, floored at zero.
pub fn x_min_parts(j: u32, r: u32, k: u32) -> Vec<u32> {
    (1..=k as i64)
        .map(|m| clamp_min(m - j as i64 + (m - (k as i64 - r as i64)).max(0)))
        .collect()
}

/// `m + max(m - 2a, 0) + max(m - (k - 2b + extra), 0)`.
fn xe_min_parts(a: u32, b: i64, k: u32, extra: i64) -> Vec<u32> {
    (1..=k as i64)
        .map(|m| clamp_min(m + (m - 2 * a as i64).max(0) + (m - (k as i64 - 2 * b + extra)).max(0)))
        .collect()
}

/// Membership test.
pub fn satisfies(spec: &SetSpec, element: Element<'_>) -> Result<bool> {
    match (spec.compile()?, element) {
        (Compiled::Sequences(c), Element::Seq(f)) => Ok(c.satisfied_by(f)),
        (Compiled::Tuples(t), Element::Tuple(bla, frame)) => Ok(t.admits(bla) && t.frame_of(bla) == *frame),
        _ => Err(Error::usage(format!(
            "element kind does not match family {}",
            spec.name()
        ))),
    }
}

/// Members of a family, sorted by weight and then by entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Members {
    Sequences(Vec<FrequencySequence>),
    Tuples(Vec<FramedTuple>),
}

impl Members {
    pub fn len(&self) -> usize {
        match self {
            Members::Sequences(v) => v.len(),
            Members::Tuples(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn weights(&self) -> Vec<i64> {
        match self {
            Members::Sequences(v) => v.iter().map(FrequencySequence::weight).collect(),
            Members::Tuples(v) => v.iter().map(FramedTuple::weight).collect(),
        }
    }
}

/// Every member of weight at most `max_weight`.
pub fn enumerate_set(spec: &SetSpec, max_weight: i64) -> Result<Members> {
    match spec.compile()? {
        Compiled::Sequences(c) => {
            let mut out = Vec::new();
            c.for_each(max_weight, |buf, _| {
                out.push(FrequencySequence::from_dense(c.min_index, buf.to_vec()))
            });
            out.sort();
            Ok(Members::Sequences(out))
        }
        Compiled::Tuples(t) => {
            let mut out = Vec::new();
            for_each_tuple(&t, max_weight, |bla, w| {
                let frame = t.frame_of(bla);
                debug_assert_eq!(w, bla.weight() as i64 + frame.weight());
                out.push(FramedTuple {
                    bla: bla.clone(),
                    frame,
                });
            });
            out.sort_by(|x, y| x.weight().cmp(&y.weight()).then_with(|| x.bla.cmp(&y.bla)));
            Ok(Members::Tuples(out))
        }
    }
}

/// Generating function `Σ q^{|element|}` through `max_weight`. Families whose
/// members may have negative weight give a Laurent series.
pub fn weight_histogram(spec: &SetSpec, max_weight: usize) -> Result<TruncatedSeries> {
    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
    match spec.compile()? {
        Compiled::Sequences(c) => c.for_each(max_weight as i64, |_, w| *counts.entry(w).or_insert(0) += 1),
        Compiled::Tuples(t) => for_each_tuple(&t, max_weight as i64, |_, w| *counts.entry(w).or_insert(0) += 1),
    }
    Ok(histogram_series(&counts, max_weight))
}

pub(crate) fn histogram_series(counts: &BTreeMap<i64, u64>, order: usize) -> TruncatedSeries {
    let Some((&lo, _)) = counts.iter().next() else {
        return TruncatedSeries::zero(order);
    };
    let lo = lo.min(0);
    let coeffs = (lo..=order as i64)
        .map(|w| BigInt::from(counts.get(&w).copied().unwrap_or(0)))
        .collect();
    TruncatedSeries::from_window(order, lo, coeffs)
}

/// All k-tuples with parts of `λ^{(m)}` at least `min_part[m-1]` (and even
/// when requested) whose pair weight `|bla| + |fs_u(bla)|` is at most
/// `max_total_weight`, paired with their frames.
pub fn enumerate_multipartitions(
    k: u32,
    min_part: &[u32],
    even_parts: bool,
    max_total_weight: i64,
    u: i64,
) -> Vec<(MultiPartition, FrequencySequence)> {
    let t = TupleConstraints {
        k,
        min_part: min_part.to_vec(),
        even_parts,
        frame: FrameKind::Offset(u),
    };
    let mut out = Vec::new();
    for_each_tuple(&t, max_total_weight, |bla, _| {
        out.push((bla.clone(), motion::frame_for(bla, u)))
    });
    out
}

/// Visits every admissible tuple with pair weight at most `max_weight`.
pub fn for_each_tuple<F: FnMut(&MultiPartition, i64)>(t: &TupleConstraints, max_weight: i64, mut visit: F) {
    let k = t.k as usize;
    if k == 0 {
        if max_weight >= 0 {
            visit(&MultiPartition::empty(0), 0);
        }
        return;
    }
    // Effective smallest part per component.
    let base: Vec<u32> = t
        .min_part
        .iter()
        .map(|&p| if t.even_parts && p % 2 == 1 { p + 1 } else { p })
        .collect();
    let step = if t.even_parts { 2 } else { 1 };
    let mut profiles = Vec::new();
    let mut s = vec![0u32; k];
    collect_profiles(t, &base, max_weight, 0, u32::MAX, &mut s, &mut profiles);
    for (profile, floor) in profiles {
        let lens: Vec<usize> = (0..k)
            .map(|m| (profile[m] - profile.get(m + 1).copied().unwrap_or(0)) as usize)
            .collect();
        // floor already includes the frame weight and every part at its minimum.
        let budget = (max_weight - floor) as u64;
        let mut comps: Vec<Partition> = vec![Partition::empty(); k];
        fill_components(&lens, &base, step, budget, 0, &mut comps, &mut |comps, extra| {
            let bla = MultiPartition::new(comps.to_vec());
            visit(&bla, floor + extra as i64);
        });
    }
}

/// Collects every profile whose minimal pair weight fits, with that weight.
fn collect_profiles(
    t: &TupleConstraints,
    base: &[u32],
    max_weight: i64,
    m: usize,
    cap: u32,
    s: &mut Vec<u32>,
    out: &mut Vec<(Vec<u32>, i64)>,
) {
    let k = s.len();
    if m == k {
        let w = minimal_weight(t, base, s);
        if w <= max_weight {
            out.push((s.clone(), w));
        }
        return;
    }
    // s_m ranges up to the previous value; a generous absolute cap keeps the
    // search finite since the frame weight grows quadratically in s_1.
    let hard = profile_cap(t, max_weight);
    for v in 0..=cap.min(hard) {
        s[m] = v;
        for x in s.iter_mut().skip(m + 1) {
            *x = 0;
        }
        // Later entries can lower the frame weight when u < 1, so this only
        // skips values whose prefix alone is already too heavy.
        if prefix_lower_bound(t, s, m) > max_weight {
            continue;
        }
        collect_profiles(t, base, max_weight, m + 1, v, s, out);
    }
    s[m] = 0;
}

fn profile_cap(t: &TupleConstraints, max_weight: i64) -> u32 {
    // Frame weight is at least s_1^2 + c s_1 - C for frame-dependent c, C.
    let lin = match t.frame {
        FrameKind::Offset(u) => u - 1,
        FrameKind::Tilde { .. } => 0,
    };
    let k = t.k as i64;
    let worst_other = if lin < 0 { (lin * lin + 3) / 4 } else { 0 };
    let mut s = 0i64;
    while (s + 1) * (s + 1) + lin * (s + 1) - (k - 1) * worst_other <= max_weight {
        s += 1;
    }
    s as u32
}

/// A lower bound for the pair weight of any completion of the prefix `s[..=m]`.
fn prefix_lower_bound(t: &TupleConstraints, s: &[u32], m: usize) -> i64 {
    let lin = match t.frame {
        FrameKind::Offset(u) => u - 1,
        FrameKind::Tilde { .. } => 0,
    };
    let worst = if lin < 0 { -((lin * lin + 3) / 4) } else { 0 };
    let prefix: i64 = s[..=m]
        .iter()
        .map(|&v| {
            let v = v as i64;
            v * v + lin * v
        })
        .sum();
    prefix + (s.len() - m - 1) as i64 * worst
}

fn minimal_weight(t: &TupleConstraints, base: &[u32], s: &[u32]) -> i64 {
    let k = s.len();
    let mut w = t.frame_weight(s);
    for m in 0..k {
        let len = s[m] - s.get(m + 1).copied().unwrap_or(0);
        w += len as i64 * base[m] as i64;
    }
    w
}

/// Distributes `budget` extra weight over the components, whose lengths and
/// minimum parts are fixed.
fn fill_components<F: FnMut(&[Partition], u64)>(
    lens: &[usize],
    base: &[u32],
    step: u32,
    budget: u64,
    m: usize,
    comps: &mut Vec<Partition>,
    visit: &mut F,
) {
    if m == lens.len() {
        let used: u64 = comps
            .iter()
            .zip(lens.iter().zip(base))
            .map(|(p, (&l, &b))| p.weight() - l as u64 * b as u64)
            .sum();
        visit(comps, used);
        return;
    }
    let used_before: u64 = comps[..m]
        .iter()
        .zip(lens.iter().zip(base))
        .map(|(p, (&l, &b))| p.weight() - l as u64 * b as u64)
        .sum();
    let remaining = budget - used_before;
    // Parts above the minimum, in units of `step`, form a partition with at
    // most lens[m] parts of weight ≤ remaining / step.
    let units = remaining / step as u64;
    let mut parts = Vec::new();
    each_bounded_partition(lens[m], units, u64::MAX, &mut parts, &mut |extra| {
        let p: Vec<u32> = (0..lens[m])
            .map(|i| base[m] + step * extra.get(i).copied().unwrap_or(0) as u32)
            .collect();
        comps[m] = Partition { parts: p };
        fill_components(lens, base, step, budget, m + 1, comps, visit);
    });
    comps[m] = Partition::empty();
}

/// Partitions into at most `slots` positive parts, each ≤ `max_part`, of
/// weight ≤ `budget`, with parts listed decreasingly.
fn each_bounded_partition<F: FnMut(&[u64])>(
    slots: usize,
    budget: u64,
    max_part: u64,
    parts: &mut Vec<u64>,
    visit: &mut F,
) {
    visit(parts);
    if slots == 0 {
        return;
    }
    for p in 1..=budget.min(max_part) {
        parts.push(p);
        each_bounded_partition(slots - 1, budget - p, p, parts, visit);
        parts.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fs(entries: &[(i64, u32)]) -> FrequencySequence {
        FrequencySequence::from_entries(entries.iter().copied())
    }

    fn counts(spec: SetSpec, n: usize) -> Vec<i64> {
        weight_histogram(&spec, n)
            .unwrap()
            .dense()
            .unwrap()
            .into_iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect()
    }

    #[test]
    fn example_weight_and_partition() {
        let f = fs(&[(1, 4), (3, 2), (5, 3), (6, 1)]);
        assert_eq!(f.weight(), 31);
        let p = Partition::new(vec![6, 5, 5, 5, 3, 3, 1, 1, 1, 1]).unwrap();
        assert_eq!(freq_to_partition(&f).unwrap(), p);
        assert_eq!(partition_to_freq(&p), f);
        assert_eq!(FrequencySequence::empty().weight(), 0);
        assert_eq!(fs(&[(0, 5)]).weight(), 0);
    }

    #[test]
    fn zero_parts_and_negative_indices() {
        let p = Partition::new(vec![0, 0]).unwrap();
        assert_eq!(partition_to_freq(&p), fs(&[(0, 2)]));
        assert_eq!(freq_to_partition(&fs(&[(0, 2)])).unwrap(), p);
        assert!(freq_to_partition(&fs(&[(-1, 1)])).is_err());
        assert_eq!(
            freq_to_partition(&FrequencySequence::empty()).unwrap(),
            Partition::empty()
        );
    }

    #[test]
    fn trimming_is_canonical() {
        let a = FrequencySequence::from_dense(-2, vec![0, 0, 1, 0, 2, 0]);
        let b = fs(&[(0, 1), (2, 2)]);
        assert_eq!(a, b);
        assert_eq!(a.min_index(), Some(0));
        assert_eq!(a.max_index(), Some(2));
        assert_eq!(a.to_string(), "[0^1, 2^2]");
        assert_eq!(FrequencySequence::from_dense(5, vec![0, 0]), FrequencySequence::empty());
    }

    #[test]
    fn satisfies_examples() {
        let zo = SetSpec::Zo { j: 1, r: 0, k: 2 };
        assert!(satisfies(&zo, Element::Seq(&fs(&[(0, 1), (2, 1)]))).unwrap());
        assert!(!satisfies(&zo, Element::Seq(&fs(&[(1, 1)]))).unwrap());
        let wbar = SetSpec::Wbar { k: 1, a: 0 };
        assert!(satisfies(&wbar, Element::Seq(&fs(&[(2, 1), (4, 1)]))).unwrap());
        assert!(!satisfies(&wbar, Element::Seq(&fs(&[(1, 1)]))).unwrap());
    }

    #[test]
    fn histogram_examples() {
        assert_eq!(counts(SetSpec::Wbar { k: 1, a: 0 }, 6), vec![1, 0, 1, 0, 1, 0, 2]);
        assert_eq!(counts(SetSpec::Zo { j: 0, r: 0, k: 1 }, 6), vec![1, 0, 1, 0, 1, 0, 2]);
        assert_eq!(counts(SetSpec::W { k: 0, a: 0 }, 6), vec![1, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn zero_weight_members_are_listed() {
        // Z_{1,0,1,0}: f_0 ∈ {0, 1} both have weight 0.
        let m = enumerate_set(&SetSpec::Z { j: 1, r: 0, k: 1, u: 0 }, 0).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(counts(SetSpec::Z { j: 1, r: 0, k: 1, u: 0 }, 0), vec![2]);
    }

    #[test]
    fn enumerate_is_sorted_and_unique() {
        let spec = SetSpec::Ze { a: 1, b: 0, k: 3 };
        let Members::Sequences(v) = enumerate_set(&spec, 12).unwrap() else {
            panic!()
        };
        for w in v.windows(2) {
            assert!(w[0] < w[1]);
        }
        for f in &v {
            assert!(satisfies(&spec, Element::Seq(f)).unwrap());
        }
    }

    #[test]
    fn multipartition_enumeration_small() {
        let got = enumerate_multipartitions(1, &[0], true, 2, 0);
        let mut items: Vec<(String, i64)> = got
            .iter()
            .map(|(b, f)| (b.to_string(), b.weight() as i64 + f.weight()))
            .collect();
        items.sort();
        assert!(items.contains(&("(())".to_string(), 0)));
        assert!(items.contains(&("((0))".to_string(), 0)));
        assert!(items.contains(&("((2))".to_string(), 2)));
        // ((0,0)) sits at frame weight 4 - 2 = 2
        assert!(items.contains(&("((0,0))".to_string(), 2)));
        assert_eq!(items.len(), 4);
        assert!(enumerate_multipartitions(3, &[0, 0, 0], false, -1, 0).is_empty());
    }

    #[test]
    fn flattening_order() {
        let bla: MultiPartition = "3,1;5".parse().unwrap();
        let flat = bla.flatten();
        // concatenation is (3, 1, 5); λ_0 is its last entry
        let parts: Vec<u32> = flat.iter().map(|p| p.part).collect();
        let comps: Vec<u32> = flat.iter().map(|p| p.component).collect();
        assert_eq!(parts, vec![5, 1, 3]);
        assert_eq!(comps, vec![2, 1, 1]);
        assert_eq!(MultiPartition::unflatten(2, &flat).unwrap(), bla);
        assert_eq!(bla.profile(), vec![3, 1]);
        let swapped: Vec<u32> = bla
            .flatten_with(FlatteningOrder::ComponentsSwapped)
            .iter()
            .map(|p| p.part)
            .collect();
        assert_eq!(swapped, vec![1, 3, 5]);
    }

    #[test]
    fn parse_multipartition() {
        let bla: MultiPartition = "2,1;;3".parse().unwrap();
        assert_eq!(bla.k(), 3);
        assert_eq!(bla.to_string(), "((2,1), (), (3))");
        assert!("1,2".parse::<MultiPartition>().is_err());
        assert!("x".parse::<MultiPartition>().is_err());
    }

    #[test]
    fn invalid_family_parameters() {
        assert!(SetSpec::Zo { j: 2, r: 1, k: 2 }.validate().is_err());
        assert!(SetSpec::Ze { a: 1, b: 1, k: 3 }.validate().is_ok());
        assert!(SetSpec::Ze { a: 1, b: 1, k: 2 }.validate().is_err());
        assert!(SetSpec::Xe { a: 1, b: 1, k: 3 }.validate().is_err());
        assert!(SetSpec::ZeTilde { a: 1, b: 1, k: 3 }.validate().is_ok());
        assert!(SetSpec::B { r: 3, k: 2 }.validate().is_err());
    }

    #[test]
    fn element_kind_mismatch() {
        let f = FrequencySequence::empty();
        assert!(satisfies(&SetSpec::Xo { j: 0, r: 0, k: 1 }, Element::Seq(&f)).is_err());
    }
}
