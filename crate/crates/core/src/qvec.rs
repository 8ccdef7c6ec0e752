//! Vectors over `{0..q}`, families of them, and the two intersection
//! measures the rest of the crate is built on.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order::IndexSet;

/// A vector in `{0,1,..,q}^n`.
///
/// Vectors of the same shape are ordered colexicographically: the largest
/// coordinate in which they differ decides. Vectors of different shapes
/// order by `n`, then `q`, so a `BTreeSet<QVec>` stays well defined.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawQVec")]
pub struct QVec {
    q: u8,
    entries: Vec<u8>,
}

#[derive(Deserialize)]
struct RawQVec {
    q: u8,
    entries: Vec<u8>,
}

impl TryFrom<RawQVec> for QVec {
    type Error = Error;
    fn try_from(raw: RawQVec) -> Result<Self> {
        QVec::new(raw.q, raw.entries)
    }
}

impl QVec {
    pub fn new(q: u8, entries: Vec<u8>) -> Result<Self> {
        if q == 0 {
            return Err(Error::param("alphabet maximum q must be at least 1"));
        }
        if let Some((index, &value)) = entries.iter().enumerate().find(|(_, &e)| e > q) {
            return Err(Error::EntryOutOfRange { index, value, q });
        }
        Ok(QVec { q, entries })
    }

    /// Builds a vector whose entries are already known to lie in `0..=q`.
    pub(crate) fn from_trusted(q: u8, entries: Vec<u8>) -> Self {
        debug_assert!(q >= 1 && entries.iter().all(|&e| e <= q));
        QVec { q, entries }
    }

    pub fn zero(n: usize, q: u8) -> Self {
        QVec::from_trusted(q, vec![0; n])
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn shape(&self) -> (usize, u8) {
        (self.n(), self.q)
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    /// Entry at 1-based coordinate `i`.
    pub fn get(&self, i: usize) -> u8 {
        self.entries[i - 1]
    }

    pub fn rank(&self) -> u32 {
        self.entries.iter().map(|&e| u32::from(e)).sum()
    }

    /// 1-based indices of nonzero entries.
    pub fn support(&self) -> IndexSet {
        IndexSet::from_sorted_unchecked(
            self.entries
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, _)| i + 1)
                .collect(),
        )
    }

    pub fn support_size(&self) -> usize {
        self.entries.iter().filter(|&&e| e > 0).count()
    }

    pub fn complement(&self) -> QVec {
        QVec::from_trusted(self.q, self.entries.iter().map(|&e| self.q - e).collect())
    }

    /// Coordinatewise `self <= other`.
    pub fn dominated_by(&self, other: &QVec) -> bool {
        self.entries.iter().zip(&other.entries).all(|(a, b)| a <= b)
    }

    pub fn colex_cmp(&self, other: &QVec) -> Result<Ordering> {
        ensure_same_shape(self, other)?;
        Ok(colex_cmp_entries(&self.entries, &other.entries))
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [u8] {
        &mut self.entries
    }
}

pub(crate) fn colex_cmp_entries(a: &[u8], b: &[u8]) -> Ordering {
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

impl Ord for QVec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n()
            .cmp(&other.n())
            .then(self.q.cmp(&other.q))
            .then_with(|| colex_cmp_entries(&self.entries, &other.entries))
    }
}

impl PartialOrd for QVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for QVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for QVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn ensure_same_shape(x: &QVec, y: &QVec) -> Result<()> {
    if x.shape() != y.shape() {
        return Err(Error::DimensionMismatch {
            left: x.shape(),
            right: y.shape(),
        });
    }
    Ok(())
}

/// Which intersection measure a predicate uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// `|{i : x_i + y_i >= s}|`
    Sum,
    /// `Σ_i (x_i + y_i - s + 1)^+`
    Multisum,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Sum => "sum",
            Mode::Multisum => "multisum",
        })
    }
}

#[inline]
pub(crate) fn intersection_entries(x: &[u8], y: &[u8], s: u32, mode: Mode) -> u32 {
    match mode {
        Mode::Sum => x
            .iter()
            .zip(y)
            .filter(|(&a, &b)| u32::from(a) + u32::from(b) >= s)
            .count() as u32,
        Mode::Multisum => x
            .iter()
            .zip(y)
            .map(|(&a, &b)| (u32::from(a) + u32::from(b) + 1).saturating_sub(s))
            .sum(),
    }
}

/// Size of the s-sum (or multi-s-sum) intersection of `x` and `y`.
pub fn intersection_size(x: &QVec, y: &QVec, s: u32, mode: Mode) -> Result<u32> {
    ensure_same_shape(x, y)?;
    Ok(intersection_entries(&x.entries, &y.entries, s, mode))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Measures {
    pub rank: u32,
    pub support: IndexSet,
    pub complement: QVec,
}

pub fn measures(x: &QVec) -> Measures {
    Measures {
        rank: x.rank(),
        support: x.support(),
        complement: x.complement(),
    }
}

/// Intersection regime: every (distinct) pair must have intersection size
/// at least `t` under threshold `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PredicateSpec {
    pub mode: Mode,
    pub s: u32,
    pub t: u32,
    #[serde(default = "default_true")]
    pub distinct_only: bool,
}

fn default_true() -> bool {
    true
}

impl PredicateSpec {
    pub fn new(mode: Mode, s: u32, t: u32) -> Result<Self> {
        if s == 0 || t == 0 {
            return Err(Error::param("predicate requires s >= 1 and t >= 1"));
        }
        Ok(PredicateSpec {
            mode,
            s,
            t,
            distinct_only: true,
        })
    }

    pub fn sum(s: u32, t: u32) -> Result<Self> {
        Self::new(Mode::Sum, s, t)
    }

    pub fn multisum(s: u32, t: u32) -> Result<Self> {
        Self::new(Mode::Multisum, s, t)
    }

    pub fn with_self_pairs(mut self) -> Self {
        self.distinct_only = false;
        self
    }

    #[inline]
    pub(crate) fn holds_entries(&self, x: &[u8], y: &[u8]) -> bool {
        intersection_entries(x, y, self.s, self.mode) >= self.t
    }

    /// Whether the pair meets the predicate (shapes are assumed equal).
    pub fn pair_holds(&self, x: &QVec, y: &QVec) -> bool {
        self.holds_entries(&x.entries, &y.entries)
    }
}

/// A deduplicated, colex-sorted family of vectors sharing `(n, q)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VecFamily {
    n: usize,
    q: u8,
    members: Vec<QVec>,
}

impl VecFamily {
    pub fn empty(n: usize, q: u8) -> Self {
        VecFamily {
            n,
            q,
            members: Vec::new(),
        }
    }

    /// Canonicalizes `members` (sort, dedup) after checking every shape.
    pub fn new(n: usize, q: u8, mut members: Vec<QVec>) -> Result<Self> {
        if q == 0 {
            return Err(Error::param("alphabet maximum q must be at least 1"));
        }
        for m in &members {
            if m.shape() != (n, q) {
                return Err(Error::DimensionMismatch {
                    left: (n, q),
                    right: m.shape(),
                });
            }
        }
        members.sort();
        members.dedup();
        Ok(VecFamily { n, q, members })
    }

    pub fn from_entries(n: usize, q: u8, rows: Vec<Vec<u8>>) -> Result<Self> {
        let members = rows.into_iter().map(|r| QVec::new(q, r)).collect::<Result<Vec<_>>>()?;
        Self::new(n, q, members)
    }

    /// Members must already be strictly colex-increasing and of shape `(n, q)`.
    pub(crate) fn from_sorted_unchecked(n: usize, q: u8, members: Vec<QVec>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        VecFamily { n, q, members }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[QVec] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, QVec> {
        self.members.iter()
    }

    pub fn contains(&self, x: &QVec) -> bool {
        self.members.binary_search(x).is_ok()
    }

    pub fn into_members(self) -> Vec<QVec> {
        self.members
    }

    /// Union with another family of the same shape.
    pub fn union(&self, other: &VecFamily) -> Result<VecFamily> {
        let mut all = self.members.clone();
        all.extend(other.members.iter().cloned());
        VecFamily::new(self.n, self.q, all)
    }

    /// The common rank, if every member has the same one.
    pub fn uniform_rank(&self) -> Option<u32> {
        let mut ranks = self.members.iter().map(QVec::rank);
        let first = ranks.next()?;
        ranks.all(|r| r == first).then_some(first)
    }
}

impl Serialize for VecFamily {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let rows: Vec<&[u8]> = self.members.iter().map(|m| m.entries()).collect();
        let mut st = serializer.serialize_struct("VecFamily", 3)?;
        st.serialize_field("members", &rows)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("q", &self.q)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for VecFamily {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(deserializer)?;
        crate::io::family_from_value(&value).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for VecFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a VecFamily {
    type Item = &'a QVec;
    type IntoIter = std::slice::Iter<'a, QVec>;
    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyCheck {
    pub holds: bool,
    /// Colex-least violating pair, when the check fails.
    pub witness: Option<(QVec, QVec)>,
}

/// Checks the predicate on every pair of distinct members (and on each
/// member against itself when `distinct_only` is off).
pub fn family_check(family: &VecFamily, p: &PredicateSpec) -> FamilyCheck {
    let m = family.members();
    for i in 0..m.len() {
        let start = if p.distinct_only { i + 1 } else { i };
        for j in start..m.len() {
            if !p.pair_holds(&m[i], &m[j]) {
                return FamilyCheck {
                    holds: false,
                    witness: Some((m[i].clone(), m[j].clone())),
                };
            }
        }
    }
    FamilyCheck {
        holds: true,
        witness: None,
    }
}

/// Which slice of `Q^n` to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "r")]
pub enum SliceKind {
    All,
    Rank(u32),
    Support(usize),
}

/// Visits every vector of the slice in colex order.
pub fn for_each_in_slice(n: usize, q: u8, kind: SliceKind, mut visit: impl FnMut(&[u8])) {
    let mut buf = vec![0u8; n];
    match kind {
        SliceKind::All => fill_all(n, q, &mut buf, &mut visit),
        SliceKind::Rank(r) => fill_rank(n, q, r, &mut buf, &mut visit),
        SliceKind::Support(r) => fill_support(n, q, r, &mut buf, &mut visit),
    }
}

// Each filler fixes coordinate `idx - 1` in ascending order and recurses on
// the prefix, which yields colex order directly.
fn fill_all(idx: usize, q: u8, buf: &mut [u8], visit: &mut impl FnMut(&[u8])) {
    if idx == 0 {
        visit(buf);
        return;
    }
    for v in 0..=q {
        buf[idx - 1] = v;
        fill_all(idx - 1, q, buf, visit);
    }
}

fn fill_rank(idx: usize, q: u8, rem: u32, buf: &mut [u8], visit: &mut impl FnMut(&[u8])) {
    if idx == 0 {
        if rem == 0 {
            visit(buf);
        }
        return;
    }
    let cap_rest = u32::from(q) * (idx as u32 - 1);
    let lo = rem.saturating_sub(cap_rest);
    let hi = rem.min(u32::from(q));
    for v in lo..=hi {
        buf[idx - 1] = v as u8;
        fill_rank(idx - 1, q, rem - v, buf, visit);
    }
}

fn fill_support(idx: usize, q: u8, rem: usize, buf: &mut [u8], visit: &mut impl FnMut(&[u8])) {
    if idx == 0 {
        if rem == 0 {
            visit(buf);
        }
        return;
    }
    if idx > rem {
        buf[idx - 1] = 0;
        fill_support(idx - 1, q, rem, buf, visit);
    }
    if rem > 0 {
        for v in 1..=q {
            buf[idx - 1] = v;
            fill_support(idx - 1, q, rem - 1, buf, visit);
        }
    }
}

/// Every vector of `Q^n` in the requested slice, in colex order.
pub fn enumerate_slice(n: usize, q: u8, kind: SliceKind) -> Result<VecFamily> {
    if q == 0 {
        return Err(Error::param("alphabet maximum q must be at least 1"));
    }
    match kind {
        SliceKind::Rank(r) if r as usize > q as usize * n => {
            return Err(Error::param(format!(
                "rank {r} outside 0..={} for n={n}, q={q}",
                q as usize * n
            )))
        }
        SliceKind::Support(r) if r > n => return Err(Error::param(format!("support size {r} outside 0..={n}"))),
        _ => {}
    }
    let mut members = Vec::new();
    for_each_in_slice(n, q, kind, |e| members.push(QVec::from_trusted(q, e.to_vec())));
    Ok(VecFamily::from_sorted_unchecked(n, q, members))
}
