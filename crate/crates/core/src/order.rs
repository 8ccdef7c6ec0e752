//! Colex orderings, shadows, initial segments and the shifting operator.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::counting::binomial;
use crate::error::{Error, Result};
use crate::qvec::{enumerate_slice, QVec, SliceKind, VecFamily};

/// A finite set of positive integers, kept sorted.
///
/// Ordered colexicographically: `A < B` iff the largest element of the
/// symmetric difference lies in `B`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct IndexSet {
    elements: Vec<usize>,
}

impl IndexSet {
    pub fn new(mut elements: Vec<usize>) -> Result<Self> {
        if elements.contains(&0) {
            return Err(Error::param("index sets hold positive integers"));
        }
        elements.sort_unstable();
        let before = elements.len();
        elements.dedup();
        if elements.len() != before {
            return Err(Error::param("index set has duplicate elements"));
        }
        Ok(IndexSet { elements })
    }

    pub(crate) fn from_sorted_unchecked(elements: Vec<usize>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        IndexSet { elements }
    }

    /// `{1, .., k}`
    pub fn interval(k: usize) -> Self {
        IndexSet::from_sorted_unchecked((1..=k).collect())
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.elements.binary_search(&i).is_ok()
    }

    pub fn largest(&self) -> Option<usize> {
        self.elements.last().copied()
    }

    /// 0/1 characteristic vector of length `n`.
    pub fn to_qvec(&self, n: usize) -> Result<QVec> {
        if self.largest().is_some_and(|m| m > n) {
            return Err(Error::param(format!("set {self:?} does not fit in [{n}]")));
        }
        let mut e = vec![0u8; n];
        for &i in &self.elements {
            e[i - 1] = 1;
        }
        QVec::new(1, e)
    }

    pub fn complement(&self, n: usize) -> IndexSet {
        IndexSet::from_sorted_unchecked((1..=n).filter(|i| !self.contains(*i)).collect())
    }
}

impl TryFrom<Vec<usize>> for IndexSet {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        IndexSet::new(v)
    }
}

impl From<IndexSet> for Vec<usize> {
    fn from(s: IndexSet) -> Self {
        s.elements
    }
}

impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.elements.iter().rev().cmp(other.elements.iter().rev())
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elements.iter()).finish()
    }
}

pub fn colex_compare_sets(a: &IndexSet, b: &IndexSet) -> Ordering {
    a.cmp(b)
}

pub fn colex_compare_vectors(a: &QVec, b: &QVec) -> Result<Ordering> {
    a.colex_cmp(b)
}

fn one_level_vector_shadow(members: &[QVec]) -> Vec<QVec> {
    let mut out = BTreeSet::new();
    for x in members {
        for i in 0..x.n() {
            if x.entries()[i] > 0 {
                let mut y = x.clone();
                y.entries_mut()[i] -= 1;
                out.insert(y);
            }
        }
    }
    out.into_iter().collect()
}

/// `Δ` applied `levels` times to a rank-uniform family.
pub fn shadow(family: &VecFamily, levels: u32) -> Result<VecFamily> {
    if levels == 0 {
        return Err(Error::param("shadow levels must be at least 1"));
    }
    if family.is_empty() {
        return Ok(VecFamily::empty(family.n(), family.q()));
    }
    let rank = family
        .uniform_rank()
        .ok_or_else(|| Error::NonUniform("members have different ranks".into()))?;
    if rank == 0 {
        return Ok(VecFamily::empty(family.n(), family.q()));
    }
    if levels > rank {
        return Err(Error::param(format!(
            "cannot take {levels} shadow levels of a rank-{rank} family"
        )));
    }
    let mut current = family.members().to_vec();
    for _ in 0..levels {
        current = one_level_vector_shadow(&current);
    }
    Ok(VecFamily::from_sorted_unchecked(family.n(), family.q(), current))
}

/// Set-family shadow: all `(|F| - levels)`-subsets of members.
pub fn shadow_sets(family: &[IndexSet], levels: usize) -> Result<Vec<IndexSet>> {
    if levels == 0 {
        return Err(Error::param("shadow levels must be at least 1"));
    }
    let Some(first) = family.first() else {
        return Ok(Vec::new());
    };
    let size = first.len();
    if family.iter().any(|f| f.len() != size) {
        return Err(Error::NonUniform("sets have different sizes".into()));
    }
    if size == 0 {
        return Ok(Vec::new());
    }
    if levels > size {
        return Err(Error::param(format!(
            "cannot take {levels} shadow levels of a {size}-uniform family"
        )));
    }
    let mut current: BTreeSet<IndexSet> = family.iter().cloned().collect();
    for _ in 0..levels {
        let mut next = BTreeSet::new();
        for set in &current {
            for skip in 0..set.len() {
                let mut e = set.elements.clone();
                e.remove(skip);
                next.insert(IndexSet::from_sorted_unchecked(e));
            }
        }
        current = next;
    }
    Ok(current.into_iter().collect())
}

/// The `m` colex-smallest members of `Q(n, r)`.
pub fn initial_segment(n: usize, q: u8, r: u32, m: usize) -> Result<VecFamily> {
    let slice = enumerate_slice(n, q, SliceKind::Rank(r))?;
    if m > slice.len() {
        return Err(Error::param(format!(
            "segment size {m} exceeds |Q({n},{r})| = {}",
            slice.len()
        )));
    }
    let mut members = slice.into_members();
    members.truncate(m);
    Ok(VecFamily::from_sorted_unchecked(n, q, members))
}

/// The `m` colex-smallest `r`-subsets of `[n]`.
pub fn initial_segment_sets(n: usize, r: usize, m: usize) -> Result<Vec<IndexSet>> {
    let seg = initial_segment(n, 1, r as u32, m)?;
    Ok(seg.iter().map(QVec::support).collect())
}

/// `τ_{i,j}(x)`: swap coordinates `i` and `j` (1-based) when `x_i < x_j`.
pub fn shift_vector(x: &QVec, i: usize, j: usize) -> QVec {
    let (a, b) = (x.entries()[i - 1], x.entries()[j - 1]);
    if a < b {
        let mut y = x.clone();
        y.entries_mut().swap(i - 1, j - 1);
        y
    } else {
        x.clone()
    }
}

fn check_shift_indices(n: usize, i: usize, j: usize) -> Result<()> {
    if i == 0 || j == 0 || i > n || j > n {
        return Err(Error::param(format!("shift indices ({i},{j}) out of range 1..={n}")));
    }
    if i == j {
        return Err(Error::param("shift indices must differ"));
    }
    Ok(())
}

fn shift_once(family: &VecFamily, i: usize, j: usize) -> VecFamily {
    let members = family
        .iter()
        .map(|x| {
            let y = shift_vector(x, i, j);
            if family.contains(&y) {
                x.clone()
            } else {
                y
            }
        })
        .collect();
    VecFamily::new(family.n(), family.q(), members).expect("shifting preserves shape")
}

/// Applies `τ_{i,j}` to a family; shifted images that already belong to
/// the family leave the original in place. With `closure`, keeps shifting
/// until the family is left-shifted.
pub fn shift(family: &VecFamily, i: usize, j: usize, closure: bool) -> Result<VecFamily> {
    check_shift_indices(family.n(), i, j)?;
    let once = shift_once(family, i, j);
    Ok(if closure { left_shift_closure(&once) } else { once })
}

/// Repeats `τ_{i,j}` over `i < j` (lexicographic sweep, restarting after
/// every change) until the family is fixed by all of them.
pub fn left_shift_closure(family: &VecFamily) -> VecFamily {
    let n = family.n();
    let mut current = family.clone();
    'sweep: loop {
        for i in 1..=n {
            for j in (i + 1)..=n {
                let next = shift_once(&current, i, j);
                if next != current {
                    current = next;
                    continue 'sweep;
                }
            }
        }
        return current;
    }
}

pub fn is_left_shifted(family: &VecFamily) -> bool {
    let n = family.n();
    (1..=n).all(|i| ((i + 1)..=n).all(|j| shift_once(family, i, j) == *family))
}

/// `Σ_x Σ_i i·x_i`, strictly decreased by every effective left shift.
pub fn shift_weight(family: &VecFamily) -> u64 {
    family
        .iter()
        .map(|x| {
            x.entries()
                .iter()
                .enumerate()
                .map(|(i, &e)| (i as u64 + 1) * u64::from(e))
                .sum::<u64>()
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleStatus {
    Exact,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShadowOracle {
    pub status: OracleStatus,
    /// Minimum `|Δ(F)|` over all `m`-subsets of `Q(n, r)`; `None` unless exact.
    pub min_size: Option<usize>,
    pub achieved_by_segment: Option<bool>,
    pub segment_shadow: usize,
    pub subsets: u128,
}

/// Scans every `m`-subset of `Q(n, r)` for the smallest shadow.
///
/// Instances with more than `budget` subsets are refused outright.
pub fn min_shadow_oracle(n: usize, q: u8, r: u32, m: usize, budget: u128) -> Result<ShadowOracle> {
    let slice = enumerate_slice(n, q, SliceKind::Rank(r))?;
    if m > slice.len() {
        return Err(Error::param(format!(
            "segment size {m} exceeds |Q({n},{r})| = {}",
            slice.len()
        )));
    }
    let subsets = binomial(slice.len() as u64, m as u64);
    let segment = VecFamily::from_sorted_unchecked(n, q, slice.members()[..m].to_vec());
    let segment_shadow = shadow_size(&segment);
    if subsets > budget {
        return Ok(ShadowOracle {
            status: OracleStatus::BudgetExceeded,
            min_size: None,
            achieved_by_segment: None,
            segment_shadow,
            subsets,
        });
    }

    let lower: Vec<QVec> = if r == 0 {
        Vec::new()
    } else {
        enumerate_slice(n, q, SliceKind::Rank(r - 1))?.into_members()
    };
    let masks: Vec<BitSet> = slice
        .iter()
        .map(|x| {
            let mut mask = BitSet::new(lower.len());
            for y in one_level_vector_shadow(std::slice::from_ref(x)) {
                mask.insert(lower.binary_search(&y).expect("shadow lies in lower slice"));
            }
            mask
        })
        .collect();

    let mut best = usize::MAX;
    let mut stack = vec![BitSet::new(lower.len()); m + 1];
    scan_subsets(&masks, 0, 0, m, &mut stack, &mut best);
    Ok(ShadowOracle {
        status: OracleStatus::Exact,
        min_size: Some(best),
        achieved_by_segment: Some(segment_shadow == best),
        segment_shadow,
        subsets,
    })
}

// `stack[depth]` holds the shadow union of the members chosen so far.
fn scan_subsets(masks: &[BitSet], start: usize, depth: usize, m: usize, stack: &mut [BitSet], best: &mut usize) {
    if depth == m {
        *best = (*best).min(stack[depth].count());
        return;
    }
    for i in start..=(masks.len() - (m - depth)) {
        let (done, rest) = stack.split_at_mut(depth + 1);
        rest[0].clone_from(&done[depth]);
        rest[0].union_with(&masks[i]);
        scan_subsets(masks, i + 1, depth + 1, m, stack, best);
    }
}

fn shadow_size(family: &VecFamily) -> usize {
    one_level_vector_shadow(family.members()).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(q: u8, e: &[u8]) -> QVec {
        QVec::new(q, e.to_vec()).unwrap()
    }

    fn fam(q: u8, rows: &[&[u8]]) -> VecFamily {
        let n = rows.first().map_or(0, |r| r.len());
        VecFamily::from_entries(n, q, rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn set(e: &[usize]) -> IndexSet {
        IndexSet::new(e.to_vec()).unwrap()
    }

    #[test]
    fn colex_examples() {
        assert_eq!(colex_compare_sets(&set(&[1, 3]), &set(&[2, 3])), Ordering::Less);
        assert_eq!(colex_compare_sets(&set(&[2, 3]), &set(&[2, 3])), Ordering::Equal);
        assert_eq!(colex_compare_sets(&set(&[3]), &set(&[2, 3])), Ordering::Less);
        let (a, b, c) = (v(2, &[2, 0]), v(2, &[1, 1]), v(2, &[0, 2]));
        assert_eq!(colex_compare_vectors(&a, &b).unwrap(), Ordering::Less);
        assert_eq!(colex_compare_vectors(&b, &c).unwrap(), Ordering::Less);
        assert_eq!(colex_compare_vectors(&a, &c).unwrap(), Ordering::Less);
        assert_eq!(colex_compare_vectors(&c, &c).unwrap(), Ordering::Equal);
        assert!(colex_compare_vectors(&a, &v(2, &[1])).is_err());
    }

    #[test]
    fn set_colex_matches_symmetric_difference_rule() {
        let all: Vec<IndexSet> = (0u32..32)
            .map(|mask| IndexSet::from_sorted_unchecked((1..=5).filter(|i| mask >> (i - 1) & 1 == 1).collect()))
            .collect();
        for a in &all {
            for b in &all {
                let sym: Vec<usize> = (1..=5).filter(|&i| a.contains(i) != b.contains(i)).collect();
                let expected = match sym.last() {
                    None => Ordering::Equal,
                    Some(&top) if b.contains(top) => Ordering::Less,
                    Some(_) => Ordering::Greater,
                };
                assert_eq!(a.cmp(b), expected, "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn shadow_examples() {
        assert_eq!(shadow(&fam(2, &[&[1, 1]]), 1).unwrap(), fam(2, &[&[1, 0], &[0, 1]]));
        assert_eq!(
            shadow(&fam(2, &[&[2, 0], &[1, 1]]), 1).unwrap(),
            fam(2, &[&[1, 0], &[0, 1]])
        );
        assert_eq!(
            shadow_sets(&[set(&[1, 2]), set(&[1, 3])], 1).unwrap(),
            vec![set(&[1]), set(&[2]), set(&[3])]
        );
        assert_eq!(shadow(&fam(2, &[&[2, 1]]), 2).unwrap(), fam(2, &[&[1, 0], &[0, 1]]));
        assert!(shadow(&fam(2, &[&[0, 0]]), 1).unwrap().is_empty());
    }

    #[test]
    fn shadow_rejects_non_uniform_and_deep_levels() {
        assert!(matches!(
            shadow(&fam(2, &[&[1, 0], &[1, 1]]), 1),
            Err(Error::NonUniform(_))
        ));
        assert!(shadow(&fam(2, &[&[1, 0]]), 2).is_err());
        assert!(shadow_sets(&[set(&[1]), set(&[1, 2])], 1).is_err());
    }

    #[test]
    fn segment_examples() {
        assert_eq!(initial_segment(2, 2, 2, 2).unwrap(), fam(2, &[&[2, 0], &[1, 1]]));
        assert!(initial_segment(2, 2, 2, 0).unwrap().is_empty());
        assert_eq!(
            initial_segment_sets(4, 2, 3).unwrap(),
            vec![set(&[1, 2]), set(&[1, 3]), set(&[2, 3])]
        );
        assert!(initial_segment(2, 2, 2, 4).is_err());
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift(&fam(3, &[&[1, 3]]), 1, 2, false).unwrap(), fam(3, &[&[3, 1]]));
        assert_eq!(shift(&fam(3, &[&[3, 1]]), 1, 2, false).unwrap(), fam(3, &[&[3, 1]]));
        let both = fam(3, &[&[1, 3], &[3, 1]]);
        assert_eq!(shift(&both, 1, 2, false).unwrap(), both);
        assert!(shift(&both, 1, 1, false).is_err());
        assert!(shift(&both, 0, 1, false).is_err());
        assert!(shift(&both, 1, 3, false).is_err());
    }

    #[test]
    fn closure_is_left_shifted_and_size_preserving() {
        let f = fam(2, &[&[0, 1, 2], &[0, 2, 1], &[1, 0, 2], &[0, 0, 1]]);
        let g = shift(&f, 2, 3, true).unwrap();
        assert!(is_left_shifted(&g));
        assert_eq!(g.len(), f.len());
        assert!(shift_weight(&g) < shift_weight(&f));
    }

    #[test]
    fn oracle_examples() {
        let o = min_shadow_oracle(2, 2, 2, 2, 1_000).unwrap();
        assert_eq!(o.status, OracleStatus::Exact);
        assert_eq!(o.min_size, Some(2));
        assert_eq!(o.achieved_by_segment, Some(true));

        let o = min_shadow_oracle(3, 1, 2, 3, 1_000).unwrap();
        assert_eq!(o.min_size, Some(3));

        // the full slice shadows all of Q(n, r-1)
        let o = min_shadow_oracle(3, 2, 3, 7, 1_000).unwrap();
        assert_eq!(o.min_size, Some(6));

        let o = min_shadow_oracle(3, 2, 3, 3, 10).unwrap();
        assert_eq!(o.status, OracleStatus::BudgetExceeded);
        assert_eq!(o.min_size, None);
    }
}
