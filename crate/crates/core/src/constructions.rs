//! Extremal families and the closed-form bounds they attain.
//!
//! Every public generator checks its own output against the advertised
//! predicate and returns [`Error::Verification`] if the check fails.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::counting::{binomial, pow, slice_count};
use crate::error::{Error, Result};
use crate::order::IndexSet;
use crate::qvec::{family_check, for_each_in_slice, PredicateSpec, QVec, SliceKind, VecFamily};

/// Closed-form bounds this crate can evaluate and certify.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    SupportUniform,
    RankUniform,
    SupportUniformT,
    Nonuniform,
    NonuniformSmallS,
    KatonaMultisum2,
    KatonaMultisum3,
}

impl BoundKind {
    pub const ALL: [BoundKind; 7] = [
        BoundKind::SupportUniform,
        BoundKind::RankUniform,
        BoundKind::SupportUniformT,
        BoundKind::Nonuniform,
        BoundKind::NonuniformSmallS,
        BoundKind::KatonaMultisum2,
        BoundKind::KatonaMultisum3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::SupportUniform => "support_uniform",
            BoundKind::RankUniform => "rank_uniform",
            BoundKind::SupportUniformT => "support_uniform_t",
            BoundKind::Nonuniform => "nonuniform",
            BoundKind::NonuniformSmallS => "nonuniform_small_s",
            BoundKind::KatonaMultisum2 => "katona_multisum_2",
            BoundKind::KatonaMultisum3 => "katona_multisum_3",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters shared by the bound evaluators. Unused fields are ignored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundParams {
    pub n: usize,
    pub q: u8,
    pub s: u32,
    pub r: u32,
    pub t: u32,
    /// `M(n)`, required by [`BoundKind::KatonaMultisum3`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_n: Option<u128>,
}

impl BoundParams {
    pub fn new(n: usize, q: u8) -> Self {
        BoundParams {
            n,
            q,
            s: u32::from(q) + 1,
            r: 1,
            t: 1,
            m_n: None,
        }
    }

    pub fn s(mut self, s: u32) -> Self {
        self.s = s;
        self
    }

    pub fn r(mut self, r: u32) -> Self {
        self.r = r;
        self
    }

    pub fn t(mut self, t: u32) -> Self {
        self.t = t;
        self
    }
}

/// Anchor of a support star: a single coordinate for even `s`, an ordered
/// tuple of `r` distinct coordinates for odd `s` (all 1-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchor {
    Index(usize),
    Tuple(Vec<usize>),
}

impl Anchor {
    /// `Index(1)` for even `s`, `Tuple(1..=r)` for odd `s`.
    pub fn default_for(s: u32, r: u32) -> Self {
        if s.is_multiple_of(2) {
            Anchor::Index(1)
        } else {
            Anchor::Tuple((1..=r as usize).collect())
        }
    }
}

fn half_floor(s: u32) -> u8 {
    (s / 2) as u8
}

fn half_ceil(s: u32) -> u8 {
    s.div_ceil(2) as u8
}

fn verified(family: VecFamily, p: PredicateSpec, what: &str) -> Result<VecFamily> {
    let check = family_check(&family, &p);
    match check.witness {
        None => Ok(family),
        Some((x, y)) => Err(Error::Verification(format!(
            "{what}: pair {x:?}, {y:?} violates the predicate"
        ))),
    }
}

fn filter_slice(n: usize, q: u8, kind: SliceKind, mut keep: impl FnMut(&[u8]) -> bool) -> VecFamily {
    let mut members = Vec::new();
    for_each_in_slice(n, q, kind, |e| {
        if keep(e) {
            members.push(QVec::from_trusted(q, e.to_vec()));
        }
    });
    VecFamily::from_sorted_unchecked(n, q, members)
}

fn check_support_range(n: usize, q: u8, s: u32, r: u32) -> Result<()> {
    let q32 = u32::from(q);
    if !(q32 < s && s <= 2 * q32) {
        return Err(Error::param(format!("need q < s <= 2q, got q={q}, s={s}")));
    }
    if r == 0 || r as usize > n {
        return Err(Error::param(format!("need 1 <= r <= n, got r={r}, n={n}")));
    }
    Ok(())
}

/// The extremal r-support uniform s-sum intersecting family around `anchor`.
pub fn support_star(n: usize, q: u8, s: u32, r: u32, anchor: &Anchor) -> Result<VecFamily> {
    check_support_range(n, q, s, r)?;
    let family = match (s % 2, anchor) {
        (0, Anchor::Index(i)) => {
            let i = *i;
            if i == 0 || i > n {
                return Err(Error::param(format!("anchor index {i} outside 1..={n}")));
            }
            let half = half_floor(s);
            filter_slice(n, q, SliceKind::Support(r as usize), |e| e[i - 1] >= half)
        }
        (1, Anchor::Tuple(tuple)) => {
            if tuple.len() != r as usize {
                return Err(Error::param(format!(
                    "odd s needs an ordered {r}-tuple, got {} entries",
                    tuple.len()
                )));
            }
            let set = IndexSet::new(tuple.clone())?;
            if set.largest().is_some_and(|m| m > n) {
                return Err(Error::param(format!("anchor tuple {tuple:?} does not fit in [{n}]")));
            }
            let (lo, hi) = (half_floor(s), half_ceil(s));
            filter_slice(n, q, SliceKind::Support(r as usize), |e| {
                if tuple.iter().all(|&i| e[i - 1] == lo) {
                    return true;
                }
                for &i in tuple {
                    let v = e[i - 1];
                    if v >= hi {
                        return true;
                    }
                    if v != lo {
                        return false;
                    }
                }
                false
            })
        }
        (0, Anchor::Tuple(_)) => return Err(Error::param("even s takes a single anchor index")),
        _ => return Err(Error::param("odd s takes an ordered tuple anchor")),
    };
    verified(family, PredicateSpec::sum(s, 1)?, "support star")
}

fn check_t_range(n: usize, q: u8, s: u32, r: u32, t: u32) -> Result<()> {
    let q32 = u32::from(q);
    let ok = if s.is_multiple_of(2) {
        q32 < s && s <= 2 * q32
    } else {
        q32 < s && s < 2 * q32
    };
    if !ok {
        return Err(Error::param(format!(
            "need q < s <= 2q (even s) or q < s < 2q (odd s), got q={q}, s={s}"
        )));
    }
    if !(t >= 1 && t <= r && r as usize <= n) {
        return Err(Error::param(format!("need n >= r >= t >= 1, got n={n}, r={r}, t={t}")));
    }
    Ok(())
}

/// Membership in the odd-s t-construction, given the entries of a vector
/// whose support has size `r`.
fn odd_t_member(e: &[u8], s: u32, r: usize, t: u32) -> bool {
    let (lo, hi) = (half_floor(s), half_ceil(s));
    let head = &e[..r];
    // one vector per T': entries ⌈s/2⌉ on T', ⌊s/2⌋ on the rest of [r]
    let big = head.iter().filter(|&&v| v > lo).count() as u32;
    if big + 1 == t && head.iter().all(|&v| v == lo || v == hi) {
        return true;
    }
    let mut seen = 0;
    for &v in head {
        if v > lo {
            seen += 1;
            if seen == t {
                return true;
            }
        } else if v < lo {
            return false;
        }
    }
    false
}

fn odd_t_family(n: usize, q: u8, s: u32, r: u32, t: u32) -> VecFamily {
    let r = r as usize;
    filter_slice(n, q, SliceKind::Support(r), |e| odd_t_member(e, s, r, t))
}

/// The s-sum t-intersecting r-support uniform construction.
///
/// For even `s`, `anchor` is the t-set `T` (default `{1..t}`). For odd `s`
/// the construction is anchored on `[r]` and `anchor` must be `None`.
pub fn t_intersecting_construction(
    n: usize,
    q: u8,
    s: u32,
    r: u32,
    t: u32,
    anchor: Option<&IndexSet>,
) -> Result<VecFamily> {
    check_t_range(n, q, s, r, t)?;
    let family = if s.is_multiple_of(2) {
        let set = anchor.cloned().unwrap_or_else(|| IndexSet::interval(t as usize));
        if set.len() != t as usize || set.largest().is_some_and(|m| m > n) {
            return Err(Error::param(format!("T must be a {t}-subset of [{n}], got {set:?}")));
        }
        let half = half_floor(s);
        filter_slice(n, q, SliceKind::Support(r as usize), |e| {
            set.elements().iter().all(|&i| e[i - 1] >= half)
        })
    } else {
        if anchor.is_some() {
            return Err(Error::param("odd s constructions are anchored on [r]; no T accepted"));
        }
        odd_t_family(n, q, s, r, t)
    };
    verified(family, PredicateSpec::sum(s, t)?, "t-intersecting construction")
}

/// Size of the odd-s t-construction, by generating it.
pub fn f_size(n: usize, q: u8, s: u32, r: u32, t: u32) -> Result<u128> {
    if s.is_multiple_of(2) {
        return Err(Error::param("f is defined for odd s"));
    }
    check_t_range(n, q, s, r, t)?;
    Ok(odd_t_family(n, q, s, r, t).len() as u128)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecursionBranch {
    /// `r = t`
    Base,
    /// `r >= 2t`
    Wide,
    /// `t < r < 2t`
    Narrow,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecursionCheck {
    pub direct: u128,
    pub branch: RecursionBranch,
    pub recursion: u128,
    pub agree: bool,
    /// `(q - ⌊s/2⌋)^t q^(r-t) C(n-t, r-t)`
    pub lower_bound: u128,
    /// Whether `direct > lower_bound`; only asserted when `r > t`.
    pub lower_strict: Option<bool>,
}

/// Compares the generated size of the odd-s construction with the
/// recursive formula for its branch, and checks the strict lower bound.
pub fn recursion_check(n: usize, q: u8, s: u32, r: u32, t: u32) -> Result<RecursionCheck> {
    let direct = f_size(n, q, s, r, t)?;
    let (n64, r64, t64) = (n as u64, u64::from(r), u64::from(t));
    let big = u128::from(q - half_floor(s));
    let q128 = u128::from(q);
    let head = binomial(n64 - t64, r64 - t64) * pow(q128, r - t) * pow(big, t);
    let (branch, recursion) = if r == t {
        (RecursionBranch::Base, binomial(t64, t64 - 1) + pow(big, t))
    } else {
        let wide = r >= 2 * t;
        let mut total = head;
        if !wide {
            total += binomial(t64, 2 * t64 - r64 - 1);
        }
        let min_size = if wide { 0 } else { 2 * t - r };
        for size in min_size..t {
            let sub = f_size(n - t as usize, q, s, r - t, t - size)?;
            total += binomial(t64, u64::from(size)) * pow(big, size) * sub;
        }
        (
            if wide {
                RecursionBranch::Wide
            } else {
                RecursionBranch::Narrow
            },
            total,
        )
    };
    Ok(RecursionCheck {
        direct,
        branch,
        recursion,
        agree: direct == recursion,
        lower_bound: head,
        lower_strict: (r > t).then_some(direct > head),
    })
}

fn check_rank_range(n: usize, q: u8, r: u32) -> Result<()> {
    let (q32, n32) = (u32::from(q), n as u32);
    if !(q32 < 2 * r && 2 * r <= q32 * n32) {
        return Err(Error::param(format!(
            "rank-uniform range needs (q+1)/2 <= r <= qn/2, got q={q}, n={n}, r={r}"
        )));
    }
    Ok(())
}

/// The colex-greatest r-rank uniform (q+1)-sum intersecting family.
pub fn rank_extremal(n: usize, q: u8, r: u32) -> Result<VecFamily> {
    check_rank_range(n, q, r)?;
    let q32 = u32::from(q);
    let family = if !q32.is_multiple_of(2) {
        let k = q32.div_ceil(2) as u8;
        filter_slice(n, q, SliceKind::Rank(r), |e| e[n - 1] >= k)
    } else {
        let k = q32 / 2;
        let parts = ((r - 1) / k) as usize;
        let mut star = vec![0u8; n];
        for e in &mut star[n - parts..] {
            *e = k as u8;
        }
        star[n - parts - 1] = (r - parts as u32 * k) as u8;
        let k = k as u8;
        filter_slice(n, q, SliceKind::Rank(r), |e| {
            if e == star.as_slice() {
                return true;
            }
            for j in 0..parts {
                let v = e[n - 1 - j];
                if v > k {
                    return true;
                }
                if v != k {
                    return false;
                }
            }
            false
        })
    };
    verified(family, PredicateSpec::sum(q32 + 1, 1)?, "rank-uniform family")
}

/// The largest s-sum intersecting family in `Q^n`, for `s <= q + 1`.
///
/// `s > 2q` admits only a single vector; it is returned only with
/// `allow_trivial`.
pub fn nonuniform_extremal(n: usize, q: u8, s: u32, allow_trivial: bool) -> Result<VecFamily> {
    let q32 = u32::from(q);
    if s == 0 {
        return Err(Error::param("s must be at least 1"));
    }
    if s > 2 * q32 {
        if !allow_trivial {
            return Err(Error::param(format!(
                "s={s} > 2q: no two vectors s-sum intersect; only singleton families exist"
            )));
        }
        return VecFamily::new(n, q, vec![QVec::new(q, vec![q; n])?]);
    }
    if s > q32 + 1 {
        return Err(Error::param(format!(
            "no construction for q+1 < s <= 2q (q={q}, s={s})"
        )));
    }
    // inner alphabet {0..s-1}: keep rank > q'n/2, and the colex-larger of
    // each complementary pair at rank q'n/2
    let inner = s - 1;
    let lo_rank = inner * n as u32;
    let family = filter_slice(n, q, SliceKind::All, |e| {
        if e.iter().any(|&v| u32::from(v) >= s) {
            return true;
        }
        let rank: u32 = e.iter().map(|&v| u32::from(v)).sum();
        if 2 * rank != lo_rank {
            return 2 * rank > lo_rank;
        }
        let comp: Vec<u8> = e.iter().map(|&v| inner as u8 - v).collect();
        crate::qvec::colex_cmp_entries(e, &comp) != std::cmp::Ordering::Less
    });
    verified(family, PredicateSpec::sum(s, 1)?, "non-uniform family")
}

/// All vectors of `{0,1,2}^n` with rank at least `n + t - 1`.
pub fn katona_upper_family(n: usize, t: u32) -> Result<VecFamily> {
    if !(t == 2 || t == 3) {
        return Err(Error::param(format!(
            "katona family defined for t in {{2, 3}}, got {t}"
        )));
    }
    if n == 0 {
        return Err(Error::param("n must be at least 1"));
    }
    let min_rank = n as u32 + t - 1;
    let family = filter_slice(n, 2, SliceKind::All, |e| {
        e.iter().map(|&v| u32::from(v)).sum::<u32>() >= min_rank
    });
    verified(family, PredicateSpec::multisum(3, t)?, "katona upper family")
}

/// Minimum `n` for which the support-uniform bounds are asserted.
pub fn support_threshold(q: u8, r: u32, t: u32) -> u128 {
    let (q, r, t) = (u128::from(q), u128::from(r), u128::from(t));
    if t <= 1 {
        q * r * r
    } else {
        pow(q, t as u32) * r * (r + t)
    }
}

/// Whether `params.n` meets the kind's `n`-range hypothesis.
pub fn threshold_ok(kind: BoundKind, p: &BoundParams) -> bool {
    match kind {
        BoundKind::SupportUniform => p.n as u128 >= support_threshold(p.q, p.r, 1),
        BoundKind::SupportUniformT => p.n as u128 >= support_threshold(p.q, p.r, p.t),
        _ => true,
    }
}

fn q_slice(n: usize, q: u8, r: i64) -> u128 {
    slice_count(n as i64, u32::from(q), r)
}

/// Exact value of the kind's bound formula.
pub fn bound(kind: BoundKind, p: &BoundParams) -> Result<u128> {
    let (n, q, s, r, t) = (p.n, p.q, p.s, p.r, p.t);
    let (q32, q128) = (u32::from(q), u128::from(q));
    let (n64, r64) = (n as u64, u64::from(r));
    Ok(match kind {
        BoundKind::SupportUniform => {
            check_support_range(n, q, s, r)?;
            if s.is_multiple_of(2) {
                u128::from(q32 - s / 2 + 1) * pow(q128, r - 1) * binomial(n64 - 1, r64 - 1)
            } else {
                let factor = u128::from(q32 + 1 - s.div_ceil(2));
                let sum: u128 = (1..=r64)
                    .map(|i| binomial(n64 - i, r64 - i) * pow(q128, (r64 - i) as u32))
                    .sum();
                1 + factor * sum
            }
        }
        BoundKind::RankUniform => {
            check_rank_range(n, q, r)?;
            let r = i64::from(r);
            if !q32.is_multiple_of(2) {
                let k = q32.div_ceil(2);
                (k..=q32).map(|j| q_slice(n - 1, q, r - i64::from(j))).sum()
            } else {
                let k = q32 / 2;
                let parts = (2 * (r as u32 - 1) / q32) as usize;
                let mut total = 1u128;
                for j in (k + 1)..=q32 {
                    for i in 1..=parts {
                        total += q_slice(n - i, q, r - i64::from(j) - (i as i64 - 1) * i64::from(k));
                    }
                }
                total
            }
        }
        BoundKind::SupportUniformT => {
            check_t_range(n, q, s, r, t)?;
            if s.is_multiple_of(2) {
                let t64 = u64::from(t);
                pow(u128::from(q32 - s / 2 + 1), t) * pow(q128, r - t) * binomial(n64 - t64, r64 - t64)
            } else {
                f_size(n, q, s, r, t)?
            }
        }
        BoundKind::Nonuniform => {
            if s != q32 + 1 {
                return Err(Error::param(format!("nonuniform bound is for s = q+1, got s={s}")));
            }
            pow(q128 + 1, n as u32).div_ceil(2)
        }
        BoundKind::NonuniformSmallS => {
            if s == 0 || s > q32 {
                return Err(Error::param(format!("small-s bound needs 1 <= s <= q, got s={s}")));
            }
            let sn = pow(u128::from(s), n as u32);
            pow(q128 + 1, n as u32) - sn + sn.div_ceil(2)
        }
        BoundKind::KatonaMultisum2 => {
            check_katona(q, n)?;
            ((n + 1)..=2 * n).map(|r| q_slice(n, 2, r as i64)).sum()
        }
        BoundKind::KatonaMultisum3 => {
            check_katona(q, n)?;
            let m_n = p.m_n.ok_or_else(|| Error::param("katona_multisum_3 needs M(n)"))?;
            ((n + 2)..=2 * n).map(|r| q_slice(n, 2, r as i64)).sum::<u128>() + m_n
        }
    })
}

fn check_katona(q: u8, n: usize) -> Result<()> {
    if q != 2 {
        return Err(Error::param(format!("katona bounds are for q=2, got q={q}")));
    }
    if n == 0 {
        return Err(Error::param("n must be at least 1"));
    }
    Ok(())
}

/// The universe and predicate a kind's bound speaks about.
pub fn search_setting(kind: BoundKind, p: &BoundParams) -> Result<(SliceKind, PredicateSpec)> {
    let q32 = u32::from(p.q);
    Ok(match kind {
        BoundKind::SupportUniform => (SliceKind::Support(p.r as usize), PredicateSpec::sum(p.s, 1)?),
        BoundKind::SupportUniformT => (SliceKind::Support(p.r as usize), PredicateSpec::sum(p.s, p.t)?),
        BoundKind::RankUniform => (SliceKind::Rank(p.r), PredicateSpec::sum(q32 + 1, 1)?),
        BoundKind::Nonuniform => (SliceKind::All, PredicateSpec::sum(q32 + 1, 1)?),
        BoundKind::NonuniformSmallS => (SliceKind::All, PredicateSpec::sum(p.s, 1)?),
        BoundKind::KatonaMultisum2 => (SliceKind::All, PredicateSpec::multisum(3, 2)?),
        BoundKind::KatonaMultisum3 => (SliceKind::All, PredicateSpec::multisum(3, 3)?),
    })
}

/// The kind's extremal construction with default anchors. The
/// `katona_multisum_3` family here omits the rank-(n+1) layer.
pub fn construction(kind: BoundKind, p: &BoundParams) -> Result<VecFamily> {
    match kind {
        BoundKind::SupportUniform => support_star(p.n, p.q, p.s, p.r, &Anchor::default_for(p.s, p.r)),
        BoundKind::SupportUniformT => t_intersecting_construction(p.n, p.q, p.s, p.r, p.t, None),
        BoundKind::RankUniform => rank_extremal(p.n, p.q, p.r),
        BoundKind::Nonuniform => nonuniform_extremal(p.n, p.q, u32::from(p.q) + 1, false),
        BoundKind::NonuniformSmallS => {
            if p.s > u32::from(p.q) {
                return Err(Error::param(format!(
                    "small-s construction needs s <= q, got s={}",
                    p.s
                )));
            }
            nonuniform_extremal(p.n, p.q, p.s, false)
        }
        BoundKind::KatonaMultisum2 => katona_upper_family(p.n, 2),
        BoundKind::KatonaMultisum3 => katona_upper_family(p.n, 3),
    }
}
