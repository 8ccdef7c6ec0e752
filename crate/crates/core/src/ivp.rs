//! Intersecting vector-pair systems: pairs `(x, y)` with no s-sum
//! intersection inside a pair and prescribed cross intersections.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::counting::{binomial, multinomial};
use crate::error::{Error, Result};
use crate::qvec::{intersection_entries, Mode, QVec};
use crate::scalar::{rational_string, Rational, Scalar};
use crate::search::clique::{max_clique, CliqueOptions, CliqueStats, Graph, Status, WitnessMode};
use crate::search::Budget;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    /// Every `x^i` meets every `y^j`, `i != j`.
    Strong,
    /// For `i != j`, `x^i` meets `y^j` or `x^j` meets `y^i`.
    Weak,
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemKind::Strong => "strong",
            SystemKind::Weak => "weak",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pair {
    pub x: QVec,
    pub y: QVec,
}

/// An ordered list of vector pairs over a common ground set `[n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSystem {
    q: u8,
    s: u32,
    kind: SystemKind,
    n: usize,
    pairs: Vec<Pair>,
}

impl PairSystem {
    pub fn new(q: u8, s: u32, kind: SystemKind, pairs: Vec<(QVec, QVec)>) -> Result<Self> {
        if q == 0 || s == 0 {
            return Err(Error::param("pair systems need q >= 1 and s >= 1"));
        }
        let n = pairs.first().map_or(0, |(x, _)| x.n());
        for (x, y) in &pairs {
            for v in [x, y] {
                if v.shape() != (n, q) {
                    return Err(Error::DimensionMismatch {
                        left: (n, q),
                        right: v.shape(),
                    });
                }
            }
        }
        Ok(PairSystem {
            q,
            s,
            kind,
            n,
            pairs: pairs.into_iter().map(|(x, y)| Pair { x, y }).collect(),
        })
    }

    pub(crate) fn from_entries(q: u8, s: u32, kind: SystemKind, rows: Vec<(Vec<u8>, Vec<u8>)>) -> Self {
        let n = rows.first().map_or(0, |(x, _)| x.len());
        let pairs = rows
            .into_iter()
            .map(|(x, y)| Pair {
                x: QVec::from_trusted(q, x),
                y: QVec::from_trusted(q, y),
            })
            .collect();
        PairSystem { q, s, kind, n, pairs }
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn with_kind(mut self, kind: SystemKind) -> Self {
        self.kind = kind;
        self
    }

    fn meets(&self, x: &QVec, y: &QVec) -> bool {
        intersection_entries(x.entries(), y.entries(), self.s, Mode::Sum) > 0
    }

    /// Largest support among the `x` and among the `y` vectors.
    pub fn support_bounds(&self) -> (usize, usize) {
        let a = self.pairs.iter().map(|p| p.x.support_size()).max().unwrap_or(0);
        let b = self.pairs.iter().map(|p| p.y.support_size()).max().unwrap_or(0);
        (a, b)
    }

    pub fn profiles(&self) -> Vec<AbcProfile> {
        self.pairs.iter().map(|p| AbcProfile::of(&p.x, &p.y)).collect()
    }
}

impl Serialize for PairSystem {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        #[derive(Serialize)]
        struct Row<'a> {
            x: &'a [u8],
            y: &'a [u8],
        }
        let rows: Vec<Row<'_>> = self
            .pairs
            .iter()
            .map(|p| Row {
                x: p.x.entries(),
                y: p.y.entries(),
            })
            .collect();
        let mut st = serializer.serialize_struct("PairSystem", 4)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("pairs", &rows)?;
        st.serialize_field("q", &self.q)?;
        st.serialize_field("s", &self.s)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for PairSystem {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(deserializer)?;
        crate::io::system_from_value(&value).map_err(serde::de::Error::custom)
    }
}

/// Support sizes of a pair: `a = |S_x \ S_y|`, `b = |S_y \ S_x|`,
/// `c = |S_x ∩ S_y|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AbcProfile {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl AbcProfile {
    pub fn of(x: &QVec, y: &QVec) -> Self {
        let (mut a, mut b, mut c) = (0, 0, 0);
        for (&u, &v) in x.entries().iter().zip(y.entries()) {
            match (u > 0, v > 0) {
                (true, true) => c += 1,
                (true, false) => a += 1,
                (false, true) => b += 1,
                _ => {}
            }
        }
        AbcProfile { a, b, c }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemCheck {
    pub valid: bool,
    /// Least violating `(i, j)`, 1-based; `(j, j)` marks a pair that
    /// intersects itself.
    pub witness: Option<(usize, usize)>,
}

/// Checks the within-pair and cross conditions for the system's kind.
pub fn system_check(sys: &PairSystem) -> SystemCheck {
    let m = sys.len();
    let p = &sys.pairs;
    for i in 0..m {
        for j in 0..m {
            let bad = if i == j {
                sys.meets(&p[i].x, &p[i].y)
            } else {
                match sys.kind {
                    SystemKind::Strong => !sys.meets(&p[i].x, &p[j].y),
                    SystemKind::Weak => i < j && !sys.meets(&p[i].x, &p[j].y) && !sys.meets(&p[j].x, &p[i].y),
                }
            };
            if bad {
                return SystemCheck {
                    valid: false,
                    witness: Some((i + 1, j + 1)),
                };
            }
        }
    }
    SystemCheck {
        valid: true,
        witness: None,
    }
}

/// Whether `x_i + y_i = q` on the support union of every pair.
pub fn is_saturated(sys: &PairSystem) -> bool {
    let q = sys.q;
    sys.pairs.iter().all(|p| {
        p.x.entries()
            .iter()
            .zip(p.y.entries())
            .all(|(&u, &v)| u + v == 0 || u16::from(u) + u16::from(v) == u16::from(q))
    })
}

/// Replaces each `y` by `q - x` on the pair's support union (zero
/// elsewhere). Only defined for `s = q + 1`.
pub fn saturate(sys: &PairSystem) -> Result<PairSystem> {
    if sys.s != u32::from(sys.q) + 1 {
        return Err(Error::param(format!(
            "saturation needs s = q+1, got q={}, s={}",
            sys.q, sys.s
        )));
    }
    let q = sys.q;
    let rows = sys
        .pairs
        .iter()
        .map(|p| {
            let y =
                p.x.entries()
                    .iter()
                    .zip(p.y.entries())
                    .map(|(&u, &v)| if u + v > 0 { q - u } else { 0 })
                    .collect();
            (p.x.entries().to_vec(), y)
        })
        .collect();
    Ok(PairSystem::from_entries(q, sys.s, sys.kind, rows))
}

/// Maps an `s = q + t` system (`2 <= t <= q`) to a `(q - t + 2)`-sum system
/// over `{0..q-t+1}` by `x -> max(x - t + 1, 0)`.
pub fn reduce_parameter(sys: &PairSystem) -> Result<PairSystem> {
    let q = u32::from(sys.q);
    if sys.s <= q + 1 {
        return Err(Error::param(format!(
            "reduction needs s = q+t with t > 1, got q={q}, s={}",
            sys.s
        )));
    }
    let t = sys.s - q;
    if t > q {
        return Err(Error::param(format!("reduction needs t <= q, got t={t}, q={q}")));
    }
    let drop = (t - 1) as u8;
    let clip = |v: &QVec| v.entries().iter().map(|&e| e.saturating_sub(drop)).collect::<Vec<u8>>();
    let rows = sys.pairs.iter().map(|p| (clip(&p.x), clip(&p.y))).collect();
    Ok(PairSystem::from_entries((q - t + 1) as u8, q - t + 2, sys.kind, rows))
}

/// `k`-subsets of `items`, colex order.
fn subsets_colex(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(items: &[usize], end: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            let mut s = cur.clone();
            s.reverse();
            out.push(s);
            return;
        }
        // choose the largest element first, ascending, then recurse below it
        for top in (k - 1)..end {
            cur.push(items[top]);
            rec(items, top, k - 1, cur, out);
            cur.pop();
        }
    }
    // rec builds in an order where the largest element varies slowest
    rec(items, items.len(), k, &mut cur, &mut out);
    out.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    out
}

/// One pair per partition `A ∪ B ∪ C` of `[a+b-c]` with `|A| = a-c`,
/// `|B| = b-c`, `|C| = c`; `A` in colex order, then `B`.
pub fn construct_abc(a: usize, b: usize, c: usize, s: u32, q: u8) -> Result<PairSystem> {
    let q32 = u32::from(q);
    if !(c <= a && a <= b) {
        return Err(Error::param(format!("need c <= a <= b, got a={a}, b={b}, c={c}")));
    }
    if b == 0 {
        return Err(Error::param("need b >= 1"));
    }
    if !(3 <= s && s < 2 * q32) {
        return Err(Error::param(format!("need 3 <= s < 2q, got s={s}, q={q}")));
    }
    let n = a + b - c;
    let shared = (s.div_ceil(2) - 1) as u8;
    let big = (s / 2 + 1) as u8;
    let ground: Vec<usize> = (0..n).collect();
    let mut rows = Vec::new();
    for set_a in subsets_colex(&ground, a - c) {
        let rest: Vec<usize> = ground.iter().copied().filter(|i| !set_a.contains(i)).collect();
        for set_b in subsets_colex(&rest, b - c) {
            let mut x = vec![shared; n];
            let mut y = vec![shared; n];
            for &i in &set_a {
                x[i] = big;
                y[i] = 0;
            }
            for &i in &set_b {
                x[i] = 0;
                y[i] = big;
            }
            rows.push((x, y));
        }
    }
    let sys = PairSystem::from_entries(q, s, SystemKind::Strong, rows);
    verified(sys)
}

fn verified(sys: PairSystem) -> Result<PairSystem> {
    let check = system_check(&sys);
    match check.witness {
        None => Ok(sys),
        Some((i, j)) => Err(Error::Verification(format!(
            "pairs {i} and {j} violate the {} condition",
            sys.kind
        ))),
    }
}

/// One pair per ordered partition `[N] = A_0 ⊔ .. ⊔ A_q` with
/// `|A_i| = alphas[i]`: `x_j = i` and `y_j = q - i` for `j ∈ A_i`.
pub fn construct_alpha(alphas: &[usize], q: u8) -> Result<PairSystem> {
    if alphas.len() != usize::from(q) + 1 {
        return Err(Error::param(format!(
            "need q+1 = {} part sizes, got {}",
            usize::from(q) + 1,
            alphas.len()
        )));
    }
    let n: usize = alphas.iter().sum();
    if n == 0 {
        return Err(Error::param("part sizes must not all be zero"));
    }
    let mut rows = Vec::new();
    let mut labels = vec![0u8; n];
    let mut left = alphas.to_vec();
    fill_labels(0, &mut labels, &mut left, q, &mut rows);
    let sys = PairSystem::from_entries(q, u32::from(q) + 1, SystemKind::Strong, rows);
    verified(sys)
}

// Assigns coordinates left to right; labels ascend at each position, so the
// x vectors come out in lexicographic order.
fn fill_labels(pos: usize, labels: &mut [u8], left: &mut [usize], q: u8, rows: &mut Vec<(Vec<u8>, Vec<u8>)>) {
    if pos == labels.len() {
        let y = labels.iter().map(|&i| q - i).collect();
        rows.push((labels.to_vec(), y));
        return;
    }
    for i in 0..=q {
        if left[usize::from(i)] > 0 {
            left[usize::from(i)] -= 1;
            labels[pos] = i;
            fill_labels(pos + 1, labels, left, q, rows);
            left[usize::from(i)] += 1;
        }
    }
}

/// Number of pairs [`construct_alpha`] produces, without building them.
pub fn alpha_count(alphas: &[usize]) -> u128 {
    let parts: Vec<u64> = alphas.iter().map(|&a| a as u64).collect();
    multinomial(&parts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FkResult {
    pub k: u32,
    pub value: u128,
    /// Lexicographically least `(x, y, z)` attaining the maximum.
    pub argmax: (u32, u32, u32),
}

/// `max (x+y+z)! / (x! y! z!)` over `x + z <= k`, `y + z <= k`.
pub fn f_k(k: u32) -> FkResult {
    let mut best = FkResult {
        k,
        value: 0,
        argmax: (0, 0, 0),
    };
    for x in 0..=k {
        for y in 0..=k {
            for z in 0..=k.min(k - x).min(k - y) {
                let v = multinomial(&[u64::from(x), u64::from(y), u64::from(z)]);
                if v > best.value {
                    best.value = v;
                    best.argmax = (x, y, z);
                }
            }
        }
    }
    best
}

/// The strong 3-sum system attaining `f(k)`, via [`construct_abc`].
pub fn fk_system(k: u32) -> Result<PairSystem> {
    let (x, y, z) = f_k(k).argmax;
    let (a, b, c) = ((x + z) as usize, (y + z) as usize, z as usize);
    if a <= b {
        construct_abc(a, b, c, 3, 2)
    } else {
        construct_abc(b, a, c, 3, 2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LymReport {
    pub sum_num: String,
    pub sum_den: String,
    pub sum: String,
    pub a: usize,
    pub b: usize,
    pub bound: usize,
    pub holds: bool,
    pub valid: bool,
}

/// `a! b! c! / (a+b+c)!` for one profile, exactly.
pub fn lym_term(p: AbcProfile) -> Rational {
    let total = binomial((p.a + p.b + p.c) as u64, p.c as u64) * binomial((p.a + p.b) as u64, p.a as u64);
    Rational::new(BigInt::one(), BigInt::from(total))
}

/// Exact left-hand side of the LYM-type inequality for strong 3-sum
/// systems over `{0,1,2}`, against `min(a, b)`.
pub fn lym_strong(sys: &PairSystem) -> Result<LymReport> {
    if sys.q != 2 || sys.s != 3 {
        return Err(Error::param(format!(
            "lym audit needs q=2, s=3, got q={}, s={}",
            sys.q, sys.s
        )));
    }
    let sum = sys
        .profiles()
        .into_iter()
        .fold(Rational::zero(), |acc, p| acc + lym_term(p));
    let (a, b) = sys.support_bounds();
    let bound = a.min(b);
    Ok(LymReport {
        sum_num: sum.numer().to_string(),
        sum_den: sum.denom().to_string(),
        sum: rational_string(&sum),
        a,
        b,
        bound,
        holds: sum <= Rational::from_integer(BigInt::from(bound)),
        valid: system_check(&sys.clone().with_kind(SystemKind::Strong)).valid,
    })
}

/// Where `α^j_i` counts coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaScope {
    /// The pair's own support union.
    #[default]
    PairLocal,
    /// The union of all supports in the system.
    Global,
}

/// `α^j_i` for every pair: how many counted coordinates have `x = i`.
pub fn alpha_profiles(sys: &PairSystem, scope: AlphaScope) -> Vec<Vec<usize>> {
    let q = usize::from(sys.q);
    let ground: Vec<bool> = (0..sys.n)
        .map(|t| sys.pairs.iter().any(|p| p.x.entries()[t] + p.y.entries()[t] > 0))
        .collect();
    sys.pairs
        .iter()
        .map(|p| {
            let mut alpha = vec![0; q + 1];
            for ((&u, &v), &used) in p.x.entries().iter().zip(p.y.entries()).zip(&ground) {
                let counted = match scope {
                    AlphaScope::PairLocal => u + v > 0,
                    AlphaScope::Global => used,
                };
                if counted {
                    alpha[usize::from(u)] += 1;
                }
            }
            alpha
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedReport<T> {
    pub sum: T,
    pub terms: Vec<T>,
    pub holds: bool,
}

pub type WeightedReportF64 = WeightedReport<f64>;
pub type WeightedReportExact = WeightedReport<Rational>;

fn check_probabilities<T: Scalar>(p: &[T], q: u8) -> Result<()> {
    if p.len() != usize::from(q) + 1 {
        return Err(Error::param(format!(
            "need q+1 = {} probabilities, got {}",
            usize::from(q) + 1,
            p.len()
        )));
    }
    if p.iter().any(|x| *x < T::zero()) {
        return Err(Error::param("probabilities must be non-negative"));
    }
    let total = p.iter().fold(T::zero(), |acc, x| acc + x.clone());
    if !crate::scalar::is_one(&total) {
        return Err(Error::param(format!("probabilities must sum to 1, got {:?}", total)));
    }
    Ok(())
}

/// `Σ_j Π_i p_i^{α^j_i}` for a saturated weak `(q+1)`-sum system.
pub fn weighted_sum<T: Scalar>(sys: &PairSystem, p: &[T], scope: AlphaScope) -> Result<WeightedReport<T>> {
    check_probabilities(p, sys.q)?;
    if sys.s != u32::from(sys.q) + 1 {
        return Err(Error::param("weighted sum needs s = q+1"));
    }
    if !is_saturated(sys) {
        return Err(Error::param("system is not saturated"));
    }
    if !system_check(&sys.clone().with_kind(SystemKind::Weak)).valid {
        return Err(Error::param("system is not a valid weak (q+1)-sum system"));
    }
    let terms: Vec<T> = alpha_profiles(sys, scope)
        .into_iter()
        .map(|alpha| {
            alpha
                .iter()
                .zip(p)
                .fold(T::one(), |acc, (&e, pi)| acc * pi.pow_u(e as u32))
        })
        .collect();
    let sum = terms.iter().fold(T::zero(), |acc, x| acc + x.clone());
    let holds = sum.le_tol(&T::one());
    Ok(WeightedReport { sum, terms, holds })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DisjointnessReport {
    pub trials: u64,
    pub seed: u64,
    /// Trials in which at least one event occurred.
    pub hits: u64,
    /// Trials in which two or more events occurred together.
    pub co_occurrences: u64,
    pub disjoint: bool,
}

/// Samples random partitions `(X_0, .., X_q)` of the ground set, each
/// coordinate landing in `X_i` with probability `p_i`, and counts trials
/// where two events `E_j = ∧_i (A^j_i ⊆ X_i)` hold at once.
pub fn empirical_disjointness(
    sys: &PairSystem,
    p: &[f64],
    trials: u64,
    seed: u64,
    scope: AlphaScope,
) -> Result<DisjointnessReport> {
    check_probabilities(p, sys.q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = sys.q;
    let ground: Vec<bool> = (0..sys.n)
        .map(|t| sys.pairs.iter().any(|pr| pr.x.entries()[t] + pr.y.entries()[t] > 0))
        .collect();
    let mut cumulative = Vec::with_capacity(p.len());
    let mut acc = 0.0;
    for &pi in p {
        acc += pi;
        cumulative.push(acc);
    }
    let mut label = vec![0u8; sys.n];
    let (mut hits, mut co) = (0, 0);
    for _ in 0..trials {
        for (t, l) in label.iter_mut().enumerate() {
            if ground[t] {
                let u: f64 = rng.random();
                *l = cumulative.iter().position(|&c| u < c).unwrap_or(usize::from(q)) as u8;
            }
        }
        let occurring = sys
            .pairs
            .iter()
            .filter(|pr| {
                (0..sys.n).all(|t| {
                    let (u, v) = (pr.x.entries()[t], pr.y.entries()[t]);
                    let counted = match scope {
                        AlphaScope::PairLocal => u + v > 0,
                        AlphaScope::Global => ground[t],
                    };
                    !counted || label[t] == u
                })
            })
            .count();
        if occurring > 0 {
            hits += 1;
        }
        if occurring > 1 {
            co += 1;
        }
    }
    Ok(DisjointnessReport {
        trials,
        seed,
        hits,
        co_occurrences: co,
        disjoint: co == 0,
    })
}

/// Random system built greedily: candidate pairs with no within-pair
/// intersection are kept when compatible with every pair kept so far.
pub fn random_system(q: u8, s: u32, kind: SystemKind, n: usize, attempts: usize, rng: &mut impl Rng) -> PairSystem {
    let mut sys = PairSystem::from_entries(q, s, kind, Vec::new());
    sys.n = n;
    for _ in 0..attempts {
        let x: Vec<u8> = (0..n).map(|_| rng.random_range(0..=q)).collect();
        let y: Vec<u8> = x
            .iter()
            .map(|&u| {
                let cap = (s - 1).saturating_sub(u32::from(u)).min(u32::from(q)) as u8;
                rng.random_range(0..=cap)
            })
            .collect();
        if x.iter().all(|&v| v == 0) || y.iter().all(|&v| v == 0) {
            continue;
        }
        let cand = Pair {
            x: QVec::from_trusted(q, x),
            y: QVec::from_trusted(q, y),
        };
        if sys.pairs.contains(&cand) {
            continue;
        }
        let ok = sys.pairs.iter().all(|p| compatible(&sys, kind, p, &cand));
        if ok {
            sys.pairs.push(cand);
        }
    }
    sys
}

fn compatible(sys: &PairSystem, kind: SystemKind, a: &Pair, b: &Pair) -> bool {
    let xy = sys.meets(&a.x, &b.y);
    let yx = sys.meets(&b.x, &a.y);
    match kind {
        SystemKind::Strong => xy && yx,
        SystemKind::Weak => xy || yx,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaxSystemResult {
    pub q: u8,
    pub k: u32,
    pub kind: SystemKind,
    pub n_cap: usize,
    pub optimum: usize,
    pub witness: Option<PairSystem>,
    pub status: Status,
    pub stats: CliqueStats,
    /// `f(k)` and `k f(k)`, reported when `q = 2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_k: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_f_k: Option<u128>,
}

/// Largest `(k, k)`-system of `(q+1)`-sum pairs on a ground set of
/// `n_cap` coordinates, by clique search over all admissible pairs.
pub fn max_system(
    q: u8,
    k: u32,
    kind: SystemKind,
    n_cap: usize,
    budget: Budget,
    threads: usize,
) -> Result<MaxSystemResult> {
    if q == 0 || k == 0 || n_cap == 0 {
        return Err(Error::param("max_system needs q, k, n_cap >= 1"));
    }
    let s = u32::from(q) + 1;
    let mut sides = Vec::new();
    crate::qvec::for_each_in_slice(n_cap, q, crate::qvec::SliceKind::All, |e| {
        if e.iter().filter(|&&v| v > 0).count() <= k as usize {
            sides.push(e.to_vec());
        }
    });
    let mut cands = Vec::new();
    for x in &sides {
        for y in &sides {
            if x.iter().zip(y).all(|(&u, &v)| u32::from(u) + u32::from(v) < s) {
                cands.push(Pair {
                    x: QVec::from_trusted(q, x.clone()),
                    y: QVec::from_trusted(q, y.clone()),
                });
            }
        }
    }
    let probe = PairSystem::from_entries(q, s, kind, Vec::new());
    let g = Graph::from_predicate(cands.len(), |i, j| compatible(&probe, kind, &cands[i], &cands[j]));
    let opts = CliqueOptions {
        budget,
        threads,
        witness: WitnessMode::ColexMin,
        roots: None,
    };
    let out = max_clique(&g, &opts, None);
    let witness = out.clique.map(|c| {
        let mut sys = PairSystem::from_entries(q, s, kind, Vec::new());
        sys.n = n_cap;
        sys.pairs = c.iter().map(|&i| cands[i].clone()).collect();
        sys
    });
    if let Some(w) = &witness {
        verified(w.clone())?;
    }
    let fk = (q == 2).then(|| f_k(k).value);
    Ok(MaxSystemResult {
        q,
        k,
        kind,
        n_cap,
        optimum: out.size,
        witness,
        status: out.status,
        stats: out.stats,
        f_k: fk,
        k_f_k: fk.map(|v| v * u128::from(k)),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendRow {
    pub k: u32,
    pub alphas: Vec<usize>,
    pub count: u128,
    pub root: f64,
    pub relative_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendReport {
    pub q: u8,
    pub target: f64,
    pub rows: Vec<TrendRow>,
    /// Whether the gap to the target shrinks (weakly) from row to row.
    pub monotone: bool,
}

/// Part sizes for a `(k, k)` α-construction near the proportions
/// `p_0 = p_q = 1/(√q+1)`, `p_i = p_0^2` otherwise.
pub fn trend_alphas(q: u8, k: u32) -> Vec<usize> {
    let qf = f64::from(q);
    let p0 = 1.0 / (qf.sqrt() + 1.0);
    let middle = (f64::from(k) * p0 / (1.0 + (qf - 1.0) * p0)).round() as usize;
    let middle = middle.min(k as usize / (usize::from(q) - 1).max(1));
    let edge = k as usize - (usize::from(q) - 1) * middle;
    let mut alphas = vec![middle; usize::from(q) + 1];
    alphas[0] = edge;
    alphas[usize::from(q)] = edge;
    alphas
}

/// `count^{1/k}` of the α-construction against `(√q+1)^2`.
pub fn limit_trend(q: u8, ks: impl IntoIterator<Item = u32>) -> Result<TrendReport> {
    if q == 0 {
        return Err(Error::param("q must be at least 1"));
    }
    let target = (f64::from(q).sqrt() + 1.0).powi(2);
    let rows: Vec<TrendRow> = ks
        .into_iter()
        .map(|k| {
            let alphas = trend_alphas(q, k);
            let count = alpha_count(&alphas);
            let root = (count as f64).powf(1.0 / f64::from(k));
            TrendRow {
                k,
                alphas,
                count,
                root,
                relative_gap: (target - root) / target,
            }
        })
        .collect();
    let monotone = rows.windows(2).all(|w| w[1].relative_gap <= w[0].relative_gap);
    Ok(TrendReport {
        q,
        target,
        rows,
        monotone,
    })
}
