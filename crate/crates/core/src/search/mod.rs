//! Exact maximum families over a slice of `Q^n`, and bound certification.

pub mod clique;

use serde::{Deserialize, Serialize};

use crate::constructions::{bound, construction, search_setting, threshold_ok, BoundKind, BoundParams};
use crate::error::{Error, Result};
use crate::qvec::{enumerate_slice, family_check, PredicateSpec, QVec, SliceKind, VecFamily};

pub use clique::{Budget, CliqueOptions, CliqueOutcome, CliqueStats, Graph, Round, Status, TraceEvent, WitnessMode};

/// A maximum-family problem: the largest subfamily of a slice satisfying
/// the predicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchProblem {
    pub n: usize,
    pub q: u8,
    pub universe: SliceKind,
    pub predicate: PredicateSpec,
    #[serde(default)]
    pub max_nodes: Option<u64>,
    #[serde(default)]
    pub max_secs: Option<f64>,
    /// Worker threads; `0` uses the default pool size.
    #[serde(default)]
    pub threads: usize,
    /// Restrict top-level branches to one vector per coordinate-permutation
    /// orbit. Only the optimum is reported.
    #[serde(default)]
    pub symmetry: bool,
}

impl SearchProblem {
    pub fn new(n: usize, q: u8, universe: SliceKind, predicate: PredicateSpec) -> Self {
        SearchProblem {
            n,
            q,
            universe,
            predicate,
            max_nodes: None,
            max_secs: None,
            threads: 0,
            symmetry: false,
        }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn with_max_nodes(mut self, max_nodes: u64) -> Self {
        self.max_nodes = Some(max_nodes);
        self
    }

    fn budget(&self) -> Budget {
        Budget {
            max_nodes: self.max_nodes,
            max_secs: self.max_secs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub optimum: usize,
    /// Colex-minimal optimum family when exact; the best family found when
    /// the budget ran out; absent under symmetry reduction.
    pub witness: Option<VecFamily>,
    pub status: Status,
    pub stats: CliqueStats,
}

impl SearchResult {
    pub fn is_exact(&self) -> bool {
        self.status == Status::Exact
    }
}

/// The compatibility graph: universe vectors in colex order, joined when
/// the pair meets the predicate. Without `distinct_only`, vectors that fail
/// the predicate against themselves are left out.
pub fn compat_graph(universe: &VecFamily, p: &PredicateSpec) -> (Vec<QVec>, Graph) {
    let vertices: Vec<QVec> = universe
        .iter()
        .filter(|x| p.distinct_only || p.pair_holds(x, x))
        .cloned()
        .collect();
    let g = Graph::from_predicate(vertices.len(), |i, j| p.pair_holds(&vertices[i], &vertices[j]));
    (vertices, g)
}

fn is_orbit_representative(x: &QVec) -> bool {
    x.entries().windows(2).all(|w| w[0] >= w[1])
}

/// Solves `p` exactly, or reports that the budget ran out.
pub fn max_family(p: &SearchProblem) -> Result<SearchResult> {
    max_family_traced(p, None)
}

pub fn max_family_traced(p: &SearchProblem, trace: Option<&mut dyn FnMut(TraceEvent)>) -> Result<SearchResult> {
    let universe = enumerate_slice(p.n, p.q, p.universe)?;
    let (vertices, g) = compat_graph(&universe, &p.predicate);
    let roots = p.symmetry.then(|| {
        (0..vertices.len())
            .filter(|&i| is_orbit_representative(&vertices[i]))
            .collect()
    });
    let opts = CliqueOptions {
        budget: p.budget(),
        threads: p.threads,
        witness: WitnessMode::ColexMin,
        roots,
    };
    let out = clique::max_clique(&g, &opts, trace);
    let witness = match out.clique {
        Some(c) => {
            let members = c.iter().map(|&i| vertices[i].clone()).collect();
            let family = VecFamily::new(p.n, p.q, members)?;
            let check = family_check(&family, &p.predicate);
            if !check.holds {
                return Err(Error::Verification(format!(
                    "search witness fails the predicate: {:?}",
                    check.witness
                )));
            }
            Some(family)
        }
        None => None,
    };
    Ok(SearchResult {
        optimum: out.size,
        witness,
        status: out.status,
        stats: out.stats,
    })
}

/// `M(n)`: the largest 3-multisum 3-intersecting family inside the rank
/// `n + 1` slice of `{0,1,2}^n`.
pub fn m_of_n(n: usize, max_nodes: Option<u64>, threads: usize) -> Result<SearchResult> {
    if n == 0 {
        return Err(Error::param("n must be at least 1"));
    }
    let mut p = SearchProblem::new(n, 2, SliceKind::Rank(n as u32 + 1), PredicateSpec::multisum(3, 3)?);
    p.max_nodes = max_nodes;
    p.threads = threads;
    max_family(&p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Verified,
    Violated,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertifyReport {
    pub kind: BoundKind,
    pub params: BoundParams,
    pub formula: u128,
    pub construction: usize,
    pub construction_family: VecFamily,
    pub search: SearchResult,
    /// Whether `n` meets the bound's range hypothesis.
    pub threshold_ok: bool,
    /// formula = construction = search optimum (exact searches only).
    pub agree: bool,
    pub status: Verdict,
    /// `M(n)` search, for the three-intersecting multisum bound.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_of_n: Option<SearchResult>,
}

/// Evaluates the bound, builds the construction and runs the exact search.
///
/// Verified: the search is exact, all three numbers agree and the
/// hypotheses hold. Violated: hypotheses hold but the search or the
/// construction contradicts the formula. Everything else is inconclusive.
pub fn certify(kind: BoundKind, params: &BoundParams, max_nodes: Option<u64>, threads: usize) -> Result<CertifyReport> {
    let mut params = *params;
    let mut m_report = None;
    let mut family = construction(kind, &params)?;
    if kind == BoundKind::KatonaMultisum3 {
        let m = m_of_n(params.n, max_nodes, threads)?;
        params.m_n = Some(m.optimum as u128);
        if let Some(w) = &m.witness {
            family = family.union(w)?;
        }
        m_report = Some(m);
    }
    let formula = bound(kind, &params)?;
    let (universe, predicate) = search_setting(kind, &params)?;
    let mut problem = SearchProblem::new(params.n, params.q, universe, predicate);
    problem.max_nodes = max_nodes;
    problem.threads = threads;
    let search = max_family(&problem)?;

    let m_exact = m_report.as_ref().is_none_or(SearchResult::is_exact);
    let construction_ok = family_check(&family, &predicate).holds;
    let agree = search.is_exact() && m_exact && formula == family.len() as u128 && formula == search.optimum as u128;
    let threshold_ok = threshold_ok(kind, &params);
    let status = if !search.is_exact() || !m_exact || !threshold_ok {
        Verdict::Inconclusive
    } else if agree && construction_ok {
        Verdict::Verified
    } else {
        Verdict::Violated
    };
    Ok(CertifyReport {
        kind,
        params,
        formula,
        construction: family.len(),
        construction_family: family,
        search,
        threshold_ok,
        agree,
        status,
        m_of_n: m_report,
    })
}
