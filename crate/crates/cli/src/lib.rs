//! Argument parsing and dispatch for the `qsum` binary.
//!
//! Every run prints one key-sorted JSON report on standard output.
//! Exit codes: 0 verified or success, 1 violation or invalid input family,
//! 2 usage or schema error, 3 budget exceeded.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use qsum_core::constructions::{self, Anchor, BoundKind, BoundParams};
use qsum_core::io::{family_from_value, parse_json, system_from_value, to_canonical_json};
use qsum_core::ivp::{self, AlphaScope, PairSystem, SystemKind};
use qsum_core::order::{self, IndexSet};
use qsum_core::scalar::{parse_rational, rational_string};
use qsum_core::search::{self, Budget, SearchProblem, Status as SearchStatus, Verdict};
use qsum_core::{Error, Mode, PredicateSpec, Rational, Scalar, SliceKind, VecFamily};

#[derive(Parser, Debug)]
#[command(name = "qsum", version, about = "Sum-intersecting families of q-ary vectors")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List a slice of {0..q}^n in colex order.
    Enumerate(SliceArgs),
    /// Build an extremal construction.
    Construct(ConstructArgs),
    /// Shadow of a rank-uniform family.
    Shadow {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, default_value_t = 1)]
        levels: u32,
    },
    /// Apply the shift τ_{i,j} (1-based).
    Shift {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        /// Keep shifting until the family is left-shifted.
        #[arg(long)]
        closure: bool,
    },
    /// Check a family against an intersection predicate.
    Verify {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        pred: PredicateArgs,
    },
    /// Exact maximum family inside a slice.
    Search {
        #[command(flatten)]
        slice: SliceArgs,
        #[command(flatten)]
        pred: PredicateArgs,
        #[command(flatten)]
        engine: EngineArgs,
        /// One top-level branch per coordinate-permutation orbit; reports
        /// the optimum only.
        #[arg(long)]
        symmetry: bool,
    },
    /// Compare bound formula, construction and exact search.
    Certify {
        kind: KindArg,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long = "budget-nodes")]
        budget_nodes: Option<u64>,
        #[arg(long, env = "QSUM_THREADS", default_value_t = 0)]
        threads: usize,
    },
    /// Intersecting vector-pair systems.
    #[command(subcommand)]
    Ivp(IvpCommand),
}

#[derive(Subcommand, Debug)]
enum IvpCommand {
    /// Validate a pair system.
    Check(IoArgs),
    /// Saturate a (q+1)-sum system.
    Saturate(IoArgs),
    /// Reduce an s = q+t system to a (q-t+2)-sum system.
    Reduce(IoArgs),
    /// The (a,b,c) construction.
    Abc {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        q: u8,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The partition construction with part sizes alpha_0..alpha_q.
    Alpha {
        #[arg(long)]
        q: u8,
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// f(k) by grid enumeration.
    Fk {
        #[arg(long)]
        k: u32,
    },
    /// Exact LYM-type sum of a strong 3-sum system over {0,1,2}.
    Lym(IoArgs),
    /// Weighted sum Σ_j Π_i p_i^α for a saturated weak system.
    Weighted {
        #[command(flatten)]
        io: IoArgs,
        /// q+1 probabilities, as decimals or p/q fractions.
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<String>,
        /// Exact rational arithmetic (probabilities must be fractions).
        #[arg(long)]
        exact: bool,
        #[arg(long, value_enum, default_value_t = ScopeArg::PairLocal)]
        scope: ScopeArg,
    },
    /// Sample random partitions and count co-occurring events.
    Disjoint {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = ScopeArg::PairLocal)]
        scope: ScopeArg,
    },
    /// LYM audit over seeded random strong 3-sum systems.
    Audit {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Largest (k,k)-system on n-cap coordinates by exact search.
    Max {
        #[arg(long)]
        q: u8,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = SystemKindArg::Strong)]
        kind: SystemKindArg,
        #[arg(long = "n-cap")]
        n_cap: usize,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// k-th root of the partition construction size against (√q+1)^2.
    Trend {
        #[arg(long)]
        q: u8,
        #[arg(long = "k-min", default_value_t = 4)]
        k_min: u32,
        #[arg(long = "k-max", default_value_t = 12)]
        k_max: u32,
    },
}

#[derive(Args, Debug)]
struct IoArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Also write the resulting family or system, canonicalised.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SliceArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: u8,
    #[arg(long, conflicts_with = "support")]
    rank: Option<u32>,
    #[arg(long)]
    support: Option<usize>,
}

impl SliceArgs {
    fn kind(&self) -> SliceKind {
        match (self.rank, self.support) {
            (Some(r), _) => SliceKind::Rank(r),
            (None, Some(r)) => SliceKind::Support(r),
            (None, None) => SliceKind::All,
        }
    }
}

#[derive(Args, Debug)]
struct PredicateArgs {
    #[arg(long)]
    s: u32,
    #[arg(long, default_value_t = 1)]
    t: u32,
    #[arg(long, value_enum, default_value_t = ModeArg::Sum)]
    mode: ModeArg,
    /// Also require every member to meet itself.
    #[arg(long = "self-pairs")]
    self_pairs: bool,
}

impl PredicateArgs {
    fn spec(&self) -> Result<PredicateSpec, Error> {
        let mode = match self.mode {
            ModeArg::Sum => Mode::Sum,
            ModeArg::Multisum => Mode::Multisum,
        };
        let p = PredicateSpec::new(mode, self.s, self.t)?;
        Ok(if self.self_pairs { p.with_self_pairs() } else { p })
    }
}

#[derive(Args, Debug)]
struct EngineArgs {
    #[arg(long = "budget-nodes")]
    budget_nodes: Option<u64>,
    #[arg(long = "budget-secs")]
    budget_secs: Option<f64>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, env = "QSUM_THREADS", default_value_t = 0)]
    threads: usize,
    /// Emit line-delimited JSON search events on standard error.
    #[arg(long)]
    trace: bool,
}

#[derive(Args, Debug)]
struct ParamArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: u8,
    /// Defaults to q+1.
    #[arg(long)]
    s: Option<u32>,
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long, default_value_t = 1)]
    t: u32,
}

impl ParamArgs {
    fn params(&self) -> BoundParams {
        let p = BoundParams::new(self.n, self.q).r(self.r).t(self.t);
        match self.s {
            Some(s) => p.s(s),
            None => p,
        }
    }
}

#[derive(Args, Debug)]
struct ConstructArgs {
    kind: KindArg,
    #[command(flatten)]
    params: ParamArgs,
    /// Anchor coordinates (1-based): the star centre for even s, the tuple
    /// for odd s, or the set T for the t-intersecting construction.
    #[arg(long, value_delimiter = ',')]
    anchor: Option<Vec<usize>>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
#[value(rename_all = "snake_case")]
enum KindArg {
    SupportUniform,
    RankUniform,
    SupportUniformT,
    Nonuniform,
    NonuniformSmallS,
    KatonaMultisum2,
    KatonaMultisum3,
}

impl From<KindArg> for BoundKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::SupportUniform => BoundKind::SupportUniform,
            KindArg::RankUniform => BoundKind::RankUniform,
            KindArg::SupportUniformT => BoundKind::SupportUniformT,
            KindArg::Nonuniform => BoundKind::Nonuniform,
            KindArg::NonuniformSmallS => BoundKind::NonuniformSmallS,
            KindArg::KatonaMultisum2 => BoundKind::KatonaMultisum2,
            KindArg::KatonaMultisum3 => BoundKind::KatonaMultisum3,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Sum,
    Multisum,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SystemKindArg {
    Strong,
    Weak,
}

impl From<SystemKindArg> for SystemKind {
    fn from(k: SystemKindArg) -> Self {
        match k {
            SystemKindArg::Strong => SystemKind::Strong,
            SystemKindArg::Weak => SystemKind::Weak,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ScopeArg {
    PairLocal,
    Global,
}

impl From<ScopeArg> for AlphaScope {
    fn from(s: ScopeArg) -> Self {
        match s {
            ScopeArg::PairLocal => AlphaScope::PairLocal,
            ScopeArg::Global => AlphaScope::Global,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Verified,
    Violated,
    Inconclusive,
    Error,
}

impl RunStatus {
    fn name(self) -> &'static str {
        match self {
            RunStatus::Verified => "verified",
            RunStatus::Violated => "violated",
            RunStatus::Inconclusive => "inconclusive",
            RunStatus::Error => "error",
        }
    }
}

/// What a subcommand produced, before timing and echo are attached.
struct Produced {
    parameters: Value,
    results: Value,
    status: RunStatus,
    code: i32,
    stats: Option<Value>,
}

impl Produced {
    fn new(parameters: Value, results: Value, status: RunStatus) -> Self {
        let code = match status {
            RunStatus::Verified | RunStatus::Inconclusive => 0,
            RunStatus::Violated => 1,
            RunStatus::Error => 2,
        };
        Produced {
            parameters,
            results,
            status,
            code,
            stats: None,
        }
    }

    fn budget(mut self, exceeded: bool) -> Self {
        if exceeded {
            self.status = RunStatus::Inconclusive;
            self.code = 3;
        }
        self
    }

    fn stats(mut self, stats: Value) -> Self {
        self.stats = Some(stats);
        self
    }
}

/// Output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::Verification(_) => 1,
        Error::BudgetExceeded(_) => 3,
        _ => 2,
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let echo: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let start = Instant::now();
    let mut stderr = String::new();
    let produced = run(cli.command, &mut stderr);
    let wall = start.elapsed().as_secs_f64();
    let produced = match produced {
        Ok(p) => p,
        Err(e) => {
            stderr.push_str(&format!("error: {e}\n"));
            let mut results = json!({ "error": e.to_string() });
            if let Error::Schema { pointer, .. } = &e {
                results["pointer"] = json!(pointer);
            }
            Produced {
                parameters: Value::Null,
                results,
                status: RunStatus::Error,
                code: error_code(&e),
                stats: None,
            }
        }
    };
    let mut report = json!({
        "command": echo,
        "parameters": produced.parameters,
        "results": produced.results,
        "status": produced.status.name(),
        "wall_secs": wall,
    });
    if let Some(stats) = produced.stats {
        report["stats"] = stats;
    }
    Outcome {
        code: produced.code,
        stdout: to_canonical_json(&report).expect("report serialises"),
        stderr,
    }
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Parameter(format!("cannot read {}: {e}", path.display())))?;
    parse_json(&text)
}

fn read_family(path: &Path) -> Result<VecFamily, Error> {
    family_from_value(&read_json(path)?)
}

fn read_system(path: &Path) -> Result<PairSystem, Error> {
    system_from_value(&read_json(path)?)
}

fn write_out<T: serde::Serialize>(out: &Option<PathBuf>, value: &T) -> Result<(), Error> {
    if let Some(path) = out {
        let text = to_canonical_json(value)?;
        fs::write(path, text).map_err(|e| Error::Parameter(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("core types serialise")
}

fn family_value(f: &VecFamily) -> Value {
    to_value(f)
}

fn seed_or_draw(seed: Option<u64>, stderr: &mut String) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        stderr.push_str(&format!("seed: {s}\n"));
        s
    })
}

fn run(command: Command, stderr: &mut String) -> Result<Produced, Error> {
    match command {
        Command::Enumerate(slice) => {
            let kind = slice.kind();
            let family = qsum_core::enumerate_slice(slice.n, slice.q, kind)?;
            Ok(Produced::new(
                json!({ "n": slice.n, "q": slice.q, "slice": to_value(&kind) }),
                json!({ "count": family.len(), "family": family_value(&family) }),
                RunStatus::Verified,
            ))
        }
        Command::Construct(args) => construct(args),
        Command::Shadow { io, levels } => {
            let family = read_family(&io.input)?;
            let d = order::shadow(&family, levels)?;
            write_out(&io.out, &d)?;
            Ok(Produced::new(
                json!({ "in": io.input, "levels": levels, "input_size": family.len() }),
                json!({ "size": d.len(), "family": family_value(&d) }),
                RunStatus::Verified,
            ))
        }
        Command::Shift { io, i, j, closure } => {
            let family = read_family(&io.input)?;
            let g = order::shift(&family, i, j, closure)?;
            write_out(&io.out, &g)?;
            Ok(Produced::new(
                json!({ "in": io.input, "i": i, "j": j, "closure": closure }),
                json!({
                    "size": g.len(),
                    "family": family_value(&g),
                    "left_shifted": order::is_left_shifted(&g),
                    "weight_before": order::shift_weight(&family),
                    "weight_after": order::shift_weight(&g),
                }),
                RunStatus::Verified,
            ))
        }
        Command::Verify { io, pred } => {
            let family = read_family(&io.input)?;
            write_out(&io.out, &family)?;
            let spec = pred.spec()?;
            let check = qsum_core::family_check(&family, &spec);
            let status = if check.holds {
                RunStatus::Verified
            } else {
                RunStatus::Violated
            };
            Ok(Produced::new(
                json!({ "in": io.input, "predicate": to_value(&spec) }),
                json!({ "size": family.len(), "holds": check.holds, "witness": to_value(&check.witness) }),
                status,
            ))
        }
        Command::Search {
            slice,
            pred,
            engine,
            symmetry,
        } => {
            let spec = pred.spec()?;
            let mut problem = SearchProblem::new(slice.n, slice.q, slice.kind(), spec);
            problem.max_nodes = engine.budget_nodes;
            problem.max_secs = engine.budget_secs;
            problem.threads = engine.threads;
            problem.symmetry = symmetry;
            let result = if engine.trace {
                let mut sink = |ev: search::TraceEvent| {
                    stderr.push_str(&serde_json::to_string(&ev).expect("event serialises"));
                    stderr.push('\n');
                };
                search::max_family_traced(&problem, Some(&mut sink))?
            } else {
                search::max_family(&problem)?
            };
            let exceeded = result.status == SearchStatus::BudgetExceeded;
            Ok(Produced::new(
                to_value(&problem),
                json!({
                    "optimum": result.optimum,
                    "search_status": to_value(&result.status),
                    "witness": to_value(&result.witness),
                }),
                RunStatus::Verified,
            )
            .budget(exceeded)
            .stats(to_value(&result.stats)))
        }
        Command::Certify {
            kind,
            params,
            budget_nodes,
            threads,
        } => {
            let kind = BoundKind::from(kind);
            let rep = search::certify(kind, &params.params(), budget_nodes, threads)?;
            let status = match rep.status {
                Verdict::Verified => RunStatus::Verified,
                Verdict::Violated => RunStatus::Violated,
                Verdict::Inconclusive => RunStatus::Inconclusive,
            };
            let exceeded = rep.search.status == SearchStatus::BudgetExceeded
                || rep
                    .m_of_n
                    .as_ref()
                    .is_some_and(|m| m.status == SearchStatus::BudgetExceeded);
            let stats = to_value(&rep.search.stats);
            let mut results = json!({
                "formula": rep.formula.to_string(),
                "construction": rep.construction,
                "search": rep.search.optimum,
                "search_status": to_value(&rep.search.status),
                "threshold_ok": rep.threshold_ok,
                "agree": rep.agree,
                "construction_family": family_value(&rep.construction_family),
                "witness": to_value(&rep.search.witness),
            });
            if let Some(m) = &rep.m_of_n {
                results["m_of_n"] = json!(m.optimum);
            }
            Ok(Produced::new(
                json!({ "kind": kind.name(), "params": to_value(&rep.params) }),
                results,
                status,
            )
            .budget(exceeded)
            .stats(stats))
        }
        Command::Ivp(cmd) => run_ivp(cmd, stderr),
    }
}

fn construct(args: ConstructArgs) -> Result<Produced, Error> {
    let kind = BoundKind::from(args.kind);
    let p = args.params.params();
    let family = match (&args.anchor, kind) {
        (None, _) => constructions::construction(kind, &p)?,
        (Some(a), BoundKind::SupportUniform) => {
            let anchor = if p.s.is_multiple_of(2) {
                match a.as_slice() {
                    [i] => Anchor::Index(*i),
                    _ => return Err(Error::Parameter("even s takes a single anchor coordinate".into())),
                }
            } else {
                Anchor::Tuple(a.clone())
            };
            constructions::support_star(p.n, p.q, p.s, p.r, &anchor)?
        }
        (Some(a), BoundKind::SupportUniformT) => {
            let set = IndexSet::new(a.clone())?;
            constructions::t_intersecting_construction(p.n, p.q, p.s, p.r, p.t, Some(&set))?
        }
        (Some(_), _) => return Err(Error::Parameter(format!("{kind} takes no anchor"))),
    };
    write_out(&args.out, &family)?;
    let formula = match kind {
        BoundKind::KatonaMultisum3 => None,
        _ => Some(constructions::bound(kind, &p)?.to_string()),
    };
    Ok(Produced::new(
        json!({ "kind": kind.name(), "params": to_value(&p), "anchor": args.anchor }),
        json!({ "size": family.len(), "formula": formula, "family": family_value(&family) }),
        RunStatus::Verified,
    ))
}

fn system_value(s: &PairSystem) -> Value {
    to_value(s)
}

fn run_ivp(cmd: IvpCommand, stderr: &mut String) -> Result<Produced, Error> {
    match cmd {
        IvpCommand::Check(io) => {
            let sys = read_system(&io.input)?;
            write_out(&io.out, &sys)?;
            let check = ivp::system_check(&sys);
            let status = if check.valid {
                RunStatus::Verified
            } else {
                RunStatus::Violated
            };
            Ok(Produced::new(
                json!({ "in": io.input }),
                json!({ "pairs": sys.len(), "valid": check.valid, "witness": to_value(&check.witness) }),
                status,
            ))
        }
        IvpCommand::Saturate(io) => {
            let sys = ivp::saturate(&read_system(&io.input)?)?;
            write_out(&io.out, &sys)?;
            Ok(Produced::new(
                json!({ "in": io.input }),
                json!({ "system": system_value(&sys) }),
                RunStatus::Verified,
            ))
        }
        IvpCommand::Reduce(io) => {
            let sys = ivp::reduce_parameter(&read_system(&io.input)?)?;
            write_out(&io.out, &sys)?;
            let valid = ivp::system_check(&sys).valid;
            Ok(Produced::new(
                json!({ "in": io.input }),
                json!({ "system": system_value(&sys), "valid": valid }),
                RunStatus::Verified,
            ))
        }
        IvpCommand::Abc { a, b, c, s, q, out } => {
            let sys = ivp::construct_abc(a, b, c, s, q)?;
            write_out(&out, &sys)?;
            Ok(Produced::new(
                json!({ "a": a, "b": b, "c": c, "s": s, "q": q }),
                json!({ "pairs": sys.len(), "system": system_value(&sys) }),
                RunStatus::Verified,
            ))
        }
        IvpCommand::Alpha { q, alphas, out } => {
            let sys = ivp::construct_alpha(&alphas, q)?;
            write_out(&out, &sys)?;
            Ok(Produced::new(
                json!({ "q": q, "alphas": alphas }),
                json!({ "pairs": sys.len(), "system": system_value(&sys) }),
                RunStatus::Verified,
            ))
        }
        IvpCommand::Fk { k } => {
            let f = ivp::f_k(k);
            Ok(Produced::new(
                json!({ "k": k }),
                json!({ "f": f.value.to_string(), "argmax": [f.argmax.0, f.argmax.1, f.argmax.2] }),
                RunStatus::Verified,
            ))
        }
        IvpCommand::Lym(io) => {
            let rep = ivp::lym_strong(&read_system(&io.input)?)?;
            let status = if rep.holds {
                RunStatus::Verified
            } else {
                RunStatus::Violated
            };
            Ok(Produced::new(json!({ "in": io.input }), to_value(&rep), status))
        }
        IvpCommand::Weighted { io, p, exact, scope } => {
            let sys = read_system(&io.input)?;
            let scope = AlphaScope::from(scope);
            let results = if exact {
                let probs = p
                    .iter()
                    .map(|s| parse_rational(s).ok_or_else(|| Error::Parameter(format!("not a fraction: {s}"))))
                    .collect::<Result<Vec<Rational>, _>>()?;
                let rep = ivp::weighted_sum(&sys, &probs, scope)?;
                json!({
                    "sum": rational_string(&rep.sum),
                    "terms": rep.terms.iter().map(rational_string).collect::<Vec<_>>(),
                    "holds": rep.holds,
                })
            } else {
                let probs = p
                    .iter()
                    .map(|s| parse_probability(s))
                    .collect::<Result<Vec<f64>, _>>()?;
                to_value(&ivp::weighted_sum(&sys, &probs, scope)?)
            };
            let status = if results["holds"] == json!(true) {
                RunStatus::Verified
            } else {
                RunStatus::Violated
            };
            Ok(Produced::new(
                json!({ "in": io.input, "p": p, "exact": exact, "scope": to_value(&scope) }),
                results,
                status,
            ))
        }
        IvpCommand::Disjoint {
            io,
            p,
            trials,
            seed,
            scope,
        } => {
            let seed = seed_or_draw(seed, stderr);
            let sys = read_system(&io.input)?;
            let scope = AlphaScope::from(scope);
            let rep = ivp::empirical_disjointness(&sys, &p, trials, seed, scope)?;
            let status = if rep.disjoint {
                RunStatus::Verified
            } else {
                RunStatus::Violated
            };
            Ok(Produced::new(
                json!({ "in": io.input, "p": p, "trials": trials, "seed": seed, "scope": to_value(&scope) }),
                to_value(&rep),
                status,
            ))
        }
        IvpCommand::Audit { samples, n, seed } => {
            let seed = seed_or_draw(seed, stderr);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut worst: Option<(Rational, usize)> = None;
            let mut failures = 0usize;
            for _ in 0..samples {
                let sys = ivp::random_system(2, 3, SystemKind::Strong, n, 40, &mut rng);
                let rep = ivp::lym_strong(&sys)?;
                if !rep.holds {
                    failures += 1;
                }
                if rep.bound > 0 {
                    let ratio = qsum_core::scalar::parse_rational(&rep.sum).expect("report sums are fractions")
                        / Rational::from_integer(rep.bound.into());
                    if worst.as_ref().is_none_or(|(w, _)| ratio > *w) {
                        worst = Some((ratio, rep.bound));
                    }
                }
            }
            let status = if failures == 0 {
                RunStatus::Verified
            } else {
                RunStatus::Violated
            };
            Ok(Produced::new(
                json!({ "samples": samples, "n": n, "seed": seed }),
                json!({
                    "failures": failures,
                    "max_ratio": worst.map(|(w, _)| rational_string(&w)),
                }),
                status,
            ))
        }
        IvpCommand::Max {
            q,
            k,
            kind,
            n_cap,
            engine,
        } => {
            let budget = Budget {
                max_nodes: engine.budget_nodes,
                max_secs: engine.budget_secs,
            };
            let rep = ivp::max_system(q, k, kind.into(), n_cap, budget, engine.threads)?;
            let exceeded = rep.status == SearchStatus::BudgetExceeded;
            let stats = to_value(&rep.stats);
            let mut results = to_value(&rep);
            if let Some(obj) = results.as_object_mut() {
                obj.remove("stats");
                for key in ["f_k", "k_f_k"] {
                    if let Some(v) = obj.get_mut(key) {
                        *v = json!(v.to_string());
                    }
                }
            }
            Ok(Produced::new(
                json!({ "q": q, "k": k, "kind": SystemKind::from(kind).to_string(), "n_cap": n_cap }),
                results,
                RunStatus::Verified,
            )
            .budget(exceeded)
            .stats(stats))
        }
        IvpCommand::Trend { q, k_min, k_max } => {
            if k_min == 0 || k_min > k_max {
                return Err(Error::Parameter(format!(
                    "need 1 <= k-min <= k-max, got {k_min}..{k_max}"
                )));
            }
            let rep = ivp::limit_trend(q, k_min..=k_max)?;
            let rows: Vec<Value> = rep
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "k": r.k,
                        "alphas": r.alphas,
                        "count": r.count.to_string(),
                        "root": r.root,
                        "relative_gap": r.relative_gap,
                    })
                })
                .collect();
            Ok(Produced::new(
                json!({ "q": q, "k_min": k_min, "k_max": k_max }),
                json!({ "target": rep.target, "monotone": rep.monotone, "rows": rows }),
                RunStatus::Verified,
            ))
        }
    }
}

fn parse_probability(s: &str) -> Result<f64, Error> {
    if let Some(r) = parse_rational(s) {
        return Ok(r.to_f64());
    }
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parameter(format!("not a probability: {s}")))
}
