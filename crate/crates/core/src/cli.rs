//! Command-line front end: argument parsing, seeding, dispatch to the
//! library and JSON/CSV serialization. Exit codes: 0 when every check
//! passes, 1 on a failed check, 2 on a usage or configuration error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::amplify::{self, FiniteGroup, GroupSpec};
use crate::bounds::{self, Factorization3};
use crate::bridge::{self, Interval, IntervalSetup, SmoothWindow};
use crate::counting::{self, CountInstance};
use crate::error::Error;
use crate::experiments::{self, AvgModulusCase, NormCase};
use crate::kloosterman;
use crate::rep::{self, PermRep};
use crate::selftest;
use crate::sl2;
use crate::verdict::Verdict;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "klab", version, about = "Kloosterman sums, SL2(Z/cZ) representations and bilinear-form bounds")]
struct Cli {
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SeedArg {
    /// Seed for every random choice.
    #[arg(long, env = "KLAB_SEED", default_value_t = 42)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// S(m, n; c) with every identity and bound.
    Kloosterman {
        #[arg(long)]
        c: u64,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: i64,
    },
    /// The permutation representation on P^1(Z/cZ).
    Rep {
        #[arg(long)]
        c: u64,
        /// Split into irreducible invariant subspaces.
        #[arg(long)]
        decompose: bool,
        /// Decompose the sifted part only.
        #[arg(long)]
        sifted: bool,
        /// Check the level projections against their group averages.
        #[arg(long)]
        check_projections: bool,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Verification suites that need a target.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
    /// Count solutions of the word equation in a box.
    Count {
        #[arg(long)]
        c: u64,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        h1: u64,
        #[arg(long)]
        h2: u64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        a1: i64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        a2: i64,
        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,
        /// Include wall-clock timings (makes the output nondeterministic).
        #[arg(long)]
        timings: bool,
    },
    /// Amplification inequality for SL_2(Z/cZ) and Gamma_c(d), or Z/cZ and dZ/cZ.
    Amplify {
        #[arg(long)]
        c: u64,
        #[arg(long)]
        d: u64,
        /// Even moment (default: 2, 4 and 6).
        #[arg(long)]
        q: Option<usize>,
        /// Use the cyclic group Z/cZ.
        #[arg(long)]
        cyclic: bool,
        /// Number of seeded test functions.
        #[arg(long, default_value_t = 10)]
        functions: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Evaluate the bound profiles for (c, M, N).
    Bound {
        #[arg(long)]
        c: u64,
        #[arg(long = "M")]
        m: u64,
        #[arg(long = "N")]
        n: u64,
        #[arg(long, requires_all = ["dp", "e"], conflicts_with = "delta")]
        d: Option<u64>,
        #[arg(long)]
        dp: Option<u64>,
        #[arg(long)]
        e: Option<u64>,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Run an experiment from a JSON config and write CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full verification suite.
    Selftest {
        /// Run a single suite.
        #[arg(long)]
        suite: Option<u8>,
        #[command(flatten)]
        seed: SeedArg,
    },
}

#[derive(Debug, Subcommand)]
enum VerifyTarget {
    /// Kloosterman matrix against Fourier coefficients of rho_c.
    Bridge {
        #[arg(long)]
        c: u64,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        /// Interval variant: M,N,a,eps.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        intervals: Option<Vec<f64>>,
        /// Use the narrow window instead of the standard one.
        #[arg(long)]
        narrow: bool,
        #[command(flatten)]
        seed: SeedArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Brute,
    Mitm,
    Congruence,
    All,
}

/// Config accepted by `klab sweep`.
#[derive(Debug, Deserialize)]
#[serde(tag = "experiment", rename_all = "snake_case", deny_unknown_fields)]
pub enum SweepConfig {
    Norm {
        cases: Vec<NormCase>,
        #[serde(default)]
        seed: u64,
        #[serde(default = "default_delta")]
        delta: f64,
    },
    AvgModulus {
        cases: Vec<AvgModulusCase>,
        #[serde(default)]
        seed: u64,
    },
}

fn default_delta() -> f64 {
    experiments::DEFAULT_DELTA
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Convergence { .. } | Error::NonFinite(_) | Error::Internal(_) => Failure::Runtime(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// Output of a command and whether its checks passed.
struct Outcome {
    body: String,
    passed: bool,
}

fn json_outcome(value: &impl Serialize, passed: bool) -> Result<Outcome, Failure> {
    let body = serde_json::to_string_pretty(value).map_err(|e| Failure::Runtime(e.to_string()))?;
    Ok(Outcome { body: body + "\n", passed })
}

fn all_passed(verdicts: &[Verdict]) -> bool {
    verdicts.iter().all(|v| v.passed)
}

/// Parse `args` (including the program name), run, print to stdout and
/// return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    }
    match dispatch(cli.command) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(outcome.body.as_bytes()).and_then(|_| out.flush()).is_err() {
                return EXIT_FAIL;
            }
            if outcome.passed {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            EXIT_FAIL
        }
    }
}

fn dispatch(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Kloosterman { c, m, n } => {
            let report = kloosterman::full_report(m, n, c)?;
            let passed = report.passed();
            json_outcome(&report, passed)
        }
        Command::Rep { c, decompose, sifted, check_projections, seed } => {
            rep_command(c, decompose, sifted, check_projections, seed.seed)
        }
        Command::Verify { target: VerifyTarget::Bridge { c, trials, intervals, narrow, seed } } => {
            bridge_command(c, trials, intervals, narrow, seed.seed)
        }
        Command::Count { c, q, h1, h2, a1, a2, method, timings } => {
            count_command(CountInstance::new(c, q, a1, a2, h1, h2)?, method, timings)
        }
        Command::Amplify { c, d, q, cyclic, functions, seed } => amplify_command(c, d, q, cyclic, functions, seed.seed),
        Command::Bound { c, m, n, d, dp, e, delta } => bound_command(c, m, n, d.zip(dp).zip(e), delta),
        Command::Sweep { config, out } => sweep_command(&config, out.as_deref()),
        Command::Selftest { suite, seed } => {
            let report = match suite {
                Some(id) => {
                    let s = selftest::run_suite(id, seed.seed)?;
                    selftest::SelftestReport { seed: seed.seed, passed: s.passed, suites: vec![s] }
                }
                None => selftest::run(seed.seed)?,
            };
            let passed = report.passed;
            json_outcome(&report, passed)
        }
    }
}

fn rep_command(c: u64, decompose: bool, sifted: bool, check_projections: bool, seed: u64) -> Result<Outcome, Failure> {
    let rep = PermRep::new(c)?;
    let classes = sl2::conjugacy_classes(c)?;
    let values = classes
        .iter()
        .map(|cl| Ok((crate::C64::new(rep.char_value(&cl.representative)? as f64, 0.0), cl.size)))
        .collect::<Result<Vec<_>, Error>>()?;
    let order = sl2::group_order(rep.modulus()) as u64;
    let mut verdicts = vec![rep::multiplicity_identity_check(&values, order)?];
    let mut body = json!({
        "c": c,
        "dim": rep.dim(),
        "sifted_dim": rep::sifted_dimension(rep.modulus())?,
        "classes": classes.len(),
    });
    if decompose || sifted {
        let decomposition = rep.decompose(sifted, seed)?;
        body["decomposition"] =
            serde_json::to_value(&decomposition.report).map_err(|e| Failure::Runtime(e.to_string()))?;
    }
    if check_projections {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        verdicts.extend(selftest::projection_checks(&rep, 100, &mut rng)?);
    }
    let passed = all_passed(&verdicts);
    body["verdicts"] = serde_json::to_value(&verdicts).map_err(|e| Failure::Runtime(e.to_string()))?;
    body["passed"] = Value::Bool(passed);
    json_outcome(&body, passed)
}

fn bridge_command(
    c: u64,
    trials: usize,
    intervals: Option<Vec<f64>>,
    narrow: bool,
    seed: u64,
) -> Result<Outcome, Failure> {
    let window = if narrow { SmoothWindow::narrow() } else { SmoothWindow::standard() };
    if let Some(iv) = intervals {
        let [m, n, a, eps] = iv[..] else {
            return Err(Failure::Usage("--intervals takes M,N,a,eps".into()));
        };
        if m.fract() != 0.0 || n.fract() != 0.0 || a.fract() != 0.0 || m < 1.0 || n < 1.0 {
            return Err(Failure::Usage("M, N and a must be integers with M, N >= 1".into()));
        }
        let setup = IntervalSetup { c, a: a as i64, i: Interval::new(0, m as u64), j: Interval::new(0, n as u64), eps };
        let report = bridge::verify_bridge_intervals(&setup, &window)?;
        let passed = report.passed();
        return json_outcome(&report, passed);
    }
    let rep = PermRep::new(c)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::new();
    let mut passed = true;
    for _ in 0..trials {
        let psi1 = bridge::random_psi(c, &mut rng);
        let psi2 = bridge::random_psi(c, &mut rng);
        let identity = bridge::verify_identity_kl_unitary(c, &psi1, &psi2)?;
        let report = bridge::verify_bridge_with(&rep, &psi1, &psi2)?;
        passed &= identity.passed && report.passed();
        reports.push(json!({ "identity": identity, "bridge": report }));
    }
    json_outcome(&json!({ "c": c, "seed": seed, "trials": reports, "passed": passed }), passed)
}

fn count_command(inst: CountInstance, method: Method, timings: bool) -> Result<Outcome, Failure> {
    type Counter = fn(&CountInstance) -> crate::Result<u64>;
    let mut routes: Vec<(&str, Counter)> = Vec::new();
    if matches!(method, Method::Brute | Method::All) {
        routes.push(("brute", counting::count_brute));
    }
    if matches!(method, Method::Mitm | Method::All) {
        routes.push(("mitm", counting::count_mitm));
    }
    if method == Method::Congruence || (method == Method::All && inst.q == 6) {
        routes.push(("congruence", counting::count_congruence_q6));
    }
    let mut counts = serde_json::Map::new();
    let mut times = serde_json::Map::new();
    let mut values = Vec::new();
    for (name, f) in routes {
        let start = Instant::now();
        let n = f(&inst)?;
        times.insert(name.into(), json!(start.elapsed().as_secs_f64() * 1e3));
        counts.insert(name.into(), json!(n));
        values.push(n);
    }
    let agree = values.windows(2).all(|w| w[0] == w[1]);
    let bounds = counting::check_counting_bounds(&inst, values[0])?;
    let passed = agree && bounds.verdict.as_ref().is_none_or(|v| v.passed);
    let mut body = json!({
        "instance": inst,
        "counts": counts,
        "agree": agree,
        "bounds": bounds,
        "passed": passed,
    });
    if timings {
        body["timings_ms"] = Value::Object(times);
    }
    json_outcome(&body, passed)
}

fn amplify_command(
    c: u64,
    d: u64,
    q: Option<usize>,
    cyclic: bool,
    functions: usize,
    seed: u64,
) -> Result<Outcome, Failure> {
    if d == 0 || !c.is_multiple_of(d) {
        return Err(Error::NotDivisor { d, c }.into());
    }
    let spec = if cyclic { GroupSpec::Cyclic(c) } else { GroupSpec::Sl2(c) };
    let group = FiniteGroup::new(spec)?;
    let label = if cyclic { format!("{d}Z/{c}Z") } else { format!("Gamma_{c}({d})") };
    let subgroup = group
        .normal_subgroups()?
        .into_iter()
        .find(|s| s.label == label)
        .ok_or_else(|| Failure::Runtime(format!("subgroup {label} not found")))?;
    let blocks = amplify::regular_irreducibles(&group, seed)?;
    let table = amplify::character_table(&blocks);
    let orthogonality = amplify::character_orthogonality(&group, &table, 1e-5);
    let fs = amplify::seeded_functions(&group, functions, seed);
    let moments = match q {
        Some(q) => vec![q],
        None => vec![2, 4, 6],
    };
    let mut checks = Vec::new();
    for block in &blocks {
        for f in &fs {
            for &q in &moments {
                checks.push(amplify::verify_amplification(&group, block, &subgroup, f, q)?);
            }
        }
    }
    let equality =
        blocks.iter().map(|b| amplify::amplification_equality(&group, b)).collect::<crate::Result<Vec<_>>>()?;
    let passed = all_passed(&orthogonality) && all_passed(&equality) && checks.iter().all(|c| c.verdict.passed);
    let body = json!({
        "group": spec,
        "order": group.order(),
        "subgroup": label,
        "subgroup_order": subgroup.elements.len(),
        "blocks": blocks.len(),
        "characters": table.len(),
        "orthogonality": orthogonality,
        "equality": equality,
        "checks": checks,
        "passed": passed,
    });
    json_outcome(&body, passed)
}

fn bound_command(
    c: u64,
    m: u64,
    n: u64,
    explicit: Option<((u64, u64), u64)>,
    delta: Option<f64>,
) -> Result<Outcome, Failure> {
    let delta = delta.unwrap_or(experiments::DEFAULT_DELTA);
    let trivial = bounds::eval_bound_trivial(c, m, n)?;
    let (fact, greedy) = match explicit {
        Some(((d, dp), e)) => (Some(Factorization3::new(c, d, dp, e)?), None),
        None => {
            let g = bounds::greedy_factorization(c, delta)?;
            (g.factorization, Some(g))
        }
    };
    let composite = fact.map(|f| bounds::eval_bound_composite(&f, m, n)).transpose()?;
    let general = bounds::eval_bound_general(c, m, n, delta)?;
    let mut verdicts = vec![trivial.check_invariants()];
    verdicts.extend(general.iter().map(|g| g.check_invariants()));
    if let Some(cb) = &composite {
        verdicts.push(cb.agreement.clone());
        verdicts.push(cb.c_form.check_invariants());
    }
    let passed = all_passed(&verdicts);
    let saving = composite.as_ref().map(|cb| cb.c_form.saving_over(trivial.value));
    let max_term_saving =
        composite.as_ref().map(|cb| (trivial.value / cb.c_form.max_term_value).ln() / (c as f64).ln());
    let body = json!({
        "c": c,
        "M": m,
        "N": n,
        "trivial": trivial,
        "greedy": greedy,
        "composite": composite,
        "composite_saving": saving,
        "composite_max_term_saving": max_term_saving,
        "general": general,
        "verdicts": verdicts,
        "passed": passed,
    });
    json_outcome(&body, passed)
}

fn sweep_command(config: &std::path::Path, out: Option<&std::path::Path>) -> Result<Outcome, Failure> {
    let text = std::fs::read_to_string(config).map_err(|e| Failure::Usage(format!("{}: {e}", config.display())))?;
    let config: SweepConfig =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", config.display())))?;
    let (csv, passed) = match config {
        SweepConfig::Norm { cases, delta, .. } => {
            let sweep = experiments::experiment_norm_sweep(&cases, delta)?;
            for v in sweep.verdicts.iter().filter(|v| !v.passed) {
                eprintln!("failed {}: {} > {}", v.name, v.lhs, v.rhs);
            }
            for v in experiments::saving_trend(&sweep.rows).iter().filter(|v| !v.passed) {
                eprintln!("note: {} ({} > {})", v.name, v.lhs, v.rhs);
            }
            (sweep.to_csv()?, sweep.passed())
        }
        SweepConfig::AvgModulus { cases, seed } => {
            let reports = cases
                .iter()
                .map(|case| experiments::experiment_avg_modulus(case, seed, 1.0))
                .collect::<crate::Result<Vec<_>>>()?;
            (experiments::avg_modulus_csv(&reports)?, reports.iter().all(|r| r.passed))
        }
    };
    match out {
        Some(path) => {
            std::fs::write(path, csv).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            Ok(Outcome { body: String::new(), passed })
        }
        None => Ok(Outcome { body: csv, passed }),
    }
}
