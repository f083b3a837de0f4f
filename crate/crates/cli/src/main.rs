//! `gsd`: generate states, decide local determinability, build reduction
//! families and simulate the no-communication consensus protocol.
//!
//! Exit codes: 0 determined / success, 10 undetermined (or differing
//! reductions), 2 refusal (the input is determined where an undetermined
//! state is required), 1 any other error including usage errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gsd_core::consensus::{
    build_consensus_measurements, necessity_probe, run_trials, MeasurementPlan, SimConfig,
};
use gsd_core::family::{verify_same_reductions, ReductionFamily};
use gsd_core::io;
use gsd_core::schmidt::{analyze, s_local_analyze, AnalysisOptions, AnalysisReport};
use gsd_core::tensor::StateVector;
use gsd_core::{states, Tolerances};

const EXIT_UNDETERMINED: u8 = 10;
const EXIT_REFUSAL: u8 = 2;
const EXIT_ERROR: u8 = 1;

#[derive(Parser)]
#[command(name = "gsd", version, about = "Local determinability of multipartite pure states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a standard state as JSON.
    Gen(GenArgs),
    /// Decide whether a state is determined by its (n-1)-party marginals.
    Analyze(AnalyzeArgs),
    /// Emit members of the reduction family of an undetermined state.
    Family(FamilyArgs),
    /// Compare all (n-1)-party marginals of two states.
    VerifyReductions(VerifyArgs),
    /// Sample the one-shot consensus protocol.
    Simulate(SimulateArgs),
    /// Search random two-outcome plans for the least disagreement.
    Probe(ProbeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Ghz,
    W,
    CompletelyGsd,
    Haar,
    Product,
}

#[derive(Args)]
struct GenArgs {
    kind: Kind,
    /// Number of parties (ghz, w, or with --d for haar/product).
    #[arg(long)]
    n: Option<usize>,
    /// Local dimension.
    #[arg(long)]
    d: Option<usize>,
    /// Local dimensions, e.g. 3,3,3.
    #[arg(long)]
    dims: Option<String>,
    /// Schmidt weights for completely-gsd, e.g. 0.5,0.3,0.2.
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalysisFlags {
    /// Relative rank cutoff for singular values and supports.
    #[arg(long)]
    tol: Option<f64>,
    /// Pivot party (1-based).
    #[arg(long)]
    pivot: Option<usize>,
    /// Seed for the randomized degenerate-spectrum search.
    #[arg(long)]
    analysis_seed: Option<u64>,
}

#[derive(Args)]
struct AnalyzeArgs {
    path: PathBuf,
    #[command(flatten)]
    flags: AnalysisFlags,
    /// Only the marginals tracing out these parties, e.g. 2,3.
    #[arg(long)]
    subset: Option<String>,
    /// Report path; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FamilyArgs {
    path: PathBuf,
    /// One phase per certificate row, e.g. 0,3.14159265.
    #[arg(long, conflicts_with = "sample", required_unless_present = "sample")]
    phases: Option<String>,
    /// Number of random members.
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for member-<k>.json files.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[command(flatten)]
    flags: AnalysisFlags,
}

#[derive(Args)]
struct VerifyArgs {
    a: PathBuf,
    b: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    path: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fail-stop agents (1-based), e.g. 1,3.
    #[arg(long)]
    fail: Option<String>,
    /// Channel drop probability; the protocol sends no messages.
    #[arg(long, default_value_t = 0.0)]
    drop: f64,
    /// Explicit measurement plan instead of the certificate plan.
    #[arg(long, conflicts_with = "computational_plan")]
    plan: Option<PathBuf>,
    /// Every agent measures in its computational basis.
    #[arg(long)]
    computational_plan: bool,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[command(flatten)]
    flags: AnalysisFlags,
}

#[derive(Args)]
struct ProbeArgs {
    path: PathBuf,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// A determined state where an undetermined one is needed.
#[derive(Debug)]
struct Refusal(String);

impl std::fmt::Display for Refusal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Refusal {}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_ERROR) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Refusal>().is_some() {
                ExitCode::from(EXIT_REFUSAL)
            } else {
                ExitCode::from(EXIT_ERROR)
            }
        }
    }
}

fn run(command: Command) -> anyhow::Result<u8> {
    match command {
        Command::Gen(a) => gen(a),
        Command::Analyze(a) => analyze_cmd(a),
        Command::Family(a) => family(a),
        Command::VerifyReductions(a) => verify(a),
        Command::Simulate(a) => simulate(a),
        Command::Probe(a) => probe(a),
    }
}

fn load(path: &Path) -> anyhow::Result<StateVector> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let loaded = io::parse_state_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(loaded.state)
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => print(text),
    }
}

// errors (e.g. a closed pipe) instead of panicking like `println!`
fn print(text: &str) -> anyhow::Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    writeln!(out, "{}", text.trim_end())?;
    out.flush()?;
    Ok(())
}

fn options(flags: &AnalysisFlags, n: usize) -> anyhow::Result<AnalysisOptions> {
    let mut opts = AnalysisOptions::default();
    if let Some(t) = flags.tol {
        if !(t > 0.0 && t < 1.0) {
            bail!("--tol must lie in (0, 1)");
        }
        opts.tolerances = Tolerances { rank: t, ..Tolerances::default() };
    }
    if let Some(p) = flags.pivot {
        if p == 0 || p > n {
            bail!("--pivot must lie in 1..={n}");
        }
        opts.pivot = Some(p - 1);
    }
    if let Some(s) = flags.analysis_seed {
        opts.seed = s;
    }
    Ok(opts)
}

fn dims_from(n: Option<usize>, d: Option<usize>, dims: Option<&str>) -> anyhow::Result<Vec<usize>> {
    match (dims, n) {
        (Some(s), None) => Ok(io::parse_dims_list(s)?),
        (None, Some(n)) => Ok(vec![d.unwrap_or(2); n]),
        (Some(_), Some(_)) => bail!("give either --dims or --n, not both"),
        (None, None) => bail!("missing --dims or --n"),
    }
}

fn gen(a: GenArgs) -> anyhow::Result<u8> {
    let state = match a.kind {
        Kind::Ghz => states::ghz(a.n.ok_or_else(|| anyhow!("ghz needs --n"))?, a.d.unwrap_or(2))?,
        Kind::W => {
            if a.d.is_some_and(|d| d != 2) {
                bail!("w states are defined on qubits");
            }
            states::w(a.n.ok_or_else(|| anyhow!("w needs --n"))?)?
        }
        Kind::CompletelyGsd => {
            let dims = dims_from(a.n, a.d, a.dims.as_deref())?;
            let lambda = io::parse_real_list(a.lambda.as_deref().ok_or_else(|| anyhow!("completely-gsd needs --lambda"))?)?;
            states::completely_gsd(dims, &lambda)?
        }
        Kind::Haar => {
            let dims = dims_from(a.n, a.d, a.dims.as_deref())?;
            states::haar(dims, &mut ChaCha8Rng::seed_from_u64(a.seed))?
        }
        Kind::Product => states::product(dims_from(a.n, a.d, a.dims.as_deref())?)?,
    };
    emit(a.out.as_deref(), &io::state_to_json(&state))?;
    Ok(0)
}

fn summary(r: &AnalysisReport) -> String {
    let parties = |v: &[usize]| v.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",");
    let mut s = format!(
        "{}: Schmidt number {}{} (path {}, pivot {}, parties {})",
        r.verdict.as_str(),
        r.schmidt_number,
        if r.lower_bound { " (lower bound)" } else { "" },
        r.path.as_str(),
        r.pivot + 1,
        parties(&r.scope),
    );
    for d in &r.diagnostics {
        s.push_str("\n  ");
        s.push_str(d);
    }
    s
}

fn analyze_cmd(a: AnalyzeArgs) -> anyhow::Result<u8> {
    let state = load(&a.path)?;
    let opts = options(&a.flags, state.num_parties())?;
    let report = match &a.subset {
        Some(s) => s_local_analyze(&state, &io::parse_party_list(s)?, &opts)?,
        None => analyze(&state, &opts)?,
    };
    eprintln!("{}", summary(&report));
    emit(a.out.as_deref(), &io::report_to_json(&report)?)?;
    Ok(if report.is_undetermined() { EXIT_UNDETERMINED } else { 0 })
}

fn undetermined_family(state: StateVector, opts: &AnalysisOptions) -> anyhow::Result<ReductionFamily> {
    match ReductionFamily::from_state(state, opts) {
        Err(gsd_core::Error::Determined) => {
            Err(Refusal("state is determined by its marginals; it has no reduction family".into()).into())
        }
        other => Ok(other?),
    }
}

fn family(a: FamilyArgs) -> anyhow::Result<u8> {
    let state = load(&a.path)?;
    let opts = options(&a.flags, state.num_parties())?;
    let phases = a.phases.as_deref().map(io::parse_real_list).transpose()?;
    if a.sample == Some(0) {
        bail!("--sample must be at least 1");
    }
    let fam = undetermined_family(state, &opts)?;
    let members: Vec<StateVector> = match (&phases, a.sample) {
        (Some(theta), _) => vec![fam.member(theta)?],
        (None, Some(k)) => (0..k as u64).map(|i| fam.sample_member(a.seed.wrapping_add(i))).collect(),
        (None, None) => unreachable!("clap requires one of --phases / --sample"),
    };
    fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    let mut entries = Vec::new();
    let mut all_ok = true;
    for (k, m) in members.iter().enumerate() {
        let path = a.out_dir.join(format!("member-{}.json", k + 1));
        fs::write(&path, io::state_to_json(m)).with_context(|| format!("writing {}", path.display()))?;
        let check = verify_same_reductions(fam.base(), m)?;
        all_ok &= check.same;
        eprintln!(
            "{}: same reductions {} (max residual {:.3e})",
            path.display(),
            check.same,
            check.max_residual()
        );
        let check_json: serde_json::Value = serde_json::from_str(&io::reduction_check_to_json(&check)?)?;
        entries.push(serde_json::json!({ "path": path.display().to_string(), "verification": check_json }));
    }
    let out = serde_json::json!({ "rows": fam.len(), "special_case": fam.is_special(), "members": entries });
    print(&serde_json::to_string_pretty(&out)?)?;
    if !all_ok {
        bail!("a family member failed verification");
    }
    Ok(0)
}

fn verify(a: VerifyArgs) -> anyhow::Result<u8> {
    let (x, y) = (load(&a.a)?, load(&a.b)?);
    let check = verify_same_reductions(&x, &y)?;
    eprintln!("same reductions: {} (max residual {:.3e})", check.same, check.max_residual());
    print(&io::reduction_check_to_json(&check)?)?;
    Ok(if check.same { 0 } else { EXIT_UNDETERMINED })
}

fn simulate(a: SimulateArgs) -> anyhow::Result<u8> {
    let state = load(&a.path)?;
    let opts = options(&a.flags, state.num_parties())?;
    let failed = a.fail.as_deref().map(io::parse_party_list).transpose()?.unwrap_or_default();
    let config = SimConfig {
        trials: a.trials,
        seed: a.seed,
        failed_agents: failed,
        channel_drop_probability: a.drop,
        workers: a.workers,
    };
    let (plan, certified) = if let Some(p) = &a.plan {
        let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        (io::parse_plan_json(&text).with_context(|| format!("parsing {}", p.display()))?, false)
    } else if a.computational_plan {
        (MeasurementPlan::computational(state.dims()), false)
    } else {
        let report = analyze(&state, &opts)?;
        let Some(cert) = report.certificate else {
            return Err(Refusal("state is determined; pass --plan or --computational-plan".into()).into());
        };
        (build_consensus_measurements(&state, &cert)?, true)
    };
    let stats = run_trials(&state, &plan, &config)?;
    eprintln!(
        "agreement {:.6} over agents {:?} ({} trials; exact agreement probability {:.6})",
        stats.agreement_frequency,
        stats.reporting_agents.iter().map(|i| i + 1).collect::<Vec<_>>(),
        stats.trials,
        stats.exact_agreement_probability
    );
    print(&io::trial_stats_to_json(&stats)?)?;
    if certified && stats.agreement_frequency != 1.0 {
        bail!("certificate plan failed to reach agreement");
    }
    Ok(0)
}

fn probe(a: ProbeArgs) -> anyhow::Result<u8> {
    let state = load(&a.path)?;
    let report = necessity_probe(&state, a.samples, a.seed)?;
    if !report.excluded_agents.is_empty() {
        eprintln!(
            "agents {:?} have rank-one marginals and cannot have two nonnull outcomes",
            report.excluded_agents.iter().map(|i| i + 1).collect::<Vec<_>>()
        );
    }
    if let Some(m) = report.min_disagreement {
        eprintln!("minimum disagreement over {} random plans: {m:.6}", report.samples);
    }
    if let Some(c) = report.certificate_disagreement {
        eprintln!("certificate plan disagreement: {c}");
    }
    print(&io::probe_report_to_json(&report)?)?;
    Ok(0)
}
