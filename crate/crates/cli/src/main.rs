//! `deloc`: command-line front end for the delocalised-interaction games.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use deloc::circuits::{self, NoiseModel};
use deloc::games::{self, GameKind, GameSpec, Tactic};
use deloc::inequalities::{self, ConditionedVariant, SAState};
use deloc::io;
use deloc::optimizer::{self, OptimizerConfig, SweepKind};
use deloc::qcore::{self, c, DensityMatrix};
use deloc::tactics::{self, TacticRecipe};
use deloc::{measures, Error};

#[derive(Parser)]
#[command(name = "deloc", version, about = "Delocalised-interaction games on two-qubit resources")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Entanglement measures and bounds of a state.
    Measure(MeasureArgs),
    /// Win probability of a tactic on a resource.
    Play(PlayArgs),
    /// Build a named analytic tactic for a state.
    Tactic(TacticArgs),
    /// Numerically optimize local unitaries.
    Optimize(OptimizeArgs),
    /// Optimized win probability along a state family.
    Sweep(SweepArgs),
    /// Inequality and conditioned-game checks.
    Check(CheckArgs),
    /// Noisy four-qubit circuit simulation of the games.
    Demo(DemoArgs),
}

#[derive(Args)]
struct GameArgs {
    /// `pnp` or `bd`.
    #[arg(long, default_value = "pnp")]
    game: String,
    /// Prior of the particle question (PNP only).
    #[arg(long)]
    pp: Option<f64>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    #[arg(long, default_value_t = 2000)]
    max_iterations: usize,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    #[arg(long, env = "DELOC_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct MeasureArgs {
    /// State file (JSON) or mini-syntax such as `werner:a=0.6`.
    #[arg(long)]
    state: String,
    /// Also compute G by numerical search (pure states only).
    #[arg(long)]
    g: bool,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct PlayArgs {
    #[command(flatten)]
    game: GameArgs,
    #[arg(long)]
    state: String,
    /// Tactic file (JSON), `identity`, `flip`, or a recipe name.
    #[arg(long)]
    tactic: String,
}

#[derive(Args)]
struct TacticArgs {
    /// Recipe: orthogonal_schmidt_flip, werner_flip, two_bell_mixture, fef, identity.
    #[arg(long)]
    name: String,
    #[arg(long)]
    state: String,
    #[command(flatten)]
    game: GameArgs,
    /// Write the tactic as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OptimizeArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Resource state; omit together with `--separable`.
    #[arg(long)]
    state: Option<String>,
    /// Optimize over product resources instead of a fixed state.
    #[arg(long, conflicts_with = "state")]
    separable: bool,
    /// Give each party a qubit ancilla (local unitaries on 4 dimensions).
    #[arg(long)]
    ancilla: bool,
    #[command(flatten)]
    search: SearchArgs,
    /// Write the best tactic as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Family to sweep; only `werner`.
    family: String,
    #[arg(long)]
    ancilla: bool,
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct CheckArgs {
    #[command(subcommand)]
    kind: CheckKind,
}

#[derive(Subcommand)]
enum CheckKind {
    /// Trace distance against the Kolmogorov distance of sorted spectra.
    Lemma1 {
        #[arg(long)]
        state: String,
        #[arg(long)]
        sigma: String,
    },
    /// Trace-distance inequality for a tactic on a state.
    Tdineq {
        #[arg(long)]
        state: String,
        #[arg(long)]
        tactic: String,
    },
    /// Smallest Werner parameter violating the trace-distance inequality.
    WernerScan {
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        /// Evaluate every grid point instead of stopping at the first violation.
        #[arg(long)]
        full: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Optimum of the second conditioned PNP game on a maximally correlated state.
    Sa {
        #[arg(long)]
        rho00: f64,
        #[arg(long)]
        rho01: f64,
        #[arg(long, default_value_t = 0.0)]
        rho01_im: f64,
    },
    /// Objective and constraint of a conditioned game variant.
    Conditioned {
        /// pnp1, pnp2, bd1 or bd2.
        #[arg(long)]
        variant: String,
        #[arg(long)]
        state: String,
        #[arg(long)]
        tactic: String,
    },
}

#[derive(Args)]
struct DemoArgs {
    #[command(flatten)]
    game: GameArgs,
    #[arg(long, default_value_t = 0.015)]
    p1: f64,
    #[arg(long, default_value_t = 0.03)]
    p2: f64,
    #[arg(long, default_value_t = 0.025)]
    pm: f64,
    #[arg(long, default_value_t = 8192)]
    shots: u64,
    /// Score exact outcome probabilities instead of sampled shots.
    #[arg(long)]
    exact: bool,
    #[arg(long, env = "DELOC_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Error tagged with the flag it came from.
struct Failure {
    flag: Option<&'static str>,
    error: Error,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { flag: None, error }
    }
}

trait FlagContext<T> {
    fn flag(self, flag: &'static str) -> Result<T, Failure>;
}

impl<T> FlagContext<T> for deloc::Result<T> {
    fn flag(self, flag: &'static str) -> Result<T, Failure> {
        self.map_err(|error| Failure { flag: Some(flag), error })
    }
}

type Outcome = Result<Value, Failure>;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) => 3,
        Error::Inconsistency(_) => 1,
        _ => 2,
    }
}

fn game_spec(args: &GameArgs) -> Result<GameSpec, Failure> {
    let kind: GameKind = args.game.parse().flag("--game")?;
    match (kind, args.pp) {
        (GameKind::Pnp, Some(p)) => GameSpec::pnp(p).flag("--pp"),
        (GameKind::Pnp, None) => GameSpec::pnp(0.5).flag("--pp"),
        (GameKind::Bd, None) => Ok(GameSpec::bd()),
        (GameKind::Bd, Some(_)) => {
            Err(Error::validation("pp", "only the PNP game takes a particle prior")).flag("--pp")
        }
    }
}

fn search_config(args: &SearchArgs, dimension: usize) -> Result<OptimizerConfig, Failure> {
    let cfg = OptimizerConfig {
        restarts: args.restarts,
        max_iterations: args.max_iterations,
        tolerance: args.tolerance,
        seed: args.seed,
        dimension,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn resolve_tactic(arg: &str, rho: &DensityMatrix) -> deloc::Result<Tactic> {
    let path = Path::new(arg);
    if path.is_file() {
        return io::parse_tactic(&io::read_to_string(path)?);
    }
    if arg.ends_with(".json") {
        return Err(Error::Io(format!("{arg}: no such file")));
    }
    match arg {
        "flip" => Ok(Tactic::flip(1.0)),
        "identity" => Tactic::identity(2),
        name => tactics::build(name.parse::<TacticRecipe>()?, rho),
    }
}

fn create(path: &Path) -> deloc::Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> deloc::Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn game_json(g: &GameSpec) -> Value {
    json!({ "kind": g.kind(), "priors": g.priors() })
}

fn search_json(cfg: &OptimizerConfig) -> Value {
    serde_json::to_value(cfg).expect("config serializes")
}

fn tactic_json(t: &Tactic) -> Value {
    serde_json::from_str(&io::tactic_to_json(t)).expect("tactic serializes")
}

fn measure(args: &MeasureArgs) -> Outcome {
    let rho = io::resolve_state(&args.state).flag("--state")?;
    let cfg = search_config(&args.search, 2)?;
    let report = measures::report(&rho, args.g.then_some(&cfg)).flag("--state")?;
    Ok(json!({
        "config": { "state": args.state, "g_search": args.g.then(|| search_json(&cfg)) },
        "result": report,
    }))
}

fn play(args: &PlayArgs) -> Outcome {
    let game = game_spec(&args.game)?;
    let rho = io::resolve_state(&args.state).flag("--state")?;
    let tactic = resolve_tactic(&args.tactic, &rho).flag("--tactic")?;
    let report = games::play(&rho, &tactic, &game).flag("--tactic")?;
    Ok(json!({
        "config": { "game": game_json(&game), "state": args.state, "tactic": args.tactic },
        "result": report,
    }))
}

fn tactic(args: &TacticArgs) -> Outcome {
    let recipe: TacticRecipe = args.name.parse().flag("--name")?;
    let game = game_spec(&args.game)?;
    let rho = io::resolve_state(&args.state).flag("--state")?;
    let t = tactics::build(recipe, &rho).flag("--name")?;
    let predicted = tactics::predicted(recipe, &rho, &game).flag("--name")?;
    let report = tactics::evaluate(recipe, &rho, &game).flag("--name")?;
    if let Some(path) = &args.out {
        write_text(path, &io::tactic_to_json(&t)).flag("--out")?;
    }
    Ok(json!({
        "config": { "game": game_json(&game), "state": args.state, "recipe": recipe.name() },
        "result": {
            "recipe": recipe.name(),
            "applicability": recipe.applicability(),
            "expected": recipe.expected_formula(),
            "tactic": tactic_json(&t),
            "predicted_win": predicted,
            "win_probability": report.win_probability,
            "report": report,
        },
    }))
}

fn optimize(args: &OptimizeArgs) -> Outcome {
    let game = game_spec(&args.game)?;
    let dimension = if args.ancilla { 4 } else { 2 };
    let cfg = search_config(&args.search, dimension)?;
    let (result, bounds) = match (&args.state, args.separable) {
        (_, true) => {
            if args.ancilla {
                return Err(Error::validation("ancilla", "not available with --separable")).flag("--ancilla");
            }
            (optimizer::optimize_separable(&game, &cfg)?, None)
        }
        (Some(s), false) => {
            let rho = io::resolve_state(s).flag("--state")?;
            let bounds = games::bounds_for(&rho, &game).flag("--state")?;
            (optimizer::optimize(&rho, &game, &cfg).flag("--state")?, Some(bounds))
        }
        (None, false) => {
            return Err(Error::validation("state", "give a resource or --separable")).flag("--state");
        }
    };
    if let Some(path) = &args.out {
        write_text(path, &io::tactic_to_json(&result.best_tactic)).flag("--out")?;
    }
    Ok(json!({
        "config": {
            "game": game_json(&game),
            "state": args.state,
            "separable": args.separable,
            "search": search_json(&cfg),
        },
        "result": {
            "best_value": result.best_value,
            "bounds": bounds,
            "classical_limit": games::classical_limit(&game),
            "evaluations": result.evaluations,
            "per_restart": result.per_restart,
            "best_params": result.best_params,
            "best_tactic": tactic_json(&result.best_tactic),
        },
    }))
}

fn sweep(args: &SweepArgs) -> Outcome {
    if args.family != "werner" {
        return Err(Error::validation("family", format!("unknown family `{}`", args.family))).flag("FAMILY");
    }
    let kind = if args.ancilla { SweepKind::WithAncilla } else { SweepKind::Bare };
    let cfg = search_config(&args.search, if args.ancilla { 4 } else { 2 })?;
    let rows = optimizer::werner_sweep(kind, args.step, &cfg).flag("--step")?;
    if let Some(path) = &args.out {
        optimizer::write_sweep_csv(&rows, create(path).flag("--out")?).flag("--out")?;
    }
    Ok(json!({
        "config": { "family": "werner", "kind": kind, "step": args.step, "search": search_json(&cfg), "out": args.out },
        "result": { "rows": rows.len(), "points": rows },
    }))
}

fn check(args: &CheckArgs) -> Outcome {
    match &args.kind {
        CheckKind::Lemma1 { state, sigma } => {
            let rho = io::resolve_state(state).flag("--state")?;
            let s = io::resolve_state(sigma).flag("--sigma")?;
            let report = inequalities::lemma1_check(&rho, &s).flag("--sigma")?;
            Ok(json!({ "config": { "check": "lemma1", "state": state, "sigma": sigma }, "result": report }))
        }
        CheckKind::Tdineq { state, tactic } => {
            let rho = io::resolve_state(state).flag("--state")?;
            let t = resolve_tactic(tactic, &rho).flag("--tactic")?;
            let report = inequalities::td_inequality(&rho, &t.u_a, &t.v_b).flag("--tactic")?;
            Ok(json!({ "config": { "check": "tdineq", "state": state, "tactic": tactic }, "result": report }))
        }
        CheckKind::WernerScan { step, full, out, search } => {
            let cfg = search_config(search, 2)?;
            let (points, threshold) = if *full {
                let points = inequalities::werner_gap_profile(*step, &cfg).flag("--step")?;
                let threshold = points.iter().find(|p| p.violated).map(|p| p.a);
                (points, threshold)
            } else {
                let scan = inequalities::werner_violation_scan(*step, &cfg).flag("--step")?;
                (scan.points, scan.threshold)
            };
            if let Some(path) = out {
                let mut w = csv::Writer::from_writer(create(path).flag("--out")?);
                let io_err = |e: csv::Error| Failure { flag: Some("--out"), error: Error::Io(e.to_string()) };
                w.write_record(["a", "max_gap", "violated"]).map_err(io_err)?;
                for p in &points {
                    w.write_record([p.a.to_string(), p.max_gap.to_string(), p.violated.to_string()])
                        .map_err(io_err)?;
                }
                w.flush().map_err(|e| Failure { flag: Some("--out"), error: e.into() })?;
            }
            Ok(json!({
                "config": { "check": "werner-scan", "step": step, "full": full, "search": search_json(&cfg) },
                "result": { "threshold": threshold, "points": points },
            }))
        }
        CheckKind::Sa { rho00, rho01, rho01_im } => {
            let s = SAState::two_qubit(*rho00, c(*rho01, *rho01_im)).flag("--rho01")?;
            let opt = inequalities::sa_pnp2_optimum(&s).flag("--rho01")?;
            Ok(json!({
                "config": { "check": "sa", "rho00": rho00, "rho01": [rho01, rho01_im] },
                "result": { "optimum": opt, "two_abs_rho01": 2.0 * s.rho01().norm() },
            }))
        }
        CheckKind::Conditioned { variant, state, tactic } => {
            let v: ConditionedVariant = variant.parse().flag("--variant")?;
            let rho = io::resolve_state(state).flag("--state")?;
            let t = resolve_tactic(tactic, &rho).flag("--tactic")?;
            let report = inequalities::conditioned_game_check(v, &rho, &t).flag("--tactic")?;
            Ok(json!({
                "config": { "check": "conditioned", "variant": v, "state": state, "tactic": tactic },
                "result": report,
            }))
        }
    }
}

fn demo(args: &DemoArgs) -> Outcome {
    let game = game_spec(&args.game)?;
    let noise = NoiseModel {
        p1: args.p1,
        p2: args.p2,
        pm: args.pm,
    };
    noise.validate()?;
    let shots = (!args.exact).then_some(args.shots);
    let report = circuits::run_demo(&game, &noise, shots, args.seed).flag("--shots")?;
    if let Some(path) = &args.out {
        circuits::write_demo_csv(&report, create(path).flag("--out")?).flag("--out")?;
    }
    Ok(json!({
        "config": { "game": game_json(&game), "noise": noise, "shots": shots, "seed": args.seed, "out": args.out },
        "result": report,
    }))
}

fn run(cli: &Cli) -> (&'static str, Option<u64>, Outcome) {
    match &cli.command {
        Command::Measure(a) => ("measure", a.g.then_some(a.search.seed), measure(a)),
        Command::Play(a) => ("play", None, play(a)),
        Command::Tactic(a) => ("tactic", None, tactic(a)),
        Command::Optimize(a) => ("optimize", Some(a.search.seed), optimize(a)),
        Command::Sweep(a) => ("sweep", Some(a.search.seed), sweep(a)),
        Command::Check(a) => {
            let seed = match &a.kind {
                CheckKind::WernerScan { search, .. } => Some(search.seed),
                _ => None,
            };
            ("check", seed, check(a))
        }
        Command::Demo(a) => ("demo", (!a.exact).then_some(a.seed), demo(a)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, seed, outcome) = run(&cli);
    if let Some(seed) = seed {
        eprintln!("seed: {seed}");
    }
    match outcome {
        Ok(mut doc) => {
            let config = doc["config"].as_object_mut().expect("config block");
            config.insert("command".into(), json!(command));
            config.insert("seed".into(), json!(seed));
            config.insert(
                "tolerances".into(),
                json!({
                    "validation": qcore::VALIDATION_TOL,
                    "unitary": qcore::UNITARY_TOL,
                    "saturation": games::SATURATION_TOL,
                }),
            );
            config.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
            println!("{}", serde_json::to_string_pretty(&doc).expect("report serializes"));
            ExitCode::SUCCESS
        }
        Err(Failure { flag, error }) => {
            match flag {
                Some(f) => eprintln!("error: {f}: {error}"),
                None => eprintln!("error: {error}"),
            }
            ExitCode::from(exit_code(&error))
        }
    }
}
