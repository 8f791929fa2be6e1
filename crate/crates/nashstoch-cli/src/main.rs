//! Command-line interface: equilibrium solving, loss surfaces, rank tests,
//! critical-point studies, and Monte-Carlo loss estimation, with
//! reproducible seeds and machine-readable outputs.
//!
//! Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 numerical
//! abort.

mod games;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use nashstoch::analysis::{
    critical_point_study, critical_points_to_csv, loss_surface, SurfaceSpace,
};
use nashstoch::calculus::{isolation_test, rank, test_matrix, RANK_TOL};
use nashstoch::error::Error as LibError;
use nashstoch::estimators::{estimate_loss, EstimatorKind, EstimatorStats};
use nashstoch::game::{JointStrategy, NormalFormGame};
use nashstoch::loss::{
    lipschitz_bound, loss_range_bound, loss_value, set_tau, GameDims, LossConfig,
};
use nashstoch::rng::CounterRng;
use nashstoch::simplex::{softmax_map, spherical_map, DEFAULT_LOGIT_RANGE};
use nashstoch::solvers::{
    blin_solve, ftrl, regret_matching, sgd_solve, symmetric_profile, BlinConfig, Projection,
    SgdConfig, StartProfile, Trace,
};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "nashstoch",
    version,
    about = "Equilibrium solvers for normal-form games"
)]
struct Cli {
    /// Worker cap for parallel estimation (default: NASHSTOCH_THREADS or 1).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a solver and write its trace and final profile.
    Solve(SolveArgs),
    /// Evaluate loss diagnostics over a strategy grid.
    Surface(SurfaceArgs),
    /// Rank test of the equilibrium-isolation matrix at a profile.
    Rank(RankArgs),
    /// Search for critical points of the loss and report their indices.
    Critical(CriticalArgs),
    /// Monte-Carlo loss estimation with Hoeffding statistics.
    Estimate(EstimateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    Sgd,
    Rm,
    Ftrl,
    Blin,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProjectionArg {
    Euclidean,
    Mirror,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StartArg {
    Uniform,
    Random,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Exact,
    #[value(alias = "sample_others")]
    SampleOthers,
    #[value(alias = "sample_all")]
    SampleAll,
}

impl From<KindArg> for EstimatorKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Exact => EstimatorKind::Exact,
            KindArg::SampleOthers => EstimatorKind::SampleOthers,
            KindArg::SampleAll => EstimatorKind::SampleAll,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MapArg {
    Softmax,
    Spherical,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpaceArg {
    Prob,
    Logit,
}

#[derive(Args)]
struct SolveArgs {
    /// Game source: classic:<name>, blotto:n,c,f, sym7, random:n,m,seed, file:<path>.
    #[arg(long)]
    game: String,
    #[arg(long, value_enum)]
    alg: Algorithm,
    /// Learning rate (sgd, ftrl).
    #[arg(long, default_value_t = 0.1)]
    lr: f64,
    #[arg(long, default_value_t = 10_000)]
    iters: usize,
    /// Minibatch size: `inf` for exact gradients, otherwise samples per update.
    #[arg(long, default_value = "inf")]
    s: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.0)]
    tau: f64,
    /// Uniform per-player weight eta.
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    #[arg(long, value_enum, default_value_t = ProjectionArg::Euclidean)]
    proj: ProjectionArg,
    /// Step along the raw loss gradient instead of its tangent projection.
    #[arg(long)]
    raw_gradient: bool,
    #[arg(long, value_enum, default_value_t = StartArg::Uniform)]
    start: StartArg,
    #[arg(long, value_enum, default_value_t = KindArg::SampleOthers)]
    kind: KindArg,
    /// Output directory for trace.csv, final_profile.json, manifest.json.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// BLiN pull budget.
    #[arg(long, default_value_t = 50_000)]
    horizon: u64,
    /// BLiN confidence-width constant; defaults to 2 c^2 with c the reward range.
    #[arg(long)]
    c1: Option<f64>,
    /// BLiN pull-count constant.
    #[arg(long, default_value_t = 1.0)]
    c2: f64,
    /// BLiN probability-floor parameter (temperature tau = 1/ln(1/p)).
    #[arg(long, default_value_t = 0.05)]
    p: f64,
    /// BLiN hypercube-to-simplex map.
    #[arg(long, value_enum, default_value_t = MapArg::Softmax)]
    map: MapArg,
    /// Monte-Carlo loss estimates averaged per arm pull.
    #[arg(long, default_value_t = 10)]
    samples_per_pull: usize,
    /// Search a single scalar (all players share one two-action strategy).
    #[arg(long)]
    sym_scalar: bool,
}

#[derive(Args)]
struct SurfaceArgs {
    #[arg(long)]
    game: String,
    #[arg(long, default_value_t = 0.0)]
    tau: f64,
    #[arg(long, default_value_t = 51)]
    res: usize,
    #[arg(long, value_enum, default_value_t = SpaceArg::Prob)]
    space: SpaceArg,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct RankArgs {
    #[arg(long)]
    game: String,
    /// Profile source: uniform, random:<seed>, pure:<a,...>.
    #[arg(long, default_value = "uniform")]
    at: String,
    #[arg(long, default_value_t = 0.0)]
    tau: f64,
}

#[derive(Args)]
struct CriticalArgs {
    #[arg(long)]
    game: String,
    #[arg(long, default_value_t = 0.1)]
    tau: f64,
    #[arg(long, default_value_t = 5)]
    trajectories: usize,
    #[arg(long, default_value_t = 20)]
    probes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long)]
    game: String,
    #[arg(long, default_value = "uniform")]
    profile: String,
    #[arg(long, value_enum, default_value_t = KindArg::SampleAll)]
    kind: KindArg,
    /// Number of loss estimates to draw.
    #[arg(long = "T", default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0.0)]
    tau: f64,
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory for estimate.json and manifest.json (optional).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Manifest {
    command: String,
    argv: Vec<String>,
    seed: Option<u64>,
    artifacts: Vec<String>,
    version: String,
    wall_clock_secs: f64,
}

fn main() {
    let cli = Cli::parse();
    let exit = match run(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err:#}");
            classify(&err)
        }
    };
    std::process::exit(exit);
}

/// Maps failures onto the documented exit codes.
fn classify(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if let Some(lib) = cause.downcast_ref::<LibError>() {
            return match lib {
                LibError::Validation(_) | LibError::InvalidPair(_) | LibError::Size(_) => 2,
                LibError::Parse { .. } | LibError::Schema { .. } => 3,
                LibError::Numerical(_) => 4,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 3;
        }
    }
    2
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let threads = cli
        .threads
        .or_else(|| {
            std::env::var("NASHSTOCH_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(1)
        .max(1);
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Surface(args) => cmd_surface(args),
        Command::Rank(args) => cmd_rank(args),
        Command::Critical(args) => cmd_critical(args),
        Command::Estimate(args) => cmd_estimate(args, threads),
    }
}

fn parse_minibatch(s: &str) -> anyhow::Result<Option<usize>> {
    if s == "inf" {
        Ok(None)
    } else {
        let n: usize = s
            .parse()
            .with_context(|| format!("minibatch `{s}` must be `inf` or a positive integer"))?;
        if n == 0 {
            return Err(anyhow!("minibatch must be at least 1"));
        }
        Ok(Some(n))
    }
}

fn write_manifest(
    out: &Path,
    command: &str,
    seed: Option<u64>,
    artifacts: &[PathBuf],
    started: Instant,
) -> anyhow::Result<()> {
    let manifest = Manifest {
        command: command.to_string(),
        argv: std::env::args().collect(),
        seed,
        artifacts: artifacts
            .iter()
            .map(|p| p.to_string_lossy().into_owned())
            .collect(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        wall_clock_secs: started.elapsed().as_secs_f64(),
    };
    let path = out.join("manifest.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest)?)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

fn profile_json(x: &JointStrategy) -> String {
    let strategies: Vec<Vec<f64>> = x.strategies.iter().map(|s| s.probs().to_vec()).collect();
    serde_json::to_string_pretty(&serde_json::json!({ "strategies": strategies }))
        .expect("serialization cannot fail")
}

fn cmd_solve(args: SolveArgs) -> anyhow::Result<()> {
    let started = Instant::now();
    let game = games::load_game(&args.game)?;
    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("cannot create {}", args.out.display()))?;
    let minibatch = parse_minibatch(&args.s)?;

    let (profile, trace): (JointStrategy, Trace) = match args.alg {
        Algorithm::Sgd => {
            let cfg = SgdConfig {
                learning_rate: args.lr,
                iterations: args.iters,
                minibatch,
                projection: match args.proj {
                    ProjectionArg::Euclidean => Projection::Euclidean,
                    ProjectionArg::Mirror => Projection::Mirror,
                },
                use_projected_gradient: !args.raw_gradient,
                tau: args.tau,
                etas: Some(vec![args.eta; game.num_players()]),
                estimator: args.kind.into(),
                seed: args.seed,
                checkpoint_every: 0,
                start: match args.start {
                    StartArg::Uniform => StartProfile::Uniform,
                    StartArg::Random => StartProfile::Random,
                },
            };
            sgd_solve(&game, &cfg)?
        }
        Algorithm::Rm => regret_matching(&game, args.iters, minibatch, args.seed)?,
        Algorithm::Ftrl => ftrl(&game, args.iters, args.lr, minibatch, args.seed)?,
        Algorithm::Blin => return cmd_solve_blin(args, &game, started),
    };

    let trace_path = args.out.join("trace.csv");
    std::fs::write(&trace_path, trace.to_csv())?;
    let profile_path = args.out.join("final_profile.json");
    std::fs::write(&profile_path, profile_json(&profile))?;
    write_manifest(
        &args.out,
        "solve",
        Some(args.seed),
        &[trace_path, profile_path],
        started,
    )?;
    println!(
        "final epsilon {:.6e} after {} iterations",
        trace.final_epsilon(),
        args.iters
    );
    Ok(())
}

fn cmd_solve_blin(args: SolveArgs, game: &NormalFormGame, started: Instant) -> anyhow::Result<()> {
    if args.sym_scalar && game.action_counts().iter().any(|&m| m != 2) {
        return Err(anyhow!(LibError::Validation(
            "--sym-scalar needs a game where every player has 2 actions".into()
        )));
    }
    let tau = set_tau(args.p)?;
    let dims = GameDims::of(game);
    let eta = 2.0 / lipschitz_bound(dims, args.p)?;
    let etas = vec![eta; game.num_players()];
    let reward_range = 2.0 * loss_range_bound(dims, args.p, &etas)?;
    let cfg_loss = LossConfig::new(etas, tau)?;
    let dim = if args.sym_scalar {
        1
    } else {
        game.action_counts().iter().map(|&m| m - 1).sum()
    };
    let cfg = BlinConfig {
        horizon: args.horizon,
        c1: args.c1.unwrap_or(2.0 * reward_range * reward_range),
        c2: args.c2,
        dim,
        seed: args.seed,
    };
    let n = game.num_players();
    let counts = game.action_counts().to_vec();
    let samples = args.samples_per_pull.max(1);
    let kind: EstimatorKind = args.kind.into();
    let to_profile = |z: &nashstoch::simplex::HypercubePoint| -> JointStrategy {
        if args.sym_scalar {
            symmetric_profile(z.coords[0], n).expect("coords lie in [0,1]")
        } else {
            match args.map {
                MapArg::Softmax => {
                    softmax_map(z, &counts, DEFAULT_LOGIT_RANGE).expect("dimensions match the game")
                }
                MapArg::Spherical => spherical_map(z, &counts).expect("dimensions match the game"),
            }
        }
    };
    let result = blin_solve(
        |z, rng| {
            let x = to_profile(z);
            let mut total = 0.0;
            for _ in 0..samples {
                total += estimate_loss(game, &x, &cfg_loss, kind, rng)
                    .expect("estimation cannot fail on a valid profile")
                    .value;
            }
            -(total / samples as f64)
        },
        &cfg,
    )?;

    let best_profile = to_profile(&result.best);
    let report = loss_value(game, &best_profile, &LossConfig::uniform(n, 0.0))?;
    let mut trace = Trace::default();
    trace.points.push(nashstoch::solvers::TracePoint {
        iteration: result.total_pulls as usize,
        epsilon: report.epsilon,
        loss: report.loss,
        payoff_queries: result.total_pulls * samples as u64 * 2 * game.total_actions() as u64,
        seconds: started.elapsed().as_secs_f64(),
    });
    let trace_path = args.out.join("trace.csv");
    std::fs::write(&trace_path, trace.to_csv())?;
    let profile_path = args.out.join("final_profile.json");
    std::fs::write(&profile_path, profile_json(&best_profile))?;
    let arm_path = args.out.join("best_arm.json");
    std::fs::write(
        &arm_path,
        serde_json::to_string_pretty(&serde_json::json!({
            "best_arm": result.best.coords,
            "random_arm": result.random_arm.coords,
            "batches_completed": result.batches_completed,
            "total_pulls": result.total_pulls,
        }))?,
    )?;
    write_manifest(
        &args.out,
        "solve",
        Some(args.seed),
        &[trace_path, profile_path, arm_path],
        started,
    )?;
    println!(
        "best arm epsilon {:.6e} after {} pulls in {} batches",
        report.epsilon, result.total_pulls, result.batches_completed
    );
    Ok(())
}

fn cmd_surface(args: SurfaceArgs) -> anyhow::Result<()> {
    let started = Instant::now();
    let game = games::load_game(&args.game)?;
    let cfg = LossConfig::uniform(game.num_players(), args.tau);
    let space = match args.space {
        SpaceArg::Prob => SurfaceSpace::Prob,
        SpaceArg::Logit => SurfaceSpace::Logit,
    };
    let grid = loss_surface(&game, &cfg, args.res, space)?;
    std::fs::create_dir_all(&args.out)?;
    let path = args.out.join("surface.csv");
    std::fs::write(&path, grid.to_csv())?;
    write_manifest(&args.out, "surface", None, &[path], started)?;
    println!("{} cells written", grid.cells.len());
    Ok(())
}

fn cmd_rank(args: RankArgs) -> anyhow::Result<()> {
    let game = games::load_game(&args.game)?;
    let x = games::load_profile(&args.at, &game)?;
    let cfg = LossConfig::uniform(game.num_players(), args.tau);
    let m = test_matrix(&game, &x, &cfg)?;
    let r = rank(&m, RANK_TOL);
    let isolated = isolation_test(&game, &x, &cfg)?;
    println!("rank {r} / {}, isolated: {isolated}", m.cols());
    Ok(())
}

fn cmd_critical(args: CriticalArgs) -> anyhow::Result<()> {
    let started = Instant::now();
    let game = games::load_game(&args.game)?;
    let cfg = LossConfig::uniform(game.num_players(), args.tau);
    let points = critical_point_study(&game, &cfg, args.trajectories, args.probes, args.seed)?;
    std::fs::create_dir_all(&args.out)?;
    let path = args.out.join("critical_points.csv");
    std::fs::write(&path, critical_points_to_csv(&points))?;
    write_manifest(&args.out, "critical", Some(args.seed), &[path], started)?;
    println!(
        "{} critical points found from {} probes",
        points.len(),
        args.probes
    );
    Ok(())
}

fn cmd_estimate(args: EstimateArgs, threads: usize) -> anyhow::Result<()> {
    let started = Instant::now();
    let game = games::load_game(&args.game)?;
    let x = games::load_profile(&args.profile, &game)?;
    let cfg = LossConfig::new(vec![args.eta; game.num_players()], args.tau)?;
    let kind: EstimatorKind = args.kind.into();
    let exact = loss_value(&game, &x, &cfg)?.loss;
    // Single-estimate magnitude bound: sum_k eta_k m_k^a / 4 with a = 1
    // (exact / sample-others) or 3 (sample-all), widened by the entropy span
    // at positive temperature; the signed range doubles it.
    let power = match kind {
        EstimatorKind::SampleAll => 3,
        _ => 1,
    };
    let entropy_span = if args.tau > 0.0 {
        let min_prob = x.min_prob().max(1e-300);
        args.tau * (1.0 / min_prob).ln() + 1.0
    } else {
        1.0
    };
    let per_estimate: f64 = game
        .action_counts()
        .iter()
        .zip(&cfg.etas)
        .map(|(&m, eta)| 0.25 * eta * (m as f64).powi(power) * entropy_span * entropy_span)
        .sum();
    let range = 2.0 * per_estimate;

    // Each draw owns counter stream (draw index), so any worker partition
    // reduces to the same totals.
    let root = CounterRng::new(args.seed);
    let trials = args.trials;
    let chunk = trials.div_ceil(threads as u64);
    let partials: Vec<(f64, f64, u64)> = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for w in 0..threads as u64 {
            let lo = w * chunk;
            let hi = ((w + 1) * chunk).min(trials);
            let game = &game;
            let x = &x;
            let cfg = &cfg;
            let root = &root;
            handles.push(scope.spawn(move || {
                let mut sum = 0.0;
                let mut sum_sq = 0.0;
                let mut count = 0u64;
                for draw in lo..hi {
                    let mut stream = root.stream(&[draw]);
                    let v = estimate_loss(game, x, cfg, kind, &mut stream)
                        .expect("estimation cannot fail on a valid profile")
                        .value;
                    sum += v;
                    sum_sq += v * v;
                    count += 1;
                }
                (sum, sum_sq, count)
            }));
        }
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let (mut sum, mut sum_sq, mut count) = (0.0, 0.0, 0u64);
    for (s, q, c) in partials {
        sum += s;
        sum_sq += q;
        count += c;
    }
    let mean = if count > 0 { sum / count as f64 } else { 0.0 };
    let variance = if count > 1 {
        ((sum_sq - sum * sum / count as f64) / (count - 1) as f64).max(0.0)
    } else {
        0.0
    };
    let std_error = (variance / count.max(1) as f64).sqrt();
    let mut stats = EstimatorStats::new(range, args.delta);
    stats.count = count;
    stats.mean = mean;
    let half_width = stats.half_width();

    println!("mean {mean:.12e}");
    println!("std_error {std_error:.12e}");
    println!("hoeffding_half_width {half_width:.12e}");
    println!("exact {exact:.12e}");
    if let Some(out) = &args.out {
        std::fs::create_dir_all(out)?;
        let path = out.join("estimate.json");
        std::fs::write(
            &path,
            serde_json::to_string_pretty(&serde_json::json!({
                "kind": kind_name(kind),
                "trials": count,
                "mean": mean,
                "std_error": std_error,
                "hoeffding_half_width": half_width,
                "range": range,
                "delta": args.delta,
                "exact_loss": exact,
            }))?,
        )?;
        write_manifest(out, "estimate", Some(args.seed), &[path], started)?;
    }
    Ok(())
}

fn kind_name(kind: EstimatorKind) -> &'static str {
    match kind {
        EstimatorKind::Exact => "exact",
        EstimatorKind::SampleOthers => "sample_others",
        EstimatorKind::SampleAll => "sample_all",
    }
}
