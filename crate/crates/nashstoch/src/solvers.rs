//! Equilibrium solvers: stochastic gradient descent on the loss, regret
//! matching and FTRL baselines, and a batched Lipschitz bandit over the unit
//! hypercube. All solvers emit per-checkpoint exploitability traces and are
//! deterministic for a fixed seed.

use crate::calculus::loss_gradient_unchecked;
use crate::error::{Error, Result};
use crate::estimators::{estimate_loss_gradient, sample_gradient, EstimatorKind};
use crate::game::{JointStrategy, MixedStrategy, NormalFormGame};
use crate::loss::{loss_value, LossConfig};
use crate::rng::CounterRng;
use crate::simplex::{
    clamp_interior, mirror_step, project_simplex_euclidean, project_tangent, softmax,
    HypercubePoint,
};
use std::time::Instant;

/// Abort threshold for the divergence guard.
pub const DIVERGENCE_LIMIT: f64 = 1e6;

/// How solver iterates are kept feasible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projection {
    /// Euclidean projection onto the simplex (sort-and-threshold).
    Euclidean,
    /// Entropic mirror step (multiplicative weights).
    Mirror,
}

impl Projection {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "euclidean" => Some(Projection::Euclidean),
            "mirror" => Some(Projection::Mirror),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Projection::Euclidean => "euclidean",
            Projection::Mirror => "mirror",
        }
    }
}

/// Where a solver run begins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartProfile {
    /// Every player uniform.
    Uniform,
    /// A seeded random interior profile.
    Random,
}

/// Configuration for [`sgd_solve`].
#[derive(Debug, Clone)]
pub struct SgdConfig {
    pub learning_rate: f64,
    pub iterations: usize,
    /// Stochastic loss-gradient estimates averaged per update; `None` means
    /// exact gradients.
    pub minibatch: Option<usize>,
    pub projection: Projection,
    /// Project the loss gradient onto each simplex tangent space before
    /// stepping.
    pub use_projected_gradient: bool,
    pub tau: f64,
    /// Per-player weights; `None` means all ones.
    pub etas: Option<Vec<f64>>,
    /// Estimator kind used by sampled minibatches.
    pub estimator: EstimatorKind,
    pub seed: u64,
    /// Checkpoint cadence; 0 picks roughly 200 checkpoints.
    pub checkpoint_every: usize,
    pub start: StartProfile,
}

impl SgdConfig {
    pub fn exact(learning_rate: f64, iterations: usize) -> Self {
        SgdConfig {
            learning_rate,
            iterations,
            minibatch: None,
            projection: Projection::Euclidean,
            use_projected_gradient: true,
            tau: 0.0,
            etas: None,
            estimator: EstimatorKind::SampleOthers,
            seed: 0,
            checkpoint_every: 0,
            start: StartProfile::Uniform,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0) {
            return Err(Error::validation("learning rate must be positive"));
        }
        if self.iterations == 0 {
            return Err(Error::validation("iterations must be at least 1"));
        }
        if let Some(s) = self.minibatch {
            if s == 0 {
                return Err(Error::validation("minibatch must be at least 1 sample"));
            }
        }
        Ok(())
    }

    fn loss_config(&self, game: &NormalFormGame) -> Result<LossConfig> {
        match &self.etas {
            Some(etas) => LossConfig::new(etas.clone(), self.tau),
            None => Ok(LossConfig::uniform(game.num_players(), self.tau)),
        }
    }
}

/// One trace checkpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub iteration: usize,
    pub epsilon: f64,
    pub loss: f64,
    /// Cumulative payoff-tensor lookups spent by the solver (diagnostic
    /// evaluations at checkpoints are not counted).
    pub payoff_queries: u64,
    pub seconds: f64,
}

/// Per-iteration diagnostics emitted by every solver.
#[derive(Debug, Clone, Default)]
pub struct Trace {
    pub points: Vec<TracePoint>,
}

impl Trace {
    /// CSV with columns `iteration,epsilon,loss,queries,seconds` and floats
    /// at 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration,epsilon,loss,queries,seconds\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{:.11e},{:.11e},{},{:.11e}\n",
                p.iteration, p.epsilon, p.loss, p.payoff_queries, p.seconds
            ));
        }
        out
    }

    pub fn final_epsilon(&self) -> f64 {
        self.points.last().map(|p| p.epsilon).unwrap_or(f64::NAN)
    }
}

fn random_start(game: &NormalFormGame, rng: &mut CounterRng) -> JointStrategy {
    JointStrategy::new(
        game.action_counts()
            .iter()
            .map(|&m| {
                let mut v: Vec<f64> = (0..m).map(|_| rng.next_f64() + 1e-3).collect();
                let sum: f64 = v.iter().sum();
                v.iter_mut().for_each(|p| *p /= sum);
                MixedStrategy::new(v).expect("normalized start is valid")
            })
            .collect(),
    )
}

fn checkpoint_cadence(cfg_every: usize, iterations: usize) -> usize {
    if cfg_every > 0 {
        cfg_every
    } else {
        (iterations / 200).max(1)
    }
}

fn full_tensor_cost(game: &NormalFormGame) -> u64 {
    game.action_counts().iter().product::<usize>() as u64
}

/// Payoff lookups consumed by one loss-gradient evaluation.
fn loss_gradient_query_cost(
    game: &NormalFormGame,
    minibatch: Option<usize>,
    kind: EstimatorKind,
) -> u64 {
    let n = game.num_players() as u64;
    let full = full_tensor_cost(game);
    match minibatch {
        None => {
            // n player gradients plus n(n-1) bimatrix marginalizations.
            n * full + n * (n - 1) * full
        }
        Some(s) => {
            let grad: u64 = match kind {
                EstimatorKind::Exact => n * full,
                EstimatorKind::SampleOthers => game.total_actions() as u64,
                EstimatorKind::SampleAll => n,
            };
            let mut bimatrix = 0u64;
            for k in 0..game.num_players() {
                for l in 0..game.num_players() {
                    if k != l {
                        bimatrix += match kind {
                            EstimatorKind::Exact => full,
                            _ => (game.action_counts()[k] * game.action_counts()[l]) as u64,
                        };
                    }
                }
            }
            s as u64 * (grad + bimatrix)
        }
    }
}

/// Projected stochastic gradient descent on the loss. Returns the last
/// iterate and its trace. Deterministic for a fixed seed.
pub fn sgd_solve(game: &NormalFormGame, cfg: &SgdConfig) -> Result<(JointStrategy, Trace)> {
    cfg.validate()?;
    let loss_cfg = cfg.loss_config(game)?;
    let root = CounterRng::new(cfg.seed);
    let start = Instant::now();
    let every = checkpoint_cadence(cfg.checkpoint_every, cfg.iterations);
    let per_step_cost = loss_gradient_query_cost(game, cfg.minibatch, cfg.estimator);

    let mut x = match cfg.start {
        StartProfile::Uniform => JointStrategy::uniform(game),
        StartProfile::Random => random_start(game, &mut root.stream(&[u64::MAX])),
    };
    let mut trace = Trace::default();
    let mut queries = 0u64;
    for t in 0..cfg.iterations {
        if t % every == 0 {
            record_checkpoint(game, &x, &loss_cfg, t, queries, start, &mut trace)?;
        }
        let grads = match cfg.minibatch {
            None => loss_gradient_unchecked(game, &x, &loss_cfg),
            Some(s) => {
                let mut stream = root.stream(&[t as u64]);
                let mut acc: Vec<Vec<f64>> =
                    game.action_counts().iter().map(|&m| vec![0.0; m]).collect();
                for _ in 0..s {
                    let draw =
                        estimate_loss_gradient(game, &x, &loss_cfg, cfg.estimator, &mut stream)?;
                    for (a, d) in acc.iter_mut().zip(draw) {
                        for (ai, di) in a.iter_mut().zip(d) {
                            *ai += di / s as f64;
                        }
                    }
                }
                acc
            }
        };
        queries += per_step_cost;
        if grads.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::numerical(format!(
                "non-finite loss gradient at iteration {t}"
            )));
        }
        x = step_profile(&x, &grads, cfg)?;
    }
    record_checkpoint(
        game,
        &x,
        &loss_cfg,
        cfg.iterations,
        queries,
        start,
        &mut trace,
    )?;
    Ok((x, trace))
}

fn step_profile(x: &JointStrategy, grads: &[Vec<f64>], cfg: &SgdConfig) -> Result<JointStrategy> {
    let mut strategies = Vec::with_capacity(x.num_players());
    for (k, strategy) in x.strategies.iter().enumerate() {
        let mut g = grads[k].clone();
        if cfg.use_projected_gradient {
            g = project_tangent(&g);
        }
        let next = match cfg.projection {
            Projection::Euclidean => {
                let moved: Vec<f64> = strategy
                    .probs()
                    .iter()
                    .zip(&g)
                    .map(|(p, gi)| p - cfg.learning_rate * gi)
                    .collect();
                let projected = project_simplex_euclidean(&moved);
                if cfg.tau > 0.0 {
                    clamp_interior(&projected)
                } else {
                    projected
                }
            }
            Projection::Mirror => {
                let interior = clamp_interior(strategy);
                let stepped = mirror_step(&interior, &g, cfg.learning_rate)?;
                // Extreme logits can underflow a probability to exactly zero;
                // the floor keeps the next entropy-gradient evaluation finite.
                clamp_interior(&stepped)
            }
        };
        strategies.push(next);
    }
    Ok(JointStrategy::new(strategies))
}

fn record_checkpoint(
    game: &NormalFormGame,
    x: &JointStrategy,
    loss_cfg: &LossConfig,
    iteration: usize,
    queries: u64,
    start: Instant,
    trace: &mut Trace,
) -> Result<()> {
    let report = loss_value(game, x, loss_cfg)?;
    if !report.loss.is_finite() || report.loss > DIVERGENCE_LIMIT {
        return Err(Error::numerical(format!(
            "loss {} exceeded the divergence limit at iteration {iteration}",
            report.loss
        )));
    }
    trace.points.push(TracePoint {
        iteration,
        epsilon: report.epsilon,
        loss: report.loss,
        payoff_queries: queries,
        seconds: start.elapsed().as_secs_f64(),
    });
    Ok(())
}

/// Regret matching: play proportional to positive cumulative regrets
/// (uniform when none are positive) and report the average strategy.
pub fn regret_matching(
    game: &NormalFormGame,
    iterations: usize,
    minibatch: Option<usize>,
    seed: u64,
) -> Result<(JointStrategy, Trace)> {
    if iterations == 0 {
        return Err(Error::validation("iterations must be at least 1"));
    }
    let n = game.num_players();
    let root = CounterRng::new(seed);
    let start = Instant::now();
    let every = checkpoint_cadence(0, iterations);
    let loss_cfg = LossConfig::uniform(n, 0.0);

    let mut regrets: Vec<Vec<f64>> = game.action_counts().iter().map(|&m| vec![0.0; m]).collect();
    let mut strategy_sums: Vec<Vec<f64>> =
        game.action_counts().iter().map(|&m| vec![0.0; m]).collect();
    let mut trace = Trace::default();
    let mut queries = 0u64;

    for t in 0..iterations {
        let x = JointStrategy::new(
            regrets
                .iter()
                .map(|r| MixedStrategy::new(positive_share(r)).expect("valid policy"))
                .collect(),
        );
        for (sum, s) in strategy_sums.iter_mut().zip(&x.strategies) {
            for (a, p) in sum.iter_mut().zip(s.probs()) {
                *a += p;
            }
        }
        if t % every == 0 {
            let avg = normalized_average(&strategy_sums);
            record_checkpoint(game, &avg, &loss_cfg, t, queries, start, &mut trace)?;
        }
        for k in 0..n {
            let grad = match minibatch {
                None => {
                    queries += full_tensor_cost(game);
                    game.player_gradient(&x, k)?
                }
                Some(s) => {
                    let mut stream = root.stream(&[t as u64, k as u64]);
                    let mut acc = vec![0.0; game.action_counts()[k]];
                    for _ in 0..s {
                        let est =
                            sample_gradient(game, &x, k, EstimatorKind::SampleOthers, &mut stream)?;
                        queries += est.payoff_queries;
                        for (a, v) in acc.iter_mut().zip(&est.values) {
                            *a += v / s as f64;
                        }
                    }
                    acc
                }
            };
            let value: f64 = grad
                .iter()
                .zip(x.player(k).probs())
                .map(|(g, p)| g * p)
                .sum();
            for (r, g) in regrets[k].iter_mut().zip(&grad) {
                *r += g - value;
            }
        }
    }
    let avg = normalized_average(&strategy_sums);
    record_checkpoint(
        game, &avg, &loss_cfg, iterations, queries, start, &mut trace,
    )?;
    Ok((avg, trace))
}

fn positive_share(regrets: &[f64]) -> Vec<f64> {
    let positive: Vec<f64> = regrets.iter().map(|&r| r.max(0.0)).collect();
    let total: f64 = positive.iter().sum();
    if total > 0.0 {
        positive.iter().map(|p| p / total).collect()
    } else {
        vec![1.0 / regrets.len() as f64; regrets.len()]
    }
}

fn normalized_average(sums: &[Vec<f64>]) -> JointStrategy {
    JointStrategy::new(
        sums.iter()
            .map(|s| {
                let total: f64 = s.iter().sum();
                let probs = if total > 0.0 {
                    s.iter().map(|v| v / total).collect()
                } else {
                    vec![1.0 / s.len() as f64; s.len()]
                };
                MixedStrategy::new(probs).expect("valid average")
            })
            .collect(),
    )
}

/// Follow-the-regularized-leader with entropy regularization: play
/// softmax(lr * cumulative utility gradient); reports the average strategy.
pub fn ftrl(
    game: &NormalFormGame,
    iterations: usize,
    learning_rate: f64,
    minibatch: Option<usize>,
    seed: u64,
) -> Result<(JointStrategy, Trace)> {
    if iterations == 0 {
        return Err(Error::validation("iterations must be at least 1"));
    }
    if !(learning_rate > 0.0) {
        return Err(Error::validation("learning rate must be positive"));
    }
    let n = game.num_players();
    let root = CounterRng::new(seed);
    let start = Instant::now();
    let every = checkpoint_cadence(0, iterations);
    let loss_cfg = LossConfig::uniform(n, 0.0);

    let mut cumulative: Vec<Vec<f64>> =
        game.action_counts().iter().map(|&m| vec![0.0; m]).collect();
    let mut strategy_sums: Vec<Vec<f64>> =
        game.action_counts().iter().map(|&m| vec![0.0; m]).collect();
    let mut trace = Trace::default();
    let mut queries = 0u64;

    for t in 0..iterations {
        let x = JointStrategy::new(
            cumulative
                .iter()
                .map(|g| {
                    let logits: Vec<f64> = g.iter().map(|v| learning_rate * v).collect();
                    MixedStrategy::new(softmax(&logits)).expect("softmax is a distribution")
                })
                .collect(),
        );
        for (sum, s) in strategy_sums.iter_mut().zip(&x.strategies) {
            for (a, p) in sum.iter_mut().zip(s.probs()) {
                *a += p;
            }
        }
        if t % every == 0 {
            let avg = normalized_average(&strategy_sums);
            record_checkpoint(game, &avg, &loss_cfg, t, queries, start, &mut trace)?;
        }
        for k in 0..n {
            let grad = match minibatch {
                None => {
                    queries += full_tensor_cost(game);
                    game.player_gradient(&x, k)?
                }
                Some(s) => {
                    let mut stream = root.stream(&[t as u64, k as u64]);
                    let mut acc = vec![0.0; game.action_counts()[k]];
                    for _ in 0..s {
                        let est =
                            sample_gradient(game, &x, k, EstimatorKind::SampleOthers, &mut stream)?;
                        queries += est.payoff_queries;
                        for (a, v) in acc.iter_mut().zip(&est.values) {
                            *a += v / s as f64;
                        }
                    }
                    acc
                }
            };
            for (c, g) in cumulative[k].iter_mut().zip(&grad) {
                *c += g;
            }
        }
    }
    let avg = normalized_average(&strategy_sums);
    record_checkpoint(
        game, &avg, &loss_cfg, iterations, queries, start, &mut trace,
    )?;
    Ok((avg, trace))
}

/// All players play the same two-action strategy `(1 - p, p)`, where `p` is
/// the probability of action index 1.
pub fn symmetric_profile(prob_action1: f64, num_players: usize) -> Result<JointStrategy> {
    if !(0.0..=1.0).contains(&prob_action1) {
        return Err(Error::validation("probability must lie in [0, 1]"));
    }
    let strategy = MixedStrategy::new(vec![1.0 - prob_action1, prob_action1])?;
    Ok(JointStrategy::new(vec![strategy; num_players]))
}

// ---------------------------------------------------------------------------
// Batched Lipschitz bandit
// ---------------------------------------------------------------------------

/// Configuration for [`blin_solve`].
#[derive(Debug, Clone)]
pub struct BlinConfig {
    /// Total pull budget T.
    pub horizon: u64,
    /// Confidence-width constant (0 allowed for noise-free objectives).
    pub c1: f64,
    /// Pull-count constant: each box is pulled ceil(c2 ln T / r_m^2) times.
    pub c2: f64,
    /// Search-space dimension d.
    pub dim: usize,
    pub seed: u64,
}

impl BlinConfig {
    fn validate(&self) -> Result<()> {
        if self.horizon < 4 {
            return Err(Error::validation("horizon must be at least 4"));
        }
        if !(self.c1 >= 0.0) || !(self.c2 > 0.0) {
            return Err(Error::validation("c1 must be >= 0 and c2 > 0"));
        }
        if self.dim == 0 {
            return Err(Error::validation("dimension must be at least 1"));
        }
        Ok(())
    }
}

/// One hypercube cell with its pull statistics.
#[derive(Debug, Clone)]
pub struct ArmRecord {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Batch index (1-based); boxes at batch m have edge length 2^(1-m).
    pub depth: usize,
    pub pulls: u64,
    pub reward_sum: f64,
    /// Still a leaf of the live partition.
    pub alive: bool,
    /// Removed by the elimination rule (split parents stay false).
    pub eliminated: bool,
}

impl ArmRecord {
    pub fn center(&self) -> HypercubePoint {
        HypercubePoint::new(
            self.lower
                .iter()
                .zip(&self.upper)
                .map(|(a, b)| 0.5 * (a + b))
                .collect(),
        )
        .expect("box centers lie in the unit cube")
    }

    pub fn mean(&self) -> f64 {
        if self.pulls == 0 {
            f64::NEG_INFINITY
        } else {
            self.reward_sum / self.pulls as f64
        }
    }

    pub fn edge_length(&self) -> f64 {
        self.upper[0] - self.lower[0]
    }
}

/// Output of [`blin_solve`].
#[derive(Debug, Clone)]
pub struct BlinResult {
    /// Center of the pulled box with the highest empirical mean (preferring
    /// live boxes).
    pub best: HypercubePoint,
    /// A previously pulled arm chosen uniformly at random over all pulls,
    /// the arm the PAC guarantee attaches to.
    pub random_arm: HypercubePoint,
    /// Every box ever created, in creation order, with final statistics.
    pub history: Vec<ArmRecord>,
    pub total_pulls: u64,
    pub batches_completed: usize,
}

/// Edge length of batch-m boxes (1-based): 2^(1-m).
pub fn blin_edge_length(batch: usize) -> f64 {
    (2.0f64).powi(1 - batch as i32)
}

/// Batched elimination over the unit hypercube: every live box is pulled at
/// its center n_m = ceil(c2 ln T / r_m^2) times per batch, boxes whose
/// empirical mean trails the best by 2 (1 + sqrt(c1/c2)) r_m are eliminated,
/// and survivors split into 2^d half-edge children until the budget runs out.
/// The objective is a stochastic reward to be maximized.
pub fn blin_solve<F>(mut objective: F, cfg: &BlinConfig) -> Result<BlinResult>
where
    F: FnMut(&HypercubePoint, &mut CounterRng) -> f64,
{
    cfg.validate()?;
    let ln_t = (cfg.horizon as f64).ln();
    let n_1 = (cfg.c2 * ln_t).ceil().max(1.0) as u64;
    if cfg.horizon < n_1 {
        return Err(Error::numerical(format!(
            "budget {} cannot finish the first batch; need at least {n_1} pulls",
            cfg.horizon
        )));
    }

    let root = CounterRng::new(cfg.seed);
    let mut history: Vec<ArmRecord> = vec![ArmRecord {
        lower: vec![0.0; cfg.dim],
        upper: vec![1.0; cfg.dim],
        depth: 1,
        pulls: 0,
        reward_sum: 0.0,
        alive: true,
        eliminated: false,
    }];
    let mut live: Vec<usize> = vec![0];
    let mut pulls_used = 0u64;
    let mut batches_completed = 0usize;
    let threshold_factor = 2.0 * (1.0 + (cfg.c1 / cfg.c2).sqrt());

    let mut batch = 1usize;
    'outer: loop {
        let r_m = blin_edge_length(batch);
        let n_m = ((cfg.c2 * ln_t / (r_m * r_m)).ceil() as u64).max(1);
        // Pull every live box n_m times at its center.
        for (slot, &idx) in live.iter().enumerate() {
            let center = history[idx].center();
            for pull in 0..n_m {
                if pulls_used >= cfg.horizon {
                    break 'outer;
                }
                let mut stream = root.stream(&[batch as u64, slot as u64, pull]);
                let reward = objective(&center, &mut stream);
                history[idx].pulls += 1;
                history[idx].reward_sum += reward;
                pulls_used += 1;
            }
        }
        batches_completed = batch;

        // Eliminate clearly suboptimal boxes.
        let best_mean = live
            .iter()
            .map(|&i| history[i].mean())
            .fold(f64::NEG_INFINITY, f64::max);
        let threshold = threshold_factor * r_m;
        let mut survivors = Vec::new();
        for &idx in &live {
            if best_mean - history[idx].mean() >= threshold {
                history[idx].alive = false;
                history[idx].eliminated = true;
            } else {
                survivors.push(idx);
            }
        }

        if pulls_used >= cfg.horizon {
            live = survivors;
            break;
        }

        // Split survivors into 2^d children with half the edge length.
        let mut next_live = Vec::with_capacity(survivors.len() << cfg.dim);
        for &idx in &survivors {
            history[idx].alive = false;
            let parent_lower = history[idx].lower.clone();
            let parent_upper = history[idx].upper.clone();
            let half: Vec<f64> = parent_lower
                .iter()
                .zip(&parent_upper)
                .map(|(a, b)| 0.5 * (b - a))
                .collect();
            for corner in 0..(1usize << cfg.dim) {
                let mut lower = parent_lower.clone();
                let mut upper = parent_upper.clone();
                for d in 0..cfg.dim {
                    if corner >> d & 1 == 1 {
                        lower[d] += half[d];
                    } else {
                        upper[d] -= half[d];
                    }
                }
                next_live.push(history.len());
                history.push(ArmRecord {
                    lower,
                    upper,
                    depth: batch + 1,
                    pulls: 0,
                    reward_sum: 0.0,
                    alive: true,
                    eliminated: false,
                });
            }
        }
        live = next_live;
        batch += 1;
    }

    // Best arm: highest mean among pulled live boxes, falling back to all
    // pulled boxes if the budget died right after a split.
    let best_idx = live
        .iter()
        .copied()
        .filter(|&i| history[i].pulls > 0)
        .max_by(|&a, &b| history[a].mean().partial_cmp(&history[b].mean()).unwrap())
        .or_else(|| {
            (0..history.len())
                .filter(|&i| history[i].pulls > 0)
                .max_by(|&a, &b| history[a].mean().partial_cmp(&history[b].mean()).unwrap())
        })
        .expect("at least one pull was made");

    // Uniform draw over all pulls made, mapped back to the pulled box.
    let mut picker = root.fork(u64::MAX);
    let target = picker.next_index(pulls_used as usize) as u64;
    let mut acc = 0u64;
    let mut random_idx = best_idx;
    for (i, rec) in history.iter().enumerate() {
        if rec.pulls == 0 {
            continue;
        }
        if target < acc + rec.pulls {
            random_idx = i;
            break;
        }
        acc += rec.pulls;
    }

    Ok(BlinResult {
        best: history[best_idx].center(),
        random_arm: history[random_idx].center(),
        history,
        total_pulls: pulls_used,
        batches_completed,
    })
}

/// The learning-rate grid, projections, and gradient variants swept by the
/// benchmark protocol: seven log-spaced rates from 1e-3 to 1e2, both
/// projections, raw and tangent-projected gradients. Returns the best run by
/// final exploitability.
pub fn sweep_sgd(
    game: &NormalFormGame,
    iterations: usize,
    minibatch: Option<usize>,
    tau: f64,
    seed: u64,
    start: StartProfile,
) -> Result<(SgdConfig, JointStrategy, Trace)> {
    let mut best: Option<(SgdConfig, JointStrategy, Trace)> = None;
    for exp in -3..=3 {
        let lr = 10.0f64.powi(exp);
        for projection in [Projection::Euclidean, Projection::Mirror] {
            for projected in [true, false] {
                let cfg = SgdConfig {
                    learning_rate: lr,
                    iterations,
                    minibatch,
                    projection,
                    use_projected_gradient: projected,
                    tau,
                    etas: None,
                    estimator: EstimatorKind::SampleOthers,
                    seed,
                    checkpoint_every: 0,
                    start,
                };
                match sgd_solve(game, &cfg) {
                    Ok((x, trace)) => {
                        let eps = trace.final_epsilon();
                        if best
                            .as_ref()
                            .map(|(_, _, t)| eps < t.final_epsilon())
                            .unwrap_or(true)
                        {
                            best = Some((cfg, x, trace));
                        }
                    }
                    // Divergent settings lose the sweep instead of failing it.
                    Err(Error::Numerical(_)) => continue,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    best.ok_or_else(|| Error::numerical("every sweep configuration diverged"))
}
