//! Unbiased Monte-Carlo estimators: player-gradient estimators (exact,
//! sample-others, sample-all), the two-sample loss estimator, sampled
//! bimatrix approximations, the stochastic loss gradient, and running
//! Hoeffding statistics.
//!
//! The two-sample construction turns the squared norm of an expectation into
//! the inner product of two independent unbiased samples; the tangent-space
//! projection is linear, so projecting each sample preserves unbiasedness.
//! Entropy terms depend only on the known mixed strategies and are always
//! added deterministically, never sampled.

use crate::error::{Error, Result};
use crate::game::{JointStrategy, NormalFormGame};
use crate::loss::{entropy_gradient, LossConfig};
use crate::rng::CounterRng;
use crate::simplex::project_tangent_mut;

/// Which player-gradient estimator to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorKind {
    /// Full marginalization over opponents: zero variance, full query cost.
    Exact,
    /// One joint sample of the opponents; the player's own actions are swept.
    SampleOthers,
    /// One uniformly sampled own action and one joint opponent sample,
    /// importance-weighted by the action count.
    SampleAll,
}

impl EstimatorKind {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "exact" => Some(EstimatorKind::Exact),
            "sample_others" => Some(EstimatorKind::SampleOthers),
            "sample_all" => Some(EstimatorKind::SampleAll),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EstimatorKind::Exact => "exact",
            EstimatorKind::SampleOthers => "sample_others",
            EstimatorKind::SampleAll => "sample_all",
        }
    }
}

/// A sampled (or exact) estimate of one player's utility gradient.
#[derive(Debug, Clone)]
pub struct GradientEstimate {
    pub player: usize,
    pub values: Vec<f64>,
    pub kind: EstimatorKind,
    /// RNG draws consumed producing this estimate.
    pub rng_draws_consumed: u64,
    /// Payoff-tensor lookups consumed producing this estimate.
    pub payoff_queries: u64,
}

/// Draws one unbiased estimate of player k's utility gradient.
pub fn sample_gradient(
    game: &NormalFormGame,
    x: &JointStrategy,
    k: usize,
    kind: EstimatorKind,
    rng: &mut CounterRng,
) -> Result<GradientEstimate> {
    if k >= game.num_players() {
        return Err(Error::validation(format!("player index {k} out of range")));
    }
    if x.num_players() != game.num_players() {
        return Err(Error::validation(
            "profile and game disagree on player count",
        ));
    }
    let draws_before = rng.draws();
    let n = game.num_players();
    let mk = game.action_counts()[k];
    let (values, payoff_queries) = match kind {
        EstimatorKind::Exact => {
            let grad = game.player_gradient(x, k)?;
            let cost: usize = game.action_counts().iter().product();
            (grad, cost as u64)
        }
        EstimatorKind::SampleOthers => {
            let mut joint = vec![0usize; n];
            for j in 0..n {
                if j != k {
                    joint[j] = rng.sample_categorical(x.player(j).probs());
                }
            }
            let mut values = vec![0.0; mk];
            for (a, v) in values.iter_mut().enumerate() {
                joint[k] = a;
                *v = game.payoff(k, &joint);
            }
            (values, mk as u64)
        }
        EstimatorKind::SampleAll => {
            let own = rng.next_index(mk);
            let mut joint = vec![0usize; n];
            for j in 0..n {
                if j != k {
                    joint[j] = rng.sample_categorical(x.player(j).probs());
                }
            }
            joint[k] = own;
            let mut values = vec![0.0; mk];
            values[own] = mk as f64 * game.payoff(k, &joint);
            (values, 1)
        }
    };
    Ok(GradientEstimate {
        player: k,
        values,
        kind,
        rng_draws_consumed: rng.draws() - draws_before,
        payoff_queries,
    })
}

/// An unbiased loss estimate plus its accounting.
#[derive(Debug, Clone, Copy)]
pub struct LossEstimate {
    pub value: f64,
    pub payoff_queries: u64,
    pub rng_draws_consumed: u64,
}

/// Two-sample unbiased estimate of the loss: per player, the inner product of
/// two independently sampled projected regularized gradients, weighted by
/// eta. Individual estimates may be negative; clamping would bias them.
pub fn estimate_loss(
    game: &NormalFormGame,
    x: &JointStrategy,
    cfg: &LossConfig,
    kind: EstimatorKind,
    rng: &mut CounterRng,
) -> Result<LossEstimate> {
    if cfg.etas.len() != game.num_players() {
        return Err(Error::validation(
            "config and game disagree on player count",
        ));
    }
    let draws_before = rng.draws();
    let mut value = 0.0;
    let mut payoff_queries = 0;
    for k in 0..game.num_players() {
        let (g1, g2, cost) = match kind {
            EstimatorKind::Exact => {
                // Both "samples" are the same deterministic marginalization;
                // computing it once matches the stated query cost.
                let e = sample_gradient(game, x, k, kind, rng)?;
                let cost = e.payoff_queries;
                (e.values.clone(), e.values, cost)
            }
            _ => {
                let e1 = sample_gradient(game, x, k, kind, rng)?;
                let e2 = sample_gradient(game, x, k, kind, rng)?;
                let cost = e1.payoff_queries + e2.payoff_queries;
                (e1.values, e2.values, cost)
            }
        };
        payoff_queries += cost;
        let mut p1 = g1;
        let mut p2 = g2;
        if cfg.tau > 0.0 {
            let ent = entropy_gradient(x.player(k).probs());
            for i in 0..p1.len() {
                p1[i] += cfg.tau * ent[i];
                p2[i] += cfg.tau * ent[i];
            }
        }
        project_tangent_mut(&mut p1);
        project_tangent_mut(&mut p2);
        value += cfg.etas[k] * p1.iter().zip(&p2).map(|(a, b)| a * b).sum::<f64>();
    }
    Ok(LossEstimate {
        value,
        payoff_queries,
        rng_draws_consumed: rng.draws() - draws_before,
    })
}

/// One-draw unbiased estimate of the bimatrix approximation between players
/// k and l: all other players sample their actions once.
pub fn sample_bimatrix(
    game: &NormalFormGame,
    x: &JointStrategy,
    k: usize,
    l: usize,
    rng: &mut CounterRng,
) -> Result<Vec<f64>> {
    if k == l {
        return Err(Error::InvalidPair(
            "bimatrix estimate needs two distinct players".into(),
        ));
    }
    let n = game.num_players();
    let (mk, ml) = (game.action_counts()[k], game.action_counts()[l]);
    let mut joint = vec![0usize; n];
    for j in 0..n {
        if j != k && j != l {
            joint[j] = rng.sample_categorical(x.player(j).probs());
        }
    }
    let mut h = vec![0.0; mk * ml];
    for a in 0..mk {
        joint[k] = a;
        for b in 0..ml {
            joint[l] = b;
            h[a * ml + b] = game.payoff(k, &joint);
        }
    }
    Ok(h)
}

/// Unbiased estimate of the loss gradient for every player: sampled bimatrix
/// factors paired with independently sampled projected regularized gradients.
/// The diagonal entropy factor is deterministic.
pub fn estimate_loss_gradient(
    game: &NormalFormGame,
    x: &JointStrategy,
    cfg: &LossConfig,
    kind: EstimatorKind,
    rng: &mut CounterRng,
) -> Result<Vec<Vec<f64>>> {
    if cfg.etas.len() != game.num_players() {
        return Err(Error::validation(
            "config and game disagree on player count",
        ));
    }
    let n = game.num_players();
    // One gradient estimate per player; the bimatrix factors below consume
    // disjoint draws from the same stream, so the two factors of each
    // product are independent.
    let mut projected = Vec::with_capacity(n);
    for k in 0..n {
        let mut est = sample_gradient(game, x, k, kind, rng)?.values;
        if cfg.tau > 0.0 {
            for (v, e) in est.iter_mut().zip(entropy_gradient(x.player(k).probs())) {
                *v += cfg.tau * e;
            }
        }
        project_tangent_mut(&mut est);
        projected.push(est);
    }
    let mut grads = Vec::with_capacity(n);
    for l in 0..n {
        let ml = game.action_counts()[l];
        let mut g = vec![0.0; ml];
        for (k, v) in projected.iter().enumerate() {
            if k == l {
                if cfg.tau > 0.0 {
                    for (j, gj) in g.iter_mut().enumerate() {
                        *gj += cfg.etas[l] * (-cfg.tau) * v[j] / x.player(l)[j];
                    }
                }
            } else {
                let h = match kind {
                    EstimatorKind::Exact => game.bimatrix_approx(x, k, l)?,
                    _ => sample_bimatrix(game, x, k, l, rng)?,
                };
                let mk = game.action_counts()[k];
                for j in 0..ml {
                    let mut acc = 0.0;
                    for (a, va) in v.iter().enumerate().take(mk) {
                        acc += h[a * ml + j] * va;
                    }
                    g[j] += cfg.etas[k] * acc;
                }
            }
        }
        g.iter_mut().for_each(|v| *v *= 2.0);
        grads.push(g);
    }
    Ok(grads)
}

/// Welford running moments with a Hoeffding half-width.
#[derive(Debug, Clone, Copy)]
pub struct EstimatorStats {
    pub count: u64,
    pub mean: f64,
    m2: f64,
    /// Range of a single observation, for the Hoeffding bound.
    pub range: f64,
    /// Confidence parameter delta.
    pub delta: f64,
}

impl EstimatorStats {
    pub fn new(range: f64, delta: f64) -> Self {
        EstimatorStats {
            count: 0,
            mean: 0.0,
            m2: 0.0,
            range,
            delta,
        }
    }

    pub fn push(&mut self, value: f64) {
        self.count += 1;
        let delta = value - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (value - self.mean);
    }

    /// Sample variance (0 with fewer than two samples).
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }

    /// Hoeffding half-width: range sqrt(ln(2/delta) / (2 count)).
    pub fn half_width(&self) -> f64 {
        if self.count == 0 {
            f64::INFINITY
        } else {
            self.range * ((2.0 / self.delta).ln() / (2.0 * self.count as f64)).sqrt()
        }
    }
}

/// Functional wrapper over [`EstimatorStats::push`].
pub fn accumulate(mut stats: EstimatorStats, value: f64) -> EstimatorStats {
    stats.push(value);
    stats
}
