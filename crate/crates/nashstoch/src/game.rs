//! Normal-form games: dense payoff tensors, mixed strategies, exact expected
//! utilities, player gradients, and low-order (bimatrix / three-tensor)
//! approximations obtained by marginalizing out background players.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Tolerance on the sum of a mixed strategy.
pub const SIMPLEX_SUM_TOL: f64 = 1e-9;
/// Entries below this are rejected outright; entries in [-NEG_TOL, 0) are clamped to 0.
pub const SIMPLEX_NEG_TOL: f64 = 1e-12;

/// Affine map `normalized = (raw - min) / (max - min)` recorded per player
/// when payoffs are normalized into [0, 1]. A constant tensor is mapped to
/// all 0.5 and recorded with `max == min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PayoffScaling {
    pub min: f64,
    pub max: f64,
}

impl PayoffScaling {
    /// Applies the recorded map to a raw payoff.
    pub fn apply(&self, raw: f64) -> f64 {
        if self.max > self.min {
            (raw - self.min) / (self.max - self.min)
        } else {
            0.5
        }
    }
}

/// An n-player normal-form game with one dense payoff tensor per player.
///
/// Tensors are stored row-major over the joint action space `(m_1, ..., m_n)`
/// (last player's action varies fastest). All payoffs lie in [0, 1]; games
/// with raw payoffs enter through [`NormalFormGame::from_raw`].
#[derive(Debug, Clone, PartialEq)]
pub struct NormalFormGame {
    action_counts: Vec<usize>,
    strides: Vec<usize>,
    tensors: Vec<Vec<f64>>,
    player_labels: Option<Vec<String>>,
    action_labels: Option<Vec<Vec<String>>>,
}

impl NormalFormGame {
    /// Builds a game from payoffs already in [0, 1].
    pub fn new(action_counts: Vec<usize>, tensors: Vec<Vec<f64>>) -> Result<Self> {
        let n = action_counts.len();
        if n < 2 {
            return Err(Error::validation(format!(
                "a game needs at least 2 players, got {n}"
            )));
        }
        if let Some(m) = action_counts.iter().find(|&&m| m < 2) {
            return Err(Error::validation(format!(
                "every player needs at least 2 actions, got {m}"
            )));
        }
        if tensors.len() != n {
            return Err(Error::validation(format!(
                "expected {n} payoff tensors, got {}",
                tensors.len()
            )));
        }
        let size: usize = action_counts.iter().product();
        for (k, t) in tensors.iter().enumerate() {
            if t.len() != size {
                return Err(Error::validation(format!(
                    "tensor {k} has {} entries, expected {size}",
                    t.len()
                )));
            }
            if let Some(v) = t
                .iter()
                .find(|v| !v.is_finite() || **v < -1e-12 || **v > 1.0 + 1e-12)
            {
                return Err(Error::validation(format!(
                    "tensor {k} contains payoff {v} outside [0, 1]"
                )));
            }
        }
        let strides = strides_for(&action_counts);
        Ok(NormalFormGame {
            action_counts,
            strides,
            tensors,
            player_labels: None,
            action_labels: None,
        })
    }

    /// Normalizes raw payoffs into [0, 1] per player (min -> 0, max -> 1,
    /// constant tensor -> all 0.5) and records the affine maps used.
    pub fn from_raw(
        action_counts: Vec<usize>,
        raw_tensors: Vec<Vec<f64>>,
    ) -> Result<(Self, Vec<PayoffScaling>)> {
        for (k, t) in raw_tensors.iter().enumerate() {
            if t.iter().any(|v| !v.is_finite()) {
                return Err(Error::validation(format!(
                    "tensor {k} contains a non-finite payoff"
                )));
            }
        }
        let mut scalings = Vec::with_capacity(raw_tensors.len());
        let mut tensors = Vec::with_capacity(raw_tensors.len());
        for raw in raw_tensors {
            let min = raw.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = raw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let scaling = PayoffScaling { min, max };
            tensors.push(raw.iter().map(|&v| scaling.apply(v)).collect());
            scalings.push(scaling);
        }
        let game = NormalFormGame::new(action_counts, tensors)?;
        Ok((game, scalings))
    }

    pub fn with_labels(
        mut self,
        player_labels: Option<Vec<String>>,
        action_labels: Option<Vec<Vec<String>>>,
    ) -> Self {
        self.player_labels = player_labels;
        self.action_labels = action_labels;
        self
    }

    pub fn num_players(&self) -> usize {
        self.action_counts.len()
    }

    pub fn action_counts(&self) -> &[usize] {
        &self.action_counts
    }

    /// Average action count over players.
    pub fn mean_actions(&self) -> f64 {
        self.action_counts.iter().sum::<usize>() as f64 / self.num_players() as f64
    }

    /// Maximum action count over players.
    pub fn max_actions(&self) -> usize {
        *self.action_counts.iter().max().unwrap()
    }

    /// Total number of strategy coordinates (sum of action counts).
    pub fn total_actions(&self) -> usize {
        self.action_counts.iter().sum()
    }

    pub fn tensor(&self, player: usize) -> &[f64] {
        &self.tensors[player]
    }

    pub fn player_labels(&self) -> Option<&[String]> {
        self.player_labels.as_deref()
    }

    pub fn action_labels(&self) -> Option<&[Vec<String>]> {
        self.action_labels.as_deref()
    }

    /// Flat row-major index of a joint action.
    pub fn flat_index(&self, joint: &[usize]) -> usize {
        joint.iter().zip(&self.strides).map(|(a, s)| a * s).sum()
    }

    /// Payoff for `player` at a joint pure action.
    pub fn payoff(&self, player: usize, joint: &[usize]) -> f64 {
        self.tensors[player][self.flat_index(joint)]
    }

    fn check_player(&self, k: usize) -> Result<()> {
        if k >= self.num_players() {
            return Err(Error::validation(format!(
                "player index {k} out of range for {}-player game",
                self.num_players()
            )));
        }
        Ok(())
    }

    fn check_profile(&self, x: &JointStrategy) -> Result<()> {
        if x.strategies.len() != self.num_players() {
            return Err(Error::validation(format!(
                "profile has {} strategies, game has {} players",
                x.strategies.len(),
                self.num_players()
            )));
        }
        for (k, (s, &m)) in x.strategies.iter().zip(&self.action_counts).enumerate() {
            if s.len() != m {
                return Err(Error::validation(format!(
                    "strategy {k} has length {}, expected {m}",
                    s.len()
                )));
            }
        }
        Ok(())
    }

    /// Exact expected payoff of `player` at the mixed profile `x`.
    pub fn utility(&self, x: &JointStrategy, player: usize) -> Result<f64> {
        self.check_player(player)?;
        self.check_profile(x)?;
        Ok(self.utility_unchecked(x, player))
    }

    pub(crate) fn utility_unchecked(&self, x: &JointStrategy, player: usize) -> f64 {
        let mut total = 0.0;
        let mut joint = vec![0usize; self.num_players()];
        for flat in 0..self.tensors[player].len() {
            let mut w = 1.0;
            for (j, &a) in joint.iter().enumerate() {
                w *= x.strategies[j].probs[a];
            }
            total += w * self.tensors[player][flat];
            advance(&mut joint, &self.action_counts);
        }
        total
    }

    /// Player `k`'s utility gradient: entry `l` is the expected payoff of pure
    /// action `l` against the opponents' mixed strategies.
    pub fn player_gradient(&self, x: &JointStrategy, k: usize) -> Result<Vec<f64>> {
        self.check_player(k)?;
        self.check_profile(x)?;
        Ok(self.player_gradient_unchecked(x, k))
    }

    pub(crate) fn player_gradient_unchecked(&self, x: &JointStrategy, k: usize) -> Vec<f64> {
        let mut grad = vec![0.0; self.action_counts[k]];
        let mut joint = vec![0usize; self.num_players()];
        for flat in 0..self.tensors[k].len() {
            let mut w = 1.0;
            for (j, &a) in joint.iter().enumerate() {
                if j != k {
                    w *= x.strategies[j].probs[a];
                }
            }
            grad[joint[k]] += w * self.tensors[k][flat];
            advance(&mut joint, &self.action_counts);
        }
        grad
    }

    /// Bimatrix approximation between players `k` and `l`: all other players'
    /// strategies marginalized out. Returned row-major with shape m_k x m_l.
    pub fn bimatrix_approx(&self, x: &JointStrategy, k: usize, l: usize) -> Result<Vec<f64>> {
        self.check_player(k)?;
        self.check_player(l)?;
        if k == l {
            return Err(Error::InvalidPair(format!(
                "bimatrix approximation needs two distinct players, got k = l = {k}"
            )));
        }
        self.check_profile(x)?;
        Ok(self.bimatrix_unchecked(x, k, l))
    }

    pub(crate) fn bimatrix_unchecked(&self, x: &JointStrategy, k: usize, l: usize) -> Vec<f64> {
        let (mk, ml) = (self.action_counts[k], self.action_counts[l]);
        let mut h = vec![0.0; mk * ml];
        let mut joint = vec![0usize; self.num_players()];
        for flat in 0..self.tensors[k].len() {
            let mut w = 1.0;
            for (j, &a) in joint.iter().enumerate() {
                if j != k && j != l {
                    w *= x.strategies[j].probs[a];
                }
            }
            h[joint[k] * ml + joint[l]] += w * self.tensors[k][flat];
            advance(&mut joint, &self.action_counts);
        }
        h
    }

    /// Three-player tensor approximation for `(k, l, q)` pairwise distinct,
    /// row-major with shape m_k x m_l x m_q. Unavailable for 2-player games.
    pub fn three_tensor_approx(
        &self,
        x: &JointStrategy,
        k: usize,
        l: usize,
        q: usize,
    ) -> Result<Vec<f64>> {
        if self.num_players() < 3 {
            return Err(Error::InvalidPair(
                "three-tensor approximation needs at least 3 players".into(),
            ));
        }
        self.check_player(k)?;
        self.check_player(l)?;
        self.check_player(q)?;
        if k == l || k == q || l == q {
            return Err(Error::InvalidPair(format!(
                "three-tensor approximation needs pairwise distinct players, got ({k}, {l}, {q})"
            )));
        }
        self.check_profile(x)?;
        let (mk, ml, mq) = (
            self.action_counts[k],
            self.action_counts[l],
            self.action_counts[q],
        );
        let mut t = vec![0.0; mk * ml * mq];
        let mut joint = vec![0usize; self.num_players()];
        for flat in 0..self.tensors[k].len() {
            let mut w = 1.0;
            for (j, &a) in joint.iter().enumerate() {
                if j != k && j != l && j != q {
                    w *= x.strategies[j].probs[a];
                }
            }
            t[(joint[k] * ml + joint[l]) * mq + joint[q]] += w * self.tensors[k][flat];
            advance(&mut joint, &self.action_counts);
        }
        Ok(t)
    }
}

fn strides_for(action_counts: &[usize]) -> Vec<usize> {
    let n = action_counts.len();
    let mut strides = vec![1usize; n];
    for j in (0..n - 1).rev() {
        strides[j] = strides[j + 1] * action_counts[j + 1];
    }
    strides
}

/// Odometer step over the joint action space (last player fastest).
#[inline]
pub(crate) fn advance(joint: &mut [usize], counts: &[usize]) {
    for j in (0..joint.len()).rev() {
        joint[j] += 1;
        if joint[j] < counts[j] {
            return;
        }
        joint[j] = 0;
    }
}

/// A probability vector over one player's actions.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedStrategy {
    probs: Vec<f64>,
}

impl MixedStrategy {
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::validation(
                "a mixed strategy needs at least 2 actions".to_string(),
            ));
        }
        for p in probs.iter_mut() {
            if !p.is_finite() || *p < -SIMPLEX_NEG_TOL {
                return Err(Error::validation(format!(
                    "probability {p} is negative beyond tolerance"
                )));
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_SUM_TOL {
            return Err(Error::validation(format!(
                "probabilities sum to {sum}, expected 1"
            )));
        }
        Ok(MixedStrategy { probs })
    }

    pub fn uniform(m: usize) -> Self {
        MixedStrategy {
            probs: vec![1.0 / m as f64; m],
        }
    }

    /// Wraps a raw vector without simplex validation. Used internally for
    /// finite-difference probes that step off the simplex.
    pub(crate) fn from_probs_unchecked(probs: Vec<f64>) -> Self {
        MixedStrategy { probs }
    }

    pub fn pure(m: usize, action: usize) -> Self {
        let mut probs = vec![0.0; m];
        probs[action] = 1.0;
        MixedStrategy { probs }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn min_prob(&self) -> f64 {
        self.probs.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

impl std::ops::Index<usize> for MixedStrategy {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.probs[i]
    }
}

/// One mixed strategy per player: the solver iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct JointStrategy {
    pub strategies: Vec<MixedStrategy>,
}

impl JointStrategy {
    pub fn new(strategies: Vec<MixedStrategy>) -> Self {
        JointStrategy { strategies }
    }

    pub fn uniform(game: &NormalFormGame) -> Self {
        JointStrategy {
            strategies: game
                .action_counts()
                .iter()
                .map(|&m| MixedStrategy::uniform(m))
                .collect(),
        }
    }

    pub fn pure(game: &NormalFormGame, joint: &[usize]) -> Self {
        JointStrategy {
            strategies: game
                .action_counts()
                .iter()
                .zip(joint)
                .map(|(&m, &a)| MixedStrategy::pure(m, a))
                .collect(),
        }
    }

    pub fn num_players(&self) -> usize {
        self.strategies.len()
    }

    pub fn player(&self, k: usize) -> &MixedStrategy {
        &self.strategies[k]
    }

    /// Smallest probability anywhere in the profile.
    pub fn min_prob(&self) -> f64 {
        self.strategies
            .iter()
            .map(|s| s.min_prob())
            .fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;

    pub(crate) fn random_profile(game: &NormalFormGame, rng: &mut CounterRng) -> JointStrategy {
        let strategies = game
            .action_counts()
            .iter()
            .map(|&m| {
                let mut v: Vec<f64> = (0..m).map(|_| rng.next_f64() + 1e-3).collect();
                let sum: f64 = v.iter().sum();
                v.iter_mut().for_each(|p| *p /= sum);
                MixedStrategy::new(v).unwrap()
            })
            .collect();
        JointStrategy::new(strategies)
    }

    fn random_game(n: usize, m: usize, seed: u64) -> NormalFormGame {
        let mut rng = CounterRng::new(seed);
        let size = m.pow(n as u32);
        let tensors = (0..n)
            .map(|_| (0..size).map(|_| rng.next_f64()).collect())
            .collect();
        NormalFormGame::new(vec![m; n], tensors).unwrap()
    }

    fn matching_pennies() -> NormalFormGame {
        // Raw +-1 payoffs mapped to [0, 1] by (p + 1) / 2.
        let row = vec![1.0, 0.0, 0.0, 1.0];
        let col = vec![0.0, 1.0, 1.0, 0.0];
        NormalFormGame::new(vec![2, 2], vec![row, col]).unwrap()
    }

    fn prisoners_dilemma() -> NormalFormGame {
        let row_raw = vec![-1.0, -3.0, 0.0, -2.0];
        let col_raw = vec![-1.0, 0.0, -3.0, -2.0];
        let (g, _) = NormalFormGame::from_raw(vec![2, 2], vec![row_raw, col_raw]).unwrap();
        g
    }

    fn chicken() -> NormalFormGame {
        let row_raw = vec![0.0, -1.0, 1.0, -3.0];
        let col_raw = vec![0.0, 1.0, -1.0, -3.0];
        let (g, _) = NormalFormGame::from_raw(vec![2, 2], vec![row_raw, col_raw]).unwrap();
        g
    }

    #[test]
    fn matching_pennies_uniform_utility_is_half() {
        let g = matching_pennies();
        let x = JointStrategy::uniform(&g);
        for k in 0..2 {
            assert!((g.utility(&x, k).unwrap() - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn pd_defect_defect_utility() {
        // Raw -2 mapped by (p + 3) / 3.
        let g = prisoners_dilemma();
        let x = JointStrategy::pure(&g, &[1, 1]);
        assert!((g.utility(&x, 0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn pure_profile_utility_is_tensor_entry() {
        let g = random_game(3, 2, 5);
        for joint in [[0, 1, 0], [1, 1, 1], [0, 0, 1]] {
            let x = JointStrategy::pure(&g, &joint);
            for k in 0..3 {
                let direct = g.payoff(k, &joint);
                assert!((g.utility(&x, k).unwrap() - direct).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rps_uniform_gradient_is_half() {
        let row_raw = vec![0.0, -1.0, 1.0, 1.0, 0.0, -1.0, -1.0, 1.0, 0.0];
        let col_raw: Vec<f64> = row_raw.iter().map(|v| -v).collect();
        let (g, _) = NormalFormGame::from_raw(vec![3, 3], vec![row_raw, col_raw]).unwrap();
        let x = JointStrategy::uniform(&g);
        let grad = g.player_gradient(&x, 0).unwrap();
        for v in grad {
            assert!((v - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn chicken_gradient_at_mixed_opponent() {
        // Column plays (2/3, 1/3); the row gradient is (2/3, 2/3), the
        // indifference point of the mixed equilibrium.
        let g = chicken();
        let x = JointStrategy::new(vec![
            MixedStrategy::uniform(2),
            MixedStrategy::new(vec![2.0 / 3.0, 1.0 / 3.0]).unwrap(),
        ]);
        let grad = g.player_gradient(&x, 0).unwrap();
        assert!((grad[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((grad[1] - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn two_player_gradient_is_matrix_vector_product() {
        let g = random_game(2, 4, 9);
        let mut rng = CounterRng::new(10);
        let x = random_profile(&g, &mut rng);
        let grad = g.player_gradient(&x, 0).unwrap();
        for a in 0..4 {
            let mut expect = 0.0;
            for b in 0..4 {
                expect += g.payoff(0, &[a, b]) * x.player(1)[b];
            }
            assert!((grad[a] - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn gradient_inner_product_recovers_utility() {
        for seed in 0..5u64 {
            let g = random_game(3, 3, 100 + seed);
            let mut rng = CounterRng::new(200 + seed);
            let x = random_profile(&g, &mut rng);
            for k in 0..3 {
                let grad = g.player_gradient(&x, k).unwrap();
                let dot: f64 = grad
                    .iter()
                    .zip(x.player(k).probs())
                    .map(|(a, b)| a * b)
                    .sum();
                let u = g.utility(&x, k).unwrap();
                assert!((dot - u).abs() <= 1e-12 * u.abs().max(1.0));
            }
        }
    }

    #[test]
    fn bimatrix_of_two_player_game_is_payoff_matrix() {
        let g = matching_pennies();
        let x = JointStrategy::uniform(&g);
        let h = g.bimatrix_approx(&x, 0, 1).unwrap();
        assert_eq!(h, g.tensor(0).to_vec());
    }

    #[test]
    fn bimatrix_with_pure_third_player_is_slice() {
        let g = random_game(3, 2, 17);
        let x = JointStrategy::new(vec![
            MixedStrategy::uniform(2),
            MixedStrategy::uniform(2),
            MixedStrategy::pure(2, 1),
        ]);
        let h = g.bimatrix_approx(&x, 0, 1).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                assert!((h[a * 2 + b] - g.payoff(0, &[a, b, 1])).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn bimatrix_matches_enumeration_oracle() {
        let g = random_game(3, 2, 23);
        let mut rng = CounterRng::new(24);
        let x = random_profile(&g, &mut rng);
        let h = g.bimatrix_approx(&x, 0, 2).unwrap();
        // Brute-force: sum over the middle player's actions weighted by probability.
        for a in 0..2 {
            for c in 0..2 {
                let mut expect = 0.0;
                for b in 0..2 {
                    expect += x.player(1)[b] * g.payoff(0, &[a, b, c]);
                }
                assert!((h[a * 2 + c] - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn bimatrix_contraction_recovers_gradient() {
        let g = random_game(4, 2, 31);
        let mut rng = CounterRng::new(32);
        let x = random_profile(&g, &mut rng);
        for k in 0..4 {
            let grad = g.player_gradient(&x, k).unwrap();
            for l in 0..4 {
                if l == k {
                    continue;
                }
                let h = g.bimatrix_approx(&x, k, l).unwrap();
                let ml = g.action_counts()[l];
                for (a, gv) in grad.iter().enumerate() {
                    let contracted: f64 = (0..ml).map(|b| h[a * ml + b] * x.player(l)[b]).sum();
                    assert!((contracted - gv).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn three_tensor_of_three_player_game_is_permuted_tensor() {
        let g = random_game(3, 2, 41);
        let x = JointStrategy::uniform(&g);
        let t = g.three_tensor_approx(&x, 1, 0, 2).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    // t is indexed (a_1, a_0, a_2).
                    assert!((t[(a * 2 + b) * 2 + c] - g.payoff(1, &[b, a, c])).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn three_tensor_contraction_recovers_bimatrix() {
        let g = random_game(4, 2, 43);
        let mut rng = CounterRng::new(44);
        let x = random_profile(&g, &mut rng);
        let h = g.bimatrix_approx(&x, 0, 1).unwrap();
        let t = g.three_tensor_approx(&x, 0, 1, 3).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                let contracted: f64 = (0..2)
                    .map(|c| t[(a * 2 + b) * 2 + c] * x.player(3)[c])
                    .sum();
                assert!((contracted - h[a * 2 + b]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn three_tensor_uniform_background_is_axis_mean() {
        let g = random_game(4, 2, 47);
        let x = JointStrategy::uniform(&g);
        let t = g.three_tensor_approx(&x, 0, 1, 2).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    let mean = (g.payoff(0, &[a, b, c, 0]) + g.payoff(0, &[a, b, c, 1])) / 2.0;
                    assert!((t[(a * 2 + b) * 2 + c] - mean).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn repeated_indices_rejected() {
        let g = random_game(3, 2, 53);
        let x = JointStrategy::uniform(&g);
        assert!(g.bimatrix_approx(&x, 1, 1).is_err());
        assert!(g.three_tensor_approx(&x, 0, 1, 1).is_err());
        let g2 = matching_pennies();
        let x2 = JointStrategy::uniform(&g2);
        assert!(g2.three_tensor_approx(&x2, 0, 1, 0).is_err());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let g = matching_pennies();
        let x = JointStrategy::new(vec![MixedStrategy::uniform(3), MixedStrategy::uniform(2)]);
        assert!(matches!(g.utility(&x, 0), Err(Error::Validation(_))));
    }

    #[test]
    fn normalization_maps_chicken_payoffs() {
        // Raw entries {0, -1, 1, -3} map by (p + 3) / 4.
        let (g, scalings) = NormalFormGame::from_raw(
            vec![2, 2],
            vec![vec![0.0, -1.0, 1.0, -3.0], vec![0.0, 1.0, -1.0, -3.0]],
        )
        .unwrap();
        assert_eq!(g.tensor(0), &[0.75, 0.5, 1.0, 0.0]);
        assert_eq!(
            scalings[0],
            PayoffScaling {
                min: -3.0,
                max: 1.0
            }
        );
    }

    #[test]
    fn normalization_keeps_unit_interval_tensor() {
        let t = vec![0.0, 0.25, 0.75, 1.0];
        let (g, _) = NormalFormGame::from_raw(vec![2, 2], vec![t.clone(), t.clone()]).unwrap();
        assert_eq!(g.tensor(0), t.as_slice());
    }

    #[test]
    fn constant_tensor_normalizes_to_half() {
        let (g, _) =
            NormalFormGame::from_raw(vec![2, 2], vec![vec![3.0; 4], vec![3.0; 4]]).unwrap();
        assert!(g.tensor(0).iter().all(|&v| v == 0.5));
    }

    #[test]
    fn mixed_strategy_validation() {
        assert!(MixedStrategy::new(vec![0.5, 0.5]).is_ok());
        assert!(MixedStrategy::new(vec![0.6, 0.5]).is_err());
        assert!(MixedStrategy::new(vec![1.0 + 1e-13, -1e-13]).is_ok());
        assert!(MixedStrategy::new(vec![1.1, -0.1]).is_err());
    }
}
