//! Constructors for the games used throughout: classic matrix games, Colonel
//! Blotto, symmetric two-action games, random games, and polymatrix games.

use crate::error::{Error, Result};
use crate::game::{NormalFormGame, PayoffScaling};
use crate::rng::CounterRng;

/// Classic two-player matrix games, built from their standard raw payoff
/// matrices and normalized per player into [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassicGame {
    Rps,
    Chicken,
    MatchingPennies,
    ModifiedShapley,
    PrisonersDilemma,
}

impl ClassicGame {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "rps" => Some(ClassicGame::Rps),
            "chicken" => Some(ClassicGame::Chicken),
            "matching_pennies" => Some(ClassicGame::MatchingPennies),
            "modified_shapley" => Some(ClassicGame::ModifiedShapley),
            "prisoners_dilemma" => Some(ClassicGame::PrisonersDilemma),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ClassicGame::Rps => "rps",
            ClassicGame::Chicken => "chicken",
            ClassicGame::MatchingPennies => "matching_pennies",
            ClassicGame::ModifiedShapley => "modified_shapley",
            ClassicGame::PrisonersDilemma => "prisoners_dilemma",
        }
    }

    /// Raw (row player, column player) payoff matrices in row-major order.
    pub fn raw_matrices(&self) -> (usize, Vec<f64>, Vec<f64>) {
        match self {
            ClassicGame::Rps => (
                3,
                vec![0.0, -1.0, 1.0, 1.0, 0.0, -1.0, -1.0, 1.0, 0.0],
                vec![0.0, 1.0, -1.0, -1.0, 0.0, 1.0, 1.0, -1.0, 0.0],
            ),
            ClassicGame::Chicken => (2, vec![0.0, -1.0, 1.0, -3.0], vec![0.0, 1.0, -1.0, -3.0]),
            ClassicGame::MatchingPennies => {
                (2, vec![1.0, -1.0, -1.0, 1.0], vec![-1.0, 1.0, 1.0, -1.0])
            }
            ClassicGame::ModifiedShapley => (
                3,
                vec![1.0, 0.0, 0.5, 0.5, 1.0, 0.0, 0.0, 0.5, 1.0],
                vec![-0.5, 1.0, 0.0, 0.0, -0.5, 1.0, 1.0, 0.0, -0.5],
            ),
            ClassicGame::PrisonersDilemma => {
                (2, vec![-1.0, -3.0, 0.0, -2.0], vec![-1.0, 0.0, -3.0, -2.0])
            }
        }
    }
}

/// Builds one of the classic matrix games, normalized into [0, 1].
pub fn classic(which: ClassicGame) -> NormalFormGame {
    let (m, row, col) = which.raw_matrices();
    let (game, _) = NormalFormGame::from_raw(vec![m, m], vec![row, col])
        .expect("classic matrices are well-formed");
    game
}

/// Largest allowed per-player action count for generated games.
pub const MAX_ACTIONS: usize = 4096;
/// Largest allowed joint action space for generated games.
pub const MAX_JOINT_ACTIONS: usize = 100_000_000;

/// Colonel Blotto: each player allocates `coins` across `fields`; a field is
/// won by strict plurality and tied fields split their point equally among
/// the tied leaders. The raw payoff is the fraction of field-points won,
/// which is then normalized per player like every other game.
pub fn blotto(players: usize, coins: usize, fields: usize) -> Result<NormalFormGame> {
    let (m, tensors) = blotto_raw_fractions(players, coins, fields)?;
    let (game, _) = NormalFormGame::from_raw(vec![m; players], tensors)?;
    Ok(game)
}

/// Raw (pre-normalization) Blotto field-point fractions, exposed so the
/// constant-sum property can be checked directly.
pub fn blotto_raw_fractions(
    players: usize,
    coins: usize,
    fields: usize,
) -> Result<(usize, Vec<Vec<f64>>)> {
    if players < 2 {
        return Err(Error::validation("blotto needs at least 2 players"));
    }
    if coins < 1 || fields < 2 {
        return Err(Error::validation(
            "blotto needs at least 1 coin and 2 fields",
        ));
    }
    let allocations = enumerate_allocations(coins, fields);
    let m = allocations.len();
    if m > MAX_ACTIONS {
        return Err(Error::Size(format!(
            "blotto({players}, {coins}, {fields}) has {m} actions per player, cap is {MAX_ACTIONS}"
        )));
    }
    let size = m
        .checked_pow(players as u32)
        .filter(|&s| s <= MAX_JOINT_ACTIONS)
        .ok_or_else(|| {
            Error::Size(format!(
                "blotto joint action space {m}^{players} exceeds the cap of {MAX_JOINT_ACTIONS}"
            ))
        })?;

    let counts = vec![m; players];
    let mut tensors = vec![vec![0.0; size]; players];
    let mut joint = vec![0usize; players];
    for flat in 0..size {
        let shares = field_shares(&joint, &allocations, players, fields);
        for (k, tensor) in tensors.iter_mut().enumerate() {
            tensor[flat] = shares[k] / fields as f64;
        }
        crate::game::advance(&mut joint, &counts);
    }
    Ok((m, tensors))
}

fn field_shares(
    joint: &[usize],
    allocations: &[Vec<usize>],
    players: usize,
    fields: usize,
) -> Vec<f64> {
    let mut shares = vec![0.0; players];
    for f in 0..fields {
        let coins: Vec<usize> = (0..players).map(|k| allocations[joint[k]][f]).collect();
        let best = *coins.iter().max().unwrap();
        let leaders: Vec<usize> = (0..players).filter(|&k| coins[k] == best).collect();
        let share = 1.0 / leaders.len() as f64;
        for k in leaders {
            shares[k] += share;
        }
    }
    shares
}

/// All ways to place `coins` identical coins on `fields` ordered fields,
/// in lexicographic order.
pub fn enumerate_allocations(coins: usize, fields: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![0usize; fields];
    fill_allocations(coins, 0, &mut current, &mut out);
    out
}

fn fill_allocations(
    remaining: usize,
    field: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if field == current.len() - 1 {
        current[field] = remaining;
        out.push(current.clone());
        return;
    }
    for c in 0..=remaining {
        current[field] = c;
        fill_allocations(remaining - c, field + 1, current, out);
    }
}

/// A symmetric n-player, 2-action game defined by 2n scalars:
/// `coeffs[a][c]` is the payoff for playing action `a` when `c` of the n-1
/// background players play action 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTwoActionGame {
    num_players: usize,
    coeffs: [Vec<f64>; 2],
}

impl SymmetricTwoActionGame {
    pub fn new(coeffs_action0: Vec<f64>, coeffs_action1: Vec<f64>) -> Result<Self> {
        let n = coeffs_action0.len();
        if n < 2 || coeffs_action1.len() != n {
            return Err(Error::validation(format!(
                "coefficient table must be 2 x n with n >= 2, got rows of {} and {}",
                coeffs_action0.len(),
                coeffs_action1.len()
            )));
        }
        Ok(SymmetricTwoActionGame {
            num_players: n,
            coeffs: [coeffs_action0, coeffs_action1],
        })
    }

    pub fn num_players(&self) -> usize {
        self.num_players
    }

    /// Payoff for playing `action` when `ones` background players play action 1.
    pub fn coeff(&self, action: usize, ones: usize) -> f64 {
        self.coeffs[action][ones]
    }
}

/// The 7-player, 2-action symmetric game evaluated with the bandit solver.
pub fn seven_player_symmetric() -> SymmetricTwoActionGame {
    SymmetricTwoActionGame::new(
        vec![
            0.09906873, 0.0, 0.23116037, 0.0, 0.62743528, 0.0, 0.19813746,
        ],
        vec![0.0, 0.33022909, 0.0, 0.03302291, 0.0, 0.62743528, 0.0],
    )
    .expect("static coefficients are well-formed")
}

/// Expands a symmetric two-action game to normal form. The payoff for player
/// k depends only on k's own action and how many opponents play action 1, so
/// the result is invariant under permutations of the opponents.
pub fn expand_symmetric(sym: &SymmetricTwoActionGame) -> Result<NormalFormGame> {
    let n = sym.num_players();
    let size = 1usize << n;
    let mut tensors = vec![vec![0.0; size]; n];
    let counts = vec![2usize; n];
    let mut joint = vec![0usize; n];
    for flat in 0..size {
        let total_ones: usize = joint.iter().sum();
        for (k, tensor) in tensors.iter_mut().enumerate() {
            let background_ones = total_ones - joint[k];
            tensor[flat] = sym.coeff(joint[k], background_ones);
        }
        crate::game::advance(&mut joint, &counts);
    }
    let (game, _) = NormalFormGame::from_raw(counts, tensors)?;
    Ok(game)
}

/// A random game with i.i.d. uniform [0, 1] payoffs. Deterministic in the
/// seed: entry `i` of tensor `k` is draw `i` of counter stream `k`.
pub fn random_game(action_counts: &[usize], seed: u64) -> Result<NormalFormGame> {
    let n = action_counts.len();
    if n < 2 || action_counts.iter().any(|&m| m < 2) {
        return Err(Error::validation(
            "random game needs n >= 2 players with m_k >= 2 actions",
        ));
    }
    let size: usize = action_counts.iter().product();
    let root = CounterRng::new(seed);
    let tensors = (0..n)
        .map(|k| {
            let mut stream = root.fork(k as u64);
            (0..size).map(|_| stream.next_f64()).collect()
        })
        .collect();
    NormalFormGame::new(action_counts.to_vec(), tensors)
}

/// A polymatrix game: player k's utility is the sum over opponents l of the
/// bimatrix payoff x_k' P^k_{kl} x_l.
#[derive(Debug, Clone, PartialEq)]
pub struct PolymatrixGame {
    action_counts: Vec<usize>,
    /// pair_matrices[k][l] is P^k_{kl} (row-major m_k x m_l); entry l == k unused.
    pair_matrices: Vec<Vec<Vec<f64>>>,
}

impl PolymatrixGame {
    pub fn new(action_counts: Vec<usize>, pair_matrices: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let n = action_counts.len();
        if n < 2 {
            return Err(Error::validation("polymatrix game needs n >= 2 players"));
        }
        if pair_matrices.len() != n {
            return Err(Error::validation(format!(
                "expected {n} rows of pair matrices, got {}",
                pair_matrices.len()
            )));
        }
        for k in 0..n {
            if pair_matrices[k].len() != n {
                return Err(Error::validation(format!(
                    "pair matrix row {k} has {} entries, expected {n}",
                    pair_matrices[k].len()
                )));
            }
            for l in 0..n {
                if l == k {
                    continue;
                }
                let want = action_counts[k] * action_counts[l];
                if pair_matrices[k][l].len() != want {
                    return Err(Error::validation(format!(
                        "pair matrix ({k}, {l}) has {} entries, expected {want}",
                        pair_matrices[k][l].len()
                    )));
                }
            }
        }
        Ok(PolymatrixGame {
            action_counts,
            pair_matrices,
        })
    }

    /// Random polymatrix game with i.i.d. uniform [0, 1] pair-matrix entries.
    pub fn random(action_counts: &[usize], seed: u64) -> Result<Self> {
        let n = action_counts.len();
        let root = CounterRng::new(seed);
        let mut pair_matrices = vec![vec![Vec::new(); n]; n];
        for (k, row) in pair_matrices.iter_mut().enumerate() {
            for (l, cell) in row.iter_mut().enumerate() {
                if l == k {
                    continue;
                }
                let mut stream = root.stream(&[k as u64, l as u64]);
                *cell = (0..action_counts[k] * action_counts[l])
                    .map(|_| stream.next_f64())
                    .collect();
            }
        }
        PolymatrixGame::new(action_counts.to_vec(), pair_matrices)
    }

    pub fn num_players(&self) -> usize {
        self.action_counts.len()
    }

    pub fn action_counts(&self) -> &[usize] {
        &self.action_counts
    }

    pub fn pair_matrix(&self, k: usize, l: usize) -> &[f64] {
        &self.pair_matrices[k][l]
    }

    /// Raw polymatrix utility of player k at a joint pure action.
    pub fn raw_payoff(&self, k: usize, joint: &[usize]) -> f64 {
        let mut total = 0.0;
        for l in 0..self.num_players() {
            if l == k {
                continue;
            }
            total += self.pair_matrices[k][l][joint[k] * self.action_counts[l] + joint[l]];
        }
        total
    }
}

/// Rejection-samples random polymatrix games (all players two actions) until
/// one possesses an interior equilibrium. A coarse strategy grid screens
/// candidates (some cell with every probability in [0.1, 0.9] must have
/// exploitability below 0.02); survivors are certified by descending the
/// loss from that cell to machine-precision zero at a strictly interior
/// point. Returns the accepted game and its seed.
pub fn random_polymatrix_with_interior_equilibrium(
    num_players: usize,
    start_seed: u64,
    max_tries: u64,
) -> Result<(PolymatrixGame, u64)> {
    use crate::game::{JointStrategy, MixedStrategy};
    let counts = vec![2usize; num_players];
    let grid = 21usize;
    for offset in 0..max_tries {
        let seed = start_seed + offset;
        let pg = PolymatrixGame::random(&counts, seed)?;
        let (game, _) = expand_polymatrix(&pg)?;
        let mut index = vec![0usize; num_players];
        let mut candidate: Option<JointStrategy> = None;
        let mut candidate_eps = f64::INFINITY;
        loop {
            let interior = index.iter().all(|&i| {
                let p = i as f64 / (grid - 1) as f64;
                (0.1 - 1e-12..=0.9 + 1e-12).contains(&p)
            });
            if interior {
                let x = JointStrategy::new(
                    index
                        .iter()
                        .map(|&i| {
                            let p = i as f64 / (grid - 1) as f64;
                            MixedStrategy::new(vec![p, 1.0 - p]).unwrap()
                        })
                        .collect(),
                );
                let (eps, _) = crate::loss::exploitability(&game, &x)?;
                if eps < candidate_eps {
                    candidate_eps = eps;
                    candidate = Some(x);
                }
            }
            let mut done = true;
            for i in (0..num_players).rev() {
                index[i] += 1;
                if index[i] < grid {
                    done = false;
                    break;
                }
                index[i] = 0;
            }
            if done {
                break;
            }
        }
        if candidate_eps >= 0.02 {
            continue;
        }
        // Certify: the convex loss must descend to (numerically) zero at a
        // strictly interior point.
        if let Some(start) = candidate {
            if interior_zero_loss_reachable(&game, start)? {
                return Ok((pg, seed));
            }
        }
    }
    Err(Error::numerical(format!(
        "no polymatrix game with an interior equilibrium found in {max_tries} tries from seed {start_seed}"
    )))
}

fn interior_zero_loss_reachable(
    game: &NormalFormGame,
    start: crate::game::JointStrategy,
) -> Result<bool> {
    use crate::calculus::loss_gradient;
    use crate::loss::{loss_value, LossConfig};
    use crate::simplex::{project_simplex_euclidean, project_tangent};
    let cfg = LossConfig::uniform(game.num_players(), 0.0);
    let mut x = start;
    for _ in 0..10_000 {
        let grads = loss_gradient(game, &x, &cfg)?;
        x = crate::game::JointStrategy::new(
            x.strategies
                .iter()
                .zip(&grads)
                .map(|(s, g)| {
                    let d = project_tangent(g);
                    let moved: Vec<f64> = s.probs().iter().zip(&d).map(|(p, di)| p - di).collect();
                    project_simplex_euclidean(&moved)
                })
                .collect(),
        );
    }
    let report = loss_value(game, &x, &cfg)?;
    Ok(report.loss < 1e-18 && x.min_prob() > 1e-3)
}

/// Expands a polymatrix game to normal form, normalizing per player and
/// recording the affine maps used so round trips can be checked.
pub fn expand_polymatrix(pg: &PolymatrixGame) -> Result<(NormalFormGame, Vec<PayoffScaling>)> {
    let n = pg.num_players();
    let counts = pg.action_counts().to_vec();
    let size: usize = counts.iter().product();
    let mut tensors = vec![vec![0.0; size]; n];
    let mut joint = vec![0usize; n];
    for flat in 0..size {
        for (k, tensor) in tensors.iter_mut().enumerate() {
            tensor[flat] = pg.raw_payoff(k, &joint);
        }
        crate::game::advance(&mut joint, &counts);
    }
    NormalFormGame::from_raw(counts, tensors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{JointStrategy, MixedStrategy};

    #[test]
    fn chicken_raw_matrix_matches_reference() {
        let (m, row, _) = ClassicGame::Chicken.raw_matrices();
        assert_eq!(m, 2);
        assert_eq!(row, vec![0.0, -1.0, 1.0, -3.0]);
    }

    #[test]
    fn modified_shapley_raw_matrix_matches_reference() {
        let (m, row, _) = ClassicGame::ModifiedShapley.raw_matrices();
        assert_eq!(m, 3);
        assert_eq!(row, vec![1.0, 0.0, 0.5, 0.5, 1.0, 0.0, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn prisoners_dilemma_raw_matrix_matches_reference() {
        let (_, row, _) = ClassicGame::PrisonersDilemma.raw_matrices();
        assert_eq!(row, vec![-1.0, -3.0, 0.0, -2.0]);
    }

    #[test]
    fn classic_games_are_normalized() {
        for which in [
            ClassicGame::Rps,
            ClassicGame::Chicken,
            ClassicGame::MatchingPennies,
            ClassicGame::ModifiedShapley,
            ClassicGame::PrisonersDilemma,
        ] {
            let g = classic(which);
            for k in 0..2 {
                let min = g.tensor(k).iter().cloned().fold(f64::INFINITY, f64::min);
                let max = g
                    .tensor(k)
                    .iter()
                    .cloned()
                    .fold(f64::NEG_INFINITY, f64::max);
                assert_eq!(min, 0.0, "{which:?}");
                assert_eq!(max, 1.0, "{which:?}");
            }
        }
    }

    #[test]
    fn blotto_action_counts_follow_combinatorics() {
        // C(c + f - 1, f - 1): 3 coins on 2 fields -> 4 allocations.
        let g = blotto(3, 3, 2).unwrap();
        assert_eq!(g.action_counts(), &[4, 4, 4]);
        let g = blotto(2, 1, 2).unwrap();
        assert_eq!(g.action_counts(), &[2, 2]);
    }

    #[test]
    fn blotto_identical_allocations_tie_everywhere() {
        let (m, raw) = blotto_raw_fractions(2, 4, 3).unwrap();
        for a in 0..m {
            let flat = a * m + a;
            assert!((raw[0][flat] - 0.5).abs() < 1e-15);
            assert!((raw[1][flat] - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn blotto_is_constant_sum_before_normalization() {
        let (m, raw) = blotto_raw_fractions(3, 2, 2).unwrap();
        for flat in 0..m * m * m {
            let total: f64 = (0..3).map(|k| raw[k][flat]).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn blotto_smallest_two_player_game_is_constant() {
        // With equal budgets and two fields no player can win both, so
        // blotto(2, 1, 2) ties every field-point split; every profile is an
        // equilibrium with zero exploitability.
        let (m, raw) = blotto_raw_fractions(2, 1, 2).unwrap();
        assert_eq!(m, 2);
        for flat in 0..4 {
            assert!((raw[0][flat] - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn blotto_is_symmetric_across_players() {
        let (m, raw) = blotto_raw_fractions(3, 3, 2).unwrap();
        // Swapping two players' allocations swaps their payoffs.
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let fwd = a * m * m + b * m + c;
                    let swapped = b * m * m + a * m + c;
                    assert!((raw[0][fwd] - raw[1][swapped]).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn seven_player_coefficients_match_reference() {
        let sym = seven_player_symmetric();
        assert_eq!(sym.coeff(0, 0), 0.09906873);
        assert_eq!(sym.coeff(0, 2), 0.23116037);
        assert_eq!(sym.coeff(0, 6), 0.19813746);
        assert_eq!(sym.coeff(1, 1), 0.33022909);
        assert_eq!(sym.coeff(1, 5), 0.62743528);
    }

    #[test]
    fn symmetric_expansion_depends_only_on_opponent_ones_count() {
        for n in 2..=5usize {
            let coeffs0: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin().abs()).collect();
            let coeffs1: Vec<f64> = (0..n).map(|i| (i as f64 * 1.3).cos().abs()).collect();
            let sym = SymmetricTwoActionGame::new(coeffs0, coeffs1).unwrap();
            let g = expand_symmetric(&sym).unwrap();
            let counts = vec![2usize; n];
            let mut joint = vec![0usize; n];
            for _ in 0..(1usize << n) {
                for k in 0..n {
                    let ones: usize = joint.iter().sum::<usize>() - joint[k];
                    // Any other joint action with the same own action and the
                    // same opponent ones-count must pay the same.
                    let mut other = vec![0usize; n];
                    other[k] = joint[k];
                    let mut placed = 0;
                    for j in (0..n).rev() {
                        if j != k && placed < ones {
                            other[j] = 1;
                            placed += 1;
                        }
                    }
                    assert!((g.payoff(k, &other) - g.payoff(k, &joint)).abs() < 1e-15);
                }
                crate::game::advance(&mut joint, &counts);
            }
        }
    }

    #[test]
    fn constant_symmetric_game_has_zero_exploitability_everywhere() {
        let sym = SymmetricTwoActionGame::new(vec![0.4; 3], vec![0.4; 3]).unwrap();
        let g = expand_symmetric(&sym).unwrap();
        let x = JointStrategy::new(vec![
            MixedStrategy::new(vec![0.2, 0.8]).unwrap(),
            MixedStrategy::uniform(2),
            MixedStrategy::pure(2, 0),
        ]);
        for k in 0..3 {
            let grad = g.player_gradient(&x, k).unwrap();
            let u = g.utility(&x, k).unwrap();
            let best = grad.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert!((best - u).abs() < 1e-15);
        }
    }

    #[test]
    fn two_player_symmetric_expansion_is_bimatrix() {
        let sym = SymmetricTwoActionGame::new(vec![0.3, 0.9], vec![0.1, 0.6]).unwrap();
        let g = expand_symmetric(&sym).unwrap();
        let raw = [
            [sym.coeff(0, 0), sym.coeff(0, 1)],
            [sym.coeff(1, 0), sym.coeff(1, 1)],
        ];
        let min = raw.iter().flatten().cloned().fold(f64::INFINITY, f64::min);
        let max = raw
            .iter()
            .flatten()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        for a0 in 0..2 {
            for a1 in 0..2 {
                let expect = (raw[a0][a1] - min) / (max - min);
                assert!((g.payoff(0, &[a0, a1]) - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn random_game_is_deterministic_in_seed() {
        let a = random_game(&[3, 3], 0).unwrap();
        let b = random_game(&[3, 3], 0).unwrap();
        assert_eq!(a, b);
        let c = random_game(&[3, 3], 1).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn random_game_payoffs_in_unit_interval() {
        let g = random_game(&[3, 3], 0).unwrap();
        assert_eq!(g.tensor(0).len(), 9);
        for k in 0..2 {
            assert!(g.tensor(k).iter().all(|&v| (0.0..=1.0).contains(&v)));
        }
    }

    #[test]
    fn two_player_polymatrix_is_the_bimatrix_game() {
        let pg = PolymatrixGame::random(&[2, 3], 7).unwrap();
        let (g, scalings) = expand_polymatrix(&pg).unwrap();
        for a in 0..2 {
            for b in 0..3 {
                let raw = pg.pair_matrix(0, 1)[a * 3 + b];
                assert!((g.payoff(0, &[a, b]) - scalings[0].apply(raw)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn zero_polymatrix_expands_to_constant_game() {
        let zeros = |mk: usize, ml: usize| vec![0.0; mk * ml];
        let pg = PolymatrixGame::new(
            vec![2, 2, 2],
            vec![
                vec![vec![], zeros(2, 2), zeros(2, 2)],
                vec![zeros(2, 2), vec![], zeros(2, 2)],
                vec![zeros(2, 2), zeros(2, 2), vec![]],
            ],
        )
        .unwrap();
        let (g, _) = expand_polymatrix(&pg).unwrap();
        assert!(g.tensor(0).iter().all(|&v| v == 0.5));
    }

    #[test]
    fn polymatrix_utilities_match_pairwise_sum_under_recorded_map() {
        let pg = PolymatrixGame::random(&[2, 2, 2], 99).unwrap();
        let (g, scalings) = expand_polymatrix(&pg).unwrap();
        let x = JointStrategy::new(vec![
            MixedStrategy::new(vec![0.3, 0.7]).unwrap(),
            MixedStrategy::new(vec![0.6, 0.4]).unwrap(),
            MixedStrategy::new(vec![0.5, 0.5]).unwrap(),
        ]);
        for k in 0..3 {
            let mut raw = 0.0;
            for l in 0..3 {
                if l == k {
                    continue;
                }
                for a in 0..2 {
                    for b in 0..2 {
                        raw += x.player(k)[a] * pg.pair_matrix(k, l)[a * 2 + b] * x.player(l)[b];
                    }
                }
            }
            let expect = scalings[k].apply(raw);
            assert!((g.utility(&x, k).unwrap() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn missing_pair_matrix_rejected() {
        let err = PolymatrixGame::new(
            vec![2, 2],
            vec![vec![vec![], vec![0.0; 3]], vec![vec![0.0; 4], vec![]]],
        );
        assert!(err.is_err());
    }
}
