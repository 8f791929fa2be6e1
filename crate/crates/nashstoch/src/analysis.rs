//! Chart-ready analysis artifacts: loss / bound surfaces over strategy
//! grids, sampled-play NashConv surfaces, and the critical-point index study.

use crate::calculus::{hessian, loss_gradient_unchecked, tangent_spectrum};
use crate::error::{Error, Result};
use crate::estimators::{estimate_loss_gradient, EstimatorKind};
use crate::game::{JointStrategy, MixedStrategy, NormalFormGame};
use crate::loss::{biased_sampled_nashconv, loss_value, LossConfig};
use crate::rng::CounterRng;
use crate::simplex::{clamp_interior, project_simplex_euclidean, project_tangent, softmax};

/// Logit-space grids span [-LOGIT_SPAN, LOGIT_SPAN] per coordinate, covering
/// probabilities from about 0.0025 to 0.9975.
pub const LOGIT_SPAN: f64 = 6.0;
/// Squared-tangent-gradient threshold below which a point counts as critical.
pub const CRITICAL_GRAD_TOL: f64 = 1e-8;
/// Iteration cap for the gradient-norm descent.
pub const CRITICAL_DESCENT_CAP: usize = 50_000;
/// Armijo sufficient-decrease constant for the descent line search.
pub const ARMIJO_C: f64 = 1e-4;

/// Coordinate space of a surface grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceSpace {
    /// Each axis is a probability of the player's first action (and, for
    /// three-action players, of the second).
    Prob,
    /// Each axis is a logit; strategies are softmax([coords..., 0]).
    Logit,
}

impl SurfaceSpace {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "prob" => Some(SurfaceSpace::Prob),
            "logit" => Some(SurfaceSpace::Logit),
            _ => None,
        }
    }
}

/// One axis of a surface grid: a free coordinate of one player's strategy.
#[derive(Debug, Clone, Copy)]
pub struct SurfaceAxis {
    pub player: usize,
    pub coordinate: usize,
}

/// One evaluated grid cell.
#[derive(Debug, Clone)]
pub struct SurfaceCell {
    /// Multi-index into the grid, one entry per axis.
    pub index: Vec<usize>,
    /// Axis coordinate values (probabilities or logits).
    pub coords: Vec<f64>,
    pub loss: f64,
    /// The exploitability bound minus its temperature offset:
    /// sqrt(2n / min eta) sqrt(loss).
    pub bound_offset: f64,
    pub epsilon: f64,
    pub biased_nashconv: f64,
}

/// A dense (up to simplex-infeasible cells) grid of loss diagnostics.
#[derive(Debug, Clone)]
pub struct SurfaceGrid {
    pub axes: Vec<SurfaceAxis>,
    pub resolution: usize,
    pub space: SurfaceSpace,
    pub tau: f64,
    pub cells: Vec<SurfaceCell>,
}

impl SurfaceGrid {
    /// CSV with one row per cell: axis coordinates then the four values,
    /// floats at 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (i, axis) in self.axes.iter().enumerate() {
            out.push_str(&format!("axis{}_p{}c{},", i, axis.player, axis.coordinate));
        }
        out.push_str("loss,bound_offset,epsilon,biased_nashconv\n");
        for cell in &self.cells {
            for c in &cell.coords {
                out.push_str(&format!("{c:.11e},"));
            }
            out.push_str(&format!(
                "{:.11e},{:.11e},{:.11e},{:.11e}\n",
                cell.loss, cell.bound_offset, cell.epsilon, cell.biased_nashconv
            ));
        }
        out
    }

    /// Indices (into `cells`) of local minima of the chosen value, sorted
    /// ascending by value. A cell is a local minimum when no neighboring
    /// cell (Chebyshev distance 1 in the multi-index) is strictly lower.
    pub fn local_minima<F: Fn(&SurfaceCell) -> f64>(&self, value: F) -> Vec<usize> {
        let by_index: std::collections::HashMap<&[usize], usize> = self
            .cells
            .iter()
            .enumerate()
            .map(|(i, c)| (c.index.as_slice(), i))
            .collect();
        let dims = self.axes.len();
        let mut result = Vec::new();
        for (i, cell) in self.cells.iter().enumerate() {
            let v = value(cell);
            let mut is_min = true;
            // Walk the 3^dims - 1 Chebyshev neighbors.
            let mut offsets = vec![-1i64; dims];
            'neighbors: loop {
                if offsets.iter().any(|&o| o != 0) {
                    let neighbor: Option<Vec<usize>> = cell
                        .index
                        .iter()
                        .zip(&offsets)
                        .map(|(&a, &o)| {
                            let moved = a as i64 + o;
                            (moved >= 0 && (moved as usize) < self.resolution)
                                .then_some(moved as usize)
                        })
                        .collect();
                    if let Some(idx) = neighbor {
                        if let Some(&j) = by_index.get(idx.as_slice()) {
                            if value(&self.cells[j]) < v - 1e-15 {
                                is_min = false;
                                break 'neighbors;
                            }
                        }
                    }
                }
                let mut done = true;
                for o in offsets.iter_mut().rev() {
                    *o += 1;
                    if *o <= 1 {
                        done = false;
                        break;
                    }
                    *o = -1;
                }
                if done {
                    break;
                }
            }
            if is_min {
                result.push(i);
            }
        }
        result.sort_by(|&a, &b| {
            value(&self.cells[a])
                .partial_cmp(&value(&self.cells[b]))
                .unwrap()
        });
        result
    }
}

fn surface_axes(game: &NormalFormGame) -> Result<Vec<SurfaceAxis>> {
    if game.num_players() != 2 {
        return Err(Error::validation(
            "surface grids are defined for 2-player games",
        ));
    }
    if game.action_counts().iter().any(|&m| m > 3) {
        return Err(Error::validation(
            "surface grids support at most 3 actions per player",
        ));
    }
    let mut axes = Vec::new();
    for (player, &m) in game.action_counts().iter().enumerate() {
        for coordinate in 0..m - 1 {
            axes.push(SurfaceAxis { player, coordinate });
        }
    }
    Ok(axes)
}

fn strategy_from_coords(m: usize, coords: &[f64], space: SurfaceSpace) -> Option<MixedStrategy> {
    match space {
        SurfaceSpace::Prob => {
            let head_sum: f64 = coords.iter().sum();
            if head_sum > 1.0 + 1e-12 {
                return None;
            }
            let mut probs = coords.to_vec();
            probs.push((1.0 - head_sum).max(0.0));
            debug_assert_eq!(probs.len(), m);
            MixedStrategy::new(probs).ok()
        }
        SurfaceSpace::Logit => {
            let mut logits = coords.to_vec();
            logits.push(0.0);
            debug_assert_eq!(logits.len(), m);
            MixedStrategy::new(softmax(&logits)).ok()
        }
    }
}

/// Evaluates the loss, its exploitability bound (offset removed),
/// exploitability, and sampled-play NashConv over a grid of strategy
/// profiles. Probability-space axes run over [0, 1]; logit axes over
/// [-LOGIT_SPAN, LOGIT_SPAN]. Simplex-infeasible cells are skipped.
pub fn loss_surface(
    game: &NormalFormGame,
    cfg: &LossConfig,
    resolution: usize,
    space: SurfaceSpace,
) -> Result<SurfaceGrid> {
    if resolution < 2 {
        return Err(Error::validation("resolution must be at least 2"));
    }
    let axes = surface_axes(game)?;
    let num_axes = axes.len();
    let mut cells = Vec::new();
    let mut index = vec![0usize; num_axes];
    loop {
        let coords: Vec<f64> = index
            .iter()
            .map(|&i| {
                let t = i as f64 / (resolution - 1) as f64;
                match space {
                    SurfaceSpace::Prob => t,
                    SurfaceSpace::Logit => (2.0 * t - 1.0) * LOGIT_SPAN,
                }
            })
            .collect();
        if let Some(x) = profile_from_coords(game, &axes, &coords, space) {
            let report = loss_value(game, &x, cfg)?;
            let biased = biased_sampled_nashconv(game, &x, cfg.tau)?;
            let n = game.num_players() as f64;
            let bound_offset = (2.0 * n / cfg.min_eta()).sqrt() * report.loss.max(0.0).sqrt();
            cells.push(SurfaceCell {
                index: index.clone(),
                coords,
                loss: report.loss,
                bound_offset,
                epsilon: report.epsilon,
                biased_nashconv: biased,
            });
        }
        // Odometer over the axes.
        let mut done = true;
        for i in (0..num_axes).rev() {
            index[i] += 1;
            if index[i] < resolution {
                done = false;
                break;
            }
            index[i] = 0;
        }
        if done {
            break;
        }
    }
    Ok(SurfaceGrid {
        axes,
        resolution,
        space,
        tau: cfg.tau,
        cells,
    })
}

fn profile_from_coords(
    game: &NormalFormGame,
    axes: &[SurfaceAxis],
    coords: &[f64],
    space: SurfaceSpace,
) -> Option<JointStrategy> {
    let mut per_player: Vec<Vec<f64>> = vec![Vec::new(); game.num_players()];
    for (axis, &c) in axes.iter().zip(coords) {
        per_player[axis.player].push(c);
    }
    let strategies: Option<Vec<MixedStrategy>> = per_player
        .iter()
        .enumerate()
        .map(|(k, coords)| strategy_from_coords(game.action_counts()[k], coords, space))
        .collect();
    strategies.map(JointStrategy::new)
}

/// The sampled-play NashConv surface at the given temperature: identical grid
/// mechanics to [`loss_surface`], read from the `biased_nashconv` column.
pub fn biased_nashconv_surface(
    game: &NormalFormGame,
    tau: f64,
    resolution: usize,
) -> Result<SurfaceGrid> {
    let cfg = LossConfig::uniform(game.num_players(), tau);
    loss_surface(game, &cfg, resolution, SurfaceSpace::Prob)
}

/// How a critical point was discovered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscoveryMethod {
    /// Seeded from a point along an SGD descent trajectory.
    Trajectory,
    /// Seeded from a uniformly random profile.
    Random,
}

/// A profile where the tangent gradient of the loss (numerically) vanishes.
#[derive(Debug, Clone)]
pub struct CriticalPoint {
    pub profile: JointStrategy,
    /// Final tangent-gradient norm of the loss.
    pub grad_norm: f64,
    pub loss: f64,
    pub epsilon: f64,
    /// Fraction of negative tangent-Hessian eigenvalues (0 = local minimum,
    /// 1 = local maximum, otherwise a saddle).
    pub alpha: f64,
    pub method: DiscoveryMethod,
}

/// CSV emission for critical-point scatter data.
pub fn critical_points_to_csv(points: &[CriticalPoint]) -> String {
    let mut out = String::from("method,epsilon,loss,grad_norm,alpha\n");
    for p in points {
        let method = match p.method {
            DiscoveryMethod::Trajectory => "trajectory",
            DiscoveryMethod::Random => "random",
        };
        out.push_str(&format!(
            "{method},{:.11e},{:.11e},{:.11e},{:.11e}\n",
            p.epsilon, p.loss, p.grad_norm, p.alpha
        ));
    }
    out
}

/// Squared norm of the per-player tangent-projected loss gradient.
fn tangent_grad_sq(game: &NormalFormGame, x: &JointStrategy, cfg: &LossConfig) -> f64 {
    loss_gradient_unchecked(game, x, cfg)
        .iter()
        .map(|g| project_tangent(g).iter().map(|v| v * v).sum::<f64>())
        .sum()
}

/// Gradient of [`tangent_grad_sq`]: 2 Hess (P grad L), flattened per player.
fn tangent_grad_sq_gradient(
    game: &NormalFormGame,
    x: &JointStrategy,
    cfg: &LossConfig,
) -> Result<Vec<Vec<f64>>> {
    let hess = hessian(game, x, cfg)?;
    let projected: Vec<f64> = loss_gradient_unchecked(game, x, cfg)
        .iter()
        .flat_map(|g| project_tangent(g))
        .collect();
    let total = projected.len();
    let mut flat = vec![0.0; total];
    for (i, f) in flat.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (j, p) in projected.iter().enumerate() {
            acc += hess.get(i, j) * p;
        }
        *f = 2.0 * acc;
    }
    let mut out = Vec::with_capacity(game.num_players());
    let mut offset = 0;
    for &m in game.action_counts() {
        out.push(flat[offset..offset + m].to_vec());
        offset += m;
    }
    Ok(out)
}

fn random_profile(game: &NormalFormGame, rng: &mut CounterRng) -> JointStrategy {
    JointStrategy::new(
        game.action_counts()
            .iter()
            .map(|&m| {
                let mut v: Vec<f64> = (0..m).map(|_| rng.next_f64() + 1e-6).collect();
                let sum: f64 = v.iter().sum();
                v.iter_mut().for_each(|p| *p /= sum);
                MixedStrategy::new(v).unwrap()
            })
            .collect(),
    )
}

/// Projected gradient descent with Armijo backtracking on the squared
/// tangent-gradient norm. Returns the final point and its objective value.
fn descend_to_critical(
    game: &NormalFormGame,
    start: JointStrategy,
    cfg: &LossConfig,
) -> Result<(JointStrategy, f64)> {
    let mut x = if cfg.tau > 0.0 {
        JointStrategy::new(x_clamped(&start))
    } else {
        start
    };
    let mut h = tangent_grad_sq(game, &x, cfg);
    for _ in 0..CRITICAL_DESCENT_CAP {
        if h < CRITICAL_GRAD_TOL {
            break;
        }
        let grad = tangent_grad_sq_gradient(game, &x, cfg)?;
        let dir: Vec<Vec<f64>> = grad.iter().map(|g| project_tangent(g)).collect();
        let dir_sq: f64 = dir.iter().flatten().map(|v| v * v).sum();
        if dir_sq < 1e-30 {
            break;
        }
        let mut step = 1.0;
        let mut improved = false;
        while step > 1e-14 {
            let candidate = JointStrategy::new(
                x.strategies
                    .iter()
                    .zip(&dir)
                    .map(|(s, d)| {
                        let moved: Vec<f64> = s
                            .probs()
                            .iter()
                            .zip(d)
                            .map(|(p, di)| p - step * di)
                            .collect();
                        let projected = project_simplex_euclidean(&moved);
                        if cfg.tau > 0.0 {
                            clamp_interior(&projected)
                        } else {
                            projected
                        }
                    })
                    .collect(),
            );
            let h_new = tangent_grad_sq(game, &candidate, cfg);
            if h_new <= h - ARMIJO_C * step * dir_sq {
                x = candidate;
                h = h_new;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    Ok((x, h))
}

fn x_clamped(x: &JointStrategy) -> Vec<MixedStrategy> {
    x.strategies.iter().map(clamp_interior).collect()
}

/// Searches for critical points of the loss: SGD trajectories seed half the
/// probes, uniformly random profiles the other half; each probe descends the
/// squared tangent-gradient norm and is kept only if it passes the
/// convergence threshold. Each accepted point carries its exploitability and
/// tangent-Hessian index.
pub fn critical_point_study(
    game: &NormalFormGame,
    cfg: &LossConfig,
    n_trajectories: usize,
    n_probes: usize,
    seed: u64,
) -> Result<Vec<CriticalPoint>> {
    let root = CounterRng::new(seed);
    // SGD trajectories at the study temperature, iterates recorded.
    let mut trajectories: Vec<Vec<JointStrategy>> = Vec::with_capacity(n_trajectories);
    for run in 0..n_trajectories {
        let mut rng = root.stream(&[1, run as u64]);
        let mut x = random_profile(game, &mut rng);
        let mut iterates = vec![x.clone()];
        for t in 0..1000 {
            let mut stream = root.stream(&[2, run as u64, t as u64]);
            let grads =
                estimate_loss_gradient(game, &x, cfg, EstimatorKind::SampleOthers, &mut stream)?;
            x = JointStrategy::new(
                x.strategies
                    .iter()
                    .zip(&grads)
                    .map(|(s, g)| {
                        let d = project_tangent(g);
                        let moved: Vec<f64> = s
                            .probs()
                            .iter()
                            .zip(&d)
                            .map(|(p, di)| p - 0.1 * di)
                            .collect();
                        let projected = project_simplex_euclidean(&moved);
                        if cfg.tau > 0.0 {
                            clamp_interior(&projected)
                        } else {
                            projected
                        }
                    })
                    .collect(),
            );
            if t % 10 == 0 {
                iterates.push(x.clone());
            }
        }
        trajectories.push(iterates);
    }

    let mut points = Vec::new();
    let mut picker = root.stream(&[3]);
    for probe in 0..n_probes {
        let (start, method) = if probe % 2 == 0 && !trajectories.is_empty() {
            let t = picker.next_index(trajectories.len());
            let i = picker.next_index(trajectories[t].len());
            (trajectories[t][i].clone(), DiscoveryMethod::Trajectory)
        } else {
            let mut rng = root.stream(&[4, probe as u64]);
            (random_profile(game, &mut rng), DiscoveryMethod::Random)
        };
        let (x, h) = descend_to_critical(game, start, cfg)?;
        if h >= CRITICAL_GRAD_TOL {
            continue;
        }
        let report = loss_value(game, &x, cfg)?;
        let spectrum = tangent_spectrum(game, &x, cfg)?;
        points.push(CriticalPoint {
            grad_norm: h.sqrt(),
            loss: report.loss,
            epsilon: report.epsilon,
            alpha: spectrum.alpha,
            profile: x,
            method,
        });
    }
    Ok(points)
}

/// Counts the dips (strict local minima, with plateaus merged) of a sampled
/// one-dimensional curve.
pub fn count_dips(values: &[f64]) -> usize {
    let n = values.len();
    if n < 3 {
        return 0;
    }
    let mut dips = 0;
    let mut i = 1;
    while i < n - 1 {
        // Extend over any plateau.
        let mut j = i;
        while j + 1 < n && values[j + 1] == values[i] {
            j += 1;
        }
        if values[i] < values[i - 1] && j + 1 < n && values[i] < values[j + 1] {
            dips += 1;
        }
        i = j + 1;
    }
    dips
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loss::exploitability;
    use crate::zoo::{classic, expand_polymatrix, ClassicGame};

    #[test]
    fn pd_surface_is_constant_at_zero_tau() {
        let g = classic(ClassicGame::PrisonersDilemma);
        let cfg = LossConfig::uniform(2, 0.0);
        let grid = loss_surface(&g, &cfg, 21, SurfaceSpace::Prob).unwrap();
        assert_eq!(grid.cells.len(), 441);
        let min = grid
            .cells
            .iter()
            .map(|c| c.loss)
            .fold(f64::INFINITY, f64::min);
        let max = grid
            .cells
            .iter()
            .map(|c| c.loss)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(max - min < 1e-12);
        assert!((min - 1.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn resolution_two_gives_corner_cells_only() {
        let g = classic(ClassicGame::Chicken);
        let cfg = LossConfig::uniform(2, 0.0);
        let grid = loss_surface(&g, &cfg, 2, SurfaceSpace::Prob).unwrap();
        assert_eq!(grid.cells.len(), 4);
        for cell in &grid.cells {
            for c in &cell.coords {
                assert!(*c == 0.0 || *c == 1.0);
            }
        }
    }

    #[test]
    fn chicken_low_temperature_minima_localize_equilibria() {
        // At tau = 0.01 the probability-space surface shows only the interior
        // equilibrium (the near-pure quantal-response points sit ~1e-11 from
        // the boundary, far below any grid step); the logit-space chart is
        // what resolves the boundary equilibria.
        let g = classic(ClassicGame::Chicken);
        let cfg = LossConfig::uniform(2, 0.01);
        let prob = loss_surface(&g, &cfg, 101, SurfaceSpace::Prob).unwrap();
        let prob_minima = prob.local_minima(|c| c.bound_offset);
        let lowest = &prob.cells[prob_minima[0]].coords;
        assert!(
            (lowest[0] - 2.0 / 3.0).abs() <= 0.01 && (lowest[1] - 2.0 / 3.0).abs() <= 0.01,
            "lowest prob-space minimum at ({}, {})",
            lowest[0],
            lowest[1]
        );

        let logit = loss_surface(&g, &cfg, 101, SurfaceSpace::Logit).unwrap();
        let logit_minima = logit.local_minima(|c| c.bound_offset);
        let sigmoid = |v: f64| 1.0 / (1.0 + (-v).exp());
        for (a, b) in [(0.0, 1.0), (1.0, 0.0)] {
            let hit = logit_minima.iter().any(|&i| {
                let c = &logit.cells[i].coords;
                (sigmoid(c[0]) - a).abs() <= 0.01 && (sigmoid(c[1]) - b).abs() <= 0.01
            });
            assert!(
                hit,
                "no logit-space minimum near the pure equilibrium ({a}, {b})"
            );
        }
    }

    #[test]
    fn biased_surface_penalizes_interior_equilibrium() {
        let g = classic(ClassicGame::Chicken);
        let grid = biased_nashconv_surface(&g, 0.05, 21).unwrap();
        let cell_at = |a: f64, b: f64| {
            grid.cells
                .iter()
                .min_by(|x, y| {
                    let dx = (x.coords[0] - a).abs() + (x.coords[1] - b).abs();
                    let dy = (y.coords[0] - a).abs() + (y.coords[1] - b).abs();
                    dx.partial_cmp(&dy).unwrap()
                })
                .unwrap()
        };
        let interior = cell_at(2.0 / 3.0, 2.0 / 3.0);
        let pure_a = cell_at(0.0, 1.0);
        let pure_b = cell_at(1.0, 0.0);
        let best_pure = pure_a.biased_nashconv.min(pure_b.biased_nashconv);
        assert!(
            interior.biased_nashconv > best_pure,
            "interior {} best pure {best_pure}",
            interior.biased_nashconv
        );
    }

    #[test]
    fn pure_cells_agree_with_true_nashconv() {
        let g = classic(ClassicGame::Chicken);
        let grid = biased_nashconv_surface(&g, 0.0, 3).unwrap();
        for cell in &grid.cells {
            let pure = cell.coords.iter().all(|&c| c == 0.0 || c == 1.0);
            if pure {
                // At pure profiles sampling has no spread, so the biased and
                // true values coincide; nashconv = sum of per-player gains.
                let x =
                    profile_from_coords(&g, &grid.axes, &cell.coords, SurfaceSpace::Prob).unwrap();
                let (_, per_player) = exploitability(&g, &x).unwrap();
                let true_nc: f64 = per_player.iter().sum();
                assert!((cell.biased_nashconv - true_nc).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn biased_dominates_true_nashconv_cellwise() {
        for seed in 0..3u64 {
            let g = crate::zoo::random_game(&[2, 2], 7000 + seed).unwrap();
            let grid = biased_nashconv_surface(&g, 0.0, 9).unwrap();
            for cell in &grid.cells {
                let x =
                    profile_from_coords(&g, &grid.axes, &cell.coords, SurfaceSpace::Prob).unwrap();
                let (_, per_player) = exploitability(&g, &x).unwrap();
                let true_nc: f64 = per_player.iter().sum();
                assert!(cell.biased_nashconv >= true_nc - 1e-12);
            }
        }
    }

    #[test]
    fn logit_space_grid_covers_interior() {
        let g = classic(ClassicGame::Chicken);
        let cfg = LossConfig::uniform(2, 0.1);
        let grid = loss_surface(&g, &cfg, 11, SurfaceSpace::Logit).unwrap();
        assert_eq!(grid.cells.len(), 121);
        for cell in &grid.cells {
            assert!(cell.loss.is_finite());
            assert!(cell.coords.iter().all(|c| c.abs() <= LOGIT_SPAN));
        }
    }

    #[test]
    fn surface_bound_dominates_epsilon() {
        let g = classic(ClassicGame::Chicken);
        let tau = 0.05;
        let cfg = LossConfig::uniform(2, tau);
        let grid = loss_surface(&g, &cfg, 21, SurfaceSpace::Prob).unwrap();
        let offset = tau * 4.0f64.ln();
        for cell in &grid.cells {
            assert!(cell.epsilon <= cell.bound_offset + offset + 1e-10);
        }
    }

    #[test]
    fn three_action_games_get_four_axes() {
        let g = classic(ClassicGame::ModifiedShapley);
        let cfg = LossConfig::uniform(2, 0.0);
        let grid = loss_surface(&g, &cfg, 5, SurfaceSpace::Prob).unwrap();
        assert_eq!(grid.axes.len(), 4);
        // Infeasible simplex cells are dropped: per player 15 of 25 head
        // pairs are feasible.
        assert_eq!(grid.cells.len(), 15 * 15);
    }

    #[test]
    fn matching_pennies_critical_points_are_the_equilibrium() {
        let g = classic(ClassicGame::MatchingPennies);
        let cfg = LossConfig::uniform(2, 0.0);
        let points = critical_point_study(&g, &cfg, 2, 6, 9).unwrap();
        assert!(!points.is_empty());
        for p in &points {
            assert!(p.grad_norm * p.grad_norm < CRITICAL_GRAD_TOL);
            assert!(p.epsilon < 1e-3, "epsilon {}", p.epsilon);
            assert_eq!(p.alpha, 0.0);
        }
    }

    #[test]
    fn convex_polymatrix_critical_points_have_alpha_zero() {
        // An instance with an interior equilibrium, so tangent-stationary
        // points exist; convexity of the polymatrix loss forces alpha = 0 at
        // all of them.
        let (pg, _) = crate::zoo::random_polymatrix_with_interior_equilibrium(3, 0, 50).unwrap();
        let (g, _) = expand_polymatrix(&pg).unwrap();
        let cfg = LossConfig::uniform(3, 0.0);
        let points = critical_point_study(&g, &cfg, 1, 4, 11).unwrap();
        assert!(!points.is_empty());
        for p in &points {
            assert_eq!(p.alpha, 0.0, "alpha {} at loss {}", p.alpha, p.loss);
        }
    }

    #[test]
    fn failed_descents_are_excluded() {
        // A temperature so high that the descent cap cannot be hit from the
        // cap side, but with a tiny probe budget: every returned point must
        // pass the threshold.
        let g = classic(ClassicGame::Chicken);
        let cfg = LossConfig::uniform(2, 0.2);
        let points = critical_point_study(&g, &cfg, 1, 4, 13).unwrap();
        for p in &points {
            assert!(p.grad_norm * p.grad_norm < CRITICAL_GRAD_TOL);
        }
    }

    #[test]
    fn dip_counting_handles_plateaus_and_edges() {
        assert_eq!(count_dips(&[1.0, 0.5, 1.0]), 1);
        assert_eq!(count_dips(&[1.0, 0.5, 0.5, 1.0]), 1);
        assert_eq!(count_dips(&[0.1, 0.5, 0.2, 0.6, 0.3, 0.7]), 2);
        assert_eq!(count_dips(&[1.0, 1.0, 1.0]), 0);
        assert_eq!(count_dips(&[0.0, 1.0]), 0);
    }
}
