//! Exact first- and second-order structure of the loss: analytic gradient,
//! Hessian, the rank-test matrix, and tangent-space spectra.

use crate::error::{Error, Result};
use crate::game::{JointStrategy, NormalFormGame};
use crate::loss::{regularized_gradient_unchecked, LossConfig};
use crate::simplex::project_tangent;
use crate::zoo::PolymatrixGame;

/// Relative tolerance (against the top singular value) for rank decisions.
pub const RANK_TOL: f64 = 1e-8;
/// Eigenvalues below this count as negative for the index alpha.
pub const NEGATIVE_EIG_TOL: f64 = -1e-8;
/// Probability floor below which entropy-dependent derivatives refuse to
/// evaluate; callers should clamp iterates first.
pub const DERIVATIVE_INTERIOR_FLOOR: f64 = 1e-100;

/// A dense matrix assembled from per-player blocks. Block (k, l) occupies
/// rows [offset_k, offset_k + m_k) and columns [offset_l, offset_l + m_l);
/// `extra_rows` trailing rows sit below the blocks (the ones rows of the
/// rank-test matrix).
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix {
    player_dims: Vec<usize>,
    extra_rows: usize,
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl BlockMatrix {
    fn zeros(player_dims: Vec<usize>, extra_rows: usize) -> Self {
        let cols: usize = player_dims.iter().sum();
        let rows = cols + extra_rows;
        BlockMatrix {
            player_dims,
            extra_rows,
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn player_dims(&self) -> &[usize] {
        &self.player_dims
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    fn add(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] += v;
    }

    /// Offset of player k's block along the column (and block-row) axis.
    pub fn offset(&self, k: usize) -> usize {
        self.player_dims[..k].iter().sum()
    }

    /// The assembled dense matrix in row-major order.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Copies block (k, l) out as a row-major m_k x m_l matrix.
    pub fn block(&self, k: usize, l: usize) -> Vec<f64> {
        let (rk, cl) = (self.offset(k), self.offset(l));
        let (mk, ml) = (self.player_dims[k], self.player_dims[l]);
        let mut out = Vec::with_capacity(mk * ml);
        for i in 0..mk {
            for j in 0..ml {
                out.push(self.get(rk + i, cl + j));
            }
        }
        out
    }
}

/// Eigen-spectrum of the Hessian restricted to the simplex tangent space.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    /// Eigenvalues in descending order.
    pub eigenvalues: Vec<f64>,
    /// Fraction of eigenvalues below [`NEGATIVE_EIG_TOL`].
    pub alpha: f64,
    /// Count of eigenvalues with magnitude above `RANK_TOL` times the largest.
    pub rank: usize,
}

fn check_interior_for_tau(x: &JointStrategy, tau: f64) -> Result<()> {
    if tau > 0.0 && x.min_prob() < DERIVATIVE_INTERIOR_FLOOR {
        return Err(Error::numerical(
            "entropy derivatives need a strictly interior profile; clamp probabilities first",
        ));
    }
    Ok(())
}

/// B_{kl} for k != l: the column-mean-removed bimatrix approximation
/// (row-major m_k x m_l).
fn b_cross(game: &NormalFormGame, x: &JointStrategy, k: usize, l: usize) -> Vec<f64> {
    let h = game.bimatrix_unchecked(x, k, l);
    let (mk, ml) = (game.action_counts()[k], game.action_counts()[l]);
    remove_column_means(&h, mk, ml)
}

fn remove_column_means(m: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let mut out = m.to_vec();
    for j in 0..cols {
        let mean: f64 = (0..rows).map(|i| m[i * cols + j]).sum::<f64>() / rows as f64;
        for i in 0..rows {
            out[i * cols + j] -= mean;
        }
    }
    out
}

/// B_{ll}: -tau [I - 11'/m] diag(1/x_l), entry (i, j) = -tau (d_ij - 1/m) / x_j.
fn b_diag(x: &JointStrategy, l: usize, tau: f64) -> Vec<f64> {
    let probs = x.player(l).probs();
    let m = probs.len();
    let mut out = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            let delta = if i == j { 1.0 } else { 0.0 };
            out[i * m + j] = -tau * (delta - 1.0 / m as f64) / probs[j];
        }
    }
    out
}

/// The gradient of the loss with respect to every player's strategy, from the
/// closed form 2 sum_k eta_k B_{kl}' P(grad_k^tau). This is the ambient
/// gradient; on the simplex product only its tangent component is
/// geometrically meaningful (see [`projected_loss_gradient`]).
pub fn loss_gradient(
    game: &NormalFormGame,
    x: &JointStrategy,
    cfg: &LossConfig,
) -> Result<Vec<Vec<f64>>> {
    if cfg.etas.len() != game.num_players() {
        return Err(Error::validation(
            "config and game disagree on player count",
        ));
    }
    check_interior_for_tau(x, cfg.tau)?;
    Ok(loss_gradient_unchecked(game, x, cfg))
}

pub(crate) fn loss_gradient_unchecked(
    game: &NormalFormGame,
    x: &JointStrategy,
    cfg: &LossConfig,
) -> Vec<Vec<f64>> {
    let n = game.num_players();
    let projected: Vec<Vec<f64>> = (0..n)
        .map(|k| project_tangent(&regularized_gradient_unchecked(game, x, k, cfg.tau)))
        .collect();
    let mut grads = Vec::with_capacity(n);
    for l in 0..n {
        let ml = game.action_counts()[l];
        let mut g = vec![0.0; ml];
        for (k, v) in projected.iter().enumerate() {
            if k == l {
                if cfg.tau > 0.0 {
                    // B_ll' v = -tau (P_l v) / x_l with v already tangent.
                    for (j, gj) in g.iter_mut().enumerate() {
                        *gj += cfg.etas[l] * (-cfg.tau) * v[j] / x.player(l)[j];
                    }
                }
            } else {
                // B_kl' v = H_kl' v for tangent v.
                let h = game.bimatrix_unchecked(x, k, l);
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
    grads
}

/// The loss evaluated on raw per-player coordinate vectors, without simplex
/// validation: the ambient extension of the loss that the analytic gradient
/// and Hessian differentiate. Finite-difference checks probe it off the
/// simplex.
pub fn ambient_loss(game: &NormalFormGame, probs: &[Vec<f64>], cfg: &LossConfig) -> f64 {
    let x = unchecked_profile(probs);
    (0..game.num_players())
        .map(|k| {
            let reg = regularized_gradient_unchecked(game, &x, k, cfg.tau);
            let p = project_tangent(&reg);
            cfg.etas[k] * p.iter().map(|v| v * v).sum::<f64>()
        })
        .sum()
}

/// [`loss_gradient`] evaluated on raw coordinate vectors (see
/// [`ambient_loss`]).
pub fn ambient_loss_gradient(
    game: &NormalFormGame,
    probs: &[Vec<f64>],
    cfg: &LossConfig,
) -> Vec<Vec<f64>> {
    let x = unchecked_profile(probs);
    loss_gradient_unchecked(game, &x, cfg)
}

fn unchecked_profile(probs: &[Vec<f64>]) -> JointStrategy {
    JointStrategy::new(
        probs
            .iter()
            .map(|p| crate::game::MixedStrategy::from_probs_unchecked(p.clone()))
            .collect(),
    )
}

/// Per-player tangent-space projection of [`loss_gradient`]: the Riemannian
/// gradient on the simplex product.
pub fn projected_loss_gradient(
    game: &NormalFormGame,
    x: &JointStrategy,
    cfg: &LossConfig,
) -> Result<Vec<Vec<f64>>> {
    Ok(loss_gradient(game, x, cfg)?
        .into_iter()
        .map(|g| project_tangent(&g))
        .collect())
}

/// The Hessian of the loss as a dense symmetric matrix over all strategy
/// coordinates. Block (l, q) combines the Gram term sum_k eta_k B_kl' B_kq
/// with the three-tensor term contracted against the projected regularized
/// gradients; the diagonal carries the entropy curvature
/// tau eta_l diag(P(grad_l^tau) / x_l^2).
pub fn hessian(game: &NormalFormGame, x: &JointStrategy, cfg: &LossConfig) -> Result<BlockMatrix> {
    if cfg.etas.len() != game.num_players() {
        return Err(Error::validation(
            "config and game disagree on player count",
        ));
    }
    check_interior_for_tau(x, cfg.tau)?;
    let n = game.num_players();
    let counts = game.action_counts().to_vec();
    let projected: Vec<Vec<f64>> = (0..n)
        .map(|k| project_tangent(&regularized_gradient_unchecked(game, x, k, cfg.tau)))
        .collect();
    // b[k][l] is B_kl, row-major m_k x m_l.
    let mut b = vec![vec![Vec::new(); n]; n];
    for k in 0..n {
        for l in 0..n {
            b[k][l] = if k == l {
                if cfg.tau > 0.0 {
                    b_diag(x, l, cfg.tau)
                } else {
                    vec![0.0; counts[k] * counts[k]]
                }
            } else {
                b_cross(game, x, k, l)
            };
        }
    }

    let mut hess = BlockMatrix::zeros(counts.clone(), 0);
    for l in 0..n {
        for q in 0..n {
            let (ml, mq) = (counts[l], counts[q]);
            let (rl, cq) = (hess.offset(l), hess.offset(q));
            // Gram term: sum_k eta_k B_kl' B_kq.
            for k in 0..n {
                let mk = counts[k];
                let (bkl, bkq) = (&b[k][l], &b[k][q]);
                for i in 0..ml {
                    for j in 0..mq {
                        let mut acc = 0.0;
                        for a in 0..mk {
                            acc += bkl[a * ml + i] * bkq[a * mq + j];
                        }
                        hess.add(rl + i, cq + j, 2.0 * cfg.etas[k] * acc);
                    }
                }
            }
            if l == q {
                if cfg.tau > 0.0 {
                    for i in 0..ml {
                        let p = x.player(l)[i];
                        hess.add(
                            rl + i,
                            cq + i,
                            2.0 * cfg.tau * cfg.etas[l] * projected[l][i] / (p * p),
                        );
                    }
                }
            } else {
                // Three-tensor term over third players k not in {l, q}.
                for k in 0..n {
                    if k == l || k == q {
                        continue;
                    }
                    let t = game
                        .three_tensor_approx(x, k, l, q)
                        .expect("indices are pairwise distinct and n >= 3");
                    let mk = counts[k];
                    for i in 0..ml {
                        for j in 0..mq {
                            let mut acc = 0.0;
                            for (a, va) in projected[k].iter().enumerate().take(mk) {
                                acc += va * t[(a * ml + i) * mq + j];
                            }
                            hess.add(rl + i, cq + j, 2.0 * cfg.etas[k] * acc);
                        }
                    }
                }
            }
        }
    }
    Ok(hess)
}

/// The rank-test matrix: per-player block rows of column-mean-removed
/// bimatrix approximations (the diagonal carrying -tau sqrt(eta) P(1/x)),
/// with one ones-row per player appended to encode orthogonality to each
/// simplex. Full column rank at an equilibrium certifies a positive-definite
/// tangent Hessian.
pub fn test_matrix(
    game: &NormalFormGame,
    x: &JointStrategy,
    cfg: &LossConfig,
) -> Result<BlockMatrix> {
    if cfg.etas.len() != game.num_players() {
        return Err(Error::validation(
            "config and game disagree on player count",
        ));
    }
    check_interior_for_tau(x, cfg.tau)?;
    let n = game.num_players();
    let counts = game.action_counts().to_vec();
    let mut m = BlockMatrix::zeros(counts.clone(), n);
    for k in 0..n {
        let sqrt_eta = cfg.etas[k].sqrt();
        let rk = m.offset(k);
        for l in 0..n {
            let cl = m.offset(l);
            let block = if l == k {
                b_diag(x, k, cfg.tau)
            } else {
                b_cross(game, x, k, l)
            };
            let (mk, ml) = (counts[k], counts[l]);
            for i in 0..mk {
                for j in 0..ml {
                    m.set(rk + i, cl + j, sqrt_eta * block[i * ml + j]);
                }
            }
        }
    }
    let base: usize = counts.iter().sum();
    for k in 0..n {
        let cl = m.offset(k);
        for j in 0..counts[k] {
            m.set(base + k, cl + j, 1.0);
        }
    }
    Ok(m)
}

/// The rank-test matrix of a polymatrix game, built directly from the pair
/// matrices: row-rank-preserving row operations let P^k_{kl} stand in for the
/// expanded game's bimatrix approximations.
pub fn test_matrix_polymatrix(
    pg: &PolymatrixGame,
    x: &JointStrategy,
    cfg: &LossConfig,
) -> Result<BlockMatrix> {
    if cfg.etas.len() != pg.num_players() {
        return Err(Error::validation(
            "config and game disagree on player count",
        ));
    }
    check_interior_for_tau(x, cfg.tau)?;
    let n = pg.num_players();
    let counts = pg.action_counts().to_vec();
    let mut m = BlockMatrix::zeros(counts.clone(), n);
    for k in 0..n {
        let sqrt_eta = cfg.etas[k].sqrt();
        let rk = m.offset(k);
        for l in 0..n {
            let cl = m.offset(l);
            let (mk, ml) = (counts[k], counts[l]);
            let block = if l == k {
                b_diag(x, k, cfg.tau)
            } else {
                remove_column_means(pg.pair_matrix(k, l), mk, ml)
            };
            for i in 0..mk {
                for j in 0..ml {
                    m.set(rk + i, cl + j, sqrt_eta * block[i * ml + j]);
                }
            }
        }
    }
    let base: usize = counts.iter().sum();
    for k in 0..n {
        let cl = m.offset(k);
        for j in 0..counts[k] {
            m.set(base + k, cl + j, 1.0);
        }
    }
    Ok(m)
}

/// Numerical rank: the number of singular values above `tol` times the
/// largest, computed from the eigenvalues of M'M.
pub fn rank(matrix: &BlockMatrix, tol: f64) -> usize {
    rank_of_dense(matrix.as_slice(), matrix.rows(), matrix.cols(), tol)
}

pub(crate) fn rank_of_dense(data: &[f64], rows: usize, cols: usize, tol: f64) -> usize {
    // Gram matrix M'M (cols x cols), then its eigenvalues.
    let mut gram = vec![0.0; cols * cols];
    for i in 0..cols {
        for j in i..cols {
            let mut acc = 0.0;
            for r in 0..rows {
                acc += data[r * cols + i] * data[r * cols + j];
            }
            gram[i * cols + j] = acc;
            gram[j * cols + i] = acc;
        }
    }
    let eigs = jacobi_eigenvalues(&gram, cols);
    let top = eigs.iter().cloned().fold(0.0f64, f64::max).max(0.0).sqrt();
    if top == 0.0 {
        return 0;
    }
    eigs.iter()
        .filter(|&&lambda| lambda.max(0.0).sqrt() > tol * top)
        .count()
}

/// True when the rank-test matrix has full column rank at `x`, certifying a
/// positive-definite tangent Hessian there (an isolated equilibrium).
pub fn isolation_test(game: &NormalFormGame, x: &JointStrategy, cfg: &LossConfig) -> Result<bool> {
    let m = test_matrix(game, x, cfg)?;
    Ok(rank(&m, RANK_TOL) == m.cols())
}

/// Eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations,
/// iterated until the off-diagonal Frobenius norm falls below 1e-10.
pub fn jacobi_eigenvalues(matrix: &[f64], n: usize) -> Vec<f64> {
    assert_eq!(matrix.len(), n * n, "matrix must be n x n");
    let mut a = matrix.to_vec();
    let idx = |i: usize, j: usize| i * n + j;
    for _sweep in 0..200 {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += a[idx(i, j)] * a[idx(i, j)];
                }
            }
        }
        if off.sqrt() < 1e-10 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[idx(p, q)];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = a[idx(p, p)];
                let aqq = a[idx(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                // Stable tangent of the rotation angle.
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..n {
                    let aip = a[idx(i, p)];
                    let aiq = a[idx(i, q)];
                    a[idx(i, p)] = c * aip - s * aiq;
                    a[idx(i, q)] = s * aip + c * aiq;
                }
                for j in 0..n {
                    let apj = a[idx(p, j)];
                    let aqj = a[idx(q, j)];
                    a[idx(p, j)] = c * apj - s * aqj;
                    a[idx(q, j)] = s * apj + c * aqj;
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| a[idx(i, i)]).collect();
    eigs.sort_by(|x, y| y.partial_cmp(x).unwrap());
    eigs
}

/// Orthonormal basis of the simplex tangent space in R^m (m - 1 columns,
/// each summing to zero), returned row-major m x (m - 1).
fn tangent_basis(m: usize) -> Vec<f64> {
    let cols = m - 1;
    let mut basis = vec![0.0; m * cols];
    for j in 1..m {
        // Column j-1: (1, ..., 1, -j, 0, ..., 0) / sqrt(j (j + 1)).
        let norm = (j as f64 * (j as f64 + 1.0)).sqrt();
        for i in 0..j {
            basis[i * cols + (j - 1)] = 1.0 / norm;
        }
        basis[j * cols + (j - 1)] = -(j as f64) / norm;
    }
    basis
}

/// Conjugates a symmetric matrix over all strategy coordinates by the
/// per-player tangent bases, reducing it to the tangent space of the simplex
/// product (dimension sum_k (m_k - 1)).
pub fn reduce_to_tangent(matrix: &BlockMatrix) -> (Vec<f64>, usize) {
    let dims = matrix.player_dims().to_vec();
    let full: usize = dims.iter().sum();
    let reduced: usize = dims.iter().map(|&m| m - 1).sum();
    // Block-diagonal basis U (full x reduced).
    let mut u = vec![0.0; full * reduced];
    let mut row0 = 0;
    let mut col0 = 0;
    for &m in &dims {
        let basis = tangent_basis(m);
        for i in 0..m {
            for j in 0..(m - 1) {
                u[(row0 + i) * reduced + (col0 + j)] = basis[i * (m - 1) + j];
            }
        }
        row0 += m;
        col0 += m - 1;
    }
    // R = U' H U.
    let mut hu = vec![0.0; full * reduced];
    for i in 0..full {
        for j in 0..reduced {
            let mut acc = 0.0;
            for k in 0..full {
                acc += matrix.get(i, k) * u[k * reduced + j];
            }
            hu[i * reduced + j] = acc;
        }
    }
    let mut r = vec![0.0; reduced * reduced];
    for i in 0..reduced {
        for j in 0..reduced {
            let mut acc = 0.0;
            for k in 0..full {
                acc += u[k * reduced + i] * hu[k * reduced + j];
            }
            r[i * reduced + j] = acc;
        }
    }
    (r, reduced)
}

/// Spectrum of the Hessian restricted to the tangent space of the simplex
/// product: eigenvalues (descending), the index alpha (fraction negative),
/// and the numerical rank.
pub fn tangent_spectrum(
    game: &NormalFormGame,
    x: &JointStrategy,
    cfg: &LossConfig,
) -> Result<SpectrumReport> {
    let hess = hessian(game, x, cfg)?;
    let (reduced, dim) = reduce_to_tangent(&hess);
    Ok(spectrum_of_symmetric(&reduced, dim))
}

/// Spectrum report for an arbitrary dense symmetric matrix (test seam and
/// building block for [`tangent_spectrum`]).
pub fn spectrum_of_symmetric(matrix: &[f64], n: usize) -> SpectrumReport {
    let eigenvalues = jacobi_eigenvalues(matrix, n);
    let negative = eigenvalues
        .iter()
        .filter(|&&e| e < NEGATIVE_EIG_TOL)
        .count();
    let alpha = if n == 0 {
        0.0
    } else {
        negative as f64 / n as f64
    };
    let top = eigenvalues.iter().map(|e| e.abs()).fold(0.0f64, f64::max);
    let rank = if top == 0.0 {
        0
    } else {
        eigenvalues
            .iter()
            .filter(|e| e.abs() > RANK_TOL * top)
            .count()
    };
    SpectrumReport {
        eigenvalues,
        alpha,
        rank,
    }
}
