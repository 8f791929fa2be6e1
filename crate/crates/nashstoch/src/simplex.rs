//! Simplex geometry: projection onto the tangent space, Euclidean projection
//! onto the simplex, entropic mirror steps, and the two hypercube-to-simplex
//! maps used by the bandit solver.

use crate::error::{Error, Result};
use crate::game::{JointStrategy, MixedStrategy};

/// Probability floor applied before entropic mirror steps.
pub const INTERIOR_FLOOR: f64 = 1e-12;
/// Default half-width of the logit range the softmax map scales [0, 1] into.
pub const DEFAULT_LOGIT_RANGE: f64 = 10.0;

/// A point in the unit hypercube, the bandit solver's search space.
#[derive(Debug, Clone, PartialEq)]
pub struct HypercubePoint {
    pub coords: Vec<f64>,
}

impl HypercubePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords
            .iter()
            .any(|c| !c.is_finite() || *c < 0.0 || *c > 1.0)
        {
            return Err(Error::validation(
                "hypercube coordinates must lie in [0, 1]",
            ));
        }
        Ok(HypercubePoint { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// Projects a vector onto the tangent space of the simplex by subtracting its
/// mean: `z - (1'z / d) 1`. Linear and idempotent; the output sums to zero.
pub fn project_tangent(v: &[f64]) -> Vec<f64> {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| x - mean).collect()
}

/// In-place variant of [`project_tangent`].
pub fn project_tangent_mut(v: &mut [f64]) {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= mean);
}

/// Euclidean projection onto the probability simplex by sort-and-threshold.
pub fn project_simplex_euclidean(v: &[f64]) -> MixedStrategy {
    let probs = project_simplex_vec(v);
    MixedStrategy::new(probs).expect("projection output is on the simplex")
}

pub(crate) fn project_simplex_vec(v: &[f64]) -> Vec<f64> {
    let d = v.len();
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    let mut support = 0;
    for (i, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let candidate = (cumsum - 1.0) / (i + 1) as f64;
        if u - candidate > 0.0 {
            theta = candidate;
            support = i + 1;
        }
    }
    debug_assert!(support > 0);
    let mut out: Vec<f64> = v.iter().map(|&x| (x - theta).max(0.0)).collect();
    // Exact renormalization guards the 1e-9 sum invariant against rounding.
    let sum: f64 = out.iter().sum();
    if sum > 0.0 {
        out.iter_mut().for_each(|p| *p /= sum);
    } else {
        out = vec![1.0 / d as f64; d];
    }
    out
}

/// One entropic mirror-descent step: `x'_l` proportional to `x_l exp(-lr g_l)`.
/// Requires a strictly interior point; callers should clamp first (see
/// [`clamp_interior`]).
pub fn mirror_step(x: &MixedStrategy, g: &[f64], lr: f64) -> Result<MixedStrategy> {
    if x.len() != g.len() {
        return Err(Error::validation(format!(
            "gradient length {} does not match strategy length {}",
            g.len(),
            x.len()
        )));
    }
    if x.min_prob() <= 0.0 {
        return Err(Error::validation(
            "mirror step needs a strictly interior strategy; clamp probabilities first",
        ));
    }
    // Subtract the max exponent for stability; the shift cancels in the ratio.
    let logits: Vec<f64> = x
        .probs()
        .iter()
        .zip(g)
        .map(|(&p, &gl)| p.ln() - lr * gl)
        .collect();
    let top = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut w: Vec<f64> = logits.iter().map(|l| (l - top).exp()).collect();
    let sum: f64 = w.iter().sum();
    w.iter_mut().for_each(|p| *p /= sum);
    MixedStrategy::new(w)
}

/// Floors probabilities at [`INTERIOR_FLOOR`] and renormalizes, keeping
/// iterates usable by entropy terms whose gradient diverges at the boundary.
pub fn clamp_interior(x: &MixedStrategy) -> MixedStrategy {
    let mut probs: Vec<f64> = x.probs().iter().map(|&p| p.max(INTERIOR_FLOOR)).collect();
    let sum: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= sum);
    MixedStrategy::new(probs).expect("clamped strategy is valid")
}

/// Softmax over logits with max-subtraction.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let top = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut w: Vec<f64> = logits.iter().map(|l| (l - top).exp()).collect();
    let sum: f64 = w.iter().sum();
    w.iter_mut().for_each(|p| *p /= sum);
    w
}

/// Splits a hypercube point into per-player blocks of length `m_k - 1`.
fn split_blocks<'a>(z: &'a HypercubePoint, action_counts: &[usize]) -> Result<Vec<&'a [f64]>> {
    let want: usize = action_counts.iter().map(|&m| m - 1).sum();
    if z.dim() != want {
        return Err(Error::validation(format!(
            "hypercube point has dimension {}, expected {want}",
            z.dim()
        )));
    }
    let mut blocks = Vec::with_capacity(action_counts.len());
    let mut offset = 0;
    for &m in action_counts {
        blocks.push(&z.coords[offset..offset + m - 1]);
        offset += m - 1;
    }
    Ok(blocks)
}

/// Maps the hypercube to the simplex product by scaling each coordinate from
/// [0, 1] into [-R, R], appending a zero logit, and applying softmax. The
/// midpoint 0.5 maps to the zero logit, so an all-0.5 block yields the
/// uniform strategy. Output is strictly interior.
pub fn softmax_map(
    z: &HypercubePoint,
    action_counts: &[usize],
    logit_range: f64,
) -> Result<JointStrategy> {
    let blocks = split_blocks(z, action_counts)?;
    let strategies = blocks
        .into_iter()
        .map(|block| {
            let mut logits: Vec<f64> = block
                .iter()
                .map(|&c| (2.0 * c - 1.0) * logit_range)
                .collect();
            logits.push(0.0);
            MixedStrategy::new(softmax(&logits))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(JointStrategy::new(strategies))
}

/// Maps the hypercube to the simplex product through spherical coordinates:
/// coordinates scale to angles in [0, pi/2], the angle vector maps onto the
/// unit sphere's positive orthant, and the result is 1-norm normalized.
/// Surjective onto the closed simplex.
pub fn spherical_map(z: &HypercubePoint, action_counts: &[usize]) -> Result<JointStrategy> {
    let blocks = split_blocks(z, action_counts)?;
    let strategies = blocks
        .into_iter()
        .map(|block| {
            let angles: Vec<f64> = block
                .iter()
                .map(|&c| c * std::f64::consts::FRAC_PI_2)
                .collect();
            let sphere = sphere_from_angles(&angles);
            let sum: f64 = sphere.iter().sum();
            let probs = if sum > 0.0 {
                sphere.iter().map(|v| v / sum).collect()
            } else {
                vec![1.0 / (block.len() + 1) as f64; block.len() + 1]
            };
            MixedStrategy::new(probs)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(JointStrategy::new(strategies))
}

/// Spherical-coordinate chart of the unit sphere restricted to the positive
/// orthant: entry i is sin(a_1)...sin(a_{i-1}) cos(a_i), the last entry all
/// sines.
fn sphere_from_angles(angles: &[f64]) -> Vec<f64> {
    let m = angles.len() + 1;
    let mut out = vec![0.0; m];
    let mut sin_prod = 1.0;
    for (i, &a) in angles.iter().enumerate() {
        out[i] = sin_prod * a.cos();
        sin_prod *= a.sin();
    }
    out[m - 1] = sin_prod;
    out
}
