//! Equilibrium solvers for n-player normal-form games built around a
//! projected-gradient loss that admits unbiased Monte-Carlo estimation.
//!
//! The crate provides:
//! - dense normal-form games with exact utilities, gradients, and bimatrix /
//!   three-tensor approximations ([`game`]),
//! - constructors for classic matrix games, Blotto, symmetric two-action
//!   games, random games, and polymatrix games ([`zoo`]),
//! - Gambit NFG (payoff variant) and canonical JSON interchange ([`io`]),
//! - simplex geometry: tangent projection, Euclidean projection, entropic
//!   mirror steps, and hypercube-to-simplex maps ([`simplex`]),
//! - the loss itself with exploitability bounds and quantal-response
//!   quantities ([`loss`]),
//! - unbiased stochastic estimators of gradients, loss, and loss gradient
//!   ([`estimators`]),
//! - analytic first/second-order structure: loss gradient, Hessian, rank
//!   tests, and tangent-space spectra ([`calculus`]),
//! - solvers: SGD, regret matching, FTRL, and a batched Lipschitz bandit
//!   ([`solvers`]),
//! - chart-ready analysis artifacts: loss surfaces, biased-NashConv
//!   surfaces, and critical-point studies ([`analysis`]).

pub mod analysis;
pub mod calculus;
pub mod error;
pub mod estimators;
pub mod game;
pub mod io;
pub mod loss;
pub mod rng;
pub mod simplex;
pub mod solvers;
pub mod zoo;

pub use error::{Error, Result};
pub use game::{JointStrategy, MixedStrategy, NormalFormGame};
