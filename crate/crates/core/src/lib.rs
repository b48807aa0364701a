//! Probability spaces embedded in larger spaces under two semantics.
//!
//! A small space can live inside a bigger one either because equality
//! constraints pin it there (`b = c = 0`, `ad = bc`, `rho_xy = rho`) or because
//! a limit process approaches it (`(b, c) -> (0, 0)`). Both agree on function
//! values but not on gradients. This crate computes both and reproduces the
//! downstream consequences:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`simplex`] | [`ProbVector`], entropy, simplex volumes |
//! | [`gradient`] | constraint sets, charts, constrained vs limit gradients |
//! | [`optimize`] | deterministic grid search with Nelder-Mead polish |
//! | [`dice`] | coin / triangle / square dice under three optimization methods |
//! | [`gaussian`] | bivariate normal gradient relations at `rho = 0` |
//! | [`jointbinary`] | two binary variables: correlation, Fisher, likelihood |
//! | [`strategy`] | mixed and behavioural strategy spaces, the comparison table |
//! | [`treeopt`] | correlation slices `r+(p, q, rho)` and payoff sweeps |
//! | [`game`] | backward induction vs correlation-constrained equilibria |
//! | [`discrepancy`] | the headline dimension / volume / gradient comparison |

pub mod dice;
pub mod discrepancy;
pub mod error;
pub mod game;
pub mod gaussian;
pub mod gradient;
pub mod jointbinary;
pub mod optimize;
pub mod quadrature;
pub mod simplex;
pub mod strategy;
pub mod treeopt;

pub use error::{Error, Result};
pub use gradient::{
    directed_gradient, finite_difference, gradient, Chart, ConstraintSet, GradientMode,
    GradientResult, Semantics,
};
pub use optimize::{Diagnostics, OptimumReport, SearchMode};
pub use simplex::{entropy, resolve, simplex_volume, ProbVector};
