//! Coin, triangle and square dice optimized three ways.
//!
//! The objective is `F = V^2 E_x`, the squared parameter-space volume times
//! the entropy. Optimizing each die separately and optimizing inside the
//! square under each die's embedding constraints agree; optimizing over the
//! unconstrained square does not.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::gradient::{directed_gradient, Chart, ConstraintSet};
use crate::optimize::{
    grid_search, on_box_boundary, Diagnostics, NelderMead, OptimumReport, SearchMode,
};
use crate::simplex::{entropy, entropy_of, simplex_volume, ProbVector};

/// Grid points per free coordinate (resolution 1/200).
pub const GRID: usize = 201;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DieLabel {
    Coin,
    Triangle,
    Square,
}

impl DieLabel {
    pub fn name(self) -> &'static str {
        match self {
            Self::Coin => "coin",
            Self::Triangle => "triangle",
            Self::Square => "square",
        }
    }
}

/// A die and its embedding in the four-outcome target space, whose free
/// coordinates are `(a, b, c)` with `d = 1 - a - b - c`.
#[derive(Debug, Clone)]
pub struct DieSpace {
    pub sides: usize,
    pub label: DieLabel,
    pub embedding: ConstraintSet,
}

impl DieSpace {
    /// `(c, d) = (0, 0)`.
    pub fn coin() -> Self {
        let chart = Chart::new(1, |u| vec![u[0], 1.0 - u[0], 0.0], |x| vec![x[0]]);
        let embedding = ConstraintSet::new("(c,d)=(0,0)", chart)
            .with_equality(|x| x[2], 0.0)
            .with_equality(|x| 1.0 - x[0] - x[1] - x[2], 0.0);
        Self {
            sides: 2,
            label: DieLabel::Coin,
            embedding,
        }
    }

    /// `d = 0`.
    pub fn triangle() -> Self {
        let chart = Chart::new(
            2,
            |u| vec![u[0], u[1], 1.0 - u[0] - u[1]],
            |x| vec![x[0], x[1]],
        );
        let embedding =
            ConstraintSet::new("d=0", chart).with_equality(|x| 1.0 - x[0] - x[1] - x[2], 0.0);
        Self {
            sides: 3,
            label: DieLabel::Triangle,
            embedding,
        }
    }

    pub fn square() -> Self {
        Self {
            sides: 4,
            label: DieLabel::Square,
            embedding: ConstraintSet::empty(),
        }
    }

    pub fn all() -> [Self; 3] {
        [Self::coin(), Self::triangle(), Self::square()]
    }

    pub fn volume(&self) -> f64 {
        simplex_volume(self.sides).expect("dice have at least two sides")
    }

    fn chart_dim(&self) -> usize {
        self.embedding.reduced_dim(3)
    }

    fn embed(&self, u: &[f64]) -> Vec<f64> {
        match self.embedding.chart() {
            Some(chart) => chart.embed(u),
            None => u.to_vec(),
        }
    }
}

/// `F = V^2 E_x` at a target-space point lying in `space`.
pub fn objective_f(p: &ProbVector, space: &DieSpace) -> Result<f64> {
    if p.len() != 4 {
        return Err(Error::BadDimension(p.len()));
    }
    let residual = space.embedding.residual(p.free());
    if residual > crate::gradient::FEASIBILITY_TOL {
        return Err(Error::InfeasiblePoint {
            label: space.embedding.label().to_string(),
            residual,
        });
    }
    let v = space.volume();
    Ok(v * v * entropy(p))
}

/// `F` on free target coordinates `(a, b, c)`; NaN outside the simplex.
pub fn objective_on_target(abc: &[f64], sides: usize) -> f64 {
    let d = 1.0 - abc[0] - abc[1] - abc[2];
    let v = simplex_volume(sides).expect("dice have at least two sides");
    if abc.iter().any(|&x| x < 0.0) || d < -1e-15 {
        return f64::NAN;
    }
    v * v * entropy_of(&[abc[0], abc[1], abc[2], d.max(0.0)])
}

fn target_point(abc: &[f64]) -> Vec<f64> {
    let d = (1.0 - abc[0] - abc[1] - abc[2]).max(0.0);
    vec![abc[0], abc[1], abc[2], d]
}

/// Method 1: maximize `F` inside each die's own simplex. The entropy of `n`
/// outcomes peaks at `log n` at the uniform point.
pub fn maximize_per_space() -> Vec<OptimumReport> {
    DieSpace::all()
        .iter()
        .map(|die| {
            let n = die.sides;
            let v = die.volume();
            OptimumReport {
                label: die.label.name().to_string(),
                point: vec![1.0 / n as f64; n],
                value: v * v * (n as f64).ln(),
                mode: SearchMode::Constrained,
                diagnostics: Diagnostics {
                    grid: 0,
                    iterations: 0,
                    on_boundary: false,
                },
            }
        })
        .collect()
}

/// The best of the per-space optima (the coin).
pub fn best_of(reports: &[OptimumReport]) -> Option<&OptimumReport> {
    reports
        .iter()
        .fold(None, |best: Option<&OptimumReport>, r| match best {
            Some(b) if b.value >= r.value => Some(b),
            _ => Some(r),
        })
}

fn optimize_in_target(die: &DieSpace, mode: SearchMode) -> OptimumReport {
    let dim = die.chart_dim();
    let sides = die.sides;
    let f = |u: &[f64]| objective_on_target(&die.embed(u), sides);
    let best = grid_search(dim, GRID, 1, f);
    let start = &best[0];
    let polished = NelderMead {
        step: 1.0 / (GRID - 1) as f64,
        ..NelderMead::default()
    }
    .maximize_restarted(f, &start.point, 3);
    let (u, value) = if polished.value > start.value {
        (polished.point, polished.value)
    } else {
        (start.point.clone(), start.value)
    };
    let point = target_point(&die.embed(&u));
    OptimumReport {
        label: die.label.name().to_string(),
        diagnostics: Diagnostics {
            grid: GRID,
            iterations: polished.iterations,
            on_boundary: on_box_boundary(&u),
        },
        point,
        value,
        mode,
    }
}

/// Method 2: optimize inside the target space under each die's embedding
/// constraints, by grid search over the constraint chart plus polish.
pub fn maximize_constrained_target() -> Vec<OptimumReport> {
    DieSpace::all()
        .iter()
        .map(|die| optimize_in_target(die, SearchMode::Constrained))
        .collect()
}

#[derive(Debug, Clone)]
pub struct UnconstrainedOutcome {
    pub optimum: OptimumReport,
    /// The unconstrained optimum is worse than the best per-space optimum.
    pub conflicts: bool,
}

/// Method 3: discard the embedding constraints and optimize over the whole
/// square.
pub fn maximize_unconstrained() -> UnconstrainedOutcome {
    let optimum = optimize_in_target(&DieSpace::square(), SearchMode::Unconstrained);
    let best = maximize_per_space()
        .into_iter()
        .map(|r| r.value)
        .fold(f64::NEG_INFINITY, f64::max);
    UnconstrainedOutcome {
        conflicts: best > optimum.value,
        optimum,
    }
}

/// Closed-form entropy gradient in free coordinates,
/// `-log(p_i / p_n)` per free coordinate.
pub fn entropy_gradient_closed_form(free: &[f64]) -> Vec<f64> {
    let last = 1.0 - free.iter().sum::<f64>();
    free.iter().map(|&p| -(p / last).ln()).collect()
}

/// Directed gradient of `F` (square volume) at `(a, 1 - a, 0)` along
/// `(1, -1, 0) / sqrt 2`, computed numerically.
pub fn directed_gradient_on_coin_edge(a: f64) -> Result<f64> {
    let f = |abc: &[f64]| objective_on_target(abc, 4);
    directed_gradient(
        &f,
        &[a, 1.0 - a, 0.0],
        &[FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0],
    )
}

/// Closed form of [`directed_gradient_on_coin_edge`]:
/// `V^2 log((1 - a) / a) / sqrt 2`.
pub fn directed_gradient_closed_form(a: f64) -> f64 {
    let v = simplex_volume(4).expect("4 >= 2");
    v * v * FRAC_1_SQRT_2 * ((1.0 - a) / a).ln()
}
