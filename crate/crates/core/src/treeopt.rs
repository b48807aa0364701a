//! Correlation-constrained optimization over the behavioural decision tree.
//!
//! A correlation target `rho` fixes `r` as a function of `(p, q)` through
//! [`r_plus`]. The slice payoff `2p + 3q - 3pq - p r` is then maximized over
//! the unit square with an indicator that zeroes points whose `r` leaves
//! `[0, 1]`.

use crate::error::{Error, Result};
use crate::gradient::{gradient, ConstraintSet, GradientMode, GradientResult};
use crate::optimize::{
    grid_search, on_box_boundary, Diagnostics, NelderMead, OptimumReport, SearchMode,
};

/// Tolerance of [`in_range`].
pub const RANGE_TOL: f64 = 1e-9;

/// `p` is kept this far from `{0, 1}` when evaluating `r_plus`.
pub const P_CLAMP: f64 = 1e-9;

pub const DEFAULT_GRID: usize = 401;

/// Largest correlation error accepted on a slice.
pub const SLICE_TOL: f64 = 1e-6;

/// Cells polished by Nelder-Mead after the grid pass.
pub const POLISH_STARTS: usize = 5;

/// Largest improvement a final restart may find before the optimum is
/// declared unconverged.
pub const CONVERGENCE_TOL: f64 = 1e-3;

/// The correlation targets of the standard sweep.
pub const SWEEP_RHOS: [f64; 9] = [1.0, 0.75, 0.5, 0.25, 0.0, -0.25, -0.5, -0.75, -1.0];

fn check_p(p: f64) -> Result<()> {
    if p <= 0.0 || p >= 1.0 {
        return Err(Error::SingularP(p));
    }
    Ok(())
}

fn r_branch(p: f64, q: f64, rho: f64, sign: f64) -> Result<f64> {
    check_p(p)?;
    let rho2 = rho * rho;
    let disc = rho2 + 4.0 * q * (1.0 - q) * (1.0 - p) / p;
    let num = rho2 - 2.0 * q * (1.0 - p) * (rho2 - 1.0) + sign * rho * disc.max(0.0).sqrt();
    Ok(num / (2.0 * (1.0 + p * (rho2 - 1.0))))
}

/// Branch of constant correlation used for the slices.
pub fn r_plus(p: f64, q: f64, rho: f64) -> Result<f64> {
    r_branch(p, q, rho, 1.0)
}

/// The other root of the correlation quadratic. Unused by the optimizer.
pub fn r_minus(p: f64, q: f64, rho: f64) -> Result<f64> {
    r_branch(p, q, rho, -1.0)
}

/// Boundary `q(p, rho)` of the region where `0 <= r_plus <= 1`. For
/// `rho > 0` the region lies below it, for `rho < 0` above it.
pub fn permissible_bound(p: f64, rho: f64) -> Result<f64> {
    check_p(p)?;
    if rho == 0.0 {
        return Err(Error::SingularRho);
    }
    if !(rho.abs() < 1.0) {
        return Err(Error::BadParams(format!("rho = {rho} must lie in (-1, 1)")));
    }
    let k = rho * rho / (1.0 - rho * rho);
    Ok(if rho > 0.0 {
        p / (p + k)
    } else {
        1.0 / (1.0 + p / k)
    })
}

/// 1 if `r` lies in `[0, 1]` up to [`RANGE_TOL`], else 0.
pub fn in_range(r: f64) -> f64 {
    if (-RANGE_TOL..=1.0 + RANGE_TOL).contains(&r) {
        1.0
    } else {
        0.0
    }
}

/// The slice `rho_xy = rho` of the behavioural space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationSlice {
    pub rho: f64,
}

impl CorrelationSlice {
    pub fn new(rho: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&rho) {
            return Err(Error::BadParams(format!("rho = {rho} must lie in [-1, 1]")));
        }
        Ok(Self { rho })
    }

    /// `(q, r)` pinned at `rho = +1` and `rho = -1`.
    pub fn pin(&self) -> Option<(f64, f64)> {
        if self.rho == 1.0 {
            Some((0.0, 1.0))
        } else if self.rho == -1.0 {
            Some((1.0, 0.0))
        } else {
            None
        }
    }

    /// `r` on the slice, with `p` pulled inside `(0, 1)` by continuity.
    pub fn surface(&self, p: f64, q: f64) -> f64 {
        let pc = p.clamp(P_CLAMP, 1.0 - P_CLAMP);
        r_plus(pc, q, self.rho).expect("p clamped into (0, 1)")
    }

    pub fn in_region(&self, p: f64, q: f64) -> bool {
        in_range(self.surface(p, q)) == 1.0
    }

    /// `inRange(r) [2p + 3q - 3pq - p r]`.
    pub fn objective(&self, p: f64, q: f64) -> f64 {
        if let Some((q0, r0)) = self.pin() {
            return payoff(p, q0, r0);
        }
        let r = self.surface(p, q);
        if self.rho != 0.0 && !self.on_slice(p, q, r) {
            return 0.0;
        }
        in_range(r) * payoff(p, q, r)
    }

    /// Whether `(p, q, r)` really has correlation `rho`. The surface passes
    /// within the range tolerance of `r = 1` near `q = 1`, where `y` barely
    /// varies and the actual correlation is close to 0.
    pub fn on_slice(&self, p: f64, q: f64, r: f64) -> bool {
        let pc = p.clamp(P_CLAMP, 1.0 - P_CLAMP);
        let r = r.clamp(0.0, 1.0);
        let y = q + pc * (r - q);
        // 1 - <y> without cancellation
        let not_y = (1.0 - q) * (1.0 - pc) + pc * (1.0 - r);
        let var = y * not_y;
        if !(var > 0.0) {
            return false;
        }
        let rho = (pc * (1.0 - pc)).sqrt() * (r - q) / var.sqrt();
        (rho - self.rho).abs() <= SLICE_TOL
    }
}

/// `2<x> + 3<y> - 4<xy>` with `<x> = p`, `<y> = q + p (r - q)`, `<xy> = p r`.
pub fn payoff(p: f64, q: f64, r: f64) -> f64 {
    2.0 * p + 3.0 * q - 3.0 * p * q - p * r
}

#[derive(Debug, Clone, PartialEq)]
pub struct SliceOptimum {
    pub rho: f64,
    /// `(p, q, r)`.
    pub point: [f64; 3],
    pub value: f64,
    pub diagnostics: Diagnostics,
}

fn polish_best<F>(f: &F, dim: usize, grid: usize) -> Result<(Vec<f64>, f64, usize)>
where
    F: Fn(&[f64]) -> f64,
{
    let starts = grid_search(dim, grid, POLISH_STARTS, f);
    let Some(first) = starts.first() else {
        return Err(Error::ConvergenceFailure {
            rho: f64::NAN,
            grid: f64::NAN,
            refined: f64::NAN,
        });
    };
    let nm = NelderMead {
        step: 1.0 / (grid - 1) as f64,
        ..NelderMead::default()
    };
    let inside = |x: &[f64]| {
        if x.iter().all(|v| (0.0..=1.0).contains(v)) {
            f(x)
        } else {
            f64::NAN
        }
    };
    let (mut point, mut value, mut iterations) = (first.point.clone(), first.value, 0);
    for start in &starts {
        let polished = nm.maximize_restarted(inside, &start.point, 2);
        iterations += polished.iterations;
        if polished.value > value {
            point = polished.point;
            value = polished.value;
        }
    }
    // a converged optimum survives one more restart
    let again = nm.maximize_restarted(inside, &point, 2);
    if !value.is_finite() || again.value - value > CONVERGENCE_TOL {
        return Err(Error::ConvergenceFailure {
            rho: f64::NAN,
            grid: value,
            refined: again.value,
        });
    }
    Ok((point, value, iterations))
}

/// Maximizes the slice payoff at correlation `rho` on a `grid x grid` mesh
/// followed by Nelder-Mead from the best cells.
pub fn maximize_payoff_on_slice(rho: f64, grid: usize) -> Result<SliceOptimum> {
    if grid < 2 {
        return Err(Error::BadParams(format!("grid = {grid} is too coarse")));
    }
    let slice = CorrelationSlice::new(rho)?;
    let with_rho = |e: Error| match e {
        Error::ConvergenceFailure { grid, refined, .. } => {
            Error::ConvergenceFailure { rho, grid, refined }
        }
        other => other,
    };
    let (point, value, iterations, on_boundary) = match slice.pin() {
        Some((q, r)) => {
            let f = |x: &[f64]| slice.objective(x[0], q);
            let (u, value, it) = polish_best(&f, 1, grid).map_err(with_rho)?;
            ([u[0], q, r], value, it, on_box_boundary(&u))
        }
        None => {
            let f = |x: &[f64]| slice.objective(x[0], x[1]);
            let (u, value, it) = polish_best(&f, 2, grid).map_err(with_rho)?;
            let r = slice.surface(u[0], u[1]).clamp(0.0, 1.0);
            let boundary = on_box_boundary(&u) || on_box_boundary(&[r]);
            ([u[0], u[1], r], value, it, boundary)
        }
    };
    Ok(SliceOptimum {
        rho,
        point,
        value,
        diagnostics: Diagnostics {
            grid,
            iterations,
            on_boundary,
        },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub rows: Vec<SliceOptimum>,
    /// Index of the best row; ties go to the smaller `rho`.
    pub best: Option<usize>,
}

/// Values within this distance count as tied when picking the best slice.
pub const TIE_TOL: f64 = 1e-9;

pub fn sweep(rhos: &[f64], grid: usize) -> Result<Sweep> {
    let rows = rhos
        .iter()
        .map(|&rho| maximize_payoff_on_slice(rho, grid))
        .collect::<Result<Vec<_>>>()?;
    let mut best: Option<usize> = None;
    for (i, row) in rows.iter().enumerate() {
        best = match best {
            None => Some(i),
            Some(b) => {
                let cur = &rows[b];
                let better = row.value > cur.value + TIE_TOL
                    || ((row.value - cur.value).abs() <= TIE_TOL && row.rho < cur.rho);
                Some(if better { i } else { b })
            }
        };
    }
    Ok(Sweep { rows, best })
}

/// `(p, q, r_plus, in_range)` on a `grid x grid` mesh of the unit square.
pub fn surface(rho: f64, grid: usize) -> Result<Vec<[f64; 4]>> {
    if grid < 2 {
        return Err(Error::BadParams(format!("grid = {grid} is too coarse")));
    }
    let slice = CorrelationSlice::new(rho)?;
    let step = 1.0 / (grid - 1) as f64;
    let mut out = Vec::with_capacity(grid * grid);
    for i in 0..grid {
        let p = i as f64 * step;
        for j in 0..grid {
            let q = j as f64 * step;
            let r = slice.surface(p, q);
            out.push([p, q, r, in_range(r)]);
        }
    }
    Ok(out)
}

/// `f = 1 - q + p (q + r - 1)`, the probability `P(0,0) + P(1,1)`.
pub fn conservation(x: &[f64]) -> f64 {
    1.0 - x[1] + x[0] * (x[1] + x[2] - 1.0)
}

pub const DISCREPANCY_GRID: usize = 101;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscrepancyMode {
    Unconstrained,
    /// `(q, r) = (0, 1)`.
    Constrained,
}

/// `F = 1 - |grad f|^2` with the gradient taken by the engine in `mode`.
pub fn discrepancy_payoff(x: &[f64], mode: DiscrepancyMode) -> Result<f64> {
    let grad_mode = match mode {
        DiscrepancyMode::Unconstrained => GradientMode::unconstrained(),
        DiscrepancyMode::Constrained => GradientMode::Constrained(ConstraintSet::pinned(
            "(q,r)=(0,1)",
            3,
            &[(1, 0.0), (2, 1.0)],
        )),
    };
    match gradient(&conservation, x, &grad_mode)? {
        GradientResult::Finite(g) => Ok(1.0 - g.iter().map(|v| v * v).sum::<f64>()),
        _ => Ok(f64::NAN),
    }
}

/// Maximizes the discrepancy payoff over the behavioural cube.
pub fn maximize_discrepancy(mode: DiscrepancyMode) -> Result<OptimumReport> {
    let (dim, lift): (usize, fn(&[f64]) -> Vec<f64>) = match mode {
        DiscrepancyMode::Unconstrained => (3, |u| u.to_vec()),
        DiscrepancyMode::Constrained => (1, |u| vec![u[0], 0.0, 1.0]),
    };
    let f = |u: &[f64]| discrepancy_payoff(&lift(u), mode).unwrap_or(f64::NAN);
    let best = grid_search(dim, DISCREPANCY_GRID, 1, f);
    let start = best.first().ok_or(Error::ConvergenceFailure {
        rho: f64::NAN,
        grid: f64::NAN,
        refined: f64::NAN,
    })?;
    let polished = NelderMead::default().maximize(
        |u: &[f64]| {
            if u.iter().all(|v| (0.0..=1.0).contains(v)) {
                f(u)
            } else {
                f64::NAN
            }
        },
        &start.point,
    );
    let (u, value) = if polished.value > start.value + 1e-12 {
        (polished.point, polished.value)
    } else {
        (start.point.clone(), start.value)
    };
    let (label, search) = match mode {
        DiscrepancyMode::Unconstrained => ("unconstrained", SearchMode::Unconstrained),
        DiscrepancyMode::Constrained => ("(q,r)=(0,1)", SearchMode::Constrained),
    };
    Ok(OptimumReport {
        label: label.to_string(),
        point: lift(&u),
        value,
        mode: search,
        diagnostics: Diagnostics {
            grid: DISCREPANCY_GRID,
            iterations: polished.iterations,
            on_boundary: on_box_boundary(&u),
        },
    })
}
