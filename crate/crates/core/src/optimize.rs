//! Deterministic maximization: exhaustive grid over the unit cube followed by
//! Nelder-Mead polish.
//!
//! Ties are broken toward the lexicographically smallest point so reports are
//! reproducible bit for bit.

use std::cmp::Ordering;

/// Which semantics produced an optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Optimized on a constraint manifold.
    Constrained,
    /// Optimized over the full ambient space, constraints discarded.
    Unconstrained,
}

impl SearchMode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Constrained => "constrained",
            Self::Unconstrained => "unconstrained",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    /// Grid points per axis.
    pub grid: usize,
    /// Nelder-Mead iterations spent polishing the reported point.
    pub iterations: usize,
    /// Whether the arg-max touches the boundary of the search box.
    pub on_boundary: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimumReport {
    pub label: String,
    pub point: Vec<f64>,
    pub value: f64,
    pub mode: SearchMode,
    pub diagnostics: Diagnostics,
}

/// A scored grid or polish candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub point: Vec<f64>,
    pub value: f64,
}

/// Better value first, then lexicographically smaller point.
pub fn rank(a: &Candidate, b: &Candidate) -> Ordering {
    b.value
        .partial_cmp(&a.value)
        .unwrap_or(Ordering::Equal)
        .then_with(|| lexicographic(&a.point, &b.point))
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    Ordering::Equal
}

/// Evaluates `f` on the grid `{0, 1/(n-1), ..., 1}^dim` and returns the `keep`
/// best points. Non-finite values mark infeasible points and are skipped.
pub fn grid_search<F>(dim: usize, n: usize, keep: usize, f: F) -> Vec<Candidate>
where
    F: Fn(&[f64]) -> f64,
{
    assert!(n >= 2, "grid needs at least two points per axis");
    let step = 1.0 / (n - 1) as f64;
    let mut idx = vec![0usize; dim];
    let mut x = vec![0.0; dim];
    let mut best: Vec<Candidate> = Vec::with_capacity(keep + 1);
    loop {
        for (xi, &i) in x.iter_mut().zip(&idx) {
            *xi = i as f64 * step;
        }
        let v = f(&x);
        if v.is_finite() && (best.len() < keep || v > best[best.len() - 1].value) {
            // Iteration is lexicographic, so equal values keep their order.
            let pos = best.partition_point(|c| c.value >= v);
            best.insert(
                pos,
                Candidate {
                    point: x.clone(),
                    value: v,
                },
            );
            best.truncate(keep);
        }
        // odometer increment, last axis fastest
        let mut axis = dim;
        loop {
            if axis == 0 {
                return best;
            }
            axis -= 1;
            idx[axis] += 1;
            if idx[axis] < n {
                break;
            }
            idx[axis] = 0;
        }
    }
}

/// Nelder-Mead maximizer with standard coefficients.
#[derive(Debug, Clone)]
pub struct NelderMead {
    pub step: f64,
    pub max_iter: usize,
    pub ftol: f64,
    pub xtol: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            step: 0.05,
            max_iter: 4000,
            ftol: 1e-15,
            xtol: 1e-11,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Polished {
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

impl NelderMead {
    pub fn maximize<F>(&self, f: F, start: &[f64]) -> Polished
    where
        F: Fn(&[f64]) -> f64,
    {
        let cost = |x: &[f64]| {
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                -v
            }
        };
        let n = start.len();
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((start.to_vec(), cost(start)));
        for i in 0..n {
            let mut x = start.to_vec();
            // step away from the nearer edge of the unit box
            x[i] += if start[i] + self.step <= 1.0 {
                self.step
            } else {
                -self.step
            };
            let c = cost(&x);
            simplex.push((x, c));
        }

        let mut iterations = 0;
        while iterations < self.max_iter {
            simplex.sort_by(|a, b| {
                a.1.partial_cmp(&b.1)
                    .unwrap_or(Ordering::Equal)
                    .then_with(|| lexicographic(&a.0, &b.0))
            });
            let spread = simplex[n].1 - simplex[0].1;
            let size = simplex[1..]
                .iter()
                .map(|(x, _)| {
                    x.iter()
                        .zip(&simplex[0].0)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            let flat = spread <= self.ftol || !spread.is_finite();
            if (flat && size <= self.xtol) || size <= 1e-14 {
                break;
            }
            iterations += 1;

            let centroid: Vec<f64> = (0..n)
                .map(|j| simplex[..n].iter().map(|(x, _)| x[j]).sum::<f64>() / n as f64)
                .collect();
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&simplex[n].0)
                    .map(|(c, w)| c + t * (w - c))
                    .collect()
            };

            let xr = along(-1.0);
            let fr = cost(&xr);
            if fr < simplex[0].1 {
                let xe = along(-2.0);
                let fe = cost(&xe);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
            } else {
                let (xc, fc) = if fr < simplex[n].1 {
                    let xc = along(-0.5);
                    let fc = cost(&xc);
                    (xc, fc)
                } else {
                    let xc = along(0.5);
                    let fc = cost(&xc);
                    (xc, fc)
                };
                if fc < simplex[n].1.min(fr) {
                    simplex[n] = (xc, fc);
                } else {
                    let best = simplex[0].0.clone();
                    for (x, c) in simplex.iter_mut().skip(1) {
                        for (xi, bi) in x.iter_mut().zip(&best) {
                            *xi = bi + 0.5 * (*xi - bi);
                        }
                        *c = cost(x);
                    }
                }
            }
        }
        let (point, c) = simplex
            .into_iter()
            .min_by(|a, b| {
                a.1.partial_cmp(&b.1)
                    .unwrap_or(Ordering::Equal)
                    .then_with(|| lexicographic(&a.0, &b.0))
            })
            .expect("simplex is never empty");
        Polished {
            point,
            value: -c,
            iterations,
        }
    }

    /// Runs from `start`, then restarts from the result until a restart no
    /// longer improves the value (at most `restarts` extra runs).
    pub fn maximize_restarted<F>(&self, f: F, start: &[f64], restarts: usize) -> Polished
    where
        F: Fn(&[f64]) -> f64,
    {
        let mut best = self.maximize(&f, start);
        let mut step = self.step;
        for _ in 0..restarts {
            step *= 0.5;
            let nm = Self {
                step,
                ..self.clone()
            };
            let next = nm.maximize(&f, &best.point);
            let iterations = best.iterations + next.iterations;
            if next.value > best.value {
                best = Polished { iterations, ..next };
            } else {
                best.iterations = iterations;
                break;
            }
        }
        best
    }
}

/// True if any coordinate sits on the unit box boundary.
pub fn on_box_boundary(point: &[f64]) -> bool {
    point
        .iter()
        .any(|&x| x.abs() < 1e-9 || (x - 1.0).abs() < 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_keeps_best_with_lexicographic_ties() {
        // plateau along x + y = 1
        let f = |x: &[f64]| -(x[0] + x[1] - 1.0).powi(2);
        let best = grid_search(2, 11, 3, f);
        assert_eq!(best.len(), 3);
        assert_eq!(best[0].point, vec![0.0, 1.0]);
        assert_eq!(best[0].value, 0.0);
        assert!(best
            .windows(2)
            .all(|w| rank(&w[0], &w[1]) != Ordering::Greater));
    }

    #[test]
    fn grid_skips_non_finite() {
        let f = |x: &[f64]| if x[0] > 0.5 { f64::NAN } else { x[0] };
        let best = grid_search(1, 11, 1, f);
        assert_eq!(best[0].point, vec![0.5]);
    }

    #[test]
    fn nelder_mead_finds_quadratic_peak() {
        let f = |x: &[f64]| -(x[0] - 0.3).powi(2) - 2.0 * (x[1] - 0.7).powi(2);
        let r = NelderMead::default().maximize(f, &[0.5, 0.5]);
        assert!((r.point[0] - 0.3).abs() < 1e-6);
        assert!((r.point[1] - 0.7).abs() < 1e-6);
        assert!(r.value > -1e-12);
    }

    #[test]
    fn nelder_mead_treats_nan_as_infeasible() {
        let f = |x: &[f64]| {
            if x[0] < 0.0 {
                f64::NAN
            } else {
                -(x[0] - 0.01).powi(2)
            }
        };
        let r = NelderMead::default().maximize(f, &[0.5]);
        assert!((r.point[0] - 0.01).abs() < 1e-6);
    }
}
