//! Gradients under the two embedding semantics.
//!
//! *Constrained*: the function is pulled back through a [`Chart`] of the
//! constraint manifold and differentiated in the chart coordinates, so the
//! result has one component per unconstrained direction.
//!
//! *Limit*: the full ambient gradient is evaluated at `at + eps * direction`
//! for a decreasing ladder of `eps` and the sequence is classified as
//! converging, diverging or neither.
//!
//! Central finite differences are the differentiation engine throughout.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A point satisfies a constraint set when every equality holds to this.
pub const FEASIBILITY_TOL: f64 = 1e-10;

/// Default central-difference step.
pub const DEFAULT_STEP: f64 = 1e-6;

/// Default approach ladder for limit gradients.
pub const DEFAULT_LADDER: [f64; 3] = [1e-3, 1e-4, 1e-5];

/// Successive ladder gradients closer than this (relative) count as converged.
pub const CONVERGED_RTOL: f64 = 1e-4;

/// A ladder whose increments shrink at least by this factor per step is
/// converging, otherwise it is treated as a blow-up when magnitudes grow.
pub const CONTRACTION: f64 = 0.5;

type VecMap = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
type Scalar = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Parametrization of a constraint manifold.
///
/// `embed` maps chart coordinates to ambient coordinates and `coords` is its
/// left inverse on the manifold.
#[derive(Clone)]
pub struct Chart {
    dim: usize,
    embed: VecMap,
    coords: VecMap,
}

impl Chart {
    pub fn new<E, C>(dim: usize, embed: E, coords: C) -> Self
    where
        E: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        C: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        Self {
            dim,
            embed: Arc::new(embed),
            coords: Arc::new(coords),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn embed(&self, u: &[f64]) -> Vec<f64> {
        (self.embed)(u)
    }

    pub fn coords(&self, x: &[f64]) -> Vec<f64> {
        (self.coords)(x)
    }
}

#[derive(Clone)]
struct Equality {
    func: Scalar,
    target: f64,
}

/// Equality constraints defining an isomorphic embedding, with the chart used
/// to differentiate along the manifold they cut out.
#[derive(Clone)]
pub struct ConstraintSet {
    label: String,
    equalities: Vec<Equality>,
    // None means the identity chart of the ambient space.
    chart: Option<Chart>,
}

impl fmt::Debug for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConstraintSet")
            .field("label", &self.label)
            .field("equalities", &self.equalities.len())
            .field("chart_dim", &self.chart.as_ref().map(Chart::dim))
            .finish()
    }
}

impl ConstraintSet {
    /// No constraints: the whole ambient space.
    pub fn empty() -> Self {
        Self {
            label: "none".into(),
            equalities: Vec::new(),
            chart: None,
        }
    }

    /// Constraints on a manifold described by `chart`; add the defining
    /// equalities with [`ConstraintSet::with_equality`].
    pub fn new(label: impl Into<String>, chart: Chart) -> Self {
        Self {
            label: label.into(),
            equalities: Vec::new(),
            chart: Some(chart),
        }
    }

    /// Coordinate pins `x[i] = v`. The chart drops the pinned coordinates.
    pub fn pinned(label: impl Into<String>, ambient_dim: usize, pins: &[(usize, f64)]) -> Self {
        let pins: Vec<(usize, f64)> = pins.to_vec();
        let free: Vec<usize> = (0..ambient_dim)
            .filter(|i| !pins.iter().any(|(j, _)| j == i))
            .collect();
        let embed_pins = pins.clone();
        let embed_free = free.clone();
        let chart = Chart::new(
            free.len(),
            move |u| {
                let mut x = vec![0.0; ambient_dim];
                for (k, &i) in embed_free.iter().enumerate() {
                    x[i] = u[k];
                }
                for &(i, v) in &embed_pins {
                    x[i] = v;
                }
                x
            },
            move |x| free.iter().map(|&i| x[i]).collect(),
        );
        let mut set = Self::new(label, chart);
        for (i, v) in pins {
            set = set.with_equality(move |x| x[i], v);
        }
        set
    }

    pub fn with_equality<F>(mut self, func: F, target: f64) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        self.equalities.push(Equality {
            func: Arc::new(func),
            target,
        });
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Number of equality constraints.
    pub fn len(&self) -> usize {
        self.equalities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equalities.is_empty()
    }

    pub fn chart(&self) -> Option<&Chart> {
        self.chart.as_ref()
    }

    /// Largest absolute constraint violation at `x`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        self.equalities
            .iter()
            .map(|e| ((e.func)(x) - e.target).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_satisfied(&self, x: &[f64]) -> bool {
        self.residual(x) <= FEASIBILITY_TOL
    }

    /// Dimension of the constrained space inside an ambient space of
    /// `ambient_dim` free coordinates.
    pub fn reduced_dim(&self, ambient_dim: usize) -> usize {
        self.chart.as_ref().map_or(ambient_dim, Chart::dim)
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        let residual = self.residual(x);
        if residual > FEASIBILITY_TOL || residual.is_nan() {
            return Err(Error::InfeasiblePoint {
                label: self.label.clone(),
                residual,
            });
        }
        Ok(())
    }
}

/// Approach path of a limit gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct Approach {
    direction: Vec<f64>,
    ladder: Vec<f64>,
}

impl Approach {
    /// Approach along `direction` (normalized here) with the default ladder.
    pub fn new(direction: &[f64]) -> Result<Self> {
        let norm = norm(direction);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::BadDirection(format!("{direction:?} has no length")));
        }
        Ok(Self {
            direction: direction.iter().map(|d| d / norm).collect(),
            ladder: DEFAULT_LADDER.to_vec(),
        })
    }

    pub fn with_ladder(mut self, ladder: &[f64]) -> Result<Self> {
        if ladder.is_empty() {
            return Err(Error::BadLadder("empty".into()));
        }
        if ladder.iter().any(|&e| !(e > 0.0) || !e.is_finite()) {
            return Err(Error::BadLadder(format!(
                "{ladder:?} has non-positive steps"
            )));
        }
        if ladder.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::BadLadder(format!(
                "{ladder:?} is not strictly decreasing"
            )));
        }
        self.ladder = ladder.to_vec();
        Ok(self)
    }

    /// Same direction, ladder multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let ladder: Vec<f64> = self.ladder.iter().map(|e| e * factor).collect();
        self.clone().with_ladder(&ladder)
    }

    pub fn direction(&self) -> &[f64] {
        &self.direction
    }

    pub fn ladder(&self) -> &[f64] {
        &self.ladder
    }
}

/// Which embedding semantics a module-level operation should use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Semantics {
    /// Differentiate on the constraint manifold.
    Constrained,
    /// Differentiate in the ambient space along an approach path.
    Limit,
}

impl Semantics {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Constrained => "constrained",
            Self::Limit => "limit",
        }
    }
}

#[derive(Debug, Clone)]
pub enum GradientMode {
    Constrained(ConstraintSet),
    Limit(Approach),
}

impl GradientMode {
    /// Constrained mode with the empty constraint set.
    pub fn unconstrained() -> Self {
        Self::Constrained(ConstraintSet::empty())
    }

    pub fn limit(direction: &[f64]) -> Result<Self> {
        Ok(Self::Limit(Approach::new(direction)?))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GradientResult {
    /// One component per free coordinate of the evaluation space.
    Finite(Vec<f64>),
    /// The ladder magnitudes blow up; carries the unit direction of blow-up.
    Diverging(Vec<f64>),
    Undefined,
}

impl GradientResult {
    pub fn finite(&self) -> Option<&[f64]> {
        match self {
            Self::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_diverging(&self) -> bool {
        matches!(self, Self::Diverging(_))
    }

    /// Euclidean norm, infinite when diverging and NaN when undefined.
    pub fn magnitude(&self) -> f64 {
        match self {
            Self::Finite(v) => norm(v),
            Self::Diverging(_) => f64::INFINITY,
            Self::Undefined => f64::NAN,
        }
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn eval<F: Fn(&[f64]) -> f64 + ?Sized>(f: &F, x: &[f64]) -> Result<f64> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::DomainError(x.to_vec()))
    }
}

/// Central differences along every coordinate.
pub fn finite_difference<F>(f: &F, at: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    if !(h > 0.0) {
        return Err(Error::BadParams(format!("step {h} must be positive")));
    }
    let mut probe = at.to_vec();
    let mut grad = Vec::with_capacity(at.len());
    for i in 0..at.len() {
        probe[i] = at[i] + h;
        let up = eval(f, &probe)?;
        probe[i] = at[i] - h;
        let down = eval(f, &probe)?;
        probe[i] = at[i];
        grad.push((up - down) / (2.0 * h));
    }
    Ok(grad)
}

/// Rate of change of `f` along the unit vector `direction`.
///
/// Evaluated as a single directional difference, which equals the dot
/// product with the ambient gradient but only probes points on the line
/// through `at`. That keeps faces of the simplex usable.
pub fn directed_gradient<F>(f: &F, at: &[f64], direction: &[f64]) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    if direction.len() != at.len() {
        return Err(Error::BadDirection(format!(
            "direction has {} components, point has {}",
            direction.len(),
            at.len()
        )));
    }
    let n = norm(direction);
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::BadDirection(format!(
            "|direction| = {n}, expected 1"
        )));
    }
    let h = DEFAULT_STEP;
    let shifted =
        |s: f64| -> Vec<f64> { at.iter().zip(direction).map(|(x, d)| x + s * d).collect() };
    let up = eval(f, &shifted(h))?;
    let down = eval(f, &shifted(-h))?;
    Ok((up - down) / (2.0 * h))
}

/// Gradient of `f` at `at` under the given semantics.
pub fn gradient<F>(f: &F, at: &[f64], mode: &GradientMode) -> Result<GradientResult>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    match mode {
        GradientMode::Constrained(set) => constrained_gradient(f, at, set),
        GradientMode::Limit(approach) => limit_gradient(f, at, approach),
    }
}

fn constrained_gradient<F>(f: &F, at: &[f64], set: &ConstraintSet) -> Result<GradientResult>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    set.check(at)?;
    let grad = match set.chart() {
        None => finite_difference(f, at, DEFAULT_STEP)?,
        Some(chart) => {
            let u = chart.coords(at);
            let pulled = |u: &[f64]| f(&chart.embed(u));
            finite_difference(&pulled, &u, DEFAULT_STEP)?
        }
    };
    Ok(GradientResult::Finite(grad))
}

fn limit_gradient<F>(f: &F, at: &[f64], approach: &Approach) -> Result<GradientResult>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    if approach.direction.len() != at.len() {
        return Err(Error::BadDirection(format!(
            "direction has {} components, point has {}",
            approach.direction.len(),
            at.len()
        )));
    }
    let mut grads = Vec::with_capacity(approach.ladder.len());
    for &eps in &approach.ladder {
        let x: Vec<f64> = at
            .iter()
            .zip(&approach.direction)
            .map(|(a, d)| a + eps * d)
            .collect();
        // The step must stay well inside the distance to the limit point.
        let h = DEFAULT_STEP.min(eps / 10.0);
        grads.push(finite_difference(f, &x, h)?);
    }
    Ok(classify(&grads, &approach.ladder))
}

fn classify(grads: &[Vec<f64>], ladder: &[f64]) -> GradientResult {
    let k = grads.len();
    if k == 1 {
        return GradientResult::Finite(grads[0].clone());
    }
    let mags: Vec<f64> = grads.iter().map(|g| norm(g)).collect();
    let steps: Vec<f64> = grads
        .windows(2)
        .map(|w| {
            let diff: Vec<f64> = w[1].iter().zip(&w[0]).map(|(b, a)| b - a).collect();
            norm(&diff)
        })
        .collect();

    let last_step = steps[steps.len() - 1];
    let scale = mags[k - 1].max(mags[k - 2]);
    let converged = last_step <= CONVERGED_RTOL * scale + 1e-10;
    let contracting = steps.len() >= 2 && steps.windows(2).all(|w| w[1] <= CONTRACTION * w[0]);

    if converged || contracting {
        // Linear extrapolation in eps from the last two rungs.
        let (e1, e2) = (ladder[k - 2], ladder[k - 1]);
        let w = e2 / (e1 - e2);
        let limit = grads[k - 1]
            .iter()
            .zip(&grads[k - 2])
            .map(|(g2, g1)| g2 + (g2 - g1) * w)
            .collect();
        return GradientResult::Finite(limit);
    }
    if mags.windows(2).all(|w| w[1] > w[0]) {
        let last = &grads[k - 1];
        let n = mags[k - 1];
        return GradientResult::Diverging(last.iter().map(|g| g / n).collect());
    }
    GradientResult::Undefined
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::entropy_of;

    fn joint_entropy(abc: &[f64]) -> f64 {
        let d = 1.0 - abc.iter().sum::<f64>();
        entropy_of(&[abc[0], abc[1], abc[2], d])
    }

    #[test]
    fn fd_of_square() {
        let g = finite_difference(&|x: &[f64]| x[0] * x[0], &[0.5], DEFAULT_STEP).unwrap();
        assert!((g[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fd_of_coin_entropy() {
        let coin = |x: &[f64]| entropy_of(&[x[0], 1.0 - x[0]]);
        let g = finite_difference(&coin, &[0.3], DEFAULT_STEP).unwrap();
        assert!((g[0] + (0.3f64 / 0.7).ln()).abs() < 1e-6);
        let g = finite_difference(&coin, &[0.5], DEFAULT_STEP).unwrap();
        assert!(g[0].abs() < 1e-9);
    }

    #[test]
    fn fd_reports_domain_errors() {
        let f = |x: &[f64]| x[0].ln();
        assert!(matches!(
            finite_difference(&f, &[0.0], 1e-6),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn constrained_entropy_at_correlated_point() {
        let set = ConstraintSet::pinned("b=c=0", 3, &[(1, 0.0), (2, 0.0)]);
        let g = gradient(
            &joint_entropy,
            &[0.5, 0.0, 0.0],
            &GradientMode::Constrained(set),
        )
        .unwrap();
        let v = g.finite().unwrap();
        assert_eq!(v.len(), 1);
        assert!(v[0].abs() < 1e-9);
    }

    #[test]
    fn limit_entropy_diverges() {
        let mode = GradientMode::limit(&[0.0, 1.0, 1.0]).unwrap();
        let g = gradient(&joint_entropy, &[0.5, 0.0, 0.0], &mode).unwrap();
        assert!(g.is_diverging(), "{g:?}");
    }

    #[test]
    fn constant_function_has_zero_gradient() {
        let f = |_: &[f64]| 2.5;
        let set = ConstraintSet::pinned("c=0", 3, &[(2, 0.0)]);
        for mode in [
            GradientMode::unconstrained(),
            GradientMode::Constrained(set),
            GradientMode::limit(&[1.0, 1.0, 1.0]).unwrap(),
        ] {
            let g = gradient(&f, &[0.2, 0.3, 0.0], &mode).unwrap();
            assert!(g.finite().unwrap().iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn infeasible_point_is_rejected() {
        let set = ConstraintSet::pinned("b=c=0", 3, &[(1, 0.0), (2, 0.0)]);
        let err = gradient(
            &joint_entropy,
            &[0.5, 0.1, 0.0],
            &GradientMode::Constrained(set),
        );
        assert!(matches!(err, Err(Error::InfeasiblePoint { .. })));
    }

    #[test]
    fn ladder_validation() {
        let a = Approach::new(&[1.0]).unwrap();
        assert!(a.clone().with_ladder(&[1e-3, 1e-3]).is_err());
        assert!(a.clone().with_ladder(&[1e-3, -1e-4]).is_err());
        assert!(a.clone().with_ladder(&[]).is_err());
        assert!(a.with_ladder(&[1e-2, 1e-4]).is_ok());
        assert!(Approach::new(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn directed_gradient_requires_unit_direction() {
        let f = |x: &[f64]| x[0] + x[1];
        assert!(directed_gradient(&f, &[0.1, 0.2], &[0.0, 0.0]).is_err());
        assert!(directed_gradient(&f, &[0.1, 0.2], &[1.0, 1.0]).is_err());
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let d = directed_gradient(&f, &[0.1, 0.2], &[s, s]).unwrap();
        assert!((d - 2.0 * s).abs() < 1e-9);
    }

    #[test]
    fn linear_convergence_is_finite() {
        // (c - b)(a - d) changes by O(eps) along the approach.
        let f = |x: &[f64]| {
            let d = 1.0 - x[0] - x[1] - x[2];
            (x[2] - x[1]) * (x[0] - d)
        };
        let mode = GradientMode::limit(&[0.0, 1.0, 1.0]).unwrap();
        let g = gradient(&f, &[0.3, 0.0, 0.0], &mode).unwrap();
        let v = g.finite().expect("finite");
        assert!(v[0].abs() < 1e-7);
        assert!((v[1] - 0.4).abs() < 1e-7);
        assert!((v[2] + 0.4).abs() < 1e-7);
    }
}
