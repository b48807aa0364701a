//! Mixed (`P_M`) and behavioural (`P_B`) strategy spaces for the two-stage
//! decision tree where `x` is chosen first and `y` may depend on it.
//!
//! Mixed coordinates are `(alpha1, beta1, beta2, beta3)` where `beta_j` is
//! the probability of Y's pure listing `(y_l, y_r)` = `(0,1), (1,0), (1,1)`.
//! Behavioural coordinates are `(p, q, r)`: `P(x = 1)`, `P(y = 1 | x = 0)`
//! and `P(y = 1 | x = 1)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gradient::{gradient, Chart, ConstraintSet, GradientMode, GradientResult};
use crate::jointbinary::JointPoint;
use crate::simplex::entropy_of;

const RANGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedPoint {
    pub alpha1: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
}

impl MixedPoint {
    pub fn new(alpha1: f64, beta1: f64, beta2: f64, beta3: f64) -> Result<Self> {
        let m = Self {
            alpha1,
            beta1,
            beta2,
            beta3,
        };
        for (index, &value) in m.coords().iter().enumerate() {
            if !value.is_finite() || !(-RANGE_TOL..=1.0 + RANGE_TOL).contains(&value) {
                return Err(Error::OutOfRange { index, value });
            }
        }
        let sum = beta1 + beta2 + beta3;
        if sum > 1.0 + RANGE_TOL {
            return Err(Error::NotNormalized { sum });
        }
        Ok(m)
    }

    pub fn coords(&self) -> [f64; 4] {
        [self.alpha1, self.beta1, self.beta2, self.beta3]
    }

    /// The equivalent behavioural point, `(alpha1, beta2 + beta3, beta1 + beta3)`.
    pub fn to_behavioural(&self) -> BehaviouralPoint {
        BehaviouralPoint {
            p: self.alpha1,
            q: self.beta2 + self.beta3,
            r: self.beta1 + self.beta3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BehaviouralPoint {
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

impl BehaviouralPoint {
    pub fn new(p: f64, q: f64, r: f64) -> Result<Self> {
        for (index, &value) in [p, q, r].iter().enumerate() {
            if !value.is_finite() || !(-RANGE_TOL..=1.0 + RANGE_TOL).contains(&value) {
                return Err(Error::OutOfRange { index, value });
            }
        }
        Ok(Self { p, q, r })
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.p, self.q, self.r]
    }
}

/// Joint `(P00, P01, P10, P11)` from raw mixed coordinates.
pub fn mixed_probs(m: &[f64]) -> [f64; 4] {
    let (a1, b1, b2, b3) = (m[0], m[1], m[2], m[3]);
    [
        (1.0 - a1) * (1.0 - b2 - b3),
        (1.0 - a1) * (b2 + b3),
        a1 * (1.0 - b1 - b3),
        a1 * (b1 + b3),
    ]
}

/// Joint `(P00, P01, P10, P11)` from raw behavioural coordinates.
pub fn behavioural_probs(b: &[f64]) -> [f64; 4] {
    let (p, q, r) = (b[0], b[1], b[2]);
    [(1.0 - p) * (1.0 - q), (1.0 - p) * q, p * (1.0 - r), p * r]
}

fn joint(probs: [f64; 4]) -> JointPoint {
    let [a, b, c, d] = probs.map(|v| v.clamp(0.0, 1.0));
    JointPoint::new(a, b, c, d).expect("products of probabilities are normalized")
}

pub fn mixed_joint(m: &MixedPoint) -> JointPoint {
    joint(mixed_probs(&m.coords()))
}

pub fn behavioural_joint(b: &BehaviouralPoint) -> JointPoint {
    joint(behavioural_probs(&b.coords()))
}

pub fn mixed_correlation(m: &MixedPoint) -> Result<f64> {
    let a1 = m.alpha1;
    let y = m.beta2 + m.beta3 + a1 * (m.beta1 - m.beta2);
    let (vx, vy) = (a1 * (1.0 - a1), y * (1.0 - y));
    if !(vx > 0.0 && vy > 0.0) {
        return Err(Error::DegenerateMarginal);
    }
    Ok((vx.sqrt() * (m.beta1 - m.beta2) / vy.sqrt()).clamp(-1.0, 1.0))
}

pub fn behavioural_correlation(b: &BehaviouralPoint) -> Result<f64> {
    let y = b.q + b.p * (b.r - b.q);
    let (vx, vy) = (b.p * (1.0 - b.p), y * (1.0 - y));
    if !(vx > 0.0 && vy > 0.0) {
        return Err(Error::DegenerateMarginal);
    }
    Ok((vx.sqrt() * (b.r - b.q) / vy.sqrt()).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Mixed,
    Behavioural,
}

impl Space {
    pub fn dim(self) -> usize {
        match self {
            Self::Mixed => 4,
            Self::Behavioural => 3,
        }
    }

    pub fn probs(self, x: &[f64]) -> [f64; 4] {
        match self {
            Self::Mixed => mixed_probs(x),
            Self::Behavioural => behavioural_probs(x),
        }
    }

    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            Self::Mixed => &["alpha1", "beta1", "beta2", "beta3"],
            Self::Behavioural => &["p", "q", "r"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean_x: f64,
    pub mean_y: f64,
    pub mean_xy: f64,
    pub var_x: f64,
    pub var_y: f64,
    pub entropy_x: f64,
    pub entropy_y: f64,
    pub entropy_xy: f64,
}

/// Moments of the joint distribution induced by a point of `space`.
pub fn moments(point: &[f64], space: Space) -> Result<Moments> {
    if point.len() != space.dim() {
        return Err(Error::BadDimension(point.len()));
    }
    Ok(moments_of(space.probs(point)))
}

fn moments_of(probs: [f64; 4]) -> Moments {
    let [a, b, c, d] = probs;
    let x = c + d;
    let y = b + d;
    Moments {
        mean_x: x,
        mean_y: y,
        mean_xy: d,
        var_x: x * (1.0 - x),
        var_y: y * (1.0 - y),
        entropy_x: entropy_of(&[1.0 - x, x]),
        entropy_y: entropy_of(&[1.0 - y, y]),
        entropy_xy: entropy_of(&[a, b, c, d]),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    PerfectlyCorrelated,
    Independent,
}

impl Case {
    pub fn name(self) -> &'static str {
        match self {
            Self::PerfectlyCorrelated => "corr",
            Self::Independent => "ind",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    Mixed,
    Behavioural,
    MixedConstrained,
    BehaviouralConstrained,
}

impl Column {
    pub const ALL: [Column; 4] = [
        Column::Mixed,
        Column::Behavioural,
        Column::MixedConstrained,
        Column::BehaviouralConstrained,
    ];

    pub fn space(self) -> Space {
        match self {
            Self::Mixed | Self::MixedConstrained => Space::Mixed,
            Self::Behavioural | Self::BehaviouralConstrained => Space::Behavioural,
        }
    }

    pub fn is_constrained(self) -> bool {
        matches!(self, Self::MixedConstrained | Self::BehaviouralConstrained)
    }

    pub fn label(self, case: Case) -> &'static str {
        match (self, case) {
            (Self::Mixed, _) => "P_M",
            (Self::Behavioural, _) => "P_B",
            (Self::MixedConstrained, Case::PerfectlyCorrelated) => "P_M|beta1=1",
            (Self::BehaviouralConstrained, Case::PerfectlyCorrelated) => "P_B|(q,r)=(0,1)",
            (Self::MixedConstrained, Case::Independent) => "P_M|beta1=beta2",
            (Self::BehaviouralConstrained, Case::Independent) => "P_B|r=q",
        }
    }

    pub fn parameters(self, case: Case) -> &'static [&'static str] {
        match (self, case) {
            (Self::Mixed | Self::Behavioural, _) => self.space().parameters(),
            (Self::MixedConstrained, Case::PerfectlyCorrelated) => &["alpha1"],
            (Self::BehaviouralConstrained, Case::PerfectlyCorrelated) => &["p"],
            (Self::MixedConstrained, Case::Independent) => &["alpha1", "beta_bar"],
            (Self::BehaviouralConstrained, Case::Independent) => &["p", "q"],
        }
    }

    pub fn dim(self, case: Case) -> usize {
        self.parameters(case).len()
    }

    /// The gradient mode of this column at `point`, a point of the case's
    /// constraint manifold in the column's own coordinates.
    pub fn mode(self, case: Case, point: &[f64]) -> GradientMode {
        use Case::*;
        match (self, case) {
            (Self::Mixed, PerfectlyCorrelated) => {
                GradientMode::limit(&[0.0, -3.0, 1.0, 1.0]).expect("nonzero")
            }
            (Self::Behavioural, PerfectlyCorrelated) => {
                GradientMode::limit(&[0.0, 1.0, -1.0]).expect("nonzero")
            }
            (Self::Mixed, Independent) => {
                GradientMode::limit(&[0.0, 0.0, 1.0, 0.0]).expect("nonzero")
            }
            (Self::Behavioural, Independent) => {
                GradientMode::limit(&[0.0, 0.0, 1.0]).expect("nonzero")
            }
            (Self::MixedConstrained, PerfectlyCorrelated) => GradientMode::Constrained(
                ConstraintSet::pinned("beta1=1", 4, &[(1, 1.0), (2, 0.0), (3, 0.0)]),
            ),
            (Self::BehaviouralConstrained, PerfectlyCorrelated) => GradientMode::Constrained(
                ConstraintSet::pinned("(q,r)=(0,1)", 3, &[(1, 0.0), (2, 1.0)]),
            ),
            (Self::MixedConstrained, Independent) => {
                // beta1 = beta2 held at the base value, beta_bar = beta1 + beta3
                let b1 = point[1];
                let chart = Chart::new(
                    2,
                    move |u| vec![u[0], b1, b1, u[1] - b1],
                    |x| vec![x[0], x[1] + x[3]],
                );
                GradientMode::Constrained(
                    ConstraintSet::new("beta1=beta2", chart).with_equality(|x| x[1] - x[2], 0.0),
                )
            }
            (Self::BehaviouralConstrained, Independent) => {
                let chart = Chart::new(2, |u| vec![u[0], u[1], u[1]], |x| vec![x[0], x[1]]);
                GradientMode::Constrained(
                    ConstraintSet::new("r=q", chart).with_equality(|x| x[2] - x[1], 0.0),
                )
            }
        }
    }
}

type RowFn = fn([f64; 4]) -> f64;

fn corr_of(p: [f64; 4]) -> f64 {
    let [a, b, c, d] = p;
    let var = (c + d) * (a + b) * (b + d) * (a + c);
    (a * d - b * c) / var.sqrt()
}

fn cov(p: [f64; 4]) -> f64 {
    let m = moments_of(p);
    m.mean_xy - m.mean_x * m.mean_y
}

/// Table rows as functions of the joint `(P00, P01, P10, P11)`.
pub fn rows(case: Case) -> Vec<(&'static str, RowFn)> {
    match case {
        Case::PerfectlyCorrelated => vec![
            ("P(0,0)+P(1,1)", |p| p[0] + p[3]),
            ("P(0,1)+P(1,0)", |p| p[1] + p[2]),
            ("P_x|y(0|0)", |p| p[0] / (p[0] + p[2])),
            ("P_x|y(0|1)", |p| p[1] / (p[1] + p[3])),
            ("<x>", |p| moments_of(p).mean_x),
            ("<y>", |p| moments_of(p).mean_y),
            ("<xy>", |p| p[3]),
            ("V(x)+V(y)-2cov(x,y)", |p| {
                let m = moments_of(p);
                m.var_x + m.var_y - 2.0 * cov(p)
            }),
            ("E_xy-E_x", |p| {
                let m = moments_of(p);
                m.entropy_xy - m.entropy_x
            }),
            ("rho_xy", corr_of),
        ],
        Case::Independent => vec![
            ("P(0,0)-P_x(0)P_y(0)", |p| {
                p[0] - (p[0] + p[1]) * (p[0] + p[2])
            }),
            ("P(0,1)-P_x(0)P_y(1)", |p| {
                p[1] - (p[0] + p[1]) * (p[1] + p[3])
            }),
            ("P(1,0)-P_x(1)P_y(0)", |p| {
                p[2] - (p[2] + p[3]) * (p[0] + p[2])
            }),
            ("P(1,1)-P_x(1)P_y(1)", |p| {
                p[3] - (p[2] + p[3]) * (p[1] + p[3])
            }),
            ("P_x|y(0|0)-P_x(0)", |p| {
                p[0] / (p[0] + p[2]) - (p[0] + p[1])
            }),
            ("P_x|y(0|1)-P_x(0)", |p| {
                p[1] / (p[1] + p[3]) - (p[0] + p[1])
            }),
            ("<xy>-<x><y>", cov),
            ("E_xy-E_x-E_y", |p| {
                let m = moments_of(p);
                m.entropy_xy - m.entropy_x - m.entropy_y
            }),
            ("rho_xy", corr_of),
        ],
    }
}

/// Points on the case's manifold, one per sample, in mixed and behavioural
/// coordinates. Both columns of a space share the same points.
pub fn sample_points(case: Case, seed: u64, n: usize) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mixed = Vec::with_capacity(n);
    let mut behavioural = Vec::with_capacity(n);
    for _ in 0..n {
        match case {
            Case::PerfectlyCorrelated => {
                mixed.push(vec![rng.random_range(0.05..0.95), 1.0, 0.0, 0.0]);
                behavioural.push(vec![rng.random_range(0.05..0.95), 0.0, 1.0]);
            }
            Case::Independent => {
                let a1 = rng.random_range(0.05..0.95);
                let b = rng.random_range(0.05..0.3);
                let b3 = rng.random_range(0.05..0.3);
                mixed.push(vec![a1, b, b, b3]);
                let p = rng.random_range(0.05..0.95);
                let q = rng.random_range(0.05..0.95);
                behavioural.push(vec![p, q, q]);
            }
        }
    }
    (mixed, behavioural)
}

pub const DEFAULT_SEED: u64 = 20;
pub const DEFAULT_SAMPLES: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub point: Vec<f64>,
    pub gradient: GradientResult,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Pattern {
    /// Zero at every sample within `1e-8`.
    Zero,
    Diverging,
    /// Gradient at the first sample.
    Nonzero(Vec<f64>),
    Undefined,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub column: Column,
    pub samples: Vec<Sample>,
}

impl Entry {
    pub fn pattern(&self) -> Pattern {
        if self.samples.iter().any(|s| s.gradient.is_diverging()) {
            return Pattern::Diverging;
        }
        if self
            .samples
            .iter()
            .any(|s| matches!(s.gradient, GradientResult::Undefined))
        {
            return Pattern::Undefined;
        }
        if self.samples.iter().all(|s| s.gradient.magnitude() <= 1e-8) {
            return Pattern::Zero;
        }
        match &self.samples[0].gradient {
            GradientResult::Finite(g) => Pattern::Nonzero(g.clone()),
            _ => Pattern::Undefined,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub label: &'static str,
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1 {
    pub case: Case,
    pub rows: Vec<Row>,
}

impl Table1 {
    pub fn columns(&self) -> [Column; 4] {
        Column::ALL
    }
}

pub fn table1(case: Case) -> Result<Table1> {
    table1_with(case, DEFAULT_SEED, DEFAULT_SAMPLES)
}

/// Evaluates every row in every column at `n` seeded points.
pub fn table1_with(case: Case, seed: u64, n: usize) -> Result<Table1> {
    let (mixed, behavioural) = sample_points(case, seed, n);
    let rows = rows(case)
        .into_iter()
        .map(|(label, row)| {
            let entries = Column::ALL
                .iter()
                .map(|&column| {
                    let space = column.space();
                    let points = match space {
                        Space::Mixed => &mixed,
                        Space::Behavioural => &behavioural,
                    };
                    let f = move |x: &[f64]| row(space.probs(x));
                    let samples = points
                        .iter()
                        .map(|pt| {
                            let mode = column.mode(case, pt);
                            Ok(Sample {
                                point: pt.clone(),
                                gradient: gradient(&f, pt, &mode)?,
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Entry { column, samples })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Row { label, entries })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table1 { case, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jointbinary::correlation;

    #[test]
    fn joint_examples() {
        let m = MixedPoint::new(1.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(mixed_joint(&m).probs(), [0.0, 0.0, 0.0, 1.0]);
        let m = MixedPoint::new(0.5, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(mixed_joint(&m).probs(), [0.5, 0.0, 0.0, 0.5]);
        let b = BehaviouralPoint::new(0.5, 1.0, 0.0).unwrap();
        assert_eq!(behavioural_joint(&b).probs(), [0.0, 0.5, 0.5, 0.0]);
    }

    #[test]
    fn correlation_routes() {
        let m = MixedPoint::new(0.5, 1.0, 0.0, 0.0).unwrap();
        assert!((mixed_correlation(&m).unwrap() - 1.0).abs() < 1e-15);
        let b = BehaviouralPoint::new(0.3, 0.4, 0.4).unwrap();
        assert_eq!(behavioural_correlation(&b).unwrap(), 0.0);
        let m = MixedPoint::new(0.3, 0.2, 0.1, 0.4).unwrap();
        let via_joint = correlation(&mixed_joint(&m)).unwrap();
        assert!((mixed_correlation(&m).unwrap() - via_joint).abs() < 1e-12);
        assert!((behavioural_correlation(&m.to_behavioural()).unwrap() - via_joint).abs() < 1e-12);
    }

    #[test]
    fn moments_examples() {
        let m = moments(&[0.3, 0.0, 1.0], Space::Behavioural).unwrap();
        assert!((m.mean_x - 0.3).abs() < 1e-15);
        assert!((m.mean_y - 0.3).abs() < 1e-15);
        assert!((m.mean_xy - 0.3).abs() < 1e-15);
        let m = moments(&[0.7, 0.0, 0.0, 1.0], Space::Mixed).unwrap();
        assert_eq!(m.mean_y, 1.0);
        assert!(moments(&[0.5], Space::Mixed).is_err());
    }

    #[test]
    fn dimensions() {
        let dims = |case| Column::ALL.map(|c| c.dim(case));
        assert_eq!(dims(Case::PerfectlyCorrelated), [4, 3, 1, 1]);
        assert_eq!(dims(Case::Independent), [4, 3, 2, 2]);
    }
}
