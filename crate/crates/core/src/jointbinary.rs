//! Two binary variables on the four-outcome square.
//!
//! Outcomes `(x, y) = (0,0), (0,1), (1,0), (1,1)` carry probabilities
//! `(a, b, c, d)`; the free coordinates are `(a, b, c)`. Perfect correlation
//! is the constraint `b = c = 0`, independence is `ad = bc`.

use crate::error::{Error, Result};
use crate::gradient::{
    gradient, Chart, ConstraintSet, GradientMode, GradientResult, Semantics, FEASIBILITY_TOL,
};
use crate::simplex::{entropy_of, resolve, ProbVector};

#[derive(Debug, Clone, PartialEq)]
pub struct JointPoint(ProbVector);

impl JointPoint {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Ok(Self(resolve(&[a, b, c, d])?))
    }

    pub fn from_free(a: f64, b: f64, c: f64) -> Result<Self> {
        Ok(Self(ProbVector::from_free(&[a, b, c])?))
    }

    pub fn a(&self) -> f64 {
        self.0.probs()[0]
    }
    pub fn b(&self) -> f64 {
        self.0.probs()[1]
    }
    pub fn c(&self) -> f64 {
        self.0.probs()[2]
    }
    pub fn d(&self) -> f64 {
        self.0.probs()[3]
    }

    /// `(a, b, c)`.
    pub fn free(&self) -> &[f64] {
        self.0.free()
    }

    pub fn probs(&self) -> [f64; 4] {
        [self.a(), self.b(), self.c(), self.d()]
    }

    pub fn as_prob_vector(&self) -> &ProbVector {
        &self.0
    }
}

/// Observed outcome counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountData {
    pub n_a: u64,
    pub n_b: u64,
    pub n_c: u64,
    pub n_d: u64,
}

impl CountData {
    pub fn new(n_a: u64, n_b: u64, n_c: u64, n_d: u64) -> Self {
        Self { n_a, n_b, n_c, n_d }
    }

    pub fn total(&self) -> u64 {
        self.n_a + self.n_b + self.n_c + self.n_d
    }

    fn as_f64(&self) -> [f64; 4] {
        [
            self.n_a as f64,
            self.n_b as f64,
            self.n_c as f64,
            self.n_d as f64,
        ]
    }
}

/// `(a, b, c, 1 - a - b - c)` from free coordinates.
pub fn probs4(abc: &[f64]) -> [f64; 4] {
    [abc[0], abc[1], abc[2], 1.0 - abc[0] - abc[1] - abc[2]]
}

fn correlation_raw(p: [f64; 4]) -> f64 {
    let [a, b, c, d] = p;
    let var = (c + d) * (a + b) * (b + d) * (a + c);
    if !(var > 0.0) {
        return f64::NAN;
    }
    (a * d - b * c) / var.sqrt()
}

/// `rho_xy = (ad - bc) / sqrt((c + d)(a + b)(b + d)(a + c))`.
pub fn correlation(p: &JointPoint) -> Result<f64> {
    let rho = correlation_raw(p.probs());
    if rho.is_nan() {
        return Err(Error::DegenerateMarginal);
    }
    Ok(rho.clamp(-1.0, 1.0))
}

pub fn joint_entropy(abc: &[f64]) -> f64 {
    entropy_of(&probs4(abc))
}

/// Entropy of `x`, whose `0` outcome has probability `a + b`.
pub fn entropy_x(abc: &[f64]) -> f64 {
    let px0 = abc[0] + abc[1];
    entropy_of(&[px0, 1.0 - px0])
}

/// Entropy of `y`, whose `0` outcome has probability `a + c`.
pub fn entropy_y(abc: &[f64]) -> f64 {
    let py0 = abc[0] + abc[2];
    entropy_of(&[py0, 1.0 - py0])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `rho_xy = 1`, embedded by `b = c = 0`.
    Correlated,
    /// `rho_xy = 0`, embedded by `ad = bc`.
    Independent,
}

impl Family {
    pub fn constraint(self) -> ConstraintSet {
        match self {
            Self::Correlated => correlated_constraint(),
            Self::Independent => independent_constraint(),
        }
    }

    /// Default approach toward the family from the interior at `at`.
    pub fn approach(self, at: &[f64]) -> GradientMode {
        match self {
            Self::Correlated => GradientMode::limit(&[0.0, 1.0, 1.0]).expect("nonzero"),
            Self::Independent => {
                let [a, b, c, d] = probs4(at);
                GradientMode::limit(&[d - a, -(a + c), -(a + b)])
                    .unwrap_or_else(|_| GradientMode::limit(&[0.0, -1.0, -1.0]).expect("nonzero"))
            }
        }
    }

    pub fn mode(self, semantics: Semantics, at: &[f64]) -> GradientMode {
        match semantics {
            Semantics::Constrained => GradientMode::Constrained(self.constraint()),
            Semantics::Limit => self.approach(at),
        }
    }
}

/// `b = c = 0`, charted by `a`.
pub fn correlated_constraint() -> ConstraintSet {
    ConstraintSet::pinned("b=c=0", 3, &[(1, 0.0), (2, 0.0)])
}

/// `ad = bc`, charted by the marginals `s = P_x(0)` and `t = P_y(0)`.
pub fn independent_constraint() -> ConstraintSet {
    let chart = Chart::new(
        2,
        |u| {
            let (s, t) = (u[0], u[1]);
            vec![s * t, s * (1.0 - t), (1.0 - s) * t]
        },
        |x| vec![x[0] + x[1], x[0] + x[2]],
    );
    ConstraintSet::new("ad=bc", chart).with_equality(
        |x| {
            let [a, b, c, d] = probs4(x);
            a * d - b * c
        },
        0.0,
    )
}

/// Gradient of the joint entropy `E_xy` under `mode`.
pub fn entropy_gradient(p: &JointPoint, mode: &GradientMode) -> Result<GradientResult> {
    gradient(&joint_entropy, p.free(), mode)
}

/// Fisher information. Constrained (`b = c = 0`) gives the 1x1 matrix
/// `1 / (a (1 - a))`; the limit semantics keep all three coordinates.
pub fn fisher_information(p: &JointPoint, semantics: Semantics) -> Result<Vec<Vec<f64>>> {
    match semantics {
        Semantics::Constrained => {
            check_correlated(p)?;
            let a = p.a();
            if a <= 0.0 || a >= 1.0 {
                return Err(Error::DomainError(p.free().to_vec()));
            }
            // outcomes a and 1 - a with d log P / da = 1/a and -1/(1-a)
            let f = a * (1.0 / a).powi(2) + (1.0 - a) * (1.0 / (1.0 - a)).powi(2);
            Ok(vec![vec![f]])
        }
        Semantics::Limit => {
            let probs = p.probs();
            if probs.iter().any(|&q| q <= 0.0) {
                return Err(Error::DomainError(p.free().to_vec()));
            }
            // d P_k / d p_i = delta_ik - delta_k3
            let dlog = |k: usize, i: usize| -> f64 {
                let dp = if k == i {
                    1.0
                } else if k == 3 {
                    -1.0
                } else {
                    0.0
                };
                dp / probs[k]
            };
            let mut m = vec![vec![0.0; 3]; 3];
            for (i, row) in m.iter_mut().enumerate() {
                for (j, cell) in row.iter_mut().enumerate() {
                    *cell = (0..4).map(|k| probs[k] * dlog(k, i) * dlog(k, j)).sum();
                }
            }
            Ok(m)
        }
    }
}

fn check_correlated(p: &JointPoint) -> Result<()> {
    let residual = p.b().abs().max(p.c().abs());
    if residual > FEASIBILITY_TOL {
        return Err(Error::InfeasiblePoint {
            label: "b=c=0".into(),
            residual,
        });
    }
    Ok(())
}

/// `n_k / p_k` with the zero-count convention `0 / 0 = 0`.
fn ratio(n: f64, p: f64, at: &JointPoint) -> Result<f64> {
    if n == 0.0 {
        Ok(0.0)
    } else if p > 0.0 {
        Ok(n / p)
    } else {
        Err(Error::DomainError(at.free().to_vec()))
    }
}

/// Log likelihood without the multinomial constant.
pub fn log_likelihood(counts: &CountData, p: &JointPoint) -> f64 {
    counts
        .as_f64()
        .iter()
        .zip(p.probs())
        .map(|(&n, q)| if n == 0.0 { 0.0 } else { n * q.ln() })
        .sum()
}

/// Gradient of `log L`: one component `n_a/a - (n - n_a)/(1 - a)` on
/// `b = c = 0`, three components in the ambient space.
pub fn log_likelihood_gradient(
    counts: &CountData,
    p: &JointPoint,
    semantics: Semantics,
) -> Result<GradientResult> {
    let [na, nb, nc, nd] = counts.as_f64();
    let n = na + nb + nc + nd;
    match semantics {
        Semantics::Constrained => {
            check_correlated(p)?;
            let a = p.a();
            let g = ratio(na, a, p)? - ratio(n - na, 1.0 - a, p)?;
            Ok(GradientResult::Finite(vec![g]))
        }
        Semantics::Limit => {
            let rest = ratio(nd, p.d(), p)?;
            Ok(GradientResult::Finite(vec![
                ratio(na, p.a(), p)? - rest,
                ratio(nb, p.b(), p)? - rest,
                ratio(nc, p.c(), p)? - rest,
            ]))
        }
    }
}

/// Maximum likelihood estimate: the observed frequencies. Under the
/// correlated constraint the data must not contain `(0,1)` or `(1,0)`.
pub fn mle(counts: &CountData, semantics: Semantics) -> Result<JointPoint> {
    let n = counts.total();
    if n == 0 {
        return Err(Error::EmptyData);
    }
    if semantics == Semantics::Constrained && (counts.n_b > 0 || counts.n_c > 0) {
        return Err(Error::InfeasiblePoint {
            label: "b=c=0".into(),
            residual: (counts.n_b + counts.n_c) as f64 / n as f64,
        });
    }
    let nf = n as f64;
    let a = counts.n_a as f64 / nf;
    let b = counts.n_b as f64 / nf;
    let c = counts.n_c as f64 / nf;
    let d = counts.n_d as f64 / nf;
    ProbVector::from_free(&[a, b, c])?;
    // keep d exactly n_d / n rather than 1 - a - b - c
    Ok(JointPoint(ProbVector::from_probs_exact(vec![a, b, c, d])))
}

type RelationFn = fn(&[f64]) -> f64;

/// Relations that hold identically on the family, as `(label, function of
/// (a, b, c))`.
pub fn relations(family: Family) -> Vec<(&'static str, RelationFn)> {
    match family {
        Family::Correlated => vec![
            ("<x>-<y>", |x| {
                let [_, b, c, _] = probs4(x);
                c - b
            }),
            ("V(x)-V(y)", |x| {
                let [a, b, c, d] = probs4(x);
                (c + d) * (a + b) - (b + d) * (a + c)
            }),
            ("E_xy-E_x", |x| joint_entropy(x) - entropy_x(x)),
            ("rho_xy-1", |x| correlation_raw(probs4(x)) - 1.0),
        ],
        Family::Independent => vec![
            ("P_xy(00)-P_x(0)P_y(0)", |x| {
                let [a, b, c, _] = probs4(x);
                a - (a + b) * (a + c)
            }),
            ("<xy>-<x><y>", |x| {
                let [_, b, c, d] = probs4(x);
                d - (c + d) * (b + d)
            }),
            ("P_x|y(0|0)-P_x(0)", |x| {
                let [a, b, c, _] = probs4(x);
                a / (a + c) - (a + b)
            }),
            ("E_xy-E_x-E_y", |x| {
                joint_entropy(x) - entropy_x(x) - entropy_y(x)
            }),
        ],
    }
}

/// Gradients of every family relation at `p`.
pub fn relation_suite(
    p: &JointPoint,
    family: Family,
    semantics: Semantics,
) -> Result<Vec<(String, GradientResult)>> {
    let mode = family.mode(semantics, p.free());
    relations(family)
        .into_iter()
        .map(|(label, f)| Ok((label.to_string(), gradient(&f, p.free(), &mode)?)))
        .collect()
}
