//! Bivariate normal family with a correlation parameter.
//!
//! The independent family sits inside the correlated one at `rho = 0`. With
//! `rho` pinned the independence relations have zero gradient; approached as
//! a limit they keep a nonzero `rho` component.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gradient::{gradient, ConstraintSet, GradientMode, GradientResult, Semantics};
use crate::quadrature::integrate_2d;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalParams {
    pub mu_x: f64,
    pub mu_y: f64,
    pub sigma_x: f64,
    pub sigma_y: f64,
    pub rho: f64,
}

impl NormalParams {
    pub fn new(mu_x: f64, mu_y: f64, sigma_x: f64, sigma_y: f64, rho: f64) -> Result<Self> {
        let p = Self {
            mu_x,
            mu_y,
            sigma_x,
            sigma_y,
            rho,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.mu_x, self.mu_y, self.sigma_x, self.sigma_y, self.rho]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::BadParams("non-finite normal parameter".into()));
        }
        if self.sigma_x <= 0.0 || self.sigma_y <= 0.0 {
            return Err(Error::BadParams(format!(
                "standard deviations must be positive, got ({}, {})",
                self.sigma_x, self.sigma_y
            )));
        }
        if self.rho.abs() >= 1.0 {
            return Err(Error::BadParams(format!(
                "|rho| = {} must be < 1",
                self.rho.abs()
            )));
        }
        Ok(())
    }

    pub fn with_rho(self, rho: f64) -> Self {
        Self { rho, ..self }
    }

    /// Mean of `x` conditioned on `y`.
    pub fn conditional_mean(&self, y: f64) -> f64 {
        self.mu_x + self.rho * self.sigma_x / self.sigma_y * (y - self.mu_y)
    }

    /// `(mu_x, mu_y, sigma_x, sigma_y, rho)`.
    pub fn coords(&self) -> [f64; 5] {
        [self.mu_x, self.mu_y, self.sigma_x, self.sigma_y, self.rho]
    }
}

fn normal(x: f64, mu: f64, sigma: f64) -> f64 {
    let z = (x - mu) / sigma;
    (-0.5 * z * z).exp() / ((2.0 * PI).sqrt() * sigma)
}

fn joint_raw(x: f64, y: f64, mx: f64, my: f64, sx: f64, sy: f64, rho: f64) -> f64 {
    if sx <= 0.0 || sy <= 0.0 || rho.abs() >= 1.0 {
        return f64::NAN;
    }
    let (u, v) = ((x - mx) / sx, (y - my) / sy);
    let one_minus = 1.0 - rho * rho;
    let q = (u * u - 2.0 * rho * u * v + v * v) / one_minus;
    (-0.5 * q).exp() / (2.0 * PI * sx * sy * one_minus.sqrt())
}

fn conditional_raw(x: f64, y: f64, mx: f64, my: f64, sx: f64, sy: f64, rho: f64) -> f64 {
    if sx <= 0.0 || sy <= 0.0 || rho.abs() >= 1.0 {
        return f64::NAN;
    }
    let mean = mx + rho * sx / sy * (y - my);
    normal(x, mean, sx * (1.0 - rho * rho).sqrt())
}

/// Correlated bivariate normal density.
pub fn joint_pdf(params: &NormalParams, x: f64, y: f64) -> Result<f64> {
    params.validate()?;
    let p = params;
    Ok(joint_raw(x, y, p.mu_x, p.mu_y, p.sigma_x, p.sigma_y, p.rho))
}

pub fn marginal_x_pdf(params: &NormalParams, x: f64) -> f64 {
    normal(x, params.mu_x, params.sigma_x)
}

pub fn marginal_y_pdf(params: &NormalParams, y: f64) -> f64 {
    normal(y, params.mu_y, params.sigma_y)
}

/// Density of `x` given `y`: normal with the conditioned mean and variance
/// `sigma_x^2 (1 - rho^2)`.
pub fn conditional_pdf(params: &NormalParams, x: f64, y: f64) -> Result<f64> {
    params.validate()?;
    let p = params;
    Ok(conditional_raw(
        x, y, p.mu_x, p.mu_y, p.sigma_x, p.sigma_y, p.rho,
    ))
}

/// Relations that vanish identically in the independent family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `P'_xy - P'_x P'_y`, pointwise.
    JointMinusProduct,
    /// `P'_{x|y} - P'_x`, pointwise.
    ConditionalMinusMarginal,
    /// `<xy>' - <x>'<y>'`, an expectation.
    Covariance,
}

impl Relation {
    pub const ALL: [Relation; 3] = [
        Relation::JointMinusProduct,
        Relation::ConditionalMinusMarginal,
        Relation::Covariance,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Self::JointMinusProduct => "P'xy-P'xP'y",
            Self::ConditionalMinusMarginal => "P'x|y-P'x",
            Self::Covariance => "<xy>'-<x>'<y>'",
        }
    }

    /// Pointwise relations depend on `(x, y)` as well as the five parameters.
    pub fn is_pointwise(self) -> bool {
        !matches!(self, Self::Covariance)
    }

    /// Number of gradient coordinates: 7 pointwise, 5 for expectations.
    pub fn arity(self) -> usize {
        if self.is_pointwise() {
            7
        } else {
            5
        }
    }

    pub fn rho_index(self) -> usize {
        self.arity() - 1
    }

    /// Value at coordinates `(x, y, mu_x, mu_y, sigma_x, sigma_y, rho)` or
    /// `(mu_x, mu_y, sigma_x, sigma_y, rho)`.
    pub fn value(self, c: &[f64]) -> f64 {
        match self {
            Self::JointMinusProduct => {
                let [x, y, mx, my, sx, sy, rho] = seven(c);
                joint_raw(x, y, mx, my, sx, sy, rho) - normal(x, mx, sx) * normal(y, my, sy)
            }
            Self::ConditionalMinusMarginal => {
                let [x, y, mx, my, sx, sy, rho] = seven(c);
                conditional_raw(x, y, mx, my, sx, sy, rho) - normal(x, mx, sx)
            }
            Self::Covariance => {
                let (mx, my, sx, sy, rho) = (c[0], c[1], c[2], c[3], c[4]);
                if sx <= 0.0 || sy <= 0.0 || rho.abs() >= 1.0 {
                    return f64::NAN;
                }
                let exy = mx * my + rho * sx * sy;
                exy - mx * my
            }
        }
    }

    /// Evaluation coordinates for `params` (and the probe for pointwise
    /// relations).
    pub fn coordinates(self, params: &NormalParams, probe: Option<(f64, f64)>) -> Result<Vec<f64>> {
        let [mx, my, sx, sy, rho] = params.coords();
        if self.is_pointwise() {
            let (x, y) = probe.ok_or_else(|| {
                Error::BadParams(format!("{} needs an (x, y) probe", self.label()))
            })?;
            Ok(vec![x, y, mx, my, sx, sy, rho])
        } else {
            Ok(vec![mx, my, sx, sy, rho])
        }
    }

    /// `rho` pinned to zero.
    pub fn constraint(self) -> ConstraintSet {
        ConstraintSet::pinned("rho=0", self.arity(), &[(self.rho_index(), 0.0)])
    }

    /// Approach `rho -> 0` along the `rho` axis.
    pub fn approach(self) -> GradientMode {
        let mut dir = vec![0.0; self.arity()];
        dir[self.rho_index()] = 1.0;
        GradientMode::limit(&dir).expect("unit axis")
    }

    pub fn mode(self, semantics: Semantics) -> GradientMode {
        match semantics {
            Semantics::Constrained => GradientMode::Constrained(self.constraint()),
            Semantics::Limit => self.approach(),
        }
    }
}

fn seven(c: &[f64]) -> [f64; 7] {
    [c[0], c[1], c[2], c[3], c[4], c[5], c[6]]
}

/// Gradient of `relation` at the independent point `params` (which must have
/// `rho = 0`). Constrained results have 6 or 4 components (no `rho`), limit
/// results 7 or 5.
pub fn relation_gradients(
    params: &NormalParams,
    relation: Relation,
    semantics: Semantics,
    probe: Option<(f64, f64)>,
) -> Result<GradientResult> {
    params.validate()?;
    relation_gradient_with(params, relation, &relation.mode(semantics), probe)
}

/// As [`relation_gradients`] with an explicit gradient mode.
pub fn relation_gradient_with(
    params: &NormalParams,
    relation: Relation,
    mode: &GradientMode,
    probe: Option<(f64, f64)>,
) -> Result<GradientResult> {
    let at = relation.coordinates(params, probe)?;
    gradient(&|c: &[f64]| relation.value(c), &at, mode)
}

/// `d/drho` of the relation at `rho = 0`, in closed form.
pub fn rho_derivative_at_zero(
    params: &NormalParams,
    relation: Relation,
    probe: Option<(f64, f64)>,
) -> Result<f64> {
    let p = params;
    match relation {
        Relation::Covariance => Ok(p.sigma_x * p.sigma_y),
        Relation::JointMinusProduct | Relation::ConditionalMinusMarginal => {
            let (x, y) = probe.ok_or_else(|| {
                Error::BadParams(format!("{} needs an (x, y) probe", relation.label()))
            })?;
            let (u, v) = ((x - p.mu_x) / p.sigma_x, (y - p.mu_y) / p.sigma_y);
            let px = marginal_x_pdf(p, x);
            Ok(match relation {
                Relation::JointMinusProduct => px * marginal_y_pdf(p, y) * u * v,
                _ => px * u * v,
            })
        }
    }
}

/// Moments computed by quadrature over `mu +- 8 sigma`.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureMoments {
    pub mass: f64,
    pub mean_x: f64,
    pub mean_y: f64,
    pub mean_xy: f64,
}

/// Gauss-Legendre tensor quadrature with `nodes` per axis.
pub fn moments_by_quadrature(params: &NormalParams, nodes: usize) -> Result<QuadratureMoments> {
    params.validate()?;
    let p = *params;
    let xs = (p.mu_x - 8.0 * p.sigma_x, p.mu_x + 8.0 * p.sigma_x);
    let ys = (p.mu_y - 8.0 * p.sigma_y, p.mu_y + 8.0 * p.sigma_y);
    let pdf = move |x: f64, y: f64| joint_raw(x, y, p.mu_x, p.mu_y, p.sigma_x, p.sigma_y, p.rho);
    Ok(QuadratureMoments {
        mass: integrate_2d(pdf, xs, ys, nodes),
        mean_x: integrate_2d(|x, y| x * pdf(x, y), xs, ys, nodes),
        mean_y: integrate_2d(|x, y| y * pdf(x, y), xs, ys, nodes),
        mean_xy: integrate_2d(|x, y| x * y * pdf(x, y), xs, ys, nodes),
    })
}

/// Seeded independent parameter sets with a probe point near the means.
pub fn sample_cases(seed: u64, n: usize) -> Vec<(NormalParams, (f64, f64))> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let p = NormalParams {
                mu_x: rng.random_range(-2.0..2.0),
                mu_y: rng.random_range(-2.0..2.0),
                sigma_x: rng.random_range(0.5..2.0),
                sigma_y: rng.random_range(0.5..2.0),
                rho: 0.0,
            };
            let probe = (
                p.mu_x + rng.random_range(-1.5..1.5),
                p.mu_y + rng.random_range(-1.5..1.5),
            );
            (p, probe)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_at_origin() {
        let std = NormalParams::new(0.0, 0.0, 1.0, 1.0, 0.0).unwrap();
        assert!((joint_pdf(&std, 0.0, 0.0).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-15);
        let half = std.with_rho(0.5);
        let expect = 1.0 / (2.0 * PI * 0.75f64.sqrt());
        assert!((joint_pdf(&half, 0.0, 0.0).unwrap() - expect).abs() < 1e-15);
    }

    #[test]
    fn independent_density_factorizes() {
        let p = NormalParams::new(0.3, -0.2, 1.1, 0.7, 0.0).unwrap();
        for &(x, y) in &[(0.0, 0.0), (1.5, -2.0), (-0.7, 0.9)] {
            let j = joint_pdf(&p, x, y).unwrap();
            let prod = marginal_x_pdf(&p, x) * marginal_y_pdf(&p, y);
            assert!((j - prod).abs() < 1e-14);
        }
    }

    #[test]
    fn conditional_mean_shift() {
        let p = NormalParams::new(0.0, 1.0, 1.0, 1.0, 0.5).unwrap();
        assert!((p.conditional_mean(3.0) - 1.0).abs() < 1e-15);
        let ind = p.with_rho(0.0);
        for y in [-2.0, 0.0, 4.0] {
            let c = conditional_pdf(&ind, 0.4, y).unwrap();
            assert!((c - marginal_x_pdf(&ind, 0.4)).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(NormalParams::new(0.0, 0.0, 1.0, 1.0, 1.0).is_err());
        assert!(NormalParams::new(0.0, 0.0, 1.0, 1.0, -1.0).is_err());
        assert!(NormalParams::new(0.0, 0.0, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn pointwise_relation_needs_probe() {
        let p = NormalParams::new(0.0, 0.0, 1.0, 1.0, 0.0).unwrap();
        let r = relation_gradients(&p, Relation::JointMinusProduct, Semantics::Limit, None);
        assert!(matches!(r, Err(Error::BadParams(_))));
    }
}
