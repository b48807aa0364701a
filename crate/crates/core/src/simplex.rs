//! Points on a probability simplex.
//!
//! The last outcome is eliminated by normalization: a die with faces
//! `(a, b, c, d)` is described by the free coordinates `(a, b, c)` and
//! `d = 1 - a - b - c`.

use crate::error::{Error, Result};

/// Normalization tolerance accepted by [`resolve`].
pub const NORMALIZATION_TOL: f64 = 1e-9;

const RANGE_TOL: f64 = 1e-12;

/// A point on an `n`-outcome simplex with one coordinate resolved by
/// normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector {
    probs: Vec<f64>,
    resolved: usize,
}

impl ProbVector {
    /// Builds a point from its `n - 1` free coordinates; the last outcome
    /// receives `1 - sum(free)`.
    pub fn from_free(free: &[f64]) -> Result<Self> {
        let mut probs = free.to_vec();
        let rest = 1.0 - free.iter().sum::<f64>();
        probs.push(rest);
        check_range(&probs)?;
        for p in probs.iter_mut() {
            *p = p.clamp(0.0, 1.0);
        }
        let resolved = probs.len() - 1;
        Ok(Self { probs, resolved })
    }

    /// Keeps every coordinate as given; the caller guarantees the point is
    /// already on the simplex.
    pub(crate) fn from_probs_exact(probs: Vec<f64>) -> Self {
        let resolved = probs.len() - 1;
        Self { probs, resolved }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Free coordinates, i.e. everything but the resolved one.
    pub fn free(&self) -> &[f64] {
        &self.probs[..self.resolved]
    }

    pub fn resolved_index(&self) -> usize {
        self.resolved
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

fn check_range(probs: &[f64]) -> Result<()> {
    for (index, &value) in probs.iter().enumerate() {
        if !value.is_finite() || !(-RANGE_TOL..=1.0 + RANGE_TOL).contains(&value) {
            return Err(Error::OutOfRange { index, value });
        }
    }
    Ok(())
}

/// Validates a full list of outcome probabilities and marks the last one as
/// resolved.
pub fn resolve(point: &[f64]) -> Result<ProbVector> {
    if point.len() < 2 {
        return Err(Error::BadDimension(point.len()));
    }
    check_range(point)?;
    let sum: f64 = point.iter().sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized { sum });
    }
    ProbVector::from_free(&point[..point.len() - 1])
}

/// Shannon entropy in nats with `0 log 0 = 0`.
pub fn entropy(p: &ProbVector) -> f64 {
    entropy_of(p.probs())
}

/// Entropy of raw probabilities. Negative entries give NaN, which the
/// gradient engine reports as a domain error.
pub fn entropy_of(probs: &[f64]) -> f64 {
    probs.iter().map(|&p| -xlogx(p)).sum()
}

/// `x ln x` extended by continuity to `0`.
pub fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Volume of the probability parameter space of an `n`-outcome simplex,
/// `1 / (n - 1)!`.
pub fn simplex_volume(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::BadDimension(n));
    }
    let factorial: f64 = (1..n).map(|k| k as f64).product();
    Ok(1.0 / factorial)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolve_coin_and_square() {
        let coin = resolve(&[0.5, 0.5]).unwrap();
        assert_eq!(coin.free(), &[0.5]);
        assert_eq!(coin.resolved_index(), 1);

        let square = resolve(&[0.25; 4]).unwrap();
        assert_eq!(square.free(), &[0.25, 0.25, 0.25]);
    }

    #[test]
    fn resolve_rejects_bad_input() {
        assert!(matches!(
            resolve(&[0.3, 0.3, 0.3]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            resolve(&[1.2, -0.2]),
            Err(Error::OutOfRange { index: 0, .. })
        ));
        assert!(matches!(resolve(&[1.0]), Err(Error::BadDimension(1))));
    }

    #[test]
    fn entropy_values() {
        let ln2 = std::f64::consts::LN_2;
        assert!((entropy(&resolve(&[0.5, 0.5]).unwrap()) - ln2).abs() < 1e-15);
        assert_eq!(entropy(&resolve(&[1.0, 0.0]).unwrap()), 0.0);
        let h = entropy(&resolve(&[0.25; 4]).unwrap());
        assert!((h - 4f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn volumes() {
        assert_eq!(simplex_volume(2).unwrap(), 1.0);
        assert_eq!(simplex_volume(3).unwrap(), 0.5);
        assert_eq!(simplex_volume(4).unwrap(), 1.0 / 6.0);
        assert!(simplex_volume(1).is_err());
        for n in 2..=8usize {
            let fact: f64 = (1..n).map(|k| k as f64).product();
            assert_eq!(simplex_volume(n).unwrap() * fact, 1.0);
        }
    }
}
