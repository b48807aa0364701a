//! Summary of how the two semantics disagree on the perfectly correlated
//! card game: dimensions, gradients and volumes, each computed by the
//! corresponding module rather than tabulated.

use crate::error::Result;
use crate::gradient::{gradient, GradientResult, Semantics};
use crate::jointbinary::{
    correlated_constraint, entropy_gradient, entropy_x, fisher_information, joint_entropy,
    log_likelihood_gradient, probs4, CountData, Family, JointPoint,
};
use crate::simplex::simplex_volume;

/// A report cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Count(usize),
    Number(f64),
    Diverging,
    Text(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub quantity: &'static str,
    /// Constrained semantics.
    pub p: Cell,
    /// Limit semantics.
    pub g: Cell,
}

pub const OUT_OF_SCOPE: &str = "out of scope: no change of variables constructed";

/// Where the report is evaluated: `a = 1/2` on `b = c = 0`.
pub const BASE_A: f64 = 0.5;

/// Magnitudes below this are finite-difference noise and reported as 0.
pub const ZERO_TOL: f64 = 1e-8;

fn magnitude_cell(g: &GradientResult) -> Cell {
    match g {
        GradientResult::Finite(v) => {
            let m = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            Cell::Number(if m < ZERO_TOL { 0.0 } else { m })
        }
        GradientResult::Diverging(_) => Cell::Diverging,
        GradientResult::Undefined => Cell::Text("undefined".into()),
    }
}

/// Interior point one ladder rung away from the base along the approach.
fn approach_point(base: &JointPoint) -> Result<JointPoint> {
    let eps = crate::gradient::DEFAULT_LADDER[0];
    let step = std::f64::consts::FRAC_1_SQRT_2 * eps;
    JointPoint::from_free(base.a(), base.b() + step, base.c() + step)
}

/// Rows for dim F, dim grad L, |grad E|, the two relation gradients, the
/// change-of-variables rows, d and V.
pub fn report() -> Result<Vec<ReportRow>> {
    let base = JointPoint::new(BASE_A, 0.0, 0.0, 1.0 - BASE_A)?;
    let near = approach_point(&base)?;
    let counts = CountData::new(5, 0, 0, 5);

    let fisher_p = fisher_information(&base, Semantics::Constrained)?.len();
    let fisher_g = fisher_information(&near, Semantics::Limit)?.len();

    let dim = |g: GradientResult| g.finite().map_or(0, |v| v.len());
    let like_p = dim(log_likelihood_gradient(
        &counts,
        &base,
        Semantics::Constrained,
    )?);
    let like_g = dim(log_likelihood_gradient(&counts, &near, Semantics::Limit)?);

    let constrained = Family::Correlated.mode(Semantics::Constrained, base.free());
    let limit = Family::Correlated.mode(Semantics::Limit, base.free());
    let entropy_p = entropy_gradient(&base, &constrained)?;
    let entropy_g = entropy_gradient(&base, &limit)?;

    let conservation = |x: &[f64]| {
        let [a, _, _, d] = probs4(x);
        a + d
    };
    let cons_p = gradient(&conservation, base.free(), &constrained)?;
    let cons_g = gradient(&conservation, base.free(), &limit)?;

    let relation = |x: &[f64]| joint_entropy(x) - entropy_x(x);
    let rel_p = gradient(&relation, base.free(), &constrained)?;
    let rel_g = gradient(&relation, base.free(), &limit)?;

    let d_p = correlated_constraint().reduced_dim(3);
    let v = |n| simplex_volume(n).expect("n >= 2");

    Ok(vec![
        ReportRow {
            quantity: "dim(F)",
            p: Cell::Count(fisher_p),
            g: Cell::Count(fisher_g),
        },
        ReportRow {
            quantity: "dim(grad L)",
            p: Cell::Count(like_p),
            g: Cell::Count(like_g),
        },
        ReportRow {
            quantity: "|grad E|",
            p: magnitude_cell(&entropy_p),
            g: magnitude_cell(&entropy_g),
        },
        ReportRow {
            quantity: "|grad(P00+P11)|",
            p: magnitude_cell(&cons_p),
            g: magnitude_cell(&cons_g),
        },
        ReportRow {
            quantity: "|grad(E_xy-E_x)|",
            p: magnitude_cell(&rel_p),
            g: magnitude_cell(&rel_g),
        },
        ReportRow {
            quantity: "Rank(A)",
            p: Cell::Text(OUT_OF_SCOPE.into()),
            g: Cell::Text(OUT_OF_SCOPE.into()),
        },
        ReportRow {
            quantity: "J",
            p: Cell::Text(OUT_OF_SCOPE.into()),
            g: Cell::Text(OUT_OF_SCOPE.into()),
        },
        ReportRow {
            quantity: "d",
            p: Cell::Count(d_p),
            g: Cell::Count(3),
        },
        ReportRow {
            quantity: "V",
            p: Cell::Number(v(d_p + 1)),
            g: Cell::Number(v(4)),
        },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_and_volumes() {
        let rows = report().unwrap();
        let get = |q: &str| rows.iter().find(|r| r.quantity == q).unwrap().clone();
        assert_eq!(get("dim(F)").p, Cell::Count(1));
        assert_eq!(get("dim(F)").g, Cell::Count(3));
        assert_eq!(get("d").p, Cell::Count(1));
        assert_eq!(get("V").p, Cell::Number(1.0));
        assert_eq!(get("|grad E|").g, Cell::Diverging);
    }
}
