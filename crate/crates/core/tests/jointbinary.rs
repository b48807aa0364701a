use isoembed::jointbinary::{
    correlation, fisher_information, log_likelihood, log_likelihood_gradient, mle, relation_suite,
    CountData, Family, JointPoint,
};
use isoembed::{Error, GradientResult, Semantics};
use proptest::prelude::*;

fn joint() -> impl Strategy<Value = JointPoint> {
    (1u32..100, 1u32..100, 1u32..100, 1u32..100).prop_map(|(a, b, c, d)| {
        let n = (a + b + c + d) as f64;
        JointPoint::new(a as f64 / n, b as f64 / n, c as f64 / n, d as f64 / n).unwrap()
    })
}

/// Brute-force Pearson correlation over the four outcomes.
fn pearson(p: &JointPoint) -> f64 {
    let cells = [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)];
    let pr = p.probs();
    let e = |f: &dyn Fn(f64, f64) -> f64| {
        cells
            .iter()
            .zip(pr)
            .map(|(&(x, y), w)| w * f(x, y))
            .sum::<f64>()
    };
    let (mx, my) = (e(&|x, _| x), e(&|_, y| y));
    let cov = e(&|x, y| (x - mx) * (y - my));
    cov / (e(&|x, _| (x - mx).powi(2)) * e(&|_, y| (y - my).powi(2))).sqrt()
}

proptest! {
    #[test]
    fn correlation_matches_pearson(p in joint()) {
        prop_assert!((correlation(&p).unwrap() - pearson(&p)).abs() < 1e-12);
    }

    #[test]
    fn mle_is_frequencies_and_stationary(na in 1u64..50, nb in 1u64..50, nc in 1u64..50, nd in 1u64..50) {
        let counts = CountData::new(na, nb, nc, nd);
        let m = mle(&counts, Semantics::Limit).unwrap();
        let n = counts.total() as f64;
        prop_assert_eq!(m.probs(), [na as f64 / n, nb as f64 / n, nc as f64 / n, nd as f64 / n]);
        let GradientResult::Finite(g) = log_likelihood_gradient(&counts, &m, Semantics::Limit).unwrap() else {
            panic!("interior gradient is finite");
        };
        prop_assert!(g.iter().all(|v| v.abs() < 1e-9), "{:?}", g);
        // nearby points score lower
        let shifted = JointPoint::from_free(m.a() * 0.99, m.b(), m.c()).unwrap();
        prop_assert!(log_likelihood(&counts, &shifted) < log_likelihood(&counts, &m));
    }

    #[test]
    fn fisher_is_symmetric_positive(p in joint()) {
        let f = fisher_information(&p, Semantics::Limit).unwrap();
        for i in 0..3 {
            prop_assert!(f[i][i] > 0.0);
            for j in 0..3 {
                prop_assert!((f[i][j] - f[j][i]).abs() < 1e-9);
            }
        }
        // the diagonal is 1/p_i + 1/p_d
        let d = p.d();
        let pr = p.probs();
        for i in 0..3 {
            prop_assert!((f[i][i] - (1.0 / pr[i] + 1.0 / d)).abs() < 1e-6 * f[i][i]);
        }
    }
}

#[test]
fn constrained_fisher_is_one_by_one() {
    let p = JointPoint::new(0.25, 0.0, 0.0, 0.75).unwrap();
    let f = fisher_information(&p, Semantics::Constrained).unwrap();
    assert_eq!(f.len(), 1);
    assert!((f[0][0] - 1.0 / (0.25 * 0.75)).abs() < 1e-12);
}

#[test]
fn constrained_mle_rejects_off_diagonal_data() {
    let counts = CountData::new(3, 1, 0, 3);
    assert!(matches!(
        mle(&counts, Semantics::Constrained),
        Err(Error::InfeasiblePoint { .. })
    ));
    assert!(matches!(
        mle(&CountData::new(0, 0, 0, 0), Semantics::Limit),
        Err(Error::EmptyData)
    ));
    let m = mle(&CountData::new(3, 0, 0, 7), Semantics::Constrained).unwrap();
    assert_eq!(m.probs(), [0.3, 0.0, 0.0, 0.7]);
}

#[test]
fn degenerate_marginal() {
    let p = JointPoint::new(0.5, 0.5, 0.0, 0.0).unwrap();
    assert!(matches!(correlation(&p), Err(Error::DegenerateMarginal)));
}

#[test]
fn relations_vanish_under_constraint() {
    let p = JointPoint::new(0.3, 0.0, 0.0, 0.7).unwrap();
    for (label, g) in relation_suite(&p, Family::Correlated, Semantics::Constrained).unwrap() {
        assert!(g.magnitude() < 1e-6, "{label}: {g:?}");
    }
}
