use isoembed::gaussian::{
    joint_pdf, moments_by_quadrature, relation_gradients, rho_derivative_at_zero, sample_cases,
    NormalParams, Relation,
};
use isoembed::{GradientResult, Semantics};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = NormalParams> {
    (
        -2.0f64..2.0,
        -2.0f64..2.0,
        0.5f64..2.0,
        0.5f64..2.0,
        -0.9f64..0.9,
    )
        .prop_map(|(mx, my, sx, sy, rho)| NormalParams::new(mx, my, sx, sy, rho).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quadrature_moments(p in params()) {
        let m = moments_by_quadrature(&p, 64).unwrap();
        prop_assert!((m.mass - 1.0).abs() < 1e-8);
        prop_assert!((m.mean_x - p.mu_x).abs() < 1e-8);
        prop_assert!((m.mean_y - p.mu_y).abs() < 1e-8);
        let cov = m.mean_xy - m.mean_x * m.mean_y;
        prop_assert!((cov - p.rho * p.sigma_x * p.sigma_y).abs() < 1e-7);
    }

    /// d/drho of the joint density at rho = 0 against a central difference.
    #[test]
    fn density_rho_derivative(p in params(), dx in -1.5f64..1.5, dy in -1.5f64..1.5) {
        let p = p.with_rho(0.0);
        let (x, y) = (p.mu_x + dx, p.mu_y + dy);
        let h = 1e-5;
        let fd = (joint_pdf(&p.with_rho(h), x, y).unwrap() - joint_pdf(&p.with_rho(-h), x, y).unwrap()) / (2.0 * h);
        let closed = rho_derivative_at_zero(&p, Relation::JointMinusProduct, Some((x, y))).unwrap();
        prop_assert!((fd - closed).abs() < 1e-7, "{fd} vs {closed}");
    }
}

#[test]
fn constrained_gradients_vanish_on_independence() {
    for (p, probe) in sample_cases(3, 8) {
        for relation in Relation::ALL {
            let probe = relation.is_pointwise().then_some(probe);
            let g = relation_gradients(&p, relation, Semantics::Constrained, probe).unwrap();
            assert!(g.magnitude() < 1e-8, "{}: {g:?}", relation.label());
        }
    }
}

#[test]
fn limit_rho_component_matches_closed_form() {
    for (p, probe) in sample_cases(5, 8) {
        for relation in Relation::ALL {
            let probe = relation.is_pointwise().then_some(probe);
            let GradientResult::Finite(g) =
                relation_gradients(&p, relation, Semantics::Limit, probe).unwrap()
            else {
                panic!("{} limit gradient is finite", relation.label());
            };
            let want = rho_derivative_at_zero(&p, relation, probe).unwrap();
            let got = g[relation.rho_index()];
            assert!(
                (got - want).abs() < 1e-5 * want.abs().max(1.0),
                "{}: {got} vs {want}",
                relation.label()
            );
        }
    }
}

#[test]
fn invalid_parameters() {
    assert!(NormalParams::new(0.0, 0.0, 0.0, 1.0, 0.0).is_err());
    assert!(NormalParams::new(0.0, 0.0, 1.0, 1.0, 1.0).is_err());
    assert!(
        rho_derivative_at_zero(&sample_cases(1, 1)[0].0, Relation::JointMinusProduct, None)
            .is_err()
    );
}
