use isoembed::dice::{
    best_of, directed_gradient_closed_form, directed_gradient_on_coin_edge,
    entropy_gradient_closed_form, maximize_per_space, maximize_unconstrained,
};
use isoembed::gradient::{gradient, ConstraintSet, GradientMode};
use isoembed::simplex::{entropy_of, resolve, simplex_volume, ProbVector};
use isoembed::{Error, GradientResult};
use proptest::prelude::*;

fn free3() -> impl Strategy<Value = Vec<f64>> {
    (1u32..100, 1u32..100, 1u32..100, 1u32..100).prop_map(|(a, b, c, d)| {
        let n = (a + b + c + d) as f64;
        vec![a as f64 / n, b as f64 / n, c as f64 / n]
    })
}

fn h(free: &[f64]) -> f64 {
    let mut p = free.to_vec();
    p.push(1.0 - free.iter().sum::<f64>());
    entropy_of(&p)
}

proptest! {
    #[test]
    fn unconstrained_entropy_gradient(free in free3()) {
        let g = gradient(&h, &free, &GradientMode::unconstrained()).unwrap();
        let want = entropy_gradient_closed_form(&free);
        let got = g.finite().unwrap();
        for (a, b) in got.iter().zip(&want) {
            prop_assert!((a - b).abs() < 1e-6, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn resolve_round_trips(free in free3()) {
        let full = resolve(&[free[0], free[1], free[2], 1.0 - free.iter().sum::<f64>()]).unwrap();
        let again = ProbVector::from_free(full.free()).unwrap();
        prop_assert_eq!(full.probs(), again.probs());
        prop_assert!((full.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coin_edge_directed_gradient(a in 0.05f64..0.95) {
        let got = directed_gradient_on_coin_edge(a).unwrap();
        let want = directed_gradient_closed_form(a);
        prop_assert!((got - want).abs() < 1e-6);
    }
}

#[test]
fn entropy_diverges_toward_the_boundary() {
    // at b = c = 0 the entropy gradient blows up along any inward path
    let mode = GradientMode::limit(&[0.0, 1.0, 1.0]).unwrap();
    let g = gradient(&h, &[0.5, 0.0, 0.0], &mode).unwrap();
    assert!(g.is_diverging(), "{g:?}");
}

#[test]
fn smooth_function_limit_is_ambient_gradient() {
    let f = |x: &[f64]| 3.0 * x[0] - 2.0 * x[1] + x[0] * x[1];
    let mode = GradientMode::limit(&[1.0, 0.0]).unwrap();
    let GradientResult::Finite(g) = gradient(&f, &[0.2, 0.4], &mode).unwrap() else {
        panic!("finite");
    };
    assert!(
        (g[0] - 3.4).abs() < 1e-6 && (g[1] + 1.8).abs() < 1e-6,
        "{g:?}"
    );
}

#[test]
fn pinned_constraint_drops_coordinates() {
    let f = |x: &[f64]| x[0] * x[0] + 5.0 * x[1];
    let set = ConstraintSet::pinned("y=0", 2, &[(1, 0.0)]);
    let g = gradient(&f, &[0.3, 0.0], &GradientMode::Constrained(set.clone())).unwrap();
    let got = g.finite().unwrap();
    assert_eq!(got.len(), 1);
    assert!((got[0] - 0.6).abs() < 1e-6);
    assert!(matches!(
        gradient(&f, &[0.3, 0.1], &GradientMode::Constrained(set)),
        Err(Error::InfeasiblePoint { .. })
    ));
}

#[test]
fn bad_inputs() {
    assert!(GradientMode::limit(&[0.0, 0.0]).is_err());
    assert!(ProbVector::from_free(&[0.7, 0.6]).is_err());
    assert!(ProbVector::from_free(&[-0.1, 0.6]).is_err());
    assert!(simplex_volume(1).is_err());
}

#[test]
fn dice_optima() {
    let per = maximize_per_space();
    assert_eq!(best_of(&per).unwrap().label, "coin");
    let coin = &per[0];
    assert!((coin.value - 2f64.ln()).abs() < 1e-12);
    let un = maximize_unconstrained();
    assert!(un.optimum.value.is_finite());
}
