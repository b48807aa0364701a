use isoembed::game::{
    backward_induction, global_comparison, solve_slice, Bilinear, GameSpec, Strategy,
};
use isoembed::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn default_game_pure_baselines() {
    let g = GameSpec::default();
    let bi = backward_induction(&g);
    assert_eq!(bi.strategy, Strategy::Pure { x: 0, y: 1 });
    assert_eq!(bi.payoffs, (2.0, 2.0));
    let c = global_comparison(&g);
    assert_eq!(c.slices.len(), 3);
    // Y's best correlated slice beats its backward-induction payoff
    assert!(c.chosen.payoffs.1 >= bi.payoffs.1);
}

#[test]
fn unsupported_slice() {
    let g = GameSpec::default();
    assert!(matches!(
        solve_slice(&g, 0.5),
        Err(Error::UnsupportedRho(_))
    ));
}

#[test]
fn non_finite_coefficients_rejected() {
    let bad = Bilinear::new(f64::NAN, 0.0, 0.0, 0.0);
    assert!(GameSpec::new(bad, Bilinear::new(0.0, 0.0, 0.0, 0.0)).is_err());
}

fn coefficient(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(-5.0..5.0)
}

/// No player gains more than `tol` by deviating alone on a 0.01 grid.
#[test]
fn independent_slice_is_an_equilibrium() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let grid: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    for _ in 0..100 {
        let mut b = || {
            Bilinear::new(
                coefficient(&mut rng),
                coefficient(&mut rng),
                coefficient(&mut rng),
                coefficient(&mut rng),
            )
        };
        let g = GameSpec::new(b(), b()).unwrap();
        let o = solve_slice(&g, 0.0).unwrap();
        let Strategy::Mixed { p, q } = o.strategy else {
            panic!("independent slice plays mixed strategies");
        };
        let (ux, uy) = (g.x.at(p, q), g.y.at(p, q));
        for &d in &grid {
            assert!(g.x.at(d, q) <= ux + 1e-9, "X deviates to {d} in {g:?}");
            assert!(g.y.at(p, d) <= uy + 1e-9, "Y deviates to {d} in {g:?}");
        }
    }
}

#[test]
fn functional_slices_follow_the_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let mut b = || {
            Bilinear::new(
                coefficient(&mut rng),
                coefficient(&mut rng),
                coefficient(&mut rng),
                coefficient(&mut rng),
            )
        };
        let g = GameSpec::new(b(), b()).unwrap();
        let Strategy::Pure { x, y } = solve_slice(&g, 1.0).unwrap().strategy else {
            panic!("rho = 1 is pure");
        };
        assert_eq!(x, y);
        let Strategy::Pure { x, y } = solve_slice(&g, -1.0).unwrap().strategy else {
            panic!("rho = -1 is pure");
        };
        assert_eq!(x + y, 1);
    }
}
