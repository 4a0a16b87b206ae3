use deloc::games::{self, GameSpec};
use deloc::measures::{concurrence_mixed, concurrence_pure, fully_entangled_fraction, record_bound};
use deloc::optimizer::{self, OptimizerConfig};
use deloc::random::{haar_state, random_density, random_separable, rng_for};
use deloc::tactics::{self, TacticRecipe};

#[test]
fn fef_above_half_beats_bd_classical() {
    let mut rng = rng_for(401, 0);
    let bd = GameSpec::bd();
    let mut seen = 0;
    while seen < 100 {
        let rho = random_density(&[2, 2], 1 + seen % 3, &mut rng);
        if fully_entangled_fraction(&rho).unwrap().0 <= 0.5 + 1e-6 {
            continue;
        }
        seen += 1;
        let r = tactics::evaluate(TacticRecipe::Fef, &rho, &bd).unwrap();
        assert!(r.win_probability > 0.5 + 1e-10);
    }
}

#[test]
fn optimizer_agrees_on_pure_states() {
    let mut rng = rng_for(402, 0);
    let cfg = OptimizerConfig {
        restarts: 8,
        ..Default::default()
    };
    let pnp = GameSpec::pnp(0.5).unwrap();
    let bd = GameSpec::bd();
    for i in 0..30 {
        let psi = haar_state(&[2, 2], &mut rng);
        let c = concurrence_pure(&psi).unwrap();
        let rho = psi.projector();
        let cfg = OptimizerConfig { seed: i, ..cfg.clone() };
        let d = optimizer::optimize(&rho, &pnp, &cfg).unwrap().best_value - (0.75 + c / 4.0);
        assert!((-1e-4..=1e-6).contains(&d), "pnp Δ={d}");
        let d = optimizer::optimize(&rho, &bd, &cfg).unwrap().best_value - (0.5 + c / 2.0);
        assert!((-1e-4..=1e-6).contains(&d), "bd Δ={d}");
    }
}

#[test]
fn optimized_values_respect_bounds() {
    let mut rng = rng_for(403, 0);
    let cfg = OptimizerConfig {
        restarts: 4,
        ..Default::default()
    };
    let pnp = GameSpec::pnp(0.5).unwrap();
    let bd = GameSpec::bd();
    for i in 0..10u64 {
        let sep = random_separable(&mut rng);
        let cfg = OptimizerConfig { seed: i, ..cfg.clone() };
        for game in [&pnp, &bd] {
            let found = optimizer::optimize(&sep, game, &cfg).unwrap();
            assert!(found.best_value <= games::classical_limit(game) + 1e-6);
            assert!(found.per_restart.iter().all(|&v| v <= games::classical_limit(game) + 1e-6));
        }
        let rho = random_density(&[2, 2], 2, &mut rng);
        let c = concurrence_mixed(&rho).unwrap();
        let best = optimizer::optimize(&rho, &pnp, &cfg).unwrap().best_value;
        assert!(best <= (0.75 + c / 4.0).min(record_bound(&rho)) + 1e-6);
        let best = optimizer::optimize(&rho, &bd, &cfg).unwrap().best_value;
        assert!(best <= 0.5 + c / 2.0 + 1e-6);
    }
}

#[test]
fn determinism_and_restart_monotonicity() {
    let rho = random_density(&[2, 2], 3, &mut rng_for(404, 0));
    let game = GameSpec::pnp(0.6).unwrap();
    let run = |restarts| {
        optimizer::optimize(
            &rho,
            &game,
            &OptimizerConfig {
                restarts,
                seed: 9,
                ..Default::default()
            },
        )
        .unwrap()
    };
    let (a, b) = (run(6), run(6));
    assert_eq!(a.best_value.to_bits(), b.best_value.to_bits());
    assert_eq!(a.best_params, b.best_params);
    assert_eq!(a.per_restart, b.per_restart);
    let mut prev = f64::NEG_INFINITY;
    for r in [1, 2, 4, 8] {
        let v = run(r).best_value;
        assert!(v >= prev);
        prev = v;
    }
}
