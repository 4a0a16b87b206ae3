use deloc::inequalities::lemma1_check;
use deloc::measures::{
    concurrence_mixed, concurrence_pure, entanglement_entropy, fully_entangled_fraction, g_quantity,
};
use deloc::optimizer::OptimizerConfig;
use deloc::qcore::tensor;
use deloc::random::{dirichlet_weights, haar_state, haar_unitary, random_density, rng_for};
use deloc::states::NamedState;

#[test]
fn pure_and_mixed_concurrence_agree_and_dominate_entropy() {
    let mut rng = rng_for(201, 0);
    for _ in 0..200 {
        let psi = haar_state(&[2, 2], &mut rng);
        let c = concurrence_pure(&psi).unwrap();
        assert!((c - concurrence_mixed(&psi.projector()).unwrap()).abs() < 1e-9);
        assert!(c >= entanglement_entropy(&psi).unwrap() - 1e-9);
    }
}

#[test]
fn concurrence_is_locally_invariant() {
    let mut rng = rng_for(202, 0);
    for i in 0..100 {
        let rho = random_density(&[2, 2], 1 + i % 4, &mut rng);
        let local = tensor(&haar_unitary(2, &mut rng), &haar_unitary(2, &mut rng));
        let moved = rho.evolve(&local).unwrap();
        let (a, b) = (concurrence_mixed(&rho).unwrap(), concurrence_mixed(&moved).unwrap());
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }
}

#[test]
fn lemma1_on_unitary_orbits() {
    let mut rng = rng_for(203, 0);
    for i in 0..100 {
        let rho = random_density(&[2, 2], 1 + i % 4, &mut rng);
        let u = haar_unitary(4, &mut rng);
        let sigma = rho.evolve(&u).unwrap();
        assert!(lemma1_check(&rho, &sigma).unwrap().slack >= -1e-10);
    }
}

#[test]
fn bell_diagonal_fef_and_concurrence() {
    let mut rng = rng_for(204, 0);
    for _ in 0..100 {
        let w = dirichlet_weights(4, &mut rng);
        let top = w.iter().cloned().fold(0.0, f64::max);
        let rho = NamedState::bell_diagonal([w[0], w[1], w[2], w[3]]).unwrap().density().unwrap();
        let (f, _) = fully_entangled_fraction(&rho).unwrap();
        assert!((f - top).abs() < 1e-8);
        let c = concurrence_mixed(&rho).unwrap();
        if top > 0.5 {
            assert!((c - (2.0 * f - 1.0)).abs() < 1e-8);
        } else {
            assert!(c < 1e-8);
        }
    }
}

#[test]
fn g_matches_concurrence() {
    let mut rng = rng_for(205, 0);
    let cfg = OptimizerConfig {
        restarts: 8,
        ..Default::default()
    };
    for i in 0..50 {
        let psi = haar_state(&[2, 2], &mut rng);
        let g = g_quantity(&psi, &OptimizerConfig { seed: i, ..cfg.clone() }).unwrap();
        let c = concurrence_pure(&psi).unwrap();
        assert!((g - c).abs() < 1e-4, "G={g}, C={c}");
    }
}
