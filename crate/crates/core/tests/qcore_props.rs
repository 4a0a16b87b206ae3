use deloc::qcore::{herm_eig, partial_trace, schmidt, tensor, trace_distance, ComplexMatrix, DensityMatrix};
use deloc::random::{complex_normal, haar_state, haar_unitary, random_density, rng_for};
use proptest::prelude::*;

fn random_matrix(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = rng_for(seed, 7);
    ComplexMatrix::from_fn(n, n, |_, _| complex_normal(&mut rng))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_is_associative_and_mixed_product(seed in any::<u64>()) {
        let [a, b, c, d] = [0, 1, 2, 3].map(|k| random_matrix(2, seed.wrapping_add(k)));
        let left = tensor(&tensor(&a, &b), &c);
        let right = tensor(&a, &tensor(&b, &c));
        prop_assert!((left - right).norm() < 1e-10);
        let mixed = tensor(&a, &b) * tensor(&c, &d);
        prop_assert!((mixed - tensor(&(&a * &c), &(&b * &d))).norm() < 1e-10);
    }

    #[test]
    fn partial_trace_recovers_product_factors(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 0);
        let a = random_density(&[2], 2, &mut rng);
        let b = random_density(&[2], 1 + (seed % 2) as usize, &mut rng);
        let ab = a.tensor(&b);
        let ra = partial_trace(&ab, &[0]).unwrap();
        let rb = partial_trace(&ab, &[1]).unwrap();
        prop_assert!((ra.matrix() - a.matrix()).norm() < 1e-10);
        prop_assert!((rb.matrix() - b.matrix()).norm() < 1e-10);
    }

    #[test]
    fn trace_distance_is_a_metric(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 0);
        let [r, s, t]: [DensityMatrix; 3] = [1, 2, 4].map(|k| random_density(&[2, 2], k, &mut rng));
        let rs = trace_distance(&r, &s).unwrap();
        prop_assert!((rs - trace_distance(&s, &r).unwrap()).abs() < 1e-9);
        prop_assert!(rs <= trace_distance(&r, &t).unwrap() + trace_distance(&t, &s).unwrap() + 1e-9);
        prop_assert!(trace_distance(&r, &r).unwrap() < 1e-9);
        prop_assert!((-1e-9..=1.0 + 1e-9).contains(&rs));
    }

    #[test]
    fn herm_eig_reconstructs_16x16(seed in any::<u64>()) {
        let m = random_matrix(16, seed);
        let h = (&m + m.adjoint()) * deloc::qcore::real(0.5);
        let (vals, vecs) = herm_eig(&h).unwrap();
        prop_assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let lambda = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            16,
            vals.iter().map(|&v| deloc::qcore::real(v)),
        ));
        prop_assert!((&vecs * lambda * vecs.adjoint() - &h).norm() < 1e-8);
    }

    #[test]
    fn schmidt_product_is_locally_invariant(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 0);
        let psi = haar_state(&[2, 2], &mut rng);
        let local = tensor(&haar_unitary(2, &mut rng), &haar_unitary(2, &mut rng));
        let moved = psi.apply(&local).unwrap();
        let (a, b) = (schmidt(&psi).unwrap(), schmidt(&moved).unwrap());
        let prod = |s: &deloc::qcore::Schmidt| s.coefficients[0] * s.coefficients[1];
        prop_assert!((prod(&a) - prod(&b)).abs() < 1e-9);
        prop_assert!((a.coefficients[0] + a.coefficients[1] - 1.0).abs() < 1e-10);
        let overlap = a.reconstruct().dotc(psi.amplitudes()).norm();
        prop_assert!((overlap - 1.0).abs() < 1e-8);
    }
}
