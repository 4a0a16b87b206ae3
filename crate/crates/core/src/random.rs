//! Seeded samplers for states, unitaries and separable mixtures.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::qcore::{c, real, ComplexMatrix, ComplexVector, DensityMatrix, PureState};

/// Independent stream `stream` derived from `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> num_complex::Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    c(re, im)
}

/// Haar-random pure state.
pub fn haar_state<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> PureState {
    let n: usize = dims.iter().product();
    let v = ComplexVector::from_fn(n, |_, _| complex_normal(rng));
    PureState::normalized(dims.to_vec(), v).expect("gaussian vector is nonzero")
}

/// Random mixed state `GG†/Tr(GG†)` with `G` an `n × rank` Ginibre matrix.
pub fn random_density<R: Rng + ?Sized>(dims: &[usize], rank: usize, rng: &mut R) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let g = ComplexMatrix::from_fn(n, rank.max(1), |_, _| complex_normal(rng));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(dims.to_vec(), m / real(tr)).expect("Ginibre product is a state")
}

/// Haar-random unitary via QR of a Ginibre matrix with the phases of R's
/// diagonal absorbed.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| complex_normal(rng));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q;
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / real(d.norm()) } else { real(1.0) };
        let mut col = u.column_mut(k);
        col *= phase;
    }
    u
}

/// Product of two Haar-random qubit states.
pub fn random_product_state<R: Rng + ?Sized>(rng: &mut R) -> PureState {
    let a = haar_state(&[2], rng);
    let b = haar_state(&[2], rng);
    let v = a.amplitudes().kronecker(b.amplitudes());
    PureState::new(vec![2, 2], v).expect("product of unit vectors")
}

/// Dirichlet(1,…,1) weights.
pub fn dirichlet_weights<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    let gamma = Gamma::new(1.0, 1.0).expect("valid shape");
    let raw: Vec<f64> = (0..k).map(|_| gamma.sample(rng)).collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / sum).collect()
}

/// Mixture of four random product pure states with Dirichlet(1,1,1,1) weights.
pub fn random_separable<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let weights = dirichlet_weights(4, rng);
    let parts: Vec<(f64, DensityMatrix)> = weights
        .into_iter()
        .map(|w| (w, random_product_state(rng).projector()))
        .collect();
    let refs: Vec<(f64, &DensityMatrix)> = parts.iter().map(|(w, r)| (*w, r)).collect();
    DensityMatrix::mixture(&refs).expect("convex mixture of states")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::unitary_deviation;

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = rng_for(7, 0);
        for n in [2, 4, 8] {
            assert!(unitary_deviation(&haar_unitary(n, &mut rng)) < 1e-12);
        }
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: f64 = rng_for(3, 1).gen();
        let b: f64 = rng_for(3, 1).gen();
        let d: f64 = rng_for(3, 2).gen();
        assert_eq!(a, b);
        assert_ne!(a, d);
    }

    #[test]
    fn dirichlet_sums_to_one() {
        let mut rng = rng_for(1, 0);
        let w = dirichlet_weights(4, &mut rng);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(w.iter().all(|&x| x >= 0.0));
    }
}
