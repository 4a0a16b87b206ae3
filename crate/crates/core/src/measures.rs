//! Entanglement measures and the ingredients of the win-probability bounds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimizer::{self, OptimizerConfig};
use crate::qcore::{
    c, herm_eig, pauli_y, real, schmidt, tensor, ComplexMatrix, ComplexVector, DensityMatrix,
    PureState, ZERO,
};

/// Full spectrum of a state in both orders, zero-padded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPair {
    pub ascending: Vec<f64>,
    pub descending: Vec<f64>,
}

impl SpectrumPair {
    pub fn of(rho: &DensityMatrix) -> Self {
        Self::padded(rho, rho.dim())
    }

    /// Spectrum padded with zeros to length `len` (at least the state dimension).
    pub fn padded(rho: &DensityMatrix, len: usize) -> Self {
        let mut ascending: Vec<f64> = rho.eigenvalues().into_iter().map(|v| v.max(0.0)).collect();
        ascending.resize(len.max(ascending.len()), 0.0);
        ascending.sort_by(f64::total_cmp);
        let descending = ascending.iter().rev().copied().collect();
        SpectrumPair { ascending, descending }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasureReport {
    pub concurrence: f64,
    /// Only defined for pure states.
    pub entropy: Option<f64>,
    pub fef: f64,
    pub g: Option<f64>,
    pub purity: f64,
    pub record_bound: f64,
    pub spectrum: Vec<f64>,
}

fn require_two_qubit_pure(psi: &PureState) -> Result<()> {
    if psi.is_two_qubit() {
        Ok(())
    } else {
        Err(Error::Dimension(format!("expected a two-qubit state, got dims {:?}", psi.dims())))
    }
}

fn require_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.is_two_qubit() {
        Ok(())
    } else {
        Err(Error::Dimension(format!("expected a two-qubit state, got dims {:?}", rho.dims())))
    }
}

/// `2√(λ₀λ₁)` from the Schmidt coefficients.
pub fn concurrence_pure(psi: &PureState) -> Result<f64> {
    require_two_qubit_pure(psi)?;
    let [l0, l1] = schmidt(psi)?.coefficients;
    Ok((2.0 * (l0 * l1).sqrt()).clamp(0.0, 1.0))
}

/// `ρ̃ = (Y⊗Y) ρ* (Y⊗Y)`.
pub fn spin_flip(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    require_two_qubit(rho)?;
    let yy = tensor(&pauli_y(), &pauli_y());
    Ok(&yy * rho.matrix().conjugate() * &yy)
}

/// Wootters concurrence `max(0, √μ₁ − √μ₂ − √μ₃ − √μ₄)` with `μ` the
/// eigenvalues of `ρρ̃` in descending order.
///
/// The `√μ` are taken as the singular values of `τ = V†(Y⊗Y)V*`, where the
/// columns of `V` are the eigenvectors of `ρ` scaled by `√λ`. This is
/// isospectral with the square root of `ρρ̃` but avoids square roots of
/// roundoff-level eigenvalues, which would otherwise cost about eight digits
/// on rank-deficient states.
pub fn concurrence_mixed(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubit(rho)?;
    let (vals, vecs) = herm_eig(rho.matrix())?;
    let scale = ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(
        4,
        vals.iter().map(|v| real(v.max(0.0).sqrt())),
    ));
    let v = vecs * scale;
    let yy = tensor(&pauli_y(), &pauli_y());
    let tau = v.adjoint() * yy * v.conjugate();
    let mut r: Vec<f64> = tau.singular_values().iter().copied().collect();
    r.sort_by(|a, b| b.total_cmp(a));
    Ok((r[0] - r[1] - r[2] - r[3]).clamp(0.0, 1.0))
}

/// Eigenvalues of `ρρ̃` (descending, clipped at zero) from a complex Schur
/// form, falling back to the Hermitian `√ρ ρ̃ √ρ` when Schur does not converge.
pub fn spin_flip_spectrum(rho: &DensityMatrix) -> Result<Vec<f64>> {
    let product = rho.matrix() * spin_flip(rho)?;
    let schur = nalgebra::linalg::Schur::try_new(product, f64::EPSILON, 1000);
    let mut mu: Vec<f64> = match schur.and_then(|s| s.eigenvalues()) {
        Some(ev) => ev.iter().map(|z| z.re.max(0.0)).collect(),
        None => {
            let (vals, vecs) = herm_eig(rho.matrix())?;
            let root = ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(
                4,
                vals.iter().map(|v| real(v.max(0.0).sqrt())),
            ));
            let sqrt_rho = &vecs * root * vecs.adjoint();
            let h = &sqrt_rho * spin_flip(rho)? * &sqrt_rho;
            herm_eig(&h)?.0.into_iter().map(|v| v.max(0.0)).collect()
        }
    };
    mu.sort_by(|a, b| b.total_cmp(a));
    Ok(mu)
}

fn entropy_term(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

/// Base-2 entropy of entanglement.
pub fn entanglement_entropy(psi: &PureState) -> Result<f64> {
    require_two_qubit_pure(psi)?;
    let [l0, l1] = schmidt(psi)?.coefficients;
    Ok(entropy_term(l0) + entropy_term(l1))
}

/// Columns `Φ⁺, iΦ⁻, iΨ⁺, Ψ⁻`. Real combinations of these are exactly the
/// maximally entangled states, up to a global phase.
pub fn magic_basis() -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let s = real(h);
    let si = c(0.0, h);
    ComplexMatrix::from_row_slice(
        4,
        4,
        &[
            s, si, ZERO, ZERO, //
            ZERO, ZERO, si, s, //
            ZERO, ZERO, si, -s, //
            s, -si, ZERO, ZERO,
        ],
    )
}

/// `max ⟨ψ|ρ|ψ⟩` over maximally entangled `|ψ⟩`, with the maximizer.
pub fn fully_entangled_fraction(rho: &DensityMatrix) -> Result<(f64, PureState)> {
    require_two_qubit(rho)?;
    let m = magic_basis();
    let in_magic = m.adjoint() * rho.matrix() * &m;
    let re = in_magic.map(|z| real(z.re));
    let (vals, vecs) = herm_eig(&re)?;
    let top = vecs.column(3).map(|z| real(z.re));
    let psi = PureState::normalized(vec![2, 2], &m * top)?;
    let f = rho.expectation(psi.projector().matrix()).re;
    debug_assert!((f - vals[3]).abs() < 1e-8);
    Ok((f.min(1.0), psi))
}

/// `(𝟙 ⊗ U)|Φ⁺⟩`.
pub fn maximally_entangled(u: &ComplexMatrix) -> PureState {
    let phi = crate::qcore::BellState::PhiPlus.state();
    let op = tensor(&crate::qcore::identity(2), u);
    PureState::normalized(vec![2, 2], op * phi.amplitudes()).expect("unitary image of a unit vector")
}

/// Fully entangled fraction by direct search over `(𝟙 ⊗ U)|Φ⁺⟩`.
pub fn fef_search(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<(f64, PureState)> {
    require_two_qubit(rho)?;
    let objective = |x: &[f64]| {
        let u = optimizer::angles_to_unitary(x);
        rho.expectation(maximally_entangled(&u).projector().matrix()).re
    };
    let found = optimizer::maximize(4, cfg, optimizer::random_angles, objective);
    let u = optimizer::angles_to_unitary(&found.best_x);
    Ok((found.best_value, maximally_entangled(&u)))
}

/// `max |⟨ψ|U_A† P⊥ V_B|ψ⟩|` over local unitaries, with `P⊥ = 𝟙 − |ψ⟩⟨ψ|`.
pub fn g_quantity(psi: &PureState, cfg: &OptimizerConfig) -> Result<f64> {
    require_two_qubit_pure(psi)?;
    let v = psi.amplitudes();
    let objective = |x: &[f64]| {
        let ua = tensor(&optimizer::angles_to_unitary(&x[..4]), &crate::qcore::identity(2));
        let vb = tensor(&crate::qcore::identity(2), &optimizer::angles_to_unitary(&x[4..]));
        let left = ua * v;
        let right = vb * v;
        // ⟨ψ|U†P⊥V|ψ⟩ = ⟨Uψ|Vψ⟩ − ⟨Uψ|ψ⟩⟨ψ|Vψ⟩
        (left.dotc(&right) - left.dotc(v) * v.dotc(&right)).norm()
    };
    let found = optimizer::maximize(8, cfg, |rng| {
        let mut x = optimizer::random_angles(rng);
        x.extend(optimizer::random_angles(rng));
        x
    }, objective);
    Ok(found.best_value.min(1.0))
}

/// Classical trace distance `½Σ|pᵢ − qᵢ|`.
pub fn kolmogorov(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Dimension(format!(
            "distributions of length {} and {}",
            p.len(),
            q.len()
        )));
    }
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// `½ + ½T_c(λ↑, λ↓)` over the full spectrum of `ρ`.
pub fn record_bound(rho: &DensityMatrix) -> f64 {
    let s = SpectrumPair::of(rho);
    0.5 + 0.5 * kolmogorov(&s.ascending, &s.descending).expect("equal lengths")
}

/// All measures of a two-qubit state. `g` is computed only when a config is given.
pub fn report(rho: &DensityMatrix, g_cfg: Option<&OptimizerConfig>) -> Result<MeasureReport> {
    require_two_qubit(rho)?;
    let pure = rho.as_pure();
    let concurrence = match &pure {
        Some(psi) => concurrence_pure(psi)?,
        None => concurrence_mixed(rho)?,
    };
    let entropy = pure.as_ref().map(entanglement_entropy).transpose()?;
    let g = match (&pure, g_cfg) {
        (Some(psi), Some(cfg)) => Some(g_quantity(psi, cfg)?),
        _ => None,
    };
    Ok(MeasureReport {
        concurrence,
        entropy,
        fef: fully_entangled_fraction(rho)?.0,
        g,
        purity: rho.purity(),
        record_bound: record_bound(rho),
        spectrum: SpectrumPair::of(rho).descending,
    })
}
