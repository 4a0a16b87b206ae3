//! The delocalised-interaction game engine.
//!
//! A and B hold a resource `ρ_AB`. C sends one of two question states `|z⟩`
//! on the probe modes `A_p B_p`; each party applies its local unitary only
//! when its probe mode is excited. C projects the returned probes back onto
//! `|z⟩` and A, B answer with the optimal two-outcome (Helstrom) measurement.
//!
//! Projecting the probes onto `|z⟩` leaves A and B with `σ_z = K_z ρ K_z†`
//! where `K_z = Σᵢⱼ |⟨ij|z⟩|² Uⁱ ⊗ Vʲ`, so for the particle question
//! `K = (U_A + V_B)/2`, for `|00⟩` it is `𝟙`, and for `|Φ⁺⟩` it is
//! `(U_A V_B + 𝟙)/2`.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::measures;
use crate::qcore::{
    check_unitary, herm_eigvals, identity, outer, partial_trace_op, pauli_x, positive_eig_sum, real,
    tensor, trace_distance, BellState, ComplexMatrix, DensityMatrix, PureState, C64, EIG_ZERO,
    UNITARY_TOL, VALIDATION_TOL,
};

/// Slack allowed when flagging a bound as saturated.
pub const SATURATION_TOL: f64 = 1e-8;
/// Agreement required between the dense and closed-form evaluation paths.
pub const CROSS_CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GameKind {
    /// Particle / no-particle.
    Pnp,
    /// Bell distinguishing.
    Bd,
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GameKind::Pnp => "pnp",
            GameKind::Bd => "bd",
        })
    }
}

impl FromStr for GameKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pnp" => Ok(GameKind::Pnp),
            "bd" => Ok(GameKind::Bd),
            other => Err(Error::validation("game", format!("unknown game `{other}`"))),
        }
    }
}

/// Two question states with their priors.
#[derive(Debug, Clone)]
pub struct GameSpec {
    kind: GameKind,
    priors: [f64; 2],
    questions: [PureState; 2],
    labels: [&'static str; 2],
}

impl GameSpec {
    /// Question and prior lists must have exactly two entries.
    pub fn new(kind: GameKind, priors: &[f64]) -> Result<Self> {
        if priors.len() != 2 {
            return Err(Error::validation(
                "priors",
                format!("only two-question games are supported, got {}", priors.len()),
            ));
        }
        if priors.iter().any(|&p| !(p > 0.0 && p < 1.0)) {
            return Err(Error::validation("priors", "each prior must lie in (0, 1)"));
        }
        if (priors[0] + priors[1] - 1.0).abs() > 1e-12 {
            return Err(Error::validation("priors", "priors must sum to 1"));
        }
        let (questions, labels) = match kind {
            GameKind::Pnp => (
                [BellState::PsiPlus.state(), PureState::basis(&[0, 0])?],
                ["p", "np"],
            ),
            GameKind::Bd => (
                [BellState::PsiPlus.state(), BellState::PhiPlus.state()],
                ["psi+", "phi+"],
            ),
        };
        Ok(GameSpec {
            kind,
            priors: [priors[0], priors[1]],
            questions,
            labels,
        })
    }

    /// PNP with `P_p` the probability that a particle is sent.
    pub fn pnp(p_particle: f64) -> Result<Self> {
        Self::new(GameKind::Pnp, &[p_particle, 1.0 - p_particle])
    }

    pub fn bd() -> Self {
        Self::new(GameKind::Bd, &[0.5, 0.5]).expect("equal priors are valid")
    }

    /// BD with `P_Ψ` the probability that `|Ψ⁺⟩` is sent.
    pub fn bd_with_priors(p_psi: f64) -> Result<Self> {
        Self::new(GameKind::Bd, &[p_psi, 1.0 - p_psi])
    }

    pub fn kind(&self) -> GameKind {
        self.kind
    }

    pub fn priors(&self) -> [f64; 2] {
        self.priors
    }

    pub fn questions(&self) -> &[PureState; 2] {
        &self.questions
    }

    pub fn labels(&self) -> [&'static str; 2] {
        self.labels
    }

    pub fn has_equal_priors(&self) -> bool {
        (self.priors[0] - 0.5).abs() < 1e-15
    }

    /// Same game with the question order (and priors) exchanged.
    pub fn swapped(&self) -> GameSpec {
        GameSpec {
            kind: self.kind,
            priors: [self.priors[1], self.priors[0]],
            questions: [self.questions[1].clone(), self.questions[0].clone()],
            labels: [self.labels[1], self.labels[0]],
        }
    }
}

/// A pair of local unitaries, applied when the local probe mode is excited.
#[derive(Debug, Clone, PartialEq)]
pub struct Tactic {
    pub u_a: ComplexMatrix,
    pub v_b: ComplexMatrix,
    pub label: String,
}

impl Tactic {
    pub fn new(u_a: ComplexMatrix, v_b: ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        if !u_a.is_square() || u_a.shape() != v_b.shape() {
            return Err(Error::Dimension(format!(
                "tactic unitaries have shapes {:?} and {:?}",
                u_a.shape(),
                v_b.shape()
            )));
        }
        if !matches!(u_a.nrows(), 2 | 4) {
            return Err(Error::Dimension(format!(
                "local dimension {} is not 2 or 4",
                u_a.nrows()
            )));
        }
        check_unitary(&u_a, UNITARY_TOL)?;
        check_unitary(&v_b, UNITARY_TOL)?;
        Ok(Tactic {
            u_a,
            v_b,
            label: label.into(),
        })
    }

    pub fn identity(local_dim: usize) -> Result<Self> {
        Self::new(identity(local_dim), identity(local_dim), "identity")
    }

    /// `U_A = X`, `V_B = sign·X`.
    pub fn flip(sign: f64) -> Self {
        let label = if sign < 0.0 { "flip-minus" } else { "flip" };
        Tactic::new(pauli_x(), pauli_x() * real(sign.signum()), label).expect("Pauli X is unitary")
    }

    pub fn local_dim(&self) -> usize {
        self.u_a.nrows()
    }

    /// `Uⁱ ⊗ Vʲ` for control bits `(i, j)`.
    pub fn controlled_block(&self, i: usize, j: usize) -> ComplexMatrix {
        let d = self.local_dim();
        let u = if i == 1 { self.u_a.clone() } else { identity(d) };
        let v = if j == 1 { self.v_b.clone() } else { identity(d) };
        tensor(&u, &v)
    }

    /// `K_z = (𝟙 ⊗ ⟨z|) W (𝟙 ⊗ |z⟩)` for a two-qubit question state.
    pub fn kraus_for(&self, question: &PureState) -> ComplexMatrix {
        let d = self.local_dim();
        let mut k = ComplexMatrix::zeros(d * d, d * d);
        for (idx, amp) in question.amplitudes().iter().enumerate() {
            let w = amp.norm_sqr();
            if w > 0.0 {
                k += self.controlled_block(idx >> 1, idx & 1) * real(w);
            }
        }
        k
    }
}

/// `W = Σᵢⱼ Uⁱ ⊗ Vʲ ⊗ |ij⟩⟨ij|` on `A B A_p B_p`.
pub fn build_interaction(t: &Tactic) -> ComplexMatrix {
    let mut w = ComplexMatrix::zeros(0, 0);
    for i in 0..2 {
        for j in 0..2 {
            let mut proj = ComplexMatrix::zeros(4, 4);
            proj[(2 * i + j, 2 * i + j)] = real(1.0);
            let term = tensor(&t.controlled_block(i, j), &proj);
            if w.nrows() == 0 {
                w = term;
            } else {
                w += term;
            }
        }
    }
    w
}

fn check_resource(rho: &DensityMatrix, t: &Tactic) -> Result<()> {
    let d = t.local_dim();
    if rho.dims() != [d, d] {
        return Err(Error::Dimension(format!(
            "resource dims {:?} do not match tactic local dimension {d}",
            rho.dims()
        )));
    }
    Ok(())
}

/// Subnormalized states left with A and B after C's check passes, one per question.
pub fn conditional_operators(rho: &DensityMatrix, t: &Tactic, g: &GameSpec) -> Result<[ComplexMatrix; 2]> {
    check_resource(rho, t)?;
    let sigma = |q: &PureState| {
        let k = t.kraus_for(q);
        &k * rho.matrix() * k.adjoint()
    };
    Ok([sigma(&g.questions[0]), sigma(&g.questions[1])])
}

/// Same as [`conditional_operators`] but through the full interaction `W`
/// on `A B A_p B_p` followed by a partial trace over the probes.
pub fn conditional_operators_via_interaction(
    rho: &DensityMatrix,
    t: &Tactic,
    g: &GameSpec,
) -> Result<[ComplexMatrix; 2]> {
    check_resource(rho, t)?;
    let w = build_interaction(t);
    let d = t.local_dim();
    let one = |q: &PureState| -> Result<ComplexMatrix> {
        let pz = outer(q.amplitudes(), q.amplitudes());
        let input = tensor(rho.matrix(), &pz);
        let evolved = &w * input * w.adjoint();
        let projected = tensor(&identity(d * d), &pz) * evolved;
        partial_trace_op(&projected, &[d, d, 2, 2], &[0, 1])
    };
    Ok([one(&g.questions[0])?, one(&g.questions[1])?])
}

/// Optimal two-hypothesis success probability for subnormalized operators:
/// `P₂ Tr σ₂ + eigs₊(P₁σ₁ − P₂σ₂)`.
pub fn helstrom_win(s1: &ComplexMatrix, s2: &ComplexMatrix, p1: f64, p2: f64) -> Result<f64> {
    if p1 < 0.0 || p2 < 0.0 || (p1 + p2 - 1.0).abs() > 1e-12 {
        return Err(Error::validation("priors", format!("({p1}, {p2}) is not a distribution")));
    }
    if s1.shape() != s2.shape() {
        return Err(Error::Dimension("Helstrom operators differ in size".into()));
    }
    let diff = s1 * real(p1) - s2 * real(p2);
    Ok(p2 * s2.trace().re + positive_eig_sum(&diff)?)
}

/// Roots of `m² + (k₂₂−k₁₁)m − (k₁₁k₂₂ − k₁₂k₂₁) = 0`, the non-zero spectrum of
/// `K₁|ψ⟩⟨ψ|K₁† − K₂|ψ⟩⟨ψ|K₂†` with `kᵢⱼ = ⟨ψ|Kᵢ†Kⱼ|ψ⟩`. Returns `(m₊, m₋)`.
pub fn eig_pair_formula(k11: C64, k22: C64, k12: C64, k21: C64) -> Result<(f64, f64)> {
    let disc = (k22 + k11) * (k22 + k11) - k12 * k21 * 4.0;
    let scale = 1.0 + (k11.norm() + k22.norm()).powi(2);
    if disc.im.abs() > VALIDATION_TOL * scale || disc.re < -VALIDATION_TOL * scale {
        return Err(Error::Inconsistency(format!(
            "eigenvalue discriminant {disc} is not a non-negative real"
        )));
    }
    let diff = k11 - k22;
    if diff.im.abs() > VALIDATION_TOL * scale {
        return Err(Error::Inconsistency(format!("k11 - k22 = {diff} is not real")));
    }
    let root = disc.re.max(0.0).sqrt();
    Ok((0.5 * (diff.re + root), 0.5 * (diff.re - root)))
}

/// Closed-form win probability for a pure resource using the two-vector
/// eigenvalue formula.
pub fn win_pure_analytic(psi: &PureState, t: &Tactic, g: &GameSpec) -> Result<f64> {
    let d = t.local_dim();
    if psi.dims() != [d, d] {
        return Err(Error::Dimension("pure resource does not match tactic".into()));
    }
    let [p1, p2] = g.priors;
    let v1 = t.kraus_for(&g.questions[0]) * psi.amplitudes() * real(p1.sqrt());
    let v2 = t.kraus_for(&g.questions[1]) * psi.amplitudes() * real(p2.sqrt());
    let (k11, k22, k12, k21) = (v1.dotc(&v1), v2.dotc(&v2), v1.dotc(&v2), v2.dotc(&v1));
    let (m_plus, _) = eig_pair_formula(k11, k22, k12, k21)?;
    let m_plus = if m_plus > EIG_ZERO { m_plus } else { 0.0 };
    Ok(k22.re + m_plus)
}

/// Win probability only; the optimizer's objective.
pub fn win_probability(rho: &DensityMatrix, t: &Tactic, g: &GameSpec) -> Result<f64> {
    let [s1, s2] = conditional_operators(rho, t, g)?;
    helstrom_win(&s1, &s2, g.priors[0], g.priors[1])
}

/// Classical (separable-resource) maximum.
pub fn classical_limit(g: &GameSpec) -> f64 {
    let [p1, p2] = g.priors;
    match g.kind {
        GameKind::Pnp => p1.max(p2 + 0.5 * p1),
        GameKind::Bd => p1.max(p2),
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize, PartialEq)]
pub struct Bounds {
    /// `¾ + C/4` (PNP) or `½ + C/2` (BD); two-qubit resources at equal priors.
    pub concurrence_bound: Option<f64>,
    /// `½ + ½T_c(λ↑, λ↓)`; PNP at equal priors.
    pub record_bound: Option<f64>,
    pub classical_limit: f64,
}

impl Bounds {
    pub fn tightest(&self) -> Option<f64> {
        [self.concurrence_bound, self.record_bound]
            .into_iter()
            .flatten()
            .reduce(f64::min)
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct Saturation {
    pub concurrence: bool,
    pub record: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GameReport {
    pub game: GameKind,
    pub priors: [f64; 2],
    pub questions: [&'static str; 2],
    pub tactic: String,
    pub win_probability: f64,
    /// `Tr σ_z`: probability that C's check passes for each question.
    pub no_disturb: [f64; 2],
    pub bounds: Bounds,
    pub saturation: Saturation,
    #[serde(skip)]
    pub conditional_operators: [ComplexMatrix; 2],
}

impl GameReport {
    pub fn exceeds_classical(&self) -> bool {
        self.win_probability > self.bounds.classical_limit + SATURATION_TOL
    }
}

/// Bounds for a resource in a given game.
pub fn bounds_for(rho: &DensityMatrix, g: &GameSpec) -> Result<Bounds> {
    let mut bounds = Bounds {
        classical_limit: classical_limit(g),
        ..Default::default()
    };
    if rho.is_two_qubit() && g.has_equal_priors() {
        let conc = measures::concurrence_mixed(rho)?;
        match g.kind {
            GameKind::Pnp => {
                bounds.concurrence_bound = Some(0.75 + 0.25 * conc);
                bounds.record_bound = Some(measures::record_bound(rho));
            }
            GameKind::Bd => bounds.concurrence_bound = Some(0.5 + 0.5 * conc),
        }
    }
    Ok(bounds)
}

/// Full evaluation with bounds and internal cross-checks.
///
/// For pure resources the closed-form eigenvalue route must agree with the
/// dense route; for PNP at equal priors so must the trace-distance form
/// `¼ + ½T(σ_p, ρ) + ¼Tr σ_p`.
pub fn play(rho: &DensityMatrix, t: &Tactic, g: &GameSpec) -> Result<GameReport> {
    let sigmas = conditional_operators(rho, t, g)?;
    let [p1, p2] = g.priors;
    let win = helstrom_win(&sigmas[0], &sigmas[1], p1, p2)?;

    if let Some(psi) = rho.as_pure() {
        let analytic = win_pure_analytic(&psi, t, g)?;
        if (analytic - win).abs() > CROSS_CHECK_TOL {
            return Err(Error::Inconsistency(format!(
                "closed-form win {analytic} disagrees with dense {win}"
            )));
        }
    }
    if g.kind == GameKind::Pnp && g.has_equal_priors() {
        let alt = 0.25 + 0.5 * trace_distance(&sigmas[0], rho.matrix())? + 0.25 * sigmas[0].trace().re;
        if (alt - win).abs() > CROSS_CHECK_TOL {
            return Err(Error::Inconsistency(format!(
                "trace-distance form {alt} disagrees with Helstrom form {win}"
            )));
        }
    }

    let bounds = bounds_for(rho, g)?;
    let saturation = Saturation {
        concurrence: bounds
            .concurrence_bound
            .is_some_and(|b| b - win <= SATURATION_TOL),
        record: bounds.record_bound.is_some_and(|b| b - win <= SATURATION_TOL),
    };
    Ok(GameReport {
        game: g.kind,
        priors: g.priors,
        questions: g.labels,
        tactic: t.label.clone(),
        win_probability: win,
        no_disturb: [sigmas[0].trace().re, sigmas[1].trace().re],
        bounds,
        saturation,
        conditional_operators: sigmas,
    })
}

pub fn pnp_win(rho: &DensityMatrix, t: &Tactic, p_particle: f64) -> Result<GameReport> {
    play(rho, t, &GameSpec::pnp(p_particle)?)
}

pub fn bd_win(rho: &DensityMatrix, t: &Tactic) -> Result<GameReport> {
    play(rho, t, &GameSpec::bd())
}

/// Spectrum of a Helstrom operator, exposed for diagnostics.
pub fn helstrom_spectrum(s1: &ComplexMatrix, s2: &ComplexMatrix, p1: f64, p2: f64) -> Result<Vec<f64>> {
    herm_eigvals(&(s1 * real(p1) - s2 * real(p2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{pauli_y, pauli_z, unitary_deviation, ZERO};
    use crate::random::{haar_state, haar_unitary, random_density, rng_for};
    use crate::states::NamedState;

    fn max_abs(m: &ComplexMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn identity_tactic_gives_identity_interaction() {
        let w = build_interaction(&Tactic::identity(2).unwrap());
        assert!(max_abs(&(w - identity(16))) < 1e-15);
    }

    #[test]
    fn interaction_is_unitary_for_random_tactics() {
        let mut rng = rng_for(11, 0);
        for _ in 0..5 {
            let t = Tactic::new(haar_unitary(2, &mut rng), haar_unitary(2, &mut rng), "r").unwrap();
            assert!(unitary_deviation(&build_interaction(&t)) < 1e-9);
        }
    }

    #[test]
    fn double_slit_flip_maps_phi_plus_to_psi_plus() {
        let w = build_interaction(&Tactic::flip(1.0));
        let input = BellState::PhiPlus.state().tensor(&BellState::PsiPlus.state());
        let out = PureState::new(input.dims().to_vec(), &w * input.amplitudes()).unwrap();
        let expect = BellState::PsiPlus.state().tensor(&BellState::PsiPlus.state());
        assert!(out.equal_up_to_phase(&expect));
        assert!((out.amplitudes() - expect.amplitudes()).norm() < 1e-14);
    }

    #[test]
    fn no_particle_branch_is_inert() {
        let mut rng = rng_for(12, 0);
        let t = Tactic::new(haar_unitary(2, &mut rng), haar_unitary(2, &mut rng), "r").unwrap();
        let rho = random_density(&[2, 2], 4, &mut rng);
        let p00 = PureState::basis(&[0, 0]).unwrap().projector();
        let input = rho.tensor(&p00);
        let w = build_interaction(&t);
        let out = &w * input.matrix() * w.adjoint();
        assert!(max_abs(&(out - input.matrix())) < 1e-14);
    }

    #[test]
    fn conditional_operator_examples() {
        let rho = BellState::PhiPlus.projector();
        let pnp = GameSpec::pnp(0.5).unwrap();
        let [sp, snp] = conditional_operators(&rho, &Tactic::identity(2).unwrap(), &pnp).unwrap();
        assert!(max_abs(&(sp - rho.matrix())) < 1e-15);
        assert!(max_abs(&(snp - rho.matrix())) < 1e-15);

        let [sp, snp] = conditional_operators(&rho, &Tactic::flip(1.0), &pnp).unwrap();
        assert!(max_abs(&(&sp - BellState::PsiPlus.projector().matrix())) < 1e-15);
        assert!((sp.trace().re - 1.0).abs() < 1e-15);
        assert!(max_abs(&(snp - rho.matrix())) < 1e-15);

        let rho = BellState::PsiPlus.projector();
        let [s_psi, s_phi] = conditional_operators(&rho, &Tactic::flip(1.0), &GameSpec::bd()).unwrap();
        // K₁ = (X⊗𝟙 + 𝟙⊗X)/2 sends ψ⁺ to φ⁺; K₂ = (X⊗X + 𝟙)/2 fixes it
        assert!(max_abs(&(s_psi - BellState::PhiPlus.projector().matrix())) < 1e-15);
        assert!(max_abs(&(s_phi - rho.matrix())) < 1e-15);
    }

    #[test]
    fn kraus_shortcut_matches_full_interaction() {
        let mut rng = rng_for(13, 0);
        for kind in [GameKind::Pnp, GameKind::Bd] {
            let g = GameSpec::new(kind, &[0.5, 0.5]).unwrap();
            for _ in 0..3 {
                let t = Tactic::new(haar_unitary(2, &mut rng), haar_unitary(2, &mut rng), "r").unwrap();
                let rho = random_density(&[2, 2], 3, &mut rng);
                let fast = conditional_operators(&rho, &t, &g).unwrap();
                let slow = conditional_operators_via_interaction(&rho, &t, &g).unwrap();
                for (a, b) in fast.iter().zip(&slow) {
                    assert!(max_abs(&(a - b)) < 1e-13);
                }
            }
        }
    }

    #[test]
    fn helstrom_examples() {
        let rho = random_density(&[2, 2], 4, &mut rng_for(14, 0));
        let p = helstrom_win(rho.matrix(), rho.matrix(), 0.5, 0.5).unwrap();
        assert!((p - 0.5).abs() < 1e-14);
        let a = BellState::PhiPlus.projector();
        let b = BellState::PsiMinus.projector();
        assert!((helstrom_win(a.matrix(), b.matrix(), 0.5, 0.5).unwrap() - 1.0).abs() < 1e-14);
        assert!(helstrom_win(a.matrix(), b.matrix(), 0.7, 0.7).is_err());
    }

    #[test]
    fn helstrom_swap_symmetry() {
        let mut rng = rng_for(15, 0);
        for _ in 0..20 {
            let s1 = random_density(&[2, 2], 2, &mut rng).matrix() * real(0.6);
            let s2 = random_density(&[2, 2], 3, &mut rng).matrix() * real(0.9);
            let a = helstrom_win(&s1, &s2, 0.3, 0.7).unwrap();
            let b = helstrom_win(&s2, &s1, 0.7, 0.3).unwrap();
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn eig_pair_examples() {
        let one = real(1.0);
        let (p, m) = eig_pair_formula(one, one, one, one).unwrap();
        assert!(p.abs() < 1e-15 && m.abs() < 1e-15);
        let (p, m) = eig_pair_formula(one, one, ZERO, ZERO).unwrap();
        assert!((p - 1.0).abs() < 1e-15 && (m + 1.0).abs() < 1e-15);
        let (p, m) = eig_pair_formula(one, ZERO, ZERO, ZERO).unwrap();
        assert!((p - 1.0).abs() < 1e-15 && m.abs() < 1e-15);
        // complex discriminant is inconsistent with Gram data
        assert!(eig_pair_formula(one, one, crate::qcore::I, one).is_err());
    }

    #[test]
    fn eig_pair_matches_dense_spectrum() {
        let mut rng = rng_for(16, 0);
        for _ in 0..50 {
            let psi = haar_state(&[2, 2], &mut rng);
            let k1 = haar_unitary(4, &mut rng) * real(0.8);
            let k2 = haar_unitary(4, &mut rng) * real(0.6);
            let a = &k1 * psi.amplitudes();
            let b = &k2 * psi.amplitudes();
            let (mp, mm) = eig_pair_formula(a.dotc(&a), b.dotc(&b), a.dotc(&b), b.dotc(&a)).unwrap();
            let dense = herm_eigvals(&(outer(&a, &a) - outer(&b, &b))).unwrap();
            // dense ascending: m₋, 0, 0, m₊
            assert!((dense[3] - mp).abs() < 1e-9, "{dense:?} vs {mp}");
            assert!((dense[0] - mm).abs() < 1e-9, "{dense:?} vs {mm}");
            assert!(dense[1].abs() < 1e-9 && dense[2].abs() < 1e-9);
        }
    }

    #[test]
    fn pnp_examples() {
        let phi = BellState::PhiPlus.projector();
        let r = pnp_win(&phi, &Tactic::flip(1.0), 0.5).unwrap();
        assert!((r.win_probability - 1.0).abs() < 1e-12);
        assert!(r.saturation.concurrence && r.saturation.record);

        let zero = PureState::basis(&[0, 0]).unwrap().projector();
        let r = pnp_win(&zero, &Tactic::flip(1.0), 0.5).unwrap();
        assert!((r.win_probability - 0.75).abs() < 1e-12);

        let w = NamedState::werner(BellState::PsiPlus, 0.6).unwrap().density().unwrap();
        let r = pnp_win(&w, &Tactic::flip(BellState::PsiPlus.xx_sign()), 0.5).unwrap();
        assert!((r.win_probability - 0.8).abs() < 1e-12);
        assert!(r.saturation.record && !r.saturation.concurrence);
    }

    #[test]
    fn bd_examples() {
        let psi = BellState::PsiPlus.projector();
        let r = bd_win(&psi, &Tactic::flip(1.0)).unwrap();
        assert!((r.win_probability - 1.0).abs() < 1e-12);

        let zero = PureState::basis(&[0, 0]).unwrap().projector();
        let mut rng = rng_for(17, 0);
        for _ in 0..20 {
            let t = Tactic::new(haar_unitary(2, &mut rng), haar_unitary(2, &mut rng), "r").unwrap();
            assert!(bd_win(&zero, &t).unwrap().win_probability <= 0.5 + 1e-10);
        }
        let r = bd_win(&zero, &Tactic::identity(2).unwrap()).unwrap();
        assert!((r.win_probability - 0.5).abs() < 1e-14);
    }

    #[test]
    fn pnp_no_particle_operator_is_the_resource() {
        let mut rng = rng_for(18, 0);
        let rho = random_density(&[2, 2], 4, &mut rng);
        let t = Tactic::new(haar_unitary(2, &mut rng), haar_unitary(2, &mut rng), "r").unwrap();
        let [_, snp] = conditional_operators(&rho, &t, &GameSpec::pnp(0.5).unwrap()).unwrap();
        assert_eq!(&snp, rho.matrix());
    }

    #[test]
    fn bd_swap_invariance() {
        let mut rng = rng_for(19, 0);
        for _ in 0..20 {
            let rho = random_density(&[2, 2], 3, &mut rng);
            let t = Tactic::new(haar_unitary(2, &mut rng), haar_unitary(2, &mut rng), "r").unwrap();
            for p in [0.5, 0.3] {
                let g = GameSpec::bd_with_priors(p).unwrap();
                let a = win_probability(&rho, &t, &g).unwrap();
                let b = win_probability(&rho, &t, &g.swapped()).unwrap();
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn classical_limits() {
        assert!((classical_limit(&GameSpec::pnp(0.5).unwrap()) - 0.75).abs() < 1e-15);
        assert!((classical_limit(&GameSpec::pnp(2.0 / 3.0).unwrap()) - 2.0 / 3.0).abs() < 1e-15);
        assert!((classical_limit(&GameSpec::pnp(0.6).unwrap()) - 0.7).abs() < 1e-15);
        assert!((classical_limit(&GameSpec::bd()) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn game_spec_rejects_three_questions() {
        assert!(GameSpec::new(GameKind::Pnp, &[0.2, 0.3, 0.5]).is_err());
        assert!(GameSpec::new(GameKind::Bd, &[0.2, 0.3]).is_err());
        assert!(GameSpec::pnp(0.0).is_err());
    }

    #[test]
    fn tactic_rejects_non_unitary() {
        let bad = pauli_x() * real(1.1);
        assert!(matches!(Tactic::new(bad, pauli_y(), "bad"), Err(Error::NotUnitary { .. })));
        assert!(matches!(
            Tactic::new(identity(3), identity(3), "odd"),
            Err(Error::Dimension(_))
        ));
        assert!(Tactic::new(pauli_z(), identity(4), "mismatch").is_err());
    }

    #[test]
    fn resource_dimension_mismatch() {
        let rho = DensityMatrix::maximally_mixed(vec![4, 4]);
        assert!(matches!(bd_win(&rho, &Tactic::flip(1.0)), Err(Error::Dimension(_))));
    }
}
