//! Analytic tactics and their expected win probabilities.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::games::{self, GameKind, GameReport, GameSpec, Tactic};
use crate::measures;
use crate::qcore::{identity, pauli_x, real, schmidt, BellState, ComplexMatrix, DensityMatrix, PureState};
use crate::states::NamedState;

/// Largest entrywise deviation allowed when recognizing a state family.
pub const FAMILY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TacticRecipe {
    OrthogonalSchmidtFlip,
    WernerFlip,
    TwoBellMixture,
    Fef,
    Identity,
}

impl TacticRecipe {
    pub const ALL: [TacticRecipe; 5] = [
        TacticRecipe::OrthogonalSchmidtFlip,
        TacticRecipe::WernerFlip,
        TacticRecipe::TwoBellMixture,
        TacticRecipe::Fef,
        TacticRecipe::Identity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TacticRecipe::OrthogonalSchmidtFlip => "orthogonal_schmidt_flip",
            TacticRecipe::WernerFlip => "werner_flip",
            TacticRecipe::TwoBellMixture => "two_bell_mixture",
            TacticRecipe::Fef => "fef",
            TacticRecipe::Identity => "identity",
        }
    }

    /// States the recipe accepts.
    pub fn applicability(self) -> &'static str {
        match self {
            TacticRecipe::OrthogonalSchmidtFlip => "two-qubit pure states",
            TacticRecipe::WernerFlip => "Werner states a|ψᵏ⟩⟨ψᵏ| + (1−a)𝟙/4",
            TacticRecipe::TwoBellMixture => "a|ψ⁺⟩⟨ψ⁺| + (1−a)|ψ⁻⟩⟨ψ⁻|",
            TacticRecipe::Fef => "any two-qubit state",
            TacticRecipe::Identity => "any state",
        }
    }

    /// Win probability the recipe is known to reach at equal priors.
    pub fn expected_formula(self) -> &'static str {
        match self {
            TacticRecipe::OrthogonalSchmidtFlip => "PNP ¾ + C/4, BD ½ + C/2",
            TacticRecipe::WernerFlip => "PNP ½(1 + a)",
            TacticRecipe::TwoBellMixture => "PNP ¾ + |1 − 2a|/4",
            TacticRecipe::Fef => "BD ≥ max(𝓕, ½)",
            TacticRecipe::Identity => "PNP ¾, BD ½",
        }
    }
}

impl fmt::Display for TacticRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TacticRecipe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "orthogonal_schmidt_flip" | "schmidt_flip" => Ok(TacticRecipe::OrthogonalSchmidtFlip),
            "werner_flip" => Ok(TacticRecipe::WernerFlip),
            "two_bell_mixture" | "two_bell" => Ok(TacticRecipe::TwoBellMixture),
            "fef" | "fef_tactic" => Ok(TacticRecipe::Fef),
            "identity" => Ok(TacticRecipe::Identity),
            other => Err(Error::validation("tactic", format!("unknown recipe `{other}`"))),
        }
    }
}

fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn inapplicable(recipe: TacticRecipe, reason: impl Into<String>) -> Error {
    Error::Inapplicable {
        recipe: recipe.name().into(),
        reason: reason.into(),
    }
}

/// Bit flips in the local Schmidt bases: `U_A = A X A†`, `V_B = B X B†`.
///
/// Both flips send `|ψ⟩` to orthogonal states and the cross term
/// `⟨ψ|U_A† V_B|ψ⟩` comes out real and equal to the concurrence.
pub fn orthogonal_schmidt_flip(psi: &PureState) -> Result<Tactic> {
    let s = schmidt(psi)?;
    let u = &s.basis_a * pauli_x() * s.basis_a.adjoint();
    let v = &s.basis_b * pauli_x() * s.basis_b.adjoint();
    Tactic::new(u, v, TacticRecipe::OrthogonalSchmidtFlip.name())
}

/// The Werner parameter of `ρ` for Bell index `k`, if `ρ` is in that family.
pub fn werner_parameter(rho: &DensityMatrix, k: BellState) -> Option<f64> {
    if !rho.is_two_qubit() {
        return None;
    }
    let fidelity = rho.expectation(k.projector().matrix()).re;
    let a = ((4.0 * fidelity - 1.0) / 3.0).clamp(0.0, 1.0);
    let model = NamedState::werner(k, a).ok()?.density().ok()?;
    (max_abs(&(model.matrix() - rho.matrix())) <= FAMILY_TOL).then_some(a)
}

/// `U_A = X`, `V_B = ±X` with the sign of `⟨ψᵏ|XX|ψᵏ⟩`.
pub fn werner_flip(k: BellState, rho: &DensityMatrix) -> Result<Tactic> {
    if werner_parameter(rho, k).is_none() {
        return Err(inapplicable(
            TacticRecipe::WernerFlip,
            format!("state is not a Werner state for {k}"),
        ));
    }
    let mut t = Tactic::flip(k.xx_sign());
    t.label = TacticRecipe::WernerFlip.name().into();
    Ok(t)
}

/// `V_B = −X` below the balanced point, `+X` above it.
pub fn two_bell_mixture(a: f64) -> Result<Tactic> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::validation("a", format!("{a} is outside [0, 1]")));
    }
    let sign = if a <= 0.5 { -1.0 } else { 1.0 };
    Tactic::new(pauli_x(), pauli_x() * real(sign), TacticRecipe::TwoBellMixture.name())
}

/// The weight `a` if `ρ = a|ψ⁺⟩⟨ψ⁺| + (1−a)|ψ⁻⟩⟨ψ⁻|`.
pub fn two_bell_parameter(rho: &DensityMatrix) -> Option<f64> {
    if !rho.is_two_qubit() {
        return None;
    }
    let a = rho.expectation(BellState::PsiPlus.projector().matrix()).re.clamp(0.0, 1.0);
    let model = NamedState::two_bell_mixture(a).ok()?.density().ok()?;
    (max_abs(&(model.matrix() - rho.matrix())) <= FAMILY_TOL).then_some(a)
}

/// Schmidt flip of the maximally entangled state closest to `ρ`.
pub fn fef_tactic(rho: &DensityMatrix) -> Result<Tactic> {
    let (_, best) = measures::fully_entangled_fraction(rho)?;
    let mut t = orthogonal_schmidt_flip(&best)?;
    t.label = TacticRecipe::Fef.name().into();
    Ok(t)
}

/// Constructs the recipe's tactic for `ρ`.
pub fn build(recipe: TacticRecipe, rho: &DensityMatrix) -> Result<Tactic> {
    match recipe {
        TacticRecipe::OrthogonalSchmidtFlip => {
            if !rho.is_two_qubit() {
                return Err(inapplicable(recipe, "needs a two-qubit state"));
            }
            let psi = rho
                .as_pure()
                .ok_or_else(|| inapplicable(recipe, "state is not pure"))?;
            orthogonal_schmidt_flip(&psi)
        }
        TacticRecipe::WernerFlip => {
            let k = BellState::ALL
                .into_iter()
                .find(|&k| werner_parameter(rho, k).is_some())
                .ok_or_else(|| inapplicable(recipe, "state is not a Werner state"))?;
            werner_flip(k, rho)
        }
        TacticRecipe::TwoBellMixture => {
            let a = two_bell_parameter(rho)
                .ok_or_else(|| inapplicable(recipe, "state is not a mixture of ψ⁺ and ψ⁻"))?;
            two_bell_mixture(a)
        }
        TacticRecipe::Fef => {
            if !rho.is_two_qubit() {
                return Err(inapplicable(recipe, "needs a two-qubit state"));
            }
            fef_tactic(rho)
        }
        TacticRecipe::Identity => {
            let d = rho.dims()[0];
            if rho.dims().len() != 2 || rho.dims()[1] != d {
                return Err(inapplicable(recipe, "needs a bipartite state with equal local dimensions"));
            }
            Tactic::new(identity(d), identity(d), recipe.name())
        }
    }
}

/// Closed-form win probability of the recipe on `ρ`, where one is known.
pub fn predicted(recipe: TacticRecipe, rho: &DensityMatrix, game: &GameSpec) -> Result<Option<f64>> {
    if !game.has_equal_priors() || !rho.is_two_qubit() {
        return Ok(None);
    }
    let c = measures::concurrence_mixed(rho)?;
    Ok(match (recipe, game.kind()) {
        (TacticRecipe::OrthogonalSchmidtFlip, GameKind::Pnp) => Some(0.75 + 0.25 * c),
        (TacticRecipe::OrthogonalSchmidtFlip, GameKind::Bd) => Some(0.5 + 0.5 * c),
        (TacticRecipe::WernerFlip, GameKind::Pnp) => BellState::ALL
            .into_iter()
            .find_map(|k| werner_parameter(rho, k))
            .map(|a| 0.5 * (1.0 + a)),
        (TacticRecipe::TwoBellMixture, GameKind::Pnp) => {
            two_bell_parameter(rho).map(|a| 0.75 + 0.25 * (1.0 - 2.0 * a).abs())
        }
        (TacticRecipe::Identity, GameKind::Pnp) => Some(0.75),
        (TacticRecipe::Identity, GameKind::Bd) => Some(0.5),
        _ => None,
    })
}

/// Plays the recipe's tactic. For the FEF recipe in BD the reported win
/// probability is never below the guessing value ½.
pub fn evaluate(recipe: TacticRecipe, rho: &DensityMatrix, game: &GameSpec) -> Result<GameReport> {
    let tactic = build(recipe, rho)?;
    let mut report = games::play(rho, &tactic, game)?;
    if recipe == TacticRecipe::Fef && game.kind() == GameKind::Bd {
        let guess = games::classical_limit(game);
        if report.win_probability < guess {
            report.win_probability = guess;
            if let Some(b) = report.bounds.concurrence_bound {
                report.saturation.concurrence = b - guess <= games::SATURATION_TOL;
            }
        }
    }
    Ok(report)
}
