//! Trace-distance inequalities, strongly anonymous states and the
//! conditioned variants of the games.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::games::Tactic;
use crate::measures::{self, kolmogorov, SpectrumPair};
use crate::nelder_mead::NelderMead;
use crate::optimizer::{self, OptimizerConfig};
use crate::qcore::{
    check_unitary, herm_eig, identity, real, tensor, trace_distance, BellState, ComplexMatrix,
    ComplexVector, DensityMatrix, PureState, EIG_ZERO, UNITARY_TOL,
};
use crate::states::NamedState;

/// Slack below which an inequality counts as violated.
pub const HOLDS_TOL: f64 = 1e-10;
/// Residual allowed on the equality constraints of the conditioned games.
pub const CONSTRAINT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

impl InequalityReport {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        let slack = rhs - lhs;
        InequalityReport {
            lhs,
            rhs,
            slack,
            holds: slack >= -HOLDS_TOL,
        }
    }
}

/// `T(ρ, σ) ≤ T_c(λ↑, μ↓)` with both spectra zero-padded to the full dimension.
pub fn lemma1_check(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<InequalityReport> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Dimension(format!(
            "states of dimension {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let lhs = trace_distance(rho, sigma)?;
    let up = SpectrumPair::of(rho).ascending;
    let down = SpectrumPair::of(sigma).descending;
    Ok(InequalityReport::new(lhs, kolmogorov(&up, &down)?))
}

/// Spectral purification `Σᵢ √λᵢ |vᵢ⟩|i⟩` with a reference of dimension `rank(ρ)`.
pub fn purify(rho: &DensityMatrix) -> Result<PureState> {
    let (vals, vecs) = herm_eig(rho.matrix())?;
    let kept: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > EIG_ZERO).collect();
    let r = kept.len().max(1);
    let n = rho.dim();
    let mut psi = ComplexVector::zeros(n * r);
    for (slot, &i) in kept.iter().enumerate() {
        let w = real(vals[i].sqrt());
        for row in 0..n {
            psi[row * r + slot] += vecs[(row, i)] * w;
        }
    }
    let mut dims = rho.dims().to_vec();
    dims.push(r);
    PureState::normalized(dims, psi)
}

fn local_ops(rho: &DensityMatrix, u: &ComplexMatrix, v: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if !rho.is_two_qubit() {
        return Err(Error::Dimension(format!("expected a two-qubit state, got {:?}", rho.dims())));
    }
    if u.shape() != (2, 2) || v.shape() != (2, 2) {
        return Err(Error::Dimension("local unitaries must be 2×2".into()));
    }
    check_unitary(u, UNITARY_TOL)?;
    check_unitary(v, UNITARY_TOL)?;
    Ok((tensor(u, &identity(2)), tensor(&identity(2), v)))
}

/// `T(U_A ρ U_A†, ρ) ≤ T(U_A|Ψ⟩, V_B|Ψ⟩)` with `|Ψ⟩` a purification of `ρ`.
pub fn td_inequality(rho: &DensityMatrix, u_a: &ComplexMatrix, v_b: &ComplexMatrix) -> Result<InequalityReport> {
    let (ua, vb) = local_ops(rho, u_a, v_b)?;
    let big = purify(rho)?;
    let (lhs, rhs) = td_sides(rho, &big, &ua, &vb)?;
    Ok(InequalityReport::new(lhs, rhs))
}

/// Pure-state trace distance `√(1 − |⟨a|b⟩|²)` evaluated as the norm of the
/// part of `|b⟩` orthogonal to `|a⟩`, which keeps full precision when the
/// states nearly coincide.
fn pure_distance(a: &ComplexVector, b: &ComplexVector) -> f64 {
    (b - a * a.dotc(b)).norm().min(1.0)
}

fn td_sides(rho: &DensityMatrix, big: &PureState, ua: &ComplexMatrix, vb: &ComplexMatrix) -> Result<(f64, f64)> {
    let lhs = trace_distance(&(ua * rho.matrix() * ua.adjoint()), rho.matrix())?;
    let r = big.dims()[2];
    let lift = |op: &ComplexMatrix| tensor(op, &identity(r));
    let left = lift(ua) * big.amplitudes();
    let right = lift(vb) * big.amplitudes();
    Ok((lhs, pure_distance(&left, &right)))
}

/// `lhs − rhs` of the trace-distance inequality.
fn td_gap(rho: &DensityMatrix, big: &PureState, ua: &ComplexMatrix, vb: &ComplexMatrix) -> f64 {
    td_sides(rho, big, ua, vb).map_or(f64::NEG_INFINITY, |(l, r)| l - r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub a: f64,
    /// Largest `lhs − rhs` found.
    pub max_gap: f64,
    pub violated: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ViolationScan {
    pub points: Vec<ScanPoint>,
    /// Smallest grid value with a violation.
    pub threshold: Option<f64>,
}

/// Largest violation of the trace-distance inequality over qubit unitaries
/// for the `ψ⁺` Werner state with parameter `a`.
pub fn werner_max_gap(a: f64, cfg: &OptimizerConfig) -> Result<f64> {
    let rho = NamedState::werner(BellState::PsiPlus, a)?.density()?;
    let big = purify(&rho)?;
    let objective = |x: &[f64]| {
        let ua = tensor(&optimizer::angles_to_unitary(&x[..4]), &identity(2));
        let vb = tensor(&identity(2), &optimizer::angles_to_unitary(&x[4..]));
        td_gap(&rho, &big, &ua, &vb)
    };
    let found = optimizer::maximize(
        8,
        cfg,
        |rng| {
            let mut x = optimizer::random_angles(rng);
            x.extend(optimizer::random_angles(rng));
            x
        },
        objective,
    );
    Ok(found.best_value)
}

/// Scans the grid upward and stops at the first violation. Each grid point
/// uses its own seed derived from `cfg.seed` and the point index.
pub fn werner_violation_scan(step: f64, cfg: &OptimizerConfig) -> Result<ViolationScan> {
    cfg.validate()?;
    let grid = optimizer::unit_grid(step)?;
    let mut points = Vec::new();
    for (idx, &a) in grid.iter().enumerate() {
        let point_cfg = OptimizerConfig {
            seed: cfg.seed ^ ((idx as u64) << 32),
            ..cfg.clone()
        };
        let gap = werner_max_gap(a, &point_cfg)?;
        let violated = gap > HOLDS_TOL;
        points.push(ScanPoint { a, max_gap: gap, violated });
        if violated {
            return Ok(ViolationScan { points, threshold: Some(a) });
        }
    }
    Ok(ViolationScan { points, threshold: None })
}

/// Evaluates `lhs − rhs` on every grid point (no early stop), in parallel.
pub fn werner_gap_profile(step: f64, cfg: &OptimizerConfig) -> Result<Vec<ScanPoint>> {
    cfg.validate()?;
    optimizer::unit_grid(step)?
        .into_par_iter()
        .enumerate()
        .map(|(idx, a)| {
            let point_cfg = OptimizerConfig {
                seed: cfg.seed ^ ((idx as u64) << 32),
                ..cfg.clone()
            };
            let gap = werner_max_gap(a, &point_cfg)?;
            Ok(ScanPoint { a, max_gap: gap, violated: gap > HOLDS_TOL })
        })
        .collect()
}

/// `Σᵢⱼ ρᵢⱼ |ii⟩⟨jj|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SAState {
    pub diagonal: Vec<f64>,
    /// `(i, j, ρᵢⱼ)` with `i < j`.
    pub coherences: Vec<(usize, usize, Complex64)>,
    pub labels: Vec<String>,
}

impl SAState {
    pub fn two_qubit(rho00: f64, rho01: Complex64) -> Result<Self> {
        let s = SAState {
            diagonal: vec![rho00, 1.0 - rho00],
            coherences: vec![(0, 1, rho01)],
            labels: vec!["0".into(), "1".into()],
        };
        s.density()?;
        Ok(s)
    }

    pub fn local_dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn rho01(&self) -> Complex64 {
        self.coherences
            .iter()
            .find(|(i, j, _)| (*i, *j) == (0, 1))
            .map(|(_, _, z)| *z)
            .unwrap_or_default()
    }

    pub fn density(&self) -> Result<DensityMatrix> {
        let d = self.local_dim();
        if d < 2 {
            return Err(Error::validation("diagonal", "need at least two levels"));
        }
        if self.diagonal.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::validation("diagonal", "weights must lie in [0, 1]"));
        }
        let idx = |i: usize| i * d + i;
        let mut m = ComplexMatrix::zeros(d * d, d * d);
        for (i, &p) in self.diagonal.iter().enumerate() {
            m[(idx(i), idx(i))] = real(p);
        }
        for &(i, j, z) in &self.coherences {
            if i >= j || j >= d {
                return Err(Error::validation("coherences", format!("bad index pair ({i}, {j})")));
            }
            m[(idx(i), idx(j))] = z;
            m[(idx(j), idx(i))] = z.conj();
        }
        DensityMatrix::new(vec![d, d], m).map_err(|e| match e {
            Error::Validation { reason, .. } => Error::validation("rho01", reason),
            other => other,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaOptimum {
    /// `max_φ T(U_A ρ U_A†, ρ)` over diagonal phase unitaries.
    pub max_t: f64,
    pub concurrence: f64,
    pub p_pnp2: f64,
}

/// `T(U_φ ρ U_φ†, ρ)` for `U_φ = diag(1, e^{iφ}) ⊗ 𝟙`.
pub fn sa_phase_distance(rho: &DensityMatrix, phi: f64) -> Result<f64> {
    let mut u = identity(2);
    u[(1, 1)] = Complex64::from_polar(1.0, phi);
    let ua = tensor(&u, &identity(2));
    trace_distance(&(&ua * rho.matrix() * ua.adjoint()), rho.matrix())
}

/// Best condition-2 PNP value on a two-qubit SA state. The maximal
/// distance `2|ρ₀₁|` is confirmed by a phase scan and compared to the
/// concurrence.
pub fn sa_pnp2_optimum(s: &SAState) -> Result<SaOptimum> {
    if s.local_dim() != 2 {
        return Err(Error::validation("sa", "only two-qubit SA states are supported"));
    }
    let rho = s.density()?;
    let analytic = 2.0 * s.rho01().norm();
    let steps = 720;
    let (mut best_phi, mut best) = (0.0, f64::MIN);
    for k in 0..steps {
        let phi = 2.0 * std::f64::consts::PI * k as f64 / steps as f64;
        let t = sa_phase_distance(&rho, phi)?;
        if t > best {
            (best_phi, best) = (phi, t);
        }
    }
    let refine = NelderMead {
        tolerance: 1e-15,
        initial_step: 0.01,
        ..Default::default()
    }
    .minimize(|x| -sa_phase_distance(&rho, x[0]).unwrap_or(0.0), &[best_phi]);
    let numeric = best.max(-refine.value);
    if (numeric - analytic).abs() > 1e-9 {
        return Err(Error::Inconsistency(format!(
            "phase scan gives {numeric}, closed form {analytic}"
        )));
    }
    let concurrence = measures::concurrence_mixed(&rho)?;
    Ok(SaOptimum {
        max_t: analytic,
        concurrence,
        p_pnp2: 0.5 * (1.0 + analytic),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConditionedVariant {
    /// PNP with a perfect record.
    Pnp1,
    /// PNP without disturbing the question.
    Pnp2,
    /// BD with a perfect record.
    Bd1,
    /// BD without disturbing the question.
    Bd2,
}

impl ConditionedVariant {
    pub const ALL: [ConditionedVariant; 4] = [
        ConditionedVariant::Pnp1,
        ConditionedVariant::Pnp2,
        ConditionedVariant::Bd1,
        ConditionedVariant::Bd2,
    ];

    pub fn classical_limit(self) -> f64 {
        match self {
            ConditionedVariant::Pnp1 => 0.75,
            _ => 0.5,
        }
    }
}

impl fmt::Display for ConditionedVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConditionedVariant::Pnp1 => "pnp1",
            ConditionedVariant::Pnp2 => "pnp2",
            ConditionedVariant::Bd1 => "bd1",
            ConditionedVariant::Bd2 => "bd2",
        })
    }
}

impl FromStr for ConditionedVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pnp1" => Ok(ConditionedVariant::Pnp1),
            "pnp2" => Ok(ConditionedVariant::Pnp2),
            "bd1" => Ok(ConditionedVariant::Bd1),
            "bd2" => Ok(ConditionedVariant::Bd2),
            other => Err(Error::validation("variant", format!("unknown variant `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionedReport {
    pub variant: ConditionedVariant,
    pub objective: f64,
    pub constraint_residual: f64,
    pub classical_limit: f64,
    /// Two-qubit inputs with zero concurrence.
    pub separable: bool,
}

/// Evaluates a conditioned game after checking its equality constraint.
///
/// Separable inputs must stay at or below the variant's classical limit;
/// anything else is reported as an inconsistency.
pub fn conditioned_game_check(
    variant: ConditionedVariant,
    rho: &DensityMatrix,
    tactic: &Tactic,
) -> Result<ConditionedReport> {
    let (ua, vb) = local_ops(rho, &tactic.u_a, &tactic.v_b)?;
    let r = rho.matrix();
    let conj = |op: &ComplexMatrix| op * r * op.adjoint();
    let cross = (&ua * r * vb.adjoint()).trace().re;
    let cross_plain = (&ua * r * &vb).trace().re;
    let half = |a: ComplexMatrix, b: ComplexMatrix| (a + b) * real(0.5);

    let (objective, residual) = match variant {
        ConditionedVariant::Pnp1 => {
            let t = trace_distance(r, &half(conj(&ua), conj(&vb)))?;
            (0.75 + 0.25 * cross, (1.0 - t).abs())
        }
        ConditionedVariant::Pnp2 => {
            let t = trace_distance(&conj(&ua), r)?;
            (0.5 * (1.0 + t), (1.0 - cross).abs())
        }
        ConditionedVariant::Bd1 => {
            let uv = &ua * &vb;
            let t = trace_distance(&half(r.clone(), conj(&uv)), &half(conj(&ua), conj(&vb)))?;
            (0.5 + 0.25 * (cross + cross_plain), (1.0 - t).abs())
        }
        ConditionedVariant::Bd2 => {
            let t = trace_distance(&conj(&ua), r)?;
            let res = (1.0 - cross).abs().max((1.0 - cross_plain).abs());
            (0.5 * (1.0 + t), res)
        }
    };
    if residual > CONSTRAINT_TOL {
        return Err(Error::Constraint {
            variant: variant.to_string(),
            residual,
        });
    }
    let separable = measures::concurrence_mixed(rho)? <= HOLDS_TOL;
    let classical_limit = variant.classical_limit();
    if separable && objective > classical_limit + CONSTRAINT_TOL {
        return Err(Error::Inconsistency(format!(
            "{variant} reaches {objective} on a separable state, above {classical_limit}"
        )));
    }
    Ok(ConditionedReport {
        variant,
        objective,
        constraint_residual: residual,
        classical_limit,
        separable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{c, partial_trace, pauli_x, pauli_z};
    use crate::random::{haar_unitary, random_density, random_separable, rng_for};
    use crate::tactics;

    #[test]
    fn lemma1_examples() {
        let rho = random_density(&[2, 2], 3, &mut rng_for(51, 0));
        let r = lemma1_check(&rho, &rho).unwrap();
        assert!(r.lhs.abs() < 1e-12 && r.holds && r.rhs >= 0.0);
        let a = PureState::basis(&[0, 0]).unwrap().projector();
        let b = PureState::basis(&[1, 1]).unwrap().projector();
        let r = lemma1_check(&a, &b).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-12 && (r.rhs - 1.0).abs() < 1e-12);
        assert!(lemma1_check(&a, &DensityMatrix::maximally_mixed(vec![2])).is_err());
    }

    #[test]
    fn lemma1_fuzz() {
        let mut rng = rng_for(52, 0);
        let mut worst = f64::MAX;
        for k in 0..500 {
            let dims = if k % 2 == 0 { vec![2, 2] } else { vec![4, 4] };
            let rank = 1 + k % 4;
            let r = lemma1_check(&random_density(&dims, rank, &mut rng), &random_density(&dims, 4, &mut rng)).unwrap();
            worst = worst.min(r.slack);
        }
        assert!(worst >= -HOLDS_TOL, "{worst}");
    }

    #[test]
    fn purify_examples() {
        let psi = BellState::PsiMinus.state();
        let p = purify(&psi.projector()).unwrap();
        assert_eq!(p.dims(), &[2, 2, 1]);
        let q = PureState::new(vec![2, 2], p.amplitudes().clone()).unwrap();
        assert!(q.equal_up_to_phase(&psi));

        let half = DensityMatrix::maximally_mixed(vec![2]);
        let p = purify(&half).unwrap();
        let q = PureState::new(vec![2, 2], p.amplitudes().clone()).unwrap();
        assert!((measures::concurrence_pure(&q).unwrap() - 1.0).abs() < 1e-12);

        let w = NamedState::werner(BellState::PsiPlus, 0.6).unwrap().density().unwrap();
        let p = purify(&w).unwrap();
        assert_eq!(p.dims(), &[2, 2, 4]);
        let back = partial_trace(&p.projector(), &[0, 1]).unwrap();
        let diff = back.matrix() - w.matrix();
        assert!(diff.iter().all(|z| z.norm() < 1e-9));
    }

    #[test]
    fn td_examples() {
        let zero = PureState::basis(&[0, 0]).unwrap().projector();
        let r = td_inequality(&zero, &pauli_x(), &identity(2)).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-12 && (r.rhs - 1.0).abs() < 1e-12 && r.holds);

        let w = NamedState::werner(BellState::PsiPlus, 0.9).unwrap().density().unwrap();
        let r = td_inequality(&w, &pauli_x(), &pauli_x()).unwrap();
        assert!(!r.holds);
        assert!((r.lhs - 0.9).abs() < 1e-12);
        assert!((r.rhs - (1.0 - 0.81f64).sqrt()).abs() < 1e-12);

        assert!(td_inequality(&w, &(pauli_x() * real(2.0)), &pauli_x()).is_err());
    }

    #[test]
    fn td_purification_matches_overlap_formula() {
        let mut rng = rng_for(53, 0);
        for _ in 0..20 {
            let rho = random_density(&[2, 2], 3, &mut rng);
            let (u, v) = (haar_unitary(2, &mut rng), haar_unitary(2, &mut rng));
            let r = td_inequality(&rho, &u, &v).unwrap();
            let ua = tensor(&u, &identity(2));
            let vb = tensor(&identity(2), &v);
            let overlap = (vb.adjoint() * &ua * rho.matrix()).trace().norm_sqr();
            assert!((r.rhs - (1.0 - overlap).max(0.0).sqrt()).abs() < 1e-10);
        }
    }

    #[test]
    fn td_holds_on_separable_states() {
        let mut rng = rng_for(54, 0);
        for _ in 0..500 {
            let rho = random_separable(&mut rng);
            let r = td_inequality(&rho, &haar_unitary(2, &mut rng), &haar_unitary(2, &mut rng)).unwrap();
            assert!(r.slack >= -1e-8, "{r:?}");
        }
    }

    #[test]
    fn werner_gap_sign() {
        let cfg = OptimizerConfig { restarts: 16, seed: 3, ..Default::default() };
        assert!(werner_max_gap(0.5, &cfg).unwrap() <= HOLDS_TOL);
        assert!(werner_max_gap(0.9, &cfg).unwrap() > 0.1);
    }

    #[test]
    fn sa_examples() {
        let s = SAState::two_qubit(0.5, c(0.0, 0.0)).unwrap();
        let o = sa_pnp2_optimum(&s).unwrap();
        assert!(o.max_t.abs() < 1e-12 && o.concurrence.abs() < 1e-12 && (o.p_pnp2 - 0.5).abs() < 1e-12);

        let s = SAState::two_qubit(0.5, c(0.5, 0.0)).unwrap();
        let o = sa_pnp2_optimum(&s).unwrap();
        assert!((o.max_t - 1.0).abs() < 1e-12 && (o.concurrence - 1.0).abs() < 1e-12);
        assert!((o.p_pnp2 - 1.0).abs() < 1e-12);

        let s = SAState::two_qubit(0.5, c(0.3, 0.0)).unwrap();
        let o = sa_pnp2_optimum(&s).unwrap();
        assert!((o.max_t - 0.6).abs() < 1e-12 && (o.concurrence - 0.6).abs() < 1e-12);
    }

    #[test]
    fn sa_identity_on_random_states() {
        let mut rng = rng_for(55, 0);
        for _ in 0..100 {
            let rho00: f64 = rand::Rng::gen_range(&mut rng, 0.0..1.0);
            let bound = (rho00 * (1.0 - rho00)).sqrt();
            let mag = rand::Rng::gen_range(&mut rng, 0.0..=bound);
            let phase = rand::Rng::gen_range(&mut rng, 0.0..std::f64::consts::TAU);
            let s = SAState::two_qubit(rho00, Complex64::from_polar(mag, phase)).unwrap();
            let o = sa_pnp2_optimum(&s).unwrap();
            assert!((o.max_t - o.concurrence).abs() < 1e-12, "{o:?}");
        }
    }

    #[test]
    fn sa_psd_boundary() {
        let rho00: f64 = 0.3;
        let edge = (rho00 * (1.0 - rho00)).sqrt();
        assert!(SAState::two_qubit(rho00, c(edge, 0.0)).is_ok());
        let err = SAState::two_qubit(rho00, c(edge + 1e-6, 0.0)).unwrap_err();
        assert!(matches!(err, Error::Validation { ref field, .. } if field == "rho01"), "{err:?}");
    }

    #[test]
    fn conditioned_examples() {
        let z = Tactic::new(pauli_z(), pauli_z(), "z").unwrap();
        let sa = SAState::two_qubit(0.5, c(0.3, 0.0)).unwrap().density().unwrap();
        let r = conditioned_game_check(ConditionedVariant::Pnp2, &sa, &z).unwrap();
        assert!((r.objective - 0.8).abs() < 1e-12);

        let phi = BellState::PhiPlus.state();
        let t = tactics::orthogonal_schmidt_flip(&phi).unwrap();
        let r = conditioned_game_check(ConditionedVariant::Pnp1, &phi.projector(), &t).unwrap();
        assert!((r.objective - 1.0).abs() < 1e-12);

        let sep = random_separable(&mut rng_for(56, 0));
        let id = Tactic::identity(2).unwrap();
        let r = conditioned_game_check(ConditionedVariant::Bd2, &sep, &id).unwrap();
        assert!((r.objective - 0.5).abs() < 1e-12 && r.separable);
    }

    #[test]
    fn conditioned_constraint_violation() {
        let w = NamedState::werner(BellState::PsiPlus, 0.6).unwrap().density().unwrap();
        let err = conditioned_game_check(ConditionedVariant::Pnp1, &w, &Tactic::flip(1.0)).unwrap_err();
        assert!(matches!(err, Error::Constraint { .. }));
    }

    #[test]
    fn conditioned_separable_limits() {
        let mut rng = rng_for(57, 0);
        let id = Tactic::identity(2).unwrap();
        for _ in 0..20 {
            let sep = random_separable(&mut rng);
            for v in [ConditionedVariant::Pnp2, ConditionedVariant::Bd2] {
                let r = conditioned_game_check(v, &sep, &id).unwrap();
                assert!(r.objective <= v.classical_limit() + 1e-12);
            }
        }
        // perfect record on a product state
        let zero = PureState::basis(&[0, 0]).unwrap().projector();
        let flips = Tactic::new(pauli_x(), pauli_x(), "xx").unwrap();
        let r = conditioned_game_check(ConditionedVariant::Pnp1, &zero, &flips).unwrap();
        assert!((r.objective - 0.75).abs() < 1e-12);
        let r = conditioned_game_check(ConditionedVariant::Bd1, &zero, &flips).unwrap();
        assert!(r.objective <= 0.5 + 1e-12);
    }
}
