//! Multi-start simplex search over local unitaries.
//!
//! Qubit unitaries use the `e^{iφ}(a₀𝟙 + i a₁X + i a₂Y + i a₃Z)` form with the
//! axis on the unit 3-sphere written in hyperspherical angles, so each side
//! costs four unconstrained reals. Ququart unitaries (a qubit plus a local
//! ancilla qubit) are `exp(iH)` with `H` built from sixteen reals.
//!
//! Restart `k` draws its starting point from the stream `(seed, k)`, so the
//! result does not depend on how restarts are scheduled across threads.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::Write;

use crate::error::{Error, Result};
use crate::games::{self, GameSpec, Tactic};
use crate::measures;
use crate::nelder_mead::NelderMead;
use crate::qcore::{
    c, herm_eig, identity, pauli_x, pauli_y, pauli_z, real, BellState, ComplexMatrix, ComplexVector,
    DensityMatrix, PureState,
};
use crate::random::rng_for;
use crate::states::NamedState;

/// Phase and unit axis of a qubit unitary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitaryParams {
    pub phase: f64,
    pub axis: [f64; 4],
}

impl UnitaryParams {
    /// From `(φ, θ₁, θ₂, θ₃)` with the axis in hyperspherical coordinates.
    pub fn from_angles(x: &[f64]) -> Self {
        let (s1, c1) = x[1].sin_cos();
        let (s2, c2) = x[2].sin_cos();
        let (s3, c3) = x[3].sin_cos();
        UnitaryParams {
            phase: x[0],
            axis: [c1, s1 * c2, s1 * s2 * c3, s1 * s2 * s3],
        }
    }

    pub fn axis_norm(&self) -> f64 {
        self.axis.iter().map(|a| a * a).sum::<f64>().sqrt()
    }
}

/// `e^{iφ}(a₀𝟙 + i a₁X + i a₂Y + i a₃Z)`. A non-normalized axis is rescaled
/// with a warning.
pub fn param_to_unitary(p: &UnitaryParams) -> ComplexMatrix {
    let norm = p.axis_norm();
    let mut a = p.axis;
    if (norm - 1.0).abs() > 1e-12 {
        log::warn!("unitary axis has norm {norm}, normalizing");
        if norm > 0.0 {
            a.iter_mut().for_each(|x| *x /= norm);
        } else {
            a = [1.0, 0.0, 0.0, 0.0];
        }
    }
    let i = c(0.0, 1.0);
    let m = identity(2) * real(a[0]) + (pauli_x() * real(a[1]) + pauli_y() * real(a[2]) + pauli_z() * real(a[3])) * i;
    m * c(p.phase.cos(), p.phase.sin())
}

/// Qubit unitary from four angles.
pub fn angles_to_unitary(x: &[f64]) -> ComplexMatrix {
    param_to_unitary(&UnitaryParams::from_angles(x))
}

/// Angles whose axis is uniform on the 3-sphere and phase uniform on the circle.
pub fn random_angles(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let g: Vec<f64> = (0..4).map(|_| StandardNormal.sample(rng)).collect();
    let n = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    let a: Vec<f64> = g.iter().map(|v| v / n).collect();
    let t1 = a[0].clamp(-1.0, 1.0).acos();
    let t2 = (a[2] * a[2] + a[3] * a[3]).sqrt().atan2(a[1]);
    let t3 = a[3].atan2(a[2]);
    vec![rng.gen_range(0.0..2.0 * PI), t1, t2, t3]
}

/// Hermitian `n × n` matrix from `n²` reals: the diagonal, then real and
/// imaginary parts of the strict upper triangle row by row.
pub fn hermitian_from_reals(x: &[f64], n: usize) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(n, n);
    let mut k = n;
    for i in 0..n {
        h[(i, i)] = real(x[i]);
        for j in i + 1..n {
            let z = c(x[k], x[k + 1]);
            k += 2;
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}

/// `exp(iH)` for the Hermitian generator built from `n²` reals.
pub fn generator_to_unitary(x: &[f64], n: usize) -> ComplexMatrix {
    let h = hermitian_from_reals(x, n);
    let (vals, vecs) = herm_eig(&h).expect("generator is Hermitian by construction");
    let phases = ComplexVector::from_iterator(n, vals.iter().map(|&v| c(v.cos(), v.sin())));
    &vecs * ComplexMatrix::from_diagonal(&phases) * vecs.adjoint()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub seed: u64,
    /// Local dimension: 2, or 4 for a qubit with a `|0⟩` ancilla on each side.
    pub dimension: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 32,
            max_iterations: 2000,
            tolerance: 1e-9,
            seed: 0,
            dimension: 2,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::validation("restarts", "must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::validation("max_iterations", "must be positive"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::validation("tolerance", "must be positive"));
        }
        if !matches!(self.dimension, 2 | 4) {
            return Err(Error::validation("dimension", "must be 2 or 4"));
        }
        Ok(())
    }

    fn simplex(&self) -> NelderMead {
        NelderMead {
            max_iterations: self.max_iterations,
            tolerance: self.tolerance,
            ..Default::default()
        }
    }
}

/// Outcome of a generic multi-start maximization.
#[derive(Debug, Clone)]
pub struct MultiStart {
    pub best_x: Vec<f64>,
    pub best_value: f64,
    pub per_restart: Vec<f64>,
    pub evaluations: usize,
}

/// Maximizes `objective` from `cfg.restarts` starting points drawn by `start`.
pub fn maximize<S, F>(n_params: usize, cfg: &OptimizerConfig, start: S, objective: F) -> MultiStart
where
    S: Fn(&mut ChaCha8Rng) -> Vec<f64> + Sync,
    F: Fn(&[f64]) -> f64 + Sync,
{
    let nm = cfg.simplex();
    let runs: Vec<_> = (0..cfg.restarts)
        .into_par_iter()
        .map(|k| {
            let mut rng = rng_for(cfg.seed, k as u64);
            let x0 = start(&mut rng);
            debug_assert_eq!(x0.len(), n_params);
            nm.minimize(|x| -objective(x), &x0)
        })
        .collect();
    let per_restart: Vec<f64> = runs.iter().map(|m| -m.value).collect();
    let evaluations = runs.iter().map(|m| m.evaluations).sum();
    let best = runs
        .iter()
        .enumerate()
        .fold(0, |b, (k, m)| if m.value < runs[b].value { k } else { b });
    MultiStart {
        best_x: runs[best].x.clone(),
        best_value: per_restart[best],
        per_restart,
        evaluations,
    }
}

#[derive(Debug, Clone)]
pub struct OptimizationResult {
    pub best_value: f64,
    pub best_tactic: Tactic,
    pub per_restart: Vec<f64>,
    pub evaluations: usize,
    pub best_params: Vec<f64>,
}

/// Number of reals describing one local unitary.
pub fn params_per_side(dimension: usize) -> usize {
    if dimension == 4 {
        16
    } else {
        4
    }
}

/// Tactic for a flat parameter vector (A's parameters, then B's).
pub fn tactic_from_params(x: &[f64], dimension: usize) -> Tactic {
    let n = params_per_side(dimension);
    let side = |p: &[f64]| {
        if dimension == 4 {
            generator_to_unitary(p, 4)
        } else {
            angles_to_unitary(p)
        }
    };
    Tactic {
        u_a: side(&x[..n]),
        v_b: side(&x[n..2 * n]),
        label: "optimized".into(),
    }
}

fn random_tactic_params(rng: &mut ChaCha8Rng, dimension: usize) -> Vec<f64> {
    if dimension == 4 {
        (0..32).map(|_| StandardNormal.sample(rng)).collect()
    } else {
        let mut x = random_angles(rng);
        x.extend(random_angles(rng));
        x
    }
}

/// `ρ_AB ⊗ |00⟩⟨00|_{A'B'}` reordered as `(A A')(B B')`.
pub fn embed_ancilla(rho: &DensityMatrix) -> Result<DensityMatrix> {
    if !rho.is_two_qubit() {
        return Err(Error::Dimension(format!("ancilla embedding needs a two-qubit state, got {:?}", rho.dims())));
    }
    let zero = PureState::basis(&[0, 0])?.projector();
    let grouped = rho.tensor(&zero).permute(&[0, 2, 1, 3])?;
    DensityMatrix::new(vec![4, 4], grouped.matrix().clone())
}

fn finish(found: MultiStart, dimension: usize) -> Result<OptimizationResult> {
    let best_tactic = tactic_from_params(&found.best_x, dimension);
    let best_tactic = Tactic::new(best_tactic.u_a, best_tactic.v_b, "optimized")?;
    Ok(OptimizationResult {
        best_value: found.best_value,
        best_tactic,
        per_restart: found.per_restart,
        evaluations: found.evaluations,
        best_params: found.best_x,
    })
}

/// Maximizes the win probability over local unitaries. With `dimension = 4`
/// each party also holds a fresh `|0⟩` ancilla and optimizes over `U(4)`.
pub fn optimize(rho: &DensityMatrix, game: &GameSpec, cfg: &OptimizerConfig) -> Result<OptimizationResult> {
    cfg.validate()?;
    if !rho.is_two_qubit() {
        return Err(Error::Dimension(format!("optimize expects a two-qubit resource, got {:?}", rho.dims())));
    }
    let resource = if cfg.dimension == 4 {
        embed_ancilla(rho)?
    } else {
        rho.clone()
    };
    let dimension = cfg.dimension;
    let objective = |x: &[f64]| {
        let t = tactic_from_params(x, dimension);
        games::win_probability(&resource, &t, game).unwrap_or(f64::NEG_INFINITY)
    };
    let found = maximize(
        2 * params_per_side(dimension),
        cfg,
        |rng| random_tactic_params(rng, dimension),
        objective,
    );
    finish(found, dimension)
}

/// `(cos(θ/2), e^{iφ} sin(θ/2))`.
fn bloch_state(theta: f64, phi: f64) -> ComplexVector {
    let (s, co) = (theta / 2.0).sin_cos();
    ComplexVector::from_column_slice(&[real(co), c(phi.cos() * s, phi.sin() * s)])
}

/// Product resource from `(θ_A, φ_A, θ_B, φ_B)`.
pub fn product_resource(x: &[f64]) -> DensityMatrix {
    let v = bloch_state(x[0], x[1]).kronecker(&bloch_state(x[2], x[3]));
    PureState::normalized(vec![2, 2], v).expect("unit product vector").projector()
}

/// Joint maximization over pure product resources and qubit tactics
/// (four resource parameters followed by eight tactic parameters).
pub fn optimize_separable(game: &GameSpec, cfg: &OptimizerConfig) -> Result<OptimizationResult> {
    cfg.validate()?;
    let objective = |x: &[f64]| {
        let rho = product_resource(&x[..4]);
        let t = tactic_from_params(&x[4..], 2);
        games::win_probability(&rho, &t, game).unwrap_or(f64::NEG_INFINITY)
    };
    let start = |rng: &mut ChaCha8Rng| {
        let mut x: Vec<f64> = vec![
            rng.gen::<f64>().mul_add(2.0, -1.0).acos(),
            rng.gen_range(0.0..2.0 * PI),
            rng.gen::<f64>().mul_add(2.0, -1.0).acos(),
            rng.gen_range(0.0..2.0 * PI),
        ];
        x.extend(random_tactic_params(rng, 2));
        x
    };
    let found = maximize(12, cfg, start, objective);
    let best_tactic = tactic_from_params(&found.best_x[4..], 2);
    Ok(OptimizationResult {
        best_value: found.best_value,
        best_tactic: Tactic::new(best_tactic.u_a, best_tactic.v_b, "optimized")?,
        per_restart: found.per_restart,
        evaluations: found.evaluations,
        best_params: found.best_x,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Bare,
    WithAncilla,
}

/// One row of a Werner sweep. Both bounds are those of the bare two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub a: f64,
    pub p_opt: f64,
    pub record_bound: f64,
    pub concurrence_bound: f64,
}

/// Grid `0, step, …, 1`; `step` must divide the unit interval.
pub fn unit_grid(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::validation("step", "must lie in (0, 1]"));
    }
    let n = (1.0 / step).round();
    if (n * step - 1.0).abs() > 1e-9 {
        return Err(Error::validation("step", format!("{step} does not divide [0, 1]")));
    }
    let n = n as usize;
    Ok((0..=n).map(|i| i as f64 / n as f64).collect())
}

/// Optimized PNP win probability (equal priors) for Werner states `ψ⁺` on the grid.
pub fn werner_sweep(kind: SweepKind, step: f64, cfg: &OptimizerConfig) -> Result<Vec<SweepRow>> {
    let cfg = OptimizerConfig {
        dimension: match kind {
            SweepKind::Bare => 2,
            SweepKind::WithAncilla => 4,
        },
        ..cfg.clone()
    };
    let game = GameSpec::pnp(0.5)?;
    unit_grid(step)?
        .into_iter()
        .map(|a| {
            let rho = NamedState::werner(BellState::PsiPlus, a)?.density()?;
            let best = optimize(&rho, &game, &cfg)?;
            Ok(SweepRow {
                a,
                p_opt: best.best_value,
                record_bound: measures::record_bound(&rho),
                concurrence_bound: 0.75 + 0.25 * measures::concurrence_mixed(&rho)?,
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::unitary_deviation;
    use crate::random::haar_state;

    fn quick(restarts: usize) -> OptimizerConfig {
        OptimizerConfig {
            restarts,
            seed: 5,
            ..Default::default()
        }
    }

    fn max_abs(m: &ComplexMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn param_examples() {
        let id = param_to_unitary(&UnitaryParams { phase: 0.0, axis: [1.0, 0.0, 0.0, 0.0] });
        assert!(max_abs(&(id - identity(2))) < 1e-15);
        let ix = param_to_unitary(&UnitaryParams { phase: 0.0, axis: [0.0, 1.0, 0.0, 0.0] });
        assert!(max_abs(&(ix - pauli_x() * c(0.0, 1.0))) < 1e-15);
        let rescaled = param_to_unitary(&UnitaryParams { phase: 0.3, axis: [2.0, 0.0, 0.0, 0.0] });
        assert!(unitary_deviation(&rescaled) < 1e-12);
    }

    #[test]
    fn random_params_give_unitaries() {
        let mut rng = rng_for(31, 0);
        for _ in 0..100 {
            let x = random_angles(&mut rng);
            let p = UnitaryParams::from_angles(&x);
            assert!((p.axis_norm() - 1.0).abs() < 1e-12);
            assert!(unitary_deviation(&param_to_unitary(&p)) < 1e-12);
            let g: Vec<f64> = (0..16).map(|_| StandardNormal.sample(&mut rng)).collect();
            assert!(unitary_deviation(&generator_to_unitary(&g, 4)) < 1e-12);
        }
    }

    #[test]
    fn random_angles_round_trip_the_axis() {
        // hyperspherical inverse reproduces a uniformly drawn axis
        let mut rng = rng_for(32, 0);
        let x = random_angles(&mut rng);
        let mut again = rng_for(32, 0);
        let g: Vec<f64> = (0..4).map(|_| StandardNormal.sample(&mut again)).collect();
        let n = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        let axis = UnitaryParams::from_angles(&x).axis;
        for k in 0..4 {
            assert!((axis[k] - g[k] / n).abs() < 1e-12);
        }
    }

    #[test]
    fn phi_plus_pnp_reaches_one() {
        let r = optimize(&BellState::PhiPlus.projector(), &GameSpec::pnp(0.5).unwrap(), &quick(8)).unwrap();
        assert!((r.best_value - 1.0).abs() < 1e-6, "{}", r.best_value);
        let max = r.per_restart.iter().copied().fold(f64::MIN, f64::max);
        assert_eq!(max, r.best_value);
    }

    #[test]
    fn schmidt_bd_reaches_concurrence_bound() {
        let rho = NamedState::schmidt(0.2).unwrap().density().unwrap();
        let r = optimize(&rho, &GameSpec::bd(), &quick(8)).unwrap();
        assert!((r.best_value - 0.9).abs() < 1e-4, "{}", r.best_value);
    }

    #[test]
    fn werner_pnp_reaches_record_bound() {
        let rho = NamedState::werner(BellState::PsiPlus, 0.6).unwrap().density().unwrap();
        let r = optimize(&rho, &GameSpec::pnp(0.5).unwrap(), &quick(8)).unwrap();
        assert!((r.best_value - 0.8).abs() < 1e-4, "{}", r.best_value);
        assert!(r.best_value <= 0.8 + 1e-6);
    }

    #[test]
    fn deterministic_given_seed() {
        let rho = NamedState::werner(BellState::PsiPlus, 0.4).unwrap().density().unwrap();
        let g = GameSpec::pnp(0.5).unwrap();
        let a = optimize(&rho, &g, &quick(3)).unwrap();
        let b = optimize(&rho, &g, &quick(3)).unwrap();
        assert_eq!(a.best_value.to_bits(), b.best_value.to_bits());
        assert_eq!(a.per_restart, b.per_restart);
        assert_eq!(a.best_params, b.best_params);
    }

    #[test]
    fn more_restarts_never_hurt() {
        let psi = haar_state(&[2, 2], &mut rng_for(33, 0)).projector();
        let g = GameSpec::bd();
        let mut prev = f64::MIN;
        for n in [1, 2, 4] {
            let v = optimize(&psi, &g, &quick(n)).unwrap().best_value;
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn embed_ancilla_layout() {
        let rho = BellState::PhiPlus.projector();
        let big = embed_ancilla(&rho).unwrap();
        assert_eq!(big.dims(), &[4, 4]);
        // |00⟩_{AB}|00⟩_{A'B'} sits at index 0 and |11⟩|00⟩ at (A=1,A'=0,B=1,B'=0) = 0b1010
        assert!((big.matrix()[(0, 10)].re - 0.5).abs() < 1e-15);
        assert!((big.matrix()[(10, 10)].re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn config_validation() {
        assert!(OptimizerConfig { restarts: 0, ..Default::default() }.validate().is_err());
        assert!(OptimizerConfig { dimension: 3, ..Default::default() }.validate().is_err());
        assert!(optimize(&DensityMatrix::maximally_mixed(vec![4, 4]), &GameSpec::bd(), &quick(1)).is_err());
    }

    #[test]
    fn grid_validation() {
        assert_eq!(unit_grid(0.25).unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(unit_grid(0.3).is_err());
        assert!(unit_grid(0.0).is_err());
    }

    #[test]
    fn sweep_csv_header() {
        let rows = [SweepRow { a: 0.5, p_opt: 0.75, record_bound: 0.75, concurrence_bound: 0.8125 }];
        let mut buf = Vec::new();
        write_sweep_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "a,p_opt,record_bound,concurrence_bound");
        assert_eq!(text.lines().nth(1).unwrap(), "0.5,0.75,0.75,0.8125");
    }
}
