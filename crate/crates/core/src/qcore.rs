//! Dense complex linear algebra and the two basic state types.
//!
//! Subsystems are ordered big-endian everywhere: in `tensor(a, b)` the first
//! factor is the most significant, and composite indices are read with the
//! first listed subsystem as the leading digit (A before B, system before
//! ancilla).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

/// Tolerance for the Hermitian, PSD and unit-trace checks.
pub const VALIDATION_TOL: f64 = 1e-10;
/// Tolerance for unitarity checks on tactics.
pub const UNITARY_TOL: f64 = 1e-9;
/// Eigenvalues with magnitude below this count as zero.
pub const EIG_ZERO: f64 = 1e-12;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// Kronecker product; `a` is the most significant factor.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn tensor_all(factors: &[&ComplexMatrix]) -> ComplexMatrix {
    factors
        .iter()
        .fold(identity(1), |acc, f| acc.kronecker(*f))
}

/// `|ψ⟩⟨φ|` for column vectors.
pub fn outer(psi: &ComplexVector, phi: &ComplexVector) -> ComplexMatrix {
    psi * phi.adjoint()
}

pub fn trace(m: &ComplexMatrix) -> C64 {
    m.trace()
}

/// Largest entrywise modulus of `m − m†`.
pub fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise modulus of `U†U − 𝟙`.
pub fn unitary_deviation(u: &ComplexMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let n = u.nrows();
    (u.adjoint() * u - identity(n))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

pub fn check_unitary(u: &ComplexMatrix, tol: f64) -> Result<()> {
    let deviation = unitary_deviation(u);
    if deviation > tol {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(())
}

fn check_finite(m: &ComplexMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::validation("matrix", "non-finite entry"))
    }
}

/// Eigen-decomposition of a Hermitian matrix.
///
/// The input is symmetrized as `(m + m†)/2` first. Eigenvalues are returned
/// in ascending order with the eigenvector columns permuted to match.
pub fn herm_eig(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let deviation = hermitian_deviation(m);
    if deviation > VALIDATION_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let sym = (m + m.adjoint()) * real(0.5);
    let eig = sym.symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, k| eig.eigenvectors[(r, order[k])]);
    Ok((values, vectors))
}

/// Eigenvalues only, ascending.
pub fn herm_eigvals(m: &ComplexMatrix) -> Result<Vec<f64>> {
    herm_eig(m).map(|(v, _)| v)
}

/// Sum of the strictly positive eigenvalues of a Hermitian matrix.
pub fn positive_eig_sum(h: &ComplexMatrix) -> Result<f64> {
    Ok(herm_eigvals(h)?
        .into_iter()
        .filter(|&v| v > EIG_ZERO)
        .sum())
}

/// Anything that can be viewed as a square operator.
pub trait AsOperator {
    fn operator(&self) -> &ComplexMatrix;
}

impl AsOperator for ComplexMatrix {
    fn operator(&self) -> &ComplexMatrix {
        self
    }
}

impl AsOperator for DensityMatrix {
    fn operator(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// `½ Σ|eig(ρ − σ)|`. Works for subnormalized operators as well.
pub fn trace_distance(rho: &impl AsOperator, sigma: &impl AsOperator) -> Result<f64> {
    let (a, b) = (rho.operator(), sigma.operator());
    if a.shape() != b.shape() {
        return Err(Error::Dimension(format!(
            "trace distance between {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let vals = herm_eigvals(&(a - b))?;
    Ok(0.5 * vals.iter().map(|v| v.abs()).sum::<f64>())
}

/// Trace distance between two pure states: `√(1 − |⟨φ|ψ⟩|²)`.
pub fn pure_trace_distance(phi: &PureState, psi: &PureState) -> Result<f64> {
    let overlap = phi.inner(psi)?.norm_sqr();
    Ok((1.0 - overlap).max(0.0).sqrt())
}

fn index_digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; dims.len()];
    for (slot, &d) in digits.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    digits
}

fn digits_index(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

/// Partial trace of an operator on a multipartite space, keeping the listed
/// subsystems (in ascending order).
pub fn partial_trace_op(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if m.nrows() != total || m.ncols() != total {
        return Err(Error::Dimension(format!(
            "operator is {}x{} but subsystem dims {:?} give {}",
            m.nrows(),
            m.ncols(),
            dims,
            total
        )));
    }
    if keep.is_empty() {
        return Err(Error::Dimension("partial trace must keep at least one subsystem".into()));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&bad) = kept.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::Dimension(format!(
            "subsystem index {bad} out of range for {} subsystems",
            dims.len()
        )));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !kept.contains(i)).collect();
    let kept_dims: Vec<usize> = kept.iter().map(|&k| dims[k]).collect();
    let out_dim: usize = kept_dims.iter().product();
    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    let all_digits: Vec<Vec<usize>> = (0..total).map(|i| index_digits(i, dims)).collect();
    for r in 0..total {
        let dr = &all_digits[r];
        let kr = digits_index(&kept.iter().map(|&k| dr[k]).collect::<Vec<_>>(), &kept_dims);
        for col in 0..total {
            let dc = &all_digits[col];
            if traced.iter().all(|&t| dr[t] == dc[t]) {
                let kc = digits_index(&kept.iter().map(|&k| dc[k]).collect::<Vec<_>>(), &kept_dims);
                out[(kr, kc)] += m[(r, col)];
            }
        }
    }
    Ok(out)
}

pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let m = partial_trace_op(&rho.matrix, &rho.dims, keep)?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    DensityMatrix::new(kept.iter().map(|&k| rho.dims[k]).collect(), m)
}

/// Normalized complex vector with subsystem dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amplitudes: ComplexVector,
}

impl PureState {
    pub fn new(dims: Vec<usize>, amplitudes: ComplexVector) -> Result<Self> {
        let total: usize = dims.iter().product();
        if total != amplitudes.len() {
            return Err(Error::Dimension(format!(
                "dims {:?} need {} amplitudes, got {}",
                dims,
                total,
                amplitudes.len()
            )));
        }
        if !amplitudes.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::validation("amplitudes", "non-finite entry"));
        }
        let norm2 = amplitudes.norm_squared();
        if (norm2 - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::validation(
                "amplitudes",
                format!("squared norm {norm2} differs from 1"),
            ));
        }
        Ok(PureState { dims, amplitudes })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(dims: Vec<usize>, amplitudes: ComplexVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::validation("amplitudes", "zero or non-finite norm"));
        }
        Self::new(dims, amplitudes / real(norm))
    }

    pub fn two_qubit(amplitudes: [C64; 4]) -> Result<Self> {
        Self::normalized(vec![2, 2], ComplexVector::from_column_slice(&amplitudes))
    }

    /// Computational basis state `|b₀b₁…⟩` on qubits.
    pub fn basis(bits: &[usize]) -> Result<Self> {
        let dims = vec![2; bits.len()];
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::validation("bits", "entries must be 0 or 1"));
        }
        let idx = digits_index(bits, &dims);
        let mut v = ComplexVector::zeros(1 << bits.len());
        v[idx] = ONE;
        Self::new(dims, v)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    pub fn is_two_qubit(&self) -> bool {
        self.dims == [2, 2]
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension("inner product of different dimensions".into()));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `|⟨self|other⟩| = 1` within 1e-8.
    pub fn equal_up_to_phase(&self, other: &PureState) -> bool {
        self.inner(other)
            .map(|z| (z.norm() - 1.0).abs() < 1e-8)
            .unwrap_or(false)
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix {
            dims: self.dims.clone(),
            matrix: outer(&self.amplitudes, &self.amplitudes),
        }
    }

    pub fn apply(&self, u: &ComplexMatrix) -> Result<PureState> {
        if u.ncols() != self.dim() || u.nrows() != self.dim() {
            return Err(Error::Dimension("operator does not match state".into()));
        }
        PureState::new(self.dims.clone(), u * &self.amplitudes)
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        PureState {
            dims,
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
        }
    }

    /// Amplitudes of a bipartite state arranged as a `d_A × d_B` matrix.
    pub fn coefficient_matrix(&self) -> Result<ComplexMatrix> {
        if self.dims.len() != 2 {
            return Err(Error::Dimension("expected a bipartite state".into()));
        }
        let (da, db) = (self.dims[0], self.dims[1]);
        Ok(ComplexMatrix::from_fn(da, db, |i, j| self.amplitudes[i * db + j]))
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        let total: usize = dims.iter().product();
        if matrix.nrows() != total || matrix.ncols() != total {
            return Err(Error::Dimension(format!(
                "dims {:?} need a {total}x{total} matrix, got {}x{}",
                dims,
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        check_finite(&matrix)?;
        let deviation = hermitian_deviation(&matrix);
        if deviation > VALIDATION_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > VALIDATION_TOL || tr.im.abs() > VALIDATION_TOL {
            return Err(Error::validation("matrix", format!("trace {tr} differs from 1")));
        }
        let matrix = (&matrix + matrix.adjoint()) * real(0.5);
        let min_eig = herm_eigvals(&matrix)?[0];
        if min_eig < -VALIDATION_TOL {
            return Err(Error::validation(
                "matrix",
                format!("negative eigenvalue {min_eig:e}"),
            ));
        }
        Ok(DensityMatrix { dims, matrix })
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let n: usize = dims.iter().product();
        DensityMatrix {
            dims,
            matrix: identity(n) * real(1.0 / n as f64),
        }
    }

    /// Convex combination `Σ wᵢ ρᵢ`.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::validation("mixture", "empty"))?;
        let dims = first.1.dims.clone();
        let mut m = ComplexMatrix::zeros(first.1.dim(), first.1.dim());
        for (w, rho) in parts {
            if rho.dims != dims {
                return Err(Error::Dimension("mixture of different dimensions".into()));
            }
            if *w < 0.0 {
                return Err(Error::validation("weight", "negative mixture weight"));
            }
            m += &rho.matrix * real(*w);
        }
        DensityMatrix::new(dims, m)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn is_two_qubit(&self) -> bool {
        self.dims == [2, 2]
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        herm_eigvals(&self.matrix).expect("density matrix is Hermitian")
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// The state vector when `ρ` is rank one (purity within 1e-10 of 1).
    pub fn as_pure(&self) -> Option<PureState> {
        if (self.purity() - 1.0).abs() > VALIDATION_TOL {
            return None;
        }
        let (vals, vecs) = herm_eig(&self.matrix).ok()?;
        let top = vals.len() - 1;
        PureState::normalized(self.dims.clone(), vecs.column(top).into_owned()).ok()
    }

    /// `Tr(ρ A)`.
    pub fn expectation(&self, op: &ComplexMatrix) -> C64 {
        (&self.matrix * op).trace()
    }

    /// `U ρ U†` for a unitary of matching size.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::Dimension("unitary does not match state".into()));
        }
        Ok(DensityMatrix {
            dims: self.dims.clone(),
            matrix: u * &self.matrix * u.adjoint(),
        })
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityMatrix {
            dims,
            matrix: self.matrix.kronecker(&other.matrix),
        }
    }

    /// Reorders subsystems: new subsystem `i` is old subsystem `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<DensityMatrix> {
        let n = self.dims.len();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::validation("perm", "not a permutation of the subsystems"));
        }
        let new_dims: Vec<usize> = perm.iter().map(|&p| self.dims[p]).collect();
        let total = self.dim();
        let map: Vec<usize> = (0..total)
            .map(|new_idx| {
                let nd = index_digits(new_idx, &new_dims);
                let mut old = vec![0; n];
                for (i, &p) in perm.iter().enumerate() {
                    old[p] = nd[i];
                }
                digits_index(&old, &self.dims)
            })
            .collect();
        let matrix = ComplexMatrix::from_fn(total, total, |r, c| self.matrix[(map[r], map[c])]);
        Ok(DensityMatrix {
            dims: new_dims,
            matrix,
        })
    }
}

/// The four Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellState {
    #[serde(rename = "phi+")]
    PhiPlus,
    #[serde(rename = "phi-")]
    PhiMinus,
    #[serde(rename = "psi+")]
    PsiPlus,
    #[serde(rename = "psi-")]
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];

    pub fn amplitudes(self) -> [C64; 4] {
        let h = real(FRAC_1_SQRT_2);
        match self {
            BellState::PhiPlus => [h, ZERO, ZERO, h],
            BellState::PhiMinus => [h, ZERO, ZERO, -h],
            BellState::PsiPlus => [ZERO, h, h, ZERO],
            BellState::PsiMinus => [ZERO, h, -h, ZERO],
        }
    }

    pub fn state(self) -> PureState {
        PureState::two_qubit(self.amplitudes()).expect("Bell states are normalized")
    }

    pub fn projector(self) -> DensityMatrix {
        self.state().projector()
    }

    /// Eigenvalue of `X⊗X` on this Bell state.
    pub fn xx_sign(self) -> f64 {
        match self {
            BellState::PhiPlus | BellState::PsiPlus => 1.0,
            BellState::PhiMinus | BellState::PsiMinus => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BellState::PhiPlus => "phi+",
            BellState::PhiMinus => "phi-",
            BellState::PsiPlus => "psi+",
            BellState::PsiMinus => "psi-",
        }
    }
}

impl fmt::Display for BellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BellState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "phi+" | "phiplus" | "phi_plus" => Ok(BellState::PhiPlus),
            "phi-" | "phiminus" | "phi_minus" => Ok(BellState::PhiMinus),
            "psi+" | "psiplus" | "psi_plus" => Ok(BellState::PsiPlus),
            "psi-" | "psiminus" | "psi_minus" | "singlet" => Ok(BellState::PsiMinus),
            other => Err(Error::validation("bell", format!("unknown Bell state `{other}`"))),
        }
    }
}

/// Schmidt form of a two-qubit pure state.
#[derive(Debug, Clone)]
pub struct Schmidt {
    /// `λ₀ ≥ λ₁`, summing to one.
    pub coefficients: [f64; 2],
    /// Columns are the local Schmidt vectors `|a_k⟩`.
    pub basis_a: ComplexMatrix,
    /// Columns are the local Schmidt vectors `|b_k⟩`.
    pub basis_b: ComplexMatrix,
}

impl Schmidt {
    /// `Σ √λ_k |a_k⟩|b_k⟩`.
    pub fn reconstruct(&self) -> ComplexVector {
        let mut v = ComplexVector::zeros(4);
        for k in 0..2 {
            let a = self.basis_a.column(k).into_owned();
            let b = self.basis_b.column(k).into_owned();
            v += a.kronecker(&b) * real(self.coefficients[k].sqrt());
        }
        v
    }
}

/// Schmidt decomposition of a two-qubit pure state.
pub fn schmidt(psi: &PureState) -> Result<Schmidt> {
    if !psi.is_two_qubit() {
        return Err(Error::Dimension(format!(
            "Schmidt decomposition needs a 2x2 state, got dims {:?}",
            psi.dims()
        )));
    }
    let m = psi.coefficient_matrix()?;
    let rho_a = &m * m.adjoint();
    let (vals, vecs) = herm_eig(&rho_a)?;
    // descending
    let lam = [vals[1].clamp(0.0, 1.0), vals[0].clamp(0.0, 1.0)];
    let a = [vecs.column(1).into_owned(), vecs.column(0).into_owned()];
    let mt = m.transpose();
    let raw0 = &mt * a[0].conjugate();
    let b0 = &raw0 / real(raw0.norm());
    let raw1 = &mt * a[1].conjugate();
    let b1 = if raw1.norm() > 1e-13 {
        let proj = b0.dotc(&raw1);
        let orth = &raw1 - &b0 * proj;
        &orth / real(orth.norm())
    } else {
        ComplexVector::from_column_slice(&[-b0[1].conj(), b0[0].conj()])
    };
    let sum = lam[0] + lam[1];
    Ok(Schmidt {
        coefficients: [lam[0] / sum, lam[1] / sum],
        basis_a: ComplexMatrix::from_columns(&[a[0].clone(), a[1].clone()]),
        basis_b: ComplexMatrix::from_columns(&[b0, b1]),
    })
}
