//! Brute-force reference calculations.
//!
//! Two independent checks on the perturbative formulas live here: exact
//! diagonalization of the field-dressed molecule H_mol − m·B, and exact time
//! evolution of the molecule coupled to the two forward modes in a truncated
//! number-state basis, with the full −μ·E coupling (no rotating-wave
//! approximation). The field operator is assembled from ladder matrices, not
//! from the vertex helpers in [`crate::amplitude`].

use nalgebra::linalg::SymmetricEigen;
use num_complex::Complex64;
use serde::Serialize;

use crate::amplitude::{
    amplitude_second_order_closed, faraday_b_term_angle, perturbed_pipeline_angle, single_molecule_angle,
    RotationMethod, RotationResult,
};
use crate::dynamics::angle_from_occupations;
use crate::error::{Error, Result};
use crate::model::{consts, require_nondegenerate, CMatrix, ExperimentConfig, FieldConfig, MolecularModel, Tolerances, Vec3};
use crate::perturbation::{first_order_corrections, zeeman_matrix};

type CVector = nalgebra::DVector<Complex64>;

// ---------------------------------------------------------------------------
// Basis

/// Product basis |level⟩ ⊗ |n₁⟩ ⊗ |n₂⟩ with occupation cutoffs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockBasis {
    levels: usize,
    n1_max: u64,
    n2_max: u64,
}

impl FockBasis {
    pub fn new(levels: usize, n1_max: u64, n2_max: u64) -> Result<Self> {
        if levels == 0 {
            return Err(Error::Dimension("molecular dimension must be positive".into()));
        }
        Ok(FockBasis { levels, n1_max, n2_max })
    }

    /// Default cutoffs for an n-photon initial state: n₁ ≤ n, n₂ ≤ 2.
    pub fn for_field(model: &MolecularModel, field: &FieldConfig) -> Self {
        FockBasis { levels: model.dim(), n1_max: field.n_photons(), n2_max: 2 }
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn n1_max(&self) -> u64 {
        self.n1_max
    }

    pub fn n2_max(&self) -> u64 {
        self.n2_max
    }

    pub fn dim(&self) -> usize {
        self.levels * (self.n1_max as usize + 1) * (self.n2_max as usize + 1)
    }

    pub fn index(&self, level: usize, n1: u64, n2: u64) -> Option<usize> {
        if level >= self.levels || n1 > self.n1_max || n2 > self.n2_max {
            return None;
        }
        let m1 = self.n1_max as usize + 1;
        let m2 = self.n2_max as usize + 1;
        Some((level * m1 + n1 as usize) * m2 + n2 as usize)
    }

    /// Inverse of [`FockBasis::index`].
    pub fn state(&self, index: usize) -> (usize, u64, u64) {
        let m1 = self.n1_max as usize + 1;
        let m2 = self.n2_max as usize + 1;
        let n2 = index % m2;
        let n1 = (index / m2) % m1;
        let level = index / (m1 * m2);
        (level, n1 as u64, n2 as u64)
    }

    pub fn basis_vector(&self, level: usize, n1: u64, n2: u64) -> Result<CVector> {
        let idx = self
            .index(level, n1, n2)
            .ok_or_else(|| Error::Dimension(format!("state ({level}, {n1}, {n2}) outside the truncated basis")))?;
        let mut v = CVector::zeros(self.dim());
        v[idx] = Complex64::new(1.0, 0.0);
        Ok(v)
    }
}

// ---------------------------------------------------------------------------
// Dense Hermitian algebra

/// Eigenpairs sorted by ascending eigenvalue.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    /// Column i is the eigenvector of `values[i]`.
    pub vectors: CMatrix,
}

#[derive(Debug, Clone)]
pub struct DenseHermitian {
    matrix: CMatrix,
}

impl DenseHermitian {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::Dimension(format!("{}x{} matrix is not square", matrix.nrows(), matrix.ncols())));
        }
        let scale = max_abs(&matrix);
        let dev = max_abs(&(&matrix - matrix.adjoint()));
        if dev > 1e-12 * scale {
            return Err(Error::Dimension(format!("matrix is not Hermitian (deviation {dev:.3e}, scale {scale:.3e})")));
        }
        Ok(DenseHermitian { matrix })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// ⟨ψ|H|ψ⟩.
    pub fn expectation(&self, psi: &CVector) -> f64 {
        psi.dotc(&(&self.matrix * psi)).re
    }

    /// Eigendecomposition of H − shift·I. Eigenvalues stay relative to the
    /// shift.
    pub fn eigen_shifted(&self, shift: f64) -> Result<Eigensystem> {
        let mut shifted = self.matrix.clone();
        for i in 0..shifted.nrows() {
            shifted[(i, i)] -= Complex64::new(shift, 0.0);
        }
        hermitian_eigen(&shifted)
    }

    pub fn eigen(&self) -> Result<Eigensystem> {
        hermitian_eigen(&self.matrix)
    }
}

fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Dense Hermitian eigendecomposition, ascending, with eigenvalues refined by
/// the Rayleigh quotient of the unscaled matrix.
pub fn hermitian_eigen(matrix: &CMatrix) -> Result<Eigensystem> {
    let n = matrix.nrows();
    let scale = max_abs(matrix);
    if scale == 0.0 {
        return Ok(Eigensystem { values: vec![0.0; n], vectors: CMatrix::identity(n, n) });
    }
    // Work on H/scale so that entries are O(1) regardless of units.
    let scaled = matrix.map(|z| z / scale);
    let eig = SymmetricEigen::try_new(scaled, f64::EPSILON, 100_000).ok_or(Error::ConvergenceFailure(n))?;

    let mut order: Vec<usize> = (0..n).collect();
    let key = |i: usize| -> Vec<f64> {
        eig.eigenvectors.column(i).iter().flat_map(|z| [z.re, z.im]).collect()
    };
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .total_cmp(&eig.eigenvalues[j])
            .then_with(|| {
                key(i)
                    .iter()
                    .zip(key(j).iter())
                    .map(|(a, b)| a.total_cmp(b))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
    });

    let mut vectors = CMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        let v = eig.eigenvectors.column(src);
        vectors.set_column(dst, &v);
        values.push(rayleigh_quotient(matrix, v.iter().copied().collect::<Vec<_>>().as_slice()));
    }
    Ok(Eigensystem { values, vectors })
}

/// v†Hv for unit v, organised so that a unit basis vector reproduces the
/// diagonal entry exactly.
fn rayleigh_quotient(h: &CMatrix, v: &[Complex64]) -> f64 {
    let n = v.len();
    let mut diag = 0.0;
    let mut off = 0.0;
    for j in 0..n {
        let wj = v[j].norm_sqr();
        if wj != 0.0 {
            diag += wj * h[(j, j)].re;
        }
        for k in (j + 1)..n {
            let term = v[j].conj() * h[(j, k)] * v[k];
            off += 2.0 * term.re;
        }
    }
    diag + off
}

// ---------------------------------------------------------------------------
// Molecule in a static field

/// Exact eigenpairs of H_mol − m·B. Eigenvectors are columns in the bare
/// energy basis.
pub fn exact_diagonalize_molecule(model: &MolecularModel, b: &Vec3) -> Result<Eigensystem> {
    let mut h = zeeman_matrix(model, b);
    for (i, e) in model.energies().into_iter().enumerate() {
        h[(i, i)] += Complex64::new(e, 0.0);
    }
    hermitian_eigen(&h)
}

// ---------------------------------------------------------------------------
// Molecule ⊗ two modes

fn annihilation(n_max: u64) -> CMatrix {
    let d = n_max as usize + 1;
    CMatrix::from_fn(d, d, |row, col| {
        if col == row + 1 {
            Complex64::new((col as f64).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn number_operator(n_max: u64) -> CMatrix {
    let d = n_max as usize + 1;
    CMatrix::from_fn(d, d, |row, col| {
        if row == col {
            Complex64::new(row as f64, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn kron3(a: &CMatrix, b: &CMatrix, c: &CMatrix) -> CMatrix {
    a.kronecker(b).kronecker(c)
}

/// H = H_mol ⊗ 1 − (m·B) ⊗ 1 + Σ_λ ħω(n̂_λ + ½) − μ̂·Ê(0), with
/// Ê(0) = i·A·Σ_λ ê_λ (a_λ − a_λ†) over modes 1 and 2, A = √(ħω/2ε₀V).
pub fn build_total_hamiltonian(
    model: &MolecularModel,
    field: &FieldConfig,
    basis: &FockBasis,
    b: &Vec3,
) -> Result<DenseHermitian> {
    if basis.levels() != model.dim() {
        return Err(Error::Dimension(format!(
            "basis has {} molecular levels, model has {}",
            basis.levels(),
            model.dim()
        )));
    }
    let l = model.dim();
    let id_mol = CMatrix::identity(l, l);
    let d1 = basis.n1_max() as usize + 1;
    let d2 = basis.n2_max() as usize + 1;
    let id1 = CMatrix::identity(d1, d1);
    let id2 = CMatrix::identity(d2, d2);

    let mut h_mol = zeeman_matrix(model, b);
    for (i, e) in model.energies().into_iter().enumerate() {
        h_mol[(i, i)] += Complex64::new(e, 0.0);
    }

    let hw = field.photon_energy();
    let half = Complex64::new(0.5, 0.0);
    let mode1 = (number_operator(basis.n1_max()) + &id1 * half) * Complex64::new(hw, 0.0);
    let mode2 = (number_operator(basis.n2_max()) + &id2 * half) * Complex64::new(hw, 0.0);

    let mut h = kron3(&h_mol, &id1, &id2) + kron3(&id_mol, &mode1, &id2) + kron3(&id_mol, &id1, &mode2);

    let amp = Complex64::new(0.0, field.field_amplitude());
    let a1 = annihilation(basis.n1_max());
    let a2 = annihilation(basis.n2_max());
    let quad1 = (&a1 - a1.adjoint()) * amp;
    let quad2 = (&a2 - a2.adjoint()) * amp;
    for axis in 0..3 {
        let mu = &model.mu()[axis];
        let e1 = Complex64::new(field.e1()[axis], 0.0);
        let e2 = Complex64::new(field.e2()[axis], 0.0);
        if e1 != Complex64::new(0.0, 0.0) {
            h -= kron3(mu, &(&quad1 * e1), &id2);
        }
        if e2 != Complex64::new(0.0, 0.0) {
            h -= kron3(mu, &id1, &(&quad2 * e2));
        }
    }
    // Restore exact Hermiticity lost to rounding in the products.
    let h = (&h + h.adjoint()) * half;
    DenseHermitian::new(h)
}

/// Exact propagator exp(−iHt/ħ) via one eigendecomposition.
#[derive(Debug, Clone)]
pub struct Propagator {
    shift: f64,
    eig: Eigensystem,
}

impl Propagator {
    /// `reference` is an energy subtracted before diagonalizing to keep the
    /// phases small; it is restored as a global phase.
    pub fn new(h: &DenseHermitian, reference: f64) -> Result<Self> {
        let eig = h.eigen_shifted(reference)?;
        Ok(Propagator { shift: reference, eig })
    }

    pub fn apply(&self, psi0: &CVector, t: f64) -> CVector {
        if t == 0.0 {
            return psi0.clone();
        }
        let coeffs = self.eig.vectors.adjoint() * psi0;
        let phased = CVector::from_fn(coeffs.len(), |i, _| {
            coeffs[i] * Complex64::from_polar(1.0, -self.eig.values[i] * t / consts::HBAR)
        });
        let global = Complex64::from_polar(1.0, -self.shift * t / consts::HBAR);
        (&self.eig.vectors * phased) * global
    }
}

/// ψ(t) = exp(−iHt/ħ)·ψ₀.
pub fn evolve_exact(h: &DenseHermitian, psi0: &CVector, t: f64) -> Result<CVector> {
    let norm = psi0.norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::Dimension(format!("initial state has norm {norm}, expected 1")));
    }
    if psi0.len() != h.dim() {
        return Err(Error::Dimension(format!("state of length {} for a {}-dimensional Hamiltonian", psi0.len(), h.dim())));
    }
    let reference = h.expectation(psi0);
    Ok(Propagator::new(h, reference)?.apply(psi0, t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    One,
    Two,
}

/// ⟨n̂⟩ of the selected mode.
pub fn expectation_number(psi: &CVector, basis: &FockBasis, mode: Mode) -> f64 {
    psi.iter()
        .enumerate()
        .map(|(idx, amp)| {
            let (_, n1, n2) = basis.state(idx);
            let n = match mode {
                Mode::One => n1,
                Mode::Two => n2,
            };
            n as f64 * amp.norm_sqr()
        })
        .sum()
}

/// Diagnostics of one exact evolution.
#[derive(Debug, Clone, Serialize)]
pub struct OracleRun {
    pub time: f64,
    pub theta: f64,
    pub n1: f64,
    pub n2: f64,
    pub p_a: f64,
    pub p_b: f64,
    /// Population outside {|a⟩, |b⟩}.
    pub leakage: f64,
    pub norm_drift: f64,
    /// |⟨H⟩(t) − ⟨H⟩(0)| / |⟨H⟩(0)|.
    pub energy_drift: f64,
    pub hilbert_dim: usize,
}

/// Evolves |g; n(1), 0(2)⟩ exactly and measures the rotation through
/// tan θ = √(⟨n̂₂⟩/⟨n̂₁⟩). Returns one run per requested time.
pub fn oracle_runs(
    model: &MolecularModel,
    field: &FieldConfig,
    b: &Vec3,
    basis: &FockBasis,
    times: &[f64],
) -> Result<Vec<OracleRun>> {
    let n = field.n_photons();
    if n == 0 {
        return Err(Error::NoPhotons);
    }
    let g = model.ground_index();
    let h = build_total_hamiltonian(model, field, basis, b)?;
    let psi0 = basis.basis_vector(g, n, 0)?;
    let idx_a = basis.index(g, n, 0).expect("checked above");
    let idx_b = basis
        .index(g, n - 1, 1)
        .ok_or_else(|| Error::Dimension("basis cannot hold one photon in mode 2".into()))?;
    let e_initial = h.expectation(&psi0);
    let propagator = Propagator::new(&h, e_initial)?;

    times
        .iter()
        .map(|&t| {
            let psi = propagator.apply(&psi0, t);
            let n1 = expectation_number(&psi, basis, Mode::One);
            let n2 = expectation_number(&psi, basis, Mode::Two);
            let p_a = psi[idx_a].norm_sqr();
            let p_b = psi[idx_b].norm_sqr();
            let norm_sq = psi.norm_squared();
            Ok(OracleRun {
                time: t,
                theta: angle_from_occupations(n1, n2)?,
                n1,
                n2,
                p_a,
                p_b,
                leakage: (norm_sq - p_a - p_b).max(0.0),
                norm_drift: (psi.norm() - 1.0).abs(),
                energy_drift: (h.expectation(&psi) - e_initial).abs() / e_initial.abs(),
                hilbert_dim: basis.dim(),
            })
        })
        .collect()
}

/// Single-molecule rotation from exact evolution up to time t.
pub fn oracle_rotation_angle(
    model: &MolecularModel,
    field: &FieldConfig,
    experiment: &ExperimentConfig,
    basis: &FockBasis,
    t: f64,
) -> Result<RotationResult> {
    let run = oracle_runs(model, field, experiment.b(), basis, &[t])?;
    Ok(RotationResult { theta: run[0].theta, amplitude: None, method: RotationMethod::Oracle })
}

/// Exact-vs-perturbative comparison for export.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub parameters: OracleParameters,
    pub theta_oracle: f64,
    pub theta_perturbative: f64,
    pub relative_deviation: f64,
    pub leakage: f64,
    pub norm_drift: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleParameters {
    pub time_s: f64,
    pub omega_rad_s: f64,
    pub n_photons: u64,
    pub volume_m3: f64,
    pub b_tesla: [f64; 3],
    pub n1_max: u64,
    pub n2_max: u64,
    pub hilbert_dim: usize,
    pub amplitude_abs_j: f64,
}

/// Runs the exact evolution and compares θ with |M|t/(ħ√n) from the closed-form
/// amplitude on the dressed molecule.
pub fn oracle_report(
    model: &MolecularModel,
    field: &FieldConfig,
    experiment: &ExperimentConfig,
    basis: &FockBasis,
    t: f64,
    tol: &Tolerances,
) -> Result<OracleReport> {
    let pm = first_order_corrections(model, experiment.b(), tol)?;
    let m = amplitude_second_order_closed(&pm, field, tol)?;
    let theta_perturbative = single_molecule_angle(m.abs(), t, field.n_photons())?;
    let run = oracle_runs(model, field, experiment.b(), basis, &[t])?.remove(0);
    let b = experiment.b();
    Ok(OracleReport {
        parameters: OracleParameters {
            time_s: t,
            omega_rad_s: field.omega(),
            n_photons: field.n_photons(),
            volume_m3: field.volume(),
            b_tesla: [b[0], b[1], b[2]],
            n1_max: basis.n1_max(),
            n2_max: basis.n2_max(),
            hilbert_dim: basis.dim(),
            amplitude_abs_j: m.abs(),
        },
        theta_oracle: run.theta,
        theta_perturbative,
        relative_deviation: (run.theta - theta_perturbative).abs() / theta_perturbative.abs(),
        leakage: run.leakage,
        norm_drift: run.norm_drift,
    })
}

// ---------------------------------------------------------------------------
// Finite-difference oracle for the B-term slope

/// Which θ(B) the finite difference is taken through.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pipeline {
    /// First-order dressed molecule, closed-form M, signed rotation.
    PerturbedSecondOrder,
    /// The closed-form B term itself.
    BTermFormula,
}

fn pipeline_angle(
    pipeline: Pipeline,
    model: &MolecularModel,
    field: &FieldConfig,
    experiment: &ExperimentConfig,
    tol: &Tolerances,
) -> Result<f64> {
    match pipeline {
        Pipeline::PerturbedSecondOrder => perturbed_pipeline_angle(model, field, experiment, tol),
        Pipeline::BTermFormula => Ok(faraday_b_term_angle(model, field, experiment, tol)?.theta),
    }
}

/// dθ/d|B| along k̂ at B = 0: central differences at h and h/2 combined by
/// one Richardson step, (4·D(h/2) − D(h))/3.
pub fn finite_difference_dtheta_db(
    model: &MolecularModel,
    field: &FieldConfig,
    experiment: &ExperimentConfig,
    h: f64,
    pipeline: Pipeline,
    tol: &Tolerances,
) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidExperiment(format!("finite-difference step must be positive, got {h}")));
    }
    require_nondegenerate(model, tol)?;
    let k_hat = field.k_hat();
    let central = |step: f64| -> Result<f64> {
        let plus = pipeline_angle(pipeline, model, field, &experiment.with_b(k_hat * step), tol)?;
        let minus = pipeline_angle(pipeline, model, field, &experiment.with_b(k_hat * -step), tol)?;
        Ok((plus - minus) / (2.0 * step))
    };
    let coarse = central(h)?;
    let fine = central(h / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitude::{absorption_vertex, emission_vertex};
    use crate::model::Level;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two_level(gap_ev: f64, mu_d: [f64; 3], m_offdiag: f64) -> MolecularModel {
        let mut mu = [CMatrix::zeros(2, 2), CMatrix::zeros(2, 2), CMatrix::zeros(2, 2)];
        for axis in 0..3 {
            mu[axis][(0, 1)] = c(mu_d[axis] * consts::DEBYE, 0.0);
            mu[axis][(1, 0)] = c(mu_d[axis] * consts::DEBYE, 0.0);
        }
        let mut m = [CMatrix::zeros(2, 2), CMatrix::zeros(2, 2), CMatrix::zeros(2, 2)];
        m[2][(0, 1)] = c(m_offdiag, 0.0);
        m[2][(1, 0)] = c(m_offdiag, 0.0);
        let levels = vec![
            Level { label: "g".into(), energy: 0.0 },
            Level { label: "e".into(), energy: gap_ev * consts::ELECTRON_VOLT },
        ];
        MolecularModel::new(levels, mu, m, 0, &Tolerances::default()).unwrap()
    }

    fn field(n: u64) -> FieldConfig {
        let omega = 2.0 * consts::ELECTRON_VOLT / consts::HBAR;
        FieldConfig::from_direction(Vec3::z(), omega, Vec3::x(), Vec3::y(), n, 1e-22).unwrap()
    }

    #[test]
    fn basis_index_is_a_bijection() {
        let basis = FockBasis::new(3, 2, 3).unwrap();
        assert_eq!(basis.dim(), 3 * 3 * 4);
        let mut seen = vec![false; basis.dim()];
        for level in 0..3 {
            for n1 in 0..=2 {
                for n2 in 0..=3 {
                    let idx = basis.index(level, n1, n2).unwrap();
                    assert!(!seen[idx]);
                    seen[idx] = true;
                    assert_eq!(basis.state(idx), (level, n1, n2));
                }
            }
        }
        assert!(basis.index(0, 3, 0).is_none());
    }

    #[test]
    fn zero_field_diagonalization_is_exact() {
        let model = two_level(3.0, [1.0, 1.0, 0.0], 1e-23);
        let eig = exact_diagonalize_molecule(&model, &Vec3::zeros()).unwrap();
        assert_eq!(eig.values, model.energies());
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_eq!(eig.vectors[(i, j)].norm(), expect);
            }
        }
    }

    #[test]
    fn two_level_in_field_matches_closed_form() {
        let m_od = 3.0 * consts::BOHR_MAGNETON;
        let model = two_level(0.001, [0.0; 3], m_od);
        let b = Vec3::new(0.0, 0.0, 5.0);
        let eig = exact_diagonalize_molecule(&model, &b).unwrap();
        let (e_lo, e_hi) = (model.energy(0), model.energy(1));
        let v = m_od * 5.0;
        let mid = 0.5 * (e_lo + e_hi);
        let half = ((0.5 * (e_hi - e_lo)).powi(2) + v * v).sqrt();
        assert!((eig.values[0] - (mid - half)).abs() < 1e-12 * half);
        assert!((eig.values[1] - (mid + half)).abs() < 1e-12 * half);
        let overlap = eig.vectors.adjoint() * &eig.vectors;
        assert!(max_abs(&(overlap - CMatrix::identity(2, 2))) < 1e-10);
    }

    #[test]
    fn decoupled_hamiltonian_is_block_diagonal() {
        let model = two_level(3.0, [0.0; 3], 0.0);
        let f = field(1);
        let basis = FockBasis::for_field(&model, &f);
        let h = build_total_hamiltonian(&model, &f, &basis, &Vec3::zeros()).unwrap();
        let off: f64 = (0..basis.dim())
            .flat_map(|i| (0..basis.dim()).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| h.matrix()[(i, j)].norm())
            .fold(0.0, f64::max);
        assert_eq!(off, 0.0);
        let psi0 = basis.basis_vector(0, 1, 0).unwrap();
        let psi = evolve_exact(&h, &psi0, 1e-9).unwrap();
        assert!((expectation_number(&psi, &basis, Mode::One) - 1.0).abs() < 1e-14);
        assert!(expectation_number(&psi, &basis, Mode::Two).abs() < 1e-14);
    }

    #[test]
    fn interaction_reproduces_diagram_vertices() {
        let model = two_level(3.0, [1.2, -0.4, 0.3], 0.0);
        let f = field(2);
        let basis = FockBasis::for_field(&model, &f);
        let h = build_total_hamiltonian(&model, &f, &basis, &Vec3::zeros()).unwrap();
        let (g, r) = (0, 1);
        // absorption from mode 1: |g; n, 0⟩ → |r; n−1, 0⟩
        let from = basis.index(g, 2, 0).unwrap();
        let to = basis.index(r, 1, 0).unwrap();
        let expected = absorption_vertex(&f, &model.mu_vector(r, g), 2);
        assert!((h.matrix()[(to, from)] - expected).norm() <= 1e-14 * expected.norm());
        // emission into mode 2: |r; n−1, 0⟩ → |g; n−1, 1⟩
        let from = basis.index(r, 1, 0).unwrap();
        let to = basis.index(g, 1, 1).unwrap();
        let expected = emission_vertex(&f, &model.mu_vector(g, r), 0);
        assert!((h.matrix()[(to, from)] - expected).norm() <= 1e-14 * expected.norm());
    }

    #[test]
    fn evolution_edge_cases() {
        let model = two_level(3.0, [1.0, 1.0, 0.0], 0.0);
        let f = field(1);
        let basis = FockBasis::for_field(&model, &f);
        let h = build_total_hamiltonian(&model, &f, &basis, &Vec3::zeros()).unwrap();
        let psi0 = basis.basis_vector(0, 1, 0).unwrap();
        assert_eq!(evolve_exact(&h, &psi0, 0.0).unwrap(), psi0);
        assert!(evolve_exact(&h, &(psi0.clone() * c(2.0, 0.0)), 1.0).is_err());

        let diag = DenseHermitian::new(CMatrix::from_diagonal(&CVector::from_vec(vec![
            c(1e-19, 0.0),
            c(3e-19, 0.0),
            c(-2e-19, 0.0),
        ])))
        .unwrap();
        let psi0 = CVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0)]);
        let psi = evolve_exact(&diag, &psi0, 3.3e-14).unwrap();
        for i in 0..3 {
            assert!((psi[i].norm_sqr() - psi0[i].norm_sqr()).abs() < 1e-14);
        }
    }

    #[test]
    fn number_expectations() {
        let basis = FockBasis::new(2, 3, 2).unwrap();
        let psi = basis.basis_vector(0, 3, 0).unwrap();
        assert_eq!(expectation_number(&psi, &basis, Mode::One), 3.0);
        assert_eq!(expectation_number(&psi, &basis, Mode::Two), 0.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = (basis.basis_vector(0, 3, 0).unwrap() + basis.basis_vector(0, 2, 1).unwrap()) * c(s, 0.0);
        assert!((expectation_number(&psi, &basis, Mode::One) - 2.5).abs() < 1e-15);
        assert!((expectation_number(&psi, &basis, Mode::Two) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn oracle_without_dipoles_gives_zero_angle() {
        let model = two_level(3.0, [0.0; 3], 0.0);
        let f = field(1);
        let x = ExperimentConfig::new(Vec3::zeros(), 1.0, 0.0, 1).unwrap();
        let basis = FockBasis::for_field(&model, &f);
        let theta = oracle_rotation_angle(&model, &f, &x, &basis, 1e-9).unwrap();
        assert_eq!(theta.theta, 0.0);
    }

    #[test]
    fn b_term_finite_difference_is_its_slope() {
        let ev = consts::ELECTRON_VOLT;
        let mut mu = [CMatrix::zeros(3, 3), CMatrix::zeros(3, 3), CMatrix::zeros(3, 3)];
        mu[0][(0, 1)] = c(2.0 * consts::DEBYE, 0.0);
        mu[0][(1, 0)] = c(2.0 * consts::DEBYE, 0.0);
        mu[1][(0, 2)] = c(1.0 * consts::DEBYE, 0.0);
        mu[1][(2, 0)] = c(1.0 * consts::DEBYE, 0.0);
        let mut m = [CMatrix::zeros(3, 3), CMatrix::zeros(3, 3), CMatrix::zeros(3, 3)];
        m[2][(1, 2)] = c(0.0, consts::BOHR_MAGNETON);
        m[2][(2, 1)] = c(0.0, -consts::BOHR_MAGNETON);
        let levels = vec![
            Level { label: "g".into(), energy: 0.0 },
            Level { label: "a".into(), energy: 3.0 * ev },
            Level { label: "b".into(), energy: 3.5 * ev },
        ];
        let tol = Tolerances::default();
        let model = MolecularModel::new(levels, mu, m, 0, &tol).unwrap();
        let f = field(1);
        let x = ExperimentConfig::new(f.k_hat(), 0.1, 1e25, 1).unwrap();
        let slope = faraday_b_term_angle(&model, &f, &x, &tol).unwrap().theta;
        let fd = finite_difference_dtheta_db(&model, &f, &x, 0.5, Pipeline::BTermFormula, &tol).unwrap();
        assert!((fd - slope).abs() <= 1e-12 * slope.abs());
    }
}
