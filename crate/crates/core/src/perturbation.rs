//! First-order Rayleigh–Schrödinger treatment of the Zeeman coupling −m·B.
//!
//! The molecule's eigenbasis is known; the static field mixes levels to first
//! order and shifts each energy by its diagonal Zeeman element. Transition
//! moments between the corrected states follow from the mixing coefficients.

use log::warn;
use num_complex::Complex64;

use crate::error::Result;
use crate::model::{require_nondegenerate, CMatrix, MolecularModel, Tolerances, Vec3};

/// Zeeman matrix V(p,q) = −Σᵢ mᵢ(p,q)·Bᵢ.
pub fn zeeman_matrix(model: &MolecularModel, b: &Vec3) -> CMatrix {
    let dim = model.dim();
    let m = model.m();
    let mut v = CMatrix::zeros(dim, dim);
    for (axis, comp) in m.iter().enumerate() {
        if b[axis] != 0.0 {
            v -= comp * Complex64::new(b[axis], 0.0);
        }
    }
    v
}

/// A conditioning warning raised for a small (but not degenerate) energy
/// denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallDenominator {
    pub i: usize,
    pub j: usize,
    pub gap: f64,
}

/// Molecule dressed to first order in the static field.
#[derive(Debug, Clone)]
pub struct PerturbedModel<'a> {
    base: &'a MolecularModel,
    b: Vec3,
    energies: Vec<f64>,
    energy_shifts: Vec<f64>,
    /// mixing[(p, n)] is the coefficient of |p⁽⁰⁾⟩ in the correction of |n⟩.
    mixing: CMatrix,
    mu_corr: [CMatrix; 3],
    m_corr: [CMatrix; 3],
    mu_first: [CMatrix; 3],
    m_first: [CMatrix; 3],
    warnings: Vec<SmallDenominator>,
}

impl<'a> PerturbedModel<'a> {
    pub fn base(&self) -> &'a MolecularModel {
        self.base
    }

    pub fn b(&self) -> &Vec3 {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn ground_index(&self) -> usize {
        self.base.ground_index()
    }

    /// E⁽⁰⁾ + V(i,i), J.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn energy(&self, i: usize) -> f64 {
        self.energies[i]
    }

    /// First-order energy corrections V(i,i), J.
    pub fn energy_shifts(&self) -> &[f64] {
        &self.energy_shifts
    }

    /// First-order parts of the electric and magnetic moment matrices.
    pub fn mu_correction(&self) -> &[CMatrix; 3] {
        &self.mu_first
    }

    pub fn m_correction(&self) -> &[CMatrix; 3] {
        &self.m_first
    }

    pub fn mixing(&self) -> &CMatrix {
        &self.mixing
    }

    pub fn mu(&self) -> &[CMatrix; 3] {
        &self.mu_corr
    }

    pub fn m(&self) -> &[CMatrix; 3] {
        &self.m_corr
    }

    pub fn mu_vector(&self, p: usize, q: usize) -> [Complex64; 3] {
        [self.mu_corr[0][(p, q)], self.mu_corr[1][(p, q)], self.mu_corr[2][(p, q)]]
    }

    pub fn warnings(&self) -> &[SmallDenominator] {
        &self.warnings
    }

    /// The undressed molecule viewed as a perturbed model at B = 0.
    pub fn unperturbed(base: &'a MolecularModel) -> Self {
        let dim = base.dim();
        let zeros = || [CMatrix::zeros(dim, dim), CMatrix::zeros(dim, dim), CMatrix::zeros(dim, dim)];
        PerturbedModel {
            base,
            b: Vec3::zeros(),
            energies: base.energies(),
            energy_shifts: vec![0.0; dim],
            mixing: CMatrix::zeros(dim, dim),
            mu_corr: base.mu().clone(),
            m_corr: base.m().clone(),
            mu_first: zeros(),
            m_first: zeros(),
            warnings: Vec::new(),
        }
    }
}

/// Dresses `model` to first order in `b`.
///
/// Energies pick up V(i,i). States pick up Σ_{p≠n} |p⟩ V(p,n)/(E_n − E_p) with
/// unperturbed denominators, and every moment matrix is re-evaluated between
/// the corrected bra and ket, keeping terms linear in V.
pub fn first_order_corrections<'a>(
    model: &'a MolecularModel,
    b: &Vec3,
    tol: &Tolerances,
) -> Result<PerturbedModel<'a>> {
    require_nondegenerate(model, tol)?;
    let dim = model.dim();
    let e0 = model.energies();
    let v = zeeman_matrix(model, b);

    let mut warnings = Vec::new();
    for i in 0..dim {
        for j in (i + 1)..dim {
            let gap = (e0[i] - e0[j]).abs();
            if gap < 10.0 * tol.degeneracy_threshold(e0[i], e0[j]) {
                warn!("levels {i} and {j} are nearly degenerate (gap {gap:.3e} J); first-order mixing is ill-conditioned");
                warnings.push(SmallDenominator { i, j, gap });
            }
        }
    }

    let mixing = CMatrix::from_fn(dim, dim, |p, n| {
        if p == n {
            Complex64::new(0.0, 0.0)
        } else {
            v[(p, n)] / (e0[n] - e0[p])
        }
    });

    let energy_shifts: Vec<f64> = (0..dim).map(|i| v[(i, i)].re).collect();
    let energies = e0.iter().zip(&energy_shifts).map(|(e, de)| e + de).collect();
    let mu_first = model.mu().clone().map(|op| first_order_part(&op, &mixing));
    let m_first = model.m().clone().map(|op| first_order_part(&op, &mixing));
    let mu_corr = std::array::from_fn(|axis| &model.mu()[axis] + &mu_first[axis]);
    let m_corr = std::array::from_fn(|axis| &model.m()[axis] + &m_first[axis]);

    Ok(PerturbedModel {
        base: model,
        b: *b,
        energies,
        energy_shifts,
        mixing,
        mu_corr,
        m_corr,
        mu_first,
        m_first,
        warnings,
    })
}

/// Σ_p conj(c(p,m))·O(p,n) + Σ_p O(m,p)·c(p,n), i.e. C†O + OC (the diagonal of
/// `mixing` is zero).
fn first_order_part(op: &CMatrix, mixing: &CMatrix) -> CMatrix {
    mixing.adjoint() * op + op * mixing
}
