//! Transition amplitude M between |a⟩ = |g; n(1), 0(2)⟩ and
//! |b⟩ = |g; (n−1)(1), 1(2)⟩, and the rotation angles built on it.
//!
//! Three independent routes to M are provided:
//!
//! * [`amplitude_second_order_diagrams`]: explicit sum over the two time
//!   orderings (absorb-then-emit and emit-then-absorb) with dipole vertices
//!   evaluated from the quantized field, on the field-dressed molecule.
//! * [`amplitude_second_order_closed`]: the rearranged closed form in terms of
//!   Re/Im of μᵢ^{gr}μⱼ^{rg}, on the field-dressed molecule.
//! * [`amplitude_third_order`]: three-vertex time-ordered sum on the bare
//!   molecule with one static-field Zeeman vertex.
//!
//! [`faraday_b_term_angle`] is the closed-form B term, linear in B.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{consts, require_nondegenerate, CMatrix, ExperimentConfig, FieldConfig, MolecularModel, Tolerances, Vec3};
use crate::perturbation::{first_order_corrections, zeeman_matrix, PerturbedModel};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmplitudeOrder {
    SecondOrderClosed,
    SecondOrderDiagrams,
    ThirdOrder,
}

#[derive(Debug, Clone)]
pub struct TransitionAmplitude {
    /// M, J.
    pub value: Complex64,
    pub order: AmplitudeOrder,
    pub field: FieldConfig,
}

impl TransitionAmplitude {
    fn new(value: Complex64, order: AmplitudeOrder, field: &FieldConfig) -> Result<Self> {
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::Dimension(format!("non-finite amplitude {value}")));
        }
        if field.n_photons() == 0 {
            log::warn!("no photons in mode 1, the amplitude vanishes");
        }
        Ok(TransitionAmplitude { value, order, field: field.clone() })
    }

    pub fn abs(&self) -> f64 {
        self.value.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationMethod {
    ViaAmplitude,
    BTermFormula,
    Oracle,
}

#[derive(Debug, Clone)]
pub struct RotationResult {
    /// Rotation angle, rad.
    pub theta: f64,
    pub amplitude: Option<TransitionAmplitude>,
    pub method: RotationMethod,
}

// ---------------------------------------------------------------------------
// Field vertices

/// The field-side operators a vertex can apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vertex {
    /// Absorb one photon from mode 1 through −μ·E.
    AbsorbMode1,
    /// Emit one photon into mode 2 through −μ·E.
    EmitMode2,
    /// Static Zeeman coupling −m·B, photon numbers unchanged.
    Zeeman,
}

fn project(e: &Vec3, v: &[Complex64; 3]) -> Complex64 {
    v[0] * e[0] + v[1] * e[1] + v[2] * e[2]
}

/// ⟨t; n₁−1| −μ·E |s; n₁⟩ for mode 1: −i·A·√n₁·(ê⁽¹⁾·μ^{ts}).
pub fn absorption_vertex(field: &FieldConfig, mu_ts: &[Complex64; 3], n1_before: u64) -> Complex64 {
    -I * field.field_amplitude() * (n1_before as f64).sqrt() * project(field.e1(), mu_ts)
}

/// ⟨t; n₂+1| −μ·E |s; n₂⟩ for mode 2: i·A·√(n₂+1)·(ê⁽²⁾·μ^{ts}).
pub fn emission_vertex(field: &FieldConfig, mu_ts: &[Complex64; 3], n2_before: u64) -> Complex64 {
    I * field.field_amplitude() * ((n2_before + 1) as f64).sqrt() * project(field.e2(), mu_ts)
}

/// Intermediate state relative to |a⟩: molecular level plus photon-number
/// offsets of modes 1 and 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct PathState {
    level: usize,
    dn1: i64,
    dn2: i64,
}

/// Walks time-ordered vertex sequences from |a⟩ to |b⟩ over a fixed molecule.
struct TimeOrderedSum<'a> {
    energies: &'a [f64],
    mu: &'a [CMatrix; 3],
    zeeman: Option<&'a CMatrix>,
    field: &'a FieldConfig,
    ground: usize,
    photon_energy: f64,
}

impl<'a> TimeOrderedSum<'a> {
    fn in_model_space(&self, s: &PathState) -> bool {
        s.level == self.ground && ((s.dn1 == 0 && s.dn2 == 0) || (s.dn1 == -1 && s.dn2 == 1))
    }

    /// E_I − E_a.
    fn excitation(&self, s: &PathState) -> f64 {
        self.energies[s.level] - self.energies[self.ground] + (s.dn1 + s.dn2) as f64 * self.photon_energy
    }

    fn element(&self, vertex: Vertex, from: &PathState, to_level: usize) -> (Complex64, PathState) {
        let n = self.field.n_photons() as i64;
        let mu_ts = [
            self.mu[0][(to_level, from.level)],
            self.mu[1][(to_level, from.level)],
            self.mu[2][(to_level, from.level)],
        ];
        match vertex {
            Vertex::AbsorbMode1 => {
                let before = (n + from.dn1).max(0) as u64;
                let to = PathState { level: to_level, dn1: from.dn1 - 1, ..*from };
                (absorption_vertex(self.field, &mu_ts, before), to)
            }
            Vertex::EmitMode2 => {
                let to = PathState { level: to_level, dn2: from.dn2 + 1, ..*from };
                (emission_vertex(self.field, &mu_ts, from.dn2 as u64), to)
            }
            Vertex::Zeeman => {
                let v = self.zeeman.map_or(Complex64::new(0.0, 0.0), |z| z[(to_level, from.level)]);
                (v, PathState { level: to_level, ..*from })
            }
        }
    }

    /// Σ over intermediate levels of Π⟨next|H|prev⟩ / Π(E_a − E_I)^power.
    fn walk(&self, order: &[Vertex], from: PathState, power: i32) -> Complex64 {
        let Some((&vertex, rest)) = order.split_first() else {
            return Complex64::new(1.0, 0.0);
        };
        if rest.is_empty() {
            let (elem, to) = self.element(vertex, &from, self.ground);
            debug_assert!(to.dn1 == -1 && to.dn2 == 1);
            return elem;
        }
        let mut total = Complex64::new(0.0, 0.0);
        for level in 0..self.energies.len() {
            let (elem, to) = self.element(vertex, &from, level);
            if elem == Complex64::new(0.0, 0.0) || self.in_model_space(&to) {
                continue;
            }
            let denom = (-self.excitation(&to)).powi(power);
            total += elem * self.walk(rest, to, power) / denom;
        }
        total
    }

    fn path(&self, order: &[Vertex]) -> Complex64 {
        let start = PathState { level: self.ground, dn1: 0, dn2: 0 };
        self.walk(order, start, 1)
    }
}

fn check_resonances(energies: &[f64], ground: usize, photon_energy: f64, tol: &Tolerances) -> Result<()> {
    for (r, &e_r) in energies.iter().enumerate() {
        if r == ground {
            continue;
        }
        let e_rg = e_r - energies[ground];
        if (photon_energy - e_rg.abs()).abs() < tol.resonance_threshold(e_rg) {
            return Err(Error::NearResonance {
                from: ground,
                to: r,
                photon_energy,
                transition_energy: e_rg,
            });
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Second order

/// Figure (a): absorb from mode 1, then emit into mode 2.
pub const DIAGRAM_ABSORB_FIRST: [Vertex; 2] = [Vertex::AbsorbMode1, Vertex::EmitMode2];
/// Figure (b): emit into mode 2, then absorb from mode 1.
pub const DIAGRAM_EMIT_FIRST: [Vertex; 2] = [Vertex::EmitMode2, Vertex::AbsorbMode1];

/// Second-order amplitude from the two time-ordered graphs.
///
/// Intermediate states are |E_r; (n−1)(1)⟩ for the absorb-first graph and
/// |E_r; n(1); 1(2)⟩ for the emit-first graph.
pub fn amplitude_second_order_diagrams(
    pm: &PerturbedModel<'_>,
    field: &FieldConfig,
    tol: &Tolerances,
) -> Result<TransitionAmplitude> {
    check_resonances(pm.energies(), pm.ground_index(), field.photon_energy(), tol)?;
    let sum = TimeOrderedSum {
        energies: pm.energies(),
        mu: pm.mu(),
        zeeman: None,
        field,
        ground: pm.ground_index(),
        photon_energy: field.photon_energy(),
    };
    let value = sum.path(&DIAGRAM_ABSORB_FIRST) + sum.path(&DIAGRAM_EMIT_FIRST);
    TransitionAmplitude::new(value, AmplitudeOrder::SecondOrderDiagrams, field)
}

/// Closed form
/// M = (μ₀c²ħω√n/V)·ê⁽¹⁾ᵢê⁽²⁾ⱼ·Σ_r [E_rg·Re{μᵢ^{gr}μⱼ^{rg}} − iħω·Im{μᵢ^{gr}μⱼ^{rg}}] / [(ħω)² − E_rg²].
///
/// The sum runs over every level including r = g, whose term vanishes for a
/// Hermitian dipole operator.
pub fn amplitude_second_order_closed(
    pm: &PerturbedModel<'_>,
    field: &FieldConfig,
    tol: &Tolerances,
) -> Result<TransitionAmplitude> {
    let g = pm.ground_index();
    let energies = pm.energies();
    let hw = field.photon_energy();
    check_resonances(energies, g, hw, tol)?;

    let prefactor = consts::MU0 * consts::C * consts::C * hw * (field.n_photons() as f64).sqrt() / field.volume();
    let mut sum = Complex64::new(0.0, 0.0);
    for r in 0..pm.dim() {
        let e_rg = energies[r] - energies[g];
        let product = project(field.e1(), &pm.mu_vector(g, r)) * project(field.e2(), &pm.mu_vector(r, g));
        let numerator = Complex64::new(e_rg * product.re, -hw * product.im);
        sum += numerator / (hw * hw - e_rg * e_rg);
    }
    TransitionAmplitude::new(sum * prefactor, AmplitudeOrder::SecondOrderClosed, field)
}

// ---------------------------------------------------------------------------
// Third order

/// All orderings of one Zeeman vertex, one mode-1 absorption and one mode-2
/// emission.
pub const THIRD_ORDER_ORDERINGS: [[Vertex; 3]; 6] = [
    [Vertex::Zeeman, Vertex::AbsorbMode1, Vertex::EmitMode2],
    [Vertex::Zeeman, Vertex::EmitMode2, Vertex::AbsorbMode1],
    [Vertex::AbsorbMode1, Vertex::Zeeman, Vertex::EmitMode2],
    [Vertex::EmitMode2, Vertex::Zeeman, Vertex::AbsorbMode1],
    [Vertex::AbsorbMode1, Vertex::EmitMode2, Vertex::Zeeman],
    [Vertex::EmitMode2, Vertex::AbsorbMode1, Vertex::Zeeman],
];

/// Third-order amplitude on the bare molecule with exactly one −m·B vertex.
///
/// Intermediate states degenerate with |a⟩ and |b⟩ are excluded from the sums.
/// The ground-state Zeeman shift V(g,g) then enters through the standard
/// renormalization term −V(g,g)·Σ_I ⟨b|H|I⟩⟨I|H|a⟩/(E_a − E_I)², which is zero
/// for molecules whose ground state carries no permanent magnetic moment.
pub fn amplitude_third_order(
    model: &MolecularModel,
    b: &Vec3,
    field: &FieldConfig,
    tol: &Tolerances,
) -> Result<TransitionAmplitude> {
    require_nondegenerate(model, tol)?;
    let energies = model.energies();
    let g = model.ground_index();
    let hw = field.photon_energy();
    check_resonances(&energies, g, hw, tol)?;

    let v = zeeman_matrix(model, b);
    let sum = TimeOrderedSum {
        energies: &energies,
        mu: model.mu(),
        zeeman: Some(&v),
        field,
        ground: g,
        photon_energy: hw,
    };
    let mut value: Complex64 = THIRD_ORDER_ORDERINGS.iter().map(|order| sum.path(order)).sum();

    let v_gg = v[(g, g)];
    if v_gg != Complex64::new(0.0, 0.0) {
        let start = PathState { level: g, dn1: 0, dn2: 0 };
        let squared = sum.walk(&DIAGRAM_ABSORB_FIRST, start, 2) + sum.walk(&DIAGRAM_EMIT_FIRST, start, 2);
        value -= v_gg * squared;
    }
    TransitionAmplitude::new(value, AmplitudeOrder::ThirdOrder, field)
}

// ---------------------------------------------------------------------------
// Angles

/// Gas rotation magnitude θ = N·|M|·L / (ħ·c·√n).
pub fn angle_from_amplitude(
    amplitude: &TransitionAmplitude,
    field: &FieldConfig,
    experiment: &ExperimentConfig,
) -> Result<RotationResult> {
    let theta = gas_scale(field, experiment)? * amplitude.abs();
    Ok(RotationResult {
        theta,
        amplitude: Some(amplitude.clone()),
        method: RotationMethod::ViaAmplitude,
    })
}

/// Signed rotation carried by the imaginary (antisymmetric) part of M,
/// −N·Im(M)·L / (ħ·c·√n), in the sign convention of the B-term formula.
pub fn signed_angle_from_amplitude(
    amplitude: &TransitionAmplitude,
    field: &FieldConfig,
    experiment: &ExperimentConfig,
) -> Result<f64> {
    Ok(-gas_scale(field, experiment)? * amplitude.value.im)
}

fn gas_scale(field: &FieldConfig, experiment: &ExperimentConfig) -> Result<f64> {
    if field.n_photons() == 0 {
        return Err(Error::NoPhotons);
    }
    Ok(experiment.n_molecules() as f64 * experiment.length()
        / (consts::HBAR * consts::C * (field.n_photons() as f64).sqrt()))
}

/// Single-molecule small-angle rotation after time t: |M|·t / (ħ·√n).
pub fn single_molecule_angle(amplitude_abs: f64, t: f64, n_photons: u64) -> Result<f64> {
    if n_photons == 0 {
        return Err(Error::NoPhotons);
    }
    Ok(amplitude_abs * t / (consts::HBAR * (n_photons as f64).sqrt()))
}

/// The closed-form Faraday B term, evaluated on the bare molecule.
///
/// Components 1, 2, 3 are projections onto ê⁽¹⁾, ê⁽²⁾ and k̂. The overall sign
/// is the formula's literal one; it is odd in B·k.
pub fn faraday_b_term_angle(
    model: &MolecularModel,
    field: &FieldConfig,
    experiment: &ExperimentConfig,
    tol: &Tolerances,
) -> Result<RotationResult> {
    require_nondegenerate(model, tol)?;
    let energies = model.energies();
    let g = model.ground_index();
    let hbar = consts::HBAR;
    let omega = field.omega();
    check_resonances(&energies, g, hbar * omega, tol)?;

    let k_hat = field.k_hat();
    let dim = model.dim();
    let mu1 = |p: usize, q: usize| project(field.e1(), &model.mu_vector(p, q));
    let mu2 = |p: usize, q: usize| project(field.e2(), &model.mu_vector(p, q));
    let m3 = |p: usize, q: usize| {
        let m = model.m();
        m[0][(p, q)] * k_hat[0] + m[1][(p, q)] * k_hat[1] + m[2][(p, q)] * k_hat[2]
    };
    // ħω_mn
    let gap = |m: usize, n: usize| energies[m] - energies[n];

    let mut total = 0.0;
    for r in 0..dim {
        let omega_rg = gap(r, g) / hbar;
        let weight = omega * omega / (omega_rg * omega_rg - omega * omega);
        let mut inner = Complex64::new(0.0, 0.0);
        for p in (0..dim).filter(|&p| p != g) {
            inner += m3(p, g) / gap(p, g) * (mu1(g, r) * mu2(r, p) - mu2(g, r) * mu1(r, p));
        }
        for s in (0..dim).filter(|&s| s != r) {
            inner += m3(r, s) / gap(s, r) * (mu1(g, r) * mu2(s, g) - mu2(g, r) * mu1(s, g));
        }
        total += weight * inner.im;
    }

    let b_dot_k = experiment.b().dot(field.k());
    let prefactor =
        -consts::MU0 * consts::C * experiment.length() * experiment.density() * b_dot_k / (hbar * field.k().norm());
    Ok(RotationResult {
        theta: prefactor * total,
        amplitude: None,
        method: RotationMethod::BTermFormula,
    })
}

/// Signed rotation through the dressed-molecule pipeline: first-order Zeeman
/// corrections, closed-form M, then [`signed_angle_from_amplitude`].
pub fn perturbed_pipeline_angle(
    model: &MolecularModel,
    field: &FieldConfig,
    experiment: &ExperimentConfig,
    tol: &Tolerances,
) -> Result<f64> {
    let pm = first_order_corrections(model, experiment.b(), tol)?;
    let amplitude = amplitude_second_order_closed(&pm, field, tol)?;
    signed_angle_from_amplitude(&amplitude, field, experiment)
}

/// Via-amplitude rotation with the physical sign attached from the B term.
pub fn via_amplitude_angle(
    model: &MolecularModel,
    field: &FieldConfig,
    experiment: &ExperimentConfig,
    tol: &Tolerances,
) -> Result<RotationResult> {
    let pm = first_order_corrections(model, experiment.b(), tol)?;
    let amplitude = amplitude_second_order_closed(&pm, field, tol)?;
    let mut result = angle_from_amplitude(&amplitude, field, experiment)?;
    let b_term = faraday_b_term_angle(model, field, experiment, tol)?;
    if b_term.theta < 0.0 {
        result.theta = -result.theta;
    }
    Ok(result)
}
