//! Two-state dynamics between |a⟩ and |b⟩ under
//!
//! ```text
//! H_eff = | E0  M* |
//!         | M   E0 |
//! ```
//!
//! with |a⟩ as the initial state.

use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::consts::HBAR;

/// Amplitudes and probabilities sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoStateTrajectory {
    pub times: Vec<f64>,
    pub c_a: Vec<Complex64>,
    pub c_b: Vec<Complex64>,
    pub p_a: Vec<f64>,
    pub p_b: Vec<f64>,
}

impl TwoStateTrajectory {
    fn new(times: Vec<f64>, c_a: Vec<Complex64>, c_b: Vec<Complex64>, p_a: Vec<f64>, p_b: Vec<f64>) -> Self {
        TwoStateTrajectory { times, c_a, c_b, p_a, p_b }
    }

    fn from_amplitudes(times: Vec<f64>, c_a: Vec<Complex64>, c_b: Vec<Complex64>) -> Self {
        let p_a = c_a.iter().map(|c| c.norm_sqr()).collect();
        let p_b = c_b.iter().map(|c| c.norm_sqr()).collect();
        TwoStateTrajectory { times, c_a, c_b, p_a, p_b }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest |p_a + p_b − 1| over the grid.
    pub fn max_norm_drift(&self) -> f64 {
        self.p_a
            .iter()
            .zip(&self.p_b)
            .map(|(a, b)| (a + b - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Columns `time_s,p_a,p_b,re_ca,im_ca,re_cb,im_cb`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "time_s,p_a,p_b,re_ca,im_ca,re_cb,im_cb")?;
        for i in 0..self.len() {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                self.times[i],
                self.p_a[i],
                self.p_b[i],
                self.c_a[i].re,
                self.c_a[i].im,
                self.c_b[i].re,
                self.c_b[i].im
            )?;
        }
        Ok(())
    }
}

fn check_grid(times: &[f64]) -> Result<()> {
    let ascending = times.windows(2).all(|w| w[0] <= w[1]);
    if !ascending || times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::InvalidTimeGrid);
    }
    Ok(())
}

fn global_phase(e0: f64, t: f64) -> Complex64 {
    Complex64::from_polar(1.0, -e0 * t / HBAR)
}

/// Closed-form Rabi solution.
///
/// c_a = e^{−iE₀t/ħ}·cos(|M|t/ħ), c_b = −i·e^{i·arg M}·e^{−iE₀t/ħ}·sin(|M|t/ħ).
pub fn evolve_analytic(m: Complex64, e0: f64, times: &[f64]) -> Result<TwoStateTrajectory> {
    check_grid(times)?;
    let rabi = m.norm() / HBAR;
    let coupling_phase = if m.norm() > 0.0 { m / m.norm() } else { Complex64::new(1.0, 0.0) };
    let mut c_a = Vec::with_capacity(times.len());
    let mut c_b = Vec::with_capacity(times.len());
    let mut p_a = Vec::with_capacity(times.len());
    let mut p_b = Vec::with_capacity(times.len());
    for &t in times {
        let phase = global_phase(e0, t);
        let (s, c) = (rabi * t).sin_cos();
        c_a.push(phase * c);
        c_b.push(Complex64::new(0.0, -1.0) * coupling_phase * phase * s);
        p_a.push(c * c);
        p_b.push(s * s);
    }
    Ok(TwoStateTrajectory::new(times.to_vec(), c_a, c_b, p_a, p_b))
}

/// Largest stable RK4 step for an oscillation of angular frequency |M|/ħ.
fn rk4_stability_bound(m_abs: f64) -> f64 {
    2.0 * std::f64::consts::SQRT_2 * HBAR / m_abs
}

/// Fixed-step RK4 integration of iħ ∂ₜψ = H_eff ψ from ψ(0) = |a⟩.
///
/// The E₀ term commutes with everything, so it is applied as an exact phase
/// and only the off-diagonal coupling is integrated. The step is the smaller
/// of `dt_max` and ħ/(100|M|), shrunk so that every grid time is hit exactly.
/// A `dt_max` beyond the RK4 stability limit is rejected.
pub fn evolve_numeric(m: Complex64, e0: f64, times: &[f64], dt_max: f64) -> Result<TwoStateTrajectory> {
    if !(dt_max > 0.0 && dt_max.is_finite()) {
        return Err(Error::NonPositiveStep(dt_max));
    }
    check_grid(times)?;
    let m_abs = m.norm();
    let mut step = dt_max;
    if m_abs > 0.0 {
        let bound = rk4_stability_bound(m_abs);
        if dt_max > bound {
            return Err(Error::StepTooLarge { dt: dt_max, bound });
        }
        step = step.min(HBAR / (100.0 * m_abs));
    }

    // Rotating frame: dψ/dt = −(i/ħ)·[[0, M*], [M, 0]]·ψ.
    let rhs = |psi: [Complex64; 2]| -> [Complex64; 2] {
        let f = Complex64::new(0.0, -1.0 / HBAR);
        [f * m.conj() * psi[1], f * m * psi[0]]
    };
    let axpy = |psi: [Complex64; 2], k: [Complex64; 2], h: f64| [psi[0] + k[0] * h, psi[1] + k[1] * h];

    let mut psi = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    let mut t = 0.0;
    let mut c_a = Vec::with_capacity(times.len());
    let mut c_b = Vec::with_capacity(times.len());
    for &target in times {
        let span = target - t;
        if span > 0.0 {
            let n_steps = (span / step).ceil().max(1.0) as u64;
            let h = span / n_steps as f64;
            for _ in 0..n_steps {
                let k1 = rhs(psi);
                let k2 = rhs(axpy(psi, k1, h / 2.0));
                let k3 = rhs(axpy(psi, k2, h / 2.0));
                let k4 = rhs(axpy(psi, k3, h));
                for i in 0..2 {
                    psi[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
                }
            }
            t = target;
        }
        let phase = global_phase(e0, target);
        c_a.push(psi[0] * phase);
        c_b.push(psi[1] * phase);
    }
    Ok(TwoStateTrajectory::from_amplitudes(times.to_vec(), c_a, c_b))
}

/// tan θ = √(⟨n₂⟩/⟨n₁⟩).
pub fn angle_from_occupations(n1_expect: f64, n2_expect: f64) -> Result<f64> {
    if !(n1_expect > 0.0) {
        return Err(Error::EmptyMode1(n1_expect));
    }
    Ok((n2_expect.max(0.0) / n1_expect).sqrt().atan())
}

/// Time for one full Rabi period of the populations, πħ/|M|.
pub fn rabi_period(m_abs: f64) -> f64 {
    std::f64::consts::PI * HBAR / m_abs
}
