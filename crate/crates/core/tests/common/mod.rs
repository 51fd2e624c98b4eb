#![allow(dead_code)]

use std::path::PathBuf;

use faraday_qed::model::{CMatrix, Level};
use faraday_qed::*;
use num_complex::Complex64;
use rand::Rng;

pub fn samples_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../samples")
}

pub fn three_level() -> MolecularModel {
    load_model(samples_dir().join("three_level.json"), UnitSystem::SI).unwrap()
}

pub fn two_level() -> MolecularModel {
    load_model(samples_dir().join("two_level.json"), UnitSystem::SI).unwrap()
}

pub fn ev(x: f64) -> f64 {
    x * consts::ELECTRON_VOLT
}

pub fn omega_ev(x: f64) -> f64 {
    ev(x) / consts::HBAR
}

/// 2 eV photons along z, x/y polarizations.
pub fn field(n: u64, volume: f64) -> FieldConfig {
    FieldConfig::from_direction(Vec3::z(), omega_ev(2.0), Vec3::x(), Vec3::y(), n, volume).unwrap()
}

/// Field used with the three-level sample.
pub fn sample_field() -> FieldConfig {
    field(1, 1e-7)
}

pub fn sample_experiment(b: Vec3) -> ExperimentConfig {
    ExperimentConfig::new(b, 0.1, 2.5e25, 2_500_000_000_000_000_000).unwrap()
}

fn random_hermitian<R: Rng>(rng: &mut R, dim: usize, scale: f64, real_diagonal: bool) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        if real_diagonal {
            m[(i, i)] = Complex64::new(rng.gen_range(-scale..scale), 0.0);
        }
        for j in i + 1..dim {
            let z = Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Non-degenerate molecule with 2 to 5 levels, excitations between 1 and 6 eV
/// at least 0.1 eV apart, complex Hermitian electric and magnetic moments.
pub fn random_model<R: Rng>(rng: &mut R) -> MolecularModel {
    let dim = rng.gen_range(2..=5);
    let mut energies = vec![0.0];
    while energies.len() < dim {
        let e = rng.gen_range(1.0..6.0);
        if energies.iter().all(|&x: &f64| (x - e).abs() > 0.1) {
            energies.push(e);
        }
    }
    let levels = energies
        .iter()
        .enumerate()
        .map(|(i, &e)| Level { label: format!("s{i}"), energy: ev(e) })
        .collect();
    let mu = std::array::from_fn(|_| random_hermitian(rng, dim, 3.0 * consts::DEBYE, true));
    let m = std::array::from_fn(|_| random_hermitian(rng, dim, consts::BOHR_MAGNETON, true));
    MolecularModel::new(levels, mu, m, 0, &Tolerances::default()).unwrap()
}

/// Photon energy in [0.2, 8] eV at least 5% away from every transition of
/// the ground state.
pub fn off_resonant_omega<R: Rng>(rng: &mut R, model: &MolecularModel) -> f64 {
    let g = model.energy(model.ground_index());
    loop {
        let hw = ev(rng.gen_range(0.2..8.0));
        let clear = (0..model.dim())
            .filter(|&r| r != model.ground_index())
            .all(|r| (hw - (model.energy(r) - g)).abs() > 0.05 * (model.energy(r) - g));
        if clear {
            return hw / consts::HBAR;
        }
    }
}

/// Least-squares slope of log y against log x.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Logarithmically spaced values from a to b inclusive.
pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (a.ln() + (b.ln() - a.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
