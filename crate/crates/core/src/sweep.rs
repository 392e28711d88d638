//! Parameter sweeps: model levels against the diagonalisation oracle over a
//! coupling grid, and partition-function rows over a temperature grid.
//! Points are evaluated on the rayon pool; results keep input order.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::exact_levels;
use crate::params::OscillatorParams;
use crate::partition::model_partition;
use crate::spectrum::extract_spectrum;

/// Default oracle convergence tolerance (relative drift under basis growth).
pub const DEFAULT_ORACLE_TOL: f64 = 1e-9;

/// `count` log-spaced points from `start` to `stop` inclusive.
pub fn log_grid(start: f64, stop: f64, count: usize) -> Result<Vec<f64>> {
    if count < 1 || !(start > 0.0) || !(start <= stop) {
        return Err(Error::Domain(format!(
            "invalid log grid: start {start}, stop {stop}, count {count}"
        )));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let (a, b) = (start.ln(), stop.ln());
    Ok((0..count)
        .map(|i| {
            if i == count - 1 {
                stop
            } else {
                (a + (b - a) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelRow {
    pub params: OscillatorParams,
    pub model: Vec<f64>,
    pub oracle: Vec<f64>,
    /// `(E_model - E_oracle) / E_oracle` per level.
    pub rel_err: Vec<f64>,
    pub oracle_basis: usize,
    pub oracle_converged: bool,
    pub oracle_drift: f64,
}

impl LevelRow {
    pub fn max_abs_rel_err(&self) -> f64 {
        self.rel_err.iter().fold(0.0, |a, e| a.max(e.abs()))
    }
}

pub fn level_row(params: &OscillatorParams, n_max: usize, truncation: usize, oracle_tol: f64) -> Result<LevelRow> {
    let spectrum = extract_spectrum(params, n_max, truncation)?;
    let oracle = exact_levels(params, n_max + 1, oracle_tol)?;
    let rel_err = spectrum
        .levels
        .iter()
        .zip(&oracle.eigenvalues)
        .map(|(model, exact)| (model - exact) / exact)
        .collect();
    Ok(LevelRow {
        params: *params,
        model: spectrum.levels,
        oracle: oracle.eigenvalues,
        rel_err,
        oracle_basis: oracle.basis_size,
        oracle_converged: oracle.converged,
        oracle_drift: oracle.drift,
    })
}

/// One [`LevelRow`] per coupling, evaluated in parallel.
pub fn level_table(
    m: u32,
    omega: f64,
    couplings: &[f64],
    n_max: usize,
    truncation: usize,
    oracle_tol: f64,
) -> Vec<Result<LevelRow>> {
    couplings
        .par_iter()
        .map(|&g| {
            let p = OscillatorParams::new(omega, g, m)?;
            level_row(&p, n_max, truncation, oracle_tol)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ZRow {
    pub beta: f64,
    pub z: f64,
    pub free_energy: f64,
    pub n_c: f64,
    pub tau_c: f64,
    pub omega_g: f64,
}

pub fn z_table(params: &OscillatorParams, betas: &[f64]) -> Vec<Result<ZRow>> {
    betas
        .par_iter()
        .map(|&beta| {
            let z = model_partition(params, beta)?;
            Ok(ZRow {
                beta,
                z: z.z_value,
                free_energy: z.free_energy,
                n_c: z.thermal.n_c,
                tau_c: z.thermal.tau_c,
                omega_g: z.thermal.omega_g_beta,
            })
        })
        .collect()
}
