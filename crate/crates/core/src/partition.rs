//! Closed-form model partition function and ground-state energy.
//!
//! `Z(beta) = C^n_c / (2 sinh(beta omega_g / 2))` with
//! `C = sqrt(omega_g / (pi coth(beta omega_g / 2))) I_g(beta)`, evaluated in
//! the log domain so large `beta` never overflows.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::Result;
use crate::frequency::{solve_omega_bar_frequency, solve_thermal, ThermalSolution};
use crate::params::OscillatorParams;
use crate::quadrature::{i_g_beta, potential_integral_bar};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PartitionEvaluation {
    pub beta: f64,
    pub z_value: f64,
    pub ln_z: f64,
    /// `-ln Z / beta`
    pub free_energy: f64,
    pub thermal: ThermalSolution,
    pub c_beta: f64,
    pub i_g: f64,
}

impl PartitionEvaluation {
    /// `Z` recomputed from the stored factors (direct, not log domain).
    pub fn recompute_z(&self) -> f64 {
        let half = 0.5 * self.beta * self.thermal.omega_g_beta;
        self.c_beta.powf(self.thermal.n_c) / (2.0 * half.sinh())
    }
}

/// Zero-temperature quantities entering the ground-state energy.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GroundState {
    pub omega_bar: f64,
    /// `Ī_g = ∫ exp(-(2 / omega_bar) V) dx`
    pub i_bar: f64,
    /// `ln(sqrt(omega_bar / pi) Ī_g)`
    pub ln_norm: f64,
    pub e0: f64,
}

impl GroundState {
    pub fn from_omega_bar(params: &OscillatorParams, omega_bar: f64) -> Result<Self> {
        let i_bar = potential_integral_bar(params, omega_bar)?;
        let ln_norm = if params.g == 0.0 {
            // sqrt(omega / pi) * sqrt(pi / omega) = 1 exactly
            0.0
        } else {
            0.5 * (omega_bar / PI).ln() + i_bar.ln()
        };
        Ok(Self {
            omega_bar,
            i_bar,
            ln_norm,
            e0: 0.5 * omega_bar * (1.0 - ln_norm),
        })
    }
}

pub fn model_partition(params: &OscillatorParams, beta: f64) -> Result<PartitionEvaluation> {
    let thermal = solve_thermal(params, beta)?;
    let omega_g = thermal.omega_g_beta;
    let i_g = i_g_beta(params, thermal.tau_c)?;
    let x = beta * omega_g;
    let half = 0.5 * x;
    let ln_c = if params.g == 0.0 {
        0.0
    } else {
        0.5 * (omega_g * half.tanh() / PI).ln() + i_g.ln()
    };
    // 2 sinh(x/2) = exp(x/2) (1 - exp(-x))
    let ln_z = thermal.n_c * ln_c - half - (-(-x).exp()).ln_1p();
    Ok(PartitionEvaluation {
        beta,
        z_value: ln_z.exp(),
        ln_z,
        free_energy: -ln_z / beta,
        thermal,
        c_beta: ln_c.exp(),
        i_g,
    })
}

pub fn ground_state(params: &OscillatorParams) -> Result<GroundState> {
    let omega_bar = solve_omega_bar_frequency(params)?;
    GroundState::from_omega_bar(params, omega_bar)
}

/// `E_0 = (omega_bar / 2) [1 - ln(sqrt(omega_bar / pi) Ī_g)]`
pub fn ground_energy(params: &OscillatorParams) -> Result<f64> {
    ground_state(params).map(|gs| gs.e0)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FreeEnergyPoint {
    pub beta: f64,
    pub free_energy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FreeEnergyCurve {
    pub points: Vec<FreeEnergyPoint>,
    pub e0: f64,
    /// Whether `|F(beta) - E_0|` shrinks monotonically over the points with
    /// `beta omega_bar > 5` (in the order given).
    pub monotone_tail: bool,
}

pub fn free_energy_curve(params: &OscillatorParams, betas: &[f64]) -> Result<FreeEnergyCurve> {
    let gs = ground_state(params)?;
    let points = betas
        .iter()
        .map(|&beta| {
            model_partition(params, beta).map(|z| FreeEnergyPoint {
                beta,
                free_energy: z.free_energy,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let tail: Vec<f64> = points
        .iter()
        .filter(|p| p.beta * gs.omega_bar > 5.0)
        .map(|p| (p.free_energy - gs.e0).abs())
        .collect();
    let monotone_tail = tail.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9) + 1e-13);
    Ok(FreeEnergyCurve {
        points,
        e0: gs.e0,
        monotone_tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_partition_function() {
        for (w, beta) in [(1.0, 0.1), (0.5, 3.0), (2.0, 20.0)] {
            let p = OscillatorParams::new(w, 0.0, 2).unwrap();
            let z = model_partition(&p, beta).unwrap();
            let exact = 1.0 / (2.0 * (0.5 * beta * w).sinh());
            assert!((z.z_value - exact).abs() <= 1e-12 * exact);
            assert!((z.c_beta - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn harmonic_ground_energy() {
        let p = OscillatorParams::new(1.3, 0.0, 4).unwrap();
        assert!((ground_energy(&p).unwrap() - 0.65).abs() < 1e-15);
    }

    #[test]
    fn stored_fields_reproduce_z() {
        let p = OscillatorParams::new(1.0, 1.0, 2).unwrap();
        let z = model_partition(&p, 2.0).unwrap();
        assert!((z.recompute_z() - z.z_value).abs() <= 1e-13 * z.z_value);
        assert!(z.z_value > 0.0);
    }

    #[test]
    fn large_beta_tends_to_ground_energy() {
        let p = OscillatorParams::new(1.0, 10.0, 3).unwrap();
        let e0 = ground_energy(&p).unwrap();
        let z = model_partition(&p, 50.0).unwrap();
        assert!((z.free_energy - e0).abs() < 1e-5);
        let curve = free_energy_curve(&p, &[5.0, 10.0, 20.0, 40.0, 80.0]).unwrap();
        assert!(curve.monotone_tail);
    }
}
