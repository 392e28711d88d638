use serde::Serialize;

use crate::error::{Error, Result};

/// Physical inputs of `H = -1/2 d^2/dx^2 + 1/2 omega^2 x^2 + g x^(2m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillatorParams {
    pub omega: f64,
    pub g: f64,
    pub m: u32,
}

impl OscillatorParams {
    pub fn new(omega: f64, g: f64, m: u32) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParams(format!("omega must be positive, got {omega}")));
        }
        if !(g.is_finite() && g >= 0.0) {
            return Err(Error::InvalidParams(format!("g must be non-negative, got {g}")));
        }
        if m < 2 {
            return Err(Error::InvalidParams(format!("m must be at least 2, got {m}")));
        }
        Ok(Self { omega, g, m })
    }

    /// `V(x) = 1/2 omega^2 x^2 + g x^(2m)`
    pub fn potential(&self, x: f64) -> f64 {
        let x2 = x * x;
        0.5 * self.omega * self.omega * x2 + self.g * x2.powi(self.m as i32)
    }

    /// Human-readable name of the anharmonicity (quartic, sextic, octic).
    pub fn kind(&self) -> &'static str {
        match self.m {
            2 => "quartic",
            3 => "sextic",
            4 => "octic",
            _ => "anharmonic",
        }
    }
}
