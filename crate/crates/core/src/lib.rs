pub mod error;
pub mod params;
pub mod quadrature;
pub mod series;

pub use error::{Error, Result};
pub use params::OscillatorParams;
pub mod frequency;
pub mod roots;
pub mod partition;
pub mod spectrum;
pub mod oracle;
pub mod report;
pub mod sweep;
pub mod validation;
