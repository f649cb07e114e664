//! Exact solution of the anisotropic Hopfield model.
//!
//! Two bosonic modes, a field mode `a` at `omega_c` and a matter mode `b` at
//! `omega_b`, coupled through co-rotating (`g1`) and counter-rotating (`g2`)
//! terms plus a diamagnetic self-interaction `D (a + a†)²`. Units are
//! `ħ = k_B = 1`.
//!
//! * [`model`]: parameters, polariton frequencies, energy ladders, criticality.
//! * [`dynamics`]: Heisenberg-picture field operator and two-time correlations.
//! * [`spectrum`]: filtered time-dependent physical spectrum, closed-form
//!   Lorentzian limits and vacuum-Rabi-splitting analysis.
//! * [`thermometry`]: partition function, heat capacity, quantum Fisher
//!   information and the critical (trigonometric) continuation.
//! * [`oracle`]: truncated Fock-space brute force used to validate all of the
//!   above independently.

pub mod dynamics;
pub mod error;
pub mod model;
pub mod oracle;
pub mod spectrum;
pub mod thermometry;

pub use dynamics::{autocorrelation, mu_coefficients, FockProduct, MuMatrix};
pub use error::{HopfieldError, Result};
pub use model::{
    critical_coupling, critical_diamagnetic, energy_level, polariton_frequencies,
    rwa_frequencies, DiamagneticRule, ModelParams, Phase, PolaritonSpectrum,
};
pub use num_complex::Complex64 as C64;
pub use spectrum::{FilterConfig, LorentzianComponent, SpectrumMethod, SpectrumResult};
pub use thermometry::{BranchFlag, ThermoPoint};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
