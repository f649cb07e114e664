//! Brute-force checks in a truncated two-mode Fock space.
//!
//! Nothing here uses the normal-mode solution: Hamiltonians are assembled
//! from ladder-operator matrix elements, spectra come from direct
//! diagonalization, dynamics from propagating Fock states, thermodynamics
//! from explicit level sums and the physical spectrum from a plain 2-D
//! trapezoid rule.

mod eigen;
mod hamiltonian;
mod propagate;
mod quadrature;
mod thermo;

pub use eigen::{
    converged_spectrum, dense_eigenvalues, lowest_eigenvalues, polariton_gaps, BandCholesky, BandMatrix,
    ConvergedLevel, LanczosConfig,
};
pub use hamiltonian::{build_hamiltonian, FockTruncation, Hamiltonian, Representation};
pub use propagate::{
    bessel_j_sequence, ChebyshevPropagator, DensePropagator, FieldCoefficients, Propagator,
};
pub use quadrature::{
    correlation_grid, propagated_correlation_grid, trapezoid_spectrum, trapezoid_spectrum_refined, TrapezoidSpectrum};
pub use thermo::{ladder_thermo, LadderThermo};
