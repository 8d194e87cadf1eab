//! Pairwise entanglement of the ferromagnetic isotropic spin-1/2 XY chain.
//!
//! The chain is solved as free fermions: a Jordan-Wigner transformation
//! turns it into a hopping matrix whose eigenvectors give the contraction
//! matrix `G`, every needed spin correlator is a small determinant of `G`,
//! and the two-site density matrix built from them yields the Wootters
//! concurrence. On top of that sit the three sweep regimes (clean chain at
//! zero and finite temperature, random field at zero temperature) with
//! disorder averaging, and an exact-diagonalization oracle for small chains.

pub mod correlators;
pub mod entangle;
pub mod error;
pub mod fermion;
pub mod model;
pub mod oracle;
pub mod pipeline;
pub mod quad;
pub mod randfield;
pub mod sweep;

pub use correlators::{sigma_xx, sigma_z, sigma_zz, two_site_state, TwoSiteState};
pub use entangle::{
    assemble_rho, concurrence, concurrence_general, entanglement_of_formation, PairDensityMatrix,
};
pub use error::{Error, Result};
pub use fermion::{
    build_hopping, diagonalize, ground_state_g_matrix, thermal_g_matrix, uniform_g_matrix,
    ChainSpectra, Contractions, FermionSpectrum, GBand, GMatrix, HoppingMatrix, Parity,
};
pub use model::{
    linspace, Boundary, ChainSpec, Config, DisorderSpec, Regime, SigmaConvention, SweepSpec,
};
pub use randfield::{distribution_variance, sample_field, FieldSample, QGaussian};
pub use sweep::{
    max_concurrence_trace, run, run_random_zero_t, run_uniform_finite_t, run_uniform_zero_t,
    SweepResult, SweepRow, TracePoint,
};
