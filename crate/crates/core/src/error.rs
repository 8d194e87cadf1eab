use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("field has {got} values but the chain has {expected} sites")]
    LengthMismatch { expected: usize, got: usize },

    #[error("sample index {index} is out of range for an ensemble of {n_samples} samples")]
    SampleIndex { index: u64, n_samples: u64 },

    #[error("eigensolver did not converge for {0}")]
    Eigen(String),

    #[error("h = {h} sits on the critical point |h| = J; the closed form is undefined there")]
    Critical { h: f64 },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("site {index} is out of range for {n_sites} sites")]
    SiteIndex { index: usize, n_sites: usize },

    #[error("correlator needs two distinct sites i < j, got ({i}, {j})")]
    SitePair { i: usize, j: usize },

    #[error("pair ({i}, {i} + {r}) wraps the periodic seam of a {n_sites}-site chain")]
    WrappingPair { i: usize, r: usize, n_sites: usize },

    #[error("correlator {name} = {value} exceeds unit magnitude beyond rounding")]
    Magnitude { name: &'static str, value: f64 },

    #[error(
        "pair density matrix is not positive semidefinite (minimum eigenvalue {min_eigenvalue})"
    )]
    NotPositive { min_eigenvalue: f64 },

    #[error("exact diagonalization is limited to {max} sites, got {n_sites}")]
    TooLarge { n_sites: usize, max: usize },

    #[error("inconsistent sweep family: {0}")]
    InconsistentFamily(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("config file: {0}")]
    Toml(#[from] toml::de::Error),
}
