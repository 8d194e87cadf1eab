//! Finite chain -> contraction matrix -> correlators -> concurrence.

use crate::correlators::{mixture_two_site_state, two_site_state, TwoSiteState};
use crate::entangle::{assemble_rho, concurrence};
use crate::error::Result;
use crate::fermion::{ChainSpectra, GMatrix, ThermalMixture};
use crate::model::ChainSpec;

/// Free-fermion state of a finite chain at `chain.temperature`.
#[derive(Debug, Clone)]
pub enum ChainState {
    Ground(GMatrix),
    Thermal(ThermalMixture),
}

impl ChainState {
    pub fn new(chain: &ChainSpec, field: &[f64]) -> Result<Self> {
        chain.validate()?;
        let spectra = ChainSpectra::new(chain, field)?;
        let h = chain.uniform_field;
        Ok(if chain.temperature == 0.0 {
            ChainState::Ground(spectra.g_matrix(&spectra.ground_state(h)))
        } else {
            ChainState::Thermal(spectra.thermal_mixture(h, chain.temperature)?)
        })
    }

    pub fn two_site_state(&self, i: usize, j: usize) -> Result<TwoSiteState> {
        match self {
            ChainState::Ground(g) => two_site_state(g, i, j),
            ChainState::Thermal(mix) => mixture_two_site_state(mix, i, j),
        }
    }

    pub fn pair_concurrence(&self, i: usize, j: usize) -> Result<f64> {
        state_concurrence(&self.two_site_state(i, j)?)
    }
}

/// Concurrence of the X-shaped pair matrix built from `state`.
pub fn state_concurrence(state: &TwoSiteState) -> Result<f64> {
    Ok(concurrence(&assemble_rho(state)?))
}
