//! Brute-force exact diagonalization of small chains.
//!
//! The spin Hamiltonian is built directly in the `sz` product basis, with no
//! fermions involved, and diagonalized block by block in the number of up
//! spins (which it conserves). Pair density matrices come from explicit
//! partial traces. This is the reference the free-fermion pipeline is
//! checked against.

mod check;
mod eigen;

pub use check::{equivalence_check, CheckOptions, CheckReport, InstanceReport};
pub use eigen::{symmetric_eigen, DenseEigen};

use crate::correlators::TwoSiteState;
use crate::entangle::{concurrence_general, PairDensityMatrix};
use crate::error::{Error, Result};
use crate::model::{Boundary, ChainSpec};

use nalgebra::Matrix4;

pub const MAX_SITES: usize = 12;

/// Two lowest levels closer than this mark the ground state degenerate.
pub const DEGENERACY_GAP: f64 = 1e-10;

/// A mixed state `sum_t w_t |psi_t><psi_t|` over eigenvectors that each live
/// in one magnetization block.
#[derive(Debug, Clone)]
pub struct DenseState {
    pub n_sites: usize,
    pub terms: Vec<StateTerm>,
    /// Lowest eigenvalue of the full Hamiltonian.
    pub ground_energy: f64,
    /// Distance from the lowest to the second-lowest eigenvalue.
    pub gap: f64,
    pub degenerate: bool,
    blocks: Vec<Vec<u32>>,
    position: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct StateTerm {
    pub weight: f64,
    pub block: usize,
    pub amplitudes: Vec<f64>,
}

impl DenseState {
    pub fn dimension(&self) -> usize {
        1 << self.n_sites
    }

    /// `sum_t w_t <psi_t|psi_t>`.
    pub fn total_probability(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.weight * t.amplitudes.iter().map(|a| a * a).sum::<f64>())
            .sum()
    }

    /// Partial trace onto sites `(i, j)` in the basis `(uu, ud, du, dd)`.
    pub fn pair_matrix(&self, i: usize, j: usize) -> Result<PairDensityMatrix> {
        for s in [i, j] {
            if s >= self.n_sites {
                return Err(Error::SiteIndex {
                    index: s,
                    n_sites: self.n_sites,
                });
            }
        }
        if i == j {
            return Err(Error::SitePair { i, j });
        }
        let (bit_i, bit_j) = (1u32 << i, 1u32 << j);
        let slot = |c: u32| {
            let up_i = (c & bit_i != 0) as usize;
            let up_j = (c & bit_j != 0) as usize;
            (1 - up_i) * 2 + (1 - up_j)
        };
        let mut rho = Matrix4::zeros();
        for term in &self.terms {
            let configs = &self.blocks[term.block];
            for (idx, &c) in configs.iter().enumerate() {
                let amp = term.amplitudes[idx];
                if amp == 0.0 {
                    continue;
                }
                let s = slot(c);
                rho[(s, s)] += term.weight * amp * amp;
                if (c & bit_i != 0) != (c & bit_j != 0) {
                    let partner = c ^ bit_i ^ bit_j;
                    let p_idx = self.position[partner as usize] as usize;
                    rho[(s, slot(partner))] += term.weight * amp * term.amplitudes[p_idx];
                }
            }
        }
        Ok(PairDensityMatrix::from_matrix(rho))
    }
}

fn check_inputs(chain: &ChainSpec, field: &[f64]) -> Result<()> {
    chain.validate()?;
    if chain.n_sites > MAX_SITES {
        return Err(Error::TooLarge {
            n_sites: chain.n_sites,
            max: MAX_SITES,
        });
    }
    if field.len() != chain.n_sites {
        return Err(Error::LengthMismatch {
            expected: chain.n_sites,
            got: field.len(),
        });
    }
    Ok(())
}

struct Diagonalized {
    blocks: Vec<Vec<u32>>,
    position: Vec<u32>,
    spectra: Vec<DenseEigen>,
}

/// `H = -J/4 sum (sx sx + sy sy) - 1/2 sum (h + h_j) sz`, one block per
/// number of up spins.
fn diagonalize_blocks(chain: &ChainSpec, field: &[f64]) -> Result<Diagonalized> {
    let n = chain.n_sites;
    let dim = 1usize << n;
    let mut blocks: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
    let mut position = vec![0u32; dim];
    for c in 0..dim as u32 {
        let b = &mut blocks[c.count_ones() as usize];
        position[c as usize] = b.len() as u32;
        b.push(c);
    }
    let bonds: Vec<(usize, usize)> = match chain.boundary {
        Boundary::Open => (0..n - 1).map(|j| (j, j + 1)).collect(),
        Boundary::Periodic => (0..n).map(|j| (j, (j + 1) % n)).collect(),
    };
    // (sx sx + sy sy) swaps an anti-aligned pair with amplitude 2.
    let flip = -0.5 * chain.coupling;
    let spectra = blocks
        .iter()
        .map(|configs| {
            let m = configs.len();
            let mut h = vec![0.0; m * m];
            for (col, &c) in configs.iter().enumerate() {
                let zeeman: f64 = (0..n)
                    .map(|j| {
                        let s = if c & (1 << j) != 0 { 1.0 } else { -1.0 };
                        -0.5 * (chain.uniform_field + field[j]) * s
                    })
                    .sum();
                h[col * m + col] += zeeman;
                for &(a, b) in &bonds {
                    if (c >> a) & 1 != (c >> b) & 1 {
                        let row = position[(c ^ (1 << a) ^ (1 << b)) as usize] as usize;
                        h[row * m + col] += flip;
                    }
                }
            }
            symmetric_eigen(&h, m)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Diagonalized {
        blocks,
        position,
        spectra,
    })
}

fn lowest_two(d: &Diagonalized) -> (f64, f64, usize) {
    let mut all: Vec<(f64, usize)> = d
        .spectra
        .iter()
        .enumerate()
        .flat_map(|(b, s)| s.values.iter().map(move |&e| (e, b)))
        .collect();
    all.sort_by(|x, y| x.0.total_cmp(&y.0));
    (all[0].0, all[1].0, all[0].1)
}

/// Lowest eigenvector of the full `2^N` Hamiltonian.
pub fn exact_ground_state(chain: &ChainSpec, field: &[f64]) -> Result<DenseState> {
    check_inputs(chain, field)?;
    let d = diagonalize_blocks(chain, field)?;
    let (e0, e1, block) = lowest_two(&d);
    let amplitudes = d.spectra[block].vector(0);
    Ok(DenseState {
        n_sites: chain.n_sites,
        terms: vec![StateTerm {
            weight: 1.0,
            block,
            amplitudes,
        }],
        ground_energy: e0,
        gap: e1 - e0,
        degenerate: e1 - e0 < DEGENERACY_GAP,
        blocks: d.blocks,
        position: d.position,
    })
}

/// Gibbs state `exp(-H/kT) / Z` from the full spectrum.
pub fn exact_thermal_state(chain: &ChainSpec, field: &[f64], kt: f64) -> Result<DenseState> {
    check_inputs(chain, field)?;
    if !(kt > 0.0) {
        return Err(Error::Config(format!(
            "thermal state needs kT > 0, got {kt}"
        )));
    }
    let beta = 1.0 / kt;
    let d = diagonalize_blocks(chain, field)?;
    let (e0, e1, _) = lowest_two(&d);
    let mut terms = Vec::with_capacity(1 << chain.n_sites);
    for (block, spectrum) in d.spectra.iter().enumerate() {
        for (k, &e) in spectrum.values.iter().enumerate() {
            let weight = (-beta * (e - e0)).exp();
            if weight > 0.0 {
                terms.push(StateTerm {
                    weight,
                    block,
                    amplitudes: spectrum.vector(k),
                });
            }
        }
    }
    let z: f64 = terms.iter().map(|t| t.weight).sum();
    for t in &mut terms {
        t.weight /= z;
    }
    Ok(DenseState {
        n_sites: chain.n_sites,
        terms,
        ground_energy: e0,
        gap: e1 - e0,
        degenerate: false,
        blocks: d.blocks,
        position: d.position,
    })
}

/// Concurrence of the exact pair density matrix, general route.
pub fn exact_pair_concurrence(state: &DenseState, i: usize, j: usize) -> Result<f64> {
    Ok(concurrence_general(&state.pair_matrix(i, j)?))
}

/// The four correlators read off an exact pair density matrix.
pub fn exact_two_site_state(state: &DenseState, i: usize, j: usize) -> Result<TwoSiteState> {
    let m = state.pair_matrix(i, j)?.entries;
    Ok(TwoSiteState {
        site_i: i,
        site_j: j,
        sz_i: m[(0, 0)] + m[(1, 1)] - m[(2, 2)] - m[(3, 3)],
        sz_j: m[(0, 0)] - m[(1, 1)] + m[(2, 2)] - m[(3, 3)],
        sxsx: m[(0, 3)] + m[(1, 2)] + m[(2, 1)] + m[(3, 0)],
        szsz: m[(0, 0)] - m[(1, 1)] - m[(2, 2)] + m[(3, 3)],
        populations: Some([m[(0, 0)], m[(1, 1)], m[(2, 2)], m[(3, 3)]]),
    })
}
