use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    exact_ground_state, exact_pair_concurrence, exact_thermal_state, exact_two_site_state,
};
use crate::error::Result;
use crate::fermion::ChainSpectra;
use crate::model::{Boundary, ChainSpec, DisorderSpec};
use crate::pipeline::ChainState;
use crate::randfield::sample_field;

/// The grid of random instances compared against exact diagonalization.
#[derive(Debug, Clone)]
pub struct CheckOptions {
    pub instances: usize,
    pub seed: u64,
    pub sizes: Vec<usize>,
    pub temperatures: Vec<f64>,
    pub qs: Vec<f64>,
    pub scales: Vec<f64>,
    /// Uniform fields are drawn from `[-h_span, h_span]`.
    pub h_span: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            instances: 216,
            seed: 2024,
            sizes: vec![4, 6, 8, 10],
            temperatures: vec![0.0, 0.1, 0.5],
            qs: vec![1.0, 2.0],
            scales: vec![0.0, 0.3, 1.0],
            h_span: 1.5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct InstanceReport {
    pub n_sites: usize,
    pub boundary: Boundary,
    pub kt: f64,
    pub q: f64,
    pub a: f64,
    pub h: f64,
    pub pairs: usize,
    /// Largest |pipeline - exact| over pairs, for the concurrence.
    pub concurrence_error: f64,
    /// Same, over the four correlators.
    pub correlator_error: f64,
    /// Ground-state energy difference; `None` at finite temperature.
    pub energy_error: Option<f64>,
}

#[derive(Debug, Clone, Default)]
pub struct CheckReport {
    pub instances: Vec<InstanceReport>,
    /// Draws discarded because the exact ground state was degenerate.
    pub resampled: usize,
}

impl CheckReport {
    pub fn max_concurrence_error(&self) -> f64 {
        self.instances
            .iter()
            .map(|i| i.concurrence_error)
            .fold(0.0, f64::max)
    }

    pub fn max_correlator_error(&self) -> f64 {
        self.instances
            .iter()
            .map(|i| i.correlator_error)
            .fold(0.0, f64::max)
    }

    pub fn max_energy_error(&self) -> f64 {
        self.instances
            .iter()
            .filter_map(|i| i.energy_error)
            .fold(0.0, f64::max)
    }
}

/// Runs the free-fermion pipeline and exact diagonalization side by side on
/// `opts.instances` random chains, cycling through every combination of
/// size, boundary, temperature, `q` and `a`. Every pair `(i, i + r)` with
/// `r < N/2` and `i + r < N` is compared.
pub fn equivalence_check(opts: &CheckOptions) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut report = CheckReport::default();
    let mut draw: u64 = 0;
    let boundaries = [Boundary::Periodic, Boundary::Open];
    for idx in 0..opts.instances {
        let mut k = idx;
        let mut pick = |len: usize| {
            let v = k % len;
            k /= len;
            v
        };
        let n = opts.sizes[pick(opts.sizes.len())];
        let boundary = boundaries[pick(2)];
        let kt = opts.temperatures[pick(opts.temperatures.len())];
        let q = opts.qs[pick(opts.qs.len())];
        let a = opts.scales[pick(opts.scales.len())];
        loop {
            let h = rng.random_range(-opts.h_span..=opts.h_span);
            let disorder = DisorderSpec::new(q, a, u64::MAX, opts.seed);
            let field = sample_field(&disorder, n, draw)?.values;
            draw += 1;
            let chain = ChainSpec::new(n)
                .with_field(h)
                .with_temperature(kt)
                .with_boundary(boundary);
            let exact = if kt == 0.0 {
                exact_ground_state(&chain, &field)?
            } else {
                exact_thermal_state(&chain, &field, kt)?
            };
            if exact.degenerate {
                report.resampled += 1;
                continue;
            }
            let state = ChainState::new(&chain, &field)?;
            let mut concurrence_error: f64 = 0.0;
            let mut correlator_error: f64 = 0.0;
            let mut pairs = 0;
            for r in 1..n.div_ceil(2) {
                for i in 0..n - r {
                    let j = i + r;
                    let ours = state.two_site_state(i, j)?;
                    let theirs = exact_two_site_state(&exact, i, j)?;
                    for (x, y) in [
                        (ours.sz_i, theirs.sz_i),
                        (ours.sz_j, theirs.sz_j),
                        (ours.sxsx, theirs.sxsx),
                        (ours.szsz, theirs.szsz),
                    ] {
                        correlator_error = correlator_error.max((x - y).abs());
                    }
                    let c_ours = state.pair_concurrence(i, j)?;
                    let c_exact = exact_pair_concurrence(&exact, i, j)?;
                    concurrence_error = concurrence_error.max((c_ours - c_exact).abs());
                    pairs += 1;
                }
            }
            let energy_error = if kt == 0.0 {
                let spectra = ChainSpectra::new(&chain, &field)?;
                let gs = spectra.ground_state(h);
                Some((spectra.spin_energy(&gs, h) - exact.ground_energy).abs())
            } else {
                None
            };
            report.instances.push(InstanceReport {
                n_sites: n,
                boundary,
                kt,
                q,
                a,
                h,
                pairs,
                concurrence_error,
                correlator_error,
                energy_error,
            });
            break;
        }
    }
    Ok(report)
}
