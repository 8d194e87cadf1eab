//! Field sweeps for the three regimes, with spatial and disorder averaging.
//!
//! `C(r)` is the mean of `C(i, i + r)` over the non-wrapping pairs
//! `i = 0..N-r` of a chain. For random fields every disorder sample gives one
//! spatial mean per `(h, r)`; the reported value is the mean over samples and
//! the error is the standard error of those per-sample means. Each sample's
//! field is drawn once and held fixed across the whole `h` grid.

mod emit;

pub use emit::{emit, plot_script, write_csv, write_trace_csv};

use rayon::prelude::*;
use serde::Serialize;

use crate::correlators::mixture_two_site_state;
use crate::entangle::{assemble_rho, concurrence};
use crate::error::{Error, Result};
use crate::fermion::{thermal_g_matrix, uniform_g_matrix, ChainSpectra, Contractions};
use crate::model::{Boundary, ChainSpec, Config, DisorderSpec, Regime, SweepSpec};
use crate::randfield::sample_field;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One `(h, r)` point of a sweep, in CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub regime: Regime,
    pub q: Option<f64>,
    pub a: Option<f64>,
    pub kt: f64,
    pub h: f64,
    pub r: usize,
    pub mean_concurrence: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub n_pairs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub master_seed: Option<u64>,
    pub n_sites: usize,
    pub boundary: Boundary,
    pub version: String,
    /// Ground states whose sector needed a parity fix-up (random sweeps).
    pub parity_fixups: u64,
}

impl SweepResult {
    fn new(
        rows: Vec<SweepRow>,
        chain: &ChainSpec,
        master_seed: Option<u64>,
        parity_fixups: u64,
    ) -> Self {
        SweepResult {
            rows,
            master_seed,
            n_sites: chain.n_sites,
            boundary: chain.boundary,
            version: VERSION.to_string(),
            parity_fixups,
        }
    }

    pub fn regime(&self) -> Option<Regime> {
        self.rows.first().map(|row| row.regime)
    }

    /// Rows of separation `r`, in grid order.
    pub fn curve(&self, r: usize) -> Vec<&SweepRow> {
        self.rows.iter().filter(|row| row.r == r).collect()
    }

    pub fn at(&self, h: f64, r: usize) -> Option<&SweepRow> {
        self.rows.iter().find(|row| row.r == r && row.h == h)
    }
}

/// Concurrence of `(i, i + r)` for every `r <= r_max`, given contractions.
fn pair_concurrences<G: Contractions + ?Sized>(g: &G, i: usize, r_max: usize) -> Result<Vec<f64>> {
    (1..=r_max)
        .map(|r| {
            let state = crate::correlators::two_site_state(g, i, i + r)?;
            Ok(concurrence(&assemble_rho(&state)?))
        })
        .collect()
}

/// Spatial means over non-wrapping pairs, indexed by `r - 1`.
fn spatial_means<G: Contractions + ?Sized>(g: &G, r_max: usize) -> Result<Vec<f64>> {
    let n = g.n_sites();
    (1..=r_max)
        .map(|r| {
            let mut sum = 0.0;
            for i in 0..n - r {
                let state = crate::correlators::two_site_state(g, i, i + r)?;
                sum += concurrence(&assemble_rho(&state)?);
            }
            Ok(sum / (n - r) as f64)
        })
        .collect()
}

fn check_inputs(chain: &ChainSpec, sweep: &SweepSpec) -> Result<()> {
    chain.validate()?;
    sweep.validate(chain)
}

#[allow(clippy::too_many_arguments)]
fn deterministic_rows(
    regime: Regime,
    qa: (Option<f64>, Option<f64>),
    kt: f64,
    h: f64,
    values: &[f64],
    n_pairs: impl Fn(usize) -> usize,
    rows: &mut Vec<SweepRow>,
) {
    for (k, &c) in values.iter().enumerate() {
        let r = k + 1;
        rows.push(SweepRow {
            regime,
            q: qa.0,
            a: qa.1,
            kt,
            h,
            r,
            mean_concurrence: c,
            std_error: 0.0,
            n_samples: 1,
            n_pairs: n_pairs(r),
        });
    }
}

/// Clean chain, ground state.
///
/// With `sweep.finite_chain` unset this uses the thermodynamic-limit closed
/// form on a window of `r_max + 1` sites; translation invariance makes one
/// pair per `r` sufficient. Otherwise the finite chain is diagonalized.
pub fn run_uniform_zero_t(chain: &ChainSpec, sweep: &SweepSpec) -> Result<SweepResult> {
    check_inputs(chain, sweep)?;
    let regime = Regime::UniformZeroT;
    let mut rows = Vec::new();
    if sweep.finite_chain {
        let curves = finite_ground_curves(chain, &vec![0.0; chain.n_sites], sweep)?;
        for (h, values) in sweep.h_grid.iter().zip(curves.means.chunks(sweep.r_max)) {
            deterministic_rows(
                regime,
                (None, None),
                0.0,
                *h,
                values,
                |r| chain.n_sites - r,
                &mut rows,
            );
        }
        return Ok(SweepResult::new(rows, chain, None, curves.fixups));
    }
    for &h in &sweep.h_grid {
        let g = uniform_g_matrix(h, chain.coupling, sweep.r_max)?;
        let values = pair_concurrences(&g, 0, sweep.r_max)?;
        deterministic_rows(regime, (None, None), 0.0, h, &values, |_| 1, &mut rows);
    }
    Ok(SweepResult::new(rows, chain, None, 0))
}

/// Clean chain at `chain.temperature > 0`, thermodynamic limit by default.
pub fn run_uniform_finite_t(chain: &ChainSpec, sweep: &SweepSpec) -> Result<SweepResult> {
    check_inputs(chain, sweep)?;
    let kt = chain.temperature;
    if !(kt > 0.0) {
        return Err(Error::Config(format!(
            "uniform_finite_t needs kT > 0, got {kt}"
        )));
    }
    let regime = Regime::UniformFiniteT;
    let mut rows = Vec::new();
    if sweep.finite_chain {
        let n = chain.n_sites;
        let spectra = ChainSpectra::new(chain, &vec![0.0; n])?;
        for &h in &sweep.h_grid {
            let mix = spectra.thermal_mixture(h, kt)?;
            let values = (1..=sweep.r_max)
                .map(|r| {
                    let mut sum = 0.0;
                    for i in 0..n - r {
                        sum +=
                            concurrence(&assemble_rho(&mixture_two_site_state(&mix, i, i + r)?)?);
                    }
                    Ok(sum / (n - r) as f64)
                })
                .collect::<Result<Vec<f64>>>()?;
            deterministic_rows(regime, (None, None), kt, h, &values, |r| n - r, &mut rows);
        }
        return Ok(SweepResult::new(rows, chain, None, 0));
    }
    for &h in &sweep.h_grid {
        let g = thermal_g_matrix(h, chain.coupling, kt, sweep.r_max)?;
        let values = pair_concurrences(&g, 0, sweep.r_max)?;
        deterministic_rows(regime, (None, None), kt, h, &values, |_| 1, &mut rows);
    }
    Ok(SweepResult::new(rows, chain, None, 0))
}

/// Spatial means of one field realization over the whole grid, laid out as
/// `means[h_index * r_max + (r - 1)]`.
struct Curves {
    means: Vec<f64>,
    fixups: u64,
}

fn finite_ground_curves(chain: &ChainSpec, field: &[f64], sweep: &SweepSpec) -> Result<Curves> {
    let spectra = ChainSpectra::new(chain, field)?;
    let mut means = Vec::with_capacity(sweep.h_grid.len() * sweep.r_max);
    let mut fixups = 0;
    for &h in &sweep.h_grid {
        let state = spectra.ground_state(h);
        if !state.self_consistent {
            fixups += 1;
        }
        let band = spectra.g_band(&state, sweep.r_max);
        means.extend(spatial_means(&band, sweep.r_max)?);
    }
    Ok(Curves { means, fixups })
}

/// Random fields at zero temperature, averaged over `disorder.n_samples`
/// independent realizations. Samples are processed on the ambient rayon
/// pool; results are reduced in sample order so the output does not depend
/// on the number of workers.
pub fn run_random_zero_t(
    chain: &ChainSpec,
    disorder: &DisorderSpec,
    sweep: &SweepSpec,
) -> Result<SweepResult> {
    check_inputs(chain, sweep)?;
    disorder.validate()?;
    if chain.temperature != 0.0 {
        return Err(Error::Config(
            "random_zero_t is a ground-state regime".to_string(),
        ));
    }
    let regime = Regime::RandomZeroT;
    let qa = (Some(disorder.q), Some(disorder.scale_a));
    let n = chain.n_sites;
    let r_max = sweep.r_max;
    let mut rows = Vec::with_capacity(sweep.h_grid.len() * r_max);

    if disorder.scale_a == 0.0 {
        // Every realization is the clean chain.
        let curves = finite_ground_curves(chain, &vec![0.0; n], sweep)?;
        for (h, values) in sweep.h_grid.iter().zip(curves.means.chunks(r_max)) {
            deterministic_rows(regime, qa, 0.0, *h, values, |r| n - r, &mut rows);
        }
        return Ok(SweepResult::new(
            rows,
            chain,
            Some(disorder.master_seed),
            curves.fixups,
        ));
    }
    if disorder.n_samples < 2 {
        return Err(Error::Config(
            "a random ensemble needs at least two samples for an error bar".to_string(),
        ));
    }

    let per_sample: Vec<Curves> = (0..disorder.n_samples)
        .into_par_iter()
        .map(|index| {
            let field = sample_field(disorder, n, index)?;
            finite_ground_curves(chain, &field.values, sweep)
        })
        .collect::<Result<Vec<_>>>()?;

    let n_samples = per_sample.len();
    let fixups = per_sample.iter().map(|c| c.fixups).sum();
    let mut column = vec![0.0; n_samples];
    for (hk, &h) in sweep.h_grid.iter().enumerate() {
        for r in 1..=r_max {
            let slot = hk * r_max + (r - 1);
            for (x, curves) in column.iter_mut().zip(&per_sample) {
                *x = curves.means[slot];
            }
            let (mean, std_error) = mean_and_std_error(&mut column);
            rows.push(SweepRow {
                regime,
                q: qa.0,
                a: qa.1,
                kt: 0.0,
                h,
                r,
                mean_concurrence: mean,
                std_error,
                n_samples: n_samples as u64,
                n_pairs: n - r,
            });
        }
    }
    Ok(SweepResult::new(
        rows,
        chain,
        Some(disorder.master_seed),
        fixups,
    ))
}

/// Sum by recursive halving; the association order depends only on the
/// length of the slice.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 16;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let (left, right) = values.split_at(values.len() / 2);
    pairwise_sum(left) + pairwise_sum(right)
}

/// Sample mean and standard error of the mean; `values` is overwritten
/// with the deviations.
fn mean_and_std_error(values: &mut [f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = pairwise_sum(values) / n;
    for x in values.iter_mut() {
        *x = (*x - mean).powi(2);
    }
    let var = pairwise_sum(values) / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Dispatches a validated configuration to its regime.
pub fn run(config: &Config) -> Result<SweepResult> {
    let config = config.clone().validate()?;
    match config.sweep.regime {
        Regime::UniformZeroT => run_uniform_zero_t(&config.chain, &config.sweep),
        Regime::UniformFiniteT => run_uniform_finite_t(&config.chain, &config.sweep),
        Regime::RandomZeroT => {
            let disorder = config.disorder.as_ref().expect("validated");
            run_random_zero_t(&config.chain, disorder, &config.sweep)
        }
    }
}

/// Maximum over the `h` grid of `C(r)` for one member of a family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub control: f64,
    pub r: usize,
    pub max_concurrence: f64,
    pub argmax_h: f64,
    pub std_error: f64,
}

/// Grid maximum of `C(r)` for each `(control value, result)` in a family of
/// sweeps that differ only in `a` or `kT`. No interpolation between grid
/// points; ties go to the smallest `h`.
pub fn max_concurrence_trace(family: &[(f64, &SweepResult)], r: usize) -> Result<Vec<TracePoint>> {
    let Some((_, first)) = family.first() else {
        return Err(Error::InconsistentFamily("empty family".to_string()));
    };
    let grid: Vec<f64> = first.curve(r).iter().map(|row| row.h).collect();
    if grid.is_empty() {
        return Err(Error::InconsistentFamily(format!("no rows with r = {r}")));
    }
    let regime = first.regime();
    let q = first.rows[0].q;
    family
        .iter()
        .map(|&(control, result)| {
            let curve = result.curve(r);
            // A temperature family may start from the ground state at kT = 0.
            let random = |r: Option<Regime>| r == Some(Regime::RandomZeroT);
            if random(result.regime()) != random(regime) {
                return Err(Error::InconsistentFamily(
                    "random and clean sweeps mixed".to_string(),
                ));
            }
            if curve.first().map(|row| row.q) != Some(q) {
                return Err(Error::InconsistentFamily("q differs".to_string()));
            }
            if curve.len() != grid.len() || curve.iter().zip(&grid).any(|(row, h)| row.h != *h) {
                return Err(Error::InconsistentFamily("h grids differ".to_string()));
            }
            let best = curve
                .iter()
                .fold(None::<&&SweepRow>, |best, row| match best {
                    Some(b) if b.mean_concurrence >= row.mean_concurrence => Some(b),
                    _ => Some(row),
                })
                .expect("non-empty curve");
            Ok(TracePoint {
                control,
                r,
                max_concurrence: best.mean_concurrence,
                argmax_h: best.h,
                std_error: best.std_error,
            })
        })
        .collect()
}
