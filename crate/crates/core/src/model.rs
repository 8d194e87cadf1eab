//! Chain, ensemble and sweep configuration.
//!
//! Every quantity with dimensions of energy (fields, temperature) is measured
//! in units of the coupling `J`. The types deserialize from a TOML file with
//! `[chain]`, `[disorder]` and `[sweep]` sections; call [`Config::validate`]
//! (or the per-section `validate`) before handing them to the pipelines.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Periodic,
    Open,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Periodic => f.write_str("periodic"),
            Boundary::Open => f.write_str("open"),
        }
    }
}

/// Spin-1/2 isotropic XY chain with coupling `J > 0` in a field `h` at
/// temperature `kT` (zero selects the ground state).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpec {
    pub n_sites: usize,
    #[serde(default = "unit_coupling")]
    pub coupling: f64,
    #[serde(default)]
    pub uniform_field: f64,
    #[serde(default)]
    pub temperature: f64,
    #[serde(default)]
    pub boundary: Boundary,
}

fn unit_coupling() -> f64 {
    1.0
}

impl ChainSpec {
    pub fn new(n_sites: usize) -> Self {
        ChainSpec {
            n_sites,
            coupling: 1.0,
            uniform_field: 0.0,
            temperature: 0.0,
            boundary: Boundary::Periodic,
        }
    }

    pub fn with_field(mut self, h: f64) -> Self {
        self.uniform_field = h;
        self
    }

    pub fn with_temperature(mut self, kt: f64) -> Self {
        self.temperature = kt;
        self
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 2 {
            return invalid(format!("n_sites must be at least 2, got {}", self.n_sites));
        }
        if !(self.coupling > 0.0 && self.coupling.is_finite()) {
            return invalid(format!(
                "coupling must be positive and finite (ferromagnetic), got {}",
                self.coupling
            ));
        }
        if !self.uniform_field.is_finite() {
            return invalid(format!(
                "uniform_field must be finite, got {}",
                self.uniform_field
            ));
        }
        // kT = +inf is the infinite-temperature limit and is allowed.
        if !(self.temperature >= 0.0) {
            return invalid(format!(
                "temperature must be non-negative, got {}",
                self.temperature
            ));
        }
        Ok(())
    }
}

/// How `a` is read for the Gaussian member (`q = 1`) of the field family.
///
/// `Literal` takes the `q -> 1` limit of the density as written, which is
/// `exp(-h^2 / a^2)` with standard deviation `a / sqrt(2)`. `Prose` rescales
/// that case so the standard deviation equals `a`. Other `q` are unaffected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SigmaConvention {
    #[default]
    Literal,
    Prose,
}

/// Quenched random-field ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisorderSpec {
    pub q: f64,
    pub scale_a: f64,
    pub n_samples: u64,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default, rename = "gaussian_sigma_convention")]
    pub sigma_convention: SigmaConvention,
}

impl DisorderSpec {
    pub fn new(q: f64, scale_a: f64, n_samples: u64, master_seed: u64) -> Self {
        DisorderSpec {
            q,
            scale_a,
            n_samples,
            master_seed,
            sigma_convention: SigmaConvention::Literal,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q >= 1.0 && self.q < 3.0) {
            return invalid(format!("q must lie in [1, 3), got {}", self.q));
        }
        if !(self.scale_a >= 0.0 && self.scale_a.is_finite()) {
            return invalid(format!(
                "scale_a must be non-negative and finite, got {}",
                self.scale_a
            ));
        }
        if self.n_samples == 0 {
            return invalid("n_samples must be positive".to_string());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    UniformZeroT,
    UniformFiniteT,
    RandomZeroT,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::UniformZeroT => "uniform_zero_t",
            Regime::UniformFiniteT => "uniform_finite_t",
            Regime::RandomZeroT => "random_zero_t",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub regime: Regime,
    pub h_grid: Vec<f64>,
    #[serde(default = "default_r_max")]
    pub r_max: usize,
    /// Uniform regimes only: evaluate on the finite chain of `n_sites` sites
    /// instead of the closed-form thermodynamic limit. Random sweeps always
    /// use the finite chain.
    #[serde(default)]
    pub finite_chain: bool,
}

fn default_r_max() -> usize {
    5
}

impl SweepSpec {
    pub fn new(regime: Regime, h_grid: Vec<f64>) -> Self {
        SweepSpec {
            regime,
            h_grid,
            r_max: 5,
            finite_chain: false,
        }
    }

    pub fn with_r_max(mut self, r_max: usize) -> Self {
        self.r_max = r_max;
        self
    }

    pub fn on_finite_chain(mut self) -> Self {
        self.finite_chain = true;
        self
    }

    /// True when the sweep works with the thermodynamic-limit closed forms.
    pub fn thermodynamic_limit(&self) -> bool {
        self.regime != Regime::RandomZeroT && !self.finite_chain
    }

    pub fn validate(&self, chain: &ChainSpec) -> Result<()> {
        if self.r_max == 0 {
            return invalid("r_max must be positive".to_string());
        }
        if 2 * self.r_max >= chain.n_sites {
            return invalid(format!(
                "r_max = {} must be below n_sites / 2 = {}",
                self.r_max,
                chain.n_sites as f64 / 2.0
            ));
        }
        if self.h_grid.is_empty() {
            return invalid("h_grid is empty".to_string());
        }
        if let Some(h) = self.h_grid.iter().find(|h| !h.is_finite()) {
            return invalid(format!("h_grid contains a non-finite value {h}"));
        }
        if self.h_grid.windows(2).any(|w| w[1] <= w[0]) {
            return invalid("h_grid must be strictly increasing".to_string());
        }
        Ok(())
    }
}

/// `steps` evenly spaced values from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![min],
        _ => {
            let dh = (max - min) / (steps - 1) as f64;
            (0..steps).map(|k| min + dh * k as f64).collect()
        }
    }
}

/// A full run description: the three sections of a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub chain: ChainSpec,
    #[serde(default)]
    pub disorder: Option<DisorderSpec>,
    pub sweep: SweepSpec,
}

impl Config {
    pub fn from_toml_str(text: &str) -> Result<Config> {
        Ok(toml::from_str(text)?)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Config> {
        let text = std::fs::read_to_string(path)?;
        Config::from_toml_str(&text)
    }

    /// Checks every section and the cross-section constraints. Returns the
    /// configuration unchanged when it is usable.
    pub fn validate(self) -> Result<Config> {
        self.chain.validate()?;
        self.sweep.validate(&self.chain)?;
        let kt = self.chain.temperature;
        match self.sweep.regime {
            Regime::UniformZeroT | Regime::RandomZeroT if kt != 0.0 => {
                return invalid(format!(
                    "regime {} is a ground-state regime but temperature = {kt}",
                    self.sweep.regime
                ));
            }
            Regime::UniformFiniteT if kt <= 0.0 => {
                return invalid("regime uniform_finite_t needs temperature > 0".to_string());
            }
            _ => {}
        }
        match (&self.disorder, self.sweep.regime) {
            (Some(d), _) => d.validate()?,
            (None, Regime::RandomZeroT) => {
                return invalid("regime random_zero_t needs a [disorder] section".to_string());
            }
            (None, _) => {}
        }
        if self.sweep.regime == Regime::UniformZeroT && self.sweep.thermodynamic_limit() {
            let j = self.chain.coupling;
            if let Some(h) = self.sweep.h_grid.iter().find(|h| h.abs() == j) {
                return invalid(format!(
                    "h_grid contains the critical point h = {h}; shift it off |h| = J"
                ));
            }
        }
        Ok(self)
    }
}

fn invalid<T>(msg: String) -> Result<T> {
    Err(Error::Config(msg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_config(n: usize, q: f64, a: f64, samples: u64) -> Config {
        Config {
            chain: ChainSpec::new(n),
            disorder: Some(DisorderSpec::new(q, a, samples, 7)),
            sweep: SweepSpec::new(Regime::RandomZeroT, linspace(0.0, 3.0, 7)),
        }
    }

    #[test]
    fn production_setting_is_valid() {
        assert!(random_config(500, 2.0, 0.3, 10_000).validate().is_ok());
    }

    #[test]
    fn minimal_chain_is_valid() {
        let chain = ChainSpec::new(2);
        assert!(chain.validate().is_ok());
    }

    #[test]
    fn q_out_of_range_is_rejected() {
        let err = DisorderSpec::new(3.2, 1.0, 10, 0).validate().unwrap_err();
        assert!(err.to_string().contains("q must lie in [1, 3)"), "{err}");
        assert!(DisorderSpec::new(0.9, 1.0, 10, 0).validate().is_err());
        assert!(DisorderSpec::new(1.0, 1.0, 10, 0).validate().is_ok());
    }

    #[test]
    fn chain_invariants() {
        assert!(ChainSpec::new(1).validate().is_err());
        let mut c = ChainSpec::new(10);
        c.coupling = -1.0;
        assert!(c.validate().is_err());
        let c = ChainSpec::new(10).with_temperature(-0.1);
        assert!(c.validate().is_err());
        let c = ChainSpec::new(10).with_temperature(f64::INFINITY);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn r_max_must_stay_below_half_chain() {
        let mut cfg = random_config(10, 1.0, 0.5, 10);
        cfg.sweep.r_max = 5;
        let err = cfg.clone().validate().unwrap_err();
        assert!(err.to_string().contains("r_max"), "{err}");
        cfg.sweep.r_max = 4;
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn grid_must_be_strictly_increasing() {
        let mut cfg = random_config(20, 1.0, 0.5, 10);
        cfg.sweep.h_grid = vec![0.0, 0.5, 0.5];
        assert!(cfg.clone().validate().is_err());
        cfg.sweep.h_grid = vec![];
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn regime_temperature_consistency() {
        let mut cfg = random_config(20, 1.0, 0.5, 10);
        cfg.chain.temperature = 0.1;
        assert!(cfg.clone().validate().is_err());
        cfg.sweep.regime = Regime::UniformFiniteT;
        assert!(cfg.clone().validate().is_ok());
        cfg.chain.temperature = 0.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn critical_point_rejected_on_closed_form_grid() {
        let cfg = Config {
            chain: ChainSpec::new(20),
            disorder: None,
            sweep: SweepSpec::new(Regime::UniformZeroT, vec![0.5, 1.0, 1.5]),
        };
        assert!(cfg.clone().validate().is_err());
        let mut finite = cfg;
        finite.sweep.finite_chain = true;
        assert!(finite.validate().is_ok());
    }

    #[test]
    fn random_regime_needs_disorder() {
        let mut cfg = random_config(20, 1.0, 0.5, 10);
        cfg.disorder = None;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn validation_is_deterministic() {
        let cfg = random_config(20, 2.5, 0.5, 10);
        let a = cfg.clone().validate().is_ok();
        let b = cfg.validate().is_ok();
        assert_eq!(a, b);
    }

    #[test]
    fn parses_toml_sections() {
        let text = r#"
            [chain]
            n_sites = 100
            boundary = "open"

            [disorder]
            q = 2.0
            scale_a = 0.3
            n_samples = 1000
            master_seed = 11
            gaussian_sigma_convention = "prose"

            [sweep]
            regime = "random_zero_t"
            h_grid = [0.0, 0.5, 1.0]
            r_max = 3
        "#;
        let cfg = Config::from_toml_str(text).unwrap().validate().unwrap();
        assert_eq!(cfg.chain.n_sites, 100);
        assert_eq!(cfg.chain.coupling, 1.0);
        assert_eq!(cfg.chain.boundary, Boundary::Open);
        let d = cfg.disorder.unwrap();
        assert_eq!(d.sigma_convention, SigmaConvention::Prose);
        assert_eq!(cfg.sweep.r_max, 3);
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(0.9, 1.1, 21);
        assert_eq!(g.len(), 21);
        assert_eq!(g[0], 0.9);
        assert!((g[20] - 1.1).abs() < 1e-15);
    }
}
