//! Quenched random fields drawn from the q-Gaussian (Tsallis) family
//!
//! ```text
//! P(h) ~ [a^2 - (1 - q) h^2]^(1 / (1 - q)),   1 <= q < 3
//! ```
//!
//! `q -> 1` is a Gaussian, `q = 2` a Lorentzian with half width `a`. For
//! `1 < q < 3` the density is a Student-t with `nu = (3 - q) / (q - 1)` degrees
//! of freedom and scale `a / sqrt(3 - q)`, which is how it is sampled.
//!
//! Each disorder sample owns an independent ChaCha20 stream selected by
//! `(master_seed, sample_index)`, so samples can be generated in any order or
//! in parallel and always reproduce bit for bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};

use crate::error::{Error, Result};
use crate::model::{DisorderSpec, SigmaConvention};

/// One realization of the site fields `h_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSample {
    pub values: Vec<f64>,
    pub sample_index: u64,
    /// Master seed of the ensemble; together with `sample_index` it
    /// regenerates `values` exactly.
    pub seed: u64,
}

impl FieldSample {
    /// All-zero field, i.e. the clean chain.
    pub fn zeros(n_sites: usize) -> Self {
        FieldSample {
            values: vec![0.0; n_sites],
            sample_index: 0,
            seed: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// The single-site distribution `P_{q,a}`.
#[derive(Debug, Clone, Copy)]
pub struct QGaussian {
    kind: Kind,
}

#[derive(Debug, Clone, Copy)]
enum Kind {
    Degenerate,
    Normal { sigma: f64 },
    Student { scale: f64, t: StudentT<f64> },
}

impl QGaussian {
    pub fn new(q: f64, a: f64, convention: SigmaConvention) -> Result<Self> {
        if !(1.0..3.0).contains(&q) || !(a >= 0.0) {
            return Err(Error::Config(format!(
                "q-Gaussian needs 1 <= q < 3 and a >= 0, got q = {q}, a = {a}"
            )));
        }
        let kind = if a == 0.0 {
            Kind::Degenerate
        } else if q == 1.0 {
            let sigma = match convention {
                SigmaConvention::Literal => a / std::f64::consts::SQRT_2,
                SigmaConvention::Prose => a,
            };
            Kind::Normal { sigma }
        } else {
            let nu = (3.0 - q) / (q - 1.0);
            let t = StudentT::new(nu)
                .map_err(|e| Error::Config(format!("Student-t with nu = {nu}: {e}")))?;
            Kind::Student {
                scale: a / (3.0 - q).sqrt(),
                t,
            }
        };
        Ok(QGaussian { kind })
    }

    pub fn from_spec(spec: &DisorderSpec) -> Result<Self> {
        QGaussian::new(spec.q, spec.scale_a, spec.sigma_convention)
    }
}

impl Distribution<f64> for QGaussian {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.kind {
            Kind::Degenerate => 0.0,
            Kind::Normal { sigma } => {
                let z: f64 = StandardNormal.sample(rng);
                sigma * z
            }
            Kind::Student { scale, t } => scale * t.sample(rng),
        }
    }
}

/// The random stream owned by one disorder sample.
pub fn sample_rng(master_seed: u64, sample_index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(master_seed);
    rng.set_stream(sample_index);
    rng
}

/// Draws the `n_sites` i.i.d. fields of disorder sample `sample_index`.
pub fn sample_field(
    disorder: &DisorderSpec,
    n_sites: usize,
    sample_index: u64,
) -> Result<FieldSample> {
    if sample_index >= disorder.n_samples {
        return Err(Error::SampleIndex {
            index: sample_index,
            n_samples: disorder.n_samples,
        });
    }
    let dist = QGaussian::from_spec(disorder)?;
    let mut rng = sample_rng(disorder.master_seed, sample_index);
    let values = (0..n_sites).map(|_| dist.sample(&mut rng)).collect();
    Ok(FieldSample {
        values,
        sample_index,
        seed: disorder.master_seed,
    })
}

/// Variance of `P_{q,a}` under the literal reading of the density:
/// `a^2 / (5 - 3q)` for `q < 5/3` (which gives `a^2 / 2` at `q = 1`) and
/// `f64::INFINITY` from `q = 5/3` on.
pub fn distribution_variance(q: f64, a: f64) -> f64 {
    if 3.0 * q >= 5.0 {
        f64::INFINITY
    } else {
        a * a / (5.0 - 3.0 * q)
    }
}

/// Variance of the configured ensemble, honouring the `q = 1` convention.
pub fn field_variance(spec: &DisorderSpec) -> f64 {
    match spec.sigma_convention {
        SigmaConvention::Prose if spec.q == 1.0 => spec.scale_a * spec.scale_a,
        _ => distribution_variance(spec.q, spec.scale_a),
    }
}
