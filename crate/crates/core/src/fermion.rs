//! Free-fermion solution of the XY chain.
//!
//! After the Jordan-Wigner transformation (spin up = occupied) the chain is
//! the hopping problem `H = sum_ij a+_i A_ij a_j` plus the constant
//! `sum_j (h + h_j) / 2`, with
//!
//! ```text
//! A_jj = -h - h_j,   A_j,j+1 = -J/2,   A_1N = A_N1 = corner
//! ```
//!
//! On a periodic chain the corner entry depends on the fermion parity of the
//! state it acts on: `+J/2` for an even number of fermions, `-J/2` for an odd
//! number (the string operator of the seam bond contributes `-(-1)^N_f`).
//! Each parity sector is diagonalized separately and the ground state is the
//! lowest parity-respecting filling over both.
//!
//! Everything downstream needs only the contraction matrix
//! `G_ij = 2 <a+_i a_j> - delta_ij`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::model::{Boundary, ChainSpec};
use crate::quad;

/// Modes with `|epsilon| <` this are left empty in the ground state.
pub const ZERO_MODE: f64 = 1e-12;

/// Largest inverse temperature accepted by the thermodynamic-limit quadrature.
pub const MAX_BETA: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(count: usize) -> Parity {
        if count.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// `+1` for even, `-1` for odd: the eigenvalue of `(-1)^N_f`.
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => f.write_str("even"),
            Parity::Odd => f.write_str("odd"),
        }
    }
}

/// The single-particle matrix `A` in one parity sector.
#[derive(Debug, Clone, PartialEq)]
pub struct HoppingMatrix {
    pub diagonal: Vec<f64>,
    /// Bulk nearest-neighbour entry, `-J/2`.
    pub hopping: f64,
    /// Seam entry `A_1N = A_N1`; zero on open chains.
    pub corner: f64,
    /// `None` on open chains, where parity does not enter.
    pub sector: Option<Parity>,
}

impl HoppingMatrix {
    pub fn size(&self) -> usize {
        self.diagonal.len()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.size();
        let mut a = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.diagonal));
        for j in 0..n.saturating_sub(1) {
            a[(j, j + 1)] += self.hopping;
            a[(j + 1, j)] += self.hopping;
        }
        if self.corner != 0.0 && n >= 2 {
            // For N = 2 the seam bond doubles the single bulk bond.
            a[(0, n - 1)] += self.corner;
            a[(n - 1, 0)] += self.corner;
        }
        a
    }
}

/// Builds `A` for `chain` with site fields `field` in parity `sector`.
pub fn build_hopping(chain: &ChainSpec, field: &[f64], sector: Parity) -> Result<HoppingMatrix> {
    let n = chain.n_sites;
    if field.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: field.len(),
        });
    }
    let half = 0.5 * chain.coupling;
    let diagonal = field.iter().map(|hj| -chain.uniform_field - hj).collect();
    let (corner, sector) = match chain.boundary {
        Boundary::Open => (0.0, None),
        Boundary::Periodic => (half * sector.sign(), Some(sector)),
    };
    Ok(HoppingMatrix {
        diagonal,
        hopping: -half,
        corner,
        sector,
    })
}

/// Eigen-decomposition `A V = V diag(epsilon)`, energies ascending.
#[derive(Debug, Clone)]
pub struct FermionSpectrum {
    pub energies: Vec<f64>,
    /// Column `k` is the mode with energy `energies[k]`.
    pub modes: Arc<DMatrix<f64>>,
    pub sector: Option<Parity>,
}

pub fn diagonalize(matrix: &HoppingMatrix) -> Result<FermionSpectrum> {
    let n = matrix.size();
    let eig =
        SymmetricEigen::try_new(matrix.to_dense(), 1e-15, 100 * n.max(10)).ok_or_else(|| {
            Error::Eigen(format!(
                "{n}x{n} hopping matrix, sector {:?}",
                matrix.sector
            ))
        })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let energies = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let modes = DMatrix::from_fn(n, n, |i, k| eig.eigenvectors[(i, order[k])]);
    Ok(FermionSpectrum {
        energies,
        modes: Arc::new(modes),
        sector: matrix.sector,
    })
}

/// Read access to a (possibly partial) contraction matrix.
pub trait Contractions {
    fn n_sites(&self) -> usize;
    fn g(&self, i: usize, j: usize) -> f64;

    /// `(<n_i>, 1 - <n_i>)`. Producers that know the modes return each
    /// part as its own sum, which keeps relative accuracy when one is tiny.
    fn occupation(&self, i: usize) -> (f64, f64) {
        let g = self.g(i, i);
        (0.5 * (1.0 + g), 0.5 * (1.0 - g))
    }

    /// `(<n_i n_j>, <(1 - n_i)(1 - n_j)>)` computed from the modes, if known.
    fn joint_occupation(&self, _i: usize, _j: usize) -> Option<(f64, f64)> {
        None
    }
}

/// Mode rows of a Gaussian state with per-mode weights `n_k` and `1 - n_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeWeights {
    modes: Arc<DMatrix<f64>>,
    filled: Vec<f64>,
    empty: Vec<f64>,
    occupations: Vec<(f64, f64)>,
}

impl ModeWeights {
    fn new(modes: Arc<DMatrix<f64>>, filled: Vec<f64>, empty: Vec<f64>) -> ModeWeights {
        let occupations = (0..modes.nrows())
            .map(|i| {
                let row = modes.row(i);
                let mut n = 0.0;
                let mut h = 0.0;
                for (k, v) in row.iter().enumerate() {
                    n += filled[k] * v * v;
                    h += empty[k] * v * v;
                }
                (n, h)
            })
            .collect();
        ModeWeights {
            modes,
            filled,
            empty,
            occupations,
        }
    }

    pub fn occupation(&self, i: usize) -> (f64, f64) {
        self.occupations[i]
    }

    pub fn joint_occupation(&self, i: usize, j: usize) -> (f64, f64) {
        (
            gram_determinant(&self.modes, &self.filled, i, j),
            gram_determinant(&self.modes, &self.empty, i, j),
        )
    }
}

/// `det [[x.Wx, x.Wy], [y.Wx, y.Wy]]` for rows `x`, `y` of `modes` and
/// `W = diag(weights)`. Nonnegative weights go through the Gram-Schmidt
/// residual, which is accurate when the rows are nearly parallel; signed
/// weights use the Cauchy-Binet sum over mode pairs.
fn gram_determinant(modes: &DMatrix<f64>, weights: &[f64], i: usize, j: usize) -> f64 {
    let mut x = Vec::new();
    let mut y = Vec::new();
    let mut w = Vec::new();
    for (k, &wk) in weights.iter().enumerate() {
        if wk != 0.0 {
            x.push(modes[(i, k)]);
            y.push(modes[(j, k)]);
            w.push(wk);
        }
    }
    if w.iter().all(|&wk| wk > 0.0) {
        let root: Vec<f64> = w.iter().map(|wk| wk.sqrt()).collect();
        let mut u: Vec<f64> = x.iter().zip(&root).map(|(a, r)| a * r).collect();
        let mut v: Vec<f64> = y.iter().zip(&root).map(|(a, r)| a * r).collect();
        let norm = |z: &[f64]| z.iter().map(|a| a * a).sum::<f64>();
        if norm(&u) < norm(&v) {
            std::mem::swap(&mut u, &mut v);
        }
        let uu = norm(&u);
        if uu == 0.0 {
            return 0.0;
        }
        let t = u.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>() / uu;
        let residual: f64 = u.iter().zip(&v).map(|(a, b)| (b - t * a).powi(2)).sum();
        uu * residual
    } else {
        let mut det = 0.0;
        for k in 0..w.len() {
            for l in k + 1..w.len() {
                det += w[k] * w[l] * (x[k] * y[l] - x[l] * y[k]).powi(2);
            }
        }
        det
    }
}

/// Dense symmetric contraction matrix `G_ij = 2 <a+_i a_j> - delta_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct GMatrix {
    pub entries: DMatrix<f64>,
    /// The modes behind `entries`, when it came from a diagonalization.
    pub weights: Option<ModeWeights>,
}

impl GMatrix {
    pub fn new(entries: DMatrix<f64>) -> GMatrix {
        GMatrix {
            entries,
            weights: None,
        }
    }

    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    /// Translation-invariant matrix from `G(d)`, `d = 0..len`.
    pub fn toeplitz(profile: &[f64]) -> GMatrix {
        let n = profile.len();
        GMatrix::new(DMatrix::from_fn(n, n, |i, j| profile[i.abs_diff(j)]))
    }
}

impl Contractions for GMatrix {
    fn n_sites(&self) -> usize {
        self.size()
    }

    fn g(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    fn occupation(&self, i: usize) -> (f64, f64) {
        match &self.weights {
            Some(w) => w.occupation(i),
            None => {
                let g = self.entries[(i, i)];
                (0.5 * (1.0 + g), 0.5 * (1.0 - g))
            }
        }
    }

    fn joint_occupation(&self, i: usize, j: usize) -> Option<(f64, f64)> {
        self.weights.as_ref().map(|w| w.joint_occupation(i, j))
    }
}

/// The entries `G_{i,i+d}`, `d <= width`, of a symmetric contraction matrix.
/// Enough for every correlator up to separation `width`.
#[derive(Debug, Clone, PartialEq)]
pub struct GBand {
    n: usize,
    width: usize,
    data: Vec<f64>,
    weights: ModeWeights,
}

impl GBand {
    pub fn width(&self) -> usize {
        self.width
    }
}

impl Contractions for GBand {
    fn n_sites(&self) -> usize {
        self.n
    }

    fn g(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        assert!(
            hi - lo <= self.width,
            "G({i},{j}) lies outside a band of width {}",
            self.width
        );
        self.data[lo * (self.width + 1) + hi - lo]
    }

    fn occupation(&self, i: usize) -> (f64, f64) {
        self.weights.occupation(i)
    }

    fn joint_occupation(&self, i: usize, j: usize) -> Option<(f64, f64)> {
        Some(self.weights.joint_occupation(i, j))
    }
}

impl FermionSpectrum {
    pub fn size(&self) -> usize {
        self.energies.len()
    }

    /// `G = 2 sum_{k < count} v_k v_k^T - I`: the lowest `count` modes filled.
    pub fn filled_g_matrix(&self, count: usize) -> GMatrix {
        let n = self.size();
        // Use whichever of the filled or empty modes is the smaller set.
        let entries = if 2 * count <= n {
            let v = self.modes.columns(0, count);
            let mut g = (v * v.transpose()) * 2.0;
            for i in 0..n {
                g[(i, i)] -= 1.0;
            }
            g
        } else {
            let v = self.modes.columns(count, n - count);
            let mut g = (v * v.transpose()) * -2.0;
            for i in 0..n {
                g[(i, i)] += 1.0;
            }
            g
        };
        GMatrix {
            entries,
            weights: Some(self.filled_weights(count)),
        }
    }

    fn filled_weights(&self, count: usize) -> ModeWeights {
        let filled: Vec<f64> = (0..self.size())
            .map(|k| if k < count { 1.0 } else { 0.0 })
            .collect();
        let empty = filled.iter().map(|f| 1.0 - f).collect();
        ModeWeights::new(self.modes.clone(), filled, empty)
    }

    /// Band of width `width` of [`Self::filled_g_matrix`].
    pub fn filled_g_band(&self, count: usize, width: usize) -> GBand {
        let n = self.size();
        let stride = width + 1;
        let mut data = vec![0.0; n * stride];
        let (range, scale, diag) = if 2 * count <= n {
            (0..count, 2.0, -1.0)
        } else {
            (count..n, -2.0, 1.0)
        };
        for k in range {
            let v = self.modes.column(k);
            for i in 0..n {
                let vi = v[i];
                let row = &mut data[i * stride..];
                for d in 0..stride.min(n - i) {
                    row[d] += vi * v[i + d];
                }
            }
        }
        for (idx, x) in data.iter_mut().enumerate() {
            *x *= scale;
            if idx % stride == 0 {
                *x += diag;
            }
        }
        GBand {
            n,
            width,
            data,
            weights: self.filled_weights(count),
        }
    }

    /// `G = V diag(n_k - (1 - n_k)) V^T` for arbitrary (possibly signed)
    /// mode occupations `n_k`, with `1 - n_k` passed as `vacancy`.
    pub fn occupation_g_matrix(&self, occupation: &[f64], vacancy: &[f64]) -> GMatrix {
        let scaled = DMatrix::from_fn(self.size(), self.size(), |i, k| {
            self.modes[(i, k)] * (occupation[k] - vacancy[k])
        });
        GMatrix {
            entries: scaled * self.modes.transpose(),
            weights: Some(ModeWeights::new(
                self.modes.clone(),
                occupation.to_vec(),
                vacancy.to_vec(),
            )),
        }
    }
}

/// Ground-state filling selected by [`ChainSpectra::ground_state`].
#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    /// Index into [`ChainSpectra::spectra`].
    pub spectrum: usize,
    pub sector: Option<Parity>,
    /// Number of filled modes `N_G` (always the lowest ones).
    pub n_filled: usize,
    /// `sum` of the filled single-particle energies.
    pub energy: f64,
    /// False when the sector's own negative-energy filling had the wrong
    /// parity and one mode had to be added or removed.
    pub self_consistent: bool,
}

/// The diagonalized sectors of one chain with one field realization.
///
/// The uniform field enters `A` as `-h I`, so the modes do not depend on `h`
/// and the energies simply shift. One diagonalization therefore serves every
/// `h` of a sweep.
#[derive(Debug, Clone)]
pub struct ChainSpectra {
    pub boundary: Boundary,
    /// One spectrum for open chains; even then odd sector for periodic ones.
    pub spectra: Vec<FermionSpectrum>,
    reference_h: f64,
    field_sum: f64,
}

impl ChainSpectra {
    pub fn new(chain: &ChainSpec, field: &[f64]) -> Result<Self> {
        let sectors: &[Parity] = match chain.boundary {
            Boundary::Open => &[Parity::Even],
            Boundary::Periodic => &[Parity::Even, Parity::Odd],
        };
        let spectra = sectors
            .iter()
            .map(|&s| diagonalize(&build_hopping(chain, field, s)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(ChainSpectra {
            boundary: chain.boundary,
            spectra,
            reference_h: chain.uniform_field,
            field_sum: field.iter().sum(),
        })
    }

    pub fn n_sites(&self) -> usize {
        self.spectra[0].size()
    }

    /// Single-particle energies of spectrum `index` at uniform field `h`.
    pub fn energies_at(&self, index: usize, h: f64) -> Vec<f64> {
        let shift = h - self.reference_h;
        self.spectra[index]
            .energies
            .iter()
            .map(|e| e - shift)
            .collect()
    }

    pub fn ground_state(&self, h: f64) -> GroundState {
        let mut best: Option<GroundState> = None;
        for (index, spectrum) in self.spectra.iter().enumerate() {
            let energies = self.energies_at(index, h);
            let candidate = fill(&energies, spectrum.sector, index);
            // Strictly lower wins, so exact ties keep the even sector.
            if best.as_ref().is_none_or(|b| candidate.energy < b.energy) {
                best = Some(candidate);
            }
        }
        best.expect("at least one sector")
    }

    pub fn g_matrix(&self, state: &GroundState) -> GMatrix {
        self.spectra[state.spectrum].filled_g_matrix(state.n_filled)
    }

    pub fn g_band(&self, state: &GroundState, width: usize) -> GBand {
        self.spectra[state.spectrum].filled_g_band(state.n_filled, width)
    }

    /// Spin-chain energy of `state` at field `h`: the filled modes plus the
    /// constant `sum_j (h + h_j) / 2` dropped from the quadratic form.
    pub fn spin_energy(&self, state: &GroundState, h: f64) -> f64 {
        state.energy + 0.5 * (h * self.n_sites() as f64 + self.field_sum)
    }

    /// Gibbs state at field `h` and temperature `kt > 0` as a signed mixture
    /// of Gaussian terms. Open chains give a single Fermi-Dirac term.
    /// Periodic chains project each sector onto its parity with
    /// `P = (1 +- (-1)^N_f) / 2`, which yields four terms per chain.
    pub fn thermal_mixture(&self, h: f64, kt: f64) -> Result<ThermalMixture> {
        if !(kt > 0.0) {
            return Err(Error::Config(format!(
                "thermal state needs kT > 0, got {kt}"
            )));
        }
        let beta = 1.0 / kt;
        let mut parts: Vec<Part> = Vec::new();
        for (index, spectrum) in self.spectra.iter().enumerate() {
            let energies = self.energies_at(index, h);
            let plus = Part {
                spectrum: index,
                sign: 1.0,
                log_weight: energies.iter().map(|&e| softplus(-beta * e)).sum(),
                occupation: energies.iter().map(|&e| fermi(-beta * e)).collect(),
                vacancy: energies.iter().map(|&e| fermi(beta * e)).collect(),
            };
            let Some(sector) = spectrum.sector else {
                parts.push(plus);
                continue;
            };
            parts.push(plus);
            parts.extend(twisted_parts(index, &energies, beta, sector.sign())?);
        }
        let top = parts
            .iter()
            .map(|p| p.log_weight)
            .fold(f64::NEG_INFINITY, f64::max);
        let scaled: Vec<f64> = parts
            .iter()
            .map(|p| p.sign * (p.log_weight - top).exp())
            .collect();
        let total: f64 = scaled.iter().sum();
        let terms = parts
            .iter()
            .zip(&scaled)
            .filter(|(_, &w)| w != 0.0)
            .map(|(p, &w)| {
                (
                    w / total,
                    self.spectra[p.spectrum].occupation_g_matrix(&p.occupation, &p.vacancy),
                )
            })
            .collect();
        Ok(ThermalMixture { terms })
    }
}

/// Lowest filling of `energies` (ascending) with the required parity.
fn fill(energies: &[f64], parity: Option<Parity>, spectrum: usize) -> GroundState {
    let n = energies.len();
    let natural = energies.iter().take_while(|&&e| e < -ZERO_MODE).count();
    let mut count = natural;
    let self_consistent = parity.is_none_or(|p| Parity::of(natural) == p);
    if !self_consistent {
        let add = (natural < n).then(|| energies[natural]);
        let remove = (natural > 0).then(|| -energies[natural - 1]);
        count = match (add, remove) {
            (Some(a), Some(r)) if a < r => natural + 1,
            (Some(_), Some(_)) | (None, Some(_)) => natural - 1,
            (Some(_), None) => natural + 1,
            (None, None) => unreachable!("a chain has at least two modes"),
        };
    }
    GroundState {
        spectrum,
        sector: parity,
        n_filled: count,
        energy: energies[..count].iter().sum(),
        self_consistent,
    }
}

/// Thermal state of a finite chain as `sum_t w_t * (Gaussian state t)`.
/// Weights are real, sum to one, and may be negative for the
/// parity-projection terms; expectation values are linear in the terms.
#[derive(Debug, Clone)]
pub struct ThermalMixture {
    pub terms: Vec<(f64, GMatrix)>,
}

struct Part {
    spectrum: usize,
    sign: f64,
    log_weight: f64,
    occupation: Vec<f64>,
    vacancy: Vec<f64>,
}

/// Terms of `sign * Tr[(-1)^N_f exp(-beta H)]`. Each mode contributes a
/// factor `1 - x_k` (`x_k = exp(-beta e_k)`) with occupation
/// `-x_k / (1 - x_k)`. Modes where `1 - x_k` is numerically zero are split
/// into an empty branch (factor 1) and a filled branch (factor `-x_k`).
fn twisted_parts(spectrum: usize, energies: &[f64], beta: f64, sign: f64) -> Result<Vec<Part>> {
    const SPLIT_BELOW: f64 = 1e-6;
    const MAX_SPLIT: usize = 8;
    let mut base_log = 0.0;
    let mut base_sign = sign;
    let mut occupation = vec![0.0; energies.len()];
    let mut vacancy = vec![1.0; energies.len()];
    let mut split = Vec::new();
    for (k, &e) in energies.iter().enumerate() {
        let t = beta * e;
        if t.abs() < SPLIT_BELOW {
            split.push(k);
            continue;
        }
        // |1 - x| = |expm1(-t)| computed without overflow.
        let log_abs = if t < 0.0 {
            -t + (-(t.exp_m1())).ln()
        } else {
            (-(-t).exp_m1()).ln()
        };
        base_log += log_abs;
        if t < 0.0 {
            base_sign = -base_sign;
        }
        occupation[k] = -1.0 / t.exp_m1();
        vacancy[k] = -1.0 / (-t).exp_m1();
    }
    if split.len() > MAX_SPLIT {
        return Err(Error::Config(format!(
            "{} near-zero modes in the parity projection",
            split.len()
        )));
    }
    let mut parts = Vec::with_capacity(1 << split.len());
    for mask in 0u32..(1 << split.len()) {
        let mut occ = occupation.clone();
        let mut vac = vacancy.clone();
        let mut log_weight = base_log;
        let mut s = base_sign;
        for (bit, &k) in split.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                occ[k] = 1.0;
                vac[k] = 0.0;
                s = -s;
                log_weight += -beta * energies[k];
            } else {
                occ[k] = 0.0;
                vac[k] = 1.0;
            }
        }
        parts.push(Part {
            spectrum,
            sign: s,
            log_weight,
            occupation: occ,
            vacancy: vac,
        });
    }
    Ok(parts)
}

/// `ln(1 + e^t)` without overflow.
fn softplus(t: f64) -> f64 {
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

/// `1 / (1 + e^-t)`: the Fermi factor for `t = -beta * energy`.
fn fermi(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// Ground-state contraction matrix of a finite chain at `chain.uniform_field`.
pub fn ground_state_g_matrix(chain: &ChainSpec, field: &[f64]) -> Result<GMatrix> {
    let spectra = ChainSpectra::new(chain, field)?;
    let state = spectra.ground_state(chain.uniform_field);
    Ok(spectra.g_matrix(&state))
}

/// Thermodynamic-limit ground state of the clean chain on a window of
/// `r_window + 1` sites:
///
/// ```text
/// G_ii = -1 + (2/pi) k_F,   G_ij = (2/pi) sin((i - j) k_F) / (i - j),   k_F = arccos(-h/J)
/// ```
///
/// for `|h| < J`; the fully polarized `G = I` for `h > J` and `G = -I` for
/// `h < -J`.
pub fn uniform_g_matrix(h: f64, coupling: f64, r_window: usize) -> Result<GMatrix> {
    if h.abs() == coupling {
        return Err(Error::Critical { h });
    }
    let profile: Vec<f64> = if h > coupling {
        (0..=r_window)
            .map(|d| if d == 0 { 1.0 } else { 0.0 })
            .collect()
    } else if h < -coupling {
        (0..=r_window)
            .map(|d| if d == 0 { -1.0 } else { 0.0 })
            .collect()
    } else {
        let kf = (-h / coupling).acos();
        (0..=r_window)
            .map(|d| {
                if d == 0 {
                    -1.0 + 2.0 * kf / PI
                } else {
                    let d = d as f64;
                    2.0 * (d * kf).sin() / (PI * d)
                }
            })
            .collect()
    };
    Ok(GMatrix::toeplitz(&profile))
}

/// Thermodynamic-limit thermal contraction matrix of the clean chain,
///
/// ```text
/// G_ij = -delta_ij + (2/pi) int_0^pi cos((i-j) phi) / (1 + exp(-beta (J cos phi + h))) dphi
/// ```
///
/// evaluated per entry to an absolute accuracy of `1e-10`. `kt = inf` gives
/// the infinite-temperature limit.
pub fn thermal_g_matrix(h: f64, coupling: f64, kt: f64, r_window: usize) -> Result<GMatrix> {
    if !(kt > 0.0) {
        return Err(Error::Config(format!(
            "thermal_g_matrix needs kT > 0, got {kt}"
        )));
    }
    let beta = 1.0 / kt;
    if beta > MAX_BETA {
        return Err(Error::Quadrature(format!(
            "beta = {beta:e} exceeds the supported maximum {MAX_BETA:e}"
        )));
    }
    // The Fermi factor turns into a step at the Fermi point at low T.
    let breaks: Vec<f64> = if h.abs() < coupling {
        vec![(-h / coupling).acos()]
    } else {
        Vec::new()
    };
    let profile = (0..=r_window)
        .map(|d| {
            let d_f = d as f64;
            let integrand = |phi: f64| (d_f * phi).cos() * fermi(beta * (coupling * phi.cos() + h));
            let integral = quad::integrate(integrand, 0.0, PI, &breaks, 1e-11, 20_000)?;
            let delta = if d == 0 { 1.0 } else { 0.0 };
            Ok(-delta + 2.0 / PI * integral)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(GMatrix::toeplitz(&profile))
}
