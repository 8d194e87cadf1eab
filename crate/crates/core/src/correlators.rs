//! One- and two-point spin correlators from a contraction matrix.
//!
//! ```text
//! <sz_i>       = G_ii
//! <sz_i sz_j>  = G_ii G_jj - G_ij G_ji
//! <sx_i sx_j>  = det[ G_{i+r-1, i+s} ],  r, s = 1..(j - i)
//! ```
//!
//! The `sx sx` determinant follows the Jordan-Wigner string from `i` to
//! `j - 1`, so it holds for any `i < j` of a single Gaussian state. On a
//! periodic chain the pair `(i, i + r)` with `i + r >= N` would need the
//! string across the seam and is not evaluated.

use crate::error::{Error, Result};
use crate::fermion::{Contractions, ThermalMixture};
use crate::model::Boundary;

/// Correlators beyond `1 +` this are treated as upstream numerical faults.
pub const MAGNITUDE_SLACK: f64 = 1e-9;

/// The four non-vanishing correlators of a site pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSiteState {
    pub site_i: usize,
    pub site_j: usize,
    pub sz_i: f64,
    pub sz_j: f64,
    /// `<sx_i sx_j>`, equal to `<sy_i sy_j>`.
    pub sxsx: f64,
    pub szsz: f64,
    /// Diagonal of the pair density matrix, `(uu, ud, du, dd)`, when the
    /// producer computed it more accurately than the correlators allow.
    pub populations: Option<[f64; 4]>,
}

impl TwoSiteState {
    /// Clamps rounding excursions past `+-1` and rejects anything larger.
    pub fn clamped(mut self) -> Result<Self> {
        for (name, value) in [
            ("sz_i", &mut self.sz_i),
            ("sz_j", &mut self.sz_j),
            ("sxsx", &mut self.sxsx),
            ("szsz", &mut self.szsz),
        ] {
            if !value.is_finite() || value.abs() > 1.0 + MAGNITUDE_SLACK {
                return Err(Error::Magnitude {
                    name,
                    value: *value,
                });
            }
            *value = value.clamp(-1.0, 1.0);
        }
        Ok(self)
    }
}

fn check_site<G: Contractions + ?Sized>(g: &G, i: usize) -> Result<()> {
    if i >= g.n_sites() {
        return Err(Error::SiteIndex {
            index: i,
            n_sites: g.n_sites(),
        });
    }
    Ok(())
}

fn check_pair<G: Contractions + ?Sized>(g: &G, i: usize, j: usize) -> Result<()> {
    check_site(g, i)?;
    check_site(g, j)?;
    if i >= j {
        return Err(Error::SitePair { i, j });
    }
    Ok(())
}

pub fn sigma_z<G: Contractions + ?Sized>(g: &G, i: usize) -> Result<f64> {
    check_site(g, i)?;
    Ok(g.g(i, i))
}

pub fn sigma_zz<G: Contractions + ?Sized>(g: &G, i: usize, j: usize) -> Result<f64> {
    check_site(g, i)?;
    check_site(g, j)?;
    if i == j {
        return Err(Error::SitePair { i, j });
    }
    Ok(g.g(i, i) * g.g(j, j) - g.g(i, j) * g.g(j, i))
}

pub fn sigma_xx<G: Contractions + ?Sized>(g: &G, i: usize, j: usize) -> Result<f64> {
    check_pair(g, i, j)?;
    let d = j - i;
    let mut m = vec![0.0; d * d];
    for r in 0..d {
        for s in 0..d {
            m[r * d + s] = g.g(i + r, i + s + 1);
        }
    }
    Ok(determinant(&mut m, d))
}

/// Determinant by Gaussian elimination with partial pivoting. `m` is a
/// row-major `n x n` matrix and is overwritten.
pub fn determinant(m: &mut [f64], n: usize) -> f64 {
    debug_assert_eq!(m.len(), n * n);
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a * n + col].abs().total_cmp(&m[b * n + col].abs()))
            .expect("non-empty column");
        let p = m[pivot * n + col];
        if p == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for k in 0..n {
                m.swap(col * n + k, pivot * n + k);
            }
            det = -det;
        }
        det *= p;
        for row in col + 1..n {
            let factor = m[row * n + col] / p;
            if factor != 0.0 {
                for k in col..n {
                    m[row * n + k] -= factor * m[col * n + k];
                }
            }
        }
    }
    det
}

/// All four correlators of `(i, j)`, clamped, with the populations.
pub fn two_site_state<G: Contractions + ?Sized>(g: &G, i: usize, j: usize) -> Result<TwoSiteState> {
    raw_two_site_state(g, i, j)?.clamped()
}

fn raw_two_site_state<G: Contractions + ?Sized>(g: &G, i: usize, j: usize) -> Result<TwoSiteState> {
    Ok(TwoSiteState {
        site_i: i,
        site_j: j,
        sz_i: sigma_z(g, i)?,
        sz_j: sigma_z(g, j)?,
        sxsx: sigma_xx(g, i, j)?,
        szsz: sigma_zz(g, i, j)?,
        populations: Some(pair_populations(g, i, j)),
    })
}

/// `<n_i n_j> = n_i n_j - c^2` and its three partners, `c = G_ij / 2`.
/// Only the two differences can cancel. When they do, the joint occupations
/// come from the modes if the contractions know them; otherwise a result
/// within a few roundings of its operands is zero.
fn pair_populations<G: Contractions + ?Sized>(g: &G, i: usize, j: usize) -> [f64; 4] {
    let (ni, hi) = g.occupation(i);
    let (nj, hj) = g.occupation(j);
    let c = 0.5 * g.g(i, j);
    let c2 = c * c;
    let scale = |a: f64| a.abs() + c.abs();
    let mut up = ni * nj - c2;
    let mut down = hi * hj - c2;
    let cancelled = |d: f64, a: f64| d.abs() <= 1e-6 * scale(a);
    if cancelled(up, ni * nj) || cancelled(down, hi * hj) {
        if let Some((both_up, both_down)) = g.joint_occupation(i, j) {
            return [both_up, ni * hj + c2, hi * nj + c2, both_down];
        }
        if up.abs() <= 4.0 * f64::EPSILON * scale(ni * nj) {
            up = 0.0;
        }
        if down.abs() <= 4.0 * f64::EPSILON * scale(hi * hj) {
            down = 0.0;
        }
    }
    [up, ni * hj + c2, hi * nj + c2, down]
}

/// Correlators of a thermal mixture: the weighted sum over its terms.
pub fn mixture_two_site_state(mix: &ThermalMixture, i: usize, j: usize) -> Result<TwoSiteState> {
    let mut acc = TwoSiteState {
        site_i: i,
        site_j: j,
        sz_i: 0.0,
        sz_j: 0.0,
        sxsx: 0.0,
        szsz: 0.0,
        populations: None,
    };
    let mut pops = [0.0; 4];
    let mut scale = [0.0; 4];
    for (w, g) in &mix.terms {
        let s = raw_two_site_state(g, i, j)?;
        acc.sz_i += w * s.sz_i;
        acc.sz_j += w * s.sz_j;
        acc.sxsx += w * s.sxsx;
        acc.szsz += w * s.szsz;
        let p = s.populations.expect("set for every Gaussian term");
        for k in 0..4 {
            pops[k] += w * p[k];
            scale[k] += (w * p[k]).abs();
        }
    }
    // Signed terms can cancel as well.
    for k in 0..4 {
        if pops[k].abs() <= 4.0 * f64::EPSILON * scale[k] {
            pops[k] = 0.0;
        }
    }
    acc.populations = Some(pops);
    acc.clamped()
}

/// Partner of site `i` at separation `r`, refusing seam-crossing pairs on
/// periodic chains (and pairs past the end of open ones).
pub fn pair_at(i: usize, r: usize, n_sites: usize, boundary: Boundary) -> Result<(usize, usize)> {
    if r == 0 || i + r >= n_sites {
        return Err(match boundary {
            Boundary::Periodic if r > 0 => Error::WrappingPair { i, r, n_sites },
            _ => Error::SitePair { i, j: i + r },
        });
    }
    Ok((i, i + r))
}
