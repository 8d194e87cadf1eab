//! Two-site density matrix, concurrence and entanglement of formation.
//!
//! Basis order is the `sz` product basis `(uu, ud, du, dd)` with the first
//! label belonging to site `i`.

use nalgebra::{Matrix4, SymmetricEigen};

use crate::correlators::TwoSiteState;
use crate::error::{Error, Result};

/// Smallest eigenvalue tolerated before a density matrix is rejected.
pub const PSD_SLACK: f64 = 1e-9;

/// Populations derived from the correlators alone that are at or below the
/// rounding error of `(1 +- a +- b +- c) / 4` are set to zero.
pub const POPULATION_FLOOR: f64 = 4.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairDensityMatrix {
    pub entries: Matrix4<f64>,
}

impl PairDensityMatrix {
    /// Wraps a real symmetric 4x4 matrix, e.g. a partial trace.
    pub fn from_matrix(entries: Matrix4<f64>) -> Self {
        PairDensityMatrix { entries }
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    /// Nonzero entries only on the diagonal and the anti-diagonal.
    pub fn is_x_shaped(&self, tol: f64) -> bool {
        (0..4).all(|r| (0..4).all(|c| r == c || r + c == 3 || self.entries[(r, c)].abs() <= tol))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.entries)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// `rho = (1/4) (I + sz_i Z.I + sz_j I.Z + sxsx (XX + YY) + szsz ZZ)`, with
/// the diagonal taken from `state.populations` when present.
pub fn assemble_rho(state: &TwoSiteState) -> Result<PairDensityMatrix> {
    let TwoSiteState {
        sz_i,
        sz_j,
        sxsx,
        szsz,
        populations,
        ..
    } = *state;
    let mut m = Matrix4::zeros();
    m[(0, 0)] = 0.25 * (1.0 + sz_i + sz_j + szsz);
    m[(1, 1)] = 0.25 * (1.0 + sz_i - sz_j - szsz);
    m[(2, 2)] = 0.25 * (1.0 - sz_i + sz_j - szsz);
    m[(3, 3)] = 0.25 * (1.0 - sz_i - sz_j + szsz);
    m[(1, 2)] = 0.5 * sxsx;
    m[(2, 1)] = 0.5 * sxsx;
    // The concurrence depends on square roots of the populations, so
    // roundoff left in a population that is really zero would show up
    // near the 1e-8 level.
    match populations {
        Some(p) => {
            for k in 0..4 {
                m[(k, k)] = p[k];
            }
        }
        None => {
            for k in 0..4 {
                if m[(k, k)].abs() <= POPULATION_FLOOR {
                    m[(k, k)] = 0.0;
                }
            }
        }
    }

    // Eigenvalues of this X-shape: two diagonal corners plus the inner block.
    let mean = 0.5 * (m[(1, 1)] + m[(2, 2)]);
    let split = (0.25 * (m[(1, 1)] - m[(2, 2)]).powi(2) + m[(1, 2)].powi(2)).sqrt();
    let min_eigenvalue = m[(0, 0)].min(m[(3, 3)]).min(mean - split);
    if min_eigenvalue < -PSD_SLACK {
        return Err(Error::NotPositive { min_eigenvalue });
    }
    Ok(PairDensityMatrix { entries: m })
}

/// Wootters concurrence of an X-shaped density matrix,
/// `2 max(0, |rho_23| - sqrt(rho_11 rho_44), |rho_14| - sqrt(rho_22 rho_33))`.
pub fn concurrence(rho: &PairDensityMatrix) -> f64 {
    let m = &rho.entries;
    let sqrt_pos = |x: f64| x.max(0.0).sqrt();
    let inner = m[(1, 2)].abs() - sqrt_pos(m[(0, 0)] * m[(3, 3)]);
    let outer = m[(0, 3)].abs() - sqrt_pos(m[(1, 1)] * m[(2, 2)]);
    (2.0 * inner.max(outer)).clamp(0.0, 1.0)
}

/// Wootters concurrence of any real two-qubit density matrix.
///
/// The `lambda_k` are the square roots of the eigenvalues of
/// `sqrt(rho) rho~ sqrt(rho)` with `rho~ = (Y x Y) rho* (Y x Y)`. For real
/// `rho` that matrix is `A^2` with `A = sqrt(rho) (Y x Y) sqrt(rho)`
/// symmetric, so the `lambda_k` are the moduli of the eigenvalues of `A`;
/// this avoids square roots of eigenvalues that sit at roundoff level.
pub fn concurrence_general(rho: &PairDensityMatrix) -> f64 {
    let eig = SymmetricEigen::new(rho.entries);
    let root = eig.eigenvectors
        * Matrix4::from_diagonal(&eig.eigenvalues.map(|x| x.max(0.0).sqrt()))
        * eig.eigenvectors.transpose();
    // Y x Y is real for this ordering: the anti-diagonal (-1, 1, 1, -1).
    let yy = Matrix4::new(
        0.0, 0.0, 0.0, -1.0, //
        0.0, 0.0, 1.0, 0.0, //
        0.0, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0,
    );
    let mut a = root * yy * root;
    a = 0.5 * (a + a.transpose());
    let mut lambda: Vec<f64> = SymmetricEigen::new(a)
        .eigenvalues
        .iter()
        .map(|x| x.abs())
        .collect();
    lambda.sort_by(|a, b| b.total_cmp(a));
    (lambda[0] - lambda[1] - lambda[2] - lambda[3]).clamp(0.0, 1.0)
}

/// Entanglement of formation `E(C) = h2((1 + sqrt(1 - C^2)) / 2)` with the
/// binary entropy `h2` in bits and `0 log 0 = 0`.
pub fn entanglement_of_formation(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    let x = 0.5 * (1.0 + (1.0 - c * c).sqrt());
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn state(sz_i: f64, sz_j: f64, sxsx: f64, szsz: f64) -> TwoSiteState {
        TwoSiteState {
            site_i: 0,
            site_j: 1,
            sz_i,
            sz_j,
            sxsx,
            szsz,
            populations: None,
        }
    }

    #[test]
    fn product_state() {
        let rho = assemble_rho(&state(1.0, 1.0, 0.0, 1.0)).unwrap();
        let mut want = Matrix4::zeros();
        want[(0, 0)] = 1.0;
        assert_eq!(rho.entries, want);
        assert_eq!(concurrence(&rho), 0.0);
        assert_eq!(concurrence_general(&rho), 0.0);
    }

    #[test]
    fn maximally_mixed() {
        let rho = assemble_rho(&state(0.0, 0.0, 0.0, 0.0)).unwrap();
        assert_eq!(rho.entries, Matrix4::identity() * 0.25);
        assert_eq!(concurrence(&rho), 0.0);
    }

    #[test]
    fn bell_states() {
        for sign in [1.0, -1.0] {
            let rho = assemble_rho(&state(0.0, 0.0, sign, -1.0)).unwrap();
            assert_eq!(rho.entries[(1, 2)], 0.5 * sign);
            assert!((concurrence(&rho) - 1.0).abs() < 1e-15);
            assert!((concurrence_general(&rho) - 1.0).abs() < 1e-12);
            assert!((rho.trace() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn clean_chain_nearest_neighbour() {
        let g1 = 2.0 / PI;
        let rho = assemble_rho(&state(0.0, 0.0, g1, -g1 * g1)).unwrap();
        let want = 2.0 / PI - 0.5 * (1.0 - 4.0 / (PI * PI));
        assert!((concurrence(&rho) - want).abs() < 1e-15);
        assert!((concurrence(&rho) - 0.3393).abs() < 1e-4);
        assert!((concurrence_general(&rho) - want).abs() < 1e-12);
    }

    #[test]
    fn non_positive_input_is_rejected() {
        assert!(matches!(
            assemble_rho(&state(0.0, 0.0, 1.0, 1.0)),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn general_route_handles_non_x_states() {
        // |psi> = cos t |uu> + sin t |dd> has concurrence |sin 2t|.
        let t: f64 = 0.3;
        let v = [t.cos(), 0.0, 0.0, t.sin()];
        let m = Matrix4::from_fn(|r, c| v[r] * v[c]);
        let rho = PairDensityMatrix::from_matrix(m);
        assert!((concurrence_general(&rho) - (2.0 * t).sin()).abs() < 1e-12);
        assert!((concurrence(&rho) - (2.0 * t).sin()).abs() < 1e-12);
        // A dense pure state with no X structure.
        let v = [0.5, 0.1, -0.7, 0.3];
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let v: Vec<f64> = v.iter().map(|x| x / norm).collect();
        let m = Matrix4::from_fn(|r, c| v[r] * v[c]);
        let want = 2.0 * (v[0] * v[3] - v[1] * v[2]).abs();
        let rho = PairDensityMatrix::from_matrix(m);
        assert!(!rho.is_x_shaped(1e-12));
        assert!(
            (concurrence_general(&rho) - want).abs() < 1e-10,
            "{} {want}",
            concurrence_general(&rho)
        );
    }

    #[test]
    fn formation_endpoints_and_midpoint() {
        assert_eq!(entanglement_of_formation(0.0), 0.0);
        assert!((entanglement_of_formation(1.0) - 1.0).abs() < 1e-15);
        // Independent evaluation: x = (1 + sqrt(3)/2)/2 through natural logs.
        let x: f64 = 0.5 * (1.0 + 0.75f64.sqrt());
        let want = -(x * x.ln() + (1.0 - x) * (1.0 - x).ln()) / std::f64::consts::LN_2;
        let got = entanglement_of_formation(0.5);
        assert!((got - want).abs() < 1e-15);
        assert!((got - 0.3546).abs() < 1e-4, "{got}");
    }

    #[test]
    fn zero_below_threshold() {
        // |sxsx|/2 <= sqrt(rho11 rho44) gives exactly zero.
        let rho = assemble_rho(&state(0.2, 0.2, 0.1, 0.3)).unwrap();
        let m = rho.entries;
        assert!(m[(1, 2)].abs() <= (m[(0, 0)] * m[(3, 3)]).sqrt());
        assert_eq!(concurrence(&rho), 0.0);
    }
}
