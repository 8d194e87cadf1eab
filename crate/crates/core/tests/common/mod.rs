#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use xychain::{DisorderSpec, QGaussian, SigmaConvention, TwoSiteState};

/// The field density as written, unnormalized.
pub fn density(q: f64, a: f64, h: f64) -> f64 {
    if q == 1.0 {
        (-h * h / (a * a)).exp()
    } else {
        (1.0 + (q - 1.0) * h * h / (a * a)).powf(1.0 / (1.0 - q))
    }
}

/// `int f(h) P(h) dh / int P(h) dh` over the real line. The substitution
/// `h = a tan(t)` maps it to `(-pi/2, pi/2)`, done by composite Simpson.
pub fn density_moment(q: f64, a: f64, f: impl Fn(f64) -> f64) -> f64 {
    let n = 400_000;
    let half = std::f64::consts::FRAC_PI_2;
    let dt = 2.0 * half / n as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for k in 1..n {
        let t = -half + k as f64 * dt;
        let h = a * t.tan();
        let jac = a / t.cos().powi(2);
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        let p = density(q, a, h) * jac;
        num += w * f(h) * p;
        den += w * p;
    }
    num / den
}

/// `draws` fields from one stream, for moment checks.
pub fn draws(q: f64, a: f64, count: usize, seed: u64) -> Vec<f64> {
    let spec = DisorderSpec::new(q, a, 1, seed);
    let dist = QGaussian::new(spec.q, spec.scale_a, SigmaConvention::Literal).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.sample(&dist)).collect()
}

pub fn sample_variance(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
}

pub fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        0.5 * (xs[m - 1] + xs[m])
    }
}

/// A two-site state whose X-shaped density matrix has diagonal `p` (a
/// probability vector) and inner coherence `z` with `|z| <= sqrt(p1 p2)`,
/// i.e. any valid state of the family.
pub fn state_from_populations(p: [f64; 4], z: f64) -> TwoSiteState {
    TwoSiteState {
        site_i: 0,
        site_j: 1,
        sz_i: p[0] + p[1] - p[2] - p[3],
        sz_j: p[0] - p[1] + p[2] - p[3],
        sxsx: 2.0 * z,
        szsz: p[0] - p[1] - p[2] + p[3],
        populations: None,
    }
}
