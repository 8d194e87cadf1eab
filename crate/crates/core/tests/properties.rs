mod common;

use proptest::prelude::*;

use common::state_from_populations;
use xychain::correlators::two_site_state;
use xychain::oracle::{exact_ground_state, exact_pair_concurrence};
use xychain::pipeline::ChainState;
use xychain::{
    assemble_rho, concurrence, concurrence_general, entanglement_of_formation, sample_field,
    Boundary, ChainSpec, ChainSpectra, Contractions, DisorderSpec,
};

fn populations() -> impl Strategy<Value = ([f64; 4], f64)> {
    (
        prop::array::uniform4(1e-6f64..1.0),
        -1.0f64..=1.0,
        prop::bool::ANY,
    )
        .prop_map(|(w, t, pure_corner)| {
            let mut w = w;
            if pure_corner {
                // Exercise the boundary of the cone as well as the interior.
                w[0] *= 1e-6;
            }
            let s: f64 = w.iter().sum();
            let p = w.map(|x| x / s);
            (p, t * (p[1] * p[2]).sqrt())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn x_state_formula_agrees_with_general_route((p, z) in populations()) {
        let rho = assemble_rho(&state_from_populations(p, z)).unwrap();
        let fast = concurrence(&rho);
        let general = concurrence_general(&rho);
        prop_assert!((fast - general).abs() < 1e-10, "{fast} vs {general}");
        prop_assert!((0.0..=1.0).contains(&fast));
        prop_assert!((rho.trace() - 1.0).abs() < 1e-10);
        prop_assert!(rho.is_x_shaped(0.0));
        prop_assert!(rho.min_eigenvalue() >= -1e-9);
    }
}

proptest! {
    /// E lies below its chords, so averaging E over an ensemble gives at
    /// least E of the averaged concurrence.
    #[test]
    fn formation_is_convex(c1 in 0.0f64..=1.0, c2 in 0.0f64..=1.0) {
        let mid = entanglement_of_formation(0.5 * (c1 + c2));
        let chord = 0.5 * (entanglement_of_formation(c1) + entanglement_of_formation(c2));
        prop_assert!(mid <= chord + 1e-12);
        prop_assert!((0.0..=1.0).contains(&mid));
    }

    #[test]
    fn ensemble_formation_exceeds_formation_of_mean(cs in prop::collection::vec(0.0f64..=1.0, 1..50)) {
        let n = cs.len() as f64;
        let mean_c = cs.iter().sum::<f64>() / n;
        let mean_e = cs.iter().map(|&c| entanglement_of_formation(c)).sum::<f64>() / n;
        prop_assert!(mean_e >= entanglement_of_formation(mean_c) - 1e-12);
    }

    #[test]
    fn formation_is_monotone(c1 in 0.0f64..=1.0, c2 in 0.0f64..=1.0) {
        let (lo, hi) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
        prop_assert!(entanglement_of_formation(lo) <= entanglement_of_formation(hi) + 1e-15);
    }

    #[test]
    fn below_threshold_is_exactly_zero((p, t) in (prop::array::uniform4(1e-3f64..1.0), 0.0f64..=1.0)) {
        let s: f64 = p.iter().sum();
        let p = p.map(|x| x / s);
        let z = t * (p[0] * p[3]).sqrt().min((p[1] * p[2]).sqrt());
        let rho = assemble_rho(&state_from_populations(p, z)).unwrap();
        prop_assert_eq!(concurrence(&rho), 0.0);
    }

    #[test]
    fn contraction_matrix_is_symmetric_and_bounded(
        n in 3usize..40,
        h in -2.5f64..2.5,
        q in 1.0f64..2.5,
        a in 0.0f64..1.5,
        seed in any::<u64>(),
        open in any::<bool>(),
    ) {
        let boundary = if open { Boundary::Open } else { Boundary::Periodic };
        let chain = ChainSpec::new(n).with_field(h).with_boundary(boundary);
        let field = sample_field(&DisorderSpec::new(q, a, 1, seed), n, 0).unwrap().values;
        let spectra = ChainSpectra::new(&chain, &field).unwrap();
        let g = spectra.g_matrix(&spectra.ground_state(h));
        for i in 0..n {
            prop_assert!(g.g(i, i).abs() <= 1.0 + 1e-12);
            for j in 0..n {
                prop_assert!((g.g(i, j) - g.g(j, i)).abs() < 1e-12);
            }
        }
        for r in 1..n.div_ceil(2) {
            let s = two_site_state(&g, 0, r).unwrap();
            prop_assert!(s.sxsx.abs() <= 1.0 && s.szsz.abs() <= 1.0);
            let c = concurrence(&assemble_rho(&s).unwrap());
            prop_assert!((0.0..=1.0).contains(&c));
        }
    }

    /// Reversing every field is a global spin flip: magnetizations change
    /// sign, concurrence does not.
    #[test]
    fn spin_flip_symmetry(
        n in 4usize..30,
        h in -2.0f64..2.0,
        a in 0.0f64..1.0,
        kt in prop::sample::select(vec![0.0, 0.1, 0.5]),
        seed in any::<u64>(),
    ) {
        let field = sample_field(&DisorderSpec::new(2.0, a, 1, seed), n, 0).unwrap().values;
        let flipped: Vec<f64> = field.iter().map(|x| -x).collect();
        let up = ChainState::new(&ChainSpec::new(n).with_field(h).with_temperature(kt), &field).unwrap();
        let down = ChainState::new(&ChainSpec::new(n).with_field(-h).with_temperature(kt), &flipped).unwrap();
        for r in 1..n.div_ceil(2) {
            let x = up.two_site_state(0, r).unwrap();
            let y = down.two_site_state(0, r).unwrap();
            prop_assert!((x.sz_i + y.sz_i).abs() < 1e-9);
            prop_assert!((x.szsz - y.szsz).abs() < 1e-9);
            prop_assert!((x.sxsx - y.sxsx).abs() < 1e-9);
            let cx = up.pair_concurrence(0, r).unwrap();
            let cy = down.pair_concurrence(0, r).unwrap();
            prop_assert!((cx - cy).abs() < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ground_state_pipeline_matches_exact_diagonalization(
        n in 3usize..=9,
        h in -1.5f64..1.5,
        a in 0.0f64..1.2,
        seed in any::<u64>(),
        open in any::<bool>(),
    ) {
        let boundary = if open { Boundary::Open } else { Boundary::Periodic };
        let chain = ChainSpec::new(n).with_field(h).with_boundary(boundary);
        let field = sample_field(&DisorderSpec::new(1.0, a, 1, seed), n, 0).unwrap().values;
        let exact = exact_ground_state(&chain, &field).unwrap();
        prop_assume!(!exact.degenerate);
        let ours = ChainState::new(&chain, &field).unwrap();
        for i in 0..n {
            for j in i + 1..n {
                let c = ours.pair_concurrence(i, j).unwrap();
                let e = exact_pair_concurrence(&exact, i, j).unwrap();
                prop_assert!((c - e).abs() < 1e-9, "({i},{j}): {c} vs {e}");
            }
        }
    }

    #[test]
    fn field_draws_are_reproducible(q in 1.0f64..2.9, a in 0.0f64..3.0, seed in any::<u64>(), index in 0u64..1000) {
        let spec = DisorderSpec::new(q, a, 1000, seed);
        let x = sample_field(&spec, 17, index).unwrap();
        let y = sample_field(&spec, 17, index).unwrap();
        prop_assert_eq!(x.values.len(), 17);
        prop_assert!(x.values.iter().zip(&y.values).all(|(u, v)| u.to_bits() == v.to_bits()));
    }
}
