use doublecap::capgeom::{
    complex_cap_volume_closed, log2_real_cap_volume, log2_real_cap_volume_beta, monte_carlo_cap_volume, CapKind,
    DoubleCapComplex,
};
use doublecap::explorer::{
    anneal_search, brute_force_max_independent, build_graph, explore_ladder, greedy_search, AnnealConfig,
    CandidateSet, ExploreConfig, SpherePointCloud,
};
use doublecap::hilbert::{
    bloch_from_state, born_probability, state_from_bloch, BlochVector, PureState, RandomStream,
};
use doublecap::protocol::{fixtures, tb_decode, tb_encode, SharedPair, Sign, TabulatedProtocol};
use num_complex::Complex64;
use proptest::prelude::*;

fn state(dim: usize) -> impl Strategy<Value = PureState> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim)
        .prop_filter("non-zero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(|v| PureState::normalized(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap())
}

fn state_pair() -> impl Strategy<Value = (PureState, PureState)> {
    (1usize..7).prop_flat_map(|d| (state(d + 1), state(d + 1)))
}

fn bloch() -> impl Strategy<Value = BlochVector> {
    (0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU).prop_map(|(t, p)| BlochVector::from_angles(t, p))
}

proptest! {
    #[test]
    fn born_is_symmetric_and_bounded((psi, phi) in state_pair()) {
        let p = born_probability(&psi, &phi).unwrap();
        let q = born_probability(&phi, &psi).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!((p - q).abs() < 1e-12);
        prop_assert!((born_probability(&psi, &psi).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn born_ignores_global_phase((psi, phi) in state_pair(), a in 0.0..6.3f64, b in 0.0..6.3f64) {
        let p = born_probability(&psi, &phi).unwrap();
        let q = born_probability(&psi.with_global_phase(a), &phi.with_global_phase(b)).unwrap();
        prop_assert!((p - q).abs() < 1e-12);
    }

    #[test]
    fn born_sums_to_one_over_a_basis(psi in (2usize..8).prop_flat_map(state)) {
        let total: f64 = (0..psi.dim())
            .map(|i| born_probability(&psi, &PureState::basis(psi.dim(), i).unwrap()).unwrap())
            .sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn qubit_born_matches_bloch_overlap(psi in state(2), phi in state(2)) {
        let x = bloch_from_state(&psi).unwrap();
        let y = bloch_from_state(&phi).unwrap();
        let p = born_probability(&psi, &phi).unwrap();
        prop_assert!((p - (1.0 + x.dot(&y)) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn bloch_round_trip(x in bloch()) {
        let back = bloch_from_state(&state_from_bloch(&x)).unwrap();
        prop_assert!((back.dot(&x) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn protocol_is_deterministic_at_the_extremes(x in bloch(), l1 in bloch(), l2 in bloch()) {
        let shared = SharedPair::new(l1, l2);
        let msg = tb_encode(&x, &shared).unwrap();
        let same = tb_decode(&x, msg, &shared).unwrap();
        let opposite = tb_decode(&x.neg(), msg, &shared).unwrap();
        // degenerate only when x is orthogonal to both shared vectors
        if x.dot(&l1).abs() + x.dot(&l2).abs() > 1e-9 {
            prop_assert_eq!(same, Sign::Plus);
            prop_assert_eq!(opposite, Sign::Minus);
        }
    }

    #[test]
    fn complex_cap_is_phase_invariant(axis in state(3), x in state(3), t in 0.0..6.3f64) {
        let cap = DoubleCapComplex::new(axis);
        prop_assert_eq!(cap.contains(&x).unwrap(), cap.contains(&x.with_global_phase(t)).unwrap());
    }

    #[test]
    fn log_volume_agrees_with_beta(d in 2usize..3000) {
        let a = log2_real_cap_volume(d).unwrap();
        let b = log2_real_cap_volume_beta(d).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0), "{} vs {}", a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn monte_carlo_is_reproducible(seed in any::<u64>(), n in 2usize..5) {
        let a = monte_carlo_cap_volume(CapKind::Complex, n, 20_000, &RandomStream::new(seed, 0)).unwrap();
        let b = monte_carlo_cap_volume(CapKind::Complex, n, 20_000, &RandomStream::new(seed, 0)).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!(a.z_score(complex_cap_volume_closed(n).unwrap()).abs() < 6.0);
    }

    #[test]
    fn tabulated_json_round_trips(seed in any::<u64>(), half in 2usize..12) {
        let shared = SharedPair::sample(&mut RandomStream::new(seed, 0));
        let tp = fixtures::tb_lunes(&shared, &fixtures::antipodal_bloch_grid(half)).unwrap();
        let back = TabulatedProtocol::from_json_str(&tp.to_json_string().unwrap()).unwrap();
        prop_assert_eq!(back.to_tables(), tp.to_tables());
    }

    #[test]
    fn search_results_are_independent_and_bounded(
        seed in any::<u64>(),
        kind_idx in 0usize..3,
        m in 6usize..26,
        delta in 0.05..0.75f64,
    ) {
        let (kind, dim) = [(CapKind::Real, 2), (CapKind::Real, 3), (CapKind::Complex, 2)][kind_idx];
        let cloud = SpherePointCloud::sample(kind, dim, m, &RandomStream::new(seed, 0)).unwrap();
        let graph = build_graph(cloud, delta).unwrap();
        let exact = brute_force_max_independent(&graph).unwrap();
        let greedy = greedy_search(&graph);
        let config = AnnealConfig { moves: 20_000, seed, ..AnnealConfig::default() };
        let annealed = anneal_search(&graph, &CandidateSet::empty(), &config).unwrap();
        for set in [&exact, &greedy, &annealed] {
            prop_assert!(set.feasible());
            prop_assert!(graph.is_independent(set.members()));
            prop_assert!(set.density() <= exact.density() + 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn delta_ladder_is_monotone(seed in any::<u64>(), complex in any::<bool>()) {
        let kind = if complex { CapKind::Complex } else { CapKind::Real };
        let config = ExploreConfig { budget: 20_000, restarts: 2, ..ExploreConfig::new(kind, 3, 400, 0.3, seed) };
        let reports = explore_ladder(&config, &[0.05, 0.3, 0.15, 0.6]).unwrap();
        prop_assert!(reports.windows(2).all(|w| w[0].delta_radians > w[1].delta_radians));
        prop_assert!(reports.windows(2).all(|w| w[1].best_density >= w[0].best_density));
        prop_assert!(reports.iter().all(|r| r.feasible));
    }
}
