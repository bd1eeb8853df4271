use proptest::prelude::*;

use htlpp::chains::{brute_force_chain, lis_profile, max_weight_chain};
use htlpp::continuum::{field_at, sample_continuum, sample_prm, truncated_t, truncated_t_ladder};
use htlpp::distributions::WeightDistribution;
use htlpp::exec::map_replicates_seq;
use htlpp::greedy::{greedy_path, measure_cdf, measure_inverse};
use htlpp::lattice::{brute_force_passage, optimal_path, passage_field, passage_time, LatticeGrid};
use htlpp::stable::{directed_l, lower_bound, simulate_processes_over, upper_bound, StableSpec};
use htlpp::stats::split_stream;

fn dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lattice_matches_brute_force(seed in any::<u64>(), side in 1usize..=7, alpha in 0.3f64..2.5) {
        let dist = WeightDistribution::pareto(alpha).unwrap();
        let (g, _) = LatticeGrid::random(2, side, &dist, &mut split_stream(seed, 0)).unwrap();
        prop_assert_eq!(passage_time(&g), brute_force_passage(&g).unwrap());
    }

    #[test]
    fn optimal_path_realises_the_passage_time(seed in any::<u64>(), side in 1usize..=12) {
        let dist = WeightDistribution::exponential(1.0).unwrap();
        let (g, _) = LatticeGrid::random(2, side, &dist, &mut split_stream(seed, 0)).unwrap();
        let field = passage_field(&g);
        let path = optimal_path(&field);
        prop_assert_eq!(path.len(), 2 * side - 1);
        prop_assert!((path.weight(&g) - field.corner()).abs() <= 1e-12 * field.corner());
        for w in path.sites().windows(2) {
            let steps: usize = w[0].iter().zip(&w[1]).map(|(a, b)| b - a).sum();
            prop_assert_eq!(steps, 1);
        }
    }

    #[test]
    fn raising_a_weight_never_lowers_t(seed in any::<u64>(), side in 2usize..=8, bump in 0.0f64..5.0) {
        let dist = WeightDistribution::pareto(1.0).unwrap();
        let mut rng = split_stream(seed, 0);
        let (mut g, _) = LatticeGrid::random(2, side, &dist, &mut rng).unwrap();
        let before = passage_time(&g);
        let site = vec![(seed as usize) % side, (seed as usize / 7) % side];
        let w = g.weight(&site);
        g.set_weight(&site, w + bump);
        prop_assert!(passage_time(&g) >= before);
    }

    #[test]
    fn optimal_chains_are_chains(seed in any::<u64>(), k in 1usize..=60, dims in 2usize..=3) {
        let s = sample_continuum(k, 1.0, dims, &mut split_stream(seed, 0)).unwrap();
        let (t, chain) = truncated_t(&s);
        let set = s.points();
        let total: f64 = chain.indices.iter().map(|&i| set.weight(i)).sum();
        prop_assert!((total - t).abs() <= 1e-12 * t);
        for (a, &i) in chain.indices.iter().enumerate() {
            for &j in &chain.indices[a + 1..] {
                prop_assert!(dominates(set.location(i), set.location(j)) || dominates(set.location(j), set.location(i)));
            }
        }
        if k <= 14 {
            prop_assert_eq!(max_weight_chain(set), brute_force_chain(set).unwrap());
        }
    }

    #[test]
    fn truncation_ladder_is_monotone(seed in any::<u64>(), alpha in 0.4f64..1.9) {
        let s = sample_continuum(200, alpha, 2, &mut split_stream(seed, 0)).unwrap();
        let t = truncated_t_ladder(&s, &[1, 5, 20, 80, 200]);
        prop_assert!(t.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(t[0], s.points().weight(0));
        prop_assert_eq!(t[4], truncated_t(&s).0);
    }

    #[test]
    fn lis_profile_is_bounded(seed in any::<u64>(), k in 1usize..=80) {
        let s = sample_continuum(k, 1.2, 2, &mut split_stream(seed, 0)).unwrap();
        let profile = lis_profile(s.points()).unwrap();
        prop_assert_eq!(profile.len(), k);
        prop_assert_eq!(profile[0], 1);
        for (i, w) in profile.windows(2).enumerate() {
            prop_assert!(w[0] <= w[1] && w[1] <= w[0] + 1, "step at {}", i);
        }
    }

    #[test]
    fn prm_field_is_monotone_and_thinning_lowers_it(seed in any::<u64>(), x in 0.05f64..2.0, y in 0.05f64..2.0) {
        let prm = sample_prm((2.0, 2.0), 0.01, 1.0, &mut split_stream(seed, 0)).unwrap();
        let v = field_at(&prm, &[(x, y), (x.min(1.0), y.min(1.0)), (2.0, 2.0)]).unwrap();
        prop_assert!(v[1] <= v[0] && v[0] <= v[2]);
        let thin = prm.thinned(0.05).unwrap();
        prop_assert!(field_at(&thin, &[(x, y)]).unwrap()[0] <= v[0]);
    }

    #[test]
    fn greedy_measure_is_a_distribution(seed in any::<u64>()) {
        let p = greedy_path(1.0 / 128.0, 2, &mut split_stream(seed, 0)).unwrap();
        for w in (0..p.len()).collect::<Vec<_>>().windows(2) {
            prop_assert!(p.vertex(w[0])[0] < p.vertex(w[1])[0] && p.vertex(w[0])[1] < p.vertex(w[1])[1]);
        }
        let g: Vec<f64> = (0..=20).map(|i| measure_cdf(&p, i as f64 / 20.0).unwrap()).collect();
        prop_assert_eq!((g[0], g[20]), (0.0, 1.0));
        prop_assert!(g.windows(2).all(|w| w[0] <= w[1]));
        // segments can be extremely steep, so check the crossing rather than G(G^-1(y)) = y
        for &y in &[0.1, 0.5, 0.9] {
            let x = measure_inverse(&p, y).unwrap();
            prop_assert!(measure_cdf(&p, (x - 1e-12).max(0.0)).unwrap() <= y + 1e-12);
            prop_assert!(measure_cdf(&p, (x + 1e-12).min(1.0)).unwrap() >= y - 1e-12);
        }
    }

    #[test]
    fn stable_sandwich_holds(seed in any::<u64>(), alpha in 0.5f64..1.95, c_minus in 0.0f64..1.0, n in 1usize..=6) {
        let spec = StableSpec::with_jump_rate(alpha, 1.0, c_minus, 15.0).unwrap();
        let grid = simulate_processes_over(&spec, n, n + 1, 8, &mut split_stream(seed, 0)).unwrap();
        let l = directed_l(&grid);
        let hi = upper_bound(&grid);
        prop_assert!(lower_bound(&grid, n) <= l);
        prop_assert!(l <= hi + 1e-9 * hi.abs().max(1.0));
    }
}

#[cfg(feature = "parallel")]
#[test]
fn parallel_and_sequential_replicates_agree() {
    use htlpp::exec::map_replicates_par;
    let dist = WeightDistribution::pareto(0.8).unwrap();
    let run = |rng: &mut htlpp::stats::Stream| passage_time(&LatticeGrid::random(2, 20, &dist, rng).unwrap().0);
    assert_eq!(map_replicates_seq(9, 64, |_, r| run(r)), map_replicates_par(9, 64, |_, r| run(r)));
}

#[test]
fn replicate_streams_do_not_depend_on_count() {
    let short = map_replicates_seq(3, 5, |_, rng| sample_continuum(10, 1.0, 2, rng).unwrap().points().weight(0));
    let long = map_replicates_seq(3, 50, |_, rng| sample_continuum(10, 1.0, 2, rng).unwrap().points().weight(0));
    assert_eq!(short[..], long[..5]);
}
