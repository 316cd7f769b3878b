mod common;

use common::*;
use leakbound_core::compose::{cascade, par_distinct, par_shared};
use leakbound_core::generators::fixtures;
use leakbound_core::generators::random::{random_gain, random_prior_over, rng_from_seed};
use leakbound_core::labels::index_labels;
use leakbound_core::measures::*;
use leakbound_core::{Dist, JointDist, TUPLE_SEP};
use proptest::prelude::*;
use rand::Rng;

/// Min-entropy leakage straight from the definitions, with no shared code.
fn oracle_min_leakage(pi: &[f64], rows: &[Vec<f64>]) -> f64 {
    let prior = pi.iter().copied().fold(0.0, f64::max);
    let ny = rows[0].len();
    let post: f64 = (0..ny)
        .map(|y| {
            (0..pi.len())
                .map(|x| pi[x] * rows[x][y])
                .fold(0.0, f64::max)
        })
        .sum();
    (post / prior).log2()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn min_leakage_matches_the_oracle(seed in any::<u64>(), nx in 1usize..=6, ny in 1usize..=6) {
        let mut rng = rng_from_seed(seed);
        let xs = index_labels(nx);
        let pi = random_prior_over(xs.clone(), &mut rng);
        let c = sparse_channel_over(&xs, ny, &mut rng);
        let got = min_entropy_leakage(&pi, &c).unwrap().bits;
        prop_assert!((got - oracle_min_leakage(pi.mass(), &c.to_rows())).abs() < 1e-12);
    }

    #[test]
    fn posterior_vulnerability_dominates_prior(seed in any::<u64>(), nx in 1usize..=6, ny in 1usize..=6) {
        let mut rng = rng_from_seed(seed);
        let xs = index_labels(nx);
        let pi = random_prior_over(xs.clone(), &mut rng);
        let c = channel_over(&xs, ny, &mut rng);
        let g = random_gain(xs.clone(), rng.random_range(1..=4), 0.3, &mut rng);
        let prior = prior_vuln_g(&pi, &g).unwrap();
        let post = post_vuln_g(&pi, &c, &g).unwrap();
        prop_assert!(post >= prior - 1e-12 && post <= 1.0 + 1e-12);
        prop_assert!(min_entropy_leakage(&pi, &c).unwrap().bits <= min_capacity(&c) + 1e-12);
    }

    #[test]
    fn post_processing_never_adds_leakage(seed in any::<u64>(), nx in 1usize..=5) {
        let mut rng = rng_from_seed(seed);
        let xs = index_labels(nx);
        let pi = random_prior_over(xs.clone(), &mut rng);
        let c = channel_over(&xs, 4, &mut rng);
        let post = channel_over(c.outputs(), 3, &mut rng);
        let cc = cascade(&c, &post).unwrap();
        prop_assert!(min_entropy_leakage(&pi, &cc).unwrap().bits <= min_entropy_leakage(&pi, &c).unwrap().bits + 1e-12);
        prop_assert!(mutual_information(&pi, &cc).unwrap() <= mutual_information(&pi, &c).unwrap() + 1e-12);
        prop_assert!(min_capacity(&cc) <= min_capacity(&c) + 1e-12);
    }

    #[test]
    fn mutual_information_is_bounded(seed in any::<u64>(), nx in 1usize..=6, ny in 1usize..=6) {
        let mut rng = rng_from_seed(seed);
        let xs = index_labels(nx);
        let pi = random_prior_over(xs.clone(), &mut rng);
        let c = sparse_channel_over(&xs, ny, &mut rng);
        let mi = mutual_information(&pi, &c).unwrap();
        prop_assert!(mi >= -1e-12);
        prop_assert!(mi <= (nx.min(ny) as f64).log2() + 1e-12);
    }

    #[test]
    fn shared_mutual_information_is_subadditive_given_independent_outputs(seed in any::<u64>(), nx in 1usize..=5) {
        // components that read the secret independently: I(X;Y1Y2) ≤ I(X;Y1) + I(X;Y2)
        let mut rng = rng_from_seed(seed);
        let xs = index_labels(nx);
        let pi = random_prior_over(xs.clone(), &mut rng);
        let c1 = channel_over(&xs, 3, &mut rng);
        let c2 = channel_over(&xs, 2, &mut rng);
        let both = mutual_information(&pi, &par_shared(&c1, &c2).unwrap()).unwrap();
        let sum = mutual_information(&pi, &c1).unwrap() + mutual_information(&pi, &c2).unwrap();
        prop_assert!(both <= sum + 1e-10);
    }

    #[test]
    fn distinct_composition_adds_under_independent_priors(seed in any::<u64>(), n1 in 1usize..=4, n2 in 1usize..=4) {
        let mut rng = rng_from_seed(seed);
        let p1 = random_prior_over(index_labels(n1), &mut rng);
        let p2 = random_prior_over(index_labels(n2), &mut rng);
        let c1 = channel_over(p1.labels(), 3, &mut rng);
        let c2 = channel_over(p2.labels(), 3, &mut rng);
        let joint: Dist = JointDist::product(&[&p1, &p2]).unwrap().flatten(TUPLE_SEP);
        let c = par_distinct(&c1, &c2).unwrap();
        let mi = mutual_information(&joint, &c).unwrap();
        prop_assert!((mi - mutual_information(&p1, &c1).unwrap() - mutual_information(&p2, &c2).unwrap()).abs() < 1e-10);
        let ml = min_entropy_leakage(&joint, &c).unwrap().bits;
        prop_assert!((ml - min_entropy_leakage(&p1, &c1).unwrap().bits - min_entropy_leakage(&p2, &c2).unwrap().bits).abs() < 1e-10);
        prop_assert!((min_capacity(&c) - min_capacity(&c1) - min_capacity(&c2)).abs() < 1e-10);
    }

    #[test]
    fn no_prior_beats_min_capacity(seed in any::<u64>(), nx in 1usize..=5, ny in 1usize..=5) {
        let mut rng = rng_from_seed(seed);
        let xs = index_labels(nx);
        let c = sparse_channel_over(&xs, ny, &mut rng);
        let cap = min_capacity(&c);
        for _ in 0..200 {
            let pi = random_prior_over(xs.clone(), &mut rng);
            prop_assert!(min_entropy_leakage(&pi, &c).unwrap().bits <= cap + 1e-12);
        }
        let uniform = fixtures::uniform(xs.clone());
        prop_assert!((min_entropy_leakage(&uniform, &c).unwrap().bits - cap).abs() < 1e-12);
    }
}

#[test]
fn shared_min_capacity_is_subadditive() {
    let mut rng = rng_from_seed(3);
    for _ in 0..200 {
        let nx = rng.random_range(1..=5);
        let xs = index_labels(nx);
        let c1 = sparse_channel_over(&xs, 3, &mut rng);
        let c2 = sparse_channel_over(&xs, 4, &mut rng);
        let both = min_capacity(&par_shared(&c1, &c2).unwrap());
        assert!(both <= min_capacity(&c1) + min_capacity(&c2) + 1e-12);
    }
}

#[test]
fn evaluation_is_deterministic() {
    let pi = fixtures::pi_b();
    let c = fixtures::ch_b();
    let a = min_entropy_leakage(&pi, &c).unwrap().bits;
    let b = min_entropy_leakage(&pi, &c).unwrap().bits;
    assert_eq!(a.to_bits(), b.to_bits());
    let g = fixtures::two_tries(pi.labels().to_vec());
    assert_eq!(
        leakage_g(&pi, &c, &g).unwrap().bits.to_bits(),
        leakage_g(&pi, &c, &g).unwrap().bits.to_bits()
    );
}
