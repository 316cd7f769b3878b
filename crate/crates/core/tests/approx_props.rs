mod common;

use common::*;
use leakbound_core::approx::*;
use leakbound_core::bounds::identity_joint_gain;
use leakbound_core::generators::random::{
    random_joint_prior, random_joint_prior_sparse, random_prior_over, rng_from_seed,
};
use leakbound_core::labels::index_labels;
use leakbound_core::measures::{min_entropy_leakage, post_vulnerability};
use leakbound_core::{Channel, QifError};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn truncation_respects_its_budget(seed in any::<u64>(), nx in 1usize..=8, eps in 0.0f64..0.5) {
        let mut rng = rng_from_seed(seed);
        let pi = random_prior_over(index_labels(nx), &mut rng);
        let t = truncate_prior(&pi, eps).unwrap();
        prop_assert!(t.epsilon_actual <= eps + 1e-15);
        prop_assert!((pi.total() - t.sub_prior.total() - t.epsilon_actual).abs() < 1e-12);
        prop_assert!((t.sub_prior.max_mass() - pi.max_mass()).abs() == 0.0);
        let removed_max = t.removed.iter().map(|l| pi.get(l).unwrap()).fold(0.0, f64::max);
        let kept_min = t.sub_prior.mass().iter().copied().filter(|&m| m > 0.0).fold(f64::INFINITY, f64::min);
        prop_assert!(removed_max <= kept_min);
        for (m, s) in pi.mass().iter().zip(t.sub_prior.mass()) {
            prop_assert!(*s == *m || *s == 0.0);
        }
    }

    #[test]
    fn single_sandwich_contains_the_leakage(seed in any::<u64>(), nx in 1usize..=8, eps in 0.0f64..0.5) {
        let mut rng = rng_from_seed(seed);
        let xs = index_labels(nx);
        let pi = random_prior_over(xs.clone(), &mut rng);
        let c = sparse_channel_over(&xs, 4, &mut rng);
        let b = sandwich_single(&pi, &c, eps).unwrap();
        prop_assert!(b.contains(min_entropy_leakage(&pi, &c).unwrap().bits, TOL));
    }

    #[test]
    fn shared_approximations_contain_the_leakage(seed in any::<u64>(), nx in 2usize..=6, n in 2usize..=4, eps in 0.0f64..0.2) {
        let mut rng = rng_from_seed(seed);
        let xs = index_labels(nx);
        let pi = random_prior_over(xs.clone(), &mut rng);
        let cs: Vec<Channel> = (0..n).map(|_| sparse_channel_over(&xs, 3, &mut rng)).collect();
        let refs: Vec<&Channel> = cs.iter().collect();
        let exact = exact_shared_min(&pi, &refs);
        let white = whitebox_shared_bound(&pi, &refs, eps).unwrap();
        prop_assert!(white.contains(exact, TOL), "{exact} not in [{}, {}]", white.lo, white.hi);
        let leaks: Vec<f64> = refs.iter().map(|c| min_entropy_leakage(&pi, c).unwrap().bits).collect();
        let vulns: Vec<f64> = refs.iter().map(|c| post_vulnerability(&pi, c).unwrap()).collect();
        match blackbox_shared_bound(&pi, &leaks, &vulns, eps) {
            Ok(black) => {
                prop_assert!(black.contains(exact, TOL));
                prop_assert!(white.hi <= black.hi + TOL);
            }
            Err(e) => { let ok = matches!(e, QifError::EpsilonTooLarge { .. }); prop_assert!(ok) }
        }
    }

    #[test]
    fn distinct_approximations_contain_the_leakage(seed in any::<u64>(), kind in 0u8..3, eps in 0.0f64..0.15) {
        let mut rng = rng_from_seed(seed);
        let dims = [4usize, 3];
        let pi = match kind {
            0 => random_joint_prior(&dims, &mut rng),
            1 => random_joint_prior_sparse(&dims, &mut rng),
            _ => skewed_joint_prior(&dims, &mut rng),
        };
        let cs: Vec<Channel> = pi.axes().iter().map(|a| sparse_channel_over(a, 3, &mut rng)).collect();
        let refs: Vec<&Channel> = cs.iter().collect();
        let g = identity_joint_gain(&pi).unwrap();
        let exact = exact_distinct(&pi, &refs, &g);
        let margs = pi.marginals();
        let leaks: Vec<f64> = refs.iter().zip(&margs).map(|(c, m)| min_entropy_leakage(m, c).unwrap().bits).collect();
        let vulns: Vec<f64> = refs.iter().zip(&margs).map(|(c, m)| post_vulnerability(m, c).unwrap()).collect();
        match blackbox_distinct_bounds(&pi, &leaks, &vulns, eps) {
            Ok(b) => prop_assert!(b.contains(exact, TOL), "{exact} not in [{}, {}]", b.lo, b.hi),
            Err(e) => { let ok = matches!(e, QifError::EpsilonTooLarge { .. } | QifError::NotJointlySupported); prop_assert!(ok) }
        }
        match whitebox_distinct_bounds(&pi, &refs, eps) {
            Ok(b) => prop_assert!(b.contains(exact, TOL), "{exact} not in [{}, {}]", b.lo, b.hi),
            Err(e) => { let ok = matches!(e, QifError::NotJointlySupported); prop_assert!(ok) }
        }
    }

    #[test]
    fn joint_truncation_keeps_joint_support_when_it_claims_to(seed in any::<u64>(), eps in 0.0f64..0.3) {
        let mut rng = rng_from_seed(seed);
        let pi = random_joint_prior_sparse(&[3, 4], &mut rng);
        let t = truncate_joint_prior(&pi, eps).unwrap();
        prop_assert!(t.epsilon_actual <= eps + 1e-15);
        if t.note.is_none() {
            prop_assert!(t.sub_prior.is_jointly_supported());
        }
        prop_assert!((pi.total() - t.sub_prior.total() - t.epsilon_actual).abs() < 1e-12);
    }
}

#[test]
fn zero_epsilon_gives_the_exact_leakage() {
    let mut rng = rng_from_seed(9);
    let xs = index_labels(5);
    let pi = random_prior_over(xs.clone(), &mut rng);
    let c = channel_over(&xs, 3, &mut rng);
    let b = sandwich_single(&pi, &c, 0.0).unwrap();
    let exact = min_entropy_leakage(&pi, &c).unwrap().bits;
    assert!((b.lo - exact).abs() < 1e-12 && (b.hi - exact).abs() < 1e-12);
}

#[test]
fn epsilon_outside_the_unit_interval_is_rejected() {
    let pi = random_prior_over(index_labels(3), &mut rng_from_seed(1));
    assert!(matches!(
        truncate_prior(&pi, -0.1),
        Err(QifError::EpsilonOutOfRange(_))
    ));
    assert!(matches!(
        truncate_prior(&pi, 1.0),
        Err(QifError::EpsilonOutOfRange(_))
    ));
}

#[test]
fn distinct_approximations_apply_to_most_instances() {
    let mut ok = 0;
    for seed in 0..200 {
        let mut rng = rng_from_seed(seed);
        let pi = skewed_joint_prior(&[4, 3], &mut rng);
        let cs: Vec<Channel> = pi
            .axes()
            .iter()
            .map(|a| sparse_channel_over(a, 3, &mut rng))
            .collect();
        let refs: Vec<&Channel> = cs.iter().collect();
        let margs = pi.marginals();
        let leaks: Vec<f64> = refs
            .iter()
            .zip(&margs)
            .map(|(c, m)| min_entropy_leakage(m, c).unwrap().bits)
            .collect();
        let vulns: Vec<f64> = refs
            .iter()
            .zip(&margs)
            .map(|(c, m)| post_vulnerability(m, c).unwrap())
            .collect();
        let b = blackbox_distinct_bounds(&pi, &leaks, &vulns, 0.05);
        if b.is_ok_and(|b| b.notes.iter().all(|n| !n.contains("trivial"))) {
            ok += 1;
        }
    }
    assert!(ok >= 60, "only {ok} of 200 instances were truncated");
}
