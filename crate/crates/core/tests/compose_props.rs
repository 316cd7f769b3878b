mod common;

use common::*;
use leakbound_core::compose::*;
use leakbound_core::generators::random::rng_from_seed;
use leakbound_core::labels::index_labels;
use leakbound_core::Channel;
use proptest::prelude::*;

fn close(a: &Channel, b: &Channel) -> bool {
    a.max_abs_diff(b).is_some_and(|d| d < 1e-12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compositions_are_stochastic(seed in any::<u64>(), nx in 1usize..=4, ny in 1usize..=4) {
        let mut rng = rng_from_seed(seed);
        let xs = index_labels(nx);
        let a = sparse_channel_over(&xs, ny, &mut rng);
        let b = sparse_channel_over(&xs, 3, &mut rng);
        for c in [par_distinct(&a, &b).unwrap(), par_shared(&a, &b).unwrap()] {
            for r in c.rows() {
                prop_assert!((r.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn nary_composition_matches_folding(seed in any::<u64>(), nx in 1usize..=3) {
        let mut rng = rng_from_seed(seed);
        let xs = index_labels(nx);
        let cs: Vec<Channel> = (0..3).map(|k| channel_over(&xs, k + 1, &mut rng)).collect();
        let d = par_distinct_n(&[&cs[0], &cs[1], &cs[2]]).unwrap();
        let left = par_distinct(&par_distinct(&cs[0], &cs[1]).unwrap(), &cs[2]).unwrap();
        let right = par_distinct(&cs[0], &par_distinct(&cs[1], &cs[2]).unwrap()).unwrap();
        prop_assert!(close(&d, &left));
        prop_assert!(d.max_abs_diff(&right.relabeled(d.inputs().to_vec(), d.outputs().to_vec()).unwrap()).unwrap() < 1e-12);
        let s = par_shared_n(&[&cs[0], &cs[1], &cs[2]]).unwrap();
        let left = par_shared(&par_shared(&cs[0], &cs[1]).unwrap(), &cs[2]).unwrap();
        prop_assert!(close(&s, &left));
    }

    #[test]
    fn decompose_inverts_shared_composition(seed in any::<u64>(), nx in 1usize..=4) {
        let mut rng = rng_from_seed(seed);
        let xs = index_labels(nx);
        let a = channel_over(&xs, 3, &mut rng);
        let b = channel_over(&xs, 2, &mut rng);
        let (a2, b2) = decompose(&par_shared(&a, &b).unwrap()).unwrap();
        prop_assert!(close(&a, &a2));
        prop_assert!(close(&b, &b2));
    }

    #[test]
    fn cascades_are_found_as_refinements(seed in any::<u64>(), nx in 1usize..=4, ny in 1usize..=4, nz in 1usize..=3) {
        let mut rng = rng_from_seed(seed);
        let xs = index_labels(nx);
        let a = sparse_channel_over(&xs, ny, &mut rng);
        let post = sparse_channel_over(a.outputs(), nz, &mut rng);
        let coarse = cascade(&a, &post).unwrap();
        let w = find_refinement(&coarse, &a).unwrap();
        prop_assert!(w.is_some());
        prop_assert!(verify_refinement(&coarse, &a, &w.unwrap()).unwrap());
        // the identity refines everything
        let id = Channel::identity(xs.clone()).unwrap();
        prop_assert!(find_refinement(&a, &id).unwrap().is_some());
    }

    #[test]
    fn shared_composition_refines_its_components(seed in any::<u64>(), nx in 1usize..=4) {
        let mut rng = rng_from_seed(seed);
        let xs = index_labels(nx);
        let a = channel_over(&xs, 2, &mut rng);
        let b = channel_over(&xs, 3, &mut rng);
        let both = par_shared(&a, &b).unwrap();
        prop_assert!(find_refinement(&a, &both).unwrap().is_some());
        prop_assert!(find_refinement(&b, &both).unwrap().is_some());
    }
}

#[test]
fn identity_is_not_refined_by_a_constant() {
    let xs = index_labels(3);
    let id = Channel::identity(xs.clone()).unwrap();
    let k = Channel::constant(xs, index_labels(2), &[0.5, 0.5]).unwrap();
    assert!(find_refinement(&id, &k).unwrap().is_none());
    assert!(find_refinement(&k, &id).unwrap().is_some());
}
