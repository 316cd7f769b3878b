//! Instances shared by the benchmarks.

use leakbound_core::generators::random::{random_channel, random_joint_prior, rng_from_seed};
use leakbound_core::labels::index_labels;
use leakbound_core::{gain_identity, Channel, Dist, GainFn, JointDist};

/// `n` copies of one random `size × size` channel with a uniform prior and
/// the identity gain.
pub fn shared_instance(size: usize, n: usize, seed: u64) -> (Dist, Vec<Channel>, GainFn) {
    let c = random_channel(size, size, 0.5, seed).expect("noise below the maximum");
    let xs = index_labels(size);
    (
        Dist::uniform(xs.clone()).expect("nonempty"),
        vec![c; n],
        gain_identity(xs).expect("nonempty"),
    )
}

/// `n` random `size × size` channels over the axes of a random joint prior.
pub fn distinct_instance(size: usize, n: usize, seed: u64) -> (JointDist, Vec<Channel>) {
    let pi = random_joint_prior(&vec![size; n], &mut rng_from_seed(seed));
    let cs = (0..n)
        .map(|i| {
            random_channel(size, size, 0.5, seed.wrapping_add(1 + i as u64))
                .expect("noise below the maximum")
        })
        .collect();
    (pi, cs)
}
