//! Scenario builders: fixtures, seeded random instances and the Crowds
//! channel extractor.

pub mod crowds;
pub mod fixtures;
pub mod random;

pub use crowds::{crowds_channel, initiator_label, Observable, Receiver, Topology};
pub use random::{
    max_noise, measured_noise, random_channel, random_crowd, random_gain, random_joint_gain,
    random_joint_prior, random_joint_prior_sparse, random_prior, random_prior_over,
    random_stochastic, random_topology, rng_from_seed,
};
