//! Small named channels, priors and gains used throughout the tests and
//! by the command-line `fixture:` references.

use crate::channel::Channel;
use crate::dist::Dist;
use crate::gain::{gain_identity, gain_ktries, GainFn};
use crate::labels::{index_labels, labels, TUPLE_SEP};

/// Binary symmetric channel with crossover 0.1 over `{0, 1}`.
pub fn ch_a() -> Channel {
    Channel::new(
        index_labels(2),
        index_labels(2),
        vec![vec![0.9, 0.1], vec![0.1, 0.9]],
    )
    .expect("valid fixture")
}

/// A 3×3 channel whose column maxima sum to 1.33.
pub fn ch_b() -> Channel {
    Channel::new(
        labels(["x0", "x1", "x2"]),
        labels(["y0", "y1", "y2"]),
        vec![
            vec![0.50, 0.23, 0.27],
            vec![0.20, 0.40, 0.40],
            vec![0.21, 0.43, 0.36],
        ],
    )
    .expect("valid fixture")
}

/// Skewed prior over the inputs of [`ch_b`].
pub fn pi_b() -> Dist {
    Dist::probability(labels(["x0", "x1", "x2"]), vec![0.01, 0.49, 0.50]).expect("valid fixture")
}

/// Publishes `(y1, y2)` with `y1 ⊕ y2 = x` and `y1` a fair coin: each
/// half alone is independent of the secret.
pub fn xor_channel() -> Channel {
    let outputs = ["0", "1"]
        .iter()
        .flat_map(|a| ["0", "1"].iter().map(move |b| format!("{a}{TUPLE_SEP}{b}")))
        .collect();
    Channel::new(
        index_labels(2),
        outputs,
        vec![vec![0.5, 0.0, 0.0, 0.5], vec![0.0, 0.5, 0.5, 0.0]],
    )
    .expect("valid fixture")
}

pub fn uniform(labels: Vec<String>) -> Dist {
    Dist::uniform(labels).expect("nonempty label set")
}

pub fn identity_gain(secrets: Vec<String>) -> GainFn {
    gain_identity(secrets).expect("nonempty label set")
}

/// The 2-tries gain over `secrets`.
pub fn two_tries(secrets: Vec<String>) -> GainFn {
    gain_ktries(secrets, 2).expect("nonempty label set")
}

/// A named fixture channel.
pub fn channel(name: &str) -> Option<Channel> {
    match name {
        "ch_a" => Some(ch_a()),
        "ch_b" => Some(ch_b()),
        "xor" => Some(xor_channel()),
        _ => None,
    }
}

/// A named fixture prior.
pub fn prior(name: &str) -> Option<Dist> {
    match name {
        "pi_b" => Some(pi_b()),
        "pi_a" => Some(Dist::probability(index_labels(2), vec![0.1, 0.9]).expect("valid fixture")),
        _ => None,
    }
}

pub const CHANNEL_NAMES: &[&str] = &["ch_a", "ch_b", "xor"];
pub const PRIOR_NAMES: &[&str] = &["pi_a", "pi_b"];
