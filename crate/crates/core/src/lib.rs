//! Quantitative information flow on discrete channels.
//!
//! Exact measures (vulnerability, min-entropy and g-leakage, min-capacity,
//! mutual information), channel algebra, and bounds on the leakage of
//! parallel compositions computed from the components alone, so the
//! exponentially large composed matrix never has to be built.

pub mod approx;
pub mod bounds;
pub mod channel;
pub mod compose;
pub mod dist;
pub mod error;
pub mod gain;
pub mod generators;
pub mod labels;
mod lp;
pub mod measures;

pub use bounds::{BoundReport, Provenance, Quantity, SupportRatios};
pub use channel::Channel;
pub use compose::{Composer, RefinementWitness};
pub use dist::{lift_shared_prior, lift_shared_prior_n, make_dist, Dist, JointDist};
pub use error::{QifError, Result};
pub use gain::{
    gain_binary, gain_identity, gain_ktries, lift_shared_gain, lift_shared_gain_n, GainFn,
    GainKind, JointGainFn,
};
pub use labels::TUPLE_SEP;
pub use measures::{Entropy, Leakage, MeasureKind};
