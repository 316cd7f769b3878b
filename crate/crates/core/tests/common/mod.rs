#![allow(dead_code)]

use leakbound_core::compose::{par_distinct_n, par_shared_n};
use leakbound_core::generators::random::{random_gain, random_joint_gain, random_stochastic};
use leakbound_core::measures::{leakage_g, min_entropy_leakage};
use leakbound_core::{Channel, Dist, GainFn, JointDist, JointGainFn, TUPLE_SEP};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Exact g-leakage of `C_1 × … × C_n` under a joint prior and joint gain,
/// by materializing the composition.
pub fn exact_distinct(pi: &JointDist, cs: &[&Channel], g: &JointGainFn) -> f64 {
    let c = par_distinct_n(cs).unwrap();
    let flat_c = c
        .relabeled(
            pi.flatten(TUPLE_SEP).labels().to_vec(),
            c.outputs().to_vec(),
        )
        .unwrap();
    leakage_g(&pi.flatten(TUPLE_SEP), &flat_c, &g.flatten(TUPLE_SEP))
        .unwrap()
        .bits
}

pub fn exact_shared_min(pi: &Dist, cs: &[&Channel]) -> f64 {
    min_entropy_leakage(pi, &par_shared_n(cs).unwrap())
        .unwrap()
        .bits
}

pub fn exact_shared_g(pi: &Dist, cs: &[&Channel], g: &GainFn) -> f64 {
    leakage_g(pi, &par_shared_n(cs).unwrap(), g).unwrap().bits
}

/// Random channel with inputs relabeled to `inputs`.
pub fn channel_over(inputs: &[String], n_out: usize, rng: &mut ChaCha8Rng) -> Channel {
    let c = random_stochastic(inputs.len(), n_out, rng);
    c.relabeled(inputs.to_vec(), c.outputs().to_vec()).unwrap()
}

/// Random channel whose rows are sparse: each entry is zeroed with
/// probability one half before renormalization.
pub fn sparse_channel_over(inputs: &[String], n_out: usize, rng: &mut ChaCha8Rng) -> Channel {
    let rows = (0..inputs.len())
        .map(|_| {
            let mut r: Vec<f64> = (0..n_out)
                .map(|_| {
                    if rng.random_bool(0.5) {
                        0.0
                    } else {
                        rng.random::<f64>() + 1e-3
                    }
                })
                .collect();
            if r.iter().all(|&v| v == 0.0) {
                r[rng.random_range(0..n_out)] = 1.0;
            }
            let s: f64 = r.iter().sum();
            r.iter_mut().for_each(|v| *v /= s);
            r
        })
        .collect();
    Channel::normalized(
        inputs.to_vec(),
        leakbound_core::labels::index_labels(n_out),
        rows,
    )
    .unwrap()
}

/// Random joint gain over the axes of `pi` with up to three guesses per
/// component.
pub fn joint_gain_for(pi: &JointDist, rng: &mut ChaCha8Rng) -> JointGainFn {
    let comps = pi
        .axes()
        .iter()
        .map(|a| {
            let nw = rng.random_range(1..=3);
            random_gain(a.clone(), nw, 0.3, rng)
        })
        .collect();
    random_joint_gain(comps, rng)
}

pub fn product_gain_for(pi: &JointDist, rng: &mut ChaCha8Rng) -> JointGainFn {
    let comps = pi
        .axes()
        .iter()
        .map(|a| {
            let nw = rng.random_range(1..=3);
            random_gain(a.clone(), nw, 0.3, rng)
        })
        .collect();
    JointGainFn::product(comps).unwrap()
}

/// Random full-support joint prior in which each axis has one or two light
/// labels, so truncation with a small budget has something to drop.
pub fn skewed_joint_prior(dims: &[usize], rng: &mut ChaCha8Rng) -> JointDist {
    let base = leakbound_core::generators::random::random_joint_prior(dims, rng);
    let light: Vec<Vec<f64>> = dims
        .iter()
        .map(|&d| {
            (0..d)
                .map(|_| {
                    if rng.random_bool(0.4) {
                        0.02 * rng.random::<f64>() + 1e-3
                    } else {
                        1.0
                    }
                })
                .collect()
        })
        .collect();
    let mut mass = base.mass().to_vec();
    let mut idx = vec![0; dims.len()];
    for m in mass.iter_mut() {
        *m *= idx
            .iter()
            .enumerate()
            .map(|(a, &i)| light[a][i])
            .product::<f64>();
        for a in (0..dims.len()).rev() {
            idx[a] += 1;
            if idx[a] < dims[a] {
                break;
            }
            idx[a] = 0;
        }
    }
    let total: f64 = mass.iter().sum();
    mass.iter_mut().for_each(|m| *m /= total);
    base.with_mass(mass).unwrap()
}
