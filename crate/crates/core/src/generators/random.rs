//! Seeded random channels, priors and topologies.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::Channel;
use crate::dist::{Dist, JointDist};
use crate::error::{QifError, Result};
use crate::gain::{GainFn, JointGainFn};
use crate::generators::crowds::Topology;
use crate::labels::index_labels;
use crate::measures::random_simplex_point;

/// Entries below this are written as exact zeros.
pub const ZERO_CUTOFF: f64 = 1e-15;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Largest L1 distance from uniform a row over `n_out` outputs can have.
pub fn max_noise(n_out: usize) -> f64 {
    if n_out == 0 {
        0.0
    } else {
        2.0 * (n_out as f64 - 1.0) / n_out as f64
    }
}

/// Max over rows of the L1 distance between the row and the uniform row.
pub fn measured_noise(c: &Channel) -> f64 {
    let u = 1.0 / c.n_outputs() as f64;
    c.rows()
        .map(|r| r.iter().map(|v| (v - u).abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// A random `n_in × n_out` channel with noise level exactly `noise`.
///
/// One random row sits at distance `noise` from uniform, the others at
/// `noise · U(0,1)`. Each row moves from uniform towards a uniformly drawn
/// simplex point, or towards a random vertex when that point is too close
/// to uniform to reach the target distance.
pub fn random_channel(n_in: usize, n_out: usize, noise: f64, seed: u64) -> Result<Channel> {
    if n_in == 0 || n_out == 0 {
        return Err(QifError::InvalidArgument(
            "channel dimensions must be positive".into(),
        ));
    }
    let max = max_noise(n_out);
    if !noise.is_finite() || noise < 0.0 || noise > max + 1e-12 {
        return Err(QifError::NoiseOutOfRange { level: noise, max });
    }
    let noise = noise.min(max);
    let mut rng = rng_from_seed(seed);
    let u = 1.0 / n_out as f64;
    let anchor = rng.random_range(0..n_in);
    let mut data = Vec::with_capacity(n_in * n_out);
    for x in 0..n_in {
        let d = if x == anchor {
            noise
        } else {
            noise * rng.random::<f64>()
        };
        let s = random_simplex_point(&mut rng, n_out);
        let dist: f64 = s.iter().map(|v| (v - u).abs()).sum();
        let target = if dist >= d && dist > 0.0 {
            s
        } else {
            let mut e = vec![0.0; n_out];
            e[rng.random_range(0..n_out)] = 1.0;
            e
        };
        let dt: f64 = target.iter().map(|v| (v - u).abs()).sum();
        let t = if dt > 0.0 { d / dt } else { 0.0 };
        let mut row: Vec<f64> = target.iter().map(|&v| u + t * (v - u)).collect();
        clean_row(&mut row);
        data.extend(row);
    }
    Channel::from_flat(index_labels(n_in), index_labels(n_out), data)
}

fn clean_row(row: &mut [f64]) {
    for v in row.iter_mut() {
        if *v < ZERO_CUTOFF {
            *v = 0.0;
        } else if *v > 1.0 {
            *v = 1.0;
        }
    }
}

/// A uniformly random channel (rows drawn from the flat Dirichlet).
pub fn random_stochastic(n_in: usize, n_out: usize, rng: &mut ChaCha8Rng) -> Channel {
    let mut data = Vec::with_capacity(n_in * n_out);
    for _ in 0..n_in {
        let mut row = random_simplex_point(rng, n_out);
        clean_row(&mut row);
        data.extend(row);
    }
    Channel::from_parts_unchecked(index_labels(n_in), index_labels(n_out), data)
}

/// A random prior over `labels`, drawn from the flat Dirichlet.
pub fn random_prior_over(labels: Vec<String>, rng: &mut ChaCha8Rng) -> Dist {
    let mut mass = random_simplex_point(rng, labels.len());
    clean_row(&mut mass);
    Dist::from_parts_unchecked(labels, mass, false)
}

pub fn random_prior(n: usize, seed: u64) -> Result<Dist> {
    if n == 0 {
        return Err(QifError::EmptySecretSpace);
    }
    Ok(random_prior_over(index_labels(n), &mut rng_from_seed(seed)))
}

/// A random joint prior over `dims` with full support (hence jointly
/// supported) and correlated axes.
pub fn random_joint_prior(dims: &[usize], rng: &mut ChaCha8Rng) -> JointDist {
    let size: usize = dims.iter().product();
    let mass = random_simplex_point(rng, size);
    let axes = dims.iter().map(|&d| index_labels(d)).collect();
    JointDist::new(axes, mass).expect("simplex point is a valid joint prior")
}

/// A random jointly supported joint prior whose support is a product of
/// random nonempty subsets of each axis, so some marginal entries are zero.
pub fn random_joint_prior_sparse(dims: &[usize], rng: &mut ChaCha8Rng) -> JointDist {
    let keep: Vec<Vec<bool>> = dims
        .iter()
        .map(|&d| {
            let mut k: Vec<bool> = (0..d).map(|_| rng.random_bool(0.7)).collect();
            if !k.iter().any(|&b| b) {
                k[rng.random_range(0..d)] = true;
            }
            k
        })
        .collect();
    let size: usize = dims.iter().product();
    let raw = random_simplex_point(rng, size);
    let mut mass = vec![0.0; size];
    let mut idx = vec![0; dims.len()];
    let mut total = 0.0;
    for (flat, m) in mass.iter_mut().enumerate() {
        if idx.iter().enumerate().all(|(a, &i)| keep[a][i]) {
            *m = raw[flat];
            total += raw[flat];
        }
        crate::labels::next_index(&mut idx, dims);
    }
    mass.iter_mut().for_each(|m| *m /= total);
    let axes = dims.iter().map(|&d| index_labels(d)).collect();
    JointDist::new(axes, mass).expect("renormalized masses form a valid joint prior")
}

/// A random gain table over `secrets` with `n_guesses` guesses. Entries
/// are zero with probability `zero_prob`, otherwise uniform in `(0, 1]`;
/// every guess keeps at least one nonzero entry.
pub fn random_gain(
    secrets: Vec<String>,
    n_guesses: usize,
    zero_prob: f64,
    rng: &mut ChaCha8Rng,
) -> GainFn {
    let nx = secrets.len();
    let rows = (0..n_guesses)
        .map(|_| {
            let mut r: Vec<f64> = (0..nx)
                .map(|_| {
                    if rng.random_bool(zero_prob) {
                        0.0
                    } else {
                        1.0 - rng.random::<f64>()
                    }
                })
                .collect();
            if r.iter().all(|&v| v == 0.0) {
                r[rng.random_range(0..nx)] = 1.0 - rng.random::<f64>();
            }
            r
        })
        .collect();
    GainFn::table(index_labels(n_guesses), secrets, rows).expect("entries lie in [0, 1]")
}

/// A random joint gain over `components` that respects the worthlessness
/// coupling: the product of the component gains scaled entrywise by a
/// random factor in `(0, 1]`, and occasionally raised towards one.
pub fn random_joint_gain(components: Vec<GainFn>, rng: &mut ChaCha8Rng) -> JointGainFn {
    let product = JointGainFn::product(components.clone()).expect("nonempty components");
    let w_dims = product.w_dims().to_vec();
    let x_dims = product.x_dims().to_vec();
    let nw: usize = w_dims.iter().product();
    let nx: usize = x_dims.iter().product();
    let mut table = Vec::with_capacity(nw * nx);
    let mut w = vec![0; w_dims.len()];
    for _ in 0..nw {
        let mut x = vec![0; x_dims.len()];
        for _ in 0..nx {
            let p = product.value(&w, &x);
            let v = if p == 0.0 {
                0.0
            } else if rng.random_bool(0.3) {
                p + (1.0 - p) * rng.random::<f64>()
            } else {
                p * (1.0 - rng.random::<f64>())
            };
            table.push(if v == 0.0 && p != 0.0 { p } else { v });
            crate::labels::next_index(&mut x, &x_dims);
        }
        crate::labels::next_index(&mut w, &w_dims);
    }
    JointGainFn::table(components, table).expect("coupling holds by construction")
}

/// Random undirected graph over users `u0..u{n-1}`: each pair is an edge
/// independently with probability `edge_prob`. No user is corrupt and
/// `pf = 0`; see [`random_crowd`].
pub fn random_topology(n: usize, edge_prob: f64, seed: u64) -> Result<Topology> {
    random_crowd(n, 0, edge_prob, 0.0, seed)
}

/// Random crowd: [`random_topology`] with the last `n_corrupt` users marked
/// corrupt, so repeated draws share the same honest users.
pub fn random_crowd(
    n: usize,
    n_corrupt: usize,
    edge_prob: f64,
    pf: f64,
    seed: u64,
) -> Result<Topology> {
    if n < 2 {
        return Err(QifError::InvalidTopology(
            "a crowd needs at least two users".into(),
        ));
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(QifError::InvalidTopology(format!(
            "edge probability {edge_prob} outside [0, 1]"
        )));
    }
    if n_corrupt > n {
        return Err(QifError::InvalidTopology(format!(
            "{n_corrupt} corrupt users out of {n}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(edge_prob) {
                edges.push((i, j));
            }
        }
    }
    let nodes = (0..n).map(|i| format!("u{i}")).collect();
    Topology::new(nodes, edges, (n - n_corrupt..n).collect(), pf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_noise_is_uniform() {
        let c = random_channel(4, 5, 0.0, 1).unwrap();
        assert!(c.data().iter().all(|&v| (v - 0.2).abs() < 1e-15));
    }

    #[test]
    fn full_noise_on_two_outputs_hits_a_vertex() {
        let c = random_channel(3, 2, 1.0, 9).unwrap();
        assert!(c.rows().any(|r| r == [1.0, 0.0] || r == [0.0, 1.0]));
    }

    #[test]
    fn measured_noise_matches_request() {
        for seed in 0..100 {
            let c = random_channel(10, 10, 0.10, seed).unwrap();
            assert!((measured_noise(&c) - 0.10).abs() < 1e-6);
        }
        for &nu in &[0.5, 1.2, 1.8] {
            let c = random_channel(6, 10, nu, 3).unwrap();
            assert!((measured_noise(&c) - nu).abs() < 1e-6);
        }
    }

    #[test]
    fn noise_range_is_checked() {
        assert!(matches!(
            random_channel(2, 2, 1.01, 0),
            Err(QifError::NoiseOutOfRange { .. })
        ));
        assert!(random_channel(2, 1, 0.0, 0).is_ok());
    }

    #[test]
    fn measured_noise_examples() {
        let a = crate::generators::fixtures::ch_a();
        assert!((measured_noise(&a) - 0.8).abs() < 1e-15);
        let id = Channel::identity(index_labels(2)).unwrap();
        assert_eq!(measured_noise(&id), 1.0);
    }

    #[test]
    fn seeded_generators_are_deterministic() {
        assert_eq!(
            random_channel(5, 7, 0.3, 42).unwrap(),
            random_channel(5, 7, 0.3, 42).unwrap()
        );
        assert_eq!(random_prior(6, 3).unwrap(), random_prior(6, 3).unwrap());
        assert_eq!(
            random_topology(12, 0.4, 5).unwrap(),
            random_topology(12, 0.4, 5).unwrap()
        );
    }

    #[test]
    fn topology_extremes() {
        let full = random_topology(6, 1.0, 0).unwrap();
        assert_eq!(full.edges().len(), 15);
        let empty = random_topology(6, 0.0, 0).unwrap();
        assert!(empty.edges().is_empty());
    }

    #[test]
    fn topology_edge_count_statistics() {
        let seeds = 200;
        let total: usize = (0..seeds)
            .map(|s| random_topology(25, 0.4, s).unwrap().edges().len())
            .sum();
        let mean = total as f64 / seeds as f64;
        // each draw has variance 300·0.4·0.6 = 72; the mean of 200 has sd 0.6
        assert!((mean - 120.0).abs() < 3.0, "mean edge count {mean}");
    }

    #[test]
    fn sparse_joint_prior_is_jointly_supported() {
        let mut rng = rng_from_seed(11);
        for _ in 0..50 {
            let j = random_joint_prior_sparse(&[3, 4], &mut rng);
            assert!(j.is_jointly_supported());
            assert!((j.total() - 1.0).abs() < 1e-9);
        }
    }
}
