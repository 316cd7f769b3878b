//! Exact information measures of a single channel: (g-)vulnerability,
//! (g-)entropy, leakage, min-capacity and Shannon mutual information.
//!
//! All logarithms are base 2. Sub-priors are accepted wherever the
//! definitions make sense for them (everything except mutual information).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::channel::Channel;
use crate::dist::Dist;
use crate::error::{QifError, Result};
use crate::gain::GainFn;

/// Column count above which posterior vulnerabilities are evaluated in
/// parallel column blocks.
const PAR_COLUMNS: usize = 4096;
const COLUMN_BLOCK: usize = 1024;

/// An entropy in bits; `+∞` when the underlying vulnerability is zero.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Entropy {
    pub bits: f64,
}

impl Entropy {
    pub fn from_vulnerability(v: f64) -> Self {
        Entropy {
            bits: if v == 0.0 { f64::INFINITY } else { -v.log2() },
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.bits.is_infinite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    MinEntropy,
    GLeakage,
    Shannon,
}

/// A leakage in bits, tagged with the measure it was computed with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Leakage {
    pub bits: f64,
    pub measure: MeasureKind,
}

pub(crate) fn check_same(what: &str, a: &[String], b: &[String]) -> Result<()> {
    if a != b {
        return Err(QifError::LabelMismatch(format!(
            "{what}: {} vs {} labels",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// `max_w Σ_x π[x] g(w, x)` over raw masses aligned with `g.secrets()`.
pub(crate) fn prior_vuln_mass(mass: &[f64], g: &GainFn) -> f64 {
    if g.is_identity() {
        return mass.iter().copied().fold(0.0, f64::max);
    }
    (0..g.n_guesses())
        .map(|w| g.row(w).iter().zip(mass).map(|(gv, p)| gv * p).sum::<f64>())
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy)]
enum GainView<'a> {
    Identity,
    General(&'a GainFn),
}

impl<'a> GainView<'a> {
    fn of(g: &'a GainFn) -> Self {
        if g.is_identity() {
            GainView::Identity
        } else {
            GainView::General(g)
        }
    }
}

/// Best expected gain per output column over `cols`.
fn column_block(
    mass: &[f64],
    c: &Channel,
    g: GainView<'_>,
    cols: std::ops::Range<usize>,
) -> Vec<f64> {
    let width = cols.len();
    let mut best = vec![0.0f64; width];
    let g = match g {
        GainView::General(g) => g,
        GainView::Identity => {
            for (x, &p) in mass.iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                let row = &c.row(x)[cols.clone()];
                for (b, &v) in best.iter_mut().zip(row) {
                    let t = p * v;
                    if t > *b {
                        *b = t;
                    }
                }
            }
            return best;
        }
    };
    let mut acc = vec![0.0f64; width];
    for w in 0..g.n_guesses() {
        acc.iter_mut().for_each(|a| *a = 0.0);
        for (x, &p) in mass.iter().enumerate() {
            let wp = p * g.value(w, x);
            if wp == 0.0 {
                continue;
            }
            let row = &c.row(x)[cols.clone()];
            for (a, &v) in acc.iter_mut().zip(row) {
                *a += wp * v;
            }
        }
        for (b, &a) in best.iter_mut().zip(&acc) {
            if a > *b {
                *b = a;
            }
        }
    }
    best
}

/// `Σ_y max_w Σ_x π[x] C[x,y] g(w,x)` over raw masses. Columns are summed
/// in index order regardless of how blocks were scheduled.
pub(crate) fn post_vuln_mass(mass: &[f64], c: &Channel, g: &GainFn) -> f64 {
    post_vuln_view(mass, c, GainView::of(g))
}

fn post_vuln_view(mass: &[f64], c: &Channel, g: GainView<'_>) -> f64 {
    let ny = c.n_outputs();
    if ny < PAR_COLUMNS {
        return column_block(mass, c, g, 0..ny).iter().sum();
    }
    let blocks: Vec<Vec<f64>> = (0..ny.div_ceil(COLUMN_BLOCK))
        .into_par_iter()
        .map(|b| {
            let lo = b * COLUMN_BLOCK;
            column_block(mass, c, g, lo..(lo + COLUMN_BLOCK).min(ny))
        })
        .collect();
    blocks.iter().flatten().sum()
}

/// Prior g-vulnerability `V_g(π)`.
pub fn prior_vuln_g(prior: &Dist, g: &GainFn) -> Result<f64> {
    check_same("prior vs gain secrets", prior.labels(), g.secrets())?;
    Ok(prior_vuln_mass(prior.mass(), g))
}

/// Posterior g-vulnerability `V_g(π, C)`.
pub fn post_vuln_g(prior: &Dist, c: &Channel, g: &GainFn) -> Result<f64> {
    check_same("prior vs channel inputs", prior.labels(), c.inputs())?;
    check_same("prior vs gain secrets", prior.labels(), g.secrets())?;
    Ok(post_vuln_mass(prior.mass(), c, g))
}

/// Prior vulnerability `V(π) = max_x π[x]`.
pub fn prior_vulnerability(prior: &Dist) -> f64 {
    prior.max_mass()
}

/// Posterior vulnerability `V(π, C) = Σ_y max_x π[x] C[x,y]`.
pub fn post_vulnerability(prior: &Dist, c: &Channel) -> Result<f64> {
    check_same("prior vs channel inputs", prior.labels(), c.inputs())?;
    Ok(post_vuln_identity(prior.mass(), c))
}

pub(crate) fn post_vuln_identity(mass: &[f64], c: &Channel) -> f64 {
    post_vuln_view(mass, c, GainView::Identity)
}

pub fn entropy_g(prior: &Dist, g: &GainFn) -> Result<Entropy> {
    prior_vuln_g(prior, g).map(Entropy::from_vulnerability)
}

pub fn cond_entropy_g(prior: &Dist, c: &Channel, g: &GainFn) -> Result<Entropy> {
    post_vuln_g(prior, c, g).map(Entropy::from_vulnerability)
}

/// g-leakage `I_g(π, C) = H_g(π) − H_g(π, C) = log2 (V_g(π,C) / V_g(π))`.
pub fn leakage_g(prior: &Dist, c: &Channel, g: &GainFn) -> Result<Leakage> {
    let before = prior_vuln_g(prior, g)?;
    if before == 0.0 {
        return Err(QifError::ZeroVulnerability);
    }
    let after = post_vuln_g(prior, c, g)?;
    let measure = if g.is_identity() {
        MeasureKind::MinEntropy
    } else {
        MeasureKind::GLeakage
    };
    Ok(Leakage {
        bits: (after / before).log2(),
        measure,
    })
}

pub fn min_entropy(prior: &Dist) -> Entropy {
    Entropy::from_vulnerability(prior.max_mass())
}

pub fn cond_min_entropy(prior: &Dist, c: &Channel) -> Result<Entropy> {
    post_vulnerability(prior, c).map(Entropy::from_vulnerability)
}

/// Min-entropy leakage `I∞(π, C)`.
pub fn min_entropy_leakage(prior: &Dist, c: &Channel) -> Result<Leakage> {
    let before = prior.max_mass();
    if before == 0.0 {
        return Err(QifError::ZeroVulnerability);
    }
    let after = post_vulnerability(prior, c)?;
    Ok(Leakage {
        bits: (after / before).log2(),
        measure: MeasureKind::MinEntropy,
    })
}

/// Min-capacity `C∞(C) = log2 Σ_y max_x C[x,y]`, the min-entropy leakage
/// at the uniform prior.
pub fn min_capacity(c: &Channel) -> f64 {
    let ny = c.n_outputs();
    let mut colmax = vec![0.0f64; ny];
    for row in c.rows() {
        for (m, &v) in colmax.iter_mut().zip(row) {
            if v > *m {
                *m = v;
            }
        }
    }
    colmax.iter().sum::<f64>().log2()
}

/// Uniformly random point of the probability simplex over `n` labels.
pub(crate) fn random_simplex_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

/// A certified lower bound on the g-capacity: the best g-leakage found over
/// the uniform prior, every point-mass prior with positive g-vulnerability
/// and `restarts` random priors drawn from `seed`.
pub fn g_capacity_lower(c: &Channel, g: &GainFn, restarts: usize, seed: u64) -> Result<f64> {
    if restarts == 0 {
        return Err(QifError::InvalidArgument("restarts must be >= 1".into()));
    }
    check_same("channel inputs vs gain secrets", c.inputs(), g.secrets())?;
    let n = c.n_inputs();
    let leak = |mass: &[f64]| -> Option<f64> {
        let before = prior_vuln_mass(mass, g);
        if before == 0.0 {
            return None;
        }
        Some((post_vuln_mass(mass, c, g) / before).log2())
    };
    let mut best = f64::NEG_INFINITY;
    let uniform = vec![1.0 / n as f64; n];
    if let Some(l) = leak(&uniform) {
        best = best.max(l);
    }
    for i in 0..n {
        let mut point = vec![0.0; n];
        point[i] = 1.0;
        if let Some(l) = leak(&point) {
            best = best.max(l);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..restarts {
        let p = random_simplex_point(&mut rng, n);
        if let Some(l) = leak(&p) {
            best = best.max(l);
        }
    }
    if best == f64::NEG_INFINITY {
        return Err(QifError::ZeroVulnerability);
    }
    Ok(best.max(0.0))
}

/// Shannon mutual information `I(π, C)` in bits.
pub fn mutual_information(prior: &Dist, c: &Channel) -> Result<f64> {
    if prior.is_sub() {
        return Err(QifError::SubPriorNotSupported);
    }
    check_same("prior vs channel inputs", prior.labels(), c.inputs())?;
    let ny = c.n_outputs();
    let mut py = vec![0.0f64; ny];
    for (x, &p) in prior.mass().iter().enumerate() {
        for (acc, &v) in py.iter_mut().zip(c.row(x)) {
            *acc += p * v;
        }
    }
    let mut info = 0.0;
    for (x, &p) in prior.mass().iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        for (y, &v) in c.row(x).iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            info += p * v * (v / py[y]).log2();
        }
    }
    Ok(info.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gain::{gain_identity, gain_ktries};
    use crate::generators::fixtures;
    use crate::labels::index_labels;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn prior_vulnerabilities() {
        let p = Dist::probability(index_labels(2), vec![0.1, 0.9]).unwrap();
        let id = gain_identity(index_labels(2)).unwrap();
        close(prior_vuln_g(&p, &id).unwrap(), 0.9, 0.0);

        let u = Dist::uniform(index_labels(5)).unwrap();
        let id5 = gain_identity(index_labels(5)).unwrap();
        close(prior_vuln_g(&u, &id5).unwrap(), 0.2, 1e-15);

        // brute force over the six guesses of 2-tries on three secrets
        let u3 = Dist::uniform(index_labels(3)).unwrap();
        let g2 = gain_ktries(index_labels(3), 2).unwrap();
        let brute = (0..g2.n_guesses())
            .map(|w| (0..3).map(|x| g2.value(w, x) / 3.0).sum::<f64>())
            .fold(0.0, f64::max);
        close(brute, 2.0 / 3.0, 1e-15);
        close(prior_vuln_g(&u3, &g2).unwrap(), brute, 1e-15);
    }

    #[test]
    fn posterior_vulnerabilities() {
        let p = Dist::probability(index_labels(2), vec![0.1, 0.9]).unwrap();
        let id = gain_identity(index_labels(2)).unwrap();
        let a = fixtures::ch_a();
        close(post_vuln_g(&p, &a, &id).unwrap(), 0.9, 1e-15);

        let q = Dist::probability(index_labels(3), vec![0.2, 0.3, 0.5]).unwrap();
        let c = Channel::identity(index_labels(3)).unwrap();
        close(post_vulnerability(&q, &c).unwrap(), 1.0, 1e-15);
    }

    #[test]
    fn label_mismatch() {
        let p = Dist::uniform(index_labels(3)).unwrap();
        assert!(matches!(
            post_vulnerability(&p, &fixtures::ch_a()),
            Err(QifError::LabelMismatch(_))
        ));
    }

    #[test]
    fn leakage_examples() {
        let u = Dist::uniform(index_labels(2)).unwrap();
        let l = min_entropy_leakage(&u, &fixtures::ch_a()).unwrap();
        close(l.bits, 1.8f64.log2(), 1e-12);
        close(l.bits, 0.84800, 1e-5);

        let k = Channel::constant(index_labels(2), index_labels(3), &[0.2, 0.3, 0.5]).unwrap();
        let p = Dist::probability(index_labels(2), vec![0.3, 0.7]).unwrap();
        close(min_entropy_leakage(&p, &k).unwrap().bits, 0.0, 1e-15);
    }

    #[test]
    fn zero_vulnerability_is_an_error() {
        let p = Dist::probability(index_labels(2), vec![1.0, 0.0]).unwrap();
        let g = GainFn::table(vec!["w".into()], index_labels(2), vec![vec![0.0, 1.0]]).unwrap();
        assert!(entropy_g(&p, &g).unwrap().is_infinite());
        assert!(matches!(
            leakage_g(&p, &fixtures::ch_a(), &g),
            Err(QifError::ZeroVulnerability)
        ));
    }

    #[test]
    fn min_capacity_examples() {
        close(min_capacity(&fixtures::ch_b()), 1.33f64.log2(), 1e-12);
        close(min_capacity(&fixtures::ch_b()), 0.41143, 1e-5);
        close(
            min_capacity(&Channel::identity(index_labels(8)).unwrap()),
            3.0,
            1e-15,
        );
        let k = Channel::constant(index_labels(4), index_labels(2), &[0.5, 0.5]).unwrap();
        close(min_capacity(&k), 0.0, 1e-15);
    }

    #[test]
    fn g_capacity_lower_examples() {
        let a = fixtures::ch_a();
        let id = gain_identity(index_labels(2)).unwrap();
        let lb = g_capacity_lower(&a, &id, 100, 7).unwrap();
        close(lb, 0.84800, 1e-5);
        assert!(lb <= min_capacity(&a) + 1e-9);

        // fine grid over the 1-simplex never beats the uniform prior
        let mut grid_best: f64 = 0.0;
        for i in 1..2000 {
            let t = i as f64 / 2000.0;
            let p = Dist::probability(index_labels(2), vec![t, 1.0 - t]).unwrap();
            grid_best = grid_best.max(min_entropy_leakage(&p, &a).unwrap().bits);
        }
        close(lb, grid_best, 1e-9);

        let k = Channel::constant(index_labels(3), index_labels(2), &[0.4, 0.6]).unwrap();
        let g2 = gain_ktries(index_labels(3), 2).unwrap();
        close(g_capacity_lower(&k, &g2, 20, 1).unwrap(), 0.0, 1e-12);
        assert!(g_capacity_lower(&k, &g2, 0, 1).is_err());
    }

    #[test]
    fn g_capacity_monotone_in_restarts() {
        let c = fixtures::ch_b();
        let g = gain_ktries(c.inputs().to_vec(), 2).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for r in [1, 5, 20, 80] {
            let v = g_capacity_lower(&c, &g, r, 3).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn mutual_information_examples() {
        let u = Dist::uniform(index_labels(2)).unwrap();
        let xor = fixtures::xor_channel();
        close(mutual_information(&u, &xor).unwrap(), 1.0, 1e-12);
        let half = Channel::constant(index_labels(2), index_labels(2), &[0.5, 0.5]).unwrap();
        close(mutual_information(&u, &half).unwrap(), 0.0, 1e-15);
        let u6 = Dist::uniform(index_labels(6)).unwrap();
        let id = Channel::identity(index_labels(6)).unwrap();
        close(mutual_information(&u6, &id).unwrap(), 6f64.log2(), 1e-12);

        let sub = Dist::new(index_labels(2), vec![0.2, 0.3], true).unwrap();
        assert!(matches!(
            mutual_information(&sub, &half),
            Err(QifError::SubPriorNotSupported)
        ));
    }

    #[test]
    fn parallel_columns_match_sequential() {
        // wide channel that crosses the parallel threshold
        let ny = PAR_COLUMNS + 300;
        let mut rows = vec![vec![0.0; ny]; 3];
        for (x, r) in rows.iter_mut().enumerate() {
            for (y, v) in r.iter_mut().enumerate() {
                *v = ((x * 31 + y * 7) % 13 + 1) as f64;
            }
            let s: f64 = r.iter().sum();
            r.iter_mut().for_each(|v| *v /= s);
        }
        let c = Channel::new(index_labels(3), index_labels(ny), rows).unwrap();
        let p = Dist::probability(index_labels(3), vec![0.2, 0.3, 0.5]).unwrap();
        let g = gain_ktries(index_labels(3), 2).unwrap();
        let seq: f64 = column_block(p.mass(), &c, GainView::of(&g), 0..ny)
            .iter()
            .sum();
        assert_eq!(post_vuln_g(&p, &c, &g).unwrap(), seq);
    }
}
