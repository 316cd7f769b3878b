//! Input approximation: remove low-probability secrets from the prior,
//! bound the leakage on the resulting sub-prior, and pay for the removed
//! mass `ε` with an explicit error term.
//!
//! Everything here is for min-entropy leakage (identity gains).

use crate::bounds::{
    h_min, identity_joint_gain, support_ratios, BoundReport, Provenance, Quantity,
};
use crate::channel::Channel;
use crate::dist::{Dist, JointDist};
use crate::error::{QifError, Result};
use crate::labels::next_index;
use crate::measures::{check_same, min_entropy, min_entropy_leakage, post_vulnerability};

/// Slack when comparing removed mass against the budget.
const BUDGET_SLACK: f64 = 1e-12;

/// Note attached to a joint truncation that could not keep the prior
/// jointly supported.
pub const CANNOT_PRESERVE_JOINT_SUPPORT: &str = "CannotPreserveJointSupport";

/// A prior with its lowest-mass secrets zeroed.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncation {
    pub removed: Vec<String>,
    pub epsilon_actual: f64,
    pub sub_prior: Dist,
    /// Nothing was removed; `sub_prior` is the original prior.
    pub trivial: bool,
}

/// A joint prior with whole marginal labels dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTruncation {
    /// Dropped labels per axis; every tuple touching one is removed.
    pub dropped: Vec<Vec<String>>,
    pub epsilon_actual: f64,
    pub sub_prior: JointDist,
    pub trivial: bool,
    pub note: Option<String>,
}

fn check_epsilon(eps: f64) -> Result<()> {
    if eps.is_nan() || !(0.0..1.0).contains(&eps) {
        return Err(QifError::EpsilonOutOfRange(eps));
    }
    Ok(())
}

/// Removes secrets in ascending order of mass (ties by label order) while
/// the removed total stays within `eps`. Zero-mass secrets are left alone
/// and no secret of maximal mass is ever removed, so `V(π') = V(π)`.
pub fn truncate_prior(pi: &Dist, eps: f64) -> Result<Truncation> {
    check_epsilon(eps)?;
    let max = pi.max_mass();
    let mut order: Vec<usize> = (0..pi.len()).filter(|&i| pi.mass()[i] != 0.0).collect();
    order.sort_by(|&a, &b| pi.mass()[a].total_cmp(&pi.mass()[b]).then(a.cmp(&b)));
    let mut mass = pi.mass().to_vec();
    let mut removed = Vec::new();
    let mut total = 0.0;
    for i in order {
        let m = pi.mass()[i];
        if m == max || total + m > eps + BUDGET_SLACK {
            break;
        }
        total += m;
        mass[i] = 0.0;
        removed.push(pi.labels()[i].clone());
    }
    if removed.is_empty() {
        return Ok(Truncation {
            removed,
            epsilon_actual: 0.0,
            sub_prior: pi.clone(),
            trivial: true,
        });
    }
    Ok(Truncation {
        removed,
        epsilon_actual: total,
        sub_prior: Dist::new(pi.labels().to_vec(), mass, true)?,
        trivial: false,
    })
}

/// Zeroes every tuple touching a dropped label.
fn mask_joint(pi: &JointDist, dropped: &[Vec<bool>]) -> Vec<f64> {
    let mut mass = pi.mass().to_vec();
    let mut idx = vec![0; pi.arity()];
    for m in mass.iter_mut() {
        if idx.iter().enumerate().any(|(a, &i)| dropped[a][i]) {
            *m = 0.0;
        }
        next_index(&mut idx, pi.dims());
    }
    mass
}

/// Drops whole marginal labels, cheapest first and alternating axes,
/// while the removed mass fits in `eps`, then keeps the longest prefix of
/// drops that leaves the sub-prior jointly supported.
///
/// Labels of a maximal joint cell and labels of maximal marginal mass are
/// never dropped. When no prefix is jointly supported the result is the
/// trivial truncation with [`CANNOT_PRESERVE_JOINT_SUPPORT`] in `note`.
pub fn truncate_joint_prior(pi: &JointDist, eps: f64) -> Result<JointTruncation> {
    check_epsilon(eps)?;
    let n = pi.arity();
    let trivial = |note: Option<String>| JointTruncation {
        dropped: vec![Vec::new(); n],
        epsilon_actual: 0.0,
        sub_prior: pi.clone(),
        trivial: true,
        note,
    };

    // labels that must stay
    let mut protected: Vec<Vec<bool>> = pi.dims().iter().map(|&d| vec![false; d]).collect();
    let joint_max = pi.mass().iter().copied().fold(0.0, f64::max);
    let mut idx = vec![0; n];
    for &m in pi.mass() {
        if m == joint_max {
            for (a, &i) in idx.iter().enumerate() {
                protected[a][i] = true;
            }
        }
        next_index(&mut idx, pi.dims());
    }
    for (a, prot) in protected.iter_mut().enumerate() {
        let marg = pi.marginal_mass(a);
        let mmax = marg.iter().copied().fold(0.0, f64::max);
        for (i, &m) in marg.iter().enumerate() {
            if m == mmax {
                prot[i] = true;
            }
        }
    }

    let queues: Vec<Vec<usize>> = (0..n)
        .map(|a| {
            let marg = pi.marginal_mass(a);
            let mut q: Vec<usize> = (0..marg.len()).filter(|&i| marg[i] != 0.0).collect();
            q.sort_by(|&x, &y| marg[x].total_cmp(&marg[y]).then(x.cmp(&y)));
            q
        })
        .collect();
    let mut cursor = vec![0usize; n];
    let mut open = vec![true; n];
    let mut dropped: Vec<Vec<bool>> = pi.dims().iter().map(|&d| vec![false; d]).collect();
    let mut drops: Vec<(usize, usize)> = Vec::new();
    let mut removed_total = 0.0;
    let mut current = pi.mass().to_vec();
    while open.iter().any(|&o| o) {
        for a in 0..n {
            if !open[a] {
                continue;
            }
            let Some(&label) = queues[a].get(cursor[a]) else {
                open[a] = false;
                continue;
            };
            if protected[a][label] {
                open[a] = false;
                continue;
            }
            dropped[a][label] = true;
            let next = mask_joint(pi, &dropped);
            let cost: f64 = current.iter().zip(&next).map(|(c, m)| c - m).sum();
            if removed_total + cost > eps + BUDGET_SLACK {
                dropped[a][label] = false;
                open[a] = false;
                continue;
            }
            removed_total += cost;
            current = next;
            drops.push((a, label));
            cursor[a] += 1;
        }
    }

    // longest jointly supported prefix
    while !drops.is_empty() {
        let sub = pi.with_mass(mask_joint(pi, &dropped))?;
        if sub.is_jointly_supported() {
            let epsilon_actual = pi.total() - sub.total();
            let names = (0..n)
                .map(|a| {
                    (0..pi.dims()[a])
                        .filter(|&i| dropped[a][i])
                        .map(|i| pi.axis_labels(a)[i].clone())
                        .collect()
                })
                .collect();
            return Ok(JointTruncation {
                dropped: names,
                epsilon_actual: epsilon_actual.max(0.0),
                sub_prior: sub,
                trivial: false,
                note: None,
            });
        }
        let (a, label) = drops.pop().expect("nonempty");
        dropped[a][label] = false;
    }
    if pi.is_jointly_supported() {
        Ok(trivial(None))
    } else {
        log::warn!("no truncation within the budget leaves the prior jointly supported");
        Ok(trivial(Some(CANNOT_PRESERVE_JOINT_SUPPORT.to_string())))
    }
}

/// Single-channel sandwich:
/// `I∞(π',C) ≤ I∞(π,C) ≤ I∞(π',C) + log2(1 + ε/V(π',C))`.
pub fn sandwich_single(pi: &Dist, c: &Channel, eps: f64) -> Result<BoundReport> {
    let t = truncate_prior(pi, eps)?;
    let lo = min_entropy_leakage(&t.sub_prior, c)?.bits;
    let v_post = post_vulnerability(&t.sub_prior, c)?;
    let term = (1.0 + t.epsilon_actual / v_post).log2();
    let mut r = report(Provenance::TruncatedSingle, &t);
    r.part("leak_truncated", lo);
    r.part("v_post_truncated", v_post);
    r.part("epsilon_term", term);
    r.lo = lo;
    r.hi = lo + term;
    Ok(r)
}

fn report(provenance: Provenance, t: &Truncation) -> BoundReport {
    let mut r = BoundReport {
        quantity: Quantity::Leakage,
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
        provenance,
        parts: Default::default(),
        notes: Vec::new(),
    };
    r.part("epsilon_actual", t.epsilon_actual);
    r.part("removed", t.removed.len() as f64);
    if t.trivial {
        r.note("trivial truncation: nothing removed");
    }
    r
}

fn check_shared(pi: &Dist, cs: &[&Channel]) -> Result<()> {
    if cs.is_empty() {
        return Err(QifError::InvalidArgument("no component channels".into()));
    }
    for c in cs {
        check_same("prior vs channel inputs", pi.labels(), c.inputs())?;
    }
    Ok(())
}

/// Upper bound on `I∞(π, C_1 ∥ … ∥ C_n)` when the components are known:
/// the shared-input bound evaluated on the truncated prior `π'`, plus
/// `log2(1 + ε/V_lb)` with `V_lb = max_i V(π', C_i) ≤ V(π', ∥C_i)`.
/// The lower side is `max_i I∞(π, C_i)`.
pub fn whitebox_shared_bound(pi: &Dist, cs: &[&Channel], eps: f64) -> Result<BoundReport> {
    check_shared(pi, cs)?;
    let t = truncate_prior(pi, eps)?;
    let p = &t.sub_prior;
    let mut r = report(Provenance::TruncatedSharedWhitebox, &t);
    let mut sum = 0.0;
    let mut v_lb: f64 = 0.0;
    let mut best = f64::NEG_INFINITY;
    for (i, c) in cs.iter().enumerate() {
        let l = min_entropy_leakage(p, c)?.bits;
        r.part(format!("leak_truncated[{i}]"), l);
        sum += l;
        v_lb = v_lb.max(post_vulnerability(p, c)?);
        best = best.max(min_entropy_leakage(pi, c)?.bits);
    }
    let hmin = h_min(p)?;
    let h = min_entropy(p).bits;
    let corr = (cs.len() - 1) as f64 * (hmin - h);
    let term = (1.0 + t.epsilon_actual / v_lb).log2();
    r.part("h_min_truncated", hmin);
    r.part("h_truncated", h);
    r.part("correction", corr);
    r.part("v_post_lower", v_lb);
    r.part("epsilon_term", term);
    r.lo = best;
    r.hi = sum + corr + term;
    Ok(r)
}

/// Upper bound on `I∞(π, C_1 ∥ … ∥ C_n)` from the component leakages
/// `leaks[i] = I∞(π, C_i)` and posterior vulnerabilities
/// `vulns[i] = V(π, C_i)` only.
pub fn blackbox_shared_bound(
    pi: &Dist,
    leaks: &[f64],
    vulns: &[f64],
    eps: f64,
) -> Result<BoundReport> {
    check_epsilon(eps)?;
    check_lengths(leaks, vulns)?;
    let max_v = vulns.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if eps >= max_v {
        return Err(QifError::EpsilonTooLarge {
            epsilon: eps,
            vulnerability: max_v,
        });
    }
    let t = truncate_prior(pi, eps)?;
    let p = &t.sub_prior;
    let mut r = report(Provenance::TruncatedSharedBlackbox, &t);
    let hmin = h_min(p)?;
    let h = min_entropy(p).bits;
    let corr = (leaks.len() - 1) as f64 * (hmin - h);
    let term = (max_v / (max_v - t.epsilon_actual)).log2();
    let sum: f64 = leaks.iter().sum();
    r.part("leak_sum", sum);
    r.part("h_min_truncated", hmin);
    r.part("h_truncated", h);
    r.part("correction", corr);
    r.part("max_v_post", max_v);
    r.part("epsilon_term", term);
    r.lo = leaks.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    r.hi = sum + corr + term;
    Ok(r)
}

fn check_lengths(leaks: &[f64], vulns: &[f64]) -> Result<()> {
    if leaks.is_empty() {
        return Err(QifError::InvalidArgument("no component leakages".into()));
    }
    if leaks.len() != vulns.len() {
        return Err(QifError::LengthMismatch {
            what: "component vulnerabilities",
            expected: leaks.len(),
            got: vulns.len(),
        });
    }
    for &v in leaks.iter().chain(vulns) {
        if !v.is_finite() {
            return Err(QifError::NonFinite {
                what: "component leakage or vulnerability",
                value: v,
            });
        }
    }
    Ok(())
}

fn joint_report(provenance: Provenance, t: &JointTruncation) -> Result<BoundReport> {
    if !t.sub_prior.is_jointly_supported() {
        return Err(QifError::NotJointlySupported);
    }
    let mut r = BoundReport {
        quantity: Quantity::Leakage,
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
        provenance,
        parts: Default::default(),
        notes: Vec::new(),
    };
    r.part("epsilon_actual", t.epsilon_actual);
    r.part(
        "dropped_labels",
        t.dropped.iter().map(Vec::len).sum::<usize>() as f64,
    );
    if t.trivial {
        r.note("trivial truncation: nothing removed");
    }
    Ok(r)
}

fn joint_max(pi: &JointDist) -> f64 {
    pi.mass().iter().copied().fold(0.0, f64::max)
}

/// Bounds on `I∞(π, C_1 × … × C_n)` from the component leakages
/// `leaks[i] = I∞(π_i, C_i)` and posterior vulnerabilities
/// `vulns[i] = V(π_i, C_i)` of the marginals, using a truncated joint prior
/// `π'` that is jointly supported.
///
/// When truncation lowers the maximal joint or marginal mass, the lower
/// bound pays `log2(V(π)/V(π'))` and the upper bound pays
/// `Σ log2(V(π_i)/V(π'_i))`; both vanish otherwise. The `ε` term of the
/// upper bound uses `V_lb`, the best available lower bound on
/// `V(π', C_1 × … × C_n)`.
pub fn blackbox_distinct_bounds(
    pi: &JointDist,
    leaks: &[f64],
    vulns: &[f64],
    eps: f64,
) -> Result<BoundReport> {
    check_epsilon(eps)?;
    check_lengths(leaks, vulns)?;
    if leaks.len() != pi.arity() {
        return Err(QifError::DimensionMismatch(format!(
            "{} component leakages for a prior with {} axes",
            leaks.len(),
            pi.arity()
        )));
    }
    let min_v = vulns.iter().copied().fold(f64::INFINITY, f64::min);
    if eps >= min_v {
        return Err(QifError::EpsilonTooLarge {
            epsilon: eps,
            vulnerability: min_v,
        });
    }
    let t = truncate_joint_prior(pi, eps)?;
    let mut r = joint_report(Provenance::TruncatedDistinctBlackbox, &t)?;
    let p = &t.sub_prior;
    let e = t.epsilon_actual;
    let ratios = support_ratios(p, &identity_joint_gain(p)?)?;
    let spread = ratios.log_spread();

    let mut lo = -spread;
    let mut hi = spread;
    let mut marginal_corr = 0.0;
    for (i, (&l, &v)) in leaks.iter().zip(vulns).enumerate() {
        let lo_term = (v / (v - e)).log2();
        r.part(format!("epsilon_term_lo[{i}]"), lo_term);
        lo += l - lo_term;
        hi += l;
        marginal_corr += (pi.marginal(i).max_mass() / p.marginal(i).max_mass()).log2();
    }
    let joint_corr = (joint_max(pi) / joint_max(p)).log2();

    // lower bounds on V(π', ×C_i)
    let mut v_lb = joint_max(p);
    let prod_trunc: f64 = vulns.iter().map(|v| v - e).product();
    v_lb = v_lb.max(prod_trunc / ratios.m_max);
    if pi.is_jointly_supported() {
        let full = support_ratios(pi, &identity_joint_gain(pi)?)?;
        let prod: f64 = vulns.iter().product();
        v_lb = v_lb.max(prod / full.m_max - e);
    }
    let hi_term = (1.0 + e / v_lb).log2();

    r.part("m_min_truncated", ratios.m_min);
    r.part("m_max_truncated", ratios.m_max);
    r.part("log_spread", spread);
    r.part("joint_max_correction", joint_corr);
    r.part("marginal_max_correction", marginal_corr);
    r.part("v_post_lower", v_lb);
    r.part("epsilon_term_hi", hi_term);
    r.lo = lo - joint_corr;
    r.hi = hi + marginal_corr + hi_term;
    Ok(r)
}

/// Bounds on `I∞(π, C_1 × … × C_n)` when the components are known: the
/// distinct-input bound evaluated on a jointly supported truncation `π'`
/// plus the truncation error term.
pub fn whitebox_distinct_bounds(pi: &JointDist, cs: &[&Channel], eps: f64) -> Result<BoundReport> {
    if cs.len() != pi.arity() {
        return Err(QifError::DimensionMismatch(format!(
            "{} channels for a prior with {} axes",
            cs.len(),
            pi.arity()
        )));
    }
    let t = truncate_joint_prior(pi, eps)?;
    let mut r = joint_report(Provenance::TruncatedDistinctWhitebox, &t)?;
    let p = &t.sub_prior;
    let ratios = support_ratios(p, &identity_joint_gain(p)?)?;
    let spread = ratios.log_spread();
    let mut sum = 0.0;
    let mut prod_v = 1.0;
    for (i, c) in cs.iter().enumerate() {
        let m = p.marginal(i);
        let l = min_entropy_leakage(&m, c)?.bits;
        r.part(format!("leak_truncated[{i}]"), l);
        sum += l;
        prod_v *= post_vulnerability(&m, c)?;
    }
    let v_lb = joint_max(p).max(prod_v / ratios.m_max);
    let term = (1.0 + t.epsilon_actual / v_lb).log2();
    let joint_corr = (joint_max(pi) / joint_max(p)).log2();
    r.part("m_min_truncated", ratios.m_min);
    r.part("m_max_truncated", ratios.m_max);
    r.part("log_spread", spread);
    r.part("joint_max_correction", joint_corr);
    r.part("v_post_lower", v_lb);
    r.part("epsilon_term", term);
    r.lo = sum - spread - joint_corr;
    r.hi = sum + spread + term;
    Ok(r)
}
