//! Compositional bounds on the g-entropy and g-leakage of parallel
//! compositions, computed from the components alone.
//!
//! Distinct-input bounds are driven by the support ratios `M^min`, `M^max`
//! between the product of the marginal prior/gain masses and the joint
//! ones; shared-input bounds by `H_g^min(π) = −log2 min π[x]g(w,x)`.
//! None of the functions here materializes a composed channel.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::channel::Channel;
use crate::dist::{Dist, JointDist};
use crate::error::{QifError, Result};
use crate::gain::{gain_identity, GainFn, JointGainFn};
use crate::labels::next_index;
use crate::measures::{check_same, cond_entropy_g, entropy_g, leakage_g, prior_vuln_g};

/// Which quantity a [`BoundReport`] brackets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    PriorEntropy,
    PosteriorEntropy,
    Leakage,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::PriorEntropy => "prior g-entropy",
            Quantity::PosteriorEntropy => "posterior g-entropy",
            Quantity::Leakage => "leakage",
        })
    }
}

/// The result that produced a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Prior entropy of a joint prior vs. its marginals (support ratios).
    PriorEntropyDistinct,
    /// Posterior entropy of `C_1 × … × C_n` (support ratios).
    PosteriorEntropyDistinct,
    /// g-leakage of `C_1 × … × C_n` (support ratios).
    LeakageDistinct,
    /// Posterior entropy of `C_1 ∥ … ∥ C_n` (`H_g^min` correction).
    PosteriorEntropyShared,
    /// g-leakage of `C_1 ∥ … ∥ C_n` (`H_g^min` correction).
    LeakageShared,
    /// Distinct-input leakage bound over refining/refined approximations.
    LeakageDistinctRefined,
    /// Shared-input leakage bound over refining/refined approximations.
    LeakageSharedRefined,
    /// Single channel, low-mass secrets removed from the prior.
    TruncatedSingle,
    /// Shared input, truncated prior, component channels known.
    TruncatedSharedWhitebox,
    /// Distinct inputs, truncated joint prior, component channels known.
    TruncatedDistinctWhitebox,
    /// Distinct inputs, truncated prior, only component leakages known.
    TruncatedDistinctBlackbox,
    /// Shared input, truncated prior, only component leakages known.
    TruncatedSharedBlackbox,
}

impl Provenance {
    pub fn describe(&self) -> &'static str {
        match self {
            Provenance::PriorEntropyDistinct => {
                "sum of marginal g-entropies + log2 M (M^min for lo, M^max for hi)"
            }
            Provenance::PosteriorEntropyDistinct => {
                "sum of component posterior g-entropies + log2 M (M^min for lo, M^max for hi)"
            }
            Provenance::LeakageDistinct => "sum of component g-leakages -/+ log2(M^max/M^min)",
            Provenance::PosteriorEntropyShared => {
                "sum of component posterior g-entropies - (n-1) H_g^min; hi from the best single component"
            }
            Provenance::LeakageShared => {
                "sum of component g-leakages + (n-1)(H_g^min - H_g); lo from the best single component"
            }
            Provenance::LeakageDistinctRefined => {
                "distinct-input bound with lower approximations for lo and upper approximations for hi"
            }
            Provenance::LeakageSharedRefined => {
                "shared-input bound with lower approximations for lo and upper approximations for hi"
            }
            Provenance::TruncatedSingle => "min-entropy leakage on the truncated prior + log2(1 + eps/V(pi',C))",
            Provenance::TruncatedSharedWhitebox => {
                "shared-input bound on the truncated prior + log2(1 + eps/max_i V(pi',C_i))"
            }
            Provenance::TruncatedDistinctWhitebox => {
                "distinct-input bound on the truncated joint prior + log2(1 + eps/V_lb)"
            }
            Provenance::TruncatedDistinctBlackbox => {
                "component leakages with eps corrections -/+ log2(M'^max/M'^min) on the truncated joint prior"
            }
            Provenance::TruncatedSharedBlackbox => {
                "sum of component leakages + (n-1)(H^min(pi') - H(pi')) + log2(maxV/(maxV-eps))"
            }
        }
    }
}

/// An interval `[lo, hi]` on a quantity in bits. Missing sides are `±∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub quantity: Quantity,
    pub lo: f64,
    pub hi: f64,
    pub provenance: Provenance,
    /// Named intermediate values, e.g. `m_min`, `leak[0]`, `epsilon_term`.
    pub parts: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl BoundReport {
    fn new(quantity: Quantity, provenance: Provenance) -> Self {
        BoundReport {
            quantity,
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
            provenance,
            parts: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub(crate) fn part(&mut self, name: impl Into<String>, v: f64) {
        self.parts.insert(name.into(), v);
    }

    pub(crate) fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// `lo − tol ≤ v ≤ hi + tol`.
    pub fn contains(&self, v: f64, tol: f64) -> bool {
        self.lo - tol <= v && v <= self.hi + tol
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "quantity    {}", self.quantity)?;
        writeln!(f, "lo          {}", self.lo)?;
        writeln!(f, "hi          {}", self.hi)?;
        writeln!(f, "provenance  {}", self.provenance.describe())?;
        for (k, v) in &self.parts {
            writeln!(f, "  {k:<22}{v}")?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

/// Support ratios of a joint prior and joint gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportRatios {
    pub m_min: f64,
    pub m_max: f64,
}

impl SupportRatios {
    /// `log2(M^max / M^min)`.
    pub fn log_spread(&self) -> f64 {
        (self.m_max / self.m_min).log2()
    }
}

fn check_joint(pi: &JointDist, g: &JointGainFn) -> Result<()> {
    if pi.arity() != g.arity() {
        return Err(QifError::DimensionMismatch(format!(
            "prior has {} axes, gain has {} components",
            pi.arity(),
            g.arity()
        )));
    }
    for (a, gi) in g.components().iter().enumerate() {
        check_same(
            "prior axis vs gain secrets",
            pi.axis_labels(a),
            gi.secrets(),
        )?;
    }
    Ok(())
}

/// `S_w̄ = { x̄ : π[x̄]·g(w̄, x̄) ≠ 0 }` as index tuples in row-major order.
pub fn support_set(pi: &JointDist, g: &JointGainFn, w: &[usize]) -> Result<Vec<Vec<usize>>> {
    check_joint(pi, g)?;
    if w.len() != g.arity() || w.iter().zip(g.w_dims()).any(|(&i, &d)| i >= d) {
        return Err(QifError::DimensionMismatch(format!(
            "guess tuple {w:?} out of range"
        )));
    }
    let mut out = Vec::new();
    let mut x = vec![0; pi.arity()];
    let mut flat = 0;
    loop {
        if pi.mass()[flat] * g.value(w, &x) != 0.0 {
            out.push(x.clone());
        }
        flat += 1;
        if !next_index(&mut x, pi.dims()) {
            return Ok(out);
        }
    }
}

/// `M^min` and `M^max`: extremes over all guess tuples `w̄` and all
/// `x̄ ∈ S_w̄` of `Π_i π_i[x_i] g_i(w_i, x_i) / (π[x̄] g(w̄, x̄))`.
/// Empty support sets are skipped.
pub fn support_ratios(pi: &JointDist, g: &JointGainFn) -> Result<SupportRatios> {
    check_joint(pi, g)?;
    let n = pi.arity();
    let marg: Vec<&[f64]> = (0..n).map(|a| pi.marginal_mass(a)).collect();
    let w_dims = g.w_dims().to_vec();
    let n_w: usize = w_dims.iter().product();
    let x_dims = pi.dims();

    let scan = |fw: usize| -> (f64, f64) {
        let mut w = vec![0; n];
        let mut r = fw;
        for a in (0..n).rev() {
            w[a] = r % w_dims[a];
            r /= w_dims[a];
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut x = vec![0; n];
        let mut flat = 0;
        loop {
            let joint = pi.mass()[flat] * g.value(&w, &x);
            if joint != 0.0 {
                let mut num = 1.0;
                for a in 0..n {
                    num *= marg[a][x[a]] * g.component(a).value(w[a], x[a]);
                }
                let ratio = num / joint;
                lo = lo.min(ratio);
                hi = hi.max(ratio);
            }
            flat += 1;
            if !next_index(&mut x, x_dims) {
                break;
            }
        }
        (lo, hi)
    };
    let (m_min, m_max) = (0..n_w).into_par_iter().map(scan).reduce(
        || (f64::INFINITY, f64::NEG_INFINITY),
        |a, b| (a.0.min(b.0), a.1.max(b.1)),
    );
    if m_min == f64::INFINITY {
        return Err(QifError::AllSupportsEmpty);
    }
    Ok(SupportRatios { m_min, m_max })
}

pub fn m_min(pi: &JointDist, g: &JointGainFn) -> Result<f64> {
    support_ratios(pi, g).map(|r| r.m_min)
}

pub fn m_max(pi: &JointDist, g: &JointGainFn) -> Result<f64> {
    support_ratios(pi, g).map(|r| r.m_max)
}

/// `H_g^min(π) = −log2 min { π[x] g(w,x) ≠ 0 }`.
pub fn h_g_min(pi: &Dist, g: &GainFn) -> Result<f64> {
    check_same("prior vs gain secrets", pi.labels(), g.secrets())?;
    let mut least = f64::INFINITY;
    for w in 0..g.n_guesses() {
        for (x, &p) in pi.mass().iter().enumerate() {
            let v = p * g.value(w, x);
            if v != 0.0 && v < least {
                least = v;
            }
        }
    }
    if least == f64::INFINITY {
        return Err(QifError::AllZero);
    }
    Ok(-least.log2())
}

/// `H^min(π) = −log2 min { π[x] ≠ 0 }`.
pub fn h_min(pi: &Dist) -> Result<f64> {
    let least = pi
        .mass()
        .iter()
        .copied()
        .filter(|&p| p != 0.0)
        .fold(f64::INFINITY, f64::min);
    if least == f64::INFINITY {
        return Err(QifError::AllZero);
    }
    Ok(-least.log2())
}

/// Product of identity gains over the axes of `pi`.
pub fn identity_joint_gain(pi: &JointDist) -> Result<JointGainFn> {
    let comps = pi
        .axes()
        .iter()
        .map(|a| gain_identity(a.clone()))
        .collect::<Result<Vec<_>>>()?;
    JointGainFn::product(comps)
}

fn check_components(pi: &JointDist, cs: &[&Channel]) -> Result<()> {
    if cs.len() != pi.arity() {
        return Err(QifError::DimensionMismatch(format!(
            "{} channels for a prior with {} axes",
            cs.len(),
            pi.arity()
        )));
    }
    Ok(())
}

/// Bounds on `H_g(π)` from the marginal g-entropies. The upper side is
/// only available for jointly supported priors.
pub fn bound_prior_entropy(pi: &JointDist, g: &JointGainFn) -> Result<BoundReport> {
    let ratios = support_ratios(pi, g)?;
    let mut r = BoundReport::new(Quantity::PriorEntropy, Provenance::PriorEntropyDistinct);
    let mut sum = 0.0;
    for a in 0..pi.arity() {
        let h = entropy_g(&pi.marginal(a), g.component(a))?.bits;
        r.part(format!("h[{a}]"), h);
        sum += h;
    }
    r.part("m_min", ratios.m_min);
    r.part("m_max", ratios.m_max);
    r.lo = sum + ratios.m_min.log2();
    if pi.is_jointly_supported() {
        r.hi = sum + ratios.m_max.log2();
    } else {
        r.note("prior is not jointly supported: no upper bound");
    }
    Ok(r)
}

/// Bounds on `H_g(π, C_1 × … × C_n)`.
pub fn bound_posterior_distinct(
    pi: &JointDist,
    cs: &[&Channel],
    g: &JointGainFn,
) -> Result<BoundReport> {
    check_components(pi, cs)?;
    let ratios = support_ratios(pi, g)?;
    let mut r = BoundReport::new(
        Quantity::PosteriorEntropy,
        Provenance::PosteriorEntropyDistinct,
    );
    let mut sum = 0.0;
    for (a, c) in cs.iter().enumerate() {
        let h = cond_entropy_g(&pi.marginal(a), c, g.component(a))?.bits;
        r.part(format!("h_post[{a}]"), h);
        sum += h;
    }
    r.part("m_min", ratios.m_min);
    r.part("m_max", ratios.m_max);
    r.lo = sum + ratios.m_min.log2();
    if pi.is_jointly_supported() {
        r.hi = sum + ratios.m_max.log2();
    } else {
        r.note("prior is not jointly supported: no upper bound");
    }
    Ok(r)
}

fn component_leakages(
    pi: &JointDist,
    cs: &[&Channel],
    g: &JointGainFn,
    r: &mut BoundReport,
    tag: &str,
) -> Result<f64> {
    let mut sum = 0.0;
    for (a, c) in cs.iter().enumerate() {
        let l = leakage_g(&pi.marginal(a), c, g.component(a))?.bits;
        r.part(format!("{tag}[{a}]"), l);
        sum += l;
    }
    Ok(sum)
}

/// Bounds on `I_g(π, C_1 × … × C_n)` for a jointly supported prior:
/// `Σ I_{g_i}(π_i, C_i) ∓ log2(M^max / M^min)`.
pub fn bound_leakage_distinct(
    pi: &JointDist,
    cs: &[&Channel],
    g: &JointGainFn,
) -> Result<BoundReport> {
    check_components(pi, cs)?;
    if !pi.is_jointly_supported() {
        return Err(QifError::NotJointlySupported);
    }
    let ratios = support_ratios(pi, g)?;
    let mut r = BoundReport::new(Quantity::Leakage, Provenance::LeakageDistinct);
    let sum = component_leakages(pi, cs, g, &mut r, "leak")?;
    let spread = ratios.log_spread();
    r.part("m_min", ratios.m_min);
    r.part("m_max", ratios.m_max);
    r.part("log_spread", spread);
    r.lo = sum - spread;
    r.hi = sum + spread;
    Ok(r)
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

/// Bounds on `H_g(π, C_1 ∥ … ∥ C_n)`.
///
/// `lo = Σ H_g(π, C_i) − (n−1) H_g^min(π)`. Every `C_i` is a
/// post-processing of the composition, so `hi = min_i H_g(π, C_i)`.
pub fn bound_posterior_shared(pi: &Dist, cs: &[&Channel], g: &GainFn) -> Result<BoundReport> {
    check_shared(pi, cs)?;
    let hmin = h_g_min(pi, g)?;
    let mut r = BoundReport::new(
        Quantity::PosteriorEntropy,
        Provenance::PosteriorEntropyShared,
    );
    let mut sum = 0.0;
    let mut best = f64::INFINITY;
    for (i, c) in cs.iter().enumerate() {
        let h = cond_entropy_g(pi, c, g)?.bits;
        r.part(format!("h_post[{i}]"), h);
        sum += h;
        best = best.min(h);
    }
    r.part("h_g_min", hmin);
    r.lo = sum - (cs.len() - 1) as f64 * hmin;
    r.hi = best;
    Ok(r)
}

/// Bounds on `I_g(π, C_1 ∥ … ∥ C_n)`:
/// `hi = Σ I_g(π, C_i) + (n−1)(H_g^min(π) − H_g(π))`, `lo = max_i I_g(π, C_i)`.
pub fn bound_leakage_shared(pi: &Dist, cs: &[&Channel], g: &GainFn) -> Result<BoundReport> {
    check_shared(pi, cs)?;
    if prior_vuln_g(pi, g)? == 0.0 {
        return Err(QifError::ZeroVulnerability);
    }
    let mut r = BoundReport::new(Quantity::Leakage, Provenance::LeakageShared);
    let (sum, best) = shared_leakages(pi, cs, g, &mut r, "leak")?;
    let hmin = h_g_min(pi, g)?;
    let h = entropy_g(pi, g)?.bits;
    let corr = (cs.len() - 1) as f64 * (hmin - h);
    r.part("h_g_min", hmin);
    r.part("h_g", h);
    r.part("correction", corr);
    r.hi = sum + corr;
    r.lo = best;
    Ok(r)
}

fn shared_leakages(
    pi: &Dist,
    cs: &[&Channel],
    g: &GainFn,
    r: &mut BoundReport,
    tag: &str,
) -> Result<(f64, f64)> {
    let mut sum = 0.0;
    let mut best = f64::NEG_INFINITY;
    for (i, c) in cs.iter().enumerate() {
        let l = leakage_g(pi, c, g)?.bits;
        r.part(format!("{tag}[{i}]"), l);
        sum += l;
        best = best.max(l);
    }
    Ok((sum, best))
}

/// Distinct-input leakage bounds when each `C_i` is only known through
/// approximations `lower[i] ⊑ C_i ⊑ upper[i]`.
pub fn bound_leakage_distinct_refined(
    pi: &JointDist,
    lower: &[&Channel],
    upper: &[&Channel],
    g: &JointGainFn,
) -> Result<BoundReport> {
    check_components(pi, lower)?;
    check_components(pi, upper)?;
    if !pi.is_jointly_supported() {
        return Err(QifError::NotJointlySupported);
    }
    let ratios = support_ratios(pi, g)?;
    let mut r = BoundReport::new(Quantity::Leakage, Provenance::LeakageDistinctRefined);
    let lo_sum = component_leakages(pi, lower, g, &mut r, "leak_lower")?;
    let hi_sum = component_leakages(pi, upper, g, &mut r, "leak_upper")?;
    let spread = ratios.log_spread();
    r.part("m_min", ratios.m_min);
    r.part("m_max", ratios.m_max);
    r.part("log_spread", spread);
    r.lo = lo_sum - spread;
    r.hi = hi_sum + spread;
    Ok(r)
}

/// Shared-input leakage bounds when each `C_i` is only known through
/// approximations `lower[i] ⊑ C_i ⊑ upper[i]`.
pub fn bound_leakage_shared_refined(
    pi: &Dist,
    lower: &[&Channel],
    upper: &[&Channel],
    g: &GainFn,
) -> Result<BoundReport> {
    check_shared(pi, lower)?;
    check_shared(pi, upper)?;
    if lower.len() != upper.len() {
        return Err(QifError::DimensionMismatch(format!(
            "{} lower vs {} upper approximations",
            lower.len(),
            upper.len()
        )));
    }
    if prior_vuln_g(pi, g)? == 0.0 {
        return Err(QifError::ZeroVulnerability);
    }
    let mut r = BoundReport::new(Quantity::Leakage, Provenance::LeakageSharedRefined);
    let (_, best_lo) = shared_leakages(pi, lower, g, &mut r, "leak_lower")?;
    let (sum_hi, _) = shared_leakages(pi, upper, g, &mut r, "leak_upper")?;
    let hmin = h_g_min(pi, g)?;
    let h = entropy_g(pi, g)?.bits;
    let corr = (upper.len() - 1) as f64 * (hmin - h);
    r.part("h_g_min", hmin);
    r.part("h_g", h);
    r.part("correction", corr);
    r.lo = best_lo;
    r.hi = sum_hi + corr;
    Ok(r)
}
