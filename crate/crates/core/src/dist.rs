//! Priors over secret spaces: plain distributions, sub-distributions and
//! joint distributions over product spaces.

use crate::error::{QifError, Result};
use crate::labels::{check_unique, next_index, product_labels, strides};

/// Tolerance on the total mass of a probability distribution.
pub const NORMALIZATION_TOL: f64 = 1e-9;
/// Slack allowed above one for the total of a sub-distribution.
pub const SUB_TOTAL_SLACK: f64 = 1e-12;

/// A labeled (sub-)probability vector over a finite space.
#[derive(Debug, Clone, PartialEq)]
pub struct Dist {
    labels: Vec<String>,
    mass: Vec<f64>,
    is_sub: bool,
}

impl Dist {
    /// Validates and builds a distribution.
    ///
    /// With `allow_sub` the total may fall below one; the result is then
    /// flagged as a sub-distribution. A total within [`NORMALIZATION_TOL`]
    /// of one always yields a probability distribution.
    pub fn new(labels: Vec<String>, mass: Vec<f64>, allow_sub: bool) -> Result<Self> {
        if labels.len() != mass.len() {
            return Err(QifError::LengthMismatch {
                what: "mass",
                expected: labels.len(),
                got: mass.len(),
            });
        }
        if labels.is_empty() {
            return Err(QifError::EmptySecretSpace);
        }
        check_unique(&labels)?;
        for (l, &m) in labels.iter().zip(&mass) {
            if !m.is_finite() {
                return Err(QifError::NonFinite {
                    what: "distribution mass",
                    value: m,
                });
            }
            if m < 0.0 {
                return Err(QifError::NegativeMass {
                    label: l.clone(),
                    value: m,
                });
            }
            if m > 1.0 {
                return Err(QifError::MassExceedsOne {
                    what: format!("label `{l}`"),
                    value: m,
                });
            }
        }
        let sum: f64 = mass.iter().sum();
        let is_sub = if (sum - 1.0).abs() <= NORMALIZATION_TOL {
            false
        } else if sum > 1.0 {
            return Err(QifError::MassExceedsOne {
                what: "total".into(),
                value: sum,
            });
        } else if allow_sub {
            true
        } else {
            return Err(QifError::NotNormalized { sum });
        };
        Ok(Dist {
            labels,
            mass,
            is_sub,
        })
    }

    /// A probability distribution (no sub-distributions).
    pub fn probability(labels: Vec<String>, mass: Vec<f64>) -> Result<Self> {
        Self::new(labels, mass, false)
    }

    pub fn uniform(labels: Vec<String>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(QifError::EmptySecretSpace);
        }
        Self::new(labels, vec![1.0 / n as f64; n], false)
    }

    /// Point mass on the label at `index`.
    pub fn point(labels: Vec<String>, index: usize) -> Result<Self> {
        if index >= labels.len() {
            return Err(QifError::InvalidArgument(format!(
                "point index {index} out of range"
            )));
        }
        let mut mass = vec![0.0; labels.len()];
        mass[index] = 1.0;
        Self::new(labels, mass, false)
    }

    pub(crate) fn from_parts_unchecked(labels: Vec<String>, mass: Vec<f64>, is_sub: bool) -> Self {
        Dist {
            labels,
            mass,
            is_sub,
        }
    }

    /// Same labels, new masses; sub-distributions allowed.
    pub fn with_mass(&self, mass: Vec<f64>) -> Result<Self> {
        Self::new(self.labels.clone(), mass, true)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn is_sub(&self) -> bool {
        self.is_sub
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.mass.iter().sum()
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.mass[i])
    }

    /// Largest single mass, i.e. the prior vulnerability.
    pub fn max_mass(&self) -> f64 {
        self.mass.iter().copied().fold(0.0, f64::max)
    }
}

/// Alias for [`Dist::new`].
pub fn make_dist(labels: Vec<String>, mass: Vec<f64>, allow_sub: bool) -> Result<Dist> {
    Dist::new(labels, mass, allow_sub)
}

/// A (sub-)distribution over a product space `X_1 × … × X_n`, stored
/// row-major. Marginals are computed once at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDist {
    axes: Vec<Vec<String>>,
    dims: Vec<usize>,
    strides: Vec<usize>,
    mass: Vec<f64>,
    marginals: Vec<Vec<f64>>,
    is_sub: bool,
}

impl JointDist {
    pub fn new(axes: Vec<Vec<String>>, mass: Vec<f64>) -> Result<Self> {
        if axes.is_empty() {
            return Err(QifError::EmptySecretSpace);
        }
        for axis in &axes {
            if axis.is_empty() {
                return Err(QifError::EmptySecretSpace);
            }
            check_unique(axis)?;
        }
        let dims: Vec<usize> = axes.iter().map(Vec::len).collect();
        let size: usize = dims.iter().product();
        if mass.len() != size {
            return Err(QifError::LengthMismatch {
                what: "joint mass",
                expected: size,
                got: mass.len(),
            });
        }
        for &m in &mass {
            if !m.is_finite() {
                return Err(QifError::NonFinite {
                    what: "joint mass",
                    value: m,
                });
            }
            if !(0.0..=1.0).contains(&m) {
                return Err(QifError::MassExceedsOne {
                    what: "joint entry".into(),
                    value: m,
                });
            }
        }
        let total: f64 = mass.iter().sum();
        if total > 1.0 + SUB_TOTAL_SLACK {
            return Err(QifError::MassExceedsOne {
                what: "joint total".into(),
                value: total,
            });
        }
        let strides = strides(&dims);
        let mut marginals: Vec<Vec<f64>> = dims.iter().map(|&d| vec![0.0; d]).collect();
        let mut idx = vec![0; dims.len()];
        let mut flat = 0;
        loop {
            let m = mass[flat];
            for (axis, &i) in idx.iter().enumerate() {
                marginals[axis][i] += m;
            }
            flat += 1;
            if !next_index(&mut idx, &dims) {
                break;
            }
        }
        Ok(JointDist {
            axes,
            dims,
            strides,
            mass,
            marginals,
            is_sub: total < 1.0 - NORMALIZATION_TOL,
        })
    }

    /// Two-axis joint prior from a row-per-`x1` table.
    pub fn from_matrix(rows: Vec<String>, cols: Vec<String>, table: Vec<Vec<f64>>) -> Result<Self> {
        if table.len() != rows.len() {
            return Err(QifError::LengthMismatch {
                what: "joint rows",
                expected: rows.len(),
                got: table.len(),
            });
        }
        let mut mass = Vec::with_capacity(rows.len() * cols.len());
        for r in table {
            if r.len() != cols.len() {
                return Err(QifError::LengthMismatch {
                    what: "joint row",
                    expected: cols.len(),
                    got: r.len(),
                });
            }
            mass.extend(r);
        }
        Self::new(vec![rows, cols], mass)
    }

    /// Independent product `π_1 × … × π_n`.
    pub fn product(parts: &[&Dist]) -> Result<Self> {
        if parts.is_empty() {
            return Err(QifError::EmptySecretSpace);
        }
        let axes: Vec<Vec<String>> = parts.iter().map(|d| d.labels().to_vec()).collect();
        let dims: Vec<usize> = parts.iter().map(|d| d.len()).collect();
        let mut mass = Vec::with_capacity(dims.iter().product());
        let mut idx = vec![0; dims.len()];
        loop {
            mass.push(idx.iter().zip(parts).map(|(&i, d)| d.mass()[i]).product());
            if !next_index(&mut idx, &dims) {
                break;
            }
        }
        Self::new(axes, mass)
    }

    /// Same axes, new masses.
    pub fn with_mass(&self, mass: Vec<f64>) -> Result<Self> {
        Self::new(self.axes.clone(), mass)
    }

    pub fn arity(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Vec<String>] {
        &self.axes
    }

    pub fn axis_labels(&self, axis: usize) -> &[String] {
        &self.axes[axis]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn is_sub(&self) -> bool {
        self.is_sub
    }

    pub fn total(&self) -> f64 {
        self.mass.iter().sum()
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.mass[self.flat_index(idx)]
    }

    /// Raw marginal masses along `axis`.
    pub fn marginal_mass(&self, axis: usize) -> &[f64] {
        &self.marginals[axis]
    }

    /// Marginal along `axis`; a sub-distribution iff this joint is one.
    pub fn marginal(&self, axis: usize) -> Dist {
        Dist::from_parts_unchecked(
            self.axes[axis].clone(),
            self.marginals[axis].clone(),
            self.is_sub,
        )
    }

    pub fn marginals(&self) -> Vec<Dist> {
        (0..self.arity()).map(|a| self.marginal(a)).collect()
    }

    /// True iff every tuple whose marginals are all nonzero has nonzero
    /// joint mass. Zero is tested exactly.
    pub fn is_jointly_supported(&self) -> bool {
        let mut idx = vec![0; self.dims.len()];
        let mut flat = 0;
        loop {
            if self.mass[flat] == 0.0
                && idx
                    .iter()
                    .enumerate()
                    .all(|(a, &i)| self.marginals[a][i] != 0.0)
            {
                return false;
            }
            flat += 1;
            if !next_index(&mut idx, &self.dims) {
                return true;
            }
        }
    }

    /// Flattens to a distribution over tuple labels joined with `sep`.
    pub fn flatten(&self, sep: &str) -> Dist {
        let spaces: Vec<&[String]> = self.axes.iter().map(Vec::as_slice).collect();
        Dist::from_parts_unchecked(product_labels(&spaces, sep), self.mass.clone(), self.is_sub)
    }
}

/// Diagonal lift `π†[x, x'] = π[x]` if `x = x'`, else 0.
pub fn lift_shared_prior(prior: &Dist) -> JointDist {
    lift_shared_prior_n(prior, 2)
}

/// `n`-axis diagonal lift of a prior.
pub fn lift_shared_prior_n(prior: &Dist, n: usize) -> JointDist {
    let k = prior.len();
    let n = n.max(1);
    let size = k.pow(n as u32);
    let mut mass = vec![0.0; size];
    // diagonal entry (i, i, ..., i) sits at i * (k^{n-1} + ... + k + 1)
    let step: usize = (0..n).map(|p| k.pow(p as u32)).sum();
    for (i, &m) in prior.mass().iter().enumerate() {
        mass[i * step] = m;
    }
    JointDist::new(vec![prior.labels().to_vec(); n], mass)
        .expect("lift of a valid prior is a valid joint prior")
}
