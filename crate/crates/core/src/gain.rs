//! Gain functions `g : W × X → [0,1]` and joint gain functions over
//! product guess/secret spaces.

use crate::error::{QifError, Result};
use crate::labels::{check_unique, next_index, product_labels, strides};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GainKind {
    /// `W = X`, gain 1 iff the guess is the secret.
    Identity,
    /// Every guess is a subset of `X`; gain 1 iff the secret is in it.
    Binary,
    /// Binary gain over all nonempty subsets of size at most `k`.
    KTries(usize),
    /// Arbitrary table.
    Table,
}

/// A gain table stored row-major by guess.
#[derive(Debug, Clone, PartialEq)]
pub struct GainFn {
    guesses: Vec<String>,
    secrets: Vec<String>,
    table: Vec<f64>,
    kind: GainKind,
}

impl GainFn {
    /// Arbitrary gain table, one row per guess.
    pub fn table(guesses: Vec<String>, secrets: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != guesses.len() {
            return Err(QifError::LengthMismatch {
                what: "gain rows",
                expected: guesses.len(),
                got: rows.len(),
            });
        }
        let mut table = Vec::with_capacity(guesses.len() * secrets.len());
        for r in rows {
            if r.len() != secrets.len() {
                return Err(QifError::LengthMismatch {
                    what: "gain row",
                    expected: secrets.len(),
                    got: r.len(),
                });
            }
            table.extend(r);
        }
        Self::build(guesses, secrets, table, GainKind::Table)
    }

    fn build(
        guesses: Vec<String>,
        secrets: Vec<String>,
        table: Vec<f64>,
        kind: GainKind,
    ) -> Result<Self> {
        if secrets.is_empty() {
            return Err(QifError::EmptySecretSpace);
        }
        if guesses.is_empty() {
            return Err(QifError::EmptyGuessSet);
        }
        check_unique(&secrets)?;
        check_unique(&guesses)?;
        debug_assert_eq!(table.len(), guesses.len() * secrets.len());
        let boolean = matches!(
            kind,
            GainKind::Binary | GainKind::KTries(_) | GainKind::Identity
        );
        for &v in &table {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(QifError::InvalidGain(format!(
                    "gain value {v} outside [0,1]"
                )));
            }
            if boolean && v != 0.0 && v != 1.0 {
                return Err(QifError::InvalidGain(format!(
                    "gain value {v} in a boolean gain function"
                )));
            }
        }
        Ok(GainFn {
            guesses,
            secrets,
            table,
            kind,
        })
    }

    pub fn guesses(&self) -> &[String] {
        &self.guesses
    }

    pub fn secrets(&self) -> &[String] {
        &self.secrets
    }

    pub fn kind(&self) -> GainKind {
        self.kind
    }

    pub fn is_identity(&self) -> bool {
        self.kind == GainKind::Identity
    }

    pub fn n_guesses(&self) -> usize {
        self.guesses.len()
    }

    pub fn n_secrets(&self) -> usize {
        self.secrets.len()
    }

    pub fn value(&self, w: usize, x: usize) -> f64 {
        self.table[w * self.secrets.len() + x]
    }

    pub fn row(&self, w: usize) -> &[f64] {
        let nx = self.secrets.len();
        &self.table[w * nx..(w + 1) * nx]
    }

    pub fn table_data(&self) -> &[f64] {
        &self.table
    }
}

/// Identity gain over `secrets`.
pub fn gain_identity(secrets: Vec<String>) -> Result<GainFn> {
    let n = secrets.len();
    if n == 0 {
        return Err(QifError::EmptySecretSpace);
    }
    let mut table = vec![0.0; n * n];
    for i in 0..n {
        table[i * n + i] = 1.0;
    }
    GainFn::build(secrets.clone(), secrets, table, GainKind::Identity)
}

fn subset_label(members: &[&str]) -> String {
    format!("{{{}}}", members.join(","))
}

/// Binary gain: each guess is a subset of `secrets`.
pub fn gain_binary(secrets: Vec<String>, guesses: Vec<Vec<String>>) -> Result<GainFn> {
    if secrets.is_empty() {
        return Err(QifError::EmptySecretSpace);
    }
    if guesses.is_empty() {
        return Err(QifError::EmptyGuessSet);
    }
    let nx = secrets.len();
    let mut table = vec![0.0; guesses.len() * nx];
    let mut names = Vec::with_capacity(guesses.len());
    for (w, set) in guesses.iter().enumerate() {
        for m in set {
            let x = secrets.iter().position(|s| s == m).ok_or_else(|| {
                QifError::InvalidGain(format!("guess member `{m}` is not a secret"))
            })?;
            table[w * nx + x] = 1.0;
        }
        let members: Vec<&str> = set.iter().map(String::as_str).collect();
        names.push(subset_label(&members));
    }
    GainFn::build(names, secrets, table, GainKind::Binary)
}

/// k-tries gain: every nonempty subset of size at most `k`, ordered by
/// size, then lexicographically by secret index.
pub fn gain_ktries(secrets: Vec<String>, k: usize) -> Result<GainFn> {
    if secrets.is_empty() {
        return Err(QifError::EmptySecretSpace);
    }
    if k == 0 {
        return Err(QifError::InvalidArgument("k-tries needs k >= 1".into()));
    }
    let nx = secrets.len();
    let mut names = Vec::new();
    let mut table = Vec::new();
    for size in 1..=k.min(nx) {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let mut row = vec![0.0; nx];
            for &i in &combo {
                row[i] = 1.0;
            }
            table.extend(row);
            let members: Vec<&str> = combo.iter().map(|&i| secrets[i].as_str()).collect();
            names.push(subset_label(&members));
            // next combination in lexicographic order
            let mut i = size;
            while i > 0 && combo[i - 1] == nx - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            combo[i - 1] += 1;
            for j in i..size {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    GainFn::build(names, secrets, table, GainKind::KTries(k))
}

#[derive(Debug, Clone, PartialEq)]
enum JointRepr {
    /// `g(w̄, x̄) = Π g_i(w_i, x_i)`.
    Product,
    /// `g†`: `g(w, x)` when all guesses agree and all secrets agree.
    Lifted,
    /// Explicit table, guesses row-major then secrets row-major.
    Table(Vec<f64>),
}

/// A gain function over `(W_1 × … × W_n) × (X_1 × … × X_n)` together with
/// its component gain functions.
#[derive(Debug, Clone, PartialEq)]
pub struct JointGainFn {
    components: Vec<GainFn>,
    repr: JointRepr,
    w_dims: Vec<usize>,
    x_dims: Vec<usize>,
    w_strides: Vec<usize>,
    x_strides: Vec<usize>,
}

impl JointGainFn {
    fn with_repr(components: Vec<GainFn>, repr: JointRepr) -> Result<Self> {
        if components.is_empty() {
            return Err(QifError::EmptyGuessSet);
        }
        let w_dims: Vec<usize> = components.iter().map(GainFn::n_guesses).collect();
        let x_dims: Vec<usize> = components.iter().map(GainFn::n_secrets).collect();
        Ok(JointGainFn {
            w_strides: strides(&w_dims),
            x_strides: strides(&x_dims),
            components,
            repr,
            w_dims,
            x_dims,
        })
    }

    /// Independent components: the joint gain is the product.
    pub fn product(components: Vec<GainFn>) -> Result<Self> {
        Self::with_repr(components, JointRepr::Product)
    }

    /// Explicit joint table over flattened guess tuples × secret tuples.
    /// The worthlessness coupling `g(w̄,x̄) = 0 ⇔ Π g_i(w_i,x_i) = 0` is
    /// checked on every entry.
    pub fn table(components: Vec<GainFn>, table: Vec<f64>) -> Result<Self> {
        let j = Self::with_repr(components, JointRepr::Product)?;
        let nw: usize = j.w_dims.iter().product();
        let nx: usize = j.x_dims.iter().product();
        if table.len() != nw * nx {
            return Err(QifError::LengthMismatch {
                what: "joint gain table",
                expected: nw * nx,
                got: table.len(),
            });
        }
        let mut w = vec![0; j.arity()];
        let mut fw = 0;
        loop {
            let mut x = vec![0; j.arity()];
            let mut fx = 0;
            loop {
                let v = table[fw * nx + fx];
                if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                    return Err(QifError::InvalidGain(format!(
                        "joint gain value {v} outside [0,1]"
                    )));
                }
                let prod = j.product_value(&w, &x);
                if (v == 0.0) != (prod == 0.0) {
                    return Err(QifError::GainCoupling {
                        guess: format!("{w:?}"),
                        secret: format!("{x:?}"),
                    });
                }
                fx += 1;
                if !next_index(&mut x, &j.x_dims) {
                    break;
                }
            }
            fw += 1;
            if !next_index(&mut w, &j.w_dims) {
                break;
            }
        }
        Ok(JointGainFn {
            repr: JointRepr::Table(table),
            ..j
        })
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[GainFn] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &GainFn {
        &self.components[i]
    }

    pub fn is_product(&self) -> bool {
        self.repr == JointRepr::Product
    }

    pub fn w_dims(&self) -> &[usize] {
        &self.w_dims
    }

    pub fn x_dims(&self) -> &[usize] {
        &self.x_dims
    }

    fn product_value(&self, w: &[usize], x: &[usize]) -> f64 {
        self.components
            .iter()
            .zip(w.iter().zip(x))
            .map(|(g, (&wi, &xi))| g.value(wi, xi))
            .product()
    }

    /// `g(w̄, x̄)` for index tuples.
    pub fn value(&self, w: &[usize], x: &[usize]) -> f64 {
        match &self.repr {
            JointRepr::Product => self.product_value(w, x),
            JointRepr::Lifted => {
                if w.iter().all(|&v| v == w[0]) && x.iter().all(|&v| v == x[0]) {
                    self.components[0].value(w[0], x[0])
                } else {
                    0.0
                }
            }
            JointRepr::Table(t) => {
                let nx: usize = self.x_dims.iter().product();
                let fw: usize = w.iter().zip(&self.w_strides).map(|(a, b)| a * b).sum();
                let fx: usize = x.iter().zip(&self.x_strides).map(|(a, b)| a * b).sum();
                t[fw * nx + fx]
            }
        }
    }

    /// Flattens to an ordinary gain function over tuple labels. A product
    /// of identity gains flattens to the identity gain.
    pub fn flatten(&self, sep: &str) -> GainFn {
        let ws: Vec<&[String]> = self.components.iter().map(|g| g.guesses()).collect();
        let xs: Vec<&[String]> = self.components.iter().map(|g| g.secrets()).collect();
        let guesses = product_labels(&ws, sep);
        let secrets = product_labels(&xs, sep);
        let nx = secrets.len();
        let mut table = Vec::with_capacity(guesses.len() * nx);
        let mut w = vec![0; self.arity()];
        loop {
            let mut x = vec![0; self.arity()];
            loop {
                table.push(self.value(&w, &x));
                if !next_index(&mut x, &self.x_dims) {
                    break;
                }
            }
            if !next_index(&mut w, &self.w_dims) {
                break;
            }
        }
        let kind = if self.is_product() && self.components.iter().all(GainFn::is_identity) {
            GainKind::Identity
        } else {
            GainKind::Table
        };
        GainFn {
            guesses,
            secrets,
            table,
            kind,
        }
    }
}

/// `g†((w,w'),(x,x')) = g(w,x)` if `w = w'` and `x = x'`, else 0.
pub fn lift_shared_gain(g: &GainFn) -> JointGainFn {
    lift_shared_gain_n(g, 2)
}

/// `n`-fold version of [`lift_shared_gain`].
pub fn lift_shared_gain_n(g: &GainFn, n: usize) -> JointGainFn {
    JointGainFn::with_repr(vec![g.clone(); n.max(1)], JointRepr::Lifted)
        .expect("at least one component")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labels::{index_labels, labels};

    #[test]
    fn identity_table() {
        let g = gain_identity(index_labels(2)).unwrap();
        assert_eq!(g.table_data(), &[1.0, 0.0, 0.0, 1.0]);
        assert!(gain_identity(vec![]).is_err());
    }

    #[test]
    fn ktries_enumeration() {
        let g = gain_ktries(labels(["a", "b", "c"]), 2).unwrap();
        assert_eq!(
            g.guesses(),
            &labels(["{a}", "{b}", "{c}", "{a,b}", "{a,c}", "{b,c}"])
        );
        let ab = g.guesses().iter().position(|w| w == "{a,b}").unwrap();
        assert_eq!(g.value(ab, 0), 1.0);
        assert_eq!(g.value(ab, 2), 0.0);
        assert!(gain_ktries(labels(["a"]), 0).is_err());
    }

    #[test]
    fn binary_membership() {
        let g = gain_binary(labels(["a", "b", "c"]), vec![labels(["a", "b"])]).unwrap();
        assert_eq!(g.n_guesses(), 1);
        assert_eq!(g.row(0), &[1.0, 1.0, 0.0]);
        assert!(matches!(
            gain_binary(labels(["a"]), vec![]),
            Err(QifError::EmptyGuessSet)
        ));
        assert!(gain_binary(labels(["a"]), vec![labels(["z"])]).is_err());
    }

    #[test]
    fn lifted_gain_is_diagonal() {
        let g = gain_identity(index_labels(2)).unwrap();
        let l = lift_shared_gain(&g);
        for w in 0..2 {
            for w2 in 0..2 {
                for x in 0..2 {
                    for x2 in 0..2 {
                        let expect = if w == w2 && x == x2 && w == x {
                            1.0
                        } else {
                            0.0
                        };
                        assert_eq!(l.value(&[w, w2], &[x, x2]), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn lifted_constant_gain() {
        let g = GainFn::table(labels(["w"]), index_labels(2), vec![vec![1.0, 1.0]]).unwrap();
        let l = lift_shared_gain(&g);
        assert_eq!(l.value(&[0, 0], &[1, 1]), 1.0);
        assert_eq!(l.value(&[0, 0], &[0, 1]), 0.0);
    }

    #[test]
    fn lifted_two_tries_on_three() {
        let g = gain_ktries(labels(["a", "b", "c"]), 2).unwrap();
        let l = lift_shared_gain(&g);
        let pairs: Vec<usize> = (3..6).collect();
        let mut ones = 0;
        for &w in &pairs {
            for &w2 in &pairs {
                for x in 0..3 {
                    for x2 in 0..3 {
                        let v = l.value(&[w, w2], &[x, x2]);
                        let expect = w == w2 && x == x2 && g.value(w, x) == 1.0;
                        assert_eq!(v == 1.0, expect);
                        if v == 1.0 {
                            ones += 1;
                        }
                    }
                }
            }
        }
        // each 2-subset contains exactly two secrets
        assert_eq!(ones, 6);
    }

    #[test]
    fn table_coupling_is_checked() {
        let g1 = gain_identity(index_labels(2)).unwrap();
        let g2 = gain_identity(index_labels(2)).unwrap();
        // product of identities, but rescaled nonzero entries: still coupled
        let mut t = JointGainFn::product(vec![g1.clone(), g2.clone()])
            .unwrap()
            .flatten("⊗")
            .table_data()
            .to_vec();
        for v in &mut t {
            *v *= 0.5;
        }
        assert!(JointGainFn::table(vec![g1.clone(), g2.clone()], t.clone()).is_ok());
        t[1] = 0.3; // worthless component pair made valuable
        assert!(matches!(
            JointGainFn::table(vec![g1, g2], t),
            Err(QifError::GainCoupling { .. })
        ));
    }

    #[test]
    fn product_of_identities_flattens_to_identity() {
        let g = gain_identity(index_labels(3)).unwrap();
        let j = JointGainFn::product(vec![g.clone(), g]).unwrap();
        let f = j.flatten("⊗");
        assert!(f.is_identity());
        for w in 0..9 {
            for x in 0..9 {
                assert_eq!(f.value(w, x), if w == x { 1.0 } else { 0.0 });
            }
        }
    }
}
