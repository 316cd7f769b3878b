//! Label helpers shared by every domain type.
//!
//! Labels are opaque strings. Composite spaces (product inputs, paired
//! outputs) use tuple labels whose parts are joined with [`TUPLE_SEP`],
//! flattened row-major so the first component varies slowest.

use std::collections::HashSet;

use crate::error::{QifError, Result};

/// Default separator for tuple labels.
pub const TUPLE_SEP: &str = "⊗";

pub(crate) fn check_unique(labels: &[String]) -> Result<()> {
    let mut seen = HashSet::with_capacity(labels.len());
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(QifError::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

/// Row-major product of label spaces, each tuple joined with `sep`.
pub fn product_labels(spaces: &[&[String]], sep: &str) -> Vec<String> {
    let mut out = vec![String::new()];
    for (i, space) in spaces.iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * space.len());
        for prefix in &out {
            for l in space.iter() {
                if i == 0 {
                    next.push(l.clone());
                } else {
                    next.push(format!("{prefix}{sep}{l}"));
                }
            }
        }
        out = next;
    }
    out
}

/// Convenience: turn anything string-like into owned labels.
pub fn labels<I, S>(items: I) -> Vec<String>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    items.into_iter().map(Into::into).collect()
}

/// Labels `0..n` as strings.
pub fn index_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// Strides for row-major indexing over `dims`.
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Advances a row-major multi-index; returns false after the last tuple.
pub(crate) fn next_index(idx: &mut [usize], dims: &[usize]) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < dims[i] {
            return true;
        }
        idx[i] = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_is_row_major() {
        let a = labels(["0", "1"]);
        let b = labels(["x", "y", "z"]);
        let p = product_labels(&[&a, &b], TUPLE_SEP);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], "0⊗x");
        assert_eq!(p[1], "0⊗y");
        assert_eq!(p[5], "1⊗z");
    }

    #[test]
    fn odometer_visits_every_tuple() {
        let dims = [2, 3, 2];
        let mut idx = vec![0; 3];
        let mut n = 1;
        while next_index(&mut idx, &dims) {
            n += 1;
        }
        assert_eq!(n, 12);
        assert_eq!(strides(&dims), vec![6, 2, 1]);
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert!(check_unique(&labels(["a", "b", "a"])).is_err());
        assert!(check_unique(&labels(["a", "b"])).is_ok());
    }
}
