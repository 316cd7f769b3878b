//! Channel algebra: parallel composition with distinct inputs (`×`) and
//! with a shared input (`∥`), decomposition, cascade, and cascade
//! refinement.

use crate::channel::Channel;
use crate::error::{QifError, Result};
use crate::labels::{product_labels, TUPLE_SEP};
use crate::lp::{find_feasible, Equalities};

/// Default cap on the number of cells of a materialized composition.
pub const DEFAULT_MAX_CELLS: u128 = 100_000_000;
/// Equality tolerance of the refinement search.
pub const REFINEMENT_LP_TOL: f64 = 1e-7;
/// Tolerance of [`verify_refinement`].
pub const REFINEMENT_VERIFY_TOL: f64 = 1e-9;

/// Composition settings: tuple separator and the materialization cap.
#[derive(Debug, Clone)]
pub struct Composer {
    pub separator: String,
    pub max_cells: u128,
}

impl Default for Composer {
    fn default() -> Self {
        Composer {
            separator: TUPLE_SEP.to_string(),
            max_cells: DEFAULT_MAX_CELLS,
        }
    }
}

impl Composer {
    pub fn with_max_cells(max_cells: u128) -> Self {
        Composer {
            max_cells,
            ..Self::default()
        }
    }

    fn check_cells(&self, rows: u128, cols: u128) -> Result<()> {
        let cells = rows.saturating_mul(cols);
        if cells > self.max_cells {
            return Err(QifError::SizeOverflow {
                cells,
                cap: self.max_cells,
            });
        }
        Ok(())
    }

    pub fn par_distinct(&self, c1: &Channel, c2: &Channel) -> Result<Channel> {
        self.par_distinct_n(&[c1, c2])
    }

    /// `C_1 × … × C_n`: inputs and outputs are row-major tuples.
    pub fn par_distinct_n(&self, cs: &[&Channel]) -> Result<Channel> {
        let (first, rest) = cs
            .split_first()
            .ok_or_else(|| QifError::InvalidArgument("no channels to compose".into()))?;
        let rows: u128 = cs
            .iter()
            .fold(1u128, |a, c| a.saturating_mul(c.n_inputs() as u128));
        let cols: u128 = cs
            .iter()
            .fold(1u128, |a, c| a.saturating_mul(c.n_outputs() as u128));
        self.check_cells(rows, cols)?;
        let mut acc = (*first).clone();
        for c in rest {
            acc = kron(&acc, c, &self.separator);
        }
        Ok(acc)
    }

    pub fn par_shared(&self, c1: &Channel, c2: &Channel) -> Result<Channel> {
        self.par_shared_n(&[c1, c2])
    }

    /// `C_1 ∥ … ∥ C_n`: all channels read the same secret. Input spaces
    /// must coincide as sets; rows of later channels are realigned to the
    /// input order of the first.
    pub fn par_shared_n(&self, cs: &[&Channel]) -> Result<Channel> {
        let (first, rest) = cs
            .split_first()
            .ok_or_else(|| QifError::InvalidArgument("no channels to compose".into()))?;
        let cols: u128 = cs
            .iter()
            .fold(1u128, |a, c| a.saturating_mul(c.n_outputs() as u128));
        self.check_cells(first.n_inputs() as u128, cols)?;
        let aligned: Vec<Channel> = rest
            .iter()
            .map(|c| align_inputs(c, first.inputs()))
            .collect::<Result<_>>()?;
        let nx = first.n_inputs();
        let mut outputs = first.outputs().to_vec();
        let mut data = first.data().to_vec();
        for c in &aligned {
            let ny_acc = outputs.len();
            let ny = c.n_outputs();
            let mut next = vec![0.0; nx * ny_acc * ny];
            for x in 0..nx {
                let a = &data[x * ny_acc..(x + 1) * ny_acc];
                let b = c.row(x);
                let out = &mut next[x * ny_acc * ny..(x + 1) * ny_acc * ny];
                for (i, &av) in a.iter().enumerate() {
                    for (j, &bv) in b.iter().enumerate() {
                        out[i * ny + j] = av * bv;
                    }
                }
            }
            outputs = product_labels(&[&outputs, c.outputs()], &self.separator);
            data = next;
        }
        Ok(Channel::from_parts_unchecked(
            first.inputs().to_vec(),
            outputs,
            data,
        ))
    }

    /// Splits tuple output labels at the first separator and marginalizes:
    /// returns `(C|Y1, C|Y2)`. Factor labels keep first-appearance order.
    pub fn decompose(&self, c: &Channel) -> Result<(Channel, Channel)> {
        let sep = self.separator.as_str();
        let mut heads: Vec<String> = Vec::new();
        let mut tails: Vec<String> = Vec::new();
        let mut pos = Vec::with_capacity(c.n_outputs());
        for y in c.outputs() {
            let (h, t) = y
                .split_once(sep)
                .ok_or_else(|| QifError::NotFactorableOutputs(y.clone()))?;
            let hi = index_or_push(&mut heads, h);
            let ti = index_or_push(&mut tails, t);
            pos.push((hi, ti));
        }
        let nx = c.n_inputs();
        let mut d1 = vec![0.0; nx * heads.len()];
        let mut d2 = vec![0.0; nx * tails.len()];
        for x in 0..nx {
            for (y, &(hi, ti)) in pos.iter().enumerate() {
                let v = c.get(x, y);
                d1[x * heads.len() + hi] += v;
                d2[x * tails.len() + ti] += v;
            }
        }
        let inputs = c.inputs().to_vec();
        Ok((
            Channel::from_parts_unchecked(inputs.clone(), heads, d1),
            Channel::from_parts_unchecked(inputs, tails, d2),
        ))
    }
}

fn index_or_push(v: &mut Vec<String>, s: &str) -> usize {
    match v.iter().position(|e| e == s) {
        Some(i) => i,
        None => {
            v.push(s.to_string());
            v.len() - 1
        }
    }
}

/// Kronecker product of two channels with tuple labels.
fn kron(a: &Channel, b: &Channel, sep: &str) -> Channel {
    let (nxa, nya) = (a.n_inputs(), a.n_outputs());
    let (nxb, nyb) = (b.n_inputs(), b.n_outputs());
    let ny = nya * nyb;
    let mut data = vec![0.0; nxa * nxb * ny];
    for xa in 0..nxa {
        let ra = a.row(xa);
        for xb in 0..nxb {
            let rb = b.row(xb);
            let out = &mut data[(xa * nxb + xb) * ny..(xa * nxb + xb + 1) * ny];
            for (i, &av) in ra.iter().enumerate() {
                for (j, &bv) in rb.iter().enumerate() {
                    out[i * nyb + j] = av * bv;
                }
            }
        }
    }
    Channel::from_parts_unchecked(
        product_labels(&[a.inputs(), b.inputs()], sep),
        product_labels(&[a.outputs(), b.outputs()], sep),
        data,
    )
}

/// Reorders the rows of `c` to follow `order`; fails unless the input
/// label sets coincide.
fn align_inputs(c: &Channel, order: &[String]) -> Result<Channel> {
    if c.inputs() == order {
        return Ok(c.clone());
    }
    let mut a: Vec<&String> = c.inputs().iter().collect();
    let mut b: Vec<&String> = order.iter().collect();
    a.sort();
    b.sort();
    if a != b {
        return Err(QifError::InputSpaceMismatch(format!(
            "{:?} vs {:?}",
            c.inputs(),
            order
        )));
    }
    let mut data = Vec::with_capacity(c.data().len());
    for x in order {
        let i = c
            .inputs()
            .iter()
            .position(|l| l == x)
            .expect("same label set");
        data.extend_from_slice(c.row(i));
    }
    Ok(Channel::from_parts_unchecked(
        order.to_vec(),
        c.outputs().to_vec(),
        data,
    ))
}

pub fn par_distinct(c1: &Channel, c2: &Channel) -> Result<Channel> {
    Composer::default().par_distinct(c1, c2)
}

pub fn par_distinct_n(cs: &[&Channel]) -> Result<Channel> {
    Composer::default().par_distinct_n(cs)
}

pub fn par_shared(c1: &Channel, c2: &Channel) -> Result<Channel> {
    Composer::default().par_shared(c1, c2)
}

pub fn par_shared_n(cs: &[&Channel]) -> Result<Channel> {
    Composer::default().par_shared_n(cs)
}

pub fn decompose(c: &Channel) -> Result<(Channel, Channel)> {
    Composer::default().decompose(c)
}

/// Matrix product `C2 · C3`; the outputs of `c2` must be the inputs of `c3`.
pub fn cascade(c2: &Channel, c3: &Channel) -> Result<Channel> {
    if c2.outputs() != c3.inputs() {
        return Err(QifError::LabelMismatch(
            "cascade: outputs of the first channel differ from inputs of the second".into(),
        ));
    }
    Ok(Channel::from_parts_unchecked(
        c2.inputs().to_vec(),
        c3.outputs().to_vec(),
        matmul(c2, c3),
    ))
}

fn matmul(a: &Channel, b: &Channel) -> Vec<f64> {
    let nz = b.n_outputs();
    let mut out = vec![0.0; a.n_inputs() * nz];
    for x in 0..a.n_inputs() {
        let row = &mut out[x * nz..(x + 1) * nz];
        for (y, &p) in a.row(x).iter().enumerate() {
            if p != 0.0 {
                for (o, &q) in row.iter_mut().zip(b.row(y)) {
                    *o += p * q;
                }
            }
        }
    }
    out
}

/// A post-processing channel from the outputs of the refining channel to
/// the outputs of the refined one.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinementWitness {
    pub post: Channel,
}

/// Checks `C1 = C2 · W` entrywise within [`REFINEMENT_VERIFY_TOL`].
/// Witness labels are not compared, only its shape.
pub fn verify_refinement(c1: &Channel, c2: &Channel, w: &RefinementWitness) -> Result<bool> {
    if c1.n_inputs() != c2.n_inputs() {
        return Err(QifError::DimensionMismatch(format!(
            "refinement needs equal input spaces ({} vs {})",
            c1.n_inputs(),
            c2.n_inputs()
        )));
    }
    if w.post.n_inputs() != c2.n_outputs() || w.post.n_outputs() != c1.n_outputs() {
        return Err(QifError::DimensionMismatch(format!(
            "witness is {}x{}, expected {}x{}",
            w.post.n_inputs(),
            w.post.n_outputs(),
            c2.n_outputs(),
            c1.n_outputs()
        )));
    }
    if c1.inputs() != c2.inputs() {
        return Err(QifError::LabelMismatch(
            "refinement needs identical input labels".into(),
        ));
    }
    let prod = matmul(c2, &w.post);
    Ok(prod
        .iter()
        .zip(c1.data())
        .all(|(a, b)| (a - b).abs() <= REFINEMENT_VERIFY_TOL))
}

/// Searches for a witness of `C1 ⊑ C2` by solving the linear feasibility
/// problem over the `|Y|·|Z|` entries of the post-processing channel.
/// Returns `Ok(None)` when no witness exists.
pub fn find_refinement(c1: &Channel, c2: &Channel) -> Result<Option<RefinementWitness>> {
    if c1.n_inputs() != c2.n_inputs() || c1.inputs() != c2.inputs() {
        return Err(QifError::LabelMismatch(
            "refinement needs identical input labels".into(),
        ));
    }
    let (nx, ny, nz) = (c1.n_inputs(), c2.n_outputs(), c1.n_outputs());
    let mut sys = Equalities::new(nx * nz + ny, ny * nz);
    for x in 0..nx {
        for z in 0..nz {
            let r = x * nz + z;
            for y in 0..ny {
                let v = c2.get(x, y);
                if v != 0.0 {
                    sys.set(r, y * nz + z, v);
                }
            }
            sys.b[r] = c1.get(x, z);
        }
    }
    for y in 0..ny {
        let r = nx * nz + y;
        for z in 0..nz {
            sys.set(r, y * nz + z, 1.0);
        }
        sys.b[r] = 1.0;
    }
    let Some(t) = find_feasible(&sys, REFINEMENT_LP_TOL) else {
        return Ok(None);
    };
    // rows of C2's outputs that are never reached are unconstrained apart
    // from stochasticity; renormalize every row to absorb pivot rounding
    let mut data = t;
    for y in 0..ny {
        let row = &mut data[y * nz..(y + 1) * nz];
        let s: f64 = row.iter().sum();
        if s > 0.0 {
            row.iter_mut().for_each(|v| *v /= s);
        } else {
            row.iter_mut().for_each(|v| *v = 1.0 / nz as f64);
        }
    }
    let post = Channel::from_parts_unchecked(c2.outputs().to_vec(), c1.outputs().to_vec(), data);
    let w = RefinementWitness { post };
    if verify_refinement(c1, c2, &w)? {
        Ok(Some(w))
    } else {
        log::debug!(
            "refinement LP was feasible within tolerance but the witness failed verification"
        );
        Ok(None)
    }
}
