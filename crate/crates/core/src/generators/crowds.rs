//! Crowds on a mobile ad-hoc network: the channel from the honest
//! initiator to the first forwarding event the attacker observes.
//!
//! The message is passed along an absorbing Markov chain whose transient
//! states are the honest users currently holding it. The initiator hands it
//! to a uniformly chosen neighbor; a holder delivers it to the server with
//! probability `1 − pf` and otherwise forwards it to a uniformly chosen
//! neighbor. The chain stops at the first observation: a delivery to the
//! (corrupt) server or a hand-over to a corrupt user.

use std::collections::BTreeSet;

use nalgebra::DMatrix;

use crate::channel::Channel;
use crate::error::{QifError, Result};

/// Undirected crowd graph with corrupt users and forwarding probability.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    nodes: Vec<String>,
    edges: BTreeSet<(usize, usize)>,
    corrupt: BTreeSet<usize>,
    pf: f64,
}

impl Topology {
    /// Edges are unordered pairs of node indices; duplicates are merged.
    pub fn new(
        nodes: Vec<String>,
        edges: Vec<(usize, usize)>,
        corrupt: Vec<usize>,
        pf: f64,
    ) -> Result<Self> {
        crate::labels::check_unique(&nodes)?;
        let n = nodes.len();
        if !(0.0..=1.0).contains(&pf) {
            return Err(QifError::InvalidTopology(format!(
                "pf = {pf} outside [0, 1]"
            )));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(QifError::InvalidTopology(format!(
                    "edge ({a}, {b}) out of range"
                )));
            }
            if a == b {
                return Err(QifError::InvalidTopology(format!(
                    "self-loop at {}",
                    nodes[a]
                )));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let mut bad = BTreeSet::new();
        for c in corrupt {
            if c >= n {
                return Err(QifError::InvalidTopology(format!(
                    "corrupt user {c} out of range"
                )));
            }
            bad.insert(c);
        }
        Ok(Topology {
            nodes,
            edges: set,
            corrupt: bad,
            pf,
        })
    }

    /// Complete graph over `nodes`.
    pub fn complete(nodes: Vec<String>, corrupt: Vec<usize>, pf: f64) -> Result<Self> {
        let n = nodes.len();
        let edges = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        Self::new(nodes, edges, corrupt, pf)
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn corrupt(&self) -> &BTreeSet<usize> {
        &self.corrupt
    }

    pub fn pf(&self) -> f64 {
        self.pf
    }

    pub fn with_pf(mut self, pf: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&pf) {
            return Err(QifError::InvalidTopology(format!(
                "pf = {pf} outside [0, 1]"
            )));
        }
        self.pf = pf;
        Ok(self)
    }

    pub fn is_corrupt(&self, i: usize) -> bool {
        self.corrupt.contains(&i)
    }

    /// Honest users in node order.
    pub fn honest(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|i| !self.is_corrupt(*i))
            .collect()
    }

    /// Neighbors of `i` in increasing index order.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == i {
                    Some(b)
                } else if b == i {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        v.sort_unstable();
        v
    }
}

/// Who received a forwarded message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Receiver {
    Corrupt(usize),
    Server,
}

/// The attacker's observation: `forwarder` passed the message to `receiver`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Observable {
    pub forwarder: usize,
    pub receiver: Receiver,
}

impl Observable {
    pub fn label(&self, t: &Topology) -> String {
        let to = match self.receiver {
            Receiver::Corrupt(k) => t.nodes[k].as_str(),
            Receiver::Server => "server",
        };
        format!("forw({},{})", t.nodes[self.forwarder], to)
    }
}

/// Input label of the row for initiator `i`.
pub fn initiator_label(t: &Topology, i: usize) -> String {
    format!("init({})", t.nodes[i])
}

/// Builds the initiator → observation channel of one protocol run.
///
/// Inputs are the honest users; outputs are the observables with nonzero
/// probability for some initiator, grouped by forwarder in node order
/// (corrupt receivers first, then the server).
pub fn crowds_channel(t: &Topology) -> Result<Channel> {
    let honest = t.honest();
    if honest.is_empty() {
        return Err(QifError::NoHonestUsers);
    }
    let n = t.nodes.len();
    let mut state_of = vec![usize::MAX; n];
    for (s, &u) in honest.iter().enumerate() {
        state_of[u] = s;
    }
    let neighbors: Vec<Vec<usize>> = (0..n).map(|i| t.neighbors(i)).collect();

    // absorbing events, grouped per honest forwarder
    let mut events: Vec<Observable> = Vec::new();
    let mut event_of = std::collections::BTreeMap::new();
    for &j in &honest {
        for &k in &neighbors[j] {
            if t.is_corrupt(k) {
                let o = Observable {
                    forwarder: j,
                    receiver: Receiver::Corrupt(k),
                };
                event_of.insert(o, events.len());
                events.push(o);
            }
        }
        let o = Observable {
            forwarder: j,
            receiver: Receiver::Server,
        };
        event_of.insert(o, events.len());
        events.push(o);
    }

    let h = honest.len();
    let m = events.len();
    let pf = t.pf;
    // (I − Q) H = B over holder states
    let mut a = DMatrix::<f64>::identity(h, h);
    let mut b = DMatrix::<f64>::zeros(h, m);
    for (s, &j) in honest.iter().enumerate() {
        let server = event_of[&Observable {
            forwarder: j,
            receiver: Receiver::Server,
        }];
        let nb = &neighbors[j];
        if nb.is_empty() {
            b[(s, server)] = 1.0;
            continue;
        }
        b[(s, server)] = 1.0 - pf;
        let step = pf / nb.len() as f64;
        for &k in nb {
            if t.is_corrupt(k) {
                let e = event_of[&Observable {
                    forwarder: j,
                    receiver: Receiver::Corrupt(k),
                }];
                b[(s, e)] += step;
            } else {
                a[(s, state_of[k])] -= step;
            }
        }
    }
    let absorb = a.lu().solve(&b).ok_or_else(|| {
        QifError::NonAbsorbing("holder chain never reaches an observation".into())
    })?;

    let mut data = vec![0.0; h * m];
    for (r, &i) in honest.iter().enumerate() {
        let row = &mut data[r * m..(r + 1) * m];
        let nb = &neighbors[i];
        if nb.is_empty() {
            log::warn!(
                "{} has no neighbors; it delivers directly to the server",
                t.nodes[i]
            );
            let e = event_of[&Observable {
                forwarder: i,
                receiver: Receiver::Server,
            }];
            row[e] = 1.0;
            continue;
        }
        let w = 1.0 / nb.len() as f64;
        for &k in nb {
            if t.is_corrupt(k) {
                let e = event_of[&Observable {
                    forwarder: i,
                    receiver: Receiver::Corrupt(k),
                }];
                row[e] += w;
            } else {
                let s = state_of[k];
                for (e, v) in row.iter_mut().enumerate() {
                    *v += w * absorb[(s, e)];
                }
            }
        }
    }

    for (r, row) in data.chunks_mut(m).enumerate() {
        for v in row.iter_mut() {
            if *v < super::random::ZERO_CUTOFF {
                *v = 0.0;
            }
        }
        let sum: f64 = row.iter().sum();
        if !sum.is_finite() || (sum - 1.0).abs() > 1e-6 {
            return Err(QifError::NonAbsorbing(format!(
                "absorption probabilities from {} sum to {sum}",
                t.nodes[honest[r]]
            )));
        }
        if (sum - 1.0).abs() > 1e-9 {
            row.iter_mut().for_each(|v| *v /= sum);
        }
    }

    let used: Vec<usize> = (0..m)
        .filter(|&e| (0..h).any(|r| data[r * m + e] != 0.0))
        .collect();
    let mut kept = Vec::with_capacity(h * used.len());
    for r in 0..h {
        kept.extend(used.iter().map(|&e| data[r * m + e]));
    }
    let inputs = honest.iter().map(|&i| initiator_label(t, i)).collect();
    let outputs = used.iter().map(|&e| events[e].label(t)).collect();
    Channel::from_flat(inputs, outputs, kept)
}
