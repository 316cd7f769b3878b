//! Scenario files: named channels, a prior, a gain and a composition
//! expression, in JSON.
//!
//! ```json
//! {
//!   "channels": { "b": "fixture:ch_b", "k": "k.csv" },
//!   "prior": "fixture:pi_b",
//!   "gain": "identity",
//!   "composition": { "op": "shared", "args": ["b"], "repeat": 10 },
//!   "analysis": ["exact", "bound", "approx"],
//!   "epsilon": 0.01
//! }
//! ```
//!
//! `shared` and `distinct` nodes are n-ary; `repeat` concatenates the
//! argument list that many times. `cascade` takes exactly two arguments.
//! Relative paths resolve against the scenario file's directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use leakbound_core::compose::cascade;
use leakbound_core::{Channel, Composer, Dist, JointDist};
use serde::Deserialize;

use crate::error::{CliError, Result};
use crate::io::{self, ChannelJson, DistJson, JointJson};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ChannelSpec {
    Ref(String),
    Inline(ChannelJson),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PriorSpec {
    Ref(String),
    Joint(JointJson),
    Inline(DistJson),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Expr {
    Ref(String),
    Node(Node),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase", deny_unknown_fields)]
pub enum Node {
    Shared {
        args: Vec<Expr>,
        #[serde(default = "one")]
        repeat: usize,
    },
    Distinct {
        args: Vec<Expr>,
        #[serde(default = "one")]
        repeat: usize,
    },
    Cascade {
        args: Vec<Expr>,
    },
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Analysis {
    Exact,
    Bound,
    Approx,
    Capacity,
}

fn default_analysis() -> Vec<Analysis> {
    vec![Analysis::Exact, Analysis::Bound]
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub channels: BTreeMap<String, ChannelSpec>,
    #[serde(default)]
    pub prior: Option<PriorSpec>,
    #[serde(default)]
    pub gain: Option<String>,
    pub composition: Expr,
    #[serde(default = "default_analysis")]
    pub analysis: Vec<Analysis>,
    #[serde(default)]
    pub epsilon: Option<f64>,
}

/// Top-level shape of a composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Single,
    Shared,
    Distinct,
}

#[derive(Debug, Clone)]
pub enum Prior {
    Single(Dist),
    Joint(JointDist),
}

/// A scenario with every reference resolved.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub channels: BTreeMap<String, Channel>,
    pub prior: Option<PriorSpec>,
    pub gain: String,
    pub composition: Expr,
    pub analysis: Vec<Analysis>,
    pub epsilon: Option<f64>,
    base: PathBuf,
}

impl Scenario {
    pub fn load(path: &str) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_string(),
            source,
        })?;
        let file: ScenarioFile =
            serde_json::from_str(&text).map_err(|e| CliError::parse(path, e))?;
        let base = Path::new(path)
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_default();
        Self::resolve(file, base)
    }

    pub fn resolve(file: ScenarioFile, base: PathBuf) -> Result<Self> {
        let mut channels = BTreeMap::new();
        for (name, spec) in file.channels {
            let c = match spec {
                ChannelSpec::Inline(j) => j.into_channel()?,
                ChannelSpec::Ref(r) => io::load_channel(&resolve_path(&base, &r))?,
            };
            channels.insert(name, c);
        }
        let s = Scenario {
            channels,
            prior: file.prior,
            gain: file.gain.unwrap_or_else(|| "identity".into()),
            composition: file.composition,
            analysis: file.analysis,
            epsilon: file.epsilon,
            base,
        };
        s.check_refs(&s.composition)?;
        Ok(s)
    }

    fn check_refs(&self, e: &Expr) -> Result<()> {
        match e {
            Expr::Ref(name) => {
                if !self.channels.contains_key(name) {
                    return Err(CliError::Invalid(format!(
                        "composition refers to unknown channel `{name}`"
                    )));
                }
            }
            Expr::Node(Node::Cascade { args }) => {
                if args.len() != 2 {
                    return Err(CliError::Invalid(
                        "cascade takes exactly two arguments".into(),
                    ));
                }
                args.iter().try_for_each(|a| self.check_refs(a))?;
            }
            Expr::Node(Node::Shared { args, repeat } | Node::Distinct { args, repeat }) => {
                if args.is_empty() || *repeat == 0 {
                    return Err(CliError::Invalid("empty composition".into()));
                }
                args.iter().try_for_each(|a| self.check_refs(a))?;
            }
        }
        Ok(())
    }

    pub fn shape(&self) -> Shape {
        match &self.composition {
            Expr::Node(Node::Shared { .. }) => Shape::Shared,
            Expr::Node(Node::Distinct { .. }) => Shape::Distinct,
            _ => Shape::Single,
        }
    }

    /// The top-level components, each materialized.
    pub fn components(&self, composer: &Composer) -> Result<Vec<Channel>> {
        match &self.composition {
            Expr::Node(Node::Shared { args, repeat } | Node::Distinct { args, repeat }) => {
                self.expand(args, *repeat, composer)
            }
            e => Ok(vec![self.materialize(e, composer)?]),
        }
    }

    pub fn materialize(&self, e: &Expr, composer: &Composer) -> Result<Channel> {
        match e {
            Expr::Ref(name) => Ok(self.channels[name].clone()),
            Expr::Node(Node::Cascade { args }) => {
                let a = self.materialize(&args[0], composer)?;
                let b = self.materialize(&args[1], composer)?;
                Ok(cascade(&a, &b)?)
            }
            Expr::Node(Node::Shared { args, repeat }) => {
                let cs = self.expand(args, *repeat, composer)?;
                Ok(composer.par_shared_n(&cs.iter().collect::<Vec<_>>())?)
            }
            Expr::Node(Node::Distinct { args, repeat }) => {
                let cs = self.expand(args, *repeat, composer)?;
                Ok(composer.par_distinct_n(&cs.iter().collect::<Vec<_>>())?)
            }
        }
    }

    fn expand(&self, args: &[Expr], repeat: usize, composer: &Composer) -> Result<Vec<Channel>> {
        let once = args
            .iter()
            .map(|a| self.materialize(a, composer))
            .collect::<Result<Vec<_>>>()?;
        Ok(once
            .iter()
            .cycle()
            .take(once.len() * repeat)
            .cloned()
            .collect())
    }

    /// The prior over the inputs of `inputs` (shared or single) or over the
    /// component input spaces (distinct). Missing prior means uniform, or
    /// the product of uniform marginals.
    pub fn prior(&self, components: &[Channel]) -> Result<Prior> {
        let distinct = self.shape() == Shape::Distinct;
        match (&self.prior, distinct) {
            (None, false) => Ok(Prior::Single(Dist::uniform(
                components[0].inputs().to_vec(),
            )?)),
            (None, true) => {
                let margs = components
                    .iter()
                    .map(|c| Dist::uniform(c.inputs().to_vec()))
                    .collect::<leakbound_core::Result<Vec<_>>>()?;
                Ok(Prior::Joint(JointDist::product(
                    &margs.iter().collect::<Vec<_>>(),
                )?))
            }
            (Some(PriorSpec::Joint(j)), _) => Ok(Prior::Joint(j.clone().into_joint()?)),
            (Some(PriorSpec::Inline(d)), _) => Ok(Prior::Single(d.clone().into_dist()?)),
            (Some(PriorSpec::Ref(r)), _) => {
                let path = resolve_path(&self.base, r);
                if path.ends_with(".json") && !r.starts_with("fixture:") {
                    let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io {
                        path: path.clone(),
                        source,
                    })?;
                    if let Ok(j) = serde_json::from_str::<JointJson>(&text) {
                        return Ok(Prior::Joint(j.into_joint()?));
                    }
                }
                Ok(Prior::Single(io::load_prior(
                    &path,
                    components[0].inputs(),
                )?))
            }
        }
    }
}

fn resolve_path(base: &Path, r: &str) -> String {
    if r.starts_with("fixture:") || r == "uniform" || Path::new(r).is_absolute() {
        return r.to_string();
    }
    base.join(r).to_string_lossy().into_owned()
}
