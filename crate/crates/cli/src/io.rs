//! File formats.
//!
//! Channels: CSV with an empty first cell, output labels across the first
//! row and input labels down the first column, or JSON
//! `{"inputs": [...], "outputs": [...], "rows": [[...], ...]}`.
//! Priors: CSV `label,mass` lines, or JSON `{"labels": [...], "mass": [...]}`.
//! Joint priors: JSON `{"axes": [[...], ...], "mass": [...]}` (row-major).
//! Gain tables use the channel CSV layout with guesses as rows.
//!
//! Numbers are written with the shortest decimal that reads back to the
//! same `f64`, so a write/read round trip is bit-exact.

use std::fs;
use std::path::Path;

use leakbound_core::generators::fixtures;
use leakbound_core::{gain_identity, gain_ktries, Channel, Dist, GainFn, JointDist};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelJson {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistJson {
    pub labels: Vec<String>,
    pub mass: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JointJson {
    pub axes: Vec<Vec<String>>,
    pub mass: Vec<f64>,
}

impl From<&Channel> for ChannelJson {
    fn from(c: &Channel) -> Self {
        ChannelJson {
            inputs: c.inputs().to_vec(),
            outputs: c.outputs().to_vec(),
            rows: c.to_rows(),
        }
    }
}

impl ChannelJson {
    pub fn into_channel(self) -> Result<Channel> {
        Ok(Channel::new(self.inputs, self.outputs, self.rows)?)
    }
}

impl DistJson {
    pub fn into_dist(self) -> Result<Dist> {
        Ok(Dist::probability(self.labels, self.mass)?)
    }
}

impl JointJson {
    pub fn into_joint(self) -> Result<JointDist> {
        Ok(JointDist::new(self.axes, self.mass)?)
    }
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

fn read_text(path: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })
}

pub fn write_text(path: &str, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })
}

fn is_json(path: &str) -> bool {
    Path::new(path)
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn parse_num(path: &str, s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| CliError::parse(path, format!("`{s}`: {e}")))
}

/// A labeled matrix in the channel CSV layout.
pub struct LabeledTable {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

pub fn parse_table_csv(path: &str, text: &str) -> Result<LabeledTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut records = rdr.records();
    let header = records
        .next()
        .ok_or_else(|| CliError::parse(path, "empty file"))?
        .map_err(|e| CliError::parse(path, e))?;
    if header.get(0).is_some_and(|s| !s.is_empty()) {
        return Err(CliError::parse(
            path,
            "first cell of the header must be empty",
        ));
    }
    let cols: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for rec in records {
        let rec = rec.map_err(|e| CliError::parse(path, e))?;
        rows.push(rec.get(0).unwrap_or_default().to_string());
        values.push(
            rec.iter()
                .skip(1)
                .map(|s| parse_num(path, s))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(LabeledTable { rows, cols, values })
}

pub fn table_csv(
    rows: &[String],
    cols: &[String],
    values: impl Iterator<Item = Vec<f64>>,
) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    let header: Vec<&str> = std::iter::once("")
        .chain(cols.iter().map(String::as_str))
        .collect();
    w.write_record(&header).expect("in-memory write");
    for (label, row) in rows.iter().zip(values) {
        let mut rec = vec![label.clone()];
        rec.extend(row.into_iter().map(fmt_f64));
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 labels")
}

pub fn channel_to_csv(c: &Channel) -> String {
    table_csv(c.inputs(), c.outputs(), c.rows().map(<[f64]>::to_vec))
}

pub fn channel_to_json(c: &Channel) -> String {
    serde_json::to_string_pretty(&ChannelJson::from(c)).expect("plain data")
}

pub fn parse_channel(path: &str, text: &str) -> Result<Channel> {
    if is_json(path) {
        let j: ChannelJson = serde_json::from_str(text).map_err(|e| CliError::parse(path, e))?;
        return j.into_channel();
    }
    let t = parse_table_csv(path, text)?;
    Ok(Channel::new(t.rows, t.cols, t.values)?)
}

/// `fixture:NAME` or a file path.
pub fn load_channel(reference: &str) -> Result<Channel> {
    if let Some(name) = reference.strip_prefix("fixture:") {
        return fixtures::channel(name).ok_or_else(|| {
            CliError::Invalid(format!(
                "unknown channel fixture `{name}` (known: {})",
                fixtures::CHANNEL_NAMES.join(", ")
            ))
        });
    }
    parse_channel(reference, &read_text(reference)?)
}

pub fn write_channel(path: &str, c: &Channel) -> Result<()> {
    let text = if is_json(path) {
        channel_to_json(c)
    } else {
        channel_to_csv(c)
    };
    write_text(path, &text)
}

pub fn dist_to_csv(d: &Dist) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(["label", "mass"]).expect("in-memory write");
    for (l, m) in d.labels().iter().zip(d.mass()) {
        w.write_record([l.as_str(), &fmt_f64(*m)])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 labels")
}

pub fn parse_dist(path: &str, text: &str) -> Result<Dist> {
    if is_json(path) {
        let j: DistJson = serde_json::from_str(text).map_err(|e| CliError::parse(path, e))?;
        return j.into_dist();
    }
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut labels = Vec::new();
    let mut mass = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::parse(path, e))?;
        if rec.len() != 2 {
            return Err(CliError::parse(
                path,
                format!("line {}: expected `label,mass`", i + 1),
            ));
        }
        if i == 0 && &rec[0] == "label" && &rec[1] == "mass" {
            continue;
        }
        labels.push(rec[0].to_string());
        mass.push(parse_num(path, &rec[1])?);
    }
    Ok(Dist::probability(labels, mass)?)
}

/// `fixture:NAME`, `uniform` (over `inputs`), or a file path.
pub fn load_prior(reference: &str, inputs: &[String]) -> Result<Dist> {
    if reference == "uniform" {
        return Ok(Dist::uniform(inputs.to_vec())?);
    }
    if let Some(name) = reference.strip_prefix("fixture:") {
        return fixtures::prior(name).ok_or_else(|| {
            CliError::Invalid(format!(
                "unknown prior fixture `{name}` (known: {})",
                fixtures::PRIOR_NAMES.join(", ")
            ))
        });
    }
    parse_dist(reference, &read_text(reference)?)
}

pub fn write_dist(path: &str, d: &Dist) -> Result<()> {
    let text = if is_json(path) {
        serde_json::to_string_pretty(&DistJson {
            labels: d.labels().to_vec(),
            mass: d.mass().to_vec(),
        })
        .expect("plain data")
    } else {
        dist_to_csv(d)
    };
    write_text(path, &text)
}

pub fn load_joint(path: &str) -> Result<JointDist> {
    let j: JointJson =
        serde_json::from_str(&read_text(path)?).map_err(|e| CliError::parse(path, e))?;
    j.into_joint()
}

/// `identity`, `ktries:K`, or `table:PATH` over `secrets`.
pub fn parse_gain(spec: &str, secrets: &[String]) -> Result<GainFn> {
    if spec == "identity" {
        return Ok(gain_identity(secrets.to_vec())?);
    }
    if let Some(k) = spec.strip_prefix("ktries:") {
        let k: usize = k
            .parse()
            .map_err(|_| CliError::Invalid(format!("bad k in gain `{spec}`")))?;
        return Ok(gain_ktries(secrets.to_vec(), k)?);
    }
    if let Some(path) = spec.strip_prefix("table:") {
        let t = parse_table_csv(path, &read_text(path)?)?;
        let g = GainFn::table(t.rows, t.cols, t.values)?;
        if g.secrets() != secrets {
            return Err(CliError::Invalid(format!(
                "gain table {path} is over different secrets than the channel"
            )));
        }
        return Ok(g);
    }
    Err(CliError::Invalid(format!(
        "unknown gain `{spec}` (use identity, ktries:K or table:PATH)"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn channel_csv_round_trip_is_bit_exact() {
        let c = Channel::new(
            vec!["a".into(), "b, c".into()],
            vec!["y0".into(), "y1".into()],
            vec![vec![0.1, 0.9], vec![1.0 / 3.0, 2.0 / 3.0]],
        )
        .unwrap();
        let back = parse_channel("c.csv", &channel_to_csv(&c)).unwrap();
        assert_eq!(back, c);
        let back = parse_channel("c.json", &channel_to_json(&c)).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn dist_csv_round_trip_is_bit_exact() {
        let d = Dist::probability(vec!["x".into(), "y".into()], vec![0.3, 0.7]).unwrap();
        assert_eq!(parse_dist("d.csv", &dist_to_csv(&d)).unwrap(), d);
    }

    #[test]
    fn header_must_start_empty() {
        assert!(parse_channel("c.csv", "x,y0\na,1\n").is_err());
    }

    #[test]
    fn gain_specs() {
        let xs = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        assert!(parse_gain("identity", &xs).unwrap().is_identity());
        // three singletons and three pairs
        assert_eq!(parse_gain("ktries:2", &xs).unwrap().n_guesses(), 6);
        assert!(parse_gain("bogus", &xs).is_err());
        assert!(parse_gain("ktries:x", &xs).is_err());
    }

    #[test]
    fn fixture_references() {
        assert_eq!(load_channel("fixture:ch_b").unwrap().n_inputs(), 3);
        assert!(load_channel("fixture:nope").is_err());
        let xs = load_channel("fixture:ch_a").unwrap().inputs().to_vec();
        assert_eq!(load_prior("uniform", &xs).unwrap().mass(), &[0.5, 0.5]);
    }
}
