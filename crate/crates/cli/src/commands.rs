use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use leakbound_core::approx::{
    blackbox_distinct_bounds, blackbox_shared_bound, sandwich_single, truncate_joint_prior,
    truncate_prior, whitebox_distinct_bounds, whitebox_shared_bound,
};
use leakbound_core::bounds::{
    bound_leakage_distinct, bound_leakage_distinct_refined, bound_leakage_shared,
    bound_leakage_shared_refined,
};
use leakbound_core::compose::{cascade, find_refinement};
use leakbound_core::generators::crowds::crowds_channel;
use leakbound_core::generators::random::{random_channel, random_crowd, random_prior};
use leakbound_core::measures::{
    cond_entropy_g, entropy_g, leakage_g, min_capacity, min_entropy_leakage, mutual_information,
    post_vuln_g, post_vulnerability, prior_vuln_g,
};
use leakbound_core::{
    BoundReport, Channel, Composer, Dist, GainFn, JointDist, JointGainFn, QifError, TUPLE_SEP,
};
use serde_json::{json, Map, Value};

use crate::args::*;
use crate::error::{CliError, Result};
use crate::io::{self, fmt_f64};
use crate::scenario::{Analysis, Prior, Scenario, Shape};

/// Version tag written at the top of every bench CSV.
pub const BENCH_CSV_VERSION: &str = "leakbound-bench-csv v1";
pub const BENCH_CSV_COLUMNS: &str = "n_components,exact_time_ms,bound_time_ms,lo,hi,exact";

enum Item {
    Value(String, f64),
    Text(String, String),
    Bound(String, BoundReport),
}

fn value(name: impl Into<String>, v: f64) -> Item {
    Item::Value(name.into(), v)
}

fn text(name: impl Into<String>, s: impl Into<String>) -> Item {
    Item::Text(name.into(), s.into())
}

fn bound(name: impl Into<String>, r: BoundReport) -> Item {
    Item::Bound(name.into(), r)
}

pub fn report_json(r: &BoundReport) -> Value {
    json!({
        "quantity": r.quantity.to_string(),
        "lo": r.lo,
        "hi": r.hi,
        "provenance": r.provenance.describe(),
        "parts": r.parts,
        "notes": r.notes,
    })
}

fn render(format: Format, items: &[Item]) -> String {
    match format {
        Format::Text => {
            let mut s = String::new();
            for it in items {
                match it {
                    Item::Value(k, v) => s.push_str(&format!("{k:<24}{}\n", fmt_f64(*v))),
                    Item::Text(k, v) => s.push_str(&format!("{k:<24}{v}\n")),
                    Item::Bound(k, r) => s.push_str(&format!("[{k}]\n{r}")),
                }
            }
            s
        }
        Format::Json => {
            let mut m = Map::new();
            for it in items {
                let (k, v) = match it {
                    Item::Value(k, v) => (k, json!(v)),
                    Item::Text(k, v) => (k, json!(v)),
                    Item::Bound(k, r) => (k, report_json(r)),
                };
                m.insert(k.clone(), v);
            }
            let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("plain data");
            s.push('\n');
            s
        }
    }
}

fn composer(l: &Limits) -> Composer {
    Composer::with_max_cells(l.max_cells)
}

/// Runs `f` on a worker thread and gives up after `--timeout-s`. The
/// worker is detached on timeout; its result is discarded.
fn timed<T: Send + 'static>(
    l: &Limits,
    f: impl FnOnce() -> Result<T> + Send + 'static,
) -> Result<T> {
    let Some(secs) = l.timeout_s else {
        return f();
    };
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        let _ = tx.send(f());
    });
    match rx.recv_timeout(Duration::from_secs_f64(secs.max(0.0))) {
        Ok(r) => r,
        Err(_) => Err(CliError::Timeout(secs)),
    }
}

fn load_components(refs: &[String], repeat: usize) -> Result<Vec<Channel>> {
    if refs.is_empty() {
        return Err(CliError::Invalid("no channels given".into()));
    }
    if repeat == 0 {
        return Err(CliError::Invalid("--repeat must be at least 1".into()));
    }
    let once = refs
        .iter()
        .map(|r| io::load_channel(r))
        .collect::<Result<Vec<_>>>()?;
    Ok(once
        .iter()
        .cycle()
        .take(once.len() * repeat)
        .cloned()
        .collect())
}

fn refs(cs: &[Channel]) -> Vec<&Channel> {
    cs.iter().collect()
}

fn require_identity(gain: &str) -> Result<()> {
    if gain != "identity" {
        return Err(CliError::Invalid(
            "truncated-prior bounds are for min-entropy leakage; use --gain identity".into(),
        ));
    }
    Ok(())
}

fn product_gain(spec: &str, cs: &[Channel]) -> Result<JointGainFn> {
    let gs = cs
        .iter()
        .map(|c| io::parse_gain(spec, c.inputs()))
        .collect::<Result<Vec<GainFn>>>()?;
    Ok(JointGainFn::product(gs)?)
}

fn uniform_product(cs: &[Channel]) -> Result<JointDist> {
    let margs = cs
        .iter()
        .map(|c| Dist::uniform(c.inputs().to_vec()))
        .collect::<leakbound_core::Result<Vec<_>>>()?;
    Ok(JointDist::product(&margs.iter().collect::<Vec<_>>())?)
}

/// Exact g-leakage of `C_1 ∥ … ∥ C_n`.
fn exact_shared(l: &Limits, pi: &Dist, cs: &[Channel], g: &GainFn) -> Result<f64> {
    let (pi, cs, g, comp) = (pi.clone(), cs.to_vec(), g.clone(), composer(l));
    timed(l, move || {
        let c = comp.par_shared_n(&refs(&cs))?;
        Ok(leakage_g(&pi, &c, &g)?.bits)
    })
}

/// Exact g-leakage of `C_1 × … × C_n` under a joint prior and gain.
fn exact_distinct(l: &Limits, pi: &JointDist, cs: &[Channel], g: &JointGainFn) -> Result<f64> {
    let (pi, cs, g, comp) = (pi.clone(), cs.to_vec(), g.clone(), composer(l));
    timed(l, move || {
        let c = comp.par_distinct_n(&refs(&cs))?;
        let flat = pi.flatten(TUPLE_SEP);
        let c = c.relabeled(flat.labels().to_vec(), c.outputs().to_vec())?;
        Ok(leakage_g(&flat, &c, &g.flatten(TUPLE_SEP))?.bits)
    })
}

pub fn measure(a: &MeasureArgs) -> Result<String> {
    let c = io::load_channel(&a.channel)?;
    let mut items = Vec::new();
    if a.min_capacity {
        items.push(value("min_capacity", min_capacity(&c)));
        return Ok(render(a.format, &items));
    }
    let pi = io::load_prior(&a.prior, c.inputs())?;
    if a.mi {
        items.push(value("mutual_information", mutual_information(&pi, &c)?));
        return Ok(render(a.format, &items));
    }
    let g = io::parse_gain(&a.gain, c.inputs())?;
    items.push(value("prior_vulnerability", prior_vuln_g(&pi, &g)?));
    items.push(value("posterior_vulnerability", post_vuln_g(&pi, &c, &g)?));
    items.push(value("prior_entropy", entropy_g(&pi, &g)?.bits));
    items.push(value(
        "posterior_entropy",
        cond_entropy_g(&pi, &c, &g)?.bits,
    ));
    match leakage_g(&pi, &c, &g) {
        Ok(l) => items.push(value("leakage", l.bits)),
        Err(QifError::ZeroVulnerability) => {
            items.push(text("leakage", "undefined (zero prior vulnerability)"))
        }
        Err(e) => return Err(e.into()),
    }
    items.push(value("min_capacity", min_capacity(&c)));
    if !pi.is_sub() {
        items.push(value("mutual_information", mutual_information(&pi, &c)?));
    }
    Ok(render(a.format, &items))
}

pub fn compose(a: &ComposeArgs) -> Result<String> {
    let cs = load_components(&a.channels, a.repeat)?;
    let comp = composer(&a.limits);
    let c = if a.cascade {
        if cs.len() != 2 {
            return Err(CliError::Invalid(format!(
                "cascade takes two channels, got {}",
                cs.len()
            )));
        }
        cascade(&cs[0], &cs[1])?
    } else {
        let shared = a.shared;
        timed(&a.limits, move || {
            let r = refs(&cs);
            Ok(if shared {
                comp.par_shared_n(&r)?
            } else {
                comp.par_distinct_n(&r)?
            })
        })?
    };
    match &a.out {
        Some(path) => {
            io::write_channel(path, &c)?;
            Ok(String::new())
        }
        None => Ok(match a.format {
            MatrixFormat::Csv => io::channel_to_csv(&c),
            MatrixFormat::Json => io::channel_to_json(&c) + "\n",
        }),
    }
}

pub fn bound_cmd(a: &BoundArgs) -> Result<String> {
    let refined = !a.lower.is_empty();
    let cs = if refined {
        if a.lower.len() != a.upper.len() {
            return Err(CliError::Invalid(
                "--lower and --upper need one channel per component each".into(),
            ));
        }
        load_components(&a.lower, a.repeat)?
    } else {
        load_components(&a.channels, a.repeat)?
    };
    let upper = if refined {
        load_components(&a.upper, a.repeat)?
    } else {
        Vec::new()
    };
    let mut items = Vec::new();
    if a.shared {
        let pi = io::load_prior(a.prior.as_deref().unwrap_or("uniform"), cs[0].inputs())?;
        let g = io::parse_gain(&a.gain, cs[0].inputs())?;
        let r = if refined {
            bound_leakage_shared_refined(&pi, &refs(&cs), &refs(&upper), &g)?
        } else if let Some(eps) = a.epsilon {
            require_identity(&a.gain)?;
            if a.blackbox {
                let leaks = cs
                    .iter()
                    .map(|c| Ok(min_entropy_leakage(&pi, c)?.bits))
                    .collect::<Result<Vec<_>>>()?;
                let vulns = cs
                    .iter()
                    .map(|c| Ok(post_vulnerability(&pi, c)?))
                    .collect::<Result<Vec<_>>>()?;
                blackbox_shared_bound(&pi, &leaks, &vulns, eps)?
            } else {
                whitebox_shared_bound(&pi, &refs(&cs), eps)?
            }
        } else {
            bound_leakage_shared(&pi, &refs(&cs), &g)?
        };
        items.push(bound("bound", r));
        if a.exact && !refined {
            items.push(value("exact", exact_shared(&a.limits, &pi, &cs, &g)?));
        }
    } else {
        let pi = match (&a.prior, a.marginals.is_empty()) {
            (Some(p), _) => io::load_joint(p)?,
            (None, false) => {
                if a.marginals.len() != cs.len() {
                    return Err(CliError::Invalid(format!(
                        "{} marginals for {} components",
                        a.marginals.len(),
                        cs.len()
                    )));
                }
                let margs = a
                    .marginals
                    .iter()
                    .zip(&cs)
                    .map(|(m, c)| io::load_prior(m, c.inputs()))
                    .collect::<Result<Vec<_>>>()?;
                JointDist::product(&margs.iter().collect::<Vec<_>>())?
            }
            (None, true) => uniform_product(&cs)?,
        };
        let g = product_gain(&a.gain, &cs)?;
        let r = if refined {
            bound_leakage_distinct_refined(&pi, &refs(&cs), &refs(&upper), &g)?
        } else if let Some(eps) = a.epsilon {
            require_identity(&a.gain)?;
            if a.blackbox {
                let (leaks, vulns) = marginal_measures(&pi, &cs)?;
                blackbox_distinct_bounds(&pi, &leaks, &vulns, eps)?
            } else {
                whitebox_distinct_bounds(&pi, &refs(&cs), eps)?
            }
        } else {
            bound_leakage_distinct(&pi, &refs(&cs), &g)?
        };
        items.push(bound("bound", r));
        if a.exact && !refined {
            items.push(value("exact", exact_distinct(&a.limits, &pi, &cs, &g)?));
        }
    }
    Ok(render(a.format, &items))
}

fn marginal_measures(pi: &JointDist, cs: &[Channel]) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut leaks = Vec::new();
    let mut vulns = Vec::new();
    for (i, c) in cs.iter().enumerate() {
        let m = pi.marginal(i);
        leaks.push(min_entropy_leakage(&m, c)?.bits);
        vulns.push(post_vulnerability(&m, c)?);
    }
    Ok((leaks, vulns))
}

pub fn approx(a: &ApproxArgs) -> Result<String> {
    let cs = load_components(&a.channels, a.repeat)?;
    let mut items = Vec::new();
    if a.distinct {
        let pi = if a.prior == "uniform" {
            uniform_product(&cs)?
        } else {
            io::load_joint(&a.prior)?
        };
        let (leaks, vulns) = marginal_measures(&pi, &cs)?;
        let min_v = vulns.iter().copied().fold(f64::INFINITY, f64::min);
        let eps = a.epsilon.unwrap_or(min_v / 3.0);
        let t = truncate_joint_prior(&pi, eps)?;
        items.push(value("epsilon", eps));
        items.push(value("epsilon_actual", t.epsilon_actual));
        let dropped: Vec<String> = t
            .dropped
            .iter()
            .map(|d| format!("[{}]", d.join(" ")))
            .collect();
        items.push(text("dropped", dropped.join(" ")));
        items.push(bound(
            "whitebox",
            whitebox_distinct_bounds(&pi, &refs(&cs), eps)?,
        ));
        items.push(bound(
            "blackbox",
            blackbox_distinct_bounds(&pi, &leaks, &vulns, eps)?,
        ));
        if a.exact {
            let g = product_gain("identity", &cs)?;
            items.push(value("exact", exact_distinct(&a.limits, &pi, &cs, &g)?));
        }
        return Ok(render(a.format, &items));
    }
    let pi = io::load_prior(&a.prior, cs[0].inputs())?;
    let vulns = cs
        .iter()
        .map(|c| Ok(post_vulnerability(&pi, c)?))
        .collect::<Result<Vec<_>>>()?;
    let max_v = vulns.iter().copied().fold(0.0, f64::max);
    let eps = a.epsilon.unwrap_or(max_v / 3.0);
    let t = truncate_prior(&pi, eps)?;
    items.push(value("epsilon", eps));
    items.push(value("epsilon_actual", t.epsilon_actual));
    items.push(text("removed", t.removed.join(" ")));
    if cs.len() == 1 {
        items.push(bound("sandwich", sandwich_single(&pi, &cs[0], eps)?));
    } else {
        let leaks = cs
            .iter()
            .map(|c| Ok(min_entropy_leakage(&pi, c)?.bits))
            .collect::<Result<Vec<_>>>()?;
        items.push(bound(
            "whitebox",
            whitebox_shared_bound(&pi, &refs(&cs), eps)?,
        ));
        items.push(bound(
            "blackbox",
            blackbox_shared_bound(&pi, &leaks, &vulns, eps)?,
        ));
    }
    if a.exact {
        let g = io::parse_gain("identity", cs[0].inputs())?;
        items.push(value("exact", exact_shared(&a.limits, &pi, &cs, &g)?));
    }
    Ok(render(a.format, &items))
}

pub fn refine(a: &RefineArgs) -> Result<String> {
    let coarse = io::load_channel(&a.coarse)?;
    let fine = io::load_channel(&a.fine)?;
    let mut s = String::new();
    match find_refinement(&coarse, &fine)? {
        Some(w) => {
            s.push_str("refines                 true\n");
            match &a.out {
                Some(path) => io::write_channel(path, &w.post)?,
                None => {
                    s.push_str("witness\n");
                    s.push_str(&io::channel_to_csv(&w.post));
                }
            }
        }
        None => s.push_str("refines                 false\n"),
    }
    Ok(s)
}

pub fn crowds(a: &CrowdsArgs) -> Result<String> {
    if a.runs == 0 {
        return Err(CliError::Invalid("--runs must be at least 1".into()));
    }
    let cs = (0..a.runs)
        .map(|r| {
            let t = random_crowd(
                a.users,
                a.corrupt,
                a.edge_prob,
                a.pf,
                a.seed.wrapping_add(r as u64),
            )?;
            Ok(crowds_channel(&t)?)
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(path) = &a.out {
        io::write_channel(path, &cs[0])?;
    }
    let pi = Dist::uniform(cs[0].inputs().to_vec())?;
    let g = io::parse_gain(&a.gain, cs[0].inputs())?;
    let mut items = vec![
        value("honest_users", cs[0].n_inputs() as f64),
        value("observables", cs[0].n_outputs() as f64),
    ];
    for (i, c) in cs.iter().enumerate() {
        items.push(value(format!("leakage[{i}]"), leakage_g(&pi, c, &g)?.bits));
    }
    if a.runs > 1 {
        items.push(bound("bound", bound_leakage_shared(&pi, &refs(&cs), &g)?));
    }
    if a.exact {
        items.push(value("exact", exact_shared(&a.limits, &pi, &cs, &g)?));
    }
    Ok(render(a.format, &items))
}

pub fn randgen(a: &RandgenArgs) -> Result<String> {
    match a.kind {
        RandKind::Channel => {
            let c = random_channel(a.inputs, a.outputs, a.noise, a.seed)?;
            match &a.out {
                Some(p) => io::write_channel(p, &c).map(|_| String::new()),
                None => Ok(io::channel_to_csv(&c)),
            }
        }
        RandKind::Prior => {
            let d = random_prior(a.inputs, a.seed)?;
            match &a.out {
                Some(p) => io::write_dist(p, &d).map(|_| String::new()),
                None => Ok(io::dist_to_csv(&d)),
            }
        }
    }
}

/// One line of the bench CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n_components: usize,
    /// `Err("CAP")` or `Err("TIMEOUT")` when the exact value was not computed.
    pub exact_time_ms: std::result::Result<f64, &'static str>,
    pub bound_time_ms: f64,
    pub lo: f64,
    pub hi: f64,
    pub exact: Option<f64>,
}

impl BenchRow {
    pub fn to_csv(&self) -> String {
        let exact_t = match self.exact_time_ms {
            Ok(t) => fmt_f64(t),
            Err(s) => s.to_string(),
        };
        let exact = self.exact.map(fmt_f64).unwrap_or_default();
        format!(
            "{},{},{},{},{},{}",
            self.n_components,
            exact_t,
            fmt_f64(self.bound_time_ms),
            fmt_f64(self.lo),
            fmt_f64(self.hi),
            exact
        )
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

/// Shared compositions of `n = 1..=max_components` copies of one channel:
/// exact leakage (until the cell cap or the timeout is hit) against the
/// identity-gain bound.
pub fn bench_rows(a: &BenchArgs) -> Result<Vec<BenchRow>> {
    let c = match (&a.channel, a.seed) {
        (Some(r), _) => io::load_channel(r)?,
        (None, Some(seed)) => random_channel(a.size, a.size, a.noise, seed)?,
        (None, None) => return Err(CliError::Invalid("bench needs --channel or --seed".into())),
    };
    let pi = io::load_prior(&a.prior, c.inputs())?;
    let g = io::parse_gain("identity", c.inputs())?;
    let reps = a.reps.max(1);
    let mut rows = Vec::new();
    let mut stopped: Option<&'static str> = None;
    for n in 1..=a.max_components {
        let cs = vec![c.clone(); n];
        let mut times = Vec::with_capacity(reps);
        let mut r = None;
        for _ in 0..reps {
            let t0 = Instant::now();
            r = Some(bound_leakage_shared(&pi, &refs(&cs), &g)?);
            times.push(t0.elapsed().as_secs_f64() * 1e3);
        }
        let r = r.expect("at least one repetition");
        let (exact_time_ms, exact) = match stopped {
            Some(s) => (Err(s), None),
            None => {
                let t0 = Instant::now();
                match exact_shared(&a.limits, &pi, &cs, &g) {
                    Ok(v) => (Ok(t0.elapsed().as_secs_f64() * 1e3), Some(v)),
                    Err(CliError::Qif(QifError::SizeOverflow { .. })) => {
                        stopped = Some("CAP");
                        (Err("CAP"), None)
                    }
                    Err(CliError::Timeout(_)) => {
                        stopped = Some("TIMEOUT");
                        (Err("TIMEOUT"), None)
                    }
                    Err(e) => return Err(e),
                }
            }
        };
        log::info!("bench n={n} done");
        rows.push(BenchRow {
            n_components: n,
            exact_time_ms,
            bound_time_ms: median(times),
            lo: r.lo,
            hi: r.hi,
            exact,
        });
    }
    Ok(rows)
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut s = format!("# {BENCH_CSV_VERSION}\n{BENCH_CSV_COLUMNS}\n");
    for r in rows {
        s.push_str(&r.to_csv());
        s.push('\n');
    }
    s
}

pub fn bench(a: &BenchArgs) -> Result<String> {
    let csv = bench_csv(&bench_rows(a)?);
    match &a.out {
        Some(p) => io::write_text(p, &csv).map(|_| String::new()),
        None => Ok(csv),
    }
}

pub fn run_scenario(a: &RunArgs) -> Result<String> {
    let s = Scenario::load(&a.scenario)?;
    let comp = composer(&a.limits);
    let cs = s.components(&comp)?;
    let prior = s.prior(&cs)?;
    let shape = s.shape();
    let mut items = Vec::new();
    for analysis in &s.analysis {
        match (analysis, shape, &prior) {
            (Analysis::Exact, Shape::Distinct, Prior::Joint(pi)) => {
                let g = product_gain(&s.gain, &cs)?;
                items.push(value("exact", exact_distinct(&a.limits, pi, &cs, &g)?));
            }
            (Analysis::Exact, _, Prior::Single(pi)) => {
                let g = io::parse_gain(&s.gain, pi.labels())?;
                let (s2, pi2, comp2) = (s.clone(), pi.clone(), comp.clone());
                let v = timed(&a.limits, move || {
                    let c = s2.materialize(&s2.composition, &comp2)?;
                    Ok(leakage_g(&pi2, &c, &g)?.bits)
                })?;
                items.push(value("exact", v));
            }
            (Analysis::Bound, Shape::Shared, Prior::Single(pi)) => {
                let g = io::parse_gain(&s.gain, pi.labels())?;
                items.push(bound("bound", bound_leakage_shared(pi, &refs(&cs), &g)?));
            }
            (Analysis::Bound, Shape::Distinct, Prior::Joint(pi)) => {
                let g = product_gain(&s.gain, &cs)?;
                items.push(bound("bound", bound_leakage_distinct(pi, &refs(&cs), &g)?));
            }
            (Analysis::Bound, Shape::Single, _) => {
                items.push(text("bound", "skipped: composition is not parallel"));
            }
            (Analysis::Approx, _, Prior::Single(pi)) => {
                require_identity(&s.gain)?;
                let eps = match s.epsilon {
                    Some(e) => e,
                    None => default_epsilon(pi, &cs)?,
                };
                let r = if shape == Shape::Shared {
                    whitebox_shared_bound(pi, &refs(&cs), eps)?
                } else {
                    let c = s.materialize(&s.composition, &comp)?;
                    sandwich_single(pi, &c, eps)?
                };
                items.push(bound("approx", r));
            }
            (Analysis::Approx, Shape::Distinct, Prior::Joint(pi)) => {
                require_identity(&s.gain)?;
                let eps = match s.epsilon {
                    Some(e) => e,
                    None => {
                        marginal_measures(pi, &cs)?
                            .1
                            .iter()
                            .copied()
                            .fold(f64::INFINITY, f64::min)
                            / 3.0
                    }
                };
                items.push(bound(
                    "approx",
                    whitebox_distinct_bounds(pi, &refs(&cs), eps)?,
                ));
            }
            (Analysis::Capacity, _, _) => {
                let sum: f64 = cs.iter().map(min_capacity).sum();
                items.push(value("capacity_sum", sum));
            }
            (_, Shape::Distinct, Prior::Single(_)) => {
                return Err(CliError::Invalid(
                    "a distinct composition needs a joint prior".into(),
                ));
            }
            (_, _, Prior::Joint(_)) => {
                return Err(CliError::Invalid(
                    "a joint prior needs a distinct composition".into(),
                ));
            }
        }
    }
    Ok(render(a.format, &items))
}

fn default_epsilon(pi: &Dist, cs: &[Channel]) -> Result<f64> {
    let mut max_v: f64 = 0.0;
    for c in cs {
        max_v = max_v.max(post_vulnerability(pi, c)?);
    }
    Ok(max_v / 3.0)
}

pub fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Measure(a) => measure(a),
        Command::Compose(a) => compose(a),
        Command::Bound(a) => bound_cmd(a),
        Command::Approx(a) => approx(a),
        Command::Refine(a) => refine(a),
        Command::Crowds(a) => crowds(a),
        Command::Randgen(a) => randgen(a),
        Command::Bench(a) => bench(a),
        Command::Run(a) => run_scenario(a),
    }
}
