//! Seeded Monte Carlo experiments over random geometric graphs.
//!
//! Trial `t` at the `k`-th sample size draws everything from ChaCha stream
//! `(k << 32) | t` under the experiment seed: first the point seed, then the
//! label-shuffle seed shared by all methods of that trial. Records come back
//! in (sample size, trial, method) order whatever the worker count.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{estimate_dimension, Failure, Method};
use crate::geograph::{build_rgg, Graph};
use crate::pointcloud::{sample_points, DensityKind, DensitySpec, Metric};
use crate::rng::{child_seed, substream};
use crate::wd::{wd, DEFAULT_DIMENSION_CAP, MAX_DIMENSION};

/// How the connection radius follows from `n` and `d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RadiusRule {
    /// A fixed radius.
    Explicit(f64),
    /// `n r^d = c`.
    Nrd(f64),
    /// `n^{3/2} r^d = c`.
    N32rd(f64),
}

pub fn resolve_radius(rule: RadiusRule, n: usize, d: usize, metric: Metric) -> Result<f64> {
    if d == 0 {
        return Err(Error::Config("dimension must be at least 1".into()));
    }
    let n = n as f64;
    let inv_d = 1.0 / d as f64;
    let r = match rule {
        RadiusRule::Explicit(r) => r,
        RadiusRule::Nrd(c) => (c / n).powf(inv_d),
        RadiusRule::N32rd(c) => (c / n.powf(1.5)).powf(inv_d),
    };
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Config(format!("{rule:?} resolves to an invalid radius {r} at n = {n}")));
    }
    if metric == Metric::Torus && r > 0.5 {
        return Err(Error::Config(format!(
            "{rule:?} resolves to r = {r} at n = {n}, above the torus limit 1/2"
        )));
    }
    Ok(r)
}

fn one_or_many<'de, D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Vec<usize>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(usize),
        Many(Vec<usize>),
    }
    Ok(match OneOrMany::deserialize(deserializer)? {
        OneOrMany::One(n) => vec![n],
        OneOrMany::Many(ns) => ns,
    })
}

fn default_cap() -> u32 {
    DEFAULT_DIMENSION_CAP
}

/// A sweep description, read from JSON:
///
/// ```json
/// {"density": "torus", "true_d": 2, "n": [10000, 100000],
///  "radius_rule": {"nrd": 100}, "methods": ["W1", "W2"],
///  "trials": 30, "seed": 1, "cap": 4096}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub density: DensityKind,
    pub true_d: usize,
    #[serde(deserialize_with = "one_or_many")]
    pub n: Vec<usize>,
    pub radius_rule: RadiusRule,
    pub methods: Vec<Method>,
    pub trials: usize,
    pub seed: u64,
    #[serde(default = "default_cap")]
    pub cap: u32,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid experiment config: {e}")))
    }

    pub fn density_spec(&self) -> Result<DensitySpec> {
        DensitySpec::new(self.density, self.true_d).map_err(|e| Error::Config(e.to_string()))
    }

    /// Validate everything and resolve one radius per sample size.
    pub fn radii(&self) -> Result<Vec<f64>> {
        let config = |m: &str| Err(Error::Config(m.into()));
        if self.trials == 0 {
            return config("trials must be at least 1");
        }
        if self.methods.is_empty() {
            return config("at least one method is required");
        }
        if self.n.is_empty() {
            return config("at least one sample size is required");
        }
        if self.cap == 0 || self.cap > MAX_DIMENSION {
            return config(&format!("cap must lie in [1, {MAX_DIMENSION}]"));
        }
        if self.true_d == 0 || self.true_d > self.cap as usize {
            return config("true_d must lie in [1, cap]");
        }
        if self.trials > u32::MAX as usize || self.n.len() > u32::MAX as usize {
            return config("too many trials or sample sizes");
        }
        let spec = self.density_spec()?;
        self.n
            .iter()
            .map(|&n| resolve_radius(self.radius_rule, n, self.true_d, spec.metric()))
            .collect()
    }
}

/// One (trial, method) result row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub method: Method,
    pub n: usize,
    pub d_true: usize,
    pub r: f64,
    pub statistic: Option<f64>,
    pub delta: Option<u32>,
    pub clamped: Option<bool>,
    pub failure: Option<Failure>,
    pub correct: bool,
    pub edges: u64,
    pub max_degree: u64,
    /// Wall time of the whole trial: sampling, construction and all methods.
    pub seconds: f64,
}

pub const CSV_HEADER: &str = "trial,method,n,d_true,r,W,delta,clamped,failed,correct,edges,max_degree,seconds";

impl TrialRecord {
    fn write_csv_row<W: Write>(&self, out: &mut W, timing: bool) -> Result<()> {
        let opt = |v: Option<String>| v.unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.trial,
            self.method,
            self.n,
            self.d_true,
            self.r,
            opt(self.statistic.map(|w| w.to_string())),
            opt(self.delta.map(|d| d.to_string())),
            opt(self.clamped.map(|c| c.to_string())),
            self.failure.is_some(),
            self.correct,
            self.edges,
            self.max_degree,
            if timing { self.seconds.to_string() } else { String::new() },
        )?;
        Ok(())
    }
}

/// Per (sample size, method) aggregate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodSummary {
    pub n: usize,
    pub r: f64,
    pub method: Method,
    pub trials: usize,
    pub correct: usize,
    pub incorrect: usize,
    pub failed: usize,
    pub fraction_correct: f64,
    pub fraction_incorrect: f64,
    pub fraction_failed: f64,
    /// Mean `|W − w_{true_d}|` over trials where `W` is defined.
    pub mean_abs_error: Option<f64>,
    pub failures: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub summary: Vec<MethodSummary>,
    #[serde(skip)]
    pub records: Vec<TrialRecord>,
}

impl ExperimentReport {
    /// Write all records. Wall times are left blank unless `timing` is set,
    /// which keeps the file a pure function of the configuration.
    pub fn write_csv<W: Write>(&self, mut out: W, timing: bool) -> Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for record in &self.records {
            record.write_csv_row(&mut out, timing)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn summary_for(&self, n: usize, method: Method) -> Option<&MethodSummary> {
        self.summary.iter().find(|s| s.n == n && s.method == method)
    }
}

/// Sample `n` points from `spec` with `seed` and connect pairs within `r`.
pub fn generate(spec: &DensitySpec, n: usize, r: f64, seed: u64) -> Result<Graph> {
    build_rgg(&sample_points(spec, n, seed), r)
}

fn trial_stream(n_index: usize, trial: usize) -> u64 {
    ((n_index as u64) << 32) | trial as u64
}

fn run_trial(config: &ExperimentConfig, spec: &DensitySpec, n_index: usize, n: usize, r: f64, trial: usize) -> Result<Vec<TrialRecord>> {
    let started = Instant::now();
    let mut rng = substream(config.seed, trial_stream(n_index, trial));
    let point_seed = child_seed(&mut rng);
    let shuffle_seed = child_seed(&mut rng);

    let graph = generate(spec, n, r, point_seed)?;
    let edges = graph.edge_count();
    let max_degree = graph.max_degree();
    let shuffled = config
        .methods
        .iter()
        .any(|m| m.label_dependent())
        .then(|| graph.shuffle_labels(shuffle_seed));

    let mut records = Vec::with_capacity(config.methods.len());
    for &method in &config.methods {
        let outcome = match (&shuffled, method.label_dependent()) {
            (Some(g), true) => crate::estimators::evaluate(g, method, config.cap)?,
            _ => estimate_dimension(&graph, method, shuffle_seed, config.cap)?,
        };
        records.push(TrialRecord {
            trial,
            method,
            n,
            d_true: config.true_d,
            r,
            statistic: outcome.statistic(),
            delta: outcome.delta(),
            clamped: outcome.clamped(),
            failure: outcome.failure(),
            correct: outcome.delta() == Some(config.true_d as u32),
            edges,
            max_degree,
            seconds: 0.0,
        });
    }
    let seconds = started.elapsed().as_secs_f64();
    for record in &mut records {
        record.seconds = seconds;
    }
    Ok(records)
}

/// Run every trial of `config` on the current rayon pool.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let radii = config.radii()?;
    let spec = config.density_spec()?;
    let target = wd(config.true_d as u32)?;

    let jobs: Vec<(usize, usize, f64, usize)> = config
        .n
        .iter()
        .zip(&radii)
        .enumerate()
        .flat_map(|(k, (&n, &r))| (0..config.trials).map(move |t| (k, n, r, t)))
        .collect();
    let per_trial: Vec<Vec<TrialRecord>> = jobs
        .par_iter()
        .map(|&(k, n, r, t)| run_trial(config, &spec, k, n, r, t))
        .collect::<Result<_>>()?;
    let records: Vec<TrialRecord> = per_trial.into_iter().flatten().collect();

    let mut summary = Vec::new();
    for (&n, &r) in config.n.iter().zip(&radii) {
        for &method in &config.methods {
            summary.push(summarize(&records, n, r, method, target));
        }
    }
    Ok(ExperimentReport {
        config: config.clone(),
        summary,
        records,
    })
}

/// Same as [`run_experiment`] on a dedicated pool of `workers` threads.
pub fn run_experiment_with_workers(config: &ExperimentConfig, workers: usize) -> Result<ExperimentReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {workers} workers: {e}")))?;
    pool.install(|| run_experiment(config))
}

fn summarize(records: &[TrialRecord], n: usize, r: f64, method: Method, target: f64) -> MethodSummary {
    let rows: Vec<&TrialRecord> = records.iter().filter(|t| t.n == n && t.method == method).collect();
    let trials = rows.len();
    let correct = rows.iter().filter(|t| t.correct).count();
    let failed = rows.iter().filter(|t| t.failure.is_some()).count();
    let incorrect = trials - correct - failed;
    let mut failures = BTreeMap::new();
    for f in rows.iter().filter_map(|t| t.failure) {
        *failures.entry(f.to_string()).or_insert(0) += 1;
    }
    let errors: Vec<f64> = rows.iter().filter_map(|t| t.statistic).map(|w| (w - target).abs()).collect();
    let mean_abs_error = (!errors.is_empty()).then(|| errors.iter().sum::<f64>() / errors.len() as f64);
    let frac = |k: usize| k as f64 / trials as f64;
    MethodSummary {
        n,
        r,
        method,
        trials,
        correct,
        incorrect,
        failed,
        fraction_correct: frac(correct),
        fraction_incorrect: frac(incorrect),
        fraction_failed: frac(failed),
        mean_abs_error,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(json: &str) -> ExperimentConfig {
        ExperimentConfig::from_json(json).unwrap()
    }

    #[test]
    fn radius_rules() {
        let r = resolve_radius(RadiusRule::Nrd(100.0), 100_000, 2, Metric::Torus).unwrap();
        assert!((r - 1e-3f64.sqrt()).abs() < 1e-12);
        let r = resolve_radius(RadiusRule::N32rd(200.0), 100_000, 2, Metric::Torus).unwrap();
        assert!((r - (200.0 * 10f64.powf(-7.5)).sqrt()).abs() < 1e-12);
        assert!((r - 0.002515).abs() < 1e-6);
        assert_eq!(resolve_radius(RadiusRule::Explicit(0.25), 10, 3, Metric::Torus).unwrap(), 0.25);
        assert!(matches!(
            resolve_radius(RadiusRule::Explicit(0.6), 10, 2, Metric::Torus),
            Err(Error::Config(_))
        ));
        assert_eq!(resolve_radius(RadiusRule::Explicit(0.6), 10, 2, Metric::Euclidean).unwrap(), 0.6);
        assert!(resolve_radius(RadiusRule::Nrd(-1.0), 10, 2, Metric::Euclidean).is_err());
    }

    #[test]
    fn config_parsing() {
        let c = config(r#"{"density":"gauss:sigma=1","true_d":3,"n":500,"radius_rule":{"explicit":0.2},"methods":["W2sym","W4"],"trials":2,"seed":9}"#);
        assert_eq!(c.n, vec![500]);
        assert_eq!(c.cap, DEFAULT_DIMENSION_CAP);
        assert_eq!(c.methods, vec![Method::W2Sym, Method::W4]);
        assert_eq!(c.density, DensityKind::Gaussian { sigma: 1.0 });

        for bad in [
            r#"{"density":"torus","true_d":2,"n":[10],"radius_rule":{"explicit":0.1},"methods":["W9"],"trials":1,"seed":1}"#,
            r#"{"density":"torus","true_d":2,"n":[10],"radius_rule":{"explicit":0.1},"methods":["W1"],"trials":1}"#,
            r#"{"density":"torus","true_d":2,"n":[10],"radius_rule":{"explicit":0.1},"methods":["W1"],"trials":1,"seed":1,"extra":0}"#,
        ] {
            assert!(matches!(ExperimentConfig::from_json(bad), Err(Error::Config(_))));
        }
    }

    #[test]
    fn configuration_errors_before_any_trial() {
        let base = r#"{"density":"torus","true_d":2,"n":[100],"radius_rule":{"explicit":0.6},"methods":["W1"],"trials":1,"seed":1}"#;
        assert!(matches!(run_experiment(&config(base)), Err(Error::Config(_))));
        let zero = base.replace("0.6", "0.1").replace("\"trials\":1", "\"trials\":0");
        assert!(matches!(run_experiment(&config(&zero)), Err(Error::Config(_))));
        let no_methods = base.replace("0.6", "0.1").replace("[\"W1\"]", "[]");
        assert!(matches!(run_experiment(&config(&no_methods)), Err(Error::Config(_))));
    }

    #[test]
    fn record_cardinality_and_accounting() {
        let c = config(r#"{"density":"torus","true_d":2,"n":[300, 600],"radius_rule":{"nrd":20},"methods":["W3","W1"],"trials":10,"seed":5}"#);
        let report = run_experiment(&c).unwrap();
        assert_eq!(report.records.len(), 2 * 10 * 2);
        assert_eq!(report.records.iter().filter(|t| t.method == Method::W3).count(), 20);
        for s in &report.summary {
            assert_eq!(s.trials, 10);
            assert_eq!(s.correct + s.incorrect + s.failed, s.trials);
            assert!((s.fraction_correct + s.fraction_incorrect + s.fraction_failed - 1.0).abs() < 1e-12);
        }
        for t in &report.records {
            assert_eq!(t.correct, t.delta == Some(2));
            assert_eq!(t.statistic.is_some(), t.failure.is_none());
        }
    }

    #[test]
    fn csv_layout() {
        let c = config(r#"{"density":"torus","true_d":2,"n":[5],"radius_rule":{"explicit":0.01},"methods":["W3"],"trials":1,"seed":1}"#);
        let report = run_experiment(&c).unwrap();
        let mut buf = Vec::new();
        report.write_csv(&mut buf, false).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "0,W3,5,2,0.01,,,,true,false,0,0,");
    }
}
