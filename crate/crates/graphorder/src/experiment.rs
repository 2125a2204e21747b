//! Reproducible Monte Carlo harness. A JSON config describes a sampling
//! model, a trial count and a list of structural checks; the harness runs
//! the trials in parallel with per-trial split seeds, writes one JSON record
//! per trial (in trial order, so output is byte-identical at any parallelism
//! degree) plus a CSV summary, and spot-checks that records really are
//! recomputable from their seeds.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

use crate::dimension::{exact_dimension, incomparable_pairs, DimensionResult, DEFAULT_K_MAX};
use crate::graph::Graph;
use crate::numerics::{
    bipartite_lower_curve, gnp_lower_curve, solve_alpha, upset_pmf, upset_pmf_exact, NumericsError,
    XiRule,
};
use crate::poset::{BipartiteOrder, Poset, SetClosure, TotalOrder};
use crate::random::{
    gnp_threshold_set, random_linear_extension, rng_for, sample_bipartite_order, sample_gnp_order,
    split_seed, Model, ModelSpec, RandomError, ThresholdMode, ThresholdParams, DEFAULT_K,
};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("unknown check identifier: {0}")]
    UnknownCheck(String),
    #[error(transparent)]
    Random(#[from] RandomError),
    #[error(transparent)]
    Poset(#[from] crate::poset::PosetError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("{pairs} relevant pairs is too large for exhaustive enumeration (max {max})")]
    SizeTooLarge { pairs: usize, max: usize },
    #[error("trial {trial} is not recomputable from its seed (spot-check failed)")]
    SpotCheck { trial: u64 },
}

/// The structural checks a trial can run. Bipartite-only and general-only
/// checks are rejected at config validation when the model does not match.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// Exact dimension (bounded by `k_max`).
    Dim,
    /// Maximum antichain size.
    Width,
    /// Number of incomparable pairs.
    IncPairs,
    /// Maximum over x of |D[x] ∪ U[x]|.
    MaxUpdown,
    /// High-degree down-set structure: component classes of the cover graph
    /// of P restricted to D[S], plus the cover-subgraph property.
    DsStructure,
    /// Complement statistics of a bipartite order (isolated complement
    /// edges, fully-connected elements).
    ComplementStats,
    /// Reversed-incomparable-pair counts over sampled linear extensions.
    ReversalCapacity,
    /// Incomparable-pair density of the extreme blocks.
    IncDensity,
}

impl CheckKind {
    pub fn token(self) -> &'static str {
        match self {
            CheckKind::Dim => "dim",
            CheckKind::Width => "width",
            CheckKind::IncPairs => "inc-pairs",
            CheckKind::MaxUpdown => "max-updown",
            CheckKind::DsStructure => "ds-structure",
            CheckKind::ComplementStats => "complement-stats",
            CheckKind::ReversalCapacity => "reversal-capacity",
            CheckKind::IncDensity => "inc-density",
        }
    }

    fn applies_to(self, model: Model) -> bool {
        match self {
            CheckKind::DsStructure => model == Model::Gnp,
            CheckKind::ComplementStats | CheckKind::ReversalCapacity => model == Model::Bipartite,
            _ => true,
        }
    }
}

impl std::str::FromStr for CheckKind {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<CheckKind, ExperimentError> {
        serde_json::from_value(serde_json::Value::String(s.to_owned()))
            .map_err(|_| ExperimentError::UnknownCheck(s.to_owned()))
    }
}

fn default_schema() -> u32 {
    1
}

fn default_k_max() -> usize {
    DEFAULT_K_MAX
}

fn default_threshold_k() -> f64 {
    DEFAULT_K
}

fn default_extension_samples() -> usize {
    100
}

fn default_epsilon() -> f64 {
    0.1
}

/// One experiment: a model, a trial count, the checks to run and output
/// paths. Serialized as versioned JSON (`"schema": 1`).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub spec: ModelSpec,
    pub trials: u64,
    pub checks: Vec<CheckKind>,
    #[serde(default = "default_k_max")]
    pub k_max: usize,
    #[serde(rename = "K", default = "default_threshold_k")]
    pub threshold_k: f64,
    /// Extreme-block fraction for `inc-density` on general orders.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<f64>,
    /// Random extensions sampled per trial by `reversal-capacity`.
    #[serde(default = "default_extension_samples")]
    pub extension_samples: usize,
    /// Slack in the reversal bound 2(1+ε)·α_c·n².
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Path stem: records go to `<output>.jsonl`, the summary to
    /// `<output>_summary.csv`.
    pub output: String,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.schema != 1 {
            return Err(ExperimentError::Config(format!(
                "unsupported schema version {} (expected 1)",
                self.schema
            )));
        }
        self.spec.validate().map_err(ExperimentError::Random)?;
        if self.trials < 1 {
            return Err(ExperimentError::Config("trials must be at least 1".into()));
        }
        if self.checks.is_empty() {
            return Err(ExperimentError::Config("checks must be nonempty".into()));
        }
        if self.k_max < 1 {
            return Err(ExperimentError::Config("k_max must be at least 1".into()));
        }
        for &check in &self.checks {
            if !check.applies_to(self.spec.model) {
                return Err(ExperimentError::Config(format!(
                    "check `{}` does not apply to the {:?} model",
                    check.token(),
                    self.spec.model
                )));
            }
        }
        if self.spec.model == Model::Gnp && self.checks.contains(&CheckKind::IncDensity) {
            let xi = self.xi.ok_or_else(|| {
                ExperimentError::Config("inc-density on a general order needs `xi`".into())
            })?;
            if !(xi > 0.0 && xi <= 0.5) {
                return Err(ExperimentError::Config(format!(
                    "xi = {xi} outside (0, 1/2]"
                )));
            }
        }
        Ok(())
    }

    fn mean_degree(&self) -> f64 {
        match (self.spec.c, self.spec.p) {
            (Some(c), _) => c,
            (None, Some(p)) => p * self.spec.n as f64,
            _ => f64::NAN,
        }
    }
}

/// Outcome of one check in one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckOutcome {
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub statistic: Option<f64>,
}

/// Everything recorded about one trial; recomputable from `trial_seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialRecord {
    pub trial: u64,
    pub trial_seed: u64,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub incomparable_pair_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_updown_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    /// Set (to `k_max`) when the solver budget was exhausted instead.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension_exceeded: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isolated_edge_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ds_component_classes: Option<BTreeMap<String, usize>>,
    pub check_outcomes: BTreeMap<String, CheckOutcome>,
}

/// Aggregate view of a finished experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub trials: u64,
    /// Per-check mean/standard-error/pass-rate over the trial statistics.
    pub stats: BTreeMap<String, StatLine>,
    /// Histogram of exact dimensions (only when `dim` ran).
    pub dimension_histogram: BTreeMap<usize, u64>,
    /// Trials where the solver hit its budget.
    pub exceeded_count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StatLine {
    pub mean: f64,
    pub se: f64,
    pub pass_rate: f64,
}

/// Runs all trials of `config` (in parallel, deterministically), writes
/// `<output>.jsonl` and `<output>_summary.csv`, spot-checks 5% of the
/// records by recomputation, and returns the records with their summary.
pub fn run_experiment(
    config: &ExperimentConfig,
) -> Result<(Vec<TrialRecord>, Summary), ExperimentError> {
    config.validate()?;
    let records: Vec<TrialRecord> = (0..config.trials)
        .into_par_iter()
        .map(|trial| run_trial(config, trial))
        .collect::<Result<_, _>>()?;

    // Every 20th record is recomputed single-threaded and compared.
    for record in records.iter().step_by(20) {
        let again = run_trial(config, record.trial)?;
        if again != *record {
            return Err(ExperimentError::SpotCheck {
                trial: record.trial,
            });
        }
    }

    let summary = summarize(config, &records);
    write_outputs(config, &records, &summary)?;
    Ok((records, summary))
}

fn run_trial(config: &ExperimentConfig, trial: u64) -> Result<TrialRecord, ExperimentError> {
    let trial_seed = split_seed(config.spec.seed, trial);
    let trial_spec = config.spec.with_seed(trial_seed);
    let (poset, graph, bipartite) = match config.spec.model {
        Model::Gnp => {
            let (poset, graph) = sample_gnp_order(&trial_spec)?;
            (poset, graph, None)
        }
        Model::Bipartite => {
            let (order, graph) = sample_bipartite_order(&trial_spec)?;
            (order.poset().clone(), graph, Some(order))
        }
    };

    let mut record = TrialRecord {
        trial,
        trial_seed,
        n: config.spec.n,
        c: config.spec.c,
        p: config.spec.p,
        incomparable_pair_count: None,
        max_updown_size: None,
        width: None,
        dimension: None,
        dimension_exceeded: None,
        isolated_edge_count: None,
        ds_component_classes: None,
        check_outcomes: BTreeMap::new(),
    };

    let checks: std::collections::BTreeSet<CheckKind> = config.checks.iter().copied().collect();
    for &check in &checks {
        let outcome = match check {
            CheckKind::Dim => match exact_dimension(&poset, config.k_max) {
                DimensionResult::Exact { dim, .. } => {
                    record.dimension = Some(dim);
                    CheckOutcome {
                        pass: true,
                        statistic: Some(dim as f64),
                    }
                }
                DimensionResult::Exceeded { k_max } => {
                    record.dimension_exceeded = Some(k_max);
                    CheckOutcome {
                        pass: false,
                        statistic: Some(k_max as f64),
                    }
                }
            },
            CheckKind::Width => {
                let w = poset.width();
                record.width = Some(w);
                CheckOutcome {
                    pass: true,
                    statistic: Some(w as f64),
                }
            }
            CheckKind::IncPairs => {
                // The pair list is ordered (both directions); record
                // unordered pairs.
                let count = incomparable_pairs(&poset).len() / 2;
                record.incomparable_pair_count = Some(count);
                CheckOutcome {
                    pass: true,
                    statistic: Some(count as f64),
                }
            }
            CheckKind::MaxUpdown => {
                let m = (1..=poset.n())
                    .map(|x| poset.updown_size(x))
                    .max()
                    .unwrap_or(0);
                record.max_updown_size = Some(m);
                CheckOutcome {
                    pass: true,
                    statistic: Some(m as f64),
                }
            }
            CheckKind::DsStructure => {
                let params = ThresholdParams::new(
                    config.threshold_k,
                    config.mean_degree(),
                    ThresholdMode::Gnp,
                )?;
                let (classes, cover_ok) = check_ds_structure(&poset, &graph, &params)?;
                let bad: usize = classes
                    .iter()
                    .filter(|(name, _)| *name != "tree" && *name != "unicyclic")
                    .map(|(_, count)| *count)
                    .sum();
                record.ds_component_classes = Some(classes);
                CheckOutcome {
                    pass: cover_ok,
                    statistic: Some(bad as f64),
                }
            }
            CheckKind::ComplementStats => {
                let order = bipartite.as_ref().expect("validated bipartite-only check");
                let stats = crate::random::bipartite_complement_stats(order, &graph);
                record.isolated_edge_count = Some(stats.isolated_edges);
                CheckOutcome {
                    pass: true,
                    statistic: Some(stats.isolated_edges as f64),
                }
            }
            CheckKind::ReversalCapacity => {
                let order = bipartite.as_ref().expect("validated bipartite-only check");
                let mut rng = rng_for(split_seed(trial_seed, 1));
                let report = check_reversal_capacity(
                    order,
                    config.mean_degree(),
                    config.extension_samples,
                    config.epsilon,
                    &mut rng,
                );
                CheckOutcome {
                    pass: report.exceed_fraction == 0.0,
                    statistic: Some(report.exceed_fraction),
                }
            }
            CheckKind::IncDensity => {
                let report = match &bipartite {
                    Some(order) => check_incomparable_density(DensityInput::Bipartite(order))?,
                    None => check_incomparable_density(DensityInput::Gnp {
                        poset: &poset,
                        xi: config.xi.expect("validated"),
                    })?,
                };
                CheckOutcome {
                    pass: true,
                    statistic: Some(report.ratio),
                }
            }
        };
        record
            .check_outcomes
            .insert(check.token().to_owned(), outcome);
    }
    Ok(record)
}

fn summarize(config: &ExperimentConfig, records: &[TrialRecord]) -> Summary {
    let mut stats = BTreeMap::new();
    let checks: std::collections::BTreeSet<CheckKind> = config.checks.iter().copied().collect();
    for &check in &checks {
        let token = check.token();
        let values: Vec<f64> = records
            .iter()
            .filter_map(|r| r.check_outcomes[token].statistic)
            .collect();
        let passes = records
            .iter()
            .filter(|r| r.check_outcomes[token].pass)
            .count();
        let mean = if values.is_empty() {
            f64::NAN
        } else {
            values.iter().sum::<f64>() / values.len() as f64
        };
        let se = if values.len() > 1 {
            let var =
                values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64;
            (var / values.len() as f64).sqrt()
        } else {
            0.0
        };
        stats.insert(
            token.to_owned(),
            StatLine {
                mean,
                se,
                pass_rate: passes as f64 / records.len() as f64,
            },
        );
    }
    let mut dimension_histogram = BTreeMap::new();
    let mut exceeded = 0u64;
    for r in records {
        if let Some(d) = r.dimension {
            *dimension_histogram.entry(d).or_insert(0u64) += 1;
        }
        if r.dimension_exceeded.is_some() {
            exceeded += 1;
        }
    }
    Summary {
        trials: records.len() as u64,
        stats,
        dimension_histogram,
        exceeded_count: exceeded,
    }
}

fn write_outputs(
    config: &ExperimentConfig,
    records: &[TrialRecord],
    summary: &Summary,
) -> Result<(), ExperimentError> {
    let stem = Path::new(&config.output);
    if let Some(parent) = stem.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut jsonl = String::new();
    for record in records {
        jsonl.push_str(&serde_json::to_string(record).expect("record serializes"));
        jsonl.push('\n');
    }
    fs::write(stem.with_extension("jsonl"), jsonl)?;
    fs::write(summary_path(&config.output), summary_csv(summary))?;
    Ok(())
}

pub fn summary_path(stem: &str) -> std::path::PathBuf {
    std::path::PathBuf::from(format!("{stem}_summary.csv"))
}

fn summary_csv(summary: &Summary) -> String {
    let mut out = String::from("key,mean,se,pass_rate,count\n");
    for (token, line) in &summary.stats {
        out.push_str(&format!(
            "{token},{:.12},{:.12},{:.6},{}\n",
            line.mean, line.se, line.pass_rate, summary.trials
        ));
    }
    for (dim, count) in &summary.dimension_histogram {
        out.push_str(&format!("dim={dim},,,,{count}\n"));
    }
    if summary.exceeded_count > 0 {
        out.push_str(&format!("dim=exceeded,,,,{}\n", summary.exceeded_count));
    }
    out
}

// ── individual checks ─────────────────────────────────────────────────────

/// Classifies the cover-graph components of P restricted to the closed
/// down-set of the high-connectivity element set S, and verifies that this
/// cover graph is a subgraph of the sampled graph (which must hold in every
/// trial, not just asymptotically).
pub fn check_ds_structure(
    poset: &Poset,
    graph: &Graph,
    params: &ThresholdParams,
) -> Result<(BTreeMap<String, usize>, bool), ExperimentError> {
    let s = gnp_threshold_set(poset, params)?;
    let ds = poset.down_set(&s, SetClosure::Closed)?;
    let mut classes = BTreeMap::new();
    if ds.is_empty() {
        return Ok((classes, true));
    }
    let (sub, map) = poset.induced(&ds)?;
    let cover = sub.cover_graph();
    for component in cover.components() {
        let class = cover
            .classify_component(&component)
            .expect("component of its own graph");
        *classes.entry(class.class.name().to_owned()).or_insert(0) += 1;
    }
    let mut cover_ok = true;
    for (u, v) in cover.edges() {
        if !graph.has_edge(map[u - 1], map[v - 1]) {
            cover_ok = false;
            break;
        }
    }
    Ok((classes, cover_ok))
}

/// Reversed-pair statistics of sampled linear extensions of a bipartite
/// order, compared against the capacity bound 2(1+ε)·α_c·n².
#[derive(Debug, Clone, PartialEq)]
pub struct ReversalReport {
    /// Extensions examined (the random ones plus one adversarial).
    pub extensions: usize,
    pub max_reversed: usize,
    pub mean_reversed: f64,
    /// 2(1+ε)·α_c·n².
    pub bound: f64,
    pub exceed_fraction: f64,
}

/// Samples `samples` random linear extensions plus one greedy adversarial
/// extension (always placing the available element that reverses the most
/// pending incomparable pairs), and counts reversed incomparable A×B pairs
/// per extension. A pair (a, b) is reversed when b precedes a.
pub fn check_reversal_capacity<R: Rng>(
    order: &BipartiteOrder,
    c: f64,
    samples: usize,
    epsilon: f64,
    rng: &mut R,
) -> ReversalReport {
    let poset = order.poset();
    let n = poset.n();
    let half = order.a().len();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for a in order.a() {
        for b in order.b() {
            if !poset.leq(a, b) {
                pairs.push((a, b));
            }
        }
    }
    let count_reversed = |ext: &TotalOrder| -> usize {
        let pos = ext.positions(n).expect("extension is a permutation");
        pairs
            .iter()
            .filter(|&&(a, b)| pos[b - 1] < pos[a - 1])
            .count()
    };
    let mut counts: Vec<usize> = (0..samples)
        .map(|_| count_reversed(&random_linear_extension(poset, rng)))
        .collect();
    counts.push(count_reversed(&greedy_reversal_extension(order)));
    let max_reversed = counts.iter().copied().max().unwrap_or(0);
    let mean_reversed = counts.iter().sum::<usize>() as f64 / counts.len() as f64;
    let bound =
        2.0 * (1.0 + epsilon) * solve_alpha(c.max(f64::MIN_POSITIVE)) * (half * half) as f64;
    let exceed = counts.iter().filter(|&&r| r as f64 > bound).count() as f64 / counts.len() as f64;
    ReversalReport {
        extensions: counts.len(),
        max_reversed,
        mean_reversed,
        bound,
        exceed_fraction: exceed,
    }
}

/// Linear extension chosen by repeatedly placing the available element that
/// reverses the most still-pending incomparable A×B pairs (ties to the
/// smallest label). Deterministic.
fn greedy_reversal_extension(order: &BipartiteOrder) -> TotalOrder {
    let poset = order.poset();
    let n = poset.n();
    let mut placed = vec![false; n];
    let mut remaining_preds: Vec<usize> = (1..=n)
        .map(|x| poset.down_set(&[x], SetClosure::Open).unwrap().len())
        .collect();
    let is_b: Vec<bool> = (1..=n)
        .map(|x| order.part(x) == crate::poset::Part::B)
        .collect();
    let mut seq = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best: Option<(usize, usize)> = None; // (gain, label)
        for x in 1..=n {
            if placed[x - 1] || remaining_preds[x - 1] > 0 {
                continue;
            }
            let gain = if is_b[x - 1] {
                order
                    .a()
                    .into_iter()
                    .filter(|&a| !placed[a - 1] && !poset.leq(a, x))
                    .count()
            } else {
                0
            };
            let better = match best {
                None => true,
                Some((g, label)) => gain > g || (gain == g && x < label),
            };
            if better {
                best = Some((gain, x));
            }
        }
        let (_, x) = best.expect("a finite order always has a minimal element");
        placed[x - 1] = true;
        seq.push(x);
        for y in poset.up_set(&[x], SetClosure::Open).unwrap() {
            remaining_preds[y - 1] -= 1;
        }
    }
    TotalOrder::new(seq)
}

/// Input selector for [`check_incomparable_density`].
pub enum DensityInput<'a> {
    Bipartite(&'a BipartiteOrder),
    /// General order with extreme blocks of ⌊ξn⌋ smallest/greatest labels.
    Gnp {
        poset: &'a Poset,
        xi: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityReport {
    pub incomparable: usize,
    pub denominator: usize,
    pub ratio: f64,
}

/// Counts incomparable pairs across the two parts (bipartite) or across the
/// extreme label blocks (general), as a fraction of all such pairs.
pub fn check_incomparable_density(input: DensityInput) -> Result<DensityReport, ExperimentError> {
    let (incomparable, denominator) = match input {
        DensityInput::Bipartite(order) => {
            let poset = order.poset();
            let b = order.b();
            let inc: usize = order
                .a()
                .into_iter()
                .map(|a| b.iter().filter(|&&y| !poset.leq(a, y)).count())
                .sum();
            (inc, order.a().len() * b.len())
        }
        DensityInput::Gnp { poset, xi } => {
            if !(xi > 0.0 && xi <= 0.5) {
                return Err(ExperimentError::Config(format!(
                    "xi = {xi} outside (0, 1/2]"
                )));
            }
            let n = poset.n();
            let k = (xi * n as f64).floor() as usize;
            if k == 0 {
                return Err(ExperimentError::Config(format!(
                    "extreme blocks are empty: ⌊{xi}·{n}⌋ = 0"
                )));
            }
            let low: Vec<usize> = (1..=k).collect();
            let high: Vec<usize> = (n - k + 1..=n).collect();
            let inc: usize = low
                .iter()
                .map(|&a| high.iter().filter(|&&b| !poset.leq(a, b)).count())
                .sum();
            (inc, k * k)
        }
    };
    Ok(DensityReport {
        incomparable,
        denominator,
        ratio: incomparable as f64 / denominator as f64,
    })
}

// ── distribution verification ─────────────────────────────────────────────

const EXHAUSTIVE_VERTEX_CAP: usize = 7;

/// Result of comparing the up-set size distribution against enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExhaustiveReport {
    pub relevant_pairs: usize,
    /// Exact per-size differences (enumerated − closed form), all zero.
    pub max_abs_error: f64,
    pub pass: bool,
}

/// Enumerates every graph on V∪U (V below U) over the pairs that can affect
/// the up-closure of V — the |V|·|U| cross pairs and the C(|U|,2) pairs
/// inside U — weights each by its probability, and compares the resulting
/// distribution of |U_P[V] ∩ U| with the closed form, in exact rational
/// arithmetic.
pub fn verify_pmf_exhaustive(
    size_v: usize,
    size_u: usize,
    q: &BigRational,
) -> Result<ExhaustiveReport, ExperimentError> {
    if size_v == 0 || size_u == 0 {
        return Err(ExperimentError::Config(
            "both part sizes must be at least 1".into(),
        ));
    }
    if size_v + size_u > EXHAUSTIVE_VERTEX_CAP {
        let pairs = size_v * size_u + size_u * (size_u - 1) / 2;
        return Err(ExperimentError::SizeTooLarge {
            pairs,
            max: EXHAUSTIVE_VERTEX_CAP,
        });
    }
    // Pair list: bit b of the mask is pair `pairs[b]`, (v_index, u_index)
    // cross pairs first, then (u_i, u_j) pairs with i < j.
    let mut cross = Vec::new();
    for u in 0..size_u {
        for v in 0..size_v {
            cross.push((u, v));
        }
    }
    let mut inner = Vec::new();
    for j in 1..size_u {
        for i in 0..j {
            inner.push((i, j));
        }
    }
    let m = cross.len() + inner.len();
    // counts[s][k]: graphs with up-closure size s and exactly k edges.
    let mut counts = vec![vec![0u64; m + 1]; size_u + 1];
    for mask in 0u64..(1u64 << m) {
        let mut joined = 0u32; // bitset over U indices
        for u in 0..size_u {
            let direct = (0..size_v).any(|v| mask & (1 << (u * size_v + v)) != 0);
            let via_u = inner.iter().enumerate().any(|(b, &(i, j))| {
                j == u && joined & (1 << i) != 0 && mask & (1 << (cross.len() + b)) != 0
            });
            if direct || via_u {
                joined |= 1 << u;
            }
        }
        counts[joined.count_ones() as usize][mask.count_ones() as usize] += 1;
    }
    let one = BigRational::one();
    let p_edge = &one - q;
    // Power tables for q^k and (1−q)^k.
    let mut q_pow = vec![one.clone()];
    let mut p_pow = vec![one.clone()];
    for k in 1..=m {
        q_pow.push(&q_pow[k - 1] * q);
        p_pow.push(&p_pow[k - 1] * &p_edge);
    }
    let mut max_err = BigRational::zero();
    for (s, row) in counts.iter().enumerate() {
        let mut enumerated = BigRational::zero();
        for (k, &count) in row.iter().enumerate() {
            if count > 0 {
                enumerated += BigRational::from_integer(count.into()) * &p_pow[k] * &q_pow[m - k];
            }
        }
        let formula = upset_pmf_exact(size_u, size_v, q, s)?;
        let err = (enumerated - formula).abs();
        if err > max_err {
            max_err = err;
        }
    }
    let max_abs_error = max_err.to_f64().unwrap_or(f64::NAN);
    Ok(ExhaustiveReport {
        relevant_pairs: m,
        max_abs_error,
        pass: max_err.is_zero(),
    })
}

/// Chi-square goodness-of-fit of sampled up-set sizes against the closed
/// form. Bins with expected count below 5 are pooled into their left
/// neighbour before the statistic is computed.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquareReport {
    pub trials: u64,
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
}

pub fn verify_pmf_monte_carlo(
    size_v: usize,
    size_u: usize,
    q: f64,
    trials: u64,
    seed: u64,
) -> Result<ChiSquareReport, ExperimentError> {
    if size_v == 0 || size_u == 0 {
        return Err(ExperimentError::Config(
            "both part sizes must be at least 1".into(),
        ));
    }
    if trials < 1 {
        return Err(ExperimentError::Config("trials must be at least 1".into()));
    }
    let mut observed = vec![0u64; size_u + 1];
    let mut rng = rng_for(seed);
    let p = 1.0 - q;
    for _ in 0..trials {
        // Sample only the relevant pairs, in a fixed scan order.
        let mut joined = vec![false; size_u];
        let mut cross = vec![false; size_u];
        for item in cross.iter_mut() {
            let mut hit = false;
            for _ in 0..size_v {
                if rng.gen_bool(p) {
                    hit = true;
                }
            }
            *item = hit;
        }
        for u in 0..size_u {
            // Each inner pair (i, u) is examined at most once, so lazy
            // short-circuit sampling keeps the pairs independent Bernoullis.
            let via = (0..u).any(|i| joined[i] && rng.gen_bool(p));
            joined[u] = cross[u] || via;
        }
        observed[joined.iter().filter(|&&j| j).count()] += 1;
    }
    let expected: Vec<f64> = (0..=size_u)
        .map(|s| upset_pmf(size_u, size_v, q, s).map(|v| v * trials as f64))
        .collect::<Result<_, _>>()?;
    // Pool low-expectation bins (right to left) so every bin has E ≥ 5.
    let mut pooled: Vec<(f64, f64)> = Vec::new(); // (observed, expected)
    for (s, &e) in expected.iter().enumerate() {
        pooled.push((observed[s] as f64, e));
        // merge backwards while the last bin is under-filled
        while pooled.len() > 1 && pooled.last().unwrap().1 < 5.0 {
            let (o, e) = pooled.pop().unwrap();
            let last = pooled.last_mut().unwrap();
            last.0 += o;
            last.1 += e;
        }
    }
    while pooled.len() > 1 && pooled.last().unwrap().1 < 5.0 {
        let (o, e) = pooled.pop().unwrap();
        let last = pooled.last_mut().unwrap();
        last.0 += o;
        last.1 += e;
    }
    if pooled.len() < 2 {
        return Err(ExperimentError::Config(
            "too few populated bins for a chi-square test; increase trials".into(),
        ));
    }
    let statistic: f64 = pooled.iter().map(|&(o, e)| (o - e).powi(2) / e).sum();
    let dof = pooled.len() - 1;
    let dist = ChiSquared::new(dof as f64).expect("dof ≥ 1");
    let p_value = 1.0 - dist.cdf(statistic);
    Ok(ChiSquareReport {
        trials,
        statistic,
        degrees_of_freedom: dof,
        p_value,
    })
}

// ── plot data ─────────────────────────────────────────────────────────────

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// Curve c ↦ 1/(2·α_c).
    BipartiteLower,
    /// Curve c ↦ ξ/(2β) under a ξ rule, with γ(c) alongside.
    GnpLower,
    /// Monte Carlo mean dimension of sampled general orders per c.
    DimVsC,
    /// The up-set size distribution for fixed part sizes.
    Pmf,
}

/// Knobs for [`emit_plot_data`]; unused fields are ignored per kind.
#[derive(Debug, Clone)]
pub struct PlotParams {
    pub c_from: f64,
    pub c_to: f64,
    pub c_step: f64,
    pub xi_rule: XiRule,
    pub size_u: usize,
    pub size_v: usize,
    pub q: f64,
    pub n: usize,
    pub trials: u64,
    pub k_max: usize,
    pub seed: u64,
}

impl Default for PlotParams {
    fn default() -> PlotParams {
        PlotParams {
            c_from: 2.0,
            c_to: 30.0,
            c_step: 0.1,
            xi_rule: XiRule::Inv15Log,
            size_u: 4,
            size_v: 2,
            q: 0.5,
            n: 20,
            trials: 50,
            k_max: DEFAULT_K_MAX,
            seed: 1,
        }
    }
}

/// Renders one plot kind to CSV.
pub fn plot_csv(kind: PlotKind, params: &PlotParams) -> Result<String, ExperimentError> {
    let grid = |from: f64, to: f64, step: f64| -> Result<Vec<f64>, ExperimentError> {
        if !step.is_finite() || step <= 0.0 || !from.is_finite() || !to.is_finite() || to < from {
            return Err(ExperimentError::Config(format!(
                "bad c range {from}:{to}:{step}"
            )));
        }
        let mut cs = Vec::new();
        let mut i = 0usize;
        loop {
            let c = from + i as f64 * step;
            if c > to + 1e-9 {
                break;
            }
            cs.push(c);
            i += 1;
        }
        Ok(cs)
    };
    match kind {
        PlotKind::BipartiteLower => {
            if params.c_from < 2.0 {
                return Err(ExperimentError::Config(format!(
                    "the bipartite curve is defined for c >= 2, range starts at {}",
                    params.c_from
                )));
            }
            let mut out = String::from("c,bound\n");
            for c in grid(params.c_from, params.c_to, params.c_step)? {
                out.push_str(&format!("{c:.6},{:.12}\n", bipartite_lower_curve(c)));
            }
            Ok(out)
        }
        PlotKind::GnpLower => {
            let mut out = String::from("c,bound,gamma\n");
            for c in grid(params.c_from, params.c_to, params.c_step)? {
                let (bound, gamma) = gnp_lower_curve(c, params.xi_rule)?;
                out.push_str(&format!("{c:.6},{bound:.12e},{gamma:.12}\n"));
            }
            Ok(out)
        }
        PlotKind::DimVsC => {
            let mut out = String::from("c,mean_dim,se,exceeded_fraction\n");
            let cs = grid(params.c_from, params.c_to, params.c_step)?;
            for (ci, &c) in cs.iter().enumerate() {
                let mut dims = Vec::new();
                let mut exceeded = 0u64;
                for t in 0..params.trials {
                    let seed = split_seed(params.seed, (ci as u64) * params.trials + t);
                    let spec = ModelSpec::gnp_c(params.n, c, seed);
                    let (poset, _) = sample_gnp_order(&spec)?;
                    match exact_dimension(&poset, params.k_max) {
                        DimensionResult::Exact { dim, .. } => dims.push(dim as f64),
                        DimensionResult::Exceeded { .. } => exceeded += 1,
                    }
                }
                let mean = dims.iter().sum::<f64>() / dims.len().max(1) as f64;
                let se = if dims.len() > 1 {
                    let var = dims.iter().map(|d| (d - mean).powi(2)).sum::<f64>()
                        / (dims.len() - 1) as f64;
                    (var / dims.len() as f64).sqrt()
                } else {
                    0.0
                };
                out.push_str(&format!(
                    "{c:.6},{mean:.6},{se:.6},{:.6}\n",
                    exceeded as f64 / params.trials as f64
                ));
            }
            Ok(out)
        }
        PlotKind::Pmf => {
            let mut out = String::from("s,probability\n");
            for s in 0..=params.size_u {
                out.push_str(&format!(
                    "{s},{:.15e}\n",
                    upset_pmf(params.size_u, params.size_v, params.q, s)?
                ));
            }
            Ok(out)
        }
    }
}

/// Writes [`plot_csv`] output to `path`.
pub fn emit_plot_data(
    kind: PlotKind,
    params: &PlotParams,
    path: &Path,
) -> Result<(), ExperimentError> {
    let csv = plot_csv(kind, params)?;
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(path, csv)?;
    Ok(())
}
