//! Experiment grids over item counts, subset fractions, flip probabilities,
//! variants and cautiousness values.
//!
//! Each grid cell runs `trials` independent trials; trial `t` of every cell
//! uses seed `seed + t`, so cells share their truths, pools and starting
//! points. Each cell produces one [`ResultTable`] with per-trial rows and
//! median/quartile aggregates.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::baseline::{rank_centrality, WinRecord, DEFAULT_REGULARIZATION, DEFAULT_TOLERANCE};
use crate::error::{invalid, Error, Result};
use crate::exec::Execution;
use crate::harness::table::{ResultTable, Row, TrialTag};
use crate::metrics::{normalize, Metric};
use crate::sampling::{check_flip_probability, check_fraction, SamplerMode, SamplerSpec};
use crate::solver::{Alpha, HitCriterion, InitialIterate, SolverConfig, StopRule, Variant};
use crate::stats::Quartiles;
use crate::system::{check_epsilon, Ranking, DEFAULT_EPSILON};
use crate::trial::{TrialOutcome, TrialPlan};

pub const BASELINE_VARIANT: &str = "rank-centrality";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    /// Distance curves over iterations.
    Trace,
    /// Final distances versus subset fraction.
    PartialSweep,
    /// Hitting time versus item count.
    Scaling,
    /// Final distances versus cautiousness.
    AlphaSweep,
    /// Final distances versus flip probability.
    NoiseSweep,
    /// Final distances versus subset fraction under flip noise.
    PartialNoisySweep,
    /// Solver against Rank Centrality on the same draws.
    BaselineCompare,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::Trace,
        ExperimentKind::PartialSweep,
        ExperimentKind::Scaling,
        ExperimentKind::AlphaSweep,
        ExperimentKind::NoiseSweep,
        ExperimentKind::PartialNoisySweep,
        ExperimentKind::BaselineCompare,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::Trace => "trace",
            ExperimentKind::PartialSweep => "partial-sweep",
            ExperimentKind::Scaling => "scaling",
            ExperimentKind::AlphaSweep => "alpha-sweep",
            ExperimentKind::NoiseSweep => "noise-sweep",
            ExperimentKind::PartialNoisySweep => "partial-noisy-sweep",
            ExperimentKind::BaselineCompare => "baseline-compare",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| invalid(format!("unknown experiment kind `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub n: Vec<usize>,
    pub trials: usize,
    pub max_iterations: u64,
    pub epsilon: f64,
    pub k_list: Vec<usize>,
    pub variants: Vec<Variant>,
    pub alphas: Vec<Alpha>,
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    pub seed: u64,
    pub mode: SamplerMode,
    pub omega: f64,
    pub record_every: u64,
    pub init: InitialIterate,
    pub regularization: f64,
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let steps = ((hi - lo) / step).round() as usize;
    (0..=steps).map(|i| ((lo + i as f64 * step) * 1e6).round() / 1e6).collect()
}

impl ExperimentSpec {
    /// Desk-scale versions of the standard designs for each kind. Runs start
    /// from uniform random scores; from the all-zero start the iterate creeps
    /// along the tight chain of adjacent constraints and hits far later.
    pub fn defaults(kind: ExperimentKind) -> Self {
        let base = Self {
            kind,
            n: vec![50],
            trials: 20,
            max_iterations: 10_000,
            epsilon: DEFAULT_EPSILON,
            k_list: vec![1, 5, 10],
            variants: vec![Variant::Kacz],
            alphas: vec![Alpha::Unlimited],
            q: vec![1.0],
            p: vec![0.0],
            seed: 0,
            mode: SamplerMode::WithReplacement,
            omega: 1.0,
            record_every: 10,
            init: InitialIterate::Random,
            regularization: DEFAULT_REGULARIZATION,
        };
        let mut q_grid = vec![0.05];
        q_grid.extend(grid(0.1, 1.0, 0.1));
        match kind {
            ExperimentKind::Trace => base,
            ExperimentKind::PartialSweep => Self { q: q_grid, ..base },
            ExperimentKind::Scaling => Self {
                n: vec![5, 10, 20, 50, 100],
                trials: 50,
                max_iterations: 50_000_000,
                ..base
            },
            ExperimentKind::AlphaSweep => Self {
                n: vec![20],
                trials: 25,
                variants: vec![Variant::Cautious],
                alphas: [1, 2, 3, 4, 6, 8, 12, 16, 20].map(Alpha::Finite).into_iter().chain([Alpha::Unlimited]).collect(),
                p: vec![0.05, 0.1, 0.2],
                ..base
            },
            ExperimentKind::NoiseSweep => Self {
                n: vec![20],
                variants: vec![Variant::Kacz, Variant::Cautious],
                alphas: vec![Alpha::Finite(4)],
                p: grid(0.0, 0.3, 0.05),
                ..base
            },
            ExperimentKind::PartialNoisySweep => Self {
                n: vec![20],
                variants: vec![Variant::Cautious],
                alphas: vec![Alpha::Finite(4)],
                q: q_grid,
                p: vec![0.05, 0.1],
                ..base
            },
            ExperimentKind::BaselineCompare => Self { n: vec![10, 20, 50], ..base },
        }
    }

    /// Parses `key=value` lines (flag names without dashes); `#` starts a
    /// comment. `kind` selects the defaults the other keys override.
    pub fn from_kv_text(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse { line: idx + 1, message: format!("expected `key=value`, got `{line}`") })?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        Self::from_pairs(&pairs)
    }

    pub fn from_pairs(pairs: &[(String, String)]) -> Result<Self> {
        let kind = pairs
            .iter()
            .find(|(k, _)| k == "kind")
            .ok_or_else(|| invalid("spec is missing `kind`"))?
            .1
            .parse()?;
        let mut spec = Self::defaults(kind);
        for (k, v) in pairs.iter().filter(|(k, _)| k != "kind") {
            spec.set(k, v)?;
        }
        spec.validate()?;
        Ok(spec)
    }

    /// Rebuilds the spec embedded in a result table's metadata.
    pub fn from_table(table: &ResultTable) -> Result<Self> {
        let pairs: Vec<(String, String)> = table
            .meta
            .iter()
            .filter_map(|(k, v)| k.strip_prefix("spec.").map(|k| (k.to_string(), v.clone())))
            .collect();
        Self::from_pairs(&pairs)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
            value
                .split(',')
                .map(|s| s.trim().parse::<T>().map_err(|_| invalid(format!("invalid value `{s}` for `{key}`"))))
                .collect()
        }
        fn one<T: FromStr>(key: &str, value: &str) -> Result<T> {
            value.trim().parse::<T>().map_err(|_| invalid(format!("invalid value `{value}` for `{key}`")))
        }
        match key {
            "kind" => self.kind = value.parse()?,
            "n" => self.n = list(key, value)?,
            "trials" => self.trials = one(key, value)?,
            "iters" => self.max_iterations = one(key, value)?,
            "epsilon" => self.epsilon = one(key, value)?,
            "k-list" => self.k_list = list(key, value)?,
            "variant" => self.variants = value.split(',').map(|s| s.trim().parse()).collect::<Result<_>>()?,
            "alpha" => self.alphas = value.split(',').map(|s| s.trim().parse()).collect::<Result<_>>()?,
            "q" => self.q = list(key, value)?,
            "p" => self.p = list(key, value)?,
            "seed" => self.seed = one(key, value)?,
            "mode" => self.mode = value.parse()?,
            "omega" => self.omega = one(key, value)?,
            "record-every" => self.record_every = one(key, value)?,
            "init" => self.init = value.parse()?,
            "regularization" => self.regularization = one(key, value)?,
            other => return Err(invalid(format!("unknown spec key `{other}`"))),
        }
        Ok(())
    }

    pub fn to_pairs(&self) -> Vec<(String, String)> {
        fn join<T: ToString>(v: &[T]) -> String {
            v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
        }
        [
            ("kind", self.kind.to_string()),
            ("n", join(&self.n)),
            ("trials", self.trials.to_string()),
            ("iters", self.max_iterations.to_string()),
            ("epsilon", self.epsilon.to_string()),
            ("k-list", join(&self.k_list)),
            ("variant", join(&self.variants)),
            ("alpha", join(&self.alphas)),
            ("q", join(&self.q)),
            ("p", join(&self.p)),
            ("seed", self.seed.to_string()),
            ("mode", self.mode.to_string()),
            ("omega", self.omega.to_string()),
            ("record-every", self.record_every.to_string()),
            ("init", self.init.to_string()),
            ("regularization", self.regularization.to_string()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }

    pub fn to_kv_text(&self) -> String {
        self.to_pairs().into_iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let nonempty = |empty: bool, what: &str| if empty { Err(invalid(format!("`{what}` grid is empty"))) } else { Ok(()) };
        nonempty(self.n.is_empty(), "n")?;
        nonempty(self.variants.is_empty(), "variant")?;
        nonempty(self.alphas.is_empty(), "alpha")?;
        nonempty(self.q.is_empty(), "q")?;
        nonempty(self.p.is_empty(), "p")?;
        if self.trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        if let Some(n) = self.n.iter().find(|&&n| n < 2) {
            return Err(invalid(format!("item counts must be at least 2, got {n}")));
        }
        self.q.iter().try_for_each(|&q| check_fraction(q))?;
        self.p.iter().try_for_each(|&p| check_flip_probability(p))?;
        check_epsilon(self.epsilon)?;
        if self.regularization.is_nan() || self.regularization < 0.0 {
            return Err(invalid("regularization must be non-negative"));
        }
        if self.mode.is_ordered() && self.q.iter().any(|&q| q < 1.0) {
            return Err(invalid(format!("`{}` mode requires q = 1", self.mode)));
        }
        self.solver_config(Variant::Kacz, Alpha::Unlimited).validate()
    }

    fn solver_config(&self, variant: Variant, alpha: Alpha) -> SolverConfig {
        SolverConfig {
            epsilon: self.epsilon,
            max_iterations: self.max_iterations,
            variant,
            alpha,
            omega: self.omega,
            record_every: self.record_every,
            k_list: self.k_list.clone(),
            stop: if self.kind == ExperimentKind::Scaling { StopRule::RankingHit } else { StopRule::Never },
            feasible_distance_tol: None,
        }
    }

    /// Grid cells in a fixed order. KaczRank ignores `alpha`, so it gets a
    /// single cell per (n, q, p).
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        for &n in &self.n {
            for &q in &self.q {
                for &p in &self.p {
                    for &variant in &self.variants {
                        match variant {
                            Variant::Kacz => cells.push(Cell { n, q, p, variant, alpha: None }),
                            Variant::Cautious => {
                                cells.extend(self.alphas.iter().map(|&a| Cell { n, q, p, variant, alpha: Some(a) }))
                            }
                        }
                    }
                }
            }
        }
        cells
    }

    /// Metric names every table of this spec may contain.
    pub fn metric_names(&self) -> Vec<String> {
        let mut names = Vec::new();
        for m in self.distance_metrics() {
            names.push(m.to_string());
            names.push(format!("{m}_norm"));
        }
        names.push("hit_iteration".into());
        names.push("censored".into());
        names
    }

    fn distance_metrics(&self) -> Vec<Metric> {
        let mut m = vec![Metric::Hamming];
        m.extend(self.k_list.iter().map(|&k| Metric::KDistance(k)));
        m.push(Metric::KendallTau);
        m.push(Metric::Cayley);
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub n: usize,
    pub q: f64,
    pub p: f64,
    pub variant: Variant,
    pub alpha: Option<Alpha>,
}

impl Cell {
    pub fn alpha_label(&self) -> String {
        self.alpha.map_or_else(|| "-".to_string(), |a| a.to_string())
    }

    pub fn label(&self) -> String {
        let mut s = format!("n{}_q{}_p{}_{}", self.n, self.q, self.p, self.variant);
        if let Some(a) = self.alpha {
            s.push_str(&format!("_a{a}"));
        }
        s
    }
}

struct TrialResult {
    outcome: TrialOutcome,
    baseline: Option<Ranking>,
}

/// Runs every cell of `spec`; one table per cell, in [`ExperimentSpec::cells`] order.
pub fn run_experiment(spec: &ExperimentSpec, exec: Execution) -> Result<Vec<ResultTable>> {
    spec.validate()?;
    spec.cells()
        .into_iter()
        .map(|cell| run_cell(spec, &cell, exec).map_err(|e| Error::Cell { cell: cell.label(), source: Box::new(e) }))
        .collect()
}

fn run_cell(spec: &ExperimentSpec, cell: &Cell, exec: Execution) -> Result<ResultTable> {
    let plan = TrialPlan {
        n: cell.n,
        sampler: SamplerSpec::new(spec.mode, cell.q, cell.p)?,
        init: spec.init,
        config: spec.solver_config(cell.variant, cell.alpha.unwrap_or(Alpha::Unlimited)),
    };
    let with_baseline = spec.kind == ExperimentKind::BaselineCompare;
    let results = exec.try_map(spec.trials, |t| -> Result<TrialResult> {
        let seed = spec.seed.wrapping_add(t as u64);
        if with_baseline {
            let mut wins = WinRecord::new(cell.n);
            let outcome = plan.run_observed(seed, |ev| {
                wins.record(ev.comparison).expect("pool indices were validated");
            })?;
            let (_, ranking) = rank_centrality(&wins, spec.regularization, DEFAULT_TOLERANCE)?;
            Ok(TrialResult { outcome, baseline: Some(ranking) })
        } else {
            Ok(TrialResult { outcome: plan.run(seed)?, baseline: None })
        }
    })?;

    let mut meta = vec![
        ("version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ("cell".to_string(), cell.label()),
    ];
    meta.extend(spec.to_pairs().into_iter().map(|(k, v)| (format!("spec.{k}"), v)));
    let mut table = ResultTable { meta, metrics: spec.metric_names(), rows: Vec::new() };
    let metrics = spec.distance_metrics();
    let variant = cell.variant.to_string();
    let row = |variant: &str, alpha: &str, iteration: u64, trial: TrialTag, metric: String, value: f64| Row {
        variant: variant.to_string(),
        alpha: alpha.to_string(),
        n: cell.n,
        q: cell.q,
        p: cell.p,
        iteration,
        trial,
        metric,
        value,
    };
    let alpha = cell.alpha_label();

    for (t, result) in results.iter().enumerate() {
        let out = &result.outcome;
        let tag = TrialTag::Trial(t);
        if spec.kind == ExperimentKind::Trace {
            for s in &out.trace.samples {
                let mut values = vec![(Metric::Hamming, s.hamming)];
                values.extend(out.trace.k_list.iter().zip(&s.k_distances).map(|(&k, &d)| (Metric::KDistance(k), d)));
                values.push((Metric::KendallTau, s.kendall));
                values.push((Metric::Cayley, s.cayley));
                for (m, d) in values {
                    table.rows.push(row(&variant, &alpha, s.iteration, tag, m.to_string(), d as f64));
                    table.rows.push(row(&variant, &alpha, s.iteration, tag, format!("{m}_norm"), normalize(d, m, cell.n)));
                }
            }
        } else {
            push_final(&mut table.rows, &metrics, &out.state.ranking(), &out.truth, |m, v| {
                row(&variant, &alpha, out.state.iteration, tag, m, v)
            })?;
            if let Some(b) = &result.baseline {
                push_final(&mut table.rows, &metrics, b, &out.truth, |m, v| {
                    row(BASELINE_VARIANT, "-", out.state.iteration, tag, m, v)
                })?;
            }
        }
        let hit = HitCriterion::Ranking.outcome(&out.state);
        table.rows.push(row(&variant, &alpha, out.state.iteration, tag, "hit_iteration".into(), hit.value() as f64));
        table.rows.push(row(&variant, &alpha, out.state.iteration, tag, "censored".into(), f64::from(u8::from(hit.is_censored()))));
    }

    let aggregates = aggregate_rows(&table.rows, spec.trials, spec.kind == ExperimentKind::Trace, spec.max_iterations);
    table.rows.extend(aggregates);
    Ok(table)
}

fn push_final<F>(rows: &mut Vec<Row>, metrics: &[Metric], estimate: &Ranking, truth: &Ranking, make: F) -> Result<()>
where
    F: Fn(String, f64) -> Row,
{
    let n = truth.len();
    for &m in metrics {
        let d = m.distance(estimate, truth)?;
        rows.push(make(m.to_string(), d as f64));
        rows.push(make(format!("{m}_norm"), normalize(d, m, n)));
    }
    Ok(())
}

/// Median and quartile rows per (variant, metric) and, for traces, per
/// iteration. Trace groups missing any trial are skipped.
pub fn aggregate_rows(rows: &[Row], trials: usize, by_iteration: bool, final_iteration: u64) -> Vec<Row> {
    type Key = (String, String, String, u64);
    let mut groups: BTreeMap<Key, (Row, Vec<f64>)> = BTreeMap::new();
    for r in rows.iter().filter(|r| !r.trial.is_aggregate()) {
        let per_iteration = by_iteration && r.metric != "hit_iteration" && r.metric != "censored";
        let iteration = if per_iteration { r.iteration } else { final_iteration };
        let key = (r.variant.clone(), r.alpha.clone(), r.metric.clone(), iteration);
        groups.entry(key).or_insert_with(|| (Row { iteration, ..r.clone() }, Vec::new())).1.push(r.value);
    }
    let mut out = Vec::new();
    for (template, values) in groups.into_values() {
        if values.len() != trials {
            continue;
        }
        let q = Quartiles::of(&values);
        for (tag, value) in [(TrialTag::Median, q.median), (TrialTag::Q25, q.q25), (TrialTag::Q75, q.q75)] {
            out.push(Row { trial: tag, value, ..template.clone() });
        }
    }
    out
}

pub fn table_file_name(kind: ExperimentKind, table: &ResultTable) -> String {
    format!("{}_{}.csv", kind, table.meta("cell").unwrap_or("cell"))
}

/// Writes each table into `dir`, creating it if needed.
pub fn write_tables(kind: ExperimentKind, tables: &[ResultTable], dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    tables
        .iter()
        .map(|t| {
            let path = dir.join(table_file_name(kind, t));
            t.write_to(&path)?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(kind: ExperimentKind) -> ExperimentSpec {
        ExperimentSpec {
            n: vec![6],
            trials: 4,
            max_iterations: 300,
            record_every: 50,
            k_list: vec![1, 2],
            ..ExperimentSpec::defaults(kind)
        }
    }

    #[test]
    fn kv_round_trip() {
        for kind in ExperimentKind::ALL {
            let spec = ExperimentSpec::defaults(kind);
            assert_eq!(ExperimentSpec::from_kv_text(&spec.to_kv_text()).unwrap(), spec);
        }
    }

    #[test]
    fn kv_overrides_and_errors() {
        let spec = ExperimentSpec::from_kv_text("# sweep\nkind=noise-sweep\nn=12\np=0,0.1\nalpha=2,inf\n").unwrap();
        assert_eq!(spec.n, vec![12]);
        assert_eq!(spec.p, vec![0.0, 0.1]);
        assert_eq!(spec.alphas, vec![Alpha::Finite(2), Alpha::Unlimited]);
        assert!(ExperimentSpec::from_kv_text("n=12\n").is_err());
        assert!(ExperimentSpec::from_kv_text("kind=trace\nbogus=1\n").is_err());
        assert!(ExperimentSpec::from_kv_text("kind=trace\nq=\n").is_err());
        assert!(ExperimentSpec::from_kv_text("kind=trace\ntrials=0\n").is_err());
        assert!(ExperimentSpec::from_kv_text("kind=trace\np=0.5\n").is_err());
        assert!(ExperimentSpec::from_kv_text("kind=trace\nmode=friendly\nq=0.5\n").is_err());
    }

    #[test]
    fn cells_collapse_alpha_for_kacz() {
        let spec = ExperimentSpec {
            variants: vec![Variant::Kacz, Variant::Cautious],
            alphas: vec![Alpha::Finite(2), Alpha::Finite(4)],
            p: vec![0.0, 0.1],
            ..small(ExperimentKind::NoiseSweep)
        };
        let cells = spec.cells();
        assert_eq!(cells.len(), 2 * 3);
        assert_eq!(cells[0].label(), "n6_q1_p0_kacz");
        assert_eq!(cells[1].label(), "n6_q1_p0_cautious_a2");
    }

    #[test]
    fn aggregates_match_per_trial_rows() {
        for kind in [ExperimentKind::Trace, ExperimentKind::NoiseSweep, ExperimentKind::BaselineCompare] {
            let spec = small(kind);
            for table in run_experiment(&spec, Execution::Parallel).unwrap() {
                let trial_rows: Vec<Row> = table.trial_rows().cloned().collect();
                let expected = aggregate_rows(&trial_rows, spec.trials, kind == ExperimentKind::Trace, spec.max_iterations);
                let got: Vec<Row> = table.rows.iter().filter(|r| r.trial.is_aggregate()).cloned().collect();
                assert_eq!(got, expected);
                assert!(!got.is_empty());
            }
        }
    }

    #[test]
    fn rerun_from_embedded_spec_is_identical() {
        let spec = ExperimentSpec { q: vec![0.4, 1.0], ..small(ExperimentKind::PartialSweep) };
        let tables = run_experiment(&spec, Execution::Parallel).unwrap();
        let again = run_experiment(&ExperimentSpec::from_table(&tables[0]).unwrap(), Execution::Sequential).unwrap();
        assert_eq!(tables.len(), again.len());
        for (a, b) in tables.iter().zip(&again) {
            assert_eq!(a.to_csv_string().unwrap(), b.to_csv_string().unwrap());
        }
    }

    #[test]
    fn baseline_rows_are_present() {
        let tables = run_experiment(&small(ExperimentKind::BaselineCompare), Execution::Sequential).unwrap();
        let t = &tables[0];
        assert_eq!(t.rows_for(BASELINE_VARIANT, "hamming").filter(|r| !r.trial.is_aggregate()).count(), 4);
        assert!(t.aggregate(BASELINE_VARIANT, "kendall", TrialTag::Median).is_some());
    }

    #[test]
    fn scaling_stops_at_the_hit() {
        let spec = ExperimentSpec { n: vec![4, 8], trials: 5, ..ExperimentSpec::defaults(ExperimentKind::Scaling) };
        for t in run_experiment(&spec, Execution::Parallel).unwrap() {
            for r in t.trial_rows().filter(|r| r.metric == "hit_iteration") {
                assert_eq!(r.value, r.iteration as f64);
            }
            assert!(t.trial_rows().filter(|r| r.metric == "hamming").all(|r| r.value == 0.0));
        }
    }

    #[test]
    fn failing_cell_is_named() {
        // q * N rounds to zero comparisons for three items
        let spec = ExperimentSpec { n: vec![3], q: vec![0.1], ..small(ExperimentKind::PartialSweep) };
        match run_experiment(&spec, Execution::Sequential) {
            Err(Error::Cell { cell, .. }) => assert_eq!(cell, "n3_q0.1_p0_kacz"),
            other => panic!("{other:?}"),
        }
    }
}
