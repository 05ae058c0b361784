//! Projection solvers for comparison systems.
//!
//! [`kacz_step`] projects the iterate onto one violated halfspace
//! `x[low] - x[high] <= -epsilon`, optionally relaxed by `omega`.
//! [`cautious_step`] performs the same projection only when it disturbs the
//! induced ranking in fewer than `alpha` slots. [`run`] drives either step
//! over a [`Sampler`] and records a [`Trace`] against a known truth.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::exec::Execution;
use crate::metrics::{cayley, distance_to_feasible, hamming, k_distance, kendall_tau};
use crate::sampling::{full_comparison_set, RandomStream, Sampler};
use crate::stats::{mean, Quartiles};
use crate::system::{
    check_epsilon, ranking_from_scores, ranking_into, Comparison, ComparisonSystem, Ranking, ScoreVector,
    DEFAULT_EPSILON, ROW_NORM_SQUARED,
};

/// Cap on the ranking change a cautious projection may cause.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Alpha {
    Finite(usize),
    #[default]
    Unlimited,
}

impl Alpha {
    fn admits(&self, change: usize) -> bool {
        match *self {
            Alpha::Finite(a) => change < a,
            Alpha::Unlimited => true,
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Finite(a) => write!(f, "{a}"),
            Alpha::Unlimited => f.write_str("inf"),
        }
    }
}

impl FromStr for Alpha {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" | "unlimited" => Ok(Alpha::Unlimited),
            _ => match s.parse::<usize>() {
                Ok(a) if a >= 1 => Ok(Alpha::Finite(a)),
                _ => Err(invalid(format!("alpha must be a positive integer or `inf`, got `{s}`"))),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Variant {
    #[default]
    Kacz,
    Cautious,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Kacz => "kacz",
            Variant::Cautious => "cautious",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kacz" => Ok(Variant::Kacz),
            "cautious" => Ok(Variant::Cautious),
            other => Err(invalid(format!("unknown variant `{other}`"))),
        }
    }
}

/// Starting point of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialIterate {
    #[default]
    Zero,
    /// Independent uniform entries in `[0, 1)`.
    Random,
}

impl InitialIterate {
    pub fn build(&self, n: usize, stream: &mut RandomStream) -> ScoreVector {
        match self {
            InitialIterate::Zero => ScoreVector::zeros(n),
            InitialIterate::Random => {
                ScoreVector::new((0..n).map(|_| stream.unit()).collect()).expect("unit draws are finite")
            }
        }
    }
}

impl fmt::Display for InitialIterate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InitialIterate::Zero => "zero",
            InitialIterate::Random => "random",
        })
    }
}

impl FromStr for InitialIterate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(InitialIterate::Zero),
            "random" => Ok(InitialIterate::Random),
            other => Err(invalid(format!("unknown initial iterate `{other}`"))),
        }
    }
}

/// When a run with known truth may end before `max_iterations`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StopRule {
    #[default]
    Never,
    /// First iteration whose ranking equals the truth.
    RankingHit,
    /// First iteration inside the feasible region of the full true system.
    Feasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub epsilon: f64,
    pub max_iterations: u64,
    pub variant: Variant,
    pub alpha: Alpha,
    /// Relaxation in `(0, 2)`; `1` lands exactly on the violated constraint.
    pub omega: f64,
    pub record_every: u64,
    pub k_list: Vec<usize>,
    pub stop: StopRule,
    /// Record the distance to the feasible region at this accuracy.
    pub feasible_distance_tol: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
            max_iterations: 10_000,
            variant: Variant::Kacz,
            alpha: Alpha::Unlimited,
            omega: 1.0,
            record_every: 10,
            k_list: vec![1, 5, 10],
            stop: StopRule::Never,
            feasible_distance_tol: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        check_epsilon(self.epsilon)?;
        check_omega(self.omega)?;
        if self.max_iterations == 0 {
            return Err(invalid("max_iterations must be positive"));
        }
        if self.record_every == 0 {
            return Err(invalid("record_every must be positive"));
        }
        if self.k_list.contains(&0) {
            return Err(invalid("k values must be at least 1"));
        }
        if let Alpha::Finite(0) = self.alpha {
            return Err(invalid("alpha must be at least 1"));
        }
        Ok(())
    }
}

fn check_omega(omega: f64) -> Result<()> {
    if omega > 0.0 && omega < 2.0 {
        Ok(())
    } else {
        Err(invalid(format!("omega must lie in (0, 2), got {omega}")))
    }
}

/// Projects `x` in place when `c` is violated. Touches only `c.low()` and
/// `c.high()`. Returns whether the iterate moved.
#[inline]
pub(crate) fn project_in_place(x: &mut [f64], c: Comparison, epsilon: f64, omega: f64) -> bool {
    let r = c.residual_unchecked(x, epsilon);
    if r <= 0.0 {
        return false;
    }
    let shift = omega * r / ROW_NORM_SQUARED;
    x[c.low()] -= shift;
    x[c.high()] += shift;
    if omega >= 1.0 && c.residual_unchecked(x, epsilon) > 0.0 {
        // rounding left the pair a few ulps short, which no later step is
        // large enough to fix; push it strictly inside
        while c.residual_unchecked(x, epsilon) >= 0.0 {
            x[c.low()] = x[c.low()].next_down();
            if c.residual_unchecked(x, epsilon) >= 0.0 {
                x[c.high()] = x[c.high()].next_up();
            }
        }
    }
    true
}

/// One relaxed Kaczmarz step: `x - omega * (r / |phi|^2) * phi` when the
/// residual `r` is positive, otherwise `x`.
///
/// A single step also accepts `omega = 2` (reflection across the
/// hyperplane); runs require `omega < 2`.
pub fn kacz_step(x: &ScoreVector, c: Comparison, epsilon: f64, omega: f64) -> Result<ScoreVector> {
    c.check(x.len())?;
    if !(omega > 0.0 && omega <= 2.0) {
        return Err(invalid(format!("omega must lie in (0, 2], got {omega}")));
    }
    let mut y = x.clone();
    project_in_place(y.as_mut_slice(), c, epsilon, omega);
    Ok(y)
}

/// One cautious step: the unit projection is kept only if the residual is
/// positive and the rankings before and after differ in fewer than `alpha`
/// slots.
pub fn cautious_step(x: &ScoreVector, c: Comparison, epsilon: f64, alpha: Alpha) -> Result<ScoreVector> {
    c.check(x.len())?;
    let mut y = x.clone();
    if !project_in_place(y.as_mut_slice(), c, epsilon, 1.0) {
        return Ok(y);
    }
    let change = hamming(&ranking_from_scores(x.as_slice()), &ranking_from_scores(y.as_slice()))?;
    Ok(if alpha.admits(change) { y } else { x.clone() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub iterate: ScoreVector,
    /// Iterations performed.
    pub iteration: u64,
    /// First iteration whose ranking equalled the truth.
    pub hit_iteration: Option<u64>,
    /// First iteration inside the feasible region of the full true system.
    pub feasible_iteration: Option<u64>,
    /// Steps that changed the iterate.
    pub accepted_steps: u64,
}

impl SolverState {
    pub fn ranking(&self) -> Ranking {
        ranking_from_scores(self.iterate.as_slice())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceSample {
    pub iteration: u64,
    pub hamming: usize,
    /// One entry per `Trace::k_list` value.
    pub k_distances: Vec<usize>,
    pub kendall: usize,
    pub cayley: usize,
    pub feasible_distance: Option<f64>,
}

/// Distances to the truth at sampled iterations of one run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trace {
    pub k_list: Vec<usize>,
    pub samples: Vec<TraceSample>,
}

impl Trace {
    pub fn last(&self) -> Option<&TraceSample> {
        self.samples.last()
    }

    pub fn at(&self, iteration: u64) -> Option<&TraceSample> {
        self.samples
            .binary_search_by_key(&iteration, |s| s.iteration)
            .ok()
            .map(|i| &self.samples[i])
    }
}

/// What the observer sees after each iteration.
#[derive(Debug)]
pub struct StepEvent<'a> {
    pub iteration: u64,
    pub comparison: Comparison,
    pub accepted: bool,
    pub iterate: &'a [f64],
}

/// Incremental order and feasibility check against a known truth.
///
/// Both "ranking equals truth" and "inside the full true system" reduce to
/// the `n - 1` adjacent pairs of the truth, and a step touches at most four
/// of them, so each update is O(1).
struct TruthTracker {
    order: Vec<usize>,
    pos: Vec<usize>,
    epsilon: f64,
    misordered: usize,
    infeasible: usize,
}

impl TruthTracker {
    fn new(truth: &Ranking, epsilon: f64, x: &[f64]) -> Self {
        let mut t = Self {
            order: truth.order().to_vec(),
            pos: truth.positions(),
            epsilon,
            misordered: 0,
            infeasible: 0,
        };
        for k in 0..t.order.len().saturating_sub(1) {
            let (ordered, feasible) = t.pair(x, k);
            t.misordered += usize::from(!ordered);
            t.infeasible += usize::from(!feasible);
        }
        t
    }

    /// (ranked correctly, constraint satisfied) for adjacent pair `k`.
    #[inline]
    fn pair(&self, x: &[f64], k: usize) -> (bool, bool) {
        let upper = self.order[k];
        let lower = self.order[k + 1];
        let ordered = x[upper] > x[lower] || (x[upper] == x[lower] && upper < lower);
        let feasible = x[lower] - x[upper] + self.epsilon <= 0.0;
        (ordered, feasible)
    }

    fn touched(&self, a: usize, b: usize) -> ([usize; 4], usize) {
        let last = self.order.len() - 1;
        let mut out = [0; 4];
        let mut len = 0;
        for p in [self.pos[a], self.pos[b]] {
            for k in [p.checked_sub(1), (p < last).then_some(p)].into_iter().flatten() {
                if !out[..len].contains(&k) {
                    out[len] = k;
                    len += 1;
                }
            }
        }
        (out, len)
    }

    fn tally(&mut self, x: &[f64], pairs: &[usize], sign: bool) {
        for &k in pairs {
            let (ordered, feasible) = self.pair(x, k);
            if sign {
                self.misordered += usize::from(!ordered);
                self.infeasible += usize::from(!feasible);
            } else {
                self.misordered -= usize::from(!ordered);
                self.infeasible -= usize::from(!feasible);
            }
        }
    }

    fn matches(&self) -> bool {
        self.misordered == 0
    }

    fn feasible(&self) -> bool {
        self.infeasible == 0
    }
}

struct Recorder<'a> {
    truth: &'a Ranking,
    k_list: Vec<usize>,
    feasible: Option<(ComparisonSystem, f64)>,
    trace: Trace,
}

impl<'a> Recorder<'a> {
    fn new(truth: &'a Ranking, config: &SolverConfig) -> Result<Self> {
        let feasible = match config.feasible_distance_tol {
            Some(tol) if truth.len() >= 2 => {
                let sys = ComparisonSystem::new(truth.len(), config.epsilon, full_comparison_set(truth)?)?;
                Some((sys, tol))
            }
            _ => None,
        };
        Ok(Self {
            truth,
            k_list: config.k_list.clone(),
            feasible,
            trace: Trace { k_list: config.k_list.clone(), samples: Vec::new() },
        })
    }

    fn record(&mut self, iteration: u64, x: &[f64]) -> Result<()> {
        if self.trace.samples.last().is_some_and(|s| s.iteration >= iteration) {
            return Ok(());
        }
        let current = ranking_from_scores(x);
        let k_distances = self
            .k_list
            .iter()
            .map(|&k| k_distance(&current, self.truth, k))
            .collect::<Result<_>>()?;
        let feasible_distance = match &self.feasible {
            Some((sys, tol)) => Some(distance_to_feasible(&ScoreVector::new(x.to_vec())?, sys, *tol)?),
            None => None,
        };
        self.trace.samples.push(TraceSample {
            iteration,
            hamming: hamming(&current, self.truth)?,
            k_distances,
            kendall: kendall_tau(&current, self.truth)?,
            cayley: cayley(&current, self.truth)?,
            feasible_distance,
        });
        Ok(())
    }
}

/// Runs the configured variant on draws from `sampler`, starting at `x0`.
pub fn run(
    sampler: &mut Sampler,
    x0: ScoreVector,
    config: &SolverConfig,
    truth: Option<&Ranking>,
) -> Result<(SolverState, Trace)> {
    run_observed(sampler, x0, config, truth, |_| {})
}

/// [`run`], calling `observe` after every iteration.
pub fn run_observed<F>(
    sampler: &mut Sampler,
    x0: ScoreVector,
    config: &SolverConfig,
    truth: Option<&Ranking>,
    mut observe: F,
) -> Result<(SolverState, Trace)>
where
    F: FnMut(&StepEvent<'_>),
{
    config.validate()?;
    let n = x0.len();
    for c in sampler.pool() {
        c.check(n)?;
    }
    if let Some(t) = truth {
        if t.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: t.len() });
        }
    }

    let eps = config.epsilon;
    let mut x = x0.into_vec();
    let mut tracker = truth.filter(|t| t.len() >= 2).map(|t| TruthTracker::new(t, eps, &x));
    let mut recorder = truth.map(|t| Recorder::new(t, config)).transpose()?;

    let mut hit_iteration = None;
    let mut feasible_iteration = None;
    let check_hits = |t: u64, tr: &Option<TruthTracker>, hit: &mut Option<u64>, feas: &mut Option<u64>| {
        if let Some(tr) = tr {
            if hit.is_none() && tr.matches() {
                *hit = Some(t);
            }
            if feas.is_none() && tr.feasible() {
                *feas = Some(t);
            }
        } else if truth.is_some() {
            // a single item is always ranked and feasible
            hit.get_or_insert(t);
            feas.get_or_insert(t);
        }
    };
    check_hits(0, &tracker, &mut hit_iteration, &mut feasible_iteration);
    if let Some(rec) = recorder.as_mut() {
        rec.record(0, &x)?;
    }

    // cautious bookkeeping: ranking of the current iterate and scratch space
    let cautious = config.variant == Variant::Cautious;
    let mut current_order = Vec::new();
    let mut candidate_order = Vec::new();
    let mut scratch = Vec::new();
    if cautious {
        ranking_into(&x, &mut current_order);
        scratch = x.clone();
    }

    let mut iteration = 0u64;
    let mut accepted_steps = 0u64;
    while iteration < config.max_iterations {
        if stop_reached(config.stop, hit_iteration, feasible_iteration) {
            break;
        }
        let Some(c) = sampler.draw() else {
            if iteration == 0 {
                return Err(Error::Exhausted);
            }
            break;
        };
        iteration += 1;

        let (a, b) = (c.low(), c.high());
        let touched = tracker.as_ref().map(|tr| tr.touched(a, b));
        if let (Some(tr), Some((pairs, len))) = (tracker.as_mut(), touched) {
            tr.tally(&x, &pairs[..len], false);
        }

        let accepted = if cautious {
            scratch[a] = x[a];
            scratch[b] = x[b];
            if project_in_place(&mut scratch, c, eps, config.omega) {
                ranking_into(&scratch, &mut candidate_order);
                let change = current_order.iter().zip(&candidate_order).filter(|(p, q)| p != q).count();
                if config.alpha.admits(change) {
                    x[a] = scratch[a];
                    x[b] = scratch[b];
                    std::mem::swap(&mut current_order, &mut candidate_order);
                    true
                } else {
                    scratch[a] = x[a];
                    scratch[b] = x[b];
                    false
                }
            } else {
                false
            }
        } else {
            project_in_place(&mut x, c, eps, config.omega)
        };
        accepted_steps += u64::from(accepted);

        if let (Some(tr), Some((pairs, len))) = (tracker.as_mut(), touched) {
            tr.tally(&x, &pairs[..len], true);
        }
        let had_hit = hit_iteration.is_some();
        check_hits(iteration, &tracker, &mut hit_iteration, &mut feasible_iteration);

        if let Some(rec) = recorder.as_mut() {
            let first_hit = !had_hit && hit_iteration.is_some();
            if first_hit || iteration.is_multiple_of(config.record_every) {
                rec.record(iteration, &x)?;
            }
        }
        observe(&StepEvent { iteration, comparison: c, accepted, iterate: &x });
    }

    if let Some(rec) = recorder.as_mut() {
        rec.record(iteration, &x)?;
    }
    let trace = recorder.map(|r| r.trace).unwrap_or_default();
    let state = SolverState {
        iterate: ScoreVector::new(x)?,
        iteration,
        hit_iteration,
        feasible_iteration,
        accepted_steps,
    };
    Ok((state, trace))
}

fn stop_reached(rule: StopRule, hit: Option<u64>, feasible: Option<u64>) -> bool {
    match rule {
        StopRule::Never => false,
        StopRule::RankingHit => hit.is_some(),
        StopRule::Feasible => feasible.is_some(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HitOutcome {
    Hit(u64),
    /// No hit within the iterations performed.
    Censored(u64),
}

impl HitOutcome {
    pub fn value(&self) -> u64 {
        match *self {
            HitOutcome::Hit(t) | HitOutcome::Censored(t) => t,
        }
    }

    pub fn is_censored(&self) -> bool {
        matches!(self, HitOutcome::Censored(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HitCriterion {
    #[default]
    Ranking,
    Feasible,
}

impl HitCriterion {
    pub fn outcome(&self, state: &SolverState) -> HitOutcome {
        let hit = match self {
            HitCriterion::Ranking => state.hit_iteration,
            HitCriterion::Feasible => state.feasible_iteration,
        };
        hit.map_or(HitOutcome::Censored(state.iteration), HitOutcome::Hit)
    }
}

/// Per-trial hitting times and their order statistics. Censored trials
/// enter the statistics at the iteration count they reached.
#[derive(Debug, Clone, PartialEq)]
pub struct HitSummary {
    pub outcomes: Vec<HitOutcome>,
    pub quartiles: Quartiles,
    pub mean: f64,
}

impl HitSummary {
    pub fn from_outcomes(outcomes: Vec<HitOutcome>) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(invalid("at least one trial is required"));
        }
        let values: Vec<f64> = outcomes.iter().map(|o| o.value() as f64).collect();
        Ok(Self { quartiles: Quartiles::of(&values), mean: mean(&values), outcomes })
    }

    pub fn median(&self) -> f64 {
        self.quartiles.median
    }

    pub fn censored(&self) -> usize {
        self.outcomes.iter().filter(|o| o.is_censored()).count()
    }
}

/// Runs `trials` independent trials and summarises when each first hit.
pub fn hitting_time<F>(trials: usize, criterion: HitCriterion, exec: Execution, run_trial: F) -> Result<HitSummary>
where
    F: Fn(usize) -> Result<SolverState> + Sync + Send,
{
    if trials == 0 {
        return Err(invalid("at least one trial is required"));
    }
    let states = exec.try_map(trials, run_trial)?;
    HitSummary::from_outcomes(states.iter().map(|s| criterion.outcome(s)).collect())
}
