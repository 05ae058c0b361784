//! Ranking from pairwise comparisons by randomized projection.
//!
//! Each comparison "`low` ranks below `high`" is a halfspace
//! `x[low] - x[high] <= -epsilon` on a score vector `x`. The solvers project
//! onto randomly drawn violated halfspaces and read the ranking off the
//! scores, best first.
//!
//! ```
//! use kaczrank::{run, Comparison, Ranking, RandomStream, Sampler, SamplerSpec, ScoreVector, SolverConfig};
//!
//! let pool = vec![Comparison::new(0, 1).unwrap(), Comparison::new(2, 1).unwrap(), Comparison::new(0, 2).unwrap()];
//! let mut sampler = Sampler::new(pool, SamplerSpec::default(), RandomStream::new(7)).unwrap();
//! let (state, _) = run(&mut sampler, ScoreVector::zeros(3), &SolverConfig::default(), None).unwrap();
//! assert_eq!(state.ranking(), Ranking::new(vec![1, 2, 0]).unwrap());
//! ```

pub mod baseline;
pub mod error;
pub mod exec;
pub mod harness;
pub mod metrics;
pub mod sampling;
pub mod solver;
pub mod stats;
pub mod system;
pub mod theory;
pub mod trial;

pub use baseline::{accumulate, rank_centrality, transition_matrix, WinRecord};
pub use error::{Error, Result};
pub use exec::Execution;
pub use metrics::{cayley, distance_to_feasible, hamming, k_distance, kendall_tau, normalize, project_onto_feasible, Metric};
pub use sampling::{
    apply_noise, backbone, full_comparison_set, ordered_stream, subset_sample, RandomStream, Sampler, SamplerMode,
    SamplerSpec,
};
pub use solver::{
    cautious_step, hitting_time, kacz_step, run, run_observed, Alpha, HitCriterion, HitOutcome, HitSummary,
    InitialIterate, SolverConfig, SolverState, StepEvent, StopRule, Trace, TraceSample, Variant,
};
pub use system::{
    comparison_row, feasible_point, ranking_from_scores, residual, verify_feasible, Comparison, ComparisonSystem,
    Ranking, ScoreVector, DEFAULT_EPSILON,
};
pub use trial::{TrialOutcome, TrialPlan};
