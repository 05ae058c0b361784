//! One seeded experiment trial: draw a truth, build the comparison pool,
//! pick a start and run the solver.

use crate::error::{invalid, Result};
use crate::sampling::{full_comparison_set, ordered_stream, subset_sample, RandomStream, Sampler, SamplerSpec};
use crate::solver::{run_observed, InitialIterate, SolverConfig, SolverState, StepEvent, Trace};
use crate::system::Ranking;

#[derive(Debug, Clone, PartialEq)]
pub struct TrialPlan {
    pub n: usize,
    pub sampler: SamplerSpec,
    pub init: InitialIterate,
    pub config: SolverConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub truth: Ranking,
    pub state: SolverState,
    pub trace: Trace,
}

impl TrialPlan {
    pub fn new(n: usize, sampler: SamplerSpec, config: SolverConfig) -> Self {
        Self { n, sampler, init: InitialIterate::Zero, config }
    }

    pub fn run(&self, seed: u64) -> Result<TrialOutcome> {
        self.run_observed(seed, |_| {})
    }

    /// Everything random in the trial comes from one stream seeded with
    /// `seed`, consumed in a fixed order: truth, pool, start, draws.
    pub fn run_observed<F>(&self, seed: u64, observe: F) -> Result<TrialOutcome>
    where
        F: FnMut(&StepEvent<'_>),
    {
        let mut stream = RandomStream::new(seed);
        let truth = stream.ranking(self.n);
        let mode = self.sampler.mode();
        let pool = if mode.is_ordered() {
            if self.sampler.subset_fraction() < 1.0 {
                return Err(invalid(format!("`{mode}` mode reveals the full set; q must be 1")));
            }
            ordered_stream(mode, &truth, &mut stream)?
        } else {
            let full = full_comparison_set(&truth)?;
            if self.sampler.subset_fraction() < 1.0 {
                subset_sample(&full, self.sampler.subset_fraction(), &mut stream)?
            } else {
                full
            }
        };
        let x0 = self.init.build(self.n, &mut stream);
        let mut sampler = Sampler::new(pool, self.sampler, stream)?;
        let (state, trace) = run_observed(&mut sampler, x0, &self.config, Some(&truth), observe)?;
        Ok(TrialOutcome { truth, state, trace })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::SamplerMode;

    #[test]
    fn seeds_replay() {
        let plan = TrialPlan::new(12, SamplerSpec::new(SamplerMode::WithReplacement, 0.6, 0.1).unwrap(), SolverConfig::default());
        assert_eq!(plan.run(5).unwrap(), plan.run(5).unwrap());
        assert_ne!(plan.run(5).unwrap().truth, plan.run(6).unwrap().truth);
    }

    #[test]
    fn ordered_modes_need_the_full_set() {
        let spec = SamplerSpec::new(SamplerMode::Friendly, 0.5, 0.0).unwrap();
        assert!(TrialPlan::new(5, spec, SolverConfig::default()).run(0).is_err());
    }

    #[test]
    fn friendly_provider_replays_the_whole_set_once() {
        let spec = SamplerSpec::new(SamplerMode::Friendly, 1.0, 0.0).unwrap();
        let config = SolverConfig { max_iterations: 1_000, ..Default::default() };
        for seed in 0..5 {
            let out = TrialPlan::new(6, spec, config.clone()).run(seed).unwrap();
            assert_eq!(out.state.iteration, 15);
        }
    }
}
