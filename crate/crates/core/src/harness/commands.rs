//! Library side of the CLI subcommands.

use std::fmt::Write as _;

use crate::baseline::{accumulate, rank_centrality};
use crate::error::{invalid, Error, Result};
use crate::sampling::{subset_sample, RandomStream, Sampler, SamplerSpec};
use crate::solver::{run, InitialIterate, SolverConfig};
use crate::system::{Comparison, Ranking};
use crate::theory;

#[derive(Debug, Clone, PartialEq)]
pub struct RankOptions {
    pub config: SolverConfig,
    pub sampler: SamplerSpec,
    pub init: InitialIterate,
    pub seed: u64,
}

impl Default for RankOptions {
    fn default() -> Self {
        Self {
            config: SolverConfig::default(),
            sampler: SamplerSpec::default(),
            init: InitialIterate::Zero,
            seed: 0,
        }
    }
}

/// Runs the configured solver over `comparisons` and returns the final
/// ranking. Friendly and adversarial modes replay the list in file order.
pub fn rank_comparisons(n: usize, comparisons: &[Comparison], opts: &RankOptions) -> Result<Ranking> {
    if n == 0 {
        return Err(invalid("at least one item is required"));
    }
    for c in comparisons {
        c.check(n)?;
    }
    opts.config.validate()?;
    let mut stream = RandomStream::new(opts.seed);
    let q = opts.sampler.subset_fraction();
    let pool = if q < 1.0 {
        if opts.sampler.mode().is_ordered() {
            return Err(invalid(format!("`{}` mode replays the whole file; q must be 1", opts.sampler.mode())));
        }
        subset_sample(comparisons, q, &mut stream)?
    } else {
        comparisons.to_vec()
    };
    let x0 = opts.init.build(n, &mut stream);
    let mut sampler = Sampler::new(pool, opts.sampler, stream)?;
    let (state, _) = run(&mut sampler, x0, &opts.config, None)?;
    Ok(state.ranking())
}

pub fn baseline_comparisons(n: usize, comparisons: &[Comparison], regularization: f64, tol: f64) -> Result<Ranking> {
    if comparisons.is_empty() {
        return Err(Error::EmptyPool);
    }
    let rec = accumulate(n, comparisons.iter().copied())?;
    Ok(rank_centrality(&rec, regularization, tol)?.1)
}

/// Best-first item indices joined by `separator`, with a trailing newline.
pub fn format_ranking(ranking: &Ranking, separator: &str) -> String {
    let mut out = ranking.order().iter().map(usize::to_string).collect::<Vec<_>>().join(separator);
    out.push('\n');
    out
}

fn push_log(out: &mut String, name: &str, v: theory::LogValue) {
    if let Some(value) = v.value {
        let _ = writeln!(out, "{name} = {value:.6}");
    }
    let _ = writeln!(out, "ln_{name} = {:.6}", v.ln);
}

/// `name = value` lines for every closed-form quantity at `n` items. The
/// noisy bound appears when `p` is given and the tail bound when `k` is.
pub fn theory_report(n: usize, p: Option<f64>, k: Option<u64>) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(out, "n = {n}");
    let _ = writeln!(out, "comparisons = {}", theory::pair_count(n));
    let _ = writeln!(out, "contraction_rate = {:.6}", theory::contraction_rate(n)?);
    let _ = writeln!(out, "hoffman_bound = {:.6}", theory::hoffman_bound(n)?);
    if n <= theory::MAX_CONNECTIVITY_ITEMS {
        let _ = writeln!(out, "connectivity = {:.6}", theory::complete_graph_connectivity(n)?);
    }
    push_log(&mut out, "hit_bound", theory::expected_hit_bound(n)?);
    let noise = p.unwrap_or(0.0);
    if let Some(p) = p {
        let _ = writeln!(out, "p = {p}");
        push_log(&mut out, "noisy_hit_bound", theory::expected_hit_bound_noisy(n, p)?);
    }
    if let Some(k) = k {
        let _ = writeln!(out, "k = {k}");
        let _ = writeln!(out, "tail_bound = {:.6}", theory::tail_bound(n, k, noise)?);
    }
    let _ = writeln!(out, "coupon_with_replacement = {:.6}", theory::coupon_with_replacement(n)?);
    let _ = writeln!(out, "coupon_without_replacement = {:.6}", theory::coupon_without_replacement(n)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::input::parse_comparisons;
    use crate::sampling::{full_comparison_set, SamplerMode};
    use crate::solver::{Alpha, Variant};

    const WORKED: &str = "n=4\n0,1\n2,1\n0,2\n3,2\n0,3\n";

    fn ranking(order: &[usize]) -> Ranking {
        Ranking::new(order.to_vec()).unwrap()
    }

    #[test]
    fn worked_example_ranks_under_both_methods() {
        let f = parse_comparisons(WORKED).unwrap();
        let r = rank_comparisons(f.n, &f.comparisons, &RankOptions::default()).unwrap();
        assert_eq!(format_ranking(&r, " "), "1 2 3 0\n");
        let b = baseline_comparisons(f.n, &f.comparisons, 0.01, 1e-12).unwrap();
        assert_eq!(b, ranking(&[1, 2, 3, 0]));
        let cautious = RankOptions {
            config: SolverConfig { variant: Variant::Cautious, alpha: Alpha::Unlimited, ..Default::default() },
            ..Default::default()
        };
        assert_eq!(rank_comparisons(f.n, &f.comparisons, &cautious).unwrap(), r);
    }

    #[test]
    fn single_comparison() {
        let f = parse_comparisons("n=2\n0,1\n").unwrap();
        let r = rank_comparisons(f.n, &f.comparisons, &RankOptions::default()).unwrap();
        assert_eq!(format_ranking(&r, "\n"), "1\n0\n");
    }

    #[test]
    fn modes_and_subsets() {
        let truth = ranking(&[3, 0, 4, 1, 2]);
        let full = full_comparison_set(&truth).unwrap();
        for mode in [SamplerMode::WithoutReplacement, SamplerMode::Friendly, SamplerMode::Adversarial] {
            let opts = RankOptions {
                sampler: SamplerSpec::new(mode, 1.0, 0.0).unwrap(),
                config: SolverConfig { max_iterations: 5_000, ..Default::default() },
                ..Default::default()
            };
            // one pass over the full set with nothing else to do
            let _ = rank_comparisons(5, &full, &opts).unwrap();
        }
        let ordered = RankOptions { sampler: SamplerSpec::new(SamplerMode::Friendly, 0.5, 0.0).unwrap(), ..Default::default() };
        assert!(rank_comparisons(5, &full, &ordered).is_err());
        let half = RankOptions { sampler: SamplerSpec::new(SamplerMode::WithReplacement, 0.5, 0.0).unwrap(), ..Default::default() };
        assert_eq!(rank_comparisons(5, &full, &half).unwrap().len(), 5);
    }

    #[test]
    fn baseline_recovers_full_set_and_rejects_empty() {
        let truth = ranking(&[2, 4, 0, 1, 3]);
        let full = full_comparison_set(&truth).unwrap();
        assert_eq!(baseline_comparisons(5, &full, 0.01, 1e-12).unwrap(), truth);
        assert!(baseline_comparisons(5, &[], 0.01, 1e-12).is_err());
    }

    fn value(report: &str, key: &str) -> f64 {
        report
            .lines()
            .find_map(|l| l.strip_prefix(&format!("{key} = ")))
            .unwrap_or_else(|| panic!("{key} missing from\n{report}"))
            .parse()
            .unwrap()
    }

    #[test]
    fn theory_report_examples() {
        let r = theory_report(3, None, None).unwrap();
        assert_eq!(value(&r, "coupon_with_replacement"), 4.5);
        assert_eq!(value(&r, "coupon_without_replacement"), 2.666667);
        assert_eq!(value(&theory_report(50, None, None).unwrap(), "contraction_rate"), 0.979592);
        let r = theory_report(2, Some(0.25), Some(10)).unwrap();
        assert_eq!(value(&r, "noisy_hit_bound"), 2.666667);
        assert!(r.contains("tail_bound = "));
        let big = theory_report(40, None, None).unwrap();
        assert!(!big.lines().any(|l| l.starts_with("hit_bound = ")));
        assert!(big.contains("ln_hit_bound = "));
        assert!(theory_report(1, None, None).is_err());
        assert!(theory_report(5, Some(0.5), None).is_err());
    }
}
