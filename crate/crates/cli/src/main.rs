use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use kaczrank::baseline::{DEFAULT_REGULARIZATION, DEFAULT_TOLERANCE};
use kaczrank::harness::{
    baseline_comparisons, format_ranking, parse_comparisons, rank_comparisons, run_experiment, theory_report,
    write_tables, ExperimentKind, ExperimentSpec, RankOptions,
};
use kaczrank::{Alpha, Execution, InitialIterate, SamplerMode, SamplerSpec, SolverConfig, Variant, DEFAULT_EPSILON};

#[derive(Parser)]
#[command(name = "kaczrank", version, about = "Rank items from pairwise comparisons by randomized projection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank the items of a comparison file with KaczRank or CautiousRank.
    Rank(RankArgs),
    /// Rank the items of a comparison file with Rank Centrality.
    Baseline(BaselineArgs),
    /// Print the closed-form rates and bounds for n items.
    Theory(TheoryArgs),
    /// Run an experiment grid and write one CSV table per cell.
    Experiment(Box<ExperimentArgs>),
}

#[derive(Args)]
struct OutputArgs {
    /// Print one item per line instead of space-separated.
    #[arg(long)]
    lines: bool,
}

impl OutputArgs {
    fn separator(&self) -> &'static str {
        if self.lines {
            "\n"
        } else {
            " "
        }
    }
}

#[derive(Args)]
struct RankArgs {
    /// Comparison file: `n=<count>` then one `low,high` per line.
    input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, default_value_t = 10_000)]
    iters: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// kacz or cautious.
    #[arg(long, default_value = "kacz")]
    variant: Variant,
    /// Cautiousness: a positive integer or `inf`.
    #[arg(long, default_value = "inf")]
    alpha: Alpha,
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// Fraction of the file's comparisons to keep.
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    /// Probability that each drawn comparison is flipped.
    #[arg(long, default_value_t = 0.0)]
    p: f64,
    /// with-replacement, without-replacement, friendly or adversarial.
    #[arg(long, default_value = "with-replacement")]
    mode: SamplerMode,
    /// zero or random.
    #[arg(long, default_value = "zero")]
    init: InitialIterate,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BaselineArgs {
    input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_REGULARIZATION)]
    regularization: f64,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct TheoryArgs {
    #[arg(long)]
    n: usize,
    /// Flip probability for the noisy bounds.
    #[arg(long)]
    p: Option<f64>,
    /// Iteration count for the tail bound.
    #[arg(long)]
    k: Option<u64>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment kind; optional when the spec file names one.
    kind: Option<ExperimentKind>,
    /// File of `key=value` lines using the flag names below.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Directory for the result tables.
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Run trials on one thread.
    #[arg(long)]
    sequential: bool,
    /// Comma-separated item counts.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    iters: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    k_list: Option<String>,
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    omega: Option<String>,
    #[arg(long)]
    record_every: Option<String>,
    #[arg(long)]
    init: Option<String>,
    #[arg(long)]
    regularization: Option<String>,
}

impl ExperimentArgs {
    fn overrides(&self) -> Vec<(&'static str, &String)> {
        [
            ("n", &self.n),
            ("trials", &self.trials),
            ("iters", &self.iters),
            ("epsilon", &self.epsilon),
            ("k-list", &self.k_list),
            ("variant", &self.variant),
            ("alpha", &self.alpha),
            ("q", &self.q),
            ("p", &self.p),
            ("seed", &self.seed),
            ("mode", &self.mode),
            ("omega", &self.omega),
            ("record-every", &self.record_every),
            ("init", &self.init),
            ("regularization", &self.regularization),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| (k, v)))
        .collect()
    }

    fn spec(&self) -> Result<ExperimentSpec> {
        let mut pairs = match &self.spec {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let spec = ExperimentSpec::from_kv_text(&text).with_context(|| format!("in {}", path.display()))?;
                spec.to_pairs()
            }
            None => Vec::new(),
        };
        match (self.kind, pairs.iter().position(|(k, _)| k == "kind")) {
            (Some(kind), Some(i)) => pairs[i].1 = kind.to_string(),
            (Some(kind), None) => pairs.insert(0, ("kind".into(), kind.to_string())),
            (None, Some(_)) => {}
            (None, None) => bail!("name an experiment kind or pass --spec"),
        }
        pairs.extend(self.overrides().into_iter().map(|(k, v)| (k.to_string(), v.clone())));
        Ok(ExperimentSpec::from_pairs(&pairs)?)
    }
}

fn read_input(path: &PathBuf) -> Result<kaczrank::harness::ComparisonFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_comparisons(&text).with_context(|| format!("in {}", path.display()))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Rank(args) => {
            let file = read_input(&args.input)?;
            let opts = RankOptions {
                config: SolverConfig {
                    epsilon: args.epsilon,
                    max_iterations: args.iters,
                    variant: args.variant,
                    alpha: args.alpha,
                    omega: args.omega,
                    ..Default::default()
                },
                sampler: SamplerSpec::new(args.mode, args.q, args.p)?,
                init: args.init,
                seed: args.seed,
            };
            let ranking = rank_comparisons(file.n, &file.comparisons, &opts)?;
            print!("{}", format_ranking(&ranking, args.output.separator()));
        }
        Command::Baseline(args) => {
            let file = read_input(&args.input)?;
            let ranking = baseline_comparisons(file.n, &file.comparisons, args.regularization, args.tolerance)?;
            print!("{}", format_ranking(&ranking, args.output.separator()));
        }
        Command::Theory(args) => print!("{}", theory_report(args.n, args.p, args.k)?),
        Command::Experiment(args) => {
            let spec = args.spec()?;
            let exec = if args.sequential { Execution::Sequential } else { Execution::Parallel };
            let tables = run_experiment(&spec, exec)?;
            for path in write_tables(spec.kind, &tables, &args.out)? {
                println!("{}", path.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
