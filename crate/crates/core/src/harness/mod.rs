//! File formats, experiment orchestration and the command layer behind the
//! `kaczrank` binary.

pub mod commands;
pub mod experiment;
pub mod input;
pub mod table;

pub use commands::{baseline_comparisons, format_ranking, rank_comparisons, theory_report, RankOptions};
pub use experiment::{run_experiment, write_tables, ExperimentKind, ExperimentSpec};
pub use input::{format_comparisons, parse_comparisons, ComparisonFile};
pub use table::{ResultTable, Row, TrialTag};
