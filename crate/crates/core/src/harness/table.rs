//! Persisted experiment results.
//!
//! A table is comma-separated text. It opens with `# key=value` metadata
//! lines (spec echo, version, cell, declared metrics), followed by a header
//! row and one row per (trial or aggregate, iteration, metric):
//!
//! ```text
//! # version=0.1.0
//! # metrics=hamming,k5
//! variant,alpha,n,q,p,iteration,trial,metric,value
//! kacz,-,50,1,0,10000,0,hamming,0
//! kacz,-,50,1,0,10000,median,hamming,0
//! ```

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const COLUMNS: [&str; 9] = ["variant", "alpha", "n", "q", "p", "iteration", "trial", "metric", "value"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TrialTag {
    Trial(usize),
    Q25,
    Median,
    Q75,
}

impl TrialTag {
    pub fn is_aggregate(&self) -> bool {
        !matches!(self, TrialTag::Trial(_))
    }
}

impl fmt::Display for TrialTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrialTag::Trial(i) => write!(f, "{i}"),
            TrialTag::Q25 => f.write_str("q25"),
            TrialTag::Median => f.write_str("median"),
            TrialTag::Q75 => f.write_str("q75"),
        }
    }
}

impl FromStr for TrialTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "q25" => Ok(TrialTag::Q25),
            "median" => Ok(TrialTag::Median),
            "q75" => Ok(TrialTag::Q75),
            _ => s.parse().map(TrialTag::Trial).map_err(|_| format!("invalid trial tag `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub variant: String,
    pub alpha: String,
    pub n: usize,
    pub q: f64,
    pub p: f64,
    pub iteration: u64,
    pub trial: TrialTag,
    pub metric: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    pub meta: Vec<(String, String)>,
    pub metrics: Vec<String>,
    pub rows: Vec<Row>,
}

impl ResultTable {
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn trial_rows(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| !r.trial.is_aggregate())
    }

    pub fn rows_for<'a>(&'a self, variant: &'a str, metric: &'a str) -> impl Iterator<Item = &'a Row> + 'a {
        self.rows.iter().filter(move |r| r.variant == variant && r.metric == metric)
    }

    pub fn aggregate(&self, variant: &str, metric: &str, tag: TrialTag) -> Option<&Row> {
        self.rows.iter().find(|r| r.variant == variant && r.metric == metric && r.trial == tag)
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut out = String::new();
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out.push_str(&format!("# metrics={}\n", self.metrics.join(",")));
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(COLUMNS)?;
        for r in &self.rows {
            writer.write_record([
                r.variant.clone(),
                r.alpha.clone(),
                r.n.to_string(),
                r.q.to_string(),
                r.p.to_string(),
                r.iteration.to_string(),
                r.trial.to_string(),
                r.metric.clone(),
                r.value.to_string(),
            ])?;
        }
        let body = writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        out.push_str(&String::from_utf8(body).expect("csv output is utf-8"));
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut meta = Vec::new();
        let mut metrics = None;
        let mut header_at = 0;
        for (idx, line) in text.lines().enumerate() {
            let Some(rest) = line.strip_prefix('#') else {
                header_at = idx;
                break;
            };
            let (k, v) = rest
                .trim()
                .split_once('=')
                .ok_or_else(|| Error::Parse { line: idx + 1, message: "metadata must be `key=value`".into() })?;
            if k == "metrics" {
                metrics = Some(v.split(',').filter(|s| !s.is_empty()).map(str::to_string).collect::<Vec<_>>());
            } else {
                meta.push((k.to_string(), v.to_string()));
            }
        }
        let metrics =
            metrics.ok_or_else(|| Error::Parse { line: header_at + 1, message: "missing `# metrics=` line".into() })?;
        let body: String = text.lines().skip(header_at).flat_map(|l| [l, "\n"]).collect();
        let mut reader = csv::Reader::from_reader(body.as_bytes());
        let mut rows = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let line = header_at + i + 2;
            let record = record?;
            let bad = |what: &str| Error::Parse { line, message: format!("invalid {what}") };
            if record.len() != COLUMNS.len() {
                return Err(bad("column count"));
            }
            let row = Row {
                variant: record[0].to_string(),
                alpha: record[1].to_string(),
                n: record[2].parse().map_err(|_| bad("n"))?,
                q: record[3].parse().map_err(|_| bad("q"))?,
                p: record[4].parse().map_err(|_| bad("p"))?,
                iteration: record[5].parse().map_err(|_| bad("iteration"))?,
                trial: record[6].parse().map_err(|_| bad("trial"))?,
                metric: record[7].to_string(),
                value: record[8].parse().map_err(|_| bad("value"))?,
            };
            if !metrics.contains(&row.metric) {
                return Err(Error::Parse { line, message: format!("undeclared metric `{}`", row.metric) });
            }
            rows.push(row);
        }
        Ok(Self { meta, metrics, rows })
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string()?)?;
        Ok(())
    }

    pub fn read_from(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row_strategy() -> impl Strategy<Value = Row> {
        (
            prop::sample::select(vec!["kacz", "cautious", "rank-centrality"]),
            prop::sample::select(vec!["-", "1", "4", "inf"]),
            1usize..500,
            0.0f64..=1.0,
            0.0f64..0.5,
            0u64..1_000_000,
            prop_oneof![
                (0usize..100).prop_map(TrialTag::Trial),
                Just(TrialTag::Median),
                Just(TrialTag::Q25),
                Just(TrialTag::Q75)
            ],
            prop::sample::select(vec!["hamming", "k5", "kendall_norm"]),
            prop_oneof![any::<f64>().prop_filter("finite", |v| v.is_finite()), (0u32..100).prop_map(f64::from)],
        )
            .prop_map(|(variant, alpha, n, q, p, iteration, trial, metric, value)| Row {
                variant: variant.into(),
                alpha: alpha.into(),
                n,
                q,
                p,
                iteration,
                trial,
                metric: metric.into(),
                value,
            })
    }

    proptest! {
        #[test]
        fn tables_round_trip(rows in prop::collection::vec(row_strategy(), 0..40)) {
            let table = ResultTable {
                meta: vec![("version".into(), "0.1.0".into()), ("spec.q".into(), "0.05,0.1".into())],
                metrics: vec!["hamming".into(), "k5".into(), "kendall_norm".into()],
                rows,
            };
            let text = table.to_csv_string().unwrap();
            prop_assert_eq!(ResultTable::parse(&text).unwrap(), table);
        }
    }

    #[test]
    fn undeclared_metric_is_rejected() {
        let text = "# metrics=hamming\nvariant,alpha,n,q,p,iteration,trial,metric,value\nkacz,-,5,1,0,10,0,cayley,1\n";
        assert!(matches!(ResultTable::parse(text), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn missing_metrics_line_is_rejected() {
        let text = "# version=1\nvariant,alpha,n,q,p,iteration,trial,metric,value\n";
        assert!(ResultTable::parse(text).is_err());
    }
}
