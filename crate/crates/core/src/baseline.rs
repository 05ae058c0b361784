//! Rank Centrality: rank items by the stationary distribution of a random
//! walk that moves from each item toward the items that beat it.

use crate::error::{invalid, Error, Result};
use crate::system::{ranking_from_scores, Comparison, Ranking, ScoreVector};

pub const DEFAULT_REGULARIZATION: f64 = 0.01;
pub const DEFAULT_TOLERANCE: f64 = 1e-12;
const MAX_POWER_ITERATIONS: usize = 1_000_000;

/// Pairwise win counts: `wins(i, j)` is how often `i` beat `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WinRecord {
    n: usize,
    wins: Vec<u64>,
}

impl WinRecord {
    pub fn new(n: usize) -> Self {
        Self { n, wins: vec![0; n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn wins(&self, winner: usize, loser: usize) -> u64 {
        self.wins[winner * self.n + loser]
    }

    pub fn total(&self) -> u64 {
        self.wins.iter().sum()
    }

    /// Tallies one comparison: its `high` item beat its `low` item.
    pub fn record(&mut self, c: Comparison) -> Result<()> {
        c.check(self.n)?;
        self.wins[c.high() * self.n + c.low()] += 1;
        Ok(())
    }
}

pub fn accumulate<I>(n: usize, comparisons: I) -> Result<WinRecord>
where
    I: IntoIterator<Item = Comparison>,
{
    let mut rec = WinRecord::new(n);
    for c in comparisons {
        rec.record(c)?;
    }
    Ok(rec)
}

/// Row-stochastic transition matrix, row-major.
///
/// Off the diagonal, `P[i][j] = w(j beat i) / (w(i,j) + w(j,i)) / d_max`,
/// where `d_max` is the largest number of distinct opponents of any item;
/// the diagonal takes the remaining mass. `regularization` is added to every
/// off-diagonal count first.
pub fn transition_matrix(rec: &WinRecord, regularization: f64) -> Result<Vec<f64>> {
    if !(regularization >= 0.0 && regularization.is_finite()) {
        return Err(invalid("regularization must be non-negative"));
    }
    let n = rec.n;
    let count = |i: usize, j: usize| rec.wins(i, j) as f64 + regularization;
    let degree = (0..n)
        .map(|i| (0..n).filter(|&j| j != i && count(i, j) + count(j, i) > 0.0).count())
        .max()
        .unwrap_or(0);
    if degree == 0 {
        return Err(Error::EmptyPool);
    }
    let d_max = degree as f64;
    let mut p = vec![0.0; n * n];
    for i in 0..n {
        let mut off = 0.0;
        for j in (0..n).filter(|&j| j != i) {
            let games = count(i, j) + count(j, i);
            if games > 0.0 {
                let rate = count(j, i) / games / d_max;
                p[i * n + j] = rate;
                off += rate;
            }
        }
        p[i * n + i] = 1.0 - off;
    }
    Ok(p)
}

/// Stationary distribution of the Rank Centrality chain by power iteration,
/// stopped once an iteration changes it by less than `tol` in L1 norm.
pub fn rank_centrality(rec: &WinRecord, regularization: f64, tol: f64) -> Result<(ScoreVector, Ranking)> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(invalid("tolerance must be positive"));
    }
    let n = rec.n;
    let p = transition_matrix(rec, regularization)?;
    let mut pi = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    for _ in 0..MAX_POWER_ITERATIONS {
        for (j, slot) in next.iter_mut().enumerate() {
            // diagonal kept apart so symmetric inputs stay exactly uniform
            let inflow: f64 = (0..n).filter(|&i| i != j).map(|i| pi[i] * p[i * n + j]).sum();
            *slot = pi[j] * p[j * n + j] + inflow;
        }
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|v| *v /= total);
        let change: f64 = pi.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut pi, &mut next);
        if change < tol {
            let ranking = ranking_from_scores(&pi);
            return Ok((ScoreVector::new(pi)?, ranking));
        }
    }
    Err(Error::NoConvergence { what: "Rank Centrality power iteration", iterations: MAX_POWER_ITERATIONS })
}
