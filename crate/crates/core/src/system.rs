//! Comparisons, comparison systems, score vectors and rankings.
//!
//! A comparison `(low, high)` asserts `x[low] < x[high]`. With a positive
//! slack `epsilon` it becomes the halfspace `x[low] - x[high] <= -epsilon`,
//! whose row vector has `+1` at `low` and `-1` at `high`.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Slack used when none is given.
pub const DEFAULT_EPSILON: f64 = 1e-5;

/// Squared Euclidean norm of every comparison row.
pub const ROW_NORM_SQUARED: f64 = 2.0;

/// One observation `x[low] < x[high]`: item `high` is ranked above item `low`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Comparison {
    low: usize,
    high: usize,
}

impl Comparison {
    pub fn new(low: usize, high: usize) -> Result<Self> {
        if low == high {
            return Err(Error::SelfComparison(low));
        }
        Ok(Self { low, high })
    }

    #[inline]
    pub fn low(&self) -> usize {
        self.low
    }

    #[inline]
    pub fn high(&self) -> usize {
        self.high
    }

    /// The reversed observation, whose row is the negated row.
    #[inline]
    pub fn flipped(self) -> Self {
        Self { low: self.high, high: self.low }
    }

    pub fn check(&self, n: usize) -> Result<()> {
        for index in [self.low, self.high] {
            if index >= n {
                return Err(Error::IndexOutOfRange { index, n });
            }
        }
        Ok(())
    }

    /// `<phi, x> + epsilon` without bounds checking beyond slice indexing,
    /// evaluated as `(x[low] + epsilon) - x[high]`.
    #[inline]
    pub fn residual_unchecked(&self, x: &[f64], epsilon: f64) -> f64 {
        (x[self.low] + epsilon) - x[self.high]
    }
}

/// Dense row vector of a comparison: `+1` at `low`, `-1` at `high`.
pub fn comparison_row(c: Comparison, n: usize) -> Result<Vec<f64>> {
    c.check(n)?;
    let mut row = vec![0.0; n];
    row[c.low] = 1.0;
    row[c.high] = -1.0;
    Ok(row)
}

/// Constraint residual `x[low] - x[high] + epsilon`; positive means violated.
pub fn residual(c: Comparison, x: &ScoreVector, epsilon: f64) -> Result<f64> {
    c.check(x.len())?;
    Ok(c.residual_unchecked(x.as_slice(), epsilon))
}

/// Item count, slack and comparisons of the feasibility system `Qx <= -epsilon`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonSystem {
    n: usize,
    epsilon: f64,
    comparisons: Vec<Comparison>,
}

impl ComparisonSystem {
    pub fn new(n: usize, epsilon: f64, comparisons: Vec<Comparison>) -> Result<Self> {
        check_epsilon(epsilon)?;
        for c in &comparisons {
            c.check(n)?;
        }
        Ok(Self { n, epsilon, comparisons })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn comparisons(&self) -> &[Comparison] {
        &self.comparisons
    }

    pub fn len(&self) -> usize {
        self.comparisons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comparisons.is_empty()
    }

    /// Largest residual over all rows, or `-inf` for an empty system.
    pub fn max_residual(&self, x: &[f64]) -> f64 {
        self.comparisons
            .iter()
            .map(|c| c.residual_unchecked(x, self.epsilon))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("epsilon must be positive and finite, got {epsilon}")))
    }
}

/// Finite score per item. Only the induced order carries meaning.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector(Vec<f64>);

impl ScoreVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self(values))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn mean(&self) -> f64 {
        if self.0.is_empty() {
            0.0
        } else {
            self.0.iter().sum::<f64>() / self.0.len() as f64
        }
    }
}

impl std::ops::Index<usize> for ScoreVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Items listed best-first; `order()[0]` is the top item.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ranking {
    order: Vec<usize>,
}

impl Ranking {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &item in &order {
            if item >= n || seen[item] {
                return Err(Error::NotAPermutation(n));
            }
            seen[item] = true;
        }
        Ok(Self { order })
    }

    pub fn identity(n: usize) -> Self {
        Self { order: (0..n).collect() }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Inverse permutation: `positions()[item]` is the rank slot of `item`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (k, &item) in self.order.iter().enumerate() {
            pos[item] = k;
        }
        pos
    }

    pub fn into_order(self) -> Vec<usize> {
        self.order
    }
}

/// Sorts items by descending score, breaking exact ties by ascending index.
pub fn ranking_from_scores(x: &[f64]) -> Ranking {
    let mut order: Vec<usize> = (0..x.len()).collect();
    sort_best_first(x, &mut order);
    Ranking { order }
}

/// Fills `order` with the best-first ordering of `x`. Reuses the buffer.
pub(crate) fn ranking_into(x: &[f64], order: &mut Vec<usize>) {
    order.clear();
    order.extend(0..x.len());
    sort_best_first(x, order);
}

fn sort_best_first(x: &[f64], order: &mut [usize]) {
    // Stable sort on an index-ordered slice leaves ties in index order.
    order.sort_by(|&a, &b| x[b].partial_cmp(&x[a]).unwrap_or(Ordering::Equal));
}

/// A point of the feasible region for `truth`: consecutive items are exactly
/// `epsilon` apart, the bottom item sits at zero.
pub fn feasible_point(truth: &Ranking, epsilon: f64) -> ScoreVector {
    let mut s = vec![0.0; truth.len()];
    let mut level = 0.0;
    // accumulate upward so each adjacent residual is exactly zero
    for &item in truth.order().iter().rev() {
        s[item] = level;
        level += epsilon;
    }
    ScoreVector(s)
}

/// True iff every row of `sys` has residual `<= 0` at `x` (no tolerance).
///
/// Panics if `x` does not have `sys.n()` entries.
pub fn verify_feasible(x: &ScoreVector, sys: &ComparisonSystem) -> bool {
    assert_eq!(x.len(), sys.n(), "score vector length must match item count");
    sys.comparisons()
        .iter()
        .all(|c| c.residual_unchecked(x.as_slice(), sys.epsilon()) <= 0.0)
}
