//! Closed-form rates, bounds and sample counts for ranking from the full
//! comparison set of `n` items, where `N = n(n-1)/2`.
//!
//! The hitting-time bounds grow like `n^(n^2)`, so they are carried as
//! natural logarithms alongside a plain value when one is representable.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{invalid, Result};
use crate::sampling::{check_flip_probability, full_comparison_set};
use crate::system::Ranking;

/// Largest item count for the dense Laplacian eigensolve.
pub const MAX_CONNECTIVITY_ITEMS: usize = 200;

fn check_items(n: usize) -> Result<()> {
    if n < 2 {
        Err(invalid(format!("at least two items are required, got {n}")))
    } else {
        Ok(())
    }
}

/// Number of comparisons in the full set.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// A possibly astronomical positive quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    pub ln: f64,
    /// `exp(ln)` when finite.
    pub value: Option<f64>,
}

impl LogValue {
    fn from_parts(direct: f64, ln: f64) -> Self {
        let value = if direct.is_finite() && direct > 0.0 {
            Some(direct)
        } else {
            Some(ln.exp()).filter(|v| v.is_finite())
        };
        Self { ln, value }
    }
}

/// Expected squared-distance contraction per iteration under uniform row
/// sampling: `1 - n / (2m) = 1 - 1/(n-1)`.
pub fn contraction_rate(n: usize) -> Result<f64> {
    check_items(n)?;
    let m = pair_count(n) as f64;
    Ok(1.0 - n as f64 / (2.0 * m))
}

/// Upper bound `1/sqrt(n)` on the Hoffman constant of the full system.
pub fn hoffman_bound(n: usize) -> Result<f64> {
    check_items(n)?;
    Ok(1.0 / (n as f64).sqrt())
}

/// Smallest positive eigenvalue of `Q^T Q` for the full comparison matrix
/// `Q`, i.e. the algebraic connectivity of the complete graph.
pub fn complete_graph_connectivity(n: usize) -> Result<f64> {
    check_items(n)?;
    if n > MAX_CONNECTIVITY_ITEMS {
        return Err(invalid(format!("dense eigensolve limited to {MAX_CONNECTIVITY_ITEMS} items")));
    }
    let mut laplacian = DMatrix::<f64>::zeros(n, n);
    for c in full_comparison_set(&Ranking::identity(n))? {
        // outer product of the row (+1 at low, -1 at high)
        let (l, h) = (c.low(), c.high());
        laplacian[(l, l)] += 1.0;
        laplacian[(h, h)] += 1.0;
        laplacian[(l, h)] -= 1.0;
        laplacian[(h, l)] -= 1.0;
    }
    let eigen = SymmetricEigen::try_new(laplacian, f64::EPSILON, 10_000)
        .ok_or(crate::Error::NoConvergence { what: "Laplacian eigensolve", iterations: 10_000 })?;
    // the all-ones kernel gives one zero eigenvalue
    let cutoff = 1e-8 * n as f64;
    eigen
        .eigenvalues
        .iter()
        .copied()
        .filter(|&v| v > cutoff)
        .min_by(f64::total_cmp)
        .ok_or_else(|| invalid("Laplacian has no positive eigenvalue"))
}

/// `ln(n^N (n-1)^N / 2^N)`, the log of the reciprocal success probability of
/// one fixed N-step projection sequence.
fn ln_sequence_odds(n: usize) -> f64 {
    let big_n = pair_count(n) as f64;
    big_n * ((n as f64).ln() + ((n - 1) as f64).ln() - std::f64::consts::LN_2)
}

/// Bound `(N+1) n^N (n-1)^N / 2^N` on the expected hitting time.
pub fn expected_hit_bound(n: usize) -> Result<LogValue> {
    expected_hit_bound_noisy(n, 0.0)
}

/// Noisy bound `(N+1) n^N (n-1)^N / (2^N (1-p)^N)`; equals
/// [`expected_hit_bound`] at `p = 0`.
pub fn expected_hit_bound_noisy(n: usize, p: f64) -> Result<LogValue> {
    check_items(n)?;
    check_flip_probability(p)?;
    let big_n = pair_count(n) as i32;
    let ln = ((big_n + 1) as f64).ln() + ln_sequence_odds(n) - big_n as f64 * (1.0 - p).ln();
    let direct = (big_n + 1) as f64 * (n as f64).powi(big_n) * ((n - 1) as f64).powi(big_n)
        / 2f64.powi(big_n)
        / (1.0 - p).powi(big_n);
    Ok(LogValue::from_parts(direct, ln))
}

/// Bound on `P(tau >= k)`: `(1 - (1-p)^N 2^N / (n^N (n-1)^N))^floor(k/(N+1))`.
pub fn tail_bound(n: usize, k: u64, p: f64) -> Result<f64> {
    check_items(n)?;
    check_flip_probability(p)?;
    let big_n = pair_count(n) as u64;
    let blocks = k / (big_n + 1);
    if blocks == 0 {
        return Ok(1.0);
    }
    let ln_success = big_n as f64 * (1.0 - p).ln() - ln_sequence_odds(n);
    let success = ln_success.exp();
    if success >= 1.0 {
        return Ok(0.0);
    }
    Ok((blocks as f64 * (-success).ln_1p()).exp())
}

/// Expected with-replacement draws until all `n - 1` backbone comparisons
/// have appeared: `N * H(n-1)`.
pub fn coupon_with_replacement(n: usize) -> Result<f64> {
    check_items(n)?;
    let harmonic: f64 = (1..n).map(|i| 1.0 / i as f64).sum();
    Ok(pair_count(n) as f64 * harmonic)
}

/// Expected without-replacement draws until all backbone comparisons have
/// appeared: `(n-1)(n/2 - 1/2 + 1/n)`.
pub fn coupon_without_replacement(n: usize) -> Result<f64> {
    check_items(n)?;
    let nf = n as f64;
    Ok((nf - 1.0) * (nf / 2.0 - 0.5 + 1.0 / nf))
}

/// Expected 1-based position of the last zero in a uniformly shuffled
/// string of `ones` ones and `zeros` zeros: `ones + zeros - ones/(zeros+1)`.
pub fn last_zero_position(ones: usize, zeros: usize) -> Result<f64> {
    if zeros == 0 {
        return Err(invalid("at least one zero is required"));
    }
    Ok((ones + zeros) as f64 - ones as f64 / (zeros + 1) as f64)
}
