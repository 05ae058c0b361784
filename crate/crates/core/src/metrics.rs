//! Permutation distances and the distance to the feasible polyhedron.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::system::{ComparisonSystem, ScoreVector, Ranking};

fn same_len(a: &Ranking, b: &Ranking) -> Result<()> {
    if a.len() == b.len() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: a.len(), got: b.len() })
    }
}

/// Number of rank slots holding different items.
pub fn hamming(a: &Ranking, b: &Ranking) -> Result<usize> {
    same_len(a, b)?;
    Ok(a.order().iter().zip(b.order()).filter(|(x, y)| x != y).count())
}

/// Number of items displaced by `k` or more slots.
///
/// An item is "within k places" when its displacement is strictly below `k`,
/// so `k = 1` counts every moved item and equals [`hamming`].
pub fn k_distance(a: &Ranking, b: &Ranking, k: usize) -> Result<usize> {
    same_len(a, b)?;
    if k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    let pa = a.positions();
    let pb = b.positions();
    Ok(pa.iter().zip(&pb).filter(|(x, y)| x.abs_diff(**y) >= k).count())
}

/// Number of item pairs ordered differently (bubble-sort distance).
pub fn kendall_tau(a: &Ranking, b: &Ranking) -> Result<usize> {
    same_len(a, b)?;
    let pa = a.positions();
    let pb = b.positions();
    let n = pa.len();
    let mut discordant = 0;
    for i in 0..n {
        for j in i + 1..n {
            if (pa[i] < pa[j]) != (pb[i] < pb[j]) {
                discordant += 1;
            }
        }
    }
    Ok(discordant)
}

/// Minimum number of transpositions turning `a` into `b`: `n - cycles`.
pub fn cayley(a: &Ranking, b: &Ranking) -> Result<usize> {
    same_len(a, b)?;
    let pb = b.positions();
    let n = a.len();
    // slot k in `a` maps to the slot of the same item in `b`
    let sigma: Vec<usize> = a.order().iter().map(|&item| pb[item]).collect();
    let mut visited = vec![false; n];
    let mut cycles = 0;
    for start in 0..n {
        if visited[start] {
            continue;
        }
        cycles += 1;
        let mut k = start;
        while !visited[k] {
            visited[k] = true;
            k = sigma[k];
        }
    }
    Ok(n - cycles)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Hamming,
    KDistance(usize),
    KendallTau,
    Cayley,
}

impl Metric {
    pub fn distance(&self, a: &Ranking, b: &Ranking) -> Result<usize> {
        match *self {
            Metric::Hamming => hamming(a, b),
            Metric::KDistance(k) => k_distance(a, b, k),
            Metric::KendallTau => kendall_tau(a, b),
            Metric::Cayley => cayley(a, b),
        }
    }

    /// Largest value the metric can take on `n` items.
    pub fn max_value(&self, n: usize) -> usize {
        match self {
            Metric::Hamming | Metric::KDistance(_) => n,
            Metric::KendallTau => n * n.saturating_sub(1) / 2,
            Metric::Cayley => n.saturating_sub(1),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::Hamming => f.write_str("hamming"),
            Metric::KDistance(k) => write!(f, "k{k}"),
            Metric::KendallTau => f.write_str("kendall"),
            Metric::Cayley => f.write_str("cayley"),
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hamming" => Ok(Metric::Hamming),
            "kendall" => Ok(Metric::KendallTau),
            "cayley" => Ok(Metric::Cayley),
            _ => s
                .strip_prefix('k')
                .and_then(|k| k.parse().ok())
                .filter(|&k| k > 0)
                .map(Metric::KDistance)
                .ok_or_else(|| invalid(format!("unknown metric `{s}`"))),
        }
    }
}

/// Scales a distance into `[0, 1]` by the metric's maximum on `n` items.
pub fn normalize(d: usize, metric: Metric, n: usize) -> f64 {
    match metric.max_value(n) {
        0 => 0.0,
        max => d as f64 / max as f64,
    }
}

const DYKSTRA_MAX_SWEEPS: usize = 1_000_000;

/// Euclidean projection of `x` onto `{y : Qy <= -epsilon}` by Dykstra's
/// corrected cyclic projections.
///
/// Every correction term is a multiple of its row vector, so the method
/// keeps one scalar per row. Sweeps stop once a full pass moves the point
/// less than `tol / 10`.
pub fn project_onto_feasible(x: &ScoreVector, sys: &ComparisonSystem, tol: f64) -> Result<ScoreVector> {
    if x.len() != sys.n() {
        return Err(Error::DimensionMismatch { expected: sys.n(), got: x.len() });
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(invalid("tolerance must be positive"));
    }
    let eps = sys.epsilon();
    let rows = sys.comparisons();
    let mut y = x.as_slice().to_vec();
    let mut corrections = vec![0.0f64; rows.len()];
    let stop = tol / 10.0;
    for _ in 0..DYKSTRA_MAX_SWEEPS {
        let mut moved2 = 0.0;
        for (c, corr) in rows.iter().zip(corrections.iter_mut()) {
            let (l, h) = (c.low(), c.high());
            // y + corr*phi projected onto the halfspace leaves corr' * phi behind
            let updated = ((y[l] - y[h] + eps) / 2.0 + *corr).max(0.0);
            let delta = *corr - updated;
            if delta != 0.0 {
                y[l] += delta;
                y[h] -= delta;
                moved2 += 2.0 * delta * delta;
                *corr = updated;
            }
        }
        if moved2.sqrt() < stop {
            return ScoreVector::new(y);
        }
    }
    Err(Error::NoConvergence { what: "Dykstra projection", iterations: DYKSTRA_MAX_SWEEPS })
}

/// Distance from `x` to the feasible region of `sys`, accurate to about `tol`.
pub fn distance_to_feasible(x: &ScoreVector, sys: &ComparisonSystem, tol: f64) -> Result<f64> {
    let p = project_onto_feasible(x, sys, tol)?;
    Ok(x.as_slice()
        .iter()
        .zip(p.as_slice())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{full_comparison_set, RandomStream};
    use crate::system::{verify_feasible, Comparison};
    use approx::assert_abs_diff_eq;

    fn r(order: &[usize]) -> Ranking {
        Ranking::new(order.to_vec()).unwrap()
    }

    /// All permutations of 0..n by Heap's algorithm.
    fn permutations(n: usize) -> Vec<Ranking> {
        fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Ranking>) {
            if k <= 1 {
                out.push(Ranking::new(a.clone()).unwrap());
                return;
            }
            for i in 0..k {
                heap(k - 1, a, out);
                if k.is_multiple_of(2) {
                    a.swap(i, k - 1);
                } else {
                    a.swap(0, k - 1);
                }
            }
        }
        let mut out = Vec::new();
        heap(n, &mut (0..n).collect(), &mut out);
        out
    }

    /// Fewest adjacent swaps from `a` to `b`, by breadth-first search.
    fn bfs_distance(a: &Ranking, b: &Ranking, adjacent_only: bool) -> usize {
        use std::collections::{HashSet, VecDeque};
        let n = a.len();
        let mut seen = HashSet::new();
        let mut queue = VecDeque::from([(a.order().to_vec(), 0usize)]);
        seen.insert(a.order().to_vec());
        while let Some((cur, d)) = queue.pop_front() {
            if cur == b.order() {
                return d;
            }
            for i in 0..n {
                for j in i + 1..n {
                    if adjacent_only && j != i + 1 {
                        continue;
                    }
                    let mut next = cur.clone();
                    next.swap(i, j);
                    if seen.insert(next.clone()) {
                        queue.push_back((next, d + 1));
                    }
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn hamming_examples() {
        let id = r(&[0, 1, 2, 3]);
        assert_eq!(hamming(&id, &id).unwrap(), 0);
        assert_eq!(hamming(&id, &r(&[1, 0, 2, 3])).unwrap(), 2);
        assert_eq!(hamming(&id, &r(&[3, 2, 1, 0])).unwrap(), 4);
        assert!(hamming(&id, &r(&[0, 1])).is_err());
    }

    #[test]
    fn k_distance_examples() {
        let id = r(&[0, 1, 2, 3]);
        let swap = r(&[1, 0, 2, 3]);
        assert_eq!(k_distance(&id, &id, 3).unwrap(), 0);
        assert_eq!(k_distance(&id, &swap, 1).unwrap(), 2);
        assert_eq!(k_distance(&id, &swap, 2).unwrap(), 0);
        assert_eq!(k_distance(&id, &r(&[3, 2, 1, 0]), 3).unwrap(), 2);
        assert!(k_distance(&id, &swap, 0).is_err());
    }

    #[test]
    fn kendall_and_cayley_examples() {
        let id = r(&[0, 1, 2, 3]);
        let swap = r(&[1, 0, 2, 3]);
        let rev = r(&[3, 2, 1, 0]);
        assert_eq!(kendall_tau(&id, &id).unwrap(), 0);
        assert_eq!(kendall_tau(&id, &swap).unwrap(), 1);
        assert_eq!(kendall_tau(&id, &rev).unwrap(), 6);
        assert_eq!(cayley(&id, &id).unwrap(), 0);
        assert_eq!(cayley(&id, &swap).unwrap(), 1);
        assert_eq!(cayley(&id, &rev).unwrap(), 2);
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize(4, Metric::Hamming, 4), 1.0);
        assert_eq!(normalize(6, Metric::KendallTau, 4), 1.0);
        assert_abs_diff_eq!(normalize(2, Metric::Cayley, 4), 2.0 / 3.0);
        assert_eq!(normalize(3, Metric::KDistance(5), 10), 0.3);
        assert_eq!(normalize(0, Metric::Cayley, 1), 0.0);
    }

    #[test]
    fn metric_names_round_trip() {
        for m in [Metric::Hamming, Metric::KDistance(5), Metric::KendallTau, Metric::Cayley] {
            assert_eq!(m.to_string().parse::<Metric>().unwrap(), m);
        }
        assert!("k0".parse::<Metric>().is_err());
        assert!("spearman".parse::<Metric>().is_err());
    }

    #[test]
    fn exhaustive_metric_axioms() {
        for n in 1..=5 {
            let perms = permutations(n);
            let relabel = perms[perms.len() / 2].clone();
            for a in &perms {
                for b in &perms {
                    let h = hamming(a, b).unwrap();
                    let kt = kendall_tau(a, b).unwrap();
                    let cy = cayley(a, b).unwrap();
                    assert_ne!(h, 1);
                    assert!(cy <= kt);
                    assert_eq!(k_distance(a, b, 1).unwrap(), h);
                    for k in 1..n {
                        assert!(k_distance(a, b, k + 1).unwrap() <= k_distance(a, b, k).unwrap());
                    }
                    for m in [Metric::Hamming, Metric::KDistance(2), Metric::KendallTau, Metric::Cayley] {
                        let d = m.distance(a, b).unwrap();
                        assert_eq!(d, m.distance(b, a).unwrap());
                        if a == b {
                            assert_eq!(d, 0);
                        } else if !matches!(m, Metric::KDistance(_)) {
                            // k-distance with k > 1 ignores small displacements
                            assert!(d > 0);
                        }
                        assert!(d <= m.max_value(n));
                        // relabel items by a common permutation
                        let map = relabel.order();
                        let ra = r(&a.order().iter().map(|&i| map[i]).collect::<Vec<_>>());
                        let rb = r(&b.order().iter().map(|&i| map[i]).collect::<Vec<_>>());
                        assert_eq!(m.distance(&ra, &rb).unwrap(), d);
                    }
                }
            }
        }
    }

    #[test]
    fn kendall_and_cayley_match_search() {
        let perms = permutations(4);
        let id = &perms[0];
        for b in &perms {
            assert_eq!(kendall_tau(id, b).unwrap(), bfs_distance(id, b, true));
            assert_eq!(cayley(id, b).unwrap(), bfs_distance(id, b, false));
        }
    }

    fn full_system(truth: &Ranking, eps: f64) -> ComparisonSystem {
        ComparisonSystem::new(truth.len(), eps, full_comparison_set(truth).unwrap()).unwrap()
    }

    /// Projection onto the full system for `truth` by pool-adjacent-violators:
    /// substituting z_k = x[order[k]] + k*eps turns the chain constraints into
    /// z non-increasing.
    fn chain_projection(x: &[f64], truth: &Ranking, eps: f64) -> Vec<f64> {
        let order = truth.order();
        let z: Vec<f64> = order.iter().enumerate().map(|(k, &i)| x[i] + k as f64 * eps).collect();
        let mut blocks: Vec<(f64, usize)> = Vec::new();
        for &v in &z {
            blocks.push((v, 1));
            while blocks.len() > 1 {
                let (m2, c2) = blocks[blocks.len() - 1];
                let (m1, c1) = blocks[blocks.len() - 2];
                if m1 >= m2 {
                    break;
                }
                blocks.truncate(blocks.len() - 2);
                blocks.push(((m1 * c1 as f64 + m2 * c2 as f64) / (c1 + c2) as f64, c1 + c2));
            }
        }
        let fitted: Vec<f64> = blocks.iter().flat_map(|&(m, c)| std::iter::repeat_n(m, c)).collect();
        let mut out = vec![0.0; x.len()];
        for (k, &i) in order.iter().enumerate() {
            out[i] = fitted[k] - k as f64 * eps;
        }
        out
    }

    #[test]
    fn single_halfspace_distance() {
        let sys = ComparisonSystem::new(2, 1.0, vec![Comparison::new(0, 1).unwrap()]).unwrap();
        let d = distance_to_feasible(&ScoreVector::zeros(2), &sys, 1e-10).unwrap();
        assert_abs_diff_eq!(d, 1.0 / 2f64.sqrt(), epsilon = 1e-10);
    }

    #[test]
    fn feasible_points_have_zero_distance() {
        let truth = r(&[2, 0, 3, 1]);
        let sys = full_system(&truth, 0.1);
        let s = crate::system::feasible_point(&truth, 0.1);
        assert!(verify_feasible(&s, &sys));
        assert_eq!(distance_to_feasible(&s, &sys, 1e-9).unwrap(), 0.0);
    }

    #[test]
    fn dykstra_matches_chain_projection() {
        let mut s = RandomStream::new(21);
        for n in [3, 4, 6, 10] {
            for _ in 0..20 {
                let truth = s.ranking(n);
                let sys = full_system(&truth, 0.05);
                let x: Vec<f64> = (0..n).map(|_| s.unit()).collect();
                let expected = chain_projection(&x, &truth, 0.05);
                let got = project_onto_feasible(&ScoreVector::new(x).unwrap(), &sys, 1e-10).unwrap();
                for (a, b) in got.as_slice().iter().zip(&expected) {
                    assert_abs_diff_eq!(*a, *b, epsilon = 1e-7);
                }
            }
        }
    }

    /// Brute-force projection for n = 4: the projection lies on the face
    /// cut out by some set of active rows, so try every subset, solve the
    /// equality-constrained least-squares problem, keep feasible candidates.
    fn active_set_oracle(x: &[f64], sys: &ComparisonSystem) -> f64 {
        use nalgebra::{DMatrix, DVector};
        let rows = sys.comparisons();
        let n = sys.n();
        let mut best = f64::INFINITY;
        for mask in 0u32..(1 << rows.len()) {
            let active: Vec<_> = (0..rows.len()).filter(|i| mask >> i & 1 == 1).collect();
            let k = active.len();
            // KKT system [I A^T; A 0] [y; mu] = [x; -eps]
            let mut m = DMatrix::<f64>::zeros(n + k, n + k);
            let mut rhs = DVector::<f64>::zeros(n + k);
            for i in 0..n {
                m[(i, i)] = 1.0;
                rhs[i] = x[i];
            }
            for (a, &ri) in active.iter().enumerate() {
                let c = rows[ri];
                m[(n + a, c.low())] = 1.0;
                m[(n + a, c.high())] = -1.0;
                m[(c.low(), n + a)] = 1.0;
                m[(c.high(), n + a)] = -1.0;
                rhs[n + a] = -sys.epsilon();
            }
            let Some(sol) = m.clone().lu().solve(&rhs) else { continue };
            if !(m * &sol - &rhs).iter().all(|v| v.abs() < 1e-9) {
                continue;
            }
            let y: Vec<f64> = sol.iter().take(n).copied().collect();
            if sys.max_residual(&y) <= 1e-12 {
                let d = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                best = best.min(d);
            }
        }
        best
    }

    #[test]
    fn dykstra_matches_active_set_oracle() {
        let mut s = RandomStream::new(5);
        for _ in 0..25 {
            let truth = s.ranking(4);
            let sys = full_system(&truth, 0.2);
            let x: Vec<f64> = (0..4).map(|_| 2.0 * s.unit() - 1.0).collect();
            let expected = active_set_oracle(&x, &sys);
            let got = distance_to_feasible(&ScoreVector::new(x).unwrap(), &sys, 1e-8).unwrap();
            assert_abs_diff_eq!(got, expected, epsilon = 1e-4);
        }
    }

    #[test]
    fn partial_systems_project_feasibly() {
        let mut s = RandomStream::new(17);
        let truth = s.ranking(8);
        let full = full_comparison_set(&truth).unwrap();
        let sub = crate::sampling::subset_sample(&full, 0.4, &mut s).unwrap();
        let sys = ComparisonSystem::new(8, 0.1, sub).unwrap();
        let x: Vec<f64> = (0..8).map(|_| s.unit()).collect();
        let p = project_onto_feasible(&ScoreVector::new(x).unwrap(), &sys, 1e-10).unwrap();
        assert!(sys.max_residual(p.as_slice()) <= 1e-9);
    }

    #[test]
    fn projection_rejects_bad_input() {
        let sys = ComparisonSystem::new(3, 0.1, vec![]).unwrap();
        assert!(distance_to_feasible(&ScoreVector::zeros(2), &sys, 1e-6).is_err());
        assert!(distance_to_feasible(&ScoreVector::zeros(3), &sys, 0.0).is_err());
        assert_eq!(distance_to_feasible(&ScoreVector::zeros(3), &sys, 1e-6).unwrap(), 0.0);
    }
}
