//! Order statistics for trial summaries.

/// Linear-interpolation percentile of already sorted data, `q` in `[0, 1]`.
///
/// Position `q * (len - 1)` is interpolated between its neighbours, so the
/// median of an even count is the midpoint of the two middle values.
pub fn percentile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "percentile of empty data");
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (sorted[hi] - sorted[lo]) * frac
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quartiles {
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
}

impl Quartiles {
    pub fn of(values: &[f64]) -> Self {
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Self {
            q25: percentile_sorted(&sorted, 0.25),
            median: percentile_sorted(&sorted, 0.5),
            q75: percentile_sorted(&sorted, 0.75),
        }
    }
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_median_for_even_counts() {
        let q = Quartiles::of(&[4.0, 1.0, 3.0, 2.0]);
        assert_eq!(q.median, 2.5);
        assert_eq!(q.q25, 1.75);
        assert_eq!(q.q75, 3.25);
    }

    #[test]
    fn odd_counts_hit_elements() {
        let q = Quartiles::of(&[5.0, 1.0, 3.0, 2.0, 4.0]);
        assert_eq!((q.q25, q.median, q.q75), (2.0, 3.0, 4.0));
        assert_eq!(Quartiles::of(&[7.0]).median, 7.0);
    }

    #[test]
    fn twenty_trials() {
        let v: Vec<f64> = (1..=20).map(f64::from).collect();
        let q = Quartiles::of(&v);
        assert_eq!(q.median, 10.5);
        assert_eq!(q.q25, 5.75);
        assert_eq!(q.q75, 15.25);
    }
}
