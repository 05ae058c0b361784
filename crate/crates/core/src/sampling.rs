//! Comparison pools, sampling protocols and the flip-noise model.
//!
//! All randomness goes through [`RandomStream`], a ChaCha8 generator seeded
//! from a `u64`. ChaCha8 output is specified independently of platform, so
//! a seed replays the same stream everywhere.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::system::{Comparison, Ranking};

#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self { seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Fresh stream for trial `index`, seeded with `seed + index`.
    pub fn for_trial(base_seed: u64, index: usize) -> Self {
        Self::new(base_seed.wrapping_add(index as u64))
    }

    /// Uniform index in `0..n`. `n` must be positive.
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.unit() < p
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        items.shuffle(&mut self.rng);
    }

    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut order: Vec<usize> = (0..n).collect();
        self.shuffle(&mut order);
        order
    }

    /// Uniformly random ranking of `n` items.
    pub fn ranking(&mut self, n: usize) -> Ranking {
        Ranking::new(self.permutation(n)).expect("shuffled identity is a permutation")
    }

    /// `k` distinct indices from `0..n`, uniformly without replacement.
    pub fn sample_indices(&mut self, n: usize, k: usize) -> Vec<usize> {
        rand::seq::index::sample(&mut self.rng, n, k).into_vec()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SamplerMode {
    WithReplacement,
    WithoutReplacement,
    /// Backbone first, then the rest.
    Friendly,
    /// One backbone comparison held back until the very end.
    Adversarial,
}

impl SamplerMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::WithReplacement => "with-replacement",
            Self::WithoutReplacement => "without-replacement",
            Self::Friendly => "friendly",
            Self::Adversarial => "adversarial",
        }
    }

    /// Friendly and adversarial pools are replayed in their given order.
    pub fn is_ordered(&self) -> bool {
        matches!(self, Self::Friendly | Self::Adversarial)
    }
}

impl fmt::Display for SamplerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SamplerMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "with-replacement" => Ok(Self::WithReplacement),
            "without-replacement" => Ok(Self::WithoutReplacement),
            "friendly" => Ok(Self::Friendly),
            "adversarial" => Ok(Self::Adversarial),
            other => Err(invalid(format!("unknown sampling mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerSpec {
    mode: SamplerMode,
    subset_fraction: f64,
    flip_probability: f64,
}

impl SamplerSpec {
    pub fn new(mode: SamplerMode, subset_fraction: f64, flip_probability: f64) -> Result<Self> {
        check_fraction(subset_fraction)?;
        check_flip_probability(flip_probability)?;
        Ok(Self { mode, subset_fraction, flip_probability })
    }

    pub fn mode(&self) -> SamplerMode {
        self.mode
    }

    pub fn subset_fraction(&self) -> f64 {
        self.subset_fraction
    }

    pub fn flip_probability(&self) -> f64 {
        self.flip_probability
    }
}

impl Default for SamplerSpec {
    fn default() -> Self {
        Self { mode: SamplerMode::WithReplacement, subset_fraction: 1.0, flip_probability: 0.0 }
    }
}

pub(crate) fn check_fraction(q: f64) -> Result<()> {
    if q > 0.0 && q <= 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("subset fraction must lie in (0, 1], got {q}")))
    }
}

pub(crate) fn check_flip_probability(p: f64) -> Result<()> {
    if (0.0..0.5).contains(&p) {
        Ok(())
    } else {
        Err(invalid(format!("flip probability must lie in [0, 1/2), got {p}")))
    }
}

fn check_items(truth: &Ranking) -> Result<()> {
    if truth.len() < 2 {
        return Err(invalid("at least two items are required"));
    }
    Ok(())
}

/// All `n(n-1)/2` comparisons consistent with `truth`, grouped by the
/// higher-ranked item.
pub fn full_comparison_set(truth: &Ranking) -> Result<Vec<Comparison>> {
    check_items(truth)?;
    let order = truth.order();
    let n = order.len();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for upper in 0..n {
        for lower in upper + 1..n {
            out.push(Comparison::new(order[lower], order[upper])?);
        }
    }
    Ok(out)
}

/// Number of comparisons kept by [`subset_sample`]: `floor(q * m)`.
///
/// A relative guard of `1e-9` keeps products such as `0.29 * 100` from
/// rounding down one short.
pub fn subset_size(q: f64, m: usize) -> usize {
    let exact = q * m as f64;
    ((exact + exact.abs() * 1e-9).floor() as usize).min(m)
}

/// `floor(q * m)` distinct comparisons drawn uniformly without replacement.
pub fn subset_sample(full: &[Comparison], q: f64, stream: &mut RandomStream) -> Result<Vec<Comparison>> {
    check_fraction(q)?;
    let k = subset_size(q, full.len());
    if k == 0 {
        return Err(Error::EmptyPool);
    }
    let mut picked = stream.sample_indices(full.len(), k);
    // index order keeps the subset independent of the sampler's draw order
    picked.sort_unstable();
    Ok(picked.into_iter().map(|i| full[i]).collect())
}

/// Reverses `c` with probability `p`, independently per call.
pub fn apply_noise(c: Comparison, p: f64, stream: &mut RandomStream) -> Comparison {
    if p > 0.0 && stream.bernoulli(p) {
        c.flipped()
    } else {
        c
    }
}

/// The `n - 1` comparisons between adjacently ranked items, top pair first.
pub fn backbone(truth: &Ranking) -> Result<Vec<Comparison>> {
    check_items(truth)?;
    truth
        .order()
        .windows(2)
        .map(|w| Comparison::new(w[1], w[0]))
        .collect()
}

/// Full comparison list in the order a friendly or adversarial provider
/// would reveal it.
pub fn ordered_stream(mode: SamplerMode, truth: &Ranking, stream: &mut RandomStream) -> Result<Vec<Comparison>> {
    let spine = backbone(truth)?;
    let pos = truth.positions();
    let is_backbone = |c: &Comparison| pos[c.low()] == pos[c.high()] + 1;
    let rest: Vec<Comparison> = full_comparison_set(truth)?.into_iter().filter(|c| !is_backbone(c)).collect();
    match mode {
        SamplerMode::Friendly => {
            let mut tail = rest;
            stream.shuffle(&mut tail);
            let mut out = spine;
            out.extend(tail);
            Ok(out)
        }
        SamplerMode::Adversarial => {
            let mut spine = spine;
            let held = spine.swap_remove(stream.index(spine.len()));
            let mut out = rest;
            out.extend(spine);
            stream.shuffle(&mut out);
            out.push(held);
            Ok(out)
        }
        other => Err(invalid(format!("`{other}` is not an ordered provider mode"))),
    }
}

/// Draws comparisons from a pool according to a [`SamplerSpec`], applying
/// flip noise at draw time.
#[derive(Debug, Clone)]
pub struct Sampler {
    pool: Vec<Comparison>,
    spec: SamplerSpec,
    stream: RandomStream,
    // without-replacement: pool indices, the first `emitted` already used
    slots: Vec<usize>,
    emitted: usize,
}

impl Sampler {
    pub fn new(pool: Vec<Comparison>, spec: SamplerSpec, stream: RandomStream) -> Result<Self> {
        if pool.is_empty() {
            return Err(Error::EmptyPool);
        }
        let slots = match spec.mode {
            SamplerMode::WithoutReplacement => (0..pool.len()).collect(),
            _ => Vec::new(),
        };
        Ok(Self { pool, spec, stream, slots, emitted: 0 })
    }

    pub fn pool(&self) -> &[Comparison] {
        &self.pool
    }

    pub fn spec(&self) -> &SamplerSpec {
        &self.spec
    }

    /// Next comparison, or `None` once a finite mode has emitted every element.
    pub fn draw(&mut self) -> Option<Comparison> {
        let c = match self.spec.mode {
            SamplerMode::WithReplacement => self.pool[self.stream.index(self.pool.len())],
            SamplerMode::WithoutReplacement => {
                let m = self.pool.len();
                if self.emitted == m {
                    return None;
                }
                // one Fisher-Yates step per draw
                let j = self.emitted + self.stream.index(m - self.emitted);
                self.slots.swap(self.emitted, j);
                let c = self.pool[self.slots[self.emitted]];
                self.emitted += 1;
                c
            }
            SamplerMode::Friendly | SamplerMode::Adversarial => {
                let c = *self.pool.get(self.emitted)?;
                self.emitted += 1;
                c
            }
        };
        Some(apply_noise(c, self.spec.flip_probability, &mut self.stream))
    }
}

impl Iterator for Sampler {
    type Item = Comparison;

    fn next(&mut self) -> Option<Comparison> {
        self.draw()
    }
}
