//! Trial-level parallelism.
//!
//! With the `parallel` feature (on by default) independent trials run on the
//! rayon pool. Without it, or with [`Execution::Sequential`], they run in
//! order on the calling thread. Results always come back in index order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// `f(0), f(1), ..., f(count - 1)`, collected in order.
    pub fn map<T, F>(self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..count).into_par_iter().map(f).collect(),
            _ => (0..count).map(f).collect(),
        }
    }

    /// Like [`map`](Self::map) but stops at the first error (lowest index
    /// among those observed).
    pub fn try_map<T, E, F>(self, count: usize, f: F) -> Result<Vec<T>, E>
    where
        T: Send,
        E: Send,
        F: Fn(usize) -> Result<T, E> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..count).into_par_iter().map(f).collect(),
            _ => (0..count).map(f).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree() {
        let f = |i: usize| i * i + 1;
        assert_eq!(Execution::Parallel.map(100, f), Execution::Sequential.map(100, f));
    }

    #[test]
    fn errors_propagate() {
        let r: Result<Vec<usize>, String> =
            Execution::Parallel.try_map(10, |i| if i == 7 { Err(format!("bad {i}")) } else { Ok(i) });
        assert_eq!(r.unwrap_err(), "bad 7");
    }
}
