//! Sequential or data-parallel execution of index-parallel work.
//!
//! With the `parallel` feature disabled, [`Execution::Parallel`] falls back
//! to the sequential path. Results never depend on the choice: every
//! caller combines per-index values in index order or with exact
//! arithmetic.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether work actually fans out across threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// `(0..count).map(f).collect()`, preserving index order.
pub fn map_indices<T, F>(exec: Execution, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..count).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..count).map(f).collect()
}

/// Fold `range` into accumulators and merge them. `merge` must be
/// associative and commutative for the result to be independent of the
/// split.
pub fn fold_range<A, I, F, M>(exec: Execution, range: std::ops::Range<usize>, init: I, fold: F, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(A, usize) -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return range.into_par_iter().fold(&init, &fold).reduce(&init, &merge);
    }
    let _ = (exec, &merge);
    range.fold(init(), fold)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_paths_agree() {
        for exec in [Execution::Sequential, Execution::Parallel] {
            assert_eq!(map_indices(exec, 5, |i| i * i), vec![0, 1, 4, 9, 16]);
            assert_eq!(fold_range(exec, 0..101, || 0u64, |a, i| a + i as u64, |a, b| a + b), 5050);
        }
    }
}
