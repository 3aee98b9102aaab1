//! Data-parallel helpers with a sequential fallback.
//!
//! Every hot loop in the crate funnels through [`map_range`], so the
//! `parallel` feature (on by default) switches the whole crate between
//! rayon and plain iterators. [`Execution`] also lets callers pick the
//! sequential path at runtime, which is what the benches compare.

use std::ops::Range;

/// How a data-parallel loop is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, and falls back to
    /// sequential execution otherwise.
    #[default]
    Parallel,
}

impl Execution {
    /// True when this mode will actually fan out over threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Applies `f` to every index of `range`, preserving order in the output.
pub fn map_range<R, F>(exec: Execution, range: Range<usize>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return range.into_par_iter().map(f).collect();
    }
    let _ = exec;
    range.map(f).collect()
}

/// Number of indices in `range` satisfying `pred`.
pub fn count_range<F>(exec: Execution, range: Range<usize>, pred: F) -> usize
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return range.into_par_iter().filter(|&i| pred(i)).count();
    }
    let _ = exec;
    range.filter(|&i| pred(i)).count()
}

/// Applies `f` to every element of `items`, preserving order in the output.
pub fn map_slice<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_range(exec, 0..items.len(), |i| f(&items[i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree_and_keep_order() {
        let seq = map_range(Execution::Sequential, 0..1000, |i| i * i);
        let par = map_range(Execution::Parallel, 0..1000, |i| i * i);
        assert_eq!(seq, par);
        assert_eq!(seq[31], 961);
        assert_eq!(count_range(Execution::Sequential, 0..100, |i| i % 3 == 0), 34);
        assert_eq!(count_range(Execution::Parallel, 0..100, |i| i % 3 == 0), 34);
    }

    #[test]
    fn sequential_is_never_parallel() {
        assert!(!Execution::Sequential.is_parallel());
        assert_eq!(Execution::Parallel.is_parallel(), cfg!(feature = "parallel"));
    }
}
