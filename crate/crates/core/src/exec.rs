//! Row-level execution strategy for the full-frame engine.
//!
//! With the `parallel` feature, [`Parallelism::Parallel`] spreads rows over
//! the rayon pool. Without it both variants run sequentially. Each row is
//! computed by the same closure either way, so results are bit-identical.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    Sequential,
    #[default]
    Parallel,
}

impl Parallelism {
    /// Whether rows will actually be spread across threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Parallelism::Parallel
    }
}

/// Calls `f(y, row)` for every `width`-sized row of `out`.
pub fn for_each_row<T, F>(out: &mut [T], width: usize, par: Parallelism, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if par.is_parallel() {
        out.par_chunks_mut(width)
            .enumerate()
            .for_each(|(y, row)| f(y, row));
        return;
    }
    let _ = par;
    out.chunks_mut(width)
        .enumerate()
        .for_each(|(y, row)| f(y, row));
}

/// Elementwise map over a slice.
pub fn map_slice<T, U, F>(input: &[T], par: Parallelism, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if par.is_parallel() {
        return input.par_iter().map(f).collect();
    }
    let _ = par;
    input.iter().map(f).collect()
}
