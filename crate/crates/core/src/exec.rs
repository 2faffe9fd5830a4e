//! Row-parallel execution helpers.
//!
//! Every data-parallel loop in the crate runs over radial rows of a field.
//! Maps are per-site and therefore order independent. Reductions compute one
//! partial per row (sequential over `θ`) and then fold the partials in row
//! order on the calling thread, so scalars are bit-identical for any thread
//! count and for both execution modes.

use crate::C64;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How row loops are scheduled.
///
/// `Parallel` falls back to sequential execution when the crate is built
/// without the `parallel` feature.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Visit matching rows of the two spinor components: `f(j, minus_row, plus_row)`.
pub(crate) fn for_each_row_pair<F>(
    exec: Execution,
    minus: &mut [C64],
    plus: &mut [C64],
    row_len: usize,
    f: F,
) where
    F: Fn(usize, &mut [C64], &mut [C64]) + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => minus
            .par_chunks_mut(row_len)
            .zip(plus.par_chunks_mut(row_len))
            .enumerate()
            .for_each(|(j, (m, p))| f(j, m, p)),
        _ => minus
            .chunks_mut(row_len)
            .zip(plus.chunks_mut(row_len))
            .enumerate()
            .for_each(|(j, (m, p))| f(j, m, p)),
    }
}

/// Visit rows of a single buffer mutably: `f(row_index, row)`.
pub(crate) fn for_each_row<F>(exec: Execution, data: &mut [C64], row_len: usize, f: F)
where
    F: Fn(usize, &mut [C64]) + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => data
            .par_chunks_mut(row_len)
            .enumerate()
            .for_each(|(j, r)| f(j, r)),
        _ => data
            .chunks_mut(row_len)
            .enumerate()
            .for_each(|(j, r)| f(j, r)),
    }
}

/// Map every row index in `0..rows` to a value, returned in row order.
pub(crate) fn map_rows<T, F>(exec: Execution, rows: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..rows).into_par_iter().map(f).collect(),
        _ => (0..rows).map(f).collect(),
    }
}
