//! Execution of independent work items, in input order.
//!
//! With the `parallel` feature (the default) the items run on the rayon
//! thread pool; the indexed collect keeps results in input order, so the
//! output is identical to the sequential fallback.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `items`, preserving input order in the output.
pub fn ordered_map<I, O, F>(items: Vec<I>, f: F) -> Vec<O>
where
    I: Send,
    O: Send,
    F: Fn(I) -> O + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}

/// Sequential reference path, always available for comparison.
pub fn ordered_map_serial<I, O, F>(items: Vec<I>, f: F) -> Vec<O>
where
    F: Fn(I) -> O,
{
    items.into_iter().map(f).collect()
}
