//! Execution helpers for the data-parallel core.
//!
//! With the `parallel` feature (the default) the hot loops fan out over
//! rayon; without it the same closures run on plain sequential iterators.
//! Every call site is an order-preserving map or an exact integer merge, so
//! results are bit-identical whichever path is compiled in.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use std::collections::HashMap;
use std::hash::Hash;

/// Maps `f` over `items`, preserving order.
pub(crate) fn map_vec<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Maps `f` over `0..n`, preserving order.
pub(crate) fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Counts keys produced per item, merged by integer addition (order-free).
pub(crate) fn count_keys<T, K, F>(items: &[T], f: F) -> HashMap<K, u32>
where
    T: Sync,
    K: Eq + Hash + Send,
    F: Fn(&T) -> Vec<K> + Sync + Send,
{
    fn absorb<K: Eq + Hash>(mut acc: HashMap<K, u32>, keys: Vec<K>) -> HashMap<K, u32> {
        for k in keys {
            *acc.entry(k).or_insert(0) += 1;
        }
        acc
    }

    #[cfg(feature = "parallel")]
    {
        items
            .par_iter()
            .map(f)
            .fold(HashMap::new, absorb)
            .reduce(HashMap::new, |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_insert(0) += v;
                }
                a
            })
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).fold(HashMap::new(), absorb)
    }
}
