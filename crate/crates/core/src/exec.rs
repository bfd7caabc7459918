//! Data-parallel helpers. With the `parallel` feature the work is spread over
//! the rayon pool; without it every mode runs on the calling thread.

use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Maps `f` over `items`, keeping the input order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }

    /// Maps `f` over `0..n`, keeping the order.
    pub fn map_range<R, F>(self, range: Range<u64>, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(u64) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                range.into_par_iter().map(f).collect()
            }
            _ => range.map(f).collect(),
        }
    }

    /// Maps `f` over `range` and combines the results with `reduce`, which
    /// must be associative with `identity` as unit.
    pub fn map_reduce<R, F, G, I>(self, range: Range<u64>, identity: I, f: F, reduce: G) -> R
    where
        R: Send,
        F: Fn(u64) -> R + Sync + Send,
        G: Fn(R, R) -> R + Sync + Send,
        I: Fn() -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                range.into_par_iter().map(f).reduce(identity, reduce)
            }
            _ => range.map(f).fold(identity(), reduce),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let a = Exec::Sequential.map(&xs, |x| x * x);
        let b = Exec::Parallel.map(&xs, |x| x * x);
        assert_eq!(a, b);
        let s = Exec::Sequential.map_reduce(0..1000, || 0u64, |x| x, |a, b| a + b);
        let p = Exec::Parallel.map_reduce(0..1000, || 0u64, |x| x, |a, b| a + b);
        assert_eq!((s, p), (499_500, 499_500));
        assert_eq!(Exec::Parallel.map_range(0..4, |i| i + 1), vec![1, 2, 3, 4]);
    }
}
