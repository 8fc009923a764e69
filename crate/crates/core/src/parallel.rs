//! Index-space execution helpers shared by the checkers.
//!
//! Every sweep in the crate (basis triples, basis cochains, sample vectors,
//! representation candidates) is a map over `0..len`. Results are always
//! reported by index, so sequential and parallel runs produce identical
//! reports. Without the `parallel` feature both strategies run sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

/// Lowest index `i` for which `f(i)` is `Some`, with its value.
pub fn find_first<T, F>(len: usize, strategy: Strategy, f: F) -> Option<(usize, T)>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    match strategy {
        #[cfg(feature = "parallel")]
        Strategy::Parallel => (0..len).into_par_iter().find_map_first(|i| f(i).map(|t| (i, t))),
        _ => (0..len).find_map(|i| f(i).map(|t| (i, t))),
    }
}

/// `f` applied to every index, in index order.
pub fn map_indexed<T, F>(len: usize, strategy: Strategy, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match strategy {
        #[cfg(feature = "parallel")]
        Strategy::Parallel => (0..len).into_par_iter().map(f).collect(),
        _ => (0..len).map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_hit_is_lowest_index() {
        for strategy in [Strategy::Sequential, Strategy::Parallel] {
            let hit = find_first(10_000, strategy, |i| (i % 997 == 996).then_some(i * 2));
            assert_eq!(hit, Some((996, 1992)));
            assert_eq!(find_first(100, strategy, |_| None::<()>), None);
        }
    }

    #[test]
    fn map_preserves_order() {
        let a = map_indexed(500, Strategy::Parallel, |i| i * i);
        let b = map_indexed(500, Strategy::Sequential, |i| i * i);
        assert_eq!(a, b);
    }
}
