//! Index-space map/reduce used by the checkers, the oracle and the simulator.
//!
//! With the `parallel` feature the work is spread over the rayon pool;
//! without it the same functions run sequentially. Both paths produce
//! identical results: reductions pick the maximum value and break ties on
//! the lowest index, and maps preserve index order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

fn pick(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    if a.0 > b.0 || (a.0 == b.0 && a.1 < b.1) {
        a
    } else {
        b
    }
}

/// Largest `f(i)` over `0..n`, skipping `None`, with ties going to the lowest
/// index.
pub fn argmax<F>(n: usize, f: F) -> Option<(f64, usize)>
where
    F: Fn(usize) -> Option<f64> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n)
            .into_par_iter()
            .with_min_len(64)
            .filter_map(|i| f(i).map(|v| (v, i)))
            .reduce_with(pick)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).filter_map(|i| f(i).map(|v| (v, i))).reduce(pick)
    }
}

/// `[f(0), …, f(n-1)]`
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
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

/// Order-preserving map over a slice.
pub fn map_slice<A, T, F>(items: &[A], f: F) -> Vec<T>
where
    A: Sync,
    T: Send,
    F: Fn(&A) -> T + Sync + Send,
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmax_ties_go_to_lowest_index() {
        let v = [1.0, 3.0, 2.0, 3.0, 3.0];
        assert_eq!(argmax(v.len(), |i| Some(v[i])), Some((3.0, 1)));
        let big: Vec<f64> = (0..10_000).map(|i| (i % 7) as f64).collect();
        assert_eq!(argmax(big.len(), |i| Some(big[i])), Some((6.0, 6)));
    }

    #[test]
    fn argmax_skips_excluded() {
        assert_eq!(
            argmax(4, |i| if i == 2 { None } else { Some(i as f64) }),
            Some((3.0, 3))
        );
        assert_eq!(argmax(3, |_| None), None);
        assert_eq!(argmax(0, |i| Some(i as f64)), None);
    }

    #[test]
    fn maps_keep_order() {
        assert_eq!(map_indexed(1000, |i| i * 2)[999], 1998);
        let xs: Vec<u32> = (0..500).collect();
        assert_eq!(map_slice(&xs, |x| x + 1), (1..501).collect::<Vec<_>>());
    }
}
