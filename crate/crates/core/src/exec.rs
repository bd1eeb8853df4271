//! Replicate execution.
//!
//! Every replicate `i` of an experiment draws from its own stream
//! [`split_stream`]`(master_seed, i)`, and results are returned in replicate
//! order. Parallel and sequential runs are therefore bit-identical.

use crate::stats::{split_stream, Stream};

/// Runs `count` replicates one after another.
pub fn map_replicates_seq<T, F>(master_seed: u64, count: usize, f: F) -> Vec<T>
where
    F: Fn(usize, &mut Stream) -> T,
{
    (0..count)
        .map(|i| {
            let mut rng = split_stream(master_seed, i as u64);
            f(i, &mut rng)
        })
        .collect()
}

/// Runs `count` replicates on the rayon pool.
#[cfg(feature = "parallel")]
pub fn map_replicates_par<T, F>(master_seed: u64, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut Stream) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = split_stream(master_seed, i as u64);
            f(i, &mut rng)
        })
        .collect()
}

/// Runs `count` replicates, in parallel when the `parallel` feature is enabled.
pub fn map_replicates<T, F>(master_seed: u64, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut Stream) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_replicates_par(master_seed, count, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_replicates_seq(master_seed, count, f)
    }
}

/// Order-preserving map over a slice, parallel when the feature is enabled.
pub(crate) fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn sequential_and_default_agree() {
        let f = |i: usize, rng: &mut Stream| (i, rng.random::<u64>());
        assert_eq!(map_replicates_seq(7, 100, f), map_replicates(7, 100, f));
    }

    #[test]
    fn zero_replicates() {
        let out: Vec<u64> = map_replicates(1, 0, |_, rng| rng.random());
        assert!(out.is_empty());
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn worker_count_does_not_matter() {
        let f = |_: usize, rng: &mut Stream| (0..50).map(|_| rng.random::<f64>()).sum::<f64>();
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| map_replicates(99, 64, f));
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| map_replicates(99, 64, f));
        assert_eq!(one, four);
    }
}
