//! Deterministic parallel fan-out over sample ids.
//!
//! Every sample derives its randomness from `(stream seed, sample id)`, the
//! per-sample results are collected in id order, and all reductions run
//! sequentially afterwards. The output therefore does not depend on the
//! number of worker threads.

use percolation_core::lattice::hash::mix64;
use rayon::prelude::*;

/// Seed of an independent stream, keyed by a label and up to two radii.
pub fn stream_seed(master_seed: u64, label: &str, n: u32, m: u32) -> u64 {
    // FNV-1a over the label, then mixed with the radii.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
    }
    mix64(mix64(master_seed ^ h) ^ ((n as u64) << 32 | m as u64))
}

/// Evaluates `f` on ids `0..count`, returning results in id order.
pub fn map_samples<T, F>(count: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..count as usize).into_par_iter().map(|i| f(i as u64)).collect()
}

/// Number of ids in `0..count` for which `f` holds.
pub fn count_hits<F>(count: u64, f: F) -> u64
where
    F: Fn(u64) -> bool + Sync + Send,
{
    (0..count as usize).into_par_iter().filter(|&i| f(i as u64)).count() as u64
}

/// The smallest `wanted` ids (scanning upwards from zero) whose result is
/// `Some`, together with the number of ids inspected. Stops after `limit`
/// ids. Work proceeds in blocks, so the answer is independent of threads.
pub fn first_hits<T, F>(wanted: usize, limit: u64, f: F) -> (Vec<(u64, T)>, u64)
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    let mut hits = Vec::with_capacity(wanted);
    let mut next = 0u64;
    let mut block = 256u64;
    while hits.len() < wanted && next < limit {
        let end = (next + block).min(limit);
        let found: Vec<(u64, Option<T>)> =
            (next as usize..end as usize).into_par_iter().map(|i| (i as u64, f(i as u64))).collect();
        for (id, r) in found {
            if hits.len() == wanted {
                return (hits, id);
            }
            if let Some(t) = r {
                hits.push((id, t));
            }
        }
        next = end;
        block = (block * 2).min(1 << 16);
    }
    (hits, next)
}

/// Runs `job` on a dedicated pool of `threads` workers (all cores when absent).
pub fn with_threads<R, J>(threads: Option<usize>, job: J) -> anyhow::Result<R>
where
    R: Send,
    J: FnOnce() -> R + Send,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        anyhow::ensure!(t >= 1, "thread count must be positive");
        builder = builder.num_threads(t);
    }
    Ok(builder.build()?.install(job))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_differ_by_label_and_radii() {
        let a = stream_seed(1, "pi3", 8, 0);
        assert_ne!(a, stream_seed(1, "pi3", 16, 0));
        assert_ne!(a, stream_seed(1, "pi5", 8, 0));
        assert_ne!(a, stream_seed(2, "pi3", 8, 0));
        assert_eq!(a, stream_seed(1, "pi3", 8, 0));
    }

    #[test]
    fn first_hits_is_thread_independent() {
        let f = |i: u64| (mix64(i) % 7 == 0).then_some(i * 3);
        let one = with_threads(Some(1), || first_hits(50, 100_000, f)).unwrap();
        let four = with_threads(Some(4), || first_hits(50, 100_000, f)).unwrap();
        assert_eq!(one, four);
        assert_eq!(one.0.len(), 50);
        let scanned = one.1;
        assert_eq!(one.0, (0..scanned).filter_map(|i| f(i).map(|t| (i, t))).collect::<Vec<_>>());
        let (few, seen) = first_hits(10, 20, |i| (i % 5 == 0).then_some(()));
        assert_eq!((few.len(), seen), (4, 20));
    }
}
