//! Thread-sharded versions of the exact sweeps. All shards produce exact
//! integers (or independent per-trial results), merged in shard order, so
//! any thread count yields byte-identical output.

use curvebox_core::counting::{self, CyclicInterval, PatternSpec};
use curvebox_core::curve::PlaneCurve;
use curvebox_core::moments::{self, MomentSpec};
use curvebox_core::stats::{self, BoxCountHistogram};
use curvebox_core::verify::{self, TranslateCounterexample};
use curvebox_core::{PrimeModulus, Rational, Result};
use num_bigint::BigInt;
use num_traits::Zero;

/// Splits `[0, total)` into at most `threads` contiguous ranges.
pub fn shard_ranges(total: u64, threads: usize) -> Vec<(u64, u64)> {
    let threads = threads.max(1) as u64;
    let shards = threads.min(total.max(1));
    let base = total / shards;
    let extra = total % shards;
    let mut out = Vec::with_capacity(shards as usize);
    let mut lo = 0;
    for idx in 0..shards {
        let len = base + u64::from(idx < extra);
        out.push((lo, lo + len));
        lo += len;
    }
    out
}

fn run_sharded<T, F>(total: u64, threads: usize, work: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, u64) -> Result<T> + Sync,
{
    let ranges = shard_ranges(total, threads);
    if threads <= 1 || ranges.len() <= 1 {
        return ranges.into_iter().map(|(lo, hi)| work(lo, hi)).collect();
    }
    std::thread::scope(|scope| {
        let work = &work;
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|(lo, hi)| scope.spawn(move || work(lo, hi)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("shard panicked"))
            .collect()
    })
}

/// Box-count histogram over all p windows, sharded by x-range.
pub fn histogram(
    curve: &PlaneCurve,
    h: u64,
    j: &CyclicInterval,
    threads: usize,
) -> Result<BoxCountHistogram> {
    let partials = run_sharded(curve.p(), threads, |lo, hi| {
        stats::histogram_counts_partial(curve, h, j, lo, hi)
    })?;
    let mut counts = vec![0u64; (h * curve.y_degree() as u64 + 1) as usize];
    for part in partials {
        for (acc, v) in counts.iter_mut().zip(part) {
            *acc += v;
        }
    }
    Ok(BoxCountHistogram {
        p: curve.p(),
        h,
        n: j.len(),
        counts,
    })
}

/// `M_k(H)` by sharded incremental sweeps.
pub fn empirical_moment(curve: &PlaneCurve, spec: &MomentSpec, threads: usize) -> Result<Rational> {
    let partials = run_sharded(curve.p(), threads, |lo, hi| {
        moments::moment_sum_partial(curve, spec, lo, hi)
    })?;
    let mut total = BigInt::zero();
    for part in partials {
        total += part;
    }
    Ok(Rational::new(total, BigInt::from(curve.p()).pow(spec.k)))
}

/// Splits a cyclic interval into contiguous sub-intervals, one per shard;
/// counting is additive over the partition.
fn split_interval(i: &CyclicInterval, threads: usize) -> Vec<CyclicInterval> {
    shard_ranges(i.len(), threads)
        .into_iter()
        .map(|(lo, hi)| {
            CyclicInterval::new(i.p(), (i.start() + lo) % i.p(), hi - lo)
                .expect("sub-interval of a valid interval")
        })
        .collect()
}

/// Pattern count sharded over the x-interval.
pub fn count_patterns(
    curve: &PlaneCurve,
    spec: &PatternSpec,
    i: &CyclicInterval,
    j: &CyclicInterval,
    threads: usize,
) -> Result<u64> {
    let parts = split_interval(i, threads);
    let counts = if threads <= 1 || parts.len() <= 1 {
        parts
            .iter()
            .map(|part| counting::count_patterns(curve, spec, part, j))
            .collect::<Result<Vec<_>>>()?
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = parts
                .iter()
                .map(|part| scope.spawn(move || counting::count_patterns(curve, spec, part, j)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("shard panicked"))
                .collect::<Result<Vec<_>>>()
        })?
    };
    Ok(counts.into_iter().sum())
}

/// Rectangle count sharded over the x-interval.
pub fn count_in_rectangle(
    curve: &PlaneCurve,
    b: &counting::Rectangle,
    threads: usize,
) -> Result<u64> {
    let parts = split_interval(&b.i, threads);
    let count_part = |part: &CyclicInterval| {
        counting::count_in_rectangle(curve, &counting::Rectangle::new(*part, b.j)?)
    };
    let counts = if threads <= 1 || parts.len() <= 1 {
        parts.iter().map(count_part).collect::<Result<Vec<_>>>()?
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = parts
                .iter()
                .map(|part| scope.spawn(move || count_part(part)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("shard panicked"))
                .collect::<Result<Vec<_>>>()
        })?
    };
    Ok(counts.into_iter().sum())
}

/// Translate-covering search sharded by trial index; per-trial generator
/// streams make the result independent of the sharding.
pub fn translate_search(
    modulus: PrimeModulus,
    r: u32,
    m_max: u64,
    trials: u64,
    seed: u64,
    threads: usize,
) -> Result<Vec<TranslateCounterexample>> {
    let partials = run_sharded(trials, threads, |lo, hi| {
        verify::translate_search_range(modulus, r, m_max, seed, lo, hi)
    })?;
    Ok(partials.into_iter().flatten().collect())
}
