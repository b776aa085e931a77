//! Deterministic generation of curves, pattern specs and intervals.
//!
//! Everything is driven by ChaCha8 with explicit seeds; independent
//! streams keyed by shard or trial index keep results identical no matter
//! how work is split across threads.

use crate::counting::{CyclicInterval, PatternSpec};
use crate::curve::PlaneCurve;
use crate::error::{Error, Result};
use crate::field::PrimeModulus;
use crate::poly::BivariatePoly;
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Root generator for a given seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for (seed, stream); used to shard trials.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Uniform interval: any start, any length from 0 to p.
pub fn random_interval<R: Rng>(rng: &mut R, p: u64) -> CyclicInterval {
    CyclicInterval::new(p, rng.gen_range(0..p), rng.gen_range(0..=p)).unwrap()
}

/// Uniform nonempty interval (length from 1 to p).
pub fn random_nonempty_interval<R: Rng>(rng: &mut R, p: u64) -> CyclicInterval {
    CyclicInterval::new(p, rng.gen_range(0..p), rng.gen_range(1..=p)).unwrap()
}

/// A pattern spec with s shifts satisfying the distinctness hypothesis:
/// distinct ratios r_i are drawn first and b_i = a_i * r_i derived, so
/// the invariant holds by construction.
pub fn random_pattern_spec<R: Rng>(
    rng: &mut R,
    modulus: PrimeModulus,
    s: usize,
) -> Result<PatternSpec> {
    let p = modulus.p();
    if s == 0 {
        return Err(Error::EmptyPattern);
    }
    if s as u64 > p {
        return Err(Error::PatternTooLong { s, p });
    }
    let mut ratios: Vec<u64> = Vec::with_capacity(s);
    while ratios.len() < s {
        let r = rng.gen_range(0..p);
        if !ratios.contains(&r) {
            ratios.push(r);
        }
    }
    let a: Vec<u64> = (0..s).map(|_| rng.gen_range(1..p)).collect();
    let b: Vec<u64> = a
        .iter()
        .zip(ratios.iter())
        .map(|(&ai, &ri)| modulus.mul(ai, ri))
        .collect();
    PatternSpec::new(modulus, a, b)
}

/// A random sparse curve with y-degree in `1..=max_y_deg`: one guaranteed
/// leading y-term plus `extra_terms` random monomials. The result always
/// satisfies the curve construction rules; it may still have a vertical
/// line component, which counting sweeps surface as an error.
pub fn random_curve<R: Rng>(
    rng: &mut R,
    modulus: PrimeModulus,
    max_x_deg: u32,
    max_y_deg: u32,
    extra_terms: usize,
) -> PlaneCurve {
    let p = modulus.p();
    let y_deg = rng.gen_range(1..=max_y_deg.max(1));
    let mut terms: Vec<(u32, u32, u64)> = Vec::with_capacity(extra_terms + 1);
    terms.push((0, y_deg, rng.gen_range(1..p)));
    for _ in 0..extra_terms {
        // strictly smaller y-exponent so the leading term cannot cancel
        terms.push((
            rng.gen_range(0..=max_x_deg),
            rng.gen_range(0..y_deg),
            rng.gen_range(0..p),
        ));
    }
    let poly = BivariatePoly::from_terms(modulus, terms).expect("leading y term is nonzero");
    PlaneCurve::new(poly).expect("y-degree >= 1 by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn fp(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn same_seed_same_outputs() {
        let m = fp(31);
        let mut r1 = rng(9);
        let mut r2 = rng(9);
        for _ in 0..50 {
            assert_eq!(
                random_pattern_spec(&mut r1, m, 3).unwrap(),
                random_pattern_spec(&mut r2, m, 3).unwrap()
            );
            assert_eq!(random_interval(&mut r1, 31), random_interval(&mut r2, 31));
        }
    }

    #[test]
    fn streams_are_independent_of_split() {
        let mut whole: Vec<u64> = Vec::new();
        for t in 0..10 {
            whole.push(stream_rng(4, t).gen_range(0..1_000_000));
        }
        // regenerating any single stream reproduces the same value
        for (t, &v) in whole.iter().enumerate() {
            assert_eq!(stream_rng(4, t as u64).gen_range(0..1_000_000), v);
        }
    }

    #[test]
    fn generated_specs_satisfy_invariants() {
        let m = fp(31);
        let mut r = rng(1);
        for s in 1..=4 {
            for _ in 0..50 {
                let spec = random_pattern_spec(&mut r, m, s).unwrap();
                assert_eq!(spec.s(), s);
                assert!(spec.a().iter().all(|&a| a != 0));
                let mut ratios = spec.ratios().unwrap();
                ratios.sort_unstable();
                ratios.dedup();
                assert_eq!(ratios.len(), s);
            }
        }
    }

    #[test]
    fn pattern_spec_bounds() {
        let m = fp(7);
        let mut r = rng(2);
        assert_eq!(random_pattern_spec(&mut r, m, 0), Err(Error::EmptyPattern));
        assert_eq!(
            random_pattern_spec(&mut r, m, 8),
            Err(Error::PatternTooLong { s: 8, p: 7 })
        );
        // s = p is the extreme satisfiable case
        assert!(random_pattern_spec(&mut r, m, 7).is_ok());
    }

    #[test]
    fn generated_curves_are_valid() {
        let m = fp(31);
        let mut r = rng(3);
        for _ in 0..100 {
            let c = random_curve(&mut r, m, 4, 3, 4);
            assert!(c.y_degree() >= 1);
            assert!(c.degree() >= 1);
        }
        let _ = vec![0u8];
    }
}
