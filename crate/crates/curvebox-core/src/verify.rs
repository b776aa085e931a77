//! Desk-scale verifiers: the Weil-bound defect of box counts on plane
//! and shifted space curves, and a randomized counterexample search for
//! the translate covering property of small subsets of F_p.

use crate::counting::{self, rational_to_f64, CyclicInterval, Rectangle, ShiftedCurve};
use crate::curve::PlaneCurve;
use crate::error::{Error, Result};
use crate::field::PrimeModulus;
use crate::sample;
use crate::Rational;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::Signed;
use rand::Rng;

/// Exact box count against the equidistribution main term
/// `p vol(B)/p^r`, with the bound `d^2 sqrt(p) log^t p` where t counts
/// the intervals that are not all of `[0, p-1]`.
#[derive(Clone, Debug)]
pub struct DefectRecord {
    pub count: u64,
    pub main_term: Rational,
    pub defect: Rational,
    pub bound: f64,
    pub ratio: f64,
    pub t: u32,
}

fn assemble_record(
    p: u64,
    effective_degree: f64,
    ambient_dim: u32,
    count: u64,
    volume: &BigInt,
    t: u32,
) -> DefectRecord {
    // main term p * vol / p^r
    let main_term = Rational::new(
        BigInt::from(p) * volume.clone(),
        BigInt::from(p).pow(ambient_dim),
    );
    let defect = (Rational::from(BigInt::from(count)) - &main_term).abs();
    let pf = p as f64;
    let bound =
        effective_degree * effective_degree * libm::sqrt(pf) * libm::pow(libm::log(pf), t as f64);
    let ratio = rational_to_f64(&defect) / bound;
    DefectRecord {
        count,
        main_term,
        defect,
        bound,
        ratio,
        t,
    }
}

/// Weil defect of a plane-curve rectangle count (ambient dimension 2).
pub fn weil_defect_plane(curve: &PlaneCurve, b: &Rectangle) -> Result<DefectRecord> {
    let count = counting::count_in_rectangle(curve, b)?;
    let t = [b.i, b.j].iter().filter(|iv| !iv.is_full()).count() as u32;
    let volume = BigInt::from(b.i.len()) * BigInt::from(b.j.len());
    Ok(assemble_record(
        curve.p(),
        curve.degree() as f64,
        2,
        count,
        &volume,
        t,
    ))
}

/// Weil defect of a shifted-curve box count in (s+1)-space. The box lists
/// the x-interval first, then one interval per y-coordinate; the degree
/// of the space curve is bounded by `d^s`, which is what enters the
/// bound.
pub fn weil_defect_shifted(
    shifted: &ShiftedCurve,
    box_: &[CyclicInterval],
) -> Result<DefectRecord> {
    let count = counting::count_shifted_points_box(shifted, box_)?;
    let t = box_.iter().filter(|iv| !iv.is_full()).count() as u32;
    let mut volume = BigInt::from(1u32);
    for iv in box_ {
        volume *= BigInt::from(iv.len());
    }
    Ok(assemble_record(
        shifted.modulus().p(),
        shifted.degree_bound(),
        shifted.s() as u32 + 1,
        count,
        &volume,
        t,
    ))
}

/// A tuple `(x_1..x_r, M)` for which every translate `M + x_j` is covered
/// by the union of the others. No such configuration exists when
/// `4|M| < p^(1/r)`, so any hit indicates a bug in the set/translate code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslateCounterexample {
    pub xs: Vec<u64>,
    pub set: Vec<u64>,
}

fn check_translate_args(p: u64, r: u32, m_max: u64) -> Result<()> {
    if r < 2 || r as u64 > p {
        return Err(Error::BadTranslateArity { r, p });
    }
    if m_max == 0 {
        return Err(Error::BadTranslateArity { r, p });
    }
    // hypothesis 4|M| < p^(1/r), checked exactly as (4 m_max)^r < p
    let base = 4u128 * m_max as u128;
    let mut pow: u128 = 1;
    for _ in 0..r {
        pow = match pow.checked_mul(base) {
            Some(v) => v,
            None => return Err(Error::TranslateHypothesis { m_max, p, r }),
        };
    }
    if pow >= p as u128 {
        return Err(Error::TranslateHypothesis { m_max, p, r });
    }
    Ok(())
}

/// One seeded trial: random distinct shifts and a random subset of F_p,
/// then an exhaustive check that some translate escapes the union of the
/// others.
fn translate_trial(
    p: u64,
    r: u32,
    m_max: u64,
    seed: u64,
    trial: u64,
) -> Option<TranslateCounterexample> {
    let mut rng = sample::stream_rng(seed, trial);
    let mut xs: BTreeSet<u64> = BTreeSet::new();
    while xs.len() < r as usize {
        xs.insert(rng.gen_range(0..p));
    }
    let size = rng.gen_range(1..=m_max);
    let mut set: BTreeSet<u64> = BTreeSet::new();
    while set.len() < size as usize {
        set.insert(rng.gen_range(0..p));
    }
    let xs: Vec<u64> = xs.into_iter().collect();
    let translates: Vec<BTreeSet<u64>> = xs
        .iter()
        .map(|&x| set.iter().map(|&v| (v + x) % p).collect())
        .collect();
    let escape_exists = (0..translates.len()).any(|j| {
        translates[j].iter().any(|v| {
            translates
                .iter()
                .enumerate()
                .all(|(i, other)| i == j || !other.contains(v))
        })
    });
    if escape_exists {
        None
    } else {
        Some(TranslateCounterexample {
            xs,
            set: set.into_iter().collect(),
        })
    }
}

/// Runs trials `[lo, hi)`; each trial draws from its own generator stream,
/// so any sharding of the range reproduces the same counterexample list.
pub fn translate_search_range(
    modulus: PrimeModulus,
    r: u32,
    m_max: u64,
    seed: u64,
    lo: u64,
    hi: u64,
) -> Result<Vec<TranslateCounterexample>> {
    let p = modulus.p();
    check_translate_args(p, r, m_max)?;
    let mut out = Vec::new();
    for trial in lo..hi {
        if let Some(cex) = translate_trial(p, r, m_max, seed, trial) {
            out.push(cex);
        }
    }
    Ok(out)
}

/// Randomized search for covered-translate configurations; expected to
/// return an empty list on every run, making it a bug detector for the
/// set arithmetic. The search is restricted to subsets of F_p.
pub fn translate_search(
    modulus: PrimeModulus,
    r: u32,
    m_max: u64,
    trials: u64,
    seed: u64,
) -> Result<Vec<TranslateCounterexample>> {
    translate_search_range(modulus, r, m_max, seed, 0, trials)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{build_shifted_curve, PatternSpec};
    use alloc::vec;

    fn fp(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn hyperbola(p: u64) -> PlaneCurve {
        PlaneCurve::parse(fp(p), &alloc::format!("x*y + {}", p - 1)).unwrap()
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn weil_plane_examples() {
        let h = hyperbola(7);
        let full = Rectangle::new(CyclicInterval::full(7), CyclicInterval::full(7)).unwrap();
        let rec = weil_defect_plane(&h, &full).unwrap();
        assert_eq!(rec.count, 6);
        assert_eq!(rec.main_term, rat(7, 1));
        assert_eq!(rec.defect, rat(1, 1));
        assert_eq!(rec.t, 0);
        // t = 0 bound is d^2 sqrt(p)
        assert!((rec.bound - 4.0 * libm::sqrt(7.0)).abs() < 1e-12);

        let b = Rectangle::new(
            CyclicInterval::new(7, 1, 3).unwrap(),
            CyclicInterval::new(7, 1, 3).unwrap(),
        )
        .unwrap();
        let rec = weil_defect_plane(&h, &b).unwrap();
        assert_eq!(rec.count, 1);
        assert_eq!(rec.main_term, rat(9, 7)); // 7 * 9 / 49
        assert_eq!(rec.defect, rat(2, 7));
        assert_eq!(rec.t, 2);
    }

    #[test]
    fn weil_shifted_example() {
        let h = hyperbola(7);
        let spec = PatternSpec::new(fp(7), vec![1, 1], vec![0, 1]).unwrap();
        let sc = build_shifted_curve(&h, &spec).unwrap();
        let full = CyclicInterval::full(7);
        let rec = weil_defect_shifted(&sc, &[full, full, full]).unwrap();
        assert_eq!(rec.count, 5);
        assert_eq!(rec.main_term, rat(7, 1)); // p * p^3 / p^3
        assert_eq!(rec.defect, rat(2, 1));
        assert_eq!(rec.t, 0);
        // degree bound d^s = 4 enters squared
        assert!((rec.bound - 16.0 * libm::sqrt(7.0)).abs() < 1e-12);

        assert!(matches!(
            weil_defect_shifted(&sc, &[full, full]),
            Err(Error::BoxDimension {
                expected: 3,
                got: 2
            })
        ));
    }

    #[test]
    fn translate_hypothesis_checked() {
        let m = fp(1009);
        // 4*7 = 28, 28^2 = 784 < 1009: fine
        assert!(translate_search(m, 2, 7, 10, 42).is_ok());
        // 4*8 = 32, 32^2 = 1024 >= 1009: hypothesis violated
        assert_eq!(
            translate_search(m, 2, 8, 10, 42),
            Err(Error::TranslateHypothesis {
                m_max: 8,
                p: 1009,
                r: 2
            })
        );
        assert_eq!(
            translate_search(m, 1, 7, 10, 42),
            Err(Error::BadTranslateArity { r: 1, p: 1009 })
        );
        assert_eq!(
            translate_search(m, 2, 0, 10, 42),
            Err(Error::BadTranslateArity { r: 2, p: 1009 })
        );
    }

    #[test]
    fn translate_search_finds_nothing() {
        let m = fp(1009);
        assert!(translate_search(m, 2, 7, 2000, 42).unwrap().is_empty());
        // r = 3 needs 4 m_max < 1009^(1/3) ~ 10: m_max = 2
        assert!(translate_search(m, 3, 2, 2000, 7).unwrap().is_empty());
    }

    #[test]
    fn singleton_sets_never_counterexample() {
        // |M| = 1: a translate is one point, contained in the union only
        // if it collides with another shift, which distinctness forbids
        // for r = 2
        let m = fp(101);
        assert!(translate_search(m, 2, 1, 10_000, 3).unwrap().is_empty());
    }

    #[test]
    fn translate_sharding_is_transparent() {
        let m = fp(1009);
        let whole = translate_search(m, 2, 7, 500, 11).unwrap();
        let mut pieces = Vec::new();
        for (lo, hi) in [(0u64, 123u64), (123, 400), (400, 500)] {
            pieces.extend(translate_search_range(m, 2, 7, 11, lo, hi).unwrap());
        }
        assert_eq!(whole, pieces);
    }
}
