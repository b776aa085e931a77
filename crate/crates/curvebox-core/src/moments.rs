//! Moments of sliding-window box counts and the exact binomial model.
//!
//! The empirical side sums `(N_{B_x} - HN/p)^k` over all p windows
//! `B_x = (x, x+H] x J` with an incremental column sweep. The model side
//! is the k-th central moment of a Binomial(H, P) variable, computed two
//! independent ways: straight from the definition, and through the
//! Stirling-number identity
//! `mu_k(H,P) = sum_r C(k,r) (-HP)^(k-r) sum_t C(H,t) S(r,t) t! P^t`.
//! Both are exact rationals and must agree exactly (tested on a grid).
//!
//! A third, much slower route expands `M_k` through the power sums
//! `S_r(H) = sum_x N_{B_x}^r` and pattern counts; it exists purely as a
//! cross-check at small p and requires the one-point-per-column condition.

use crate::counting::{self, CyclicInterval, PatternSpec};
use crate::curve::PlaneCurve;
use crate::error::{Error, Result};
use crate::Rational;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Parameters of one moment computation: order k, window width H and the
/// y-interval J (N = |J|).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MomentSpec {
    pub k: u32,
    pub h: u64,
    pub j: CyclicInterval,
}

impl MomentSpec {
    pub fn new(k: u32, h: u64, j: CyclicInterval) -> Result<Self> {
        assert!(k >= 1, "moment order must be at least 1");
        let p = j.p();
        if h == 0 || h >= p {
            return Err(Error::WindowTooWide { h, p });
        }
        Ok(MomentSpec { k, h, j })
    }
}

/// Stirling number of the second kind: partitions of an r-set into
/// exactly t nonempty blocks, by the standard recurrence.
pub fn stirling2(r: u32, t: u32) -> BigUint {
    if t > r {
        return BigUint::zero();
    }
    if r == 0 {
        return BigUint::one(); // S(0,0)
    }
    if t == 0 {
        return BigUint::zero();
    }
    let tt = t as usize;
    let mut row: Vec<BigUint> = vec![BigUint::zero(); tt + 1];
    row[0] = BigUint::one(); // row for r = 0
    for _ in 1..=r {
        let mut next: Vec<BigUint> = vec![BigUint::zero(); tt + 1];
        for m in 1..=tt {
            next[m] = BigUint::from(m) * &row[m] + &row[m - 1];
        }
        row = next;
    }
    row[tt].clone()
}

/// Binomial coefficient C(n, k) as a big integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    num_integer::binomial(BigUint::from(n), BigUint::from(k))
}

pub fn factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for t in 2..=n.max(1) {
        acc *= t;
    }
    acc
}

fn check_probability(p: &Rational) -> Result<()> {
    if p.is_negative() || p > &Rational::one() {
        return Err(Error::ProbabilityOutOfRange);
    }
    Ok(())
}

/// k-th central moment of Binomial(H, P), straight from the definition:
/// `sum_{h=0}^{H} C(H,h) P^h (1-P)^{H-h} (h - HP)^k`. The h = 0 term is
/// included; the moment identity checked against the Stirling form needs
/// it. Cost grows linearly in H, so this is the desk-scale side.
pub fn binomial_moment_def(h: u64, p: &Rational, k: u32) -> Result<Rational> {
    check_probability(p)?;
    let mean = Rational::from(BigInt::from(h)) * p;
    let q = Rational::one() - p;
    let mut total = Rational::zero();
    // running C(H,t) P^t Q^(H-t) would need division; with exact
    // rationals the straightforward product per term is fine at desk scale
    let mut p_pow = Rational::one();
    for t in 0..=h {
        let weight =
            Rational::from(BigInt::from(binomial(h, t))) * &p_pow * pow_rational(&q, h - t);
        let centered = Rational::from(BigInt::from(t)) - &mean;
        total += weight * pow_rational(&centered, k as u64);
        p_pow *= p;
    }
    Ok(total)
}

/// Same moment through the Stirling identity; cost depends on k only, so
/// this is the production path inside moment reports.
pub fn binomial_moment_stirling(h: u64, p: &Rational, k: u32) -> Result<Rational> {
    check_probability(p)?;
    let hp = Rational::from(BigInt::from(h)) * p;
    let mut total = Rational::zero();
    for r in 0..=k {
        let mut inner = Rational::zero();
        let mut p_pow = Rational::one();
        let t_max = (r as u64).min(h) as u32;
        for t in 0..=t_max {
            let coeff = BigInt::from(binomial(h, t as u64))
                * BigInt::from(stirling2(r, t))
                * BigInt::from(factorial(t as u64));
            inner += Rational::from(coeff) * &p_pow;
            p_pow *= p;
        }
        let sign_hp = pow_rational(&(-hp.clone()), (k - r) as u64);
        total += Rational::from(BigInt::from(binomial(k as u64, r as u64))) * sign_hp * inner;
    }
    Ok(total)
}

fn pow_rational(base: &Rational, exp: u64) -> Rational {
    let mut acc = Rational::one();
    let mut b = base.clone();
    let mut e = exp;
    while e != 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        let sq = &b * &b;
        b = sq;
        e >>= 1;
    }
    acc
}

/// Gaussian central moment constant: `(k-1)!! = 1*3*...*(k-1)` for even
/// k, zero for odd k.
pub fn gaussian_nu(k: u32) -> u128 {
    if k % 2 == 1 {
        return 0;
    }
    let mut acc: u128 = 1;
    let mut factor: u128 = 1;
    while factor + 2 <= k as u128 {
        factor += 2;
        acc = acc.checked_mul(factor).expect("nu_k fits in u128");
    }
    acc
}

/// Model mean HN/p.
pub fn model_mean(h: u64, n: u64, p: u64) -> Rational {
    Rational::new(BigInt::from(h) * BigInt::from(n), BigInt::from(p))
}

/// Model variance HN/p (1 - N/p).
pub fn model_variance(h: u64, n: u64, p: u64) -> Rational {
    let frac = Rational::new(BigInt::from(n), BigInt::from(p));
    model_mean(h, n, p) * (Rational::one() - frac)
}

/// Runs `visit(x, N_{B_x})` for every x in `[lo, hi)` with
/// `B_x = (x, x+H] x J`, recomputing only one fiber per step. Shards
/// recompute their first window from scratch, so partial sweeps compose
/// exactly.
pub(crate) fn sweep_box_counts<F: FnMut(u64, u64)>(
    curve: &PlaneCurve,
    j: &CyclicInterval,
    h: u64,
    lo: u64,
    hi: u64,
    mut visit: F,
) -> Result<()> {
    let p = curve.p();
    if j.p() != p {
        return Err(Error::ModulusMismatch {
            left: p,
            right: j.p(),
        });
    }
    if h == 0 || h >= p {
        return Err(Error::WindowTooWide { h, p });
    }
    assert!(lo <= hi && hi <= p, "shard range out of bounds");
    let span = hi - lo;
    if span == 0 {
        return Ok(());
    }
    let ncols = (span + h - 1) as usize;
    let mut cols: Vec<u32> = Vec::with_capacity(ncols);
    for t in 0..ncols as u64 {
        let col = (lo + 1 + t) % p;
        cols.push(curve.fiber_count(col, j)? as u32);
    }
    let mut window: u64 = cols[..h as usize].iter().map(|&c| c as u64).sum();
    visit(lo, window);
    for i in 1..span as usize {
        window = window - cols[i - 1] as u64 + cols[i + h as usize - 1] as u64;
        visit(lo + i as u64, window);
    }
    Ok(())
}

/// Partial sum `sum_{x in [lo,hi)} (p N_{B_x} - HN)^k` as an exact
/// integer; the full moment is this over `[0,p)` divided by `p^k`.
/// Accumulates in i128 when the bound `p (pHd)^k` provably fits, else in
/// big integers; both paths are exact.
pub fn moment_sum_partial(
    curve: &PlaneCurve,
    spec: &MomentSpec,
    lo: u64,
    hi: u64,
) -> Result<BigInt> {
    let p = curve.p();
    let hn = BigInt::from(spec.h) * BigInt::from(spec.j.len());
    let k = spec.k;
    // |p N_Bx - HN| <= p H y_deg + HN; overflow of the bound itself just
    // forces the big-integer path
    let base_bound: u128 = (p as u128)
        .checked_mul(spec.h as u128)
        .and_then(|v| v.checked_mul((curve.y_degree() as u128).max(1)))
        .and_then(|v| v.checked_add(hn.to_u128().unwrap_or(u128::MAX)))
        .unwrap_or(u128::MAX);
    let bits = 128 - base_bound.leading_zeros();
    let fits_i128 = (bits as u64) * (k as u64) + 63 <= 126;
    if fits_i128 {
        let hn_i = i128::try_from(&hn).expect("HN fits in i128");
        let mut acc: i128 = 0;
        sweep_box_counts(curve, &spec.j, spec.h, lo, hi, |_, nb| {
            let base = p as i128 * nb as i128 - hn_i;
            let mut term: i128 = 1;
            for _ in 0..k {
                term *= base;
            }
            acc += term;
        })?;
        Ok(BigInt::from(acc))
    } else {
        let mut acc = BigInt::zero();
        sweep_box_counts(curve, &spec.j, spec.h, lo, hi, |_, nb| {
            let base = BigInt::from(p) * BigInt::from(nb) - &hn;
            acc += base.pow(k);
        })?;
        Ok(acc)
    }
}

/// `M_k(H) = sum_x (N_{B_x} - HN/p)^k`, exactly, by the incremental
/// window sweep.
pub fn empirical_moment(curve: &PlaneCurve, spec: &MomentSpec) -> Result<Rational> {
    let p = curve.p();
    let total = moment_sum_partial(curve, spec, 0, p)?;
    Ok(Rational::new(total, BigInt::from(p).pow(spec.k)))
}

/// Reference path recounting every window from scratch; quadratic in H,
/// used as an oracle at small p.
pub fn empirical_moment_naive(curve: &PlaneCurve, spec: &MomentSpec) -> Result<Rational> {
    let p = curve.p();
    if spec.h >= p {
        return Err(Error::WindowTooWide { h: spec.h, p });
    }
    let mean = model_mean(spec.h, spec.j.len(), p);
    let mut total = Rational::zero();
    for x in 0..p {
        let mut nb = 0u64;
        for u in 1..=spec.h {
            nb += curve.fiber_count((x + u) % p, &spec.j)?;
        }
        let centered = Rational::from(BigInt::from(nb)) - &mean;
        total += pow_rational(&centered, spec.k as u64);
    }
    Ok(total)
}

/// Empirical moment vs the binomial model `p mu_k(H, N/p)` plus the two
/// error-term bounds.
#[derive(Clone, Debug)]
pub struct MomentReport {
    pub m_k: Rational,
    /// `p * mu_k(H, N/p)`.
    pub model: Rational,
    pub defect: Rational,
    /// `d^{2k} H^k sqrt(p) log^k p`.
    pub thm3_bound: f64,
    pub ratio: f64,
    /// `p (HN/p)^{k/2} + HN/p + thm3_bound`.
    pub cor3_bound: f64,
}

/// Assembles a [`MomentReport`]. With `enforce_cond1` the comparison
/// refuses curve/interval pairs violating the one-point-per-column
/// condition (the model is only proven in that regime); the empirical
/// moment itself is well-defined regardless, so callers studying folded
/// intervals pass `false`.
pub fn moment_report(
    curve: &PlaneCurve,
    spec: &MomentSpec,
    enforce_cond1: bool,
) -> Result<MomentReport> {
    let m_k = empirical_moment(curve, spec)?;
    moment_report_from(curve, spec, m_k, enforce_cond1)
}

/// Report assembly for an empirical moment computed elsewhere (e.g. by a
/// sharded sweep).
pub fn moment_report_from(
    curve: &PlaneCurve,
    spec: &MomentSpec,
    m_k: Rational,
    enforce_cond1: bool,
) -> Result<MomentReport> {
    if enforce_cond1 {
        let rep = curve.check_condition_one(&spec.j)?;
        if let Some(w) = rep.witness {
            return Err(Error::ConditionOneViolated {
                x: w.x,
                y1: w.y1,
                y2: w.y2,
            });
        }
    }
    let p = curve.p();
    let n = spec.j.len();
    let prob = Rational::new(BigInt::from(n), BigInt::from(p));
    let model = Rational::from(BigInt::from(p)) * binomial_moment_stirling(spec.h, &prob, spec.k)?;
    let defect = (&m_k - &model).abs();
    let d = curve.degree() as f64;
    let pf = p as f64;
    let thm3_bound = libm::pow(d, 2.0 * spec.k as f64)
        * libm::pow(spec.h as f64, spec.k as f64)
        * libm::sqrt(pf)
        * libm::pow(libm::log(pf), spec.k as f64);
    let ratio = counting::rational_to_f64(&defect) / thm3_bound;
    let hn_over_p = (spec.h as f64) * (n as f64) / pf;
    let cor3_bound = pf * libm::pow(hn_over_p, spec.k as f64 / 2.0) + hn_over_p + thm3_bound;
    Ok(MomentReport {
        m_k,
        model,
        defect,
        thm3_bound,
        ratio,
        cor3_bound,
    })
}

/// Third route to `M_k`: binomial expansion into power sums
/// `S_r(H) = sum_x N_{B_x}^r` with `S_0 = p` by convention, each `S_r`
/// decomposed through Stirling numbers into pattern counts over subsets
/// `A` of `{1..H}` (`S(r,t) t!` tuples per t-subset). Exact only when
/// every column holds at most one point of `C` with y in J, which is
/// checked. Exponential in H; a small-p diagnostic, not a production
/// path.
pub fn moment_via_expansion(curve: &PlaneCurve, spec: &MomentSpec) -> Result<Rational> {
    let p = curve.p();
    if spec.h >= p {
        return Err(Error::WindowTooWide { h: spec.h, p });
    }
    let cond = curve.check_condition_one(&spec.j)?;
    if let Some(w) = cond.witness {
        return Err(Error::ConditionOneViolated {
            x: w.x,
            y1: w.y1,
            y2: w.y2,
        });
    }
    let m = curve.modulus();
    let full = CyclicInterval::full(p);
    let k = spec.k;
    // S_0 = p by convention; S_r from pattern counts
    let mut power_sums: Vec<BigInt> = Vec::with_capacity(k as usize + 1);
    power_sums.push(BigInt::from(p));
    for r in 1..=k {
        let mut s_r = BigInt::zero();
        for t in 1..=(r as u64).min(spec.h) {
            let mut subset_total = BigInt::zero();
            for_each_subset(spec.h, t as usize, |subset| {
                let ones = vec![1u64; subset.len()];
                let pattern = PatternSpec::new(m, ones, subset.to_vec())?;
                let count = counting::count_patterns(curve, &pattern, &full, &spec.j)?;
                subset_total += BigInt::from(count);
                Ok(())
            })?;
            s_r += BigInt::from(stirling2(r, t as u32)) * BigInt::from(factorial(t)) * subset_total;
        }
        power_sums.push(s_r);
    }
    let mean = model_mean(spec.h, spec.j.len(), p);
    let mut total = Rational::zero();
    for r in 0..=k {
        let sign_mean = pow_rational(&(-mean.clone()), (k - r) as u64);
        total += Rational::from(BigInt::from(binomial(k as u64, r as u64)))
            * sign_mean
            * Rational::from(power_sums[r as usize].clone());
    }
    Ok(total)
}

/// Calls `f` for every size-t subset of `{1, ..., h}` in lexicographic
/// order.
fn for_each_subset<F>(h: u64, t: usize, mut f: F) -> Result<()>
where
    F: FnMut(&[u64]) -> Result<()>,
{
    debug_assert!(t >= 1 && t as u64 <= h);
    let mut idx: Vec<u64> = (1..=t as u64).collect();
    loop {
        f(&idx)?;
        // advance to the next combination
        let mut pos = t;
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            if idx[pos] < h - (t - 1 - pos) as u64 {
                idx[pos] += 1;
                for q in pos + 1..t {
                    idx[q] = idx[q - 1] + 1;
                }
                break;
            }
        }
    }
}
