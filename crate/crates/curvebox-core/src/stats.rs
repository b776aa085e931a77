//! Distribution of box counts: histogram, Kolmogorov-Smirnov distances
//! against the exact binomial model and the limiting normal, and sample
//! central moments recomputed from the histogram.
//!
//! Goodness of fit is measured by KS distance on the integer lattice with
//! a continuity correction for the normal; both model comparisons are
//! always reported so a failure localizes to either the binomial
//! modelling step or the normal limit.

use crate::counting::CyclicInterval;
use crate::curve::PlaneCurve;
use crate::error::{Error, Result};
use crate::moments;
use crate::Rational;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Occurrence counts of the window sums `N_{B_x}` over all x in `[0, p)`.
/// `counts[h]` is the number of windows holding exactly h points; the
/// vector is sized to the maximum possible count `H * y_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxCountHistogram {
    pub p: u64,
    pub h: u64,
    /// N = |J|.
    pub n: u64,
    pub counts: Vec<u64>,
}

impl BoxCountHistogram {
    /// Total mass; equals p for histograms produced by the sweep.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Sum of `h * counts[h]`; equals H * T where T is the number of curve
    /// points with y in J.
    pub fn weighted_total(&self) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(h, &c)| h as u64 * c)
            .sum()
    }
}

/// One shard of the histogram: occurrence counts over `x in [lo, hi)`.
/// Shards of a partition add up to the full histogram.
pub fn histogram_counts_partial(
    curve: &PlaneCurve,
    h: u64,
    j: &CyclicInterval,
    lo: u64,
    hi: u64,
) -> Result<Vec<u64>> {
    let mut counts = vec![0u64; (h * curve.y_degree() as u64 + 1) as usize];
    moments::sweep_box_counts(curve, j, h, lo, hi, |_, nb| {
        counts[nb as usize] += 1;
    })?;
    Ok(counts)
}

/// Histogram of all p window counts via the incremental sweep.
pub fn box_count_histogram(
    curve: &PlaneCurve,
    h: u64,
    j: &CyclicInterval,
) -> Result<BoxCountHistogram> {
    let counts = histogram_counts_partial(curve, h, j, 0, curve.p())?;
    Ok(BoxCountHistogram {
        p: curve.p(),
        h,
        n: j.len(),
        counts,
    })
}

/// Reference distribution for the KS comparison.
#[derive(Clone, Debug)]
pub enum CountModel {
    /// Binomial(trials, success) with an exact rational success
    /// probability; the CDF is evaluated in exact arithmetic.
    Binomial { trials: u64, success: Rational },
    /// Normal(mean, var), evaluated with continuity correction at
    /// half-integers.
    Normal { mean: f64, var: f64 },
}

/// Standard normal CDF through `erfc` from libm (FDLIBM-derived, relative
/// error below 2^-52 across the range), so the absolute error of `Phi` is
/// far below 1e-10.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / core::f64::consts::SQRT_2)
}

/// Supremum distance between the histogram's empirical CDF and the model
/// CDF over the integer lattice.
pub fn ks_statistic(hist: &BoxCountHistogram, model: &CountModel) -> Result<f64> {
    let total = hist.total();
    assert!(total > 0, "histogram must carry mass");
    let support_max = match model {
        CountModel::Binomial { trials, success } => {
            if success.is_negative() || success > &Rational::one() {
                return Err(Error::ProbabilityOutOfRange);
            }
            (hist.counts.len() as u64 - 1).max(*trials)
        }
        CountModel::Normal { var, .. } => {
            if *var <= 0.0 {
                return Err(Error::ZeroVariance);
            }
            hist.counts.len() as u64 - 1
        }
    };
    let model_cdf: Vec<f64> = match model {
        CountModel::Binomial { trials, success } => {
            binomial_cdf_lattice(*trials, success, support_max)
        }
        CountModel::Normal { mean, var } => {
            let sd = libm::sqrt(*var);
            (0..=support_max)
                .map(|h| normal_cdf((h as f64 + 0.5 - mean) / sd))
                .collect()
        }
    };
    let mut sup = 0.0f64;
    let mut cum = 0u64;
    for h in 0..=support_max {
        cum += hist.counts.get(h as usize).copied().unwrap_or(0);
        let ecdf = cum as f64 / total as f64;
        let diff = (ecdf - model_cdf[h as usize]).abs();
        if diff > sup {
            sup = diff;
        }
    }
    Ok(sup)
}

/// Exact binomial CDF at 0..=support_max, converted to f64 at the end.
fn binomial_cdf_lattice(trials: u64, success: &Rational, support_max: u64) -> Vec<f64> {
    // success = a/b reduced; pmf(t) = C(H,t) a^t (b-a)^(H-t) / b^H
    let a = success.numer().to_biguint().expect("checked nonnegative");
    let b = success.denom().to_biguint().expect("positive denominator");
    let b_minus_a = &b - &a;
    let denom = b.pow(trials as u32);
    let mut cum = BigUint::zero();
    let mut out = Vec::with_capacity(support_max as usize + 1);
    for t in 0..=support_max {
        if t <= trials {
            let term =
                moments::binomial(trials, t) * a.pow(t as u32) * b_minus_a.pow((trials - t) as u32);
            cum += term;
        }
        let cdf = Rational::new(BigInt::from(cum.clone()), BigInt::from(denom.clone()));
        out.push(cdf.to_f64().unwrap_or(1.0));
    }
    out
}

/// Central moments `M_k/p` about the model mean HN/p, recomputed from the
/// histogram; must equal `empirical_moment / p` exactly.
pub fn moments_from_histogram(hist: &BoxCountHistogram, k_max: u32) -> Vec<Rational> {
    let p = BigInt::from(hist.p);
    let hn = BigInt::from(hist.h) * BigInt::from(hist.n);
    (1..=k_max)
        .map(|k| {
            let mut num = BigInt::zero();
            for (h, &c) in hist.counts.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let base = &p * BigInt::from(h as u64) - &hn;
                num += BigInt::from(c) * base.pow(k);
            }
            Rational::new(num, p.pow(k + 1))
        })
        .collect()
}

/// Gaussian-limit test report: model mean/variance, both KS distances and
/// the first four sample central moments.
#[derive(Clone, Debug)]
pub struct DistributionReport {
    pub mean_model: Rational,
    pub var_model: Rational,
    pub ks_binomial: f64,
    /// None when the model variance vanishes (empty or full J).
    pub ks_normal: Option<f64>,
    /// M_k/p for k = 1..=4.
    pub moments: Vec<Rational>,
}

pub fn report_from_histogram(hist: &BoxCountHistogram) -> Result<DistributionReport> {
    let mean_model = moments::model_mean(hist.h, hist.n, hist.p);
    let var_model = moments::model_variance(hist.h, hist.n, hist.p);
    let success = Rational::new(BigInt::from(hist.n), BigInt::from(hist.p));
    let ks_binomial = ks_statistic(
        hist,
        &CountModel::Binomial {
            trials: hist.h,
            success,
        },
    )?;
    let var_f = var_model.to_f64().unwrap_or(0.0);
    let ks_normal = if var_f > 0.0 {
        Some(ks_statistic(
            hist,
            &CountModel::Normal {
                mean: mean_model.to_f64().unwrap_or(0.0),
                var: var_f,
            },
        )?)
    } else {
        None
    };
    Ok(DistributionReport {
        mean_model,
        var_model,
        ks_binomial,
        ks_normal,
        moments: moments_from_histogram(hist, 4),
    })
}

/// Sweeps the histogram and assembles the full report.
pub fn distribution_report(
    curve: &PlaneCurve,
    h: u64,
    j: &CyclicInterval,
) -> Result<(BoxCountHistogram, DistributionReport)> {
    let hist = box_count_histogram(curve, h, j)?;
    let report = report_from_histogram(&hist)?;
    Ok((hist, report))
}
