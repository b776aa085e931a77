//! The normal approximation should improve along a ladder of growing
//! primes when N ~ p/2 and H ~ log p. The claim is asymptotic, so one
//! inversion in the monotone trend is tolerated.

use curvebox_core::counting::CyclicInterval;
use curvebox_core::curve::PlaneCurve;
use curvebox_core::stats::distribution_report;
use curvebox_core::PrimeModulus;

#[test]
fn ks_normal_decreases_along_prime_ladder() {
    // (p, H ~ round(log p))
    let ladder = [(10_007u64, 9u64), (100_003, 12), (1_000_003, 14)];
    let mut ks_values = Vec::new();
    for &(p, h) in &ladder {
        let c =
            PlaneCurve::parse(PrimeModulus::new(p).unwrap(), &format!("x*y + {}", p - 1)).unwrap();
        let j = CyclicInterval::new(p, 0, p.div_ceil(2)).unwrap();
        let (_, rep) = distribution_report(&c, h, &j).unwrap();
        ks_values.push(rep.ks_normal.unwrap());
    }
    let inversions = ks_values.windows(2).filter(|w| w[1] > w[0]).count();
    assert!(
        inversions <= 1,
        "ks_normal ladder not decreasing: {ks_values:?}"
    );
}
