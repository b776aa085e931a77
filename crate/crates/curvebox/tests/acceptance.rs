//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the measured values (run with `--nocapture` to see them).

use std::process::Command;

use curvebox::parallel;
use curvebox_core::counting::{
    build_shifted_curve, count_patterns, count_shifted_points, main_term_defect, CyclicInterval,
    Rectangle,
};
use curvebox_core::curve::PlaneCurve;
use curvebox_core::moments::{
    binomial_moment_def, binomial_moment_stirling, empirical_moment, empirical_moment_naive,
    moment_report, moment_via_expansion, MomentSpec,
};
use curvebox_core::sample;
use curvebox_core::stats::distribution_report;
use curvebox_core::verify::{translate_search, weil_defect_plane};
use curvebox_core::{PrimeModulus, Rational};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

fn fp(p: u64) -> PrimeModulus {
    PrimeModulus::new(p).unwrap()
}

fn hyperbola(p: u64) -> PlaneCurve {
    PlaneCurve::parse(fp(p), &format!("x*y + {}", p - 1)).unwrap()
}

fn parabola(p: u64) -> PlaneCurve {
    PlaneCurve::parse(fp(p), &format!("y + {}*x^2", p - 1)).unwrap()
}

fn elliptic(p: u64) -> PlaneCurve {
    PlaneCurve::parse(fp(p), &format!("y^2 + {}*x^3 + {}*x", p - 1, p - 1)).unwrap()
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// nearest-rank percentile of an unsorted sample
fn percentile(values: &mut [f64], q: f64) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let rank = (values.len() as f64 * q).ceil() as usize;
    values[rank.saturating_sub(1)]
}

#[test]
fn criterion_01_pattern_count_equals_shifted_curve_count() {
    // P_{a,b}(C; I, J) = N_B(C_{a,b}) exhaustively: p in {7, 11, 31},
    // s in {1, 2, 3}, 200 random spec/interval draws per p.
    let mut checked = 0u64;
    for &p in &[7u64, 11, 31] {
        let m = fp(p);
        let mut rng = sample::rng(0xC0DE + p);
        let fixed = [hyperbola(p), parabola(p), elliptic(p)];
        for trial in 0..200u64 {
            let s = (trial % 3 + 1) as usize;
            let spec = sample::random_pattern_spec(&mut rng, m, s).unwrap();
            let i = sample::random_interval(&mut rng, p);
            let j = sample::random_interval(&mut rng, p);
            // every fourth draw exercises a fresh random curve
            let random_curve;
            let curve = if trial % 4 == 3 {
                random_curve = loop {
                    let c = sample::random_curve(&mut rng, m, 3, 3, 3);
                    if count_patterns(&c, &spec, &i, &j).is_ok() {
                        break c;
                    }
                };
                &random_curve
            } else {
                &fixed[(trial % 4) as usize]
            };
            let direct = count_patterns(curve, &spec, &i, &j).unwrap();
            let shifted = build_shifted_curve(curve, &spec).unwrap();
            let via_shifted = count_shifted_points(&shifted, &i, &j).unwrap();
            assert_eq!(
                direct, via_shifted,
                "mismatch at p={p} trial={trial} spec={spec:?} i={i:?} j={j:?}"
            );
            checked += 1;
        }
    }
    println!("criterion 01 (pattern = shifted-curve count): PASS, {checked} draws, 0 mismatches");
}

#[test]
fn criterion_02_binomial_moment_identity_grid() {
    // definition route = Stirling route, exactly, k <= 8, H <= 20, P = j/q
    let mut checked = 0u64;
    for k in 0..=8u32 {
        for h in 1..=20u64 {
            for q in 1..=12u64 {
                for j in 0..=q {
                    let p = rat(j as i64, q as i64);
                    let def = binomial_moment_def(h, &p, k).unwrap();
                    let sti = binomial_moment_stirling(h, &p, k).unwrap();
                    assert_eq!(def, sti, "k={k} H={h} P={j}/{q}");
                    checked += 1;
                }
            }
        }
    }
    println!("criterion 02 (moment identity): PASS, {checked} grid points, 0 mismatches");
}

#[test]
fn criterion_03_second_moment_closed_form() {
    // mu_2(H, P) = H P (1 - P) exactly on the same grid
    let mut checked = 0u64;
    for h in 1..=20u64 {
        for q in 1..=12u64 {
            for j in 0..=q {
                let p = rat(j as i64, q as i64);
                let expect = Rational::from(BigInt::from(h)) * &p * (Rational::one() - &p);
                assert_eq!(
                    binomial_moment_def(h, &p, 2).unwrap(),
                    expect,
                    "H={h} P={j}/{q}"
                );
                checked += 1;
            }
        }
    }
    println!("criterion 03 (mu_2 = HP(1-P)): PASS, {checked} grid points");
}

#[test]
fn criterion_04_three_moment_paths_agree() {
    // incremental sweep = naive recount = power-sum expansion, exactly
    let mut checked = 0u64;
    for &p in &[7u64, 11, 31] {
        for curve in [hyperbola(p), parabola(p)] {
            for &(start, len) in &[(0u64, p), (0, p.div_ceil(2)), (3, p / 3)] {
                let j = CyclicInterval::new(p, start, len).unwrap();
                for &h in &[1u64, 2, 3, 5, 10] {
                    if h >= p {
                        continue;
                    }
                    for k in 1..=4u32 {
                        let spec = MomentSpec::new(k, h, j).unwrap();
                        let incremental = empirical_moment(&curve, &spec).unwrap();
                        let naive = empirical_moment_naive(&curve, &spec).unwrap();
                        let expansion = moment_via_expansion(&curve, &spec).unwrap();
                        assert_eq!(incremental, naive, "p={p} H={h} k={k}");
                        assert_eq!(incremental, expansion, "p={p} H={h} k={k}");
                        checked += 1;
                    }
                }
            }
        }
    }
    println!("criterion 04 (three moment paths): PASS, {checked} configurations, 0 mismatches");
}

#[test]
fn criterion_05_moment_model_at_desk_scale() {
    // hyperbola over p = 10007, J = [0, (p-1)/2], H in {5,10,20},
    // k in {2,3,4}: |M_k - p mu_k| / (d^{2k} H^k sqrt(p) log^k p) <= 1
    let p = 10_007u64;
    let curve = hyperbola(p);
    let j = CyclicInterval::new(p, 0, p.div_ceil(2)).unwrap();
    let mut max_ratio = 0.0f64;
    for &h in &[5u64, 10, 20] {
        for k in 2..=4u32 {
            let spec = MomentSpec::new(k, h, j).unwrap();
            let rep = moment_report(&curve, &spec, true).unwrap();
            assert!(
                rep.ratio <= 1.0,
                "H={h} k={k}: defect/bound = {} > 1",
                rep.ratio
            );
            // the moment itself stays under the coarser a-priori bound
            let m_abs = rep.m_k.to_f64().unwrap().abs();
            assert!(
                m_abs <= rep.cor3_bound,
                "H={h} k={k}: |M_k| = {m_abs} exceeds {}",
                rep.cor3_bound
            );
            max_ratio = max_ratio.max(rep.ratio);
        }
    }
    println!("criterion 05 (moment model, p=10007): PASS, max defect/bound = {max_ratio:.3e}");
}

#[test]
fn criterion_06_gaussian_regime() {
    // hyperbola over p = 100003, N = (p+1)/2, H = 11: KS thresholds and
    // moment sanity within 15%
    let p = 100_003u64;
    let curve = hyperbola(p);
    let j = CyclicInterval::new(p, 0, p.div_ceil(2)).unwrap();
    let (_, rep) = distribution_report(&curve, 11, &j).unwrap();
    let ks_b = rep.ks_binomial;
    let ks_n = rep.ks_normal.unwrap();
    assert!(ks_b <= 0.05, "ks_binomial = {ks_b}");
    assert!(ks_n <= 0.06, "ks_normal = {ks_n}");

    let var = rep.var_model.to_f64().unwrap();
    let m2 = rep.moments[1].to_f64().unwrap();
    let m4 = rep.moments[3].to_f64().unwrap();
    assert!(
        (m2 - var).abs() <= 0.15 * var,
        "m2 = {m2} vs var_model = {var}"
    );
    assert!(
        (m4 - 3.0 * var * var).abs() <= 0.15 * 3.0 * var * var,
        "m4 = {m4} vs 3 var^2 = {}",
        3.0 * var * var
    );
    println!(
        "criterion 06 (Gaussian regime, p=100003): PASS, ks_binomial = {ks_b:.4}, ks_normal = {ks_n:.4}, m2/var = {:.4}, m4/(3var^2) = {:.4}",
        m2 / var,
        m4 / (3.0 * var * var)
    );
}

#[test]
fn criterion_07_pattern_main_term_at_desk_scale() {
    // hyperbola (random J) and y^2 - x^3 - x (J folded) over p = 10007,
    // s <= 2, 50 random specs: 95th percentile defect/bound <= 1
    let p = 10_007u64;
    let m = fp(p);
    let folded = CyclicInterval::new(p, 0, p.div_ceil(2)).unwrap();
    for (name, curve, fold_j) in [
        ("hyperbola", hyperbola(p), false),
        ("y^2-x^3-x", elliptic(p), true),
    ] {
        let mut rng = sample::rng(0x7E57);
        let mut ratios = Vec::with_capacity(50);
        for trial in 0..50u64 {
            let s = (trial % 2 + 1) as usize;
            let spec = sample::random_pattern_spec(&mut rng, m, s).unwrap();
            let i = sample::random_nonempty_interval(&mut rng, p);
            let j = if fold_j {
                folded
            } else {
                sample::random_nonempty_interval(&mut rng, p)
            };
            let rep = main_term_defect(&curve, &spec, &i, &j).unwrap();
            ratios.push(rep.ratio);
        }
        let max = ratios.iter().cloned().fold(0.0f64, f64::max);
        let p95 = percentile(&mut ratios, 0.95);
        assert!(p95 <= 1.0, "{name}: 95th percentile = {p95}");
        println!(
            "criterion 07 ({name}, p=10007): PASS, p95 defect/bound = {p95:.3e}, max = {max:.3e}"
        );
    }
}

#[test]
fn criterion_08_weil_defect_suite() {
    // 100 random boxes per prime on each of the three test curves:
    // 95th percentile defect/bound <= 1
    for &p in &[101u64, 1009, 10_007] {
        for (name, curve) in [
            ("hyperbola", hyperbola(p)),
            ("parabola", parabola(p)),
            ("y^2-x^3-x", elliptic(p)),
        ] {
            let mut ratios = Vec::with_capacity(100);
            for idx in 0..100u64 {
                let mut rng = sample::stream_rng(0xB0C5 + p, idx);
                let b = Rectangle::new(
                    sample::random_nonempty_interval(&mut rng, p),
                    sample::random_nonempty_interval(&mut rng, p),
                )
                .unwrap();
                ratios.push(weil_defect_plane(&curve, &b).unwrap().ratio);
            }
            let max = ratios.iter().cloned().fold(0.0f64, f64::max);
            let p95 = percentile(&mut ratios, 0.95);
            assert!(p95 <= 1.0, "p={p} {name}: 95th percentile = {p95}");
            println!(
                "criterion 08 (Weil defects, p={p}, {name}): PASS, p95 = {p95:.3e}, max = {max:.3e}"
            );
        }
    }
}

#[test]
fn criterion_09_translate_search_clean() {
    // p = 1009, r = 2, m_max = 7, 10^5 seeded trials: no counterexamples
    let found = translate_search(fp(1009), 2, 7, 100_000, 42).unwrap();
    assert!(found.is_empty(), "counterexamples: {found:?}");
    println!("criterion 09 (translate search): PASS, 100000 trials, 0 counterexamples");
}

#[test]
fn criterion_10_first_moment_closed_form_everywhere() {
    // M_1(H) = H (T - N) on every moment configuration used in this suite
    let mut checked = 0u64;
    let mut configs: Vec<(PlaneCurve, u64, CyclicInterval, Vec<u64>)> = Vec::new();
    for &p in &[7u64, 11, 31, 101, 1009] {
        for curve in [hyperbola(p), parabola(p), elliptic(p)] {
            for &(start, len) in &[(0u64, p), (0, p.div_ceil(2)), (3, p / 3)] {
                let j = CyclicInterval::new(p, start, len).unwrap();
                configs.push((curve.clone(), p, j, vec![1, 2, 5, 10]));
            }
        }
    }
    let p = 10_007u64;
    configs.push((
        hyperbola(p),
        p,
        CyclicInterval::new(p, 0, p.div_ceil(2)).unwrap(),
        vec![5, 10, 20],
    ));
    for (curve, p, j, hs) in &configs {
        let t: u64 = (0..*p).map(|x| curve.fiber_count(x, j).unwrap()).sum();
        for &h in hs {
            if h >= *p {
                continue;
            }
            let spec = MomentSpec::new(1, h, *j).unwrap();
            let m1 = empirical_moment(curve, &spec).unwrap();
            let expect =
                Rational::from(BigInt::from(h) * (BigInt::from(t) - BigInt::from(j.len())));
            assert_eq!(m1, expect, "p={p} H={h} J={j:?}");
            checked += 1;
        }
    }
    println!("criterion 10 (M_1 = H(T - N)): PASS, {checked} configurations");
}

#[test]
fn criterion_11_byte_identical_output_across_threads() {
    // the criterion-6 run repeated with 1, 4, 8 threads gives identical CSV
    let exe = env!("CARGO_BIN_EXE_curvebox");
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for &threads in &[1u32, 4, 8] {
        let path = dir.path().join(format!("gauss_{threads}.csv"));
        let status = Command::new(exe)
            .args([
                "gauss",
                "--p",
                "100003",
                "--curve",
                "x*y + 100002",
                "--H",
                "11",
                "--J",
                "0:50002",
                "--threads",
                &threads.to_string(),
                "--out",
            ])
            .arg(&path)
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1], "1 vs 4 threads");
    assert_eq!(outputs[0], outputs[2], "1 vs 8 threads");
    // the sharded library paths agree with the sequential ones too
    let curve = hyperbola(100_003);
    let j = CyclicInterval::new(100_003, 0, 50_002).unwrap();
    let seq = parallel::histogram(&curve, 11, &j, 1).unwrap();
    let par = parallel::histogram(&curve, 11, &j, 8).unwrap();
    assert_eq!(seq, par);
    println!(
        "criterion 11 (thread determinism): PASS, {} identical bytes across 1/4/8 threads",
        outputs[0].len()
    );
}
