//! Rectangle counts, pattern counts, the shifted space curve, and the
//! identity connecting the two counting routes.
//!
//! All index sets are cyclic intervals on the torus `Z/pZ`: the moment
//! sweeps sum boxes `(x, x+H]` over every residue x, which only closes up
//! when intervals wrap. Non-wrapping counts are recovered by splitting.

use crate::curve::PlaneCurve;
use crate::error::{Error, Result};
use crate::field::PrimeModulus;
use crate::poly::BivariatePoly;
use crate::Rational;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

/// A set of `len` consecutive residues mod p starting at `start`,
/// allowed to wrap past p-1. `len = p` is the full interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CyclicInterval {
    p: u64,
    start: u64,
    len: u64,
}

impl CyclicInterval {
    pub fn new(p: u64, start: u64, len: u64) -> Result<Self> {
        assert!(p >= 1, "modulus must be positive");
        if len > p {
            return Err(Error::IntervalTooLong { len, p });
        }
        Ok(CyclicInterval {
            p,
            start: start % p,
            len,
        })
    }

    pub fn full(p: u64) -> Self {
        CyclicInterval {
            p,
            start: 0,
            len: p,
        }
    }

    pub fn empty(p: u64) -> Self {
        CyclicInterval {
            p,
            start: 0,
            len: 0,
        }
    }

    /// The half-open window `(x, x+h]` as a cyclic interval.
    pub fn half_open_window(p: u64, x: u64, h: u64) -> Result<Self> {
        CyclicInterval::new(p, (x % p + 1) % p, h)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_full(&self) -> bool {
        self.len == self.p
    }

    pub fn contains(&self, v: u64) -> bool {
        self.offset_of(v).is_some()
    }

    /// Position of `v` inside the interval, if any.
    pub fn offset_of(&self, v: u64) -> Option<u64> {
        let v = v % self.p;
        let offset = if v >= self.start {
            v - self.start
        } else {
            v + self.p - self.start
        };
        (offset < self.len).then_some(offset)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let (p, start) = (self.p, self.start);
        (0..self.len).map(move |i| {
            let v = start + i;
            if v >= p {
                v - p
            } else {
                v
            }
        })
    }

    /// The mirror image `{p - v mod p : v in interval}`; for the empty
    /// interval the anchor point is mirrored, so mirroring twice is always
    /// the identity.
    pub fn mirror(&self) -> CyclicInterval {
        if self.len == 0 {
            return CyclicInterval {
                p: self.p,
                start: (self.p - self.start) % self.p,
                len: 0,
            };
        }
        let last = (self.start + self.len - 1) % self.p;
        CyclicInterval {
            p: self.p,
            start: (self.p - last) % self.p,
            len: self.len,
        }
    }
}

/// An axis-aligned rectangle `I x J` on the torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rectangle {
    pub i: CyclicInterval,
    pub j: CyclicInterval,
}

impl Rectangle {
    pub fn new(i: CyclicInterval, j: CyclicInterval) -> Result<Self> {
        if i.p() != j.p() {
            return Err(Error::ModulusMismatch {
                left: i.p(),
                right: j.p(),
            });
        }
        Ok(Rectangle { i, j })
    }

    pub fn volume(&self) -> u64 {
        self.i.len() * self.j.len()
    }
}

/// Shift vectors `a`, `b` of common length s with all `a_i` nonzero and
/// the ratios `a_i^{-1} b_i` pairwise distinct mod p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternSpec {
    modulus: PrimeModulus,
    a: Vec<u64>,
    b: Vec<u64>,
}

impl PatternSpec {
    pub fn new(modulus: PrimeModulus, a: Vec<u64>, b: Vec<u64>) -> Result<Self> {
        assert_eq!(a.len(), b.len(), "a and b must have the same length");
        if a.is_empty() {
            return Err(Error::EmptyPattern);
        }
        let p = modulus.p();
        if a.len() as u64 > p {
            return Err(Error::PatternTooLong { s: a.len(), p });
        }
        let a: Vec<u64> = a.into_iter().map(|v| v % p).collect();
        let b: Vec<u64> = b.into_iter().map(|v| v % p).collect();
        let spec = PatternSpec { modulus, a, b };
        let ratios = spec.ratios()?;
        let mut seen: Vec<(u64, usize)> = ratios.iter().copied().zip(0..).collect();
        seen.sort_unstable();
        for w in seen.windows(2) {
            if w[0].0 == w[1].0 {
                let (first, second) = (w[0].1.min(w[1].1), w[0].1.max(w[1].1));
                return Err(Error::DuplicateShiftRatio { first, second });
            }
        }
        Ok(spec)
    }

    pub fn s(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[u64] {
        &self.a
    }

    pub fn b(&self) -> &[u64] {
        &self.b
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    /// The ratios `a_i^{-1} b_i`; errors when some `a_i = 0`.
    pub fn ratios(&self) -> Result<Vec<u64>> {
        let m = self.modulus;
        self.a
            .iter()
            .zip(self.b.iter())
            .enumerate()
            .map(|(idx, (&ai, &bi))| {
                if ai == 0 {
                    return Err(Error::ZeroShift { index: idx });
                }
                Ok(m.mul(m.inv(ai)?, bi))
            })
            .collect()
    }
}

/// One defining equation of the shifted space curve: `f(a_i x + b_i, y_i)`,
/// depending only on x and the y-variable with this index (1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftedEquation {
    pub y_index: usize,
    pub poly: BivariatePoly,
}

/// The space curve in (s+1)-space cut out by `f(a_i x + b_i, y_i) = 0`.
/// Its degree is at most `d^s` (recorded as a bound, not computed).
#[derive(Clone, Debug)]
pub struct ShiftedCurve {
    modulus: PrimeModulus,
    base_degree: u32,
    spec: PatternSpec,
    equations: Vec<ShiftedEquation>,
}

impl ShiftedCurve {
    pub fn s(&self) -> usize {
        self.spec.s()
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn spec(&self) -> &PatternSpec {
        &self.spec
    }

    pub fn equations(&self) -> &[ShiftedEquation] {
        &self.equations
    }

    pub fn base_degree(&self) -> u32 {
        self.base_degree
    }

    /// Upper bound `d^s` for the degree of the space curve.
    pub fn degree_bound(&self) -> f64 {
        libm::pow(self.base_degree as f64, self.s() as f64)
    }
}

/// Builds the shifted space curve, validating the pattern hypotheses.
pub fn build_shifted_curve(curve: &PlaneCurve, spec: &PatternSpec) -> Result<ShiftedCurve> {
    check_same_modulus(curve.p(), spec.modulus().p())?;
    let equations = spec
        .a()
        .iter()
        .zip(spec.b().iter())
        .enumerate()
        .map(|(idx, (&a, &b))| {
            Ok(ShiftedEquation {
                y_index: idx + 1,
                poly: curve.polynomial().shift_x(a, b, idx)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ShiftedCurve {
        modulus: curve.modulus(),
        base_degree: curve.degree(),
        spec: spec.clone(),
        equations,
    })
}

fn check_same_modulus(left: u64, right: u64) -> Result<()> {
    if left != right {
        return Err(Error::ModulusMismatch { left, right });
    }
    Ok(())
}

/// `N_B(C)`: points of the curve inside the rectangle.
pub fn count_in_rectangle(curve: &PlaneCurve, b: &Rectangle) -> Result<u64> {
    check_same_modulus(curve.p(), b.i.p())?;
    let mut total = 0u64;
    for x in b.i.iter() {
        total += curve.fiber_count(x, &b.j)?;
    }
    Ok(total)
}

/// `P_{a,b}(C; I, J)`: the number of s-tuples of curve points
/// `(a_i x + b_i, y_i)` with a common `x in I` and all `y_i in J`.
/// Multiplies fiber counts, so it stays meaningful when columns carry
/// more than one point.
pub fn count_patterns(
    curve: &PlaneCurve,
    spec: &PatternSpec,
    i: &CyclicInterval,
    j: &CyclicInterval,
) -> Result<u64> {
    check_same_modulus(curve.p(), spec.modulus().p())?;
    check_same_modulus(curve.p(), i.p())?;
    check_same_modulus(curve.p(), j.p())?;
    // surface hypothesis violations eagerly, like the shifted route does
    spec.ratios()?;
    let m = curve.modulus();
    let mut total: u128 = 0;
    for x in i.iter() {
        let mut product: u128 = 1;
        for (&a, &b) in spec.a().iter().zip(spec.b().iter()) {
            let col = m.add(m.mul(a, x), b);
            let c = curve.fiber_count(col, j)?;
            product = product
                .checked_mul(c as u128)
                .expect("pattern product fits in u128");
            if product == 0 {
                break;
            }
        }
        total += product;
    }
    Ok(total.try_into().expect("pattern count fits in u64"))
}

/// `N_B(C_{a,b})` for the box `I x J^s`: counted independently of
/// [`count_patterns`] through the expanded equations of the space curve.
pub fn count_shifted_points(
    shifted: &ShiftedCurve,
    i: &CyclicInterval,
    j: &CyclicInterval,
) -> Result<u64> {
    let box_: Vec<CyclicInterval> = core::iter::once(*i)
        .chain(core::iter::repeat_n(*j, shifted.s()))
        .collect();
    count_shifted_points_box(shifted, &box_)
}

/// Shifted-curve count in a general box `I_0 x I_1 x ... x I_s` (first
/// interval constrains x, interval k constrains `y_k`).
pub fn count_shifted_points_box(shifted: &ShiftedCurve, box_: &[CyclicInterval]) -> Result<u64> {
    if box_.len() != shifted.s() + 1 {
        return Err(Error::BoxDimension {
            expected: shifted.s() + 1,
            got: box_.len(),
        });
    }
    let p = shifted.modulus().p();
    for interval in box_ {
        check_same_modulus(p, interval.p())?;
    }
    let mut total: u128 = 0;
    for x in box_[0].iter() {
        let mut product: u128 = 1;
        for (eq, j_k) in shifted.equations().iter().zip(box_[1..].iter()) {
            let g = eq.poly.substitute_x(x);
            if g.is_zero() {
                return Err(Error::VerticalLine { x });
            }
            let c = g
                .roots()?
                .into_iter()
                .filter(|&(y, _)| j_k.contains(y))
                .count() as u128;
            product = product.checked_mul(c).expect("box count fits in u128");
            if product == 0 {
                break;
            }
        }
        total += product;
    }
    Ok(total.try_into().expect("shifted count fits in u64"))
}

/// Pattern count against its main term `|I| (|J|/p)^s` and the error-term
/// bound `d^{2s} sqrt(p) log^{s+1} p` (exponent s when I is full).
#[derive(Clone, Debug)]
pub struct PatternReport {
    pub count: u64,
    pub main_term: Rational,
    pub defect: Rational,
    pub bound: f64,
    pub ratio: f64,
}

pub fn main_term_defect(
    curve: &PlaneCurve,
    spec: &PatternSpec,
    i: &CyclicInterval,
    j: &CyclicInterval,
) -> Result<PatternReport> {
    let count = count_patterns(curve, spec, i, j)?;
    pattern_report_from_count(curve, spec, i, j, count)
}

/// Report assembly for a count that was already computed (e.g. by a
/// sharded sweep).
pub fn pattern_report_from_count(
    curve: &PlaneCurve,
    spec: &PatternSpec,
    i: &CyclicInterval,
    j: &CyclicInterval,
    count: u64,
) -> Result<PatternReport> {
    let p = curve.p();
    let s = spec.s() as u32;
    let main_term = Rational::new(
        BigInt::from(i.len()) * BigInt::from(j.len()).pow(s),
        BigInt::from(p).pow(s),
    );
    let defect = (Rational::from(BigInt::from(count)) - &main_term).abs();
    let log_exp = if i.is_full() { s } else { s + 1 };
    let bound = error_bound(p, curve.degree() as f64, 2 * s, 1, log_exp);
    let ratio = rational_to_f64(&defect) / bound;
    Ok(PatternReport {
        count,
        main_term,
        defect,
        bound,
        ratio,
    })
}

/// Rectangle count against the uniform-distribution main term
/// `N(C) vol(B)/p^2` with the classical bound `d^2 sqrt(p) log^2 p`.
#[derive(Clone, Debug)]
pub struct RectangleReport {
    pub count: u64,
    pub n_total: u64,
    pub main_term: Rational,
    pub defect: Rational,
    pub bound: f64,
    pub ratio: f64,
}

pub fn rectangle_report(curve: &PlaneCurve, b: &Rectangle) -> Result<RectangleReport> {
    let count = count_in_rectangle(curve, b)?;
    rectangle_report_from_count(curve, b, count)
}

/// Report assembly for a rectangle count computed elsewhere.
pub fn rectangle_report_from_count(
    curve: &PlaneCurve,
    b: &Rectangle,
    count: u64,
) -> Result<RectangleReport> {
    let n_total = curve.point_count();
    let p = curve.p();
    let main_term = Rational::new(
        BigInt::from(n_total) * BigInt::from(b.volume()),
        BigInt::from(p) * BigInt::from(p),
    );
    let defect = (Rational::from(BigInt::from(count)) - &main_term).abs();
    let bound = error_bound(p, curve.degree() as f64, 2, 1, 2);
    let ratio = rational_to_f64(&defect) / bound;
    Ok(RectangleReport {
        count,
        n_total,
        main_term,
        defect,
        bound,
        ratio,
    })
}

/// `d^deg_exp * p^(1/2) * log(p)^log_exp` (sqrt_exp is the power of
/// sqrt(p); always 1 here but kept explicit for readability at call
/// sites).
pub(crate) fn error_bound(p: u64, d: f64, deg_exp: u32, sqrt_exp: u32, log_exp: u32) -> f64 {
    let pf = p as f64;
    libm::pow(d, deg_exp as f64)
        * libm::pow(libm::sqrt(pf), sqrt_exp as f64)
        * libm::pow(libm::log(pf), log_exp as f64)
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::INFINITY)
}
