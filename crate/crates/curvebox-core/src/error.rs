//! Error type shared by all modules.
//!
//! Data-dependent failures (a curve with a vertical line component, a
//! violated distinctness hypothesis, ...) are reported through [`Error`].
//! Plain programmer errors, such as mixing elements of different fields in
//! arithmetic operators, panic instead.

use alloc::string::String;
use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Modulus failed the primality check.
    NotPrime(u64),
    /// Modulus outside the supported range `3 <= p < 2^62`.
    ModulusOutOfRange(u64),
    /// Attempt to invert zero.
    ZeroInverse,
    /// Operation on the zero polynomial (an identically zero fiber).
    ZeroPolynomial,
    /// Bivariate polynomial has no non-constant term.
    ConstantPolynomial,
    /// Curve polynomial does not involve y.
    NoYDependence,
    /// Fiber at this x is identically zero: f has a vertical line component,
    /// so C is not absolutely irreducible of the assumed shape.
    VerticalLine { x: u64 },
    /// Shift coefficient a_i is zero; the a_i must be coprime to p.
    ZeroShift { index: usize },
    /// Two shifted ratios coincide; the a_i^{-1} b_i must be pairwise
    /// distinct mod p.
    DuplicateShiftRatio { first: usize, second: usize },
    /// Pattern length s = 0.
    EmptyPattern,
    /// More shifts requested than distinct ratios exist mod p.
    PatternTooLong { s: usize, p: u64 },
    /// Interval length exceeds p.
    IntervalTooLong { len: u64, p: u64 },
    /// Objects built over different prime fields were combined.
    ModulusMismatch { left: u64, right: u64 },
    /// Box dimension does not match the ambient space of the object.
    BoxDimension { expected: usize, got: usize },
    /// Window width must satisfy 1 <= H < p.
    WindowTooWide { h: u64, p: u64 },
    /// Binomial parameter outside [0, 1].
    ProbabilityOutOfRange,
    /// Normal comparison requested with zero model variance.
    ZeroVariance,
    /// A computation gated on the one-point-per-column condition was asked
    /// for on a curve/interval pair violating it.
    ConditionOneViolated { x: u64, y1: u64, y2: u64 },
    /// Translate search hypothesis `4|M| < p^{1/r}` violated.
    TranslateHypothesis { m_max: u64, p: u64, r: u32 },
    /// Translate search needs r >= 2 distinct shifts, and at most p of them.
    BadTranslateArity { r: u32, p: u64 },
    /// Polynomial text could not be parsed; `pos` is a byte offset into
    /// the (single-line) expression.
    Parse { pos: usize, msg: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(n) => write!(f, "{n} is not prime"),
            Error::ModulusOutOfRange(n) => {
                write!(f, "modulus {n} outside supported range 3 <= p < 2^62")
            }
            Error::ZeroInverse => write!(f, "zero has no inverse"),
            Error::ZeroPolynomial => write!(f, "identically zero fiber"),
            Error::ConstantPolynomial => write!(f, "polynomial has no non-constant term"),
            Error::NoYDependence => write!(f, "curve polynomial does not involve y"),
            Error::VerticalLine { x } => write!(
                f,
                "vertical line component at x = {x}: curve is not absolutely irreducible of the assumed shape"
            ),
            Error::ZeroShift { index } => write!(
                f,
                "a_{} = 0 violates the hypothesis that all a_i are coprime to p",
                index + 1
            ),
            Error::DuplicateShiftRatio { first, second } => write!(
                f,
                "distinctness of the ratios a_i^-1*b_i violated: entries {} and {} coincide",
                first + 1,
                second + 1
            ),
            Error::EmptyPattern => write!(f, "pattern length s must be at least 1"),
            Error::PatternTooLong { s, p } => write!(
                f,
                "cannot pick {s} pairwise distinct ratios mod {p}"
            ),
            Error::IntervalTooLong { len, p } => {
                write!(f, "interval length {len} exceeds modulus {p}")
            }
            Error::ModulusMismatch { left, right } => {
                write!(f, "modulus mismatch: {left} vs {right}")
            }
            Error::BoxDimension { expected, got } => {
                write!(f, "box has {got} intervals, ambient space needs {expected}")
            }
            Error::WindowTooWide { h, p } => write!(
                f,
                "window width H = {h} must satisfy 1 <= H < p = {p} (window must not self-overlap)"
            ),
            Error::ProbabilityOutOfRange => write!(f, "binomial parameter outside [0, 1]"),
            Error::ZeroVariance => write!(f, "model variance is zero"),
            Error::ConditionOneViolated { x, y1, y2 } => write!(
                f,
                "one-point-per-column condition fails at x = {x} (y = {y1} and y = {y2} both lie in J)"
            ),
            Error::TranslateHypothesis { m_max, p, r } => write!(
                f,
                "hypothesis 4*|M| < p^(1/r) violated: (4*{m_max})^{r} >= {p}"
            ),
            Error::BadTranslateArity { r, p } => {
                write!(f, "need 2 <= r <= p distinct shifts, got r = {r} for p = {p}")
            }
            Error::Parse { pos, msg } => {
                write!(f, "parse error at line 1, column {}: {msg}", pos + 1)
            }
        }
    }
}

impl core::error::Error for Error {}
