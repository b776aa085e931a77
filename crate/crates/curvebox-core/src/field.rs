//! Arithmetic in `F_p` for odd primes `p < 2^62`.
//!
//! [`PrimeModulus`] carries the prime together with a reduction strategy
//! chosen at construction: moduli below `2^31` get a Barrett-style
//! multiply-shift reduction, larger ones reduce through `u128` division.
//! Both paths produce bit-identical results. All products fit in 128-bit
//! intermediates because `p < 2^62`.

use crate::error::{Error, Result};
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

/// Largest supported modulus (exclusive): products must fit in `u128`.
pub const MAX_MODULUS: u64 = 1 << 62;

const BARRETT_LIMIT: u64 = 1 << 31;
const BARRETT_SHIFT: u32 = 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Reducer {
    /// Plain `u128` remainder.
    Wide,
    /// `m = floor(2^62 / p)` for `p < 2^31`; reduces any `x < 2^62`.
    Barrett { m: u64 },
}

/// An odd prime modulus `3 <= p < 2^62`, validated at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeModulus {
    p: u64,
    reducer: Reducer,
}

impl PrimeModulus {
    /// Validates `3 <= p < 2^62`, p odd and prime (deterministic check).
    pub fn new(p: u64) -> Result<Self> {
        if !(3..MAX_MODULUS).contains(&p) || p.is_multiple_of(2) {
            return Err(Error::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let reducer = if p < BARRETT_LIMIT {
            Reducer::Barrett {
                m: ((1u128 << BARRETT_SHIFT) / p as u128) as u64,
            }
        } else {
            Reducer::Wide
        };
        Ok(PrimeModulus { p, reducer })
    }

    #[inline]
    pub fn p(self) -> u64 {
        self.p
    }

    /// Wraps a (possibly unreduced) integer as a field element.
    #[inline]
    pub fn element(self, value: u64) -> FieldElement {
        FieldElement {
            value: value % self.p,
            modulus: self,
        }
    }

    /// Reduces an arbitrary product `x < p^2` with the selected strategy.
    #[inline]
    fn reduce_product(self, x: u128) -> u64 {
        match self.reducer {
            Reducer::Wide => (x % self.p as u128) as u64,
            Reducer::Barrett { m } => {
                // x < p^2 < 2^62, so the quotient estimate is off by at
                // most a few multiples of p.
                let x = x as u64;
                let q = ((x as u128 * m as u128) >> BARRETT_SHIFT) as u64;
                let mut r = x - q * self.p;
                while r >= self.p {
                    r -= self.p;
                }
                r
            }
        }
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        debug_assert!(a < self.p);
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        self.reduce_product(a as u128 * b as u128)
    }

    /// Square-and-multiply exponentiation.
    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        debug_assert!(base < self.p);
        let mut acc = 1u64;
        while exp != 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        debug_assert!(a < self.p);
        let (mut r0, mut r1) = (self.p as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1, "gcd(a, p) = 1 for prime p and a != 0");
        let t = t0.rem_euclid(self.p as i128) as u64;
        Ok(t)
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// A residue in `[0, p)` tagged with its modulus.
///
/// Arithmetic operators panic when operands belong to different fields;
/// mixing fields is a programming error, not a data condition.
#[derive(Clone, Copy, Debug)]
pub struct FieldElement {
    value: u64,
    modulus: PrimeModulus,
}

impl FieldElement {
    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    pub fn inv(self) -> Result<FieldElement> {
        Ok(FieldElement {
            value: self.modulus.inv(self.value)?,
            modulus: self.modulus,
        })
    }

    pub fn pow(self, exp: u64) -> FieldElement {
        FieldElement {
            value: self.modulus.pow(self.value, exp),
            modulus: self.modulus,
        }
    }

    #[inline]
    fn same_field(self, other: FieldElement) -> PrimeModulus {
        assert_eq!(
            self.modulus.p, other.modulus.p,
            "modulus mismatch: {} vs {}",
            self.modulus.p, other.modulus.p
        );
        self.modulus
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.modulus.p == other.modulus.p && self.value == other.value
    }
}

impl Eq for FieldElement {}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        let m = self.same_field(rhs);
        m.element(m.add(self.value, rhs.value))
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        let m = self.same_field(rhs);
        m.element(m.sub(self.value, rhs.value))
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        let m = self.same_field(rhs);
        m.element(m.mul(self.value, rhs.value))
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.modulus.element(self.modulus.neg(self.value))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn mul_mod_u64(a: u64, b: u64, n: u64) -> u64 {
    (a as u128 * b as u128 % n as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, n: u64) -> u64 {
    let mut acc = 1u64 % n;
    base %= n;
    while exp != 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, n);
        }
        base = mul_mod_u64(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Witnesses making Miller-Rabin deterministic for all n < 3.3 * 10^24,
/// which covers the whole u64 range.
const MILLER_RABIN_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality check for `n < 2^64`.
///
/// # Panics
///
/// Panics if `n < 2`.
pub fn is_prime(n: u64) -> bool {
    assert!(n >= 2, "is_prime requires n >= 2, got {n}");
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let trailing = (n - 1).trailing_zeros();
    let odd_part = (n - 1) >> trailing;
    'witness: for &w in MILLER_RABIN_WITNESSES.iter() {
        let a = w % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod_u64(a, odd_part, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..trailing {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
