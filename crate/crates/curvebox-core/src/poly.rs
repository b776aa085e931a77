//! Bivariate polynomials over `F_p`, their univariate specializations, and
//! root finding over the prime field.
//!
//! Coefficients are stored sparsely: test curves such as the hyperbola
//! `x*y + 6` or hyperelliptic equations have a handful of terms. Univariate
//! specializations `g(y) = f(x0, y)` are dense and tiny (degree = y-degree
//! of the curve).
//!
//! Root finding dispatches on degree and field size: linear fibers are
//! solved by one inversion, small fields are scanned exhaustively, and
//! large fields use `gcd(g, y^p - y)` to count distinct roots followed by
//! equal-degree splitting with deterministic shifts. The paths agree
//! bit-exactly (tested).

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeModulus};
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Exponent cap; keeps binomial tables and evaluation gaps small.
pub const MAX_EXPONENT: u32 = 4096;

/// Fields of size at most this are root-searched by exhaustive scan.
const SCAN_LIMIT: u64 = 4096;

/// A bivariate polynomial over `F_p` with at least one non-constant term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariatePoly {
    modulus: PrimeModulus,
    /// (x-exponent, y-exponent) -> nonzero coefficient.
    coeffs: BTreeMap<(u32, u32), u64>,
    /// Rows grouped by y-exponent, descending; inner terms sorted by
    /// descending x-exponent. Derived from `coeffs` at construction.
    rows: Vec<(u32, Vec<(u32, u64)>)>,
    total_degree: u32,
    y_degree: u32,
    max_x_degree: u32,
}

impl BivariatePoly {
    /// Builds a polynomial from (x-exponent, y-exponent, coefficient)
    /// terms. Coefficients are reduced mod p, repeated monomials are
    /// merged, zero terms dropped.
    pub fn from_terms<I>(modulus: PrimeModulus, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32, u64)>,
    {
        let p = modulus.p();
        let mut coeffs: BTreeMap<(u32, u32), u64> = BTreeMap::new();
        for (i, j, c) in terms {
            assert!(
                i <= MAX_EXPONENT && j <= MAX_EXPONENT,
                "exponent exceeds supported maximum {MAX_EXPONENT}"
            );
            let c = c % p;
            let entry = coeffs.entry((i, j)).or_insert(0);
            *entry = modulus.add(*entry, c);
            if *entry == 0 {
                coeffs.remove(&(i, j));
            }
        }
        let total_degree = coeffs.keys().map(|&(i, j)| i + j).max().unwrap_or(0);
        if total_degree == 0 {
            return Err(Error::ConstantPolynomial);
        }
        let y_degree = coeffs.keys().map(|&(_, j)| j).max().unwrap_or(0);
        let max_x_degree = coeffs.keys().map(|&(i, _)| i).max().unwrap_or(0);
        let mut rows: Vec<(u32, Vec<(u32, u64)>)> = Vec::new();
        for (&(i, j), &c) in coeffs.iter() {
            match rows.iter_mut().find(|(jj, _)| *jj == j) {
                Some((_, row)) => row.push((i, c)),
                None => rows.push((j, vec![(i, c)])),
            }
        }
        for (_, row) in rows.iter_mut() {
            row.sort_by_key(|term| core::cmp::Reverse(term.0));
        }
        rows.sort_by_key(|row| core::cmp::Reverse(row.0));
        Ok(BivariatePoly {
            modulus,
            coeffs,
            rows,
            total_degree,
            y_degree,
            max_x_degree,
        })
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn total_degree(&self) -> u32 {
        self.total_degree
    }

    pub fn y_degree(&self) -> u32 {
        self.y_degree
    }

    pub fn max_x_degree(&self) -> u32 {
        self.max_x_degree
    }

    /// Iterates the nonzero terms as ((x-exp, y-exp), coefficient).
    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), u64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    /// Horner evaluation of one row `sum_i c_i x^i` (terms sorted by
    /// descending i), bridging sparse exponent gaps by powering.
    fn eval_row(&self, row: &[(u32, u64)], x: u64) -> u64 {
        let m = self.modulus;
        let mut acc = 0u64;
        let mut prev: Option<u32> = None;
        for &(i, c) in row {
            if let Some(pi) = prev {
                acc = m.mul(acc, m.pow(x, (pi - i) as u64));
            }
            acc = m.add(acc, c);
            prev = Some(i);
        }
        if let Some(last) = prev {
            acc = m.mul(acc, m.pow(x, last as u64));
        }
        acc
    }

    /// Value of `f(x, y)`; nested Horner in y then x.
    pub fn eval(&self, x: u64, y: u64) -> u64 {
        let m = self.modulus;
        debug_assert!(x < m.p() && y < m.p());
        let mut acc = 0u64;
        let mut prev: Option<u32> = None;
        for (j, row) in self.rows.iter() {
            if let Some(pj) = prev {
                acc = m.mul(acc, m.pow(y, (pj - j) as u64));
            }
            acc = m.add(acc, self.eval_row(row, x));
            prev = Some(*j);
        }
        if let Some(last) = prev {
            acc = m.mul(acc, m.pow(y, last as u64));
        }
        acc
    }

    /// Field-element wrapper around [`Self::eval`].
    ///
    /// Panics if `x` or `y` belongs to a different field.
    pub fn eval_elem(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        assert_eq!(
            x.modulus().p(),
            self.modulus.p(),
            "modulus mismatch: {} vs {}",
            x.modulus().p(),
            self.modulus.p()
        );
        assert_eq!(
            y.modulus().p(),
            self.modulus.p(),
            "modulus mismatch: {} vs {}",
            y.modulus().p(),
            self.modulus.p()
        );
        self.modulus.element(self.eval(x.value(), y.value()))
    }

    /// The specialization `g(y) = f(x0, y)`; may be the zero polynomial.
    pub fn substitute_x(&self, x0: u64) -> UnivariatePoly {
        debug_assert!(x0 < self.modulus.p());
        let mut coeffs = vec![0u64; self.y_degree as usize + 1];
        for (j, row) in self.rows.iter() {
            coeffs[*j as usize] = self.eval_row(row, x0);
        }
        UnivariatePoly::new(self.modulus, coeffs)
    }

    /// The substituted polynomial `f(a*x + b, y)`, expanded exactly.
    ///
    /// Errors with [`Error::ZeroShift`] when `a = 0` (the substitution must
    /// stay invertible). `index` is only used for error reporting.
    pub fn shift_x(&self, a: u64, b: u64, index: usize) -> Result<BivariatePoly> {
        let m = self.modulus;
        let (a, b) = (a % m.p(), b % m.p());
        if a == 0 {
            return Err(Error::ZeroShift { index });
        }
        // Pascal's triangle mod p up to the largest x-exponent: binomial
        // coefficients can exceed u64 as integers, so build them mod p.
        let n = self.max_x_degree as usize;
        let mut pascal: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
        pascal.push(vec![1]);
        for i in 1..=n {
            let prev = &pascal[i - 1];
            let mut row = vec![0u64; i + 1];
            row[0] = 1;
            row[i] = 1;
            for t in 1..i {
                row[t] = m.add(prev[t - 1], prev[t]);
            }
            pascal.push(row);
        }
        let mut terms: Vec<(u32, u32, u64)> = Vec::new();
        for (&(i, j), &c) in self.coeffs.iter() {
            // (a x + b)^i = sum_t C(i,t) a^t b^(i-t) x^t
            let i_us = i as usize;
            let mut a_pow = 1u64; // a^t
            for (t, &binom) in pascal[i_us].iter().enumerate() {
                let coef = m.mul(c, m.mul(binom, m.mul(a_pow, m.pow(b, (i_us - t) as u64))));
                if coef != 0 {
                    terms.push((t as u32, j, coef));
                }
                a_pow = m.mul(a_pow, a);
            }
        }
        BivariatePoly::from_terms(m, terms)
    }

    /// Parses the polynomial text format: terms `c*x^i*y^j` joined by `+`
    /// (or `-`), with coefficients reduced mod p and omitted exponents or
    /// coefficients allowed (`x`, `y^2`, `3`).
    pub fn parse(modulus: PrimeModulus, text: &str) -> Result<Self> {
        let mut parser = Parser {
            modulus,
            bytes: text.as_bytes(),
            pos: 0,
        };
        let terms = parser.parse_poly()?;
        BivariatePoly::from_terms(modulus, terms)
    }
}

impl fmt::Display for BivariatePoly {
    /// Canonical text form: terms in descending (x-exp, y-exp) order,
    /// joined by ` + `, e.g. `x*y + 6`. Re-parses to the same polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&(i, j), &c) in self.coeffs.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            if c != 1 || (i == 0 && j == 0) {
                factors.push(alloc::format!("{c}"));
            }
            match i {
                0 => {}
                1 => factors.push(String::from("x")),
                _ => factors.push(alloc::format!("x^{i}")),
            }
            match j {
                0 => {}
                1 => factors.push(String::from("y")),
                _ => factors.push(alloc::format!("y^{j}")),
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    modulus: PrimeModulus,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: String::from(msg),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    /// Digits reduced mod p on the fly, so arbitrarily long literals work.
    fn parse_number(&mut self) -> Result<u64> {
        let p = self.modulus.p();
        let mut value = 0u64;
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                value = self
                    .modulus
                    .add(self.modulus.mul(value, 10 % p), (c - b'0') as u64 % p);
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.pos == start {
            return self.err("expected a number");
        }
        Ok(value)
    }

    fn parse_exponent(&mut self) -> Result<u32> {
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                value = value.saturating_mul(10).saturating_add((c - b'0') as u64);
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.pos == start {
            return self.err("expected an exponent after '^'");
        }
        if value > MAX_EXPONENT as u64 {
            return self.err("exponent too large");
        }
        Ok(value as u32)
    }

    fn parse_factor(&mut self, coeff: &mut u64, i: &mut u32, j: &mut u32) -> Result<()> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.parse_number()?;
                *coeff = self.modulus.mul(*coeff, n);
                Ok(())
            }
            Some(v @ (b'x' | b'y')) => {
                self.pos += 1;
                let exp = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.parse_exponent()?
                } else {
                    1
                };
                let slot = if v == b'x' { i } else { j };
                if *slot as u64 + exp as u64 > MAX_EXPONENT as u64 {
                    return self.err("exponent too large");
                }
                *slot += exp;
                Ok(())
            }
            Some(_) => self.err("expected a coefficient, 'x' or 'y'"),
            None => self.err("unexpected end of input"),
        }
    }

    fn parse_term(&mut self) -> Result<(u32, u32, u64)> {
        let mut coeff = 1u64;
        let mut i = 0u32;
        let mut j = 0u32;
        self.skip_ws();
        self.parse_factor(&mut coeff, &mut i, &mut j)?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.skip_ws();
                self.parse_factor(&mut coeff, &mut i, &mut j)?;
            } else {
                break;
            }
        }
        Ok((i, j, coeff))
    }

    fn parse_poly(&mut self) -> Result<Vec<(u32, u32, u64)>> {
        let mut terms = Vec::new();
        self.skip_ws();
        let mut negate = false;
        if self.peek() == Some(b'-') {
            negate = true;
            self.pos += 1;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        loop {
            let (i, j, c) = self.parse_term()?;
            let c = if negate { self.modulus.neg(c) } else { c };
            terms.push((i, j, c));
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => {
                    negate = false;
                    self.pos += 1;
                }
                Some(b'-') => {
                    negate = true;
                    self.pos += 1;
                }
                Some(_) => return self.err("expected '+', '-' or end of input"),
            }
        }
        Ok(terms)
    }
}

/// A dense univariate polynomial over `F_p`; an empty coefficient vector is
/// the zero polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivariatePoly {
    modulus: PrimeModulus,
    /// coeffs[i] is the coefficient of y^i; trimmed, so the last entry is
    /// nonzero unless the polynomial is zero.
    coeffs: Vec<u64>,
}

impl UnivariatePoly {
    pub fn new(modulus: PrimeModulus, mut coeffs: Vec<u64>) -> Self {
        let p = modulus.p();
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        UnivariatePoly { modulus, coeffs }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> Option<u64> {
        self.coeffs.last().copied()
    }

    /// Horner evaluation.
    pub fn eval(&self, y: u64) -> u64 {
        let m = self.modulus;
        debug_assert!(y < m.p());
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = m.add(m.mul(acc, y), c);
        }
        acc
    }

    /// Synthetic division by `(y - r)`: returns (quotient, remainder).
    pub fn divide_linear(&self, r: u64) -> (UnivariatePoly, u64) {
        let m = self.modulus;
        if self.coeffs.is_empty() {
            return (self.clone(), 0);
        }
        let mut quotient = vec![0u64; self.coeffs.len() - 1];
        let mut acc = 0u64;
        for (idx, &c) in self.coeffs.iter().enumerate().rev() {
            acc = m.add(m.mul(acc, r), c);
            if idx > 0 {
                quotient[idx - 1] = acc;
            }
        }
        (UnivariatePoly::new(m, quotient), acc)
    }

    /// Multiplicity of `r` as a root (0 if not a root), by repeated
    /// synthetic division.
    pub fn root_multiplicity(&self, r: u64) -> u32 {
        let mut mult = 0u32;
        let mut current = self.clone();
        loop {
            if current.is_zero() {
                break;
            }
            let (q, rem) = current.divide_linear(r);
            if rem != 0 {
                break;
            }
            mult += 1;
            current = q;
        }
        mult
    }

    /// All roots in `F_p` with multiplicities, sorted by root value.
    ///
    /// Dispatches: linear polynomials are solved directly, fields of size
    /// at most `4096` are scanned, larger fields use the
    /// `gcd(g, y^p - y)` path. Errors on the zero polynomial.
    pub fn roots(&self) -> Result<Vec<(u64, u32)>> {
        match self.degree() {
            None => Err(Error::ZeroPolynomial),
            Some(0) => Ok(Vec::new()),
            Some(1) => {
                let m = self.modulus;
                let root = m.mul(m.neg(self.coeffs[0]), m.inv(self.coeffs[1])?);
                Ok(vec![(root, 1)])
            }
            Some(_) => {
                if self.modulus.p() <= SCAN_LIMIT {
                    self.roots_by_scan()
                } else {
                    self.roots_by_gcd()
                }
            }
        }
    }

    /// Reference path: evaluates at every point of `F_p`.
    pub fn roots_by_scan(&self) -> Result<Vec<(u64, u32)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let p = self.modulus.p();
        let mut out = Vec::new();
        for y in 0..p {
            if self.eval(y) == 0 {
                out.push((y, self.root_multiplicity(y)));
            }
        }
        Ok(out)
    }

    /// Large-field path: `h = gcd(g, y^p - y)` collects the distinct
    /// `F_p`-roots; `h` is then split into linear factors with
    /// deterministic shifts `(y + c)^((p-1)/2)`, and multiplicities are
    /// recovered by synthetic division. Agrees bit-exactly with
    /// [`Self::roots_by_scan`].
    pub fn roots_by_gcd(&self) -> Result<Vec<(u64, u32)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let m = self.modulus;
        let p = m.p();
        let monic = make_monic(m, self.coeffs.clone())?;
        if monic.len() == 1 {
            return Ok(Vec::new());
        }
        // y^p mod g, then gcd(g, y^p - y).
        let y_poly = vec![0u64, 1];
        let xp = poly_pow_mod(m, &y_poly, p, &monic)?;
        let mut xp_minus_y = xp;
        if xp_minus_y.len() < 2 {
            xp_minus_y.resize(2, 0);
        }
        xp_minus_y[1] = m.sub(xp_minus_y[1], 1);
        trim(&mut xp_minus_y);
        let squarefree = poly_gcd(m, monic.clone(), xp_minus_y)?;

        let mut roots: Vec<u64> = Vec::new();
        let mut stack = vec![squarefree];
        while let Some(w) = stack.pop() {
            match w.len() {
                0 | 1 => continue,
                2 => {
                    // monic linear: y + c0 -> root -c0
                    roots.push(m.neg(w[0]));
                    continue;
                }
                _ => {}
            }
            let mut split = None;
            for c in 0..p {
                // root at -c splits off a linear factor immediately
                if poly_eval_slice(m, &w, m.neg(c)) == 0 {
                    let root = m.neg(c);
                    let q = poly_div_exact_linear(m, &w, root);
                    split = Some((vec![m.sub(0, root), 1], q));
                    break;
                }
                // (y + c)^((p-1)/2) mod w separates roots by quadratic
                // character of (r + c)
                let shift = vec![c, 1];
                let t = poly_pow_mod(m, &shift, (p - 1) / 2, &w)?;
                let mut t_minus_1 = t;
                if t_minus_1.is_empty() {
                    t_minus_1 = vec![0];
                }
                t_minus_1[0] = m.sub(t_minus_1[0], 1);
                trim(&mut t_minus_1);
                let d = poly_gcd(m, w.clone(), t_minus_1)?;
                if d.len() > 1 && d.len() < w.len() {
                    let q = poly_div_exact(m, &w, &d)?;
                    split = Some((d, q));
                    break;
                }
            }
            let (d, q) = split.expect("squarefree split-of-linears always splits");
            stack.push(d);
            stack.push(q);
        }
        roots.sort_unstable();
        Ok(roots
            .into_iter()
            .map(|r| (r, self.root_multiplicity(r)))
            .collect())
    }
}

fn trim(coeffs: &mut Vec<u64>) {
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
}

fn poly_eval_slice(m: PrimeModulus, coeffs: &[u64], y: u64) -> u64 {
    let mut acc = 0u64;
    for &c in coeffs.iter().rev() {
        acc = m.add(m.mul(acc, y), c);
    }
    acc
}

fn make_monic(m: PrimeModulus, mut coeffs: Vec<u64>) -> Result<Vec<u64>> {
    trim(&mut coeffs);
    if coeffs.is_empty() {
        return Ok(coeffs);
    }
    let lead = *coeffs.last().unwrap();
    if lead != 1 {
        let inv = m.inv(lead)?;
        for c in coeffs.iter_mut() {
            *c = m.mul(*c, inv);
        }
    }
    Ok(coeffs)
}

fn poly_mul(m: PrimeModulus, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ca) in a.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (j, &cb) in b.iter().enumerate() {
            out[i + j] = m.add(out[i + j], m.mul(ca, cb));
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo the monic polynomial `g`.
fn poly_rem_monic(m: PrimeModulus, mut a: Vec<u64>, g: &[u64]) -> Vec<u64> {
    debug_assert_eq!(g.last(), Some(&1));
    let dg = g.len() - 1;
    while a.len() > dg {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - dg;
        if lead != 0 {
            for (t, &gc) in g.iter().enumerate() {
                let idx = shift + t;
                a[idx] = m.sub(a[idx], m.mul(lead, gc));
            }
        }
        a.pop();
        trim(&mut a);
        if a.is_empty() {
            break;
        }
    }
    a
}

fn poly_pow_mod(m: PrimeModulus, base: &[u64], mut exp: u64, g: &[u64]) -> Result<Vec<u64>> {
    debug_assert!(g.len() >= 2, "modulus polynomial must be non-constant");
    let mut acc = vec![1u64];
    let mut b = poly_rem_monic(m, base.to_vec(), g);
    while exp != 0 {
        if exp & 1 == 1 {
            acc = poly_rem_monic(m, poly_mul(m, &acc, &b), g);
        }
        b = poly_rem_monic(m, poly_mul(m, &b, &b), g);
        exp >>= 1;
    }
    Ok(acc)
}

/// Monic gcd by Euclid's algorithm.
fn poly_gcd(m: PrimeModulus, a: Vec<u64>, b: Vec<u64>) -> Result<Vec<u64>> {
    let mut a = make_monic(m, a)?;
    let mut b = make_monic(m, b)?;
    while !b.is_empty() {
        let r = poly_rem_monic(m, a, &b);
        a = b;
        b = make_monic(m, r)?;
    }
    Ok(a)
}

/// Exact division by a monic divisor (remainder known to vanish).
fn poly_div_exact(m: PrimeModulus, a: &[u64], g: &[u64]) -> Result<Vec<u64>> {
    debug_assert_eq!(g.last(), Some(&1));
    let mut rem = a.to_vec();
    let dg = g.len() - 1;
    if rem.len() <= dg {
        return Ok(Vec::new());
    }
    let mut quotient = vec![0u64; rem.len() - dg];
    while rem.len() > dg {
        let lead = *rem.last().unwrap();
        let shift = rem.len() - 1 - dg;
        quotient[shift] = lead;
        if lead != 0 {
            for (t, &gc) in g.iter().enumerate() {
                let idx = shift + t;
                rem[idx] = m.sub(rem[idx], m.mul(lead, gc));
            }
        }
        rem.pop();
        trim(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    debug_assert!(rem.is_empty(), "division was not exact");
    trim(&mut quotient);
    Ok(quotient)
}

fn poly_div_exact_linear(m: PrimeModulus, a: &[u64], root: u64) -> Vec<u64> {
    let mut quotient = vec![0u64; a.len() - 1];
    let mut acc = 0u64;
    for (idx, &c) in a.iter().enumerate().rev() {
        acc = m.add(m.mul(acc, root), c);
        if idx > 0 {
            quotient[idx - 1] = acc;
        }
    }
    trim(&mut quotient);
    quotient
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn hyperbola(p: u64) -> BivariatePoly {
        let m = fp(p);
        BivariatePoly::from_terms(m, [(1, 1, 1), (0, 0, p - 1)]).unwrap()
    }

    fn elliptic(p: u64) -> BivariatePoly {
        // y^2 - x^3 - x
        let m = fp(p);
        BivariatePoly::from_terms(m, [(0, 2, 1), (3, 0, p - 1), (1, 0, p - 1)]).unwrap()
    }

    #[test]
    fn eval_examples() {
        let f = hyperbola(7);
        assert_eq!(f.eval(3, 5), 0);
        assert_eq!(f.eval(0, 0), 6);
        let e = elliptic(7);
        assert_eq!(e.eval(3, 3), 0); // 9 - 27 - 3 = -21 = 0 mod 7
    }

    #[test]
    fn eval_elem_checks_modulus() {
        let f = hyperbola(7);
        let m = fp(7);
        assert_eq!(f.eval_elem(m.element(3), m.element(5)).value(), 0);
    }

    #[test]
    #[should_panic(expected = "modulus mismatch")]
    fn eval_elem_rejects_foreign_elements() {
        let f = hyperbola(7);
        let _ = f.eval_elem(fp(11).element(3), fp(7).element(5));
    }

    #[test]
    fn substitute_examples() {
        let e = elliptic(7);
        assert_eq!(e.substitute_x(0).coeffs(), &[0, 0, 1]); // y^2
        assert_eq!(e.substitute_x(1).coeffs(), &[5, 0, 1]); // y^2 + 5
        let f = hyperbola(7);
        assert_eq!(f.substitute_x(2).coeffs(), &[6, 2]); // 2y - 1
    }

    #[test]
    fn shift_examples() {
        let f = hyperbola(7);
        let same = f.shift_x(1, 0, 0).unwrap();
        assert_eq!(same, f);

        let shifted = f.shift_x(2, 3, 0).unwrap();
        let expect = BivariatePoly::from_terms(fp(7), [(1, 1, 2), (0, 1, 3), (0, 0, 6)]).unwrap();
        assert_eq!(shifted, expect); // 2xy + 3y - 1

        // y - x^2 over F_5 shifted by (1, 1): y - x^2 - 2x - 1
        let par = BivariatePoly::from_terms(fp(5), [(0, 1, 1), (2, 0, 4)]).unwrap();
        let shifted = par.shift_x(1, 1, 0).unwrap();
        let expect =
            BivariatePoly::from_terms(fp(5), [(0, 1, 1), (2, 0, 4), (1, 0, 3), (0, 0, 4)]).unwrap();
        assert_eq!(shifted, expect);

        assert_eq!(f.shift_x(0, 1, 3), Err(Error::ZeroShift { index: 3 }));
    }

    #[test]
    fn shift_agrees_pointwise_exhaustively() {
        for &p in &[5u64, 7, 11, 31] {
            let m = fp(p);
            let mut rng = ChaCha8Rng::seed_from_u64(10);
            for _ in 0..20 {
                let f = BivariatePoly::from_terms(
                    m,
                    (0..5).map(|_| {
                        (
                            rng.gen_range(0..4u32),
                            rng.gen_range(0..3u32),
                            rng.gen_range(0..p),
                        )
                    }),
                );
                let f = match f {
                    Ok(f) => f,
                    Err(_) => continue,
                };
                let a = rng.gen_range(1..p);
                let b = rng.gen_range(0..p);
                let g = f.shift_x(a, b, 0).unwrap();
                for x in 0..p {
                    for y in 0..p {
                        assert_eq!(g.eval(x, y), f.eval(m.add(m.mul(a, x), b), y));
                    }
                }
            }
        }
    }

    #[test]
    fn substitute_agrees_with_eval() {
        let p = 31;
        let m = fp(p);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let f = BivariatePoly::from_terms(
                m,
                (0..6).map(|_| {
                    (
                        rng.gen_range(0..5u32),
                        rng.gen_range(0..4u32),
                        rng.gen_range(0..p),
                    )
                }),
            );
            let f = match f {
                Ok(f) => f,
                Err(_) => continue,
            };
            for x0 in 0..p {
                let g = f.substitute_x(x0);
                for y in 0..p {
                    assert_eq!(g.eval(y), f.eval(x0, y));
                }
            }
        }
    }

    #[test]
    fn roots_examples() {
        let m = fp(7);
        let y2 = UnivariatePoly::new(m, vec![0, 0, 1]);
        assert_eq!(y2.roots().unwrap(), vec![(0, 2)]);

        let lin = UnivariatePoly::new(m, vec![6, 2]); // 2y - 1
        assert_eq!(lin.roots().unwrap(), vec![(4, 1)]);

        let quad = UnivariatePoly::new(m, vec![5, 0, 1]); // y^2 + 5
        assert_eq!(quad.roots().unwrap(), vec![(3, 1), (4, 1)]);

        let zero = UnivariatePoly::new(m, vec![0]);
        assert_eq!(zero.roots(), Err(Error::ZeroPolynomial));

        let constant = UnivariatePoly::new(m, vec![3]);
        assert_eq!(constant.roots().unwrap(), vec![]);
    }

    #[test]
    fn roots_satisfy_reported_multiplicity() {
        let m = fp(101);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let deg = rng.gen_range(1..6usize);
            let mut coeffs: Vec<u64> = (0..deg).map(|_| rng.gen_range(0..101)).collect();
            coeffs.push(rng.gen_range(1..101));
            let g = UnivariatePoly::new(m, coeffs);
            let mut total_mult = 0;
            for (r, mult) in g.roots().unwrap() {
                assert_eq!(g.eval(r), 0);
                assert_eq!(g.root_multiplicity(r), mult);
                total_mult += mult as usize;
            }
            assert!(total_mult <= g.degree().unwrap());
        }
    }

    #[test]
    fn dispatcher_matches_scan_oracle_small_fields() {
        for &p in &[3u64, 5, 7, 31, 101] {
            let m = fp(p);
            let mut rng = ChaCha8Rng::seed_from_u64(14);
            for _ in 0..30 {
                let deg = rng.gen_range(1..5usize);
                let mut coeffs: Vec<u64> = (0..deg).map(|_| rng.gen_range(0..p)).collect();
                coeffs.push(rng.gen_range(1..p));
                let g = UnivariatePoly::new(m, coeffs);
                assert_eq!(g.roots().unwrap(), g.roots_by_scan().unwrap(), "p={p}");
            }
        }
    }

    #[test]
    fn scan_and_gcd_paths_agree() {
        for &p in &[101u64, 10007] {
            let m = fp(p);
            let mut rng = ChaCha8Rng::seed_from_u64(13);
            for _ in 0..40 {
                let deg = rng.gen_range(2..6usize);
                let mut coeffs: Vec<u64> = (0..deg).map(|_| rng.gen_range(0..p)).collect();
                coeffs.push(rng.gen_range(1..p));
                let g = UnivariatePoly::new(m, coeffs);
                assert_eq!(g.roots_by_scan().unwrap(), g.roots_by_gcd().unwrap());
            }
            // products of linear factors: known roots, known multiplicities
            for _ in 0..20 {
                let r1 = rng.gen_range(0..p);
                let r2 = rng.gen_range(0..p);
                // (y - r1)^2 (y - r2)
                let lin1 = vec![m.neg(r1), 1];
                let lin2 = vec![m.neg(r2), 1];
                let prod = poly_mul(m, &poly_mul(m, &lin1, &lin1), &lin2);
                let g = UnivariatePoly::new(m, prod);
                assert_eq!(g.roots_by_scan().unwrap(), g.roots_by_gcd().unwrap());
            }
        }
    }

    #[test]
    fn parse_examples() {
        let m = fp(7);
        assert_eq!(BivariatePoly::parse(m, "x*y + 6").unwrap(), hyperbola(7));
        assert_eq!(
            BivariatePoly::parse(m, "y^2+6*x^3+6*x").unwrap(),
            elliptic(7)
        );
        // omitted exponents and coefficients
        let f = BivariatePoly::parse(m, "x").unwrap();
        assert_eq!(f.terms().collect::<Vec<_>>(), vec![((1, 0), 1)]);
        let f = BivariatePoly::parse(m, "y^2 + 3").unwrap();
        assert_eq!(
            f.terms().collect::<Vec<_>>(),
            vec![((0, 0), 3), ((0, 2), 1)]
        );
        // minus signs and merged terms
        let f = BivariatePoly::parse(m, "y^2 - x^3 - x").unwrap();
        assert_eq!(f, elliptic(7));
        let f = BivariatePoly::parse(m, "x*y + 3*x*y + 6").unwrap();
        assert_eq!(
            f.terms().collect::<Vec<_>>(),
            vec![((0, 0), 6), ((1, 1), 4)]
        );
        // coefficients larger than p reduce
        let f = BivariatePoly::parse(m, "9*x*y").unwrap();
        assert_eq!(f.terms().collect::<Vec<_>>(), vec![((1, 1), 2)]);
    }

    #[test]
    fn parse_errors() {
        let m = fp(7);
        assert!(matches!(
            BivariatePoly::parse(m, ""),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            BivariatePoly::parse(m, "x^"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            BivariatePoly::parse(m, "z + 1"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            BivariatePoly::parse(m, "x + + y"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            BivariatePoly::parse(m, "x^9999999"),
            Err(Error::Parse { .. })
        ));
        // constants alone are not a curve
        assert_eq!(BivariatePoly::parse(m, "3"), Err(Error::ConstantPolynomial));
        assert_eq!(
            BivariatePoly::parse(m, "7*x"),
            Err(Error::ConstantPolynomial)
        );
    }

    #[test]
    fn display_roundtrip_examples() {
        let f = hyperbola(7);
        assert_eq!(f.to_string(), "x*y + 6");
        let e = elliptic(7);
        assert_eq!(e.to_string(), "6*x^3 + 6*x + y^2");
        assert_eq!(BivariatePoly::parse(fp(7), &e.to_string()).unwrap(), e);
    }

    proptest! {
        #[test]
        fn display_parse_roundtrip(seed in 0u64..500) {
            let p = 31;
            let m = fp(p);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let terms: Vec<(u32, u32, u64)> = (0..rng.gen_range(1..6))
                .map(|_| (rng.gen_range(0..5), rng.gen_range(0..5), rng.gen_range(0..p)))
                .collect();
            if let Ok(f) = BivariatePoly::from_terms(m, terms) {
                let text = f.to_string();
                let back = BivariatePoly::parse(m, &text).unwrap();
                prop_assert_eq!(back, f);
            }
        }
    }
}
