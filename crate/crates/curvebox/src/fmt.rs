//! Formatting and parsing for the CSV/JSON value grammar: rationals as
//! `num/den`, decimals with 17 significant digits, intervals as
//! `start:length`. Everything is locale-independent with `.` as the
//! decimal separator.

use anyhow::{bail, Context};
use curvebox_core::counting::CyclicInterval;
use curvebox_core::Rational;
use num_traits::ToPrimitive;

/// Exact form `numerator/denominator`.
pub fn rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// 17-significant-digit scientific decimal of a float.
pub fn dec(x: f64) -> String {
    format!("{x:.16e}")
}

/// 17-significant-digit decimal of a rational.
pub fn rational_dec(r: &Rational) -> String {
    dec(r.to_f64().unwrap_or(f64::INFINITY))
}

/// Cyclic interval as `start:length`.
pub fn interval(i: &CyclicInterval) -> String {
    format!("{}:{}", i.start(), i.len())
}

/// `;`-joined integer list (CSV cell for shift vectors and sets).
pub fn joined(values: &[u64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

/// Parses `start:length` into a cyclic interval mod p.
pub fn parse_interval(p: u64, text: &str) -> anyhow::Result<CyclicInterval> {
    let (start, len) = text
        .split_once(':')
        .with_context(|| format!("interval '{text}' must have the form start:length"))?;
    let start: u64 = start
        .trim()
        .parse()
        .with_context(|| format!("bad interval start in '{text}'"))?;
    let len: u64 = len
        .trim()
        .parse()
        .with_context(|| format!("bad interval length in '{text}'"))?;
    Ok(CyclicInterval::new(p, start, len)?)
}

/// Parses a `;`-joined integer list.
pub fn parse_joined(text: &str) -> anyhow::Result<Vec<u64>> {
    if text.trim().is_empty() {
        bail!("empty integer list");
    }
    text.split(';')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .with_context(|| format!("bad integer '{part}' in list '{text}'"))
        })
        .collect()
}
