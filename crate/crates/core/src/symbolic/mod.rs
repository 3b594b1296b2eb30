//! b-ary digit streams, cylinders, and the run/match scans that pin down
//! `‖bⁿx‖` and `‖bⁿ(x−y)‖` up to a factor `b`.

mod codec;
mod stream;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

pub use codec::{decode_hex, encode_hex, StreamJson};
pub use stream::{expand_rational, rng_at, shift, word_to_digit, DigitSource, DigitStream, Rule};
pub(crate) use stream::{check_base, next_floor};

use crate::{Error, Result};

/// A finite word over `{0, ..., b-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    base: u32,
    digits: Vec<u8>,
}

impl Word {
    pub fn new(base: u32, digits: Vec<u8>) -> Result<Self> {
        let b = check_base(base)?;
        if let Some(d) = digits.iter().find(|&&d| d >= b) {
            return Err(Error::domain(format!("digit {d} out of range for base {base}")));
        }
        Ok(Word { base, digits })
    }

    /// Parses digits written as characters `0-9a-z`.
    pub fn parse(base: u32, s: &str) -> Result<Self> {
        let digits = s
            .chars()
            .map(|c| {
                c.to_digit(36)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::parse(format!("bad digit {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(base, digits)
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }
}

/// `Σ_{i≤n} w_i b^{-i}` exactly.
pub fn digits_value(base: u32, digits: &[u8]) -> BigRational {
    let mut num = BigInt::zero();
    for &d in digits {
        num = num * base + d;
    }
    let den = num_traits::pow(BigInt::from(base), digits.len());
    BigRational::new(num, den)
}

/// The cylinder `[a, a + b^{-n})` of a word, returned as `(a, b^{-n})`.
pub fn cylinder_interval(w: &Word) -> (BigRational, BigRational) {
    let a = digits_value(w.base, &w.digits);
    let len = crate::exact::pow_i(w.base, -(w.len() as i64));
    (a, len)
}

/// `Σ_{i≤depth} ε_i b^{-i}`, exact.
pub fn project(s: &DigitStream, depth: usize) -> BigRational {
    s.with_prefix(depth, |p| digits_value(s.base(), p))
}

/// Floating projection of a prefix, accurate to a few ulps.
pub fn project_f64(s: &DigitStream, depth: usize) -> f64 {
    let b = s.base() as f64;
    s.with_prefix(depth.min(80), |p| p.iter().rev().fold(0.0, |acc, &d| (acc + d as f64) / b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunKind {
    Zeros,
    TopDigits,
    ThetaMatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status", content = "m")]
pub enum RunLength {
    Exact(u64),
    /// The run reached the scan depth; the payload is the observed part.
    ExceedsDepth(u64),
}

impl RunLength {
    pub fn observed(self) -> u64 {
        match self {
            RunLength::Exact(m) | RunLength::ExceedsDepth(m) => m,
        }
    }

    pub fn exact(self) -> Option<u64> {
        match self {
            RunLength::Exact(m) => Some(m),
            RunLength::ExceedsDepth(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub position: u64,
    pub kind: RunKind,
    pub length: RunLength,
}

/// Longest run of zeros or of `b-1` starting at position `n+1`, scanned up to `max_depth`.
pub fn run_length(s: &DigitStream, n: u64, max_depth: u64) -> RunReport {
    assert!(max_depth > n, "max_depth must exceed n");
    let b = s.base() as u8;
    let first = s.digit(n + 1);
    let kind = if first == b - 1 && first != 0 { RunKind::TopDigits } else { RunKind::Zeros };
    if first != 0 && first != b - 1 {
        return RunReport { position: n, kind, length: RunLength::Exact(0) };
    }
    let m = s.with_prefix(max_depth as usize, |p| {
        p[n as usize..].iter().take_while(|&&d| d == first).count() as u64
    });
    let length = if n + m == max_depth { RunLength::ExceedsDepth(m) } else { RunLength::Exact(m) };
    RunReport { position: n, kind, length }
}

/// Number of agreeing digits of `eps` and `theta` after position `n`.
pub fn match_length(
    eps: &DigitStream,
    theta: &DigitStream,
    n: u64,
    max_depth: u64,
) -> Result<RunReport> {
    if eps.base() != theta.base() {
        return Err(Error::domain("streams have different bases"));
    }
    assert!(max_depth > n, "max_depth must exceed n");
    let d = max_depth as usize;
    let m = eps.with_prefix(d, |a| {
        theta.with_prefix(d, |t| {
            a[n as usize..].iter().zip(&t[n as usize..]).take_while(|(x, y)| x == y).count() as u64
        })
    });
    let length = if n + m == max_depth { RunLength::ExceedsDepth(m) } else { RunLength::Exact(m) };
    Ok(RunReport { position: n, kind: RunKind::ThetaMatch, length })
}

/// Calls `f(n, m, truncated)` for every `n` in `0..digits.len()`, where `m` is the
/// zero/top-digit run starting at `n+1` and `truncated` says it hit the end.
pub fn for_each_run(digits: &[u8], base: u32, mut f: impl FnMut(u64, u64, bool)) {
    let top = (base - 1) as u8;
    let len = digits.len();
    let mut i = 0;
    while i < len {
        let d = digits[i];
        let mut j = i + 1;
        while j < len && digits[j] == d {
            j += 1;
        }
        let truncated = j == len;
        for p in i..j {
            if d == 0 || d == top {
                f(p as u64, (j - p) as u64, truncated);
            } else {
                f(p as u64, 0, false);
            }
        }
        i = j;
    }
}

/// Like [`for_each_run`] for the agreement length of two digit slices.
pub fn for_each_match(a: &[u8], t: &[u8], mut f: impl FnMut(u64, u64, bool)) {
    let len = a.len().min(t.len());
    let mut i = 0;
    while i < len {
        if a[i] != t[i] {
            f(i as u64, 0, false);
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < len && a[j] == t[j] {
            j += 1;
        }
        let truncated = j == len;
        for p in i..j {
            f(p as u64, (j - p) as u64, truncated);
        }
        i = j;
    }
}

/// `‖r‖`, the distance from a rational to the nearest integer.
pub fn dist_to_int(r: &BigRational) -> BigRational {
    let f = r - r.floor();
    let g = BigRational::from_integer(1.into()) - &f;
    if f < g {
        f
    } else {
        g
    }
}

#[cfg(test)]
mod tests;
