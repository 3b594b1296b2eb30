//! Finite-depth estimates of the b-adic approximation exponents `Δ^b(x)` and `Δ^b(x−y)`.
//!
//! `Δ^b(x) = 1 + limsup m(n)/n` where `m(n)` is the zero/top-digit run after
//! position `n`. A finite scan can only see a sup; the first `⌈√depth⌉`
//! positions are skipped because there `m(n)/n` is dominated by tiny `n` and
//! says nothing about the limsup (a random point would otherwise score about 2).

use serde::{Serialize, Serializer};

use crate::symbolic::{for_each_match, for_each_run, DigitStream};
use crate::{Error, Result};

/// Knobs for the estimator.
#[derive(Clone, Copy, Debug)]
pub struct DeltaOptions {
    /// First position included in the sup. `None` means `⌈√depth⌉`.
    pub burn_in: Option<u64>,
    pub witness_cap: usize,
}

impl Default for DeltaOptions {
    fn default() -> Self {
        DeltaOptions { burn_in: None, witness_cap: 64 }
    }
}

impl DeltaOptions {
    fn start(&self, depth: u64) -> u64 {
        self.burn_in.unwrap_or_else(|| ceil_sqrt(depth)).max(1)
    }
}

pub(crate) fn ceil_sqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub n: u64,
    pub m: u64,
}

/// Point estimate with the witnesses that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentEstimate {
    #[serde(serialize_with = "ser_inf")]
    pub estimate: f64,
    pub truncated: bool,
    pub depth: u64,
    pub burn_in: u64,
    pub witnesses: Vec<Witness>,
}

/// Writes `+∞` as the string `"inf"`, finite values as numbers.
pub fn ser_inf<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_infinite() && *x > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*x)
    }
}

impl ExponentEstimate {
    pub fn is_infinite(&self) -> bool {
        self.estimate.is_infinite()
    }
}

struct Chain {
    start: u64,
    cap: usize,
    witnesses: Vec<Witness>,
    best: Option<Witness>,
    prev_m: Option<u64>,
    truncated: bool,
    whole_tail: bool,
}

impl Chain {
    fn new(start: u64, cap: usize) -> Self {
        Chain {
            start,
            cap,
            witnesses: Vec::new(),
            best: None,
            prev_m: None,
            truncated: false,
            whole_tail: false,
        }
    }

    /// Positions arrive in increasing order. Only the first position of each
    /// maximal run can attain the sup, so the others are skipped; this also keeps
    /// a run already under way at the burn-in from posing as a witness.
    fn push(&mut self, n: u64, m: u64, truncated: bool) {
        let continues = self.prev_m == Some(m + 1);
        self.prev_m = Some(m);
        if n < self.start {
            return;
        }
        if truncated {
            self.truncated = true;
            if n == self.start && m > 0 {
                self.whole_tail = true;
            }
        }
        if continues {
            return;
        }
        let better = match self.best {
            None => true,
            Some(w) => (m as u128) * (w.n as u128) > (w.m as u128) * (n as u128),
        };
        if better {
            let w = Witness { n, m };
            self.best = Some(w);
            if self.witnesses.len() == self.cap {
                self.witnesses.remove(0);
            }
            if self.cap > 0 {
                self.witnesses.push(w);
            }
        }
    }

    fn finish(self, depth: u64) -> ExponentEstimate {
        let estimate = if self.whole_tail {
            f64::INFINITY
        } else {
            match self.best {
                Some(w) => 1.0 + w.m as f64 / w.n as f64,
                None => 1.0,
            }
        };
        ExponentEstimate {
            estimate,
            truncated: self.truncated,
            depth,
            burn_in: self.start,
            witnesses: self.witnesses,
        }
    }
}

fn check_depth(depth: u64) -> Result<()> {
    if depth < 16 {
        return Err(Error::domain(format!("depth must be at least 16, got {depth}")));
    }
    Ok(())
}

/// Estimate of `Δ^b` from an explicit prefix of length `depth`.
pub fn delta_from_digits(digits: &[u8], base: u32, opts: DeltaOptions) -> ExponentEstimate {
    let depth = digits.len() as u64;
    let mut chain = Chain::new(opts.start(depth), opts.witness_cap);
    for_each_run(digits, base, |n, m, tr| chain.push(n, m, tr));
    chain.finish(depth)
}

/// Estimate of `Δ^b(x−y)` from two explicit prefixes.
pub fn delta_shifted_from_digits(eps: &[u8], theta: &[u8], opts: DeltaOptions) -> ExponentEstimate {
    let depth = eps.len().min(theta.len()) as u64;
    let mut chain = Chain::new(opts.start(depth), opts.witness_cap);
    for_each_match(eps, theta, |n, m, tr| chain.push(n, m, tr));
    chain.finish(depth)
}

pub fn delta_estimate(s: &DigitStream, depth: u64) -> Result<ExponentEstimate> {
    delta_estimate_with(s, depth, DeltaOptions::default())
}

pub fn delta_estimate_with(s: &DigitStream, depth: u64, opts: DeltaOptions) -> Result<ExponentEstimate> {
    check_depth(depth)?;
    if s.is_badic_rational() {
        return Ok(ExponentEstimate {
            estimate: f64::INFINITY,
            truncated: false,
            depth,
            burn_in: opts.start(depth),
            witnesses: Vec::new(),
        });
    }
    Ok(s.with_prefix(depth as usize, |d| delta_from_digits(d, s.base(), opts)))
}

pub fn delta_shifted_estimate(
    eps: &DigitStream,
    theta: &DigitStream,
    depth: u64,
) -> Result<ExponentEstimate> {
    delta_shifted_estimate_with(eps, theta, depth, DeltaOptions::default())
}

pub fn delta_shifted_estimate_with(
    eps: &DigitStream,
    theta: &DigitStream,
    depth: u64,
    opts: DeltaOptions,
) -> Result<ExponentEstimate> {
    if eps.base() != theta.base() {
        return Err(Error::domain("streams have different bases"));
    }
    check_depth(depth)?;
    let d = depth as usize;
    Ok(eps.with_prefix(d, |a| theta.with_prefix(d, |t| delta_shifted_from_digits(a, t, opts))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::build_y_prop3;
    use crate::symbolic::{expand_rational, run_length};

    /// Direct O(depth²) version of the estimator over runs that begin after `start`.
    fn brute(digits: &[u8], base: u32, start: u64) -> f64 {
        let s = DigitStream::explicit(base, digits.to_vec(), vec![1]).unwrap();
        let depth = digits.len() as u64;
        (start..depth)
            .filter(|&n| digits[n as usize - 1] != digits[n as usize])
            .map(|n| 1.0 + run_length(&s, n, depth).length.observed() as f64 / n as f64)
            .fold(1.0, f64::max)
    }

    #[test]
    fn badic_is_infinite() {
        let e = delta_estimate(&expand_rational(3, 8, 2).unwrap(), 1000).unwrap();
        assert!(e.is_infinite() && !e.truncated);
        assert!(serde_json::to_string(&e).unwrap().contains("\"inf\""));
    }

    #[test]
    fn alternating_is_one() {
        let s = DigitStream::explicit(2, vec![], vec![0, 1]).unwrap();
        let e = delta_estimate(&s, 10_000).unwrap();
        assert!(e.estimate - 1.0 <= 1.0 / 100.0 + 1e-12, "{}", e.estimate);
        assert!(e.estimate >= 1.0);
    }

    #[test]
    fn prop3_witnesses_sit_on_schedule() {
        let y = build_y_prop3(2.0, 32, 2).unwrap();
        let e = delta_estimate(&y, 100_000).unwrap();
        assert!((e.estimate - 2.0).abs() <= 0.05, "{}", e.estimate);
        let mut l = 32u64;
        let mut sched = vec![];
        while l < 100_000 {
            sched.push(l);
            l *= 2;
        }
        // the lone 1 before each zero block is a top-digit run of length 1
        for w in e.witnesses.iter().filter(|w| w.m > 1) {
            assert!(sched.contains(&w.n), "{w:?}");
            assert_eq!(w.m, w.n - 1);
        }
        assert_eq!(e.witnesses.last().unwrap().n, 32768);
        assert!(e.truncated);
    }

    #[test]
    fn random_streams() {
        let a = DigitStream::seeded(2, 11).unwrap();
        let b = DigitStream::seeded(2, 12).unwrap();
        let e = delta_shifted_estimate(&a, &b, 100_000).unwrap();
        assert!((e.estimate - 1.0).abs() <= 0.1);
        let same = delta_shifted_estimate(&a, &a, 1000).unwrap();
        assert!(same.is_infinite() && same.truncated);
        assert!(delta_shifted_estimate(&a, &DigitStream::seeded(3, 1).unwrap(), 100).is_err());
        assert!(delta_estimate(&a, 8).is_err());
    }

    #[test]
    fn shifted_against_zero_matches_plain() {
        let y = build_y_prop3(1.5, 8, 2).unwrap();
        let zero = expand_rational(0, 1, 2).unwrap();
        let plain = delta_estimate(&y, 50_000).unwrap();
        let shifted = delta_shifted_estimate(&y, &zero, 50_000).unwrap();
        assert_eq!(plain.estimate, shifted.estimate);
    }

    #[test]
    fn agrees_with_brute_force() {
        for seed in 0..20 {
            let mut d = DigitStream::seeded(3, seed).unwrap().prefix(300);
            for x in d.iter_mut().skip(40 + seed as usize).take(seed as usize) {
                *x = 2;
            }
            let e = delta_from_digits(&d, 3, DeltaOptions { burn_in: Some(5), witness_cap: 64 });
            let want = brute(&d, 3, 5);
            if !e.truncated {
                assert!((e.estimate - want).abs() < 1e-12);
            }
            for p in e.witnesses.windows(2) {
                assert!((p[1].m as u128) * (p[0].n as u128) > (p[0].m as u128) * (p[1].n as u128));
                assert!(p[1].n > p[0].n);
            }
        }
    }

    #[test]
    fn running_max_is_monotone_in_depth() {
        let s = DigitStream::seeded(2, 5).unwrap();
        let opts = DeltaOptions { burn_in: Some(10), witness_cap: 64 };
        let mut prev = 0.0;
        for depth in [100u64, 1000, 10_000, 50_000] {
            let e = delta_estimate_with(&s, depth, opts).unwrap();
            assert!(e.estimate >= prev || e.truncated);
            prev = e.estimate;
        }
    }
}
