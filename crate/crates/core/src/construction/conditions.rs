use std::collections::VecDeque;

use serde::Serialize;

use super::Exponents;
use crate::exact::Floorer;
use crate::symbolic::DigitStream;
use crate::{Error, Result};

/// Which of the two run conditions on θ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    /// For `l` in `[n, n + ⌊n(α₁/H₁−1)⌋]` the zero run after `θ_l` is at most `⌊l(α₂/H₂−1)⌋`.
    I,
    /// For `l` in `[n, n + ⌊n(α₂/H₂−1)⌋]` the zero run after `θ_l` is at most `⌊l(α₁/H₁−1)⌋`.
    Ii,
}

impl Which {
    fn coefficients(self, e: &Exponents) -> (Floorer, Floorer) {
        match self {
            Which::I => (Floorer::new(&e.c1()), Floorer::new(&e.c2())),
            Which::Ii => (Floorer::new(&e.c2()), Floorer::new(&e.c1())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionWitness {
    pub l: u64,
    /// Zero run after `θ_l`, cut at the window end.
    pub run: u64,
    pub bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionResult {
    pub n: u64,
    pub window_end: u64,
    pub holds: bool,
    /// Smallest violating `l`.
    pub witness: Option<ConditionWitness>,
    /// The window reached past `depth`; only `l` with digits available were checked.
    pub truncated: bool,
}

/// Evaluates condition (i) or (ii) at a single `n`, reading θ up to `depth`.
///
/// Zero runs are counted only up to the window end: a run that leaves the window
/// says nothing about the scales the window covers.
pub fn check_conditions(
    theta: &DigitStream,
    e: &Exponents,
    n: u64,
    which: Which,
    depth: u64,
) -> Result<ConditionResult> {
    if n == 0 || n >= depth {
        return Err(Error::domain(format!("n must lie in 1..{depth}")));
    }
    let (window, bound) = which.coefficients(e);
    let end = n.saturating_add(window.floor(n));
    let truncated = end > depth;
    let last = end.min(depth);
    let witness = theta.with_prefix(last as usize, |t| {
        // zero run after l, cut at `last`, computed backwards
        let mut run = 0u64;
        let mut first = None;
        for l in (n..last).rev() {
            run = if t[l as usize] == 0 { run + 1 } else { 0 };
            let b = bound.floor(l);
            if run > b {
                first = Some(ConditionWitness { l, run, bound: b });
            }
        }
        first
    });
    Ok(ConditionResult { n, window_end: end, holds: witness.is_none(), witness, truncated })
}

/// Result of [`condition_scan`] at one `n`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct ConditionScan {
    pub n: u64,
    pub window_end: u64,
    pub witness: Option<ConditionWitness>,
}

/// Evaluates the condition at every `n >= n_lo` whose window fits in `t`, in one pass.
///
/// With `z(l)` the untruncated zero run and `B(l)` the bound, the truncated run
/// exceeds the bound iff `z(l) > B(l)` and `l + B(l) < E(n)`, so the condition
/// holds iff the minimum of `l + B(l)` over bad `l` in the window is at least `E(n)`.
pub(crate) fn condition_scan(
    t: &[u8],
    e: &Exponents,
    which: Which,
    n_lo: u64,
    mut f: impl FnMut(ConditionScan),
) {
    let d = t.len() as u64;
    if d == 0 {
        return;
    }
    let (window, bound) = which.coefficients(e);
    let mut z = vec![0u64; d as usize];
    let mut run = 0u64;
    for l in (0..d as usize).rev() {
        // a run reaching the end of the prefix is treated as unbounded
        run = match t[l] {
            0 if l + 1 == d as usize => u64::MAX,
            0 => run.saturating_add(1),
            _ => 0,
        };
        z[l] = run;
    }
    let mut dq: VecDeque<(u64, u64)> = VecDeque::new();
    let mut next_l = n_lo.max(1);
    let mut n = n_lo.max(1);
    loop {
        let end = n.saturating_add(window.floor(n));
        if end >= d {
            break;
        }
        while next_l <= end {
            let b = bound.floor(next_l);
            if z[next_l as usize] > b {
                let key = next_l.saturating_add(b);
                while dq.back().is_some_and(|&(k, _)| k >= key) {
                    dq.pop_back();
                }
                dq.push_back((key, next_l));
            }
            next_l += 1;
        }
        while dq.front().is_some_and(|&(_, l)| l < n) {
            dq.pop_front();
        }
        let witness = match dq.front() {
            Some(&(key, l)) if key < end => {
                let b = key - l;
                let r = z[l as usize].min(end - l);
                Some(ConditionWitness { l, run: r, bound: b })
            }
            _ => None,
        };
        f(ConditionScan { n, window_end: end, witness });
        n += 1;
    }
}
