use serde::Serialize;

use super::CantorParams;
use crate::symbolic::{for_each_match, for_each_run, DigitStream, RunKind};
use crate::{Error, Result};

/// Exact run or match length at a scheduled position.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckpointRecord {
    pub k: usize,
    pub n: u64,
    pub kind: RunKind,
    pub bound_low: u64,
    pub bound_high: u64,
    pub observed: u64,
    pub pass: bool,
}

/// Upper bounds on every run and match for `n` in `[n_k, n_{k+1})`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InteriorRecord {
    pub k: usize,
    pub from: u64,
    pub to: u64,
    pub run_bound: u64,
    pub match_bound: u64,
    pub max_run: u64,
    pub max_match: u64,
    pub violations: u64,
    /// `(n, kind, length)` of the first violation.
    pub first_violation: Option<(u64, RunKind, u64)>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MembershipReport {
    pub levels: usize,
    pub depth: u64,
    pub checkpoints: Vec<CheckpointRecord>,
    pub interior: Vec<InteriorRecord>,
    pub pass: bool,
}

/// Checks the first `levels` levels of the construction against the digits of `eps`.
///
/// At even `k` the zero run after `n_k` must be exactly `m_k`; at odd `k` the
/// agreement with θ after `n_k` must be exactly `m'_k`. For `n` in `[n_k, n_{k+1})`
/// every zero/top-digit run is at most `m_k` and every match at most `m'_k`.
pub fn verify_membership(eps: &DigitStream, p: &CantorParams, levels: usize) -> Result<MembershipReport> {
    if levels == 0 || levels > p.depth_levels() {
        return Err(Error::domain(format!(
            "levels must be in 1..={}, got {levels}",
            p.depth_levels()
        )));
    }
    if eps.base() != p.base {
        return Err(Error::domain("point and parameters have different bases"));
    }
    let last = &p.levels[levels - 1];
    // runs that start before n_K may continue past it; a guard longer than any bound settles them
    let guard = last.m.max(last.m_prime) + 2;
    let depth = p.ns[levels] + guard;
    if depth > u64::MAX as u128 / 2 || depth > isize::MAX as u128 {
        return Err(Error::Resource { what: "verification depth".into(), level: levels });
    }
    let depth = depth as u64;
    let ns: Vec<u64> = p.ns[..=levels].iter().map(|&n| n as u64).collect();
    let mut interior: Vec<InteriorRecord> = (0..levels)
        .map(|k| InteriorRecord {
            k,
            from: ns[k],
            to: ns[k + 1],
            run_bound: p.levels[k].m as u64,
            match_bound: p.levels[k].m_prime as u64,
            max_run: 0,
            max_match: 0,
            violations: 0,
            first_violation: None,
            pass: true,
        })
        .collect();
    let level_of = |n: u64| -> Option<usize> {
        if n < ns[0] || n >= ns[levels] {
            return None;
        }
        Some(ns.partition_point(|&x| x <= n) - 1)
    };

    let mut checkpoints = Vec::with_capacity(levels);
    eps.with_prefix(depth as usize, |x| {
        p.theta.with_prefix(depth as usize, |t| {
            for (k, lv) in p.levels[..levels].iter().enumerate() {
                let n = ns[k] as usize;
                let (kind, expected, observed) = if k % 2 == 0 {
                    let z = x[n..].iter().take_while(|&&d| d == 0).count();
                    (RunKind::Zeros, lv.m as u64, z as u64)
                } else {
                    let z = x[n..].iter().zip(&t[n..]).take_while(|(a, b)| a == b).count();
                    (RunKind::ThetaMatch, lv.m_prime as u64, z as u64)
                };
                checkpoints.push(CheckpointRecord {
                    k,
                    n: n as u64,
                    kind,
                    bound_low: expected,
                    bound_high: expected,
                    observed,
                    pass: observed == expected,
                });
            }
            let mut record = |n: u64, m: u64, kind: RunKind| {
                if let Some(k) = level_of(n) {
                    let r = &mut interior[k];
                    let bound = if kind == RunKind::ThetaMatch {
                        r.max_match = r.max_match.max(m);
                        r.match_bound
                    } else {
                        r.max_run = r.max_run.max(m);
                        r.run_bound
                    };
                    if m > bound {
                        r.violations += 1;
                        r.pass = false;
                        if r.first_violation.map_or(true, |(f, _, _)| n < f) {
                            r.first_violation = Some((n, kind, m));
                        }
                    }
                }
            };
            for_each_run(x, p.base, |n, m, _| {
                let d = x[n as usize];
                let top = d != 0 && d as u32 == p.base - 1;
                record(n, m, if top { RunKind::TopDigits } else { RunKind::Zeros })
            });
            for_each_match(x, t, |n, m, _| record(n, m, RunKind::ThetaMatch));
        })
    });
    let pass = checkpoints.iter().all(|c| c.pass) && interior.iter().all(|r| r.pass);
    Ok(MembershipReport { levels, depth, checkpoints, interior, pass })
}
