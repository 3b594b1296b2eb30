//! Translation parameters with prescribed digit patterns, and the Cantor-type
//! subsets of bivariate level sets: schedules, word templates, sampling,
//! membership verification and the run conditions used by the dichotomy.

mod conditions;
mod point;
mod sample;
mod template;
mod verify;
mod ybuild;

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

pub use conditions::{check_conditions, ConditionResult, ConditionWitness, Which};
pub(crate) use conditions::condition_scan;
pub use point::{verification_depth, PointCheck, PointFile, PointParams};
pub use sample::{sample_cantor_point, CantorSource, ForbiddenChoice};
pub use template::{Group, Slot, WordTemplate};
pub use verify::{verify_membership, CheckpointRecord, InteriorRecord, MembershipReport};
pub use ybuild::{build_y_prop1, build_y_prop3, default_prop1_schedule, minimal_l1, prop3_ones};

use crate::symbolic::DigitStream;
use crate::{exact, Error, Result};

/// `(α₁, α₂, H₁, H₂)` with the exact ratios `α/H` the floors are taken of.
#[derive(Clone, Debug, PartialEq)]
pub struct Exponents {
    pub alpha1: f64,
    pub alpha2: f64,
    pub h1: f64,
    pub h2: f64,
    ratio1: BigRational,
    ratio2: BigRational,
}

impl Exponents {
    /// Exponents taken at their exact binary values.
    pub fn new(alpha1: f64, alpha2: f64, h1: f64, h2: f64) -> Result<Self> {
        Self::from_exact(
            exact::from_f64(alpha1)?,
            exact::from_f64(alpha2)?,
            exact::from_f64(h1)?,
            exact::from_f64(h2)?,
        )
    }

    /// Exponents written as decimals, so that `0.7` means `7/10`.
    pub fn parse(alpha1: &str, alpha2: &str, h1: &str, h2: &str) -> Result<Self> {
        Self::from_exact(
            exact::parse_decimal(alpha1)?,
            exact::parse_decimal(alpha2)?,
            exact::parse_decimal(h1)?,
            exact::parse_decimal(h2)?,
        )
    }

    pub fn from_exact(a1: BigRational, a2: BigRational, h1: BigRational, h2: BigRational) -> Result<Self> {
        for (name, a, h) in [("1", &a1, &h1), ("2", &a2, &h2)] {
            if !a.is_positive() {
                return Err(Error::domain(format!("alpha{name} must be positive")));
            }
            if h.is_zero() {
                return Err(Error::domain(format!(
                    "H{name} = 0 needs infinite exponents and has no Cantor construction"
                )));
            }
            if h.is_negative() || h > a {
                return Err(Error::domain(format!("H{name} must lie in (0, alpha{name}]")));
            }
        }
        Ok(Exponents {
            alpha1: exact::to_f64(&a1),
            alpha2: exact::to_f64(&a2),
            h1: exact::to_f64(&h1),
            h2: exact::to_f64(&h2),
            ratio1: &a1 / &h1,
            ratio2: &a2 / &h2,
        })
    }

    /// `α₁/H₁ − 1`.
    pub fn c1(&self) -> BigRational {
        &self.ratio1 - BigRational::one()
    }

    /// `α₂/H₂ − 1`.
    pub fn c2(&self) -> BigRational {
        &self.ratio2 - BigRational::one()
    }

    pub fn ratio1(&self) -> &BigRational {
        &self.ratio1
    }

    pub fn ratio2(&self) -> &BigRational {
        &self.ratio2
    }

    /// `H₂/α₂ = H₁/α₁` exactly.
    pub fn on_diagonal(&self) -> bool {
        self.ratio1 == self.ratio2
    }
}

/// Per-level integers derived from `n_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Level {
    pub k: usize,
    pub n: u128,
    /// `⌊n_k(α₁/H₁ − 1)⌋`
    pub m: u128,
    /// `⌊n_k(α₂/H₂ − 1)⌋`
    pub m_prime: u128,
    /// `max(1, min(m, m'))`
    pub m_star: u128,
    /// Separator period actually used: `max(m*, 3)`, so that triples never touch.
    pub spacing: u128,
    /// Number of periodic separators in the block `(n_k, n_{k+1}]`.
    pub r: u128,
}

impl Level {
    /// Length of the leading forced run of the block that starts at `n_k`.
    pub fn lead(&self) -> u128 {
        if self.k % 2 == 0 {
            self.m
        } else {
            self.m_prime
        }
    }

    /// Forced positions besides the lead and the separators: 5 for odd blocks, 6 for even ones.
    fn margin(&self) -> u128 {
        if self.k % 2 == 0 {
            8
        } else {
            9
        }
    }
}

/// `(m_k, m'_k, m*_k)` for a given `n_k`.
pub fn block_params(n: u128, e: &Exponents) -> Result<(u128, u128, u128)> {
    let overflow = || Error::Resource { what: "m_k does not fit in 128 bits".into(), level: 0 };
    let m = exact::floor_mul_u128(n, &e.c1()).ok_or_else(overflow)?;
    let mp = exact::floor_mul_u128(n, &e.c2()).ok_or_else(overflow)?;
    Ok((m, mp, m.min(mp).max(1)))
}

/// Full parameter pack of the construction.
#[derive(Clone, Debug)]
pub struct CantorParams {
    pub exps: Exponents,
    pub base: u32,
    pub theta: DigitStream,
    /// `n_0, ..., n_K`
    pub ns: Vec<u128>,
    /// Levels `0..K`; level `k` governs the block `(n_k, n_{k+1}]`.
    pub levels: Vec<Level>,
    /// Separator pairs inside `𝒲_0` (zero when `n_0 <= m*_0`).
    pub r_w0: u128,
    templates: Arc<Vec<WordTemplate>>,
}

/// Default first scale.
pub const DEFAULT_N0: u128 = 32;

/// `n_0, ..., n_K`: `n_{k+1}` is the least integer `>= (k+2)² n_k` leaving room for the
/// lead, the fixed separators and at least one periodic separator, and leaving at most
/// `m* − 5` positions after the last periodic separator.
pub fn nk_schedule(e: &Exponents, n0: u128, levels: usize, cap: u128) -> Result<Vec<u128>> {
    if levels < 1 {
        return Err(Error::domain("need at least one level"));
    }
    if n0 < 4 {
        return Err(Error::domain("n_0 must be at least 4"));
    }
    let mut ns = vec![n0];
    for k in 0..levels {
        let n = ns[k];
        let (m, mp, ms) = block_params(n, e)
            .map_err(|_| Error::Resource { what: "schedule overflow".into(), level: k })?;
        let lead = if k % 2 == 0 { m } else { mp };
        let margin = if k % 2 == 0 { 8 } else { 9 };
        let growth = ((k as u128 + 2) * (k as u128 + 2)).checked_mul(n);
        let room = n.checked_add(lead).and_then(|v| v.checked_add(margin + ms.max(3)));
        let mut next = match (growth, room) {
            (Some(g), Some(r)) => g.max(r),
            _ => return Err(Error::Resource { what: "schedule overflow".into(), level: k }),
        };
        // the free gap before the terminal separator holds runs of up to ρ + 5, where
        // ρ is the remainder left by the periodic separators; keep it within m*
        let s = ms.max(3);
        if s >= 5 {
            let rho = (next - n - lead - margin) % s;
            if rho > s - 5 {
                next = next
                    .checked_add(s - rho)
                    .ok_or_else(|| Error::Resource { what: "schedule overflow".into(), level: k })?;
            }
        }
        if next > cap {
            return Err(Error::Resource {
                what: format!("n_{} = {next} exceeds the budget {cap}", k + 1),
                level: k,
            });
        }
        ns.push(next);
    }
    Ok(ns)
}

impl CantorParams {
    pub fn new(e: Exponents, theta: DigitStream, n0: u128, levels: usize, cap: u128) -> Result<Self> {
        let base = theta.base();
        let ns = nk_schedule(&e, n0, levels, cap)?;
        let mut lv = Vec::with_capacity(levels);
        for k in 0..levels {
            let n = ns[k];
            let (m, m_prime, m_star) = block_params(n, &e)?;
            let spacing = m_star.max(3);
            let mut level = Level { k, n, m, m_prime, m_star, spacing, r: 0 };
            let len = ns[k + 1] - n;
            level.r = (len - level.lead() - level.margin()) / spacing;
            lv.push(level);
        }
        let s0 = lv[0].spacing;
        let r_w0 = if n0 <= lv[0].m_star { 0 } else { (n0 - 2) / s0 };
        let mut p = CantorParams {
            exps: e,
            base,
            theta,
            ns,
            levels: lv,
            r_w0,
            templates: Arc::new(Vec::new()),
        };
        let templates = (0..=levels).map(|j| p.build_template(j)).collect::<Result<Vec<_>>>()?;
        p.templates = Arc::new(templates);
        Ok(p)
    }

    /// Number of construction levels `K`.
    pub fn depth_levels(&self) -> usize {
        self.levels.len()
    }

    /// `n_K`, the last scheduled position.
    pub fn last_n(&self) -> u128 {
        *self.ns.last().unwrap()
    }

    /// Template `𝒲_j`: `j = 0` covers `(0, n_0]`, `j >= 1` covers `(n_{j−1}, n_j]`.
    pub fn template(&self, j: usize) -> &WordTemplate {
        &self.templates[j]
    }

    pub fn templates(&self) -> &[WordTemplate] {
        &self.templates
    }

    fn build_template(&self, j: usize) -> Result<WordTemplate> {
        if j == 0 {
            return WordTemplate::w0(self.ns[0], self.levels[0].spacing, self.r_w0);
        }
        let lv = &self.levels[j - 1];
        let len = self.ns[j] - self.ns[j - 1];
        if lv.k % 2 == 0 {
            WordTemplate::odd(lv.n, len, lv.m, lv.spacing, lv.r)
        } else {
            WordTemplate::even(lv.n, len, lv.m_prime, lv.spacing, lv.r)
        }
    }

    /// Index of the template containing global position `pos >= 1`, if any.
    pub fn block_of(&self, pos: u128) -> Option<usize> {
        let j = self.ns.partition_point(|&n| n < pos);
        (j < self.templates.len()).then_some(j)
    }

    /// Constraint at a global position; `None` means free.
    pub fn slot_at(&self, pos: u128) -> Option<Slot> {
        let j = self.block_of(pos)?;
        let t = &self.templates[j];
        t.slot(pos - t.start)
    }

    /// `(fixed, forbidden)` counts among positions `1..=n`.
    pub fn constrained_counts(&self, n: u128) -> (u128, u128) {
        let (mut fixed, mut forb) = (0, 0);
        for t in self.templates.iter() {
            if n <= t.start {
                break;
            }
            let (a, b) = t.counts_upto((n - t.start).min(t.len));
            fixed += a;
            forb += b;
        }
        (fixed, forb)
    }
}

#[cfg(test)]
mod tests;
