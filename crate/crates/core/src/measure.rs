//! The mass distribution carried by the Cantor set: free-position counts,
//! cylinder masses, cylinder counts and local-dimension checkpoints.
//!
//! A free position admits `b` digits and a `≠θ` position admits `b − 1`. Splitting
//! mass evenly among admissible children gives `μ(I_n) = b^{−u_n}(b−1)^{−f_n}`, with
//! `u_n` free and `f_n` forbidden-type positions among `1..=n`; the simpler
//! `b^{−u_n}` is reported alongside and agrees with it when `b = 2`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::construction::{CantorParams, Slot};
use crate::symbolic::Word;
use crate::{exact, Error, Result};

/// `u_n`: free positions among `1..=n`.
pub fn free_positions(p: &CantorParams, n: u128) -> u128 {
    let (fixed, forb) = p.constrained_counts(n);
    n - fixed - forb
}

/// `f_n`: positions among `1..=n` that must differ from θ.
pub fn forbidden_positions(p: &CantorParams, n: u128) -> u128 {
    p.constrained_counts(n).1
}

/// `n_{2k} − Σ_{i<k}(m_{2i}+5) − Σ_{i<k}(m'_{2i+1}+6) − 3Σ_{i<2k} r_i`, the bookkeeping
/// value of `u` at `n_{2k} + m_{2k}` when the fixed digits of `𝒲_0` are not subtracted.
pub fn bookkeeping_u(p: &CantorParams, k: usize) -> Option<i128> {
    if 2 * k >= p.levels.len() + 1 {
        return None;
    }
    let mut u = p.ns[2 * k] as i128;
    for i in 0..k {
        u -= p.levels[2 * i].m as i128 + 5;
        u -= p.levels[2 * i + 1].m_prime as i128 + 6;
    }
    for i in 0..2 * k {
        u -= 3 * p.levels[i].r as i128;
    }
    Some(u)
}

/// Mass of a cylinder.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CylinderMass {
    pub consistent: bool,
    pub u: u128,
    pub f: u128,
    /// `b^{−u_n}`
    #[serde(serialize_with = "ser_rational")]
    pub plain: BigRational,
    /// `b^{−u_n}(b−1)^{−f_n}`, the mass that adds up over children.
    #[serde(serialize_with = "ser_rational")]
    pub normalized: BigRational,
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn slot_ok(slot: Option<Slot>, d: u8, theta: u8) -> bool {
    match slot {
        None => true,
        Some(Slot::Zero) => d == 0,
        Some(Slot::One) => d == 1,
        Some(Slot::ThetaCopy) => d == theta,
        Some(Slot::NotTheta) => d != theta,
    }
}

/// Whether the word is a prefix of some point of the Cantor set.
pub fn is_consistent(p: &CantorParams, w: &Word) -> Result<bool> {
    if w.base() != p.base {
        return Err(Error::domain("word and parameters have different bases"));
    }
    let th = p.theta.prefix(w.len());
    Ok(w.digits().iter().enumerate().all(|(i, &d)| slot_ok(p.slot_at(i as u128 + 1), d, th[i])))
}

/// `μ(I_n(w))`, zero for words that leave the set.
pub fn mu_cylinder(p: &CantorParams, w: &Word) -> Result<CylinderMass> {
    let n = w.len() as u128;
    let consistent = is_consistent(p, w)?;
    let (fixed, f) = p.constrained_counts(n);
    let u = n - fixed - f;
    if !consistent {
        return Ok(CylinderMass {
            consistent,
            u,
            f,
            plain: BigRational::zero(),
            normalized: BigRational::zero(),
        });
    }
    let plain = exact::pow_i(p.base, -(u as i64));
    let normalized = if p.base == 2 {
        plain.clone()
    } else {
        let d = BigInt::from(BigUint::from(p.base - 1).pow(f as u32));
        &plain / BigRational::from_integer(d)
    };
    Ok(CylinderMass { consistent, u, f, plain, normalized })
}

/// Admissible one-digit extensions of a consistent word with their normalized masses.
pub fn children(p: &CantorParams, w: &Word) -> Result<Vec<(u8, BigRational)>> {
    let parent = mu_cylinder(p, w)?;
    if !parent.consistent {
        return Ok(vec![]);
    }
    let pos = w.len() as u128 + 1;
    let th = p.theta.digit(pos as u64);
    let mut out = vec![];
    for d in 0..p.base as u8 {
        let mut digits = w.digits().to_vec();
        digits.push(d);
        let m = mu_cylinder(p, &Word::new(p.base, digits)?)?;
        if m.consistent {
            out.push((d, m.normalized));
        }
    }
    debug_assert!(out.iter().all(|(d, _)| slot_ok(p.slot_at(pos), *d, th)));
    Ok(out)
}

/// Number of level-`n` cylinders meeting the set: `b^{u_n}(b−1)^{f_n}`.
pub fn cylinder_count(p: &CantorParams, n: u128) -> Result<BigUint> {
    let (fixed, f) = p.constrained_counts(n);
    let u = n - fixed - f;
    if u > 1 << 26 || f > 1 << 26 {
        return Err(Error::Resource { what: "cylinder count too large to materialize".into(), level: 0 });
    }
    Ok(BigUint::from(p.base).pow(u as u32) * BigUint::from(p.base - 1).pow(f as u32))
}

/// `log_b` of [`cylinder_count`] without materializing it.
pub fn log_cylinder_count(p: &CantorParams, n: u128) -> f64 {
    let (fixed, f) = p.constrained_counts(n);
    let u = (n - fixed - f) as f64;
    u + f as f64 * ((p.base - 1) as f64).ln() / (p.base as f64).ln()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Checkpoint {
    /// Schedule index: even indices track `H₁/α₁`, odd ones `H₂/α₂`.
    pub k: usize,
    pub n_checkpoint: u128,
    pub u_n: u128,
    pub ratio: f64,
    pub target: f64,
    pub abs_error: f64,
    /// Minimum of this checkpoint and the one of the other family in the same period.
    pub period_min: f64,
    /// Minimum over all checkpoints so far.
    pub running_min: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalDimSeries {
    pub checkpoints: Vec<Checkpoint>,
    pub target_min: f64,
}

impl LocalDimSeries {
    pub fn to_csv_rows(&self) -> Vec<String> {
        self.checkpoints
            .iter()
            .map(|c| {
                format!(
                    "{},{},{},{:.16e},{:.16e},{:.16e}",
                    c.k, c.n_checkpoint, c.u_n, c.ratio, c.target, c.abs_error
                )
            })
            .collect()
    }
}

/// `u_n/n` at `n_{2k}+m_{2k}+2` and `n_{2k+1}+m'_{2k+1}+3`, the local minima of
/// `u_n/n` inside each period, for every level of `p`.
pub fn local_dim_series(p: &CantorParams) -> LocalDimSeries {
    let t1 = 1.0 / exact::to_f64(p.exps.ratio1());
    let t2 = 1.0 / exact::to_f64(p.exps.ratio2());
    let mut out: Vec<Checkpoint> = Vec::new();
    let mut running = f64::INFINITY;
    for lv in &p.levels {
        let (c, target) = if lv.k % 2 == 0 { (lv.n + lv.m + 2, t1) } else { (lv.n + lv.m_prime + 3, t2) };
        let u = free_positions(p, c);
        let ratio = u as f64 / c as f64;
        running = running.min(ratio);
        let period_min = if lv.k % 2 == 1 { ratio.min(out.last().unwrap().ratio) } else { ratio };
        out.push(Checkpoint {
            k: lv.k,
            n_checkpoint: c,
            u_n: u,
            ratio,
            target,
            abs_error: (ratio - target).abs(),
            period_min,
            running_min: running,
        });
    }
    LocalDimSeries { checkpoints: out, target_min: t1.min(t2) }
}

/// `μ(root) = 1`.
pub fn root_mass() -> BigRational {
    BigRational::one()
}
