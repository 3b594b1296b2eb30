use std::sync::Arc;

use crate::symbolic::{next_floor, DigitStream, Rule};
use crate::{Error, Result};

fn check_eta(eta: f64) -> Result<()> {
    if !(eta.is_finite() && eta > 1.0) {
        return Err(Error::domain(format!("eta must be a real > 1, got {eta}")));
    }
    if eta - 1.0 < 1e-9 {
        return Err(Error::domain("eta is too close to 1 for a finite schedule"));
    }
    Ok(())
}

fn floor_eta(l: u64, eta: f64) -> u64 {
    (l as f64 * eta).floor() as u64
}

/// Least `l₁` with `⌊l₁η⌋ − l₁ − 1 >= 1`, i.e. a non-empty zero block before the first 1.
pub fn minimal_l1(eta: f64) -> Result<u64> {
    check_eta(eta)?;
    // ⌊lη⌋ − l = ⌊l(η − 1)⌋ is nondecreasing in l
    let mut l = ((2.0 / (eta - 1.0)).floor() as u64).saturating_sub(2).max(1);
    while floor_eta(l, eta) < l + 2 {
        l += 1;
    }
    while l > 1 && floor_eta(l - 1, eta) >= l + 1 {
        l -= 1;
    }
    Ok(l)
}

/// Zeros everywhere except ones at `l_{i+1} = ⌊l_iη⌋`, `i >= 1`.
pub fn build_y_prop3(eta: f64, l1: u64, base: u32) -> Result<DigitStream> {
    let min = minimal_l1(eta)?;
    if l1 < min {
        return Err(Error::domain(format!("l1 = {l1} is too small for eta = {eta}; minimal admissible l1 is {min}")));
    }
    if l1 > 1 << 40 {
        return Err(Error::domain("l1 is unreasonably large"));
    }
    DigitStream::new(base, Rule::Prop3 { eta, l1 })
}

/// `l_{i+1} = max((i+2)·l_i, ⌊l_iη⌋ + 1)` (1-based `i`) continued from the given prefix until `2^62`.
pub fn default_prop1_schedule(eta: f64, prefix: &[u64]) -> Result<Vec<u64>> {
    check_eta(eta)?;
    let mut l = prefix.to_vec();
    if l.is_empty() {
        l.push(8);
    }
    loop {
        let i = l.len() as u64;
        let li = *l.last().unwrap();
        match li.checked_mul(i + 2).map(|x| x.max(floor_eta(li, eta).saturating_add(1))) {
            Some(next) if next < 1 << 62 => l.push(next),
            _ => break,
        }
    }
    Ok(l)
}

/// Alternating prefix of length `l₁`, then after each `l_i` the block
/// `0^{⌊l_iη⌋−l_i} 1 (01)^q` padded with a final 1 when its remaining length is odd.
///
/// The schedule may be partial; it is continued with [`default_prop1_schedule`].
pub fn build_y_prop1(eta: f64, schedule: &[u64], base: u32) -> Result<DigitStream> {
    check_eta(eta)?;
    if schedule.is_empty() || schedule[0] == 0 {
        return Err(Error::domain("schedule must start with l1 >= 1"));
    }
    for (idx, w) in schedule.windows(2).enumerate() {
        let i = idx as u64 + 1;
        let (a, b) = (w[0], w[1]);
        if b < a.saturating_mul(i + 1) {
            return Err(Error::domain(format!(
                "schedule grows too slowly: l_{} = {b} < {} * l_{i} = {}",
                i + 1,
                i + 1,
                a.saturating_mul(i + 1)
            )));
        }
        if b <= floor_eta(a, eta) {
            return Err(Error::domain(format!(
                "block after l_{i} = {a} does not fit: l_{} must exceed floor(l_i * eta) = {}",
                i + 1,
                floor_eta(a, eta)
            )));
        }
    }
    let full = default_prop1_schedule(eta, schedule)?;
    DigitStream::new(base, Rule::Prop1 { eta, schedule: Arc::new(full) })
}

/// Positions of the ones of a Prop3 stream up to `limit`.
pub fn prop3_ones(eta: f64, l1: u64, limit: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut l = l1;
    loop {
        l = next_floor(l, eta);
        if l > limit {
            return out;
        }
        out.push(l);
    }
}
