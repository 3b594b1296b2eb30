//! Evaluation of `L^b_α(x) = Σ_{i≥1} {bⁱx} / b^{αi}` and of its translates, where
//! `{·}` is the centred sawtooth, plus Haar coefficients and Hölder estimates.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::symbolic::{check_base, project, DigitStream};
use crate::{exact, Error, Result};

/// `x − ⌊x⌋ − 1/2` off the integers, `0` on them.
pub fn sawtooth(x: f64) -> f64 {
    let f = x - x.floor();
    if f == 0.0 {
        0.0
    } else {
        f - 0.5
    }
}

/// Exponent and base of the series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LevyParams {
    pub alpha: f64,
    pub base: u32,
}

impl LevyParams {
    pub fn new(alpha: f64, base: u32) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::domain(format!("alpha must be a positive real, got {alpha}")));
        }
        check_base(base)?;
        Ok(LevyParams { alpha, base })
    }

    /// `b^{-α(N+1)} / (2(1 − b^{-α}))`, the bound on everything after term `N`.
    pub fn tail_bound(&self, n: u64) -> f64 {
        let r = (self.base as f64).powf(-self.alpha);
        (self.base as f64).powf(-self.alpha * (n as f64 + 1.0)) / (2.0 * (1.0 - r))
    }

    /// Smallest `N` whose tail bound is at most `tol`.
    pub fn terms_for(&self, tol: f64) -> Result<u64> {
        if !(tol > 0.0) {
            return Err(Error::domain(format!("tol must be positive, got {tol}")));
        }
        let r = (self.base as f64).powf(-self.alpha);
        let c = 1.0 / (2.0 * (1.0 - r));
        // solve r^{N+1} c <= tol, then fix up rounding
        let guess = ((tol / c).ln() / r.ln() - 1.0).ceil().max(0.0);
        if guess > 1e7 {
            return Err(Error::Resource { what: "series terms".into(), level: guess as usize });
        }
        let mut n = (guess as u64).saturating_sub(2);
        while self.tail_bound(n) > tol {
            n += 1;
        }
        Ok(n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Evaluation {
    pub value: f64,
    pub terms_used: u64,
    pub tail_bound: f64,
}

/// Neumaier-compensated running sum.
#[derive(Default)]
struct Sum {
    s: f64,
    c: f64,
}

impl Sum {
    fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    fn value(&self) -> f64 {
        self.s + self.c
    }
}

fn ratio_f64(r: &BigUint, d: &BigUint) -> f64 {
    BigRational::new(BigInt::from(r.clone()), BigInt::from(d.clone())).to_f64().unwrap_or(0.0)
}

/// `saw(bⁱx)` for `i = 1..=n`, computed exactly from the reduced fraction of `x`.
fn saw_terms(x: &BigRational, base: u32, n: u64, mut f: impl FnMut(u64, f64)) {
    let frac = x - x.floor();
    let num = frac.numer().to_biguint().expect("non-negative");
    let den = frac.denom().to_biguint().expect("positive");
    if let (Some(mut r), Some(d)) = (num.to_u64(), den.to_u64()) {
        for i in 1..=n {
            r = ((r as u128 * base as u128) % d as u128) as u64;
            let v = if r == 0 { 0.0 } else { r as f64 / d as f64 - 0.5 };
            f(i, v);
        }
        return;
    }
    let mut r = num;
    for i in 1..=n {
        r = (r * base) % &den;
        let v = if r.is_zero() { 0.0 } else { ratio_f64(&r, &den) - 0.5 };
        f(i, v);
    }
}

/// Certified evaluation at an exact rational point.
pub fn eval_exact(p: &LevyParams, x: &BigRational, tol: f64) -> Result<Evaluation> {
    let n = p.terms_for(tol)?;
    let mut sum = Sum::default();
    let b = p.base as f64;
    saw_terms(x, p.base, n, |i, v| {
        if v != 0.0 {
            sum.add(v * b.powf(-p.alpha * i as f64));
        }
    });
    Ok(Evaluation { value: sum.value(), terms_used: n, tail_bound: p.tail_bound(n) })
}

/// Evaluation at the exact binary value of `x`.
pub fn eval(p: &LevyParams, x: f64, tol: f64) -> Result<Evaluation> {
    eval_exact(p, &exact::from_f64(x)?, tol)
}

/// `L^{b,y}_α(x) = L^b_α(x − y)`.
pub fn eval_translated(p: &LevyParams, x: &BigRational, y: &BigRational, tol: f64) -> Result<Evaluation> {
    eval_exact(p, &(x - y), tol)
}

/// As [`eval_translated`] with `y` given by digits; `y` is truncated 64 digits past the last term.
pub fn eval_translated_stream(
    p: &LevyParams,
    x: &BigRational,
    y: &DigitStream,
    tol: f64,
) -> Result<Evaluation> {
    if y.base() != p.base {
        return Err(Error::domain("translation stream has a different base"));
    }
    let n = p.terms_for(tol)?;
    let yq = project(y, n as usize + 64);
    eval_translated(p, x, &yq, tol)
}

/// Pointwise Hölder exponent `α / Δ`, zero at `Δ = ∞`.
pub fn holder_from_delta(alpha: f64, delta: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::domain("alpha must be positive"));
    }
    if delta.is_nan() || delta < 1.0 {
        return Err(Error::domain(format!("delta must be at least 1, got {delta}")));
    }
    Ok(if delta.is_infinite() { 0.0 } else { alpha / delta })
}

/// Normalisation of the Haar wavelet at scale `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HaarNorm {
    /// `2^{j/2} ψ(2^j x − k)`, unit `L²` norm.
    L2,
    /// `2^j ψ(2^j x − k)`, unit `L¹` norm.
    L1,
}

fn check_haar(base: u32, j: u32, k: u64) -> Result<()> {
    if base != 2 {
        return Err(Error::Unsupported(format!("Haar coefficients need base 2, got {base}")));
    }
    if j > 50 || k >= 1u64 << j {
        return Err(Error::domain(format!("invalid Haar index (j={j}, k={k})")));
    }
    Ok(())
}

/// `−(1/4) 2^{−j/2} Σ_{l=0}^{l_max} 2^{(1−α)l}`.
pub fn haar_coeff_closed(alpha: f64, j: u32, l_max: u32, base: u32) -> Result<f64> {
    if base != 2 {
        return Err(Error::Unsupported(format!("Haar coefficients need base 2, got {base}")));
    }
    let mut sum = Sum::default();
    for l in 0..=l_max {
        sum.add(2f64.powf((1.0 - alpha) * l as f64));
    }
    Ok(-0.25 * 2f64.powf(-(j as f64) / 2.0) * sum.value())
}

/// `(f² − f)/2` with `f = {t}`: a periodic antiderivative of `t ↦ saw(t)`.
fn saw_primitive(t: f64) -> f64 {
    let f = t - t.floor();
    (f * f - f) / 2.0
}

/// `⟨ψ_{j,k} | saw(2^l ·)⟩` on `[0, 1]`.
///
/// The integrand is affine between multiples of `2^{-l}`, so integrating with the
/// periodic primitive on the two halves of the support is exact.
pub fn haar_term(j: u32, k: u64, l: u32, norm: HaarNorm) -> Result<f64> {
    check_haar(2, j, k)?;
    if l > j + 60 {
        return Ok(0.0);
    }
    let a = k as f64 * 2f64.powi(-(j as i32));
    let h = 2f64.powi(-(j as i32));
    let s = 2f64.powi(l as i32);
    let g = |x: f64| saw_primitive(s * x) / s;
    let integral = 2.0 * g(a + h / 2.0) - g(a) - g(a + h);
    let scale = match norm {
        HaarNorm::L2 => 2f64.powf(j as f64 / 2.0),
        HaarNorm::L1 => 2f64.powi(j as i32),
    };
    Ok(scale * integral)
}

/// `⟨2^{j/2}ψ(2^j· − k) | Σ_{l=1}^{n_terms} 2^{−αl} saw(2^l ·)⟩`.
pub fn haar_coeff_numeric(alpha: f64, j: u32, k: u64, n_terms: u32) -> Result<f64> {
    haar_coeff_numeric_with(alpha, j, k, 1..=n_terms, HaarNorm::L2)
}

pub fn haar_coeff_numeric_with(
    alpha: f64,
    j: u32,
    k: u64,
    ls: std::ops::RangeInclusive<u32>,
    norm: HaarNorm,
) -> Result<f64> {
    check_haar(2, j, k)?;
    let mut sum = Sum::default();
    for l in ls {
        sum.add(2f64.powf(-alpha * l as f64) * haar_term(j, k, l, norm)?);
    }
    Ok(sum.value())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LpDiagnostic {
    pub summable: bool,
    /// Partial sums of `Σ_{j≥0} 2^{−2αj}` for 1..=64 terms.
    pub partial_sums: Vec<f64>,
    pub limit: Option<f64>,
}

pub fn lp_diagnostic(alpha: f64) -> LpDiagnostic {
    let r = 2f64.powf(-2.0 * alpha);
    let mut partial_sums = Vec::with_capacity(64);
    let mut sum = Sum::default();
    for j in 0..64 {
        sum.add(r.powi(j));
        partial_sums.push(sum.value());
    }
    let summable = alpha > 0.0;
    LpDiagnostic { summable, partial_sums, limit: summable.then(|| 1.0 / (1.0 - r)) }
}

fn saw_exact(t: &BigRational) -> BigRational {
    let f = frac(t);
    if f.is_zero() {
        f
    } else {
        f - BigRational::new(1.into(), 2.into())
    }
}

/// `L(x+h) − L(x) − c·h` summed term by term in exact arithmetic, so increments far
/// below the size of `L` keep their relative precision. For `α > 1`, `c = q/(1 − q)`
/// with `q = b^{1−α}` is the slope of the linear part; otherwise `c = 0`.
fn increment(p: &LevyParams, x: &BigRational, h: &BigRational, n: u64) -> f64 {
    let b = BigRational::from_integer(p.base.into());
    let drift = p.alpha > 1.0;
    let (mut t, mut th, mut bh) = (x.clone(), x + h, h.clone());
    let mut sum = Sum::default();
    for i in 1..=n {
        t = frac(&(&t * &b));
        th = &th * &b;
        bh = &bh * &b;
        let mut d = saw_exact(&th) - saw_exact(&t);
        th = frac(&th);
        if drift {
            d -= &bh;
        }
        if !d.is_zero() {
            sum.add(exact::to_f64(&d) * (p.base as f64).powf(-p.alpha * i as f64));
        }
    }
    if drift {
        // drift terms past n
        let q = (p.base as f64).powf(1.0 - p.alpha);
        sum.add(-exact::to_f64(h) * q.powi(n as i32 + 1) / (1.0 - q));
    }
    sum.value()
}

/// Oscillation-based estimate of the pointwise Hölder exponent at `x`.
///
/// For each scale `s` the sup of `|L(x+h) − L(x) − c·h|` over the `2b³` offsets
/// `h = ±t·b^{−s−3}`, `t = 1..b³`, is taken; `c` removes the linear drift that
/// would otherwise cap the estimate at 1 when `α > 1`. Returns minus the slope of
/// `log_b(osc)` against `s`.
pub fn osc_holder_estimate(p: &LevyParams, x: &BigRational, scales: &[u32]) -> Result<f64> {
    if scales.len() < 3 {
        return Err(Error::domain("need at least three scales"));
    }
    let b = p.base;
    let b3 = (b as u64).pow(3);
    let smax = *scales.iter().max().unwrap() as u64;
    // the neglected tail stays far below the smallest oscillation of interest
    let n = smax + 3 + (40.0 / p.alpha.min(1.0)).ceil() as u64;
    if n > 4096 {
        return Err(Error::Resource { what: "oscillation scales".into(), level: smax as usize });
    }
    let mut pts = Vec::with_capacity(scales.len());
    for &s in scales {
        let step = exact::pow_i(b, -(s as i64) - 3);
        let mut osc: f64 = 0.0;
        for t in 1..=b3 {
            for sign in [-1i64, 1] {
                let h = &step * BigRational::from_integer(BigInt::from(sign * t as i64));
                osc = osc.max(increment(p, x, &h, n).abs());
            }
        }
        if osc > 0.0 {
            pts.push((s as f64, osc.log(b as f64)));
        }
    }
    if pts.len() < 3 {
        return Err(Error::domain("oscillation vanished at too many scales"));
    }
    Ok(-regression_slope(&pts))
}

pub(crate) fn regression_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Reduces a rational to `[0, 1)`.
pub fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

/// `true` when `x` is an integer multiple of some `b^{-n}`.
pub fn is_badic(x: &BigRational, base: u32) -> bool {
    let d = x.denom().abs();
    let b = BigInt::from(base);
    let mut d = d;
    loop {
        let g = d.gcd(&b);
        if g == BigInt::from(1) {
            return d == BigInt::from(1);
        }
        d /= g;
    }
}
