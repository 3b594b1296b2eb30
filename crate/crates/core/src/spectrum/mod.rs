//! Bivariate spectrum of `(L_{α₁}, L_{α₂}(· + y))`: region classification, the
//! closed-form values known for each kind of `y`, finite-depth evidence for the
//! two-valued dichotomy off `K`, and a sampling estimator.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::construction::{
    condition_scan, sample_cantor_point, CantorParams, ConditionWitness, Exponents, ForbiddenChoice,
    Which, DEFAULT_N0,
};
use crate::diophantine::{ceil_sqrt, delta_estimate, delta_shifted_estimate};
use crate::exact;
use crate::symbolic::DigitStream;
use crate::yspec::YSpec;
use crate::{Error, Result};

/// What is known about `y`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum YDescriptor {
    BadicRational,
    /// Rational with a denominator not dividing a power of `b`; `Δ = 1`.
    Rational,
    Prop3 { eta: f64 },
    Prop1 { eta: f64 },
    /// Only digits are known; `delta` is an estimate and may be infinite.
    Explicit {
        #[serde(serialize_with = "crate::diophantine::ser_inf")]
        delta: f64,
    },
    AlmostEvery,
}

impl YDescriptor {
    /// Eventually periodic explicit expansions are rational and classified as such;
    /// seeded random digits stand for a typical `y`.
    pub fn from_yspec(y: &YSpec, base: u32) -> Result<Self> {
        Ok(match y {
            YSpec::Prop3 { eta, .. } => YDescriptor::Prop3 { eta: *eta },
            YSpec::Prop1 { eta, .. } => YDescriptor::Prop1 { eta: *eta },
            YSpec::Random { .. } | YSpec::AlmostEvery => YDescriptor::AlmostEvery,
            YSpec::Rational { .. } | YSpec::Explicit { .. } => {
                let s = y.stream(base)?.expect("rational kinds carry digits");
                if s.is_badic_rational() {
                    YDescriptor::BadicRational
                } else {
                    YDescriptor::Rational
                }
            }
        })
    }

    /// `Δ^b(y)`, `None` when infinite.
    pub fn delta(&self) -> Option<f64> {
        match self {
            YDescriptor::BadicRational => None,
            YDescriptor::Rational | YDescriptor::AlmostEvery => Some(1.0),
            YDescriptor::Prop3 { eta } | YDescriptor::Prop1 { eta } => Some(*eta),
            YDescriptor::Explicit { delta } => delta.is_finite().then_some(*delta),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumQuery {
    pub h1: f64,
    pub h2: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub y: YDescriptor,
    /// Inputs were given as exact decimals; the diagonal is then tested exactly.
    pub exact: bool,
    r: [BigRational; 4],
}

impl SpectrumQuery {
    pub fn new(h1: f64, h2: f64, alpha1: f64, alpha2: f64, y: YDescriptor) -> Result<Self> {
        let r = [exact::from_f64(h1)?, exact::from_f64(h2)?, exact::from_f64(alpha1)?, exact::from_f64(alpha2)?];
        Self::build(r, y, false)
    }

    /// Decimal strings such as `0.8` are read exactly.
    pub fn parse(h1: &str, h2: &str, alpha1: &str, alpha2: &str, y: YDescriptor) -> Result<Self> {
        let r = [
            exact::parse_decimal(h1)?,
            exact::parse_decimal(h2)?,
            exact::parse_decimal(alpha1)?,
            exact::parse_decimal(alpha2)?,
        ];
        Self::build(r, y, true)
    }

    fn build(r: [BigRational; 4], y: YDescriptor, exact_in: bool) -> Result<Self> {
        if r[0].is_negative() || r[1].is_negative() {
            return Err(Error::domain("exponents must be non-negative"));
        }
        if !r[2].is_positive() || !r[3].is_positive() {
            return Err(Error::domain("alphas must be positive"));
        }
        if let Some(d) = y.delta() {
            if !(d >= 1.0) {
                return Err(Error::domain(format!("Δ must be at least 1, got {d}")));
            }
        }
        Ok(SpectrumQuery {
            h1: exact::to_f64(&r[0]),
            h2: exact::to_f64(&r[1]),
            alpha1: exact::to_f64(&r[2]),
            alpha2: exact::to_f64(&r[3]),
            y,
            exact: exact_in,
            r,
        })
    }

    fn in_support(&self) -> bool {
        let [h1, h2, a1, a2] = &self.r;
        h1 <= a1 && h2 <= a2
    }

    /// `(H₁/α₁, H₂/α₂)` compared: `Less` when `H₁/α₁ < H₂/α₂`.
    fn ratio_cmp(&self) -> Ordering {
        let [h1, h2, a1, a2] = &self.r;
        (h1 * a2).cmp(&(h2 * a1))
    }

    fn on_diagonal(&self) -> bool {
        if self.exact {
            return self.ratio_cmp() == Ordering::Equal;
        }
        let (x, y) = (self.h2 * self.alpha1, self.alpha2 * self.h1);
        (x - y).abs() <= 1e-12 * x.abs().max(y.abs())
    }

    /// `[0, α₁/Δ] × [0, α₂/Δ]`.
    fn in_rectangle(&self, delta: Option<f64>) -> bool {
        let [h1, h2, a1, a2] = &self.r;
        match delta {
            None => h1.is_zero() && h2.is_zero(),
            Some(d) => match exact::from_f64(d) {
                Ok(d) => h1 * &d <= *a1 && h2 * &d <= *a2,
                Err(_) => false,
            },
        }
    }

    fn min_ratio(&self) -> f64 {
        (self.h1 / self.alpha1).min(self.h2 / self.alpha2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RegionClass {
    #[serde(rename = "K-rectangle")]
    KRectangle,
    #[serde(rename = "K-diagonal")]
    KDiagonal,
    #[serde(rename = "green")]
    Green,
    #[serde(rename = "outside-support")]
    OutsideSupport,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpectrumValue {
    Dim(f64),
    Empty,
    DichotomyUndetermined,
}

impl Serialize for SpectrumValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SpectrumValue::Dim(d) => s.serialize_f64(*d),
            SpectrumValue::Empty => s.serialize_str("-inf"),
            SpectrumValue::DichotomyUndetermined => s.serialize_str("undetermined"),
        }
    }
}

impl std::fmt::Display for SpectrumValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpectrumValue::Dim(d) => write!(f, "{d:.16e}"),
            SpectrumValue::Empty => f.write_str("-inf"),
            SpectrumValue::DichotomyUndetermined => f.write_str("undetermined"),
        }
    }
}

/// Region of `(H₁, H₂)` given `Δ^b(y)` (`None` for infinity). Diagonal points inside
/// the rectangle are labelled `K-diagonal`.
pub fn classify_region(q: &SpectrumQuery, delta_y: Option<f64>) -> RegionClass {
    if !q.in_support() {
        RegionClass::OutsideSupport
    } else if q.on_diagonal() {
        RegionClass::KDiagonal
    } else if q.in_rectangle(delta_y) {
        RegionClass::KRectangle
    } else {
        RegionClass::Green
    }
}

fn prop3_value(q: &SpectrumQuery, eta: f64) -> SpectrumValue {
    let [h1, h2, a1, a2] = &q.r;
    let Ok(eta) = exact::from_f64(eta) else { return SpectrumValue::Empty };
    let rect = h1 * &eta <= *a1 && h2 * &eta <= *a2;
    // H₂ ∈ [α₂H₁²/α₁², α₂H₁/α₁] with H₁ ∈ [α₁/η, α₁], and the mirrored branch
    let upper = h2 * a1 * a1 >= a2 * h1 * h1 && h2 * a1 <= a2 * h1 && h1 * &eta >= *a1 && h1 <= a1;
    let lower = h1 * a2 * a2 >= a1 * h2 * h2 && h1 * a2 <= a1 * h2 && h2 * &eta >= *a2 && h2 <= a2;
    if rect || upper || lower {
        SpectrumValue::Dim(q.min_ratio())
    } else {
        SpectrumValue::Empty
    }
}

/// Value at an off-diagonal point of the support.
fn off_diagonal_value(q: &SpectrumQuery) -> SpectrumValue {
    match &q.y {
        YDescriptor::BadicRational => SpectrumValue::Empty,
        YDescriptor::Rational | YDescriptor::AlmostEvery | YDescriptor::Prop1 { .. } => {
            SpectrumValue::Dim(q.min_ratio())
        }
        YDescriptor::Prop3 { eta } => prop3_value(q, *eta),
        YDescriptor::Explicit { delta } => {
            if q.in_rectangle(delta.is_finite().then_some(*delta)) {
                SpectrumValue::Dim(q.min_ratio())
            } else {
                SpectrumValue::DichotomyUndetermined
            }
        }
    }
}

pub fn theoretical_bivariate(q: &SpectrumQuery) -> SpectrumValue {
    if !q.in_support() {
        SpectrumValue::Empty
    } else if q.on_diagonal() {
        SpectrumValue::Dim(q.min_ratio())
    } else {
        off_diagonal_value(q)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoreticalReport {
    pub region: RegionClass,
    pub value: SpectrumValue,
    /// A float query within tolerance of the diagonal; `off_diagonal_value` then holds
    /// the value just off it.
    pub near_diagonal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub off_diagonal_value: Option<SpectrumValue>,
}

pub fn theoretical_report(q: &SpectrumQuery) -> TheoreticalReport {
    let region = classify_region(q, q.y.delta());
    let value = theoretical_bivariate(q);
    let near = region == RegionClass::KDiagonal && !q.exact && q.ratio_cmp() != Ordering::Equal;
    TheoreticalReport {
        region,
        value,
        near_diagonal: near,
        off_diagonal_value: near.then(|| off_diagonal_value(q)),
    }
}

pub fn univariate_spectrum(h: f64, alpha: f64) -> SpectrumValue {
    if (0.0..=alpha).contains(&h) {
        SpectrumValue::Dim(h / alpha)
    } else {
        SpectrumValue::Empty
    }
}

/// Dimension of `{x : h₁(x) ≤ H₁, h₂(x) ≤ H₂}`.
pub fn lower_levelset_spectrum(h1: f64, h2: f64, alpha1: f64, alpha2: f64) -> Result<f64> {
    if !(alpha1 > 0.0 && alpha2 > 0.0) || !(0.0..=alpha1).contains(&h1) || !(0.0..=alpha2).contains(&h2) {
        return Err(Error::domain(format!("({h1}, {h2}) lies outside [0, {alpha1}] x [0, {alpha2}]")));
    }
    Ok((h1 / alpha1).min(h2 / alpha2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    MinFormulaEvidence,
    EmptyEvidence,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DichotomyWitness {
    pub n: u64,
    pub window_end: u64,
    #[serde(flatten)]
    pub at: ConditionWitness,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DichotomyReport {
    pub verdict: Verdict,
    pub condition: Option<Which>,
    pub depth: u64,
    /// Range of `n` whose windows fit in the prefix.
    pub scanned: Option<(u64, u64)>,
    pub holding: u64,
    pub failing: u64,
    /// Holding `n`, each at least twice the previous.
    pub checkpoints: Vec<u64>,
    /// Violations at failing `n`, one per distinct `l`, earliest first.
    pub witnesses: Vec<DichotomyWitness>,
}

const WITNESS_CAP: usize = 64;
pub const MIN_CHAIN: usize = 3;

/// Scans condition (ii) when `H₂/α₂ < H₁/α₁` and (i) otherwise, over `n ≥ ⌈√depth⌉`.
///
/// Evidence for the min formula is a chain of [`MIN_CHAIN`] holding `n`, each at least
/// twice the previous; evidence for emptiness is a scan where no `n` holds. Factorial
/// schedules put only a handful of scales below any practical depth, so the chain
/// length does not grow with the depth.
pub fn dichotomy_classify(theta: &DigitStream, q: &SpectrumQuery, depth: u64) -> Result<DichotomyReport> {
    let mut rep = DichotomyReport {
        verdict: Verdict::Inconclusive,
        condition: None,
        depth,
        scanned: None,
        holding: 0,
        failing: 0,
        checkpoints: vec![],
        witnesses: vec![],
    };
    let [h1, h2, a1, a2] = q.r.clone();
    if !q.in_support() || h1.is_zero() || h2.is_zero() || q.ratio_cmp() == Ordering::Equal {
        return Ok(rep);
    }
    let which = if q.ratio_cmp() == Ordering::Greater { Which::Ii } else { Which::I };
    rep.condition = Some(which);
    let e = Exponents::from_exact(a1, a2, h1, h2)?;
    let mut seen = std::collections::BTreeSet::new();
    theta.with_prefix(depth as usize, |t| {
        condition_scan(t, &e, which, ceil_sqrt(depth), |s| {
            rep.scanned = Some((rep.scanned.map_or(s.n, |r| r.0), s.n));
            match s.witness {
                None => {
                    rep.holding += 1;
                    if rep.checkpoints.last().is_none_or(|&p| s.n >= 2 * p) {
                        rep.checkpoints.push(s.n);
                    }
                }
                Some(w) => {
                    rep.failing += 1;
                    if rep.witnesses.len() < WITNESS_CAP && seen.insert(w.l) {
                        rep.witnesses.push(DichotomyWitness { n: s.n, window_end: s.window_end, at: w });
                    }
                }
            }
        })
    });
    rep.verdict = if rep.scanned.is_none() {
        Verdict::Inconclusive
    } else if rep.checkpoints.len() >= MIN_CHAIN {
        Verdict::MinFormulaEvidence
    } else if rep.holding == 0 {
        Verdict::EmptyEvidence
    } else {
        Verdict::Inconclusive
    };
    Ok(rep)
}

#[derive(Clone, Debug)]
pub struct EmpiricalConfig {
    pub base: u32,
    pub alpha1: f64,
    pub alpha2: f64,
    pub y: DigitStream,
    pub y_desc: YDescriptor,
    /// Digits read per sample for the exponent estimates.
    pub depth: u64,
    /// Depth of the cells counted per bin, at most `depth`.
    pub cell_depth: u64,
    pub samples: usize,
    /// Cantor targets `(H₁, H₂)` sampled round-robin for the first
    /// `⌊samples · cantor_fraction⌋` samples; the rest are uniform.
    pub cantor: Vec<(f64, f64)>,
    pub cantor_fraction: f64,
    pub n0: u128,
    pub bin_width: f64,
    pub seed: u64,
}

impl EmpiricalConfig {
    pub fn new(base: u32, alpha1: f64, alpha2: f64, y: DigitStream, y_desc: YDescriptor, seed: u64) -> Self {
        EmpiricalConfig {
            base,
            alpha1,
            alpha2,
            y,
            y_desc,
            depth: 1 << 14,
            cell_depth: 1 << 14,
            samples: 10_000,
            cantor: vec![],
            cantor_fraction: 0.0,
            n0: DEFAULT_N0,
            bin_width: 0.25,
            seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BinRow {
    pub h1_bin: f64,
    pub h2_bin: f64,
    pub count: u64,
    pub dim_est: f64,
    pub dim_theory: SpectrumValue,
}

impl BinRow {
    pub fn csv_header() -> &'static str {
        "h1_bin,h2_bin,count,dim_est,dim_theory"
    }

    pub fn to_csv(&self) -> String {
        format!("{:.16e},{:.16e},{},{:.16e},{}", self.h1_bin, self.h2_bin, self.count, self.dim_est, self.dim_theory)
    }
}

/// Seed of sample `i`: word 0 of stream `i` of the master generator.
pub fn sample_seed(master: u64, i: u64) -> u64 {
    let mut r = ChaCha8Rng::seed_from_u64(master);
    r.set_stream(i);
    r.next_u64()
}

/// Digit sets seen at each position by the samples of one bin.
struct Hull {
    count: u64,
    seen: Vec<[u64; 4]>,
}

impl Hull {
    fn new(n: usize) -> Self {
        Hull { count: 0, seen: vec![[0; 4]; n] }
    }

    fn add(&mut self, d: &[u8]) {
        self.count += 1;
        for (s, &x) in self.seen.iter_mut().zip(d) {
            s[(x >> 6) as usize] |= 1 << (x & 63);
        }
    }

    /// `min over n' ∈ [⌈√n⌉, n]` of `log_b(cells of the digitwise hull at depth n')/n'`.
    fn dim(&self, base: u32) -> f64 {
        let lb = (base as f64).ln();
        let n = self.seen.len();
        let lo = ceil_sqrt(n as u64).max(1) as usize;
        let mut acc = 0.0;
        let mut best = f64::INFINITY;
        for (i, s) in self.seen.iter().enumerate() {
            let k: u32 = s.iter().map(|w| w.count_ones()).sum();
            acc += (k.max(1) as f64).ln() / lb;
            if i + 1 >= lo {
                best = best.min(acc / (i + 1) as f64);
            }
        }
        if best.is_finite() { best } else { 0.0 }
    }
}

fn cantor_params(cfg: &EmpiricalConfig, h: (f64, f64)) -> Result<Arc<CantorParams>> {
    let e = Exponents::new(cfg.alpha1, cfg.alpha2, h.0, h.1)?;
    let need = cfg.depth.max(cfg.cell_depth) as u128;
    for levels in 1..64 {
        let p = CantorParams::new(e.clone(), cfg.y.clone(), cfg.n0, levels, u128::MAX / 4)?;
        if p.last_n() >= need {
            return Ok(Arc::new(p));
        }
    }
    Err(Error::Resource { what: "schedule does not reach the requested depth".into(), level: 64 })
}

fn bin_of(h: f64, w: f64) -> i64 {
    (h / w).round() as i64
}

/// Samples points, bins `(α₁/Δ̂(x), α₂/Δ̂(x−y))` on a grid of width `bin_width` (nearest
/// grid point) and reports each occupied bin's coarse dimension.
pub fn empirical_bivariate(cfg: &EmpiricalConfig) -> Result<Vec<BinRow>> {
    if cfg.y.base() != cfg.base {
        return Err(Error::domain("y and the sampling base differ"));
    }
    if cfg.base > 255 || cfg.cell_depth > cfg.depth || cfg.depth < 16 || !(cfg.bin_width > 0.0) {
        return Err(Error::domain("need depth >= 16, cell_depth <= depth and a positive bin width"));
    }
    if !(0.0..=1.0).contains(&cfg.cantor_fraction) {
        return Err(Error::domain("cantor_fraction must lie in [0, 1]"));
    }
    let params: Vec<_> = cfg.cantor.iter().map(|&h| cantor_params(cfg, h)).collect::<Result<_>>()?;
    let n_cantor = if params.is_empty() { 0 } else { (cfg.samples as f64 * cfg.cantor_fraction) as usize };
    let cd = cfg.cell_depth as usize;
    let mut bins: BTreeMap<(i64, i64), Hull> = BTreeMap::new();
    const CHUNK: usize = 256;
    for lo in (0..cfg.samples).step_by(CHUNK) {
        let hi = (lo + CHUNK).min(cfg.samples);
        let batch: Vec<((i64, i64), Vec<u8>)> = (lo..hi)
            .into_par_iter()
            .map(|i| -> Result<_> {
                let seed = sample_seed(cfg.seed, i as u64);
                let x = if i < n_cantor {
                    sample_cantor_point(&params[i % params.len()], seed, ForbiddenChoice::Random)?
                } else {
                    DigitStream::seeded(cfg.base, seed)?
                };
                let d1 = delta_estimate(&x, cfg.depth)?.estimate;
                let d2 = delta_shifted_estimate(&x, &cfg.y, cfg.depth)?.estimate;
                let key = (bin_of(cfg.alpha1 / d1, cfg.bin_width), bin_of(cfg.alpha2 / d2, cfg.bin_width));
                Ok((key, x.prefix(cd)))
            })
            .collect::<Result<_>>()?;
        for (key, d) in batch {
            bins.entry(key).or_insert_with(|| Hull::new(cd)).add(&d);
        }
    }
    bins.into_iter()
        .map(|((i, j), hull)| {
            let (h1, h2) = (i as f64 * cfg.bin_width, j as f64 * cfg.bin_width);
            let q = SpectrumQuery::new(h1, h2, cfg.alpha1, cfg.alpha2, cfg.y_desc.clone())?;
            Ok(BinRow { h1_bin: h1, h2_bin: h2, count: hull.count, dim_est: hull.dim(cfg.base), dim_theory: theoretical_bivariate(&q) })
        })
        .collect()
}
