use std::fmt;
use std::sync::{Arc, RwLock};

use num_integer::Integer;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// A digit generator that lives outside this module (the Cantor sampler, for one).
pub trait DigitSource: Send + Sync {
    /// Writes digits `start, start+1, ...` (1-based) into `out`.
    fn fill(&self, start: u64, out: &mut [u8]);
    /// Short label used when the stream is serialized.
    fn label(&self) -> String;
}

/// How a stream produces its digits.
#[derive(Clone)]
pub enum Rule {
    /// Expansion of `p/q` with `0 <= p < q`, `gcd(p, q) = 1`.
    Rational { p: u64, q: u64 },
    /// Zeros with isolated ones at `l_{i+1} = ⌊l_i η⌋`, starting from `l_1`.
    Prop3 { eta: f64, l1: u64 },
    /// Alternating prefix of length `l_1`, then blocks `0^{⌊l_iη⌋-l_i} 1 (01)^q [1]`.
    Prop1 { eta: f64, schedule: Arc<Vec<u64>> },
    /// Finite prefix followed by a repeated period (empty period means zeros).
    Explicit { prefix: Arc<Vec<u8>>, period: Arc<Vec<u8>> },
    /// Uniform digits from a seeded ChaCha8 stream, one 32-bit word per position.
    SeededRandom { seed: u64 },
    /// `σⁿ` of another stream.
    Shift { inner: DigitStream, by: u64 },
    Custom(Arc<dyn DigitSource>),
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Rational { p, q } => write!(f, "Rational({p}/{q})"),
            Rule::Prop3 { eta, l1 } => write!(f, "Prop3(eta={eta}, l1={l1})"),
            Rule::Prop1 { eta, schedule } => {
                write!(f, "Prop1(eta={eta}, l1={})", schedule.first().copied().unwrap_or(0))
            }
            Rule::Explicit { prefix, period } => {
                write!(f, "Explicit(prefix={}, period={})", prefix.len(), period.len())
            }
            Rule::SeededRandom { seed } => write!(f, "SeededRandom({seed})"),
            Rule::Shift { inner, by } => write!(f, "Shift({:?}, {by})", inner.rule()),
            Rule::Custom(src) => write!(f, "Custom({})", src.label()),
        }
    }
}

struct Inner {
    base: u8,
    rule: Rule,
    memo: RwLock<Vec<u8>>,
}

/// A lazily expanded infinite word over `{0, ..., b-1}`.
///
/// Cloning is cheap and clones share the memo.
#[derive(Clone)]
pub struct DigitStream {
    inner: Arc<Inner>,
}

impl fmt::Debug for DigitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DigitStream")
            .field("base", &self.inner.base)
            .field("rule", &self.inner.rule)
            .finish()
    }
}

pub(crate) fn check_base(b: u32) -> Result<u8> {
    if (2..=255).contains(&b) {
        Ok(b as u8)
    } else {
        Err(Error::domain(format!("base must be in 2..=255, got {b}")))
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Maps a uniform 32-bit word to a digit in `0..b`.
#[inline]
pub fn word_to_digit(w: u32, b: u8) -> u8 {
    ((w as u64 * b as u64) >> 32) as u8
}

/// ChaCha8 generator positioned so that the next word belongs to digit `start` (1-based).
pub fn rng_at(seed: u64, start: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos((start - 1) as u128);
    rng
}

impl DigitStream {
    pub fn new(base: u32, rule: Rule) -> Result<Self> {
        let base = check_base(base)?;
        match &rule {
            Rule::Rational { p, q } => {
                if *q == 0 || p >= q {
                    return Err(Error::domain("rational rule needs 0 <= p < q"));
                }
            }
            Rule::Explicit { prefix, period } => {
                if prefix.iter().chain(period.iter()).any(|&d| d >= base) {
                    return Err(Error::domain("digit out of range for base"));
                }
            }
            Rule::Shift { inner, .. } => {
                if inner.base() != base as u32 {
                    return Err(Error::domain("shift must keep the base"));
                }
            }
            _ => {}
        }
        Ok(Self::from_parts(base, rule))
    }

    pub(crate) fn from_parts(base: u8, rule: Rule) -> Self {
        DigitStream {
            inner: Arc::new(Inner { base, rule, memo: RwLock::new(Vec::new()) }),
        }
    }

    pub fn seeded(base: u32, seed: u64) -> Result<Self> {
        Self::new(base, Rule::SeededRandom { seed })
    }

    pub fn explicit(base: u32, prefix: Vec<u8>, period: Vec<u8>) -> Result<Self> {
        Self::new(base, Rule::Explicit { prefix: Arc::new(prefix), period: Arc::new(period) })
    }

    pub fn custom(base: u32, src: Arc<dyn DigitSource>) -> Result<Self> {
        Self::new(base, Rule::Custom(src))
    }

    pub fn base(&self) -> u32 {
        self.inner.base as u32
    }

    pub fn rule(&self) -> &Rule {
        &self.inner.rule
    }

    /// Digit at 1-based index `i`.
    pub fn digit(&self, i: u64) -> u8 {
        assert!(i >= 1, "digit positions are 1-based");
        {
            let memo = self.inner.memo.read().unwrap();
            if (i as usize) <= memo.len() {
                return memo[i as usize - 1];
            }
        }
        if i > (1 << 26) {
            // far beyond anything memoized: compute directly, don't grow the memo
            let mut d = [0u8];
            self.fill(i, &mut d);
            return d[0];
        }
        self.ensure(i as usize);
        self.inner.memo.read().unwrap()[i as usize - 1]
    }

    pub fn prefix(&self, n: usize) -> Vec<u8> {
        self.with_prefix(n, |p| p.to_vec())
    }

    /// Runs `f` on the first `n` digits without copying them.
    pub fn with_prefix<R>(&self, n: usize, f: impl FnOnce(&[u8]) -> R) -> R {
        self.ensure(n);
        let memo = self.inner.memo.read().unwrap();
        f(&memo[..n])
    }

    fn ensure(&self, n: usize) {
        if self.inner.memo.read().unwrap().len() >= n {
            return;
        }
        let mut memo = self.inner.memo.write().unwrap();
        let have = memo.len();
        if have >= n {
            return;
        }
        let target = n.max(have + 4096);
        memo.resize(target, 0);
        self.fill(have as u64 + 1, &mut memo[have..]);
    }

    /// Generates digits straight from the rule, bypassing the memo.
    pub fn fill(&self, start: u64, out: &mut [u8]) {
        let b = self.inner.base;
        match &self.inner.rule {
            Rule::Rational { p, q } => {
                let mut r = mulmod(*p, powmod(b as u64, start - 1, *q), *q);
                for d in out.iter_mut() {
                    let t = r as u128 * b as u128;
                    *d = (t / *q as u128) as u8;
                    r = (t % *q as u128) as u64;
                }
            }
            Rule::Prop3 { eta, l1 } => {
                out.fill(0);
                let end = start + out.len() as u64;
                let mut l = *l1;
                loop {
                    l = next_floor(l, *eta);
                    if l >= end {
                        break;
                    }
                    if l >= start {
                        out[(l - start) as usize] = 1;
                    }
                }
            }
            Rule::Prop1 { eta, schedule } => {
                for (k, d) in out.iter_mut().enumerate() {
                    *d = prop1_digit(*eta, schedule, start + k as u64);
                }
            }
            Rule::Explicit { prefix, period } => {
                for (k, d) in out.iter_mut().enumerate() {
                    let i = (start - 1) as usize + k;
                    *d = if i < prefix.len() {
                        prefix[i]
                    } else if period.is_empty() {
                        0
                    } else {
                        period[(i - prefix.len()) % period.len()]
                    };
                }
            }
            Rule::SeededRandom { seed } => {
                let mut rng = rng_at(*seed, start);
                for d in out.iter_mut() {
                    *d = word_to_digit(rng.next_u32(), b);
                }
            }
            Rule::Shift { inner, by } => {
                let from = start + by;
                let last = from + out.len() as u64 - 1;
                if last <= (1 << 26) {
                    inner.with_prefix(last as usize, |p| {
                        out.copy_from_slice(&p[from as usize - 1..]);
                    });
                } else {
                    inner.fill(from, out);
                }
            }
            Rule::Custom(src) => src.fill(start, out),
        }
    }

    /// True when the rule is known to produce a b-adic rational (eventually all zeros).
    pub fn is_badic_rational(&self) -> bool {
        match &self.inner.rule {
            Rule::Rational { q, .. } => is_badic_denominator(*q, self.base() as u64),
            Rule::Explicit { period, .. } => period.iter().all(|&d| d == 0),
            Rule::Shift { inner, .. } => inner.is_badic_rational(),
            _ => false,
        }
    }
}

/// `⌊l η⌋`, never less than `l + 1` so schedules always advance.
pub(crate) fn next_floor(l: u64, eta: f64) -> u64 {
    ((l as f64 * eta).floor() as u64).max(l.saturating_add(1))
}

pub(crate) fn is_badic_denominator(mut q: u64, b: u64) -> bool {
    loop {
        let g = q.gcd(&b);
        if g == 1 {
            return q == 1;
        }
        q /= g;
    }
}

fn prop1_digit(eta: f64, schedule: &[u64], p: u64) -> u8 {
    let l1 = schedule[0];
    if p <= l1 {
        return (p % 2) as u8;
    }
    let i = schedule.partition_point(|&l| l < p) - 1;
    let li = schedule[i];
    let next = schedule.get(i + 1).copied().unwrap_or(u64::MAX);
    let fl = (li as f64 * eta).floor() as u64;
    let o = p - li;
    let z = fl - li;
    if o <= z {
        return 0;
    }
    if o == z + 1 {
        return 1;
    }
    let n = next - fl - 1;
    let j = o - z - 1;
    if j <= n - n % 2 {
        (j % 2 == 0) as u8
    } else {
        1
    }
}

/// Expansion of `p/q mod 1` in base `b`, terminating representative for b-adic rationals.
pub fn expand_rational(p: i64, q: i64, b: u32) -> Result<DigitStream> {
    if q == 0 {
        return Err(Error::domain("zero denominator"));
    }
    let (p, q) = if q < 0 { (-(p as i128), -(q as i128)) } else { (p as i128, q as i128) };
    let p = p.rem_euclid(q);
    let g = p.gcd(&q);
    let (p, q) = ((p / g) as u64, (q / g) as u64);
    DigitStream::new(b, Rule::Rational { p, q })
}

/// `σⁿ(s)`.
pub fn shift(s: &DigitStream, n: u64) -> DigitStream {
    if n == 0 {
        return s.clone();
    }
    match s.rule() {
        Rule::Shift { inner, by } => DigitStream::from_parts(
            s.base() as u8,
            Rule::Shift { inner: inner.clone(), by: by + n },
        ),
        _ => DigitStream::from_parts(s.base() as u8, Rule::Shift { inner: s.clone(), by: n }),
    }
}
