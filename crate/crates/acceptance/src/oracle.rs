//! Reference computations that share no code with the library paths they check.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `l_1 < l_2 < ...` with `l_{i+1} = ⌊l_i η⌋`, up to `limit`.
pub fn floor_chain(eta: &BigRational, l1: u64, limit: u64) -> Vec<u64> {
    let mut out = vec![l1];
    loop {
        let l = *out.last().unwrap();
        let next = (BigRational::from_integer(l.into()) * eta).floor().to_integer().to_u64().unwrap();
        if next > limit {
            return out;
        }
        out.push(next);
    }
}

/// `{t} − 1/2` off the integers, zero on them, exactly.
fn saw(t: &BigRational) -> BigRational {
    let f = t - t.floor();
    if f.is_zero() {
        f
    } else {
        f - rat(1, 2)
    }
}

/// `2^j ∫ ψ(2^j x − k) saw(2^l x) dx` for `l <= j` by the midpoint rule, exact because
/// `saw(2^l ·)` is affine on each half of the support.
pub fn haar_l1(j: u32, k: u64, l: u32) -> BigRational {
    assert!(l <= j);
    let h = rat(1, 1i64 << (j + 1));
    let a = BigRational::from_integer(k.into()) * rat(1, 1i64 << j);
    let s = BigRational::from_integer(BigInt::from(1u64 << l));
    let mid1 = &a + &h / rat(2, 1);
    let mid2 = &a + &h + &h / rat(2, 1);
    let int = &h * (saw(&(&s * mid1)) - saw(&(&s * mid2)));
    int * BigRational::from_integer(BigInt::from(1u64 << j))
}

/// `Σ_{i=1}^{n} saw(bⁱx) b^{−αi}` with every sawtooth value computed exactly.
pub fn levy_partial(alpha: f64, base: u32, x: &BigRational, n: u64) -> f64 {
    let mut t = x.clone();
    let bq = BigRational::from_integer(base.into());
    let mut terms = Vec::with_capacity(n as usize);
    for i in 1..=n {
        t = &t * &bq;
        t = &t - t.floor();
        terms.push(saw(&t).to_f64().unwrap() * (base as f64).powf(-alpha * i as f64));
    }
    // small terms first
    terms.iter().rev().sum()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Kind {
    Badic,
    Rational,
    Prop3,
    Prop1,
    Explicit,
    AlmostEvery,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Val {
    Dim(f64),
    Empty,
    Undetermined,
}

pub struct Pt {
    pub h1: BigRational,
    pub h2: BigRational,
    pub a1: BigRational,
    pub a2: BigRational,
    pub kind: Kind,
    /// `Δ(y)`, `None` for infinity.
    pub delta: Option<BigRational>,
}

impl Pt {
    fn min(&self) -> Val {
        let f = |r: &BigRational| r.to_f64().unwrap();
        Val::Dim((f(&self.h1) / f(&self.a1)).min(f(&self.h2) / f(&self.a2)))
    }
    fn support(&self) -> bool {
        !self.h1.is_negative() && !self.h2.is_negative() && self.h1 <= self.a1 && self.h2 <= self.a2
    }
    fn diagonal(&self) -> bool {
        &self.h2 / &self.a2 == &self.h1 / &self.a1
    }
    fn rect(&self) -> bool {
        match &self.delta {
            None => self.h1.is_zero() && self.h2.is_zero(),
            Some(d) => &self.h1 * d <= self.a1 && &self.h2 * d <= self.a2,
        }
    }
    /// `H₂/α₂ ∈ [(H₁/α₁)², H₁/α₁]` with `H₁/α₁ >= 1/Δ`.
    fn parabola(&self, swap: bool) -> bool {
        let (x, y) = if swap {
            (&self.h2 / &self.a2, &self.h1 / &self.a1)
        } else {
            (&self.h1 / &self.a1, &self.h2 / &self.a2)
        };
        let d = self.delta.clone().unwrap();
        y >= &x * &x && y <= x && &x * d >= BigRational::one() && x <= BigRational::one()
    }
}

type Rule = (&'static [Kind], fn(&Pt) -> bool, fn(&Pt) -> Val);

use Kind::*;
const ALL: &[Kind] = &[Badic, Rational, Prop3, Prop1, Explicit, AlmostEvery];

/// First matching row wins.
pub const TABLE: &[Rule] = &[
    (ALL, |p| !p.support(), |_| Val::Empty),
    (ALL, |p| p.diagonal(), |p| p.min()),
    (&[Badic], |_| true, |_| Val::Empty),
    (&[Rational, Prop1, AlmostEvery], |_| true, |p| p.min()),
    (&[Prop3, Explicit], |p| p.rect(), |p| p.min()),
    (&[Prop3], |p| p.parabola(false) || p.parabola(true), |p| p.min()),
    (&[Prop3], |_| true, |_| Val::Empty),
    (&[Explicit], |_| true, |_| Val::Undetermined),
];

pub fn spectrum(p: &Pt) -> Val {
    for (kinds, cond, val) in TABLE {
        if kinds.contains(&p.kind) && cond(p) {
            return val(p);
        }
    }
    unreachable!("the table ends with catch-all rows")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    Outside,
    Diagonal,
    Rectangle,
    Green,
}

pub fn region(p: &Pt) -> Region {
    if !p.support() {
        Region::Outside
    } else if p.diagonal() {
        Region::Diagonal
    } else if p.rect() {
        Region::Rectangle
    } else {
        Region::Green
    }
}

/// Per-position digit sets of a family of prefixes.
pub fn column_hull(points: &[Vec<u8>]) -> Vec<u32> {
    let n = points.iter().map(|p| p.len()).min().unwrap_or(0);
    (0..n)
        .map(|i| {
            let mut seen = [false; 256];
            points.iter().for_each(|p| seen[p[i] as usize] = true);
            seen.iter().filter(|&&s| s).count() as u32
        })
        .collect()
}
