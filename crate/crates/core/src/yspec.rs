//! The compact `--y-spec` grammar naming a translation parameter `y`:
//!
//! ```text
//! prop3:<eta>[:<l1>]             ones at l_{i+1} = ⌊l_i η⌋ (l1 defaults to the minimal one)
//! prop1:<eta>[:<l1>,<l2>,...]    block construction over a fast-growing schedule
//! rational:<p>/<q>               expansion of p/q mod 1
//! random:<seed>                  seeded uniform digits
//! explicit:<prefix_hex>[:<period_hex>]
//! ae                             a typical y, no digits attached
//! ```

use crate::construction::{build_y_prop1, build_y_prop3, minimal_l1};
use crate::symbolic::{decode_hex, expand_rational, DigitStream};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum YSpec {
    Prop3 { eta: f64, l1: u64 },
    Prop1 { eta: f64, schedule: Vec<u64> },
    Rational { p: i64, q: i64 },
    Random { seed: u64 },
    Explicit { prefix_hex: String, period_hex: String },
    AlmostEvery,
}

fn num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::parse(format!("bad {what}: {s:?}")))
}

fn eta(s: &str) -> Result<f64> {
    let e: f64 = num(s, "eta")?;
    if !e.is_finite() {
        return Err(Error::parse(format!("bad eta: {s:?}")));
    }
    Ok(e)
}

impl YSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let parts: Vec<&str> = if rest.is_empty() { vec![] } else { rest.split(':').collect() };
        let arity = |lo: usize, hi: usize| {
            if parts.len() < lo || parts.len() > hi {
                Err(Error::parse(format!("{kind} takes {lo} to {hi} arguments, got {}", parts.len())))
            } else {
                Ok(())
            }
        };
        match kind {
            "prop3" => {
                arity(1, 2)?;
                let e = eta(parts[0])?;
                let l1 = match parts.get(1) {
                    Some(v) => num(v, "l1")?,
                    None => minimal_l1(e)?,
                };
                Ok(YSpec::Prop3 { eta: e, l1 })
            }
            "prop1" => {
                arity(1, 2)?;
                let e = eta(parts[0])?;
                let schedule = match parts.get(1) {
                    Some(v) => v.split(',').map(|x| num(x, "schedule entry")).collect::<Result<_>>()?,
                    None => vec![8],
                };
                Ok(YSpec::Prop1 { eta: e, schedule })
            }
            "rational" => {
                arity(1, 1)?;
                let (p, q) = parts[0].split_once('/').ok_or_else(|| Error::parse("rational needs p/q"))?;
                Ok(YSpec::Rational { p: num(p, "numerator")?, q: num(q, "denominator")? })
            }
            "random" => {
                arity(1, 1)?;
                Ok(YSpec::Random { seed: num(parts[0], "seed")? })
            }
            "explicit" => {
                arity(1, 2)?;
                let check = |h: &str| {
                    if h.chars().all(|c| c.is_ascii_hexdigit()) {
                        Ok(h.to_ascii_lowercase())
                    } else {
                        Err(Error::parse(format!("bad hex digits: {h:?}")))
                    }
                };
                let (prefix_hex, period_hex) = (check(parts[0])?, check(parts.get(1).copied().unwrap_or(""))?);
                if prefix_hex.is_empty() && period_hex.is_empty() {
                    return Err(Error::parse("explicit needs at least one digit (use rational:0/1 for zero)"));
                }
                Ok(YSpec::Explicit { prefix_hex, period_hex })
            }
            "ae" => {
                arity(0, 0)?;
                Ok(YSpec::AlmostEvery)
            }
            _ => Err(Error::parse(format!("unknown y-spec kind {kind:?}"))),
        }
    }

    /// The digits of `y` in base `b`; `None` for [`YSpec::AlmostEvery`].
    pub fn stream(&self, base: u32) -> Result<Option<DigitStream>> {
        Ok(Some(match self {
            YSpec::Prop3 { eta, l1 } => build_y_prop3(*eta, *l1, base)?,
            YSpec::Prop1 { eta, schedule } => build_y_prop1(*eta, schedule, base)?,
            YSpec::Rational { p, q } => expand_rational(*p, *q, base)?,
            YSpec::Random { seed } => DigitStream::seeded(base, *seed)?,
            YSpec::Explicit { prefix_hex, period_hex } => DigitStream::explicit(
                base,
                decode_hex(base, prefix_hex)?,
                decode_hex(base, period_hex)?,
            )?,
            YSpec::AlmostEvery => return Ok(None),
        }))
    }
}

impl std::fmt::Display for YSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            YSpec::Prop3 { eta, l1 } => write!(f, "prop3:{eta}:{l1}"),
            YSpec::Prop1 { eta, schedule } => {
                let s: Vec<String> = schedule.iter().map(|l| l.to_string()).collect();
                write!(f, "prop1:{eta}:{}", s.join(","))
            }
            YSpec::Rational { p, q } => write!(f, "rational:{p}/{q}"),
            YSpec::Random { seed } => write!(f, "random:{seed}"),
            YSpec::Explicit { prefix_hex, period_hex } if period_hex.is_empty() => {
                write!(f, "explicit:{prefix_hex}")
            }
            YSpec::Explicit { prefix_hex, period_hex } => write!(f, "explicit:{prefix_hex}:{period_hex}"),
            YSpec::AlmostEvery => write!(f, "ae"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses() {
        assert_eq!(YSpec::parse("prop3:2:32").unwrap(), YSpec::Prop3 { eta: 2.0, l1: 32 });
        assert_eq!(YSpec::parse("prop3:1.5").unwrap(), YSpec::Prop3 { eta: 1.5, l1: 4 });
        assert_eq!(
            YSpec::parse("prop1:2:8,24").unwrap(),
            YSpec::Prop1 { eta: 2.0, schedule: vec![8, 24] }
        );
        assert_eq!(YSpec::parse("rational:1/3").unwrap(), YSpec::Rational { p: 1, q: 3 });
        assert_eq!(YSpec::parse("random:7").unwrap(), YSpec::Random { seed: 7 });
        assert_eq!(YSpec::parse("ae").unwrap(), YSpec::AlmostEvery);
        for bad in ["", "prop3", "prop3:x", "rational:1", "random:-1", "explicit:zz", "ae:1", "foo:1", "prop3:inf", "explicit::"] {
            assert!(YSpec::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn round_trips_through_display() {
        for s in ["prop3:2:32", "prop1:2:8,24", "rational:1/3", "random:9", "explicit:0a1:01", "ae"] {
            let y = YSpec::parse(s).unwrap();
            assert_eq!(YSpec::parse(&y.to_string()).unwrap(), y);
        }
    }

    #[test]
    fn streams() {
        let y = YSpec::parse("explicit:101").unwrap().stream(2).unwrap().unwrap();
        assert_eq!(y.prefix(5), vec![1, 0, 1, 0, 0]);
        assert!(YSpec::parse("explicit:3").unwrap().stream(2).is_err());
        assert!(YSpec::parse("rational:1/0").unwrap().stream(2).is_err());
        assert!(YSpec::AlmostEvery.stream(2).unwrap().is_none());
    }
}
