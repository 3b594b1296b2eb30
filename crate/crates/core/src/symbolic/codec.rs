use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::stream::{check_base, DigitStream, Rule};
use crate::{Error, Result};

/// Hex form of a digit prefix: one character per digit for `b <= 16`, two otherwise.
pub fn encode_hex(base: u32, digits: &[u8]) -> String {
    let mut s = String::with_capacity(digits.len() * 2);
    for &d in digits {
        if base <= 16 {
            s.push(char::from_digit(d as u32, 16).unwrap());
        } else {
            s.push_str(&format!("{d:02x}"));
        }
    }
    s
}

pub fn decode_hex(base: u32, s: &str) -> Result<Vec<u8>> {
    let b = check_base(base)?;
    let chars: Vec<u32> = s
        .chars()
        .map(|c| c.to_digit(16).ok_or_else(|| Error::parse(format!("bad hex character {c:?}"))))
        .collect::<Result<_>>()?;
    let digits: Vec<u8> = if base <= 16 {
        chars.iter().map(|&c| c as u8).collect()
    } else {
        if chars.len() % 2 != 0 {
            return Err(Error::parse("odd hex length for a base above 16"));
        }
        chars.chunks(2).map(|p| (p[0] * 16 + p[1]) as u8).collect()
    };
    if let Some(d) = digits.iter().find(|&&d| d >= b) {
        return Err(Error::parse(format!("digit {d} out of range for base {base}")));
    }
    Ok(digits)
}

/// Wire form of a digit stream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StreamJson {
    pub base: u32,
    pub kind: String,
    pub params: Value,
    pub prefix_hex: String,
}

impl StreamJson {
    /// Describes `s` together with its first `n` digits.
    ///
    /// Shifts and custom rules are written as `explicit` with the prefix only.
    pub fn from_stream(s: &DigitStream, n: usize) -> Self {
        let base = s.base();
        let prefix_hex = encode_hex(base, &s.prefix(n));
        let (kind, params) = match s.rule() {
            Rule::Rational { p, q } => ("rational", json!({ "p": p, "q": q })),
            Rule::Prop3 { eta, l1 } => ("prop3", json!({ "eta": eta, "l1": l1 })),
            Rule::Prop1 { eta, schedule } => ("prop1", json!({ "eta": eta, "schedule": &**schedule })),
            Rule::Explicit { period, .. } => {
                ("explicit", json!({ "period_hex": encode_hex(base, period) }))
            }
            Rule::SeededRandom { seed } => ("seeded-random", json!({ "seed": seed })),
            Rule::Shift { .. } | Rule::Custom(_) => ("explicit", json!({ "period_hex": "" })),
        };
        StreamJson { base, kind: kind.into(), params, prefix_hex }
    }

    /// Rebuilds the stream and checks the stored prefix against it.
    pub fn to_stream(&self) -> Result<DigitStream> {
        let base = self.base;
        let prefix = decode_hex(base, &self.prefix_hex)?;
        let p = &self.params;
        let field_u64 = |k: &str| {
            p.get(k).and_then(Value::as_u64).ok_or_else(|| Error::parse(format!("missing {k}")))
        };
        let field_f64 = |k: &str| {
            p.get(k).and_then(Value::as_f64).ok_or_else(|| Error::parse(format!("missing {k}")))
        };
        let s = match self.kind.as_str() {
            "rational" => {
                let (pp, q) = (field_u64("p")?, field_u64("q")?);
                if q == 0 || pp >= q {
                    return Err(Error::parse("rational needs 0 <= p < q"));
                }
                let (pp, q) = (pp as i64, q as i64);
                if pp < 0 || q < 0 {
                    return Err(Error::parse("rational out of range"));
                }
                super::expand_rational(pp, q, base)?
            }
            "prop3" => crate::construction::build_y_prop3(field_f64("eta")?, field_u64("l1")?, base)?,
            "prop1" => {
                let sched: Vec<u64> = p
                    .get("schedule")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::parse("missing schedule"))?
                    .iter()
                    .map(|v| v.as_u64().ok_or_else(|| Error::parse("bad schedule entry")))
                    .collect::<Result<_>>()?;
                crate::construction::build_y_prop1(field_f64("eta")?, &sched, base)?
            }
            "explicit" => {
                let per = p
                    .get("period_hex")
                    .and_then(Value::as_str)
                    .ok_or_else(|| Error::parse("missing period_hex"))?;
                let period = decode_hex(base, per)?;
                return DigitStream::new(
                    base,
                    Rule::Explicit { prefix: Arc::new(prefix), period: Arc::new(period) },
                );
            }
            "seeded-random" => DigitStream::seeded(base, field_u64("seed")?)?,
            other => return Err(Error::parse(format!("unknown stream kind {other:?}"))),
        };
        if s.prefix(prefix.len()) != prefix {
            return Err(Error::parse("prefix_hex does not match the stream rule"));
        }
        Ok(s)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::parse(e.to_string()))
    }
}
