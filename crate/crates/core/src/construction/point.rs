use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{sample_cantor_point, verify_membership, CantorParams, Exponents, ForbiddenChoice, MembershipReport};
use crate::symbolic::{decode_hex, encode_hex, DigitStream};
use crate::yspec::YSpec;
use crate::{Error, Result, SCHEMA};

/// Everything needed to rebuild the construction a point was sampled from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointParams {
    /// Exponents as exact decimals.
    pub alpha1: String,
    pub alpha2: String,
    pub h1: String,
    pub h2: String,
    pub y_spec: String,
    pub base: u32,
    pub n0: u64,
    pub levels: usize,
    pub deterministic: bool,
}

impl PointParams {
    pub fn cantor_params(&self) -> Result<CantorParams> {
        if self.levels == 0 {
            return Err(Error::domain("levels must be positive"));
        }
        let e = Exponents::parse(&self.alpha1, &self.alpha2, &self.h1, &self.h2)?;
        let theta = YSpec::parse(&self.y_spec)?
            .stream(self.base)?
            .ok_or_else(|| Error::domain("the y-spec of a point file must carry digits"))?;
        CantorParams::new(e, theta, self.n0 as u128, self.levels, u128::MAX / 4)
    }
}

/// A sampled point: the digits the verifier needs plus the reports made when sampling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointFile {
    pub schema: String,
    pub params: PointParams,
    pub seed: u64,
    pub prefix_hex: String,
    pub reports: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointCheck {
    pub pass: bool,
    pub digits_needed: u128,
    pub digits_present: usize,
    /// The last stored report equals the recomputed one.
    pub stored_report_matches: bool,
    pub report: Option<MembershipReport>,
}

/// Digits the verifier reads for the first `levels` levels.
pub fn verification_depth(p: &CantorParams, levels: usize) -> u128 {
    let last = &p.levels[levels - 1];
    p.ns[levels] + last.m.max(last.m_prime) + 2
}

impl PointFile {
    /// Samples a point and verifies it; fails with a resource error beyond `budget` digits.
    pub fn sample(params: PointParams, seed: u64, budget: u64) -> Result<Self> {
        let p = Arc::new(params.cantor_params()?);
        let need = verification_depth(&p, params.levels);
        if need > budget as u128 {
            return Err(Error::Resource { what: format!("{need} digits to sample"), level: params.levels });
        }
        let choice = if params.deterministic { ForbiddenChoice::Successor } else { ForbiddenChoice::Random };
        let eps = sample_cantor_point(&p, seed, choice)?;
        let rep = verify_membership(&eps, &p, params.levels)?;
        Ok(PointFile {
            schema: SCHEMA.into(),
            prefix_hex: encode_hex(p.base, &eps.prefix(rep.depth as usize)),
            reports: vec![serde_json::to_value(&rep).expect("serializable")],
            params,
            seed,
        })
    }

    /// The first stored report passed.
    pub fn reported_pass(&self) -> bool {
        self.reports.first().and_then(|r| r.get("pass")).and_then(Value::as_bool) == Some(true)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let pf: PointFile = serde_json::from_str(s).map_err(|e| Error::parse(format!("point file: {e}")))?;
        if pf.schema != SCHEMA {
            return Err(Error::parse(format!("point file schema {:?}, expected {SCHEMA:?}", pf.schema)));
        }
        Ok(pf)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Recomputes the membership report from the stored digits.
    ///
    /// A prefix shorter than the verification depth fails without a report; more than
    /// `budget` digits is a resource error.
    pub fn check(&self, budget: u64) -> Result<PointCheck> {
        let p = self.params.cantor_params()?;
        let need = verification_depth(&p, self.params.levels);
        let digits = decode_hex(p.base, &self.prefix_hex)?;
        if need > budget as u128 || digits.len() as u128 > budget as u128 {
            return Err(Error::Resource { what: format!("{need} digits to verify"), level: self.params.levels });
        }
        let present = digits.len();
        if (present as u128) < need {
            return Ok(PointCheck {
                pass: false,
                digits_needed: need,
                digits_present: present,
                stored_report_matches: false,
                report: None,
            });
        }
        let rep = verify_membership(&DigitStream::explicit(p.base, digits, vec![])?, &p, self.params.levels)?;
        let stored_report_matches = self.reports.last() == Some(&serde_json::to_value(&rep).expect("serializable"));
        Ok(PointCheck {
            pass: rep.pass && stored_report_matches,
            digits_needed: need,
            digits_present: present,
            stored_report_matches,
            report: Some(rep),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> PointParams {
        PointParams {
            alpha1: "2".into(),
            alpha2: "3".into(),
            h1: "1".into(),
            h2: "1.5".into(),
            y_spec: "prop1:2".into(),
            base: 2,
            n0: 32,
            levels: 2,
            deterministic: false,
        }
    }

    #[test]
    fn round_trip() {
        let pf = PointFile::sample(params(), 4, 1 << 20).unwrap();
        assert!(pf.reported_pass());
        let back = PointFile::from_json_str(&pf.to_json_string()).unwrap();
        assert_eq!(back, pf);
        let c = back.check(1 << 20).unwrap();
        assert!(c.pass && c.stored_report_matches);
        assert!(matches!(back.check(10), Err(Error::Resource { .. })));
    }

    #[test]
    fn flipped_digit_fails() {
        let mut pf = PointFile::sample(params(), 4, 1 << 20).unwrap();
        // inside the zero run that follows n_0
        pf.prefix_hex.replace_range(40..41, "1");
        let c = pf.check(1 << 20).unwrap();
        assert!(!c.pass && !c.report.unwrap().pass);
        pf.prefix_hex.truncate(100);
        assert!(pf.check(1 << 20).unwrap().report.is_none());
    }

    #[test]
    fn rejects_malformed() {
        assert!(PointFile::from_json_str("{").is_err());
        let mut pf = PointFile::sample(params(), 1, 1 << 20).unwrap();
        pf.schema = "other".into();
        assert!(PointFile::from_json_str(&pf.to_json_string()).is_err());
        assert!(PointFile::sample(PointParams { levels: 0, ..params() }, 1, 1 << 20).is_err());
        assert!(PointFile::sample(PointParams { y_spec: "ae".into(), ..params() }, 1, 1 << 20).is_err());
    }
}
