//! JSON forms of contests.
//!
//! A contest is an object with a `reward` and exactly one of
//!
//! * `"gamma": [g1, g2, ...]`, the gamma vector itself;
//! * `"tullock_tau": t`, a Tullock contest (`"inf"` for the all-pay auction);
//! * `"tau_by_k": {"k": t, ...}`, a Tullock contest whose parameter depends
//!   on the headcount, with `"default_tau"` covering unlisted headcounts.
//!
//! An optional `"name"` labels the contest in reports.

use std::collections::BTreeMap;
use std::fmt;

use ccg_core::{piecewise_tullock_gamma, tullock_gamma, GammaProfile, PiecewiseTullockSpec, Tau, TullockSpec};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Tullock parameter as it appears in JSON: a number or the string `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TauJson(pub Tau);

impl Serialize for TauJson {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Tau::Finite(t) => s.serialize_f64(t),
            Tau::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for TauJson {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct TauVisitor;

        impl Visitor<'_> for TauVisitor {
            type Value = TauJson;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a non-negative number or \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<TauJson, E> {
                Tau::finite(v).map(TauJson).map_err(E::custom)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<TauJson, E> {
                self.visit_f64(v as f64)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<TauJson, E> {
                self.visit_f64(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<TauJson, E> {
                match v {
                    "inf" => Ok(TauJson(Tau::Infinite)),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }

        d.deserialize_any(TauVisitor)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContestSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub reward: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tullock_tau: Option<TauJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_by_k: Option<BTreeMap<usize, TauJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default_tau: Option<TauJson>,
}

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("contest needs exactly one of gamma, tullock_tau, tau_by_k")]
    AmbiguousKind,
    #[error("default_tau is only meaningful with tau_by_k")]
    StrayDefault,
    #[error(transparent)]
    Core(#[from] ccg_core::Error),
}

impl ContestSpec {
    pub fn tullock(reward: f64, tau: Tau) -> Self {
        Self {
            name: None,
            reward,
            gamma: None,
            tullock_tau: Some(TauJson(tau)),
            tau_by_k: None,
            default_tau: None,
        }
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_owned());
        self
    }

    /// Gamma profile for headcounts `1..=n`. Explicit gamma vectors longer
    /// than `n` are truncated; shorter ones are rejected.
    pub fn to_profile(&self, n: usize) -> Result<GammaProfile, FormatError> {
        match (&self.gamma, &self.tullock_tau, &self.tau_by_k) {
            (Some(g), None, None) => {
                if self.default_tau.is_some() {
                    return Err(FormatError::StrayDefault);
                }
                Ok(GammaProfile::new(self.reward, g.clone())?.truncated(n)?)
            }
            (None, Some(tau), None) => {
                if self.default_tau.is_some() {
                    return Err(FormatError::StrayDefault);
                }
                Ok(tullock_gamma(&TullockSpec::new(self.reward, tau.0)?, n)?)
            }
            (None, None, Some(map)) => {
                let mut taus: BTreeMap<usize, Tau> = match self.default_tau {
                    Some(d) => (1..=n).map(|k| (k, d.0)).collect(),
                    None => BTreeMap::new(),
                };
                taus.extend(map.iter().map(|(&k, t)| (k, t.0)));
                Ok(piecewise_tullock_gamma(
                    &PiecewiseTullockSpec::new(self.reward, taus)?,
                    n,
                )?)
            }
            _ => Err(FormatError::AmbiguousKind),
        }
    }

    pub fn label(&self) -> Option<&str> {
        self.name.as_deref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> ContestSpec {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn tullock_forms() {
        let apa = parse(r#"{"reward": 1, "tullock_tau": "inf"}"#).to_profile(3).unwrap();
        assert_eq!(apa.values(), &[1.0, 0.0, 0.0]);
        let lottery = parse(r#"{"reward": 1, "tullock_tau": 1}"#).to_profile(2).unwrap();
        assert_eq!(lottery.values(), &[1.0, 0.25]);
    }

    #[test]
    fn headcount_dependent_form() {
        let c = parse(r#"{"reward": 1, "tau_by_k": {"5": 0, "6": 0}, "default_tau": "inf"}"#);
        let g = c.to_profile(6).unwrap();
        assert_eq!(g.values(), &[1.0, 0.0, 0.0, 0.0, 0.2, 1.0 / 6.0]);
        let partial = parse(r#"{"reward": 1, "tau_by_k": {"1": 0}}"#);
        assert!(partial.to_profile(2).is_err());
    }

    #[test]
    fn explicit_gamma_is_truncated() {
        let c = parse(r#"{"name": "C", "reward": 2, "gamma": [2, 0.5, 0.1]}"#);
        assert_eq!(c.to_profile(2).unwrap().values(), &[2.0, 0.5]);
        assert!(c.to_profile(4).is_err());
        assert_eq!(c.label(), Some("C"));
    }

    #[test]
    fn rejects_mixed_and_bad_forms() {
        assert!(parse(r#"{"reward": 1, "gamma": [1], "tullock_tau": 1}"#)
            .to_profile(1)
            .is_err());
        assert!(parse(r#"{"reward": 1}"#).to_profile(1).is_err());
        assert!(serde_json::from_str::<ContestSpec>(r#"{"reward": 1, "tullock_tau": "big"}"#).is_err());
        assert!(serde_json::from_str::<ContestSpec>(r#"{"reward": 1, "tullock_tau": -1}"#).is_err());
        assert!(serde_json::from_str::<ContestSpec>(r#"{"reward": 1, "tau": 1}"#).is_err());
    }

    #[test]
    fn infinite_tau_serializes_as_string() {
        let s = serde_json::to_string(&ContestSpec::tullock(1.0, Tau::Infinite)).unwrap();
        assert_eq!(s, r#"{"reward":1.0,"tullock_tau":"inf"}"#);
    }
}
