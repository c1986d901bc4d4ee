//! Scenario files: a whole game in one JSON document.
//!
//! ```json
//! {
//!   "m": 2,
//!   "n": 6,
//!   "rewards": [1.0, 1.0],
//!   "strategy_sets": [[{"name": "APA", "reward": 1.0, "tullock_tau": "inf"}], ...],
//!   "risk": "quartic",
//!   "selection": "lowest_p1",
//!   "tolerances": {"utility": 1e-9}
//! }
//! ```
//!
//! `risk`, `selection` and `tolerances` are optional. The canonical form is
//! what [`Scenario::to_canonical_json`] prints; parsing it back and printing
//! again gives the same bytes.

use ccg_core::{CcgInstance, RiskProfile, SelectionRule, StrategyProfile};
use serde::{Deserialize, Serialize};

use crate::format::{ContestSpec, FormatError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RiskJson {
    Identity,
    Quartic,
    Poly(Vec<f64>),
}

impl RiskJson {
    pub fn to_profile(&self) -> Result<RiskProfile, ccg_core::Error> {
        match self {
            RiskJson::Identity => Ok(RiskProfile::Identity),
            RiskJson::Quartic => Ok(RiskProfile::Quartic),
            RiskJson::Poly(c) => RiskProfile::polynomial(c.clone()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionJson {
    LowestP1,
    HighestP1,
}

impl From<SelectionJson> for SelectionRule {
    fn from(s: SelectionJson) -> Self {
        match s {
            SelectionJson::LowestP1 => SelectionRule::LowestP1,
            SelectionJson::HighestP1 => SelectionRule::HighestP1,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesJson {
    /// Ties between designer utilities.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub utility: Option<f64>,
    /// Maximum number of profiles an exhaustive search may visit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enumeration_cap: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub m: usize,
    pub n: usize,
    pub rewards: Vec<f64>,
    pub strategy_sets: Vec<Vec<ContestSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub risk: Option<RiskJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selection: Option<SelectionJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<TolerancesJson>,
}

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("malformed scenario: {0}")]
    Json(#[from] serde_json::Error),
    #[error("m = {m} but {what} has {got} entries")]
    Count { m: usize, what: &'static str, got: usize },
    #[error("designer {designer}, contest {contest}: {source}")]
    Contest {
        designer: usize,
        contest: usize,
        source: FormatError,
    },
    #[error("designer {designer} has no contest named {name:?}")]
    UnknownContest { designer: usize, name: String },
    #[error("profile has {got} entries, expected {m}")]
    ProfileLength { m: usize, got: usize },
    #[error(transparent)]
    Core(#[from] ccg_core::Error),
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let scenario: Scenario = serde_json::from_str(text)?;
        scenario.check_counts()?;
        Ok(scenario)
    }

    pub fn to_canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scenario serializes");
        s.push('\n');
        s
    }

    fn check_counts(&self) -> Result<(), ScenarioError> {
        if self.rewards.len() != self.m {
            return Err(ScenarioError::Count {
                m: self.m,
                what: "rewards",
                got: self.rewards.len(),
            });
        }
        if self.strategy_sets.len() != self.m {
            return Err(ScenarioError::Count {
                m: self.m,
                what: "strategy_sets",
                got: self.strategy_sets.len(),
            });
        }
        Ok(())
    }

    pub fn selection(&self) -> SelectionRule {
        self.selection.map(Into::into).unwrap_or_default()
    }

    pub fn risk(&self) -> Result<RiskProfile, ScenarioError> {
        Ok(self
            .risk
            .as_ref()
            .map_or(Ok(RiskProfile::Identity), RiskJson::to_profile)?)
    }

    /// Builds the game; `utility_tol` overrides the file's tolerance when given.
    pub fn instance(&self, utility_tol: Option<f64>) -> Result<CcgInstance, ScenarioError> {
        self.check_counts()?;
        let sets = self
            .strategy_sets
            .iter()
            .enumerate()
            .map(|(designer, set)| {
                set.iter()
                    .enumerate()
                    .map(|(contest, spec)| {
                        spec.to_profile(self.n).map_err(|source| ScenarioError::Contest {
                            designer,
                            contest,
                            source,
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut inst = CcgInstance::new(self.n, self.rewards.clone(), sets)?;
        let tol = self.tolerances.clone().unwrap_or_default();
        if let Some(t) = utility_tol.or(tol.utility) {
            inst = inst.with_utility_tol(t);
        }
        if let Some(cap) = tol.enumeration_cap {
            inst = inst.with_cap(cap);
        }
        Ok(inst)
    }

    /// Name of contest `contest` in designer `designer`'s set, or its index.
    pub fn contest_label(&self, designer: usize, contest: usize) -> String {
        self.strategy_sets[designer][contest]
            .label()
            .map_or_else(|| contest.to_string(), str::to_owned)
    }

    pub fn profile_label(&self, profile: &StrategyProfile) -> String {
        let parts: Vec<String> = profile
            .as_slice()
            .iter()
            .enumerate()
            .map(|(d, &c)| self.contest_label(d, c))
            .collect();
        format!("({})", parts.join(","))
    }

    /// Parses `"1,0"` or `"C,APA"` (contest names or indices, one per designer).
    pub fn parse_profile(&self, text: &str) -> Result<StrategyProfile, ScenarioError> {
        let items: Vec<&str> = text
            .trim_matches(|c| c == '(' || c == ')')
            .split(',')
            .map(str::trim)
            .collect();
        if items.len() != self.m {
            return Err(ScenarioError::ProfileLength {
                m: self.m,
                got: items.len(),
            });
        }
        let choice = items
            .iter()
            .enumerate()
            .map(|(designer, item)| {
                let set = &self.strategy_sets[designer];
                if let Some(pos) = set.iter().position(|c| c.label() == Some(item)) {
                    return Ok(pos);
                }
                match item.parse::<usize>() {
                    Ok(i) if i < set.len() => Ok(i),
                    _ => Err(ScenarioError::UnknownContest {
                        designer,
                        name: (*item).to_owned(),
                    }),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(StrategyProfile::new(choice))
    }
}
