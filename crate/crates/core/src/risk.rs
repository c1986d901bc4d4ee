//! Risk-averse contestants.
//!
//! Effort-stage equilibria of Tullock contests with `tau <= 2` are pure, so
//! efforts (and hence gamma) do not change when contestants become risk
//! averse; only the participation utility is transformed:
//! `beta_averse(C, p) = E[a(gamma(k + 1))]`, `k ~ Bin(n - 1, p)`.
//! Designers stay risk neutral. Transforms act on `[0, 1]`, so rewards must be 1.

use alloc::vec::Vec;

use crate::contest::{tullock_gamma, GammaProfile, Tau, TullockSpec};
use crate::designer::designer_utility_unchecked;
use crate::error::{Error, Result};
use crate::participation::{
    check_headcount, check_probability, expect_over_others, scan_two_contests, BetaPoly, ParticipationEquilibrium,
    ScanConfig,
};

const UNIT_TOL: f64 = 1e-12;

/// Utility transform `a: [0, 1] -> [0, 1]` with `a(0) = 0`, `a(1) = 1`, strictly increasing.
#[derive(Clone, Debug, PartialEq)]
pub enum RiskProfile {
    Identity,
    /// `a(x) = 1 - (1 - x)^4`.
    Quartic,
    /// `a(x) = sum_i coeffs[i] x^i`.
    Polynomial(Vec<f64>),
}

impl RiskProfile {
    pub fn polynomial(coeffs: Vec<f64>) -> Result<Self> {
        let risk = RiskProfile::Polynomial(coeffs);
        risk.validate()?;
        Ok(risk)
    }

    pub fn apply(&self, x: f64) -> f64 {
        match self {
            RiskProfile::Identity => x,
            RiskProfile::Quartic => {
                let y = 1.0 - x;
                1.0 - y * y * y * y
            }
            RiskProfile::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci),
        }
    }

    /// Checks the endpoint conditions and strict monotonicity on a 1001-point grid.
    pub fn validate(&self) -> Result<()> {
        if let RiskProfile::Polynomial(c) = self {
            if c.is_empty() || c.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidRiskProfile("coefficients must be finite and non-empty"));
            }
        }
        if self.apply(0.0).abs() > UNIT_TOL {
            return Err(Error::InvalidRiskProfile("a(0) must be 0"));
        }
        if (self.apply(1.0) - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidRiskProfile("a(1) must be 1"));
        }
        let mut prev = self.apply(0.0);
        for i in 1..=1000 {
            let next = self.apply(i as f64 / 1000.0);
            if next <= prev {
                return Err(Error::InvalidRiskProfile("a must be strictly increasing on [0, 1]"));
            }
            prev = next;
        }
        Ok(())
    }
}

fn check_unit_reward(c: &GammaProfile) -> Result<()> {
    if (c.reward() - 1.0).abs() > UNIT_TOL {
        Err(Error::RiskRequiresUnitReward(c.reward()))
    } else {
        Ok(())
    }
}

/// Participation utility of a risk-averse contestant.
pub fn beta_averse(c: &GammaProfile, p: f64, n: usize, risk: &RiskProfile) -> Result<f64> {
    check_probability(p)?;
    check_headcount(c, n)?;
    check_unit_reward(c)?;
    Ok(expect_over_others(c, p, n, |g| risk.apply(g)))
}

/// All symmetric participation equilibria of two contests with risk-averse
/// contestants; residuals are measured in `beta_averse` terms.
pub fn solve_two_contest_risk_averse(
    c1: &GammaProfile,
    c2: &GammaProfile,
    n: usize,
    risk: &RiskProfile,
) -> Result<Vec<ParticipationEquilibrium>> {
    risk.validate()?;
    for c in [c1, c2] {
        check_headcount(c, n)?;
        check_unit_reward(c)?;
    }
    let b1 = BetaPoly::transformed(c1, n, |g| risk.apply(g));
    let b2 = BetaPoly::transformed(c2, n, |g| risk.apply(g));
    scan_two_contests(|p| b1.value(p), |p| b2.value(p), n, &ScanConfig::default())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RiskPoint {
    pub tau: f64,
    pub p1: f64,
    pub utility: f64,
}

/// Designer 1's utility for every Tullock parameter on a grid, against a fixed opponent.
#[derive(Clone, Debug, PartialEq)]
pub struct RiskScan {
    /// One point per grid value, in grid order.
    pub curve: Vec<RiskPoint>,
    pub best_tau: f64,
    pub best_utility: f64,
}

/// Scans designer 1's Tullock parameter over `taus` (all in `[0, 2]`) against
/// an opponent playing Tullock(`opponent_tau`), unit rewards. When contestants
/// have several equilibria the one with the lowest `p_1` is used.
pub fn risk_averse_best_response_scan(
    taus: &[f64],
    opponent_tau: f64,
    n: usize,
    risk: &RiskProfile,
) -> Result<RiskScan> {
    risk.validate()?;
    let opponent = tullock_in_range(opponent_tau, n)?;
    let mut curve = Vec::with_capacity(taus.len());
    for &tau in taus {
        let mine = tullock_in_range(tau, n)?;
        let eqs = solve_two_contest_risk_averse(&mine, &opponent, n, risk)?;
        let p1 = eqs[0].p[0];
        curve.push(RiskPoint {
            tau,
            p1,
            utility: designer_utility_unchecked(&mine, p1, n),
        });
    }
    let (best_tau, best_utility) = curve.iter().fold((f64::NAN, f64::NEG_INFINITY), |best, pt| {
        if pt.utility > best.1 {
            (pt.tau, pt.utility)
        } else {
            best
        }
    });
    Ok(RiskScan {
        curve,
        best_tau,
        best_utility,
    })
}

fn tullock_in_range(tau: f64, n: usize) -> Result<GammaProfile> {
    if !(0.0..=2.0).contains(&tau) {
        return Err(Error::TauOutsideRiskRange(tau));
    }
    tullock_gamma(&TullockSpec::new(1.0, Tau::Finite(tau))?, n)
}

/// `lo, lo + step, ...` up to and including `hi` (within rounding).
pub fn tau_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    if !(step > 0.0) || hi < lo {
        return Vec::new();
    }
    let count = libm::floor((hi - lo) / step + 1e-9) as usize;
    (0..=count).map(|i| (lo + i as f64 * step).min(hi)).collect()
}
