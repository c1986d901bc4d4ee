//! Contests represented by their symmetric-equilibrium utility vectors.
//!
//! A contest with reward `R` is summarised by `gamma(k)`, the expected
//! utility of each participant when exactly `k` contestants take part. Every
//! downstream computation consumes only this vector; the Tullock family is the
//! one parametric family with a closed-form constructor.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Absolute tolerance used by the pointwise comparisons in this module.
pub const GAMMA_TOL: f64 = 1e-12;

/// Tullock discriminatory power. `Infinite` is the all-pay auction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Tau {
    Finite(f64),
    Infinite,
}

impl Tau {
    pub fn finite(value: f64) -> Result<Self> {
        if value.is_nan() || value < 0.0 {
            return Err(Error::InvalidTau(value));
        }
        if value.is_infinite() {
            return Ok(Tau::Infinite);
        }
        Ok(Tau::Finite(value))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Tau::Infinite)
    }

    /// The value as an `f64`, with `f64::INFINITY` for the all-pay auction.
    pub fn as_f64(self) -> f64 {
        match self {
            Tau::Finite(t) => t,
            Tau::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Tau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tau::Finite(t) => write!(f, "{t}"),
            Tau::Infinite => f.write_str("inf"),
        }
    }
}

/// A Tullock contest: success probability `e_i^tau / sum_j e_j^tau`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TullockSpec {
    pub reward: f64,
    pub tau: Tau,
}

impl TullockSpec {
    pub fn new(reward: f64, tau: Tau) -> Result<Self> {
        check_reward(reward)?;
        if let Tau::Finite(t) = tau {
            Tau::finite(t)?;
        }
        Ok(Self { reward, tau })
    }

    /// The all-pay auction with the given reward.
    pub fn all_pay(reward: f64) -> Result<Self> {
        Self::new(reward, Tau::Infinite)
    }

    /// `gamma(k)` for a single headcount.
    pub fn gamma_at(&self, k: usize) -> f64 {
        tullock_value(self.reward, self.tau, k)
    }
}

/// A contest that runs a Tullock contest whose parameter depends on the
/// realised headcount.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseTullockSpec {
    pub reward: f64,
    pub tau_by_headcount: BTreeMap<usize, Tau>,
}

impl PiecewiseTullockSpec {
    pub fn new(reward: f64, tau_by_headcount: BTreeMap<usize, Tau>) -> Result<Self> {
        check_reward(reward)?;
        for tau in tau_by_headcount.values() {
            if let Tau::Finite(t) = tau {
                Tau::finite(*t)?;
            }
        }
        Ok(Self {
            reward,
            tau_by_headcount,
        })
    }

    /// Uses `default` for every headcount in `1..=n` and `tau` for the listed ones.
    pub fn with_default(
        reward: f64,
        n: usize,
        default: Tau,
        overrides: impl IntoIterator<Item = (usize, Tau)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<usize, Tau> = (1..=n).map(|k| (k, default)).collect();
        map.extend(overrides);
        Self::new(reward, map)
    }
}

/// Symmetric-equilibrium contestant utilities `gamma(1..=n_max)` of one contest.
///
/// Invariants: `gamma(1) = reward` and `0 <= gamma(k) <= reward / k`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaProfile {
    reward: f64,
    gamma: Vec<f64>,
}

impl GammaProfile {
    /// Validates and builds a profile; `gamma[0]` is `gamma(1)`.
    ///
    /// Values within [`GAMMA_TOL`] of the admissible range are snapped into it.
    pub fn new(reward: f64, mut gamma: Vec<f64>) -> Result<Self> {
        check_reward(reward)?;
        if gamma.is_empty() {
            return Err(Error::EmptyGamma);
        }
        let tol = GAMMA_TOL * reward.max(1.0);
        if (gamma[0] - reward).abs() > tol {
            return Err(Error::GammaOneNotReward {
                gamma1: gamma[0],
                reward,
            });
        }
        gamma[0] = reward;
        for (i, g) in gamma.iter_mut().enumerate().skip(1) {
            let k = i + 1;
            let cap = reward / k as f64;
            if !g.is_finite() || *g < -tol || *g > cap + tol {
                return Err(Error::GammaOutOfRange { k, value: *g });
            }
            *g = g.clamp(0.0, cap);
        }
        Ok(Self { reward, gamma })
    }

    pub fn reward(&self) -> f64 {
        self.reward
    }

    /// Largest headcount the profile covers.
    pub fn n_max(&self) -> usize {
        self.gamma.len()
    }

    /// `gamma(k)` for `1 <= k <= n_max`.
    ///
    /// # Panics
    /// If `k` is outside `1..=n_max`.
    pub fn gamma(&self, k: usize) -> f64 {
        assert!(
            k >= 1 && k <= self.gamma.len(),
            "headcount {k} outside 1..={}",
            self.gamma.len()
        );
        self.gamma[k - 1]
    }

    /// The whole vector, `values()[k - 1] = gamma(k)`.
    pub fn values(&self) -> &[f64] {
        &self.gamma
    }

    /// The profile restricted to headcounts `1..=n`. Shorter profiles are rejected.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidHeadcount);
        }
        if n > self.gamma.len() {
            return Err(Error::ProfileTooShort {
                available: self.gamma.len(),
                required: n,
            });
        }
        Ok(Self {
            reward: self.reward,
            gamma: self.gamma[..n].to_vec(),
        })
    }

    /// Pointwise equality within [`GAMMA_TOL`].
    pub fn same_gamma(&self, other: &Self) -> bool {
        self.gamma.len() == other.gamma.len()
            && self
                .gamma
                .iter()
                .zip(&other.gamma)
                .all(|(a, b)| (a - b).abs() <= GAMMA_TOL)
    }

    /// `gamma_self(k) <= gamma_other(k)` for every `k`, within [`GAMMA_TOL`].
    pub fn pointwise_le(&self, other: &Self) -> bool {
        self.gamma.iter().zip(&other.gamma).all(|(a, b)| *a <= *b + GAMMA_TOL)
    }
}

fn check_reward(reward: f64) -> Result<()> {
    if reward.is_finite() && reward > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidReward(reward))
    }
}

fn tullock_value(reward: f64, tau: Tau, k: usize) -> f64 {
    if k <= 1 {
        return reward;
    }
    let t = match tau {
        Tau::Infinite => return 0.0,
        Tau::Finite(t) => t,
    };
    let kf = k as f64;
    // Pure symmetric equilibrium exists iff k/(k-1) > tau; otherwise the rent is fully dissipated.
    if kf / (kf - 1.0) > t {
        (reward * (1.0 / kf - (kf - 1.0) / (kf * kf) * t)).max(0.0)
    } else {
        0.0
    }
}

/// Gamma profile of a Tullock contest for headcounts `1..=n`.
pub fn tullock_gamma(spec: &TullockSpec, n: usize) -> Result<GammaProfile> {
    if n == 0 {
        return Err(Error::InvalidHeadcount);
    }
    check_reward(spec.reward)?;
    let gamma = (1..=n).map(|k| spec.gamma_at(k)).collect();
    GammaProfile::new(spec.reward, gamma)
}

/// Gamma profile of a contest that runs Tullock(`tau_k`) when `k` contestants show up.
pub fn piecewise_tullock_gamma(spec: &PiecewiseTullockSpec, n: usize) -> Result<GammaProfile> {
    if n == 0 {
        return Err(Error::InvalidHeadcount);
    }
    check_reward(spec.reward)?;
    let gamma = (1..=n)
        .map(|k| {
            spec.tau_by_headcount
                .get(&k)
                .map(|&tau| tullock_value(spec.reward, tau, k))
                .ok_or(Error::MissingTau(k))
        })
        .collect::<Result<Vec<_>>>()?;
    GammaProfile::new(spec.reward, gamma)
}

/// Monotonically decreasing utility: `gamma(1) >= gamma(2) >= ... >= gamma(n_max)`.
pub fn is_mdu(c: &GammaProfile) -> bool {
    c.gamma.windows(2).all(|w| w[1] <= w[0] + GAMMA_TOL)
}

/// `gamma(1) = R` and `gamma(k) = 0` for every `k >= 2`.
pub fn is_full_rent_dissipation(c: &GammaProfile) -> bool {
    (c.gamma[0] - c.reward).abs() <= GAMMA_TOL && c.gamma[1..].iter().all(|g| g.abs() <= GAMMA_TOL)
}

/// Indices of the members that are pointwise minimal in gamma over the whole set.
///
/// The result is empty when no single member lies below all others.
pub fn mrd_subset(strategy_set: &[GammaProfile]) -> Result<Vec<usize>> {
    let Some(first) = strategy_set.first() else {
        return Ok(Vec::new());
    };
    let consistent = strategy_set
        .iter()
        .all(|c| c.n_max() == first.n_max() && (c.reward - first.reward).abs() <= GAMMA_TOL * first.reward.max(1.0));
    if !consistent {
        return Err(Error::MismatchedProfiles);
    }
    Ok((0..strategy_set.len())
        .filter(|&i| strategy_set.iter().all(|other| strategy_set[i].pointwise_le(other)))
        .collect())
}

/// Expected total effort `R - k * gamma(k)` with `k` participants; this is the
/// designer's payoff for a realised headcount `k >= 1`.
pub fn expected_total_effort(c: &GammaProfile, k: usize) -> Result<f64> {
    if k == 0 || k > c.n_max() {
        return Err(Error::HeadcountOutOfRange { k, n_max: c.n_max() });
    }
    Ok((c.reward - k as f64 * c.gamma(k)).clamp(0.0, c.reward))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    fn tullock(tau: f64, n: usize) -> GammaProfile {
        tullock_gamma(&TullockSpec::new(1.0, Tau::finite(tau).unwrap()).unwrap(), n).unwrap()
    }

    fn apa(n: usize) -> GammaProfile {
        tullock_gamma(&TullockSpec::all_pay(1.0).unwrap(), n).unwrap()
    }

    #[test]
    fn tullock_closed_form_values() {
        assert_eq!(tullock(1.0, 2).values(), &[1.0, 0.25]);
        assert_abs_diff_eq!(tullock(1.2, 2).gamma(2), 0.2, epsilon = 1e-15);
        let g = tullock(1.0, 10);
        for k in 7..=10 {
            assert_abs_diff_eq!(g.gamma(k), 1.0 / (k * k) as f64, epsilon = 1e-15);
        }
        let split = tullock(0.0, 5);
        for k in 1..=5 {
            assert_abs_diff_eq!(split.gamma(k), 1.0 / k as f64, epsilon = 1e-15);
        }
        assert_eq!(apa(4).values(), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn tullock_rejects_bad_input() {
        let spec = TullockSpec::new(1.0, Tau::Finite(1.0)).unwrap();
        assert_eq!(tullock_gamma(&spec, 0), Err(Error::InvalidHeadcount));
        assert_eq!(TullockSpec::new(0.0, Tau::Infinite), Err(Error::InvalidReward(0.0)));
        assert_eq!(TullockSpec::new(1.0, Tau::Finite(-0.5)), Err(Error::InvalidTau(-0.5)));
    }

    #[test]
    fn piecewise_examples() {
        let free_at_5_6 =
            PiecewiseTullockSpec::with_default(1.0, 6, Tau::Infinite, [(5, Tau::Finite(0.0)), (6, Tau::Finite(0.0))])
                .unwrap();
        let g = piecewise_tullock_gamma(&free_at_5_6, 6).unwrap();
        assert_abs_diff_eq!(g.values(), &[1.0, 0.0, 0.0, 0.0, 0.2, 1.0 / 6.0][..], epsilon = 1e-15);
        assert!(!is_mdu(&g));

        let late_tau_one =
            PiecewiseTullockSpec::with_default(1.0, 10, Tau::Infinite, (7..=10).map(|k| (k, Tau::Finite(1.0))))
                .unwrap();
        let g = piecewise_tullock_gamma(&late_tau_one, 10).unwrap();
        let expected = [
            1.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            1.0 / 49.0,
            1.0 / 64.0,
            1.0 / 81.0,
            1.0 / 100.0,
        ];
        assert_abs_diff_eq!(g.values(), &expected[..], epsilon = 1e-15);

        let all_pay = PiecewiseTullockSpec::with_default(1.0, 3, Tau::Infinite, []).unwrap();
        assert_eq!(piecewise_tullock_gamma(&all_pay, 3).unwrap().values(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn piecewise_missing_entry() {
        let spec = PiecewiseTullockSpec::new(1.0, [(1, Tau::Infinite)].into_iter().collect()).unwrap();
        assert_eq!(piecewise_tullock_gamma(&spec, 2), Err(Error::MissingTau(2)));
    }

    #[test]
    fn classification() {
        assert!(is_mdu(&GammaProfile::new(3.0, vec![3.0, 1.5, 1.0]).unwrap()));
        assert!(is_full_rent_dissipation(&apa(6)));
        assert!(is_full_rent_dissipation(&tullock(2.0, 6)));
        assert!(!is_full_rent_dissipation(&tullock(1.0, 2)));
    }

    #[test]
    fn mrd_examples() {
        let taus = [0.0, 0.5, 1.0, 1.5, 2.0];
        let mut set: Vec<_> = taus.iter().map(|&t| tullock(t, 6)).collect();
        set.push(apa(6));
        assert_eq!(mrd_subset(&set).unwrap(), vec![4, 5]);

        let set: Vec<_> = [0.0, 0.5, 1.0].iter().map(|&t| tullock(t, 6)).collect();
        assert_eq!(mrd_subset(&set).unwrap(), vec![2]);

        let a = GammaProfile::new(1.0, vec![1.0, 0.0, 0.3]).unwrap();
        let b = GammaProfile::new(1.0, vec![1.0, 0.3, 0.0]).unwrap();
        assert!(mrd_subset(&[a, b]).unwrap().is_empty());
    }

    #[test]
    fn mrd_rejects_mixed_sets() {
        let a = apa(3);
        let b = apa(4);
        assert_eq!(mrd_subset(&[a, b]), Err(Error::MismatchedProfiles));
    }

    #[test]
    fn total_effort() {
        assert_eq!(expected_total_effort(&apa(5), 5).unwrap(), 1.0);
        assert_abs_diff_eq!(
            expected_total_effort(&tullock(1.5, 3), 2).unwrap(),
            0.75,
            epsilon = 1e-15
        );
        assert_eq!(expected_total_effort(&tullock(0.7, 3), 1).unwrap(), 0.0);
        assert!(expected_total_effort(&apa(3), 4).is_err());
        assert!(expected_total_effort(&apa(3), 0).is_err());
    }

    #[test]
    fn profile_validation() {
        assert!(matches!(
            GammaProfile::new(1.0, vec![0.9, 0.1]),
            Err(Error::GammaOneNotReward { .. })
        ));
        assert!(matches!(
            GammaProfile::new(1.0, vec![1.0, 0.6]),
            Err(Error::GammaOutOfRange { k: 2, .. })
        ));
        assert!(matches!(
            GammaProfile::new(1.0, vec![1.0, -0.1]),
            Err(Error::GammaOutOfRange { k: 2, .. })
        ));
        let p = apa(5);
        assert_eq!(p.truncated(3).unwrap().n_max(), 3);
        assert!(matches!(p.truncated(6), Err(Error::ProfileTooShort { .. })));
    }

    #[test]
    fn tau_display() {
        assert_eq!(alloc::format!("{}", Tau::Infinite), "inf");
        assert_eq!(Tau::finite(f64::INFINITY).unwrap(), Tau::Infinite);
    }
}
