//! Designer, contestant and social welfare of strategy profiles, and the
//! checks on when the all-MRD equilibrium maximises social welfare or
//! minimises contestant welfare.

use alloc::vec::Vec;

use crate::contest::{is_full_rent_dissipation, is_mdu, GammaProfile};
use crate::designer::{evaluate_profile, CcgInstance, ProfileTable, SelectionRule, StrategyProfile};
use crate::error::{Error, Result};
use crate::math::powi;

/// `(W_D, W_C, W_S)` for one contestant equilibrium.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WelfareTriple {
    pub designer: f64,
    pub contestant: f64,
    pub social: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WelfareReport {
    pub designer: f64,
    pub contestant: f64,
    pub social: f64,
    /// Upper bound on `W_S` over every participation vector of the game.
    pub holder_bound: f64,
    /// `R_i [1 - (1 - p_i)^n]` per contest.
    pub per_contest_reach: Vec<f64>,
}

/// Welfare of `profile` under the selected contestant equilibrium.
pub fn welfare_of(instance: &CcgInstance, profile: &StrategyProfile, rule: SelectionRule) -> Result<WelfareReport> {
    let outcome = evaluate_profile(instance, profile)?;
    let selected = outcome.selected(rule);
    let n = instance.n();
    let per_contest_reach = instance
        .rewards()
        .iter()
        .zip(selected.equilibrium.p.as_slice())
        .map(|(&r, &p)| r * (1.0 - powi(1.0 - p, n)))
        .collect();
    Ok(WelfareReport {
        designer: selected.welfare.designer,
        contestant: selected.welfare.contestant,
        social: selected.welfare.social,
        holder_bound: holder_bound(instance.rewards(), n)?,
        per_contest_reach,
    })
}

/// `sum R_i - (m-1)^n / (sum_i R_i^(-1/(n-1)))^(n-1)`: the largest social
/// welfare any participation vector can reach. For `n = 1` social welfare is
/// `sum R_i p_i`, whose exact maximum `max R_i` is returned instead.
pub fn holder_bound(rewards: &[f64], n: usize) -> Result<f64> {
    if rewards.is_empty() {
        return Err(Error::NoContests);
    }
    for &r in rewards {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidReward(r));
        }
    }
    match n {
        0 => Err(Error::InvalidHeadcount),
        1 => Ok(rewards.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
        _ => {
            let m1 = (rewards.len() - 1) as f64;
            let exponent = -1.0 / (n - 1) as f64;
            let weight: f64 = rewards.iter().map(|&r| libm::pow(r, exponent)).sum();
            let total: f64 = rewards.iter().sum();
            Ok(total - libm::pow(m1, n as f64) / libm::pow(weight, (n - 1) as f64))
        }
    }
}

/// The sufficient conditions under which the all-MRD/MDU profile maximises
/// social welfare. Unrestricted design spaces cannot be expressed with finite
/// sets, so only the remaining cases are detected.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WelfareCase {
    /// Every strategy set contains a full-rent-dissipation contest.
    FullRentDissipationAvailable,
    /// Equal rewards and identical strategy sets.
    Symmetric,
    /// Equal rewards and the MRD members of all sets share one gamma vector.
    MrdSymmetric,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WsVerdict {
    /// Every matching case, in order; empty when none applies.
    pub cases: Vec<WelfareCase>,
    /// The all-MRD/MDU profile, when every set has an MDU member of MRD.
    pub mrd_profile: Option<StrategyProfile>,
    pub mrd_social: Option<f64>,
    pub argmax_profile: StrategyProfile,
    pub max_social: f64,
    /// `W_S(mrd_profile) >= max W_S - tol`.
    pub holds: bool,
}

impl WsVerdict {
    pub fn first_case(&self) -> Option<WelfareCase> {
        self.cases.first().copied()
    }
}

fn equal_rewards(instance: &CcgInstance) -> bool {
    let r0 = instance.rewards()[0];
    instance
        .rewards()
        .iter()
        .all(|&r| (r - r0).abs() <= crate::contest::GAMMA_TOL * r0.max(1.0))
}

fn same_set(a: &[GammaProfile], b: &[GammaProfile]) -> bool {
    a.iter().all(|x| b.iter().any(|y| x.same_gamma(y))) && b.iter().all(|y| a.iter().any(|x| x.same_gamma(y)))
}

fn detect_cases(instance: &CcgInstance, mrd: &[Vec<usize>]) -> Vec<WelfareCase> {
    let sets = instance.strategy_sets();
    let mut cases = Vec::new();
    if sets.iter().all(|s| s.iter().any(is_full_rent_dissipation)) {
        cases.push(WelfareCase::FullRentDissipationAvailable);
    }
    if equal_rewards(instance) {
        if sets.iter().all(|s| same_set(s, &sets[0])) {
            cases.push(WelfareCase::Symmetric);
        }
        if mrd.iter().all(|m| !m.is_empty()) {
            let first = &sets[0][mrd[0][0]];
            if sets.iter().zip(mrd).all(|(s, m)| s[m[0]].same_gamma(first)) {
                cases.push(WelfareCase::MrdSymmetric);
            }
        }
    }
    cases
}

/// An MDU member of `MRD(S_i)` for each designer, if every set has one.
fn mrd_mdu_profile(instance: &CcgInstance, mrd: &[Vec<usize>]) -> Option<StrategyProfile> {
    mrd.iter()
        .zip(instance.strategy_sets())
        .map(|(m, set)| m.iter().copied().find(|&i| is_mdu(&set[i])))
        .collect::<Option<Vec<_>>>()
        .map(StrategyProfile::new)
}

/// Detects the applicable welfare case and checks that the all-MRD/MDU
/// profile attains the largest social welfare among all profiles.
pub fn check_ws_maximality(instance: &CcgInstance, rule: SelectionRule) -> Result<WsVerdict> {
    let table = ProfileTable::build(instance)?;
    let mrd = instance.mrd_sets();
    let cases = detect_cases(instance, &mrd);
    let social = |i: usize| table.get(i).selected(rule).welfare.social;
    let (argmax, max_social) =
        (0..table.len()).map(|i| (i, social(i))).fold(
            (0, f64::NEG_INFINITY),
            |best, cur| if cur.1 > best.1 { cur } else { best },
        );
    let mrd_profile = mrd_mdu_profile(instance, &mrd);
    let mrd_social = mrd_profile.as_ref().map(|p| social(instance.index_of(p)));
    let holds = mrd_social.map_or(false, |w| w >= max_social - instance.utility_tol());
    Ok(WsVerdict {
        cases,
        mrd_profile,
        mrd_social,
        argmax_profile: instance.profile_at(argmax),
        max_social,
        holds,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct WcVerdict {
    pub mrd_profile: StrategyProfile,
    pub mrd_contestant: f64,
    /// `min_C W_C(C) - W_C(mrd_profile)`; non-negative when minimality holds.
    pub margin: f64,
    /// The profile attaining the margin.
    pub worst_profile: StrategyProfile,
    pub holds: bool,
}

/// Checks that contestant welfare is smallest at the all-MRD/MDU profile.
pub fn check_wc_minimality(instance: &CcgInstance, rule: SelectionRule) -> Result<WcVerdict> {
    let mrd = instance.mrd_sets();
    if let Some(i) = mrd.iter().position(Vec::is_empty) {
        return Err(Error::EmptyMrd(i));
    }
    let mrd_profile = mrd_mdu_profile(instance, &mrd).ok_or_else(|| {
        let i = mrd
            .iter()
            .zip(instance.strategy_sets())
            .position(|(m, set)| !m.iter().any(|&j| is_mdu(&set[j])))
            .unwrap_or(0);
        Error::NotMdu(i)
    })?;
    let table = ProfileTable::build(instance)?;
    let contestant = |i: usize| table.get(i).selected(rule).welfare.contestant;
    let mrd_contestant = contestant(instance.index_of(&mrd_profile));
    let (worst, margin) = (0..table.len())
        .map(|i| (i, contestant(i) - mrd_contestant))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
    Ok(WcVerdict {
        mrd_profile,
        mrd_contestant,
        margin,
        worst_profile: instance.profile_at(worst),
        holds: margin >= -instance.utility_tol(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contest::{tullock_gamma, Tau, TullockSpec};
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    fn tullock(tau: f64, n: usize) -> GammaProfile {
        tullock_gamma(&TullockSpec::new(1.0, Tau::finite(tau).unwrap()).unwrap(), n).unwrap()
    }

    fn counterexample() -> CcgInstance {
        let c = tullock(1.0, 2);
        let t = tullock(1.2, 2);
        CcgInstance::new(2, vec![1.0, 1.0], vec![vec![c.clone()], vec![c, t]]).unwrap()
    }

    #[test]
    fn counterexample_values() {
        let game = counterexample();
        let rule = SelectionRule::default();
        let cc = welfare_of(&game, &StrategyProfile::new(vec![0, 0]), rule).unwrap();
        assert_abs_diff_eq!(cc.social, 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(cc.holder_bound, 1.5, epsilon = 1e-12);
        let ct = welfare_of(&game, &StrategyProfile::new(vec![0, 1]), rule).unwrap();
        assert_abs_diff_eq!(ct.social, 1441.0 / 961.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ct.designer + ct.contestant, ct.social, epsilon = 1e-12);

        let ws = check_ws_maximality(&game, rule).unwrap();
        assert!(ws.cases.is_empty());
        assert!(!ws.holds);
        assert_eq!(ws.mrd_profile, Some(StrategyProfile::new(vec![0, 1])));
        assert_eq!(ws.argmax_profile, StrategyProfile::new(vec![0, 0]));
        assert!(check_wc_minimality(&game, rule).unwrap().holds);
    }

    #[test]
    fn holder_bound_values() {
        for (m, n, r) in [(2usize, 2usize, 1.0), (3, 4, 2.5), (5, 7, 0.3)] {
            let rewards = vec![r; m];
            let expected = m as f64 * r - r * libm::pow((m - 1) as f64, n as f64) / libm::pow(m as f64, (n - 1) as f64);
            assert_abs_diff_eq!(holder_bound(&rewards, n).unwrap(), expected, epsilon = 1e-12);
        }
        assert_eq!(holder_bound(&[1.0, 3.0], 1).unwrap(), 3.0);
    }

    #[test]
    fn holder_bound_matches_grid_search() {
        // m = 2, R = (1, 1), n = 3: maximise 2 - p^3 - (1-p)^3 over a fine grid.
        let best = (0..=100_000)
            .map(|i| {
                let p = i as f64 / 100_000.0;
                2.0 - libm::pow(1.0 - p, 3.0) - libm::pow(p, 3.0)
            })
            .fold(f64::NEG_INFINITY, f64::max);
        assert_abs_diff_eq!(holder_bound(&[1.0, 1.0], 3).unwrap(), best, epsilon = 1e-9);
        assert_abs_diff_eq!(best, 1.75, epsilon = 1e-12);
    }

    #[test]
    fn all_pay_available_case_holds() {
        let n = 4;
        let apa1 = tullock_gamma(&TullockSpec::all_pay(1.0).unwrap(), n).unwrap();
        let apa2 = tullock_gamma(&TullockSpec::all_pay(2.0).unwrap(), n).unwrap();
        let t2 = tullock_gamma(&TullockSpec::new(2.0, Tau::Finite(0.5)).unwrap(), n).unwrap();
        let game = CcgInstance::new(n, vec![1.0, 2.0], vec![vec![tullock(0.3, n), apa1], vec![apa2, t2]]).unwrap();
        let ws = check_ws_maximality(&game, SelectionRule::default()).unwrap();
        assert_eq!(ws.first_case(), Some(WelfareCase::FullRentDissipationAvailable));
        assert!(ws.holds);
        assert_abs_diff_eq!(
            ws.mrd_social.unwrap(),
            holder_bound(&[1.0, 2.0], n).unwrap(),
            epsilon = 1e-9
        );
    }

    #[test]
    fn symmetric_case_detected() {
        let set = vec![tullock(0.2, 3), tullock(0.9, 3)];
        let game = CcgInstance::new(3, vec![1.0; 3], vec![set.clone(), set.clone(), set]).unwrap();
        let ws = check_ws_maximality(&game, SelectionRule::default()).unwrap();
        assert_eq!(ws.cases, vec![WelfareCase::Symmetric, WelfareCase::MrdSymmetric]);
        assert!(ws.holds);
    }
}
