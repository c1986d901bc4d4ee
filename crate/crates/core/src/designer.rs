//! The designers' game: utilities, best responses, equilibria, dominance and
//! Pareto optimality over finite strategy sets.
//!
//! Designers play pure strategies. A strategy profile fixes one contest per
//! designer; contestants answer with a symmetric participation equilibrium
//! (unique when every chosen contest is MDU, possibly several for two non-MDU
//! contests). When several exist, a [`SelectionRule`] picks the one designers
//! anticipate, and every per-profile result also lists all of them.

use alloc::vec::Vec;

use crate::contest::{is_mdu, mrd_subset, GammaProfile, GAMMA_TOL};
use crate::error::{Error, Result};
use crate::math::{binomial_pmf, powi};
use crate::participation::{
    beta_unchecked, check_headcount, check_probability, solve_symmetric_equilibrium_mdu, solve_two_contest_general,
    ParticipationEquilibrium,
};
use crate::sweep::map_indices;
use crate::welfare::WelfareTriple;
use crate::DEFAULT_ENUMERATION_CAP;

/// Default tolerance for utility ties in best-response comparisons.
pub const UTILITY_TOL: f64 = 1e-9;

/// Designer `i`'s expected utility when each contestant joins `c` with probability `p`:
/// `R [1 - (1-p)^n] - n p beta(c, p)`.
pub fn designer_utility(c: &GammaProfile, p: f64, n: usize) -> Result<f64> {
    check_probability(p)?;
    check_headcount(c, n)?;
    Ok(designer_utility_unchecked(c, p, n))
}

pub(crate) fn designer_utility_unchecked(c: &GammaProfile, p: f64, n: usize) -> f64 {
    let reach = c.reward() * (1.0 - powi(1.0 - p, n));
    (reach - n as f64 * p * beta_unchecked(c, p, n)).clamp(0.0, c.reward())
}

/// The same quantity computed as `E[(R - k gamma(k)) 1[k >= 1]]` with `k ~ Bin(n, p)`.
pub fn designer_utility_direct(c: &GammaProfile, p: f64, n: usize) -> Result<f64> {
    check_probability(p)?;
    check_headcount(c, n)?;
    let pmf = binomial_pmf(n, p);
    Ok((1..=n).map(|k| pmf[k] * (c.reward() - k as f64 * c.gamma(k))).sum())
}

/// Which contestant equilibrium designers anticipate when several exist.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SelectionRule {
    /// The equilibrium with the smallest participation in contest 1.
    #[default]
    LowestP1,
    /// The equilibrium with the largest participation in contest 1.
    HighestP1,
}

/// A complete-information contest competition game with finite strategy sets.
#[derive(Clone, Debug, PartialEq)]
pub struct CcgInstance {
    n: usize,
    rewards: Vec<f64>,
    strategy_sets: Vec<Vec<GammaProfile>>,
    utility_tol: f64,
    cap: usize,
}

impl CcgInstance {
    /// Validates the game. Profiles longer than `n` are truncated to `n`.
    pub fn new(n: usize, rewards: Vec<f64>, strategy_sets: Vec<Vec<GammaProfile>>) -> Result<Self> {
        let m = rewards.len();
        if m < 2 {
            return Err(Error::TooFewDesigners(m));
        }
        if n == 0 {
            return Err(Error::InvalidHeadcount);
        }
        if strategy_sets.len() != m {
            return Err(Error::LengthMismatch {
                expected: m,
                got: strategy_sets.len(),
            });
        }
        let mut sets = Vec::with_capacity(m);
        for (designer, (set, &reward)) in strategy_sets.iter().zip(&rewards).enumerate() {
            if !(reward.is_finite() && reward > 0.0) {
                return Err(Error::InvalidReward(reward));
            }
            if set.is_empty() {
                return Err(Error::EmptyStrategySet(designer));
            }
            let mut truncated = Vec::with_capacity(set.len());
            for c in set {
                if (c.reward() - reward).abs() > GAMMA_TOL * reward.max(1.0) {
                    return Err(Error::RewardMismatch {
                        designer,
                        profile: c.reward(),
                        reward,
                    });
                }
                truncated.push(c.truncated(n)?);
            }
            sets.push(truncated);
        }
        Ok(Self {
            n,
            rewards,
            strategy_sets: sets,
            utility_tol: UTILITY_TOL,
            cap: DEFAULT_ENUMERATION_CAP,
        })
    }

    pub fn with_utility_tol(mut self, tol: f64) -> Self {
        self.utility_tol = tol;
        self
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn m(&self) -> usize {
        self.rewards.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rewards(&self) -> &[f64] {
        &self.rewards
    }

    pub fn utility_tol(&self) -> f64 {
        self.utility_tol
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn strategy_set(&self, designer: usize) -> &[GammaProfile] {
        &self.strategy_sets[designer]
    }

    pub fn strategy_sets(&self) -> &[Vec<GammaProfile>] {
        &self.strategy_sets
    }

    /// True when every contest in every strategy set is MDU.
    pub fn is_all_mdu(&self) -> bool {
        self.strategy_sets.iter().flatten().all(is_mdu)
    }

    /// `MRD(S_i)` for every designer.
    pub fn mrd_sets(&self) -> Vec<Vec<usize>> {
        self.strategy_sets
            .iter()
            .map(|s| mrd_subset(s).unwrap_or_default())
            .collect()
    }

    /// Size of `S_1 x ... x S_m`, failing when it exceeds the cap.
    pub fn profile_count(&self) -> Result<usize> {
        let mut size: usize = 1;
        for s in &self.strategy_sets {
            size = size.checked_mul(s.len()).ok_or(Error::CapExceeded {
                size: usize::MAX,
                cap: self.cap,
            })?;
        }
        if size > self.cap {
            return Err(Error::CapExceeded { size, cap: self.cap });
        }
        Ok(size)
    }

    /// Profile number `index` in lexicographic order (last designer varies fastest).
    pub fn profile_at(&self, mut index: usize) -> StrategyProfile {
        let mut choice = alloc::vec![0; self.m()];
        for (slot, set) in choice.iter_mut().zip(&self.strategy_sets).rev() {
            *slot = index % set.len();
            index /= set.len();
        }
        StrategyProfile(choice)
    }

    /// Inverse of [`Self::profile_at`].
    pub fn index_of(&self, profile: &StrategyProfile) -> usize {
        profile
            .0
            .iter()
            .zip(&self.strategy_sets)
            .fold(0, |acc, (&c, set)| acc * set.len() + c)
    }

    pub fn validate_profile(&self, profile: &StrategyProfile) -> Result<()> {
        if profile.0.len() != self.m() {
            return Err(Error::LengthMismatch {
                expected: self.m(),
                got: profile.0.len(),
            });
        }
        for (&c, set) in profile.0.iter().zip(&self.strategy_sets) {
            if c >= set.len() {
                return Err(Error::IndexOutOfRange {
                    index: c,
                    len: set.len(),
                });
            }
        }
        Ok(())
    }

    /// The contests chosen under `profile`.
    pub fn contests(&self, profile: &StrategyProfile) -> Vec<GammaProfile> {
        profile
            .0
            .iter()
            .zip(&self.strategy_sets)
            .map(|(&c, set)| set[c].clone())
            .collect()
    }
}

/// One contest index per designer.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StrategyProfile(pub Vec<usize>);

impl StrategyProfile {
    pub fn new(choice: Vec<usize>) -> Self {
        Self(choice)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// The same profile with `designer` switched to `contest`.
    pub fn with(&self, designer: usize, contest: usize) -> Self {
        let mut next = self.0.clone();
        next[designer] = contest;
        Self(next)
    }
}

/// Payoffs under one contestant equilibrium.
#[derive(Clone, Debug, PartialEq)]
pub struct EquilibriumOutcome {
    pub equilibrium: ParticipationEquilibrium,
    pub designer_utilities: Vec<f64>,
    pub contestant_utility: f64,
    pub welfare: WelfareTriple,
}

/// Everything that follows from one strategy profile.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileOutcome {
    pub profile: StrategyProfile,
    /// One entry per contestant equilibrium, sorted by increasing `p_1`.
    pub outcomes: Vec<EquilibriumOutcome>,
}

impl ProfileOutcome {
    pub fn selected(&self, rule: SelectionRule) -> &EquilibriumOutcome {
        match rule {
            SelectionRule::LowestP1 => &self.outcomes[0],
            SelectionRule::HighestP1 => &self.outcomes[self.outcomes.len() - 1],
        }
    }
}

fn outcome_for(
    instance: &CcgInstance,
    contests: &[GammaProfile],
    equilibrium: ParticipationEquilibrium,
) -> EquilibriumOutcome {
    let n = instance.n;
    let p = equilibrium.p.as_slice();
    let designer_utilities: Vec<f64> = contests
        .iter()
        .zip(p)
        .map(|(c, &pi)| designer_utility_unchecked(c, pi, n))
        .collect();
    let contestant = n as f64
        * contests
            .iter()
            .zip(p)
            .map(|(c, &pi)| pi * beta_unchecked(c, pi, n))
            .sum::<f64>();
    let social = contests
        .iter()
        .zip(p)
        .map(|(c, &pi)| c.reward() * (1.0 - powi(1.0 - pi, n)))
        .sum();
    let welfare = WelfareTriple {
        designer: designer_utilities.iter().sum(),
        contestant,
        social,
    };
    EquilibriumOutcome {
        contestant_utility: equilibrium.common_utility,
        equilibrium,
        designer_utilities,
        welfare,
    }
}

/// Solves the participation stage for `profile` and scores it.
pub fn evaluate_profile(instance: &CcgInstance, profile: &StrategyProfile) -> Result<ProfileOutcome> {
    instance.validate_profile(profile)?;
    let contests = instance.contests(profile);
    let n = instance.n;
    let equilibria = if contests.iter().all(is_mdu) {
        alloc::vec![solve_symmetric_equilibrium_mdu(&contests, n)?]
    } else if contests.len() == 2 {
        solve_two_contest_general(&contests[0], &contests[1], n)?
    } else {
        return Err(Error::UnsupportedNonMdu(contests.len()));
    };
    let outcomes = equilibria
        .into_iter()
        .map(|eq| outcome_for(instance, &contests, eq))
        .collect();
    Ok(ProfileOutcome {
        profile: profile.clone(),
        outcomes,
    })
}

/// Outcomes of every profile of a game, indexed by [`CcgInstance::index_of`].
#[derive(Clone, Debug)]
pub struct ProfileTable {
    outcomes: Vec<ProfileOutcome>,
}

impl ProfileTable {
    pub fn build(instance: &CcgInstance) -> Result<Self> {
        let count = instance.profile_count()?;
        let outcomes = map_indices(count, |i| evaluate_profile(instance, &instance.profile_at(i)))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { outcomes })
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn get(&self, index: usize) -> &ProfileOutcome {
        &self.outcomes[index]
    }

    pub fn iter(&self) -> impl Iterator<Item = &ProfileOutcome> {
        self.outcomes.iter()
    }

    pub fn utilities(&self, index: usize, rule: SelectionRule) -> &[f64] {
        &self.outcomes[index].selected(rule).designer_utilities
    }
}

fn selected_utilities(instance: &CcgInstance, profile: &StrategyProfile, rule: SelectionRule) -> Result<Vec<f64>> {
    Ok(evaluate_profile(instance, profile)?
        .selected(rule)
        .designer_utilities
        .clone())
}

/// Designer `designer`'s best replies to the other entries of `profile`
/// (its own entry is ignored). Ties within the instance's utility tolerance
/// are all kept.
pub fn best_responses(
    instance: &CcgInstance,
    designer: usize,
    profile: &StrategyProfile,
    rule: SelectionRule,
) -> Result<Vec<usize>> {
    instance.validate_profile(profile)?;
    if designer >= instance.m() {
        return Err(Error::IndexOutOfRange {
            index: designer,
            len: instance.m(),
        });
    }
    let values = (0..instance.strategy_set(designer).len())
        .map(|s| Ok(selected_utilities(instance, &profile.with(designer, s), rule)?[designer]))
        .collect::<Result<Vec<f64>>>()?;
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((0..values.len())
        .filter(|&s| values[s] >= best - instance.utility_tol)
        .collect())
}

/// A profitable unilateral deviation.
#[derive(Clone, Debug, PartialEq)]
pub struct Deviation {
    pub designer: usize,
    pub to: usize,
    pub gain: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquilibriumVerdict {
    /// Verdict when designers anticipate the selected contestant equilibrium everywhere.
    pub holds: bool,
    /// The most profitable deviation, when the verdict is negative.
    pub witness: Option<Deviation>,
    /// Verdict per contestant equilibrium of the profile itself (deviations
    /// are still scored under the selection rule).
    pub per_equilibrium: Vec<bool>,
}

/// Whether `profile` is a contestant-symmetric subgame-perfect equilibrium.
pub fn is_equilibrium(
    instance: &CcgInstance,
    profile: &StrategyProfile,
    rule: SelectionRule,
) -> Result<EquilibriumVerdict> {
    let here = evaluate_profile(instance, profile)?;
    let mut deviation_values: Vec<(usize, usize, f64)> = Vec::new();
    for designer in 0..instance.m() {
        for s in 0..instance.strategy_set(designer).len() {
            if s != profile.0[designer] {
                let u = selected_utilities(instance, &profile.with(designer, s), rule)?[designer];
                deviation_values.push((designer, s, u));
            }
        }
    }
    Ok(verdict_from(
        instance.utility_tol,
        &here,
        rule,
        deviation_values.into_iter(),
    ))
}

fn verdict_from(
    tol: f64,
    here: &ProfileOutcome,
    rule: SelectionRule,
    deviations: impl Iterator<Item = (usize, usize, f64)> + Clone,
) -> EquilibriumVerdict {
    let best_gain = |incumbent: &[f64]| -> Option<Deviation> {
        let mut best: Option<Deviation> = None;
        for (designer, to, u) in deviations.clone() {
            let gain = u - incumbent[designer];
            if gain > tol && best.as_ref().map_or(true, |b| gain > b.gain) {
                best = Some(Deviation { designer, to, gain });
            }
        }
        best
    };
    let witness = best_gain(&here.selected(rule).designer_utilities);
    let per_equilibrium = here
        .outcomes
        .iter()
        .map(|o| best_gain(&o.designer_utilities).is_none())
        .collect();
    EquilibriumVerdict {
        holds: witness.is_none(),
        witness,
        per_equilibrium,
    }
}

/// All contestant-symmetric subgame-perfect equilibria, in profile order.
pub fn enumerate_equilibria(instance: &CcgInstance, rule: SelectionRule) -> Result<Vec<StrategyProfile>> {
    let table = ProfileTable::build(instance)?;
    Ok(equilibria_in_table(instance, &table, rule))
}

pub(crate) fn equilibria_in_table(
    instance: &CcgInstance,
    table: &ProfileTable,
    rule: SelectionRule,
) -> Vec<StrategyProfile> {
    let flags = map_indices(table.len(), |index| {
        let profile = instance.profile_at(index);
        let mine = table.utilities(index, rule);
        (0..instance.m()).all(|designer| {
            (0..instance.strategy_set(designer).len()).all(|s| {
                let other = instance.index_of(&profile.with(designer, s));
                table.utilities(other, rule)[designer] <= mine[designer] + instance.utility_tol
            })
        })
    });
    flags
        .into_iter()
        .enumerate()
        .filter(|(_, ok)| *ok)
        .map(|(i, _)| instance.profile_at(i))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct DominanceVerdict {
    pub dominant: bool,
    /// A profile in which the designer plays a strictly better alternative,
    /// together with the gain over the candidate.
    pub witness: Option<(StrategyProfile, f64)>,
}

/// Whether contest `contest` is dominant for `designer` over the given finite sets.
pub fn is_dominant(
    instance: &CcgInstance,
    designer: usize,
    contest: usize,
    rule: SelectionRule,
) -> Result<DominanceVerdict> {
    if designer >= instance.m() {
        return Err(Error::IndexOutOfRange {
            index: designer,
            len: instance.m(),
        });
    }
    if contest >= instance.strategy_set(designer).len() {
        return Err(Error::IndexOutOfRange {
            index: contest,
            len: instance.strategy_set(designer).len(),
        });
    }
    let table = ProfileTable::build(instance)?;
    Ok(dominance_in_table(instance, &table, designer, contest, rule))
}

pub(crate) fn dominance_in_table(
    instance: &CcgInstance,
    table: &ProfileTable,
    designer: usize,
    contest: usize,
    rule: SelectionRule,
) -> DominanceVerdict {
    let mut witness: Option<(StrategyProfile, f64)> = None;
    for index in 0..table.len() {
        let profile = instance.profile_at(index);
        if profile.0[designer] != contest {
            continue;
        }
        let mine = table.utilities(index, rule)[designer];
        for s in 0..instance.strategy_set(designer).len() {
            let alt = profile.with(designer, s);
            let gain = table.utilities(instance.index_of(&alt), rule)[designer] - mine;
            if gain > instance.utility_tol && witness.as_ref().map_or(true, |w| gain > w.1) {
                witness = Some((alt, gain));
            }
        }
    }
    DominanceVerdict {
        dominant: witness.is_none(),
        witness,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParetoVerdict {
    pub optimal: bool,
    /// A profile that weakly improves every designer and strictly improves one.
    pub improvement: Option<StrategyProfile>,
}

/// Pareto optimality of `profile` for the designers.
pub fn pareto_check(instance: &CcgInstance, profile: &StrategyProfile, rule: SelectionRule) -> Result<ParetoVerdict> {
    instance.validate_profile(profile)?;
    let table = ProfileTable::build(instance)?;
    Ok(pareto_in_table(instance, &table, profile, rule))
}

pub(crate) fn pareto_in_table(
    instance: &CcgInstance,
    table: &ProfileTable,
    profile: &StrategyProfile,
    rule: SelectionRule,
) -> ParetoVerdict {
    let tol = instance.utility_tol;
    let base = table.utilities(instance.index_of(profile), rule);
    let improvement = (0..table.len()).find(|&index| {
        let u = table.utilities(index, rule);
        u.iter().zip(base).all(|(a, b)| *a >= *b - tol) && u.iter().zip(base).any(|(a, b)| *a > *b + tol)
    });
    ParetoVerdict {
        optimal: improvement.is_none(),
        improvement: improvement.map(|i| instance.profile_at(i)),
    }
}

/// Checks that every equilibrium induces the participation vector of the
/// all-MRD profile, and that the equilibrium set is exactly the one predicted
/// from its support.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportInvarianceReport {
    /// The all-MRD profile (first MRD member of every set).
    pub reference: StrategyProfile,
    pub reference_p: Vec<f64>,
    /// Support `P` of `reference_p`.
    pub support: Vec<usize>,
    pub equilibria: Vec<StrategyProfile>,
    /// Profiles predicted to be equilibria from `P` and the MRD sets.
    pub predicted: Vec<StrategyProfile>,
    /// `max |p_i(eq) - reference_p_i|` over all equilibria.
    pub max_deviation: f64,
    pub characterization_holds: bool,
}

pub fn support_invariance(instance: &CcgInstance, rule: SelectionRule) -> Result<SupportInvarianceReport> {
    for (designer, set) in instance.strategy_sets.iter().enumerate() {
        if !set.iter().all(is_mdu) {
            return Err(Error::NotMdu(designer));
        }
    }
    let mrd = instance.mrd_sets();
    if let Some(i) = mrd.iter().position(Vec::is_empty) {
        return Err(Error::EmptyMrd(i));
    }
    let table = ProfileTable::build(instance)?;
    let reference = StrategyProfile(mrd.iter().map(|s| s[0]).collect());
    let reference_eq = &table.get(instance.index_of(&reference)).selected(rule).equilibrium;
    let reference_p = reference_eq.p.as_slice().to_vec();
    let support = reference_eq.support.clone();

    let equilibria = equilibria_in_table(instance, &table, rule);
    let max_deviation = equilibria
        .iter()
        .map(|profile| {
            let p = table
                .get(instance.index_of(profile))
                .selected(rule)
                .equilibrium
                .p
                .as_slice();
            p.iter()
                .zip(&reference_p)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);

    let n = instance.n;
    let predicted: Vec<StrategyProfile> = (0..table.len())
        .map(|i| instance.profile_at(i))
        .filter(|profile| {
            if support.len() >= 2 {
                support.iter().all(|&i| mrd[i].contains(&profile.0[i]))
            } else {
                let i0 = support[0];
                let chosen = &instance.strategy_sets[i0][profile.0[i0]];
                let mrd_member = &instance.strategy_sets[i0][reference.0[i0]];
                (chosen.gamma(n) - mrd_member.gamma(n)).abs() <= GAMMA_TOL
            }
        })
        .collect();
    let characterization_holds = predicted == equilibria;
    Ok(SupportInvarianceReport {
        reference,
        reference_p,
        support,
        equilibria,
        predicted,
        max_deviation,
        characterization_holds,
    })
}
