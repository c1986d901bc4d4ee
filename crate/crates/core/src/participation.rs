//! Contestants' participation stage.
//!
//! A contestant entering contest `i`, when each of the other `n - 1`
//! contestants independently enters it with probability `p_i`, expects
//! `beta(C_i, p_i) = E[gamma_i(k + 1)]` with `k ~ Bin(n - 1, p_i)`. A
//! symmetric participation equilibrium is a common vector `p` such that every
//! contest in the support yields the same `beta`, and no other contest yields
//! more.

use alloc::vec::Vec;

use crate::contest::{is_mdu, GammaProfile};
use crate::error::{Error, Result};
use crate::math::{bernstein, binomial_row, bisect_decreasing, newton_decreasing};

/// Probabilities at or below this are snapped to zero.
pub const SUPPORT_TOL: f64 = 1e-9;
/// Allowed deviation of `sum(p)` from one.
pub const SUM_TOL: f64 = 1e-9;
const MAX_ITERATIONS: usize = 200;

/// A common mixed participation strategy over `m` contests.
#[derive(Clone, Debug, PartialEq)]
pub struct ParticipationVector(Vec<f64>);

impl ParticipationVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::NoContests);
        }
        for &x in &p {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::ProbabilityOutOfRange(x));
            }
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::NotNormalized(sum));
        }
        Ok(Self(p))
    }

    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::NoContests);
        }
        Ok(Self(alloc::vec![1.0 / m as f64; m]))
    }

    /// Snaps entries `<= SUPPORT_TOL` to zero and renormalises.
    pub(crate) fn cleaned(mut p: Vec<f64>) -> Self {
        for x in p.iter_mut() {
            if !(*x > SUPPORT_TOL) {
                *x = 0.0;
            }
            *x = x.min(1.0);
        }
        let sum: f64 = p.iter().sum();
        if sum > 0.0 {
            p.iter_mut().for_each(|x| *x /= sum);
        }
        Self(p)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Indices with probability above [`SUPPORT_TOL`].
    pub fn support(&self) -> Vec<usize> {
        support_of(&self.0)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl core::ops::Index<usize> for ParticipationVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// A symmetric participation equilibrium together with its certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct ParticipationEquilibrium {
    pub p: ParticipationVector,
    /// Utility `u_c` shared by every supported contest.
    pub common_utility: f64,
    pub support: Vec<usize>,
    /// Largest violation of the equilibrium condition, see [`equilibrium_residual`].
    pub residual: f64,
}

impl ParticipationEquilibrium {
    /// Builds the certificate from per-contest utilities evaluated at `p`.
    pub(crate) fn from_betas(p: ParticipationVector, betas: &[f64]) -> Self {
        let support = p.support();
        let residual = residual_from_betas(p.as_slice(), betas);
        let common_utility = if support.is_empty() {
            0.0
        } else {
            support.iter().map(|&i| betas[i]).sum::<f64>() / support.len() as f64
        };
        Self {
            p,
            common_utility,
            support,
            residual,
        }
    }
}

fn support_of(p: &[f64]) -> Vec<usize> {
    (0..p.len()).filter(|&i| p[i] > SUPPORT_TOL).collect()
}

/// `beta` (or a transformed variant) as a Bernstein polynomial of degree
/// `n - 1`, with its derivative, for repeated evaluation.
pub(crate) struct BetaPoly {
    weighted: Vec<f64>,
    slope: Vec<f64>,
}

impl BetaPoly {
    pub(crate) fn new(c: &GammaProfile, n: usize) -> Self {
        Self::transformed(c, n, |g| g)
    }

    /// Polynomial of `E[f(gamma(k + 1))]`, `k ~ Bin(n - 1, p)`.
    pub(crate) fn transformed<F: Fn(f64) -> f64>(c: &GammaProfile, n: usize, f: F) -> Self {
        let others = n - 1;
        let values: Vec<f64> = c.values()[..n].iter().map(|&g| f(g)).collect();
        let weighted = binomial_row(others).iter().zip(&values).map(|(b, v)| b * v).collect();
        let slope = if others == 0 {
            alloc::vec![0.0]
        } else {
            binomial_row(others - 1)
                .iter()
                .zip(values.windows(2))
                .map(|(b, w)| others as f64 * b * (w[1] - w[0]))
                .collect()
        };
        Self { weighted, slope }
    }

    pub(crate) fn value(&self, p: f64) -> f64 {
        bernstein(&self.weighted, p)
    }

    pub(crate) fn slope(&self, p: f64) -> f64 {
        bernstein(&self.slope, p)
    }
}

/// `sum_{k=0}^{n-1} C(n-1, k) p^k (1-p)^(n-1-k) f(gamma(k+1))`, unchecked.
pub(crate) fn expect_over_others<F: Fn(f64) -> f64>(c: &GammaProfile, p: f64, n: usize, f: F) -> f64 {
    BetaPoly::transformed(c, n, f).value(p)
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::ProbabilityOutOfRange(p))
    }
}

pub(crate) fn check_headcount(c: &GammaProfile, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidHeadcount);
    }
    if n > c.n_max() {
        return Err(Error::ProfileTooShort {
            available: c.n_max(),
            required: n,
        });
    }
    Ok(())
}

/// Expected utility of a participant in `c` when each of the other `n - 1`
/// contestants joins independently with probability `p`.
pub fn beta(c: &GammaProfile, p: f64, n: usize) -> Result<f64> {
    check_probability(p)?;
    check_headcount(c, n)?;
    Ok(beta_unchecked(c, p, n))
}

pub(crate) fn beta_unchecked(c: &GammaProfile, p: f64, n: usize) -> f64 {
    expect_over_others(c, p, n, |g| g).clamp(0.0, c.reward())
}

/// Unique symmetric participation equilibrium over MDU contests, by water-filling.
///
/// For a candidate common utility `u`, contest `i` receives the `p_i` solving
/// `beta_i(p_i) = u` (zero when `u >= R_i`, one when `beta_i(1) >= u`); `u` is
/// then found by safeguarded Newton so the probabilities sum to one. `beta_i`
/// is strictly decreasing for MDU profiles and `n >= 2`, which makes every
/// step well posed.
pub fn solve_symmetric_equilibrium_mdu(contests: &[GammaProfile], n: usize) -> Result<ParticipationEquilibrium> {
    if contests.is_empty() {
        return Err(Error::NoContests);
    }
    for (i, c) in contests.iter().enumerate() {
        check_headcount(c, n)?;
        if !is_mdu(c) {
            return Err(Error::NotMdu(i));
        }
    }
    let p = if n == 1 {
        argmax_reward_split(contests)
    } else {
        water_fill(contests, n)
    };
    let p = ParticipationVector::cleaned(p);
    let betas: Vec<f64> = contests
        .iter()
        .zip(p.as_slice())
        .map(|(c, &pi)| beta_unchecked(c, pi, n))
        .collect();
    Ok(ParticipationEquilibrium::from_betas(p, &betas))
}

/// With a single contestant `beta_i = R_i`; the symmetric representative
/// splits evenly among the highest rewards.
fn argmax_reward_split(contests: &[GammaProfile]) -> Vec<f64> {
    let best = contests
        .iter()
        .map(GammaProfile::reward)
        .fold(f64::NEG_INFINITY, f64::max);
    let winners: Vec<bool> = contests
        .iter()
        .map(|c| (best - c.reward()).abs() <= crate::contest::GAMMA_TOL * best.max(1.0))
        .collect();
    let count = winners.iter().filter(|&&w| w).count() as f64;
    winners.into_iter().map(|w| if w { 1.0 / count } else { 0.0 }).collect()
}

fn participation_at_level(c: &GammaProfile, poly: &BetaPoly, u: f64, n: usize) -> f64 {
    if u >= c.reward() {
        return 0.0;
    }
    if c.gamma(n) >= u {
        return 1.0;
    }
    newton_decreasing(|p| (poly.value(p) - u, poly.slope(p)), 0.0, 1.0, MAX_ITERATIONS)
}

fn water_fill(contests: &[GammaProfile], n: usize) -> Vec<f64> {
    let top = contests.iter().map(GammaProfile::reward).fold(0.0_f64, f64::max);
    let polys: Vec<BetaPoly> = contests.iter().map(|c| BetaPoly::new(c, n)).collect();
    let at_level = |u: f64| {
        contests
            .iter()
            .zip(&polys)
            .map(move |(c, poly)| participation_at_level(c, poly, u, n))
    };
    // d p_i / du = 1 / beta_i'(p_i) for every contest strictly inside (0, 1).
    let excess = |u: f64| {
        at_level(u).zip(&polys).fold((-1.0, 0.0), |(sum, slope), (p, poly)| {
            let ds = if p > 0.0 && p < 1.0 { 1.0 / poly.slope(p) } else { 0.0 };
            (sum + p, slope + ds)
        })
    };
    let level = newton_decreasing(excess, 0.0, top, MAX_ITERATIONS);
    at_level(level).collect()
}

/// Closed-form equilibrium when every contest has full rent dissipation:
/// `1 - p_i = (m - 1) R_i^(-1/(n-1)) / sum_j R_j^(-1/(n-1))`.
///
/// Fails with [`Error::ClosedFormInapplicable`] when the formula leaves the
/// simplex, i.e. when some contest is unsupported in equilibrium.
pub fn frd_closed_form_probabilities(rewards: &[f64], n: usize) -> Result<ParticipationVector> {
    if rewards.is_empty() {
        return Err(Error::NoContests);
    }
    if n < 2 {
        return Err(Error::InvalidHeadcount);
    }
    for &r in rewards {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidReward(r));
        }
    }
    let exponent = -1.0 / (n - 1) as f64;
    let weights: Vec<f64> = rewards.iter().map(|&r| libm::pow(r, exponent)).collect();
    let total: f64 = weights.iter().sum();
    let m1 = (rewards.len() - 1) as f64;
    let mut p = Vec::with_capacity(rewards.len());
    for (index, w) in weights.iter().enumerate() {
        let value = 1.0 - m1 * w / total;
        if value < -1e-12 {
            return Err(Error::ClosedFormInapplicable { index, value });
        }
        p.push(value.clamp(0.0, 1.0));
    }
    let sum: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= sum);
    ParticipationVector::new(p)
}

/// Settings for the two-contest sign-change scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanConfig {
    /// Number of uniform grid intervals on `[0, 1]`.
    pub grid: usize,
    /// Bracket width at which root refinement stops.
    pub root_tol: f64,
    /// Finest grid tried before giving up.
    pub max_grid: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            grid: 10_000,
            root_tol: 1e-12,
            max_grid: 1_000_000,
        }
    }
}

/// All symmetric participation equilibria for two contests, without assuming MDU.
///
/// Interior equilibria are roots of `beta_1(p) - beta_2(1 - p)`, located by a
/// sign-change scan and refined by bisection; boundary equilibria are added
/// when the lone supported contest weakly beats the empty one. Results are
/// sorted by increasing `p_1`.
pub fn solve_two_contest_general(
    c1: &GammaProfile,
    c2: &GammaProfile,
    n: usize,
) -> Result<Vec<ParticipationEquilibrium>> {
    solve_two_contest_with(c1, c2, n, &ScanConfig::default())
}

pub fn solve_two_contest_with(
    c1: &GammaProfile,
    c2: &GammaProfile,
    n: usize,
    config: &ScanConfig,
) -> Result<Vec<ParticipationEquilibrium>> {
    check_headcount(c1, n)?;
    check_headcount(c2, n)?;
    let (b1, b2) = (BetaPoly::new(c1, n), BetaPoly::new(c2, n));
    scan_two_contests(|p| b1.value(p), |p| b2.value(p), n, config)
}

/// Shared scan used by the risk-neutral and risk-averse solvers. `u1`/`u2`
/// are the participation utilities of each contest as functions of that
/// contest's own probability.
pub(crate) fn scan_two_contests<F1, F2>(
    u1: F1,
    u2: F2,
    n: usize,
    config: &ScanConfig,
) -> Result<Vec<ParticipationEquilibrium>>
where
    F1: Fn(f64) -> f64,
    F2: Fn(f64) -> f64,
{
    let certify = |p1: f64| {
        let p = ParticipationVector::cleaned(alloc::vec![p1, 1.0 - p1]);
        let betas = [u1(p[0]), u2(p[1])];
        ParticipationEquilibrium::from_betas(p, &betas)
    };

    if n == 1 {
        // Utilities are constant; ties are represented by the even split.
        let (a, b) = (u1(0.0), u2(0.0));
        let p1 = if (a - b).abs() <= SUPPORT_TOL {
            0.5
        } else if a > b {
            1.0
        } else {
            0.0
        };
        return Ok(alloc::vec![certify(p1)]);
    }

    let gap = |p: f64| u1(p) - u2(1.0 - p);
    let mut grid = config.grid.max(2);
    loop {
        let mut roots: Vec<f64> = Vec::new();
        if u2(1.0) >= u1(0.0) - SUPPORT_TOL {
            roots.push(0.0);
        }
        let mut prev_x = 0.0;
        let mut prev_f = gap(prev_x);
        for i in 1..=grid {
            let x = i as f64 / grid as f64;
            let fx = gap(x);
            if prev_f == 0.0 && i > 1 {
                roots.push(prev_x);
            } else if prev_f * fx < 0.0 {
                let root = if prev_f > 0.0 {
                    bisect_decreasing(&gap, prev_x, x, config.root_tol, MAX_ITERATIONS)
                } else {
                    bisect_decreasing(|p| -gap(p), prev_x, x, config.root_tol, MAX_ITERATIONS)
                };
                roots.push(root);
            }
            prev_x = x;
            prev_f = fx;
        }
        if u1(1.0) >= u2(0.0) - SUPPORT_TOL {
            roots.push(1.0);
        }

        let mut found: Vec<ParticipationEquilibrium> = Vec::new();
        for r in roots {
            let eq = certify(r);
            let duplicate = found.iter().any(|e| (e.p[0] - eq.p[0]).abs() <= SUPPORT_TOL);
            if !duplicate {
                found.push(eq);
            }
        }
        if !found.is_empty() {
            found.sort_by(|a, b| a.p[0].total_cmp(&b.p[0]));
            return Ok(found);
        }
        if grid >= config.max_grid {
            return Err(Error::NoEquilibriumFound);
        }
        grid = (grid * 10).min(config.max_grid);
    }
}

/// Violation of the equilibrium condition at `p`: the largest gain from moving
/// from a supported contest to any contest, plus the largest utility spread
/// inside the support. Zero (up to rounding) exactly at equilibria.
pub fn equilibrium_residual(contests: &[GammaProfile], p: &ParticipationVector, n: usize) -> Result<f64> {
    if contests.len() != p.len() {
        return Err(Error::LengthMismatch {
            expected: contests.len(),
            got: p.len(),
        });
    }
    let mut betas = Vec::with_capacity(contests.len());
    for (c, &pi) in contests.iter().zip(p.as_slice()) {
        betas.push(beta(c, pi, n)?);
    }
    Ok(residual_from_betas(p.as_slice(), &betas))
}

pub(crate) fn residual_from_betas(p: &[f64], betas: &[f64]) -> f64 {
    let support = support_of(p);
    let best = betas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut gain: f64 = 0.0;
    let mut spread: f64 = 0.0;
    for &i in &support {
        gain = gain.max(best - betas[i]);
        for &j in &support {
            spread = spread.max((betas[i] - betas[j]).abs());
        }
    }
    gain.max(0.0) + spread
}
