//! Independent cross-checks of the analytic formulas.
//!
//! Nothing here reuses the closed-form sums of [`crate::participation`] or
//! [`crate::designer`]: Monte-Carlo estimators sample contestants directly,
//! the participation check rebuilds headcount distributions by convolution,
//! and the pure-equilibrium check recounts headcounts for every deviation.
//!
//! Randomness is counter based. Trials are split into fixed chunks of
//! [`CHUNK`]; chunk `c` draws from ChaCha8 keyed by the seed on stream `c`.
//! Chunk sums are merged in chunk order, so serial and parallel runs agree
//! bit for bit.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::contest::{GammaProfile, GAMMA_TOL};
use crate::error::{Error, Result};
use crate::participation::{check_headcount, check_probability, ParticipationVector};
use crate::sweep::map_indices;

/// Trials per random stream.
pub const CHUNK: usize = 4096;

/// Default trial count for statistical checks.
pub const DEFAULT_TRIALS: usize = 1_000_000;

/// Lattice points beyond which [`grid_verify_participation`] checks vertices only.
pub const LATTICE_CAP: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimConfig {
    pub trials: usize,
    pub seed: u64,
}

impl SimConfig {
    pub fn new(trials: usize, seed: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::InvalidSimConfig("trials must be at least 1"));
        }
        Ok(Self { trials, seed })
    }
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            trials: DEFAULT_TRIALS,
            seed: 0,
        }
    }
}

/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub trials: usize,
}

impl Estimate {
    /// Whether `value` lies within `k` standard errors of the mean.
    /// A zero-variance estimate must match exactly.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.stderr
    }
}

fn simulate<F>(cfg: &SimConfig, trial: F) -> Estimate
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync + Send,
{
    let chunks = cfg.trials.div_ceil(CHUNK);
    let sums = map_indices(chunks, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(c as u64);
        let len = CHUNK.min(cfg.trials - c * CHUNK);
        let mut s = 0.0;
        let mut s2 = 0.0;
        for _ in 0..len {
            let x = trial(&mut rng);
            s += x;
            s2 += x * x;
        }
        (s, s2)
    });
    let (s, s2) = sums.iter().fold((0.0, 0.0), |acc, &(a, b)| (acc.0 + a, acc.1 + b));
    let t = cfg.trials as f64;
    let mean = s / t;
    let stderr = if cfg.trials > 1 {
        let var = ((s2 - t * mean * mean) / (t - 1.0)).max(0.0);
        libm::sqrt(var / t)
    } else {
        0.0
    };
    Estimate {
        mean,
        stderr,
        trials: cfg.trials,
    }
}

/// Index drawn from the categorical distribution `p`.
fn draw_categorical(rng: &mut ChaCha8Rng, p: &[f64]) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &pi) in p.iter().enumerate() {
        if pi <= 0.0 {
            continue;
        }
        acc += pi;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}

/// Monte-Carlo estimate of the utility of joining `contests[focal]`: the
/// other `n - 1` contestants pick contests i.i.d. from `p`.
pub fn mc_contestant_utility(
    contests: &[GammaProfile],
    p: &ParticipationVector,
    n: usize,
    focal: usize,
    cfg: &SimConfig,
) -> Result<Estimate> {
    if contests.len() != p.len() {
        return Err(Error::LengthMismatch {
            expected: contests.len(),
            got: p.len(),
        });
    }
    if focal >= contests.len() {
        return Err(Error::IndexOutOfRange {
            index: focal,
            len: contests.len(),
        });
    }
    check_headcount(&contests[focal], n)?;
    let probs = p.as_slice();
    let c = &contests[focal];
    Ok(simulate(cfg, |rng| {
        let joined = (1..n).filter(|_| draw_categorical(rng, probs) == focal).count();
        c.gamma(joined + 1)
    }))
}

/// Monte-Carlo estimate of a designer's utility: each of `n` contestants
/// joins with probability `p_i`; the designer keeps `R - k gamma(k)` when `k >= 1`.
pub fn mc_designer_utility(contest: &GammaProfile, p_i: f64, n: usize, cfg: &SimConfig) -> Result<Estimate> {
    check_probability(p_i)?;
    check_headcount(contest, n)?;
    Ok(simulate(cfg, |rng| {
        let k = (0..n).filter(|_| rng.random::<f64>() < p_i).count();
        if k == 0 {
            0.0
        } else {
            contest.reward() - k as f64 * contest.gamma(k)
        }
    }))
}

/// Distribution of the number of successes among `trials` Bernoulli(`p`)
/// draws, built one draw at a time.
fn count_distribution(trials: usize, p: f64) -> Vec<f64> {
    let mut dist = alloc::vec![0.0; trials + 1];
    dist[0] = 1.0;
    for t in 0..trials {
        for k in (0..=t + 1).rev() {
            let stay = dist[k] * (1.0 - p);
            let moved = if k > 0 { dist[k - 1] * p } else { 0.0 };
            dist[k] = stay + moved;
        }
    }
    dist
}

/// Largest gain one contestant can get by switching from `p` to another
/// mixed strategy on the simplex lattice with denominator `grid_size`
/// (vertices only when the lattice has more than [`LATTICE_CAP`] points).
/// Zero when no deviation helps.
pub fn grid_verify_participation(
    contests: &[GammaProfile],
    p: &ParticipationVector,
    n: usize,
    grid_size: usize,
) -> Result<f64> {
    let m = contests.len();
    if m == 0 {
        return Err(Error::NoContests);
    }
    if m != p.len() {
        return Err(Error::LengthMismatch {
            expected: m,
            got: p.len(),
        });
    }
    for c in contests {
        check_headcount(c, n)?;
    }
    let betas: Vec<f64> = contests
        .iter()
        .zip(p.as_slice())
        .map(|(c, &pi)| {
            count_distribution(n - 1, pi)
                .iter()
                .enumerate()
                .map(|(k, w)| w * c.gamma(k + 1))
                .sum()
        })
        .collect();
    let current: f64 = betas.iter().zip(p.as_slice()).map(|(b, q)| b * q).sum();
    let mut best = f64::NEG_INFINITY;
    let g = grid_size.max(1);
    if lattice_size(m, g) <= LATTICE_CAP {
        let mut point = alloc::vec![0usize; m];
        visit_lattice(&mut point, 0, g, &mut |q| {
            let value: f64 = q.iter().zip(&betas).map(|(&qi, b)| qi as f64 / g as f64 * b).sum();
            best = best.max(value);
        });
    } else {
        best = betas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    }
    Ok((best - current).max(0.0))
}

fn lattice_size(m: usize, g: usize) -> usize {
    // C(g + m - 1, m - 1), saturating.
    let mut size: usize = 1;
    for i in 1..m {
        size = match size.checked_mul(g + i) {
            Some(s) => s / i,
            None => return usize::MAX,
        };
    }
    size
}

fn visit_lattice<F: FnMut(&[usize])>(point: &mut [usize], at: usize, left: usize, f: &mut F) {
    if at + 1 == point.len() {
        point[at] = left;
        f(point);
        return;
    }
    for v in 0..=left {
        point[at] = v;
        visit_lattice(point, at + 1, left - v, f);
    }
}

/// Checks a pure assignment from scratch: every contestant tries every other
/// contest and headcounts are recounted for each move.
pub fn brute_force_pure_ne_check(contests: &[GammaProfile], assignment: &[usize], n: usize) -> Result<bool> {
    let m = contests.len();
    if m == 0 {
        return Err(Error::NoContests);
    }
    if assignment.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: assignment.len(),
        });
    }
    for c in contests {
        check_headcount(c, n)?;
    }
    if let Some(&bad) = assignment.iter().find(|&&a| a >= m) {
        return Err(Error::IndexOutOfRange { index: bad, len: m });
    }
    let payoff = |a: &[usize], who: usize| {
        let mine = a[who];
        let k = a.iter().filter(|&&x| x == mine).count();
        contests[mine].gamma(k)
    };
    let mut trial = assignment.to_vec();
    for who in 0..n {
        let stay = payoff(assignment, who);
        for j in (0..m).filter(|&j| j != assignment[who]) {
            trial[who] = j;
            if payoff(&trial, who) > stay + GAMMA_TOL {
                return Ok(false);
            }
        }
        trial[who] = assignment[who];
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contest::{tullock_gamma, Tau, TullockSpec};
    use alloc::vec;

    fn all_pay(n: usize) -> GammaProfile {
        tullock_gamma(&TullockSpec::all_pay(1.0).unwrap(), n).unwrap()
    }

    #[test]
    fn count_distribution_is_binomial() {
        let d = count_distribution(4, 0.3);
        let expect = [0.2401, 0.4116, 0.2646, 0.0756, 0.0081];
        for (a, b) in d.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn degenerate_designer_draws_are_exact() {
        let cfg = SimConfig::new(10_000, 7).unwrap();
        let c = all_pay(5);
        let zero = mc_designer_utility(&c, 0.0, 5, &cfg).unwrap();
        assert_eq!((zero.mean, zero.stderr), (0.0, 0.0));
        let full = mc_designer_utility(&c, 1.0, 5, &cfg).unwrap();
        assert_eq!((full.mean, full.stderr), (1.0, 0.0));
    }

    #[test]
    fn focal_degenerate_full_dissipation() {
        let c = all_pay(4);
        let p = ParticipationVector::new(vec![1.0, 0.0]).unwrap();
        let est = mc_contestant_utility(&[c.clone(), c], &p, 4, 0, &SimConfig::new(5000, 1).unwrap()).unwrap();
        assert_eq!(est.mean, 0.0);
    }

    #[test]
    fn deterministic_under_seed() {
        let c = tullock_gamma(&TullockSpec::new(1.0, Tau::Finite(0.5)).unwrap(), 6).unwrap();
        let cfg = SimConfig::new(20_000, 42).unwrap();
        let a = mc_designer_utility(&c, 0.4, 6, &cfg).unwrap();
        let b = mc_designer_utility(&c, 0.4, 6, &cfg).unwrap();
        assert_eq!(a, b);
        let other = mc_designer_utility(&c, 0.4, 6, &SimConfig::new(20_000, 43).unwrap()).unwrap();
        assert_ne!(a.mean, other.mean);
    }

    #[test]
    fn lattice_counts() {
        assert_eq!(lattice_size(1, 10), 1);
        assert_eq!(lattice_size(2, 10), 11);
        assert_eq!(lattice_size(3, 10), 66);
        let mut seen = 0;
        visit_lattice(&mut [0; 3], 0, 10, &mut |_| seen += 1);
        assert_eq!(seen, 66);
    }

    #[test]
    fn single_contest_has_no_deviation() {
        let p = ParticipationVector::new(vec![1.0]).unwrap();
        assert_eq!(grid_verify_participation(&[all_pay(3)], &p, 3, 10).unwrap(), 0.0);
    }

    #[test]
    fn brute_force_examples() {
        let c = all_pay(3);
        let t = tullock_gamma(&TullockSpec::new(1.0, Tau::Finite(1.5)).unwrap(), 3).unwrap();
        let pair = [t, c];
        assert!(brute_force_pure_ne_check(&pair, &[0, 0, 1], 3).unwrap());
        assert!(!brute_force_pure_ne_check(&pair, &[1, 1, 1], 3).unwrap());
        assert!(brute_force_pure_ne_check(&[all_pay(1)], &[0], 1).unwrap());
    }

    #[test]
    fn invalid_config() {
        assert!(SimConfig::new(0, 1).is_err());
    }
}
