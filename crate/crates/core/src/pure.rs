//! Pure (possibly asymmetric) participation equilibria.
//!
//! Each contestant is assigned to exactly one contest. An assignment is a
//! pure Nash equilibrium when no contestant in contest `i` (headcount `k_i`)
//! would rather join another contest `j`: `gamma_i(k_i) >= gamma_j(k_j + 1)`.

use alloc::vec::Vec;

use crate::contest::{GammaProfile, GAMMA_TOL};
use crate::error::{Error, Result};
use crate::participation::check_headcount;
use crate::sweep::map_indices;
use crate::DEFAULT_ENUMERATION_CAP;

/// `assignment[l]` is the contest contestant `l` enters.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PureAssignment {
    pub assignment: Vec<usize>,
}

impl PureAssignment {
    pub fn new(assignment: Vec<usize>) -> Self {
        Self { assignment }
    }

    /// Number of contestants in each of `m` contests.
    pub fn headcounts(&self, m: usize) -> Vec<usize> {
        let mut counts = alloc::vec![0; m];
        for &c in &self.assignment {
            counts[c] += 1;
        }
        counts
    }

    /// Realised designer payoffs `R_i - k_i gamma_i(k_i)` (zero for empty contests).
    pub fn designer_utilities(&self, contests: &[GammaProfile]) -> Vec<f64> {
        self.headcounts(contests.len())
            .iter()
            .zip(contests)
            .map(|(&k, c)| {
                if k == 0 {
                    0.0
                } else {
                    c.reward() - k as f64 * c.gamma(k)
                }
            })
            .collect()
    }
}

fn is_stable(contests: &[GammaProfile], counts: &[usize]) -> bool {
    counts.iter().enumerate().all(|(i, &ki)| {
        ki == 0
            || (0..contests.len())
                .filter(|&j| j != i)
                .all(|j| contests[i].gamma(ki) + GAMMA_TOL >= contests[j].gamma(counts[j] + 1))
    })
}

/// Every labelled assignment of `n` contestants that is a pure equilibrium,
/// in lexicographic order (contestant 0 most significant).
pub fn enumerate_pure_participation_equilibria(contests: &[GammaProfile], n: usize) -> Result<Vec<PureAssignment>> {
    enumerate_pure_with_cap(contests, n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_pure_with_cap(contests: &[GammaProfile], n: usize, cap: usize) -> Result<Vec<PureAssignment>> {
    let m = contests.len();
    if m == 0 {
        return Err(Error::NoContests);
    }
    for c in contests {
        check_headcount(c, n)?;
    }
    let mut size: usize = 1;
    for _ in 0..n {
        size = size
            .checked_mul(m)
            .filter(|&s| s <= cap)
            .ok_or(Error::CapExceeded { size: usize::MAX, cap })?;
    }
    let decode = |mut index: usize| {
        let mut assignment = alloc::vec![0; n];
        for slot in assignment.iter_mut().rev() {
            *slot = index % m;
            index /= m;
        }
        PureAssignment { assignment }
    };
    let hits = map_indices(size, |index| {
        let a = decode(index);
        is_stable(contests, &a.headcounts(m)).then_some(a)
    });
    Ok(hits.into_iter().flatten().collect())
}

/// Distinct headcount vectors among `assignments`: the equilibria up to
/// relabelling contestants.
pub fn distinct_headcounts(assignments: &[PureAssignment], m: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = assignments.iter().map(|a| a.headcounts(m)).collect();
    out.sort();
    out.dedup();
    out
}
