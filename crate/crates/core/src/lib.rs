//! Solver for complete-information contest competition games.
//!
//! Several contest designers each pick a contest from a finite strategy set;
//! `n` contestants then choose where to participate with a common mixed
//! strategy, and each contest is played out in its symmetric effort-stage
//! equilibrium. Contests enter the crate only through their *gamma profile*:
//! `gamma(k)` is the expected utility of each of `k` participants.
//!
//! The crate is `no_std` (with `alloc`) unless the `std` feature is enabled.
//! The `parallel` feature enables rayon-backed profile sweeps and Monte-Carlo
//! runs; results are bit-identical to the serial paths.
//!
//! Module map:
//!
//! * [`contest`]: gamma profiles, the Tullock family, MDU/MRD/full rent
//!   dissipation classification.
//! * [`participation`]: the participation utility `beta` and the symmetric
//!   participation equilibrium solvers.
//! * [`designer`]: designer utilities, best responses, equilibria, dominance
//!   and Pareto checks over finite strategy sets.
//! * [`welfare`]: designer/contestant/social welfare and the optimality checks.
//! * [`risk`] and [`pure`]: risk-averse contestants and pure (asymmetric)
//!   participation equilibria.
//! * [`oracle`]: independent brute-force and Monte-Carlo cross-checks.

#![cfg_attr(not(any(feature = "std", test)), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod contest;
pub mod designer;
mod error;
mod math;
pub mod oracle;
pub mod participation;
pub mod pure;
pub mod risk;
mod sweep;
pub mod welfare;

pub use contest::{
    expected_total_effort, is_full_rent_dissipation, is_mdu, mrd_subset, piecewise_tullock_gamma, tullock_gamma,
    GammaProfile, PiecewiseTullockSpec, Tau, TullockSpec, GAMMA_TOL,
};
pub use designer::{
    best_responses, designer_utility, designer_utility_direct, enumerate_equilibria, evaluate_profile, is_dominant,
    is_equilibrium, pareto_check, support_invariance, CcgInstance, Deviation, DominanceVerdict, EquilibriumOutcome,
    EquilibriumVerdict, ParetoVerdict, ProfileOutcome, ProfileTable, SelectionRule, StrategyProfile,
    SupportInvarianceReport, UTILITY_TOL,
};
pub use error::{Error, Result};
pub use oracle::{
    brute_force_pure_ne_check, grid_verify_participation, mc_contestant_utility, mc_designer_utility, Estimate,
    SimConfig,
};
pub use participation::{
    beta, equilibrium_residual, frd_closed_form_probabilities, solve_symmetric_equilibrium_mdu,
    solve_two_contest_general, solve_two_contest_with, ParticipationEquilibrium, ParticipationVector, ScanConfig,
    SUPPORT_TOL,
};
pub use pure::{distinct_headcounts, enumerate_pure_participation_equilibria, enumerate_pure_with_cap, PureAssignment};
pub use risk::{
    beta_averse, risk_averse_best_response_scan, solve_two_contest_risk_averse, tau_grid, RiskPoint, RiskProfile,
    RiskScan,
};
pub use welfare::{
    check_wc_minimality, check_ws_maximality, holder_bound, welfare_of, WcVerdict, WelfareCase, WelfareReport,
    WelfareTriple, WsVerdict,
};

/// Default cap on the number of profiles or assignments an exhaustive search may visit.
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;
