use ccg_core::oracle::{grid_verify_participation, mc_contestant_utility, mc_designer_utility, SimConfig};
use ccg_core::{
    beta, beta_averse, brute_force_pure_ne_check, designer_utility, enumerate_pure_participation_equilibria,
    frd_closed_form_probabilities, holder_bound, is_full_rent_dissipation, is_mdu, mrd_subset,
    solve_symmetric_equilibrium_mdu, tullock_gamma, welfare_of, CcgInstance, GammaProfile, ParticipationVector,
    RiskProfile, SelectionRule, StrategyProfile, Tau, TullockSpec,
};
use proptest::prelude::*;

fn tau_strategy() -> impl Strategy<Value = Tau> {
    prop_oneof![
        4 => (0.0..6.0f64).prop_map(Tau::Finite),
        1 => Just(Tau::Infinite),
    ]
}

/// Non-increasing gamma with `gamma(1) = R` and `gamma(k) <= R / k`.
fn mdu_profile(n: usize) -> impl Strategy<Value = GammaProfile> {
    (0.5..3.0f64, prop::collection::vec(0.0..=1.0f64, n - 1)).prop_map(move |(r, shrink)| {
        let mut g = vec![r];
        for (k, s) in (2..=n).zip(shrink) {
            let cap = g[k - 2].min(r / k as f64);
            g.push(cap * s);
        }
        GammaProfile::new(r, g).unwrap()
    })
}

fn any_profile(n: usize) -> impl Strategy<Value = GammaProfile> {
    (0.5..3.0f64, prop::collection::vec(0.0..=1.0f64, n - 1)).prop_map(move |(r, frac)| {
        let mut g = vec![r];
        g.extend((2..=n).zip(frac).map(|(k, f)| f * r / k as f64));
        GammaProfile::new(r, g).unwrap()
    })
}

fn simplex(m: usize) -> impl Strategy<Value = ParticipationVector> {
    prop::collection::vec(0.01..1.0f64, m).prop_map(|w| {
        let s: f64 = w.iter().sum();
        ParticipationVector::new(w.iter().map(|x| x / s).collect()).unwrap()
    })
}

proptest! {
    #[test]
    fn tullock_profiles_are_valid_and_mdu(r in 0.1..10.0f64, tau in tau_strategy(), n in 1usize..=50) {
        let g = tullock_gamma(&TullockSpec::new(r, tau).unwrap(), n).unwrap();
        prop_assert!(is_mdu(&g));
        prop_assert_eq!(g.gamma(1), r);
        for k in 1..=n {
            prop_assert!(g.gamma(k) >= 0.0 && g.gamma(k) <= r / k as f64 + 1e-12);
        }
        if n >= 2 {
            prop_assert_eq!(is_full_rent_dissipation(&g), tau.as_f64() >= 2.0);
        }
    }

    #[test]
    fn tullock_gamma_falls_with_tau(a in 0.0..4.0f64, b in 0.0..4.0f64, n in 2usize..=20) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let g_lo = tullock_gamma(&TullockSpec::new(1.0, Tau::Finite(lo)).unwrap(), n).unwrap();
        let g_hi = tullock_gamma(&TullockSpec::new(1.0, Tau::Finite(hi)).unwrap(), n).unwrap();
        for k in 2..=n {
            prop_assert!(g_hi.gamma(k) <= g_lo.gamma(k) + 1e-15);
        }
    }

    #[test]
    fn full_dissipation_is_always_mrd(others in prop::collection::vec(any_profile(6), 0..5), at in 0usize..5) {
        let apa = tullock_gamma(&TullockSpec::all_pay(others.first().map_or(1.0, |c| c.reward())).unwrap(), 6).unwrap();
        let mut set: Vec<GammaProfile> = others.into_iter().filter(|c| c.reward() == apa.reward()).collect();
        let at = at.min(set.len());
        set.insert(at, apa);
        prop_assert!(mrd_subset(&set).unwrap().contains(&at));
    }

    #[test]
    fn designer_utility_forms_agree(c in any_profile(12), p in 0.0..=1.0f64) {
        let a = designer_utility(&c, p, 12).unwrap();
        let b = ccg_core::designer_utility_direct(&c, p, 12).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn identity_transform_is_beta(g in tau_strategy(), n in 1usize..=15, p in 0.0..=1.0f64) {
        let tau = match g { Tau::Finite(t) => t.min(2.0), Tau::Infinite => 2.0 };
        let c = tullock_gamma(&TullockSpec::new(1.0, Tau::Finite(tau)).unwrap(), n).unwrap();
        prop_assert_eq!(beta_averse(&c, p, n, &RiskProfile::Identity).unwrap(), beta(&c, p, n).unwrap());
    }

    #[test]
    fn solver_output_passes_grid_check(cs in prop::collection::vec(mdu_profile(5), 1..=3)) {
        let eq = solve_symmetric_equilibrium_mdu(&cs, 5).unwrap();
        prop_assert!(grid_verify_participation(&cs, &eq.p, 5, 20).unwrap() <= 1e-8);
    }

    #[test]
    fn grid_gain_matches_vertex_gain((cs, runner_p) in (2usize..=3).prop_flat_map(|m| (prop::collection::vec(any_profile(7), m), simplex(m)))) {
        let betas: Vec<f64> = cs.iter().zip(runner_p.as_slice()).map(|(c, &q)| beta(c, q, 7).unwrap()).collect();
        let current: f64 = betas.iter().zip(runner_p.as_slice()).map(|(b, q)| b * q).sum();
        let best = betas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let gain = grid_verify_participation(&cs, &runner_p, 7, 12).unwrap();
        prop_assert!((gain - (best - current).max(0.0)).abs() <= 1e-12);
    }

    #[test]
    fn pure_equilibria_match_brute_force(cs in prop::collection::vec(any_profile(4), 1..=3)) {
        let m = cs.len();
        let found = enumerate_pure_participation_equilibria(&cs, 4).unwrap();
        let total = m.pow(4);
        for index in 0..total {
            let assignment: Vec<usize> = (0..4).rev().map(|d| index / m.pow(d) % m).collect();
            let listed = found.iter().any(|a| a.assignment == assignment);
            prop_assert_eq!(listed, brute_force_pure_ne_check(&cs, &assignment, 4).unwrap());
        }
    }

    #[test]
    fn social_welfare_below_holder(sets in prop::collection::vec(prop::collection::vec(mdu_profile(4), 1..=2), 2..=3)) {
        let rewards: Vec<f64> = sets.iter().map(|s| s[0].reward()).collect();
        let sets: Vec<Vec<GammaProfile>> = sets
            .into_iter()
            .zip(&rewards)
            .map(|(s, &r)| s.into_iter().filter(|c| c.reward() == r).collect())
            .collect();
        let inst = CcgInstance::new(4, rewards.clone(), sets).unwrap();
        let profile = StrategyProfile::new(vec![0; inst.m()]);
        let report = welfare_of(&inst, &profile, SelectionRule::default()).unwrap();
        prop_assert!(report.social <= holder_bound(&rewards, 4).unwrap() + 1e-9);
        // Contestant welfare is n times the common utility on the support.
        let outcome = ccg_core::evaluate_profile(&inst, &profile).unwrap();
        let sel = outcome.selected(SelectionRule::default());
        prop_assert!((report.contestant - 4.0 * sel.contestant_utility).abs() <= 1e-9);
    }

    #[test]
    fn all_pay_closed_form_attains_holder(rewards in prop::collection::vec(0.2..5.0f64, 2..=4), n in 2usize..=8) {
        let social = |p: &[f64]| -> f64 {
            rewards.iter().zip(p).map(|(r, q)| r * (1.0 - (1.0 - q).powi(n as i32))).sum()
        };
        let bound = holder_bound(&rewards, n).unwrap();
        match frd_closed_form_probabilities(&rewards, n) {
            Ok(p) => prop_assert!((social(p.as_slice()) - bound).abs() <= 1e-9),
            Err(_) => {
                // Some contest is priced out; the true equilibrium falls short of the bound.
                let cs: Vec<GammaProfile> = rewards
                    .iter()
                    .map(|&r| tullock_gamma(&TullockSpec::all_pay(r).unwrap(), n).unwrap())
                    .collect();
                let eq = solve_symmetric_equilibrium_mdu(&cs, n).unwrap();
                prop_assert!(social(eq.p.as_slice()) < bound);
            }
        }
    }
}

#[test]
fn quartic_transform_is_increasing_and_concave() {
    let a = |x: f64| RiskProfile::Quartic.apply(x);
    let h = 1e-3;
    for i in 0..1000 {
        let x = i as f64 * h;
        assert!(a(x + h) > a(x));
        if i >= 1 {
            assert!(a(x + h) - 2.0 * a(x) + a(x - h) <= 0.0);
        }
    }
}

#[test]
fn stderr_shrinks_with_doubled_trials() {
    let c = tullock_gamma(&TullockSpec::new(1.0, Tau::Finite(0.6)).unwrap(), 6).unwrap();
    let small = mc_designer_utility(&c, 0.4, 6, &SimConfig::new(200_000, 9).unwrap()).unwrap();
    let large = mc_designer_utility(&c, 0.4, 6, &SimConfig::new(400_000, 9).unwrap()).unwrap();
    let ratio = small.stderr / large.stderr;
    assert!((ratio - std::f64::consts::SQRT_2).abs() < 0.05, "ratio {ratio}");
}

#[test]
fn contestant_estimate_matches_beta() {
    let c = tullock_gamma(&TullockSpec::new(1.0, Tau::Finite(0.8)).unwrap(), 6).unwrap();
    let contests = [c.clone(), c.clone()];
    let p = ParticipationVector::new(vec![0.5, 0.5]).unwrap();
    let est = mc_contestant_utility(&contests, &p, 6, 0, &SimConfig::new(1_000_000, 3).unwrap()).unwrap();
    assert!(est.agrees_with(beta(&c, 0.5, 6).unwrap(), 4.0));
}

#[test]
fn perturbed_participation_is_not_stable() {
    // All-pay auction that turns into a lottery with five or six participants.
    let c = GammaProfile::new(1.0, vec![1.0, 0.0, 0.0, 0.0, 0.2, 1.0 / 6.0]).unwrap();
    let contests = [c.clone(), c];
    let p = ParticipationVector::new(vec![0.6 / 1.1, 0.5 / 1.1]).unwrap();
    assert!(grid_verify_participation(&contests, &p, 6, 10).unwrap() > 1e-3);
}
