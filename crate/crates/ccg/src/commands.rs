//! One function per subcommand. Each returns a [`Report`] plus whether a
//! verification inside it failed.

use ccg_core::oracle::SimConfig;
use ccg_core::{
    beta, brute_force_pure_ne_check, check_wc_minimality, check_ws_maximality, designer_utility, distinct_headcounts,
    enumerate_equilibria, enumerate_pure_with_cap, evaluate_profile, holder_bound, is_dominant, is_equilibrium,
    is_full_rent_dissipation, is_mdu, mc_contestant_utility, mc_designer_utility, pareto_check,
    risk_averse_best_response_scan, support_invariance, tau_grid, CcgInstance, GammaProfile, ProfileOutcome,
    ProfileTable, SelectionRule, StrategyProfile, Tau,
};

use crate::error::CliError;
use crate::format::{ContestSpec, TauJson};
use crate::report::{Cell, Report, Table};
use crate::reproduce;
use crate::scenario::{RiskJson, Scenario};

pub type CmdResult = Result<Outcome, CliError>;

#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub failed: bool,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Self { report, failed: false }
    }
}

/// Global settings shared by every command.
#[derive(Clone, Debug)]
pub struct Context {
    pub scenario: Option<Scenario>,
    pub tol: Option<f64>,
    pub seed: u64,
    pub trials: usize,
}

impl Context {
    fn scenario(&self) -> Result<&Scenario, CliError> {
        self.scenario
            .as_ref()
            .ok_or_else(|| CliError::Parse("this command needs --scenario <path>".into()))
    }

    fn game(&self) -> Result<(&Scenario, CcgInstance, SelectionRule), CliError> {
        let s = self.scenario()?;
        Ok((s, s.instance(self.tol)?, s.selection()))
    }
}

/// The profile named on the command line, or the only profile when every
/// set is a singleton.
fn one_profile(s: &Scenario, inst: &CcgInstance, text: Option<&str>) -> Result<StrategyProfile, CliError> {
    match text {
        Some(t) => Ok(s.parse_profile(t)?),
        None if inst.strategy_sets().iter().all(|set| set.len() == 1) => Ok(StrategyProfile::new(vec![0; inst.m()])),
        None => Err(CliError::Parse("this command needs --profile".into())),
    }
}

pub fn parse_tau(text: &str) -> Result<Tau, CliError> {
    let json = if text == "inf" {
        "\"inf\"".to_owned()
    } else {
        text.to_owned()
    };
    serde_json::from_str::<TauJson>(&json)
        .map(|t| t.0)
        .map_err(|e| CliError::Parse(format!("bad tau {text:?}: {e}")))
}

fn gamma_table(title: String, g: &GammaProfile) -> (Table, String) {
    let mut t = Table::new(title, &["k", "gamma"]);
    for (k, v) in g.values().iter().enumerate() {
        t.push(vec![(k + 1).into(), (*v).into()]);
    }
    let flags = format!(
        "MDU: {}, full rent dissipation: {}",
        is_mdu(g),
        is_full_rent_dissipation(g)
    );
    (t, flags)
}

pub fn gamma(ctx: &Context, tullock: Option<&str>, reward: f64, n: Option<usize>, contest: Option<&str>) -> CmdResult {
    let spec = match (tullock, contest) {
        (Some(_), Some(_)) => return Err(CliError::Parse("give either --tullock or --contest".into())),
        (Some(t), None) => Some(ContestSpec::tullock(reward, parse_tau(t)?)),
        (None, Some(c)) => Some(serde_json::from_str::<ContestSpec>(c)?),
        (None, None) => None,
    };
    let mut report = Report::default();
    match spec {
        Some(spec) => {
            let n = n
                .or(ctx.scenario.as_ref().map(|s| s.n))
                .ok_or_else(|| CliError::Parse("--n is required".into()))?;
            let g = spec.to_profile(n).map_err(|e| CliError::Parse(e.to_string()))?;
            let (t, flags) = gamma_table(String::new(), &g);
            report.tables.push(t);
            report.note(flags);
        }
        None => {
            let s = ctx.scenario()?;
            let inst = s.instance(ctx.tol)?;
            for (d, set) in inst.strategy_sets().iter().enumerate() {
                for (c, g) in set.iter().enumerate() {
                    let (mut t, flags) = gamma_table(String::new(), g);
                    t.title = format!("designer {} / {} ({flags})", d + 1, s.contest_label(d, c));
                    report.tables.push(t);
                }
            }
        }
    }
    Ok(report.into())
}

fn profile_columns(m: usize) -> Vec<String> {
    let mut cols = vec!["profile".to_owned()];
    cols.extend((1..=m).map(|i| format!("p_{i}")));
    cols.extend((1..=m).map(|i| format!("u_{i}")));
    cols.extend(["u_c", "W_D", "W_C", "W_S"].map(String::from));
    cols
}

fn profile_row(s: &Scenario, outcome: &ProfileOutcome, rule: SelectionRule) -> Vec<Cell> {
    let sel = outcome.selected(rule);
    let mut row: Vec<Cell> = vec![s.profile_label(&outcome.profile).into()];
    row.extend(sel.equilibrium.p.as_slice().iter().map(|&x| Cell::Num(x)));
    row.extend(sel.designer_utilities.iter().map(|&x| Cell::Num(x)));
    row.extend(
        [
            sel.contestant_utility,
            sel.welfare.designer,
            sel.welfare.contestant,
            sel.welfare.social,
        ]
        .map(Cell::Num),
    );
    row
}

fn note_alternatives(report: &mut Report, s: &Scenario, outcome: &ProfileOutcome, rule: SelectionRule) {
    if outcome.outcomes.len() < 2 {
        return;
    }
    report.note(format!(
        "{} has {} contestant equilibria ({:?} selected):",
        s.profile_label(&outcome.profile),
        outcome.outcomes.len(),
        rule
    ));
    for o in &outcome.outcomes {
        let p: Vec<String> = o
            .equilibrium
            .p
            .as_slice()
            .iter()
            .map(|x| crate::report::sig6(*x))
            .collect();
        let u: Vec<String> = o.designer_utilities.iter().map(|x| crate::report::sig6(*x)).collect();
        report.note(format!("  p = ({}), u = ({})", p.join(", "), u.join(", ")));
    }
}

pub fn solve(ctx: &Context, profile: Option<&str>) -> CmdResult {
    let (s, inst, rule) = ctx.game()?;
    let outcomes: Vec<ProfileOutcome> = match profile {
        Some(t) => vec![evaluate_profile(&inst, &s.parse_profile(t)?)?],
        None => ProfileTable::build(&inst)?.iter().cloned().collect(),
    };
    let mut t = Table::with_columns("", profile_columns(inst.m()));
    for o in &outcomes {
        t.push(profile_row(s, o, rule));
    }
    let mut report = Report::default().table(t);
    for o in &outcomes {
        note_alternatives(&mut report, s, o, rule);
    }
    Ok(report.into())
}

pub fn equilibria(ctx: &Context) -> CmdResult {
    let (s, inst, rule) = ctx.game()?;
    let eqs = enumerate_equilibria(&inst, rule)?;
    let mut t = Table::with_columns("equilibria", profile_columns(inst.m()));
    let mut report = Report::default();
    let mut outcomes = Vec::new();
    for p in &eqs {
        let o = evaluate_profile(&inst, p)?;
        t.push(profile_row(s, &o, rule));
        outcomes.push(o);
    }
    report.tables.push(t);
    report.note(format!(
        "{} equilibria among {} profiles",
        eqs.len(),
        inst.profile_count()?
    ));
    for o in &outcomes {
        if o.outcomes.len() > 1 {
            let v = is_equilibrium(&inst, &o.profile, rule)?;
            report.note(format!(
                "{}: verdict per contestant equilibrium {:?}",
                s.profile_label(&o.profile),
                v.per_equilibrium
            ));
        }
    }
    if inst.is_all_mdu() && inst.mrd_sets().iter().all(|m| !m.is_empty()) {
        let r = support_invariance(&inst, rule)?;
        let support: Vec<String> = r.support.iter().map(|i| (i + 1).to_string()).collect();
        report.note(format!(
            "support P = {{{}}} at {}",
            support.join(","),
            s.profile_label(&r.reference)
        ));
        report.note(format!(
            "MRD characterization holds: {} (max deviation from reference p: {})",
            r.characterization_holds,
            crate::report::sig6(r.max_deviation)
        ));
    }
    Ok(report.into())
}

pub fn dominance(ctx: &Context) -> CmdResult {
    let (s, inst, rule) = ctx.game()?;
    let mut t = Table::new("", &["designer", "contest", "dominant", "witness", "shortfall"]);
    for d in 0..inst.m() {
        for c in 0..inst.strategy_set(d).len() {
            let v = is_dominant(&inst, d, c, rule)?;
            let (witness, loss) = match &v.witness {
                Some((p, loss)) => (s.profile_label(p), Cell::Num(*loss)),
                None => (String::new(), Cell::Text(String::new())),
            };
            t.push(vec![
                (d + 1).into(),
                s.contest_label(d, c).into(),
                v.dominant.into(),
                witness.into(),
                loss,
            ]);
        }
    }
    Ok(Report::default().table(t).into())
}

pub fn pareto(ctx: &Context, profile: Option<&str>) -> CmdResult {
    let (s, inst, rule) = ctx.game()?;
    let profiles = match profile {
        Some(t) => vec![s.parse_profile(t)?],
        None => enumerate_equilibria(&inst, rule)?,
    };
    let mut t = Table::new("", &["profile", "pareto_optimal", "improvement"]);
    for p in &profiles {
        let v = pareto_check(&inst, p, rule)?;
        let imp = v.improvement.as_ref().map(|q| s.profile_label(q)).unwrap_or_default();
        t.push(vec![s.profile_label(p).into(), v.optimal.into(), imp.into()]);
    }
    Ok(Report::default().table(t).into())
}

pub fn welfare(ctx: &Context, profile: Option<&str>) -> CmdResult {
    let (s, inst, rule) = ctx.game()?;
    let outcomes: Vec<ProfileOutcome> = match profile {
        Some(t) => vec![evaluate_profile(&inst, &s.parse_profile(t)?)?],
        None => ProfileTable::build(&inst)?.iter().cloned().collect(),
    };
    let bound = holder_bound(inst.rewards(), inst.n())?;
    let mut t = Table::new("", &["profile", "W_D", "W_C", "W_S", "holder_bound"]);
    for o in &outcomes {
        let w = o.selected(rule).welfare;
        t.push(vec![
            s.profile_label(&o.profile).into(),
            w.designer.into(),
            w.contestant.into(),
            w.social.into(),
            bound.into(),
        ]);
    }
    let mut report = Report::default().table(t);
    match check_ws_maximality(&inst, rule) {
        Ok(v) => {
            report.note(format!("welfare cases detected: {:?}", v.cases));
            let mrd = v
                .mrd_profile
                .as_ref()
                .map_or_else(|| "none".to_owned(), |p| s.profile_label(p));
            report.note(format!(
                "MRD profile {mrd} maximises W_S: {} (max {} at {})",
                v.holds,
                crate::report::sig6(v.max_social),
                s.profile_label(&v.argmax_profile)
            ));
        }
        Err(e) => report.note(format!("W_S check not applicable: {e}")),
    }
    match check_wc_minimality(&inst, rule) {
        Ok(v) => report.note(format!(
            "MRD profile {} minimises W_C: {} (margin {})",
            s.profile_label(&v.mrd_profile),
            v.holds,
            crate::report::sig6(v.margin)
        )),
        Err(e) => report.note(format!("W_C check not applicable: {e}")),
    }
    Ok(report.into())
}

pub struct RiskArgs<'a> {
    pub taus: Option<&'a [f64]>,
    pub opponent_tau: f64,
    pub step: f64,
    pub n: Option<usize>,
    pub risk: Option<&'a str>,
    pub curve: bool,
}

fn parse_risk(text: &str) -> Result<RiskJson, CliError> {
    serde_json::from_str::<RiskJson>(text)
        .or_else(|_| serde_json::from_str::<RiskJson>(&format!("\"{text}\"")))
        .map_err(|_| {
            CliError::Parse(format!(
                "bad risk profile {text:?}: use identity, quartic or {{\"poly\": [..]}}"
            ))
        })
}

pub fn risk(ctx: &Context, args: &RiskArgs) -> CmdResult {
    let risk = match (args.risk, &ctx.scenario) {
        (Some(text), _) => parse_risk(text)?.to_profile()?,
        (None, Some(s)) => s.risk()?,
        (None, None) => ccg_core::RiskProfile::Identity,
    };
    let n = args.n.or(ctx.scenario.as_ref().map(|s| s.n)).unwrap_or(2);
    let grid;
    let taus = match args.taus {
        Some(t) => t,
        None => {
            grid = tau_grid(0.0, 2.0, args.step);
            &grid
        }
    };
    let scan = risk_averse_best_response_scan(taus, args.opponent_tau, n, &risk)?;
    let mut t = Table::new("", &["tau", "p_1", "u_1"]);
    let show_all = args.curve || args.taus.is_some();
    for pt in &scan.curve {
        if show_all || pt.tau == scan.best_tau {
            t.push(vec![pt.tau.into(), pt.p1.into(), pt.utility.into()]);
        }
    }
    let mut report = Report::default().table(t);
    report.note(format!(
        "best response to tau = {} over {} grid points: tau = {} with u_1 = {}",
        crate::report::sig6(args.opponent_tau),
        taus.len(),
        crate::report::sig6(scan.best_tau),
        crate::report::sig6(scan.best_utility)
    ));
    Ok(report.into())
}

fn assignment_label(assignment: &[usize], m: usize) -> String {
    let groups: Vec<String> = (0..m)
        .map(|c| {
            let members: Vec<String> = assignment
                .iter()
                .enumerate()
                .filter(|&(_, &a)| a == c)
                .map(|(l, _)| (l + 1).to_string())
                .collect();
            format!("{{{}}}", members.join(","))
        })
        .collect();
    format!("({})", groups.join(","))
}

pub fn pure_ne(ctx: &Context, profile: Option<&str>) -> CmdResult {
    let (s, inst, _) = ctx.game()?;
    let p = one_profile(s, &inst, profile)?;
    inst.validate_profile(&p)?;
    let contests = inst.contests(&p);
    let m = inst.m();
    let found = enumerate_pure_with_cap(&contests, inst.n(), inst.cap())?;
    let mut cols = vec!["assignment".to_owned(), "headcounts".to_owned()];
    cols.extend((1..=m).map(|i| format!("u_{i}")));
    cols.push("brute_force".to_owned());
    let mut t = Table::with_columns(
        format!("pure participation equilibria at {}", s.profile_label(&p)),
        cols,
    );
    let mut failed = false;
    for a in &found {
        let confirmed = brute_force_pure_ne_check(&contests, &a.assignment, inst.n())?;
        failed |= !confirmed;
        let counts: Vec<String> = a.headcounts(m).iter().map(usize::to_string).collect();
        let mut row: Vec<Cell> = vec![assignment_label(&a.assignment, m).into(), counts.join("/").into()];
        row.extend(a.designer_utilities(&contests).into_iter().map(Cell::Num));
        row.push(confirmed.into());
        t.push(row);
    }
    let mut report = Report::default().table(t);
    report.note(format!(
        "{} labelled assignments, {} up to relabelling contestants",
        found.len(),
        distinct_headcounts(&found, m).len()
    ));
    Ok(Outcome { report, failed })
}

pub fn oracle(ctx: &Context, profile: Option<&str>) -> CmdResult {
    let (s, inst, rule) = ctx.game()?;
    let prof = one_profile(s, &inst, profile)?;
    let outcome = evaluate_profile(&inst, &prof)?;
    let p = &outcome.selected(rule).equilibrium.p;
    let contests = inst.contests(&prof);
    let n = inst.n();
    let cfg = SimConfig::new(ctx.trials, ctx.seed)?;
    let mut t = Table::new(
        format!(
            "{} at {} ({} trials, seed {})",
            "analytic vs simulated",
            s.profile_label(&prof),
            cfg.trials,
            cfg.seed
        ),
        &["quantity", "analytic", "estimate", "stderr", "z", "pass"],
    );
    let mut failed = false;
    let mut push = |name: String, analytic: f64, est: ccg_core::Estimate| {
        let diff = est.mean - analytic;
        let z = if est.stderr > 0.0 {
            diff / est.stderr
        } else if diff.abs() <= 1e-12 {
            0.0
        } else {
            f64::INFINITY
        };
        let pass = z.abs() <= 4.0;
        failed |= !pass;
        t.push(vec![
            name.into(),
            analytic.into(),
            est.mean.into(),
            est.stderr.into(),
            z.into(),
            pass.into(),
        ]);
    };
    for (i, c) in contests.iter().enumerate() {
        let pi = p[i];
        push(
            format!("beta_{}", i + 1),
            beta(c, pi, n)?,
            mc_contestant_utility(&contests, p, n, i, &cfg)?,
        );
        push(
            format!("u_{}", i + 1),
            designer_utility(c, pi, n)?,
            mc_designer_utility(c, pi, n, &cfg)?,
        );
    }
    let mut report = Report::default().table(t);
    report.note("a quantity fails when the estimate is more than 4 standard errors from the analytic value");
    Ok(Outcome { report, failed })
}

pub fn reproduce(id: &str) -> CmdResult {
    let ids: Vec<&str> = if id == "all" {
        reproduce::IDS.to_vec()
    } else if reproduce::IDS.contains(&id) {
        vec![id]
    } else {
        return Err(CliError::Parse(format!(
            "unknown example {id:?}; known: all, {}",
            reproduce::IDS.join(", ")
        )));
    };
    let mut checks = Vec::new();
    for id in ids {
        checks.extend(reproduce::run(id)?);
    }
    let failed = checks.iter().any(|c| !c.passed());
    Ok(Outcome {
        report: reproduce::report(&checks),
        failed,
    })
}
