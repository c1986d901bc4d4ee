//! End-to-end reproductions of the worked examples, driven by the bundled
//! scenario files under `data/`.

use ccg_core::{
    brute_force_pure_ne_check, check_wc_minimality, check_ws_maximality, designer_utility, enumerate_equilibria,
    enumerate_pure_participation_equilibria, evaluate_profile, is_dominant, is_equilibrium,
    risk_averse_best_response_scan, solve_two_contest_risk_averse, tau_grid, CcgInstance, PureAssignment,
    SelectionRule, StrategyProfile,
};

use crate::report::{Cell, Report, Table};
use crate::scenario::{Scenario, ScenarioError};

pub const IDS: [&str; 7] = ["ex1", "ex2", "ex-nonmono", "ex-wta", "ex-asym", "ex-risk", "welfare-ex"];

/// Bundled scenario text for `id`.
pub fn fixture_text(id: &str) -> Option<&'static str> {
    Some(match id {
        "ex1" => include_str!("../data/ex1.json"),
        "ex2" => include_str!("../data/ex2.json"),
        "ex-nonmono" => include_str!("../data/ex-nonmono.json"),
        "ex-wta" => include_str!("../data/ex-wta.json"),
        "ex-asym" => include_str!("../data/ex-asym.json"),
        "ex-risk" => include_str!("../data/ex-risk.json"),
        "welfare-ex" => include_str!("../data/welfare-ex.json"),
        _ => return None,
    })
}

pub fn fixture(id: &str) -> Option<Scenario> {
    fixture_text(id).map(|t| Scenario::from_json(t).expect("bundled scenarios are valid"))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Num(f64),
    Bool(bool),
}

/// One published number next to the computed one.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub id: &'static str,
    pub quantity: String,
    pub expected: Value,
    pub computed: Value,
    pub tol: f64,
}

impl Check {
    fn num(id: &'static str, quantity: impl Into<String>, expected: f64, computed: f64, tol: f64) -> Self {
        Self {
            id,
            quantity: quantity.into(),
            expected: Value::Num(expected),
            computed: Value::Num(computed),
            tol,
        }
    }

    fn flag(id: &'static str, quantity: impl Into<String>, expected: bool, computed: bool) -> Self {
        Self {
            id,
            quantity: quantity.into(),
            expected: Value::Bool(expected),
            computed: Value::Bool(computed),
            tol: 0.0,
        }
    }

    pub fn passed(&self) -> bool {
        match (&self.expected, &self.computed) {
            (Value::Num(a), Value::Num(b)) => (a - b).abs() <= self.tol,
            (Value::Bool(a), Value::Bool(b)) => a == b,
            _ => false,
        }
    }
}

fn cell(v: &Value) -> Cell {
    match v {
        Value::Num(x) => Cell::Num(*x),
        Value::Bool(b) => Cell::Bool(*b),
    }
}

pub fn report(checks: &[Check]) -> Report {
    let mut t = Table::new("", &["id", "quantity", "expected", "computed", "tol", "pass"]);
    for c in checks {
        t.push(vec![
            c.id.into(),
            c.quantity.clone().into(),
            cell(&c.expected),
            cell(&c.computed),
            c.tol.into(),
            c.passed().into(),
        ]);
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    let mut r = Report::default().table(t);
    r.note(format!("{} checks, {} failed", checks.len(), failed));
    r
}

const RULE: SelectionRule = SelectionRule::LowestP1;

fn load(id: &str) -> Result<(Scenario, CcgInstance), ScenarioError> {
    let s = fixture(id).expect("known id");
    let inst = s.instance(None)?;
    Ok((s, inst))
}

fn profile(s: &Scenario, text: &str) -> Result<StrategyProfile, ScenarioError> {
    s.parse_profile(text)
}

/// Selected contestant equilibrium and designer utilities at a profile.
fn outcome(inst: &CcgInstance, p: &StrategyProfile) -> Result<(Vec<f64>, Vec<f64>), ScenarioError> {
    let o = evaluate_profile(inst, p)?;
    let sel = o.selected(RULE);
    Ok((sel.equilibrium.p.as_slice().to_vec(), sel.designer_utilities.clone()))
}

/// Runs the checks for one example id.
pub fn run(id: &str) -> Result<Vec<Check>, ScenarioError> {
    match id {
        "ex1" => two_designer_example("ex1", (0.4061, 0.5939), 0.7812, (0.7761, 0.7323)),
        "ex-nonmono" => two_designer_example("ex-nonmono", (0.4125, 0.5875), 0.9658, (0.9607, 0.9509)),
        "ex-wta" => wta(),
        "ex2" => asymmetric_rewards(),
        "welfare-ex" => welfare_example(),
        "ex-asym" => asymmetric_pure(),
        "ex-risk" => risk_averse(),
        _ => unreachable!("unknown id {id}"),
    }
}

fn two_designer_example(
    id: &'static str,
    p_ac: (f64, f64),
    u_cc: f64,
    u_ac: (f64, f64),
) -> Result<Vec<Check>, ScenarioError> {
    let (s, inst) = load(id)?;
    let cc = profile(&s, "C,C")?;
    let ac = profile(&s, "APA,C")?;
    let (_, ucc) = outcome(&inst, &cc)?;
    let (pac, uac) = outcome(&inst, &ac)?;
    let tol = 5e-4;
    Ok(vec![
        Check::num(id, "p_1(APA,C)", p_ac.0, pac[0], tol),
        Check::num(id, "p_2(APA,C)", p_ac.1, pac[1], tol),
        Check::num(id, "u_1(C,C)", u_cc, ucc[0], tol),
        Check::num(id, "u_2(C,C)", u_cc, ucc[1], tol),
        Check::num(id, "u_1(APA,C)", u_ac.0, uac[0], tol),
        Check::num(id, "u_2(APA,C)", u_ac.1, uac[1], tol),
        Check::flag(
            id,
            "(C,C) is an equilibrium",
            true,
            is_equilibrium(&inst, &cc, RULE)?.holds,
        ),
        Check::flag(
            id,
            "APA dominant for designer 1",
            false,
            is_dominant(&inst, 0, 0, RULE)?.dominant,
        ),
    ])
}

fn wta() -> Result<Vec<Check>, ScenarioError> {
    let id = "ex-wta";
    let (s, inst) = load(id)?;
    let (p_apa, u_apa) = outcome(&inst, &profile(&s, "APA,C")?)?;
    let (p_t, u_t) = outcome(&inst, &profile(&s, "T1.2,C")?)?;
    let tol = 5e-6;
    Ok(vec![
        Check::num(id, "p_1(APA,C)", 0.366965, p_apa[0], tol),
        Check::num(id, "p_1(T1.2,C)", 0.519786, p_t[0], tol),
        Check::num(id, "u_1(APA,C)", 0.929759, u_apa[0], tol),
        Check::num(id, "u_1(T1.2,C)", 0.930121, u_t[0], tol),
        Check::flag(id, "u_1(T1.2,C) > u_1(APA,C)", true, u_t[0] > u_apa[0]),
        Check::flag(
            id,
            "APA dominant for designer 1",
            false,
            is_dominant(&inst, 0, 0, RULE)?.dominant,
        ),
    ])
}

fn asymmetric_rewards() -> Result<Vec<Check>, ScenarioError> {
    let id = "ex2";
    let (s, inst) = load(id)?;
    let eqs = enumerate_equilibria(&inst, RULE)?;
    let apa = |d: usize| s.parse_profile("APA,APA,APA").map(|p| p.as_slice()[d]);
    let (a2, a3) = (apa(1)?, apa(2)?);
    let expected: Vec<StrategyProfile> = (0..s.strategy_sets[0].len())
        .map(|c1| StrategyProfile::new(vec![c1, a2, a3]))
        .collect();
    let mut checks = vec![Check::num(id, "R_2 = R_3", 5.0, s.rewards[1], 0.0)];
    checks.push(Check::flag(id, "equilibria = {(C_1,APA,APA)}", true, eqs == expected));
    for e in &expected {
        let (p, _) = outcome(&inst, e)?;
        let label = s.profile_label(e);
        checks.push(Check::num(id, format!("p_1{label}"), 0.0, p[0], 1e-9));
        checks.push(Check::num(id, format!("p_2{label}"), 0.5, p[1], 1e-9));
        checks.push(Check::num(id, format!("p_3{label}"), 0.5, p[2], 1e-9));
    }
    Ok(checks)
}

fn welfare_example() -> Result<Vec<Check>, ScenarioError> {
    let id = "welfare-ex";
    let (s, inst) = load(id)?;
    let social = |text: &str| -> Result<(Vec<f64>, f64), ScenarioError> {
        let o = evaluate_profile(&inst, &profile(&s, text)?)?;
        let sel = o.selected(RULE);
        Ok((sel.equilibrium.p.as_slice().to_vec(), sel.welfare.social))
    };
    let (_, ws_cc) = social("C,C")?;
    let (p_ct, ws_ct) = social("C,T")?;
    let ws = check_ws_maximality(&inst, RULE)?;
    let wc = check_wc_minimality(&inst, RULE)?;
    Ok(vec![
        Check::num(id, "W_S(C,C)", 1.5, ws_cc, 1e-9),
        Check::num(id, "W_S(C,T)", 1441.0 / 961.0, ws_ct, 1e-9),
        Check::num(id, "p_1(C,T)", 16.0 / 31.0, p_ct[0], 1e-9),
        Check::num(id, "p_2(C,T)", 15.0 / 31.0, p_ct[1], 1e-9),
        Check::flag(id, "MRD profile maximises W_S", false, ws.holds),
        Check::flag(id, "MRD profile minimises W_C", true, wc.holds),
    ])
}

fn asymmetric_pure() -> Result<Vec<Check>, ScenarioError> {
    let id = "ex-asym";
    let (s, inst) = load(id)?;
    let p = profile(&s, "T1.5,APA")?;
    let contests = inst.contests(&p);
    let split = PureAssignment::new(vec![0, 0, 1]);
    let found = enumerate_pure_participation_equilibria(&contests, inst.n())?;
    let (_, u_sym) = outcome(&inst, &profile(&s, "APA,APA")?)?;
    Ok(vec![
        Check::flag(
            id,
            "({1,2},{3}) is a pure equilibrium",
            true,
            brute_force_pure_ne_check(&contests, &split.assignment, inst.n())?,
        ),
        Check::flag(id, "({1,2},{3}) enumerated", true, found.contains(&split)),
        Check::num(
            id,
            "u_1 under ({1,2},{3})",
            0.75,
            split.designer_utilities(&contests)[0],
            1e-12,
        ),
        Check::num(id, "u_1(APA,APA) symmetric", 0.5, u_sym[0], 1e-9),
    ])
}

fn risk_averse() -> Result<Vec<Check>, ScenarioError> {
    let id = "ex-risk";
    let (s, inst) = load(id)?;
    let risk = s.risk()?;
    let p = profile(&s, "T1,T2")?;
    let contests = inst.contests(&p);
    let n = inst.n();
    let eqs = solve_two_contest_risk_averse(&contests[0], &contests[1], n, &risk)?;
    let p1 = eqs[0].p[0];
    let u1 = designer_utility(&contests[0], p1, n)?;
    let both2 = risk_averse_best_response_scan(&[2.0], 2.0, n, &risk)?;
    let scan = risk_averse_best_response_scan(&tau_grid(0.0, 2.0, 1e-3), 2.0 / 3.0, n, &risk)?;
    Ok(vec![
        Check::flag(id, "unique participation equilibrium at (T1,T2)", true, eqs.len() == 1),
        Check::num(id, "p_1(T1,T2)", 256.0 / 337.0, p1, 1e-9),
        Check::num(id, "u_1(T1,T2)", 0.288529, u1, 5e-6),
        Check::num(id, "u_1(T2,T2)", 0.25, both2.best_utility, 1e-9),
        Check::flag(id, "u_1(T1,T2) > u_1(T2,T2)", true, u1 > both2.best_utility),
        Check::num(id, "best response to tau = 2/3", 2.0 / 3.0, scan.best_tau, 1e-3),
    ])
}
