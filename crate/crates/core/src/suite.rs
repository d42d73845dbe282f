//! Named verification suites: the axiom corpus, order lemmas, least-number
//! conditions, number-theoretic conditions, collection, and a differential
//! check of the two evaluators. Conditions live in corpus files shipped with
//! the crate; per-label horizons live here.

use std::collections::BTreeMap;

use num::{BigUint, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::analysis::{
    induction_constant, make_induction_condition, make_induction_condition_weak, value_range,
    AnalysisError,
};
use crate::eval::{
    check_condition, eval, eval_product_oracle, eval_std, eval_std_clamped, CheckOpts,
    CheckReport, Environment, EvalError, DEFAULT_FRONTIER_CAP,
};
use crate::model::{Element, Model};
use crate::parser::{parse_condition, parse_formula, ParseError};
use crate::rat::{format_rat, Rat};
use crate::sample::{random_formula, rng};
use crate::syntax::{fresh_name, Condition, Formula, Term};

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error("corpus entry '{0}': {1}")]
    Corpus(String, ParseError),
    #[error("corpus stanza without a '# label' header")]
    MissingLabel,
    #[error("duplicate label '{0}'")]
    DuplicateLabel(String),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Model(#[from] crate::model::ModelError),
    #[error("inner bound {0} exceeds horizon {1}")]
    BoundExceedsHorizon(u64, u64),
}

#[derive(Debug, Clone)]
pub struct SuiteItem {
    pub label: String,
    pub condition: Condition,
    pub horizon: u64,
    pub closure_horizon: u64,
}

#[derive(Debug, Clone)]
pub struct Suite {
    pub name: String,
    pub items: Vec<SuiteItem>,
}

#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub model: String,
    pub pass: bool,
    pub reports: Vec<CheckReport>,
}

pub const SUITE_NAMES: [&str; 6] =
    ["axioms", "order", "lnp", "numbertheory", "collection", "integral"];

const AXIOMS_CORPUS: &str = include_str!("../corpus/axioms.corpus");
const ORDER_CORPUS: &str = include_str!("../corpus/order.corpus");
const NT_CORPUS: &str = include_str!("../corpus/numbertheory.corpus");
const INDUCTION_CORPUS: &str = include_str!("../corpus/induction_formulas.corpus");
const COLLECTION_CORPUS: &str = include_str!("../corpus/collection.corpus");

/// Stanza format: a `# label` line followed by the entry's text; blank lines
/// are ignored.
pub fn parse_corpus(text: &str) -> Result<Vec<(String, String)>, SuiteError> {
    let mut out: Vec<(String, String)> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(label) = line.strip_prefix('#') {
            let label = label.trim().to_string();
            if out.iter().any(|(l, _)| *l == label) {
                return Err(SuiteError::DuplicateLabel(label));
            }
            out.push((label, String::new()));
        } else {
            let (label, body) = out.last_mut().ok_or(SuiteError::MissingLabel)?;
            let _ = label;
            if !body.is_empty() {
                body.push(' ');
            }
            body.push_str(line);
        }
    }
    if out.iter().any(|(_, b)| b.is_empty()) {
        return Err(SuiteError::MissingLabel);
    }
    Ok(out)
}

pub fn corpus_conditions(text: &str) -> Result<Vec<(String, Condition)>, SuiteError> {
    parse_corpus(text)?
        .into_iter()
        .map(|(l, b)| match parse_condition(&b) {
            Ok(c) => Ok((l, c)),
            Err(e) => Err(SuiteError::Corpus(l, e)),
        })
        .collect()
}

/// The twelve step-formula fixtures used by the induction and least-number
/// suites; each has induction variable `x` and parameters among `y`, `z`.
pub fn induction_formulas() -> Vec<(String, Formula)> {
    parse_corpus(INDUCTION_CORPUS)
        .expect("fixture corpus")
        .into_iter()
        .map(|(l, b)| (l, parse_formula(&b).expect("fixture formula")))
        .collect()
}

fn labeled(items: Vec<(String, Condition)>, horizon: u64, closure: u64) -> Vec<SuiteItem> {
    items
        .into_iter()
        .map(|(label, condition)| SuiteItem {
            label,
            condition,
            horizon,
            closure_horizon: closure,
        })
        .collect()
}

fn axioms_suite() -> Result<Suite, SuiteError> {
    let mut items = labeled(corpus_conditions(AXIOMS_CORPUS)?, 10, 8);
    for (label, f) in induction_formulas() {
        items.push(SuiteItem {
            label: format!("A11.{label}"),
            condition: make_induction_condition(&f, "x")?,
            horizon: 12,
            closure_horizon: 8,
        });
        items.push(SuiteItem {
            label: format!("A12.{label}"),
            condition: make_induction_condition_weak(&f, "x")?,
            horizon: 12,
            closure_horizon: 8,
        });
    }
    Ok(Suite { name: "axioms".into(), items })
}

fn order_suite() -> Result<Suite, SuiteError> {
    Ok(Suite { name: "order".into(), items: labeled(corpus_conditions(ORDER_CORPUS)?, 10, 8) })
}

/// `sup t≤z (φ[x:=t] + λ·d(t, z))` — the guarded-maximum block shared by the
/// least-number conditions.
fn lnp_inner(f: &Formula, var: &str, z: &Term, lambda: &Rat) -> Formula {
    let mut avoid = f.free_vars();
    avoid.extend(z.free_vars());
    avoid.insert(var.to_string());
    let t = fresh_name("t", &avoid);
    let capped = Term::meet(Term::var(&t), z.clone());
    let body = Formula::add(
        f.substitute(var, &capped),
        Formula::scale(lambda.clone(), Formula::dist(capped, z.clone())),
    );
    Formula::sup(&t, body)
}

/// Least-number condition (existence of a λ-separated least maximizer):
/// `sup x φ ≤ sup x (2φ − sup t≤x (φ[x:=t] + λ d(t,x)))` with λ the least
/// gap of the formula's classical value range.
pub fn lnp_condition(f: &Formula, var: &str) -> Result<Condition, AnalysisError> {
    let lambda = value_range(f)?.least_gap();
    let bracket = Formula::sub(
        Formula::scale(crate::rat::rat_int(2), f.clone()),
        lnp_inner(f, var, &Term::var(var), &lambda),
    );
    Ok(Condition::new(Formula::sup(var, f.clone()), Formula::sup(var, bracket)))
}

/// The defect `ψ(z,ȳ) = sup x φ − (2φ[x:=z] − sup t≤z (φ[x:=t] + λ d(t,z)))`,
/// zero exactly at the least maximizer.
pub fn lnp_defect(f: &Formula, var: &str, zvar: &str) -> Result<Formula, AnalysisError> {
    let lambda = value_range(f)?.least_gap();
    let z = Term::var(zvar);
    let bracket =
        Formula::sub(Formula::scale(crate::rat::rat_int(2), f.substitute(var, &z)), lnp_inner(f, var, &z, &lambda));
    Ok(Formula::sub(Formula::sup(var, f.clone()), bracket))
}

/// Uniqueness condition `r·d(z,u) ≤ ψ(z,ȳ) + ψ(u,ȳ)` with r a positive
/// rational below every positive value ψ can take (0 when its range has no
/// positive values, making the condition vacuous).
pub fn lnp_uniqueness_condition(f: &Formula, var: &str) -> Result<Condition, AnalysisError> {
    let mut avoid = f.free_vars();
    avoid.insert(var.to_string());
    let zv = fresh_name("z", &avoid);
    avoid.insert(zv.clone());
    let uv = fresh_name("u", &avoid);
    let psi_z = lnp_defect(f, var, &zv)?;
    let psi_u = lnp_defect(f, var, &uv)?;
    let r = value_range(&psi_z)?.least_positive().unwrap_or_else(Rat::zero);
    Ok(Condition::new(
        Formula::scale(r, Formula::dist(Term::var(&zv), Term::var(&uv))),
        Formula::add(psi_z, psi_u),
    ))
}

fn lnp_suite() -> Result<Suite, SuiteError> {
    let mut items = Vec::new();
    for (label, f) in induction_formulas() {
        items.push(SuiteItem {
            label: format!("lnp.star.{label}"),
            condition: lnp_condition(&f, "x")?,
            horizon: 8,
            closure_horizon: 5,
        });
        items.push(SuiteItem {
            label: format!("lnp.unique.{label}"),
            condition: lnp_uniqueness_condition(&f, "x")?,
            horizon: 8,
            closure_horizon: 5,
        });
    }
    Ok(Suite { name: "lnp".into(), items })
}

fn nt_suite() -> Result<Suite, SuiteError> {
    // witnesses grow with different label-specific rates; a flat horizon
    // either misses them or blows the runtime budget
    let horizons: BTreeMap<&str, (u64, u64)> = BTreeMap::from([
        ("division.exists", (14, 12)),
        ("division.unique", (8, 8)),
        ("coprime.theta_nonneg", (10, 8)),
        ("bezout.exists", (12, 8)),
        ("crt.pair", (14, 3)),
        ("irred_eq_prime.le", (26, 10)),
        ("irred_eq_prime.ge", (26, 10)),
        ("primes.unbounded", (16, 6)),
        ("divisor.exists", (14, 12)),
        ("sqrt2.lower", (30, 0)),
        ("sqrt2.upper", (30, 0)),
        ("even.product", (28, 7)),
        ("pairing.surjective", (12, 10)),
        ("pairing.injective", (1, 8)),
        ("coding.i", (10, 8)),
        ("coding.iii", (6, 5)),
    ]);
    let items = corpus_conditions(NT_CORPUS)?
        .into_iter()
        .map(|(label, condition)| {
            let &(horizon, closure_horizon) =
                horizons.get(label.as_str()).unwrap_or(&(10, 8));
            SuiteItem { label, condition, horizon, closure_horizon }
        })
        .collect();
    Ok(Suite { name: "numbertheory".into(), items })
}

fn collection_suite() -> Result<Suite, SuiteError> {
    Ok(Suite {
        name: "collection".into(),
        items: labeled(corpus_conditions(COLLECTION_CORPUS)?, 8, 6),
    })
}

pub fn build_suite(name: &str) -> Result<Suite, SuiteError> {
    match name {
        "axioms" => axioms_suite(),
        "order" => order_suite(),
        "lnp" => lnp_suite(),
        "numbertheory" => nt_suite(),
        "collection" => collection_suite(),
        // the integral suite has no stored conditions; run_suite handles it
        "integral" => Ok(Suite { name: "integral".into(), items: Vec::new() }),
        other => Err(SuiteError::UnknownSuite(other.to_string())),
    }
}

pub fn builtin_suites() -> Vec<Suite> {
    SUITE_NAMES.iter().map(|n| build_suite(n).expect("builtin suite")).collect()
}

fn synthetic_report(label: &str, model: &Model, horizon: u64, violation: Rat) -> CheckReport {
    CheckReport {
        label: Some(label.to_string()),
        condition: label.to_string(),
        model: model.to_string(),
        horizon,
        max_violation: format_rat(&violation),
        witness: BTreeMap::new(),
        points_checked: 0,
        violation,
        exhaustive: true,
    }
}

/// Differential check of the coordinatewise evaluator against the
/// tuple-enumerating oracle: seeded random formulas plus the induction
/// fixtures, each over a grid of small environments. The reported violation
/// is the largest absolute difference observed (0 = the evaluators agree).
fn run_integral(model: &Model) -> Result<Vec<CheckReport>, SuiteError> {
    const HORIZON: u64 = 3;
    let mut reports = Vec::new();
    let envs = small_envs(model, 2);

    let mut worst = Rat::zero();
    let mut r = rng(0xAF71);
    for _ in 0..40 {
        let f = random_formula(&mut r, 3, &["x", "y"]);
        for env in &envs {
            let a = eval(&f, env, model, HORIZON, DEFAULT_FRONTIER_CAP)?;
            let b = eval_product_oracle(&f, env, model, HORIZON, DEFAULT_FRONTIER_CAP)?;
            worst = worst.max((a.value - b.value).abs());
        }
    }
    reports.push(synthetic_report("integral.random", model, HORIZON, worst));

    let mut worst = Rat::zero();
    for (_, f) in induction_formulas() {
        for env in &envs {
            let mut env = env.clone();
            env.insert("z".into(), env["y"].clone());
            let a = eval(&f, &env, model, HORIZON, DEFAULT_FRONTIER_CAP)?;
            let b = eval_product_oracle(&f, &env, model, HORIZON, DEFAULT_FRONTIER_CAP)?;
            worst = worst.max((a.value - b.value).abs());
        }
    }
    reports.push(synthetic_report("integral.fixtures", model, HORIZON, worst));
    Ok(reports)
}

/// All environments binding x and y to elements with coordinates ≤ `bound`.
fn small_envs(model: &Model, bound: u64) -> Vec<Environment> {
    let pts = model.enumerate(bound, 10_000).expect("small enumeration");
    let mut out = Vec::new();
    for a in &pts {
        for b in &pts {
            let mut env = Environment::new();
            env.insert("x".into(), a.clone());
            env.insert("y".into(), b.clone());
            out.push(env);
        }
    }
    out
}

pub fn run_suite(
    name: &str,
    model: &Model,
    horizon_override: Option<u64>,
    closure_override: Option<u64>,
) -> Result<SuiteReport, SuiteError> {
    let suite = build_suite(name)?;
    let mut reports = if name == "integral" {
        run_integral(model)?
    } else {
        let mut out = Vec::with_capacity(suite.items.len());
        for item in &suite.items {
            let opts = CheckOpts::new(
                horizon_override.unwrap_or(item.horizon),
                closure_override.unwrap_or(item.closure_horizon),
            );
            let mut r = check_condition(&item.condition, model, &opts)?;
            r.label = Some(item.label.clone());
            out.push(r);
        }
        out
    };
    if name == "numbertheory" {
        reports.extend(nt_witness_reports(model)?);
    }
    if name == "order" {
        reports.push(linearity_report(model)?);
    }
    let pass = reports.iter().all(|r| r.holds());
    Ok(SuiteReport { suite: suite.name, model: model.to_string(), pass, reports })
}

/// Coding statements whose existential witnesses (β-codes) dwarf any usable
/// quantifier horizon: the witness is constructed outright and the residual
/// distance at it is reported.
fn nt_witness_reports(model: &Model) -> Result<Vec<CheckReport>, SuiteError> {
    use crate::nt;
    let k = model.arity();
    let diag = |n: u64| Element(vec![BigUint::from(n); k]);

    let mut worst = Rat::zero();
    for (x, y, z) in [(3, 30, 1), (7, 38, 2), (0, 52, 3), (9, 107, 2)] {
        let r = nt::check_coding_extension(model, &diag(x), &diag(y), z)
            .expect("witness construction");
        worst = worst.max(r);
    }
    let coding_ii = synthetic_report("coding.ii.witness", model, 0, worst);

    let mut worst = Rat::zero();
    for items in [vec![3u64, 1, 4], vec![0, 0, 2, 7], vec![5]] {
        let items: Vec<Element> = items.into_iter().map(diag).collect();
        let r = nt::check_sequence_coding(model, &items).expect("witness construction");
        worst = worst.max(r);
    }
    let godel = synthetic_report("godel.witness", model, 0, worst);

    let mut worst = Rat::zero();
    for x in [0u64, 1, 4, 6] {
        worst = worst.max(nt::check_factorial_history(model, x).expect("witness construction"));
    }
    let factorial = synthetic_report("factorial.history", model, 0, worst);

    Ok(vec![coding_ii, godel, factorial])
}

/// A model is linear when any two elements are comparable (x ∧ y is one of
/// them). That holds exactly for the single-coordinate models; the observed
/// comparability of all small pairs must match that prediction.
fn linearity_report(model: &Model) -> Result<CheckReport, SuiteError> {
    let predicted = model.arity() == 1;
    let pts = model.enumerate(4, DEFAULT_FRONTIER_CAP)?;
    let mut observed = true;
    for a in &pts {
        for b in &pts {
            let m = model.meet(a, b);
            observed &= m == *a || m == *b;
        }
    }
    let violation = if observed == predicted { Rat::zero() } else { crate::rat::rat_int(1) };
    let mut r = synthetic_report("linearity.characterization", model, 4, violation);
    r.points_checked = (pts.len() * pts.len()) as u64;
    Ok(r)
}

// ---------------------------------------------------------------------------
// Least-maximizer search.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeastMaximizer {
    pub maximizer: Element,
    pub value: Rat,
    /// True when the maximizer set has a coordinatewise minimum (it is then
    /// the reported element).
    pub unique_minimum: bool,
}

fn le_elem(a: &Element, b: &Element) -> bool {
    a.0.iter().zip(&b.0).all(|(x, y)| x <= y)
}

/// Searches `0..=horizon` (all coordinates) for points maximizing `f` in
/// `var` under `params`, in graded lexicographic order, and looks for the
/// coordinatewise-least one.
pub fn least_maximizer(
    f: &Formula,
    var: &str,
    params: &Environment,
    model: &Model,
    horizon: u64,
) -> Result<LeastMaximizer, EvalError> {
    let mut pts = model.enumerate(horizon, DEFAULT_FRONTIER_CAP).map_err(|_| {
        EvalError::FrontierCap("maximizer search".into(), DEFAULT_FRONTIER_CAP)
    })?;
    pts.sort_by_key(|e| (e.0.iter().fold(BigUint::zero(), |s, c| s + c), e.0.clone()));
    let mut env = params.clone();
    let mut best: Option<(Rat, Vec<Element>)> = None;
    for p in pts {
        env.insert(var.to_string(), p.clone());
        let v = eval(f, &env, model, horizon, DEFAULT_FRONTIER_CAP)?.value;
        match &mut best {
            None => best = Some((v, vec![p])),
            Some((bv, wit)) => {
                if v > *bv {
                    *bv = v;
                    *wit = vec![p];
                } else if v == *bv {
                    wit.push(p);
                }
            }
        }
    }
    let (value, maximizers) = best.expect("nonempty enumeration");
    let least = maximizers.iter().find(|a| maximizers.iter().all(|b| le_elem(a, b)));
    Ok(match least {
        Some(a) => LeastMaximizer { maximizer: a.clone(), value, unique_minimum: true },
        None => LeastMaximizer {
            maximizer: maximizers[0].clone(),
            value,
            unique_minimum: false,
        },
    })
}

// ---------------------------------------------------------------------------
// Extension checks: the truncated initial segment {x : x ≤ b·(1,…,1)} inside
// a weighted power.

#[derive(Debug, Serialize)]
pub struct FormulaAgreement {
    pub formula: String,
    pub agree: bool,
}

#[derive(Debug, Serialize)]
pub struct ExtensionReport {
    pub outer: String,
    pub inner_bound: u64,
    pub horizon: u64,
    /// Inner set is closed downward in the outer coordinatewise order.
    pub downward_closed: bool,
    /// Bounded formulas must take the same value whether quantifier
    /// frontiers range over the inner segment or the outer model.
    pub sigma0: Vec<FormulaAgreement>,
    /// Unbounded-quantifier formulas may genuinely disagree; informational.
    pub sigma1: Vec<FormulaAgreement>,
    pub pass: bool,
}

const SIGMA0_FIXTURES: [&str; 4] = [
    "d(x, y)",
    "sup q <= x . d(q + q, y)",
    "inf q <= y . d(x, q * q)",
    "d(x /\\ y, x) - 1/2",
];

const SIGMA1_FIXTURES: [&str; 2] = ["sup q . d(q, x + y)", "inf q . d(q, x + y) - d(q, 0)"];

pub fn extension_check(
    outer: &Model,
    inner_bound: u64,
    horizon: u64,
) -> Result<ExtensionReport, SuiteError> {
    if inner_bound > horizon {
        return Err(SuiteError::BoundExceedsHorizon(inner_bound, horizon));
    }
    let bound = BigUint::from(inner_bound);
    let in_inner = |e: &Element| e.0.iter().all(|c| *c <= bound);

    // downward closure: anything under an inner element is inner
    let pts = outer.enumerate(horizon, DEFAULT_FRONTIER_CAP)?;
    let inner_pts: Vec<&Element> = pts.iter().filter(|e| in_inner(e)).collect();
    let mut downward_closed = true;
    for a in &inner_pts {
        for b in &pts {
            if le_elem(b, a) && !in_inner(b) {
                downward_closed = false;
            }
        }
    }

    let agreement = |src: &str| -> Result<FormulaAgreement, SuiteError> {
        let f = parse_formula(src).expect("fixture formula");
        let mut agree = true;
        for a in &inner_pts {
            for b in &inner_pts {
                let mut full = Rat::zero();
                let mut clamped = Rat::zero();
                for (i, w) in outer.weights().iter().enumerate() {
                    let mut env = BTreeMap::new();
                    env.insert("x".to_string(), a.0[i].clone());
                    env.insert("y".to_string(), b.0[i].clone());
                    full += w * eval_std(&f, &mut env, horizon, DEFAULT_FRONTIER_CAP)?.value;
                    clamped += w * eval_std_clamped(
                        &f,
                        &mut env,
                        horizon,
                        DEFAULT_FRONTIER_CAP,
                        inner_bound,
                    )?
                    .value;
                }
                agree &= full == clamped;
            }
        }
        Ok(FormulaAgreement { formula: src.to_string(), agree })
    };

    let sigma0 = SIGMA0_FIXTURES.iter().map(|s| agreement(s)).collect::<Result<Vec<_>, _>>()?;
    let sigma1 = SIGMA1_FIXTURES.iter().map(|s| agreement(s)).collect::<Result<Vec<_>, _>>()?;
    let pass = downward_closed && sigma0.iter().all(|a| a.agree);
    Ok(ExtensionReport {
        outer: outer.to_string(),
        inner_bound,
        horizon,
        downward_closed,
        sigma0,
        sigma1,
        pass,
    })
}

/// α for every induction fixture, exposed for reporting.
pub fn fixture_alphas() -> Vec<(String, Rat)> {
    induction_formulas()
        .into_iter()
        .map(|(l, f)| {
            let a = induction_constant(&f).expect("fixture range");
            (l, a)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Ultracharge;
    use crate::rat::rat_int;

    #[test]
    fn corpus_parses_and_round_trips() {
        for text in [AXIOMS_CORPUS, ORDER_CORPUS, NT_CORPUS, COLLECTION_CORPUS] {
            for (label, c) in corpus_conditions(text).unwrap() {
                let printed = c.to_string();
                let again = parse_condition(&printed)
                    .unwrap_or_else(|e| panic!("{label}: {printed}: {e}"));
                assert_eq!(again, c, "{label}");
            }
        }
        assert_eq!(induction_formulas().len(), 12);
    }

    #[test]
    fn corpus_stanza_errors() {
        assert!(matches!(parse_corpus("d(0,0) <= 0"), Err(SuiteError::MissingLabel)));
        assert!(matches!(
            parse_corpus("# a\nd(0,0) <= 0\n# a\nd(0,0) <= 0"),
            Err(SuiteError::DuplicateLabel(_))
        ));
        let two_line = parse_corpus("# a\nd(0,\n0) <= 0").unwrap();
        assert_eq!(two_line[0].1, "d(0, 0) <= 0");
    }

    #[test]
    fn builtin_suite_inventory() {
        let suites = builtin_suites();
        assert_eq!(suites.len(), 6);
        let axioms = &suites[0];
        assert!(axioms.items.len() >= 10 + 24);
        let mut labels: Vec<_> = axioms.items.iter().map(|i| &i.label).collect();
        let n = labels.len();
        labels.dedup();
        assert_eq!(labels.len(), n);
    }

    #[test]
    fn corrupted_condition_fails_with_witness() {
        let c = parse_condition("d(0, 1) <= 0").unwrap();
        let r = check_condition(&c, &Model::Standard, &CheckOpts::new(2, 2)).unwrap();
        assert!(!r.holds());
        assert_eq!(r.violation, rat_int(1));
    }

    #[test]
    fn least_maximizer_basic() {
        // φ(x) = d(x ∧ 3, 3): maximized (value 1) on x < 3, least is 0
        let f = parse_formula("d(x /\\ (1 + 1 + 1), 1 + 1 + 1)").unwrap();
        let r =
            least_maximizer(&f, "x", &Environment::new(), &Model::Standard, 6).unwrap();
        assert!(r.unique_minimum);
        assert_eq!(r.maximizer, Element::from_u64s(&[0]));
        assert_eq!(r.value, rat_int(1));
    }

    #[test]
    fn extension_sigma0_agreement() {
        let m = Model::Powermean(Ultracharge::uniform(2));
        let r = extension_check(&m, 3, 5).unwrap();
        assert!(r.pass);
        assert!(r.downward_closed);
        assert!(r.sigma0.iter().all(|a| a.agree));
        // the sup-quantified fixture genuinely sees more outside the segment
        assert!(r.sigma1.iter().any(|a| !a.agree));
        assert!(extension_check(&m, 9, 5).is_err());
    }
}
