//! Formula evaluation and condition checking.
//!
//! Values are exact rationals. Quantifiers over an infinite domain are
//! truncated at a horizon; the `exhaustive` flag records whether any
//! truncation happened. A quantifier whose variable only occurs capped as
//! `x ∧ t` (the bounded form) is enumerated exactly up to the cap and does
//! not cost exhaustiveness.
//!
//! Over a weighted power the value of any formula is the weighted average of
//! its coordinatewise values in ℕ, because every operation, the metric, and
//! box suprema all decompose per coordinate. `eval` exploits this; the
//! slower `eval_product_oracle` enumerates genuine tuples and exists to
//! cross-check it.

use std::collections::BTreeMap;

use num::{BigUint, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::model::{Element, Model};
use crate::rat::{format_rat, rat_int, Rat};
use crate::syntax::{Condition, Formula, QuantifierPattern, Term};

pub const DEFAULT_FRONTIER_CAP: u64 = 1_000_000;

/// Assignment of model elements to free variables.
pub type Environment = BTreeMap<String, Element>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("unbound variable '{0}'")]
    Unbound(String),
    #[error("quantifier frontier of {0} points exceeds cap {1}")]
    FrontierCap(String, u64),
    #[error("environment binds '{var}' to arity {got}, model has arity {want}")]
    Arity { var: String, got: usize, want: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalResult {
    pub value: Rat,
    /// True when no quantifier was truncated at the horizon.
    pub exhaustive: bool,
}

/// Term value in ℕ under a scalar environment.
fn term_value(t: &Term, env: &BTreeMap<String, BigUint>) -> Result<BigUint, EvalError> {
    Ok(match t {
        Term::Var(v) => env.get(v).ok_or_else(|| EvalError::Unbound(v.clone()))?.clone(),
        Term::Zero => BigUint::zero(),
        Term::One => BigUint::from(1u32),
        Term::Sum(a, b) => term_value(a, env)? + term_value(b, env)?,
        Term::Product(a, b) => term_value(a, env)? * term_value(b, env)?,
        Term::Meet(a, b) => term_value(a, env)?.min(term_value(b, env)?),
        Term::Join(a, b) => term_value(a, env)?.max(term_value(b, env)?),
    })
}

/// Evaluation in the standard model. `horizon` truncates unbounded
/// quantifiers at `0..=horizon`; `cap` limits any single frontier.
pub fn eval_std(
    f: &Formula,
    env: &mut BTreeMap<String, BigUint>,
    horizon: u64,
    cap: u64,
) -> Result<EvalResult, EvalError> {
    eval_std_go(f, env, horizon, cap, None)
}

/// Like `eval_std` but every quantifier frontier is additionally clamped to
/// `0..=clamp` — evaluation relative to the truncated initial segment
/// `{n : n ≤ clamp}` rather than the whole model.
pub fn eval_std_clamped(
    f: &Formula,
    env: &mut BTreeMap<String, BigUint>,
    horizon: u64,
    cap: u64,
    clamp: u64,
) -> Result<EvalResult, EvalError> {
    eval_std_go(f, env, horizon, cap, Some(&BigUint::from(clamp)))
}

fn eval_std_go(
    f: &Formula,
    env: &mut BTreeMap<String, BigUint>,
    horizon: u64,
    cap: u64,
    clamp: Option<&BigUint>,
) -> Result<EvalResult, EvalError> {
    Ok(match f {
        Formula::Const(r) => EvalResult { value: r.clone(), exhaustive: true },
        Formula::Dist(a, b) => {
            let d = if term_value(a, env)? == term_value(b, env)? {
                rat_int(0)
            } else {
                rat_int(1)
            };
            EvalResult { value: d, exhaustive: true }
        }
        Formula::Add(l, r) => {
            let l = eval_std_go(l, env, horizon, cap, clamp)?;
            let r = eval_std_go(r, env, horizon, cap, clamp)?;
            EvalResult { value: l.value + r.value, exhaustive: l.exhaustive && r.exhaustive }
        }
        Formula::Scale(r, body) => {
            let b = eval_std_go(body, env, horizon, cap, clamp)?;
            EvalResult { value: r * b.value, exhaustive: b.exhaustive }
        }
        Formula::Sup(v, body) | Formula::Inf(v, body) => {
            let is_sup = matches!(f, Formula::Sup(..));
            let (mut last, truncated) = match body.quantifier_pattern(v) {
                QuantifierPattern::Vacuous => (BigUint::zero(), false),
                QuantifierPattern::Bounded(t) => (term_value(&t, env)?, false),
                QuantifierPattern::Unbounded => (BigUint::from(horizon), true),
            };
            if let Some(c) = clamp {
                last = last.min(c.clone());
            }
            let count = &last + 1u32;
            if count > BigUint::from(cap) {
                return Err(EvalError::FrontierCap(count.to_string(), cap));
            }
            let saved = env.remove(v);
            let mut best: Option<Rat> = None;
            let mut exhaustive = true;
            let mut n = BigUint::zero();
            while n <= last {
                env.insert(v.clone(), n.clone());
                let r = eval_std_go(body, env, horizon, cap, clamp)?;
                exhaustive &= r.exhaustive;
                best = Some(match best {
                    None => r.value,
                    Some(b) => {
                        if is_sup {
                            b.max(r.value)
                        } else {
                            b.min(r.value)
                        }
                    }
                });
                n += 1u32;
            }
            match saved {
                Some(e) => {
                    env.insert(v.clone(), e);
                }
                None => {
                    env.remove(v);
                }
            }
            EvalResult { value: best.unwrap(), exhaustive: exhaustive && !truncated }
        }
    })
}

fn project(env: &Environment, i: usize, model: &Model) -> Result<BTreeMap<String, BigUint>, EvalError> {
    let want = model.arity();
    let mut out = BTreeMap::new();
    for (v, e) in env {
        if e.arity() != want {
            return Err(EvalError::Arity { var: v.clone(), got: e.arity(), want });
        }
        out.insert(v.clone(), e.0[i].clone());
    }
    Ok(out)
}

/// Evaluates `f` in `model` under `env`. In a weighted power the value is
/// computed coordinatewise and averaged by the weights.
pub fn eval(
    f: &Formula,
    env: &Environment,
    model: &Model,
    horizon: u64,
    cap: u64,
) -> Result<EvalResult, EvalError> {
    let mut value = Rat::zero();
    let mut exhaustive = true;
    for (i, w) in model.weights().iter().enumerate() {
        let mut coord = project(env, i, model)?;
        let r = eval_std(f, &mut coord, horizon, cap)?;
        value += w * r.value;
        exhaustive &= r.exhaustive;
    }
    Ok(EvalResult { value, exhaustive })
}

/// Term value in tuple space.
fn term_elem(t: &Term, env: &Environment, model: &Model) -> Result<Element, EvalError> {
    Ok(match t {
        Term::Var(v) => env.get(v).ok_or_else(|| EvalError::Unbound(v.clone()))?.clone(),
        Term::Zero => model.zero(),
        Term::One => model.one(),
        Term::Sum(a, b) => model.add(&term_elem(a, env, model)?, &term_elem(b, env, model)?),
        Term::Product(a, b) => model.mul(&term_elem(a, env, model)?, &term_elem(b, env, model)?),
        Term::Meet(a, b) => model.meet(&term_elem(a, env, model)?, &term_elem(b, env, model)?),
        Term::Join(a, b) => model.join(&term_elem(a, env, model)?, &term_elem(b, env, model)?),
    })
}

/// All tuples coordinatewise ≤ `upper`, lexicographically.
fn box_below(upper: &Element, cap: u64) -> Result<Vec<Element>, EvalError> {
    let mut count = BigUint::from(1u32);
    for c in &upper.0 {
        count *= c + 1u32;
    }
    if count > BigUint::from(cap) {
        return Err(EvalError::FrontierCap(count.to_string(), cap));
    }
    let mut out = Vec::new();
    let mut cur = vec![BigUint::zero(); upper.0.len()];
    loop {
        out.push(Element(cur.clone()));
        let mut i = cur.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if cur[i] < upper.0[i] {
                cur[i] += 1u32;
                break;
            }
            cur[i] = BigUint::zero();
        }
    }
}

/// Reference evaluator that enumerates genuine tuples of the weighted power
/// for every quantifier frontier. Exponentially slower than `eval`; used as
/// an oracle in tests.
pub fn eval_product_oracle(
    f: &Formula,
    env: &Environment,
    model: &Model,
    horizon: u64,
    cap: u64,
) -> Result<EvalResult, EvalError> {
    let mut env = env.clone();
    eval_tuples(f, &mut env, model, horizon, cap)
}

fn eval_tuples(
    f: &Formula,
    env: &mut Environment,
    model: &Model,
    horizon: u64,
    cap: u64,
) -> Result<EvalResult, EvalError> {
    Ok(match f {
        Formula::Const(r) => EvalResult { value: r.clone(), exhaustive: true },
        Formula::Dist(a, b) => {
            let d = model.dist(&term_elem(a, env, model)?, &term_elem(b, env, model)?);
            EvalResult { value: d, exhaustive: true }
        }
        Formula::Add(l, r) => {
            let l = eval_tuples(l, env, model, horizon, cap)?;
            let r = eval_tuples(r, env, model, horizon, cap)?;
            EvalResult { value: l.value + r.value, exhaustive: l.exhaustive && r.exhaustive }
        }
        Formula::Scale(r, body) => {
            let b = eval_tuples(body, env, model, horizon, cap)?;
            EvalResult { value: r * b.value, exhaustive: b.exhaustive }
        }
        Formula::Sup(v, body) | Formula::Inf(v, body) => {
            let is_sup = matches!(f, Formula::Sup(..));
            let (upper, truncated) = match body.quantifier_pattern(v) {
                QuantifierPattern::Vacuous => (model.zero(), false),
                QuantifierPattern::Bounded(t) => (term_elem(&t, env, model)?, false),
                QuantifierPattern::Unbounded => {
                    (Element(vec![BigUint::from(horizon); model.arity()]), true)
                }
            };
            let frontier = box_below(&upper, cap)?;
            let saved = env.remove(v);
            let mut best: Option<Rat> = None;
            let mut exhaustive = true;
            for e in frontier {
                env.insert(v.clone(), e);
                let r = eval_tuples(body, env, model, horizon, cap)?;
                exhaustive &= r.exhaustive;
                best = Some(match best {
                    None => r.value,
                    Some(b) => {
                        if is_sup {
                            b.max(r.value)
                        } else {
                            b.min(r.value)
                        }
                    }
                });
            }
            match saved {
                Some(e) => {
                    env.insert(v.clone(), e);
                }
                None => {
                    env.remove(v);
                }
            }
            EvalResult { value: best.unwrap(), exhaustive: exhaustive && !truncated }
        }
    })
}

#[derive(Debug, Clone, Copy)]
pub struct CheckOpts {
    /// Truncation horizon for unbounded quantifiers.
    pub horizon: u64,
    /// Free variables of the condition range over `0..=closure_horizon`.
    pub closure_horizon: u64,
    pub frontier_cap: u64,
}

impl Default for CheckOpts {
    fn default() -> Self {
        CheckOpts { horizon: 8, closure_horizon: 8, frontier_cap: DEFAULT_FRONTIER_CAP }
    }
}

impl CheckOpts {
    pub fn new(horizon: u64, closure_horizon: u64) -> CheckOpts {
        CheckOpts { horizon, closure_horizon, frontier_cap: DEFAULT_FRONTIER_CAP }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    /// Suite label when the report came from a named suite item.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub condition: String,
    pub model: String,
    pub horizon: u64,
    /// `max over the closure of lhs − rhs`, as `p` or `p/q`. The condition
    /// holds on the checked grid iff this is ≤ 0.
    pub max_violation: String,
    pub witness: BTreeMap<String, Vec<u64>>,
    pub points_checked: u64,
    #[serde(skip)]
    pub violation: Rat,
    #[serde(skip)]
    pub exhaustive: bool,
}

impl CheckReport {
    pub fn holds(&self) -> bool {
        self.violation <= Rat::zero()
    }
}

fn gap(c: &Condition) -> Formula {
    Formula::sub(c.lhs.clone(), c.rhs.clone())
}

/// Checks `lhs ≤ rhs` over all assignments of `0..=closure_horizon` to the
/// free variables.
///
/// On a weighted power the gap value under any tuple assignment is the
/// weighted average of its standard values at the coordinate projections, so
/// the maximal violation over all tuple assignments is attained on the
/// diagonal. The closure is therefore walked in ℕ regardless of the model,
/// and the reported witness is the diagonal embedding of the standard
/// witness.
pub fn check_condition(
    c: &Condition,
    model: &Model,
    opts: &CheckOpts,
) -> Result<CheckReport, EvalError> {
    let g = gap(c);
    let vars = c.closure_vars();
    let mut env: BTreeMap<String, BigUint> = BTreeMap::new();
    let mut idx = vec![0u64; vars.len()];
    let mut best: Option<(Rat, Vec<u64>)> = None;
    let mut exhaustive = true;
    let mut points: u64 = 0;
    loop {
        for (v, &n) in vars.iter().zip(&idx) {
            env.insert(v.clone(), BigUint::from(n));
        }
        let r = eval_std(&g, &mut env, opts.horizon, opts.frontier_cap)?;
        exhaustive &= r.exhaustive;
        points += 1;
        if best.as_ref().map_or(true, |(b, _)| r.value > *b) {
            best = Some((r.value, idx.clone()));
        }
        let mut i = vars.len();
        loop {
            if i == 0 {
                let (violation, wit) = best.unwrap();
                let k = model.arity();
                let witness: BTreeMap<String, Vec<u64>> =
                    vars.iter().cloned().zip(wit.iter().map(|&n| vec![n; k])).collect();
                return Ok(CheckReport {
                    label: None,
                    condition: c.to_string(),
                    model: model.to_string(),
                    horizon: opts.horizon,
                    max_violation: format_rat(&violation),
                    witness,
                    points_checked: points,
                    violation,
                    exhaustive,
                });
            }
            i -= 1;
            if idx[i] < opts.closure_horizon {
                idx[i] += 1;
                break;
            }
            idx[i] = 0;
        }
    }
}

/// Reference checker that enumerates genuine tuple assignments and uses the
/// tuple-space evaluator. Only feasible at very small horizons.
pub fn check_condition_direct(
    c: &Condition,
    model: &Model,
    opts: &CheckOpts,
) -> Result<CheckReport, EvalError> {
    let g = gap(c);
    let vars = c.closure_vars();
    let points_per_var = model
        .enumerate(opts.closure_horizon, opts.frontier_cap)
        .map_err(|_| EvalError::FrontierCap("closure".into(), opts.frontier_cap))?;
    let mut env: Environment = BTreeMap::new();
    let mut best: Option<(Rat, Vec<Element>)> = None;
    let mut exhaustive = true;
    let mut points: u64 = 0;
    let mut idx = vec![0usize; vars.len()];
    loop {
        for (v, &i) in vars.iter().zip(&idx) {
            env.insert(v.clone(), points_per_var[i].clone());
        }
        let r = eval_product_oracle(&g, &env, model, opts.horizon, opts.frontier_cap)?;
        exhaustive &= r.exhaustive;
        points += 1;
        if best.as_ref().map_or(true, |(b, _)| r.value > *b) {
            best = Some((r.value, idx.iter().map(|&i| points_per_var[i].clone()).collect()));
        }
        let mut i = vars.len();
        loop {
            if i == 0 {
                let (violation, wit) = best.unwrap();
                let witness: BTreeMap<String, Vec<u64>> = vars
                    .iter()
                    .cloned()
                    .zip(wit.iter().map(|e| {
                        e.0.iter().map(|n| n.to_u64().expect("witness coordinate")).collect()
                    }))
                    .collect();
                return Ok(CheckReport {
                    label: None,
                    condition: c.to_string(),
                    model: model.to_string(),
                    horizon: opts.horizon,
                    max_violation: format_rat(&violation),
                    witness,
                    points_checked: points,
                    violation,
                    exhaustive,
                });
            }
            i -= 1;
            if idx[i] + 1 < points_per_var.len() {
                idx[i] += 1;
                break;
            }
            idx[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Ultracharge;
    use crate::parser::{parse_condition, parse_formula};
    use crate::rat::rat;

    fn ev(src: &str, horizon: u64) -> EvalResult {
        eval_std(&parse_formula(src).unwrap(), &mut BTreeMap::new(), horizon, 1_000_000).unwrap()
    }

    #[test]
    fn closed_formulas() {
        // sup x . d(x, 1): hits 1 at x = 0
        let r = ev("sup x . d(x, 1)", 4);
        assert_eq!(r.value, rat_int(1));
        assert!(!r.exhaustive);
        // bounded sup is exhaustive
        let r = ev("sup x <= 1 + 1 . d(x, 1)", 4);
        assert_eq!(r.value, rat_int(1));
        assert!(r.exhaustive);
        // inf x . d(x, 1) = 0
        assert_eq!(ev("inf x . d(x, 1)", 4).value, rat_int(0));
        assert_eq!(ev("1/2 * d(0, 1) + 1/3", 0).value, rat(5, 6));
    }

    #[test]
    fn shadowing_restores_outer_binding() {
        // sup x . d(x, 0) + (sup x . d(x, 1)) + d(x /\ 0, 0)
        let f = parse_formula("sup x . d(x, 1) + sup x . d(x, 0)").unwrap();
        let r = eval_std(&f, &mut BTreeMap::new(), 3, 1000).unwrap();
        assert_eq!(r.value, rat_int(2));
    }

    #[test]
    fn powermean_average() {
        let m = Model::Powermean(Ultracharge::new(vec![rat(1, 3), rat(2, 3)]).unwrap());
        let f = parse_formula("d(x, 0)").unwrap();
        let mut env = Environment::new();
        env.insert("x".into(), Element::from_u64s(&[0, 5]));
        let r = eval(&f, &env, &m, 4, 1000).unwrap();
        assert_eq!(r.value, rat(2, 3));
        // oracle agrees
        let o = eval_product_oracle(&f, &env, &m, 4, 1000).unwrap();
        assert_eq!(o.value, rat(2, 3));
    }

    #[test]
    fn fast_path_matches_oracle_with_quantifier() {
        let m = Model::Powermean(Ultracharge::uniform(2));
        let f = parse_formula("sup y . d(x, y) - d(y, 0)").unwrap();
        let mut env = Environment::new();
        env.insert("x".into(), Element::from_u64s(&[1, 3]));
        let a = eval(&f, &env, &m, 3, 100_000).unwrap();
        let b = eval_product_oracle(&f, &env, &m, 3, 100_000).unwrap();
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn check_reports_witness() {
        // d(x, 0) <= 0 fails at x = 1
        let c = parse_condition("d(x, 0) <= 0").unwrap();
        let r = check_condition(&c, &Model::Standard, &CheckOpts::new(4, 4)).unwrap();
        assert!(!r.holds());
        assert_eq!(r.violation, rat_int(1));
        assert_eq!(r.witness["x"], vec![1]);
        assert_eq!(r.points_checked, 5);
    }

    #[test]
    fn check_holds() {
        let c = parse_condition("d(x, y) <= d(x, z) + d(z, y)").unwrap();
        let r = check_condition(&c, &Model::Standard, &CheckOpts::new(4, 4)).unwrap();
        assert!(r.holds());
        assert_eq!(r.points_checked, 125);
    }

    #[test]
    fn direct_checker_agrees() {
        let m = Model::Powermean(Ultracharge::uniform(2));
        let c = parse_condition("d(x /\\ y, x) <= d(x, y)").unwrap();
        let fast = check_condition(&c, &m, &CheckOpts::new(3, 3)).unwrap();
        let direct = check_condition_direct(&c, &m, &CheckOpts::new(3, 3)).unwrap();
        assert_eq!(fast.violation, direct.violation);
        assert!(fast.holds());
    }

    #[test]
    fn frontier_cap_enforced() {
        let f = parse_formula("sup x . d(x, 0)").unwrap();
        let e = eval_std(&f, &mut BTreeMap::new(), 100, 10).unwrap_err();
        assert!(matches!(e, EvalError::FrontierCap(..)));
    }

    #[test]
    fn report_serialization_shape() {
        let c = parse_condition("d(x, 0) <= 1").unwrap();
        let r = check_condition(&c, &Model::Standard, &CheckOpts::new(2, 2)).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.starts_with(r#"{"condition":"d(x, 0) <= 1","model":"standard","horizon":2"#));
        // gap is first maximized at x = 1 (d(0,0) - 1 = -1, d(1,0) - 1 = 0)
        assert!(json.contains(r#""witness":{"x":[1]}"#));
    }
}
