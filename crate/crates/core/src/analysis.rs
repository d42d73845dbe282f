//! Static analyses: finite value-range sets, induction constants, generated
//! induction/collection conditions, and the syntactic Σₙ/Πₙ classification.

use std::collections::BTreeSet;
use std::fmt;

use num::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::rat::{format_rat, rat_int, Rat};
use crate::syntax::{fresh_name, Condition, Formula, QuantifierPattern, Term};

pub const RANGE_CAP: usize = 4096;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("value range exceeds {0} values")]
    RangeCap(usize),
    #[error("variable '{0}' is not free in the formula")]
    NotFree(String),
}

/// A finite set containing every value the formula can take on a linearly
/// ordered model with the discrete metric. Sup/Inf preserve the set there
/// because the extremum of values drawn from a finite set lies in the set;
/// over a weighted power, values are convex combinations and no such set
/// exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValueRange {
    pub values: Vec<String>,
    #[serde(skip)]
    pub set: BTreeSet<Rat>,
}

pub fn value_range(f: &Formula) -> Result<ValueRange, AnalysisError> {
    let set = range_set(f)?;
    Ok(ValueRange { values: set.iter().map(format_rat).collect(), set })
}

fn range_set(f: &Formula) -> Result<BTreeSet<Rat>, AnalysisError> {
    Ok(match f {
        Formula::Const(r) => BTreeSet::from([r.clone()]),
        Formula::Dist(..) => BTreeSet::from([rat_int(0), rat_int(1)]),
        Formula::Add(l, r) => {
            let (a, b) = (range_set(l)?, range_set(r)?);
            let mut out = BTreeSet::new();
            for x in &a {
                for y in &b {
                    out.insert(x + y);
                    if out.len() > RANGE_CAP {
                        return Err(AnalysisError::RangeCap(RANGE_CAP));
                    }
                }
            }
            out
        }
        Formula::Scale(r, body) => range_set(body)?.into_iter().map(|x| r * x).collect(),
        Formula::Sup(_, body) | Formula::Inf(_, body) => range_set(body)?,
    })
}

/// `α_φ`: 1 when the range is a singleton, otherwise `2·max|r| / g` where
/// `g` is the least gap between successive range values.
pub fn induction_constant(f: &Formula) -> Result<Rat, AnalysisError> {
    let range = range_set(f)?;
    if range.len() == 1 {
        return Ok(rat_int(1));
    }
    let b = range.iter().map(|r| r.abs()).max().unwrap();
    let gap = range
        .iter()
        .zip(range.iter().skip(1))
        .map(|(lo, hi)| hi - lo)
        .min()
        .unwrap();
    Ok(rat_int(2) * b / gap)
}

/// The step-of-one induction condition for `f` along `var`:
/// `sup x . φ ≤ φ(0) + α_φ · sup x . (φ(x+1) − φ(x))`.
pub fn make_induction_condition(f: &Formula, var: &str) -> Result<Condition, AnalysisError> {
    let alpha = induction_constant(f)?;
    let step = Formula::sub(f.substitute(var, &Term::sum(Term::var(var), Term::One)), f.clone());
    Ok(Condition::new(
        Formula::sup(var, f.clone()),
        Formula::add(
            f.substitute(var, &Term::Zero),
            Formula::scale(alpha, Formula::sup(var, step)),
        ),
    ))
}

/// The weaker variant whose step ranges over `x + (u ∧ 1)`:
/// `sup x . φ ≤ φ(0) + α_φ · sup x . sup u . (φ(x + (u∧1)) − φ(x))`.
pub fn make_induction_condition_weak(f: &Formula, var: &str) -> Result<Condition, AnalysisError> {
    let alpha = induction_constant(f)?;
    let mut avoid = f.free_vars();
    avoid.insert(var.to_string());
    let u = fresh_name("u", &avoid);
    let bump = Term::sum(Term::var(var), Term::meet(Term::var(&u), Term::One));
    let step = Formula::sub(f.substitute(var, &bump), f.clone());
    Ok(Condition::new(
        Formula::sup(var, f.clone()),
        Formula::add(
            f.substitute(var, &Term::Zero),
            Formula::scale(alpha, Formula::sup(var, Formula::sup(&u, step))),
        ),
    ))
}

/// Both directions of the collection condition for `f`:
/// `inf x≤t . sup ȳ . φ  =  sup s . inf x≤t . sup ȳ≤s . φ`.
/// The first returned condition is ≤ left-to-right (the substantive one);
/// the second is the automatic converse.
pub fn make_collection_conditions(
    f: &Formula,
    x: &str,
    ys: &[&str],
    t: &Term,
) -> Result<(Condition, Condition), AnalysisError> {
    let free = f.free_vars();
    if !free.contains(x) {
        return Err(AnalysisError::NotFree(x.to_string()));
    }
    for y in ys {
        if !free.contains(*y) {
            return Err(AnalysisError::NotFree(y.to_string()));
        }
    }
    let mut avoid = free.clone();
    avoid.extend(t.free_vars());
    let s = fresh_name("s", &avoid);

    let mut unbounded = f.clone();
    for y in ys.iter().rev() {
        unbounded = Formula::sup(y, unbounded);
    }
    let lhs = Formula::bounded_inf(x, t, &unbounded);

    let mut capped = f.clone();
    for y in ys.iter().rev() {
        capped = Formula::bounded_sup(y, &Term::var(&s), &capped);
    }
    let rhs = Formula::sup(&s, Formula::bounded_inf(x, t, &capped));

    Ok((Condition::new(lhs.clone(), rhs.clone()), Condition::new(rhs, lhs)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Kind {
    Sigma,
    Pi,
}


/// Position of a formula in the quantifier-alternation hierarchy, read off
/// the written form. Level 0 (reported as Sigma) means every quantifier
/// matches the bounded pattern. No search for equivalent forms is done, so
/// this is an upper bound on the true class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HierarchyClass {
    pub kind: Kind,
    pub level: u32,
}

impl HierarchyClass {
    pub const BOUNDED: HierarchyClass = HierarchyClass { kind: Kind::Sigma, level: 0 };
}

impl fmt::Display for HierarchyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            Kind::Sigma => "Sigma",
            Kind::Pi => "Pi",
        };
        write!(f, "{}_{}", kind, self.level)
    }
}

pub fn classify(f: &Formula) -> HierarchyClass {
    class(f, &mut BTreeSet::new())
}

/// `counting` holds variables bound by quantifiers that counted toward the
/// level; a cap term mentioning one of them does not make its quantifier
/// bounded.
fn class(f: &Formula, counting: &mut BTreeSet<String>) -> HierarchyClass {
    match f {
        Formula::Const(_) | Formula::Dist(..) => HierarchyClass::BOUNDED,
        Formula::Add(l, r) => join(class(l, counting), class(r, counting)),
        Formula::Scale(_, body) => class(body, counting),
        Formula::Sup(v, body) | Formula::Inf(v, body) => {
            let kind = if matches!(f, Formula::Sup(..)) { Kind::Sigma } else { Kind::Pi };
            let non_counting = match body.quantifier_pattern(v) {
                QuantifierPattern::Vacuous => true,
                QuantifierPattern::Bounded(t) => t.free_vars().is_disjoint(counting),
                QuantifierPattern::Unbounded => false,
            };
            if non_counting {
                return class(body, counting);
            }
            let fresh = counting.insert(v.clone());
            let inner = class(body, counting);
            if fresh {
                counting.remove(v);
            }
            if inner.level == 0 {
                HierarchyClass { kind, level: 1 }
            } else if inner.kind == kind {
                inner
            } else {
                HierarchyClass { kind, level: inner.level + 1 }
            }
        }
    }
}

/// Class of a combination of two subformulas: the deeper one wins; equal
/// depths of opposite kind need one more level (reported as Sigma).
fn join(a: HierarchyClass, b: HierarchyClass) -> HierarchyClass {
    if a.level == 0 {
        b
    } else if b.level == 0 {
        a
    } else if a.level > b.level {
        a
    } else if b.level > a.level {
        b
    } else if a.kind == b.kind {
        a
    } else {
        HierarchyClass { kind: Kind::Sigma, level: a.level + 1 }
    }
}

#[derive(Serialize)]
pub struct AlphaReport {
    pub alpha: String,
}

impl ValueRange {
    pub fn contains(&self, r: &Rat) -> bool {
        self.set.contains(r)
    }

    /// Least gap between successive values; zero for singletons.
    pub fn least_gap(&self) -> Rat {
        self.set
            .iter()
            .zip(self.set.iter().skip(1))
            .map(|(lo, hi)| hi - lo)
            .min()
            .unwrap_or_else(Rat::zero)
    }

    /// Least strictly positive value, when one exists.
    pub fn least_positive(&self) -> Option<Rat> {
        self.set.iter().find(|r| r.is_positive()).cloned()
    }
}
