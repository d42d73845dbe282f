//! Terms over `{+, ·, ∧, ∨, 0, 1}`, real-valued affine formulas, and
//! conditions `φ ≤ ψ`.
//!
//! Formulas are immutable trees with exact rational scalars. Subtraction and
//! `|t|` exist only in the concrete syntax; the printer emits the desugared
//! form, and `parse(format(f))` is structurally equal to `f`.

use std::collections::BTreeSet;
use std::fmt;

use num::Signed;

use crate::rat::{format_rat, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Zero,
    One,
    Sum(Box<Term>, Box<Term>),
    Product(Box<Term>, Box<Term>),
    Meet(Box<Term>, Box<Term>),
    Join(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn sum(a: Term, b: Term) -> Term {
        Term::Sum(Box::new(a), Box::new(b))
    }

    pub fn product(a: Term, b: Term) -> Term {
        Term::Product(Box::new(a), Box::new(b))
    }

    pub fn meet(a: Term, b: Term) -> Term {
        Term::Meet(Box::new(a), Box::new(b))
    }

    pub fn join(a: Term, b: Term) -> Term {
        Term::Join(Box::new(a), Box::new(b))
    }

    /// `n` as the left-associated sum `1 + 1 + ... + 1`.
    pub fn numeral(n: u64) -> Term {
        match n {
            0 => Term::Zero,
            _ => {
                let mut t = Term::One;
                for _ in 1..n {
                    t = Term::sum(t, Term::One);
                }
                t
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Zero | Term::One => {}
            Term::Sum(a, b) | Term::Product(a, b) | Term::Meet(a, b) | Term::Join(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn contains_var(&self, var: &str) -> bool {
        match self {
            Term::Var(v) => v == var,
            Term::Zero | Term::One => false,
            Term::Sum(a, b) | Term::Product(a, b) | Term::Meet(a, b) | Term::Join(a, b) => {
                a.contains_var(var) || b.contains_var(var)
            }
        }
    }

    /// Number of occurrences of `var`; this is the term's Lipschitz constant
    /// in `var` since every symbol of the language is 1-Lipschitz.
    pub fn occurrences(&self, var: &str) -> u64 {
        match self {
            Term::Var(v) => (v == var) as u64,
            Term::Zero | Term::One => 0,
            Term::Sum(a, b) | Term::Product(a, b) | Term::Meet(a, b) | Term::Join(a, b) => {
                a.occurrences(var) + b.occurrences(var)
            }
        }
    }

    pub fn substitute(&self, var: &str, t: &Term) -> Term {
        match self {
            Term::Var(v) if v == var => t.clone(),
            Term::Var(_) | Term::Zero | Term::One => self.clone(),
            Term::Sum(a, b) => Term::sum(a.substitute(var, t), b.substitute(var, t)),
            Term::Product(a, b) => Term::product(a.substitute(var, t), b.substitute(var, t)),
            Term::Meet(a, b) => Term::meet(a.substitute(var, t), b.substitute(var, t)),
            Term::Join(a, b) => Term::join(a.substitute(var, t), b.substitute(var, t)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Const(Rat),
    Dist(Term, Term),
    Add(Box<Formula>, Box<Formula>),
    Scale(Rat, Box<Formula>),
    Sup(String, Box<Formula>),
    Inf(String, Box<Formula>),
}

/// How a quantifier `sup x . body` / `inf x . body` uses its variable.
///
/// `Bounded(t)` means every occurrence of `x` in `body` sits inside `x ∧ t`
/// for one common term `t` not containing `x` — the shape produced by the
/// bounded-quantifier sugar `sup x <= t . φ`. `Vacuous` means `x` does not
/// occur at all.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuantifierPattern {
    Vacuous,
    Bounded(Term),
    Unbounded,
}

impl Formula {
    pub fn dist(a: Term, b: Term) -> Formula {
        Formula::Dist(a, b)
    }

    pub fn add(a: Formula, b: Formula) -> Formula {
        Formula::Add(Box::new(a), Box::new(b))
    }

    pub fn scale(r: Rat, f: Formula) -> Formula {
        Formula::Scale(r, Box::new(f))
    }

    /// `a − b`, desugared to `a + (−1)·b`.
    pub fn sub(a: Formula, b: Formula) -> Formula {
        Formula::add(a, Formula::scale(crate::rat::rat_int(-1), b))
    }

    /// `|t|`, i.e. `d(t, 0)`.
    pub fn norm(t: Term) -> Formula {
        Formula::Dist(t, Term::Zero)
    }

    pub fn sup(var: &str, f: Formula) -> Formula {
        Formula::Sup(var.to_string(), Box::new(f))
    }

    pub fn inf(var: &str, f: Formula) -> Formula {
        Formula::Inf(var.to_string(), Box::new(f))
    }

    /// `sup var <= bound . f`, desugared by substituting `var ∧ bound` for
    /// `var` in the body.
    pub fn bounded_sup(var: &str, bound: &Term, f: &Formula) -> Formula {
        let capped = Term::meet(Term::var(var), bound.clone());
        Formula::sup(var, f.substitute(var, &capped))
    }

    pub fn bounded_inf(var: &str, bound: &Term, f: &Formula) -> Formula {
        let capped = Term::meet(Term::var(var), bound.clone());
        Formula::inf(var, f.substitute(var, &capped))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut BTreeSet::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut BTreeSet<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Const(_) => {}
            Formula::Dist(a, b) => {
                for v in a.free_vars().union(&b.free_vars()) {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
            }
            Formula::Add(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Formula::Scale(_, f) => f.collect_free(bound, out),
            Formula::Sup(v, f) | Formula::Inf(v, f) => {
                let fresh = bound.insert(v.clone());
                f.collect_free(bound, out);
                if fresh {
                    bound.remove(v);
                }
            }
        }
    }

    /// Capture-avoiding substitution of a term for a free variable. Bound
    /// variables that would capture `t` are renamed with a fresh primed name.
    pub fn substitute(&self, var: &str, t: &Term) -> Formula {
        match self {
            Formula::Const(_) => self.clone(),
            Formula::Dist(a, b) => Formula::Dist(a.substitute(var, t), b.substitute(var, t)),
            Formula::Add(l, r) => Formula::add(l.substitute(var, t), r.substitute(var, t)),
            Formula::Scale(r, f) => Formula::scale(r.clone(), f.substitute(var, t)),
            Formula::Sup(v, body) | Formula::Inf(v, body) => {
                let rebuild = |v: String, b: Formula| match self {
                    Formula::Sup(..) => Formula::Sup(v, Box::new(b)),
                    _ => Formula::Inf(v, Box::new(b)),
                };
                if v == var {
                    return self.clone();
                }
                if !body.free_vars().contains(var) {
                    return self.clone();
                }
                if t.contains_var(v) {
                    let mut avoid = body.free_vars();
                    avoid.extend(t.free_vars());
                    avoid.insert(var.to_string());
                    let fresh = fresh_name(v, &avoid);
                    let renamed = body.substitute(v, &Term::var(&fresh));
                    rebuild(fresh, renamed.substitute(var, t))
                } else {
                    rebuild(v.clone(), body.substitute(var, t))
                }
            }
        }
    }

    /// Classifies how the body of a quantifier binding `var` uses it.
    /// Occurrences under a shadowing quantifier of the same name are ignored.
    pub fn quantifier_pattern(&self, var: &str) -> QuantifierPattern {
        let mut guards: Vec<Option<Term>> = Vec::new();
        self.scan_occurrences(var, &mut BTreeSet::new(), &mut guards);
        if guards.is_empty() {
            return QuantifierPattern::Vacuous;
        }
        let mut bound: Option<Term> = None;
        for g in guards {
            match g {
                None => return QuantifierPattern::Unbounded,
                Some(t) => match &bound {
                    None => bound = Some(t),
                    Some(b) if *b == t => {}
                    Some(_) => return QuantifierPattern::Unbounded,
                },
            }
        }
        QuantifierPattern::Bounded(bound.unwrap())
    }

    fn scan_occurrences(
        &self,
        var: &str,
        shadow: &mut BTreeSet<String>,
        out: &mut Vec<Option<Term>>,
    ) {
        match self {
            Formula::Const(_) => {}
            Formula::Dist(a, b) => {
                scan_term(a, var, shadow, out);
                scan_term(b, var, shadow, out);
            }
            Formula::Add(l, r) => {
                l.scan_occurrences(var, shadow, out);
                r.scan_occurrences(var, shadow, out);
            }
            Formula::Scale(_, f) => f.scan_occurrences(var, shadow, out),
            Formula::Sup(v, f) | Formula::Inf(v, f) => {
                if v != var {
                    let fresh = shadow.insert(v.clone());
                    f.scan_occurrences(var, shadow, out);
                    if fresh {
                        shadow.remove(v);
                    }
                }
            }
        }
    }
}

/// Records, for each occurrence of `var`, the guard `t` when the occurrence
/// is the left side of `var ∧ t` with `var ∉ t`, and `None` otherwise. A
/// guard mentioning a variable bound between the quantifier and the
/// occurrence (in `shadow`) is out of scope at the quantifier, so the
/// occurrence counts as unguarded.
fn scan_term(t: &Term, var: &str, shadow: &BTreeSet<String>, out: &mut Vec<Option<Term>>) {
    match t {
        Term::Var(v) => {
            if v == var {
                out.push(None);
            }
        }
        Term::Zero | Term::One => {}
        Term::Meet(l, r) => {
            if **l == Term::Var(var.to_string())
                && !r.contains_var(var)
                && r.free_vars().is_disjoint(shadow)
            {
                out.push(Some((**r).clone()));
            } else {
                scan_term(l, var, shadow, out);
                scan_term(r, var, shadow, out);
            }
        }
        Term::Sum(l, r) | Term::Product(l, r) | Term::Join(l, r) => {
            scan_term(l, var, shadow, out);
            scan_term(r, var, shadow, out);
        }
    }
}

pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut name = base.to_string();
    while avoid.contains(&name) {
        name.push('\'');
    }
    name
}

/// An inequality `lhs ≤ rhs`; free variables are implicitly universally
/// closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condition {
    pub lhs: Formula,
    pub rhs: Formula,
}

impl Condition {
    pub fn new(lhs: Formula, rhs: Formula) -> Condition {
        Condition { lhs, rhs }
    }

    /// Free variables of both sides in lexicographic order; this is the
    /// closure variable list used by the checker.
    pub fn closure_vars(&self) -> Vec<String> {
        let mut vars = self.lhs.free_vars();
        vars.extend(self.rhs.free_vars());
        vars.into_iter().collect()
    }
}

// ---------------------------------------------------------------------------
// Printing. The printer emits the fixed concrete syntax; round-tripping
// through the parser reproduces the tree exactly, which the property tests
// pin down.

fn term_prec(t: &Term) -> u8 {
    match t {
        Term::Meet(..) | Term::Join(..) => 1,
        Term::Sum(..) => 2,
        Term::Product(..) => 3,
        Term::Var(_) | Term::Zero | Term::One => 4,
    }
}

fn write_term(t: &Term, parent: u8, right: bool, out: &mut String) {
    let prec = term_prec(t);
    let parens = prec < parent || (prec == parent && right && prec < 4);
    if parens {
        out.push('(');
    }
    match t {
        Term::Var(v) => out.push_str(v),
        Term::Zero => out.push('0'),
        Term::One => out.push('1'),
        Term::Sum(a, b) => {
            write_term(a, 2, false, out);
            out.push_str(" + ");
            write_term(b, 2, true, out);
        }
        Term::Product(a, b) => {
            write_term(a, 3, false, out);
            out.push_str(" * ");
            write_term(b, 3, true, out);
        }
        Term::Meet(a, b) => {
            write_term(a, 1, false, out);
            out.push_str(" /\\ ");
            write_term(b, 1, true, out);
        }
        Term::Join(a, b) => {
            write_term(a, 1, false, out);
            out.push_str(" \\/ ");
            write_term(b, 1, true, out);
        }
    }
    if parens {
        out.push(')');
    }
}

/// `trailing` is true when no further formula tokens follow, so a quantifier
/// may extend to the end without parentheses.
fn write_formula(f: &Formula, trailing: bool, out: &mut String) {
    match f {
        Formula::Const(r) => {
            out.push_str(&format_rat(r));
        }
        Formula::Dist(a, b) => {
            out.push_str("d(");
            write_term(a, 0, false, out);
            out.push_str(", ");
            write_term(b, 0, false, out);
            out.push(')');
        }
        Formula::Add(l, r) => {
            write_formula(l, false, out);
            out.push_str(" + ");
            if matches!(**r, Formula::Add(..)) {
                out.push('(');
                write_formula(r, true, out);
                out.push(')');
            } else {
                write_formula(r, trailing, out);
            }
        }
        Formula::Scale(r, body) => {
            out.push_str(&format_rat(r));
            out.push_str(" * ");
            if matches!(**body, Formula::Add(..)) {
                out.push('(');
                write_formula(body, true, out);
                out.push(')');
            } else {
                write_formula(body, trailing, out);
            }
        }
        Formula::Sup(v, body) | Formula::Inf(v, body) => {
            let kw = if matches!(f, Formula::Sup(..)) { "sup" } else { "inf" };
            if trailing {
                out.push_str(kw);
                out.push(' ');
                out.push_str(v);
                out.push_str(" . ");
                write_formula(body, true, out);
            } else {
                out.push('(');
                write_formula(f, true, out);
                out.push(')');
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_term(self, 0, false, &mut s);
        f.write_str(&s)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_formula(self, true, &mut s);
        f.write_str(&s)
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {}", self.lhs, self.rhs)
    }
}

/// Checks that a scalar never degenerates the affine structure; used by
/// constructors that take user input.
pub fn is_negative(r: &Rat) -> bool {
    r.is_negative()
}
