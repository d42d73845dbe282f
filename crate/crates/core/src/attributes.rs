//! Static size data of a formula: a uniform bound on its absolute value and
//! a modulus of uniform continuity (Lipschitz constant), both computed
//! syntactically and valid in every model under consideration.

use std::collections::{BTreeMap, BTreeSet};

use num::{Signed, Zero};

use crate::rat::{rat_int, Rat};
use crate::syntax::{Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticAttributes {
    /// `|φ| ≤ bound` pointwise.
    pub bound: Rat,
    /// `|φ(a) − φ(b)| ≤ lipschitz · max_v d(a_v, b_v)` over free variables.
    pub lipschitz: Rat,
    pub free_vars: BTreeSet<String>,
}

pub fn attributes(f: &Formula) -> StaticAttributes {
    StaticAttributes {
        bound: bound(f),
        // sum, not max: several variables can move at once under the
        // max-metric on environments
        lipschitz: lipschitz_map(f).into_values().sum(),
        free_vars: f.free_vars(),
    }
}

fn bound(f: &Formula) -> Rat {
    match f {
        Formula::Const(r) => r.abs(),
        Formula::Dist(..) => rat_int(1),
        Formula::Add(l, r) => bound(l) + bound(r),
        Formula::Scale(r, body) => r.abs() * bound(body),
        Formula::Sup(_, body) | Formula::Inf(_, body) => bound(body),
    }
}

/// Per-variable Lipschitz constants. Every language symbol is 1-Lipschitz in
/// each argument, so a term's constant in `v` is its occurrence count, and
/// `d` is 1-Lipschitz in each side.
pub fn lipschitz_map(f: &Formula) -> BTreeMap<String, Rat> {
    match f {
        Formula::Const(_) => BTreeMap::new(),
        Formula::Dist(a, b) => {
            let mut m = BTreeMap::new();
            for v in a.free_vars().union(&b.free_vars()) {
                let occ = a.occurrences(v) + b.occurrences(v);
                m.insert(v.clone(), rat_int(occ as i64));
            }
            m
        }
        Formula::Add(l, r) => {
            let mut m = lipschitz_map(l);
            for (v, k) in lipschitz_map(r) {
                *m.entry(v).or_insert_with(Rat::zero) += k;
            }
            m
        }
        Formula::Scale(r, body) => {
            let s = r.abs();
            lipschitz_map(body).into_iter().map(|(v, k)| (v, k * &s)).collect()
        }
        Formula::Sup(v, body) | Formula::Inf(v, body) => {
            let mut m = lipschitz_map(body);
            m.remove(v);
            m
        }
    }
}

/// Lipschitz constant of a term in `var` (its occurrence count).
pub fn term_lipschitz(t: &Term, var: &str) -> u64 {
    t.occurrences(var)
}
