//! Seeded random generation of terms and formulas, for differential tests
//! (fast evaluator vs tuple oracle) and static-analysis soundness sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rat::{rat, Rat};
use crate::syntax::{Formula, Term};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const SCALARS: [(i64, i64); 7] = [(-2, 1), (-1, 1), (-1, 2), (1, 3), (1, 2), (1, 1), (2, 1)];

fn scalar(r: &mut impl Rng) -> Rat {
    let (n, d) = SCALARS[r.gen_range(0..SCALARS.len())];
    rat(n, d)
}

pub fn random_term(r: &mut impl Rng, depth: u32, vars: &[&str]) -> Term {
    if depth == 0 || r.gen_ratio(1, 3) {
        return match r.gen_range(0..3) {
            0 => Term::Zero,
            1 => Term::One,
            _ if !vars.is_empty() => Term::var(vars[r.gen_range(0..vars.len())]),
            _ => Term::One,
        };
    }
    let a = random_term(r, depth - 1, vars);
    let b = random_term(r, depth - 1, vars);
    match r.gen_range(0..4) {
        0 => Term::sum(a, b),
        1 => Term::product(a, b),
        2 => Term::meet(a, b),
        _ => Term::join(a, b),
    }
}

/// A random formula of syntactic depth ≤ `depth` whose free variables are
/// drawn from `vars`. Quantified variables reuse names from a small pool so
/// shadowing and the bounded pattern both occur in samples.
pub fn random_formula(r: &mut impl Rng, depth: u32, vars: &[&str]) -> Formula {
    if depth == 0 || r.gen_ratio(1, 4) {
        return if r.gen_ratio(1, 4) {
            Formula::Const(scalar(r))
        } else {
            Formula::dist(random_term(r, 2, vars), random_term(r, 2, vars))
        };
    }
    match r.gen_range(0..5) {
        0 => Formula::add(
            random_formula(r, depth - 1, vars),
            random_formula(r, depth - 1, vars),
        ),
        1 => Formula::scale(scalar(r), random_formula(r, depth - 1, vars)),
        k => {
            let pool = ["q", "u", "w"];
            let v = pool[r.gen_range(0..pool.len())];
            let mut inner: Vec<&str> = vars.to_vec();
            if !inner.contains(&v) {
                inner.push(v);
            }
            let body = if r.gen_ratio(1, 3) {
                // bounded occurrence: body over v ∧ t
                let t = random_term(r, 1, vars);
                let raw = random_formula(r, depth - 1, &inner);
                raw.substitute(v, &Term::meet(Term::var(v), t))
            } else {
                random_formula(r, depth - 1, &inner)
            };
            if k == 2 {
                Formula::sup(v, body)
            } else {
                Formula::inf(v, body)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let mk = || {
            let mut r = rng(7);
            (0..5).map(|_| random_formula(&mut r, 3, &["x", "y"]).to_string()).collect::<Vec<_>>()
        };
        assert_eq!(mk(), mk());
    }

    #[test]
    fn respects_var_pool() {
        let mut r = rng(42);
        for _ in 0..100 {
            let f = random_formula(&mut r, 4, &["x", "y", "z"]);
            for v in f.free_vars() {
                assert!(["x", "y", "z", "q", "u", "w"].contains(&v.as_str()), "{v}");
            }
        }
    }
}
