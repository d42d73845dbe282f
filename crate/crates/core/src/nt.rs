//! Arithmetic in weighted powers: division, coprimality, Bézout, Chinese
//! remaindering, Cantor pairing, sequence coding, factorial/power, and
//! irreducibility/primality.
//!
//! Each notion has a fast coordinatewise algorithm. Where a defining formula
//! exists in the affine language (irred, prime), its truncated evaluation is
//! also provided so the two can be cross-checked.

use num::integer::Integer;
use num::{BigInt, BigUint, One, ToPrimitive, Zero};
use thiserror::Error;

use crate::eval::{eval, Environment, EvalError, EvalResult};
use crate::model::{Element, Model};
use crate::rat::Rat;
use crate::syntax::{Formula, Term};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NtError {
    #[error("element {0} is not normal (has a zero coordinate)")]
    NonNormal(Element),
    #[error("{0} and {1} are not coprime")]
    NotCoprime(Element, Element),
    #[error("expected {want} elements, got {got}")]
    LengthMismatch { want: usize, got: usize },
    #[error("result exceeds the magnitude cap ({0} bits)")]
    MagnitudeCap(u64),
    #[error("element must be at least {0} in every coordinate")]
    TooSmall(u64),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Per-result size cap, roughly a million decimal digits.
pub const MAGNITUDE_CAP_BITS: u64 = 3_400_000;

fn ensure_normal(e: &Element) -> Result<(), NtError> {
    if e.0.iter().any(|c| c.is_zero()) {
        return Err(NtError::NonNormal(e.clone()));
    }
    Ok(())
}

fn ensure_at_least(e: &Element, n: u64) -> Result<(), NtError> {
    if e.0.iter().any(|c| *c < BigUint::from(n)) {
        return Err(NtError::TooSmall(n));
    }
    Ok(())
}

fn zip2(
    a: &Element,
    b: &Element,
    f: impl Fn(&BigUint, &BigUint) -> Result<BigUint, NtError>,
) -> Result<Element, NtError> {
    debug_assert_eq!(a.arity(), b.arity());
    a.0.iter().zip(&b.0).map(|(x, y)| f(x, y)).collect::<Result<_, _>>().map(Element)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivResult {
    pub quotient: Element,
    pub remainder: Element,
}

/// Coordinatewise Euclidean division of `y` by normal `x`:
/// `y = x·quotient + remainder` with `remainder + 1 ≤ x`.
pub fn divmod(m: &Model, y: &Element, x: &Element) -> Result<DivResult, NtError> {
    debug_assert_eq!(m.arity(), x.arity());
    ensure_normal(x)?;
    let (mut q, mut r) = (Vec::new(), Vec::new());
    for (yi, xi) in y.0.iter().zip(&x.0) {
        let (qi, ri) = yi.div_rem(xi);
        q.push(qi);
        r.push(ri);
    }
    Ok(DivResult { quotient: Element(q), remainder: Element(r) })
}

/// True when every pair of coordinates has gcd 1.
pub fn is_coprime(m: &Model, a: &Element, b: &Element) -> Result<bool, NtError> {
    debug_assert_eq!(m.arity(), a.arity());
    ensure_normal(a)?;
    ensure_normal(b)?;
    Ok(a.0.iter().zip(&b.0).all(|(x, y)| x.gcd(y).is_one()))
}

fn inv_mod(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    if m.is_one() {
        return Some(BigUint::zero());
    }
    let a = BigInt::from(a.clone());
    let m = BigInt::from(m.clone());
    let e = a.extended_gcd(&m);
    if !e.gcd.is_one() {
        return None;
    }
    let inv = e.x.mod_floor(&m);
    inv.to_biguint()
}

/// The inverse of `x` modulo `y`, coordinatewise: `z·x ≡ 1 (mod y)` and
/// `z + 1 ≤ y` (for a unit modulus the inverse is 0).
pub fn bezout(m: &Model, x: &Element, y: &Element) -> Result<Element, NtError> {
    ensure_normal(x)?;
    ensure_normal(y)?;
    if !is_coprime(m, x, y)? {
        return Err(NtError::NotCoprime(x.clone(), y.clone()));
    }
    zip2(x, y, |xi, yi| Ok(inv_mod(xi, yi).expect("coprime")))
}

fn crt_scalar(pairs: &[(BigUint, BigUint)]) -> Option<BigUint> {
    // pairs of (residue, modulus) with pairwise coprime moduli
    let mut acc = BigUint::zero();
    let mut modulus = BigUint::one();
    for (r, mi) in pairs {
        // acc + modulus·k ≡ r (mod mi)
        let r = r.mod_floor(mi);
        let diff = (&r + mi - acc.mod_floor(mi)).mod_floor(mi);
        let k = (diff * inv_mod(&modulus.mod_floor(mi), mi)?).mod_floor(mi);
        acc += &modulus * k;
        modulus *= mi;
    }
    Some(acc)
}

/// The least `y` with `y ≡ residues[i] (mod moduli[i])` for all `i`,
/// coordinatewise. Moduli must be normal and pairwise coprime.
pub fn crt(m: &Model, moduli: &[Element], residues: &[Element]) -> Result<Element, NtError> {
    if moduli.len() != residues.len() {
        return Err(NtError::LengthMismatch { want: moduli.len(), got: residues.len() });
    }
    for mi in moduli {
        ensure_normal(mi)?;
    }
    for i in 0..moduli.len() {
        for j in i + 1..moduli.len() {
            if !is_coprime(m, &moduli[i], &moduli[j])? {
                return Err(NtError::NotCoprime(moduli[i].clone(), moduli[j].clone()));
            }
        }
    }
    let k = m.arity();
    let mut out = Vec::with_capacity(k);
    for c in 0..k {
        let pairs: Vec<_> = residues
            .iter()
            .zip(moduli)
            .map(|(r, mi)| (r.0[c].clone(), mi.0[c].clone()))
            .collect();
        out.push(crt_scalar(&pairs).expect("pairwise coprime"));
    }
    Ok(Element(out))
}

fn pair_scalar(x: &BigUint, y: &BigUint) -> BigUint {
    let s = x + y;
    (&s + 1u32) * &s / 2u32 + y
}

fn unpair_scalar(z: &BigUint) -> (BigUint, BigUint) {
    // w = ⌊(√(8z+1) − 1) / 2⌋ is the largest w with w(w+1)/2 ≤ z
    let w = ((z * 8u32 + 1u32).sqrt() - 1u32) / 2u32;
    let t = &w * (&w + 1u32) / 2u32;
    let y = z - t;
    let x = w - &y;
    (x, y)
}

/// Cantor pairing `⟨x, y⟩ = (x+y+1)(x+y)/2 + y`, coordinatewise.
pub fn pair(m: &Model, x: &Element, y: &Element) -> Result<Element, NtError> {
    debug_assert_eq!(m.arity(), x.arity());
    zip2(x, y, |a, b| Ok(pair_scalar(a, b)))
}

pub fn unpair(m: &Model, z: &Element) -> Result<(Element, Element), NtError> {
    debug_assert_eq!(m.arity(), z.arity());
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for c in &z.0 {
        let (x, y) = unpair_scalar(c);
        xs.push(x);
        ys.push(y);
    }
    Ok((Element(xs), Element(ys)))
}

fn beta_scalar(x: &BigUint, i: &BigUint) -> BigUint {
    let (a, mm) = unpair_scalar(x);
    let modulus = mm * (i + 1u32) + 1u32;
    a.mod_floor(&modulus)
}

/// Sequence decoding `(x)_i`: with `x = ⟨a, m⟩`, the remainder of `a` by
/// `m·(i+1) + 1`.
pub fn beta(m: &Model, x: &Element, i: &Element) -> Result<Element, NtError> {
    debug_assert_eq!(m.arity(), x.arity());
    zip2(x, i, |a, b| Ok(beta_scalar(a, b)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedSequence {
    pub code: Element,
    pub length: usize,
}

fn factorial_scalar(n: &BigUint) -> Result<BigUint, NtError> {
    let mut acc = BigUint::one();
    let mut i = BigUint::one();
    while i <= *n {
        acc *= &i;
        if acc.bits() > MAGNITUDE_CAP_BITS {
            return Err(NtError::MagnitudeCap(MAGNITUDE_CAP_BITS));
        }
        i += 1u32;
    }
    Ok(acc)
}

fn encode_scalar(items: &[BigUint]) -> Result<BigUint, NtError> {
    // classical β-coding: m = max(n, items)! makes the moduli m(i+1)+1
    // pairwise coprime and larger than every item
    let n = items.len();
    let base = items.iter().max().cloned().unwrap_or_default().max(BigUint::from(n));
    let mm = factorial_scalar(&base)?;
    let pairs: Vec<_> = items
        .iter()
        .enumerate()
        .map(|(i, x)| (x.clone(), &mm * (i + 1) + 1u32))
        .collect();
    let a = crt_scalar(&pairs).expect("moduli pairwise coprime");
    Ok(pair_scalar(&a, &mm))
}

/// Codes `items` into a single element `u` with `beta(u, i) = items[i]` for
/// every `i < items.len()`, coordinatewise.
pub fn encode_sequence(m: &Model, items: &[Element]) -> Result<CodedSequence, NtError> {
    let k = m.arity();
    let mut code = Vec::with_capacity(k);
    for c in 0..k {
        let coords: Vec<_> = items.iter().map(|e| e.0[c].clone()).collect();
        code.push(encode_scalar(&coords)?);
    }
    Ok(CodedSequence { code: Element(code), length: items.len() })
}

pub fn factorial(m: &Model, x: &Element) -> Result<Element, NtError> {
    debug_assert_eq!(m.arity(), x.arity());
    Ok(Element(x.0.iter().map(factorial_scalar).collect::<Result<_, _>>()?))
}

/// `x^y` coordinatewise; `x` must be normal so the function is monotone and
/// matches the recursion `x^(y+1) = x·x^y` from 1.
pub fn power(m: &Model, x: &Element, y: &Element) -> Result<Element, NtError> {
    debug_assert_eq!(m.arity(), x.arity());
    ensure_normal(x)?;
    zip2(x, y, |b, e| {
        let mut acc = BigUint::one();
        let mut i = BigUint::zero();
        while i < *e {
            acc *= b;
            if acc.bits() > MAGNITUDE_CAP_BITS {
                return Err(NtError::MagnitudeCap(MAGNITUDE_CAP_BITS));
            }
            i += 1u32;
        }
        Ok(acc)
    })
}

// ---------------------------------------------------------------------------
// Irreducibility and primality.

/// `irred(p) = sup x . sup y . (d(p,x) + d(p,y) − d(p, x·y)) − 1`, zero
/// exactly on irreducible p ≥ 2 (value 1 otherwise on classical points).
pub fn irred_formula(p: &str) -> Formula {
    let pv = Term::var(p);
    let body = Formula::sub(
        Formula::add(
            Formula::dist(pv.clone(), Term::var("x")),
            Formula::dist(pv.clone(), Term::var("y")),
        ),
        Formula::dist(pv, Term::product(Term::var("x"), Term::var("y"))),
    );
    Formula::sub(Formula::sup("x", Formula::sup("y", body)), Formula::Const(Rat::one()))
}

/// `prime(p) = sup x . sup y . (inf t . d(p·t, x)) + (inf t . d(p·t, y))
/// − (inf t . d(p·t, x·y)) − 1`.
pub fn prime_formula(p: &str) -> Formula {
    let divides = |target: Term| {
        Formula::inf("t", Formula::dist(Term::product(Term::var(p), Term::var("t")), target))
    };
    let body = Formula::sub(
        Formula::add(divides(Term::var("x")), divides(Term::var("y"))),
        divides(Term::product(Term::var("x"), Term::var("y"))),
    );
    Formula::sub(Formula::sup("x", Formula::sup("y", body)), Formula::Const(Rat::one()))
}

fn max_coord(e: &Element) -> u64 {
    e.0.iter().map(|c| c.to_u64().unwrap_or(u64::MAX)).max().unwrap_or(0)
}

/// Horizon at which the truncated irred/prime evaluations agree with the
/// classical coordinatewise oracle: factor witnesses for `p` stay below
/// `p`, and divisibility witnesses below `2p + 2`.
pub fn default_prime_horizon(p: &Element) -> u64 {
    2 * max_coord(p) + 2
}

fn formula_value(
    f: &Formula,
    var: &str,
    m: &Model,
    p: &Element,
    horizon: u64,
) -> Result<EvalResult, NtError> {
    let mut env = Environment::new();
    env.insert(var.to_string(), p.clone());
    Ok(eval(f, &env, m, horizon, crate::eval::DEFAULT_FRONTIER_CAP)?)
}

pub fn irred_value(m: &Model, p: &Element, horizon: u64) -> Result<Rat, NtError> {
    ensure_at_least(p, 2)?;
    Ok(formula_value(&irred_formula("p"), "p", m, p, horizon)?.value)
}

pub fn prime_value(m: &Model, p: &Element, horizon: u64) -> Result<Rat, NtError> {
    ensure_at_least(p, 2)?;
    Ok(formula_value(&prime_formula("p"), "p", m, p, horizon)?.value)
}

/// Classical trial-division primality of one coordinate.
pub fn is_prime_scalar(n: &BigUint) -> bool {
    if *n < BigUint::from(2u32) {
        return false;
    }
    let mut d = BigUint::from(2u32);
    while &d * &d <= *n {
        if n.mod_floor(&d).is_zero() {
            return false;
        }
        d += 1u32;
    }
    true
}

/// Weighted fraction of non-prime coordinates — the value the prime formula
/// takes on `p` in the given model at sufficient horizon.
pub fn prime_defect(m: &Model, p: &Element) -> Rat {
    let mut out = Rat::zero();
    for (c, w) in p.0.iter().zip(m.weights()) {
        if !is_prime_scalar(c) {
            out += w;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Witness-based checks for the coding statements. Their existential
// witnesses (β-codes) are astronomically larger than any workable quantifier
// horizon, so instead of truncated evaluation we construct the witness and
// verify the matrix of the statement exactly.

/// `∀ x y, 1 ≤ z  ∃ w`: `(w)_i = (y)_i` for `i ≤ z−1` and `(w)_z = x`.
/// Returns the total residual distance at the constructed witness (0 = holds).
pub fn check_coding_extension(
    m: &Model,
    x: &Element,
    y: &Element,
    z: u64,
) -> Result<Rat, NtError> {
    assert!(z >= 1);
    let mut items = Vec::new();
    for i in 0..z {
        items.push(beta(m, y, &Element(vec![BigUint::from(i); m.arity()]))?);
    }
    items.push(x.clone());
    let w = encode_sequence(m, &items)?;
    let mut residual = Rat::zero();
    for (i, item) in items.iter().enumerate() {
        let wi = beta(m, &w.code, &Element(vec![BigUint::from(i); m.arity()]))?;
        residual += m.dist(&wi, item);
    }
    Ok(residual)
}

/// `∃ u` with `(u)_i = items[i]` for all i: constructs u and returns the
/// total residual distance (0 = holds).
pub fn check_sequence_coding(m: &Model, items: &[Element]) -> Result<Rat, NtError> {
    let u = encode_sequence(m, items)?;
    let mut residual = Rat::zero();
    for (i, item) in items.iter().enumerate() {
        let ui = beta(m, &u.code, &Element(vec![BigUint::from(i); m.arity()]))?;
        residual += m.dist(&ui, item);
    }
    Ok(residual)
}

/// The factorial recursion via a coded history: builds w coding
/// `0!, 1!, …, x!` and evaluates
/// `d((w)_0, 1) + max_{i ≤ x−1} d((w)_{i+1}, (i+1)·(w)_i) + d((w)_x, x!)`.
pub fn check_factorial_history(m: &Model, x: u64) -> Result<Rat, NtError> {
    let mut items = Vec::new();
    for i in 0..=x {
        items.push(factorial(m, &Element(vec![BigUint::from(i); m.arity()]))?);
    }
    let w = encode_sequence(m, &items)?;
    let at = |i: u64| beta(m, &w.code, &Element(vec![BigUint::from(i); m.arity()]));
    let mut residual = m.dist(&at(0)?, &m.one());
    let mut step_max = Rat::zero();
    for i in 0..x {
        let succ = m.mul(&Element(vec![BigUint::from(i + 1); m.arity()]), &at(i)?);
        step_max = step_max.max(m.dist(&at(i + 1)?, &succ));
    }
    residual += step_max;
    residual += m.dist(&at(x)?, items.last().unwrap());
    Ok(residual)
}
