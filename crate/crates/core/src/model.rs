//! The standard model ℕ and its finite weighted powers.
//!
//! A weighted power is ℕ^k with coordinatewise operations and the metric
//! `d(a, b) = Σ { w_i : a_i ≠ b_i }` for positive rational weights summing
//! to 1. The standard model is the special case k = 1.

use std::fmt;

use num::{BigUint, One, Zero};
use serde::Deserialize;
use thiserror::Error;

use crate::rat::{format_rat, parse_rat, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("weights must be nonempty")]
    Empty,
    #[error("weight {0} is not positive")]
    NonPositive(String),
    #[error("weights sum to {0}, expected 1")]
    BadSum(String),
    #[error("invalid model spec: {0}")]
    BadSpec(String),
}

/// Positive rational weights summing to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ultracharge {
    weights: Vec<Rat>,
}

impl Ultracharge {
    pub fn new(weights: Vec<Rat>) -> Result<Ultracharge, ModelError> {
        if weights.is_empty() {
            return Err(ModelError::Empty);
        }
        for w in &weights {
            if *w <= Rat::zero() {
                return Err(ModelError::NonPositive(format_rat(w)));
            }
        }
        let sum: Rat = weights.iter().sum();
        if !sum.is_one() {
            return Err(ModelError::BadSum(format_rat(&sum)));
        }
        Ok(Ultracharge { weights })
    }

    pub fn uniform(k: usize) -> Ultracharge {
        let w = Rat::new(BigUint::one().into(), BigUint::from(k).into());
        Ultracharge { weights: vec![w; k] }
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    pub fn arity(&self) -> usize {
        self.weights.len()
    }
}

/// A point of a model: one natural number per coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(pub Vec<BigUint>);

impl Element {
    pub fn scalar(n: u64) -> Element {
        Element(vec![BigUint::from(n)])
    }

    pub fn from_u64s(ns: &[u64]) -> Element {
        Element(ns.iter().map(|&n| BigUint::from(n)).collect())
    }

    /// The diagonal embedding of n into a k-coordinate model.
    pub fn diagonal(n: &BigUint, k: usize) -> Element {
        Element(vec![n.clone(); k])
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "(")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Model {
    Standard,
    Powermean(Ultracharge),
}

impl Model {
    pub fn arity(&self) -> usize {
        match self {
            Model::Standard => 1,
            Model::Powermean(u) => u.arity(),
        }
    }

    /// Coordinate weights; the standard model has the single weight 1.
    pub fn weights(&self) -> Vec<Rat> {
        match self {
            Model::Standard => vec![Rat::one()],
            Model::Powermean(u) => u.weights.clone(),
        }
    }

    fn check_arity(&self, e: &Element) {
        assert_eq!(e.arity(), self.arity(), "element arity mismatch");
    }

    pub fn zero(&self) -> Element {
        Element(vec![BigUint::zero(); self.arity()])
    }

    pub fn one(&self) -> Element {
        Element(vec![BigUint::one(); self.arity()])
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        self.zip(a, b, |x, y| x + y)
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        self.zip(a, b, |x, y| x * y)
    }

    pub fn meet(&self, a: &Element, b: &Element) -> Element {
        self.zip(a, b, |x, y| x.min(y).clone())
    }

    pub fn join(&self, a: &Element, b: &Element) -> Element {
        self.zip(a, b, |x, y| x.max(y).clone())
    }

    fn zip(&self, a: &Element, b: &Element, f: impl Fn(&BigUint, &BigUint) -> BigUint) -> Element {
        self.check_arity(a);
        self.check_arity(b);
        Element(a.0.iter().zip(&b.0).map(|(x, y)| f(x, y)).collect())
    }

    /// Weighted discrete metric: the total weight of coordinates where the
    /// two elements differ.
    pub fn dist(&self, a: &Element, b: &Element) -> Rat {
        self.check_arity(a);
        self.check_arity(b);
        let mut d = Rat::zero();
        for ((x, y), w) in a.0.iter().zip(&b.0).zip(self.weights()) {
            if x != y {
                d += w;
            }
        }
        d
    }

    /// All elements with every coordinate ≤ `horizon`, in lexicographic
    /// order. Errors when `(horizon + 1)^arity` exceeds `cap`.
    pub fn enumerate(&self, horizon: u64, cap: u64) -> Result<Vec<Element>, ModelError> {
        let k = self.arity() as u32;
        let total = (horizon + 1)
            .checked_pow(k)
            .filter(|&t| t <= cap)
            .ok_or_else(|| {
                ModelError::BadSpec(format!(
                    "enumeration of {} elements exceeds cap {cap}",
                    format_count(horizon + 1, k)
                ))
            })?;
        let mut out = Vec::with_capacity(total as usize);
        let mut idx = vec![0u64; k as usize];
        loop {
            out.push(Element(idx.iter().map(|&n| BigUint::from(n)).collect()));
            let mut i = k as usize;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                if idx[i] < horizon {
                    idx[i] += 1;
                    break;
                }
                idx[i] = 0;
            }
        }
    }
}

fn format_count(base: u64, exp: u32) -> String {
    match base.checked_pow(exp) {
        Some(n) => n.to_string(),
        None => format!("{base}^{exp}"),
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Standard => write!(f, "standard"),
            Model::Powermean(u) => {
                write!(f, "powermean(")?;
                for (i, w) in u.weights.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", format_rat(w))?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum ModelSpec {
    Standard,
    Powermean { weights: Vec<String> },
}

/// Parses `{"kind":"standard"}` or
/// `{"kind":"powermean","weights":["1/2","1/2"]}`.
pub fn parse_model_spec(json: &str) -> Result<Model, ModelError> {
    let spec: ModelSpec =
        serde_json::from_str(json).map_err(|e| ModelError::BadSpec(e.to_string()))?;
    match spec {
        ModelSpec::Standard => Ok(Model::Standard),
        ModelSpec::Powermean { weights } => {
            let ws = weights
                .iter()
                .map(|s| {
                    parse_rat(s).ok_or_else(|| ModelError::BadSpec(format!("bad weight '{s}'")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Model::Powermean(Ultracharge::new(ws)?))
        }
    }
}
