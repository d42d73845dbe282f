//! A workbench for affine arithmetic over lattice-ordered models of the
//! naturals.
//!
//! The crate provides:
//!
//! * terms and real-valued affine formulas with an exact-rational concrete
//!   syntax ([`syntax`], [`parser`]),
//! * the standard model and finitely-weighted powermean models ([`model`]),
//! * exact formula evaluation with a search horizon, plus an independent
//!   tuple-space oracle ([`eval`]),
//! * static analyses: bounds, Lipschitz constants, value ranges, induction
//!   constants and the sup/inf hierarchy ([`attributes`], [`analysis`]),
//! * componentwise number theory paired with the defining affine conditions
//!   ([`nt`]),
//! * named condition suites and a corpus format ([`suite`]).

pub mod analysis;
pub mod attributes;
pub mod eval;
pub mod model;
pub mod nt;
pub mod parser;
pub mod rat;
pub mod sample;
pub mod suite;
pub mod syntax;

pub use analysis::{classify, induction_constant, value_range, HierarchyClass, Kind, ValueRange};
pub use attributes::{attributes, StaticAttributes};
pub use eval::{check_condition, eval, CheckOpts, CheckReport, Environment, EvalResult};
pub use model::{Element, Model, Ultracharge};
pub use parser::{parse_condition, parse_formula, parse_term, ParseError};
pub use rat::Rat;
pub use syntax::{Condition, Formula, Term};
