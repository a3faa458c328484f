//! Continuous-logic formulas over the group signature `(·, ⁻¹, e, d)`.

mod ast;
mod eval;
mod parser;

pub use ast::{Formula, Term};
pub use eval::{check_condition, evaluate, evaluate_sentence, is_sup_sentence, Assignment};
pub use parser::parse;
