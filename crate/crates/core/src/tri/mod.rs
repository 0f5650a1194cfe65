//! Kleene three-valued expression engine: values, expression trees,
//! evaluation, substitution, equivalence, value ranges, simplification, and
//! the textual syntax.

mod expr;
mod parse;
mod simplify;
mod value;

pub use expr::{
    equivalent, equivalent_bounded, is_identifier, refute_randomized, valuations_over, ConstClass,
    Expression, Refutation, Valuation, ValueRange, DEFAULT_EQUIV_VAR_BOUND,
};
pub use parse::parse_expression;
pub use simplify::simplify;
pub use value::TriValue;
