//! The plain-text system format.
//!
//! ```text
//! theory assoc            # or commutative, mixed, magma, path
//! vars x y
//! order deglex x < y      # deglex, weighted, lex, series or graded
//! weights x:1 y:2
//! field 7                 # default: rational
//! rule y*x -> x*y + 1
//! ```
//!
//! Statements end at `;` or a line break and `#` starts a comment. Mixed
//! theories list their commuting letters under `commvars`; path algebras
//! declare `vertices 1 2` and `arrows a:1->2`, and write the idempotent of
//! vertex `v` as `ev`. Free magma products are always parenthesised in
//! pairs, as in `((x*y)*z)`.

mod lexer;
mod parser;
mod printer;

pub use parser::{parse_element, parse_expression, parse_system};
pub use printer::print_system;
