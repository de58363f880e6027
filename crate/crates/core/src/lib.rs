//! Reduction systems over free monomial theories: normal forms, critical
//! ambiguities, confluence and completion, plus a power-series mode with
//! precision-truncated normal forms.
//!
//! ```
//! use diamond::syntax::parse_system;
//! use diamond::completion::check_confluence;
//!
//! let sys = parse_system("theory assoc; vars x y; order deglex x<y; rule y*x -> x*y + 1").unwrap();
//! assert!(check_confluence(&sys).is_confluent());
//! ```

pub mod ambiguity;
pub mod completion;
pub mod element;
pub mod error;
pub mod order;
pub mod rewriting;
pub mod scalar;
pub mod series;
pub mod syntax;
pub mod theory;

pub use ambiguity::{critical_ambiguities, resolve, s_polynomial, second_criterion_filter, Ambiguity, AmbiguityClass};
pub use completion::{check_confluence, complete, drop_redundant, ideal_member, ConfluenceVerdict, Limits};
pub use element::Element;
pub use error::{Error, Result};
pub use order::{MonomialOrder, OrderKind};
pub use rewriting::{normal_form, orient, reduce_once, RewriteStep, RewritingSystem, Rule};
pub use scalar::{Field, Scalar};
pub use series::{truncated_normal_form, Precision, WeightData};
pub use theory::{Context, Monomial, Theory};
