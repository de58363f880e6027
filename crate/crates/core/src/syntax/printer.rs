use std::fmt::Write;

use crate::order::OrderKind;
use crate::rewriting::RewritingSystem;
use crate::scalar::Field;
use crate::theory::Theory;

/// Writes `sys` back in the input syntax; `parse_system` reads it back to
/// an equal system.
pub fn print_system(sys: &RewritingSystem) -> String {
    let mut out = String::new();
    let theory = sys.theory();
    match theory {
        Theory::FreeMonoid { alphabet } => {
            let _ = writeln!(out, "theory assoc\nvars {}", alphabet.join(" "));
        }
        Theory::Commutative { alphabet } => {
            let _ = writeln!(out, "theory commutative\nvars {}", alphabet.join(" "));
        }
        Theory::FreeMagma { alphabet } => {
            let _ = writeln!(out, "theory magma\nvars {}", alphabet.join(" "));
        }
        Theory::Mixed { commutative, noncommutative } => {
            out.push_str("theory mixed\n");
            if !commutative.is_empty() {
                let _ = writeln!(out, "commvars {}", commutative.join(" "));
            }
            if !noncommutative.is_empty() {
                let _ = writeln!(out, "vars {}", noncommutative.join(" "));
            }
        }
        Theory::PathAlgebra(q) => {
            let _ = writeln!(out, "theory path\nvertices {}", q.vertices.join(" "));
            if !q.arrows.is_empty() {
                let arrows: Vec<String> = q
                    .arrows
                    .iter()
                    .map(|a| format!("{}:{}->{}", a.name, q.vertices[a.source as usize], q.vertices[a.target as usize]))
                    .collect();
                let _ = writeln!(out, "arrows {}", arrows.join(" "));
            }
        }
    }
    let names = theory.generator_names();
    let order = sys.order();
    let chain: Vec<&str> = order.ascending().into_iter().map(|g| names[g]).collect();
    let _ = writeln!(out, "order {} {}", order.kind().name(), chain.join(" < "));
    let weights = match order.kind() {
        OrderKind::WeightedDeglex | OrderKind::Graded => order.weights(),
        _ => sys.weights().map(|w| w.as_slice()).or(order.weights()),
    };
    if let Some(w) = weights {
        let list: Vec<String> = names.iter().zip(w).map(|(n, q)| format!("{n}:{q}")).collect();
        let _ = writeln!(out, "weights {}", list.join(" "));
    }
    if let Field::Prime(p) = sys.field() {
        let _ = writeln!(out, "field {p}");
    }
    for rule in sys.rules() {
        let _ = writeln!(out, "rule {}", sys.render_rule(rule));
    }
    out
}
