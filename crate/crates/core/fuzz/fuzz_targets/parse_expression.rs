#![no_main]

use std::sync::OnceLock;

use diamond::syntax::{parse_expression, parse_system};
use diamond::RewritingSystem;
use libfuzzer_sys::fuzz_target;

const SYSTEMS: [&str; 5] = [
    "theory assoc; vars x y; order deglex x<y; rule y*x -> x*y + 1",
    "theory commutative; vars x y; order lex x>y; field 7; rule x^2 -> y",
    "theory mixed; commvars t; vars a b",
    "theory magma; vars x y; rule (x*x) -> x",
    "theory path; vertices 1 2; arrows a:1->2 b:2->1",
];

fn systems() -> &'static [RewritingSystem] {
    static CELL: OnceLock<Vec<RewritingSystem>> = OnceLock::new();
    CELL.get_or_init(|| SYSTEMS.iter().map(|s| parse_system(s).unwrap()).collect())
}

fuzz_target!(|data: &[u8]| {
    let Some((&pick, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let sys = &systems()[pick as usize % SYSTEMS.len()];
    if let Ok(a) = parse_expression(sys, text) {
        let rendered = sys.render(&a);
        assert_eq!(parse_expression(sys, &rendered).expect("rendered element parses"), a);
    }
});
