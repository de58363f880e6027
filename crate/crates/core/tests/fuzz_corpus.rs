//! Replays the fuzz seeds, plus seeded byte mutations of them, through the
//! same checks as the fuzz targets. Runs on stable without libFuzzer.

mod common;

use std::fs;
use std::path::PathBuf;

use diamond::syntax::{parse_expression, parse_system, print_system};
use rand::Rng;

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fuzz/corpus").join(target);
    let mut files: Vec<PathBuf> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files.iter().map(|p| fs::read(p).unwrap()).collect()
}

fn mutate(data: &[u8], r: &mut rand_chacha::ChaCha8Rng) -> Vec<u8> {
    const BYTES: &[u8] = b"xyabtze12^*+-/()<>:;\n ->#0";
    let mut out = data.to_vec();
    for _ in 0..r.gen_range(1..4) {
        let at = r.gen_range(0..=out.len());
        match r.gen_range(0..3) {
            0 if at < out.len() => {
                out.remove(at);
            }
            1 if at < out.len() => out[at] = BYTES[r.gen_range(0..BYTES.len())],
            _ => out.insert(at, BYTES[r.gen_range(0..BYTES.len())]),
        }
    }
    out
}

fn check_system(data: &[u8]) -> bool {
    let Ok(text) = std::str::from_utf8(data) else { return false };
    let Ok(sys) = parse_system(text) else { return false };
    let printed = print_system(&sys);
    let again = parse_system(&printed).unwrap_or_else(|e| panic!("{text:?} printed as {printed:?}: {e}"));
    assert_eq!(again.rules(), sys.rules(), "{text:?}");
    assert_eq!(print_system(&again), printed);
    true
}

const SYSTEMS: [&str; 5] = [
    "theory assoc; vars x y; order deglex x<y; rule y*x -> x*y + 1",
    "theory commutative; vars x y; order lex x>y; field 7; rule x^2 -> y",
    "theory mixed; commvars t; vars a b",
    "theory magma; vars x y; rule (x*x) -> x",
    "theory path; vertices 1 2; arrows a:1->2 b:2->1",
];

fn check_expression(data: &[u8]) -> bool {
    let Some((&pick, rest)) = data.split_first() else { return false };
    let Ok(text) = std::str::from_utf8(rest) else { return false };
    let sys = parse_system(SYSTEMS[pick as usize % SYSTEMS.len()]).unwrap();
    let Ok(a) = parse_expression(&sys, text) else { return false };
    let rendered = sys.render(&a);
    let back = parse_expression(&sys, &rendered).unwrap_or_else(|e| panic!("{text:?} rendered as {rendered:?}: {e}"));
    assert_eq!(back, a, "{text:?}");
    true
}

#[test]
fn system_seeds_and_mutations() {
    let seeds = seeds("parse_system");
    assert!(seeds.iter().all(|s| check_system(s)), "every seed is a valid system");
    let mut r = common::rng(11);
    let accepted = (0..4000).filter(|i| check_system(&mutate(&seeds[i % seeds.len()], &mut r))).count();
    assert!(accepted > 0);
}

#[test]
fn expression_seeds_and_mutations() {
    let seeds = seeds("parse_expression");
    assert!(seeds.iter().all(|s| check_expression(s)), "every seed is a valid expression");
    let mut r = common::rng(12);
    for i in 0..4000 {
        let mut m = mutate(&seeds[i % seeds.len()][1..], &mut r);
        m.insert(0, seeds[i % seeds.len()][0]);
        check_expression(&m);
    }
}
