//! Corpus generators and oracles that share no code with the library's
//! reduction machinery.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use diamond::ambiguity::critical_ambiguities;
use diamond::completion::{complete, CompletionStatus, Limits};
use diamond::{Element, Field, Monomial, MonomialOrder, OrderKind, RewritingSystem, Theory};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

fn small_coefficient(field: Field, rng: &mut ChaCha8Rng) -> diamond::Scalar {
    field.from_i64(*[-3i64, -2, -1, 1, 2, 3].choose(rng).unwrap())
}

/// Random words over `letters` of length `0..=max_len`.
pub fn random_word(letters: u32, max_len: usize, rng: &mut ChaCha8Rng) -> Monomial {
    let len = rng.gen_range(0..=max_len);
    Monomial::Word((0..len).map(|_| rng.gen_range(0..letters)).collect())
}

pub fn random_power(vars: usize, max_deg: u32, rng: &mut ChaCha8Rng) -> Monomial {
    let total = rng.gen_range(0..=max_deg);
    let mut e = vec![0u32; vars];
    for _ in 0..total {
        e[rng.gen_range(0..vars)] += 1;
    }
    Monomial::Power(e)
}

/// A rule set with distinct leads of degree `1..=max_lead` and at most two
/// smaller lower terms. `monomial` draws candidate monomials.
fn random_rules(
    theory: Theory,
    order: MonomialOrder,
    max_rules: usize,
    max_lead: usize,
    rng: &mut ChaCha8Rng,
    monomial: impl Fn(usize, &mut ChaCha8Rng) -> Monomial,
) -> RewritingSystem {
    let field = Field::Rational;
    let mut sys = RewritingSystem::new(theory.clone(), order.clone(), field);
    let n = rng.gen_range(1..=max_rules);
    let mut leads = BTreeSet::new();
    while sys.len() < n {
        let lead = monomial(max_lead, rng);
        if lead.degree() == 0 || !leads.insert(lead.clone()) {
            continue;
        }
        let mut lower = Element::zero(field);
        for _ in 0..rng.gen_range(0..=2) {
            let m = monomial(lead.degree(), rng);
            if order.less(&theory, &m, &lead) {
                lower.add_term(m, small_coefficient(field, rng));
            }
        }
        sys.add_rule(lead, lower).expect("lower terms were chosen below the lead");
    }
    sys
}

/// Two-letter free monoid systems under deglex.
pub fn word_corpus(count: usize, seed: u64) -> Vec<RewritingSystem> {
    let mut r = rng(seed);
    let t = Theory::free_monoid(["x", "y"]).unwrap();
    let o = MonomialOrder::new(OrderKind::Deglex, &t).unwrap();
    (0..count).map(|_| random_rules(t.clone(), o.clone(), 3, 4, &mut r, |d, r| random_word(2, d, r))).collect()
}

/// Three-variable commutative systems under lex or deglex.
pub fn power_corpus(count: usize, seed: u64) -> Vec<RewritingSystem> {
    let mut r = rng(seed);
    let t = Theory::commutative(["x", "y", "z"]).unwrap();
    (0..count)
        .map(|_| {
            let kind = if r.gen_bool(0.5) { OrderKind::Lex } else { OrderKind::Deglex };
            let o = MonomialOrder::new(kind, &t).unwrap();
            random_rules(t.clone(), o, 3, 3, &mut r, |d, r| random_power(3, d as u32, r))
        })
        .collect()
}

/// Completed forms of random commutative systems that completion finishes
/// within small limits.
pub fn completed_corpus(count: usize, seed: u64) -> Vec<RewritingSystem> {
    let limits = Limits { max_degree: 10, max_rules: 25, max_steps: 200_000 };
    let mut out = Vec::new();
    let mut s = seed;
    while out.len() < count {
        for sys in power_corpus(20, s) {
            if out.len() == count {
                break;
            }
            if let Ok(r) = complete(&sys, limits) {
                if r.status == CompletionStatus::Complete && !r.system.is_empty() {
                    out.push(r.system);
                }
            }
        }
        s += 1;
    }
    out
}

pub fn random_element(sys: &RewritingSystem, max_deg: usize, terms: usize, rng: &mut ChaCha8Rng) -> Element {
    let field = sys.field();
    let mut a = Element::zero(field);
    let pool: Vec<Monomial> = (0..=max_deg).flat_map(|d| sys.theory().monomials_of_degree(d)).collect();
    for _ in 0..terms {
        let m = pool.choose(rng).unwrap().clone();
        a.add_term(m, small_coefficient(field, rng));
    }
    a
}

/// Reduces with a uniformly random redex at every step.
pub fn random_strategy_nf(sys: &RewritingSystem, a: &Element, rng: &mut ChaCha8Rng) -> Element {
    let mut a = a.clone();
    for _ in 0..1_000_000 {
        let redexes = sys.redexes(&a);
        let Some(r) = redexes.choose(rng) else { return a };
        a = sys.apply_redex(&a, r).unwrap().0;
    }
    panic!("random strategy did not terminate");
}

/// Incremental row echelon form over the rationals, keyed by any ordered
/// column type.
pub struct Echelon<K: Ord + Clone> {
    rows: Vec<(K, BTreeMap<K, BigRational>)>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon { rows: Vec::new() }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    fn reduce(&self, mut v: BTreeMap<K, BigRational>) -> BTreeMap<K, BigRational> {
        for (pivot, row) in &self.rows {
            if let Some(c) = v.get(pivot).cloned() {
                for (k, x) in row {
                    let e = v.entry(k.clone()).or_insert_with(BigRational::zero);
                    *e -= &c * x;
                    if e.is_zero() {
                        v.remove(k);
                    }
                }
            }
        }
        v
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, v: BTreeMap<K, BigRational>) -> bool {
        let v = self.reduce(v);
        let Some((pivot, c)) = v.iter().next().map(|(k, c)| (k.clone(), c.clone())) else { return false };
        let inv = BigRational::one() / c;
        let row: BTreeMap<K, BigRational> = v.into_iter().map(|(k, x)| (k, x * &inv)).collect();
        // keep earlier rows reduced against the new pivot
        for (_, r) in &mut self.rows {
            if let Some(c) = r.get(&pivot).cloned() {
                for (k, x) in &row {
                    let e = r.entry(k.clone()).or_insert_with(BigRational::zero);
                    *e -= &c * x;
                    if e.is_zero() {
                        r.remove(k);
                    }
                }
            }
        }
        self.rows.push((pivot, row));
        true
    }

    pub fn contains(&self, v: BTreeMap<K, BigRational>) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Commutative polynomials in two variables as exponent-pair maps.
pub type Poly2 = BTreeMap<(u32, u32), BigRational>;

pub fn poly2(terms: &[(i64, u32, u32)]) -> Poly2 {
    let mut p = Poly2::new();
    for &(c, a, b) in terms {
        *p.entry((a, b)).or_insert_with(BigRational::zero) += q(c);
    }
    p.retain(|_, c| !c.is_zero());
    p
}

/// Degree-truncated Macaulay matrix: all products `x^i y^j f` of total
/// degree at most `bound`.
pub fn macaulay2(gens: &[Poly2], bound: u32) -> Echelon<(u32, u32)> {
    let mut m = Echelon::default();
    for f in gens {
        let deg = f.keys().map(|(a, b)| a + b).max().unwrap_or(0);
        for i in 0..=bound {
            for j in 0..=bound - i {
                if i + j + deg > bound {
                    continue;
                }
                m.insert(f.iter().map(|(&(a, b), c)| ((a + i, b + j), c.clone())).collect());
            }
        }
    }
    m
}

/// Words as byte strings; the oracle reasons about strings only.
pub fn all_words(letters: u8, max_len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| (0..letters).map(move |l| [w.as_slice(), &[l]].concat()))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// `dim F_{<=d} / I_{<=d}` for word relations, where `I_{<=d}` is spanned
/// by `u r v` of degree at most `d`. Exact when the relations form a
/// Groebner basis for a degree-compatible order.
pub fn filtered_quotient_dims(relations: &[Vec<(i64, Vec<u8>)>], letters: u8, max_deg: usize) -> Vec<usize> {
    let words = all_words(letters, max_deg);
    (0..=max_deg)
        .map(|d| {
            let mut m: Echelon<Vec<u8>> = Echelon::default();
            for r in relations {
                let rdeg = r.iter().map(|(_, w)| w.len()).max().unwrap();
                for u in words.iter().filter(|u| u.len() + rdeg <= d) {
                    for v in words.iter().filter(|v| u.len() + v.len() + rdeg <= d) {
                        let mut row = BTreeMap::new();
                        for (c, w) in r {
                            let word = [u.as_slice(), w, v].concat();
                            let e = row.entry(word).or_insert_with(BigRational::zero);
                            *e += q(*c);
                        }
                        row.retain(|_, c: &mut BigRational| !c.is_zero());
                        m.insert(row);
                    }
                }
            }
            let total = words.iter().filter(|w| w.len() <= d).count();
            total - m.rank()
        })
        .collect()
}

/// Words of each length `0..=max_len` with no factor from `forbidden`.
pub fn avoiding_counts(forbidden: &[&[u8]], letters: u8, max_len: usize) -> Vec<usize> {
    let mut counts = vec![0; max_len + 1];
    for w in all_words(letters, max_len) {
        if !forbidden.iter().any(|f| w.windows(f.len()).any(|x| x == *f)) {
            counts[w.len()] += 1;
        }
    }
    counts
}

pub fn critical_count(sys: &RewritingSystem) -> usize {
    critical_ambiguities(sys).len()
}

/// Binary trees with leaves labelled by letters, independent of the
/// library's representation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum T {
    L(u8),
    N(Box<T>, Box<T>),
}

pub fn n(a: T, b: T) -> T {
    T::N(Box::new(a), Box::new(b))
}

/// Every tree obtained from `t` by one rewrite `pattern -> replacement`
/// at some position.
pub fn one_step(t: &T, pattern: &T, replacement: &T) -> Vec<T> {
    let mut out = Vec::new();
    if t == pattern {
        out.push(replacement.clone());
    }
    if let T::N(a, b) = t {
        for a2 in one_step(a, pattern, replacement) {
            out.push(n(a2, (**b).clone()));
        }
        for b2 in one_step(b, pattern, replacement) {
            out.push(n((**a).clone(), b2));
        }
    }
    out
}

/// The irreducible trees reachable from `t`.
pub fn exhaustive_normal_forms(t: &T, pattern: &T, replacement: &T) -> BTreeSet<T> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![t.clone()];
    let mut normal = BTreeSet::new();
    while let Some(s) = stack.pop() {
        if !seen.insert(s.clone()) {
            continue;
        }
        let next = one_step(&s, pattern, replacement);
        if next.is_empty() {
            normal.insert(s);
        }
        stack.extend(next);
    }
    normal
}
