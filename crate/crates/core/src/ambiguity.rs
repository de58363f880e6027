//! Critical ambiguities, S-polynomials and their resolution.

use std::collections::BTreeSet;

use crate::element::Element;
use crate::error::{Error, Result};
use crate::rewriting::{normal_form_with, NormalFormOptions, RewriteStep, RewritingSystem, DEFAULT_MAX_STEPS};
use crate::series::{truncated_normal_form_with, Precision};
use crate::theory::{divisions, montage, overlaps_with, Context, Monomial, OverlapKind};

/// Longest word inserted between the two halves of a mixed-theory
/// disjoint family when it is expanded.
pub const MIXED_GAP_BOUND: usize = 2;

/// Norm levels below the superposition kept when a series-mode ambiguity
/// is resolved.
const SERIES_MARGIN: i64 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AmbiguityClass {
    Overlap,
    /// The lead of rule `inner` sits inside the lead of rule `outer`.
    Inclusion { inner: usize, outer: usize },
    /// Disjoint occurrences; only produced on request.
    Montage,
    /// Mixed theory: disjoint words sharing commutative variables.
    Disjoint,
}

/// Two simple reductions of one monomial: `context1(lead1) =
/// superposition = context2(lead2)`, with `(rule1, context1) <
/// (rule2, context2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ambiguity {
    pub rule1: usize,
    pub context1: Context,
    pub rule2: usize,
    pub context2: Context,
    pub superposition: Monomial,
    pub class: AmbiguityClass,
}

impl Ambiguity {
    /// The same ambiguity with the two reductions exchanged.
    pub fn flipped(&self) -> Ambiguity {
        Ambiguity {
            rule1: self.rule2,
            context1: self.context2.clone(),
            rule2: self.rule1,
            context2: self.context1.clone(),
            superposition: self.superposition.clone(),
            class: self.class,
        }
    }

    fn key(&self) -> (usize, &Context, usize, &Context) {
        (self.rule1, &self.context1, self.rule2, &self.context2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AmbiguityOptions {
    /// Keep coprime power-product pairs that the first criterion drops.
    pub keep_montages: bool,
    /// Expand mixed disjoint families with gap words up to this length.
    pub mixed_gap: usize,
}

/// The critical ambiguities of `sys`, sorted by superposition degree.
pub fn critical_ambiguities(sys: &RewritingSystem) -> Vec<Ambiguity> {
    critical_ambiguities_with(sys, AmbiguityOptions::default())
}

pub fn critical_ambiguities_with(sys: &RewritingSystem, opts: AmbiguityOptions) -> Vec<Ambiguity> {
    let mut out = BTreeSet::new();
    for j in 0..sys.len() {
        for i in 0..=j {
            out.extend(pair_ambiguities(sys, i, j, opts));
        }
    }
    sort_by_degree(out.into_iter().collect())
}

pub(crate) fn sort_by_degree(mut v: Vec<Ambiguity>) -> Vec<Ambiguity> {
    v.sort_by(|a, b| a.superposition.degree().cmp(&b.superposition.degree()).then_with(|| a.cmp(b)));
    v
}

/// Ambiguities between rules `i` and `j`, canonically oriented.
pub(crate) fn pair_ambiguities(sys: &RewritingSystem, i: usize, j: usize, opts: AmbiguityOptions) -> Vec<Ambiguity> {
    let (l1, l2) = (&sys.rule(i).lead, &sys.rule(j).lead);
    let mut out = BTreeSet::new();
    for d in overlaps_with(l1, l2, opts.keep_montages) {
        if i == j && d.context1 == d.context2 {
            continue;
        }
        let class = if montage(l1, &d.context1, l2, &d.context2).is_some() {
            AmbiguityClass::Montage
        } else {
            match d.kind {
                OverlapKind::Overlap => AmbiguityClass::Overlap,
                OverlapKind::Inclusion { first_inside: true } => AmbiguityClass::Inclusion { inner: i, outer: j },
                OverlapKind::Inclusion { first_inside: false } => AmbiguityClass::Inclusion { inner: j, outer: i },
                OverlapKind::Disjoint { .. } => AmbiguityClass::Disjoint,
            }
        };
        if class == AmbiguityClass::Disjoint {
            for g in gap_words(sys, opts.mixed_gap) {
                if let Some(a) = with_gap(&d.superposition, &d.context1, &d.context2, &g) {
                    out.insert(oriented(i, a.0, j, a.1, a.2, class));
                }
            }
        }
        out.insert(oriented(i, d.context1, j, d.context2, d.superposition, class));
    }
    out.into_iter().collect()
}

fn oriented(i: usize, c1: Context, j: usize, c2: Context, sup: Monomial, class: AmbiguityClass) -> Ambiguity {
    let a = Ambiguity { rule1: i, context1: c1, rule2: j, context2: c2, superposition: sup, class };
    if (a.rule2, &a.context2) < (a.rule1, &a.context1) {
        a.flipped()
    } else {
        a
    }
}

fn gap_words(sys: &RewritingSystem, max_len: usize) -> Vec<Vec<u32>> {
    let crate::theory::Theory::Mixed { noncommutative, .. } = sys.theory() else { return Vec::new() };
    let mut all = Vec::new();
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for x in 0..noncommutative.len() as u32 {
                let mut v: Vec<u32> = w.clone();
                v.push(x);
                next.push(v);
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

/// Inserts `gap` between the two words of an adjacent disjoint placement.
fn with_gap(
    sup: &Monomial,
    c1: &Context,
    c2: &Context,
    gap: &[u32],
) -> Option<(Context, Context, Monomial)> {
    let (
        Monomial::Mixed { comm, word },
        Context::Mixed { multiplier: m1, left: l1, right: r1 },
        Context::Mixed { multiplier: m2, left: l2, right: r2 },
    ) = (sup, c1, c2)
    else {
        return None;
    };
    // first lead's word comes first iff its context has nothing on the left
    let split = if l1.is_empty() { word.len() - r1.len() } else { l1.len() };
    let mut w = word[..split].to_vec();
    w.extend_from_slice(gap);
    w.extend_from_slice(&word[split..]);
    let grow_right = |r: &Vec<u32>| {
        let mut v = gap.to_vec();
        v.extend_from_slice(r);
        v
    };
    let grow_left = |l: &Vec<u32>| {
        let mut v = l.clone();
        v.extend_from_slice(gap);
        v
    };
    let (n1, n2) = if l1.is_empty() {
        (
            Context::Mixed { multiplier: m1.clone(), left: Vec::new(), right: grow_right(r1) },
            Context::Mixed { multiplier: m2.clone(), left: grow_left(l2), right: r2.clone() },
        )
    } else {
        (
            Context::Mixed { multiplier: m1.clone(), left: grow_left(l1), right: r1.clone() },
            Context::Mixed { multiplier: m2.clone(), left: Vec::new(), right: grow_right(r2) },
        )
    };
    Some((n1, n2, Monomial::Mixed { comm: comm.clone(), word: w }))
}

/// `context1(lower1) - context2(lower2)`.
pub fn s_polynomial(sys: &RewritingSystem, amb: &Ambiguity) -> Result<Element> {
    let a = sys.rule(amb.rule1).lower.apply_context(&amb.context1)?;
    let b = sys.rule(amb.rule2).lower.apply_context(&amb.context2)?;
    Ok(a.sub(&b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolution {
    /// The S-polynomial reduced to zero.
    Resolved,
    /// The chosen strategy stopped at a nonzero irreducible remainder.
    NotResolved,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionCertificate {
    pub s_polynomial: Element,
    pub trail: Vec<RewriteStep>,
    pub remainder: Element,
    pub status: Resolution,
}

pub fn resolve(sys: &RewritingSystem, amb: &Ambiguity) -> Result<ResolutionCertificate> {
    resolve_with(sys, amb, DEFAULT_MAX_STEPS)
}

/// Reduces the S-polynomial to normal form. In series mode the reduction
/// is truncated a fixed number of norm levels below the superposition, so
/// `Resolved` means resolved up to that precision.
pub fn resolve_with(sys: &RewritingSystem, amb: &Ambiguity, max_steps: usize) -> Result<ResolutionCertificate> {
    let s = s_polynomial(sys, amb)?;
    let opts = NormalFormOptions { max_steps, record_trail: true };
    let (remainder, trail) = if sys.order().is_well_founded() {
        let nf = normal_form_with(sys, &s, opts)?;
        (nf.element, nf.trail)
    } else {
        let w = sys.weights().ok_or(Error::DiscreteModeRequired)?;
        let top = w.exponent(sys.theory(), &amb.superposition);
        let floor: num_bigint::BigInt = top.floor().to_integer();
        let floor = i64::try_from(floor).unwrap_or(i64::MIN / 2);
        let n = (1 - (floor - SERIES_MARGIN)).max(1);
        let n = Precision::new(u32::try_from(n).unwrap_or(u32::MAX))?;
        let nf = truncated_normal_form_with(sys, &s, n, opts)?;
        (nf.representative, Vec::new())
    };
    let status = if remainder.is_zero() { Resolution::Resolved } else { Resolution::NotResolved };
    Ok(ResolutionCertificate { s_polynomial: s, trail, remainder, status })
}

/// Buchberger's second criterion. Pairs are visited in the given order;
/// a pair at `mu` is dropped when some third rule occurrence inside `mu`
/// splits it into two chained ambiguities each of which, after removing
/// their common context, is a montage or a pair already kept.
pub fn second_criterion_filter(sys: &RewritingSystem, pairs: &[Ambiguity]) -> Vec<Ambiguity> {
    let mut kept: Vec<Ambiguity> = Vec::new();
    let mut seen: BTreeSet<(usize, Context, usize, Context)> = BTreeSet::new();
    for amb in pairs {
        let covered = |i: usize, ci: &Context, j: usize, cj: &Context| -> bool {
            let Ok((_, a, b)) = ci.strip_common(cj) else { return false };
            if montage(&sys.rule(i).lead, &a, &sys.rule(j).lead, &b).is_some() {
                return true;
            }
            let key = if (j, &b) < (i, &a) { (j, b, i, a) } else { (i, a, j, b) };
            seen.contains(&key)
        };
        let mu = &amb.superposition;
        let redundant = (0..sys.len()).any(|k| {
            divisions(mu, &sys.rule(k).lead).into_iter().any(|vk| {
                let third = (k, &vk);
                third != (amb.rule1, &amb.context1)
                    && third != (amb.rule2, &amb.context2)
                    && covered(amb.rule1, &amb.context1, k, &vk)
                    && covered(k, &vk, amb.rule2, &amb.context2)
            })
        });
        if !redundant {
            let (i, ci, j, cj) = amb.key();
            seen.insert((i, ci.clone(), j, cj.clone()));
            kept.push(amb.clone());
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{MonomialOrder, OrderKind};
    use crate::scalar::Field;
    use crate::theory::Theory;

    type Rule<'a> = ([u32; 2], &'a [(i64, [u32; 2])]);

    fn comm(rules: &[Rule]) -> RewritingSystem {
        let t = Theory::commutative(["x", "y"]).unwrap();
        let o = MonomialOrder::new(OrderKind::Lex, &t).unwrap();
        let f = Field::Rational;
        let mut sys = RewritingSystem::new(t, o, f);
        for (lead, lower) in rules {
            let lower = Element::from_terms(f, lower.iter().map(|(c, e)| (Monomial::Power(e.to_vec()), f.from_i64(*c))));
            sys.add_rule(Monomial::Power(lead.to_vec()), lower).unwrap();
        }
        sys
    }

    fn words(rules: &[(&str, &str)]) -> RewritingSystem {
        let t = Theory::free_monoid(["x", "y"]).unwrap();
        let o = MonomialOrder::new(OrderKind::Deglex, &t).unwrap();
        let f = Field::Rational;
        let mut sys = RewritingSystem::new(t, o, f);
        let w = |s: &str| Monomial::Word(s.bytes().map(|b| (b - b'x') as u32).collect());
        for (lead, lower) in rules {
            sys.add_rule(w(lead), Element::monomial(f, w(lower))).unwrap();
        }
        sys
    }

    #[test]
    fn buchberger_pair() {
        let sys = comm(&[([2, 0], &[(1, [0, 1])]), ([1, 1], &[(1, [0, 0])])]);
        let amb = critical_ambiguities(&sys);
        assert_eq!(amb.len(), 1);
        assert_eq!(amb[0].superposition, Monomial::Power(vec![2, 1]));
        let s = s_polynomial(&sys, &amb[0]).unwrap();
        assert_eq!(sys.render(&s), "-x + y^2");
        let cert = resolve(&sys, &amb[0]).unwrap();
        assert_eq!(cert.status, Resolution::NotResolved);
        assert_eq!(cert.remainder, s);
        assert_eq!(s_polynomial(&sys, &amb[0].flipped()).unwrap(), s.neg());
    }

    #[test]
    fn word_examples() {
        assert!(critical_ambiguities(&words(&[("xy", "yx")])).is_empty());
        let inv = words(&[("xx", "")]);
        let amb = critical_ambiguities(&inv);
        assert_eq!(amb.len(), 1);
        assert_eq!(amb[0].superposition, Monomial::Word(vec![0, 0, 0]));
        assert!(s_polynomial(&inv, &amb[0]).unwrap().is_zero());
        let cert = resolve(&inv, &amb[0]).unwrap();
        assert_eq!(cert.status, Resolution::Resolved);
        assert!(cert.trail.is_empty());
    }

    #[test]
    fn path_overlap_cancels() {
        let t = Theory::path_algebra(["1", "2"], &[("a", "1", "2"), ("b", "2", "1")]).unwrap();
        let o = MonomialOrder::new(OrderKind::Deglex, &t).unwrap();
        let f = Field::Rational;
        let mut sys = RewritingSystem::new(t.clone(), o, f);
        let path = |arrows: &[u32], vertices: &[u32]| Monomial::Path(crate::theory::PathMonomial { arrows: arrows.to_vec(), vertices: vertices.to_vec() });
        sys.add_rule(path(&[0, 1], &[0, 1, 0]), Element::monomial(f, path(&[], &[0]))).unwrap();
        sys.add_rule(path(&[1, 0], &[1, 0, 1]), Element::monomial(f, path(&[], &[1]))).unwrap();
        let amb = critical_ambiguities(&sys);
        let aba = amb.iter().find(|a| a.superposition == path(&[0, 1, 0], &[0, 1, 0, 1])).unwrap();
        assert!(s_polynomial(&sys, aba).unwrap().is_zero());
        assert_eq!(resolve(&sys, aba).unwrap().status, Resolution::Resolved);
    }

    #[test]
    fn second_criterion_drops_chained_pair() {
        // leads x^2, xy, y^2; the coprime pair at x^2 y^2 chains through xy
        let sys = comm(&[([2, 0], &[]), ([1, 1], &[]), ([0, 2], &[])]);
        let all = critical_ambiguities_with(&sys, AmbiguityOptions { keep_montages: true, ..Default::default() });
        let kept = second_criterion_filter(&sys, &all);
        assert!(kept.len() < all.len());
        assert!(!kept.iter().any(|a| a.superposition == Monomial::Power(vec![2, 2])));
        for a in &all {
            assert_eq!(resolve(&sys, a).unwrap().status, Resolution::Resolved);
        }
        let two = comm(&[([2, 0], &[(1, [0, 1])]), ([1, 1], &[(1, [0, 0])])]);
        let pairs = critical_ambiguities(&two);
        assert_eq!(second_criterion_filter(&two, &pairs), pairs);
        assert!(second_criterion_filter(&two, &[]).is_empty());
    }

    #[test]
    fn word_bound_holds() {
        let sys = words(&[("xyx", "y"), ("yxy", "x"), ("xx", "")]);
        let n = critical_ambiguities(&sys).len();
        let bound = sys.len() * sys.rules().iter().map(|r| r.lead.degree()).sum::<usize>();
        assert!(n <= bound, "{n} > {bound}");
    }
}
