//! Minimal superpositions of two leading monomials.
//!
//! Each datum is a monomial `sup` with contexts `v1`, `v2` such that
//! `v1(mu1) = sup = v2(mu2)`. Only shadow-minimal placements are
//! produced, and disjoint placements (montages) are dropped except where
//! the theory makes them critical.

use super::context::{concat, sub_exponents};
use super::{Context, Monomial, PathMonomial};
use crate::error::{Error, Result};

/// How the two leads sit inside the superposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OverlapKind {
    /// The leads share a proper piece; neither contains the other.
    Overlap,
    /// One lead occurs inside the other. `first_inside` tells whether the
    /// first lead is the inner one.
    Inclusion { first_inside: bool },
    /// Mixed theory only: the word parts sit side by side while the
    /// commutative parts share a factor. The datum is the adjacent
    /// placement; the family continues with any word inserted between.
    /// `first_left` tells whether the first lead's word comes first.
    Disjoint { first_left: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OverlapDatum {
    pub superposition: Monomial,
    pub context1: Context,
    pub context2: Context,
    pub kind: OverlapKind,
}

/// Enumerates the minimal superpositions of `mu1` and `mu2`.
///
/// When `mu1 == mu2` the identity placement is included; callers decide
/// whether the two leads come from distinct rules.
pub fn overlaps(mu1: &Monomial, mu2: &Monomial) -> Vec<OverlapDatum> {
    overlaps_with(mu1, mu2, false)
}

/// As [`overlaps`]; with `keep_montages` the coprime lcm of two power
/// products is kept instead of being discarded by the first criterion.
pub fn overlaps_with(mu1: &Monomial, mu2: &Monomial, keep_montages: bool) -> Vec<OverlapDatum> {
    let mut out = match (mu1, mu2) {
        (Monomial::Word(a), Monomial::Word(b)) => word_overlaps(a, b)
            .into_iter()
            .map(|(sup, (l1, r1), (l2, r2), kind)| OverlapDatum {
                superposition: Monomial::Word(sup),
                context1: Context::Word { left: l1, right: r1 },
                context2: Context::Word { left: l2, right: r2 },
                kind,
            })
            .collect(),
        (Monomial::Power(a), Monomial::Power(b)) => {
            if !keep_montages && a.iter().zip(b).all(|(x, y)| x.min(y) == &0) && a != b {
                // coprime: montage, first criterion
                Vec::new()
            } else {
                let (sup, c1, c2) = lcm_parts(a, b);
                let kind = inclusion_kind(&c1, &c2);
                vec![OverlapDatum {
                    superposition: Monomial::Power(sup),
                    context1: Context::Power { multiplier: c1 },
                    context2: Context::Power { multiplier: c2 },
                    kind,
                }]
            }
        }
        (Monomial::Mixed { comm: c1, word: w1 }, Monomial::Mixed { comm: c2, word: w2 }) => {
            mixed_overlaps(c1, w1, c2, w2)
        }
        (Monomial::Tree(_), Monomial::Tree(_)) => {
            let mut out: Vec<OverlapDatum> = super::divisions(mu1, mu2)
                .into_iter()
                .map(|v| OverlapDatum {
                    superposition: mu1.clone(),
                    context1: Context::identity_for(mu1),
                    context2: v,
                    kind: OverlapKind::Inclusion { first_inside: false },
                })
                .collect();
            if mu1 != mu2 {
                out.extend(super::divisions(mu2, mu1).into_iter().map(|v| OverlapDatum {
                    superposition: mu2.clone(),
                    context1: v,
                    context2: Context::identity_for(mu2),
                    kind: OverlapKind::Inclusion { first_inside: true },
                }));
            }
            out
        }
        (Monomial::Path(a), Monomial::Path(b)) => path_overlaps(a, b),
        _ => Vec::new(),
    };
    out.sort();
    out.dedup();
    out
}

/// `(lcm, lcm/mu1, lcm/mu2)` for power products.
pub fn lcm_superposition(mu1: &Monomial, mu2: &Monomial) -> Result<(Monomial, Context, Context)> {
    match (mu1, mu2) {
        (Monomial::Power(a), Monomial::Power(b)) if a.len() == b.len() => {
            let (sup, c1, c2) = lcm_parts(a, b);
            Ok((
                Monomial::Power(sup),
                Context::Power { multiplier: c1 },
                Context::Power { multiplier: c2 },
            ))
        }
        (Monomial::Power(_), Monomial::Power(_)) => Err(Error::TheoryMismatch),
        _ => Err(Error::WrongTheory { op: "lcm_superposition", theory: mu1.kind_name() }),
    }
}

fn lcm_parts(a: &[u32], b: &[u32]) -> (Vec<u32>, Vec<u32>, Vec<u32>) {
    let sup: Vec<u32> = a.iter().zip(b).map(|(x, y)| *x.max(y)).collect();
    let c1 = sub_exponents(&sup, a);
    let c2 = sub_exponents(&sup, b);
    (sup, c1, c2)
}

fn inclusion_kind(c1: &[u32], c2: &[u32]) -> OverlapKind {
    if c1.iter().all(|&k| k == 0) {
        OverlapKind::Inclusion { first_inside: false }
    } else if c2.iter().all(|&k| k == 0) {
        OverlapKind::Inclusion { first_inside: true }
    } else {
        OverlapKind::Overlap
    }
}

type WordCtx = (Vec<u32>, Vec<u32>);
type WordOverlap = (Vec<u32>, WordCtx, WordCtx, OverlapKind);

/// Inclusions both ways and proper overlaps both ways.
fn word_overlaps(a: &[u32], b: &[u32]) -> Vec<WordOverlap> {
    let mut out = Vec::new();
    for i in positions(a, b) {
        out.push((
            a.to_vec(),
            (Vec::new(), Vec::new()),
            (a[..i].to_vec(), a[i + b.len()..].to_vec()),
            OverlapKind::Inclusion { first_inside: false },
        ));
    }
    if a != b {
        for i in positions(b, a) {
            out.push((
                b.to_vec(),
                (b[..i].to_vec(), b[i + a.len()..].to_vec()),
                (Vec::new(), Vec::new()),
                OverlapKind::Inclusion { first_inside: true },
            ));
        }
    }
    let m = a.len().min(b.len());
    for k in 1..m {
        // suffix of a = prefix of b
        if a[a.len() - k..] == b[..k] {
            out.push((
                concat(a, &b[k..]),
                (Vec::new(), b[k..].to_vec()),
                (a[..a.len() - k].to_vec(), Vec::new()),
                OverlapKind::Overlap,
            ));
        }
        // suffix of b = prefix of a
        if b[b.len() - k..] == a[..k] {
            out.push((
                concat(b, &a[k..]),
                (b[..b.len() - k].to_vec(), Vec::new()),
                (Vec::new(), a[k..].to_vec()),
                OverlapKind::Overlap,
            ));
        }
    }
    out
}

fn positions(hay: &[u32], needle: &[u32]) -> Vec<usize> {
    if needle.len() > hay.len() {
        return Vec::new();
    }
    (0..=hay.len() - needle.len()).filter(|&i| hay[i..i + needle.len()] == *needle).collect()
}

fn mixed_overlaps(c1: &[u32], w1: &[u32], c2: &[u32], w2: &[u32]) -> Vec<OverlapDatum> {
    let coprime = c1.iter().zip(c2).all(|(x, y)| x.min(y) == &0);
    let (lcm, m1, m2) = lcm_parts(c1, c2);
    let mk = |word: Vec<u32>, (l1, r1): WordCtx, (l2, r2): WordCtx, kind| OverlapDatum {
        superposition: Monomial::Mixed { comm: lcm.clone(), word },
        context1: Context::Mixed { multiplier: m1.clone(), left: l1, right: r1 },
        context2: Context::Mixed { multiplier: m2.clone(), left: l2, right: r2 },
        kind,
    };
    match (w1.is_empty(), w2.is_empty()) {
        (false, false) => {
            let mut out: Vec<OverlapDatum> = word_overlaps(w1, w2)
                .into_iter()
                .map(|(sup, x, y, kind)| {
                    let kind = match kind {
                        OverlapKind::Inclusion { first_inside } => {
                            // the word inclusion is an inclusion of monomials only
                            // when the commutative parts nest the same way
                            let outer = if first_inside { &m2 } else { &m1 };
                            if outer.iter().all(|&k| k == 0) {
                                kind
                            } else {
                                OverlapKind::Overlap
                            }
                        }
                        k => k,
                    };
                    mk(sup, x, y, kind)
                })
                .collect();
            if !coprime {
                out.push(mk(concat(w1, w2), (Vec::new(), w2.to_vec()), (w1.to_vec(), Vec::new()), OverlapKind::Disjoint { first_left: true }));
                out.push(mk(concat(w2, w1), (w2.to_vec(), Vec::new()), (Vec::new(), w1.to_vec()), OverlapKind::Disjoint { first_left: false }));
            }
            out
        }
        // A lead without letters acts at the front of the word.
        (true, false) if !coprime => vec![mk(
            w2.to_vec(),
            (Vec::new(), w2.to_vec()),
            (Vec::new(), Vec::new()),
            inclusion_kind(&m1, &m2),
        )],
        (false, true) if !coprime => vec![mk(
            w1.to_vec(),
            (Vec::new(), Vec::new()),
            (Vec::new(), w1.to_vec()),
            inclusion_kind(&m1, &m2),
        )],
        (true, true) if !coprime || c1 == c2 => {
            vec![mk(Vec::new(), (Vec::new(), Vec::new()), (Vec::new(), Vec::new()), inclusion_kind(&m1, &m2))]
        }
        _ => Vec::new(),
    }
}

fn path_overlaps(a: &PathMonomial, b: &PathMonomial) -> Vec<OverlapDatum> {
    let ctx = |l: Option<PathMonomial>, r: Option<PathMonomial>| Context::Path { left: l, right: r };
    let side = |p: &PathMonomial, from: usize, to: usize| (from < to).then(|| p.slice(from, to));
    let mut out = Vec::new();
    let mut inclusions = |outer: &PathMonomial, inner: &PathMonomial, first_inside: bool| {
        for v in super::divisions(&Monomial::Path(outer.clone()), &Monomial::Path(inner.clone())) {
            let id = ctx(None, None);
            let (c1, c2) = if first_inside { (v, id) } else { (id, v) };
            out.push(OverlapDatum {
                superposition: Monomial::Path(outer.clone()),
                context1: c1,
                context2: c2,
                kind: OverlapKind::Inclusion { first_inside },
            });
        }
    };
    inclusions(a, b, false);
    if a != b {
        inclusions(b, a, true);
    }
    let m = a.len().min(b.len());
    for k in 1..m {
        if a.arrows[a.len() - k..] == b.arrows[..k] {
            let sup = a.compose(&b.slice(k, b.len()));
            if let Some(sup) = sup {
                out.push(OverlapDatum {
                    superposition: Monomial::Path(sup),
                    context1: ctx(None, side(b, k, b.len())),
                    context2: ctx(side(a, 0, a.len() - k), None),
                    kind: OverlapKind::Overlap,
                });
            }
        }
        if b.arrows[b.len() - k..] == a.arrows[..k] {
            if let Some(sup) = b.compose(&a.slice(k, a.len())) {
                out.push(OverlapDatum {
                    superposition: Monomial::Path(sup),
                    context1: ctx(side(b, 0, b.len() - k), None),
                    context2: ctx(None, side(a, k, a.len())),
                    kind: OverlapKind::Overlap,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Monomial {
        Monomial::Word(s.bytes().map(|b| (b - b'a') as u32).collect())
    }

    fn check(mu1: &Monomial, mu2: &Monomial, data: &[OverlapDatum]) {
        for d in data {
            assert_eq!(d.context1.apply(mu1).unwrap().as_ref(), Some(&d.superposition));
            assert_eq!(d.context2.apply(mu2).unwrap().as_ref(), Some(&d.superposition));
        }
    }

    #[test]
    fn commutative_lcm() {
        let x2 = Monomial::Power(vec![2, 0]);
        let xy = Monomial::Power(vec![1, 1]);
        let got = overlaps(&x2, &xy);
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].superposition, Monomial::Power(vec![2, 1]));
        check(&x2, &xy, &got);
        assert!(overlaps(&x2, &Monomial::Power(vec![0, 3])).is_empty());
    }

    #[test]
    fn lcm_contexts() {
        let (l, c1, c2) =
            lcm_superposition(&Monomial::Power(vec![2, 0]), &Monomial::Power(vec![1, 1])).unwrap();
        assert_eq!(l, Monomial::Power(vec![2, 1]));
        assert_eq!(c1, Context::Power { multiplier: vec![0, 1] });
        assert_eq!(c2, Context::Power { multiplier: vec![1, 0] });
        let (l, c1, c2) =
            lcm_superposition(&Monomial::Power(vec![1, 0]), &Monomial::Power(vec![1, 0])).unwrap();
        assert_eq!(l, Monomial::Power(vec![1, 0]));
        assert!(c1.is_identity() && c2.is_identity());
        assert!(lcm_superposition(&w("a"), &w("b")).is_err());
    }

    #[test]
    fn word_overlaps_ab_ba() {
        let got = overlaps(&w("ab"), &w("ba"));
        let sups: Vec<_> = got.iter().map(|d| d.superposition.clone()).collect();
        assert_eq!(got.len(), 2);
        assert!(sups.contains(&w("aba")) && sups.contains(&w("bab")));
        check(&w("ab"), &w("ba"), &got);
    }

    #[test]
    fn word_self_overlap() {
        // x^2 with itself: identity inclusion plus x^3 both ways
        let got = overlaps(&w("aa"), &w("aa"));
        check(&w("aa"), &w("aa"), &got);
        assert_eq!(got.iter().filter(|d| d.kind == OverlapKind::Overlap).count(), 2);
        assert_eq!(got.iter().filter(|d| d.superposition == w("aa")).count(), 1);
    }

    #[test]
    fn path_overlap_aba() {
        let a_b = PathMonomial { arrows: vec![0, 1], vertices: vec![0, 1, 0] };
        let b_a = PathMonomial { arrows: vec![1, 0], vertices: vec![1, 0, 1] };
        let (m1, m2) = (Monomial::Path(a_b), Monomial::Path(b_a));
        let got = overlaps(&m1, &m2);
        check(&m1, &m2, &got);
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn mixed_disjoint_family_only_when_sharing() {
        let m1 = Monomial::Mixed { comm: vec![1], word: vec![0] };
        let m2 = Monomial::Mixed { comm: vec![1], word: vec![1] };
        let got = overlaps(&m1, &m2);
        check(&m1, &m2, &got);
        assert_eq!(got.len(), 2);
        let n2 = Monomial::Mixed { comm: vec![0], word: vec![1] };
        assert!(overlaps(&m1, &n2).is_empty());
    }
}
