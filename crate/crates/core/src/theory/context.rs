use super::{add_exponents, Monomial, PathMonomial, Tree};
use crate::error::{Error, Result};

/// Which child of a node holds the hole of a tree context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// One level of a one-hole tree: the hole sits on `hole`, the other child
/// is `sibling`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeStep {
    pub hole: Side,
    pub sibling: Tree,
}

/// An embedding map `b ↦ v(b)` of a monomial theory.
///
/// Path contexts use `None` for an empty side; a `Some` vertex path on a
/// side acts as that vertex idempotent and can annihilate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Context {
    Word { left: Vec<u32>, right: Vec<u32> },
    Power { multiplier: Vec<u32> },
    Mixed { multiplier: Vec<u32>, left: Vec<u32>, right: Vec<u32> },
    /// Levels from the hole outwards.
    Tree { steps: Vec<TreeStep> },
    Path { left: Option<PathMonomial>, right: Option<PathMonomial> },
}

impl Context {
    /// The identity context of the theory `mu` belongs to.
    pub fn identity_for(mu: &Monomial) -> Context {
        match mu {
            Monomial::Word(_) => Context::Word { left: Vec::new(), right: Vec::new() },
            Monomial::Power(e) => Context::Power { multiplier: vec![0; e.len()] },
            Monomial::Mixed { comm, .. } => {
                Context::Mixed { multiplier: vec![0; comm.len()], left: Vec::new(), right: Vec::new() }
            }
            Monomial::Tree(_) => Context::Tree { steps: Vec::new() },
            Monomial::Path(_) => Context::Path { left: None, right: None },
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Context::Word { left, right } => left.is_empty() && right.is_empty(),
            Context::Power { multiplier } => multiplier.iter().all(|&k| k == 0),
            Context::Mixed { multiplier, left, right } => {
                multiplier.iter().all(|&k| k == 0) && left.is_empty() && right.is_empty()
            }
            Context::Tree { steps } => steps.is_empty(),
            Context::Path { left, right } => left.is_none() && right.is_none(),
        }
    }

    /// Number of generator occurrences the context adds.
    pub fn degree(&self) -> usize {
        match self {
            Context::Word { left, right } => left.len() + right.len(),
            Context::Power { multiplier } => multiplier.iter().map(|&k| k as usize).sum(),
            Context::Mixed { multiplier, left, right } => {
                multiplier.iter().map(|&k| k as usize).sum::<usize>() + left.len() + right.len()
            }
            Context::Tree { steps } => steps.iter().map(|s| s.sibling.leaves()).sum(),
            Context::Path { left, right } => {
                left.as_ref().map_or(0, PathMonomial::len) + right.as_ref().map_or(0, PathMonomial::len)
            }
        }
    }

    /// `v(mu)`; `Ok(None)` is the zero product of a path algebra.
    pub fn apply(&self, mu: &Monomial) -> Result<Option<Monomial>> {
        Ok(Some(match (self, mu) {
            (Context::Word { left, right }, Monomial::Word(w)) => {
                Monomial::Word(concat3(left, w, right))
            }
            (Context::Power { multiplier }, Monomial::Power(e)) if multiplier.len() == e.len() => {
                Monomial::Power(add_exponents(multiplier, e))
            }
            (Context::Mixed { multiplier, left, right }, Monomial::Mixed { comm, word })
                if multiplier.len() == comm.len() =>
            {
                Monomial::Mixed { comm: add_exponents(multiplier, comm), word: concat3(left, word, right) }
            }
            (Context::Tree { steps }, Monomial::Tree(t)) => {
                let mut cur = t.clone();
                for s in steps {
                    cur = match s.hole {
                        Side::Left => Tree::node(cur, s.sibling.clone()),
                        Side::Right => Tree::node(s.sibling.clone(), cur),
                    };
                }
                Monomial::Tree(cur)
            }
            (Context::Path { left, right }, Monomial::Path(p)) => {
                let mut cur = p.clone();
                if let Some(l) = left {
                    match l.compose(&cur) {
                        Some(c) => cur = c,
                        None => return Ok(None),
                    }
                }
                if let Some(r) = right {
                    match cur.compose(r) {
                        Some(c) => cur = c,
                        None => return Ok(None),
                    }
                }
                Monomial::Path(cur)
            }
            _ => return Err(Error::TheoryMismatch),
        }))
    }

    /// The composite `self ∘ inner`: apply `inner` first. `Ok(None)` when
    /// the composite is the zero map of a path algebra.
    pub fn compose(&self, inner: &Context) -> Result<Option<Context>> {
        Ok(Some(match (self, inner) {
            (Context::Word { left: l2, right: r2 }, Context::Word { left: l1, right: r1 }) => {
                Context::Word { left: concat(l2, l1), right: concat(r1, r2) }
            }
            (Context::Power { multiplier: m2 }, Context::Power { multiplier: m1 }) => {
                Context::Power { multiplier: add_exponents(m2, m1) }
            }
            (
                Context::Mixed { multiplier: m2, left: l2, right: r2 },
                Context::Mixed { multiplier: m1, left: l1, right: r1 },
            ) => Context::Mixed {
                multiplier: add_exponents(m2, m1),
                left: concat(l2, l1),
                right: concat(r1, r2),
            },
            (Context::Tree { steps: outer }, Context::Tree { steps: inner }) => {
                Context::Tree { steps: inner.iter().chain(outer).cloned().collect() }
            }
            (Context::Path { left: l2, right: r2 }, Context::Path { left: l1, right: r1 }) => {
                let join = |a: &Option<PathMonomial>, b: &Option<PathMonomial>| match (a, b) {
                    (None, x) | (x, None) => Some(x.clone()),
                    (Some(a), Some(b)) => a.compose(b).map(Some),
                };
                match (join(l2, l1), join(r1, r2)) {
                    (Some(left), Some(right)) => Context::Path { left, right },
                    _ => return Ok(None),
                }
            }
            _ => return Err(Error::TheoryMismatch),
        }))
    }

    /// Splits off the largest common outer part of two contexts:
    /// returns `(common, c1, c2)` with `common ∘ c1 = self` and
    /// `common ∘ c2 = other`.
    pub fn strip_common(&self, other: &Context) -> Result<(Context, Context, Context)> {
        match (self, other) {
            (Context::Word { left: l1, right: r1 }, Context::Word { left: l2, right: r2 }) => {
                let p = common_prefix(l1, l2);
                let s = common_suffix(r1, r2);
                Ok((
                    Context::Word { left: l1[..p].to_vec(), right: r1[r1.len() - s..].to_vec() },
                    Context::Word { left: l1[p..].to_vec(), right: r1[..r1.len() - s].to_vec() },
                    Context::Word { left: l2[p..].to_vec(), right: r2[..r2.len() - s].to_vec() },
                ))
            }
            (Context::Power { multiplier: m1 }, Context::Power { multiplier: m2 }) => {
                let g: Vec<u32> = m1.iter().zip(m2).map(|(a, b)| *a.min(b)).collect();
                Ok((
                    Context::Power { multiplier: g.clone() },
                    Context::Power { multiplier: sub_exponents(m1, &g) },
                    Context::Power { multiplier: sub_exponents(m2, &g) },
                ))
            }
            (
                Context::Mixed { multiplier: m1, left: l1, right: r1 },
                Context::Mixed { multiplier: m2, left: l2, right: r2 },
            ) => {
                let g: Vec<u32> = m1.iter().zip(m2).map(|(a, b)| *a.min(b)).collect();
                let p = common_prefix(l1, l2);
                let s = common_suffix(r1, r2);
                Ok((
                    Context::Mixed {
                        multiplier: g.clone(),
                        left: l1[..p].to_vec(),
                        right: r1[r1.len() - s..].to_vec(),
                    },
                    Context::Mixed {
                        multiplier: sub_exponents(m1, &g),
                        left: l1[p..].to_vec(),
                        right: r1[..r1.len() - s].to_vec(),
                    },
                    Context::Mixed {
                        multiplier: sub_exponents(m2, &g),
                        left: l2[p..].to_vec(),
                        right: r2[..r2.len() - s].to_vec(),
                    },
                ))
            }
            (Context::Tree { steps: s1 }, Context::Tree { steps: s2 }) => {
                let k = common_suffix(s1, s2);
                Ok((
                    Context::Tree { steps: s1[s1.len() - k..].to_vec() },
                    Context::Tree { steps: s1[..s1.len() - k].to_vec() },
                    Context::Tree { steps: s2[..s2.len() - k].to_vec() },
                ))
            }
            (Context::Path { left: l1, right: r1 }, Context::Path { left: l2, right: r2 }) => {
                let (cl, l1r, l2r) = split_path_prefix(l1, l2);
                let (cr, r1r, r2r) = split_path_suffix(r1, r2);
                Ok((
                    Context::Path { left: cl, right: cr },
                    Context::Path { left: l1r, right: r1r },
                    Context::Path { left: l2r, right: r2r },
                ))
            }
            _ => Err(Error::TheoryMismatch),
        }
    }
}

/// A two-hole embedding `w(b1, b2)`, the composition map of a montage.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BiContext {
    /// `left · b1 · middle · b2 · right`, holes exchanged when `swapped`.
    Word { left: Vec<u32>, middle: Vec<u32>, right: Vec<u32>, swapped: bool },
    /// `multiplier · b1 · b2`.
    Power { multiplier: Vec<u32> },
    Mixed { multiplier: Vec<u32>, left: Vec<u32>, middle: Vec<u32>, right: Vec<u32>, swapped: bool },
    Tree(TwoHoleTree),
    Path {
        left: Option<PathMonomial>,
        middle: Option<PathMonomial>,
        right: Option<PathMonomial>,
        swapped: bool,
    },
}

/// A tree skeleton with exactly one `First` and one `Second` hole.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TwoHoleTree {
    First,
    Second,
    Leaf(u32),
    Node(Box<TwoHoleTree>, Box<TwoHoleTree>),
}

impl TwoHoleTree {
    fn fill(&self, b1: &Tree, b2: &Tree) -> Tree {
        match self {
            TwoHoleTree::First => b1.clone(),
            TwoHoleTree::Second => b2.clone(),
            TwoHoleTree::Leaf(x) => Tree::Leaf(*x),
            TwoHoleTree::Node(l, r) => Tree::node(l.fill(b1, b2), r.fill(b1, b2)),
        }
    }
}

impl BiContext {
    /// `w(b1, b2)`; `Ok(None)` for a zero path product.
    pub fn apply(&self, b1: &Monomial, b2: &Monomial) -> Result<Option<Monomial>> {
        Ok(Some(match (self, b1, b2) {
            (BiContext::Word { left, middle, right, swapped }, Monomial::Word(x), Monomial::Word(y)) => {
                let (x, y) = if *swapped { (y, x) } else { (x, y) };
                Monomial::Word([left, x, middle, y, right].into_iter().flatten().copied().collect())
            }
            (BiContext::Power { multiplier }, Monomial::Power(x), Monomial::Power(y)) => {
                Monomial::Power(add_exponents(&add_exponents(multiplier, x), y))
            }
            (
                BiContext::Mixed { multiplier, left, middle, right, swapped },
                Monomial::Mixed { comm: c1, word: w1 },
                Monomial::Mixed { comm: c2, word: w2 },
            ) => {
                let (x, y) = if *swapped { (w2, w1) } else { (w1, w2) };
                Monomial::Mixed {
                    comm: add_exponents(&add_exponents(multiplier, c1), c2),
                    word: [left, x, middle, y, right].into_iter().flatten().copied().collect(),
                }
            }
            (BiContext::Tree(skel), Monomial::Tree(x), Monomial::Tree(y)) => Monomial::Tree(skel.fill(x, y)),
            (BiContext::Path { left, middle, right, swapped }, Monomial::Path(x), Monomial::Path(y)) => {
                let (x, y) = if *swapped { (y, x) } else { (x, y) };
                let mut cur: Option<PathMonomial> = left.clone();
                for piece in [Some(x), middle.as_ref(), Some(y), right.as_ref()].into_iter().flatten() {
                    cur = match cur {
                        None => Some(piece.clone()),
                        Some(c) => match c.compose(piece) {
                            Some(p) => Some(p),
                            None => return Ok(None),
                        },
                    };
                }
                Monomial::Path(cur.expect("nonempty"))
            }
            _ => return Err(Error::TheoryMismatch),
        }))
    }
}

/// Recognises `v1(mu1)` and `v2(mu2)` as disjoint occurrences inside the
/// same monomial, returning the composition map `w` with
/// `w(mu1, mu2) = v1(mu1)`. `None` when the occurrences overlap (or, for
/// power products, when `mu1·mu2` does not divide the superposition).
pub fn montage(mu1: &Monomial, v1: &Context, mu2: &Monomial, v2: &Context) -> Option<BiContext> {
    match (mu1, v1, mu2, v2) {
        (Monomial::Word(w1), Context::Word { left: l1, .. }, Monomial::Word(w2), Context::Word { left: l2, right: r2 }) => {
            let total = concat3(l2, w2, r2);
            let (a, b) = ((l1.len(), l1.len() + w1.len()), (l2.len(), l2.len() + w2.len()));
            disjoint_word(&total, a, b).map(|(left, middle, right, swapped)| BiContext::Word { left, middle, right, swapped })
        }
        (Monomial::Power(_), Context::Power { multiplier: m1 }, Monomial::Power(e2), _) => {
            m1.iter()
                .zip(e2)
                .all(|(m, e)| m >= e)
                .then(|| BiContext::Power { multiplier: sub_exponents(m1, e2) })
        }
        (
            Monomial::Mixed { comm: _, word: w1 },
            Context::Mixed { multiplier: m1, left: l1, .. },
            Monomial::Mixed { comm: c2, word: w2 },
            Context::Mixed { left: l2, right: r2, .. },
        ) => {
            if !m1.iter().zip(c2).all(|(m, e)| m >= e) {
                return None;
            }
            let total = concat3(l2, w2, r2);
            let (a, b) = ((l1.len(), l1.len() + w1.len()), (l2.len(), l2.len() + w2.len()));
            disjoint_word(&total, a, b).map(|(left, middle, right, swapped)| BiContext::Mixed {
                multiplier: sub_exponents(m1, c2),
                left,
                middle,
                right,
                swapped,
            })
        }
        (Monomial::Tree(_), Context::Tree { steps: s1 }, Monomial::Tree(t2), Context::Tree { steps: s2 }) => {
            // Root paths to each hole; disjoint iff neither is a prefix of the other.
            let p1: Vec<Side> = s1.iter().rev().map(|s| s.hole).collect();
            let p2: Vec<Side> = s2.iter().rev().map(|s| s.hole).collect();
            let k = common_prefix(&p1, &p2);
            if k == p1.len() || k == p2.len() {
                return None;
            }
            let whole = match (Context::Tree { steps: s2.clone() }).apply(&Monomial::Tree(t2.clone())) {
                Ok(Some(Monomial::Tree(t))) => t,
                _ => return None,
            };
            Some(BiContext::Tree(skeleton(&whole, &p1, &p2)))
        }
        (Monomial::Path(p1), Context::Path { left: l1, .. }, Monomial::Path(p2), Context::Path { left: l2, right: r2 }) => {
            let len = |o: &Option<PathMonomial>| o.as_ref().map_or(0, PathMonomial::len);
            let mut whole = l2.clone().unwrap_or_else(|| PathMonomial::vertex(p2.source()));
            whole = whole.compose(p2)?;
            if let Some(r) = r2 {
                whole = whole.compose(r)?;
            }
            let a = (len(l1), len(l1) + p1.len());
            let b = (len(l2), len(l2) + p2.len());
            let (first, second, swapped) = if a.0 < b.0 || (a.0 == b.0 && a.1 <= b.1) { (a, b, false) } else { (b, a, true) };
            if first.1 > second.0 || (first == second) {
                return None;
            }
            let piece = |from: usize, to: usize| -> Option<PathMonomial> {
                (from < to).then(|| whole.slice(from, to))
            };
            Some(BiContext::Path {
                left: piece(0, first.0),
                middle: piece(first.1, second.0),
                right: piece(second.1, whole.len()),
                swapped,
            })
        }
        _ => None,
    }
}

fn skeleton(t: &Tree, p1: &[Side], p2: &[Side]) -> TwoHoleTree {
    if p1.is_empty() {
        return TwoHoleTree::First;
    }
    if p2.is_empty() {
        return TwoHoleTree::Second;
    }
    match t {
        Tree::Leaf(x) => TwoHoleTree::Leaf(*x),
        Tree::Node(l, r) => {
            let go = |side: Side, sub: &Tree| -> TwoHoleTree {
                let q1 = if p1.first() == Some(&side) { &p1[1..] } else { &[][..] };
                let q2 = if p2.first() == Some(&side) { &p2[1..] } else { &[][..] };
                match (p1.first() == Some(&side), p2.first() == Some(&side)) {
                    (false, false) => plain(sub),
                    (true, false) => with_one(sub, q1, TwoHoleTree::First),
                    (false, true) => with_one(sub, q2, TwoHoleTree::Second),
                    (true, true) => skeleton(sub, q1, q2),
                }
            };
            TwoHoleTree::Node(Box::new(go(Side::Left, l)), Box::new(go(Side::Right, r)))
        }
    }
}

fn plain(t: &Tree) -> TwoHoleTree {
    match t {
        Tree::Leaf(x) => TwoHoleTree::Leaf(*x),
        Tree::Node(l, r) => TwoHoleTree::Node(Box::new(plain(l)), Box::new(plain(r))),
    }
}

fn with_one(t: &Tree, path: &[Side], hole: TwoHoleTree) -> TwoHoleTree {
    match (path.first(), t) {
        (None, _) => hole,
        (Some(side), Tree::Node(l, r)) => match side {
            Side::Left => TwoHoleTree::Node(Box::new(with_one(l, &path[1..], hole)), Box::new(plain(r))),
            Side::Right => TwoHoleTree::Node(Box::new(plain(l)), Box::new(with_one(r, &path[1..], hole))),
        },
        (Some(_), Tree::Leaf(x)) => TwoHoleTree::Leaf(*x),
    }
}

type Split = (Vec<u32>, Vec<u32>, Vec<u32>, bool);

fn disjoint_word(total: &[u32], a: (usize, usize), b: (usize, usize)) -> Option<Split> {
    let (first, second, swapped) = if a.0 < b.0 || (a.0 == b.0 && a.1 <= b.1) { (a, b, false) } else { (b, a, true) };
    // Two empty occurrences at one spot, or overlapping intervals, are not disjoint.
    if first.1 > second.0 || first == second {
        return None;
    }
    Some((
        total[..first.0].to_vec(),
        total[first.1..second.0].to_vec(),
        total[second.1..].to_vec(),
        swapped,
    ))
}

pub(crate) fn concat(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().chain(b).copied().collect()
}

pub(crate) fn concat3(a: &[u32], b: &[u32], c: &[u32]) -> Vec<u32> {
    a.iter().chain(b).chain(c).copied().collect()
}

pub(crate) fn sub_exponents(x: &[u32], y: &[u32]) -> Vec<u32> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

fn common_prefix<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

fn common_suffix<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    a.iter().rev().zip(b.iter().rev()).take_while(|(x, y)| x == y).count()
}

type PathSplit = (Option<PathMonomial>, Option<PathMonomial>, Option<PathMonomial>);

fn split_path_prefix(a: &Option<PathMonomial>, b: &Option<PathMonomial>) -> PathSplit {
    match (a, b) {
        (Some(x), Some(y)) => {
            let k = common_prefix(&x.arrows, &y.arrows);
            if k == 0 {
                return (None, a.clone(), b.clone());
            }
            let rest = |p: &PathMonomial| (k < p.len()).then(|| p.slice(k, p.len()));
            (Some(x.slice(0, k)), rest(x), rest(y))
        }
        _ => (None, a.clone(), b.clone()),
    }
}

fn split_path_suffix(a: &Option<PathMonomial>, b: &Option<PathMonomial>) -> PathSplit {
    match (a, b) {
        (Some(x), Some(y)) => {
            let k = common_suffix(&x.arrows, &y.arrows);
            if k == 0 {
                return (None, a.clone(), b.clone());
            }
            let rest = |p: &PathMonomial| (p.len() > k).then(|| p.slice(0, p.len() - k));
            (Some(x.slice(x.len() - k, x.len())), rest(x), rest(y))
        }
        _ => (None, a.clone(), b.clone()),
    }
}

/// All contexts `v` with `v(nu) = mu`, sorted.
pub fn divisions(mu: &Monomial, nu: &Monomial) -> Vec<Context> {
    let mut out = match (mu, nu) {
        (Monomial::Word(m), Monomial::Word(n)) => occurrences(m, n)
            .map(|i| Context::Word { left: m[..i].to_vec(), right: m[i + n.len()..].to_vec() })
            .collect(),
        (Monomial::Power(m), Monomial::Power(n)) => {
            if m.len() == n.len() && m.iter().zip(n).all(|(a, b)| a >= b) {
                vec![Context::Power { multiplier: sub_exponents(m, n) }]
            } else {
                Vec::new()
            }
        }
        (Monomial::Mixed { comm: cm, word: wm }, Monomial::Mixed { comm: cn, word: wn }) => {
            if cm.len() == cn.len() && cm.iter().zip(cn).all(|(a, b)| a >= b) {
                let mult = sub_exponents(cm, cn);
                occurrences(wm, wn)
                    .map(|i| Context::Mixed {
                        multiplier: mult.clone(),
                        left: wm[..i].to_vec(),
                        right: wm[i + wn.len()..].to_vec(),
                    })
                    .collect()
            } else {
                Vec::new()
            }
        }
        (Monomial::Tree(m), Monomial::Tree(n)) => {
            let mut found = Vec::new();
            subtree_positions(m, n, &mut Vec::new(), &mut found);
            found
                .into_iter()
                .map(|levels| {
                    // `levels` runs root-first; contexts store hole-first.
                    Context::Tree { steps: levels.into_iter().rev().collect() }
                })
                .collect()
        }
        (Monomial::Path(m), Monomial::Path(n)) => {
            let starts: Vec<usize> = if n.is_vertex() {
                (0..=m.len()).filter(|&i| m.vertices[i] == n.source()).collect()
            } else {
                occurrences(&m.arrows, &n.arrows).collect()
            };
            starts
                .into_iter()
                .map(|i| {
                    let j = i + n.len();
                    Context::Path {
                        left: (i > 0).then(|| m.slice(0, i)),
                        right: (j < m.len()).then(|| m.slice(j, m.len())),
                    }
                })
                .collect()
        }
        _ => Vec::new(),
    };
    out.sort();
    out
}

fn occurrences<'a>(hay: &'a [u32], needle: &'a [u32]) -> impl Iterator<Item = usize> + 'a {
    let n = needle.len();
    (0..=hay.len().saturating_sub(n))
        .filter(move |&i| hay.len() >= n && &hay[i..i + n] == needle)
}

fn subtree_positions(t: &Tree, target: &Tree, levels: &mut Vec<TreeStep>, out: &mut Vec<Vec<TreeStep>>) {
    if t == target {
        out.push(levels.clone());
    }
    if let Tree::Node(l, r) = t {
        levels.push(TreeStep { hole: Side::Left, sibling: (**r).clone() });
        subtree_positions(l, target, levels, out);
        levels.pop();
        levels.push(TreeStep { hole: Side::Right, sibling: (**l).clone() });
        subtree_positions(r, target, levels, out);
        levels.pop();
    }
}
