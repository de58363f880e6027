//! The five monomial families and their embedding contexts.
//!
//! A [`Theory`] fixes the generators; a [`Monomial`] is a theory-tagged
//! basis element; a [`Context`] is one of the multiplication maps
//! `b ↦ λ b ρ` (or the theory's analogue) that reductions are pushed
//! through.

mod context;
mod overlap;

pub use context::{divisions, montage, BiContext, Context, Side, TreeStep, TwoHoleTree};
pub use overlap::{lcm_superposition, overlaps, overlaps_with, OverlapDatum, OverlapKind};

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A full binary tree with labelled leaves, the basis of the free magma.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Leaf(u32),
    Node(Box<Tree>, Box<Tree>),
}

impl Tree {
    pub fn node(left: Tree, right: Tree) -> Tree {
        Tree::Node(Box::new(left), Box::new(right))
    }

    pub fn leaves(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node(l, r) => l.leaves() + r.leaves(),
        }
    }

    fn count_labels(&self, counts: &mut [u32]) {
        match self {
            Tree::Leaf(x) => counts[*x as usize] += 1,
            Tree::Node(l, r) => {
                l.count_labels(counts);
                r.count_labels(counts);
            }
        }
    }
}

/// A walk in a quiver: the visited vertices (one more than the arrows)
/// and the arrows taken. Length-0 walks are the vertex idempotents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathMonomial {
    pub arrows: Vec<u32>,
    pub vertices: Vec<u32>,
}

impl PathMonomial {
    pub fn vertex(v: u32) -> Self {
        PathMonomial { arrows: Vec::new(), vertices: vec![v] }
    }

    pub fn source(&self) -> u32 {
        self.vertices[0]
    }

    pub fn target(&self) -> u32 {
        *self.vertices.last().expect("path has a vertex")
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_vertex(&self) -> bool {
        self.arrows.is_empty()
    }

    /// The sub-walk over arrows `from..to`.
    pub fn slice(&self, from: usize, to: usize) -> PathMonomial {
        PathMonomial { arrows: self.arrows[from..to].to_vec(), vertices: self.vertices[from..=to].to_vec() }
    }

    /// Concatenation, `None` when the endpoints do not meet.
    pub fn compose(&self, next: &PathMonomial) -> Option<PathMonomial> {
        if self.target() != next.source() {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&next.arrows);
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&next.vertices[1..]);
        Some(PathMonomial { arrows, vertices })
    }
}

/// Basis element of one of the monomial theories.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Monomial {
    /// Word over the alphabet of a free monoid.
    Word(Vec<u32>),
    /// Exponent vector of a power product.
    Power(Vec<u32>),
    /// Commutative exponent vector times a noncommutative word.
    Mixed { comm: Vec<u32>, word: Vec<u32> },
    Tree(Tree),
    Path(PathMonomial),
}

impl Monomial {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Monomial::Word(_) => "free monoid",
            Monomial::Power(_) => "commutative",
            Monomial::Mixed { .. } => "mixed",
            Monomial::Tree(_) => "free magma",
            Monomial::Path(_) => "path algebra",
        }
    }

    pub(crate) fn same_kind(&self, other: &Monomial) -> bool {
        std::mem::discriminant(self) == std::mem::discriminant(other)
    }

    /// Number of generator occurrences (leaves for trees, arrows for paths).
    pub fn degree(&self) -> usize {
        match self {
            Monomial::Word(w) => w.len(),
            Monomial::Power(e) => e.iter().map(|&k| k as usize).sum(),
            Monomial::Mixed { comm, word } => {
                comm.iter().map(|&k| k as usize).sum::<usize>() + word.len()
            }
            Monomial::Tree(t) => t.leaves(),
            Monomial::Path(p) => p.arrows.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: u32,
    pub target: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

/// Which monomial family a system lives in, with its generator names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Theory {
    FreeMonoid { alphabet: Vec<String> },
    Commutative { alphabet: Vec<String> },
    Mixed { commutative: Vec<String>, noncommutative: Vec<String> },
    FreeMagma { alphabet: Vec<String> },
    PathAlgebra(Quiver),
}

fn check_names<'a>(names: impl IntoIterator<Item = &'a String>) -> Result<()> {
    let mut seen = HashSet::new();
    for n in names {
        if n.is_empty() {
            return Err(Error::InvalidTheory("empty generator name".into()));
        }
        if !seen.insert(n.as_str()) {
            return Err(Error::InvalidTheory(format!("duplicate symbol `{n}`")));
        }
    }
    Ok(())
}

impl Theory {
    pub fn free_monoid<S: Into<String>>(alphabet: impl IntoIterator<Item = S>) -> Result<Theory> {
        Theory::FreeMonoid { alphabet: alphabet.into_iter().map(Into::into).collect() }.validated()
    }

    pub fn commutative<S: Into<String>>(alphabet: impl IntoIterator<Item = S>) -> Result<Theory> {
        Theory::Commutative { alphabet: alphabet.into_iter().map(Into::into).collect() }.validated()
    }

    pub fn free_magma<S: Into<String>>(alphabet: impl IntoIterator<Item = S>) -> Result<Theory> {
        Theory::FreeMagma { alphabet: alphabet.into_iter().map(Into::into).collect() }.validated()
    }

    pub fn mixed<S: Into<String>, T: Into<String>>(
        commutative: impl IntoIterator<Item = S>,
        noncommutative: impl IntoIterator<Item = T>,
    ) -> Result<Theory> {
        Theory::Mixed {
            commutative: commutative.into_iter().map(Into::into).collect(),
            noncommutative: noncommutative.into_iter().map(Into::into).collect(),
        }
        .validated()
    }

    /// Path algebra of a quiver; arrows are `(name, source, target)` with
    /// vertex names.
    pub fn path_algebra<S: Into<String>>(
        vertices: impl IntoIterator<Item = S>,
        arrows: &[(&str, &str, &str)],
    ) -> Result<Theory> {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let find = |v: &str| -> Result<u32> {
            vertices
                .iter()
                .position(|x| x == v)
                .map(|i| i as u32)
                .ok_or_else(|| Error::InvalidTheory(format!("arrow references unknown vertex `{v}`")))
        };
        let arrows = arrows
            .iter()
            .map(|(n, s, t)| Ok(Arrow { name: n.to_string(), source: find(s)?, target: find(t)? }))
            .collect::<Result<Vec<_>>>()?;
        Theory::PathAlgebra(Quiver { vertices, arrows }).validated()
    }

    /// Checks the theory invariants: nonempty distinct alphabets, arrows
    /// between existing vertices.
    pub fn validated(self) -> Result<Theory> {
        match &self {
            Theory::FreeMonoid { alphabet }
            | Theory::Commutative { alphabet }
            | Theory::FreeMagma { alphabet } => {
                if alphabet.is_empty() {
                    return Err(Error::InvalidTheory("empty alphabet".into()));
                }
                check_names(alphabet)?;
            }
            Theory::Mixed { commutative, noncommutative } => {
                if commutative.is_empty() && noncommutative.is_empty() {
                    return Err(Error::InvalidTheory("empty alphabet".into()));
                }
                check_names(commutative.iter().chain(noncommutative))?;
            }
            Theory::PathAlgebra(q) => {
                if q.vertices.is_empty() {
                    return Err(Error::InvalidTheory("quiver has no vertices".into()));
                }
                check_names(&q.vertices)?;
                check_names(q.arrows.iter().map(|a| &a.name))?;
                for a in &q.arrows {
                    if a.source as usize >= q.vertices.len() || a.target as usize >= q.vertices.len() {
                        return Err(Error::InvalidTheory(format!(
                            "arrow `{}` references a missing vertex",
                            a.name
                        )));
                    }
                    if q.vertices.iter().any(|v| format!("e{v}") == a.name) {
                        return Err(Error::InvalidTheory(format!(
                            "arrow `{}` clashes with a vertex idempotent",
                            a.name
                        )));
                    }
                }
            }
        }
        Ok(self)
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Theory::FreeMonoid { .. } => "free monoid",
            Theory::Commutative { .. } => "commutative",
            Theory::Mixed { .. } => "mixed",
            Theory::FreeMagma { .. } => "free magma",
            Theory::PathAlgebra(_) => "path algebra",
        }
    }

    pub fn is_associative(&self) -> bool {
        !matches!(self, Theory::FreeMagma { .. })
    }

    /// Generator names in the global index space used by orders and
    /// weights: commutative letters first for mixed theories, arrows for
    /// path algebras.
    pub fn generator_names(&self) -> Vec<&str> {
        match self {
            Theory::FreeMonoid { alphabet }
            | Theory::Commutative { alphabet }
            | Theory::FreeMagma { alphabet } => alphabet.iter().map(String::as_str).collect(),
            Theory::Mixed { commutative, noncommutative } => {
                commutative.iter().chain(noncommutative).map(String::as_str).collect()
            }
            Theory::PathAlgebra(q) => q.arrows.iter().map(|a| a.name.as_str()).collect(),
        }
    }

    pub fn generator_count(&self) -> usize {
        self.generator_names().len()
    }

    /// Occurrence count of every generator in `mu`, in global index space.
    pub fn generator_counts(&self, mu: &Monomial) -> Vec<u32> {
        let mut counts = vec![0u32; self.generator_count()];
        match mu {
            Monomial::Word(w) => w.iter().for_each(|&x| counts[x as usize] += 1),
            Monomial::Power(e) => counts.copy_from_slice(e),
            Monomial::Mixed { comm, word } => {
                counts[..comm.len()].copy_from_slice(comm);
                let off = comm.len();
                word.iter().for_each(|&x| counts[off + x as usize] += 1);
            }
            Monomial::Tree(t) => t.count_labels(&mut counts),
            Monomial::Path(p) => p.arrows.iter().for_each(|&a| counts[a as usize] += 1),
        }
        counts
    }

    /// Whether `mu` is a well-formed monomial of this theory.
    pub fn contains(&self, mu: &Monomial) -> bool {
        fn tree_ok(t: &Tree, n: usize) -> bool {
            match t {
                Tree::Leaf(x) => (*x as usize) < n,
                Tree::Node(l, r) => tree_ok(l, n) && tree_ok(r, n),
            }
        }
        match (self, mu) {
            (Theory::FreeMonoid { alphabet }, Monomial::Word(w)) => {
                w.iter().all(|&x| (x as usize) < alphabet.len())
            }
            (Theory::Commutative { alphabet }, Monomial::Power(e)) => e.len() == alphabet.len(),
            (Theory::Mixed { commutative, noncommutative }, Monomial::Mixed { comm, word }) => {
                comm.len() == commutative.len()
                    && word.iter().all(|&x| (x as usize) < noncommutative.len())
            }
            (Theory::FreeMagma { alphabet }, Monomial::Tree(t)) => tree_ok(t, alphabet.len()),
            (Theory::PathAlgebra(q), Monomial::Path(p)) => {
                let nv = q.vertices.len() as u32;
                if p.vertices.len() != p.arrows.len() + 1 || p.vertices.iter().any(|&v| v >= nv) {
                    return false;
                }
                p.arrows.iter().enumerate().all(|(i, &a)| match q.arrows.get(a as usize) {
                    Some(arrow) => arrow.source == p.vertices[i] && arrow.target == p.vertices[i + 1],
                    None => false,
                })
            }
            _ => false,
        }
    }

    /// Path algebras only: same source and same target.
    pub fn uniform_equivalent(&self, mu: &Monomial, nu: &Monomial) -> Result<bool> {
        match (self, mu, nu) {
            (Theory::PathAlgebra(_), Monomial::Path(p), Monomial::Path(r)) => {
                Ok(p.source() == r.source() && p.target() == r.target())
            }
            (Theory::PathAlgebra(_), _, _) => Err(Error::TheoryMismatch),
            _ => Err(Error::WrongTheory { op: "uniform_equivalent", theory: self.kind_name() }),
        }
    }

    /// The multiplicative unit as a monomial, when the theory has one.
    /// Path algebras have the sum of vertices as unit, magmas none.
    pub fn unit(&self) -> Option<Monomial> {
        match self {
            Theory::FreeMonoid { .. } => Some(Monomial::Word(Vec::new())),
            Theory::Commutative { alphabet } => Some(Monomial::Power(vec![0; alphabet.len()])),
            Theory::Mixed { commutative, .. } => {
                Some(Monomial::Mixed { comm: vec![0; commutative.len()], word: Vec::new() })
            }
            Theory::FreeMagma { .. } | Theory::PathAlgebra(_) => None,
        }
    }

    /// The generator with global index `g` as a monomial.
    pub fn generator(&self, g: usize) -> Monomial {
        match self {
            Theory::FreeMonoid { .. } => Monomial::Word(vec![g as u32]),
            Theory::Commutative { alphabet } => {
                let mut e = vec![0; alphabet.len()];
                e[g] = 1;
                Monomial::Power(e)
            }
            Theory::Mixed { commutative, .. } => {
                let mut comm = vec![0; commutative.len()];
                if g < commutative.len() {
                    comm[g] = 1;
                    Monomial::Mixed { comm, word: Vec::new() }
                } else {
                    Monomial::Mixed { comm, word: vec![(g - commutative.len()) as u32] }
                }
            }
            Theory::FreeMagma { .. } => Monomial::Tree(Tree::Leaf(g as u32)),
            Theory::PathAlgebra(q) => {
                let a = &q.arrows[g];
                Monomial::Path(PathMonomial { arrows: vec![g as u32], vertices: vec![a.source, a.target] })
            }
        }
    }

    /// Product of two monomials; `None` is the zero product of a path
    /// algebra. Magma products build the node `(a*b)`.
    pub fn multiply(&self, a: &Monomial, b: &Monomial) -> Result<Option<Monomial>> {
        Ok(Some(match (a, b) {
            (Monomial::Word(x), Monomial::Word(y)) => {
                Monomial::Word(x.iter().chain(y).copied().collect())
            }
            (Monomial::Power(x), Monomial::Power(y)) => Monomial::Power(add_exponents(x, y)),
            (Monomial::Mixed { comm: c1, word: w1 }, Monomial::Mixed { comm: c2, word: w2 }) => {
                Monomial::Mixed {
                    comm: add_exponents(c1, c2),
                    word: w1.iter().chain(w2).copied().collect(),
                }
            }
            (Monomial::Tree(x), Monomial::Tree(y)) => Monomial::Tree(Tree::node(x.clone(), y.clone())),
            (Monomial::Path(x), Monomial::Path(y)) => match x.compose(y) {
                Some(p) => Monomial::Path(p),
                None => return Ok(None),
            },
            _ => return Err(Error::TheoryMismatch),
        }))
    }

    /// Every monomial of the given degree, in a deterministic order.
    pub fn monomials_of_degree(&self, degree: usize) -> Vec<Monomial> {
        match self {
            Theory::FreeMonoid { alphabet } => {
                words(alphabet.len(), degree).into_iter().map(Monomial::Word).collect()
            }
            Theory::Commutative { alphabet } => {
                exponent_vectors(alphabet.len(), degree).into_iter().map(Monomial::Power).collect()
            }
            Theory::Mixed { commutative, noncommutative } => {
                let mut out = Vec::new();
                for k in 0..=degree {
                    let comms = exponent_vectors(commutative.len(), k);
                    let ws = words(noncommutative.len(), degree - k);
                    for c in &comms {
                        for w in &ws {
                            out.push(Monomial::Mixed { comm: c.clone(), word: w.clone() });
                        }
                    }
                }
                out
            }
            Theory::FreeMagma { alphabet } => {
                trees(alphabet.len(), degree).into_iter().map(Monomial::Tree).collect()
            }
            Theory::PathAlgebra(q) => {
                let mut current: Vec<PathMonomial> =
                    (0..q.vertices.len() as u32).map(PathMonomial::vertex).collect();
                for _ in 0..degree {
                    let mut next = Vec::new();
                    for p in &current {
                        for (i, a) in q.arrows.iter().enumerate() {
                            if a.source == p.target() {
                                let mut step = p.clone();
                                step.arrows.push(i as u32);
                                step.vertices.push(a.target);
                                next.push(step);
                            }
                        }
                    }
                    current = next;
                }
                current.into_iter().map(Monomial::Path).collect()
            }
        }
    }

    /// Renders a monomial in the expression syntax.
    pub fn render(&self, mu: &Monomial) -> String {
        let names = self.generator_names();
        match (self, mu) {
            (_, Monomial::Word(w)) => render_word(&names, w, 0),
            (_, Monomial::Power(e)) => render_power(&names, e),
            (_, Monomial::Mixed { comm, word }) => {
                let c = render_power(&names, comm);
                let w = render_word(&names, word, comm.len());
                match (c.as_str(), w.as_str()) {
                    ("1", _) => w,
                    (_, "1") => c,
                    _ => format!("{c}*{w}"),
                }
            }
            (_, Monomial::Tree(t)) => {
                fn go(t: &Tree, names: &[&str], out: &mut String) {
                    match t {
                        Tree::Leaf(x) => out.push_str(names.get(*x as usize).copied().unwrap_or("?")),
                        Tree::Node(l, r) => {
                            out.push('(');
                            go(l, names, out);
                            out.push('*');
                            go(r, names, out);
                            out.push(')');
                        }
                    }
                }
                let mut s = String::new();
                go(t, &names, &mut s);
                s
            }
            (Theory::PathAlgebra(q), Monomial::Path(p)) => {
                if p.arrows.is_empty() {
                    format!("e{}", q.vertices.get(p.source() as usize).map(String::as_str).unwrap_or("?"))
                } else {
                    render_word(&names, &p.arrows, 0)
                }
            }
            (_, Monomial::Path(p)) => format!("{p:?}"),
        }
    }
}

pub(crate) fn add_exponents(x: &[u32], y: &[u32]) -> Vec<u32> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

fn render_word(names: &[&str], w: &[u32], offset: usize) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    let mut out = String::new();
    let mut i = 0;
    while i < w.len() {
        let mut j = i;
        while j < w.len() && w[j] == w[i] {
            j += 1;
        }
        if !out.is_empty() {
            out.push('*');
        }
        out.push_str(names.get(offset + w[i] as usize).copied().unwrap_or("?"));
        if j - i > 1 {
            let _ = write!(out, "^{}", j - i);
        }
        i = j;
    }
    out
}

fn render_power(names: &[&str], e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| if k == 1 { names[i].to_string() } else { format!("{}^{k}", names[i]) })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn words(letters: usize, len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..letters as u32).map(move |x| {
                    let mut w = w.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn exponent_vectors(vars: usize, degree: usize) -> Vec<Vec<u32>> {
    if vars == 0 {
        return if degree == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=degree).rev() {
        for mut rest in exponent_vectors(vars - 1, degree - first) {
            rest.insert(0, first as u32);
            out.push(rest);
        }
    }
    out
}

fn trees(letters: usize, leaves: usize) -> Vec<Tree> {
    if leaves == 0 {
        return Vec::new();
    }
    if leaves == 1 {
        return (0..letters as u32).map(Tree::Leaf).collect();
    }
    let mut out = Vec::new();
    for k in 1..leaves {
        let lefts = trees(letters, k);
        let rights = trees(letters, leaves - k);
        for l in &lefts {
            for r in &rights {
                out.push(Tree::node(l.clone(), r.clone()));
            }
        }
    }
    out
}
