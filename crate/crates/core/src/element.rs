//! Sparse linear combinations of monomials.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::order::MonomialOrder;
use crate::scalar::{Field, Scalar};
use crate::theory::{Context, Monomial, Theory};

/// A finite linear combination with no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    field: Field,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Element {
    pub fn zero(field: Field) -> Element {
        Element { field, terms: BTreeMap::new() }
    }

    pub fn monomial(field: Field, mu: Monomial) -> Element {
        Element::term(mu, field.one())
    }

    pub fn term(mu: Monomial, c: Scalar) -> Element {
        let mut e = Element::zero(c.field());
        e.add_term(mu, c);
        e
    }

    pub fn from_terms(field: Field, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Element {
        let mut e = Element::zero(field);
        for (mu, c) in terms {
            e.add_term(mu, c);
        }
        e
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in structural order; see [`Element::sorted_terms`] for the
    /// canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn contains(&self, mu: &Monomial) -> bool {
        self.terms.contains_key(mu)
    }

    pub fn coefficient_of(&self, mu: &Monomial) -> Scalar {
        self.terms.get(mu).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Adds `c·mu` in place.
    pub fn add_term(&mut self, mu: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mu) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub(crate) fn remove(&mut self, mu: &Monomial) -> Option<Scalar> {
        self.terms.remove(mu)
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (mu, c) in &other.terms {
            out.add_term(mu.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (mu, c) in &other.terms {
            out.add_term(mu.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        if c.is_zero() {
            return Element::zero(self.field);
        }
        Element { field: self.field, terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn neg(&self) -> Element {
        Element { field: self.field, terms: self.terms.iter().map(|(m, x)| (m.clone(), -x)).collect() }
    }

    /// `v(self)`, dropping terms the context sends to zero.
    pub fn apply_context(&self, v: &Context) -> Result<Element> {
        let mut out = Element::zero(self.field);
        for (mu, c) in &self.terms {
            if let Some(m) = v.apply(mu)? {
                out.add_term(m, c.clone());
            }
        }
        Ok(out)
    }

    /// Product with another element, distributing over terms.
    pub fn multiply(&self, theory: &Theory, other: &Element) -> Result<Element> {
        let mut out = Element::zero(self.field);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some(m) = theory.multiply(a, b)? {
                    out.add_term(m, x * y);
                }
            }
        }
        Ok(out)
    }

    /// Support sorted descending in the order's total extension.
    pub fn sorted_terms(&self, theory: &Theory, order: &MonomialOrder) -> Vec<(&Monomial, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| order.cmp_total(theory, b.0, a.0));
        v
    }

    /// The maximal support monomials; empty iff the element is zero.
    pub fn leading_monomials(&self, theory: &Theory, order: &MonomialOrder) -> Vec<Monomial> {
        let mut out: Vec<Monomial> = self
            .terms
            .keys()
            .filter(|mu| !self.terms.keys().any(|nu| order.less(theory, mu, nu)))
            .cloned()
            .collect();
        out.sort_by(|a, b| order.cmp_total(theory, b, a));
        out
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Checks every monomial belongs to `theory` and every coefficient to
    /// `field`.
    pub fn check(&self, theory: &Theory, field: Field) -> Result<()> {
        if self.field != field {
            return Err(Error::InvalidRule {
                rule: String::new(),
                reason: format!("coefficients live in {} instead of {field}", self.field),
            });
        }
        match self.terms.keys().find(|mu| !theory.contains(mu)) {
            Some(mu) => Err(Error::InvalidRule {
                rule: String::new(),
                reason: format!("{mu:?} is not a monomial of the {} theory", theory.kind_name()),
            }),
            None => Ok(()),
        }
    }

    /// Expression syntax, terms descending.
    pub fn render(&self, theory: &Theory, order: &MonomialOrder) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (mu, c)) in self.sorted_terms(theory, order).into_iter().enumerate() {
            let (neg, abs) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let m = theory.render(mu);
            let unit = theory.unit().as_ref() == Some(mu);
            if unit {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&m);
            } else {
                out.push_str(&format!("{abs}*{m}"));
            }
        }
        out
    }
}
