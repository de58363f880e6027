//! Power-series mode: weight ultranorms, admission checks and normal forms
//! truncated at a precision.
//!
//! A monomial of weight `s = Σ w(x)` has norm `2^s`; norms are kept as the
//! exact exponent `s`. The neighbourhood `B_n` holds the elements of norm
//! below `2^(1-n)`, so a representative modulo `B_n` keeps exactly the
//! terms with exponent at least `1 - n`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::element::Element;
use crate::error::{Error, Result};
use crate::order::{MonomialOrder, OrderKind};
use crate::rewriting::{reduce_to_irreducible, NormalFormOptions, RewriteStep, RewritingSystem};
use crate::theory::{Monomial, Theory};

/// Generator weights in the theory's global index space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightData {
    weights: Vec<BigRational>,
}

impl WeightData {
    pub fn new(weights: Vec<BigRational>) -> WeightData {
        WeightData { weights }
    }

    pub fn zeros(n: usize) -> WeightData {
        WeightData { weights: vec![BigRational::zero(); n] }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn as_slice(&self) -> &[BigRational] {
        &self.weights
    }

    /// `log2 U(mu)`.
    pub fn exponent(&self, theory: &Theory, mu: &Monomial) -> BigRational {
        theory
            .generator_counts(mu)
            .iter()
            .zip(&self.weights)
            .filter(|(c, _)| **c > 0)
            .fold(BigRational::zero(), |acc, (&c, w)| acc + w * BigRational::from_integer(c.into()))
    }
}

/// `log2 ‖a‖`, with `NegInfinity` for zero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum NormExponent {
    NegInfinity,
    Finite(BigRational),
}

impl fmt::Display for NormExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormExponent::NegInfinity => write!(f, "-inf"),
            NormExponent::Finite(q) => write!(f, "{q}"),
        }
    }
}

/// Ultranorm: the largest monomial norm in the support.
pub fn norm(theory: &Theory, a: &Element, w: &WeightData) -> NormExponent {
    a.support()
        .map(|mu| NormExponent::Finite(w.exponent(theory, mu)))
        .max()
        .unwrap_or(NormExponent::NegInfinity)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Admission {
    Admitted,
    /// The first rule whose lower part is heavier than its lead.
    Rejected { rule: usize, violation: String },
}

/// Every rule must satisfy `‖lower‖ <= U(lead)`, which makes the simple
/// reductions norm-nonincreasing uniformly in the context.
pub fn check_equicontinuity(sys: &RewritingSystem, w: &WeightData) -> Admission {
    let theory = sys.theory();
    for (i, rule) in sys.rules().iter().enumerate() {
        let lead = w.exponent(theory, &rule.lead);
        let lower = norm(theory, &rule.lower, w);
        if lower > NormExponent::Finite(lead.clone()) {
            return Admission::Rejected {
                rule: i,
                violation: format!(
                    "{}: norm 2^{lower} of the lower part exceeds 2^{lead} of the lead",
                    sys.render_rule(rule)
                ),
            };
        }
    }
    Admission::Admitted
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TdccVerdict {
    Certified,
    NotCertified(String),
}

/// Structural TDCC certificate. Two classes are recognised: the series
/// order graded by these very weights (higher norm first, a finite
/// tie-break inside each level), and well-founded orders whose weights
/// make no monomial heavier than its factors.
pub fn check_tdcc(order: &MonomialOrder, w: &WeightData) -> TdccVerdict {
    if order.kind() == OrderKind::SeriesDeglex {
        return if order.weights() == Some(w.as_slice()) {
            TdccVerdict::Certified
        } else {
            TdccVerdict::NotCertified("the series order is graded by different weights".into())
        };
    }
    if !order.is_well_founded() {
        return TdccVerdict::NotCertified(format!("{} is not well-founded", order.kind().name()));
    }
    if w.as_slice().iter().any(Signed::is_negative) {
        return TdccVerdict::NotCertified(format!(
            "{} does not grade by norm: with negative weights it ascends towards zero",
            order.kind().name()
        ));
    }
    TdccVerdict::Certified
}

/// The index `n` of the neighbourhood `B_n`; at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(u32);

impl Precision {
    pub fn new(n: u32) -> Result<Precision> {
        if n == 0 {
            Err(Error::InvalidPrecision(n))
        } else {
            Ok(Precision(n))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Smallest exponent that survives truncation: `1 - n`.
    pub fn cutoff(self) -> BigRational {
        BigRational::from_integer((1 - self.0 as i64).into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesNormalForm {
    pub representative: Element,
    pub precision: Precision,
    /// Some term was discarded below the cutoff along the way.
    pub truncated: bool,
    /// Recorded when the options ask for it.
    pub trail: Vec<RewriteStep>,
}

/// A representative of `t^S(a) + B_n`. Terms falling below the cutoff are
/// dropped as soon as they are generated.
pub fn truncated_normal_form(sys: &RewritingSystem, a: &Element, n: Precision) -> Result<SeriesNormalForm> {
    truncated_normal_form_with(sys, a, n, NormalFormOptions::default())
}

pub fn truncated_normal_form_with(
    sys: &RewritingSystem,
    a: &Element,
    n: Precision,
    opts: NormalFormOptions,
) -> Result<SeriesNormalForm> {
    let zeros;
    let w = match sys.weights() {
        Some(w) => w,
        None if sys.order().is_well_founded() => {
            zeros = WeightData::zeros(sys.theory().generator_count());
            &zeros
        }
        None => return Err(Error::NotCertified("series order without weight data".into())),
    };
    let cutoff = n.cutoff();
    let theory = sys.theory();
    let nf = reduce_to_irreducible(sys, a, opts, |mu| w.exponent(theory, mu) >= cutoff)?;
    Ok(SeriesNormalForm { representative: nf.element, precision: n, truncated: nf.truncated, trail: nf.trail })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn x(k: u32) -> Monomial {
        Monomial::Power(vec![k])
    }

    fn series_system(lead: u32, lower: u32) -> Result<RewritingSystem> {
        let t = Theory::commutative(["x"]).unwrap();
        let o = MonomialOrder::with_precedence(OrderKind::SeriesDeglex, &t, &[0], Some(vec![q(-1)])).unwrap();
        let f = Field::Rational;
        let mut sys = RewritingSystem::new(t, o, f).with_weights(WeightData::new(vec![q(-1)]))?;
        sys.add_rule(x(lead), Element::monomial(f, x(lower)))?;
        Ok(sys)
    }

    #[test]
    fn norms() {
        let t = Theory::commutative(["x"]).unwrap();
        let w = WeightData::new(vec![q(-1)]);
        let f = Field::Rational;
        assert_eq!(norm(&t, &Element::monomial(f, x(3)), &w), NormExponent::Finite(q(-3)));
        assert_eq!(norm(&t, &Element::zero(f), &w), NormExponent::NegInfinity);
        let e = Element::monomial(f, x(1)).add(&Element::monomial(f, x(4)));
        assert_eq!(norm(&t, &e, &w), NormExponent::Finite(q(-1)));
    }

    #[test]
    fn admission() {
        let sys = series_system(1, 2).unwrap();
        assert_eq!(check_equicontinuity(&sys, sys.weights().unwrap()), Admission::Admitted);
        // x^2 -> x raises the norm; series order even rejects it as incompatible
        assert!(series_system(2, 1).is_err());
        // built without weights, the check names the rule
        let t = Theory::commutative(["x"]).unwrap();
        let o = MonomialOrder::new(OrderKind::Deglex, &t).unwrap();
        let mut plain = RewritingSystem::new(t, o, Field::Rational);
        plain.add_rule(x(2), Element::monomial(Field::Rational, x(1))).unwrap();
        let w = WeightData::new(vec![q(-1)]);
        assert!(matches!(check_equicontinuity(&plain, &w), Admission::Rejected { rule: 0, .. }));
        let empty = RewritingSystem::new(Theory::commutative(["x"]).unwrap(), MonomialOrder::new(OrderKind::Deglex, &Theory::commutative(["x"]).unwrap()).unwrap(), Field::Rational);
        assert_eq!(check_equicontinuity(&empty, &w), Admission::Admitted);
    }

    #[test]
    fn tdcc_certificates() {
        let t = Theory::commutative(["x", "y"]).unwrap();
        let w = WeightData::new(vec![q(-1), q(-1)]);
        let series = MonomialOrder::with_precedence(OrderKind::SeriesDeglex, &t, &[1, 0], Some(w.as_slice().to_vec())).unwrap();
        assert_eq!(check_tdcc(&series, &w), TdccVerdict::Certified);
        let lex = MonomialOrder::new(OrderKind::Lex, &t).unwrap();
        assert_eq!(check_tdcc(&lex, &WeightData::new(vec![q(1), q(2)])), TdccVerdict::Certified);
        let deglex = MonomialOrder::new(OrderKind::Deglex, &t).unwrap();
        assert!(matches!(check_tdcc(&deglex, &w), TdccVerdict::NotCertified(_)));
        let other = WeightData::new(vec![q(-2), q(-1)]);
        assert!(matches!(check_tdcc(&series, &other), TdccVerdict::NotCertified(_)));
    }

    #[test]
    fn truncated_chain() {
        let sys = series_system(1, 2).unwrap();
        let f = Field::Rational;
        let n5 = Precision::new(5).unwrap();
        let nf = truncated_normal_form(&sys, &Element::monomial(f, x(1)), n5).unwrap();
        assert!(nf.representative.is_zero());
        assert!(nf.truncated);
        let one = truncated_normal_form(&sys, &Element::monomial(f, x(0)), n5).unwrap();
        assert_eq!(one.representative, Element::monomial(f, x(0)));
        let low = truncated_normal_form(&sys, &Element::monomial(f, x(6)), n5).unwrap();
        assert!(low.representative.is_zero());
        assert!(Precision::new(0).is_err());
    }

    #[test]
    fn discrete_systems_truncate_nothing() {
        let t = Theory::free_monoid(["x", "y"]).unwrap();
        let o = MonomialOrder::new(OrderKind::Deglex, &t).unwrap();
        let f = Field::Rational;
        let mut sys = RewritingSystem::new(t, o, f);
        sys.add_rule(Monomial::Word(vec![0, 1]), Element::monomial(f, Monomial::Word(vec![1, 0]))).unwrap();
        let a = Element::monomial(f, Monomial::Word(vec![0, 0, 1, 1]));
        let exact = crate::rewriting::normal_form(&sys, &a).unwrap();
        for n in [1, 3, 9] {
            let t = truncated_normal_form(&sys, &a, Precision::new(n).unwrap()).unwrap();
            assert_eq!(t.representative, exact);
            assert!(!t.truncated);
        }
    }
}
