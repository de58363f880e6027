//! Rules, simple reductions and the normal-form map.

use std::collections::BTreeMap;

use crate::element::Element;
use crate::error::{Error, Result};
use crate::order::MonomialOrder;
use crate::scalar::{Field, Scalar};
use crate::series::{self, NormExponent, WeightData};
use crate::theory::{divisions, Context, Monomial, Theory};

/// Default cap on reduction steps per normal-form computation.
pub const DEFAULT_MAX_STEPS: usize = 1_000_000;

/// A monic rule `lead -> lower` with `lower` strictly below `lead`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub lead: Monomial,
    pub lower: Element,
}

impl Rule {
    /// `lead - lower`, the element the rule declares zero.
    pub fn defining_element(&self) -> Element {
        let mut e = self.lower.neg();
        e.add_term(self.lead.clone(), self.lower.field().one());
        e
    }
}

/// A monic rule for `a`: its unique leading monomial with coefficient 1.
pub fn orient(theory: &Theory, order: &MonomialOrder, a: &Element) -> Result<Rule> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    let lm = a.leading_monomials(theory, order);
    if lm.len() > 1 {
        return Err(Error::MultipleMaxima(lm.iter().map(|m| theory.render(m)).collect()));
    }
    let lead = lm.into_iter().next().expect("nonzero element has a leading monomial");
    let c = a.coefficient_of(&lead);
    let inv = c.inverse().ok_or_else(|| Error::CoefficientNotInvertible(c.to_string()))?;
    let mut lower = a.scale(&inv).neg();
    lower.add_term(lead.clone(), a.field().one());
    Ok(Rule { lead, lower })
}

/// One simple reduction: `coefficient·monomial` was replaced by
/// `coefficient·context(lower)` of rule `rule`, where
/// `monomial = context(lead)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteStep {
    pub rule: usize,
    pub context: Context,
    pub monomial: Monomial,
    pub coefficient: Scalar,
}

impl RewriteStep {
    /// Applies the step to `b`: `b - f(b)·v(lead - lower)` with `f` the
    /// coefficient of the rewritten monomial in `b`.
    pub fn replay(&self, sys: &RewritingSystem, b: &Element) -> Result<Element> {
        let rule = sys.rules.get(self.rule).ok_or_else(|| Error::InvalidRule {
            rule: format!("#{}", self.rule),
            reason: "no such rule".into(),
        })?;
        let c = b.coefficient_of(&self.monomial);
        let image = rule.defining_element().apply_context(&self.context)?;
        Ok(b.sub(&image.scale(&c)))
    }
}

/// A reducible position: `context(lead of rule) = monomial`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Redex {
    pub monomial: Monomial,
    pub rule: usize,
    pub context: Context,
}

/// Theory, order, field and rules. Weight data switches on series mode.
#[derive(Debug, Clone, PartialEq)]
pub struct RewritingSystem {
    theory: Theory,
    order: MonomialOrder,
    field: Field,
    weights: Option<WeightData>,
    rules: Vec<Rule>,
}

impl RewritingSystem {
    pub fn new(theory: Theory, order: MonomialOrder, field: Field) -> RewritingSystem {
        RewritingSystem { theory, order, field, weights: None, rules: Vec::new() }
    }

    /// Turns on series mode: the order must be TDCC-certified for `w` and
    /// every rule, now and later, must pass the equicontinuity check.
    pub fn with_weights(mut self, w: WeightData) -> Result<RewritingSystem> {
        if w.len() != self.theory.generator_count() {
            return Err(Error::InvalidOrder(format!(
                "expected {} weights, got {}",
                self.theory.generator_count(),
                w.len()
            )));
        }
        if let series::TdccVerdict::NotCertified(reason) = series::check_tdcc(&self.order, &w) {
            return Err(Error::NotCertified(reason));
        }
        self.weights = Some(w);
        for rule in &self.rules {
            self.check_admissible(rule)?;
        }
        Ok(self)
    }

    pub fn theory(&self) -> &Theory {
        &self.theory
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn weights(&self) -> Option<&WeightData> {
        self.weights.as_ref()
    }

    pub fn is_series_mode(&self) -> bool {
        self.weights.is_some()
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, i: usize) -> &Rule {
        &self.rules[i]
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn zero(&self) -> Element {
        Element::zero(self.field)
    }

    pub fn monomial(&self, mu: Monomial) -> Element {
        Element::monomial(self.field, mu)
    }

    pub fn render(&self, a: &Element) -> String {
        a.render(&self.theory, &self.order)
    }

    pub fn render_rule(&self, rule: &Rule) -> String {
        format!("{} -> {}", self.theory.render(&rule.lead), self.render(&rule.lower))
    }

    /// Adds `lead -> lower` after the ingestion checks; returns its index.
    pub fn add_rule(&mut self, lead: Monomial, lower: Element) -> Result<usize> {
        let rule = Rule { lead, lower };
        self.check_rule(&rule)?;
        self.rules.push(rule);
        Ok(self.rules.len() - 1)
    }

    /// Declares `a = 0`: orients `a` into a rule. Path algebra relations
    /// are first split into their uniform components (one per pair of
    /// endpoints), each oriented separately.
    pub fn add_relation(&mut self, a: &Element) -> Result<Vec<usize>> {
        let mut parts: BTreeMap<(u32, u32), Element> = BTreeMap::new();
        for (mu, c) in a.terms() {
            let key = match mu {
                Monomial::Path(p) => (p.source(), p.target()),
                _ => (0, 0),
            };
            parts.entry(key).or_insert_with(|| self.zero()).add_term(mu.clone(), c.clone());
        }
        let mut added = Vec::new();
        for part in parts.values() {
            let rule = orient(&self.theory, &self.order, part)?;
            added.push(self.add_rule(rule.lead, rule.lower)?);
        }
        Ok(added)
    }

    /// The same theory, order and weights with a different rule list.
    /// Rules are assumed to pass the ingestion checks already.
    pub(crate) fn with_rules(&self, rules: Vec<Rule>) -> RewritingSystem {
        RewritingSystem { rules, ..self.clone_empty() }
    }

    pub(crate) fn set_lower(&mut self, i: usize, lower: Element) {
        self.rules[i].lower = lower;
    }

    fn clone_empty(&self) -> RewritingSystem {
        RewritingSystem {
            theory: self.theory.clone(),
            order: self.order.clone(),
            field: self.field,
            weights: self.weights.clone(),
            rules: Vec::new(),
        }
    }

    /// The system without rule `i`.
    pub fn without_rule(&self, i: usize) -> RewritingSystem {
        let mut rules = self.rules.clone();
        rules.remove(i);
        self.with_rules(rules)
    }

    fn check_rule(&self, rule: &Rule) -> Result<()> {
        let name = || self.render_rule(rule);
        let invalid = |reason: String| Error::InvalidRule { rule: name(), reason };
        if !self.theory.contains(&rule.lead) {
            return Err(invalid(format!("lead is not a monomial of the {} theory", self.theory.kind_name())));
        }
        if rule.lower.field() != self.field {
            return Err(invalid(format!("coefficients are not in {}", self.field)));
        }
        if let Some(mu) = rule.lower.support().find(|mu| !self.theory.contains(mu)) {
            return Err(invalid(format!("{mu:?} is not a monomial of the {} theory", self.theory.kind_name())));
        }
        for nu in rule.lower.support() {
            if !self.order.less(&self.theory, nu, &rule.lead) {
                return Err(Error::RuleNotCompatible { rule: name(), monomial: self.theory.render(nu) });
            }
        }
        match &rule.lead {
            Monomial::Path(_) => {
                for nu in rule.lower.support() {
                    if !self.theory.uniform_equivalent(&rule.lead, nu)? {
                        return Err(Error::NonUniformRule { rule: name(), monomial: self.theory.render(nu) });
                    }
                }
            }
            Monomial::Mixed { word, .. } if word.is_empty() => {
                // Such a lead matches at every position of a word; the
                // results only agree when the lower part has no letters.
                let lettered = rule.lower.support().any(|nu| matches!(nu, Monomial::Mixed { word, .. } if !word.is_empty()));
                if lettered {
                    return Err(invalid(
                        "a lead without noncommutative letters needs a lower part without them".into(),
                    ));
                }
            }
            _ => {}
        }
        self.check_admissible(rule)
    }

    fn check_admissible(&self, rule: &Rule) -> Result<()> {
        let Some(w) = &self.weights else { return Ok(()) };
        let lead = w.exponent(&self.theory, &rule.lead);
        let lower = series::norm(&self.theory, &rule.lower, w);
        if lower > NormExponent::Finite(lead.clone()) {
            return Err(Error::Inadmissible {
                rule: self.render_rule(rule),
                reason: format!("norm exponent {lower} of the lower part exceeds {lead} of the lead"),
            });
        }
        Ok(())
    }

    /// The first rule (by index) and first context (canonical order)
    /// rewriting `mu`.
    pub fn find_redex(&self, mu: &Monomial) -> Option<(usize, Context)> {
        self.rules.iter().enumerate().find_map(|(i, r)| divisions(mu, &r.lead).into_iter().next().map(|v| (i, v)))
    }

    /// Every reducible position of `a`.
    pub fn redexes(&self, a: &Element) -> Vec<Redex> {
        let mut out = Vec::new();
        for mu in a.support() {
            for (i, r) in self.rules.iter().enumerate() {
                for v in divisions(mu, &r.lead) {
                    out.push(Redex { monomial: mu.clone(), rule: i, context: v });
                }
            }
        }
        out
    }

    /// Applies the simple reduction at `redex`.
    pub fn apply_redex(&self, a: &Element, redex: &Redex) -> Result<(Element, RewriteStep)> {
        let step = RewriteStep {
            rule: redex.rule,
            context: redex.context.clone(),
            monomial: redex.monomial.clone(),
            coefficient: a.coefficient_of(&redex.monomial),
        };
        let out = step.replay(self, a)?;
        Ok((out, step))
    }

    pub fn is_irreducible_monomial(&self, mu: &Monomial) -> bool {
        self.find_redex(mu).is_none()
    }

    pub fn is_irreducible(&self, a: &Element) -> bool {
        a.support().all(|mu| self.is_irreducible_monomial(mu))
    }
}

/// One simple reduction at the strategy-selected position: the greatest
/// reducible support monomial, then the lowest rule index, then the
/// first context. `None` when `a` is irreducible.
pub fn reduce_once(sys: &RewritingSystem, a: &Element) -> Result<(Element, Option<RewriteStep>)> {
    let mut support: Vec<&Monomial> = a.support().collect();
    support.sort_by(|x, y| sys.order.cmp_total(&sys.theory, y, x));
    for mu in support {
        if let Some((rule, context)) = sys.find_redex(mu) {
            let (out, step) = sys.apply_redex(a, &Redex { monomial: mu.clone(), rule, context })?;
            return Ok((out, Some(step)));
        }
    }
    Ok((a.clone(), None))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormalFormOptions {
    pub max_steps: usize,
    pub record_trail: bool,
}

impl Default for NormalFormOptions {
    fn default() -> Self {
        NormalFormOptions { max_steps: DEFAULT_MAX_STEPS, record_trail: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub element: Element,
    pub trail: Vec<RewriteStep>,
    pub steps: usize,
    /// Some generated term was discarded below the precision cutoff.
    pub truncated: bool,
}

/// `t^S(a)` with the default step budget.
pub fn normal_form(sys: &RewritingSystem, a: &Element) -> Result<Element> {
    Ok(normal_form_with(sys, a, NormalFormOptions::default())?.element)
}

/// `t^S(a)`; only for well-founded orders. Series-mode systems go through
/// [`crate::series::truncated_normal_form`].
pub fn normal_form_with(sys: &RewritingSystem, a: &Element, opts: NormalFormOptions) -> Result<NormalForm> {
    if !sys.order.is_well_founded() {
        return Err(Error::SeriesModeRequiresPrecision);
    }
    reduce_to_irreducible(sys, a, opts, |_| true)
}

/// The reduction loop behind every normal form. The greatest remaining
/// monomial is either rewritten or, if irreducible, moved to the result
/// for good, since later rewrites only create smaller monomials.
/// Generated terms failing `keep` are discarded.
pub(crate) fn reduce_to_irreducible(
    sys: &RewritingSystem,
    a: &Element,
    opts: NormalFormOptions,
    keep: impl Fn(&Monomial) -> bool,
) -> Result<NormalForm> {
    let (theory, order) = (&sys.theory, &sys.order);
    let mut truncated = false;
    let mut work = sys.zero();
    for (mu, c) in a.terms() {
        if keep(mu) {
            work.add_term(mu.clone(), c.clone());
        } else {
            truncated = true;
        }
    }
    let mut done = sys.zero();
    let mut trail = Vec::new();
    let mut steps = 0;
    while let Some(mu) = work.support().max_by(|x, y| order.cmp_total(theory, x, y)).cloned() {
        let c = work.remove(&mu).expect("support monomial has a coefficient");
        let Some((r, v)) = sys.find_redex(&mu) else {
            done.add_term(mu, c);
            continue;
        };
        if steps >= opts.max_steps {
            return Err(Error::StepBudgetExceeded(opts.max_steps));
        }
        steps += 1;
        for (nu, d) in sys.rules[r].lower.terms() {
            if let Some(m) = v.apply(nu)? {
                if keep(&m) {
                    work.add_term(m, &c * d);
                } else {
                    truncated = true;
                }
            }
        }
        if opts.record_trail {
            trail.push(RewriteStep { rule: r, context: v, monomial: mu, coefficient: c });
        }
    }
    Ok(NormalForm { element: done, trail, steps, truncated })
}

/// How the forbidden leads cut out the irreducible monomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Forbidding {
    /// Irreducible monomials avoid every lead as a factor (subword or
    /// subpath): a regular language.
    Factor,
    /// Irreducible monomials are divisible by no lead (power products)
    /// or contain no lead as a subtree (magma).
    Divisibility,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForbiddenFactorSet {
    pub leads: Vec<Monomial>,
    pub semantics: Forbidding,
}

impl ForbiddenFactorSet {
    pub fn admits(&self, mu: &Monomial) -> bool {
        self.leads.iter().all(|l| divisions(mu, l).is_empty())
    }
}

/// The rule leads as forbidden patterns, deduplicated and sorted.
pub fn irr_description(sys: &RewritingSystem) -> ForbiddenFactorSet {
    let mut leads: Vec<Monomial> = sys.rules.iter().map(|r| r.lead.clone()).collect();
    leads.sort();
    leads.dedup();
    let semantics = match sys.theory {
        Theory::FreeMonoid { .. } | Theory::Mixed { .. } | Theory::PathAlgebra(_) => Forbidding::Factor,
        Theory::Commutative { .. } | Theory::FreeMagma { .. } => Forbidding::Divisibility,
    };
    ForbiddenFactorSet { leads, semantics }
}

/// Number of irreducible monomials of each degree `0..=up_to`.
pub fn count_irreducible(sys: &RewritingSystem, up_to: usize) -> Vec<usize> {
    (0..=up_to)
        .map(|d| sys.theory.monomials_of_degree(d).iter().filter(|mu| sys.is_irreducible_monomial(mu)).count())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::OrderKind;

    fn words(rules: &[(&str, &[(i64, &str)])], greatest_last: bool) -> RewritingSystem {
        let t = Theory::free_monoid(["x", "y"]).unwrap();
        let o = if greatest_last {
            MonomialOrder::with_precedence(OrderKind::Deglex, &t, &[0, 1], None).unwrap()
        } else {
            MonomialOrder::new(OrderKind::Deglex, &t).unwrap()
        };
        let mut sys = RewritingSystem::new(t, o, Field::Rational);
        for (lead, lower) in rules {
            let lower = w_el(lower);
            sys.add_rule(w(lead), lower).unwrap();
        }
        sys
    }

    fn w(s: &str) -> Monomial {
        Monomial::Word(s.bytes().map(|b| if b == b'x' { 0 } else { 1 }).collect())
    }

    fn w_el(terms: &[(i64, &str)]) -> Element {
        let f = Field::Rational;
        Element::from_terms(f, terms.iter().map(|(c, s)| (w(s), f.from_i64(*c))))
    }

    #[test]
    fn commutation_rule() {
        let sys = words(&[("yx", &[(1, "xy")])], true);
        let (out, step) = reduce_once(&sys, &w_el(&[(1, "yx")])).unwrap();
        assert_eq!(out, w_el(&[(1, "xy")]));
        assert!(step.is_some());
        let (out, step) = reduce_once(&sys, &w_el(&[(1, "xy")])).unwrap();
        assert_eq!((out, step), (w_el(&[(1, "xy")]), None));
        assert_eq!(normal_form(&sys, &w_el(&[(1, "yxyx")])).unwrap(), w_el(&[(1, "xxyy")]));
        assert!(normal_form(&sys, &sys.zero()).unwrap().is_zero());
        assert!(sys.is_irreducible_monomial(&w("xy")));
        assert!(!sys.is_irreducible_monomial(&w("yxy")));
        assert_eq!(count_irreducible(&sys, 3), vec![1, 2, 3, 4]);
    }

    #[test]
    fn weyl_normal_form() {
        let sys = words(&[("yx", &[(1, "xy"), (1, "")])], true);
        let nf = normal_form(&sys, &w_el(&[(1, "yxx")])).unwrap();
        assert_eq!(nf, w_el(&[(1, "xxy"), (2, "x")]));
        assert_eq!(sys.render(&nf), "x^2*y + 2*x");
    }

    #[test]
    fn involutions() {
        let sys = words(&[("xx", &[(1, "")]), ("yy", &[(1, "")])], false);
        assert!(sys.is_irreducible_monomial(&w("x")));
        assert!(!sys.is_irreducible_monomial(&w("xx")));
        assert_eq!(count_irreducible(&sys, 3), vec![1, 2, 2, 2]);
        let irr = irr_description(&sys);
        assert_eq!(irr.leads, vec![w("xx"), w("yy")]);
        assert_eq!(irr.semantics, Forbidding::Factor);
        let empty = words(&[], false);
        assert_eq!(count_irreducible(&empty, 2), vec![1, 2, 4]);
        assert!(irr_description(&empty).leads.is_empty());
    }

    #[test]
    fn strategy_picks_greatest_then_lowest_rule() {
        let t = Theory::commutative(["x", "y"]).unwrap();
        let o = MonomialOrder::new(OrderKind::Lex, &t).unwrap();
        let f = Field::Rational;
        let mut sys = RewritingSystem::new(t, o, f);
        let p = |a, b| Monomial::Power(vec![a, b]);
        sys.add_rule(p(2, 0), Element::monomial(f, p(0, 1))).unwrap();
        sys.add_rule(p(1, 1), Element::monomial(f, p(0, 0))).unwrap();
        let (out, step) = reduce_once(&sys, &Element::monomial(f, p(2, 1))).unwrap();
        assert_eq!(out, Element::monomial(f, p(0, 2)));
        assert_eq!(step.unwrap().rule, 0);
    }

    #[test]
    fn orientation() {
        let t = Theory::commutative(["x", "y"]).unwrap();
        let o = MonomialOrder::new(OrderKind::Lex, &t).unwrap();
        let f = Field::Rational;
        let p = |a, b| Monomial::Power(vec![a, b]);
        let a = Element::from_terms(f, [(p(2, 0), f.one()), (p(0, 1), f.from_i64(-1))]);
        let r = orient(&t, &o, &a).unwrap();
        assert_eq!((r.lead, r.lower), (p(2, 0), Element::monomial(f, p(0, 1))));
        assert_eq!(orient(&t, &o, &Element::zero(f)), Err(Error::ZeroElement));

        let words = Theory::free_monoid(["x", "y"]).unwrap();
        let yx = Monomial::Word(vec![1, 0]);
        let xy = Monomial::Word(vec![0, 1]);
        // y > x
        let o = MonomialOrder::with_precedence(OrderKind::Deglex, &words, &[0, 1], None).unwrap();
        let a = Element::from_terms(f, [(yx.clone(), f.from_i64(2)), (xy.clone(), f.from_i64(-2))]);
        let r = orient(&words, &o, &a).unwrap();
        assert_eq!((r.lead, r.lower), (yx, Element::monomial(f, xy)));

        let g = MonomialOrder::new(OrderKind::Graded, &words).unwrap();
        let x_plus_y = Element::from_terms(f, [(Monomial::Word(vec![0]), f.one()), (Monomial::Word(vec![1]), f.one())]);
        assert!(matches!(orient(&words, &g, &x_plus_y), Err(Error::MultipleMaxima(_))));
    }

    #[test]
    fn ingestion_rejects_incompatible_rules() {
        let t = Theory::free_monoid(["x"]).unwrap();
        let o = MonomialOrder::new(OrderKind::Deglex, &t).unwrap();
        let mut sys = RewritingSystem::new(t, o, Field::Rational);
        let err = sys.add_rule(Monomial::Word(vec![0]), Element::monomial(Field::Rational, Monomial::Word(vec![0, 0])));
        assert_eq!(err, Err(Error::RuleNotCompatible { rule: "x -> x^2".into(), monomial: "x^2".into() }));
    }

    #[test]
    fn trail_replays() {
        let sys = words(&[("yx", &[(1, "xy"), (1, "")])], true);
        let a = w_el(&[(3, "yyxx"), (-1, "yx")]);
        let nf = normal_form_with(&sys, &a, NormalFormOptions { record_trail: true, ..Default::default() }).unwrap();
        let mut b = a.clone();
        for step in &nf.trail {
            let before = b.coefficient_of(&step.monomial);
            assert_eq!(before, step.coefficient);
            b = step.replay(&sys, &b).unwrap();
        }
        assert_eq!(b, nf.element);
        assert_eq!(normal_form(&sys, &nf.element).unwrap(), nf.element);
    }

    #[test]
    fn step_budget() {
        let sys = words(&[("yx", &[(1, "xy")])], true);
        let a = w_el(&[(1, "yyyxxx")]);
        let err = normal_form_with(&sys, &a, NormalFormOptions { max_steps: 3, record_trail: false });
        assert_eq!(err, Err(Error::StepBudgetExceeded(3)));
    }
}
