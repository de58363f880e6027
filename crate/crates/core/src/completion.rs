//! Confluence checking, completion and rule dropping.

use std::collections::BTreeMap;

use crate::ambiguity::{
    critical_ambiguities_with, pair_ambiguities, resolve_with, Ambiguity, AmbiguityClass, AmbiguityOptions,
    Resolution, MIXED_GAP_BOUND,
};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::rewriting::{
    normal_form_with, orient, NormalFormOptions, RewritingSystem, Rule, DEFAULT_MAX_STEPS,
};
use crate::theory::Context;

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum ConfluenceVerdict {
    Confluent,
    /// The first critical ambiguity whose S-polynomial does not reduce
    /// to zero, with the irreducible remainder.
    NotConfluent { ambiguity: Ambiguity, remainder: Element },
    Inconclusive(Inconclusive),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inconclusive {
    /// A reduction ran out of steps or failed.
    Budget(String),
    /// Everything checked resolves, but mixed disjoint families were only
    /// expanded up to this gap length.
    MixedGap(usize),
}

impl ConfluenceVerdict {
    pub fn is_confluent(&self) -> bool {
        matches!(self, ConfluenceVerdict::Confluent)
    }
}

pub(crate) fn default_pair_options() -> AmbiguityOptions {
    AmbiguityOptions { keep_montages: false, mixed_gap: MIXED_GAP_BOUND }
}

pub fn check_confluence(sys: &RewritingSystem) -> ConfluenceVerdict {
    check_confluence_with(sys, DEFAULT_MAX_STEPS)
}

pub fn check_confluence_with(sys: &RewritingSystem, max_steps: usize) -> ConfluenceVerdict {
    let pairs = critical_ambiguities_with(sys, default_pair_options());
    let verdict = check_pairs(sys, &pairs, max_steps);
    if verdict.is_confluent() && pairs.iter().any(|a| a.class == AmbiguityClass::Disjoint) {
        return ConfluenceVerdict::Inconclusive(Inconclusive::MixedGap(MIXED_GAP_BOUND));
    }
    verdict
}

/// Verdict from an explicit list of ambiguities.
pub fn check_pairs(sys: &RewritingSystem, pairs: &[Ambiguity], max_steps: usize) -> ConfluenceVerdict {
    for amb in pairs {
        match resolve_with(sys, amb, max_steps) {
            Ok(cert) if cert.status == Resolution::Resolved => {}
            Ok(cert) => {
                return ConfluenceVerdict::NotConfluent { ambiguity: amb.clone(), remainder: cert.remainder }
            }
            Err(e) => return ConfluenceVerdict::Inconclusive(Inconclusive::Budget(e.to_string())),
        }
    }
    ConfluenceVerdict::Confluent
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Ambiguities with larger superpositions are left pending.
    pub max_degree: usize,
    pub max_rules: usize,
    /// Per normal-form computation.
    pub max_steps: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_degree: 12, max_rules: 500, max_steps: DEFAULT_MAX_STEPS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompletionStatus {
    Complete,
    DegreeCapped,
    RuleCapped,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AddedRule {
    pub rule: Rule,
    /// The ambiguity whose remainder produced the rule, with rule indices
    /// as they were at that moment.
    pub source: Ambiguity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DroppedRule {
    pub rule: Rule,
    /// A remaining rule whose lead divides the dropped lead, and where.
    pub divisor: usize,
    pub context: Context,
    /// Steps taken to reduce the dropped rule's defining element to zero.
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompletionReport {
    pub system: RewritingSystem,
    pub added: Vec<AddedRule>,
    pub dropped: Vec<DroppedRule>,
    pub status: CompletionStatus,
    /// Ambiguities left unresolved because of a cap.
    pub pending: usize,
}

/// Knuth-Bendix / Buchberger completion.
///
/// Ambiguities are taken by superposition degree, first in first out
/// within a degree. Nonzero remainders become new monic rules; after each
/// insertion the other rules' lower parts are renormalised. Leads are
/// never rewritten here; lead-reducible rules are removed at the end by
/// [`drop_redundant`].
pub fn complete(sys: &RewritingSystem, limits: Limits) -> Result<CompletionReport> {
    if !sys.order().is_well_founded() {
        return Err(Error::DiscreteModeRequired);
    }
    let opts = default_pair_options();
    let nf_opts = NormalFormOptions { max_steps: limits.max_steps, record_trail: false };
    let mut work = sys.clone();
    let mut added = Vec::new();
    let mut all_dropped = Vec::new();
    let mut queue: BTreeMap<(usize, usize), Ambiguity> = BTreeMap::new();
    let mut seq = 0;
    let mut enqueue = |queue: &mut BTreeMap<(usize, usize), Ambiguity>, amb: Ambiguity| {
        queue.insert((amb.superposition.degree(), seq), amb);
        seq += 1;
    };
    for amb in critical_ambiguities_with(&work, opts) {
        enqueue(&mut queue, amb);
    }
    let mut status = CompletionStatus::Complete;
    let mut pending = 0;
    loop {
        while let Some((_, amb)) = queue.pop_first() {
            if amb.superposition.degree() > limits.max_degree {
                status = CompletionStatus::DegreeCapped;
                pending += 1;
                continue;
            }
            let cert = resolve_with(&work, &amb, limits.max_steps)?;
            if cert.status == Resolution::Resolved {
                continue;
            }
            if work.len() >= limits.max_rules {
                status = CompletionStatus::RuleCapped;
                pending += 1 + queue.len();
                queue.clear();
                break;
            }
            let rule = orient(work.theory(), work.order(), &cert.remainder)
                .map_err(|_| Error::OrientationFailed(work.render(&cert.remainder)))?;
            let idx = work.add_rule(rule.lead.clone(), rule.lower.clone())?;
            added.push(AddedRule { rule, source: amb });
            interreduce(&mut work, idx, nf_opts)?;
            for k in 0..=idx {
                for amb in pair_ambiguities(&work, k, idx, opts) {
                    enqueue(&mut queue, amb);
                }
            }
        }
        let (reduced, dropped) = drop_redundant(&work);
        all_dropped.extend(dropped);
        work = reduced;
        if status != CompletionStatus::Complete {
            return Ok(CompletionReport { system: work, added, dropped: all_dropped, status, pending });
        }
        match check_confluence_with(&work, limits.max_steps) {
            ConfluenceVerdict::NotConfluent { .. } => {
                // not expected after a full run; keep completing
                for amb in critical_ambiguities_with(&work, opts) {
                    enqueue(&mut queue, amb);
                }
            }
            ConfluenceVerdict::Inconclusive(Inconclusive::Budget(_)) => {
                return Err(Error::StepBudgetExceeded(limits.max_steps));
            }
            _ => return Ok(CompletionReport { system: work, added, dropped: all_dropped, status, pending }),
        }
    }
}

/// Renormalises every lower part except that of rule `fresh`.
fn interreduce(work: &mut RewritingSystem, fresh: usize, opts: NormalFormOptions) -> Result<()> {
    for j in 0..work.len() {
        if j == fresh || work.is_irreducible(&work.rule(j).lower) {
            continue;
        }
        let others = work.without_rule(j);
        let lower = normal_form_with(&others, &work.rule(j).lower, opts)?.element;
        work.set_lower(j, lower);
    }
    Ok(())
}

/// Removes rules whose lead is reducible by the remaining rules and whose
/// defining element reduces to zero under them. Rules are examined from
/// last to first, so of two equal rules the later one goes.
pub fn drop_redundant(sys: &RewritingSystem) -> (RewritingSystem, Vec<DroppedRule>) {
    let mut current = sys.clone();
    let mut dropped = Vec::new();
    if !sys.order().is_well_founded() {
        return (current, dropped);
    }
    for i in (0..sys.len()).rev() {
        let rest = current.without_rule(i);
        let rule = current.rule(i).clone();
        let Some((divisor, context)) = rest.find_redex(&rule.lead) else { continue };
        let Ok(nf) = normal_form_with(&rest, &rule.defining_element(), NormalFormOptions::default()) else {
            continue;
        };
        if nf.element.is_zero() {
            dropped.push(DroppedRule { rule, divisor, context, steps: nf.steps });
            current = rest;
        }
    }
    (current, dropped)
}

/// Ideal membership through the normal form; the system must be
/// confluent.
pub fn ideal_member(sys: &RewritingSystem, a: &Element) -> Result<bool> {
    match check_confluence(sys) {
        ConfluenceVerdict::Confluent => {}
        ConfluenceVerdict::Inconclusive(Inconclusive::MixedGap(_)) => {}
        _ => return Err(Error::NotConfluentSystem),
    }
    Ok(normal_form_with(sys, a, NormalFormOptions::default())?.element.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{MonomialOrder, OrderKind};
    use crate::scalar::Field;
    use crate::theory::{Monomial, Theory};

    fn p(a: u32, b: u32) -> Monomial {
        Monomial::Power(vec![a, b])
    }

    fn comm(rules: &[(Monomial, Monomial)]) -> RewritingSystem {
        let t = Theory::commutative(["x", "y"]).unwrap();
        let o = MonomialOrder::new(OrderKind::Lex, &t).unwrap();
        let mut sys = RewritingSystem::new(t, o, Field::Rational);
        for (l, r) in rules {
            sys.add_rule(l.clone(), Element::monomial(Field::Rational, r.clone())).unwrap();
        }
        sys
    }

    #[test]
    fn buchberger_completion() {
        let sys = comm(&[(p(2, 0), p(0, 1)), (p(1, 1), p(0, 0))]);
        match check_confluence(&sys) {
            ConfluenceVerdict::NotConfluent { remainder, .. } => assert_eq!(sys.render(&remainder), "-x + y^2"),
            v => panic!("{v:?}"),
        }
        let report = complete(&sys, Limits::default()).unwrap();
        assert_eq!(report.status, CompletionStatus::Complete);
        let rules: Vec<String> = report.system.rules().iter().map(|r| report.system.render_rule(r)).collect();
        assert_eq!(rules, vec!["x -> y^2", "y^3 -> 1"]);
        assert!(check_confluence(&report.system).is_confluent());
        for r in sys.rules() {
            assert!(ideal_member(&report.system, &r.defining_element()).unwrap());
        }
        let f = Field::Rational;
        assert!(!ideal_member(&report.system, &Element::monomial(f, p(0, 0))).unwrap());
        assert!(ideal_member(&report.system, &Element::zero(f)).unwrap());
        assert_eq!(ideal_member(&sys, &Element::zero(f)), Err(Error::NotConfluentSystem));
    }

    #[test]
    fn confluent_input_is_left_alone() {
        let sys = comm(&[(p(1, 0), p(0, 2)), (p(0, 3), p(0, 0))]);
        assert!(check_confluence(&sys).is_confluent());
        let report = complete(&sys, Limits::default()).unwrap();
        assert!(report.added.is_empty() && report.dropped.is_empty());
        assert_eq!(report.system, sys);
    }

    #[test]
    fn dropping() {
        let sys = comm(&[(p(1, 0), p(0, 2)), (p(0, 3), p(0, 0)), (p(2, 0), p(0, 1))]);
        let (kept, dropped) = drop_redundant(&sys);
        assert_eq!(kept.len(), 2);
        assert_eq!(dropped.len(), 1);
        assert_eq!(dropped[0].rule.lead, p(2, 0));
        let minimal = comm(&[(p(1, 0), p(0, 2)), (p(0, 3), p(0, 0))]);
        assert!(drop_redundant(&minimal).1.is_empty());
        let dup = comm(&[(p(1, 0), p(0, 2)), (p(1, 0), p(0, 2))]);
        let (kept, dropped) = drop_redundant(&dup);
        assert_eq!((kept.len(), dropped.len()), (1, 1));
    }

    #[test]
    fn degree_cap() {
        // xy - yx style growth in a free monoid: x y x -> y y, y x y -> x x
        let t = Theory::free_monoid(["x", "y"]).unwrap();
        let o = MonomialOrder::new(OrderKind::Deglex, &t).unwrap();
        let f = Field::Rational;
        let mut sys = RewritingSystem::new(t, o, f);
        sys.add_rule(Monomial::Word(vec![0, 1, 0]), Element::monomial(f, Monomial::Word(vec![1, 1]))).unwrap();
        let limits = Limits { max_degree: 3, ..Limits::default() };
        let report = complete(&sys, limits).unwrap();
        assert_eq!(report.status, CompletionStatus::DegreeCapped);
        assert!(report.pending > 0);
    }
}
