//! Correspondence verification and countermodel search.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::enumerate::{enumerate_contexts, sample_context, ContextSignature, FrameClass};
use crate::semantics::{
    describe_assignment, describe_valuation, falsify_labelled, falsify_sequent, fo_condition,
    sequent_valid_context, CondId, Ctx, LabelAssignment, SemError, Valuation,
};
use crate::syntax::{parse_formula_sequent, Formula, RelSym, Sequent, SequentItem};

/// The seven axiom/condition pairs of the correspondence result.
pub const CORRESPONDENCE_ITEMS: [(usize, &str, CondId); 7] = [
    (1, "box p |- p", CondId::BoxRefl),
    (2, "p |- dia p", CondId::DiaRefl),
    (3, "box p |- box box p", CondId::BoxDense),
    (4, "p |- rhd rhd p", CondId::SymRhd),
    (5, "dia dia p |- dia p", CondId::DiaDense),
    (6, "p |- box dia p", CondId::B1),
    (7, "dia box p |- p", CondId::B2),
];

#[derive(Debug, Clone, Serialize)]
pub struct ItemReport {
    pub item: usize,
    pub axiom: String,
    pub contexts: usize,
    pub agreements: usize,
    pub disagreements: usize,
    /// A disagreeing context in the model file format, if any.
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrespondenceReport {
    pub max_a: usize,
    pub max_x: usize,
    pub sampled: Option<(usize, u64)>,
    pub items: Vec<ItemReport>,
}

impl CorrespondenceReport {
    pub fn total_disagreements(&self) -> usize {
        self.items.iter().map(|i| i.disagreements).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for item in &self.items {
            out.push(format!(
                "item {}: {:<22} contexts={} agreements={} disagreements={}",
                item.item, item.axiom, item.contexts, item.agreements, item.disagreements
            ));
        }
        out
    }
}

fn check_item(
    ctx: &Ctx,
    axiom: &(Formula, Formula),
    cond: CondId,
) -> Result<(bool, bool), SemError> {
    let valid = sequent_valid_context(ctx, &axiom.0, &axiom.1)?;
    let fo = fo_condition(ctx, cond)?;
    Ok((valid, fo))
}

/// Exhaustive correspondence check of the seven items at all carrier sizes
/// up to the bounds.
pub fn correspondence_suite(max_a: usize, max_x: usize) -> Result<CorrespondenceReport, SemError> {
    let mut items = Vec::new();
    for (n, axiom_text, cond) in CORRESPONDENCE_ITEMS {
        let axiom = parse_formula_sequent(axiom_text).expect("axiom parses");
        let sig = ContextSignature::for_condition(cond);
        let contexts = enumerate_contexts(max_a, max_x, &FrameClass::Enriched(sig))?;
        let mut agreements = 0;
        let mut disagreements = 0;
        let mut witness = None;
        for ctx in &contexts {
            let (valid, fo) = check_item(ctx, &axiom, cond)?;
            if valid == fo {
                agreements += 1;
            } else {
                disagreements += 1;
                if witness.is_none() {
                    witness = Some(ctx.to_string());
                }
            }
        }
        items.push(ItemReport {
            item: n,
            axiom: axiom_text.to_string(),
            contexts: contexts.len(),
            agreements,
            disagreements,
            witness,
        });
    }
    Ok(CorrespondenceReport {
        max_a,
        max_x,
        sampled: None,
        items,
    })
}

/// Seeded random correspondence check at one carrier size.
pub fn correspondence_sampled(
    n_a: usize,
    n_x: usize,
    samples: usize,
    seed: u64,
) -> Result<CorrespondenceReport, SemError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut items = Vec::new();
    for (n, axiom_text, cond) in CORRESPONDENCE_ITEMS {
        let axiom = parse_formula_sequent(axiom_text).expect("axiom parses");
        let sig = ContextSignature::for_condition(cond);
        let class = FrameClass::Enriched(sig);
        let mut agreements = 0;
        let mut disagreements = 0;
        let mut witness = None;
        let mut drawn = 0;
        while drawn < samples {
            let Some(ctx) = sample_context(&mut rng, n_a, n_x, &class) else {
                continue;
            };
            drawn += 1;
            let (valid, fo) = check_item(&ctx, &axiom, cond)?;
            if valid == fo {
                agreements += 1;
            } else {
                disagreements += 1;
                if witness.is_none() {
                    witness = Some(ctx.to_string());
                }
            }
        }
        items.push(ItemReport {
            item: n,
            axiom: axiom_text.to_string(),
            contexts: drawn,
            agreements,
            disagreements,
            witness,
        });
    }
    Ok(CorrespondenceReport {
        max_a: n_a,
        max_x: n_x,
        sampled: Some((samples, seed)),
        items,
    })
}

/// What countermodel search looks for.
#[derive(Debug, Clone)]
pub enum CountermodelGoal {
    FormulaSequent(Formula, Formula),
    Labelled(Sequent),
}

/// A falsifying structure with its witnesses.
#[derive(Debug, Clone)]
pub struct Countermodel {
    pub ctx: Ctx,
    pub valuation: Valuation,
    pub assignment: Option<LabelAssignment>,
}

impl Countermodel {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.ctx.to_string());
        out.push_str(&format!(
            "# valuation: {}\n",
            describe_valuation(&self.ctx, &self.valuation)
        ));
        if let Some(asg) = &self.assignment {
            out.push_str(&format!(
                "# labels: {}\n",
                describe_assignment(&self.ctx, asg)
            ));
        }
        out
    }
}

/// The relations a labelled sequent mentions, for choosing the enumeration
/// signature.
fn sig_add_formula(sig: &mut ContextSignature, f: &Formula) {
    let mut stack = vec![f.clone()];
    while let Some(f) = stack.pop() {
        match f {
            Formula::Box(a) => {
                sig.rbox = true;
                stack.push(*a);
            }
            Formula::Dia(a) => {
                sig.rdia = true;
                stack.push(*a);
            }
            Formula::Rhd(a) => {
                sig.rrhd = true;
                stack.push(*a);
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                stack.push(*a);
                stack.push(*b);
            }
            _ => {}
        }
    }
}

fn sig_add_rel(sig: &mut ContextSignature, e: &crate::syntax::RelExpr) {
    let mut stack = vec![e.clone()];
    while let Some(e) = stack.pop() {
        match e {
            crate::syntax::RelExpr::Atom(s) => match s {
                RelSym::RBox | RelSym::RBDia => sig.rbox = true,
                RelSym::RDia | RelSym::RBBox => sig.rdia = true,
                RelSym::RRhd | RelSym::RBRhd => sig.rrhd = true,
                _ => {}
            },
            crate::syntax::RelExpr::Comp(r, s) => {
                stack.push(*r);
                stack.push(*s);
            }
        }
    }
}

fn signature_of_sequent(seq: &Sequent) -> ContextSignature {
    let mut sig = ContextSignature::default();
    for item in seq.left.iter().chain(seq.right.iter()) {
        match item {
            SequentItem::Fo(_, f) => sig_add_formula(&mut sig, f),
            SequentItem::Rel(a) => sig_add_rel(&mut sig, a.rel()),
            SequentItem::Impl(t) => {
                sig_add_rel(&mut sig, t.antecedent().rel());
                sig_add_rel(&mut sig, t.consequent().rel());
            }
        }
    }
    sig
}

/// Searches the enumerated class for the first falsifying context, by total
/// structure size then lexicographic order.
pub fn countermodel(
    goal: &CountermodelGoal,
    class: Option<FrameClass>,
    max_a: usize,
    max_x: usize,
) -> Result<Option<Countermodel>, SemError> {
    let class = class.unwrap_or_else(|| match goal {
        CountermodelGoal::FormulaSequent(f, g) => {
            let mut seq = Sequent::new(vec![], vec![]);
            let a = crate::syntax::Label::new("a").unwrap();
            seq.left.push(SequentItem::Fo(a.clone(), f.clone()));
            seq.right.push(SequentItem::Fo(a, g.clone()));
            FrameClass::Enriched(signature_of_sequent(&seq))
        }
        CountermodelGoal::Labelled(seq) => FrameClass::Enriched(signature_of_sequent(seq)),
    });
    for ctx in enumerate_contexts(max_a, max_x, &class)? {
        match goal {
            CountermodelGoal::FormulaSequent(f, g) => {
                if let Some(v) = falsify_sequent(&ctx, f, g)? {
                    return Ok(Some(Countermodel {
                        ctx,
                        valuation: v,
                        assignment: None,
                    }));
                }
            }
            CountermodelGoal::Labelled(seq) => {
                if let Some((v, asg)) = falsify_labelled(&ctx, seq)? {
                    return Ok(Some(Countermodel {
                        ctx,
                        valuation: v,
                        assignment: Some(asg),
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_sequent;

    #[test]
    fn correspondence_item1_at_1x1() {
        let report = correspondence_suite(1, 1).unwrap();
        let item1 = &report.items[0];
        assert_eq!(item1.disagreements, 0);
        assert!(item1.contexts > 0);
    }

    #[test]
    fn countermodel_for_p_entails_box_p() {
        let (f, g) = parse_formula_sequent("p |- box p").unwrap();
        let cm = countermodel(&CountermodelGoal::FormulaSequent(f, g), None, 2, 2)
            .unwrap()
            .expect("countermodel exists at 2x2");
        assert!(!cm.render().is_empty());
    }

    #[test]
    fn no_countermodel_for_identity() {
        let (f, g) = parse_formula_sequent("p |- p").unwrap();
        assert!(countermodel(&CountermodelGoal::FormulaSequent(f, g), None, 2, 2)
            .unwrap()
            .is_none());
    }

    #[test]
    fn box_refl_has_no_countermodel_in_its_class() {
        let (f, g) = parse_formula_sequent("box p |- p").unwrap();
        let sig = ContextSignature {
            rbox: true,
            ..Default::default()
        };
        let class = FrameClass::Conditioned(sig, vec![CondId::BoxRefl]);
        assert!(
            countermodel(&CountermodelGoal::FormulaSequent(f, g), Some(class), 3, 3)
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn labelled_countermodel() {
        let seq = parse_sequent("(b Rbox x => b I y) |- y :: p").unwrap();
        let cm = countermodel(&CountermodelGoal::Labelled(seq), None, 2, 2)
            .unwrap()
            .expect("countermodel exists");
        assert!(cm.assignment.is_some());
    }
}
