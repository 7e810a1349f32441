//! Per-rule soundness checking by sampling rule instances and evaluating
//! premises and conclusion on enumerated finite contexts of the matching
//! frame class.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::enumerate::{enumerate_contexts, ContextSignature, FrameClass};
use crate::calculus::{
    check_instance, instantiate_item, schema, Binding, CalculusConfig, Pat, RPat, RuleError,
    RuleId, Schema, Side,
};
use crate::semantics::{footnote_polarity, labelled_sequent_valid, Ctx, EnrichedContext, Rel};
use crate::syntax::{Formula, Label, RelAtom, RelSym, Sequent, SequentItem, Sort};

/// Report of one rule group.
#[derive(Debug, Clone, Serialize)]
pub struct GroupReport {
    pub group: String,
    pub instances: usize,
    /// (instance, context) pairs where every premise was valid.
    pub premise_valid_pairs: usize,
    pub violations: usize,
    pub examples: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FuzzReport {
    pub trials_per_group: usize,
    pub seed: u64,
    pub side_conditions_enforced: bool,
    pub groups: Vec<GroupReport>,
}

impl FuzzReport {
    pub fn total_violations(&self) -> usize {
        self.groups.iter().map(|g| g.violations).sum()
    }

    pub fn lines(&self) -> Vec<String> {
        self.groups
            .iter()
            .map(|g| {
                format!(
                    "group {:<16} instances={} premise-valid-pairs={} violations={}",
                    g.group, g.instances, g.premise_valid_pairs, g.violations
                )
            })
            .collect()
    }
}

/// The rule groups exercised under a configuration.
pub fn rule_groups(config: &CalculusConfig) -> Vec<(String, Vec<RuleId>)> {
    use RuleId::*;
    let mut groups: Vec<(String, Vec<RuleId>)> = vec![
        ("initial".into(), vec![IdObj, IdFeat, BotInit, TopInit]),
        ("structural".into(), vec![WeakL, WeakR, CutObj, CutFeat]),
        (
            "switch".into(),
            vec![
                SwXa, SwAx, SwADiaX1, SwABoxX1, SwXBoxA1, SwXDiaA1, SwADiaX2, SwABoxX2, SwXBoxA2,
                SwXDiaA2, SwXRhdA1, SwARhdX1, SwXRhdA2, SwARhdX2,
            ],
        ),
        (
            "switch-black".into(),
            vec![
                SwABDiaX1, SwABBoxX1, SwXBBoxA1, SwXBDiaA1, SwABDiaX2, SwABBoxX2, SwXBBoxA2,
                SwXBDiaA2, SwXBRhdA1, SwABRhdX1, SwXBRhdA2, SwABRhdX2,
            ],
        ),
        ("approx".into(), vec![ApproxX, ApproxA]),
        (
            "pure-structure".into(),
            vec![
                StructIS, StructISInv, StructJT, StructJTInv, IdIJRight, IdJIRight, IdIJLeft,
                IdJILeft,
            ],
        ),
        (
            "adjunction".into(),
            vec![
                AdjDiaBBox, AdjBoxBDia, AdjRhdBRhd, AdjBBoxDia, AdjBDiaBox, AdjBRhdRhd,
            ],
        ),
        (
            "logical".into(),
            vec![AndL, AndR, OrL, OrR, BoxL, BoxR, DiaL, DiaR, RhdL, RhdR],
        ),
        (
            "table-1".into(),
            vec![TBoxRefl, TDiaRefl, TBoxDense, TDiaDense, TB1, TB2, TSymRhd],
        ),
        (
            "rough".into(),
            vec![
                SwSf, SwSfi, SwSdf, SwSdfi, SwEs, SwEsi, CurryS, UncurryS, Refl, Sym, Trans,
            ],
        ),
    ];
    for (_, rules) in groups.iter_mut() {
        rules.retain(|r| {
            // table-1 rules are fuzzed on their own conditioned class even
            // when sigma does not enable them
            r.axiom().is_some()
                || r.enabled(&CalculusConfig {
                    allow_cut: true,
                    ..config.clone()
                })
        });
    }
    groups.retain(|(_, rules)| !rules.is_empty());
    groups
}

/// The frame class a rule's soundness is stated over.
fn class_for_rule(config: &CalculusConfig, rule: RuleId) -> FrameClass {
    if config.rough {
        return FrameClass::Rough { compat: true };
    }
    match rule.axiom() {
        Some(ax) => {
            let cond = match ax {
                crate::calculus::Axiom::BoxRefl => crate::semantics::CondId::BoxRefl,
                crate::calculus::Axiom::DiaRefl => crate::semantics::CondId::DiaRefl,
                crate::calculus::Axiom::BoxDense => crate::semantics::CondId::BoxDense,
                crate::calculus::Axiom::DiaDense => crate::semantics::CondId::DiaDense,
                crate::calculus::Axiom::B1 => crate::semantics::CondId::B1,
                crate::calculus::Axiom::B2 => crate::semantics::CondId::B2,
                crate::calculus::Axiom::SymRhd => crate::semantics::CondId::SymRhd,
            };
            FrameClass::Conditioned(ContextSignature::all(), vec![cond])
        }
        None => FrameClass::Enriched(ContextSignature::all()),
    }
}

struct Gen {
    rng: ChaCha8Rng,
    rough: bool,
}

impl Gen {
    fn label(&mut self, sort: Sort) -> Label {
        let pool: [&str; 3] = match sort {
            Sort::Object => ["a", "b", "c"],
            Sort::Feature => ["x", "y", "z"],
        };
        Label::new(pool[self.rng.gen_range(0..3)]).unwrap()
    }

    fn formula(&mut self, depth: usize) -> Formula {
        let leaf = depth == 0 || self.rng.gen_bool(0.4);
        if leaf {
            match self.rng.gen_range(0..4) {
                0 => Formula::Bot,
                1 => Formula::Top,
                2 => Formula::prop("p"),
                _ => Formula::prop("q"),
            }
        } else {
            let inner = self.formula(depth - 1);
            match self.rng.gen_range(0..5) {
                0 => Formula::and(inner, self.formula(depth - 1)),
                1 => Formula::or(inner, self.formula(depth - 1)),
                2 => Formula::boxed(inner),
                3 => Formula::dia(inner),
                _ => Formula::rhd(inner),
            }
        }
    }

    fn rel_sym(&mut self) -> RelSym {
        if self.rough {
            *[RelSym::I, RelSym::SBox, RelSym::E]
                .choose(&mut self.rng)
                .unwrap()
        } else {
            *[RelSym::I, RelSym::RBox, RelSym::RDia, RelSym::RRhd]
                .choose(&mut self.rng)
                .unwrap()
        }
    }

    fn item(&mut self) -> SequentItem {
        if self.rng.gen_bool(0.5) {
            let sort = if self.rng.gen_bool(0.5) {
                Sort::Object
            } else {
                Sort::Feature
            };
            SequentItem::Fo(self.label(sort), self.formula(1))
        } else {
            let sym = self.rel_sym();
            let (d, c) = sym.signature();
            let atom = RelAtom::sym(self.label(d), sym, self.label(c)).unwrap();
            SequentItem::Rel(atom)
        }
    }

    /// Item guaranteed to mention the given label; used to break a side
    /// condition deliberately.
    fn item_with_label(&mut self, l: &Label) -> SequentItem {
        SequentItem::Fo(l.clone(), self.formula(1))
    }
}

fn rpat_signature(rp: &RPat, b: &Binding) -> Option<(Sort, Sort)> {
    match rp {
        RPat::Sym(s) => Some(s.signature()),
        RPat::Var(n, _) => b.rels.get(*n)?.signature().ok(),
        RPat::Comp(r, s) => {
            let (rd, rc) = rpat_signature(r, b)?;
            let (sd, sc) = rpat_signature(s, b)?;
            if rc != sd {
                return None;
            }
            Some((rd, sc))
        }
    }
}

/// Collects each label metavariable's required sort given the relation
/// instantiation; `None` on conflicts.
fn label_sorts(schema: &Schema, b: &Binding) -> Option<Vec<(String, Sort)>> {
    let mut out: std::collections::BTreeMap<String, Sort> = Default::default();
    let put = |name: &str, sort: Sort, out: &mut std::collections::BTreeMap<String, Sort>| {
        match out.get(name) {
            Some(prev) if *prev != sort => None,
            _ => {
                out.insert(name.to_string(), sort);
                Some(())
            }
        }
    };
    for (_, pat) in schema.premises.iter().flatten().chain(schema.conclusion.iter()) {
        match pat {
            Pat::Fo(l, _) => {
                put(l.name, l.sort?, &mut out)?;
            }
            Pat::Rel(r) => {
                let (d, c) = rpat_signature(&r.rel, b)?;
                put(r.lhs.name, d, &mut out)?;
                put(r.rhs.name, c, &mut out)?;
            }
            Pat::Impl { bound, ante, cons } => {
                for r in [ante, cons] {
                    let (d, c) = rpat_signature(&r.rel, b)?;
                    put(r.lhs.name, d, &mut out)?;
                    put(r.rhs.name, c, &mut out)?;
                }
                let _ = bound;
            }
            Pat::Any(_) => {}
        }
    }
    Some(out.into_iter().collect())
}

/// One generated rule instance.
struct Instance {
    conclusion: Sequent,
    premises: Vec<Sequent>,
}

fn generate_instance(
    g: &mut Gen,
    config: &CalculusConfig,
    schema: &Schema,
    break_side_condition: bool,
) -> Option<Instance> {
    let mut b = Binding::default();
    // relation metavariables first; label sorts may depend on them
    let kinds = schema.var_kinds();
    for name in &kinds.rels {
        let fam = find_family(schema, name)?;
        let exprs = crate::calculus::family_exprs(fam, config.rough);
        let e = exprs[g.rng.gen_range(0..exprs.len())].clone();
        b.rels.insert(name.to_string(), e);
    }
    for (name, sort) in label_sorts(schema, &b)? {
        let l = g.label(sort);
        b.labels.insert(name, l);
    }
    for name in &kinds.formulas {
        let f = g.formula(2);
        b.formulas.insert(name.to_string(), f);
    }
    for name in &kinds.items {
        b.items.insert(name.to_string(), g.item());
    }

    let mut gamma: Vec<SequentItem> = Vec::new();
    let mut delta: Vec<SequentItem> = Vec::new();
    if g.rng.gen_bool(0.6) {
        gamma.push(g.item());
    }
    if g.rng.gen_bool(0.6) {
        delta.push(g.item());
    }
    if break_side_condition {
        let name = schema.eigen.choose(&mut g.rng)?;
        let l = b.labels.get(*name)?.clone();
        gamma.push(g.item_with_label(&l));
    }

    let build = |pats: &[(Side, Pat)]| -> Option<Sequent> {
        let mut left = gamma.clone();
        let mut right = delta.clone();
        for (side, pat) in pats {
            let item = instantiate_item(pat, &b)?;
            match side {
                Side::L => left.push(item),
                Side::R => right.push(item),
            }
        }
        Some(Sequent::new(left, right))
    };
    let conclusion = build(&schema.conclusion)?;
    let premises: Vec<Sequent> = schema
        .premises
        .iter()
        .map(|p| build(p))
        .collect::<Option<_>>()?;
    Some(Instance {
        conclusion,
        premises,
    })
}

fn find_family(schema: &Schema, name: &str) -> Option<crate::calculus::Family> {
    fn in_rpat(rp: &RPat, name: &str) -> Option<crate::calculus::Family> {
        match rp {
            RPat::Sym(_) => None,
            RPat::Var(n, f) => (*n == name).then_some(*f),
            RPat::Comp(a, b) => in_rpat(a, name).or_else(|| in_rpat(b, name)),
        }
    }
    for (_, pat) in schema.premises.iter().flatten().chain(schema.conclusion.iter()) {
        let found = match pat {
            Pat::Rel(r) => in_rpat(&r.rel, name),
            Pat::Impl { ante, cons, .. } => {
                in_rpat(&ante.rel, name).or_else(|| in_rpat(&cons.rel, name))
            }
            _ => None,
        };
        if found.is_some() {
            return found;
        }
    }
    None
}

fn generate_cut_instance(g: &mut Gen, sort: Sort) -> Instance {
    let l = g.label(sort);
    let f = g.formula(1);
    let cut = SequentItem::Fo(l, f);
    let g1: Vec<SequentItem> = (0..g.rng.gen_range(0..2)).map(|_| g.item()).collect();
    let d1: Vec<SequentItem> = (0..g.rng.gen_range(0..2)).map(|_| g.item()).collect();
    let g2: Vec<SequentItem> = (0..g.rng.gen_range(0..2)).map(|_| g.item()).collect();
    let d2: Vec<SequentItem> = (0..g.rng.gen_range(0..2)).map(|_| g.item()).collect();
    let mut r1 = d1.clone();
    r1.push(cut.clone());
    let mut l2 = g2.clone();
    l2.push(cut);
    let p1 = Sequent::new(g1.clone(), r1);
    let p2 = Sequent::new(l2, d2.clone());
    let mut left = g1;
    left.extend(g2);
    let mut right = d1;
    right.extend(d2);
    Instance {
        conclusion: Sequent::new(left, right),
        premises: vec![p1, p2],
    }
}

/// Samples `trials` legal instances per rule group and checks the soundness
/// implication on enumerated 2x2 contexts of each rule's class. With
/// `side_conditions_enforced = false` the generator deliberately places
/// eigenvariables into the contexts, which must surface violations (the
/// harness self-test).
pub fn soundness_fuzz(
    config: &CalculusConfig,
    trials: usize,
    seed: u64,
    side_conditions_enforced: bool,
) -> FuzzReport {
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
        rough: config.rough,
    };
    let contexts_per_instance = 6;
    let mut groups = Vec::new();
    let base_ctxs = enumerate_contexts(
        2,
        2,
        &if config.rough {
            FrameClass::Rough { compat: true }
        } else {
            FrameClass::Enriched(ContextSignature::all())
        },
    )
    .expect("within bounds");

    for (name, rules) in rule_groups(config) {
        let mut report = GroupReport {
            group: name,
            instances: 0,
            premise_valid_pairs: 0,
            violations: 0,
            examples: Vec::new(),
        };
        // conditioned classes per table-1 rule
        let ctxs_for: Vec<(RuleId, Vec<Ctx>)> = rules
            .iter()
            .map(|&r| {
                let class = class_for_rule(config, r);
                let ctxs = if matches!(class, FrameClass::Conditioned(..)) {
                    enumerate_contexts(2, 2, &class).expect("within bounds")
                } else {
                    base_ctxs.clone()
                };
                (r, ctxs)
            })
            .collect();

        let mut attempts = 0usize;
        while report.instances < trials && attempts < trials * 60 {
            attempts += 1;
            let (rule, ctxs) = &ctxs_for[g.rng.gen_range(0..ctxs_for.len())];
            if ctxs.is_empty() {
                continue;
            }
            let enable = CalculusConfig {
                allow_cut: true,
                sigma: crate::calculus::Axiom::ALL.iter().copied().collect(),
                ..config.clone()
            };
            let Some(sch) = schema(*rule, &enable) else {
                continue;
            };
            let breaking = !side_conditions_enforced && !sch.eigen.is_empty();
            let inst = match sch.special {
                Some(crate::calculus::Special::Cut(sort)) => generate_cut_instance(&mut g, sort),
                Some(crate::calculus::Special::Identity) => continue,
                None => match generate_instance(&mut g, &enable, &sch, breaking) {
                    Some(i) => i,
                    None => continue,
                },
            };
            // A legal instance must pass the checker (without the eigen
            // check when we broke it on purpose, in which case the strict
            // check must reject it).
            let lenient = check_instance(
                &enable,
                *rule,
                &inst.conclusion,
                &inst.premises,
                &Binding::default(),
                false,
            );
            if lenient.is_err() {
                continue;
            }
            let strict = check_instance(
                &enable,
                *rule,
                &inst.conclusion,
                &inst.premises,
                &Binding::default(),
                true,
            );
            match (&strict, breaking) {
                (Ok(()), false) => {}
                (Err(RuleError::EigenvariableViolation { .. }), true) => {}
                _ => continue,
            }
            report.instances += 1;

            let start = g.rng.gen_range(0..ctxs.len());
            for k in 0..contexts_per_instance.min(ctxs.len()) {
                let ctx = &ctxs[(start + k) % ctxs.len()];
                let mut all_premises_valid = true;
                for p in &inst.premises {
                    match labelled_sequent_valid(ctx, p) {
                        Ok(true) => {}
                        _ => {
                            all_premises_valid = false;
                            break;
                        }
                    }
                }
                if !all_premises_valid {
                    continue;
                }
                report.premise_valid_pairs += 1;
                if let Ok(false) = labelled_sequent_valid(ctx, &inst.conclusion) {
                    report.violations += 1;
                    if report.examples.len() < 3 {
                        report.examples.push(format!(
                            "{}: premises valid, conclusion {} invalid on\n{}",
                            rule.script_name(),
                            inst.conclusion,
                            ctx
                        ));
                    }
                }
            }
        }
        groups.push(report);
    }
    FuzzReport {
        trials_per_group: trials,
        seed,
        side_conditions_enforced,
        groups,
    }
}

/// Exhibits the I-compatibility content of the switch rules: on the
/// footnote structure taken as a raw box-relation (which is not
/// I-compatible), some switch-rule instance has a valid premise and an
/// invalid conclusion.
pub fn icompat_violation_witness() -> Option<(RuleId, Vec<Sequent>, Sequent)> {
    let pol = footnote_polarity();
    let bad_rbox = Rel::from_pairs(2, 2, &[(0, 1), (1, 1)]); // the strict approximation
    let ctx = Ctx::Enriched(EnrichedContext::new(
        pol,
        Some(bad_rbox.clone()),
        Some(bad_rbox.converse()),
        None,
    ));
    let config = CalculusConfig::base();
    let rules = [
        RuleId::SwABoxX1,
        RuleId::SwXBoxA1,
        RuleId::SwADiaX1,
        RuleId::SwXDiaA1,
        RuleId::SwABoxX2,
        RuleId::SwXBoxA2,
        RuleId::SwADiaX2,
        RuleId::SwXDiaA2,
    ];
    let formulas = [Formula::Bot, Formula::Top, Formula::prop("p")];
    for rule in rules {
        let sch = schema(rule, &config).expect("enabled");
        for f in &formulas {
            let mut b = Binding::default();
            let sorts = label_sorts(&sch, &b)?;
            let (mut next_obj, mut next_feat) = (0, 0);
            for (name, sort) in sorts {
                let l = match sort {
                    Sort::Object => {
                        next_obj += 1;
                        Label::new(["a", "b", "c", "d"][next_obj - 1]).unwrap()
                    }
                    Sort::Feature => {
                        next_feat += 1;
                        Label::new(["x", "y", "z", "u"][next_feat - 1]).unwrap()
                    }
                };
                b.labels.insert(name, l);
            }
            for name in sch.var_kinds().formulas {
                b.formulas.insert(name.to_string(), f.clone());
            }
            let build = |pats: &[(Side, Pat)]| -> Option<Sequent> {
                let mut left = Vec::new();
                let mut right = Vec::new();
                for (side, pat) in pats {
                    let item = instantiate_item(pat, &b)?;
                    match side {
                        Side::L => left.push(item),
                        Side::R => right.push(item),
                    }
                }
                Some(Sequent::new(left, right))
            };
            let Some(conclusion) = build(&sch.conclusion) else {
                continue;
            };
            let premises: Option<Vec<Sequent>> = sch.premises.iter().map(|p| build(p)).collect();
            let Some(premises) = premises else { continue };
            if check_instance(&config, rule, &conclusion, &premises, &Binding::default(), true)
                .is_err()
            {
                continue;
            }
            let prem_ok = premises
                .iter()
                .all(|p| labelled_sequent_valid(&ctx, p).unwrap_or(false));
            if !prem_ok {
                continue;
            }
            if let Ok(false) = labelled_sequent_valid(&ctx, &conclusion) {
                return Some((rule, premises, conclusion));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fuzz_runs_clean() {
        let report = soundness_fuzz(&CalculusConfig::base(), 40, 7, true);
        assert_eq!(report.total_violations(), 0, "{:#?}", report.groups);
        assert!(report.groups.iter().all(|g| g.instances > 0));
    }

    #[test]
    fn rough_fuzz_runs_clean() {
        let report = soundness_fuzz(&CalculusConfig::rough(), 40, 11, true);
        assert_eq!(report.total_violations(), 0, "{:#?}", report.groups);
    }

    #[test]
    fn icompat_witness_exists() {
        let (rule, premises, conclusion) = icompat_violation_witness().expect("witness");
        assert!(!premises.is_empty() || conclusion.left.is_empty());
        // the witness is a box/dia switch rule
        assert!(rule.script_name().starts_with("sw-"));
    }
}
