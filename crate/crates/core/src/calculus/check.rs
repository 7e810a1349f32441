//! Schema matching and proof checking.
//!
//! Node sequents are compared in desugared normal form, so proof scripts may
//! write composition atoms or their implication terms interchangeably; the
//! dashed fold/unfold steps check as identities.

use std::collections::BTreeMap;

use thiserror::Error;

use super::rules::{
    family_members, schema, CalculusConfig, FPat, Family, LVar, Pat, RPat, RelAPat, RuleId,
    Schema, Side, Special,
};
use crate::syntax::{
    fresh_label, impl_with_bound, Formula, ImplTerm, Label, RelAtom, RelExpr, RelSym, Sequent,
    SequentItem, Sort,
};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RuleError {
    #[error("rule {} is not enabled by the configuration", .0.script_name())]
    RuleDisabled(RuleId),
    #[error("rule {} takes {expected} premise(s), found {got}", .rule.script_name())]
    BadArity {
        rule: RuleId,
        expected: usize,
        got: usize,
    },
    #[error("conclusion does not match the schema of {}", .0.script_name())]
    NoMatch(RuleId),
    #[error("premise {index} does not match the schema of {}", .rule.script_name())]
    PremiseMismatch { rule: RuleId, index: usize },
    #[error("eigenvariable `{label}` of {} occurs in the matched context", .rule.script_name())]
    EigenvariableViolation { rule: RuleId, label: String },
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("bad binding for metavariable `{0}`: {1}")]
    BadBind(String, String),
}

/// Metavariable assignment plus the matched residual contexts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Binding {
    pub labels: BTreeMap<String, Label>,
    pub formulas: BTreeMap<String, Formula>,
    pub rels: BTreeMap<String, RelExpr>,
    pub items: BTreeMap<String, SequentItem>,
}

impl Binding {
    fn bind_label(&mut self, lv: &LVar, l: &Label) -> bool {
        if let Some(s) = lv.sort {
            if l.sort() != s {
                return false;
            }
        }
        match self.labels.get(lv.name) {
            Some(prev) => prev == l,
            None => {
                self.labels.insert(lv.name.to_string(), l.clone());
                true
            }
        }
    }

    fn bind_formula(&mut self, name: &str, f: &Formula) -> bool {
        match self.formulas.get(name) {
            Some(prev) => prev == f,
            None => {
                self.formulas.insert(name.to_string(), f.clone());
                true
            }
        }
    }

    fn bind_rel(&mut self, name: &str, e: &RelExpr) -> bool {
        match self.rels.get(name) {
            Some(prev) => prev == e,
            None => {
                self.rels.insert(name.to_string(), e.clone());
                true
            }
        }
    }
}

fn unify_formula(fp: &FPat, f: &Formula, b: &mut Binding) -> bool {
    match (fp, f) {
        (FPat::Var(n), f) => b.bind_formula(n, f),
        (FPat::Bot, Formula::Bot) => true,
        (FPat::Top, Formula::Top) => true,
        (FPat::And(n1, n2), Formula::And(f1, f2)) => {
            b.bind_formula(n1, f1) && b.bind_formula(n2, f2)
        }
        (FPat::Or(n1, n2), Formula::Or(f1, f2)) => {
            b.bind_formula(n1, f1) && b.bind_formula(n2, f2)
        }
        (FPat::Box(n), Formula::Box(f)) => b.bind_formula(n, f),
        (FPat::Dia(n), Formula::Dia(f)) => b.bind_formula(n, f),
        (FPat::Rhd(n), Formula::Rhd(f)) => b.bind_formula(n, f),
        _ => false,
    }
}

fn unify_rexpr(rp: &RPat, e: &RelExpr, b: &mut Binding, rough: bool) -> bool {
    match (rp, e) {
        (RPat::Sym(s), RelExpr::Atom(a)) => s == a,
        (RPat::Var(n, fam), e) => {
            if !family_exprs(*fam, rough).contains(e) {
                return false;
            }
            b.bind_rel(n, e)
        }
        (RPat::Comp(p1, p2), RelExpr::Comp(e1, e2)) => {
            unify_rexpr(p1, e1, b, rough) && unify_rexpr(p2, e2, b, rough)
        }
        _ => false,
    }
}

pub fn family_exprs(fam: Family, rough: bool) -> Vec<RelExpr> {
    fn to_expr(p: &RPat) -> RelExpr {
        match p {
            RPat::Sym(s) => RelExpr::Atom(*s),
            RPat::Comp(a, b) => RelExpr::comp(to_expr(a), to_expr(b)),
            RPat::Var(..) => unreachable!("families are ground"),
        }
    }
    family_members(fam, rough).iter().map(to_expr).collect()
}

/// Unifies an atom pattern against an atom. Besides the direct reading, an
/// incidence atom can be read as its `J` converse and a strict-box atom as
/// its `Sdia` converse, since those spellings normalize away.
fn unify_relatom(pat: &RelAPat, atom: &RelAtom, b: &Binding, rough: bool) -> Vec<Binding> {
    let mut out = Vec::new();
    {
        let mut b2 = b.clone();
        if unify_rexpr(&pat.rel, atom.rel(), &mut b2, rough)
            && b2.bind_label(&pat.lhs, atom.lhs())
            && b2.bind_label(&pat.rhs, atom.rhs())
        {
            out.push(b2);
        }
    }
    let converse_sym = match atom.rel() {
        RelExpr::Atom(RelSym::I) => Some(RelSym::J),
        RelExpr::Atom(RelSym::SBox) => Some(RelSym::SDia),
        _ => None,
    };
    if let Some(sym) = converse_sym {
        let mut b2 = b.clone();
        if unify_rexpr(&pat.rel, &RelExpr::Atom(sym), &mut b2, rough)
            && b2.bind_label(&pat.lhs, atom.rhs())
            && b2.bind_label(&pat.rhs, atom.lhs())
        {
            out.push(b2);
        }
    }
    out
}

fn unify_item(pat: &Pat, item: &SequentItem, b: &Binding, rough: bool) -> Vec<Binding> {
    match (pat, item) {
        (Pat::Fo(lv, fp), SequentItem::Fo(l, f)) => {
            let mut b2 = b.clone();
            if b2.bind_label(lv, l) && unify_formula(fp, f, &mut b2) {
                vec![b2]
            } else {
                vec![]
            }
        }
        (Pat::Rel(rp), SequentItem::Rel(atom)) => unify_relatom(rp, atom, b, rough),
        // A relation variable can stand for a composition, whose atoms live
        // in desugared form: (w S v => u I w) is `u (I;S) v` and
        // (w S v => w I x) is `x (J;S) v`.
        (Pat::Rel(rp), SequentItem::Impl(t)) if matches!(rp.rel, RPat::Var(..)) => {
            let Some(atom) = recompose(t) else {
                return vec![];
            };
            unify_relatom(rp, &atom, b, rough)
        }
        (Pat::Impl { bound, ante, cons }, SequentItem::Impl(t)) => {
            let mut b2 = b.clone();
            if !b2.bind_label(bound, t.bound()) {
                return vec![];
            }
            let mut out = Vec::new();
            for b3 in unify_relatom(ante, t.antecedent(), &b2, rough) {
                for b4 in unify_relatom(cons, t.consequent(), &b3, rough) {
                    if impl_capture_free(bound, ante, cons, &b4) {
                        out.push(b4);
                    }
                }
            }
            out
        }
        (Pat::Any(n), item) => {
            let mut b2 = b.clone();
            match b2.items.get(*n) {
                Some(prev) if prev == item => vec![b2],
                Some(_) => vec![],
                None => {
                    b2.items.insert(n.to_string(), item.clone());
                    vec![b2]
                }
            }
        }
        _ => vec![],
    }
}

/// The schema's free metavariables inside an implication pattern must not
/// be instantiated with the binder's label, or the quantifier would capture
/// them.
fn impl_capture_free(bound: &LVar, ante: &RelAPat, cons: &RelAPat, b: &Binding) -> bool {
    let Some(bl) = b.labels.get(bound.name) else {
        return true;
    };
    for lv in [&ante.lhs, &ante.rhs, &cons.lhs, &cons.rhs] {
        if lv.name != bound.name && b.labels.get(lv.name) == Some(bl) {
            return false;
        }
    }
    true
}

/// Rebuilds the composition atom an implication term desugars from, when it
/// has that shape.
fn recompose(t: &ImplTerm) -> Option<RelAtom> {
    let w = t.bound();
    if t.antecedent().lhs() != w {
        return None;
    }
    let inner = t.antecedent().rel().clone();
    let v = t.antecedent().rhs().clone();
    let cons = t.consequent();
    if cons.lhs() == w {
        // (w S v => w I x): x (J;S) v
        RelAtom::new(
            cons.rhs().clone(),
            RelExpr::comp(RelExpr::Atom(RelSym::J), inner),
            v,
        )
        .ok()
    } else if cons.rhs() == w {
        // (w S v => u I w): u (I;S) v
        RelAtom::new(
            cons.lhs().clone(),
            RelExpr::comp(RelExpr::Atom(RelSym::I), inner),
            v,
        )
        .ok()
    } else {
        None
    }
}

/// Assigns each pattern to a distinct item index, unifying as it goes.
fn select_items(
    pats: &[&Pat],
    items: &[SequentItem],
    b: &Binding,
    used: u64,
    rough: bool,
    out: &mut Vec<(Binding, u64)>,
) {
    match pats.split_first() {
        None => out.push((b.clone(), used)),
        Some((pat, rest)) => {
            for (i, item) in items.iter().enumerate() {
                if used & (1 << i) != 0 {
                    continue;
                }
                for b2 in unify_item(pat, item, b, rough) {
                    select_items(rest, items, &b2, used | (1 << i), rough, out);
                }
            }
        }
    }
}

/// One way the conclusion matches: the binding plus residual contexts.
#[derive(Debug, Clone)]
pub struct ConclusionMatch {
    pub binding: Binding,
    pub gamma: Vec<SequentItem>,
    pub delta: Vec<SequentItem>,
    pub active_left: Vec<SequentItem>,
    pub active_right: Vec<SequentItem>,
}

pub fn conclusion_matches(
    schema: &Schema,
    conclusion: &Sequent,
    seed: &Binding,
    rough: bool,
) -> Vec<ConclusionMatch> {
    let lpats: Vec<&Pat> = schema
        .conclusion
        .iter()
        .filter(|(s, _)| *s == Side::L)
        .map(|(_, p)| p)
        .collect();
    let rpats: Vec<&Pat> = schema
        .conclusion
        .iter()
        .filter(|(s, _)| *s == Side::R)
        .map(|(_, p)| p)
        .collect();
    let mut lsel = Vec::new();
    select_items(&lpats, &conclusion.left, seed, 0, rough, &mut lsel);
    let mut out = Vec::new();
    for (bl, lused) in lsel {
        let mut rsel = Vec::new();
        select_items(&rpats, &conclusion.right, &bl, 0, rough, &mut rsel);
        for (br, rused) in rsel {
            let split = |items: &[SequentItem], used: u64| {
                let mut residual = Vec::new();
                let mut active = Vec::new();
                for (i, it) in items.iter().enumerate() {
                    if used & (1 << i) != 0 {
                        active.push(it.clone());
                    } else {
                        residual.push(it.clone());
                    }
                }
                (residual, active)
            };
            let (gamma, active_left) = split(&conclusion.left, lused);
            let (delta, active_right) = split(&conclusion.right, rused);
            out.push(ConclusionMatch {
                binding: br,
                gamma,
                delta,
                active_left,
                active_right,
            });
        }
    }
    out
}

/// Removes `remove` from `items` as multisets; `None` if some element is
/// missing.
fn subtract(items: &[SequentItem], remove: &[SequentItem]) -> Option<Vec<SequentItem>> {
    let mut rest: Vec<SequentItem> = items.to_vec();
    for r in remove {
        let pos = rest.iter().position(|it| it == r)?;
        rest.remove(pos);
    }
    Some(rest)
}

/// Matches one premise sequent against the schema premise patterns plus the
/// carried contexts.
fn premise_matches(
    prem_pats: &[(Side, Pat)],
    premise: &Sequent,
    gamma: &[SequentItem],
    delta: &[SequentItem],
    b: &Binding,
    rough: bool,
) -> Vec<Binding> {
    let (Some(rest_l), Some(rest_r)) = (
        subtract(&premise.left, gamma),
        subtract(&premise.right, delta),
    ) else {
        return vec![];
    };
    let lpats: Vec<&Pat> = prem_pats
        .iter()
        .filter(|(s, _)| *s == Side::L)
        .map(|(_, p)| p)
        .collect();
    let rpats: Vec<&Pat> = prem_pats
        .iter()
        .filter(|(s, _)| *s == Side::R)
        .map(|(_, p)| p)
        .collect();
    if lpats.len() != rest_l.len() || rpats.len() != rest_r.len() {
        return vec![];
    }
    let mut lsel = Vec::new();
    select_items(&lpats, &rest_l, b, 0, rough, &mut lsel);
    let mut out = Vec::new();
    for (bl, _) in lsel {
        let mut rsel = Vec::new();
        select_items(&rpats, &rest_r, &bl, 0, rough, &mut rsel);
        for (br, _) in rsel {
            out.push(br);
        }
    }
    out
}

fn free_labels_of(items: &[SequentItem]) -> std::collections::BTreeSet<Label> {
    let mut out = std::collections::BTreeSet::new();
    for it in items {
        out.extend(it.free_labels());
    }
    out
}

/// The label metavariables occurring free in the schema's active items
/// (implication binders excluded).
pub fn active_label_vars(schema: &Schema) -> std::collections::BTreeSet<&'static str> {
    let mut names = std::collections::BTreeSet::new();
    for (_, pat) in schema
        .premises
        .iter()
        .flatten()
        .chain(schema.conclusion.iter())
    {
        match pat {
            Pat::Fo(l, _) => {
                names.insert(l.name);
            }
            Pat::Rel(r) => {
                names.insert(r.lhs.name);
                names.insert(r.rhs.name);
            }
            Pat::Impl { bound, ante, cons } => {
                for lv in [&ante.lhs, &ante.rhs, &cons.lhs, &cons.rhs] {
                    if lv.name != bound.name {
                        names.insert(lv.name);
                    }
                }
            }
            Pat::Any(_) => {}
        }
    }
    names
}

/// An eigenvariable must occur only where its schema mentions it: not in
/// the matched contexts and distinct from every other label of the rule
/// instance.
pub fn eigen_check(
    schema: &Schema,
    gamma: &[SequentItem],
    delta: &[SequentItem],
    b: &Binding,
) -> Result<(), Label> {
    let mut context_labels = free_labels_of(gamma);
    context_labels.extend(free_labels_of(delta));
    let active_vars = active_label_vars(schema);
    for name in &schema.eigen {
        let Some(l) = b.labels.get(*name) else {
            continue;
        };
        if context_labels.contains(l) {
            return Err(l.clone());
        }
        for other in &active_vars {
            if other != name && b.labels.get(*other) == Some(l) {
                return Err(l.clone());
            }
        }
    }
    Ok(())
}

/// Forward-checks one rule application. `enforce_eigen` exists for the
/// soundness harness's mutation self-test; real checking always passes true.
pub fn check_instance(
    config: &CalculusConfig,
    rule: RuleId,
    conclusion: &Sequent,
    premises: &[Sequent],
    seed: &Binding,
    enforce_eigen: bool,
) -> Result<(), RuleError> {
    let Some(schema) = schema(rule, config) else {
        return Err(RuleError::RuleDisabled(rule));
    };
    if schema.arity() != premises.len() {
        return Err(RuleError::BadArity {
            rule,
            expected: schema.arity(),
            got: premises.len(),
        });
    }
    let conclusion = conclusion.normalized();
    let premises: Vec<Sequent> = premises.iter().map(|p| p.normalized()).collect();

    match schema.special {
        Some(Special::Identity) => {
            return if premises[0] == conclusion {
                Ok(())
            } else {
                Err(RuleError::PremiseMismatch { rule, index: 0 })
            };
        }
        Some(Special::Cut(sort)) => {
            return check_cut(rule, sort, &conclusion, &premises);
        }
        None => {}
    }

    let matches = conclusion_matches(&schema, &conclusion, seed, config.rough);
    if matches.is_empty() {
        return Err(RuleError::NoMatch(rule));
    }
    let mut best_err = RuleError::PremiseMismatch { rule, index: 0 };
    for m in &matches {
        let mut bindings = vec![m.binding.clone()];
        let mut failed_at = None;
        for (i, prem_pats) in schema.premises.iter().enumerate() {
            let mut next = Vec::new();
            for b in &bindings {
                next.extend(premise_matches(
                    prem_pats,
                    &premises[i],
                    &m.gamma,
                    &m.delta,
                    b,
                    config.rough,
                ));
            }
            if next.is_empty() {
                failed_at = Some(i);
                break;
            }
            bindings = next;
        }
        match failed_at {
            Some(i) => {
                best_err = RuleError::PremiseMismatch { rule, index: i };
            }
            None => {
                for b in &bindings {
                    if !enforce_eigen {
                        return Ok(());
                    }
                    match eigen_check(&schema, &m.gamma, &m.delta, b) {
                        Ok(()) => return Ok(()),
                        Err(l) => {
                            best_err = RuleError::EigenvariableViolation {
                                rule,
                                label: l.name().to_string(),
                            };
                        }
                    }
                }
            }
        }
    }
    Err(best_err)
}

fn check_cut(
    rule: RuleId,
    sort: Sort,
    conclusion: &Sequent,
    premises: &[Sequent],
) -> Result<(), RuleError> {
    let (p1, p2) = (&premises[0], &premises[1]);
    for item in &p1.right {
        let ok_kind = matches!(item, SequentItem::Fo(l, _) if l.sort() == sort);
        if !ok_kind {
            continue;
        }
        if !p2.left.contains(item) {
            continue;
        }
        let Some(r1) = subtract(&p1.right, std::slice::from_ref(item)) else {
            continue;
        };
        let Some(l2) = subtract(&p2.left, std::slice::from_ref(item)) else {
            continue;
        };
        let mut left = p1.left.clone();
        left.extend(l2);
        let mut right = r1;
        right.extend(p2.right.clone());
        if &Sequent::new(left, right) == conclusion {
            return Ok(());
        }
    }
    Err(RuleError::NoMatch(rule))
}

/// A node of a proof tree, as read from a proof script.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofNode {
    pub rule: RuleId,
    pub conclusion: Sequent,
    /// Raw metavariable bindings from the script; resolved against the
    /// schema when checking.
    pub binds: Vec<(String, String)>,
    pub premises: Vec<ProofNode>,
}

impl ProofNode {
    pub fn new(rule: RuleId, conclusion: Sequent, premises: Vec<ProofNode>) -> ProofNode {
        ProofNode {
            rule,
            conclusion,
            binds: Vec::new(),
            premises,
        }
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(|p| p.size()).sum::<usize>()
    }
}

fn resolve_binds(
    config: &CalculusConfig,
    node: &ProofNode,
) -> Result<Binding, RuleError> {
    let mut b = Binding::default();
    if node.binds.is_empty() {
        return Ok(b);
    }
    let Some(schema) = schema(node.rule, config) else {
        return Err(RuleError::RuleDisabled(node.rule));
    };
    let kinds = schema.var_kinds();
    for (name, raw) in &node.binds {
        let bad = |e: String| RuleError::BadBind(name.clone(), e);
        if kinds.labels.contains(name.as_str()) {
            let l = Label::new(raw).map_err(|e| bad(e.to_string()))?;
            b.labels.insert(name.clone(), l);
        } else if kinds.formulas.contains(name.as_str()) {
            let f = crate::syntax::parse_formula(raw).map_err(|e| bad(e.to_string()))?;
            b.formulas.insert(name.clone(), f);
        } else if kinds.rels.contains(name.as_str()) {
            let e = crate::syntax::parse_rel_expr(raw).map_err(|e| bad(e.to_string()))?;
            b.rels.insert(name.clone(), e);
        } else if kinds.items.contains(name.as_str()) {
            let it = crate::syntax::parse_item(raw).map_err(|e| bad(e.to_string()))?;
            b.items.insert(name.clone(), it);
        } else {
            return Err(bad("not a metavariable of this rule".to_string()));
        }
    }
    Ok(b)
}

/// Checks one node against its rule schema, with its premises' stated
/// conclusions.
pub fn check_node(config: &CalculusConfig, node: &ProofNode) -> Result<(), RuleError> {
    let seed = resolve_binds(config, node)?;
    let premises: Vec<Sequent> = node.premises.iter().map(|p| p.conclusion.clone()).collect();
    check_instance(config, node.rule, &node.conclusion, &premises, &seed, true)
}

/// A failure at a node, addressed by its path of premise indices from the
/// root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckFailure {
    pub path: Vec<usize>,
    pub error: RuleError,
}

impl CheckFailure {
    pub fn path_string(&self) -> String {
        if self.path.is_empty() {
            "root".to_string()
        } else {
            self.path
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(".")
        }
    }
}

impl std::fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path_string(), self.error)
    }
}

/// True iff the sequents are equal up to an injective sort-preserving
/// renaming of free labels.
pub fn sequent_alpha_eq(a: &Sequent, b: &Sequent) -> bool {
    let a = a.normalized();
    let b = b.normalized();
    let la: Vec<Label> = a.free_labels().into_iter().collect();
    let lb: Vec<Label> = b.free_labels().into_iter().collect();
    let (ao, af): (Vec<_>, Vec<_>) = la.iter().cloned().partition(|l| l.sort() == Sort::Object);
    let (bo, bf): (Vec<_>, Vec<_>) = lb.iter().cloned().partition(|l| l.sort() == Sort::Object);
    if ao.len() != bo.len() || af.len() != bf.len() {
        return false;
    }
    // rename via fresh intermediates to make the substitution simultaneous
    fn rename_seq(s: &Sequent, map: &[(Label, Label)]) -> Sequent {
        let mut avoid = s.free_labels();
        for (_, t) in map {
            avoid.insert(t.clone());
        }
        let temps: Vec<Label> = map
            .iter()
            .map(|(f, _)| {
                let t = fresh_label(f.sort(), &avoid);
                avoid.insert(t.clone());
                t
            })
            .collect();
        let apply = |s: &Sequent, from: &Label, to: &Label| -> Sequent {
            let m = |items: &[SequentItem]| {
                items
                    .iter()
                    .map(|it| crate::syntax::rename_label(it, from, to).expect("same sort"))
                    .collect()
            };
            Sequent::new(m(&s.left), m(&s.right))
        };
        let mut cur = s.clone();
        for ((f, _), t) in map.iter().zip(&temps) {
            cur = apply(&cur, f, t);
        }
        for ((_, g), t) in map.iter().zip(&temps) {
            cur = apply(&cur, t, g);
        }
        cur
    }
    fn perms<T: Clone>(xs: &[T]) -> Vec<Vec<T>> {
        if xs.is_empty() {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for i in 0..xs.len() {
            let mut rest = xs.to_vec();
            let x = rest.remove(i);
            for mut p in perms(&rest) {
                p.insert(0, x.clone());
                out.push(p);
            }
        }
        out
    }
    for op in perms(&bo) {
        for fp in perms(&bf) {
            let map: Vec<(Label, Label)> = ao
                .iter()
                .cloned()
                .zip(op.iter().cloned())
                .chain(af.iter().cloned().zip(fp.iter().cloned()))
                .collect();
            if rename_seq(&a, &map) == b {
                return true;
            }
        }
    }
    false
}

/// Checks a whole tree against a goal sequent.
pub fn check_proof(
    config: &CalculusConfig,
    tree: &ProofNode,
    goal: &Sequent,
) -> Result<(), CheckFailure> {
    if !sequent_alpha_eq(&tree.conclusion, goal) {
        return Err(CheckFailure {
            path: vec![],
            error: RuleError::NoMatch(tree.rule),
        });
    }
    fn walk(
        config: &CalculusConfig,
        node: &ProofNode,
        path: &mut Vec<usize>,
    ) -> Result<(), CheckFailure> {
        if let Err(error) = check_node(config, node) {
            return Err(CheckFailure {
                path: path.clone(),
                error,
            });
        }
        for (i, p) in node.premises.iter().enumerate() {
            path.push(i);
            walk(config, p, path)?;
            path.pop();
        }
        Ok(())
    }
    walk(config, tree, &mut Vec::new())
}

/// Instantiates an atom pattern; every metavariable must be bound.
pub fn instantiate_relatom(pat: &RelAPat, b: &Binding) -> Option<RelAtom> {
    fn expr(rp: &RPat, b: &Binding) -> Option<RelExpr> {
        Some(match rp {
            RPat::Sym(s) => RelExpr::Atom(*s),
            RPat::Var(n, _) => b.rels.get(*n)?.clone(),
            RPat::Comp(p, q) => RelExpr::comp(expr(p, b)?, expr(q, b)?),
        })
    }
    let lhs = b.labels.get(pat.lhs.name)?.clone();
    let rhs = b.labels.get(pat.rhs.name)?.clone();
    RelAtom::new(lhs, expr(&pat.rel, b)?, rhs).ok()
}

/// Instantiates an item pattern. An unbound implication binder gets a fresh
/// label (its concrete name is irrelevant up to alpha).
pub fn instantiate_item(pat: &Pat, b: &Binding) -> Option<SequentItem> {
    match pat {
        Pat::Fo(lv, fp) => {
            let l = b.labels.get(lv.name)?.clone();
            let f = instantiate_formula(fp, b)?;
            if let Some(s) = lv.sort {
                if l.sort() != s {
                    return None;
                }
            }
            Some(SequentItem::Fo(l, f))
        }
        Pat::Rel(rp) => Some(SequentItem::Rel(instantiate_relatom(rp, b)?)),
        Pat::Impl { bound, ante, cons } => {
            let mut b2 = b.clone();
            if !b2.labels.contains_key(bound.name) {
                let mut avoid = std::collections::BTreeSet::new();
                for lv in [&ante.lhs, &ante.rhs, &cons.lhs, &cons.rhs] {
                    if let Some(l) = b.labels.get(lv.name) {
                        avoid.insert(l.clone());
                    }
                }
                let sort = bound.sort.unwrap_or(Sort::Object);
                b2.labels
                    .insert(bound.name.to_string(), fresh_label(sort, &avoid));
            }
            if !impl_capture_free(bound, ante, cons, &b2) {
                return None;
            }
            let ante = instantiate_relatom(ante, &b2)?;
            let cons = instantiate_relatom(cons, &b2)?;
            let t = ImplTerm::new(ante, cons).ok()?;
            // keep the requested binder name when it is the shared label
            let want = b2.labels.get(bound.name).unwrap();
            if t.bound() != want {
                return None;
            }
            Some(SequentItem::Impl(impl_with_bound(&t, want)))
        }
        Pat::Any(n) => b.items.get(*n).cloned(),
    }
}

fn instantiate_formula(fp: &FPat, b: &Binding) -> Option<Formula> {
    Some(match fp {
        FPat::Var(n) => b.formulas.get(*n)?.clone(),
        FPat::Bot => Formula::Bot,
        FPat::Top => Formula::Top,
        FPat::And(n1, n2) => {
            Formula::and(b.formulas.get(*n1)?.clone(), b.formulas.get(*n2)?.clone())
        }
        FPat::Or(n1, n2) => {
            Formula::or(b.formulas.get(*n1)?.clone(), b.formulas.get(*n2)?.clone())
        }
        FPat::Box(n) => Formula::boxed(b.formulas.get(*n)?.clone()),
        FPat::Dia(n) => Formula::dia(b.formulas.get(*n)?.clone()),
        FPat::Rhd(n) => Formula::rhd(b.formulas.get(*n)?.clone()),
    })
}
