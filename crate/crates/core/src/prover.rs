//! Depth-bounded backward proof search producing checkable proof trees.
//!
//! Backward search runs in two phases at each goal. The initial rules close
//! goals outright and the invertible logical rules are applied eagerly as
//! forced moves (they never lose provability). The remaining enabled rules
//! are genuine choice points explored by iterative deepening; only those
//! consume search depth. Eigenvariable rules instantiate fresh labels from
//! the reserved `_o<n>` / `_u<n>` namespace, and Cut is never used.

use std::collections::{BTreeSet, HashMap};

use crate::calculus::{
    conclusion_matches, instantiate_item, schema, Binding, CalculusConfig, Pat, ProofNode, RuleId,
    Schema, Side, Special,
};
use crate::syntax::{Label, Sequent, SequentItem, Sort};

/// Bounds on the backward search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_depth: usize,
    pub max_fresh_labels: usize,
    pub node_budget: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_depth: 20,
            max_fresh_labels: 16,
            node_budget: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Proved(ProofNode),
    Exhausted,
    BudgetExceeded,
}

const CLOSING: [RuleId; 4] = [RuleId::IdObj, RuleId::IdFeat, RuleId::BotInit, RuleId::TopInit];

/// The invertible logical rules, applied eagerly. Consuming rules first.
const FORCED: [RuleId; 10] = [
    RuleId::AndL,
    RuleId::OrR,
    RuleId::AndR,
    RuleId::OrL,
    RuleId::BoxR,
    RuleId::DiaL,
    RuleId::RhdR,
    RuleId::BoxL,
    RuleId::DiaR,
    RuleId::RhdL,
];

/// Choice-point order: cheap, goal-directed rules first; weakening last.
fn branch_order(config: &CalculusConfig) -> Vec<(RuleId, Schema)> {
    use RuleId::*;
    let tier = |id: RuleId| -> u8 {
        match id {
            ApproxX | ApproxA => 0,
            Refl | Sym | Trans | CurryS | UncurryS => 1,
            SwSdf | SwSdfi | SwSf | SwSfi | SwEs | SwEsi => 2,
            TBoxRefl | TDiaRefl | TBoxDense | TDiaDense | TB1 | TB2 | TSymRhd => 2,
            AdjDiaBBox | AdjBoxBDia | AdjRhdBRhd | AdjBBoxDia | AdjBDiaBox | AdjBRhdRhd => 3,
            IdIJRight | IdJIRight | IdIJLeft | IdJILeft => 4,
            StructIS | StructISInv | StructJT | StructJTInv => 5,
            SwXa | SwAx => 6,
            WeakL | WeakR => 8,
            CutObj | CutFeat | Fold | Unfold => u8::MAX,
            r if CLOSING.contains(&r) || FORCED.contains(&r) => u8::MAX,
            _ => 7, // modal switch rules
        }
    };
    let mut rules: Vec<(RuleId, Schema)> = RuleId::ALL
        .iter()
        .filter(|&&id| tier(id) != u8::MAX)
        .filter_map(|&id| schema(id, config).map(|s| (id, s)))
        .collect();
    rules.sort_by_key(|(id, _)| (tier(*id), *id));
    rules
}

struct Searcher {
    config: CalculusConfig,
    branch_rules: Vec<(RuleId, Schema)>,
    closing: Vec<(RuleId, Schema)>,
    forced: Vec<(RuleId, Schema)>,
    nodes_used: usize,
    node_budget: usize,
    max_fresh: usize,
    cutoff_hit: bool,
    budget_exceeded: bool,
    /// Goals that failed at (remaining branch depth, fresh labels already
    /// drawn on the path); a failure dominates retries with no more depth
    /// and no more fresh headroom.
    failed: HashMap<String, (usize, usize)>,
    /// Branch-point goals on the current path, for loop control.
    branch: Vec<String>,
}

/// Memo key: items sorted, reserved labels renamed by first occurrence so
/// states differing only in fresh-name choice coincide.
fn memo_key(seq: &Sequent) -> String {
    let mut map: HashMap<String, String> = HashMap::new();
    let mut next = [0usize; 2];
    let mut parts: Vec<String> = Vec::new();
    let mut canon_items = |items: &[SequentItem], parts: &mut Vec<String>| {
        let mut keys: Vec<String> = items.iter().map(|it| it.to_string()).collect();
        keys.sort();
        for k in keys {
            let mut out = String::new();
            let mut word = String::new();
            for c in k.chars().chain([' ']) {
                if c.is_ascii_alphanumeric() || c == '_' {
                    word.push(c);
                } else {
                    if word.starts_with('_') {
                        let idx = usize::from(!word.starts_with("_o"));
                        let canon = map.entry(word.clone()).or_insert_with(|| {
                            let n = next[idx];
                            next[idx] += 1;
                            format!("_{}{}", if idx == 0 { "o" } else { "u" }, n)
                        });
                        out.push_str(canon);
                    } else {
                        out.push_str(&word);
                    }
                    word.clear();
                    out.push(c);
                }
            }
            parts.push(out);
        }
        parts.push("|".to_string());
    };
    canon_items(&seq.left, &mut parts);
    canon_items(&seq.right, &mut parts);
    parts.join(";")
}

/// One backward application: the rule, its binding (for script emission),
/// the premises still to prove, and the path fresh-label count after it.
type App = (RuleId, Binding, Vec<Sequent>, usize);

impl Searcher {
    /// Backward applications of one schema at a goal. `fresh_base` is how
    /// many reserved labels the current path has drawn already.
    fn rule_applications(
        &mut self,
        id: RuleId,
        sch: &Schema,
        goal: &Sequent,
        fresh_base: usize,
        out: &mut Vec<App>,
    ) {
        debug_assert!(!matches!(
            sch.special,
            Some(Special::Cut(_)) | Some(Special::Identity)
        ));
        for m in conclusion_matches(sch, goal, &Binding::default(), self.config.rough) {
            // premise-only label metavariables: eigenvariables get fresh
            // labels, the rest range over the goal's labels
            let mut unbound: Vec<(&str, Option<Sort>, bool)> = Vec::new();
            let mut seen = BTreeSet::new();
            for (_, pat) in sch.premises.iter().flatten() {
                collect_label_vars(pat, &mut |name, sort, is_binder| {
                    if !is_binder
                        && !m.binding.labels.contains_key(name)
                        && seen.insert(name.to_string())
                    {
                        unbound.push((name, sort, sch.eigen.contains(&name)));
                    }
                });
            }
            let mut fresh_used = fresh_base;
            let mut candidates: Vec<Binding> = vec![m.binding.clone()];
            for (name, sort, is_eigen) in &unbound {
                let sort = sort.unwrap_or(Sort::Object);
                let mut next = Vec::new();
                if *is_eigen {
                    if fresh_used >= self.max_fresh {
                        self.cutoff_hit = true;
                        candidates.clear();
                        break;
                    }
                    fresh_used += 1;
                    let l = Label::reserved(sort, fresh_used);
                    for b in &candidates {
                        let mut b2 = b.clone();
                        b2.labels.insert(name.to_string(), l.clone());
                        next.push(b2);
                    }
                } else {
                    for l in goal.free_labels() {
                        if l.sort() != sort {
                            continue;
                        }
                        for b in &candidates {
                            let mut b2 = b.clone();
                            b2.labels.insert(name.to_string(), l.clone());
                            next.push(b2);
                        }
                    }
                }
                candidates = next;
            }
            'cand: for b in candidates {
                let mut prem_seqs = Vec::new();
                for prem_pats in &sch.premises {
                    let mut left = m.gamma.clone();
                    let mut right = m.delta.clone();
                    for (side, pat) in prem_pats {
                        let Some(item) = instantiate_item(pat, &b) else {
                            continue 'cand;
                        };
                        match side {
                            Side::L => left.push(item),
                            Side::R => right.push(item),
                        }
                    }
                    prem_seqs.push(Sequent::new(left, right).normalized());
                }
                // forward eigenvariable side condition
                if crate::calculus::eigen_check(sch, &m.gamma, &m.delta, &b).is_err() {
                    continue 'cand;
                }
                out.push((id, b, prem_seqs, fresh_used));
            }
        }
    }

    fn try_close(&mut self, goal: &Sequent) -> Option<ProofNode> {
        let closing = std::mem::take(&mut self.closing);
        let mut found = None;
        for (id, sch) in &closing {
            if let Some(m) = conclusion_matches(sch, goal, &Binding::default(), self.config.rough)
                .into_iter()
                .next()
            {
                found = Some(ProofNode {
                    rule: *id,
                    conclusion: goal.clone(),
                    binds: binding_to_script(&m.binding),
                    premises: vec![],
                });
                break;
            }
        }
        self.closing = closing;
        found
    }

    /// The first applicable forced (invertible logical) move, skipping
    /// applications whose premises add nothing new.
    fn forced_move(&mut self, goal: &Sequent, fresh_base: usize) -> Option<App> {
        let forced = std::mem::take(&mut self.forced);
        let mut found = None;
        'rules: for (id, sch) in &forced {
            let mut apps = Vec::new();
            self.rule_applications(*id, sch, goal, fresh_base, &mut apps);
            for app in apps {
                // progress guard for the non-consuming rules
                let useful = match app.0 {
                    RuleId::BoxL | RuleId::DiaR | RuleId::RhdL => {
                        app.2.iter().any(|p| p != &goal.normalized())
                            && app.2.iter().all(|p| !subsumes_with_dup(p, goal))
                    }
                    _ => true,
                };
                if useful {
                    found = Some(app);
                    break 'rules;
                }
            }
        }
        self.forced = forced;
        found
    }

    fn search(&mut self, goal: &Sequent, depth: usize, fresh_base: usize) -> Option<ProofNode> {
        if self.nodes_used >= self.node_budget {
            self.budget_exceeded = true;
            return None;
        }
        self.nodes_used += 1;

        if let Some(n) = self.try_close(goal) {
            return Some(n);
        }
        if let Some((rule, b, prems, fresh)) = self.forced_move(goal, fresh_base) {
            let mut children = Vec::new();
            for p in &prems {
                match self.search(p, depth, fresh) {
                    Some(t) => children.push(t),
                    None => return None,
                }
            }
            return Some(ProofNode {
                rule,
                conclusion: goal.clone(),
                binds: binding_to_script(&b),
                premises: children,
            });
        }

        // choice point
        let key = memo_key(goal);
        if self.branch.contains(&key) {
            return None;
        }
        if let Some(&(d, f)) = self.failed.get(&key) {
            if d >= depth && f <= fresh_base {
                return None;
            }
        }
        if depth == 0 {
            self.cutoff_hit = true;
            return None;
        }
        self.branch.push(key.clone());
        let mut apps: Vec<App> = Vec::new();
        let branch_rules = std::mem::take(&mut self.branch_rules);
        for (id, sch) in &branch_rules {
            self.rule_applications(*id, sch, goal, fresh_base, &mut apps);
        }
        self.branch_rules = branch_rules;
        // drop applications that merely duplicate goal items, and distinct
        // rules whose premises coincide (e.g. a rough relabelling of a
        // switch rule and the interdefinability rule it collapses into)
        let mut seen_premises: BTreeSet<Vec<String>> = BTreeSet::new();
        apps.retain(|(_, _, prems, _)| {
            if prems.iter().any(|p| subsumes_with_dup(p, goal)) {
                return false;
            }
            seen_premises.insert(prems.iter().map(memo_key).collect())
        });
        let mut result = None;
        'apps: for (rule, b, prems, fresh) in apps {
            let mut children = Vec::new();
            for p in &prems {
                match self.search(p, depth - 1, fresh) {
                    Some(t) => children.push(t),
                    None => {
                        if self.budget_exceeded {
                            break 'apps;
                        }
                        continue 'apps;
                    }
                }
            }
            result = Some(ProofNode {
                rule,
                conclusion: goal.clone(),
                binds: binding_to_script(&b),
                premises: children,
            });
            break;
        }
        self.branch.pop();
        if result.is_none() && !self.budget_exceeded {
            // keep the dominating failure record
            let e = self.failed.entry(key).or_insert((depth, fresh_base));
            if depth >= e.0 && fresh_base <= e.1 {
                *e = (depth, fresh_base);
            }
        }
        result
    }
}

/// True when `p` is `goal` plus duplicate copies of items already present,
/// which a multiset-sensitive search should not generate.
fn subsumes_with_dup(p: &Sequent, goal: &Sequent) -> bool {
    let goal = goal.normalized();
    let extra = |a: &[SequentItem], b: &[SequentItem]| -> bool {
        // every item of `a` beyond multiplicity in `b` already occurs in `b`
        let mut b_rest: Vec<&SequentItem> = b.iter().collect();
        let mut extras = Vec::new();
        for it in a {
            if let Some(pos) = b_rest.iter().position(|x| *x == it) {
                b_rest.remove(pos);
            } else {
                extras.push(it);
            }
        }
        !extras.is_empty() && extras.iter().all(|e| b.contains(e))
    };
    extra(&p.left, &goal.left) || extra(&p.right, &goal.right)
}

fn collect_label_vars(pat: &Pat, f: &mut impl FnMut(&'static str, Option<Sort>, bool)) {
    match pat {
        Pat::Fo(l, _) => f(l.name, l.sort, false),
        Pat::Rel(r) => {
            f(r.lhs.name, r.lhs.sort, false);
            f(r.rhs.name, r.rhs.sort, false);
        }
        Pat::Impl { bound, ante, cons } => {
            f(bound.name, bound.sort, true);
            for lv in [&ante.lhs, &ante.rhs, &cons.lhs, &cons.rhs] {
                if lv.name != bound.name {
                    f(lv.name, lv.sort, false);
                }
            }
        }
        Pat::Any(_) => {}
    }
}

fn binding_to_script(b: &Binding) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for (k, v) in &b.labels {
        // synthetic binder names are alpha-irrelevant; skip them
        if !(k.starts_with('w') && k.len() > 1 && k[1..].chars().all(|c| c.is_ascii_digit())) {
            out.push((k.clone(), v.to_string()));
        }
    }
    for (k, v) in &b.formulas {
        out.push((k.clone(), v.to_string()));
    }
    for (k, v) in &b.rels {
        out.push((k.clone(), v.to_string()));
    }
    for (k, v) in &b.items {
        out.push((k.clone(), v.to_string()));
    }
    out
}

/// Backward proof search. A `Proved` tree always re-checks against the goal
/// with cut disabled.
pub fn prove(config: &CalculusConfig, goal: &Sequent, limits: SearchLimits) -> SearchOutcome {
    let config = CalculusConfig {
        allow_cut: false,
        ..config.clone()
    };
    let goal_norm = goal.normalized();
    let reserved_floor = goal_norm
        .free_labels()
        .iter()
        .filter(|l| l.is_reserved())
        .filter_map(|l| l.name()[2..].parse::<usize>().ok())
        .max()
        .unwrap_or(0);
    let closing: Vec<(RuleId, Schema)> = CLOSING
        .iter()
        .filter_map(|&id| schema(id, &config).map(|s| (id, s)))
        .collect();
    let forced: Vec<(RuleId, Schema)> = FORCED
        .iter()
        .filter_map(|&id| schema(id, &config).map(|s| (id, s)))
        .collect();
    let mut s = Searcher {
        branch_rules: branch_order(&config),
        closing,
        forced,
        config: config.clone(),
        nodes_used: 0,
        node_budget: limits.node_budget,
        max_fresh: reserved_floor + limits.max_fresh_labels,
        cutoff_hit: false,
        budget_exceeded: false,
        failed: HashMap::new(),
        branch: Vec::new(),
    };
    for depth in 1..=limits.max_depth {
        s.cutoff_hit = false;
        s.failed.clear();
        if let Some(tree) = s.search(&goal_norm, depth, reserved_floor) {
            debug_assert!(
                crate::calculus::check_proof(&config, &tree, goal).is_ok(),
                "search produced an unverifiable tree for {goal}"
            );
            return SearchOutcome::Proved(tree);
        }
        if s.budget_exceeded {
            return SearchOutcome::BudgetExceeded;
        }
        if !s.cutoff_hit {
            // the whole space within the strategy was explored
            return SearchOutcome::Exhausted;
        }
    }
    SearchOutcome::Exhausted
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{check_proof, Axiom};
    use crate::syntax::parse_sequent;

    fn proved(config: &CalculusConfig, goal: &str, limits: SearchLimits) -> ProofNode {
        let goal = parse_sequent(goal).unwrap();
        match prove(config, &goal, limits) {
            SearchOutcome::Proved(t) => {
                check_proof(config, &t, &goal).unwrap();
                t
            }
            other => panic!("expected proof of {goal}, got {other:?}"),
        }
    }

    #[test]
    fn proves_identity_and_weakening_goals() {
        let config = CalculusConfig::base();
        proved(&config, "a : p |- a : p", SearchLimits::default());
        proved(&config, "a : p, b : q |- a : p", SearchLimits::default());
        proved(&config, "|- x :: bot", SearchLimits::default());
    }

    #[test]
    fn proves_sigma_reflexivity() {
        let config = CalculusConfig::with_axioms(&[Axiom::BoxRefl]);
        let t = proved(
            &config,
            "a : box p |- a : p",
            SearchLimits {
                max_depth: 8,
                ..Default::default()
            },
        );
        assert!(t.size() >= 3);
    }

    #[test]
    fn proves_rough_goals() {
        let rough = CalculusConfig::rough();
        proved(&rough, "b : box p |- b : p", SearchLimits::default());
        proved(&rough, "a : p |- a : rhd rhd p", SearchLimits::default());
        proved(&rough, "a : box p |- a : box box p", SearchLimits::default());
    }

    #[test]
    fn unprovable_goal_exhausts() {
        let config = CalculusConfig::base();
        let goal = parse_sequent("a : p |- a : box p").unwrap();
        let out = prove(
            &config,
            &goal,
            SearchLimits {
                max_depth: 4,
                max_fresh_labels: 4,
                node_budget: 50_000,
            },
        );
        assert_eq!(out, SearchOutcome::Exhausted);
    }

    #[test]
    fn search_is_deterministic() {
        let config = CalculusConfig::rough();
        let goal = "b : box p |- b : p";
        let t1 = proved(&config, goal, SearchLimits::default());
        let t2 = proved(&config, goal, SearchLimits::default());
        assert_eq!(t1, t2);
    }

    #[test]
    fn freshness_of_reserved_labels() {
        let config = CalculusConfig::rough();
        let goal = parse_sequent("a : box p |- a : box box p").unwrap();
        let t = proved(&config, "a : box p |- a : box box p", SearchLimits::default());
        fn reserved_in(n: &ProofNode, out: &mut BTreeSet<Label>) {
            out.extend(
                n.conclusion
                    .free_labels()
                    .into_iter()
                    .filter(|l| l.is_reserved()),
            );
            for p in &n.premises {
                reserved_in(p, out);
            }
        }
        let mut used = BTreeSet::new();
        reserved_in(&t, &mut used);
        for l in used {
            assert!(!goal.free_labels().contains(&l));
        }
    }
}
