//! Forcing relations, sequent validity, first-order frame conditions, and
//! interpretation of labelled sequents.

use std::collections::BTreeMap;

use super::context::{compose, ComposeKind, Concept, ConceptLattice, Ctx, SemError};
use super::rel::{full_mask, mask_contains, polar_left, Mask};
use crate::syntax::{Formula, Label, RelExpr, RelSym, Sequent, SequentItem, Sort};

/// Total map from propositional variables to concepts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Valuation {
    pub assignments: BTreeMap<String, Concept>,
}

impl Valuation {
    pub fn empty() -> Valuation {
        Valuation {
            assignments: BTreeMap::new(),
        }
    }

    pub fn get(&self, p: &str) -> Result<Concept, SemError> {
        self.assignments
            .get(p)
            .copied()
            .ok_or_else(|| SemError::UnknownProp(p.to_string()))
    }
}

/// Assignment of object labels to objects and feature labels to features.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelAssignment {
    pub objects: BTreeMap<String, usize>,
    pub features: BTreeMap<String, usize>,
}

impl LabelAssignment {
    pub fn get(&self, l: &Label) -> Result<usize, SemError> {
        let map = match l.sort() {
            Sort::Object => &self.objects,
            Sort::Feature => &self.features,
        };
        map.get(l.name())
            .copied()
            .ok_or_else(|| SemError::UnknownElement(l.name().to_string()))
    }

    fn with(&self, l: &Label, v: usize) -> LabelAssignment {
        let mut out = self.clone();
        match l.sort() {
            Sort::Object => out.objects.insert(l.name().to_string(), v),
            Sort::Feature => out.features.insert(l.name().to_string(), v),
        };
        out
    }
}

/// Computes the extent and intent of a formula in one pass.
pub fn interp(ctx: &Ctx, v: &Valuation, f: &Formula) -> Result<(Mask, Mask), SemError> {
    let p = ctx.polarity();
    let all_objs = full_mask(p.n_objects());
    let all_feats = full_mask(p.n_features());
    Ok(match f {
        Formula::Top => (all_objs, p.up(all_objs)),
        Formula::Bot => (p.down(all_feats), all_feats),
        Formula::Prop(name) => {
            let c = v.get(name)?;
            (c.extent, c.intent)
        }
        Formula::And(a, b) => {
            let (ea, _) = interp(ctx, v, a)?;
            let (eb, _) = interp(ctx, v, b)?;
            let ext = ea & eb;
            (ext, p.up(ext))
        }
        Formula::Or(a, b) => {
            let (_, ia) = interp(ctx, v, a)?;
            let (_, ib) = interp(ctx, v, b)?;
            let int = ia & ib;
            (p.down(int), int)
        }
        Formula::Box(a) => {
            let (_, ia) = interp(ctx, v, a)?;
            let ext = polar_left(&ctx.box_rel()?, ia);
            (ext, p.up(ext))
        }
        Formula::Dia(a) => {
            let (ea, _) = interp(ctx, v, a)?;
            let int = polar_left(&ctx.dia_rel()?, ea);
            (p.down(int), int)
        }
        Formula::Rhd(a) => {
            let (ea, _) = interp(ctx, v, a)?;
            let ext = polar_left(&ctx.rhd_rel()?, ea);
            (ext, p.up(ext))
        }
    })
}

pub fn extension(ctx: &Ctx, v: &Valuation, f: &Formula) -> Result<Mask, SemError> {
    Ok(interp(ctx, v, f)?.0)
}

pub fn intension(ctx: &Ctx, v: &Valuation, f: &Formula) -> Result<Mask, SemError> {
    Ok(interp(ctx, v, f)?.1)
}

/// Iterates over all valuations of `props` in the concept lattice,
/// stopping at the first one `f` returns `Some` for.
fn search_valuations<T>(
    lattice: &ConceptLattice,
    props: &[String],
    f: &mut dyn FnMut(&Valuation) -> Result<Option<T>, SemError>,
) -> Result<Option<T>, SemError> {
    let n = lattice.len();
    let k = props.len();
    let total = (n as u64).checked_pow(k as u32).unwrap_or(u64::MAX);
    if total > 4_000_000 {
        return Err(SemError::EvalBudget(total));
    }
    let mut idx = vec![0usize; k];
    loop {
        let v = Valuation {
            assignments: props
                .iter()
                .zip(&idx)
                .map(|(p, &i)| (p.clone(), lattice.concepts()[i]))
                .collect(),
        };
        if let Some(t) = f(&v)? {
            return Ok(Some(t));
        }
        // odometer
        let mut carry = true;
        for d in idx.iter_mut() {
            *d += 1;
            if *d < n {
                carry = false;
                break;
            }
            *d = 0;
        }
        if k == 0 || carry {
            return Ok(None);
        }
    }
}

/// Finds a valuation falsifying `f |- g` on the context, if any.
pub fn falsify_sequent(
    ctx: &Ctx,
    f: &Formula,
    g: &Formula,
) -> Result<Option<Valuation>, SemError> {
    let lattice = ctx.polarity().concepts()?;
    let mut props = std::collections::BTreeSet::new();
    f.props(&mut props);
    g.props(&mut props);
    let props: Vec<String> = props.into_iter().collect();
    search_valuations(&lattice, &props, &mut |v| {
        let ef = extension(ctx, v, f)?;
        let eg = extension(ctx, v, g)?;
        Ok(if ef & !eg != 0 { Some(v.clone()) } else { None })
    })
}

/// `ctx |= f |- g`: the extent inclusion holds under every valuation.
pub fn sequent_valid_context(ctx: &Ctx, f: &Formula, g: &Formula) -> Result<bool, SemError> {
    Ok(falsify_sequent(ctx, f, g)?.is_none())
}

/// Truth of one relational expression at a pair of elements. Compositions
/// use the universal reading `u (R;S) v iff forall w (w S v -> u R w)`.
pub fn eval_rel_expr(ctx: &Ctx, e: &RelExpr, i: usize, j: usize) -> Result<bool, SemError> {
    match e {
        RelExpr::Atom(sym) => Ok(ctx.rel_for(*sym)?.get(i, j)),
        RelExpr::Comp(r, s) => {
            let pivot = r.signature().map_err(|e| SemError::Model(e.to_string()))?.1;
            let n = match pivot {
                Sort::Object => ctx.polarity().n_objects(),
                Sort::Feature => ctx.polarity().n_features(),
            };
            for w in 0..n {
                if eval_rel_expr(ctx, s, w, j)? && !eval_rel_expr(ctx, r, i, w)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Truth of one sequent item under a valuation and label assignment.
pub fn eval_item(
    ctx: &Ctx,
    v: &Valuation,
    asg: &LabelAssignment,
    item: &SequentItem,
) -> Result<bool, SemError> {
    match item {
        SequentItem::Fo(l, f) => {
            let (ext, int) = interp(ctx, v, f)?;
            let i = asg.get(l)?;
            Ok(match l.sort() {
                Sort::Object => mask_contains(ext, i),
                Sort::Feature => mask_contains(int, i),
            })
        }
        SequentItem::Rel(a) => {
            let i = asg.get(a.lhs())?;
            let j = asg.get(a.rhs())?;
            eval_rel_expr(ctx, a.rel(), i, j)
        }
        SequentItem::Impl(t) => {
            let n = match t.bound().sort() {
                Sort::Object => ctx.polarity().n_objects(),
                Sort::Feature => ctx.polarity().n_features(),
            };
            for u in 0..n {
                let asg2 = asg.with(t.bound(), u);
                let ante = eval_item(ctx, v, &asg2, &SequentItem::Rel(t.antecedent().clone()))?;
                if ante {
                    let cons =
                        eval_item(ctx, v, &asg2, &SequentItem::Rel(t.consequent().clone()))?;
                    if !cons {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
    }
}

/// Truth of a labelled sequent at one (valuation, assignment) point:
/// if every left item holds, some right item holds.
pub fn holds_at(
    ctx: &Ctx,
    v: &Valuation,
    asg: &LabelAssignment,
    seq: &Sequent,
) -> Result<bool, SemError> {
    for item in &seq.left {
        if !eval_item(ctx, v, asg, item)? {
            return Ok(true);
        }
    }
    for item in &seq.right {
        if eval_item(ctx, v, asg, item)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Finds a (valuation, label assignment) falsifying a labelled sequent.
pub fn falsify_labelled(
    ctx: &Ctx,
    seq: &Sequent,
) -> Result<Option<(Valuation, LabelAssignment)>, SemError> {
    let seq = seq.normalized();
    let p = ctx.polarity();
    if p.n_objects() == 0 || p.n_features() == 0 {
        // Degenerate carriers: a label of the empty sort has no assignment,
        // making every sequent with such a label vacuously valid.
        let labels = seq.free_labels();
        let needs_obj = labels.iter().any(|l| l.sort() == Sort::Object);
        let needs_feat = labels.iter().any(|l| l.sort() == Sort::Feature);
        if (needs_obj && p.n_objects() == 0) || (needs_feat && p.n_features() == 0) {
            return Ok(None);
        }
    }
    let lattice = p.concepts()?;
    let props: Vec<String> = seq.props().into_iter().collect();
    let labels: Vec<Label> = seq.free_labels().into_iter().collect();

    let obj_labels: Vec<&Label> = labels.iter().filter(|l| l.sort() == Sort::Object).collect();
    let feat_labels: Vec<&Label> = labels.iter().filter(|l| l.sort() == Sort::Feature).collect();
    let n_obj = p.n_objects().max(1) as u64;
    let n_feat = p.n_features().max(1) as u64;
    let asg_total = n_obj
        .checked_pow(obj_labels.len() as u32)
        .and_then(|a| a.checked_mul(n_feat.checked_pow(feat_labels.len() as u32)?))
        .unwrap_or(u64::MAX);
    if asg_total > 4_000_000 {
        return Err(SemError::EvalBudget(asg_total));
    }

    search_valuations(&lattice, &props, &mut |v| {
        // odometer over label assignments
        let mut obj_idx = vec![0usize; obj_labels.len()];
        let mut feat_idx = vec![0usize; feat_labels.len()];
        loop {
            let asg = LabelAssignment {
                objects: obj_labels
                    .iter()
                    .zip(&obj_idx)
                    .map(|(l, &i)| (l.name().to_string(), i))
                    .collect(),
                features: feat_labels
                    .iter()
                    .zip(&feat_idx)
                    .map(|(l, &i)| (l.name().to_string(), i))
                    .collect(),
            };
            if !holds_at(ctx, v, &asg, &seq)? {
                return Ok(Some((v.clone(), asg)));
            }
            let mut carry = true;
            for d in obj_idx.iter_mut() {
                *d += 1;
                if *d < p.n_objects() {
                    carry = false;
                    break;
                }
                *d = 0;
            }
            if carry {
                for d in feat_idx.iter_mut() {
                    *d += 1;
                    if *d < p.n_features() {
                        carry = false;
                        break;
                    }
                    *d = 0;
                }
            }
            if carry {
                return Ok(None);
            }
        }
    })
}

/// Validity of a labelled sequent: quantifies over every valuation and
/// every total label assignment.
pub fn labelled_sequent_valid(ctx: &Ctx, seq: &Sequent) -> Result<bool, SemError> {
    Ok(falsify_labelled(ctx, seq)?.is_none())
}

/// First-order frame conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CondId {
    /// 1: `Rbox <= I`
    BoxRefl,
    /// 2: `Rdia <= J`
    DiaRefl,
    /// 3: `Rbox <= Rbox ; Rbox` (ax-composition)
    BoxDense,
    /// 4: `Rrhd = RBrhd`
    SymRhd,
    /// 5: `Rdia <= Rdia ; Rdia` (xa-composition)
    DiaDense,
    /// 6: `Rdia <= RBdia`
    B1,
    /// 7: `RBdia <= Rdia`
    B2,
    /// conceptual approximation space: `Rbox ; RBbox <= I` (ax-composition)
    Cas,
    /// symmetry: `Rdia = RBdia`
    Sym,
    /// rough reflexivity: `Sbox <= I`
    RoughRefl,
    /// rough transitivity: `Sbox <= Sbox ; Sbox` (ax-composition)
    RoughTrans,
}

pub fn fo_condition(ctx: &Ctx, id: CondId) -> Result<bool, SemError> {
    let p = ctx.polarity();
    let i_rel = p.incidence();
    Ok(match id {
        CondId::BoxRefl => ctx.rel_for(RelSym::RBox)?.is_subset_of(i_rel),
        CondId::DiaRefl => ctx
            .rel_for(RelSym::RDia)?
            .is_subset_of(&i_rel.converse()),
        CondId::BoxDense => {
            let r = ctx.rel_for(RelSym::RBox)?;
            r.is_subset_of(&compose(ComposeKind::Ax, &r, &r, p)?)
        }
        CondId::SymRhd => ctx.rel_for(RelSym::RRhd)? == ctx.rel_for(RelSym::RBRhd)?,
        CondId::DiaDense => {
            let r = ctx.rel_for(RelSym::RDia)?;
            r.is_subset_of(&compose(ComposeKind::Xa, &r, &r, p)?)
        }
        CondId::B1 => ctx
            .rel_for(RelSym::RDia)?
            .is_subset_of(&ctx.rel_for(RelSym::RBDia)?),
        CondId::B2 => ctx
            .rel_for(RelSym::RBDia)?
            .is_subset_of(&ctx.rel_for(RelSym::RDia)?),
        CondId::Cas => {
            let rbox = ctx.rel_for(RelSym::RBox)?;
            let rbbox = ctx.rel_for(RelSym::RBBox)?;
            compose(ComposeKind::Ax, &rbox, &rbbox, p)?.is_subset_of(i_rel)
        }
        CondId::Sym => ctx.rel_for(RelSym::RDia)? == ctx.rel_for(RelSym::RBDia)?,
        CondId::RoughRefl => ctx.rel_for(RelSym::SBox)?.is_subset_of(i_rel),
        CondId::RoughTrans => {
            let s = ctx.rel_for(RelSym::SBox)?;
            s.is_subset_of(&compose(ComposeKind::Ax, &s, &s, p)?)
        }
    })
}

/// Formats a valuation with element names, for witnesses.
pub fn describe_valuation(ctx: &Ctx, v: &Valuation) -> String {
    let p = ctx.polarity();
    let mut parts = Vec::new();
    for (prop, c) in &v.assignments {
        parts.push(format!(
            "{prop} = ({{{}}}, {{{}}})",
            p.set_to_names(Sort::Object, c.extent).join(" "),
            p.set_to_names(Sort::Feature, c.intent).join(" "),
        ));
    }
    parts.join(", ")
}

pub fn describe_assignment(ctx: &Ctx, asg: &LabelAssignment) -> String {
    let p = ctx.polarity();
    let mut parts = Vec::new();
    for (l, &i) in &asg.objects {
        parts.push(format!("{l} -> {}", p.objects()[i]));
    }
    for (l, &i) in &asg.features {
        parts.push(format!("{l} -> {}", p.features()[i]));
    }
    parts.join(", ")
}

/// Iterates `f` over every concept-assignment of `props`; used by tests.
pub fn for_each_valuation(
    lattice: &ConceptLattice,
    props: &[String],
    mut f: impl FnMut(&Valuation),
) {
    let _ = search_valuations(lattice, props, &mut |v| {
        f(v);
        Ok::<Option<()>, SemError>(None)
    });
}
