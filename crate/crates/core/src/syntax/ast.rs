//! Abstract syntax: formulas, sorted labels, relation symbols and
//! expressions, sequent items, and sequents with multiset semantics.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("empty label name")]
    EmptyLabel,
    #[error("label `{0}` has no sort: object labels start with a-h, feature labels with u-z")]
    BadLabelSort(String),
    #[error("label `{0}` contains an invalid character")]
    BadLabelChar(String),
    #[error("sort mismatch: expected {expected} label, got `{got}`")]
    SortMismatch { expected: Sort, got: String },
    #[error("relation expression `{0}` does not sort-chain")]
    BadChain(String),
    #[error("implication term must share exactly one label between antecedent and consequent")]
    BadImplSharing,
    #[error("implication term consequent must be an incidence atom")]
    BadImplConsequent,
    #[error("`{0}` is not a composite relation atom")]
    NotComposite(String),
}

/// The two carrier sorts of a polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    Object,
    Feature,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Object => write!(f, "object"),
            Sort::Feature => write!(f, "feature"),
        }
    }
}

/// A sorted label. The sort is decidable from the name alone: object labels
/// begin with one of `a`-`h`, feature labels with one of `u`-`z`. Names
/// `_o<n>` / `_u<n>` form the reserved namespace the prover draws fresh
/// labels from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    sort: Sort,
    name: String,
}

impl Label {
    pub fn new(name: &str) -> Result<Label, SyntaxError> {
        if name.is_empty() {
            return Err(SyntaxError::EmptyLabel);
        }
        if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(SyntaxError::BadLabelChar(name.to_string()));
        }
        let sort = if let Some(rest) = name.strip_prefix('_') {
            match rest.chars().next() {
                Some('o') => Sort::Object,
                Some('u') => Sort::Feature,
                _ => return Err(SyntaxError::BadLabelSort(name.to_string())),
            }
        } else {
            match name.chars().next().unwrap() {
                'a'..='h' => Sort::Object,
                'u'..='z' => Sort::Feature,
                _ => return Err(SyntaxError::BadLabelSort(name.to_string())),
            }
        };
        Ok(Label {
            sort,
            name: name.to_string(),
        })
    }

    /// Internal constructor for placeholder labels used by alpha-keys.
    /// The name deliberately fails `Label::new` validation so it can never
    /// collide with a parsed label.
    pub(crate) fn placeholder(sort: Sort) -> Label {
        Label {
            sort,
            name: "!".to_string(),
        }
    }

    /// n-th label of the reserved fresh namespace.
    pub fn reserved(sort: Sort, n: usize) -> Label {
        let name = match sort {
            Sort::Object => format!("_o{n}"),
            Sort::Feature => format!("_u{n}"),
        };
        Label { sort, name }
    }

    pub fn is_reserved(&self) -> bool {
        self.name.starts_with('_')
    }

    pub fn sort(&self) -> Sort {
        self.sort
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// Picks a short label of the given sort not present in `avoid`.
/// The preference order makes desugaring output deterministic.
pub fn fresh_label(sort: Sort, avoid: &BTreeSet<Label>) -> Label {
    let base: &[&str] = match sort {
        Sort::Object => &["b", "c", "d", "e", "f", "g", "h", "a"],
        Sort::Feature => &["v", "w", "y", "z", "u", "x"],
    };
    for name in base {
        let cand = Label::new(name).unwrap();
        if !avoid.contains(&cand) {
            return cand;
        }
    }
    for k in 1.. {
        for name in base {
            let cand = Label::new(&format!("{name}{k}")).unwrap();
            if !avoid.contains(&cand) {
                return cand;
            }
        }
    }
    unreachable!()
}

/// Modal formulas.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Bot,
    Top,
    Prop(String),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    Dia(Box<Formula>),
    Rhd(Box<Formula>),
}

impl Formula {
    pub fn prop(name: &str) -> Formula {
        Formula::Prop(name.to_string())
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn boxed(a: Formula) -> Formula {
        Formula::Box(Box::new(a))
    }

    pub fn dia(a: Formula) -> Formula {
        Formula::Dia(Box::new(a))
    }

    pub fn rhd(a: Formula) -> Formula {
        Formula::Rhd(Box::new(a))
    }

    /// Propositional variables occurring in the formula.
    pub fn props(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Bot | Formula::Top => {}
            Formula::Prop(p) => {
                out.insert(p.clone());
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.props(out);
                b.props(out);
            }
            Formula::Box(a) | Formula::Dia(a) | Formula::Rhd(a) => a.props(out),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Bot | Formula::Top | Formula::Prop(_) => 0,
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.depth().max(b.depth()),
            Formula::Box(a) | Formula::Dia(a) | Formula::Rhd(a) => 1 + a.depth(),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            Formula::Box(..) | Formula::Dia(..) | Formula::Rhd(..) => 3,
            _ => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let p = self.prec();
        if p < min {
            write!(f, "(")?;
        }
        match self {
            Formula::Bot => write!(f, "bot")?,
            Formula::Top => write!(f, "top")?,
            Formula::Prop(name) => write!(f, "{name}")?,
            Formula::And(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " /\\ ")?;
                b.fmt_prec(f, 3)?;
            }
            Formula::Or(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " \\/ ")?;
                b.fmt_prec(f, 2)?;
            }
            Formula::Box(a) => {
                write!(f, "box ")?;
                a.fmt_prec(f, 3)?;
            }
            Formula::Dia(a) => {
                write!(f, "dia ")?;
                a.fmt_prec(f, 3)?;
            }
            Formula::Rhd(a) => {
                write!(f, "rhd ")?;
                a.fmt_prec(f, 3)?;
            }
        }
        if p < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// Relation symbols with fixed sort signatures.
///
/// `J` and `SDia` are definitional converses of `I` and `SBox`; atoms built
/// from them are normalized away by [`RelAtom::new`], so they only survive
/// inside composite relation expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelSym {
    I,
    J,
    RBox,
    RDia,
    RRhd,
    RBBox,
    RBDia,
    RBRhd,
    E,
    SBox,
    SDia,
}

impl RelSym {
    pub const ALL: [RelSym; 11] = [
        RelSym::I,
        RelSym::J,
        RelSym::RBox,
        RelSym::RDia,
        RelSym::RRhd,
        RelSym::RBBox,
        RelSym::RBDia,
        RelSym::RBRhd,
        RelSym::E,
        RelSym::SBox,
        RelSym::SDia,
    ];

    pub fn signature(self) -> (Sort, Sort) {
        use RelSym::*;
        match self {
            I | RBox | RBBox | SBox => (Sort::Object, Sort::Feature),
            J | RDia | RBDia | SDia => (Sort::Feature, Sort::Object),
            RRhd | RBRhd | E => (Sort::Object, Sort::Object),
        }
    }

    pub fn name(self) -> &'static str {
        use RelSym::*;
        match self {
            I => "I",
            J => "J",
            RBox => "Rbox",
            RDia => "Rdia",
            RRhd => "Rrhd",
            RBBox => "RBbox",
            RBDia => "RBdia",
            RBRhd => "RBrhd",
            E => "E",
            SBox => "Sbox",
            SDia => "Sdia",
        }
    }

    pub fn from_name(s: &str) -> Option<RelSym> {
        RelSym::ALL.iter().copied().find(|r| r.name() == s)
    }
}

impl fmt::Display for RelSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// A relation expression: a symbol or a composition `(r;s)`.
///
/// `u (R;S) v` abbreviates the term `w S v => u R w`, so `Comp(r, s)`
/// sort-chains when the codomain of `r` equals the domain of `s`, and the
/// composite has signature `domain(r) x codomain(s)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelExpr {
    Atom(RelSym),
    Comp(Box<RelExpr>, Box<RelExpr>),
}

impl RelExpr {
    pub fn comp(r: RelExpr, s: RelExpr) -> RelExpr {
        RelExpr::Comp(Box::new(r), Box::new(s))
    }

    pub fn signature(&self) -> Result<(Sort, Sort), SyntaxError> {
        match self {
            RelExpr::Atom(r) => Ok(r.signature()),
            RelExpr::Comp(r, s) => {
                let (rd, rc) = r.signature()?;
                let (sd, sc) = s.signature()?;
                if rc != sd {
                    return Err(SyntaxError::BadChain(self.to_string()));
                }
                Ok((rd, sc))
            }
        }
    }

    pub fn is_composite(&self) -> bool {
        matches!(self, RelExpr::Comp(..))
    }
}

impl fmt::Display for RelExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelExpr::Atom(r) => write!(f, "{r}"),
            RelExpr::Comp(r, s) => write!(f, "({r};{s})"),
        }
    }
}

/// A relational atom `lhs rel rhs`, sort-checked against the signature of
/// `rel`. Converse spellings normalize on construction: `x J a` is stored as
/// `a I x` and `x Sdia a` as `a Sbox x`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelAtom {
    lhs: Label,
    rel: RelExpr,
    rhs: Label,
}

impl RelAtom {
    pub fn new(lhs: Label, rel: RelExpr, rhs: Label) -> Result<RelAtom, SyntaxError> {
        let (lhs, rel, rhs) = match rel {
            RelExpr::Atom(RelSym::J) => (rhs, RelExpr::Atom(RelSym::I), lhs),
            RelExpr::Atom(RelSym::SDia) => (rhs, RelExpr::Atom(RelSym::SBox), lhs),
            other => (lhs, other, rhs),
        };
        let (dom, cod) = rel.signature()?;
        if lhs.sort() != dom {
            return Err(SyntaxError::SortMismatch {
                expected: dom,
                got: lhs.name().to_string(),
            });
        }
        if rhs.sort() != cod {
            return Err(SyntaxError::SortMismatch {
                expected: cod,
                got: rhs.name().to_string(),
            });
        }
        Ok(RelAtom { lhs, rel, rhs })
    }

    pub fn sym(lhs: Label, sym: RelSym, rhs: Label) -> Result<RelAtom, SyntaxError> {
        RelAtom::new(lhs, RelExpr::Atom(sym), rhs)
    }

    pub fn lhs(&self) -> &Label {
        &self.lhs
    }

    pub fn rel(&self) -> &RelExpr {
        &self.rel
    }

    pub fn rhs(&self) -> &Label {
        &self.rhs
    }

    pub fn labels(&self) -> BTreeSet<Label> {
        [self.lhs.clone(), self.rhs.clone()].into_iter().collect()
    }

    fn rename(&self, old: &Label, new: &Label) -> RelAtom {
        let sub = |l: &Label| if l == old { new.clone() } else { l.clone() };
        RelAtom {
            lhs: sub(&self.lhs),
            rel: self.rel.clone(),
            rhs: sub(&self.rhs),
        }
    }
}

impl fmt::Display for RelAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.rel, self.rhs)
    }
}

/// An implication term `(t1 => t2)`, read as the universal closure over its
/// bound label. The consequent is always an incidence atom, and the bound
/// label is exactly the one label shared by antecedent and consequent.
#[derive(Debug, Clone)]
pub struct ImplTerm {
    bound: Label,
    antecedent: RelAtom,
    consequent: RelAtom,
}

impl ImplTerm {
    pub fn new(antecedent: RelAtom, consequent: RelAtom) -> Result<ImplTerm, SyntaxError> {
        if consequent.rel() != &RelExpr::Atom(RelSym::I) {
            return Err(SyntaxError::BadImplConsequent);
        }
        let shared: Vec<Label> = antecedent
            .labels()
            .intersection(&consequent.labels())
            .cloned()
            .collect();
        if shared.len() != 1 {
            return Err(SyntaxError::BadImplSharing);
        }
        Ok(ImplTerm {
            bound: shared.into_iter().next().unwrap(),
            antecedent,
            consequent,
        })
    }

    pub fn bound(&self) -> &Label {
        &self.bound
    }

    pub fn antecedent(&self) -> &RelAtom {
        &self.antecedent
    }

    pub fn consequent(&self) -> &RelAtom {
        &self.consequent
    }

    pub fn free_labels(&self) -> BTreeSet<Label> {
        let mut out = self.antecedent.labels();
        out.extend(self.consequent.labels());
        out.remove(&self.bound);
        out
    }

    /// Rename with the bound label replaced by a fixed placeholder; used for
    /// alpha-insensitive comparison and hashing.
    fn alpha_key(&self) -> (RelAtom, RelAtom) {
        let ph = Label::placeholder(self.bound.sort());
        (
            self.antecedent.rename(&self.bound, &ph),
            self.consequent.rename(&self.bound, &ph),
        )
    }
}

impl PartialEq for ImplTerm {
    fn eq(&self, other: &Self) -> bool {
        self.alpha_key() == other.alpha_key()
    }
}

impl Eq for ImplTerm {}

impl PartialOrd for ImplTerm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ImplTerm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.alpha_key().cmp(&other.alpha_key())
    }
}

impl std::hash::Hash for ImplTerm {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.alpha_key().hash(state);
    }
}

impl fmt::Display for ImplTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} => {})", self.antecedent, self.consequent)
    }
}

/// One item of a sequent side.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SequentItem {
    /// `a : A` for object labels, `x :: A` for feature labels.
    Fo(Label, Formula),
    Rel(RelAtom),
    Impl(ImplTerm),
}

impl SequentItem {
    pub fn free_labels(&self) -> BTreeSet<Label> {
        match self {
            SequentItem::Fo(l, _) => [l.clone()].into_iter().collect(),
            SequentItem::Rel(a) => a.labels(),
            SequentItem::Impl(t) => t.free_labels(),
        }
    }
}

impl fmt::Display for SequentItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequentItem::Fo(l, a) => match l.sort() {
                Sort::Object => write!(f, "{l} : {a}"),
                Sort::Feature => write!(f, "{l} :: {a}"),
            },
            SequentItem::Rel(a) => write!(f, "{a}"),
            SequentItem::Impl(t) => write!(f, "{t}"),
        }
    }
}

/// A sequent: two multisets of items. Equality is order-insensitive and
/// multiplicity-sensitive.
#[derive(Debug, Clone, Hash, Eq, PartialOrd, Ord)]
pub struct Sequent {
    pub left: Vec<SequentItem>,
    pub right: Vec<SequentItem>,
}

impl Sequent {
    pub fn new(left: Vec<SequentItem>, right: Vec<SequentItem>) -> Sequent {
        let mut s = Sequent { left, right };
        s.left.sort();
        s.right.sort();
        s
    }

    pub fn free_labels(&self) -> BTreeSet<Label> {
        let mut out = BTreeSet::new();
        for item in self.left.iter().chain(self.right.iter()) {
            out.extend(item.free_labels());
        }
        out
    }

    pub fn props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for item in self.left.iter().chain(self.right.iter()) {
            if let SequentItem::Fo(_, a) = item {
                a.props(&mut out);
            }
        }
        out
    }

    /// Desugars every top-level composite relational atom into its
    /// implication term. Nested compositions stay inside antecedents.
    /// Degenerate compositions relating a label to itself have no
    /// implication-term form and are kept as atoms.
    pub fn normalized(&self) -> Sequent {
        let norm = |items: &[SequentItem]| {
            items
                .iter()
                .map(|it| match it {
                    SequentItem::Rel(a) if a.rel().is_composite() => {
                        desugar_composition(a, &a.labels()).unwrap_or_else(|_| it.clone())
                    }
                    other => other.clone(),
                })
                .collect()
        };
        Sequent::new(norm(&self.left), norm(&self.right))
    }
}

impl PartialEq for Sequent {
    fn eq(&self, other: &Self) -> bool {
        // Items are kept sorted by Sequent::new; ImplTerm comparison is
        // alpha-insensitive, so this is multiset equality.
        self.left == other.left && self.right == other.right
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |f: &mut fmt::Formatter<'_>, items: &[SequentItem]| -> fmt::Result {
            for (i, it) in items.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{it}")?;
            }
            Ok(())
        };
        side(f, &self.left)?;
        if !self.left.is_empty() {
            write!(f, " ")?;
        }
        write!(f, "|-")?;
        if !self.right.is_empty() {
            write!(f, " ")?;
        }
        side(f, &self.right)
    }
}

/// Expands `u (R;S) v` into the implication term `(w S v => u R w)` with a
/// fresh pivot label `w` drawn outside `avoid`.
pub fn desugar_composition(
    atom: &RelAtom,
    avoid: &BTreeSet<Label>,
) -> Result<SequentItem, SyntaxError> {
    let (r, s) = match atom.rel() {
        RelExpr::Comp(r, s) => (r.as_ref().clone(), s.as_ref().clone()),
        _ => return Err(SyntaxError::NotComposite(atom.to_string())),
    };
    let pivot_sort = r.signature()?.1;
    let mut avoid = avoid.clone();
    avoid.extend(atom.labels());
    let w = fresh_label(pivot_sort, &avoid);
    let antecedent = RelAtom::new(w.clone(), s, atom.rhs().clone())?;
    let consequent = RelAtom::new(atom.lhs().clone(), r, w)?;
    Ok(SequentItem::Impl(ImplTerm::new(antecedent, consequent)?))
}

/// Capture-avoiding renaming of a free label.
pub fn rename_label(
    item: &SequentItem,
    old: &Label,
    new: &Label,
) -> Result<SequentItem, SyntaxError> {
    if old.sort() != new.sort() {
        return Err(SyntaxError::SortMismatch {
            expected: old.sort(),
            got: new.name().to_string(),
        });
    }
    Ok(match item {
        SequentItem::Fo(l, a) => {
            if l == old {
                SequentItem::Fo(new.clone(), a.clone())
            } else {
                item.clone()
            }
        }
        SequentItem::Rel(a) => SequentItem::Rel(a.rename(old, new)),
        SequentItem::Impl(t) => {
            if t.bound() == old {
                // The binder shadows: nothing to rename.
                return Ok(item.clone());
            }
            let mut t = t.clone();
            if t.bound() == new {
                // Rename the binder out of the way first.
                let mut avoid = t.free_labels();
                avoid.insert(t.bound.clone());
                avoid.insert(new.clone());
                avoid.insert(old.clone());
                let fresh = fresh_label(t.bound.sort(), &avoid);
                t = ImplTerm {
                    bound: fresh.clone(),
                    antecedent: t.antecedent.rename(&t.bound, &fresh),
                    consequent: t.consequent.rename(&t.bound, &fresh),
                };
            }
            SequentItem::Impl(ImplTerm {
                bound: t.bound.clone(),
                antecedent: t.antecedent.rename(old, new),
                consequent: t.consequent.rename(old, new),
            })
        }
    })
}

/// Renames the bound label of an implication term (used when instantiating
/// rule schemas, where the concrete bound name is irrelevant).
pub fn impl_with_bound(t: &ImplTerm, bound: &Label) -> ImplTerm {
    ImplTerm {
        bound: bound.clone(),
        antecedent: t.antecedent.rename(&t.bound, bound),
        consequent: t.consequent.rename(&t.bound, bound),
    }
}
