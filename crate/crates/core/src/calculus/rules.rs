//! The rule catalogue: identifiers, schemas, and configuration gating.
//!
//! Schemas are written once against the enriched-context relation symbols;
//! in rough mode every modal symbol is relabelled to its strict-approximation
//! counterpart (`Rbox -> Sbox`, `Rdia -> Sdia`, `Rrhd -> E`, and the black
//! converses accordingly). Converse atom spellings normalize exactly as in
//! the term syntax, so e.g. a `y Sdia a` pattern matches an `a Sbox y` atom.

use std::collections::BTreeSet;

use crate::syntax::{RelSym, Sort};

/// Axioms that gate the structural rules read off their frame conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    BoxRefl,
    DiaRefl,
    BoxDense,
    DiaDense,
    B1,
    B2,
    SymRhd,
}

impl Axiom {
    pub const ALL: [Axiom; 7] = [
        Axiom::BoxRefl,
        Axiom::DiaRefl,
        Axiom::BoxDense,
        Axiom::DiaDense,
        Axiom::B1,
        Axiom::B2,
        Axiom::SymRhd,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Axiom::BoxRefl => "box-refl",
            Axiom::DiaRefl => "dia-refl",
            Axiom::BoxDense => "box-dense",
            Axiom::DiaDense => "dia-dense",
            Axiom::B1 => "b1",
            Axiom::B2 => "b2",
            Axiom::SymRhd => "sym-rhd",
        }
    }

    pub fn from_id(s: &str) -> Option<Axiom> {
        Axiom::ALL.iter().copied().find(|a| a.id() == s)
    }

    /// The axiom as a formula sequent `lhs |- rhs`.
    pub fn sequent_text(self) -> &'static str {
        match self {
            Axiom::BoxRefl => "box p |- p",
            Axiom::DiaRefl => "p |- dia p",
            Axiom::BoxDense => "box p |- box box p",
            Axiom::DiaDense => "dia dia p |- dia p",
            Axiom::B1 => "p |- box dia p",
            Axiom::B2 => "dia box p |- p",
            Axiom::SymRhd => "p |- rhd rhd p",
        }
    }
}

/// Which rules are in force.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CalculusConfig {
    pub sigma: BTreeSet<Axiom>,
    pub rough: bool,
    pub allow_cut: bool,
}

impl CalculusConfig {
    pub fn base() -> CalculusConfig {
        CalculusConfig::default()
    }

    pub fn rough() -> CalculusConfig {
        CalculusConfig {
            rough: true,
            ..Default::default()
        }
    }

    pub fn with_axioms(axioms: &[Axiom]) -> CalculusConfig {
        CalculusConfig {
            sigma: axioms.iter().copied().collect(),
            ..Default::default()
        }
    }
}

/// One identifier per concrete rule. Where the source tables reuse a name
/// for two distinct rules, the variants are numbered; `paper_name` gives the
/// original label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    // initial and cut
    IdObj,
    IdFeat,
    BotInit,
    TopInit,
    CutObj,
    CutFeat,
    WeakL,
    WeakR,
    // formula/label switch
    SwXa,
    SwAx,
    // modal switch rules, white relations
    SwADiaX1,
    SwABoxX1,
    SwXBoxA1,
    SwXDiaA1,
    SwADiaX2,
    SwABoxX2,
    SwXBoxA2,
    SwXDiaA2,
    SwXRhdA1,
    SwARhdX1,
    SwXRhdA2,
    SwARhdX2,
    // modal switch rules, black relations
    SwABDiaX1,
    SwABBoxX1,
    SwXBBoxA1,
    SwXBDiaA1,
    SwABDiaX2,
    SwABBoxX2,
    SwXBBoxA2,
    SwXBDiaA2,
    SwXBRhdA1,
    SwABRhdX1,
    SwXBRhdA2,
    SwABRhdX2,
    // approximation
    ApproxX,
    ApproxA,
    // pure structure
    StructIS,
    StructISInv,
    StructJT,
    StructJTInv,
    IdIJRight,
    IdJIRight,
    IdIJLeft,
    IdJILeft,
    // adjunction
    AdjDiaBBox,
    AdjBoxBDia,
    AdjRhdBRhd,
    AdjBBoxDia,
    AdjBDiaBox,
    AdjBRhdRhd,
    // invertible logical rules
    AndL,
    AndR,
    OrL,
    OrR,
    BoxL,
    BoxR,
    DiaL,
    DiaR,
    RhdL,
    RhdR,
    // structural rules for the axiomatic extensions
    TBoxRefl,
    TDiaRefl,
    TBoxDense,
    TDiaDense,
    TB1,
    TB2,
    TSymRhd,
    // rough interdefinability and equivalence rules
    SwSf,
    SwSfi,
    SwSdf,
    SwSdfi,
    SwEs,
    SwEsi,
    CurryS,
    UncurryS,
    Refl,
    Sym,
    Trans,
    // composition shorthand steps
    Fold,
    Unfold,
}

impl RuleId {
    pub const ALL: [RuleId; 80] = [
        RuleId::IdObj,
        RuleId::IdFeat,
        RuleId::BotInit,
        RuleId::TopInit,
        RuleId::CutObj,
        RuleId::CutFeat,
        RuleId::WeakL,
        RuleId::WeakR,
        RuleId::SwXa,
        RuleId::SwAx,
        RuleId::SwADiaX1,
        RuleId::SwABoxX1,
        RuleId::SwXBoxA1,
        RuleId::SwXDiaA1,
        RuleId::SwADiaX2,
        RuleId::SwABoxX2,
        RuleId::SwXBoxA2,
        RuleId::SwXDiaA2,
        RuleId::SwXRhdA1,
        RuleId::SwARhdX1,
        RuleId::SwXRhdA2,
        RuleId::SwARhdX2,
        RuleId::SwABDiaX1,
        RuleId::SwABBoxX1,
        RuleId::SwXBBoxA1,
        RuleId::SwXBDiaA1,
        RuleId::SwABDiaX2,
        RuleId::SwABBoxX2,
        RuleId::SwXBBoxA2,
        RuleId::SwXBDiaA2,
        RuleId::SwXBRhdA1,
        RuleId::SwABRhdX1,
        RuleId::SwXBRhdA2,
        RuleId::SwABRhdX2,
        RuleId::ApproxX,
        RuleId::ApproxA,
        RuleId::StructIS,
        RuleId::StructISInv,
        RuleId::StructJT,
        RuleId::StructJTInv,
        RuleId::IdIJRight,
        RuleId::IdJIRight,
        RuleId::IdIJLeft,
        RuleId::IdJILeft,
        RuleId::AdjDiaBBox,
        RuleId::AdjBoxBDia,
        RuleId::AdjRhdBRhd,
        RuleId::AdjBBoxDia,
        RuleId::AdjBDiaBox,
        RuleId::AdjBRhdRhd,
        RuleId::AndL,
        RuleId::AndR,
        RuleId::OrL,
        RuleId::OrR,
        RuleId::BoxL,
        RuleId::BoxR,
        RuleId::DiaL,
        RuleId::DiaR,
        RuleId::RhdL,
        RuleId::RhdR,
        RuleId::TBoxRefl,
        RuleId::TDiaRefl,
        RuleId::TBoxDense,
        RuleId::TDiaDense,
        RuleId::TB1,
        RuleId::TB2,
        RuleId::TSymRhd,
        RuleId::SwSf,
        RuleId::SwSfi,
        RuleId::SwSdf,
        RuleId::SwSdfi,
        RuleId::SwEs,
        RuleId::SwEsi,
        RuleId::CurryS,
        RuleId::UncurryS,
        RuleId::Refl,
        RuleId::Sym,
        RuleId::Trans,
        RuleId::Fold,
        RuleId::Unfold,
    ];

    /// Name used in proof scripts and CLI output.
    pub fn script_name(self) -> &'static str {
        use RuleId::*;
        match self {
            IdObj => "id-obj",
            IdFeat => "id-feat",
            BotInit => "bot",
            TopInit => "top",
            CutObj => "cut-obj",
            CutFeat => "cut-feat",
            WeakL => "weak-l",
            WeakR => "weak-r",
            SwXa => "sw-xa",
            SwAx => "sw-ax",
            SwADiaX1 => "sw-a-dia-x-1",
            SwABoxX1 => "sw-a-box-x-1",
            SwXBoxA1 => "sw-x-box-a-1",
            SwXDiaA1 => "sw-x-dia-a-1",
            SwADiaX2 => "sw-a-dia-x-2",
            SwABoxX2 => "sw-a-box-x-2",
            SwXBoxA2 => "sw-x-box-a-2",
            SwXDiaA2 => "sw-x-dia-a-2",
            SwXRhdA1 => "sw-x-rhd-a-1",
            SwARhdX1 => "sw-a-rhd-x-1",
            SwXRhdA2 => "sw-x-rhd-a-2",
            SwARhdX2 => "sw-a-rhd-x-2",
            SwABDiaX1 => "sw-a-bdia-x-1",
            SwABBoxX1 => "sw-a-bbox-x-1",
            SwXBBoxA1 => "sw-x-bbox-a-1",
            SwXBDiaA1 => "sw-x-bdia-a-1",
            SwABDiaX2 => "sw-a-bdia-x-2",
            SwABBoxX2 => "sw-a-bbox-x-2",
            SwXBBoxA2 => "sw-x-bbox-a-2",
            SwXBDiaA2 => "sw-x-bdia-a-2",
            SwXBRhdA1 => "sw-x-brhd-a-1",
            SwABRhdX1 => "sw-a-brhd-x-1",
            SwXBRhdA2 => "sw-x-brhd-a-2",
            SwABRhdX2 => "sw-a-brhd-x-2",
            ApproxX => "approx-x",
            ApproxA => "approx-a",
            StructIS => "s-is",
            StructISInv => "neg-s-is",
            StructJT => "s-jt",
            StructJTInv => "neg-s-jt",
            IdIJRight => "id-ij-r",
            IdJIRight => "id-ji-r",
            IdIJLeft => "id-ij-l",
            IdJILeft => "id-ji-l",
            AdjDiaBBox => "adj-dia-bbox",
            AdjBoxBDia => "adj-box-bdia",
            AdjRhdBRhd => "adj-rhd-brhd",
            AdjBBoxDia => "adj-bbox-dia",
            AdjBDiaBox => "adj-bdia-box",
            AdjBRhdRhd => "adj-brhd-rhd",
            AndL => "and-l",
            AndR => "and-r",
            OrL => "or-l",
            OrR => "or-r",
            BoxL => "box-l",
            BoxR => "box-r",
            DiaL => "dia-l",
            DiaR => "dia-r",
            RhdL => "rhd-l",
            RhdR => "rhd-r",
            TBoxRefl => "t-box-refl",
            TDiaRefl => "t-dia-refl",
            TBoxDense => "t-box-dense",
            TDiaDense => "t-dia-dense",
            TB1 => "t-b1",
            TB2 => "t-b2",
            TSymRhd => "t-sym-rhd",
            SwSf => "sw-sf",
            SwSfi => "sw-sfi",
            SwSdf => "sw-sdf",
            SwSdfi => "sw-sdfi",
            SwEs => "sw-es",
            SwEsi => "sw-esi",
            CurryS => "curry-s",
            UncurryS => "uncurry-s",
            Refl => "refl",
            Sym => "sym",
            Trans => "trans",
            Fold => "fold",
            Unfold => "unfold",
        }
    }

    /// The label the rule carries in the source rule tables.
    pub fn paper_name(self) -> &'static str {
        use RuleId::*;
        match self {
            IdObj => "Id a:p",
            IdFeat => "Id x::p",
            BotInit => "bot",
            TopInit => "top",
            CutObj => "Cut aa",
            CutFeat => "Cut xx",
            WeakL => "W (left half)",
            WeakR => "W (right half)",
            SwXa => "S xa",
            SwAx => "S ax",
            SwADiaX1 => "S a<>x (first)",
            SwABoxX1 => "S a[]x (first)",
            SwXBoxA1 => "S x[]a (first)",
            SwXDiaA1 => "S x<>a (first)",
            SwADiaX2 => "S a<>x (second)",
            SwABoxX2 => "S a[]x (second)",
            SwXBoxA2 => "S x[]a (second)",
            SwXDiaA2 => "S x<>a (second)",
            SwXRhdA1 => "S x|>a (first)",
            SwARhdX1 => "S a|>x (first)",
            SwXRhdA2 => "S x|>a (second)",
            SwARhdX2 => "S a|>x (second)",
            SwABDiaX1 => "S a<.>x (first)",
            SwABBoxX1 => "S a[.]x (first)",
            SwXBBoxA1 => "S x[.]a (first)",
            SwXBDiaA1 => "S x<.>a (first)",
            SwABDiaX2 => "S a<.>x (second)",
            SwABBoxX2 => "S a[.]x (second)",
            SwXBBoxA2 => "S x[.]a (second)",
            SwXBDiaA2 => "S x<.>a (second)",
            SwXBRhdA1 => "S x|.>a (first)",
            SwABRhdX1 => "S a|.>x (first)",
            SwXBRhdA2 => "S x|.>a (second)",
            SwABRhdX2 => "S a|.>x (second)",
            ApproxX => "approx_x",
            ApproxA => "approx_a",
            StructIS => "S(I;S)",
            StructISInv => "-S(I;S)",
            StructJT => "S(J;T)",
            StructJTInv => "-S(J;T)",
            IdIJRight => "Id(I;J)_R",
            IdJIRight => "Id(J;I)_R",
            IdIJLeft => "Id(I;J)_L",
            IdJILeft => "Id(J;I)_L",
            AdjDiaBBox => "<> -| [.]",
            AdjBoxBDia => "<.> -| []",
            AdjRhdBRhd => "|> -| |.>",
            AdjBBoxDia => "<> -| [.] inverse",
            AdjBDiaBox => "<.> -| [] inverse",
            AdjBRhdRhd => "|.> -| |>",
            AndL => "/\\_L",
            AndR => "/\\_R",
            OrL => "\\/_L",
            OrR => "\\/_R",
            BoxL => "[]_L",
            BoxR => "[]_R",
            DiaL => "<>_L",
            DiaR => "<>_R",
            RhdL => "|>_L",
            RhdR => "|>_R",
            TBoxRefl => "rule for []p |- p",
            TDiaRefl => "rule for p |- <>p",
            TBoxDense => "rule for []p |- [][]p",
            TDiaDense => "rule for <><>p |- <>p",
            TB1 => "rule for p |- []<>p",
            TB2 => "rule for <>[]p |- p",
            TSymRhd => "rule for p |- |>|>p",
            SwSf => "swSf",
            SwSfi => "swSfi",
            SwSdf => "swSdf",
            SwSdfi => "swSdfi",
            SwEs => "swES",
            SwEsi => "swESi",
            CurryS => "curryS",
            UncurryS => "uncurryS",
            Refl => "refl",
            Sym => "sym",
            Trans => "trans",
            Fold => "composition fold (dashed step)",
            Unfold => "composition unfold (dashed step)",
        }
    }

    pub fn from_script_name(s: &str) -> Option<RuleId> {
        RuleId::ALL.iter().copied().find(|r| r.script_name() == s)
    }

    pub fn axiom(self) -> Option<Axiom> {
        match self {
            RuleId::TBoxRefl => Some(Axiom::BoxRefl),
            RuleId::TDiaRefl => Some(Axiom::DiaRefl),
            RuleId::TBoxDense => Some(Axiom::BoxDense),
            RuleId::TDiaDense => Some(Axiom::DiaDense),
            RuleId::TB1 => Some(Axiom::B1),
            RuleId::TB2 => Some(Axiom::B2),
            RuleId::TSymRhd => Some(Axiom::SymRhd),
            _ => None,
        }
    }

    pub fn is_rough_only(self) -> bool {
        use RuleId::*;
        matches!(
            self,
            SwSf | SwSfi | SwSdf | SwSdfi | SwEs | SwEsi | CurryS | UncurryS | Refl | Sym | Trans
        )
    }

    fn is_black_switch(self) -> bool {
        use RuleId::*;
        matches!(
            self,
            SwABDiaX1
                | SwABBoxX1
                | SwXBBoxA1
                | SwXBDiaA1
                | SwABDiaX2
                | SwABBoxX2
                | SwXBBoxA2
                | SwXBDiaA2
                | SwXBRhdA1
                | SwABRhdX1
                | SwXBRhdA2
                | SwABRhdX2
        )
    }

    fn is_adjunction(self) -> bool {
        use RuleId::*;
        matches!(
            self,
            AdjDiaBBox | AdjBoxBDia | AdjRhdBRhd | AdjBBoxDia | AdjBDiaBox | AdjBRhdRhd
        )
    }

    /// Whether the rule is available under the configuration. In rough mode
    /// the black-relation switch analogues and the adjunction rules drop
    /// out: under the strict-approximation relabelling they collapse into
    /// the white rules and the converse-spelling normalization.
    pub fn enabled(self, config: &CalculusConfig) -> bool {
        if let Some(ax) = self.axiom() {
            return config.sigma.contains(&ax);
        }
        match self {
            RuleId::CutObj | RuleId::CutFeat => config.allow_cut,
            r if r.is_rough_only() => config.rough,
            r if r.is_black_switch() || r.is_adjunction() => !config.rough,
            _ => true,
        }
    }
}

/// Label metavariable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LVar {
    pub name: &'static str,
    pub sort: Option<Sort>,
}

pub fn lvo(name: &'static str) -> LVar {
    LVar {
        name,
        sort: Some(Sort::Object),
    }
}

pub fn lvf(name: &'static str) -> LVar {
    LVar {
        name,
        sort: Some(Sort::Feature),
    }
}

pub fn lvu(name: &'static str) -> LVar {
    LVar { name, sort: None }
}

/// Formula pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FPat {
    Var(&'static str),
    Bot,
    Top,
    And(&'static str, &'static str),
    Or(&'static str, &'static str),
    Box(&'static str),
    Dia(&'static str),
    Rhd(&'static str),
}

/// The two relation families of the pure-structure rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Feature-domain family (the `T`s).
    T,
    /// Object-domain family (the `S`s).
    S,
}

/// Relation pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RPat {
    Sym(RelSym),
    Var(&'static str, Family),
    Comp(Box<RPat>, Box<RPat>),
}

impl RPat {
    pub fn comp(r: RPat, s: RPat) -> RPat {
        RPat::Comp(Box::new(r), Box::new(s))
    }
}

/// Relational atom pattern, stored in the same normal form as atoms:
/// converse symbols swap sides on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelAPat {
    pub lhs: LVar,
    pub rel: RPat,
    pub rhs: LVar,
}

pub fn rap(lhs: LVar, rel: RPat, rhs: LVar) -> RelAPat {
    match rel {
        RPat::Sym(RelSym::J) => RelAPat {
            lhs: rhs,
            rel: RPat::Sym(RelSym::I),
            rhs: lhs,
        },
        RPat::Sym(RelSym::SDia) => RelAPat {
            lhs: rhs,
            rel: RPat::Sym(RelSym::SBox),
            rhs: lhs,
        },
        rel => RelAPat { lhs, rel, rhs },
    }
}

/// Item pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pat {
    Fo(LVar, FPat),
    Rel(RelAPat),
    Impl {
        bound: LVar,
        ante: RelAPat,
        cons: RelAPat,
    },
    Any(&'static str),
}

pub fn fo(l: LVar, f: FPat) -> Pat {
    Pat::Fo(l, f)
}

pub fn rel(lhs: LVar, sym: RelSym, rhs: LVar) -> Pat {
    Pat::Rel(rap(lhs, RPat::Sym(sym), rhs))
}

pub fn rel_var(lhs: LVar, name: &'static str, fam: Family, rhs: LVar) -> Pat {
    Pat::Rel(RelAPat {
        lhs,
        rel: RPat::Var(name, fam),
        rhs,
    })
}

pub fn impl_pat(bound: LVar, ante: RelAPat, cons: RelAPat) -> Pat {
    Pat::Impl { bound, ante, cons }
}

/// A composition atom `lhs (outer;inner) rhs` as a pattern; since node
/// sequents are kept in desugared normal form, the pattern is stored
/// directly as its implication term `(w inner rhs => lhs outer w)`.
pub fn comp_pat(lhs: LVar, outer: RelSym, inner: RPat, rhs: LVar, bound: LVar) -> Pat {
    impl_pat(
        bound,
        RelAPat {
            lhs: bound,
            rel: inner,
            rhs,
        },
        rap(lhs, RPat::Sym(outer), bound),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    L,
    R,
}

/// Rules needing ad hoc treatment in the checker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Special {
    /// Two premises with split contexts sharing a cut formula of the given
    /// sort.
    Cut(Sort),
    /// One premise equal to the conclusion modulo composition desugaring.
    Identity,
}

#[derive(Debug, Clone)]
pub struct Schema {
    pub id: RuleId,
    /// Active item patterns in each premise (the matched contexts carry
    /// over unchanged).
    pub premises: Vec<Vec<(Side, Pat)>>,
    /// Active item patterns in the conclusion.
    pub conclusion: Vec<(Side, Pat)>,
    /// Label metavariables that must not occur in the matched contexts
    /// and must be distinct from the instance's other labels.
    pub eigen: Vec<&'static str>,
    pub special: Option<Special>,
}

impl Schema {
    fn new(id: RuleId, premises: Vec<Vec<(Side, Pat)>>, conclusion: Vec<(Side, Pat)>) -> Schema {
        Schema {
            id,
            premises,
            conclusion,
            eigen: Vec::new(),
            special: None,
        }
    }

    fn eigen(mut self, vars: &[&'static str]) -> Schema {
        self.eigen = vars.to_vec();
        self
    }

    pub fn arity(&self) -> usize {
        self.premises.len()
    }

    /// All metavariable names occurring in the schema, by kind.
    pub fn var_kinds(&self) -> VarKinds {
        let mut out = VarKinds::default();
        let visit_rpat = |rp: &RPat, out: &mut VarKinds| {
            let mut stack = vec![rp.clone()];
            while let Some(p) = stack.pop() {
                match p {
                    RPat::Sym(_) => {}
                    RPat::Var(n, _) => {
                        out.rels.insert(n);
                    }
                    RPat::Comp(a, b) => {
                        stack.push(*a);
                        stack.push(*b);
                    }
                }
            }
        };
        let visit_f = |fp: &FPat, out: &mut VarKinds| match fp {
            FPat::Var(n) | FPat::Box(n) | FPat::Dia(n) | FPat::Rhd(n) => {
                out.formulas.insert(n);
            }
            FPat::And(a, b) | FPat::Or(a, b) => {
                out.formulas.insert(a);
                out.formulas.insert(b);
            }
            FPat::Bot | FPat::Top => {}
        };
        for (_, p) in self.premises.iter().flatten().chain(self.conclusion.iter()) {
            match p {
                Pat::Fo(l, f) => {
                    out.labels.insert(l.name);
                    visit_f(f, &mut out);
                }
                Pat::Rel(r) => {
                    out.labels.insert(r.lhs.name);
                    out.labels.insert(r.rhs.name);
                    visit_rpat(&r.rel, &mut out);
                }
                Pat::Impl { bound, ante, cons } => {
                    out.labels.insert(bound.name);
                    out.labels.insert(ante.lhs.name);
                    out.labels.insert(ante.rhs.name);
                    out.labels.insert(cons.lhs.name);
                    out.labels.insert(cons.rhs.name);
                    visit_rpat(&ante.rel, &mut out);
                    visit_rpat(&cons.rel, &mut out);
                }
                Pat::Any(n) => {
                    out.items.insert(n);
                }
            }
        }
        out
    }
}

#[derive(Debug, Default, Clone)]
pub struct VarKinds {
    pub labels: BTreeSet<&'static str>,
    pub formulas: BTreeSet<&'static str>,
    pub rels: BTreeSet<&'static str>,
    pub items: BTreeSet<&'static str>,
}

/// Members of the pure-structure relation families, as relation patterns.
pub fn family_members(fam: Family, rough: bool) -> Vec<RPat> {
    use RelSym::*;
    let sym = |s| RPat::Sym(s);
    let comp = |a, b| RPat::comp(sym(a), sym(b));
    let base: Vec<RPat> = match fam {
        Family::T => vec![
            sym(RDia),
            sym(J),
            comp(J, I),
            comp(J, RBox),
            comp(J, RRhd),
            sym(RBDia),
            comp(J, RBBox),
            comp(J, RBRhd),
        ],
        Family::S => vec![
            sym(RBox),
            sym(I),
            comp(I, J),
            comp(I, RDia),
            comp(I, RBDia),
            sym(RBBox),
        ],
    };
    if !rough {
        return base;
    }
    let mut out: Vec<RPat> = Vec::new();
    for m in base {
        let m = relabel_rpat_rough(&m);
        if !out.contains(&m) {
            out.push(m);
        }
    }
    out
}

fn relabel_sym_rough(s: RelSym) -> RelSym {
    use RelSym::*;
    match s {
        RBox | RBBox => SBox,
        RDia | RBDia => SDia,
        RRhd | RBRhd => E,
        other => other,
    }
}

fn relabel_rpat_rough(p: &RPat) -> RPat {
    match p {
        RPat::Sym(s) => RPat::Sym(relabel_sym_rough(*s)),
        RPat::Var(n, f) => RPat::Var(n, *f),
        RPat::Comp(a, b) => RPat::comp(relabel_rpat_rough(a), relabel_rpat_rough(b)),
    }
}

fn relabel_rap_rough(r: &RelAPat) -> RelAPat {
    // Re-normalize: the relabelling can produce converse spellings.
    rap(r.lhs, relabel_rpat_rough(&r.rel), r.rhs)
}

fn relabel_pat_rough(p: &Pat) -> Pat {
    match p {
        Pat::Fo(..) | Pat::Any(_) => p.clone(),
        Pat::Rel(r) => Pat::Rel(relabel_rap_rough(r)),
        Pat::Impl { bound, ante, cons } => Pat::Impl {
            bound: *bound,
            ante: relabel_rap_rough(ante),
            cons: relabel_rap_rough(cons),
        },
    }
}

fn relabel_schema_rough(mut s: Schema) -> Schema {
    for prem in &mut s.premises {
        for (_, p) in prem.iter_mut() {
            *p = relabel_pat_rough(p);
        }
    }
    for (_, p) in s.conclusion.iter_mut() {
        *p = relabel_pat_rough(p);
    }
    s
}

/// Builds the schema of a rule under a configuration; `None` when the rule
/// is not enabled.
pub fn schema(id: RuleId, config: &CalculusConfig) -> Option<Schema> {
    if !id.enabled(config) {
        return None;
    }
    let s = base_schema(id);
    if config.rough && !id.is_rough_only() {
        Some(relabel_schema_rough(s))
    } else {
        Some(s)
    }
}

/// The enabled rules with their arities and schemas, in a fixed order.
pub fn rule_schemas(config: &CalculusConfig) -> Vec<(RuleId, usize, Schema)> {
    RuleId::ALL
        .iter()
        .filter_map(|&id| schema(id, config).map(|s| (id, s.arity(), s)))
        .collect()
}

fn base_schema(id: RuleId) -> Schema {
    use RelSym::*;
    use RuleId::*;
    use Side::{L, R};
    let a = lvo("a");
    let b = lvo("b");
    let c = lvo("c");
    let x = lvf("x");
    let y = lvf("y");
    let u = lvu("u");
    let v = lvu("v");
    let av = FPat::Var("A");
    let bv = FPat::Var("B");
    let tvar = || RPat::Var("T", Family::T);
    let tvar2 = || RPat::Var("T'", Family::T);
    let svar = || RPat::Var("S", Family::S);
    let svar2 = || RPat::Var("S'", Family::S);

    // (b R x => b I y)-style implication patterns
    let imp = |bound: LVar, al: LVar, sym: RelSym, ar: LVar, cl: LVar, cr: LVar| {
        impl_pat(bound, rap(al, RPat::Sym(sym), ar), rap(cl, RPat::Sym(I), cr))
    };

    match id {
        IdObj => Schema::new(id, vec![], vec![(L, fo(a, av)), (R, fo(a, av))]),
        IdFeat => Schema::new(id, vec![], vec![(L, fo(x, av)), (R, fo(x, av))]),
        BotInit => Schema::new(id, vec![], vec![(R, fo(x, FPat::Bot))]),
        TopInit => Schema::new(id, vec![], vec![(R, fo(a, FPat::Top))]),
        CutObj => {
            let mut s = Schema::new(id, vec![vec![], vec![]], vec![]);
            s.special = Some(Special::Cut(Sort::Object));
            s
        }
        CutFeat => {
            let mut s = Schema::new(id, vec![vec![], vec![]], vec![]);
            s.special = Some(Special::Cut(Sort::Feature));
            s
        }
        WeakL => Schema::new(id, vec![vec![]], vec![(L, Pat::Any("phi"))]),
        WeakR => Schema::new(id, vec![vec![]], vec![(R, Pat::Any("phi"))]),

        SwXa => Schema::new(
            id,
            vec![vec![(L, fo(x, bv)), (R, fo(x, av))]],
            vec![(L, fo(a, av)), (R, fo(a, bv))],
        )
        .eigen(&["x"]),
        SwAx => Schema::new(
            id,
            vec![vec![(L, fo(a, av)), (R, fo(a, bv))]],
            vec![(L, fo(x, bv)), (R, fo(x, av))],
        )
        .eigen(&["a"]),

        SwADiaX1 => Schema::new(
            id,
            vec![vec![(L, imp(y, y, RDia, a, b, y)), (R, fo(b, av))]],
            vec![(L, fo(x, av)), (R, rel(x, RDia, a))],
        )
        .eigen(&["b"]),
        SwABoxX1 => Schema::new(
            id,
            vec![vec![(L, fo(a, av)), (R, rel(a, RBox, x))]],
            vec![(L, imp(b, b, RBox, x, b, y)), (R, fo(y, av))],
        )
        .eigen(&["a"]),
        SwXBoxA1 => Schema::new(
            id,
            vec![vec![(L, imp(b, b, RBox, x, b, y)), (R, fo(y, av))]],
            vec![(L, fo(a, av)), (R, rel(a, RBox, x))],
        )
        .eigen(&["y"]),
        SwXDiaA1 => Schema::new(
            id,
            vec![vec![(L, fo(x, av)), (R, rel(x, RDia, a))]],
            vec![(L, imp(y, y, RDia, a, b, y)), (R, fo(b, av))],
        )
        .eigen(&["x"]),
        SwADiaX2 => Schema::new(
            id,
            vec![vec![(L, fo(b, av)), (R, imp(y, y, RDia, a, b, y))]],
            vec![(L, rel(x, RDia, a)), (R, fo(x, av))],
        )
        .eigen(&["b"]),
        // The printed second S a[]x duplicates the first variant's premise;
        // its rhd analogue and soundness fix it as the inverse of the
        // second S x[]a.
        SwABoxX2 => Schema::new(
            id,
            vec![vec![(L, rel(a, RBox, x)), (R, fo(a, av))]],
            vec![(L, fo(y, av)), (R, imp(b, b, RBox, x, b, y))],
        )
        .eigen(&["a"]),
        SwXBoxA2 => Schema::new(
            id,
            vec![vec![(L, fo(y, av)), (R, imp(b, b, RBox, x, b, y))]],
            vec![(L, rel(a, RBox, x)), (R, fo(a, av))],
        )
        .eigen(&["y"]),
        SwXDiaA2 => Schema::new(
            id,
            vec![vec![(L, rel(x, RDia, a)), (R, fo(x, av))]],
            vec![(L, fo(b, av)), (R, imp(y, y, RDia, a, b, y))],
        )
        .eigen(&["x"]),

        SwXRhdA1 => Schema::new(
            id,
            vec![vec![(L, imp(b, b, RRhd, a, b, y)), (R, fo(y, av))]],
            vec![(L, fo(c, av)), (R, rel(c, RRhd, a))],
        )
        .eigen(&["y"]),
        SwARhdX1 => Schema::new(
            id,
            vec![vec![(L, fo(c, av)), (R, rel(c, RRhd, a))]],
            vec![(L, imp(b, b, RRhd, a, b, y)), (R, fo(y, av))],
        )
        .eigen(&["c"]),
        SwXRhdA2 => Schema::new(
            id,
            vec![vec![(L, fo(y, av)), (R, imp(b, b, RRhd, a, b, y))]],
            vec![(L, rel(c, RRhd, a)), (R, fo(c, av))],
        )
        .eigen(&["y"]),
        SwARhdX2 => Schema::new(
            id,
            vec![vec![(L, rel(c, RRhd, a)), (R, fo(c, av))]],
            vec![(L, fo(y, av)), (R, imp(b, b, RRhd, a, b, y))],
        )
        .eigen(&["c"]),

        // black analogues: substitute the converse relation triple
        SwABDiaX1 => Schema::new(
            id,
            vec![vec![(L, imp(y, y, RBDia, a, b, y)), (R, fo(b, av))]],
            vec![(L, fo(x, av)), (R, rel(x, RBDia, a))],
        )
        .eigen(&["b"]),
        SwABBoxX1 => Schema::new(
            id,
            vec![vec![(L, fo(a, av)), (R, rel(a, RBBox, x))]],
            vec![(L, imp(b, b, RBBox, x, b, y)), (R, fo(y, av))],
        )
        .eigen(&["a"]),
        SwXBBoxA1 => Schema::new(
            id,
            vec![vec![(L, imp(b, b, RBBox, x, b, y)), (R, fo(y, av))]],
            vec![(L, fo(a, av)), (R, rel(a, RBBox, x))],
        )
        .eigen(&["y"]),
        SwXBDiaA1 => Schema::new(
            id,
            vec![vec![(L, fo(x, av)), (R, rel(x, RBDia, a))]],
            vec![(L, imp(y, y, RBDia, a, b, y)), (R, fo(b, av))],
        )
        .eigen(&["x"]),
        SwABDiaX2 => Schema::new(
            id,
            vec![vec![(L, fo(b, av)), (R, imp(y, y, RBDia, a, b, y))]],
            vec![(L, rel(x, RBDia, a)), (R, fo(x, av))],
        )
        .eigen(&["b"]),
        SwABBoxX2 => Schema::new(
            id,
            vec![vec![(L, rel(a, RBBox, x)), (R, fo(a, av))]],
            vec![(L, fo(y, av)), (R, imp(b, b, RBBox, x, b, y))],
        )
        .eigen(&["a"]),
        SwXBBoxA2 => Schema::new(
            id,
            vec![vec![(L, fo(y, av)), (R, imp(b, b, RBBox, x, b, y))]],
            vec![(L, rel(a, RBBox, x)), (R, fo(a, av))],
        )
        .eigen(&["y"]),
        SwXBDiaA2 => Schema::new(
            id,
            vec![vec![(L, rel(x, RBDia, a)), (R, fo(x, av))]],
            vec![(L, fo(b, av)), (R, imp(y, y, RBDia, a, b, y))],
        )
        .eigen(&["x"]),
        SwXBRhdA1 => Schema::new(
            id,
            vec![vec![(L, imp(b, b, RBRhd, a, b, y)), (R, fo(y, av))]],
            vec![(L, fo(c, av)), (R, rel(c, RBRhd, a))],
        )
        .eigen(&["y"]),
        SwABRhdX1 => Schema::new(
            id,
            vec![vec![(L, fo(c, av)), (R, rel(c, RBRhd, a))]],
            vec![(L, imp(b, b, RBRhd, a, b, y)), (R, fo(y, av))],
        )
        .eigen(&["c"]),
        SwXBRhdA2 => Schema::new(
            id,
            vec![vec![(L, fo(y, av)), (R, imp(b, b, RBRhd, a, b, y))]],
            vec![(L, rel(c, RBRhd, a)), (R, fo(c, av))],
        )
        .eigen(&["y"]),
        SwABRhdX2 => Schema::new(
            id,
            vec![vec![(L, rel(c, RBRhd, a)), (R, fo(c, av))]],
            vec![(L, fo(y, av)), (R, imp(b, b, RBRhd, a, b, y))],
        )
        .eigen(&["c"]),

        ApproxX => Schema::new(
            id,
            vec![vec![(L, fo(x, av)), (R, rel(a, I, x))]],
            vec![(R, fo(a, av))],
        )
        .eigen(&["x"]),
        ApproxA => Schema::new(
            id,
            vec![vec![(L, fo(a, av)), (R, rel(a, I, x))]],
            vec![(R, fo(x, av))],
        )
        .eigen(&["a"]),

        StructIS => Schema::new(
            id,
            vec![vec![
                (L, rel_var(x, "T", Family::T, u)),
                (R, rel_var(x, "T'", Family::T, v)),
            ]],
            vec![
                (L, comp_pat(a, I, tvar2(), v, lvf("w1"))),
                (R, comp_pat(a, I, tvar(), u, lvf("w2"))),
            ],
        )
        .eigen(&["x"]),
        StructISInv => Schema::new(
            id,
            vec![vec![
                (L, comp_pat(a, I, tvar2(), v, lvf("w1"))),
                (R, comp_pat(a, I, tvar(), u, lvf("w2"))),
            ]],
            vec![
                (L, rel_var(x, "T", Family::T, u)),
                (R, rel_var(x, "T'", Family::T, v)),
            ],
        )
        .eigen(&["a"]),
        StructJT => Schema::new(
            id,
            vec![vec![
                (L, rel_var(a, "S", Family::S, u)),
                (R, rel_var(a, "S'", Family::S, v)),
            ]],
            vec![
                (L, comp_pat(x, J, svar2(), v, lvo("w1"))),
                (R, comp_pat(x, J, svar(), u, lvo("w2"))),
            ],
        )
        .eigen(&["a"]),
        StructJTInv => Schema::new(
            id,
            vec![vec![
                (L, comp_pat(x, J, svar2(), v, lvo("w1"))),
                (R, comp_pat(x, J, svar(), u, lvo("w2"))),
            ]],
            vec![
                (L, rel_var(a, "S", Family::S, u)),
                (R, rel_var(a, "S'", Family::S, v)),
            ],
        )
        .eigen(&["x"]),
        IdIJRight => Schema::new(
            id,
            vec![vec![(R, rel_var(a, "S", Family::S, u))]],
            vec![(
                R,
                comp_pat(a, I, RPat::comp(RPat::Sym(J), svar()), u, lvf("w1")),
            )],
        ),
        IdJIRight => Schema::new(
            id,
            vec![vec![(R, rel_var(x, "T", Family::T, u))]],
            vec![(
                R,
                comp_pat(x, J, RPat::comp(RPat::Sym(I), tvar()), u, lvo("w1")),
            )],
        ),
        IdIJLeft => Schema::new(
            id,
            vec![vec![(L, rel_var(a, "S", Family::S, u))]],
            vec![(
                L,
                comp_pat(a, I, RPat::comp(RPat::Sym(J), svar()), u, lvf("w1")),
            )],
        ),
        IdJILeft => Schema::new(
            id,
            vec![vec![(L, rel_var(x, "T", Family::T, u))]],
            vec![(
                L,
                comp_pat(x, J, RPat::comp(RPat::Sym(I), tvar()), u, lvo("w1")),
            )],
        ),

        AdjDiaBBox => Schema::new(
            id,
            vec![vec![(R, rel(x, RDia, a))]],
            vec![(R, rel(a, RBBox, x))],
        ),
        AdjBoxBDia => Schema::new(
            id,
            vec![vec![(R, rel(a, RBox, x))]],
            vec![(R, rel(x, RBDia, a))],
        ),
        AdjRhdBRhd => Schema::new(
            id,
            vec![vec![(R, rel(a, RRhd, b))]],
            vec![(R, rel(b, RBRhd, a))],
        ),
        AdjBBoxDia => Schema::new(
            id,
            vec![vec![(R, rel(a, RBBox, x))]],
            vec![(R, rel(x, RDia, a))],
        ),
        AdjBDiaBox => Schema::new(
            id,
            vec![vec![(R, rel(x, RBDia, a))]],
            vec![(R, rel(a, RBox, x))],
        ),
        AdjBRhdRhd => Schema::new(
            id,
            vec![vec![(R, rel(a, RBRhd, b))]],
            vec![(R, rel(b, RRhd, a))],
        ),

        AndL => Schema::new(
            id,
            vec![vec![(L, fo(a, av)), (L, fo(a, bv))]],
            vec![(L, fo(a, FPat::And("A", "B")))],
        ),
        AndR => Schema::new(
            id,
            vec![vec![(R, fo(a, av))], vec![(R, fo(a, bv))]],
            vec![(R, fo(a, FPat::And("A", "B")))],
        ),
        OrL => Schema::new(
            id,
            vec![vec![(R, fo(x, av))], vec![(R, fo(x, bv))]],
            vec![(R, fo(x, FPat::Or("A", "B")))],
        ),
        OrR => Schema::new(
            id,
            vec![vec![(L, fo(x, av)), (L, fo(x, bv))]],
            vec![(L, fo(x, FPat::Or("A", "B")))],
        ),
        BoxL => Schema::new(
            id,
            vec![vec![
                (L, fo(a, FPat::Box("A"))),
                (R, fo(x, av)),
                (R, rel(a, RBox, x)),
            ]],
            vec![(L, fo(a, FPat::Box("A"))), (R, rel(a, RBox, x))],
        ),
        BoxR => Schema::new(
            id,
            vec![vec![(L, fo(x, av)), (R, rel(a, RBox, x))]],
            vec![(R, fo(a, FPat::Box("A")))],
        )
        .eigen(&["x"]),
        DiaL => Schema::new(
            id,
            vec![vec![(L, fo(a, av)), (R, rel(x, RDia, a))]],
            vec![(R, fo(x, FPat::Dia("A")))],
        )
        .eigen(&["a"]),
        DiaR => Schema::new(
            id,
            vec![vec![
                (L, fo(x, FPat::Dia("A"))),
                (R, fo(a, av)),
                (R, rel(x, RDia, a)),
            ]],
            vec![(L, fo(x, FPat::Dia("A"))), (R, rel(x, RDia, a))],
        ),
        RhdL => Schema::new(
            id,
            vec![vec![
                (L, fo(a, FPat::Rhd("A"))),
                (R, fo(b, av)),
                (R, rel(a, RRhd, b)),
            ]],
            vec![(L, fo(a, FPat::Rhd("A"))), (R, rel(a, RRhd, b))],
        ),
        RhdR => Schema::new(
            id,
            vec![vec![(L, fo(b, av)), (R, rel(a, RRhd, b))]],
            vec![(R, fo(a, FPat::Rhd("A")))],
        )
        .eigen(&["b"]),

        TBoxRefl => Schema::new(
            id,
            vec![vec![(R, rel(a, RBox, x))]],
            vec![(R, rel(a, I, x))],
        ),
        TDiaRefl => Schema::new(
            id,
            vec![vec![(R, rel(x, RDia, a))]],
            vec![(R, rel(a, I, x))],
        ),
        TBoxDense => Schema::new(
            id,
            vec![vec![(R, rel(a, RBox, x))]],
            vec![(L, imp(b, b, RBox, x, b, y)), (R, rel(a, RBox, y))],
        ),
        TDiaDense => Schema::new(
            id,
            vec![vec![(R, rel(x, RDia, a))]],
            vec![(L, imp(y, y, RDia, a, b, y)), (R, rel(x, RDia, b))],
        ),
        TB1 => Schema::new(
            id,
            vec![vec![(R, rel(x, RDia, a))]],
            vec![(R, rel(x, RBDia, a))],
        ),
        TB2 => Schema::new(
            id,
            vec![vec![(R, rel(x, RBDia, a))]],
            vec![(R, rel(x, RDia, a))],
        ),
        TSymRhd => Schema::new(
            id,
            vec![vec![(R, rel(a, RRhd, b))]],
            vec![(R, rel(b, RRhd, a))],
        ),

        SwSf => Schema::new(
            id,
            vec![vec![(L, imp(b, b, SBox, x, b, y)), (R, fo(y, av))]],
            vec![(L, fo(a, av)), (R, rel(a, SBox, x))],
        )
        .eigen(&["y"]),
        SwSfi => Schema::new(
            id,
            vec![vec![(L, fo(a, av)), (R, rel(a, SBox, x))]],
            vec![(L, imp(b, b, SBox, x, b, y)), (R, fo(y, av))],
        )
        .eigen(&["a"]),
        SwSdf => Schema::new(
            id,
            vec![vec![(L, fo(x, av)), (R, rel(x, SDia, a))]],
            vec![(L, rel(b, E, a)), (R, fo(b, av))],
        )
        .eigen(&["x"]),
        SwSdfi => Schema::new(
            id,
            vec![vec![(L, rel(b, E, a)), (R, fo(b, av))]],
            vec![(L, fo(x, av)), (R, rel(x, SDia, a))],
        )
        .eigen(&["b"]),
        SwEs => Schema::new(
            id,
            vec![vec![(L, rel(a, E, c)), (R, rel(a, SBox, x))]],
            vec![(L, imp(b, b, SBox, x, b, y)), (R, rel(y, SDia, a))],
        )
        .eigen(&["a", "c"]),
        SwEsi => Schema::new(
            id,
            vec![vec![(L, imp(b, b, SBox, x, b, y)), (R, rel(y, SDia, a))]],
            vec![(L, rel(a, E, c)), (R, rel(a, SBox, x))],
        )
        .eigen(&["y"]),
        CurryS => Schema::new(
            id,
            vec![vec![(R, rel(a, SBox, x))]],
            vec![(L, rel(b, E, a)), (R, rel(b, I, x))],
        ),
        UncurryS => Schema::new(
            id,
            vec![vec![(L, rel(b, E, a)), (R, rel(b, I, x))]],
            vec![(R, rel(a, SBox, x))],
        )
        .eigen(&["b"]),
        Refl => Schema::new(id, vec![vec![(L, rel(a, E, a))]], vec![]),
        Sym => Schema::new(id, vec![vec![(R, rel(a, E, b))]], vec![(R, rel(b, E, a))]),
        Trans => Schema::new(
            id,
            vec![vec![(L, rel(a, E, c))]],
            vec![(L, rel(a, E, b)), (L, rel(b, E, c))],
        ),

        Fold | Unfold => {
            let mut s = Schema::new(id, vec![vec![]], vec![]);
            s.special = Some(Special::Identity);
            s
        }
    }
}
