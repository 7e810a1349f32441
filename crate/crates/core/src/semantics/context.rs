//! Polarities, concept lattices, enriched and rough contexts, and the model
//! file format.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::rel::{full_mask, mask_iter, polar_left, polar_right, Mask, Rel, MAX_CARRIER};
use crate::syntax::{RelSym, Sort};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SemError {
    #[error("carrier larger than {MAX_CARRIER} exceeds the enumeration budget")]
    SizeBudget,
    #[error("evaluation budget exceeded ({0} assignments)")]
    EvalBudget(u64),
    #[error("element `{0}` outside carrier")]
    UnknownElement(String),
    #[error("relation {0} is not available on this context")]
    MissingRelation(RelSym),
    #[error("no valuation entry for proposition `{0}`")]
    UnknownProp(String),
    #[error("model error: {0}")]
    Model(String),
}

/// A formal context `(A, X, I)` with named carrier elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polarity {
    objects: Vec<String>,
    features: Vec<String>,
    incidence: Rel,
}

impl Polarity {
    pub fn new(objects: Vec<String>, features: Vec<String>, incidence: Rel) -> Polarity {
        assert_eq!(incidence.n_rows(), objects.len());
        assert_eq!(incidence.n_cols(), features.len());
        Polarity {
            objects,
            features,
            incidence,
        }
    }

    /// Carrier with canonical names `a1..` / `x1..`; convenient for the
    /// enumeration harnesses.
    pub fn indexed(n_objects: usize, n_features: usize, incidence: Rel) -> Polarity {
        Polarity::new(
            (1..=n_objects).map(|k| format!("a{k}")).collect(),
            (1..=n_features).map(|k| format!("x{k}")).collect(),
            incidence,
        )
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn features(&self) -> &[String] {
        &self.features
    }

    pub fn incidence(&self) -> &Rel {
        &self.incidence
    }

    pub fn object_index(&self, name: &str) -> Result<usize, SemError> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| SemError::UnknownElement(name.to_string()))
    }

    pub fn feature_index(&self, name: &str) -> Result<usize, SemError> {
        self.features
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| SemError::UnknownElement(name.to_string()))
    }

    /// `I^(1)[B]` for a set of objects.
    pub fn up(&self, objs: Mask) -> Mask {
        polar_right(&self.incidence, objs)
    }

    /// `I^(0)[Y]` for a set of features.
    pub fn down(&self, feats: Mask) -> Mask {
        polar_left(&self.incidence, feats)
    }

    pub fn closure_objects(&self, objs: Mask) -> Mask {
        self.down(self.up(objs))
    }

    pub fn closure_features(&self, feats: Mask) -> Mask {
        self.up(self.down(feats))
    }

    pub fn is_stable_objects(&self, objs: Mask) -> bool {
        self.closure_objects(objs) == objs
    }

    pub fn is_stable_features(&self, feats: Mask) -> bool {
        self.closure_features(feats) == feats
    }

    pub fn closure(&self, sort: Sort, mask: Mask) -> Mask {
        match sort {
            Sort::Object => self.closure_objects(mask),
            Sort::Feature => self.closure_features(mask),
        }
    }

    /// All formal concepts, by brute force over object subsets.
    pub fn concepts(&self) -> Result<ConceptLattice, SemError> {
        if self.n_objects() > MAX_CARRIER || self.n_features() > MAX_CARRIER {
            return Err(SemError::SizeBudget);
        }
        let mut concepts = Vec::new();
        for extent in 0..=full_mask(self.n_objects()) {
            if self.is_stable_objects(extent) {
                concepts.push(Concept {
                    extent,
                    intent: self.up(extent),
                });
            }
            if self.n_objects() == 0 {
                break;
            }
        }
        Ok(ConceptLattice { concepts })
    }

    pub fn set_to_names(&self, sort: Sort, mask: Mask) -> Vec<String> {
        let names = match sort {
            Sort::Object => &self.objects,
            Sort::Feature => &self.features,
        };
        mask_iter(mask).map(|i| names[i].clone()).collect()
    }
}

/// A Galois-stable extent/intent pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Concept {
    pub extent: Mask,
    pub intent: Mask,
}

/// All concepts of a polarity, ordered by extent inclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptLattice {
    concepts: Vec<Concept>,
}

impl ConceptLattice {
    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn leq(&self, c1: &Concept, c2: &Concept) -> bool {
        c1.extent & !c2.extent == 0
    }

    pub fn top(&self) -> Concept {
        *self
            .concepts
            .iter()
            .max_by_key(|c| c.extent.count_ones())
            .expect("lattice nonempty")
    }

    pub fn bottom(&self) -> Concept {
        *self
            .concepts
            .iter()
            .min_by_key(|c| c.extent.count_ones())
            .expect("lattice nonempty")
    }

    pub fn contains(&self, c: &Concept) -> bool {
        self.concepts.contains(c)
    }
}

/// Checks that every row and column section of `rel` (in the polar sense) is
/// Galois-stable in the polarity. The signature fixes which carrier each side
/// of `rel` lives in.
pub fn is_i_compatible(pol: &Polarity, rel: &Rel, signature: (Sort, Sort)) -> bool {
    let stable = |sort: Sort, mask: Mask| match sort {
        Sort::Object => pol.is_stable_objects(mask),
        Sort::Feature => pol.is_stable_features(mask),
    };
    let (dom, cod) = signature;
    // R^(0)[point] for each codomain point: a subset of the domain carrier.
    for j in 0..rel.n_cols() {
        if !stable(dom, rel.col(j)) {
            return false;
        }
    }
    // R^(1)[point] for each domain point: a subset of the codomain carrier.
    for i in 0..rel.n_rows() {
        if !stable(cod, rel.row(i)) {
            return false;
        }
    }
    true
}

/// The three composition operations on relations over a polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComposeKind {
    /// `u (R;S) w  iff  u in R^(0)[S^(0)[w]]`, for chaining signatures.
    Outer,
    /// For `R, S <= A x X`: `a (R;S) x  iff  a in R^(0)[I^(1)[S^(0)[x]]]`.
    Ax,
    /// For `R, S <= X x A`: `x (R;S) a  iff  x in R^(0)[I^(0)[S^(0)[a]]]`.
    Xa,
}

pub fn compose(kind: ComposeKind, r: &Rel, s: &Rel, pol: &Polarity) -> Result<Rel, SemError> {
    match kind {
        ComposeKind::Outer => {
            if r.n_cols() != s.n_rows() {
                return Err(SemError::Model("composition does not chain".to_string()));
            }
            let mut out = Rel::empty(r.n_rows(), s.n_cols());
            for w in 0..s.n_cols() {
                let sw = s.col(w); // S^(0)[w]
                let uw = polar_left(r, sw); // R^(0)[S^(0)[w]]
                for u in mask_iter(uw) {
                    out.set(u, w, true);
                }
            }
            Ok(out)
        }
        ComposeKind::Ax => {
            if r.n_rows() != pol.n_objects()
                || r.n_cols() != pol.n_features()
                || s.n_rows() != pol.n_objects()
                || s.n_cols() != pol.n_features()
            {
                return Err(SemError::Model("ax-composition needs AxX relations".into()));
            }
            let mut out = Rel::empty(pol.n_objects(), pol.n_features());
            for x in 0..pol.n_features() {
                let sx = s.col(x); // S^(0)[x] <= A
                let ix = pol.up(sx); // I^(1)[..] <= X
                let ax = polar_left(r, ix); // R^(0)[..] <= A
                for a in mask_iter(ax) {
                    out.set(a, x, true);
                }
            }
            Ok(out)
        }
        ComposeKind::Xa => {
            if r.n_rows() != pol.n_features()
                || r.n_cols() != pol.n_objects()
                || s.n_rows() != pol.n_features()
                || s.n_cols() != pol.n_objects()
            {
                return Err(SemError::Model("xa-composition needs XxA relations".into()));
            }
            let mut out = Rel::empty(pol.n_features(), pol.n_objects());
            for a in 0..pol.n_objects() {
                let sa = s.col(a); // S^(0)[a] <= X
                let ia = pol.down(sa); // I^(0)[..] <= A
                let xa = polar_left(r, ia); // R^(0)[..] <= X
                for x in mask_iter(xa) {
                    out.set(x, a, true);
                }
            }
            Ok(out)
        }
    }
}

/// A polarity enriched with any subset of the three modal relations.
/// The black relations are definitional converses and always derived.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnrichedContext {
    pub polarity: Polarity,
    pub rbox: Option<Rel>,
    pub rdia: Option<Rel>,
    pub rrhd: Option<Rel>,
}

impl EnrichedContext {
    pub fn new(
        polarity: Polarity,
        rbox: Option<Rel>,
        rdia: Option<Rel>,
        rrhd: Option<Rel>,
    ) -> EnrichedContext {
        EnrichedContext {
            polarity,
            rbox,
            rdia,
            rrhd,
        }
    }

    /// True iff every present relation is I-compatible.
    pub fn is_compatible(&self) -> bool {
        let p = &self.polarity;
        self.rbox
            .as_ref()
            .map_or(true, |r| is_i_compatible(p, r, RelSym::RBox.signature()))
            && self
                .rdia
                .as_ref()
                .map_or(true, |r| is_i_compatible(p, r, RelSym::RDia.signature()))
            && self
                .rrhd
                .as_ref()
                .map_or(true, |r| is_i_compatible(p, r, RelSym::RRhd.signature()))
    }
}

/// A polarity with an equivalence on objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoughContext {
    pub polarity: Polarity,
    pub e: Rel,
}

impl RoughContext {
    pub fn new(polarity: Polarity, e: Rel) -> Result<RoughContext, SemError> {
        if !e.is_equivalence() || e.n_rows() != polarity.n_objects() {
            return Err(SemError::Model(
                "E must be an equivalence relation on the objects".to_string(),
            ));
        }
        Ok(RoughContext { polarity, e })
    }

    /// Lax upper approximation: `a Rbox x iff exists b (a E b and b I x)`.
    pub fn lax_rbox(&self) -> Rel {
        let p = &self.polarity;
        let mut out = Rel::empty(p.n_objects(), p.n_features());
        for a in 0..p.n_objects() {
            let mut row = 0;
            for b in mask_iter(self.e.row(a)) {
                row |= p.incidence().row(b);
            }
            for x in mask_iter(row) {
                out.set(a, x, true);
            }
        }
        out
    }

    /// Strict lower approximation: `a Sbox x iff forall b (a E b implies b I x)`.
    pub fn sbox(&self) -> Rel {
        let p = &self.polarity;
        let mut out = Rel::empty(p.n_objects(), p.n_features());
        for a in 0..p.n_objects() {
            let mut row = full_mask(p.n_features());
            for b in mask_iter(self.e.row(a)) {
                row &= p.incidence().row(b);
            }
            for x in mask_iter(row) {
                out.set(a, x, true);
            }
        }
        out
    }

    pub fn sdia(&self) -> Rel {
        self.sbox().converse()
    }
}

/// Derives the lax and strict approximations and the converse of the strict
/// one.
pub fn rough_derive(rc: &RoughContext) -> (Rel, Rel, Rel) {
    (rc.lax_rbox(), rc.sbox(), rc.sdia())
}

/// Either kind of relational structure formulas are evaluated on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ctx {
    Enriched(EnrichedContext),
    Rough(RoughContext),
}

impl Ctx {
    pub fn polarity(&self) -> &Polarity {
        match self {
            Ctx::Enriched(c) => &c.polarity,
            Ctx::Rough(c) => &c.polarity,
        }
    }

    pub fn is_rough(&self) -> bool {
        matches!(self, Ctx::Rough(_))
    }

    /// The relation a relational atom with this symbol denotes.
    pub fn rel_for(&self, sym: RelSym) -> Result<Rel, SemError> {
        let missing = || Err(SemError::MissingRelation(sym));
        match self {
            Ctx::Enriched(c) => match sym {
                RelSym::I => Ok(c.polarity.incidence().clone()),
                RelSym::J => Ok(c.polarity.incidence().converse()),
                RelSym::RBox => c.rbox.clone().map_or_else(missing, Ok),
                RelSym::RDia => c.rdia.clone().map_or_else(missing, Ok),
                RelSym::RRhd => c.rrhd.clone().map_or_else(missing, Ok),
                RelSym::RBBox => c.rdia.as_ref().map_or_else(missing, |r| Ok(r.converse())),
                RelSym::RBDia => c.rbox.as_ref().map_or_else(missing, |r| Ok(r.converse())),
                RelSym::RBRhd => c.rrhd.as_ref().map_or_else(missing, |r| Ok(r.converse())),
                RelSym::E | RelSym::SBox | RelSym::SDia => missing(),
            },
            Ctx::Rough(c) => match sym {
                RelSym::I => Ok(c.polarity.incidence().clone()),
                RelSym::J => Ok(c.polarity.incidence().converse()),
                RelSym::E => Ok(c.e.clone()),
                RelSym::SBox => Ok(c.sbox()),
                RelSym::SDia => Ok(c.sdia()),
                RelSym::RBox => Ok(c.lax_rbox()),
                RelSym::RBDia => Ok(c.lax_rbox().converse()),
                // In rough mode the equivalence plays the role of the
                // rhd-relation, and it is its own converse.
                RelSym::RRhd | RelSym::RBRhd => Ok(c.e.clone()),
                RelSym::RDia | RelSym::RBBox => missing(),
            },
        }
    }

    /// Relation interpreting `box` formulas.
    pub fn box_rel(&self) -> Result<Rel, SemError> {
        match self {
            Ctx::Enriched(_) => self.rel_for(RelSym::RBox),
            Ctx::Rough(_) => self.rel_for(RelSym::SBox),
        }
    }

    /// Relation interpreting `dia` formulas.
    pub fn dia_rel(&self) -> Result<Rel, SemError> {
        match self {
            Ctx::Enriched(_) => self.rel_for(RelSym::RDia),
            Ctx::Rough(_) => self.rel_for(RelSym::SDia),
        }
    }

    /// Relation interpreting `rhd` formulas.
    pub fn rhd_rel(&self) -> Result<Rel, SemError> {
        match self {
            Ctx::Enriched(_) => self.rel_for(RelSym::RRhd),
            Ctx::Rough(c) => Ok(c.e.clone()),
        }
    }
}

const SECTION_KEYWORDS: [&str; 7] = ["objects", "features", "I", "Rbox", "Rdia", "Rrhd", "E"];

/// Options for the model file loader.
#[derive(Debug, Clone, Copy)]
pub struct LoadOptions {
    /// Check I-compatibility of the enriched relations.
    pub check_compat: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions { check_compat: true }
    }
}

/// Parses the model file format:
///
/// ```text
/// objects a b;  features x y;
/// I a x, a y, b y;
/// E a a, a b, b a, b b;   # or Rbox/Rdia/Rrhd sections
/// ```
pub fn parse_model(text: &str, opts: LoadOptions) -> Result<Ctx, SemError> {
    let mut sections: Vec<(String, Vec<String>)> = Vec::new();
    for (lineno, raw_line) in text.lines().enumerate() {
        let line = raw_line.split('#').next().unwrap();
        for stmt in line.split(';') {
            let words: Vec<String> = stmt.split_whitespace().map(str::to_string).collect();
            if words.is_empty() {
                continue;
            }
            if !SECTION_KEYWORDS.contains(&words[0].as_str()) {
                // Continuation of the previous section split across lines.
                if let Some(last) = sections.last_mut() {
                    if !last.1.is_empty() && !last.1.last().unwrap().ends_with(';') {
                        last.1.extend(words);
                        continue;
                    }
                }
                return Err(SemError::Model(format!(
                    "line {}: unknown section `{}`",
                    lineno + 1,
                    words[0]
                )));
            }
            sections.push((words[0].clone(), words[1..].to_vec()));
        }
    }

    let mut objects: Option<Vec<String>> = None;
    let mut features: Option<Vec<String>> = None;
    let mut raw_rels: BTreeMap<String, Vec<(String, String)>> = BTreeMap::new();
    for (kw, body) in sections {
        match kw.as_str() {
            "objects" => objects = Some(body),
            "features" => features = Some(body),
            _ => {
                let mut pairs = Vec::new();
                let joined = body.join(" ");
                for entry in joined.split(',') {
                    let mut it = entry.split_whitespace();
                    match (it.next(), it.next(), it.next()) {
                        (None, _, _) => continue,
                        (Some(u), Some(v), None) => pairs.push((u.to_string(), v.to_string())),
                        _ => {
                            return Err(SemError::Model(format!(
                                "section {kw}: malformed pair `{entry}`"
                            )))
                        }
                    }
                }
                raw_rels.entry(kw).or_default().extend(pairs);
            }
        }
    }

    let objects = objects.ok_or_else(|| SemError::Model("missing objects section".into()))?;
    let features = features.ok_or_else(|| SemError::Model("missing features section".into()))?;
    if objects.len() > MAX_CARRIER || features.len() > MAX_CARRIER {
        return Err(SemError::SizeBudget);
    }

    let build = |pairs: &[(String, String)],
                 rows: &[String],
                 cols: &[String]|
     -> Result<Rel, SemError> {
        let mut r = Rel::empty(rows.len(), cols.len());
        for (u, v) in pairs {
            let ui = rows
                .iter()
                .position(|n| n == u)
                .ok_or_else(|| SemError::UnknownElement(u.clone()))?;
            let vi = cols
                .iter()
                .position(|n| n == v)
                .ok_or_else(|| SemError::UnknownElement(v.clone()))?;
            r.set(ui, vi, true);
        }
        Ok(r)
    };

    let incidence = build(
        raw_rels.get("I").map(Vec::as_slice).unwrap_or(&[]),
        &objects,
        &features,
    )?;
    let pol = Polarity::new(objects.clone(), features.clone(), incidence);

    let has_e = raw_rels.contains_key("E");
    let has_modal = ["Rbox", "Rdia", "Rrhd"].iter().any(|k| raw_rels.contains_key(*k));
    if has_e && has_modal {
        return Err(SemError::Model(
            "E cannot be combined with Rbox/Rdia/Rrhd sections".to_string(),
        ));
    }

    if has_e {
        let e = build(&raw_rels["E"], &objects, &objects)?;
        return Ok(Ctx::Rough(RoughContext::new(pol, e)?));
    }

    let rbox = raw_rels
        .get("Rbox")
        .map(|p| build(p, &objects, &features))
        .transpose()?;
    let rdia = raw_rels
        .get("Rdia")
        .map(|p| build(p, &features, &objects))
        .transpose()?;
    let rrhd = raw_rels
        .get("Rrhd")
        .map(|p| build(p, &objects, &objects))
        .transpose()?;
    let ctx = EnrichedContext::new(pol, rbox, rdia, rrhd);
    if opts.check_compat && !ctx.is_compatible() {
        return Err(SemError::Model(
            "a relation in the model is not I-compatible (use --no-check-compat to load anyway)"
                .to_string(),
        ));
    }
    Ok(Ctx::Enriched(ctx))
}

impl fmt::Display for Ctx {
    /// Prints back in the model file format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.polarity();
        writeln!(f, "objects {};", p.objects().join(" "))?;
        writeln!(f, "features {};", p.features().join(" "))?;
        let print_rel = |f: &mut fmt::Formatter<'_>,
                         name: &str,
                         r: &Rel,
                         rows: &[String],
                         cols: &[String]|
         -> fmt::Result {
            let pairs = r.pairs();
            if pairs.is_empty() {
                return writeln!(f, "{name};");
            }
            let body: Vec<String> = pairs
                .iter()
                .map(|&(i, j)| format!("{} {}", rows[i], cols[j]))
                .collect();
            writeln!(f, "{name} {};", body.join(", "))
        };
        print_rel(f, "I", p.incidence(), p.objects(), p.features())?;
        match self {
            Ctx::Enriched(c) => {
                if let Some(r) = &c.rbox {
                    print_rel(f, "Rbox", r, p.objects(), p.features())?;
                }
                if let Some(r) = &c.rdia {
                    print_rel(f, "Rdia", r, p.features(), p.objects())?;
                }
                if let Some(r) = &c.rrhd {
                    print_rel(f, "Rrhd", r, p.objects(), p.objects())?;
                }
            }
            Ctx::Rough(c) => {
                print_rel(f, "E", &c.e, p.objects(), p.objects())?;
            }
        }
        Ok(())
    }
}

/// The footnote structure: `A = {a,b}`, `X = {x,y}`,
/// `I = {(a,x),(a,y),(b,y)}`.
pub fn footnote_polarity() -> Polarity {
    Polarity::new(
        vec!["a".into(), "b".into()],
        vec!["x".into(), "y".into()],
        Rel::from_pairs(2, 2, &[(0, 0), (0, 1), (1, 1)]),
    )
}
