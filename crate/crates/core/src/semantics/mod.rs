//! Finite relational semantics: polarities, Galois polars, concept lattices,
//! I-compatibility, relation composition, rough approximations, forcing, and
//! validity of formula and labelled sequents.

pub mod context;
pub mod eval;
pub mod rel;

pub use context::{
    compose, footnote_polarity, is_i_compatible, parse_model, rough_derive, ComposeKind, Concept,
    ConceptLattice, Ctx, EnrichedContext, LoadOptions, Polarity, RoughContext, SemError,
};
pub use eval::{
    describe_assignment, describe_valuation, eval_item, eval_rel_expr, extension,
    falsify_labelled, falsify_sequent, fo_condition, holds_at, intension, interp,
    for_each_valuation, labelled_sequent_valid, sequent_valid_context, CondId, LabelAssignment,
    Valuation,
};
pub use rel::{full_mask, mask_contains, mask_iter, polar_left, polar_right, Mask, Rel};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_sequent, RelSym, Sort};

    fn p0() -> Polarity {
        footnote_polarity()
    }

    fn enriched(pol: Polarity, rbox: Option<Rel>, rdia: Option<Rel>, rrhd: Option<Rel>) -> Ctx {
        Ctx::Enriched(EnrichedContext::new(pol, rbox, rdia, rrhd))
    }

    #[test]
    fn closure_examples() {
        let p = p0();
        assert_eq!(p.closure_objects(0b10), 0b11); // {b} -> {a,b}
        assert_eq!(p.closure_objects(0), 0b01); // {} -> {a}
        assert_eq!(p.closure_objects(0b11), 0b11); // A -> A
    }

    #[test]
    fn concept_enumeration() {
        let p = p0();
        let lat = p.concepts().unwrap();
        assert_eq!(lat.len(), 2);
        assert!(lat.contains(&Concept {
            extent: 0b01,
            intent: 0b11
        }));
        assert!(lat.contains(&Concept {
            extent: 0b11,
            intent: 0b10
        }));

        // empty incidence on 1x1
        let p = Polarity::indexed(1, 1, Rel::empty(1, 1));
        let lat = p.concepts().unwrap();
        assert_eq!(lat.len(), 2);
        assert!(lat.contains(&Concept { extent: 1, intent: 0 }));
        assert!(lat.contains(&Concept { extent: 0, intent: 1 }));

        // full incidence has a single concept
        let p = Polarity::indexed(2, 2, Rel::full(2, 2));
        assert_eq!(p.concepts().unwrap().len(), 1);
    }

    #[test]
    fn lattice_order_and_bounds() {
        let p = p0();
        let lat = p.concepts().unwrap();
        let top = lat.top();
        let bot = lat.bottom();
        assert_eq!(top.extent, 0b11);
        assert_eq!(bot.intent, 0b11);
        for c in lat.concepts() {
            assert!(lat.leq(&bot, c) && lat.leq(c, &top));
        }
    }

    #[test]
    fn i_compatibility_examples() {
        let p = p0();
        // I itself is always I-compatible
        assert!(is_i_compatible(&p, p.incidence(), RelSym::I.signature()));
        // E = A x A is I-compatible on P0
        let e = Rel::full(2, 2);
        assert!(is_i_compatible(&p, &e, RelSym::E.signature()));
        // The strict approximation is not: Sbox^(0)[x] is empty, not stable
        let rc = RoughContext::new(p.clone(), e).unwrap();
        let sbox = rc.sbox();
        assert_eq!(sbox.pairs(), vec![(0, 1), (1, 1)]);
        assert!(!is_i_compatible(&p, &sbox, RelSym::SBox.signature()));
        assert_eq!(sbox.col(0), 0);
        assert_eq!(p.closure_objects(0), 0b01); // closure of empty = {a}
    }

    #[test]
    fn rough_derivation() {
        let p = p0();
        let rc = RoughContext::new(p.clone(), Rel::full(2, 2)).unwrap();
        let (rbox, sbox, sdia) = rough_derive(&rc);
        assert_eq!(rbox, Rel::full(2, 2)); // lax approximation is total here
        assert_eq!(sbox.pairs(), vec![(0, 1), (1, 1)]);
        assert_eq!(sdia, sbox.converse());
        // Sbox <= I <= Rbox
        assert!(sbox.is_subset_of(p.incidence()));
        assert!(p.incidence().is_subset_of(&rbox));

        // E = identity collapses both approximations to I
        let rc = RoughContext::new(p.clone(), Rel::identity(2)).unwrap();
        assert_eq!(rc.lax_rbox(), *p.incidence());
        assert_eq!(rc.sbox(), *p.incidence());
    }

    #[test]
    fn sdia_is_outer_composition_of_j_and_e() {
        let p = p0();
        let e = Rel::full(2, 2);
        let rc = RoughContext::new(p.clone(), e.clone()).unwrap();
        let j = p.incidence().converse();
        let je = compose(ComposeKind::Outer, &j, &e, &p).unwrap();
        assert_eq!(rc.sdia(), je);
        assert_eq!(je.pairs(), vec![(1, 0), (1, 1)]); // {(y,a),(y,b)}
    }

    #[test]
    fn composition_identities() {
        let p = p0();
        let i = p.incidence().clone();
        // I ; I = I under the ax-composition
        assert_eq!(compose(ComposeKind::Ax, &i, &i, &p).unwrap(), i);
        // outer composition with empty S relates everything
        let s = Rel::empty(2, 1);
        let r = Rel::from_pairs(2, 2, &[(0, 0)]);
        let out = compose(ComposeKind::Outer, &r, &s, &p).unwrap();
        assert_eq!(out, Rel::full(2, 1));
    }

    #[test]
    fn forcing_clauses() {
        let p = p0();
        let ctx = enriched(p.clone(), Some(p.incidence().clone()), None, None);
        let lat = p.concepts().unwrap();
        let v = Valuation {
            assignments: [(
                "p".to_string(),
                Concept {
                    extent: 0b01,
                    intent: 0b11,
                },
            )]
            .into_iter()
            .collect(),
        };
        // top concept
        let (et, it) = interp(&ctx, &v, &parse_formula("top").unwrap()).unwrap();
        assert_eq!((et, it), (lat.top().extent, lat.top().intent));
        let (eb, ib) = interp(&ctx, &v, &parse_formula("bot").unwrap()).unwrap();
        assert_eq!((eb, ib), (lat.bottom().extent, lat.bottom().intent));
        // extension of box p with Rbox = I
        let e = extension(&ctx, &v, &parse_formula("box p").unwrap()).unwrap();
        assert_eq!(e, 0b01);
    }

    #[test]
    fn formula_sequent_validity() {
        let p = p0();
        let ctx = enriched(p.clone(), Some(p.incidence().clone()), None, None);
        let prop = parse_formula("p").unwrap();
        let boxp = parse_formula("box p").unwrap();
        assert!(sequent_valid_context(&ctx, &prop, &prop).unwrap());
        assert!(sequent_valid_context(&ctx, &boxp, &prop).unwrap());
        assert!(fo_condition(&ctx, CondId::BoxRefl).unwrap());
        assert!(fo_condition(&ctx, CondId::BoxDense).unwrap());

        // with the total box relation, box p |- p fails and so does the
        // frame condition
        let ctx = enriched(p.clone(), Some(Rel::full(2, 2)), None, None);
        assert!(!sequent_valid_context(&ctx, &boxp, &prop).unwrap());
        assert!(!fo_condition(&ctx, CondId::BoxRefl).unwrap());
    }

    #[test]
    fn rough_fo_conditions() {
        let p = p0();
        let ctx = Ctx::Rough(RoughContext::new(p, Rel::full(2, 2)).unwrap());
        assert!(fo_condition(&ctx, CondId::RoughRefl).unwrap());
        assert!(fo_condition(&ctx, CondId::RoughTrans).unwrap());
    }

    #[test]
    fn labelled_validity() {
        let p = p0();
        let ctx = enriched(p.clone(), Some(p.incidence().clone()), None, None);
        let valid = parse_sequent("a : p |- a : p").unwrap();
        assert!(labelled_sequent_valid(&ctx, &valid).unwrap());
        let incidence = parse_sequent("a : p, x :: p |- a I x").unwrap();
        assert!(labelled_sequent_valid(&ctx, &incidence).unwrap());
        let not_valid = parse_sequent("(b Rbox x => b I y) |- y :: p").unwrap();
        assert!(!labelled_sequent_valid(&ctx, &not_valid).unwrap());
    }

    #[test]
    fn model_file_round_trip() {
        let text = "objects a b; features x y;\nI a x, a y, b y;\nE a a, a b, b a, b b;\n";
        let ctx = parse_model(text, LoadOptions::default()).unwrap();
        match &ctx {
            Ctx::Rough(rc) => assert!(rc.e.is_equivalence()),
            _ => panic!("expected rough context"),
        }
        let printed = ctx.to_string();
        let again = parse_model(&printed, LoadOptions::default()).unwrap();
        assert_eq!(ctx, again);
    }

    #[test]
    fn model_file_errors() {
        // non-equivalence E
        let text = "objects a b; features x; I a x; E a b;";
        assert!(parse_model(text, LoadOptions::default()).is_err());
        // mixing E with modal relations
        let text = "objects a; features x; I a x; E a a; Rbox a x;";
        assert!(parse_model(text, LoadOptions::default()).is_err());
        // unknown element
        let text = "objects a; features x; I c x;";
        assert!(parse_model(text, LoadOptions::default()).is_err());
        // compat check rejects a non-compatible relation, and the flag skips it
        let text = "objects a b; features x y; I a x, a y, b y; Rbox a y, b y;";
        assert!(parse_model(text, LoadOptions::default()).is_err());
        assert!(parse_model(text, LoadOptions { check_compat: false }).is_ok());
    }

    #[test]
    fn sort_of_elements_checked() {
        let p = p0();
        assert_eq!(p.object_index("b").unwrap(), 1);
        assert!(p.object_index("x").is_err());
        assert_eq!(p.set_to_names(Sort::Feature, 0b10), vec!["y".to_string()]);
    }
}
