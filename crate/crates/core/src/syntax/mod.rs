//! Concrete and abstract syntax for the modal language and labelled sequents.

mod ast;
mod parse;

pub use ast::{
    desugar_composition, fresh_label, impl_with_bound, rename_label, Formula, ImplTerm, Label,
    RelAtom, RelExpr, RelSym, Sequent, SequentItem, Sort, SyntaxError,
};
pub use parse::{
    parse_formula, parse_formula_sequent, parse_item, parse_rel_expr, parse_sequent, ParseError,
};

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn lbl(s: &str) -> Label {
        Label::new(s).unwrap()
    }

    #[test]
    fn parses_formulas_per_grammar() {
        assert_eq!(
            parse_formula("box (p /\\ q)").unwrap(),
            Formula::boxed(Formula::and(Formula::prop("p"), Formula::prop("q")))
        );
        assert_eq!(
            parse_formula("bot \\/ top").unwrap(),
            Formula::or(Formula::Bot, Formula::Top)
        );
        assert_eq!(
            parse_formula("rhd rhd p").unwrap(),
            Formula::rhd(Formula::rhd(Formula::prop("p")))
        );
        // unary binds tighter than /\ which binds tighter than \/
        assert_eq!(
            parse_formula("box p /\\ q \\/ r").unwrap(),
            Formula::or(
                Formula::and(Formula::boxed(Formula::prop("p")), Formula::prop("q")),
                Formula::prop("r")
            )
        );
    }

    #[test]
    fn formula_parse_errors_carry_positions() {
        match parse_formula("p /\\ (q \\/ r").unwrap_err() {
            ParseError::Unbalanced { line: 1, col: 6 } => {}
            e => panic!("unexpected error {e:?}"),
        }
        assert!(matches!(
            parse_formula("p ? q").unwrap_err(),
            ParseError::BadChar { ch: '?', .. }
        ));
        assert!(matches!(
            parse_formula("p /\\").unwrap_err(),
            ParseError::Unexpected { .. }
        ));
    }

    #[test]
    fn parses_sequents() {
        let s = parse_sequent("a : box p |- a Rbox x").unwrap();
        assert_eq!(s.left.len(), 1);
        assert_eq!(s.right.len(), 1);
        assert!(matches!(s.left[0], SequentItem::Fo(..)));
        assert!(matches!(s.right[0], SequentItem::Rel(..)));

        let s = parse_sequent("(b Rbox x => b I y) |- y :: p").unwrap();
        match &s.left[0] {
            SequentItem::Impl(t) => assert_eq!(t.bound(), &lbl("b")),
            other => panic!("expected implication term, got {other}"),
        }
    }

    #[test]
    fn sort_mismatch_is_rejected() {
        assert!(matches!(
            parse_sequent("x : p |- a I x").unwrap_err(),
            ParseError::Sort { .. }
        ));
        assert!(matches!(
            parse_sequent("a :: p |- a I x").unwrap_err(),
            ParseError::Sort { .. }
        ));
        // object relation applied to a feature label
        assert!(matches!(
            parse_sequent("x Rbox y |- ").unwrap_err(),
            ParseError::Sort { .. }
        ));
    }

    #[test]
    fn converse_atoms_normalize() {
        let s = parse_sequent("x J a |- x Sdia a").unwrap();
        assert_eq!(s.left[0].to_string(), "a I x");
        assert_eq!(s.right[0].to_string(), "a Sbox x");
    }

    #[test]
    fn desugars_compositions_outermost_first() {
        let atom = |t: &str| match parse_sequent(&format!("{t} |- ")).unwrap().left[0].clone() {
            SequentItem::Rel(a) => a,
            other => panic!("expected atom, got {other}"),
        };

        let a = atom("z (J;Rbox) x");
        let avoid: BTreeSet<Label> = [lbl("z"), lbl("x"), lbl("a")].into_iter().collect();
        let out = desugar_composition(&a, &avoid).unwrap();
        // (b Rbox x => z J b), with the consequent normalized to b I z
        assert_eq!(out.to_string(), "(b Rbox x => b I z)");

        let a = atom("a (I;(J;Rbox)) u");
        let out = desugar_composition(&a, &BTreeSet::new()).unwrap();
        assert_eq!(out.to_string(), "(v (J;Rbox) u => a I v)");
        match out {
            SequentItem::Impl(t) => {
                assert_eq!(t.bound(), &lbl("v"));
                assert!(t.antecedent().rel().is_composite());
            }
            _ => unreachable!(),
        }

        let plain = atom("a I x");
        assert!(matches!(
            desugar_composition(&plain, &BTreeSet::new()),
            Err(SyntaxError::NotComposite(_))
        ));
    }

    #[test]
    fn desugar_introduces_one_fresh_label() {
        let a = match parse_sequent("z (J;Rbox) x |- ").unwrap().left[0].clone() {
            SequentItem::Rel(a) => a,
            _ => unreachable!(),
        };
        let avoid: BTreeSet<Label> = [lbl("b"), lbl("c")].into_iter().collect();
        match desugar_composition(&a, &avoid).unwrap() {
            SequentItem::Impl(t) => {
                assert!(!avoid.contains(t.bound()));
                assert!(!a.labels().contains(t.bound()));
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn rename_is_capture_avoiding() {
        let item = parse_sequent("a : box p |- ").unwrap().left[0].clone();
        let renamed = rename_label(&item, &lbl("a"), &lbl("c")).unwrap();
        assert_eq!(renamed.to_string(), "c : box p");

        let it = parse_sequent("(b Rbox x => b I y) |- ").unwrap().left[0].clone();
        // b is bound: renaming it from the outside is the identity
        assert_eq!(rename_label(&it, &lbl("b"), &lbl("c")).unwrap(), it);
        // renaming a free label onto the bound name renames the binder away
        let it2 = parse_sequent("(c Rrhd a => c I y) |- ").unwrap().left[0].clone();
        let r = rename_label(&it2, &lbl("a"), &lbl("c")).unwrap();
        match &r {
            SequentItem::Impl(t) => {
                assert_ne!(t.bound(), &lbl("c"));
                assert_eq!(t.antecedent().rhs(), &lbl("c"));
            }
            _ => unreachable!(),
        }
        // sort mismatch
        assert!(rename_label(&it, &lbl("y"), &lbl("c")).is_err());
    }

    #[test]
    fn rename_identity_when_old_not_free() {
        let it = parse_sequent("a : p |- ").unwrap().left[0].clone();
        assert_eq!(rename_label(&it, &lbl("c"), &lbl("d")).unwrap(), it);
    }

    #[test]
    fn sequent_equality_is_multiset() {
        let s1 = parse_sequent("a : p, x :: q |- a I x").unwrap();
        let s2 = parse_sequent("x :: q, a : p |- a I x").unwrap();
        let s3 = parse_sequent("a : p, a : p, x :: q |- a I x").unwrap();
        assert_eq!(s1, s2);
        assert_ne!(s1, s3);
    }

    #[test]
    fn impl_terms_compare_up_to_bound_renaming() {
        let s1 = parse_sequent("(b Rbox x => b I y) |- ").unwrap();
        let s2 = parse_sequent("(c Rbox x => c I y) |- ").unwrap();
        let s3 = parse_sequent("(b Rbox x => b I z) |- ").unwrap();
        assert_eq!(s1, s2);
        assert_ne!(s1, s3);
    }

    #[test]
    fn bad_impl_terms_are_rejected()
    {
        // two shared labels
        assert!(parse_sequent("(b Rbox x => b I x) |- ").is_err());
        // consequent must be incidence
        assert!(parse_sequent("(b Rbox x => b E c) |- ").is_err());
        // J-spelled consequents normalize to incidence and are fine
        assert!(parse_sequent("(b Rbox x => y J b) |- ").is_ok());
    }

    #[test]
    fn reserved_namespace_labels() {
        assert_eq!(lbl("_o3").sort(), Sort::Object);
        assert_eq!(lbl("_u12").sort(), Sort::Feature);
        assert!(Label::new("_q1").is_err());
        assert!(Label::new("m").is_err());
        assert!(Label::new("").is_err());
    }
}
