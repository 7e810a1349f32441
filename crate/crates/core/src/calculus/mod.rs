//! The rule catalogue, schema matching with eigenvariable side conditions,
//! and proof-tree checking.

mod check;
mod rules;
mod script;

pub use check::{
    active_label_vars, eigen_check,
    check_instance, check_node, check_proof, conclusion_matches, family_exprs, instantiate_item,
    instantiate_relatom, sequent_alpha_eq, Binding, CheckFailure, ConclusionMatch, ProofNode,
    RuleError,
};
pub use rules::{
    family_members, rule_schemas, schema, Axiom, CalculusConfig, FPat, Family, LVar, Pat, RPat,
    RelAPat, RuleId, Schema, Side, Special,
};
pub use script::{parse_proof, print_proof, ScriptError};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_sequent;

    fn node(rule: RuleId, concl: &str, premises: Vec<ProofNode>) -> ProofNode {
        ProofNode::new(rule, parse_sequent(concl).unwrap(), premises)
    }

    #[test]
    fn rule_names_round_trip_and_docs_total() {
        for id in RuleId::ALL {
            assert_eq!(RuleId::from_script_name(id.script_name()), Some(id));
            assert!(!id.paper_name().is_empty());
        }
    }

    #[test]
    fn catalogue_counts() {
        let base = CalculusConfig::base();
        let with_cut = CalculusConfig {
            allow_cut: true,
            ..CalculusConfig::base()
        };
        let ids = |c: &CalculusConfig| -> Vec<RuleId> {
            rule_schemas(c).into_iter().map(|(id, _, _)| id).collect()
        };
        let base_ids = ids(&base);
        assert!(!base_ids.contains(&RuleId::CutObj));
        assert!(ids(&with_cut).contains(&RuleId::CutObj));
        // 10 invertible logical rules, 6 adjunction rules
        let logical = [
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
        ];
        assert!(logical.iter().all(|r| base_ids.contains(r)));
        assert_eq!(
            base_ids
                .iter()
                .filter(|r| r.script_name().starts_with("adj-"))
                .count(),
            6
        );
        // Table-1 rules appear only when their axiom is selected
        assert!(!base_ids.contains(&RuleId::TSymRhd));
        let sym = CalculusConfig::with_axioms(&[Axiom::SymRhd]);
        let sym_ids = ids(&sym);
        assert!(sym_ids.contains(&RuleId::TSymRhd));
        assert!(!sym_ids.contains(&RuleId::TBoxRefl));
        // rough mode: interdefinability and equivalence rules present,
        // black switches and adjunctions absent
        let rough_ids = ids(&CalculusConfig::rough());
        for r in [
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
        ] {
            assert!(rough_ids.contains(&r));
        }
        assert!(!rough_ids.contains(&RuleId::AdjDiaBBox));
        assert!(!rough_ids.contains(&RuleId::SwABDiaX1));
    }

    #[test]
    fn box_r_checks_with_eigenvariable() {
        let config = CalculusConfig::base();
        let n = node(
            RuleId::BoxR,
            "|- a : box p",
            vec![node(RuleId::IdFeat, "x :: p |- a Rbox x", vec![])],
        );
        assert!(check_node(&config, &n).is_ok());

        // x occurring in the carried context violates the side condition
        let bad = node(
            RuleId::BoxR,
            "x :: q |- a : box p",
            vec![node(RuleId::IdFeat, "x :: q, x :: p |- a Rbox x", vec![])],
        );
        assert!(matches!(
            check_node(&config, &bad),
            Err(RuleError::EigenvariableViolation { .. })
        ));
    }

    #[test]
    fn t_box_refl_gated_by_sigma() {
        let n = node(
            RuleId::TBoxRefl,
            "a : box p, x :: p |- a I x",
            vec![node(
                RuleId::BoxL,
                "a : box p, x :: p |- a Rbox x",
                vec![],
            )],
        );
        let with = CalculusConfig::with_axioms(&[Axiom::BoxRefl]);
        assert!(check_node(&with, &n).is_ok());
        assert!(matches!(
            check_node(&CalculusConfig::base(), &n),
            Err(RuleError::RuleDisabled(_))
        ));
    }

    #[test]
    fn cut_respects_config_and_splits_contexts() {
        let n = node(
            RuleId::CutObj,
            "a : p, b : q |- a : p",
            vec![
                node(RuleId::IdObj, "a : p |- a : p", vec![]),
                node(RuleId::WeakL, "b : q, a : p |- a : p", vec![]),
            ],
        );
        let allow = CalculusConfig {
            allow_cut: true,
            ..CalculusConfig::base()
        };
        assert!(check_node(&allow, &n).is_ok());
        assert!(matches!(
            check_node(&CalculusConfig::base(), &n),
            Err(RuleError::RuleDisabled(_))
        ));
    }

    #[test]
    fn weakening_and_identity_steps() {
        let config = CalculusConfig::base();
        let n = node(
            RuleId::WeakL,
            "a : p, b : q |- a : p",
            vec![node(RuleId::IdObj, "a : p |- a : p", vec![])],
        );
        assert!(check_node(&config, &n).is_ok());

        // fold: composition atom versus its implication term
        let n = node(
            RuleId::Fold,
            "z (J;Rbox) x, a : p |- a : p",
            vec![node(
                RuleId::IdObj,
                "(b Rbox x => b I z), a : p |- a : p",
                vec![],
            )],
        );
        assert!(check_node(&config, &n).is_ok());
    }

    #[test]
    fn approx_and_switch_rules() {
        let config = CalculusConfig::base();
        let n = node(
            RuleId::ApproxX,
            "b : box p |- b : p",
            vec![node(RuleId::WeakL, "b : box p, x :: p |- b I x", vec![])],
        );
        assert!(check_node(&config, &n).is_ok());

        // eigenvariable of approx-x must avoid the contexts
        let bad = node(
            RuleId::ApproxX,
            "x :: q |- b : p",
            vec![node(RuleId::WeakL, "x :: q, x :: p |- b I x", vec![])],
        );
        assert!(matches!(
            check_node(&config, &bad),
            Err(RuleError::EigenvariableViolation { .. })
        ));

        // switch rule S xa, as in the monotonicity derivation
        let n = node(
            RuleId::SwXa,
            "a : p, x :: dia (p \\/ q) |- a : p \\/ q, x Rdia a",
            vec![node(
                RuleId::WeakL,
                "y :: p \\/ q, x :: dia (p \\/ q) |- y :: p, x Rdia a",
                vec![],
            )],
        );
        assert!(check_node(&config, &n).is_ok());
    }

    #[test]
    fn rough_rules_match_strict_atoms() {
        let rough = CalculusConfig::rough();
        // box-l matches Sbox atoms in rough mode
        let n = node(
            RuleId::BoxL,
            "b : box p, x :: p |- b Sbox x",
            vec![node(
                RuleId::IdFeat,
                "b : box p, x :: p |- x :: p, b Sbox x",
                vec![],
            )],
        );
        assert!(check_node(&rough, &n).is_ok());
        assert!(matches!(
            check_node(&CalculusConfig::base(), &n),
            Err(RuleError::NoMatch(_))
        ));

        // curryS: the paper's own derivations instantiate its fresh label
        // with one already in the context, so it carries no side condition
        let n = node(
            RuleId::CurryS,
            "b : box p, x :: p, b E b |- b I x",
            vec![node(RuleId::WeakL, "b : box p, x :: p |- b Sbox x", vec![])],
        );
        assert!(check_node(&rough, &n).is_ok());

        // uncurryS does: b must avoid the contexts
        let n = node(
            RuleId::UncurryS,
            "a : box p, x :: p, c E a |- c Sbox x",
            vec![node(
                RuleId::WeakL,
                "a : box p, x :: p, c E a, b E c |- b I x",
                vec![],
            )],
        );
        assert!(check_node(&rough, &n).is_ok());
        let bad = node(
            RuleId::UncurryS,
            "b : q |- a Sbox x",
            vec![node(RuleId::WeakL, "b : q, b E a |- b I x", vec![])],
        );
        assert!(matches!(
            check_node(&rough, &bad),
            Err(RuleError::EigenvariableViolation { .. })
        ));
    }

    #[test]
    fn equivalence_rules() {
        let rough = CalculusConfig::rough();
        let n = node(
            RuleId::Refl,
            "b : box p, x :: p |- b I x",
            vec![node(
                RuleId::WeakL,
                "b : box p, x :: p, b E b |- b I x",
                vec![],
            )],
        );
        assert!(check_node(&rough, &n).is_ok());

        let n = node(
            RuleId::Sym,
            "b : rhd p, a : p |- a E b",
            vec![node(RuleId::WeakL, "b : rhd p, a : p |- b E a", vec![])],
        );
        assert!(check_node(&rough, &n).is_ok());

        // trans splits one E-link through a middle label
        let n = node(
            RuleId::Trans,
            "a : box p, x :: p, b E c, c E a |- b I x",
            vec![node(
                RuleId::WeakL,
                "a : box p, x :: p, b E a |- b I x",
                vec![],
            )],
        );
        assert!(check_node(&rough, &n).is_ok());
    }

    #[test]
    fn pure_structure_rules_with_families() {
        let config = CalculusConfig::base();
        // Id(J;I)_R with T = RBdia, from the transitivity derivation
        let n = node(
            RuleId::IdJIRight,
            "z (J;Rbox) x, a : box p, x :: p |- z (J;(I;RBdia)) a",
            vec![node(
                RuleId::WeakL,
                "z (J;Rbox) x, a : box p, x :: p |- z RBdia a",
                vec![],
            )],
        );
        assert!(check_node(&config, &n).is_ok());

        // -S(J;T) with S = (I;RBdia), S' = Rbox
        let n = node(
            RuleId::StructJTInv,
            "b (I;RBdia) a, a : box p, x :: p |- b Rbox x",
            vec![node(
                RuleId::WeakL,
                "z (J;Rbox) x, a : box p, x :: p |- z (J;(I;RBdia)) a",
                vec![],
            )],
        );
        assert!(check_node(&config, &n).is_ok());

        // family violation: (J;E) is not in the base T-family
        let n = node(
            RuleId::IdJIRight,
            "|- z (J;(I;(J;E))) a",
            vec![node(RuleId::WeakL, "|- z (J;E) a", vec![])],
        );
        assert!(check_node(&config, &n).is_err());
    }

    #[test]
    fn premise_contexts_match_exactly() {
        let config = CalculusConfig::base();
        // extra junk in the premise is rejected
        let bad = node(
            RuleId::BoxR,
            "|- a : box p",
            vec![node(
                RuleId::IdFeat,
                "x :: p, b : q |- a Rbox x",
                vec![],
            )],
        );
        assert!(matches!(
            check_node(&config, &bad),
            Err(RuleError::PremiseMismatch { .. })
        ));
        let wrong_arity = node(RuleId::BoxR, "|- a : box p", vec![]);
        assert!(matches!(
            check_node(&config, &wrong_arity),
            Err(RuleError::BadArity { .. })
        ));
    }

    #[test]
    fn check_proof_matches_goals_up_to_renaming() {
        let config = CalculusConfig::base();
        let tree = node(RuleId::IdObj, "a : p |- a : p", vec![]);
        let goal = parse_sequent("c : p |- c : p").unwrap();
        assert!(check_proof(&config, &tree, &goal).is_ok());
        // non-injective renamings are not allowed
        let goal2 = parse_sequent("a : p, b : q |- a : p").unwrap();
        assert!(check_proof(&config, &tree, &goal2).is_err());
    }

    #[test]
    fn alpha_eq_examples() {
        let s1 = parse_sequent("a : p, x :: q |- a I x").unwrap();
        let s2 = parse_sequent("b : p, y :: q |- b I y").unwrap();
        let s3 = parse_sequent("b : p, y :: q |- b I x").unwrap();
        assert!(sequent_alpha_eq(&s1, &s2));
        assert!(!sequent_alpha_eq(&s1, &s3));
    }

    #[test]
    fn script_round_trip() {
        let text = r#"
# reflexivity in rough mode
(approx-x "b : box p |- b : p"
  (bind A p)
  (refl "b : box p, x :: p |- b I x"
    (curry-s "b : box p, x :: p, b E b |- b I x"
      (box-l "b : box p, x :: p |- b Sbox x"
        (id-feat "b : box p, x :: p |- x :: p, b Sbox x")))))
"#;
        let tree = parse_proof(text).unwrap();
        assert_eq!(tree.rule, RuleId::ApproxX);
        assert_eq!(tree.size(), 5);
        let printed = print_proof(&tree);
        let again = parse_proof(&printed).unwrap();
        assert_eq!(tree, again);
    }

    #[test]
    fn script_errors() {
        assert!(matches!(
            parse_proof("(no-such-rule \"|- a : p\")"),
            Err(ScriptError::UnknownRule(..))
        ));
        assert!(matches!(
            parse_proof("(id-obj \"|- a :\")"),
            Err(ScriptError::BadSequent { .. })
        ));
        assert!(matches!(
            parse_proof("(id-obj \"a : p |- a : p\""),
            Err(ScriptError::Unbalanced(_))
        ));
    }
}
