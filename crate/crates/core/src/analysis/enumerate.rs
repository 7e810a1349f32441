//! Exhaustive and sampled enumeration of finite contexts.
//!
//! Enumeration does not quotient by isomorphism; at desk scale correctness
//! beats speed, and deterministic order gives reproducible witnesses.

use rand::Rng;

use crate::semantics::{
    fo_condition, is_i_compatible, CondId, Ctx, EnrichedContext, Polarity, Rel, RoughContext,
    SemError,
};
use crate::syntax::RelSym;

/// Which modal relations an enriched context carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ContextSignature {
    pub rbox: bool,
    pub rdia: bool,
    pub rrhd: bool,
}

impl ContextSignature {
    pub fn all() -> ContextSignature {
        ContextSignature {
            rbox: true,
            rdia: true,
            rrhd: true,
        }
    }

    pub fn for_condition(id: CondId) -> ContextSignature {
        match id {
            CondId::BoxRefl | CondId::BoxDense => ContextSignature {
                rbox: true,
                ..Default::default()
            },
            CondId::DiaRefl | CondId::DiaDense => ContextSignature {
                rdia: true,
                ..Default::default()
            },
            CondId::SymRhd => ContextSignature {
                rrhd: true,
                ..Default::default()
            },
            CondId::B1 | CondId::B2 | CondId::Cas | CondId::Sym => ContextSignature {
                rbox: true,
                rdia: true,
                rrhd: false,
            },
            CondId::RoughRefl | CondId::RoughTrans => ContextSignature::default(),
        }
    }
}

/// Restricting the enumerated class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrameClass {
    /// All enriched contexts with I-compatible relations of the signature.
    Enriched(ContextSignature),
    /// Enriched contexts additionally satisfying the conditions.
    Conditioned(ContextSignature, Vec<CondId>),
    /// Rough contexts (E an equivalence). The flag additionally requires
    /// both E and the derived strict approximation to be I-compatible.
    Rough { compat: bool },
}

/// All polarities with carriers up to the bounds, smallest first.
pub fn enumerate_polarities(max_a: usize, max_x: usize) -> Vec<Polarity> {
    let mut out = Vec::new();
    for na in 1..=max_a {
        for nx in 1..=max_x {
            for code in 0..(1u64 << (na * nx)) {
                out.push(Polarity::indexed(na, nx, Rel::from_code(na, nx, code)));
            }
        }
    }
    out
}

/// All I-compatible relations of the given signature over a polarity.
pub fn i_compatible_rels(pol: &Polarity, sym: RelSym) -> Vec<Rel> {
    let (rows, cols) = match sym.signature() {
        (crate::syntax::Sort::Object, crate::syntax::Sort::Feature) => {
            (pol.n_objects(), pol.n_features())
        }
        (crate::syntax::Sort::Feature, crate::syntax::Sort::Object) => {
            (pol.n_features(), pol.n_objects())
        }
        _ => (pol.n_objects(), pol.n_objects()),
    };
    let mut out = Vec::new();
    for code in 0..(1u64 << (rows * cols)) {
        let r = Rel::from_code(rows, cols, code);
        if is_i_compatible(pol, &r, sym.signature()) {
            out.push(r);
        }
    }
    out
}

/// All equivalence relations on `0..n` (set partitions, deterministic
/// order).
pub fn enumerate_equivalences(n: usize) -> Vec<Rel> {
    // assign each element the index of its block, canonical (restricted
    // growth) strings
    fn go(assign: &mut Vec<usize>, n: usize, out: &mut Vec<Rel>) {
        if assign.len() == n {
            let mut r = Rel::empty(n, n);
            for i in 0..n {
                for j in 0..n {
                    if assign[i] == assign[j] {
                        r.set(i, j, true);
                    }
                }
            }
            out.push(r);
            return;
        }
        let max = assign.iter().copied().max().map_or(0, |m| m + 1);
        for b in 0..=max {
            assign.push(b);
            go(assign, n, out);
            assign.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out
}

/// Every context of the class up to the carrier bounds, by total structure
/// size then lexicographic code order.
pub fn enumerate_contexts(
    max_a: usize,
    max_x: usize,
    class: &FrameClass,
) -> Result<Vec<Ctx>, SemError> {
    if max_a > 4 || max_x > 4 {
        return Err(SemError::SizeBudget);
    }
    let mut out = Vec::new();
    for pol in enumerate_polarities(max_a, max_x) {
        match class {
            FrameClass::Enriched(sig) | FrameClass::Conditioned(sig, _) => {
                let rbox_choices: Vec<Option<Rel>> = if sig.rbox {
                    i_compatible_rels(&pol, RelSym::RBox).into_iter().map(Some).collect()
                } else {
                    vec![None]
                };
                let rdia_choices: Vec<Option<Rel>> = if sig.rdia {
                    i_compatible_rels(&pol, RelSym::RDia).into_iter().map(Some).collect()
                } else {
                    vec![None]
                };
                let rrhd_choices: Vec<Option<Rel>> = if sig.rrhd {
                    i_compatible_rels(&pol, RelSym::RRhd).into_iter().map(Some).collect()
                } else {
                    vec![None]
                };
                for rbox in &rbox_choices {
                    for rdia in &rdia_choices {
                        for rrhd in &rrhd_choices {
                            let ctx = Ctx::Enriched(EnrichedContext::new(
                                pol.clone(),
                                rbox.clone(),
                                rdia.clone(),
                                rrhd.clone(),
                            ));
                            if let FrameClass::Conditioned(_, conds) = class {
                                let mut ok = true;
                                for c in conds {
                                    if !fo_condition(&ctx, *c)? {
                                        ok = false;
                                        break;
                                    }
                                }
                                if !ok {
                                    continue;
                                }
                            }
                            out.push(ctx);
                        }
                    }
                }
            }
            FrameClass::Rough { compat } => {
                for e in enumerate_equivalences(pol.n_objects()) {
                    let rc = RoughContext::new(pol.clone(), e.clone()).expect("equivalence");
                    if *compat {
                        let e_ok = is_i_compatible(&pol, &e, RelSym::E.signature());
                        let s_ok =
                            is_i_compatible(&pol, &rc.sbox(), RelSym::SBox.signature());
                        if !e_ok || !s_ok {
                            continue;
                        }
                    }
                    out.push(Ctx::Rough(rc));
                }
            }
        }
    }
    Ok(out)
}

/// Draws one random context of the class at exactly the given carrier sizes.
/// Relations are sampled uniformly from the I-compatible candidates of the
/// sampled polarity.
pub fn sample_context(
    rng: &mut impl Rng,
    n_a: usize,
    n_x: usize,
    class: &FrameClass,
) -> Option<Ctx> {
    let code = rng.gen_range(0..(1u64 << (n_a * n_x)));
    let pol = Polarity::indexed(n_a, n_x, Rel::from_code(n_a, n_x, code));
    match class {
        FrameClass::Enriched(sig) | FrameClass::Conditioned(sig, _) => {
            let mut pick = |sym: RelSym, wanted: bool| -> Option<Option<Rel>> {
                if !wanted {
                    return Some(None);
                }
                let choices = i_compatible_rels(&pol, sym);
                if choices.is_empty() {
                    return None;
                }
                Some(Some(choices[rng.gen_range(0..choices.len())].clone()))
            };
            let rbox = pick(RelSym::RBox, sig.rbox)?;
            let rdia = pick(RelSym::RDia, sig.rdia)?;
            let rrhd = pick(RelSym::RRhd, sig.rrhd)?;
            let ctx = Ctx::Enriched(EnrichedContext::new(pol, rbox, rdia, rrhd));
            if let FrameClass::Conditioned(_, conds) = class {
                for c in conds {
                    if !fo_condition(&ctx, *c).ok()? {
                        return None;
                    }
                }
            }
            Some(ctx)
        }
        FrameClass::Rough { compat } => {
            let eq = enumerate_equivalences(n_a);
            let e = eq[rng.gen_range(0..eq.len())].clone();
            let rc = RoughContext::new(pol.clone(), e.clone()).expect("equivalence");
            if *compat {
                if !is_i_compatible(&pol, &e, RelSym::E.signature())
                    || !is_i_compatible(&pol, &rc.sbox(), RelSym::SBox.signature())
                {
                    return None;
                }
            }
            Some(Ctx::Rough(rc))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polarity_counts() {
        assert_eq!(enumerate_polarities(1, 1).len(), 2);
        assert_eq!(enumerate_polarities(2, 2).len(), 2 + 4 + 4 + 16);
    }

    #[test]
    fn one_by_one_rbox_contexts_counted_by_brute_force() {
        // independent oracle: enumerate all relations, then filter
        let mut expected = 0;
        for pol in enumerate_polarities(1, 1) {
            for code in 0..2u64 {
                let r = Rel::from_code(1, 1, code);
                if is_i_compatible(&pol, &r, RelSym::RBox.signature()) {
                    expected += 1;
                }
            }
        }
        let sig = ContextSignature {
            rbox: true,
            ..Default::default()
        };
        let got = enumerate_contexts(1, 1, &FrameClass::Enriched(sig)).unwrap();
        assert_eq!(got.len(), expected);
        assert_eq!(expected, 3); // frozen: empty polarity admits both, full admits one
    }

    #[test]
    fn equivalence_counts_are_bell_numbers() {
        assert_eq!(enumerate_equivalences(1).len(), 1);
        assert_eq!(enumerate_equivalences(2).len(), 2);
        assert_eq!(enumerate_equivalences(3).len(), 5);
        assert_eq!(enumerate_equivalences(4).len(), 15);
        for e in enumerate_equivalences(3) {
            assert!(e.is_equivalence());
        }
    }

    #[test]
    fn rough_class_includes_footnote_structure() {
        let all = enumerate_contexts(2, 2, &FrameClass::Rough { compat: false }).unwrap();
        let p0 = crate::semantics::footnote_polarity();
        let target = Ctx::Rough(RoughContext::new(
            Polarity::indexed(2, 2, p0.incidence().clone()),
            Rel::full(2, 2),
        )
        .unwrap());
        assert!(all.contains(&target));
        // with the compatibility filter the footnote structure drops out
        // (its strict approximation is not I-compatible)
        let compat = enumerate_contexts(2, 2, &FrameClass::Rough { compat: true }).unwrap();
        assert!(!compat.contains(&target));
        assert!(compat.len() < all.len());
    }

    #[test]
    fn conditioned_classes_are_monotone() {
        let sig = ContextSignature {
            rbox: true,
            ..Default::default()
        };
        let all = enumerate_contexts(2, 2, &FrameClass::Enriched(sig)).unwrap();
        let refl = enumerate_contexts(
            2,
            2,
            &FrameClass::Conditioned(sig, vec![CondId::BoxRefl]),
        )
        .unwrap();
        let refl_trans = enumerate_contexts(
            2,
            2,
            &FrameClass::Conditioned(sig, vec![CondId::BoxRefl, CondId::BoxDense]),
        )
        .unwrap();
        assert!(refl.len() <= all.len());
        assert!(refl_trans.len() <= refl.len());
        for c in &refl_trans {
            assert!(refl.contains(c));
        }
    }

    #[test]
    fn budget_guard() {
        assert!(matches!(
            enumerate_contexts(5, 1, &FrameClass::Rough { compat: false }),
            Err(SemError::SizeBudget)
        ));
    }
}
