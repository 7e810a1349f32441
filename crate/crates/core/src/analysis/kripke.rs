//! Kripke frames, their lifting to rhd-contexts, and disjoint unions.

use crate::semantics::{Ctx, EnrichedContext, Polarity, Rel};

/// A classical Kripke frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeFrame {
    pub worlds: Vec<String>,
    pub rel: Rel,
}

impl KripkeFrame {
    pub fn new(worlds: Vec<String>, pairs: &[(usize, usize)]) -> KripkeFrame {
        let n = worlds.len();
        KripkeFrame {
            worlds,
            rel: Rel::from_pairs(n, n, pairs),
        }
    }

    pub fn pair_named(&self, a: &str, b: &str) -> Option<bool> {
        let i = self.worlds.iter().position(|w| w == a)?;
        let j = self.worlds.iter().position(|w| w == b)?;
        Some(self.rel.get(i, j))
    }
}

/// Lifts a frame `(W, R)` to the rhd-context `(W, W, I, Rrhd)` with
/// `a I x iff a != x` and `Rrhd` the complement of `R`. Every subset of `W`
/// is Galois-stable in the result, so its concept lattice is the powerset.
pub fn lift_kripke(frame: &KripkeFrame) -> Ctx {
    let n = frame.worlds.len();
    let incidence = Rel::identity(n).complement();
    let pol = Polarity::new(frame.worlds.clone(), frame.worlds.clone(), incidence);
    Ctx::Enriched(EnrichedContext::new(
        pol,
        None,
        None,
        Some(frame.rel.complement()),
    ))
}

/// Disjoint union of two frames. Names are kept when already disjoint and
/// prefixed `1.`/`2.` otherwise.
pub fn disjoint_union(f1: &KripkeFrame, f2: &KripkeFrame) -> KripkeFrame {
    let clash = f1.worlds.iter().any(|w| f2.worlds.contains(w));
    let tag = |k: usize, w: &str| {
        if clash {
            format!("{k}.{w}")
        } else {
            w.to_string()
        }
    };
    let mut worlds: Vec<String> = f1.worlds.iter().map(|w| tag(1, w)).collect();
    worlds.extend(f2.worlds.iter().map(|w| tag(2, w)));
    let n1 = f1.worlds.len();
    let n = worlds.len();
    let mut rel = Rel::empty(n, n);
    for (i, j) in f1.rel.pairs() {
        rel.set(i, j, true);
    }
    for (i, j) in f2.rel.pairs() {
        rel.set(n1 + i, n1 + j, true);
    }
    KripkeFrame { worlds, rel }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_lifting() {
        let f = KripkeFrame::new(vec!["w".into()], &[]);
        let ctx = lift_kripke(&f);
        assert_eq!(ctx.polarity().concepts().unwrap().len(), 2);
        match &ctx {
            Ctx::Enriched(c) => assert_eq!(c.polarity.incidence(), &Rel::empty(1, 1)),
            _ => unreachable!(),
        }
    }

    #[test]
    fn complement_relation() {
        let f = KripkeFrame::new(vec!["a1".into(), "b1".into()], &[(0, 1)]);
        let ctx = lift_kripke(&f);
        match &ctx {
            Ctx::Enriched(c) => {
                let rrhd = c.rrhd.as_ref().unwrap();
                assert_eq!(rrhd.pairs(), vec![(0, 0), (1, 0), (1, 1)]);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn powerset_concept_count() {
        for n in 1..=3 {
            let worlds: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
            let f = KripkeFrame::new(worlds, &[(0, 0)]);
            let ctx = lift_kripke(&f);
            assert_eq!(ctx.polarity().concepts().unwrap().len(), 1 << n);
        }
    }

    #[test]
    fn union_keeps_disjoint_names_and_tags_clashes() {
        let f1 = KripkeFrame::new(vec!["a1".into(), "b1".into()], &[(0, 1)]);
        let f2 = KripkeFrame::new(vec!["a2".into(), "b2".into()], &[(0, 1)]);
        let u = disjoint_union(&f1, &f2);
        assert_eq!(u.worlds, vec!["a1", "b1", "a2", "b2"]);
        assert_eq!(u.rel.pairs(), vec![(0, 1), (2, 3)]);

        let t = disjoint_union(&f1, &f1);
        assert_eq!(t.worlds, vec!["1.a1", "1.b1", "2.a1", "2.b1"]);
    }

    #[test]
    fn union_with_empty_frame() {
        let f1 = KripkeFrame::new(vec!["a1".into()], &[(0, 0)]);
        let empty = KripkeFrame::new(vec![], &[]);
        let u = disjoint_union(&f1, &empty);
        assert_eq!(u, f1);
    }
}
