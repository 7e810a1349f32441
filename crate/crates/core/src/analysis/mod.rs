//! Finite-model enumeration, correspondence verification, countermodel
//! search, Kripke liftings, and the rule soundness fuzzer.

pub mod correspond;
pub mod enumerate;
pub mod kripke;
pub mod soundness;

pub use correspond::{
    correspondence_sampled, correspondence_suite, countermodel, CorrespondenceReport,
    Countermodel, CountermodelGoal, ItemReport,
};
pub use enumerate::{
    sample_context,
    enumerate_contexts, enumerate_equivalences, enumerate_polarities, i_compatible_rels,
    ContextSignature, FrameClass,
};
pub use kripke::{disjoint_union, lift_kripke, KripkeFrame};
pub use soundness::{icompat_violation_witness, soundness_fuzz, FuzzReport};
