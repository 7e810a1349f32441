//! Proof kernel, bounded prover, and finite-model harness for labelled
//! sequent calculi over enriched and rough formal contexts.
//!
//! The crate is organized around five modules:
//!
//! * [`syntax`] — formulas, sorted labels, relational terms, sequents, and
//!   their parsers and printers;
//! * [`semantics`] — polarities, concept lattices, I-compatibility, forcing,
//!   and validity of formula and labelled sequents on finite structures;
//! * [`calculus`] — the rule catalogue, schema matching with eigenvariable
//!   side conditions, and proof checking;
//! * [`prover`] — depth-bounded backward search producing checkable trees;
//! * [`analysis`] — finite enumeration, correspondence verification,
//!   countermodel search, and the rule soundness fuzzer.

pub mod analysis;
pub mod calculus;
pub mod prover;
pub mod semantics;
pub mod syntax;

pub use calculus::{check_node, check_proof, rule_schemas, Axiom, CalculusConfig, ProofNode, RuleError, RuleId};
pub use prover::{prove, SearchLimits, SearchOutcome};
pub use semantics::{Concept, ConceptLattice, Ctx, EnrichedContext, Polarity, Rel, RoughContext};
pub use syntax::{parse_formula, parse_sequent, Formula, Label, Sequent, SequentItem};
