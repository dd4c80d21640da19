//! Verification workbench for finite social choice functions: definitional
//! checkers for unanimity, strategy-proofness and dictatorship, constructive
//! lemma procedures that emit checkable proof traces, and an exhaustive
//! propagation-pruned search over all rule tables at small sizes.

pub mod axioms;
pub mod prefcore;
pub mod rules;
pub mod lemma;
pub mod enumerator;
