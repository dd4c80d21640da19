//! Constructive versions of the tops-only, extension and contraction lemmas.
//!
//! Each procedure replays its argument on concrete profiles of a given table.
//! When the table is unanimous and strategy-proof the argument goes through
//! and the procedure returns its conclusion together with a [`ProofTrace`]
//! that [`verify_trace`] accepts. When it is not, the first step at which the
//! argument would need an axiom the table violates yields a definitional
//! witness instead.

mod engine;
mod trace;
mod verify;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use engine::{LemmaEngine, PremiseMode, Roles};
pub use trace::{DichotomyRecord, Justification, LemmaTag, ProofTrace, TraceParams, TraceStep};
pub use verify::{verify_trace, TraceFailure};

use crate::axioms::{
    AxiomError, DecisivenessViolation, ManipulationWitness, UnanimityViolation,
};
use crate::prefcore::{Alternative, Coalition, PrefError, Profile, ScfTable};

/// A counterexample to one of the two axioms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    Manipulation(ManipulationWitness),
    Unanimity(UnanimityViolation),
}

impl Witness {
    pub fn validate(&self, f: &ScfTable) -> bool {
        match self {
            Witness::Manipulation(w) => w.validate(f),
            Witness::Unanimity(v) => v.validate(f),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Manipulation(w) => write!(f, "manipulation: {w}"),
            Witness::Unanimity(v) => write!(f, "unanimity violation: {v}"),
        }
    }
}

/// Either the lemma's conclusion with its trace, or a witness that the table
/// violates an axiom the lemma relies on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LemmaOutcome<T> {
    Proved { conclusion: T, trace: ProofTrace },
    Refuted(Witness),
}

impl<T> LemmaOutcome<T> {
    pub fn conclusion(&self) -> Option<&T> {
        match self {
            LemmaOutcome::Proved { conclusion, .. } => Some(conclusion),
            LemmaOutcome::Refuted(_) => None,
        }
    }

    pub fn trace(&self) -> Option<&ProofTrace> {
        match self {
            LemmaOutcome::Proved { trace, .. } => Some(trace),
            LemmaOutcome::Refuted(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            LemmaOutcome::Refuted(w) => Some(w),
            LemmaOutcome::Proved { .. } => None,
        }
    }
}

/// A lemma was invoked on input that does not meet its hypotheses.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PremiseFailure {
    #[error("voter {voter} ranks {top} first, outside the pair")]
    TopOutside { voter: usize, top: Alternative },
    #[error("the pair needs two distinct alternatives, got {0} twice")]
    SameAlternatives(Alternative),
    #[error("voter {voter} is in the coalition but ranks {alt} at position {position}, not first")]
    NotTop { voter: usize, alt: Alternative, position: usize },
    #[error("voter {voter} is outside the coalition but ranks {alt} at position {position}, not last")]
    NotBottom { voter: usize, alt: Alternative, position: usize },
    #[error("the table picks {got} at the premise profile, not {expected}")]
    OutcomeMismatch { expected: Alternative, got: Alternative },
    #[error("coalition is empty")]
    EmptyCoalition,
    #[error("coalition {coalition} has members outside the voter set")]
    CoalitionOutOfRange { coalition: Coalition },
    #[error("contraction needs at least 2 members, got {len}")]
    CoalitionTooSmall { len: usize },
    #[error("coalition is not decisive: {0}")]
    NotDecisive(DecisivenessViolation),
    #[error("roles a={a} b={b} c={c} are not distinct")]
    RolesNotDistinct { a: Alternative, b: Alternative, c: Alternative },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LemmaError {
    #[error("premise not met: {0}")]
    Premise(#[from] PremiseFailure),
    #[error(transparent)]
    Pref(#[from] PrefError),
    #[error(transparent)]
    Axiom(#[from] AxiomError),
    /// The construction stalled on a unanimous, strategy-proof table. Never
    /// expected; reported rather than hidden.
    #[error("proof construction stalled: {0}")]
    ProofGap(String),
}

/// Splits the voters into those ranking `a` first and those ranking `b`
/// first.
pub fn partition_by_top(
    x: &Profile,
    a: Alternative,
    b: Alternative,
) -> Result<(Coalition, Coalition), LemmaError> {
    if a == b {
        return Err(PremiseFailure::SameAlternatives(a).into());
    }
    let mut ga = Vec::new();
    let mut gb = Vec::new();
    for (voter, top) in x.tops().enumerate() {
        if top == a {
            ga.push(voter);
        } else if top == b {
            gb.push(voter);
        } else {
            return Err(PremiseFailure::TopOutside { voter, top }.into());
        }
    }
    Ok((Coalition::new(ga, x.n())?, Coalition::new(gb, x.n())?))
}

pub fn lemma_tops_only(
    f: &ScfTable,
    x: &Profile,
    a: Alternative,
    b: Alternative,
) -> Result<LemmaOutcome<Alternative>, LemmaError> {
    LemmaEngine::new(f).tops_only(x, a, b)
}

pub fn lemma_extension(
    f: &ScfTable,
    g: &Coalition,
    x: &Profile,
    a: Alternative,
) -> Result<LemmaOutcome<Coalition>, LemmaError> {
    LemmaEngine::new(f).extension(g, x, a)
}

pub fn decisive_over_implies_decisive(
    f: &ScfTable,
    g: &Coalition,
    a: Alternative,
) -> Result<LemmaOutcome<Coalition>, LemmaError> {
    LemmaEngine::new(f).decisive_over_implies_decisive(g, a)
}

pub fn lemma_contraction(f: &ScfTable, g: &Coalition) -> Result<LemmaOutcome<Coalition>, LemmaError> {
    LemmaEngine::new(f).contraction(g)
}

/// Starts from the full voter set and contracts until one voter is left.
pub fn find_dictator_via_proof(f: &ScfTable) -> Result<LemmaOutcome<usize>, LemmaError> {
    LemmaEngine::new(f).dictator()
}

#[cfg(test)]
mod tests;
