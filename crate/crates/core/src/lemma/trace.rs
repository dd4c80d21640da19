use std::fmt;

use serde::{Deserialize, Serialize};

use crate::prefcore::{Alternative, Coalition};

/// Why a step's outcome is what the argument needs it to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Justification {
    /// Starts a new chain segment; no relation to the previous step.
    Initial,
    /// One voter changed their report and neither direction of the change is
    /// a profitable misreport.
    StpStep,
    /// Every voter ranks the outcome first.
    UnmApplication,
    /// All tops lie in the two-element claim, and so does the outcome.
    Lemma1Ref,
    /// The claimed alternative tops every coalition member, is ranked last by
    /// everyone else, and wins.
    Lemma2Ref,
    /// Resolves the two-statement case split of the tops-only argument. See
    /// [`TraceStep::refs`].
    Dichotomy,
}

impl Justification {
    /// Segment anchors are exempt from the one-coordinate adjacency rule.
    pub fn is_anchor(self) -> bool {
        matches!(self, Justification::Initial | Justification::Dichotomy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LemmaTag {
    TopsOnly,
    Extension,
    Contraction,
    Dictator,
}

impl fmt::Display for LemmaTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LemmaTag::TopsOnly => "TOPS_ONLY",
            LemmaTag::Extension => "EXTENSION",
            LemmaTag::Contraction => "CONTRACTION",
            LemmaTag::Dictator => "DICTATOR",
        })
    }
}

/// One evaluated profile in a proof trace.
///
/// `orders` holds the full per-voter order indices so a checker never has to
/// replay the construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub profile_index: usize,
    pub orders: Vec<usize>,
    pub outcome: Alternative,
    pub justification: Justification,
    pub changed_voter: Option<usize>,
    /// Outcomes the argument allows at this step; empty when unconstrained.
    /// For `DICHOTOMY` it is `[b, a]`: statement (a) reads
    /// `outcome(refs[0]) == b`, statement (b) reads `outcome(refs[1]) == a`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub claim: Vec<Alternative>,
    /// The coalition of a `LEMMA2_REF` premise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coalition: Option<Coalition>,
    /// Earlier step indices this step depends on (`DICHOTOMY` only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub refs: Vec<usize>,
    pub note: String,
}

/// Roles and coalition a trace was built for.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coalition: Option<Coalition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Alternative>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Alternative>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Alternative>,
    /// The distinguished member whose order is built differently from the
    /// rest of the coalition when contracting.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pivot: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofTrace {
    pub lemma: LemmaTag,
    pub m: usize,
    pub n: usize,
    pub params: TraceParams,
    pub steps: Vec<TraceStep>,
    pub conclusion: String,
}

impl ProofTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The recorded `(f(y^k), f(z^N))` pair of every dichotomy step, with the
    /// `(b, a)` values the two statements compare against.
    pub fn dichotomies(&self) -> impl Iterator<Item = DichotomyRecord> + '_ {
        self.steps.iter().filter(|s| s.justification == Justification::Dichotomy).filter_map(
            |s| {
                let (&y, &z) = (s.refs.first()?, s.refs.get(1)?);
                Some(DichotomyRecord {
                    y_outcome: self.steps.get(y)?.outcome,
                    z_outcome: self.steps.get(z)?.outcome,
                    b: *s.claim.first()?,
                    a: *s.claim.get(1)?,
                })
            },
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DichotomyRecord {
    pub y_outcome: Alternative,
    pub z_outcome: Alternative,
    pub a: Alternative,
    pub b: Alternative,
}

impl DichotomyRecord {
    /// Exactly one of `f(y^k) = b` and `f(z^N) = a`.
    pub fn exactly_one(&self) -> bool {
        (self.y_outcome == self.b) != (self.z_outcome == self.a)
    }
}
