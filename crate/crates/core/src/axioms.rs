//! Exhaustive checkers for unanimity, strategy-proofness, decisiveness and
//! dictatorship. Every finder returns the lowest counterexample in its scan
//! order, so results are reproducible.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::prefcore::{Alternative, Coalition, Dims, LinearOrder, PrefError, Profile, ScfTable};

/// Voter `voter` at profile `profile_index` gains by reporting the order
/// `misreport_order_index` instead of their sincere one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ManipulationWitness {
    pub profile_index: usize,
    pub voter: usize,
    pub misreport_order_index: usize,
    pub sincere_outcome: Alternative,
    pub manipulated_outcome: Alternative,
}

/// Every voter ranks `common_top` first but the table picks `outcome`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnanimityViolation {
    pub profile_index: usize,
    pub common_top: Alternative,
    pub outcome: Alternative,
}

/// `alternative` tops every member of `coalition` but the table picks
/// `outcome`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DecisivenessViolation {
    pub coalition: Coalition,
    pub alternative: Alternative,
    pub profile_index: usize,
    pub outcome: Alternative,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("coalition is empty")]
    EmptyCoalition,
    #[error("coalition {coalition} has members outside 0..{n}")]
    CoalitionOutOfRange { coalition: Coalition, n: usize },
    #[error(transparent)]
    Pref(#[from] PrefError),
}

impl ManipulationWitness {
    /// Re-evaluates the witness against `f` under the definition.
    pub fn validate(&self, f: &ScfTable) -> bool {
        let dims = f.dims();
        let Ok(x) = Profile::from_index(self.profile_index, dims) else {
            return false;
        };
        let Ok(o) = LinearOrder::from_index(self.misreport_order_index, dims.m()) else {
            return false;
        };
        let Ok(y) = x.replace_coord(self.voter, o.clone()) else {
            return false;
        };
        f.at(self.profile_index) == self.sincere_outcome
            && f.at(y.index()) == self.manipulated_outcome
            && matches!(is_manipulable_at(f, &x, self.voter, &o), Ok(true))
    }

    /// The manipulated profile `(x'_i, x_{-i})`.
    pub fn misreport_profile_index(&self, dims: Dims) -> usize {
        let mut digits = dims.decode(self.profile_index).expect("witness profile in range");
        digits[self.voter] = self.misreport_order_index;
        dims.encode(&digits)
    }
}

impl UnanimityViolation {
    pub fn validate(&self, f: &ScfTable) -> bool {
        let Ok(x) = Profile::from_index(self.profile_index, f.dims()) else {
            return false;
        };
        x.common_top() == Some(self.common_top)
            && f.at(self.profile_index) == self.outcome
            && self.outcome != self.common_top
    }
}

impl DecisivenessViolation {
    pub fn validate(&self, f: &ScfTable) -> bool {
        let Ok(x) = Profile::from_index(self.profile_index, f.dims()) else {
            return false;
        };
        self.coalition.is_within(f.n())
            && self.coalition.members().iter().all(|&i| x.order(i).top() == self.alternative)
            && f.at(self.profile_index) == self.outcome
            && self.outcome != self.alternative
    }
}

impl fmt::Display for ManipulationWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "profile {} voter {} misreport order {}: outcome {} -> {}",
            self.profile_index,
            self.voter,
            self.misreport_order_index,
            self.sincere_outcome,
            self.manipulated_outcome
        )
    }
}

impl fmt::Display for UnanimityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "profile {} common top {} outcome {}",
            self.profile_index, self.common_top, self.outcome
        )
    }
}

impl fmt::Display for DecisivenessViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "coalition {} alternative {} profile {} outcome {}",
            self.coalition, self.alternative, self.profile_index, self.outcome
        )
    }
}

/// Walks the product of per-voter order choices in ascending profile index
/// order and returns the first index for which `visit` yields `Some`.
pub(crate) fn scan_product<T>(
    dims: Dims,
    choices: &[&[usize]],
    mut visit: impl FnMut(usize) -> Option<T>,
) -> Option<T> {
    debug_assert_eq!(choices.len(), dims.n());
    if choices.iter().any(|c| c.is_empty()) {
        return None;
    }
    let base = dims.num_orders();
    let mut weights = Vec::with_capacity(dims.n());
    let mut w = 1;
    for _ in 0..dims.n() {
        weights.push(w);
        w *= base;
    }
    let mut pos = vec![0usize; dims.n()];
    let mut index: usize = choices.iter().zip(&weights).map(|(c, w)| c[0] * w).sum();
    loop {
        if let Some(found) = visit(index) {
            return Some(found);
        }
        let mut v = 0;
        loop {
            if v == dims.n() {
                return None;
            }
            index -= choices[v][pos[v]] * weights[v];
            pos[v] += 1;
            if pos[v] < choices[v].len() {
                index += choices[v][pos[v]] * weights[v];
                break;
            }
            pos[v] = 0;
            index += choices[v][0] * weights[v];
            v += 1;
        }
    }
}

/// First profile (by index) where all voters share a top that the table does
/// not pick.
pub fn check_unanimous(f: &ScfTable) -> Option<UnanimityViolation> {
    let dims = f.dims();
    dims.alternatives()
        .filter_map(|a| {
            let tops = f.space().with_top(a);
            let choices = vec![tops; dims.n()];
            scan_product(dims, &choices, |k| {
                (f.at(k) != a).then_some(UnanimityViolation {
                    profile_index: k,
                    common_top: a,
                    outcome: f.at(k),
                })
            })
        })
        .min_by_key(|v| v.profile_index)
}

/// Whether voter `i` at `x` strictly prefers, under `x_i`, the outcome of
/// reporting `o` over the sincere outcome.
pub fn is_manipulable_at(
    f: &ScfTable,
    x: &Profile,
    i: usize,
    o: &LinearOrder,
) -> Result<bool, PrefError> {
    x.check_dims(f.dims())?;
    f.dims().check_voter(i)?;
    let sincere = f.eval(x)?;
    let manipulated = f.eval(&x.replace_coord(i, o.clone())?)?;
    Ok(x.order(i).beats(manipulated, sincere))
}

/// The lexicographically smallest `(profile, voter, misreport)` manipulation,
/// or `None` when the table is strategy-proof.
pub fn find_manipulation(f: &ScfTable) -> Option<ManipulationWitness> {
    let dims = f.dims();
    let base = dims.num_orders();
    let space = f.space();
    let mut digits = vec![0usize; dims.n()];
    for k in 0..dims.num_profiles() {
        let sincere = f.at(k);
        let mut weight = 1;
        for (voter, &own) in digits.iter().enumerate() {
            let order = space.order(own);
            let row = k - own * weight;
            for mis in 0..base {
                let manipulated = f.at(row + mis * weight);
                if order.beats(manipulated, sincere) {
                    return Some(ManipulationWitness {
                        profile_index: k,
                        voter,
                        misreport_order_index: mis,
                        sincere_outcome: sincere,
                        manipulated_outcome: manipulated,
                    });
                }
            }
            weight *= base;
        }
        for d in digits.iter_mut() {
            *d += 1;
            if *d < base {
                break;
            }
            *d = 0;
        }
    }
    None
}

fn check_coalition(f: &ScfTable, g: &Coalition) -> Result<(), AxiomError> {
    if g.is_empty() {
        return Err(AxiomError::EmptyCoalition);
    }
    if !g.is_within(f.n()) {
        return Err(AxiomError::CoalitionOutOfRange { coalition: g.clone(), n: f.n() });
    }
    Ok(())
}

/// Scans only the profiles where `a` tops every member of `g`, returning the
/// first one whose outcome is not `a`.
pub fn is_decisive_over(
    f: &ScfTable,
    g: &Coalition,
    a: Alternative,
) -> Result<Option<DecisivenessViolation>, AxiomError> {
    check_coalition(f, g)?;
    f.dims().check_alt(a)?;
    let dims = f.dims();
    let all: Vec<usize> = (0..dims.num_orders()).collect();
    let tops = f.space().with_top(a);
    let choices: Vec<&[usize]> =
        (0..dims.n()).map(|v| if g.contains(v) { tops } else { &all[..] }).collect();
    Ok(scan_product(dims, &choices, |k| {
        (f.at(k) != a).then(|| DecisivenessViolation {
            coalition: g.clone(),
            alternative: a,
            profile_index: k,
            outcome: f.at(k),
        })
    }))
}

/// First violation over alternatives in ascending order, if any.
pub fn decisiveness_violation(
    f: &ScfTable,
    g: &Coalition,
) -> Result<Option<DecisivenessViolation>, AxiomError> {
    for a in f.dims().alternatives() {
        if let Some(v) = is_decisive_over(f, g, a)? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

pub fn is_decisive(f: &ScfTable, g: &Coalition) -> Result<bool, AxiomError> {
    Ok(decisiveness_violation(f, g)?.is_none())
}

/// The voter whose top the table always returns, if any.
pub fn find_dictator_bruteforce(f: &ScfTable) -> Option<usize> {
    let dims = f.dims();
    let space = f.space();
    let mut candidates: Vec<usize> = (0..dims.n()).collect();
    let mut digits = vec![0usize; dims.n()];
    for k in 0..dims.num_profiles() {
        let w = f.at(k);
        candidates.retain(|&d| space.order(digits[d]).top() == w);
        if candidates.is_empty() {
            return None;
        }
        for d in digits.iter_mut() {
            *d += 1;
            if *d < dims.num_orders() {
                break;
            }
            *d = 0;
        }
    }
    debug_assert!(candidates.len() <= 1);
    candidates.first().copied()
}

/// Unanimity and strategy-proofness together.
pub fn is_unm_and_stp(f: &ScfTable) -> bool {
    check_unanimous(f).is_none() && find_manipulation(f).is_none()
}
