//! Independent checker for proof traces. It reads each step's recorded
//! orders, evaluates the table, and checks the local fact the step's
//! justification asserts. It never replays the constructions that produced
//! the trace.

use std::fmt;

use thiserror::Error;

use super::trace::{Justification, ProofTrace, TraceStep};
use crate::prefcore::{Alternative, LinearOrder, ScfTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step}: {reason}")]
pub struct TraceFailure {
    /// Index of the first failing step; `usize::MAX` for whole-trace issues.
    pub step: usize,
    pub reason: String,
}

impl TraceFailure {
    fn at(step: usize, reason: impl fmt::Display) -> Self {
        TraceFailure { step, reason: reason.to_string() }
    }
}

pub fn verify_trace(f: &ScfTable, t: &ProofTrace) -> Result<(), TraceFailure> {
    if t.m != f.m() || t.n != f.n() {
        return Err(TraceFailure::at(
            usize::MAX,
            format!("trace is for m={} n={}, table is m={} n={}", t.m, t.n, f.m(), f.n()),
        ));
    }
    if t.steps.is_empty() {
        return Err(TraceFailure::at(usize::MAX, "empty trace"));
    }
    let mut decoded: Vec<Vec<LinearOrder>> = Vec::with_capacity(t.steps.len());
    for (k, step) in t.steps.iter().enumerate() {
        let orders = decode_step(f, k, step)?;
        check_step(f, t, &decoded, k, step, &orders)?;
        decoded.push(orders);
    }
    Ok(())
}

fn decode_step(f: &ScfTable, k: usize, step: &TraceStep) -> Result<Vec<LinearOrder>, TraceFailure> {
    if step.orders.len() != f.n() {
        return Err(TraceFailure::at(k, format!("{} orders for n={}", step.orders.len(), f.n())));
    }
    let orders = step
        .orders
        .iter()
        .map(|&o| LinearOrder::from_index(o, f.m()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| TraceFailure::at(k, e))?;
    let index = f.dims().encode(&step.orders);
    if index != step.profile_index {
        return Err(TraceFailure::at(
            k,
            format!("profile index {} does not encode orders {:?}", step.profile_index, step.orders),
        ));
    }
    Ok(orders)
}

fn check_step(
    f: &ScfTable,
    t: &ProofTrace,
    prev: &[Vec<LinearOrder>],
    k: usize,
    step: &TraceStep,
    orders: &[LinearOrder],
) -> Result<(), TraceFailure> {
    let actual = f.at(step.profile_index);
    if actual != step.outcome {
        return Err(TraceFailure::at(
            k,
            format!("recorded outcome {} but the table gives {actual}", step.outcome),
        ));
    }

    let anchored = k == 0 || step.justification.is_anchor();
    if !anchored {
        let before = &prev[k - 1];
        let changed: Vec<usize> =
            (0..f.n()).filter(|&v| before[v] != orders[v]).collect();
        if changed.len() > 1 {
            return Err(TraceFailure::at(k, format!("voters {changed:?} changed at once")));
        }
        if let Some(&v) = changed.first() {
            if step.changed_voter != Some(v) {
                return Err(TraceFailure::at(
                    k,
                    format!("voter {v} changed but changed_voter is {:?}", step.changed_voter),
                ));
            }
        }
    }

    match step.justification {
        Justification::Initial => {}
        Justification::StpStep => {
            if k == 0 {
                return Err(TraceFailure::at(k, "STP step without a predecessor"));
            }
            let before = &prev[k - 1];
            let w = t.steps[k - 1].outcome;
            let v = step.outcome;
            if let Some(i) = (0..f.n()).find(|&i| before[i] != orders[i]) {
                if before[i].beats(v, w) {
                    return Err(TraceFailure::at(
                        k,
                        format!("voter {i} gains {w} -> {v} by misreporting at step {}", k - 1),
                    ));
                }
                if orders[i].beats(w, v) {
                    return Err(TraceFailure::at(
                        k,
                        format!("voter {i} gains {v} -> {w} by misreporting here"),
                    ));
                }
            }
        }
        Justification::UnmApplication => {
            let t0 = orders[0].top();
            if orders.iter().any(|o| o.top() != t0) {
                return Err(TraceFailure::at(k, "unanimity cited without a common top"));
            }
            if step.outcome != t0 {
                return Err(TraceFailure::at(
                    k,
                    format!("common top {t0} but outcome {}", step.outcome),
                ));
            }
        }
        Justification::Lemma1Ref => {
            if step.claim.len() != 2 || step.claim[0] == step.claim[1] {
                return Err(TraceFailure::at(k, "tops-only reference needs two alternatives"));
            }
            if let Some(v) = (0..f.n()).find(|&v| !step.claim.contains(&orders[v].top())) {
                return Err(TraceFailure::at(
                    k,
                    format!("voter {v} tops {} outside {:?}", orders[v].top(), step.claim),
                ));
            }
        }
        Justification::Lemma2Ref => {
            let [a] = step.claim[..] else {
                return Err(TraceFailure::at(k, "extension reference needs one alternative"));
            };
            let Some(g) = &step.coalition else {
                return Err(TraceFailure::at(k, "extension reference without a coalition"));
            };
            if g.is_empty() || !g.is_within(f.n()) {
                return Err(TraceFailure::at(k, format!("bad coalition {g}")));
            }
            for (v, o) in orders.iter().enumerate() {
                let ok = if g.contains(v) { o.top() == a } else { o.bottom() == a };
                if !ok {
                    return Err(TraceFailure::at(
                        k,
                        format!("voter {v} does not rank {a} {}", if g.contains(v) { "first" } else { "last" }),
                    ));
                }
            }
        }
        Justification::Dichotomy => check_dichotomy(t, k, step)?,
    }

    if step.justification != Justification::Dichotomy
        && !step.claim.is_empty()
        && !step.claim.contains(&step.outcome)
    {
        return Err(TraceFailure::at(
            k,
            format!("outcome {} outside claimed {:?}", step.outcome, step.claim),
        ));
    }
    Ok(())
}

fn check_dichotomy(t: &ProofTrace, k: usize, step: &TraceStep) -> Result<(), TraceFailure> {
    let (&[y, z], &[b, a]) = (&step.refs[..], &step.claim[..]) else {
        return Err(TraceFailure::at(k, "dichotomy needs two refs and claim [b, a]"));
    };
    if y >= k || z >= k {
        return Err(TraceFailure::at(k, "dichotomy refers forward"));
    }
    let first: Alternative = t.steps[y].outcome;
    let second: Alternative = t.steps[z].outcome;
    let sa = first == b;
    let sb = second == a;
    if sa == sb {
        return Err(TraceFailure::at(
            k,
            format!("statements f(y^k)={b} and f(z^N)={a} are both {sa}"),
        ));
    }
    let (src, want) = if sa { (y, b) } else { (z, a) };
    if t.steps[src].profile_index != step.profile_index || step.outcome != want {
        return Err(TraceFailure::at(
            k,
            format!("dichotomy must resume from step {src} with outcome {want}"),
        ));
    }
    Ok(())
}
