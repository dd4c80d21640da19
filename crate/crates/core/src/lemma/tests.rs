use super::*;
use crate::axioms::{find_dictator_bruteforce, is_manipulable_at};
use crate::prefcore::{Dims, LinearOrder};
use crate::rules::{borda, build_table, constant, dictatorship, plurality, RuleKind, RuleSpec};

fn alt(a: u8) -> Alternative {
    Alternative(a)
}

fn order(ids: &[usize]) -> LinearOrder {
    LinearOrder::from_ids(ids).unwrap()
}

fn profile(orders: &[&[usize]]) -> Profile {
    Profile::new(orders.iter().map(|ids| order(ids)).collect()).unwrap()
}

fn coalition(members: &[usize], n: usize) -> Coalition {
    Coalition::new(members.to_vec(), n).unwrap()
}

fn assert_sound<T: std::fmt::Debug>(f: &ScfTable, out: &LemmaOutcome<T>) {
    match out {
        LemmaOutcome::Proved { trace, .. } => {
            verify_trace(f, trace).unwrap();
            assert!(trace.dichotomies().all(|d| d.exactly_one()));
        }
        LemmaOutcome::Refuted(w) => assert!(w.validate(f), "witness {w} does not validate"),
    }
}

#[test]
fn partition_examples() {
    let x = profile(&[&[0, 1, 2], &[1, 0, 2]]);
    let (ga, gb) = partition_by_top(&x, alt(0), alt(1)).unwrap();
    assert_eq!((ga.members(), gb.members()), (&[0][..], &[1][..]));

    let x = profile(&[&[0, 1, 2], &[0, 2, 1]]);
    let (ga, gb) = partition_by_top(&x, alt(0), alt(1)).unwrap();
    assert_eq!(ga, Coalition::everyone(2));
    assert!(gb.is_empty());

    let x = profile(&[&[1, 0, 2], &[0, 1, 2], &[1, 2, 0]]);
    let (ga, gb) = partition_by_top(&x, alt(0), alt(1)).unwrap();
    assert_eq!((ga.members(), gb.members()), (&[1][..], &[0, 2][..]));

    let x = profile(&[&[2, 0, 1], &[0, 1, 2]]);
    assert_eq!(
        partition_by_top(&x, alt(0), alt(1)),
        Err(LemmaError::Premise(PremiseFailure::TopOutside { voter: 0, top: alt(2) }))
    );
}

#[test]
fn tops_only_on_dictatorship() {
    let f = dictatorship(0, 3, 2).unwrap();
    let x = profile(&[&[0, 1, 2], &[1, 0, 2]]);
    let out = lemma_tops_only(&f, &x, alt(0), alt(1)).unwrap();
    assert_eq!(out.conclusion(), Some(&alt(0)));
    let trace = out.trace().unwrap();
    verify_trace(&f, trace).unwrap();
    // every recorded outcome is voter 0's top in the recorded profile
    for step in &trace.steps {
        let top = LinearOrder::from_index(step.orders[0], 3).unwrap().top();
        assert_eq!(step.outcome, top);
    }
    let d = trace.dichotomies().next().unwrap();
    assert!(d.exactly_one());
}

#[test]
fn tops_only_common_top_uses_unanimity() {
    let f = dictatorship(1, 3, 3).unwrap();
    let x = profile(&[&[2, 0, 1], &[2, 1, 0], &[2, 0, 1]]);
    let out = lemma_tops_only(&f, &x, alt(2), alt(0)).unwrap();
    let trace = out.trace().unwrap();
    assert_eq!(trace.steps.len(), 2);
    assert_eq!(trace.steps[1].justification, Justification::UnmApplication);
    assert_eq!(out.conclusion(), Some(&alt(2)));
}

#[test]
fn tops_only_finds_reversal_manipulation() {
    // dictatorship(0) except the two-block profile x' picks 2
    let base = dictatorship(0, 3, 2).unwrap();
    let xp = profile(&[&[0, 1, 2], &[1, 0, 2]]);
    let mut entries = base.entries().to_vec();
    entries[xp.index()] = alt(2);
    let f = ScfTable::from_entries(base.dims(), entries).unwrap();

    let out = lemma_tops_only(&f, &xp, alt(0), alt(1)).unwrap();
    let Some(Witness::Manipulation(w)) = out.witness() else {
        panic!("expected a manipulation, got {out:?}");
    };
    assert_eq!(w.profile_index, xp.index());
    assert_eq!(w.voter, 0);
    let mis = LinearOrder::from_index(w.misreport_order_index, 3).unwrap();
    assert_eq!(mis, order(&[1, 0, 2]));
    assert!(is_manipulable_at(&f, &xp, 0, &mis).unwrap());
}

#[test]
fn tops_only_rejects_bad_premise() {
    let f = dictatorship(0, 3, 2).unwrap();
    let x = profile(&[&[2, 1, 0], &[1, 0, 2]]);
    assert!(matches!(
        lemma_tops_only(&f, &x, alt(0), alt(1)),
        Err(LemmaError::Premise(PremiseFailure::TopOutside { voter: 0, .. }))
    ));
}

#[test]
fn tops_only_returns_unanimity_violation_first() {
    let f = constant(0, 3, 2).unwrap();
    let x = profile(&[&[0, 1, 2], &[1, 0, 2]]);
    let out = lemma_tops_only(&f, &x, alt(0), alt(1)).unwrap();
    assert!(matches!(out.witness(), Some(Witness::Unanimity(_))));
    assert_sound(&f, &out);
}

#[test]
fn extension_examples() {
    let x = profile(&[&[0, 1, 2], &[1, 2, 0]]);
    let g = coalition(&[0], 2);
    let f = dictatorship(0, 3, 2).unwrap();
    let out = lemma_extension(&f, &g, &x, alt(0)).unwrap();
    assert_eq!(out.conclusion(), Some(&g));
    assert_sound(&f, &out);

    let f = dictatorship(1, 3, 2).unwrap();
    assert_eq!(
        lemma_extension(&f, &g, &x, alt(0)),
        Err(LemmaError::Premise(PremiseFailure::OutcomeMismatch { expected: alt(0), got: alt(1) }))
    );
}

#[test]
fn extension_premise_positions_are_reported() {
    let f = dictatorship(0, 3, 2).unwrap();
    let g = coalition(&[0], 2);
    let x = profile(&[&[1, 0, 2], &[1, 2, 0]]);
    assert_eq!(
        lemma_extension(&f, &g, &x, alt(0)),
        Err(LemmaError::Premise(PremiseFailure::NotTop { voter: 0, alt: alt(0), position: 1 }))
    );
    let x = profile(&[&[0, 1, 2], &[1, 0, 2]]);
    assert_eq!(
        lemma_extension(&f, &g, &x, alt(0)),
        Err(LemmaError::Premise(PremiseFailure::NotBottom { voter: 1, alt: alt(0), position: 1 }))
    );
}

#[test]
fn extension_on_plurality() {
    let f = plurality(3, 2).unwrap();
    let g = coalition(&[0], 2);
    // with 1 first for voter 0 and last for voter 1 the tie goes to 0
    let x = profile(&[&[1, 0, 2], &[0, 2, 1]]);
    assert_eq!(f.eval(&x).unwrap(), alt(0));
    assert_eq!(
        lemma_extension(&f, &g, &x, alt(1)),
        Err(LemmaError::Premise(PremiseFailure::OutcomeMismatch { expected: alt(1), got: alt(0) }))
    );
    // with 0 first for voter 0 and last for voter 1 plurality does pick 0;
    // {0} is not decisive over 1, so the lemma yields a manipulation
    let x = profile(&[&[0, 1, 2], &[1, 2, 0]]);
    assert_eq!(f.eval(&x).unwrap(), alt(0));
    let out = lemma_extension(&f, &g, &x, alt(0)).unwrap();
    assert!(matches!(out.witness(), Some(Witness::Manipulation(_))));
    assert_sound(&f, &out);
}

#[test]
fn extension_with_noncontiguous_coalition() {
    let f = dictatorship(2, 3, 3).unwrap();
    let g = coalition(&[0, 2], 3);
    let x = profile(&[&[1, 0, 2], &[0, 2, 1], &[1, 2, 0]]);
    let out = lemma_extension(&f, &g, &x, alt(1)).unwrap();
    assert_eq!(out.conclusion(), Some(&g));
    assert_sound(&f, &out);
}

#[test]
fn decisive_over_examples() {
    for d in 0..3 {
        let f = dictatorship(d, 3, 3).unwrap();
        let out = decisive_over_implies_decisive(&f, &Coalition::singleton(d), alt(0)).unwrap();
        assert_eq!(out.conclusion(), Some(&Coalition::singleton(d)));
        assert_sound(&f, &out);
    }
    for f in [plurality(3, 2).unwrap(), borda(3, 2).unwrap(), dictatorship(1, 3, 2).unwrap()] {
        let out = decisive_over_implies_decisive(&f, &Coalition::everyone(2), alt(0)).unwrap();
        assert_eq!(out.conclusion(), Some(&Coalition::everyone(2)));
        assert_sound(&f, &out);
    }
    let f = dictatorship(0, 3, 2).unwrap();
    let err = decisive_over_implies_decisive(&f, &Coalition::singleton(1), alt(0)).unwrap_err();
    let LemmaError::Premise(PremiseFailure::NotDecisive(v)) = err else {
        panic!("expected a decisiveness violation, got {err:?}");
    };
    assert!(v.validate(&f));
}

#[test]
fn contraction_examples() {
    let g = Coalition::everyone(2);
    let f = dictatorship(0, 3, 2).unwrap();
    let out = lemma_contraction(&f, &g).unwrap();
    assert_eq!(out.conclusion(), Some(&Coalition::singleton(0)));
    assert_sound(&f, &out);

    let f = dictatorship(1, 3, 2).unwrap();
    let out = lemma_contraction(&f, &g).unwrap();
    assert_eq!(out.conclusion(), Some(&Coalition::singleton(1)));
    assert_sound(&f, &out);

    let f = dictatorship(2, 3, 3).unwrap();
    let err = lemma_contraction(&f, &coalition(&[0, 1], 3)).unwrap_err();
    let LemmaError::Premise(PremiseFailure::NotDecisive(v)) = err else {
        panic!("expected a decisiveness violation, got {err:?}");
    };
    assert!(v.validate(&f));

    assert_eq!(
        lemma_contraction(&f, &Coalition::singleton(2)),
        Err(LemmaError::Premise(PremiseFailure::CoalitionTooSmall { len: 1 }))
    );
}

#[test]
fn contraction_branch_shapes() {
    // pivot is the dictator: singleton branch; otherwise G minus the pivot
    for d in 0..4 {
        let f = dictatorship(d, 3, 4).unwrap();
        let g = coalition(&[0, 1, 3], 4);
        let res = lemma_contraction(&f, &g);
        if g.contains(d) {
            let out = res.unwrap();
            let want = if d == 0 { Coalition::singleton(0) } else { coalition(&[1, 3], 4) };
            assert_eq!(out.conclusion(), Some(&want), "dictator {d}");
            assert_sound(&f, &out);
        } else {
            assert!(matches!(res, Err(LemmaError::Premise(PremiseFailure::NotDecisive(_)))));
        }
    }
}

#[test]
fn contraction_with_custom_roles() {
    let f = dictatorship(1, 4, 2).unwrap();
    let roles = Roles { a: alt(3), b: alt(0), c: alt(2) };
    let out = LemmaEngine::new(&f).roles(roles).contraction(&Coalition::everyone(2)).unwrap();
    assert_eq!(out.conclusion(), Some(&Coalition::singleton(1)));
    assert_sound(&f, &out);
    let bad = Roles { a: alt(1), b: alt(1), c: alt(2) };
    assert!(matches!(
        LemmaEngine::new(&f).roles(bad).contraction(&Coalition::everyone(2)),
        Err(LemmaError::Premise(PremiseFailure::RolesNotDistinct { .. }))
    ));
}

#[test]
fn dictator_examples() {
    let f = dictatorship(3, 3, 5).unwrap();
    let out = find_dictator_via_proof(&f).unwrap();
    assert_eq!(out.conclusion(), Some(&3));
    assert_eq!(find_dictator_bruteforce(&f), Some(3));
    assert_sound(&f, &out);

    let f = borda(3, 2).unwrap();
    let out = find_dictator_via_proof(&f).unwrap();
    assert!(matches!(out.witness(), Some(Witness::Manipulation(_))));
    assert_sound(&f, &out);

    let f = constant(0, 3, 2).unwrap();
    let out = find_dictator_via_proof(&f).unwrap();
    assert!(matches!(out.witness(), Some(Witness::Unanimity(_))));
    assert_sound(&f, &out);
}

#[test]
fn tampered_traces_are_rejected() {
    let f = dictatorship(0, 3, 3).unwrap();
    let trace = find_dictator_via_proof(&f).unwrap().trace().unwrap().clone();
    verify_trace(&f, &trace).unwrap();

    let mut flipped = trace.clone();
    let k = flipped.steps.len() / 2;
    flipped.steps[k].outcome = Alternative((flipped.steps[k].outcome.0 + 1) % 3);
    assert_eq!(verify_trace(&f, &flipped).unwrap_err().step, k);

    // replay against another dictator: fails exactly at the first step whose
    // recorded outcome the other table disagrees with
    let other = dictatorship(1, 3, 3).unwrap();
    let first_divergent = trace
        .steps
        .iter()
        .position(|s| other.at(s.profile_index) != s.outcome)
        .unwrap();
    assert_eq!(verify_trace(&other, &trace).unwrap_err().step, first_divergent);

    let mut wrong_dims = trace.clone();
    wrong_dims.n = 2;
    assert!(verify_trace(&f, &wrong_dims).is_err());

    let mut jump = trace.clone();
    let k = jump.steps.iter().position(|s| s.justification == Justification::StpStep).unwrap();
    let orders: Vec<usize> = jump.steps[k].orders.iter().map(|o| (o + 1) % 6).collect();
    jump.steps[k].profile_index = f.dims().encode(&orders);
    jump.steps[k].outcome = f.at(jump.steps[k].profile_index);
    jump.steps[k].orders = orders;
    assert_eq!(verify_trace(&f, &jump).unwrap_err().step, k);
}

#[test]
fn soundness_on_random_tables() {
    let dims = Dims::new(3, 2).unwrap();
    for seed in 0..40 {
        let spec = RuleSpec::new(RuleKind::Random { seed, unanimous: seed % 2 == 0 }, 3, 2);
        let f = build_table(spec).unwrap();
        assert_sound(&f, &find_dictator_via_proof(&f).unwrap());
        let g = Coalition::everyone(2);
        let mut assume = LemmaEngine::new(&f).premises(PremiseMode::Assume);
        assert_sound(&f, &assume.contraction(&g).unwrap());
        for k in (0..dims.num_profiles()).step_by(5) {
            let x = Profile::from_index(k, dims).unwrap();
            let a = x.order(0).top();
            let b = x.order(1).top();
            let b = if a == b { Alternative((a.0 + 1) % 3) } else { b };
            let out = LemmaEngine::new(&f).premises(PremiseMode::Assume).tops_only(&x, a, b).unwrap();
            assert_sound(&f, &out);
        }
    }
}

#[test]
fn seeded_completion_gives_same_subset() {
    for d in 0..3 {
        let f = dictatorship(d, 4, 3).unwrap();
        let g = Coalition::everyone(3);
        let canonical = lemma_contraction(&f, &g).unwrap();
        for seed in 0..5 {
            let out = LemmaEngine::new(&f).seeded_completion(seed).contraction(&g).unwrap();
            assert_eq!(out.conclusion(), canonical.conclusion());
            assert_sound(&f, &out);
        }
    }
}

#[test]
fn trace_json_round_trip_keeps_validity() {
    let f = dictatorship(1, 3, 3).unwrap();
    let trace = find_dictator_via_proof(&f).unwrap().trace().unwrap().clone();
    let text = serde_json::to_string(&trace).unwrap();
    let back: ProofTrace = serde_json::from_str(&text).unwrap();
    assert_eq!(back, trace);
    verify_trace(&f, &back).unwrap();
}
