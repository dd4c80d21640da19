use std::collections::BTreeSet;

use gssc_core::axioms::{check_unanimous, find_dictator_bruteforce, find_manipulation};
use gssc_core::enumerator::{enumerate_all, AxiomSet, SearchConfig};
use gssc_core::lemma::{find_dictator_via_proof, verify_trace, LemmaOutcome};
use gssc_core::prefcore::{factorial, Dims, LinearOrder, Profile};
use gssc_core::rules::{build_table, RuleKind, RuleSpec};
use proptest::prelude::*;

proptest! {
    #[test]
    fn order_index_round_trip(m in 3usize..=6, k in 0usize..720) {
        let k = k % factorial(m);
        let o = LinearOrder::from_index(k, m).unwrap();
        prop_assert_eq!(o.index(), k);
        let mut ids: Vec<u8> = o.ranking().iter().map(|a| a.0).collect();
        ids.sort_unstable();
        prop_assert_eq!(ids, (0..m as u8).collect::<Vec<_>>());
    }

    #[test]
    fn profile_index_round_trip(n in 1usize..=4, raw in 0usize..1296) {
        let dims = Dims::new(3, n).unwrap();
        let p = raw % dims.num_profiles();
        let x = Profile::from_index(p, dims).unwrap();
        prop_assert_eq!(x.index(), p);
        prop_assert_eq!(dims.encode(&x.order_indices()), p);
    }

    #[test]
    fn replace_coord_touches_one_voter(p in 0usize..216, voter in 0usize..3, o in 0usize..6) {
        let dims = Dims::new(3, 3).unwrap();
        let x = Profile::from_index(p, dims).unwrap();
        let y = x.replace_coord(voter, LinearOrder::from_index(o, 3).unwrap()).unwrap();
        let changed = x.differing_voters(&y);
        prop_assert!(changed.is_empty() || changed == vec![voter]);
    }

    #[test]
    fn random_tables_get_sound_verdicts(seed in any::<u64>(), unanimous in any::<bool>()) {
        let f = build_table(RuleSpec::new(RuleKind::Random { seed, unanimous }, 3, 2)).unwrap();
        if let Some(w) = find_manipulation(&f) {
            prop_assert!(w.validate(&f));
        }
        if let Some(v) = check_unanimous(&f) {
            prop_assert!(v.validate(&f));
        }
        match find_dictator_via_proof(&f).unwrap() {
            LemmaOutcome::Proved { conclusion, trace } => {
                prop_assert_eq!(find_dictator_bruteforce(&f), Some(conclusion));
                prop_assert!(verify_trace(&f, &trace).is_ok());
            }
            LemmaOutcome::Refuted(w) => prop_assert!(w.validate(&f)),
        }
    }
}

/// With two voters and three alternatives, a strategy-proof table has range
/// of size 1 (3 constants), 3 (the 2 dictatorships), or 2. A two-valued
/// strategy-proof table on {a, b} is a monotone non-constant Boolean function
/// of "voter i prefers a to b": one of the two projections, AND, or OR, so
/// 4 per pair.
#[test]
fn strategy_proof_tables_at_3_2() {
    let (tables, _) = enumerate_all(&SearchConfig::new(3, 2, AxiomSet::STP)).unwrap();
    assert_eq!(tables.len(), 3 + 2 + 3 * 4);
    let mut by_range = [0usize; 4];
    for f in &tables {
        assert!(find_manipulation(f).is_none());
        let range: BTreeSet<_> = f.entries().iter().collect();
        by_range[range.len()] += 1;
    }
    assert_eq!(by_range, [0, 3, 12, 2]);
}
