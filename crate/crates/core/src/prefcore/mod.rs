//! Alternatives, strict linear orders, profiles, coalitions and social choice
//! tables, with their canonical integer encodings.
//!
//! Orders are numbered by the lexicographic rank of their top-first sequence
//! (Lehmer code). Profiles are numbered mixed-radix in base `m!` with voter 0
//! as the least significant digit, so
//! `profile_index(x) = Σ_i order_index(x_i) · (m!)^i`.

mod coalition;
mod order;
mod profile;
mod table;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use coalition::Coalition;
pub use order::{LinearOrder, OrderSpace};
pub use profile::Profile;
pub use table::ScfTable;

/// Largest number of table entries any construction may allocate.
pub const DEFAULT_SIZE_GUARD: u64 = 1 << 24;

/// A candidate outcome, identified by its 0-based id.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Alternative(pub u8);

impl Alternative {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrefError {
    #[error("need at least 3 alternatives and 1 voter, got m={m} n={n}")]
    TooSmall { m: usize, n: usize },
    #[error("(m!)^n = {entries} table entries for m={m} n={n} exceeds the size guard of {guard}")]
    SizeGuard { m: usize, n: usize, entries: u128, guard: u64 },
    #[error("{0:?} is not a permutation of 0..{len}", len = .0.len())]
    NotAPermutation(Vec<usize>),
    #[error("order index {index} out of range for m={m}")]
    OrderIndexOutOfRange { index: usize, m: usize },
    #[error("profile index {index} out of range for {total} profiles")]
    ProfileIndexOutOfRange { index: usize, total: usize },
    #[error("alternative {alt} out of range for m={m}")]
    AlternativeOutOfRange { alt: usize, m: usize },
    #[error("alternative {0} compared with itself")]
    SelfComparison(Alternative),
    #[error("voter {voter} out of range for n={n}")]
    VoterOutOfRange { voter: usize, n: usize },
    #[error("dimension mismatch: expected m={expected_m} n={expected_n}, got m={m} n={n}")]
    DimensionMismatch { expected_m: usize, expected_n: usize, m: usize, n: usize },
    #[error("table has {got} entries, expected {expected}")]
    TableLength { got: usize, expected: usize },
    #[error("coalition member {member} duplicated")]
    DuplicateMember { member: usize },
}

pub fn factorial(k: usize) -> usize {
    (1..=k).product()
}

/// Problem dimensions: `m` alternatives, `n` voters, already checked against
/// a size guard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dims {
    m: usize,
    n: usize,
}

impl Dims {
    pub fn new(m: usize, n: usize) -> Result<Self, PrefError> {
        Self::with_guard(m, n, DEFAULT_SIZE_GUARD)
    }

    pub fn with_guard(m: usize, n: usize, guard: u64) -> Result<Self, PrefError> {
        if m < 3 || n < 1 {
            return Err(PrefError::TooSmall { m, n });
        }
        let entries = table_entries(m, n);
        if entries > guard as u128 {
            return Err(PrefError::SizeGuard { m, n, entries, guard });
        }
        Ok(Dims { m, n })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `m!`
    pub fn num_orders(&self) -> usize {
        factorial(self.m)
    }

    /// `(m!)^n`
    pub fn num_profiles(&self) -> usize {
        self.num_orders().pow(self.n as u32)
    }

    pub fn alternatives(&self) -> impl Iterator<Item = Alternative> {
        (0..self.m).map(|a| Alternative(a as u8))
    }

    pub fn check_alt(&self, a: Alternative) -> Result<(), PrefError> {
        if a.index() >= self.m {
            Err(PrefError::AlternativeOutOfRange { alt: a.index(), m: self.m })
        } else {
            Ok(())
        }
    }

    pub fn check_voter(&self, voter: usize) -> Result<(), PrefError> {
        if voter >= self.n {
            Err(PrefError::VoterOutOfRange { voter, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Decodes a profile index into per-voter order indices.
    pub fn decode(&self, index: usize) -> Result<Vec<usize>, PrefError> {
        let total = self.num_profiles();
        if index >= total {
            return Err(PrefError::ProfileIndexOutOfRange { index, total });
        }
        let base = self.num_orders();
        let mut rest = index;
        Ok((0..self.n)
            .map(|_| {
                let d = rest % base;
                rest /= base;
                d
            })
            .collect())
    }

    /// Encodes per-voter order indices into a profile index.
    pub fn encode(&self, order_indices: &[usize]) -> usize {
        let base = self.num_orders();
        order_indices.iter().rev().fold(0, |acc, &k| acc * base + k)
    }
}

/// `(m!)^n` without overflow.
pub fn table_entries(m: usize, n: usize) -> u128 {
    let base = (1..=m as u128).product::<u128>();
    let mut acc: u128 = 1;
    for _ in 0..n {
        acc = acc.saturating_mul(base);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alt(a: u8) -> Alternative {
        Alternative(a)
    }

    fn order(ids: &[usize]) -> LinearOrder {
        LinearOrder::from_ids(ids).unwrap()
    }

    /// All permutations of 0..m in lexicographic order, by repeated
    /// next-permutation. Independent of the Lehmer-code path.
    fn lexicographic_permutations(m: usize) -> Vec<Vec<usize>> {
        let mut cur: Vec<usize> = (0..m).collect();
        let mut out = vec![cur.clone()];
        loop {
            let Some(i) = (0..m.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                return out;
            };
            let j = (i + 1..m).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
            out.push(cur.clone());
        }
    }

    #[test]
    fn order_index_examples() {
        assert_eq!(order(&[0, 1, 2]).index(), 0);
        assert_eq!(order(&[2, 1, 0]).index(), 5);
        let perms = lexicographic_permutations(3);
        let pos = perms.iter().position(|p| p == &vec![1, 0, 2]).unwrap();
        assert_eq!(pos, 2);
        assert_eq!(order(&[1, 0, 2]).index(), pos);
    }

    #[test]
    fn order_from_index_examples() {
        assert_eq!(LinearOrder::from_index(0, 3).unwrap(), order(&[0, 1, 2]));
        assert_eq!(LinearOrder::from_index(5, 3).unwrap(), order(&[2, 1, 0]));
        let perms = lexicographic_permutations(3);
        assert_eq!(perms[3], vec![1, 2, 0]);
        assert_eq!(LinearOrder::from_index(3, 3).unwrap(), order(&[1, 2, 0]));
        assert_eq!(
            LinearOrder::from_index(6, 3),
            Err(PrefError::OrderIndexOutOfRange { index: 6, m: 3 })
        );
    }

    #[test]
    fn lehmer_matches_enumeration_oracle() {
        for m in 3..=5 {
            let perms = lexicographic_permutations(m);
            assert_eq!(perms.len(), factorial(m));
            for (k, p) in perms.iter().enumerate() {
                let o = LinearOrder::from_index(k, m).unwrap();
                let ids: Vec<usize> = o.ranking().iter().map(|a| a.index()).collect();
                assert_eq!(&ids, p);
                assert_eq!(o.index(), k);
            }
        }
    }

    #[test]
    fn top_examples() {
        assert_eq!(order(&[1, 2, 0]).top(), alt(1));
        assert_eq!(order(&[0, 1, 2]).top(), alt(0));
        let o = LinearOrder::from_index(4, 3).unwrap();
        assert_eq!(o, order(&[2, 0, 1]));
        assert_eq!(o.top(), alt(2));
    }

    #[test]
    fn prefers_examples() {
        assert_eq!(order(&[0, 1, 2]).prefers(alt(0), alt(2)), Ok(true));
        assert_eq!(order(&[0, 1, 2]).prefers(alt(2), alt(0)), Ok(false));
        assert_eq!(order(&[1, 2, 0]).prefers(alt(2), alt(0)), Ok(true));
        assert_eq!(
            order(&[0, 1, 2]).prefers(alt(1), alt(1)),
            Err(PrefError::SelfComparison(alt(1)))
        );
    }

    #[test]
    fn move_to_top_examples() {
        assert_eq!(order(&[1, 2, 0]).move_to_top(alt(0)).unwrap(), order(&[0, 1, 2]));
        assert_eq!(order(&[0, 1, 2]).move_to_top(alt(0)).unwrap(), order(&[0, 1, 2]));
        assert_eq!(order(&[2, 1, 0]).move_to_top(alt(1)).unwrap(), order(&[1, 2, 0]));
    }

    #[test]
    fn swap_pair_examples() {
        assert_eq!(order(&[0, 1, 2]).swap_pair(alt(0), alt(1)).unwrap(), order(&[1, 0, 2]));
        assert_eq!(order(&[0, 1, 2]).swap_pair(alt(0), alt(2)).unwrap(), order(&[2, 1, 0]));
        assert!(order(&[0, 1, 2]).swap_pair(alt(2), alt(2)).is_err());
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(LinearOrder::from_ids(&[0, 0, 1]).is_err());
        assert!(LinearOrder::from_ids(&[0, 1, 3]).is_err());
    }

    #[test]
    fn prefers_is_complete_asymmetric_and_transitive_at_m4() {
        let space = OrderSpace::new(4);
        let alts: Vec<Alternative> = (0..4).map(alt).collect();
        for o in space.orders() {
            for &a in &alts {
                for &b in &alts {
                    if a == b {
                        continue;
                    }
                    assert!(o.prefers(a, b).unwrap() ^ o.prefers(b, a).unwrap());
                    for &c in &alts {
                        if c == a || c == b {
                            continue;
                        }
                        if o.beats(a, b) && o.beats(b, c) {
                            assert!(o.beats(a, c));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dims_guard() {
        assert!(Dims::new(3, 9).is_ok());
        assert!(matches!(Dims::new(3, 10), Err(PrefError::SizeGuard { .. })));
        assert!(matches!(Dims::new(2, 3), Err(PrefError::TooSmall { .. })));
        assert!(Dims::with_guard(3, 3, 215).is_err());
        assert_eq!(Dims::new(3, 2).unwrap().num_profiles(), 36);
    }

    #[test]
    fn order_space_with_top() {
        let space = OrderSpace::new(3);
        assert_eq!(space.with_top(alt(1)), &[2, 3]);
        for a in 0..3u8 {
            for &k in space.with_top(alt(a)) {
                assert_eq!(space.order(k).top(), alt(a));
            }
        }
    }
}
