use std::fmt;

use serde::{Deserialize, Serialize};

use super::{factorial, Alternative, PrefError};

/// A strict ranking of `m` alternatives, top first.
///
/// The ranking is stored together with its inverse so that pairwise
/// comparisons are a single lookup. Completeness, transitivity and asymmetry
/// all follow from the ranking being a permutation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearOrder {
    ranking: Vec<Alternative>,
    rank: Vec<u8>,
}

impl LinearOrder {
    /// Builds an order from a top-first sequence, rejecting anything that is
    /// not a permutation of `0..len`.
    pub fn new(ranking: Vec<Alternative>) -> Result<Self, PrefError> {
        let m = ranking.len();
        let mut rank = vec![u8::MAX; m];
        for (pos, alt) in ranking.iter().enumerate() {
            let a = alt.index();
            if a >= m || rank[a] != u8::MAX {
                return Err(PrefError::NotAPermutation(
                    ranking.iter().map(|a| a.index()).collect(),
                ));
            }
            rank[a] = pos as u8;
        }
        Ok(LinearOrder { ranking, rank })
    }

    /// Convenience constructor from raw ids.
    pub fn from_ids(ids: &[usize]) -> Result<Self, PrefError> {
        if ids.iter().any(|&a| a > u8::MAX as usize) {
            return Err(PrefError::NotAPermutation(ids.to_vec()));
        }
        Self::new(ids.iter().map(|&a| Alternative(a as u8)).collect())
    }

    /// The identity order `0 ≻ 1 ≻ … ≻ m−1`.
    pub fn identity(m: usize) -> Self {
        let ranking = (0..m).map(|a| Alternative(a as u8)).collect();
        let rank = (0..m).map(|a| a as u8).collect();
        LinearOrder { ranking, rank }
    }

    pub fn m(&self) -> usize {
        self.ranking.len()
    }

    pub fn ranking(&self) -> &[Alternative] {
        &self.ranking
    }

    /// Position of `a`, 0 being the top.
    pub fn rank_of(&self, a: Alternative) -> usize {
        self.rank[a.index()] as usize
    }

    pub fn top(&self) -> Alternative {
        self.ranking[0]
    }

    pub fn bottom(&self) -> Alternative {
        self.ranking[self.ranking.len() - 1]
    }

    /// `a ≻ b` under this order. Comparing an alternative with itself is an
    /// error since the relation is asymmetric.
    pub fn prefers(&self, a: Alternative, b: Alternative) -> Result<bool, PrefError> {
        self.check_alt(a)?;
        self.check_alt(b)?;
        if a == b {
            return Err(PrefError::SelfComparison(a));
        }
        Ok(self.beats(a, b))
    }

    /// Unchecked `a ≻ b`; false when `a == b`.
    #[inline]
    pub fn beats(&self, a: Alternative, b: Alternative) -> bool {
        self.rank[a.index()] < self.rank[b.index()]
    }

    /// Removes `a` and reinserts it at the top, keeping everything else in
    /// relative order.
    pub fn move_to_top(&self, a: Alternative) -> Result<Self, PrefError> {
        self.check_alt(a)?;
        let mut ranking = Vec::with_capacity(self.m());
        ranking.push(a);
        ranking.extend(self.ranking.iter().copied().filter(|&x| x != a));
        Self::new(ranking)
    }

    /// Exchanges the positions of `a` and `b`.
    pub fn swap_pair(&self, a: Alternative, b: Alternative) -> Result<Self, PrefError> {
        self.check_alt(a)?;
        self.check_alt(b)?;
        if a == b {
            return Err(PrefError::SelfComparison(a));
        }
        let mut ranking = self.ranking.clone();
        ranking.swap(self.rank_of(a), self.rank_of(b));
        Self::new(ranking)
    }

    /// Lexicographic rank of the ranking among all `m!` permutations, via the
    /// Lehmer code.
    pub fn index(&self) -> usize {
        let m = self.m();
        let mut idx = 0;
        for pos in 0..m {
            let a = self.ranking[pos];
            let smaller_later = self.ranking[pos + 1..].iter().filter(|&&x| x < a).count();
            idx += smaller_later * factorial(m - 1 - pos);
        }
        idx
    }

    /// Inverse of [`LinearOrder::index`].
    pub fn from_index(k: usize, m: usize) -> Result<Self, PrefError> {
        let total = factorial(m);
        if k >= total {
            return Err(PrefError::OrderIndexOutOfRange { index: k, m });
        }
        let mut pool: Vec<Alternative> = (0..m).map(|a| Alternative(a as u8)).collect();
        let mut ranking = Vec::with_capacity(m);
        let mut rest = k;
        for pos in 0..m {
            let f = factorial(m - 1 - pos);
            let digit = rest / f;
            rest %= f;
            ranking.push(pool.remove(digit));
        }
        Self::new(ranking)
    }

    fn check_alt(&self, a: Alternative) -> Result<(), PrefError> {
        if a.index() >= self.m() {
            Err(PrefError::AlternativeOutOfRange { alt: a.index(), m: self.m() })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for LinearOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.ranking.iter().enumerate() {
            if i > 0 {
                f.write_str("≻")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LinearOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl Serialize for LinearOrder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.ranking.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinearOrder {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let ranking = Vec::<Alternative>::deserialize(d)?;
        LinearOrder::new(ranking).map_err(serde::de::Error::custom)
    }
}

/// Every order over `m` alternatives, materialized in index order.
///
/// Shared by the checkers and the search so that evaluating a profile never
/// has to decode a Lehmer code.
#[derive(Debug, Clone)]
pub struct OrderSpace {
    m: usize,
    orders: Vec<LinearOrder>,
    with_top: Vec<Vec<usize>>,
}

impl OrderSpace {
    pub fn new(m: usize) -> Self {
        let count = factorial(m);
        let orders: Vec<LinearOrder> = (0..count)
            .map(|k| LinearOrder::from_index(k, m).expect("index below m!"))
            .collect();
        let mut with_top = vec![Vec::with_capacity(count / m.max(1)); m];
        for (k, o) in orders.iter().enumerate() {
            with_top[o.top().index()].push(k);
        }
        OrderSpace { m, orders, with_top }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn order(&self, k: usize) -> &LinearOrder {
        &self.orders[k]
    }

    pub fn orders(&self) -> &[LinearOrder] {
        &self.orders
    }

    /// Indices of the orders whose top is `a`, ascending.
    pub fn with_top(&self, a: Alternative) -> &[usize] {
        &self.with_top[a.index()]
    }
}
