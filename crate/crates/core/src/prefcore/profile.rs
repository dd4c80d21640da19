use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Alternative, Dims, LinearOrder, PrefError};

/// One linear order per voter, voter 0 first.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Profile {
    orders: Vec<LinearOrder>,
}

impl Profile {
    pub fn new(orders: Vec<LinearOrder>) -> Result<Self, PrefError> {
        let Some(first) = orders.first() else {
            return Err(PrefError::TooSmall { m: 0, n: 0 });
        };
        let m = first.m();
        if let Some(o) = orders.iter().find(|o| o.m() != m) {
            return Err(PrefError::DimensionMismatch {
                expected_m: m,
                expected_n: orders.len(),
                m: o.m(),
                n: orders.len(),
            });
        }
        Ok(Profile { orders })
    }

    /// Builds a profile from per-voter order indices.
    pub fn from_order_indices(indices: &[usize], m: usize) -> Result<Self, PrefError> {
        let orders = indices
            .iter()
            .map(|&k| LinearOrder::from_index(k, m))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(orders)
    }

    pub fn from_index(index: usize, dims: Dims) -> Result<Self, PrefError> {
        Self::from_order_indices(&dims.decode(index)?, dims.m())
    }

    pub fn n(&self) -> usize {
        self.orders.len()
    }

    pub fn m(&self) -> usize {
        self.orders[0].m()
    }

    pub fn orders(&self) -> &[LinearOrder] {
        &self.orders
    }

    pub fn order(&self, voter: usize) -> &LinearOrder {
        &self.orders[voter]
    }

    pub fn order_indices(&self) -> Vec<usize> {
        self.orders.iter().map(LinearOrder::index).collect()
    }

    /// Mixed-radix index, base `m!`, voter 0 least significant.
    pub fn index(&self) -> usize {
        let base = super::factorial(self.m());
        self.orders.iter().rev().fold(0, |acc, o| acc * base + o.index())
    }

    pub fn tops(&self) -> impl Iterator<Item = Alternative> + '_ {
        self.orders.iter().map(LinearOrder::top)
    }

    /// The alternative every voter ranks first, if there is one.
    pub fn common_top(&self) -> Option<Alternative> {
        let t = self.orders[0].top();
        self.tops().all(|x| x == t).then_some(t)
    }

    /// `(o, x_{-voter})`
    pub fn replace_coord(&self, voter: usize, o: LinearOrder) -> Result<Self, PrefError> {
        if voter >= self.n() {
            return Err(PrefError::VoterOutOfRange { voter, n: self.n() });
        }
        if o.m() != self.m() {
            return Err(PrefError::DimensionMismatch {
                expected_m: self.m(),
                expected_n: self.n(),
                m: o.m(),
                n: self.n(),
            });
        }
        let mut orders = self.orders.clone();
        orders[voter] = o;
        Ok(Profile { orders })
    }

    /// Voters whose orders differ between the two profiles.
    pub fn differing_voters(&self, other: &Profile) -> Vec<usize> {
        self.orders
            .iter()
            .zip(&other.orders)
            .enumerate()
            .filter_map(|(i, (a, b))| (a != b).then_some(i))
            .collect()
    }

    pub fn check_dims(&self, dims: Dims) -> Result<(), PrefError> {
        if self.m() != dims.m() || self.n() != dims.n() {
            return Err(PrefError::DimensionMismatch {
                expected_m: dims.m(),
                expected_n: dims.n(),
                m: self.m(),
                n: self.n(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, o) in self.orders.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{o}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
