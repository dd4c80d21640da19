use std::fmt;
use std::sync::Arc;

use super::{Alternative, Dims, LinearOrder, OrderSpace, PrefError, Profile};

/// A social choice function given extensionally: one winner per profile,
/// indexed by profile index. Immutable once built.
#[derive(Clone)]
pub struct ScfTable {
    dims: Dims,
    entries: Arc<[Alternative]>,
    space: Arc<OrderSpace>,
}

impl ScfTable {
    pub fn from_entries(dims: Dims, entries: Vec<Alternative>) -> Result<Self, PrefError> {
        Self::with_space(dims, entries, Arc::new(OrderSpace::new(dims.m())))
    }

    /// Reuses an existing order space for `dims.m()`.
    pub fn with_space(
        dims: Dims,
        entries: Vec<Alternative>,
        space: Arc<OrderSpace>,
    ) -> Result<Self, PrefError> {
        assert_eq!(space.m(), dims.m(), "order space built for a different m");
        if entries.len() != dims.num_profiles() {
            return Err(PrefError::TableLength {
                got: entries.len(),
                expected: dims.num_profiles(),
            });
        }
        if let Some(bad) = entries.iter().find(|a| a.index() >= dims.m()) {
            return Err(PrefError::AlternativeOutOfRange { alt: bad.index(), m: dims.m() });
        }
        Ok(ScfTable { dims, entries: entries.into(), space })
    }

    /// Fills a table by calling `rule` on every profile in index order.
    pub fn from_fn<F>(dims: Dims, mut rule: F) -> Result<Self, PrefError>
    where
        F: FnMut(&[&LinearOrder]) -> Alternative,
    {
        let space = Arc::new(OrderSpace::new(dims.m()));
        let mut entries = Vec::with_capacity(dims.num_profiles());
        let mut digits = vec![0usize; dims.n()];
        let mut orders: Vec<&LinearOrder> = vec![space.order(0); dims.n()];
        for _ in 0..dims.num_profiles() {
            entries.push(rule(&orders));
            // mixed-radix increment, voter 0 fastest
            for (v, d) in digits.iter_mut().enumerate() {
                *d += 1;
                if *d < space.len() {
                    orders[v] = space.order(*d);
                    break;
                }
                *d = 0;
                orders[v] = space.order(0);
            }
        }
        Self::with_space(dims, entries, space)
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn m(&self) -> usize {
        self.dims.m()
    }

    pub fn n(&self) -> usize {
        self.dims.n()
    }

    pub fn space(&self) -> &OrderSpace {
        &self.space
    }

    pub fn shared_space(&self) -> Arc<OrderSpace> {
        Arc::clone(&self.space)
    }

    pub fn entries(&self) -> &[Alternative] {
        &self.entries
    }

    /// Winner at a profile index. Panics when out of range.
    #[inline]
    pub fn at(&self, profile_index: usize) -> Alternative {
        self.entries[profile_index]
    }

    pub fn eval(&self, x: &Profile) -> Result<Alternative, PrefError> {
        x.check_dims(self.dims)?;
        Ok(self.entries[x.index()])
    }

    /// Winner at the profile given by per-voter order indices.
    pub fn eval_indices(&self, order_indices: &[usize]) -> Alternative {
        self.entries[self.dims.encode(order_indices)]
    }
}

impl PartialEq for ScfTable {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims && self.entries == other.entries
    }
}

impl Eq for ScfTable {}

impl fmt::Debug for ScfTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScfTable")
            .field("m", &self.m())
            .field("n", &self.n())
            .field("entries", &self.entries.len())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_fn_visits_profiles_in_index_order() {
        let dims = Dims::new(3, 2).unwrap();
        let mut seen = Vec::new();
        let t = ScfTable::from_fn(dims, |orders| {
            let idx: Vec<usize> = orders.iter().map(|o| o.index()).collect();
            seen.push(dims.encode(&idx));
            orders[1].top()
        })
        .unwrap();
        assert_eq!(seen, (0..36).collect::<Vec<_>>());
        let x = Profile::from_order_indices(&[0, 5], 3).unwrap();
        assert_eq!(t.eval(&x).unwrap(), Alternative(2));
    }

    #[test]
    fn rejects_bad_entries() {
        let dims = Dims::new(3, 1).unwrap();
        assert!(ScfTable::from_entries(dims, vec![Alternative(0); 5]).is_err());
        assert!(ScfTable::from_entries(dims, vec![Alternative(3); 6]).is_err());
        let t = ScfTable::from_entries(dims, vec![Alternative(0); 6]).unwrap();
        let wrong = Profile::from_index(0, Dims::new(3, 2).unwrap()).unwrap();
        assert!(matches!(t.eval(&wrong), Err(PrefError::DimensionMismatch { .. })));
    }
}
