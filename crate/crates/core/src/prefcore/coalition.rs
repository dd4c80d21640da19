use std::fmt;

use serde::{Deserialize, Serialize};

use super::PrefError;

/// A set of voters, kept sorted. Members need not be contiguous.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coalition {
    members: Vec<usize>,
}

impl Coalition {
    pub fn new(mut members: Vec<usize>, n: usize) -> Result<Self, PrefError> {
        members.sort_unstable();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(PrefError::DuplicateMember { member: w[0] });
        }
        if let Some(&voter) = members.last().filter(|&&v| v >= n) {
            return Err(PrefError::VoterOutOfRange { voter, n });
        }
        Ok(Coalition { members })
    }

    /// All `n` voters.
    pub fn everyone(n: usize) -> Self {
        Coalition { members: (0..n).collect() }
    }

    pub fn singleton(voter: usize) -> Self {
        Coalition { members: vec![voter] }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, voter: usize) -> bool {
        self.members.binary_search(&voter).is_ok()
    }

    pub fn lowest(&self) -> Option<usize> {
        self.members.first().copied()
    }

    pub fn without(&self, voter: usize) -> Self {
        Coalition { members: self.members.iter().copied().filter(|&v| v != voter).collect() }
    }

    /// Voters in `0..n` outside the coalition, ascending.
    pub fn complement(&self, n: usize) -> Self {
        Coalition { members: (0..n).filter(|&v| !self.contains(v)).collect() }
    }

    pub fn is_within(&self, n: usize) -> bool {
        self.members.last().is_none_or(|&v| v < n)
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction() {
        let g = Coalition::new(vec![2, 0], 3).unwrap();
        assert_eq!(g.members(), &[0, 2]);
        assert_eq!(g.complement(3).members(), &[1]);
        assert_eq!(g.to_string(), "{0,2}");
        assert!(Coalition::new(vec![1, 1], 3).is_err());
        assert!(Coalition::new(vec![3], 3).is_err());
        assert_eq!(Coalition::everyone(3).without(1).members(), &[0, 2]);
    }
}
