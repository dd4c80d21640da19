//! Concrete rule tables used as positive and negative corpora.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::prefcore::{Alternative, Dims, LinearOrder, PrefError, ScfTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RuleKind {
    /// `f(x) = top(x_d)`
    Dictatorship(usize),
    /// `f(x) = a`
    Constant(Alternative),
    /// Most first places; ties to the smallest id.
    Plurality,
    /// Largest Borda score `Σ_i (m−1−rank_i(a))`; ties to the smallest id.
    Borda,
    /// Uniform random winners from a seeded stream. With `unanimous`, common
    /// top profiles are forced to their common top.
    Random { seed: u64, unanimous: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSpec {
    pub kind: RuleKind,
    pub m: usize,
    pub n: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RuleError {
    #[error("dictator {d} out of range for n={n}")]
    DictatorOutOfRange { d: usize, n: usize },
    #[error("constant {a} out of range for m={m}")]
    ConstantOutOfRange { a: Alternative, m: usize },
    #[error(transparent)]
    Pref(#[from] PrefError),
}

impl RuleSpec {
    pub fn new(kind: RuleKind, m: usize, n: usize) -> Self {
        RuleSpec { kind, m, n }
    }
}

impl fmt::Display for RuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RuleKind::Dictatorship(d) => write!(f, "dictatorship(d={d})")?,
            RuleKind::Constant(a) => write!(f, "constant(a={a})")?,
            RuleKind::Plurality => f.write_str("plurality")?,
            RuleKind::Borda => f.write_str("borda")?,
            RuleKind::Random { seed, unanimous } => {
                write!(f, "random(seed={seed}, unanimous={unanimous})")?
            }
        }
        write!(f, " m={} n={}", self.m, self.n)
    }
}

pub fn build_table(spec: RuleSpec) -> Result<ScfTable, RuleError> {
    build_table_in(spec, Dims::new(spec.m, spec.n)?)
}

/// Like [`build_table`] with caller-checked dimensions (e.g. a raised size
/// guard).
pub fn build_table_in(spec: RuleSpec, dims: Dims) -> Result<ScfTable, RuleError> {
    let m = dims.m();
    let n = dims.n();
    let table = match spec.kind {
        RuleKind::Dictatorship(d) => {
            if d >= n {
                return Err(RuleError::DictatorOutOfRange { d, n });
            }
            ScfTable::from_fn(dims, |x| x[d].top())?
        }
        RuleKind::Constant(a) => {
            if a.index() >= m {
                return Err(RuleError::ConstantOutOfRange { a, m });
            }
            ScfTable::from_fn(dims, |_| a)?
        }
        RuleKind::Plurality => ScfTable::from_fn(dims, |x| {
            let mut scores = vec![0usize; m];
            for o in x {
                scores[o.top().index()] += 1;
            }
            argmax_smallest(&scores)
        })?,
        RuleKind::Borda => ScfTable::from_fn(dims, |x| argmax_smallest(&borda_scores(x, m)))?,
        RuleKind::Random { seed, unanimous } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            ScfTable::from_fn(dims, |x| {
                let drawn = Alternative(rng.gen_range(0..m) as u8);
                if unanimous {
                    let t = x[0].top();
                    if x.iter().all(|o| o.top() == t) {
                        return t;
                    }
                }
                drawn
            })?
        }
    };
    Ok(table)
}

pub fn dictatorship(d: usize, m: usize, n: usize) -> Result<ScfTable, RuleError> {
    build_table(RuleSpec::new(RuleKind::Dictatorship(d), m, n))
}

pub fn constant(a: u8, m: usize, n: usize) -> Result<ScfTable, RuleError> {
    build_table(RuleSpec::new(RuleKind::Constant(Alternative(a)), m, n))
}

pub fn plurality(m: usize, n: usize) -> Result<ScfTable, RuleError> {
    build_table(RuleSpec::new(RuleKind::Plurality, m, n))
}

pub fn borda(m: usize, n: usize) -> Result<ScfTable, RuleError> {
    build_table(RuleSpec::new(RuleKind::Borda, m, n))
}

fn borda_scores(x: &[&LinearOrder], m: usize) -> Vec<usize> {
    let mut scores = vec![0usize; m];
    for o in x {
        for (pos, a) in o.ranking().iter().enumerate() {
            scores[a.index()] += m - 1 - pos;
        }
    }
    scores
}

fn argmax_smallest(scores: &[usize]) -> Alternative {
    let mut best = 0;
    for (a, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = a;
        }
    }
    Alternative(best as u8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prefcore::Profile;

    fn profile(orders: &[&[usize]]) -> Profile {
        Profile::new(orders.iter().map(|ids| LinearOrder::from_ids(ids).unwrap()).collect())
            .unwrap()
    }

    #[test]
    fn dictatorship_reads_dictator_top() {
        let t = dictatorship(1, 3, 2).unwrap();
        assert_eq!(t.eval(&profile(&[&[0, 1, 2], &[2, 0, 1]])).unwrap(), Alternative(2));
        let t = dictatorship(0, 3, 2).unwrap();
        assert_eq!(t.eval(&profile(&[&[1, 0, 2], &[2, 0, 1]])).unwrap(), Alternative(1));
    }

    #[test]
    fn constant_everywhere() {
        let t = constant(2, 3, 2).unwrap();
        assert!(t.entries().iter().all(|&a| a == Alternative(2)));
    }

    #[test]
    fn plurality_examples() {
        let t = plurality(3, 3).unwrap();
        let x = profile(&[&[0, 2, 1], &[0, 1, 2], &[1, 2, 0]]);
        assert_eq!(t.eval(&x).unwrap(), Alternative(0));
        // 1–1 tie between 0 and 1 goes to 0
        let t = plurality(3, 2).unwrap();
        assert_eq!(t.eval(&profile(&[&[0, 1, 2], &[1, 0, 2]])).unwrap(), Alternative(0));
    }

    #[test]
    fn borda_example() {
        // scores by hand: 0 → 2+0, 1 → 1+2, 2 → 0+1
        let t = borda(3, 2).unwrap();
        assert_eq!(t.eval(&profile(&[&[0, 1, 2], &[1, 2, 0]])).unwrap(), Alternative(1));
        // all three tie at 2 after voter 0 reports 0≻2≻1
        assert_eq!(t.eval(&profile(&[&[0, 2, 1], &[1, 2, 0]])).unwrap(), Alternative(0));
    }

    #[test]
    fn spec_errors() {
        assert_eq!(
            dictatorship(2, 3, 2).unwrap_err(),
            RuleError::DictatorOutOfRange { d: 2, n: 2 }
        );
        assert!(matches!(constant(3, 3, 2), Err(RuleError::ConstantOutOfRange { .. })));
        assert!(matches!(plurality(3, 10), Err(RuleError::Pref(PrefError::SizeGuard { .. }))));
    }

    #[test]
    fn random_tables_are_reproducible() {
        let spec = RuleSpec::new(RuleKind::Random { seed: 7, unanimous: true }, 3, 2);
        let a = build_table(spec).unwrap();
        let b = build_table(spec).unwrap();
        assert_eq!(a, b);
        let other = build_table(RuleSpec::new(RuleKind::Random { seed: 8, unanimous: true }, 3, 2));
        assert_ne!(a, other.unwrap());
    }

    #[test]
    fn permuting_voters_relabels_the_dictator() {
        let dims = Dims::new(3, 3).unwrap();
        // π sends voter v to position perm[v]
        let perm = [2usize, 0, 1];
        for d in 0..3 {
            let t = dictatorship(d, 3, 3).unwrap();
            let permuted = ScfTable::from_fn(dims, |x| {
                let mut orig = vec![0usize; 3];
                for v in 0..3 {
                    orig[v] = x[perm[v]].index();
                }
                t.eval_indices(&orig)
            })
            .unwrap();
            assert_eq!(permuted, dictatorship(perm[d], 3, 3).unwrap());
        }
    }
}
