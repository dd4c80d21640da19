//! Exhaustive search for every rule table satisfying a chosen subset of
//! {unanimity, strategy-proofness}.
//!
//! Variables are profiles in index order, values are alternatives in
//! ascending order, so solutions come out in lexicographic table order.
//! Unanimity fixes every common-top profile up front. Strategy-proofness is
//! the binary constraint between single-voter neighbours `x` and
//! `y = (x'_i, x_{-i})`: with `w = f(x)` and `v = f(y)`, neither
//! `v ≻_{x_i} w` nor `w ≻_{x'_i} v`. After each assignment the constraint is
//! forward-checked against every later neighbour; a wiped-out domain
//! backtracks.

use std::collections::BTreeMap;
use std::ops::ControlFlow;
use std::sync::Arc;
use std::thread;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::axioms::find_dictator_bruteforce;
use crate::lemma::{find_dictator_via_proof, verify_trace, LemmaError, LemmaOutcome};
use crate::prefcore::{table_entries, Alternative, Dims, OrderSpace, PrefError, ScfTable};
use crate::rules::dictatorship;

/// Largest `(m!)^n` the search accepts by default.
pub const DEFAULT_MAX_PROFILES: usize = 1296;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct AxiomSet {
    pub unm: bool,
    pub stp: bool,
}

impl AxiomSet {
    pub const BOTH: AxiomSet = AxiomSet { unm: true, stp: true };
    pub const STP: AxiomSet = AxiomSet { unm: false, stp: true };
    pub const UNM: AxiomSet = AxiomSet { unm: true, stp: false };

    pub fn is_empty(&self) -> bool {
        !self.unm && !self.stp
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub m: usize,
    pub n: usize,
    pub axioms: AxiomSet,
    pub solution_limit: Option<usize>,
    pub worker_count: usize,
    /// Forward checking on; off only to cross-check the pruning.
    pub propagate: bool,
    pub max_profiles: usize,
}

impl SearchConfig {
    pub fn new(m: usize, n: usize, axioms: AxiomSet) -> Self {
        SearchConfig {
            m,
            n,
            axioms,
            solution_limit: None,
            worker_count: 1,
            propagate: true,
            max_profiles: DEFAULT_MAX_PROFILES,
        }
    }

    pub fn with_limit(mut self, limit: Option<usize>) -> Self {
        self.solution_limit = limit;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.worker_count = workers.max(1);
        self
    }

    pub fn without_propagation(mut self) -> Self {
        self.propagate = false;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub prunes_by_stp: u64,
    pub prunes_by_unm: u64,
    pub solutions_found: u64,
}

impl SearchStats {
    fn absorb(&mut self, other: &SearchStats) {
        self.nodes_expanded += other.nodes_expanded;
        self.prunes_by_stp += other.prunes_by_stp;
        self.prunes_by_unm += other.prunes_by_unm;
        self.solutions_found += other.solutions_found;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("no axioms selected")]
    NoAxioms,
    #[error("(m!)^n = {profiles} profiles for m={m} n={n} exceeds the search cap of {cap}")]
    TooLarge { m: usize, n: usize, profiles: u128, cap: usize },
    #[error(transparent)]
    Pref(#[from] PrefError),
    #[error(transparent)]
    Lemma(#[from] LemmaError),
}

/// Streams every solution to `sink` in lexicographic table order. The sink
/// may stop the search early.
pub fn enumerate_scfs<F>(cfg: &SearchConfig, mut sink: F) -> Result<SearchStats, SearchError>
where
    F: FnMut(ScfTable) -> ControlFlow<()>,
{
    let (dims, space, solutions, mut stats) = search(cfg)?;
    let mut emitted = 0;
    for entries in solutions {
        emitted += 1;
        let table = ScfTable::with_space(dims, entries, Arc::clone(&space))?;
        if sink(table).is_break() {
            break;
        }
    }
    stats.solutions_found = emitted;
    Ok(stats)
}

/// Collects every solution.
pub fn enumerate_all(cfg: &SearchConfig) -> Result<(Vec<ScfTable>, SearchStats), SearchError> {
    let mut out = Vec::new();
    let stats = enumerate_scfs(cfg, |t| {
        out.push(t);
        ControlFlow::Continue(())
    })?;
    Ok((out, stats))
}

/// Outcome of checking every unanimous, strategy-proof table for a dictator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DictatorshipReport {
    pub solutions: usize,
    /// One entry per solution, in emission order; `None` when neither method
    /// found a dictator.
    pub dictators: Vec<Option<usize>>,
    /// Both methods agreed, every proof trace verified, and every solution
    /// equals the dictatorship table of its dictator.
    pub all_agree: bool,
    /// Every dictatorship table for these dimensions was emitted.
    pub complete: bool,
    pub stats: SearchStats,
}

impl DictatorshipReport {
    pub fn holds(&self) -> bool {
        self.all_agree && self.complete && self.dictators.iter().all(Option::is_some)
    }

    /// Dictators sorted ascending, as a multiset.
    pub fn dictator_multiset(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.dictators.iter().flatten().copied().collect();
        d.sort_unstable();
        d
    }
}

pub fn verify_all_dictatorial(cfg: &SearchConfig) -> Result<DictatorshipReport, SearchError> {
    let cfg = SearchConfig { axioms: AxiomSet::BOTH, ..cfg.clone() };
    let (tables, stats) = enumerate_all(&cfg)?;
    let mut dictators = Vec::with_capacity(tables.len());
    let mut all_agree = true;
    for f in &tables {
        let brute = find_dictator_bruteforce(f);
        let proof = match find_dictator_via_proof(f)? {
            LemmaOutcome::Proved { conclusion, trace } => {
                all_agree &= verify_trace(f, &trace).is_ok();
                Some(conclusion)
            }
            LemmaOutcome::Refuted(_) => None,
        };
        all_agree &= brute == proof && brute.is_some();
        if let Some(d) = brute {
            all_agree &= dictatorship(d, cfg.m, cfg.n).is_ok_and(|t| &t == f);
        }
        dictators.push(brute.or(proof));
    }
    let complete = (0..cfg.n).all(|d| {
        dictatorship(d, cfg.m, cfg.n).is_ok_and(|t| tables.contains(&t))
    });
    Ok(DictatorshipReport { solutions: tables.len(), dictators, all_agree, complete, stats })
}

/// Groups solutions by dictator for summaries.
pub fn dictator_counts(report: &DictatorshipReport) -> BTreeMap<usize, usize> {
    let mut counts = BTreeMap::new();
    for d in report.dictators.iter().flatten() {
        *counts.entry(*d).or_insert(0) += 1;
    }
    counts
}

type Solutions = Vec<Vec<Alternative>>;

fn search(cfg: &SearchConfig) -> Result<(Dims, Arc<OrderSpace>, Solutions, SearchStats), SearchError> {
    if cfg.axioms.is_empty() {
        return Err(SearchError::NoAxioms);
    }
    let profiles = table_entries(cfg.m, cfg.n);
    if profiles > cfg.max_profiles as u128 {
        return Err(SearchError::TooLarge { m: cfg.m, n: cfg.n, profiles, cap: cfg.max_profiles });
    }
    let dims = Dims::new(cfg.m, cfg.n)?;
    let model = Arc::new(Model::new(dims, cfg.axioms));
    let mut root = Solver::new(Arc::clone(&model), cfg);
    let mut stats = SearchStats::default();

    // forced prefix, then fan out over the first real choice
    let mut var = 0;
    while var < model.profiles && root.domains[var].count_ones() == 1 {
        let w = root.domains[var].trailing_zeros() as u8;
        if !root.assign(var, w) {
            stats.absorb(&root.take_stats());
            return Ok((dims, Arc::clone(&model.space), Vec::new(), stats));
        }
        var += 1;
    }
    if var == model.profiles {
        stats.absorb(&root.take_stats());
        stats.solutions_found = 1;
        let sol = root.assignment.iter().map(|&a| Alternative(a)).collect();
        return Ok((dims, Arc::clone(&model.space), vec![sol], stats));
    }
    stats.absorb(&root.take_stats());

    let values: Vec<u8> = bits(root.domains[var]).collect();
    let workers = cfg.worker_count.clamp(1, values.len());
    let mut results: Vec<Option<(Solutions, SearchStats)>> = vec![None; values.len()];
    let run_branch = |w: u8| {
        let mut s = root.clone();
        let mut found = Vec::new();
        let _ = s.branch(var, w, &mut found);
        (found, s.take_stats())
    };
    if workers == 1 {
        for (slot, &w) in results.iter_mut().zip(&values) {
            *slot = Some(run_branch(w));
        }
    } else {
        thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|id| {
                    let values = &values;
                    let run_branch = &run_branch;
                    scope.spawn(move || {
                        (id..values.len())
                            .step_by(workers)
                            .map(|k| (k, run_branch(values[k])))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                for (k, r) in h.join().expect("search worker panicked") {
                    results[k] = Some(r);
                }
            }
        });
    }

    let mut solutions = Vec::new();
    for (found, s) in results.into_iter().flatten() {
        stats.absorb(&s);
        solutions.extend(found);
    }
    if let Some(limit) = cfg.solution_limit {
        solutions.truncate(limit);
    }
    stats.solutions_found = solutions.len() as u64;
    Ok((dims, Arc::clone(&model.space), solutions, stats))
}

fn bits(mask: u16) -> impl Iterator<Item = u8> {
    (0..16u8).filter(move |b| mask & (1 << b) != 0)
}

/// Static structure shared by every search branch.
struct Model {
    m: usize,
    profiles: usize,
    space: Arc<OrderSpace>,
    stp: bool,
    /// `(neighbour, pair)` for every single-voter neighbour; `pair` indexes
    /// `allowed` by the changing voter's two orders.
    neighbors: Vec<Vec<(u32, u32)>>,
    /// `allowed[pair * m + w]`: values the neighbour may take when this
    /// profile takes `w`.
    allowed: Vec<u16>,
    initial: Vec<u16>,
}

impl Model {
    fn new(dims: Dims, axioms: AxiomSet) -> Self {
        let m = dims.m();
        let base = dims.num_orders();
        let profiles = dims.num_profiles();
        let space = Arc::new(OrderSpace::new(m));
        let full: u16 = (1u16 << m) - 1;

        let mut allowed = vec![0u16; base * base * m];
        for o1 in 0..base {
            for o2 in 0..base {
                let (p, q) = (space.order(o1), space.order(o2));
                for w in 0..m {
                    let wa = Alternative(w as u8);
                    let mut mask = 0u16;
                    for v in 0..m {
                        let va = Alternative(v as u8);
                        if v == w || (p.beats(wa, va) && q.beats(va, wa)) {
                            mask |= 1 << v;
                        }
                    }
                    allowed[(o1 * base + o2) * m + w] = mask;
                }
            }
        }

        let mut neighbors = vec![Vec::new(); if axioms.stp { profiles } else { 0 }];
        let mut initial = vec![full; profiles];
        for (p, init) in initial.iter_mut().enumerate() {
            let digits = dims.decode(p).expect("in range");
            if axioms.unm {
                let t = space.order(digits[0]).top();
                if digits.iter().all(|&d| space.order(d).top() == t) {
                    *init = 1 << t.index();
                }
            }
            if axioms.stp {
                let mut weight = 1;
                for &own in &digits {
                    for other in (0..base).filter(|&o| o != own) {
                        let q = p - own * weight + other * weight;
                        neighbors[p].push((q as u32, (own * base + other) as u32));
                    }
                    weight *= base;
                }
            }
        }
        Model { m, profiles, space, stp: axioms.stp, neighbors, allowed, initial }
    }

    #[inline]
    fn allowed(&self, pair: u32, w: u8) -> u16 {
        self.allowed[pair as usize * self.m + w as usize]
    }
}

#[derive(Clone)]
struct Solver {
    model: Arc<Model>,
    propagate: bool,
    limit: Option<usize>,
    domains: Vec<u16>,
    assignment: Vec<u8>,
    trail: Vec<(u32, u16)>,
    stats: SearchStats,
}

impl Solver {
    fn new(model: Arc<Model>, cfg: &SearchConfig) -> Self {
        let full: u16 = (1u16 << model.m) - 1;
        let mut domains = model.initial.clone();
        let mut stats = SearchStats::default();
        stats.prunes_by_unm =
            domains.iter().map(|d| (full.count_ones() - d.count_ones()) as u64).sum();
        if cfg.propagate && model.stp {
            // unanimity-fixed values never change, so filter their
            // neighbours once before search
            for p in 0..model.profiles {
                if model.initial[p].count_ones() != 1 {
                    continue;
                }
                let w = model.initial[p].trailing_zeros() as u8;
                for &(q, pair) in &model.neighbors[p] {
                    let before = domains[q as usize];
                    let after = before & model.allowed(pair, w);
                    stats.prunes_by_unm += (before.count_ones() - after.count_ones()) as u64;
                    domains[q as usize] = after;
                }
            }
        }
        Solver {
            propagate: cfg.propagate,
            limit: cfg.solution_limit,
            assignment: vec![0; model.profiles],
            domains,
            trail: Vec::new(),
            stats,
            model,
        }
    }

    fn take_stats(&mut self) -> SearchStats {
        std::mem::take(&mut self.stats)
    }

    /// Assigns `var = w` and checks or propagates the constraint. On failure
    /// the caller must undo to its trail mark.
    fn assign(&mut self, var: usize, w: u8) -> bool {
        self.stats.nodes_expanded += 1;
        self.assignment[var] = w;
        if !self.model.stp {
            return true;
        }
        let model = Arc::clone(&self.model);
        if self.propagate {
            for &(q, pair) in &model.neighbors[var] {
                let q = q as usize;
                if q <= var {
                    continue;
                }
                let before = self.domains[q];
                let after = before & model.allowed(pair, w);
                if after != before {
                    self.trail.push((q as u32, before));
                    self.domains[q] = after;
                    if after == 0 {
                        self.stats.prunes_by_stp += 1;
                        return false;
                    }
                }
            }
            true
        } else {
            let ok = model.neighbors[var].iter().all(|&(q, pair)| {
                let q = q as usize;
                q > var || model.allowed(pair, w) & (1 << self.assignment[q]) != 0
            });
            if !ok {
                self.stats.prunes_by_stp += 1;
            }
            ok
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (q, d) = self.trail.pop().expect("above mark");
            self.domains[q as usize] = d;
        }
    }

    fn branch(&mut self, var: usize, w: u8, out: &mut Solutions) -> ControlFlow<()> {
        let mark = self.trail.len();
        let flow = if self.assign(var, w) { self.dfs(var + 1, out) } else { ControlFlow::Continue(()) };
        self.undo(mark);
        flow
    }

    fn dfs(&mut self, var: usize, out: &mut Solutions) -> ControlFlow<()> {
        if var == self.model.profiles {
            out.push(self.assignment.iter().map(|&a| Alternative(a)).collect());
            if self.limit.is_some_and(|l| out.len() >= l) {
                return ControlFlow::Break(());
            }
            return ControlFlow::Continue(());
        }
        for w in bits(self.domains[var]) {
            self.branch(var, w, out)?;
        }
        ControlFlow::Continue(())
    }
}
