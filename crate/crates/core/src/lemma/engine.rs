use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::trace::{Justification, LemmaTag, ProofTrace, TraceParams, TraceStep};
use super::{LemmaError, LemmaOutcome, PremiseFailure, Witness};
use crate::axioms::{
    check_unanimous, decisiveness_violation, find_dictator_bruteforce, find_manipulation,
    is_decisive_over, ManipulationWitness, UnanimityViolation,
};
use crate::prefcore::{Alternative, Coalition, LinearOrder, Profile, ScfTable};

/// How lemma operations treat their expensive global premises (unanimity,
/// decisiveness of the input coalition, the exhaustive decisiveness
/// confirmations of the extension step).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PremiseMode {
    /// Check them exhaustively before and during tracing.
    Eager,
    /// Take them for granted; contradictions still surface as witnesses
    /// whenever a traced step exposes one.
    Assume,
}

/// The alternatives playing the roles `a`, `b`, `c` in the constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Roles {
    pub a: Alternative,
    pub b: Alternative,
    pub c: Alternative,
}

impl Default for Roles {
    fn default() -> Self {
        Roles { a: Alternative(0), b: Alternative(1), c: Alternative(2) }
    }
}

/// Why a construction stopped early.
enum Halt {
    Witness(Witness),
    /// A claimed outcome failed without any local contradiction showing up.
    Gap(String),
}

type Flow<T> = Result<T, Halt>;

/// Runs the lemma constructions against one table.
pub struct LemmaEngine<'f> {
    f: &'f ScfTable,
    premises: PremiseMode,
    rng: Option<ChaCha8Rng>,
    roles: Roles,
}

impl<'f> LemmaEngine<'f> {
    pub fn new(f: &'f ScfTable) -> Self {
        LemmaEngine { f, premises: PremiseMode::Eager, rng: None, roles: Roles::default() }
    }

    pub fn premises(mut self, mode: PremiseMode) -> Self {
        self.premises = mode;
        self
    }

    /// Fill the unconstrained middle of every constructed order with a
    /// seeded shuffle instead of ascending ids.
    pub fn seeded_completion(mut self, seed: u64) -> Self {
        self.rng = Some(ChaCha8Rng::seed_from_u64(seed));
        self
    }

    pub fn roles(mut self, roles: Roles) -> Self {
        self.roles = roles;
        self
    }

    fn eager(&self) -> bool {
        self.premises == PremiseMode::Eager
    }

    fn check_alt(&self, a: Alternative) -> Result<(), LemmaError> {
        Ok(self.f.dims().check_alt(a)?)
    }

    fn check_coalition(&self, g: &Coalition) -> Result<(), LemmaError> {
        if g.is_empty() {
            return Err(PremiseFailure::EmptyCoalition.into());
        }
        if !g.is_within(self.f.n()) {
            return Err(PremiseFailure::CoalitionOutOfRange { coalition: g.clone() }.into());
        }
        Ok(())
    }

    fn check_roles(&self) -> Result<(), LemmaError> {
        let Roles { a, b, c } = self.roles;
        for r in [a, b, c] {
            self.check_alt(r)?;
        }
        if a == b || b == c || a == c {
            return Err(PremiseFailure::RolesNotDistinct { a, b, c }.into());
        }
        Ok(())
    }

    /// If the table fails unanimity, the lowest violation.
    fn unanimity_first(&self) -> Option<LemmaOutcome<()>> {
        if !self.eager() {
            return None;
        }
        check_unanimous(self.f).map(|v| LemmaOutcome::Refuted(Witness::Unanimity(v)))
    }

    /// Turns a halted construction into a result. A gap falls back to the
    /// global witness finders.
    fn resolve<T>(&self, halt: Halt) -> Result<LemmaOutcome<T>, LemmaError> {
        match halt {
            Halt::Witness(w) => Ok(LemmaOutcome::Refuted(w)),
            Halt::Gap(msg) => {
                if let Some(w) = find_manipulation(self.f) {
                    Ok(LemmaOutcome::Refuted(Witness::Manipulation(w)))
                } else if let Some(v) = check_unanimous(self.f) {
                    Ok(LemmaOutcome::Refuted(Witness::Unanimity(v)))
                } else {
                    Err(LemmaError::ProofGap(msg))
                }
            }
        }
    }

    fn trace(&self, lemma: LemmaTag, params: TraceParams, steps: Steps, conclusion: String) -> ProofTrace {
        ProofTrace {
            lemma,
            m: self.f.m(),
            n: self.f.n(),
            params,
            steps: steps.steps,
            conclusion,
        }
    }

    /// `head ≻ … ≻ tail`, the middle filled per the completion policy.
    fn complete(&mut self, head: &[Alternative], tail: &[Alternative]) -> LinearOrder {
        let mut middle: Vec<Alternative> = self
            .f
            .dims()
            .alternatives()
            .filter(|x| !head.contains(x) && !tail.contains(x))
            .collect();
        if let Some(rng) = self.rng.as_mut() {
            middle.shuffle(rng);
        }
        let ranking = head.iter().chain(&middle).chain(tail).copied().collect();
        LinearOrder::new(ranking).expect("head, middle and tail partition the alternatives")
    }

    fn smallest_other(&self, used: &[Alternative]) -> Alternative {
        self.f.dims().alternatives().find(|x| !used.contains(x)).expect("m >= 3")
    }

    fn third_for(&self, a: Alternative, b: Alternative) -> Alternative {
        let c = self.roles.c;
        if c != a && c != b {
            c
        } else {
            self.smallest_other(&[a, b])
        }
    }

    // ---- tops only -------------------------------------------------------

    pub fn tops_only(
        &mut self,
        x: &Profile,
        a: Alternative,
        b: Alternative,
    ) -> Result<LemmaOutcome<Alternative>, LemmaError> {
        x.check_dims(self.f.dims())?;
        self.check_alt(a)?;
        self.check_alt(b)?;
        if let Some((voter, top)) = x.tops().enumerate().find(|(_, t)| *t != a && *t != b) {
            return Err(PremiseFailure::TopOutside { voter, top }.into());
        }
        if let Some(LemmaOutcome::Refuted(w)) = self.unanimity_first() {
            return Ok(LemmaOutcome::Refuted(w));
        }
        let mut tr = Steps::new(self.f);
        match self.tops_only_into(&mut tr, x, a, b) {
            Ok(out) => {
                let params = TraceParams { a: Some(a), b: Some(b), ..Default::default() };
                let conclusion = format!("f(x) = {out} lies in {{{a},{b}}}");
                Ok(LemmaOutcome::Proved {
                    conclusion: out,
                    trace: self.trace(LemmaTag::TopsOnly, params, tr, conclusion),
                })
            }
            Err(h) => self.resolve(h),
        }
    }

    fn tops_only_into(
        &mut self,
        tr: &mut Steps,
        x: &Profile,
        a: Alternative,
        b: Alternative,
    ) -> Flow<Alternative> {
        let n = x.n();
        let ga: Vec<usize> = (0..n).filter(|&v| x.order(v).top() == a).collect();
        let gb: Vec<usize> = (0..n).filter(|&v| x.order(v).top() != a).collect();
        if a == b || ga.is_empty() || gb.is_empty() {
            let t = x.order(0).top();
            tr.anchor(x.clone(), &[], "x");
            return tr.unanimity(t, "all tops agree");
        }

        let xp = Profile::new(
            (0..n)
                .map(|v| {
                    if x.order(v).top() == a {
                        self.complete(&[a, b], &[])
                    } else {
                        self.complete(&[b, a], &[])
                    }
                })
                .collect(),
        )
        .expect("same dimensions as x");

        // x' and its reversal chain: f(x') ∈ {a,b} or some reversal is a
        // profitable misreport
        tr.anchor(xp.clone(), &[], "x': a≻b≻… for G(a,x), b≻a≻… for G(b,x)");
        for (step, &i) in ga.iter().enumerate() {
            let o = tr.cur().order(i).swap_pair(a, b).expect("a != b");
            tr.change(i, o, &[], format!("x^{}: voter {i} reverses {a},{b}", step + 1))?;
        }
        tr.unanimity(b, "x^k: everyone ranks b first")?;
        let fxp = self.f.at(xp.index());
        if fxp != a && fxp != b {
            return Err(Halt::Gap(format!("f(x') = {fxp} outside {{{a},{b}}}")));
        }

        // y chain: G(a,x) back to sincere
        tr.anchor(xp.clone(), &[a, b], "y^0 = x'");
        for (step, &i) in ga.iter().enumerate() {
            let out = tr.change(i, x.order(i).clone(), &[a, b], format!("y^{}: voter {i} sincere", step + 1))?;
            if out != a && out != b {
                return Err(self.raise_to_top(tr.cur().clone(), &gb, a));
            }
        }
        let yk = tr.last();
        let yk_profile = tr.cur().clone();
        let f_yk = tr.outcome();

        // z chain: G(b,x) back to sincere
        tr.anchor(xp.clone(), &[a, b], "z^k = x'");
        for &j in &gb {
            let out = tr.change(j, x.order(j).clone(), &[a, b], format!("z^{}: voter {j} sincere", j + 1))?;
            if out != a && out != b {
                return Err(self.raise_to_top(tr.cur().clone(), &ga, b));
            }
        }
        let zn = tr.last();
        let zn_profile = tr.cur().clone();
        let f_zn = tr.outcome();

        let stmt_a = f_yk == b;
        let stmt_b = f_zn == a;
        if stmt_a == stmt_b {
            return Err(Halt::Gap(format!(
                "dichotomy broken: f(y^k) = {f_yk}, f(z^N) = {f_zn}"
            )));
        }
        if stmt_a {
            tr.push(yk_profile, Justification::Dichotomy, None, &[b, a], None, vec![yk, zn], "(a) f(y^k) = b".into());
            for &j in &gb {
                let out = tr.change(j, x.order(j).clone(), &[b], format!("voter {j} sincere, stays {b}"))?;
                if out != b {
                    return Err(Halt::Gap(format!("walk from y^k left {b}")));
                }
            }
        } else {
            tr.push(zn_profile, Justification::Dichotomy, None, &[b, a], None, vec![yk, zn], "(b) f(z^N) = a".into());
            for &i in &ga {
                let out = tr.change(i, x.order(i).clone(), &[a], format!("voter {i} sincere, stays {a}"))?;
                if out != a {
                    return Err(Halt::Gap(format!("walk from z^N left {a}")));
                }
            }
        }
        Ok(tr.outcome())
    }

    /// From a profile whose outcome left `{a,b}`, move `t` to the top for
    /// `voters` one at a time until everyone ranks `t` first. Either some
    /// move is a profitable misreport or unanimity fails at the end.
    fn raise_to_top(&mut self, start: Profile, voters: &[usize], t: Alternative) -> Halt {
        let mut scratch = Steps::new(self.f);
        scratch.anchor(start, &[], "outcome left the pair");
        for &v in voters {
            let o = scratch.cur().order(v).move_to_top(t).expect("t < m");
            if let Err(h) = scratch.change(v, o, &[], String::new()) {
                return h;
            }
        }
        match scratch.unanimity(t, "") {
            Err(h) => h,
            Ok(_) => Halt::Gap(format!("raising {t} exposed no contradiction")),
        }
    }

    /// Runs the tops-only construction on `x` purely for its witness.
    fn tops_only_witness(&mut self, x: &Profile, a: Alternative, b: Alternative) -> Halt {
        let mut scratch = Steps::new(self.f);
        match self.tops_only_into(&mut scratch, x, a, b) {
            Err(h) => h,
            Ok(out) => Halt::Gap(format!("tops-only construction returned {out} yet f left {{{a},{b}}}")),
        }
    }

    /// Walks from `from` to `to`, one voter at a time in `voters` order, and
    /// returns the first profitable misreport along the way.
    fn walk_witness(&self, from: &Profile, to: &Profile, voters: &[usize]) -> Halt {
        let mut scratch = Steps::new(self.f);
        scratch.anchor(from.clone(), &[], "");
        for &v in voters {
            if let Err(h) = scratch.change(v, to.order(v).clone(), &[], String::new()) {
                return h;
            }
        }
        Halt::Gap("walk to the decisiveness counterexample found no manipulation".into())
    }

    fn members_then_rest(&self, g: &Coalition) -> Vec<usize> {
        let mut order = g.members().to_vec();
        order.extend(g.complement(self.f.n()).members());
        order
    }

    // ---- extension -------------------------------------------------------

    pub fn extension(
        &mut self,
        g: &Coalition,
        x: &Profile,
        a: Alternative,
    ) -> Result<LemmaOutcome<Coalition>, LemmaError> {
        x.check_dims(self.f.dims())?;
        self.check_alt(a)?;
        self.check_coalition(g)?;
        for (v, o) in x.orders().iter().enumerate() {
            if g.contains(v) && o.top() != a {
                return Err(PremiseFailure::NotTop { voter: v, alt: a, position: o.rank_of(a) }.into());
            }
            if !g.contains(v) && o.bottom() != a {
                return Err(PremiseFailure::NotBottom { voter: v, alt: a, position: o.rank_of(a) }.into());
            }
        }
        let got = self.f.eval(x)?;
        if got != a {
            return Err(PremiseFailure::OutcomeMismatch { expected: a, got }.into());
        }
        if let Some(LemmaOutcome::Refuted(w)) = self.unanimity_first() {
            return Ok(LemmaOutcome::Refuted(w));
        }
        let mut tr = Steps::new(self.f);
        match self.extension_into(&mut tr, g, x, a) {
            Ok(()) => {
                let params = TraceParams { coalition: Some(g.clone()), a: Some(a), ..Default::default() };
                let conclusion = format!("coalition {g} is decisive");
                Ok(LemmaOutcome::Proved {
                    conclusion: g.clone(),
                    trace: self.trace(LemmaTag::Extension, params, tr, conclusion),
                })
            }
            Err(h) => self.resolve(h),
        }
    }

    fn extension_into(&mut self, tr: &mut Steps, g: &Coalition, x: &Profile, a: Alternative) -> Flow<()> {
        tr.anchor(x.clone(), &[a], "premise profile");
        tr.annotate(Justification::Lemma2Ref, &[a], Some(g.clone()), format!("{a} first for {g}, last otherwise"));
        self.confirm_decisive_over(g, a, x)?;

        let walk = self.members_then_rest(g);
        let others: Vec<Alternative> = self.f.dims().alternatives().filter(|&b| b != a).collect();
        for (k, &b) in others.iter().enumerate() {
            if k > 0 {
                tr.anchor(x.clone(), &[a], "premise profile");
            }
            let c = self.third_for(a, b);
            let y = self.y_profile(g, a, b, c);
            for &v in &walk {
                let out = tr.change(v, y.order(v).clone(), &[a], format!("toward y: voter {v}"))?;
                if out != a {
                    return Err(Halt::Gap(format!("walk toward y left {a}")));
                }
            }
            self.swap_phase(tr, g, a, b, c)?;
        }
        Ok(())
    }

    /// `y_i = (a≻b≻…)` for members, `y_j = (c≻…≻b)` for the rest.
    fn y_profile(&mut self, g: &Coalition, a: Alternative, b: Alternative, c: Alternative) -> Profile {
        let orders = (0..self.f.n())
            .map(|v| if g.contains(v) { self.complete(&[a, b], &[]) } else { self.complete(&[c], &[b]) })
            .collect();
        Profile::new(orders).expect("n orders over m")
    }

    /// From `y` with outcome `a`: members swap `a,b` one at a time, the
    /// tops-only property pins the outcome to `b`, and `y^k` becomes an
    /// extension premise for `b`.
    fn swap_phase(&mut self, tr: &mut Steps, g: &Coalition, a: Alternative, b: Alternative, c: Alternative) -> Flow<()> {
        for &i in g.members() {
            let o = tr.cur().order(i).swap_pair(a, b).expect("a != b");
            let out = tr.change(i, o, &[a, b], format!("voter {i} swaps {a},{b}"))?;
            if out != a && out != b {
                return Err(Halt::Gap(format!("swap chain left {{{a},{b}}}")));
            }
        }
        let out = tr.annotate(Justification::Lemma1Ref, &[b, c], None, format!("tops in {{{b},{c}}}"));
        if out != b && out != c {
            let at = tr.cur().clone();
            return Err(self.tops_only_witness(&at, b, c));
        }
        tr.annotate(Justification::Lemma2Ref, &[b], Some(g.clone()), format!("{b} first for {g}, last otherwise"));
        let at = tr.cur().clone();
        self.confirm_decisive_over(g, b, &at)
    }

    /// Exhaustive confirmation that `g` is decisive over `a`, given a premise
    /// profile `x`. A counterexample is turned into a manipulation by walking
    /// from `x` to it.
    fn confirm_decisive_over(&self, g: &Coalition, a: Alternative, x: &Profile) -> Flow<()> {
        if !self.eager() {
            return Ok(());
        }
        match is_decisive_over(self.f, g, a) {
            Ok(None) => Ok(()),
            Ok(Some(v)) => {
                let target = Profile::from_index(v.profile_index, self.f.dims()).expect("in range");
                Err(self.walk_witness(x, &target, &self.members_then_rest(g)))
            }
            Err(e) => Err(Halt::Gap(e.to_string())),
        }
    }

    pub fn decisive_over_implies_decisive(
        &mut self,
        g: &Coalition,
        a: Alternative,
    ) -> Result<LemmaOutcome<Coalition>, LemmaError> {
        self.check_alt(a)?;
        self.check_coalition(g)?;
        if let Some(LemmaOutcome::Refuted(w)) = self.unanimity_first() {
            return Ok(LemmaOutcome::Refuted(w));
        }
        if self.eager() {
            if let Some(v) = is_decisive_over(self.f, g, a)? {
                return Err(PremiseFailure::NotDecisive(v).into());
            }
        }
        let mut tr = Steps::new(self.f);
        let run = self.decisive_over_into(&mut tr, g, a);
        match run {
            Ok(()) => {
                let params = TraceParams { coalition: Some(g.clone()), a: Some(a), ..Default::default() };
                let conclusion = format!("coalition {g} is decisive");
                Ok(LemmaOutcome::Proved {
                    conclusion: g.clone(),
                    trace: self.trace(LemmaTag::Extension, params, tr, conclusion),
                })
            }
            Err(h) => self.resolve(h),
        }
    }

    fn decisive_over_into(&mut self, tr: &mut Steps, g: &Coalition, a: Alternative) -> Flow<()> {
        for b in self.f.dims().alternatives().filter(|&b| b != a) {
            let c = self.third_for(a, b);
            let y = self.y_profile(g, a, b, c);
            let out = tr.anchor(y, &[a], format!("y: {g} decisive over {a}"));
            if out != a {
                return Err(Halt::Gap(format!("{g} not decisive over {a}")));
            }
            self.swap_phase(tr, g, a, b, c)?;
        }
        Ok(())
    }

    // ---- contraction -----------------------------------------------------

    pub fn contraction(&mut self, g: &Coalition) -> Result<LemmaOutcome<Coalition>, LemmaError> {
        self.check_coalition(g)?;
        self.check_roles()?;
        if g.len() < 2 {
            return Err(PremiseFailure::CoalitionTooSmall { len: g.len() }.into());
        }
        if let Some(LemmaOutcome::Refuted(w)) = self.unanimity_first() {
            return Ok(LemmaOutcome::Refuted(w));
        }
        if self.eager() {
            if let Some(v) = decisiveness_violation(self.f, g)? {
                return Err(PremiseFailure::NotDecisive(v).into());
            }
        }
        let mut tr = Steps::new(self.f);
        match self.contraction_into(&mut tr, g) {
            Ok(h) => {
                let Roles { a, b, c } = self.roles;
                let params = TraceParams {
                    coalition: Some(g.clone()),
                    a: Some(a),
                    b: Some(b),
                    c: Some(c),
                    pivot: g.lowest(),
                };
                let conclusion = format!("proper subset {h} of {g} is decisive");
                Ok(LemmaOutcome::Proved {
                    conclusion: h,
                    trace: self.trace(LemmaTag::Contraction, params, tr, conclusion),
                })
            }
            Err(h) => self.resolve(h),
        }
    }

    fn contraction_into(&mut self, tr: &mut Steps, g: &Coalition) -> Flow<Coalition> {
        let Roles { a, b, c } = self.roles;
        let pivot = g.lowest().expect("|G| >= 2");
        let rest = g.without(pivot);
        let outside = g.complement(self.f.n());

        let pivot_order = self.complete(&[a], &[b]);
        let orders = (0..self.f.n())
            .map(|v| {
                if v == pivot {
                    pivot_order.clone()
                } else if rest.contains(v) {
                    self.complete(&[b], &[a])
                } else {
                    self.complete(&[a], &[b])
                }
            })
            .collect();
        let x = Profile::new(orders).expect("n orders over m");

        tr.anchor(x.clone(), &[], format!("x: pivot {pivot} a≻…≻b, {rest} b≻…≻a"));
        let fx = tr.annotate(Justification::Lemma1Ref, &[a, b], None, format!("tops in {{{a},{b}}}"));
        if fx != a && fx != b {
            return Err(self.tops_only_witness(&x, a, b));
        }
        if fx == b {
            self.extension_into(tr, &rest, &x, b)?;
            return Ok(rest);
        }

        let o = self.complete(&[a, b], &[c]);
        if tr.change(pivot, o, &[a], format!("x^1: pivot {pivot} a≻b≻…≻c"))? != a {
            return Err(Halt::Gap("x^1 left a".into()));
        }
        for &j in outside.members() {
            let o = self.complete(&[c], &[b]);
            let out = tr.change(j, o, &[a], format!("x^{}: voter {j} c≻…≻b", j + 1))?;
            if out != a && out != b {
                let at = tr.cur().clone();
                return Err(self.pivot_probe(&at, pivot, b, out));
            }
            if out != a {
                return Err(Halt::Gap(format!("outsider chain reached {b}")));
            }
        }
        if tr.change(pivot, pivot_order, &[a], format!("y: pivot {pivot} back to x_1"))? != a {
            return Err(Halt::Gap("y left a".into()));
        }
        for &i in rest.members() {
            let o = self.complete(&[c], &[a]);
            if tr.change(i, o, &[a], format!("y^{}: voter {i} c≻…≻a", i + 1))? != a {
                return Err(Halt::Gap("member chain left a".into()));
            }
        }
        for &j in outside.members() {
            let o = self.complete(&[c], &[a]);
            let out = tr.change(j, o, &[a], format!("y^{}: voter {j} c≻…≻a", j + 1))?;
            if out != a && out != c {
                let at = tr.cur().clone();
                return Err(self.tops_only_witness(&at, a, c));
            }
            if out != a {
                return Err(Halt::Gap(format!("outsider chain reached {c}")));
            }
        }
        let singleton = Coalition::singleton(pivot);
        let at = tr.cur().clone();
        self.extension_into(tr, &singleton, &at, a)?;
        Ok(singleton)
    }

    /// The pivot, whose fellow members rank `b` first, can force `b` by
    /// ranking it first too; if the current outcome is worse than `b` for
    /// the pivot, that is a profitable misreport.
    fn pivot_probe(&self, x: &Profile, pivot: usize, b: Alternative, current: Alternative) -> Halt {
        let sincere = x.order(pivot);
        let mis = sincere.move_to_top(b).expect("b < m");
        let probe = x.replace_coord(pivot, mis.clone()).expect("pivot < n");
        let forced = self.f.at(probe.index());
        if sincere.beats(forced, current) {
            Halt::Witness(Witness::Manipulation(ManipulationWitness {
                profile_index: x.index(),
                voter: pivot,
                misreport_order_index: mis.index(),
                sincere_outcome: current,
                manipulated_outcome: forced,
            }))
        } else {
            Halt::Gap(format!("pivot probe gave {forced}, not {b}"))
        }
    }

    // ---- dictator --------------------------------------------------------

    /// Contracts the full voter set one lemma application at a time, in
    /// assume-premise mode, and validates the resulting dictator globally.
    pub fn dictator(&mut self) -> Result<LemmaOutcome<usize>, LemmaError> {
        self.check_roles()?;
        if let Some(v) = check_unanimous(self.f) {
            return Ok(LemmaOutcome::Refuted(Witness::Unanimity(v)));
        }
        let saved = self.premises;
        self.premises = PremiseMode::Assume;
        let result = self.dictator_chain();
        self.premises = saved;
        let (d, tr) = match result {
            Ok(found) => found,
            Err(h) => return self.resolve(h),
        };
        if find_dictator_bruteforce(self.f) != Some(d) {
            return self.resolve(Halt::Gap(format!("voter {d} is not a dictator")));
        }
        let params = TraceParams { coalition: Some(Coalition::singleton(d)), ..Default::default() };
        let conclusion = format!("voter {d} is a dictator");
        Ok(LemmaOutcome::Proved { conclusion: d, trace: self.trace(LemmaTag::Dictator, params, tr, conclusion) })
    }

    fn dictator_chain(&mut self) -> Flow<(usize, Steps<'f>)> {
        let mut tr = Steps::new(self.f);
        let start = Profile::from_index(0, self.f.dims()).expect("index 0");
        tr.anchor(start, &[], "everyone ranks 0 first");
        tr.unanimity(Alternative(0), "the full voter set is decisive")?;
        let mut g = Coalition::everyone(self.f.n());
        while g.len() >= 2 {
            g = self.contraction_into(&mut tr, &g)?;
        }
        Ok((g.lowest().expect("nonempty"), tr))
    }
}

/// Trace under construction. Every step evaluates the table; every
/// one-voter change is checked for a profitable misreport in both directions.
struct Steps<'f> {
    f: &'f ScfTable,
    steps: Vec<TraceStep>,
    profiles: Vec<Profile>,
}

impl<'f> Steps<'f> {
    fn new(f: &'f ScfTable) -> Self {
        Steps { f, steps: Vec::new(), profiles: Vec::new() }
    }

    fn cur(&self) -> &Profile {
        self.profiles.last().expect("trace started")
    }

    fn last(&self) -> usize {
        self.steps.len() - 1
    }

    fn outcome(&self) -> Alternative {
        self.steps.last().expect("trace started").outcome
    }

    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        x: Profile,
        justification: Justification,
        changed_voter: Option<usize>,
        claim: &[Alternative],
        coalition: Option<Coalition>,
        refs: Vec<usize>,
        note: String,
    ) -> Alternative {
        let profile_index = x.index();
        let outcome = self.f.at(profile_index);
        self.steps.push(TraceStep {
            profile_index,
            orders: x.order_indices(),
            outcome,
            justification,
            changed_voter,
            claim: claim.to_vec(),
            coalition,
            refs,
            note,
        });
        self.profiles.push(x);
        outcome
    }

    fn anchor(&mut self, x: Profile, claim: &[Alternative], note: impl Into<String>) -> Alternative {
        self.push(x, Justification::Initial, None, claim, None, Vec::new(), note.into())
    }

    fn annotate(
        &mut self,
        justification: Justification,
        claim: &[Alternative],
        coalition: Option<Coalition>,
        note: impl Into<String>,
    ) -> Alternative {
        let x = self.cur().clone();
        self.push(x, justification, None, claim, coalition, Vec::new(), note.into())
    }

    fn unanimity(&mut self, t: Alternative, note: &str) -> Flow<Alternative> {
        let out = self.annotate(Justification::UnmApplication, &[t], None, note);
        if out != t {
            return Err(Halt::Witness(Witness::Unanimity(UnanimityViolation {
                profile_index: self.cur().index(),
                common_top: t,
                outcome: out,
            })));
        }
        Ok(out)
    }

    /// Replaces voter `i`'s order and records the step. Fails with the
    /// manipulation if either direction of the change is profitable.
    fn change(&mut self, i: usize, o: LinearOrder, claim: &[Alternative], note: String) -> Flow<Alternative> {
        let before = self.cur().clone();
        let w = self.outcome();
        let after = before.replace_coord(i, o).expect("voter in range");
        let v = self.push(after.clone(), Justification::StpStep, Some(i), claim, None, Vec::new(), note);
        if before.order(i).beats(v, w) {
            return Err(Halt::Witness(Witness::Manipulation(ManipulationWitness {
                profile_index: before.index(),
                voter: i,
                misreport_order_index: after.order(i).index(),
                sincere_outcome: w,
                manipulated_outcome: v,
            })));
        }
        if after.order(i).beats(w, v) {
            return Err(Halt::Witness(Witness::Manipulation(ManipulationWitness {
                profile_index: after.index(),
                voter: i,
                misreport_order_index: before.order(i).index(),
                sincere_outcome: v,
                manipulated_outcome: w,
            })));
        }
        Ok(v)
    }
}
