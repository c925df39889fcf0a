//! The tracer attached to one enumerated program.
//!
//! At every semicolon the tracer pauses its program and looks at the tuple
//! just completed. A tuple whose length differs from the first one kills the
//! program. Otherwise, if some earlier tuple `i` agrees with the new tuple
//! `l` in every coordinate up to degree `f(n, k)` (that is, every difference
//! `u_si - u_sl` has minimal degree at least `f`), the homogeneous components
//! of all those differences become relators and the program is killed.
//! Otherwise tracing resumes.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::AlgebraConfig;
use crate::freealg::{Alphabet, Polynomial};
use crate::gs_series::Schedule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TraceStatus {
    Tracing,
    KilledMalformed,
    KilledCaught,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TraceAction {
    Resume,
    KillMalformed,
    /// `witness` is the 1-based pair `(i, l)` with `i < l`.
    KillAndEmit {
        relators: Vec<Polynomial>,
        witness: (usize, usize),
    },
}

/// One line of a session transcript.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub ordinal: usize,
    pub action: ActionSummary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ActionSummary {
    Resume,
    KillMalformed { expected: usize, got: usize },
    KillAndEmit { i: usize, l: usize, relators: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceSession {
    pub k: u64,
    cfg: AlgebraConfig,
    schedule: Schedule,
    arity: Option<usize>,
    tuples: Vec<Vec<Polynomial>>,
    status: TraceStatus,
    transcript: Vec<TraceRecord>,
    emitted: Vec<Polynomial>,
    /// Truncation below `f` of each distinct tuple, mapped to its first index.
    #[serde(skip)]
    first_seen: HashMap<Vec<Polynomial>, usize>,
    #[serde(skip)]
    indexed: usize,
}

impl TraceSession {
    pub fn new(k: u64, cfg: AlgebraConfig, schedule: Schedule) -> Self {
        Self {
            k,
            cfg,
            schedule,
            arity: None,
            tuples: Vec::new(),
            status: TraceStatus::Tracing,
            transcript: Vec::new(),
            emitted: Vec::new(),
            first_seen: HashMap::new(),
            indexed: 0,
        }
    }

    pub fn status(&self) -> TraceStatus {
        self.status
    }

    pub fn arity(&self) -> Option<usize> {
        self.arity
    }

    pub fn tuples(&self) -> &[Vec<Polynomial>] {
        &self.tuples
    }

    pub fn transcript(&self) -> &[TraceRecord] {
        &self.transcript
    }

    pub fn emitted(&self) -> &[Polynomial] {
        &self.emitted
    }

    /// `f(n, k)` once the arity is known.
    pub fn threshold(&self) -> Option<u64> {
        self.arity.map(|n| self.schedule.eval(n, self.k))
    }

    fn truncation_key(tuple: &[Polynomial], f: u64) -> Vec<Polynomial> {
        match usize::try_from(f) {
            Ok(0) => Vec::new(),
            Ok(f) => tuple.iter().map(|u| u.truncate(f - 1)).collect(),
            // no word is that long: the whole tuple is the key
            Err(_) => tuple.to_vec(),
        }
    }

    /// Steps 2b-2d for a freshly completed tuple.
    pub fn on_semicolon(&mut self, tuple: Vec<Polynomial>) -> Result<TraceAction> {
        if self.status != TraceStatus::Tracing {
            return Err(Error::State(format!("tracer {} is no longer tracing", self.k)));
        }
        for u in &tuple {
            self.cfg.ensure_same(&u.config())?;
        }
        let n = *self.arity.get_or_insert(tuple.len());
        self.tuples.push(tuple);
        let l = self.tuples.len();
        if self.tuples[l - 1].len() != n {
            self.status = TraceStatus::KilledMalformed;
            self.transcript.push(TraceRecord {
                ordinal: l,
                action: ActionSummary::KillMalformed { expected: n, got: self.tuples[l - 1].len() },
            });
            return Ok(TraceAction::KillMalformed);
        }
        let f = self.schedule.eval(n, self.k);
        // After deserialization the index is rebuilt from the stored tuples.
        while self.indexed < l - 1 {
            let key = Self::truncation_key(&self.tuples[self.indexed], f);
            self.first_seen.entry(key).or_insert(self.indexed);
            self.indexed += 1;
        }
        let key = Self::truncation_key(&self.tuples[l - 1], f);
        match self.first_seen.get(&key) {
            Some(&i) => {
                let relators = self.differences(i, l - 1)?;
                self.status = TraceStatus::KilledCaught;
                self.emitted = relators.clone();
                self.transcript.push(TraceRecord {
                    ordinal: l,
                    action: ActionSummary::KillAndEmit { i: i + 1, l, relators: relators.len() },
                });
                Ok(TraceAction::KillAndEmit { relators, witness: (i + 1, l) })
            }
            None => {
                self.first_seen.insert(key, l - 1);
                self.indexed = l;
                self.transcript.push(TraceRecord { ordinal: l, action: ActionSummary::Resume });
                Ok(TraceAction::Resume)
            }
        }
    }

    /// Homogeneous components of `u_si - u_sl`, ascending `s` then degree,
    /// without repeats.
    fn differences(&self, i: usize, l: usize) -> Result<Vec<Polynomial>> {
        let mut out: Vec<Polynomial> = Vec::new();
        for (a, b) in self.tuples[i].iter().zip(&self.tuples[l]) {
            for (_, comp) in a.sub(b)?.homogeneous_components() {
                if !out.contains(&comp) {
                    out.push(comp);
                }
            }
        }
        Ok(out)
    }

    /// Degree histogram of what this tracer emitted, with its bound.
    pub fn budget_of(&self) -> Result<BudgetRecord> {
        let mut histogram = BTreeMap::new();
        for r in &self.emitted {
            let d = r.min_degree().finite().expect("emitted relators are nonzero");
            *histogram.entry(d).or_insert(0u64) += 1;
        }
        let n = self.arity.unwrap_or(0);
        let record = BudgetRecord { k: self.k, arity: n, threshold: self.schedule.eval(n, self.k), histogram };
        if !record.within_bound() {
            return Err(Error::Invariant(format!("tracer {} exceeded its relator budget: {record:?}", self.k)));
        }
        Ok(record)
    }

    pub fn transcript_text(&self, alphabet: &Alphabet) -> String {
        let mut s = String::new();
        for rec in &self.transcript {
            let tuple: Vec<String> = self.tuples[rec.ordinal - 1].iter().map(|u| u.to_text(alphabet)).collect();
            let action = match &rec.action {
                ActionSummary::Resume => "resume".to_string(),
                ActionSummary::KillMalformed { expected, got } => {
                    format!("kill-malformed arity={got} expected={expected}")
                }
                ActionSummary::KillAndEmit { i, l, relators } => format!("kill-emit i={i} l={l} relators={relators}"),
            };
            s.push_str(&format!("k={} #{} ({}) {}\n", self.k, rec.ordinal, tuple.join(", "), action));
        }
        s
    }
}

/// Relators emitted by tracer `k` per degree, against `r_i(k) <= n` for
/// `i >= f(n, k)` and `r_i(k) = 0` below.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetRecord {
    pub k: u64,
    pub arity: usize,
    pub threshold: u64,
    pub histogram: BTreeMap<usize, u64>,
}

impl BudgetRecord {
    pub fn within_bound(&self) -> bool {
        self.histogram.iter().all(|(&d, &c)| (d as u64) >= self.threshold && c <= self.arity as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::Word;
    use crate::quotient::{Quotient, RelatorSet};

    fn cfg() -> AlgebraConfig {
        AlgebraConfig::new(3, 2).unwrap()
    }

    fn x_pow(e: usize) -> Polynomial {
        Polynomial::monomial(cfg(), Word::power(0, e), 1)
    }

    #[test]
    fn catches_high_degree_difference() {
        let c = cfg();
        let mut s = TraceSession::new(1, c, Schedule::Standard);
        let x = Polynomial::var(c, 0);
        assert_eq!(s.on_semicolon(vec![x.clone()]).unwrap(), TraceAction::Resume);
        let act = s.on_semicolon(vec![x.add(&x_pow(5)).unwrap()]).unwrap();
        // (p - 1) x^5 = 2 x^5 over Z_3
        assert_eq!(act, TraceAction::KillAndEmit { relators: vec![x_pow(5).scale(2)], witness: (1, 2) });
        assert_eq!(s.status(), TraceStatus::KilledCaught);
        let b = s.budget_of().unwrap();
        assert_eq!(b.histogram, BTreeMap::from([(5, 1)]));
        assert_eq!(b.threshold, 4);
        assert!(s.on_semicolon(vec![x]).is_err());
    }

    #[test]
    fn low_degree_difference_resumes() {
        let c = cfg();
        let mut s = TraceSession::new(1, c, Schedule::Standard);
        s.on_semicolon(vec![Polynomial::var(c, 0)]).unwrap();
        assert_eq!(s.on_semicolon(vec![Polynomial::var(c, 1)]).unwrap(), TraceAction::Resume);
    }

    #[test]
    fn arity_change_kills() {
        let c = cfg();
        let mut s = TraceSession::new(1, c, Schedule::Standard);
        s.on_semicolon(vec![Polynomial::var(c, 0)]).unwrap();
        let act = s.on_semicolon(vec![Polynomial::var(c, 0), Polynomial::var(c, 1)]).unwrap();
        assert_eq!(act, TraceAction::KillMalformed);
        assert!(s.budget_of().unwrap().histogram.is_empty());
    }

    #[test]
    fn arity_zero_caught_at_second_semicolon() {
        let mut s = TraceSession::new(3, cfg(), Schedule::Standard);
        assert_eq!(s.on_semicolon(vec![]).unwrap(), TraceAction::Resume);
        assert_eq!(s.on_semicolon(vec![]).unwrap(), TraceAction::KillAndEmit { relators: vec![], witness: (1, 2) });
        assert!(s.budget_of().unwrap().histogram.is_empty());
    }

    #[test]
    fn repeated_tuple_is_caught_without_relators() {
        let c = cfg();
        let mut s = TraceSession::new(9, c, Schedule::Standard);
        let t = vec![Polynomial::var(c, 1), Polynomial::one(c)];
        s.on_semicolon(t.clone()).unwrap();
        let act = s.on_semicolon(t).unwrap();
        assert_eq!(act, TraceAction::KillAndEmit { relators: vec![], witness: (1, 2) });
    }

    #[test]
    fn minimal_i_wins() {
        let c = cfg();
        let mut s = TraceSession::new(1, c, Schedule::Constant(2));
        for t in [x_pow(0), x_pow(1), x_pow(3)] {
            assert_eq!(s.on_semicolon(vec![t]).unwrap(), TraceAction::Resume);
        }
        // x^4 agrees with x^3 below degree 2, and with nothing earlier
        match s.on_semicolon(vec![x_pow(4)]).unwrap() {
            TraceAction::KillAndEmit { witness, .. } => assert_eq!(witness, (3, 4)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn emission_identifies_the_witness_tuples() {
        let c = cfg();
        let mut s = TraceSession::new(1, c, Schedule::Standard);
        let a = vec![Polynomial::var(c, 0), Polynomial::var(c, 1)];
        let tail = Polynomial::monomial(c, Word(vec![0, 1, 1, 0, 1]), 1)
            .add(&Polynomial::monomial(c, Word(vec![1; 7]), 2))
            .unwrap();
        let b = vec![a[0].add(&tail).unwrap(), a[1].sub(&tail).unwrap()];
        s.on_semicolon(a.clone()).unwrap();
        let TraceAction::KillAndEmit { relators, .. } = s.on_semicolon(b.clone()).unwrap() else {
            panic!("expected a catch");
        };
        // -tail and +tail have components 5 and 7 each: 4 distinct relators
        assert_eq!(relators.len(), 4);
        let q = Quotient::new(&RelatorSet::new(c, relators).unwrap(), 7).unwrap();
        for (u, v) in a.iter().zip(&b) {
            assert!(q.equal_mod(u, v).unwrap());
        }
        let budget = s.budget_of().unwrap();
        assert!(budget.within_bound());
        assert_eq!(budget.histogram, BTreeMap::from([(5, 2), (7, 2)]));
    }

    #[test]
    fn session_survives_serialization() {
        let c = cfg();
        let mut s = TraceSession::new(1, c, Schedule::Standard);
        s.on_semicolon(vec![x_pow(1)]).unwrap();
        s.on_semicolon(vec![x_pow(2)]).unwrap();
        let mut back: TraceSession = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        // x + x^9 agrees with x below degree 4
        let act = back.on_semicolon(vec![x_pow(1).add(&x_pow(9)).unwrap()]).unwrap();
        assert!(matches!(act, TraceAction::KillAndEmit { witness: (1, 3), .. }));
    }
}
