//! The relator foundry: seeds `R` with `x^alpha`, launches tracer `k` at
//! global step `k`, and dovetails every live (tracer, program) pair.
//!
//! One macro-step launches the next program and then advances every live
//! session by exactly one machine instruction, in ascending `k`. A tuple
//! completed by that instruction is handed to the tracer before anything
//! else runs, which plays the role of pausing the program. Relators are
//! committed to the append-only ledger in ascending `k`, and the series
//! `1 - |X|/2 + H_R(1/2)` is re-checked after every append.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::{is_prime, AlgebraConfig, MAX_PRIME};
use crate::freealg::{Alphabet, Polynomial, Word};
use crate::gs_series::{decimal, default_alpha, negativity_check, DegreeTally, HalfSeries, Schedule};
use crate::machine::{Machine, Program, ProgramSpace, Status};
use crate::quotient::{width, Quotient, RelatorSet};
use crate::stream_parser::{parse_polynomial, ParseState};
use crate::tracer::{BudgetRecord, TraceAction, TraceSession, TraceStatus};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoundryConfig {
    pub p: u32,
    pub m: usize,
    pub alpha: usize,
    pub schedule: Schedule,
    /// Default number of macro-steps for a run.
    pub budget: u64,
    /// Working depth `D` of the quotient engine.
    pub depth: usize,
    /// Programs placed at indices `2, 3, ...` of the enumeration.
    pub prelude: Vec<Program>,
}

impl Default for FoundryConfig {
    fn default() -> Self {
        Self { p: 3, m: 4, alpha: 5, schedule: Schedule::Standard, budget: 100_000, depth: 8, prelude: Vec::new() }
    }
}

impl FoundryConfig {
    pub fn with_vars(p: u32, m: usize) -> Result<Self> {
        Ok(Self { p, m, alpha: default_alpha(m)?, ..Self::default() })
    }

    pub fn algebra(&self) -> Result<AlgebraConfig> {
        AlgebraConfig::new(self.p, self.m)
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::default_for(self.m)
    }

    pub fn seed_tally(&self) -> DegreeTally {
        DegreeTally::from_counts([(self.alpha, self.m as u64)]).expect("alpha >= 2")
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) || self.p > MAX_PRIME {
            return Err(Error::Config(format!("p = {} must be a prime below 10", self.p)));
        }
        default_alpha(self.m)?;
        self.algebra()?;
        if self.alpha < 2 {
            return Err(Error::Config(format!("alpha = {} must be at least 2", self.alpha)));
        }
        if self.schedule.minimum() < 2 {
            return Err(Error::Config(format!("schedule {} can emit relators of degree below 2", self.schedule)));
        }
        let seed = negativity_check(self.m, &self.seed_tally());
        if !seed.negative {
            return Err(Error::Config(format!("seed relators already break negativity: value {}", seed.value)));
        }
        width(self.m, self.depth)?;
        ProgramSpace::with_prelude(self.algebra()?, self.prelude.clone())?;
        Ok(())
    }

    /// Fields that determine the ledger, one per line.
    fn identity_text(&self) -> String {
        let alphabet = self.alphabet();
        let mut s = format!("p={}\nm={}\nalpha={}\nschedule={}\n", self.p, self.m, self.alpha, self.schedule);
        for q in &self.prelude {
            s.push_str("prelude:\n");
            s.push_str(&q.disassemble(&alphabet));
        }
        s
    }

    /// SHA-256 of everything the ledger depends on (not budget or depth).
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.identity_text().as_bytes()))
    }

    /// Parses `key=value` lines. Keys: `p`, `m`, `alpha`, `schedule`,
    /// `budget`, `depth`, and `prelude` (a path to an assembly file,
    /// repeatable, relative to `base`). `alpha` defaults to `m + 1`.
    pub fn from_text(text: &str, base: Option<&Path>) -> Result<Self> {
        let mut cfg = FoundryConfig::default();
        let mut alpha = None;
        let mut prelude_paths = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| -> Result<u64> {
                v.parse().map_err(|_| Error::Config(format!("line {}: {key} expects a number", lineno + 1)))
            };
            match key {
                "p" => cfg.p = num(value)? as u32,
                "m" => cfg.m = num(value)? as usize,
                "alpha" => alpha = Some(num(value)? as usize),
                "schedule" => cfg.schedule = Schedule::from_str(value)?,
                "budget" => cfg.budget = num(value)?,
                "depth" => cfg.depth = num(value)? as usize,
                "prelude" => prelude_paths.push(value.to_string()),
                other => return Err(Error::Config(format!("line {}: unknown key {other:?}", lineno + 1))),
            }
        }
        cfg.alpha = match alpha {
            Some(a) => a,
            None => default_alpha(cfg.m)?,
        };
        let algebra = cfg.algebra()?;
        let alphabet = cfg.alphabet();
        for path in prelude_paths {
            let full = match base {
                Some(b) => b.join(&path),
                None => path.into(),
            };
            let text = std::fs::read_to_string(&full)?;
            cfg.prelude.push(Program::assemble(&text, &algebra, &alphabet)?);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_text(&text, path.parent())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Source {
    Seed,
    Tracer(u64),
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Seed => f.write_str("seed"),
            Source::Tracer(k) => write!(f, "tracer:{k}"),
        }
    }
}

impl FromStr for Source {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "seed" {
            return Ok(Source::Seed);
        }
        s.strip_prefix("tracer:")
            .and_then(|k| k.parse().ok())
            .map(Source::Tracer)
            .ok_or_else(|| Error::Parse(format!("bad ledger source {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub seq: u64,
    pub source: Source,
    pub global_step: u64,
    pub degree: usize,
    pub relator: Polynomial,
}

impl LedgerEntry {
    /// `seq source global_step degree relator`, space separated.
    pub fn to_line(&self, alphabet: &Alphabet) -> String {
        format!("{} {} {} {} {}", self.seq, self.source, self.global_step, self.degree, self.relator.to_text(alphabet))
    }

    pub fn from_line(line: &str, cfg: AlgebraConfig, alphabet: &Alphabet) -> Result<Self> {
        let parts: Vec<&str> = line.split(' ').collect();
        let [seq, source, step, degree, text] = parts[..] else {
            return Err(Error::Parse(format!("ledger line needs 5 fields: {line:?}")));
        };
        let bad = |what: &str| Error::Parse(format!("bad {what} in ledger line {line:?}"));
        let relator = parse_polynomial(text, cfg, alphabet)?;
        let entry = LedgerEntry {
            seq: seq.parse().map_err(|_| bad("seq"))?,
            source: source.parse()?,
            global_step: step.parse().map_err(|_| bad("global_step"))?,
            degree: degree.parse().map_err(|_| bad("degree"))?,
            relator,
        };
        if entry.relator.min_degree().finite() != Some(entry.degree) || !entry.relator.is_homogeneous() {
            return Err(bad("relator degree"));
        }
        Ok(entry)
    }
}

pub fn ledger_text(entries: &[LedgerEntry], alphabet: &Alphabet) -> String {
    let mut s = String::new();
    for e in entries {
        s.push_str(&e.to_line(alphabet));
        s.push('\n');
    }
    s
}

pub fn parse_ledger(text: &str, cfg: AlgebraConfig, alphabet: &Alphabet) -> Result<Vec<LedgerEntry>> {
    let entries: Vec<LedgerEntry> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| LedgerEntry::from_line(l, cfg, alphabet))
        .collect::<Result<_>>()?;
    for (i, e) in entries.iter().enumerate() {
        if e.seq != i as u64 {
            return Err(Error::Parse(format!("ledger seq {} at position {i}", e.seq)));
        }
    }
    Ok(entries)
}

pub fn ledger_relators(entries: &[LedgerEntry], cfg: AlgebraConfig) -> Result<RelatorSet> {
    RelatorSet::new(cfg, entries.iter().map(|e| e.relator.clone()).collect())
}

/// One traced program.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Session {
    pub k: u64,
    pub machine: Machine,
    pub parser: ParseState,
    pub trace: TraceSession,
}

/// What became of a retired session.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetirementCounts {
    pub halted: u64,
    pub killed_malformed: u64,
    pub killed_caught: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FoundryState {
    config: FoundryConfig,
    t: u64,
    live: Vec<Session>,
    ledger: Vec<LedgerEntry>,
    tally: DegreeTally,
    budgets: BTreeMap<u64, BudgetRecord>,
    retired: RetirementCounts,
    #[serde(skip)]
    derived: Option<Derived>,
}

/// State recomputable from the serialized fields.
#[derive(Debug, Clone)]
struct Derived {
    algebra: AlgebraConfig,
    space: ProgramSpace,
    series: HalfSeries,
    seen: HashSet<Polynomial>,
}

/// Result of a single macro-step.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StepReport {
    pub appended: usize,
    pub retired: usize,
}

impl FoundryState {
    pub fn init(config: FoundryConfig) -> Result<Self> {
        config.validate()?;
        let algebra = config.algebra()?;
        let mut state = FoundryState {
            t: 0,
            live: Vec::new(),
            ledger: Vec::new(),
            tally: DegreeTally::new(),
            budgets: BTreeMap::new(),
            retired: RetirementCounts::default(),
            derived: None,
            config,
        };
        state.rebuild_derived()?;
        for x in 0..state.config.m {
            let seed = Polynomial::monomial(algebra, Word::power(x, state.config.alpha), 1);
            state.append(Source::Seed, seed)?;
        }
        Ok(state)
    }

    fn rebuild_derived(&mut self) -> Result<()> {
        let algebra = self.config.algebra()?;
        self.derived = Some(Derived {
            algebra,
            space: ProgramSpace::with_prelude(algebra, self.config.prelude.clone())?,
            series: HalfSeries::from_tally(self.config.m, &self.tally),
            seen: self.ledger.iter().map(|e| e.relator.clone()).collect(),
        });
        Ok(())
    }

    fn derived(&mut self) -> &mut Derived {
        self.derived.as_mut().expect("derived state is built on init and load")
    }

    pub fn config(&self) -> &FoundryConfig {
        &self.config
    }

    pub fn global_step(&self) -> u64 {
        self.t
    }

    pub fn ledger(&self) -> &[LedgerEntry] {
        &self.ledger
    }

    pub fn tally(&self) -> &DegreeTally {
        &self.tally
    }

    pub fn live_sessions(&self) -> &[Session] {
        &self.live
    }

    pub fn budgets(&self) -> &BTreeMap<u64, BudgetRecord> {
        &self.budgets
    }

    pub fn retired(&self) -> RetirementCounts {
        self.retired
    }

    pub fn series_value(&self) -> crate::gs_series::Rational {
        self.derived.as_ref().expect("built").series.value().clone()
    }

    pub fn relators(&self) -> RelatorSet {
        ledger_relators(&self.ledger, self.config.algebra().expect("validated")).expect("ledger relators are valid")
    }

    pub fn quotient(&self, depth: usize) -> Result<Quotient> {
        Quotient::new(&self.relators(), depth)
    }

    pub fn ledger_text(&self) -> String {
        ledger_text(&self.ledger, &self.config.alphabet())
    }

    /// Appends `relator` unless `R` already contains it.
    fn append(&mut self, source: Source, relator: Polynomial) -> Result<bool> {
        let degree = crate::quotient::validate_relator(&relator)?;
        let t = self.t;
        let d = self.derived();
        if !d.seen.insert(relator.clone()) {
            return Ok(false);
        }
        d.series.add_relator(degree);
        let negative = d.series.is_negative();
        let value = d.series.value().clone();
        self.tally.add(degree, 1)?;
        let seq = self.ledger.len() as u64;
        self.ledger.push(LedgerEntry { seq, source, global_step: t, degree, relator });
        if !negative {
            return Err(Error::Invariant(format!(
                "series at t=1/2 is {} ({}) after ledger entry {seq} from {source}; schedule {} is unsound",
                value,
                decimal(&value, 12),
                self.config.schedule
            )));
        }
        Ok(true)
    }

    /// Launches program `t + 1` and advances every live session one step.
    pub fn macro_step(&mut self) -> Result<StepReport> {
        self.t += 1;
        let k = self.t;
        let algebra = self.derived().algebra;
        let program = self.derived().space.enumerate_u64(k)?;
        self.live.push(Session {
            k,
            machine: Machine::new(program),
            parser: ParseState::new(algebra),
            trace: TraceSession::new(k, algebra, self.config.schedule),
        });

        let mut report = StepReport::default();
        let mut emissions: Vec<(u64, Vec<Polynomial>)> = Vec::new();
        for session in &mut self.live {
            let Some(sym) = session.machine.step()? else {
                continue;
            };
            let Some(event) = session.parser.feed(sym) else {
                continue;
            };
            match session.trace.on_semicolon(event.tuple)? {
                TraceAction::Resume => {}
                TraceAction::KillMalformed => session.machine.state.kill(),
                TraceAction::KillAndEmit { relators, .. } => {
                    session.machine.state.kill();
                    emissions.push((session.k, relators));
                }
            }
        }

        let before = self.live.len();
        let mut retired = self.retired;
        let mut budgets = Vec::new();
        self.live.retain(|s| {
            match s.machine.state.status {
                Status::Running => return true,
                Status::Halted => retired.halted += 1,
                Status::Killed => match s.trace.status() {
                    TraceStatus::KilledMalformed => retired.killed_malformed += 1,
                    _ => retired.killed_caught += 1,
                },
            }
            if s.trace.status() == TraceStatus::KilledCaught {
                budgets.push(s.trace.budget_of());
            }
            false
        });
        self.retired = retired;
        report.retired = before - self.live.len();
        for b in budgets {
            let b = b?;
            self.budgets.insert(b.k, b);
        }

        // sessions were visited in ascending k, so emissions are in order
        for (source, relators) in emissions {
            for r in relators {
                if self.append(Source::Tracer(source), r)? {
                    report.appended += 1;
                }
            }
        }
        Ok(report)
    }

    pub fn run(&mut self, budget: u64) -> Result<()> {
        for _ in 0..budget {
            self.macro_step()?;
        }
        Ok(())
    }

    /// Runs and calls `on_append` with the ledger after each step that grew it.
    pub fn run_observed(&mut self, budget: u64, mut on_append: impl FnMut(&FoundryState) -> Result<()>) -> Result<()> {
        for _ in 0..budget {
            if self.macro_step()?.appended > 0 {
                on_append(self)?;
            }
        }
        Ok(())
    }

    pub fn snapshot(&self) -> Result<String> {
        let snap = Snapshot { config_hash: self.config.hash(), state: self.clone() };
        Ok(serde_json::to_string(&snap)?)
    }

    /// Restores a snapshot, refusing one taken under a different config.
    pub fn resume(config: &FoundryConfig, snapshot: &str) -> Result<Self> {
        config.validate()?;
        let snap: Snapshot = serde_json::from_str(snapshot)?;
        if snap.config_hash != config.hash() || snap.state.config.hash() != config.hash() {
            return Err(Error::Config(format!(
                "snapshot config hash {} does not match {}",
                snap.config_hash,
                config.hash()
            )));
        }
        let mut state = snap.state;
        state.config.budget = config.budget;
        state.config.depth = config.depth;
        state.rebuild_derived()?;
        if state.tally != ledger_relators(&state.ledger, state.config.algebra()?)?.tally() {
            return Err(Error::Invariant("snapshot tally does not match its ledger".into()));
        }
        Ok(state)
    }

    /// Per-source budgets all within bound, tally equal to the ledger
    /// histogram, and the series negative.
    pub fn check_invariants(&self) -> Result<()> {
        let tally = self.relators().tally();
        if tally != self.tally {
            return Err(Error::Invariant("tally differs from ledger histogram".into()));
        }
        let neg = negativity_check(self.config.m, &self.tally);
        if !neg.negative {
            return Err(Error::Invariant(format!("series value {} is not negative", neg.value)));
        }
        for (k, b) in &self.budgets {
            if !b.within_bound() {
                return Err(Error::Invariant(format!("tracer {k} over budget")));
            }
        }
        for e in &self.ledger {
            if let Source::Tracer(k) = e.source {
                let b = self
                    .budgets
                    .get(&k)
                    .ok_or_else(|| Error::Invariant(format!("ledger entry {} from unknown tracer {k}", e.seq)))?;
                if (e.degree as u64) < b.threshold {
                    return Err(Error::Invariant(format!("ledger entry {} below f for tracer {k}", e.seq)));
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct Snapshot {
    config_hash: String,
    state: FoundryState,
}
