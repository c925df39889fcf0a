use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use monster_core::foundry::parse_ledger;
use monster_core::group::{parse_word, separating_depth_elements};
use monster_core::gs_series::{decimal, negativity_check};
use monster_core::machine::symbols_to_text;
use monster_core::quotient::golod_shafarevich_violation;
use monster_core::stream_parser::parse_text;
use monster_core::{
    AlgebraConfig, Alphabet, Error, FoundryConfig, FoundryState, GroupContext, LedgerEntry, Machine, Program,
    ProgramSpace, RelatorSet, Result,
};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "monster", version, about = "Relator foundry, quotient engine and finite quotients of G")]
struct Cli {
    /// Foundry config file (key=value lines); defaults apply without it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// Run the foundry from its seed ledger.
    FoundryRun {
        #[arg(long)]
        budget: Option<u64>,
        /// Write the ledger here instead of stdout.
        #[arg(long)]
        ledger: Option<PathBuf>,
        /// Write a resumable snapshot here.
        #[arg(long)]
        snapshot: Option<PathBuf>,
    },
    /// Continue a run from a snapshot.
    FoundryResume {
        #[arg(long)]
        snapshot: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        ledger: Option<PathBuf>,
        /// Where to write the new snapshot (default: overwrite the input).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Graded dimensions of F<X>/(R) up to a depth.
    Dims {
        #[arg(long)]
        ledger: Option<PathBuf>,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Exact series value at t = 1/2 for a ledger.
    GsCheck {
        #[arg(long)]
        ledger: Option<PathBuf>,
    },
    /// Parse an output stream in surface text (argument or stdin).
    Parse {
        text: Option<String>,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        vars: Option<usize>,
        /// Compare the empty-tuple count with a reference count.
        #[arg(long)]
        expect_empty: Option<u64>,
    },
    /// Run one program, given as assembly or by its number.
    MachineRun {
        #[arg(long, conflicts_with = "index")]
        asm: Option<PathBuf>,
        #[arg(long)]
        index: Option<String>,
        #[arg(long, default_value_t = 1000)]
        steps: u64,
    },
    /// List programs of the enumeration.
    MachineEnum {
        #[arg(long, default_value = "1")]
        from: String,
        #[arg(long, default_value_t = 10)]
        count: u64,
        /// Print the number of an assembly file instead.
        #[arg(long)]
        encode: Option<PathBuf>,
    },
    /// Evaluate generator words in the depth-D quotient of G.
    GroupEval {
        words: Vec<String>,
        #[arg(long)]
        ledger: Option<PathBuf>,
        #[arg(long)]
        depth: Option<usize>,
        /// Check group laws on this many random words instead.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Summary of a ledger: identity, series, dimensions, recurrence.
    Report {
        #[arg(long)]
        ledger: Option<PathBuf>,
        #[arg(long)]
        depth: Option<usize>,
    },
}

struct Ctx {
    config: FoundryConfig,
    format: Format,
}

impl Ctx {
    fn emit(&self, key: &str, text_label: &str, value: impl std::fmt::Display) {
        match self.format {
            Format::Records => println!("{key}={value}"),
            Format::Text => println!("{text_label}: {value}"),
        }
    }

    fn algebra(&self) -> Result<AlgebraConfig> {
        self.config.algebra()
    }

    /// The ledger file, or the seed ledger when none is given.
    fn ledger(&self, path: Option<&Path>) -> Result<Vec<LedgerEntry>> {
        match path {
            Some(p) => parse_ledger(&fs::read_to_string(p)?, self.algebra()?, &self.config.alphabet()),
            None => Ok(FoundryState::init(self.config.clone())?.ledger().to_vec()),
        }
    }

    fn relators(&self, entries: &[LedgerEntry]) -> Result<RelatorSet> {
        monster_core::foundry::ledger_relators(entries, self.algebra()?)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("error: bad arguments"));
            return ExitCode::from(2);
        }
    };
    let config = match &cli.config {
        Some(path) => FoundryConfig::load(path),
        None => Ok(FoundryConfig::default()),
    };
    let outcome = config.and_then(|config| run(&Ctx { config, format: cli.format }, cli.command));
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e.to_string().replace('\n', " "));
            ExitCode::from(1)
        }
    }
}

/// Returns whether every asserted invariant held.
fn run(ctx: &Ctx, command: Command) -> Result<bool> {
    match command {
        Command::FoundryRun { budget, ledger, snapshot } => {
            let mut state = FoundryState::init(ctx.config.clone())?;
            state.run(budget.unwrap_or(ctx.config.budget))?;
            finish_run(ctx, &state, ledger.as_deref(), snapshot.as_deref())
        }
        Command::FoundryResume { snapshot, budget, ledger, out } => {
            let text = fs::read_to_string(&snapshot)?;
            let mut state = FoundryState::resume(&ctx.config, &text)?;
            state.run(budget.unwrap_or(ctx.config.budget))?;
            finish_run(ctx, &state, ledger.as_deref(), Some(out.as_deref().unwrap_or(&snapshot)))
        }
        Command::Dims { ledger, depth } => {
            let entries = ctx.ledger(ledger.as_deref())?;
            let relators = ctx.relators(&entries)?;
            let q = monster_core::Quotient::new(&relators, depth.unwrap_or(ctx.config.depth))?;
            match ctx.format {
                Format::Text => {
                    println!("degree dimension rank relators");
                    print!("{}", q.dimension_report());
                }
                Format::Records => {
                    for line in q.dimension_report().lines() {
                        let f: Vec<&str> = line.split(' ').collect();
                        println!("degree={} dimension={} rank={} relators={}", f[0], f[1], f[2], f[3]);
                    }
                }
            }
            let violation = golod_shafarevich_violation(ctx.config.m, &q.dimensions(), &relators.tally());
            ctx.emit("recurrence", "recurrence", violation.map_or("ok".to_string(), |d| format!("violated at {d}")));
            Ok(violation.is_none())
        }
        Command::GsCheck { ledger } => {
            let entries = ctx.ledger(ledger.as_deref())?;
            let tally = ctx.relators(&entries)?.tally();
            let neg = negativity_check(ctx.config.m, &tally);
            ctx.emit("value", "value at t=1/2", &neg.value);
            ctx.emit("decimal", "decimal", decimal(&neg.value, 12));
            for (d, c) in tally.iter() {
                ctx.emit(&format!("r{d}"), &format!("relators of degree {d}"), c);
            }
            ctx.emit("status", "status", if neg.negative { "PASS" } else { "FAIL" });
            Ok(neg.negative)
        }
        Command::Parse { text, p, vars, expect_empty } => {
            let text = match text {
                Some(t) => t,
                None => {
                    let mut s = String::new();
                    std::io::stdin().read_to_string(&mut s)?;
                    s
                }
            };
            let algebra = AlgebraConfig::new(p.unwrap_or(ctx.config.p), vars.unwrap_or(ctx.config.m))?;
            let alphabet = Alphabet::default_for(algebra.vars);
            let (events, state) = parse_text(&text, algebra, &alphabet)?;
            let mut empty = 0u64;
            for ev in &events {
                let items: Vec<String> = ev.tuple.iter().map(|u| u.to_text(&alphabet)).collect();
                empty += ev.tuple.is_empty() as u64;
                ctx.emit(
                    &format!("tuple{}", ev.ordinal),
                    &format!("tuple {}", ev.ordinal),
                    format!("({})", items.join(", ")),
                );
            }
            let pending = state.pending();
            let mut open: Vec<String> = pending.tuple.iter().map(|u| u.to_text(&alphabet)).collect();
            if let Some(e) = pending.open_element() {
                open.push(format!("{} ...", e.to_text(&alphabet)));
            }
            ctx.emit("pending", "pending", format!("({})", open.join(", ")));
            ctx.emit("completed", "completed tuples", events.len());
            ctx.emit("empty", "empty tuples", empty);
            if let Some(expected) = expect_empty {
                let delta = empty as i64 - expected as i64;
                ctx.emit("empty_delta", "empty tuples minus reference", format!("{delta:+}"));
            }
            Ok(true)
        }
        Command::MachineRun { asm, index, steps } => {
            let algebra = ctx.algebra()?;
            let alphabet = ctx.config.alphabet();
            let program = match (asm, index) {
                (Some(path), _) => Program::assemble(&fs::read_to_string(path)?, &algebra, &alphabet)?,
                (None, Some(k)) => space(ctx)?.enumerate(&parse_big(&k)?)?,
                (None, None) => return Err(Error::Config("machine-run needs --asm or --index".into())),
            };
            let mut machine = Machine::new(program);
            let out = machine.run(steps);
            ctx.emit("output", "output", symbols_to_text(&out, &alphabet));
            ctx.emit("status", "status", format!("{:?}", machine.state.status).to_lowercase());
            ctx.emit("steps", "steps", machine.state.steps_executed);
            Ok(true)
        }
        Command::MachineEnum { from, count, encode } => {
            let space = space(ctx)?;
            let alphabet = ctx.config.alphabet();
            if let Some(path) = encode {
                let program = Program::assemble(&fs::read_to_string(path)?, &ctx.algebra()?, &alphabet)?;
                ctx.emit("index", "index", space.encode(&program));
                return Ok(true);
            }
            let start = parse_big(&from)?;
            for i in 0..count {
                let k = &start + i;
                let program = space.enumerate(&k)?;
                let asm = program.disassemble(&alphabet);
                let listing = asm.lines().map(str::trim).collect::<Vec<_>>().join("; ");
                match ctx.format {
                    Format::Text => println!("{k}: {listing}"),
                    Format::Records => println!("index={k} program={listing}"),
                }
            }
            Ok(true)
        }
        Command::GroupEval { words, ledger, depth, samples, seed } => {
            let entries = ctx.ledger(ledger.as_deref())?;
            let relators = ctx.relators(&entries)?;
            let group = GroupContext::new(&relators, depth.unwrap_or(ctx.config.depth))?;
            let alphabet = ctx.config.alphabet();
            if let Some(n) = samples {
                return check_laws(ctx, &group, n, seed);
            }
            if words.is_empty() {
                return Err(Error::Config("group-eval needs a word or --samples".into()));
            }
            let mut elements = Vec::new();
            for (i, w) in words.iter().enumerate() {
                let g = group.from_word(&parse_word(w, &alphabet)?);
                ctx.emit(&format!("element{}", i + 1), &format!("element {}", i + 1), group.render(&g, &alphabet));
                elements.push(g);
            }
            if let [g1, g2] = &elements[..] {
                let sep = separating_depth_elements(g1, g2);
                let msg = match sep {
                    Some(d) => format!("separated at depth {d}"),
                    None => format!("not separated up to depth {} (equality in G is not certified)", group.depth()),
                };
                ctx.emit("separation", "separation", msg);
            }
            Ok(true)
        }
        Command::Report { ledger, depth } => {
            let entries = ctx.ledger(ledger.as_deref())?;
            let relators = ctx.relators(&entries)?;
            let tally = relators.tally();
            let neg = negativity_check(ctx.config.m, &tally);
            let q = monster_core::Quotient::new(&relators, depth.unwrap_or(ctx.config.depth))?;
            let dims = q.dimensions();
            let violation = golod_shafarevich_violation(ctx.config.m, &dims, &tally);
            let positive = dims.iter().all(|&b| b > 0);
            ctx.emit("config_hash", "config hash", ctx.config.hash());
            ctx.emit("ledger", "ledger entries", entries.len());
            ctx.emit("value", "value at t=1/2", &neg.value);
            ctx.emit("negative", "negative", neg.negative);
            let dims_text: Vec<String> = dims.iter().map(u64::to_string).collect();
            ctx.emit("dimensions", "dimensions", dims_text.join(","));
            ctx.emit("positive", "all positive", positive);
            ctx.emit("recurrence", "recurrence", violation.map_or("ok".to_string(), |d| format!("violated at {d}")));
            Ok(neg.negative && positive && violation.is_none())
        }
    }
}

fn finish_run(ctx: &Ctx, state: &FoundryState, ledger: Option<&Path>, snapshot: Option<&Path>) -> Result<bool> {
    state.check_invariants()?;
    let text = state.ledger_text();
    match ledger {
        Some(path) => fs::write(path, &text)?,
        None => print!("{text}"),
    }
    if let Some(path) = snapshot {
        fs::write(path, state.snapshot()?)?;
    }
    if ledger.is_some() {
        let retired = state.retired();
        ctx.emit("steps", "global step", state.global_step());
        ctx.emit("ledger", "ledger entries", state.ledger().len());
        ctx.emit("live", "live sessions", state.live_sessions().len());
        ctx.emit("halted", "halted", retired.halted);
        ctx.emit("killed_malformed", "killed malformed", retired.killed_malformed);
        ctx.emit("killed_caught", "killed caught", retired.killed_caught);
        ctx.emit("value", "value at t=1/2", state.series_value());
    }
    Ok(true)
}

fn space(ctx: &Ctx) -> Result<ProgramSpace> {
    ProgramSpace::with_prelude(ctx.algebra()?, ctx.config.prelude.clone())
}

fn parse_big(s: &str) -> Result<BigUint> {
    s.parse().map_err(|_| Error::Config(format!("{s:?} is not a program number")))
}

fn check_laws(ctx: &Ctx, group: &GroupContext, n: usize, seed: u64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens = group.generators();
    let word = |rng: &mut ChaCha8Rng| {
        let len = rng.gen_range(0..8);
        let mut g = group.identity();
        for _ in 0..len {
            let x = &gens[rng.gen_range(0..gens.len())];
            let x = if rng.gen_bool(0.5) { group.inv(x) } else { x.clone() };
            g = group.mul(&g, &x);
        }
        g
    };
    let mut failures = 0usize;
    for _ in 0..n {
        let (a, b, c) = (word(&mut rng), word(&mut rng), word(&mut rng));
        let assoc = group.mul(&group.mul(&a, &b), &c) == group.mul(&a, &group.mul(&b, &c));
        let ident = group.mul(&a, &group.identity()) == a && group.mul(&group.identity(), &a) == a;
        let inv = group.is_identity(&group.mul(&a, &group.inv(&a)));
        failures += !(assoc && ident && inv) as usize;
    }
    ctx.emit("samples", "samples", n);
    ctx.emit("failures", "failures", failures);
    ctx.emit("status", "status", if failures == 0 { "PASS" } else { "FAIL" });
    Ok(failures == 0)
}
