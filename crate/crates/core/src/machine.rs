//! Counter machines with output, and a bijective Gödel numbering of them.
//!
//! A program is a finite list of instructions over unbounded natural
//! registers (`INC`, saturating `DEC`, `JZ`, `JMP`), an `OUT` instruction
//! writing one symbol of the output alphabet, and `HALT`. Jumping past the
//! end of the program halts the machine.
//!
//! Numbering is a composition of two bijections. Each instruction maps to a
//! natural *code* (`HALT` is 0, then the `OUT` symbols, then `INC`/`DEC`/
//! `JMP`/`JZ` interleaved with Cantor pairing for `JZ`). A code sequence
//! `a_1, ..., a_L` maps to the set of bit positions `s_1 < ... < s_L` with
//! `s_1 = a_1` and `s_i = s_{i-1} + a_i + 1`, and the program's number is
//! `1 + sum 2^{s_i}`. The empty program is number 1.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::AlgebraConfig;
use crate::freealg::Alphabet;

/// One symbol of the output alphabet `F ⊔ X ⊔ {+, ",", ;}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OutputSymbol {
    Digit(u8),
    Var(u8),
    Plus,
    Comma,
    Semicolon,
}

impl OutputSymbol {
    /// Position in the alphabet: digits, then variables, then `+ , ;`.
    pub fn ordinal(self, cfg: &AlgebraConfig) -> u64 {
        let p = cfg.p() as u64;
        let m = cfg.vars as u64;
        match self {
            OutputSymbol::Digit(d) => d as u64,
            OutputSymbol::Var(v) => p + v as u64,
            OutputSymbol::Plus => p + m,
            OutputSymbol::Comma => p + m + 1,
            OutputSymbol::Semicolon => p + m + 2,
        }
    }

    pub fn from_ordinal(ord: u64, cfg: &AlgebraConfig) -> Option<Self> {
        let p = cfg.p() as u64;
        let m = cfg.vars as u64;
        Some(match ord {
            o if o < p => OutputSymbol::Digit(o as u8),
            o if o < p + m => OutputSymbol::Var((o - p) as u8),
            o if o == p + m => OutputSymbol::Plus,
            o if o == p + m + 1 => OutputSymbol::Comma,
            o if o == p + m + 2 => OutputSymbol::Semicolon,
            _ => return None,
        })
    }

    pub fn alphabet_size(cfg: &AlgebraConfig) -> u64 {
        cfg.p() as u64 + cfg.vars as u64 + 3
    }

    pub fn to_char(self, alphabet: &Alphabet) -> char {
        match self {
            OutputSymbol::Digit(d) => char::from_digit(d as u32, 10).expect("digit"),
            OutputSymbol::Var(v) => alphabet.letter(v as usize),
            OutputSymbol::Plus => '+',
            OutputSymbol::Comma => ',',
            OutputSymbol::Semicolon => ';',
        }
    }

    /// Inverse of [`to_char`](Self::to_char); `None` for characters outside
    /// the alphabet of `cfg`.
    pub fn from_char(c: char, cfg: &AlgebraConfig, alphabet: &Alphabet) -> Option<Self> {
        match c {
            '+' => Some(OutputSymbol::Plus),
            ',' => Some(OutputSymbol::Comma),
            ';' => Some(OutputSymbol::Semicolon),
            d if d.is_ascii_digit() => {
                let v = d.to_digit(10)?;
                (v < cfg.p()).then_some(OutputSymbol::Digit(v as u8))
            }
            l => alphabet.index_of(l).filter(|&i| i < cfg.vars).map(|i| OutputSymbol::Var(i as u8)),
        }
    }
}

pub fn symbols_to_text(symbols: &[OutputSymbol], alphabet: &Alphabet) -> String {
    symbols.iter().map(|s| s.to_char(alphabet)).collect()
}

/// Converts surface text to symbols. Whitespace is skipped.
pub fn text_to_symbols(text: &str, cfg: &AlgebraConfig, alphabet: &Alphabet) -> Result<Vec<OutputSymbol>> {
    text.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| {
            OutputSymbol::from_char(c, cfg, alphabet)
                .ok_or_else(|| Error::Parse(format!("character {c:?} is not in the output alphabet")))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Instruction {
    Inc(u64),
    Dec(u64),
    Jz(u64, u64),
    Jmp(u64),
    Out(OutputSymbol),
    Halt,
}

fn cantor_pair(x: u64, y: u64) -> u64 {
    let s = x as u128 + y as u128;
    let z = s * (s + 1) / 2 + y as u128;
    u64::try_from(z).expect("JZ operands too large to number")
}

fn cantor_unpair(z: u64) -> (u64, u64) {
    // w = floor((sqrt(8z + 1) - 1) / 2)
    let z = z as u128;
    let mut w = (((8.0 * z as f64 + 1.0).sqrt() - 1.0) / 2.0) as u128;
    while w * (w + 1) / 2 > z {
        w -= 1;
    }
    while (w + 1) * (w + 2) / 2 <= z {
        w += 1;
    }
    let y = z - w * (w + 1) / 2;
    ((w - y) as u64, y as u64)
}

impl Instruction {
    pub fn code(&self, cfg: &AlgebraConfig) -> u64 {
        let a = OutputSymbol::alphabet_size(cfg);
        match *self {
            Instruction::Halt => 0,
            Instruction::Out(s) => 1 + s.ordinal(cfg),
            Instruction::Inc(r) => a + 1 + 4 * r,
            Instruction::Dec(r) => a + 2 + 4 * r,
            Instruction::Jmp(t) => a + 3 + 4 * t,
            Instruction::Jz(r, t) => a + 4 + 4 * cantor_pair(r, t),
        }
    }

    pub fn from_code(code: u64, cfg: &AlgebraConfig) -> Self {
        let a = OutputSymbol::alphabet_size(cfg);
        if code == 0 {
            return Instruction::Halt;
        }
        if code <= a {
            return Instruction::Out(OutputSymbol::from_ordinal(code - 1, cfg).expect("in range"));
        }
        let c = code - a - 1;
        let arg = c / 4;
        match c % 4 {
            0 => Instruction::Inc(arg),
            1 => Instruction::Dec(arg),
            2 => Instruction::Jmp(arg),
            _ => {
                let (r, t) = cantor_unpair(arg);
                Instruction::Jz(r, t)
            }
        }
    }

    fn to_asm(self, alphabet: &Alphabet) -> String {
        match self {
            Instruction::Inc(r) => format!("INC r{r}"),
            Instruction::Dec(r) => format!("DEC r{r}"),
            Instruction::Jz(r, t) => format!("JZ r{r} {t}"),
            Instruction::Jmp(t) => format!("JMP {t}"),
            Instruction::Out(s) => format!("OUT {}", s.to_char(alphabet)),
            Instruction::Halt => "HALT".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Program {
    pub instructions: Vec<Instruction>,
}

impl Program {
    pub fn new(instructions: Vec<Instruction>) -> Self {
        Self { instructions }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// Position of this program in the standard numbering.
    pub fn standard_index(&self, cfg: &AlgebraConfig) -> BigUint {
        let mut n = BigUint::zero();
        let mut pos: u64 = 0;
        for (i, ins) in self.instructions.iter().enumerate() {
            let code = ins.code(cfg);
            pos = if i == 0 { code } else { pos + code + 1 };
            n.set_bit(pos, true);
        }
        n + 1u32
    }

    /// Program at position `k >= 1` of the standard numbering. Total.
    pub fn from_standard_index(k: &BigUint, cfg: &AlgebraConfig) -> Result<Self> {
        if k.is_zero() {
            return Err(Error::Domain("program numbers start at 1".into()));
        }
        let n = k - 1u32;
        let mut instructions = Vec::new();
        let mut prev: Option<u64> = None;
        for bit in 0..n.bits() {
            if n.bit(bit) {
                let code = match prev {
                    None => bit,
                    Some(p) => bit - p - 1,
                };
                instructions.push(Instruction::from_code(code, cfg));
                prev = Some(bit);
            }
        }
        Ok(Self { instructions })
    }

    /// One instruction per line; see [`Program::assemble`].
    pub fn disassemble(&self, alphabet: &Alphabet) -> String {
        let mut s = String::new();
        for ins in &self.instructions {
            s.push_str(&ins.to_asm(alphabet));
            s.push('\n');
        }
        s
    }

    /// Parses the assembly format: `INC rN`, `DEC rN`, `JZ rN ADDR`,
    /// `JMP ADDR`, `OUT c` (a digit, variable letter, `+`, `,` or `;`) and
    /// `HALT`. Blank lines and `#` comments are skipped.
    pub fn assemble(text: &str, cfg: &AlgebraConfig, alphabet: &Alphabet) -> Result<Self> {
        let mut instructions = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Parse(format!("line {}: {msg}: {raw:?}", lineno + 1));
            let parts: Vec<&str> = line.split_whitespace().collect();
            let reg = |s: &str| -> Result<u64> {
                s.strip_prefix('r').and_then(|n| n.parse().ok()).ok_or_else(|| err("expected register rN"))
            };
            let addr = |s: &str| -> Result<u64> { s.parse().map_err(|_| err("expected address")) };
            let ins = match parts.as_slice() {
                ["INC", r] => Instruction::Inc(reg(r)?),
                ["DEC", r] => Instruction::Dec(reg(r)?),
                ["JZ", r, t] => Instruction::Jz(reg(r)?, addr(t)?),
                ["JMP", t] => Instruction::Jmp(addr(t)?),
                ["OUT", c] if c.chars().count() == 1 => {
                    let c = c.chars().next().expect("one char");
                    Instruction::Out(
                        OutputSymbol::from_char(c, cfg, alphabet).ok_or_else(|| err("symbol outside alphabet"))?,
                    )
                }
                ["HALT"] => Instruction::Halt,
                _ => return Err(err("unrecognized instruction")),
            };
            instructions.push(ins);
        }
        Ok(Self { instructions })
    }
}

/// The recursive enumeration `P_1, P_2, ...` of all programs.
///
/// Without a prelude this is the standard numbering. A prelude lists
/// programs to be placed at indices `2, 3, ...`; every other nonempty
/// program follows in standard order. Either way the map is a bijection
/// from positive integers onto programs and index 1 is the empty program.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgramSpace {
    cfg: AlgebraConfig,
    prelude: Vec<Program>,
    /// Standard indices of the prelude, ascending.
    #[serde(skip)]
    prelude_sorted: Vec<BigUint>,
    #[serde(skip)]
    prelude_pos: HashMap<Program, usize>,
}

impl ProgramSpace {
    pub fn standard(cfg: AlgebraConfig) -> Self {
        Self { cfg, prelude: Vec::new(), prelude_sorted: Vec::new(), prelude_pos: HashMap::new() }
    }

    pub fn with_prelude(cfg: AlgebraConfig, prelude: Vec<Program>) -> Result<Self> {
        let mut prelude_pos = HashMap::new();
        for (i, q) in prelude.iter().enumerate() {
            if q.is_empty() {
                return Err(Error::Config("the empty program is fixed at index 1".into()));
            }
            if prelude_pos.insert(q.clone(), i).is_some() {
                return Err(Error::Config(format!("prelude program {} listed twice", i + 2)));
            }
        }
        let mut prelude_sorted: Vec<BigUint> = prelude.iter().map(|q| q.standard_index(&cfg)).collect();
        prelude_sorted.sort();
        Ok(Self { cfg, prelude, prelude_sorted, prelude_pos })
    }

    pub fn config(&self) -> AlgebraConfig {
        self.cfg
    }

    pub fn prelude(&self) -> &[Program] {
        &self.prelude
    }

    /// `P_k`. Total on `k >= 1`.
    pub fn enumerate(&self, k: &BigUint) -> Result<Program> {
        if k.is_zero() {
            return Err(Error::Domain("program numbers start at 1".into()));
        }
        if k.is_one() {
            return Ok(Program::empty());
        }
        let r = self.prelude.len();
        let k_small = k.to_usize();
        if let Some(ks) = k_small {
            if ks <= r + 1 {
                return Ok(self.prelude[ks - 2].clone());
            }
        }
        // j-th nonempty standard program outside the prelude, j >= 1.
        let j = k - (r as u64 + 1);
        let mut s = j + 1u32;
        for t in &self.prelude_sorted {
            if *t <= s {
                s += 1u32;
            } else {
                break;
            }
        }
        Program::from_standard_index(&s, &self.cfg)
    }

    pub fn enumerate_u64(&self, k: u64) -> Result<Program> {
        self.enumerate(&BigUint::from(k))
    }

    /// Inverse of [`enumerate`](Self::enumerate).
    pub fn encode(&self, program: &Program) -> BigUint {
        if program.is_empty() {
            return BigUint::one();
        }
        if let Some(&i) = self.prelude_pos.get(program) {
            return BigUint::from(i as u64 + 2);
        }
        let s = program.standard_index(&self.cfg);
        let below = self.prelude_sorted.iter().filter(|t| **t < s).count() as u64;
        let j = s - 1u32 - below;
        j + (self.prelude.len() as u64 + 1)
    }

    /// Rebuilds the lookup tables after deserialization.
    pub fn rehydrate(self) -> Result<Self> {
        Self::with_prelude(self.cfg, self.prelude)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Running,
    Halted,
    Killed,
}

/// A program with registers renumbered to dense slots, ready to step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompiledProgram {
    ops: Vec<Op>,
    /// Original register index of each slot.
    slots: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
enum Op {
    Inc(u32),
    Dec(u32),
    Jz(u32, u64),
    Jmp(u64),
    Out(OutputSymbol),
    Halt,
}

impl CompiledProgram {
    pub fn new(program: &Program) -> Self {
        let mut slots: Vec<u64> = Vec::new();
        let mut slot = |r: u64| -> u32 {
            match slots.iter().position(|&s| s == r) {
                Some(i) => i as u32,
                None => {
                    slots.push(r);
                    (slots.len() - 1) as u32
                }
            }
        };
        let ops = program
            .instructions
            .iter()
            .map(|ins| match *ins {
                Instruction::Inc(r) => Op::Inc(slot(r)),
                Instruction::Dec(r) => Op::Dec(slot(r)),
                Instruction::Jz(r, t) => Op::Jz(slot(r), t),
                Instruction::Jmp(t) => Op::Jmp(t),
                Instruction::Out(s) => Op::Out(s),
                Instruction::Halt => Op::Halt,
            })
            .collect();
        Self { ops, slots }
    }

    pub fn register_count(&self) -> usize {
        self.slots.len()
    }
}

/// Execution state. Registers are `u64`: each step raises a register by at
/// most one, so no run of fewer than `2^64` steps can overflow.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MachineState {
    pub pc: u64,
    registers: Vec<u64>,
    pub status: Status,
    pub steps_executed: u64,
}

impl MachineState {
    pub fn new(program: &CompiledProgram) -> Self {
        Self { pc: 0, registers: vec![0; program.register_count()], status: Status::Running, steps_executed: 0 }
    }

    /// Value of register `index` as numbered in the source program.
    pub fn register(&self, program: &CompiledProgram, index: u64) -> u64 {
        program.slots.iter().position(|&s| s == index).map(|i| self.registers[i]).unwrap_or(0)
    }

    pub fn kill(&mut self) {
        if self.status == Status::Running {
            self.status = Status::Killed;
        }
    }

    pub fn is_running(&self) -> bool {
        self.status == Status::Running
    }

    /// Executes one instruction. Falling off the end counts as `HALT`.
    pub fn step(&mut self, program: &CompiledProgram) -> Result<Option<OutputSymbol>> {
        if self.status != Status::Running {
            return Err(Error::State(format!("cannot step a {:?} machine", self.status)));
        }
        self.steps_executed += 1;
        let op = match usize::try_from(self.pc).ok().and_then(|pc| program.ops.get(pc)) {
            Some(op) => *op,
            None => Op::Halt,
        };
        let mut out = None;
        match op {
            Op::Inc(r) => {
                self.registers[r as usize] += 1;
                self.pc += 1;
            }
            Op::Dec(r) => {
                let v = &mut self.registers[r as usize];
                *v = v.saturating_sub(1);
                self.pc += 1;
            }
            Op::Jz(r, t) => {
                self.pc = if self.registers[r as usize] == 0 { t } else { self.pc + 1 };
            }
            Op::Jmp(t) => self.pc = t,
            Op::Out(s) => {
                out = Some(s);
                self.pc += 1;
            }
            Op::Halt => self.status = Status::Halted,
        }
        Ok(out)
    }
}

/// A program bundled with its running state.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Machine {
    pub program: Program,
    compiled: CompiledProgram,
    pub state: MachineState,
}

impl Machine {
    pub fn new(program: Program) -> Self {
        let compiled = CompiledProgram::new(&program);
        let state = MachineState::new(&compiled);
        Self { program, compiled, state }
    }

    pub fn step(&mut self) -> Result<Option<OutputSymbol>> {
        self.state.step(&self.compiled)
    }

    pub fn is_running(&self) -> bool {
        self.state.is_running()
    }

    pub fn register(&self, index: u64) -> u64 {
        self.state.register(&self.compiled, index)
    }

    /// Runs up to `max_steps` steps or until the machine stops.
    pub fn run(&mut self, max_steps: u64) -> Vec<OutputSymbol> {
        let mut out = Vec::new();
        for _ in 0..max_steps {
            if !self.is_running() {
                break;
            }
            if let Some(s) = self.step().expect("running") {
                out.push(s);
            }
        }
        out
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, ins) in self.instructions.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{ins:?}")?;
        }
        Ok(())
    }
}
