//! One-tape, three-symbol Turing machines with step-budgeted execution.
//!
//! A [`Program`] is the machine whose halting behaviour drives the reduction.
//! Execution is measured in single steps and advanced in fixed quanta via
//! [`Program::run_quantum`], so two runs with the same inputs always agree.
//!
//! # Text format
//!
//! ```text
//! # comments and blank lines are ignored
//! states: q0 q1 done ; init: q0 ; halt: done
//! q0 0 -> q1 1 R
//! q0 1 -> q0 1 L
//! q0 _ -> done _ S
//! q1 * -> q0 * S
//! ```
//!
//! The header must be the first significant line. It holds three
//! `;`-separated fields (`states:`, `init:`, `halt:`, in any order); `halt:`
//! may be empty. Each further line is `STATE READ -> NEXT WRITE MOVE` with
//! `READ`/`WRITE` in `0`, `1`, `_` (blank) and `MOVE` in `L`, `R`, `S`. A `*`
//! in the read position expands to all three symbols, and a `*` in the write
//! position writes back the symbol that was read. Every non-halting state
//! needs exactly one transition per symbol; halting states have none.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tape symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Symbol {
    Zero,
    One,
    Blank,
}

impl Symbol {
    pub const ALL: [Symbol; 3] = [Symbol::Zero, Symbol::One, Symbol::Blank];

    fn index(self) -> usize {
        match self {
            Symbol::Zero => 0,
            Symbol::One => 1,
            Symbol::Blank => 2,
        }
    }

    fn as_char(self) -> char {
        match self {
            Symbol::Zero => '0',
            Symbol::One => '1',
            Symbol::Blank => '_',
        }
    }

    fn parse(token: &str) -> Option<Symbol> {
        match token {
            "0" => Some(Symbol::Zero),
            "1" => Some(Symbol::One),
            "_" => Some(Symbol::Blank),
            _ => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Head movement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Left,
    Right,
    Stay,
}

impl Move {
    fn offset(self) -> i64 {
        match self {
            Move::Left => -1,
            Move::Right => 1,
            Move::Stay => 0,
        }
    }

    fn as_char(self) -> char {
        match self {
            Move::Left => 'L',
            Move::Right => 'R',
            Move::Stay => 'S',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub next: usize,
    pub write: Symbol,
    pub shift: Move,
}

/// Errors raised while reading machine text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: undefined state {name}")]
    UndefinedState { line: usize, name: String },
    #[error("line {line}: duplicate state {name}")]
    DuplicateState { line: usize, name: String },
    #[error("line {line}: duplicate transition for ({state}, {symbol})")]
    DuplicateTransition {
        line: usize,
        state: String,
        symbol: Symbol,
    },
    #[error("line {line}: halting state {state} cannot have transitions")]
    HaltingTransition { line: usize, state: String },
    #[error("transition table is not total: missing ({state}, {symbol})")]
    NonTotal { state: String, symbol: Symbol },
    #[error("missing header line")]
    MissingHeader,
}

/// A deterministic one-tape machine over `{0, 1, _}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    names: Vec<String>,
    initial: usize,
    halting: Vec<bool>,
    // indexed by state * 3 + symbol
    table: Vec<Option<Transition>>,
}

/// Whether a run has reached a halting state, and after how many steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "status", content = "step")]
pub enum HaltStatus {
    Running,
    HaltedAt(u64),
}

impl HaltStatus {
    pub fn is_halted(self) -> bool {
        matches!(self, HaltStatus::HaltedAt(_))
    }
}

/// Full configuration of a running machine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MachineState {
    /// Non-blank cells only.
    pub tape: BTreeMap<i64, Symbol>,
    pub head: i64,
    pub control: usize,
    pub steps_executed: u64,
}

impl MachineState {
    pub fn read(&self) -> Symbol {
        self.tape.get(&self.head).copied().unwrap_or(Symbol::Blank)
    }

    fn write(&mut self, symbol: Symbol) {
        if symbol == Symbol::Blank {
            self.tape.remove(&self.head);
        } else {
            self.tape.insert(self.head, symbol);
        }
    }

    /// Tape contents between the leftmost and rightmost non-blank cells.
    pub fn tape_string(&self) -> String {
        let (Some((&lo, _)), Some((&hi, _))) =
            (self.tape.first_key_value(), self.tape.last_key_value())
        else {
            return String::new();
        };
        (lo..=hi)
            .map(|p| {
                self.tape
                    .get(&p)
                    .copied()
                    .unwrap_or(Symbol::Blank)
                    .as_char()
            })
            .collect()
    }
}

impl Program {
    /// Builds a program from raw parts, checking the structural invariants.
    pub fn new(
        names: Vec<String>,
        initial: usize,
        halting: Vec<bool>,
        table: Vec<Option<Transition>>,
    ) -> Result<Self, ParseError> {
        assert_eq!(names.len(), halting.len());
        assert_eq!(names.len() * 3, table.len());
        assert!(initial < names.len(), "initial state out of range");
        for (state, name) in names.iter().enumerate() {
            for symbol in Symbol::ALL {
                let entry = table[state * 3 + symbol.index()];
                if halting[state] {
                    if entry.is_some() {
                        return Err(ParseError::HaltingTransition {
                            line: 0,
                            state: name.clone(),
                        });
                    }
                } else {
                    match entry {
                        None => {
                            return Err(ParseError::NonTotal {
                                state: name.clone(),
                                symbol,
                            })
                        }
                        Some(t) => assert!(t.next < names.len(), "transition target out of range"),
                    }
                }
            }
        }
        Ok(Program {
            names,
            initial,
            halting,
            table,
        })
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn halting_count(&self) -> usize {
        self.halting.iter().filter(|&&h| h).count()
    }

    pub fn state_name(&self, state: usize) -> &str {
        &self.names[state]
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_halting(&self, state: usize) -> bool {
        self.halting[state]
    }

    pub fn transition(&self, state: usize, symbol: Symbol) -> Option<Transition> {
        self.table[state * 3 + symbol.index()]
    }

    /// Initial configuration with `input` written in binary, most significant
    /// bit under the head at position 0.
    pub fn init(&self, input: u64) -> MachineState {
        let bits = format!("{input:b}");
        let tape = bits
            .chars()
            .enumerate()
            .map(|(i, c)| (i as i64, if c == '1' { Symbol::One } else { Symbol::Zero }))
            .collect();
        MachineState {
            tape,
            head: 0,
            control: self.initial,
            steps_executed: 0,
        }
    }

    pub fn status(&self, state: &MachineState) -> HaltStatus {
        if self.halting[state.control] {
            HaltStatus::HaltedAt(state.steps_executed)
        } else {
            HaltStatus::Running
        }
    }

    /// Executes one step. Returns `false` without touching the state if the
    /// machine has already halted.
    pub fn step(&self, state: &mut MachineState) -> bool {
        if self.halting[state.control] {
            return false;
        }
        let t = self
            .transition(state.control, state.read())
            .expect("transition table is total on non-halting states");
        state.write(t.write);
        state.head += t.shift.offset();
        state.control = t.next;
        state.steps_executed += 1;
        true
    }

    /// Runs at most `quantum` steps, stopping early on halt.
    pub fn run_quantum(&self, mut state: MachineState, quantum: u64) -> (MachineState, HaltStatus) {
        for _ in 0..quantum {
            if !self.step(&mut state) {
                break;
            }
        }
        let status = self.status(&state);
        (state, status)
    }

    /// Serializes to the line format; `parse(&p.to_text()) == p`.
    pub fn to_text(&self) -> String {
        let halting: Vec<&str> = self
            .names
            .iter()
            .zip(&self.halting)
            .filter(|(_, &h)| h)
            .map(|(n, _)| n.as_str())
            .collect();
        let mut out = format!(
            "states: {} ; init: {} ; halt:",
            self.names.join(" "),
            self.names[self.initial],
        );
        for name in halting {
            out.push(' ');
            out.push_str(name);
        }
        out.push('\n');
        for (state, name) in self.names.iter().enumerate() {
            for symbol in Symbol::ALL {
                if let Some(t) = self.transition(state, symbol) {
                    out.push_str(&format!(
                        "{name} {symbol} -> {} {} {}\n",
                        self.names[t.next],
                        t.write,
                        t.shift.as_char()
                    ));
                }
            }
        }
        out
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Program {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_program(s)
    }
}

struct Header {
    names: Vec<String>,
    initial: usize,
    halting: Vec<bool>,
}

fn parse_header(line_no: usize, line: &str) -> Result<Header, ParseError> {
    let syntax = |message: String| ParseError::Syntax {
        line: line_no,
        message,
    };
    let mut states = None;
    let mut init = None;
    let mut halt = None;
    for field in line.split(';') {
        let (key, value) = field
            .split_once(':')
            .ok_or_else(|| syntax(format!("expected `key: value`, found `{}`", field.trim())))?;
        let slot = match key.trim() {
            "states" => &mut states,
            "init" => &mut init,
            "halt" => &mut halt,
            other => return Err(syntax(format!("unknown header field `{other}`"))),
        };
        if slot
            .replace(value.split_whitespace().collect::<Vec<_>>())
            .is_some()
        {
            return Err(syntax(format!("header field `{}` given twice", key.trim())));
        }
    }
    let states = states.ok_or_else(|| syntax("header lacks `states:`".into()))?;
    let init = init.ok_or_else(|| syntax("header lacks `init:`".into()))?;
    let halt = halt.ok_or_else(|| syntax("header lacks `halt:`".into()))?;
    if states.is_empty() {
        return Err(syntax("at least one state is required".into()));
    }

    let mut index = HashMap::new();
    let mut names = Vec::with_capacity(states.len());
    for name in states {
        if index.insert(name, names.len()).is_some() {
            return Err(ParseError::DuplicateState {
                line: line_no,
                name: name.to_string(),
            });
        }
        names.push(name.to_string());
    }
    let lookup = |name: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| ParseError::UndefinedState {
                line: line_no,
                name: name.to_string(),
            })
    };
    let [init_name] = init.as_slice() else {
        return Err(syntax("`init:` takes exactly one state".into()));
    };
    let initial = lookup(init_name)?;
    let mut halting = vec![false; names.len()];
    for name in halt {
        halting[lookup(name)?] = true;
    }
    Ok(Header {
        names,
        initial,
        halting,
    })
}

/// Parses the line-based machine format described in the module docs.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    if !header.starts_with("states") && !header.starts_with("init") && !header.starts_with("halt") {
        return Err(ParseError::MissingHeader);
    }
    let Header {
        names,
        initial,
        halting,
    } = parse_header(header_line, header)?;
    let index: HashMap<&str, usize> = names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();

    let mut table: Vec<Option<Transition>> = vec![None; names.len() * 3];
    for (line, text) in lines {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let syntax = |message: String| ParseError::Syntax { line, message };
        let [from, read, arrow, to, write, shift] = tokens.as_slice() else {
            return Err(syntax(format!(
                "expected `STATE READ -> NEXT WRITE MOVE`, found `{text}`"
            )));
        };
        if *arrow != "->" {
            return Err(syntax(format!("expected `->`, found `{arrow}`")));
        }
        let state_of = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| ParseError::UndefinedState {
                    line,
                    name: name.to_string(),
                })
        };
        let from = state_of(from)?;
        let next = state_of(to)?;
        if halting[from] {
            return Err(ParseError::HaltingTransition {
                line,
                state: names[from].clone(),
            });
        }
        let reads: Vec<Symbol> = match *read {
            "*" => Symbol::ALL.to_vec(),
            tok => vec![Symbol::parse(tok).ok_or_else(|| syntax(format!("bad symbol `{tok}`")))?],
        };
        let written = match *write {
            "*" => None,
            tok => Some(Symbol::parse(tok).ok_or_else(|| syntax(format!("bad symbol `{tok}`")))?),
        };
        let shift = match *shift {
            "L" => Move::Left,
            "R" => Move::Right,
            "S" => Move::Stay,
            tok => return Err(syntax(format!("bad move `{tok}`"))),
        };
        for symbol in reads {
            let slot = &mut table[from * 3 + symbol.index()];
            if slot.is_some() {
                return Err(ParseError::DuplicateTransition {
                    line,
                    state: names[from].clone(),
                    symbol,
                });
            }
            *slot = Some(Transition {
                next,
                write: written.unwrap_or(symbol),
                shift,
            });
        }
    }
    Program::new(names, initial, halting, table)
}

/// A machine that never halts: one state looping in place.
pub fn loop_forever() -> Program {
    parse_program("states: spin ; init: spin ; halt:\nspin * -> spin * S\n")
        .expect("built-in machine parses")
}

/// A machine that halts after exactly `steps` steps on every input.
///
/// The machine is a chain of `steps` states, each stepping in place to the
/// next one; `halt_after(0)` starts in its halting state.
pub fn halt_after(steps: u64) -> Program {
    let n = steps as usize;
    let mut names: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    names.push("halt".to_string());
    let mut halting = vec![false; n + 1];
    halting[n] = true;
    let mut table = vec![None; (n + 1) * 3];
    for state in 0..n {
        for symbol in Symbol::ALL {
            table[state * 3 + symbol.index()] = Some(Transition {
                next: state + 1,
                write: symbol,
                shift: Move::Stay,
            });
        }
    }
    Program::new(names, 0, halting, table).expect("chain machine is total")
}

const COLLATZ: &str = "\
# Halts iff the Collatz iteration of the binary input reaches 1.
# The number sits on the tape with its least significant bit rightmost.
states: start seek lsb rewind isone toend t00 t01 t10 t11 spin halt ; init: start ; halt: halt
start 0 -> seek 0 R
start 1 -> seek 1 R
start _ -> spin _ S
seek 0 -> seek 0 R
seek 1 -> seek 1 R
seek _ -> lsb _ L
# even: drop the last bit
lsb 0 -> rewind _ L
lsb 1 -> isone 1 L
lsb _ -> spin _ S
rewind 0 -> rewind 0 L
rewind 1 -> rewind 1 L
rewind _ -> start _ R
# odd: stop if nothing but zeros remain to the left
isone 0 -> isone 0 L
isone 1 -> toend 1 R
isone _ -> halt _ S
toend 0 -> toend 0 R
toend 1 -> toend 1 R
toend _ -> t01 _ L
# 3n+1 = n + 2n + 1, right to left; state tPC holds the previous bit P and carry C
t00 0 -> t00 0 L
t00 1 -> t10 1 L
t00 _ -> start _ R
t01 0 -> t00 1 L
t01 1 -> t11 0 L
t01 _ -> t00 1 L
t10 0 -> t00 1 L
t10 1 -> t11 0 L
t10 _ -> t00 1 L
t11 0 -> t01 0 L
t11 1 -> t11 1 L
t11 _ -> t01 0 L
spin * -> spin * S
";

/// A machine that halts on input `n` iff the Collatz orbit of `n` reaches 1.
/// Input 0 never halts.
pub fn collatz() -> Program {
    parse_program(COLLATZ).expect("built-in machine parses")
}

/// The named library of sample machines.
///
/// `halt_after` is included at a handful of step counts chosen around
/// multiples of ten, which is where budget boundaries fall in practice.
pub fn sample_programs() -> BTreeMap<String, Program> {
    let mut out = BTreeMap::new();
    out.insert("loop_forever".to_string(), loop_forever());
    out.insert("collatz".to_string(), collatz());
    for s in [1, 3, 7, 9, 10, 11, 29, 30, 31, 45, 59, 60, 61, 100] {
        out.insert(format!("halt_after_{s}"), halt_after(s));
    }
    out
}

/// Direct simulation for at most `max_steps` steps. `Running` means only that
/// the machine did not halt within the budget.
pub fn ground_truth(program: &Program, input: u64, max_steps: u64) -> HaltStatus {
    program.run_quantum(program.init(input), max_steps).1
}
