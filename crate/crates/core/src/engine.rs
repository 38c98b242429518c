//! Operational semantics.
//!
//! * [`WkEngine::run`] executes a Watson-Crick automaton on a fixed pair of
//!   strands.
//! * [`WkEngine::accepts`] decides acceptance of an upper strand, i.e. whether
//!   *some* complementary lower strand leads to an accepting halt. The lower
//!   strand is guessed one symbol at a time, when the lower head first reaches
//!   a position; since that head never moves left, only the symbol currently
//!   under it matters and the search space is finite.
//! * [`MfaEngine::run`] executes a k-head automaton.
//!
//! A run accepts iff it halts (no transition applies) in a final state. It is
//! a loop iff a configuration repeats; with one-way heads that can only happen
//! while all heads stand still, so the detector only remembers the states seen
//! since the last head movement.

use std::collections::hash_map::Entry as Slot;
use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::machine::{MultiHeadAutomaton, Transition, WkAutomaton};
use crate::symbol::{Cell, Move, State, Symbol, Word};

/// Default cap on the number of strands [`accepts_existential_bruteforce`] enumerates.
pub const DEFAULT_STRAND_BOUND: u128 = 1 << 20;

/// Node spaces above this size are tracked with a hash map instead of a dense array.
const DENSE_NODE_LIMIT: usize = 1 << 24;

const LEFT: u32 = 0;
const RIGHT: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("symbol {symbol} at position {position} is not in the input alphabet")]
    UnknownSymbol { symbol: Symbol, position: usize },
    #[error("lower strand has length {lower}, upper strand has length {upper}")]
    LengthMismatch { upper: usize, lower: usize },
    #[error("lower symbol {lower} at position {position} is not a complement of {upper}")]
    NotComplementary {
        position: usize,
        upper: Symbol,
        lower: Symbol,
    },
    #[error("{strands} complementary strands exceed the bound of {bound}")]
    BoundExceeded { strands: u128, bound: u128 },
    #[error("head {head} moved past the right end marker at {config}")]
    HeadOverrun { head: usize, config: Configuration },
}

/// A run configuration: state and head positions (0 reads `#`, n+1 reads `$`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub state: State,
    pub positions: Vec<usize>,
}

impl Configuration {
    /// Upper-strand (first) head position.
    pub fn p1(&self) -> usize {
        self.positions[0]
    }

    /// Lower-strand (second) head position.
    pub fn p2(&self) -> usize {
        self.positions[1]
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.positions.iter().map(usize::to_string).collect();
        write!(f, "({}, ({}))", self.state, ps.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    AcceptHalt,
    RejectHalt,
    InfiniteLoop,
}

impl Verdict {
    pub fn is_accept(self) -> bool {
        self == Verdict::AcceptHalt
    }

    /// Fixed output vocabulary: `accept`, `reject`, `loop`.
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::AcceptHalt => "accept",
            Verdict::RejectHalt => "reject",
            Verdict::InfiniteLoop => "loop",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub config: Configuration,
    pub entry: Transition,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub verdict: Verdict,
    pub final_config: Configuration,
    /// Empty unless requested through [`RunOptions::trace`].
    pub trace: Vec<TraceStep>,
    pub steps: usize,
    pub witness_lower: Option<Word>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub trace: bool,
}

impl RunOptions {
    pub fn traced() -> Self {
        RunOptions { trace: true }
    }
}

/// Outcome of the existential search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Existential {
    pub accepted: bool,
    pub witness_lower: Option<Word>,
    /// Number of distinct search nodes visited.
    pub explored: usize,
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    target: u32,
    d1: bool,
    d2: bool,
    index: u32,
}

enum Table {
    Dense(Vec<Option<Entry>>),
    Sparse(HashMap<(u32, u32, u32), Entry>),
}

/// Set of visited search nodes remembering each node's parent.
enum Visited {
    Dense(Vec<u64>),
    Sparse(HashMap<u64, u64>),
}

impl Visited {
    const UNSEEN: u64 = u64::MAX;

    fn new(space: usize) -> Self {
        if space <= DENSE_NODE_LIMIT {
            Visited::Dense(vec![Self::UNSEEN; space])
        } else {
            Visited::Sparse(HashMap::new())
        }
    }

    /// Marks `node` with `parent`; false if already visited.
    fn visit(&mut self, node: u64, parent: u64) -> bool {
        match self {
            Visited::Dense(v) => {
                let slot = &mut v[node as usize];
                if *slot == Self::UNSEEN {
                    *slot = parent;
                    true
                } else {
                    false
                }
            }
            Visited::Sparse(m) => match m.entry(node) {
                Slot::Occupied(_) => false,
                Slot::Vacant(slot) => {
                    slot.insert(parent);
                    true
                }
            },
        }
    }

    fn parent(&self, node: u64) -> u64 {
        match self {
            Visited::Dense(v) => v[node as usize],
            Visited::Sparse(m) => m[&node],
        }
    }
}

/// Interns symbols as dense ids; 0 and 1 are the end markers.
#[derive(Default)]
struct Interner {
    ids: HashMap<Symbol, u32>,
    symbols: Vec<Symbol>,
}

impl Interner {
    fn intern(&mut self, s: &Symbol) -> u32 {
        if let Some(&id) = self.ids.get(s) {
            return id;
        }
        let id = self.symbols.len() as u32 + 2;
        self.ids.insert(s.clone(), id);
        self.symbols.push(s.clone());
        id
    }

    fn cell(&mut self, c: &Cell) -> u32 {
        match c {
            Cell::LeftEnd => LEFT,
            Cell::RightEnd => RIGHT,
            Cell::Sym(s) => self.intern(s),
        }
    }

    fn get(&self, s: &Symbol) -> Option<u32> {
        self.ids.get(s).copied()
    }

    fn symbol(&self, id: u32) -> &Symbol {
        &self.symbols[id as usize - 2]
    }

    fn len(&self) -> usize {
        self.symbols.len() + 2
    }
}

/// Interns states in declaration order, appending any undeclared ones.
fn intern_states<'a>(
    declared: &'a [State],
    extra: impl Iterator<Item = &'a State>,
) -> (Vec<State>, HashMap<State, u32>) {
    let mut states = Vec::new();
    let mut index = HashMap::new();
    for q in declared.iter().chain(extra) {
        if !index.contains_key(q) {
            index.insert(q.clone(), states.len() as u32);
            states.push(q.clone());
        }
    }
    (states, index)
}

/// A Watson-Crick automaton compiled into dense lookup tables.
pub struct WkEngine<'m> {
    machine: &'m WkAutomaton,
    symbols: Interner,
    states: Vec<State>,
    start: u32,
    finals: Vec<bool>,
    is_upper: Vec<bool>,
    /// Complement images per symbol id, in declaration order.
    images: Vec<Vec<u32>>,
    table: Table,
    entries: Vec<Transition>,
}

impl<'m> WkEngine<'m> {
    pub fn new(machine: &'m WkAutomaton) -> Self {
        let mut symbols = Interner::default();
        for x in &machine.upper_alphabet {
            symbols.intern(x);
        }
        for (x, y) in machine.rho.pairs() {
            symbols.intern(x);
            symbols.intern(y);
        }
        for r in machine.delta.keys() {
            symbols.cell(&r.upper);
            symbols.cell(&r.lower);
        }
        let (states, state_ids) = intern_states(
            &machine.states,
            std::iter::once(&machine.start).chain(machine.delta.iter().flat_map(|(r, s)| [&r.state, &s.target])),
        );
        let n_syms = symbols.len();
        let mut is_upper = vec![false; n_syms];
        for x in &machine.upper_alphabet {
            is_upper[symbols.get(x).unwrap() as usize] = true;
        }
        let mut images = vec![Vec::new(); n_syms];
        for (x, y) in machine.rho.pairs() {
            images[symbols.get(x).unwrap() as usize].push(symbols.get(y).unwrap());
        }
        let mut finals = vec![false; states.len()];
        for q in &machine.finals {
            if let Some(&id) = state_ids.get(q) {
                finals[id as usize] = true;
            }
        }

        let dense_size = states.len() * n_syms * n_syms;
        let mut dense = (dense_size <= DENSE_NODE_LIMIT).then(|| vec![None; dense_size]);
        let mut sparse = HashMap::new();
        let mut entries = Vec::with_capacity(machine.delta.len());
        for (i, (r, s)) in machine.delta.iter().enumerate() {
            let q = state_ids[&r.state];
            let a = symbols.cell(&r.upper);
            let b = symbols.cell(&r.lower);
            let entry = Entry {
                target: state_ids[&s.target],
                d1: s.upper_move == Move::Right,
                d2: s.lower_move == Move::Right,
                index: i as u32,
            };
            match dense.as_mut() {
                Some(d) => d[(q as usize * n_syms + a as usize) * n_syms + b as usize] = Some(entry),
                None => {
                    sparse.insert((q, a, b), entry);
                }
            }
            entries.push(Transition {
                source: r.state.clone(),
                reads: vec![r.upper.clone(), r.lower.clone()],
                target: s.target.clone(),
                moves: vec![s.upper_move, s.lower_move],
            });
        }
        let table = match dense {
            Some(d) => Table::Dense(d),
            None => Table::Sparse(sparse),
        };

        WkEngine {
            machine,
            start: state_ids[&machine.start],
            symbols,
            states,
            finals,
            is_upper,
            images,
            table,
            entries,
        }
    }

    pub fn machine(&self) -> &'m WkAutomaton {
        self.machine
    }

    fn n_syms(&self) -> usize {
        self.symbols.len()
    }

    fn lookup(&self, q: u32, a: u32, b: u32) -> Option<Entry> {
        match &self.table {
            Table::Dense(d) => {
                let n = self.n_syms();
                d[(q as usize * n + a as usize) * n + b as usize]
            }
            Table::Sparse(m) => m.get(&(q, a, b)).copied(),
        }
    }

    /// `#w1$` as symbol ids.
    fn upper_tape(&self, w1: &[Symbol]) -> Result<Vec<u32>, EngineError> {
        let mut tape = Vec::with_capacity(w1.len() + 2);
        tape.push(LEFT);
        for (i, x) in w1.iter().enumerate() {
            match self.symbols.get(x) {
                Some(id) if self.is_upper[id as usize] => tape.push(id),
                _ => {
                    return Err(EngineError::UnknownSymbol {
                        symbol: x.clone(),
                        position: i + 1,
                    })
                }
            }
        }
        tape.push(RIGHT);
        Ok(tape)
    }

    fn lower_tape(&self, upper: &[u32], w2: &[Symbol]) -> Result<Vec<u32>, EngineError> {
        let n = upper.len() - 2;
        if w2.len() != n {
            return Err(EngineError::LengthMismatch {
                upper: n,
                lower: w2.len(),
            });
        }
        let mut tape = Vec::with_capacity(n + 2);
        tape.push(LEFT);
        for (i, y) in w2.iter().enumerate() {
            let x = upper[i + 1];
            match self.symbols.get(y) {
                Some(id) if self.images[x as usize].contains(&id) => tape.push(id),
                _ => {
                    return Err(EngineError::NotComplementary {
                        position: i + 1,
                        upper: self.symbols.symbol(x).clone(),
                        lower: y.clone(),
                    })
                }
            }
        }
        tape.push(RIGHT);
        Ok(tape)
    }

    fn config(&self, q: u32, p1: usize, p2: usize) -> Configuration {
        Configuration {
            state: self.states[q as usize].clone(),
            positions: vec![p1, p2],
        }
    }

    /// All complementary lower strands of `w1`; see [`ComplementStrands`].
    pub fn complement_strands(&self, w1: &[Symbol]) -> Result<ComplementStrands, EngineError> {
        let upper = self.upper_tape(w1)?;
        let choices: Vec<Vec<Symbol>> = upper[1..upper.len() - 1]
            .iter()
            .map(|&x| {
                self.images[x as usize]
                    .iter()
                    .map(|&y| self.symbols.symbol(y).clone())
                    .collect()
            })
            .collect();
        Ok(ComplementStrands::new(choices))
    }

    /// Number of complementary strands of `w1` (saturating).
    pub fn strand_count(&self, w1: &[Symbol]) -> Result<u128, EngineError> {
        let upper = self.upper_tape(w1)?;
        Ok(upper[1..upper.len() - 1].iter().fold(1u128, |acc, &x| {
            acc.saturating_mul(self.images[x as usize].len() as u128)
        }))
    }

    /// Deterministic run on the strand pair `(w1, w2)`.
    pub fn run(&self, w1: &[Symbol], w2: &[Symbol], opts: RunOptions) -> Result<RunOutcome, EngineError> {
        let upper = self.upper_tape(w1)?;
        let lower = self.lower_tape(&upper, w2)?;
        let end = upper.len() - 1;
        let mut q = self.start;
        let (mut p1, mut p2) = (0usize, 0usize);
        let mut stamp = vec![0u32; self.states.len()];
        let mut epoch = 1u32;
        let mut trace = Vec::new();
        let mut steps = 0usize;
        loop {
            if stamp[q as usize] == epoch {
                return Ok(RunOutcome {
                    verdict: Verdict::InfiniteLoop,
                    final_config: self.config(q, p1, p2),
                    trace,
                    steps,
                    witness_lower: None,
                });
            }
            stamp[q as usize] = epoch;
            let Some(e) = self.lookup(q, upper[p1], lower[p2]) else {
                let verdict = if self.finals[q as usize] {
                    Verdict::AcceptHalt
                } else {
                    Verdict::RejectHalt
                };
                return Ok(RunOutcome {
                    verdict,
                    final_config: self.config(q, p1, p2),
                    trace,
                    steps,
                    witness_lower: Some(w2.to_vec()),
                });
            };
            if opts.trace {
                trace.push(TraceStep {
                    config: self.config(q, p1, p2),
                    entry: self.entries[e.index as usize].clone(),
                });
            }
            let (n1, n2) = (p1 + e.d1 as usize, p2 + e.d2 as usize);
            if n1 > end || n2 > end {
                return Err(EngineError::HeadOverrun {
                    head: if n1 > end { 1 } else { 2 },
                    config: self.config(q, p1, p2),
                });
            }
            steps += 1;
            q = e.target;
            if e.d1 || e.d2 {
                epoch += 1;
            }
            p1 = n1;
            p2 = n2;
        }
    }

    /// Existential acceptance by reachability over (state, p1, p2, symbol under
    /// the lower head).
    pub fn accepts(&self, w1: &[Symbol]) -> Result<Existential, EngineError> {
        let upper = self.upper_tape(w1)?;
        let end = upper.len() - 1;
        let width = upper.len() as u64;
        let n_syms = self.n_syms() as u64;
        let encode = |q: u32, p1: usize, p2: usize, c: u32| -> u64 {
            ((q as u64 * width + p1 as u64) * width + p2 as u64) * n_syms + c as u64
        };
        let decode = |node: u64| -> (u32, usize, usize, u32) {
            let c = (node % n_syms) as u32;
            let rest = node / n_syms;
            let p2 = (rest % width) as usize;
            let rest = rest / width;
            let p1 = (rest % width) as usize;
            ((rest / width) as u32, p1, p2, c)
        };
        let space = (self.states.len() as u64 * width * width * n_syms) as usize;
        let mut visited = Visited::new(space);
        let root = encode(self.start, 0, 0, LEFT);
        visited.visit(root, root);
        let mut explored = 1usize;
        let mut stack = vec![root];

        while let Some(node) = stack.pop() {
            let (q, p1, p2, c) = decode(node);
            let Some(e) = self.lookup(q, upper[p1], c) else {
                if self.finals[q as usize] {
                    let witness = self.witness(&upper, &visited, node, root, decode);
                    return Ok(Existential {
                        accepted: true,
                        witness_lower: Some(witness),
                        explored,
                    });
                }
                continue;
            };
            let (n1, n2) = (p1 + e.d1 as usize, p2 + e.d2 as usize);
            if n1 > end || n2 > end {
                return Err(EngineError::HeadOverrun {
                    head: if n1 > end { 1 } else { 2 },
                    config: self.config(q, p1, p2),
                });
            }
            let mut push = |next: u64| {
                if visited.visit(next, node) {
                    explored += 1;
                    stack.push(next);
                }
            };
            if !e.d2 {
                push(encode(e.target, n1, n2, c));
            } else if n2 == end {
                push(encode(e.target, n1, n2, RIGHT));
            } else {
                for &img in self.images[upper[n2] as usize].iter().rev() {
                    push(encode(e.target, n1, n2, img));
                }
            }
        }
        Ok(Existential {
            accepted: false,
            witness_lower: None,
            explored,
        })
    }

    fn witness(
        &self,
        upper: &[u32],
        visited: &Visited,
        mut node: u64,
        root: u64,
        decode: impl Fn(u64) -> (u32, usize, usize, u32),
    ) -> Word {
        let n = upper.len() - 2;
        let mut committed: Vec<Option<u32>> = vec![None; n + 2];
        loop {
            let (_, _, p2, c) = decode(node);
            committed[p2] = Some(c);
            if node == root {
                break;
            }
            node = visited.parent(node);
        }
        (1..=n)
            .map(|i| {
                let id = committed[i].unwrap_or_else(|| self.images[upper[i] as usize][0]);
                self.symbols.symbol(id).clone()
            })
            .collect()
    }

    /// Acceptance by enumerating every complementary strand and running each.
    pub fn accepts_bruteforce(&self, w1: &[Symbol], bound: u128) -> Result<bool, EngineError> {
        let strands = self.strand_count(w1)?;
        if strands > bound {
            return Err(EngineError::BoundExceeded { strands, bound });
        }
        for w2 in self.complement_strands(w1)? {
            if self.run(w1, &w2, RunOptions::default())?.verdict.is_accept() {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Upper bound on the search nodes for an input of length `n`.
    pub fn node_bound(&self, n: usize) -> usize {
        self.states.len() * (n + 2) * (n + 2) * (self.machine.lower_alphabet().len() + 2)
    }
}

/// Complementary lower strands in the order the first position varies
/// fastest, each position cycling through its images in declaration order.
///
/// For `aba` with images `a -> a_1, a_2` and `b -> b_1, b_2` this yields
/// `a_1 b_1 a_1`, `a_2 b_1 a_1`, `a_1 b_2 a_1`, ..., `a_2 b_2 a_2`.
#[derive(Debug, Clone)]
pub struct ComplementStrands {
    choices: Vec<Vec<Symbol>>,
    digits: Vec<usize>,
    done: bool,
}

impl ComplementStrands {
    fn new(choices: Vec<Vec<Symbol>>) -> Self {
        let done = choices.iter().any(Vec::is_empty);
        ComplementStrands {
            digits: vec![0; choices.len()],
            choices,
            done,
        }
    }
}

impl Iterator for ComplementStrands {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        let current = self
            .digits
            .iter()
            .zip(&self.choices)
            .map(|(&d, c)| c[d].clone())
            .collect();
        // advance the odometer, position 0 first
        self.done = true;
        for (d, c) in self.digits.iter_mut().zip(&self.choices) {
            *d += 1;
            if *d < c.len() {
                self.done = false;
                break;
            }
            *d = 0;
        }
        Some(current)
    }
}

pub fn complement_strands(m: &WkAutomaton, w1: &[Symbol]) -> Result<ComplementStrands, EngineError> {
    WkEngine::new(m).complement_strands(w1)
}

pub fn run_deterministic(
    m: &WkAutomaton,
    w1: &[Symbol],
    w2: &[Symbol],
    opts: RunOptions,
) -> Result<RunOutcome, EngineError> {
    WkEngine::new(m).run(w1, w2, opts)
}

pub fn accepts_existential(m: &WkAutomaton, w1: &[Symbol]) -> Result<Existential, EngineError> {
    WkEngine::new(m).accepts(w1)
}

pub fn accepts_existential_bruteforce(m: &WkAutomaton, w1: &[Symbol], bound: u128) -> Result<bool, EngineError> {
    WkEngine::new(m).accepts_bruteforce(w1, bound)
}

#[derive(Debug, Clone)]
struct MfaEntry {
    target: u32,
    moves: Vec<bool>,
    index: usize,
}

/// A k-head automaton compiled for repeated runs.
pub struct MfaEngine<'m> {
    machine: &'m MultiHeadAutomaton,
    symbols: Interner,
    states: Vec<State>,
    start: u32,
    finals: Vec<bool>,
    is_input: Vec<bool>,
    /// Keyed by `[state, read_1, ..., read_k]`.
    table: HashMap<Vec<u32>, MfaEntry>,
    entries: Vec<Transition>,
}

impl<'m> MfaEngine<'m> {
    pub fn new(machine: &'m MultiHeadAutomaton) -> Self {
        let mut symbols = Interner::default();
        for x in &machine.alphabet {
            symbols.intern(x);
        }
        for r in machine.delta.keys() {
            for c in &r.reads {
                symbols.cell(c);
            }
        }
        let (states, state_ids) = intern_states(
            &machine.states,
            std::iter::once(&machine.start).chain(machine.delta.iter().flat_map(|(r, s)| [&r.state, &s.target])),
        );
        let mut is_input = vec![false; symbols.len()];
        for x in &machine.alphabet {
            is_input[symbols.get(x).unwrap() as usize] = true;
        }
        let mut finals = vec![false; states.len()];
        for q in &machine.finals {
            if let Some(&id) = state_ids.get(q) {
                finals[id as usize] = true;
            }
        }
        let mut table = HashMap::new();
        for (i, (r, s)) in machine.delta.iter().enumerate() {
            if r.reads.len() != machine.heads || s.moves.len() != machine.heads {
                continue;
            }
            let mut key = vec![state_ids[&r.state]];
            key.extend(r.reads.iter().map(|c| symbols.cell(c)));
            table.insert(
                key,
                MfaEntry {
                    target: state_ids[&s.target],
                    moves: s.moves.iter().map(|m| *m == Move::Right).collect(),
                    index: i,
                },
            );
        }
        let entries = machine.transitions().collect();
        MfaEngine {
            machine,
            start: state_ids[&machine.start],
            symbols,
            states,
            finals,
            is_input,
            table,
            entries,
        }
    }

    pub fn machine(&self) -> &'m MultiHeadAutomaton {
        self.machine
    }

    fn config(&self, q: u32, heads: &[usize]) -> Configuration {
        Configuration {
            state: self.states[q as usize].clone(),
            positions: heads.to_vec(),
        }
    }

    pub fn run(&self, w: &[Symbol], opts: RunOptions) -> Result<RunOutcome, EngineError> {
        let mut tape = Vec::with_capacity(w.len() + 2);
        tape.push(LEFT);
        for (i, x) in w.iter().enumerate() {
            match self.symbols.get(x) {
                Some(id) if self.is_input[id as usize] => tape.push(id),
                _ => {
                    return Err(EngineError::UnknownSymbol {
                        symbol: x.clone(),
                        position: i + 1,
                    })
                }
            }
        }
        tape.push(RIGHT);
        let end = tape.len() - 1;
        let k = self.machine.heads;
        let mut heads = vec![0usize; k];
        let mut q = self.start;
        let mut stamp = vec![0u32; self.states.len()];
        let mut epoch = 1u32;
        let mut key = Vec::with_capacity(k + 1);
        let mut trace = Vec::new();
        let mut steps = 0usize;
        loop {
            if stamp[q as usize] == epoch {
                return Ok(RunOutcome {
                    verdict: Verdict::InfiniteLoop,
                    final_config: self.config(q, &heads),
                    trace,
                    steps,
                    witness_lower: None,
                });
            }
            stamp[q as usize] = epoch;
            key.clear();
            key.push(q);
            key.extend(heads.iter().map(|&p| tape[p]));
            let Some(e) = self.table.get(key.as_slice()) else {
                let verdict = if self.finals[q as usize] {
                    Verdict::AcceptHalt
                } else {
                    Verdict::RejectHalt
                };
                return Ok(RunOutcome {
                    verdict,
                    final_config: self.config(q, &heads),
                    trace,
                    steps,
                    witness_lower: None,
                });
            };
            if opts.trace {
                trace.push(TraceStep {
                    config: self.config(q, &heads),
                    entry: self.entries[e.index].clone(),
                });
            }
            if let Some(h) = heads.iter().zip(&e.moves).position(|(&p, &mv)| mv && p == end) {
                return Err(EngineError::HeadOverrun {
                    head: h + 1,
                    config: self.config(q, &heads),
                });
            }
            let mut moved = false;
            for (p, &mv) in heads.iter_mut().zip(&e.moves) {
                if mv {
                    *p += 1;
                    moved = true;
                }
            }
            if moved {
                epoch += 1;
            }
            steps += 1;
            q = e.target;
        }
    }
}

pub fn run_mfa(m: &MultiHeadAutomaton, w: &[Symbol], opts: RunOptions) -> Result<RunOutcome, EngineError> {
    MfaEngine::new(m).run(w, opts)
}
