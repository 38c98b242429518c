//! Reversible Watson-Crick automata.
//!
//! A Watson-Crick automaton reads a double-stranded input with one one-way
//! head per strand. The lower strand is any per-position choice of images of
//! the upper strand under a complementarity relation, and a word is accepted
//! if some choice makes the machine halt in a final state. The automaton is
//! reversible when every transition into a state moves the heads the same way
//! and no two transitions into a state (with equal moves) read the same pair.
//!
//! The crate provides
//!
//! * machine types ([`WkAutomaton`], [`MultiHeadAutomaton`], [`ClassicalDfa`])
//!   with a line-oriented text format ([`format`]);
//! * structural validation and the static reversibility checks ([`check`]);
//! * deterministic and existential simulation ([`engine`]);
//! * the DFA compiler and the two-head translations ([`construct`]);
//! * brute-force oracles and bounded-length differential testing ([`oracle`]).

pub mod check;
pub mod construct;
pub mod engine;
pub mod format;
pub mod machine;
pub mod oracle;
pub mod symbol;

pub use check::{
    check_reversibility_mfa, check_reversibility_wk, check_strong_reversibility, validate, CheckReport, Rule, Violation,
};
pub use construct::{dfa_to_rwka, mfa2_to_swk, swk_to_mfa2, theorem2_machine, ConstructError, TransitionNumbering};
pub use engine::{
    accepts_existential, accepts_existential_bruteforce, complement_strands, run_deterministic, run_mfa, Configuration,
    EngineError, Existential, MfaEngine, RunOptions, RunOutcome, TraceStep, Verdict, WkEngine, DEFAULT_STRAND_BOUND,
};
pub use format::{parse_machine, serialize_machine, ParseError};
pub use machine::{
    ClassicalDfa, ComplementarityRelation, Machine, MachineKind, MultiHeadAutomaton, Transition, WkAutomaton,
};
pub use oracle::{
    dfa_accepts, differential_compare, enumerate_block_strings, enumerate_words, theorem2_member, DiffReport,
};
pub use symbol::{Cell, Move, State, Symbol, Word};
