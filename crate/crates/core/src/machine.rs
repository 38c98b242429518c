//! Machine definitions: Watson-Crick automata, k-head automata and classical DFAs.

use std::fmt;

use indexmap::{IndexMap, IndexSet};
use thiserror::Error;

use crate::symbol::{Cell, Move, State, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("duplicate transition for {key}")]
pub struct DuplicateTransition {
    pub key: String,
}

/// The complementarity relation: each upper-strand symbol maps to an ordered,
/// duplicate-free, nonempty list of lower-strand symbols.
///
/// Image order is significant; it fixes the enumeration order of complementary
/// strands and the symbol used to fill unread witness positions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ComplementarityRelation {
    images: IndexMap<Symbol, Vec<Symbol>>,
}

impl ComplementarityRelation {
    pub fn new() -> Self {
        Self::default()
    }

    /// The identity relation on `alphabet`.
    pub fn identity<'a>(alphabet: impl IntoIterator<Item = &'a Symbol>) -> Self {
        let mut rho = Self::new();
        for x in alphabet {
            rho.insert(x.clone(), x.clone());
        }
        rho
    }

    pub fn from_pairs<I, A, B>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<Symbol>,
        B: Into<Symbol>,
    {
        let mut rho = Self::new();
        for (x, y) in pairs {
            rho.insert(x.into(), y.into());
        }
        rho
    }

    /// Adds `(x, y)`. Returns false if the pair was already present.
    pub fn insert(&mut self, x: Symbol, y: Symbol) -> bool {
        let images = self.images.entry(x).or_default();
        if images.contains(&y) {
            false
        } else {
            images.push(y);
            true
        }
    }

    /// Declares `x` in the domain with no images yet.
    pub fn declare(&mut self, x: Symbol) {
        self.images.entry(x).or_default();
    }

    pub fn images(&self, x: &Symbol) -> Option<&[Symbol]> {
        self.images.get(x).map(Vec::as_slice)
    }

    pub fn contains(&self, x: &Symbol, y: &Symbol) -> bool {
        self.images(x).is_some_and(|ys| ys.contains(y))
    }

    pub fn domain(&self) -> impl Iterator<Item = &Symbol> {
        self.images.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &[Symbol])> {
        self.images.iter().map(|(x, ys)| (x, ys.as_slice()))
    }

    /// All `(x, y)` pairs in declaration order.
    pub fn pairs(&self) -> impl Iterator<Item = (&Symbol, &Symbol)> {
        self.images.iter().flat_map(|(x, ys)| ys.iter().map(move |y| (x, y)))
    }

    /// Distinct image symbols in first-occurrence order.
    pub fn image_symbols(&self) -> IndexSet<Symbol> {
        self.pairs().map(|(_, y)| y.clone()).collect()
    }

    /// True iff every domain symbol has exactly one image and no two domain
    /// symbols share one, so that the inverse is a function.
    pub fn is_injective(&self) -> bool {
        let mut seen = IndexSet::new();
        self.images.values().all(|ys| ys.len() == 1 && seen.insert(&ys[0]))
    }

    /// The unique preimage of `y`, if the relation is injective on it.
    pub fn inverse(&self, y: &Symbol) -> Option<&Symbol> {
        let mut found = None;
        for (x, ys) in &self.images {
            if ys.contains(y) {
                if found.is_some() {
                    return None;
                }
                found = Some(x);
            }
        }
        found
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }
}

/// Left-hand side of a Watson-Crick transition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WkRead {
    pub state: State,
    pub upper: Cell,
    pub lower: Cell,
}

/// Right-hand side of a Watson-Crick transition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WkStep {
    pub target: State,
    pub upper_move: Move,
    pub lower_move: Move,
}

/// A one-way Watson-Crick automaton with single-symbol transitions.
///
/// The lower-strand alphabet is not stored: it is exactly the set of images
/// of `rho`. Forward determinism is structural since `delta` is a map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WkAutomaton {
    pub states: Vec<State>,
    pub upper_alphabet: IndexSet<Symbol>,
    pub start: State,
    pub finals: IndexSet<State>,
    pub rho: ComplementarityRelation,
    pub delta: IndexMap<WkRead, WkStep>,
}

impl WkAutomaton {
    pub fn new(start: State) -> Self {
        WkAutomaton {
            states: vec![start.clone()],
            upper_alphabet: IndexSet::new(),
            start,
            finals: IndexSet::new(),
            rho: ComplementarityRelation::new(),
            delta: IndexMap::new(),
        }
    }

    /// Symbols that may appear on the lower strand.
    pub fn lower_alphabet(&self) -> IndexSet<Symbol> {
        self.rho.image_symbols()
    }

    pub fn add_transition(
        &mut self,
        state: State,
        upper: Cell,
        lower: Cell,
        target: State,
        upper_move: Move,
        lower_move: Move,
    ) -> Result<(), DuplicateTransition> {
        let key = WkRead { state, upper, lower };
        if self.delta.contains_key(&key) {
            return Err(DuplicateTransition {
                key: format!("({}, ({}, {}))", key.state, key.upper, key.lower),
            });
        }
        self.delta.insert(
            key,
            WkStep {
                target,
                upper_move,
                lower_move,
            },
        );
        Ok(())
    }

    pub fn transitions(&self) -> impl Iterator<Item = Transition> + '_ {
        self.delta.iter().map(|(r, s)| Transition {
            source: r.state.clone(),
            reads: vec![r.upper.clone(), r.lower.clone()],
            target: s.target.clone(),
            moves: vec![s.upper_move, s.lower_move],
        })
    }

    pub fn state_index(&self, q: &State) -> Option<usize> {
        self.states.iter().position(|s| s == q)
    }
}

/// Left-hand side of a k-head transition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MfaRead {
    pub state: State,
    pub reads: Vec<Cell>,
}

/// Right-hand side of a k-head transition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MfaStep {
    pub target: State,
    pub moves: Vec<Move>,
}

/// A one-way deterministic k-head finite automaton on an end-marked tape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiHeadAutomaton {
    pub states: Vec<State>,
    pub alphabet: IndexSet<Symbol>,
    pub heads: usize,
    pub start: State,
    pub finals: IndexSet<State>,
    pub delta: IndexMap<MfaRead, MfaStep>,
}

impl MultiHeadAutomaton {
    pub fn new(start: State, heads: usize) -> Self {
        MultiHeadAutomaton {
            states: vec![start.clone()],
            alphabet: IndexSet::new(),
            heads,
            start,
            finals: IndexSet::new(),
            delta: IndexMap::new(),
        }
    }

    pub fn add_transition(
        &mut self,
        state: State,
        reads: Vec<Cell>,
        target: State,
        moves: Vec<Move>,
    ) -> Result<(), DuplicateTransition> {
        let key = MfaRead { state, reads };
        if self.delta.contains_key(&key) {
            let reads: Vec<&str> = key.reads.iter().map(Cell::token).collect();
            return Err(DuplicateTransition {
                key: format!("({}, ({}))", key.state, reads.join(", ")),
            });
        }
        self.delta.insert(key, MfaStep { target, moves });
        Ok(())
    }

    pub fn transitions(&self) -> impl Iterator<Item = Transition> + '_ {
        self.delta.iter().map(|(r, s)| Transition {
            source: r.state.clone(),
            reads: r.reads.clone(),
            target: s.target.clone(),
            moves: s.moves.clone(),
        })
    }

    pub fn state_index(&self, q: &State) -> Option<usize> {
        self.states.iter().position(|s| s == q)
    }
}

/// A classical (possibly partial) deterministic finite automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalDfa {
    pub states: Vec<State>,
    pub alphabet: IndexSet<Symbol>,
    pub start: State,
    pub finals: IndexSet<State>,
    pub delta: IndexMap<(State, Symbol), State>,
}

impl ClassicalDfa {
    pub fn new(start: State) -> Self {
        ClassicalDfa {
            states: vec![start.clone()],
            alphabet: IndexSet::new(),
            start,
            finals: IndexSet::new(),
            delta: IndexMap::new(),
        }
    }

    pub fn add_transition(&mut self, state: State, symbol: Symbol, target: State) -> Result<(), DuplicateTransition> {
        let key = (state, symbol);
        if self.delta.contains_key(&key) {
            return Err(DuplicateTransition {
                key: format!("({}, {})", key.0, key.1),
            });
        }
        self.delta.insert(key, target);
        Ok(())
    }

    pub fn state_index(&self, q: &State) -> Option<usize> {
        self.states.iter().position(|s| s == q)
    }
}

/// A transition in uniform shape, used for reports and traces.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transition {
    pub source: State,
    pub reads: Vec<Cell>,
    pub target: State,
    pub moves: Vec<Move>,
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let reads: Vec<&str> = self.reads.iter().map(Cell::token).collect();
        let moves: Vec<String> = self.moves.iter().map(Move::to_string).collect();
        write!(
            f,
            "({}, ({})) -> ({}, ({}))",
            self.source,
            reads.join(", "),
            self.target,
            moves.join(", ")
        )
    }
}

/// Any of the supported machine kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Machine {
    Wk(WkAutomaton),
    Mfa(MultiHeadAutomaton),
    Dfa(ClassicalDfa),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MachineKind {
    Wk,
    Mfa,
    Dfa,
}

impl MachineKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MachineKind::Wk => "wk",
            MachineKind::Mfa => "mfa",
            MachineKind::Dfa => "dfa",
        }
    }
}

impl fmt::Display for MachineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Machine {
    pub fn kind(&self) -> MachineKind {
        match self {
            Machine::Wk(_) => MachineKind::Wk,
            Machine::Mfa(_) => MachineKind::Mfa,
            Machine::Dfa(_) => MachineKind::Dfa,
        }
    }

    /// The alphabet input words are drawn from (the upper strand for WK machines).
    pub fn input_alphabet(&self) -> &IndexSet<Symbol> {
        match self {
            Machine::Wk(m) => &m.upper_alphabet,
            Machine::Mfa(m) => &m.alphabet,
            Machine::Dfa(m) => &m.alphabet,
        }
    }
}

impl From<WkAutomaton> for Machine {
    fn from(m: WkAutomaton) -> Self {
        Machine::Wk(m)
    }
}

impl From<MultiHeadAutomaton> for Machine {
    fn from(m: MultiHeadAutomaton) -> Self {
        Machine::Mfa(m)
    }
}

impl From<ClassicalDfa> for Machine {
    fn from(m: ClassicalDfa) -> Self {
        Machine::Dfa(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::sym;

    #[test]
    fn rho_has_set_semantics_with_ordered_images() {
        let mut rho = ComplementarityRelation::new();
        assert!(rho.insert(sym("a"), sym("a_1")));
        assert!(rho.insert(sym("a"), sym("a_2")));
        assert!(!rho.insert(sym("a"), sym("a_1")));
        assert_eq!(rho.images(&sym("a")).unwrap(), &[sym("a_1"), sym("a_2")]);
    }

    #[test]
    fn injectivity_requires_single_valued_and_distinct_images() {
        let identity = ComplementarityRelation::identity(&[sym("a"), sym("b")]);
        assert!(identity.is_injective());
        assert_eq!(identity.inverse(&sym("b")), Some(&sym("b")));

        let multi = ComplementarityRelation::from_pairs([(sym("a"), sym("a_1")), (sym("a"), sym("a_2"))]);
        assert!(!multi.is_injective());

        let shared = ComplementarityRelation::from_pairs([(sym("a"), sym("c")), (sym("b"), sym("c"))]);
        assert!(!shared.is_injective());
        assert_eq!(shared.inverse(&sym("c")), None);
    }

    #[test]
    fn duplicate_keys_are_rejected() {
        let q = State::new("q").unwrap();
        let mut m = WkAutomaton::new(q.clone());
        let a = Cell::Sym(sym("a"));
        m.add_transition(q.clone(), a.clone(), a.clone(), q.clone(), Move::Right, Move::Right)
            .unwrap();
        assert!(m
            .add_transition(q.clone(), a.clone(), a, q, Move::Stay, Move::Stay)
            .is_err());
    }

    #[test]
    fn transition_display() {
        let t = Transition {
            source: State::new("q0'").unwrap(),
            reads: vec![Cell::LeftEnd, Cell::LeftEnd],
            target: State::new("q0").unwrap(),
            moves: vec![Move::Right, Move::Right],
        };
        assert_eq!(t.to_string(), "(q0', (#, #)) -> (q0, (1, 1))");
    }
}
