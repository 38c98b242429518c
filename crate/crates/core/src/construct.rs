//! Machine constructions.
//!
//! * [`dfa_to_rwka`]: any DFA becomes a reversible Watson-Crick automaton whose
//!   lower strand guesses, position by position, which DFA transition is taken.
//! * [`mfa2_to_swk`] / [`swk_to_mfa2`]: reversible two-head automata and strongly
//!   reversible Watson-Crick automata translate entry for entry.
//! * [`theorem2_machine`]: a reversible Watson-Crick automaton with a
//!   non-injective complementarity relation for the block language
//!   `{w1*x1%...%wn*xn | some i != j has wi = wj and xi != xj}`.

use indexmap::{IndexMap, IndexSet};
use thiserror::Error;

use crate::check::{check_reversibility_mfa, check_strong_reversibility, validate_dfa, CheckReport};
use crate::machine::{ClassicalDfa, ComplementarityRelation, MultiHeadAutomaton, WkAutomaton};
use crate::symbol::{Cell, Move, State, Symbol};

/// Fresh names are tried with up to this many repeated separators.
const MAX_SUFFIX_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("input machine is malformed:\n{0}")]
    Invalid(CheckReport),
    #[error("input machine is not reversible:\n{0}")]
    NotReversible(CheckReport),
    #[error("expected a two-head automaton, found {0} heads")]
    HeadCount(usize),
    #[error("complementarity relation is not injective")]
    NonInjectiveRho,
    #[error("lower symbol {0} has no preimage under rho")]
    NoPreimage(Symbol),
    #[error("could not find a fresh name for {0}")]
    NameCollision(String),
}

/// Per input symbol, the DFA transitions on it in numbered order; the i-th
/// (1-based) transition on `x` is guessed by the fresh lower symbol `x_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionNumbering {
    pub lists: IndexMap<Symbol, Vec<NumberedTransition>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberedTransition {
    pub source: State,
    pub target: State,
    pub guess: Symbol,
}

fn fresh_symbol(base: &Symbol, i: usize, taken: &IndexSet<Symbol>) -> Result<Symbol, ConstructError> {
    for n in 1..=MAX_SUFFIX_ATTEMPTS {
        let candidate = Symbol::new(format!("{}{}{}", base, "_".repeat(n), i))
            .map_err(|_| ConstructError::NameCollision(base.to_string()))?;
        if !taken.contains(&candidate) {
            return Ok(candidate);
        }
    }
    Err(ConstructError::NameCollision(format!("{base}_{i}")))
}

fn fresh_state(base: &str, taken: &IndexSet<State>) -> Result<State, ConstructError> {
    let mut name = base.to_string();
    for _ in 0..MAX_SUFFIX_ATTEMPTS {
        let candidate = State::new(name.clone()).map_err(|_| ConstructError::NameCollision(base.into()))?;
        if !taken.contains(&candidate) {
            return Ok(candidate);
        }
        name.push('\'');
    }
    Err(ConstructError::NameCollision(base.into()))
}

impl TransitionNumbering {
    /// Lists the transitions on each symbol ordered by source-state declaration
    /// order and assigns fresh guess symbols.
    ///
    /// A symbol with no transitions at all gets a single guess `x_0` that no
    /// transition reads, so the complementarity relation stays total.
    pub fn of(dfa: &ClassicalDfa) -> Result<Self, ConstructError> {
        let mut taken: IndexSet<Symbol> = dfa.alphabet.iter().cloned().collect();
        let mut lists = IndexMap::new();
        for x in &dfa.alphabet {
            let mut list = Vec::new();
            for q in &dfa.states {
                if let Some(target) = dfa.delta.get(&(q.clone(), x.clone())) {
                    let guess = fresh_symbol(x, list.len() + 1, &taken)?;
                    taken.insert(guess.clone());
                    list.push(NumberedTransition {
                        source: q.clone(),
                        target: target.clone(),
                        guess,
                    });
                }
            }
            lists.insert(x.clone(), list);
        }
        Ok(TransitionNumbering { lists })
    }
}

/// Builds the reversible Watson-Crick automaton simulating `dfa`.
///
/// States are `q0'` (fresh start), the DFA states in order, then the accepting
/// sink(s). With one final state the sink is `qf`; with several, each final
/// state `q` gets its own sink `qf_q` so that no two `($, $)` transitions enter
/// the same state.
pub fn dfa_to_rwka(dfa: &ClassicalDfa) -> Result<WkAutomaton, ConstructError> {
    let report = validate_dfa(dfa);
    if !report.passed() {
        return Err(ConstructError::Invalid(report));
    }
    let numbering = TransitionNumbering::of(dfa)?;

    let mut taken: IndexSet<State> = dfa.states.iter().cloned().collect();
    let start = fresh_state(&format!("{}'", dfa.start), &taken)?;
    taken.insert(start.clone());
    let mut sinks = Vec::new();
    if dfa.finals.len() == 1 {
        let sink = fresh_state("qf", &taken)?;
        taken.insert(sink.clone());
        sinks.push((dfa.finals[0].clone(), sink));
    } else {
        for q in &dfa.states {
            if dfa.finals.contains(q) {
                let sink = fresh_state(&format!("qf_{q}"), &taken)?;
                taken.insert(sink.clone());
                sinks.push((q.clone(), sink));
            }
        }
    }

    let mut rho = ComplementarityRelation::new();
    for (x, list) in &numbering.lists {
        if list.is_empty() {
            let mut all: IndexSet<Symbol> = dfa.alphabet.iter().cloned().collect();
            for l in numbering.lists.values() {
                all.extend(l.iter().map(|t| t.guess.clone()));
            }
            rho.insert(x.clone(), fresh_symbol(x, 0, &all)?);
        }
        for t in list {
            rho.insert(x.clone(), t.guess.clone());
        }
    }

    let mut states = vec![start.clone()];
    states.extend(dfa.states.iter().cloned());
    states.extend(sinks.iter().map(|(_, s)| s.clone()));
    let mut m = WkAutomaton {
        states,
        upper_alphabet: dfa.alphabet.clone(),
        start: start.clone(),
        finals: sinks.iter().map(|(_, s)| s.clone()).collect(),
        rho,
        delta: Default::default(),
    };

    let dup = |e: crate::machine::DuplicateTransition| ConstructError::NameCollision(e.key);
    m.add_transition(
        start,
        Cell::LeftEnd,
        Cell::LeftEnd,
        dfa.start.clone(),
        Move::Right,
        Move::Right,
    )
    .map_err(dup)?;
    for (x, list) in &numbering.lists {
        for t in list {
            m.add_transition(
                t.source.clone(),
                Cell::Sym(x.clone()),
                Cell::Sym(t.guess.clone()),
                t.target.clone(),
                Move::Right,
                Move::Right,
            )
            .map_err(dup)?;
        }
    }
    for (q, sink) in sinks {
        m.add_transition(q, Cell::RightEnd, Cell::RightEnd, sink, Move::Stay, Move::Stay)
            .map_err(dup)?;
    }
    Ok(m)
}

/// Two-head reversible automaton to strongly reversible Watson-Crick automaton
/// (identity complementarity relation, transitions copied verbatim).
pub fn mfa2_to_swk(m: &MultiHeadAutomaton) -> Result<WkAutomaton, ConstructError> {
    if m.heads != 2 {
        return Err(ConstructError::HeadCount(m.heads));
    }
    let report = crate::check::validate_mfa(m);
    if !report.passed() {
        return Err(ConstructError::Invalid(report));
    }
    let report = check_reversibility_mfa(m);
    if !report.passed() {
        return Err(ConstructError::NotReversible(report));
    }
    let mut out = WkAutomaton {
        states: m.states.clone(),
        upper_alphabet: m.alphabet.clone(),
        start: m.start.clone(),
        finals: m.finals.clone(),
        rho: ComplementarityRelation::identity(&m.alphabet),
        delta: Default::default(),
    };
    for (r, s) in &m.delta {
        out.add_transition(
            r.state.clone(),
            r.reads[0].clone(),
            r.reads[1].clone(),
            s.target.clone(),
            s.moves[0],
            s.moves[1],
        )
        .expect("source delta is a map");
    }
    Ok(out)
}

/// Strongly reversible Watson-Crick automaton to two-head reversible automaton:
/// each lower read `x` becomes `rho^-1(x)`.
pub fn swk_to_mfa2(m: &WkAutomaton) -> Result<MultiHeadAutomaton, ConstructError> {
    if !m.rho.is_injective() {
        return Err(ConstructError::NonInjectiveRho);
    }
    let report = check_strong_reversibility(m);
    if !report.passed() {
        return Err(ConstructError::NotReversible(report));
    }
    let mut out = MultiHeadAutomaton {
        states: m.states.clone(),
        alphabet: m.upper_alphabet.clone(),
        heads: 2,
        start: m.start.clone(),
        finals: m.finals.clone(),
        delta: Default::default(),
    };
    for (r, s) in &m.delta {
        let lower = match &r.lower {
            Cell::Sym(y) => Cell::Sym(
                m.rho
                    .inverse(y)
                    .cloned()
                    .ok_or_else(|| ConstructError::NoPreimage(y.clone()))?,
            ),
            marker => marker.clone(),
        };
        out.add_transition(
            r.state.clone(),
            vec![r.upper.clone(), lower],
            s.target.clone(),
            vec![s.upper_move, s.lower_move],
        )
        .expect("injective rho keeps keys distinct");
    }
    Ok(out)
}

/// The machine for the block language: it sweeps both strands in lockstep
/// until the lower strand marks a `%` with `v_m1`, advances only the lower head
/// to a later `%` marked `v_m2`, then compares the block after the first mark
/// with the block after the second: w parts must match, x parts must differ.
///
/// `v_m1` and `v_m2` occur only on the lower strand, so the upper alphabet is
/// `{a, b, %, *}`.
pub fn theorem2_machine() -> WkAutomaton {
    use Move::{Right as R, Stay as S};
    let st = |n: &str| State::new(n).expect("valid state");
    let sy = |t: &str| Symbol::new(t).expect("valid symbol");
    let cell = |t: &str| Cell::parse(t).expect("valid cell");

    let mut m = WkAutomaton::new(st("q0"));
    m.states = ["q0", "q1", "q2", "q3", "q4"].into_iter().map(st).collect();
    m.upper_alphabet = ["a", "b", "%", "*"].into_iter().map(sy).collect();
    m.finals.insert(st("q3"));
    for (x, y) in [
        ("a", "a"),
        ("%", "%"),
        ("%", "v_m1"),
        ("%", "v_m2"),
        ("b", "b"),
        ("*", "*"),
    ] {
        m.rho.insert(sy(x), sy(y));
    }
    let delta: [(&str, &str, &str, &str, Move, Move); 18] = [
        ("q0", "#", "#", "q0", R, R),
        ("q0", "%", "%", "q0", R, R),
        ("q0", "a", "a", "q0", R, R),
        ("q0", "b", "b", "q0", R, R),
        ("q0", "*", "*", "q0", R, R),
        ("q0", "%", "v_m1", "q1", S, R),
        ("q1", "%", "a", "q1", S, R),
        ("q1", "%", "b", "q1", S, R),
        ("q1", "%", "*", "q1", S, R),
        ("q1", "%", "%", "q1", S, R),
        ("q1", "%", "v_m2", "q2", R, R),
        ("q2", "a", "a", "q2", R, R),
        ("q2", "b", "b", "q2", R, R),
        ("q2", "*", "*", "q3", R, R),
        ("q3", "a", "a", "q3", R, R),
        ("q3", "b", "b", "q3", R, R),
        ("q3", "%", "%", "q4", S, S),
        ("q3", "%", "$", "q4", S, S),
    ];
    for (q, u, l, t, d1, d2) in delta {
        m.add_transition(st(q), cell(u), cell(l), st(t), d1, d2)
            .expect("distinct keys");
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::{check_reversibility_wk, Rule};
    use crate::format::{parse_dfa_automaton, serialize_wk};
    use crate::symbol::{state, sym};

    fn dfa(text: &str) -> ClassicalDfa {
        parse_dfa_automaton(text).unwrap()
    }

    #[test]
    fn numbering_follows_state_declaration_order() {
        let d = dfa("type: dfa\nstates: q0 q1\nstart: q0\nfinal: q1\nalphabet: a b\n\
                     trans: q1 a -> q1\ntrans: q0 a -> q1\ntrans: q1 b -> q0\ntrans: q0 b -> q0\n");
        let n = TransitionNumbering::of(&d).unwrap();
        let a = &n.lists[&sym("a")];
        assert_eq!(a[0].source, state("q0"));
        assert_eq!(a[0].guess, sym("a_1"));
        assert_eq!(a[1].source, state("q1"));
        assert_eq!(a[1].guess, sym("a_2"));
    }

    #[test]
    fn single_state_dfa_for_a_star() {
        let d = dfa("type: dfa\nstates: q0\nstart: q0\nfinal: q0\nalphabet: a\ntrans: q0 a -> q0\n");
        let m = dfa_to_rwka(&d).unwrap();
        assert_eq!(
            serialize_wk(&m),
            "type: wk\nstates: q0' q0 qf\nstart: q0'\nfinal: qf\nalphabet: a\nrho: a->a_1\n\
             trans: q0' # # -> q0 1 1\ntrans: q0 $ $ -> qf 0 0\ntrans: q0 a a_1 -> q0 1 1\n"
        );
    }

    #[test]
    fn empty_final_set_has_no_sink() {
        let d = dfa("type: dfa\nstates: q0\nstart: q0\nfinal:\nalphabet: a\ntrans: q0 a -> q0\n");
        let m = dfa_to_rwka(&d).unwrap();
        assert!(m.finals.is_empty());
        assert!(m.delta.keys().all(|r| r.upper != Cell::RightEnd));
        assert_eq!(m.states.len(), 2);
    }

    #[test]
    fn several_finals_get_separate_sinks() {
        let d = dfa("type: dfa\nstates: p q r\nstart: p\nfinal: q r\nalphabet: a\n\
                     trans: p a -> q\ntrans: q a -> r\ntrans: r a -> r\n");
        let m = dfa_to_rwka(&d).unwrap();
        assert_eq!(m.finals.iter().map(State::as_str).collect::<Vec<_>>(), ["qf_q", "qf_r"]);
        assert!(check_reversibility_wk(&m).passed());
    }

    #[test]
    fn fresh_names_avoid_collisions() {
        let d = dfa("type: dfa\nstates: qf q0'\nstart: qf\nfinal: qf\nalphabet: a a_1\n\
                     trans: qf a -> qf\ntrans: qf a_1 -> qf\n");
        let m = dfa_to_rwka(&d).unwrap();
        assert_eq!(m.start, state("qf'"));
        assert_eq!(m.finals[0], state("qf''"));
        assert_eq!(m.rho.images(&sym("a")).unwrap(), &[sym("a__1")]);
        assert_eq!(m.rho.images(&sym("a_1")).unwrap(), &[sym("a_1_1")]);
    }

    #[test]
    fn symbol_without_transitions_gets_dead_guess() {
        let d = dfa("type: dfa\nstates: q0\nstart: q0\nfinal: q0\nalphabet: a b\ntrans: q0 a -> q0\n");
        let m = dfa_to_rwka(&d).unwrap();
        assert_eq!(m.rho.images(&sym("b")).unwrap(), &[sym("b_0")]);
        assert!(crate::check::validate_wk(&m).passed());
    }

    #[test]
    fn to_mfa_inverts_rho() {
        let text = "type: wk\nstates: q q'\nstart: q\nfinal: q'\nalphabet: a b\nrho: a->c b->d\n\
                    trans: q a d -> q' 1 1\n";
        let m = crate::format::parse_wk_automaton(text).unwrap();
        let mfa = swk_to_mfa2(&m).unwrap();
        let (r, s) = mfa.delta.iter().next().unwrap();
        assert_eq!(r.reads, vec![Cell::Sym(sym("a")), Cell::Sym(sym("b"))]);
        assert_eq!(s.moves, vec![Move::Right, Move::Right]);
    }

    #[test]
    fn to_mfa_rejects_non_injective_rho() {
        let d = dfa("type: dfa\nstates: q0 q1\nstart: q0\nfinal: q1\nalphabet: a b\n\
                     trans: q0 a -> q1\ntrans: q0 b -> q0\ntrans: q1 a -> q1\ntrans: q1 b -> q0\n");
        let m = dfa_to_rwka(&d).unwrap();
        assert_eq!(swk_to_mfa2(&m), Err(ConstructError::NonInjectiveRho));
    }

    #[test]
    fn from_mfa_requires_two_reversible_heads() {
        let three = MultiHeadAutomaton::new(state("s"), 3);
        assert_eq!(mfa2_to_swk(&three), Err(ConstructError::HeadCount(3)));

        let text = "type: mfa\nstates: p q r\nstart: p\nfinal:\nalphabet: a b\nheads: 2\n\
                    trans: p a b -> q 1 0\ntrans: r a b -> q 1 0\n";
        let m = crate::format::parse_multi_head_automaton(text).unwrap();
        match mfa2_to_swk(&m) {
            Err(ConstructError::NotReversible(r)) => assert!(r.has(Rule::C2)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn single_transition_round_trip() {
        let text = "type: mfa\nstates: p q\nstart: p\nfinal: q\nalphabet: a\nheads: 2\n\
                    trans: p # # -> q 1 1\n";
        let m = crate::format::parse_multi_head_automaton(text).unwrap();
        let wk = mfa2_to_swk(&m).unwrap();
        assert_eq!(wk.delta.len(), 1);
        assert!(wk.rho.is_injective());
        assert!(check_strong_reversibility(&wk).passed());
        assert_eq!(swk_to_mfa2(&wk).unwrap(), m);
    }

    #[test]
    fn block_machine_shape() {
        let m = theorem2_machine();
        assert_eq!(m.delta.len(), 18);
        assert_eq!(m.states.len(), 5);
        assert_eq!(m.finals.len(), 1);
        assert_eq!(m.rho.images(&sym("%")).unwrap(), &[sym("%"), sym("v_m1"), sym("v_m2")]);
        assert_eq!(m.lower_alphabet().len(), 6);
        assert!(crate::check::validate_wk(&m).passed());
        assert!(check_reversibility_wk(&m).passed());
        let strong = check_strong_reversibility(&m);
        assert!(strong.has(Rule::RhoNotInjective));
    }
}
