//! Structural validation and the static reversibility checks.
//!
//! Reversibility is decided on the transition table alone:
//!
//! * `C1`: all transitions entering the same state move the heads the same way;
//! * `C2`: two distinct transitions entering the same state with the same
//!   moves must differ in at least one read symbol.

use std::collections::HashMap;
use std::fmt;

use indexmap::IndexSet;

use crate::machine::{ClassicalDfa, Machine, MultiHeadAutomaton, Transition, WkAutomaton};
use crate::symbol::{Cell, Move, State, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    DuplicateState,
    StartNotState,
    FinalNotState,
    UnknownState,
    UnknownSymbol,
    MoveOnEndMarker,
    RhoNotTotal,
    RhoUnknownDomain,
    HeadCount,
    Arity,
    /// Same target state, different head moves.
    C1,
    /// Same target state and moves, identical reads.
    C2,
    RhoNotInjective,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::DuplicateState => "duplicate-state",
            Rule::StartNotState => "start-not-state",
            Rule::FinalNotState => "final-not-state",
            Rule::UnknownState => "unknown-state",
            Rule::UnknownSymbol => "unknown-symbol",
            Rule::MoveOnEndMarker => "move-on-endmarker",
            Rule::RhoNotTotal => "rho-not-total",
            Rule::RhoUnknownDomain => "rho-unknown-domain",
            Rule::HeadCount => "head-count",
            Rule::Arity => "arity",
            Rule::C1 => "C1",
            Rule::C2 => "C2",
            Rule::RhoNotInjective => "rho-not-injective",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub rule: Rule,
    /// The offending transitions (zero, one or two of them).
    pub entries: Vec<Transition>,
    pub note: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.rule, self.note)?;
        for e in &self.entries {
            write!(f, "\n    {e}")?;
        }
        Ok(())
    }
}

/// Result of a check. Passed iff there are no violations; notes are informational.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }

    fn push(&mut self, rule: Rule, entries: Vec<Transition>, note: impl Into<String>) {
        self.violations.push(Violation {
            rule,
            entries,
            note: note.into(),
        });
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.violations.extend(other.violations);
        self.notes.extend(other.notes);
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "pass")?;
        } else {
            write!(f, "fail ({} violation(s))", self.violations.len())?;
        }
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        for n in &self.notes {
            write!(f, "\n  note: {n}")?;
        }
        Ok(())
    }
}

const END_MARKER_NOTE: &str = "heads may not move while reading the right end marker '$' (enforced for every head)";

fn check_states(
    report: &mut CheckReport,
    states: &[State],
    start: &State,
    finals: &IndexSet<State>,
) -> IndexSet<State> {
    let mut declared = IndexSet::new();
    for q in states {
        if !declared.insert(q.clone()) {
            report.push(Rule::DuplicateState, vec![], format!("state {q} declared twice"));
        }
    }
    if !declared.contains(start) {
        report.push(
            Rule::StartNotState,
            vec![],
            format!("start state {start} is not declared"),
        );
    }
    for q in finals {
        if !declared.contains(q) {
            report.push(Rule::FinalNotState, vec![], format!("final state {q} is not declared"));
        }
    }
    declared
}

fn check_transition_refs(
    report: &mut CheckReport,
    t: &Transition,
    declared: &IndexSet<State>,
    alphabets: &[&IndexSet<Symbol>],
) {
    for q in [&t.source, &t.target] {
        if !declared.contains(q) {
            report.push(
                Rule::UnknownState,
                vec![t.clone()],
                format!("state {q} is not declared"),
            );
        }
    }
    for (i, (read, mv)) in t.reads.iter().zip(&t.moves).enumerate() {
        if let Cell::Sym(s) = read {
            let alphabet = alphabets.get(i).or(alphabets.last());
            if !alphabet.is_some_and(|a| a.contains(s)) {
                report.push(
                    Rule::UnknownSymbol,
                    vec![t.clone()],
                    format!("head {} reads {s}, which is not in its alphabet", i + 1),
                );
            }
        }
        if *read == Cell::RightEnd && *mv == Move::Right {
            report.push(
                Rule::MoveOnEndMarker,
                vec![t.clone()],
                format!("head {} moves right while reading '$'", i + 1),
            );
        }
    }
}

pub fn validate_wk(m: &WkAutomaton) -> CheckReport {
    let mut report = CheckReport::default();
    let declared = check_states(&mut report, &m.states, &m.start, &m.finals);
    for x in &m.upper_alphabet {
        match m.rho.images(x) {
            Some(images) if !images.is_empty() => {}
            _ => report.push(Rule::RhoNotTotal, vec![], format!("rho has no image for {x}")),
        }
    }
    for x in m.rho.domain() {
        if !m.upper_alphabet.contains(x) {
            report.push(
                Rule::RhoUnknownDomain,
                vec![],
                format!("rho is defined on {x}, which is not in the upper alphabet"),
            );
        }
    }
    let lower = m.lower_alphabet();
    for t in m.transitions() {
        check_transition_refs(&mut report, &t, &declared, &[&m.upper_alphabet, &lower]);
    }
    report
}

pub fn validate_mfa(m: &MultiHeadAutomaton) -> CheckReport {
    let mut report = CheckReport::default();
    report.notes.push(END_MARKER_NOTE.to_string());
    if m.heads == 0 {
        report.push(Rule::HeadCount, vec![], "a k-head automaton needs k >= 1");
    }
    let declared = check_states(&mut report, &m.states, &m.start, &m.finals);
    for t in m.transitions() {
        if t.reads.len() != m.heads || t.moves.len() != m.heads {
            report.push(
                Rule::Arity,
                vec![t.clone()],
                format!("expected {} reads and moves", m.heads),
            );
        }
        check_transition_refs(&mut report, &t, &declared, &[&m.alphabet]);
    }
    report
}

pub fn validate_dfa(m: &ClassicalDfa) -> CheckReport {
    let mut report = CheckReport::default();
    let declared = check_states(&mut report, &m.states, &m.start, &m.finals);
    for ((q, a), target) in &m.delta {
        let entry = Transition {
            source: q.clone(),
            reads: vec![Cell::Sym(a.clone())],
            target: target.clone(),
            moves: vec![Move::Right],
        };
        check_transition_refs(&mut report, &entry, &declared, &[&m.alphabet]);
    }
    report
}

/// Structural well-formedness of any machine.
pub fn validate(machine: &Machine) -> CheckReport {
    match machine {
        Machine::Wk(m) => validate_wk(m),
        Machine::Mfa(m) => validate_mfa(m),
        Machine::Dfa(m) => validate_dfa(m),
    }
}

/// C1 and C2 over an arbitrary transition list.
fn check_c1_c2(transitions: impl Iterator<Item = Transition>) -> CheckReport {
    let mut report = CheckReport::default();
    let mut by_target: HashMap<State, Vec<Transition>> = HashMap::new();
    let mut target_order = Vec::new();
    for t in transitions {
        let bucket = by_target.entry(t.target.clone()).or_insert_with(|| {
            target_order.push(t.target.clone());
            Vec::new()
        });
        bucket.push(t);
    }
    for target in target_order {
        let entries = &by_target[&target];
        let first = &entries[0];
        for other in &entries[1..] {
            if other.moves != first.moves {
                report.push(
                    Rule::C1,
                    vec![first.clone(), other.clone()],
                    format!("transitions into {target} move the heads differently"),
                );
            }
        }
        let mut seen: HashMap<(&[Move], &[Cell]), &Transition> = HashMap::new();
        for t in entries {
            if let Some(prev) = seen.insert((&t.moves, &t.reads), t) {
                report.push(
                    Rule::C2,
                    vec![prev.clone(), t.clone()],
                    format!("two transitions into {target} read the same symbols with the same moves"),
                );
            }
        }
    }
    report
}

pub fn check_reversibility_wk(m: &WkAutomaton) -> CheckReport {
    check_c1_c2(m.transitions())
}

/// Reversibility plus an injective complementarity relation.
pub fn check_strong_reversibility(m: &WkAutomaton) -> CheckReport {
    let mut report = check_reversibility_wk(m);
    if !m.rho.is_injective() {
        let offenders: Vec<String> = m
            .rho
            .iter()
            .filter(|(_, ys)| ys.len() != 1)
            .map(|(x, ys)| format!("{x} has {} images", ys.len()))
            .collect();
        let note = if offenders.is_empty() {
            "two symbols share an image".to_string()
        } else {
            offenders.join(", ")
        };
        report.push(Rule::RhoNotInjective, vec![], format!("rho is not injective: {note}"));
    }
    report
}

pub fn check_reversibility_mfa(m: &MultiHeadAutomaton) -> CheckReport {
    check_c1_c2(m.transitions())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{parse_multi_head_automaton, parse_wk_automaton};
    use crate::symbol::{state, sym};

    fn wk(trans: &str) -> WkAutomaton {
        let text = format!("type: wk\nstates: p q r qf\nstart: p\nfinal: qf\nalphabet: a b\nrho: a->a b->b\n{trans}");
        parse_wk_automaton(&text).unwrap()
    }

    #[test]
    fn c1_violation_on_different_moves() {
        let m = wk("trans: p a a -> q 1 1\ntrans: r b b -> q 0 1\n");
        let report = check_reversibility_wk(&m);
        assert!(!report.passed());
        assert!(report.has(Rule::C1));
        assert_eq!(report.violations[0].entries.len(), 2);
    }

    #[test]
    fn c2_violation_on_identical_reads() {
        let m = wk("trans: p $ $ -> qf 0 0\ntrans: r $ $ -> qf 0 0\n");
        let report = check_reversibility_wk(&m);
        assert!(report.has(Rule::C2));
        assert!(!report.has(Rule::C1));
    }

    #[test]
    fn single_transition_passes() {
        let m = wk("trans: p a a -> q 1 1\n");
        assert!(check_reversibility_wk(&m).passed());
    }

    #[test]
    fn move_on_end_marker_is_structural() {
        let m = wk("trans: p $ a -> q 1 1\n");
        let report = validate_wk(&m);
        assert!(report.has(Rule::MoveOnEndMarker));
        let m = wk("trans: p a $ -> q 0 1\n");
        assert!(validate_wk(&m).has(Rule::MoveOnEndMarker));
        // Moving off the left end marker is fine.
        let m = wk("trans: p # # -> q 1 1\n");
        assert!(validate_wk(&m).passed());
    }

    #[test]
    fn rho_must_cover_upper_alphabet() {
        let mut m = wk("");
        m.upper_alphabet.insert(sym("c"));
        let report = validate_wk(&m);
        assert!(report.has(Rule::RhoNotTotal));
        assert!(!report.passed());
    }

    #[test]
    fn structural_reference_errors() {
        let mut m = wk("trans: p a a -> q 1 1\n");
        m.finals.insert(state("nowhere"));
        m.states.push(state("p"));
        let report = validate_wk(&m);
        assert!(report.has(Rule::FinalNotState));
        assert!(report.has(Rule::DuplicateState));
    }

    #[test]
    fn strong_reversibility_needs_injective_rho() {
        let m = wk("trans: p a a -> q 1 1\n");
        assert!(check_strong_reversibility(&m).passed());
        let mut multi = m.clone();
        multi.rho.insert(sym("a"), sym("b"));
        let report = check_strong_reversibility(&multi);
        assert!(report.has(Rule::RhoNotInjective));
        assert!(check_reversibility_wk(&multi).passed());
    }

    #[test]
    fn mfa_c2_violation() {
        let text = "type: mfa\nstates: p q r\nstart: p\nfinal:\nalphabet: a b\nheads: 2\n\
                    trans: p a b -> q 1 0\ntrans: r a b -> q 1 0\n";
        let m = parse_multi_head_automaton(text).unwrap();
        let report = check_reversibility_mfa(&m);
        assert!(report.has(Rule::C2));
        assert!(validate_mfa(&m).passed());
        assert!(!validate_mfa(&m).notes.is_empty());
    }

    #[test]
    fn mfa_arity_and_head_count() {
        let mut m = MultiHeadAutomaton::new(state("s"), 2);
        m.add_transition(state("s"), vec![Cell::LeftEnd], state("s"), vec![Move::Stay])
            .unwrap();
        assert!(validate_mfa(&m).has(Rule::Arity));
        m.heads = 0;
        assert!(validate_mfa(&m).has(Rule::HeadCount));
    }

    #[test]
    fn report_stable_under_entry_reordering() {
        let a = wk("trans: p a a -> q 1 1\ntrans: r b b -> q 0 1\ntrans: q $ $ -> qf 0 0\n");
        let b = wk("trans: q $ $ -> qf 0 0\ntrans: r b b -> q 0 1\ntrans: p a a -> q 1 1\n");
        assert_eq!(check_reversibility_wk(&a).passed(), check_reversibility_wk(&b).passed());
        assert_eq!(
            check_reversibility_wk(&a).violations.len(),
            check_reversibility_wk(&b).violations.len()
        );
    }
}
