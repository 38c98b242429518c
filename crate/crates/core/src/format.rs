//! Line-oriented text format for machines.
//!
//! ```text
//! # comment (only when '#' is the first character of the line)
//! type: wk
//! states: q0' q0 q1 qf
//! start: q0'
//! final: qf
//! alphabet: a b
//! rho: a->a_1 a->a_2 b->b_1 b->b_2
//! trans: q0' # # -> q0 1 1
//! trans: q1 $ $ -> qf 0 0
//! ```
//!
//! `mfa` files carry `heads: k` instead of `rho:` and have k reads and k moves
//! per transition; `dfa` files use `trans: q a -> q'`. Serialization is
//! canonical: fixed directive order, declaration order for lists, and
//! transitions sorted by (source-state index, read tokens).

use std::collections::HashMap;
use std::fmt::Write as _;

use indexmap::IndexSet;
use thiserror::Error;

use crate::machine::{ClassicalDfa, ComplementarityRelation, Machine, MachineKind, MultiHeadAutomaton, WkAutomaton};
use crate::symbol::{Cell, Move, State, Symbol, TokenError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing type")]
    MissingType,
    #[error("unknown machine type {0:?}")]
    UnknownType(String),
    #[error("expected a machine of type {expected}, found {found}")]
    WrongType { expected: MachineKind, found: MachineKind },
    #[error("expected `directive: values`")]
    MissingColon,
    #[error("unknown directive {0:?}")]
    UnknownDirective(String),
    #[error("directive {0:?} is not allowed for this machine type")]
    DirectiveNotAllowed(String),
    #[error("directive {0:?} given more than once")]
    RepeatedDirective(String),
    #[error("missing directive {0:?}")]
    MissingDirective(&'static str),
    #[error(transparent)]
    BadToken(#[from] TokenError),
    #[error("duplicate declaration of {0:?}")]
    DuplicateDeclaration(String),
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("duplicate transition key {0}")]
    DuplicateKey(String),
    #[error("expected a head move 0 or 1, found {0:?}")]
    BadMove(String),
    #[error("invalid head count {0:?}")]
    BadHeads(String),
    #[error("malformed {what}: {detail}")]
    Malformed { what: &'static str, detail: String },
}

/// A whitespace-separated token with its 1-based column.
#[derive(Debug, Clone, Copy)]
struct Tok<'a> {
    col: usize,
    text: &'a str,
}

fn tokenize(s: &str, base_col: usize) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in s.char_indices() {
        if ch.is_whitespace() {
            if let Some(b) = start.take() {
                out.push(Tok {
                    col: base_col + s[..b].chars().count(),
                    text: &s[b..i],
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(b) = start {
        out.push(Tok {
            col: base_col + s[..b].chars().count(),
            text: &s[b..],
        });
    }
    out
}

struct Directive<'a> {
    line: usize,
    col: usize,
    name: &'a str,
    values: Vec<Tok<'a>>,
}

fn err(line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, column, kind }
}

fn directives(text: &str) -> Result<Vec<Directive<'_>>, ParseError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.starts_with('#') || raw.trim().is_empty() {
            continue;
        }
        let Some(colon) = raw.find(':') else {
            let col = raw.len() - raw.trim_start().len() + 1;
            return Err(err(line, col, ParseErrorKind::MissingColon));
        };
        let head = &raw[..colon];
        let name = head.trim();
        let col = head.len() - head.trim_start().len() + 1;
        let rest_col = raw[..colon + 1].chars().count() + 1;
        out.push(Directive {
            line,
            col,
            name,
            values: tokenize(&raw[colon + 1..], rest_col),
        });
    }
    Ok(out)
}

const WK_DIRECTIVES: &[&str] = &["states", "start", "final", "alphabet", "rho", "trans"];
const MFA_DIRECTIVES: &[&str] = &["states", "start", "final", "alphabet", "heads", "trans"];
const DFA_DIRECTIVES: &[&str] = &["states", "start", "final", "alphabet", "trans"];
const REPEATABLE: &[&str] = &["rho", "trans"];

/// Directives grouped by name, with checks for unknown and repeated names.
struct Sections<'a> {
    type_line: usize,
    single: HashMap<&'static str, Directive<'a>>,
    rho: Vec<Directive<'a>>,
    trans: Vec<Directive<'a>>,
}

impl<'a> Sections<'a> {
    fn take(&mut self, name: &'static str) -> Result<Directive<'a>, ParseError> {
        self.single
            .remove(name)
            .ok_or_else(|| err(self.type_line, 1, ParseErrorKind::MissingDirective(name)))
    }
}

fn split_sections(text: &str) -> Result<(MachineKind, Sections<'_>), ParseError> {
    let eof_line = text.lines().count() + 1;
    let mut dirs = directives(text)?.into_iter();
    let Some(first) = dirs.next() else {
        return Err(err(eof_line, 1, ParseErrorKind::MissingType));
    };
    if first.name != "type" {
        return Err(err(first.line, first.col, ParseErrorKind::MissingType));
    }
    let kind = match first.values.as_slice() {
        [t] if t.text == "wk" => MachineKind::Wk,
        [t] if t.text == "mfa" => MachineKind::Mfa,
        [t] if t.text == "dfa" => MachineKind::Dfa,
        [t, ..] => {
            return Err(err(first.line, t.col, ParseErrorKind::UnknownType(t.text.into())));
        }
        [] => return Err(err(first.line, first.col, ParseErrorKind::MissingType)),
    };
    let allowed = match kind {
        MachineKind::Wk => WK_DIRECTIVES,
        MachineKind::Mfa => MFA_DIRECTIVES,
        MachineKind::Dfa => DFA_DIRECTIVES,
    };
    let mut sections = Sections {
        type_line: first.line,
        single: HashMap::new(),
        rho: Vec::new(),
        trans: Vec::new(),
    };
    for d in dirs {
        let known = WK_DIRECTIVES.iter().chain(MFA_DIRECTIVES).find(|n| **n == d.name);
        let Some(&name) = known else {
            if d.name == "type" {
                return Err(err(d.line, d.col, ParseErrorKind::RepeatedDirective("type".into())));
            }
            return Err(err(d.line, d.col, ParseErrorKind::UnknownDirective(d.name.into())));
        };
        if !allowed.contains(&name) {
            return Err(err(d.line, d.col, ParseErrorKind::DirectiveNotAllowed(name.into())));
        }
        match name {
            "rho" => sections.rho.push(d),
            "trans" => sections.trans.push(d),
            _ => {
                debug_assert!(!REPEATABLE.contains(&name));
                if sections.single.contains_key(name) {
                    return Err(err(d.line, d.col, ParseErrorKind::RepeatedDirective(name.into())));
                }
                sections.single.insert(name, d);
            }
        }
    }
    Ok((kind, sections))
}

fn parse_state(tok: Tok<'_>, line: usize) -> Result<State, ParseError> {
    State::new(tok.text).map_err(|e| err(line, tok.col, e.into()))
}

fn parse_symbol(tok: Tok<'_>, line: usize) -> Result<Symbol, ParseError> {
    Symbol::new(tok.text).map_err(|e| err(line, tok.col, e.into()))
}

fn known_state(tok: Tok<'_>, line: usize, states: &IndexSet<State>) -> Result<State, ParseError> {
    let q = parse_state(tok, line)?;
    if states.contains(&q) {
        Ok(q)
    } else {
        Err(err(line, tok.col, ParseErrorKind::UnknownState(tok.text.into())))
    }
}

fn parse_move(tok: Tok<'_>, line: usize) -> Result<Move, ParseError> {
    match tok.text {
        "0" => Ok(Move::Stay),
        "1" => Ok(Move::Right),
        other => Err(err(line, tok.col, ParseErrorKind::BadMove(other.into()))),
    }
}

fn read_cell(tok: Tok<'_>, line: usize, alphabet: &IndexSet<Symbol>) -> Result<Cell, ParseError> {
    let cell = Cell::parse(tok.text).map_err(|e| err(line, tok.col, e.into()))?;
    match &cell {
        Cell::Sym(s) if !alphabet.contains(s) => {
            Err(err(line, tok.col, ParseErrorKind::UnknownSymbol(tok.text.into())))
        }
        _ => Ok(cell),
    }
}

/// Header shared by all machine kinds.
struct Header {
    states: IndexSet<State>,
    start: State,
    finals: IndexSet<State>,
    alphabet: IndexSet<Symbol>,
}

fn parse_header(sections: &mut Sections<'_>) -> Result<Header, ParseError> {
    let states_dir = sections.take("states")?;
    let mut states = IndexSet::new();
    for tok in &states_dir.values {
        let q = parse_state(*tok, states_dir.line)?;
        if !states.insert(q) {
            return Err(err(
                states_dir.line,
                tok.col,
                ParseErrorKind::DuplicateDeclaration(tok.text.into()),
            ));
        }
    }

    let start_dir = sections.take("start")?;
    let start = match start_dir.values.as_slice() {
        [tok] => known_state(*tok, start_dir.line, &states)?,
        _ => {
            return Err(err(
                start_dir.line,
                start_dir.col,
                ParseErrorKind::Malformed {
                    what: "start directive",
                    detail: "expected exactly one state".into(),
                },
            ))
        }
    };

    let final_dir = sections.take("final")?;
    let mut finals = IndexSet::new();
    for tok in &final_dir.values {
        let q = known_state(*tok, final_dir.line, &states)?;
        if !finals.insert(q) {
            return Err(err(
                final_dir.line,
                tok.col,
                ParseErrorKind::DuplicateDeclaration(tok.text.into()),
            ));
        }
    }

    let alpha_dir = sections.take("alphabet")?;
    let mut alphabet = IndexSet::new();
    for tok in &alpha_dir.values {
        let s = parse_symbol(*tok, alpha_dir.line)?;
        if !alphabet.insert(s) {
            return Err(err(
                alpha_dir.line,
                tok.col,
                ParseErrorKind::DuplicateDeclaration(tok.text.into()),
            ));
        }
    }

    Ok(Header {
        states,
        start,
        finals,
        alphabet,
    })
}

/// Splits `trans:` values at the `->` token into (lhs, rhs).
fn split_arrow<'a>(d: &'a Directive<'a>) -> Result<(&'a [Tok<'a>], &'a [Tok<'a>]), ParseError> {
    let Some(pos) = d.values.iter().position(|t| t.text == "->") else {
        return Err(err(
            d.line,
            d.col,
            ParseErrorKind::Malformed {
                what: "transition",
                detail: "missing `->`".into(),
            },
        ));
    };
    Ok((&d.values[..pos], &d.values[pos + 1..]))
}

fn arity_error(d: &Directive<'_>, expected: usize) -> ParseError {
    err(
        d.line,
        d.col,
        ParseErrorKind::Malformed {
            what: "transition",
            detail: format!("expected `state` plus {expected} reads and moves on each side"),
        },
    )
}

fn parse_wk(mut sections: Sections<'_>) -> Result<WkAutomaton, ParseError> {
    let header = parse_header(&mut sections)?;
    let mut rho = ComplementarityRelation::new();
    for d in &sections.rho {
        for tok in &d.values {
            let Some((x, y)) = tok.text.split_once("->") else {
                return Err(err(
                    d.line,
                    tok.col,
                    ParseErrorKind::Malformed {
                        what: "rho pair",
                        detail: format!("expected `x->y`, found {:?}", tok.text),
                    },
                ));
            };
            let x_sym = Symbol::new(x).map_err(|e| err(d.line, tok.col, e.into()))?;
            let y_col = tok.col + x.chars().count() + 2;
            let y_sym = Symbol::new(y).map_err(|e| err(d.line, y_col, e.into()))?;
            if !header.alphabet.contains(&x_sym) {
                return Err(err(d.line, tok.col, ParseErrorKind::UnknownSymbol(x.into())));
            }
            if !rho.insert(x_sym, y_sym) {
                return Err(err(
                    d.line,
                    tok.col,
                    ParseErrorKind::DuplicateDeclaration(tok.text.into()),
                ));
            }
        }
    }
    let lower = rho.image_symbols();

    let mut m = WkAutomaton {
        states: header.states.iter().cloned().collect(),
        upper_alphabet: header.alphabet,
        start: header.start,
        finals: header.finals,
        rho,
        delta: Default::default(),
    };
    for d in &sections.trans {
        let (lhs, rhs) = split_arrow(d)?;
        if lhs.len() != 3 || rhs.len() != 3 {
            return Err(arity_error(d, 2));
        }
        let q = known_state(lhs[0], d.line, &header.states)?;
        let upper = read_cell(lhs[1], d.line, &m.upper_alphabet)?;
        let lower_cell = read_cell(lhs[2], d.line, &lower)?;
        let target = known_state(rhs[0], d.line, &header.states)?;
        let d1 = parse_move(rhs[1], d.line)?;
        let d2 = parse_move(rhs[2], d.line)?;
        m.add_transition(q, upper, lower_cell, target, d1, d2)
            .map_err(|e| err(d.line, d.col, ParseErrorKind::DuplicateKey(e.key)))?;
    }
    Ok(m)
}

fn parse_mfa(mut sections: Sections<'_>) -> Result<MultiHeadAutomaton, ParseError> {
    let header = parse_header(&mut sections)?;
    let heads_dir = sections.take("heads")?;
    let heads = match heads_dir.values.as_slice() {
        [tok] => match tok.text.parse::<usize>() {
            Ok(k) if k >= 1 => k,
            _ => return Err(err(heads_dir.line, tok.col, ParseErrorKind::BadHeads(tok.text.into()))),
        },
        _ => {
            return Err(err(
                heads_dir.line,
                heads_dir.col,
                ParseErrorKind::BadHeads(heads_dir.values.iter().map(|t| t.text).collect::<Vec<_>>().join(" ")),
            ))
        }
    };
    let mut m = MultiHeadAutomaton {
        states: header.states.iter().cloned().collect(),
        alphabet: header.alphabet,
        heads,
        start: header.start,
        finals: header.finals,
        delta: Default::default(),
    };
    for d in &sections.trans {
        let (lhs, rhs) = split_arrow(d)?;
        if lhs.len() != heads + 1 || rhs.len() != heads + 1 {
            return Err(arity_error(d, heads));
        }
        let q = known_state(lhs[0], d.line, &header.states)?;
        let reads = lhs[1..]
            .iter()
            .map(|t| read_cell(*t, d.line, &m.alphabet))
            .collect::<Result<Vec<_>, _>>()?;
        let target = known_state(rhs[0], d.line, &header.states)?;
        let moves = rhs[1..]
            .iter()
            .map(|t| parse_move(*t, d.line))
            .collect::<Result<Vec<_>, _>>()?;
        m.add_transition(q, reads, target, moves)
            .map_err(|e| err(d.line, d.col, ParseErrorKind::DuplicateKey(e.key)))?;
    }
    Ok(m)
}

fn parse_dfa(mut sections: Sections<'_>) -> Result<ClassicalDfa, ParseError> {
    let header = parse_header(&mut sections)?;
    let mut m = ClassicalDfa {
        states: header.states.iter().cloned().collect(),
        alphabet: header.alphabet,
        start: header.start,
        finals: header.finals,
        delta: Default::default(),
    };
    for d in &sections.trans {
        let (lhs, rhs) = split_arrow(d)?;
        if lhs.len() != 2 || rhs.len() != 1 {
            return Err(err(
                d.line,
                d.col,
                ParseErrorKind::Malformed {
                    what: "transition",
                    detail: "expected `q a -> q'`".into(),
                },
            ));
        }
        let q = known_state(lhs[0], d.line, &header.states)?;
        let a = parse_symbol(lhs[1], d.line)?;
        if !m.alphabet.contains(&a) {
            return Err(err(
                d.line,
                lhs[1].col,
                ParseErrorKind::UnknownSymbol(lhs[1].text.into()),
            ));
        }
        let target = known_state(rhs[0], d.line, &header.states)?;
        m.add_transition(q, a, target)
            .map_err(|e| err(d.line, d.col, ParseErrorKind::DuplicateKey(e.key)))?;
    }
    Ok(m)
}

/// Parses a machine of any kind.
pub fn parse_machine(text: &str) -> Result<Machine, ParseError> {
    let (kind, sections) = split_sections(text)?;
    Ok(match kind {
        MachineKind::Wk => Machine::Wk(parse_wk(sections)?),
        MachineKind::Mfa => Machine::Mfa(parse_mfa(sections)?),
        MachineKind::Dfa => Machine::Dfa(parse_dfa(sections)?),
    })
}

fn expect_kind(text: &str, expected: MachineKind) -> Result<Sections<'_>, ParseError> {
    let (kind, sections) = split_sections(text)?;
    if kind != expected {
        return Err(err(
            sections.type_line,
            1,
            ParseErrorKind::WrongType { expected, found: kind },
        ));
    }
    Ok(sections)
}

pub fn parse_wk_automaton(text: &str) -> Result<WkAutomaton, ParseError> {
    parse_wk(expect_kind(text, MachineKind::Wk)?)
}

pub fn parse_multi_head_automaton(text: &str) -> Result<MultiHeadAutomaton, ParseError> {
    parse_mfa(expect_kind(text, MachineKind::Mfa)?)
}

pub fn parse_dfa_automaton(text: &str) -> Result<ClassicalDfa, ParseError> {
    parse_dfa(expect_kind(text, MachineKind::Dfa)?)
}

fn push_list<'a>(out: &mut String, directive: &str, items: impl IntoIterator<Item = &'a str>) {
    out.push_str(directive);
    out.push(':');
    for item in items {
        out.push(' ');
        out.push_str(item);
    }
    out.push('\n');
}

fn push_header(
    out: &mut String,
    kind: MachineKind,
    states: &[State],
    start: &State,
    finals: &IndexSet<State>,
    alphabet: &IndexSet<Symbol>,
) {
    writeln!(out, "type: {kind}").unwrap();
    push_list(out, "states", states.iter().map(State::as_str));
    push_list(out, "start", [start.as_str()]);
    push_list(out, "final", finals.iter().map(State::as_str));
    push_list(out, "alphabet", alphabet.iter().map(Symbol::as_str));
}

/// Sort key for canonical transition order.
fn order_key<'a>(states: &[State], source: &State, reads: impl Iterator<Item = &'a str>) -> (usize, Vec<&'a str>) {
    let idx = states.iter().position(|s| s == source).unwrap_or(usize::MAX);
    (idx, reads.collect())
}

fn transition_line(source: &State, reads: &[&str], target: &State, moves: &[Move]) -> String {
    let mut line = format!("trans: {source}");
    for r in reads {
        line.push(' ');
        line.push_str(r);
    }
    write!(line, " -> {target}").unwrap();
    for d in moves {
        write!(line, " {d}").unwrap();
    }
    line.push('\n');
    line
}

pub fn serialize_wk(m: &WkAutomaton) -> String {
    let mut out = String::new();
    push_header(
        &mut out,
        MachineKind::Wk,
        &m.states,
        &m.start,
        &m.finals,
        &m.upper_alphabet,
    );
    let pairs: Vec<String> = m.rho.pairs().map(|(x, y)| format!("{x}->{y}")).collect();
    push_list(&mut out, "rho", pairs.iter().map(String::as_str));
    let mut entries: Vec<_> = m.delta.iter().collect();
    entries.sort_by_cached_key(|(r, _)| order_key(&m.states, &r.state, [r.upper.token(), r.lower.token()].into_iter()));
    for (r, s) in entries {
        out.push_str(&transition_line(
            &r.state,
            &[r.upper.token(), r.lower.token()],
            &s.target,
            &[s.upper_move, s.lower_move],
        ));
    }
    out
}

pub fn serialize_mfa(m: &MultiHeadAutomaton) -> String {
    let mut out = String::new();
    push_header(&mut out, MachineKind::Mfa, &m.states, &m.start, &m.finals, &m.alphabet);
    writeln!(out, "heads: {}", m.heads).unwrap();
    let mut entries: Vec<_> = m.delta.iter().collect();
    entries.sort_by_cached_key(|(r, _)| order_key(&m.states, &r.state, r.reads.iter().map(Cell::token)));
    for (r, s) in entries {
        let reads: Vec<&str> = r.reads.iter().map(Cell::token).collect();
        out.push_str(&transition_line(&r.state, &reads, &s.target, &s.moves));
    }
    out
}

pub fn serialize_dfa(m: &ClassicalDfa) -> String {
    let mut out = String::new();
    push_header(&mut out, MachineKind::Dfa, &m.states, &m.start, &m.finals, &m.alphabet);
    let mut entries: Vec<_> = m.delta.iter().collect();
    entries.sort_by_cached_key(|((q, a), _)| order_key(&m.states, q, std::iter::once(a.as_str())));
    for ((q, a), target) in entries {
        writeln!(out, "trans: {q} {a} -> {target}").unwrap();
    }
    out
}

/// Canonical text form of a machine.
pub fn serialize_machine(machine: &Machine) -> String {
    match machine {
        Machine::Wk(m) => serialize_wk(m),
        Machine::Mfa(m) => serialize_mfa(m),
        Machine::Dfa(m) => serialize_dfa(m),
    }
}
