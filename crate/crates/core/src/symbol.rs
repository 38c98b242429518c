//! Symbols, state names and tape cells.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Characters that may not appear inside a symbol or state token.
///
/// `#` and `$` are the end markers; `:`, `,` and `>` are punctuation of the
/// machine file format (`rho: x->y`, `trans: ... -> ...`).
pub const RESERVED_CHARS: [char; 5] = ['#', '$', ':', ',', '>'];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TokenError {
    #[error("empty token")]
    Empty,
    #[error("token {token:?} contains whitespace")]
    Whitespace { token: String },
    #[error("token {token:?} contains reserved character {ch:?}")]
    Reserved { token: String, ch: char },
}

fn check_token(token: &str) -> Result<(), TokenError> {
    if token.is_empty() {
        return Err(TokenError::Empty);
    }
    if token.chars().any(char::is_whitespace) {
        return Err(TokenError::Whitespace {
            token: token.to_string(),
        });
    }
    if let Some(ch) = token.chars().find(|c| RESERVED_CHARS.contains(c)) {
        return Err(TokenError::Reserved {
            token: token.to_string(),
            ch,
        });
    }
    Ok(())
}

/// An alphabet symbol. Identity is by (case-sensitive) name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(String);

impl Symbol {
    pub fn new(token: impl Into<String>) -> Result<Self, TokenError> {
        let token = token.into();
        check_token(&token)?;
        Ok(Symbol(token))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl FromStr for Symbol {
    type Err = TokenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Symbol::new(s)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A state name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State(String);

impl State {
    pub fn new(name: impl Into<String>) -> Result<Self, TokenError> {
        let name = name.into();
        check_token(&name)?;
        Ok(State(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl FromStr for State {
    type Err = TokenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        State::new(s)
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// What a head can scan: one of the two end markers or an alphabet symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    /// `#`, position 0 of every strand.
    LeftEnd,
    /// `$`, position n+1 of every strand.
    RightEnd,
    Sym(Symbol),
}

impl Cell {
    pub fn token(&self) -> &str {
        match self {
            Cell::LeftEnd => "#",
            Cell::RightEnd => "$",
            Cell::Sym(s) => s.as_str(),
        }
    }

    pub fn symbol(&self) -> Option<&Symbol> {
        match self {
            Cell::Sym(s) => Some(s),
            _ => None,
        }
    }

    /// Parses `#`, `$` or a symbol token.
    pub fn parse(token: &str) -> Result<Self, TokenError> {
        match token {
            "#" => Ok(Cell::LeftEnd),
            "$" => Ok(Cell::RightEnd),
            other => Symbol::new(other).map(Cell::Sym),
        }
    }
}

impl From<Symbol> for Cell {
    fn from(s: Symbol) -> Self {
        Cell::Sym(s)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Head displacement of a single step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Stay,
    Right,
}

impl Move {
    pub fn offset(self) -> usize {
        match self {
            Move::Stay => 0,
            Move::Right => 1,
        }
    }

    pub fn from_digit(d: u8) -> Option<Self> {
        match d {
            0 => Some(Move::Stay),
            1 => Some(Move::Right),
            _ => None,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.offset())
    }
}

/// An input word: a sequence of symbols.
pub type Word = Vec<Symbol>;

/// Builds a word from single-character symbols, e.g. `word("aba")`.
///
/// Panics if a character is not a valid symbol; intended for tests and fixtures.
pub fn word(chars: &str) -> Word {
    chars
        .chars()
        .map(|c| Symbol::new(c.to_string()).expect("invalid symbol character"))
        .collect()
}

/// Builds a word from whitespace-separated tokens, e.g. `tokens("a_1 b_2 a_2")`.
pub fn tokens(text: &str) -> Word {
    text.split_whitespace()
        .map(|t| Symbol::new(t).expect("invalid symbol token"))
        .collect()
}

/// Renders a word with the given separator between symbols.
pub fn render_word(w: &[Symbol], sep: &str) -> String {
    w.iter().map(Symbol::as_str).collect::<Vec<_>>().join(sep)
}

/// Convenience for fixtures: `sym("a")`.
pub fn sym(token: &str) -> Symbol {
    Symbol::new(token).expect("invalid symbol token")
}

/// Convenience for fixtures: `state("q0")`.
pub fn state(name: &str) -> State {
    State::new(name).expect("invalid state name")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_reserved_and_empty_tokens() {
        assert_eq!(Symbol::new(""), Err(TokenError::Empty));
        assert!(matches!(Symbol::new("#"), Err(TokenError::Reserved { ch: '#', .. })));
        assert!(matches!(Symbol::new("a$"), Err(TokenError::Reserved { ch: '$', .. })));
        assert!(matches!(Symbol::new("x->y"), Err(TokenError::Reserved { ch: '>', .. })));
        assert!(matches!(Symbol::new("a b"), Err(TokenError::Whitespace { .. })));
        assert!(State::new("q:0").is_err());
    }

    #[test]
    fn accepts_ordinary_tokens() {
        for t in ["a", "v_m1", "%", "*", "a_1", "q0'", "-"] {
            assert!(Symbol::new(t).is_ok(), "{t}");
        }
    }

    #[test]
    fn end_markers_parse_to_cells() {
        assert_eq!(Cell::parse("#").unwrap(), Cell::LeftEnd);
        assert_eq!(Cell::parse("$").unwrap(), Cell::RightEnd);
        assert_eq!(Cell::parse("a").unwrap(), Cell::Sym(sym("a")));
        assert_eq!(Cell::RightEnd.to_string(), "$");
    }

    #[test]
    fn case_sensitive_identity() {
        assert_ne!(sym("a"), sym("A"));
        assert_ne!(state("Q"), state("q"));
    }
}
