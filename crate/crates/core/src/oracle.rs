//! Brute-force ground truths and bounded-length differential comparison.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::machine::ClassicalDfa;
use crate::symbol::{render_word, Symbol, Word};

/// Mismatch lists keep at most this many words; counts stay exact.
pub const MISMATCH_CAP: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("symbol {symbol} at position {position} is not in the alphabet")]
pub struct UnknownSymbol {
    pub symbol: Symbol,
    pub position: usize,
}

/// Left-to-right DFA evaluation; a missing transition rejects.
pub fn dfa_accepts(dfa: &ClassicalDfa, w: &[Symbol]) -> Result<bool, UnknownSymbol> {
    let mut q = &dfa.start;
    let mut stuck = false;
    for (i, x) in w.iter().enumerate() {
        if !dfa.alphabet.contains(x) {
            return Err(UnknownSymbol {
                symbol: x.clone(),
                position: i + 1,
            });
        }
        if stuck {
            continue;
        }
        match dfa.delta.get(&(q.clone(), x.clone())) {
            Some(next) => q = next,
            None => stuck = true,
        }
    }
    Ok(!stuck && dfa.finals.contains(q))
}

/// A block `w*x` of a block string, with `w` and `x` over `{a, b}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub w: String,
    pub x: String,
}

/// Parses `w1*x1%...%wn*xn`; `None` if the word is not of that shape.
pub fn parse_blocks(w: &[Symbol]) -> Option<Vec<Block>> {
    let mut blocks = Vec::new();
    let mut current = String::new();
    let mut flush = |current: &mut String| -> Option<()> {
        let (left, right) = current.split_once('*')?;
        if right.contains('*') {
            return None;
        }
        blocks.push(Block {
            w: left.to_string(),
            x: right.to_string(),
        });
        current.clear();
        Some(())
    };
    for s in w {
        match s.as_str() {
            "a" | "b" | "*" => current.push_str(s.as_str()),
            "%" => flush(&mut current)?,
            _ => return None,
        }
    }
    flush(&mut current)?;
    Some(blocks)
}

/// All 1-based block pairs `(i, j)`, `i < j`, with equal w parts and different x parts.
pub fn theorem2_witness_pairs(w: &[Symbol]) -> Vec<(usize, usize)> {
    let Some(blocks) = parse_blocks(w) else {
        return Vec::new();
    };
    let mut pairs = Vec::new();
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            if blocks[i].w == blocks[j].w && blocks[i].x != blocks[j].x {
                pairs.push((i + 1, j + 1));
            }
        }
    }
    pairs
}

/// Membership in `{w1*x1%...%wn*xn | exists i, j: wi = wj, xi != xj}`.
/// Malformed words are not members.
pub fn theorem2_member(w: &[Symbol]) -> bool {
    !theorem2_witness_pairs(w).is_empty()
}

/// All words of length `0..=max_len`, shortest first, then lexicographic in
/// the given symbol order.
pub fn enumerate_words(alphabet: &[Symbol], max_len: usize) -> Words {
    Words {
        alphabet: alphabet.to_vec(),
        max_len,
        digits: Some(Vec::new()),
    }
}

pub struct Words {
    alphabet: Vec<Symbol>,
    max_len: usize,
    digits: Option<Vec<usize>>,
}

impl Iterator for Words {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let digits = self.digits.as_mut()?;
        let out: Word = digits.iter().map(|&d| self.alphabet[d].clone()).collect();
        // increment, rightmost digit first; on overflow grow the length
        let k = self.alphabet.len();
        let mut i = digits.len();
        loop {
            if i == 0 {
                if digits.len() == self.max_len || k == 0 {
                    self.digits = None;
                } else {
                    let len = digits.len() + 1;
                    *digits = vec![0; len];
                }
                break;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < k {
                break;
            }
            digits[i] = 0;
        }
        Some(out)
    }
}

/// Number of words `enumerate_words` yields.
pub fn word_count(alphabet_len: usize, max_len: usize) -> u128 {
    (0..=max_len as u32).map(|l| (alphabet_len as u128).pow(l)).sum()
}

const BLOCK_ALPHABET: [&str; 4] = ["a", "b", "*", "%"];

/// Well-formed block strings `w1*x1%...%wn*xn` with `1 <= n <= max_blocks`
/// and total length at most `max_total_len`, shortest first, then
/// lexicographic in the order `a < b < * < %`.
pub fn enumerate_block_strings(max_total_len: usize, max_blocks: usize) -> impl Iterator<Item = Word> {
    let alphabet: Vec<Symbol> = BLOCK_ALPHABET.iter().map(|t| Symbol::new(*t).unwrap()).collect();
    (1..=max_total_len).flat_map(move |len| {
        let mut out = Vec::new();
        let mut buf = Vec::with_capacity(len);
        blocks_of_length(len, max_blocks, 1, false, &mut buf, &mut out);
        out.into_iter()
            .map(|w: Vec<u8>| w.into_iter().map(|i| alphabet[i as usize].clone()).collect::<Word>())
            .collect::<Vec<_>>()
    })
}

/// Depth-first generation in lexicographic order. `blocks` counts the block
/// being written; `star` says whether it already has its `*`.
fn blocks_of_length(
    remaining: usize,
    max_blocks: usize,
    blocks: usize,
    star: bool,
    buf: &mut Vec<u8>,
    out: &mut Vec<Vec<u8>>,
) {
    if max_blocks == 0 {
        return;
    }
    if remaining == 0 {
        if star {
            out.push(buf.clone());
        }
        return;
    }
    for i in 0..BLOCK_ALPHABET.len() {
        match i {
            0 | 1 => {
                if !star && remaining < 2 {
                    continue;
                }
                buf.push(i as u8);
                blocks_of_length(remaining - 1, max_blocks, blocks, star, buf, out);
                buf.pop();
            }
            2 => {
                if star {
                    continue;
                }
                buf.push(2);
                blocks_of_length(remaining - 1, max_blocks, blocks, true, buf, out);
                buf.pop();
            }
            _ => {
                // '%' closes a block and needs room for the next block's '*'
                if !star || blocks == max_blocks || remaining < 2 {
                    continue;
                }
                buf.push(3);
                blocks_of_length(remaining - 1, max_blocks, blocks + 1, false, buf, out);
                buf.pop();
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LengthCounts {
    pub words: u64,
    pub agreements: u64,
    pub a_only: u64,
    pub b_only: u64,
}

impl LengthCounts {
    pub fn mismatches(&self) -> u64 {
        self.a_only + self.b_only
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub word: Word,
    pub a: bool,
    pub b: bool,
}

/// Per-length agreement statistics of two acceptors.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiffReport {
    pub max_len: usize,
    pub per_length: BTreeMap<usize, LengthCounts>,
    /// The first [`MISMATCH_CAP`] mismatching words, in evaluation order.
    pub mismatches: Vec<Mismatch>,
    pub total_mismatches: u64,
}

impl DiffReport {
    pub fn is_clean(&self) -> bool {
        self.total_mismatches == 0
    }

    pub fn words(&self) -> u64 {
        self.per_length.values().map(|c| c.words).sum()
    }

    pub fn truncated(&self) -> bool {
        self.total_mismatches as usize > self.mismatches.len()
    }

    fn record(&mut self, w: &[Symbol], a: bool, b: bool) {
        self.max_len = self.max_len.max(w.len());
        let counts = self.per_length.entry(w.len()).or_default();
        counts.words += 1;
        match (a, b) {
            _ if a == b => counts.agreements += 1,
            (true, false) => counts.a_only += 1,
            _ => counts.b_only += 1,
        }
        if a != b {
            self.total_mismatches += 1;
            if self.mismatches.len() < MISMATCH_CAP {
                self.mismatches.push(Mismatch { word: w.to_vec(), a, b });
            }
        }
    }

    /// Appends `other`, which must cover words evaluated after `self`'s.
    pub fn merge(mut self, other: DiffReport) -> DiffReport {
        self.max_len = self.max_len.max(other.max_len);
        for (len, c) in other.per_length {
            let e = self.per_length.entry(len).or_default();
            e.words += c.words;
            e.agreements += c.agreements;
            e.a_only += c.a_only;
            e.b_only += c.b_only;
        }
        self.total_mismatches += other.total_mismatches;
        let room = MISMATCH_CAP.saturating_sub(self.mismatches.len());
        self.mismatches.extend(other.mismatches.into_iter().take(room));
        self
    }

    /// Swaps the roles of the two acceptors.
    pub fn swapped(&self) -> DiffReport {
        let mut out = self.clone();
        for c in out.per_length.values_mut() {
            std::mem::swap(&mut c.a_only, &mut c.b_only);
        }
        for m in &mut out.mismatches {
            std::mem::swap(&mut m.a, &mut m.b);
        }
        out
    }

    /// Tab-separated rows: `length words agree a_only b_only`, then
    /// `mismatch word a b` rows and a `total` row.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("length\twords\tagree\ta_only\tb_only\n");
        for (len, c) in &self.per_length {
            out.push_str(&format!(
                "{len}\t{}\t{}\t{}\t{}\n",
                c.words, c.agreements, c.a_only, c.b_only
            ));
        }
        for m in &self.mismatches {
            out.push_str(&format!(
                "mismatch\t{}\t{}\t{}\n",
                render_word(&m.word, ","),
                m.a as u8,
                m.b as u8
            ));
        }
        out.push_str(&format!("total\t{}\t{}\n", self.words(), self.total_mismatches));
        out
    }
}

impl fmt::Display for DiffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>6} {:>10} {:>10} {:>8} {:>8}",
            "length", "words", "agree", "A-only", "B-only"
        )?;
        for (len, c) in &self.per_length {
            writeln!(
                f,
                "{len:>6} {:>10} {:>10} {:>8} {:>8}",
                c.words, c.agreements, c.a_only, c.b_only
            )?;
        }
        writeln!(f, "words: {}, mismatches: {}", self.words(), self.total_mismatches)?;
        for m in &self.mismatches {
            let w = if m.word.is_empty() {
                "ε".to_string()
            } else {
                render_word(&m.word, " ")
            };
            writeln!(f, "  {w}: A={} B={}", m.a, m.b)?;
        }
        if self.truncated() {
            writeln!(f, "  ... (list capped at {MISMATCH_CAP})")?;
        }
        Ok(())
    }
}

/// An acceptor failed on a word.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("acceptor {side} failed on {word:?}: {message}")]
pub struct DiffError {
    pub side: char,
    pub word: String,
    pub message: String,
}

fn eval<E: fmt::Display>(side: char, w: &[Symbol], r: Result<bool, E>) -> Result<bool, DiffError> {
    r.map_err(|e| DiffError {
        side,
        word: render_word(w, " "),
        message: e.to_string(),
    })
}

/// Runs both acceptors on every word and tallies agreement per length.
pub fn differential_compare<A, B, E1, E2, I>(
    mut accept_a: A,
    mut accept_b: B,
    words: I,
) -> Result<DiffReport, DiffError>
where
    A: FnMut(&[Symbol]) -> Result<bool, E1>,
    B: FnMut(&[Symbol]) -> Result<bool, E2>,
    E1: fmt::Display,
    E2: fmt::Display,
    I: IntoIterator<Item = Word>,
{
    let mut report = DiffReport::default();
    for w in words {
        let a = eval('A', &w, accept_a(&w))?;
        let b = eval('B', &w, accept_b(&w))?;
        report.record(&w, a, b);
    }
    Ok(report)
}

/// Parallel [`differential_compare`]; the report is identical to the sequential one.
pub fn differential_compare_par<A, B, E1, E2>(accept_a: A, accept_b: B, words: &[Word]) -> Result<DiffReport, DiffError>
where
    A: Fn(&[Symbol]) -> Result<bool, E1> + Sync,
    B: Fn(&[Symbol]) -> Result<bool, E2> + Sync,
    E1: fmt::Display,
    E2: fmt::Display,
{
    const CHUNK: usize = 4096;
    words
        .par_chunks(CHUNK)
        .map(|chunk| differential_compare(&accept_a, &accept_b, chunk.iter().cloned()))
        .collect::<Result<Vec<_>, _>>()
        .map(|parts| parts.into_iter().fold(DiffReport::default(), DiffReport::merge))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_dfa_automaton;
    use crate::symbol::{sym, word};

    fn example1_dfa() -> ClassicalDfa {
        parse_dfa_automaton(include_str!("../../../corpus/example1-dfa.dfa")).unwrap()
    }

    fn ab() -> Vec<Symbol> {
        vec![sym("a"), sym("b")]
    }

    #[test]
    fn example1_dfa_basics() {
        let d = example1_dfa();
        assert!(dfa_accepts(&d, &word("aba")).unwrap());
        assert!(!dfa_accepts(&d, &[]).unwrap());
        assert!(!dfa_accepts(&d, &word("b")).unwrap());
        assert!(dfa_accepts(&d, &word("c")).is_err());
    }

    #[test]
    fn example1_dfa_accepts_words_ending_in_a() {
        let d = example1_dfa();
        for n in 1..=10 {
            let accepted = enumerate_words(&ab(), n)
                .filter(|w| w.len() == n)
                .filter(|w| {
                    let got = dfa_accepts(&d, w).unwrap();
                    assert_eq!(got, w.last() == Some(&sym("a")));
                    got
                })
                .count();
            assert_eq!(accepted, 1 << (n - 1));
        }
    }

    #[test]
    fn partial_dfa_rejects_on_missing_transition() {
        let d =
            parse_dfa_automaton("type: dfa\nstates: p\nstart: p\nfinal: p\nalphabet: a b\ntrans: p a -> p\n").unwrap();
        assert!(dfa_accepts(&d, &word("aa")).unwrap());
        assert!(!dfa_accepts(&d, &word("ab")).unwrap());
        assert!(!dfa_accepts(&d, &word("ba")).unwrap());
    }

    #[test]
    fn block_membership_examples() {
        assert!(theorem2_member(&word("aa*a%aa*b")));
        assert!(!theorem2_member(&word("a*a%b*a")));
        assert!(!theorem2_member(&word("ab")));
        assert!(theorem2_member(&word("ab*a%ab*b")));
        assert!(!theorem2_member(&word("*")));
        assert!(!theorem2_member(&word("a*a%a*a")));
        assert!(!theorem2_member(&word("a*a%%a*b")));
        assert!(!theorem2_member(&word("%a*a%a*b")));
        assert!(!theorem2_member(&word("a**a%a*b")));
        assert!(!theorem2_member(&[]));
        assert_eq!(theorem2_witness_pairs(&word("*a%b*%*b")), vec![(1, 3)]);
    }

    #[test]
    fn enumerate_words_small_cases() {
        let got: Vec<String> = enumerate_words(&ab(), 2).map(|w| render_word(&w, "")).collect();
        assert_eq!(got, ["", "a", "b", "aa", "ab", "ba", "bb"]);
        let only_empty: Vec<Word> = enumerate_words(&ab(), 0).collect();
        assert_eq!(only_empty, vec![Vec::<Symbol>::new()]);
        let got: Vec<String> = enumerate_words(&[sym("a")], 3).map(|w| render_word(&w, "")).collect();
        assert_eq!(got, ["", "a", "aa", "aaa"]);
        assert_eq!(enumerate_words(&[], 3).count(), 1);
    }

    #[test]
    fn enumerate_words_count_and_uniqueness() {
        let abc = vec![sym("a"), sym("b"), sym("c")];
        let all: Vec<Word> = enumerate_words(&abc, 5).collect();
        assert_eq!(all.len() as u128, word_count(3, 5));
        let unique: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(unique.len(), all.len());
    }

    #[test]
    fn block_strings_single_block_length_three() {
        let got: Vec<String> = enumerate_block_strings(3, 1).map(|w| render_word(&w, "")).collect();
        let mut sorted = got.clone();
        sorted.sort();
        let mut expected = vec![
            "*", "a*", "*a", "b*", "*b", "a*a", "a*b", "b*a", "b*b", "aa*", "ab*", "ba*", "bb*", "*aa", "*ab", "*ba",
            "*bb",
        ];
        expected.sort();
        assert_eq!(sorted, expected);
        assert_eq!(&got[..5], ["*", "a*", "b*", "*a", "*b"]);
    }

    #[test]
    fn block_strings_edge_cases() {
        assert_eq!(enumerate_block_strings(10, 0).count(), 0);
        assert_eq!(enumerate_block_strings(0, 3).count(), 0);
        for w in enumerate_block_strings(7, 3) {
            let blocks = parse_blocks(&w).expect("well-formed");
            assert!((1..=3).contains(&blocks.len()));
        }
    }

    /// Brute force over all words of {a,b,*,%}^<=len filtered by the parser.
    #[test]
    fn block_strings_match_filtered_brute_force() {
        let alphabet: Vec<Symbol> = BLOCK_ALPHABET.iter().map(|t| sym(t)).collect();
        for max_blocks in 1..=3 {
            let expected: Vec<Word> = enumerate_words(&alphabet, 7)
                .filter(|w| parse_blocks(w).is_some_and(|b| b.len() <= max_blocks))
                .collect();
            let got: Vec<Word> = enumerate_block_strings(7, max_blocks).collect();
            assert_eq!(got, expected, "max_blocks = {max_blocks}");
        }
    }

    #[test]
    fn diff_against_self_and_complement() {
        let d = example1_dfa();
        let words: Vec<Word> = enumerate_words(&ab(), 6).collect();
        let same = differential_compare(
            |w: &[Symbol]| dfa_accepts(&d, w),
            |w: &[Symbol]| dfa_accepts(&d, w),
            words.clone(),
        )
        .unwrap();
        assert!(same.is_clean());
        assert_eq!(same.words(), 127);

        let comp = differential_compare(
            |w: &[Symbol]| dfa_accepts(&d, w),
            |w: &[Symbol]| dfa_accepts(&d, w).map(|b| !b),
            words.clone(),
        )
        .unwrap();
        for (len, c) in &comp.per_length {
            assert_eq!(c.a_only + c.b_only, c.words, "length {len}");
            assert_eq!(c.agreements, 0);
        }
        assert_eq!(comp.total_mismatches, 127);
        assert_eq!(comp.mismatches.len(), MISMATCH_CAP);
        assert!(comp.truncated());

        let par = differential_compare_par(
            |w: &[Symbol]| dfa_accepts(&d, w),
            |w: &[Symbol]| dfa_accepts(&d, w).map(|b| !b),
            &words,
        )
        .unwrap();
        assert_eq!(par, comp);

        let flipped = differential_compare(
            |w: &[Symbol]| dfa_accepts(&d, w).map(|b| !b),
            |w: &[Symbol]| dfa_accepts(&d, w),
            words,
        )
        .unwrap();
        assert_eq!(flipped, comp.swapped());
    }

    #[test]
    fn diff_propagates_errors_with_word() {
        let d = example1_dfa();
        let err = differential_compare(
            |w: &[Symbol]| dfa_accepts(&d, w),
            |_: &[Symbol]| Ok::<bool, UnknownSymbol>(true),
            vec![word("ac")],
        )
        .unwrap_err();
        assert_eq!(err.side, 'A');
        assert_eq!(err.word, "a c");
    }
}
