//! Words, D0L-systems, derivation and compatibility.
//!
//! Word indexing is 1-based everywhere in the public API; `Word::slice`
//! follows the end-exclusive convention where index `|S| + 1` marks the
//! position past the last symbol.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LsysError {
    #[error("slice indices ({i}, {j}) out of range for word of length {len}")]
    IndexOutOfRange { i: usize, j: usize, len: usize },
    #[error("no production for symbol '{0}'")]
    MissingProduction(Symbol),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

/// A single character of the alphabet.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Symbol(pub char);

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite, possibly empty, sequence of symbols.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    /// The `i`-th symbol, 1-based.
    pub fn at(&self, i: usize) -> Option<Symbol> {
        if i >= 1 && i <= self.0.len() {
            Some(self.0[i - 1])
        } else {
            None
        }
    }

    /// The sub-word from index `i` (inclusive) to `j` (exclusive), 1-based.
    ///
    /// `i = j` yields the empty word; `j = |S| + 1` yields the suffix from `i`.
    pub fn slice(&self, i: usize, j: usize) -> Result<Word, LsysError> {
        let len = self.0.len();
        if !(1 <= i && i <= j && j <= len + 1) {
            return Err(LsysError::IndexOutOfRange { i, j, len });
        }
        Ok(Word(self.0[i - 1..j - 1].to_vec()))
    }

    pub fn concat(parts: &[Word]) -> Word {
        let mut out = Vec::new();
        for p in parts {
            out.extend_from_slice(&p.0);
        }
        Word(out)
    }
}

impl From<&str> for Word {
    fn from(s: &str) -> Self {
        Word(s.chars().map(Symbol).collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.0)?;
        }
        Ok(())
    }
}

/// The input trace `(w_0, ..., w_m)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WordSequence(Vec<Word>);

impl WordSequence {
    /// Panics when `words` is empty; a trace has at least `w_0`.
    pub fn new(words: Vec<Word>) -> Self {
        assert!(!words.is_empty(), "a word sequence needs at least one word");
        WordSequence(words)
    }

    pub fn from_strs(words: &[&str]) -> Self {
        Self::new(words.iter().map(|w| Word::from(*w)).collect())
    }

    pub fn words(&self) -> &[Word] {
        &self.0
    }

    /// Number of derivation steps `m`; the sequence holds `m + 1` words.
    pub fn steps(&self) -> usize {
        self.0.len() - 1
    }

    pub fn word(&self, i: usize) -> &Word {
        &self.0[i]
    }

    /// Distinct symbols occurring in `w_0 ... w_{m-1}` (the last word excluded).
    pub fn occurring_symbols(&self) -> BTreeSet<Symbol> {
        let mut set = BTreeSet::new();
        for w in &self.0[..self.0.len() - 1] {
            set.extend(w.symbols().iter().copied());
        }
        set
    }
}

/// A deterministic context-free L-system, possibly partial.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct D0LSystem {
    axiom: Word,
    productions: BTreeMap<Symbol, Word>,
}

impl D0LSystem {
    pub fn new(axiom: Word, productions: BTreeMap<Symbol, Word>) -> Self {
        D0LSystem { axiom, productions }
    }

    pub fn from_rules(axiom: &str, rules: &[(char, &str)]) -> Self {
        let productions = rules
            .iter()
            .map(|(a, x)| (Symbol(*a), Word::from(*x)))
            .collect();
        D0LSystem {
            axiom: Word::from(axiom),
            productions,
        }
    }

    pub fn axiom(&self) -> &Word {
        &self.axiom
    }

    pub fn productions(&self) -> &BTreeMap<Symbol, Word> {
        &self.productions
    }

    pub fn successor(&self, s: Symbol) -> Option<&Word> {
        self.productions.get(&s)
    }

    /// Axiom symbols, predecessors, and all successor symbols.
    pub fn alphabet(&self) -> BTreeSet<Symbol> {
        let mut set: BTreeSet<Symbol> = self.axiom.symbols().iter().copied().collect();
        for (a, x) in &self.productions {
            set.insert(*a);
            set.extend(x.symbols().iter().copied());
        }
        set
    }

    /// One parallel rewriting step.
    pub fn derive_step(&self, w: &Word) -> Result<Word, LsysError> {
        let mut parts = Vec::with_capacity(w.len());
        for &s in w.symbols() {
            match self.productions.get(&s) {
                Some(x) => parts.push(x.clone()),
                None => return Err(LsysError::MissingProduction(s)),
            }
        }
        Ok(Word::concat(&parts))
    }

    /// The trace `(axiom, ..., w_m)` of `m` derivation steps.
    pub fn derive_trace(&self, m: usize) -> Result<WordSequence, LsysError> {
        let mut words = Vec::with_capacity(m + 1);
        words.push(self.axiom.clone());
        for _ in 0..m {
            let next = self.derive_step(words.last().unwrap())?;
            words.push(next);
        }
        Ok(WordSequence::new(words))
    }

    /// True iff this system generates `theta` as its `m`-step trace.
    ///
    /// The trace of a deterministic system is unique, so re-deriving and
    /// comparing word-for-word is the full compatibility test.
    pub fn is_compatible(&self, theta: &WordSequence) -> bool {
        match self.derive_trace(theta.steps()) {
            Ok(trace) => trace == *theta,
            Err(_) => false,
        }
    }
}

/// One word per line, `w_0` first; an empty line is the empty word.
pub fn parse_sequence(text: &str) -> Result<WordSequence, ParseError> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    let mut words = Vec::new();
    for (idx, line) in body.split('\n').enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if let Some(bad) = line.chars().find(|c| c.is_whitespace() || c.is_control()) {
            return Err(ParseError {
                line: idx + 1,
                msg: format!("word contains whitespace or control character {bad:?}"),
            });
        }
        words.push(Word::from(line));
    }
    if words.is_empty() {
        return Err(ParseError {
            line: 1,
            msg: "empty input".into(),
        });
    }
    Ok(WordSequence::new(words))
}

/// System file: `axiom: <word>` then one `<symbol> -> <word>` line per rule.
pub fn parse_system(text: &str) -> Result<D0LSystem, ParseError> {
    let mut axiom: Option<Word> = None;
    let mut productions: BTreeMap<Symbol, Word> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        if raw.is_empty() {
            continue;
        }
        if let Some(rest) = raw.strip_prefix("axiom:") {
            if axiom.is_some() {
                return Err(ParseError {
                    line: line_no,
                    msg: "duplicate axiom line".into(),
                });
            }
            let word = rest.strip_prefix(' ').unwrap_or(rest);
            axiom = Some(Word::from(word));
            continue;
        }
        let (lhs, rhs) = raw.split_once(" -> ").ok_or_else(|| ParseError {
            line: line_no,
            msg: "expected '<symbol> -> <word>'".into(),
        })?;
        let mut chars = lhs.chars();
        let (pred, extra) = (chars.next(), chars.next());
        let pred = match (pred, extra) {
            (Some(c), None) => Symbol(c),
            _ => {
                return Err(ParseError {
                    line: line_no,
                    msg: "predecessor must be a single symbol".into(),
                })
            }
        };
        if productions.insert(pred, Word::from(rhs)).is_some() {
            return Err(ParseError {
                line: line_no,
                msg: format!("duplicate production for '{pred}'"),
            });
        }
    }
    let axiom = axiom.ok_or(ParseError {
        line: 1,
        msg: "missing 'axiom:' line".into(),
    })?;
    Ok(D0LSystem::new(axiom, productions))
}

pub fn serialize_sequence(theta: &WordSequence) -> String {
    let mut out = String::new();
    for w in theta.words() {
        out.push_str(&w.to_string());
        out.push('\n');
    }
    out
}

pub fn serialize_system(sys: &D0LSystem) -> String {
    let mut out = format!("axiom: {}\n", sys.axiom());
    for (a, x) in sys.productions() {
        out.push_str(&format!("{a} -> {x}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::from(s)
    }

    #[test]
    fn slice_basic() {
        assert_eq!(w("abc").slice(1, 3).unwrap(), w("ab"));
        assert_eq!(w("abc").slice(2, 2).unwrap(), w(""));
        assert_eq!(w("abc").slice(2, 4).unwrap(), w("bc"));
    }

    #[test]
    fn slice_out_of_range() {
        assert!(matches!(
            w("abc").slice(0, 2),
            Err(LsysError::IndexOutOfRange { .. })
        ));
        assert!(w("abc").slice(3, 2).is_err());
        assert!(w("abc").slice(1, 5).is_err());
        assert!(w("").slice(1, 1).is_ok());
    }

    #[test]
    fn derive_step_examples() {
        let sys = D0LSystem::from_rules("a", &[('a', "ab"), ('b', "ab")]);
        assert_eq!(sys.derive_step(&w("ab")).unwrap(), w("abab"));

        let erasing = D0LSystem::from_rules("a", &[('a', "")]);
        assert_eq!(erasing.derive_step(&w("aaa")).unwrap(), w(""));

        let partial = D0LSystem::from_rules("b", &[('a', "b")]);
        assert_eq!(
            partial.derive_step(&w("ba")),
            Err(LsysError::MissingProduction(Symbol('b')))
        );
    }

    #[test]
    fn derive_trace_examples() {
        let sys = D0LSystem::from_rules("a", &[('a', "ab"), ('b', "ab")]);
        assert_eq!(
            sys.derive_trace(2).unwrap(),
            WordSequence::from_strs(&["a", "ab", "abab"])
        );

        let id = D0LSystem::from_rules("a", &[('a', "a")]);
        assert_eq!(
            id.derive_trace(3).unwrap(),
            WordSequence::from_strs(&["a", "a", "a", "a"])
        );

        let erasing = D0LSystem::from_rules("a", &[('a', "")]);
        assert_eq!(
            erasing.derive_trace(2).unwrap(),
            WordSequence::from_strs(&["a", "", ""])
        );
    }

    #[test]
    fn compatibility() {
        let sys = D0LSystem::from_rules("a", &[('a', "ab"), ('b', "ab")]);
        assert!(sys.is_compatible(&WordSequence::from_strs(&["a", "ab", "abab"])));

        let id = D0LSystem::from_rules("a", &[('a', "a")]);
        assert!(!id.is_compatible(&WordSequence::from_strs(&["a", "b"])));

        let partial = D0LSystem::from_rules("a", &[('a', "b")]);
        assert!(!partial.is_compatible(&WordSequence::from_strs(&["a", "b", "c"])));
    }

    #[test]
    fn parse_sequence_examples() {
        let theta = parse_sequence("a\nab\nabab").unwrap();
        assert_eq!(theta, WordSequence::from_strs(&["a", "ab", "abab"]));
        // Trailing newline is optional; an empty line is the empty word.
        assert_eq!(parse_sequence("a\nab\nabab\n").unwrap(), theta);
        let with_empty = parse_sequence("a\n\n").unwrap();
        assert_eq!(with_empty, WordSequence::from_strs(&["a", ""]));
    }

    #[test]
    fn parse_system_examples() {
        let sys = parse_system("axiom: a\na -> ab\nb -> ab\n").unwrap();
        assert_eq!(sys, D0LSystem::from_rules("a", &[('a', "ab"), ('b', "ab")]));

        let erasing = parse_system("axiom: a\na -> \n").unwrap();
        assert_eq!(erasing, D0LSystem::from_rules("a", &[('a', "")]));

        assert!(parse_system("a -> b\n").is_err());
        assert!(parse_system("axiom: a\nab -> b\n").is_err());
        assert!(parse_system("axiom: a\na -> b\na -> c\n").is_err());
    }

    #[test]
    fn system_round_trip() {
        let text = "axiom: ab\na -> b\nb -> \n";
        let sys = parse_system(text).unwrap();
        assert_eq!(serialize_system(&sys), text);
    }

    proptest! {
        #[test]
        fn slice_full_identity(s in "[a-d]{0,12}") {
            let word = Word::from(s.as_str());
            prop_assert_eq!(word.slice(1, word.len() + 1).unwrap(), word.clone());
        }

        #[test]
        fn slice_length(s in "[a-d]{0,12}", a in 0usize..1000, b in 0usize..1000) {
            let word = Word::from(s.as_str());
            // Map the raw draws onto valid 1-based end-exclusive bounds.
            let cap = word.len() + 1;
            let (mut i, mut j) = (1 + a % cap, 1 + b % cap);
            if i > j {
                std::mem::swap(&mut i, &mut j);
            }
            prop_assert_eq!(word.slice(i, j).unwrap().len(), j - i);
        }

        #[test]
        fn sequence_round_trip(words in proptest::collection::vec("[a-d]{0,6}", 1..5)) {
            let refs: Vec<&str> = words.iter().map(|s| s.as_str()).collect();
            let theta = WordSequence::from_strs(&refs);
            prop_assert_eq!(parse_sequence(&serialize_sequence(&theta)).unwrap(), theta);
        }
    }
}
