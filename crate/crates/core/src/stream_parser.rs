//! Incremental parsing of an output-symbol stream into tuples of polynomials.
//!
//! Adjacent digits and letters form one term: the product of the digits
//! (scalars are central) times the word of letters in emission order. `+`
//! closes a term, `,` closes an element and `;` closes a tuple. Empty terms
//! and empty elements are dropped, so redundant `+` and `,` are harmless.
//! Every `;` ends exactly one tuple, possibly empty. Feeding never fails.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::AlgebraConfig;
use crate::freealg::{Alphabet, Polynomial, Word};
use crate::machine::{text_to_symbols, OutputSymbol};

/// A tuple completed by a semicolon. `ordinal` counts from 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleEvent {
    pub ordinal: u64,
    pub tuple: Vec<Polynomial>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseState {
    cfg: AlgebraConfig,
    scalar: u32,
    word: Vec<u8>,
    term_started: bool,
    element: Polynomial,
    element_started: bool,
    tuple: Vec<Polynomial>,
    completed: u64,
}

/// Read-only view of the parser's accumulators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pending {
    /// The open term as `scalar * word`, if any symbol of it has been seen.
    pub term: Option<Polynomial>,
    /// Closed terms of the open element.
    pub element: Option<Polynomial>,
    pub tuple: Vec<Polynomial>,
    pub completed: u64,
}

impl Pending {
    pub fn is_empty(&self) -> bool {
        self.term.is_none() && self.element.is_none() && self.tuple.is_empty()
    }

    /// The open element including its open term.
    pub fn open_element(&self) -> Option<Polynomial> {
        match (&self.element, &self.term) {
            (None, None) => None,
            (Some(e), None) => Some(e.clone()),
            (None, Some(t)) => Some(t.clone()),
            (Some(e), Some(t)) => Some(e.add(t).expect("same config")),
        }
    }
}

impl ParseState {
    pub fn new(cfg: AlgebraConfig) -> Self {
        Self {
            cfg,
            scalar: 1,
            word: Vec::new(),
            term_started: false,
            element: Polynomial::zero(cfg),
            element_started: false,
            tuple: Vec::new(),
            completed: 0,
        }
    }

    pub fn completed(&self) -> u64 {
        self.completed
    }

    fn close_term(&mut self) {
        if self.term_started {
            let word = Word(std::mem::take(&mut self.word));
            self.element.add_term(word, self.scalar);
            self.element_started = true;
            self.scalar = 1;
            self.term_started = false;
        }
    }

    fn close_element(&mut self) {
        self.close_term();
        if self.element_started {
            let e = std::mem::replace(&mut self.element, Polynomial::zero(self.cfg));
            self.tuple.push(e);
            self.element_started = false;
        }
    }

    pub fn feed(&mut self, sym: OutputSymbol) -> Option<TupleEvent> {
        match sym {
            OutputSymbol::Digit(d) => {
                self.scalar = self.cfg.field.mul(self.scalar, d as u32 % self.cfg.p());
                self.term_started = true;
            }
            OutputSymbol::Var(v) => {
                self.word.push(v);
                self.term_started = true;
            }
            OutputSymbol::Plus => self.close_term(),
            OutputSymbol::Comma => self.close_element(),
            OutputSymbol::Semicolon => {
                self.close_element();
                self.completed += 1;
                return Some(TupleEvent { ordinal: self.completed, tuple: std::mem::take(&mut self.tuple) });
            }
        }
        None
    }

    pub fn feed_all(&mut self, symbols: &[OutputSymbol]) -> Vec<TupleEvent> {
        symbols.iter().filter_map(|&s| self.feed(s)).collect()
    }

    pub fn pending(&self) -> Pending {
        Pending {
            term: self.term_started.then(|| Polynomial::monomial(self.cfg, Word(self.word.clone()), self.scalar)),
            element: self.element_started.then(|| self.element.clone()),
            tuple: self.tuple.clone(),
            completed: self.completed,
        }
    }
}

/// Parses surface text (whitespace ignored) as one stream.
pub fn parse_text(text: &str, cfg: AlgebraConfig, alphabet: &Alphabet) -> Result<(Vec<TupleEvent>, ParseState)> {
    let symbols = text_to_symbols(text, &cfg, alphabet)?;
    let mut state = ParseState::new(cfg);
    let events = state.feed_all(&symbols);
    Ok((events, state))
}

/// Parses one element written in canonical text. `"0"` is the zero polynomial.
pub fn parse_polynomial(text: &str, cfg: AlgebraConfig, alphabet: &Alphabet) -> Result<Polynomial> {
    let mut symbols = text_to_symbols(text, &cfg, alphabet)?;
    symbols.retain(|s| !matches!(s, OutputSymbol::Comma | OutputSymbol::Semicolon));
    symbols.push(OutputSymbol::Semicolon);
    let mut state = ParseState::new(cfg);
    let event = state.feed_all(&symbols).pop().expect("one semicolon fed");
    Ok(event.tuple.into_iter().next().unwrap_or_else(|| Polynomial::zero(cfg)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (AlgebraConfig, Alphabet) {
        (AlgebraConfig::new(3, 2).unwrap(), Alphabet::default_for(2))
    }

    fn poly(text: &str) -> Polynomial {
        let (c, a) = setup();
        parse_polynomial(text, c, &a).unwrap()
    }

    #[test]
    fn worked_example_first_tuple() {
        let (c, a) = setup();
        let (events, _) = parse_text("++xy2y+,,,221++1++++0xy1yyy++,,;", c, &a).unwrap();
        assert_eq!(events.len(), 1);
        assert_eq!(events[0].tuple, vec![poly("2xyy"), poly("2")]);
    }

    #[test]
    fn lone_semicolon_is_empty_tuple() {
        let (c, _) = setup();
        let mut s = ParseState::new(c);
        let ev = s.feed(OutputSymbol::Semicolon).unwrap();
        assert!(ev.tuple.is_empty());
        assert_eq!(ev.ordinal, 1);
    }

    #[test]
    fn trailing_incomplete_element() {
        let (c, a) = setup();
        let (events, state) = parse_text("xxx2112+++yxyxy22+++", c, &a).unwrap();
        assert!(events.is_empty());
        let pending = state.pending();
        assert_eq!(pending.open_element(), Some(poly("xxx+yxyxy")));
        assert!(pending.tuple.is_empty());
    }

    #[test]
    fn pending_views() {
        let (c, a) = setup();
        assert!(ParseState::new(c).pending().is_empty());
        let (_, state) = parse_text("x", c, &a).unwrap();
        let p = state.pending();
        assert_eq!(p.term, Some(poly("x")));
        assert_eq!(p.element, None);
    }

    #[test]
    fn zero_valued_element_is_kept() {
        let (c, a) = setup();
        let (events, _) = parse_text("x+2x,y;", c, &a).unwrap();
        assert_eq!(events[0].tuple, vec![Polynomial::zero(c), poly("y")]);
    }

    #[test]
    fn scalars_are_central() {
        assert_eq!(poly("2xy"), poly("x2y"));
        assert_eq!(poly("x2y"), poly("xy2"));
        assert_eq!(poly("22xy"), poly("xy"));
    }

    #[test]
    fn rejects_foreign_characters() {
        let (c, a) = setup();
        assert!(parse_text("x*y;", c, &a).is_err());
        assert!(parse_text("5x;", c, &a).is_err());
    }
}
