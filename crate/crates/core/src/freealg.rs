//! Exact arithmetic in the free associative algebra `F<X>` over `F = Z_p`.
//!
//! Monomials are [`Word`]s ordered degree-lexicographically (shorter first,
//! then lexicographic by variable index). A [`Polynomial`] is a finitely
//! supported map from words to nonzero residues; zero coefficients are never
//! stored, so structural equality is equality in `F<X>`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::AlgebraConfig;

/// A monomial: a finite sequence of variable indices. The empty word is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn var(index: usize) -> Self {
        Word(vec![index as u8])
    }

    pub fn power(index: usize, exp: usize) -> Self {
        Word(vec![index as u8; exp])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Minimal monomial degree; `Infinite` exactly for the zero polynomial.
///
/// The derived order puts `Infinite` above every finite degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Degree {
    Finite(usize),
    Infinite,
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::Infinite => None,
        }
    }

    /// `self >= threshold`, with `Infinite` above everything.
    pub fn at_least(self, threshold: usize) -> bool {
        self >= Degree::Finite(threshold)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Finite(d) => write!(f, "{d}"),
            Degree::Infinite => f.write_str("inf"),
        }
    }
}

/// Letters used to render variables in text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    letters: Vec<char>,
}

impl Alphabet {
    /// `{x, y}` for two variables, `{x, y, z}` for three, `{w, x, y, z}` for
    /// four, and `a, b, c, ...` beyond that.
    pub fn default_for(vars: usize) -> Self {
        let letters = match vars {
            0..=2 => "xy".chars().take(vars).collect(),
            3 => "xyz".chars().collect(),
            4 => "wxyz".chars().collect(),
            _ => ('a'..='z').take(vars).collect(),
        };
        Self { letters }
    }

    pub fn new(letters: &str) -> Result<Self> {
        let letters: Vec<char> = letters.chars().collect();
        for (i, c) in letters.iter().enumerate() {
            if !c.is_ascii_lowercase() {
                return Err(Error::Config(format!("variable letter {c:?} is not a-z")));
            }
            if letters[..i].contains(c) {
                return Err(Error::Config(format!("variable letter {c:?} repeated")));
            }
        }
        Ok(Self { letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letter(&self, index: usize) -> char {
        self.letters[index]
    }

    pub fn index_of(&self, c: char) -> Option<usize> {
        self.letters.iter().position(|&l| l == c)
    }

    pub fn as_string(&self) -> String {
        self.letters.iter().collect()
    }
}

/// An element of `F<X>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "PolyRepr", try_from = "PolyRepr")]
pub struct Polynomial {
    cfg: AlgebraConfig,
    terms: BTreeMap<Word, u32>,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    p: u32,
    vars: usize,
    terms: Vec<(Vec<u8>, u32)>,
}

impl From<Polynomial> for PolyRepr {
    fn from(q: Polynomial) -> Self {
        PolyRepr { p: q.cfg.p(), vars: q.cfg.vars, terms: q.terms.into_iter().map(|(w, c)| (w.0, c)).collect() }
    }
}

impl TryFrom<PolyRepr> for Polynomial {
    type Error = Error;

    fn try_from(r: PolyRepr) -> Result<Self> {
        let cfg = AlgebraConfig::new(r.p, r.vars)?;
        let mut q = Polynomial::zero(cfg);
        for (w, c) in r.terms {
            if w.iter().any(|&l| l as usize >= cfg.vars) {
                return Err(Error::Parse(format!("variable index out of range in {w:?}")));
            }
            q.add_term(Word(w), c);
        }
        Ok(q)
    }
}

impl Polynomial {
    pub fn zero(cfg: AlgebraConfig) -> Self {
        Self { cfg, terms: BTreeMap::new() }
    }

    pub fn one(cfg: AlgebraConfig) -> Self {
        Self::monomial(cfg, Word::unit(), 1)
    }

    pub fn constant(cfg: AlgebraConfig, c: u32) -> Self {
        Self::monomial(cfg, Word::unit(), c)
    }

    pub fn var(cfg: AlgebraConfig, index: usize) -> Self {
        assert!(index < cfg.vars, "variable {index} out of range");
        Self::monomial(cfg, Word::var(index), 1)
    }

    pub fn monomial(cfg: AlgebraConfig, word: Word, coeff: u32) -> Self {
        let mut q = Self::zero(cfg);
        q.add_term(word, coeff);
        q
    }

    pub fn from_terms(cfg: AlgebraConfig, terms: impl IntoIterator<Item = (Word, u32)>) -> Self {
        let mut q = Self::zero(cfg);
        for (w, c) in terms {
            q.add_term(w, c);
        }
        q
    }

    pub fn config(&self) -> AlgebraConfig {
        self.cfg
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending degree-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, u32)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn coeff(&self, w: &Word) -> u32 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    /// Adds `c * w` in place, keeping the map canonical.
    pub fn add_term(&mut self, w: Word, c: u32) {
        let f = self.cfg.field;
        let c = c % f.modulus();
        if c == 0 {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = f.add(*e.get(), c);
                if s == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.cfg.ensure_same(&other.cfg)?;
        let mut out = self.clone();
        for (w, &c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.cfg.ensure_same(&other.cfg)?;
        let f = self.cfg.field;
        let mut out = self.clone();
        for (w, &c) in &other.terms {
            out.add_term(w.clone(), f.neg(c));
        }
        Ok(out)
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(self.cfg.field.neg(1))
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let f = self.cfg.field;
        let c = c % f.modulus();
        if c == 0 {
            return Polynomial::zero(self.cfg);
        }
        Polynomial { cfg: self.cfg, terms: self.terms.iter().map(|(w, &v)| (w.clone(), f.mul(v, c))).collect() }
    }

    /// Bilinear extension of word concatenation.
    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.cfg.ensure_same(&other.cfg)?;
        let f = self.cfg.field;
        let mut out = Polynomial::zero(self.cfg);
        for (w1, &c1) in &self.terms {
            for (w2, &c2) in &other.terms {
                out.add_term(w1.concat(w2), f.mul(c1, c2));
            }
        }
        Ok(out)
    }

    /// The minimal length of a supported word.
    pub fn min_degree(&self) -> Degree {
        // Deg-lex order: the first key is among the shortest.
        match self.terms.keys().next() {
            Some(w) => Degree::Finite(w.len()),
            None => Degree::Infinite,
        }
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Word::len)
    }

    pub fn is_homogeneous(&self) -> bool {
        match (self.terms.keys().next(), self.terms.keys().next_back()) {
            (Some(a), Some(b)) => a.len() == b.len(),
            _ => true,
        }
    }

    /// Partition by word length, ascending; each part nonzero and homogeneous.
    pub fn homogeneous_components(&self) -> Vec<(usize, Polynomial)> {
        let mut out: Vec<(usize, Polynomial)> = Vec::new();
        for (w, &c) in &self.terms {
            match out.last_mut() {
                Some((d, part)) if *d == w.len() => {
                    part.terms.insert(w.clone(), c);
                }
                _ => {
                    let mut part = Polynomial::zero(self.cfg);
                    part.terms.insert(w.clone(), c);
                    out.push((w.len(), part));
                }
            }
        }
        out
    }

    /// Drops every term of length greater than `depth`.
    pub fn truncate(&self, depth: usize) -> Polynomial {
        Polynomial {
            cfg: self.cfg,
            terms: self.terms.iter().filter(|(w, _)| w.len() <= depth).map(|(w, &c)| (w.clone(), c)).collect(),
        }
    }

    /// Canonical text: terms ascending in deg-lex order joined by `+`, each a
    /// coefficient digit (omitted when it is 1 and the word is nonempty)
    /// followed by the word's letters. Zero renders as `0`.
    pub fn to_text(&self, alphabet: &Alphabet) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (w, &c)) in self.terms.iter().enumerate() {
            if i > 0 {
                s.push('+');
            }
            if c != 1 || w.is_empty() {
                s.push(char::from_digit(c, 10).expect("single digit coefficient"));
            }
            for &l in &w.0 {
                s.push(alphabet.letter(l as usize));
            }
        }
        s
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(&Alphabet::default_for(self.cfg.vars)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(p: u32, m: usize) -> AlgebraConfig {
        AlgebraConfig::new(p, m).unwrap()
    }

    fn w(s: &[u8]) -> Word {
        Word(s.to_vec())
    }

    #[test]
    fn additive_identity_and_inverses() {
        let c = cfg(3, 2);
        let x = Polynomial::var(c, 0);
        assert_eq!(x.add(&Polynomial::zero(c)).unwrap(), x);

        // (xy + 2) + (2xy + 1) = 0 over Z_3
        let a = Polynomial::from_terms(c, [(w(&[0, 1]), 1), (Word::unit(), 2)]);
        let b = Polynomial::from_terms(c, [(w(&[0, 1]), 2), (Word::unit(), 1)]);
        assert!(a.add(&b).unwrap().is_zero());
    }

    #[test]
    fn addition_mod_two() {
        let c = cfg(2, 2);
        let a = Polynomial::from_terms(c, [(w(&[0]), 1), (w(&[1]), 1)]);
        let b = Polynomial::from_terms(c, [(w(&[1]), 1), (w(&[0, 1]), 1)]);
        let expected = Polynomial::from_terms(c, [(w(&[0]), 1), (w(&[0, 1]), 1)]);
        assert_eq!(a.add(&b).unwrap(), expected);
    }

    #[test]
    fn multiplication_is_noncommutative() {
        let c = cfg(3, 2);
        let x = Polynomial::var(c, 0);
        let y = Polynomial::var(c, 1);
        let xy = x.mul(&y).unwrap();
        let yx = y.mul(&x).unwrap();
        assert_eq!(xy, Polynomial::monomial(c, w(&[0, 1]), 1));
        assert_eq!(yx, Polynomial::monomial(c, w(&[1, 0]), 1));
        assert_ne!(xy, yx);
        assert_eq!(Polynomial::one(c).mul(&xy).unwrap(), xy);
        // (2x)(2y) = 4xy = xy over Z_3
        assert_eq!(x.scale(2).mul(&y.scale(2)).unwrap(), xy);
    }

    #[test]
    fn mismatched_configs_rejected() {
        let a = Polynomial::var(cfg(3, 2), 0);
        let b = Polynomial::var(cfg(5, 2), 0);
        assert!(matches!(a.add(&b), Err(Error::Config(_))));
        assert!(matches!(a.mul(&b), Err(Error::Config(_))));
    }

    #[test]
    fn min_degree_examples() {
        let c = cfg(3, 2);
        let mut long = vec![0u8];
        long.extend(std::iter::repeat_n(1, 2018));
        long.push(0);
        // xy - yx + x y^2018 x
        let q = Polynomial::from_terms(c, [(w(&[0, 1]), 1), (w(&[1, 0]), 2), (Word(long.clone()), 1)]);
        assert_eq!(q.min_degree(), Degree::Finite(2));
        assert_eq!(Polynomial::zero(c).min_degree(), Degree::Infinite);
        let one_plus_x = Polynomial::from_terms(c, [(Word::unit(), 1), (w(&[0]), 1)]);
        assert_eq!(one_plus_x.min_degree(), Degree::Finite(0));

        let comps = q.homogeneous_components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].0, 2);
        assert_eq!(comps[0].1, Polynomial::from_terms(c, [(w(&[0, 1]), 1), (w(&[1, 0]), 2)]));
        assert_eq!(comps[1].0, 2020);
        assert_eq!(comps[1].1, Polynomial::monomial(c, Word(long), 1));
    }

    #[test]
    fn components_edge_cases() {
        let c = cfg(2, 2);
        assert!(Polynomial::zero(c).homogeneous_components().is_empty());
        let x5 = Polynomial::monomial(c, Word::power(0, 5), 1);
        assert_eq!(x5.homogeneous_components(), vec![(5, x5.clone())]);
    }

    #[test]
    fn infinite_degree_dominates() {
        assert!(Degree::Infinite.at_least(1_000_000));
        assert!(Degree::Finite(4).at_least(4));
        assert!(!Degree::Finite(3).at_least(4));
    }

    #[test]
    fn canonical_text() {
        let c = cfg(3, 2);
        let a = Alphabet::default_for(2);
        let q = Polynomial::from_terms(c, [(w(&[0, 1, 1]), 2), (Word::unit(), 2), (w(&[1]), 1)]);
        assert_eq!(q.to_text(&a), "2+y+2xyy");
        assert_eq!(Polynomial::one(c).to_text(&a), "1");
        assert_eq!(Polynomial::zero(c).to_text(&a), "0");
        assert_eq!(Alphabet::default_for(4).as_string(), "wxyz");
        assert_eq!(Alphabet::default_for(3).as_string(), "xyz");
    }

    #[test]
    fn serde_round_trip() {
        let c = cfg(5, 3);
        let q = Polynomial::from_terms(c, [(w(&[2, 1]), 4), (w(&[0]), 3)]);
        let s = serde_json::to_string(&q).unwrap();
        let back: Polynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
    }
}
