//! The matrix group `G = [[H, A], [0, 1]]` in its finite quotients.
//!
//! An element is a pair `(h, a)` standing for the matrix `[[h, a], [0, 1]]`
//! with `h` in the subgroup `H` generated by the units `1 + x`. Both entries
//! live in `A / (X)^{D+1}`, so every computation is exact in that finite
//! quotient; the product is `(h, a)(h', a') = (h h', a + h a')`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freealg::{Alphabet, Polynomial};
use crate::quotient::{Quotient, RelatorSet, TruncatedElement};

/// A generator of `G`: `(1 + x_i, 0)` or the translation `(1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    Unit(usize),
    Translation,
}

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub generator: Generator,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: Generator) -> Self {
        Self { generator, inverse: false }
    }

    pub fn inv(generator: Generator) -> Self {
        Self { generator, inverse: true }
    }
}

/// Parses words like `x t W^-1 y`: a variable letter is `(1 + x, 0)`, `t` is
/// `(1, 1)`, and a `^-1` suffix inverts.
pub fn parse_word(text: &str, alphabet: &Alphabet) -> Result<Vec<Letter>> {
    text.split_whitespace()
        .map(|tok| {
            let (base, inverse) = match tok.strip_suffix("^-1") {
                Some(b) => (b, true),
                None => (tok, false),
            };
            let mut chars = base.chars();
            let (Some(c), None) = (chars.next(), chars.next()) else {
                return Err(Error::Parse(format!("bad generator token {tok:?}")));
            };
            let generator = if c == 't' {
                Generator::Translation
            } else {
                Generator::Unit(alphabet.index_of(c).ok_or_else(|| Error::Parse(format!("unknown generator {c:?}")))?)
            };
            Ok(Letter { generator, inverse })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    h: TruncatedElement,
    a: TruncatedElement,
}

impl GroupElement {
    pub fn h(&self) -> &TruncatedElement {
        &self.h
    }

    pub fn a(&self) -> &TruncatedElement {
        &self.a
    }

    pub fn in_normal_part(&self) -> bool {
        self.h.constant_term() == 1 && (1..=self.h.depth()).all(|d| self.h.component(d).iter().all(|&v| v == 0))
    }
}

/// A ledger snapshot at a fixed depth; all group arithmetic goes through it.
#[derive(Debug, Clone)]
pub struct GroupContext {
    quotient: Quotient,
}

impl GroupContext {
    pub fn new(relators: &RelatorSet, depth: usize) -> Result<Self> {
        Ok(Self { quotient: Quotient::new(relators, depth)? })
    }

    pub fn from_quotient(quotient: Quotient) -> Self {
        Self { quotient }
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    pub fn depth(&self) -> usize {
        self.quotient.depth()
    }

    /// `(ledger length, depth)`.
    pub fn id(&self) -> (usize, usize) {
        (self.quotient.relator_count(), self.quotient.depth())
    }

    /// The same ledger at a smaller depth.
    pub fn projected(&self, depth: usize) -> GroupContext {
        GroupContext { quotient: self.quotient.projected(depth) }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { h: self.quotient.one(), a: self.quotient.zero() }
    }

    /// The `|X| + 1` generators: `(1 + x_i, 0)` then `(1, 1)`.
    pub fn generators(&self) -> Vec<GroupElement> {
        let m = self.quotient.config().vars;
        (0..m).map(Generator::Unit).chain(std::iter::once(Generator::Translation)).map(|g| self.generator(g)).collect()
    }

    pub fn generator(&self, g: Generator) -> GroupElement {
        let q = &self.quotient;
        let cfg = q.config();
        match g {
            Generator::Unit(i) => {
                assert!(i < cfg.vars, "generator index {i} out of range");
                let h = Polynomial::one(cfg).add(&Polynomial::var(cfg, i)).expect("same algebra");
                GroupElement { h: q.reduce(&h).expect("same algebra"), a: q.zero() }
            }
            Generator::Translation => GroupElement { h: q.one(), a: q.one() },
        }
    }

    pub fn letter(&self, l: Letter) -> GroupElement {
        let g = self.generator(l.generator);
        if l.inverse {
            self.inv(&g)
        } else {
            g
        }
    }

    /// Product of a word in the generators and their inverses.
    pub fn from_word(&self, word: &[Letter]) -> GroupElement {
        word.iter().fold(self.identity(), |acc, &l| self.mul(&acc, &self.letter(l)))
    }

    /// `(1, a)`, an element of the normal subgroup.
    pub fn normal(&self, a: &Polynomial) -> Result<GroupElement> {
        Ok(GroupElement { h: self.quotient.one(), a: self.quotient.reduce(a)? })
    }

    fn normal_from(&self, a: TruncatedElement) -> GroupElement {
        GroupElement { h: self.quotient.one(), a: self.quotient.renormalize(&a) }
    }

    /// `(h, a)(h', a') = (h h', a + h a')`.
    pub fn mul(&self, g: &GroupElement, g2: &GroupElement) -> GroupElement {
        let q = &self.quotient;
        GroupElement { h: q.mul(&g.h, &g2.h), a: q.add(&g.a, &q.mul(&g.h, &g2.a)) }
    }

    /// Inverse of `h` as the truncated series `sum_{i <= D} (1 - h)^i`.
    pub fn inv_h(&self, h: &TruncatedElement) -> TruncatedElement {
        let q = &self.quotient;
        let u = q.sub(&q.one(), h);
        debug_assert_eq!(u.constant_term(), 0, "h must have constant term 1");
        let mut acc = q.one();
        let mut term = q.one();
        for _ in 0..q.depth() {
            term = q.mul(&term, &u);
            acc = q.add(&acc, &term);
        }
        acc
    }

    /// `(h, a)^{-1} = (h^{-1}, -h^{-1} a)`.
    pub fn inv(&self, g: &GroupElement) -> GroupElement {
        let q = &self.quotient;
        let hi = self.inv_h(&g.h);
        let a = q.neg(&q.mul(&hi, &g.a));
        GroupElement { h: hi, a }
    }

    pub fn pow(&self, g: &GroupElement, mut e: u64) -> GroupElement {
        let mut base = g.clone();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self, g: &GroupElement) -> bool {
        *g == self.identity()
    }

    /// Order of `(1, a)`: 1 when `a = 0`, otherwise `p`, confirmed by
    /// repeated multiplication.
    pub fn normal_part_order(&self, g: &GroupElement) -> Result<u64> {
        if !g.in_normal_part() {
            return Err(Error::Domain("element is not of the form (1, a)".into()));
        }
        let p = self.quotient.config().p() as u64;
        let mut acc = g.clone();
        for j in 1..=p {
            if self.is_identity(&acc) {
                return Ok(j);
            }
            acc = self.mul(&acc, g);
        }
        Err(Error::Invariant(format!("(1, a)^{p} is not the identity")))
    }

    /// Conjugates `(1, a)` by `g`: `g (1, a) g^{-1}`.
    pub fn conjugate(&self, g: &GroupElement, n: &GroupElement) -> GroupElement {
        self.mul(&self.mul(g, n), &self.inv(g))
    }

    /// `(1, h a)` for `g = (h, b)`: the image of `(1, a)` under conjugation.
    pub fn act(&self, g: &GroupElement, a: &TruncatedElement) -> GroupElement {
        self.normal_from(self.quotient.mul(&g.h, a))
    }

    /// Reduction to a smaller-depth context over the same ledger.
    pub fn project(&self, g: &GroupElement, depth: usize) -> GroupElement {
        GroupElement { h: g.h.project(depth), a: g.a.project(depth) }
    }

    /// `(h, a)` as canonical polynomial texts with the context id.
    pub fn render(&self, g: &GroupElement, alphabet: &Alphabet) -> String {
        let (len, depth) = self.id();
        format!(
            "({}, {}) ledger={} depth={}",
            g.h.to_polynomial().to_text(alphabet),
            g.a.to_polynomial().to_text(alphabet),
            len,
            depth
        )
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.h.to_polynomial(), self.a.to_polynomial())
    }
}

/// Smallest depth `D <= max_depth` at which `q1` and `q2` differ modulo
/// `(R) + (X)^{D+1}`. A returned depth proves `q1 != q2` in `A`; `None`
/// only means no finite quotient up to `max_depth` separates them.
pub fn separating_depth(
    q1: &Polynomial,
    q2: &Polynomial,
    relators: &RelatorSet,
    max_depth: usize,
) -> Result<Option<usize>> {
    let q = Quotient::new(relators, max_depth)?;
    separating_depth_in(&q, q1, q2)
}

pub fn separating_depth_in(q: &Quotient, q1: &Polynomial, q2: &Polynomial) -> Result<Option<usize>> {
    Ok(q.reduce(q1)?.first_difference(&q.reduce(q2)?))
}

/// Separation of two group elements: the least depth where either entry differs.
pub fn separating_depth_elements(g1: &GroupElement, g2: &GroupElement) -> Option<usize> {
    match (g1.h.first_difference(&g2.h), g1.a.first_difference(&g2.a)) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    }
}
