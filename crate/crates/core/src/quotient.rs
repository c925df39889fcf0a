//! Degree-truncated quotients `A / (X)^{D+1}` of `A = F<X> / (R)` for
//! homogeneous `R`.
//!
//! Because every relator is homogeneous the ideal `(R)` is graded, and its
//! degree-`d` slice is spanned by `R_d` together with `x * I_{d-1}` and
//! `I_{d-1} * x` for the variables `x`. Each slice is kept as a reduced
//! row-echelon basis over `Z_p`, with columns indexed by words of length
//! `d` read as base-`|X|` numbers (so column order is the lexicographic
//! part of the deg-lex monomial order).

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{AlgebraConfig, PrimeField};
use crate::freealg::{Polynomial, Word};
use crate::gs_series::DegreeTally;

/// Largest number of columns a slice may have.
pub const MAX_SLICE_WIDTH: u64 = 1 << 26;

const NONE: u32 = u32::MAX;

pub type SparseRow = Vec<(u32, u32)>;

/// A set of homogeneous relators of degree at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelatorSet {
    cfg: AlgebraConfig,
    relators: Vec<Polynomial>,
}

impl RelatorSet {
    pub fn empty(cfg: AlgebraConfig) -> Self {
        Self { cfg, relators: Vec::new() }
    }

    pub fn new(cfg: AlgebraConfig, relators: Vec<Polynomial>) -> Result<Self> {
        let mut s = Self::empty(cfg);
        for r in relators {
            s.push(r)?;
        }
        Ok(s)
    }

    pub fn push(&mut self, r: Polynomial) -> Result<()> {
        self.cfg.ensure_same(&r.config())?;
        validate_relator(&r)?;
        self.relators.push(r);
        Ok(())
    }

    pub fn config(&self) -> AlgebraConfig {
        self.cfg
    }

    pub fn relators(&self) -> &[Polynomial] {
        &self.relators
    }

    pub fn len(&self) -> usize {
        self.relators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relators.is_empty()
    }

    pub fn tally(&self) -> DegreeTally {
        let mut t = DegreeTally::new();
        for r in &self.relators {
            let d = r.min_degree().finite().expect("relators are nonzero");
            t.add(d, 1).expect("degree >= 2");
        }
        t
    }
}

pub(crate) fn validate_relator(r: &Polynomial) -> Result<usize> {
    let d = r.min_degree().finite().ok_or_else(|| Error::Domain("zero relator".into()))?;
    if !r.is_homogeneous() {
        return Err(Error::Domain(format!("relator {r} is not homogeneous")));
    }
    if d < 2 {
        return Err(Error::Domain(format!("relator {r} has degree {d} < 2")));
    }
    Ok(d)
}

pub(crate) fn width(m: usize, d: usize) -> Result<usize> {
    let mut w: u64 = 1;
    for _ in 0..d {
        w = w
            .checked_mul(m as u64)
            .filter(|&w| w <= MAX_SLICE_WIDTH)
            .ok_or_else(|| Error::Config(format!("{m}^{d} monomials exceed the slice limit {MAX_SLICE_WIDTH}")))?;
    }
    Ok(w as usize)
}

pub(crate) fn word_index(w: &Word, m: usize) -> u32 {
    w.letters().iter().fold(0u64, |acc, &l| acc * m as u64 + l as u64) as u32
}

pub(crate) fn index_word(mut idx: u32, m: usize, d: usize) -> Word {
    let mut letters = vec![0u8; d];
    for slot in letters.iter_mut().rev() {
        *slot = (idx % m as u32) as u8;
        idx /= m as u32;
    }
    Word(letters)
}

fn to_row(q: &Polynomial, m: usize) -> SparseRow {
    // Deg-lex on a homogeneous polynomial is the numeric order of indices.
    q.terms().map(|(w, c)| (word_index(w, m), c)).collect()
}

/// Incremental row-echelon form with a dense scratch vector.
struct Echelon {
    field: PrimeField,
    pivot_of: Vec<u32>,
    rows: Vec<SparseRow>,
    scratch: Vec<u32>,
    heap: BinaryHeap<Reverse<u32>>,
}

impl Echelon {
    fn new(field: PrimeField, width: usize) -> Self {
        Self { field, pivot_of: vec![NONE; width], rows: Vec::new(), scratch: vec![0; width], heap: BinaryHeap::new() }
    }

    /// Adds `row` to the span. Returns whether the rank grew.
    fn insert(&mut self, row: &[(u32, u32)]) -> bool {
        let f = self.field;
        for &(c, v) in row {
            let s = &mut self.scratch[c as usize];
            *s = f.add(*s, v);
            self.heap.push(Reverse(c));
        }
        while let Some(Reverse(c)) = self.heap.pop() {
            let coef = self.scratch[c as usize];
            if coef == 0 {
                continue;
            }
            let piv = self.pivot_of[c as usize];
            if piv != NONE {
                for &(j, v) in &self.rows[piv as usize] {
                    let s = &mut self.scratch[j as usize];
                    *s = f.sub(*s, f.mul(coef, v));
                    if j != c {
                        self.heap.push(Reverse(j));
                    }
                }
                continue;
            }
            // c leads the reduced row
            let mut cols: Vec<u32> = self.heap.drain().map(|Reverse(j)| j).collect();
            cols.push(c);
            cols.sort_unstable();
            cols.dedup();
            let inv = f.inv(coef);
            let mut out = Vec::with_capacity(cols.len());
            for j in cols {
                let s = std::mem::take(&mut self.scratch[j as usize]);
                if s != 0 {
                    out.push((j, f.mul(s, inv)));
                }
            }
            self.pivot_of[c as usize] = self.rows.len() as u32;
            self.rows.push(out);
            return true;
        }
        false
    }

    /// Back-substitutes to reduced row-echelon form, rows ordered by pivot.
    fn finish(mut self, degree: usize) -> Slice {
        let f = self.field;
        self.rows.sort_by_key(|r| r[0].0);
        for (i, r) in self.rows.iter().enumerate() {
            self.pivot_of[r[0].0 as usize] = i as u32;
        }
        // Rows with larger pivots are final before they are used.
        for i in (0..self.rows.len()).rev() {
            let needs = self.rows[i][1..].iter().any(|&(j, _)| self.pivot_of[j as usize] != NONE);
            if !needs {
                continue;
            }
            let row = std::mem::take(&mut self.rows[i]);
            let mut touched: Vec<u32> = Vec::new();
            for &(j, v) in &row {
                self.scratch[j as usize] = v;
                touched.push(j);
            }
            for &(j, _) in &row[1..] {
                let piv = self.pivot_of[j as usize];
                if piv == NONE {
                    continue;
                }
                let coef = self.scratch[j as usize];
                if coef == 0 {
                    continue;
                }
                for &(e, v) in &self.rows[piv as usize] {
                    let s = &mut self.scratch[e as usize];
                    if *s == 0 {
                        touched.push(e);
                    }
                    *s = f.sub(*s, f.mul(coef, v));
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let mut out = Vec::with_capacity(touched.len());
            for j in touched {
                let s = std::mem::take(&mut self.scratch[j as usize]);
                if s != 0 {
                    out.push((j, s));
                }
            }
            self.rows[i] = out;
        }
        Slice { degree, pivot_of: self.pivot_of, rows: self.rows }
    }
}

/// Reduced row-echelon basis of the degree-`d` slice of `(R)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slice {
    degree: usize,
    pivot_of: Vec<u32>,
    rows: Vec<SparseRow>,
}

impl Slice {
    fn empty(degree: usize, width: usize) -> Self {
        Self { degree, pivot_of: vec![NONE; width], rows: Vec::new() }
    }

    fn build(cfg: &AlgebraConfig, prev: Option<&Slice>, relators: &[Polynomial], degree: usize) -> Result<Self> {
        let m = cfg.vars;
        let w = width(m, degree)?;
        let has_prev = prev.is_some_and(|s| s.rank() > 0);
        if relators.is_empty() && !has_prev {
            return Ok(Slice::empty(degree, w));
        }
        let mut ech = Echelon::new(cfg.field, w);
        for r in relators {
            ech.insert(&to_row(r, m));
        }
        if let Some(prev) = prev {
            let shift = (w / m) as u32;
            let mut buf: SparseRow = Vec::new();
            for row in &prev.rows {
                for x in 0..m as u32 {
                    buf.clear();
                    buf.extend(row.iter().map(|&(j, v)| (x * shift + j, v)));
                    ech.insert(&buf);
                    buf.clear();
                    buf.extend(row.iter().map(|&(j, v)| (j * m as u32 + x, v)));
                    ech.insert(&buf);
                }
            }
        }
        Ok(ech.finish(degree))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn width(&self) -> usize {
        self.pivot_of.len()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Rows sorted by pivot column; each row's first entry is its pivot with
    /// coefficient 1, and no other entry sits in a pivot column.
    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn is_pivot(&self, col: u32) -> bool {
        self.pivot_of[col as usize] != NONE
    }

    /// The basis as polynomials.
    pub fn basis(&self, cfg: AlgebraConfig) -> Vec<Polynomial> {
        self.rows
            .iter()
            .map(|r| Polynomial::from_terms(cfg, r.iter().map(|&(j, v)| (index_word(j, cfg.vars, self.degree), v))))
            .collect()
    }

    /// Normal form of a dense coefficient vector: no support on pivot columns.
    pub fn reduce_dense(&self, field: &PrimeField, v: &mut [u32]) {
        for row in &self.rows {
            let c = v[row[0].0 as usize];
            if c == 0 {
                continue;
            }
            for &(j, r) in row {
                let s = &mut v[j as usize];
                *s = field.sub(*s, field.mul(c, r));
            }
        }
    }
}

/// An element of `A / (X)^{D+1}` in normal form: one dense coefficient
/// vector per degree `0..=D`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedElement {
    cfg: AlgebraConfig,
    components: Vec<Vec<u32>>,
}

impl TruncatedElement {
    pub fn depth(&self) -> usize {
        self.components.len() - 1
    }

    pub fn config(&self) -> AlgebraConfig {
        self.cfg
    }

    pub fn component(&self, d: usize) -> &[u32] {
        &self.components[d]
    }

    pub fn constant_term(&self) -> u32 {
        self.components[0][0]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.iter().all(|&v| v == 0))
    }

    pub fn to_polynomial(&self) -> Polynomial {
        let m = self.cfg.vars;
        let mut terms = Vec::new();
        for (d, comp) in self.components.iter().enumerate() {
            for (j, &v) in comp.iter().enumerate() {
                if v != 0 {
                    terms.push((index_word(j as u32, m, d), v));
                }
            }
        }
        Polynomial::from_terms(self.cfg, terms)
    }

    /// Lowest degree at which the two elements differ.
    pub fn first_difference(&self, other: &TruncatedElement) -> Option<usize> {
        self.components.iter().zip(&other.components).position(|(a, b)| a != b)
    }

    /// Drops components above `depth`. Slices below `depth` do not depend on
    /// deeper relators, so this stays in normal form.
    pub fn project(&self, depth: usize) -> TruncatedElement {
        assert!(depth <= self.depth());
        TruncatedElement { cfg: self.cfg, components: self.components[..=depth].to_vec() }
    }
}

/// The truncated quotient engine: `(R)` slice by slice up to a working depth.
///
/// Relators of degree above the depth are counted but play no role.
#[derive(Debug, Clone)]
pub struct Quotient {
    cfg: AlgebraConfig,
    depth: usize,
    by_degree: Vec<Vec<Polynomial>>,
    relator_count: usize,
    slices: Vec<Slice>,
}

impl Quotient {
    pub fn new(relators: &RelatorSet, depth: usize) -> Result<Self> {
        let cfg = relators.config();
        width(cfg.vars, depth)?;
        let mut q = Self { cfg, depth, by_degree: vec![Vec::new(); depth + 1], relator_count: 0, slices: Vec::new() };
        q.extend(relators.relators())?;
        Ok(q)
    }

    pub fn config(&self) -> AlgebraConfig {
        self.cfg
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Number of relators absorbed so far, including ones above the depth.
    pub fn relator_count(&self) -> usize {
        self.relator_count
    }

    /// Absorbs more relators, rebuilding only the slices they can affect.
    pub fn extend(&mut self, relators: &[Polynomial]) -> Result<()> {
        let mut lowest = self.slices.len();
        for r in relators {
            self.cfg.ensure_same(&r.config())?;
            let d = validate_relator(r)?;
            self.relator_count += 1;
            if d <= self.depth {
                self.by_degree[d].push(r.clone());
                lowest = lowest.min(d);
            }
        }
        self.slices.truncate(lowest);
        for d in self.slices.len()..=self.depth {
            let slice = Slice::build(&self.cfg, self.slices.last(), &self.by_degree[d], d)?;
            self.slices.push(slice);
        }
        Ok(())
    }

    pub fn slice(&self, d: usize) -> &Slice {
        &self.slices[d]
    }

    pub fn graded_dimension(&self, d: usize) -> u64 {
        let s = &self.slices[d];
        (s.width() - s.rank()) as u64
    }

    pub fn dimensions(&self) -> Vec<u64> {
        (0..=self.depth).map(|d| self.graded_dimension(d)).collect()
    }

    /// Relators of each degree `<= depth`.
    pub fn relators_at(&self, d: usize) -> &[Polynomial] {
        &self.by_degree[d]
    }

    pub fn zero(&self) -> TruncatedElement {
        TruncatedElement {
            cfg: self.cfg,
            components: (0..=self.depth).map(|d| vec![0; self.slices[d].width()]).collect(),
        }
    }

    pub fn one(&self) -> TruncatedElement {
        let mut e = self.zero();
        e.components[0][0] = 1;
        e
    }

    /// Normal form of `q` modulo `(R) + (X)^{D+1}`.
    pub fn reduce(&self, q: &Polynomial) -> Result<TruncatedElement> {
        self.cfg.ensure_same(&q.config())?;
        let m = self.cfg.vars;
        let mut e = self.zero();
        for (w, c) in q.terms() {
            if w.len() > self.depth {
                break;
            }
            e.components[w.len()][word_index(w, m) as usize] = c;
        }
        self.normalize(&mut e);
        Ok(e)
    }

    fn normalize(&self, e: &mut TruncatedElement) {
        for (d, comp) in e.components.iter_mut().enumerate() {
            self.slices[d].reduce_dense(&self.cfg.field, comp);
        }
    }

    /// Re-reduces an element; a no-op on normal forms.
    pub fn renormalize(&self, e: &TruncatedElement) -> TruncatedElement {
        let mut out = e.clone();
        self.normalize(&mut out);
        out
    }

    pub fn equal_mod(&self, q1: &Polynomial, q2: &Polynomial) -> Result<bool> {
        Ok(self.reduce(q1)? == self.reduce(q2)?)
    }

    fn check(&self, e: &TruncatedElement) {
        assert_eq!(e.cfg, self.cfg, "element from another algebra");
        assert_eq!(e.depth(), self.depth, "element from another depth");
    }

    pub fn add(&self, a: &TruncatedElement, b: &TruncatedElement) -> TruncatedElement {
        self.check(a);
        self.check(b);
        let f = self.cfg.field;
        let mut out = a.clone();
        for (oc, bc) in out.components.iter_mut().zip(&b.components) {
            for (o, &v) in oc.iter_mut().zip(bc) {
                *o = f.add(*o, v);
            }
        }
        out
    }

    pub fn neg(&self, a: &TruncatedElement) -> TruncatedElement {
        self.scale(a, self.cfg.field.neg(1))
    }

    pub fn sub(&self, a: &TruncatedElement, b: &TruncatedElement) -> TruncatedElement {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &TruncatedElement, c: u32) -> TruncatedElement {
        let f = self.cfg.field;
        let mut out = a.clone();
        for comp in &mut out.components {
            for v in comp.iter_mut() {
                *v = f.mul(*v, c);
            }
        }
        out
    }

    /// Product in the truncated quotient.
    pub fn mul(&self, a: &TruncatedElement, b: &TruncatedElement) -> TruncatedElement {
        self.check(a);
        self.check(b);
        let p = self.cfg.p();
        let mut raw: Vec<Vec<u32>> = (0..=self.depth).map(|d| vec![0; self.slices[d].width()]).collect();
        let nonzero: Vec<Vec<(u32, u32)>> = b
            .components
            .iter()
            .map(|c| c.iter().enumerate().filter(|(_, &v)| v != 0).map(|(j, &v)| (j as u32, v)).collect())
            .collect();
        for (i, ac) in a.components.iter().enumerate() {
            for (ia, &va) in ac.iter().enumerate() {
                if va == 0 {
                    continue;
                }
                for (j, bnz) in nonzero.iter().enumerate().take(self.depth - i + 1) {
                    let shift = self.slices[j].width() as u32;
                    let out = &mut raw[i + j];
                    let base = ia as u32 * shift;
                    for &(ib, vb) in bnz {
                        // at most depth + 1 contributions per cell, each < p^2
                        out[(base + ib) as usize] += va * vb;
                    }
                }
            }
        }
        for comp in &mut raw {
            for v in comp.iter_mut() {
                *v %= p;
            }
        }
        let mut e = TruncatedElement { cfg: self.cfg, components: raw };
        self.normalize(&mut e);
        e
    }

    /// Engine over the same relators at a smaller depth.
    pub fn projected(&self, depth: usize) -> Quotient {
        assert!(depth <= self.depth);
        Quotient {
            cfg: self.cfg,
            depth,
            by_degree: self.by_degree[..=depth].to_vec(),
            relator_count: self.relator_count,
            slices: self.slices[..=depth].to_vec(),
        }
    }

    /// One line per degree: `degree dimension rank relators`.
    pub fn dimension_report(&self) -> String {
        let mut s = String::new();
        for d in 0..=self.depth {
            s.push_str(&format!(
                "{} {} {} {}\n",
                d,
                self.graded_dimension(d),
                self.slices[d].rank(),
                self.by_degree[d].len()
            ));
        }
        s
    }
}

pub fn ideal_slice(relators: &RelatorSet, d: usize) -> Result<Slice> {
    let q = Quotient::new(relators, d)?;
    Ok(q.slices.into_iter().nth(d).expect("depth d built"))
}

pub fn graded_dimension(relators: &RelatorSet, d: usize) -> Result<u64> {
    Ok(Quotient::new(relators, d)?.graded_dimension(d))
}

pub fn reduce(q: &Polynomial, relators: &RelatorSet, depth: usize) -> Result<TruncatedElement> {
    Quotient::new(relators, depth)?.reduce(q)
}

pub fn equal_mod(q1: &Polynomial, q2: &Polynomial, relators: &RelatorSet, depth: usize) -> Result<bool> {
    Quotient::new(relators, depth)?.equal_mod(q1, q2)
}

/// `|(F<X>/(X)^d)^n| = p^(n * sum_{i<d} m^i)`.
pub fn truncated_tuple_bound(p: u32, m: u64, n: u64, d: u64) -> Result<BigUint> {
    if m < 1 || n < 1 || d < 1 {
        return Err(Error::Domain(format!("truncated_tuple_bound needs m, n, d >= 1 (got {m}, {n}, {d})")));
    }
    let mut monomials = BigUint::from(0u32);
    let mut power = BigUint::one();
    for _ in 0..d {
        monomials += &power;
        power *= m;
    }
    let exp = monomials * n;
    let exp: u32 = u32::try_from(&exp).map_err(|_| Error::Domain("bound exponent too large".into()))?;
    Ok(num_traits::pow(BigUint::from(p), exp as usize))
}

/// Checks `b_d >= m b_{d-1} - sum_{i=2}^{d} r_i b_{d-i}` for every listed degree.
/// Returns the first failing degree.
pub fn golod_shafarevich_violation(m: usize, dims: &[u64], tally: &DegreeTally) -> Option<usize> {
    for d in 1..dims.len() {
        let mut rhs = m as i128 * dims[d - 1] as i128;
        for i in 2..=d {
            rhs -= tally.get(i) as i128 * dims[d - i] as i128;
        }
        if (dims[d] as i128) < rhs {
            return Some(d);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg2() -> AlgebraConfig {
        AlgebraConfig::new(2, 2).unwrap()
    }

    fn mono(cfg: AlgebraConfig, letters: &[u8]) -> Polynomial {
        Polynomial::monomial(cfg, Word(letters.to_vec()), 1)
    }

    fn squares(cfg: AlgebraConfig) -> RelatorSet {
        RelatorSet::new(cfg, vec![mono(cfg, &[0, 0]), mono(cfg, &[1, 1])]).unwrap()
    }

    #[test]
    fn empty_relators() {
        let r = RelatorSet::empty(cfg2());
        assert_eq!(ideal_slice(&r, 3).unwrap().rank(), 0);
        assert_eq!(graded_dimension(&r, 4).unwrap(), 16);
    }

    #[test]
    fn squares_slice_degree_three() {
        let c = cfg2();
        let s = ideal_slice(&squares(c), 3).unwrap();
        assert_eq!(s.rank(), 6);
        let basis = s.basis(c);
        let expected: Vec<Polynomial> =
            [[0, 0, 0], [0, 0, 1], [0, 1, 1], [1, 0, 0], [1, 1, 0], [1, 1, 1]].iter().map(|w| mono(c, w)).collect();
        assert_eq!(basis, expected);
        assert_eq!(graded_dimension(&squares(c), 3).unwrap(), 2);
    }

    #[test]
    fn single_relator_rank() {
        let c = cfg2();
        let r = RelatorSet::new(c, vec![mono(c, &[0, 0])]).unwrap();
        assert_eq!(ideal_slice(&r, 2).unwrap().rank(), 1);
        assert_eq!(graded_dimension(&r, 0).unwrap(), 1);
    }

    #[test]
    fn reduce_examples() {
        let c = cfg2();
        let r = squares(c);
        let q = mono(c, &[0, 1, 0]).add(&mono(c, &[0, 0])).unwrap();
        assert_eq!(reduce(&q, &r, 3).unwrap().to_polynomial(), mono(c, &[0, 1, 0]));
        assert!(reduce(&mono(c, &[1, 1]), &r, 3).unwrap().is_zero());
        assert_eq!(reduce(&Polynomial::one(c), &r, 0).unwrap().to_polynomial(), Polynomial::one(c));
    }

    #[test]
    fn equal_mod_examples() {
        let c = cfg2();
        let x = Polynomial::var(c, 0);
        let y = Polynomial::var(c, 1);
        assert!(equal_mod(&x, &x, &squares(c), 4).unwrap());
        assert!(!equal_mod(&x, &y, &RelatorSet::empty(c), 1).unwrap());
        assert!(equal_mod(&mono(c, &[0, 0]), &Polynomial::zero(c), &squares(c), 2).unwrap());
    }

    #[test]
    fn rejects_bad_relators() {
        let c = cfg2();
        assert!(RelatorSet::new(c, vec![Polynomial::var(c, 0)]).is_err());
        let inhom = mono(c, &[0, 0]).add(&mono(c, &[0, 0, 1])).unwrap();
        assert!(RelatorSet::new(c, vec![inhom]).is_err());
        assert!(RelatorSet::new(c, vec![Polynomial::zero(c)]).is_err());
    }

    #[test]
    fn truncated_tuple_bound_examples() {
        assert_eq!(truncated_tuple_bound(2, 2, 1, 1).unwrap(), BigUint::from(2u32));
        assert_eq!(truncated_tuple_bound(2, 2, 1, 2).unwrap(), BigUint::from(8u32));
        assert_eq!(truncated_tuple_bound(3, 2, 2, 2).unwrap(), BigUint::from(729u32));
        assert!(truncated_tuple_bound(2, 2, 0, 2).is_err());
        // big values do not overflow
        // 1 + 4 + 16 + 64 + 256 + 1024 = 1365 monomials below degree 6
        assert_eq!(truncated_tuple_bound(7, 4, 3, 6).unwrap(), num_traits::pow(BigUint::from(7u32), 3 * 1365));
    }

    #[test]
    fn incremental_matches_fresh() {
        let c = AlgebraConfig::new(3, 2).unwrap();
        let r1 = mono(c, &[0, 1, 0]);
        let r2 = mono(c, &[1, 1]).add(&mono(c, &[0, 1]).scale(2)).unwrap();
        let mut inc = Quotient::new(&RelatorSet::new(c, vec![r1.clone()]).unwrap(), 5).unwrap();
        inc.extend(std::slice::from_ref(&r2)).unwrap();
        let fresh = Quotient::new(&RelatorSet::new(c, vec![r1, r2]).unwrap(), 5).unwrap();
        assert_eq!(inc.dimensions(), fresh.dimensions());
        for d in 0..=5 {
            assert_eq!(inc.slice(d), fresh.slice(d));
        }
    }

    #[test]
    fn truncated_product() {
        let c = cfg2();
        let q = Quotient::new(&squares(c), 3).unwrap();
        let x = q.reduce(&Polynomial::var(c, 0)).unwrap();
        let y = q.reduce(&Polynomial::var(c, 1)).unwrap();
        assert!(q.mul(&x, &x).is_zero());
        let xyx = q.mul(&q.mul(&x, &y), &x);
        assert_eq!(xyx.to_polynomial(), mono(c, &[0, 1, 0]));
        // degree 4 falls off the truncation
        assert!(q.mul(&xyx, &y).is_zero());
    }
}
