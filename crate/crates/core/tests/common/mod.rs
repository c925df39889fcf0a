//! Brute-force oracles shared by the integration suites.
#![allow(dead_code)]

use std::collections::HashSet;

use monster_core::freealg::{Polynomial, Word};
use monster_core::AlgebraConfig;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn words(m: usize, len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..m as u8).map(move |x| {
                    let mut v = w.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

pub fn column(w: &[u8], m: usize) -> usize {
    w.iter().fold(0, |acc, &x| acc * m + x as usize)
}

pub fn dense_rank(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let inv = |a: u64| (1..p).find(|b| a * b % p == 1).unwrap();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(r) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, r);
        let s = inv(rows[rank][c]);
        for x in rows[rank].iter_mut() {
            *x = *x * s % p;
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + p * p - f * y) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn oracle_dimension(relators: &[Polynomial], m: usize, p: u64, d: usize) -> u64 {
    let width = m.pow(d as u32);
    let mut rows = Vec::new();
    for r in relators {
        let e = r.min_degree().finite().unwrap();
        if e > d {
            continue;
        }
        for a in 0..=d - e {
            for u in words(m, a) {
                for v in words(m, d - e - a) {
                    let mut row = vec![0u64; width];
                    for (w, c) in r.terms() {
                        let full: Vec<u8> = u.iter().chain(w.letters()).chain(&v).copied().collect();
                        row[column(&full, m)] = c as u64;
                    }
                    rows.push(row);
                }
            }
        }
    }
    (width - dense_rank(rows, p)) as u64
}

pub fn random_relators(rng: &mut ChaCha8Rng, cfg: AlgebraConfig) -> Vec<Polynomial> {
    let m = cfg.vars;
    let count = rng.gen_range(1..=4);
    (0..count)
        .map(|_| loop {
            let degree = rng.gen_range(2..=4);
            let terms: Vec<(Word, u32)> = (0..rng.gen_range(1..=4))
                .map(|_| {
                    let w: Vec<u8> = (0..degree).map(|_| rng.gen_range(0..m as u8)).collect();
                    (Word(w), rng.gen_range(1..cfg.p()))
                })
                .collect();
            let r = Polynomial::from_terms(cfg, terms);
            if !r.is_zero() {
                break r;
            }
        })
        .collect()
}

/// Every element of `F<X>/(X)^d` is a polynomial supported on words shorter than `d`.
pub fn truncated_tuple_count(p: u32, m: usize, n: usize, d: usize) -> usize {
    let cfg = AlgebraConfig::new(p, m).unwrap();
    let support: Vec<Word> = (0..d).flat_map(|l| words(m, l)).map(Word).collect();
    let mut elements = vec![Polynomial::zero(cfg)];
    for w in &support {
        elements = elements
            .into_iter()
            .flat_map(|u| (0..p).map(move |c| (u.clone(), c)))
            .map(|(u, c)| u.add(&Polynomial::monomial(cfg, w.clone(), c)).unwrap())
            .collect();
    }
    let mut tuples: HashSet<Vec<Polynomial>> = elements.iter().map(|u| vec![u.clone()]).collect();
    for _ in 1..n {
        tuples =
            tuples.iter().flat_map(|t| elements.iter().map(move |u| [t.clone(), vec![u.clone()]].concat())).collect();
    }
    tuples.len()
}
