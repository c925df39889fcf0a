//! Exact evaluation of `1 - |X| t + sum_i r_i t^i` and the degree schedule.
//!
//! Everything here is exact rational arithmetic over big integers. The
//! negativity of the series at `t = 1/2` is a proof obligation of the
//! foundry, so no floating point is used except for display.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `r_i`: the number of relators of each degree. Degrees 0 and 1 never occur.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeTally {
    counts: BTreeMap<usize, u64>,
}

impl DegreeTally {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_counts(counts: impl IntoIterator<Item = (usize, u64)>) -> Result<Self> {
        let mut t = Self::new();
        for (d, c) in counts {
            t.add(d, c)?;
        }
        Ok(t)
    }

    pub fn add(&mut self, degree: usize, count: u64) -> Result<()> {
        if degree < 2 {
            return Err(Error::Domain(format!("relator of degree {degree} (< 2) in tally")));
        }
        if count > 0 {
            *self.counts.entry(degree).or_insert(0) += count;
        }
        Ok(())
    }

    pub fn get(&self, degree: usize) -> u64 {
        self.counts.get(&degree).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().map(|(&d, &c)| (d, c))
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.counts.keys().next_back().copied()
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn half() -> Rational {
    rational(1, 2)
}

/// `1 - m t + sum r_i t^i` for `0 < t < 1`.
pub fn series_value(m: usize, tally: &DegreeTally, t: &Rational, cutoff: usize) -> Result<Rational> {
    if !(t.is_positive() && *t < Rational::one()) {
        return Err(Error::Domain(format!("t = {t} is outside (0, 1)")));
    }
    if let Some(max) = tally.max_degree() {
        if cutoff < max {
            return Err(Error::Domain(format!("cutoff {cutoff} below tally degree {max}")));
        }
    }
    let mut value = Rational::one() - Rational::from_integer(BigInt::from(m)) * t;
    let mut power = Rational::one();
    let mut at = 0usize;
    for (d, c) in tally.iter() {
        // advance t^at to t^d
        power *= num_traits::pow(t.clone(), d - at);
        at = d;
        value += &power * Rational::from_integer(BigInt::from(c));
    }
    Ok(value)
}

/// Outcome of the negativity check at `t = 1/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Negativity {
    pub negative: bool,
    pub value: Rational,
}

pub fn negativity_check(m: usize, tally: &DegreeTally) -> Negativity {
    let cutoff = tally.max_degree().unwrap_or(0);
    let value = series_value(m, tally, &half(), cutoff).expect("t = 1/2 is in range");
    Negativity { negative: value.is_negative(), value }
}

/// Running value of the series at `t = 1/2`, updated one relator at a time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfSeries {
    value: Rational,
}

impl HalfSeries {
    pub fn new(m: usize) -> Self {
        Self { value: Rational::one() - rational(m as i64, 2) }
    }

    pub fn from_tally(m: usize, tally: &DegreeTally) -> Self {
        Self { value: negativity_check(m, tally).value }
    }

    pub fn add_relator(&mut self, degree: usize) {
        let den = BigInt::one() << degree;
        self.value += Rational::new(BigInt::one(), den);
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative()
    }
}

/// Decimal rendering of an exact rational, for reports only.
pub fn decimal(r: &Rational, digits: usize) -> String {
    let neg = r.is_negative();
    let a = r.abs();
    let int = a.to_integer();
    let mut frac = a - Rational::from_integer(int.clone());
    let mut s = format!("{}{}", if neg { "-" } else { "" }, int);
    if digits > 0 {
        s.push('.');
        for _ in 0..digits {
            frac *= Rational::from_integer(BigInt::from(10));
            let d = frac.to_integer();
            s.push_str(&d.to_string());
            frac -= Rational::from_integer(d);
        }
    }
    s
}

pub fn approx_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// The degree threshold `f(n, k)` applied by tracer `k` to tuples of arity `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Schedule {
    /// `f(n, k) = n + k + 2`.
    #[default]
    Standard,
    /// `f(n, k) = a n + b k + c`.
    Affine { a: u64, b: u64, c: u64 },
    /// `f(n, k) = c`.
    Constant(u64),
}

impl Schedule {
    pub fn eval(&self, n: usize, k: u64) -> u64 {
        let n = n as u64;
        match *self {
            Schedule::Standard => n + k + 2,
            Schedule::Affine { a, b, c } => a * n + b * k + c,
            Schedule::Constant(c) => c,
        }
    }

    /// Smallest value over `n >= 0, k >= 1`; every schedule here is monotone.
    pub fn minimum(&self) -> u64 {
        self.eval(0, 1)
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schedule::Standard => f.write_str("standard"),
            Schedule::Affine { a, b, c } => write!(f, "affine:{a},{b},{c}"),
            Schedule::Constant(c) => write!(f, "const:{c}"),
        }
    }
}

impl FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("bad schedule {s:?} (standard | affine:a,b,c | const:c)"));
        if s == "standard" {
            return Ok(Schedule::Standard);
        }
        if let Some(rest) = s.strip_prefix("const:") {
            return rest.parse().map(Schedule::Constant).map_err(|_| bad());
        }
        if let Some(rest) = s.strip_prefix("affine:") {
            let v: Vec<u64> =
                rest.split(',').map(|x| x.parse()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
            if let [a, b, c] = v[..] {
                return Ok(Schedule::Affine { a, b, c });
            }
        }
        Err(bad())
    }
}

pub fn schedule_f(n: usize, k: u64) -> u64 {
    Schedule::Standard.eval(n, k)
}

/// `alpha = |X| + 1`; the standard construction needs `|X| >= 4`.
pub fn default_alpha(m: usize) -> Result<usize> {
    if m < 4 {
        return Err(Error::Config(format!("|X| = {m}; the relator foundry needs at least 4 variables")));
    }
    Ok(m + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tally(v: &[(usize, u64)]) -> DegreeTally {
        DegreeTally::from_counts(v.iter().copied()).unwrap()
    }

    #[test]
    fn series_examples() {
        let h = half();
        assert_eq!(series_value(4, &tally(&[]), &h, 0).unwrap(), rational(-1, 1));
        assert_eq!(series_value(4, &tally(&[(5, 4)]), &h, 5).unwrap(), rational(-7, 8));
        assert_eq!(series_value(4, &tally(&[(2, 2)]), &h, 2).unwrap(), rational(-1, 2));
    }

    #[test]
    fn series_domain_errors() {
        let t = tally(&[(3, 1)]);
        assert!(series_value(4, &t, &rational(1, 1), 3).is_err());
        assert!(series_value(4, &t, &rational(0, 1), 3).is_err());
        assert!(series_value(4, &t, &rational(3, 2), 3).is_err());
        assert!(series_value(4, &t, &half(), 2).is_err());
        assert!(DegreeTally::new().add(1, 1).is_err());
    }

    #[test]
    fn negativity_examples() {
        let n = negativity_check(4, &tally(&[(5, 4)]));
        assert!(n.negative);
        assert_eq!(n.value, rational(-7, 8));
        let n = negativity_check(4, &tally(&[(2, 8)]));
        assert!(!n.negative);
        assert_eq!(n.value, rational(1, 1));
        let n = negativity_check(2, &tally(&[]));
        assert!(!n.negative);
        assert_eq!(n.value, rational(0, 1));
    }

    #[test]
    fn schedule_and_alpha() {
        assert_eq!(schedule_f(1, 1), 4);
        assert_eq!(schedule_f(0, 1), 3);
        assert_eq!(schedule_f(3, 7), 12);
        assert_eq!(default_alpha(4).unwrap(), 5);
        assert_eq!(default_alpha(5).unwrap(), 6);
        assert!(matches!(default_alpha(3), Err(Error::Config(_))));
    }

    #[test]
    fn schedule_text() {
        for s in [Schedule::Standard, Schedule::Constant(3), Schedule::Affine { a: 1, b: 2, c: 0 }] {
            assert_eq!(s.to_string().parse::<Schedule>().unwrap(), s);
        }
        assert!("affine:1,2".parse::<Schedule>().is_err());
    }

    #[test]
    fn running_value_matches_batch() {
        let mut h = HalfSeries::new(4);
        let mut t = DegreeTally::new();
        for d in [5, 5, 5, 5, 9, 12, 40, 9] {
            h.add_relator(d);
            t.add(d, 1).unwrap();
            assert_eq!(h.value(), &negativity_check(4, &t).value);
        }
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal(&rational(-7, 8), 4), "-0.8750");
        assert_eq!(decimal(&rational(1, 3), 3), "0.333");
    }

    proptest::proptest! {
        #[test]
        fn adding_relators_raises_the_value(
            base in proptest::collection::vec((2usize..30, 0u64..5), 0..6),
            extra_deg in 2usize..30,
            extra in 1u64..5,
        ) {
            let t = DegreeTally::from_counts(base.iter().copied()).unwrap();
            let mut bigger = t.clone();
            bigger.add(extra_deg, extra).unwrap();
            let cutoff = 30;
            let before = series_value(4, &t, &half(), cutoff).unwrap();
            let after = series_value(4, &bigger, &half(), cutoff).unwrap();
            proptest::prop_assert!(after > before);
        }
    }
}
