//! Residue fields `Z_p` and the algebra configuration `(p, |X|)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest prime accepted. Field elements are written as single digits in
/// the output alphabet, so `p` must stay below 10.
pub const MAX_PRIME: u32 = 7;

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of `Z_p`, always kept in `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldElement(pub u32);

/// The prime field `Z_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Config(format!("p = {p} is not prime")));
        }
        if p > MAX_PRIME {
            return Err(Error::Config(format!("p = {p} does not fit a single output digit (p must be < 10)")));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn elem(&self, v: u64) -> FieldElement {
        FieldElement((v % self.p as u64) as u32)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        (a * b) % self.p
    }

    /// Multiplicative inverse by Fermat. `a` must be nonzero.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in Z_{}", self.p);
        let mut result = 1;
        let mut base = a % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }
}

/// Shared parameters of `F<X>`: the field `Z_p` and the number of variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraConfig {
    pub field: PrimeField,
    pub vars: usize,
}

impl AlgebraConfig {
    /// `|X|` must be at least 2; the foundry additionally requires 4.
    pub fn new(p: u32, vars: usize) -> Result<Self> {
        let field = PrimeField::new(p)?;
        if vars < 2 {
            return Err(Error::Config(format!("|X| = {vars}, need at least 2 variables")));
        }
        if vars > 26 {
            return Err(Error::Config(format!("|X| = {vars} exceeds the 26-letter alphabet")));
        }
        Ok(Self { field, vars })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.field.modulus()
    }

    pub(crate) fn ensure_same(&self, other: &AlgebraConfig) -> Result<()> {
        if self != other {
            return Err(Error::Config(format!(
                "mismatched algebras: (p={}, |X|={}) vs (p={}, |X|={})",
                self.p(),
                self.vars,
                other.p(),
                other.vars
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composite_and_large_primes() {
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(11).is_err());
        assert!(PrimeField::new(7).is_ok());
    }

    #[test]
    fn inverses() {
        for p in [2, 3, 5, 7] {
            let f = PrimeField::new(p).unwrap();
            for a in 1..p {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
        }
    }

    #[test]
    fn too_few_variables() {
        assert!(AlgebraConfig::new(3, 1).is_err());
        assert!(AlgebraConfig::new(3, 2).is_ok());
    }
}
