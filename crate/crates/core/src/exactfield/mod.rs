//! Exact linear algebra over a prime field GF(p).
//!
//! Everything here is dense and exact. Subspaces are kept in a canonical
//! echelon form so that two subspaces are equal as sets exactly when their
//! stored bases are equal, which the filtration code relies on when it
//! compares spaces computed along different routes.

mod matrix;
mod subspace;

pub use matrix::Matrix;
pub use subspace::{complement_within, preimage, pushforward, Subspace};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised by the linear algebra layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{0} is not a prime modulus")]
    NotPrime(u32),
    #[error("field mismatch: GF({0}) vs GF({1})")]
    FieldMismatch(u32, u32),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ragged rows: row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("entry {value} is not reduced modulo {p}")]
    EntryOutOfRange { value: u64, p: u32 },
    #[error("matrix is singular")]
    Singular,
    #[error("complement precondition violated: {0}")]
    ComplementPrecondition(&'static str),
}

/// The prime field GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct FieldSpec {
    p: u32,
}

impl FieldSpec {
    pub const GF2: FieldSpec = FieldSpec { p: 2 };

    pub fn new(p: u32) -> Result<Self, LinalgError> {
        if is_prime(p) {
            Ok(FieldSpec { p })
        } else {
            Err(LinalgError::NotPrime(p))
        }
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in GF({})", self.p);
        // Fermat: a^(p-2)
        self.pow(a, self.p as u64 - 2)
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Reduces an arbitrary signed integer into `[0, p)`.
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec::GF2
    }
}

impl TryFrom<u32> for FieldSpec {
    type Error = LinalgError;
    fn try_from(p: u32) -> Result<Self, Self::Error> {
        FieldSpec::new(p)
    }
}

impl From<FieldSpec> for u32 {
    fn from(f: FieldSpec) -> u32 {
        f.p
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let p = p as u64;
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
