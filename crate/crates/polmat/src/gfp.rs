//! Arithmetic in the prime field `F_p` for word-sized primes `p < 2^62`.
//!
//! Elements are stored as canonical least nonnegative residues. Products go
//! through a widening `u128` multiply followed by one reduction, so every
//! operation is branch-free modular arithmetic with no platform-dependent
//! tricks.

use crate::error::{Error, Result};

/// Largest allowed modulus is below `2^62`.
pub const MAX_MODULUS: u64 = 1 << 62;

/// A prime field `F_p`, `2 <= p < 2^62`.
///
/// Construction checks primality with a deterministic Miller-Rabin test, so a
/// value of this type always denotes an actual field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..MAX_MODULUS).contains(&p) {
            return Err(Error::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// The element `v mod p`.
    pub fn element(&self, v: u64) -> FieldElement {
        FieldElement {
            value: v % self.p,
            field: *self,
        }
    }

    /// The element `v mod p` for signed input.
    pub fn element_from_i64(&self, v: i64) -> FieldElement {
        let r = v.rem_euclid(self.p as i64) as u64;
        FieldElement {
            value: r,
            field: *self,
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            value: 0,
            field: *self,
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            value: 1 % self.p,
            field: *self,
        }
    }

    // Raw operations on canonical residues. These carry the hot loops of the
    // polynomial and matrix layers, where the shared-field invariant is
    // maintained by construction.

    #[inline]
    pub(crate) fn add_raw(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn sub_raw(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: u64) -> u64 {
        debug_assert!(a < self.p);
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub(crate) fn pow_raw(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero residue, by Fermat: `a^(p-2)`.
    pub(crate) fn inv_raw(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow_raw(a, self.p - 2))
    }
}

/// An element of a prime field, bundled with its field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    field: PrimeField,
}

// Not the operator traits: these check the two fields match and report it,
// which `Add` and friends cannot.
#[allow(clippy::should_implement_trait)]
impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_one(&self) -> bool {
        self.value == 1 % self.field.p
    }

    fn same_field(&self, other: &FieldElement) -> Result<PrimeField> {
        if self.field != other.field {
            Err(Error::FieldMismatch)
        } else {
            Ok(self.field)
        }
    }

    pub fn add(self, rhs: FieldElement) -> Result<FieldElement> {
        let f = self.same_field(&rhs)?;
        Ok(FieldElement {
            value: f.add_raw(self.value, rhs.value),
            field: f,
        })
    }

    pub fn sub(self, rhs: FieldElement) -> Result<FieldElement> {
        let f = self.same_field(&rhs)?;
        Ok(FieldElement {
            value: f.sub_raw(self.value, rhs.value),
            field: f,
        })
    }

    pub fn mul(self, rhs: FieldElement) -> Result<FieldElement> {
        let f = self.same_field(&rhs)?;
        Ok(FieldElement {
            value: f.mul_raw(self.value, rhs.value),
            field: f,
        })
    }

    pub fn neg(self) -> FieldElement {
        FieldElement {
            value: self.field.neg_raw(self.value),
            field: self.field,
        }
    }

    pub fn inv(self) -> Result<FieldElement> {
        Ok(FieldElement {
            value: self.field.inv_raw(self.value)?,
            field: self.field,
        })
    }

    pub fn div(self, rhs: FieldElement) -> Result<FieldElement> {
        let f = self.same_field(&rhs)?;
        let inv = f.inv_raw(rhs.value)?;
        Ok(FieldElement {
            value: f.mul_raw(self.value, inv),
            field: f,
        })
    }

    pub fn pow(self, exp: u64) -> FieldElement {
        FieldElement {
            value: self.field.pow_raw(self.value, exp),
            field: self.field,
        }
    }
}

/// Deterministic Miller-Rabin, exact for all `n < 2^64`.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    // This witness set is known to be exact below 3.3 * 10^24.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
