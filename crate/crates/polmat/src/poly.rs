//! Dense univariate polynomials over a prime field, ascending coefficients.

use std::fmt;

use crate::error::{Error, Result};
use crate::gfp::{FieldElement, PrimeField};

/// Coefficient count below which multiplication stays schoolbook.
const KARATSUBA_THRESHOLD: usize = 32;

/// Degree of a polynomial, with a distinguished value for the zero
/// polynomial so that maxima over degrees behave as expected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInf,
    Fin(i64),
}

impl Degree {
    /// Add a constant; `NegInf` absorbs.
    pub fn add_const(self, c: i64) -> Degree {
        match self {
            Degree::NegInf => Degree::NegInf,
            Degree::Fin(d) => Degree::Fin(d + c),
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Degree::Fin(_))
    }

    /// The finite value, if any.
    pub fn finite(self) -> Option<i64> {
        match self {
            Degree::NegInf => None,
            Degree::Fin(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Fin(d) => write!(f, "{d}"),
        }
    }
}

/// A dense univariate polynomial over `F_p`.
///
/// Invariant: the coefficient vector is normalized, i.e. empty (for the zero
/// polynomial) or with a nonzero last entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<u64>,
    field: PrimeField,
}

impl Poly {
    pub fn zero(field: PrimeField) -> Poly {
        Poly {
            coeffs: Vec::new(),
            field,
        }
    }

    pub fn one(field: PrimeField) -> Poly {
        Poly::constant(field, 1)
    }

    /// The constant polynomial `c mod p`.
    pub fn constant(field: PrimeField, c: u64) -> Poly {
        let mut p = Poly {
            coeffs: vec![c % field.modulus()],
            field,
        };
        p.normalize();
        p
    }

    /// `c * x^deg`.
    pub fn monomial(field: PrimeField, c: u64, deg: usize) -> Poly {
        let c = c % field.modulus();
        if c == 0 {
            return Poly::zero(field);
        }
        let mut coeffs = vec![0; deg + 1];
        coeffs[deg] = c;
        Poly { coeffs, field }
    }

    /// Build from ascending coefficients; values are reduced mod `p`.
    pub fn from_coeffs(field: PrimeField, coeffs: &[u64]) -> Poly {
        let p = field.modulus();
        let mut poly = Poly {
            coeffs: coeffs.iter().map(|&c| c % p).collect(),
            field,
        };
        poly.normalize();
        poly
    }

    /// Build from ascending signed coefficients; values are reduced mod `p`.
    pub fn from_signed(field: PrimeField, coeffs: &[i64]) -> Poly {
        let mut poly = Poly {
            coeffs: coeffs
                .iter()
                .map(|&c| field.element_from_i64(c).value())
                .collect(),
            field,
        };
        poly.normalize();
        poly
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        if self.coeffs.is_empty() {
            Degree::NegInf
        } else {
            Degree::Fin(self.coeffs.len() as i64 - 1)
        }
    }

    /// Degree as an index, `None` for the zero polynomial.
    pub fn deg_usize(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^i` (zero beyond the stored range).
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.field.element(self.coeff_u64(i))
    }

    #[inline]
    pub(crate) fn coeff_u64(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Option<FieldElement> {
        self.coeffs.last().map(|&c| self.field.element(c))
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&(1 % self.field.modulus()))
    }

    /// Evaluate at a point by Horner's rule.
    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let f = self.field;
        let xv = x.value() % f.modulus();
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = f.add_raw(f.mul_raw(acc, xv), c);
        }
        f.element(acc)
    }

    fn same_field(&self, other: &Poly) -> Result<()> {
        if self.field != other.field {
            Err(Error::FieldMismatch)
        } else {
            Ok(())
        }
    }

    pub fn add(&self, rhs: &Poly) -> Result<Poly> {
        self.same_field(rhs)?;
        Ok(self.add_raw(rhs))
    }

    pub fn sub(&self, rhs: &Poly) -> Result<Poly> {
        self.same_field(rhs)?;
        Ok(self.sub_raw(rhs))
    }

    pub fn mul(&self, rhs: &Poly) -> Result<Poly> {
        self.same_field(rhs)?;
        Ok(self.mul_raw(rhs))
    }

    pub fn neg(&self) -> Poly {
        let f = self.field;
        Poly {
            coeffs: self.coeffs.iter().map(|&c| f.neg_raw(c)).collect(),
            field: f,
        }
    }

    pub(crate) fn add_raw(&self, rhs: &Poly) -> Poly {
        let f = self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(f.add_raw(self.coeff_u64(i), rhs.coeff_u64(i)));
        }
        let mut out = Poly { coeffs, field: f };
        out.normalize();
        out
    }

    pub(crate) fn sub_raw(&self, rhs: &Poly) -> Poly {
        let f = self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(f.sub_raw(self.coeff_u64(i), rhs.coeff_u64(i)));
        }
        let mut out = Poly { coeffs, field: f };
        out.normalize();
        out
    }

    pub(crate) fn mul_raw(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.field);
        }
        let coeffs = mul_dispatch(self.field, &self.coeffs, &rhs.coeffs);
        let mut out = Poly {
            coeffs,
            field: self.field,
        };
        out.normalize();
        out
    }

    /// Multiply by the scalar `c`.
    pub(crate) fn scale_raw(&self, c: u64) -> Poly {
        let f = self.field;
        if c == 0 {
            return Poly::zero(f);
        }
        let mut out = Poly {
            coeffs: self.coeffs.iter().map(|&a| f.mul_raw(a, c)).collect(),
            field: f,
        };
        out.normalize();
        out
    }

    /// Multiply by `c * x^e`.
    pub(crate) fn scale_shift_raw(&self, c: u64, e: usize) -> Poly {
        let f = self.field;
        if c == 0 || self.is_zero() {
            return Poly::zero(f);
        }
        let mut coeffs = vec![0u64; e];
        coeffs.extend(self.coeffs.iter().map(|&a| f.mul_raw(a, c)));
        let mut out = Poly { coeffs, field: f };
        out.normalize();
        out
    }

    /// `self mod x^k`.
    pub fn truncate(&self, k: usize) -> Poly {
        let mut out = Poly {
            coeffs: self.coeffs.iter().take(k).copied().collect(),
            field: self.field,
        };
        out.normalize();
        out
    }

    /// `(self * rhs) mod x^k`.
    pub fn mul_trunc(&self, rhs: &Poly, k: usize) -> Result<Poly> {
        self.same_field(rhs)?;
        Ok(self.mul_trunc_raw(rhs, k))
    }

    pub(crate) fn mul_trunc_raw(&self, rhs: &Poly, k: usize) -> Poly {
        let f = self.field;
        if k == 0 || self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        // Full product then cut: the truncated schoolbook saves little at
        // these sizes and the full product reuses the Karatsuba path.
        self.mul_raw(rhs).truncate(k)
    }

    /// Quotient and remainder: `self = q * rhs + r` with `deg r < deg rhs`.
    pub fn div_rem(&self, rhs: &Poly) -> Result<(Poly, Poly)> {
        self.same_field(rhs)?;
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.div_rem_raw(rhs))
    }

    pub(crate) fn div_rem_raw(&self, rhs: &Poly) -> (Poly, Poly) {
        let f = self.field;
        let db = rhs.coeffs.len() - 1;
        if self.coeffs.len() < rhs.coeffs.len() {
            return (Poly::zero(f), self.clone());
        }
        let lead_inv = f
            .inv_raw(*rhs.coeffs.last().unwrap())
            .expect("nonzero leading coeff");
        let mut rem = self.coeffs.clone();
        let mut quo = vec![0u64; rem.len() - db];
        for i in (db..rem.len()).rev() {
            let c = f.mul_raw(rem[i], lead_inv);
            if c == 0 {
                continue;
            }
            quo[i - db] = c;
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                rem[i - db + j] = f.sub_raw(rem[i - db + j], f.mul_raw(c, b));
            }
        }
        let mut q = Poly {
            coeffs: quo,
            field: f,
        };
        let mut r = Poly {
            coeffs: rem,
            field: f,
        };
        q.normalize();
        r.normalize();
        (q, r)
    }

    /// The reversal `x^k * self(1/x)` for a window `k >= deg(self)`.
    pub fn shift_reverse(&self, k: usize) -> Result<Poly> {
        match self.deg_usize() {
            None => Ok(Poly::zero(self.field)),
            Some(d) if d > k => Err(Error::ReversalWindow),
            Some(_) => {
                let mut coeffs = vec![0u64; k + 1];
                for (i, &c) in self.coeffs.iter().enumerate() {
                    coeffs[k - i] = c;
                }
                let mut out = Poly {
                    coeffs,
                    field: self.field,
                };
                out.normalize();
                Ok(out)
            }
        }
    }
}

fn mul_dispatch(f: PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.len().min(b.len()) < KARATSUBA_THRESHOLD {
        mul_schoolbook(f, a, b)
    } else {
        mul_karatsuba(f, a, b)
    }
}

fn mul_schoolbook(f: PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = f.add_raw(out[i + j], f.mul_raw(ai, bj));
        }
    }
    out
}

fn mul_karatsuba(f: PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let half = n.div_ceil(2);
    if a.len() <= half || b.len() <= half {
        // Unbalanced split degenerates; fall back to blocks.
        return mul_schoolbook(f, a, b);
    }
    let (a0, a1) = a.split_at(half);
    let (b0, b1) = b.split_at(half);
    let low = mul_dispatch(f, a0, b0);
    let high = mul_dispatch(f, a1, b1);
    let asum = slice_add(f, a0, a1);
    let bsum = slice_add(f, b0, b1);
    let mid = mul_dispatch(f, &asum, &bsum);

    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &c) in low.iter().enumerate() {
        out[i] = f.add_raw(out[i], c);
    }
    for (i, &c) in high.iter().enumerate() {
        out[i + 2 * half] = f.add_raw(out[i + 2 * half], c);
    }
    for i in 0..mid.len() {
        let mut c = mid[i];
        if i < low.len() {
            c = f.sub_raw(c, low[i]);
        }
        if i < high.len() {
            c = f.sub_raw(c, high[i]);
        }
        out[i + half] = f.add_raw(out[i + half], c);
    }
    out
}

fn slice_add(f: PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            f.add_raw(
                a.get(i).copied().unwrap_or(0),
                b.get(i).copied().unwrap_or(0),
            )
        })
        .collect()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 if c == 1 => write!(f, "x")?,
                1 => write!(f, "{c}x")?,
                _ if c == 1 => write!(f, "x^{i}")?,
                _ => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn mul_examples() {
        let f2 = f(2);
        let xp1 = Poly::from_coeffs(f2, &[1, 1]);
        assert_eq!(xp1.mul(&xp1).unwrap(), Poly::from_coeffs(f2, &[1, 0, 1]));

        let f7 = f(7);
        let a = Poly::from_coeffs(f7, &[0, 0, 1]);
        let b = Poly::from_coeffs(f7, &[1, 1]);
        assert_eq!(a.add(&b).unwrap(), Poly::from_coeffs(f7, &[1, 1, 1]));

        let a = Poly::from_coeffs(f7, &[2, 2]);
        let four = Poly::constant(f7, 4);
        assert_eq!(a.mul(&four).unwrap(), Poly::from_coeffs(f7, &[1, 1]));
    }

    #[test]
    fn div_rem_examples() {
        let f7 = f(7);
        let x2 = Poly::from_coeffs(f7, &[0, 0, 1]);
        let x = Poly::from_coeffs(f7, &[0, 1]);
        assert_eq!(x2.div_rem(&x).unwrap(), (x.clone(), Poly::zero(f7)));

        let f2 = f(2);
        let a = Poly::from_coeffs(f2, &[1, 0, 1]);
        let b = Poly::from_coeffs(f2, &[1, 1]);
        assert_eq!(a.div_rem(&b).unwrap(), (b.clone(), Poly::zero(f2)));

        let one = Poly::one(f7);
        assert_eq!(one.div_rem(&x).unwrap(), (Poly::zero(f7), one.clone()));
        assert_eq!(one.div_rem(&Poly::zero(f7)), Err(Error::DivisionByZero));
    }

    #[test]
    fn mul_trunc_examples() {
        let f2 = f(2);
        let a = Poly::from_coeffs(f2, &[1, 1]);
        assert_eq!(a.mul_trunc(&a, 2).unwrap(), Poly::one(f2));

        let f7 = f(7);
        let any = Poly::from_coeffs(f7, &[3, 1, 4]);
        assert_eq!(any.mul_trunc(&any, 0).unwrap(), Poly::zero(f7));

        let x = Poly::from_coeffs(f7, &[0, 1]);
        assert_eq!(
            x.mul_trunc(&x, 3).unwrap(),
            Poly::from_coeffs(f7, &[0, 0, 1])
        );
    }

    #[test]
    fn shift_reverse_examples() {
        let f7 = f(7);
        let a = Poly::from_coeffs(f7, &[0, 2, 1]);
        assert_eq!(a.shift_reverse(2).unwrap(), Poly::from_coeffs(f7, &[1, 2]));
        assert_eq!(Poly::zero(f7).shift_reverse(5).unwrap(), Poly::zero(f7));
        assert_eq!(
            Poly::one(f7).shift_reverse(3).unwrap(),
            Poly::monomial(f7, 1, 3)
        );
        assert_eq!(a.shift_reverse(1), Err(Error::ReversalWindow));
    }

    #[test]
    fn degree_of_zero_behaves_under_max() {
        let f7 = f(7);
        assert_eq!(Poly::zero(f7).degree(), Degree::NegInf);
        assert!(Degree::NegInf < Degree::Fin(-100));
        assert_eq!(Degree::NegInf.max(Degree::Fin(3)), Degree::Fin(3));
        assert_eq!(Degree::NegInf.add_const(5), Degree::NegInf);
    }

    #[test]
    fn field_mismatch_is_reported() {
        let a = Poly::one(f(7));
        let b = Poly::one(f(97));
        assert_eq!(a.add(&b), Err(Error::FieldMismatch));
        assert_eq!(a.mul(&b), Err(Error::FieldMismatch));
        assert_eq!(a.div_rem(&b), Err(Error::FieldMismatch));
    }

    fn arb_poly(p: u64, max_len: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec(0..p, 0..=max_len).prop_map(move |cs| Poly::from_coeffs(f(p), &cs))
    }

    #[test]
    fn div_rem_reconstructs() {
        use rand::{Rng, SeedableRng};
        for p in [2u64, 3, 7, 97] {
            let field = f(p);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(p);
            for _ in 0..1000 {
                let a = Poly::from_coeffs(
                    field,
                    &(0..rng.random_range(0..12))
                        .map(|_| rng.random_range(0..p))
                        .collect::<Vec<_>>(),
                );
                let mut b = Poly::zero(field);
                while b.is_zero() {
                    b = Poly::from_coeffs(
                        field,
                        &(0..rng.random_range(1..8))
                            .map(|_| rng.random_range(0..p))
                            .collect::<Vec<_>>(),
                    );
                }
                let (q, r) = a.div_rem(&b).unwrap();
                assert_eq!(q.mul(&b).unwrap().add(&r).unwrap(), a);
                assert!(r.degree() < b.degree());
            }
        }
    }

    proptest! {
        #[test]
        fn mul_trunc_matches_full_product(a in arb_poly(7, 20), b in arb_poly(7, 20), k in 0usize..25) {
            prop_assert_eq!(a.mul_trunc(&b, k).unwrap(), a.mul(&b).unwrap().truncate(k));
        }

        #[test]
        fn karatsuba_matches_schoolbook(a in arb_poly(97, 90), b in arb_poly(97, 90)) {
            if !a.is_zero() && !b.is_zero() {
                let expected = mul_schoolbook(f(97), a.coeffs(), b.coeffs());
                prop_assert_eq!(a.mul(&b).unwrap(), Poly::from_coeffs(f(97), &expected));
            }
        }

        #[test]
        fn shift_reverse_involution(a in arb_poly(7, 12), extra in 0usize..4) {
            // Involution needs a fixed window and a unit constant term.
            if !a.is_zero() && a.coeff_u64(0) != 0 {
                let k = a.deg_usize().unwrap() + extra;
                let rev = a.shift_reverse(k).unwrap();
                prop_assert_eq!(rev.shift_reverse(k).unwrap(), a);
            }
        }

        #[test]
        fn ring_identities(a in arb_poly(3, 10), b in arb_poly(3, 10), c in arb_poly(3, 10)) {
            let ab = a.add(&b).unwrap();
            prop_assert_eq!(ab.mul(&c).unwrap(),
                a.mul(&c).unwrap().add(&b.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(a.sub(&a).unwrap(), Poly::zero(f(3)));
        }
    }
}
