//! Finite fields `F_q = Z_p[t] / (modulus)` with table-driven arithmetic.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::cyclo::CycloNumber;
use super::poly::FqPoly;
use crate::error::{Error, Result};

/// Largest field order for which the arithmetic tables are built.
pub const MAX_FIELD_ORDER: u32 = 1024;

/// Degree above which the irreducibility check must be explicitly waived.
pub const MAX_CHECKED_DEGREE: u32 = 4;

/// An element of `F_q`, stored as the integer `sum_i c_i p^i` of its
/// coefficient vector in the power basis `1, t, ..., t^{m-1}`.
///
/// Values carry no reference to their field; use [`FieldElement`] when
/// the field must travel with the value.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FqValue(pub u32);

impl FqValue {
    pub const ZERO: FqValue = FqValue(0);
    pub const ONE: FqValue = FqValue(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FqValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub struct FieldDescriptor {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    trace: Vec<u32>,
}

impl fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldDescriptor")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldDescriptor {}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn checked_order(p: u32, m: u32) -> Result<u32> {
    let mut q: u64 = 1;
    for _ in 0..m {
        q *= p as u64;
        if q > MAX_FIELD_ORDER as u64 {
            return Err(Error::TooLarge {
                what: "field order",
                size: q,
                bound: MAX_FIELD_ORDER as u64,
            });
        }
    }
    Ok(q as u32)
}

impl FieldDescriptor {
    /// The prime field `Z_p`.
    pub fn prime(p: u32) -> Result<Arc<Self>> {
        Self::new(p, 1, vec![0, 1])
    }

    /// `F_{p^m}` with the given monic modulus (low degree first, `m + 1`
    /// coefficients). The modulus must be irreducible; this is checked for
    /// `m <= 4` and refused above that.
    pub fn new(p: u32, m: u32, modulus: Vec<u32>) -> Result<Arc<Self>> {
        Self::build(p, m, modulus, false)
    }

    /// As [`FieldDescriptor::new`], but skips the irreducibility check for
    /// degrees above [`MAX_CHECKED_DEGREE`].
    pub fn new_waiving_check(p: u32, m: u32, modulus: Vec<u32>) -> Result<Arc<Self>> {
        Self::build(p, m, modulus, true)
    }

    /// `F_q` with the default modulus: the monic irreducible of degree `m`
    /// whose low coefficients form the smallest base-`p` integer.
    pub fn with_order(q: u32) -> Result<Arc<Self>> {
        let (p, m) = prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        if m == 1 {
            return Self::prime(p);
        }
        let base = Self::prime(p)?;
        let count = checked_order(p, m)?;
        for idx in 0..count {
            let mut coeffs = Vec::with_capacity(m as usize + 1);
            let mut r = idx;
            for _ in 0..m {
                coeffs.push(r % p);
                r /= p;
            }
            coeffs.push(1);
            let poly = FqPoly::from_coeffs(coeffs.iter().map(|&c| FqValue(c)).collect());
            if poly.is_irreducible(&base) {
                return Self::new(p, m, coeffs);
            }
        }
        Err(Error::InvalidField(format!(
            "no irreducible polynomial of degree {m} over Z_{p}"
        )))
    }

    fn build(p: u32, m: u32, modulus: Vec<u32>, waive: bool) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("characteristic {p} is not prime")));
        }
        if m == 0 {
            return Err(Error::InvalidField("extension degree must be positive".into()));
        }
        if modulus.len() != m as usize + 1 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidField(format!(
                "modulus must be monic of degree {m} given as {} coefficients",
                m + 1
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficients must lie in [0, p)".into()));
        }
        let q = checked_order(p, m)?;
        if m > 1 {
            if m > MAX_CHECKED_DEGREE && !waive {
                return Err(Error::InvalidField(format!(
                    "irreducibility of a degree-{m} modulus cannot be checked; waive the check explicitly"
                )));
            }
            if m <= MAX_CHECKED_DEGREE {
                let base = Self::prime(p)?;
                let poly = FqPoly::from_coeffs(modulus.iter().map(|&c| FqValue(c)).collect());
                if !poly.is_irreducible(&base) {
                    return Err(Error::InvalidField(format!(
                        "modulus {modulus:?} is reducible over Z_{p}"
                    )));
                }
            }
        }

        let qs = q as usize;
        let decode = |v: u32| -> Vec<u32> {
            let mut c = Vec::with_capacity(m as usize);
            let mut r = v;
            for _ in 0..m {
                c.push(r % p);
                r /= p;
            }
            c
        };
        let encode = |c: &[u32]| -> u32 { c.iter().rev().fold(0, |acc, &d| acc * p + d) };

        let mut add = vec![0u32; qs * qs];
        let mut mul = vec![0u32; qs * qs];
        for a in 0..q {
            let ca = decode(a);
            for b in 0..q {
                let cb = decode(b);
                let sum: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = encode(&sum);

                let mut prod = vec![0u64; 2 * m as usize];
                for (i, &x) in ca.iter().enumerate() {
                    for (j, &y) in cb.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
                    }
                }
                // reduce by the monic modulus, highest degree first
                for d in (m as usize..2 * m as usize).rev() {
                    let c = prod[d];
                    if c == 0 {
                        continue;
                    }
                    prod[d] = 0;
                    for (k, &mc) in modulus[..m as usize].iter().enumerate() {
                        let idx = d - m as usize + k;
                        prod[idx] = (prod[idx] + (p as u64 - c) * mc as u64) % p as u64;
                    }
                }
                let red: Vec<u32> = prod[..m as usize].iter().map(|&c| c as u32).collect();
                mul[(a * q + b) as usize] = encode(&red);
            }
        }
        let mut neg = vec![0u32; qs];
        let mut inv = vec![0u32; qs];
        for a in 0..q {
            for b in 0..q {
                if add[(a * q + b) as usize] == 0 {
                    neg[a as usize] = b;
                }
                if mul[(a * q + b) as usize] == 1 {
                    inv[a as usize] = b;
                }
            }
        }
        let mut field = FieldDescriptor {
            p,
            m,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
            trace: Vec::new(),
        };
        let trace = (0..q)
            .map(|a| {
                let mut acc = FqValue::ZERO;
                let mut pw = FqValue(a);
                for _ in 0..m {
                    acc = field.add(acc, pw);
                    pw = field.pow(pw, p as u64);
                }
                debug_assert!(acc.0 < p, "trace must land in the prime field");
                acc.0
            })
            .collect();
        field.trace = trace;
        Ok(Arc::new(field))
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = FqValue> {
        (0..self.q).map(FqValue)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FqValue> {
        (1..self.q).map(FqValue)
    }

    /// Coefficients of `a` in the power basis, low degree first.
    pub fn coeffs(&self, a: FqValue) -> Vec<u32> {
        let mut c = Vec::with_capacity(self.m as usize);
        let mut r = a.0;
        for _ in 0..self.m {
            c.push(r % self.p);
            r /= self.p;
        }
        c
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FqValue> {
        if coeffs.len() != self.m as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidField(format!(
                "{coeffs:?} is not a reduced coefficient vector"
            )));
        }
        Ok(FqValue(coeffs.iter().rev().fold(0, |acc, &d| acc * self.p + d)))
    }

    /// Checks that a raw index names an element of this field.
    pub fn value(&self, index: u32) -> Result<FqValue> {
        if index < self.q {
            Ok(FqValue(index))
        } else {
            Err(Error::InvalidField(format!(
                "{index} is not an element of F_{}",
                self.q
            )))
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FqValue {
        FqValue(n.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: FqValue, b: FqValue) -> FqValue {
        FqValue(self.add[(a.0 * self.q + b.0) as usize])
    }

    #[inline]
    pub fn sub(&self, a: FqValue, b: FqValue) -> FqValue {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqValue, b: FqValue) -> FqValue {
        FqValue(self.mul[(a.0 * self.q + b.0) as usize])
    }

    #[inline]
    pub fn neg(&self, a: FqValue) -> FqValue {
        FqValue(self.neg[a.0 as usize])
    }

    pub fn inv(&self, a: FqValue) -> Result<FqValue> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(FqValue(self.inv[a.0 as usize]))
        }
    }

    pub fn pow(&self, a: FqValue, mut e: u64) -> FqValue {
        let mut base = a;
        let mut acc = FqValue::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Absolute trace `a + a^p + ... + a^{p^{m-1}}`, returned as an integer
    /// in `[0, p)`.
    #[inline]
    pub fn absolute_trace(&self, a: FqValue) -> u32 {
        self.trace[a.0 as usize]
    }

    /// The fixed nontrivial additive character `a -> zeta_p^{Tr(a)}`.
    pub fn additive_character(&self, a: FqValue) -> CycloNumber {
        CycloNumber::root_of_unity(self.p, self.absolute_trace(a) as u64)
    }

    pub fn multiplicative_order(&self, a: FqValue) -> Option<u32> {
        if a.is_zero() {
            return None;
        }
        let mut x = a;
        let mut k = 1;
        while x != FqValue::ONE {
            x = self.mul(x, a);
            k += 1;
        }
        Some(k)
    }

    /// The smallest generator of `F_q^*`.
    pub fn primitive_element(&self) -> FqValue {
        self.nonzero_elements()
            .find(|&a| self.multiplicative_order(a) == Some(self.q - 1))
            .expect("the multiplicative group of a finite field is cyclic")
    }
}

/// Decomposes `q = p^m`, returning `None` unless `q` is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut r = q;
    let mut m = 0;
    while r.is_multiple_of(p) {
        r /= p;
        m += 1;
    }
    (r == 1).then_some((p, m))
}

/// A value bundled with its field, for the checked arithmetic surface.
#[derive(Clone, Debug)]
pub struct FieldElement {
    pub field: Arc<FieldDescriptor>,
    pub value: FqValue,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.value == other.value
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum FqOp {
    Add,
    Sub,
    Mul,
    Inv,
    Neg,
}

impl FieldElement {
    pub fn new(field: &Arc<FieldDescriptor>, value: FqValue) -> Result<Self> {
        field.value(value.0)?;
        Ok(FieldElement {
            field: Arc::clone(field),
            value,
        })
    }
}

/// Field arithmetic with descriptor checking. Binary operations require
/// `b`; unary ones ignore it.
pub fn fq_arith(op: FqOp, a: &FieldElement, b: Option<&FieldElement>) -> Result<FieldElement> {
    let f = &a.field;
    let other = || -> Result<FqValue> {
        let b = b.ok_or_else(|| Error::InvalidField(format!("{op:?} needs two operands")))?;
        if !Arc::ptr_eq(f, &b.field) && **f != *b.field {
            return Err(Error::FieldMismatch);
        }
        Ok(b.value)
    };
    let value = match op {
        FqOp::Add => f.add(a.value, other()?),
        FqOp::Sub => f.sub(a.value, other()?),
        FqOp::Mul => f.mul(a.value, other()?),
        FqOp::Neg => f.neg(a.value),
        FqOp::Inv => f.inv(a.value)?,
    };
    Ok(FieldElement {
        field: Arc::clone(f),
        value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Arc<FieldDescriptor> {
        FieldDescriptor::new(2, 2, vec![1, 1, 1]).unwrap()
    }

    #[test]
    fn small_arithmetic() {
        let f3 = FieldDescriptor::prime(3).unwrap();
        assert_eq!(f3.add(FqValue(2), FqValue(2)), FqValue(1));

        // t encodes as 2, t + 1 as 3
        let f = f4();
        assert_eq!(f.mul(FqValue(2), FqValue(2)), FqValue(3));

        let f5 = FieldDescriptor::prime(5).unwrap();
        assert_eq!(f5.inv(FqValue(2)).unwrap(), FqValue(3));
        assert!(matches!(f5.inv(FqValue(0)), Err(Error::DivisionByZero)));
    }

    #[test]
    fn traces() {
        let f = f4();
        assert_eq!(f.absolute_trace(FqValue(0)), 0);
        assert_eq!(f.absolute_trace(FqValue(2)), 1);
        let f9 = FieldDescriptor::new(3, 2, vec![1, 0, 1]).unwrap();
        assert_eq!(f9.absolute_trace(FqValue(1)), 2);
    }

    #[test]
    fn additive_character_values() {
        let f3 = FieldDescriptor::prime(3).unwrap();
        assert_eq!(f3.additive_character(FqValue(0)), CycloNumber::one());
        assert_eq!(f3.additive_character(FqValue(1)), CycloNumber::root_of_unity(3, 1));
        assert_eq!(f4().additive_character(FqValue(2)), CycloNumber::from_integer(-1));
    }

    #[test]
    fn rejects_bad_descriptors() {
        assert!(FieldDescriptor::prime(4).is_err());
        // t^2 + 1 = (t + 1)^2 over Z_2
        assert!(FieldDescriptor::new(2, 2, vec![1, 0, 1]).is_err());
        assert!(FieldDescriptor::new(2, 5, vec![1, 0, 1, 0, 0, 1]).is_err());
        assert!(FieldDescriptor::new_waiving_check(2, 5, vec![1, 0, 1, 0, 0, 1]).is_ok());
    }

    #[test]
    fn default_moduli() {
        assert_eq!(FieldDescriptor::with_order(9).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FieldDescriptor::with_order(4).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FieldDescriptor::with_order(8).unwrap().modulus(), &[1, 1, 0, 1]);
        assert!(FieldDescriptor::with_order(6).is_err());
    }

    #[test]
    fn field_axioms_exhaustive() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let f = FieldDescriptor::with_order(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, FqValue::ZERO), a);
                assert_eq!(f.mul(a, FqValue::ONE), a);
                assert_eq!(f.add(a, f.neg(a)), FqValue::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FqValue::ONE);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn additive_character_is_nontrivial_homomorphism() {
        for q in [2, 3, 4, 5, 8, 9] {
            let f = FieldDescriptor::with_order(q).unwrap();
            assert!(f.elements().any(|a| f.additive_character(a) != CycloNumber::one()));
            for a in f.elements() {
                assert_eq!(f.additive_character(a).conjugate(), f.additive_character(f.neg(a)));
                for b in f.elements() {
                    assert_eq!(
                        f.additive_character(f.add(a, b)),
                        &f.additive_character(a) * &f.additive_character(b)
                    );
                }
            }
        }
    }

    #[test]
    fn checked_surface_detects_mismatch() {
        let f3 = FieldDescriptor::prime(3).unwrap();
        let f5 = FieldDescriptor::prime(5).unwrap();
        let a = FieldElement::new(&f3, FqValue(2)).unwrap();
        let b = FieldElement::new(&f5, FqValue(2)).unwrap();
        assert!(matches!(fq_arith(FqOp::Add, &a, Some(&b)), Err(Error::FieldMismatch)));
        let sum = fq_arith(FqOp::Add, &a, Some(&a)).unwrap();
        assert_eq!(sum.value, FqValue(1));
        let zero = FieldElement::new(&f3, FqValue(0)).unwrap();
        assert!(matches!(fq_arith(FqOp::Inv, &zero, None), Err(Error::DivisionByZero)));
        // a separately built but identical descriptor is the same field
        let f3b = FieldDescriptor::prime(3).unwrap();
        let c = FieldElement::new(&f3b, FqValue(1)).unwrap();
        assert_eq!(fq_arith(FqOp::Mul, &a, Some(&c)).unwrap().value, FqValue(2));
    }
}
