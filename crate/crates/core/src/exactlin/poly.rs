//! Dense univariate polynomials over `F_q`, sized for desk-scale degrees.

use super::field::{FieldDescriptor, FqValue};

/// Coefficients low degree first, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqPoly {
    coeffs: Vec<FqValue>,
}

impl FqPoly {
    pub fn from_coeffs(mut coeffs: Vec<FqValue>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        FqPoly { coeffs }
    }

    pub fn zero() -> Self {
        FqPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        FqPoly {
            coeffs: vec![FqValue::ONE],
        }
    }

    pub fn coeffs(&self) -> &[FqValue] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lead(&self) -> FqValue {
        *self.coeffs.last().unwrap_or(&FqValue::ZERO)
    }

    pub fn add(&self, other: &Self, f: &FieldDescriptor) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or_default();
                let b = other.coeffs.get(i).copied().unwrap_or_default();
                f.add(a, b)
            })
            .collect();
        Self::from_coeffs(c)
    }

    pub fn sub(&self, other: &Self, f: &FieldDescriptor) -> Self {
        self.add(&other.scale(f.neg(FqValue::ONE), f), f)
    }

    pub fn scale(&self, s: FqValue, f: &FieldDescriptor) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|&c| f.mul(c, s)).collect())
    }

    pub fn mul(&self, other: &Self, f: &FieldDescriptor) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut c = vec![FqValue::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Self::from_coeffs(c)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, divisor: &Self, f: &FieldDescriptor) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let inv_lead = f.inv(divisor.lead()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![FqValue::ZERO; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = f.mul(rem[k + dd], inv_lead);
            quot[k] = c;
            if c.is_zero() {
                continue;
            }
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = f.sub(rem[k + i], f.mul(c, d));
            }
        }
        rem.truncate(dd);
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    pub fn monic(&self, f: &FieldDescriptor) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(f.inv(self.lead()).expect("nonzero"), f)
    }

    /// Monic gcd with Bezout cofactors: `s*self + t*other = g`.
    pub fn ext_gcd(&self, other: &Self, f: &FieldDescriptor) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1, f);
            let s2 = s0.sub(&q.mul(&s1, f), f);
            let t2 = t0.sub(&q.mul(&t1, f), f);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let k = f.inv(r0.lead()).expect("nonzero");
        (r0.scale(k, f), s0.scale(k, f), t0.scale(k, f))
    }

    /// All monic polynomials of exact degree `d`, in increasing order of the
    /// base-`q` integer formed by their low coefficients.
    pub fn monic_of_degree(d: usize, f: &FieldDescriptor) -> impl Iterator<Item = FqPoly> + '_ {
        let q = f.q() as u64;
        let count = q.pow(d as u32);
        (0..count).map(move |mut idx| {
            let mut c = Vec::with_capacity(d + 1);
            for _ in 0..d {
                c.push(FqValue((idx % q) as u32));
                idx /= q;
            }
            c.push(FqValue::ONE);
            FqPoly { coeffs: c }
        })
    }

    pub fn is_irreducible(&self, f: &FieldDescriptor) -> bool {
        match self.degree() {
            None | Some(0) => false,
            Some(_) => {
                let factors = self.factor(f);
                factors.len() == 1 && factors[0].1 == 1
            }
        }
    }

    /// Monic irreducible factorisation by trial division, factors in
    /// ascending degree then index order, with multiplicities.
    pub fn factor(&self, f: &FieldDescriptor) -> Vec<(FqPoly, usize)> {
        let mut rest = self.monic(f);
        let mut out = Vec::new();
        let mut d = 1;
        while let Some(deg) = rest.degree() {
            if deg < 2 * d {
                if deg > 0 {
                    out.push((rest, 1));
                }
                break;
            }
            for g in Self::monic_of_degree(d, f) {
                let mut mult = 0;
                loop {
                    let (qt, r) = rest.divrem(&g, f);
                    if !r.is_zero() {
                        break;
                    }
                    rest = qt;
                    mult += 1;
                }
                if mult > 0 {
                    out.push((g, mult));
                }
            }
            d += 1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[u32]) -> FqPoly {
        FqPoly::from_coeffs(c.iter().map(|&x| FqValue(x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let f = FieldDescriptor::prime(5).unwrap();
        // (x^2 - 1) = (x - 1)(x + 1)
        let a = p(&[4, 0, 1]);
        let (q, r) = a.divrem(&p(&[4, 1]), &f);
        assert_eq!(q, p(&[1, 1]));
        assert!(r.is_zero());
        let (g, s, t) = a.ext_gcd(&p(&[1, 1]), &f);
        assert_eq!(g, p(&[1, 1]));
        assert_eq!(s.mul(&a, &f).add(&t.mul(&p(&[1, 1]), &f), &f), g);
    }

    #[test]
    fn factorisation() {
        let f2 = FieldDescriptor::prime(2).unwrap();
        assert!(p(&[1, 1, 1]).is_irreducible(&f2));
        assert!(!p(&[1, 0, 1]).is_irreducible(&f2));
        assert_eq!(p(&[1, 0, 1]).factor(&f2), vec![(p(&[1, 1]), 2)]);
        let f3 = FieldDescriptor::prime(3).unwrap();
        // x^4 - 1 over F_3 = (x - 1)(x + 1)(x^2 + 1)
        let fs = p(&[2, 0, 0, 0, 1]).factor(&f3);
        assert_eq!(fs, vec![(p(&[1, 1]), 1), (p(&[2, 1]), 1), (p(&[1, 0, 1]), 1)]);
    }
}
