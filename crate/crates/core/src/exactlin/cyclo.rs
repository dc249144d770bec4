//! Exact arithmetic in cyclotomic fields `Q(zeta_N) = Q[x] / Phi_N`.
//!
//! Elements are kept in the power basis `1, zeta, ..., zeta^{phi(N)-1}`
//! with rational coefficients in lowest terms. Binary operations on
//! different conductors lift both sides to the lcm first.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num::integer::lcm;
use num::{BigInt, BigRational, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Conductors above this are refused by the parser.
pub const MAX_CONDUCTOR: u32 = 1 << 16;

fn mobius(mut n: u32) -> i32 {
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Integer coefficients of `Phi_n`, low degree first, via the Moebius
/// product over `x^d - 1`. Overflow panics rather than wraps.
fn compute_cyclotomic(n: u32) -> Vec<i64> {
    let ds = divisors(n);
    let mut poly: Vec<i64> = vec![1];
    // multiply by every (x^d - 1) with mu(n/d) = 1
    for &d in &ds {
        if mobius(n / d) == 1 {
            let d = d as usize;
            let mut next = vec![0i64; poly.len() + d];
            for (i, &c) in poly.iter().enumerate() {
                next[i] = next[i].checked_sub(c).expect("cyclotomic coefficient overflow");
                next[i + d] = next[i + d].checked_add(c).expect("cyclotomic coefficient overflow");
            }
            poly = next;
        }
    }
    // then divide by every (x^d - 1) with mu(n/d) = -1; each division is exact
    for &d in &ds {
        if mobius(n / d) == -1 {
            let d = d as usize;
            let deg = poly.len() - 1;
            let mut quot = vec![0i64; deg + 1 - d];
            for i in (d..=deg).rev() {
                let above = if i < quot.len() { quot[i] } else { 0 };
                quot[i - d] = poly[i].checked_add(above).expect("cyclotomic coefficient overflow");
            }
            poly = quot;
        }
    }
    poly
}

fn cyclotomic(n: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return Arc::clone(p);
    }
    let p = Arc::new(compute_cyclotomic(n));
    cache.lock().unwrap().insert(n, Arc::clone(&p));
    p
}

/// Coefficients of the `n`-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n > 0, "conductor must be positive");
    cyclotomic(n).as_ref().clone()
}

/// Euler's totient, as the degree of `Phi_n`.
pub fn totient(n: u32) -> usize {
    cyclotomic(n).len() - 1
}

/// Reduces a polynomial (any length) modulo `x^n - 1` and then `Phi_n`.
fn reduce<T>(n: u32, mut poly: Vec<T>) -> Vec<T>
where
    T: Clone + Zero + for<'a> std::ops::SubAssign<&'a T> + Mul<BigInt, Output = T>,
{
    let n_us = n as usize;
    if poly.len() > n_us {
        let tail = poly.split_off(n_us);
        for (i, c) in tail.into_iter().enumerate() {
            let k = i % n_us;
            let prev = std::mem::replace(&mut poly[k], T::zero());
            poly[k] = prev + c;
        }
    }
    let phi = cyclotomic(n);
    let deg = phi.len() - 1;
    for top in (deg..poly.len()).rev() {
        let c = std::mem::replace(&mut poly[top], T::zero());
        if c.is_zero() {
            continue;
        }
        for (k, &pc) in phi[..deg].iter().enumerate() {
            if pc != 0 {
                let term = c.clone() * BigInt::from(pc);
                poly[top - deg + k] -= &term;
            }
        }
    }
    poly.resize(deg, T::zero());
    poly
}

#[derive(Clone, Debug)]
pub struct CycloNumber {
    conductor: u32,
    coeffs: Vec<BigRational>,
}

impl CycloNumber {
    pub fn zero(conductor: u32) -> Self {
        assert!(conductor > 0, "conductor must be positive");
        CycloNumber {
            conductor,
            coeffs: vec![BigRational::zero(); totient(conductor)],
        }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_rational(r: BigRational) -> Self {
        CycloNumber {
            conductor: 1,
            coeffs: vec![r],
        }
    }

    /// `zeta_n^k`.
    pub fn root_of_unity(n: u32, k: u64) -> Self {
        let mut counts = vec![0i64; n as usize];
        counts[(k % n as u64) as usize] = 1;
        Self::from_root_counts(n, &counts)
    }

    /// `sum_k counts[k] * zeta_n^k` for a count vector of length `n`.
    pub fn from_root_counts(n: u32, counts: &[i64]) -> Self {
        assert_eq!(counts.len(), n as usize, "one count per n-th root of unity");
        let poly: Vec<BigInt> = counts.iter().map(|&c| BigInt::from(c)).collect();
        let red = reduce(n, poly);
        CycloNumber {
            conductor: n,
            coeffs: red.into_iter().map(BigRational::from_integer).collect(),
        }
    }

    /// Builds a value from power-basis coefficients, which must number
    /// exactly `phi(conductor)`.
    pub fn from_coeffs(conductor: u32, coeffs: Vec<BigRational>) -> Result<Self> {
        if conductor == 0 || conductor > MAX_CONDUCTOR {
            return Err(Error::parse(format!("conductor {conductor} out of range")));
        }
        if coeffs.len() != totient(conductor) {
            return Err(Error::parse(format!(
                "conductor {conductor} needs {} coefficients, got {}",
                totient(conductor),
                coeffs.len()
            )));
        }
        Ok(CycloNumber { conductor, coeffs })
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value, if this number lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs.iter().skip(1).all(Zero::is_zero) {
            Some(self.coeffs.first().cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    /// True when every power-basis coefficient is an integer, i.e. the
    /// value is an algebraic integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Re-expresses the value over a multiple of the current conductor.
    pub fn lift(&self, target: u32) -> Self {
        assert!(
            target.is_multiple_of(self.conductor),
            "cannot lift conductor {} to {target}",
            self.conductor
        );
        if target == self.conductor {
            return self.clone();
        }
        let step = (target / self.conductor) as usize;
        let mut poly = vec![BigRational::zero(); target as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[(k * step) % target as usize] += c;
        }
        CycloNumber {
            conductor: target,
            coeffs: reduce(target, poly),
        }
    }

    fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        let n = lcm(a.conductor, b.conductor);
        (a.lift(n), b.lift(n))
    }

    /// Complex conjugation `zeta -> zeta^{-1}`.
    pub fn conjugate(&self) -> Self {
        let n = self.conductor as usize;
        let mut poly = vec![BigRational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[(n - k) % n] += c;
        }
        CycloNumber {
            conductor: self.conductor,
            coeffs: reduce(self.conductor, poly),
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycloNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn div_rational(&self, r: &BigRational) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.scale(&r.recip()))
    }

    /// Drops to conductor 1 when the value is rational.
    pub fn simplified(self) -> Self {
        match self.as_rational() {
            Some(r) if self.conductor != 1 => Self::from_rational(r),
            _ => self,
        }
    }

    /// Structural equality: same conductor and identical coefficients.
    pub fn identical(&self, other: &Self) -> bool {
        self.conductor == other.conductor && self.coeffs == other.coeffs
    }

    /// Floating-point rendering for display only.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.conductor as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let v = c.numer().to_f64().unwrap_or(f64::NAN) / c.denom().to_f64().unwrap_or(f64::NAN);
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n;
            re += v * angle.cos();
            im += v * angle.sin();
        }
        (re, im)
    }

    pub fn approx_string(&self) -> String {
        let (re, im) = self.to_complex();
        let clean = |x: f64| if x.abs() < 1e-9 { 0.0 } else { x };
        let (re, im) = (clean(re), clean(im));
        if im == 0.0 {
            format!("{re:.6}")
        } else if im < 0.0 {
            format!("{re:.6}-{:.6}i", -im)
        } else {
            format!("{re:.6}+{im:.6}i")
        }
    }
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Self::aligned(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycloNumber {}

impl<'a> Add<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: &'a CycloNumber) -> CycloNumber {
        let (mut a, b) = CycloNumber::aligned(self, rhs);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }
}

impl<'a> Sub<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: &'a CycloNumber) -> CycloNumber {
        let (mut a, b) = CycloNumber::aligned(self, rhs);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x -= y;
        }
        a
    }
}

impl<'a> Mul<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: &'a CycloNumber) -> CycloNumber {
        let (a, b) = CycloNumber::aligned(self, rhs);
        let n = a.conductor;
        if a.coeffs.is_empty() {
            return a;
        }
        let mut poly = vec![BigRational::zero(); 2 * a.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    poly[i + j] += x * y;
                }
            }
        }
        CycloNumber {
            conductor: n,
            coeffs: reduce(n, poly),
        }
    }
}

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: CycloNumber) -> CycloNumber {
        &self + &rhs
    }
}

impl Sub for CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: CycloNumber) -> CycloNumber {
        &self - &rhs
    }
}

impl Mul for CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: CycloNumber) -> CycloNumber {
        &self * &rhs
    }
}

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        -&self
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders `"<c0>[ + <ck>*z^<k>]*; conductor=<N>"`, listing the constant
/// term always and higher terms only when nonzero.
impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c0 = self.coeffs.first().cloned().unwrap_or_else(BigRational::zero);
        write!(f, "{}", fmt_rational(&c0))?;
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            if !c.is_zero() {
                write!(f, " + {}*z^{k}", fmt_rational(c))?;
            }
        }
        write!(f, "; conductor={}", self.conductor)
    }
}

fn parse_int(s: &str) -> Result<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(format!("bad integer {s:?}")));
    }
    s.parse::<BigInt>()
        .map_err(|e| Error::parse(format!("bad integer {s:?}: {e}")))
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let r = match s.split_once('/') {
        None => BigRational::from_integer(parse_int(s)?),
        Some((n, d)) => {
            let d = parse_int(d)?;
            if !d.is_positive() {
                return Err(Error::parse(format!("denominator must be positive in {s:?}")));
            }
            BigRational::new(parse_int(n)?, d)
        }
    };
    // canonical text only: lowest terms, no redundant "/1"
    if fmt_rational(&r) != s {
        return Err(Error::parse(format!("rational {s:?} is not in lowest terms")));
    }
    Ok(r)
}

impl FromStr for CycloNumber {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (body, cond) = s
            .split_once("; conductor=")
            .ok_or_else(|| Error::parse(format!("missing conductor in {s:?}")))?;
        let n: u32 = cond
            .parse()
            .map_err(|_| Error::parse(format!("bad conductor {cond:?}")))?;
        if n == 0 || n > MAX_CONDUCTOR {
            return Err(Error::parse(format!("conductor {n} out of range")));
        }
        let phi = totient(n);
        let mut coeffs = vec![BigRational::zero(); phi];
        let mut terms = body.split(" + ");
        coeffs[0] = parse_rational(terms.next().unwrap_or(""))?;
        let mut last = 0usize;
        for term in terms {
            let (c, k) = term
                .split_once("*z^")
                .ok_or_else(|| Error::parse(format!("bad term {term:?}")))?;
            let k: usize = k
                .parse()
                .map_err(|_| Error::parse(format!("bad exponent in {term:?}")))?;
            if k <= last || k >= phi {
                return Err(Error::parse(format!("exponent {k} out of order or range")));
            }
            let c = parse_rational(c)?;
            if c.is_zero() {
                return Err(Error::parse(format!("zero term {term:?}")));
            }
            coeffs[k] = c;
            last = k;
        }
        Ok(CycloNumber { conductor: n, coeffs })
    }
}
