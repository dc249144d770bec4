//! Idempotents of the commutative semisimple algebra `S = span(H)`.

use super::{AlgebraElement, Presentation};
use crate::error::{Error, Result};
use crate::exactlin::{row_space_basis, ColumnSolver, FqMatrix, FqPoly, FqValue};

/// Largest idempotent lattice (`2^n` elements) that will be materialized.
pub const MAX_LATTICE_SIZE: usize = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveIdempotent {
    pub element: AlgebraElement,
    /// Dimension over `F_q` of the component field `e S`.
    pub component_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentRecord {
    pub element: AlgebraElement,
    pub complement: AlgebraElement,
    /// Bit `i` set when primitive idempotent `i` is a summand.
    pub support: u64,
}

impl IdempotentRecord {
    /// `self ≤ other`, i.e. `self · other = self`.
    pub fn le(&self, other: &IdempotentRecord) -> bool {
        self.support & !other.support == 0
    }

    pub fn rank(&self) -> usize {
        self.support.count_ones() as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociatedIdempotent {
    pub idempotent: IdempotentRecord,
    /// `w` in `f' S` with `w · s = f'`.
    pub unit_witness: AlgebraElement,
}

fn power(pres: &Presentation, s: &[FqValue], mut n: u64) -> AlgebraElement {
    let mut base = s.to_vec();
    let mut acc: Option<AlgebraElement> = None;
    while n > 0 {
        if n & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => pres.multiply(&a, &base),
            });
        }
        n >>= 1;
        if n > 0 {
            base = pres.multiply(&base, &base);
        }
    }
    acc.expect("positive exponent")
}

/// Minimal polynomial of `v` in the algebra `eS` whose unity is `e`.
fn minimal_polynomial(pres: &Presentation, v: &[FqValue], e: &[FqValue]) -> FqPoly {
    let f = pres.field();
    let mut powers: Vec<AlgebraElement> = vec![e.to_vec()];
    loop {
        let next = pres.multiply(powers.last().unwrap(), v);
        let m = FqMatrix::from_columns(pres.dim(), &powers);
        if let Ok(c) = m.solve(&next, f) {
            let mut coeffs: Vec<FqValue> = c.iter().map(|&x| f.neg(x)).collect();
            coeffs.push(FqValue::ONE);
            return FqPoly::from_coeffs(coeffs);
        }
        powers.push(next);
    }
}

fn evaluate(pres: &Presentation, poly: &FqPoly, v: &[FqValue], e: &[FqValue]) -> AlgebraElement {
    let mut acc = pres.zero();
    for &c in poly.coeffs().iter().rev() {
        acc = pres.add(&pres.multiply(&acc, v), &pres.scale(c, e));
    }
    acc
}

/// Splits the component `e` along the factorization of the minimal
/// polynomial of `v`; returns `[e]` when it does not split.
fn split_by(pres: &Presentation, v: &[FqValue], e: &[FqValue]) -> Vec<AlgebraElement> {
    let f = pres.field();
    let m = minimal_polynomial(pres, v, e);
    let factors = m.factor(f);
    if factors.len() < 2 {
        return vec![e.to_vec()];
    }
    assert!(
        factors.iter().all(|(_, mult)| *mult == 1),
        "span(H) is semisimple, so minimal polynomials are squarefree"
    );
    factors
        .iter()
        .map(|(p, _)| {
            let (cofactor, r) = m.divrem(p, f);
            debug_assert!(r.is_zero());
            let (g, s, _) = cofactor.ext_gcd(p, f);
            debug_assert_eq!(g, FqPoly::one());
            let (_, u) = cofactor.mul(&s, f).divrem(&m, f);
            evaluate(pres, &u, v, e)
        })
        .collect()
}

fn component_basis(pres: &Presentation, e: &[FqValue]) -> Vec<AlgebraElement> {
    let products: Vec<AlgebraElement> = pres.h_elements().iter().map(|h| pres.multiply(h, e)).collect();
    row_space_basis(pres.dim(), &products, pres.field())
}

/// Basis of `{s ∈ eS : s^q = s}`, whose dimension counts the primitive
/// idempotents below `e`.
fn frobenius_fixed(pres: &Presentation, e: &[FqValue]) -> Vec<AlgebraElement> {
    let f = pres.field();
    let basis = component_basis(pres, e);
    let images: Vec<AlgebraElement> = basis
        .iter()
        .map(|b| pres.sub(&power(pres, b, f.q() as u64), b))
        .collect();
    let m = FqMatrix::from_columns(pres.dim(), &images);
    m.kernel_basis(f)
        .into_iter()
        .map(|c| {
            let mut s = pres.zero();
            for (coef, b) in c.iter().zip(&basis) {
                s = pres.add(&s, &pres.scale(*coef, b));
            }
            s
        })
        .collect()
}

pub(super) fn compute_primitive(pres: &Presentation, reverse: bool) -> Vec<PrimitiveIdempotent> {
    if pres.j_start() == 0 {
        return Vec::new();
    }
    let f = pres.field().clone();
    let mut order: Vec<usize> = (0..pres.h_order()).collect();
    if reverse {
        order.reverse();
    }
    let mut comps: Vec<AlgebraElement> = vec![pres.unity().to_vec()];
    loop {
        let before = comps.len();
        for &h in &order {
            comps = comps
                .iter()
                .flat_map(|e| split_by(pres, &pres.multiply(pres.h_element(h), e), e))
                .collect();
        }
        if comps.len() == before {
            break;
        }
    }
    // Splitting by H elements alone need not reach primitive components;
    // finish with Frobenius-fixed elements, which always separate them.
    let mut done = Vec::new();
    while let Some(e) = comps.pop() {
        let fixed = frobenius_fixed(pres, &e);
        if fixed.len() <= 1 {
            done.push(e);
            continue;
        }
        let z = fixed
            .iter()
            .find(|z| FqMatrix::from_rows(pres.dim(), &[e.clone(), (*z).clone()]).rank(&f) == 2)
            .expect("fixed space larger than F_q e");
        let parts = split_by(pres, z, &e);
        assert!(parts.len() >= 2, "fixed element must split its component");
        comps.extend(parts);
    }
    done.sort();
    done.into_iter()
        .map(|e| PrimitiveIdempotent {
            component_dim: component_basis(pres, &e).len(),
            element: e,
        })
        .collect()
}

impl Presentation {
    pub fn idempotent(&self, support: u64) -> IdempotentRecord {
        let mut element = self.zero();
        for (i, p) in self.primitive_idempotents().iter().enumerate() {
            if support >> i & 1 == 1 {
                element = self.add(&element, &p.element);
            }
        }
        IdempotentRecord {
            complement: self.sub(self.unity(), &element),
            element,
            support,
        }
    }

    /// All `2^n` idempotents of `span(H)`, indexed by support bitmask.
    pub fn idempotent_lattice(&self) -> Result<Vec<IdempotentRecord>> {
        let n = self.primitive_idempotents().len();
        if n >= 63 || (1usize << n) > MAX_LATTICE_SIZE {
            return Err(Error::TooLarge {
                what: "idempotent lattice",
                size: 1u64.checked_shl(n as u32).unwrap_or(u64::MAX),
                bound: MAX_LATTICE_SIZE as u64,
            });
        }
        Ok((0..1u64 << n).map(|m| self.idempotent(m)).collect())
    }

    /// `n - |support(e)|`, the number of primitive idempotents missing from `e`.
    pub fn colength(&self, e: &IdempotentRecord) -> usize {
        self.primitive_idempotents().len() - e.rank()
    }

    pub fn associated_idempotent(&self, s: &[FqValue]) -> Result<AssociatedIdempotent> {
        if !self.in_span_h(s) {
            return Err(Error::NotInKh);
        }
        let f = self.field();
        let mut support = 0u64;
        for (i, p) in self.primitive_idempotents().iter().enumerate() {
            if self.multiply(&p.element, s).iter().any(|x| !x.is_zero()) {
                support |= 1 << i;
            }
        }
        let idempotent = self.idempotent(support);
        let basis = component_basis(self, &idempotent.element);
        let columns: Vec<AlgebraElement> = basis.iter().map(|b| self.multiply(b, s)).collect();
        let solver = ColumnSolver::new(self.dim(), &columns, f)?;
        let coords = solver.coordinates(&idempotent.element, f)?;
        let mut unit_witness = self.zero();
        for (c, b) in coords.iter().zip(&basis) {
            unit_witness = self.add(&unit_witness, &self.scale(*c, b));
        }
        Ok(AssociatedIdempotent {
            idempotent,
            unit_witness,
        })
    }

    /// `(exe, exe', e'xe, e'xe')` with `e' = 1 - e`.
    pub fn pierce(&self, e: &IdempotentRecord, x: &[FqValue]) -> [AlgebraElement; 4] {
        let (a, b) = (&e.element, &e.complement);
        let side = |l: &[FqValue], r: &[FqValue]| self.multiply(&self.multiply(l, x), r);
        [side(a, a), side(a, b), side(b, a), side(b, b)]
    }
}
