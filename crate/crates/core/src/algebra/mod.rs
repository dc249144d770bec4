//! Finite-dimensional algebras `A = span(H) ⊕ J` given by structure
//! constants, their validation, and the idempotent calculus of `span(H)`.

mod corner;
mod idempotent;

use std::collections::HashMap;
use std::sync::Arc;

pub use corner::Corner;
pub use idempotent::{AssociatedIdempotent, IdempotentRecord, PrimitiveIdempotent, MAX_LATTICE_SIZE};

use crate::error::{Error, Result, ValidationReport};
use crate::exactlin::{FieldDescriptor, FqMatrix, FqValue};

/// Coordinate vector relative to a presentation's basis.
pub type AlgebraElement = Vec<FqValue>;

/// Raw, unvalidated presentation data.
///
/// `structure_constants` lists `(i, j, k, c)` meaning `b_i b_j` has
/// coefficient `c` on `b_k`; repeated triples accumulate. The basis vectors
/// `b_{j_start}, …, b_{dim-1}` span `J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    pub field: Arc<FieldDescriptor>,
    pub dim: usize,
    pub structure_constants: Vec<(usize, usize, usize, FqValue)>,
    pub unity: AlgebraElement,
    pub j_start: usize,
    pub h_elements: Vec<AlgebraElement>,
}

/// Metadata reported for a valid presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct PresentationMetadata {
    pub h_order: usize,
    pub dim_j: usize,
    /// Smallest `M` with `J^M = 0`.
    pub nilpotency_index: usize,
}

#[derive(Clone, Debug)]
pub struct ValidationOutcome {
    pub report: ValidationReport,
    pub metadata: Option<PresentationMetadata>,
}

impl ValidationOutcome {
    pub fn is_valid(&self) -> bool {
        self.report.is_valid()
    }
}

/// Dense multiplication tensor, `t[(i * dim + j) * dim + k]`.
fn dense_tensor(p: &AlgebraPresentation) -> Vec<FqValue> {
    let f = &*p.field;
    let d = p.dim;
    let mut t = vec![FqValue::ZERO; d * d * d];
    for &(i, j, k, c) in &p.structure_constants {
        let slot = &mut t[(i * d + j) * d + k];
        *slot = f.add(*slot, c);
    }
    t
}

fn tensor_mul(f: &FieldDescriptor, t: &[FqValue], d: usize, a: &[FqValue], b: &[FqValue]) -> Vec<FqValue> {
    let mut out = vec![FqValue::ZERO; d];
    for (i, &ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            let s = f.mul(ai, bj);
            let row = &t[(i * d + j) * d..(i * d + j + 1) * d];
            for (o, &c) in out.iter_mut().zip(row) {
                if !c.is_zero() {
                    *o = f.add(*o, f.mul(s, c));
                }
            }
        }
    }
    out
}

fn unit_vector(d: usize, i: usize) -> Vec<FqValue> {
    let mut v = vec![FqValue::ZERO; d];
    v[i] = FqValue::ONE;
    v
}

fn check_shape(p: &AlgebraPresentation, report: &mut ValidationReport) {
    let q = p.field.q();
    let ok_vec = |v: &[FqValue]| v.len() == p.dim && v.iter().all(|x| x.0 < q);
    if p.j_start > p.dim {
        report.push(
            "MALFORMED",
            format!("J range starts at {} beyond dim {}", p.j_start, p.dim),
        );
    }
    for (n, &(i, j, k, c)) in p.structure_constants.iter().enumerate() {
        if i >= p.dim || j >= p.dim || k >= p.dim || c.0 >= q {
            report.push(
                "MALFORMED",
                format!("structure constant #{n} ({i},{j},{k},{}) out of range", c.0),
            );
        }
    }
    if !ok_vec(&p.unity) {
        report.push("MALFORMED", "unity has the wrong length or entries outside the field");
    }
    for (n, h) in p.h_elements.iter().enumerate() {
        if !ok_vec(h) {
            report.push(
                "MALFORMED",
                format!("H element #{n} has the wrong length or entries outside the field"),
            );
        }
    }
    if p.h_elements.is_empty() {
        report.push("H_NOT_GROUP", "H is empty");
    }
}

/// Checks every triangular-type axiom and reports all violations found.
pub fn validate_presentation(p: &AlgebraPresentation) -> ValidationOutcome {
    let mut report = ValidationReport::default();
    check_shape(p, &mut report);
    if !report.is_valid() {
        return ValidationOutcome { report, metadata: None };
    }
    let f = &*p.field;
    let d = p.dim;
    let t = dense_tensor(p);
    let mul = |a: &[FqValue], b: &[FqValue]| tensor_mul(f, &t, d, a, b);
    let basis: Vec<Vec<FqValue>> = (0..d).map(|i| unit_vector(d, i)).collect();
    let prod = |i: usize, j: usize| t[(i * d + j) * d..(i * d + j + 1) * d].to_vec();

    'assoc: for i in 0..d {
        for j in 0..d {
            let ij = prod(i, j);
            for k in 0..d {
                let jk = prod(j, k);
                if mul(&ij, &basis[k]) != mul(&basis[i], &jk) {
                    report.push("NOT_ASSOCIATIVE", format!("basis triple ({i},{j},{k})"));
                    break 'assoc;
                }
            }
        }
    }

    for (i, b) in basis.iter().enumerate() {
        if mul(&p.unity, b) != *b || mul(b, &p.unity) != *b {
            report.push("NO_UNITY", format!("unity fails on basis vector {i}"));
            break;
        }
    }

    let in_j = |v: &[FqValue]| v[..p.j_start].iter().all(|x| x.is_zero());
    'ideal: for jj in p.j_start..d {
        for i in 0..d {
            if !in_j(&prod(i, jj)) || !in_j(&prod(jj, i)) {
                report.push(
                    "J_NOT_IDEAL",
                    format!("product of basis {i} with J basis {jj} leaves J"),
                );
                break 'ideal;
            }
        }
    }

    // powers J^k as spans
    let dim_j = d - p.j_start;
    let mut nilpotency = None;
    let mut power: Vec<Vec<FqValue>> = basis[p.j_start..].to_vec();
    let mut k = 1;
    loop {
        let span = crate::exactlin::row_space_basis(d, &power, f);
        if span.is_empty() {
            nilpotency = Some(k);
            break;
        }
        if k > dim_j + 1 {
            break;
        }
        let next: Vec<Vec<FqValue>> = basis[p.j_start..]
            .iter()
            .flat_map(|b| span.iter().map(|s| mul(b, s)).collect::<Vec<_>>())
            .collect();
        power = next;
        k += 1;
    }
    if nilpotency.is_none() {
        report.push("J_NOT_NILPOTENT", format!("J^{k} is still nonzero"));
    }

    let prefixes: Vec<Vec<FqValue>> = p.h_elements.iter().map(|h| h[..p.j_start].to_vec()).collect();
    let rank_h = FqMatrix::from_rows(d, &p.h_elements).rank(f);
    let rank_prefix = FqMatrix::from_rows(p.j_start, &prefixes).rank(f);
    if rank_h != p.j_start || rank_prefix != p.j_start {
        report.push(
            "BAD_DIRECT_SUM",
            format!(
                "span(H) has dimension {rank_h} and meets the complement of J in dimension {rank_prefix}; both must equal {}",
                p.j_start
            ),
        );
    }

    let mut index: HashMap<&[FqValue], usize> = HashMap::new();
    for (n, h) in p.h_elements.iter().enumerate() {
        if let Some(prev) = index.insert(h.as_slice(), n) {
            report.push("H_NOT_GROUP", format!("H elements #{prev} and #{n} coincide"));
        }
    }
    if !index.contains_key(p.unity.as_slice()) {
        report.push("H_NOT_GROUP", "unity is not listed in H");
    }
    let mut abelian = true;
    'group: for (a, ha) in p.h_elements.iter().enumerate() {
        let mut has_inverse = false;
        for (b, hb) in p.h_elements.iter().enumerate() {
            let ab = mul(ha, hb);
            if !index.contains_key(ab.as_slice()) {
                report.push(
                    "H_NOT_GROUP",
                    format!("product of H elements #{a} and #{b} is not in H"),
                );
                break 'group;
            }
            if ab == p.unity {
                has_inverse = true;
            }
            if abelian && b > a && ab != mul(hb, ha) {
                abelian = false;
                report.push("H_NOT_ABELIAN", format!("H elements #{a} and #{b} do not commute"));
            }
        }
        if !has_inverse {
            report.push("H_NOT_GROUP", format!("H element #{a} has no inverse in H"));
            break;
        }
    }
    if (p.h_elements.len() as u64).is_multiple_of(f.p() as u64) {
        report.push(
            "CHAR_DIVIDES_H",
            format!("characteristic {} divides |H| = {}", f.p(), p.h_elements.len()),
        );
    }

    let metadata = report.is_valid().then(|| PresentationMetadata {
        h_order: p.h_elements.len(),
        dim_j,
        nilpotency_index: nilpotency.unwrap_or(0),
    });
    ValidationOutcome { report, metadata }
}

/// A validated presentation with precomputed multiplication data.
#[derive(Debug)]
pub struct Presentation {
    raw: AlgebraPresentation,
    metadata: PresentationMetadata,
    tensor: Vec<FqValue>,
    h_mul: Vec<usize>,
    h_inv: Vec<usize>,
    h_identity: usize,
    h_lookup: HashMap<Vec<FqValue>, usize>,
    left_j: Vec<FqMatrix>,
    right_j: Vec<FqMatrix>,
    h_left: Vec<FqMatrix>,
    h_right: Vec<FqMatrix>,
    conj: Vec<FqMatrix>,
    primitive: Vec<PrimitiveIdempotent>,
}

impl Presentation {
    pub fn new(raw: AlgebraPresentation) -> Result<Arc<Self>> {
        let outcome = validate_presentation(&raw);
        let Some(metadata) = outcome.metadata else {
            return Err(Error::Invalid(outcome.report));
        };
        let f = raw.field.clone();
        let d = raw.dim;
        let tensor = dense_tensor(&raw);
        let mul = |a: &[FqValue], b: &[FqValue]| tensor_mul(&f, &tensor, d, a, b);
        let nh = raw.h_elements.len();
        let mut h_lookup = HashMap::new();
        for (i, h) in raw.h_elements.iter().enumerate() {
            h_lookup.insert(h[..raw.j_start].to_vec(), i);
        }
        let find = |v: &[FqValue]| h_lookup[&v[..raw.j_start]];
        let mut h_mul = vec![0; nh * nh];
        for a in 0..nh {
            for b in 0..nh {
                h_mul[a * nh + b] = find(&mul(&raw.h_elements[a], &raw.h_elements[b]));
            }
        }
        let h_identity = find(&raw.unity);
        let h_inv: Vec<usize> = (0..nh)
            .map(|a| {
                (0..nh)
                    .find(|&b| h_mul[a * nh + b] == h_identity)
                    .expect("validated group")
            })
            .collect();

        let js = raw.j_start;
        let dj = d - js;
        let j_matrix = |op: &dyn Fn(&[FqValue]) -> Vec<FqValue>| {
            let cols: Vec<Vec<FqValue>> = (0..dj).map(|i| op(&unit_vector(d, js + i))[js..].to_vec()).collect();
            FqMatrix::from_columns(dj, &cols)
        };
        let left_j: Vec<FqMatrix> = (0..dj)
            .map(|j| j_matrix(&|x| mul(&unit_vector(d, js + j), x)))
            .collect();
        let right_j: Vec<FqMatrix> = (0..dj)
            .map(|j| j_matrix(&|x| mul(x, &unit_vector(d, js + j))))
            .collect();
        let h_left: Vec<FqMatrix> = raw.h_elements.iter().map(|h| j_matrix(&|x| mul(h, x))).collect();
        let h_right: Vec<FqMatrix> = raw.h_elements.iter().map(|h| j_matrix(&|x| mul(x, h))).collect();
        let conj = (0..nh).map(|h| h_left[h].mul(&h_right[h_inv[h]], &f)).collect();

        let mut pres = Presentation {
            raw,
            metadata,
            tensor,
            h_mul,
            h_inv,
            h_identity,
            h_lookup,
            left_j,
            right_j,
            h_left,
            h_right,
            conj,
            primitive: Vec::new(),
        };
        pres.primitive = idempotent::compute_primitive(&pres, false);
        Ok(Arc::new(pres))
    }

    pub fn raw(&self) -> &AlgebraPresentation {
        &self.raw
    }

    pub fn field(&self) -> &Arc<FieldDescriptor> {
        &self.raw.field
    }

    pub fn metadata(&self) -> PresentationMetadata {
        self.metadata
    }

    pub fn dim(&self) -> usize {
        self.raw.dim
    }

    pub fn j_start(&self) -> usize {
        self.raw.j_start
    }

    pub fn dim_j(&self) -> usize {
        self.raw.dim - self.raw.j_start
    }

    pub fn unity(&self) -> &[FqValue] {
        &self.raw.unity
    }

    pub fn zero(&self) -> AlgebraElement {
        vec![FqValue::ZERO; self.raw.dim]
    }

    pub fn h_order(&self) -> usize {
        self.raw.h_elements.len()
    }

    pub fn h_element(&self, i: usize) -> &[FqValue] {
        &self.raw.h_elements[i]
    }

    pub fn h_elements(&self) -> &[AlgebraElement] {
        &self.raw.h_elements
    }

    pub fn h_identity(&self) -> usize {
        self.h_identity
    }

    pub fn h_mul(&self, a: usize, b: usize) -> usize {
        self.h_mul[a * self.h_order() + b]
    }

    pub fn h_inv(&self, a: usize) -> usize {
        self.h_inv[a]
    }

    /// Index of the H element whose coordinates outside J match `v`.
    pub fn h_by_prefix(&self, v: &[FqValue]) -> Option<usize> {
        self.h_lookup.get(&v[..self.raw.j_start]).copied()
    }

    pub fn multiply(&self, a: &[FqValue], b: &[FqValue]) -> AlgebraElement {
        tensor_mul(&self.raw.field, &self.tensor, self.raw.dim, a, b)
    }

    pub fn add(&self, a: &[FqValue], b: &[FqValue]) -> AlgebraElement {
        let f = &self.raw.field;
        a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
    }

    pub fn sub(&self, a: &[FqValue], b: &[FqValue]) -> AlgebraElement {
        let f = &self.raw.field;
        a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
    }

    pub fn scale(&self, c: FqValue, a: &[FqValue]) -> AlgebraElement {
        let f = &self.raw.field;
        a.iter().map(|&x| f.mul(c, x)).collect()
    }

    /// Ambient vector of an element of J given in J coordinates.
    pub fn embed_j(&self, x: &[FqValue]) -> AlgebraElement {
        let mut v = self.zero();
        v[self.raw.j_start..].copy_from_slice(x);
        v
    }

    pub fn is_in_j(&self, v: &[FqValue]) -> bool {
        v[..self.raw.j_start].iter().all(|x| x.is_zero())
    }

    /// Product of two elements of J, in J coordinates.
    pub fn j_mul(&self, x: &[FqValue], y: &[FqValue]) -> Vec<FqValue> {
        let js = self.raw.j_start;
        self.multiply(&self.embed_j(x), &self.embed_j(y))[js..].to_vec()
    }

    /// `x ↦ b_j x` on J coordinates.
    pub fn left_j(&self, j: usize) -> &FqMatrix {
        &self.left_j[j]
    }

    /// `x ↦ x b_j` on J coordinates.
    pub fn right_j(&self, j: usize) -> &FqMatrix {
        &self.right_j[j]
    }

    /// `x ↦ h x` on J coordinates.
    pub fn h_left(&self, h: usize) -> &FqMatrix {
        &self.h_left[h]
    }

    /// `x ↦ x h` on J coordinates.
    pub fn h_right(&self, h: usize) -> &FqMatrix {
        &self.h_right[h]
    }

    /// `x ↦ h x h⁻¹` on J coordinates.
    pub fn conjugation(&self, h: usize) -> &FqMatrix {
        &self.conj[h]
    }

    pub fn primitive_idempotents(&self) -> &[PrimitiveIdempotent] {
        &self.primitive
    }

    /// Recomputes the primitive idempotents processing H in reverse order;
    /// the result must coincide with [`Self::primitive_idempotents`].
    pub fn primitive_idempotents_reversed(&self) -> Vec<PrimitiveIdempotent> {
        idempotent::compute_primitive(self, true)
    }

    /// Whether `v` lies in the span of H.
    pub fn in_span_h(&self, v: &[FqValue]) -> bool {
        let f = &self.raw.field;
        let base = FqMatrix::from_rows(self.raw.dim, &self.raw.h_elements).rank(f);
        let mut rows = self.raw.h_elements.clone();
        rows.push(v.to_vec());
        FqMatrix::from_rows(self.raw.dim, &rows).rank(f) == base
    }
}
