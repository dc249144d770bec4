//! The group `G = H + J`, its elements and the subgroups `H(e)`.

mod abelian;

use std::sync::Arc;

pub use abelian::{characters_of, AbelianStructure, LinearCharacter};

use crate::algebra::{AlgebraElement, IdempotentRecord, Presentation};
use crate::error::{Error, Result};
use crate::exactlin::{FqValue, VectorPacker};

/// Default bound on `|G|` for enumeration.
pub const DEFAULT_MAX_GROUP_ORDER: u64 = 100_000;

/// `h + x` with `h` an index into the H element list and `x` in J coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub h: usize,
    pub x: Vec<FqValue>,
}

/// `w` with `(1 + u)⁻¹ = 1 + w` for `u` in J, by the nilpotent geometric series.
pub fn unipotent_inverse(p: &Presentation, u: &[FqValue]) -> Vec<FqValue> {
    let f = p.field();
    let minus_u: Vec<FqValue> = u.iter().map(|&v| f.neg(v)).collect();
    let mut term = minus_u.clone();
    let mut w = minus_u.clone();
    while term.iter().any(|v| !v.is_zero()) {
        term = p.j_mul(&term, &minus_u);
        w = w.iter().zip(&term).map(|(&a, &b)| f.add(a, b)).collect();
    }
    w
}

#[derive(Clone, Debug)]
pub struct Group {
    pres: Arc<Presentation>,
    packer: VectorPacker,
    order: u64,
}

impl Group {
    /// Fails with `TOO_LARGE` when `|G|` exceeds `max_order`.
    pub fn new(pres: Arc<Presentation>, max_order: u64) -> Result<Self> {
        let packer = VectorPacker::new(pres.field().q(), pres.dim_j(), max_order)?;
        let order = packer.size() * pres.h_order() as u64;
        if order > max_order {
            return Err(Error::TooLarge {
                what: "group",
                size: order,
                bound: max_order,
            });
        }
        Ok(Group { pres, packer, order })
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn packer(&self) -> &VectorPacker {
        &self.packer
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            h: self.pres.h_identity(),
            x: vec![FqValue::ZERO; self.pres.dim_j()],
        }
    }

    pub fn is_identity(&self, g: &GroupElement) -> bool {
        g.h == self.pres.h_identity() && g.x.iter().all(|v| v.is_zero())
    }

    /// `(h1 + x1)(h2 + x2) = h1h2 + h1x2 + x1h2 + x1x2`.
    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let p = &self.pres;
        let f = p.field();
        let t1 = p.h_left(a.h).mul_vec(&b.x, f);
        let t2 = p.h_right(b.h).mul_vec(&a.x, f);
        let t3 = p.j_mul(&a.x, &b.x);
        let x = t1
            .iter()
            .zip(&t2)
            .zip(&t3)
            .map(|((&u, &v), &w)| f.add(f.add(u, v), w))
            .collect();
        GroupElement {
            h: p.h_mul(a.h, b.h),
            x,
        }
    }

    /// `(h + x)⁻¹ = (1 + u)⁻¹ h⁻¹` with `u = h⁻¹x`.
    pub fn inv(&self, g: &GroupElement) -> GroupElement {
        let p = &self.pres;
        let f = p.field();
        let hi = p.h_inv(g.h);
        let w = unipotent_inverse(p, &p.h_left(hi).mul_vec(&g.x, f));
        GroupElement {
            h: hi,
            x: p.h_right(hi).mul_vec(&w, f),
        }
    }

    /// `s g s⁻¹`.
    pub fn conjugate(&self, s: &GroupElement, g: &GroupElement) -> GroupElement {
        self.mul(&self.mul(s, g), &self.inv(s))
    }

    pub fn to_ambient(&self, g: &GroupElement) -> AlgebraElement {
        self.pres.add(self.pres.h_element(g.h), &self.pres.embed_j(&g.x))
    }

    /// Splits an ambient vector as `h + x`; `None` when it is not in G.
    pub fn from_ambient(&self, v: &[FqValue]) -> Option<GroupElement> {
        let h = self.pres.h_by_prefix(v)?;
        let x = self.pres.sub(v, self.pres.h_element(h));
        debug_assert!(self.pres.is_in_j(&x));
        Some(GroupElement {
            h,
            x: x[self.pres.j_start()..].to_vec(),
        })
    }

    /// Position in the canonical order: H index, then J coordinates.
    pub fn index(&self, g: &GroupElement) -> u64 {
        g.h as u64 * self.packer.size() + self.packer.pack(&g.x)
    }

    pub fn element(&self, index: u64) -> GroupElement {
        GroupElement {
            h: (index / self.packer.size()) as usize,
            x: self.packer.unpack(index % self.packer.size()),
        }
    }

    /// All elements in canonical order.
    pub fn enumerate(&self) -> Vec<GroupElement> {
        (0..self.order).map(|i| self.element(i)).collect()
    }

    /// `H(e) = {h ∈ H : he = e}`, as ascending H indices.
    pub fn subgroup_h_of_e(&self, e: &IdempotentRecord) -> Vec<usize> {
        (0..self.pres.h_order())
            .filter(|&h| self.pres.multiply(self.pres.h_element(h), &e.element) == e.element)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::{axb, ut3_2};

    fn v(xs: &[u32]) -> Vec<FqValue> {
        xs.iter().map(|&x| FqValue(x)).collect()
    }

    #[test]
    fn products_and_inverses() {
        let g = Group::new(Presentation::new(axb(3)).unwrap(), DEFAULT_MAX_GROUP_ORDER).unwrap();
        assert_eq!(g.order(), 6);
        // H list is [diag(1,1), diag(2,1)]; zeta = 2
        let a = GroupElement { h: 1, x: v(&[0]) };
        let b = GroupElement { h: 0, x: v(&[1]) };
        assert_eq!(g.mul(&a, &b), GroupElement { h: 1, x: v(&[2]) });
        assert_eq!(g.mul(&a, &g.identity()), a);
        let all = g.enumerate();
        for x in &all {
            assert!(g.is_identity(&g.mul(x, &g.inv(x))));
            assert_eq!(g.from_ambient(&g.to_ambient(x)).as_ref(), Some(x));
            assert_eq!(g.element(g.index(x)), *x);
        }

        let u = Group::new(Presentation::new(ut3_2()).unwrap(), DEFAULT_MAX_GROUP_ORDER).unwrap();
        assert_eq!(u.order(), 8);
        let all = u.enumerate();
        for a in &all {
            assert!(u.is_identity(&u.mul(a, &u.inv(a))));
            for b in &all {
                for c in &all {
                    assert_eq!(u.mul(&u.mul(a, b), c), u.mul(a, &u.mul(b, c)));
                }
            }
        }
        // 1 + x with x^2 = 0 inverts to 1 - x
        let x = GroupElement { h: 0, x: v(&[0, 1, 0]) };
        assert_eq!(u.inv(&x), x);
    }

    #[test]
    fn h_of_e() {
        let p = Presentation::new(axb(5)).unwrap();
        let g = Group::new(p.clone(), DEFAULT_MAX_GROUP_ORDER).unwrap();
        let lat = p.idempotent_lattice().unwrap();
        assert_eq!(g.subgroup_h_of_e(&lat[0]), vec![0, 1, 2, 3]);
        assert_eq!(g.subgroup_h_of_e(&lat[3]), vec![0]);
        for e in &lat {
            for f in &lat {
                if e.le(f) {
                    let he = g.subgroup_h_of_e(e);
                    assert!(g.subgroup_h_of_e(f).iter().all(|h| he.contains(h)));
                }
            }
        }
    }

    #[test]
    fn size_bound() {
        let p = Presentation::new(axb(5)).unwrap();
        assert!(matches!(Group::new(p, 19), Err(Error::TooLarge { .. })));
    }
}
