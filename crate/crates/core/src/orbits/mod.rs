//! The `G̃ = H ⋉ (N × N)` actions on J and J*, orbit enumeration and the
//! regular/singular classification.
//!
//! `G̃` is driven by generators: `x ↦ (1 + c b_j) x`, `x ↦ x (1 + c b_j)`
//! for `c ≠ 0` and each J basis vector `b_j`, and `x ↦ h x h⁻¹` for
//! `h ∈ H`. On J* the generators act contragrediently, with
//! `(cλ)(x) = λ(xc)` and `(λc)(x) = λ(cx)`.

mod strata;

use std::collections::VecDeque;
use std::sync::Arc;

pub use strata::{Localization, Strata, Stratum};

use crate::algebra::{AlgebraElement, Presentation};
use crate::error::{Error, Result};
use crate::exactlin::{FqMatrix, FqValue, VectorPacker};
use crate::group::{unipotent_inverse, GroupElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Space {
    J,
    Dual,
    G,
}

/// Which families of generators drive an orbit computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Generators {
    pub left: bool,
    pub right: bool,
    pub conj: bool,
}

impl Generators {
    pub const TILDE_G: Generators = Generators {
        left: true,
        right: true,
        conj: true,
    };
    /// `N × N`, ignoring H.
    pub const TWO_SIDED: Generators = Generators {
        left: true,
        right: true,
        conj: false,
    };
    pub const RIGHT: Generators = Generators {
        left: false,
        right: true,
        conj: false,
    };
}

/// An element `(t, a, b)` of `G̃`, with `a = 1 + a_j` and `b = 1 + b_j`
/// given by their J parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tau {
    pub t: usize,
    pub a: Vec<FqValue>,
    pub b: Vec<FqValue>,
}

/// A canonically sorted orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRecord {
    pub space: Space,
    /// Support of the idempotent whose corner the orbit lives in.
    pub idempotent: u64,
    pub members: Vec<u64>,
    pub representative: u64,
    pub regular: Option<bool>,
}

/// Orbits of a whole space, ordered by their minimal members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    orbit_of: Vec<u32>,
    orbits: Vec<Vec<u64>>,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn orbit(&self, id: usize) -> &[u64] {
        &self.orbits[id]
    }

    pub fn representative(&self, id: usize) -> u64 {
        self.orbits[id][0]
    }

    pub fn id_of(&self, code: u64) -> usize {
        self.orbit_of[code as usize] as usize
    }

    pub fn orbits(&self) -> &[Vec<u64>] {
        &self.orbits
    }
}

fn bfs(
    seed: u64,
    packer: &VectorPacker,
    maps: &[&FqMatrix],
    f: &crate::exactlin::FieldDescriptor,
    seen: &mut dyn FnMut(u64) -> bool,
) -> Vec<u64> {
    let dim = packer.dim();
    let mut buf = vec![FqValue::ZERO; dim];
    let mut out = vec![FqValue::ZERO; dim];
    let mut members = vec![seed];
    let mut queue = VecDeque::from([seed]);
    while let Some(code) = queue.pop_front() {
        packer.unpack_into(code, &mut buf);
        for m in maps {
            m.mul_vec_into(&buf, &mut out, f);
            let next = packer.pack(&out);
            if seen(next) {
                members.push(next);
                queue.push_back(next);
            }
        }
    }
    members.sort_unstable();
    members
}

/// Generator matrices of the `G̃` action for one presentation.
#[derive(Debug)]
pub struct OrbitEngine {
    pres: Arc<Presentation>,
    packer: VectorPacker,
    left: Vec<FqMatrix>,
    right: Vec<FqMatrix>,
    conj: Vec<FqMatrix>,
    left_t: Vec<FqMatrix>,
    right_t: Vec<FqMatrix>,
    conj_t: Vec<FqMatrix>,
}

impl OrbitEngine {
    /// Builds the generators and certifies that `{1 + c b_j}` generates
    /// `N = 1 + J`. `max_points` bounds `q^{dim J}`.
    pub fn new(pres: Arc<Presentation>, max_points: u64) -> Result<Self> {
        let f = pres.field().clone();
        let dj = pres.dim_j();
        let packer = VectorPacker::new(f.q(), dj, max_points)?;
        let id = FqMatrix::identity(dj);
        let mut left = Vec::new();
        let mut right = Vec::new();
        for j in 0..dj {
            for c in f.nonzero_elements() {
                left.push(id.add(&pres.left_j(j).scale(c, &f), &f));
                right.push(id.add(&pres.right_j(j).scale(c, &f), &f));
            }
        }
        let conj: Vec<FqMatrix> = (0..pres.h_order()).map(|h| pres.conjugation(h).clone()).collect();
        let t = |v: &[FqMatrix]| v.iter().map(|m| m.transpose()).collect::<Vec<_>>();
        let engine = OrbitEngine {
            left_t: t(&left),
            right_t: t(&right),
            conj_t: t(&conj),
            pres,
            packer,
            left,
            right,
            conj,
        };
        engine.check_generation()?;
        Ok(engine)
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn packer(&self) -> &VectorPacker {
        &self.packer
    }

    /// Closure of `{1 + c b_j}` under multiplication, as a set of `u` with
    /// `1 + u` reached; `(1 + u)(1 + c b_j) = 1 + (u + c u b_j) + c b_j`.
    fn check_generation(&self) -> Result<()> {
        let f = self.pres.field();
        let dj = self.pres.dim_j();
        let size = self.packer.size();
        let mut seen = vec![false; size as usize];
        seen[0] = true;
        let mut count = 1u64;
        let mut queue = VecDeque::from([0u64]);
        let mut buf = vec![FqValue::ZERO; dj];
        let mut out = vec![FqValue::ZERO; dj];
        while let Some(code) = queue.pop_front() {
            self.packer.unpack_into(code, &mut buf);
            let mut g = 0;
            for j in 0..dj {
                for c in f.nonzero_elements() {
                    self.right[g].mul_vec_into(&buf, &mut out, f);
                    g += 1;
                    out[j] = f.add(out[j], c);
                    let next = self.packer.pack(&out);
                    if !seen[next as usize] {
                        seen[next as usize] = true;
                        count += 1;
                        queue.push_back(next);
                    }
                }
            }
        }
        if count != size {
            return Err(Error::GenerationCheckFailed {
                generated: count,
                expected: size,
            });
        }
        Ok(())
    }

    fn maps(&self, space: Space, gens: Generators) -> Vec<&FqMatrix> {
        let mut out: Vec<&FqMatrix> = Vec::new();
        // on J*, left action by c is the transpose of right multiplication
        let (l, r, c) = match space {
            Space::J => (&self.left, &self.right, &self.conj),
            Space::Dual => (&self.right_t, &self.left_t, &self.conj_t),
            Space::G => panic!("G-orbits are affine; see the supertheory module"),
        };
        if gens.left {
            out.extend(l.iter());
        }
        if gens.right {
            out.extend(r.iter());
        }
        if gens.conj {
            out.extend(c.iter());
        }
        out
    }

    /// Sorted orbit of a packed vector.
    pub fn orbit(&self, seed: u64, space: Space, gens: Generators) -> Vec<u64> {
        let maps = self.maps(space, gens);
        let mut seen = std::collections::HashSet::from([seed]);
        bfs(seed, &self.packer, &maps, self.pres.field(), &mut |c| seen.insert(c))
    }

    pub fn partition(&self, space: Space, gens: Generators) -> Partition {
        let maps = self.maps(space, gens);
        let size = self.packer.size();
        let mut orbit_of = vec![u32::MAX; size as usize];
        let mut orbits = Vec::new();
        for seed in 0..size {
            if orbit_of[seed as usize] != u32::MAX {
                continue;
            }
            let id = orbits.len() as u32;
            orbit_of[seed as usize] = id;
            let members = bfs(seed, &self.packer, &maps, self.pres.field(), &mut |c| {
                let slot = &mut orbit_of[c as usize];
                if *slot == u32::MAX {
                    *slot = id;
                    true
                } else {
                    false
                }
            });
            orbits.push(members);
        }
        Partition { orbit_of, orbits }
    }

    /// Orbit with its regularity flag, for a space of this presentation.
    pub fn orbit_record(&self, seed: u64, space: Space, idempotent: u64) -> OrbitRecord {
        let members = self.orbit(seed, space, Generators::TILDE_G);
        let rep = members[0];
        let v = self.packer.unpack(rep);
        let regular = match space {
            Space::J => is_regular(&self.pres, &v),
            Space::Dual => is_regular_dual(&self.pres, &v),
            Space::G => unreachable!(),
        };
        OrbitRecord {
            space,
            idempotent,
            representative: rep,
            members,
            regular: Some(regular),
        }
    }

    fn ambient(&self, j: &[FqValue]) -> AlgebraElement {
        self.pres.embed_j(j)
    }

    /// `ρ(τ)(x) = t a x b⁻¹ t⁻¹`.
    pub fn act_j(&self, tau: &Tau, x: &[FqValue]) -> Vec<FqValue> {
        let p = &self.pres;
        let a = p.add(p.unity(), &self.ambient(&tau.a));
        let b_inv = p.add(p.unity(), &self.ambient(&unipotent_inverse(p, &tau.b)));
        let inner = p.multiply(&p.multiply(&a, &self.ambient(x)), &b_inv);
        p.conjugation(tau.t).mul_vec(&inner[p.j_start()..], p.field())
    }

    /// Matrix of `ρ(τ)` on J.
    pub fn act_matrix(&self, tau: &Tau) -> FqMatrix {
        let dj = self.pres.dim_j();
        let cols: Vec<Vec<FqValue>> = (0..dj)
            .map(|i| {
                let mut e = vec![FqValue::ZERO; dj];
                e[i] = FqValue::ONE;
                self.act_j(tau, &e)
            })
            .collect();
        FqMatrix::from_columns(dj, &cols)
    }

    /// `ρ*(τ)λ = λ ∘ ρ(τ⁻¹)`.
    pub fn act_dual(&self, tau: &Tau, lambda: &[FqValue]) -> Vec<FqValue> {
        let f = self.pres.field();
        let inv = self.act_matrix(tau).inverse(f).expect("ρ(τ) is invertible");
        inv.transpose().mul_vec(lambda, f)
    }

    /// `R_τ(g) = 1 + t a (g - 1) b⁻¹ t⁻¹`.
    pub fn act_g(&self, tau: &Tau, g: &GroupElement) -> GroupElement {
        let p = &self.pres;
        let a = p.add(p.unity(), &self.ambient(&tau.a));
        let b_inv = p.add(p.unity(), &self.ambient(&unipotent_inverse(p, &tau.b)));
        let t = p.h_element(tau.t);
        let t_inv = p.h_element(p.h_inv(tau.t));
        let gm1 = p.sub(&p.add(p.h_element(g.h), &self.ambient(&g.x)), p.unity());
        let inner = p.multiply(&p.multiply(&p.multiply(&p.multiply(t, &a), &gm1), &b_inv), t_inv);
        let v = p.add(p.unity(), &inner);
        let h = p.h_by_prefix(&v).expect("R_τ preserves G");
        let x = p.sub(&v, p.h_element(h));
        GroupElement {
            h,
            x: x[p.j_start()..].to_vec(),
        }
    }

    /// `τ1 τ2 = (t1 t2, t2⁻¹ a1 t2 a2, t2⁻¹ b1 t2 b2)`.
    pub fn compose(&self, t1: &Tau, t2: &Tau) -> Tau {
        let p = &self.pres;
        let f = p.field();
        let twist = |u: &[FqValue], w: &[FqValue]| {
            // (1 + t2⁻¹ u t2)(1 + w) - 1
            let c = p.conjugation(p.h_inv(t2.t)).mul_vec(u, f);
            let cw = p.j_mul(&c, w);
            c.iter()
                .zip(w)
                .zip(&cw)
                .map(|((&x, &y), &z)| f.add(f.add(x, y), z))
                .collect::<Vec<_>>()
        };
        Tau {
            t: p.h_mul(t1.t, t2.t),
            a: twist(&t1.a, &t2.a),
            b: twist(&t1.b, &t2.b),
        }
    }
}

/// `x ∈ J` is regular iff every `c ∈ A` with `cx = xc = 0` lies in J.
/// In the zero algebra the only element is regular.
pub fn is_regular(pres: &Presentation, x: &[FqValue]) -> bool {
    let d = pres.dim();
    let xa = pres.embed_j(x);
    let cols: Vec<Vec<FqValue>> = (0..d)
        .map(|a| {
            let mut c = pres.zero();
            c[a] = FqValue::ONE;
            let mut col = pres.multiply(&c, &xa);
            col.extend(pres.multiply(&xa, &c));
            col
        })
        .collect();
    annihilator_inside_j(pres, FqMatrix::from_columns(2 * d, &cols))
}

/// Dual criterion: `c` annihilates `λ` when `λ(xc) = λ(cx) = 0` for all
/// `x ∈ J`.
pub fn is_regular_dual(pres: &Presentation, lambda: &[FqValue]) -> bool {
    let d = pres.dim();
    let dj = pres.dim_j();
    let js = pres.j_start();
    let f = pres.field();
    let eval = |v: &[FqValue]| {
        lambda
            .iter()
            .zip(&v[js..])
            .fold(FqValue::ZERO, |acc, (&l, &y)| f.add(acc, f.mul(l, y)))
    };
    let cols: Vec<Vec<FqValue>> = (0..d)
        .map(|a| {
            let mut c = pres.zero();
            c[a] = FqValue::ONE;
            let mut col = Vec::with_capacity(2 * dj);
            for i in 0..dj {
                let b = pres.embed_j(&unit(dj, i));
                col.push(eval(&pres.multiply(&b, &c)));
            }
            for i in 0..dj {
                let b = pres.embed_j(&unit(dj, i));
                col.push(eval(&pres.multiply(&c, &b)));
            }
            col
        })
        .collect();
    annihilator_inside_j(pres, FqMatrix::from_columns(2 * dj, &cols))
}

fn unit(n: usize, i: usize) -> Vec<FqValue> {
    let mut v = vec![FqValue::ZERO; n];
    v[i] = FqValue::ONE;
    v
}

fn annihilator_inside_j(pres: &Presentation, system: FqMatrix) -> bool {
    let js = pres.j_start();
    system
        .kernel_basis(pres.field())
        .iter()
        .all(|k| k[..js].iter().all(|v| v.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::{axb, ut3_2};

    fn v(xs: &[u32]) -> Vec<FqValue> {
        xs.iter().map(|&x| FqValue(x)).collect()
    }

    #[test]
    fn orbits_of_examples() {
        let p = Presentation::new(axb(3)).unwrap();
        let eng = OrbitEngine::new(p.clone(), 1 << 20).unwrap();
        assert_eq!(eng.orbit(0, Space::J, Generators::TILDE_G), vec![0]);
        assert_eq!(eng.orbit(1, Space::J, Generators::TILDE_G), vec![1, 2]);
        assert_eq!(eng.orbit(1, Space::Dual, Generators::TILDE_G), vec![1, 2]);
        // g x0 g⁻¹ = ζ x0 with ζ = 2
        let tau = Tau {
            t: 1,
            a: v(&[0]),
            b: v(&[0]),
        };
        assert_eq!(eng.act_j(&tau, &v(&[1])), v(&[2]));

        let u = Presentation::new(ut3_2()).unwrap();
        let eng = OrbitEngine::new(u.clone(), 1 << 20).unwrap();
        // basis e12, e13, e23: e13 is packed as 0b010
        assert_eq!(eng.orbit(2, Space::J, Generators::TILDE_G), vec![2]);
        assert!(is_regular(&u, &v(&[0, 1, 0])));
        assert!(!is_regular(&u, &v(&[0, 0, 0])));
        let part = eng.partition(Space::J, Generators::TILDE_G);
        assert_eq!(part.len(), 5);
        let dual = eng.partition(Space::Dual, Generators::TILDE_G);
        assert_eq!(dual.len(), 5);
    }

    #[test]
    fn actions_compose_and_dualize() {
        let p = Presentation::new(axb(5)).unwrap();
        let eng = OrbitEngine::new(p.clone(), 1 << 20).unwrap();
        let f = p.field().clone();
        let taus: Vec<Tau> = (0..4)
            .flat_map(|t| {
                (0..5).flat_map(move |a| {
                    (0..5).map(move |b| Tau {
                        t,
                        a: v(&[a]),
                        b: v(&[b]),
                    })
                })
            })
            .collect();
        for t1 in taus.iter().step_by(7) {
            for t2 in taus.iter().step_by(11) {
                let m12 = eng.act_matrix(&eng.compose(t1, t2));
                assert_eq!(m12, eng.act_matrix(t1).mul(&eng.act_matrix(t2), &f));
            }
            for x in 0..5 {
                for l in 0..5 {
                    let y = eng.act_j(t1, &v(&[x]));
                    let mu = eng.act_dual(t1, &v(&[l]));
                    assert_eq!(f.mul(mu[0], y[0]), f.mul(FqValue(l), FqValue(x)));
                }
            }
        }
        let g = crate::group::Group::new(p.clone(), 1000).unwrap();
        let one = g.identity();
        for t in &taus {
            assert_eq!(eng.act_g(t, &one), one);
            let h = GroupElement { h: 2, x: v(&[3]) };
            assert_eq!(eng.act_g(t, &h).h, 2);
        }
    }

    #[test]
    fn dual_regularity() {
        let p = Presentation::new(axb(3)).unwrap();
        assert!(is_regular_dual(&p, &v(&[1])));
        assert!(!is_regular_dual(&p, &v(&[0])));
        let u = Presentation::new(ut3_2()).unwrap();
        assert!(is_regular_dual(&u, &v(&[0, 1, 0])));
        // with H trivial every nonzero form is regular
        assert!(is_regular_dual(&u, &v(&[1, 0, 0])));
        assert!(!is_regular_dual(&u, &v(&[0, 0, 0])));
    }
}
