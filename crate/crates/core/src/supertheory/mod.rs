//! The supercharacter theory of `G = H + J`: superclasses as orbits of
//! `g ↦ 1 + ta(g - 1)b⁻¹t⁻¹`, their labels `(e, h, ω)`, the supercharacter
//! labels `(e, θ, ω*)`, induced values and axiom verification.

mod induce;
mod verify;

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

pub use induce::{StabilizerSubgroup, SupercharacterTable};
pub use verify::{CheckResult, VerificationReport};

use crate::algebra::Presentation;
use crate::error::{Error, Result};
use crate::exactlin::{FqMatrix, FqValue};
use crate::group::{characters_of, AbelianStructure, Group, GroupElement, LinearCharacter, DEFAULT_MAX_GROUP_ORDER};
use crate::orbits::{Space, Strata};

/// Size bounds, parallelism and sampling seed for a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_group_order: u64,
    /// Above this `|G|`, constancy and refinement checks sample elements.
    pub full_scan_bound: u64,
    /// Worker threads; 0 uses the global rayon pool.
    pub threads: usize,
    pub seed: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_group_order: DEFAULT_MAX_GROUP_ORDER,
            full_scan_bound: 5000,
            threads: 0,
            seed: 0,
        }
    }
}

impl Limits {
    /// Runs `op` on a pool with the configured thread count.
    pub fn install<T: Send>(&self, op: impl FnOnce() -> T + Send) -> Result<T> {
        if self.threads == 0 {
            return Ok(op());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| Error::Inconsistent(format!("thread pool: {e}")))?;
        Ok(pool.install(op))
    }
}

/// `β = (e, h, ω)`; ordered by idempotent support, h index, then the
/// minimal ambient packing of `ω`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SuperclassLabel {
    pub e: u64,
    pub h: usize,
    pub omega_rep: u64,
}

#[derive(Clone, Debug)]
pub struct Superclass {
    pub label: SuperclassLabel,
    /// Sorted group indices.
    pub members: Vec<u64>,
    /// `h + y` with `y ∈ J_f` minimal, so `hy = yh = y`.
    pub representative: GroupElement,
    /// `f = 1 - e(h - 1)`, the largest idempotent fixed by h.
    pub f: u64,
}

impl Superclass {
    pub fn size(&self) -> u64 {
        self.members.len() as u64
    }
}

/// `α = (e, θ, ω*)`, with `ω*` given by its id in the stratum of `e` and
/// its minimal ambient packing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupercharLabel {
    pub e: u64,
    pub theta: LinearCharacter,
    pub omega_star_rep: u64,
    pub omega_star: usize,
}

/// Everything a table needs: the group, its strata, labelled superclasses
/// and the supercharacter labels.
#[derive(Debug)]
pub struct Theory {
    pub presentation: Arc<Presentation>,
    pub group: Group,
    pub strata: Strata,
    /// `H(e)` decompositions, indexed by support.
    pub h_structures: Vec<AbelianStructure>,
    pub superclasses: Vec<Superclass>,
    class_of: Vec<u32>,
    pub alphas: Vec<SupercharLabel>,
    pub limits: Limits,
}

impl Theory {
    pub fn new(pres: Arc<Presentation>, limits: Limits) -> Result<Self> {
        limits.install(|| Self::build(pres, limits))?
    }

    fn build(pres: Arc<Presentation>, limits: Limits) -> Result<Self> {
        let group = Group::new(pres.clone(), limits.max_group_order)?;
        let strata = Strata::build(pres.clone(), limits.max_group_order)?;
        let h_structures = strata
            .strata
            .iter()
            .map(|st| AbelianStructure::new(st.h_of_e.clone(), pres.h_identity(), |a, b| pres.h_mul(a, b)))
            .collect::<Result<Vec<_>>>()?;
        let superclasses = superclass_partition(&group, &strata)?;
        let mut class_of = vec![u32::MAX; group.order() as usize];
        for (i, k) in superclasses.iter().enumerate() {
            for &m in &k.members {
                class_of[m as usize] = i as u32;
            }
        }
        let mut alphas = Vec::new();
        for (mask, st) in strata.strata.iter().enumerate() {
            let omegas = st.regular_dual_orbits();
            for theta in characters_of(&h_structures[mask]) {
                for &w in &omegas {
                    alphas.push(SupercharLabel {
                        e: mask as u64,
                        theta: theta.clone(),
                        omega_star_rep: st.dual_ambient_rep[w],
                        omega_star: w,
                    });
                }
            }
        }
        Ok(Theory {
            presentation: pres,
            group,
            strata,
            h_structures,
            superclasses,
            class_of,
            alphas,
            limits,
        })
    }

    pub fn superclass_of(&self, index: u64) -> usize {
        self.class_of[index as usize] as usize
    }

    /// `Σ_e |H(e)|·n_E(J_e)`, the predicted number of superclasses.
    pub fn predicted_count(&self) -> u64 {
        self.strata
            .strata
            .iter()
            .map(|st| st.h_of_e.len() as u64 * st.regular_count() as u64)
            .sum()
    }

    /// `θ(h)` as an exponent of `ζ_D`, `D` the exponent of `H(e)`; `None`
    /// when `h ∉ H(e)`.
    pub fn theta_exponent(&self, alpha: &SupercharLabel, h: usize) -> Option<u64> {
        alpha.theta.exponent_at(&self.h_structures[alpha.e as usize], h)
    }

    pub fn h_exponent(&self, e: u64) -> u32 {
        self.h_structures[e as usize].exponent()
    }

    /// The ambient form of the `k`-th member of `ω*`, counting in corner
    /// packing order and wrapping around.
    pub fn omega_star_member(&self, alpha: &SupercharLabel, k: usize) -> Vec<FqValue> {
        let st = self.strata.stratum(alpha.e);
        let orbit = st.dual_orbits.orbit(alpha.omega_star);
        st.ambient_dual(orbit[k % orbit.len()])
    }

    /// The canonical `λ ∈ ω*`, whose ambient packing is `omega_star_rep`.
    pub fn lambda(&self, alpha: &SupercharLabel) -> Vec<FqValue> {
        self.strata.packer().unpack(alpha.omega_star_rep)
    }

    /// The conjugacy class of a group element, as sorted indices.
    pub fn conjugacy_class(&self, g: &GroupElement) -> Vec<u64> {
        let mut out: BTreeSet<u64> = BTreeSet::new();
        for s in 0..self.group.order() {
            let s = self.group.element(s);
            out.insert(self.group.index(&self.group.conjugate(&s, g)));
        }
        out.into_iter().collect()
    }

    /// `f = 1 - e(h - 1)` for an H index.
    pub fn fixed_idempotent(&self, h: usize) -> Result<u64> {
        fixed_idempotent(&self.presentation, &self.strata, h)
    }
}

fn fixed_idempotent(pres: &Presentation, strata: &Strata, h: usize) -> Result<u64> {
    let s = pres.sub(pres.h_element(h), pres.unity());
    let assoc = pres.associated_idempotent(&s)?;
    Ok(strata.full_mask() & !assoc.idempotent.support)
}

/// The affine generators `x ↦ Mx + v` of the `G̃` action on the coset
/// `h + J`, in J coordinates: left and right multiplication of `g - 1`
/// by `1 + c b_j`, then conjugation by H.
fn coset_maps(pres: &Presentation, h: usize) -> Vec<(FqMatrix, Vec<FqValue>)> {
    let f = pres.field();
    let dj = pres.dim_j();
    let js = pres.j_start();
    let s = pres.sub(pres.h_element(h), pres.unity());
    let id = FqMatrix::identity(dj);
    let mut left = Vec::new();
    let mut right = Vec::new();
    for j in 0..dj {
        let mut b = vec![FqValue::ZERO; dj];
        b[j] = FqValue::ONE;
        let b = pres.embed_j(&b);
        let bs = pres.multiply(&b, &s)[js..].to_vec();
        let sb = pres.multiply(&s, &b)[js..].to_vec();
        for c in f.nonzero_elements() {
            let scale = |v: &[FqValue]| v.iter().map(|&x| f.mul(c, x)).collect::<Vec<_>>();
            left.push((id.add(&pres.left_j(j).scale(c, f), f), scale(&bs)));
            right.push((id.add(&pres.right_j(j).scale(c, f), f), scale(&sb)));
        }
    }
    let conj = (0..pres.h_order()).map(|t| (pres.conjugation(t).clone(), vec![FqValue::ZERO; dj]));
    left.into_iter().chain(right).chain(conj).collect()
}

/// Orbits of the coset `h + J`, as sorted lists of J packings.
fn coset_orbits(group: &Group, h: usize) -> Vec<Vec<u64>> {
    let pres = group.presentation();
    let f = pres.field();
    let packer = group.packer();
    let maps = coset_maps(pres, h);
    let mut seen = vec![false; packer.size() as usize];
    let mut orbits = Vec::new();
    let mut buf = vec![FqValue::ZERO; packer.dim()];
    let mut out = vec![FqValue::ZERO; packer.dim()];
    for seed in 0..packer.size() {
        if seen[seed as usize] {
            continue;
        }
        seen[seed as usize] = true;
        let mut members = vec![seed];
        let mut queue = VecDeque::from([seed]);
        while let Some(code) = queue.pop_front() {
            packer.unpack_into(code, &mut buf);
            for (m, v) in &maps {
                m.mul_vec_into(&buf, &mut out, f);
                for (o, &t) in out.iter_mut().zip(v) {
                    *o = f.add(*o, t);
                }
                let next = packer.pack(&out);
                if !seen[next as usize] {
                    seen[next as usize] = true;
                    members.push(next);
                    queue.push_back(next);
                }
            }
        }
        members.sort_unstable();
        orbits.push(members);
    }
    orbits
}

/// Partitions G into superclasses and labels each by `(e, h, ω)`: the
/// members `h + y` with `y ∈ J_f` form one `G̃_f`-orbit, which localizes
/// to a regular `G̃_e`-orbit `ω` with `h ∈ H(e)`.
pub fn superclass_partition(group: &Group, strata: &Strata) -> Result<Vec<Superclass>> {
    let pres = group.presentation();
    let size = group.packer().size();
    let per_h: Vec<Result<Vec<Superclass>>> = (0..pres.h_order())
        .into_par_iter()
        .map(|h| {
            let f = fixed_idempotent(pres, strata, h)?;
            let sf = strata.stratum(f);
            coset_orbits(group, h)
                .into_iter()
                .map(|codes| {
                    let ys: Vec<u64> = codes
                        .iter()
                        .copied()
                        .filter(|&c| sf.corner.contains(&group.packer().unpack(c)))
                        .collect();
                    if ys.is_empty() {
                        return Err(Error::LocalizationFailed(format!(
                            "superclass in coset {h} has no member h + y with y in J_f"
                        )));
                    }
                    let local: BTreeSet<u64> = ys
                        .iter()
                        .map(|&c| sf.packer().pack(&sf.corner.project(&group.packer().unpack(c))))
                        .collect();
                    let first = *local.iter().next().unwrap();
                    if !sf
                        .j_orbits
                        .orbit(sf.j_orbits.id_of(first))
                        .iter()
                        .copied()
                        .eq(local.iter().copied())
                    {
                        return Err(Error::LocalizationFailed(format!(
                            "members of a superclass in coset {h} lying in J_f are not one orbit"
                        )));
                    }
                    let loc = strata.localize(Space::J, f, &ys)?;
                    let se = strata.stratum(loc.e);
                    if !se.h_of_e.contains(&h) {
                        return Err(Error::LocalizationFailed(format!(
                            "h = {h} is not in H(e) for e = {:#b}",
                            loc.e
                        )));
                    }
                    Ok(Superclass {
                        label: SuperclassLabel {
                            e: loc.e,
                            h,
                            omega_rep: se.j_ambient_rep[loc.orbit],
                        },
                        members: codes.iter().map(|&c| h as u64 * size + c).collect(),
                        representative: GroupElement {
                            h,
                            x: group.packer().unpack(ys[0]),
                        },
                        f,
                    })
                })
                .collect()
        })
        .collect();
    let mut all = Vec::new();
    for r in per_h {
        all.extend(r?);
    }
    all.sort_by_key(|k| k.label);
    if let Some(w) = all.windows(2).find(|w| w[0].label == w[1].label) {
        return Err(Error::Inconsistent(format!(
            "two superclasses share the label {:?}",
            w[0].label
        )));
    }
    Ok(all)
}
