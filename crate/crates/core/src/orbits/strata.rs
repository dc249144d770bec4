//! Per-idempotent orbit data: for every `e` in the lattice, the corner
//! `A_e`, its `G̃_e`-orbits on `J_e` and `J_e*`, and their regularity.

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;

use super::{is_regular, is_regular_dual, Generators, OrbitEngine, OrbitRecord, Partition, Space};
use crate::algebra::{Corner, IdempotentRecord, Presentation};
use crate::error::{Error, Result};
use crate::exactlin::{FqValue, VectorPacker};

#[derive(Debug)]
pub struct Stratum {
    pub corner: Corner,
    pub engine: OrbitEngine,
    pub j_orbits: Partition,
    pub j_regular: Vec<bool>,
    /// Smallest ambient packing of each J_e orbit's members.
    pub j_ambient_rep: Vec<u64>,
    pub dual_orbits: Partition,
    pub dual_regular: Vec<bool>,
    pub dual_ambient_rep: Vec<u64>,
    /// `H(e)` as ascending ambient H indices.
    pub h_of_e: Vec<usize>,
}

impl Stratum {
    fn build(pres: &Presentation, e: &IdempotentRecord, ambient: &VectorPacker, max_points: u64) -> Result<Self> {
        let corner = pres.corner(e)?;
        let engine = OrbitEngine::new(corner.presentation.clone(), max_points)?;
        let cp = corner.presentation.clone();
        let j_orbits = engine.partition(Space::J, Generators::TILDE_G);
        let dual_orbits = engine.partition(Space::Dual, Generators::TILDE_G);
        let packer = *engine.packer();
        let j_regular = (0..j_orbits.len())
            .map(|i| is_regular(&cp, &packer.unpack(j_orbits.representative(i))))
            .collect();
        let dual_regular = (0..dual_orbits.len())
            .map(|i| is_regular_dual(&cp, &packer.unpack(dual_orbits.representative(i))))
            .collect();
        let j_ambient_rep = j_orbits
            .orbits()
            .iter()
            .map(|o| {
                o.iter()
                    .map(|&c| ambient.pack(&corner.include(&packer.unpack(c))))
                    .min()
                    .unwrap()
            })
            .collect();
        let dual_ambient_rep = dual_orbits
            .orbits()
            .iter()
            .map(|o| {
                o.iter()
                    .map(|&c| ambient.pack(&corner.embed_dual(&packer.unpack(c))))
                    .min()
                    .unwrap()
            })
            .collect();
        let h_of_e = (0..pres.h_order())
            .filter(|&h| pres.multiply(pres.h_element(h), &e.element) == e.element)
            .collect();
        Ok(Stratum {
            corner,
            engine,
            j_orbits,
            j_regular,
            j_ambient_rep,
            dual_orbits,
            dual_regular,
            dual_ambient_rep,
            h_of_e,
        })
    }

    pub fn support(&self) -> u64 {
        self.corner.support()
    }

    pub fn packer(&self) -> &VectorPacker {
        self.engine.packer()
    }

    /// `n(J_e)`, all `G̃_e`-orbits on `J_e`.
    pub fn orbit_count(&self) -> usize {
        self.j_orbits.len()
    }

    /// `n_E(J_e)`.
    pub fn regular_count(&self) -> usize {
        self.j_regular.iter().filter(|&&r| r).count()
    }

    /// `n_E(J_e*)`.
    pub fn regular_dual_count(&self) -> usize {
        self.dual_regular.iter().filter(|&&r| r).count()
    }

    /// Regular dual orbit ids, ordered by ambient representative.
    pub fn regular_dual_orbits(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = (0..self.dual_orbits.len()).filter(|&i| self.dual_regular[i]).collect();
        ids.sort_by_key(|&i| self.dual_ambient_rep[i]);
        ids
    }

    /// Ambient J coordinates of a packed J_e vector.
    pub fn ambient_j(&self, code: u64) -> Vec<FqValue> {
        self.corner.include(&self.packer().unpack(code))
    }

    /// Ambient form of a packed form on J_e.
    pub fn ambient_dual(&self, code: u64) -> Vec<FqValue> {
        self.corner.embed_dual(&self.packer().unpack(code))
    }

    pub fn record(&self, space: Space, id: usize) -> OrbitRecord {
        let (part, regular) = match space {
            Space::J => (&self.j_orbits, &self.j_regular),
            Space::Dual => (&self.dual_orbits, &self.dual_regular),
            Space::G => panic!("strata hold J and J* orbits only"),
        };
        OrbitRecord {
            space,
            idempotent: self.support(),
            members: part.orbit(id).to_vec(),
            representative: part.representative(id),
            regular: Some(regular[id]),
        }
    }
}

/// Result of localizing an orbit to its minimal idempotent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Localization {
    pub e: u64,
    /// Orbit id in the stratum of `e`.
    pub orbit: usize,
    /// The intersection with `J_e` (or `J_e*`), ambient packed and sorted.
    pub members: Vec<u64>,
}

#[derive(Debug)]
pub struct Strata {
    pub presentation: Arc<Presentation>,
    pub lattice: Vec<IdempotentRecord>,
    pub strata: Vec<Stratum>,
    packer: VectorPacker,
}

impl Strata {
    /// Builds every stratum; runs on the current rayon pool.
    pub fn build(pres: Arc<Presentation>, max_points: u64) -> Result<Self> {
        let lattice = pres.idempotent_lattice()?;
        let packer = VectorPacker::new(pres.field().q(), pres.dim_j(), max_points)?;
        let strata = lattice
            .par_iter()
            .map(|e| Stratum::build(&pres, e, &packer, max_points))
            .collect::<Result<Vec<_>>>()?;
        Ok(Strata {
            presentation: pres,
            lattice,
            strata,
            packer,
        })
    }

    pub fn packer(&self) -> &VectorPacker {
        &self.packer
    }

    pub fn full_mask(&self) -> u64 {
        self.lattice.len() as u64 - 1
    }

    pub fn stratum(&self, mask: u64) -> &Stratum {
        &self.strata[mask as usize]
    }

    /// The stratum of `e = 1`, whose J coordinates are the ambient ones.
    pub fn whole(&self) -> &Stratum {
        self.stratum(self.full_mask())
    }

    /// `Σ_{f ≤ e} (-1)^{l(f)} n(J_f)`, `l` counted inside `kH_e`.
    pub fn inclusion_exclusion(&self, e: u64) -> i64 {
        submasks(e)
            .map(|f| {
                let sign = if (e.count_ones() - f.count_ones()).is_multiple_of(2) {
                    1
                } else {
                    -1
                };
                sign * self.stratum(f).orbit_count() as i64
            })
            .sum()
    }

    fn contains(&self, space: Space, e: u64, v: &[FqValue]) -> bool {
        let c = &self.stratum(e).corner;
        match space {
            Space::J => c.contains(v),
            Space::Dual => c.contains_dual(v),
            Space::G => unreachable!(),
        }
    }

    /// Finds the minimal `e ≤ f` whose corner meets the orbit, and checks
    /// that the intersection is a single regular `G̃_e`-orbit.
    pub fn localize(&self, space: Space, f: u64, members: &[u64]) -> Result<Localization> {
        let vectors: Vec<Vec<FqValue>> = members.iter().map(|&m| self.packer.unpack(m)).collect();
        let mut meet = f;
        for e in submasks(f) {
            if vectors.iter().any(|v| self.contains(space, e, v)) {
                meet &= e;
            }
        }
        let st = self.stratum(meet);
        let inside: Vec<usize> = (0..vectors.len())
            .filter(|&i| self.contains(space, meet, &vectors[i]))
            .collect();
        if inside.is_empty() {
            return Err(Error::LocalizationFailed(format!(
                "orbit misses the corner of the meet {meet:#b} of the idempotents it meets"
            )));
        }
        let local: BTreeSet<u64> = inside
            .iter()
            .map(|&i| {
                let v = &vectors[i];
                let y = match space {
                    Space::J => st.corner.project(v),
                    _ => st.corner.restrict_dual(v),
                };
                st.packer().pack(&y)
            })
            .collect();
        let first = *local.iter().next().unwrap();
        let (part, regular) = match space {
            Space::J => (&st.j_orbits, &st.j_regular),
            _ => (&st.dual_orbits, &st.dual_regular),
        };
        let id = part.id_of(first);
        if !part.orbit(id).iter().copied().eq(local.iter().copied()) {
            return Err(Error::LocalizationFailed(format!(
                "intersection with the corner of {meet:#b} is not a single orbit"
            )));
        }
        if !regular[id] {
            return Err(Error::LocalizationFailed(format!(
                "intersection with the corner of {meet:#b} is singular"
            )));
        }
        Ok(Localization {
            e: meet,
            orbit: id,
            members: inside.iter().map(|&i| members[i]).collect(),
        })
    }

    /// Every member of every orbit has its orbit's regularity flag.
    pub fn check_regularity_invariance(&self) -> Result<()> {
        for st in &self.strata {
            let cp = &st.corner.presentation;
            for (space, part, flags) in [
                (Space::J, &st.j_orbits, &st.j_regular),
                (Space::Dual, &st.dual_orbits, &st.dual_regular),
            ] {
                for (id, orbit) in part.orbits().iter().enumerate() {
                    for &m in orbit {
                        let v = st.packer().unpack(m);
                        let r = match space {
                            Space::J => is_regular(cp, &v),
                            _ => is_regular_dual(cp, &v),
                        };
                        if r != flags[id] {
                            return Err(Error::Inconsistent(format!(
                                "{space:?} orbit {id} of stratum {:#b} mixes regular and singular members",
                                st.support()
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Ambient orbits meeting both `J_e` and `J_f` are exactly those
    /// meeting `J_{ef}`.
    pub fn check_intersection_law(&self) -> Result<()> {
        let whole = self.whole();
        let meeting = |e: u64| -> BTreeSet<usize> {
            let st = self.stratum(e);
            (0..st.packer().size())
                .map(|c| whole.j_orbits.id_of(self.packer.pack(&st.ambient_j(c))))
                .collect()
        };
        let sets: Vec<BTreeSet<usize>> = (0..self.lattice.len() as u64).map(meeting).collect();
        for e in 0..sets.len() {
            for f in 0..sets.len() {
                let both: BTreeSet<usize> = sets[e].intersection(&sets[f]).copied().collect();
                if both != sets[e & f] {
                    return Err(Error::Inconsistent(format!(
                        "orbits meeting J_e and J_f differ from those meeting J_ef for e={e:#b}, f={f:#b}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// All submasks of `m`, ascending.
pub fn submasks(m: u64) -> impl Iterator<Item = u64> {
    (0..=m).filter(move |s| s & !m == 0)
}
