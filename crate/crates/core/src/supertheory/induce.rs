//! Supercharacters as characters induced from `ξ(h + x) = θ(h)ε^{λ(x)}` on
//! `G_λ = H(e)·(1 + J_{λ,right})`.

use num::integer::lcm;
use num::BigRational;
use rayon::prelude::*;

use super::{SupercharLabel, Theory};
use crate::error::{Error, Result};
use crate::exactlin::{CycloNumber, FqMatrix, FqValue};
use crate::group::GroupElement;

/// `G_λ` with its factorization `H(e) ⋉ (1 + J_{λ,right})`.
#[derive(Clone, Debug)]
pub struct StabilizerSubgroup {
    pub e: u64,
    pub h: Vec<usize>,
    /// `x ↦ (y ↦ λ(xy))` in J coordinates; its kernel is `J_{λ,right}`.
    pub right_form: FqMatrix,
    /// Basis of `J_{λ,right}`.
    pub j_right: Vec<Vec<FqValue>>,
    pub order: u64,
}

impl StabilizerSubgroup {
    pub fn contains(&self, theory: &Theory, g: &GroupElement) -> bool {
        let f = theory.presentation.field();
        self.h.contains(&g.h) && self.right_form.mul_vec(&g.x, f).iter().all(|v| v.is_zero())
    }

    /// All elements `h(1 + u)`, sorted by group index; checks that their
    /// number is `|H(e)|·q^{dim J_{λ,right}}`.
    pub fn elements(&self, theory: &Theory) -> Result<Vec<u64>> {
        let g = &theory.group;
        let f = theory.presentation.field();
        let q = f.q() as u64;
        let mut units = vec![vec![FqValue::ZERO; theory.presentation.dim_j()]];
        for b in &self.j_right {
            units = units
                .into_iter()
                .flat_map(|u| {
                    f.elements().map(move |c| {
                        u.iter()
                            .zip(b)
                            .map(|(&x, &y)| f.add(x, f.mul(c, y)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
        }
        let mut out: Vec<u64> = self
            .h
            .iter()
            .flat_map(|&h| {
                units.iter().map(move |u| {
                    let hg = GroupElement {
                        h,
                        x: vec![FqValue::ZERO; u.len()],
                    };
                    g.index(&g.mul(
                        &hg,
                        &GroupElement {
                            h: g.presentation().h_identity(),
                            x: u.clone(),
                        },
                    ))
                })
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        let want = self.h.len() as u64 * q.pow(self.j_right.len() as u32);
        if out.len() as u64 != want || want != self.order {
            return Err(Error::Inconsistent(format!(
                "G_λ has {} elements, factorization predicts {want}",
                out.len()
            )));
        }
        Ok(out)
    }
}

/// Cell matrix over the canonical label orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupercharacterTable {
    /// `values[a][b] = χ_a(K_b)`.
    pub values: Vec<Vec<CycloNumber>>,
    pub class_sizes: Vec<u64>,
    pub group_order: u64,
}

impl SupercharacterTable {
    pub fn degrees(&self) -> Vec<CycloNumber> {
        self.values.iter().map(|row| row[0].clone()).collect()
    }

    /// Structural equality, cell by cell.
    pub fn identical(&self, other: &Self) -> bool {
        self.class_sizes == other.class_sizes
            && self.values.len() == other.values.len()
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.identical(y)))
    }
}

/// Evaluates `ξ` and the induced character for one `(θ, λ)`.
#[derive(Clone, Debug)]
pub struct Inducer<'a> {
    theory: &'a Theory,
    alpha: &'a SupercharLabel,
    lambda: Vec<FqValue>,
    pub stabilizer: StabilizerSubgroup,
    /// Values are accumulated as powers of `ζ_L`.
    conductor: u32,
}

impl Theory {
    /// `G_λ` for an ambient form `λ` regular in the corner of `e`.
    pub fn stabilizer_subgroup(&self, e: u64, lambda: &[FqValue]) -> StabilizerSubgroup {
        let pres = &self.presentation;
        let f = pres.field();
        let dj = pres.dim_j();
        let unit = |i: usize| {
            let mut v = vec![FqValue::ZERO; dj];
            v[i] = FqValue::ONE;
            v
        };
        let eval = |v: &[FqValue]| {
            lambda
                .iter()
                .zip(v)
                .fold(FqValue::ZERO, |a, (&l, &x)| f.add(a, f.mul(l, x)))
        };
        let mut right_form = FqMatrix::zeros(dj, dj);
        for i in 0..dj {
            for j in 0..dj {
                right_form.set(j, i, eval(&pres.j_mul(&unit(i), &unit(j))));
            }
        }
        let j_right = right_form.kernel_basis(f);
        let h = self.strata.stratum(e).h_of_e.clone();
        let order = h.len() as u64 * (f.q() as u64).pow(j_right.len() as u32);
        StabilizerSubgroup {
            e,
            h,
            right_form,
            j_right,
            order,
        }
    }

    pub fn inducer<'a>(&'a self, alpha: &'a SupercharLabel, lambda: Vec<FqValue>) -> Inducer<'a> {
        let stabilizer = self.stabilizer_subgroup(alpha.e, &lambda);
        let conductor = lcm(self.presentation.field().p(), self.h_exponent(alpha.e));
        Inducer {
            theory: self,
            alpha,
            lambda,
            stabilizer,
            conductor,
        }
    }

    /// `χ_α` at every superclass representative, for the canonical `λ`.
    pub fn induce_supercharacter(&self, alpha: &SupercharLabel) -> Result<Vec<CycloNumber>> {
        let ind = self.inducer(alpha, self.lambda(alpha));
        self.superclasses
            .iter()
            .map(|k| ind.value(&k.representative, &self.conjugacy_class(&k.representative)))
            .collect()
    }

    pub fn build_table(&self) -> Result<SupercharacterTable> {
        let predicted = self.predicted_count();
        if self.alphas.len() != self.superclasses.len() || predicted != self.superclasses.len() as u64 {
            return Err(Error::Inconsistent(format!(
                "{} supercharacters, {} superclasses, count formula gives {predicted}",
                self.alphas.len(),
                self.superclasses.len()
            )));
        }
        let classes: Vec<Vec<u64>> = self.limits.install(|| {
            self.superclasses
                .par_iter()
                .map(|k| self.conjugacy_class(&k.representative))
                .collect()
        })?;
        let values = self.limits.install(|| {
            self.alphas
                .par_iter()
                .map(|alpha| {
                    let ind = self.inducer(alpha, self.lambda(alpha));
                    self.superclasses
                        .iter()
                        .zip(&classes)
                        .map(|(k, cl)| ind.value(&k.representative, cl))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()
        })??;
        Ok(SupercharacterTable {
            values,
            class_sizes: self.superclasses.iter().map(|k| k.size()).collect(),
            group_order: self.group.order(),
        })
    }
}

impl Inducer<'_> {
    /// `ξ(g)` as an exponent of `ζ_L`.
    fn xi_exponent(&self, g: &GroupElement) -> Result<u64> {
        if !self.stabilizer.contains(self.theory, g) {
            return Err(Error::NotInStabilizer);
        }
        let f = self.theory.presentation.field();
        let l = self.conductor as u64;
        let d = self.theory.h_exponent(self.alpha.e) as u64;
        let theta = self
            .theory
            .theta_exponent(self.alpha, g.h)
            .ok_or(Error::NotInStabilizer)?;
        let lx = self
            .lambda
            .iter()
            .zip(&g.x)
            .fold(FqValue::ZERO, |a, (&u, &v)| f.add(a, f.mul(u, v)));
        let tr = f.absolute_trace(lx) as u64;
        Ok((theta * (l / d) + tr * (l / f.p() as u64)) % l)
    }

    /// `ξ_{θ,λ}(g) = θ(h)ε^{λ(x)}`; fails off `G_λ`.
    pub fn xi(&self, g: &GroupElement) -> Result<CycloNumber> {
        Ok(CycloNumber::root_of_unity(self.conductor, self.xi_exponent(g)?))
    }

    /// `χ(g) = (|C_G(g)|/|G_λ|) Σ_{y ∈ cl(g) ∩ G_λ} ξ(y)`, which is the
    /// average of `ξ̇(sgs⁻¹)` over `s ∈ G` grouped by conjugates.
    pub fn value(&self, g: &GroupElement, class: &[u64]) -> Result<CycloNumber> {
        let group = &self.theory.group;
        debug_assert!(class.contains(&group.index(g)));
        let mut counts = vec![0i64; self.conductor as usize];
        for &y in class {
            let y = group.element(y);
            if self.stabilizer.contains(self.theory, &y) {
                counts[self.xi_exponent(&y)? as usize] += 1;
            }
        }
        let centralizer = group.order() / class.len() as u64;
        let scale = BigRational::new(centralizer.into(), self.stabilizer.order.into());
        Ok(CycloNumber::from_root_counts(self.conductor, &counts)
            .scale(&scale)
            .simplified())
    }
}
