//! Orbit-sum formulas for supercharacter values, checked against the
//! induced characters.
//!
//! For `g = h + x` with `hx = xh = x`, let `f = 1 - e(h - 1)`. Then
//! `χ_α(g) = |H_e| θ̇(h) / n(Ω*) · Σ_{μ ∈ Ω*} ε^{μ(x)}` where `Ω*` is the
//! `G̃_f`-orbit of `λ` in `J_f*` and `n(Ω*)` counts its right `N_f`-orbits,
//! and equivalently
//! `χ_α(g) = |H_e| |λN_f| θ̇(h) / |G̃_f x| · Σ_{y ∈ G̃_f x} ε^{λ(y)}`.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use num::integer::lcm;
use num::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{CycloNumber, FieldDescriptor, FqValue};
use crate::group::GroupElement;
use crate::orbits::{Generators, Space};
use crate::supertheory::{SupercharLabel, SupercharacterTable, Theory};

#[derive(Debug)]
struct ExtensionOrbit {
    /// Members of `Ω*` as ambient forms.
    members: Vec<Vec<FqValue>>,
    right_orbits: u64,
}

/// Evaluates both formulas; caches `Ω*` per `(λ, f)`.
#[derive(Debug)]
pub struct Kirillov<'a> {
    theory: &'a Theory,
    memo: Mutex<HashMap<(u64, u64), Arc<ExtensionOrbit>>>,
}

fn pair(f: &FieldDescriptor, a: &[FqValue], b: &[FqValue]) -> FqValue {
    a.iter()
        .zip(b)
        .fold(FqValue::ZERO, |acc, (&u, &v)| f.add(acc, f.mul(u, v)))
}

/// `Σ ε^{t}` over the listed field values, as root counts mod `l`.
fn accumulate(f: &FieldDescriptor, l: u32, counts: &mut [i64], values: impl Iterator<Item = FqValue>) {
    let step = (l / f.p()) as u64;
    for t in values {
        counts[((f.absolute_trace(t) as u64 * step) % l as u64) as usize] += 1;
    }
}

fn scaled(l: u32, counts: &[i64], num: u64, den: u64, what: &str) -> Result<CycloNumber> {
    let v = CycloNumber::from_root_counts(l, counts).scale(&BigRational::new(num.into(), den.into()));
    if !v.is_integral() {
        return Err(Error::NonIntegral(format!("{what}: {v}")));
    }
    Ok(v.simplified())
}

impl<'a> Kirillov<'a> {
    pub fn new(theory: &'a Theory) -> Self {
        Kirillov {
            theory,
            memo: Mutex::new(HashMap::new()),
        }
    }

    fn check_normal_form(&self, g: &GroupElement) -> Result<()> {
        let p = &self.theory.presentation;
        let f = p.field();
        if p.h_left(g.h).mul_vec(&g.x, f) != g.x || p.h_right(g.h).mul_vec(&g.x, f) != g.x {
            return Err(Error::BadRepresentative(format!(
                "h = {}, x = {:?} has hx != x or xh != x",
                g.h, g.x
            )));
        }
        Ok(())
    }

    /// `(θ̇(h) as a power of ζ_D, f)`, or `None` when `h ∉ H(e)`.
    fn setup(&self, alpha: &SupercharLabel, g: &GroupElement) -> Result<Option<(u64, u64)>> {
        self.check_normal_form(g)?;
        let Some(theta) = self.theory.theta_exponent(alpha, g.h) else {
            return Ok(None);
        };
        let f = self.theory.fixed_idempotent(g.h)?;
        if alpha.e & !f != 0 {
            return Err(Error::Inconsistent(format!(
                "e = {:#b} is not below f = {f:#b}",
                alpha.e
            )));
        }
        Ok(Some((theta, f)))
    }

    fn conductor(&self, alpha: &SupercharLabel) -> u32 {
        lcm(self.theory.presentation.field().p(), self.theory.h_exponent(alpha.e))
    }

    /// `|H_e| = |H| / |H(e)|`.
    fn h_e(&self, alpha: &SupercharLabel) -> u64 {
        let st = self.theory.strata.stratum(alpha.e);
        (self.theory.presentation.h_order() / st.h_of_e.len()) as u64
    }

    fn extension_orbit(&self, alpha: &SupercharLabel, f: u64) -> Result<Arc<ExtensionOrbit>> {
        let key = (alpha.omega_star_rep, f);
        if let Some(hit) = self.memo.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let strata = &self.theory.strata;
        let sf = strata.stratum(f);
        let se = strata.stratum(alpha.e);
        let lambda = self.theory.lambda(alpha);
        let seed = sf.packer().pack(&sf.corner.restrict_dual(&lambda));
        let omega = sf.dual_orbits.orbit(sf.dual_orbits.id_of(seed));

        let mut covered = BTreeSet::new();
        let mut right_orbits = 0;
        for &m in omega {
            if covered.insert(m) {
                right_orbits += 1;
                covered.extend(sf.engine.orbit(m, Space::Dual, Generators::RIGHT));
            }
        }
        let members: Vec<Vec<FqValue>> = omega.iter().map(|&m| sf.ambient_dual(m)).collect();
        let meet: BTreeSet<u64> = members
            .iter()
            .filter(|mu| se.corner.contains_dual(mu))
            .map(|mu| se.packer().pack(&se.corner.restrict_dual(mu)))
            .collect();
        if !se
            .dual_orbits
            .orbit(alpha.omega_star)
            .iter()
            .copied()
            .eq(meet.iter().copied())
        {
            return Err(Error::Inconsistent(format!(
                "the orbit of lambda in J_f* for f = {f:#b} does not meet J_e* in omega*"
            )));
        }
        let data = Arc::new(ExtensionOrbit { members, right_orbits });
        self.memo.lock().unwrap().insert(key, data.clone());
        Ok(data)
    }

    /// `|H_e| θ̇(h) / n(Ω*) · Σ_{μ ∈ Ω*} ε^{μ(x)}`.
    pub fn value(&self, alpha: &SupercharLabel, g: &GroupElement) -> Result<CycloNumber> {
        let Some((theta, f)) = self.setup(alpha, g)? else {
            return Ok(CycloNumber::zero(1));
        };
        let field = self.theory.presentation.field();
        let omega = self.extension_orbit(alpha, f)?;
        let l = self.conductor(alpha);
        let mut counts = vec![0i64; l as usize];
        accumulate(
            field,
            l,
            &mut counts,
            omega.members.iter().map(|mu| pair(field, mu, &g.x)),
        );
        rotate(&mut counts, theta * (l / self.theory.h_exponent(alpha.e)) as u64);
        scaled(
            l,
            &counts,
            self.h_e(alpha),
            omega.right_orbits,
            "orbit sum over n(Omega*)",
        )
    }

    /// `|H_e| |λN_f| θ̇(h) / |G̃_f x| · Σ_{y ∈ G̃_f x} ε^{λ(y)}`.
    pub fn value_v2(&self, alpha: &SupercharLabel, g: &GroupElement) -> Result<CycloNumber> {
        let Some((theta, f)) = self.setup(alpha, g)? else {
            return Ok(CycloNumber::zero(1));
        };
        let field = self.theory.presentation.field();
        let sf = self.theory.strata.stratum(f);
        let lambda = self.theory.lambda(alpha);
        let lf = sf.packer().pack(&sf.corner.restrict_dual(&lambda));
        let right = sf.engine.orbit(lf, Space::Dual, Generators::RIGHT).len() as u64;
        let xf = sf.packer().pack(&sf.corner.project(&g.x));
        let orbit = sf.j_orbits.orbit(sf.j_orbits.id_of(xf));
        let l = self.conductor(alpha);
        let mut counts = vec![0i64; l as usize];
        accumulate(
            field,
            l,
            &mut counts,
            orbit.iter().map(|&y| pair(field, &lambda, &sf.ambient_j(y))),
        );
        rotate(&mut counts, theta * (l / self.theory.h_exponent(alpha.e)) as u64);
        scaled(
            l,
            &counts,
            self.h_e(alpha) * right,
            orbit.len() as u64,
            "orbit sum over |orbit(x)|",
        )
    }

    /// Algebra-group values at `1 + x`: `(1/n(λ)) Σ_{μ ∈ NλN} ε^{μ(x)}` and
    /// `(|λN|/|NxN|) Σ_{y ∈ NxN} ε^{λ(y)}`, required to agree.
    pub fn di_value(&self, lambda: &[FqValue], x: &[FqValue]) -> Result<CycloNumber> {
        let pres = &self.theory.presentation;
        if pres.h_order() != 1 {
            return Err(Error::Inconsistent("di_value needs H = {1}".into()));
        }
        let field = pres.field();
        let whole = self.theory.strata.whole();
        let packer = whole.packer();
        let eng = &whole.engine;
        let p = field.p();

        let two_sided = eng.orbit(packer.pack(lambda), Space::Dual, Generators::TWO_SIDED);
        let mut covered = BTreeSet::new();
        let mut n_lambda = 0;
        for &m in &two_sided {
            if covered.insert(m) {
                n_lambda += 1;
                covered.extend(eng.orbit(m, Space::Dual, Generators::RIGHT));
            }
        }
        let mut counts = vec![0i64; p as usize];
        accumulate(
            field,
            p,
            &mut counts,
            two_sided.iter().map(|&m| pair(field, &packer.unpack(m), x)),
        );
        let first = scaled(p, &counts, 1, n_lambda, "orbit sum over n(lambda)")?;

        let right = eng.orbit(packer.pack(lambda), Space::Dual, Generators::RIGHT).len() as u64;
        let gxg = eng.orbit(packer.pack(x), Space::J, Generators::TWO_SIDED);
        let mut counts = vec![0i64; p as usize];
        accumulate(
            field,
            p,
            &mut counts,
            gxg.iter().map(|&y| pair(field, lambda, &packer.unpack(y))),
        );
        let second = scaled(p, &counts, right, gxg.len() as u64, "orbit sum over |NxN|")?;
        if first != second {
            return Err(Error::Mismatch(format!(
                "algebra-group formulas disagree: {first} vs {second}"
            )));
        }
        Ok(first)
    }
}

fn rotate(counts: &mut [i64], k: u64) {
    let n = counts.len();
    counts.rotate_right((k % n as u64) as usize);
}

/// One disagreeing cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub alpha: usize,
    pub beta: usize,
    pub induced: String,
    pub kirillov: String,
    pub kirillov_v2: String,
    pub algebra_group: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CrossReport {
    pub cells: usize,
    /// Cells also checked against the algebra-group formulas (`H = {1}`).
    pub algebra_group_cells: usize,
    pub mismatches: Vec<Mismatch>,
}

impl CrossReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares both formulas, and for `H = {1}` the algebra-group formulas,
/// with the induced table at every superclass representative.
pub fn cross_validate(theory: &Theory, table: &SupercharacterTable) -> Result<CrossReport> {
    let kir = Kirillov::new(theory);
    let algebra_group = theory.presentation.h_order() == 1;
    let rows = theory.limits.install(|| {
        theory
            .alphas
            .par_iter()
            .enumerate()
            .map(|(a, alpha)| -> Result<Vec<Mismatch>> {
                let mut bad = Vec::new();
                for (b, k) in theory.superclasses.iter().enumerate() {
                    let g = &k.representative;
                    let induced = &table.values[a][b];
                    let v1 = kir.value(alpha, g)?;
                    let v2 = kir.value_v2(alpha, g)?;
                    let di = if algebra_group {
                        Some(kir.di_value(&theory.lambda(alpha), &g.x)?)
                    } else {
                        None
                    };
                    if v1 != *induced || v2 != *induced || di.as_ref().is_some_and(|d| d != induced) {
                        bad.push(Mismatch {
                            alpha: a,
                            beta: b,
                            induced: induced.to_string(),
                            kirillov: v1.to_string(),
                            kirillov_v2: v2.to_string(),
                            algebra_group: di.map(|d| d.to_string()),
                        });
                    }
                }
                Ok(bad)
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let cells = theory.alphas.len() * theory.superclasses.len();
    Ok(CrossReport {
        cells,
        algebra_group_cells: if algebra_group { cells } else { 0 },
        mismatches: rows.into_iter().flatten().collect(),
    })
}
