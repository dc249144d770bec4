//! Exact verification of the supercharacter theory axioms on a built table.

use std::collections::BTreeSet;

use num::BigRational;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{SupercharacterTable, Theory};
use crate::error::Result;
use crate::exactlin::CycloNumber;

/// Members sampled per superclass when `|G|` exceeds the full-scan bound.
const SAMPLES_PER_CLASS: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
    /// Whether constancy and refinement covered every element.
    pub full_scan: bool,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }

    fn push(&mut self, id: &'static str, name: &'static str, witness: Option<String>) {
        self.checks.push(CheckResult {
            id,
            name,
            passed: witness.is_none(),
            witness,
        });
    }
}

impl SupercharacterTable {
    /// `⟨χ_a, χ_b⟩ = (1/|G|) Σ_β |K_β| χ_a(β) conj(χ_b(β))`.
    pub fn inner_product(&self, a: usize, b: usize) -> CycloNumber {
        let mut sum = CycloNumber::zero(1);
        for (k, &size) in self.class_sizes.iter().enumerate() {
            let term = &self.values[a][k] * &self.values[b][k].conjugate();
            sum = &sum + &term.scale(&BigRational::from_integer(size.into()));
        }
        sum.scale(&BigRational::new(1.into(), self.group_order.into()))
            .simplified()
    }
}

impl Theory {
    /// All conjugacy classes, each sorted, ordered by minimal member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<u64>> {
        let mut assigned = vec![false; self.group.order() as usize];
        let mut out = Vec::new();
        for i in 0..self.group.order() {
            if assigned[i as usize] {
                continue;
            }
            let cl = self.conjugacy_class(&self.group.element(i));
            for &m in &cl {
                assigned[m as usize] = true;
            }
            out.push(cl);
        }
        out
    }

    /// Conjugacy classes of a seeded sample of each superclass.
    fn sampled_classes(&self) -> Vec<Vec<u64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.limits.seed);
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for k in &self.superclasses {
            let picks: Vec<u64> = k
                .members
                .choose_multiple(&mut rng, SAMPLES_PER_CLASS)
                .copied()
                .collect();
            for g in picks {
                if seen.contains(&g) {
                    continue;
                }
                let cl = self.conjugacy_class(&self.group.element(g));
                seen.extend(cl.iter().copied());
                out.push(cl);
            }
        }
        out
    }

    /// Checks (a) counts, (b) constancy on every element, (c) `{1}` is a
    /// superclass, (d) disjointness, (e) the regular-character identity,
    /// (f) superclasses are unions of conjugacy classes, (g) sizes add up.
    pub fn verify_theory(&self, table: &SupercharacterTable) -> Result<VerificationReport> {
        let mut report = VerificationReport {
            full_scan: self.group.order() <= self.limits.full_scan_bound,
            ..Default::default()
        };
        let n_alpha = self.alphas.len();
        let n_beta = self.superclasses.len();
        let predicted = self.predicted_count();
        report.push(
            "a",
            "|A| = |B| = sum |H(e)| n_E(J_e)",
            (n_alpha != n_beta || predicted != n_beta as u64)
                .then(|| format!("|A| = {n_alpha}, |B| = {n_beta}, formula {predicted}")),
        );

        let classes = if report.full_scan {
            self.conjugacy_classes()
        } else {
            self.sampled_classes()
        };
        let constancy: Vec<Option<String>> = self.limits.install(|| {
            self.alphas
                .par_iter()
                .enumerate()
                .map(|(a, alpha)| -> Result<Option<String>> {
                    let ind = self.inducer(alpha, self.lambda(alpha));
                    for cl in &classes {
                        let g = self.group.element(cl[0]);
                        let b = self.superclass_of(cl[0]);
                        let v = ind.value(&g, cl)?;
                        if v != table.values[a][b] {
                            return Ok(Some(format!(
                                "alpha {a} is {v} at element {} but {} on superclass {b}",
                                cl[0], table.values[a][b]
                            )));
                        }
                    }
                    Ok(None)
                })
                .collect::<Result<Vec<_>>>()
        })??;
        report.push(
            "b",
            "supercharacters are constant on superclasses",
            constancy.into_iter().flatten().next(),
        );

        let one = self.group.index(&self.group.identity());
        let k1 = &self.superclasses[self.superclass_of(one)];
        report.push(
            "c",
            "{1} is a superclass",
            (k1.members != [one]).then(|| format!("class of 1 has {} members", k1.members.len())),
        );

        let mut norms = Vec::with_capacity(n_alpha);
        let mut disjoint = None;
        for a in 0..n_alpha {
            for b in 0..n_alpha {
                let ip = table.inner_product(a, b);
                if a == b {
                    norms.push(ip);
                } else if !ip.is_zero() && disjoint.is_none() {
                    disjoint = Some(format!("<chi_{a}, chi_{b}> = {ip}"));
                }
            }
        }
        report.push("d", "distinct supercharacters are disjoint", disjoint);

        let mut regular = None;
        for b in 0..n_beta {
            let mut sum = CycloNumber::zero(1);
            for (a, (row, norm)) in table.values.iter().zip(&norms).enumerate() {
                let Some(r) = norm.as_rational().filter(|r| *r != BigRational::from_integer(0.into())) else {
                    regular = Some(format!("<chi_{a}, chi_{a}> = {norm} is not a positive rational"));
                    break;
                };
                sum = &sum + &(&row[0] * &row[b]).scale(&r.recip());
            }
            let want = if b == self.superclass_of(one) {
                table.group_order as i64
            } else {
                0
            };
            if regular.is_none() && sum != CycloNumber::from_integer(want) {
                regular = Some(format!("sum is {sum} on superclass {b}, expected {want}"));
            }
            if regular.is_some() {
                break;
            }
        }
        report.push("e", "sum chi(1)/<chi,chi> chi is the regular character", regular);

        let refinement = classes.iter().find_map(|cl| {
            let b = self.superclass_of(cl[0]);
            cl.iter()
                .find(|&&g| self.superclass_of(g) != b)
                .map(|&g| format!("elements {} and {g} are conjugate but in different superclasses", cl[0]))
        });
        report.push("f", "superclasses are unions of conjugacy classes", refinement);

        let total: u64 = table.class_sizes.iter().sum();
        report.push(
            "g",
            "superclass sizes sum to |G|",
            (total != table.group_order).then(|| format!("{total} != {}", table.group_order)),
        );
        Ok(report)
    }
}
