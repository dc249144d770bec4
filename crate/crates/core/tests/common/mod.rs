//! Brute-force oracle over integer matrices mod p, independent of the
//! library's structure constants, orbit engine and cyclotomic arithmetic.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::f64::consts::PI;

use supertri::group::DEFAULT_MAX_GROUP_ORDER;
use supertri::io::{fixture_model, FixtureSpec};

pub type Mat = Vec<Vec<i64>>;

/// A fixture group as explicit matrices over a prime field, listed in the
/// library's canonical order: H index, then J coordinates with the first
/// coordinate most significant.
pub struct MatrixGroup {
    pub p: i64,
    pub n: usize,
    pub h: Vec<Mat>,
    pub j: Vec<Mat>,
    pub elements: Vec<Mat>,
    pub index: HashMap<Mat, usize>,
    /// Elements of `N = 1 + J`, same coordinate order.
    pub unipotent: Vec<Mat>,
    coords_of: HashMap<Mat, Vec<i64>>,
}

pub fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect()
}

impl MatrixGroup {
    pub fn new(spec: FixtureSpec<'_>) -> Self {
        let (field, model) = fixture_model(spec, DEFAULT_MAX_GROUP_ORDER).unwrap();
        assert_eq!(field.m, 1, "oracle needs a prime field");
        let p = field.p as i64;
        let conv = |m: &Vec<Vec<u32>>| -> Mat { m.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect() };
        let h: Vec<Mat> = model.h_element_matrices.iter().map(conv).collect();
        let j: Vec<Mat> = model.j_basis_matrices.iter().map(conv).collect();
        let n = model.matrix_size;
        let mut g = MatrixGroup {
            p,
            n,
            h,
            j,
            elements: vec![],
            index: HashMap::new(),
            unipotent: vec![],
            coords_of: HashMap::new(),
        };
        let coords = g.all_coords();
        g.coords_of = coords.iter().map(|c| (g.combo(c), c.clone())).collect();
        g.unipotent = coords.iter().map(|c| g.add(&identity(n), &g.combo(c))).collect();
        for hm in &g.h {
            for c in &coords {
                g.elements.push(g.add(hm, &g.combo(c)));
            }
        }
        g.index = g.elements.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        assert_eq!(g.index.len(), g.elements.len(), "elements are distinct");
        g
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    fn all_coords(&self) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..self.j.len() {
            out = out
                .into_iter()
                .flat_map(|c| {
                    (0..self.p).map(move |a| {
                        let mut c = c.clone();
                        c.push(a);
                        c
                    })
                })
                .collect();
        }
        out
    }

    pub fn combo(&self, c: &[i64]) -> Mat {
        let mut m = vec![vec![0; self.n]; self.n];
        for (cj, bj) in c.iter().zip(&self.j) {
            m = self.add(&m, &self.scale(*cj, bj));
        }
        m
    }

    pub fn add(&self, a: &Mat, b: &Mat) -> Mat {
        a.iter()
            .zip(b)
            .map(|(r, s)| r.iter().zip(s).map(|(x, y)| (x + y).rem_euclid(self.p)).collect())
            .collect()
    }

    pub fn sub(&self, a: &Mat, b: &Mat) -> Mat {
        self.add(a, &self.scale(-1, b))
    }

    pub fn scale(&self, c: i64, a: &Mat) -> Mat {
        a.iter()
            .map(|r| r.iter().map(|x| (c * x).rem_euclid(self.p)).collect())
            .collect()
    }

    pub fn mul(&self, a: &Mat, b: &Mat) -> Mat {
        let n = self.n;
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| (0..n).map(|t| a[i][t] * b[t][k]).sum::<i64>().rem_euclid(self.p))
                    .collect()
            })
            .collect()
    }

    /// Inverse by search over the finite group.
    pub fn inv(&self, a: &Mat) -> Mat {
        let id = identity(self.n);
        self.elements
            .iter()
            .find(|b| self.mul(a, b) == id)
            .cloned()
            .expect("group element has an inverse in G")
    }

    /// J coordinates of a matrix in span(J), by lookup among all
    /// combinations.
    pub fn j_coords(&self, x: &Mat) -> Vec<i64> {
        self.coords_of.get(x).cloned().expect("matrix lies in J")
    }

    /// Orbits of `g ↦ 1 + t a (g - 1) b⁻¹ t⁻¹` over all `t ∈ H`, `a, b ∈ N`.
    pub fn superclasses(&self) -> BTreeSet<Vec<usize>> {
        let id = identity(self.n);
        let inv_u: Vec<Mat> = self.unipotent.iter().map(|b| self.inv(b)).collect();
        let inv_h: Vec<Mat> = self.h.iter().map(|t| self.inv(t)).collect();
        let mut seen = vec![false; self.order()];
        let mut out = BTreeSet::new();
        for (i, g) in self.elements.iter().enumerate() {
            if seen[i] {
                continue;
            }
            let gm1 = self.sub(g, &id);
            let mut orbit = BTreeSet::new();
            for (t, ti) in self.h.iter().zip(&inv_h) {
                for a in &self.unipotent {
                    let left = self.mul(t, &self.mul(a, &gm1));
                    for bi in &inv_u {
                        let img = self.add(&id, &self.mul(&self.mul(&left, bi), ti));
                        orbit.insert(self.index[&img]);
                    }
                }
            }
            for &m in &orbit {
                seen[m] = true;
            }
            out.insert(orbit.into_iter().collect());
        }
        out
    }

    pub fn conjugacy_classes(&self) -> BTreeSet<Vec<usize>> {
        let invs: Vec<Mat> = self.elements.iter().map(|s| self.inv(s)).collect();
        let mut seen = vec![false; self.order()];
        let mut out = BTreeSet::new();
        for (i, g) in self.elements.iter().enumerate() {
            if seen[i] {
                continue;
            }
            let cl: BTreeSet<usize> = self
                .elements
                .iter()
                .zip(&invs)
                .map(|(s, si)| self.index[&self.mul(&self.mul(s, g), si)])
                .collect();
            for &m in &cl {
                seen[m] = true;
            }
            out.insert(cl.into_iter().collect());
        }
        out
    }

    /// `λ(x)` for J coordinates `lambda` and a matrix `x ∈ J`.
    pub fn eval(&self, lambda: &[i64], x: &Mat) -> i64 {
        self.j_coords(x)
            .iter()
            .zip(lambda)
            .map(|(a, b)| a * b)
            .sum::<i64>()
            .rem_euclid(self.p)
    }

    /// Induced character of `u ↦ ε^{λ(u - 1)}` from the right stabilizer
    /// `{a ∈ N : λ(a x) = λ(x) for all x ∈ J}`, extended by `H(e) = {1}`,
    /// at every element, in floating point.
    pub fn induced_from_form(&self, lambda: &[i64]) -> Vec<(f64, f64)> {
        let id = identity(self.n);
        let stab: Vec<&Mat> = self
            .unipotent
            .iter()
            .filter(|a| {
                self.j
                    .iter()
                    .all(|x| self.eval(lambda, &self.mul(a, x)) == self.eval(lambda, x))
            })
            .collect();
        let stab_set: BTreeSet<usize> = stab.iter().map(|a| self.index[*a]).collect();
        let invs: Vec<Mat> = self.elements.iter().map(|s| self.inv(s)).collect();
        self.elements
            .iter()
            .map(|g| {
                let (mut re, mut im) = (0.0, 0.0);
                for (s, si) in self.elements.iter().zip(&invs) {
                    let c = self.mul(&self.mul(s, g), si);
                    if stab_set.contains(&self.index[&c]) {
                        let t = self.eval(lambda, &self.sub(&c, &id)) as f64;
                        re += (2.0 * PI * t / self.p as f64).cos();
                        im += (2.0 * PI * t / self.p as f64).sin();
                    }
                }
                (re / stab.len() as f64, im / stab.len() as f64)
            })
            .collect()
    }
}
