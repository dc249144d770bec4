//! Corner algebras `A_e = eAe` as validated presentations of their own.

use std::sync::Arc;

use super::{AlgebraElement, AlgebraPresentation, IdempotentRecord, Presentation};
use crate::error::Result;
use crate::exactlin::{row_space_basis, ColumnSolver, FqMatrix, FqValue};

/// `A_e` with `H_e = eH` and `J_e = eJe`, plus the maps linking its J
/// coordinates to the ambient ones.
#[derive(Debug)]
pub struct Corner {
    pub idempotent: IdempotentRecord,
    pub presentation: Arc<Presentation>,
    /// Corner basis vectors in ambient coordinates.
    pub ambient_basis: Vec<AlgebraElement>,
    h_map: Vec<usize>,
    /// Columns: the J_e basis in ambient J coordinates.
    inclusion: FqMatrix,
    /// Ambient J coordinates of `x` to J_e coordinates of `exe`.
    projection: FqMatrix,
}

impl Presentation {
    pub fn corner(&self, e: &IdempotentRecord) -> Result<Corner> {
        let f = self.field().clone();
        let d = self.dim();
        let js = self.j_start();
        let ee = &e.element;
        let sandwich = |x: &[FqValue]| self.multiply(&self.multiply(ee, x), ee);

        let he: Vec<AlgebraElement> = self.h_elements().iter().map(|h| self.multiply(h, ee)).collect();
        let h_basis = row_space_basis(d, &he, &f);
        let ejes: Vec<AlgebraElement> = (0..self.dim_j())
            .map(|j| {
                let mut b = self.zero();
                b[js + j] = FqValue::ONE;
                sandwich(&b)
            })
            .collect();
        let j_basis = row_space_basis(d, &ejes, &f);
        let ambient_basis: Vec<AlgebraElement> = h_basis.iter().chain(&j_basis).cloned().collect();
        let solver = ColumnSolver::new(d, &ambient_basis, &f)?;
        let n = ambient_basis.len();
        let cj = h_basis.len();

        let mut structure_constants = Vec::new();
        for (a, ba) in ambient_basis.iter().enumerate() {
            for (b, bb) in ambient_basis.iter().enumerate() {
                let coords = solver.coordinates(&self.multiply(ba, bb), &f)?;
                for (k, c) in coords.into_iter().enumerate() {
                    if !c.is_zero() {
                        structure_constants.push((a, b, k, c));
                    }
                }
            }
        }
        let mut h_elements: Vec<AlgebraElement> = Vec::new();
        let mut h_map = Vec::with_capacity(he.len());
        for v in &he {
            let coords = solver.coordinates(v, &f)?;
            let idx = match h_elements.iter().position(|w| *w == coords) {
                Some(i) => i,
                None => {
                    h_elements.push(coords);
                    h_elements.len() - 1
                }
            };
            h_map.push(idx);
        }
        let raw = AlgebraPresentation {
            field: f.clone(),
            dim: n,
            structure_constants,
            unity: solver.coordinates(ee, &f)?,
            j_start: cj,
            h_elements,
        };
        let presentation = Presentation::new(raw)?;

        let inclusion_cols: Vec<Vec<FqValue>> = j_basis.iter().map(|b| b[js..].to_vec()).collect();
        let inclusion = FqMatrix::from_columns(self.dim_j(), &inclusion_cols);
        let projection_cols: Vec<Vec<FqValue>> = ejes
            .iter()
            .map(|v| solver.coordinates(v, &f).map(|c| c[cj..].to_vec()))
            .collect::<Result<_>>()?;
        let projection = FqMatrix::from_columns(n - cj, &projection_cols);
        Ok(Corner {
            idempotent: e.clone(),
            presentation,
            ambient_basis,
            h_map,
            inclusion,
            projection,
        })
    }
}

impl Corner {
    pub fn support(&self) -> u64 {
        self.idempotent.support
    }

    pub fn dim_j(&self) -> usize {
        self.presentation.dim_j()
    }

    /// Index in `H_e` of `he` for an ambient H index `h`.
    pub fn h_index(&self, h: usize) -> usize {
        self.h_map[h]
    }

    /// J_e coordinates of `exe` for ambient J coordinates `x`.
    pub fn project(&self, x: &[FqValue]) -> Vec<FqValue> {
        self.projection.mul_vec(x, self.presentation.field())
    }

    /// Ambient J coordinates of an element of J_e.
    pub fn include(&self, y: &[FqValue]) -> Vec<FqValue> {
        self.inclusion.mul_vec(y, self.presentation.field())
    }

    /// Whether ambient `x` lies in J_e.
    pub fn contains(&self, x: &[FqValue]) -> bool {
        self.include(&self.project(x)) == x
    }

    /// Ambient form `x ↦ μ(exe)` of a form `μ` on J_e.
    pub fn embed_dual(&self, mu: &[FqValue]) -> Vec<FqValue> {
        self.projection.transpose().mul_vec(mu, self.presentation.field())
    }

    /// Restriction of an ambient form to J_e.
    pub fn restrict_dual(&self, lambda: &[FqValue]) -> Vec<FqValue> {
        self.inclusion.transpose().mul_vec(lambda, self.presentation.field())
    }

    /// Whether an ambient form vanishes off the `eJe` Pierce slice.
    pub fn contains_dual(&self, lambda: &[FqValue]) -> bool {
        self.embed_dual(&self.restrict_dual(lambda)) == lambda
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{axb, ut3_2};
    use super::*;

    #[test]
    fn corners_of_axb() {
        let p = Presentation::new(axb(3)).unwrap();
        let lat = p.idempotent_lattice().unwrap();
        let whole = p.corner(&lat[3]).unwrap();
        assert_eq!(whole.dim_j(), 1);
        assert_eq!(whole.presentation.h_order(), 2);
        // e0 = E22 absorbs every diag(a, 1), so eH is a single element
        let e0 = p.corner(&lat[1]).unwrap();
        assert_eq!(e0.idempotent.element, vec![FqValue::ZERO, FqValue::ONE, FqValue::ZERO]);
        assert_eq!(e0.dim_j(), 0);
        assert_eq!(e0.presentation.h_order(), 1);
        assert_eq!(e0.h_index(0), e0.h_index(1));
        let zero = p.corner(&lat[0]).unwrap();
        assert_eq!(zero.presentation.dim(), 0);
        assert_eq!(zero.presentation.h_order(), 1);
        assert!(zero.presentation.primitive_idempotents().is_empty());
    }

    #[test]
    fn embeddings_are_consistent() {
        for raw in [axb(5), ut3_2()] {
            let p = Presentation::new(raw).unwrap();
            let f = p.field().clone();
            for e in p.idempotent_lattice().unwrap() {
                let c = p.corner(&e).unwrap();
                let dj = p.dim_j();
                for j in 0..dj {
                    let mut x = vec![FqValue::ZERO; dj];
                    x[j] = FqValue::ONE;
                    let exe = p.pierce(&e, &p.embed_j(&x))[0].clone();
                    assert_eq!(c.include(&c.project(&x)), exe[p.j_start()..].to_vec());
                    // dual embedding: (embed μ)(x) = μ(exe)
                    for k in 0..c.dim_j() {
                        let mut mu = vec![FqValue::ZERO; c.dim_j()];
                        mu[k] = FqValue::ONE;
                        let lam = c.embed_dual(&mu);
                        assert!(c.contains_dual(&lam));
                        assert_eq!(c.restrict_dual(&lam), mu);
                        let lx = lam
                            .iter()
                            .zip(&x)
                            .fold(FqValue::ZERO, |a, (l, y)| f.add(a, f.mul(*l, *y)));
                        assert_eq!(lx, c.project(&x)[k]);
                    }
                }
            }
        }
    }
}
