//! The JSON presentation document, in structure-constant or matrix form.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraPresentation};
use crate::error::{Error, Result};
use crate::exactlin::{row_space_basis, ColumnSolver, FieldDescriptor, FqMatrix, FqValue};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSection {
    pub p: u32,
    #[serde(default = "one")]
    pub m: u32,
    /// Monic modulus, low degree first; defaults to the canonical one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSection {
    pub dim: usize,
    /// `(i, j, k, c)`: `b_i b_j` has `c` at `b_k`.
    pub structure_constants: Vec<(usize, usize, usize, u32)>,
}

/// `J` is spanned by basis vectors `start..end`; `end` must be `dim`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JBasis {
    pub start: usize,
    pub end: usize,
}

/// `A` as a subalgebra of `n × n` matrices; entries are field indices in
/// row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixModel {
    pub matrix_size: usize,
    pub h_element_matrices: Vec<Vec<Vec<u32>>>,
    pub j_basis_matrices: Vec<Vec<Vec<u32>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDocument {
    pub field: FieldSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unity: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_basis: Option<JBasis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_elements: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix_model: Option<MatrixModel>,
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

impl PresentationDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(parse_error)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn field(&self) -> Result<std::sync::Arc<FieldDescriptor>> {
        let FieldSection { p, m, modulus } = &self.field;
        match modulus {
            Some(md) => FieldDescriptor::new(*p, *m, md.clone()),
            None => {
                let q = p
                    .checked_pow(*m)
                    .ok_or_else(|| Error::InvalidField(format!("{p}^{m} overflows")))?;
                let f = FieldDescriptor::with_order(q)?;
                if f.p() != *p {
                    return Err(Error::InvalidField(format!("{p} is not prime")));
                }
                Ok(f)
            }
        }
    }

    /// Builds the raw presentation; validation is left to the caller.
    pub fn to_presentation(&self) -> Result<AlgebraPresentation> {
        let f = self.field()?;
        let elem = |v: &[u32]| v.iter().map(|&x| f.value(x)).collect::<Result<Vec<_>>>();
        match (&self.algebra, &self.matrix_model) {
            (Some(alg), None) => {
                let (Some(unity), Some(jb), Some(hs)) = (&self.unity, &self.j_basis, &self.h_elements) else {
                    return Err(Error::parse(
                        "structure-constant form needs unity, j_basis and h_elements",
                    ));
                };
                if jb.end != alg.dim || jb.start > jb.end {
                    return Err(Error::parse(format!(
                        "j_basis must be a suffix range start..{}, got {}..{}",
                        alg.dim, jb.start, jb.end
                    )));
                }
                let structure_constants = alg
                    .structure_constants
                    .iter()
                    .map(|&(i, j, k, c)| Ok((i, j, k, f.value(c)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(AlgebraPresentation {
                    field: f.clone(),
                    dim: alg.dim,
                    structure_constants,
                    unity: elem(unity)?,
                    j_start: jb.start,
                    h_elements: hs.iter().map(|h| elem(h)).collect::<Result<_>>()?,
                })
            }
            (None, Some(mm)) => {
                if self.unity.is_some() || self.j_basis.is_some() || self.h_elements.is_some() {
                    return Err(Error::parse("matrix_model excludes unity, j_basis and h_elements"));
                }
                from_matrices(&f, mm)
            }
            _ => Err(Error::parse("exactly one of algebra and matrix_model is required")),
        }
    }

    /// The structure-constant form of a presentation.
    pub fn from_presentation(p: &AlgebraPresentation) -> Self {
        let f = &p.field;
        let idx = |v: &[FqValue]| v.iter().map(|x| x.index()).collect::<Vec<_>>();
        let mut sc: Vec<(usize, usize, usize, u32)> = p
            .structure_constants
            .iter()
            .map(|&(i, j, k, c)| (i, j, k, c.index()))
            .collect();
        sc.sort_unstable();
        PresentationDocument {
            field: FieldSection {
                p: f.p(),
                m: f.m(),
                modulus: (f.m() > 1).then(|| f.modulus().to_vec()),
            },
            algebra: Some(AlgebraSection {
                dim: p.dim,
                structure_constants: sc,
            }),
            unity: Some(idx(&p.unity)),
            j_basis: Some(JBasis {
                start: p.j_start,
                end: p.dim,
            }),
            h_elements: Some(p.h_elements.iter().map(|h| idx(h)).collect()),
            matrix_model: None,
        }
    }
}

fn flatten(f: &FieldDescriptor, n: usize, m: &[Vec<u32>], what: &str) -> Result<Vec<FqValue>> {
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(Error::parse(format!("{what} is not {n} x {n}")));
    }
    m.iter().flatten().map(|&x| f.value(x)).collect()
}

/// Basis: an echelon basis of `span(H)` followed by the given J basis;
/// products, unity and H are expressed in it by the column solver.
fn from_matrices(f: &std::sync::Arc<FieldDescriptor>, mm: &MatrixModel) -> Result<AlgebraPresentation> {
    let n = mm.matrix_size;
    if n == 0 {
        return Err(Error::parse("matrix_size must be positive"));
    }
    let hs = mm
        .h_element_matrices
        .iter()
        .map(|m| flatten(f, n, m, "H element"))
        .collect::<Result<Vec<_>>>()?;
    let js = mm
        .j_basis_matrices
        .iter()
        .map(|m| flatten(f, n, m, "J basis matrix"))
        .collect::<Result<Vec<_>>>()?;
    let h_basis = row_space_basis(n * n, &hs, f);
    let basis: Vec<Vec<FqValue>> = h_basis.iter().chain(&js).cloned().collect();
    let solver = ColumnSolver::new(n * n, &basis, f)
        .map_err(|_| Error::parse("span(H) and the J basis matrices are not independent"))?;
    let as_matrix = |v: &[FqValue]| FqMatrix::from_entries(n, n, v.to_vec());
    let coords = |v: &[FqValue], what: &str| -> Result<AlgebraElement> {
        solver
            .coordinates(v, f)
            .map_err(|_| Error::parse(format!("{what} is not in the span of the basis")))
    };
    let mut structure_constants = Vec::new();
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let prod = as_matrix(a).mul(&as_matrix(b), f);
            for (k, c) in coords(prod.entries(), "a product of basis matrices")?
                .into_iter()
                .enumerate()
            {
                if !c.is_zero() {
                    structure_constants.push((i, j, k, c));
                }
            }
        }
    }
    Ok(AlgebraPresentation {
        field: f.clone(),
        dim: basis.len(),
        structure_constants,
        unity: coords(FqMatrix::identity(n).entries(), "the identity matrix")?,
        j_start: h_basis.len(),
        h_elements: hs.iter().map(|h| coords(h, "an H element")).collect::<Result<_>>()?,
    })
}
