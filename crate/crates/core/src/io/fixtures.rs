//! Named matrix-algebra presentations.
//!
//! - `axb(q)`: 2×2 upper triangular, `H = {diag(a, 1)}`, `J = F_q E12`.
//! - `ut(n, q)`: `1 + J`, J the strictly upper triangular n×n matrices.
//! - `tri(n, q)`: all invertible upper triangular n×n matrices.
//! - `trunc(k, q)`: units of `F_q[x]/(x^k)`.
//! - `torus(n, q)`: invertible diagonal n×n matrices, `J = 0`.

use super::document::{FieldSection, MatrixModel, PresentationDocument};
use crate::error::{Error, Result};
use crate::exactlin::FieldDescriptor;

pub const FIXTURE_NAMES: [&str; 5] = ["axb", "ut", "tri", "trunc", "torus"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FixtureSpec<'a> {
    pub name: &'a str,
    pub q: u32,
    /// Matrix size for `ut`, `tri`, `torus`; ignored otherwise.
    pub n: Option<usize>,
    /// Truncation degree for `trunc`.
    pub k: Option<usize>,
}

impl<'a> FixtureSpec<'a> {
    pub fn new(name: &'a str, q: u32) -> Self {
        FixtureSpec {
            name,
            q,
            n: None,
            k: None,
        }
    }

    pub fn n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    /// A short tag such as `ut(3,2)`.
    pub fn tag(&self) -> String {
        match self.name {
            "ut" | "tri" | "torus" => format!("{}({},{})", self.name, self.size(), self.q),
            "trunc" => format!("trunc({},{})", self.k.unwrap_or(2), self.q),
            _ => format!("{}({})", self.name, self.q),
        }
    }

    fn size(&self) -> usize {
        self.n.unwrap_or(match self.name {
            "ut" => 3,
            "tri" => 2,
            _ => 1,
        })
    }
}

fn unit(n: usize, i: usize, j: usize) -> Vec<Vec<u32>> {
    let mut m = vec![vec![0; n]; n];
    m[i][j] = 1;
    m
}

fn diagonal(d: &[u32]) -> Vec<Vec<u32>> {
    let n = d.len();
    let mut m = vec![vec![0; n]; n];
    for (i, &x) in d.iter().enumerate() {
        m[i][i] = x;
    }
    m
}

/// All diagonals with nonzero entries, first entry varying slowest.
fn torus_diagonals(q: u32, n: usize) -> Vec<Vec<Vec<u32>>> {
    let mut out: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|d| {
                (1..q).map(move |a| {
                    let mut d = d.clone();
                    d.push(a);
                    d
                })
            })
            .collect();
    }
    out.iter().map(|d| diagonal(d)).collect()
}

fn strictly_upper(n: usize) -> Vec<Vec<Vec<u32>>> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| unit(n, i, j))).collect()
}

/// The matrix model of a fixture, checked against `max_group_order`.
pub fn fixture_model(spec: FixtureSpec<'_>, max_group_order: u64) -> Result<(FieldSection, MatrixModel)> {
    let f = FieldDescriptor::with_order(spec.q)?;
    let q = spec.q;
    let scalar = |a: u32, n: usize| diagonal(&vec![a; n]);
    let (n, hs, js) = match spec.name {
        "axb" => (2, (1..q).map(|a| diagonal(&[a, 1])).collect(), vec![unit(2, 0, 1)]),
        "ut" => {
            let n = spec.size();
            (n, vec![scalar(1, n)], strictly_upper(n))
        }
        "tri" => {
            let n = spec.size();
            (n, torus_diagonals(q, n), strictly_upper(n))
        }
        "torus" => {
            let n = spec.size();
            (n, torus_diagonals(q, n), vec![])
        }
        "trunc" => {
            let k = spec.k.unwrap_or(2);
            // powers of the nilpotent shift x: e_i -> e_{i+1}
            let js = (1..k)
                .map(|p| {
                    let mut m = vec![vec![0; k]; k];
                    for i in 0..k - p {
                        m[i + p][i] = 1;
                    }
                    m
                })
                .collect();
            (k, (1..q).map(|a| scalar(a, k)).collect(), js)
        }
        other => return Err(Error::UnknownFixture(other.to_string())),
    };
    if n == 0 {
        return Err(Error::UnknownFixture(format!("{} needs a positive size", spec.tag())));
    }
    let order = (q as u64)
        .checked_pow(js.len() as u32)
        .and_then(|v: u64| v.checked_mul(hs.len() as u64))
        .unwrap_or(u64::MAX);
    if order > max_group_order {
        return Err(Error::TooLarge {
            what: "fixture group",
            size: order,
            bound: max_group_order,
        });
    }
    let field = FieldSection {
        p: f.p(),
        m: f.m(),
        modulus: (f.m() > 1).then(|| f.modulus().to_vec()),
    };
    Ok((
        field,
        MatrixModel {
            matrix_size: n,
            h_element_matrices: hs,
            j_basis_matrices: js,
        },
    ))
}

/// The fixture as a structure-constant document.
pub fn fixture(spec: FixtureSpec<'_>, max_group_order: u64) -> Result<PresentationDocument> {
    let (field, model) = fixture_model(spec, max_group_order)?;
    let doc = PresentationDocument {
        field,
        algebra: None,
        unity: None,
        j_basis: None,
        h_elements: None,
        matrix_model: Some(model),
    };
    Ok(PresentationDocument::from_presentation(&doc.to_presentation()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::validate_presentation;
    use crate::group::DEFAULT_MAX_GROUP_ORDER;

    fn shape(spec: FixtureSpec<'_>) -> (usize, usize, usize) {
        let doc = fixture(spec, DEFAULT_MAX_GROUP_ORDER).unwrap();
        let p = doc.to_presentation().unwrap();
        let out = validate_presentation(&p);
        assert!(out.is_valid(), "{}: {}", spec.tag(), out.report);
        let md = out.metadata.unwrap();
        let order = md.h_order * (spec.q as usize).pow(md.dim_j as u32);
        (order, md.dim_j, md.h_order)
    }

    #[test]
    fn fixture_shapes() {
        assert_eq!(shape(FixtureSpec::new("axb", 3)), (6, 1, 2));
        assert_eq!(shape(FixtureSpec::new("ut", 2).n(3)), (8, 3, 1));
        assert_eq!(shape(FixtureSpec::new("trunc", 3).k(2)), (6, 1, 2));
        assert_eq!(shape(FixtureSpec::new("tri", 3).n(2)), (12, 1, 4));
        assert_eq!(shape(FixtureSpec::new("trunc", 2).k(3)), (4, 2, 1));
        assert_eq!(shape(FixtureSpec::new("torus", 5).n(1)), (4, 0, 4));
        assert_eq!(shape(FixtureSpec::new("axb", 4)), (12, 1, 3));
    }

    #[test]
    fn fixture_errors() {
        assert!(matches!(
            fixture(FixtureSpec::new("nope", 3), DEFAULT_MAX_GROUP_ORDER),
            Err(Error::UnknownFixture(_))
        ));
        assert!(matches!(
            fixture(FixtureSpec::new("ut", 3).n(6), DEFAULT_MAX_GROUP_ORDER),
            Err(Error::TooLarge { .. })
        ));
        assert!(fixture(FixtureSpec::new("axb", 6), DEFAULT_MAX_GROUP_ORDER).is_err());
    }

    #[test]
    fn fixture_documents_round_trip() {
        for spec in [
            FixtureSpec::new("axb", 5),
            FixtureSpec::new("tri", 2).n(3),
            FixtureSpec::new("axb", 4),
        ] {
            let doc = fixture(spec, DEFAULT_MAX_GROUP_ORDER).unwrap();
            let text = doc.to_json();
            assert_eq!(PresentationDocument::parse(&text).unwrap().to_json(), text);
        }
    }
}
