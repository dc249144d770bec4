//! Table emission and parsing in CSV and JSON.
//!
//! CSV layout: a header row `alpha,e,theta,omega_star,<β headers>` with
//! each β header `e=<mask>;h=<index>;omega=<packed>;size=<n>`, then one
//! row per α whose cells use the exact grammar
//! `"<rational>[ + <rational>*z^<k>]*; conductor=<N>"`. Theta exponents
//! are joined by `.`, empty for a trivial `H(e)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::CycloNumber;
use crate::supertheory::{SupercharacterTable, Theory};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaHeader {
    pub e: u64,
    pub theta: Vec<u32>,
    pub omega_star: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaHeader {
    pub e: u64,
    pub h: usize,
    pub omega: u64,
    pub size: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonCell {
    pub exact: String,
    /// Floating-point rendering for reading; never parsed back.
    pub approx: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonTable {
    group_order: u64,
    alphas: Vec<AlphaHeader>,
    betas: Vec<BetaHeader>,
    values: Vec<Vec<JsonCell>>,
}

/// A labelled table, as emitted and as parsed back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableDocument {
    pub group_order: u64,
    pub alphas: Vec<AlphaHeader>,
    pub betas: Vec<BetaHeader>,
    pub values: Vec<Vec<CycloNumber>>,
}

fn parse_err(msg: impl Into<String>, line: usize, column: usize) -> Error {
    Error::Parse {
        line,
        column,
        message: msg.into(),
    }
}

fn parse_cell(s: &str, line: usize, column: usize) -> Result<CycloNumber> {
    s.parse::<CycloNumber>()
        .map_err(|e| parse_err(format!("cell {s:?}: {e}"), line, column))
}

fn theta_string(t: &[u32]) -> String {
    t.iter().map(u32::to_string).collect::<Vec<_>>().join(".")
}

fn parse_theta(s: &str) -> Option<Vec<u32>> {
    if s.is_empty() {
        return Some(vec![]);
    }
    s.split('.').map(|x| x.parse().ok()).collect()
}

fn parse_beta(s: &str) -> Option<BetaHeader> {
    let mut parts = s.split(';');
    let mut field = |key: &str| -> Option<u64> { parts.next()?.strip_prefix(key)?.strip_prefix('=')?.parse().ok() };
    let b = BetaHeader {
        e: field("e")?,
        h: field("h")? as usize,
        omega: field("omega")?,
        size: field("size")?,
    };
    parts.next().is_none().then_some(b)
}

impl TableDocument {
    pub fn new(theory: &Theory, table: &SupercharacterTable) -> Self {
        TableDocument {
            group_order: table.group_order,
            alphas: theory
                .alphas
                .iter()
                .map(|a| AlphaHeader {
                    e: a.e,
                    theta: a.theta.exponents.clone(),
                    omega_star: a.omega_star_rep,
                })
                .collect(),
            betas: theory
                .superclasses
                .iter()
                .map(|k| BetaHeader {
                    e: k.label.e,
                    h: k.label.h,
                    omega: k.label.omega_rep,
                    size: k.size(),
                })
                .collect(),
            values: table.values.clone(),
        }
    }

    /// Structural equality of every cell.
    pub fn identical(&self, other: &Self) -> bool {
        self.group_order == other.group_order
            && self.alphas == other.alphas
            && self.betas == other.betas
            && self.values.len() == other.values.len()
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.identical(y)))
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(vec![]);
        let mut header = vec!["alpha".to_string(), "e".into(), "theta".into(), "omega_star".into()];
        header.extend(
            self.betas
                .iter()
                .map(|b| format!("e={};h={};omega={};size={}", b.e, b.h, b.omega, b.size)),
        );
        w.write_record(&header).expect("in-memory write");
        for (i, (a, row)) in self.alphas.iter().zip(&self.values).enumerate() {
            let mut rec = vec![
                i.to_string(),
                a.e.to_string(),
                theta_string(&a.theta),
                a.omega_star.to_string(),
            ];
            rec.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV output is UTF-8")
    }

    /// Parses [`TableDocument::to_csv`] output. The group order is not in
    /// the CSV and is taken as the sum of the class sizes.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_reader(text.as_bytes());
        let mut records = r.records();
        let header = match records.next() {
            Some(Ok(h)) => h,
            Some(Err(e)) => return Err(parse_err(e.to_string(), 1, 1)),
            None => return Err(parse_err("empty table", 1, 1)),
        };
        if header.len() < 4
            || &header[0] != "alpha"
            || &header[1] != "e"
            || &header[2] != "theta"
            || &header[3] != "omega_star"
        {
            return Err(parse_err("header must start with alpha,e,theta,omega_star", 1, 1));
        }
        let betas = header
            .iter()
            .skip(4)
            .enumerate()
            .map(|(i, s)| parse_beta(s).ok_or_else(|| parse_err(format!("bad superclass header {s:?}"), 1, i + 5)))
            .collect::<Result<Vec<_>>>()?;
        let mut alphas = Vec::new();
        let mut values = Vec::new();
        for (row, rec) in records.enumerate() {
            let line = row + 2;
            let rec = rec.map_err(|e| parse_err(e.to_string(), line, 1))?;
            if rec.len() != betas.len() + 4 {
                return Err(parse_err(
                    format!("expected {} fields, got {}", betas.len() + 4, rec.len()),
                    line,
                    1,
                ));
            }
            if rec[0].parse::<usize>().ok() != Some(row) {
                return Err(parse_err(format!("row label {:?} out of sequence", &rec[0]), line, 1));
            }
            let e = rec[1]
                .parse()
                .map_err(|_| parse_err("bad idempotent support", line, 2))?;
            let theta = parse_theta(&rec[2]).ok_or_else(|| parse_err("bad theta exponents", line, 3))?;
            let omega_star = rec[3].parse().map_err(|_| parse_err("bad omega_star", line, 4))?;
            alphas.push(AlphaHeader { e, theta, omega_star });
            values.push(
                rec.iter()
                    .skip(4)
                    .enumerate()
                    .map(|(i, s)| parse_cell(s, line, i + 5))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let group_order = betas
            .iter()
            .try_fold(0u64, |acc, b| acc.checked_add(b.size))
            .ok_or_else(|| parse_err("class sizes overflow", 1, 1))?;
        Ok(TableDocument {
            group_order,
            alphas,
            betas,
            values,
        })
    }

    pub fn to_json(&self) -> String {
        let doc = JsonTable {
            group_order: self.group_order,
            alphas: self.alphas.clone(),
            betas: self.betas.clone(),
            values: self
                .values
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|v| JsonCell {
                            exact: v.to_string(),
                            approx: v.approx_string(),
                        })
                        .collect()
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("tables serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: JsonTable = serde_json::from_str(text).map_err(|e| parse_err(e.to_string(), e.line(), e.column()))?;
        if doc.values.len() != doc.alphas.len() || doc.values.iter().any(|r| r.len() != doc.betas.len()) {
            return Err(parse_err("values do not match the label lists", 1, 1));
        }
        let values = doc
            .values
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| parse_cell(&c.exact, 1, 1))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TableDocument {
            group_order: doc.group_order,
            alphas: doc.alphas,
            betas: doc.betas,
            values,
        })
    }
}
