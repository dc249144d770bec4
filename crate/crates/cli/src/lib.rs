//! Command surface for the `supertri` binary.
//!
//! Every command except `fixture` reads one presentation, from `--input`
//! or a named `--fixture`, validates it and emits a JSON report (or a CSV
//! table). Exit codes: 0 when everything passes, 1 for invalid or
//! unreadable input, 2 for a failed verification or a computational error.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use supertri::algebra::{validate_presentation, AlgebraPresentation, Presentation};
use supertri::group::DEFAULT_MAX_GROUP_ORDER;
use supertri::io::{fixture, FixtureSpec, PresentationDocument, TableDocument};
use supertri::kirillov::cross_validate;
use supertri::orbits::Strata;
use supertri::supertheory::{Limits, Theory};
use supertri::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_FAILED: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "supertri",
    version,
    about = "Supercharacter tables of groups of triangular type"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Check the presentation axioms and report any violations.
    Validate,
    /// List superclass labels, sizes and representatives.
    Superclasses,
    /// List supercharacter labels and degrees.
    Characters,
    /// Emit the supercharacter table.
    Table,
    /// Run the supercharacter theory checks (a) to (g).
    Verify,
    /// Compare induced values with both orbit-sum formulas on every cell.
    KirillovCheck,
    /// Orbit statistics per idempotent.
    Census,
    /// Emit a named fixture as a structure-constant document.
    Fixture,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Presentation document (JSON).
    #[arg(long, global = true, value_name = "PATH", conflicts_with = "fixture")]
    pub input: Option<PathBuf>,
    /// Named fixture: axb, ut, tri, trunc or torus.
    #[arg(long, global = true, value_name = "NAME")]
    pub fixture: Option<String>,
    /// Field order for the fixture.
    #[arg(long, global = true, default_value_t = 2)]
    pub q: u32,
    /// Matrix size for ut, tri and torus.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Truncation degree for trunc.
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Table format; reports are always JSON.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_GROUP_ORDER)]
    pub max_group_order: u64,
    /// Seed for sampled checks on large groups.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

/// What a command produced: text for the output and an exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
    /// The output is an error report, meant for standard error.
    pub is_error: bool,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome {
            code: EXIT_OK,
            output,
            is_error: false,
        }
    }

    fn report(passed: bool, value: Value) -> Self {
        Outcome {
            code: if passed { EXIT_OK } else { EXIT_FAILED },
            output: pretty(&value),
            is_error: false,
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// The JSON error report and exit code for a library error.
pub fn error_outcome(e: &Error) -> Outcome {
    let mut v = json!({ "error": e.code(), "message": e.to_string() });
    match e {
        Error::Invalid(report) => v["violations"] = json!(report.violations),
        Error::Parse { line, column, .. } => {
            v["line"] = json!(line);
            v["column"] = json!(column);
        }
        _ => {}
    }
    Outcome {
        code: if e.is_input_error() { EXIT_INPUT } else { EXIT_FAILED },
        output: pretty(&v),
        is_error: true,
    }
}

impl Common {
    fn limits(&self) -> Limits {
        Limits {
            max_group_order: self.max_group_order,
            threads: self.threads,
            seed: self.seed,
            ..Limits::default()
        }
    }

    fn spec(&self) -> Option<FixtureSpec<'_>> {
        self.fixture.as_deref().map(|name| FixtureSpec {
            name,
            q: self.q,
            n: self.n,
            k: self.k,
        })
    }

    fn document(&self) -> supertri::Result<PresentationDocument> {
        match (&self.input, self.spec()) {
            (Some(path), None) => PresentationDocument::parse(&std::fs::read_to_string(path)?),
            (None, Some(spec)) => fixture(spec, self.max_group_order),
            _ => Err(Error::parse("give exactly one of --input and --fixture")),
        }
    }

    fn raw(&self) -> supertri::Result<AlgebraPresentation> {
        self.document()?.to_presentation()
    }

    fn presentation(&self) -> supertri::Result<Arc<Presentation>> {
        Presentation::new(self.raw()?)
    }

    fn theory(&self) -> supertri::Result<Theory> {
        Theory::new(self.presentation()?, self.limits())
    }
}

fn indices(v: &[supertri::exactlin::FqValue]) -> Vec<u32> {
    v.iter().map(|x| x.index()).collect()
}

/// Runs one command; library errors become error reports.
pub fn run(cli: &Cli) -> Outcome {
    execute(cli.command, &cli.common).unwrap_or_else(|e| error_outcome(&e))
}

fn execute(command: Command, c: &Common) -> supertri::Result<Outcome> {
    match command {
        Command::Fixture => {
            let spec = c.spec().ok_or_else(|| Error::parse("fixture needs --fixture NAME"))?;
            Ok(Outcome::ok(fixture(spec, c.max_group_order)?.to_json()))
        }
        Command::Validate => {
            let out = validate_presentation(&c.raw()?);
            Ok(Outcome {
                code: if out.is_valid() { EXIT_OK } else { EXIT_INPUT },
                output: pretty(&json!({
                    "valid": out.is_valid(),
                    "violations": out.report.violations,
                    "metadata": out.metadata,
                })),
                is_error: false,
            })
        }
        Command::Census => {
            let pres = c.presentation()?;
            let strata = c.limits().install(|| Strata::build(pres, c.max_group_order))??;
            let rows: Vec<Value> = strata
                .strata
                .iter()
                .map(|st| {
                    json!({
                        "e": st.support(),
                        "h_of_e_order": st.h_of_e.len(),
                        "dim_j_e": st.packer().dim(),
                        "orbits": st.orbit_count(),
                        "regular_orbits": st.regular_count(),
                        "regular_dual_orbits": st.regular_dual_count(),
                        "inclusion_exclusion": strata.inclusion_exclusion(st.support()),
                    })
                })
                .collect();
            let predicted: u64 = strata
                .strata
                .iter()
                .map(|st| st.h_of_e.len() as u64 * st.regular_count() as u64)
                .sum();
            let consistent = strata.strata.iter().all(|st| {
                st.regular_count() == st.regular_dual_count()
                    && strata.inclusion_exclusion(st.support()) == st.regular_count() as i64
            });
            Ok(Outcome::report(
                consistent,
                json!({ "idempotents": rows, "predicted_count": predicted, "identities_hold": consistent }),
            ))
        }
        Command::Superclasses => {
            let t = c.theory()?;
            let rows: Vec<Value> = t
                .superclasses
                .iter()
                .enumerate()
                .map(|(i, k)| {
                    json!({
                        "index": i,
                        "e": k.label.e,
                        "h": k.label.h,
                        "omega": k.label.omega_rep,
                        "size": k.size(),
                        "fixed_idempotent": k.f,
                        "representative": { "h": k.representative.h, "x": indices(&k.representative.x) },
                    })
                })
                .collect();
            Ok(Outcome::ok(pretty(&json!({
                "group_order": t.group.order(),
                "predicted_count": t.predicted_count(),
                "superclasses": rows,
            }))))
        }
        Command::Characters => {
            let t = c.theory()?;
            let rows: Vec<Value> = t
                .alphas
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let stab = t.stabilizer_subgroup(a.e, &t.lambda(a));
                    json!({
                        "index": i,
                        "e": a.e,
                        "theta": a.theta.exponents,
                        "omega_star": a.omega_star_rep,
                        "lambda": indices(&t.lambda(a)),
                        "stabilizer_order": stab.order,
                        "degree": t.group.order() / stab.order,
                    })
                })
                .collect();
            Ok(Outcome::ok(pretty(&json!({
                "group_order": t.group.order(),
                "predicted_count": t.predicted_count(),
                "supercharacters": rows,
            }))))
        }
        Command::Table => {
            let t = c.theory()?;
            let doc = TableDocument::new(&t, &t.build_table()?);
            Ok(Outcome::ok(match c.format {
                Format::Csv => doc.to_csv(),
                Format::Json => doc.to_json(),
            }))
        }
        Command::Verify => {
            let t = c.theory()?;
            let report = t.verify_theory(&t.build_table()?)?;
            Ok(Outcome::report(
                report.passed(),
                json!({ "passed": report.passed(), "full_scan": report.full_scan, "checks": report.checks }),
            ))
        }
        Command::KirillovCheck => {
            let t = c.theory()?;
            let report = cross_validate(&t, &t.build_table()?)?;
            Ok(Outcome::report(
                report.passed(),
                json!({
                    "passed": report.passed(),
                    "cells": report.cells,
                    "algebra_group_cells": report.algebra_group_cells,
                    "mismatches": report.mismatches,
                }),
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_kinds() {
        assert_eq!(error_outcome(&Error::Mismatch("x".into())).code, EXIT_FAILED);
        assert_eq!(error_outcome(&Error::NonIntegral("x".into())).code, EXIT_FAILED);
        assert_eq!(error_outcome(&Error::parse("x")).code, EXIT_INPUT);
        assert_eq!(error_outcome(&Error::UnknownFixture("x".into())).code, EXIT_INPUT);
    }

    #[test]
    fn parses_global_flags_after_the_command() {
        let cli = Cli::try_parse_from(["supertri", "table", "--fixture", "ut", "--q", "3", "--format", "csv"]).unwrap();
        assert_eq!(cli.command, Command::Table);
        assert_eq!(cli.common.format, Format::Csv);
        assert!(Cli::try_parse_from(["supertri", "table", "--input", "a", "--fixture", "ut"]).is_err());
    }
}
