//! The eight acceptance criteria, one pass/fail line each. Runs without the
//! libtest harness so the lines are always printed.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;

use supertri::algebra::{AlgebraPresentation, Presentation};
use supertri::exactlin::CycloNumber;
use supertri::group::DEFAULT_MAX_GROUP_ORDER;
use supertri::io::{fixture, FixtureSpec};
use supertri::kirillov::{cross_validate, Kirillov};
use supertri::orbits::{Generators, Space};
use supertri::supertheory::{Limits, SupercharacterTable, Theory};

type Outcome = Result<String, String>;
type Criterion = fn(&[Built]) -> Outcome;

fn fixtures() -> Vec<FixtureSpec<'static>> {
    vec![
        FixtureSpec::new("axb", 3),
        FixtureSpec::new("axb", 5),
        FixtureSpec::new("ut", 2).n(3),
        FixtureSpec::new("ut", 3).n(3),
        FixtureSpec::new("ut", 2).n(4),
        FixtureSpec::new("tri", 2).n(2),
        FixtureSpec::new("tri", 3).n(2),
        FixtureSpec::new("trunc", 3).k(2),
        FixtureSpec::new("trunc", 2).k(3),
    ]
}

fn raw(spec: FixtureSpec<'_>) -> AlgebraPresentation {
    fixture(spec, DEFAULT_MAX_GROUP_ORDER)
        .unwrap()
        .to_presentation()
        .unwrap()
}

struct Built {
    tag: String,
    theory: Theory,
    table: SupercharacterTable,
}

fn build_raw(tag: String, raw: AlgebraPresentation, limits: Limits) -> Result<Built, String> {
    let pres = Presentation::new(raw).map_err(|e| format!("{tag}: {e}"))?;
    let theory = Theory::new(pres, limits).map_err(|e| format!("{tag}: {e}"))?;
    let table = theory.build_table().map_err(|e| format!("{tag}: {e}"))?;
    Ok(Built { tag, theory, table })
}

fn build(spec: FixtureSpec<'_>) -> Result<Built, String> {
    build_raw(spec.tag(), raw(spec), Limits::default())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn as_sets(classes: impl IntoIterator<Item = Vec<u64>>) -> BTreeSet<Vec<u64>> {
    classes
        .into_iter()
        .map(|mut c| {
            c.sort_unstable();
            c
        })
        .collect()
}

fn criterion_1(all: &[Built]) -> Outcome {
    for b in all {
        let report = b
            .theory
            .verify_theory(&b.table)
            .map_err(|e| format!("{}: {e}", b.tag))?;
        ensure(report.full_scan, || format!("{}: sampled instead of full scan", b.tag))?;
        for c in &report.checks {
            ensure(c.passed, || {
                format!("{}: check {} ({}) failed: {:?}", b.tag, c.id, c.name, c.witness)
            })?;
        }
    }
    Ok(format!("checks a-g on {} fixtures", all.len()))
}

fn criterion_2(all: &[Built]) -> Outcome {
    let mut n = 0;
    for b in all.iter().filter(|b| b.tag.starts_with("axb")) {
        let q = b.theory.presentation.field().q() as usize;
        ensure(b.theory.alphas.len() == q && b.theory.superclasses.len() == q, || {
            format!(
                "{}: |A| = {}, |B| = {}",
                b.tag,
                b.theory.alphas.len(),
                b.theory.superclasses.len()
            )
        })?;
        for a in 0..q {
            let norm = b.table.inner_product(a, a);
            ensure(norm == CycloNumber::one(), || {
                format!("{}: <chi_{a}, chi_{a}> = {norm}", b.tag)
            })?;
        }
        let supers = as_sets(b.theory.superclasses.iter().map(|k| k.members.clone()));
        let conj = as_sets(b.theory.conjugacy_classes());
        ensure(supers == conj, || {
            format!("{}: superclasses differ from conjugacy classes", b.tag)
        })?;
        n += 1;
    }
    ensure(n == 2, || format!("expected axb(3) and axb(5), saw {n}"))?;
    Ok("axb(3), axb(5): q classes, unit norms, superclasses are conjugacy classes".into())
}

fn criterion_3(all: &[Built]) -> Outcome {
    for b in all.iter().filter(|b| b.tag.starts_with("ut")) {
        let t = &b.theory;
        let whole = t.strata.whole();
        let gp = t.group.packer();
        let two_sided = whole.engine.partition(Space::J, Generators::TWO_SIDED);
        let expected = as_sets(
            two_sided
                .orbits()
                .iter()
                .map(|o| o.iter().map(|&c| gp.pack(&whole.ambient_j(c))).collect()),
        );
        let supers = as_sets(t.superclasses.iter().map(|k| k.members.clone()));
        ensure(supers == expected, || {
            format!("{}: superclasses differ from 1 + NxN orbits", b.tag)
        })?;
        let kir = Kirillov::new(t);
        for (a, alpha) in t.alphas.iter().enumerate() {
            for (k, class) in t.superclasses.iter().enumerate() {
                let di = kir
                    .di_value(&t.lambda(alpha), &class.representative.x)
                    .map_err(|e| format!("{}: cell ({a}, {k}): {e}", b.tag))?;
                ensure(di == b.table.values[a][k], || {
                    format!(
                        "{}: cell ({a}, {k}): algebra-group {di} vs induced {}",
                        b.tag, b.table.values[a][k]
                    )
                })?;
            }
        }
    }
    let ut32 = all.iter().find(|b| b.tag == "ut(3,2)").ok_or("ut(3,2) missing")?;
    let mut degrees: Vec<i64> = ut32
        .table
        .degrees()
        .iter()
        .map(|d| {
            d.as_rational()
                .and_then(|r| r.to_integer().try_into().ok())
                .unwrap_or(-1)
        })
        .collect();
    degrees.sort_unstable();
    ensure(
        ut32.theory.superclasses.len() == 5 && ut32.theory.alphas.len() == 5,
        || "ut(3,2): not 5 x 5".into(),
    )?;
    ensure(degrees == [1, 1, 1, 1, 2], || format!("ut(3,2): degrees {degrees:?}"))?;
    Ok(
        "ut fixtures match two-sided orbits and both algebra-group formulas; ut(3,2) is 5 x 5 with degrees 1,1,1,1,2"
            .into(),
    )
}

fn criterion_4(all: &[Built]) -> Outcome {
    let mut cells = 0;
    for b in all {
        let report = cross_validate(&b.theory, &b.table).map_err(|e| format!("{}: {e}", b.tag))?;
        ensure(report.passed(), || {
            format!("{}: {:?}", b.tag, report.mismatches.first())
        })?;
        cells += report.cells;
    }
    Ok(format!(
        "{cells} cells agree across induced and both orbit-sum formulas"
    ))
}

fn criterion_5(all: &[Built]) -> Outcome {
    let mut strata = 0;
    for b in all {
        for st in &b.theory.strata.strata {
            let e = st.support();
            ensure(st.regular_count() == st.regular_dual_count(), || {
                format!(
                    "{}: e={e}: {} regular J orbits, {} regular dual",
                    b.tag,
                    st.regular_count(),
                    st.regular_dual_count()
                )
            })?;
            let ie = b.theory.strata.inclusion_exclusion(e);
            ensure(ie == st.regular_count() as i64, || {
                format!(
                    "{}: e={e}: inclusion-exclusion {ie} vs direct {}",
                    b.tag,
                    st.regular_count()
                )
            })?;
            strata += 1;
        }
    }
    Ok(format!("{strata} idempotents satisfy both identities"))
}

fn criterion_6(all: &[Built]) -> Outcome {
    for b in all {
        let t = &b.theory;
        let predicted = t.predicted_count() as usize;
        ensure(predicted == t.superclasses.len() && predicted == t.alphas.len(), || {
            format!(
                "{}: predicted {predicted}, {} superclasses, {} supercharacters",
                b.tag,
                t.superclasses.len(),
                t.alphas.len()
            )
        })?;
    }
    Ok("sum over e of |H(e)| n_E(J_e) matches both enumerations".into())
}

/// Cells keyed by coordinates rather than by input positions.
type Keyed = BTreeMap<(String, String), String>;

fn keyed(b: &Built) -> Keyed {
    let t = &b.theory;
    let coords = |h: usize| {
        format!(
            "{:?}",
            t.presentation
                .h_element(h)
                .iter()
                .map(|v| v.index())
                .collect::<Vec<_>>()
        )
    };
    let mut out = BTreeMap::new();
    for (a, alpha) in t.alphas.iter().enumerate() {
        let d = t.h_exponent(alpha.e) as u64;
        let theta: BTreeMap<String, (u64, u64)> = t
            .strata
            .stratum(alpha.e)
            .h_of_e
            .iter()
            .map(|&h| {
                let k = t.theta_exponent(alpha, h).expect("h lies in H(e)");
                let g = num::integer::gcd(k, d);
                (coords(h), (k / g, d / g))
            })
            .collect();
        let akey = format!("e={};theta={theta:?};omega*={}", alpha.e, alpha.omega_star_rep);
        for (k, class) in t.superclasses.iter().enumerate() {
            let bkey = format!(
                "e={};h={};omega={}",
                class.label.e,
                coords(class.label.h),
                class.label.omega_rep
            );
            out.insert((akey.clone(), bkey), b.table.values[a][k].to_string());
        }
    }
    out
}

fn criterion_7(all: &[Built]) -> Outcome {
    let mut replaced = 0;
    for b in all {
        let t = &b.theory;
        // (i) every other member of each ω*
        for (a, alpha) in t.alphas.iter().enumerate() {
            let size = t.strata.stratum(alpha.e).dual_orbits.orbit(alpha.omega_star).len();
            for m in 1..size {
                let inducer = t.inducer(alpha, t.omega_star_member(alpha, m));
                for (k, class) in t.superclasses.iter().enumerate() {
                    let v = inducer
                        .value(&class.representative, &class.members)
                        .map_err(|e| format!("{}: alpha {a}, member {m}: {e}", b.tag))?;
                    ensure(v.identical(&b.table.values[a][k]), || {
                        format!(
                            "{}: alpha {a}, member {m}, class {k}: {v} vs {}",
                            b.tag, b.table.values[a][k]
                        )
                    })?;
                }
                replaced += 1;
            }
        }
        // (ii) H given in reverse order
        let mut rev = t.presentation.raw().clone();
        rev.h_elements.reverse();
        let reversed = build_raw(format!("{} reversed", b.tag), rev, Limits::default())?;
        ensure(keyed(&reversed) == keyed(b), || {
            format!("{}: table changes when H is reversed", b.tag)
        })?;
        // (iii) thread counts
        for threads in [1, 4] {
            let limits = Limits {
                threads,
                ..Limits::default()
            };
            let other = build_raw(
                format!("{} threads={threads}", b.tag),
                t.presentation.raw().clone(),
                limits,
            )?;
            ensure(other.table.identical(&b.table), || {
                format!("{}: table differs with {threads} threads", b.tag)
            })?;
            let report = cross_validate(&other.theory, &other.table).map_err(|e| e.to_string())?;
            ensure(report.passed(), || {
                format!("{}: cross-validation differs with {threads} threads", b.tag)
            })?;
        }
    }
    Ok(format!(
        "{replaced} alternative forms, reversed H and 1 or 4 threads leave tables bit-identical"
    ))
}

fn criterion_8(all: &[Built]) -> Outcome {
    for spec in [
        FixtureSpec::new("torus", 3).n(2),
        FixtureSpec::new("torus", 5).n(1),
        FixtureSpec::new("torus", 7).n(1),
    ] {
        let b = build(spec)?;
        let t = &b.theory;
        let n = t.presentation.h_order();
        ensure(t.superclasses.len() == n && t.alphas.len() == n, || {
            format!("{}: table is not |H| x |H|", b.tag)
        })?;
        ensure(t.superclasses.iter().all(|k| k.size() == 1), || {
            format!("{}: a superclass is not a singleton", b.tag)
        })?;
        let col = |h: usize| t.superclass_of(t.group.index(&supertri::group::GroupElement { h, x: vec![] }));
        let mut rows = BTreeSet::new();
        for (a, row) in b.table.values.iter().enumerate() {
            for h1 in 0..n {
                for h2 in 0..n {
                    let lhs = &row[col(t.presentation.h_mul(h1, h2))];
                    let rhs = &row[col(h1)] * &row[col(h2)];
                    ensure(*lhs == rhs, || {
                        format!("{}: row {a} is not multiplicative at ({h1}, {h2})", b.tag)
                    })?;
                }
            }
            ensure(row[col(t.presentation.h_identity())] == CycloNumber::one(), || {
                format!("{}: row {a} has degree != 1", b.tag)
            })?;
            rows.insert(row.iter().map(|v| v.to_string()).collect::<Vec<_>>());
        }
        ensure(rows.len() == n, || format!("{}: repeated characters", b.tag))?;
    }
    for b in all {
        let t = &b.theory;
        let linear: Vec<usize> = (0..t.alphas.len()).filter(|&a| t.alphas[a].e == 0).collect();
        ensure(linear.len() == t.presentation.h_order(), || {
            format!(
                "{}: e = 0 gives {} supercharacters, |H| = {}",
                b.tag,
                linear.len(),
                t.presentation.h_order()
            )
        })?;
        let degrees = b.table.degrees();
        ensure(linear.iter().all(|&a| degrees[a] == CycloNumber::one()), || {
            format!("{}: an e = 0 supercharacter is not linear", b.tag)
        })?;
    }
    Ok("torus tables are the dual groups of H; e = 0 gives |H| linear supercharacters everywhere".into())
}

fn main() -> ExitCode {
    let built: Result<Vec<Built>, String> = fixtures().into_iter().map(build).collect();
    let built = match built {
        Ok(b) => b,
        Err(e) => {
            println!("fixture construction failed: {e}");
            return ExitCode::FAILURE;
        }
    };
    let criteria: [(&str, Criterion); 8] = [
        ("axiom suite", criterion_1),
        ("affine group tables", criterion_2),
        ("algebra-group degeneration", criterion_3),
        ("orbit-sum cross-validation", criterion_4),
        ("orbit-count identities", criterion_5),
        ("count formula", criterion_6),
        ("invariance", criterion_7),
        ("degenerate gates", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run(&built) {
            Ok(detail) => println!("criterion {} ({name}): PASS: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL: {why}", i + 1);
            }
        }
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
