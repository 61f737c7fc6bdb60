//! Command implementations for the `nilform` binary.

pub mod verify;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nilform::center::full_center_report;
use nilform::diagrams::pretzel;
use nilform::exact_algebra::{companion_matrix, fmt_q, monic_normalize, reciprocal_check, RationalPoly};
use nilform::knot_pipeline::{load_table, parse_pd, qk_form_with_lift, table_knot, PDCode, QuadraticFormReport, BUNDLED_TABLE};
use nilform::mapping_class::{compose_twists, hf_basis, homology_action, qf_form, TwistWord};
use nilform::nilpotent_group::random_a;
use nilform::quadratic::render_form;
use nilform::{Error, Result};
use serde_json::{json, Value};

/// Output of one command: text to print and the process exit code.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: 0 }
    }
}

/// 2 for bad input, 1 for a failed computation.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Lookup(_) => 2,
        _ => 1,
    }
}

pub fn from_result(r: Result<String>) -> Outcome {
    match r {
        Ok(s) => Outcome::ok(s),
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: exit_code(&e) },
    }
}

/// `serde_json::Value` keeps object keys sorted.
fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}

pub fn read_table(path: Option<&str>) -> Result<BTreeMap<String, String>> {
    let mut table = load_table(BUNDLED_TABLE)?;
    if let Some(p) = path {
        let text = std::fs::read_to_string(p).map_err(|e| Error::Lookup(format!("cannot read table {p}: {e}")))?;
        table.extend(load_table(&text)?);
    }
    Ok(table)
}

pub fn center(poly: &str, as_json: bool) -> Outcome {
    let f: RationalPoly = match poly.parse() {
        Ok(f) => f,
        Err(e) => return from_result(Err(e)),
    };
    let run = || -> Result<(String, bool)> {
        let f = monic_normalize(&f)?;
        if f.degree().unwrap_or(0) == 0 {
            return Err(Error::Parse("polynomial must have positive degree".into()));
        }
        let t = companion_matrix(&f)?;
        let report = full_center_report(&t);
        let reciprocal = reciprocal_check(&f)?;
        let text = if as_json {
            let mut v = report.to_json();
            v["polynomial"] = json!(f.to_string());
            v["reciprocal"] = json!(reciprocal);
            pretty(&v)
        } else {
            let mut s = String::new();
            writeln!(s, "polynomial: {f}").unwrap();
            writeln!(s, "center rank: {}", report.rank).unwrap();
            if !reciprocal {
                writeln!(s, "not reciprocal").unwrap();
            } else {
                if let Some(k) = report.formula_rank {
                    writeln!(s, "formula rank: {k}").unwrap();
                }
                writeln!(s, "basis: {:?}", report.basis_kind()).unwrap();
                for (i, v) in report.coordinate_basis().iter().enumerate() {
                    writeln!(s, "  C{}: [{}]", i + 1, v.iter().map(fmt_q).collect::<Vec<_>>().join(", ")).unwrap();
                }
            }
            s
        };
        Ok((text, reciprocal))
    };
    match run() {
        Ok((text, true)) => Outcome::ok(text),
        Ok((text, false)) => Outcome { stdout: text, stderr: "error: polynomial is not reciprocal\n".into(), code: 2 },
        Err(e) => from_result(Err(e)),
    }
}

/// Which knot to run.
#[derive(Clone, Debug)]
pub enum KnotSource {
    /// Inline PD text or a path to a file containing it.
    Pd(String),
    Name(String),
    Pretzel(Vec<i32>),
}

pub fn resolve_knot(source: &KnotSource, table: Option<&str>) -> Result<(String, PDCode)> {
    match source {
        KnotSource::Pd(s) => {
            let text = match std::fs::read_to_string(s) {
                Ok(t) => t,
                Err(_) => s.clone(),
            };
            let pd = parse_pd(text.trim())?;
            Ok((pd.to_string(), pd))
        }
        KnotSource::Name(n) => Ok((n.clone(), table_knot(&read_table(table)?, n)?)),
        KnotSource::Pretzel(p) => {
            let label = format!("P({})", p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
            Ok((label, pretzel(p)?))
        }
    }
}

pub fn knot_report(pd: &PDCode, lift_seed: Option<u64>) -> Result<QuadraticFormReport> {
    let base = qk_form_with_lift(pd, None)?;
    match lift_seed {
        None => Ok(base),
        Some(seed) => {
            let m = base.module_poly.degree().unwrap_or(0);
            if m == 0 {
                return Ok(base);
            }
            qk_form_with_lift(pd, Some(&random_a(m, seed)))
        }
    }
}

fn report_text(label: &str, r: &QuadraticFormReport) -> String {
    let mut s = String::new();
    writeln!(s, "{label}").unwrap();
    let d: Vec<String> = r.divisors.iter().map(|d| d.primitive_display().to_string()).collect();
    writeln!(s, "divisors: [{}]", d.join(", ")).unwrap();
    writeln!(s, "H dimension: {}", r.hk_dimension).unwrap();
    writeln!(s, "center rank: {} ({:?})", r.center.rank, r.center.basis_kind()).unwrap();
    for (i, (f, n)) in r.display.iter().zip(&r.display_normalized).enumerate() {
        write!(s, "Q{}: {f}", i + 1).unwrap();
        if f != n {
            write!(s, "  (normalized: {n})").unwrap();
        }
        writeln!(s).unwrap();
    }
    if !r.determinants.is_empty() {
        let dets: Vec<String> = r.determinants.iter().map(fmt_q).collect();
        writeln!(s, "determinants: [{}]", dets.join(", ")).unwrap();
    }
    writeln!(s, "checks: isometry {}, homogeneity {}, quadratic {}", r.isometry_ok, r.homogeneous_ok, r.quadratic_ok)
        .unwrap();
    s
}

pub fn knot(source: &KnotSource, table: Option<&str>, lift_seed: Option<u64>, as_json: bool) -> Outcome {
    from_result((|| {
        let (label, pd) = resolve_knot(source, table)?;
        let r = knot_report(&pd, lift_seed)?;
        if as_json {
            let mut summary = r.summary();
            if !matches!(source, KnotSource::Pd(_)) {
                summary.name = Some(label);
            }
            summary.pd = Some(pd.to_string());
            Ok(pretty(&serde_json::to_value(&summary).expect("summary")))
        } else {
            Ok(report_text(&label, &r))
        }
    })())
}

pub fn mcg(genus: usize, twists: &str, as_json: bool) -> Outcome {
    from_result((|| {
        let word: TwistWord = twists.parse()?;
        let aut = compose_twists(genus, &word)?;
        let (_, cp) = homology_action(&aut);
        let r = qf_form(&aut)?;
        let summed = render_form(&r.form_set().summed().grams[0]);
        let hf = hf_basis(&aut)?.len();
        if as_json {
            let mut summary = r.summary();
            summary.name = Some(format!("genus {genus}: {twists}"));
            summary.char_poly = Some(cp.to_string());
            summary.zeta_fixed = Some(aut.fixes_boundary());
            summary.hf_dimension = Some(hf);
            summary.summed_display = Some(summed);
            Ok(pretty(&serde_json::to_value(&summary).expect("summary")))
        } else {
            let mut s = report_text(&format!("genus {genus}, twists {twists}"), &r);
            writeln!(s, "char poly: {cp}").unwrap();
            writeln!(s, "boundary fixed: {}", aut.fixes_boundary()).unwrap();
            writeln!(s, "commutant dimension: {hf}").unwrap();
            writeln!(s, "summed: {summed}").unwrap();
            Ok(s)
        }
    })())
}

pub fn verify(table: Option<&str>, lift_seed: Option<u64>, as_json: bool) -> Outcome {
    let table = match table.map(verify::read_table).transpose() {
        Ok(t) => t,
        Err(e) => return from_result(Err(e)),
    };
    let results = verify::run_suite(&verify::VerifyOptions { table, lift_seed });
    let failed = results.iter().filter(|r| r.counts_as_failure()).count();
    let stdout = if as_json {
        pretty(&serde_json::to_value(&results).expect("results"))
    } else {
        let mut s = String::new();
        for r in &results {
            writeln!(s, "{}", r.line()).unwrap();
        }
        writeln!(s, "{} cases, {failed} failing", results.len()).unwrap();
        s
    };
    Outcome { stdout, stderr: String::new(), code: if failed > 0 { 1 } else { 0 } }
}
