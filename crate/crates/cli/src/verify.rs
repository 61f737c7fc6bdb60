//! Golden suite: one case per acceptance criterion, each a list of exact
//! sub-checks.

use std::collections::BTreeMap;

use nilform::center::{canonical_central_elements, center_from_t, center_rank_formula, module_divisors, CanonicalSource};
use nilform::diagrams::pretzel;
use nilform::exact_algebra::{companion_matrix, cyclotomic, fmt_q, q, qf, QMatrix, Rational, RationalPoly};
use nilform::knot_pipeline::{
    alexander_divisors, bundled_knot, bundled_names, load_table, proportionality_witness, qk_form_with_lift,
    table_knot, wirtinger, PDCode, QuadraticFormReport,
};
use nilform::mapping_class::{compose_twists, homology_action, qf_form, rational_canonical_form};
use nilform::nilpotent_group::{
    build_tau_lift, exterior_square, nil2_inv, nil2_mul, random_a, semidirect_inv, semidirect_mul, tau_apply,
    wedge, wedge_alt, Nil2Element, SemidirectElement,
};
use nilform::quadratic::{compare_forms, parse_form, proportionality_witness as witness, scalar_square_test, FormSet, SquareVerdict, Verdict, WitnessSearch};
use nilform::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub label: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyResult {
    pub id: String,
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub status: Status,
    /// Reported only; never counted as a failure.
    pub informational: bool,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl VerifyResult {
    fn new(id: &str, name: &str, expected: impl Into<String>) -> Self {
        VerifyResult {
            id: id.into(),
            name: name.into(),
            expected: expected.into(),
            computed: String::new(),
            status: Status::Pass,
            informational: false,
            checks: vec![],
            notes: vec![],
        }
    }

    fn check(&mut self, label: &str, ok: bool, detail: impl Into<String>) {
        self.checks.push(Check { label: label.into(), ok, detail: detail.into() });
    }

    fn finish(mut self) -> Self {
        if self.status != Status::Skipped && self.checks.iter().any(|c| !c.ok) {
            self.status = Status::Fail;
        }
        self
    }

    fn error(mut self, e: impl std::fmt::Display) -> Self {
        self.check("computation", false, e.to_string());
        self.finish()
    }

    /// `PASS`/`FAIL`/`SKIP` line with the failing sub-checks.
    pub fn line(&self) -> String {
        let tag = match (self.status, self.informational) {
            (Status::Pass, _) => "PASS",
            (Status::Fail, true) => "NOTE",
            (Status::Fail, false) => "FAIL",
            (Status::Skipped, _) => "SKIP",
        };
        let failed: Vec<&str> = self.checks.iter().filter(|c| !c.ok).map(|c| c.label.as_str()).collect();
        let mut s = format!("[{tag}] {} {}", self.id, self.name);
        if !failed.is_empty() {
            s.push_str(&format!(" (failed: {})", failed.join("; ")));
        }
        s
    }

    pub fn counts_as_failure(&self) -> bool {
        self.status == Status::Fail && !self.informational
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Extra knot table (name → PD string), e.g. providing `12n_582`.
    pub table: Option<BTreeMap<String, String>>,
    /// Seed for a random free part of the lift; zero lift when absent.
    pub lift_seed: Option<u64>,
}

struct Ctx<'a> {
    opts: &'a VerifyOptions,
}

impl Ctx<'_> {
    fn qk(&self, pd: &PDCode) -> Result<QuadraticFormReport> {
        match self.opts.lift_seed {
            None => qk_form_with_lift(pd, None),
            Some(seed) => {
                let m = top_degree(pd)?;
                let a = random_a(m, seed);
                qk_form_with_lift(pd, if m > 0 { Some(&a) } else { None })
            }
        }
    }

    fn knot(&self, name: &str) -> Result<QuadraticFormReport> {
        self.qk(&bundled_knot(name)?)
    }
}

fn top_degree(pd: &PDCode) -> Result<usize> {
    let d = alexander_divisors(&wirtinger(pd))?;
    Ok(d.top().and_then(|f| f.degree()).unwrap_or(0))
}

fn poly(s: &str) -> RationalPoly {
    s.parse().expect("literal polynomial")
}

fn strs(v: &[String]) -> String {
    v.join(" | ")
}

/// `𝒬_a` and `𝒬_b` agree after a unit substitution, in either direction,
/// with coordinate permutation `perm` (any when absent). A rational unit
/// `u/d` with integral `u` shows up as the ratio `c = d²`, so square ratios
/// are accepted too (small forms only, to bound the search).
fn unit_equivalent(a: &FormSet, b: &FormSet, perm: Option<Vec<usize>>) -> Result<bool> {
    if a.grams == b.grams && perm.as_ref().is_none_or(|p| p.iter().enumerate().all(|(i, &j)| i == j)) {
        return Ok(true);
    }
    let mut ratios = vec![q(1)];
    if a.dimension() <= 2 {
        for n in 1..=4i64 {
            for d in 1..=4i64 {
                let r = qf(n * n, d * d);
                if !ratios.contains(&r) {
                    ratios.push(r);
                }
            }
        }
    }
    let inverse_perm = perm.clone().map(|p| {
        let mut inv = vec![0; p.len()];
        for (i, &j) in p.iter().enumerate() {
            inv[j] = i;
        }
        inv
    });
    for c in ratios {
        let mut s = WitnessSearch::for_dimension(a.dimension()).with_c(c);
        s.fixed_perm = perm.clone();
        if witness(a, b, &s)?.is_some() {
            return Ok(true);
        }
        s.fixed_perm = inverse_perm.clone();
        if witness(b, a, &s)?.is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

fn expected_set(report: &QuadraticFormReport, forms: &[&str]) -> Result<FormSet> {
    let d = report.hk_dimension;
    Ok(FormSet {
        module_poly: report.module_poly.clone(),
        t_action: report.t_action.clone(),
        grams: forms.iter().map(|f| parse_form(f, d)).collect::<Result<_>>()?,
    })
}

fn normalized(fs: &FormSet) -> FormSet {
    FormSet { grams: fs.grams.iter().map(nilform::quadratic::normalize_display).collect(), ..fs.clone() }
}

pub fn run_suite(opts: &VerifyOptions) -> Vec<VerifyResult> {
    let ctx = Ctx { opts };
    let mut out = vec![
        criterion_1(&ctx),
        criterion_2(&ctx),
        criterion_3(&ctx),
        criterion_4(&ctx),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(&ctx),
        criterion_10(&ctx),
        criterion_11(&ctx),
    ];
    out.push(case_12n_582(&ctx));
    out
}

fn criterion_1(ctx: &Ctx) -> VerifyResult {
    let mut r = VerifyResult::new("1", "trefoil end-to-end", "divisors (t^2 - t + 1); center rank 1; x^2 - x*y + y^2");
    let rep = match ctx.knot("3_1") {
        Ok(x) => x,
        Err(e) => return r.error(e),
    };
    r.computed = format!("divisors {:?}; center rank {}; {}", rep.summary().divisors, rep.center.rank, strs(&rep.display));
    r.check("divisors", rep.divisors == vec![poly("t^2 - t + 1")], format!("{:?}", rep.summary().divisors));
    r.check("center rank", rep.center.rank == 1, rep.center.rank.to_string());
    let exact = parse_form("x^2 - x*y + y^2", 2).ok() == rep.grams.first().cloned();
    r.check("form in arc parametrization", exact, strs(&rep.display));
    r.finish()
}

fn criterion_2(ctx: &Ctx) -> VerifyResult {
    let cases = [
        ("4_1", "t^2 - 3*t + 1", "x^2 - 3*x*y + y^2", false),
        ("5_2", "2*t^2 - 3*t + 2", "2*x^2 - 3*x*y + 2*y^2", true),
        ("6_1", "2*t^2 - 5*t + 2", "2*x^2 - 5*x*y + 2*y^2", true),
    ];
    let mut r = VerifyResult::new(
        "2",
        "degree-2 knots",
        cases.iter().map(|c| format!("{}: {}", c.0, c.2)).collect::<Vec<_>>().join("; "),
    );
    let mut computed = Vec::new();
    for (name, div, form, norm) in cases {
        let rep = match ctx.knot(name) {
            Ok(x) => x,
            Err(e) => return r.error(format!("{name}: {e}")),
        };
        computed.push(format!("{name}: {}", if norm { strs(&rep.display_normalized) } else { strs(&rep.display) }));
        r.check(&format!("{name} divisors"), rep.summary().divisors == vec![div.to_string()], strs(&rep.summary().divisors));
        let ours = if norm { normalized(&rep.form_set()) } else { rep.form_set() };
        let ok = expected_set(&rep, &[form]).and_then(|e| unit_equivalent(&e, &ours, None));
        r.check(&format!("{name} form"), ok.as_ref().is_ok_and(|b| *b), format!("{ok:?}"));
    }
    r.computed = computed.join("; ");
    r.finish()
}

/// The displayed pairs `(C_1, C_2)` for the degree-4 examples.
pub const DEGREE_FOUR_FORMS: [(&str, &str, [&str; 2]); 3] = [
    (
        "5_1",
        "t^4 - t^3 + t^2 - t + 1",
        ["x^2 + x*y + y^2 + w*z + y*z + z^2 + w^2", "-w*x + w*y + x*y + w*z + x*z + y*z"],
    ),
    (
        "6_2",
        "t^4 - 3*t^3 + 3*t^2 - 3*t + 1",
        [
            "w^2 + 2*w*x + x^2 + x*y + y^2 + w*z + y*z + z^2",
            "-2*w^2 + w*x - 2*x^2 + 3*w*y - x*y - 2*y^2 - w*z + 3*x*z - y*z - 2*z^2",
        ],
    ),
    (
        "6_3",
        "t^4 - 3*t^3 + 5*t^2 - 3*t + 1",
        [
            "-w^2 + 6*w*x - x^2 + 2*w*y - x*y - y^2 - w*z + 2*x*z - y*z - z^2",
            "2*w^2 - 9*w*x + 2*x^2 - w*y + 3*x*y + 2*y^2 + 3*w*z - x*z + 3*y*z + 2*z^2",
        ],
    ),
];

fn criterion_3(ctx: &Ctx) -> VerifyResult {
    let mut r = VerifyResult::new(
        "3",
        "degree-4 knots, pairs of forms",
        "5_1, 6_2, 6_3 displayed pairs up to unit substitution and one fixed coordinate permutation",
    );
    let mut reps = Vec::new();
    for (name, div, forms) in DEGREE_FOUR_FORMS {
        let rep = match ctx.knot(name) {
            Ok(x) => x,
            Err(e) => return r.error(format!("{name}: {e}")),
        };
        r.check(&format!("{name} divisors"), rep.divisors == vec![poly(div)], strs(&rep.summary().divisors));
        r.check(&format!("{name} center rank 2"), rep.grams.len() == 2, rep.grams.len().to_string());
        reps.push((name, rep, forms));
    }
    if r.checks.iter().any(|c| !c.ok) {
        return r.finish();
    }
    let mut found = None;
    for perm in [vec![0, 1], vec![1, 0]] {
        let all = reps.iter().all(|(_, rep, forms)| {
            expected_set(rep, forms).and_then(|e| unit_equivalent(&rep.form_set(), &e, Some(perm.clone()))).unwrap_or(false)
        });
        if all {
            found = Some(perm);
            break;
        }
    }
    r.computed = reps.iter().map(|(n, rep, _)| format!("{n}: {}", strs(&rep.display))).collect::<Vec<_>>().join("; ");
    r.check("common permutation with unit witnesses", found.is_some(), format!("{found:?}"));
    if let Some(p) = found {
        r.notes.push(format!("coordinate permutation {p:?}"));
    }
    r.finish()
}

fn criterion_4(ctx: &Ctx) -> VerifyResult {
    let mut r = VerifyResult::new(
        "4",
        "pretzel pair",
        "P(3,3,-3): 12x^2+30xy+12y^2; P(9,3,-3): 6x^2+15xy+6y^2; c = 2; 2 not a square; inequivalent",
    );
    let run = |p: &[i32]| pretzel(p).and_then(|pd| ctx.qk(&pd));
    let (a, b) = match (run(&[3, 3, -3]), run(&[9, 3, -3])) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return r.error(e),
    };
    r.computed = format!("{} ; {}", strs(&a.display), strs(&b.display));
    for (label, rep, form) in [("P(3,3,-3)", &a, "12*x^2 + 30*x*y + 12*y^2"), ("P(9,3,-3)", &b, "6*x^2 + 15*x*y + 6*y^2")] {
        let ok = expected_set(rep, &[form]).and_then(|e| unit_equivalent(&e, &rep.form_set(), None));
        r.check(&format!("{label} form"), ok.as_ref().is_ok_and(|x| *x), format!("{ok:?}"));
    }
    match proportionality_witness(&a, &b) {
        Ok(Some(w)) => {
            r.check("witness c = 2", w.c == q(2), format!("c = {}, u = {}", fmt_q(&w.c), w.u));
        }
        other => r.check("witness c = 2", false, format!("{other:?}")),
    }
    let sq = scalar_square_test(&q(2), &poly("2*t^2 - 5*t + 2"));
    r.check("2 is not a square", sq == Ok(SquareVerdict::No), format!("{sq:?}"));
    let cmp = compare_forms(&a.form_set(), &b.form_set(), &WitnessSearch::for_dimension(2));
    r.check(
        "reported inequivalent",
        cmp.as_ref().is_ok_and(|c| c.verdict == Verdict::Inequivalent),
        format!("{:?}", cmp.map(|c| c.verdict)),
    );
    r.finish()
}

fn criterion_5() -> VerifyResult {
    let mut r = VerifyResult::new(
        "5",
        "canonical central elements",
        "C_l for g = 1, 2, 3 equal the displayed lists, or the recursion discrepancy is surfaced; all E-fixed",
    );
    let polys = ["t^2 + 3*t + 1", "t^4 - t^3 + t^2 - t + 1", "t^6 - t^5 + t^4 - t^3 + t^2 - t + 1"];
    let mut computed = Vec::new();
    for (g, f) in (1..).zip(polys) {
        let f = poly(f);
        let c = match canonical_central_elements(&f) {
            Ok(c) => c,
            Err(e) => return r.error(e),
        };
        let e = exterior_square(&companion_matrix(&f).expect("monic"));
        let fixed = c.elements.iter().all(|v| e.mul_vec(v) == *v);
        r.check(&format!("g={g}: {g} elements, all E-fixed"), fixed && c.elements.len() == g, format!("{:?}", c.source));
        let closed: Vec<_> = c.closed_form.clone().unwrap_or_default().into_iter().map(|(v, _)| v).collect();
        let recursion_ok = c.recursion.iter().all(|(_, ok)| *ok);
        let verbatim = c.elements == closed;
        let surfaced = !recursion_ok && c.source == CanonicalSource::ClosedForm;
        r.check(
            &format!("g={g}: displayed list, or discrepancy surfaced"),
            verbatim && (recursion_ok || surfaced),
            format!("recursion valid: {recursion_ok}, source {:?}", c.source),
        );
        let bad: Vec<usize> = c.recursion.iter().enumerate().filter(|(_, (_, ok))| !ok).map(|(i, _)| i + 1).collect();
        computed.push(format!("g={g}: {:?}, recursion not fixed for C_{bad:?}", c.source));
    }
    r.computed = computed.join("; ");
    r.finish()
}

/// Reciprocal test polynomials and block-diagonal matrices for the rank oracle.
pub fn rank_corpus() -> Vec<QMatrix> {
    let mut polys: Vec<RationalPoly> = Vec::new();
    for n in [3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 14, 15, 16, 18, 20, 22, 24, 30] {
        polys.push(cyclotomic(n));
    }
    let sq = |a: i64| RationalPoly::from_ints(&[1, -a, 1]);
    polys.push(sq(1).pow(2));
    polys.push(sq(1).pow(3));
    polys.push(&cyclotomic(3) * &cyclotomic(4));
    polys.push(&cyclotomic(4).pow(2) * &cyclotomic(6));
    for a in [3, 4, 5, -3, 7] {
        polys.push(sq(a));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let pool = [-6i64, -4, -3, 0, 1, 3, 4, 5, 6];
    while polys.len() < 40 {
        let k = rng.gen_range(2..=5);
        let p = (0..k).fold(RationalPoly::one(), |acc, _| &acc * &sq(pool[rng.gen_range(0..pool.len())]));
        polys.push(p);
    }
    let mut out: Vec<QMatrix> = polys.iter().map(|p| companion_matrix(p).expect("monic")).collect();
    // non-cyclic modules
    let block = |ps: &[RationalPoly]| {
        let n: usize = ps.iter().map(|p| p.degree().unwrap()).sum();
        let mut m = QMatrix::zeros(n, n);
        let mut off = 0;
        for p in ps {
            let c = companion_matrix(p).unwrap();
            for i in 0..c.rows() {
                for j in 0..c.cols() {
                    m[(off + i, off + j)] = c[(i, j)].clone();
                }
            }
            off += c.rows();
        }
        m
    };
    out.push(block(&[sq(1), sq(1)]));
    out.push(block(&[sq(3), sq(3), sq(1)]));
    out.push(block(&[sq(1), sq(1).pow(2)]));
    out.push(block(&[sq(3), sq(3).pow(2), sq(5)]));
    out
}

fn criterion_6() -> VerifyResult {
    let mut r = VerifyResult::new("6", "rank formula vs kernel", "zero disagreements on >= 30 certified cases");
    let mut certified = 0;
    let mut disagreements = Vec::new();
    for t in rank_corpus() {
        let divisors = module_divisors(&t);
        let kernel = center_from_t(&t).rank;
        match center_rank_formula(&divisors) {
            Ok(Some(k)) => {
                certified += 1;
                if k != kernel {
                    disagreements.push(format!("{divisors:?}: formula {k}, kernel {kernel}"));
                }
            }
            Ok(None) => r.notes.push(format!("uncertified: {divisors:?}")),
            Err(e) => disagreements.push(format!("{divisors:?}: {e}")),
        }
    }
    r.computed = format!("{certified} certified, {} disagreements", disagreements.len());
    r.check("at least 30 certified", certified >= 30, certified.to_string());
    r.check("no disagreements", disagreements.is_empty(), disagreements.join("; "));
    r.finish()
}

fn criterion_7() -> VerifyResult {
    let mut r = VerifyResult::new("7", "lift independence", "Grams identical for 20 random lifts per knot");
    let mut runs = 0;
    for name in bundled_names() {
        let pd = match bundled_knot(&name) {
            Ok(p) => p,
            Err(e) => return r.error(e),
        };
        let base = match qk_form_with_lift(&pd, None) {
            Ok(b) => b,
            Err(e) => return r.error(format!("{name}: {e}")),
        };
        let m = base.module_poly.degree().unwrap_or(0);
        let mut same = true;
        for seed in 1..=20 {
            let a = random_a(m, seed);
            match qk_form_with_lift(&pd, Some(&a)) {
                Ok(x) => same &= x.grams == base.grams,
                Err(e) => return r.error(format!("{name} seed {seed}: {e}")),
            }
            runs += 1;
        }
        r.check(&format!("{name}"), same, "");
    }
    r.computed = format!("{runs} random lifts compared");
    r.finish()
}

/// `f_1` and `f_2` as twist words on the genus-2 curve set.
pub const F1_TWISTS: &str = "2 3 -4 -5 1";
pub const F2_TWISTS: &str = "2 3 3 3 -4 -5 1";
pub const F1_SUMMED: &str = "w^2 - 2*x*w + x^2 - w*y + x*y + y^2 + w*z - x*z + y*z + z^2";

fn criterion_8() -> VerifyResult {
    let mut r = VerifyResult::new(
        "8",
        "mapping-class example",
        "char polys (t^2-t+1)^2; same rational canonical form; f_1 display; f_2 = 3 f_1; 3 not a square; inequivalent",
    );
    let build = |w: &str| w.parse().and_then(|tw| compose_twists(2, &tw));
    let (f1, f2) = match (build(F1_TWISTS), build(F2_TWISTS)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return r.error(e),
    };
    let target = poly("t^2 - t + 1").pow(2);
    let (m1, cp1) = homology_action(&f1);
    let (m2, cp2) = homology_action(&f2);
    r.check("char polys", cp1 == target && cp2 == target, format!("{cp1}; {cp2}"));
    let (rc1, rc2) = (rational_canonical_form(&m1), rational_canonical_form(&m2));
    r.check("rational canonical forms agree", rc1 == rc2, format!("{rc1:?}"));
    let (q1, q2) = match (qf_form(&f1), qf_form(&f2)) {
        (Ok(a), Ok(b)) => (a.form_set().summed(), b.form_set().summed()),
        (Err(e), _) | (_, Err(e)) => return r.error(e),
    };
    let s1 = nilform::quadratic::render_form(&q1.grams[0]);
    let s2 = nilform::quadratic::render_form(&q2.grams[0]);
    r.computed = format!("f_1: {s1}; f_2: {s2}");
    let display = parse_form(F1_SUMMED, 4).map(|g| FormSet { grams: vec![g], ..q1.clone() });
    let ok = display.and_then(|d| unit_equivalent(&d, &q1, None));
    r.check("f_1 display", ok.as_ref().is_ok_and(|x| *x), format!("{ok:?}"));
    let three = q1.grams[0].scale(&q(3));
    let ratio = ratio_of(&q2.grams[0], &q1.grams[0]);
    r.check("f_2 = 3 f_1", q2.grams[0] == three, format!("f_2 = {} f_1", ratio.map_or("?".into(), |c| fmt_q(&c))));
    let sq = scalar_square_test(&q(3), &target);
    r.check("3 is not a square", sq == Ok(SquareVerdict::No), format!("{sq:?}"));
    let cmp = compare_forms(&q1, &q2, &WitnessSearch::for_dimension(4));
    r.check(
        "reported inequivalent",
        cmp.as_ref().is_ok_and(|c| c.verdict == Verdict::Inequivalent),
        format!("{:?}", cmp.map(|c| (c.verdict, c.first_witness.map(|w| fmt_q(&w.c))))),
    );
    r.finish()
}

fn ratio_of(a: &QMatrix, b: &QMatrix) -> Option<Rational> {
    let (i, y) = b.entries().iter().enumerate().find(|(_, y)| **y != q(0))?;
    let c = &a.entries()[i] / y;
    (b.scale(&c) == *a).then_some(c)
}

fn criterion_9(ctx: &Ctx) -> VerifyResult {
    let mut r = VerifyResult::new("9", "property suites", "all sampled identities hold");
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let rq = |rng: &mut ChaCha8Rng| qf(rng.gen_range(-6..=6), rng.gen_range(1..=3));
    let m = 4;
    let f = poly("t^4 - 3*t^3 + 5*t^2 - 3*t + 1");
    let t = companion_matrix(&f).unwrap();
    let (mut assoc, mut ident, mut inv, mut pp2, mut pp4, mut hom, mut semi) = (true, true, true, true, true, true, true);
    let lift = build_tau_lift(&t, Some(&random_a(m, 9))).unwrap();
    let sym = lift.b().iter().all(|b| b.is_symmetric());
    for _ in 0..25 {
        let el = |rng: &mut ChaCha8Rng| {
            Nil2Element::new((0..m).map(|_| rq(rng)).collect(), (0..6).map(|_| rq(rng)).collect()).unwrap()
        };
        let (g, h, k) = (el(&mut rng), el(&mut rng), el(&mut rng));
        let mul = |a: &Nil2Element, b: &Nil2Element| nil2_mul(a, b).unwrap();
        assoc &= mul(&mul(&g, &h), &k) == mul(&g, &mul(&h, &k));
        ident &= mul(&g, &Nil2Element::identity(m)) == g;
        inv &= mul(&g, &nil2_inv(&g)).is_identity();
        let (x, y) = (g.ab.clone(), h.ab.clone());
        let (tx, ty) = (t.mul_vec(&x), t.mul_vec(&y));
        pp2 &= lift.e().mul_vec(&wedge_alt(&x, &y)) == wedge_alt(&tx, &ty);
        let sum: Vec<Rational> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let rhs: Vec<Rational> = lift
            .lambda(&x)
            .iter()
            .zip(lift.lambda(&y))
            .zip(wedge(&tx, &ty).unwrap())
            .zip(lift.e().mul_vec(&wedge(&x, &y).unwrap()))
            .map(|(((a, b), c), d)| a + b + c - d)
            .collect();
        pp4 &= lift.lambda(&sum) == rhs;
        hom &= tau_apply(&lift, &mul(&g, &h), 1) == mul(&tau_apply(&lift, &g, 1), &tau_apply(&lift, &h, 1));
        let (u, v) = (SemidirectElement { g: g.clone(), n: rng.gen_range(-2..=2) }, SemidirectElement { g: h.clone(), n: rng.gen_range(-2..=2) });
        let uv = semidirect_mul(&u, &v, &lift).unwrap();
        semi &= semidirect_mul(&uv, &semidirect_inv(&uv, &lift), &lift).unwrap() == SemidirectElement::identity(m);
    }
    r.check("associativity", assoc, "");
    r.check("identity", ident, "");
    r.check("inverse", inv, "");
    r.check("commutator identity under E", pp2, "");
    r.check("lambda polarization", pp4, "");
    r.check("B symmetric", sym, "");
    r.check("tau homomorphism", hom, "");
    r.check("semidirect inverse", semi, "");
    let mut knots: Vec<(String, nilform::Result<PDCode>)> = bundled_names().into_iter().map(|n| (n.clone(), bundled_knot(&n))).collect();
    knots.push(("P(3,3,-3)".into(), pretzel(&[3, 3, -3])));
    knots.push(("P(9,3,-3)".into(), pretzel(&[9, 3, -3])));
    for (name, pd) in knots {
        let fox = pd.as_ref().map_err(Clone::clone).and_then(|pd| alexander_divisors(&wirtinger(pd)));
        match &fox {
            Ok(d) => {
                let product = d.divisors.iter().fold(RationalPoly::one(), |acc, f| &acc * f);
                let reciprocal = d.divisors.iter().all(|f| {
                    let r = f.reversed();
                    r.scale(&r.lead().recip()) == *f && f.eval(&q(1)) != q(0) && f.eval(&q(-1)) != q(0)
                });
                r.check(&format!("{name} Fox divisors"), reciprocal && product == d.delta, strs(&d.display()));
            }
            Err(e) => r.check(&format!("{name} Fox divisors"), false, e.to_string()),
        }
        let rep = pd.and_then(|pd| ctx.qk(&pd));
        match rep {
            Ok(rep) => {
                r.check(
                    &format!("{name} centrality/homogeneity/isometry"),
                    rep.homogeneous_ok && rep.quadratic_ok && rep.isometry_ok,
                    format!("hom {} quad {} iso {}", rep.homogeneous_ok, rep.quadratic_ok, rep.isometry_ok),
                );
            }
            Err(e) => r.check(&format!("{name} pipeline"), false, e.to_string()),
        }
    }
    r.computed = format!("{} checks", r.checks.len());
    r.finish()
}

fn criterion_10(ctx: &Ctx) -> VerifyResult {
    let mut r = VerifyResult::new("10", "unknot", "no divisors, zero-dimensional form");
    match ctx.qk(&PDCode::unknot()) {
        Ok(rep) => {
            r.check("divisors empty", rep.divisors.is_empty(), "");
            r.check("dimension 0", rep.hk_dimension == 0 && rep.grams.is_empty(), "");
            let json = serde_json::to_string(&rep.summary());
            r.check("renders", json.is_ok(), "");
            r.computed = json.unwrap_or_default();
        }
        Err(e) => return r.error(e),
    }
    r.finish()
}

fn criterion_11(ctx: &Ctx) -> VerifyResult {
    let mut r = VerifyResult::new("11", "nondegeneracy probe", "every Gram determinant nonzero");
    r.informational = true;
    let mut dets = Vec::new();
    for name in bundled_names() {
        match ctx.knot(&name) {
            Ok(rep) => {
                let d: Vec<String> = rep.determinants.iter().map(fmt_q).collect();
                r.check(&name, rep.nondegenerate().iter().all(|x| *x), d.join(", "));
                dets.push(format!("{name}: [{}]", d.join(", ")));
            }
            Err(e) => r.check(&name, false, e.to_string()),
        }
    }
    r.computed = dets.join("; ");
    r.finish()
}

fn case_12n_582(ctx: &Ctx) -> VerifyResult {
    let mut r = VerifyResult::new("12n_582", "optional table knot", "module (t^2 - t + 1)^2");
    let Some(table) = &ctx.opts.table else {
        r.status = Status::Skipped;
        r.notes.push("no knot table supplied".into());
        return r;
    };
    if !table.contains_key("12n_582") {
        r.status = Status::Skipped;
        r.notes.push("table has no 12n_582 entry".into());
        return r;
    }
    match table_knot(table, "12n_582").and_then(|pd| ctx.qk(&pd)) {
        Ok(rep) => {
            r.computed = strs(&rep.display);
            r.check("module", rep.divisors == vec![poly("t^2 - t + 1").pow(2)], strs(&rep.summary().divisors));
            r.check("isometry and homogeneity", rep.isometry_ok && rep.homogeneous_ok, "");
        }
        Err(e) => return r.error(e),
    }
    r.finish()
}

/// Reads a table file for [`VerifyOptions::table`].
pub fn read_table(path: &str) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| nilform::Error::Lookup(format!("cannot read table {path}: {e}")))?;
    load_table(&text)
}
