//! From a planar diagram code to the quadratic invariant `𝒬_K`.
//!
//! Conventions: `X(a, b, c, d)` lists the four edges counterclockwise,
//! starting from the incoming under-edge `a`, so `c = a + 1`. The crossing
//! is positive iff `b − d ≡ 1 (mod 2n)`. Arcs are the classes of edges
//! joined through over-passes, numbered by their first edge; arc 0 carries
//! edge 1 and is the meridian arc. Each crossing gives the Wirtinger
//! relation `x_out = x_over^{−ε} x_in x_over^{ε}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::center::{full_center_report, project_to_center, CenterReport};
use crate::exact_algebra::{
    companion_matrix, fmt_q, monic_normalize, q, reciprocal_check, smith_divisors, unit_vec,
    vec_add, vec_scale, vec_sub, vec_zero, PolyMatrix, QMatrix, Rational, RationalPoly,
};
use crate::nilpotent_group::{
    build_tau_lift, evaluate_word, pair_count, AbelianVector, CommutatorVector, Nil2Element,
    SemidirectElement, TauLift,
};
use crate::quadratic::{self, inertia, normalize_display, render_form, FormSet, Witness, WitnessSearch};
use crate::{Error, Result};

/// Word in arc generators: `(arc, exponent)`.
pub type Word = Vec<(usize, i64)>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PDCode {
    pub crossings: Vec<[u32; 4]>,
}

impl PDCode {
    pub fn unknot() -> Self {
        PDCode { crossings: vec![] }
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }
}

impl fmt::Display for PDCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .crossings
            .iter()
            .map(|[a, b, c, d]| format!("X({a},{b},{c},{d})"))
            .collect();
        f.write_str(&parts.join(";"))
    }
}

/// Parses `"X(a,b,c,d);…"` (also `X[…]`, `PD[…]` wrappers, comma separators)
/// or a JSON array of 4-tuples, then validates it as an oriented knot.
pub fn parse_pd(text: &str) -> Result<PDCode> {
    let s = text.trim();
    let crossings = if s.starts_with('[') {
        let raw: Vec<Vec<i64>> =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("bad PD JSON: {e}")))?;
        raw.into_iter().map(|t| to_tuple(&t)).collect::<Result<Vec<_>>>()?
    } else {
        parse_pd_text(s)?
    };
    validate_pd(crossings)
}

fn to_tuple(t: &[i64]) -> Result<[u32; 4]> {
    if t.len() != 4 {
        return Err(Error::Parse(format!("crossing needs 4 labels, got {}", t.len())));
    }
    let mut out = [0u32; 4];
    for (o, &x) in out.iter_mut().zip(t) {
        *o = u32::try_from(x).ok().filter(|&v| v > 0).ok_or_else(|| Error::Parse(format!("bad label {x}")))?;
    }
    Ok(out)
}

fn parse_pd_text(s: &str) -> Result<Vec<[u32; 4]>> {
    let s = s.strip_prefix("PD[").and_then(|r| r.strip_suffix(']')).unwrap_or(s);
    let mut out = Vec::new();
    let mut rest = s;
    loop {
        rest = rest.trim_start_matches(|c: char| c.is_whitespace() || c == ';' || c == ',');
        if rest.is_empty() {
            break;
        }
        let body = rest
            .strip_prefix('X')
            .ok_or_else(|| Error::Parse(format!("expected X(...) at '{rest}'")))?;
        let (close, body) = match body.chars().next() {
            Some('(') => (')', &body[1..]),
            Some('[') => (']', &body[1..]),
            _ => return Err(Error::Parse("expected '(' after X".into())),
        };
        let end = body.find(close).ok_or_else(|| Error::Parse("unclosed crossing".into()))?;
        let nums = body[..end]
            .split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad label '{}'", x.trim()))))
            .collect::<Result<Vec<_>>>()?;
        out.push(to_tuple(&nums)?);
        rest = &body[end + 1..];
    }
    Ok(out)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn validate_pd(crossings: Vec<[u32; 4]>) -> Result<PDCode> {
    let n = crossings.len();
    let m = 2 * n as u32;
    let mut count = vec![0usize; m as usize + 1];
    for t in &crossings {
        for &l in t {
            if l > m {
                return Err(Error::Parse(format!("label {l} out of range 1..{m}")));
            }
            count[l as usize] += 1;
        }
    }
    if let Some(l) = (1..=m as usize).find(|&l| count[l] != 2) {
        return Err(Error::Parse(format!("label {l} appears {} times", count[l])));
    }
    let mut uf = UnionFind::new(m as usize + 1);
    for &[a, b, c, d] in &crossings {
        uf.union(a as usize, c as usize);
        uf.union(b as usize, d as usize);
    }
    let root = uf.find(1.min(m as usize));
    if (1..=m as usize).any(|l| uf.find(l) != root) {
        return Err(Error::Parse("not a knot".into()));
    }
    let next = |x: u32| x % m + 1;
    for (k, &[a, b, c, d]) in crossings.iter().enumerate() {
        if c != next(a) || (b != next(d) && d != next(b)) {
            return Err(Error::Parse(format!("crossing {k} is not consistently oriented")));
        }
    }
    Ok(PDCode { crossings })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WirtingerCrossing {
    pub under_in: usize,
    pub under_out: usize,
    pub over: usize,
    pub sign: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WirtingerPresentation {
    pub arc_count: usize,
    pub crossings: Vec<WirtingerCrossing>,
    pub meridian_arc: usize,
    pub longitude: Word,
    pub writhe: i64,
}

impl WirtingerPresentation {
    /// `x_over^{−ε} x_in x_over^{ε}`, the value forced on `x_out`.
    pub fn conjugate_word(c: &WirtingerCrossing) -> Word {
        vec![(c.over, -c.sign), (c.under_in, 1), (c.over, c.sign)]
    }

    /// `x_out^{-1} x_over^{−ε} x_in x_over^{ε}`
    pub fn relators(&self) -> Vec<Word> {
        self.crossings
            .iter()
            .map(|c| {
                let mut w = vec![(c.under_out, -1)];
                w.extend(Self::conjugate_word(c));
                w
            })
            .collect()
    }
}

pub fn wirtinger(pd: &PDCode) -> WirtingerPresentation {
    let n = pd.len();
    if n == 0 {
        return WirtingerPresentation { arc_count: 1, crossings: vec![], meridian_arc: 0, longitude: vec![], writhe: 0 };
    }
    let m = 2 * n;
    let mut uf = UnionFind::new(m + 1);
    for &[_, b, _, d] in &pd.crossings {
        uf.union(b as usize, d as usize);
    }
    let mut arc_of = vec![usize::MAX; m + 1];
    let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
    for e in 1..=m {
        let r = uf.find(e);
        let next = ids.len();
        arc_of[e] = *ids.entry(r).or_insert(next);
    }
    let crossings: Vec<WirtingerCrossing> = pd
        .crossings
        .iter()
        .map(|&[a, b, c, d]| WirtingerCrossing {
            under_in: arc_of[a as usize],
            under_out: arc_of[c as usize],
            over: arc_of[b as usize],
            sign: if (b as i64 - d as i64).rem_euclid(m as i64) == 1 { 1 } else { -1 },
        })
        .collect();
    let mut longitude = Vec::new();
    let mut writhe = 0;
    for e in 1..=m as u32 {
        if let Some(k) = pd.crossings.iter().position(|t| t[0] == e) {
            let c = crossings[k];
            longitude.push((c.over, c.sign));
            writhe += c.sign;
        }
    }
    if writhe != 0 {
        longitude.push((0, -writhe));
    }
    WirtingerPresentation { arc_count: ids.len(), crossings, meridian_arc: 0, longitude, writhe }
}

/// Elementary divisors of the Alexander module with the cross-check data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorData {
    /// Monic `f_1 | … | f_n`.
    pub divisors: Vec<RationalPoly>,
    /// Monic product of the divisors.
    pub delta: RationalPoly,
    /// Monic normalization of a maximal minor of the Fox matrix.
    pub minor_delta: RationalPoly,
}

impl DivisorData {
    pub fn top(&self) -> Option<&RationalPoly> {
        self.divisors.last()
    }

    /// Primitive integer forms, e.g. `2*t^2 - 3*t + 2`.
    pub fn display(&self) -> Vec<String> {
        self.divisors.iter().map(|d| d.primitive_display().to_string()).collect()
    }
}

/// Abelianized Fox Jacobian: one row per relator, one column per arc, each
/// row shifted by a power of `t` to be polynomial.
pub fn fox_matrix(w: &WirtingerPresentation) -> PolyMatrix {
    abelianized_fox(&w.relators(), w.arc_count, &|_| 1)
}

/// Fox derivatives of `relators` pushed to `Q[t^{±1}]` by `x_g ↦ t^{weight(g)}`;
/// each row is multiplied by a power of `t` to clear negative exponents.
pub fn abelianized_fox(relators: &[Word], gens: usize, weight: &dyn Fn(usize) -> i64) -> PolyMatrix {
    let mut rows = Vec::new();
    for r in relators {
        let mut entries: Vec<BTreeMap<i64, Rational>> = vec![BTreeMap::new(); gens];
        let mut pref = 0i64;
        for &(g, e) in r {
            for _ in 0..e.unsigned_abs() {
                if e > 0 {
                    *entries[g].entry(pref).or_insert_with(Rational::zero) += q(1);
                    pref += weight(g);
                } else {
                    pref -= weight(g);
                    *entries[g].entry(pref).or_insert_with(Rational::zero) -= q(1);
                }
            }
        }
        let low = entries.iter().flat_map(|m| m.keys().copied()).min().unwrap_or(0);
        rows.push(
            entries
                .into_iter()
                .map(|m| {
                    let mut c = Vec::new();
                    for (k, v) in m {
                        let idx = (k - low) as usize;
                        if c.len() <= idx {
                            c.resize(idx + 1, Rational::zero());
                        }
                        c[idx] += v;
                    }
                    RationalPoly::new(c)
                })
                .collect(),
        );
    }
    PolyMatrix::from_rows(rows)
}

/// Merges adjacent powers of the same generator and drops zero exponents.
pub fn reduce_word(w: &[(usize, i64)]) -> Word {
    let mut out: Word = Vec::new();
    for &(g, e) in w {
        match out.last_mut() {
            Some((h, f)) if *h == g => {
                *f += e;
                if *f == 0 {
                    out.pop();
                }
            }
            _ if e != 0 => out.push((g, e)),
            _ => {}
        }
    }
    out
}

fn strip_t(p: &RationalPoly) -> RationalPoly {
    let k = p.coeffs().iter().take_while(|c| c.is_zero()).count();
    RationalPoly::new(p.coeffs()[k..].to_vec())
}

/// Alexander divisors via Fox calculus and Smith normal form, with the
/// checks every knot module passes: reciprocity, `f_i(±1) ≠ 0`, and
/// `Π f_i ≐` a maximal minor of the Fox matrix.
pub fn alexander_divisors(w: &WirtingerPresentation) -> Result<DivisorData> {
    let bad = |m: String| Error::Convention(format!("not a knot-like module: {m}"));
    if w.crossings.is_empty() {
        let one = RationalPoly::one();
        return Ok(DivisorData { divisors: vec![], delta: one.clone(), minor_delta: one });
    }
    let fox = fox_matrix(w).without_col(w.meridian_arc);
    // t is a unit of Q[t^{±1}]
    let divisors: Vec<RationalPoly> = smith_divisors(&fox)
        .iter()
        .map(strip_t)
        .filter(|d| d.degree().is_some_and(|k| k > 0))
        .collect();
    for d in &divisors {
        if !reciprocal_check(d)? {
            return Err(bad(format!("{d} is not reciprocal")));
        }
        if d.eval(&q(1)).is_zero() || d.eval(&q(-1)).is_zero() {
            return Err(bad(format!("{d} vanishes at ±1")));
        }
    }
    let delta = divisors.iter().fold(RationalPoly::one(), |acc, d| &acc * d);
    let n = fox.rows();
    let square = PolyMatrix::from_rows(
        (0..n - 1).map(|i| (0..fox.cols()).map(|j| fox[(i, j)].clone()).collect()).collect(),
    );
    let det = square.determinant();
    if det.is_zero() {
        return Err(bad("vanishing Fox minor".into()));
    }
    let minor_delta = monic_normalize(&strip_t(&det))?;
    if minor_delta != delta {
        return Err(bad(format!("divisor product {delta} differs from Fox minor {minor_delta}")));
    }
    Ok(DivisorData { divisors, delta, minor_delta })
}

/// Values `a_γ ∈ Q[t]/(f_n)` (power-basis coordinates) of every arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcAssignment {
    pub values: Vec<AbelianVector>,
}

impl ArcAssignment {
    pub fn zero(arcs: usize, m: usize) -> Self {
        ArcAssignment { values: vec![vec_zero(m); arcs] }
    }

    fn elements(&self, b: &[CommutatorVector]) -> HashMap<usize, SemidirectElement> {
        self.values
            .iter()
            .zip(b)
            .enumerate()
            .map(|(g, (a, bv))| {
                (g, SemidirectElement { g: Nil2Element { ab: a.clone(), comm: bv.clone() }, n: 1 })
            })
            .collect()
    }
}

/// The space `ℋ_K` with a chosen basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HkSpace {
    pub module_poly: RationalPoly,
    pub basis: Vec<ArcAssignment>,
    /// Arc whose value gives the coordinates, when its value map is an
    /// isomorphism `ℋ_K → Q[t]/(f_n)`.
    pub param_arc: Option<usize>,
    /// Matrix of `t` on `ℋ_K` in the chosen basis.
    pub t_action: QMatrix,
}

impl HkSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// `Σ v_k · basis_k`
    pub fn assignment(&self, v: &[Rational]) -> ArcAssignment {
        assert_eq!(v.len(), self.basis.len());
        let arcs = self.basis.first().map_or(0, |b| b.values.len());
        let m = self.module_poly.degree().unwrap_or(0);
        let mut out = ArcAssignment::zero(arcs, m);
        for (c, b) in v.iter().zip(&self.basis) {
            for (o, x) in out.values.iter_mut().zip(&b.values) {
                *o = vec_add(o, &vec_scale(x, c));
            }
        }
        out
    }
}

fn flatten(a: &ArcAssignment) -> Vec<Rational> {
    a.values.iter().skip(1).flatten().cloned().collect()
}

/// Residual `value(x_out) − value(x_over^{−ε} x_in x_over^{ε})` per
/// crossing, abelian part if `abelian`, else commutator part.
fn crossing_residuals(
    w: &WirtingerPresentation,
    a: &ArcAssignment,
    b: &[CommutatorVector],
    lift: &TauLift,
    abelian: bool,
) -> Result<Vec<Rational>> {
    let elems = a.elements(b);
    let mut out = Vec::new();
    for c in &w.crossings {
        let rhs = evaluate_word(&WirtingerPresentation::conjugate_word(c), &elems, lift)?;
        debug_assert_eq!(rhs.n, 1);
        let lhs = &elems[&c.under_out].g;
        if abelian {
            out.extend(vec_sub(&lhs.ab, &rhs.g.ab));
        } else {
            out.extend(vec_sub(&lhs.comm, &rhs.g.comm));
        }
    }
    Ok(out)
}

/// Basis of `ℋ_K`: arc assignments into `Q[t]/(f_n)` with `a_0 = 0`
/// satisfying every abelian crossing relation.
pub fn hk_basis(w: &WirtingerPresentation, f_n: &RationalPoly) -> Result<HkSpace> {
    let f = monic_normalize(f_n)?;
    let m = f.degree().unwrap_or(0);
    let arcs = w.arc_count;
    if m == 0 || w.crossings.is_empty() {
        return Ok(HkSpace { module_poly: f, basis: vec![], param_arc: None, t_action: QMatrix::zeros(0, 0) });
    }
    let t = companion_matrix(&f)?;
    let lift = build_tau_lift(&t, None)?;
    let p = pair_count(m);
    let zero_b = vec![vec_zero(p); arcs];
    let unknowns = (arcs - 1) * m;
    let unflatten = |x: &[Rational]| {
        let mut a = ArcAssignment::zero(arcs, m);
        for g in 1..arcs {
            a.values[g] = x[(g - 1) * m..g * m].to_vec();
        }
        a
    };
    let mut cols = Vec::with_capacity(unknowns);
    for k in 0..unknowns {
        cols.push(crossing_residuals(w, &unflatten(&unit_vec(unknowns, k)), &zero_b, &lift, true)?);
    }
    let sys = QMatrix::from_cols(w.crossings.len() * m, &cols);
    let kernel = sys.kernel_basis();
    let raw: Vec<ArcAssignment> = kernel.iter().map(|x| unflatten(x)).collect();
    let d = raw.len();

    let mut basis = raw.clone();
    let mut param_arc = None;
    if d == m {
        for g in 1..arcs {
            let vg = QMatrix::from_cols(m, &raw.iter().map(|a| a.values[g].clone()).collect::<Vec<_>>());
            if let Ok(inv) = vg.inverse() {
                basis = (0..m)
                    .map(|k| {
                        let coeffs = inv.col(k);
                        let mut a = ArcAssignment::zero(arcs, m);
                        for (c, r) in coeffs.iter().zip(&raw) {
                            for (o, x) in a.values.iter_mut().zip(&r.values) {
                                *o = vec_add(o, &vec_scale(x, c));
                            }
                        }
                        a
                    })
                    .collect();
                param_arc = Some(g);
                break;
            }
        }
    }
    let flat = QMatrix::from_cols(unknowns, &basis.iter().map(flatten).collect::<Vec<_>>());
    let mut t_cols = Vec::with_capacity(d);
    for b in &basis {
        let moved = ArcAssignment { values: b.values.iter().map(|v| t.mul_vec(v)).collect() };
        t_cols.push(flat.solve_unique(&flatten(&moved))?);
    }
    let t_action = QMatrix::from_cols(d, &t_cols);
    Ok(HkSpace { module_poly: f, basis, param_arc, t_action })
}

/// Solves the commutator parts `b_γ` (with `b_0 = 0`) of the lift of an
/// arc assignment. The linear part of the system does not depend on the
/// assignment and is computed once.
pub struct LiftSolver<'a> {
    w: &'a WirtingerPresentation,
    lift: &'a TauLift,
    linear: QMatrix,
}

impl<'a> LiftSolver<'a> {
    pub fn new(w: &'a WirtingerPresentation, lift: &'a TauLift) -> Result<Self> {
        let m = lift.rank();
        let p = pair_count(m);
        let arcs = w.arc_count;
        let zero_a = ArcAssignment::zero(arcs, m);
        let unknowns = (arcs - 1) * p;
        let base = crossing_residuals(w, &zero_a, &vec![vec_zero(p); arcs], lift, false)?;
        let mut cols = Vec::with_capacity(unknowns);
        for k in 0..unknowns {
            let b = Self::unflatten(arcs, p, &unit_vec(unknowns, k));
            cols.push(vec_sub(&crossing_residuals(w, &zero_a, &b, lift, false)?, &base));
        }
        let linear = QMatrix::from_cols(w.crossings.len() * p, &cols);
        if linear.rank() != unknowns {
            return Err(Error::Convention("lift system is not uniquely solvable".into()));
        }
        Ok(LiftSolver { w, lift, linear })
    }

    fn unflatten(arcs: usize, p: usize, x: &[Rational]) -> Vec<CommutatorVector> {
        let mut b = vec![vec_zero(p); arcs];
        for g in 1..arcs {
            b[g] = x[(g - 1) * p..g * p].to_vec();
        }
        b
    }

    /// The system matrix (one block row per crossing, one block column per
    /// non-meridian arc).
    pub fn linear_part(&self) -> &QMatrix {
        &self.linear
    }

    pub fn solve(&self, f: &ArcAssignment) -> Result<Vec<CommutatorVector>> {
        let p = pair_count(self.lift.rank());
        let arcs = self.w.arc_count;
        let r0 = crossing_residuals(self.w, f, &vec![vec_zero(p); arcs], self.lift, false)?;
        let x = self.linear.solve_unique(&vec_scale(&r0, &q(-1)))?;
        Ok(Self::unflatten(arcs, p, &x))
    }

    /// `f̃(𝔩)`, checked to be `(0, c, 0)` with `c` fixed by `E`.
    pub fn invariant(&self, f: &ArcAssignment) -> Result<CommutatorVector> {
        let b = self.solve(f)?;
        longitude_value(f, &b, self.w, self.lift)
    }
}

fn longitude_value(
    f: &ArcAssignment,
    b: &[CommutatorVector],
    w: &WirtingerPresentation,
    lift: &TauLift,
) -> Result<CommutatorVector> {
    let v = evaluate_word(&w.longitude, &f.elements(b), lift)?;
    let violated = || Error::Convention("longitude convention violated".into());
    if v.n != 0 || v.g.ab.iter().any(|x| !x.is_zero()) {
        return Err(violated());
    }
    if lift.e().mul_vec(&v.g.comm) != v.g.comm {
        return Err(violated());
    }
    Ok(v.g.comm)
}

/// The unique lift of `f` with `b_0 = 0`.
pub fn lift_assignment(f: &ArcAssignment, w: &WirtingerPresentation, lift: &TauLift) -> Result<Vec<CommutatorVector>> {
    LiftSolver::new(w, lift)?.solve(f)
}

/// Evaluates the longitude under the lift of `f`, with the centrality checks.
pub fn evaluate_invariant(f: &ArcAssignment, w: &WirtingerPresentation, lift: &TauLift) -> Result<CommutatorVector> {
    if w.crossings.is_empty() {
        return Ok(vec_zero(pair_count(lift.rank())));
    }
    LiftSolver::new(w, lift)?.invariant(f)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticFormReport {
    pub module_poly: RationalPoly,
    pub divisors: Vec<RationalPoly>,
    pub hk_dimension: usize,
    pub param_arc: Option<usize>,
    /// Matrix of `t` on the domain of the form.
    pub t_action: QMatrix,
    pub center: CenterReport,
    /// One Gram matrix per center coordinate.
    pub grams: Vec<QMatrix>,
    pub display: Vec<String>,
    pub display_normalized: Vec<String>,
    pub isometry_ok: bool,
    pub homogeneous_ok: bool,
    /// Polarization is bilinear and reconstructs sampled values.
    pub quadratic_ok: bool,
    pub determinants: Vec<Rational>,
    /// `(positive, negative, zero)` per coordinate.
    pub signatures: Vec<(usize, usize, usize)>,
}

impl QuadraticFormReport {
    pub fn nondegenerate(&self) -> Vec<bool> {
        self.determinants.iter().map(|d| !d.is_zero()).collect()
    }

    pub fn form_set(&self) -> FormSet {
        FormSet { module_poly: self.module_poly.clone(), t_action: self.t_action.clone(), grams: self.grams.clone() }
    }

    pub fn summary(&self) -> ReportSummary {
        ReportSummary {
            name: None,
            pd: None,
            module_poly: self.module_poly.primitive_display().to_string(),
            divisors: self.divisors.iter().map(|d| d.primitive_display().to_string()).collect(),
            hk_dimension: self.hk_dimension,
            param_arc: self.param_arc,
            center_rank: self.center.rank,
            basis_kind: serde_json::to_value(self.center.basis_kind())
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default(),
            grams: self
                .grams
                .iter()
                .map(|g| g.to_rows().iter().map(|r| r.iter().map(fmt_q).collect()).collect())
                .collect(),
            display: self.display.clone(),
            display_normalized: self.display_normalized.clone(),
            isometry_ok: self.isometry_ok,
            homogeneous_ok: self.homogeneous_ok,
            quadratic_ok: self.quadratic_ok,
            nondegenerate: self.nondegenerate(),
            determinants: self.determinants.iter().map(fmt_q).collect(),
            signatures: self.signatures.iter().map(|&(a, b, c)| [a, b, c]).collect(),
            char_poly: None,
            zeta_fixed: None,
            hf_dimension: None,
            summed_display: None,
        }
    }
}

/// Serializable view of a report; rationals as `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportSummary {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pd: Option<String>,
    pub module_poly: String,
    pub divisors: Vec<String>,
    pub hk_dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param_arc: Option<usize>,
    pub center_rank: usize,
    pub basis_kind: String,
    pub grams: Vec<Vec<Vec<String>>>,
    pub display: Vec<String>,
    pub display_normalized: Vec<String>,
    pub isometry_ok: bool,
    pub homogeneous_ok: bool,
    pub quadratic_ok: bool,
    pub nondegenerate: Vec<bool>,
    pub determinants: Vec<String>,
    pub signatures: Vec<[usize; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub char_poly: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta_fixed: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hf_dimension: Option<usize>,
    /// Display of the sum of the center coordinates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summed_display: Option<String>,
}

/// Grams by polarization of a vector-valued `q` on `Q^d`, with the
/// homogeneity, bilinearity and isometry diagnostics.
pub(crate) fn build_form_report(
    module_poly: RationalPoly,
    divisors: Vec<RationalPoly>,
    param_arc: Option<usize>,
    t_action: QMatrix,
    center: CenterReport,
    qf: &dyn Fn(&[Rational]) -> Result<Vec<Rational>>,
) -> Result<QuadraticFormReport> {
    let d = t_action.rows();
    let r = center.coordinate_basis().len();
    let e = |i: usize| unit_vec(d, i);
    let zero = qf(&vec_zero(d))?;
    let mut homogeneous_ok = zero.iter().all(|x| x.is_zero());
    let diag: Vec<Vec<Rational>> = (0..d).map(|i| qf(&e(i))).collect::<Result<_>>()?;
    let mut pair = vec![vec![Vec::new(); d]; d];
    for i in 0..d {
        for s in [-1i64, 2, 3] {
            let v = qf(&vec_scale(&e(i), &q(s)))?;
            homogeneous_ok &= v == vec_scale(&diag[i], &q(s * s));
        }
        for j in i + 1..d {
            pair[i][j] = qf(&vec_add(&e(i), &e(j)))?;
        }
    }
    let mut grams = vec![QMatrix::zeros(d, d); r];
    for (k, g) in grams.iter_mut().enumerate() {
        for i in 0..d {
            g[(i, i)] = diag[i][k].clone();
            for j in i + 1..d {
                let v = (&pair[i][j][k] - &diag[i][k] - &diag[j][k]) / q(2);
                g[(i, j)] = v.clone();
                g[(j, i)] = v;
            }
        }
    }
    let mut quadratic_ok = true;
    for i in 0..d {
        for j in i + 1..d {
            for l in j + 1..d {
                let all = qf(&vec_add(&vec_add(&e(i), &e(j)), &e(l)))?;
                let il = qf(&vec_add(&e(i), &e(l)))?;
                let jl = qf(&vec_add(&e(j), &e(l)))?;
                for k in 0..r {
                    let defect = &all[k] - &pair[i][j][k] - &il[k] - &jl[k] + &diag[i][k] + &diag[j][k] + &diag[l][k];
                    quadratic_ok &= defect.is_zero();
                }
            }
        }
    }
    for sample in sample_vectors(d) {
        let direct = qf(&sample)?;
        let from_grams: Vec<Rational> = grams.iter().map(|g| quadratic::evaluate_form(g, &sample)).collect();
        quadratic_ok &= direct == from_grams;
    }
    let tt = t_action.transpose();
    let isometry_ok = grams.iter().all(|g| &(&tt * g) * &t_action == *g);
    let display = grams.iter().map(render_form).collect();
    let display_normalized = grams.iter().map(|g| render_form(&normalize_display(g))).collect();
    let determinants = grams.iter().map(|g| g.determinant()).collect();
    let signatures = grams.iter().map(inertia).collect();
    Ok(QuadraticFormReport {
        module_poly,
        divisors,
        hk_dimension: d,
        param_arc,
        t_action,
        center,
        grams,
        display,
        display_normalized,
        isometry_ok,
        homogeneous_ok,
        quadratic_ok,
        determinants,
        signatures,
    })
}

fn sample_vectors(d: usize) -> Vec<Vec<Rational>> {
    if d == 0 {
        return vec![];
    }
    vec![
        (0..d).map(|i| q(i as i64 + 1)).collect(),
        (0..d).map(|i| crate::exact_algebra::qf(if i % 2 == 0 { -3 } else { 5 }, i as i64 + 2)).collect(),
    ]
}

fn empty_center() -> CenterReport {
    CenterReport { rank: 0, basis: vec![], canonical: None, formula_rank: Some(0), fixed_map: QMatrix::zeros(0, 0) }
}

/// `𝒬_K` with the zero-`A` lift.
pub fn qk_form(pd: &PDCode) -> Result<QuadraticFormReport> {
    qk_form_with_lift(pd, None)
}

/// `𝒬_K` computed with the lift of `T` whose free linear part is `a`.
pub fn qk_form_with_lift(pd: &PDCode, a: Option<&QMatrix>) -> Result<QuadraticFormReport> {
    let w = wirtinger(pd);
    let div = alexander_divisors(&w)?;
    let Some(f) = div.top().cloned() else {
        let zero = |_: &[Rational]| -> Result<Vec<Rational>> { Ok(vec![]) };
        return build_form_report(RationalPoly::one(), vec![], None, QMatrix::zeros(0, 0), empty_center(), &zero);
    };
    let t = companion_matrix(&f)?;
    let lift = build_tau_lift(&t, a)?;
    let hk = hk_basis(&w, &f)?;
    let expected: usize = div.divisors.iter().map(|d| d.degree().unwrap_or(0)).sum();
    if hk.dimension() != expected {
        return Err(Error::Convention(format!(
            "solution space has dimension {}, expected {expected}",
            hk.dimension()
        )));
    }
    let center = full_center_report(&t);
    let solver = LiftSolver::new(&w, &lift)?;
    let qf = |v: &[Rational]| -> Result<Vec<Rational>> {
        let inv = solver.invariant(&hk.assignment(v))?;
        project_to_center(&inv, &center)
    };
    build_form_report(f.clone(), div.divisors.clone(), hk.param_arc, hk.t_action.clone(), center.clone(), &qf)
}

/// First `(c, u)` in a deterministic enumeration with
/// `𝒬₁(v) = c·𝒬₂(u·v)`; coordinate permutations allowed.
pub fn proportionality_witness(r1: &QuadraticFormReport, r2: &QuadraticFormReport) -> Result<Option<Witness>> {
    quadratic::proportionality_witness(&r1.form_set(), &r2.form_set(), &WitnessSearch::for_dimension(r1.hk_dimension))
}

pub use crate::quadratic::{scalar_square_test, SquareVerdict};

/// Knot table bundled with the library: name → PD string.
pub const BUNDLED_TABLE: &str = include_str!("../../../data/knots.json");

pub fn load_table(json: &str) -> Result<BTreeMap<String, String>> {
    serde_json::from_str(json).map_err(|e| Error::Parse(format!("bad knot table: {e}")))
}

/// Looks a name up in `table`, listing the available names on failure.
pub fn table_knot(table: &BTreeMap<String, String>, name: &str) -> Result<PDCode> {
    match table.get(name) {
        Some(s) => parse_pd(s),
        None => Err(Error::Lookup(format!(
            "unknown knot '{name}'; available: {}",
            table.keys().cloned().collect::<Vec<_>>().join(", ")
        ))),
    }
}

pub fn bundled_knot(name: &str) -> Result<PDCode> {
    table_knot(&load_table(BUNDLED_TABLE)?, name)
}

pub fn bundled_names() -> Vec<String> {
    load_table(BUNDLED_TABLE).map(|t| t.into_keys().collect()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_formats() {
        let a = parse_pd("X(1,4,2,5);X(3,6,4,1);X(5,2,6,3)").unwrap();
        let b = parse_pd("[[1,4,2,5],[3,6,4,1],[5,2,6,3]]").unwrap();
        let c = parse_pd("PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(parse_pd(&a.to_string()).unwrap(), a);
        assert!(matches!(parse_pd("X(1,2,3)"), Err(Error::Parse(_))));
        assert!(matches!(parse_pd("X(1,2,3,4)"), Err(Error::Parse(_))));
        assert!(matches!(parse_pd("X(1,3,2,4);X(3,1,4,4)"), Err(Error::Parse(_))));
    }

    #[test]
    fn link_rejected() {
        // Hopf link
        let e = parse_pd("X(1,3,2,4);X(3,1,4,2)").unwrap_err();
        assert_eq!(e, Error::Parse("not a knot".into()));
    }

    #[test]
    fn trefoil_presentation() {
        let w = wirtinger(&parse_pd("X(1,4,2,5);X(3,6,4,1);X(5,2,6,3)").unwrap());
        assert_eq!(w.arc_count, 3);
        assert_eq!(w.writhe, -3);
        let total: i64 = w.longitude.iter().map(|x| x.1).sum();
        assert_eq!(total, 0);
        let d = alexander_divisors(&w).unwrap();
        assert_eq!(d.divisors, vec!["t^2 - t + 1".parse::<RationalPoly>().unwrap()]);
    }

    #[test]
    fn unknot_report() {
        let r = qk_form(&PDCode::unknot()).unwrap();
        assert_eq!(r.hk_dimension, 0);
        assert!(r.grams.is_empty() && r.divisors.is_empty());
    }

    #[test]
    fn bareiss_matches_diagonal() {
        let p = |s: &str| s.parse::<RationalPoly>().unwrap();
        let m = PolyMatrix::from_rows(vec![vec![p("t"), p("1")], vec![p("1"), p("t")]]);
        assert_eq!(m.determinant(), p("t^2 - 1"));
    }
}
