//! Quadratic forms over Q given by Gram matrices: rendering, parsing,
//! determinant and signature, unit-substitution witnesses, and square
//! classes in `Q[t]/(f)`.

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};
use serde::Serialize;

use crate::exact_algebra::{factor_limited, fmt_q, parse_q, q, qf, QMatrix, Rational, RationalPoly};
use crate::{Error, Result};

/// Variable names used for display: `x, y, z, w` up to four, else `x1, x2, …`.
pub fn variable_names(n: usize) -> Vec<String> {
    if n <= 4 {
        ["x", "y", "z", "w"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

/// `Σ G_ii v_i² + Σ_{i<j} 2 G_ij v_i v_j` as text.
pub fn render_form(g: &QMatrix) -> String {
    let vars = variable_names(g.rows());
    let mut out = String::new();
    for i in 0..g.rows() {
        for j in i..g.rows() {
            let c = if i == j { g[(i, i)].clone() } else { &g[(i, j)] * q(2) };
            if c.is_zero() {
                continue;
            }
            let mono = if i == j {
                format!("{}^2", vars[i])
            } else {
                format!("{}*{}", vars[i], vars[j])
            };
            let a = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{}", fmt_q(&a), mono));
            }
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Parses a homogeneous quadratic polynomial in the display variables.
pub fn parse_form(text: &str, n: usize) -> Result<QMatrix> {
    let vars = variable_names(n);
    let bad = |m: &str| Error::Parse(format!("bad quadratic form '{text}': {m}"));
    let compact: String = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| if c == '\u{2212}' { '-' } else { c })
        .collect();
    let mut terms = Vec::new();
    let mut cur = String::new();
    for (i, ch) in compact.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    if !cur.is_empty() {
        terms.push(cur);
    }
    let mut g = QMatrix::zeros(n, n);
    for term in terms {
        let (mut coef, body) = match term.strip_prefix('-') {
            Some(b) => (q(-1), b.to_string()),
            None => (q(1), term.trim_start_matches('+').to_string()),
        };
        let mut idx = Vec::new();
        for factor in body.split('*').filter(|s| !s.is_empty()) {
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => (b, e.parse::<usize>().map_err(|_| bad("exponent"))?),
                None => (factor, 1),
            };
            if let Some(k) = vars.iter().position(|v| v == base) {
                idx.extend(std::iter::repeat(k).take(exp));
            } else {
                if exp != 1 {
                    return Err(bad("power of a constant"));
                }
                coef *= parse_q(base).map_err(|_| bad("unknown symbol"))?;
            }
        }
        match idx.as_slice() {
            [i, j] if i == j => g[(*i, *i)] += coef,
            [i, j] => {
                let half = coef * qf(1, 2);
                g[(*i, *j)] += half.clone();
                g[(*j, *i)] += half;
            }
            _ => return Err(bad("term is not quadratic")),
        }
    }
    Ok(g)
}

/// `vᵀ G v`
pub fn evaluate_form(g: &QMatrix, v: &[Rational]) -> Rational {
    let gv = g.mul_vec(v);
    v.iter().zip(&gv).map(|(a, b)| a * b).sum()
}

/// `Gram` scaled by a positive rational to primitive integer entries in the
/// polynomial (off-diagonal doubled) representation.
pub fn normalize_display(g: &QMatrix) -> QMatrix {
    let n = g.rows();
    let mut coeffs = Vec::new();
    for i in 0..n {
        for j in i..n {
            coeffs.push(if i == j { g[(i, i)].clone() } else { &g[(i, j)] * q(2) });
        }
    }
    if coeffs.iter().all(|c| c.is_zero()) {
        return g.clone();
    }
    let l = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let content = coeffs
        .iter()
        .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
        .fold(BigInt::zero(), |acc, c| acc.gcd(&c));
    g.scale(&Rational::new(l, content))
}

/// Signature `(positive, negative, zero)` by symmetric Gaussian elimination.
pub fn inertia(g: &QMatrix) -> (usize, usize, usize) {
    let mut a = g.clone();
    let n = a.rows();
    let (mut pos, mut neg) = (0, 0);
    let mut active: Vec<usize> = (0..n).collect();
    while let Some(&first) = active.first() {
        let _ = first;
        let piv = active.iter().copied().find(|&i| !a[(i, i)].is_zero());
        let p = match piv {
            Some(p) => p,
            None => {
                let pair = active.iter().flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !a[(i, j)].is_zero());
                match pair {
                    None => break,
                    Some((i, j)) => {
                        // e_i + e_j is anisotropic: replace row/col i by i + j
                        for k in 0..n {
                            let v = a[(j, k)].clone();
                            a[(i, k)] += v;
                        }
                        for k in 0..n {
                            let v = a[(k, j)].clone();
                            a[(k, i)] += v;
                        }
                        i
                    }
                }
            }
        };
        let d = a[(p, p)].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        active.retain(|&i| i != p);
        for &i in &active {
            let f = &a[(i, p)] / &d;
            if f.is_zero() {
                continue;
            }
            for &j in &active {
                let v = &f * &a[(p, j)];
                a[(i, j)] -= v;
            }
            a[(i, p)] = Rational::zero();
        }
        for &j in &active {
            a[(p, j)] = Rational::zero();
        }
    }
    (pos, neg, n - pos - neg)
}

/// Gram matrices of a vector-valued quadratic map on a `Q[t]`-module,
/// together with the matrix of `t` in the same coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormSet {
    pub module_poly: RationalPoly,
    pub t_action: QMatrix,
    pub grams: Vec<QMatrix>,
}

impl FormSet {
    pub fn dimension(&self) -> usize {
        self.t_action.rows()
    }

    /// The same map composed with the sum of the center coordinates.
    pub fn summed(&self) -> FormSet {
        let n = self.dimension();
        let g = self.grams.iter().fold(QMatrix::zeros(n, n), |acc, x| &acc + x);
        FormSet { module_poly: self.module_poly.clone(), t_action: self.t_action.clone(), grams: vec![g] }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(serialize_with = "ser_q")]
    pub c: Rational,
    /// Coefficients of `u` in the power basis.
    #[serde(serialize_with = "ser_poly")]
    pub u: RationalPoly,
    /// Coordinate `k` of the first map pairs with coordinate `perm[k]` of the second.
    pub perm: Vec<usize>,
}

fn ser_q<S: serde::Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(x))
}

fn ser_poly<S: serde::Serializer>(p: &RationalPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

#[derive(Clone, Debug)]
pub struct WitnessSearch {
    /// Bound on the absolute value of the integer coefficients of `u`.
    pub height: i64,
    /// Only accept this ratio.
    pub fixed_c: Option<Rational>,
    /// Allow a permutation of the center coordinates.
    pub permutations: bool,
    /// Only try this coordinate permutation.
    pub fixed_perm: Option<Vec<usize>>,
}

impl WitnessSearch {
    pub fn for_dimension(m: usize) -> Self {
        let height = match m {
            0..=2 => 8,
            3..=4 => 3,
            _ => 1,
        };
        WitnessSearch { height, fixed_c: None, permutations: true, fixed_perm: None }
    }

    pub fn with_c(mut self, c: Rational) -> Self {
        self.fixed_c = Some(c);
        self
    }

    pub fn with_perm(mut self, perm: Vec<usize>) -> Self {
        self.fixed_perm = Some(perm);
        self
    }
}

/// Integer coefficient vectors of length `m` with entries in `[-h, h]`,
/// `u = 1` first, then by max-norm, 1-norm, and lexicographic order.
fn unit_candidates(m: usize, h: i64) -> Vec<Vec<i64>> {
    let mut all = vec![vec![]];
    for _ in 0..m {
        all = all
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (-h..=h).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    all.retain(|v| v.iter().any(|&x| x != 0));
    all.sort_by_key(|v| {
        let one = v.iter().enumerate().all(|(i, &x)| x == if i == 0 { 1 } else { 0 });
        let maxn = v.iter().map(|x| x.abs()).max().unwrap_or(0);
        let l1: i64 = v.iter().map(|x| x.abs()).sum();
        (!one, maxn, l1, v.clone())
    });
    all
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Scalar `c` with `a = c·b`, if any.
fn ratio(a: &QMatrix, b: &QMatrix) -> Option<Option<Rational>> {
    let mut c: Option<Rational> = None;
    for (x, y) in a.entries().iter().zip(b.entries()) {
        match (x.is_zero(), y.is_zero()) {
            (true, true) => {}
            (false, true) | (true, false) => return None,
            (false, false) => {
                let r = x / y;
                match &c {
                    None => c = Some(r),
                    Some(c0) if *c0 == r => {}
                    _ => return None,
                }
            }
        }
    }
    Some(c)
}

/// Searches `c` and a unit `u` with `𝒬_a(v) = c·𝒬_b(u·v)` for all `v`, i.e.
/// `G_a[k] = c·M_uᵀ G_b[perm[k]] M_u` with `M_u = u(t)`. The first hit of a
/// deterministic enumeration is returned.
pub fn proportionality_witness(a: &FormSet, b: &FormSet, search: &WitnessSearch) -> Result<Option<Witness>> {
    if a.module_poly != b.module_poly || a.grams.len() != b.grams.len() {
        return Err(Error::Algebra("module mismatch".into()));
    }
    if a.t_action != b.t_action {
        return Err(Error::Algebra("module mismatch: parametrizations differ".into()));
    }
    let m = a.dimension();
    let k = a.grams.len();
    let perms: Vec<Vec<usize>> = match (&search.fixed_perm, search.permutations) {
        (Some(p), _) => vec![p.clone()],
        (None, true) => permutations(k),
        (None, false) => vec![(0..k).collect()],
    };
    for coeffs in unit_candidates(m, search.height) {
        let u = RationalPoly::new(coeffs.iter().map(|&x| q(x)).collect());
        let mu = b.t_action.poly_eval(u.coeffs());
        if mu.determinant().is_zero() {
            continue;
        }
        let mut_t = mu.transpose();
        let pulled: Vec<QMatrix> = b.grams.iter().map(|g| &(&mut_t * g) * &mu).collect();
        'perm: for perm in &perms {
            let mut c: Option<Rational> = None;
            for (i, &j) in perm.iter().enumerate() {
                match ratio(&a.grams[i], &pulled[j]) {
                    None => continue 'perm,
                    Some(None) => {}
                    Some(Some(r)) => match &c {
                        None => c = Some(r),
                        Some(c0) if *c0 == r => {}
                        _ => continue 'perm,
                    },
                }
            }
            let c = c.unwrap_or_else(|| q(1));
            if search.fixed_c.as_ref().is_some_and(|f| *f != c) {
                continue;
            }
            return Ok(Some(Witness { c, u, perm: perm.clone() }));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SquareVerdict {
    Yes,
    No,
    Unknown,
}

pub fn is_rational_square(c: &Rational) -> bool {
    if c.is_negative() {
        return false;
    }
    let sq = |n: &BigInt| {
        let r = n.sqrt();
        &r * &r == *n
    };
    sq(c.numer()) && sq(c.denom())
}

/// Whether `c` is a square in `Q[t]/(f)`, for `f` a product of linear and
/// irreducible quadratic factors (with multiplicity).
pub fn scalar_square_test(c: &Rational, f: &RationalPoly) -> Result<SquareVerdict> {
    if c.is_zero() {
        return Err(Error::Algebra("zero has no square class".into()));
    }
    let Some(factors) = factor_limited(f) else {
        return Ok(SquareVerdict::Unknown);
    };
    let mut verdict = SquareVerdict::Yes;
    for (p, _mult) in factors {
        let ok = match p.degree() {
            Some(1) => is_rational_square(c),
            Some(2) => {
                // Q(√d), d the discriminant of the monic quadratic
                let d = p.coeff(1) * p.coeff(1) - q(4) * p.coeff(0);
                is_rational_square(c) || is_rational_square(&(c / &d))
            }
            _ => return Ok(SquareVerdict::Unknown),
        };
        if !ok {
            verdict = SquareVerdict::No;
        }
    }
    Ok(verdict)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// A witness with `c = 1` exists.
    Equivalent,
    /// The first witness has a ratio that is not a square in the module ring.
    Inequivalent,
    Undetermined,
}

#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub unit_witness: Option<Witness>,
    pub first_witness: Option<Witness>,
    pub ratio_square: Option<SquareVerdict>,
    pub verdict: Verdict,
}

/// Equivalence verdict: a `c = 1` witness means equivalent; otherwise the
/// first proportionality witness is tested with the scalar-square criterion.
pub fn compare_forms(a: &FormSet, b: &FormSet, search: &WitnessSearch) -> Result<Comparison> {
    let unit_witness = proportionality_witness(a, b, &search.clone().with_c(q(1)))?;
    let mut s = search.clone();
    s.fixed_c = None;
    let first_witness = proportionality_witness(a, b, &s)?;
    let ratio_square = match &first_witness {
        Some(w) => Some(scalar_square_test(&w.c, &a.module_poly)?),
        None => None,
    };
    let verdict = if unit_witness.is_some() || ratio_square == Some(SquareVerdict::Yes) {
        Verdict::Equivalent
    } else if ratio_square == Some(SquareVerdict::No) {
        Verdict::Inequivalent
    } else {
        Verdict::Undetermined
    };
    Ok(Comparison { unit_witness, first_witness, ratio_square, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_parse_round_trip() {
        let g = parse_form("x^2 - 3*x*y + y^2", 2).unwrap();
        assert_eq!(g, QMatrix::from_rows(vec![vec![q(1), qf(-3, 2)], vec![qf(-3, 2), q(1)]]));
        assert_eq!(render_form(&g), "x^2 - 3*x*y + y^2");
        let h = parse_form("-wx + wy + x*y", 4);
        assert!(h.is_err());
        let h = parse_form("-w*x + w*y + x*y + 2*w^2", 4).unwrap();
        assert_eq!(render_form(&h), "x*y - x*w + y*w + 2*w^2");
    }

    #[test]
    fn normalization() {
        let g = parse_form("4*x^2 + 6*x*y + 4*y^2", 2).unwrap();
        assert_eq!(render_form(&normalize_display(&g)), "2*x^2 + 3*x*y + 2*y^2");
        let g = parse_form("-2/3*x^2 - 5/3*x*y", 2).unwrap();
        assert_eq!(render_form(&normalize_display(&g)), "-2*x^2 - 5*x*y");
    }

    #[test]
    fn inertia_examples() {
        assert_eq!(inertia(&parse_form("x^2 - y^2", 2).unwrap()), (1, 1, 0));
        assert_eq!(inertia(&parse_form("x*y", 2).unwrap()), (1, 1, 0));
        assert_eq!(inertia(&parse_form("x^2 + x*y + y^2", 2).unwrap()), (2, 0, 0));
        assert_eq!(inertia(&parse_form("x^2 + 2*x*y + y^2", 2).unwrap()), (1, 0, 1));
    }

    #[test]
    fn squares() {
        let p = |s: &str| s.parse::<RationalPoly>().unwrap();
        assert_eq!(scalar_square_test(&q(2), &p("2*t^2 - 5*t + 2")).unwrap(), SquareVerdict::No);
        assert_eq!(
            scalar_square_test(&q(3), &p("t^4 - 2*t^3 + 3*t^2 - 2*t + 1")).unwrap(),
            SquareVerdict::No
        );
        assert_eq!(scalar_square_test(&q(4), &p("t^2 - t + 1")).unwrap(), SquareVerdict::Yes);
        assert_eq!(scalar_square_test(&q(-3), &p("t^2 - t + 1")).unwrap(), SquareVerdict::Yes);
        assert!(scalar_square_test(&q(0), &p("t^2 - t + 1")).is_err());
    }

    #[test]
    fn trivial_witness() {
        let t = crate::exact_algebra::companion_matrix(&"t^2 - t + 1".parse().unwrap()).unwrap();
        let fs = FormSet {
            module_poly: "t^2 - t + 1".parse().unwrap(),
            t_action: t,
            grams: vec![parse_form("x^2 + x*y + y^2", 2).unwrap()],
        };
        let w = proportionality_witness(&fs, &fs, &WitnessSearch::for_dimension(2)).unwrap().unwrap();
        assert_eq!((w.c, w.u), (q(1), RationalPoly::one()));
    }
}
