//! Center of `(F/F_3 ⊗ Q) ⋊ Z`: the fixed space of `E = Λ²T` on the
//! commutator coordinates, with the root-pairing rank formula and the
//! explicit central elements `C_ℓ` as cross-checks.

use num::{One, Zero};
use serde::Serialize;

use crate::exact_algebra::{
    factor_limited, fmt_q, monic_normalize, q, reciprocal_check, smith_divisors,
    PolyMatrix, QMatrix, Rational, RationalPoly,
};
use crate::nilpotent_group::{exterior_square, pair_count, pair_index, CommutatorVector, TauLift};
use crate::{Error, Result};

/// Where the reported center coordinates come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BasisKind {
    /// The explicit elements `C_1, …, C_g`.
    #[serde(rename = "C")]
    Canonical,
    #[serde(rename = "echelon")]
    Echelon,
}

/// Which construction produced the accepted `C_ℓ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CanonicalSource {
    /// The double-induction recursion, validated as `E`-fixed.
    Recursion,
    /// The closed-form lists for `g <= 3`, used when the recursion fails.
    ClosedForm,
    /// Neither validated; echelon kernel basis used instead.
    EchelonFallback,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalCentral {
    pub elements: Vec<CommutatorVector>,
    pub source: CanonicalSource,
    /// Raw recursion output and whether each vector is `E`-fixed.
    pub recursion: Vec<(CommutatorVector, bool)>,
    /// Closed-form lists (`g <= 3`) and whether each is `E`-fixed.
    pub closed_form: Option<Vec<(CommutatorVector, bool)>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterReport {
    pub rank: usize,
    /// Echelon-normalized basis of `ker(E − I)`.
    pub basis: Vec<CommutatorVector>,
    pub canonical: Option<CanonicalCentral>,
    pub formula_rank: Option<usize>,
    /// `E = Λ²T`.
    pub fixed_map: QMatrix,
}

impl CenterReport {
    pub fn basis_kind(&self) -> BasisKind {
        match &self.canonical {
            Some(c) if c.source != CanonicalSource::EchelonFallback => BasisKind::Canonical,
            _ => BasisKind::Echelon,
        }
    }

    /// The coordinate basis used by the invariant reports.
    pub fn coordinate_basis(&self) -> &[CommutatorVector] {
        match &self.canonical {
            Some(c) if c.source != CanonicalSource::EchelonFallback => &c.elements,
            _ => &self.basis,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vecs = |vs: &[CommutatorVector]| -> Vec<Vec<String>> {
            vs.iter().map(|v| v.iter().map(fmt_q).collect()).collect()
        };
        let mut obj = serde_json::json!({
            "rank": self.rank,
            "basis": vecs(&self.basis),
            "basis_kind": self.basis_kind(),
        });
        if let Some(c) = &self.canonical {
            obj["canonical"] = serde_json::json!(vecs(&c.elements));
            obj["canonical_source"] = serde_json::json!(c.source);
        }
        if let Some(r) = self.formula_rank {
            obj["formula_rank"] = serde_json::json!(r);
        }
        obj
    }
}

pub fn is_fixed(e: &QMatrix, v: &[Rational]) -> bool {
    e.mul_vec(v) == v
}

/// Basis of the fixed space of `E`; valid without any hypothesis on `Δ(±1)`.
pub fn center_basis(lift: &TauLift) -> CenterReport {
    center_from_t(lift.t())
}

/// Same as [`center_basis`], computed from `T` alone (`E` does not depend on
/// the lift's free part).
pub fn center_from_t(t: &QMatrix) -> CenterReport {
    let e = exterior_square(t);
    let p = e.rows();
    let basis = (&e - &QMatrix::identity(p)).kernel_basis();
    CenterReport { rank: basis.len(), basis, canonical: None, formula_rank: None, fixed_map: e }
}

/// Elementary divisors of `Q^m` as a `Q[t]`-module via `t ↦ T`.
pub fn module_divisors(t: &QMatrix) -> Vec<RationalPoly> {
    let m = t.rows();
    let mut pm = PolyMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let c = -t[(i, j)].clone();
            pm[(i, j)] = if i == j {
                RationalPoly::new(vec![c, q(1)])
            } else {
                RationalPoly::constant(c)
            };
        }
    }
    smith_divisors(&pm)
}

/// Center report with rank formula and canonical elements where they apply.
pub fn full_center_report(t: &QMatrix) -> CenterReport {
    let mut report = center_from_t(t);
    let divisors = module_divisors(t);
    report.formula_rank = center_rank_formula(&divisors).ok().flatten();
    if let [f] = divisors.as_slice() {
        if f.degree() == Some(t.rows()) {
            if let Ok(c) = canonical_central_elements(f) {
                report.canonical = Some(c);
            }
        }
    }
    report
}

fn reciprocal_partner(p: &RationalPoly) -> RationalPoly {
    let r = p.reversed();
    r.scale(&r.lead().recip())
}

/// Rank of the center from the divisor chain, by pairing roots `u, v` with
/// `uv = 1` and summing `min` of their Jordan block sizes over block pairs.
///
/// `Ok(None)` when the limited factorizer cannot certify a factorization.
pub fn center_rank_formula(divisors: &[RationalPoly]) -> Result<Option<usize>> {
    let delta = divisors.iter().fold(RationalPoly::one(), |acc, d| &acc * d);
    if delta.eval(&q(1)).is_zero() || delta.eval(&q(-1)).is_zero() {
        return Err(Error::Hypothesis("rank formula hypothesis violated: Δ(±1) = 0".into()));
    }
    // irreducible factor -> exponent in each divisor
    let mut blocks: Vec<(RationalPoly, Vec<u32>)> = Vec::new();
    for (k, d) in divisors.iter().enumerate() {
        let Some(fs) = factor_limited(d) else {
            return Ok(None);
        };
        for (p, e) in fs {
            match blocks.iter_mut().find(|(x, _)| *x == p) {
                Some((_, v)) => v[k] = e,
                None => {
                    let mut v = vec![0; divisors.len()];
                    v[k] = e;
                    blocks.push((p, v));
                }
            }
        }
    }
    let mut total = 0usize;
    for (i, (p, ep)) in blocks.iter().enumerate() {
        let ps = reciprocal_partner(p);
        let deg = p.degree().unwrap();
        let sum_min = |a: &[u32], b: &[u32]| -> usize {
            a.iter()
                .filter(|&&x| x > 0)
                .flat_map(|&x| b.iter().filter(|&&y| y > 0).map(move |&y| x.min(y) as usize))
                .sum()
        };
        if ps == *p {
            total += deg / 2 * sum_min(ep, ep);
        } else if let Some((_, eq)) = blocks[i + 1..].iter().find(|(x, _)| *x == ps) {
            total += deg * sum_min(ep, eq);
        }
    }
    Ok(Some(total))
}

fn reciprocal_coefficients(f: &RationalPoly) -> Result<(usize, Vec<Rational>)> {
    let deg = f.degree().unwrap_or(0);
    if deg == 0 || deg % 2 == 1 {
        return Err(Error::Hypothesis("canonical central elements need even degree".into()));
    }
    let f = monic_normalize(f)?;
    if !reciprocal_check(&f)? || !f.coeff(0).is_one() {
        return Err(Error::Hypothesis("canonical central elements need a reciprocal polynomial".into()));
    }
    Ok((deg / 2, f.coeffs().to_vec()))
}

/// The double-induction recursion taken literally: `d_{1,j}` is
/// `δ_{j-1,ℓ}` for `j <= g` and `δ_{2g-j+1,ℓ}` for `j > g`, and for `i >= 2`
/// `d_{i,j} = d_{i-1,j-1} − a_{j-1} δ_{i-1,ℓ_i} + a_{j-2} δ_{j-1,ℓ_j}` with
/// `ℓ_k = ℓ` when `k <= g` and `2g − ℓ` otherwise.
pub fn recursion_candidates(f: &RationalPoly) -> Result<Vec<CommutatorVector>> {
    let (g, a) = reciprocal_coefficients(f)?;
    let m = 2 * g;
    let delta = |x: usize, y: usize| if x == y { q(1) } else { q(0) };
    let mut out = Vec::new();
    for l in 1..=g {
        // one-based d[i][j]
        let mut d = vec![vec![Rational::zero(); m + 1]; m + 1];
        for j in 2..=m {
            d[1][j] = if j <= g { delta(j - 1, l) } else { delta(m - j + 1, l) };
        }
        for i in 2..=m {
            for j in i + 1..=m {
                let li = if i <= g { l } else { m - l };
                let lj = if j <= g { l } else { m - l };
                d[i][j] = &d[i - 1][j - 1] - &a[j - 1] * delta(i - 1, li) + &a[j - 2] * delta(j - 1, lj);
            }
        }
        let mut v = vec![Rational::zero(); pair_count(m)];
        for i in 1..=m {
            for j in i + 1..=m {
                v[pair_index(m, i - 1, j - 1)] = d[i][j].clone();
            }
        }
        out.push(v);
    }
    Ok(out)
}

/// Closed-form `C_ℓ` for `g <= 3` as explicit functions of the coefficients.
pub fn closed_form_candidates(f: &RationalPoly) -> Result<Option<Vec<CommutatorVector>>> {
    let (g, a) = reciprocal_coefficients(f)?;
    let m = 2 * g;
    let build = |terms: &[(usize, usize, Rational)]| -> CommutatorVector {
        let mut v = vec![Rational::zero(); pair_count(m)];
        for (i, j, c) in terms {
            v[pair_index(m, i - 1, j - 1)] += c;
        }
        v
    };
    let one = || q(1);
    let a_ = |k: usize| a[k].clone();
    let out = match g {
        1 => vec![build(&[(1, 2, one())])],
        2 => vec![
            build(&[(1, 2, one()), (1, 4, one()), (2, 3, one() - a_(2)), (3, 4, one())]),
            build(&[(1, 3, one()), (2, 3, a_(1)), (2, 4, one())]),
        ],
        3 => vec![
            build(&[
                (1, 2, one()),
                (1, 6, one()),
                (2, 3, one() - a_(2)),
                (2, 4, -a_(3)),
                (2, 5, -a_(4)),
                (3, 4, one() - a_(2)),
                (3, 5, -a_(3)),
                (4, 5, one() - a_(4)),
                (5, 6, one()),
            ]),
            build(&[
                (1, 3, one()),
                (1, 5, one()),
                (2, 3, a_(1)),
                (2, 4, one()),
                (2, 5, a_(1)),
                (2, 6, one()),
                (3, 4, a_(1) - a_(3)),
                (3, 5, one()),
                (4, 5, a_(1)),
                (4, 6, one()),
            ]),
            build(&[
                (1, 4, one()),
                (2, 4, a_(1)),
                (2, 5, one()),
                (3, 4, a_(2)),
                (3, 5, a_(1)),
                (3, 6, one()),
            ]),
        ],
        _ => return Ok(None),
    };
    Ok(Some(out))
}

fn independent(vs: &[CommutatorVector]) -> bool {
    if vs.is_empty() {
        return true;
    }
    QMatrix::from_rows(vs.to_vec()).rank() == vs.len()
}

/// `C_1, …, C_g` for a reciprocal monic `f` of degree `2g` with cyclic module.
///
/// The recursion is tried first; each candidate is accepted only if it is
/// fixed by `E` and the set is independent. Failing that, the closed-form
/// lists (`g <= 3`) are validated the same way, and failing those the
/// echelon kernel basis is returned with `EchelonFallback`.
pub fn canonical_central_elements(f: &RationalPoly) -> Result<CanonicalCentral> {
    let (g, _) = reciprocal_coefficients(f)?;
    let f = monic_normalize(f)?;
    let t = crate::exact_algebra::companion_matrix(&f)?;
    let e = exterior_square(&t);
    let check = |vs: Vec<CommutatorVector>| -> Vec<(CommutatorVector, bool)> {
        vs.into_iter()
            .map(|v| {
                let ok = is_fixed(&e, &v);
                (v, ok)
            })
            .collect()
    };
    let all_ok = |vs: &[(CommutatorVector, bool)]| {
        vs.iter().all(|(_, ok)| *ok)
            && independent(&vs.iter().map(|(v, _)| v.clone()).collect::<Vec<_>>())
    };
    let recursion = check(recursion_candidates(&f)?);
    let closed_form = closed_form_candidates(&f)?.map(check);
    let (elements, source) = if all_ok(&recursion) {
        (recursion.iter().map(|(v, _)| v.clone()).collect(), CanonicalSource::Recursion)
    } else if let Some(cf) = closed_form.as_ref().filter(|cf| all_ok(cf)) {
        (cf.iter().map(|(v, _)| v.clone()).collect(), CanonicalSource::ClosedForm)
    } else {
        let basis = (&e - &QMatrix::identity(e.rows())).kernel_basis();
        (basis, CanonicalSource::EchelonFallback)
    };
    debug_assert!(source == CanonicalSource::EchelonFallback || elements.len() == g);
    Ok(CanonicalCentral { elements, source, recursion, closed_form })
}

/// Coordinates of a central `v` in the report's coordinate basis.
pub fn project_to_center(v: &[Rational], report: &CenterReport) -> Result<Vec<Rational>> {
    if !is_fixed(&report.fixed_map, v) {
        return Err(Error::Convention("element not central".into()));
    }
    let basis = report.coordinate_basis();
    if basis.is_empty() {
        assert!(v.iter().all(|x| x.is_zero()), "central element outside an empty center");
        return Ok(vec![]);
    }
    let m = QMatrix::from_cols(v.len(), basis);
    m.solve_unique(v).map_err(|e| {
        debug_assert!(false, "central element outside span: {e}");
        Error::Algebra(format!("central element outside the basis span: {e}"))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::companion_matrix;

    fn p(s: &str) -> RationalPoly {
        s.parse().unwrap()
    }

    #[test]
    fn small_ranks() {
        for (f, r) in [
            ("t^2 - t + 1", 1),
            ("t^4 - t^3 + t^2 - t + 1", 2),
            ("t^4 - 2*t^3 + 3*t^2 - 2*t + 1", 2),
            ("t^2 - 3*t + 1", 1),
        ] {
            let t = companion_matrix(&p(f)).unwrap();
            let rep = full_center_report(&t);
            assert_eq!(rep.rank, r, "{f}");
            assert_eq!(rep.formula_rank, Some(r), "{f}");
        }
    }

    #[test]
    fn g1_basis() {
        let t = companion_matrix(&p("t^2 - t + 1")).unwrap();
        let rep = full_center_report(&t);
        assert_eq!(rep.basis, vec![vec![q(1)]]);
        assert_eq!(rep.basis_kind(), BasisKind::Canonical);
        assert_eq!(project_to_center(&[q(1)], &rep).unwrap(), vec![q(1)]);
    }

    #[test]
    fn non_central_rejected() {
        let t = companion_matrix(&p("t^4 - t^3 + t^2 - t + 1")).unwrap();
        let rep = full_center_report(&t);
        let mut e13 = vec![q(0); 6];
        e13[1] = q(1);
        assert_eq!(
            project_to_center(&e13, &rep),
            Err(Error::Convention("element not central".into()))
        );
    }

    #[test]
    fn hypothesis_gate() {
        assert!(center_rank_formula(&[p("t^2 - 2*t + 1")]).is_err());
    }
}
