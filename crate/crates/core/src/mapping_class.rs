//! Dehn twists on `Σ_{g,1}` as automorphisms of the free group
//! `F = ⟨x_1, …, x_2g⟩` fixing `ζ = [x_1,x_2]⋯[x_{2g−1},x_{2g}]`, with
//! `[a,b] = aba⁻¹b⁻¹`; the module `ℋ_f`, the form `𝒬_f`, and the mapping
//! torus presentation.
//!
//! Curves: `c_1` has class `x_1`, `c_{2k}` class `x_{2k}`, `c_{2k+1}`
//! (`1 <= k < g`) crosses handles `k` and `k+1`, and `c_{2g+1}` has class
//! `x_{2g−1}`. In genus 2 a sixth curve `c_6` is the second boundary of a
//! regular neighbourhood of `c_1 ∪ c_2 ∪ c_3`. Composition is functional:
//! the word `a b` acts as `a ∘ b`.

use std::fmt;

use num::Zero;

use crate::center::{center_from_t, full_center_report, project_to_center};
use crate::exact_algebra::{
    companion_matrix, q, unit_vec, vec_zero, PolyMatrix, QMatrix, Rational, RationalPoly,
};
use crate::knot_pipeline::{abelianized_fox, build_form_report, reduce_word, QuadraticFormReport, Word};
use crate::nilpotent_group::{exterior_square, pair_count, pair_index, CommutatorVector};
use crate::{Error, Result};

/// Letters `(generator 1..=2g, ±1)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FreeWord {
    pub letters: Vec<(usize, i8)>,
}

impl FreeWord {
    pub fn new(letters: Vec<(usize, i8)>) -> Self {
        let mut w = FreeWord { letters };
        w.reduce();
        w
    }

    /// From signed indices: `-3` is `x_3⁻¹`.
    pub fn from_signed(xs: &[i32]) -> Self {
        Self::new(xs.iter().map(|&x| (x.unsigned_abs() as usize, x.signum() as i8)).collect())
    }

    pub fn generator(i: usize) -> Self {
        FreeWord { letters: vec![(i, 1)] }
    }

    pub fn reduce(&mut self) {
        let mut out: Vec<(usize, i8)> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            match out.last() {
                Some(&(g, e)) if g == l.0 && e == -l.1 => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        self.letters = out;
    }

    pub fn inverse(&self) -> Self {
        FreeWord { letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut l = self.letters.clone();
        l.extend_from_slice(&other.letters);
        Self::new(l)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Exponent sums per generator.
    pub fn abelianize(&self, rank: usize) -> Vec<Rational> {
        let mut v = vec_zero(rank);
        for &(g, e) in &self.letters {
            v[g - 1] += q(e as i64);
        }
        v
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let s: Vec<String> = self
            .letters
            .iter()
            .map(|&(g, e)| if e > 0 { format!("x{g}") } else { format!("x{g}^-1") })
            .collect();
        f.write_str(&s.join(" "))
    }
}

/// `ζ = [x_1,x_2]⋯[x_{2g−1},x_{2g}]`.
pub fn boundary_word(genus: usize) -> Result<FreeWord> {
    if genus < 1 {
        return Err(Error::Algebra("genus must be at least 1".into()));
    }
    let mut l = Vec::new();
    for k in 0..genus {
        let (a, b) = (2 * k + 1, 2 * k + 2);
        l.extend([(a, 1), (b, 1), (a, -1), (b, -1)]);
    }
    Ok(FreeWord::new(l))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeAutomorphism {
    pub genus: usize,
    /// `images[i]` is the image of `x_{i+1}`.
    pub images: Vec<FreeWord>,
}

impl FreeAutomorphism {
    pub fn identity(genus: usize) -> Self {
        FreeAutomorphism { genus, images: (1..=2 * genus).map(FreeWord::generator).collect() }
    }

    /// Identity except for the listed generators.
    fn with_images(genus: usize, changes: &[(usize, &[i32])]) -> Self {
        let mut a = Self::identity(genus);
        for &(g, w) in changes {
            a.images[g - 1] = FreeWord::from_signed(w);
        }
        a
    }

    pub fn rank(&self) -> usize {
        2 * self.genus
    }

    pub fn apply(&self, w: &FreeWord) -> FreeWord {
        let mut l = Vec::new();
        for &(g, e) in &w.letters {
            let img = &self.images[g - 1];
            if e > 0 {
                l.extend_from_slice(&img.letters);
            } else {
                l.extend(img.letters.iter().rev().map(|&(h, f)| (h, -f)));
            }
        }
        FreeWord::new(l)
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Self) -> Self {
        FreeAutomorphism { genus: self.genus, images: other.images.iter().map(|w| self.apply(w)).collect() }
    }

    pub fn fixes_boundary(&self) -> bool {
        boundary_word(self.genus).is_ok_and(|z| self.apply(&z) == z)
    }

    /// Column `i` is the abelianized image of `x_{i+1}`.
    pub fn homology(&self) -> QMatrix {
        let cols: Vec<Vec<Rational>> = self.images.iter().map(|w| w.abelianize(self.rank())).collect();
        QMatrix::from_cols(self.rank(), &cols)
    }
}

/// Curve indices implemented in the given genus.
pub fn curve_count(genus: usize) -> usize {
    match genus {
        0 => 0,
        1 => 2,
        2 => 6,
        g => 2 * g + 1,
    }
}

/// The mixing twist across handles `k`, `k+1` (generators shifted by `2(k−1)`).
fn mixing_twist(genus: usize, k: usize, inverse: bool) -> FreeAutomorphism {
    let s = 2 * (k as i32 - 1);
    let sh = |w: &[i32]| -> Vec<i32> { w.iter().map(|&x| x.signum() * (x.abs() + s)).collect() };
    let table: [(usize, Vec<i32>); 3] = if inverse {
        [
            (2, sh(&[2, -1, -2, 3, 2])),
            (3, sh(&[2, -1, -2, 3, 2, 1, -2])),
            (4, sh(&[4, -3, 2, 1, -2])),
        ]
    } else {
        [
            (2, sh(&[-3, 2, 1])),
            (3, sh(&[-3, 2, 1, -2, 3, 2, -1, -2, 3])),
            (4, sh(&[4, 2, -1, -2, 3])),
        ]
    };
    let changes: Vec<(usize, &[i32])> = table.iter().map(|(g, w)| (*g + s as usize, w.as_slice())).collect();
    FreeAutomorphism::with_images(genus, &changes)
}

fn raw_twist(genus: usize, curve: usize, inverse: bool) -> Result<FreeAutomorphism> {
    if genus < 1 || curve < 1 || curve > curve_count(genus) {
        return Err(Error::Lookup(format!(
            "unknown curve index {curve} for genus {genus} (available 1..{})",
            curve_count(genus)
        )));
    }
    let inv = if inverse { -1 } else { 1 };
    let g = genus;
    Ok(match curve {
        1 => FreeAutomorphism::with_images(g, &[(2, &[2, inv])]),
        6 if g == 2 => {
            let base = |c: usize| raw_twist(2, c, inverse);
            let (t1, t2, t3, t5) = (base(1)?, base(2)?, base(3)?, raw_twist(2, 5, !inverse)?);
            // (T1 T2 T3)^4 = T5 T6
            if inverse {
                let chain = t3.compose(&t2).compose(&t1);
                let mut p = FreeAutomorphism::identity(2);
                for _ in 0..4 {
                    p = p.compose(&chain);
                }
                t5.compose(&p)
            } else {
                let chain = t1.compose(&t2).compose(&t3);
                let mut p = FreeAutomorphism::identity(2);
                for _ in 0..4 {
                    p = p.compose(&chain);
                }
                p.compose(&t5)
            }
        }
        c if c == 2 * g + 1 => {
            let (a, b) = (2 * g as i32 - 1, 2 * g as i32);
            FreeAutomorphism::with_images(g, &[(b as usize, &[b, inv * a])])
        }
        c if c % 2 == 0 => {
            let (a, b) = (c as i32 - 1, c as i32);
            FreeAutomorphism::with_images(g, &[(a as usize, &[a, -inv * b])])
        }
        c => mixing_twist(g, (c - 1) / 2, inverse),
    })
}

/// The standard symplectic form: `ω(x_{2k−1}, x_{2k}) = 1`.
pub fn symplectic_form(genus: usize) -> QMatrix {
    let mut j = QMatrix::zeros(2 * genus, 2 * genus);
    for k in 0..genus {
        j[(2 * k, 2 * k + 1)] = q(1);
        j[(2 * k + 1, 2 * k)] = q(-1);
    }
    j
}

/// Positive twist (or its inverse) along curve `curve`, validated by
/// `ζ`-invariance and the transvection property `(M − I)² = 0`.
pub fn twist_automorphism(genus: usize, curve: usize) -> Result<FreeAutomorphism> {
    signed_twist(genus, curve, false)
}

pub fn signed_twist(genus: usize, curve: usize, inverse: bool) -> Result<FreeAutomorphism> {
    let a = raw_twist(genus, curve, inverse)?;
    if !a.fixes_boundary() {
        return Err(Error::Convention(format!("twist {curve} does not fix the boundary word")));
    }
    let n = &a.homology() - &QMatrix::identity(a.rank());
    if !(&n * &n).is_zero() {
        return Err(Error::Convention(format!("twist {curve} is not a transvection")));
    }
    Ok(a)
}

/// Tokens `(curve, ±1)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TwistWord {
    pub tokens: Vec<(usize, i8)>,
}

impl std::str::FromStr for TwistWord {
    type Err = Error;

    /// `"2 3 -4 -5 1"`
    fn from_str(s: &str) -> Result<Self> {
        let tokens = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                let t = t.replace('\u{2212}', "-");
                let v: i64 = t.parse().map_err(|_| Error::Parse(format!("bad twist token '{t}'")))?;
                if v == 0 {
                    return Err(Error::Parse("twist index 0".into()));
                }
                Ok((v.unsigned_abs() as usize, v.signum() as i8))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TwistWord { tokens })
    }
}

/// `τ(c_{i_1})^{e_1} ∘ τ(c_{i_2})^{e_2} ∘ …`, checked to fix `ζ`.
pub fn compose_twists(genus: usize, word: &TwistWord) -> Result<FreeAutomorphism> {
    let mut acc = FreeAutomorphism::identity(genus);
    for &(c, e) in &word.tokens {
        acc = acc.compose(&signed_twist(genus, c, e < 0)?);
    }
    if !acc.fixes_boundary() {
        return Err(Error::Convention("composite does not fix the boundary word".into()));
    }
    Ok(acc)
}

/// Homology matrix and its characteristic polynomial `Δ_f`.
pub fn homology_action(aut: &FreeAutomorphism) -> (QMatrix, RationalPoly) {
    let m = aut.homology();
    let cp = m.char_poly();
    (m, cp)
}

/// Invariant factors of `tI − M`; equal lists mean conjugate over `Q`.
pub fn rational_canonical_form(m: &QMatrix) -> Vec<RationalPoly> {
    crate::center::module_divisors(m)
}

/// Block-diagonal companion matrix of the invariant factors.
pub fn rational_canonical_matrix(m: &QMatrix) -> Result<QMatrix> {
    let n = m.rows();
    let mut out = QMatrix::zeros(n, n);
    let mut off = 0;
    let divs = rational_canonical_form(m);
    // unit invariant factors contribute nothing; the rest fill the blocks
    for d in &divs {
        let c = companion_matrix(d)?;
        for i in 0..c.rows() {
            for j in 0..c.cols() {
                out[(off + i, off + j)] = c[(i, j)].clone();
            }
        }
        off += c.rows();
    }
    debug_assert_eq!(off, n);
    Ok(out)
}

fn hypothesis_gate(cp: &RationalPoly) -> Result<()> {
    if cp.eval(&q(1)).is_zero() || cp.eval(&q(-1)).is_zero() {
        return Err(Error::Hypothesis("degenerate module (Torelli-adjacent case); unsupported".into()));
    }
    Ok(())
}

/// Basis of the commutant `{φ : φM = Mφ}` (the space `ℋ_f ⊗ Q`).
pub fn hf_basis(aut: &FreeAutomorphism) -> Result<Vec<QMatrix>> {
    let (m, cp) = homology_action(aut);
    hypothesis_gate(&cp)?;
    Ok(commutant(&m))
}

fn commutant(m: &QMatrix) -> Vec<QMatrix> {
    let n = m.rows();
    // unknown φ[(i, j)] at index i*n + j; rows are entries of φM − Mφ
    let mut sys = QMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let r = i * n + j;
            for k in 0..n {
                sys[(r, i * n + k)] += m[(k, j)].clone();
                sys[(r, k * n + j)] -= m[(i, k)].clone();
            }
        }
    }
    sys.kernel_basis()
        .into_iter()
        .map(|v| QMatrix::from_rows(v.chunks(n).map(|c| c.to_vec()).collect()))
        .collect()
}

/// `Σ_i φ(x_{2i−1})⊓φ(x_{2i}) − φ(x_{2i})⊓φ(x_{2i−1})`, i.e. the bivector
/// `Σ_i φx_{2i−1} ∧ φx_{2i}` in the basis `x_i ∧ x_j` (`i < j`).
pub fn phi_of_boundary(phi: &QMatrix) -> CommutatorVector {
    let n = phi.rows();
    let mut out = vec_zero(pair_count(n));
    for k in 0..n / 2 {
        let (a, b) = (phi.col(2 * k), phi.col(2 * k + 1));
        for i in 0..n {
            for j in i + 1..n {
                out[pair_index(n, i, j)] += &a[i] * &b[j] - &a[j] * &b[i];
            }
        }
    }
    out
}

/// Krylov matrix `[v, Mv, …, M^{n−1}v]`.
pub fn krylov(m: &QMatrix, v: &[Rational]) -> QMatrix {
    let n = m.rows();
    let mut cols = vec![v.to_vec()];
    for _ in 1..n {
        let next = m.mul_vec(cols.last().unwrap());
        cols.push(next);
    }
    QMatrix::from_cols(n, &cols)
}

/// `𝒬_f` on `ℋ_f`. When `x_1` is a cyclic vector of `M` the domain is
/// parametrized by `u = x + ty + t²z + t³w ↦ u(M)` and the center by the
/// canonical elements in the basis `x_1, Mx_1, M²x_1, …`; otherwise the
/// echelon commutant basis and echelon center basis are used.
pub fn qf_form(aut: &FreeAutomorphism) -> Result<QuadraticFormReport> {
    let (m, cp) = homology_action(aut);
    hypothesis_gate(&cp)?;
    let n = m.rows();
    let divisors = rational_canonical_form(&m);
    let k = krylov(&m, &unit_vec(n, 0));
    let violated = || Error::Convention("equivariance violated".into());
    if let Ok(k_inv) = k.inverse() {
        let t = companion_matrix(&cp)?;
        let center = full_center_report(&t);
        let to_power = exterior_square(&k_inv);
        let qf = |u: &[Rational]| -> Result<Vec<Rational>> {
            let phi = m.poly_eval(u);
            let v = to_power.mul_vec(&phi_of_boundary(&phi));
            project_to_center(&v, &center).map_err(|_| violated())
        };
        build_form_report(cp.clone(), divisors, None, t.clone(), center.clone(), &qf)
    } else {
        let basis = commutant(&m);
        let center = center_from_t(&m);
        let flat = QMatrix::from_cols(n * n, &basis.iter().map(|b| b.entries().to_vec()).collect::<Vec<_>>());
        let mut t_cols = Vec::new();
        for b in &basis {
            t_cols.push(flat.solve_unique((b * &m).entries())?);
        }
        let t_action = QMatrix::from_cols(basis.len(), &t_cols);
        let qf = |c: &[Rational]| -> Result<Vec<Rational>> {
            let phi = basis.iter().zip(c).fold(QMatrix::zeros(n, n), |acc, (b, x)| &acc + &b.scale(x));
            project_to_center(&phi_of_boundary(&phi), &center).map_err(|_| violated())
        };
        let top = divisors.last().cloned().unwrap_or_else(RationalPoly::one);
        build_form_report(top, divisors, None, t_action, center.clone(), &qf)
    }
}

/// Generators `x_1 … x_2g, γ` with one relator per fiber generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    /// Words over 0-based generator indices.
    pub relators: Vec<Word>,
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = |w: &Word| -> String {
            if w.is_empty() {
                return "1".into();
            }
            w.iter()
                .map(|&(g, e)| {
                    if e == 1 {
                        self.generators[g].clone()
                    } else {
                        format!("{}^{e}", self.generators[g])
                    }
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        let rels: Vec<String> = self.relators.iter().map(word).collect();
        write!(f, "< {} | {} >", self.generators.join(", "), rels.join(", "))
    }
}

/// Relators `[x_i, γ]·f(x_i)·x_i⁻¹`.
pub fn mapping_torus_presentation(aut: &FreeAutomorphism) -> GroupPresentation {
    let n = aut.rank();
    let gamma = n;
    let mut generators: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    generators.push("g".into());
    let relators = (0..n)
        .map(|i| {
            let mut w: Word = vec![(i, 1), (gamma, 1), (i, -1), (gamma, -1)];
            w.extend(aut.images[i].letters.iter().map(|&(g, e)| (g - 1, e as i64)));
            w.push((i, -1));
            reduce_word(&w)
        })
        .collect();
    GroupPresentation { generators, relators }
}

/// Alexander polynomial of the mapping torus by Fox calculus (`γ ↦ t`,
/// `x_i ↦ 1`), monic with `t`-powers removed.
pub fn mapping_torus_alexander(aut: &FreeAutomorphism) -> Result<RationalPoly> {
    let p = mapping_torus_presentation(aut);
    let n = aut.rank();
    let fox = abelianized_fox(&p.relators, n + 1, &|g| if g == n { 1 } else { 0 });
    let square: PolyMatrix = fox.without_col(n);
    let det = square.determinant();
    if det.is_zero() {
        return Err(Error::Algebra("vanishing Fox determinant".into()));
    }
    let k = det.coeffs().iter().take_while(|c| c.is_zero()).count();
    crate::exact_algebra::monic_normalize(&RationalPoly::new(det.coeffs()[k..].to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_words() {
        assert_eq!(boundary_word(1).unwrap().to_string(), "x1 x2 x1^-1 x2^-1");
        assert_eq!(boundary_word(3).unwrap().len(), 12);
        assert!(boundary_word(0).is_err());
    }

    #[test]
    fn twists_fix_boundary() {
        for g in 1..=4 {
            for c in 1..=curve_count(g) {
                let t = twist_automorphism(g, c).unwrap();
                let ti = signed_twist(g, c, true).unwrap();
                assert_eq!(t.compose(&ti), FreeAutomorphism::identity(g), "g={g} c={c}");
                assert_eq!(t.homology().determinant(), q(1));
            }
        }
        assert!(twist_automorphism(2, 7).is_err());
        assert!(twist_automorphism(1, 3).is_err());
    }

    #[test]
    fn example_char_polys() {
        let f1 = compose_twists(2, &"2 3 -4 -5 1".parse().unwrap()).unwrap();
        let (_, cp) = homology_action(&f1);
        assert_eq!(cp, "t^4 - 2*t^3 + 3*t^2 - 2*t + 1".parse().unwrap());
        assert_eq!(mapping_torus_alexander(&f1).unwrap(), cp);
    }

    #[test]
    fn identity_gate() {
        let e = hf_basis(&FreeAutomorphism::identity(2)).unwrap_err();
        assert_eq!(e.to_string(), "degenerate module (Torelli-adjacent case); unsupported");
    }

    #[test]
    fn identity_presentation() {
        let p = mapping_torus_presentation(&FreeAutomorphism::identity(1));
        assert_eq!(p.to_string(), "< x1, x2, g | x1 g x1^-1 g^-1, x2 g x2^-1 g^-1 >");
    }
}
