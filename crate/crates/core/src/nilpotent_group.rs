//! The free class-2 nilpotent group `F/F_3 ⊗ Q` on `m` generators, lifts of
//! linear automorphisms of its abelianization, and the semidirect product
//! with `Z`.
//!
//! Elements are pairs `(a, α)` with `a ∈ Q^m` and `α ∈ Q^{m(m-1)/2}`, the
//! commutator coordinates indexed by pairs `i < j` in lexicographic order.
//! The product is `(a, α)(b, β) = (a + b, a ⊓ b + α + β)` where
//! `(a ⊓ b)_{ij} = a_i b_j`.

use std::collections::HashMap;

use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exact_algebra::{fmt_q, parse_q, q, qf, vec_add, vec_sub, vec_zero, QMatrix, Rational};
use crate::{Error, Result};

pub type AbelianVector = Vec<Rational>;
pub type CommutatorVector = Vec<Rational>;

pub fn pair_count(m: usize) -> usize {
    m * m.saturating_sub(1) / 2
}

/// Position of `e_{ij}` (`i < j`, zero-based) in the commutator coordinates.
pub fn pair_index(m: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < m);
    i * (2 * m - i - 1) / 2 + (j - i - 1)
}

pub fn pairs(m: usize) -> Vec<(usize, usize)> {
    (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect()
}

fn check_rank(x: &[Rational], y: &[Rational]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::Algebra(format!(
            "rank mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    Ok(())
}

/// `x ⊓ y`: bilinear, `e_i ⊓ e_j = e_{ij}` for `i < j`, zero otherwise.
pub fn wedge(x: &[Rational], y: &[Rational]) -> Result<CommutatorVector> {
    check_rank(x, y)?;
    Ok(wedge_unchecked(x, y))
}

fn wedge_unchecked(x: &[Rational], y: &[Rational]) -> CommutatorVector {
    let m = x.len();
    let mut v = Vec::with_capacity(pair_count(m));
    for i in 0..m {
        for j in i + 1..m {
            if x[i].is_zero() || y[j].is_zero() {
                v.push(Rational::zero());
            } else {
                v.push(&x[i] * &y[j]);
            }
        }
    }
    v
}

/// `x ⊓ y − y ⊓ x`, i.e. `x ∧ y`.
pub fn wedge_alt(x: &[Rational], y: &[Rational]) -> CommutatorVector {
    vec_sub(&wedge_unchecked(x, y), &wedge_unchecked(y, x))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Nil2Element {
    pub ab: AbelianVector,
    pub comm: CommutatorVector,
}

impl Nil2Element {
    pub fn identity(m: usize) -> Self {
        Nil2Element { ab: vec_zero(m), comm: vec_zero(pair_count(m)) }
    }

    pub fn new(ab: AbelianVector, comm: CommutatorVector) -> Result<Self> {
        if comm.len() != pair_count(ab.len()) {
            return Err(Error::Algebra("commutator length does not match rank".into()));
        }
        Ok(Nil2Element { ab, comm })
    }

    pub fn abelian(ab: AbelianVector) -> Self {
        let p = pair_count(ab.len());
        Nil2Element { ab, comm: vec_zero(p) }
    }

    pub fn rank(&self) -> usize {
        self.ab.len()
    }

    pub fn is_identity(&self) -> bool {
        self.ab.iter().chain(&self.comm).all(|x| x.is_zero())
    }
}

#[derive(Serialize, Deserialize)]
struct Nil2Repr {
    ab: Vec<String>,
    comm: Vec<String>,
}

impl Serialize for Nil2Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Nil2Repr {
            ab: self.ab.iter().map(fmt_q).collect(),
            comm: self.comm.iter().map(fmt_q).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Nil2Element {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = Nil2Repr::deserialize(d)?;
        let conv = |v: Vec<String>| -> std::result::Result<Vec<Rational>, D::Error> {
            v.iter().map(|s| parse_q(s).map_err(D::Error::custom)).collect()
        };
        Nil2Element::new(conv(r.ab)?, conv(r.comm)?).map_err(D::Error::custom)
    }
}

pub fn nil2_mul(g: &Nil2Element, h: &Nil2Element) -> Result<Nil2Element> {
    check_rank(&g.ab, &h.ab)?;
    let mut comm = wedge_unchecked(&g.ab, &h.ab);
    for (c, (x, y)) in comm.iter_mut().zip(g.comm.iter().zip(&h.comm)) {
        *c += x + y;
    }
    Ok(Nil2Element { ab: vec_add(&g.ab, &h.ab), comm })
}

pub fn nil2_inv(g: &Nil2Element) -> Nil2Element {
    Nil2Element {
        ab: g.ab.iter().map(|x| -x).collect(),
        comm: vec_sub(&wedge_unchecked(&g.ab, &g.ab), &g.comm),
    }
}

pub fn nil2_commutator(g: &Nil2Element, h: &Nil2Element) -> Result<Nil2Element> {
    check_rank(&g.ab, &h.ab)?;
    Ok(Nil2Element { ab: vec_zero(g.rank()), comm: wedge_alt(&g.ab, &h.ab) })
}

/// Matrix of `Λ²T` on the commutator coordinates:
/// `E(e_i ∧ e_j) = Te_i ⊓ Te_j − Te_j ⊓ Te_i`.
pub fn exterior_square(t: &QMatrix) -> QMatrix {
    let m = t.rows();
    let cols: Vec<Vec<Rational>> = pairs(m)
        .into_iter()
        .map(|(i, j)| wedge_alt(&t.col(i), &t.col(j)))
        .collect();
    QMatrix::from_cols(pair_count(m), &cols)
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct LiftData {
    t: QMatrix,
    e: QMatrix,
    b: Vec<QMatrix>,
    a: QMatrix,
}

impl LiftData {
    fn build(t: QMatrix, a: QMatrix) -> Self {
        let m = t.rows();
        let e = exterior_square(&t);
        let p = pair_count(m);
        let mut b = vec![QMatrix::zeros(m, m); p];
        let cols: Vec<Vec<Rational>> = (0..m).map(|i| t.col(i)).collect();
        for i in 0..m {
            for j in 0..m {
                let mut v = wedge_unchecked(&cols[i], &cols[j]);
                if i < j {
                    let ex = e.col(pair_index(m, i, j));
                    v = vec_sub(&v, &ex);
                }
                for (k, x) in v.into_iter().enumerate() {
                    b[k][(i, j)] = x;
                }
            }
        }
        LiftData { t, e, b, a }
    }

    fn lambda(&self, x: &[Rational]) -> CommutatorVector {
        let half = qf(1, 2);
        let ax = self.a.mul_vec(x);
        self.b
            .iter()
            .zip(ax)
            .map(|(bk, l)| {
                let bx = bk.mul_vec(x);
                let quad: Rational = x.iter().zip(&bx).map(|(u, v)| u * v).sum();
                quad * &half + l
            })
            .collect()
    }

    fn apply(&self, g: &Nil2Element) -> Nil2Element {
        Nil2Element {
            ab: self.t.mul_vec(&g.ab),
            comm: vec_add(&self.lambda(&g.ab), &self.e.mul_vec(&g.comm)),
        }
    }
}

/// An automorphism `τ(x, α) = (Tx, λ(x) + Eα)` of `F/F_3 ⊗ Q` lifting `T`,
/// with `λ(x) = ½B(x, x) + Ax`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauLift {
    fwd: LiftData,
    inv: LiftData,
}

impl TauLift {
    pub fn rank(&self) -> usize {
        self.fwd.t.rows()
    }

    pub fn t(&self) -> &QMatrix {
        &self.fwd.t
    }

    pub fn e(&self) -> &QMatrix {
        &self.fwd.e
    }

    /// Per commutator coordinate, the symmetric matrix of `B`.
    pub fn b(&self) -> &[QMatrix] {
        &self.fwd.b
    }

    pub fn a(&self) -> &QMatrix {
        &self.fwd.a
    }

    pub fn lambda(&self, x: &[Rational]) -> CommutatorVector {
        self.fwd.lambda(x)
    }

    /// `B(x, y) = Tx ⊓ Ty − E(x ⊓ y)`.
    pub fn b_form(&self, x: &[Rational], y: &[Rational]) -> CommutatorVector {
        let tx = self.fwd.t.mul_vec(x);
        let ty = self.fwd.t.mul_vec(y);
        vec_sub(&wedge_unchecked(&tx, &ty), &self.fwd.e.mul_vec(&wedge_unchecked(x, y)))
    }
}

/// Builds the lift of `T` with free linear part `A` (zero when absent).
///
/// The inverse is the lift of `T^{-1}` whose linear part `A'` is fixed by
/// requiring `τ^{-1} ∘ τ = id`, which forces `A'T = −E^{-1}A`.
pub fn build_tau_lift(t: &QMatrix, a: Option<&QMatrix>) -> Result<TauLift> {
    if !t.is_square() {
        return Err(Error::Algebra("T must be square".into()));
    }
    let m = t.rows();
    let p = pair_count(m);
    let a = a.cloned().unwrap_or_else(|| QMatrix::zeros(p, m));
    if (a.rows(), a.cols()) != (p, m) {
        return Err(Error::Algebra("A has the wrong shape".into()));
    }
    let t_inv = t.inverse().map_err(|_| Error::Algebra("T is singular".into()))?;
    let fwd = LiftData::build(t.clone(), a);
    let e_inv = fwd.e.inverse()?;
    let a_inv = (&(&e_inv * &fwd.a) * &t_inv).scale(&q(-1));
    let inv = LiftData::build(t_inv, a_inv);
    Ok(TauLift { fwd, inv })
}

/// `τ^power(g)`.
pub fn tau_apply(lift: &TauLift, g: &Nil2Element, power: i64) -> Nil2Element {
    let step = if power >= 0 { &lift.fwd } else { &lift.inv };
    (0..power.unsigned_abs()).fold(g.clone(), |acc, _| step.apply(&acc))
}

/// Uniform random `A` with entries `p/q`, `|p| <= 5`, `1 <= q <= 4`.
pub fn random_a(m: usize, seed: u64) -> QMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = pair_count(m);
    let mut a = QMatrix::zeros(p, m);
    for i in 0..p {
        for j in 0..m {
            a[(i, j)] = qf(rng.gen_range(-5..=5), rng.gen_range(1..=4));
        }
    }
    a
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SemidirectElement {
    pub g: Nil2Element,
    pub n: i64,
}

impl SemidirectElement {
    pub fn identity(m: usize) -> Self {
        SemidirectElement { g: Nil2Element::identity(m), n: 0 }
    }
}

/// `(g, n)(h, k) = (g · τ^n(h), n + k)`.
pub fn semidirect_mul(
    u: &SemidirectElement,
    v: &SemidirectElement,
    lift: &TauLift,
) -> Result<SemidirectElement> {
    let h = tau_apply(lift, &v.g, u.n);
    Ok(SemidirectElement { g: nil2_mul(&u.g, &h)?, n: u.n + v.n })
}

pub fn semidirect_inv(u: &SemidirectElement, lift: &TauLift) -> SemidirectElement {
    SemidirectElement { g: tau_apply(lift, &nil2_inv(&u.g), -u.n), n: -u.n }
}

/// Left-to-right product of `assignment[gen]^exp`.
pub fn evaluate_word(
    word: &[(usize, i64)],
    assignment: &HashMap<usize, SemidirectElement>,
    lift: &TauLift,
) -> Result<SemidirectElement> {
    let mut acc = SemidirectElement::identity(lift.rank());
    for &(gen, e) in word {
        let x = assignment
            .get(&gen)
            .ok_or_else(|| Error::Lookup(format!("generator {gen} has no assignment")))?;
        let base = if e >= 0 { x.clone() } else { semidirect_inv(x, lift) };
        for _ in 0..e.unsigned_abs() {
            acc = semidirect_mul(&acc, &base, lift)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::{companion_matrix, unit_vec, RationalPoly};

    fn e(m: usize, i: usize) -> Vec<Rational> {
        unit_vec(m, i)
    }

    #[test]
    fn wedge_table() {
        assert_eq!(wedge(&e(2, 0), &e(2, 1)).unwrap(), vec![q(1)]);
        assert_eq!(wedge(&e(2, 1), &e(2, 0)).unwrap(), vec![q(0)]);
        assert_eq!(wedge(&[q(1), q(1)], &e(2, 1)).unwrap(), vec![q(1)]);
        assert!(wedge(&e(2, 0), &e(3, 0)).is_err());
    }

    #[test]
    fn pair_indexing() {
        for m in 1..7 {
            for (k, (i, j)) in pairs(m).into_iter().enumerate() {
                assert_eq!(pair_index(m, i, j), k);
            }
        }
    }

    #[test]
    fn mul_and_inverse_examples() {
        let a = Nil2Element::abelian(e(2, 0));
        let b = Nil2Element::abelian(e(2, 1));
        assert_eq!(nil2_mul(&a, &b).unwrap(), Nil2Element::new(vec![q(1), q(1)], vec![q(1)]).unwrap());
        assert_eq!(nil2_mul(&b, &a).unwrap(), Nil2Element::new(vec![q(1), q(1)], vec![q(0)]).unwrap());
        let ab = Nil2Element::abelian(vec![q(1), q(1)]);
        let inv = nil2_inv(&ab);
        assert_eq!(inv, Nil2Element::new(vec![q(-1), q(-1)], vec![q(1)]).unwrap());
        assert!(nil2_mul(&ab, &inv).unwrap().is_identity());
        assert_eq!(nil2_commutator(&a, &b).unwrap().comm, vec![q(1)]);
        assert_eq!(nil2_commutator(&b, &a).unwrap().comm, vec![q(-1)]);
    }

    #[test]
    fn companion_lift_m2() {
        // f = 1 + a1 t + t^2 with a1 = 7/3
        let a1 = qf(7, 3);
        let f = RationalPoly::new(vec![q(1), a1.clone(), q(1)]);
        let t = companion_matrix(&f).unwrap();
        let lift = build_tau_lift(&t, None).unwrap();
        assert_eq!(lift.e(), &QMatrix::identity(1));
        let (b1, b2) = (qf(2, 5), q(-3));
        let lam = lift.lambda(&[b1.clone(), b2.clone()]);
        assert_eq!(lam, vec![&a1 * &b2 * &b2 / q(2) - &b1 * &b2]);
        let g = Nil2Element::new(vec![b1.clone(), b2.clone()], vec![q(5)]).unwrap();
        let img = tau_apply(&lift, &g, 1);
        assert_eq!(img.ab, vec![-b2.clone(), &b1 - &a1 * &b2]);
        assert_eq!(tau_apply(&lift, &img, -1), g);
    }

    #[test]
    fn identity_lift() {
        let lift = build_tau_lift(&QMatrix::identity(3), None).unwrap();
        assert_eq!(lift.e(), &QMatrix::identity(3));
        assert!(lift.b().iter().all(|b| b.is_zero()));
    }

    #[test]
    fn serde_round_trip() {
        let g = Nil2Element::new(vec![qf(1, 2), q(-3)], vec![qf(-7, 4)]).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"ab":["1/2","-3"],"comm":["-7/4"]}"#);
        let back: Nil2Element = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
    }
}
