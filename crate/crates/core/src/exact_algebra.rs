//! Exact rationals, univariate polynomials over Q, dense matrices over Q and
//! over Q[t], and Smith normal form over Q[t].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Rational = BigRational;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_q(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn lcm_denoms<'a>(xs: impl Iterator<Item = &'a Rational>) -> BigInt {
    xs.fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

// ---------------------------------------------------------------------------
// Polynomials

/// Polynomial in `t` with rational coefficients; `coeffs[i]` multiplies `t^i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RationalPoly {
    coeffs: Vec<Rational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| q(c)).collect())
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(q(1))
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c * t^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn t() -> Self {
        Self::monomial(q(1), 1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `t^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * q(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.lead();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quo = vec![Rational::zero(); r.len() - dd];
        for k in (0..quo.len()).rev() {
            let c = &r[k + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (i, di) in d.coeffs.iter().enumerate() {
                r[k + i] -= &c * di;
            }
            quo[k] = c;
        }
        r.truncate(dd);
        (Self::new(quo), Self::new(r))
    }

    pub fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).1.is_zero()
    }

    /// Monic gcd (zero iff both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.scale(&a.lead().recip())
        }
    }

    /// `t^deg · f(1/t)`
    pub fn reversed(&self) -> Self {
        Self::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// Integer coefficients of the primitive integer multiple with positive
    /// leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let l = lcm_denoms(self.coeffs.iter());
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }

    pub fn primitive_display(&self) -> RationalPoly {
        RationalPoly::new(
            self.primitive_integer()
                .into_iter()
                .map(Rational::from_integer)
                .collect(),
        )
    }

    /// Renders with the given variable name, highest degree first.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                out.push_str(&fmt_q(&a));
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{}", fmt_q(&a), mono));
            }
        }
        out
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("t"))
    }
}

impl fmt::Debug for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalPoly({self})")
    }
}

impl<'a> Add<&'a RationalPoly> for &'a RationalPoly {
    type Output = RationalPoly;
    fn add(self, o: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RationalPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a RationalPoly> for &'a RationalPoly {
    type Output = RationalPoly;
    fn sub(self, o: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RationalPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a RationalPoly> for &'a RationalPoly {
    type Output = RationalPoly;
    fn mul(self, o: &RationalPoly) -> RationalPoly {
        if self.is_zero() || o.is_zero() {
            return RationalPoly::zero();
        }
        let mut v = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        RationalPoly::new(v)
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        self.scale(&q(-1))
    }
}

impl FromStr for RationalPoly {
    type Err = Error;

    /// Accepts sums of terms `c`, `c*t`, `c*t^k`, `t^k`, `-t` in any order.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("bad polynomial '{s}': {m}"));
        let compact: String = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| if c == '\u{2212}' { '-' } else { c })
            .collect();
        if compact.is_empty() {
            return Err(bad("empty"));
        }
        let mut terms = Vec::new();
        let mut cur = String::new();
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        let mut acc = RationalPoly::zero();
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(b) => (q(-1), b),
                None => (q(1), term.strip_prefix('+').unwrap_or(&term)),
            };
            if body.is_empty() {
                return Err(bad("dangling sign"));
            }
            let (coef, mono) = match body.find('t') {
                None => (body, None),
                Some(p) => {
                    let c = match body[..p].strip_suffix('*') {
                        Some("") => return Err(bad("missing coefficient before '*'")),
                        Some(c) => c,
                        None => &body[..p],
                    };
                    (c, Some(&body[p + 1..]))
                }
            };
            let c = if coef.is_empty() {
                q(1)
            } else {
                parse_q(coef).map_err(|_| bad("coefficient"))?
            };
            let k = match mono {
                None => 0,
                Some("") => 1,
                Some(e) => e
                    .strip_prefix('^')
                    .and_then(|e| e.parse::<usize>().ok())
                    .ok_or_else(|| bad("exponent"))?,
            };
            acc = &acc + &RationalPoly::monomial(sign * c, k);
        }
        Ok(acc)
    }
}

/// True iff `f` is palindromic after normalizing the leading coefficient.
pub fn reciprocal_check(f: &RationalPoly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::Algebra(
            "zero polynomial has no reciprocity status".into(),
        ));
    }
    let a = monic_normalize(f)?;
    let r = f.reversed();
    let b = monic_normalize(&r)?;
    Ok(a == b && f.coeff(0) != Rational::zero())
}

pub fn monic_normalize(f: &RationalPoly) -> Result<RationalPoly> {
    if f.is_zero() {
        return Err(Error::Algebra("cannot normalize the zero polynomial".into()));
    }
    Ok(f.scale(&f.lead().recip()))
}

/// Matrix of multiplication by `t` on `Q[t]/(f)` in the basis `1, t, …, t^{m-1}`.
pub fn companion_matrix(f: &RationalPoly) -> Result<QMatrix> {
    let m = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::Algebra("companion matrix needs degree >= 1".into())),
    };
    if !f.is_monic() {
        return Err(Error::Algebra("companion matrix needs a monic polynomial".into()));
    }
    let mut t = QMatrix::zeros(m, m);
    for i in 1..m {
        t[(i, i - 1)] = q(1);
    }
    for i in 0..m {
        t[(i, m - 1)] = -f.coeff(i);
    }
    Ok(t)
}

// ---------------------------------------------------------------------------
// Matrices over Q

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(fmt_q).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = q(1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(rows: usize, cols: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for i in 0..rows {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn row(&self, r: usize) -> Vec<Rational> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let mut s = Rational::zero();
                for (c, x) in v.iter().enumerate() {
                    let a = &self[(r, c)];
                    if !a.is_zero() && !x.is_zero() {
                        s += a * x;
                    }
                }
                s
            })
            .collect()
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::identity(self.rows), |acc, _| &acc * self)
    }

    /// Row-reduced echelon form and pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    let d = &f * &m[(r, j)];
                    m[(i, j)] -= d;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space in reduced echelon normal form: each vector
    /// has a 1 in its free column and 0 in the other free columns.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = q(1);
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    /// The unique `x` with `self * x = rhs`.
    pub fn solve_unique(&self, rhs: &[Rational]) -> Result<Vec<Rational>> {
        assert_eq!(rhs.len(), self.rows, "dimension mismatch");
        let mut aug = QMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = rhs[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(Error::Algebra("no solution".into()));
        }
        if pivots.len() < self.cols {
            return Err(Error::Algebra("solution not unique".into()));
        }
        Ok((0..self.cols).map(|i| r[(i, self.cols)].clone()).collect())
    }

    pub fn inverse(&self) -> Result<QMatrix> {
        if !self.is_square() {
            return Err(Error::Algebra("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = QMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = q(1);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Algebra("singular matrix".into()));
        }
        let mut inv = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    pub fn determinant(&self) -> Rational {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det = q(1);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &piv;
                for j in c..n {
                    let d = &f * &m[(c, j)];
                    m[(i, j)] -= d;
                }
            }
        }
        det
    }

    /// `det(tI - M)` by the Faddeev-LeVerrier recursion.
    pub fn char_poly(&self) -> RationalPoly {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = q(1);
        let mut mk = QMatrix::zeros(n, n);
        for k in 1..=n {
            let mut prev = mk.clone();
            for i in 0..n {
                prev[(i, i)] += &coeffs[n - k + 1];
            }
            mk = self * &prev;
            let tr: Rational = (0..n).map(|i| mk[(i, i)].clone()).sum();
            coeffs[n - k] = -tr / q(k as i64);
        }
        RationalPoly::new(coeffs)
    }

    /// `Σ c_i M^i`
    pub fn poly_eval(&self, p: &[Rational]) -> QMatrix {
        let n = self.rows;
        let mut acc = QMatrix::zeros(n, n);
        for c in p.iter().rev() {
            acc = &acc * self;
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }
}

impl<'a> Mul<&'a QMatrix> for &'a QMatrix {
    type Output = QMatrix;
    fn mul(self, o: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut m = QMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        m[(i, j)] += a * b;
                    }
                }
            }
        }
        m
    }
}

impl<'a> Add<&'a QMatrix> for &'a QMatrix {
    type Output = QMatrix;
    fn add(self, o: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a QMatrix> for &'a QMatrix {
    type Output = QMatrix;
    fn sub(self, o: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }
}

pub fn vec_add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Rational], c: &Rational) -> Vec<Rational> {
    a.iter().map(|x| x * c).collect()
}

pub fn vec_zero(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec_zero(n);
    v[i] = q(1);
    v
}

// ---------------------------------------------------------------------------
// Matrices over Q[t]

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<RationalPoly>,
}

impl std::ops::Index<(usize, usize)> for PolyMatrix {
    type Output = RationalPoly;
    fn index(&self, (r, c): (usize, usize)) -> &RationalPoly {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for PolyMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut RationalPoly {
        &mut self.data[r * self.cols + c]
    }
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, data: vec![RationalPoly::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<RationalPoly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        PolyMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn diagonal(d: &[RationalPoly]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, p) in d.iter().enumerate() {
            m[(i, i)] = p.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Drops one column.
    pub fn without_col(&self, drop: usize) -> Self {
        let mut m = Self::zeros(self.rows, self.cols - 1);
        for i in 0..self.rows {
            let mut k = 0;
            for j in 0..self.cols {
                if j != drop {
                    m[(i, k)] = self[(i, j)].clone();
                    k += 1;
                }
            }
        }
        m
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn determinant(&self) -> RationalPoly {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return RationalPoly::one();
        }
        let mut a = self.clone();
        let mut prev = RationalPoly::one();
        let mut negate = false;
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return RationalPoly::zero();
                };
                a.swap_rows(k, p);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[(k, k)] * &a[(i, j)]) - &(&a[(i, k)] * &a[(k, j)]);
                    a[(i, j)] = num.div_rem(&prev).0;
                }
            }
            prev = a[(k, k)].clone();
        }
        let d = a[(n - 1, n - 1)].clone();
        if negate {
            -&d
        } else {
            d
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] -= f * row[src]`
    fn row_axpy(&mut self, dst: usize, src: usize, f: &RationalPoly) {
        for j in 0..self.cols {
            let d = f * &self[(src, j)];
            self[(dst, j)] = &self[(dst, j)] - &d;
        }
    }

    fn col_axpy(&mut self, dst: usize, src: usize, f: &RationalPoly) {
        for i in 0..self.rows {
            let d = f * &self[(i, src)];
            self[(i, dst)] = &self[(i, dst)] - &d;
        }
    }
}

/// Non-unit elementary divisors `d_1 | d_2 | …`, each monic.
///
/// Pivot: nonzero entry of least degree in the active block, ties broken by
/// smallest row then column.
pub fn smith_divisors(m: &PolyMatrix) -> Vec<RationalPoly> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut diag = Vec::new();
    for k in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    if let Some(d) = a[(i, j)].degree() {
                        if best.is_none_or(|(bd, _, _)| d < bd) {
                            best = Some((d, i, j));
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                return finish_divisors(diag);
            };
            a.swap_rows(k, pi);
            a.swap_cols(k, pj);
            let piv = a[(k, k)].clone();
            let mut dirty = false;
            for i in k + 1..rows {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let (quo, rem) = a[(i, k)].div_rem(&piv);
                a.row_axpy(i, k, &quo);
                dirty |= !rem.is_zero();
            }
            for j in k + 1..cols {
                if a[(k, j)].is_zero() {
                    continue;
                }
                let (quo, rem) = a[(k, j)].div_rem(&piv);
                a.col_axpy(j, k, &quo);
                dirty |= !rem.is_zero();
            }
            if dirty {
                continue;
            }
            let offender = (k + 1..rows)
                .flat_map(|i| (k + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !piv.divides(&a[(i, j)]));
            match offender {
                Some((i, _)) => {
                    let minus_one = RationalPoly::constant(q(-1));
                    a.row_axpy(k, i, &minus_one);
                }
                None => {
                    diag.push(piv);
                    break;
                }
            }
        }
    }
    finish_divisors(diag)
}

fn finish_divisors(diag: Vec<RationalPoly>) -> Vec<RationalPoly> {
    diag.into_iter()
        .filter(|p| p.degree().is_some_and(|d| d > 0))
        .map(|p| p.scale(&p.lead().recip()))
        .collect()
}

// ---------------------------------------------------------------------------
// Limited factorization over Q

/// Irreducible monic factors with multiplicity, or `None` when irreducibility
/// of some remaining piece cannot be certified.
///
/// Handles rational roots, cyclotomic factors of degree up to 12, and
/// quadratic factors found by trial; anything of degree <= 5 without such
/// factors is irreducible.
pub fn factor_limited(f: &RationalPoly) -> Option<Vec<(RationalPoly, u32)>> {
    let f = monic_normalize(f).ok()?;
    let mut out: Vec<(RationalPoly, u32)> = Vec::new();
    for (part, mult) in squarefree_decomposition(&f) {
        for p in factor_squarefree(&part)? {
            out.push((p, mult));
        }
    }
    out.sort_by(|a, b| {
        (a.0.degree(), a.0.coeffs().to_vec()).cmp(&(b.0.degree(), b.0.coeffs().to_vec()))
    });
    Some(out)
}

/// Yun's algorithm: `f = Π p_i^i` with each `p_i` squarefree and monic.
pub fn squarefree_decomposition(f: &RationalPoly) -> Vec<(RationalPoly, u32)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let f = f.scale(&f.lead().recip());
    let d = f.derivative();
    let a0 = f.gcd(&d);
    let mut b = f.div_rem(&a0).0;
    let mut c = d.div_rem(&a0).0;
    let mut dd = &c - &b.derivative();
    let mut i = 1;
    loop {
        let a = b.gcd(&dd);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        b = b.div_rem(&a).0;
        if b.degree().unwrap_or(0) == 0 {
            break;
        }
        c = dd.div_rem(&a).0;
        dd = &c - &b.derivative();
        i += 1;
    }
    out
}

fn factor_squarefree(f: &RationalPoly) -> Option<Vec<RationalPoly>> {
    let mut rest = f.clone();
    let mut out = Vec::new();
    for r in rational_roots(&rest)? {
        let lin = RationalPoly::new(vec![-r, q(1)]);
        rest = rest.div_rem(&lin).0;
        out.push(lin);
    }
    for n in 1..=60u32 {
        if rest.degree().unwrap_or(0) == 0 {
            break;
        }
        let phi = cyclotomic(n);
        if phi.degree().unwrap() > 12 {
            continue;
        }
        if phi.divides(&rest) {
            rest = rest.div_rem(&phi).0;
            out.push(phi);
        }
    }
    while rest.degree().unwrap_or(0) >= 4 {
        match quadratic_factor(&rest)? {
            Some(qf) => {
                rest = rest.div_rem(&qf).0;
                out.push(qf);
            }
            None => break,
        }
    }
    match rest.degree().unwrap_or(0) {
        0 => {}
        d if d <= 5 => out.push(rest),
        _ => return None,
    }
    Some(out)
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.is_zero() {
        return None;
    }
    let small = n.to_u64().filter(|&v| v <= 1_000_000_000_000)?;
    let mut ds = Vec::new();
    let mut i = 1u64;
    while i * i <= small {
        if small % i == 0 {
            ds.push(BigInt::from(i));
            if i * i != small {
                ds.push(BigInt::from(small / i));
            }
        }
        i += 1;
    }
    ds.sort();
    Some(ds)
}

fn integer_coeffs(f: &RationalPoly) -> Vec<BigInt> {
    let l = lcm_denoms(f.coeffs().iter());
    f.coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
        .collect()
}

/// Distinct rational roots; `None` if coefficient sizes are out of reach.
pub fn rational_roots(f: &RationalPoly) -> Option<Vec<Rational>> {
    let mut roots = Vec::new();
    let mut g = f.clone();
    if g.coeff(0).is_zero() {
        roots.push(Rational::zero());
        while g.coeff(0).is_zero() && !g.is_zero() {
            g = g.div_rem(&RationalPoly::t()).0;
        }
    }
    if g.degree().unwrap_or(0) == 0 {
        return Some(roots);
    }
    let z = integer_coeffs(&g);
    let ps = divisors(&z[0])?;
    let qs = divisors(z.last().unwrap())?;
    let mut seen = std::collections::BTreeSet::new();
    for p in &ps {
        for qq in &qs {
            for s in [1, -1] {
                let r = Rational::new(p * BigInt::from(s), qq.clone());
                if seen.insert(r.clone()) && g.eval(&r).is_zero() {
                    roots.push(r);
                }
            }
        }
    }
    Some(roots)
}

/// A monic quadratic factor over Q of a polynomial without rational roots.
fn quadratic_factor(f: &RationalPoly) -> Option<Option<RationalPoly>> {
    let z = integer_coeffs(f);
    let (c0, lead) = (&z[0], z.last().unwrap());
    let fz = RationalPoly::new(z.iter().cloned().map(Rational::from_integer).collect());
    let v1 = fz.eval(&q(1)).to_integer();
    let vm1 = fz.eval(&q(-1)).to_integer();
    let d1 = divisors(&v1)?;
    let dm1 = divisors(&vm1)?;
    let signed = |ds: &[BigInt]| -> Vec<BigInt> {
        ds.iter().flat_map(|d| [d.clone(), -d.clone()]).collect()
    };
    let (s1, sm1) = (signed(&d1), signed(&dm1));
    for a in divisors(lead)? {
        for c in signed(&divisors(c0)?) {
            for v in &s1 {
                let b = v - &a - &c;
                let at_m1 = &a - &b + &c;
                if !sm1.contains(&at_m1) {
                    continue;
                }
                let cand = RationalPoly::new(vec![
                    Rational::from_integer(c.clone()),
                    Rational::from_integer(b.clone()),
                    Rational::from_integer(a.clone()),
                ]);
                if cand.divides(f) {
                    return Some(Some(cand.scale(&cand.lead().recip())));
                }
            }
        }
    }
    Some(None)
}

/// The n-th cyclotomic polynomial.
pub fn cyclotomic(n: u32) -> RationalPoly {
    let mut p = RationalPoly::monomial(q(1), n as usize);
    p = &p - &RationalPoly::one();
    for d in 1..n {
        if n % d == 0 {
            p = p.div_rem(&cyclotomic(d)).0;
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> RationalPoly {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_render_round_trip() {
        let f = p("1 - t + t^2");
        assert_eq!(f, RationalPoly::from_ints(&[1, -1, 1]));
        assert_eq!(f.to_string(), "t^2 - t + 1");
        assert_eq!(p("t^2 + 1/2*t -3"), RationalPoly::new(vec![q(-3), qf(1, 2), q(1)]));
        assert_eq!(p(" -t "), RationalPoly::from_ints(&[0, -1]));
        assert!("1 + * t".parse::<RationalPoly>().is_err());
        assert!("t^x".parse::<RationalPoly>().is_err());
    }

    #[test]
    fn primitive_display() {
        let f = p("t^2 - 5/2*t + 1");
        assert_eq!(f.primitive_display().to_string(), "2*t^2 - 5*t + 2");
        assert_eq!(p("-3*t + 6").primitive_display().to_string(), "t - 2");
    }

    #[test]
    fn division_and_gcd() {
        let a = p("t^3 - 1");
        let b = p("t^2 - 1");
        assert_eq!(a.gcd(&b), p("t - 1"));
        let (qq, r) = a.div_rem(&b);
        assert_eq!((qq, r), (p("t"), p("t - 1")));
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic(6), p("t^2 - t + 1"));
        assert_eq!(cyclotomic(10), p("t^4 - t^3 + t^2 - t + 1"));
        assert_eq!(cyclotomic(12), p("t^4 - t^2 + 1"));
    }

    #[test]
    fn squarefree() {
        let f = &p("t^2 - t + 1").pow(2) * &p("t - 2");
        let d = squarefree_decomposition(&f);
        assert_eq!(d, vec![(p("t - 2"), 1), (p("t^2 - t + 1"), 2)]);
    }

    #[test]
    fn factorizer() {
        let f = &p("t^2 - 3*t + 1") * &p("t^2 - t + 1");
        let fs = factor_limited(&f).unwrap();
        assert_eq!(fs, vec![(p("t^2 - 3*t + 1"), 1), (p("t^2 - t + 1"), 1)]);
        let g = &p("2*t^2 - 5*t + 2") * &p("t^2 + t + 1");
        let fs = factor_limited(&g).unwrap();
        assert_eq!(fs.len(), 3);
        let h = &p("t^2 - 3*t + 1") * &p("t^2 - 4*t + 1");
        let fs = factor_limited(&h).unwrap();
        assert_eq!(fs, vec![(p("t^2 - 4*t + 1"), 1), (p("t^2 - 3*t + 1"), 1)]);
    }
}
