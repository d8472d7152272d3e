//! Univariate polynomial matrices over `Q[s]` and rank conditions on pencils
//! that must hold for every complex evaluation point.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::error::{dim_err, Result};
use crate::linalg::{Mat, Rational};

/// Polynomial with rational coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `a s + b`.
    pub fn linear(a: Rational, b: Rational) -> Self {
        Self::from_coeffs(vec![b, a])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_nonzero_constant(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn monic(&self) -> Poly {
        match self.coeffs.last() {
            None => Poly::zero(),
            Some(lead) => {
                let inv = lead.recip();
                Poly::from_coeffs(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    /// Euclidean division. Panics on division by zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let lead_inv = d.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if nd < dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
            q[k] = c;
        }
        rem.truncate(dd);
        (Poly::from_coeffs(q), Poly::from_coeffs(rem))
    }

    fn exact_div(&self, d: &Poly) -> Poly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})s"),
                _ => format!("({c})s^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// Which dimension a full-rank condition refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Row,
    Column,
}

#[derive(Clone, PartialEq, Eq)]
pub struct PolyMat {
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl fmt::Debug for PolyMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMat {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        Ok(())
    }
}

/// The pencil `s E - A`.
pub fn pencil(e: &Mat, a: &Mat) -> Result<PolyMat> {
    if e.shape() != a.shape() {
        return Err(dim_err(format!(
            "pencil of a {:?} and a {:?} matrix",
            e.shape(),
            a.shape()
        )));
    }
    let (rows, cols) = e.shape();
    let data = (0..rows)
        .flat_map(|i| (0..cols).map(move |j| (i, j)))
        .map(|(i, j)| Poly::linear(e.get(i, j).clone(), -a.get(i, j)))
        .collect();
    Ok(PolyMat { rows, cols, data })
}

impl PolyMat {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        PolyMat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    /// Maximum entry degree, 0 for the zero matrix.
    pub fn degree(&self) -> usize {
        self.data.iter().filter_map(Poly::degree).max().unwrap_or(0)
    }

    /// Matrix of the coefficients of `s^k`.
    pub fn coefficient(&self, k: usize) -> Mat {
        Mat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).coeff(k))
    }

    pub fn eval(&self, x: &Rational) -> Mat {
        Mat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).eval(x))
    }

    fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Vec<Vec<Poly>> {
        rows.iter()
            .map(|&i| cols.iter().map(|&j| self.get(i, j).clone()).collect())
            .collect()
    }

    /// Rank over the field of rational functions.
    pub fn normal_rank(&self) -> usize {
        let rows: Vec<usize> = (0..self.rows).collect();
        let cols: Vec<usize> = (0..self.cols).collect();
        bareiss(self.submatrix(&rows, &cols)).0
    }

    /// Greatest common divisor (monic) of all `k x k` minors. Zero when every
    /// such minor vanishes; one for `k = 0`.
    pub fn minor_gcd(&self, k: usize) -> Poly {
        if k == 0 {
            return Poly::one();
        }
        if k > self.rows.min(self.cols) {
            return Poly::zero();
        }
        let mut g = Poly::zero();
        for rs in (0..self.rows).combinations(k) {
            for cs in (0..self.cols).combinations(k) {
                let (rank, det) = bareiss(self.submatrix(&rs, &cs));
                if rank < k {
                    continue;
                }
                g = Poly::gcd(&g, &det);
                if g.is_nonzero_constant() {
                    return g;
                }
            }
        }
        g
    }

    /// Monic polynomial whose roots are exactly the finite points where the
    /// rank falls below the normal rank.
    pub fn rank_drop_polynomial(&self) -> Poly {
        self.minor_gcd(self.normal_rank())
    }

    /// Rank at `s = ∞`, taken as the rank of the leading coefficient of a
    /// pencil (`rank(∞M - N) = rank M`).
    pub fn rank_at_infinity(&self) -> usize {
        self.coefficient(1).rank()
    }
}

/// Fraction-free elimination with full pivoting. Returns the rank and, when
/// the input is square and nonsingular, its determinant up to sign.
fn bareiss(mut a: Vec<Vec<Poly>>) -> (usize, Poly) {
    let n_rows = a.len();
    let n_cols = a.first().map_or(0, Vec::len);
    let mut prev = Poly::one();
    let mut rank = 0;
    for k in 0..n_rows.min(n_cols) {
        let pivot = (k..n_rows)
            .flat_map(|i| (k..n_cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_zero())
            .min_by_key(|&(i, j)| a[i][j].degree());
        let Some((pi, pj)) = pivot else {
            break;
        };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        for i in k + 1..n_rows {
            for j in k + 1..n_cols {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.exact_div(&prev);
            }
            a[i][k] = Poly::zero();
        }
        prev = a[k][k].clone();
        rank += 1;
    }
    let det = if rank == n_rows && rank == n_cols {
        prev
    } else {
        Poly::zero()
    };
    (rank, det)
}

/// True iff `rank P(λ) = target` for every `λ ∈ C` and `target` equals the
/// row count (`Row`) or column count (`Column`) of `P`.
pub fn full_rank_all_finite(p: &PolyMat, target: usize, orientation: Orientation) -> bool {
    let full = match orientation {
        Orientation::Row => p.rows(),
        Orientation::Column => p.cols(),
    };
    if target != full || target > p.rows().min(p.cols()) {
        return false;
    }
    if target == 0 {
        return true;
    }
    if p.normal_rank() != target {
        return false;
    }
    p.minor_gcd(target).is_nonzero_constant()
}

/// Full rank for every `λ ∈ C ∪ {∞}`.
pub fn full_rank_everywhere(p: &PolyMat, orientation: Orientation) -> bool {
    let target = match orientation {
        Orientation::Row => p.rows(),
        Orientation::Column => p.cols(),
    };
    full_rank_all_finite(p, target, orientation) && p.rank_at_infinity() == target
}

/// Whether the pencils `P` and `Q` have a common rank drop in `C ∪ {∞}`.
pub fn simultaneous_rank_drop(p: &PolyMat, q: &PolyMat) -> bool {
    let g = Poly::gcd(&p.rank_drop_polynomial(), &q.rank_drop_polynomial());
    if !g.is_nonzero_constant() {
        return true;
    }
    p.rank_at_infinity() < p.normal_rank() && q.rank_at_infinity() < q.normal_rank()
}
