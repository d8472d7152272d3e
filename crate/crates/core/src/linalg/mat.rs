//! Dense matrices over the rationals.
//!
//! Every entry is a [`BigRational`], which keeps itself reduced with a
//! positive denominator after each operation. Zero-sized matrices (`0 x k`,
//! `k x 0`) are ordinary values and flow through every operation.

use std::fmt;
use std::ops::{Add, Mul, Neg, Range, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rational = BigRational;

/// Integer-valued rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den`, reduced. Panics on a zero denominator.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Builds a matrix from row vectors. `cols` is needed so that a matrix
    /// without rows still has a width.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> crate::Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(crate::error::dim_err(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Mat { rows: nrows, cols, data })
    }

    /// Integer matrix literal; all rows must have equal length.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_fn(rows.len(), cols, |i, j| {
            assert_eq!(rows[i].len(), cols, "ragged integer matrix literal");
            int(rows[i][j])
        })
    }

    pub fn column_vector(entries: Vec<Rational>) -> Self {
        let rows = entries.len();
        Mat { rows, cols: 1, data: entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &Rational> {
        self.data.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &Rational) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn block(&self, rows: Range<usize>, cols: Range<usize>) -> Mat {
        assert!(rows.end <= self.rows && cols.end <= self.cols, "block out of bounds");
        Mat::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows.start + i, cols.start + j).clone()
        })
    }

    pub fn select_columns(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    /// Writes `src` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, src: &Mat) {
        assert!(r0 + src.rows <= self.rows && c0 + src.cols <= self.cols, "block out of bounds");
        for i in 0..src.rows {
            for j in 0..src.cols {
                self.set(r0 + i, c0 + j, src.get(i, j).clone());
            }
        }
    }

    pub fn hstack(parts: &[&Mat]) -> crate::Result<Mat> {
        let rows = match parts.first() {
            Some(m) => m.rows,
            None => return Ok(Mat::zeros(0, 0)),
        };
        if let Some(bad) = parts.iter().find(|m| m.rows != rows) {
            return Err(crate::error::dim_err(format!(
                "hstack: {} rows vs {rows}",
                bad.rows
            )));
        }
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Mat::zeros(rows, cols);
        let mut c0 = 0;
        for m in parts {
            out.set_block(0, c0, m);
            c0 += m.cols;
        }
        Ok(out)
    }

    pub fn vstack(parts: &[&Mat]) -> crate::Result<Mat> {
        let cols = match parts.first() {
            Some(m) => m.cols,
            None => return Ok(Mat::zeros(0, 0)),
        };
        if let Some(bad) = parts.iter().find(|m| m.cols != cols) {
            return Err(crate::error::dim_err(format!(
                "vstack: {} cols vs {cols}",
                bad.cols
            )));
        }
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Mat::zeros(rows, cols);
        let mut r0 = 0;
        for m in parts {
            out.set_block(r0, 0, m);
            r0 += m.rows;
        }
        Ok(out)
    }

    /// Block diagonal matrix; blocks may have zero rows or columns.
    pub fn block_diag(blocks: &[&Mat]) -> Mat {
        let rows = blocks.iter().map(|m| m.rows).sum();
        let cols = blocks.iter().map(|m| m.cols).sum();
        let mut out = Mat::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for m in blocks {
            out.set_block(r0, c0, m);
            r0 += m.rows;
            c0 += m.cols;
        }
        out
    }

    pub fn checked_mul(&self, rhs: &Mat) -> crate::Result<Mat> {
        if self.cols != rhs.rows {
            return Err(crate::error::dim_err(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        if self.is_integral() && rhs.is_integral() {
            return Ok(self.integral_product(rhs));
        }
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.denom().is_one())
    }

    /// Product of integer matrices, accumulated without intermediate reduction.
    fn integral_product(&self, rhs: &Mat) -> Mat {
        Mat::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = BigInt::zero();
            for k in 0..self.cols {
                let (a, b) = (self.get(i, k).numer(), rhs.get(k, j).numer());
                if !a.is_zero() && !b.is_zero() {
                    acc += a * b;
                }
            }
            Rational::from_integer(acc)
        })
    }

    fn zip_with(&self, rhs: &Mat, op: &str, f: impl Fn(&Rational, &Rational) -> Rational) -> Mat {
        assert_eq!(
            self.shape(),
            rhs.shape(),
            "{op} of {}x{} and {}x{}",
            self.rows,
            self.cols,
            rhs.rows,
            rhs.cols
        );
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let (rows, pivots) = self.integer_elimination(true);
        let mut m = Mat::zeros(self.rows, self.cols);
        for (r, (row, &c)) in rows.iter().zip(&pivots).enumerate() {
            let p = &row[c];
            for (j, x) in row.iter().enumerate().skip(c) {
                if !x.is_zero() {
                    m.data[r * self.cols + j] = Rational::new(x.clone(), p.clone());
                }
            }
        }
        (m, pivots)
    }

    fn integer_elimination(&self, full: bool) -> (Vec<Vec<BigInt>>, Vec<usize>) {
        let rows: Vec<&[Rational]> = (0..self.rows).map(|i| self.row(i)).collect();
        super::elim::integer_echelon(&rows, self.cols, full)
    }

    pub fn rank(&self) -> usize {
        self.integer_elimination(false).1.len()
    }

    pub fn has_full_column_rank(&self) -> bool {
        self.rank() == self.cols
    }

    pub fn has_full_row_rank(&self) -> bool {
        self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = Mat::hstack(&[self, &Mat::identity(n)]).ok()?;
        let (r, pivots) = aug.rref();
        if pivots.iter().take_while(|&&p| p < n).count() < n {
            return None;
        }
        Some(r.block(0..n, n..2 * n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Particular solution `X` of `self * X = rhs` with every free variable
    /// set to zero, or `None` if the system is inconsistent.
    pub fn solve_right(&self, rhs: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, rhs.rows, "solve_right: row counts differ");
        let n = self.cols;
        let aug = Mat::hstack(&[self, rhs]).expect("row counts checked");
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= n) {
            return None;
        }
        let mut x = Mat::zeros(n, rhs.cols);
        for (row, &p) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(p, j, r.get(row, n + j).clone());
            }
        }
        Some(x)
    }

    /// Left inverse `L` with `L * self = I`, for full column rank input.
    pub fn left_inverse(&self) -> Option<Mat> {
        let t = self.transpose();
        let gram = t.checked_mul(self).ok()?;
        Some(gram.inverse()?.checked_mul(&t).expect("shapes agree"))
    }

    /// Right inverse `R` with `self * R = I`, for full row rank input.
    pub fn right_inverse(&self) -> Option<Mat> {
        Some(self.transpose().left_inverse()?.transpose())
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_string()).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        if self.rows == 0 || self.cols == 0 {
            return write!(f, "[{}x{} empty]", self.rows, self.cols);
        }
        for (i, row) in cells.iter().enumerate() {
            let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            write!(f, "[ {} ]", padded.join("  "))?;
            if i + 1 < cells.len() {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        self.zip_with(rhs, "sum", |a, b| a + b)
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        self.zip_with(rhs, "difference", |a, b| a - b)
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_identity() {
        let (r, p) = Mat::identity(3).rref();
        assert_eq!(r, Mat::identity(3));
        assert_eq!(p, vec![0, 1, 2]);
    }

    #[test]
    fn rref_zero() {
        let z = Mat::zeros(2, 3);
        let (r, p) = z.rref();
        assert_eq!(r, z);
        assert!(p.is_empty());
    }

    #[test]
    fn rref_proportional_rows() {
        let (r, p) = Mat::from_i64(&[&[1, 2], &[2, 4]]).rref();
        assert_eq!(r, Mat::from_i64(&[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn rref_fractional_pivot() {
        let (r, _) = Mat::from_i64(&[&[2, 1], &[4, 3]]).rref();
        assert_eq!(r, Mat::identity(2));
        let (r, _) = Mat::from_i64(&[&[2, 1, 1]]).rref();
        assert_eq!(r.get(0, 1), &frac(1, 2));
    }

    #[test]
    fn inverse_roundtrip_and_singular() {
        let m = Mat::from_i64(&[&[2, 1], &[7, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Mat::identity(2));
        assert!(Mat::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
        assert_eq!(Mat::zeros(0, 0).inverse(), Some(Mat::zeros(0, 0)));
    }

    #[test]
    fn solve_right_cases() {
        let b = Mat::from_i64(&[&[1, 2], &[3, 4]]);
        assert_eq!(Mat::identity(2).solve_right(&b), Some(b.clone()));
        assert_eq!(Mat::zeros(2, 2).solve_right(&b), None);
        // free variable zeroed
        let a = Mat::from_i64(&[&[1, 1]]);
        let x = a.solve_right(&Mat::from_i64(&[&[3]])).unwrap();
        assert_eq!(x, Mat::from_i64(&[&[3], &[0]]));
    }

    #[test]
    fn zero_sized_products() {
        let a = Mat::zeros(3, 0);
        let b = Mat::zeros(0, 2);
        assert_eq!(&a * &b, Mat::zeros(3, 2));
        assert_eq!((&b * &Mat::zeros(2, 4)).shape(), (0, 4));
        assert!(Mat::hstack(&[&Mat::zeros(2, 0), &Mat::identity(2)]).is_ok());
    }

    #[test]
    fn block_diag_with_empty_blocks() {
        let k1 = Mat::zeros(0, 1);
        let m = Mat::block_diag(&[&k1, &Mat::identity(2)]);
        assert_eq!(m.shape(), (2, 3));
        assert_eq!(m.column(0), vec![int(0), int(0)]);
    }

    #[test]
    fn one_sided_inverses() {
        let m = Mat::from_i64(&[&[1, 0], &[2, 1], &[0, 3]]);
        let l = m.left_inverse().unwrap();
        assert_eq!(&l * &m, Mat::identity(2));
        let r = m.transpose().right_inverse().unwrap();
        assert_eq!(&m.transpose() * &r, Mat::identity(2));
    }
}
