//! The structured pencil data `[E, A, B]`.

use std::ops::Range;

use crate::error::{dim_err, Result};
use crate::linalg::Mat;

/// A control system `E x' = A x + B u` with `E, A` of size `l x n` and `B` of size `l x m`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SystemTriple {
    e: Mat,
    a: Mat,
    b: Mat,
}

impl SystemTriple {
    pub fn new(e: Mat, a: Mat, b: Mat) -> Result<Self> {
        if e.shape() != a.shape() {
            return Err(dim_err(format!(
                "E is {}x{} but A is {}x{}",
                e.rows(),
                e.cols(),
                a.rows(),
                a.cols()
            )));
        }
        if b.rows() != e.rows() {
            return Err(dim_err(format!(
                "B has {} rows, E has {}",
                b.rows(),
                e.rows()
            )));
        }
        Ok(SystemTriple { e, a, b })
    }

    pub fn e(&self) -> &Mat {
        &self.e
    }

    pub fn a(&self) -> &Mat {
        &self.a
    }

    pub fn b(&self) -> &Mat {
        &self.b
    }

    /// `(l, n, m)`.
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.e.rows(), self.e.cols(), self.b.cols())
    }

    pub fn into_parts(self) -> (Mat, Mat, Mat) {
        (self.e, self.a, self.b)
    }

    /// Sub-blocks `(E[r, c], A[r, c], B[r, k])`.
    pub fn blocks(&self, r: Range<usize>, c: Range<usize>, k: Range<usize>) -> (Mat, Mat, Mat) {
        (
            self.e.block(r.clone(), c.clone()),
            self.a.block(r.clone(), c),
            self.b.block(r, k),
        )
    }

    /// The input-free system `[[E, 0], [A, B], 0]` of the augmented pencil `s[E, 0] - [A, B]`.
    pub fn augmented(&self) -> SystemTriple {
        let (l, _, m) = self.dims();
        let e = Mat::hstack(&[&self.e, &Mat::zeros(l, m)]).expect("row counts agree");
        let a = Mat::hstack(&[&self.a, &self.b]).expect("row counts agree");
        SystemTriple {
            e,
            a,
            b: Mat::zeros(l, 0),
        }
    }
}
