//! Subspaces of `Q^k` in canonical form and the lattice operations on them.

use num_traits::Zero;

use super::mat::{Mat, Rational};
use crate::error::{dim_err, Error, Result};

/// A linear subspace of `Q^ambient`.
///
/// The basis is the reduced column echelon form of any spanning set, so two
/// values compare equal exactly when they describe the same subspace.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Mat,
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} in Q^{}) {:?}", self.dim(), self.ambient, self.basis)
    }
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Mat::zeros(ambient, 0),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Mat::identity(ambient),
        }
    }

    /// Column span of `m`.
    pub fn span(m: &Mat) -> Self {
        let (r, pivots) = m.transpose().rref();
        let basis = r.block(0..pivots.len(), 0..m.rows()).transpose();
        Subspace {
            ambient: m.rows(),
            basis,
        }
    }

    /// Span of the first `k` unit vectors followed by zeros, i.e. `Q^k x {0}`.
    pub fn leading_coordinates(ambient: usize, k: usize) -> Self {
        Self::coordinate_range(ambient, 0..k)
    }

    /// Span of the unit vectors with indices in `range`.
    pub fn coordinate_range(ambient: usize, range: std::ops::Range<usize>) -> Self {
        let idx: Vec<usize> = range.collect();
        Self::span(&Mat::identity(ambient).select_columns(&idx))
    }

    /// Null space `{x : m x = 0}`.
    pub fn kernel(m: &Mat) -> Self {
        let (r, pivots) = m.rref();
        let n = m.cols();
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Mat::zeros(n, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis.set(f, k, Rational::from_integer(1.into()));
            for (row, &p) in pivots.iter().enumerate() {
                basis.set(p, k, -r.get(row, f));
            }
        }
        Self::span(&basis)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ambient);
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        let stacked = Mat::hstack(&[&self.basis, &Mat::column_vector(v.to_vec())]).unwrap();
        stacked.rank() == self.dim()
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> bool {
        if other.ambient != self.ambient {
            return false;
        }
        let stacked = Mat::hstack(&[&self.basis, &other.basis]).unwrap();
        stacked.rank() == self.dim()
    }

    fn check_same_ambient(&self, other: &Subspace, op: &str) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(dim_err(format!(
                "{op} of subspaces of Q^{} and Q^{}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other, "sum")?;
        Ok(Self::span(&Mat::hstack(&[&self.basis, &other.basis])?))
    }

    /// Intersection via the kernel of `[B1, -B2]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other, "intersection")?;
        let stacked = Mat::hstack(&[&self.basis, &-&other.basis])?;
        let k = Self::kernel(&stacked);
        let coeffs = k.basis.block(0..self.dim(), 0..k.dim());
        Ok(Self::span(&(&self.basis * &coeffs)))
    }

    /// Image `m * self`.
    pub fn image_under(&self, m: &Mat) -> Result<Subspace> {
        if m.cols() != self.ambient {
            return Err(dim_err(format!(
                "image of a subspace of Q^{} under a {}x{} matrix",
                self.ambient,
                m.rows(),
                m.cols()
            )));
        }
        Ok(Self::span(&m.checked_mul(&self.basis)?))
    }

    /// Preimage `{x : m x ∈ self}`, taken as the first block of the kernel of `[m, -basis]`.
    pub fn preimage(m: &Mat, target: &Subspace) -> Result<Subspace> {
        if m.rows() != target.ambient {
            return Err(dim_err(format!(
                "preimage of a subspace of Q^{} under a {}x{} matrix",
                target.ambient,
                m.rows(),
                m.cols()
            )));
        }
        let stacked = Mat::hstack(&[m, &-&target.basis])?;
        let k = Self::kernel(&stacked);
        Ok(Self::span(&k.basis.block(0..m.cols(), 0..k.dim())))
    }
}

/// Columns `C` with `inner ⊕ im C = outer`, chosen greedily: first from the
/// columns of `preferred` that lie in `outer`, then from the canonical basis
/// of `outer`.
pub fn complement(inner: &Subspace, outer: &Subspace, preferred: Option<&Mat>) -> Result<Mat> {
    let mut candidates = Vec::new();
    if let Some(p) = preferred {
        if p.rows() != outer.ambient_dim() {
            return Err(dim_err("preferred columns live in a different ambient space"));
        }
        candidates.extend((0..p.cols()).map(|j| p.column(j)));
    }
    candidates.extend((0..outer.dim()).map(|j| outer.basis().column(j)));
    complement_from(inner, outer, candidates)
}

/// Greedy complement drawing from an explicit candidate list. Candidates
/// outside `outer` or dependent on what was already picked are skipped.
pub fn complement_from(
    inner: &Subspace,
    outer: &Subspace,
    candidates: impl IntoIterator<Item = Vec<Rational>>,
) -> Result<Mat> {
    inner.check_same_ambient(outer, "complement")?;
    if !outer.contains(inner) {
        return Err(Error::NotContained);
    }
    let need = outer.dim() - inner.dim();
    let mut span = inner.basis().clone();
    let mut picked: Vec<Vec<Rational>> = Vec::new();
    for v in candidates {
        if picked.len() == need {
            break;
        }
        if !outer.contains_vector(&v) {
            continue;
        }
        let trial = Mat::hstack(&[&span, &Mat::column_vector(v.clone())])?;
        if trial.rank() == trial.cols() {
            span = trial;
            picked.push(v);
        }
    }
    if picked.len() != need {
        return Err(Error::Internal(
            "candidate list does not span the outer subspace".into(),
        ));
    }
    let mut out = Mat::zeros(inner.ambient_dim(), need);
    for (j, v) in picked.into_iter().enumerate() {
        out.set_block(0, j, &Mat::column_vector(v));
    }
    Ok(out)
}
