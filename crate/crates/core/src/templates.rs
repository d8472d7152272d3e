//! Shift, nilpotent and unit-vector blocks, and the canonical P- and
//! PD-feedback forms assembled from them.

use num_traits::One;

use crate::error::{dim_err, Error, Result};
use crate::linalg::{Mat, Rational};
use crate::system::SystemTriple;

/// `N_k`: ones on the first subdiagonal, `k x k`.
pub fn nilpotent(k: usize) -> Mat {
    Mat::from_fn(k, k, |i, j| unit(i == j + 1))
}

/// `K_k = [0, I_{k-1}]`, `(k-1) x k`.
pub fn shift_k(k: usize) -> Mat {
    assert!(k >= 1, "block sizes are positive");
    Mat::from_fn(k - 1, k, |i, j| unit(j == i + 1))
}

/// `L_k = [I_{k-1}, 0]`, `(k-1) x k`.
pub fn shift_l(k: usize) -> Mat {
    assert!(k >= 1, "block sizes are positive");
    Mat::from_fn(k - 1, k, |i, j| unit(j == i))
}

fn unit(one: bool) -> Rational {
    if one {
        Rational::one()
    } else {
        Rational::default()
    }
}

/// A tuple of positive block sizes.
pub type MultiIndex = Vec<usize>;

pub fn total(idx: &[usize]) -> usize {
    idx.iter().sum()
}

fn diag_of(idx: &[usize], f: impl Fn(usize) -> Mat) -> Mat {
    let blocks: Vec<Mat> = idx.iter().map(|&k| f(k)).collect();
    Mat::block_diag(&blocks.iter().collect::<Vec<_>>())
}

pub fn nilpotent_multi(idx: &[usize]) -> Mat {
    diag_of(idx, nilpotent)
}

pub fn shift_k_multi(idx: &[usize]) -> Mat {
    diag_of(idx, shift_k)
}

pub fn shift_l_multi(idx: &[usize]) -> Mat {
    diag_of(idx, shift_l)
}

/// `E_α = diag(e_{α_1}^{[α_1]}, ...)`, `|α| x len(α)`.
pub fn unit_multi(idx: &[usize]) -> Mat {
    diag_of(idx, |k| Mat::from_fn(k, 1, |i, _| unit(i + 1 == k)))
}

fn check_multi_index(name: &str, idx: &[usize]) -> Result<()> {
    if idx.contains(&0) {
        return Err(dim_err(format!("multi-index {name} has a zero entry")));
    }
    Ok(())
}

/// Parameters of the P-feedback form. `zero_inputs` counts the input columns
/// that act on no equation; they sit between the `β` and `κ` input columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PffData {
    pub alpha: MultiIndex,
    pub beta: MultiIndex,
    pub gamma: MultiIndex,
    pub delta: MultiIndex,
    pub kappa: MultiIndex,
    pub a_cbar: Mat,
    pub zero_inputs: usize,
}

impl PffData {
    /// `(l, n, m)` of the template.
    pub fn dims(&self) -> (usize, usize, usize) {
        let nc = self.a_cbar.rows();
        let l = total(&self.alpha) - self.alpha.len()
            + total(&self.beta)
            + nc
            + total(&self.gamma)
            + total(&self.delta)
            + total(&self.kappa);
        let n = total(&self.alpha)
            + total(&self.beta)
            + nc
            + total(&self.gamma)
            + total(&self.delta)
            - self.delta.len()
            + total(&self.kappa)
            - self.kappa.len();
        let m = self.beta.len() + self.zero_inputs + self.kappa.len();
        (l, n, m)
    }

    fn validate(&self) -> Result<()> {
        for (name, idx) in [
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("gamma", &self.gamma),
            ("delta", &self.delta),
            ("kappa", &self.kappa),
        ] {
            check_multi_index(name, idx)?;
        }
        if !self.a_cbar.is_square() {
            return Err(dim_err("A_cbar must be square"));
        }
        Ok(())
    }
}

/// The P-feedback form template for `data`.
pub fn make_canonical_blocks(data: &PffData) -> Result<SystemTriple> {
    data.validate()?;
    let nc = data.a_cbar.rows();
    let e = Mat::block_diag(&[
        &shift_k_multi(&data.alpha),
        &Mat::identity(total(&data.beta)),
        &Mat::identity(nc),
        &nilpotent_multi(&data.gamma),
        &shift_k_multi(&data.delta).transpose(),
        &shift_k_multi(&data.kappa).transpose(),
    ]);
    let a = Mat::block_diag(&[
        &shift_l_multi(&data.alpha),
        &nilpotent_multi(&data.beta).transpose(),
        &data.a_cbar,
        &Mat::identity(total(&data.gamma)),
        &shift_l_multi(&data.delta).transpose(),
        &shift_l_multi(&data.kappa).transpose(),
    ]);
    let (l, _, m) = data.dims();
    let mut b = Mat::zeros(l, m);
    let beta_row = total(&data.alpha) - data.alpha.len();
    b.set_block(beta_row, 0, &unit_multi(&data.beta));
    let kappa_row = l - total(&data.kappa);
    b.set_block(kappa_row, m - data.kappa.len(), &unit_multi(&data.kappa));
    SystemTriple::new(e, a, b)
}

/// Parameters of the PD-feedback form; `r = rk B`, and `zero_inputs = m - r`
/// input columns are identically zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdffData {
    pub alpha: MultiIndex,
    pub beta: MultiIndex,
    pub gamma: MultiIndex,
    pub a_cbar: Mat,
    pub r: usize,
    pub zero_inputs: usize,
}

impl PdffData {
    pub fn dims(&self) -> (usize, usize, usize) {
        let nc = self.a_cbar.rows();
        let l = total(&self.alpha) - self.alpha.len()
            + nc
            + total(&self.beta)
            + total(&self.gamma)
            + self.r;
        let n = total(&self.alpha) + nc + total(&self.beta) + total(&self.gamma) - self.gamma.len();
        (l, n, self.zero_inputs + self.r)
    }

    fn validate(&self) -> Result<()> {
        for (name, idx) in [("alpha", &self.alpha), ("beta", &self.beta), ("gamma", &self.gamma)] {
            check_multi_index(name, idx)?;
        }
        if !self.a_cbar.is_square() {
            return Err(dim_err("A_cbar must be square"));
        }
        Ok(())
    }
}

/// The PD-feedback form template for `data`.
pub fn make_pdff_blocks(data: &PdffData) -> Result<SystemTriple> {
    data.validate()?;
    let nc = data.a_cbar.rows();
    let bottom = Mat::zeros(data.r, 0);
    let e = Mat::block_diag(&[
        &shift_k_multi(&data.alpha),
        &Mat::identity(nc),
        &nilpotent_multi(&data.beta),
        &shift_k_multi(&data.gamma).transpose(),
        &bottom,
    ]);
    let a = Mat::block_diag(&[
        &shift_l_multi(&data.alpha),
        &data.a_cbar,
        &Mat::identity(total(&data.beta)),
        &shift_l_multi(&data.gamma).transpose(),
        &bottom,
    ]);
    let (l, _, m) = data.dims();
    let mut b = Mat::zeros(l, m);
    b.set_block(l - data.r, data.zero_inputs, &Mat::identity(data.r));
    SystemTriple::new(e, a, b)
}

/// Row and column extent of each diagonal block of a template, in order.
pub(crate) type Layout = Vec<(String, usize, usize)>;

fn push_multi(layout: &mut Layout, name: &str, idx: &[usize], shape: impl Fn(usize) -> (usize, usize)) {
    for (i, &k) in idx.iter().enumerate() {
        let (r, c) = shape(k);
        layout.push((format!("{name}_{} = {k}", i + 1), r, c));
    }
}

pub(crate) fn pff_layout(data: &PffData) -> Layout {
    let mut l = Layout::new();
    push_multi(&mut l, "alpha", &data.alpha, |k| (k - 1, k));
    push_multi(&mut l, "beta", &data.beta, |k| (k, k));
    let nc = data.a_cbar.rows();
    l.push(("A_cbar".into(), nc, nc));
    push_multi(&mut l, "gamma", &data.gamma, |k| (k, k));
    push_multi(&mut l, "delta", &data.delta, |k| (k, k - 1));
    push_multi(&mut l, "kappa", &data.kappa, |k| (k, k - 1));
    l
}

pub(crate) fn pdff_layout(data: &PdffData) -> Layout {
    let mut l = Layout::new();
    push_multi(&mut l, "alpha", &data.alpha, |k| (k - 1, k));
    let nc = data.a_cbar.rows();
    l.push(("A_cbar".into(), nc, nc));
    push_multi(&mut l, "beta", &data.beta, |k| (k, k));
    push_multi(&mut l, "gamma", &data.gamma, |k| (k, k - 1));
    l.push(("input rows".into(), data.r, 0));
    l
}

fn locate(layout: &Layout, index: usize, rows: bool) -> Option<&str> {
    let mut start = 0;
    for (name, r, c) in layout {
        let len = if rows { *r } else { *c };
        if index < start + len {
            return Some(name);
        }
        start += len;
    }
    None
}

/// Compares `sys` entry by entry with `template`; reports the first
/// differing entry and the diagonal blocks its row and column belong to.
pub(crate) fn compare_with_template(
    form: &'static str,
    sys: &SystemTriple,
    template: &SystemTriple,
    layout: &Layout,
) -> Result<()> {
    if sys.dims() != template.dims() {
        return Err(dim_err(format!(
            "system has dimensions {:?} but the {form} data describe {:?}",
            sys.dims(),
            template.dims()
        )));
    }
    for (name, got, want) in [
        ("E", sys.e(), template.e()),
        ("A", sys.a(), template.a()),
        ("B", sys.b(), template.b()),
    ] {
        if got != want {
            let (i, j) = (0..got.rows())
                .flat_map(|i| (0..got.cols()).map(move |j| (i, j)))
                .find(|&(i, j)| got.get(i, j) != want.get(i, j))
                .expect("matrices differ somewhere");
            let mut reason = format!(
                "{name}[{i}][{j}] is {} but the template has {}",
                got.get(i, j),
                want.get(i, j)
            );
            let row = locate(layout, i, true);
            let col = if name == "B" { None } else { locate(layout, j, false) };
            match (row, col) {
                (Some(r), Some(c)) if r == c => reason += &format!(" (inside block {r})"),
                (Some(r), Some(c)) => reason += &format!(" (rows of block {r}, columns of block {c})"),
                (Some(r), None) => reason += &format!(" (rows of block {r})"),
                _ => {}
            }
            return Err(Error::NotInForm { form, reason });
        }
    }
    Ok(())
}
