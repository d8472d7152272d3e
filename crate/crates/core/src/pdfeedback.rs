//! PD-feedback equivalence `[S(E T + B F_D), S(A T + B F_P), S B V]`, the
//! quasi PD-feedback form and the PD-feedback form.

use std::fmt;

use crate::blocks::ranges;
use crate::error::{Error, Result};
use crate::linalg::{Mat, Rational, Subspace};
use crate::pencil::{full_rank_all_finite, pencil, Orientation};
use crate::pfeedback::{
    check_fits, check_witness_shapes, require_zero, BasisStrategy, FormReport, PTransform,
};
use crate::sylvester::{solve_two_equations, TwoEqInstance};
use crate::system::SystemTriple;
use crate::templates::{
    compare_with_template, make_canonical_blocks, make_pdff_blocks, pdff_layout, pff_layout, total, PdffData, PffData,
};
use crate::wong::wong_limits;

/// Witness `(S, T, V, F_P, F_D)` of a PD-feedback equivalence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PDTransform {
    s: Mat,
    t: Mat,
    v: Mat,
    f_p: Mat,
    f_d: Mat,
}

impl PDTransform {
    pub fn new(s: Mat, t: Mat, v: Mat, f_p: Mat, f_d: Mat) -> Result<Self> {
        check_witness_shapes(&s, &t, &v, &[&f_p, &f_d])?;
        Ok(PDTransform { s, t, v, f_p, f_d })
    }

    pub fn identity(l: usize, n: usize, m: usize) -> Self {
        Self::from(PTransform::identity(l, n, m))
    }

    pub fn s(&self) -> &Mat {
        &self.s
    }

    pub fn t(&self) -> &Mat {
        &self.t
    }

    pub fn v(&self) -> &Mat {
        &self.v
    }

    pub fn f_p(&self) -> &Mat {
        &self.f_p
    }

    pub fn f_d(&self) -> &Mat {
        &self.f_d
    }

    pub fn apply(&self, sys: &SystemTriple) -> Result<SystemTriple> {
        check_fits(sys, &self.s, &self.t, &self.v)?;
        let e = &self.s * &(&(sys.e() * &self.t) + &(sys.b() * &self.f_d));
        let a = &self.s * &(&(sys.a() * &self.t) + &(sys.b() * &self.f_p));
        let b = &(&self.s * sys.b()) * &self.v;
        SystemTriple::new(e, a, b)
    }

    /// The witness of applying `self` and then `next`.
    pub fn followed_by(&self, next: &PDTransform) -> PDTransform {
        PDTransform {
            s: &next.s * &self.s,
            t: &self.t * &next.t,
            v: &self.v * &next.v,
            f_p: &(&self.f_p * &next.t) + &(&self.v * &next.f_p),
            f_d: &(&self.f_d * &next.t) + &(&self.v * &next.f_d),
        }
    }

    pub fn inverse(&self) -> PDTransform {
        let t_inv = self.t.inverse().expect("invertible by construction");
        let v_inv = self.v.inverse().expect("invertible by construction");
        PDTransform {
            s: self.s.inverse().expect("invertible by construction"),
            f_p: -&(&(&v_inv * &self.f_p) * &t_inv),
            f_d: -&(&(&v_inv * &self.f_d) * &t_inv),
            t: t_inv,
            v: v_inv,
        }
    }
}

impl From<PTransform> for PDTransform {
    fn from(w: PTransform) -> Self {
        let f_d = Mat::zeros(w.f_p().rows(), w.f_p().cols());
        PDTransform {
            s: w.s().clone(),
            t: w.t().clone(),
            v: w.v().clone(),
            f_p: w.f_p().clone(),
            f_d,
        }
    }
}

pub fn apply_pd_transform(sys: &SystemTriple, w: &PDTransform) -> Result<SystemTriple> {
    w.apply(sys)
}

/// Block sizes of a quasi PD-feedback form. The equations split as
/// `l[0] + l[1] + l[2] + m[1]`; inputs split as `m[0] = dim ker B` and `m[1] = rk B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QpdffSizes {
    pub l: [usize; 3],
    pub n: [usize; 3],
    pub m: [usize; 2],
}

impl QpdffSizes {
    fn row_ranges(&self) -> [std::ops::Range<usize>; 4] {
        ranges([self.l[0], self.l[1], self.l[2], self.m[1]])
    }
}

impl fmt::Display for QpdffSizes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "l = ({}, {}, {}) + {} input rows, n = ({}, {}, {}), m = ({}, {})",
            self.l[0], self.l[1], self.l[2], self.m[1], self.n[0], self.n[1], self.n[2], self.m[0], self.m[1]
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QpdffDecomposition {
    pub transformed: SystemTriple,
    pub witness: PDTransform,
    pub block_sizes: QpdffSizes,
}

pub fn compute_qpdff(sys: &SystemTriple) -> Result<QpdffDecomposition> {
    compute_qpdff_with(sys, BasisStrategy::Canonical)
}

pub fn compute_qpdff_with(sys: &SystemTriple, strategy: BasisStrategy) -> Result<QpdffDecomposition> {
    let (l, n, m) = sys.dims();
    let r = wong_limits(sys);
    let im_b = Subspace::span(sys.b());
    let vw = r.v_limit.intersect(&r.w_limit)?;
    let evw_b = vw.image_under(sys.e())?.sum(&im_b)?;
    let ev_b = r.v_limit.image_under(sys.e())?.sum(&im_b)?;

    let u_t = strategy.basis(&vw);
    let r_t = strategy.complement(&vw, &r.v_limit, None)?;
    let o_t = strategy.complement(&r.v_limit, &Subspace::full(n), None)?;
    let q_s = strategy.basis(&im_b);
    let u_s = strategy.complement(&im_b, &evw_b, None)?;
    let r_s = strategy.complement(&evw_b, &ev_b, None)?;
    let o_s = strategy.complement(&ev_b, &Subspace::full(l), None)?;

    let t = Mat::hstack(&[&u_t, &r_t, &o_t])?;
    let s = Mat::hstack(&[&u_s, &r_s, &o_s, &q_s])?
        .inverse()
        .ok_or_else(|| Error::Internal("row bases are not complementary".into()))?;
    let rank_b = q_s.cols();
    let bottom = l - rank_b..l;
    let sb = (&s * sys.b()).block(bottom.clone(), 0..m);
    let solve = |x: &Mat| {
        let rhs = -&(&(&s * x) * &t).block(bottom.clone(), 0..n);
        sb.solve_right(&rhs)
            .ok_or_else(|| Error::Internal("feedback equation has no solution".into()))
    };
    let f_d = solve(sys.e())?;
    let f_p = solve(sys.a())?;

    let ker_b = Subspace::kernel(sys.b());
    let v1 = strategy.basis(&ker_b);
    let v2 = strategy.complement(&ker_b, &Subspace::full(m), None)?;
    let v = Mat::hstack(&[&v1, &v2])?;

    let witness = PDTransform::new(s, t, v, f_p, f_d)?;
    let transformed = witness.apply(sys)?;
    let block_sizes = QpdffSizes {
        l: [u_s.cols(), r_s.cols(), o_s.cols()],
        n: [u_t.cols(), r_t.cols(), o_t.cols()],
        m: [v1.cols(), v2.cols()],
    };
    let report = verify_qpdff(&transformed, &block_sizes);
    if !report.passed() {
        return Err(Error::Internal(format!(
            "constructed system fails the QPDFF check: {}",
            report.failures.join("; ")
        )));
    }
    Ok(QpdffDecomposition {
        transformed,
        witness,
        block_sizes,
    })
}

pub fn verify_qpdff(sys: &SystemTriple, sizes: &QpdffSizes) -> FormReport {
    let mut rep = FormReport::default();
    let (l, n, m) = sys.dims();
    let sums = (
        sizes.l.iter().sum::<usize>() + sizes.m[1],
        sizes.n.iter().sum(),
        sizes.m.iter().sum(),
    );
    if sums != (l, n, m) {
        rep.failures.push(format!(
            "block sizes add up to {sums:?} but the system has dimensions {:?}",
            (l, n, m)
        ));
        return rep;
    }
    let rl = sizes.row_ranges();
    let rn = ranges(sizes.n);
    let rm = ranges(sizes.m);
    let e = |i: usize, j: usize| sys.e().block(rl[i].clone(), rn[j].clone());
    let a = |i: usize, j: usize| sys.a().block(rl[i].clone(), rn[j].clone());

    for (i, j) in [(1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)] {
        require_zero(&mut rep, &format!("E{}{}", i + 1, j + 1), &e(i, j));
        require_zero(&mut rep, &format!("A{}{}", i + 1, j + 1), &a(i, j));
    }
    for i in 0..4 {
        for j in 0..2 {
            if (i, j) != (3, 1) {
                let blk = sys.b().block(rl[i].clone(), rm[j].clone());
                require_zero(&mut rep, &format!("B{}{}", i + 1, j + 1), &blk);
            }
        }
    }

    let [l1, l2, _] = sizes.l;
    let [n1, n2, n3] = sizes.n;
    if l1 + n1 > 0 {
        rep.require(l1 < n1, || format!("(i) l1 = {l1} is not below n1 = {n1}"));
        rep.require(e(0, 0).rank() == l1, || "(i) E11 does not have full row rank".into());
        let p = pencil(&e(0, 0), &a(0, 0)).unwrap();
        rep.require(full_rank_all_finite(&p, l1, Orientation::Row), || {
            "(i) λE11 - A11 loses row rank for some λ".into()
        });
    }
    rep.require(l2 == n2, || format!("(ii) E22 is {l2}x{n2}, not square"));
    if l2 == n2 {
        rep.require(e(1, 1).is_invertible(), || "(ii) E22 is singular".into());
    }
    let p = pencil(&e(2, 2), &a(2, 2)).unwrap();
    rep.require(full_rank_all_finite(&p, n3, Orientation::Column), || {
        "(iii) λE33 - A33 loses column rank for some λ".into()
    });
    let b_hat = sys.b().block(rl[3].clone(), rm[1].clone());
    rep.require(b_hat.is_invertible(), || "(iv) the input block is singular".into());
    rep.require(sys.b().rank() == sizes.m[1], || {
        format!("(iv) input block has size {} but rk B = {}", sizes.m[1], sys.b().rank())
    });
    rep
}

/// Removes every off-diagonal block of a QPDFF; the witness has `V = I`
/// and no feedback.
pub fn decouple_qpdff(sys: &SystemTriple, sizes: &QpdffSizes) -> Result<(SystemTriple, PDTransform)> {
    let report = verify_qpdff(sys, sizes);
    if !report.passed() {
        return Err(Error::NotInForm {
            form: "QPDFF",
            reason: report.failures.join("; "),
        });
    }
    let (l, n, m) = sys.dims();
    let rl = sizes.row_ranges();
    let rn = ranges(sizes.n);
    let e = |i: usize, j: usize| sys.e().block(rl[i].clone(), rn[j].clone());
    let a = |i: usize, j: usize| sys.a().block(rl[i].clone(), rn[j].clone());
    let solve = |inst: TwoEqInstance, what: &str| {
        solve_two_equations(&inst)?
            .ok_or_else(|| Error::Unsolvable(format!("decoupling equations for {what}")))
    };

    let (g_t, g_s) = solve(
        TwoEqInstance {
            a: a(0, 0),
            c: e(0, 0),
            d: a(1, 1),
            b: e(1, 1),
            e: a(0, 1),
            f: e(0, 1),
        },
        "the (1,2) blocks",
    )?;
    let (f_t, f_s) = solve(
        TwoEqInstance {
            a: a(1, 1),
            c: e(1, 1),
            d: a(2, 2),
            b: e(2, 2),
            e: a(1, 2),
            f: e(1, 2),
        },
        "the (2,3) blocks",
    )?;
    let (h_t, h_s) = solve(
        TwoEqInstance {
            a: a(0, 0),
            c: e(0, 0),
            d: a(2, 2),
            b: e(2, 2),
            e: &(&a(0, 1) * &f_t) + &a(0, 2),
            f: &(&e(0, 1) * &f_t) + &e(0, 2),
        },
        "the (1,3) blocks",
    )?;

    let mut lower = Mat::identity(l);
    lower.set_block(rl[0].start, rl[1].start, &-&g_s);
    lower.set_block(rl[0].start, rl[2].start, &-&h_s);
    lower.set_block(rl[1].start, rl[2].start, &-&f_s);
    let s = lower.inverse().expect("unitriangular matrices are invertible");
    let mut t = Mat::identity(n);
    t.set_block(rn[0].start, rn[1].start, &g_t);
    t.set_block(rn[0].start, rn[2].start, &h_t);
    t.set_block(rn[1].start, rn[2].start, &f_t);
    let w = PDTransform::new(s, t, Mat::identity(m), Mat::zeros(m, n), Mat::zeros(m, n))?;
    let out = w.apply(sys)?;

    for i in 0..4 {
        for j in 0..3 {
            for (before, after) in [(sys.e(), out.e()), (sys.a(), out.a())] {
                let blk = after.block(rl[i].clone(), rn[j].clone());
                let ok = if i == j {
                    blk == before.block(rl[i].clone(), rn[j].clone())
                } else {
                    blk.is_zero()
                };
                if !ok {
                    return Err(Error::Internal(format!(
                        "decoupled system differs in block ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
    }
    if out.b() != sys.b() {
        return Err(Error::Internal("decoupling changed the input matrix".into()));
    }
    Ok((out, w))
}

/// Subspace identities satisfied by the Wong limits of a decoupled QPDFF.
pub fn decoupled_qpdff_identities(sys: &SystemTriple, sizes: &QpdffSizes) -> FormReport {
    let mut rep = FormReport::default();
    let (l, n, _) = sys.dims();
    let [l1, l2, l3] = sizes.l;
    let [n1, n2, _] = sizes.n;
    let r = wong_limits(sys);
    let vw = r.v_limit.intersect(&r.w_limit).unwrap();
    let im_b = Subspace::span(sys.b());
    let tail = Subspace::coordinate_range(l, l1 + l2 + l3..l);
    let with_tail = |k: usize| Subspace::coordinate_range(l, 0..k).sum(&tail).unwrap();
    let checks = [
        ("V* ∩ W* = Q^n1 x {0}", vw == Subspace::leading_coordinates(n, n1)),
        ("V* = Q^(n1+n2) x {0}", r.v_limit == Subspace::leading_coordinates(n, n1 + n2)),
        ("im B = {0} x Q^m2", im_b == tail),
        (
            "E(V* ∩ W*) + im B = Q^l1 x {0} x Q^m2",
            vw.image_under(sys.e()).unwrap().sum(&im_b).unwrap() == with_tail(l1),
        ),
        (
            "E V* + im B = Q^(l1+l2) x {0} x Q^m2",
            r.v_limit.image_under(sys.e()).unwrap().sum(&im_b).unwrap() == with_tail(l1 + l2),
        ),
    ];
    for (name, ok) in checks {
        rep.require(ok, || format!("identity fails: {name}"));
    }
    rep
}

/// Compares `sys` with the PD-feedback form template for `data`; `r` must equal `rk B`.
pub fn check_pdff(sys: &SystemTriple, data: &PdffData) -> Result<()> {
    let rank = sys.b().rank();
    if data.r != rank {
        return Err(Error::NotInForm {
            form: "PDFF",
            reason: format!("r = {} but rk B = {rank}", data.r),
        });
    }
    let template = make_pdff_blocks(data)?;
    compare_with_template("PDFF", sys, &template, &pdff_layout(data))
}

pub fn verify_pdff(sys: &SystemTriple, data: &PdffData) -> Result<bool> {
    match check_pdff(sys, data) {
        Ok(()) => Ok(true),
        Err(Error::NotInForm { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

fn permutation(order: &[usize]) -> Mat {
    // Column `new` of the result is the unit vector `order[new]`.
    let k = order.len();
    let mut p = Mat::zeros(k, k);
    for (new, &old) in order.iter().enumerate() {
        p.set(old, new, Rational::from_integer(1.into()));
    }
    p
}

/// Rewrites a system in P-feedback form into PD-feedback form.
///
/// Each chain `[I, N^T, e]` is reversed and its last equation turned into a
/// pure input row by derivative feedback; each `[K^T, L^T, e]` chain loses
/// its last equation the same way. The blocks are then regrouped.
pub fn pff_to_pdff(sys: &SystemTriple, data: &PffData) -> Result<(SystemTriple, PDTransform, PdffData)> {
    let template = make_canonical_blocks(data)?;
    compare_with_template("PFF", sys, &template, &pff_layout(data))?;
    let (l, n, m) = sys.dims();
    let nc = data.a_cbar.rows();

    // Start of each row and column group of the PFF layout.
    let row_alpha = 0;
    let row_beta = row_alpha + total(&data.alpha) - data.alpha.len();
    let row_c = row_beta + total(&data.beta);
    let row_gamma = row_c + nc;
    let row_delta = row_gamma + total(&data.gamma);
    let row_kappa = row_delta + total(&data.delta);
    let col_alpha = 0;
    let col_beta = col_alpha + total(&data.alpha);
    let col_c = col_beta + total(&data.beta);
    let col_gamma = col_c + nc;
    let col_delta = col_gamma + total(&data.gamma);
    let col_kappa = col_delta + total(&data.delta) - data.delta.len();
    let n_beta = data.beta.len();
    let in_kappa = m - data.kappa.len();

    let mut f_d = Mat::zeros(m, n);
    let minus_one = -Rational::from_integer(1.into());

    let mut rows_alpha: Vec<usize> = (row_alpha..row_beta).collect();
    let mut cols_alpha: Vec<usize> = (col_alpha..col_beta).collect();
    let mut bottom_rows = Vec::new();
    let (mut r0, mut c0) = (row_beta, col_beta);
    for (i, &b) in data.beta.iter().enumerate() {
        f_d.set(i, c0 + b - 1, minus_one.clone());
        rows_alpha.extend((r0..r0 + b - 1).rev());
        cols_alpha.extend((c0..c0 + b).rev());
        bottom_rows.push(r0 + b - 1);
        r0 += b;
        c0 += b;
    }

    let mut rows_beta: Vec<usize> = (row_gamma..row_delta).collect();
    let mut cols_beta: Vec<usize> = (col_gamma..col_delta).collect();
    let mut new_beta = data.gamma.clone();
    let (mut r0, mut c0) = (row_kappa, col_kappa);
    for (i, &k) in data.kappa.iter().enumerate() {
        if k >= 2 {
            f_d.set(in_kappa + i, c0 + k - 2, minus_one.clone());
            new_beta.push(k - 1);
        }
        rows_beta.extend(r0..r0 + k - 1);
        cols_beta.extend(c0..c0 + k - 1);
        bottom_rows.push(r0 + k - 1);
        r0 += k;
        c0 += k - 1;
    }

    let row_order: Vec<usize> = rows_alpha
        .into_iter()
        .chain(row_c..row_gamma)
        .chain(rows_beta)
        .chain(row_delta..row_kappa)
        .chain(bottom_rows)
        .collect();
    let col_order: Vec<usize> = cols_alpha
        .into_iter()
        .chain(col_c..col_gamma)
        .chain(cols_beta)
        .chain(col_delta..col_kappa)
        .collect();
    let input_order: Vec<usize> = (n_beta..in_kappa).chain(0..n_beta).chain(in_kappa..m).collect();
    debug_assert_eq!((row_order.len(), col_order.len()), (l, n));

    let s = permutation(&row_order).transpose();
    let t = permutation(&col_order);
    let v = permutation(&input_order);
    let f_d = &f_d * &t;
    let w = PDTransform::new(s, t, v, Mat::zeros(m, n), f_d)?;
    let out = w.apply(sys)?;

    let new_data = PdffData {
        alpha: data.alpha.iter().chain(&data.beta).copied().collect(),
        beta: new_beta,
        gamma: data.delta.clone(),
        a_cbar: data.a_cbar.clone(),
        r: data.beta.len() + data.kappa.len(),
        zero_inputs: data.zero_inputs,
    };
    check_pdff(&out, &new_data).map_err(|e| Error::Internal(format!("rewritten system: {e}")))?;
    Ok((out, w, new_data))
}

impl fmt::Display for PdffData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alpha = {:?}, n_cbar = {}, beta = {:?}, gamma = {:?}, r = {}",
            self.alpha,
            self.a_cbar.rows(),
            self.beta,
            self.gamma,
            self.r
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_input_matrix_has_no_input_rows() {
        let sys = SystemTriple::new(
            Mat::from_i64(&[&[1, 0], &[0, 0]]),
            Mat::from_i64(&[&[0, 0], &[0, 1]]),
            Mat::zeros(2, 1),
        )
        .unwrap();
        let q = compute_qpdff(&sys).unwrap();
        assert_eq!(q.block_sizes.m, [1, 0]);
        assert!(q.witness.f_p().is_zero() && q.witness.f_d().is_zero());
    }

    #[test]
    fn pdff_rank_mismatch_is_rejected() {
        let data = PdffData {
            alpha: vec![],
            beta: vec![],
            gamma: vec![],
            a_cbar: Mat::zeros(0, 0),
            r: 1,
            zero_inputs: 0,
        };
        let sys = SystemTriple::new(Mat::zeros(1, 0), Mat::zeros(1, 0), Mat::zeros(1, 1)).unwrap();
        assert!(!verify_pdff(&sys, &data).unwrap());
    }

    #[test]
    fn only_cbar_block_is_unchanged() {
        let a = Mat::from_i64(&[&[1, 2], &[3, 4]]);
        let data = PffData {
            alpha: vec![],
            beta: vec![],
            gamma: vec![],
            delta: vec![],
            kappa: vec![],
            a_cbar: a.clone(),
            zero_inputs: 1,
        };
        let sys = make_canonical_blocks(&data).unwrap();
        let (out, _, new) = pff_to_pdff(&sys, &data).unwrap();
        assert_eq!(out, sys);
        assert_eq!(new.r, 0);
    }
}
