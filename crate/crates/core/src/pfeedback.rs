//! P-feedback equivalence `[S E T, S(A T + B F_P), S B V]` and the quasi
//! P-feedback form built from the augmented Wong limits.

use std::fmt;

use crate::blocks::{ranges, unitriangular};
use crate::error::{dim_err, Error, Result};
use crate::linalg::{complement, complement_from, Mat, Subspace};
use crate::pencil::{full_rank_all_finite, pencil, Orientation};
use crate::sylvester::{solve_two_equations, TwoEqInstance};
use crate::system::SystemTriple;
use crate::templates::{compare_with_template, make_canonical_blocks, pff_layout, PffData};
use crate::wong::wong_limits;

/// Witness `(S, T, V, F_P)` of a P-feedback equivalence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PTransform {
    s: Mat,
    t: Mat,
    v: Mat,
    f_p: Mat,
}

pub(crate) fn check_witness_shapes(s: &Mat, t: &Mat, v: &Mat, fs: &[&Mat]) -> Result<()> {
    for (name, m) in [("S", s), ("T", t), ("V", v)] {
        if !m.is_invertible() {
            return Err(Error::Singular(name));
        }
    }
    for f in fs {
        if f.shape() != (v.rows(), t.rows()) {
            return Err(dim_err(format!(
                "feedback is {}x{}, expected {}x{}",
                f.rows(),
                f.cols(),
                v.rows(),
                t.rows()
            )));
        }
    }
    Ok(())
}

pub(crate) fn check_fits(sys: &SystemTriple, s: &Mat, t: &Mat, v: &Mat) -> Result<()> {
    let (l, n, m) = sys.dims();
    if (s.rows(), t.rows(), v.rows()) != (l, n, m) {
        return Err(dim_err(format!(
            "witness acts on dimensions ({}, {}, {}) but the system has ({l}, {n}, {m})",
            s.rows(),
            t.rows(),
            v.rows()
        )));
    }
    Ok(())
}

impl PTransform {
    pub fn new(s: Mat, t: Mat, v: Mat, f_p: Mat) -> Result<Self> {
        check_witness_shapes(&s, &t, &v, &[&f_p])?;
        Ok(PTransform { s, t, v, f_p })
    }

    pub fn identity(l: usize, n: usize, m: usize) -> Self {
        PTransform {
            s: Mat::identity(l),
            t: Mat::identity(n),
            v: Mat::identity(m),
            f_p: Mat::zeros(m, n),
        }
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

    pub fn apply(&self, sys: &SystemTriple) -> Result<SystemTriple> {
        check_fits(sys, &self.s, &self.t, &self.v)?;
        let e = &(&self.s * sys.e()) * &self.t;
        let a = &self.s * &(&(sys.a() * &self.t) + &(sys.b() * &self.f_p));
        let b = &(&self.s * sys.b()) * &self.v;
        SystemTriple::new(e, a, b)
    }

    /// The witness of applying `self` and then `next`.
    pub fn followed_by(&self, next: &PTransform) -> PTransform {
        PTransform {
            s: &next.s * &self.s,
            t: &self.t * &next.t,
            v: &self.v * &next.v,
            f_p: &(&self.f_p * &next.t) + &(&self.v * &next.f_p),
        }
    }

    pub fn inverse(&self) -> PTransform {
        let t_inv = self.t.inverse().expect("invertible by construction");
        let v_inv = self.v.inverse().expect("invertible by construction");
        PTransform {
            s: self.s.inverse().expect("invertible by construction"),
            f_p: -&(&(&v_inv * &self.f_p) * &t_inv),
            t: t_inv,
            v: v_inv,
        }
    }
}

pub fn apply_p_transform(sys: &SystemTriple, w: &PTransform) -> Result<SystemTriple> {
    w.apply(sys)
}

/// How bases and complements are picked. Both choices satisfy the same span
/// conditions; `Alternate` exists to test that block sizes do not depend on it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BasisStrategy {
    #[default]
    Canonical,
    /// Mixes every basis with an upper unitriangular matrix and fills
    /// complements from the canonical basis in reverse order.
    Alternate,
}

impl BasisStrategy {
    pub(crate) fn basis(self, s: &Subspace) -> Mat {
        match self {
            BasisStrategy::Canonical => s.basis().clone(),
            BasisStrategy::Alternate => s.basis() * &unitriangular(s.dim()),
        }
    }

    pub(crate) fn complement(
        self,
        inner: &Subspace,
        outer: &Subspace,
        preferred: Option<&Mat>,
    ) -> Result<Mat> {
        match self {
            BasisStrategy::Canonical => complement(inner, outer, preferred),
            BasisStrategy::Alternate => {
                let mut cand = Vec::new();
                if let Some(p) = preferred {
                    cand.extend((0..p.cols()).rev().map(|j| p.column(j)));
                }
                let ob = self.basis(outer);
                cand.extend((0..ob.cols()).rev().map(|j| ob.column(j)));
                let c = complement_from(inner, outer, cand)?;
                Ok(&c * &unitriangular(c.cols()))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisSelection {
    pub u_t: Mat,
    pub r_t: Mat,
    pub o_t: Mat,
    pub u_s: Mat,
    pub r_s: Mat,
    pub o_s: Mat,
}

/// Block sizes of a quasi P-feedback form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QpffSizes {
    pub l: [usize; 3],
    pub n: [usize; 3],
    pub m: [usize; 3],
}

impl fmt::Display for QpffSizes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [l, n, m] = [self.l, self.n, self.m];
        write!(
            f,
            "Σ_{{{},{},{}}} / Σ_{{{},{},{}}} / Σ_{{{},{},{}}}",
            l[0], n[0], m[0], l[1], n[1], m[1], l[2], n[2], m[2]
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QpffDecomposition {
    pub transformed: SystemTriple,
    pub witness: PTransform,
    pub block_sizes: QpffSizes,
}

pub fn select_bases(sys: &SystemTriple) -> BasisSelection {
    select_bases_with(sys, BasisStrategy::Canonical)
}

pub fn select_bases_with(sys: &SystemTriple, strategy: BasisStrategy) -> BasisSelection {
    let (l, n, _) = sys.dims();
    let r = wong_limits(sys);
    let im_b = Subspace::span(sys.b());
    let vw = r.v_limit.intersect(&r.w_limit).unwrap();
    let ev = r.v_limit.image_under(sys.e()).unwrap();
    let aw_b = r.w_limit.image_under(sys.a()).unwrap().sum(&im_b).unwrap();
    let us_space = ev.intersect(&aw_b).unwrap();

    let u_t = strategy.basis(&vw);
    let r_t = strategy.complement(&vw, &r.v_limit, None).unwrap();
    let o_t = strategy.complement(&r.v_limit, &Subspace::full(n), None).unwrap();
    let u_s = strategy.basis(&us_space);
    let r_s = strategy.complement(&us_space, &ev, None).unwrap();
    let o_s = strategy
        .complement(&ev, &Subspace::full(l), Some(sys.b()))
        .unwrap();
    BasisSelection {
        u_t,
        r_t,
        o_t,
        u_s,
        r_s,
        o_s,
    }
}

/// Particular solution `F` of `rows(S B) F = -rows(S A X)`.
fn feedback_rows(sb: &Mat, sax: &Mat, from_row: usize) -> Result<Mat> {
    let l = sb.rows();
    let lhs = sb.block(from_row..l, 0..sb.cols());
    let rhs = -&sax.block(from_row..l, 0..sax.cols());
    lhs.solve_right(&rhs)
        .ok_or_else(|| Error::Internal("feedback equation has no solution".into()))
}

pub fn compute_qpff(sys: &SystemTriple) -> Result<QpffDecomposition> {
    compute_qpff_with(sys, BasisStrategy::Canonical)
}

pub fn compute_qpff_with(sys: &SystemTriple, strategy: BasisStrategy) -> Result<QpffDecomposition> {
    let (_, _, m) = sys.dims();
    let bs = select_bases_with(sys, strategy);
    let l_sizes = [bs.u_s.cols(), bs.r_s.cols(), bs.o_s.cols()];
    let n_sizes = [bs.u_t.cols(), bs.r_t.cols(), bs.o_t.cols()];
    let t = Mat::hstack(&[&bs.u_t, &bs.r_t, &bs.o_t])?;
    let s = Mat::hstack(&[&bs.u_s, &bs.r_s, &bs.o_s])?
        .inverse()
        .ok_or_else(|| Error::Internal("row bases are not complementary".into()))?;
    let sb = &s * sys.b();
    let f1 = feedback_rows(&sb, &(&s * &(sys.a() * &bs.u_t)), l_sizes[0])?;
    let f2 = feedback_rows(&sb, &(&s * &(sys.a() * &bs.r_t)), l_sizes[0] + l_sizes[1])?;
    let f_p = Mat::hstack(&[&f1, &f2, &Mat::zeros(m, n_sizes[2])])?;

    let ker_b = Subspace::kernel(sys.b());
    let bottom = sb.block(l_sizes[0] + l_sizes[1]..sb.rows(), 0..m);
    let k = Subspace::kernel(&bottom);
    let v2 = strategy.basis(&ker_b);
    let v1 = strategy.complement(&ker_b, &k, None)?;
    let v3 = strategy.complement(&k, &Subspace::full(m), None)?;
    let m_sizes = [v1.cols(), v2.cols(), v3.cols()];
    let v = Mat::hstack(&[&v1, &v2, &v3])?;

    let witness = PTransform::new(s, t, v, f_p)?;
    let transformed = witness.apply(sys)?;
    let block_sizes = QpffSizes {
        l: l_sizes,
        n: n_sizes,
        m: m_sizes,
    };
    let report = verify_qpff(&transformed, &block_sizes);
    if !report.passed() {
        return Err(Error::Internal(format!(
            "constructed system fails the QPFF check: {}",
            report.failures.join("; ")
        )));
    }
    Ok(QpffDecomposition {
        transformed,
        witness,
        block_sizes,
    })
}

/// Outcome of a structural check; empty `failures` means the check passed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormReport {
    pub failures: Vec<String>,
}

impl FormReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub(crate) fn require(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(msg());
        }
    }
}

pub(crate) fn require_zero(report: &mut FormReport, name: &str, m: &Mat) {
    report.require(m.is_zero(), || format!("block {name} is not zero"));
}

pub fn verify_qpff(sys: &SystemTriple, sizes: &QpffSizes) -> FormReport {
    let mut rep = FormReport::default();
    let (l, n, m) = sys.dims();
    let sums = (sizes.l.iter().sum(), sizes.n.iter().sum(), sizes.m.iter().sum());
    if sums != (l, n, m) {
        rep.failures.push(format!(
            "block sizes add up to {sums:?} but the system has dimensions {:?}",
            (l, n, m)
        ));
        return rep;
    }
    let rl = ranges(sizes.l);
    let rn = ranges(sizes.n);
    let rm = ranges(sizes.m);
    let blk = |mat: &Mat, i: usize, j: usize, cols: &[std::ops::Range<usize>; 3]| {
        mat.block(rl[i].clone(), cols[j].clone())
    };

    for (i, j) in [(1, 0), (2, 0), (2, 1)] {
        require_zero(&mut rep, &format!("E{}{}", i + 1, j + 1), &blk(sys.e(), i, j, &rn));
        require_zero(&mut rep, &format!("A{}{}", i + 1, j + 1), &blk(sys.a(), i, j, &rn));
    }
    for (i, j) in [(0, 1), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1)] {
        require_zero(&mut rep, &format!("B{}{}", i + 1, j + 1), &blk(sys.b(), i, j, &rm));
    }

    let (e11, a11, b11) = (blk(sys.e(), 0, 0, &rn), blk(sys.a(), 0, 0, &rn), blk(sys.b(), 0, 0, &rm));
    let [l1, l2, l3] = sizes.l;
    let [n1, n2, n3] = sizes.n;
    let [m1, _, m3] = sizes.m;
    if l1 + n1 + m1 > 0 {
        rep.require(l1 < n1 + m1, || format!("(i) l1 = {l1} is not below n1 + m1 = {}", n1 + m1));
        rep.require(e11.rank() == l1, || "(i) E11 does not have full row rank".into());
        rep.require(b11.rank() == m1, || "(i) B11 does not have full column rank".into());
        let p = pencil(
            &Mat::hstack(&[&e11, &Mat::zeros(l1, m1)]).unwrap(),
            &Mat::hstack(&[&a11, &-&b11]).unwrap(),
        )
        .unwrap();
        rep.require(full_rank_all_finite(&p, l1, Orientation::Row), || {
            "(i) [λE11 - A11, B11] loses row rank for some λ".into()
        });
    }
    rep.require(l2 == n2, || format!("(ii) E22 is {l2}x{n2}, not square"));
    if l2 == n2 {
        rep.require(blk(sys.e(), 1, 1, &rn).is_invertible(), || "(ii) E22 is singular".into());
    }
    let (e33, a33, b33) = (blk(sys.e(), 2, 2, &rn), blk(sys.a(), 2, 2, &rn), blk(sys.b(), 2, 2, &rm));
    let p = pencil(
        &Mat::hstack(&[&e33, &Mat::zeros(l3, m3)]).unwrap(),
        &Mat::hstack(&[&a33, &-&b33]).unwrap(),
    )
    .unwrap();
    rep.require(full_rank_all_finite(&p, n3 + m3, Orientation::Column), || {
        "(iii) [λE33 - A33, B33] loses column rank for some λ".into()
    });
    rep
}

/// Removes every off-diagonal block of a QPFF by a P-feedback with `V = I`.
pub fn decouple_qpff(sys: &SystemTriple, sizes: &QpffSizes) -> Result<(SystemTriple, PTransform)> {
    let report = verify_qpff(sys, sizes);
    if !report.passed() {
        return Err(Error::NotInForm {
            form: "QPFF",
            reason: report.failures.join("; "),
        });
    }
    let (l, n, m) = sys.dims();
    let rl = ranges(sizes.l);
    let rn = ranges(sizes.n);
    let rm = ranges(sizes.m);
    let e = |i: usize, j: usize| sys.e().block(rl[i].clone(), rn[j].clone());
    let a = |i: usize, j: usize| sys.a().block(rl[i].clone(), rn[j].clone());
    let b = |i: usize, j: usize| sys.b().block(rl[i].clone(), rm[j].clone());
    let [l1, _, l3] = sizes.l;
    let [n1, _, n3] = sizes.n;
    let [m1, _, m3] = sizes.m;
    let unsolvable = |what: &str| Error::Unsolvable(format!("decoupling equations for {what}"));

    let a1b = Mat::hstack(&[&a(0, 0), &-&b(0, 0)])?;
    let e10 = Mat::hstack(&[&e(0, 0), &Mat::zeros(l1, m1)])?;

    let g = TwoEqInstance {
        a: a1b.clone(),
        c: e10.clone(),
        d: a(1, 1),
        b: e(1, 1),
        e: a(0, 1),
        f: e(0, 1),
    };
    let (g_t, g_s) = solve_two_equations(&g)?.ok_or_else(|| unsolvable("the (1,2) blocks"))?;
    let g_tx = g_t.block(0..n1, 0..g_t.cols());
    let g_tu = g_t.block(n1..n1 + m1, 0..g_t.cols());

    let ab3 = Mat::hstack(&[&a(2, 2), &-&b(2, 2)])?;
    let eb3 = Mat::hstack(&[&e(2, 2), &Mat::zeros(l3, m3)])?;
    let pad = |x: Mat| Mat::hstack(&[&x, &Mat::zeros(x.rows(), m3)]).unwrap();
    let f = TwoEqInstance {
        a: a(1, 1),
        c: e(1, 1),
        d: ab3,
        b: eb3,
        e: pad(a(1, 2)),
        f: pad(e(1, 2)),
    };
    let (f_t, f_s) = solve_two_equations(&f)?.ok_or_else(|| unsolvable("the (2,3) blocks"))?;
    let f_tx = f_t.block(0..f_t.rows(), 0..n3);
    if !f_t.block(0..f_t.rows(), n3..n3 + m3).is_zero() {
        return Err(Error::Internal("input part of the (2,3) solution is nonzero".into()));
    }

    // Split Q^{l3} = im C ⊕ im B33 with im A33 ⊆ im C, so that
    // [A33, -B33] = R33 diag(A33x, I) for R33 = [C, -B33].
    let b33 = b(2, 2);
    let c = complement(&Subspace::span(&b33), &Subspace::full(l3), Some(&a(2, 2)))?;
    let r33 = Mat::hstack(&[&c, &-&b33])?;
    let r33_inv = r33
        .inverse()
        .ok_or_else(|| Error::Internal("column split of block 3 is singular".into()))?;
    let a33x = c
        .solve_right(&a(2, 2))
        .ok_or_else(|| Error::Internal("A33 is not inside the chosen complement".into()))?;
    let e33_split = &r33_inv * &e(2, 2);
    let lx = l3 - m3;
    let e33x = e33_split.block(0..lx, 0..n3);
    let e33u = e33_split.block(lx..l3, 0..n3);
    let h_su = b(0, 2);
    let h = TwoEqInstance {
        a: a1b,
        c: e10,
        d: a33x,
        b: e33x,
        e: &(&a(0, 1) * &f_tx) + &a(0, 2),
        f: &(&(&e(0, 1) * &f_tx) + &e(0, 2)) + &(&h_su * &e33u),
    };
    let (h_t, h_sx) = solve_two_equations(&h)?.ok_or_else(|| unsolvable("the (1,3) blocks"))?;
    let h_tx = h_t.block(0..n1, 0..n3);
    let h_tu = h_t.block(n1..n1 + m1, 0..n3);
    let h_s = &Mat::hstack(&[&h_sx, &h_su])? * &r33_inv;

    let mut lower = Mat::identity(l);
    lower.set_block(rl[0].start, rl[1].start, &-&g_s);
    lower.set_block(rl[0].start, rl[2].start, &-&h_s);
    lower.set_block(rl[1].start, rl[2].start, &-&f_s);
    let s = lower
        .inverse()
        .expect("unitriangular matrices are invertible");
    let mut t = Mat::identity(n);
    t.set_block(rn[0].start, rn[1].start, &g_tx);
    t.set_block(rn[0].start, rn[2].start, &h_tx);
    t.set_block(rn[1].start, rn[2].start, &f_tx);
    let mut f_p = Mat::zeros(m, n);
    f_p.set_block(0, rn[1].start, &-&g_tu);
    f_p.set_block(0, rn[2].start, &-&h_tu);

    let w = PTransform::new(s, t, Mat::identity(m), f_p)?;
    let out = w.apply(sys)?;
    check_decoupled_qpff(sys, &out, sizes)?;
    Ok((out, w))
}

fn check_decoupled_qpff(input: &SystemTriple, out: &SystemTriple, sizes: &QpffSizes) -> Result<()> {
    let rl = ranges(sizes.l);
    let rn = ranges(sizes.n);
    let rm = ranges(sizes.m);
    for i in 0..3 {
        for j in 0..3 {
            let pairs = [
                (input.e(), out.e(), &rn),
                (input.a(), out.a(), &rn),
                (input.b(), out.b(), &rm),
            ];
            for (before, after, cols) in pairs {
                let blk = after.block(rl[i].clone(), cols[j].clone());
                let ok = if i == j {
                    blk == before.block(rl[i].clone(), cols[j].clone())
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
    Ok(())
}

/// Compares `sys` with the P-feedback form template for `data`.
/// `Err(NotInForm)` carries the first differing entry; dimension
/// mismatches are reported as `Err(Dimension)`.
pub fn check_pff(sys: &SystemTriple, data: &PffData) -> Result<()> {
    let template = make_canonical_blocks(data)?;
    compare_with_template("PFF", sys, &template, &pff_layout(data))
}

pub fn verify_pff(sys: &SystemTriple, data: &PffData) -> Result<bool> {
    match check_pff(sys, data) {
        Ok(()) => Ok(true),
        Err(Error::NotInForm { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Control-theoretic reading of the QPFF block structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub sizes: QpffSizes,
    /// `dim ker B`, the redundant inputs.
    pub redundant_inputs: usize,
    /// `dim(im B ∩ ({0} x Q^{l3}))` in the computed form.
    pub constrained_inputs: usize,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.sizes;
        writeln!(
            f,
            "completely controllable part: l1 = {}, n1 = {}, m1 = {} (input neither constrained nor redundant)",
            s.l[0], s.n[0], s.m[0]
        )?;
        writeln!(f, "uncontrollable ODE part: n2 = {}", s.n[1])?;
        writeln!(
            f,
            "trivial-solution part: l3 = {}, n3 = {}, m3 = {} (input maximally constrained)",
            s.l[2], s.n[2], s.m[2]
        )?;
        write!(
            f,
            "redundant inputs (dim ker B) = {}, constrained inputs = {}",
            self.redundant_inputs, self.constrained_inputs
        )
    }
}

pub fn classify_controllability(sys: &SystemTriple) -> Result<Classification> {
    let q = compute_qpff(sys)?;
    let (l, _, _) = sys.dims();
    let tail = Subspace::coordinate_range(l, l - q.block_sizes.l[2]..l);
    let constrained = Subspace::span(q.transformed.b()).intersect(&tail)?.dim();
    Ok(Classification {
        sizes: q.block_sizes,
        redundant_inputs: Subspace::kernel(sys.b()).dim(),
        constrained_inputs: constrained,
    })
}
