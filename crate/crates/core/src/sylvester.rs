//! Exact solvers for `A X B - C X D = E` and for the coupled pair
//! `0 = E + A Y + Z D`, `0 = F + C Y + Z B`.
//!
//! Both are solved by vectorising the unknowns into one linear system. The
//! reduction of the coupled pair to a single generalized Sylvester equation
//! is provided as a second route, used to cross-check the direct one.

use num_traits::Zero;

use crate::error::{dim_err, Error, Result};
use crate::linalg::{int, Mat, Rational};
use crate::pencil::{pencil, simultaneous_rank_drop};

fn check_sylvester_shapes(a: &Mat, b: &Mat, c: &Mat, d: &Mat, e: &Mat) -> Result<()> {
    if a.shape() != c.shape() || b.shape() != d.shape() {
        return Err(dim_err("A, C and B, D must have equal shapes"));
    }
    if e.shape() != (a.rows(), b.cols()) {
        return Err(dim_err(format!(
            "right-hand side is {:?}, expected {:?}",
            e.shape(),
            (a.rows(), b.cols())
        )));
    }
    Ok(())
}

/// Solves `A X B - C X D = E`. `Ok(None)` means no solution exists.
pub fn solve_gen_sylvester(a: &Mat, b: &Mat, c: &Mat, d: &Mat, e: &Mat) -> Result<Option<Mat>> {
    check_sylvester_shapes(a, b, c, d, e)?;
    let (m, n) = a.shape();
    let (p, q) = b.shape();
    let mut coeff = Mat::zeros(m * q, n * p);
    let mut rhs = Mat::zeros(m * q, 1);
    for i in 0..m {
        for j in 0..q {
            let row = i * q + j;
            rhs.set(row, 0, e.get(i, j).clone());
            for k in 0..n {
                let (aik, cik) = (a.get(i, k), c.get(i, k));
                if aik.is_zero() && cik.is_zero() {
                    continue;
                }
                for l in 0..p {
                    let v = aik * b.get(l, j) - cik * d.get(l, j);
                    if !v.is_zero() {
                        coeff.set(row, k * p + l, v);
                    }
                }
            }
        }
    }
    Ok(coeff
        .solve_right(&rhs)
        .map(|x| Mat::from_fn(n, p, |k, l| x.get(k * p + l, 0).clone())))
}

/// Residual `A X B - C X D - E`.
pub fn sylvester_residual(a: &Mat, b: &Mat, c: &Mat, d: &Mat, e: &Mat, x: &Mat) -> Mat {
    &(&(&(a * x) * b) - &(&(c * x) * d)) - e
}

/// Data of `0 = E + A Y + Z D`, `0 = F + C Y + Z B` with `A, C: m x n`,
/// `B, D: p x q`, `E, F: m x q`; unknowns `Y: n x q`, `Z: m x p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoEqInstance {
    pub a: Mat,
    pub b: Mat,
    pub c: Mat,
    pub d: Mat,
    pub e: Mat,
    pub f: Mat,
}

impl TwoEqInstance {
    pub fn validate(&self) -> Result<()> {
        check_sylvester_shapes(&self.a, &self.b, &self.c, &self.d, &self.e)?;
        if self.f.shape() != self.e.shape() {
            return Err(dim_err("E and F must have equal shapes"));
        }
        Ok(())
    }

    /// Residuals of both equations.
    pub fn residuals(&self, y: &Mat, z: &Mat) -> (Mat, Mat) {
        (
            &(&self.e + &(&self.a * y)) + &(z * &self.d),
            &(&self.f + &(&self.c * y)) + &(z * &self.b),
        )
    }

    pub fn is_solution(&self, y: &Mat, z: &Mat) -> bool {
        let (r1, r2) = self.residuals(y, z);
        r1.is_zero() && r2.is_zero()
    }
}

/// Solves the coupled pair directly. `Ok(None)` means no solution exists.
pub fn solve_two_equations(inst: &TwoEqInstance) -> Result<Option<(Mat, Mat)>> {
    inst.validate()?;
    let (m, n) = inst.a.shape();
    let (p, q) = inst.b.shape();
    let ny = n * q;
    let nz = m * p;
    let mut coeff = Mat::zeros(2 * m * q, ny + nz);
    let mut rhs = Mat::zeros(2 * m * q, 1);
    for (eq, (lhs, right, rhs_m)) in [(&inst.a, &inst.d, &inst.e), (&inst.c, &inst.b, &inst.f)]
        .into_iter()
        .enumerate()
    {
        for i in 0..m {
            for j in 0..q {
                let row = eq * m * q + i * q + j;
                rhs.set(row, 0, -rhs_m.get(i, j));
                for k in 0..n {
                    let v = lhs.get(i, k);
                    if !v.is_zero() {
                        coeff.set(row, k * q + j, v.clone());
                    }
                }
                for l in 0..p {
                    let v = right.get(l, j);
                    if !v.is_zero() {
                        coeff.set(row, ny + i * p + l, v.clone());
                    }
                }
            }
        }
    }
    Ok(coeff.solve_right(&rhs).map(|x| {
        let y = Mat::from_fn(n, q, |k, j| x.get(k * q + j, 0).clone());
        let z = Mat::from_fn(m, p, |i, l| x.get(ny + i * p + l, 0).clone());
        (y, z)
    }))
}

#[derive(Clone, Debug)]
enum Route {
    /// `M = λB - D` has a left inverse.
    Column { m: Mat, m_pinv: Mat },
    /// `N = λC - A` has a right inverse.
    Row { n: Mat, n_pinv: Mat },
}

/// A generalized Sylvester equation `A X B - C X D = rhs` whose solutions
/// yield solutions of a coupled pair.
#[derive(Clone, Debug)]
pub struct Reduction {
    inst: TwoEqInstance,
    lambda: Rational,
    route: Route,
    rhs: Mat,
}

impl Reduction {
    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn rhs(&self) -> &Mat {
        &self.rhs
    }

    pub fn solve(&self) -> Option<Mat> {
        let i = &self.inst;
        solve_gen_sylvester(&i.a, &i.b, &i.c, &i.d, &self.rhs).expect("shapes validated")
    }

    /// Maps a solution `X` of the reduced equation to `(Y, Z)`.
    pub fn back_substitute(&self, x: &Mat) -> (Mat, Mat) {
        let i = &self.inst;
        let e_lf = &i.e - &i.f.scale(&self.lambda);
        match &self.route {
            Route::Column { m, m_pinv } => {
                let n = &i.c.scale(&self.lambda) - &i.a;
                let y = x * m;
                let z = &(&e_lf * m_pinv) - &(&n * x);
                (y, z)
            }
            Route::Row { n, n_pinv } => {
                let m = &i.b.scale(&self.lambda) - &i.d;
                let y = &(n_pinv * &e_lf) + &(x * &m);
                let z = -&(n * x);
                (y, z)
            }
        }
    }
}

/// Reduction using a left inverse of `M = λB - D`:
/// `A X B - C X D = -F + (λF - E) M^† B`, with `Y = X M`,
/// `Z = (E - λF) M^† - (λC - A) X`.
pub fn reduce_to_sylvester(inst: &TwoEqInstance, lambda: &Rational) -> Result<Reduction> {
    inst.validate()?;
    let m = &inst.b.scale(lambda) - &inst.d;
    let m_pinv = m
        .has_full_column_rank()
        .then(|| m.left_inverse())
        .flatten()
        .ok_or(Error::Singular("λB - D (no left inverse)"))?;
    let lf_e = &inst.f.scale(lambda) - &inst.e;
    let rhs = &(&(&lf_e * &m_pinv) * &inst.b) - &inst.f;
    Ok(Reduction {
        inst: inst.clone(),
        lambda: lambda.clone(),
        route: Route::Column { m, m_pinv },
        rhs,
    })
}

/// Transposed reduction using a right inverse of `N = λC - A`:
/// `A X B - C X D = -F + C N^† (λF - E)`, with `Y = N^† (E - λF) + X M`,
/// `Z = -N X`.
pub fn reduce_to_sylvester_transposed(inst: &TwoEqInstance, lambda: &Rational) -> Result<Reduction> {
    inst.validate()?;
    let n = &inst.c.scale(lambda) - &inst.a;
    let n_pinv = n
        .has_full_row_rank()
        .then(|| n.right_inverse())
        .flatten()
        .ok_or(Error::Singular("λC - A (no right inverse)"))?;
    let lf_e = &inst.f.scale(lambda) - &inst.e;
    let rhs = &(&(&inst.c * &n_pinv) * &lf_e) - &inst.f;
    Ok(Reduction {
        inst: inst.clone(),
        lambda: lambda.clone(),
        route: Route::Row { n, n_pinv },
        rhs,
    })
}

/// `0, 1, -1, 2, -2, ...`
pub fn lambda_candidates(count: usize) -> impl Iterator<Item = Rational> {
    (0..count as i64).map(|k| if k % 2 == 1 { int((k + 1) / 2) } else { int(-k / 2) })
}

/// First `λ` in `0, ±1, ±2, ...` for which the column route applies.
/// A pencil of full column normal rank loses rank at no more than `q` points.
pub fn find_reduction(inst: &TwoEqInstance) -> Result<Option<Reduction>> {
    inst.validate()?;
    let tries = 2 * inst.b.cols() + 3;
    Ok(lambda_candidates(tries).find_map(|l| reduce_to_sylvester(inst, &l).ok()))
}

/// Same search for the transposed route.
pub fn find_transposed_reduction(inst: &TwoEqInstance) -> Result<Option<Reduction>> {
    inst.validate()?;
    let tries = 2 * inst.a.rows() + 3;
    Ok(lambda_candidates(tries).find_map(|l| reduce_to_sylvester_transposed(inst, &l).ok()))
}

/// Sufficient conditions for solvability of `A X B - C X D = E`: `sC - A`
/// has full row normal rank, `sB - D` full column normal rank, and there is
/// no common rank drop in `C ∪ {∞}`.
pub fn solvability_hypotheses(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> bool {
    let (Ok(p), Ok(q)) = (pencil(c, a), pencil(b, d)) else {
        return false;
    };
    p.normal_rank() == p.rows() && q.normal_rank() == q.cols() && !simultaneous_rank_drop(&p, &q)
}
