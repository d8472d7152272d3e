//! Random small systems and the structural properties every system must satisfy.

use daeforms_core::linalg::{int, Mat, Subspace};
use daeforms_core::pdfeedback::{
    compute_qpdff, compute_qpdff_with, decouple_qpdff, decoupled_qpdff_identities, PDTransform,
};
use daeforms_core::pfeedback::{compute_qpff, compute_qpff_with, decouple_qpff, BasisStrategy, PTransform};
use daeforms_core::sylvester::{solvability_hypotheses, solve_gen_sylvester, sylvester_residual};
use daeforms_core::wong::{
    augmented_projection_check, check_limit_identities, v_sequence, w_sequence, wong_limits,
};
use daeforms_core::SystemTriple;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x5eed_da3f;
pub const SYSTEMS: usize = 200;

pub fn seed() -> u64 {
    std::env::var("DAEFORMS_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed() ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Entries in `-2..=2`; `zero_bias` is the chance of forcing an entry to zero.
pub fn random_mat(rng: &mut ChaCha8Rng, rows: usize, cols: usize, zero_bias: f64) -> Mat {
    Mat::from_fn(rows, cols, |_, _| {
        if rng.gen_bool(zero_bias) {
            int(0)
        } else {
            int(rng.gen_range(-2..=2))
        }
    })
}

pub fn random_invertible(rng: &mut ChaCha8Rng, k: usize) -> Mat {
    loop {
        let m = random_mat(rng, k, k, 0.3);
        if m.is_invertible() {
            return m;
        }
    }
}

/// Sparse systems so that singular `E`, rank deficient `B` and nontrivial
/// Wong chains all show up regularly.
pub fn random_system(rng: &mut ChaCha8Rng) -> SystemTriple {
    let l = rng.gen_range(1..=5);
    let n = rng.gen_range(1..=5);
    let m = rng.gen_range(0..=3);
    let bias = [0.2, 0.5, 0.75][rng.gen_range(0..3)];
    let mut e = random_mat(rng, l, n, bias);
    if rng.gen_bool(0.3) && l > 1 {
        // Force a rank drop in E.
        let r = e.row(0).to_vec();
        for (j, x) in r.into_iter().enumerate() {
            e.set(l - 1, j, x);
        }
    }
    SystemTriple::new(e, random_mat(rng, l, n, bias), random_mat(rng, l, m, bias)).unwrap()
}

pub fn systems() -> Vec<SystemTriple> {
    let mut r = rng(1);
    (0..SYSTEMS).map(|_| random_system(&mut r)).collect()
}

pub type Check = fn(&SystemTriple, &mut ChaCha8Rng) -> Result<(), String>;

pub fn chains_nest_and_terminate(sys: &SystemTriple, _: &mut ChaCha8Rng) -> Result<(), String> {
    let (_, n, _) = sys.dims();
    let v = v_sequence(sys);
    let w = w_sequence(sys);
    for pair in v.windows(2) {
        if !(pair[0].contains(&pair[1]) && pair[0] != pair[1]) {
            return Err("V chain is not strictly decreasing".into());
        }
    }
    for pair in w.windows(2) {
        if !(pair[1].contains(&pair[0]) && pair[0] != pair[1]) {
            return Err("W chain is not strictly increasing".into());
        }
    }
    let r = wong_limits(sys);
    if r.i_star > n || r.j_star > n {
        return Err(format!("i* = {}, j* = {} exceed n = {n}", r.i_star, r.j_star));
    }
    // Fixpoint equalities.
    let b = Subspace::span(sys.b());
    let v_next = Subspace::preimage(sys.a(), &r.v_limit.image_under(sys.e()).unwrap().sum(&b).unwrap()).unwrap();
    let w_next = Subspace::preimage(sys.e(), &r.w_limit.image_under(sys.a()).unwrap().sum(&b).unwrap()).unwrap();
    if v_next != r.v_limit || w_next != r.w_limit {
        return Err("limits are not fixpoints".into());
    }
    Ok(())
}

pub fn limit_identities(sys: &SystemTriple, _: &mut ChaCha8Rng) -> Result<(), String> {
    let rep = check_limit_identities(sys);
    if rep.checks.len() != 5 {
        return Err(format!("expected 5 identities, got {}", rep.checks.len()));
    }
    match rep.checks.iter().find(|c| !c.holds) {
        Some(c) => Err(format!("fails: {}", c.name)),
        None => Ok(()),
    }
}

pub fn projection_identity(sys: &SystemTriple, _: &mut ChaCha8Rng) -> Result<(), String> {
    if augmented_projection_check(sys) {
        Ok(())
    } else {
        Err("projected limits of the augmented pencil differ".into())
    }
}

fn chains_transform(before: &SystemTriple, after: &SystemTriple, t: &Mat) -> Result<(), String> {
    let t_inv = t.inverse().unwrap();
    for (name, old, new) in [
        ("V", v_sequence(before), v_sequence(after)),
        ("W", w_sequence(before), w_sequence(after)),
    ] {
        if old.len() != new.len() {
            return Err(format!("{name} chain length changed"));
        }
        for (i, (o, n)) in old.iter().zip(&new).enumerate() {
            if &o.image_under(&t_inv).unwrap() != n {
                return Err(format!("{name}^{i} is not mapped by T^-1"));
            }
        }
    }
    Ok(())
}

pub fn feedback_invariance(sys: &SystemTriple, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (l, n, m) = sys.dims();
    let s = random_invertible(rng, l);
    let t = random_invertible(rng, n);
    let v = random_invertible(rng, m);
    let f_p = random_mat(rng, m, n, 0.3);
    let f_d = random_mat(rng, m, n, 0.3);
    let p = PTransform::new(s.clone(), t.clone(), v.clone(), f_p.clone()).unwrap();
    chains_transform(sys, &p.apply(sys).unwrap(), &t).map_err(|e| format!("P: {e}"))?;
    let pd = PDTransform::new(s, t.clone(), v, f_p, f_d).unwrap();
    chains_transform(sys, &pd.apply(sys).unwrap(), &t).map_err(|e| format!("PD: {e}"))
}

pub fn block_sizes_invariant(sys: &SystemTriple, _: &mut ChaCha8Rng) -> Result<(), String> {
    let err = |e: daeforms_core::Error| e.to_string();
    let a = compute_qpff_with(sys, BasisStrategy::Canonical).map_err(err)?;
    let b = compute_qpff_with(sys, BasisStrategy::Alternate).map_err(err)?;
    if a.block_sizes != b.block_sizes {
        return Err(format!("QPFF sizes {} vs {}", a.block_sizes, b.block_sizes));
    }
    let c = compute_qpdff_with(sys, BasisStrategy::Canonical).map_err(err)?;
    let d = compute_qpdff_with(sys, BasisStrategy::Alternate).map_err(err)?;
    if c.block_sizes != d.block_sizes {
        return Err(format!("QPDFF sizes {} vs {}", c.block_sizes, d.block_sizes));
    }
    Ok(())
}

/// Equivalent systems share the quasi form block sizes.
pub fn sizes_survive_equivalence(sys: &SystemTriple, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let err = |e: daeforms_core::Error| e.to_string();
    let (l, n, m) = sys.dims();
    let p = PTransform::new(
        random_invertible(rng, l),
        random_invertible(rng, n),
        random_invertible(rng, m),
        random_mat(rng, m, n, 0.3),
    )
    .unwrap();
    let a = compute_qpff(sys).map_err(err)?.block_sizes;
    let other = compute_qpff(&p.apply(sys).unwrap()).map_err(err)?.block_sizes;
    if other != a {
        return Err(format!("QPFF sizes change under feedback: {a} vs {other}"));
    }
    Ok(())
}

pub fn decoupled_identities(sys: &SystemTriple, _: &mut ChaCha8Rng) -> Result<(), String> {
    let err = |e: daeforms_core::Error| e.to_string();
    let q = compute_qpdff(sys).map_err(err)?;
    let (out, _) = decouple_qpdff(&q.transformed, &q.block_sizes).map_err(err)?;
    let rep = decoupled_qpdff_identities(&out, &q.block_sizes);
    if !rep.passed() {
        return Err(rep.failures.join("; "));
    }
    Ok(())
}

pub fn p_decoupling(sys: &SystemTriple, _: &mut ChaCha8Rng) -> Result<(), String> {
    let err = |e: daeforms_core::Error| e.to_string();
    let p = compute_qpff(sys).map_err(err)?;
    let (_, w) = decouple_qpff(&p.transformed, &p.block_sizes).map_err(err)?;
    if w.v() != &Mat::identity(w.v().rows()) {
        return Err("P decoupling uses V != I".into());
    }
    Ok(())
}

pub const SYSTEM_PROPERTIES: [(&str, Check); 6] = [
    ("(a) chain nesting and termination", chains_nest_and_terminate),
    ("(b) five limit identities", limit_identities),
    ("(c) augmented projection identity", projection_identity),
    ("(d) feedback invariance of the chains", feedback_invariance),
    ("(e) block-size invariance", block_sizes_invariant),
    ("(f) identities of decoupled quasi PD forms", decoupled_identities),
];

/// Random `(A, B, C, D)` with `A, C: m x n`, `m <= n`, and `B, D: p x q`, `p >= q`.
pub fn random_sylvester_data(rng: &mut ChaCha8Rng) -> (Mat, Mat, Mat, Mat) {
    let n = rng.gen_range(1..=3);
    let m = rng.gen_range(1..=n);
    let q = rng.gen_range(1..=3);
    let p = rng.gen_range(q..=3);
    (
        random_mat(rng, m, n, 0.4),
        random_mat(rng, p, q, 0.4),
        random_mat(rng, m, n, 0.4),
        random_mat(rng, p, q, 0.4),
    )
}

/// Runs `attempts` random instances; returns how many satisfied the
/// hypotheses and the failures among those.
pub fn sylvester_under_hypotheses(attempts: usize) -> (usize, Vec<String>) {
    let mut r = rng(7);
    let mut applicable = 0;
    let mut failures = Vec::new();
    for k in 0..attempts {
        let (a, b, c, d) = random_sylvester_data(&mut r);
        if !solvability_hypotheses(&a, &b, &c, &d) {
            continue;
        }
        applicable += 1;
        let e = random_mat(&mut r, a.rows(), b.cols(), 0.2);
        match solve_gen_sylvester(&a, &b, &c, &d, &e) {
            Ok(Some(x)) if sylvester_residual(&a, &b, &c, &d, &e, &x).is_zero() => {}
            Ok(Some(_)) => failures.push(format!("instance {k}: nonzero residual")),
            Ok(None) => failures.push(format!("instance {k}: no solution found")),
            Err(e) => failures.push(format!("instance {k}: {e}")),
        }
    }
    (applicable, failures)
}

pub struct Outcome {
    pub label: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
}

pub fn run_system_property(label: &'static str, check: Check, systems: &[SystemTriple]) -> Outcome {
    let mut r = rng(label.len() as u64 + 11);
    let failures = systems
        .iter()
        .enumerate()
        .filter_map(|(i, s)| check(s, &mut r).err().map(|e| format!("system {i} {:?}: {e}", s.dims())))
        .collect();
    Outcome {
        label,
        checked: systems.len(),
        failures,
    }
}
