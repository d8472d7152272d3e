//! Augmented Wong sequences `V^{i+1} = A^{-1}(E V^i + im B)` and
//! `W^{i+1} = E^{-1}(A W^i + im B)` together with the identities their limits satisfy.

use crate::linalg::{Mat, Subspace};
use crate::system::SystemTriple;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WongReport {
    pub v_chain: Vec<Subspace>,
    pub w_chain: Vec<Subspace>,
    pub v_limit: Subspace,
    pub w_limit: Subspace,
    pub i_star: usize,
    pub j_star: usize,
}

fn iterate(start: Subspace, step: impl Fn(&Subspace) -> Subspace) -> Vec<Subspace> {
    let mut chain = vec![start];
    loop {
        let next = step(chain.last().expect("chain is never empty"));
        if &next == chain.last().unwrap() {
            return chain;
        }
        chain.push(next);
    }
}

fn im_b(sys: &SystemTriple) -> Subspace {
    Subspace::span(sys.b())
}

/// `[V^0, ..., V^{i*}]`; the last element is the limit.
pub fn v_sequence(sys: &SystemTriple) -> Vec<Subspace> {
    let (_, n, _) = sys.dims();
    let b = im_b(sys);
    iterate(Subspace::full(n), |v| {
        let target = v.image_under(sys.e()).unwrap().sum(&b).unwrap();
        Subspace::preimage(sys.a(), &target).unwrap()
    })
}

/// `[W^0, ..., W^{j*}]`; the last element is the limit.
pub fn w_sequence(sys: &SystemTriple) -> Vec<Subspace> {
    let (_, n, _) = sys.dims();
    let b = im_b(sys);
    iterate(Subspace::zero(n), |w| {
        let target = w.image_under(sys.a()).unwrap().sum(&b).unwrap();
        Subspace::preimage(sys.e(), &target).unwrap()
    })
}

pub fn wong_limits(sys: &SystemTriple) -> WongReport {
    let v_chain = v_sequence(sys);
    let w_chain = w_sequence(sys);
    WongReport {
        v_limit: v_chain.last().unwrap().clone(),
        w_limit: w_chain.last().unwrap().clone(),
        i_star: v_chain.len() - 1,
        j_star: w_chain.len() - 1,
        v_chain,
        w_chain,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Evaluates the invariance inclusions and the intersection identities of the limits.
pub fn check_limit_identities(sys: &SystemTriple) -> IdentityReport {
    let r = wong_limits(sys);
    let (v, w) = (&r.v_limit, &r.w_limit);
    let e = sys.e();
    let a = sys.a();
    let b = im_b(sys);
    let img = |s: &Subspace, m: &Mat| s.image_under(m).unwrap();
    let ev = img(v, e);
    let av = img(v, a);
    let ew = img(w, e);
    let aw = img(w, a);
    let vw = v.intersect(w).unwrap();
    let evw = img(&vw, e);
    let avw = img(&vw, a);
    let ev_b = ev.sum(&b).unwrap();
    let aw_b = aw.sum(&b).unwrap();

    let chain_mid = ev_b.intersect(&aw_b).unwrap();
    let checks = vec![
        IdentityCheck {
            name: "E W* ⊆ A W* + im B",
            holds: aw_b.contains(&ew),
        },
        IdentityCheck {
            name: "A V* ⊆ E V* + im B",
            holds: ev_b.contains(&av),
        },
        IdentityCheck {
            name: "E(V* ∩ W*) = E V* ∩ (A W* + im B)",
            holds: evw == ev.intersect(&aw_b).unwrap(),
        },
        IdentityCheck {
            name: "A(V* ∩ W*) = (E V* + im B) ∩ A W*",
            holds: avw == ev_b.intersect(&aw).unwrap(),
        },
        IdentityCheck {
            name: "E(V* ∩ W*) + im B = (E V* + im B) ∩ (A W* + im B) = A(V* ∩ W*) + im B",
            holds: evw.sum(&b).unwrap() == chain_mid && chain_mid == avw.sum(&b).unwrap(),
        },
    ];
    IdentityReport { checks }
}

/// Compares the limits with the projections `[I_n, 0]` of the limits of the
/// input-free augmented pencil `s[E, 0] - [A, B]`.
pub fn augmented_projection_check(sys: &SystemTriple) -> bool {
    let (_, n, m) = sys.dims();
    let own = wong_limits(sys);
    let aug = wong_limits(&sys.augmented());
    let proj = Mat::hstack(&[&Mat::identity(n), &Mat::zeros(n, m)]).unwrap();
    aug.v_limit.image_under(&proj).unwrap() == own.v_limit
        && aug.w_limit.image_under(&proj).unwrap() == own.w_limit
}
