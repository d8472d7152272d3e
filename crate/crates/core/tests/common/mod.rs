//! Shared fixtures: the running seven-equation example and reference
//! witnesses and forms for it.
#![allow(dead_code)]

use daeforms_core::linalg::{frac, Mat, Rational};
use daeforms_core::SystemTriple;

pub fn m(rows: &[&[i64]]) -> Mat {
    Mat::from_i64(rows)
}

/// Matrix literal with rational entries given as `(num, den)`.
pub fn q(rows: &[&[(i64, i64)]]) -> Mat {
    let cols = rows.first().map_or(0, |r| r.len());
    Mat::from_fn(rows.len(), cols, |i, j| {
        let (a, b) = rows[i][j];
        frac(a, b)
    })
}

pub fn r(num: i64, den: i64) -> Rational {
    frac(num, den)
}

pub fn running_system() -> SystemTriple {
    SystemTriple::new(
        m(&[
            &[-2, -3, 0, -1, -4, -3],
            &[1, 4, 3, -1, 4, 4],
            &[0, -4, -7, 1, -3, -6],
            &[0, 2, 1, -2, 2, 1],
            &[2, 5, 1, -1, 6, 4],
            &[2, 4, 2, 1, 5, 5],
            &[-2, 2, 9, -2, 0, 5],
        ]),
        m(&[
            &[-2, -2, 4, 3, 1, -1],
            &[0, -3, -3, -2, -5, -3],
            &[-1, 4, 3, 5, 7, 3],
            &[-1, -2, 3, 1, 0, 0],
            &[1, 1, 1, -2, 0, 3],
            &[4, 0, -5, -5, -2, -2],
            &[2, -6, 4, -5, -4, -4],
        ]),
        m(&[
            &[1, -1, -1],
            &[0, 0, 2],
            &[-1, 2, -3],
            &[1, -1, 1],
            &[0, 0, 2],
            &[1, -3, 2],
            &[5, -9, 3],
        ]),
    )
    .unwrap()
}

pub fn pff_s() -> Mat {
    m(&[
        &[-15, 2, 4, 5, -6, -6, 4],
        &[-16, -1, 2, 9, -8, -5, 3],
        &[-3, -1, 0, 3, -2, 0, 0],
        &[8, 2, 0, -5, 4, 2, -1],
        &[-1, 0, 0, 1, -1, 0, 0],
        &[-6, 0, 1, 3, -3, -2, 1],
        &[-4, 0, 1, 2, -2, -1, 1],
    ])
}

pub fn pff_t() -> Mat {
    m(&[
        &[-17, 10, -13, -3, -8, 6],
        &[13, -6, 9, 2, 6, -4],
        &[-7, 4, -5, -1, -3, 2],
        &[6, -3, 4, 1, 3, -2],
        &[-5, 2, -3, 0, -2, 1],
        &[3, -2, 2, 0, 1, -1],
    ])
}

pub fn pff_v() -> Mat {
    m(&[&[2, 0, -1], &[1, 0, -1], &[0, -1, -1]])
}

pub fn pff_f() -> Mat {
    m(&[
        &[3, 3, -2, -2, 0, 2],
        &[-14, 10, -12, -3, -7, 6],
        &[7, -4, 6, 3, 4, -3],
    ])
}

/// Rows of the PD witness `S`: the PFF `S` with rows reordered 1,3,4,5,2,6,7.
pub fn pdff_s() -> Mat {
    pff_s().select_rows(&[0, 2, 3, 4, 1, 5, 6])
}

pub fn pdff_fd() -> Mat {
    m(&[&[0, 0, -2, 0, 0, 0], &[0, 0, -1, 0, 0, 0], &[0, 0, 0, 0, 0, 1]])
}

/// Reference spans for the Wong sequences of the running example.
pub fn reference_v1() -> Mat {
    m(&[
        &[5, 2, 0, 2],
        &[-2, 0, -1, -2],
        &[1, 0, 0, 0],
        &[0, 1, 0, 0],
        &[0, 0, 1, 0],
        &[0, 0, 0, 1],
    ])
}

pub fn reference_w1() -> Mat {
    m(&[
        &[3, -1, -2, 0],
        &[-1, 1, 0, 0],
        &[1, 0, 0, 0],
        &[0, 1, 0, 0],
        &[0, 0, 1, 0],
        &[0, 0, 0, 1],
    ])
}

pub fn reference_w2() -> Mat {
    m(&[
        &[-1, 2, 0, -2, 0],
        &[1, 0, 0, 0, 0],
        &[0, 1, 0, 0, 0],
        &[0, 0, 1, 0, 0],
        &[0, 0, 0, 1, 0],
        &[0, 0, 0, 0, 1],
    ])
}

pub fn qpff_t() -> Mat {
    m(&[
        &[-8, -5, 2, 3, 1, 0],
        &[4, 1, -2, -1, 0, 0],
        &[-2, -1, 0, 1, 0, 0],
        &[1, 0, 0, 0, -1, -1],
        &[0, 1, 0, 1, 1, -1],
        &[0, 0, 1, -1, 0, -1],
    ])
}

pub fn qpff_s_inv() -> Mat {
    q(&[
        &[(1, 1), (0, 1), (-1, 1), (-1, 1), (-1, 1), (0, 1), (-1, 1)],
        &[(0, 1), (1, 1), (-1, 1), (-1, 1), (1, 1), (-1, 1), (0, 1)],
        &[(0, 1), (-1, 1), (-1, 1), (0, 1), (1, 1), (-1, 1), (1, 1)],
        &[(1, 1), (1, 1), (-4, 1), (-2, 1), (0, 1), (0, 1), (0, 1)],
        &[(0, 1), (1, 1), (-3, 1), (-1, 1), (1, 1), (1, 1), (0, 1)],
        &[(-1, 1), (0, 1), (1, 1), (7, 2), (-7, 2), (-1, 1), (0, 1)],
        &[(1, 1), (1, 1), (0, 1), (3, 1), (-9, 1), (-1, 1), (-1, 1)],
    ])
}

pub fn qpff_fp() -> Mat {
    m(&[&[9, 4, -1, -5, 0, 0], &[0, 0, 0, 0, 0, 0], &[6, 4, -3, 1, 0, 0]])
}

pub fn qpff_v() -> Mat {
    m(&[&[2, -1, 0], &[1, 1, 0], &[0, -1, 1]])
}

pub fn qpff_reference() -> SystemTriple {
    let z = (0, 1);
    SystemTriple::new(
        q(&[
            &[(3, 1), (3, 1), (-1, 1), (-5, 1), (-29, 2), (33, 1)],
            &[(1, 1), z, (-2, 1), (1, 1), (5, 2), z],
            &[z, z, z, (-1, 1), (-3, 2), (1, 1)],
            &[z, z, z, z, (-5, 1), (15, 1)],
            &[z, z, z, z, (-3, 1), (9, 1)],
            &[z, z, z, z, z, z],
            &[z, z, z, z, z, z],
        ]),
        q(&[
            &[(6, 1), (5, 1), (1, 1), (-5, 1), (18, 1), (-679, 6)],
            &[(4, 1), (3, 1), (-3, 1), (-1, 1), (6, 1), (-47, 2)],
            &[z, z, z, (-1, 1), (-1, 1), (5, 3)],
            &[z, z, z, z, (15, 1), (-427, 6)],
            &[z, z, z, z, (7, 1), (-239, 6)],
            &[z, z, z, z, (2, 1), (-23, 6)],
            &[z, z, z, z, (1, 1), (-5, 6)],
        ]),
        m(&[
            &[1, 13, -9],
            &[0, 0, 0],
            &[0, 0, 0],
            &[0, 8, -5],
            &[0, 6, -3],
            &[0, 0, 0],
            &[0, 0, 0],
        ]),
    )
    .unwrap()
}

pub fn qpdff_t() -> Mat {
    m(&[
        &[-8, -5, 2, 7, -1, 1],
        &[4, 1, -2, -5, -1, 1],
        &[-2, -1, 0, 1, 1, -1],
        &[1, 0, 0, 0, 0, -1],
        &[0, 1, 0, 1, 0, 0],
        &[0, 0, 1, 1, 1, 0],
    ])
}

pub fn qpdff_s_inv() -> Mat {
    q(&[
        &[(0, 1), (1, 1), (-1, 1), (-1, 1), (1, 1), (0, 1), (0, 1)],
        &[(1, 1), (-1, 1), (0, 1), (1, 1), (0, 1), (1, 1), (0, 1)],
        &[(0, 1), (0, 1), (1, 1), (0, 1), (0, 1), (0, 1), (1, 1)],
        &[(1, 1), (1, 1), (1, 1), (1, 1), (1, 1), (1, 1), (0, 1)],
        &[(1, 1), (0, 1), (0, 1), (0, 1), (0, 1), (1, 1), (0, 1)],
        &[(0, 1), (1, 1), (1, 1), (1, 1), (-1, 1), (-5, 2), (-2, 1)],
        &[(1, 1), (3, 1), (1, 1), (1, 1), (1, 1), (-4, 1), (-4, 1)],
    ])
}

pub fn qpdff_fp() -> Mat {
    q(&[
        &[(-7, 1), (-9, 1), (0, 1), (5, 1), (-37, 2), (37, 2)],
        &[(-42, 5), (-34, 5), (4, 5), (28, 5), (-9, 1), (9, 1)],
        &[(22, 5), (14, 5), (-9, 5), (-13, 5), (-1, 1), (-2, 1)],
    ])
}

pub fn qpdff_fd() -> Mat {
    q(&[
        &[(-7, 1), (-6, 1), (4, 1), (16, 1), (-10, 1), (9, 1)],
        &[(-18, 5), (-3, 1), (11, 5), (36, 5), (-13, 5), (2, 1)],
        &[(-2, 5), (0, 1), (4, 5), (4, 5), (-7, 5), (-1, 1)],
    ])
}

pub fn qpdff_reference() -> SystemTriple {
    let z = (0, 1);
    let zero_row: &[(i64, i64)] = &[z, z, z, z, z, z];
    SystemTriple::new(
        q(&[
            &[(1, 5), z, (-2, 5), (8, 5), (-24, 5), (5, 1)],
            &[z, z, z, (2, 1), (-4, 1), (4, 1)],
            zero_row,
            zero_row,
            zero_row,
            zero_row,
            zero_row,
        ]),
        q(&[
            &[(4, 5), (3, 5), (-3, 5), (4, 5), z, (-1, 1)],
            &[z, z, z, (2, 1), (-3, 1), (1, 1)],
            &[z, z, z, z, (13, 2), (1, 2)],
            &[z, z, z, z, (-8, 1), z],
            zero_row,
            zero_row,
            zero_row,
        ]),
        m(&[
            &[0, 0, 0],
            &[0, 0, 0],
            &[0, 0, 0],
            &[0, 0, 0],
            &[1, -1, -1],
            &[0, 0, 2],
            &[-1, 2, -3],
        ]),
    )
    .unwrap()
}
pub mod props;
