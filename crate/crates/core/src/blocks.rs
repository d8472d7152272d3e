//! Index bookkeeping for block partitions.

use std::ops::Range;

/// Consecutive ranges of the given lengths starting at zero.
pub(crate) fn ranges<const K: usize>(sizes: [usize; K]) -> [Range<usize>; K] {
    let mut start = 0;
    sizes.map(|s| {
        let r = start..start + s;
        start += s;
        r
    })
}

pub(crate) fn unitriangular(k: usize) -> crate::linalg::Mat {
    use num_traits::One;
    crate::linalg::Mat::from_fn(k, k, |i, j| {
        if j >= i {
            crate::linalg::Rational::one()
        } else {
            crate::linalg::Rational::default()
        }
    })
}
