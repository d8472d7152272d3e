//! Fraction-free Gauss-Jordan elimination on integer rows. Entries that fit
//! in `i64` are eliminated with checked machine arithmetic first; any
//! overflow restarts the elimination with `BigInt`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::Rational;

trait Entry: Clone + Zero + Integer {
    /// `x * f - y * g`, or `None` on overflow.
    fn cross(x: &Self, f: &Self, y: &Self, g: &Self) -> Option<Self>;
}

impl Entry for i64 {
    fn cross(x: &i64, f: &i64, y: &i64, g: &i64) -> Option<i64> {
        let v = *x as i128 * *f as i128 - *y as i128 * *g as i128;
        i64::try_from(v).ok()
    }
}

impl Entry for BigInt {
    fn cross(x: &BigInt, f: &BigInt, y: &BigInt, g: &BigInt) -> Option<BigInt> {
        Some(x * f - y * g)
    }
}

fn make_primitive<T: Entry>(row: &mut [T]) {
    let g = row.iter().fold(T::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = x.div_floor(&g);
        }
    }
}

fn eliminate<T: Entry>(mut a: Vec<Vec<T>>, cols: usize, full: bool) -> Option<(Vec<Vec<T>>, Vec<usize>)> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (head, tail) = a.split_at_mut(r);
        let (pivot_row, rest) = tail.split_first_mut().expect("r < rows");
        let above: &mut [Vec<T>] = if full { head } else { &mut [] };
        for row in rest.iter_mut().chain(above.iter_mut()) {
            if row[c].is_zero() {
                continue;
            }
            let g = pivot_row[c].gcd(&row[c]);
            let f_row = pivot_row[c].div_floor(&g);
            let f_piv = row[c].div_floor(&g);
            for j in 0..cols {
                if pivot_row[j].is_zero() {
                    if !row[j].is_zero() {
                        row[j] = T::cross(&row[j], &f_row, &T::zero(), &T::zero())?;
                    }
                } else {
                    row[j] = T::cross(&row[j], &f_row, &pivot_row[j], &f_piv)?;
                }
            }
            make_primitive(row);
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Some((a, pivots))
}

fn small_rows(rows: &[&[Rational]]) -> Option<Vec<Vec<i64>>> {
    rows.iter()
        .map(|row| {
            let mut den: i64 = 1;
            for x in row.iter() {
                if !x.denom().is_one() {
                    let d = x.denom().to_i64()?;
                    den = den.checked_mul(d / den.gcd(&d))?;
                }
            }
            let mut out = row
                .iter()
                .map(|x| {
                    let n = x.numer().to_i64()?;
                    if den == 1 {
                        return Some(n);
                    }
                    n.checked_mul(den / x.denom().to_i64()?)
                })
                .collect::<Option<Vec<i64>>>()?;
            make_primitive(&mut out);
            Some(out)
        })
        .collect()
}

fn big_rows(rows: &[&[Rational]]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let den = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let mut out: Vec<BigInt> = row.iter().map(|x| x.numer() * (&den / x.denom())).collect();
            make_primitive(&mut out);
            out
        })
        .collect()
}

/// Echelon form of the given rows as primitive integer rows, with the pivot
/// columns. With `full`, pivot columns are also cleared above each pivot.
pub(super) fn integer_echelon(rows: &[&[Rational]], cols: usize, full: bool) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    if let Some((a, p)) = small_rows(rows).and_then(|a| eliminate(a, cols, full)) {
        let a = a.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
        return (a, p);
    }
    eliminate(big_rows(rows), cols, full).expect("BigInt arithmetic does not overflow")
}
