//! Exact Gaussian elimination over the rationals.

use num::{One, Zero};

use crate::rational::Rational;

/// Reduces `rows` to reduced row echelon form in place, drops zero rows,
/// and returns the pivot column of each remaining row.
pub fn row_reduce(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m).len()
}

/// One solution of `a·x = b`, with every free variable set to zero, or
/// `None` if the system is inconsistent.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(a.len(), b.len(), "one right-hand side per row");
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, v)| {
            let mut row = row.clone();
            row.push(v.clone());
            row
        })
        .collect();
    let pivots = row_reduce(&mut m);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, &c) in m.iter().zip(&pivots) {
        x[c] = row[cols].clone();
    }
    Some(x)
}

/// Whether `v` lies in the span of the rows of a reduced echelon matrix.
pub fn in_row_space(reduced: &[Vec<Rational>], pivots: &[usize], v: &[Rational]) -> bool {
    let mut rest = v.to_vec();
    for (row, &c) in reduced.iter().zip(pivots) {
        if rest[c].is_zero() {
            continue;
        }
        let f = rest[c].clone();
        for (r, x) in rest.iter_mut().zip(row) {
            *r -= &f * x;
        }
    }
    rest.iter().all(Zero::is_zero)
}

pub fn identity(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect()
}
