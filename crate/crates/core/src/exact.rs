//! Exact rational helpers: rank, interpolation and polynomial evaluation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn rat(n: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Rank of a rational matrix given by rows.
pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = rows.to_vec();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let piv = a[r][c].clone();
        let pivot_row: Vec<BigRational> = a[r].iter().map(|x| x / &piv).collect();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let t = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &t * p;
            }
        }
        a[r] = pivot_row;
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

/// Coefficients (low-to-high) of the unique polynomial of degree
/// `< xs.len()` through the points `(xs[i], ys[i])`.
pub fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> Vec<BigRational> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    let mut out = vec![BigRational::zero(); n];
    for i in 0..n {
        // basis polynomial prod_{j != i} (x - x_j) / (x_i - x_j)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * &xs[j];
            }
            basis = next;
            denom *= &xs[i] - &xs[j];
        }
        let scale = &ys[i] / denom;
        for (o, b) in out.iter_mut().zip(&basis) {
            *o += b * &scale;
        }
    }
    while out.len() > 1 && out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

pub fn eval(coeffs: &[BigRational], x: &BigRational) -> BigRational {
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}
