//! Exact linear algebra over the rationals by fraction-free (Bareiss)
//! elimination: rows are scaled to integers up front, so every intermediate
//! entry is an integer minor and every division is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{common_denominator, Rational};

fn integer_rows(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let d = common_denominator(row);
            row.iter()
                .map(|v| (v * Rational::from_integer(d.clone())).to_integer())
                .collect()
        })
        .collect()
}

fn exact_div(a: BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    debug_assert!(r.is_zero(), "Bareiss division must be exact");
    q
}

/// Fraction-free forward elimination in place. Returns the pivot columns.
fn bareiss(m: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let rows = m.len();
    let mut prev = BigInt::from(1);
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..m[i].len() {
                let v = &m[i][j] * &m[r][c] - &m[i][c] * &m[r][j];
                m[i][j] = exact_div(v, &prev);
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a rational matrix.
pub fn rank(matrix: &[Vec<Rational>]) -> usize {
    let cols = matrix.first().map_or(0, Vec::len);
    let mut m = integer_rows(matrix);
    bareiss(&mut m, cols).len()
}

/// Determinant of a square rational matrix.
pub fn determinant(matrix: &[Vec<Rational>]) -> Rational {
    let n = matrix.len();
    if n == 0 {
        return Rational::from_integer(1.into());
    }
    let scale: Rational = matrix
        .iter()
        .map(|row| Rational::from_integer(common_denominator(row)))
        .product();
    let mut m = integer_rows(matrix);
    // Track swaps for the sign.
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Rational::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = exact_div(v, &prev);
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    Rational::from_integer(prev * sign) / scale
}

/// Solves the square system `matrix · x = rhs` exactly.
pub fn solve(matrix: &[Vec<Rational>], rhs: &[Rational]) -> Result<Vec<Rational>> {
    let n = matrix.len();
    if rhs.len() != n || matrix.iter().any(|row| row.len() != n) {
        return Err(Error::Internal("solve needs a square system".into()));
    }
    let augmented: Vec<Vec<Rational>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| row.iter().cloned().chain(std::iter::once(b.clone())).collect())
        .collect();
    let mut m = integer_rows(&augmented);
    let pivots = bareiss(&mut m, n);
    if pivots.len() < n {
        return Err(Error::Internal("singular system".into()));
    }
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from_integer(m[i][n].clone());
        for j in i + 1..n {
            acc -= Rational::from_integer(m[i][j].clone()) * &x[j];
        }
        x[i] = acc / Rational::from_integer(m[i][i].clone());
    }
    Ok(x)
}

/// Coefficients `a_0..a_m` of the polynomial through `(points[j], values[j])`.
pub fn interpolate(points: &[Rational], values: &[Rational]) -> Result<Vec<Rational>> {
    let vandermonde: Vec<Vec<Rational>> = points
        .iter()
        .map(|p| {
            let mut row = Vec::with_capacity(points.len());
            let mut power = Rational::from_integer(1.into());
            for _ in 0..points.len() {
                row.push(power.clone());
                power *= p;
            }
            row
        })
        .collect();
    solve(&vandermonde, values)
}

/// Horner evaluation.
pub fn evaluate_polynomial(coefficients: &[Rational], at: &Rational) -> Rational {
    coefficients
        .iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * at + c)
}
