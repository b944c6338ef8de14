//! Small dense exact linear algebra: determinants, rank, linear solving.
//!
//! Everything here is Gaussian elimination over `Rational`. Matrices are
//! desk-scale (dimension at most a dozen), so no pivoting strategy beyond
//! "first nonzero" is needed for exactness, and none is needed for speed.

use crate::rational::Rational;
use num_traits::Zero;

/// Exact determinant of a square matrix. Panics on a non-square input.
pub fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    for row in &m {
        assert_eq!(row.len(), n, "det: matrix must be square");
    }
    let mut result = Rational::from_integer(1.into());
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero());
        let Some(pivot) = pivot else {
            return Rational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            result = -result;
        }
        let pv = m[col][col].clone();
        result *= &pv;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &pv;
            for c in col..n {
                let sub = &factor * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    result
}

/// Row rank of a rectangular matrix.
pub fn rank(mut m: Vec<Vec<Rational>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(pivot) = (r..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(pivot, r);
        let pv = m[r][col].clone();
        for i in r + 1..rows {
            if m[i][col].is_zero() {
                continue;
            }
            let factor = &m[i][col] / &pv;
            for c in col..cols {
                let sub = &factor * &m[r][c];
                m[i][c] -= sub;
            }
        }
        r += 1;
    }
    r
}

/// Solves `A x = b` for square `A`. Returns `None` when `A` is singular.
pub fn solve(a: Vec<Vec<Rational>>, b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    let mut m: Vec<Vec<Rational>> = a
        .into_iter()
        .zip(b)
        .map(|(mut row, rhs)| {
            assert_eq!(row.len(), n, "solve: matrix must be square");
            row.push(rhs);
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(pivot, col);
        let pv = m[col][col].clone();
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &pv;
            for c in col..=n {
                let sub = &factor * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    Some(
        (0..n)
            .map(|r| {
                let pv = m[r][r].clone();
                &m[r][n] / pv
            })
            .collect(),
    )
}
