//! Exact linear algebra over `Q` for small intersection matrices.

// row operations read one row of a matrix while writing another
#![allow(clippy::needless_range_loop)]

use num_traits::{One, Signed, Zero};

use crate::field_arith::Q;

pub type QMatrix = Vec<Vec<Q>>;

pub fn submatrix(m: &QMatrix, rows: &[usize], cols: &[usize]) -> QMatrix {
    rows.iter().map(|&r| cols.iter().map(|&c| m[r][c]).collect()).collect()
}

pub fn determinant(m: &QMatrix) -> Q {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Q::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Q::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pivot = a[col][col];
        det *= pivot;
        for r in (col + 1)..n {
            let f = a[r][col] / pivot;
            if f.is_zero() {
                continue;
            }
            for c in col..n {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
        }
    }
    det
}

pub fn inverse(m: &QMatrix) -> Option<QMatrix> {
    let n = m.len();
    let mut a: QMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(p, col);
        let pivot = a[col][col];
        for c in 0..2 * n {
            a[col][c] /= pivot;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col];
            for c in 0..2 * n {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mul_vec(m: &QMatrix, v: &[Q]) -> Vec<Q> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Basis of the right kernel, one vector per free column of the reduced echelon form.
pub fn kernel(m: &QMatrix) -> Vec<Vec<Q>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let pivot = a[r][c];
        for x in a[r].iter_mut() {
            *x /= pivot;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c];
                for j in 0..cols {
                    let v = a[r][j];
                    a[i][j] -= f * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); cols];
            v[free] = Q::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[i][free];
            }
            v
        })
        .collect()
}

/// Sylvester's criterion on `-m`.
pub fn is_negative_definite(m: &QMatrix) -> bool {
    let n = m.len();
    (1..=n).all(|k| {
        let idx: Vec<usize> = (0..k).collect();
        let minor = determinant(&submatrix(m, &idx, &idx));
        // det of the k-th leading minor of -m is (-1)^k det(m_k)
        let signed = if k % 2 == 0 { minor } else { -minor };
        signed.is_positive()
    })
}
