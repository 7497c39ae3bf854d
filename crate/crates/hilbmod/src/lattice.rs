//! Integer lattice utilities: row Hermite normal form with transform,
//! integer kernels, LLL size reduction and short-vector enumeration.
//!
//! All exact operations run over `i128`. The floating point Gram-Schmidt data
//! used by LLL and the enumeration only steers unimodular row operations, so
//! the returned lattices are exact regardless of rounding.

// row operations read one row of a matrix while writing another
#![allow(clippy::needless_range_loop)]

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// The result is in echelon form with positive pivots, entries above each
/// pivot reduced into `[0, pivot)`, and zero rows removed.
pub fn hnf(rows: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let (h, _) = hnf_with_transform(rows);
    h.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect()
}

/// Hermite normal form together with a unimodular `u` satisfying `u * rows = h`.
/// Zero rows of `h` are kept at the bottom so that the matching rows of `u`
/// span the left kernel.
pub fn hnf_with_transform(rows: &[Vec<i128>]) -> (Vec<Vec<i128>>, Vec<Vec<i128>>) {
    let m = rows.len();
    let n = rows.first().map_or(0, |r| r.len());
    let mut h: Vec<Vec<i128>> = rows.to_vec();
    let mut u: Vec<Vec<i128>> = (0..m)
        .map(|i| (0..m).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut piv_row = 0;
    for col in 0..n {
        if piv_row >= m {
            break;
        }
        loop {
            // pick the row with the smallest nonzero entry in this column
            let mut best: Option<usize> = None;
            for r in piv_row..m {
                if h[r][col] != 0 && best.is_none_or(|b| h[r][col].abs() < h[b][col].abs()) {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            h.swap(piv_row, b);
            u.swap(piv_row, b);
            let mut done = true;
            for r in (piv_row + 1)..m {
                if h[r][col] != 0 {
                    let q = h[r][col].div_euclid(h[piv_row][col]);
                    row_sub(&mut h, r, piv_row, q);
                    row_sub(&mut u, r, piv_row, q);
                    if h[r][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[piv_row][col] == 0 {
            continue;
        }
        if h[piv_row][col] < 0 {
            negate_row(&mut h, piv_row);
            negate_row(&mut u, piv_row);
        }
        let p = h[piv_row][col];
        for r in 0..piv_row {
            let q = h[r][col].div_euclid(p);
            if q != 0 {
                row_sub(&mut h, r, piv_row, q);
                row_sub(&mut u, r, piv_row, q);
            }
        }
        piv_row += 1;
    }
    (h, u)
}

fn row_sub(mat: &mut [Vec<i128>], target: usize, src: usize, q: i128) {
    let (t, s) = if target < src {
        let (lo, hi) = mat.split_at_mut(src);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = mat.split_at_mut(target);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        *x -= q * y;
    }
}

fn negate_row(mat: &mut [Vec<i128>], r: usize) {
    for x in mat[r].iter_mut() {
        *x = -*x;
    }
}

/// Z-basis of `{x in Z^n : A x = 0}` where `a` lists the rows of `A`.
/// The basis is LLL-reduced.
pub fn integer_kernel(a: &[Vec<i128>], n: usize) -> Vec<Vec<i128>> {
    if a.is_empty() {
        return (0..n)
            .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
            .collect();
    }
    let at: Vec<Vec<i128>> = (0..n).map(|j| a.iter().map(|row| row[j]).collect()).collect();
    let (h, u) = hnf_with_transform(&at);
    let ker: Vec<Vec<i128>> = h
        .iter()
        .zip(u)
        .filter(|(hr, _)| hr.iter().all(|&x| x == 0))
        .map(|(_, ur)| ur)
        .collect();
    lll(ker)
}

/// LLL reduction (delta = 0.99) of a list of linearly independent integer vectors.
pub fn lll(mut b: Vec<Vec<i128>>) -> Vec<Vec<i128>> {
    let k = b.len();
    if k <= 1 {
        return b;
    }
    let delta = 0.99;
    let mut i = 1;
    let mut guard = 0usize;
    while i < k {
        guard += 1;
        if guard > 100_000 {
            break;
        }
        let (mu, bstar) = gram_schmidt(&b);
        for j in (0..i).rev() {
            let q = mu[i][j].round();
            if q != 0.0 {
                let qi = q as i128;
                let src = b[j].clone();
                for (x, y) in b[i].iter_mut().zip(src.iter()) {
                    *x -= qi * y;
                }
            }
        }
        let (mu, _) = gram_schmidt(&b);
        if bstar[i] >= (delta - mu[i][i - 1] * mu[i][i - 1]) * bstar[i - 1] {
            i += 1;
        } else {
            b.swap(i, i - 1);
            i = i.saturating_sub(1).max(1);
        }
    }
    b
}

fn gram_schmidt(b: &[Vec<i128>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let k = b.len();
    let bf: Vec<Vec<f64>> = b.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut mu = vec![vec![0.0; k]; k];
    let mut norms = vec![0.0; k];
    for i in 0..k {
        let mut v = bf[i].clone();
        for j in 0..i {
            let m = if norms[j] > 0.0 { dot(&bf[i], &star[j]) / norms[j] } else { 0.0 };
            mu[i][j] = m;
            for (x, y) in v.iter_mut().zip(star[j].iter()) {
                *x -= m * y;
            }
        }
        norms[i] = dot(&v, &v);
        star.push(v);
    }
    (mu, norms)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Whether a symmetric matrix is positive definite, by Cholesky pivots.
pub fn is_positive_definite(g: &[Vec<f64>]) -> bool {
    let n = g.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = g[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 1e-9 * (1.0 + g[i][i].abs()) {
                    return false;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    true
}

/// Enumerate all integer vectors `x` with `x^T G x <= bound` for a positive
/// definite symmetric `g`. A small relative slack is added so that boundary
/// vectors are never lost to rounding; callers must re-check exactly.
pub fn short_vectors(g: &[Vec<f64>], bound: f64) -> Vec<Vec<i64>> {
    let n = g.len();
    // Cholesky-style decomposition q_ii, q_ij (Fincke-Pohst form)
    let mut q = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            q[i][j] = g[i][j];
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in (i + 1)..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let slack = bound.abs() * 1e-9 + 1e-7;
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    fp_rec(&q, n, n, bound + slack, &mut x, &mut out);
    out
}

fn fp_rec(q: &[Vec<f64>], n: usize, level: usize, remaining: f64, x: &mut [i64], out: &mut Vec<Vec<i64>>) {
    if level == 0 {
        out.push(x.to_vec());
        return;
    }
    let i = level - 1;
    let mut centre = 0.0;
    for j in (i + 1)..n {
        centre -= q[i][j] * x[j] as f64;
    }
    let qii = q[i][i];
    if qii <= 0.0 || remaining < 0.0 {
        return;
    }
    let r = (remaining / qii).sqrt();
    let lo = (centre - r).ceil() as i64;
    let hi = (centre + r).floor() as i64;
    for v in lo..=hi {
        let d = v as f64 - centre;
        let rem = remaining - qii * d * d;
        if rem < -1e-9 {
            continue;
        }
        x[i] = v;
        fp_rec(q, n, i, rem, x, out);
    }
    x[i] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_of_redundant_generators() {
        let h = hnf(&[vec![4, 0], vec![6, 0], vec![1, 3]]);
        assert_eq!(h, vec![vec![1, 3], vec![0, 6]]);
    }

    #[test]
    fn transform_reproduces_hnf() {
        let rows = vec![vec![3, 5, 7], vec![2, 4, 6], vec![1, 1, 1]];
        let (h, u) = hnf_with_transform(&rows);
        for i in 0..3 {
            for j in 0..3 {
                let s: i128 = (0..3).map(|k| u[i][k] * rows[k][j]).sum();
                assert_eq!(s, h[i][j]);
            }
        }
    }

    #[test]
    fn kernel_vectors_vanish() {
        let a = vec![vec![1, 2, 3, 4], vec![2, 0, 1, 5]];
        let k = integer_kernel(&a, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            for row in &a {
                assert_eq!(row.iter().zip(v).map(|(x, y)| x * y).sum::<i128>(), 0);
            }
        }
    }

    #[test]
    fn short_vectors_of_identity() {
        let g = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let v = short_vectors(&g, 1.0);
        assert_eq!(v.len(), 5);
    }
}
