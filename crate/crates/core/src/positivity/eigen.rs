//! Eigenvalue routines backing the positivity oracle.

use rayon::prelude::*;

use crate::bandmat::{DenseSymMatrix, SymMatrix};

/// Orders at or below this use cyclic Jacobi; larger matrices are reduced to
/// tridiagonal form first.
pub const JACOBI_MAX_ORDER: usize = 64;

/// Number of eigenvalues of the symmetric tridiagonal matrix `(diag, off)`
/// strictly below `x`, from the signs of the LDL^T pivots.
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let n = diag.len();
    if n == 0 {
        return 0;
    }
    let pivmin = pivot_floor(diag, off);
    let mut count = 0;
    let mut q = diag[0] - x;
    if q.abs() <= pivmin {
        q = -pivmin;
    }
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        q = (diag[i] - x) - off[i - 1] * off[i - 1] / q;
        if q.abs() <= pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn pivot_floor(diag: &[f64], off: &[f64]) -> f64 {
    let e2 = off.iter().fold(0.0_f64, |m, e| m.max(e * e));
    let d = diag.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    f64::MIN_POSITIVE * e2.max(d).max(1.0) / f64::EPSILON
}

/// Gershgorin interval containing every eigenvalue, padded so the Sturm
/// count at the lower end is zero and at the upper end is `n`.
pub fn gershgorin_bounds(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    let pad = 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1.0) * n as f64;
    (lo - pad, hi + pad)
}

/// The `k`-th smallest eigenvalue (zero-based) by bisection down to width
/// `width` or the floating-point resolution of the bracket.
pub fn bisect_eigenvalue(diag: &[f64], off: &[f64], k: usize, width: f64, bounds: (f64, f64)) -> f64 {
    let (mut lo, mut hi) = bounds;
    loop {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= width || mid <= lo || mid >= hi {
            return mid;
        }
        if sturm_count(diag, off, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

/// All eigenvalues in ascending order, each bracketed to `width`.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64], width: f64) -> Vec<f64> {
    let n = diag.len();
    if n == 0 {
        return Vec::new();
    }
    let bounds = gershgorin_bounds(diag, off);
    let one = |k| bisect_eigenvalue(diag, off, k, width, bounds);
    let mut out: Vec<f64> = if n >= JACOBI_MAX_ORDER {
        (0..n).into_par_iter().map(one).collect()
    } else {
        (0..n).map(one).collect()
    };
    // Brackets are nested by index, so the sequence is already sorted up to
    // rounding at the final bisection step.
    out.sort_by(f64::total_cmp);
    out
}

/// Eigenvalues of a dense symmetric matrix by the cyclic Jacobi method,
/// ascending.
pub fn jacobi_eigenvalues(a: &DenseSymMatrix) -> Vec<f64> {
    let n = a.order();
    let mut m: Vec<f64> = a.rows().into_iter().flatten().collect();
    let idx = |i: usize, j: usize| i * n + j;
    let total: f64 = m.iter().map(|v| v * v).sum();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += m[idx(i, j)] * m[idx(i, j)];
            }
        }
        if off == 0.0 || off <= (f64::EPSILON * f64::EPSILON) * total * 1e-4 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[idx(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = m[idx(p, p)];
                let aqq = m[idx(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[idx(k, p)];
                    let akq = m[idx(k, q)];
                    m[idx(k, p)] = c * akp - s * akq;
                    m[idx(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[idx(p, k)];
                    let aqk = m[idx(q, k)];
                    m[idx(p, k)] = c * apk - s * aqk;
                    m[idx(q, k)] = s * apk + c * aqk;
                }
                m[idx(p, q)] = 0.0;
                m[idx(q, p)] = 0.0;
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[idx(i, i)]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Householder reduction to a similar symmetric tridiagonal matrix,
/// returned as `(diag, off)`.
pub fn householder_tridiagonalize(a: &DenseSymMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = a.order();
    let mut m = a.rows();
    for k in 0..n.saturating_sub(2) {
        let alpha_sq: f64 = ((k + 1)..n).map(|i| m[i][k] * m[i][k]).sum();
        if alpha_sq == 0.0 {
            continue;
        }
        let x0 = m[k + 1][k];
        let alpha = -x0.signum_nonzero() * alpha_sq.sqrt();
        let mut v = vec![0.0; n];
        v[k + 1] = x0 - alpha;
        for i in (k + 2)..n {
            v[i] = m[i][k];
        }
        let vnorm_sq: f64 = v.iter().map(|x| x * x).sum();
        if vnorm_sq == 0.0 {
            continue;
        }
        // p = A v * 2 / |v|^2, w = p - (v.p / |v|^2) v, A <- A - v w^T - w v^T
        let beta = 2.0 / vnorm_sq;
        let p: Vec<f64> = (0..n)
            .map(|i| beta * (0..n).map(|j| m[i][j] * v[j]).sum::<f64>())
            .collect();
        let vp: f64 = v.iter().zip(&p).map(|(a, b)| a * b).sum();
        let kappa = 0.5 * beta * vp;
        let w: Vec<f64> = p.iter().zip(&v).map(|(pi, vi)| pi - kappa * vi).collect();
        for i in 0..n {
            for j in 0..n {
                m[i][j] -= v[i] * w[j] + w[i] * v[j];
            }
        }
    }
    let diag = (0..n).map(|i| m[i][i]).collect();
    let off = (0..n.saturating_sub(1))
        .map(|i| 0.5 * (m[i][i + 1] + m[i + 1][i]))
        .collect();
    (diag, off)
}

trait SignumNonzero {
    fn signum_nonzero(self) -> f64;
}

impl SignumNonzero for f64 {
    fn signum_nonzero(self) -> f64 {
        if self < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sturm_counts_diagonal() {
        let d = [3.0, 1.0, 2.0];
        let e = [0.0, 0.0];
        assert_eq!(sturm_count(&d, &e, 0.5), 0);
        assert_eq!(sturm_count(&d, &e, 1.5), 1);
        assert_eq!(sturm_count(&d, &e, 2.5), 2);
        assert_eq!(sturm_count(&d, &e, 10.0), 3);
        let ev = tridiagonal_eigenvalues(&d, &e, 1e-14);
        for (x, want) in ev.iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - want).abs() < 1e-13, "{x} vs {want}");
        }
    }

    #[test]
    fn a_eps_eigenvalues_match_cubic_roots() {
        // Roots of det(A(0.1) - x I) = -(x - 1)(x^2 - 3.1 x + 0.1), computed
        // independently with sympy's nroots.
        let ev = tridiagonal_eigenvalues(&[1.0, 2.1, 1.0], &[1.0, 1.0], 1e-14);
        let expected = [0.03260090945064818, 1.0, 3.067399090549352];
        for (a, b) in ev.iter().zip(expected) {
            assert!((a - b).abs() < 1e-13, "{a} vs {b}");
        }
    }

    #[test]
    fn jacobi_and_householder_agree() {
        let a = DenseSymMatrix::from_fn(7, |i, j| {
            1.0 / (1.0 + i as f64 + j as f64) + if i == j { (i as f64) * 0.3 } else { 0.0 }
        });
        let ev = jacobi_eigenvalues(&a);
        let (d, e) = householder_tridiagonalize(&a);
        let ev2 = tridiagonal_eigenvalues(&d, &e, 1e-15);
        for (x, y) in ev.iter().zip(&ev2) {
            assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
        let trace: f64 = (0..7).map(|i| a.get(i, i)).sum();
        assert!((ev.iter().sum::<f64>() - trace).abs() < 1e-12);
    }

    #[test]
    fn empty_and_single() {
        assert!(tridiagonal_eigenvalues(&[], &[], 1e-12).is_empty());
        assert!((tridiagonal_eigenvalues(&[4.0], &[], 1e-14)[0] - 4.0).abs() < 1e-13);
        let one = DenseSymMatrix::from_rows(vec![vec![-2.0]]).unwrap();
        assert_eq!(jacobi_eigenvalues(&one), vec![-2.0]);
    }
}
