//! Numerical PD/PSD classification.
//!
//! This module is the independent oracle for the algebraic criteria in
//! [`crate::chainseq`] and [`crate::preservers`]: it only looks at
//! eigenvalues (Sturm bisection for tridiagonal input, cyclic Jacobi or
//! Householder + bisection for dense input) and leading principal minors.
//!
//! Verdicts use a threshold `tol * max(1, max-norm)`:
//! * `Pd` when the smallest eigenvalue exceeds it,
//! * `Indefinite` when it is below its negative,
//! * `PsdBoundary` in between.

pub mod eigen;

use serde::{Deserialize, Serialize};

use crate::bandmat::{BandSymMatrix, DenseSymMatrix, SymMatrix};
use crate::error::{Error, Result};
use crate::exact;

use eigen::{gershgorin_bounds, householder_tridiagonalize, jacobi_eigenvalues, sturm_count};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PositivityClass {
    Pd,
    PsdBoundary,
    Indefinite,
}

impl PositivityClass {
    pub fn is_psd(self) -> bool {
        !matches!(self, Self::Indefinite)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Pd => "PD",
            Self::PsdBoundary => "PSD_BOUNDARY",
            Self::Indefinite => "INDEFINITE",
        }
    }
}

impl std::fmt::Display for PositivityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Leading principal minors; exact for orders up to
    /// [`exact::EXACT_MINORS_MAX_ORDER`].
    LeadingMinors { minors: Vec<f64>, exact: bool },
    /// Sturm counts of eigenvalues below `-threshold` and below `threshold`.
    SturmCounts {
        below_negative_threshold: usize,
        below_positive_threshold: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositivityVerdict {
    pub class: PositivityClass,
    pub min_eigenvalue: f64,
    /// Max-norm of the matrix.
    pub scale: f64,
    /// `tol * max(1, scale)`.
    pub threshold: f64,
    pub certificate: Certificate,
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}

/// All eigenvalues of a tridiagonal matrix by Sturm bisection, ascending,
/// each bracketed to width at most `tol`.
pub fn sym_tridiag_eigenvalues(t: &BandSymMatrix, tol: f64) -> Result<Vec<f64>> {
    check_tol(tol)?;
    let (d, e) = t.as_tridiagonal().ok_or(Error::NotTridiagonal)?;
    Ok(eigen::tridiagonal_eigenvalues(d, e, tol))
}

/// Smallest eigenvalue to absolute accuracy `tol * max(1, max-norm)`.
pub fn min_eigenvalue<M: SymMatrix>(a: &M, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    // Bisection is cheap, so brackets are narrowed to floating-point
    // resolution rather than stopping at the tolerance.
    let width = 0.0;
    if a.order() == 0 {
        return Ok(f64::INFINITY);
    }
    if let Some((d, e)) = a.as_tridiagonal() {
        return Ok(eigen::bisect_eigenvalue(d, e, 0, width, gershgorin_bounds(d, e)));
    }
    Ok(dense_min_eigenvalue(&a.to_dense(), width))
}

fn dense_min_eigenvalue(a: &DenseSymMatrix, width: f64) -> f64 {
    if a.order() <= eigen::JACOBI_MAX_ORDER {
        jacobi_eigenvalues(a)[0]
    } else {
        let (d, e) = householder_tridiagonalize(a);
        eigen::bisect_eigenvalue(&d, &e, 0, width, gershgorin_bounds(&d, &e))
    }
}

/// Determinants of the leading `k x k` blocks, `k = 1..n`. Computed in
/// exact rational arithmetic for orders up to
/// [`exact::EXACT_MINORS_MAX_ORDER`], by elimination otherwise.
pub fn leading_principal_minors<M: SymMatrix>(a: &M) -> Vec<f64> {
    if a.order() <= exact::EXACT_MINORS_MAX_ORDER {
        exact::leading_minors(a).iter().map(exact::to_f64).collect()
    } else {
        float_leading_minors(&a.to_dense())
    }
}

/// Elimination without pivoting gives every leading minor as a running
/// product of pivots; a zero pivot falls back to pivoted determinants of
/// the remaining blocks.
fn float_leading_minors(a: &DenseSymMatrix) -> Vec<f64> {
    let n = a.order();
    let mut m = a.rows();
    let mut minors = Vec::with_capacity(n);
    let mut prod = 1.0;
    for k in 0..n {
        let pivot = m[k][k];
        if pivot == 0.0 {
            for kk in (k + 1)..=n {
                minors.push(pivoted_det(&a.principal_submatrix(&(0..kk).collect::<Vec<_>>())));
            }
            return minors;
        }
        prod *= pivot;
        minors.push(prod);
        let (top, below) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in below {
            let f = row[k] / pivot;
            if f == 0.0 {
                continue;
            }
            for (x, p) in row[k..].iter_mut().zip(&pivot_row[k..]) {
                *x -= f * p;
            }
        }
    }
    minors
}

fn pivoted_det(a: &DenseSymMatrix) -> f64 {
    let n = a.order();
    let mut m = a.rows();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&x, &y| m[x][k].abs().total_cmp(&m[y][k].abs()))
            .expect("nonempty");
        if m[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= m[k][k];
        let (top, below) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in below {
            let f = row[k] / pivot_row[k];
            for (x, p) in row[k..].iter_mut().zip(&pivot_row[k..]) {
                *x -= f * p;
            }
        }
    }
    det
}

/// Determinant of a symmetric matrix (the last leading minor).
pub fn determinant<M: SymMatrix>(a: &M) -> f64 {
    if a.order() == 0 {
        return 1.0;
    }
    if a.order() <= exact::EXACT_MINORS_MAX_ORDER {
        exact::to_f64(&exact::determinant_of(a))
    } else {
        pivoted_det(&a.to_dense())
    }
}

pub fn classify_positivity<M: SymMatrix>(a: &M, tol: f64) -> Result<PositivityVerdict> {
    check_tol(tol)?;
    let scale = a.max_norm();
    let threshold = tol * scale.max(1.0);
    let min_eigenvalue = min_eigenvalue(a, tol)?;
    let class = if min_eigenvalue > threshold {
        PositivityClass::Pd
    } else if min_eigenvalue < -threshold {
        PositivityClass::Indefinite
    } else {
        PositivityClass::PsdBoundary
    };
    let certificate = match a.as_tridiagonal() {
        Some((d, e)) => Certificate::SturmCounts {
            below_negative_threshold: sturm_count(d, e, -threshold),
            below_positive_threshold: sturm_count(d, e, threshold),
        },
        None => Certificate::LeadingMinors {
            minors: leading_principal_minors(a),
            exact: a.order() <= exact::EXACT_MINORS_MAX_ORDER,
        },
    };
    Ok(PositivityVerdict {
        class,
        min_eigenvalue,
        scale,
        threshold,
        certificate,
    })
}

/// Matrices that support a diagonal shift `A + delta * I`.
pub trait Shiftable: SymMatrix + Clone {
    fn shifted_by(&self, delta: f64) -> Self;
}

impl Shiftable for BandSymMatrix {
    fn shifted_by(&self, delta: f64) -> Self {
        self.shifted(delta)
    }
}

impl Shiftable for DenseSymMatrix {
    fn shifted_by(&self, delta: f64) -> Self {
        self.shifted(delta)
    }
}

/// `A + eps * I`. Off-diagonal entries, and so the zero pattern, are
/// unchanged.
pub fn shift_to_pd<M: Shiftable>(a: &M, eps: f64) -> Result<M> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Domain(format!("shift must be positive, got {eps}")));
    }
    Ok(a.shifted_by(eps))
}

/// For PD `A`, returns `(A - lambda I, lambda)` with `lambda` the smallest
/// eigenvalue, so the first component sits on the PSD boundary.
pub fn shift_to_boundary<M: Shiftable>(a: &M, tol: f64) -> Result<(M, f64)> {
    let verdict = classify_positivity(a, tol)?;
    if verdict.class != PositivityClass::Pd {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: verdict.min_eigenvalue,
        });
    }
    let lambda = verdict.min_eigenvalue;
    Ok((a.shifted_by(-lambda), lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_TOL;

    fn a_eps(eps: f64) -> BandSymMatrix {
        BandSymMatrix::tridiagonal(vec![1.0, 2.0 + eps, 1.0], vec![1.0, 1.0]).unwrap()
    }

    fn script_p() -> BandSymMatrix {
        BandSymMatrix::pentadiagonal(vec![1.0, 2.0, 2.0, 1.0, 1.0], vec![1.0, 1.0, 1.0]).unwrap()
    }

    #[test]
    fn tridiagonal_eigenvalue_examples() {
        let ev = sym_tridiag_eigenvalues(&a_eps(0.1), 1e-13).unwrap();
        assert!(ev.iter().all(|&x| x > 0.0));
        assert!((ev[0] - 0.03260090945064818).abs() < 1e-12);

        let diag = BandSymMatrix::tridiagonal(vec![3.0, 1.0, 2.0], vec![0.0, 0.0]).unwrap();
        let ev = sym_tridiag_eigenvalues(&diag, 1e-13).unwrap();
        for (a, b) in ev.iter().zip([1.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-12);
        }

        // C of the 3x3 lemma: eigenvalues 1 - sqrt 2, 1, 1 + sqrt 2.
        let c = BandSymMatrix::tridiagonal(vec![1.0; 3], vec![1.0, 1.0]).unwrap();
        let ev = sym_tridiag_eigenvalues(&c, 1e-13).unwrap();
        assert!((ev[0] - (1.0 - 2.0_f64.sqrt())).abs() < 1e-12);

        assert!(matches!(
            sym_tridiag_eigenvalues(&c, 0.0),
            Err(Error::InvalidTolerance(_))
        ));
        assert!(matches!(
            sym_tridiag_eigenvalues(&script_p(), 1e-10),
            Err(Error::NotTridiagonal)
        ));
    }

    #[test]
    fn min_eigenvalue_examples() {
        let p = script_p().to_dense();
        assert!(min_eigenvalue(&p, DEFAULT_TOL).unwrap().abs() < 1e-12);
        assert!((min_eigenvalue(&DenseSymMatrix::identity(4), DEFAULT_TOL).unwrap() - 1.0).abs() < 1e-14);
        let half = script_p().hadamard_power(0.5).unwrap();
        let lam = min_eigenvalue(&half, DEFAULT_TOL).unwrap();
        // numpy eigvalsh on the same matrix: -0.22219137...
        assert!((lam + 0.22219137).abs() < 1e-7);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_positivity(&a_eps(0.1), DEFAULT_TOL).unwrap().class,
            PositivityClass::Pd
        );
        assert_eq!(
            classify_positivity(&script_p(), DEFAULT_TOL).unwrap().class,
            PositivityClass::PsdBoundary
        );
        let powered = a_eps(0.1).hadamard_power(0.5).unwrap();
        assert_eq!(
            classify_positivity(&powered, DEFAULT_TOL).unwrap().class,
            PositivityClass::Indefinite
        );
        let v = classify_positivity(&a_eps(0.1).to_dense(), DEFAULT_TOL).unwrap();
        match v.certificate {
            Certificate::LeadingMinors { minors, exact } => {
                assert!(exact);
                assert_eq!(minors.len(), 3);
                assert!(minors.iter().all(|&m| m > 0.0));
            }
            other => panic!("unexpected certificate {other:?}"),
        }
    }

    #[test]
    fn leading_minor_examples() {
        let m = leading_principal_minors(&a_eps(0.1));
        assert_eq!(m[0], 1.0);
        assert!((m[1] - 1.1).abs() < 1e-15 && (m[2] - 0.1).abs() < 1e-15);
        assert_eq!(leading_principal_minors(&DenseSymMatrix::identity(3)), vec![1.0; 3]);
        assert_eq!(
            leading_principal_minors(&DenseSymMatrix::from_fn(3, |_, _| 1.0)),
            vec![1.0, 0.0, 0.0]
        );
    }

    #[test]
    fn float_minors_match_exact() {
        let a = DenseSymMatrix::from_fn(6, |i, j| {
            if i == j {
                3.0 + i as f64
            } else {
                1.0 / (1.0 + (i + j) as f64)
            }
        });
        let exact = leading_principal_minors(&a);
        let float = float_leading_minors(&a);
        for (x, y) in exact.iter().zip(&float) {
            assert!((x - y).abs() <= 1e-12 * x.abs());
        }
        // zero leading pivot takes the pivoted path
        let z = DenseSymMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(float_leading_minors(&z), vec![0.0, -1.0]);
    }

    #[test]
    fn shift_examples() {
        let shifted = shift_to_pd(&script_p(), 0.5).unwrap();
        assert!(shifted.is_penta_form());
        let lam = min_eigenvalue(&shifted, DEFAULT_TOL).unwrap();
        assert!((lam - 0.5).abs() < 1e-12);

        assert_eq!(
            shift_to_pd(&DenseSymMatrix::zeros(3), 1.0).unwrap(),
            DenseSymMatrix::identity(3)
        );
        assert!(shift_to_pd(&DenseSymMatrix::zeros(3), 0.0).is_err());

        let (b, lam) = shift_to_boundary(&DenseSymMatrix::identity(3), DEFAULT_TOL).unwrap();
        assert_eq!(lam, 1.0);
        assert_eq!(b, DenseSymMatrix::zeros(3));

        let d = DenseSymMatrix::from_rows(vec![vec![2.0, 0.0], vec![0.0, 5.0]]).unwrap();
        let (b, lam) = shift_to_boundary(&d, DEFAULT_TOL).unwrap();
        assert_eq!(lam, 2.0);
        assert_eq!(b.rows(), vec![vec![0.0, 0.0], vec![0.0, 3.0]]);

        let (b, lam) = shift_to_boundary(&a_eps(0.1), DEFAULT_TOL).unwrap();
        assert!((lam - 0.03260090945064818).abs() < 1e-12);
        assert!(min_eigenvalue(&b, DEFAULT_TOL).unwrap().abs() <= DEFAULT_TOL);
        assert_eq!(b.entry(0, 1), 1.0);
        assert_eq!(b.entry(0, 2), 0.0);

        assert!(matches!(
            shift_to_boundary(&script_p(), DEFAULT_TOL),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn determinant_of_script_p_powers() {
        for r in [0.1, 0.5, 0.9, 2.0] {
            let d = determinant(&script_p().hadamard_power(r).unwrap());
            let f = 2.0 - 3.0 * 2f64.powf(r) + 4f64.powf(r);
            assert!((d - f).abs() <= 1e-12 * f.abs(), "r={r}: {d} vs {f}");
        }
        assert_eq!(determinant(&script_p()), 0.0);
    }
}
