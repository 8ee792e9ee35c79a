//! Hadamard powers preserving positivity for the tridiagonal and
//! pentadiagonal families, explicit counterexamples below exponent 1,
//! infinite divisibility, and polynomial images of ID matrices.

mod id;
mod probe;

pub use id::{
    id_blocks, id_numeric_probe, id_numeric_probe_first_failure, id_verdict_pentadiagonal, id_verdict_tridiagonal,
    is_id_pentadiagonal, is_id_tridiagonal, IdReason, IdVerdict, DEFAULT_R_GRID, DEFAULT_ZERO_TOL,
};
pub use probe::{
    probe_preserves, random_pd_pattern, random_pd_pentadiagonal, random_pd_tridiagonal, sample_rng, Family, Probe,
    ProbeReport,
};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bandmat::{pow_entry, BandSymMatrix, DenseSymMatrix, SymMatrix};
use crate::error::{Error, Result};
use crate::format::fmt_sig;

/// Exponent set `[t, ∞)`, or `ℕ ∪ [t, ∞)` when `includes_naturals` is set.
/// `ℕ` is the positive integers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSet {
    pub tail_threshold: f64,
    pub includes_naturals: bool,
}

impl PowerSet {
    pub fn tail(t: f64) -> Self {
        Self {
            tail_threshold: t,
            includes_naturals: false,
        }
    }

    pub fn naturals_and_tail(t: f64) -> Self {
        Self {
            tail_threshold: t,
            includes_naturals: true,
        }
    }

    pub fn contains(&self, r: f64) -> bool {
        if r.is_nan() || r < 0.0 {
            return false;
        }
        r >= self.tail_threshold || (self.includes_naturals && r >= 1.0 && r.fract() == 0.0)
    }

    /// Whether the integers below the tail are a visible part of the set.
    pub fn naturals_visible(&self) -> bool {
        self.includes_naturals && self.tail_threshold > 1.0
    }
}

impl fmt::Display for PowerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.naturals_visible() {
            write!(f, "ℕ ∪ [{}, ∞)", fmt_sig(self.tail_threshold))
        } else {
            write!(f, "[{}, ∞)", fmt_sig(self.tail_threshold))
        }
    }
}

/// Exponents `r` with `T^∘r` PD (PSD) for every PD (PSD) nonnegative
/// tridiagonal `T` of order `n >= 3`.
pub fn tridiag_preserver_set(n: usize) -> Result<PowerSet> {
    if n < 3 {
        return Err(Error::OrderTooSmall { min: 3, actual: n });
    }
    Ok(PowerSet::tail(1.0))
}

/// Same for the pentadiagonal `(i, i+2)` family: every `r >= 0` for
/// `n = 3, 4` (both halves have order at most 2), `r >= 1` from `n = 5`.
pub fn penta_preserver_set(n: usize) -> Result<PowerSet> {
    match n {
        0..=2 => Err(Error::OrderTooSmall { min: 3, actual: n }),
        3 | 4 => Ok(PowerSet::tail(0.0)),
        _ => Ok(PowerSet::tail(1.0)),
    }
}

fn check_open_unit(r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(Error::ExponentOutOfRange(r))
    }
}

/// `ε` for the tridiagonal counterexample at exponent `r`: the midpoint of
/// `(0, 2^{1/r} - 2)`.
pub fn counterexample_epsilon(r: f64) -> Result<f64> {
    check_open_unit(r)?;
    let eps = (2f64.powf(1.0 / r) - 2.0) / 2.0;
    if !eps.is_finite() {
        return Err(Error::Domain(format!("epsilon overflows for r = {r}")));
    }
    Ok(eps)
}

/// `A(ε) = tridiag([1, 2 + ε, 1], [1, 1])`, PD for `ε > 0`, with
/// `det(A(ε)^∘r) = (2 + ε)^r - 2 < 0` at the chosen `ε`.
pub fn counterexample_tridiagonal(r: f64) -> Result<BandSymMatrix> {
    let eps = counterexample_epsilon(r)?;
    BandSymMatrix::tridiagonal(vec![1.0, 2.0 + eps, 1.0], vec![1.0, 1.0])
}

/// The fixed PSD pentadiagonal matrix with `det(P^∘r) = 2 - 3·2^r + 4^r`,
/// negative on `0 < r < 1`.
pub fn counterexample_pentadiagonal(r: f64) -> Result<BandSymMatrix> {
    check_open_unit(r)?;
    Ok(boundary_pentadiagonal())
}

/// `pentadiagonal([1, 2, 2, 1, 1], [1, 1, 1])`.
pub fn boundary_pentadiagonal() -> BandSymMatrix {
    BandSymMatrix::pentadiagonal(vec![1.0, 2.0, 2.0, 1.0, 1.0], vec![1.0, 1.0, 1.0]).expect("fixed matrix")
}

/// Closed-form `det(A(ε)^∘r)`.
pub fn tridiagonal_counterexample_det(eps: f64, r: f64) -> f64 {
    (2.0 + eps).powf(r) - 2.0
}

/// Closed-form `det(P^∘r)` for [`boundary_pentadiagonal`].
pub fn pentadiagonal_counterexample_det(r: f64) -> f64 {
    2.0 - 3.0 * 2f64.powf(r) + 4f64.powf(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolyMode {
    /// `sum c_k T^k` with matrix powers.
    Ordinary,
    /// `sum c_k T^∘k` with entrywise powers.
    Hadamard,
}

/// `f(T) = sum_k c_k T^k` or `f[T] = sum_k c_k T^∘k`, with
/// `T^0 = T^∘0 = I` in both modes.
pub fn polynomial_apply<M: SymMatrix>(t: &M, coeffs: &[f64], mode: PolyMode) -> Result<DenseSymMatrix> {
    if let Some(c) = coeffs.iter().find(|c| !(**c >= 0.0 && c.is_finite())) {
        return Err(Error::Domain(format!("coefficient {c} must be nonnegative")));
    }
    let n = t.order();
    let base = t.to_dense();
    let mut acc = DenseSymMatrix::zeros(n);
    let mut power = DenseSymMatrix::identity(n);
    for (k, &c) in coeffs.iter().enumerate() {
        if k > 0 {
            power = match mode {
                PolyMode::Ordinary => power.sym_product(&base)?,
                PolyMode::Hadamard => {
                    let mut p = DenseSymMatrix::zeros(n);
                    for i in 0..n {
                        for j in i..n {
                            p.set_sym(i, j, pow_entry(base.get(i, j), k as f64, i, j)?);
                        }
                    }
                    p
                }
            };
        }
        if c != 0.0 {
            acc = acc.add(&power.scaled(c))?;
        }
    }
    Ok(acc)
}
