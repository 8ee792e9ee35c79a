use serde::{Deserialize, Serialize};

use crate::bandmat::{split_pentadiagonal, BandSymMatrix, SymMatrix};
use crate::error::{Error, Result};
use crate::positivity::{classify_positivity, PositivityClass};
use crate::DEFAULT_TOL;

/// Off-diagonal entries with absolute value at most this count as zero.
pub const DEFAULT_ZERO_TOL: f64 = 1e-12;

/// Exponents sampled by [`id_numeric_probe`] by default.
pub const DEFAULT_R_GRID: &[f64] = &[0.05, 0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum IdReason {
    /// PSD with no two consecutive nonzero couplings.
    Characterized,
    NotPsd {
        min_eigenvalue: f64,
    },
    /// Couplings `b_i` and `b_{i+1}` (one-based `index = i`) are both nonzero.
    ConsecutiveCouplings {
        index: usize,
    },
    /// Pentadiagonal only: one of the split halves failed.
    Block {
        parity: String,
        inner: Box<IdReason>,
    },
}

impl std::fmt::Display for IdReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Characterized => f.write_str("PSD with no two consecutive nonzero couplings"),
            Self::NotPsd { min_eigenvalue } => {
                write!(
                    f,
                    "not PSD (min eigenvalue {})",
                    crate::format::fmt_sig(*min_eigenvalue)
                )
            }
            Self::ConsecutiveCouplings { index } => {
                write!(f, "b{}b{} ≠ 0", subscript(*index), subscript(index + 1))
            }
            Self::Block { parity, inner } => write!(f, "{parity}-index block: {inner}"),
        }
    }
}

fn subscript(k: usize) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    k.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).unwrap_or(0) as usize])
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdVerdict {
    pub is_id: bool,
    #[serde(flatten)]
    pub reason: IdReason,
}

fn require_nonnegative<M: SymMatrix>(a: &M) -> Result<()> {
    match a.has_negative_entry() {
        Some((row, col, value)) => Err(Error::NegativeEntry { row, col, value }),
        None => Ok(()),
    }
}

/// A nonnegative tridiagonal matrix is ID iff it is PSD and
/// `b_i b_{i+1} = 0` for every `i`.
pub fn id_verdict_tridiagonal(t: &BandSymMatrix, zero_tol: f64) -> Result<IdVerdict> {
    let (_, off) = t.as_tridiagonal().ok_or(Error::NotTridiagonal)?;
    require_nonnegative(t)?;
    let verdict = classify_positivity(t, DEFAULT_TOL)?;
    if verdict.class == PositivityClass::Indefinite {
        return Ok(IdVerdict {
            is_id: false,
            reason: IdReason::NotPsd {
                min_eigenvalue: verdict.min_eigenvalue,
            },
        });
    }
    let nonzero = |b: f64| b.abs() > zero_tol;
    if let Some(i) = off.windows(2).position(|w| nonzero(w[0]) && nonzero(w[1])) {
        return Ok(IdVerdict {
            is_id: false,
            reason: IdReason::ConsecutiveCouplings { index: i + 1 },
        });
    }
    Ok(IdVerdict {
        is_id: true,
        reason: IdReason::Characterized,
    })
}

pub fn is_id_tridiagonal(t: &BandSymMatrix, zero_tol: f64) -> Result<bool> {
    Ok(id_verdict_tridiagonal(t, zero_tol)?.is_id)
}

/// A pentadiagonal `(i, i+2)` matrix is ID iff both halves of its
/// odd/even split are ID; the split is a permutation congruence and
/// commutes with Hadamard powers.
pub fn id_verdict_pentadiagonal(p: &BandSymMatrix, zero_tol: f64) -> Result<IdVerdict> {
    let (odd, even) = split_pentadiagonal(p)?;
    require_nonnegative(p)?;
    for (parity, block) in [("odd", &odd), ("even", &even)] {
        let v = id_verdict_tridiagonal(block, zero_tol)?;
        if !v.is_id {
            return Ok(IdVerdict {
                is_id: false,
                reason: IdReason::Block {
                    parity: parity.into(),
                    inner: Box::new(v.reason),
                },
            });
        }
    }
    Ok(IdVerdict {
        is_id: true,
        reason: IdReason::Characterized,
    })
}

pub fn is_id_pentadiagonal(p: &BandSymMatrix, zero_tol: f64) -> Result<bool> {
    Ok(id_verdict_pentadiagonal(p, zero_tol)?.is_id)
}

/// Block-diagonal decomposition of an ID tridiagonal matrix; every block
/// has order 1 or 2 and is PSD.
pub fn id_blocks(t: &BandSymMatrix, zero_tol: f64) -> Result<Vec<BandSymMatrix>> {
    let v = id_verdict_tridiagonal(t, zero_tol)?;
    if !v.is_id {
        return Err(Error::NotInfinitelyDivisible(v.reason.to_string()));
    }
    let (d, e) = t.as_tridiagonal().ok_or(Error::NotTridiagonal)?;
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < d.len() {
        if i + 1 < d.len() && e[i].abs() > zero_tol {
            blocks.push(BandSymMatrix::tridiagonal(vec![d[i], d[i + 1]], vec![e[i]])?);
            i += 2;
        } else {
            blocks.push(BandSymMatrix::tridiagonal(vec![d[i]], vec![])?);
            i += 1;
        }
    }
    Ok(blocks)
}

/// First exponent in `grid` at which `A^∘r` is indefinite, with the
/// offending smallest eigenvalue.
pub fn id_numeric_probe_first_failure<M: SymMatrix>(a: &M, grid: &[f64], tol: f64) -> Result<Option<(f64, f64)>> {
    if let Some(&r) = grid.iter().find(|&&r| !(r > 0.0 && r.is_finite())) {
        return Err(Error::Domain(format!("grid exponent {r} must be positive")));
    }
    require_nonnegative(a)?;
    let dense = a.to_dense();
    for &r in grid {
        let v = classify_positivity(&dense.hadamard_power(r)?, tol)?;
        if v.class == PositivityClass::Indefinite {
            return Ok(Some((r, v.min_eigenvalue)));
        }
    }
    Ok(None)
}

/// Necessary condition for infinite divisibility: `A^∘r` is not indefinite
/// for any `r` in `grid`. Passing is evidence, not proof.
pub fn id_numeric_probe<M: SymMatrix>(a: &M, grid: &[f64], tol: f64) -> Result<bool> {
    Ok(id_numeric_probe_first_failure(a, grid, tol)?.is_none())
}
