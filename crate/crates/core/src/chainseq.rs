//! Finite chain sequences and the chain-sequence test for positive
//! definiteness of tridiagonal matrices.
//!
//! A finite sequence `a_1..a_N` is a chain sequence when there are
//! parameters `0 <= g_0 < 1`, `0 < g_k < 1` with `a_k = (1 - g_{k-1}) g_k`.
//! Taking `g_0 = 0` gives the minimal parameters
//! `m_k = a_k / (1 - m_{k-1})`; a parameter sequence exists iff every
//! `a_k > 0` and the minimal recursion stays below 1.
//!
//! A tridiagonal matrix with positive diagonal `a_i` and positive off
//! diagonal `b_j` is PD iff `b_j^2 / (a_j a_{j+1})` is a chain sequence.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bandmat::{BandSymMatrix, SymMatrix};
use crate::error::{Error, Result};
use crate::exact;

/// Floating-mode band around 1 inside which a minimal parameter is reported
/// as boundary-indeterminate.
pub const BOUNDARY_BAND: f64 = 1e-12;

/// Longest sequence evaluated automatically in exact mode.
pub const EXACT_MAX_LEN: usize = 32;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub is_chain: bool,
    /// `m_1..m_k`, up to and including the first failing index.
    pub minimal_params: Vec<f64>,
    /// Exact values of `minimal_params` as `"p/q"` strings in exact mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_params: Option<Vec<String>>,
    /// One-based index of the first `k` with `a_k <= 0` or `m_k >= 1`.
    pub failure_index: Option<usize>,
    /// Floating mode only: the failing parameter was within
    /// [`BOUNDARY_BAND`] of 1, so the verdict is not decided numerically.
    pub boundary_indeterminate: bool,
    pub exact_mode: bool,
}

/// Minimal-parameter test in floating point.
pub fn minimal_parameters(a: &[f64]) -> ChainReport {
    let mut params = Vec::with_capacity(a.len());
    let mut prev = 0.0;
    for (k, &ak) in a.iter().enumerate() {
        let m = ak / (1.0 - prev);
        params.push(m);
        let near_one = (m - 1.0).abs() <= BOUNDARY_BAND;
        if ak <= 0.0 || m >= 1.0 || near_one || !m.is_finite() {
            return ChainReport {
                is_chain: false,
                minimal_params: params,
                exact_params: None,
                failure_index: Some(k + 1),
                boundary_indeterminate: ak > 0.0 && near_one,
                exact_mode: false,
            };
        }
        prev = m;
    }
    ChainReport {
        is_chain: !a.is_empty(),
        minimal_params: params,
        exact_params: None,
        failure_index: None,
        boundary_indeterminate: false,
        exact_mode: false,
    }
}

/// Minimal-parameter test in exact rational arithmetic. `m_k = 1` is
/// decided as a failure.
pub fn minimal_parameters_exact(a: &[BigRational]) -> ChainReport {
    let one = BigRational::one();
    let mut params: Vec<BigRational> = Vec::with_capacity(a.len());
    let mut prev = BigRational::zero();
    let mut failure_index = None;
    for (k, ak) in a.iter().enumerate() {
        let m = ak / (&one - &prev);
        let failed = !ak.is_positive() || m >= one;
        params.push(m.clone());
        if failed {
            failure_index = Some(k + 1);
            break;
        }
        prev = m;
    }
    ChainReport {
        is_chain: failure_index.is_none() && !a.is_empty(),
        minimal_params: params.iter().map(exact::to_f64).collect(),
        exact_params: Some(params.iter().map(ToString::to_string).collect()),
        failure_index,
        boundary_indeterminate: false,
        exact_mode: true,
    }
}

pub fn is_chain_sequence(a: &[f64]) -> bool {
    minimal_parameters(a).is_chain
}

pub fn is_chain_sequence_exact(a: &[BigRational]) -> bool {
    minimal_parameters_exact(a).is_chain
}

/// Hypothesis of the comparison theorem: `0 < c_k <= a_k` for every `k`.
/// When it holds and `a` is a chain sequence, so is `c`.
pub fn comparison_dominates(c: &[f64], a: &[f64]) -> Result<bool> {
    if c.len() != a.len() {
        return Err(Error::SizeMismatch {
            left: c.len(),
            right: a.len(),
        });
    }
    Ok(c.iter().zip(a).all(|(&ck, &ak)| ck > 0.0 && ck <= ak))
}

fn tridiagonal_parts(t: &BandSymMatrix) -> Result<(&[f64], &[f64])> {
    t.as_tridiagonal().ok_or(Error::NotTridiagonal)
}

/// `b_j^2 / (a_j a_{j+1})` for `j = 1..n-1`; requires a positive diagonal.
pub fn tridiag_ratio_sequence(t: &BandSymMatrix) -> Result<Vec<f64>> {
    let (d, e) = tridiagonal_parts(t)?;
    if let Some(i) = d.iter().position(|&v| v <= 0.0) {
        return Err(Error::Domain(format!(
            "diagonal entry {} at position {} is not positive",
            d[i],
            i + 1
        )));
    }
    Ok(e.iter().enumerate().map(|(j, b)| b * b / (d[j] * d[j + 1])).collect())
}

fn ratio_sequence_exact(d: &[f64], e: &[f64]) -> Vec<BigRational> {
    e.iter()
        .enumerate()
        .map(|(j, &b)| {
            let b = exact::from_f64(b);
            &b * &b / (exact::from_f64(d[j]) * exact::from_f64(d[j + 1]))
        })
        .collect()
}

/// Maximal irreducible blocks, cut at every zero off-diagonal entry.
pub fn split_at_zero_offdiag(t: &BandSymMatrix) -> Result<Vec<BandSymMatrix>> {
    let (d, e) = tridiagonal_parts(t)?;
    let mut blocks = Vec::new();
    let mut start = 0;
    for end in 1..=d.len() {
        if end == d.len() || e[end - 1] == 0.0 {
            blocks.push(BandSymMatrix::tridiagonal(
                d[start..end].to_vec(),
                e[start..end - 1].to_vec(),
            )?);
            start = end;
        }
    }
    Ok(blocks)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockStatus {
    /// Order-1 block with positive entry.
    PositiveScalar,
    /// Order-1 block with entry `<= 0`.
    NonpositiveScalar,
    /// Block of order >= 2 whose ratio sequence is a chain sequence.
    Chain,
    /// Ratio sequence is not a chain sequence.
    NotChain,
    /// Some diagonal entry `<= 0` in a coupled block.
    NonpositiveDiagonal,
}

impl BlockStatus {
    pub fn is_pd(self) -> bool {
        matches!(self, Self::PositiveScalar | Self::Chain)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockReport {
    /// One-based index of the block's first row in the full matrix.
    pub start: usize,
    pub order: usize,
    pub status: BlockStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratios: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WallWetzelReport {
    pub is_pd: bool,
    /// Some floating-mode block hit the boundary band; `is_pd` is false.
    pub boundary_indeterminate: bool,
    pub exact_mode: bool,
    pub blocks: Vec<BlockReport>,
}

/// Per-block chain-sequence analysis of a tridiagonal matrix.
///
/// Blocks of order 1 are PD iff their entry is positive. Coupled blocks
/// with a nonpositive diagonal entry are not PD (a zero diagonal entry
/// next to a nonzero coupling gives a negative 2x2 minor). Otherwise the
/// ratio sequence decides. Off-diagonal signs are irrelevant since only
/// `b_j^2` enters.
pub fn wall_wetzel_report(t: &BandSymMatrix, exact_mode: bool) -> Result<WallWetzelReport> {
    let blocks = split_at_zero_offdiag(t)?;
    let mut reports = Vec::with_capacity(blocks.len());
    let mut start = 1;
    for block in &blocks {
        let (d, e) = tridiagonal_parts(block)?;
        let order = d.len();
        let report = if order == 1 {
            BlockReport {
                start,
                order,
                status: if d[0] > 0.0 {
                    BlockStatus::PositiveScalar
                } else {
                    BlockStatus::NonpositiveScalar
                },
                ratios: None,
                chain: None,
            }
        } else if d.iter().any(|&v| v <= 0.0) {
            BlockReport {
                start,
                order,
                status: BlockStatus::NonpositiveDiagonal,
                ratios: None,
                chain: None,
            }
        } else {
            let ratios = tridiag_ratio_sequence(block)?;
            let chain = if exact_mode {
                minimal_parameters_exact(&ratio_sequence_exact(d, e))
            } else {
                minimal_parameters(&ratios)
            };
            BlockReport {
                start,
                order,
                status: if chain.is_chain {
                    BlockStatus::Chain
                } else {
                    BlockStatus::NotChain
                },
                ratios: Some(ratios),
                chain: Some(chain),
            }
        };
        reports.push(report);
        start += order;
    }
    Ok(WallWetzelReport {
        is_pd: reports.iter().all(|b| b.status.is_pd()),
        boundary_indeterminate: reports
            .iter()
            .any(|b| b.chain.as_ref().is_some_and(|c| c.boundary_indeterminate)),
        exact_mode,
        blocks: reports,
    })
}

/// PD test for a tridiagonal matrix through chain sequences. Uses exact
/// arithmetic for orders up to [`EXACT_MAX_LEN`] + 1.
pub fn wall_wetzel_pd(t: &BandSymMatrix) -> Result<bool> {
    let exact = t.order() <= EXACT_MAX_LEN + 1;
    Ok(wall_wetzel_report(t, exact)?.is_pd)
}
