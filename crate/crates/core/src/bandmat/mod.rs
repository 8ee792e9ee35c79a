//! Symmetric band matrices stored by diagonals, dense symmetric matrices,
//! entrywise (Hadamard) powers and permutation congruence.
//!
//! Two band shapes are supported: tridiagonal (bandwidth 1) and bandwidth 2.
//! The pentadiagonal family of interest has a structurally zero offset-1
//! diagonal, so its only couplings are between indices `i` and `i + 2`;
//! such a matrix splits into two tridiagonal matrices on the odd and even
//! indices (see [`split_pentadiagonal`]).

mod dense;
mod perm;

pub use dense::DenseSymMatrix;
pub use perm::{conjugate_by_permutation, even_odd_permutation, PermutationSpec};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::SimpleGraph;

/// Read access shared by band and dense symmetric matrices. Indices are
/// zero-based.
pub trait SymMatrix {
    fn order(&self) -> usize;

    fn entry(&self, i: usize, j: usize) -> f64;

    fn to_dense(&self) -> DenseSymMatrix {
        DenseSymMatrix::from_fn(self.order(), |i, j| self.entry(i, j))
    }

    /// Largest absolute entry.
    fn max_norm(&self) -> f64 {
        let n = self.order();
        let mut m = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                m = m.max(self.entry(i, j).abs());
            }
        }
        m
    }

    /// Main and off diagonal when the matrix is stored as a tridiagonal band.
    fn as_tridiagonal(&self) -> Option<(&[f64], &[f64])> {
        None
    }

    fn has_negative_entry(&self) -> Option<(usize, usize, f64)> {
        let n = self.order();
        for i in 0..n {
            for j in i..n {
                let v = self.entry(i, j);
                if v < 0.0 {
                    return Some((i, j, v));
                }
            }
        }
        None
    }
}

/// Symmetric band matrix of bandwidth 1 or 2, storing the main diagonal and
/// the upper diagonals only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandSymMatrix {
    main: Vec<f64>,
    /// `off[d - 1]` holds the `n - d` entries at offset `d`.
    off: Vec<Vec<f64>>,
    /// Offset-1 diagonal is a structural zero (pentadiagonal `(i, i+2)` form).
    penta_form: bool,
}

fn check_finite(values: &[f64], row_of: impl Fn(usize) -> (usize, usize)) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(k) => {
            let (row, col) = row_of(k);
            Err(Error::NonFinite { row, col })
        }
        None => Ok(()),
    }
}

impl BandSymMatrix {
    /// Tridiagonal matrix with main diagonal `diag` and off diagonal `offdiag`.
    pub fn tridiagonal(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(Error::OrderTooSmall { min: 1, actual: 0 });
        }
        if offdiag.len() != n - 1 {
            return Err(Error::LengthMismatch {
                what: "tridiagonal offdiag",
                expected: n - 1,
                actual: offdiag.len(),
            });
        }
        check_finite(&diag, |k| (k, k))?;
        check_finite(&offdiag, |k| (k, k + 1))?;
        Ok(Self {
            main: diag,
            off: vec![offdiag],
            penta_form: false,
        })
    }

    /// Pentadiagonal matrix whose only off-diagonal couplings are
    /// `(i, i+2) = second[i]`; the offset-1 diagonal is zero.
    pub fn pentadiagonal(diag: Vec<f64>, second: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if n < 3 {
            return Err(Error::OrderTooSmall { min: 3, actual: n });
        }
        if second.len() != n - 2 {
            return Err(Error::LengthMismatch {
                what: "pentadiagonal second",
                expected: n - 2,
                actual: second.len(),
            });
        }
        check_finite(&diag, |k| (k, k))?;
        check_finite(&second, |k| (k, k + 2))?;
        Ok(Self {
            main: diag,
            off: vec![vec![0.0; n - 1], second],
            penta_form: true,
        })
    }

    /// General band matrix from its upper diagonals; `offs.len()` is the
    /// bandwidth and must be 1 or 2.
    pub fn from_diagonals(main: Vec<f64>, offs: Vec<Vec<f64>>) -> Result<Self> {
        let n = main.len();
        if n == 0 {
            return Err(Error::OrderTooSmall { min: 1, actual: 0 });
        }
        if !(1..=2).contains(&offs.len()) {
            return Err(Error::UnsupportedBandwidth(offs.len()));
        }
        check_finite(&main, |k| (k, k))?;
        for (idx, d) in offs.iter().enumerate() {
            let offset = idx + 1;
            let expected = n.saturating_sub(offset);
            if d.len() != expected {
                return Err(Error::LengthMismatch {
                    what: "band diagonal",
                    expected,
                    actual: d.len(),
                });
            }
            check_finite(d, |k| (k, k + offset))?;
        }
        Ok(Self {
            main,
            off: offs,
            penta_form: false,
        })
    }

    pub fn bandwidth(&self) -> usize {
        self.off.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.main
    }

    /// Upper diagonal at `offset` (1 or 2). Empty when `offset` exceeds the
    /// bandwidth.
    pub fn offdiag(&self, offset: usize) -> &[f64] {
        match offset {
            0 => &self.main,
            d if d <= self.off.len() => &self.off[d - 1],
            _ => &[],
        }
    }

    pub fn is_tridiagonal(&self) -> bool {
        self.off.len() == 1
    }

    /// Bandwidth 2 with an identically zero offset-1 diagonal.
    pub fn is_penta_form(&self) -> bool {
        self.off.len() == 2 && self.off[0].iter().all(|&v| v == 0.0)
    }

    /// Entries at offset 2 of a pentadiagonal matrix.
    pub fn second(&self) -> &[f64] {
        self.offdiag(2)
    }

    /// Entrywise power `[a_ij^r]`. Entries outside the band, and the offset-1
    /// diagonal of a matrix built with [`BandSymMatrix::pentadiagonal`], are
    /// structural zeros and stay zero. Stored entries follow [`pow_entry`],
    /// including the `0^0 := 1` convention.
    pub fn hadamard_power(&self, r: f64) -> Result<Self> {
        check_exponent(r)?;
        let main = self
            .main
            .iter()
            .enumerate()
            .map(|(i, &v)| pow_entry(v, r, i, i))
            .collect::<Result<Vec<_>>>()?;
        let mut off = Vec::with_capacity(self.off.len());
        for (idx, d) in self.off.iter().enumerate() {
            let offset = idx + 1;
            if offset == 1 && self.penta_form {
                off.push(d.clone());
                continue;
            }
            off.push(
                d.iter()
                    .enumerate()
                    .map(|(i, &v)| pow_entry(v, r, i, i + offset))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Ok(Self {
            main,
            off,
            penta_form: self.penta_form,
        })
    }

    /// `A + delta * I`.
    pub fn shifted(&self, delta: f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.main {
            *v += delta;
        }
        out
    }

    /// Same matrix with its upper diagonals listed as `(offset, entries)`.
    pub fn diagonals(&self) -> impl Iterator<Item = (usize, &[f64])> {
        self.off.iter().enumerate().map(|(i, d)| (i + 1, d.as_slice()))
    }
}

impl SymMatrix for BandSymMatrix {
    fn order(&self) -> usize {
        self.main.len()
    }

    fn entry(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let d = hi - lo;
        if d == 0 {
            self.main[lo]
        } else if d <= self.off.len() {
            self.off[d - 1][lo]
        } else {
            0.0
        }
    }

    fn max_norm(&self) -> f64 {
        self.main
            .iter()
            .chain(self.off.iter().flatten())
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    fn as_tridiagonal(&self) -> Option<(&[f64], &[f64])> {
        if self.is_tridiagonal() {
            Some((&self.main, &self.off[0]))
        } else {
            None
        }
    }
}

pub(crate) fn check_exponent(r: f64) -> Result<()> {
    if !r.is_finite() {
        return Err(Error::NonFiniteExponent(r));
    }
    if r < 0.0 {
        return Err(Error::NegativeExponent(r));
    }
    Ok(())
}

/// Integer-valued exponent that fits `powi`.
fn integer_exponent(r: f64) -> Option<i32> {
    if r.fract() == 0.0 && r.abs() <= i32::MAX as f64 {
        Some(r as i32)
    } else {
        None
    }
}

/// One entry of a Hadamard power. `r = 0` maps every entry, zero included,
/// to 1. Integer `r` accepts entries of any sign; otherwise negative
/// entries are rejected.
pub fn pow_entry(x: f64, r: f64, row: usize, col: usize) -> Result<f64> {
    check_exponent(r)?;
    if r == 0.0 {
        return Ok(1.0);
    }
    if let Some(k) = integer_exponent(r) {
        return Ok(x.powi(k));
    }
    if x < 0.0 {
        return Err(Error::NegativeBase {
            row,
            col,
            value: x,
            exponent: r,
        });
    }
    Ok(x.powf(r))
}

/// Free-function form of [`BandSymMatrix::hadamard_power`] and
/// [`DenseSymMatrix::hadamard_power`].
pub fn hadamard_power<M: HadamardPower>(a: &M, r: f64) -> Result<M> {
    a.hadamard_power_of(r)
}

pub trait HadamardPower: Sized {
    fn hadamard_power_of(&self, r: f64) -> Result<Self>;
}

impl HadamardPower for BandSymMatrix {
    fn hadamard_power_of(&self, r: f64) -> Result<Self> {
        self.hadamard_power(r)
    }
}

impl HadamardPower for DenseSymMatrix {
    fn hadamard_power_of(&self, r: f64) -> Result<Self> {
        self.hadamard_power(r)
    }
}

/// Splits a pentadiagonal matrix into its principal submatrices on the odd
/// indices `{1, 3, 5, ...}` and the even indices `{2, 4, ...}`. Both are
/// tridiagonal, with off diagonals drawn from the offset-2 entries.
pub fn split_pentadiagonal(p: &BandSymMatrix) -> Result<(BandSymMatrix, BandSymMatrix)> {
    if p.bandwidth() != 2 {
        return Err(Error::UnsupportedBandwidth(p.bandwidth()));
    }
    if let Some(k) = p.off[0].iter().position(|&v| v != 0.0) {
        return Err(Error::NotPentadiagonalForm { index: k });
    }
    let n = p.order();
    if n < 2 {
        return Err(Error::OrderTooSmall { min: 2, actual: n });
    }
    let second = &p.off[1];
    let pick = |start: usize| -> Result<BandSymMatrix> {
        let diag: Vec<f64> = p.main.iter().skip(start).step_by(2).copied().collect();
        let off: Vec<f64> = second.iter().skip(start).step_by(2).copied().collect();
        BandSymMatrix::tridiagonal(diag, off)
    };
    Ok((pick(0)?, pick(1)?))
}

/// Inverse of [`split_pentadiagonal`]: interleaves an odd-index block of
/// order `k` or `k + 1` with an even-index block of order `k`.
pub fn merge_pentadiagonal(odd: &BandSymMatrix, even: &BandSymMatrix) -> Result<BandSymMatrix> {
    let (od, oo) = odd.as_tridiagonal().ok_or(Error::NotTridiagonal)?;
    let (ed, eo) = even.as_tridiagonal().ok_or(Error::NotTridiagonal)?;
    if od.len() != ed.len() && od.len() != ed.len() + 1 {
        return Err(Error::SizeMismatch {
            left: od.len(),
            right: ed.len(),
        });
    }
    let n = od.len() + ed.len();
    let mut diag = Vec::with_capacity(n);
    for i in 0..n {
        diag.push(if i % 2 == 0 { od[i / 2] } else { ed[i / 2] });
    }
    let mut second = Vec::with_capacity(n.saturating_sub(2));
    for i in 0..n.saturating_sub(2) {
        second.push(if i % 2 == 0 { oo[i / 2] } else { eo[i / 2] });
    }
    if n < 3 {
        return BandSymMatrix::from_diagonals(diag, vec![vec![0.0; n - 1], second]);
    }
    BandSymMatrix::pentadiagonal(diag, second)
}

/// Block-diagonal matrix with the given diagonal blocks in order.
pub fn assemble_block_diagonal<M: SymMatrix>(blocks: &[M]) -> DenseSymMatrix {
    let n: usize = blocks.iter().map(SymMatrix::order).sum();
    let mut out = DenseSymMatrix::zeros(n);
    let mut base = 0;
    for b in blocks {
        let k = b.order();
        for i in 0..k {
            for j in 0..k {
                out.set_sym(base + i, base + j, b.entry(i, j));
            }
        }
        base += k;
    }
    out
}

/// True iff every nonzero off-diagonal entry of `a` sits on an edge of `g`.
pub fn pattern_check<M: SymMatrix>(a: &M, g: &SimpleGraph) -> Result<bool> {
    if a.order() != g.vertex_count() {
        return Err(Error::SizeMismatch {
            left: a.order(),
            right: g.vertex_count(),
        });
    }
    let n = a.order();
    for i in 0..n {
        for j in (i + 1)..n {
            if a.entry(i, j) != 0.0 && !g.has_edge(i + 1, j + 1) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `(a + b)^r - a^r - b^r`, which is nonnegative on `a, b >= 0` for `r >= 1`.
pub fn superadditive_gap(a: f64, b: f64, r: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && r.is_finite()) {
        return Err(Error::Domain("arguments must be finite".into()));
    }
    if a < 0.0 || b < 0.0 {
        return Err(Error::Domain(format!("a = {a}, b = {b} must be nonnegative")));
    }
    if a == 0.0 && b == 0.0 {
        return Err(Error::Domain("(a, b) must not both be zero".into()));
    }
    if r < 1.0 {
        return Err(Error::Domain(format!("r = {r} must be at least 1")));
    }
    Ok((a + b).powf(r) - a.powf(r) - b.powf(r))
}
