//! Exact rational arithmetic used for golden-value computations: leading
//! principal minors of small matrices and the chain-sequence recursion.
//!
//! Every finite `f64` is a dyadic rational, so converting stored entries to
//! [`BigRational`] loses nothing; results are exact for the matrix as stored.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bandmat::SymMatrix;
use crate::error::{Error, Result};

/// Largest order for which leading minors are computed exactly.
pub const EXACT_MINORS_MAX_ORDER: usize = 12;

pub fn from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite value")
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"3"`, `"-1/4"`, `"0.125"` or `"2.5e-3"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: BigInt = format!("{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(all);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -value } else { value })
}

/// Determinant by Gaussian elimination with nonzero pivot search.
pub fn determinant(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det *= &pivot;
        let (top, below) = a.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for row in below {
            if row[col].is_zero() {
                continue;
            }
            let f = &row[col] / &pivot;
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= &f * p;
            }
        }
    }
    det
}

/// Integer matrix `B` and shift `s` with `A = B / 2^s`; every finite `f64`
/// is a dyadic rational, so a common power of two clears all denominators.
fn dyadic_scaled<M: SymMatrix>(a: &M, n: usize) -> (Vec<Vec<BigInt>>, u64) {
    let rats: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| from_f64(a.entry(i, j))).collect())
        .collect();
    let shift = rats.iter().flatten().map(|q| q.denom().bits() - 1).max().unwrap_or(0);
    let ints = rats
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|q| q.numer() << (shift - (q.denom().bits() - 1)))
                .collect()
        })
        .collect();
    (ints, shift)
}

/// Determinant of an integer matrix by fraction-free (Bareiss) elimination
/// with row exchanges on zero pivots.
fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = ((k + 1)..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            negate = !negate;
        }
        bareiss_step(&mut m, k, &prev);
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Eliminates column `k` below the pivot; each update divides exactly by
/// the previous pivot.
fn bareiss_step(m: &mut [Vec<BigInt>], k: usize, prev: &BigInt) {
    let n = m.len();
    let (top, rest) = m.split_at_mut(k + 1);
    let pivot_row = &top[k];
    for row in rest.iter_mut() {
        for j in (k + 1)..n {
            let v = &pivot_row[k] * &row[j] - &row[k] * &pivot_row[j];
            row[j] = v / prev;
        }
        row[k] = BigInt::zero();
    }
}

fn unscale(x: BigInt, shift: u64, k: usize) -> BigRational {
    BigRational::new(x, BigInt::one() << (shift * k as u64))
}

/// Exact determinant of the matrix as stored.
pub fn determinant_of<M: SymMatrix>(a: &M) -> BigRational {
    let n = a.order();
    let (m, shift) = dyadic_scaled(a, n);
    unscale(bareiss_determinant(m), shift, n)
}

/// Exact leading principal minors `det A[1..k, 1..k]`, `k = 1..n`.
///
/// Without row exchanges the `k`-th Bareiss pivot is the `k`-th leading
/// minor of the integer matrix, so one elimination yields all of them. A
/// zero pivot stops the sweep; the remaining minors are computed one by one
/// with pivoting.
pub fn leading_minors<M: SymMatrix>(a: &M) -> Vec<BigRational> {
    let n = a.order();
    let (scaled, shift) = dyadic_scaled(a, n);
    let mut m = scaled.clone();
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            minors.push(BigInt::zero());
            for kk in (k + 2)..=n {
                let sub = scaled[..kk].iter().map(|row| row[..kk].to_vec()).collect();
                minors.push(bareiss_determinant(sub));
            }
            break;
        }
        minors.push(m[k][k].clone());
        if k + 1 < n {
            bareiss_step(&mut m, k, &prev);
            prev = m[k][k].clone();
        }
    }
    minors
        .into_iter()
        .enumerate()
        .map(|(k, x)| unscale(x, shift, k + 1))
        .collect()
}

/// Sign of an exact value: -1, 0 or 1.
pub fn signum(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}
