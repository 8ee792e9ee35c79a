use serde::{Deserialize, Serialize};

use super::{check_exponent, pow_entry, SymMatrix};
use crate::error::{Error, Result};

/// Dense symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseSymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseSymMatrix {
    /// Validates squareness, finiteness and exact symmetry.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    row: i,
                    len: row.len(),
                    expected: n,
                });
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { row: i, col: j });
            }
            data.extend_from_slice(row);
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if data[i * n + j] != data[j * n + i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self { n, data })
    }

    /// Builds from the upper triangle of `f` (`i <= j`), mirrored.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Self { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub(crate) fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data
            .chunks(self.n.max(1))
            .take(self.n)
            .map(<[f64]>::to_vec)
            .collect()
    }

    /// Entrywise power; `r = 0` maps every entry to 1.
    pub fn hadamard_power(&self, r: f64) -> Result<Self> {
        check_exponent(r)?;
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                out.set_sym(i, j, pow_entry(self.get(i, j), r, i, j)?);
            }
        }
        Ok(out)
    }

    /// `A + delta * I`.
    pub fn shifted(&self, delta: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.data[i * self.n + i] += delta;
        }
        out
    }

    /// Principal submatrix on the zero-based indices `idx`, in that order.
    pub fn principal_submatrix(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), |a, b| self.get(idx[a], idx[b]))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// Ordinary product of two commuting symmetric matrices (e.g. powers of
    /// one matrix). The result is symmetrized to absorb rounding.
    pub fn sym_product(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let n = self.n;
        let mut full = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    full[i * n + j] += a * other.get(k, j);
                }
            }
        }
        Ok(Self::from_fn(n, |i, j| {
            if i == j {
                full[i * n + i]
            } else {
                0.5 * (full[i * n + j] + full[j * n + i])
            }
        }))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }
}

impl SymMatrix for DenseSymMatrix {
    fn order(&self) -> usize {
        self.n
    }

    fn entry(&self, i: usize, j: usize) -> f64 {
        self.get(i, j)
    }

    fn to_dense(&self) -> DenseSymMatrix {
        self.clone()
    }

    fn max_norm(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_rows() {
        assert!(matches!(
            DenseSymMatrix::from_rows(vec![vec![1.0, 2.0], vec![3.0, 1.0]]),
            Err(Error::NotSymmetric { row: 0, col: 1 })
        ));
        assert!(matches!(
            DenseSymMatrix::from_rows(vec![vec![1.0, 2.0], vec![2.0]]),
            Err(Error::NotSquare { row: 1, .. })
        ));
        assert!(matches!(
            DenseSymMatrix::from_rows(vec![vec![f64::INFINITY]]),
            Err(Error::NonFinite { .. })
        ));
        assert_eq!(DenseSymMatrix::from_rows(vec![]).unwrap().order(), 0);
    }

    #[test]
    fn product_of_powers_is_symmetric() {
        let t = DenseSymMatrix::from_rows(vec![vec![0.3, 0.7, 0.0], vec![0.7, 1.1, 0.9], vec![0.0, 0.9, 2.3]]).unwrap();
        let t2 = t.sym_product(&t).unwrap();
        let t3 = t2.sym_product(&t).unwrap();
        assert_eq!(t3.get(0, 2), t3.get(2, 0));
        assert!((t2.get(0, 2) - 0.63).abs() < 1e-15);
    }

    #[test]
    fn zero_power_of_dense_is_all_ones() {
        let a = DenseSymMatrix::from_rows(vec![vec![0.0, 0.0], vec![0.0, 2.0]]).unwrap();
        assert_eq!(
            a.hadamard_power(0.0).unwrap().rows(),
            vec![vec![1.0, 1.0], vec![1.0, 1.0]]
        );
    }
}
