use serde::{Deserialize, Serialize};

use super::{DenseSymMatrix, SymMatrix};
use crate::error::{Error, Result};

/// Permutation matrix `X` whose row `k` is row `image[k]` of the identity.
/// Stored zero-based; [`PermutationSpec::image`] reports one-based labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationSpec {
    image: Vec<usize>,
}

impl PermutationSpec {
    /// From one-based labels; must be a bijection on `1..=n`.
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        let mut zero_based = Vec::with_capacity(n);
        for &k in &image {
            if k == 0 || k > n {
                return Err(Error::InvalidPermutation(format!("label {k} outside 1..={n}")));
            }
            if std::mem::replace(&mut seen[k - 1], true) {
                return Err(Error::InvalidPermutation(format!("label {k} repeated")));
            }
            zero_based.push(k - 1);
        }
        Ok(Self { image: zero_based })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            image: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    /// One-based image.
    pub fn image(&self) -> Vec<usize> {
        self.image.iter().map(|k| k + 1).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.image.len()];
        for (k, &i) in self.image.iter().enumerate() {
            inv[i] = k;
        }
        Self { image: inv }
    }

    /// `X A X^T`, i.e. entry `(k, l)` is `A[image[k], image[l]]`.
    pub fn conjugate<M: SymMatrix>(&self, a: &M) -> Result<DenseSymMatrix> {
        if a.order() != self.image.len() {
            return Err(Error::SizeMismatch {
                left: a.order(),
                right: self.image.len(),
            });
        }
        Ok(DenseSymMatrix::from_fn(self.image.len(), |k, l| {
            a.entry(self.image[k], self.image[l])
        }))
    }
}

/// Odd labels in increasing order, then even labels: `(1, 3, 5, ..., 2, 4, ...)`.
pub fn even_odd_permutation(n: usize) -> PermutationSpec {
    let image = (0..n).step_by(2).chain((1..n).step_by(2)).collect();
    PermutationSpec { image }
}

pub fn conjugate_by_permutation<M: SymMatrix>(a: &M, p: &PermutationSpec) -> Result<DenseSymMatrix> {
    p.conjugate(a)
}
