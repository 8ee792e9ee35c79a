use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bandmat::{hadamard_power, merge_pentadiagonal, BandSymMatrix, DenseSymMatrix, SymMatrix};
use crate::error::{Error, Result};
use crate::graphs::SimpleGraph;
use crate::io::{AnyMatrix, MatrixJson};
use crate::positivity::min_eigenvalue;

/// Matrix family sampled by a [`Probe`].
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Tridiagonal,
    Pentadiagonal,
    /// Matrices whose off-diagonal support lies inside the edges of the graph.
    Pattern(SimpleGraph),
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Tridiagonal => "tridiagonal",
            Self::Pentadiagonal => "pentadiagonal",
            Self::Pattern(_) => "pattern",
        }
    }

    fn default_orders(&self) -> (usize, usize) {
        match self {
            Self::Tridiagonal => (3, 12),
            Self::Pentadiagonal => (5, 8),
            Self::Pattern(g) => (g.vertex_count(), g.vertex_count()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub family: String,
    /// Randomly generated samples (injected matrices are counted separately).
    pub samples: usize,
    pub injected: usize,
    pub exponent: f64,
    pub seed: u64,
    pub tol: f64,
    /// Smallest eigenvalue of `A^∘r` over all samples.
    pub min_over_samples: f64,
    /// Zero-based index of the worst sample; injected matrices follow the
    /// generated ones.
    pub worst_index: usize,
    /// The sample (before powering) attaining `min_over_samples`.
    pub worst_case: MatrixJson,
    /// Samples with `λ_min(A^∘r) < -tol · max(1, |A^∘r|_max)`.
    pub violations: usize,
}

impl ProbeReport {
    /// True when no sample falsified preservation.
    pub fn no_violations(&self) -> bool {
        self.violations == 0
    }
}

/// Seeded falsification harness: draws PD matrices of a family, applies a
/// Hadamard power and records the smallest eigenvalue seen.
#[derive(Debug, Clone)]
pub struct Probe {
    family: Family,
    exponent: f64,
    samples: usize,
    seed: u64,
    tol: f64,
    min_order: usize,
    max_order: usize,
    injected: Vec<AnyMatrix>,
}

impl Probe {
    pub fn new(family: Family, exponent: f64) -> Self {
        let (min_order, max_order) = family.default_orders();
        Self {
            family,
            exponent,
            samples: 100,
            seed: 0,
            tol: crate::DEFAULT_TOL,
            min_order,
            max_order,
            injected: Vec::new(),
        }
    }

    pub fn samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// Inclusive range of matrix orders; ignored for graph patterns.
    pub fn orders(mut self, min: usize, max: usize) -> Self {
        self.min_order = min;
        self.max_order = max;
        self
    }

    /// Adds a fixed matrix evaluated alongside the random samples.
    pub fn inject(mut self, a: impl Into<AnyMatrix>) -> Self {
        self.injected.push(a.into());
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.exponent > 0.0 && self.exponent.is_finite()) {
            return Err(Error::Domain(format!(
                "probe exponent must be positive, got {}",
                self.exponent
            )));
        }
        if self.samples == 0 {
            return Err(Error::NoSamples);
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidTolerance(self.tol));
        }
        let floor = match self.family {
            Family::Tridiagonal => 1,
            Family::Pentadiagonal => 3,
            Family::Pattern(_) => 0,
        };
        if self.min_order < floor || self.min_order > self.max_order {
            return Err(Error::Domain(format!(
                "invalid order range {}..={}",
                self.min_order, self.max_order
            )));
        }
        Ok(())
    }

    /// The `index`-th random sample, independent of every other sample.
    pub fn sample(&self, index: usize) -> AnyMatrix {
        let mut rng = sample_rng(self.seed, index);
        let n = match self.family {
            Family::Pattern(_) => self.min_order,
            _ => rng.random_range(self.min_order..=self.max_order),
        };
        match &self.family {
            Family::Tridiagonal => random_pd_tridiagonal(&mut rng, n).into(),
            Family::Pentadiagonal => random_pd_pentadiagonal(&mut rng, n).into(),
            Family::Pattern(g) => random_pd_pattern(&mut rng, g).into(),
        }
    }

    pub fn run(&self) -> Result<ProbeReport> {
        self.validate()?;
        let r = self.exponent;
        let tol = self.tol;
        let eval = |a: &AnyMatrix| -> Result<(f64, bool)> {
            let p = hadamard_power(a, r)?;
            let lam = min_eigenvalue(&p, tol)?;
            Ok((lam, lam < -tol * p.max_norm().max(1.0)))
        };
        let generated: Vec<(f64, bool)> = (0..self.samples)
            .into_par_iter()
            .map(|i| eval(&self.sample(i)))
            .collect::<Result<_>>()?;
        let injected: Vec<(f64, bool)> = self.injected.iter().map(eval).collect::<Result<_>>()?;
        let all: Vec<(f64, bool)> = generated.into_iter().chain(injected).collect();

        let (worst_index, &(min_over_samples, _)) = all
            .iter()
            .enumerate()
            .min_by(|(i, (a, _)), (j, (b, _))| a.total_cmp(b).then(i.cmp(j)))
            .expect("at least one sample");
        let worst = if worst_index < self.samples {
            self.sample(worst_index)
        } else {
            self.injected[worst_index - self.samples].clone()
        };
        Ok(ProbeReport {
            family: self.family.name().into(),
            samples: self.samples,
            injected: self.injected.len(),
            exponent: r,
            seed: self.seed,
            tol,
            min_over_samples,
            worst_index,
            worst_case: MatrixJson::from(&worst),
            violations: all.iter().filter(|(_, v)| *v).count(),
        })
    }
}

/// Functional form of [`Probe`] with default order ranges.
pub fn probe_preserves(family: Family, r: f64, samples: usize, seed: u64, tol: f64) -> Result<ProbeReport> {
    Probe::new(family, r).samples(samples).seed(seed).tol(tol).run()
}

/// Per-sample generator keyed on `(seed, index)` so results do not depend
/// on how samples are scheduled across threads.
pub fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut z = seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}

/// Random PD nonnegative tridiagonal matrix of order `n`. The ratio
/// sequence `b_j^2 / (a_j a_{j+1})` is built from random chain parameters,
/// and some couplings are zeroed to produce reducible samples.
pub fn random_pd_tridiagonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> BandSymMatrix {
    let diag: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..3.0)).collect();
    let mut g_prev = if rng.random_bool(0.5) {
        0.0
    } else {
        rng.random_range(0.0..0.9)
    };
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    for j in 0..n.saturating_sub(1) {
        let g = rng.random_range(0.01..0.99);
        let ratio = (1.0 - g_prev) * g;
        g_prev = g;
        let b = if rng.random_bool(0.1) {
            0.0
        } else {
            (ratio * diag[j] * diag[j + 1]).sqrt()
        };
        off.push(b);
    }
    BandSymMatrix::tridiagonal(diag, off).expect("consistent lengths")
}

/// Random PD pentadiagonal `(i, i+2)` matrix of order `n >= 3`, merged from
/// independent PD tridiagonal halves.
pub fn random_pd_pentadiagonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> BandSymMatrix {
    let odd = random_pd_tridiagonal(rng, n.div_ceil(2));
    let even = random_pd_tridiagonal(rng, n / 2);
    merge_pentadiagonal(&odd, &even).expect("halves of compatible order")
}

/// Random nonnegative matrix supported on the edges of `g`, strictly
/// diagonally dominant (hence PD with smallest eigenvalue at least 0.05).
pub fn random_pd_pattern<R: Rng + ?Sized>(rng: &mut R, g: &SimpleGraph) -> DenseSymMatrix {
    let n = g.vertex_count();
    let mut a = DenseSymMatrix::zeros(n);
    let mut row_sums = vec![0.0; n];
    for (u, v) in g.edges() {
        let w = if rng.random_bool(0.1) {
            0.0
        } else {
            rng.random_range(0.0..1.0)
        };
        a.set_sym(u - 1, v - 1, w);
        row_sums[u - 1] += w;
        row_sums[v - 1] += w;
    }
    for (i, s) in row_sums.iter().enumerate() {
        let d = s + rng.random_range(0.05..1.0);
        a.set_sym(i, i, d);
    }
    a
}
