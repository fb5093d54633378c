//! Hermitian eigensystems and the square root used by the Picard sum.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mfop::FarFieldMatrix;

const MAX_SWEEPS: usize = 10_000;

/// Eigenpairs sorted by descending value.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    /// Column `j` belongs to `values[j]`.
    pub vectors: DMatrix<Complex64>,
}

impl Eigensystem {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, j: usize) -> DVector<Complex64> {
        self.vectors.column(j).into_owned()
    }

    /// `sum_j f(value_j) v_j v_j^H`
    pub fn compose(&self, f: impl Fn(f64) -> f64) -> DMatrix<Complex64> {
        let n = self.vectors.nrows();
        let mut out = DMatrix::zeros(n, n);
        for (j, &v) in self.values.iter().enumerate() {
            let col = self.vectors.column(j);
            out += (col * col.adjoint()) * Complex64::new(f(v), 0.0);
        }
        out
    }

    /// `max_j ||A v_j - value_j v_j|| / ||A||`
    pub fn residual(&self, a: &DMatrix<Complex64>) -> f64 {
        let scale = a.norm().max(f64::MIN_POSITIVE);
        (0..self.len())
            .map(|j| {
                let v = self.vectors.column(j);
                (a * v - v * Complex64::new(self.values[j], 0.0)).norm()
            })
            .fold(0.0, f64::max)
            / scale
    }

    /// `max |V^H V - I|`
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.vectors.ad_mul(&self.vectors);
        let n = g.nrows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[(i, j)] - want).norm());
            }
        }
        worst
    }
}

/// Eigendecomposition of the Hermitian part of `a`.
pub fn hermitian_eigen(a: &DMatrix<Complex64>) -> Result<Eigensystem> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} is not square",
            a.nrows(),
            a.ncols()
        )));
    }
    let herm = (a + a.adjoint()).map(|z| z * 0.5);
    let n = herm.nrows();
    if n == 0 {
        return Ok(Eigensystem {
            values: Vec::new(),
            vectors: herm,
        });
    }
    let eig = SymmetricEigen::try_new(herm.clone(), f64::EPSILON, MAX_SWEEPS).ok_or_else(|| {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| herm[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        Error::NoConvergence {
            sweeps: MAX_SWEEPS,
            off_norm: off,
        }
    })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    Ok(Eigensystem {
        values: order.iter().map(|&i| eig.eigenvalues[i]).collect(),
        vectors: DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]),
    })
}

/// Eigensystem of `|A|^{1/2}` for `A` the weighted Hermitian part of `f`: the values are
/// `|lambda_j|^{1/2}`, sorted descending, with the eigenvectors of `A`.
pub fn hermitian_sqrt(f: &FarFieldMatrix) -> Result<Eigensystem> {
    let es = hermitian_eigen(&f.weighted_hermitian_part())?;
    let mut pairs: Vec<(f64, usize)> = es.values.iter().map(|v| v.abs().sqrt()).zip(0..).collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let n = es.vectors.nrows();
    Ok(Eigensystem {
        values: pairs.iter().map(|p| p.0).collect(),
        vectors: DMatrix::from_fn(n, n, |r, c| es.vectors[(r, pairs[c].1)]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mfop::OperatorKind;
    use crate::synth::{FrequencyGrid, GridMode};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_hermitian(n: usize, seed: u64) -> DMatrix<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = DMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        (&m + m.adjoint()).map(|z| z * 0.5)
    }

    #[test]
    fn identity() {
        let grid = FrequencyGrid::new(0.0, 1.0, 5, GridMode::Midpoint).unwrap();
        let f = FarFieldMatrix {
            entries: DMatrix::identity(5, 5) / Complex64::new(grid.step(), 0.0),
            grid,
            weight: grid.step(),
            kind: OperatorKind::Backscatter { theta: 0.0 },
        };
        let es = hermitian_sqrt(&f).unwrap();
        for v in &es.values {
            assert!((v - 1.0).abs() < 1e-14);
        }
        assert!(es.orthonormality_defect() < 1e-14);
    }

    #[test]
    fn sqrt_reconstructs_polar_absolute_value() {
        let a = random_hermitian(12, 4);
        let grid = FrequencyGrid::new(0.0, 1.0, 12, GridMode::Midpoint).unwrap();
        let f = FarFieldMatrix {
            entries: a.clone() / Complex64::new(grid.step(), 0.0),
            grid,
            weight: grid.step(),
            kind: OperatorKind::TwoSided,
        };
        let es = hermitian_sqrt(&f).unwrap();
        assert!(es.values.windows(2).all(|w| w[0] >= w[1]));
        // |A| from an independent route: (A^2)^{1/2} via the plain eigensystem of A^2
        let sq = hermitian_eigen(&(&a * &a)).unwrap();
        let abs_a = sq.compose(|v| v.max(0.0).sqrt());
        let back = es.compose(|v| v * v);
        assert!((&back - &abs_a).norm() < 1e-10 * abs_a.norm());
    }

    #[test]
    fn rejects_non_square() {
        let a = DMatrix::<Complex64>::zeros(2, 3);
        assert!(matches!(
            hermitian_eigen(&a),
            Err(Error::DimensionMismatch(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn residual_contract(n in 1usize..=64, seed in any::<u64>()) {
            let a = random_hermitian(n, seed);
            let es = hermitian_eigen(&a).unwrap();
            prop_assert!(es.residual(&a) <= 1e-10);
            prop_assert!(es.orthonormality_defect() <= 1e-10);
            let back = es.compose(|v| v);
            prop_assert!((&back - &a).norm() <= 1e-10 * a.norm().max(1.0));
        }
    }
}
