//! Discretized integral operators and their singular value analysis.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::RapidityGrid;
use crate::scalar::{lit, Real};

/// Singular values below this are counted as numerically zero when
/// reporting the spectral decay index.
const DECAY_FLOOR: f64 = 1e-12;

/// Dense discretization of an integral operator on the one-particle
/// space, together with the grid it lives on.
#[derive(Debug, Clone)]
pub struct KernelMatrix<T: Real> {
    matrix: DMatrix<Complex<T>>,
    grid: RapidityGrid<T>,
}

/// Full singular value data of a kernel matrix.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport<T> {
    /// Singular values in descending order.
    pub singular_values: Vec<T>,
    /// Largest singular value.
    pub operator_norm: T,
    /// Sum of all singular values.
    pub trace_norm: T,
    /// Smallest index `k` with `s_k < 1e-12`, if the tail gets there.
    pub decay_index: Option<usize>,
}

impl<T: Real> KernelMatrix<T> {
    pub fn new(matrix: DMatrix<Complex<T>>, grid: RapidityGrid<T>) -> Self {
        assert_eq!(matrix.nrows(), grid.len());
        assert_eq!(matrix.ncols(), grid.len());
        Self { matrix, grid }
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.matrix
    }

    pub fn grid(&self) -> &RapidityGrid<T> {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Apply to a coefficient vector.
    pub fn apply(&self, v: &DVector<Complex<T>>) -> DVector<Complex<T>> {
        &self.matrix * v
    }

    /// Full SVD of the matrix.
    pub fn spectrum(&self) -> Result<SpectrumReport<T>>
    where
        Complex<T>: ComplexField<RealField = T>,
    {
        singular_values(&self.matrix)
    }
}

/// Descending singular values of an arbitrary complex matrix.
pub fn singular_values<T: Real>(m: &DMatrix<Complex<T>>) -> Result<SpectrumReport<T>>
where
    Complex<T>: ComplexField<RealField = T>,
{
    let svd = m.clone().try_svd(false, false, T::default_epsilon(), 0)
        .ok_or_else(|| {
            Error::Numerical(format!(
                "SVD failed to converge for a {}x{} matrix (max |entry| = {:?})",
                m.nrows(),
                m.ncols(),
                m.iter()
                    .map(|z| z.re.hypot(z.im))
                    .fold(T::zero(), |a, b| a.max(b))
            ))
        })?;
    let mut sv: Vec<T> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let operator_norm = sv.first().copied().unwrap_or_else(T::zero);
    let mut trace_norm = T::zero();
    for &s in &sv {
        trace_norm += s;
    }
    let decay_index = sv.iter().position(|&s| s < lit(DECAY_FLOOR));
    Ok(SpectrumReport {
        singular_values: sv,
        operator_norm,
        trace_norm,
        decay_index,
    })
}

/// Orthonormalize the columns of `m` by thin QR, dropping columns whose
/// residual norm falls below `tol` relative to the largest column norm.
/// Returns the orthonormal basis and the smallest retained residual ratio
/// as a conditioning diagnostic.
pub fn orthonormalize_columns<T: Real>(
    m: &DMatrix<Complex<T>>,
    tol: T,
) -> Result<(DMatrix<Complex<T>>, T)>
where
    Complex<T>: ComplexField<RealField = T>,
{
    let n = m.nrows();
    let mut basis: Vec<DVector<Complex<T>>> = Vec::new();
    let mut scale = T::zero();
    for j in 0..m.ncols() {
        let col = m.column(j).into_owned();
        let cn = col.norm();
        scale = scale.max(cn);
    }
    if scale <= T::zero() {
        return Err(Error::Conditioning("all sample vectors vanish".into()));
    }
    let mut min_ratio = T::one();
    for j in 0..m.ncols() {
        let mut v = m.column(j).into_owned();
        // two rounds of modified Gram-Schmidt
        for _ in 0..2 {
            for q in &basis {
                let c = q.dotc(&v);
                v -= q * c;
            }
        }
        let r = v.norm();
        let ratio = r / scale;
        if ratio > tol {
            min_ratio = min_ratio.min(ratio);
            basis.push(v / Complex::new(r, T::zero()));
        }
    }
    if basis.is_empty() {
        return Err(Error::Conditioning(
            "sample vectors are numerically rank deficient".into(),
        ));
    }
    let k = basis.len();
    let q = DMatrix::from_fn(n, k, |i, j| basis[j][i]);
    Ok((q, min_ratio))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn diagonal_singular_values() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![
            Complex::new(3.0, 0.0),
            Complex::new(0.0, -2.0),
            Complex::new(1.0, 0.0),
        ]));
        let r = singular_values(&m).unwrap();
        assert_relative_eq!(r.singular_values[0], 3.0, epsilon = 1e-14);
        assert_relative_eq!(r.singular_values[1], 2.0, epsilon = 1e-14);
        assert_relative_eq!(r.singular_values[2], 1.0, epsilon = 1e-14);
        assert_relative_eq!(r.trace_norm, 6.0, epsilon = 1e-13);
        assert_eq!(r.decay_index, None);
        assert!(r.trace_norm >= r.operator_norm);
    }

    #[test]
    fn zero_matrix_spectrum() {
        let m = DMatrix::<Complex<f64>>::zeros(5, 5);
        let r = singular_values(&m).unwrap();
        assert!(r.singular_values.iter().all(|&s| s == 0.0));
        assert_eq!(r.decay_index, Some(0));
    }

    #[test]
    fn orthonormalize_detects_rank_deficiency() {
        let a = DVector::from_vec(vec![Complex::new(1.0, 0.0), Complex::new(2.0, 1.0)]);
        let m = DMatrix::from_columns(&[a.clone(), a.clone() * Complex::new(2.0, 0.0)]);
        let (q, _) = orthonormalize_columns(&m, 1e-10).unwrap();
        assert_eq!(q.ncols(), 1);
        assert_relative_eq!(q.column(0).norm(), 1.0, epsilon = 1e-14);

        let z = DMatrix::<Complex<f64>>::zeros(2, 2);
        assert!(orthonormalize_columns(&z, 1e-10).is_err());
    }

    #[test]
    fn orthonormal_basis_is_orthonormal() {
        let m = DMatrix::from_fn(6, 3, |i, j| {
            Complex::new((i * j + 1) as f64, (i as f64 - j as f64) * 0.3)
        });
        let (q, _) = orthonormalize_columns(&m, 1e-12).unwrap();
        let g = q.adjoint() * &q;
        for i in 0..g.nrows() {
            for j in 0..g.ncols() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((g[(i, j)] - Complex::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }
}
