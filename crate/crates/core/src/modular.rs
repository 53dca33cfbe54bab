//! Finite-dimensional model of the modular nuclearity condition.
//!
//! A full matrix algebra acting on the left factor of `C^d (x) C^d` is
//! put in standard form with respect to the vector `Omega = sum_i
//! sqrt(p_i) e_i (x) e_i` of a faithful state `p`. The closure of
//! `M Omega -> M* Omega` is computed brute force on the matrix-unit
//! basis, `Delta = S^dag S` and `J` come from the polar decomposition
//! `S = J Delta^{1/2}`, and the nuclearity map `M -> Delta^alpha M Omega`
//! is analyzed through its singular values.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::spectral::{singular_values, SpectrumReport};

/// Standard-form data of a full matrix algebra with a faithful state.
#[derive(Debug, Clone)]
pub struct ModularPair<T: Real> {
    pub dim: usize,
    pub p: Vec<T>,
    /// `sum_i sqrt(p_i) e_i (x) e_i` on the doubled space.
    pub omega: DVector<T>,
    /// Linear part of the closed conjugation `S = C A` (entrywise
    /// conjugation times a real matrix).
    s_linear: DMatrix<T>,
    /// `Delta = A^T A`, positive definite.
    delta: DMatrix<T>,
    delta_eigvals: DVector<T>,
    delta_eigvecs: DMatrix<T>,
    /// Linear part of `J = C B` from the polar decomposition.
    j_linear: DMatrix<T>,
}

/// Build the standard-form pair from a dimension and a probability
/// vector with full support.
pub fn modular_data<T: Real>(dim: usize, p: &[T]) -> Result<ModularPair<T>>
where
    Complex<T>: ComplexField<RealField = T>,
{
    if dim < 2 {
        return Err(Error::Config(format!(
            "dimension must be at least 2, got {dim}"
        )));
    }
    if p.len() != dim {
        return Err(Error::Config(format!(
            "probability vector has {} entries, expected {dim}",
            p.len()
        )));
    }
    if p.iter().any(|&x| x <= T::zero()) {
        return Err(Error::Domain(
            "state weights must be strictly positive: a zero weight makes the standard vector non-separating".into(),
        ));
    }
    let mut sum = T::zero();
    for &x in p {
        sum += x;
    }
    if (sum - T::one()).abs() > T::default_epsilon() * lit(1e4) {
        return Err(Error::Domain(format!(
            "state weights must sum to 1, got {:?}",
            sum
        )));
    }

    let n = dim * dim;
    let flat = |i: usize, j: usize| i * dim + j;
    let mut omega = DVector::zeros(n);
    for i in 0..dim {
        omega[flat(i, i)] = p[i].sqrt();
    }
    // S (E_ab (x) 1) Omega = (E_ba (x) 1) Omega fixes S on the basis
    // e_a (x) e_b = (p_b)^{-1/2} (E_ab (x) 1) Omega:
    // S (e_a (x) e_b) = sqrt(p_a / p_b) e_b (x) e_a, antilinearly.
    let mut s_linear = DMatrix::zeros(n, n);
    for a in 0..dim {
        for b in 0..dim {
            s_linear[(flat(b, a), flat(a, b))] = (p[a] / p[b]).sqrt();
        }
    }
    // for antilinear S = C A the positive part is Delta = A^T A
    let delta = s_linear.transpose() * &s_linear;
    let eig = delta.clone().symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| l <= T::zero()) {
        return Err(Error::Numerical(
            "modular operator came out non-positive".into(),
        ));
    }
    // J = S Delta^{-1/2}: linear part B = A Q diag(l^{-1/2}) Q^T
    let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| T::one() / l.sqrt()));
    let j_linear =
        &s_linear * &eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose();
    Ok(ModularPair {
        dim,
        p: p.to_vec(),
        omega,
        s_linear,
        delta,
        delta_eigvals: eig.eigenvalues,
        delta_eigvecs: eig.eigenvectors,
        j_linear,
    })
}

impl<T: Real> ModularPair<T> {
    pub fn doubled_dim(&self) -> usize {
        self.dim * self.dim
    }

    pub fn delta(&self) -> &DMatrix<T> {
        &self.delta
    }

    /// Eigenvalues of the modular operator, descending.
    pub fn delta_spectrum(&self) -> Vec<T> {
        let mut v: Vec<T> = self.delta_eigvals.iter().copied().collect();
        v.sort_by(|a, b| b.partial_cmp(a).unwrap());
        v
    }

    /// `S v = A conj(v)`.
    pub fn s_apply(&self, v: &DVector<Complex<T>>) -> DVector<Complex<T>> {
        let conj = v.map(|z| z.conj());
        self.cast(&self.s_linear) * conj
    }

    /// `J v = B conj(v)`.
    pub fn j_apply(&self, v: &DVector<Complex<T>>) -> DVector<Complex<T>> {
        let conj = v.map(|z| z.conj());
        self.cast(&self.j_linear) * conj
    }

    /// `Delta^alpha` through the eigendecomposition.
    pub fn delta_power(&self, alpha: T) -> DMatrix<T> {
        let d = DMatrix::from_diagonal(&self.delta_eigvals.map(|l| l.powf(alpha)));
        &self.delta_eigvecs * d * self.delta_eigvecs.transpose()
    }

    /// Unitary `Delta^{it}`.
    pub fn delta_unitary(&self, t: T) -> DMatrix<Complex<T>> {
        let d = DMatrix::from_diagonal(&self.delta_eigvals.map(|l| {
            let phase = t * l.ln();
            Complex::new(phase.cos(), phase.sin())
        }));
        let q = self.cast(&self.delta_eigvecs);
        &q * d * q.transpose()
    }

    /// `m (x) 1` on the doubled space.
    pub fn left_operator(&self, m: &DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
        let d = self.dim;
        DMatrix::from_fn(d * d, d * d, |row, col| {
            let (i, j) = (row / d, row % d);
            let (k, l) = (col / d, col % d);
            if j == l {
                m[(i, k)]
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
    }

    /// Matrix unit `E_ab` of the single-factor algebra.
    pub fn matrix_unit(&self, a: usize, b: usize) -> DMatrix<Complex<T>> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        m[(a, b)] = Complex::new(T::one(), T::zero());
        m
    }

    /// Distance of a doubled-space operator from the left factor,
    /// relative to its norm: projects onto the `m (x) 1` form by
    /// averaging over the right index and measures the remainder.
    pub fn left_factor_defect(&self, k: &DMatrix<Complex<T>>) -> T {
        let d = self.dim;
        let mut m = DMatrix::<Complex<T>>::zeros(d, d);
        for i in 0..d {
            for kk in 0..d {
                let mut acc = Complex::new(T::zero(), T::zero());
                for j in 0..d {
                    acc += k[(i * d + j, kk * d + j)];
                }
                m[(i, kk)] = acc / Complex::new(lit::<T>(d as f64), T::zero());
            }
        }
        let projected = self.left_operator(&m);
        let diff = k - &projected;
        let scale = k.norm().max(T::default_epsilon());
        diff.norm() / scale
    }

    fn cast(&self, m: &DMatrix<T>) -> DMatrix<Complex<T>> {
        m.map(|x| Complex::new(x, T::zero()))
    }

    fn omega_complex(&self) -> DVector<Complex<T>> {
        self.omega.map(|x| Complex::new(x, T::zero()))
    }
}

/// Residuals of the defining modular identities.
#[derive(Debug, Clone, Serialize)]
pub struct InvariantReport<T> {
    /// `|Delta Omega - Omega|`.
    pub delta_fixes_omega: T,
    /// `|J Omega - Omega|`.
    pub j_fixes_omega: T,
    /// `|J^2 - 1|` on a basis.
    pub j_involution: T,
    /// worst commutator norm of `J (E_ab (x) 1) J` with the left factor.
    pub commutant: T,
    /// worst left-factor defect of `Delta^{it} (E_ab (x) 1) Delta^{-it}`
    /// at the sampled flow times.
    pub modular_flow: T,
    pub flow_times: Vec<T>,
    /// worst `|S (M Omega) - M* Omega|` over matrix units.
    pub conjugation: T,
}

impl<T: Real> InvariantReport<T> {
    pub fn max_residual(&self) -> T {
        self.delta_fixes_omega
            .max(self.j_fixes_omega)
            .max(self.j_involution)
            .max(self.commutant)
            .max(self.modular_flow)
            .max(self.conjugation)
    }

    pub fn passes(&self, tol: T) -> bool {
        self.max_residual() < tol
    }
}

pub fn invariant_report<T: Real>(pair: &ModularPair<T>) -> InvariantReport<T> {
    let n = pair.doubled_dim();
    let omega = pair.omega_complex();

    let delta_fixes_omega = (pair.cast(pair.delta()) * &omega - &omega).norm();
    let j_fixes_omega = (pair.j_apply(&omega) - &omega).norm();

    let mut j_involution = T::zero();
    for k in 0..n {
        let mut e = DVector::zeros(n);
        e[k] = Complex::new(T::one(), T::zero());
        // also exercise a complex phase so the antilinearity is covered
        let mut v = e.clone();
        v[k] = Complex::new(lit(0.6), lit(0.8));
        let r1 = (pair.j_apply(&pair.j_apply(&e)) - &e).norm();
        let r2 = (pair.j_apply(&pair.j_apply(&v)) - &v).norm();
        j_involution = j_involution.max(r1).max(r2);
    }

    // J M J as a linear matrix: (C B) M (C B) = B conj(M) B
    let b = pair.cast(&pair.j_linear);
    let mut commutant = T::zero();
    let mut conjugation = T::zero();
    for a in 0..pair.dim {
        for bb in 0..pair.dim {
            let unit = pair.matrix_unit(a, bb);
            let lifted = pair.left_operator(&unit);
            let mirrored = &b * lifted.map(|z| z.conj()) * &b;
            for c in 0..pair.dim {
                for d in 0..pair.dim {
                    let other = pair.left_operator(&pair.matrix_unit(c, d));
                    let comm = &mirrored * &other - &other * &mirrored;
                    commutant = commutant.max(comm.norm());
                }
            }
            let s_of = pair.s_apply(&(&lifted * &omega));
            let adj = pair.left_operator(&unit.adjoint()) * &omega;
            conjugation = conjugation.max((s_of - adj).norm());
        }
    }

    let flow_times = vec![lit::<T>(0.3), lit::<T>(1.7)];
    let mut modular_flow = T::zero();
    for &t in &flow_times {
        let u = pair.delta_unitary(t);
        let u_inv = pair.delta_unitary(-t);
        for a in 0..pair.dim {
            for bb in 0..pair.dim {
                let lifted = pair.left_operator(&pair.matrix_unit(a, bb));
                let flowed = &u * lifted * &u_inv;
                modular_flow = modular_flow.max(pair.left_factor_defect(&flowed));
            }
        }
    }

    InvariantReport {
        delta_fixes_omega,
        j_fixes_omega,
        j_involution,
        commutant,
        modular_flow,
        flow_times,
        conjugation,
    }
}

/// Singular value data of the map `M -> Delta^alpha M Omega` on the
/// Hilbert-Schmidt algebra, plus the operator-norm-domain bound.
#[derive(Debug, Clone, Serialize)]
pub struct NuclearityReport<T> {
    pub alpha: T,
    pub spectrum: SpectrumReport<T>,
    /// `sqrt(d) * sum s_i`: nuclear norm upper bound when the domain
    /// carries the operator norm instead of Hilbert-Schmidt.
    pub nuclear_bound: T,
}

pub fn nuclearity_spectrum<T: Real>(
    pair: &ModularPair<T>,
    alpha: T,
) -> Result<NuclearityReport<T>>
where
    Complex<T>: ComplexField<RealField = T>,
{
    let n = pair.doubled_dim();
    let damp = pair.cast(&pair.delta_power(alpha));
    let omega = pair.omega_complex();
    // column (a,b): Delta^alpha (E_ab (x) 1) Omega in the HS-orthonormal
    // matrix-unit basis of the domain
    let mut map = DMatrix::<Complex<T>>::zeros(n, n);
    for a in 0..pair.dim {
        for b in 0..pair.dim {
            let col = &damp * (pair.left_operator(&pair.matrix_unit(a, b)) * &omega);
            map.set_column(a * pair.dim + b, &col);
        }
    }
    let spectrum = singular_values(&map)?;
    let nuclear_bound = lit::<T>(pair.dim as f64).sqrt() * spectrum.trace_norm;
    Ok(NuclearityReport {
        alpha,
        spectrum,
        nuclear_bound,
    })
}
