//! Composite Gauss-Legendre discretization of the one-particle space.
//!
//! Functions of the rapidity become vectors `v_i = sqrt(w_i) g(t_i)` and
//! integral kernels become matrices `M_ij = sqrt(w_i) K(t_i,t_j) sqrt(w_j)`,
//! so Euclidean norms and matrix actions approximate their L2
//! counterparts. Grids are symmetric about the origin by construction.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::spectral::KernelMatrix;

/// Weighted quadrature grid on `[-theta_max, theta_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RapidityGrid<T: Real> {
    nodes: Vec<T>,
    weights: Vec<T>,
    theta_max: T,
    panels: usize,
    order: usize,
    // reference Gauss-Legendre data on [-1, 1], shared by all panels
    ref_nodes: Vec<T>,
    bary_weights: Vec<T>,
}

/// Grid construction parameters, as they appear in config files.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridSpec {
    pub theta_max: f64,
    pub panels: usize,
    pub order: usize,
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration on
/// the Legendre recurrence, with the node set symmetrized exactly.
pub fn gauss_legendre<T: Real>(order: usize) -> (Vec<T>, Vec<T>) {
    assert!(order >= 1);
    let n = order;
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    for i in 0..(n + 1) / 2 {
        // Tricomi-type initial guess, then Newton
        let guess = (lit::<T>(std::f64::consts::PI)
            * (lit::<T>(i as f64) + lit(0.75))
            / (lit::<T>(n as f64) + lit(0.5)))
        .cos();
        let mut x = guess;
        let mut dp = T::zero();
        for _ in 0..100 {
            // Legendre P_n(x) and derivative via the three-term recurrence
            let mut p0 = T::one();
            let mut p1 = x;
            for k in 2..=n {
                let kf = lit::<T>(k as f64);
                let p2 = ((lit::<T>(2.0) * kf - T::one()) * x * p1
                    - (kf - T::one()) * p0)
                    / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = lit::<T>(n as f64) * (x * p1 - p0) / (x * x - T::one());
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() <= lit(1e-30) {
                break;
            }
        }
        let w = lit::<T>(2.0) / ((T::one() - x * x) * dp * dp);
        // nodes come out in descending order of the guess; store ascending
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
        nodes[i] = -x;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    (nodes, weights)
}

impl<T: Real> RapidityGrid<T> {
    /// Composite Gauss-Legendre grid: `panels` equal panels of the given
    /// `order` on `[-theta_max, theta_max]`.
    pub fn build(theta_max: T, panels: usize, order: usize) -> Result<Self> {
        if theta_max <= T::zero() {
            return Err(Error::Config(format!(
                "theta_max must be positive, got {:?}",
                theta_max
            )));
        }
        if panels < 1 {
            return Err(Error::Config("panels must be >= 1".into()));
        }
        if order < 2 {
            return Err(Error::Config("order must be >= 2".into()));
        }
        let (ref_nodes, ref_weights) = gauss_legendre::<T>(order);
        let half_width = theta_max / lit(panels as f64);
        let n = panels * order;
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        for p in 0..panels {
            let center =
                -theta_max + (lit::<T>(2.0) * lit(p as f64) + T::one()) * half_width;
            for j in 0..order {
                nodes[p * order + j] = center + half_width * ref_nodes[j];
                weights[p * order + j] = half_width * ref_weights[j];
            }
        }
        // enforce exact reflection symmetry of the node set
        for idx in 0..n / 2 {
            nodes[idx] = -nodes[n - 1 - idx];
            weights[idx] = weights[n - 1 - idx];
        }
        if n % 2 == 1 {
            // odd panels and order: the central node is the origin
            nodes[n / 2] = T::zero();
        }

        let mut bary_weights = vec![T::one(); order];
        for j in 0..order {
            for k in 0..order {
                if k != j {
                    bary_weights[j] /= ref_nodes[j] - ref_nodes[k];
                }
            }
        }

        Ok(Self {
            nodes,
            weights,
            theta_max,
            panels,
            order,
            ref_nodes,
            bary_weights,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn theta_max(&self) -> T {
        self.theta_max
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Index of the reflected node, `nodes[reflect(i)] == -nodes[i]`.
    pub fn reflect(&self, i: usize) -> usize {
        self.len() - 1 - i
    }

    /// `v_i = sqrt(w_i) g(t_i)`; the Euclidean norm of the result
    /// approximates the L2 norm of `g`.
    pub fn discretize_function(
        &self,
        g: impl Fn(T) -> Complex<T>,
    ) -> DVector<Complex<T>> {
        DVector::from_iterator(
            self.len(),
            self.nodes.iter().zip(&self.weights).map(|(&t, &w)| {
                let s = w.sqrt();
                g(t) * Complex::new(s, T::zero())
            }),
        )
    }

    /// `M_ij = sqrt(w_i) K(t_i, t_j) sqrt(w_j)`.
    pub fn discretize_kernel(
        &self,
        k: impl Fn(T, T) -> Complex<T>,
    ) -> KernelMatrix<T> {
        let n = self.len();
        let m = DMatrix::from_fn(n, n, |i, j| {
            let s = (self.weights[i] * self.weights[j]).sqrt();
            k(self.nodes[i], self.nodes[j]) * Complex::new(s, T::zero())
        });
        KernelMatrix::new(m, self.clone())
    }

    /// Quadrature of `g` over the grid: `sum_i w_i g(t_i)`.
    pub fn integrate(&self, g: impl Fn(T) -> Complex<T>) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            acc += g(t) * Complex::new(w, T::zero());
        }
        acc
    }

    /// Barycentric Lagrange interpolation of pointwise samples at the grid
    /// nodes, restricted to the panel containing `x`. Returns `None`
    /// outside `[-theta_max, theta_max]`.
    pub fn interpolate(&self, values: &[Complex<T>], x: T) -> Option<Complex<T>> {
        assert_eq!(values.len(), self.len());
        if x < -self.theta_max || x > self.theta_max {
            return None;
        }
        let width = lit::<T>(2.0) * self.theta_max / lit(self.panels as f64);
        let mut p: usize = nalgebra::try_convert::<T, f64>((x + self.theta_max) / width)
            .map(|v| v.floor() as usize)
            .unwrap_or(0);
        if p >= self.panels {
            p = self.panels - 1;
        }
        let half = self.theta_max / lit(self.panels as f64);
        let center = -self.theta_max + (lit::<T>(2.0) * lit(p as f64) + T::one()) * half;
        let xi = (x - center) / half;
        let mut num = Complex::new(T::zero(), T::zero());
        let mut den = T::zero();
        for j in 0..self.order {
            let d = xi - self.ref_nodes[j];
            if d.abs() < lit(1e-300) {
                return Some(values[p * self.order + j]);
            }
            let c = self.bary_weights[j] / d;
            num += values[p * self.order + j] * Complex::new(c, T::zero());
            den += c;
        }
        Some(num / Complex::new(den, T::zero()))
    }

    /// CSV serialization with header `node,weight`.
    pub fn to_csv(&self) -> String
    where
        T: std::fmt::LowerExp,
    {
        let mut out = String::from("node,weight\n");
        for (t, w) in self.nodes.iter().zip(&self.weights) {
            out.push_str(&format!("{:.16e},{:.16e}\n", t, w));
        }
        out
    }
}

/// Discrete L2 inner product, antilinear in the first argument.
pub fn inner<T: Real>(a: &DVector<Complex<T>>, b: &DVector<Complex<T>>) -> Complex<T> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for (x, y) in a.iter().zip(b.iter()) {
        acc += x.conj() * *y;
    }
    acc
}

/// Euclidean norm with a fixed summation order.
pub fn norm<T: Real>(a: &DVector<Complex<T>>) -> T {
    let mut acc = T::zero();
    for x in a.iter() {
        acc += x.norm_sqr();
    }
    acc.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn two_point_rule_on_unit_interval() {
        let g = RapidityGrid::<f64>::build(1.0, 1, 2).unwrap();
        let inv_sqrt3 = 1.0 / 3.0f64.sqrt();
        assert_eq!(g.len(), 2);
        assert_relative_eq!(g.nodes()[0], -inv_sqrt3, epsilon = 1e-15);
        assert_relative_eq!(g.nodes()[1], inv_sqrt3, epsilon = 1e-15);
        assert_relative_eq!(g.weights()[0], 1.0, epsilon = 1e-15);
        assert_relative_eq!(g.weights()[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn weight_sum_and_symmetry() {
        let g = RapidityGrid::<f64>::build(8.0, 16, 16).unwrap();
        assert_eq!(g.len(), 256);
        let sum: f64 = g.weights().iter().sum();
        assert_relative_eq!(sum, 16.0, epsilon = 1e-12);
        for i in 0..g.len() {
            assert_eq!(g.nodes()[i], -g.nodes()[g.reflect(i)]);
            assert!(g.weights()[i] > 0.0);
        }
        for w in g.nodes().windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn degenerate_inputs_rejected() {
        assert!(RapidityGrid::<f64>::build(0.0, 4, 4).is_err());
        assert!(RapidityGrid::<f64>::build(-1.0, 4, 4).is_err());
        assert!(RapidityGrid::<f64>::build(1.0, 0, 4).is_err());
        assert!(RapidityGrid::<f64>::build(1.0, 4, 1).is_err());
    }

    #[test]
    fn gaussian_norm_matches_analytic_value() {
        let g = RapidityGrid::<f64>::build(8.0, 16, 16).unwrap();
        let v = g.discretize_function(|t| Complex::new((-t * t / 2.0).exp(), 0.0));
        let n2 = norm(&v).powi(2);
        assert_relative_eq!(n2, std::f64::consts::PI.sqrt(), epsilon = 1e-10);
    }

    #[test]
    fn constant_function_norm_is_weight_sum() {
        let g = RapidityGrid::<f64>::build(1.0, 2, 4).unwrap();
        let v = g.discretize_function(|_| Complex::new(1.0, 0.0));
        assert_relative_eq!(norm(&v).powi(2), 2.0, epsilon = 1e-13);
    }

    #[test]
    fn zero_function_and_kernel() {
        let g = RapidityGrid::<f64>::build(2.0, 2, 4).unwrap();
        let v = g.discretize_function(|_| Complex::new(0.0, 0.0));
        assert_eq!(norm(&v), 0.0);
        let k = g.discretize_kernel(|_, _| Complex::new(0.0, 0.0));
        assert_eq!(k.matrix().iter().map(|z| z.norm()).sum::<f64>(), 0.0);
    }

    #[test]
    fn rank_one_kernel_singular_value() {
        let g = RapidityGrid::<f64>::build(6.0, 8, 8).unwrap();
        let f = |t: f64| Complex::new((-t * t / 2.0).exp(), 0.0);
        let h = |t: f64| Complex::new((-(t - 0.5) * (t - 0.5)).exp(), 0.1 * t.sin());
        let k = g.discretize_kernel(|a, b| f(a) * h(b).conj());
        let report = k.spectrum().unwrap();
        let vf = g.discretize_function(f);
        let vh = g.discretize_function(h);
        assert_relative_eq!(report.singular_values[0], norm(&vf) * norm(&vh), epsilon = 1e-10);
        assert!(report.singular_values[1] < 1e-12);
    }

    #[test]
    fn hermitian_kernel_gives_hermitian_matrix() {
        let g = RapidityGrid::<f64>::build(2.0, 2, 6).unwrap();
        let k = g.discretize_kernel(|a, b| {
            Complex::new((-(a - b) * (a - b)).exp(), a - b)
        });
        let m = k.matrix();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let d = (m[(i, j)] - m[(j, i)].conj()).norm();
                assert!(d < 1e-14);
            }
        }
    }

    #[test]
    fn refinement_convergence_for_smooth_decaying_function() {
        let f = |t: f64| Complex::new((-t * t / 2.0).exp() * t.cos(), 0.0);
        let coarse = RapidityGrid::<f64>::build(8.0, 8, 12).unwrap();
        let fine = RapidityGrid::<f64>::build(8.0, 16, 12).unwrap();
        let a = norm(&coarse.discretize_function(f));
        let b = norm(&fine.discretize_function(f));
        assert!((a - b).abs() < 1e-8);
    }

    #[test]
    fn inner_products_match_analytic_gaussian_pairs() {
        // <e^{-t^2/2}, e^{-(t-s)^2/2}> = sqrt(pi) e^{-s^2/4}
        let g = RapidityGrid::<f64>::build(10.0, 16, 16).unwrap();
        for s in [0.0, 0.7, 1.9] {
            let a = g.discretize_function(|t| Complex::new((-t * t / 2.0).exp(), 0.0));
            let b = g.discretize_function(|t| {
                Complex::new((-(t - s) * (t - s) / 2.0).exp(), 0.0)
            });
            let ip = inner(&a, &b);
            let expect = std::f64::consts::PI.sqrt() * (-s * s / 4.0).exp();
            assert_relative_eq!(ip.re, expect, epsilon = 1e-8);
            assert_relative_eq!(ip.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn interpolation_reproduces_smooth_functions() {
        let g = RapidityGrid::<f64>::build(4.0, 8, 10).unwrap();
        let f = |t: f64| Complex::new((-t * t / 3.0).exp(), (0.5 * t).sin());
        let samples: Vec<_> = g.nodes().iter().map(|&t| f(t)).collect();
        for &x in &[-3.9, -1.234, 0.0, 0.618, 2.5, 3.99] {
            let v = g.interpolate(&samples, x).unwrap();
            assert!((v - f(x)).norm() < 1e-9, "x = {x}");
        }
        assert!(g.interpolate(&samples, 4.5).is_none());
        // exact at nodes
        let v = g.interpolate(&samples, g.nodes()[7]).unwrap();
        assert_eq!(v, samples[7]);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let g = RapidityGrid::<f64>::build(1.0, 1, 2).unwrap();
        let csv = g.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "node,weight");
        assert_eq!(lines.len(), 3);
    }
}
