//! Wedge one-particle subspaces, analytic continuation to `t + i pi/2`
//! and the kernel operators controlling the nuclearity estimates.
//!
//! Time-zero profiles are smooth bumps supported in `(-inf, 0)`. The
//! Fourier convention is `hhat(p) = integral h(y) exp(-i p y) dy`; with
//! this sign the continuation `hhat(i m cosh t) = integral h(y)
//! exp(m cosh(t) y) dy` decays for negative-support profiles, which is
//! what the wedge norm estimates rest on. The continued boundary values
//! can alternatively be reconstructed from the real line by a Cauchy
//! integral whose denominators are offset by `-i pi/2`, so no principal
//! values arise anywhere.

use nalgebra::ComplexField;
use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::Smearing;
use crate::quadrature::{gauss_legendre, norm, RapidityGrid};
use crate::scalar::{cx_exp, cx_inv, lit, Real};
use crate::spectral::{orthonormalize_columns, singular_values, KernelMatrix};

/// Point of two-dimensional Minkowski space inside the left wedge
/// `|x0| + x1 < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WedgePoint<T> {
    pub x0: T,
    pub x1: T,
}

impl<T: Real> WedgePoint<T> {
    pub fn new(x0: T, x1: T) -> Result<Self> {
        if x0.abs() + x1 >= T::zero() {
            return Err(Error::Domain(format!(
                "({:?}, {:?}) is not in the wedge: |x0| + x1 must be negative",
                x0, x1
            )));
        }
        Ok(Self { x0, x1 })
    }

    /// `m (x1 + |x0|)`, the (negative) exponent of the one-particle
    /// contraction bound.
    pub fn damping_exponent(&self, mass: T) -> T {
        mass * (self.x1 + self.x0.abs())
    }
}

/// Smooth bump `A exp(-1 / (1 - ((y - a)/r)^2))` supported on
/// `(a - r, a + r)`, with the whole support left of the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeZeroProfile<T> {
    pub center: T,
    pub radius: T,
    pub amplitude: T,
}

impl<T: Real> TimeZeroProfile<T> {
    pub fn new(center: T, radius: T, amplitude: T) -> Result<Self> {
        if radius <= T::zero() {
            return Err(Error::Domain("profile radius must be positive".into()));
        }
        if center + radius >= T::zero() {
            return Err(Error::Domain(format!(
                "profile support ({:?}, {:?}) must lie in (-inf, 0)",
                center - radius,
                center + radius
            )));
        }
        Ok(Self {
            center,
            radius,
            amplitude,
        })
    }

    pub fn eval(&self, y: T) -> T {
        let t = (y - self.center) / self.radius;
        let d = T::one() - t * t;
        if d <= T::zero() {
            T::zero()
        } else {
            self.amplitude * (-T::one() / d).exp()
        }
    }

    /// Right edge of the support, `a + r < 0`.
    pub fn support_upper(&self) -> T {
        self.center + self.radius
    }

    /// Quadrature of `h(y) exp(-i p y)` over the support.
    pub fn fourier(&self, p: T) -> Complex<T> {
        self.weighted_integral(p.abs(), |y| cx_exp(Complex::new(T::zero(), -p * y)))
    }

    /// Quadrature of `h(y) exp(s y)` over the support (real for real `s`).
    pub fn laplace(&self, s: T) -> T {
        self.weighted_integral(s.abs(), |y| Complex::new((s * y).exp(), T::zero()))
            .re
    }

    /// `integral h` (equals `integral |h|`: the bump is nonnegative for
    /// positive amplitude).
    pub fn mass(&self) -> T {
        self.weighted_integral(T::zero(), |_| Complex::new(T::one(), T::zero()))
            .re
    }

    /// Composite Gauss-Legendre over the support; `rate` is the scale on
    /// which the exponential factor varies (|p| or |s|) and sets the
    /// panel count so each panel sees a few radians at most.
    fn weighted_integral(&self, rate: T, factor: impl Fn(T) -> Complex<T>) -> Complex<T> {
        let width = lit::<T>(2.0) * self.radius;
        let need = rate * width / lit(6.0);
        let mut panels = 16usize;
        while lit::<T>(panels as f64) < need {
            panels *= 2;
        }
        let order = 12;
        let (xs, ws) = gauss_legendre::<T>(order);
        let half = width / lit(2.0 * panels as f64);
        let a = self.center - self.radius;
        let mut acc = Complex::new(T::zero(), T::zero());
        for p in 0..panels {
            let c = a + (lit::<T>(2.0) * lit(p as f64) + T::one()) * half;
            for j in 0..order {
                let y = c + half * xs[j];
                acc += factor(y) * Complex::new(self.eval(y) * ws[j] * half, T::zero());
            }
        }
        acc
    }
}

/// Deterministic family of admissible bumps for subspace sampling.
pub fn sample_profiles<T: Real>(count: usize) -> Vec<TimeZeroProfile<T>> {
    (0..count)
        .map(|k| {
            let t = lit::<T>(k as f64) / lit::<T>(count.max(1) as f64);
            // centers sweep [-3, -1.2], radii [0.25, 0.55], support < 0
            let center = lit::<T>(-3.0) + lit::<T>(1.8) * t;
            let radius = lit::<T>(0.25) + lit::<T>(0.3) * t;
            let amplitude = T::one() + lit::<T>(0.5) * (lit::<T>(3.0) * t).sin();
            TimeZeroProfile::new(center, radius, amplitude)
                .expect("sample family stays inside the wedge")
        })
        .collect()
}

/// Which time-zero field the vector comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VectorKind {
    /// `t -> hhat(m sinh t)`.
    Phi,
    /// `t -> cosh(t) hhat(m sinh t)`.
    Pi,
}

impl VectorKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "phi" => Ok(Self::Phi),
            "pi" => Ok(Self::Pi),
            _ => Err(Error::Config(format!(
                "unknown vector kind `{s}` (expected phi or pi)"
            ))),
        }
    }

    /// Relative sign between the two Cauchy denominators.
    fn brace_sign<T: Real>(&self) -> T {
        match self {
            Self::Phi => T::one(),
            Self::Pi => -T::one(),
        }
    }
}

/// One-particle vector created by a time-zero field from a profile.
#[derive(Debug, Clone)]
pub struct SingleParticleVector<T: Real> {
    pub kind: VectorKind,
    pub profile: TimeZeroProfile<T>,
    /// Pointwise boundary values at the grid nodes.
    pub values: Vec<Complex<T>>,
    /// Weighted coefficients, `sqrt(w_i)` times the values.
    pub coeffs: Smearing<T>,
}

impl<T: Real> SingleParticleVector<T> {
    pub fn build(
        kind: VectorKind,
        profile: &TimeZeroProfile<T>,
        mass: T,
        grid: &RapidityGrid<T>,
    ) -> Self {
        let values: Vec<Complex<T>> = grid
            .nodes()
            .iter()
            .map(|&t| {
                let base = profile.fourier(mass * t.sinh());
                match kind {
                    VectorKind::Phi => base,
                    VectorKind::Pi => base * Complex::new(t.cosh(), T::zero()),
                }
            })
            .collect();
        let coeffs = Smearing::from_iterator(
            grid.len(),
            values
                .iter()
                .zip(grid.weights())
                .map(|(&v, &w)| v * Complex::new(w.sqrt(), T::zero())),
        );
        Self {
            kind,
            profile: *profile,
            values,
            coeffs,
        }
    }

    pub fn norm(&self) -> T {
        norm(&self.coeffs)
    }

    /// Relative size of the boundary value at the grid edge, a cheap
    /// estimate of the mass lost to the cutoff.
    pub fn edge_ratio(&self) -> T {
        let peak = self
            .values
            .iter()
            .map(|z| z.re.hypot(z.im))
            .fold(T::zero(), |a, b| a.max(b));
        if peak <= T::zero() {
            return T::zero();
        }
        let first = self.values.first().map(|z| z.re.hypot(z.im)).unwrap();
        let last = self.values.last().map(|z| z.re.hypot(z.im)).unwrap();
        first.max(last) / peak
    }
}

/// `t -> Phi_h(t + i pi/2)` through the closed form of the profile:
/// the shell parameter continues as `sinh(t + i pi/2) = i cosh t`, so the
/// phi-type value is the (real) Laplace transform `integral h(y)
/// exp(m cosh(t) y) dy` and the pi-type value carries the extra
/// `i sinh t` from continuing the cosh factor.
pub fn direct_continuation<T: Real>(
    v: &SingleParticleVector<T>,
    mass: T,
    grid: &RapidityGrid<T>,
) -> Vec<Complex<T>> {
    grid.nodes()
        .iter()
        .map(|&t| {
            let l = v.profile.laplace(mass * t.cosh());
            match v.kind {
                VectorKind::Phi => Complex::new(l, T::zero()),
                VectorKind::Pi => Complex::new(T::zero(), t.sinh() * l),
            }
        })
        .collect()
}

/// The same continuation reconstructed from the real-line boundary values
/// by the Cauchy integral with denominators offset by `-i pi/2`; the
/// phi-type kernel is a sum of the two denominators, the pi-type kernel a
/// difference.
pub fn cauchy_continuation<T: Real>(
    v: &SingleParticleVector<T>,
    grid: &RapidityGrid<T>,
) -> Vec<Complex<T>> {
    let half_pi = T::pi() / lit(2.0);
    let sign = v.kind.brace_sign::<T>();
    let prefactor = cx_inv(Complex::new(T::zero(), lit::<T>(2.0) * T::pi()));
    grid.nodes()
        .iter()
        .map(|&t| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for ((&tp, &w), &val) in grid.nodes().iter().zip(grid.weights()).zip(&v.values) {
                let d1 = Complex::new(tp - t, -half_pi);
                let d2 = Complex::new(tp + t, -half_pi);
                let brace = cx_inv(d1) + cx_inv(d2) * Complex::new(sign, T::zero());
                acc += brace * val * Complex::new(w, T::zero());
            }
            acc * prefactor
        })
        .collect()
}

/// Kernel of the damped-continuation operator at a wedge point:
/// `X(t, t') = (2 pi i)^{-1} exp(x1 p0(t) - x0 p1(t))
/// {1/(t'-t-i pi/2) +- 1/(t'+t-i pi/2)}`, discretized on the grid.
pub fn build_kernel<T: Real>(
    kind: VectorKind,
    x: &WedgePoint<T>,
    mass: T,
    grid: &RapidityGrid<T>,
) -> KernelMatrix<T> {
    let half_pi = T::pi() / lit(2.0);
    let sign = kind.brace_sign::<T>();
    let prefactor = cx_inv(Complex::new(T::zero(), lit::<T>(2.0) * T::pi()));
    let (x0, x1) = (x.x0, x.x1);
    grid.discretize_kernel(move |t, tp| {
        let damp = (x1 * mass * t.cosh() - x0 * mass * t.sinh()).exp();
        let d1 = Complex::new(tp - t, -half_pi);
        let d2 = Complex::new(tp + t, -half_pi);
        let brace = cx_inv(d1) + cx_inv(d2) * Complex::new(sign, T::zero());
        prefactor * brace * Complex::new(damp, T::zero())
    })
}

/// Per-profile contraction ratios `|X Phi_h| / |Phi_h|` against the bound
/// `exp(m (x1 + |x0|))`.
#[derive(Debug, Clone, Serialize)]
pub struct VectorBoundReport<T> {
    pub bound: T,
    pub ratios: Vec<T>,
    pub worst_ratio: T,
    /// Worst relative grid-edge boundary value over the samples.
    pub worst_edge_ratio: T,
}

impl<T: Real> VectorBoundReport<T> {
    pub fn passes(&self, slack: T) -> bool {
        self.worst_ratio <= self.bound + slack
    }
}

pub fn vector_bound_check<T: Real>(
    kind: VectorKind,
    x: &WedgePoint<T>,
    mass: T,
    profiles: &[TimeZeroProfile<T>],
    grid: &RapidityGrid<T>,
) -> VectorBoundReport<T> {
    let kernel = build_kernel(kind, x, mass, grid);
    let bound = x.damping_exponent(mass).exp();
    let mut ratios = Vec::with_capacity(profiles.len());
    let mut worst_edge = T::zero();
    for p in profiles {
        let v = SingleParticleVector::build(kind, p, mass, grid);
        let mapped = kernel.apply(&v.coeffs);
        ratios.push(norm(&mapped) / v.norm());
        worst_edge = worst_edge.max(v.edge_ratio());
    }
    let worst_ratio = ratios.iter().copied().fold(T::zero(), |a, b| a.max(b));
    VectorBoundReport {
        bound,
        ratios,
        worst_ratio,
        worst_edge_ratio: worst_edge,
    }
}

/// Operator norm of the compression of the kernel to the span of sampled
/// subspace vectors.
#[derive(Debug, Clone, Serialize)]
pub struct CompressionReport<T> {
    pub norm: T,
    pub sample_count: usize,
    pub rank: usize,
    /// Smallest retained Gram-Schmidt residual ratio (conditioning).
    pub min_residual_ratio: T,
}

pub fn compressed_norm<T: Real>(
    kind: VectorKind,
    x: &WedgePoint<T>,
    mass: T,
    profiles: &[TimeZeroProfile<T>],
    grid: &RapidityGrid<T>,
) -> Result<CompressionReport<T>>
where
    Complex<T>: ComplexField<RealField = T>,
{
    if profiles.len() < 2 {
        return Err(Error::Conditioning(
            "need at least two profiles to sample a subspace".into(),
        ));
    }
    let columns: Vec<Smearing<T>> = profiles
        .iter()
        .map(|p| SingleParticleVector::build(kind, p, mass, grid).coeffs)
        .collect();
    let m = nalgebra::DMatrix::from_columns(&columns);
    let (q, min_ratio) = orthonormalize_columns(&m, lit(1e-10))?;
    let kernel = build_kernel(kind, x, mass, grid);
    let compressed = q.adjoint() * kernel.matrix() * &q;
    let spec = singular_values(&compressed)?;
    Ok(CompressionReport {
        norm: spec.operator_norm,
        sample_count: profiles.len(),
        rank: q.ncols(),
        min_residual_ratio: min_ratio,
    })
}

/// One row of the sector decay table.
#[derive(Debug, Clone, Serialize)]
pub struct SectorDecayRow<T> {
    pub n: usize,
    /// `exp(n m (x1 + |x0|))`.
    pub bound: T,
    /// `n`-th power of the compressed one-particle norm.
    pub compression_power: T,
    /// `(trace norm)^n / n!`, the per-sector nuclearity ingredient.
    pub trace_power_over_factorial: T,
    pub pass: bool,
}

/// Tensor-power decay table: checks `c^n <= exp(n m (x1+|x0|)) + tol`
/// per sector and tabulates the trace-norm ingredients.
pub fn sector_decay_report<T: Real>(
    x: &WedgePoint<T>,
    mass: T,
    n_list: &[usize],
    compression_norm: T,
    trace_norm: T,
    tol: T,
) -> Vec<SectorDecayRow<T>> {
    let damp = x.damping_exponent(mass);
    n_list
        .iter()
        .map(|&n| {
            let nf = lit::<T>(n as f64);
            let bound = (nf * damp).exp();
            let compression_power = compression_norm.powi(n as i32);
            let mut fact = T::one();
            for k in 2..=n {
                fact *= lit::<T>(k as f64);
            }
            let trace_power_over_factorial = trace_norm.powi(n as i32) / fact;
            SectorDecayRow {
                n,
                bound,
                compression_power,
                trace_power_over_factorial,
                pass: compression_power <= bound + tol,
            }
        })
        .collect()
}
