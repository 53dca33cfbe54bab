//! Test functions on two-dimensional Minkowski space and their
//! restriction to the mass shell.
//!
//! The pairing convention is `p.x = p0 x0 - p1 x1` with
//! `p(t) = m (cosh t, sinh t)`, so translation phases and the wedge
//! damping factors used elsewhere come out consistent. The transforms
//! `f_pm(t) = (2 pi)^{-1} integral f(x) exp(pm i p(t).x) dx` are computed
//! by composite Gauss-Legendre quadrature over the declared support box,
//! with the panel count scaled to the oscillation of the phase.

use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::fock::Smearing;
use crate::quadrature::{gauss_legendre, RapidityGrid};
use crate::scalar::{cx_exp, lit, Real};

/// Panel cap for the oscillatory quadrature; beyond this the integrand
/// oscillates too fast to resolve and the operation reports failure
/// rather than returning noise.
const MAX_PANELS: usize = 20_000;

type Fn1<T> = Arc<dyn Fn(T) -> Complex<T> + Send + Sync>;
type Fn2<T> = Arc<dyn Fn(T, T) -> Complex<T> + Send + Sync>;

/// A test function on spacetime, either as a product of one-dimensional
/// factors (cheap factorized transforms) or as a general evaluator.
#[derive(Clone)]
enum Form<T: Real> {
    Product {
        time: Fn1<T>,
        time_support: [T; 2],
        space: Fn1<T>,
        space_support: [T; 2],
    },
    General {
        f: Fn2<T>,
        support: [[T; 2]; 2],
    },
}

/// Function on R^2 with declared (compactly supported or effectively
/// truncated) support box and optional wedge-offset metadata.
#[derive(Clone)]
pub struct SpacetimeTestFunction<T: Real> {
    form: Form<T>,
    wedge_offset: Option<[T; 2]>,
}

impl<T: Real> std::fmt::Debug for SpacetimeTestFunction<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpacetimeTestFunction")
            .field("support", &self.support())
            .finish()
    }
}

impl<T: Real> SpacetimeTestFunction<T> {
    /// Product of two one-dimensional factors, `f(x0, x1) = u(x0) v(x1)`.
    pub fn product(
        time: impl Fn(T) -> Complex<T> + Send + Sync + 'static,
        time_support: [T; 2],
        space: impl Fn(T) -> Complex<T> + Send + Sync + 'static,
        space_support: [T; 2],
    ) -> Self {
        Self {
            form: Form::Product {
                time: Arc::new(time),
                time_support,
                space: Arc::new(space),
                space_support,
            },
            wedge_offset: None,
        }
    }

    /// General evaluator with a declared support box.
    pub fn general(
        f: impl Fn(T, T) -> Complex<T> + Send + Sync + 'static,
        support: [[T; 2]; 2],
    ) -> Self {
        Self {
            form: Form::General {
                f: Arc::new(f),
                support,
            },
            wedge_offset: None,
        }
    }

    /// Real Gaussian centered at `(c0, c1)` with width `sigma`, truncated
    /// at ten widths.
    pub fn gaussian(c0: T, c1: T, sigma: T, amplitude: T) -> Self {
        let cut = lit::<T>(10.0) * sigma;
        let bell = move |c: T| {
            move |x: T| {
                let d = (x - c) / sigma;
                Complex::new((-d * d / lit::<T>(2.0)).exp(), T::zero())
            }
        };
        let g0 = bell(c0);
        let g1 = bell(c1);
        Self {
            form: Form::Product {
                time: Arc::new(move |x| g0(x) * Complex::new(amplitude, T::zero())),
                time_support: [c0 - cut, c0 + cut],
                space: Arc::new(g1),
                space_support: [c1 - cut, c1 + cut],
            },
            wedge_offset: None,
        }
    }

    /// Translate by `a`: `f(x) -> f(x - a)`.
    pub fn translated(&self, a: [T; 2]) -> Self {
        let form = match &self.form {
            Form::Product {
                time,
                time_support,
                space,
                space_support,
            } => {
                let t = time.clone();
                let s = space.clone();
                let (a0, a1) = (a[0], a[1]);
                Form::Product {
                    time: Arc::new(move |x| t(x - a0)),
                    time_support: [time_support[0] + a0, time_support[1] + a0],
                    space: Arc::new(move |x| s(x - a1)),
                    space_support: [space_support[0] + a1, space_support[1] + a1],
                }
            }
            Form::General { f, support } => {
                let g = f.clone();
                let (a0, a1) = (a[0], a[1]);
                Form::General {
                    f: Arc::new(move |x0, x1| g(x0 - a0, x1 - a1)),
                    support: [
                        [support[0][0] + a0, support[0][1] + a0],
                        [support[1][0] + a1, support[1][1] + a1],
                    ],
                }
            }
        };
        Self {
            form,
            wedge_offset: self.wedge_offset,
        }
    }

    /// Declare that the numerical support sits inside the wedge shifted
    /// by this offset.
    pub fn with_wedge_offset(mut self, offset: [T; 2]) -> Self {
        self.wedge_offset = Some(offset);
        self
    }

    pub fn wedge_offset(&self) -> Option<[T; 2]> {
        self.wedge_offset
    }

    pub fn evaluate(&self, x0: T, x1: T) -> Complex<T> {
        match &self.form {
            Form::Product { time, space, .. } => time(x0) * space(x1),
            Form::General { f, .. } => f(x0, x1),
        }
    }

    /// Support box `[[x0min, x0max], [x1min, x1max]]`.
    pub fn support(&self) -> [[T; 2]; 2] {
        match &self.form {
            Form::Product {
                time_support,
                space_support,
                ..
            } => [*time_support, *space_support],
            Form::General { support, .. } => *support,
        }
    }

    /// Mass-shell restrictions `(f_plus, f_minus)` as weighted grid
    /// vectors; `sign` in the exponent multiplies both components of the
    /// momentum pairing.
    pub fn fpm(&self, mass: T, grid: &RapidityGrid<T>) -> Result<(Smearing<T>, Smearing<T>)> {
        if mass <= T::zero() {
            return Err(Error::Config("mass must be positive".into()));
        }
        let mut plus = Vec::with_capacity(grid.len());
        let mut minus = Vec::with_capacity(grid.len());
        let two_pi = lit::<T>(2.0) * T::pi();
        for &t in grid.nodes() {
            let p0 = mass * t.cosh();
            let p1 = mass * t.sinh();
            let (fp, fm) = match &self.form {
                Form::Product {
                    time,
                    time_support,
                    space,
                    space_support,
                } => {
                    // exp(i (p0 x0 - p1 x1)) factorizes over the axes
                    let tp = oscillatory_integral(&**time, *time_support, p0)?;
                    let tm = oscillatory_integral(&**time, *time_support, -p0)?;
                    let sp = oscillatory_integral(&**space, *space_support, -p1)?;
                    let sm = oscillatory_integral(&**space, *space_support, p1)?;
                    (tp * sp, tm * sm)
                }
                Form::General { f, support } => {
                    let fp = oscillatory_integral_2d(&**f, *support, [p0, -p1])?;
                    let fm = oscillatory_integral_2d(&**f, *support, [-p0, p1])?;
                    (fp, fm)
                }
            };
            plus.push(fp / Complex::new(two_pi, T::zero()));
            minus.push(fm / Complex::new(two_pi, T::zero()));
        }
        let weight = |i: usize| Complex::new(grid.weights()[i].sqrt(), T::zero());
        let fp = Smearing::from_iterator(
            grid.len(),
            plus.iter().enumerate().map(|(i, &v)| v * weight(i)),
        );
        let fm = Smearing::from_iterator(
            grid.len(),
            minus.iter().enumerate().map(|(i, &v)| v * weight(i)),
        );
        Ok((fp, fm))
    }
}

fn panel_count<T: Real>(width: T, freq: T) -> Result<usize> {
    // keep the per-panel phase advance below ~4 radians
    let cycles = (freq.abs() * width / lit(4.0)).ceil();
    let p: f64 = nalgebra::try_convert(cycles).unwrap_or(f64::MAX);
    let p = p.max(0.0) as usize + 4;
    if p > MAX_PANELS {
        return Err(Error::Numerical(format!(
            "oscillatory quadrature needs {p} panels (cap {MAX_PANELS}); \
             the test function support is too wide for this rapidity cutoff"
        )));
    }
    Ok(p)
}

/// `integral g(x) exp(i freq x) dx` over `[a, b]` by composite
/// Gauss-Legendre with oscillation-scaled panels.
fn oscillatory_integral<T: Real>(
    g: &(dyn Fn(T) -> Complex<T> + Send + Sync),
    [a, b]: [T; 2],
    freq: T,
) -> Result<Complex<T>> {
    let width = b - a;
    if width <= T::zero() {
        return Err(Error::Config("empty support interval".into()));
    }
    let panels = panel_count(width, freq)?;
    let order = 12;
    let (xs, ws) = gauss_legendre::<T>(order);
    let half = width / lit(2.0 * panels as f64);
    let mut acc = Complex::new(T::zero(), T::zero());
    for p in 0..panels {
        let center = a + (lit::<T>(2.0) * lit(p as f64) + T::one()) * half;
        for j in 0..order {
            let x = center + half * xs[j];
            let phase = cx_exp(Complex::new(T::zero(), freq * x));
            acc += g(x) * phase * Complex::new(ws[j] * half, T::zero());
        }
    }
    Ok(acc)
}

fn oscillatory_integral_2d<T: Real>(
    f: &(dyn Fn(T, T) -> Complex<T> + Send + Sync),
    support: [[T; 2]; 2],
    freq: [T; 2],
) -> Result<Complex<T>> {
    let [s0, s1] = support;
    let panels0 = panel_count(s0[1] - s0[0], freq[0])?;
    let panels1 = panel_count(s1[1] - s1[0], freq[1])?;
    let order = 12;
    let (xs, ws) = gauss_legendre::<T>(order);
    let half0 = (s0[1] - s0[0]) / lit(2.0 * panels0 as f64);
    let half1 = (s1[1] - s1[0]) / lit(2.0 * panels1 as f64);
    let mut acc = Complex::new(T::zero(), T::zero());
    for p0 in 0..panels0 {
        let c0 = s0[0] + (lit::<T>(2.0) * lit(p0 as f64) + T::one()) * half0;
        for j0 in 0..order {
            let x0 = c0 + half0 * xs[j0];
            let w0 = ws[j0] * half0;
            for p1 in 0..panels1 {
                let c1 = s1[0] + (lit::<T>(2.0) * lit(p1 as f64) + T::one()) * half1;
                for j1 in 0..order {
                    let x1 = c1 + half1 * xs[j1];
                    let phase = cx_exp(Complex::new(T::zero(), freq[0] * x0 + freq[1] * x1));
                    acc += f(x0, x1)
                        * phase
                        * Complex::new(w0 * ws[j1] * half1, T::zero());
                }
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::norm;

    fn grid() -> RapidityGrid<f64> {
        RapidityGrid::build(3.0, 4, 8).unwrap()
    }

    #[test]
    fn real_function_pairs_fpm_by_conjugation() {
        let f = SpacetimeTestFunction::gaussian(0.3, -0.7, 1.0, 1.0);
        let (fp, fm) = f.fpm(1.0, &grid()).unwrap();
        for (a, b) in fp.iter().zip(fm.iter()) {
            assert!((a.conj() - b).norm() < 1e-13);
        }
    }

    #[test]
    fn gaussian_transform_matches_closed_form() {
        // For a unit-amplitude Gaussian at the origin the transform is
        // sigma^2 exp(-sigma^2 (p0^2 + p1^2)/2).
        let sigma = 0.8f64;
        let f = SpacetimeTestFunction::gaussian(0.0, 0.0, sigma, 1.0);
        let g = grid();
        let (fp, _) = f.fpm(1.0, &g).unwrap();
        for (i, &t) in g.nodes().iter().enumerate() {
            let p0 = t.cosh();
            let p1 = t.sinh();
            let expect = sigma * sigma * (-sigma * sigma * (p0 * p0 + p1 * p1) / 2.0).exp();
            let got = fp[i] / Complex::new(g.weights()[i].sqrt(), 0.0);
            assert!(
                (got - Complex::new(expect, 0.0)).norm() < 1e-10,
                "t = {t}: got {got}, expect {expect}"
            );
        }
    }

    #[test]
    fn translation_multiplies_by_momentum_phase() {
        let f = SpacetimeTestFunction::gaussian(0.0, 0.0, 1.0, 1.0);
        let a = [0.4, -0.9];
        let ft = f.translated(a);
        let g = grid();
        let (fp, fm) = f.fpm(1.0, &g).unwrap();
        let (ftp, ftm) = ft.fpm(1.0, &g).unwrap();
        for (i, &t) in g.nodes().iter().enumerate() {
            let px = t.cosh() * a[0] - t.sinh() * a[1];
            let phase = Complex::new(0.0, px).exp();
            assert!((ftp[i] - fp[i] * phase).norm() < 1e-12);
            assert!((ftm[i] - fm[i] * phase.conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn general_form_agrees_with_product_form() {
        let sigma = 1.0f64;
        let prod = SpacetimeTestFunction::gaussian(0.0, 0.0, sigma, 1.0);
        let gen = SpacetimeTestFunction::general(
            move |x0: f64, x1: f64| {
                Complex::new((-(x0 * x0 + x1 * x1) / (2.0 * sigma * sigma)).exp(), 0.0)
            },
            [[-10.0, 10.0], [-10.0, 10.0]],
        );
        let g = RapidityGrid::build(1.5, 2, 6).unwrap();
        let (pp, pm) = prod.fpm(1.0, &g).unwrap();
        let (gp, gm) = gen.fpm(1.0, &g).unwrap();
        assert!(norm(&(&pp - &gp)) < 1e-9);
        assert!(norm(&(&pm - &gm)) < 1e-9);
    }

    #[test]
    fn unresolvable_oscillation_is_an_error() {
        let f = SpacetimeTestFunction::gaussian(0.0, 0.0, 100.0, 1.0);
        let g = RapidityGrid::build(12.0, 2, 6).unwrap();
        assert!(matches!(f.fpm(1.0, &g), Err(Error::Numerical(_))));
    }
}
