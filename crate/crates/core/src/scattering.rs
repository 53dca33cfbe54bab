//! Two-particle scattering functions on the physical strip.
//!
//! A scattering function is unitary on the real line, analytic on the
//! strip `0 <= Im z <= pi` and crossing symmetric. Shipped models: the
//! constants `+1` (free Bose) and `-1` (free Fermi), and a one-parameter
//! sinh family `(sinh z - i sin b)/(sinh z + i sin b)` with `0 < b < pi`
//! that satisfies the same constraints in closed form.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::quadrature::RapidityGrid;
use crate::scalar::{cx_abs, cx_sinh, lit, Real};

/// Strip-boundary tolerance for the `Im z` membership check.
const STRIP_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScatteringFunction<T: Real> {
    /// `S2 = +1`, free massive Bose field.
    FreeBose,
    /// `S2 = -1`, free massive Fermi field.
    FreeFermi,
    /// `(sinh z - i sin b)/(sinh z + i sin b)`, `0 < b < pi`.
    Sinh { b: T },
}

/// Maxima over a real grid of the three defining constraint residuals.
#[derive(Debug, Clone, Copy)]
pub struct ConstraintResiduals<T> {
    /// `max |S(t) conj(S(t)) - 1|` (unitarity).
    pub unitarity: T,
    /// `max |conj(S(t)) - S(-t)|` (hermitian analyticity).
    pub hermiticity: T,
    /// `max |S(-t) - S(t + i pi)|` (crossing).
    pub crossing: T,
}

impl<T: Real> ConstraintResiduals<T> {
    pub fn max(&self) -> T {
        self.unitarity.max(self.hermiticity).max(self.crossing)
    }
}

impl<T: Real> ScatteringFunction<T> {
    /// Parse a model selection string: `free-bose`, `free-fermi` or
    /// `sinh:b=<float>`.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "free-bose" => Ok(Self::FreeBose),
            "free-fermi" => Ok(Self::FreeFermi),
            _ => {
                let b = s
                    .strip_prefix("sinh:b=")
                    .and_then(|v| v.parse::<f64>().ok())
                    .ok_or_else(|| {
                        Error::Config(format!(
                            "unknown scattering model `{s}` (expected free-bose, free-fermi or sinh:b=<float>)"
                        ))
                    })?;
                if !(0.0 < b && b < std::f64::consts::PI) {
                    return Err(Error::Config(format!(
                        "sinh parameter b={b} outside (0, pi)"
                    )));
                }
                Ok(Self::Sinh { b: lit(b) })
            }
        }
    }

    /// Canonical selection string, inverse of [`Self::parse`].
    pub fn name(&self) -> String {
        match self {
            Self::FreeBose => "free-bose".into(),
            Self::FreeFermi => "free-fermi".into(),
            Self::Sinh { b } => format!("sinh:b={:?}", b),
        }
    }

    /// Evaluate `S2` at a point of the closed strip `0 <= Im z <= pi`.
    pub fn evaluate(&self, zeta: Complex<T>) -> Result<Complex<T>> {
        let slack = lit::<T>(STRIP_SLACK);
        if zeta.im < -slack || zeta.im > T::pi() + slack {
            return Err(Error::Domain(format!(
                "rapidity argument with Im = {:?} outside the strip [0, pi]",
                zeta.im
            )));
        }
        Ok(match self {
            Self::FreeBose => Complex::new(T::one(), T::zero()),
            Self::FreeFermi => Complex::new(-T::one(), T::zero()),
            Self::Sinh { b } => {
                let sh = cx_sinh(zeta);
                let isb = Complex::new(T::zero(), b.sin());
                (sh - isb) / (sh + isb)
            }
        })
    }

    /// Evaluate at a real rapidity. Infallible: the real line lies in the
    /// strip.
    pub fn eval_real(&self, theta: T) -> Complex<T> {
        self.evaluate(Complex::new(theta, T::zero()))
            .expect("real axis is inside the strip")
    }

    /// Maxima over the grid nodes of the unitarity, hermiticity and
    /// crossing residuals.
    pub fn constraint_residuals(&self, grid: &RapidityGrid<T>) -> Result<ConstraintResiduals<T>> {
        if grid.len() == 0 {
            return Err(Error::Config("empty rapidity grid".into()));
        }
        let one = Complex::new(T::one(), T::zero());
        let mut res = ConstraintResiduals {
            unitarity: T::zero(),
            hermiticity: T::zero(),
            crossing: T::zero(),
        };
        for &theta in grid.nodes() {
            let s = self.eval_real(theta);
            let s_neg = self.eval_real(-theta);
            let s_cross = self.evaluate(Complex::new(theta, T::pi()))?;
            res.unitarity = res.unitarity.max(cx_abs(s * s.conj() - one));
            res.hermiticity = res.hermiticity.max(cx_abs(s.conj() - s_neg));
            res.crossing = res.crossing.max(cx_abs(s_neg - s_cross));
        }
        Ok(res)
    }

    /// Width of analytic continuation below the strip: `None` means
    /// unbounded (constant models); for the sinh family it is the distance
    /// `min(b, pi - b)` to the nearest zero inside the strip, where the
    /// crossing-extended function develops a pole.
    pub fn analyticity_margin(&self) -> Option<T> {
        match self {
            Self::FreeBose | Self::FreeFermi => None,
            Self::Sinh { b } => Some(b.min(T::pi() - *b)),
        }
    }
}
