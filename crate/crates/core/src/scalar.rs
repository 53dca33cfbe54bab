//! Scalar abstraction and small complex helpers.
//!
//! The crate is generic over the underlying real type. [`Real`] bundles
//! what every module needs; `f32` and `f64` satisfy it. Complex
//! elementary functions are provided here in terms of `RealField` ops so
//! that generic code does not need `num_traits::Float` bounds on the
//! component type.

use nalgebra::RealField;
use num_complex::Complex;

/// Real scalar type the whole crate is generic over.
pub trait Real: RealField + Copy {}

impl<T: RealField + Copy> Real for T {}

/// Convert an `f64` literal into the generic scalar.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    nalgebra::convert(x)
}

/// Imaginary unit.
#[inline]
pub fn i<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

/// `exp(z)` for complex `z`.
#[inline]
pub fn cx_exp<T: Real>(z: Complex<T>) -> Complex<T> {
    let r = z.re.exp();
    Complex::new(r * z.im.cos(), r * z.im.sin())
}

/// `sinh(z)` for complex `z`.
#[inline]
pub fn cx_sinh<T: Real>(z: Complex<T>) -> Complex<T> {
    Complex::new(z.re.sinh() * z.im.cos(), z.re.cosh() * z.im.sin())
}

/// `cosh(z)` for complex `z`.
#[inline]
pub fn cx_cosh<T: Real>(z: Complex<T>) -> Complex<T> {
    Complex::new(z.re.cosh() * z.im.cos(), z.re.sinh() * z.im.sin())
}

/// `1/z` for complex `z`.
#[inline]
pub fn cx_inv<T: Real>(z: Complex<T>) -> Complex<T> {
    let d = z.re * z.re + z.im * z.im;
    Complex::new(z.re / d, -z.im / d)
}

/// Modulus of a complex number.
#[inline]
pub fn cx_abs<T: Real>(z: Complex<T>) -> T {
    z.re.hypot(z.im)
}
