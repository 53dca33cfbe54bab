//! Numerical laboratory for wedge-local quantum fields in two dimensions.
//!
//! The crate discretizes the rapidity line by composite Gauss-Legendre
//! quadrature, builds the S2-symmetric Fock space with its
//! Zamolodchikov-Faddeev operators on top of that grid, assembles the
//! wedge kernel operators whose singular values control the nuclearity
//! estimates, and realizes the modular nuclearity map on finite
//! dimensional matrix algebras.
//!
//! All core math is generic over the real scalar type through
//! [`Real`]; concrete `f64` aliases live at the crate root.

pub mod error;
pub mod fock;
pub mod modular;
pub mod quadrature;
pub mod scalar;
pub mod scattering;
pub mod spacetime;
pub mod spectral;
pub mod wedge;

pub use error::Error;
pub use scalar::{lit, Real};

/// `f64` rapidity grid.
pub type Grid64 = quadrature::RapidityGrid<f64>;
/// `f64` kernel matrix.
pub type Kernel64 = spectral::KernelMatrix<f64>;
/// `f64` scattering function.
pub type Scattering64 = scattering::ScatteringFunction<f64>;
/// `f64` state vector on the symmetrized Fock space.
pub type Fock64 = fock::FockVector<f64>;
/// `f64` standard-form modular data.
pub type Modular64 = modular::ModularPair<f64>;
