//! Convolution algebras of graphs, finite groupoids and Hecke pairs over
//! exact involutive rings.

pub mod convcat;
pub mod equivcore;
pub mod error;
pub mod finitegroupoid;
pub mod graphtopos;
pub mod hecke;
pub mod leavitt;
pub mod linalg;
pub mod norms;
pub mod scalars;
pub mod stonelocale;

pub use error::{Error, Result};
pub use scalars::{FieldScalar, GaussianRational, Involution, LocalizedInt, RingDescriptor, RingKind, Scalar};

/// The integers.
pub type Z = num_bigint::BigInt;
/// The rationals.
pub type Q = num_rational::BigRational;
/// The Gaussian rationals.
pub type QI = GaussianRational;
/// The integers with 2 inverted.
pub type Z2 = LocalizedInt<2>;
/// The integers with 3 inverted.
pub type Z3 = LocalizedInt<3>;
