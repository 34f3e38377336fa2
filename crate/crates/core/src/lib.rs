//! Slice-regular functions of a quaternionic variable on the unit ball.
//!
//! The crate covers quaternion arithmetic, truncated power series
//! `f(q) = sum q^n a_n` with the star-product algebra, the splitting of a
//! series into two holomorphic slice components and its inverse, and the
//! Gaussian-weighted Fock norms, inner products and kernels built on top.

pub mod checks;
pub mod error;
pub mod fock;
pub mod io;
pub mod kernels;
pub mod multi;
pub mod quadrature;
pub mod quaternion;
pub mod series;
pub mod slice;
pub mod sphere;
pub mod sup;
pub mod verify;

pub use error::{Error, Result};
pub use fock::{fock_norm_p, inner_product, slice_norm_p, FockParams, NormReport};
pub use kernels::{atomic_synthesis, lattice_points, normalized_kernel_eval, star_exp_eval, AtomicData};
pub use multi::{MultiMonomial, MultiPolynomial};
pub use quadrature::QuadratureGrid;
pub use quaternion::{decompose, ImaginaryUnit, Quaternion, SliceCoords};
pub use series::SliceSeries;
pub use slice::{extend, split, ComplexSlicePolynomial, SlicePair};
pub use sphere::{default_sphere, sphere_sample};
pub use sup::{sup_norm, SupSampling};
