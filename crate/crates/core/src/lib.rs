//! Exact computations on products of flag varieties.
//!
//! The crate is organised bottom up:
//!
//! * [`repcore`]: partitions, weights, Littlewood–Richardson, Weyl dimensions, Borel–Weil–Bott.
//! * [`character`]: torus characters of (virtual) homogeneous bundles.
//! * [`chowring`]: flag factors, ambients, Chow classes, localization integrals, HRR.
//! * [`bundlecalc`]: irreducible bundles and the λ-ring of bundle expressions.
//! * [`sheafcohom`]: cohomology tables through Borel–Weil–Bott and Künneth.
//! * [`dsl`]: the textual notation for ambients and bundles.
//!
//! Everything is exact: integers are arbitrary precision and classes carry rational
//! coefficients.

pub mod bundlecalc;
pub mod character;
pub mod chowring;
pub mod dsl;
pub mod error;
pub mod repcore;
pub mod series;
pub mod sheafcohom;

pub use error::{CoreError, Result};
