//! Fano fourfolds as zero loci of homogeneous bundles on products of flag
//! varieties: invariants, degeneracy loci, and tabulation.

pub mod error;
pub mod fanovariants;
pub mod loci;
pub mod atlas;

pub use error::{FanoError, Result};
