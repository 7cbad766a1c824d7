//! Type-A quiver varieties, transverse slices to nilpotent orbits and the
//! affine Grassmannian of `GL(m)`, computed over exact fields.
//!
//! Everything is finite and exact: linear maps are dense matrices over `Q` or
//! `F_p`, lattices are subspaces of a truncated slab, and varieties are probed
//! through their `F_q`-point counts.

pub mod combinatorics;
pub mod dictionary;
pub mod error;
pub mod flags;
pub mod grassmannian;
pub mod harness;
pub mod linalg;
pub mod quiver;
pub mod slice;

pub use combinatorics::{Composition, Partition};
pub use error::{Error, Result};
pub use linalg::{ExactMatrix, Field, FieldSpec, Matrix, PrimeField, Rationals};

/// Version tag carried by every JSON document this crate emits or reads.
pub const SCHEMA: &str = "grass-slice/1";
