//! Construction and verification of plane tilings by equilateral triangles in
//! which no two triangles share a full side.
//!
//! The crate is `no_std` (it needs `alloc`). Coordinates are generic over
//! [`Scalar`]: [`QSqrt3`] gives exact arithmetic in `Q(√3)`, `f64` gives a
//! tolerance-based float backend.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod clip;
pub mod generators;
pub mod geometry;
mod index;
pub mod model;
pub mod scalar;
pub mod structure;
pub mod verify;
pub mod walk;

pub use geometry::{Point, Segment, Triangle};
pub use model::{Interiority, Mark, Patch, PatchError, Role, Window};
pub use scalar::{Backend, QSqrt3, Scalar, Sign, Tolerance};
