//! Gleason-type machinery for generalized quantum measurements.
//!
//! * [`operator`]: Hermitian operators, effects, projectors, POVMs and
//!   density operators, with the convex decomposition of effects into
//!   projectors.
//! * [`frame`]: frame functions, their linear extension to Hermitian
//!   operators, and reconstruction of the generating density operator.
//! * [`geometry`]: qubit effects in Bloch form, fiducial vector sets,
//!   rotations and the second-moment test.
//! * [`harmonics`]: spherical harmonics, the harmonic sum conditions and
//!   admissibility of harmonics in frame functions on restricted families.
//! * [`catalog`]: trine, tetrahedra, platonic solids, polygons.
//! * [`io`] and [`cli`]: file formats and the `qframe` command line.

pub mod catalog;
pub mod cli;
pub mod error;
pub mod frame;
pub mod geometry;
pub mod harmonics;
pub mod io;
pub mod operator;
pub mod random;
pub mod tol;

pub use error::{Error, Result};
