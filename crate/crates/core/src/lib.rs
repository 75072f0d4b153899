//! Numerical laboratory for planar and spatial harmonic mappings.
//!
//! The crate builds harmonic maps of the unit disk from boundary data on
//! convex curves (Poisson extension of a degree-one boundary map), harmonic
//! gradient maps of the unit ball, and evaluates lower bounds on derivatives
//! and Jacobians of such maps as signed margins.
//!
//! Everything here is pure computation on owned values: the crate is
//! `no_std` and only needs `alloc`. File formats, scenario parsing, random
//! galleries and the command line live in the `harmlab` companion crate.
//!
//! Module map:
//!
//! | module | contents |
//! |--------|----------|
//! | [`curves`] | convex curves by arc length, supporting lines, distance, inradius, diameter |
//! | [`boundary`] | boundary maps from speed profiles, mollification, Fourier coefficients |
//! | [`harmonic2d`] | Poisson extension in the disk, Wirtinger derivatives, Jacobian identities |
//! | [`harmonic3d`] | harmonic polynomials in three variables, gradient maps, ball Poisson extension |
//! | [`diffops`] | finite differences, singular values, distortion, mean-value tests, ball averages |
//! | [`conformal`] | small catalog of univalent maps with explicit image geometry |
//! | [`claims`] | inequality checks producing [`claims::ClaimReport`]s |
//! | [`rkc`] | Jacobian certification and the homotopy sweep |
#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod boundary;
pub mod claims;
pub mod conformal;
pub mod curves;
pub mod diffops;
mod error;
pub mod harmonic2d;
pub mod harmonic3d;
pub mod linalg;
pub mod quadrature;
pub mod rkc;
pub mod spectral;

pub use error::{Error, Result};

/// Complex numbers double as plane points throughout the crate.
pub type C64 = num_complex::Complex64;

/// A point of three-space.
pub type P3 = [f64; 3];

pub use boundary::{BoundaryMap, FourierCoeffs, SpeedProfile};
pub use claims::{ClaimId, ClaimReport, Scenario};
pub use curves::{ConvexCurve, ConvexDomain2, SupportLine};
pub use harmonic2d::{DiskGrid, DiskHarmonicMap};
pub use harmonic3d::{HarmonicPoly3, Poly3, PolyMap3};
