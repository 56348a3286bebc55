#![cfg_attr(not(test), no_std)]

//! Exact finite-dimensional models for the moduli of logarithmic flat
//! `GL_n`-connections along the plane curve `x^p = y^q`.
//!
//! Everything here is pure exact-rational algebra and only needs `alloc`:
//!
//! - [`wpoly`]: weighted polynomials in `x, y`, the Euler field `E`, the
//!   vector field `V`, and the kernel/cokernel structure of `V`.
//! - [`liecore`]: `gl_n` data for a rational diagonal semisimple `S`:
//!   `ad_S` eigenspaces, centralizer/parabolic support patterns, Jordan types.
//! - [`logdgla`]: the logarithmic de Rham dgla sliced by `L_S`-eigenvalue,
//!   the finite dgla `U_0` and its cohomology, and the homotopy `h`.
//! - [`hpt`]: contractions and the homological perturbation lemma.
//! - [`moduli`]: curvature, residues, gauge action, normalization into
//!   `H^1(U_0)`, Maurer–Cartan families and tangent complexes.
//! - [`manin`]: the shifted Manin triple built from `H^•(U_0)`.
//!
//! IO, JSON and the command line live in the companion `logconn-cli` crate.

extern crate alloc;

pub mod error;
pub mod hpt;
pub mod liecore;
pub mod linalg;
pub mod logdgla;
pub mod manin;
pub mod moduli;
pub mod param;
pub mod polymat;
pub mod rational;
pub mod wpoly;

pub use error::{Error, Result};
pub use rational::Q;
