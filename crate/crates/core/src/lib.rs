//! A 3D polyhedral virtual element solver for the time-dependent
//! incompressible inductionless MHD equations.
//!
//! The discretization couples four fields on general polyhedral meshes of
//! the unit cube: an enhanced H¹-conforming virtual element space for the
//! velocity, discontinuous polynomials for the pressure and the electric
//! potential, and an H(div)-conforming virtual element space for the current
//! density. Divergence constraints are imposed exactly, so discrete velocity
//! and current density are pointwise divergence-free. Time stepping uses a
//! scalar-auxiliary-variable (SAV) splitting: each step solves two Stokes-type
//! and two mixed-Poisson systems with constant operators plus one scalar
//! equation, and is unconditionally energy stable at first (backward Euler)
//! and second (BDF2) order.
//!
//! Crate layout follows the pipeline:
//! [`mesh`] → [`basis`] → [`projectors`] → [`spaces`] → [`forms`] → [`sav`] → [`harness`].

pub mod basis;
pub mod error;
pub mod forms;
pub mod harness;
pub mod mesh;
pub mod parallel;
pub mod projectors;
pub mod sav;
pub mod spaces;

pub use error::{Error, Result};
