//! Exact spectral analysis of polyhedral convex processes.

pub mod cone;
pub mod control;
mod dd;
pub mod error;
pub mod fixtures;
pub mod io;
mod lp;
pub mod matrix;
pub mod poly;
pub mod process;
pub mod rational;
pub mod spectrum;
pub mod subspace;
pub mod verifier;

pub use cone::{hrep_to_vrep, vrep_to_hrep, HRep, PolyhedralCone, Polyhedron, VRep};
pub use error::{Error, Result};
pub use matrix::RationalMatrix;
pub use process::{ConvexProcess, LinearProcess, WeakInvariance};
pub use poly::{char_poly, roots_in_nonneg_reals, stable_subspace, Polynomial, RootLocation};
pub use rational::Rational;
pub use subspace::Subspace;
