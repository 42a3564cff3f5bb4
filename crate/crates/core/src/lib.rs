//! Solvers for the two-sided obstacle problem that governs the
//! superconductivity region of a thin-shell superconductor.
//!
//! The functional E_beta(V) = int |grad V|^2 + beta int |-Delta V + H| is
//! minimized by the solution of the two-sided obstacle problem
//! min { int |grad V|^2 + 2 H V : |V| <= beta/2 }, and the superconducting
//! region is SC_beta = {|V| < beta/2}, the set where the vorticity measure
//! mu = -Delta V + H vanishes.
//!
//! The crate provides:
//! * [`surface`]: axisymmetric surfaces of revolution with Simpson
//!   quadrature, and [`mesh`]: triangulated spheres with a cotangent
//!   Laplacian.
//! * [`fields`]: H, *F, beta_c and the level-set integrals I, I+-, J of an
//!   axisymmetric potential, with the critical gaps beta1*, beta2*.
//! * [`obstacle1d`]: the semi-analytic regime construction and an
//!   independent projected-relaxation solver for the axisymmetric problem.
//! * [`obstacle2d`]: projected Gauss-Seidel on triangle meshes, the SC
//!   region, vorticity and energies.
//! * [`barriers`]: the piecewise-cubic comparison profiles whose widths
//!   scale like beta^(1/3).
//! * [`analysis`]: beta sweeps, monotonicity/continuity checks, scaling
//!   fits, thickness bounds and detection of frozen free-boundary pieces.
//! * [`vortex`]: discrete point/circle approximations of the limiting
//!   vorticity measure and their Green-function energy.

// `!(x > 0)` rejects NaN along with nonpositive values; the positive
// comparison is the intended admissibility test
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod barriers;
pub mod error;
pub mod fields;
pub mod grid;
pub mod io;
pub mod mesh;
pub mod obstacle1d;
pub mod obstacle2d;
pub mod surface;
pub mod vortex;

pub use error::{Error, Result};
