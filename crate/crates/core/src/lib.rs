//! Spectral toolkit for the two-dimensional gapped Dirac operator
//!
//! ```text
//! D = -i sigma . grad + m sigma_3 + gamma V(x),
//! ```
//!
//! with the two-center dipole potential V(x) = 1/|x - x0| - 1/|x + x0| and its
//! relatives (regularized cores, the pure 1/r^2 dipole tail, multipole tails of
//! general charge distributions). The essential spectrum of D is
//! (-inf, -m] u [m, inf); everything interesting happens in the gap (-m, m).
//!
//! What lives where:
//!
//! * [`potentials`] — potential models, multipole moments of charge
//!   distributions, and the finite/infinite bound-state classification by
//!   leading nonvanishing moment.
//! * [`mathieu`] — the angular operator M(q) = -d^2/dtheta^2 + 2q cos(theta)
//!   on the circle, assembled as a symmetric tridiagonal matrix in the Fourier
//!   basis. Its negative eigenvalues label the channels that bind.
//! * [`forms`] — the decoupled quadratic forms s_(+/-) and the certified
//!   variational machinery: disjointly supported trial families whose
//!   quadrature-verified negativity gives lower bounds on the number of gap
//!   eigenvalues.
//! * [`spectrum`] — radial channel solvers on log grids (geometric towers of
//!   near-edge eigenvalues, clustering-rate fits, finite-count solver for
//!   higher-order tails) and a direct block solver for the full two-component
//!   operator with pollution filters.
//! * [`bounds`] — Hardy/Kato-type constants and inequality checks, free
//!   resolvent kernel estimates, Lieb-Thirring-type parameter plumbing,
//!   semiclassical integrals, and eigenvalue-moment reports.
//!
//! The crate is no_std + alloc: pure computation, no IO. The companion CLI
//! crate carries file formats and drivers.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bounds;
pub mod forms;
pub mod fourier;
pub mod geom;
pub mod linalg;
pub mod mathieu;
pub mod potentials;
pub mod quad;
pub mod special;
pub mod spectrum;

pub use geom::{Vec2, Vec3};
