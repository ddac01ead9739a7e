//! Numerical kernels: complex gamma, dense complex linear algebra,
//! polynomial roots, adaptive contour ODE integration, Gauss-Jacobi
//! quadrature. Everything is sized for desk-scale problems (dim <= 16,
//! degree <= 64); clarity and verifiable tolerances over asymptotics.

pub mod gamma;
pub mod linalg;
pub mod ode;
pub mod poly;
pub mod quad;

pub use gamma::{cgamma, recip_gamma, RECIP_GAMMA_SNAP};
pub use linalg::{CMat, Lu};
pub use ode::{integrate_ode, ODE_RTOL_DEFAULT};
pub use poly::{poly_from_roots, poly_roots, POLY_ROOT_RTOL};
pub use quad::gauss_jacobi;
