//! Numerical verification kit for smoothed averages of the central values
//! `L(1/2 + alpha, chi_{8d})` over odd squarefree `d`.
//!
//! The crate is organized bottom-up:
//!
//! * [`arith`]: Kronecker symbols, sieves, squarefree enumeration.
//! * [`specfun`]: complex gamma, Riemann/Hurwitz zeta, real-character
//!   L-series and the gamma-factor combinations of the functional equation.
//! * [`weights`]: the bump weight, its Mellin transform, vertical-line
//!   quadrature and the approximate-functional-equation kernel `V_alpha`.
//! * [`lvalue`]: central values by the approximate functional equation and
//!   an independent Hurwitz-zeta oracle.
//! * [`gauss`]: the Gauss-type sums `G_k(n)` and the quadratic Poisson
//!   summation formula.
//! * [`series`]: Dirichlet-series / Euler-product identities, each paired
//!   with a brute-force truncated-sum oracle.
//! * [`moment`]: brute-force moment, main term, contour-integral pieces,
//!   residual scan and exponent fit.
//! * [`verify`]: seeded verification sweeps shared by the CLI and the
//!   acceptance suite.
//!
//! Scalar kernels are generic over [`num_traits::Float`]; the aliases below
//! fix them to `f64`.

pub mod arith;
pub mod error;
pub mod gauss;
pub mod lvalue;
pub mod moment;
pub mod series;
pub mod specfun;
pub mod verify;
pub mod weights;

mod sum;

pub use error::{Error, Result};
pub use num_complex::Complex;

/// Double-precision complex scalar used throughout the number-theoretic code.
pub type C64 = Complex<f64>;
/// Single-precision complex scalar (special functions only).
pub type C32 = Complex<f32>;

/// Complex gamma in double precision.
pub fn gamma64(s: C64) -> Result<C64> {
    specfun::gamma(s)
}

/// Riemann zeta in double precision.
pub fn zeta64(s: C64) -> Result<C64> {
    specfun::zeta(s)
}

/// Hurwitz zeta in double precision.
pub fn hurwitz64(s: C64, a: f64) -> Result<C64> {
    specfun::hurwitz(s, a)
}

pub(crate) fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
