//! Trace functions modulo `m`, their normalized Fourier and Mellin
//! transforms, short-interval partial sums, and numerical checks of the
//! inequalities and equidistribution statements built on them.
//!
//! The Fourier convention throughout is
//! `phi_hat(h) = m^{-1/2} sum_{x mod m} phi(x) e(hx/m)` with `e(t) = exp(2 pi i t)`.

pub mod bounds;
pub mod calibration;
pub mod equidist;
pub mod error;
pub mod mellin;
pub mod modarith;
pub mod spectrum;
pub mod sums;
pub mod tracezoo;

pub use bounds::BoundReport;
pub use error::{Error, Result};
pub use modarith::{Modulus, Poly, RationalFunctionModM};
pub use spectrum::{dft_fast, dft_naive, make_spectral_pair, FunctionTable, SpectralPair};
pub use sums::{Interval, PartialSumTable};
pub use tracezoo::Family;
