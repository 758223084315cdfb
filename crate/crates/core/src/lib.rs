//! Cumulative bivariate standard normal distribution to near double precision
//! in absolute terms.
//!
//! [`phi2`] reduces `Phi2(x, y; rho)` to two evaluations on the diagonal
//! `x = y`, where a Taylor expansion of a scaled deficit against an a-priori
//! upper bound is summed recursively ([`diagonal`]). The [`oracle`] module is
//! an independent double-double reference used by the tests and by the
//! error-profiling [`harness`].
//!
//! ```
//! let p = bivnorm::phi2(0.0, 0.0, 0.5).unwrap();
//! assert!((p - 1.0 / 3.0).abs() < 1e-16);
//! ```

// Validation is written as `!(v > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagonal;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod reduction;
pub mod univariate;

pub use diagonal::{phi2_diagonal, phi2_on_diagonal, DiagonalInput};
pub use error::{Error, Result};
pub use reduction::{phi2, Correlation};
pub use univariate::{cdf, density};
