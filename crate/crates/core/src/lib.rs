//! Exact verification engine for van Diejen operators, Koornwinder
//! polynomials and the kernel identities and hypergeometric transformation
//! formulas that relate them.
//!
//! Everything is evaluated over the rationals at seeded random points; no
//! floating point is used anywhere.

pub mod combinat;
pub mod error;
pub mod identities;
pub mod koornwinder;
pub mod linalg;
pub mod qops;
pub mod scalars;

pub use error::{QbcError, Result};
pub use scalars::{Gen, ParamPoint, QMono, Sampler, Scalar};
