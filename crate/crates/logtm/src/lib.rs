//! Numerical toolkit for sharp log-weighted Trudinger–Moser inequalities and the
//! log-weighted Hardy inequalities behind them, on radial profiles of the unit ball.
//!
//! Profiles are parametrized by `t = ln(1/r)` throughout; see [`profiles`].

pub mod admissibility;
pub mod constants;
pub mod error;
pub mod hardy;
pub mod optimizer;
pub mod par;
pub mod profiles;
pub mod quadrature;
pub mod special;

pub use error::{Error, Result};
