//! Exact q-series engine for theta quotients, level one and level two
//! modular forms, virtual bundle expansions and the anomaly cancellation
//! identities built from them.
//!
//! Everything symbolic is exact rational arithmetic. The only floating point
//! code is the numeric theta kernel in [`theta::numeric`] and the numeric
//! modularity checks, which serve as oracles.

pub mod anomaly;
pub mod cli;
pub mod error;
pub mod graded;
pub mod kring;
pub mod modforms;
pub mod ring;
pub mod series;
pub mod theta;

pub use error::{Error, Result};
pub use graded::{GradedCtx, GradedPoly, Mono};
pub use ring::{Algebra, Rat, Ring};
pub use series::QSeries;
