//! Poincaré-Reeb trees of small level curves around a strict local minimum
//! of a real bivariate polynomial.

pub mod error;
pub mod geometry;
pub mod io;
pub mod pipeline;
pub mod polar;
pub mod poly;
pub mod reeb;
pub mod shape;
pub mod stabilize;
pub mod trace;

pub use error::{Error, Result};
