//! Exact construction of Lie algebras, Ricci operators of left-invariant metrics,
//! bracket degenerations and negative-Ricci certificates.

pub mod certify;
pub mod classical;
pub mod cmatrix;
pub mod curvature;
pub mod degeneration;
pub mod error;
pub mod golden;
pub mod io;
pub mod lie;
pub mod poly;
pub mod rational;
pub mod search;
pub mod semidirect;

pub use error::{Error, Result};
