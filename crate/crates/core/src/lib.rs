//! Infinitesimal rigidity of graph-of-groups realisations through cellular
//! sheaf cohomology, computed exactly over ℚ.
//!
//! The layers, bottom up: [`linalg`] and [`subspace`] (exact linear algebra),
//! [`graphs`] (hypergraphs, sparsity, extension moves), [`sheaf`] (cellular
//! sheaves and their cohomology), [`motion`] and [`associated`] (the two sheaf
//! families), [`motion_ext`] (certified extensions of motion sheaves),
//! [`lie`] (Euclidean and parallel-redrawing models) and [`oracles`]
//! (independent brute-force cross-checks).

pub mod associated;
pub mod error;
pub mod graphs;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod motion;
pub mod motion_ext;
pub mod oracles;
pub mod rng;
pub mod sheaf;
pub mod subspace;

pub use error::{Error, Result};
pub use linalg::{Matrix, Rational};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
