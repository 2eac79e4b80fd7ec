//! Exact-arithmetic invariants of Feynman-style multigraphs: Kirchhoff
//! polynomials, virtual-motive classes of graph hypersurfaces, finite-field
//! point counts, hyperplane-arrangement characteristic polynomials, the
//! complete intersections attached to circuit matrices, wonderful
//! compactifications of graph configuration spaces, and CSM-class
//! polynomials, together with the necessary-condition checks for
//! F1-structures on all of them.

pub mod arrangement;
pub mod conf;
pub mod corpus;
pub mod count;
pub mod csm;
pub mod error;
pub mod graph;
pub mod hyper;
pub mod lambda;
pub mod linalg;
pub mod motive;
pub mod multipoly;
pub mod poly;

pub use error::Error;

/// Default evaluation budget for brute-force counting sweeps.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

pub type Result<T> = std::result::Result<T, Error>;
