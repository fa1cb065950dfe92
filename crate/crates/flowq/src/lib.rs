//! Exact flow-polynomial engine for connected multigraphs over odd
//! finite fields.
//!
//! The core pipeline enumerates nonzero edge weights, reads off the
//! quadratic character of a maximal nonsingular principal minor of the
//! weighted Laplacian, and folds the graded character sums into the
//! number of nowhere-zero flows. Independent combinatorial oracles
//! (spanning-tree sums, forest sums, deletion–contraction, direct flow
//! counting) and complex-arithmetic identity checks validate every
//! stage.

pub mod enumerate;
mod exec;
pub mod field;
pub mod flowpoly;
pub mod graph;
pub mod laplacian;
pub mod treesum;
pub mod verify;

pub use enumerate::{EnumError, EnumOptions, STable};
pub use field::{FieldElem, FieldError, FieldParams};
pub use flowpoly::{FlowError, IntPolynomial};
pub use graph::{GraphError, IncidenceMatrix, Multigraph};
pub use laplacian::{LaplacianError, RankCertificate, SymmetricFqMatrix};
pub use treesum::TreeSumError;
pub use verify::{CheckError, CheckReport};
