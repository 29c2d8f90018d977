//! Exact-arithmetic toolkit for nilpotent-orbit combinatorics and
//! Hamiltonian reduction by stages in type A.
//!
//! The crate is organised around the pipeline that takes a dominance cover
//! of partitions to a verified two-stage reduction datum:
//!
//! - [`partitions`]: partitions, dominance order, covering relations;
//! - [`pyramids`]: shifted Young diagrams, fillings, induced nilpotents and
//!   gradings;
//! - [`lie`]: sparse rational matrices, brackets, centralizers, Jordan data,
//!   sl2-triples;
//! - [`gradings`]: good-grading checks, symplectic form on the degree -1
//!   piece, Lagrangians, Premet subalgebras;
//! - [`stages`]: the cover construction (e2, k, m2, h2'), the row-shift
//!   centralizer basis, and the full verification report;
//! - [`uhbar`]: the hbar-extended enveloping algebra as a PBW rewriting
//!   system, shifted-ideal quotients, invariants, and the two-stage
//!   comparison map;
//! - [`poisson`]: the classical shadow on polynomial functions of the dual
//!   Lie algebra;
//! - [`render`]: ascii/TeX/DOT output for pyramids and Hasse diagrams.
//!
//! All arithmetic is exact over arbitrary-precision rationals.

pub mod error;
pub mod fixtures;
pub mod gradings;
pub mod lie;
pub mod linalg;
pub mod partitions;
pub mod poisson;
pub mod pyramids;
pub mod rat;
pub mod render;
pub mod stages;
pub mod uhbar;

pub use error::{CoreError, Result};
pub use gradings::{GoodGradingReport, Grading, PremetReport, SympForm};
pub use lie::{Char, Mat, Subalg};
pub use partitions::{CoverRows, Partition};
pub use poisson::{Poly, PoissonSpace};
pub use pyramids::{Filling, Pyramid};
pub use rat::Rat;
pub use stages::{StageData, StageReport};
pub use uhbar::{PbwElem, ReductionCtx};
