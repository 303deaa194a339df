//! Exact symbolic engine for linear systems of partial differential operators.
//!
//! The coefficient field is `Q(params)(x_1..x_n)` with arbitrary-precision
//! rational arithmetic throughout; the operator ring is the Weyl-type ring
//! `K[d_1..d_n]` with `d_i * a = a * d_i + da/dx_i`. On top of the operator
//! ring the crate provides left Groebner bases for submodules of free modules,
//! compatibility conditions (syzygies), free resolutions, the double-duality
//! parametrizability test with torsion extraction, ext-module zero-tests and
//! Spencer delta-cohomology dimensions, together with a catalog of classical
//! operators (Killing, Riemann, Einstein, Airy, Beltrami, Medolaghi, ...),
//! a small text format for user-defined systems and a CLI.

pub mod error;
pub mod scalars;
pub mod ops;
pub mod linalg;
pub mod groebner;
pub mod homology;
pub mod spencer;
pub mod catalog;
pub mod oracle;
pub mod sysdsl;
pub mod report;
pub mod acceptance;

pub use error::{EngineError, Result};
pub use groebner::{Budget, GroebnerBasis, Membership, ModTermOrder};
pub use homology::{
    cc, duality_test, ext_zero, left_invertible, resolve, verify_parametrization, DualityReport,
    ExtReport, Resolution, Verdict,
};
pub use ops::{DiffOp, OpMatrix};
pub use scalars::{Poly, RationalFunction, VarContext};
