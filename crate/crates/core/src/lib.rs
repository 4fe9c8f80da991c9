//! Finite strict higher categories and the operator algebras built over them.
//!
//! * [`ncat`]: globular and full-depth categories as explicit tables, with
//!   validators for the category, globular and exchange laws.
//! * [`involutive`]: involutions over arrows, their families, functors and
//!   1-transfors; [`conjugation`] adds conjugates, folding maps and daggers.
//! * [`coeff`]: coefficient *-algebras with several products and involutions.
//! * [`convolution`]: convolution algebras of sections over a finite base.
//! * [`hypermatrix`]: hypermatrices with level-mixed products.
//! * [`cstar`]: numerical C*-checks.

pub mod catalog;
pub mod coeff;
pub mod conjugation;
pub mod convolution;
pub mod cstar;
pub mod error;
pub mod hypermatrix;
pub mod involutive;
pub mod linalg;
pub mod ncat;
pub mod report;
pub mod sampling;

pub use error::{CategoryError, ConvolutionError, HyperError, InvolutionError, NumericError};
pub use ncat::{CellId, FiniteGlobularCategory, FullDepthCategory, LevelSet, MultiCategory};
pub use num_complex::Complex64;
pub use report::{Law, Scope, ValidationReport, Violation};
