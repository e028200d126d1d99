//! Path homology of finite acyclic digraphs.
//!
//! The library computes exact Betti numbers of the GLMY (path) homology of a
//! digraph through the embedded chain complex: allowed paths plus boundaries
//! of allowed paths inside the regular-path space, with all boundary, dual
//! and Laplacian matrices over exact rationals. An independent brute-force
//! pipeline over the classical chain groups cross-checks the results, and a
//! classical simulator reproduces the quantum phase-estimation estimator of
//! Betti numbers (path-register encoding, Dirac operator, projected
//! Laplacian, seeded eigenvalue sampling).
//!
//! Entry points:
//! - [`digraph::Digraph::parse`] ingests the edge-list or JSON format;
//! - [`complex::ChainComplex::build`] assembles the embedded complex;
//! - [`spectral::betti_numbers`] reports exact Betti numbers and kernels;
//! - [`oracle::betti_omega`] recomputes them along the classical route;
//! - [`qsim::run_phase_estimation`] runs the simulated estimator.

pub mod complex;
pub mod digraph;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod path;
pub mod qsim;
pub mod rng;
pub mod spectral;

pub use complex::ChainComplex;
pub use digraph::Digraph;
pub use error::{Error, Result};
pub use linalg::{Rational, RationalMatrix};
pub use path::{Chain, ElementaryPath, PathBasis, DEFAULT_MAX_REGULAR_PATHS};
pub use qsim::{EstimateReport, PhaseEstimationConfig, QubitEncoding};
pub use spectral::HomologyReport;
