//! Finite metric spaces, their lexicographic products and gravitational
//! deformations, and exact metric dimension.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs; file formats and the command-line front end live
//! in the `lexmetric` crate.
//!
//! The main pieces:
//!
//! * [`metric`]: the [`FiniteMetricSpace`] carrier, axiom validation,
//!   nearness, slack, diameter and open balls.
//! * [`constructions`]: graph metrics, the discrete metric, the
//!   gravitational truncation `min{2t, d}`, the lexicographic product and the
//!   bounded squash transform `ηd/(η+d)`.
//! * [`resolving`]: coordinate vectors, resolving sets, an exact
//!   branch-and-bound metric dimension solver, a greedy upper bound and an
//!   enumeration oracle.
//! * [`twins`]: the twin equivalence relation and the special class set that
//!   adds extra landmarks to a product basis.
//! * [`theory`]: side-by-side checks of the product dimension formula, the
//!   product diameter formula, the corollaries and the squash identity.
//! * [`corpus`]: exhaustive small-graph enumeration and seeded random spaces.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod constructions;
pub mod corpus;
mod error;
pub mod metric;
pub mod resolving;
pub mod theory;
pub mod twins;

pub use constructions::{
    discrete_metric, graph_metric, gravitational, lexicographic, squash, Graph, ProductSpace,
};
pub use error::{Error, Result};
pub use metric::{FiniteMetricSpace, MetricTable, PointId, SpaceStats, ValidationReport, Violation};
pub use resolving::{PairTable, ResolveResult, Solver, SolverConfig};
pub use theory::{Guards, Theorem, VerificationReport};
pub use twins::{SpecialClassSet, TwinPartition};

/// Tolerance used when none is given.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
