//! Disparate selections of set-valued mappings on simple graphs.
//!
//! A problem instance is a simple graph `(X, E)`, a finite color set `Y`, and
//! a set-valued mapping `F` assigning each vertex a list of admissible colors.
//! Two vertex/color points are *disparate* when they may coexist: equal colors
//! are allowed only across non-adjacent vertices. A *disparate selection*
//! picks one color per vertex so that all picks are pairwise disparate; it
//! generalizes proper list coloring, `alldifferent`, and systems of distinct
//! representatives at once.
//!
//! The crate provides:
//!
//! * [`instance`] — problem representation, JSON parsing, restriction;
//! * [`disparate`] — the disparate relation, hulls, complements, and the
//!   complement mapping (commit a partial choice, propagate its exclusions);
//! * [`oracle`] — transparent brute-force ground truth (backtracking
//!   enumeration, kernel by definition, maximum disparate subsets,
//!   generalized critical sets);
//! * [`collections`] and [`cascades`] — Hall collections, derived
//!   collections, distributedness tests, cascades, and a tiny-scale direct
//!   decision procedure for the generalized Hall condition;
//! * [`kernel`] — the disparate kernel and the two elimination-based
//!   calculation methods (kernel reduction and selection construction);
//! * [`transitive`] — the polynomial fast path for graphs that are disjoint
//!   unions of cliques (closed-form size, t-critical sets, matching-based
//!   solving);
//! * [`apps`] — Latin rectangle extension, systems of distinct
//!   representatives, and Sudoku front ends;
//! * [`cli`] — the command-line surface used by the `disparate` binary;
//! * [`sample`] and [`suites`] — seeded random generators and the named
//!   property suites exercised by `verify`.
//!
//! The `examples/` directory contains one runnable program per capability;
//! start with `cargo run --example solve_coloring`.

pub mod apps;
pub mod cascades;
pub mod cli;
pub mod collections;
pub mod disparate;
mod error;
pub mod instance;
pub mod kernel;
pub mod oracle;
pub mod sample;
pub mod suites;
pub mod transitive;

pub use error::{Error, Result};
pub use instance::{ColorId, ColorSet, Instance, Point, PointSet, Selection, VertexId, VertexSet};
