//! Clique numbers of integral circulant graphs `X_n(D)` (gcd-graphs).
//!
//! Vertices are `Z_n`; `a` and `b` are adjacent when `gcd(a - b, n)` lies in
//! the divisor set `D`. The crate computes ω exactly by branch and bound,
//! evaluates the closed forms for `|D| <= 2` together with explicit witness
//! cliques, and scans instance ranges for clique numbers that fail to
//! divide `n`.

pub mod clique_theory;
pub mod error;
pub mod gcd_graph;
pub mod max_clique;
pub mod numtheory;
pub mod survey;
pub mod witnesses;

pub use clique_theory::{omega, CliqueOutcome, DispatchOptions, Method, Policy};
pub use error::{Error, Result};
pub use gcd_graph::{DivisorSet, GcdGraph};
pub use max_clique::{max_clique_exact, verify_clique, CliqueWitness, SolveReport, SolverOptions};
