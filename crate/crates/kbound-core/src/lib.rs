//! Spectral and algebraic upper bounds on the k-independence number of a graph.
//!
//! The k-independence number `alpha_k(G)` is the largest set of vertices whose
//! pairwise distances all exceed `k`; equivalently it is the independence
//! number of the k-th power graph `G^k`. This crate computes certified upper
//! bounds on `alpha_k` from the spectrum of `G` alone, together with exact
//! brute-force oracles for validating every bound on small graphs.
//!
//! The crate is split into five modules:
//!
//! * [`graph`] — graph representation, BFS distances, graph powers, walk
//!   counts, line graphs, and k-distance predicates;
//! * [`spectral`] — dense symmetric eigendecomposition (cyclic Jacobi),
//!   matrix polynomials, PSD tests, and group inverses;
//! * [`lp`] — a dense two-phase simplex solver with Bland's rule for the
//!   small linear programs the polynomial bounds reduce to;
//! * [`bounds`] — the bound computations themselves, each returning a
//!   [`bounds::BoundReport`] with a certificate;
//! * [`exact`] — branch-and-bound oracles for `alpha_k` and `chi_k` plus
//!   exact rank over prime fields.
//!
//! The crate is `no_std` (with `alloc`); all file formats and the CLI live in
//! the companion `kbound` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bounds;
pub mod exact;
pub mod graph;
pub mod lp;
pub mod spectral;

pub use bounds::{BoundReport, MatrixVectorPair, Method, ThetaLowerReport, Tolerances};
pub use graph::{ColoringPartition, DistanceMatrix, Graph, GraphError};
pub use spectral::{Polynomial, SpectralDecomposition, SymMatrix};
