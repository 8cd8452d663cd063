//! Measure-scaling quasi-isometries between bounded-degree graphs, computed on
//! finite windows.
//!
//! The crate works with explicitly enumerated balls of Cayley graphs
//! ([`graph::GraphWindow`]), tabulated maps between them ([`maps::QiMap`]) and
//! exact vertex counts. It provides the boundary calculus, Følner estimates of
//! scaling factors, exact-size partitions of graphs, bijection realization by
//! matching, and the arithmetic of scaling groups.
//!
//! Everything here is `no_std` with `alloc`; file formats and the experiment
//! runner live in the `qiscale` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod cayley;
pub mod error;
pub mod folner;
pub mod graph;
pub mod maps;
pub mod partition;
pub mod realize;
pub mod scaling;
pub mod seed;
pub mod test_sets;

pub use error::{Error, Result};
pub use graph::{GraphWindow, Vertex, VertexSet};

/// Exact non-negative rational used for counts and ratios.
pub type Rational = num_rational::Ratio<u64>;
