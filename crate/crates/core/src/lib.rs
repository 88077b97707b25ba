//! Backbones of weighted networks chosen by minimum description length.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`]: weighted edge lists, parsing, neighborhoods, backbones.
//! - [`objective`]: description lengths of a graph given a backbone.
//! - [`solver`]: greedy optimizers and an exhaustive oracle.
//! - [`baselines`]: disparity filter, high-salience skeleton, percolation backbone.
//! - [`metrics`]: Jaccard, Hellinger, reachability and summary rows.
//! - [`synth`]: planted-backbone and Dirichlet-multinomial generators.
//! - [`percolation`]: message passing and non-backtracking thresholds.
//! - [`report`]: JSON documents for computed backbones.

pub mod baselines;
pub mod combinatorics;
pub mod error;
pub mod graph;
pub mod metrics;
pub mod objective;
pub mod percolation;
pub mod report;
pub mod solver;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{Backbone, WeightedGraph};
pub use objective::{ObjectiveSpec, Scope, WeightModel};

/// Chapters of the guide in `book/`, compiled here so their examples run as
/// doctests.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    pub mod graphs {}
    #[doc = include_str!("../../../book/src/description-length.md")]
    pub mod description_length {}
    #[doc = include_str!("../../../book/src/greedy.md")]
    pub mod greedy {}
    #[doc = include_str!("../../../book/src/baselines.md")]
    pub mod baselines {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    pub mod metrics {}
    #[doc = include_str!("../../../book/src/synthetic.md")]
    pub mod synthetic {}
    #[doc = include_str!("../../../book/src/percolation.md")]
    pub mod percolation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
