//! Stackelberg minimum spanning tree pricing (StackMST).
//!
//! A bicolored multigraph has red edges with fixed nonnegative costs and blue
//! edges whose prices are chosen by a leader; a follower then buys a minimum
//! spanning tree, preferring blue edges at equal weight. The leader's revenue
//! is the total price of the blue edges in the tree.
//!
//! The crate provides the instance model with a bit-exact text format
//! ([`instance`]), canonical MST computation and graphic-matroid rank
//! ([`mst`]), min-max pricing of an acyclic blue forest ([`pricing`]), exact
//! and approximate solvers ([`solvers`]), an exact cutting-plane LP relaxation
//! ([`lp`]), and deterministic instance generators ([`generators`]).
//!
//! All solver arithmetic is exact rational; floating point appears only in
//! reported approximation bounds.

pub mod dsu;
pub mod generators;
pub mod instance;
pub mod lp;
pub mod mst;
pub mod pricing;
mod simplex;
pub mod solvers;

pub use instance::{Price, PriceAssignment, Rat, StackInstance};
pub use mst::{EdgeRef, MstResult};
pub use pricing::BlueForest;
pub use solvers::{Budget, Solution};

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("cutting-plane iteration cap exceeded after {0} rounds")]
    IterationCap(usize),
    #[error("separation limit: {0}")]
    Separation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
