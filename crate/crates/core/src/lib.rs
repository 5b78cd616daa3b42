//! Graph sparse training core.
//!
//! Edges of an input graph are pruned once from the scores of a learned edge
//! masker, then repeatedly exchanged (drop the least important active edges,
//! regrow the most important pruned ones) while a two-layer GCN keeps
//! training. Importance combines two signals, both measured against an
//! *anchor* snapshot taken from full-graph training:
//!
//! * a topological score, the first-order change of the anchor adjacency's
//!   extremal eigenvalues when an edge is removed ([`spectral`]);
//! * a semantic score, the gradient magnitude of the anchor-vs-current output
//!   KL divergence with respect to each edge gate ([`engine::criteria`]).
//!
//! The crate is `no_std` and only needs `alloc`. File formats, checkpoints and
//! the experiment CLI live in the `gst` companion crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod baselines;
pub mod dense;
pub mod engine;
pub mod error;
pub mod graph;
pub mod macs;
pub mod nn;
pub mod spectral;
pub mod stats;

pub use error::{Error, Result};
