//! File formats, checkpoints and the experiment harness around `gst-core`.

pub mod checkpoint;
pub mod config;
pub mod error;
pub mod experiment;
pub mod io;
pub mod manifest;
pub mod metrics;

pub use config::RunConfig;
pub use error::RunError;
