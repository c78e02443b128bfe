pub mod alist;
pub mod anneal;
pub mod bec;
pub mod error;
pub mod generate;
pub mod graph;
pub mod lift;
pub mod pipeline;
pub mod rng;
pub mod stopset;
pub mod suppress;

pub use error::{Error, Result};
pub use graph::{EdgePair, TannerGraph};
