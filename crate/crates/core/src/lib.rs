//! Conditional inference trees and subgroup figures.
//!
//! The crate is organised bottom-up:
//!
//! - [`data`]: tabular ingestion plus the order statistics, binning and
//!   density estimates shared by fitting and rendering.
//! - [`ctree`]: test-gated recursive partitioning.
//! - [`treemodel`]: the tree structure, root-to-leaf path extraction,
//!   interval consolidation and the JSON interchange document.
//! - [`viz`]: per-subgroup scenes, grid layout and SVG output.

pub mod ctree;
pub mod data;
pub mod treemodel;
pub mod viz;

mod error;

pub use error::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;
