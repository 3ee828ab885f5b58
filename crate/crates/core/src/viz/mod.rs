//! Subgroup figures.
//!
//! Each terminal node of a tree becomes one subplot: a histogram of the
//! outcome within the subgroup, overlaid with bars that show where the
//! subgroup's covariate constraints fall on the percentile scale of the
//! full dataset. Subplots are arranged on a grid and serialised to SVG.

mod color;
mod layout;
mod scene;
mod subplot;
mod svg;

pub use color::{palette, Color, PaletteKind};
pub use layout::{grid_shape, layout, MAX_SUBPLOTS};
pub use scene::{Anchor, Group, Item, Primitive, Role, Scene, Shape, Tick};
pub use subplot::{bar_extent, subplot_scene, RenderOptions, CELL_HEIGHT, CELL_WIDTH};
pub use svg::render_svg;

use crate::data::{DataError, Dataset};
use crate::treemodel::{consolidate, path_node, Tree, TreeError};

#[derive(Debug, thiserror::Error)]
pub enum RenderError {
    #[error("color type must be 1 to 5, got {0}")]
    ColorType(u8),
    #[error("alpha must lie in [0, 1], got {0}")]
    Alpha(f64),
    #[error("{0} must be a positive finite scale, got {1}")]
    TextScale(&'static str, f64),
    #[error("terminal node {0} matches no rows of the dataset")]
    EmptySubgroup(usize),
    #[error("nothing to draw")]
    NoSubplots,
    #[error(
        "the tree has {0} terminal nodes but a figure holds at most {MAX_SUBPLOTS}; \
         restrict the tree (e.g. lower maxdepth or alpha) before rendering"
    )]
    TooManySubplots(usize),
    #[error("a categorical outcome can only be drawn in interval mode")]
    CategoricalNeedsInterval,
    #[error("outcome kind of the dataset does not match the tree")]
    OutcomeMismatch,
    #[error("invalid output size {0} x {1}")]
    BadDimensions(f64, f64),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// One subplot per terminal node, in preorder, laid out on a grid.
pub fn render_tree(
    tree: &Tree,
    dataset: &Dataset,
    options: &RenderOptions,
) -> Result<Scene, RenderError> {
    options.validate()?;
    if tree.outcome().kind != dataset.outcome().kind() {
        return Err(RenderError::OutcomeMismatch);
    }
    let terminals = tree.terminal_ids();
    if terminals.len() > MAX_SUBPLOTS {
        return Err(RenderError::TooManySubplots(terminals.len()));
    }
    let scenes = terminals
        .into_iter()
        .map(|id| {
            let path = consolidate(&path_node(tree, id)?)?;
            subplot_scene(&path, dataset, options)
        })
        .collect::<Result<Vec<_>, _>>()?;
    layout(scenes)
}
