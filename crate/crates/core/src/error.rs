use thiserror::Error;

use crate::ctree::FitError;
use crate::data::DataError;
use crate::treemodel::TreeError;
use crate::viz::RenderError;

/// Any failure raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Render(#[from] RenderError),
}
