//! Tree structure, subgroup paths and the interchange document.

mod interchange;
mod path;
mod text;
mod tree;

use thiserror::Error;

pub use interchange::{export_json, import_tree, INTERCHANGE_VERSION};
pub use path::{
    consolidate, consolidate_conditions, path_node, rows_matching, subgroup_rows, Condition,
    Constraint, Interval, Op, RawPath, SubgroupPath,
};
pub use text::export_text;
pub use tree::{CovariateMeta, Node, NodeKind, OutcomeMeta, Predicate, Split, Summary, Tree};

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("invalid tree document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported interchange version {0}, expected 1")]
    Version(u32),
    #[error("tree has no nodes")]
    Empty,
    #[error("node {id}: {reason}")]
    Schema { id: usize, reason: String },
    #[error("node ids must be 1..N in preorder: {0}")]
    NotPreorder(String),
    #[error("node {id}: inner nodes need two distinct children")]
    ChildCount { id: usize },
    #[error("node {id}: n = {n} but children hold {children}")]
    Bookkeeping {
        id: usize,
        n: usize,
        children: usize,
    },
    #[error("split on unknown covariate `{0}`")]
    UnknownCovariate(String),
    #[error("no node with id {0}")]
    UnknownNode(usize),
    #[error("node {0} is not a terminal node")]
    NotTerminal(usize),
    #[error("conditions on `{0}` leave an empty interval")]
    EmptyIntersection(String),
    #[error("no value supplied for covariate `{0}`")]
    MissingCovariate(String),
    #[error("column `{0}` must be continuous to evaluate split conditions")]
    NotContinuous(String),
}
