//! JSON interchange document.
//!
//! ```json
//! {
//!   "version": 1,
//!   "outcome": {"name": "y", "kind": "continuous"},
//!   "covariates": [{"name": "x", "kind": "continuous"}],
//!   "nodes": [
//!     {"id": 1, "n": 5, "split": {"covariate": "x", "breakpoint": 2.0,
//!                                 "predicate": "le", "left": 2, "right": 3}},
//!     {"id": 2, "n": 2, "terminal": {"mean": 1.0, "err": 0.5}},
//!     {"id": 3, "n": 3, "terminal": {"mean": 9.0, "err": 1.5}}
//!   ]
//! }
//! ```
//!
//! Categorical outcomes list `categories` and store `{"counts": [..]}` in
//! terminals. Unknown fields are rejected.

use serde::{Deserialize, Serialize};

use super::{
    CovariateMeta, Node, NodeKind, OutcomeMeta, Predicate, Split, Summary, Tree, TreeError,
};

pub const INTERCHANGE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    version: u32,
    outcome: OutcomeMeta,
    covariates: Vec<CovariateMeta>,
    nodes: Vec<NodeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    id: usize,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    split: Option<SplitDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    terminal: Option<TerminalDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SplitDoc {
    covariate: String,
    breakpoint: f64,
    predicate: Predicate,
    left: usize,
    right: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TerminalDoc {
    Continuous(ContinuousDoc),
    Categorical(CategoricalDoc),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ContinuousDoc {
    mean: f64,
    err: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CategoricalDoc {
    counts: Vec<usize>,
}

/// Parse and validate an interchange document.
pub fn import_tree(document: &str) -> Result<Tree, TreeError> {
    let doc: Document = serde_json::from_str(document)?;
    if doc.version != INTERCHANGE_VERSION {
        return Err(TreeError::Version(doc.version));
    }
    let nodes = doc
        .nodes
        .into_iter()
        .map(|nd| {
            let kind = match (nd.split, nd.terminal) {
                (Some(s), None) => NodeKind::Inner {
                    split: Split {
                        covariate: s.covariate,
                        breakpoint: s.breakpoint,
                        predicate: s.predicate,
                    },
                    left: s.left,
                    right: s.right,
                },
                (None, Some(t)) => NodeKind::Terminal {
                    summary: match t {
                        TerminalDoc::Continuous(c) => Summary::Continuous {
                            mean: c.mean,
                            err: c.err,
                        },
                        TerminalDoc::Categorical(c) => Summary::Categorical { counts: c.counts },
                    },
                    rows: None,
                },
                _ => {
                    return Err(TreeError::Schema {
                        id: nd.id,
                        reason: "exactly one of `split` and `terminal` is required".into(),
                    })
                }
            };
            Ok(Node {
                id: nd.id,
                n: nd.n,
                kind,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Tree::new(doc.outcome, doc.covariates, nodes)
}

/// Serialise a tree as a pretty-printed interchange document. Training row
/// memberships are not part of the format.
pub fn export_json(tree: &Tree) -> String {
    let doc = Document {
        version: INTERCHANGE_VERSION,
        outcome: tree.outcome().clone(),
        covariates: tree.covariates().to_vec(),
        nodes: tree
            .nodes()
            .iter()
            .map(|node| match &node.kind {
                NodeKind::Inner { split, left, right } => NodeDoc {
                    id: node.id,
                    n: node.n,
                    split: Some(SplitDoc {
                        covariate: split.covariate.clone(),
                        breakpoint: split.breakpoint,
                        predicate: split.predicate,
                        left: *left,
                        right: *right,
                    }),
                    terminal: None,
                },
                NodeKind::Terminal { summary, .. } => NodeDoc {
                    id: node.id,
                    n: node.n,
                    split: None,
                    terminal: Some(match summary {
                        Summary::Continuous { mean, err } => {
                            TerminalDoc::Continuous(ContinuousDoc {
                                mean: *mean,
                                err: *err,
                            })
                        }
                        Summary::Categorical { counts } => {
                            TerminalDoc::Categorical(CategoricalDoc {
                                counts: counts.clone(),
                            })
                        }
                    }),
                },
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("tree serialises");
    text.push('\n');
    text
}
