use serde::{Deserialize, Serialize};

use super::TreeError;
use crate::data::ColumnKind;

/// Direction of a binary split: rows with `value <= breakpoint` (or `<` for
/// [`Predicate::Lt`]) go to the left child.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Predicate {
    Le,
    Lt,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub covariate: String,
    pub breakpoint: f64,
    pub predicate: Predicate,
}

impl Split {
    pub fn le(covariate: impl Into<String>, breakpoint: f64) -> Self {
        Self {
            covariate: covariate.into(),
            breakpoint,
            predicate: Predicate::Le,
        }
    }

    pub fn goes_left(&self, value: f64) -> bool {
        match self.predicate {
            Predicate::Le => value <= self.breakpoint,
            Predicate::Lt => value < self.breakpoint,
        }
    }
}

/// Outcome summary held by a node.
#[derive(Debug, Clone, PartialEq)]
pub enum Summary {
    /// Mean and residual sum of squares about it.
    Continuous { mean: f64, err: f64 },
    /// Count per outcome category.
    Categorical { counts: Vec<usize> },
}

impl Summary {
    pub fn kind(&self) -> ColumnKind {
        match self {
            Summary::Continuous { .. } => ColumnKind::Continuous,
            Summary::Categorical { .. } => ColumnKind::Categorical,
        }
    }

    /// Index of the most frequent category, lowest index on ties.
    pub fn modal_class(&self) -> Option<usize> {
        match self {
            Summary::Categorical { counts } => {
                let max = counts.iter().copied().max()?;
                counts.iter().position(|&c| c == max)
            }
            Summary::Continuous { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    Inner {
        split: Split,
        left: usize,
        right: usize,
    },
    Terminal {
        summary: Summary,
        /// Training rows, known for fitted trees only.
        rows: Option<Vec<usize>>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: usize,
    pub n: usize,
    pub kind: NodeKind,
}

impl Node {
    pub fn terminal(id: usize, n: usize, summary: Summary, rows: Option<Vec<usize>>) -> Self {
        Self {
            id,
            n,
            kind: NodeKind::Terminal { summary, rows },
        }
    }

    pub fn inner(id: usize, n: usize, split: Split, left: usize, right: usize) -> Self {
        Self {
            id,
            n,
            kind: NodeKind::Inner { split, left, right },
        }
    }

    pub fn is_terminal(&self) -> bool {
        matches!(self.kind, NodeKind::Terminal { .. })
    }

    pub fn summary(&self) -> Option<&Summary> {
        match &self.kind {
            NodeKind::Terminal { summary, .. } => Some(summary),
            NodeKind::Inner { .. } => None,
        }
    }

    pub fn rows(&self) -> Option<&[usize]> {
        match &self.kind {
            NodeKind::Terminal { rows, .. } => rows.as_deref(),
            NodeKind::Inner { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeMeta {
    pub name: String,
    pub kind: ColumnKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub categories: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovariateMeta {
    pub name: String,
    pub kind: ColumnKind,
}

/// Binary recursive partition with nodes numbered `1..=N` in preorder.
#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    outcome: OutcomeMeta,
    covariates: Vec<CovariateMeta>,
    nodes: Vec<Node>,
    parents: Vec<Option<usize>>,
}

impl Tree {
    /// Build a tree, checking preorder numbering, child structure, `n`
    /// bookkeeping and summary kinds.
    pub fn new(
        outcome: OutcomeMeta,
        covariates: Vec<CovariateMeta>,
        nodes: Vec<Node>,
    ) -> Result<Self, TreeError> {
        if nodes.is_empty() {
            return Err(TreeError::Empty);
        }
        for (i, node) in nodes.iter().enumerate() {
            if node.id != i + 1 {
                return Err(TreeError::NotPreorder(format!(
                    "position {} holds id {}",
                    i + 1,
                    node.id
                )));
            }
        }
        if outcome.kind == ColumnKind::Categorical && outcome.categories.is_empty() {
            return Err(TreeError::Schema {
                id: 0,
                reason: "categorical outcome needs a category list".into(),
            });
        }

        let count = nodes.len();
        let mut parents = vec![None; count];
        let mut expected = 1;
        let mut stack = vec![1usize];
        while let Some(id) = stack.pop() {
            if id != expected {
                return Err(TreeError::NotPreorder(format!(
                    "visited node {id} where node {expected} was expected"
                )));
            }
            expected += 1;
            let node = &nodes[id - 1];
            if node.n == 0 {
                return Err(TreeError::Schema {
                    id,
                    reason: "n must be at least 1".into(),
                });
            }
            match &node.kind {
                NodeKind::Inner { split, left, right } => {
                    if left == right {
                        return Err(TreeError::ChildCount { id });
                    }
                    for &child in [left, right] {
                        if child == 0 || child > count {
                            return Err(TreeError::UnknownNode(child));
                        }
                        if child <= id {
                            return Err(TreeError::NotPreorder(format!(
                                "node {id} has child {child}"
                            )));
                        }
                        parents[child - 1] = Some(id);
                    }
                    let children = nodes[left - 1].n + nodes[right - 1].n;
                    if children != node.n {
                        return Err(TreeError::Bookkeeping {
                            id,
                            n: node.n,
                            children,
                        });
                    }
                    if !covariates.iter().any(|c| c.name == split.covariate) {
                        return Err(TreeError::UnknownCovariate(split.covariate.clone()));
                    }
                    if !split.breakpoint.is_finite() {
                        return Err(TreeError::Schema {
                            id,
                            reason: "breakpoint must be finite".into(),
                        });
                    }
                    stack.push(*right);
                    stack.push(*left);
                }
                NodeKind::Terminal { summary, rows } => {
                    check_summary(id, node.n, summary, &outcome)?;
                    if let Some(rows) = rows {
                        if rows.len() != node.n {
                            return Err(TreeError::Bookkeeping {
                                id,
                                n: node.n,
                                children: rows.len(),
                            });
                        }
                    }
                }
            }
        }
        if expected != count + 1 {
            return Err(TreeError::NotPreorder(format!(
                "{} of {count} nodes unreachable from the root",
                count + 1 - expected
            )));
        }
        Ok(Self {
            outcome,
            covariates,
            nodes,
            parents,
        })
    }

    pub fn outcome(&self) -> &OutcomeMeta {
        &self.outcome
    }

    pub fn covariates(&self) -> &[CovariateMeta] {
        &self.covariates
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> Option<&Node> {
        id.checked_sub(1).and_then(|i| self.nodes.get(i))
    }

    pub fn root(&self) -> &Node {
        &self.nodes[0]
    }

    pub fn parent(&self, id: usize) -> Option<usize> {
        self.parents.get(id.checked_sub(1)?).copied().flatten()
    }

    /// Terminal node ids in ascending (preorder) order.
    pub fn terminal_ids(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .filter(|n| n.is_terminal())
            .map(|n| n.id)
            .collect()
    }

    pub fn terminal_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_terminal()).count()
    }

    pub fn inner_count(&self) -> usize {
        self.nodes.len() - self.terminal_count()
    }

    /// Number of edges from the root to `id`.
    pub fn depth_of(&self, id: usize) -> usize {
        let mut depth = 0;
        let mut cur = id;
        while let Some(p) = self.parent(cur) {
            depth += 1;
            cur = p;
        }
        depth
    }

    pub fn max_depth(&self) -> usize {
        self.terminal_ids()
            .into_iter()
            .map(|id| self.depth_of(id))
            .max()
            .unwrap_or(0)
    }

    /// Follow split predicates from the root to a terminal node id.
    pub fn route<F>(&self, lookup: F) -> Result<usize, TreeError>
    where
        F: Fn(&str) -> Option<f64>,
    {
        let mut node = self.root();
        loop {
            match &node.kind {
                NodeKind::Terminal { .. } => return Ok(node.id),
                NodeKind::Inner { split, left, right } => {
                    let value = lookup(&split.covariate)
                        .ok_or_else(|| TreeError::MissingCovariate(split.covariate.clone()))?;
                    let next = if split.goes_left(value) {
                        *left
                    } else {
                        *right
                    };
                    node = &self.nodes[next - 1];
                }
            }
        }
    }
}

fn check_summary(
    id: usize,
    n: usize,
    summary: &Summary,
    outcome: &OutcomeMeta,
) -> Result<(), TreeError> {
    let fail = |reason: String| Err(TreeError::Schema { id, reason });
    match (summary, outcome.kind) {
        (Summary::Continuous { mean, err }, ColumnKind::Continuous) => {
            if !mean.is_finite() || !err.is_finite() || *err < 0.0 {
                return fail("mean and err must be finite with err >= 0".into());
            }
        }
        (Summary::Categorical { counts }, ColumnKind::Categorical) => {
            if counts.len() != outcome.categories.len() {
                return fail(format!(
                    "{} counts for {} categories",
                    counts.len(),
                    outcome.categories.len()
                ));
            }
            let total: usize = counts.iter().sum();
            if total != n {
                return Err(TreeError::Bookkeeping {
                    id,
                    n,
                    children: total,
                });
            }
        }
        (s, k) => return fail(format!("{:?} summary for a {:?} outcome", s.kind(), k)),
    }
    Ok(())
}
