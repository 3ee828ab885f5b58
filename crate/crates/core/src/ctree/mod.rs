//! Conditional inference trees.
//!
//! Each node is grown in two separate steps. First every covariate is tested
//! for association with the outcome (slope t-test for a continuous outcome,
//! one-way ANOVA F for a categorical one); the smallest p-value is
//! Bonferroni-adjusted and the node is split only when it clears `alpha`.
//! Only then is the breakpoint searched, on the selected covariate alone.

mod selection;
mod split;

use std::collections::HashMap;

use thiserror::Error;

pub use selection::{
    anova_test, bonferroni_decision, covariate_test, select_split_variable, test_covariate,
    CovariateTest, SplitDecision, TestResult,
};
pub use split::{best_split_point, SplitPoint};

use crate::data::{ColumnData, ColumnKind, Dataset};
use crate::treemodel::{CovariateMeta, Node, OutcomeMeta, Split, Summary, Tree, TreeError};

#[derive(Debug, Error)]
pub enum FitError {
    #[error("invalid controls: {0}")]
    InvalidControls(String),
    #[error("covariate `{0}` is categorical; only continuous covariates can be split")]
    UnsupportedCovariate(String),
    #[error("expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("need at least 3 observations, got {0}")]
    TooFewObservations(usize),
    #[error("no breakpoint leaves enough rows on both sides")]
    NoAdmissibleSplit,
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Outcome values for a set of rows.
#[derive(Debug, Clone, Copy)]
pub enum Response<'a> {
    Continuous(&'a [f64]),
    Categorical { codes: &'a [usize], levels: usize },
}

impl Response<'_> {
    pub fn len(&self) -> usize {
        match self {
            Response::Continuous(y) => y.len(),
            Response::Categorical { codes, .. } => codes.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Growth controls. `alpha` is the significance level applied to the
/// Bonferroni-adjusted p-value; `mincriterion` is `1 - alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct FitControls {
    alpha: f64,
    /// Minimum rows in a terminal node.
    pub minbucket: usize,
    /// Minimum rows for a node to be considered for splitting.
    pub minsplit: usize,
    /// Maximum depth (root is depth 0); `None` for unlimited.
    pub maxdepth: Option<usize>,
}

impl Default for FitControls {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            minbucket: 7,
            minsplit: 20,
            maxdepth: None,
        }
    }
}

impl FitControls {
    pub fn with_alpha(alpha: f64) -> Result<Self, FitError> {
        let controls = Self {
            alpha,
            ..Self::default()
        };
        controls.validate()?;
        Ok(controls)
    }

    pub fn with_mincriterion(mincriterion: f64) -> Result<Self, FitError> {
        if !(mincriterion > 0.0 && mincriterion < 1.0) {
            return Err(FitError::InvalidControls(format!(
                "mincriterion must lie in (0, 1), got {mincriterion}"
            )));
        }
        Self::with_alpha(1.0 - mincriterion)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn mincriterion(&self) -> f64 {
        1.0 - self.alpha
    }

    pub fn validate(&self) -> Result<(), FitError> {
        let bad = |m: String| Err(FitError::InvalidControls(m));
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if self.minbucket < 1 {
            return bad("minbucket must be at least 1".into());
        }
        if self.minsplit < 2 {
            return bad("minsplit must be at least 2".into());
        }
        if self.maxdepth == Some(0) {
            return bad("maxdepth must be at least 1".into());
        }
        Ok(())
    }
}

enum Outcome<'a> {
    Continuous(&'a [f64]),
    Categorical { codes: &'a [usize], levels: usize },
}

enum Gathered {
    Continuous(Vec<f64>),
    Categorical(Vec<usize>, usize),
}

impl Gathered {
    fn response(&self) -> Response<'_> {
        match self {
            Gathered::Continuous(y) => Response::Continuous(y),
            Gathered::Categorical(codes, levels) => Response::Categorical {
                codes,
                levels: *levels,
            },
        }
    }

    fn summary(&self) -> Summary {
        match self {
            Gathered::Continuous(y) => {
                let mean = y.iter().sum::<f64>() / y.len() as f64;
                let err = y.iter().map(|v| (v - mean).powi(2)).sum();
                Summary::Continuous { mean, err }
            }
            Gathered::Categorical(codes, levels) => {
                let mut counts = vec![0; *levels];
                for &c in codes {
                    counts[c] += 1;
                }
                Summary::Categorical { counts }
            }
        }
    }
}

struct Grower<'a> {
    outcome: Outcome<'a>,
    covariates: Vec<&'a [f64]>,
    names: Vec<&'a str>,
    controls: &'a FitControls,
    nodes: Vec<Node>,
}

impl Grower<'_> {
    fn gather(&self, rows: &[usize]) -> Gathered {
        match self.outcome {
            Outcome::Continuous(y) => Gathered::Continuous(rows.iter().map(|&r| y[r]).collect()),
            Outcome::Categorical { codes, levels } => {
                Gathered::Categorical(rows.iter().map(|&r| codes[r]).collect(), levels)
            }
        }
    }

    fn grow(&mut self, rows: Vec<usize>, depth: usize) -> Result<usize, FitError> {
        let id = self.nodes.len() + 1;
        let n = rows.len();
        let response = self.gather(&rows);
        // Placeholder keeps preorder numbering while children are grown.
        self.nodes
            .push(Node::terminal(id, n, response.summary(), None));

        let depth_ok = self.controls.maxdepth.is_none_or(|d| depth < d);
        if depth_ok && n >= self.controls.minsplit {
            let xs: Vec<Vec<f64>> = self
                .covariates
                .iter()
                .map(|col| rows.iter().map(|&r| col[r]).collect())
                .collect();
            let views: Vec<&[f64]> = xs.iter().map(Vec::as_slice).collect();
            let decision = select_split_variable(response.response(), &views, self.controls)?;
            if let SplitDecision::Split {
                covariate_index, ..
            } = decision
            {
                let x = &xs[covariate_index];
                if let Ok(point) = best_split_point(response.response(), x, self.controls.minbucket)
                {
                    let mut left_rows = Vec::new();
                    let mut right_rows = Vec::new();
                    for (&r, &v) in rows.iter().zip(x) {
                        if v <= point.breakpoint {
                            left_rows.push(r);
                        } else {
                            right_rows.push(r);
                        }
                    }
                    let left = self.grow(left_rows, depth + 1)?;
                    let right = self.grow(right_rows, depth + 1)?;
                    let split = Split::le(self.names[covariate_index], point.breakpoint);
                    self.nodes[id - 1] = Node::inner(id, n, split, left, right);
                    return Ok(id);
                }
            }
        }
        self.nodes[id - 1] = Node::terminal(id, n, response.summary(), Some(rows));
        Ok(id)
    }
}

/// Grow a conditional inference tree.
///
/// Nodes are numbered in preorder from 1. Terminal nodes keep their
/// training rows (0-based) and outcome summary.
pub fn fit(dataset: &Dataset, controls: &FitControls) -> Result<Tree, FitError> {
    controls.validate()?;
    let mut covariates = Vec::with_capacity(dataset.m());
    for col in dataset.covariates() {
        covariates.push(
            col.values()
                .ok_or_else(|| FitError::UnsupportedCovariate(col.name().to_string()))?,
        );
    }
    let (outcome, outcome_meta) = match dataset.outcome().data() {
        ColumnData::Continuous(y) => (
            Outcome::Continuous(y),
            OutcomeMeta {
                name: dataset.outcome().name().to_string(),
                kind: ColumnKind::Continuous,
                categories: vec![],
            },
        ),
        ColumnData::Categorical { codes, labels } => (
            Outcome::Categorical {
                codes,
                levels: labels.len(),
            },
            OutcomeMeta {
                name: dataset.outcome().name().to_string(),
                kind: ColumnKind::Categorical,
                categories: labels.clone(),
            },
        ),
    };
    let mut grower = Grower {
        outcome,
        covariates,
        names: dataset.covariates().iter().map(|c| c.name()).collect(),
        controls,
        nodes: Vec::new(),
    };
    grower.grow((0..dataset.n_rows()).collect(), 0)?;
    let covariate_meta = dataset
        .covariates()
        .iter()
        .map(|c| CovariateMeta {
            name: c.name().to_string(),
            kind: c.kind(),
        })
        .collect();
    Ok(Tree::new(outcome_meta, covariate_meta, grower.nodes)?)
}

/// Terminal-node prediction: the stored mean, or class probabilities in
/// category order.
#[derive(Debug, Clone, PartialEq)]
pub enum Prediction {
    Mean(f64),
    Probabilities(Vec<f64>),
}

impl From<&Summary> for Prediction {
    fn from(summary: &Summary) -> Self {
        match summary {
            Summary::Continuous { mean, .. } => Prediction::Mean(*mean),
            Summary::Categorical { counts } => {
                let total: usize = counts.iter().sum();
                Prediction::Probabilities(counts.iter().map(|&c| c as f64 / total as f64).collect())
            }
        }
    }
}

/// Route a row of named covariate values to its terminal node.
pub fn predict(tree: &Tree, row: &HashMap<String, f64>) -> Result<Prediction, TreeError> {
    let id = tree.route(|name| row.get(name).copied())?;
    Ok(tree
        .node(id)
        .and_then(Node::summary)
        .expect("terminal")
        .into())
}

/// Route row `row` of `dataset` to its terminal node.
pub fn predict_row(tree: &Tree, dataset: &Dataset, row: usize) -> Result<Prediction, TreeError> {
    let id = tree.route(|name| dataset.covariate(name)?.values().map(|v| v[row]))?;
    Ok(tree
        .node(id)
        .and_then(Node::summary)
        .expect("terminal")
        .into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Column;

    fn dataset(y: Vec<f64>, xs: Vec<Vec<f64>>) -> Dataset {
        Dataset::new(
            Column::continuous("y", y).unwrap(),
            xs.into_iter()
                .enumerate()
                .map(|(i, x)| Column::continuous(format!("x{}", i + 1), x).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn controls(minbucket: usize, minsplit: usize) -> FitControls {
        FitControls {
            minbucket,
            minsplit,
            ..FitControls::default()
        }
    }

    #[test]
    fn control_validation() {
        assert!(FitControls::with_alpha(0.0).is_err());
        assert!(FitControls::with_alpha(1.0).is_err());
        assert!(FitControls::with_mincriterion(1.0).is_err());
        let c = FitControls::with_mincriterion(0.95).unwrap();
        assert!((c.alpha() - 0.05).abs() < 1e-12);
        let bad = FitControls {
            maxdepth: Some(0),
            ..FitControls::default()
        };
        assert!(bad.validate().is_err());
        let d = FitControls::default();
        assert_eq!(
            (d.alpha(), d.minbucket, d.minsplit, d.maxdepth),
            (0.05, 7, 20, None)
        );
    }

    #[test]
    fn step_function_splits_once_at_step() {
        let x: Vec<f64> = (0..40).map(f64::from).collect();
        let y: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(i, &v)| if v < 20.0 { 0.0 } else { 10.0 } + 0.01 * (i % 3) as f64)
            .collect();
        let tree = fit(&dataset(y, vec![x]), &controls(1, 2)).unwrap();
        match &tree.root().kind {
            crate::treemodel::NodeKind::Inner { split, .. } => {
                assert_eq!(split.covariate, "x1");
                assert_eq!(split.breakpoint, 19.0);
            }
            _ => panic!("expected a root split"),
        }
    }

    #[test]
    fn tiny_alpha_gives_root_only() {
        let x: Vec<f64> = (0..30).map(|i| ((i * 7) % 30) as f64).collect();
        let y: Vec<f64> = (0..30)
            .map(|i| ((i * 13) % 11) as f64 + 0.1 * x[i])
            .collect();
        let c = FitControls {
            minsplit: 2,
            minbucket: 1,
            ..FitControls::with_alpha(1e-12).unwrap()
        };
        let tree = fit(&dataset(y, vec![x]), &c).unwrap();
        assert_eq!(tree.nodes().len(), 1);
    }

    #[test]
    fn maxdepth_one_caps_terminals() {
        let x: Vec<f64> = (0..60).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|&v| (v / 15.0).floor() * 10.0).collect();
        let c = FitControls {
            maxdepth: Some(1),
            ..controls(1, 2)
        };
        let tree = fit(&dataset(y, vec![x]), &c).unwrap();
        assert!(tree.terminal_count() <= 2);
        assert_eq!(tree.terminal_count(), 2);
    }

    #[test]
    fn categorical_covariate_rejected() {
        let ds = Dataset::new(
            Column::continuous("y", vec![1.0, 2.0]).unwrap(),
            vec![Column::categorical("g", vec![0, 1], vec!["a".into(), "b".into()]).unwrap()],
        )
        .unwrap();
        assert!(matches!(
            fit(&ds, &FitControls::default()),
            Err(FitError::UnsupportedCovariate(_))
        ));
    }

    #[test]
    fn predict_examples() {
        let tree = fit(
            &dataset(vec![7.0; 5], vec![vec![1.0, 2.0, 3.0, 4.0, 5.0]]),
            &FitControls::default(),
        )
        .unwrap();
        let row: HashMap<String, f64> = [("x1".to_string(), 100.0)].into();
        assert_eq!(predict(&tree, &row).unwrap(), Prediction::Mean(7.0));

        let x: Vec<f64> = (0..40).map(f64::from).collect();
        let y: Vec<f64> = x
            .iter()
            .map(|&v| if v <= 2.0 { 1.0 } else { 9.0 })
            .collect();
        let tree = fit(&dataset(y, vec![x]), &controls(1, 2)).unwrap();
        let at = |v: f64| {
            let row: HashMap<String, f64> = [("x1".to_string(), v)].into();
            predict(&tree, &row).unwrap()
        };
        assert_eq!(at(2.0), Prediction::Mean(1.0));
        assert_eq!(at(2.5), Prediction::Mean(9.0));
        assert!(matches!(
            predict(&tree, &HashMap::new()),
            Err(TreeError::MissingCovariate(_))
        ));
    }

    #[test]
    fn categorical_outcome_fit() {
        let x: Vec<f64> = (0..60).map(f64::from).collect();
        let codes: Vec<usize> = x.iter().map(|&v| if v < 30.0 { 0 } else { 1 }).collect();
        let ds = Dataset::new(
            Column::categorical("cls", codes, vec!["lo".into(), "hi".into()]).unwrap(),
            vec![Column::continuous("x1", x).unwrap()],
        )
        .unwrap();
        let tree = fit(&ds, &FitControls::default()).unwrap();
        assert_eq!(tree.terminal_count(), 2);
        let leaf = tree.node(2).unwrap();
        assert_eq!(
            leaf.summary(),
            Some(&Summary::Categorical {
                counts: vec![30, 0]
            })
        );
        assert_eq!(
            predict_row(&tree, &ds, 45).unwrap(),
            Prediction::Probabilities(vec![0.0, 1.0])
        );
    }
}
