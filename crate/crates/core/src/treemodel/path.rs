use super::{NodeKind, Predicate, Summary, Tree, TreeError};
use crate::data::Dataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Le,
    Lt,
    Gt,
    Ge,
}

impl Op {
    pub fn symbol(self) -> &'static str {
        match self {
            Op::Le => "<=",
            Op::Lt => "<",
            Op::Gt => ">",
            Op::Ge => ">=",
        }
    }
}

/// One raw split condition met on the way to a terminal node.
#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub covariate: String,
    pub op: Op,
    pub value: f64,
}

impl Condition {
    pub fn new(covariate: impl Into<String>, op: Op, value: f64) -> Self {
        Self {
            covariate: covariate.into(),
            op,
            value,
        }
    }

    pub fn holds(&self, x: f64) -> bool {
        match self.op {
            Op::Le => x <= self.value,
            Op::Lt => x < self.value,
            Op::Gt => x > self.value,
            Op::Ge => x >= self.value,
        }
    }
}

impl std::fmt::Display for Condition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {} {}", self.covariate, self.op.symbol(), self.value)
    }
}

/// Interval on one covariate; infinite bounds are unbounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub lower_open: bool,
    pub upper: f64,
    pub upper_open: bool,
}

impl Default for Interval {
    fn default() -> Self {
        Self::UNBOUNDED
    }
}

impl Interval {
    pub const UNBOUNDED: Interval = Interval {
        lower: f64::NEG_INFINITY,
        lower_open: true,
        upper: f64::INFINITY,
        upper_open: true,
    };

    /// The usual `(lower, upper]` interval.
    pub fn left_open(lower: f64, upper: f64) -> Self {
        Self {
            lower,
            lower_open: true,
            upper,
            upper_open: false,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lower_open {
            x > self.lower
        } else {
            x >= self.lower
        };
        let below = if self.upper_open {
            x < self.upper
        } else {
            x <= self.upper
        };
        above && below
    }

    /// True when no real number satisfies both bounds. `[v, v]` is not empty.
    pub fn is_empty(&self) -> bool {
        self.lower > self.upper
            || (self.lower == self.upper && (self.lower_open || self.upper_open))
    }

    fn tighten(&mut self, cond: &Condition) {
        match cond.op {
            Op::Le | Op::Lt => {
                let open = cond.op == Op::Lt;
                if cond.value < self.upper || (cond.value == self.upper && open) {
                    self.upper = cond.value;
                    self.upper_open = open;
                }
            }
            Op::Gt | Op::Ge => {
                let open = cond.op == Op::Gt;
                if cond.value > self.lower || (cond.value == self.lower && open) {
                    self.lower = cond.value;
                    self.lower_open = open;
                }
            }
        }
    }

    /// Equivalent conditions: one per finite bound.
    pub fn to_conditions(&self, covariate: &str) -> Vec<Condition> {
        let mut out = Vec::with_capacity(2);
        if self.upper.is_finite() {
            let op = if self.upper_open { Op::Lt } else { Op::Le };
            out.push(Condition::new(covariate, op, self.upper));
        }
        if self.lower.is_finite() {
            let op = if self.lower_open { Op::Gt } else { Op::Ge };
            out.push(Condition::new(covariate, op, self.lower));
        }
        out
    }

    /// `(a, b]` with `decimals` digits after the point; infinite ends print
    /// as `-∞` and `∞`.
    pub fn format(&self, decimals: usize) -> String {
        let bound = |v: f64| {
            if v == f64::NEG_INFINITY {
                "-∞".to_string()
            } else if v == f64::INFINITY {
                "∞".to_string()
            } else {
                format!("{v:.decimals$}")
            }
        };
        format!(
            "{}{}, {}{}",
            if self.lower_open { '(' } else { '[' },
            bound(self.lower),
            bound(self.upper),
            if self.upper_open { ')' } else { ']' },
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub covariate: String,
    pub interval: Interval,
}

/// Root-to-terminal conditions before consolidation.
#[derive(Debug, Clone, PartialEq)]
pub struct RawPath {
    pub terminal_id: usize,
    pub conditions: Vec<Condition>,
    pub n: usize,
    pub summary: Summary,
}

/// A terminal subgroup described by one interval per constrained covariate.
#[derive(Debug, Clone, PartialEq)]
pub struct SubgroupPath {
    pub terminal_id: usize,
    /// Raw conditions in root-first order.
    pub conditions: Vec<Condition>,
    /// Ordered by each covariate's first appearance on the path.
    pub constraints: Vec<Constraint>,
    pub n: usize,
    pub summary: Summary,
}

impl SubgroupPath {
    pub fn constraint(&self, covariate: &str) -> Option<&Interval> {
        self.constraints
            .iter()
            .find(|c| c.covariate == covariate)
            .map(|c| &c.interval)
    }

    /// Conditions equivalent to the consolidated constraints.
    pub fn constraint_conditions(&self) -> Vec<Condition> {
        self.constraints
            .iter()
            .flat_map(|c| c.interval.to_conditions(&c.covariate))
            .collect()
    }
}

/// Collect the split conditions from the root down to `terminal_id`:
/// `<=` (or `<`) when descending left, `>` (or `>=`) when descending right.
pub fn path_node(tree: &Tree, terminal_id: usize) -> Result<RawPath, TreeError> {
    let node = tree
        .node(terminal_id)
        .ok_or(TreeError::UnknownNode(terminal_id))?;
    let summary = node
        .summary()
        .ok_or(TreeError::NotTerminal(terminal_id))?
        .clone();

    let mut conditions = Vec::new();
    let mut child = terminal_id;
    while let Some(parent) = tree.parent(child) {
        if let NodeKind::Inner { split, left, .. } = &tree.node(parent).expect("parent").kind {
            let op = match (child == *left, split.predicate) {
                (true, Predicate::Le) => Op::Le,
                (true, Predicate::Lt) => Op::Lt,
                (false, Predicate::Le) => Op::Gt,
                (false, Predicate::Lt) => Op::Ge,
            };
            conditions.push(Condition::new(
                split.covariate.clone(),
                op,
                split.breakpoint,
            ));
        }
        child = parent;
    }
    conditions.reverse();
    Ok(RawPath {
        terminal_id,
        conditions,
        n: node.n,
        summary,
    })
}

/// Intersect conditions per covariate.
pub fn consolidate_conditions(conditions: &[Condition]) -> Result<Vec<Constraint>, TreeError> {
    let mut out: Vec<Constraint> = Vec::new();
    for cond in conditions {
        let idx = match out.iter().position(|c| c.covariate == cond.covariate) {
            Some(i) => i,
            None => {
                out.push(Constraint {
                    covariate: cond.covariate.clone(),
                    interval: Interval::UNBOUNDED,
                });
                out.len() - 1
            }
        };
        out[idx].interval.tighten(cond);
    }
    for c in &out {
        if c.interval.is_empty() {
            return Err(TreeError::EmptyIntersection(c.covariate.clone()));
        }
    }
    Ok(out)
}

pub fn consolidate(raw: &RawPath) -> Result<SubgroupPath, TreeError> {
    Ok(SubgroupPath {
        terminal_id: raw.terminal_id,
        conditions: raw.conditions.clone(),
        constraints: consolidate_conditions(&raw.conditions)?,
        n: raw.n,
        summary: raw.summary.clone(),
    })
}

fn covariate_values<'a>(dataset: &'a Dataset, name: &str) -> Result<&'a [f64], TreeError> {
    dataset
        .covariate(name)
        .ok_or_else(|| TreeError::UnknownCovariate(name.to_string()))?
        .values()
        .ok_or_else(|| TreeError::NotContinuous(name.to_string()))
}

/// 0-based indices of the rows inside every interval, ascending.
pub fn subgroup_rows(
    dataset: &Dataset,
    constraints: &[Constraint],
) -> Result<Vec<usize>, TreeError> {
    let columns = constraints
        .iter()
        .map(|c| covariate_values(dataset, &c.covariate).map(|v| (v, &c.interval)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((0..dataset.n_rows())
        .filter(|&i| columns.iter().all(|(v, iv)| iv.contains(v[i])))
        .collect())
}

/// 0-based indices of the rows meeting every raw condition, ascending.
pub fn rows_matching(dataset: &Dataset, conditions: &[Condition]) -> Result<Vec<usize>, TreeError> {
    let columns = conditions
        .iter()
        .map(|c| covariate_values(dataset, &c.covariate).map(|v| (v, c)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((0..dataset.n_rows())
        .filter(|&i| columns.iter().all(|(v, c)| c.holds(v[i])))
        .collect())
}
