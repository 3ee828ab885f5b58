//! Generators and brute-force oracles shared by integration and acceptance tests.
#![allow(dead_code)]

use std::path::PathBuf;

use partviz_core::ctree::Response;
use partviz_core::data::{Column, ColumnKind, Dataset};
use partviz_core::treemodel::{CovariateMeta, Node, OutcomeMeta, Predicate, Split, Summary, Tree};
use rand::Rng;
use rand_distr::{Distribution, Normal};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

/// Covariates on a coarse grid so that ties are common.
pub fn random_dataset<R: Rng>(rng: &mut R, n: usize, m: usize) -> Dataset {
    let y: Vec<f64> = (0..n).map(|_| rng.random_range(-50.0..50.0)).collect();
    let covariates = (0..m)
        .map(|j| {
            let levels = rng.random_range(2..=40) as f64;
            let x = (0..n)
                .map(|_| (rng.random::<f64>() * levels).floor() / levels)
                .collect();
            Column::continuous(format!("x{}", j + 1), x).unwrap()
        })
        .collect();
    Dataset::new(Column::continuous("y", y).unwrap(), covariates).unwrap()
}

fn continuous_summary(y: &[f64], rows: &[usize]) -> Summary {
    let n = rows.len() as f64;
    let mean = rows.iter().map(|&r| y[r]).sum::<f64>() / n;
    let err = rows.iter().map(|&r| (y[r] - mean).powi(2)).sum();
    Summary::Continuous { mean, err }
}

/// Random binary tree over `dataset` whose splits always leave both
/// children non-empty. Terminal nodes record their row ids.
pub fn random_tree<R: Rng>(rng: &mut R, dataset: &Dataset, max_depth: usize) -> Tree {
    let y = dataset.outcome().values().unwrap().to_vec();
    let mut nodes = Vec::new();
    let rows: Vec<usize> = (0..dataset.n_rows()).collect();
    grow(rng, dataset, &y, rows, 0, max_depth, &mut nodes);
    let outcome = OutcomeMeta {
        name: dataset.outcome().name().to_string(),
        kind: ColumnKind::Continuous,
        categories: vec![],
    };
    let covariates = dataset
        .covariates()
        .iter()
        .map(|c| CovariateMeta {
            name: c.name().to_string(),
            kind: ColumnKind::Continuous,
        })
        .collect();
    Tree::new(outcome, covariates, nodes).unwrap()
}

fn grow<R: Rng>(
    rng: &mut R,
    dataset: &Dataset,
    y: &[f64],
    rows: Vec<usize>,
    depth: usize,
    max_depth: usize,
    nodes: &mut Vec<Node>,
) -> usize {
    let id = nodes.len() + 1;
    let n = rows.len();
    let split = if depth < max_depth && n >= 2 && rng.random_bool(0.8) {
        pick_split(rng, dataset, &rows)
    } else {
        None
    };
    let Some(split) = split else {
        nodes.push(Node::terminal(
            id,
            n,
            continuous_summary(y, &rows),
            Some(rows),
        ));
        return id;
    };
    nodes.push(Node::terminal(id, n, continuous_summary(y, &rows), None));
    let x = dataset
        .covariate(&split.covariate)
        .unwrap()
        .values()
        .unwrap();
    let (left_rows, right_rows): (Vec<usize>, Vec<usize>) =
        rows.iter().partition(|&&r| split.goes_left(x[r]));
    let left = grow(rng, dataset, y, left_rows, depth + 1, max_depth, nodes);
    let right = grow(rng, dataset, y, right_rows, depth + 1, max_depth, nodes);
    nodes[id - 1] = Node::inner(id, n, split, left, right);
    id
}

fn pick_split<R: Rng>(rng: &mut R, dataset: &Dataset, rows: &[usize]) -> Option<Split> {
    for _ in 0..8 {
        let col = &dataset.covariates()[rng.random_range(0..dataset.m())];
        let x = col.values().unwrap();
        let mut distinct: Vec<f64> = rows.iter().map(|&r| x[r]).collect();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup();
        if distinct.len() < 2 {
            continue;
        }
        // `le` at any value but the largest, `lt` at any value but the smallest.
        let (breakpoint, predicate) = if rng.random_bool(0.5) {
            (
                distinct[rng.random_range(0..distinct.len() - 1)],
                Predicate::Le,
            )
        } else {
            (distinct[rng.random_range(1..distinct.len())], Predicate::Lt)
        };
        return Some(Split {
            covariate: col.name().to_string(),
            breakpoint,
            predicate,
        });
    }
    None
}

/// Criterion of splitting at `x <= v`, computed directly from group means.
pub fn brute_force_criterion(response: Response<'_>, x: &[f64], v: f64) -> f64 {
    match response {
        Response::Continuous(y) => {
            let mean = |it: Vec<f64>| it.iter().sum::<f64>() / it.len() as f64;
            let all = mean(y.to_vec());
            let left: Vec<f64> = y
                .iter()
                .zip(x)
                .filter(|(_, &xi)| xi <= v)
                .map(|(&a, _)| a)
                .collect();
            let right: Vec<f64> = y
                .iter()
                .zip(x)
                .filter(|(_, &xi)| xi > v)
                .map(|(&a, _)| a)
                .collect();
            let (nl, nr) = (left.len() as f64, right.len() as f64);
            nl * (mean(left) - all).powi(2) + nr * (mean(right) - all).powi(2)
        }
        Response::Categorical { codes, levels } => {
            let mut table = vec![[0.0f64; 2]; levels];
            for (&c, &xi) in codes.iter().zip(x) {
                table[c][usize::from(xi > v)] += 1.0;
            }
            let n = codes.len() as f64;
            let side = [0, 1].map(|s| table.iter().map(|row| row[s]).sum::<f64>());
            let mut chi2 = 0.0;
            for row in &table {
                let total = row[0] + row[1];
                if total == 0.0 {
                    continue;
                }
                for s in 0..2 {
                    let e = side[s] * total / n;
                    chi2 += (row[s] - e).powi(2) / e;
                }
            }
            chi2
        }
    }
}

/// Exhaustive search: every distinct value, strict improvement only, so
/// ties keep the smallest breakpoint.
pub fn brute_force_split(
    response: Response<'_>,
    x: &[f64],
    minbucket: usize,
) -> Option<(f64, f64)> {
    let mut distinct = x.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let mut best: Option<(f64, f64)> = None;
    for v in distinct {
        let nl = x.iter().filter(|&&xi| xi <= v).count();
        if nl < minbucket || x.len() - nl < minbucket {
            continue;
        }
        let c = brute_force_criterion(response, x, v);
        if best.is_none_or(|(_, b)| c > b) {
            best = Some((v, c));
        }
    }
    best
}

/// Type-7 quantile written independently: sort, then interpolate between
/// the order statistics either side of `1 + (n - 1) p`.
pub fn quantile_oracle(values: &[f64], p: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let h = 1.0 + (v.len() as f64 - 1.0) * p;
    let below = h.floor();
    let j = below as usize;
    if j >= v.len() {
        return v[v.len() - 1];
    }
    v[j - 1] + (h - below) * (v[j] - v[j - 1])
}

/// Random split-search instance with ties and optional categorical outcome.
pub struct SplitInstance {
    pub y: Vec<f64>,
    pub codes: Vec<usize>,
    pub levels: usize,
    pub x: Vec<f64>,
    pub minbucket: usize,
}

impl SplitInstance {
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let n = rng.random_range(2..=50);
        let grid = rng.random_range(2..=60) as f64;
        let x = (0..n)
            .map(|_| (rng.random::<f64>() * grid).floor())
            .collect();
        let normal = Normal::new(0.0, rng.random_range(0.1..20.0)).unwrap();
        let y = (0..n).map(|_| normal.sample(rng)).collect();
        let levels = rng.random_range(2..=4);
        let codes = (0..n).map(|_| rng.random_range(0..levels)).collect();
        let minbucket = rng.random_range(1..=(n / 2).max(1));
        Self {
            y,
            codes,
            levels,
            x,
            minbucket,
        }
    }

    pub fn continuous(&self) -> Response<'_> {
        Response::Continuous(&self.y)
    }

    pub fn categorical(&self) -> Response<'_> {
        Response::Categorical {
            codes: &self.codes,
            levels: self.levels,
        }
    }
}
