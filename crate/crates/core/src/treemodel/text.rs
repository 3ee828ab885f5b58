use std::fmt::Write;

use super::{NodeKind, Predicate, Summary, Tree};

fn fixed_trimmed(x: f64, decimals: usize) -> String {
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

fn summary_text(tree: &Tree, n: usize, summary: &Summary) -> String {
    match summary {
        Summary::Continuous { mean, err } => format!(
            "{} (n = {n}, err = {})",
            fixed_trimmed(*mean, 3),
            fixed_trimmed(*err, 1)
        ),
        Summary::Categorical { counts } => {
            let modal = summary.modal_class().unwrap_or(0);
            let label = &tree.outcome().categories[modal];
            let miss = 100.0 * (1.0 - counts[modal] as f64 / n as f64);
            format!("{label} (n = {n}, err = {}%)", fixed_trimmed(miss, 1))
        }
    }
}

/// Indented listing of a tree, one line per node, followed by node counts.
///
/// ```text
/// [1] root
/// |   [2] x <= 2: 1 (n = 2, err = 0.5)
/// |   [3] x > 2: 9 (n = 3, err = 1.5)
/// ```
///
/// Terminal means are printed to three decimals and `err` to one, with
/// trailing zeros dropped; breakpoints use their shortest exact form.
pub fn export_text(tree: &Tree) -> String {
    let mut out = String::new();
    let covariates: Vec<&str> = tree.covariates().iter().map(|c| c.name.as_str()).collect();
    let _ = writeln!(out, "Model formula:");
    let _ = writeln!(out, "{} ~ {}", tree.outcome().name, covariates.join(" + "));
    let _ = writeln!(out);
    let _ = writeln!(out, "Fitted party:");

    // (node id, depth, condition label)
    let mut stack: Vec<(usize, usize, Option<String>)> = vec![(1, 0, None)];
    while let Some((id, depth, cond)) = stack.pop() {
        let node = tree.node(id).expect("valid id");
        let _ = write!(out, "{}[{id}] ", "|   ".repeat(depth));
        let _ = write!(out, "{}", cond.as_deref().unwrap_or("root"));
        match &node.kind {
            NodeKind::Terminal { summary, .. } => {
                let _ = writeln!(out, ": {}", summary_text(tree, node.n, summary));
            }
            NodeKind::Inner { split, left, right } => {
                let _ = writeln!(out);
                let (l, r) = match split.predicate {
                    Predicate::Le => ("<=", ">"),
                    Predicate::Lt => ("<", ">="),
                };
                let v = split.breakpoint;
                stack.push((
                    *right,
                    depth + 1,
                    Some(format!("{} {r} {v}", split.covariate)),
                ));
                stack.push((
                    *left,
                    depth + 1,
                    Some(format!("{} {l} {v}", split.covariate)),
                ));
            }
        }
    }

    let _ = writeln!(out);
    let _ = writeln!(out, "Number of inner nodes:    {}", tree.inner_count());
    let _ = writeln!(out, "Number of terminal nodes: {}", tree.terminal_count());
    out
}
