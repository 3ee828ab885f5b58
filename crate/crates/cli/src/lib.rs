//! Command-line driver: `fit`, `print` and `render`.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use partviz_core::ctree::{fit, FitControls};
use partviz_core::data::{discretize, load_csv, quantile, ColumnKind, Dataset};
use partviz_core::treemodel::{export_json, export_text, import_tree, Tree};
use partviz_core::viz::{render_svg, render_tree, RenderOptions};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("formula must look like `outcome ~ x1 + x2`, got `{0}`")]
    Syntax(String),
    #[error("covariate `{0}` appears more than once")]
    Duplicate(String),
    #[error("outcome `{0}` cannot also be a covariate")]
    OutcomeAsCovariate(String),
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.contains(char::is_whitespace)
}

/// Split `outcome ~ a + b + c` into the outcome and covariate names.
pub fn parse_formula(text: &str) -> Result<(String, Vec<String>), FormulaError> {
    let syntax = || FormulaError::Syntax(text.to_string());
    let (lhs, rhs) = text.split_once('~').ok_or_else(syntax)?;
    let outcome = lhs.trim();
    if !valid_name(outcome) || rhs.contains('~') {
        return Err(syntax());
    }
    let mut covariates: Vec<String> = Vec::new();
    for term in rhs.split('+') {
        let term = term.trim();
        if !valid_name(term) {
            return Err(syntax());
        }
        if term == outcome {
            return Err(FormulaError::OutcomeAsCovariate(term.to_string()));
        }
        if covariates.iter().any(|c| c == term) {
            return Err(FormulaError::Duplicate(term.to_string()));
        }
        covariates.push(term.to_string());
    }
    Ok((outcome.to_string(), covariates))
}

#[derive(Debug, Parser)]
#[command(
    name = "partviz",
    version,
    about = "Fit conditional inference trees and draw one subgroup figure per terminal node"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit a tree and write it as an interchange document.
    Fit {
        #[command(flatten)]
        model: ModelArgs,
        /// Output file (standard output when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a tree as text, either from a document or by fitting.
    Print {
        /// Interchange document to print.
        #[arg(long, conflicts_with_all = ["data", "formula"], required_unless_present = "formula")]
        tree: Option<PathBuf>,
        #[command(flatten)]
        model: OptionalModelArgs,
    },
    /// Render subgroup figures as SVG.
    Render {
        /// Interchange document; the data file supplies its covariates.
        #[arg(long, conflicts_with = "formula", required_unless_present = "formula")]
        tree: Option<PathBuf>,
        #[command(flatten)]
        model: OptionalModelArgs,
        #[command(flatten)]
        render: RenderArgs,
        /// Output file (standard output when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// CSV file with a header row.
    #[arg(long)]
    data: PathBuf,
    /// Model formula, e.g. "kcal ~ liking + hunger".
    #[arg(long)]
    formula: String,
    #[command(flatten)]
    outcome: OutcomeArgs,
    #[command(flatten)]
    controls: ControlArgs,
}

#[derive(Debug, Args)]
struct OptionalModelArgs {
    /// CSV file with a header row.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Model formula, e.g. "kcal ~ liking + hunger".
    #[arg(long, requires = "data")]
    formula: Option<String>,
    #[command(flatten)]
    outcome: OutcomeArgs,
    #[command(flatten)]
    controls: ControlArgs,
}

#[derive(Debug, Args)]
struct OutcomeArgs {
    /// Read the outcome column as categorical.
    #[arg(long)]
    categorical: bool,
    /// Discretise the outcome at these quantile probabilities before
    /// fitting, e.g. 0,0.25,0.5,0.75,1.
    #[arg(long, value_delimiter = ',', value_parser = unit_closed, conflicts_with = "categorical")]
    cut: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
struct ControlArgs {
    /// Significance level for the Bonferroni-adjusted test [default: 0.05].
    #[arg(long, value_parser = unit_open, conflicts_with = "mincriterion")]
    alpha: Option<f64>,
    /// 1 - alpha.
    #[arg(long, value_parser = unit_open)]
    mincriterion: Option<f64>,
    /// Minimum rows in a terminal node.
    #[arg(long, default_value_t = 7, value_parser = clap::value_parser!(u64).range(1..))]
    minbucket: u64,
    /// Minimum rows for a node to be split.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(2..))]
    minsplit: u64,
    /// Maximum depth, root at 0 [default: unlimited].
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    maxdepth: Option<u64>,
}

#[derive(Debug, Args)]
struct RenderArgs {
    /// Bar palette: 1 rainbow, 2 heat, 3 terrain, 4 sequential, 5 diverging.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=5))]
    color_type: u8,
    /// Opacity of the constraint bars.
    #[arg(long, default_value_t = 0.5, value_parser = unit_closed)]
    bar_alpha: f64,
    /// Text scale of the axis titles.
    #[arg(long, default_value_t = 1.5, value_parser = positive)]
    text_title: f64,
    /// Text scale of tick labels.
    #[arg(long, default_value_t = 1.5, value_parser = positive)]
    text_axis: f64,
    /// Text scale of each subplot's title line (mean and n).
    #[arg(long, default_value_t = 1.5, value_parser = positive)]
    text_main: f64,
    /// Text scale of the labels under histogram bins.
    #[arg(long, default_value_t = 1.5, value_parser = positive)]
    text_label: f64,
    /// Text scale of the constraint bar labels.
    #[arg(long, default_value_t = 1.5, value_parser = positive)]
    text_bar: f64,
    /// Text scale of the percentile values at bar ends.
    #[arg(long, default_value_t = 0.7, value_parser = positive)]
    text_percentile: f64,
    /// Decimals for printed numbers.
    #[arg(long, default_value_t = 1)]
    text_round: usize,
    /// Label bins with their category or interval instead of the bin mean.
    #[arg(long)]
    interval: bool,
    /// Overlay a kernel density curve (default).
    #[arg(long, overrides_with = "no_density_line")]
    density_line: bool,
    /// Omit the density curve.
    #[arg(long)]
    no_density_line: bool,
    /// Draw the outcome axis under each histogram.
    #[arg(long)]
    add_h_axis: bool,
    /// Draw the percentile axis above each histogram.
    #[arg(long)]
    add_p_axis: bool,
    /// Document width in pixels [default: figure width].
    #[arg(long, value_parser = positive)]
    width: Option<f64>,
    /// Document height in pixels [default: figure height].
    #[arg(long, value_parser = positive)]
    height: Option<f64>,
}

impl RenderArgs {
    fn options(&self) -> RenderOptions {
        RenderOptions {
            color_type: self.color_type,
            alpha: self.bar_alpha,
            text_title: self.text_title,
            text_axis: self.text_axis,
            text_main: self.text_main,
            text_label: self.text_label,
            text_bar: self.text_bar,
            text_percentile: self.text_percentile,
            text_round: self.text_round,
            add_h_axis: self.add_h_axis,
            add_p_axis: self.add_p_axis,
            density_line: !self.no_density_line,
            interval_mode: self.interval,
        }
    }
}

fn parse_f64(s: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| format!("`{s}` is not a number"))
}

fn unit_open(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("{v} is not in (0, 1)"))
    }
}

fn unit_closed(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is not in [0, 1]"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("{v} is not a positive number"))
    }
}

/// Exit status 1 for invocation problems, 2 for data and model problems.
#[derive(Debug, Error)]
enum CliError {
    #[error("--formula: {0}")]
    Formula(#[from] FormulaError),
    #[error("{0}")]
    Usage(String),
    #[error("{context}: {source}")]
    Model {
        context: String,
        source: partviz_core::Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    fn status(&self) -> i32 {
        match self {
            CliError::Formula(_) | CliError::Usage(_) => 1,
            CliError::Model { .. } | CliError::Io { .. } => 2,
        }
    }
}

fn model_err(context: impl Into<String>) -> impl FnOnce(partviz_core::Error) -> CliError {
    let context = context.into();
    move |source| CliError::Model { context, source }
}

fn controls(args: &ControlArgs) -> Result<FitControls, CliError> {
    let mut c = match (args.alpha, args.mincriterion) {
        (_, Some(m)) => FitControls::with_mincriterion(m),
        (Some(a), None) => FitControls::with_alpha(a),
        (None, None) => Ok(FitControls::default()),
    }
    .map_err(|e| CliError::Usage(e.to_string()))?;
    c.minbucket = args.minbucket as usize;
    c.minsplit = args.minsplit as usize;
    c.maxdepth = args.maxdepth.map(|d| d as usize);
    Ok(c)
}

/// Load the outcome and covariates, discretising the outcome if asked.
fn load(
    path: &Path,
    outcome: &str,
    covariates: &[String],
    categorical: bool,
    cut: Option<&[f64]>,
) -> Result<Dataset, CliError> {
    let context = format!("--data {}", path.display());
    let mut kinds = HashMap::new();
    if categorical {
        kinds.insert(outcome.to_string(), ColumnKind::Categorical);
    }
    let dataset =
        load_csv(path, outcome, covariates, &kinds).map_err(|e| model_err(&context)(e.into()))?;
    let Some(probs) = cut else {
        return Ok(dataset);
    };
    let y = dataset
        .outcome()
        .require_values()
        .map_err(|e| model_err("--cut")(e.into()))?;
    let mut breaks = Vec::with_capacity(probs.len() + 2);
    for p in [0.0].iter().chain(probs).chain([1.0].iter()) {
        breaks.push(quantile(y, *p).map_err(|e| model_err("--cut")(e.into()))?);
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    if breaks.len() < 2 {
        return Err(CliError::Usage(
            "--cut: the outcome is constant, nothing to cut".into(),
        ));
    }
    let column =
        discretize(outcome, y, &breaks, true, 4).map_err(|e| model_err("--cut")(e.into()))?;
    dataset
        .with_outcome(column)
        .map_err(|e| model_err("--cut")(e.into()))
}

/// Dataset for an imported tree: its own outcome and covariates, with a
/// categorical outcome's labels put in the tree's category order.
fn load_for_tree(tree: &Tree, path: &Path, outcome: &OutcomeArgs) -> Result<Dataset, CliError> {
    let names: Vec<String> = tree.covariates().iter().map(|c| c.name.clone()).collect();
    let meta = tree.outcome();
    let categorical = meta.kind == ColumnKind::Categorical && outcome.cut.is_none();
    let dataset = load(
        path,
        &meta.name,
        &names,
        categorical,
        outcome.cut.as_deref(),
    )?;
    if meta.kind != ColumnKind::Categorical {
        return Ok(dataset);
    }
    let context = format!("--data {}", path.display());
    let aligned = dataset
        .outcome()
        .with_label_order(&meta.categories)
        .map_err(|e| model_err(&context)(e.into()))?;
    dataset
        .with_outcome(aligned)
        .map_err(|e| model_err(&context)(e.into()))
}

fn read_tree(path: &Path) -> Result<Tree, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: format!("--tree {}", path.display()),
        source,
    })?;
    import_tree(&text).map_err(|e| model_err(format!("--tree {}", path.display()))(e.into()))
}

fn fit_model(
    data: &Path,
    formula: &str,
    outcome: &OutcomeArgs,
    control_args: &ControlArgs,
) -> Result<(Tree, Dataset), CliError> {
    let (y, xs) = parse_formula(formula)?;
    let controls = controls(control_args)?;
    let dataset = load(data, &y, &xs, outcome.categorical, outcome.cut.as_deref())?;
    let tree = fit(&dataset, &controls).map_err(|e| model_err("fit")(e.into()))?;
    Ok((tree, dataset))
}

fn optional_model(model: &OptionalModelArgs) -> Result<(Tree, Dataset), CliError> {
    match (&model.data, &model.formula) {
        (Some(data), Some(formula)) => fit_model(data, formula, &model.outcome, &model.controls),
        _ => Err(CliError::Usage(
            "--formula and --data are required without --tree".into(),
        )),
    }
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: format!("--out {}", path.display()),
            source,
        }),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "standard output".into(),
                source,
            }),
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Fit { model, out } => {
            let (tree, _) =
                fit_model(&model.data, &model.formula, &model.outcome, &model.controls)?;
            emit(out.as_deref(), &export_json(&tree), stdout)
        }
        Command::Print { tree, model } => {
            let tree = match tree {
                Some(path) => read_tree(&path)?,
                None => optional_model(&model)?.0,
            };
            emit(None, &export_text(&tree), stdout)
        }
        Command::Render {
            tree,
            model,
            render,
            out,
        } => {
            let (tree, dataset) = match tree {
                Some(path) => {
                    let tree = read_tree(&path)?;
                    let data = model
                        .data
                        .as_deref()
                        .ok_or_else(|| CliError::Usage("--tree needs --data to render".into()))?;
                    let dataset = load_for_tree(&tree, data, &model.outcome)?;
                    (tree, dataset)
                }
                None => optional_model(&model)?,
            };
            let scene = render_tree(&tree, &dataset, &render.options())
                .map_err(|e| model_err("render")(e.into()))?;
            let svg = render_svg(
                &scene,
                render.width.unwrap_or(scene.width),
                render.height.unwrap_or(scene.height),
            )
            .map_err(|e| model_err("render")(e.into()))?;
            emit(out.as_deref(), &svg, stdout)
        }
    }
}

/// Run with `args` (program name first) and return the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                1
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    match execute(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.status()
        }
    }
}
