use super::scene::{Anchor, Primitive, Role, Scene, Tick};
use super::{palette, Color, RenderError};
use crate::data::{histogram, kde, percentile_of, ColumnData, Dataset, Histogram};
use crate::treemodel::{subgroup_rows, Interval, SubgroupPath, Summary};

/// Display options for subgroup figures.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    /// Palette family, 1 to 5.
    pub color_type: u8,
    /// Opacity of the constraint bars.
    pub alpha: f64,
    /// Axis titles.
    pub text_title: f64,
    /// Tick labels.
    pub text_axis: f64,
    /// Subplot title line.
    pub text_main: f64,
    /// Labels printed on histogram bins.
    pub text_label: f64,
    /// Constraint bar labels.
    pub text_bar: f64,
    /// Percentile values at bar ends.
    pub text_percentile: f64,
    /// Decimals for printed numbers.
    pub text_round: usize,
    pub add_h_axis: bool,
    pub add_p_axis: bool,
    pub density_line: bool,
    /// Print category (or bin interval) labels on bins instead of bin means.
    pub interval_mode: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            color_type: 1,
            alpha: 0.5,
            text_title: 1.5,
            text_axis: 1.5,
            text_main: 1.5,
            text_label: 1.5,
            text_bar: 1.5,
            text_percentile: 0.7,
            text_round: 1,
            add_h_axis: false,
            add_p_axis: false,
            density_line: true,
            interval_mode: false,
        }
    }
}

impl RenderOptions {
    pub fn validate(&self) -> Result<(), RenderError> {
        if !(1..=5).contains(&self.color_type) {
            return Err(RenderError::ColorType(self.color_type));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(RenderError::Alpha(self.alpha));
        }
        for (name, v) in [
            ("text_title", self.text_title),
            ("text_axis", self.text_axis),
            ("text_main", self.text_main),
            ("text_label", self.text_label),
            ("text_bar", self.text_bar),
            ("text_percentile", self.text_percentile),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(RenderError::TextScale(name, v));
            }
        }
        Ok(())
    }
}

/// Subplot cell size in scene units.
pub const CELL_WIDTH: f64 = 400.0;
pub const CELL_HEIGHT: f64 = 300.0;

const PLOT_LEFT: f64 = 30.0;
const PLOT_RIGHT: f64 = 380.0;
const PLOT_TOP: f64 = 50.0;
const PLOT_BOTTOM: f64 = 235.0;
/// Fraction of the plot height the tallest histogram bar reaches.
const HIST_FILL: f64 = 0.9;
/// Constraint bar height as a fraction of the plot height.
const BAR_FRACTION: f64 = 0.1;

const HIST_FILL_COLOR: Color = Color::rgb(0.85, 0.85, 0.85);
const HIST_STROKE_COLOR: Color = Color::rgb(0.5, 0.5, 0.5);
const TEXT_COLOR: Color = Color::BLACK;

fn fmt(v: f64, decimals: usize) -> String {
    let s = format!("{v:.decimals$}");
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn fraction_below(values: &[f64], x: f64, inclusive: bool) -> f64 {
    let count = values
        .iter()
        .filter(|&&v| if inclusive { v <= x } else { v < x })
        .count();
    count as f64 / values.len() as f64
}

/// Percentile extent in [0, 100] of an interval over a full column.
/// Unbounded ends map to 0 and 100.
pub fn bar_extent(values: &[f64], interval: &Interval) -> Result<(f64, f64), RenderError> {
    if values.is_empty() {
        return Err(crate::data::DataError::Empty.into());
    }
    let from = if interval.lower == f64::NEG_INFINITY {
        0.0
    } else if interval.lower_open {
        percentile_of(values, interval.lower)?
    } else {
        fraction_below(values, interval.lower, false)
    };
    let to = if interval.upper == f64::INFINITY {
        1.0
    } else if interval.upper_open {
        fraction_below(values, interval.upper, false)
    } else {
        percentile_of(values, interval.upper)?
    };
    Ok((100.0 * from, 100.0 * to))
}

fn category_histogram(codes: &[usize], levels: usize) -> Histogram {
    let mut counts = vec![0; levels];
    for &c in codes {
        counts[c] += 1;
    }
    Histogram {
        bin_edges: (0..=levels).map(|i| i as f64 - 0.5).collect(),
        counts,
        bin_means: vec![None; levels],
    }
}

fn interval_label(hist: &Histogram, bin: usize, decimals: usize) -> String {
    let open = if bin == 0 { '[' } else { '(' };
    format!(
        "{open}{},{}]",
        fmt(hist.bin_edges[bin], decimals),
        fmt(hist.bin_edges[bin + 1], decimals)
    )
}

/// Build the figure panel for one terminal subgroup.
///
/// The panel holds the title, a histogram of the subgroup's outcome with a
/// label on each bin, the subgroup mean as a vertical line, an optional
/// density curve, and one horizontal bar per constrained covariate spanning
/// the full-dataset percentiles of its interval. Bars are stacked upwards
/// in the order the covariates first appear on the path.
pub fn subplot_scene(
    path: &SubgroupPath,
    dataset: &Dataset,
    options: &RenderOptions,
) -> Result<Scene, RenderError> {
    options.validate()?;
    let rows = subgroup_rows(dataset, &path.constraints)?;
    if rows.is_empty() {
        return Err(RenderError::EmptySubgroup(path.terminal_id));
    }
    let n = rows.len();
    let decimals = options.text_round;
    let mut scene = Scene::new(
        format!("node-{}", path.terminal_id),
        CELL_WIDTH,
        CELL_HEIGHT,
    );
    let plot_h = PLOT_BOTTOM - PLOT_TOP;

    scene.push(
        Role::Frame,
        Primitive::Rect {
            x: PLOT_LEFT,
            y: PLOT_TOP,
            width: PLOT_RIGHT - PLOT_LEFT,
            height: plot_h,
            fill: None,
            stroke: Some(Color::gray(0.3)),
        },
    );

    // Outcome summary, histogram and per-bin labels.
    let (title, hist, labels, mean, outcome_values) = match dataset.outcome().data() {
        ColumnData::Continuous(y) => {
            let values: Vec<f64> = rows.iter().map(|&r| y[r]).collect();
            let hist = histogram(&values, None)?;
            let mean = values.iter().sum::<f64>() / n as f64;
            let labels: Vec<Option<String>> = (0..hist.bins())
                .map(|b| {
                    if options.interval_mode {
                        (hist.counts[b] > 0).then(|| interval_label(&hist, b, decimals))
                    } else {
                        hist.bin_means[b].map(|m| fmt(m, decimals))
                    }
                })
                .collect();
            let title = format!("mean = {}, n = {n}", fmt(mean, decimals));
            (title, hist, labels, Some(mean), Some(values))
        }
        ColumnData::Categorical { codes, labels } => {
            if !options.interval_mode {
                return Err(RenderError::CategoricalNeedsInterval);
            }
            let sub: Vec<usize> = rows.iter().map(|&r| codes[r]).collect();
            let hist = category_histogram(&sub, labels.len());
            let modal = Summary::Categorical {
                counts: hist.counts.clone(),
            }
            .modal_class()
            .unwrap_or(0);
            let title = format!("mode = {}, n = {n}", labels[modal]);
            let bin_labels = labels.iter().map(|l| Some(l.clone())).collect();
            (title, hist, bin_labels, None, None)
        }
    };

    scene.push(
        Role::Title,
        Primitive::Text {
            x: CELL_WIDTH / 2.0,
            y: 20.0,
            content: title,
            scale: options.text_main,
            anchor: Anchor::Middle,
            color: TEXT_COLOR,
        },
    );

    let lo = hist.bin_edges[0];
    let hi = hist.bin_edges[hist.bins()];
    let value_x = |v: f64| PLOT_LEFT + (v - lo) / (hi - lo) * (PLOT_RIGHT - PLOT_LEFT);

    let density = match (&outcome_values, options.density_line) {
        (Some(values), true) => kde(values).ok(),
        _ => None,
    };
    // Density is drawn on the count scale: f(x) * n * bin width.
    let bin_width = (hi - lo) / hist.bins() as f64;
    let density_scale = n as f64 * bin_width;
    let count_max = hist.counts.iter().copied().max().unwrap_or(1).max(1) as f64;
    let y_max = density
        .as_ref()
        .map(|d| {
            d.grid
                .iter()
                .zip(&d.density)
                .filter(|(x, _)| (lo..=hi).contains(*x))
                .map(|(_, f)| f * density_scale)
                .fold(count_max, f64::max)
        })
        .unwrap_or(count_max);
    let height_of = |count: f64| count / y_max * plot_h * HIST_FILL;

    for (b, label) in labels.iter().enumerate() {
        let x0 = value_x(hist.bin_edges[b]);
        let x1 = value_x(hist.bin_edges[b + 1]);
        let h = height_of(hist.counts[b] as f64);
        scene.push(
            Role::HistogramBin {
                index: b,
                lower: hist.bin_edges[b],
                upper: hist.bin_edges[b + 1],
                count: hist.counts[b],
            },
            Primitive::Rect {
                x: x0,
                y: PLOT_BOTTOM - h,
                width: x1 - x0,
                height: h,
                fill: Some(HIST_FILL_COLOR),
                stroke: Some(HIST_STROKE_COLOR),
            },
        );
        if let Some(label) = label {
            scene.push(
                Role::BinLabel,
                Primitive::Text {
                    x: (x0 + x1) / 2.0,
                    y: PLOT_BOTTOM + 13.0,
                    content: label.clone(),
                    scale: options.text_label,
                    anchor: Anchor::Middle,
                    color: TEXT_COLOR,
                },
            );
        }
    }

    if let Some(d) = &density {
        let points: Vec<(f64, f64)> = d
            .grid
            .iter()
            .zip(&d.density)
            .filter(|(x, _)| (lo..=hi).contains(*x))
            .map(|(&x, &f)| (value_x(x), PLOT_BOTTOM - height_of(f * density_scale)))
            .collect();
        if points.len() >= 2 {
            scene.push(
                Role::DensityCurve,
                Primitive::Polyline {
                    points,
                    stroke: Color::gray(0.2),
                    width: 1.5,
                },
            );
        }
    }

    if let Some(mean) = mean {
        let x = value_x(mean);
        scene.push(
            Role::MeanLine,
            Primitive::Line {
                x1: x,
                y1: PLOT_TOP,
                x2: x,
                y2: PLOT_BOTTOM,
                stroke: Color::BLACK,
                width: 2.0,
            },
        );
    }

    // Constraint bars on the 0-100 percentile scale.
    let colors = palette(options.color_type, path.constraints.len(), options.alpha)?;
    let pct_x = |p: f64| PLOT_LEFT + p / 100.0 * (PLOT_RIGHT - PLOT_LEFT);
    let count = path.constraints.len().max(1) as f64;
    let bar_h = (BAR_FRACTION * plot_h).min(0.8 * plot_h / count);
    let gap = bar_h * 0.15;
    for (i, (constraint, color)) in path.constraints.iter().zip(colors).enumerate() {
        let column = dataset.covariate(&constraint.covariate).ok_or_else(|| {
            crate::treemodel::TreeError::UnknownCovariate(constraint.covariate.clone())
        })?;
        let values = column.require_values()?;
        let (from, to) = bar_extent(values, &constraint.interval)?;
        let y = PLOT_BOTTOM - (i as f64 + 1.0) * (bar_h + gap);
        scene.push(
            Role::ConstraintBar {
                covariate: constraint.covariate.clone(),
                from,
                to,
            },
            Primitive::Rect {
                x: pct_x(from),
                y,
                width: pct_x(to) - pct_x(from),
                height: bar_h,
                fill: Some(color),
                stroke: None,
            },
        );
        scene.push(
            Role::BarLabel,
            Primitive::Text {
                x: (pct_x(from) + pct_x(to)) / 2.0,
                y: y + bar_h * 0.7,
                content: format!(
                    "{} ∈ {}",
                    constraint.covariate,
                    constraint.interval.format(decimals)
                ),
                scale: options.text_bar,
                anchor: Anchor::Middle,
                color: TEXT_COLOR,
            },
        );
        for (p, anchor, show) in [
            (from, Anchor::Start, from > 0.0),
            (to, Anchor::End, to < 100.0),
        ] {
            if show {
                scene.push(
                    Role::PercentileLabel,
                    Primitive::Text {
                        x: pct_x(p) + if anchor == Anchor::Start { 2.0 } else { -2.0 },
                        y: y + bar_h * 0.3,
                        content: format!("{}%", fmt(p, 0)),
                        scale: options.text_percentile,
                        anchor,
                        color: TEXT_COLOR,
                    },
                );
            }
        }
    }

    if options.add_p_axis {
        let ticks = [0.0, 25.0, 50.0, 75.0, 100.0]
            .iter()
            .map(|&p| Tick {
                at: pct_x(p),
                label: fmt(p, 0),
            })
            .collect();
        scene.push(
            Role::Axis,
            Primitive::Axis {
                x1: PLOT_LEFT,
                x2: PLOT_RIGHT,
                y: PLOT_TOP,
                ticks,
                tick_length: -4.0,
                scale: options.text_axis,
                color: TEXT_COLOR,
            },
        );
        scene.push(
            Role::AxisTitle,
            Primitive::Text {
                x: PLOT_RIGHT,
                y: 34.0,
                content: "percentile".into(),
                scale: options.text_title * 0.6,
                anchor: Anchor::End,
                color: TEXT_COLOR,
            },
        );
    }

    if options.add_h_axis {
        let ticks = match outcome_values {
            Some(_) => hist
                .bin_edges
                .iter()
                .map(|&e| Tick {
                    at: value_x(e),
                    label: fmt(e, decimals),
                })
                .collect(),
            None => (0..hist.bins())
                .map(|b| Tick {
                    at: value_x(b as f64),
                    label: hist.counts[b].to_string(),
                })
                .collect(),
        };
        scene.push(
            Role::Axis,
            Primitive::Axis {
                x1: PLOT_LEFT,
                x2: PLOT_RIGHT,
                y: PLOT_BOTTOM + 22.0,
                ticks,
                tick_length: 4.0,
                scale: options.text_axis,
                color: TEXT_COLOR,
            },
        );
        scene.push(
            Role::AxisTitle,
            Primitive::Text {
                x: CELL_WIDTH / 2.0,
                y: CELL_HEIGHT - 8.0,
                content: dataset.outcome().name().to_string(),
                scale: options.text_title * 0.6,
                anchor: Anchor::Middle,
                color: TEXT_COLOR,
            },
        );
    }

    Ok(scene)
}
