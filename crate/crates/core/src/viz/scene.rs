//! Device-independent drawing description.

use super::Color;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    Start,
    Middle,
    End,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tick {
    /// Coordinate along the axis, in scene units.
    pub at: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Primitive {
    Rect {
        x: f64,
        y: f64,
        width: f64,
        height: f64,
        fill: Option<Color>,
        stroke: Option<Color>,
    },
    Line {
        x1: f64,
        y1: f64,
        x2: f64,
        y2: f64,
        stroke: Color,
        width: f64,
    },
    Polyline {
        points: Vec<(f64, f64)>,
        stroke: Color,
        width: f64,
    },
    Text {
        x: f64,
        y: f64,
        content: String,
        scale: f64,
        anchor: Anchor,
        color: Color,
    },
    /// Horizontal axis at height `y` from `x1` to `x2`. Ticks extend by
    /// `tick_length` (negative points up) with labels beyond them.
    Axis {
        x1: f64,
        x2: f64,
        y: f64,
        ticks: Vec<Tick>,
        tick_length: f64,
        scale: f64,
        color: Color,
    },
}

/// What a primitive depicts.
#[derive(Debug, Clone, PartialEq)]
pub enum Role {
    Frame,
    Title,
    HistogramBin {
        index: usize,
        lower: f64,
        upper: f64,
        count: usize,
    },
    BinLabel,
    MeanLine,
    DensityCurve,
    /// Percentile extent of one consolidated constraint, in [0, 100].
    ConstraintBar {
        covariate: String,
        from: f64,
        to: f64,
    },
    BarLabel,
    PercentileLabel,
    Axis,
    AxisTitle,
}

impl Role {
    pub fn class(&self) -> &'static str {
        match self {
            Role::Frame => "frame",
            Role::Title => "title",
            Role::HistogramBin { .. } => "histogram-bin",
            Role::BinLabel => "bin-label",
            Role::MeanLine => "mean-line",
            Role::DensityCurve => "density-curve",
            Role::ConstraintBar { .. } => "constraint-bar",
            Role::BarLabel => "bar-label",
            Role::PercentileLabel => "percentile-label",
            Role::Axis => "axis",
            Role::AxisTitle => "axis-title",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Shape {
    pub role: Role,
    pub primitive: Primitive,
}

/// A nested scene placed at an offset.
#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    pub dx: f64,
    pub dy: f64,
    pub scene: Scene,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Shape(Shape),
    Group(Group),
}

/// Ordered drawing items in a `width x height` unit space, y pointing down.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub name: String,
    pub width: f64,
    pub height: f64,
    pub items: Vec<Item>,
}

impl Scene {
    pub fn new(name: impl Into<String>, width: f64, height: f64) -> Self {
        Self {
            name: name.into(),
            width,
            height,
            items: Vec::new(),
        }
    }

    pub fn push(&mut self, role: Role, primitive: Primitive) {
        self.items.push(Item::Shape(Shape { role, primitive }));
    }

    /// Shapes directly in this scene (not in nested groups).
    pub fn shapes(&self) -> impl Iterator<Item = &Shape> {
        self.items.iter().filter_map(|i| match i {
            Item::Shape(s) => Some(s),
            Item::Group(_) => None,
        })
    }

    pub fn groups(&self) -> impl Iterator<Item = &Group> {
        self.items.iter().filter_map(|i| match i {
            Item::Group(g) => Some(g),
            Item::Shape(_) => None,
        })
    }

    /// Percentile extents `(covariate, from, to)` of the constraint bars.
    pub fn constraint_bars(&self) -> Vec<(&str, f64, f64)> {
        self.shapes()
            .filter_map(|s| match &s.role {
                Role::ConstraintBar {
                    covariate,
                    from,
                    to,
                } => Some((covariate.as_str(), *from, *to)),
                _ => None,
            })
            .collect()
    }

    /// `(lower, upper, count)` per histogram bin, in bin order.
    pub fn histogram_bins(&self) -> Vec<(f64, f64, usize)> {
        self.shapes()
            .filter_map(|s| match s.role {
                Role::HistogramBin {
                    lower,
                    upper,
                    count,
                    ..
                } => Some((lower, upper, count)),
                _ => None,
            })
            .collect()
    }

    pub fn texts(&self, role: &Role) -> Vec<&str> {
        self.shapes()
            .filter(|s| &s.role == role)
            .filter_map(|s| match &s.primitive {
                Primitive::Text { content, .. } => Some(content.as_str()),
                _ => None,
            })
            .collect()
    }
}
