//! Tabular data and the order statistics built on it.

mod discretize;
mod load;
mod stats;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use discretize::{discretize, format_significant};
pub use load::{load_csv, read_csv};
pub use stats::{
    histogram, kde, percentile_of, quantile, DensityCurve, Histogram, KDE_GRID_POINTS,
};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed CSV: {0}")]
    Csv(String),
    #[error("line {line}: expected {expected} fields, found {found}")]
    FieldCount {
        line: u64,
        expected: usize,
        found: usize,
    },
    #[error("column `{0}` not found")]
    MissingColumn(String),
    #[error("duplicate column name `{0}`")]
    DuplicateColumn(String),
    #[error("column name must not be empty")]
    EmptyName,
    #[error("column `{column}`, line {line}: missing value")]
    MissingValue { column: String, line: u64 },
    #[error("column `{column}`, line {line}: cannot parse `{value}` as a finite number")]
    Unparseable {
        column: String,
        line: u64,
        value: String,
    },
    #[error("column `{column}` has {found} rows, expected {expected}")]
    LengthMismatch {
        column: String,
        expected: usize,
        found: usize,
    },
    #[error("column `{column}`: category code {code} out of range for {labels} labels")]
    BadCode {
        column: String,
        code: usize,
        labels: usize,
    },
    #[error("column `{0}` contains a non-finite value")]
    NonFinite(String),
    #[error("dataset needs at least one row")]
    NoRows,
    #[error("dataset needs at least one covariate")]
    NoCovariates,
    #[error("input is empty")]
    Empty,
    #[error("probability {0} outside [0, 1]")]
    Probability(f64),
    #[error("paired outcomes have length {found}, expected {expected}")]
    PairedLength { expected: usize, found: usize },
    #[error("need at least 2 values for a density estimate, got {0}")]
    TooFewValues(usize),
    #[error("values have zero spread")]
    ZeroSpread,
    #[error("breakpoints must be strictly increasing with at least 2 entries")]
    BadBreakpoints,
    #[error("value {value} outside breakpoint range [{low}, {high}]")]
    OutOfRange { value: f64, low: f64, high: f64 },
    #[error("column `{column}`: label `{label}` is not one of the expected categories")]
    UnknownLabel { column: String, label: String },
    #[error("column `{0}` is categorical where a continuous column is required")]
    NotContinuous(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Continuous,
    Categorical,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData {
    Continuous(Vec<f64>),
    /// Codes index into `labels`; label order is the category order.
    Categorical {
        codes: Vec<usize>,
        labels: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    name: String,
    data: ColumnData,
}

impl Column {
    pub fn continuous(name: impl Into<String>, values: Vec<f64>) -> Result<Self, DataError> {
        let name = non_empty(name.into())?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(DataError::NonFinite(name));
        }
        Ok(Self {
            name,
            data: ColumnData::Continuous(values),
        })
    }

    pub fn categorical(
        name: impl Into<String>,
        codes: Vec<usize>,
        labels: Vec<String>,
    ) -> Result<Self, DataError> {
        let name = non_empty(name.into())?;
        if let Some(&code) = codes.iter().find(|&&c| c >= labels.len()) {
            return Err(DataError::BadCode {
                column: name,
                code,
                labels: labels.len(),
            });
        }
        Ok(Self {
            name,
            data: ColumnData::Categorical { codes, labels },
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> ColumnKind {
        match self.data {
            ColumnData::Continuous(_) => ColumnKind::Continuous,
            ColumnData::Categorical { .. } => ColumnKind::Categorical,
        }
    }

    pub fn data(&self) -> &ColumnData {
        &self.data
    }

    pub fn len(&self) -> usize {
        match &self.data {
            ColumnData::Continuous(v) => v.len(),
            ColumnData::Categorical { codes, .. } => codes.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn values(&self) -> Option<&[f64]> {
        match &self.data {
            ColumnData::Continuous(v) => Some(v),
            ColumnData::Categorical { .. } => None,
        }
    }

    pub fn codes(&self) -> Option<&[usize]> {
        match &self.data {
            ColumnData::Categorical { codes, .. } => Some(codes),
            ColumnData::Continuous(_) => None,
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        match &self.data {
            ColumnData::Categorical { labels, .. } => Some(labels),
            ColumnData::Continuous(_) => None,
        }
    }

    /// Continuous values, or an error naming the column.
    pub fn require_values(&self) -> Result<&[f64], DataError> {
        self.values()
            .ok_or_else(|| DataError::NotContinuous(self.name.clone()))
    }

    /// Re-express a categorical column against a given label order.
    pub fn with_label_order(&self, order: &[String]) -> Result<Column, DataError> {
        let (codes, labels) = match &self.data {
            ColumnData::Categorical { codes, labels } => (codes, labels),
            ColumnData::Continuous(_) => return Err(DataError::NotContinuous(self.name.clone())),
        };
        let mut remap = Vec::with_capacity(labels.len());
        for label in labels {
            match order.iter().position(|o| o == label) {
                Some(i) => remap.push(i),
                None => {
                    return Err(DataError::UnknownLabel {
                        column: self.name.clone(),
                        label: label.clone(),
                    })
                }
            }
        }
        Column::categorical(
            self.name.clone(),
            codes.iter().map(|&c| remap[c]).collect(),
            order.to_vec(),
        )
    }
}

fn non_empty(name: String) -> Result<String, DataError> {
    if name.trim().is_empty() {
        Err(DataError::EmptyName)
    } else {
        Ok(name)
    }
}

/// One outcome column and `m >= 1` covariate columns of equal length.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    outcome: Column,
    covariates: Vec<Column>,
    n_rows: usize,
}

impl Dataset {
    pub fn new(outcome: Column, covariates: Vec<Column>) -> Result<Self, DataError> {
        let n_rows = outcome.len();
        if n_rows == 0 {
            return Err(DataError::NoRows);
        }
        if covariates.is_empty() {
            return Err(DataError::NoCovariates);
        }
        let mut seen = std::collections::HashSet::new();
        for col in std::iter::once(&outcome).chain(&covariates) {
            if !seen.insert(col.name()) {
                return Err(DataError::DuplicateColumn(col.name().to_string()));
            }
            if col.len() != n_rows {
                return Err(DataError::LengthMismatch {
                    column: col.name().to_string(),
                    expected: n_rows,
                    found: col.len(),
                });
            }
        }
        Ok(Self {
            outcome,
            covariates,
            n_rows,
        })
    }

    pub fn outcome(&self) -> &Column {
        &self.outcome
    }

    pub fn covariates(&self) -> &[Column] {
        &self.covariates
    }

    pub fn covariate(&self, name: &str) -> Option<&Column> {
        self.covariates.iter().find(|c| c.name() == name)
    }

    pub fn covariate_index(&self, name: &str) -> Option<usize> {
        self.covariates.iter().position(|c| c.name() == name)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    /// Number of covariates.
    pub fn m(&self) -> usize {
        self.covariates.len()
    }

    /// Same covariates, different outcome column.
    pub fn with_outcome(&self, outcome: Column) -> Result<Self, DataError> {
        Self::new(outcome, self.covariates.clone())
    }
}
